//! Experiment orchestration: deterministic cell decomposition, a worker pool,
//! and order-independent aggregation.
//!
//! A sweep is cut into (realization, resample) cells. Every cell derives its
//! own RNG seeds by counter-based mixing from (config seed, cell indices), so
//! the result is independent of scheduling; cells are collected in index order
//! and aggregated with a fixed summation order, which makes the emitted CSV
//! byte-identical for any worker count.

use nalgebra::DMatrix;
use rayon::prelude::*;

use netcontrol::error::{Error, Result};
use netcontrol::gramian::{EnergyMetrics, MixedGramianSolver, StableReachSolver};
use netcontrol::netgen;
use netcontrol::oscillators::{
    build_swing_grid, ModalDecomposition, OscillatorNetwork, StateBasis, SwingGridConfig,
};
use netcontrol::placement;

use crate::config::{ExperimentConfig, ExperimentKind, Topology};
use crate::table::{ResultRow, ResultTable};

/// splitmix64 finalizer.
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Counter-based seed derivation: independent streams for any index tuple.
pub fn derive_seed(base: u64, parts: &[u64]) -> u64 {
    let mut h = mix(base);
    for &p in parts {
        h = mix(h ^ mix(p));
    }
    h
}

/// Key of one aggregate: (preset, strategy, m, metric).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct CellKey {
    pub preset: String,
    pub strategy: String,
    pub m: usize,
    pub metric: String,
}

/// Values produced by one cell; None marks a skip (singular Gramian, timeout).
pub type CellValues = Vec<(CellKey, Option<f64>)>;

pub const MIXED_METRICS: [&str; 4] = ["lambda_min", "trace", "trace_inv", "cond"];

fn metrics_to_pairs(
    preset: &str,
    strategy: &str,
    m: usize,
    metrics: Option<&EnergyMetrics>,
) -> CellValues {
    let vals = metrics.map(|e| [e.lambda_min, e.trace, e.trace_inv, e.cond]);
    MIXED_METRICS
        .iter()
        .enumerate()
        .map(|(i, name)| {
            (
                CellKey {
                    preset: preset.to_string(),
                    strategy: strategy.to_string(),
                    m,
                    metric: name.to_string(),
                },
                vals.map(|v| v[i]),
            )
        })
        .collect()
}

/// Per-metric median over per-draw metric evaluations; a metric is reported
/// only when more than half of the draws produced it.
fn median_metrics(draws: &[Option<EnergyMetrics>]) -> Option<EnergyMetrics> {
    let good: Vec<&EnergyMetrics> = draws.iter().flatten().collect();
    if good.len() * 2 <= draws.len() {
        return None;
    }
    let med = |f: fn(&EnergyMetrics) -> f64| {
        let mut v: Vec<f64> = good.iter().map(|e| f(e)).collect();
        v.sort_by(|a, b| a.partial_cmp(b).unwrap());
        v[v.len() / 2]
    };
    Some(EnergyMetrics {
        lambda_min: med(|e| e.lambda_min),
        trace: med(|e| e.trace),
        trace_inv: med(|e| e.trace_inv),
        cond: med(|e| e.cond),
    })
}

/// Random-matrix experiments (full and sparse-ER ensembles across spectral
/// presets, randomly placed drivers, infinite-horizon mixed-Gramian metrics).
///
/// The same nested random driver sets are reused across presets within a cell,
/// pairing the preset comparison per (realization, resample).
pub fn fig2_cell(cfg: &ExperimentConfig, r: usize, s: usize) -> CellValues {
    let n = cfg.n;
    let perm_seed = derive_seed(cfg.seed, &[1, r as u64, s as u64]);
    let order = placement::random_placement(n, n, perm_seed).expect("m <= n");
    let mut out = Vec::new();
    for (pi, preset) in cfg.presets.iter().enumerate() {
        let a = match cfg.experiment {
            ExperimentKind::FigS1 => netgen::random_matrix_er_resampled(
                n,
                cfg.edge_prob,
                preset.center,
                preset.rho,
                derive_seed(cfg.seed, &[2, pi as u64, r as u64]),
                derive_seed(cfg.seed, &[3, pi as u64, r as u64, s as u64]),
            ),
            _ => netgen::random_matrix_elliptic(
                n,
                preset.center,
                preset.rho,
                derive_seed(cfg.seed, &[2, pi as u64, r as u64, s as u64]),
            ),
        };
        let solver = a.and_then(|a| MixedGramianSolver::with_default_tol(&a));
        for &m in &cfg.m_grid {
            let metrics = solver.as_ref().ok().and_then(|sv| {
                let b = elementary_b(n, &order[..m]);
                sv.metrics(&b).ok()
            });
            out.extend(metrics_to_pairs(&preset.name, "random", m, metrics.as_ref()));
        }
    }
    out
}

fn elementary_b(n: usize, drivers: &[usize]) -> DMatrix<f64> {
    let mut b = DMatrix::<f64>::zeros(n, drivers.len());
    for (j, &d) in drivers.iter().enumerate() {
        b[(d, j)] = 1.0;
    }
    b
}

/// Driver-placement experiment on directed ensembles: ranking strategies
/// against the median of random placements, mixed-Gramian metrics.
pub fn fig3_cell(cfg: &ExperimentConfig, r: usize, s: usize) -> CellValues {
    let n = cfg.n;
    let preset_name = match cfg.topology {
        Topology::Er => format!("er(p={})", cfg.edge_prob),
        Topology::Sf => format!("sf({},{})", cfg.gamma_in, cfg.gamma_out),
        Topology::Full => "full".to_string(),
    };
    let adj = match cfg.topology {
        Topology::Er => netgen::random_matrix_er_resampled(
            n,
            cfg.edge_prob,
            0.0,
            0.0,
            derive_seed(cfg.seed, &[4, r as u64]),
            derive_seed(cfg.seed, &[5, r as u64, s as u64]),
        ),
        Topology::Sf => netgen::sf_adjacency_resampled(
            n,
            cfg.gamma_in,
            cfg.gamma_out,
            derive_seed(cfg.seed, &[4, r as u64]),
            derive_seed(cfg.seed, &[5, r as u64, s as u64]),
        ),
        Topology::Full => netgen::random_matrix_circular(
            n,
            0.0,
            derive_seed(cfg.seed, &[4, r as u64, s as u64]),
        ),
    };
    let mut out = Vec::new();
    let (adj, solver) = match adj {
        Ok(a) => {
            let sv = MixedGramianSolver::with_default_tol(&a);
            (Some(a), sv.ok())
        }
        Err(_) => (None, None),
    };
    for strategy in &cfg.strategies {
        for &m in &cfg.m_grid {
            let metrics = match (strategy.as_str(), &solver, &adj) {
                ("rw", Some(sv), Some(a)) => {
                    let order = placement::rank_by_rw(a);
                    sv.metrics(&elementary_b(n, &order[..m])).ok()
                }
                ("random", Some(sv), Some(_)) => {
                    let draws: Vec<Option<EnergyMetrics>> = (0..cfg.random_sets)
                        .map(|d| {
                            let seed =
                                derive_seed(cfg.seed, &[6, r as u64, s as u64, m as u64, d as u64]);
                            let set = placement::random_placement(n, m, seed).expect("m <= n");
                            sv.metrics(&elementary_b(n, &set)).ok()
                        })
                        .collect();
                    median_metrics(&draws)
                }
                _ => None,
            };
            out.extend(metrics_to_pairs(&preset_name, strategy, m, metrics.as_ref()));
        }
    }
    out
}

/// Node ranking by r_w of the momentum-basis state matrix: position-state rows
/// carry w_in = 1, so the score reduces to the mass-rescaled column sums.
pub fn oscillator_rw_ranking(net: &OscillatorNetwork) -> Result<Vec<usize>> {
    let mut probe = net.clone();
    probe.set_drivers(vec![0]);
    let sys = probe.state_space(StateBasis::Momentum)?;
    let d = netgen::weighted_degrees(&sys.a);
    Ok(placement::rank_by_scores_desc(&d.r_w[..net.n()]))
}

fn modal_strategy_order(
    strategy: &str,
    net: &OscillatorNetwork,
    modal: &ModalDecomposition,
    max_m: usize,
    literal: bool,
) -> Result<Vec<usize>> {
    match strategy {
        "maxmin" => placement::greedy_maxmin(modal, max_m),
        "trace" => placement::exact_trace_placement(modal, max_m),
        "trinv" => placement::greedy_trinv(modal, max_m, literal),
        "rw" => Ok(oscillator_rw_ranking(net)?[..max_m].to_vec()),
        other => Err(Error::invalid(format!("strategy '{other}' not usable here"))),
    }
}

/// Oscillator-ensemble experiment: modal strategies vs random placement on the
/// diagonal modal Gramian (reported per unit horizon).
pub fn fig4_cell(cfg: &ExperimentConfig, r: usize, s: usize) -> CellValues {
    let n = cfg.n;
    let preset_name = format!("osc-er(p={})", cfg.edge_prob);
    let t_f = cfg.t_f.unwrap_or(1.0);
    let net = OscillatorNetwork::random_er_coupled_resampled(
        n,
        cfg.edge_prob,
        cfg.mass_mean,
        cfg.grounding_mean,
        derive_seed(cfg.seed, &[7, r as u64]),
        derive_seed(cfg.seed, &[8, r as u64, s as u64]),
    );
    let modal = net.as_ref().ok().and_then(|nt| nt.modal_decomposition().ok());
    let max_m = cfg.m_grid.iter().copied().max().unwrap_or(1);

    let mut out = Vec::new();
    for strategy in &cfg.strategies {
        let order = match (&net, &modal) {
            (Ok(nt), Some(md)) if strategy != "random" => {
                modal_strategy_order(strategy, nt, md, max_m, cfg.alg2_literal).ok()
            }
            _ => None,
        };
        for &m in &cfg.m_grid {
            let metrics = match (strategy.as_str(), &modal) {
                ("random", Some(md)) => {
                    let draws: Vec<Option<EnergyMetrics>> = (0..cfg.random_sets)
                        .map(|d| {
                            let seed =
                                derive_seed(cfg.seed, &[9, r as u64, s as u64, m as u64, d as u64]);
                            let set = placement::random_placement(n, m, seed).expect("m <= n");
                            placement::subset_metrics(md, &set, t_f).ok()
                        })
                        .collect();
                    median_metrics(&draws)
                }
                (_, Some(md)) => order
                    .as_ref()
                    .and_then(|o| placement::subset_metrics(md, &o[..m], t_f).ok()),
                _ => None,
            };
            out.extend(metrics_to_pairs(&preset_name, strategy, m, metrics.as_ref()));
        }
    }
    out
}

pub const FIG5_METRICS: [&str; 3] = ["lambda_min", "trace", "trace_inv"];
pub const FIG5_WZ_METRICS: [&str; 3] = ["wz_lambda_min_per_tf", "wz_trace_per_tf", "wz_trace_inv_per_tf"];

/// Swing-grid experiment: for each damping scale, finite-horizon reachability
/// Gramian metrics per strategy, plus the normalized modal-Gramian (W_z / t_f)
/// values for comparison.
pub fn fig5_cell(
    cfg: &ExperimentConfig,
    edges: &[(usize, usize, f64)],
    grid_n: usize,
    r: usize,
) -> CellValues {
    let mut out = Vec::new();
    let t_f = cfg.t_f.unwrap_or(50.0);
    let max_m = cfg.m_grid.iter().copied().max().unwrap_or(1);
    for (di, &damping) in cfg.damping.iter().enumerate() {
        let preset_name = format!("damping={damping}");
        let grid_cfg = SwingGridConfig {
            mass_mean: cfg.mass_mean,
            damping_scale: damping,
            grounding: 1e-3,
        };
        let built = build_swing_grid(
            edges,
            grid_n,
            &grid_cfg,
            derive_seed(cfg.seed, &[10, r as u64]),
        );
        let (net, modal, sys_a, solver) = match built {
            Ok(mut nt) => {
                nt.set_drivers(vec![0]);
                let modal = nt.modal_decomposition().ok();
                let sys = nt.state_space(StateBasis::Momentum).ok();
                let solver = sys
                    .as_ref()
                    .and_then(|s| StableReachSolver::new(&s.a, t_f).ok());
                (Some(nt), modal, sys.map(|s| s.a), solver)
            }
            Err(_) => (None, None, None, None),
        };

        for strategy in &cfg.strategies {
            let order = match (&net, &modal) {
                (Some(nt), Some(md)) if strategy != "random" => {
                    modal_strategy_order(strategy, nt, md, max_m, cfg.alg2_literal).ok()
                }
                _ => None,
            };
            for &m in &cfg.m_grid {
                let sets: Vec<Vec<usize>> = if strategy == "random" {
                    (0..cfg.random_sets)
                        .map(|d| {
                            let seed = derive_seed(
                                cfg.seed,
                                &[11, di as u64, r as u64, m as u64, d as u64],
                            );
                            placement::random_placement(grid_n, m, seed).expect("m <= n")
                        })
                        .collect()
                } else {
                    order.iter().map(|o| o[..m].to_vec()).collect()
                };

                // Finite-horizon W_r metrics (median over sets for random).
                let wr_vals: Vec<Option<[f64; 3]>> = sets
                    .iter()
                    .map(|set| {
                        let (solver, a) = match (&solver, &sys_a) {
                            (Some(sv), Some(a)) => (sv, a),
                            _ => return None,
                        };
                        let b = elementary_b(a.nrows(), &set.iter().map(|&v| grid_n + v).collect::<Vec<_>>());
                        let g = solver.gramian(&b).ok()?;
                        let spec = netcontrol::gramian::energy_spectrum(&g);
                        let lmin = spec[0];
                        let lmax = spec[spec.len() - 1];
                        let trace: f64 = spec.iter().sum();
                        let tinv = if lmin > netcontrol::gramian::SINGULAR_REL_TOL * lmax {
                            spec.iter().map(|&l| 1.0 / l).sum()
                        } else {
                            f64::NAN
                        };
                        Some([lmin, trace, tinv])
                    })
                    .collect();
                let wr_med = median_triples(&wr_vals);
                for (i, name) in FIG5_METRICS.iter().enumerate() {
                    let v = wr_med.map(|t| t[i]).filter(|v| v.is_finite());
                    out.push((
                        CellKey {
                            preset: preset_name.clone(),
                            strategy: strategy.clone(),
                            m,
                            metric: name.to_string(),
                        },
                        v,
                    ));
                }

                // Normalized modal Gramian, per unit t_f.
                let wz_vals: Vec<Option<[f64; 3]>> = sets
                    .iter()
                    .map(|set| {
                        let md = modal.as_ref()?;
                        let e = placement::subset_metrics(md, set, 1.0).ok()?;
                        Some([e.lambda_min, e.trace, e.trace_inv])
                    })
                    .collect();
                let wz_med = median_triples(&wz_vals);
                for (i, name) in FIG5_WZ_METRICS.iter().enumerate() {
                    out.push((
                        CellKey {
                            preset: preset_name.clone(),
                            strategy: strategy.clone(),
                            m,
                            metric: name.to_string(),
                        },
                        wz_med.map(|t| t[i]),
                    ));
                }
            }
        }
    }
    out
}

fn median_triples(vals: &[Option<[f64; 3]>]) -> Option<[f64; 3]> {
    let good: Vec<&[f64; 3]> = vals.iter().flatten().collect();
    if good.len() * 2 <= vals.len() {
        return None;
    }
    let mut out = [0.0; 3];
    for (i, slot) in out.iter_mut().enumerate() {
        let mut v: Vec<f64> = good.iter().map(|t| t[i]).collect();
        v.sort_by(|a, b| a.partial_cmp(b).unwrap());
        *slot = v[v.len() / 2];
    }
    Some(out)
}

/// All aggregate keys a cell can produce, used to account for timed-out cells.
fn expected_keys(cfg: &ExperimentConfig) -> Vec<CellKey> {
    let mut keys = Vec::new();
    match cfg.experiment {
        ExperimentKind::Fig2 | ExperimentKind::FigS1 => {
            for p in &cfg.presets {
                for &m in &cfg.m_grid {
                    for metric in MIXED_METRICS {
                        keys.push(CellKey {
                            preset: p.name.clone(),
                            strategy: "random".into(),
                            m,
                            metric: metric.into(),
                        });
                    }
                }
            }
        }
        ExperimentKind::Fig3 | ExperimentKind::Fig4 => {
            let preset = match (cfg.experiment, cfg.topology) {
                (ExperimentKind::Fig4, _) => format!("osc-er(p={})", cfg.edge_prob),
                (_, Topology::Er) => format!("er(p={})", cfg.edge_prob),
                (_, Topology::Sf) => format!("sf({},{})", cfg.gamma_in, cfg.gamma_out),
                (_, Topology::Full) => "full".to_string(),
            };
            for strategy in &cfg.strategies {
                for &m in &cfg.m_grid {
                    for metric in MIXED_METRICS {
                        keys.push(CellKey {
                            preset: preset.clone(),
                            strategy: strategy.clone(),
                            m,
                            metric: metric.into(),
                        });
                    }
                }
            }
        }
        ExperimentKind::Fig5 => {
            for &d in &cfg.damping {
                for strategy in &cfg.strategies {
                    for &m in &cfg.m_grid {
                        for metric in FIG5_METRICS.iter().chain(FIG5_WZ_METRICS.iter()) {
                            keys.push(CellKey {
                                preset: format!("damping={d}"),
                                strategy: strategy.clone(),
                                m,
                                metric: (*metric).to_string(),
                            });
                        }
                    }
                }
            }
        }
    }
    keys
}

fn run_cell(
    cfg: &ExperimentConfig,
    grid: Option<&(Vec<(usize, usize, f64)>, usize)>,
    r: usize,
    s: usize,
) -> CellValues {
    match cfg.experiment {
        ExperimentKind::Fig2 | ExperimentKind::FigS1 => fig2_cell(cfg, r, s),
        ExperimentKind::Fig3 => fig3_cell(cfg, r, s),
        ExperimentKind::Fig4 => fig4_cell(cfg, r, s),
        ExperimentKind::Fig5 => {
            let (edges, n) = grid.expect("fig5 grid prepared");
            fig5_cell(cfg, edges, *n, r)
        }
    }
}

/// Run the full sweep. Deterministic for a fixed config and seed: the CSV is
/// byte-identical regardless of the worker count (unless a per-cell timeout is
/// enabled, which trades that guarantee for bounded latency).
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ResultTable> {
    cfg.validate()?;
    for strategy in &cfg.strategies {
        let known = ["rw", "random", "maxmin", "trace", "trinv"];
        if !known.contains(&strategy.as_str()) {
            return Err(Error::invalid(format!("unknown strategy '{strategy}'")));
        }
        if matches!(cfg.experiment, ExperimentKind::Fig2 | ExperimentKind::FigS1)
            && strategy != "random"
        {
            return Err(Error::invalid(
                "fig2/figS1 use randomly placed drivers only (strategies = random)",
            ));
        }
        if cfg.experiment == ExperimentKind::Fig3 && !["rw", "random"].contains(&strategy.as_str())
        {
            return Err(Error::invalid(
                "fig3 supports strategies rw and random (modal strategies need oscillators)",
            ));
        }
    }

    let grid: Option<(Vec<(usize, usize, f64)>, usize)> = match cfg.experiment {
        ExperimentKind::Fig5 => Some(match &cfg.grid_file {
            Some(path) => {
                let ing = crate::ingest::ingest_grid(std::path::Path::new(path))?;
                (ing.edges, ing.n)
            }
            None => {
                let edges = netgen::random_connected_graph(
                    cfg.grid_nodes,
                    cfg.grid_edges,
                    derive_seed(cfg.seed, &[12]),
                )?;
                (edges, cfg.grid_nodes)
            }
        }),
        _ => None,
    };
    if cfg.experiment == ExperimentKind::Fig5 {
        let gn = grid.as_ref().map(|g| g.1).unwrap_or(0);
        for &m in &cfg.m_grid {
            if m > gn {
                return Err(Error::invalid(format!("m={m} exceeds grid node count {gn}")));
            }
        }
    }

    let cells: Vec<(usize, usize)> = (0..cfg.realizations)
        .flat_map(|r| (0..cfg.resamples).map(move |s| (r, s)))
        .collect();

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| Error::numerical(format!("worker pool: {e}")))?;

    let outputs: Vec<CellValues> = if cfg.cell_timeout_secs == 0 {
        pool.install(|| {
            cells
                .par_iter()
                .map(|&(r, s)| run_cell(cfg, grid.as_ref(), r, s))
                .collect()
        })
    } else {
        let timeout = std::time::Duration::from_secs(cfg.cell_timeout_secs);
        let fallback: CellValues = expected_keys(cfg).into_iter().map(|k| (k, None)).collect();
        pool.install(|| {
            cells
                .par_iter()
                .map(|&(r, s)| {
                    let (tx, rx) = std::sync::mpsc::channel();
                    let cfg = cfg.clone();
                    let grid = grid.clone();
                    std::thread::spawn(move || {
                        let _ = tx.send(run_cell(&cfg, grid.as_ref(), r, s));
                    });
                    rx.recv_timeout(timeout).unwrap_or_else(|_| fallback.clone())
                })
                .collect()
        })
    };

    // Aggregate in cell order.
    let mut agg: std::collections::BTreeMap<CellKey, (Vec<f64>, usize)> =
        std::collections::BTreeMap::new();
    for cell in &outputs {
        for (key, value) in cell {
            let entry = agg.entry(key.clone()).or_default();
            match value {
                Some(v) => entry.0.push(*v),
                None => entry.1 += 1,
            }
        }
    }

    let mut table = ResultTable::default();
    for (key, (values, skipped)) in agg {
        let samples = values.len();
        let mean = if samples > 0 {
            values.iter().sum::<f64>() / samples as f64
        } else {
            f64::NAN
        };
        let std = if samples > 1 {
            (values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (samples - 1) as f64)
                .sqrt()
        } else {
            0.0
        };
        table.rows.push(ResultRow {
            experiment: cfg.experiment.name().to_string(),
            preset: key.preset,
            strategy: key.strategy,
            m: key.m,
            metric: key.metric,
            mean,
            std,
            samples,
            skipped,
            realizations: cfg.realizations,
            resamples: cfg.resamples,
            seed: cfg.seed,
        });
    }
    table.sort();
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::ExperimentConfig;

    #[test]
    fn seeds_are_stable_and_distinct() {
        let a = derive_seed(1, &[2, 3]);
        let b = derive_seed(1, &[2, 3]);
        let c = derive_seed(1, &[3, 2]);
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_ne!(derive_seed(1, &[0]), derive_seed(1, &[0, 0]));
    }

    #[test]
    fn smoke_fig2_row_count() {
        let mut cfg = ExperimentConfig::default();
        cfg.set("experiment", "fig2").unwrap();
        cfg.set("n", "10").unwrap();
        cfg.set("m", "2,4").unwrap();
        cfg.set("strategies", "random").unwrap();
        cfg.set("realizations", "1").unwrap();
        cfg.set("resamples", "1").unwrap();
        cfg.set("presets", "blue,cyan").unwrap();
        let table = run_experiment(&cfg).unwrap();
        // |presets| * |m| * |metrics| rows, one strategy
        assert_eq!(table.rows.len(), 2 * 2 * 4);
        for row in &table.rows {
            assert_eq!(row.samples + row.skipped, 1);
        }
    }

    #[test]
    fn workers_do_not_change_output() {
        let mut cfg = ExperimentConfig::default();
        cfg.set("experiment", "fig4").unwrap();
        cfg.set("n", "12").unwrap();
        cfg.set("p", "0.5").unwrap();
        cfg.set("m", "2,3").unwrap();
        cfg.set("strategies", "maxmin,trace,random").unwrap();
        cfg.set("realizations", "3").unwrap();
        cfg.set("resamples", "2").unwrap();
        cfg.set("random_sets", "5").unwrap();
        cfg.set("workers", "1").unwrap();
        let t1 = run_experiment(&cfg).unwrap();
        cfg.set("workers", "4").unwrap();
        let t4 = run_experiment(&cfg).unwrap();
        assert_eq!(t1.to_csv(), t4.to_csv());
    }
}
