//! Command-line interface for control-energy analysis of linear networks.
//!
//! Exit codes: 0 success, 2 invalid input, 3 numerical failure, 4 singular
//! Gramian.

use std::path::PathBuf;

use clap::{Parser, Subcommand};
use nalgebra::{DMatrix, DVector};

use netcontrol::control;
use netcontrol::error::Error;
use netcontrol::gramian::{self, GramianKind, LinearSystem};
use netcontrol::netgen::{self, edgelist};
use netcontrol::oscillators::{OscillatorNetwork, StateBasis};
use netcontrol::placement;

use netcontrol_cli::config::{ExperimentConfig, Preset};
use netcontrol_cli::ingest::ingest_grid;
use netcontrol_cli::runner::{oscillator_rw_ranking, run_experiment};

/// Studied indegree tail exponent (coincidentally close to pi).
#[allow(clippy::approx_constant)]
const DEFAULT_GAMMA_IN: f64 = 3.14;

#[derive(Parser)]
#[command(
    name = "netcontrol",
    about = "Control energy of linear network dynamics: Gramians, minimum-energy control, driver placement"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate an ensemble adjacency matrix and write it as an edge list.
    Gen {
        #[arg(long, default_value_t = 100)]
        n: usize,
        /// Spectral preset (blue|red|yellow|violet|green|cyan) for matrix ensembles.
        #[arg(long, default_value = "blue")]
        preset: String,
        /// full | er | sf
        #[arg(long, default_value = "full")]
        topology: String,
        /// Edge probability for er.
        #[arg(long, default_value_t = 0.05)]
        p: f64,
        /// Indegree tail exponent for sf.
        #[arg(long, default_value_t = DEFAULT_GAMMA_IN)]
        gamma_in: f64,
        #[arg(long, default_value_t = 2.87)]
        gamma_out: f64,
        /// Repair strong connectivity after generation (sf graphs).
        #[arg(long)]
        repair: bool,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Compute a Gramian and its energy metrics for a system read from an edge list.
    Gramian {
        /// Edge-list file defining the state matrix.
        #[arg(long)]
        input: PathBuf,
        /// Comma-separated driver nodes; or use --m/--strategy.
        #[arg(long)]
        drivers: Option<String>,
        /// Number of drivers when selecting by strategy.
        #[arg(long)]
        m: Option<usize>,
        /// rw | random (used with --m).
        #[arg(long, default_value = "random")]
        strategy: String,
        /// reach | ctrl | mixed
        #[arg(long, default_value = "mixed")]
        kind: String,
        /// Finite horizon; omit for the infinite-horizon Gramian.
        #[arg(long)]
        tf: Option<f64>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Write metric,value rows to this CSV file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Synthesize the minimum-energy transfer control and verify it by simulation.
    Control {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        drivers: String,
        /// Comma-separated initial state, or "zero".
        #[arg(long, default_value = "zero")]
        x0: String,
        /// Comma-separated final state.
        #[arg(long)]
        xf: String,
        #[arg(long)]
        tf: f64,
        #[arg(long, default_value_t = 2000)]
        steps: usize,
    },
    /// Run a driver-placement strategy and print the selected nodes.
    Place {
        #[arg(long)]
        input: PathBuf,
        /// rw | random | maxmin | trace | trinv | modepower
        #[arg(long)]
        strategy: String,
        #[arg(long)]
        m: usize,
        /// Interpret the edge list as an oscillator coupling graph (needed by
        /// the modal strategies).
        #[arg(long)]
        oscillator: bool,
        #[arg(long, default_value_t = 10.0)]
        mass_mean: f64,
        #[arg(long, default_value_t = 1.0)]
        grounding_mean: f64,
        /// Target mode for modepower.
        #[arg(long, default_value_t = 0)]
        mode_k: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Use the literal argmax reading of the trace-inverse greedy step.
        #[arg(long)]
        alg2_literal: bool,
    },
    /// Run a full experiment sweep and emit a CSV table.
    Experiment {
        /// Flat key=value config file; flags override file values.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        n: Option<usize>,
        /// Comma-separated driver counts.
        #[arg(long)]
        m: Option<String>,
        #[arg(long)]
        tf: Option<String>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        workers: Option<usize>,
        #[arg(long)]
        preset: Option<String>,
        #[arg(long)]
        strategy: Option<String>,
        #[arg(long)]
        alg2_literal: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Validate a power-grid edge-list file.
    Ingest {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        expect_nodes: Option<usize>,
        #[arg(long)]
        expect_edges: Option<usize>,
    },
}

fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => {}
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(exit_code(&e));
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidInput(_)
        | Error::Parse { .. }
        | Error::NotStable(_)
        | Error::AxisEigenvalue { .. }
        | Error::ZeroFrequency { .. }
        | Error::NonProportionalDamping { .. }
        | Error::InfeasibleCoverage(_) => 2,
        Error::NumericalFailure(_) | Error::HorizonOverflow { .. } => 3,
        Error::SingularGramian { .. } | Error::UncontrollableSubsystem { .. } => 4,
    }
}

fn parse_indices(text: &str) -> Result<Vec<usize>, Error> {
    text.split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|e| Error::invalid(format!("bad node index '{t}': {e}")))
        })
        .collect()
}

fn parse_vector(text: &str, n: usize) -> Result<DVector<f64>, Error> {
    if text == "zero" {
        return Ok(DVector::zeros(n));
    }
    let vals = text
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|e| Error::invalid(format!("bad number '{t}': {e}")))
        })
        .collect::<Result<Vec<f64>, Error>>()?;
    if vals.len() != n {
        return Err(Error::invalid(format!(
            "state vector has {} entries, system needs {n}",
            vals.len()
        )));
    }
    Ok(DVector::from_vec(vals))
}

fn load_adjacency(path: &std::path::Path) -> Result<DMatrix<f64>, Error> {
    let ing = ingest_grid(path)?;
    edgelist::adjacency_from_edges(ing.n, &ing.edges)
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Gen {
            n,
            preset,
            topology,
            p,
            gamma_in,
            gamma_out,
            repair,
            seed,
            out,
        } => {
            let preset = Preset::by_name(&preset)
                .ok_or_else(|| Error::invalid(format!("unknown preset '{preset}'")))?;
            let mut a = match topology.as_str() {
                "full" => netgen::random_matrix_elliptic(n, preset.center, preset.rho, seed)?,
                "er" => netgen::random_matrix_er(n, p, preset.center, preset.rho, seed)?,
                "sf" => netgen::random_graph_sf(n, gamma_in, gamma_out, seed)?,
                other => return Err(Error::invalid(format!("unknown topology '{other}'"))),
            };
            if repair {
                a = netgen::repair_strong_connectivity(&a, seed)?;
            }
            edgelist::write_edge_list(&out, &a)?;
            let nnz = a.iter().filter(|&&x| x != 0.0).count();
            println!("wrote {} ({} nodes, {} entries)", out.display(), n, nnz);
            Ok(())
        }
        Command::Gramian {
            input,
            drivers,
            m,
            strategy,
            kind,
            tf,
            seed,
            out,
        } => {
            let a = load_adjacency(&input)?;
            let n = a.nrows();
            let drivers: Vec<usize> = match (drivers, m) {
                (Some(text), _) => parse_indices(&text)?,
                (None, Some(m)) => match strategy.as_str() {
                    "rw" => placement::rank_by_rw(&a)[..m.min(n)].to_vec(),
                    "random" => placement::random_placement(n, m, seed)?,
                    other => {
                        return Err(Error::invalid(format!(
                            "strategy '{other}' not available here (rw|random)"
                        )))
                    }
                },
                (None, None) => return Err(Error::invalid("need --drivers or --m")),
            };
            let sys = LinearSystem::with_drivers(a, &drivers)?;
            let g = match (kind.as_str(), tf) {
                ("reach", Some(t)) => gramian::finite_gramian(&sys, t, GramianKind::Reach)?,
                ("ctrl", Some(t)) => gramian::finite_gramian(&sys, t, GramianKind::Ctrl)?,
                ("reach", None) => gramian::infinite_gramian(&sys, GramianKind::Reach)?,
                ("ctrl", None) => gramian::infinite_gramian(&sys, GramianKind::Ctrl)?,
                ("mixed", Some(t)) => gramian::mixed_gramian_finite(&sys, t)?.0,
                ("mixed", None) => gramian::mixed_gramian_infinite(&sys)?,
                (other, _) => {
                    return Err(Error::invalid(format!(
                        "unknown Gramian kind '{other}' (reach|ctrl|mixed)"
                    )))
                }
            };
            let metrics = gramian::energy_metrics(&g)?;
            println!("drivers: {drivers:?}");
            println!("lambda_min: {}", metrics.lambda_min);
            println!("trace: {}", metrics.trace);
            println!("trace_inv: {}", metrics.trace_inv);
            println!("cond: {}", metrics.cond);
            if let Some(path) = out {
                let text = format!(
                    "metric,value\nlambda_min,{}\ntrace,{}\ntrace_inv,{}\ncond,{}\n",
                    metrics.lambda_min, metrics.trace, metrics.trace_inv, metrics.cond
                );
                std::fs::write(&path, text)
                    .map_err(|e| Error::invalid(format!("cannot write {}: {e}", path.display())))?;
            }
            Ok(())
        }
        Command::Control {
            input,
            drivers,
            x0,
            xf,
            tf,
            steps,
        } => {
            let a = load_adjacency(&input)?;
            let n = a.nrows();
            let drivers = parse_indices(&drivers)?;
            let sys = LinearSystem::with_drivers(a, &drivers)?;
            let x_o = parse_vector(&x0, n)?;
            let x_f = parse_vector(&xf, n)?;
            let task = control::TransferTask::new(x_o.clone(), x_f.clone(), tf)?;
            let law = control::min_energy_control(&sys, &task)?;
            let predicted = law.energy();
            let samples = law.sample_grid(steps)?;
            let traj = control::simulate_sampled(&sys, &samples, &x_o, tf)?;
            let endpoint_err = (traj.final_state() - &x_f).norm();
            let measured = control::input_energy(&samples, tf);
            println!("predicted_energy: {predicted}");
            println!("measured_energy: {measured}");
            println!("endpoint_error: {endpoint_err:e}");
            Ok(())
        }
        Command::Place {
            input,
            strategy,
            m,
            oscillator,
            mass_mean,
            grounding_mean,
            mode_k,
            seed,
            alg2_literal,
        } => {
            let adj = load_adjacency(&input)?;
            let n = adj.nrows();
            let selected: Vec<usize> = if oscillator {
                let net = oscillator_from_coupling(&adj, mass_mean, grounding_mean, seed)?;
                let modal = net.modal_decomposition()?;
                match strategy.as_str() {
                    "maxmin" => placement::greedy_maxmin(&modal, m)?,
                    "trace" => placement::exact_trace_placement(&modal, m)?,
                    "trinv" => placement::greedy_trinv(&modal, m, alg2_literal)?,
                    "modepower" => placement::mode_power_placement(&modal, m, mode_k)?,
                    "rw" => oscillator_rw_ranking(&net)?[..m].to_vec(),
                    "random" => placement::random_placement(n, m, seed)?,
                    other => return Err(Error::invalid(format!("unknown strategy '{other}'"))),
                }
            } else {
                match strategy.as_str() {
                    "rw" => placement::rank_by_rw(&adj)[..m.min(n)].to_vec(),
                    "random" => placement::random_placement(n, m, seed)?,
                    other => {
                        return Err(Error::invalid(format!(
                            "strategy '{other}' needs --oscillator"
                        )))
                    }
                }
            };
            println!(
                "{}",
                selected.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
            );
            Ok(())
        }
        Command::Experiment {
            config,
            n,
            m,
            tf,
            seed,
            workers,
            preset,
            strategy,
            alg2_literal,
            out,
        } => {
            let mut cfg = match config {
                Some(path) => ExperimentConfig::from_file(&path)?,
                None => ExperimentConfig::default(),
            };
            if let Some(n) = n {
                cfg.set("n", &n.to_string())?;
            }
            if let Some(m) = m {
                cfg.set("m", &m)?;
            }
            if let Some(tf) = tf {
                cfg.set("tf", &tf)?;
            }
            if let Some(seed) = seed {
                cfg.set("seed", &seed.to_string())?;
            }
            if let Some(workers) = workers {
                cfg.set("workers", &workers.to_string())?;
            }
            if let Some(preset) = preset {
                cfg.set("presets", &preset)?;
            }
            if let Some(strategy) = strategy {
                cfg.set("strategies", &strategy)?;
            }
            if alg2_literal {
                cfg.set("alg2_literal", "true")?;
            }
            if let Some(out) = out {
                cfg.out = Some(out.display().to_string());
            }
            for (k, v) in cfg.describe() {
                eprintln!("# {k} = {v}");
            }
            let table = run_experiment(&cfg)?;
            match &cfg.out {
                Some(path) => {
                    table.write_csv(std::path::Path::new(path))?;
                    eprintln!("# wrote {} rows to {path}", table.rows.len());
                }
                None => print!("{}", table.to_csv()),
            }
            Ok(())
        }
        Command::Ingest {
            input,
            expect_nodes,
            expect_edges,
        } => {
            let r = ingest_grid(&input)?;
            if let Some(n) = expect_nodes {
                if n != r.n {
                    return Err(Error::invalid(format!("expected {n} nodes, found {}", r.n)));
                }
            }
            if let Some(e) = expect_edges {
                if e != r.edges.len() {
                    return Err(Error::invalid(format!(
                        "expected {e} edges, found {}",
                        r.edges.len()
                    )));
                }
            }
            println!("nodes: {}", r.n);
            println!("edges: {}", r.edges.len());
            println!("duplicates_merged: {}", r.duplicate_count);
            if r.id_map.iter().enumerate().any(|(i, &orig)| i != orig) {
                println!("id_compaction: remapped (original ids were sparse)");
            }
            Ok(())
        }
    }
}

/// Interpret an (undirected or directed) edge list as an oscillator coupling
/// graph: Laplacian from |weights|, masses and grounding drawn around the
/// configured means.
fn oscillator_from_coupling(
    adj: &DMatrix<f64>,
    mass_mean: f64,
    grounding_mean: f64,
    seed: u64,
) -> Result<OscillatorNetwork, Error> {
    use rand::prelude::*;
    let n = adj.nrows();
    let mut lap = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        for j in (i + 1)..n {
            let w = adj[(i, j)].abs().max(adj[(j, i)].abs());
            if w > 0.0 {
                lap[(i, j)] = -w;
                lap[(j, i)] = -w;
                lap[(i, i)] += w;
                lap[(j, j)] += w;
            }
        }
    }
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let masses = DVector::from_fn(n, |_, _| mass_mean * (0.5 + rng.random::<f64>()));
    let grounding = DVector::from_fn(n, |_, _| grounding_mean * (0.5 + rng.random::<f64>()));
    OscillatorNetwork::new(masses, grounding, lap, DMatrix::zeros(n, n), Vec::new())
}

// Ensure StateBasis stays referenced even when only the runner uses it.
#[allow(dead_code)]
fn _basis_witness() -> StateBasis {
    StateBasis::Momentum
}
