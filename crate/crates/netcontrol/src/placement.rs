//! Driver-node selection strategies and their evaluation.
//!
//! The modal strategies all work on per-node contribution vectors derived from
//! the modal decomposition: selecting node i adds its nonnegative vector y^i to
//! the (diagonal) modal Gramian, so the greedy and exact selections below reduce
//! to combinatorial optimization over sums of fixed vectors. Ties are always
//! broken toward the smaller node index, which makes every strategy
//! deterministic and permutation-equivariant.

use nalgebra::DVector;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::gramian::EnergyMetrics;
use crate::netgen::weighted_degrees;
use crate::oscillators::ModalDecomposition;

/// Per-candidate-node contribution vectors to the diagonal modal Gramian.
#[derive(Debug, Clone)]
pub struct ModalContribution {
    /// One nonnegative vector per node.
    pub vectors: Vec<DVector<f64>>,
}

impl ModalContribution {
    /// Full 2n-component family: node i contributes
    /// (1/M_i²) [(ψ^1_i)²/(2ω_1²) … (ψ^n_i)²/(2ω_n²), (ψ^1_i)²/2 … (ψ^n_i)²/2].
    /// These are exactly the diagonal entries of the modal Gramian per unit t_f.
    pub fn full(modal: &ModalDecomposition) -> Result<Self> {
        let n = modal.omega.len();
        check_frequencies(modal)?;
        let mut vectors = Vec::with_capacity(n);
        for i in 0..n {
            let mi2 = modal.masses[i] * modal.masses[i];
            let mut y = DVector::zeros(2 * n);
            for k in 0..n {
                let psi = modal.psi[(i, k)];
                let base = psi * psi / (2.0 * mi2);
                y[k] = base / (modal.omega[k] * modal.omega[k]);
                y[n + k] = base;
            }
            vectors.push(y);
        }
        Ok(Self { vectors })
    }

    /// Folded n-component family with weights 1/(2(1+ω_k²)): the reciprocal sum
    /// over these components is proportional to tr(W_z^{-1}).
    pub fn folded(modal: &ModalDecomposition) -> Result<Self> {
        let n = modal.omega.len();
        check_frequencies(modal)?;
        let mut vectors = Vec::with_capacity(n);
        for i in 0..n {
            let mi2 = modal.masses[i] * modal.masses[i];
            let mut y = DVector::zeros(n);
            for k in 0..n {
                let psi = modal.psi[(i, k)];
                y[k] = psi * psi / (2.0 * mi2 * (1.0 + modal.omega[k] * modal.omega[k]));
            }
            vectors.push(y);
        }
        Ok(Self { vectors })
    }
}

fn check_frequencies(modal: &ModalDecomposition) -> Result<()> {
    let omega_max = modal.omega.iter().fold(0.0f64, |a, &w| a.max(w));
    for (i, &w) in modal.omega.iter().enumerate() {
        if w <= 1e-12 * omega_max.max(1.0) {
            return Err(Error::ZeroFrequency { mode: i, omega: w });
        }
    }
    Ok(())
}

/// Full node ranking by descending r_w = w_out/w_in (infinite ratios first,
/// ties toward the smaller index).
pub fn rank_by_rw(adj: &nalgebra::DMatrix<f64>) -> Vec<usize> {
    let d = weighted_degrees(adj);
    rank_by_scores_desc(&d.r_w)
}

/// Indices sorted by descending score, ascending index on ties. NaNs rank last.
pub fn rank_by_scores_desc(scores: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..scores.len()).collect();
    idx.sort_by(|&a, &b| {
        let sa = if scores[a].is_nan() { f64::NEG_INFINITY } else { scores[a] };
        let sb = if scores[b].is_nan() { f64::NEG_INFINITY } else { scores[b] };
        sb.partial_cmp(&sa).unwrap().then(a.cmp(&b))
    });
    idx
}

/// Uniform sample of m nodes without replacement.
pub fn random_placement(n: usize, m: usize, seed: u64) -> Result<Vec<usize>> {
    if m > n {
        return Err(Error::invalid("random placement: m > n"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pool: Vec<usize> = (0..n).collect();
    for k in 0..m {
        let pick = rng.random_range(k..n);
        pool.swap(k, pick);
    }
    pool.truncate(m);
    Ok(pool)
}

/// Greedy max-min driver selection: at each step add the node maximizing the
/// minimum component of the accumulated contribution vector. Heuristic for
/// maximizing lambda_min of the modal Gramian.
pub fn greedy_maxmin(modal: &ModalDecomposition, m: usize) -> Result<Vec<usize>> {
    let contrib = ModalContribution::full(modal)?;
    let n = contrib.vectors.len();
    if m > n {
        return Err(Error::invalid("greedy placement: m > n"));
    }
    let dim = 2 * n;
    let mut acc = DVector::<f64>::zeros(dim);
    let mut chosen = Vec::with_capacity(m);
    let mut available = vec![true; n];
    for _ in 0..m {
        let mut best: Option<(usize, f64)> = None;
        for j in 0..n {
            if !available[j] {
                continue;
            }
            let val = (0..dim)
                .map(|k| acc[k] + contrib.vectors[j][k])
                .fold(f64::INFINITY, f64::min);
            if best.map_or(true, |(_, bv)| val > bv) {
                best = Some((j, val));
            }
        }
        let (j, _) = best.expect("candidates remain");
        acc += &contrib.vectors[j];
        available[j] = false;
        chosen.push(j);
    }
    Ok(chosen)
}

/// Per-node additive scores of the trace objective; selecting the m largest is
/// the exact optimum of the linear program by separability.
pub fn trace_scores(modal: &ModalDecomposition) -> Result<Vec<f64>> {
    let folded = ModalContribution::folded(modal)?;
    Ok(folded.vectors.iter().map(|y| y.sum()).collect())
}

/// Exact trace-optimal placement: the m nodes with the largest trace scores.
pub fn exact_trace_placement(modal: &ModalDecomposition, m: usize) -> Result<Vec<usize>> {
    let scores = trace_scores(modal)?;
    if m > scores.len() {
        return Err(Error::invalid("trace placement: m > n"));
    }
    Ok(rank_by_scores_desc(&scores)[..m].to_vec())
}

/// Greedy minimization of tr(W_z^{-1}): at each step add the node minimizing
/// sum_k 1/(y^s + y^j)_k over the folded components. `literal` flips the
/// direction to the argmax printed in the source heuristic (kept only for
/// auditability; it maximizes the energy instead).
pub fn greedy_trinv(modal: &ModalDecomposition, m: usize, literal: bool) -> Result<Vec<usize>> {
    let contrib = ModalContribution::folded(modal)?;
    let n = contrib.vectors.len();
    if m > n {
        return Err(Error::invalid("greedy placement: m > n"));
    }
    let dim = contrib.vectors[0].len();
    let mut acc = DVector::<f64>::zeros(dim);
    let mut chosen = Vec::with_capacity(m);
    let mut available = vec![true; n];
    for _ in 0..m {
        // Candidates compare by (number of uncovered components, reciprocal sum
        // over covered ones); fewer uncovered always wins so coverage comes
        // first when the objective is still infinite.
        let mut best: Option<(usize, usize, f64)> = None;
        for j in 0..n {
            if !available[j] {
                continue;
            }
            let mut zeros = 0usize;
            let mut sum = 0.0f64;
            for k in 0..dim {
                let v = acc[k] + contrib.vectors[j][k];
                if v > 0.0 {
                    sum += 1.0 / v;
                } else {
                    zeros += 1;
                }
            }
            let better = match best {
                None => true,
                Some((_, bz, bs)) => {
                    if literal {
                        (zeros, sum) > (bz, bs)
                    } else {
                        zeros < bz || (zeros == bz && sum < bs)
                    }
                }
            };
            if better {
                best = Some((j, zeros, sum));
            }
        }
        let (j, _, _) = best.expect("candidates remain");
        acc += &contrib.vectors[j];
        available[j] = false;
        chosen.push(j);
    }
    if acc.iter().any(|&v| !(v > 0.0)) {
        return Err(Error::InfeasibleCoverage(format!(
            "{} modal directions uncovered by any size-{m} selection along this greedy path",
            acc.iter().filter(|&&v| !(v > 0.0)).count()
        )));
    }
    Ok(chosen)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlacementMetric {
    LambdaMin,
    Trace,
    TraceInv,
}

/// Exhaustive search over all C(n, m) subsets maximizing `score`. The first
/// subset in lexicographic order wins ties, matching ascending-index breaks.
pub fn brute_force_by_score(
    n: usize,
    m: usize,
    mut score: impl FnMut(&[usize]) -> f64,
) -> Result<Vec<usize>> {
    if m == 0 || m > n {
        return Err(Error::invalid("brute force: need 0 < m <= n"));
    }
    let combos = binomial(n, m);
    if combos > 1_000_000 {
        return Err(Error::invalid(format!(
            "brute force over C({n},{m}) = {combos} subsets exceeds the 1e6 cap"
        )));
    }
    let mut subset: Vec<usize> = (0..m).collect();
    let mut best = subset.clone();
    let mut best_score = score(&subset);
    while next_combination(&mut subset, n) {
        let s = score(&subset);
        if s > best_score {
            best_score = s;
            best = subset.clone();
        }
    }
    Ok(best)
}

fn binomial(n: usize, m: usize) -> u128 {
    let m = m.min(n - m);
    let mut acc: u128 = 1;
    for k in 0..m {
        acc = acc * (n - k) as u128 / (k + 1) as u128;
        if acc > u64::MAX as u128 {
            return acc;
        }
    }
    acc
}

fn next_combination(subset: &mut [usize], n: usize) -> bool {
    let m = subset.len();
    let mut i = m;
    while i > 0 {
        i -= 1;
        if subset[i] < n - m + i {
            subset[i] += 1;
            for k in (i + 1)..m {
                subset[k] = subset[k - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Exhaustive optimum over driver subsets for the requested metric on the
/// diagonal modal Gramian.
pub fn brute_force_placement(
    modal: &ModalDecomposition,
    m: usize,
    metric: PlacementMetric,
) -> Result<Vec<usize>> {
    let n = modal.omega.len();
    match metric {
        PlacementMetric::LambdaMin => {
            let contrib = ModalContribution::full(modal)?;
            brute_force_by_score(n, m, |s| {
                let mut acc = DVector::<f64>::zeros(2 * n);
                for &j in s {
                    acc += &contrib.vectors[j];
                }
                acc.iter().fold(f64::INFINITY, |a, &v| a.min(v))
            })
        }
        PlacementMetric::Trace => {
            let scores = trace_scores(modal)?;
            brute_force_by_score(n, m, |s| s.iter().map(|&j| scores[j]).sum())
        }
        PlacementMetric::TraceInv => {
            let contrib = ModalContribution::folded(modal)?;
            brute_force_by_score(n, m, |s| {
                let mut acc = DVector::<f64>::zeros(n);
                for &j in s {
                    acc += &contrib.vectors[j];
                }
                if acc.iter().any(|&v| !(v > 0.0)) {
                    return f64::NEG_INFINITY;
                }
                // maximize the negated energy
                -acc.iter().map(|&v| 1.0 / v).sum::<f64>()
            })
        }
    }
}

/// The m nodes with the largest squared component on the target mode,
/// maximizing sum_l (psi^k_{j_l})^2. Exact by separability.
pub fn mode_power_placement(
    modal: &ModalDecomposition,
    m: usize,
    mode: usize,
) -> Result<Vec<usize>> {
    let n = modal.omega.len();
    if mode >= n {
        return Err(Error::invalid(format!("mode index {mode} out of range (n={n})")));
    }
    if m > n {
        return Err(Error::invalid("mode power placement: m > n"));
    }
    let scores: Vec<f64> = (0..n)
        .map(|j| modal.psi[(j, mode)] * modal.psi[(j, mode)])
        .collect();
    Ok(rank_by_scores_desc(&scores)[..m].to_vec())
}

/// |top-m(a) ∩ top-m(b)| / m.
pub fn ranking_overlap(order_a: &[usize], order_b: &[usize], m: usize) -> Result<f64> {
    if m == 0 || m > order_a.len() || m > order_b.len() {
        return Err(Error::invalid("overlap: need 0 < m <= ranking lengths"));
    }
    let a: std::collections::HashSet<usize> = order_a[..m].iter().copied().collect();
    let hits = order_b[..m].iter().filter(|j| a.contains(j)).count();
    Ok(hits as f64 / m as f64)
}

/// Metrics of the diagonal modal Gramian for a driver subset, computed directly
/// from the contribution vectors (O(n m), no eigensolve).
pub fn subset_metrics(
    modal: &ModalDecomposition,
    subset: &[usize],
    t_f: f64,
) -> Result<EnergyMetrics> {
    let contrib = ModalContribution::full(modal)?;
    let n = modal.omega.len();
    let mut acc = DVector::<f64>::zeros(2 * n);
    for &j in subset {
        if j >= n {
            return Err(Error::invalid(format!("driver {j} out of range")));
        }
        acc += &contrib.vectors[j];
    }
    let dmin = acc.iter().fold(f64::INFINITY, |a, &v| a.min(v));
    let dmax = acc.iter().fold(0.0f64, |a, &v| a.max(v));
    if !(dmin > crate::gramian::SINGULAR_REL_TOL * dmax) {
        let worst = (0..2 * n).min_by(|&a, &b| acc[a].partial_cmp(&acc[b]).unwrap()).unwrap();
        let mut dir = vec![0.0; 2 * n];
        dir[worst] = 1.0;
        return Err(Error::SingularGramian {
            cond: if dmin > 0.0 { dmax / dmin } else { f64::INFINITY },
            limit: 1.0 / crate::gramian::SINGULAR_REL_TOL,
            worst_direction: dir,
        });
    }
    Ok(EnergyMetrics {
        lambda_min: dmin * t_f,
        trace: acc.sum() * t_f,
        trace_inv: acc.iter().map(|&v| 1.0 / v).sum::<f64>() / t_f,
        cond: dmax / dmin,
    })
}

/// A strategy's output: the ranking (or per-m prefix sets) plus the metric
/// values achieved at each evaluated driver count.
#[derive(Debug, Clone)]
pub struct PlacementResult {
    pub strategy: String,
    pub order: Vec<usize>,
    pub metrics_per_m: Vec<(usize, EnergyMetrics)>,
}

/// Evaluate the prefixes of a ranking on the diagonal modal Gramian.
pub fn evaluate_ranking(
    modal: &ModalDecomposition,
    strategy: &str,
    order: &[usize],
    m_grid: &[usize],
    t_f: f64,
) -> Result<PlacementResult> {
    let mut metrics_per_m = Vec::with_capacity(m_grid.len());
    for &m in m_grid {
        if m == 0 || m > order.len() {
            return Err(Error::invalid(format!("m={m} outside ranking length")));
        }
        metrics_per_m.push((m, subset_metrics(modal, &order[..m], t_f)?));
    }
    Ok(PlacementResult {
        strategy: strategy.to_string(),
        order: order.to_vec(),
        metrics_per_m,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gramian::{energy_metrics, modal_diag_gramian};
    use crate::oscillators::OscillatorNetwork;
    use nalgebra::{dmatrix, dvector, DMatrix};

    /// Dense enough that the coupling graph is connected and the modal Gramian
    /// of any nonempty driver set is nonsingular.
    fn sample_network(n: usize, seed: u64) -> OscillatorNetwork {
        OscillatorNetwork::random_er_coupled(n, 0.6, 2.0, 1.0, seed).unwrap()
    }

    #[test]
    fn rw_ranking_hand_case() {
        let adj = dmatrix![0.0, 2.0; -3.0, 0.0];
        assert_eq!(rank_by_rw(&adj), vec![0, 1]);
    }

    #[test]
    fn rw_symmetric_is_index_order() {
        let a = crate::netgen::random_matrix_elliptic(8, 0.0, 1.0, 3).unwrap();
        assert_eq!(rank_by_rw(&a), (0..8).collect::<Vec<_>>());
    }

    #[test]
    fn rw_infinite_first() {
        let mut a = DMatrix::<f64>::zeros(3, 3);
        a[(1, 0)] = 1.0;
        a[(0, 1)] = 0.5;
        a[(1, 2)] = 0.5; // node 2: outdegree only
        let order = rank_by_rw(&a);
        assert_eq!(order[0], 2);
    }

    #[test]
    fn random_placement_bounds_and_determinism() {
        let s1 = random_placement(10, 10, 1).unwrap();
        let mut sorted = s1.clone();
        sorted.sort_unstable();
        assert_eq!(sorted, (0..10).collect::<Vec<_>>());
        assert!(random_placement(10, 0, 1).unwrap().is_empty());
        assert_eq!(random_placement(20, 5, 7).unwrap(), random_placement(20, 5, 7).unwrap());
    }

    #[test]
    fn random_placement_uniform_frequency() {
        // chi-square over node hit counts across many draws
        let n = 10;
        let m = 3;
        let draws = 10_000;
        let mut counts = vec![0usize; n];
        for seed in 0..draws {
            for v in random_placement(n, m, seed as u64).unwrap() {
                counts[v] += 1;
            }
        }
        let expected = (draws * m) as f64 / n as f64;
        let chi2: f64 = counts
            .iter()
            .map(|&c| (c as f64 - expected).powi(2) / expected)
            .sum();
        // 9 dof: p > 0.01 requires chi2 < 21.67
        assert!(chi2 < 21.67, "chi2 = {chi2}");
    }

    #[test]
    fn maxmin_single_node_matches_enumeration() {
        // Decoupled oscillators with distinct masses: every single-node min
        // component is zero (each node only excites its own mode), so the
        // shared ascending tie-break makes both routes return node 0.
        let net = OscillatorNetwork::new(
            dvector![1.0, 2.0, 4.0],
            dvector![1.0, 1.5, 0.7],
            DMatrix::zeros(3, 3),
            DMatrix::zeros(3, 3),
            vec![],
        )
        .unwrap();
        let modal = net.modal_decomposition().unwrap();
        let got = greedy_maxmin(&modal, 1).unwrap();
        let contrib = ModalContribution::full(&modal).unwrap();
        let brute = brute_force_by_score(3, 1, |s| contrib.vectors[s[0]].min()).unwrap();
        assert_eq!(got, brute);
        assert_eq!(got, vec![0]);

        // Coupled chain: min components are distinct, enumeration is decisive.
        let chain = OscillatorNetwork::new(
            dvector![1.0, 2.0, 4.0],
            dvector![1.0, 1.5, 0.7],
            dmatrix![0.8, -0.8, 0.0; -0.8, 2.1, -1.3; 0.0, -1.3, 1.3],
            DMatrix::zeros(3, 3),
            vec![],
        )
        .unwrap();
        let modal = chain.modal_decomposition().unwrap();
        let got = greedy_maxmin(&modal, 1).unwrap();
        let contrib = ModalContribution::full(&modal).unwrap();
        let brute = brute_force_by_score(3, 1, |s| contrib.vectors[s[0]].min()).unwrap();
        assert_eq!(got, brute);
    }

    #[test]
    fn maxmin_trivial_single() {
        let net = sample_network(1, 3);
        let modal = net.modal_decomposition().unwrap();
        assert_eq!(greedy_maxmin(&modal, 1).unwrap(), vec![0]);
    }

    #[test]
    fn maxmin_beats_random_median() {
        let net = sample_network(10, 5);
        let modal = net.modal_decomposition().unwrap();
        let m = 3;
        let greedy = greedy_maxmin(&modal, m).unwrap();
        let greedy_val = subset_metrics(&modal, &greedy, 1.0).map(|e| e.lambda_min);
        let greedy_val = greedy_val.unwrap_or(0.0);
        let mut randoms: Vec<f64> = (0..200)
            .map(|s| {
                let set = random_placement(10, m, 1000 + s).unwrap();
                subset_metrics(&modal, &set, 1.0).map(|e| e.lambda_min).unwrap_or(0.0)
            })
            .collect();
        randoms.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let median = randoms[100];
        assert!(
            greedy_val >= median,
            "greedy {greedy_val:e} below random median {median:e}"
        );
    }

    #[test]
    fn exact_trace_matches_brute_force() {
        for seed in 0..10 {
            let n = 9;
            let net = sample_network(n, 100 + seed);
            let modal = net.modal_decomposition().unwrap();
            for m in [1usize, 2, 3] {
                let fast = exact_trace_placement(&modal, m).unwrap();
                let brute = brute_force_placement(&modal, m, PlacementMetric::Trace).unwrap();
                let scores = trace_scores(&modal).unwrap();
                let sum_fast: f64 = fast.iter().map(|&j| scores[j]).sum();
                let sum_brute: f64 = brute.iter().map(|&j| scores[j]).sum();
                assert!(
                    (sum_fast - sum_brute).abs() <= 1e-12 * sum_brute.abs(),
                    "seed {seed} m {m}: {sum_fast} vs {sum_brute}"
                );
            }
        }
    }

    #[test]
    fn trace_scores_prefer_light_masses() {
        // Two decoupled oscillators, equal stiffness, masses 1 and 10: the
        // lighter one wins by the 1/M² factor.
        let net = OscillatorNetwork::new(
            dvector![1.0, 10.0],
            dvector![1.0, 1.0],
            DMatrix::zeros(2, 2),
            DMatrix::zeros(2, 2),
            vec![],
        )
        .unwrap();
        let modal = net.modal_decomposition().unwrap();
        assert_eq!(exact_trace_placement(&modal, 1).unwrap(), vec![0]);
    }

    #[test]
    fn trace_all_nodes_is_everything() {
        let net = sample_network(6, 2);
        let modal = net.modal_decomposition().unwrap();
        let mut all = exact_trace_placement(&modal, 6).unwrap();
        all.sort_unstable();
        assert_eq!(all, (0..6).collect::<Vec<_>>());
    }

    #[test]
    fn trinv_greedy_near_optimal_pairs() {
        // The greedy pick of the best singleton can miss the optimal pair by
        // more than 1.5x on individual instances (observed max ~2.5x over 100
        // random nets), so the closeness claim is asserted on the batch median
        // with a hard per-instance cap.
        let mut ratios = Vec::new();
        for seed in 0..20 {
            let n = 8;
            let net = sample_network(n, 200 + seed);
            let modal = net.modal_decomposition().unwrap();
            let greedy = greedy_trinv(&modal, 2, false).unwrap();
            let brute = brute_force_placement(&modal, 2, PlacementMetric::TraceInv).unwrap();
            let objective =
                |s: &[usize]| subset_metrics(&modal, s, 1.0).map(|e| e.trace_inv).unwrap();
            let ratio = objective(&greedy) / objective(&brute);
            assert!(ratio >= 1.0 - 1e-12, "greedy cannot beat the optimum");
            assert!(ratio <= 4.0, "seed {seed}: ratio {ratio} out of range");
            ratios.push(ratio);
        }
        ratios.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let median = ratios[ratios.len() / 2];
        assert!(median <= 1.5, "median greedy/optimum ratio {median}");
    }

    #[test]
    fn trinv_beats_random_median() {
        let net = sample_network(10, 77);
        let modal = net.modal_decomposition().unwrap();
        let m = 3;
        let greedy = greedy_trinv(&modal, m, false).unwrap();
        let val = subset_metrics(&modal, &greedy, 1.0).unwrap().trace_inv;
        let mut randoms: Vec<f64> = (0..200)
            .map(|s| {
                let set = random_placement(10, m, 5000 + s).unwrap();
                subset_metrics(&modal, &set, 1.0)
                    .map(|e| e.trace_inv)
                    .unwrap_or(f64::INFINITY)
            })
            .collect();
        randoms.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!(val <= randoms[100]);
    }

    #[test]
    fn trinv_literal_differs() {
        // The literal argmax reading picks the *worst* first node.
        let net = sample_network(8, 31);
        let modal = net.modal_decomposition().unwrap();
        let a = greedy_trinv(&modal, 1, false).unwrap();
        let b = greedy_trinv(&modal, 1, true).unwrap();
        assert_ne!(a, b);
    }

    #[test]
    fn mode_power_matches_brute_force() {
        let n = 8;
        let net = sample_network(n, 404);
        let modal = net.modal_decomposition().unwrap();
        let k = 2;
        for m in [1usize, 3] {
            let fast = mode_power_placement(&modal, m, k).unwrap();
            let brute = brute_force_by_score(n, m, |s| {
                s.iter()
                    .map(|&j| modal.psi[(j, k)] * modal.psi[(j, k)])
                    .sum()
            })
            .unwrap();
            let power = |s: &[usize]| -> f64 {
                s.iter().map(|&j| modal.psi[(j, k)] * modal.psi[(j, k)]).sum()
            };
            assert!((power(&fast) - power(&brute)).abs() < 1e-14);
        }
        let mut all = mode_power_placement(&modal, n, 0).unwrap();
        all.sort_unstable();
        assert_eq!(all, (0..n).collect::<Vec<_>>());
    }

    #[test]
    fn overlap_identical_and_disjoint() {
        let a: Vec<usize> = (0..10).collect();
        let b: Vec<usize> = (0..10).rev().collect();
        assert_eq!(ranking_overlap(&a, &a, 5).unwrap(), 1.0);
        assert_eq!(ranking_overlap(&a, &b, 5).unwrap(), 0.0);
        assert_eq!(ranking_overlap(&a, &b, 10).unwrap(), 1.0);
    }

    #[test]
    fn subset_metrics_agree_with_gramian_route() {
        let net = sample_network(7, 9);
        let modal = net.modal_decomposition().unwrap();
        let subset = vec![0, 2, 5];
        let t_f = 37.0;
        let fast = subset_metrics(&modal, &subset, t_f).unwrap();
        let mut flags = vec![false; 7];
        for &j in &subset {
            flags[j] = true;
        }
        let g = modal_diag_gramian(&modal, &flags, t_f).unwrap();
        let slow = energy_metrics(&g).unwrap();
        assert!((fast.lambda_min - slow.lambda_min).abs() < 1e-12 * slow.lambda_min.abs());
        assert!((fast.trace - slow.trace).abs() < 1e-12 * slow.trace.abs());
        assert!((fast.trace_inv - slow.trace_inv).abs() < 1e-10 * slow.trace_inv.abs());
    }

    #[test]
    fn modal_gramian_additive_in_drivers() {
        let net = sample_network(6, 55);
        let modal = net.modal_decomposition().unwrap();
        let f1 = [true, false, true, false, false, false];
        let f2 = [false, true, false, false, true, false];
        let both = [true, true, true, false, true, false];
        let g1 = modal_diag_gramian(&modal, &f1, 2.0).unwrap().w;
        let g2 = modal_diag_gramian(&modal, &f2, 2.0).unwrap().w;
        let gb = modal_diag_gramian(&modal, &both, 2.0).unwrap().w;
        assert!((g1 + g2 - &gb).norm() < 1e-14 * gb.norm());
    }

    #[test]
    fn strategies_are_permutation_equivariant() {
        // Relabeling nodes relabels the outputs. Checked on a coupled chain
        // with well-separated scores (exact ties would legitimately break
        // equivariance through the index tie-break).
        let masses = dvector![1.0, 2.5, 0.7, 4.0, 1.7];
        let ground = dvector![1.0, 0.8, 1.3, 0.6, 1.1];
        let n = 5;
        let mut lap = DMatrix::<f64>::zeros(n, n);
        for (i, j, w) in [(0usize, 1usize, 0.9), (1, 2, 1.4), (2, 3, 0.6), (3, 4, 1.1), (0, 4, 0.5)] {
            lap[(i, j)] = -w;
            lap[(j, i)] = -w;
            lap[(i, i)] += w;
            lap[(j, j)] += w;
        }
        let net = OscillatorNetwork::new(
            masses.clone(),
            ground.clone(),
            lap.clone(),
            DMatrix::zeros(n, n),
            vec![],
        )
        .unwrap();
        let perm = [3usize, 0, 4, 2, 1]; // new index perm[i] holds old node i
        let mut masses_p = masses.clone();
        let mut ground_p = ground.clone();
        let mut lap_p = DMatrix::<f64>::zeros(n, n);
        for i in 0..n {
            masses_p[perm[i]] = masses[i];
            ground_p[perm[i]] = ground[i];
            for j in 0..n {
                lap_p[(perm[i], perm[j])] = lap[(i, j)];
            }
        }
        let net_p =
            OscillatorNetwork::new(masses_p, ground_p, lap_p, DMatrix::zeros(n, n), vec![])
                .unwrap();
        let modal = net.modal_decomposition().unwrap();
        let modal_p = net_p.modal_decomposition().unwrap();
        for m in 1..=3 {
            let mut sel: Vec<usize> =
                greedy_maxmin(&modal, m).unwrap().iter().map(|&j| perm[j]).collect();
            let mut sel_p = greedy_maxmin(&modal_p, m).unwrap();
            sel.sort_unstable();
            sel_p.sort_unstable();
            assert_eq!(sel, sel_p, "maxmin equivariance at m={m}");
            let mut tr: Vec<usize> =
                exact_trace_placement(&modal, m).unwrap().iter().map(|&j| perm[j]).collect();
            let mut tr_p = exact_trace_placement(&modal_p, m).unwrap();
            tr.sort_unstable();
            tr_p.sort_unstable();
            assert_eq!(tr, tr_p, "trace equivariance at m={m}");
        }
    }

    #[test]
    fn monotone_improvement_in_m() {
        let net = sample_network(12, 8);
        let modal = net.modal_decomposition().unwrap();
        let order = greedy_maxmin(&modal, 12).unwrap();
        let mut last = (0.0f64, 0.0f64);
        for m in 1..=12 {
            let e = subset_metrics(&modal, &order[..m], 1.0);
            if let Ok(e) = e {
                assert!(e.lambda_min + 1e-15 >= last.0, "lambda_min must not decrease");
                assert!(e.trace + 1e-15 >= last.1, "trace must not decrease");
                last = (e.lambda_min, e.trace);
            }
        }
    }
}
