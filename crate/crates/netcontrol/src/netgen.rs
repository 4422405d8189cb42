//! Network and random-matrix ensemble generation.
//!
//! Adjacency convention, fixed globally: `a[(i, j)]` is the weight of the edge
//! j -> i, so the weighted indegree is the row sum w_in(i) = sum_j |a_ij| and the
//! weighted outdegree the column sum w_out(i) = sum_j |a_ji|.
//!
//! Entry weights are Gaussian throughout; the circular and elliptic spectral laws
//! are distribution-free, a single distribution is fixed here for reproducibility.
//! Every generator takes an explicit seed and derives its own ChaCha stream, so
//! identical parameters and seed give bit-identical output on any thread.

use nalgebra::DMatrix;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};

/// Correlated Gaussian pair with unit marginals and correlation rho.
fn bivariate_pair(rng: &mut ChaCha8Rng, rho: f64) -> (f64, f64) {
    let g1: f64 = StandardNormal.sample(rng);
    let g2: f64 = StandardNormal.sample(rng);
    (g1, rho * g1 + (1.0 - rho * rho).sqrt() * g2)
}

/// Full random matrix with the circular-law spectrum: entries N(0,1)/sqrt(n),
/// diagonal shifted by `center` so the unit disk moves horizontally.
pub fn random_matrix_circular(n: usize, center: f64, seed: u64) -> Result<DMatrix<f64>> {
    random_matrix_elliptic(n, center, 0.0, seed)
}

/// Elliptic-law matrix: the (i,j)/(j,i) pairs are bivariate normal with
/// correlation rho, so the spectral support is an ellipse with real semi-axis
/// 1 + rho and imaginary semi-axis 1 - rho, shifted by `center`.
pub fn random_matrix_elliptic(n: usize, center: f64, rho: f64, seed: u64) -> Result<DMatrix<f64>> {
    if n < 2 {
        return Err(Error::invalid("ensemble matrices need n >= 2"));
    }
    if !(rho.abs() <= 1.0) {
        return Err(Error::invalid("pair correlation must satisfy |rho| <= 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let scale = 1.0 / (n as f64).sqrt();
    let mut a = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        let g: f64 = StandardNormal.sample(&mut rng);
        a[(i, i)] = g * scale + center;
        for j in (i + 1)..n {
            let (w1, w2) = bivariate_pair(&mut rng, rho);
            a[(i, j)] = w1 * scale;
            a[(j, i)] = w2 * scale;
        }
    }
    Ok(a)
}

/// Sparse Erdős–Rényi matrix: each ordered pair (including self-pairs) carries
/// an entry independently with probability p, weights scaled by 1/sqrt(p n);
/// the weights of the (i,j)/(j,i) pair are correlated with rho when both draws
/// land. Reduces to the elliptic generator at p = 1.
pub fn random_matrix_er(n: usize, p: f64, center: f64, rho: f64, seed: u64) -> Result<DMatrix<f64>> {
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::invalid("edge probability must be in (0, 1]"));
    }
    if p * (n as f64) < 5.0 {
        return Err(Error::invalid("spectral law regime needs p*n >= 5"));
    }
    if !(rho.abs() <= 1.0) {
        return Err(Error::invalid("pair correlation must satisfy |rho| <= 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let scale = 1.0 / (p * n as f64).sqrt();
    let mut a = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        if rng.random::<f64>() < p {
            let g: f64 = StandardNormal.sample(&mut rng);
            a[(i, i)] = g * scale;
        }
        a[(i, i)] += center;
        for j in (i + 1)..n {
            let up = rng.random::<f64>() < p;
            let down = rng.random::<f64>() < p;
            let (w1, w2) = bivariate_pair(&mut rng, rho);
            if up {
                a[(i, j)] = w1 * scale;
            }
            if down {
                a[(j, i)] = w2 * scale;
            }
        }
    }
    Ok(a)
}

/// Sparse ER matrix with the presence pattern and the weights drawn from two
/// separate streams, so one topology can be reweighted many times (the
/// experiment protocol fixes a realization and resamples edge weights).
pub fn random_matrix_er_resampled(
    n: usize,
    p: f64,
    center: f64,
    rho: f64,
    topo_seed: u64,
    weight_seed: u64,
) -> Result<DMatrix<f64>> {
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::invalid("edge probability must be in (0, 1]"));
    }
    if p * (n as f64) < 5.0 {
        return Err(Error::invalid("spectral law regime needs p*n >= 5"));
    }
    if !(rho.abs() <= 1.0) {
        return Err(Error::invalid("pair correlation must satisfy |rho| <= 1"));
    }
    let mut topo = ChaCha8Rng::seed_from_u64(topo_seed);
    let mut wrng = ChaCha8Rng::seed_from_u64(weight_seed);
    let scale = 1.0 / (p * n as f64).sqrt();
    let mut a = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        if topo.random::<f64>() < p {
            let g: f64 = StandardNormal.sample(&mut wrng);
            a[(i, i)] = g * scale;
        }
        a[(i, i)] += center;
        for j in (i + 1)..n {
            let up = topo.random::<f64>() < p;
            let down = topo.random::<f64>() < p;
            let (w1, w2) = bivariate_pair(&mut wrng, rho);
            if up {
                a[(i, j)] = w1 * scale;
            }
            if down {
                a[(j, i)] = w2 * scale;
            }
        }
    }
    Ok(a)
}

/// Scale-free digraph with the edge pattern fixed by `topo_seed` (structure,
/// collapse, connectivity repair) and i.i.d. N(0,1) weights per simple edge
/// drawn from `weight_seed`.
pub fn sf_adjacency_resampled(
    n: usize,
    gamma_in: f64,
    gamma_out: f64,
    topo_seed: u64,
    weight_seed: u64,
) -> Result<DMatrix<f64>> {
    let edges = sf_structure(n, gamma_in, gamma_out, topo_seed)?;
    let mut pattern = DMatrix::<f64>::zeros(n, n);
    for &(src, dst) in &edges {
        pattern[(dst, src)] = 1.0;
    }
    let pattern = repair_strong_connectivity(&pattern, topo_seed ^ 0x9e37_79b9_7f4a_7c15)?;
    let mut wrng = ChaCha8Rng::seed_from_u64(weight_seed);
    let mut a = DMatrix::<f64>::zeros(n, n);
    for j in 0..n {
        for i in 0..n {
            if pattern[(i, j)] != 0.0 {
                let w: f64 = StandardNormal.sample(&mut wrng);
                a[(i, j)] = w;
            }
        }
    }
    Ok(a)
}

/// Directed scale-free digraph by preferential attachment with target in/out
/// degree exponents, collapsed to a simple weighted digraph with N(0,1) edge
/// weights (multi-edge weights summed, self-loops dropped).
pub fn random_graph_sf(n: usize, gamma_in: f64, gamma_out: f64, seed: u64) -> Result<DMatrix<f64>> {
    let edges = sf_structure(n, gamma_in, gamma_out, seed)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5f5f_5f5f_5f5f_5f5f);
    let mut a = DMatrix::<f64>::zeros(n, n);
    for &(src, dst) in &edges {
        let w: f64 = StandardNormal.sample(&mut rng);
        a[(dst, src)] += w;
    }
    Ok(a)
}

/// Attachment parameters (alpha, beta, gamma, delta_in, delta_out) solved from
/// the exponent formulas gamma_in = 1 + (1 + delta_in (alpha + gamma))/(alpha + beta)
/// and gamma_out = 1 + (1 + delta_out (alpha + gamma))/(beta + gamma), with
/// delta_in = delta_out = 1.
pub fn sf_parameters(gamma_in: f64, gamma_out: f64) -> Result<(f64, f64, f64, f64, f64)> {
    if gamma_in <= 2.0 || gamma_out <= 2.0 {
        return Err(Error::invalid("degree exponents must exceed 2"));
    }
    let c = 1.0 / (gamma_in - 1.0) + 1.0 / (gamma_out - 1.0);
    let s = (2.0 - c) / (1.0 + c);
    let gamma = 1.0 - (1.0 + s) / (gamma_in - 1.0);
    let alpha = 1.0 - (1.0 + s) / (gamma_out - 1.0);
    let beta = 1.0 - s;
    if !(alpha > 0.0 && beta > 0.0 && gamma > 0.0) {
        return Err(Error::invalid(format!(
            "exponent pair ({gamma_in}, {gamma_out}) yields invalid attachment mix ({alpha:.3}, {beta:.3}, {gamma:.3})"
        )));
    }
    Ok((alpha, beta, gamma, 1.0, 1.0))
}

/// Edge list of the directed preferential-attachment multigraph, grown until it
/// has `n` nodes (self-loop draws are skipped).
pub fn sf_structure(
    n: usize,
    gamma_in: f64,
    gamma_out: f64,
    seed: u64,
) -> Result<Vec<(usize, usize)>> {
    if n < 3 {
        return Err(Error::invalid("scale-free generation needs n >= 3"));
    }
    let (alpha, beta, _gamma, delta_in, delta_out) = sf_parameters(gamma_in, gamma_out)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut edges: Vec<(usize, usize)> = vec![(0, 1), (1, 2), (2, 0)];
    let mut d_in = vec![0usize; n];
    let mut d_out = vec![0usize; n];
    for &(s, d) in &edges {
        d_out[s] += 1;
        d_in[d] += 1;
    }
    let mut nodes = 3usize;

    let pick_in = |rng: &mut ChaCha8Rng, d_in: &[usize], nodes: usize, total_e: usize| {
        let denom = total_e as f64 + delta_in * nodes as f64;
        let target = rng.random::<f64>() * denom;
        let mut acc = 0.0;
        for v in 0..nodes {
            acc += d_in[v] as f64 + delta_in;
            if target < acc {
                return v;
            }
        }
        nodes - 1
    };
    let pick_out = |rng: &mut ChaCha8Rng, d_out: &[usize], nodes: usize, total_e: usize| {
        let denom = total_e as f64 + delta_out * nodes as f64;
        let target = rng.random::<f64>() * denom;
        let mut acc = 0.0;
        for v in 0..nodes {
            acc += d_out[v] as f64 + delta_out;
            if target < acc {
                return v;
            }
        }
        nodes - 1
    };

    while nodes < n {
        let r = rng.random::<f64>();
        let total_e = edges.len();
        if r < alpha {
            // new node with an outgoing edge to a popular-in node
            let w = pick_in(&mut rng, &d_in, nodes, total_e);
            let v = nodes;
            nodes += 1;
            edges.push((v, w));
            d_out[v] += 1;
            d_in[w] += 1;
        } else if r < alpha + beta {
            // edge between existing nodes
            let v = pick_out(&mut rng, &d_out, nodes, total_e);
            let w = pick_in(&mut rng, &d_in, nodes, total_e);
            if v == w {
                continue;
            }
            edges.push((v, w));
            d_out[v] += 1;
            d_in[w] += 1;
        } else {
            // new node receiving an edge from a popular-out node
            let v = pick_out(&mut rng, &d_out, nodes, total_e);
            let w = nodes;
            nodes += 1;
            edges.push((v, w));
            d_out[v] += 1;
            d_in[w] += 1;
        }
    }
    Ok(edges)
}

/// Strongly connected components of the nonzero pattern (iterative Kosaraju).
/// Returns one component id per node.
pub fn strongly_connected_components(adj: &DMatrix<f64>) -> Vec<usize> {
    let n = adj.nrows();
    let mut fwd: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut rev: Vec<Vec<usize>> = vec![Vec::new(); n];
    for i in 0..n {
        for j in 0..n {
            if i != j && adj[(i, j)] != 0.0 {
                // edge j -> i
                fwd[j].push(i);
                rev[i].push(j);
            }
        }
    }
    // First pass: finish order on the forward graph.
    let mut visited = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for start in 0..n {
        if visited[start] {
            continue;
        }
        let mut stack = vec![(start, 0usize)];
        visited[start] = true;
        while let Some(&mut (v, ref mut idx)) = stack.last_mut() {
            if *idx < fwd[v].len() {
                let next = fwd[v][*idx];
                *idx += 1;
                if !visited[next] {
                    visited[next] = true;
                    stack.push((next, 0));
                }
            } else {
                order.push(v);
                stack.pop();
            }
        }
    }
    // Second pass: reverse graph in reverse finish order.
    let mut comp = vec![usize::MAX; n];
    let mut ncomp = 0;
    for &start in order.iter().rev() {
        if comp[start] != usize::MAX {
            continue;
        }
        let mut stack = vec![start];
        comp[start] = ncomp;
        while let Some(v) = stack.pop() {
            for &next in &rev[v] {
                if comp[next] == usize::MAX {
                    comp[next] = ncomp;
                    stack.push(next);
                }
            }
        }
        ncomp += 1;
    }
    comp
}

/// Add random edges between distinct strongly connected components (weights
/// N(0,1)) until the graph is strongly connected. Only additions, no removals.
pub fn repair_strong_connectivity(adj: &DMatrix<f64>, seed: u64) -> Result<DMatrix<f64>> {
    let n = adj.nrows();
    let mut a = adj.clone();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut guard = 0usize;
    loop {
        let comp = strongly_connected_components(&a);
        let ncomp = comp.iter().copied().max().map_or(0, |c| c + 1);
        if ncomp <= 1 {
            return Ok(a);
        }
        guard += 1;
        if guard > 100 * n + 1000 {
            return Err(Error::numerical("connectivity repair did not converge"));
        }
        let c1 = rng.random_range(0..ncomp);
        let c2 = loop {
            let c = rng.random_range(0..ncomp);
            if c != c1 {
                break c;
            }
        };
        let pick = |rng: &mut ChaCha8Rng, c: usize, comp: &[usize]| {
            let members: Vec<usize> = (0..n).filter(|&v| comp[v] == c).collect();
            members[rng.random_range(0..members.len())]
        };
        let src = pick(&mut rng, c1, &comp);
        let dst = pick(&mut rng, c2, &comp);
        if src != dst && a[(dst, src)] == 0.0 {
            let w: f64 = StandardNormal.sample(&mut rng);
            a[(dst, src)] = w;
        }
    }
}

/// Per-node weighted in/out degrees and their ratio r_w = w_out / w_in.
#[derive(Debug, Clone)]
pub struct WeightedDegrees {
    pub w_in: Vec<f64>,
    pub w_out: Vec<f64>,
    /// +inf where w_in = 0 (such nodes rank first).
    pub r_w: Vec<f64>,
}

pub fn weighted_degrees(adj: &DMatrix<f64>) -> WeightedDegrees {
    let n = adj.nrows();
    let mut w_in = vec![0.0; n];
    let mut w_out = vec![0.0; n];
    for i in 0..n {
        for j in 0..n {
            let w = adj[(i, j)].abs();
            w_in[i] += w;
            w_out[j] += w;
        }
    }
    let r_w = w_in
        .iter()
        .zip(w_out.iter())
        .map(|(&wi, &wo)| if wi > 0.0 { wo / wi } else { f64::INFINITY })
        .collect();
    WeightedDegrees { w_in, w_out, r_w }
}

/// Random connected undirected topology: a random spanning tree plus uniformly
/// random extra edges up to `edges` total, |N(0,1)| weights. Used for synthetic
/// grid topologies with prescribed node/edge counts.
pub fn random_connected_graph(n: usize, edges: usize, seed: u64) -> Result<Vec<(usize, usize, f64)>> {
    if n < 2 || edges < n - 1 {
        return Err(Error::invalid("need n >= 2 and at least n-1 edges"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut list = Vec::with_capacity(edges);
    let mut present = std::collections::HashSet::new();
    // Random spanning tree: attach each new node to a uniformly random earlier one.
    for v in 1..n {
        let u = rng.random_range(0..v);
        let w: f64 = StandardNormal.sample(&mut rng);
        list.push((u, v, w.abs().max(1e-3)));
        present.insert((u.min(v), u.max(v)));
    }
    let mut guard = 0;
    while list.len() < edges {
        guard += 1;
        if guard > 100 * edges + 10_000 {
            return Err(Error::invalid("edge count too large for simple graph"));
        }
        let u = rng.random_range(0..n);
        let v = rng.random_range(0..n);
        if u == v || present.contains(&(u.min(v), u.max(v))) {
            continue;
        }
        let w: f64 = StandardNormal.sample(&mut rng);
        list.push((u, v, w.abs().max(1e-3)));
        present.insert((u.min(v), u.max(v)));
    }
    Ok(list)
}

pub mod edgelist {
    //! Plain-text edge list interchange format: one `src dst weight` triple per
    //! line, 0-based indices, `#` comments. A line `src dst weight` stores
    //! adjacency entry a[(dst, src)] = weight (edge src -> dst).

    use super::*;
    use std::io::{BufRead, Write};
    use std::path::Path;

    pub fn write_edge_list(path: &Path, adj: &DMatrix<f64>) -> Result<()> {
        let mut out = std::io::BufWriter::new(
            std::fs::File::create(path)
                .map_err(|e| Error::invalid(format!("cannot create {}: {e}", path.display())))?,
        );
        let n = adj.nrows();
        writeln!(out, "# nodes={} directed edge list: src dst weight", n)
            .map_err(|e| Error::invalid(format!("write failed: {e}")))?;
        for j in 0..n {
            for i in 0..n {
                if adj[(i, j)] != 0.0 {
                    writeln!(out, "{} {} {}", j, i, adj[(i, j)])
                        .map_err(|e| Error::invalid(format!("write failed: {e}")))?;
                }
            }
        }
        Ok(())
    }

    /// Raw triples in file order. Malformed lines error with their line number.
    pub fn read_edge_list(path: &Path) -> Result<Vec<(usize, usize, f64)>> {
        let file = std::fs::File::open(path)
            .map_err(|e| Error::invalid(format!("cannot open {}: {e}", path.display())))?;
        let reader = std::io::BufReader::new(file);
        let mut edges = Vec::new();
        for (lineno, line) in reader.lines().enumerate() {
            let line = line.map_err(|e| Error::Parse {
                line: lineno + 1,
                msg: format!("read failure: {e}"),
            })?;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let mut parts = trimmed.split_whitespace();
            let parse = |tok: Option<&str>, what: &str, lineno: usize| -> Result<String> {
                tok.map(str::to_owned).ok_or(Error::Parse {
                    line: lineno + 1,
                    msg: format!("missing {what}"),
                })
            };
            let src: usize = parse(parts.next(), "source index", lineno)?
                .parse()
                .map_err(|e| Error::Parse {
                    line: lineno + 1,
                    msg: format!("bad source index: {e}"),
                })?;
            let dst: usize = parse(parts.next(), "destination index", lineno)?
                .parse()
                .map_err(|e| Error::Parse {
                    line: lineno + 1,
                    msg: format!("bad destination index: {e}"),
                })?;
            let w: f64 = match parts.next() {
                Some(tok) => tok.parse().map_err(|e| Error::Parse {
                    line: lineno + 1,
                    msg: format!("bad weight: {e}"),
                })?,
                None => 1.0,
            };
            if parts.next().is_some() {
                return Err(Error::Parse {
                    line: lineno + 1,
                    msg: "trailing tokens after weight".into(),
                });
            }
            edges.push((src, dst, w));
        }
        Ok(edges)
    }

    /// Assemble an adjacency matrix from triples; duplicate edges sum.
    pub fn adjacency_from_edges(n: usize, edges: &[(usize, usize, f64)]) -> Result<DMatrix<f64>> {
        let mut a = DMatrix::<f64>::zeros(n, n);
        for &(src, dst, w) in edges {
            if src >= n || dst >= n {
                return Err(Error::invalid(format!("edge ({src},{dst}) out of range for n={n}")));
            }
            a[(dst, src)] += w;
        }
        Ok(a)
    }
}
