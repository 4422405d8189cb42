//! Real Schur form with eigenvalue reordering.
//!
//! `real_schur` wraps nalgebra's Francis-QR Schur decomposition and normalizes the
//! quasi-triangular factor: exact zeros below the block diagonal, and any 2x2
//! diagonal block with real eigenvalues is rotated into two 1x1 blocks. On top of
//! that, `RealSchur::reorder` swaps adjacent diagonal blocks (via a small Sylvester
//! solve and an orthogonal basis update) until all selected eigenvalues come first.

use nalgebra::{Complex, DMatrix, Matrix2};

use crate::error::{Error, Result};
use crate::matfun::check_square;

/// A = Q T Q^T with Q orthogonal and T quasi-upper-triangular whose 2x2 diagonal
/// blocks all carry complex-conjugate eigenvalue pairs.
#[derive(Debug, Clone)]
pub struct RealSchur {
    pub q: DMatrix<f64>,
    pub t: DMatrix<f64>,
}

pub fn real_schur(a: &DMatrix<f64>) -> Result<RealSchur> {
    check_square(a, "Schur input")?;
    let n = a.nrows();
    let schur = nalgebra::linalg::Schur::try_new(a.clone(), 1e-14, 200_000)
        .ok_or_else(|| Error::numerical("Schur iteration failed to converge"))?;
    let (q, mut t) = schur.unpack();
    let mut q = q;

    // Exact zeros below the first subdiagonal.
    for j in 0..n {
        for i in (j + 2)..n {
            t[(i, j)] = 0.0;
        }
    }
    // Kill negligible subdiagonal entries, then split real-eigenvalue 2x2 blocks.
    let scale = t.norm().max(1e-300);
    let mut i = 0;
    while i + 1 < n {
        if t[(i + 1, i)].abs() <= 1e-15 * scale {
            t[(i + 1, i)] = 0.0;
            i += 1;
            continue;
        }
        let (p, r) = (t[(i, i)], t[(i, i + 1)]);
        let (c, d) = (t[(i + 1, i)], t[(i + 1, i + 1)]);
        let disc = (p - d) * (p - d) + 4.0 * r * c;
        if disc >= 0.0 {
            split_real_block(&mut t, &mut q, i, p, d, c, disc);
        }
        i += 2;
    }
    Ok(RealSchur { q, t })
}

/// Rotate a 2x2 diagonal block with real eigenvalues into upper-triangular form.
fn split_real_block(
    t: &mut DMatrix<f64>,
    q: &mut DMatrix<f64>,
    i: usize,
    p: f64,
    d: f64,
    c: f64,
    disc: f64,
) {
    let n = t.nrows();
    let sq = disc.sqrt();
    let l1 = 0.5 * (p + d + sq);
    let l2 = 0.5 * (p + d - sq);
    // Eigenvector (lambda - d, c): pick the eigenvalue farther from d.
    let lam = if (l1 - d).abs() >= (l2 - d).abs() { l1 } else { l2 };
    let (v1, v2) = (lam - d, c);
    let r = (v1 * v1 + v2 * v2).sqrt();
    if r == 0.0 {
        t[(i + 1, i)] = 0.0;
        return;
    }
    let (cs, sn) = (v1 / r, v2 / r);

    // Rows i, i+1: G * T
    for j in 0..n {
        let (a0, a1) = (t[(i, j)], t[(i + 1, j)]);
        t[(i, j)] = cs * a0 + sn * a1;
        t[(i + 1, j)] = -sn * a0 + cs * a1;
    }
    // Columns i, i+1: T * G^T
    for k in 0..n {
        let (a0, a1) = (t[(k, i)], t[(k, i + 1)]);
        t[(k, i)] = cs * a0 + sn * a1;
        t[(k, i + 1)] = -sn * a0 + cs * a1;
    }
    // Q * G^T
    for k in 0..n {
        let (a0, a1) = (q[(k, i)], q[(k, i + 1)]);
        q[(k, i)] = cs * a0 + sn * a1;
        q[(k, i + 1)] = -sn * a0 + cs * a1;
    }
    t[(i + 1, i)] = 0.0;
}

impl RealSchur {
    /// Diagonal block layout as (start index, size) with size 1 or 2.
    pub fn blocks(&self) -> Vec<(usize, usize)> {
        block_structure(&self.t)
    }

    /// Eigenvalues read off the quasi-triangular factor.
    pub fn eigenvalues(&self) -> Vec<Complex<f64>> {
        schur_eigenvalues(&self.t)
    }

    /// Reorder so that all blocks whose eigenvalue real part satisfies `select`
    /// come first. Returns the total dimension of the selected leading group.
    pub fn reorder(&mut self, select: impl Fn(f64) -> bool) -> Result<usize> {
        loop {
            let blocks = self.blocks();
            let flags: Vec<bool> = blocks
                .iter()
                .map(|&(s, _)| select(block_real_part(&self.t, s)))
                .collect();
            let mut swapped = false;
            for w in 0..blocks.len().saturating_sub(1) {
                if !flags[w] && flags[w + 1] {
                    self.swap_adjacent(blocks[w].0, blocks[w].1, blocks[w + 1].1)?;
                    swapped = true;
                    break;
                }
            }
            if !swapped {
                break;
            }
        }
        let mut k = 0;
        for (s, sz) in self.blocks() {
            if select(block_real_part(&self.t, s)) {
                k += sz;
            } else {
                break;
            }
        }
        Ok(k)
    }

    /// Swap adjacent diagonal blocks of sizes p and q starting at row p1.
    fn swap_adjacent(&mut self, p1: usize, p: usize, q: usize) -> Result<()> {
        let n = self.t.nrows();
        let p2 = p1 + p;
        let a11 = self.t.view((p1, p1), (p, p)).into_owned();
        let a12 = self.t.view((p1, p2), (p, q)).into_owned();
        let a22 = self.t.view((p2, p2), (q, q)).into_owned();

        // A11 X - X A22 = A12, vectorized as (I ⊗ A11 - A22^T ⊗ I) x = vec(A12).
        let m = p * q;
        let mut sys = DMatrix::<f64>::zeros(m, m);
        for col in 0..q {
            for row in 0..p {
                let eq = col * p + row;
                for k in 0..p {
                    sys[(eq, col * p + k)] += a11[(row, k)];
                }
                for l in 0..q {
                    sys[(eq, l * p + row)] -= a22[(l, col)];
                }
            }
        }
        let rhs = nalgebra::DVector::from_iterator(m, a12.iter().copied());
        let x = sys
            .full_piv_lu()
            .solve(&rhs)
            .ok_or_else(|| Error::numerical("block swap: coincident eigenvalues"))?;
        let xmat = DMatrix::from_iterator(p, q, x.iter().copied());

        // Orthonormal basis with the invariant subspace span([-X; I]) leading.
        let mut mqr = DMatrix::<f64>::zeros(p + q, p + q);
        mqr.view_mut((0, 0), (p, q)).copy_from(&(-&xmat));
        mqr.view_mut((p, 0), (q, q))
            .copy_from(&DMatrix::identity(q, q));
        mqr.view_mut((0, q), (p, p))
            .copy_from(&DMatrix::identity(p, p));
        let g = mqr.qr().q();

        // Similarity transform on the affected rows/columns.
        let rows = self.t.view((p1, 0), (p + q, n)).into_owned();
        self.t.view_mut((p1, 0), (p + q, n)).copy_from(&(g.transpose() * rows));
        let cols = self.t.view((0, p1), (n, p + q)).into_owned();
        self.t.view_mut((0, p1), (n, p + q)).copy_from(&(cols * &g));
        let qcols = self.q.view((0, p1), (n, p + q)).into_owned();
        self.q.view_mut((0, p1), (n, p + q)).copy_from(&(qcols * &g));

        // The new leading block has size q: enforce exact zeros below it.
        for j in p1..p1 + q {
            for i in (p1 + q)..(p1 + p + q) {
                self.t[(i, j)] = 0.0;
            }
        }
        for j in 0..n {
            for i in (j + 2)..n {
                self.t[(i, j)] = 0.0;
            }
        }
        // A swap can hand back a 2x2 block with real eigenvalues; re-split.
        let mut i = p1;
        while i + 1 < (p1 + p + q).min(n) {
            if self.t[(i + 1, i)] == 0.0 {
                i += 1;
                continue;
            }
            let (pp, rr) = (self.t[(i, i)], self.t[(i, i + 1)]);
            let (cc, dd) = (self.t[(i + 1, i)], self.t[(i + 1, i + 1)]);
            let disc = (pp - dd) * (pp - dd) + 4.0 * rr * cc;
            if disc >= 0.0 {
                split_real_block(&mut self.t, &mut self.q, i, pp, dd, cc, disc);
            }
            i += 2;
        }
        Ok(())
    }
}

/// Shared real part of the eigenvalue(s) of the block starting at `s`.
fn block_real_part(t: &DMatrix<f64>, s: usize) -> f64 {
    let n = t.nrows();
    if s + 1 < n && t[(s + 1, s)] != 0.0 {
        0.5 * (t[(s, s)] + t[(s + 1, s + 1)])
    } else {
        t[(s, s)]
    }
}

fn block_structure(t: &DMatrix<f64>) -> Vec<(usize, usize)> {
    let n = t.nrows();
    let mut blocks = Vec::new();
    let mut i = 0;
    while i < n {
        if i + 1 < n && t[(i + 1, i)] != 0.0 {
            blocks.push((i, 2));
            i += 2;
        } else {
            blocks.push((i, 1));
            i += 1;
        }
    }
    blocks
}

pub fn schur_eigenvalues(t: &DMatrix<f64>) -> Vec<Complex<f64>> {
    let mut vals = Vec::with_capacity(t.nrows());
    for (s, sz) in block_structure(t) {
        if sz == 1 {
            vals.push(Complex::new(t[(s, s)], 0.0));
        } else {
            let blk = Matrix2::new(t[(s, s)], t[(s, s + 1)], t[(s + 1, s)], t[(s + 1, s + 1)]);
            let mean = 0.5 * (blk[(0, 0)] + blk[(1, 1)]);
            let disc = (blk[(0, 0)] - blk[(1, 1)]).powi(2) + 4.0 * blk[(0, 1)] * blk[(1, 0)];
            let im = (-disc).max(0.0).sqrt() * 0.5;
            vals.push(Complex::new(mean, im));
            vals.push(Complex::new(mean, -im));
        }
    }
    vals
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn random_matrix(n: usize, seed: u64) -> DMatrix<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        DMatrix::from_fn(n, n, |_, _| rng.random::<f64>() * 2.0 - 1.0)
    }

    fn assert_schur_valid(a: &DMatrix<f64>, s: &RealSchur) {
        let n = a.nrows();
        let resid = (&s.q * &s.t * s.q.transpose() - a).norm() / a.norm().max(1.0);
        assert!(resid < 1e-12, "reconstruction residual {resid:e}");
        let orth = (s.q.transpose() * &s.q - DMatrix::identity(n, n)).norm();
        assert!(orth < 1e-12, "orthogonality {orth:e}");
        // quasi-triangular, and 2x2 blocks must be complex pairs
        for (st, sz) in s.blocks() {
            if sz == 2 {
                let disc = (s.t[(st, st)] - s.t[(st + 1, st + 1)]).powi(2)
                    + 4.0 * s.t[(st, st + 1)] * s.t[(st + 1, st)];
                assert!(disc < 0.0, "2x2 block with real eigenvalues survived");
            }
        }
    }

    #[test]
    fn decomposes_random_matrices() {
        for seed in 0..5 {
            let a = random_matrix(12, seed);
            let s = real_schur(&a).unwrap();
            assert_schur_valid(&a, &s);
        }
    }

    #[test]
    fn eigenvalues_match_nalgebra() {
        let a = random_matrix(10, 42);
        let s = real_schur(&a).unwrap();
        let mut ours: Vec<_> = s.eigenvalues();
        let mut theirs: Vec<_> = a.complex_eigenvalues().iter().copied().collect();
        let key = |c: &Complex<f64>| (c.re, c.im);
        ours.sort_by(|x, y| key(x).partial_cmp(&key(y)).unwrap());
        theirs.sort_by(|x, y| key(x).partial_cmp(&key(y)).unwrap());
        for (u, v) in ours.iter().zip(theirs.iter()) {
            assert!((u - v).norm() < 1e-8, "{u} vs {v}");
        }
    }

    #[test]
    fn reorder_brings_stable_first() {
        for seed in 0..8 {
            let mut rng = ChaCha8Rng::seed_from_u64(1000 + seed);
            let n = 10;
            // Mix of clearly stable and clearly antistable eigenvalues.
            let mut a = DMatrix::<f64>::zeros(n, n);
            for i in 0..n {
                a[(i, i)] = if rng.random::<bool>() { -1.0 } else { 1.0 }
                    * (0.5 + rng.random::<f64>());
            }
            let basis = random_matrix(n, 500 + seed);
            let binv = basis.clone().try_inverse().unwrap();
            let full = &basis * &a * &binv;
            let expected_stable = (0..n).filter(|&i| a[(i, i)] < 0.0).count();

            let mut s = real_schur(&full).unwrap();
            let k = s.reorder(|re| re < 0.0).unwrap();
            assert_eq!(k, expected_stable);
            assert_schur_valid(&full, &s);
            let eigs = s.eigenvalues();
            for (idx, e) in eigs.iter().enumerate() {
                if idx < k {
                    assert!(e.re < 0.0);
                } else {
                    assert!(e.re > 0.0);
                }
            }
        }
    }

    #[test]
    fn reorder_with_complex_pairs() {
        for seed in 0..6 {
            let a = random_matrix(11, 90 + seed);
            let mut s = real_schur(&a).unwrap();
            let stable_expected = a.complex_eigenvalues().iter().filter(|e| e.re < 0.0).count();
            let k = s.reorder(|re| re < 0.0).unwrap();
            assert_eq!(k, stable_expected);
            assert_schur_valid(&a, &s);
        }
    }
}
