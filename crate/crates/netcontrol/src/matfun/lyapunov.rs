//! Lyapunov and Riccati solvers via Schur-form back-substitution (Bartels–Stewart).

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::matfun::schur::{real_schur, RealSchur};
use crate::matfun::{check_square, default_axis_tol, symmetrize};

/// Solve F X + X F^T + Q = 0 for symmetric X, with F stable and Q symmetric PSD.
pub fn solve_lyapunov(f: &DMatrix<f64>, q: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let solver = SchurLyapunovSolver::new(f)?;
    solver.solve(q)
}

/// Schur factorization of F, reusable across many right-hand sides Q.
pub struct SchurLyapunovSolver {
    schur: RealSchur,
    q_norm_scale: f64,
}

impl SchurLyapunovSolver {
    pub fn new(f: &DMatrix<f64>) -> Result<Self> {
        check_square(f, "Lyapunov F")?;
        let schur = real_schur(f)?;
        let tol = default_axis_tol(f);
        for e in schur.eigenvalues() {
            if e.re >= -tol {
                return Err(Error::NotStable(format!(
                    "Lyapunov F has eigenvalue {:.3e}+{:.3e}i with real part >= -{:.1e}",
                    e.re, e.im, tol
                )));
            }
        }
        Ok(Self {
            schur,
            q_norm_scale: f.norm(),
        })
    }

    pub fn solve(&self, q: &DMatrix<f64>) -> Result<DMatrix<f64>> {
        check_square(q, "Lyapunov Q")?;
        let n = self.schur.t.nrows();
        if q.nrows() != n {
            return Err(Error::invalid("Lyapunov Q dimension mismatch"));
        }
        let qs = symmetrize(q);
        // F = U T U^T  =>  T Y + Y T^T + U^T Q U = 0, X = U Y U^T.
        let u = &self.schur.q;
        let c = -(u.transpose() * &qs * u);
        let y = lyapunov_quasi_triangular(&self.schur.t, &c)?;
        let x = symmetrize(&(u * y * u.transpose()));

        let fx = {
            let f = u * &self.schur.t * u.transpose();
            &f * &x + &x * f.transpose() + &qs
        };
        let resid = fx.norm() / qs.norm().max(1.0);
        if resid > 1e-9 {
            return Err(Error::numerical(format!(
                "Lyapunov residual {resid:.3e} exceeds 1e-9 (norm F = {:.3e})",
                self.q_norm_scale
            )));
        }
        Ok(x)
    }
}

/// Solve T Y + Y T^T = C with T quasi-upper-triangular (block back-substitution).
pub fn lyapunov_quasi_triangular(t: &DMatrix<f64>, c: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let n = t.nrows();
    let blocks = blocks_of(t);
    let nb = blocks.len();
    let mut y = DMatrix::<f64>::zeros(n, n);

    for jb in (0..nb).rev() {
        let (js, jsz) = blocks[jb];
        for ib in (0..nb).rev() {
            let (is, isz) = blocks[ib];
            // R = C_ij - sum_{k>i} T_ik Y_kj - sum_{l>j} Y_il T_jl^T
            let mut r = c.view((is, js), (isz, jsz)).into_owned();
            if is + isz < n {
                let t_right = t.view((is, is + isz), (isz, n - is - isz));
                let y_below = y.view((is + isz, js), (n - is - isz, jsz));
                r -= t_right * y_below;
            }
            if js + jsz < n {
                let y_right = y.view((is, js + jsz), (isz, n - js - jsz));
                let t_jrow = t.view((js, js + jsz), (jsz, n - js - jsz));
                r -= y_right * t_jrow.transpose();
            }
            let tii = t.view((is, is), (isz, isz)).into_owned();
            let tjj = t.view((js, js), (jsz, jsz)).into_owned();
            let sol = solve_small_sylvester(&tii, &tjj, &r, 1.0)?;
            y.view_mut((is, js), (isz, jsz)).copy_from(&sol);
        }
    }
    Ok(y)
}

/// Solve Ta Y - Y Tb = C with Ta, Tb quasi-upper-triangular of different sizes.
pub fn sylvester_quasi_triangular(
    ta: &DMatrix<f64>,
    tb: &DMatrix<f64>,
    c: &DMatrix<f64>,
) -> Result<DMatrix<f64>> {
    let (p, q) = (ta.nrows(), tb.nrows());
    if c.nrows() != p || c.ncols() != q {
        return Err(Error::invalid("Sylvester dimension mismatch"));
    }
    let ablocks = blocks_of(ta);
    let bblocks = blocks_of(tb);
    let mut y = DMatrix::<f64>::zeros(p, q);

    for &(js, jsz) in bblocks.iter() {
        for &(is, isz) in ablocks.iter().rev() {
            // R = C_ij - sum_{k>i} Ta_ik Y_kj + sum_{l<j} Y_il Tb_lj
            let mut r = c.view((is, js), (isz, jsz)).into_owned();
            if is + isz < p {
                let ta_right = ta.view((is, is + isz), (isz, p - is - isz));
                let y_below = y.view((is + isz, js), (p - is - isz, jsz));
                r -= ta_right * y_below;
            }
            if js > 0 {
                let y_left = y.view((is, 0), (isz, js));
                let tb_col = tb.view((0, js), (js, jsz));
                r += y_left * tb_col;
            }
            let tii = ta.view((is, is), (isz, isz)).into_owned();
            let tjj = tb.view((js, js), (jsz, jsz)).into_owned();
            // Ta_ii Y - Y Tb_jj = R  is the sign = -1 case of the small solver.
            let sol = solve_small_sylvester(&tii, &tjj, &r, -1.0)?;
            y.view_mut((is, js), (isz, jsz)).copy_from(&sol);
        }
    }
    Ok(y)
}

/// Solve A Y + sign * Y B^T = R for block sizes up to 2x2 (sign=+1),
/// or A Y - Y B = R when sign=-1.
fn solve_small_sylvester(
    a: &DMatrix<f64>,
    b: &DMatrix<f64>,
    r: &DMatrix<f64>,
    sign: f64,
) -> Result<DMatrix<f64>> {
    let (p, q) = (a.nrows(), b.nrows());
    let m = p * q;
    let mut sys = DMatrix::<f64>::zeros(m, m);
    for col in 0..q {
        for row in 0..p {
            let eq = col * p + row;
            for k in 0..p {
                sys[(eq, col * p + k)] += a[(row, k)];
            }
            for l in 0..q {
                // sign=+1: (Y B^T)_{row,col} = sum_l Y_{row,l} B_{col,l}
                // sign=-1: (Y B)_{row,col}   = sum_l Y_{row,l} B_{l,col}
                let coeff = if sign > 0.0 { b[(col, l)] } else { -b[(l, col)] };
                sys[(eq, l * p + row)] += coeff;
            }
        }
    }
    let rhs = DVector::from_iterator(m, r.iter().copied());
    let sol = sys
        .full_piv_lu()
        .solve(&rhs)
        .ok_or_else(|| Error::numerical("singular small Sylvester block (eigenvalue clash)"))?;
    Ok(DMatrix::from_iterator(p, q, sol.iter().copied()))
}

fn blocks_of(t: &DMatrix<f64>) -> Vec<(usize, usize)> {
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

/// Which algebraic Riccati equation to solve through its Lyapunov dual.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AreSide {
    /// A stable: P = K^{-1} with A K + K A^T + B B^T = 0 (reachability side).
    Reach,
    /// A antistable: P = L^{-1} with (-A) L + L (-A)^T + B B^T = 0.
    Ctrl,
}

/// Riccati solution P = L^{-1} through the corresponding Lyapunov equation.
/// The closed loop A - B B^T P is antistable for `Reach` and stable for `Ctrl`.
pub fn solve_are_via_lyapunov(
    a: &DMatrix<f64>,
    b: &DMatrix<f64>,
    side: AreSide,
) -> Result<DMatrix<f64>> {
    check_square(a, "ARE A")?;
    if b.nrows() != a.nrows() {
        return Err(Error::invalid("ARE: B row count must match A"));
    }
    let q = b * b.transpose();
    let l = match side {
        AreSide::Reach => solve_lyapunov(a, &q)?,
        AreSide::Ctrl => solve_lyapunov(&(-a), &q)?,
    };
    let eig = l.clone().symmetric_eigen();
    let lmax = eig.eigenvalues.max();
    let lmin = eig.eigenvalues.min();
    let cond = if lmin > 0.0 { lmax / lmin } else { f64::INFINITY };
    if !(cond < 1e12) {
        let worst_idx = eig.eigenvalues.imin();
        return Err(Error::SingularGramian {
            cond,
            limit: 1e12,
            worst_direction: eig.eigenvectors.column(worst_idx).iter().copied().collect(),
        });
    }
    let p = symmetrize(
        &l.clone()
            .cholesky()
            .ok_or_else(|| Error::numerical("ARE: Gramian not positive definite"))?
            .inverse(),
    );

    // Residual of P(-A) + (-A^T)P + P B B^T P = 0 (ctrl) or PA + A^T P + PBB^T P = 0.
    let s = match side {
        AreSide::Reach => &p * a + a.transpose() * &p + &p * &q * &p,
        AreSide::Ctrl => &p * (-a) + (-a.transpose()) * &p + &p * &q * &p,
    };
    let rel = s.norm() / (p.norm() * a.norm()).max(1.0);
    if rel > 1e-8 {
        return Err(Error::numerical(format!("ARE residual {rel:.3e} exceeds 1e-8")));
    }
    Ok(p)
}


#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::dmatrix;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn scalar_lyapunov() {
        // -2x + 1 = 0 -> x = 0.5
        let f = dmatrix![-1.0];
        let q = dmatrix![1.0];
        let x = solve_lyapunov(&f, &q).unwrap();
        assert!((x[(0, 0)] - 0.5).abs() < 1e-14);
    }

    #[test]
    fn decoupled_lyapunov() {
        let f = -DMatrix::<f64>::identity(2, 2);
        let q = DMatrix::<f64>::identity(2, 2);
        let x = solve_lyapunov(&f, &q).unwrap();
        assert!((x - DMatrix::identity(2, 2) * 0.5).norm() < 1e-14);
    }

    #[test]
    fn rejects_unstable_f() {
        let f = dmatrix![1.0, 0.0; 0.0, -2.0];
        let q = DMatrix::identity(2, 2);
        assert!(matches!(solve_lyapunov(&f, &q), Err(Error::NotStable(_))));
    }

    /// Independent oracle: adaptive Simpson quadrature of the defining integral
    /// int_0^tf e^{F tau} Q e^{F^T tau} d tau. Lives only in test code.
    pub(crate) fn quadrature_gramian(
        f: &DMatrix<f64>,
        q: &DMatrix<f64>,
        tf: f64,
        tol: f64,
    ) -> DMatrix<f64> {
        use crate::matfun::expm;
        let eval = |t: f64| -> DMatrix<f64> {
            let e = expm(f, t).unwrap();
            &e * q * e.transpose()
        };
        fn simpson(
            eval: &dyn Fn(f64) -> DMatrix<f64>,
            a: f64,
            b: f64,
            fa: &DMatrix<f64>,
            fm: &DMatrix<f64>,
            fb: &DMatrix<f64>,
            tol: f64,
            depth: usize,
        ) -> DMatrix<f64> {
            let m = 0.5 * (a + b);
            let lm = 0.5 * (a + m);
            let rm = 0.5 * (m + b);
            let flm = eval(lm);
            let frm = eval(rm);
            let whole = (fa + fm * 4.0 + fb) * ((b - a) / 6.0);
            let left = (fa + &flm * 4.0 + fm) * ((m - a) / 6.0);
            let right = (fm + &frm * 4.0 + fb) * ((b - m) / 6.0);
            let refined = &left + &right;
            if depth == 0 || (&refined - &whole).norm() < 15.0 * tol {
                refined
            } else {
                simpson(eval, a, m, fa, &flm, fm, tol / 2.0, depth - 1)
                    + simpson(eval, m, b, fm, &frm, fb, tol / 2.0, depth - 1)
            }
        }
        // Split [0, tf] into a few panels to seed the recursion.
        let panels = 16;
        let h = tf / panels as f64;
        let mut acc = DMatrix::<f64>::zeros(f.nrows(), f.nrows());
        for k in 0..panels {
            let a = k as f64 * h;
            let b = a + h;
            let fa = eval(a);
            let fm = eval(0.5 * (a + b));
            let fb = eval(b);
            acc += simpson(&eval, a, b, &fa, &fm, &fb, tol / panels as f64, 28);
        }
        acc
    }

    #[test]
    fn matches_quadrature_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let n = 8;
        let raw = DMatrix::from_fn(n, n, |_, _| rng.random::<f64>() - 0.5);
        let f = raw - DMatrix::identity(n, n) * 2.0; // shifted disk, stable
        let b = DMatrix::from_fn(n, 3, |_, _| rng.random::<f64>() - 0.5);
        let q = &b * b.transpose();

        let x = solve_lyapunov(&f, &q).unwrap();
        let oracle = quadrature_gramian(&f, &q, 50.0, 1e-11);
        let rel = (&x - &oracle).norm() / x.norm();
        assert!(rel < 1e-6, "relative error vs quadrature {rel:e}");
    }

    #[test]
    fn are_scalar_cases() {
        // ctrl: A=[2], B=[1]: L = 1/4, P = 4
        let p = solve_are_via_lyapunov(&dmatrix![2.0], &dmatrix![1.0], AreSide::Ctrl).unwrap();
        assert!((p[(0, 0)] - 4.0).abs() < 1e-12);
        // reach: A=[-1], B=[1]: K = 1/2, P = 2
        let p = solve_are_via_lyapunov(&dmatrix![-1.0], &dmatrix![1.0], AreSide::Reach).unwrap();
        assert!((p[(0, 0)] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn are_closes_the_loop() {
        // Random antistable A: the feedback A - B B^T P must be stable.
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let n = 6;
        let raw = DMatrix::from_fn(n, n, |_, _| rng.random::<f64>() - 0.5);
        let a = raw + DMatrix::identity(n, n) * 2.0;
        let b = DMatrix::from_fn(n, 2, |_, _| rng.random::<f64>() - 0.5);
        let p = solve_are_via_lyapunov(&a, &b, AreSide::Ctrl).unwrap();
        let closed = &a - &b * b.transpose() * &p;
        for e in closed.complex_eigenvalues().iter() {
            assert!(e.re < 0.0, "closed-loop eigenvalue {e} not stable");
        }
    }

    #[test]
    fn sylvester_quasi_triangular_blocks() {
        // Upper-triangular Ta (2x2 complex block) and Tb with disjoint spectra.
        let ta = dmatrix![-1.0, 3.0, 0.5;
                          -2.0, -1.0, 0.2;
                           0.0, 0.0, -3.0];
        let tb = dmatrix![2.0, 1.0;
                          0.0, 4.0];
        let c = dmatrix![1.0, 2.0; 0.0, 1.0; 2.0, -1.0];
        let y = sylvester_quasi_triangular(&ta, &tb, &c).unwrap();
        let resid = (&ta * &y - &y * &tb - &c).norm();
        assert!(resid < 1e-12, "residual {resid:e}");
    }
}
