//! Ordered stable/antistable invariant-subspace splitting.
//!
//! The change of basis is built from the reordered real Schur form: with
//! A = Q T Q^T, T = [[T11, T12], [0, T22]] (stable block first), the Sylvester
//! solution T11 Y - Y T22 = -T12 decouples the blocks, giving
//! V A V^{-1} = blkdiag(T11, T22) for V = [[I, -Y], [0, I]] Q^T. Any V satisfying
//! the invariants is acceptable; energies in the original basis do not depend on
//! the choice.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::matfun::lyapunov::sylvester_quasi_triangular;
use crate::matfun::schur::real_schur;
use crate::matfun::check_square;

/// Basis change separating the stable and antistable invariant subspaces.
#[derive(Debug, Clone)]
pub struct SpectralSplit {
    /// V with V A V^{-1} = blkdiag(stable, antistable).
    pub v: DMatrix<f64>,
    pub v_inv: DMatrix<f64>,
    /// Dimension of the stable block (eigenvalues with Re < -eps_axis).
    pub k_stable: usize,
    /// Stable block, quasi-upper-triangular, k x k.
    pub block_stable: DMatrix<f64>,
    /// Antistable block, quasi-upper-triangular, (n-k) x (n-k).
    pub block_antistable: DMatrix<f64>,
}

impl SpectralSplit {
    pub fn n(&self) -> usize {
        self.v.nrows()
    }
}

/// Split A into stable/antistable blocks. Errors with [`Error::AxisEigenvalue`]
/// if any eigenvalue lies within `eps_axis` of the imaginary axis.
pub fn split_stable_antistable(a: &DMatrix<f64>, eps_axis: f64) -> Result<SpectralSplit> {
    check_square(a, "split input")?;
    let n = a.nrows();
    let mut schur = real_schur(a)?;

    for e in schur.eigenvalues() {
        if e.re.abs() <= eps_axis {
            return Err(Error::AxisEigenvalue {
                real: e.re,
                imag: e.im,
                tol: eps_axis,
            });
        }
    }

    let k = schur.reorder(|re| re < 0.0)?;
    let t = &schur.t;
    let q = &schur.q;

    let t11 = t.view((0, 0), (k, k)).into_owned();
    let t22 = t.view((k, k), (n - k, n - k)).into_owned();

    let (v, v_inv) = if k == 0 || k == n {
        (q.transpose(), q.clone())
    } else {
        let t12 = t.view((0, k), (k, n - k)).into_owned();
        let y = sylvester_quasi_triangular(&t11, &t22, &(-t12))?;
        // V = [[I, -Y], [0, I]] Q^T ;  V^{-1} = Q [[I, Y], [0, I]]
        let mut s_inv = DMatrix::<f64>::identity(n, n);
        s_inv.view_mut((0, k), (k, n - k)).copy_from(&(-&y));
        let mut s = DMatrix::<f64>::identity(n, n);
        s.view_mut((0, k), (k, n - k)).copy_from(&y);
        (&s_inv * q.transpose(), q * s)
    };

    let split = SpectralSplit {
        v,
        v_inv,
        k_stable: k,
        block_stable: t11,
        block_antistable: t22,
    };
    validate_split(a, &split)?;
    Ok(split)
}

fn validate_split(a: &DMatrix<f64>, s: &SpectralSplit) -> Result<()> {
    let n = a.nrows();
    let id_resid = (&s.v * &s.v_inv - DMatrix::<f64>::identity(n, n)).norm() / n as f64;
    if id_resid >= 1e-10 {
        return Err(Error::numerical(format!(
            "split basis inverse residual {id_resid:.3e}"
        )));
    }
    let mut block = DMatrix::<f64>::zeros(n, n);
    let k = s.k_stable;
    block.view_mut((0, 0), (k, k)).copy_from(&s.block_stable);
    block
        .view_mut((k, k), (n - k, n - k))
        .copy_from(&s.block_antistable);
    let resid = (&s.v * a * &s.v_inv - &block).norm() / a.norm().max(1e-300);
    if resid >= 1e-8 {
        return Err(Error::numerical(format!(
            "split block-diagonalization residual {resid:.3e}"
        )));
    }
    Ok(())
}
