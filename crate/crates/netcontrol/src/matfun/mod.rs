//! Dense matrix-function kernels.
//!
//! Everything here works on `nalgebra::DMatrix<f64>` and is pure: no globals, no
//! interior mutability, safe to call from any number of threads.

mod expm;
mod lyapunov;
mod modes;
mod schur;
mod split;

pub use expm::expm;
pub use lyapunov::{
    lyapunov_quasi_triangular, solve_are_via_lyapunov, solve_lyapunov, sylvester_quasi_triangular,
    AreSide, SchurLyapunovSolver,
};
pub use modes::generalized_modes;
pub use schur::{real_schur, schur_eigenvalues, RealSchur};
pub use split::{split_stable_antistable, SpectralSplit};

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Default tolerance for "eigenvalue on the imaginary axis" tests: the value is
/// relative to the Frobenius norm of the matrix (absolute floor for A = 0).
pub fn default_axis_tol(a: &DMatrix<f64>) -> f64 {
    1e-9 * a.norm().max(1e-300)
}

pub(crate) fn check_square(a: &DMatrix<f64>, what: &str) -> Result<()> {
    if a.nrows() != a.ncols() || a.nrows() == 0 {
        return Err(Error::invalid(format!(
            "{what} must be square and nonempty, got {}x{}",
            a.nrows(),
            a.ncols()
        )));
    }
    if a.iter().any(|x| !x.is_finite()) {
        return Err(Error::invalid(format!("{what} contains non-finite entries")));
    }
    Ok(())
}

/// (X + X^T) / 2, used on every symmetric output before it is returned.
pub(crate) fn symmetrize(x: &DMatrix<f64>) -> DMatrix<f64> {
    let mut s = x.clone();
    let n = x.nrows();
    for i in 0..n {
        for j in (i + 1)..n {
            let v = 0.5 * (x[(i, j)] + x[(j, i)]);
            s[(i, j)] = v;
            s[(j, i)] = v;
        }
    }
    s
}
