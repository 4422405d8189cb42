//! Generalized symmetric-definite eigenproblem K phi = omega^2 M phi with M
//! diagonal positive: reduced to a standard symmetric problem on M^{-1/2} K M^{-1/2}.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::matfun::{check_square, symmetrize};

/// Solves (-omega^2 M + K) phi = 0 for M diagonal positive and K symmetric PSD.
///
/// Returns (omega, Phi) with omega ascending and the eigenvectors scaled so that
/// Phi^T M Phi = I (hence Phi^T K Phi = diag(omega^2)).
pub fn generalized_modes(m_diag: &DVector<f64>, k: &DMatrix<f64>) -> Result<(DVector<f64>, DMatrix<f64>)> {
    check_square(k, "stiffness K")?;
    let n = k.nrows();
    if m_diag.len() != n {
        return Err(Error::invalid("mass vector length must match K"));
    }
    if m_diag.iter().any(|&m| !(m > 0.0) || !m.is_finite()) {
        return Err(Error::invalid("masses must be positive and finite"));
    }
    let asym = (k - k.transpose()).norm() / k.norm().max(1e-300);
    if asym > 1e-10 {
        return Err(Error::invalid(format!(
            "stiffness matrix asymmetric: relative deviation {asym:.3e}"
        )));
    }

    let inv_sqrt = DVector::from_iterator(n, m_diag.iter().map(|&m| 1.0 / m.sqrt()));
    let mut s = symmetrize(k);
    for i in 0..n {
        for j in 0..n {
            s[(i, j)] *= inv_sqrt[i] * inv_sqrt[j];
        }
    }
    let eig = s.symmetric_eigen();

    // Ascending frequencies; tolerate tiny negative roundoff for PSD K.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].partial_cmp(&eig.eigenvalues[b]).unwrap());
    let lam_max = eig.eigenvalues.iter().fold(0.0f64, |acc, &l| acc.max(l.abs()));
    let mut omega = DVector::zeros(n);
    let mut phi = DMatrix::zeros(n, n);
    for (col, &idx) in order.iter().enumerate() {
        let lam = eig.eigenvalues[idx];
        if lam < -1e-10 * lam_max.max(1.0) {
            return Err(Error::invalid(format!(
                "stiffness matrix not positive semidefinite: eigenvalue {lam:.3e}"
            )));
        }
        omega[col] = lam.max(0.0).sqrt();
        for row in 0..n {
            phi[(row, col)] = eig.eigenvectors[(row, idx)] * inv_sqrt[row];
        }
    }
    Ok((omega, phi))
}
