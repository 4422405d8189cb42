//! Gramian construction and control-energy metrics.
//!
//! Four variants are supported:
//! * finite-horizon reachability W_r(t_f) = ∫ e^{Aτ} B Bᵀ e^{Aᵀτ} dτ and
//!   controllability-to-zero W_c(t_f) (the same integral with -A),
//! * their infinite-horizon limits through Lyapunov equations,
//! * the mixed Gramian: reachability of the stable part combined with
//!   controllability of the antistable part in a split basis,
//! * the explicit diagonal Gramian of coupled oscillators in the modal basis.
//!
//! Finite-horizon integrals use the augmented-exponential block method:
//! exp([[A, BBᵀ],[0, -Aᵀ]] t) carries the integral in its upper-right block, so
//! accuracy is tied to `expm` and no quadrature is needed.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::matfun::{
    self, default_axis_tol, expm, lyapunov_quasi_triangular, real_schur, schur_eigenvalues,
    split_stable_antistable, SpectralSplit,
};
use crate::oscillators::ModalDecomposition;

/// The pair (A, B) of a linear time-invariant system dx/dt = A x + B u.
#[derive(Debug, Clone)]
pub struct LinearSystem {
    pub a: DMatrix<f64>,
    pub b: DMatrix<f64>,
    /// Node indices when B is a selector of elementary columns.
    pub driver_set: Option<Vec<usize>>,
}

impl LinearSystem {
    pub fn new(a: DMatrix<f64>, b: DMatrix<f64>) -> Result<Self> {
        matfun::check_square(&a, "state matrix A")?;
        if b.nrows() != a.nrows() || b.ncols() == 0 {
            return Err(Error::invalid(format!(
                "input matrix B must be {}xm with m >= 1, got {}x{}",
                a.nrows(),
                b.nrows(),
                b.ncols()
            )));
        }
        if b.iter().any(|x| !x.is_finite()) {
            return Err(Error::invalid("input matrix B contains non-finite entries"));
        }
        for j in 0..b.ncols() {
            if b.column(j).norm() == 0.0 {
                return Err(Error::invalid(format!("column {j} of B is zero")));
            }
        }
        Ok(Self { a, b, driver_set: None })
    }

    /// B with elementary columns e_i for each driver node.
    pub fn with_drivers(a: DMatrix<f64>, drivers: &[usize]) -> Result<Self> {
        matfun::check_square(&a, "state matrix A")?;
        let n = a.nrows();
        if drivers.is_empty() {
            return Err(Error::invalid("driver set is empty"));
        }
        let mut seen = vec![false; n];
        let mut b = DMatrix::<f64>::zeros(n, drivers.len());
        for (j, &node) in drivers.iter().enumerate() {
            if node >= n {
                return Err(Error::invalid(format!("driver node {node} out of range (n={n})")));
            }
            if seen[node] {
                return Err(Error::invalid(format!("driver node {node} repeated")));
            }
            seen[node] = true;
            b[(node, j)] = 1.0;
        }
        Ok(Self { a, b, driver_set: Some(drivers.to_vec()) })
    }

    pub fn n(&self) -> usize {
        self.a.nrows()
    }

    pub fn m(&self) -> usize {
        self.b.ncols()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GramianKind {
    Reach,
    Ctrl,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GramianVariant {
    Reach,
    Ctrl,
    Mixed,
    ModalDiag,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Horizon {
    Finite(f64),
    Infinite,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GramianBasis {
    Original,
    Split,
    Modal,
}

/// A symmetric PSD Gramian tagged with its construction.
#[derive(Debug, Clone)]
pub struct GramianResult {
    pub w: DMatrix<f64>,
    pub kind: GramianVariant,
    pub horizon: Horizon,
    pub basis: GramianBasis,
}

/// Scalar summaries of the control energy encoded by a Gramian.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyMetrics {
    /// Smallest eigenvalue: worst-case direction (1/energy units).
    pub lambda_min: f64,
    /// Trace: inversely proportional to the average control energy.
    pub trace: f64,
    /// Trace of the inverse: proportional to the average control energy.
    pub trace_inv: f64,
    /// Condition number lambda_max / lambda_min.
    pub cond: f64,
}

const EXP_ARG_LIMIT: f64 = 650.0;

/// Above this value of (growth exponent) * t_f the augmented-exponential block
/// method loses accuracy to cancellation, and the integral is assembled from
/// the infinite-horizon Lyapunov solution instead.
const AUGMENTED_HORIZON_LIMIT: f64 = 8.0;

/// Finite-horizon Gramian of the requested kind.
pub fn finite_gramian(sys: &LinearSystem, t_f: f64, kind: GramianKind) -> Result<GramianResult> {
    if !(t_f > 0.0) || !t_f.is_finite() {
        return Err(Error::invalid("finite_gramian: t_f must be positive and finite"));
    }
    let a_eff = match kind {
        GramianKind::Reach => sys.a.clone(),
        GramianKind::Ctrl => -&sys.a,
    };
    let w = finite_integral(&a_eff, &(&sys.b * sys.b.transpose()), t_f)?;
    Ok(GramianResult {
        w,
        kind: match kind {
            GramianKind::Reach => GramianVariant::Reach,
            GramianKind::Ctrl => GramianVariant::Ctrl,
        },
        horizon: Horizon::Finite(t_f),
        basis: GramianBasis::Original,
    })
}

/// ∫_0^{t_f} e^{Aτ} Q e^{Aᵀτ} dτ for symmetric PSD Q.
///
/// Dispatch on the spectrum of A:
/// * small growth * t_f (including every purely oscillatory A): augmented
///   exponential, the integral read off exp([[A, Q],[0, -Aᵀ]] t_f),
/// * stable A at long horizons: W(t) = W∞ - e^{At} W∞ e^{Aᵀt} through the
///   Lyapunov solution (all factors decay, no cancellation blowup),
/// * antistable A: the stable route on -A plus the reach/ctrl identity
///   W_r(t) = e^{At} W_c(t) e^{Aᵀt}.
fn finite_integral(a: &DMatrix<f64>, q: &DMatrix<f64>, t_f: f64) -> Result<DMatrix<f64>> {
    let schur = real_schur(a)?;
    let eigs = schur_eigenvalues(&schur.t);
    let a_max = eigs.iter().map(|e| e.re).fold(f64::NEG_INFINITY, f64::max);
    let a_min = eigs.iter().map(|e| e.re).fold(f64::INFINITY, f64::min);
    let growth = a_max.abs().max(a_min.abs());
    if growth * t_f > EXP_ARG_LIMIT {
        return Err(Error::HorizonOverflow {
            suggested_tf: EXP_ARG_LIMIT / growth,
        });
    }
    let tol = default_axis_tol(a);
    if growth * t_f <= AUGMENTED_HORIZON_LIMIT {
        return augmented_integral(a, q, t_f);
    }
    if a_max < -tol {
        return stable_finite_from_schur(&schur, a, q, t_f);
    }
    if a_min > tol {
        // Entries of the result genuinely grow like e^{2 a_max t}.
        if 2.0 * growth * t_f > EXP_ARG_LIMIT {
            return Err(Error::HorizonOverflow {
                suggested_tf: EXP_ARG_LIMIT / (2.0 * growth),
            });
        }
        let neg = -a;
        let wc = finite_integral(&neg, q, t_f)?;
        let e = expm(a, t_f)?;
        return Ok(matfun::symmetrize(&(&e * wc * e.transpose())));
    }
    // Mixed spectrum at a long horizon: only the direct route applies.
    if 2.0 * growth * t_f > EXP_ARG_LIMIT {
        return Err(Error::HorizonOverflow {
            suggested_tf: EXP_ARG_LIMIT / (2.0 * growth),
        });
    }
    augmented_integral(a, q, t_f)
}

fn augmented_integral(a: &DMatrix<f64>, q: &DMatrix<f64>, t_f: f64) -> Result<DMatrix<f64>> {
    let n = a.nrows();
    let mut h = DMatrix::<f64>::zeros(2 * n, 2 * n);
    h.view_mut((0, 0), (n, n)).copy_from(a);
    h.view_mut((0, n), (n, n)).copy_from(q);
    h.view_mut((n, n), (n, n)).copy_from(&(-a.transpose()));
    let e = expm(&h, t_f)?;
    if e.iter().any(|x| !x.is_finite()) {
        return Err(Error::HorizonOverflow { suggested_tf: t_f / 2.0 });
    }
    let f11 = e.view((0, 0), (n, n));
    let g = e.view((0, n), (n, n));
    Ok(matfun::symmetrize(&(g * f11.transpose())))
}

/// W(t) = W∞ - e^{At} W∞ e^{Aᵀt} for stable A, reusing an existing Schur form.
fn stable_finite_from_schur(
    schur: &matfun::RealSchur,
    a: &DMatrix<f64>,
    q: &DMatrix<f64>,
    t_f: f64,
) -> Result<DMatrix<f64>> {
    let u = &schur.q;
    let c = -(u.transpose() * q * u);
    let y = lyapunov_quasi_triangular(&schur.t, &c)?;
    let w_inf = u * y * u.transpose();
    let e = expm(a, t_f)?;
    Ok(matfun::symmetrize(&(&w_inf - &e * &w_inf * e.transpose())))
}

/// Infinite-horizon Gramian: requires A stable for `Reach`, antistable for `Ctrl`.
pub fn infinite_gramian(sys: &LinearSystem, kind: GramianKind) -> Result<GramianResult> {
    let tol = default_axis_tol(&sys.a);
    let schur = real_schur(&sys.a)?;
    let eigs = schur_eigenvalues(&schur.t);
    let q = &sys.b * sys.b.transpose();
    let w = match kind {
        GramianKind::Reach => {
            if let Some(e) = eigs.iter().find(|e| e.re >= -tol) {
                return Err(Error::NotStable(format!(
                    "infinite reachability Gramian needs a stable A; found eigenvalue {:.4e}+{:.4e}i",
                    e.re, e.im
                )));
            }
            matfun::solve_lyapunov(&sys.a, &q)?
        }
        GramianKind::Ctrl => {
            if let Some(e) = eigs.iter().find(|e| e.re <= tol) {
                return Err(Error::NotStable(format!(
                    "infinite controllability Gramian needs an antistable A; found eigenvalue {:.4e}+{:.4e}i",
                    e.re, e.im
                )));
            }
            matfun::solve_lyapunov(&(-&sys.a), &q)?
        }
    };
    Ok(GramianResult {
        w,
        kind: match kind {
            GramianKind::Reach => GramianVariant::Reach,
            GramianKind::Ctrl => GramianVariant::Ctrl,
        },
        horizon: Horizon::Infinite,
        basis: GramianBasis::Original,
    })
}

/// Mixed Gramian machinery with the spectral split (and the quasi-triangular
/// Schur blocks it produces) cached, so many input matrices B can be evaluated
/// against one state matrix A cheaply.
pub struct MixedGramianSolver {
    split: SpectralSplit,
    /// -block_antistable: the stable matrix governing the ctrl sub-Gramian.
    neg_anti: DMatrix<f64>,
}

impl MixedGramianSolver {
    pub fn new(a: &DMatrix<f64>, eps_axis: f64) -> Result<Self> {
        let split = split_stable_antistable(a, eps_axis)?;
        let neg_anti = -&split.block_antistable;
        Ok(Self { split, neg_anti })
    }

    pub fn with_default_tol(a: &DMatrix<f64>) -> Result<Self> {
        Self::new(a, default_axis_tol(a))
    }

    pub fn split(&self) -> &SpectralSplit {
        &self.split
    }

    /// The block-diagonal mixed Gramian in the split basis.
    pub fn gramian_in_split_basis(&self, b: &DMatrix<f64>) -> Result<DMatrix<f64>> {
        let n = self.split.n();
        let k = self.split.k_stable;
        if b.nrows() != n {
            return Err(Error::invalid("mixed Gramian: B row count mismatch"));
        }
        let b_bar = &self.split.v * b;
        let mut w_bar = DMatrix::<f64>::zeros(n, n);
        if k > 0 {
            let b1 = b_bar.view((0, 0), (k, b.ncols()));
            let q1 = &b1 * b1.transpose();
            let w1 = lyapunov_quasi_triangular(&self.split.block_stable, &(-q1))?;
            w_bar.view_mut((0, 0), (k, k)).copy_from(&matfun::symmetrize(&w1));
        }
        if k < n {
            let b2 = b_bar.view((k, 0), (n - k, b.ncols()));
            let q2 = &b2 * b2.transpose();
            let w2 = lyapunov_quasi_triangular(&self.neg_anti, &(-q2))?;
            w_bar
                .view_mut((k, k), (n - k, n - k))
                .copy_from(&matfun::symmetrize(&w2));
        }
        Ok(w_bar)
    }

    /// Infinite-horizon mixed Gramian in the original basis:
    /// W_m = V^{-1} W̄_m V^{-T}.
    pub fn gramian(&self, b: &DMatrix<f64>) -> Result<GramianResult> {
        let w_bar = self.gramian_in_split_basis(b)?;
        self.check_controllable(&w_bar)?;
        let w = matfun::symmetrize(&(&self.split.v_inv * &w_bar * self.split.v_inv.transpose()));
        Ok(GramianResult {
            w,
            kind: GramianVariant::Mixed,
            horizon: Horizon::Infinite,
            basis: GramianBasis::Original,
        })
    }

    fn check_controllable(&self, w_bar: &DMatrix<f64>) -> Result<()> {
        let n = self.split.n();
        let k = self.split.k_stable;
        for (name, s, sz) in [("stable", 0usize, k), ("antistable", k, n - k)] {
            if sz == 0 {
                continue;
            }
            let blk = w_bar.view((s, s), (sz, sz)).into_owned();
            let eig = blk.symmetric_eigen().eigenvalues;
            let lmax = eig.iter().fold(0.0f64, |a, &l| a.max(l));
            let lmin = eig.iter().fold(f64::INFINITY, |a, &l| a.min(l));
            if !(lmin > 0.0) {
                return Err(Error::UncontrollableSubsystem {
                    which: name,
                    cond: if lmin > 0.0 { lmax / lmin } else { f64::INFINITY },
                });
            }
        }
        Ok(())
    }

    /// Energy metrics of the infinite-horizon mixed Gramian, computed through
    /// a block-wise inverse in the split basis (W_m^{-1} = Vᵀ W̄^{-1} V). This
    /// keeps lambda_min = 1/lambda_max(W^{-1}) and tr(W^{-1}) accurate across
    /// many orders of magnitude of conditioning.
    pub fn metrics(&self, b: &DMatrix<f64>) -> Result<EnergyMetrics> {
        let w_bar = self.gramian_in_split_basis(b)?;
        let n = self.split.n();
        let k = self.split.k_stable;
        let mut w_bar_inv = DMatrix::<f64>::zeros(n, n);
        for (s, sz) in [(0usize, k), (k, n - k)] {
            if sz == 0 {
                continue;
            }
            let blk = w_bar.view((s, s), (sz, sz)).into_owned();
            let eig = blk.symmetric_eigen();
            let lmax = eig.eigenvalues.max();
            let mut inv = DMatrix::<f64>::zeros(sz, sz);
            for (i, &l) in eig.eigenvalues.iter().enumerate() {
                if !(l > 0.0) {
                    return Err(Error::SingularGramian {
                        cond: if l > 0.0 { lmax / l } else { f64::INFINITY },
                        limit: 1.0 / SINGULAR_REL_TOL,
                        worst_direction: eig.eigenvectors.column(i).iter().copied().collect(),
                    });
                }
                let v = eig.eigenvectors.column(i);
                inv += v * v.transpose() / l;
            }
            w_bar_inv.view_mut((s, s), (sz, sz)).copy_from(&inv);
        }
        let w = matfun::symmetrize(&(&self.split.v_inv * &w_bar * self.split.v_inv.transpose()));
        let w_inv = matfun::symmetrize(&(self.split.v.transpose() * &w_bar_inv * &self.split.v));

        let inv_eigs = w_inv.clone().symmetric_eigen().eigenvalues;
        let inv_max = inv_eigs.iter().fold(0.0f64, |a, &l| a.max(l));
        let w_eigs = w.clone().symmetric_eigen().eigenvalues;
        let lam_max = w_eigs.iter().fold(0.0f64, |a, &l| a.max(l));
        Ok(EnergyMetrics {
            lambda_min: 1.0 / inv_max,
            trace: w.trace(),
            trace_inv: w_inv.trace(),
            cond: lam_max * inv_max,
        })
    }

    /// Finite-horizon mixed Gramian (block-diagonal approximation) plus the
    /// Frobenius norm of the neglected cross coupling in the split basis.
    pub fn finite(&self, b: &DMatrix<f64>, t_f: f64) -> Result<(GramianResult, f64)> {
        if !(t_f > 0.0) || !t_f.is_finite() {
            return Err(Error::invalid("mixed finite Gramian: t_f must be positive"));
        }
        let n = self.split.n();
        let k = self.split.k_stable;
        let b_bar = &self.split.v * b;
        // Dynamics blkdiag(A1, -A2) with the full split input: the diagonal
        // blocks of the integral are the two sub-Gramians, the off-diagonal
        // block is exactly the transient coupling the approximation drops.
        let mut a_tilde = DMatrix::<f64>::zeros(n, n);
        a_tilde
            .view_mut((0, 0), (k, k))
            .copy_from(&self.split.block_stable);
        a_tilde
            .view_mut((k, k), (n - k, n - k))
            .copy_from(&self.neg_anti);
        let q = &b_bar * b_bar.transpose();
        let w_full = finite_integral(&a_tilde, &q, t_f)?;
        let cross = w_full.view((0, k), (k, n - k)).norm();

        let mut w_bar = DMatrix::<f64>::zeros(n, n);
        w_bar
            .view_mut((0, 0), (k, k))
            .copy_from(&w_full.view((0, 0), (k, k)));
        w_bar
            .view_mut((k, k), (n - k, n - k))
            .copy_from(&w_full.view((k, k), (n - k, n - k)));
        let w = matfun::symmetrize(&(&self.split.v_inv * &w_bar * self.split.v_inv.transpose()));
        Ok((
            GramianResult {
                w,
                kind: GramianVariant::Mixed,
                horizon: Horizon::Finite(t_f),
                basis: GramianBasis::Original,
            },
            cross,
        ))
    }
}

/// Finite-horizon reachability Gramians of one stable A at one horizon, with
/// the Schur form and e^{A t_f} cached so many driver sets can be evaluated
/// cheaply: W(t_f) = W∞ - e^{At_f} W∞ e^{Aᵀt_f} with one Lyapunov
/// back-substitution per input matrix.
///
/// Intended for horizons long enough that the Gramian has partially converged
/// (|Re λ|_min * t_f not tiny); short horizons should use [`finite_gramian`].
pub struct StableReachSolver {
    schur: matfun::RealSchur,
    e_tf: DMatrix<f64>,
    pub t_f: f64,
}

impl StableReachSolver {
    pub fn new(a: &DMatrix<f64>, t_f: f64) -> Result<Self> {
        if !(t_f > 0.0) || !t_f.is_finite() {
            return Err(Error::invalid("stable reach solver: t_f must be positive"));
        }
        let schur = real_schur(a)?;
        let tol = default_axis_tol(a);
        for e in schur_eigenvalues(&schur.t) {
            if e.re >= -tol {
                return Err(Error::NotStable(format!(
                    "stable reach solver needs Re < 0; found {:.3e}+{:.3e}i",
                    e.re, e.im
                )));
            }
        }
        let e_tf = expm(a, t_f)?;
        Ok(Self { schur, e_tf, t_f })
    }

    pub fn gramian(&self, b: &DMatrix<f64>) -> Result<GramianResult> {
        let u = &self.schur.q;
        let q = b * b.transpose();
        let c = -(u.transpose() * &q * u);
        let y = lyapunov_quasi_triangular(&self.schur.t, &c)?;
        let w_inf = u * y * u.transpose();
        let w = matfun::symmetrize(&(&w_inf - &self.e_tf * &w_inf * self.e_tf.transpose()));
        Ok(GramianResult {
            w,
            kind: GramianVariant::Reach,
            horizon: Horizon::Finite(self.t_f),
            basis: GramianBasis::Original,
        })
    }
}

/// Infinite-horizon mixed Gramian. Degenerate spectra (all stable or all
/// antistable) reduce to the plain Lyapunov solution in the original basis.
pub fn mixed_gramian_infinite(sys: &LinearSystem) -> Result<GramianResult> {
    let tol = default_axis_tol(&sys.a);
    let eigs = real_schur(&sys.a).map(|s| schur_eigenvalues(&s.t))?;
    if let Some(e) = eigs.iter().find(|e| e.re.abs() <= tol) {
        return Err(Error::AxisEigenvalue {
            real: e.re,
            imag: e.im,
            tol,
        });
    }
    if eigs.iter().all(|e| e.re < 0.0) {
        let mut g = infinite_gramian(sys, GramianKind::Reach)?;
        g.kind = GramianVariant::Mixed;
        return Ok(g);
    }
    if eigs.iter().all(|e| e.re > 0.0) {
        let mut g = infinite_gramian(sys, GramianKind::Ctrl)?;
        g.kind = GramianVariant::Mixed;
        return Ok(g);
    }
    MixedGramianSolver::new(&sys.a, tol)?.gramian(&sys.b)
}

/// Finite-horizon mixed Gramian with its cross-coupling diagnostic.
pub fn mixed_gramian_finite(sys: &LinearSystem, t_f: f64) -> Result<(GramianResult, f64)> {
    let tol = default_axis_tol(&sys.a);
    MixedGramianSolver::new(&sys.a, tol)?.finite(&sys.b, t_f)
}

/// Explicit diagonal Gramian of coupled oscillators in the modal basis.
///
/// Entry i < n carries sum_j beta_j (psi^i_j)^2 t_f / (2 M_j^2 omega_i^2); entry
/// n+i drops the omega factor. Linear in t_f and additive in the driver flags.
pub fn modal_diag_gramian(
    modal: &ModalDecomposition,
    driver_flags: &[bool],
    t_f: f64,
) -> Result<GramianResult> {
    let n = modal.omega.len();
    if driver_flags.len() != n {
        return Err(Error::invalid("driver flag vector length must equal node count"));
    }
    if !(t_f >= 0.0) || !t_f.is_finite() {
        return Err(Error::invalid("modal Gramian: t_f must be nonnegative"));
    }
    let omega_max = modal.omega.iter().fold(0.0f64, |a, &w| a.max(w));
    for (i, &w) in modal.omega.iter().enumerate() {
        if w <= 1e-12 * omega_max.max(1.0) {
            return Err(Error::ZeroFrequency { mode: i, omega: w });
        }
    }
    let mut pos = DVector::<f64>::zeros(n);
    let mut mom = DVector::<f64>::zeros(n);
    for (j, &on) in driver_flags.iter().enumerate() {
        if !on {
            continue;
        }
        let mj2 = modal.masses[j] * modal.masses[j];
        for i in 0..n {
            let psi_ij = modal.psi[(j, i)];
            let contrib = psi_ij * psi_ij / (2.0 * mj2);
            pos[i] += contrib / (modal.omega[i] * modal.omega[i]);
            mom[i] += contrib;
        }
    }
    let mut w = DMatrix::<f64>::zeros(2 * n, 2 * n);
    for i in 0..n {
        w[(i, i)] = pos[i] * t_f;
        w[(n + i, n + i)] = mom[i] * t_f;
    }
    Ok(GramianResult {
        w,
        kind: GramianVariant::ModalDiag,
        horizon: Horizon::Finite(t_f),
        basis: GramianBasis::Modal,
    })
}

/// Eigenvalues of a Gramian, ascending. Always available, even when singular.
pub fn energy_spectrum(g: &GramianResult) -> DVector<f64> {
    let eig = matfun::symmetrize(&g.w).symmetric_eigen().eigenvalues;
    let mut v: Vec<f64> = eig.iter().copied().collect();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    DVector::from_vec(v)
}

/// Rank tolerance below which a Gramian eigenvalue counts as singular.
pub const SINGULAR_REL_TOL: f64 = 1e-12;

/// Eigenvalue-based energy metrics. Errors with [`Error::SingularGramian`] when
/// any eigenvalue falls below `SINGULAR_REL_TOL * lambda_max` (the trace of the
/// inverse would be meaningless).
pub fn energy_metrics(g: &GramianResult) -> Result<EnergyMetrics> {
    let w = matfun::symmetrize(&g.w);
    let eig = w.symmetric_eigen();
    let lam_max = eig.eigenvalues.iter().fold(0.0f64, |a, &l| a.max(l));
    let lam_min = eig.eigenvalues.iter().fold(f64::INFINITY, |a, &l| a.min(l));
    let cut = SINGULAR_REL_TOL * lam_max;
    if !(lam_min > cut) {
        let worst = eig.eigenvalues.imin();
        return Err(Error::SingularGramian {
            cond: if lam_min > 0.0 { lam_max / lam_min } else { f64::INFINITY },
            limit: 1.0 / SINGULAR_REL_TOL,
            worst_direction: eig.eigenvectors.column(worst).iter().copied().collect(),
        });
    }
    let trace: f64 = eig.eigenvalues.iter().sum();
    let trace_inv: f64 = eig.eigenvalues.iter().map(|&l| 1.0 / l).sum();
    Ok(EnergyMetrics {
        lambda_min: lam_min,
        trace,
        trace_inv,
        cond: lam_max / lam_min,
    })
}
