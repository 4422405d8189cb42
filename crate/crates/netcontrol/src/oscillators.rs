//! Coupled harmonic oscillators and damped swing-equation grids.
//!
//! The second-order model is M q'' + D q' + K q = B u with M diagonal positive,
//! K = K_d + L (diagonal grounding plus a Laplacian coupling), and D ⪰ 0 assumed
//! proportional whenever a modal representation is requested. Three first-order
//! realizations are provided:
//!
//! * momentum basis, x = [M q; M q']:   A = [[0, I], [-K M^{-1}, -D M^{-1}]]
//! * displacement basis, x = [q; q']:   A = [[0, I], [-M^{-1} K, -M^{-1} D]]
//! * modal basis, z = blkdiag(Psi^{-1}, Psi^{-1}) x: A = [[0, I], [-Omega^2, -D1]]

use nalgebra::{DMatrix, DVector};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::gramian::LinearSystem;
use crate::matfun::generalized_modes;

/// A network of coupled harmonic oscillators (optionally damped).
#[derive(Debug, Clone)]
pub struct OscillatorNetwork {
    /// Diagonal of the mass matrix, all positive.
    pub masses: DVector<f64>,
    /// Diagonal grounding stiffness K_d >= 0.
    pub grounding: DVector<f64>,
    /// Laplacian coupling: symmetric, zero row sums, off-diagonals <= 0.
    pub laplacian: DMatrix<f64>,
    /// Damping matrix, PSD. Zero for undamped networks.
    pub damping: DMatrix<f64>,
    /// Driven nodes (columns of B are the corresponding elementary vectors).
    pub drivers: Vec<usize>,
}

/// Which first-order realization of the second-order model to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StateBasis {
    Momentum,
    Displacement,
    Modal,
}

/// Modal data of an oscillator network: natural frequencies, mass-orthonormal
/// eigenvectors Phi (Phi^T M Phi = I), Psi = M Phi, the modal input matrix, and
/// the diagonal modal damping.
#[derive(Debug, Clone)]
pub struct ModalDecomposition {
    /// Natural frequencies, ascending.
    pub omega: DVector<f64>,
    pub phi: DMatrix<f64>,
    pub psi: DMatrix<f64>,
    /// Psi^T M^{-1} B = Phi^T B for the current driver set.
    pub modal_input: DMatrix<f64>,
    /// Diagonal of D1 = Psi^T M^{-1} D M^{-1} Psi (zero when undamped).
    pub modal_damping: DVector<f64>,
    pub masses: DVector<f64>,
    pub drivers: Vec<usize>,
}

impl OscillatorNetwork {
    pub fn new(
        masses: DVector<f64>,
        grounding: DVector<f64>,
        laplacian: DMatrix<f64>,
        damping: DMatrix<f64>,
        drivers: Vec<usize>,
    ) -> Result<Self> {
        let n = masses.len();
        if masses.iter().any(|&m| !(m > 0.0) || !m.is_finite()) {
            return Err(Error::invalid("masses must be positive"));
        }
        if grounding.len() != n || grounding.iter().any(|&k| k < 0.0) {
            return Err(Error::invalid("grounding stiffness must be nonnegative, length n"));
        }
        if laplacian.nrows() != n || laplacian.ncols() != n {
            return Err(Error::invalid("Laplacian must be n x n"));
        }
        let sym = (&laplacian - laplacian.transpose()).norm();
        if sym > 1e-10 * laplacian.norm().max(1.0) {
            return Err(Error::invalid("Laplacian must be symmetric"));
        }
        for i in 0..n {
            let row_sum: f64 = laplacian.row(i).iter().sum();
            if row_sum.abs() > 1e-8 * laplacian.norm().max(1.0) {
                return Err(Error::invalid(format!("Laplacian row {i} does not sum to zero")));
            }
        }
        if damping.nrows() != n || damping.ncols() != n {
            return Err(Error::invalid("damping must be n x n"));
        }
        for &d in drivers.iter() {
            if d >= n {
                return Err(Error::invalid(format!("driver node {d} out of range")));
            }
        }
        Ok(Self { masses, grounding, laplacian, damping, drivers })
    }

    pub fn n(&self) -> usize {
        self.masses.len()
    }

    /// K = K_d + L.
    pub fn stiffness(&self) -> DMatrix<f64> {
        let mut k = self.laplacian.clone();
        for i in 0..self.n() {
            k[(i, i)] += self.grounding[i];
        }
        k
    }

    pub fn set_drivers(&mut self, drivers: Vec<usize>) {
        self.drivers = drivers;
    }

    /// Undamped networks with an ER(p) coupling graph, |N(0,1)| coupling weights,
    /// masses uniform on [mean/2, 3 mean/2] and grounding uniform on
    /// [ground/2, 3 ground/2] per node.
    pub fn random_er_coupled(
        n: usize,
        p: f64,
        mass_mean: f64,
        grounding_mean: f64,
        seed: u64,
    ) -> Result<Self> {
        Self::random_er_coupled_resampled(n, p, mass_mean, grounding_mean, seed, seed)
    }

    /// Same ensemble with masses/grounding/topology fixed by `topo_seed` and
    /// the coupling weights drawn from `weight_seed`, so one realization can be
    /// reweighted many times.
    pub fn random_er_coupled_resampled(
        n: usize,
        p: f64,
        mass_mean: f64,
        grounding_mean: f64,
        topo_seed: u64,
        weight_seed: u64,
    ) -> Result<Self> {
        if !(p > 0.0 && p <= 1.0) {
            return Err(Error::invalid("edge probability must be in (0, 1]"));
        }
        if !(mass_mean > 0.0) || grounding_mean < 0.0 {
            return Err(Error::invalid("mass mean must be positive, grounding nonnegative"));
        }
        let mut topo = ChaCha8Rng::seed_from_u64(topo_seed);
        let mut wrng = ChaCha8Rng::seed_from_u64(weight_seed.wrapping_add(0x6a09_e667_f3bc_c909));
        let masses = DVector::from_fn(n, |_, _| mass_mean * (0.5 + topo.random::<f64>()));
        let grounding =
            DVector::from_fn(n, |_, _| grounding_mean * (0.5 + topo.random::<f64>()));
        let mut lap = DMatrix::<f64>::zeros(n, n);
        for i in 0..n {
            for j in (i + 1)..n {
                if topo.random::<f64>() < p {
                    let g: f64 = StandardNormal.sample(&mut wrng);
                    let w = g.abs();
                    lap[(i, j)] = -w;
                    lap[(j, i)] = -w;
                    lap[(i, i)] += w;
                    lap[(j, j)] += w;
                }
            }
        }
        Self::new(masses, grounding, lap, DMatrix::zeros(n, n), Vec::new())
    }

    /// First-order realization in the requested basis.
    pub fn state_space(&self, basis: StateBasis) -> Result<LinearSystem> {
        let n = self.n();
        if self.drivers.is_empty() {
            return Err(Error::invalid("oscillator network has no drivers"));
        }
        let k = self.stiffness();
        let m_inv = DMatrix::from_diagonal(&self.masses.map(|m| 1.0 / m));
        let mut b_pattern = DMatrix::<f64>::zeros(n, self.drivers.len());
        for (j, &node) in self.drivers.iter().enumerate() {
            b_pattern[(node, j)] = 1.0;
        }

        let (a, b) = match basis {
            StateBasis::Momentum => {
                let mut a = DMatrix::<f64>::zeros(2 * n, 2 * n);
                a.view_mut((0, n), (n, n)).copy_from(&DMatrix::identity(n, n));
                a.view_mut((n, 0), (n, n)).copy_from(&(-(&k * &m_inv)));
                a.view_mut((n, n), (n, n)).copy_from(&(-(&self.damping * &m_inv)));
                let mut b = DMatrix::<f64>::zeros(2 * n, self.drivers.len());
                b.view_mut((n, 0), (n, self.drivers.len())).copy_from(&b_pattern);
                (a, b)
            }
            StateBasis::Displacement => {
                let mut a = DMatrix::<f64>::zeros(2 * n, 2 * n);
                a.view_mut((0, n), (n, n)).copy_from(&DMatrix::identity(n, n));
                a.view_mut((n, 0), (n, n)).copy_from(&(-(&m_inv * &k)));
                a.view_mut((n, n), (n, n)).copy_from(&(-(&m_inv * &self.damping)));
                let mut b = DMatrix::<f64>::zeros(2 * n, self.drivers.len());
                b.view_mut((n, 0), (n, self.drivers.len()))
                    .copy_from(&(&m_inv * &b_pattern));
                (a, b)
            }
            StateBasis::Modal => {
                let modal = self.modal_decomposition()?;
                let mut a = DMatrix::<f64>::zeros(2 * n, 2 * n);
                a.view_mut((0, n), (n, n)).copy_from(&DMatrix::identity(n, n));
                let om2 = DMatrix::from_diagonal(&modal.omega.map(|w| -w * w));
                a.view_mut((n, 0), (n, n)).copy_from(&om2);
                let d1 = DMatrix::from_diagonal(&modal.modal_damping.map(|d| -d));
                a.view_mut((n, n), (n, n)).copy_from(&d1);
                let mut b = DMatrix::<f64>::zeros(2 * n, self.drivers.len());
                b.view_mut((n, 0), (n, self.drivers.len()))
                    .copy_from(&modal.modal_input);
                (a, b)
            }
        };
        let mut sys = LinearSystem::new(a, b)?;
        if basis == StateBasis::Momentum {
            sys.driver_set = Some(self.drivers.iter().map(|&d| n + d).collect());
        }
        Ok(sys)
    }

    /// Modal decomposition; errors unless the damping is proportional, i.e.
    /// D1 = Phi^T D Phi is diagonal to within 1e-8 relative.
    pub fn modal_decomposition(&self) -> Result<ModalDecomposition> {
        let n = self.n();
        let k = self.stiffness();
        let (omega, phi) = generalized_modes(&self.masses, &k)?;
        let psi = DMatrix::from_diagonal(&self.masses) * &phi;

        let d1 = phi.transpose() * &self.damping * &phi;
        let mut offdiag = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    offdiag += d1[(i, j)] * d1[(i, j)];
                }
            }
        }
        let offdiag = offdiag.sqrt();
        let scale = d1.norm().max(1e-300);
        if self.damping.norm() > 0.0 && offdiag / scale > 1e-8 {
            return Err(Error::NonProportionalDamping {
                offdiag: offdiag / scale,
            });
        }

        let mut b_pattern = DMatrix::<f64>::zeros(n, self.drivers.len().max(1));
        for (j, &node) in self.drivers.iter().enumerate() {
            b_pattern[(node, j)] = 1.0;
        }
        let modal_input = phi.transpose() * &b_pattern;

        Ok(ModalDecomposition {
            omega,
            phi,
            psi,
            modal_input,
            modal_damping: d1.diagonal(),
            masses: self.masses.clone(),
            drivers: self.drivers.clone(),
        })
    }

    /// Block-diagonal state transformation z = blkdiag(Psi^{-1}, Psi^{-1}) x from
    /// the momentum basis to the modal basis.
    pub fn modal_transformation(&self, modal: &ModalDecomposition) -> Result<DMatrix<f64>> {
        let n = self.n();
        let psi_inv = modal
            .psi
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::numerical("Psi is singular"))?;
        let mut t = DMatrix::<f64>::zeros(2 * n, 2 * n);
        t.view_mut((0, 0), (n, n)).copy_from(&psi_inv);
        t.view_mut((n, n), (n, n)).copy_from(&psi_inv);
        Ok(t)
    }
}

/// Configuration for swing-equation grids built from an edge list.
#[derive(Debug, Clone)]
pub struct SwingGridConfig {
    /// Mean of the uniform mass distribution on [mean/2, 3 mean/2].
    pub mass_mean: f64,
    /// D = damping_scale * M (proportional damping).
    pub damping_scale: f64,
    /// Uniform grounding added to every node. Pure Laplacians carry a
    /// zero-frequency rigid-body mode that the modal formulas reject, so the
    /// default grounds every node lightly.
    pub grounding: f64,
}

impl Default for SwingGridConfig {
    fn default() -> Self {
        Self {
            mass_mean: 10.0,
            damping_scale: 0.0,
            grounding: 1e-3,
        }
    }
}

/// Build a swing-equation grid from an undirected edge list. Edge weights enter
/// the Laplacian by absolute value; masses are uniform on [mean/2, 3 mean/2].
pub fn build_swing_grid(
    edges: &[(usize, usize, f64)],
    n: usize,
    cfg: &SwingGridConfig,
    seed: u64,
) -> Result<OscillatorNetwork> {
    if !(cfg.mass_mean > 0.0) {
        return Err(Error::invalid("mass mean must be positive"));
    }
    if cfg.damping_scale < 0.0 || cfg.grounding < 0.0 {
        return Err(Error::invalid("damping and grounding must be nonnegative"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut lap = DMatrix::<f64>::zeros(n, n);
    for &(u, v, w) in edges {
        if u >= n || v >= n {
            return Err(Error::invalid(format!("edge ({u},{v}) out of range for n={n}")));
        }
        if u == v {
            continue;
        }
        let wa = w.abs();
        lap[(u, v)] -= wa;
        lap[(v, u)] -= wa;
        lap[(u, u)] += wa;
        lap[(v, v)] += wa;
    }
    let masses = DVector::from_fn(n, |_, _| cfg.mass_mean * (0.5 + rng.random::<f64>()));
    let grounding = DVector::from_element(n, cfg.grounding);
    let damping = DMatrix::from_diagonal(&(cfg.damping_scale * &masses));
    OscillatorNetwork::new(masses, grounding, lap, damping, Vec::new())
}
