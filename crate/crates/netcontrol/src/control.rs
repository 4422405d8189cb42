//! Minimum-energy control synthesis and verification.
//!
//! The optimal open-loop control for the transfer x_o -> x_f over [0, t_f] is
//! u(t) = Bᵀ e^{Aᵀ(t_f - t)} W_r^{-1}(t_f) (x_f - e^{A t_f} x_o), with transfer
//! cost (x_f - e^{A t_f} x_o)ᵀ W_r^{-1}(t_f) (x_f - e^{A t_f} x_o).

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::gramian::{finite_gramian, GramianKind, LinearSystem};
use crate::matfun::expm;
use crate::oscillators::{OscillatorNetwork, StateBasis};

/// A state transfer request: drive x_o to x_f in time t_f.
#[derive(Debug, Clone)]
pub struct TransferTask {
    pub x_o: DVector<f64>,
    pub x_f: DVector<f64>,
    pub t_f: f64,
}

impl TransferTask {
    pub fn new(x_o: DVector<f64>, x_f: DVector<f64>, t_f: f64) -> Result<Self> {
        if !(t_f > 0.0) || !t_f.is_finite() {
            return Err(Error::invalid("transfer task: t_f must be positive"));
        }
        if x_o.len() != x_f.len() {
            return Err(Error::invalid("transfer task: state dimensions differ"));
        }
        Ok(Self { x_o, x_f, t_f })
    }
}

/// Closed-form minimum-energy control law, evaluated lazily per time point so
/// simulators can choose their own grid.
#[derive(Debug, Clone)]
pub struct ControlLaw {
    a_t: DMatrix<f64>,
    b: DMatrix<f64>,
    pub t_f: f64,
    /// Cached W_r^{-1}(t_f) (x_f - e^{A t_f} x_o).
    pub eta: DVector<f64>,
    /// W_r(t_f), kept for the closed-form energy etaᵀ W eta.
    gramian: DMatrix<f64>,
}

impl ControlLaw {
    /// u(t) for t in [0, t_f].
    pub fn eval(&self, t: f64) -> DVector<f64> {
        let e = expm(&self.a_t, self.t_f - t).expect("finite horizon");
        self.b.transpose() * e * &self.eta
    }

    pub fn inputs(&self) -> usize {
        self.b.ncols()
    }

    /// Minimum-energy cost of the transfer, etaᵀ W_r eta.
    pub fn energy(&self) -> f64 {
        (self.eta.transpose() * &self.gramian * &self.eta)[(0, 0)]
    }

    /// u sampled on the uniform grid t_k = k t_f / (2 steps), k = 0..=2*steps,
    /// which covers the full and half points an RK4 integrator with `steps`
    /// steps visits. Uses the step recurrence e^{Aᵀ(t_f - t_{k+1})} =
    /// e^{-Aᵀ h} e^{Aᵀ(t_f - t_k)}, one expm total.
    pub fn sample_grid(&self, steps: usize) -> Result<Vec<DVector<f64>>> {
        if steps == 0 {
            return Err(Error::invalid("sample_grid: steps must be positive"));
        }
        let h = self.t_f / (2 * steps) as f64;
        let dec = expm(&self.a_t, -h)?;
        let mut carrier = expm(&self.a_t, self.t_f)?* &self.eta;
        let mut out = Vec::with_capacity(2 * steps + 1);
        out.push(self.b.transpose() * &carrier);
        for _ in 0..2 * steps {
            carrier = &dec * carrier;
            out.push(self.b.transpose() * &carrier);
        }
        Ok(out)
    }
}

fn reach_gramian_inverse_apply(
    sys: &LinearSystem,
    t_f: f64,
    rhs: &DVector<f64>,
) -> Result<(DVector<f64>, DMatrix<f64>)> {
    let w = finite_gramian(sys, t_f, GramianKind::Reach)?.w;
    let eig = w.clone().symmetric_eigen();
    let lmax = eig.eigenvalues.max();
    let lmin = eig.eigenvalues.min();
    let cond = if lmin > 0.0 { lmax / lmin } else { f64::INFINITY };
    if !(cond < 1e12) {
        let worst = eig.eigenvalues.imin();
        return Err(Error::SingularGramian {
            cond,
            limit: 1e12,
            worst_direction: eig.eigenvectors.column(worst).iter().copied().collect(),
        });
    }
    let chol = w
        .clone()
        .cholesky()
        .ok_or_else(|| Error::numerical("reachability Gramian not positive definite"))?;
    Ok((chol.solve(rhs), w))
}

/// Minimum-energy control achieving the requested transfer.
pub fn min_energy_control(sys: &LinearSystem, task: &TransferTask) -> Result<ControlLaw> {
    if task.x_o.len() != sys.n() {
        return Err(Error::invalid("task dimension does not match system"));
    }
    let drift = expm(&sys.a, task.t_f)? * &task.x_o;
    let target = &task.x_f - drift;
    let (eta, w) = reach_gramian_inverse_apply(sys, task.t_f, &target)?;
    Ok(ControlLaw {
        a_t: sys.a.transpose(),
        b: sys.b.clone(),
        t_f: task.t_f,
        eta,
        gramian: w,
    })
}

/// Minimum transfer cost (x_f - e^{A t_f} x_o)ᵀ W_r^{-1}(t_f) (x_f - e^{A t_f} x_o).
pub fn transfer_cost(sys: &LinearSystem, task: &TransferTask) -> Result<f64> {
    if task.x_o.len() != sys.n() {
        return Err(Error::invalid("task dimension does not match system"));
    }
    let drift = expm(&sys.a, task.t_f)? * &task.x_o;
    let target = &task.x_f - drift;
    if target.norm() == 0.0 {
        return Ok(0.0);
    }
    let (eta, _) = reach_gramian_inverse_apply(sys, task.t_f, &target)?;
    Ok(target.dot(&eta))
}

/// Reachability cost: x_o = 0, so E_r = x_fᵀ W_r^{-1} x_f.
pub fn reach_cost(sys: &LinearSystem, x_f: &DVector<f64>, t_f: f64) -> Result<f64> {
    let task = TransferTask::new(DVector::zeros(sys.n()), x_f.clone(), t_f)?;
    transfer_cost(sys, &task)
}

/// Controllability-to-zero cost through the controllability Gramian:
/// E_c = x_oᵀ W_c^{-1}(t_f) x_o.
pub fn ctrl_cost(sys: &LinearSystem, x_o: &DVector<f64>, t_f: f64) -> Result<f64> {
    if x_o.len() != sys.n() {
        return Err(Error::invalid("x_o dimension does not match system"));
    }
    if x_o.norm() == 0.0 {
        return Ok(0.0);
    }
    let w = finite_gramian(sys, t_f, GramianKind::Ctrl)?.w;
    let eig = w.clone().symmetric_eigen();
    let lmax = eig.eigenvalues.max();
    let lmin = eig.eigenvalues.min();
    let cond = if lmin > 0.0 { lmax / lmin } else { f64::INFINITY };
    if !(cond < 1e12) {
        let worst = eig.eigenvalues.imin();
        return Err(Error::SingularGramian {
            cond,
            limit: 1e12,
            worst_direction: eig.eigenvectors.column(worst).iter().copied().collect(),
        });
    }
    let chol = w
        .cholesky()
        .ok_or_else(|| Error::numerical("controllability Gramian not positive definite"))?;
    Ok(x_o.dot(&chol.solve(x_o)))
}

/// A simulated trajectory on a uniform time grid.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<DVector<f64>>,
}

impl Trajectory {
    pub fn final_state(&self) -> &DVector<f64> {
        self.states.last().expect("nonempty trajectory")
    }
}

/// Fixed-step RK4 integration of dx/dt = A x + B u(t).
pub fn simulate(
    sys: &LinearSystem,
    u: impl Fn(f64) -> DVector<f64>,
    x_o: &DVector<f64>,
    t_f: f64,
    steps: usize,
) -> Result<Trajectory> {
    if steps < 100 {
        return Err(Error::invalid("simulate: need at least 100 steps"));
    }
    if x_o.len() != sys.n() {
        return Err(Error::invalid("simulate: x_o dimension mismatch"));
    }
    let h = t_f / steps as f64;
    let deriv = |t: f64, x: &DVector<f64>| -> DVector<f64> { &sys.a * x + &sys.b * u(t) };
    let mut x = x_o.clone();
    let mut times = Vec::with_capacity(steps + 1);
    let mut states = Vec::with_capacity(steps + 1);
    times.push(0.0);
    states.push(x.clone());
    for k in 0..steps {
        let t = k as f64 * h;
        let k1 = deriv(t, &x);
        let k2 = deriv(t + 0.5 * h, &(&x + &k1 * (0.5 * h)));
        let k3 = deriv(t + 0.5 * h, &(&x + &k2 * (0.5 * h)));
        let k4 = deriv(t + h, &(&x + &k3 * h));
        x += (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0);
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::numerical(format!("simulation overflow at t = {}", t + h)));
        }
        times.push((k + 1) as f64 * h);
        states.push(x.clone());
    }
    Ok(Trajectory { times, states })
}

/// RK4 where the control is already tabulated on the half-step grid
/// (2*steps + 1 samples), as produced by [`ControlLaw::sample_grid`].
pub fn simulate_sampled(
    sys: &LinearSystem,
    u_samples: &[DVector<f64>],
    x_o: &DVector<f64>,
    t_f: f64,
) -> Result<Trajectory> {
    if u_samples.len() < 2 * 100 + 1 || u_samples.len() % 2 == 0 {
        return Err(Error::invalid(
            "simulate_sampled: need 2*steps+1 samples with steps >= 100",
        ));
    }
    let steps = (u_samples.len() - 1) / 2;
    let h = t_f / steps as f64;
    let mut x = x_o.clone();
    let mut times = Vec::with_capacity(steps + 1);
    let mut states = Vec::with_capacity(steps + 1);
    times.push(0.0);
    states.push(x.clone());
    for k in 0..steps {
        let u0 = &u_samples[2 * k];
        let um = &u_samples[2 * k + 1];
        let u1 = &u_samples[2 * k + 2];
        let k1 = &sys.a * &x + &sys.b * u0;
        let k2 = &sys.a * (&x + &k1 * (0.5 * h)) + &sys.b * um;
        let k3 = &sys.a * (&x + &k2 * (0.5 * h)) + &sys.b * um;
        let k4 = &sys.a * (&x + &k3 * h) + &sys.b * u1;
        x += (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0);
        times.push((k + 1) as f64 * h);
        states.push(x.clone());
    }
    Ok(Trajectory { times, states })
}

/// Composite-Simpson energy ∫ ||u||² dτ from samples on the half-step grid.
pub fn input_energy(u_samples: &[DVector<f64>], t_f: f64) -> f64 {
    let steps = (u_samples.len() - 1) / 2;
    let h = t_f / steps as f64;
    let mut acc = 0.0;
    for k in 0..steps {
        let f0 = u_samples[2 * k].norm_squared();
        let fm = u_samples[2 * k + 1].norm_squared();
        let f1 = u_samples[2 * k + 2].norm_squared();
        acc += (f0 + 4.0 * fm + f1) * h / 6.0;
    }
    acc
}

/// Controllability classes achievable with bounded (amplitude-constrained)
/// inputs, decided by the signs of the eigenvalue real parts alone.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundedControllability {
    /// Any point reachable from the origin in finite time: no eigenvalue with
    /// negative real part.
    pub reachable_bounded: bool,
    /// Any point steerable to the origin in finite time: no eigenvalue with
    /// positive real part.
    pub controllable_to_0_bounded: bool,
    /// Both at once: all eigenvalues on the imaginary axis.
    pub completely_controllable_bounded: bool,
}

pub fn bounded_controllability_class(a: &DMatrix<f64>, eps_axis: f64) -> BoundedControllability {
    let eigs = a.complex_eigenvalues();
    let min_re = eigs.iter().map(|e| e.re).fold(f64::INFINITY, f64::min);
    let max_re = eigs.iter().map(|e| e.re).fold(f64::NEG_INFINITY, f64::max);
    let reachable = min_re >= -eps_axis;
    let to_zero = max_re <= eps_axis;
    BoundedControllability {
        reachable_bounded: reachable,
        controllable_to_0_bounded: to_zero,
        completely_controllable_bounded: reachable && to_zero,
    }
}

/// Refocusing control for an oscillator network: steer the momentum-basis state
/// from x_o = 0 onto x_f = [M q_f; 0], i.e. a pure displacement pattern at rest.
pub fn refocus_control(
    net: &OscillatorNetwork,
    q_f: &DVector<f64>,
    t_f: f64,
) -> Result<ControlLaw> {
    if q_f.len() != net.n() {
        return Err(Error::invalid("refocus target dimension mismatch"));
    }
    let sys = net.state_space(StateBasis::Momentum)?;
    let n = net.n();
    let mut x_f = DVector::zeros(2 * n);
    for i in 0..n {
        x_f[i] = net.masses[i] * q_f[i];
    }
    let task = TransferTask::new(DVector::zeros(2 * n), x_f, t_f)?;
    min_energy_control(&sys, &task)
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::{dmatrix, dvector};
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn integrator_unit_transfer() {
        // a=0, b=1, 0 -> 1 in 1s: u == 1, energy 1.
        let sys = LinearSystem::new(dmatrix![0.0], dmatrix![1.0]).unwrap();
        let task = TransferTask::new(dvector![0.0], dvector![1.0], 1.0).unwrap();
        let law = min_energy_control(&sys, &task).unwrap();
        for t in [0.0, 0.3, 0.9] {
            assert!((law.eval(t)[0] - 1.0).abs() < 1e-12);
        }
        assert!((law.energy() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn free_drift_costs_nothing() {
        let sys = LinearSystem::new(dmatrix![-0.4, 0.2; 0.0, -1.0], dmatrix![1.0; 0.5]).unwrap();
        let x_o = dvector![1.0, -2.0];
        let x_f = expm(&sys.a, 2.0).unwrap() * &x_o;
        let task = TransferTask::new(x_o, x_f, 2.0).unwrap();
        let law = min_energy_control(&sys, &task).unwrap();
        assert!(law.energy() < 1e-20);
        assert!(law.eval(1.0).norm() < 1e-10);
        assert!(transfer_cost(&sys, &task).unwrap() < 1e-20);
    }

    #[test]
    fn scalar_transfer_cost() {
        // x_o=0, a=-1, b=1, tf=1, x_f=1: 2/(1-e^{-2})
        let sys = LinearSystem::new(dmatrix![-1.0], dmatrix![1.0]).unwrap();
        let cost = reach_cost(&sys, &dvector![1.0], 1.0).unwrap();
        let expected = 2.0 / (1.0 - (-2.0f64).exp());
        assert!((cost - expected).abs() < 1e-12);
        assert!((expected - 2.31304).abs() < 1e-5);
    }

    #[test]
    fn zero_pair_costs_zero() {
        let sys = LinearSystem::new(dmatrix![-1.0], dmatrix![1.0]).unwrap();
        let task = TransferTask::new(dvector![0.0], dvector![0.0], 1.0).unwrap();
        assert_eq!(transfer_cost(&sys, &task).unwrap(), 0.0);
    }

    #[test]
    fn ctrl_cost_agrees_with_reach_formula() {
        // E_c = x_oᵀ e^{Aᵀtf} W_r^{-1} e^{Atf} x_o computed two ways.
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let n = 6;
        let raw = DMatrix::from_fn(n, n, |_, _| rng.random::<f64>() - 0.5);
        let a = raw - DMatrix::identity(n, n);
        let b = DMatrix::from_fn(n, 2, |_, _| rng.random::<f64>() - 0.5);
        let sys = LinearSystem::new(a, b).unwrap();
        let x_o = DVector::from_fn(n, |_, _| rng.random::<f64>() - 0.5);
        let tf = 1.5;

        let via_wc = ctrl_cost(&sys, &x_o, tf).unwrap();
        let task = TransferTask::new(x_o.clone(), DVector::zeros(n), tf).unwrap();
        let via_wr = transfer_cost(&sys, &task).unwrap();
        let rel = (via_wc - via_wr).abs() / via_wr.abs();
        assert!(rel < 1e-8, "E_c route mismatch {rel:e}");
    }

    #[test]
    fn simulate_decay_and_forced_integrator() {
        let sys = LinearSystem::new(dmatrix![-1.0, 0.0; 0.0, -2.0], dmatrix![1.0; 1.0]).unwrap();
        let x_o = dvector![1.0, 1.0];
        let traj = simulate(&sys, |_| dvector![0.0], &x_o, 5.0, 500).unwrap();
        assert!(traj.final_state().norm() < x_o.norm());

        let integ = LinearSystem::new(dmatrix![0.0], dmatrix![1.0]).unwrap();
        let traj = simulate(&integ, |_| dvector![1.0], &dvector![0.0], 1.0, 200).unwrap();
        assert!((traj.final_state()[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rk4_fourth_order_convergence() {
        // Richardson check: doubling the steps divides the endpoint error by ~16.
        let sys = LinearSystem::new(
            dmatrix![0.0, 1.0; -4.0, -0.3],
            dmatrix![0.0; 1.0],
        )
        .unwrap();
        let u = |t: f64| dvector![(2.0 * t).sin()];
        let x_o = dvector![1.0, 0.0];
        let exact = simulate(&sys, u, &x_o, 3.0, 40_000).unwrap().final_state().clone();
        let coarse = simulate(&sys, u, &x_o, 3.0, 500).unwrap().final_state().clone();
        let fine = simulate(&sys, u, &x_o, 3.0, 1000).unwrap().final_state().clone();
        let e_coarse = (&coarse - &exact).norm();
        let e_fine = (&fine - &exact).norm();
        let ratio = e_coarse / e_fine;
        assert!(ratio > 12.0 && ratio < 20.0, "order ratio {ratio}");
    }

    #[test]
    fn synthesized_control_reaches_target() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for trial in 0..5 {
            let n = 6;
            let raw = DMatrix::from_fn(n, n, |_, _| rng.random::<f64>() - 0.5);
            let a = raw - DMatrix::identity(n, n);
            let b = DMatrix::from_fn(n, 2, |_, _| rng.random::<f64>() - 0.5);
            let sys = LinearSystem::new(a, b).unwrap();
            let x_o = DVector::from_fn(n, |_, _| rng.random::<f64>() - 0.5);
            let x_f = DVector::from_fn(n, |_, _| rng.random::<f64>() - 0.5);
            let tf = 1.0 + rng.random::<f64>();
            let task = TransferTask::new(x_o.clone(), x_f.clone(), tf).unwrap();

            let law = min_energy_control(&sys, &task).unwrap();
            let steps = 10_000;
            let samples = law.sample_grid(steps).unwrap();
            let traj = simulate_sampled(&sys, &samples, &x_o, tf).unwrap();
            let err = (traj.final_state() - &x_f).norm();
            assert!(err < 1e-6 * x_f.norm().max(1.0), "trial {trial}: endpoint error {err:e}");

            let measured = input_energy(&samples, tf);
            let predicted = transfer_cost(&sys, &task).unwrap();
            let rel = (measured - predicted).abs() / predicted;
            assert!(rel < 1e-8, "trial {trial}: energy mismatch {rel:e}");
        }
    }

    #[test]
    fn lazy_eval_matches_sampled_grid() {
        let sys = LinearSystem::new(dmatrix![-0.2, 1.0; -1.0, -0.2], dmatrix![1.0; 0.0]).unwrap();
        let task = TransferTask::new(dvector![0.5, 0.0], dvector![-1.0, 1.0], 2.0).unwrap();
        let law = min_energy_control(&sys, &task).unwrap();
        let steps = 250;
        let samples = law.sample_grid(steps).unwrap();
        let h = 2.0 / (2.0 * steps as f64);
        for k in [0usize, 13, 100, 2 * steps] {
            let t = k as f64 * h;
            assert!((law.eval(t) - &samples[k]).norm() < 1e-10);
        }
    }

    #[test]
    fn scaling_is_quadratic() {
        let sys = LinearSystem::new(dmatrix![-0.5, 0.3; 0.1, -1.2], dmatrix![1.0; 0.2]).unwrap();
        let x_o = dvector![0.4, -0.2];
        let x_f = dvector![1.0, 0.7];
        let e1 = transfer_cost(&sys, &TransferTask::new(x_o.clone(), x_f.clone(), 1.0).unwrap())
            .unwrap();
        let alpha = 3.7;
        let e2 = transfer_cost(
            &sys,
            &TransferTask::new(&x_o * alpha, &x_f * alpha, 1.0).unwrap(),
        )
        .unwrap();
        assert!((e2 - alpha * alpha * e1).abs() < 1e-9 * e2.abs());
    }

    #[test]
    fn time_reversal_duality() {
        // Cost to reach x_f from 0 under A equals cost to steer x_f to 0 under -A.
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let n = 5;
        let a = DMatrix::from_fn(n, n, |_, _| rng.random::<f64>() - 0.5);
        let b = DMatrix::from_fn(n, 2, |_, _| rng.random::<f64>() - 0.5);
        let x_f = DVector::from_fn(n, |_, _| rng.random::<f64>() - 0.5);
        let tf = 1.2;
        let sys = LinearSystem::new(a.clone(), b.clone()).unwrap();
        let sys_neg = LinearSystem::new(-a, b).unwrap();
        let reach = reach_cost(&sys, &x_f, tf).unwrap();
        let steer = ctrl_cost(&sys_neg, &x_f, tf).unwrap();
        assert!((reach - steer).abs() < 1e-9 * reach.abs());
    }

    #[test]
    fn singular_gramian_names_direction() {
        // Second state completely decoupled from the input: uncontrollable.
        let sys = LinearSystem::new(dmatrix![-1.0, 0.0; 0.0, -2.0], dmatrix![1.0; 0.0]).unwrap();
        let task = TransferTask::new(dvector![0.0, 0.0], dvector![1.0, 1.0], 1.0).unwrap();
        match min_energy_control(&sys, &task) {
            Err(Error::SingularGramian { worst_direction, .. }) => {
                // The hardest direction is e_2.
                assert!(worst_direction[1].abs() > 0.99);
            }
            other => panic!("expected singular Gramian, got {other:?}"),
        }
    }

    #[test]
    fn bounded_classification() {
        let osc = dmatrix![0.0, 1.0; -1.0, 0.0];
        let c = bounded_controllability_class(&osc, 1e-9);
        assert_eq!((c.reachable_bounded, c.controllable_to_0_bounded, c.completely_controllable_bounded), (true, true, true));

        let c = bounded_controllability_class(&(-DMatrix::<f64>::identity(2, 2)), 1e-9);
        assert_eq!((c.reachable_bounded, c.controllable_to_0_bounded, c.completely_controllable_bounded), (false, true, false));

        let c = bounded_controllability_class(&DMatrix::<f64>::identity(2, 2), 1e-9);
        assert_eq!((c.reachable_bounded, c.controllable_to_0_bounded, c.completely_controllable_bounded), (true, false, false));

        let c = bounded_controllability_class(&dmatrix![-1.0, 0.0; 0.0, 2.0], 1e-9);
        assert_eq!((c.reachable_bounded, c.controllable_to_0_bounded, c.completely_controllable_bounded), (false, false, false));
    }

    #[test]
    fn refocus_single_oscillator_matches_direct() {
        use crate::oscillators::OscillatorNetwork;
        let net = OscillatorNetwork::new(
            dvector![2.0],
            dvector![3.0],
            DMatrix::zeros(1, 1),
            DMatrix::zeros(1, 1),
            vec![0],
        )
        .unwrap();
        let law = refocus_control(&net, &dvector![1.0], 4.0).unwrap();
        let sys = net.state_space(StateBasis::Momentum).unwrap();
        let task = TransferTask::new(dvector![0.0, 0.0], dvector![2.0, 0.0], 4.0).unwrap();
        let direct = min_energy_control(&sys, &task).unwrap();
        assert!((law.energy() - direct.energy()).abs() < 1e-12);
        assert!((law.eval(1.0) - direct.eval(1.0)).norm() < 1e-12);
    }

    #[test]
    fn refocus_zero_target_is_zero_control() {
        use crate::oscillators::OscillatorNetwork;
        let net = OscillatorNetwork::new(
            dvector![1.0],
            dvector![1.0],
            DMatrix::zeros(1, 1),
            DMatrix::zeros(1, 1),
            vec![0],
        )
        .unwrap();
        let law = refocus_control(&net, &dvector![0.0], 2.0).unwrap();
        assert!(law.energy() < 1e-25);
    }

    #[test]
    fn refocus_two_mass_chain_onto_second_node() {
        use crate::oscillators::OscillatorNetwork;
        let net = OscillatorNetwork::new(
            dvector![1.0, 1.0],
            dvector![1.0, 1.0],
            dmatrix![1.0, -1.0; -1.0, 1.0],
            DMatrix::zeros(2, 2),
            vec![0],
        )
        .unwrap();
        let tf = 8.0;
        let law = refocus_control(&net, &dvector![0.0, 1.0], tf).unwrap();
        let sys = net.state_space(StateBasis::Momentum).unwrap();
        let samples = law.sample_grid(20_000).unwrap();
        let traj = simulate_sampled(&sys, &samples, &DVector::zeros(4), tf).unwrap();
        let x = traj.final_state();
        // x = [M q; M q'] with M = I: displacement block is q directly.
        assert!((x[1] - 1.0).abs() < 1e-4, "q2 = {}", x[1]);
        assert!(x[0].abs() < 1e-4, "q1 = {}", x[0]);
    }
}
