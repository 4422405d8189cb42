//! Control-energy analysis of linear network dynamics.
//!
//! The crate is organized around the pipeline
//!
//! ```text
//! netgen / oscillators  ──►  LinearSystem (A, B)  ──►  gramian  ──►  placement
//!                                        │
//!                                        └──►  control (minimum-energy synthesis)
//! ```
//!
//! * [`matfun`] — dense matrix kernels: matrix exponential, real Schur form with
//!   eigenvalue reordering, Lyapunov/Riccati solvers, generalized symmetric-definite
//!   eigenproblem.
//! * [`gramian`] — finite/infinite-horizon reachability, controllability-to-zero,
//!   mixed and modal-diagonal Gramians, and the energy metrics derived from them.
//! * [`control`] — minimum-energy control synthesis, transfer costs, RK4 simulation,
//!   bounded-control controllability classification.
//! * [`netgen`] — random-matrix ensembles (circular/elliptic laws, sparse ER),
//!   directed scale-free graphs, strong-connectivity repair, weighted degrees.
//! * [`oscillators`] — coupled harmonic oscillators and damped swing-equation grids,
//!   state-space realizations, modal decompositions.
//! * [`placement`] — driver-node selection strategies and their evaluation.

pub mod control;
pub mod error;
pub mod gramian;
pub mod matfun;
pub mod netgen;
pub mod oscillators;
pub mod placement;

pub use error::{Error, Result};
