//! Wilson loop expectation values in two-dimensional Yang-Mills theory.
//!
//! Three independent engines are provided and cross-checked against each other:
//!
//! * [`lattice`]: exact values from the heat-kernel lattice measure, with a
//!   Monte Carlo oracle on arbitrary surface maps;
//! * [`asymptotics`]: small-coupling asymptotics as Gaussian integrals over the
//!   Lie algebra, their power series, and the exponentially small gap to the
//!   exact answer;
//! * [`pertloop`]: perturbative coefficients in holomorphic gauge on the plane,
//!   built on the graded Wick calculus of [`wick`].
//!
//! [`liegroup`] and [`heatkernel`] hold the group-theoretic data shared by all of them.

pub mod asymptotics;
pub mod error;
pub mod heatkernel;
pub mod lattice;
pub mod liegroup;
pub mod pertloop;
pub mod quadrature;
pub mod series;
pub mod wick;

pub use error::{Error, Result};
pub use liegroup::{ClassFunction, GroupKind, GroupModel, Irrep};
pub use series::PowerSeries;
