//! Weighted L² analysis of Fourier modes on the punctured disk with the Poincaré metric.
//!
//! Radial coefficients live in the class `sum c r^a L^b`, `L = ln(1/r)`, which is closed under
//! every primitive the solvers need. Norms are integrated numerically after `u = ln(1/r)`;
//! whether they converge is decided from the exponents.

pub mod dbar;
pub mod fit;
pub mod form;
pub mod probe;
pub mod quadrature;
pub mod radial;
pub mod series;
pub mod solve;

pub use dbar::{dbar_mode_solve, il_constant, DbarSolution};
pub use fit::{frame_model_norm_sq, frame_samples, growth_fit, GrowthFit};
pub use form::{weighted_norm, ModeForm, WeightedNorm};
pub use probe::{local_vanishing_probe, ProbeConfig, ProbeReport};
pub use quadrature::Quadrature;
pub use radial::{Radial, Term};
pub use series::{nabla_primitive_series, residue_reduction, PrimitiveSeries, ResidueReduction};
pub use solve::{solve_mode, ModeSolution, ResidualKind};
