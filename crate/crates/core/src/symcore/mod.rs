//! Exact chart-level calculus: polynomials over ℚ(i), forms, vector fields,
//! brackets and pullbacks.

mod calculus;
mod chart;
mod forms;
mod map;
mod poly;
mod scalar;

pub use calculus::{contract, differential, exterior_d, hamiltonian_vf, partial, poisson};
pub use chart::{ChartRef, ChartSpec, Orientation, Var};
pub use forms::{OneForm, TwoForm, VectorField};
pub use map::{pullback_form, Pullback, SmoothMap};
pub use poly::{Exponents, Poly};
pub use scalar::Scalar;

pub(crate) use poly::same_chart;
