//! Pseudo-prequantum operators: Ă = −iℏX_A + A − Θ(X_A) for a potential Θ
//! whose curvature need not be the symplectic form.

mod connection;
mod operator;
mod pullback;

pub use connection::{canonical_table, commutator_rhs, quantise, quantised_commutator, ConnectionData};
pub use operator::{commutator, FormalOperator, MultiIndex};
pub use pullback::{pullback_quantise, theorem_commutator, PullbackSetup};
