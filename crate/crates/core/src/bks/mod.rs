//! BKS pairing analysis for the kinetic observable ½α² under monomial
//! deformations Θ = (1 + f) θ.
//!
//! Term classification is exact (rational τ exponents). Oscillatory moments
//! are evaluated from Gamma-function closed forms, with a quadrature oracle
//! in [`quadrature`].

mod moment;
mod pairing;
pub mod quadrature;

use alloc::vec::Vec;

use num_complex::Complex64;
use num_rational::Rational64;
use num_traits::{Signed, Zero};

use crate::error::Error;

pub use moment::{half_line_moment, oscillatory_moment, oscillatory_moment_raw};
pub use pairing::{
    expansion_terms, flow_scheme_coefficients, position_pairing, prefactor, standard_schrodinger_check,
    CoefficientSample, ExpansionTerm, FlowCoefficients, PairingResult, SeriesScheme, StandardCheck, TermStatus,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DeformationKind {
    /// f = (λ/2) αⁿ, along the leaves.
    Momentum,
    /// f = βⁿ, transverse to the leaves.
    Position,
    None,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DeformationSpec {
    pub kind: DeformationKind,
    pub n: u32,
    pub lambda: Rational64,
    pub hbar: f64,
}

impl DeformationSpec {
    pub fn new(kind: DeformationKind, n: u32, lambda: Rational64, hbar: f64) -> Result<Self, Error> {
        if n == 0 {
            return Err(Error::InvalidParameter("deformation order n must be at least 1".into()));
        }
        if kind != DeformationKind::None && lambda.is_zero() {
            return Err(Error::InvalidParameter("deformation magnitude must be nonzero".into()));
        }
        if !(hbar.is_finite() && hbar > 0.0) {
            return Err(Error::InvalidParameter(alloc::format!("hbar = {hbar} must be positive")));
        }
        Ok(Self { kind, n, lambda, hbar })
    }

    pub fn momentum(n: u32, lambda: Rational64, hbar: f64) -> Result<Self, Error> {
        Self::new(DeformationKind::Momentum, n, lambda, hbar)
    }

    pub fn position(n: u32, hbar: f64) -> Result<Self, Error> {
        Self::new(DeformationKind::Position, n, Rational64::from_integer(1), hbar)
    }

    pub fn lambda_f64(&self) -> f64 {
        *self.lambda.numer() as f64 / *self.lambda.denom() as f64
    }
}

fn r(num: i64, den: i64) -> Rational64 {
    Rational64::new(num, den)
}

/// τ exponent of the j-th term of I_{n,m} in closed form:
/// e = −1/2 + m − 1/(2n) + jn/(n+2). Panics if n = 0.
pub fn exponent(n: u32, m: u32, j: u32) -> Rational64 {
    exponent_at(n, m, Rational64::from_integer(i64::from(j)))
}

/// [`exponent`] at a rational j.
pub fn exponent_at(n: u32, m: u32, j: Rational64) -> Rational64 {
    assert!(n >= 1, "n must be positive");
    let (n, m) = (i64::from(n), i64::from(m));
    r(-1, 2) + r(m, 1) - r(1, 2 * n) + j * r(n, n + 2)
}

/// The j with exponent(n, m, j) = 0: (n+2)(n − 2mn + 1)/(2n²). Panics if n = 0.
pub fn critical_j(n: u32, m: u32) -> Rational64 {
    assert!(n >= 1, "n must be positive");
    let (n, m) = (i64::from(n), i64::from(m));
    r((n + 2) * (n - 2 * m * n + 1), 2 * n * n)
}

/// τ exponent obtained by substituting μ = α τ^{1/(n+2)} into I_{n,m}
/// directly: m − 1/2 − 1/(n+2) + jn/(n+2). Panics if n = 0.
pub fn derived_exponent(n: u32, m: u32, j: u32) -> Rational64 {
    derived_exponent_at(n, m, Rational64::from_integer(i64::from(j)))
}

/// [`derived_exponent`] at a rational j.
pub fn derived_exponent_at(n: u32, m: u32, j: Rational64) -> Rational64 {
    assert!(n >= 1, "n must be positive");
    let (n, m) = (i64::from(n), i64::from(m));
    r(m, 1) - r(1, 2) - r(1, n + 2) + j * r(n, n + 2)
}

/// Zero of [`derived_exponent`] in j.
pub fn derived_critical_j(n: u32, m: u32) -> Rational64 {
    assert!(n >= 1, "n must be positive");
    let (n, m) = (i64::from(n), i64::from(m));
    r((n + 2) * (1 - 2 * m) + 2, 2 * n)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Classification {
    Diverges,
    FiniteCandidate,
    Vanishes,
}

impl Classification {
    pub fn of(exponent: Rational64) -> Self {
        if exponent.is_negative() {
            Classification::Diverges
        } else if exponent.is_zero() {
            Classification::FiniteCandidate
        } else {
            Classification::Vanishes
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Classification::Diverges => "diverges",
            Classification::FiniteCandidate => "finite-candidate",
            Classification::Vanishes => "vanishes",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BKSTermReport {
    pub n: u32,
    pub m: u32,
    pub j: u32,
    pub exponent: Rational64,
    pub j_critical: Rational64,
    pub j_critical_is_integer: bool,
    pub classification: Classification,
    pub derived_exponent: Rational64,
    pub derived_classification: Classification,
    /// ∫ μ^{2j} e^{iλμ^{n+2}/(2ℏ)} dμ.
    pub mu_moment: Option<Complex64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PairingClassification {
    pub spec: DeformationSpec,
    pub terms: Vec<BKSTermReport>,
    /// False as soon as one term diverges.
    pub converges: bool,
}

pub fn term_report(d: &DeformationSpec, m: u32, j: u32) -> BKSTermReport {
    let n = d.n;
    let e = exponent(n, m, j);
    let jc = critical_j(n, m);
    let de = derived_exponent(n, m, j);
    let a = d.lambda_f64() / (2.0 * d.hbar);
    BKSTermReport {
        n,
        m,
        j,
        exponent: e,
        j_critical: jc,
        j_critical_is_integer: jc.is_integer(),
        classification: Classification::of(e),
        derived_exponent: de,
        derived_classification: Classification::of(de),
        mu_moment: oscillatory_moment(j, n + 2, a).ok(),
    }
}

/// Term table for the kinetic observable under a momentum deformation,
/// m = 0..=m_max and j from 0 to two past the larger critical j.
pub fn classify_pairing(d: &DeformationSpec, m_max: u32) -> Result<PairingClassification, Error> {
    if d.kind != DeformationKind::Momentum {
        return Err(Error::InvalidParameter("term classification applies to momentum deformations".into()));
    }
    let mut terms = Vec::new();
    for m in 0..=m_max {
        let top = critical_j(d.n, m).floor().max(derived_critical_j(d.n, m).floor()).max(Rational64::zero());
        let j_max = *top.numer() as u32 + 2;
        for j in 0..=j_max {
            terms.push(term_report(d, m, j));
        }
    }
    let converges = terms.iter().all(|t| t.classification != Classification::Diverges);
    Ok(PairingClassification { spec: *d, terms, converges })
}
