//! Connection potentials and the operators they induce.

use alloc::vec::Vec;

use super::operator::{commutator, FormalOperator};
use crate::error::Error;
use crate::symcore::{hamiltonian_vf, poisson, same_chart, ChartRef, ChartSpec, OneForm, Poly, Scalar, TwoForm, Var};

/// A potential Θ on a chart together with its curvature Ω = dΘ and the
/// chart's symplectic form ω.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConnectionData {
    chart: ChartRef,
    theta: OneForm,
    omega_curv: TwoForm,
    base_omega: TwoForm,
}

impl ConnectionData {
    pub fn new(theta: OneForm) -> Self {
        let chart = theta.chart().clone();
        let omega_curv = theta.d();
        let base_omega = TwoForm::symplectic(&chart);
        Self { chart, theta, omega_curv, base_omega }
    }

    /// Θ = θ = Σ α_i dβ_i, so Ω = ω.
    pub fn standard(chart: &ChartRef) -> Self {
        Self::new(OneForm::tautological(chart))
    }

    /// Θ = (1 + f) θ.
    pub fn scaled(f: &Poly) -> Self {
        let chart = f.chart();
        let factor = &Poly::one(chart) + f;
        Self::new(OneForm::tautological(chart).scale(&factor))
    }

    /// T*ℝⁿ with Θ = ½ p₁² dq₁ + Σ_{i≥2} p_i dq_i, folded along p₁ = 0.
    pub fn folded(n: usize) -> Self {
        let chart = ChartSpec::cotangent(n);
        let p1 = Poly::alpha(&chart, 0);
        let mut theta = OneForm::tautological(&chart);
        let first = OneForm::basis(Var::Beta(0), &p1.pow(2).scale(&Scalar::ratio(1, 2)) - &p1).expect("coordinate");
        theta = &theta + &first;
        Self::new(theta)
    }

    /// Θ + extra.
    pub fn shifted(&self, extra: &OneForm) -> Result<Self, Error> {
        if !same_chart(extra.chart(), &self.chart) {
            return Err(Error::ChartMismatch);
        }
        Ok(Self::new(&self.theta + extra))
    }

    pub fn chart(&self) -> &ChartRef {
        &self.chart
    }

    pub fn theta(&self) -> &OneForm {
        &self.theta
    }

    pub fn omega_curv(&self) -> &TwoForm {
        &self.omega_curv
    }

    pub fn base_omega(&self) -> &TwoForm {
        &self.base_omega
    }

    /// True when Ω = ω, i.e. the data is an honest prequantisation.
    pub fn is_symplectic(&self) -> bool {
        self.omega_curv == self.base_omega
    }
}

fn minus_i_hbar(chart: &ChartRef) -> Poly {
    Poly::hbar(chart).scale(&-Scalar::i())
}

/// Ă = −iℏ X_A + A − Θ(X_A).
pub fn quantise(a: &Poly, c: &ConnectionData) -> Result<FormalOperator, Error> {
    if !same_chart(a.chart(), &c.chart) {
        return Err(Error::ChartMismatch);
    }
    let x = hamiltonian_vf(a);
    let derivative = FormalOperator::from_vector_field(&x).left_mul(&minus_i_hbar(&c.chart));
    let zeroth = a - &c.theta.contract(&x)?;
    derivative.add(&FormalOperator::multiplication(&zeroth))
}

/// Closed form of [Ă, B̆]:
/// −iℏ(−iℏ X_{A,B} − Θ(X_{A,B}) − Ω(X_A, X_B) + 2{A,B}).
pub fn commutator_rhs(a: &Poly, b: &Poly, c: &ConnectionData) -> Result<FormalOperator, Error> {
    if !same_chart(a.chart(), &c.chart) || !same_chart(b.chart(), &c.chart) {
        return Err(Error::ChartMismatch);
    }
    let ab = poisson(a, b)?;
    let x_ab = hamiltonian_vf(&ab);
    let mih = minus_i_hbar(&c.chart);
    let derivative = FormalOperator::from_vector_field(&x_ab).left_mul(&(&mih * &mih));
    let curvature = c.omega_curv.eval(&hamiltonian_vf(a), &hamiltonian_vf(b))?;
    let zeroth = &(&ab.scale(&Scalar::from_int(2)) - &c.theta.contract(&x_ab)?) - &curvature;
    derivative.add(&FormalOperator::multiplication(&(&mih * &zeroth)))
}

/// [Ă, B̆] computed by composing the two operators.
pub fn quantised_commutator(a: &Poly, b: &Poly, c: &ConnectionData) -> Result<FormalOperator, Error> {
    commutator(&quantise(a, c)?, &quantise(b, c)?)
}

/// [p̆_i, q̆_j] for every pair (i, j), momentum first.
pub fn canonical_table(c: &ConnectionData) -> Result<Vec<Vec<FormalOperator>>, Error> {
    let n = c.chart.n();
    let mut rows = Vec::with_capacity(n);
    for i in 0..n {
        let p = quantise(&Poly::alpha(&c.chart, i), c)?;
        let mut row = Vec::with_capacity(n);
        for j in 0..n {
            row.push(commutator(&p, &quantise(&Poly::beta(&c.chart, j), c)?)?);
        }
        rows.push(row);
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    #[test]
    fn standard_momentum_and_position() {
        let c = ConnectionData::standard(&ChartSpec::cotangent(1));
        let chart = c.chart().clone();
        assert_eq!(quantise(&Poly::alpha(&chart, 0), &c).unwrap().to_string(), "-i*hbar*D[q1]");
        assert_eq!(quantise(&Poly::beta(&chart, 0), &c).unwrap().to_string(), "i*hbar*D[p1] + q1");
    }

    #[test]
    fn folded_position_operator() {
        let c = ConnectionData::folded(2);
        let chart = c.chart().clone();
        assert_eq!(quantise(&Poly::beta(&chart, 0), &c).unwrap().to_string(), "i*hbar*D[p1] + q1");
        let comm = quantised_commutator(&Poly::alpha(&chart, 0), &Poly::beta(&chart, 0), &c).unwrap();
        let expected = (&Poly::int(&chart, 2) - &Poly::alpha(&chart, 0)).scale(&-Scalar::i());
        assert_eq!(comm, FormalOperator::multiplication(&(&expected * &Poly::hbar(&chart))));
    }

    #[test]
    fn curvature_is_cached_exactly() {
        let c = ConnectionData::folded(3);
        assert_eq!(*c.omega_curv(), c.theta().d());
        assert_eq!(*c.base_omega(), TwoForm::symplectic(c.chart()));
        assert!(!c.is_symplectic());
        assert!(ConnectionData::standard(c.chart()).is_symplectic());
    }

    #[test]
    fn rhs_matches_structure_on_a_sample() {
        let c = ConnectionData::folded(2);
        let ch = c.chart().clone();
        let (p1, q1, p2, q2) = (Poly::alpha(&ch, 0), Poly::beta(&ch, 0), Poly::alpha(&ch, 1), Poly::beta(&ch, 1));
        let a = &(&p1 * &p1) * &q2 + &q1;
        let b = &(&p2 * &q1) - &(&q1 * &q1 * &p1);
        assert_eq!(quantised_commutator(&a, &b, &c).unwrap(), commutator_rhs(&a, &b, &c).unwrap());
    }
}
