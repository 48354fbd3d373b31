//! Hamiltonian vector fields, Poisson brackets and the exterior derivative
//! under the fixed convention ω = Σ dα_i ∧ dβ_i,
//! X_A = Σ_i (∂A/∂α_i) ∂_{β_i} − (∂A/∂β_i) ∂_{α_i}, {A,B} = ω(X_A, X_B).

use alloc::vec::Vec;

use super::chart::Var;
use super::forms::{OneForm, TwoForm, VectorField};
use super::poly::{same_chart, Poly};
use super::scalar::Scalar;
use crate::error::Error;

pub fn partial(p: &Poly, coord: Var) -> Result<Poly, Error> {
    p.partial(coord)
}

pub fn hamiltonian_vf(a: &Poly) -> VectorField {
    let chart = a.chart();
    let n = chart.n();
    let sign = Scalar::from_int(chart.orientation().sign());
    let mut comps = Vec::with_capacity(2 * n);
    for i in 0..n {
        comps.push((-&a.partial(Var::Beta(i)).expect("chart coordinate")).scale(&sign));
    }
    for i in 0..n {
        comps.push(a.partial(Var::Alpha(i)).expect("chart coordinate").scale(&sign));
    }
    VectorField::new(chart, comps).expect("components built on the chart")
}

pub fn poisson(a: &Poly, b: &Poly) -> Result<Poly, Error> {
    if !same_chart(a.chart(), b.chart()) {
        return Err(Error::ChartMismatch);
    }
    let chart = a.chart();
    let mut out = Poly::zero(chart);
    for i in 0..chart.n() {
        let (al, be) = (Var::Alpha(i), Var::Beta(i));
        out = &out + &(&(&a.partial(al)? * &b.partial(be)?) - &(&a.partial(be)? * &b.partial(al)?));
    }
    Ok(out.scale(&Scalar::from_int(chart.orientation().sign())))
}

/// d of a 0-form.
pub fn differential(f: &Poly) -> OneForm {
    let chart = f.chart();
    let comps = chart.coords().map(|v| f.partial(v).expect("chart coordinate")).collect();
    OneForm::new(chart, comps).expect("components built on the chart")
}

pub fn exterior_d(theta: &OneForm) -> TwoForm {
    theta.d()
}

pub fn contract(theta: &OneForm, x: &VectorField) -> Result<Poly, Error> {
    theta.contract(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symcore::{ChartSpec, Orientation};

    #[test]
    fn hamiltonian_vector_field_examples() {
        let c = ChartSpec::labelled(1, "a", "b");
        let a = Poly::alpha(&c, 0);
        let b = Poly::beta(&c, 0);
        assert_eq!(hamiltonian_vf(&a), VectorField::coordinate(&c, Var::Beta(0)).unwrap());
        let minus_da = VectorField::coordinate(&c, Var::Alpha(0)).unwrap().scale(&Poly::int(&c, -1));
        assert_eq!(hamiltonian_vf(&b), minus_da);
        let half_sq = a.pow(2).scale(&Scalar::ratio(1, 2));
        assert_eq!(hamiltonian_vf(&half_sq), VectorField::coordinate(&c, Var::Beta(0)).unwrap().scale(&a));
    }

    #[test]
    fn bracket_examples() {
        let c = ChartSpec::labelled(1, "a", "b");
        let a = Poly::alpha(&c, 0);
        let b = Poly::beta(&c, 0);
        assert_eq!(poisson(&a, &b).unwrap(), Poly::one(&c));
        assert!(poisson(&a, &a).unwrap().is_zero());
        let half_sq = a.pow(2).scale(&Scalar::ratio(1, 2));
        assert_eq!(poisson(&half_sq, &b).unwrap(), a);
        assert_eq!(poisson(&a, &Poly::beta(&ChartSpec::cotangent(1), 0)), Err(Error::ChartMismatch));
    }

    #[test]
    fn bracket_is_symplectic_pairing() {
        for orientation in [Orientation::Standard, Orientation::Reversed] {
            let c = ChartSpec::cotangent(2).with_orientation(orientation);
            let omega = TwoForm::symplectic(&c);
            let a = &Poly::alpha(&c, 0).pow(2) * &Poly::beta(&c, 1);
            let b = &Poly::beta(&c, 0) * &Poly::alpha(&c, 1);
            let lhs = omega.eval(&hamiltonian_vf(&a), &hamiltonian_vf(&b)).unwrap();
            assert_eq!(lhs, poisson(&a, &b).unwrap());
            let ab = poisson(&Poly::alpha(&c, 0), &Poly::beta(&c, 0)).unwrap();
            assert_eq!(ab, Poly::int(&c, orientation.sign()));
        }
    }

    #[test]
    fn d_of_differential_vanishes() {
        let c = ChartSpec::cotangent(2);
        let f = &(&Poly::alpha(&c, 0).pow(3) * &Poly::beta(&c, 1)) + &Poly::hbar(&c);
        assert!(exterior_d(&differential(&f)).is_zero());
    }
}
