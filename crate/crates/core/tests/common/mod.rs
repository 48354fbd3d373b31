#![allow(dead_code)]

use num_rational::BigRational;
use proptest::prelude::*;
use pseudoquant_core::prequant::ConnectionData;
use pseudoquant_core::symcore::{ChartRef, ChartSpec, OneForm, Poly, Scalar, Var};

/// (coordinate exponents in component order, real part, imaginary part, denominator)
pub type RawTerm = (Vec<u32>, i64, i64, i64);

/// Up to `max_terms` monomials in 2n coordinates with total degree ≤ `degree`.
pub fn raw_poly(n: usize, degree: u32, max_terms: usize) -> impl Strategy<Value = Vec<RawTerm>> {
    let term = (prop::collection::vec(0..=degree, 2 * n), -4i64..=4, -2i64..=2, 1i64..=3)
        .prop_filter("degree bound", move |(e, ..)| e.iter().sum::<u32>() <= degree);
    prop::collection::vec(term, 0..=max_terms)
}

pub fn build(chart: &ChartRef, raw: &[RawTerm]) -> Poly {
    let mut out = Poly::zero(chart);
    for (exps, re, im, den) in raw {
        let mut slots = vec![0u32; chart.slots()];
        for (k, &e) in exps.iter().enumerate() {
            slots[chart.slot(chart.coord_var(k)).unwrap()] = e;
        }
        let c = Scalar::new(BigRational::new((*re).into(), (*den).into()), BigRational::from_integer((*im).into()));
        out = &out + &Poly::monomial(chart, slots, c);
    }
    out
}

pub fn p(chart: &ChartRef, i: usize) -> Poly {
    Poly::alpha(chart, i)
}

pub fn q(chart: &ChartRef, i: usize) -> Poly {
    Poly::beta(chart, i)
}

/// Θ = θ + q₁ dq₂ on T*ℝ².
pub fn q1dq2() -> ConnectionData {
    let chart = ChartSpec::cotangent(2);
    let extra = OneForm::basis(Var::Beta(1), q(&chart, 0)).unwrap();
    ConnectionData::standard(&chart).shifted(&extra).unwrap()
}

/// Θ = (p/2 − f) dq − (q/2 − g) dp on T*ℝ with f = g = pq.
pub fn simple_example() -> ConnectionData {
    let chart = ChartSpec::cotangent(1);
    let pq = &p(&chart, 0) * &q(&chart, 0);
    let half = Scalar::ratio(1, 2);
    let dq = &p(&chart, 0).scale(&half) - &pq;
    let dp = &pq - &q(&chart, 0).scale(&half);
    ConnectionData::new(OneForm::new(&chart, vec![dp, dq]).unwrap())
}

/// Connections the structural oracle is exercised on, with a name.
pub fn connection_examples() -> Vec<(&'static str, ConnectionData)> {
    let one = ChartSpec::cotangent(1);
    let two = ChartSpec::cotangent(2);
    let reversed = ChartSpec::cotangent(1).with_orientation(pseudoquant_core::symcore::Orientation::Reversed);
    vec![
        ("standard-1", ConnectionData::standard(&one)),
        ("standard-2", ConnectionData::standard(&two)),
        ("reversed-1", ConnectionData::standard(&reversed)),
        ("folded-2", ConnectionData::folded(2)),
        ("scaled-beta2", ConnectionData::scaled(&q(&one, 0).pow(2))),
        ("scaled-alpha-beta", ConnectionData::scaled(&(&p(&one, 0) * &q(&one, 0)))),
        ("q1dq2", q1dq2()),
        ("simple", simple_example()),
    ]
}
