//! Seeded random polynomials (ChaCha8, so a seed gives the same stream on
//! every platform).

use num_bigint::BigInt;
use num_rational::BigRational;
use pseudoquant_core::prequant::{commutator_rhs, quantised_commutator, ConnectionData};
use pseudoquant_core::symcore::{ChartRef, Poly, Scalar};
use pseudoquant_core::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PolyShape {
    /// Bound on the total degree in the coordinates.
    pub degree: u32,
    pub max_terms: usize,
}

impl Default for PolyShape {
    fn default() -> Self {
        PolyShape { degree: 3, max_terms: 4 }
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A polynomial in the chart coordinates with small Gaussian-rational
/// coefficients. It may come out zero.
pub fn random_poly(rng: &mut ChaCha8Rng, chart: &ChartRef, shape: PolyShape) -> Poly {
    let dims = 2 * chart.n();
    let terms = rng.gen_range(1..=shape.max_terms.max(1));
    let mut out = Poly::zero(chart);
    for _ in 0..terms {
        let mut exps = vec![0u32; chart.slots()];
        let degree = rng.gen_range(0..=shape.degree);
        for _ in 0..degree {
            let k = rng.gen_range(0..dims);
            exps[chart.slot(chart.coord_var(k)).expect("coordinate")] += 1;
        }
        let re = BigRational::new(BigInt::from(rng.gen_range(-4i64..=4)), BigInt::from(rng.gen_range(1i64..=3)));
        let im = if rng.gen_bool(0.25) {
            BigRational::from_integer(BigInt::from(rng.gen_range(-2i64..=2)))
        } else {
            BigRational::from_integer(BigInt::from(0))
        };
        out = &out + &Poly::monomial(chart, exps, Scalar::new(re, im));
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct Mismatch {
    pub a: String,
    pub b: String,
    pub structural: String,
    pub closed_form: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepReport {
    pub seed: u64,
    pub pairs: usize,
    pub shape: PolyShape,
    pub mismatches: Vec<Mismatch>,
}

/// Compares the composed commutator with the closed form on `pairs` random
/// observable pairs.
pub fn structural_sweep(c: &ConnectionData, pairs: usize, shape: PolyShape, seed: u64) -> Result<SweepReport, Error> {
    let mut r = rng(seed);
    let mut mismatches = Vec::new();
    for _ in 0..pairs {
        let a = random_poly(&mut r, c.chart(), shape);
        let b = random_poly(&mut r, c.chart(), shape);
        let structural = quantised_commutator(&a, &b, c)?;
        let closed = commutator_rhs(&a, &b, c)?;
        if structural != closed {
            mismatches.push(Mismatch {
                a: a.to_string(),
                b: b.to_string(),
                structural: structural.to_string(),
                closed_form: closed.to_string(),
            });
        }
    }
    Ok(SweepReport { seed, pairs, shape, mismatches })
}

#[cfg(test)]
mod tests {
    use super::*;
    use pseudoquant_core::symcore::ChartSpec;

    #[test]
    fn seeds_reproduce() {
        let chart = ChartSpec::cotangent(2);
        let shape = PolyShape::default();
        let a: Vec<String> = (0..5).scan(rng(7), |r, _| Some(random_poly(r, &chart, shape).to_string())).collect();
        let b: Vec<String> = (0..5).scan(rng(7), |r, _| Some(random_poly(r, &chart, shape).to_string())).collect();
        assert_eq!(a, b);
        let c: Vec<String> = (0..5).scan(rng(8), |r, _| Some(random_poly(r, &chart, shape).to_string())).collect();
        assert_ne!(a, c);
    }

    #[test]
    fn degree_bound_holds() {
        let chart = ChartSpec::cotangent(3);
        let mut r = rng(1);
        for _ in 0..100 {
            let p = random_poly(&mut r, &chart, PolyShape { degree: 3, max_terms: 6 });
            assert!(p.total_degree() <= 3);
        }
    }
}
