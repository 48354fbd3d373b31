use pseudoquant::parse::parse_poly;
use pseudoquant::random::{random_poly, rng, PolyShape};
use pseudoquant_core::symcore::{ChartSpec, Orientation, Poly};
use proptest::prelude::*;

proptest! {
    #[test]
    fn display_parses_back(seed in any::<u64>(), n in 1usize..=3, hbar_power in 0u32..=2, reversed in any::<bool>()) {
        let base = ChartSpec::cotangent(n);
        let chart = if reversed { base.with_orientation(Orientation::Reversed) } else { base };
        let mut r = rng(seed);
        let p = &random_poly(&mut r, &chart, PolyShape { degree: 4, max_terms: 6 }) * &Poly::hbar(&chart).pow(hbar_power);
        let text = p.to_string();
        prop_assert_eq!(parse_poly(&chart, &text).unwrap(), p, "{}", text);
    }

    #[test]
    fn parse_is_a_ring_morphism(seed in any::<u64>()) {
        let chart = ChartSpec::cotangent(2);
        let mut r = rng(seed);
        let shape = PolyShape::default();
        let (a, b) = (random_poly(&mut r, &chart, shape), random_poly(&mut r, &chart, shape));
        let (ta, tb) = (a.to_string(), b.to_string());
        prop_assert_eq!(parse_poly(&chart, &format!("({ta}) * ({tb})")).unwrap(), &a * &b);
        prop_assert_eq!(parse_poly(&chart, &format!("({ta}) - ({tb})")).unwrap(), &a - &b);
        prop_assert_eq!(parse_poly(&chart, &format!("({ta})^2")).unwrap(), a.pow(2));
    }
}
