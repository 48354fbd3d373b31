mod common;

use common::{build, connection_examples, p, q, q1dq2, raw_poly, simple_example};
use proptest::prelude::*;
use pseudoquant_core::prequant::{
    canonical_table, commutator, commutator_rhs, pullback_quantise, quantise, quantised_commutator,
    theorem_commutator, ConnectionData, FormalOperator, PullbackSetup,
};
use pseudoquant_core::symcore::{differential, ChartSpec, Poly, Scalar, SmoothMap};

fn minus_i_hbar(chart: &pseudoquant_core::symcore::ChartRef) -> Poly {
    Poly::hbar(chart).scale(&-Scalar::i())
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    #[test]
    fn composed_commutator_matches_closed_form(
        which in 0usize..8,
        a in raw_poly(2, 3, 4),
        b in raw_poly(2, 3, 4),
    ) {
        let (name, c) = connection_examples().swap_remove(which);
        let n = c.chart().n();
        let trim = |raw: &Vec<common::RawTerm>| -> Vec<common::RawTerm> {
            raw.iter().map(|(e, re, im, d)| (e[..n].iter().chain(&e[2..2 + n]).copied().collect(), *re, *im, *d)).collect()
        };
        let (a, b) = (build(c.chart(), &trim(&a)), build(c.chart(), &trim(&b)));
        let structural = quantised_commutator(&a, &b, &c).unwrap();
        prop_assert_eq!(&structural, &commutator_rhs(&a, &b, &c).unwrap(), "connection {}", name);
    }

    #[test]
    fn gauge_shift_is_a_conjugation(a in raw_poly(1, 3, 4), b in raw_poly(1, 3, 4), g in raw_poly(1, 3, 4)) {
        let chart = ChartSpec::cotangent(1);
        let c = ConnectionData::scaled(&q(&chart, 0).pow(2));
        let (a, b, g) = (build(&chart, &a), build(&chart, &b), build(&chart, &g));
        let shifted = c.shifted(&differential(&g)).unwrap();
        prop_assert_eq!(shifted.omega_curv(), c.omega_curv());

        let before = quantise(&a, &c).unwrap();
        let after = quantise(&a, &shifted).unwrap();
        prop_assert_eq!(&after, &before.gauge_conjugate(&-&g).unwrap());

        let comm = quantised_commutator(&a, &b, &c).unwrap();
        let comm_shifted = quantised_commutator(&a, &b, &shifted).unwrap();
        prop_assert_eq!(comm_shifted, comm.gauge_conjugate(&-&g).unwrap());
    }

    #[test]
    fn gauge_shift_keeps_constant_bracket_commutators(g in raw_poly(2, 3, 5), i in 0usize..2, j in 0usize..2) {
        let chart = ChartSpec::cotangent(2);
        let c = ConnectionData::standard(&chart);
        let shifted = c.shifted(&differential(&build(&chart, &g))).unwrap();
        let (a, b) = (p(&chart, i), q(&chart, j));
        prop_assert_eq!(quantised_commutator(&a, &b, &c).unwrap(), quantised_commutator(&a, &b, &shifted).unwrap());
    }

    #[test]
    fn closed_form_pullback_commutator_in_one_degree_of_freedom(
        comps in prop::collection::vec(raw_poly(1, 2, 3), 2),
        a in raw_poly(1, 2, 3),
        b in raw_poly(1, 2, 3),
    ) {
        let chart = ChartSpec::cotangent(1);
        let map = SmoothMap::new(&chart, &chart, comps.iter().map(|c| build(&chart, c)).collect()).unwrap();
        let setup = PullbackSetup::new(map, ConnectionData::standard(&chart)).unwrap();
        let (a, b) = (build(&chart, &a), build(&chart, &b));
        let composed = commutator(&pullback_quantise(&a, &setup).unwrap(), &pullback_quantise(&b, &setup).unwrap()).unwrap();
        prop_assert_eq!(composed, theorem_commutator(&a, &b, &setup).unwrap());
    }
}

#[test]
fn canonical_relations_up_to_three_pairs() {
    for n in 1..=3 {
        let c = ConnectionData::standard(&ChartSpec::cotangent(n));
        let chart = c.chart().clone();
        let table = canonical_table(&c).unwrap();
        for (i, row) in table.iter().enumerate() {
            for (j, entry) in row.iter().enumerate() {
                let expected = if i == j { minus_i_hbar(&chart) } else { Poly::zero(&chart) };
                assert_eq!(*entry, FormalOperator::multiplication(&expected));
            }
        }
    }
}

#[test]
fn folded_first_pair() {
    for n in 1..=3 {
        let c = ConnectionData::folded(n);
        let chart = c.chart().clone();
        let table = canonical_table(&c).unwrap();
        let two_minus_p1 = &Poly::int(&chart, 2) - &p(&chart, 0);
        assert_eq!(table[0][0], FormalOperator::multiplication(&(&minus_i_hbar(&chart) * &two_minus_p1)));
        assert_eq!(table[0][0].to_string(), "i*hbar*p1 - 2*i*hbar");
        for i in 0..n {
            for j in 0..n {
                if i == 0 && j == 0 {
                    continue;
                }
                let expected = if i == j { minus_i_hbar(&chart) } else { Poly::zero(&chart) };
                assert_eq!(table[i][j], FormalOperator::multiplication(&expected));
            }
        }
    }
}

#[test]
fn q1dq2_couples_momenta_not_positions() {
    let c = q1dq2();
    let chart = c.chart().clone();
    let positions = quantised_commutator(&q(&chart, 0), &q(&chart, 1), &c).unwrap();
    assert!(positions.is_zero());
    let momenta = quantised_commutator(&p(&chart, 0), &p(&chart, 1), &c).unwrap();
    assert_eq!(momenta.to_string(), "i*hbar");
}

#[test]
fn simple_example_curvature() {
    let c = simple_example();
    let chart = c.chart().clone();
    let (pp, qq) = (p(&chart, 0), q(&chart, 0));
    // f = g = pq: 1 − f_p − g_q = 1 − q − p.
    let expected = &(&Poly::one(&chart) - &qq) - &pp;
    assert_eq!(c.omega_curv().get(pseudoquant_core::symcore::Var::Alpha(0), pseudoquant_core::symcore::Var::Beta(0)).unwrap(), expected);
    let comm = quantised_commutator(&pp, &qq, &c).unwrap();
    let one_plus = &(&Poly::one(&chart) + &qq) + &pp;
    assert_eq!(comm, FormalOperator::multiplication(&(&minus_i_hbar(&chart) * &one_plus)));
}

#[test]
fn closed_form_drops_cross_terms_with_two_pairs() {
    let chart = ChartSpec::cotangent(2);
    let setup = PullbackSetup::new(SmoothMap::identity(&chart), ConnectionData::standard(&chart)).unwrap();
    let (a, b) = (p(&chart, 0), q(&chart, 0));
    let composed = commutator(&pullback_quantise(&a, &setup).unwrap(), &pullback_quantise(&b, &setup).unwrap()).unwrap();
    assert_eq!(composed, FormalOperator::multiplication(&minus_i_hbar(&chart)));
    assert!(theorem_commutator(&a, &b, &setup).unwrap().is_zero());
}
