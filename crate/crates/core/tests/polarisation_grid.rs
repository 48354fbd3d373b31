mod common;

use common::{build, p, q, raw_poly};
use proptest::prelude::*;
use pseudoquant_core::polarisation::{
    classify_monomials, cohomologous_actions, flat_action, general_scaled_display, preservation_operators, preserves,
    CaseTag, Polarisation, Verdict,
};
use pseudoquant_core::prequant::ConnectionData;
use pseudoquant_core::symcore::{ChartSpec, OneForm, Poly, Var};

#[test]
fn standard_and_polarised_grids_preserve_exactly_linear_momentum() {
    let chart = ChartSpec::cotangent(1);
    let cases = [(Poly::zero(&chart), CaseTag::Standard), (q(&chart, 0).pow(2), CaseTag::PolarisedScaled)];
    for (f, tag) in cases {
        let grid = classify_monomials(3, 3, &f, tag).unwrap();
        assert_eq!(grid.len(), 16);
        for e in grid {
            let expected = if e.m <= 1 { Verdict::Preserves } else { Verdict::Fails };
            assert_eq!(e.report.verdict, expected, "m={} n={} f={f}", e.m, e.n);
            assert_eq!(e.report.residual.is_empty(), e.m <= 1);
            assert_eq!(e.report.case, tag);
        }
    }
}

#[test]
fn general_scaling_breaks_linear_momentum() {
    let chart = ChartSpec::cotangent(1);
    let (a, b) = (p(&chart, 0), q(&chart, 0));
    for f in [&a * &b, a.clone(), &a.pow(2) * &b, &a + &b] {
        let c = ConnectionData::scaled(&f);
        let pol = Polarisation::vertical(&c);
        let report = preserves(&a, &c, &pol).unwrap();
        assert_eq!(report.case, CaseTag::GeneralScaled);
        assert_eq!(report.verdict, Verdict::Fails, "f = {f}");
    }
}

#[test]
fn mismatched_case_tag_is_rejected() {
    let chart = ChartSpec::cotangent(1);
    assert!(classify_monomials(1, 1, &q(&chart, 0), CaseTag::Standard).is_err());
}

#[test]
fn strict_reading_differs_from_rule() {
    let chart = ChartSpec::cotangent(1);
    let f = q(&chart, 0).pow(2);
    let c = ConnectionData::scaled(&f);
    let report = preserves(&p(&chart, 0), &c, &Polarisation::vertical(&c)).unwrap();
    assert_eq!(report.verdict, Verdict::Preserves);
    assert_eq!(report.strict_verdict, Verdict::Fails);
    assert_eq!(report.strict_residual[0].coeff, -&f);
}

fn small(n: usize) -> impl Strategy<Value = Vec<common::RawTerm>> {
    raw_poly(n, 3, 4)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn standard_rule_is_linearity_in_momentum(raw in small(1)) {
        let chart = ChartSpec::cotangent(1);
        let c = ConnectionData::standard(&chart);
        let a = build(&chart, &raw);
        let report = preserves(&a, &c, &Polarisation::vertical(&c)).unwrap();
        let linear = a.partial(Var::Alpha(0)).unwrap().partial(Var::Alpha(0)).unwrap().is_zero();
        prop_assert_eq!(report.verdict == Verdict::Preserves, linear);
    }

    #[test]
    fn constants_and_positions_always_preserve(raw in small(1), k in -5i64..5) {
        let chart = ChartSpec::cotangent(1);
        let c = ConnectionData::scaled(&build(&chart, &raw));
        let pol = Polarisation::vertical(&c);
        prop_assume!(pol.is_adapted());
        for a in [Poly::int(&chart, k), q(&chart, 0)] {
            prop_assert_eq!(preserves(&a, &c, &pol).unwrap().verdict, Verdict::Preserves);
        }
    }

    #[test]
    fn cohomologous_form_gives_same_actions(raw in small(1), f_raw in small(1)) {
        let chart = ChartSpec::cotangent(1);
        let f = build(&chart, &f_raw);
        // Θ = (1+f)θ, so ω − Ω = d(−fθ).
        let c = ConnectionData::scaled(&f);
        let pol = Polarisation::vertical(&c);
        let gamma = OneForm::tautological(&chart).scale(&-&f);
        let a = build(&chart, &raw);
        let direct: Vec<_> = preservation_operators(&a, &c, &pol).unwrap().iter().map(|op| flat_action(op, &pol).unwrap()).collect();
        prop_assert_eq!(direct, cohomologous_actions(&a, &c, &pol, &gamma).unwrap());
    }

    #[test]
    fn displayed_condition_matches_for_momentum_free_scaling(raw in small(1), f_raw in raw_poly(1, 3, 3)) {
        let chart = ChartSpec::cotangent(1);
        let f = build(&chart, &f_raw);
        let f = pol_free(&f);
        let c = ConnectionData::scaled(&f);
        let pol = Polarisation::vertical(&c);
        let a = build(&chart, &raw);
        let action = flat_action(&preservation_operators(&a, &c, &pol).unwrap()[0], &pol).unwrap();
        let (c0, c1) = general_scaled_display(&a, &f).unwrap();
        prop_assert_eq!(action.coefficient(&[0]), -&c0);
        prop_assert_eq!(action.coefficient(&[1]), -&c1);
    }
}

/// Drops every term that depends on the momentum.
fn pol_free(f: &Poly) -> Poly {
    let chart = f.chart();
    let slot = chart.slot(Var::Alpha(0)).unwrap();
    Poly::from_terms(chart, f.terms().iter().filter(|(e, _)| e[slot] == 0).map(|(e, c)| (e.clone(), c.clone())))
}

#[test]
fn displayed_condition_misses_momentum_derivative_term() {
    let chart = ChartSpec::cotangent(1);
    let (a, b) = (p(&chart, 0), q(&chart, 0));
    let f = &a * &b;
    let obs = &a.pow(2) * &b;
    let c = ConnectionData::scaled(&f);
    let pol = Polarisation::vertical(&c);
    let action = flat_action(&preservation_operators(&obs, &c, &pol).unwrap()[0], &pol).unwrap();
    let (c0, _) = general_scaled_display(&obs, &f).unwrap();
    assert_ne!(action.coefficient(&[0]), -&c0);
}
