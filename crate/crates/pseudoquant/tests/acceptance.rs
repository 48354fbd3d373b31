//! Acceptance criteria, one test each. Every test prints a single line
//! `[criterion N] PASS|FAIL ...` with the measured value and the pinned
//! tolerance, then asserts.

use std::time::{Duration, Instant};

use num_complex::Complex64;
use num_rational::Rational64;
use pseudoquant::random::{structural_sweep, PolyShape};
use pseudoquant::verify::{verify_all, Status, DEFAULT_SEED};
use pseudoquant::catalog;
use pseudoquant_core::bks::quadrature::moment_by_quadrature;
use pseudoquant_core::bks::{
    classify_pairing, critical_j, exponent_at, half_line_moment, oscillatory_moment, position_pairing, prefactor,
    Classification, DeformationSpec,
};
use pseudoquant_core::bohrsommerfeld::{folded_points, standard_dim};
use pseudoquant_core::dynamics::{evolve, EvolutionConfig, Grid1D, WaveState};
use pseudoquant_core::polarisation::{classify_monomials, preserves, CaseTag, Polarisation, Verdict};
use pseudoquant_core::prequant::{
    canonical_table, commutator, pullback_quantise, theorem_commutator, ConnectionData, FormalOperator,
};
use pseudoquant_core::symcore::{ChartSpec, Orientation, Poly, Scalar};

const EXACT: &str = "exact";

fn report(n: u32, title: &str, ok: bool, detail: String, elapsed: Duration, budget: Option<Duration>) {
    let within = budget.is_none_or(|b| elapsed <= b);
    let time = match budget {
        Some(b) => format!("{:.3}s (limit {}s)", elapsed.as_secs_f64(), b.as_secs()),
        None => format!("{:.3}s", elapsed.as_secs_f64()),
    };
    let verdict = if ok && within { "PASS" } else { "FAIL" };
    println!("[criterion {n:>2}] {verdict} {title}: {detail}; {time}");
    assert!(ok, "criterion {n} ({title}) failed: {detail}");
    assert!(within, "criterion {n} ({title}) exceeded its time budget: {time}");
}

fn minus_i_hbar(chart: &pseudoquant_core::symcore::ChartRef) -> Poly {
    Poly::hbar(chart).scale(&-Scalar::i())
}

#[test]
fn criterion_01_canonical_recovery() {
    let start = Instant::now();
    let mut bad = 0;
    let mut total = 0;
    for n in 1..=3 {
        let chart = ChartSpec::cotangent(n);
        let c = ConnectionData::standard(&chart);
        for (i, row) in canonical_table(&c).unwrap().iter().enumerate() {
            for (j, e) in row.iter().enumerate() {
                let expected = if i == j { minus_i_hbar(&chart) } else { Poly::zero(&chart) };
                total += 1;
                bad += usize::from(*e != FormalOperator::multiplication(&expected));
            }
        }
    }
    report(
        1,
        "canonical recovery on T*R^n, n <= 3",
        bad == 0,
        format!("{bad}/{total} entries differ from -i*hbar*delta_ij (tolerance {EXACT})"),
        start.elapsed(),
        Some(Duration::from_secs(1)),
    );
}

#[test]
fn criterion_02_folded_commutator() {
    let start = Instant::now();
    let mut bad = 0;
    let mut shown = String::new();
    for n in 1..=3 {
        let c = ConnectionData::folded(n);
        let chart = c.chart().clone();
        let table = canonical_table(&c).unwrap();
        for (i, row) in table.iter().enumerate() {
            for (j, e) in row.iter().enumerate() {
                let expected = if (i, j) == (0, 0) {
                    &minus_i_hbar(&chart) * &(&Poly::int(&chart, 2) - &Poly::alpha(&chart, 0))
                } else if i == j {
                    minus_i_hbar(&chart)
                } else {
                    Poly::zero(&chart)
                };
                bad += usize::from(*e != FormalOperator::multiplication(&expected));
            }
        }
        shown = table[0][0].to_string();
    }
    report(
        2,
        "folded commutator [p1, q1] = -i*hbar*(2 - p1)",
        bad == 0,
        format!("[p1, q1] = {shown}; {bad} mismatching entries for n = 1..3 (tolerance {EXACT})"),
        start.elapsed(),
        Some(Duration::from_secs(1)),
    );
}

#[test]
fn criterion_03_cylinder_family() {
    let start = Instant::now();
    let mut ok = true;
    let mut values = Vec::new();
    for (num, den) in [(1, 4), (1, 2), (1, 1), (2, 1)] {
        let lambda = Scalar::ratio(num, den);
        let setup = catalog::cylinder(&lambda);
        let target = setup.map().target().clone();
        let (z, phi) = (Poly::alpha(&target, 0), Poly::beta(&target, 0));
        let got = theorem_commutator(&z, &phi, &setup).unwrap();
        // -i*hbar*(2*lambda - 1)/lambda^2, from rational arithmetic on (num, den)
        let coeff = Rational64::new(2 * num * den - den * den, num * num);
        let value = Scalar::ratio(*coeff.numer(), *coeff.denom());
        let expected = Poly::hbar(setup.map().source()).scale(&(&-Scalar::i() * &value));
        ok &= got == FormalOperator::multiplication(&expected);
        ok &= commutator(&pullback_quantise(&z, &setup).unwrap(), &pullback_quantise(&phi, &setup).unwrap()).unwrap() == got;
        values.push(format!("lambda={lambda}: {got}"));
    }
    let setup = catalog::cylinder_with_parameter();
    let target = setup.map().target().clone();
    let got = theorem_commutator(&Poly::alpha(&target, 0), &Poly::beta(&target, 0), &setup).unwrap();
    let coeff = got.as_multiplication().expect("multiplication operator");
    let k = 1.0 / (std::f64::consts::SQRT_2 - 1.0);
    let at = coeff.eval(&[Complex64::new(1.0, 0.0), Complex64::new(k, 0.0), Complex64::new(0.2, 0.0), Complex64::new(-0.4, 0.0)]);
    let err = (at - Complex64::i()).norm();
    ok &= err < 1e-12;
    report(
        3,
        "cylinder family -i*hbar*(2*lambda - 1)/lambda^2",
        ok,
        format!("{} (tolerance {EXACT}); lambda = sqrt(2) - 1 gives {at}, |err| {err:.1e} (tolerance 1e-12)", values.join(", ")),
        start.elapsed(),
        None,
    );
}

#[test]
fn criterion_04_structural_vs_formula() {
    let start = Instant::now();
    let one = ChartSpec::cotangent(1);
    let (p, q) = (Poly::alpha(&one, 0), Poly::beta(&one, 0));
    let examples = vec![
        ConnectionData::standard(&one),
        ConnectionData::standard(&ChartSpec::cotangent(2)),
        ConnectionData::standard(&ChartSpec::cotangent(3)),
        ConnectionData::standard(&one.with_orientation(Orientation::Reversed)),
        ConnectionData::folded(2),
        ConnectionData::scaled(&q.pow(2)),
        ConnectionData::scaled(&(&p * &q)),
        catalog::q1dq2(),
        catalog::coupled(&(&p * &q), &(&p * &q)).unwrap(),
    ];
    let shape = PolyShape { degree: 3, max_terms: 4 };
    let mut mismatches = 0;
    let mut pairs = 0;
    for (k, c) in examples.iter().enumerate() {
        let r = structural_sweep(c, 200, shape, 1000 + k as u64).unwrap();
        mismatches += r.mismatches.len();
        pairs += r.pairs;
    }
    report(
        4,
        "composed commutator equals closed form",
        mismatches == 0,
        format!("{} connections, {pairs} random pairs (degree <= 3), {mismatches} mismatches (tolerance {EXACT})", examples.len()),
        start.elapsed(),
        Some(Duration::from_secs(10)),
    );
}

#[test]
fn criterion_05_preservation_grid() {
    let start = Instant::now();
    let chart = ChartSpec::cotangent(1);
    let (p, q) = (Poly::alpha(&chart, 0), Poly::beta(&chart, 0));
    let mut ok = true;
    let mut cells = 0;
    for (f, tag) in [(Poly::zero(&chart), CaseTag::Standard), (q.pow(2), CaseTag::PolarisedScaled)] {
        for e in classify_monomials(3, 3, &f, tag).unwrap() {
            cells += 1;
            let expect = e.m <= 1;
            ok &= (e.report.verdict == Verdict::Preserves) == expect;
            ok &= e.report.residual.is_empty() == expect;
        }
    }
    let fs = [&p * &q, p.clone(), &p * &q.pow(2), &p.pow(2) * &q, &p + &q, &(&p * &q) + &Poly::int(&chart, 3)];
    let mut failing = 0;
    for f in &fs {
        let c = ConnectionData::scaled(f);
        let r = preserves(&p, &c, &Polarisation::vertical(&c)).unwrap();
        failing += usize::from(r.case == CaseTag::GeneralScaled && r.verdict == Verdict::Fails);
    }
    ok &= failing == fs.len();
    report(
        5,
        "preservation grid",
        ok,
        format!(
            "{cells} cells in the standard and polarised-scaled 4x4 grids match m <= 1; \
             general-scaled with constant bracket fails for {failing}/{} f (tolerance {EXACT})",
            fs.len()
        ),
        start.elapsed(),
        None,
    );
}

#[test]
fn criterion_06_kinetic_divergence_and_critical_j() {
    let start = Instant::now();
    let mut diverging = 0;
    for n in 1..=50 {
        let d = DeformationSpec::momentum(n, Rational64::from_integer(1), 1.0).unwrap();
        let t = classify_pairing(&d, 0).unwrap();
        let lead = t.terms.iter().find(|t| t.m == 0 && t.j == 0).expect("leading term");
        diverging += usize::from(lead.classification == Classification::Diverges);
    }
    let mut zero = 0;
    for n in 1..=20 {
        for m in 0..=5 {
            zero += usize::from(exponent_at(n, m, critical_j(n, m)) == Rational64::from_integer(0));
        }
    }
    report(
        6,
        "leading kinetic term diverges; critical-j identity",
        diverging == 50 && zero == 120,
        format!("(n, 0, 0) diverges for {diverging}/50 n; e(n, m, j') = 0 for {zero}/120 (n, m) (tolerance {EXACT})"),
        start.elapsed(),
        None,
    );
}

#[test]
fn criterion_07_position_coefficient() {
    let start = Instant::now();
    let hbar = 1.0;
    let betas: Vec<f64> = (0..=40).map(|k| k as f64 * 0.05).collect();
    let r = position_pairing(2, &betas, hbar).unwrap();
    let scaled: Vec<Complex64> = r.samples.iter().map(|s| s.coefficient * (1.0 + 2.0 * s.beta * s.beta).powf(1.5)).collect();
    let spread = scaled.iter().map(|z| (z - scaled[0]).norm() / scaled[0].norm()).fold(0.0, f64::max);
    let zero_err = (r.samples[0].coefficient - Complex64::new(-0.5 * hbar * hbar, 0.0)).norm() / (0.5 * hbar * hbar);
    let expected = Complex64::from_polar((2.0 * std::f64::consts::PI * hbar).sqrt(), std::f64::consts::FRAC_PI_4);
    let pref_err = (prefactor(hbar).unwrap() - expected).norm() / expected.norm();
    report(
        7,
        "position-deformed kinetic coefficient",
        spread < 1e-6 && zero_err < 1e-12 && pref_err < 1e-8,
        format!(
            "coefficient*(1+2beta^2)^(3/2) spread {spread:.1e} (tolerance 1e-6); beta = 0 vs -hbar^2/2 rel {zero_err:.1e} \
             (tolerance 1e-12); prefactor vs sqrt(2 pi hbar) e^(i pi/4) rel {pref_err:.1e} (tolerance 1e-8)"
        ),
        start.elapsed(),
        Some(Duration::from_secs(30)),
    );
}

#[test]
fn criterion_08_oscillatory_oracle() {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for j in 0..=3 {
        for k in 2..=6 {
            for a in [0.5, 1.0, 2.0, -1.5] {
                let exact = oscillatory_moment(j, k, a).unwrap();
                let quad = moment_by_quadrature(2 * j, k, a).unwrap();
                // odd k moments of even powers can cancel to zero; scale by the half-line magnitude then
                let scale = exact.norm().max(half_line_moment(f64::from(2 * j + 1), k, a).norm());
                worst = worst.max((exact - quad).norm() / scale);
            }
        }
    }
    report(
        8,
        "Gamma-form moments against regulated quadrature",
        worst < 1e-8,
        format!("j <= 3, k = 2..6: worst relative deviation {worst:.1e} (tolerance 1e-8)"),
        start.elapsed(),
        None,
    );
}

#[test]
fn criterion_09_dynamics() {
    let start = Instant::now();
    let g = Grid1D::new(-10.0, 10.0, 2048).unwrap();
    let (sigma, hbar) = (0.5, 1.0);
    let free = EvolutionConfig::new(0, hbar, 1e-3, 1000).unwrap();
    let t = evolve(&WaveState::gaussian(&g, 0.0, 0.0, sigma, hbar).unwrap(), &free, &g, 1000, false).unwrap();
    let last = t.rows.last().unwrap();
    let expected = sigma * (1.0 + (hbar * last.time / (2.0 * sigma * sigma)).powi(2)).sqrt();
    let width_err = (last.var_q.sqrt() - expected).abs() / expected;

    let deformed = EvolutionConfig::new(2, hbar, 1e-3, 1000).unwrap();
    let t = evolve(&WaveState::gaussian(&g, 0.0, 2.0, sigma, hbar).unwrap(), &deformed, &g, 1000, false).unwrap();
    let (a, b) = (t.rows.first().unwrap(), t.rows.last().unwrap());
    let weighted = (b.weighted_norm - a.weighted_norm).abs() / a.weighted_norm;
    let plain = (b.l2_norm - a.l2_norm).abs() / a.l2_norm;
    report(
        9,
        "free spreading and weighted norm conservation",
        width_err < 1e-4 && weighted < 1e-8 && plain > 1e-6,
        format!(
            "n = 0 width rel err {width_err:.1e} (tolerance 1e-4); n = 2 weighted drift {weighted:.1e} \
             (tolerance 1e-8), plain L2 drift {plain:.1e} (must exceed 1e-6)"
        ),
        start.elapsed(),
        Some(Duration::from_secs(60)),
    );
}

/// Counts l with |l| < E and (E^2 - l^2)/2 a positive integer by scanning
/// every candidate l^2 = 0, 1, ..., E^2 - 1.
fn brute_force_folded(e: u64) -> u64 {
    (0..e * e).filter(|s| (e * e - s).is_multiple_of(2)).map(|s| if s == 0 { 1 } else { 2 }).sum()
}

#[test]
fn criterion_10_bohr_sommerfeld() {
    let start = Instant::now();
    let standard_ok = (1..=10u32).filter(|&e| standard_dim(e) == 2 * u64::from(e) - 1).count();
    let folded_ok = (1..=50u32).filter(|&e| folded_points(e).folded_dim == brute_force_folded(u64::from(e))).count();
    report(
        10,
        "integral leaves on the sphere",
        standard_ok == 10 && folded_ok == 50,
        format!("standard 2E - 1 for {standard_ok}/10 E; folded matches enumeration for {folded_ok}/50 E (tolerance {EXACT})"),
        start.elapsed(),
        Some(Duration::from_secs(1)),
    );
}

#[test]
fn criterion_11_documented_discrepancies() {
    let start = Instant::now();
    let r = verify_all(DEFAULT_SEED);
    let mut flagged: Vec<&str> = r.checks.iter().filter(|c| c.status == Status::FlaggedDiscrepancy).map(|c| c.id).collect();
    flagged.sort_unstable();
    let failed: Vec<&str> = r.checks.iter().filter(|c| c.status == Status::Fail).map(|c| c.id).collect();
    let both_values = r
        .checks
        .iter()
        .filter(|c| c.status == Status::FlaggedDiscrepancy)
        .all(|c| (c.details.contains("claimed") || c.details.contains("stated")) && (c.details.contains("computed") || c.details.contains("derived")));
    let ok = flagged == ["coupled-potential", "exponent-cross-check", "shifted-q1dq2"] && failed.is_empty() && both_values;
    report(
        11,
        "verify-paper flags exactly the three documented discrepancies",
        ok,
        format!("flagged {flagged:?}, failed {failed:?}, both values printed: {both_values}"),
        start.elapsed(),
        None,
    );
}
