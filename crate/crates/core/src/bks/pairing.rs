//! τ → 0 limits of BKS pairings, term by term.
//!
//! After μ = α√τ every contribution has the shape
//! (1/λ!) F^{(λ)} · τ^e · μ^K e^{iaμ²} times products of series factors, and
//! the pairing keeps −d/dτ at τ = 0. A term survives with a finite value iff
//! e = 1 and K is even; e > 1 (or e = 0) vanish, odd K integrate to zero and
//! 0 < e < 1 with even K diverges.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
use num_rational::Rational64;
use num_traits::{One, Zero};

use super::moment::oscillatory_moment_raw;
use crate::error::Error;
use crate::symcore::{Poly, Var};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SeriesScheme {
    /// Series factors μ^j τ^{j/2+1}, the bookkeeping used for the position
    /// deformation result.
    Stated,
    /// Factors from integrating βⁿ along the flow β + ατ exactly:
    /// μ^{j+2} τ^{j/2}.
    Flow,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TermStatus {
    Finite,
    Vanishes,
    ZeroBySymmetry,
    Diverges,
}

impl TermStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            TermStatus::Finite => "finite",
            TermStatus::Vanishes => "vanishes",
            TermStatus::ZeroBySymmetry => "zero-by-symmetry",
            TermStatus::Diverges => "diverges",
        }
    }
}

/// One factor of the second exponential's power series.
#[derive(Clone, Copy, Debug, PartialEq)]
struct SeriesFactor {
    mu_power: u32,
    tau_power: Rational64,
    coeff: Complex64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExpansionTerm {
    /// Derivative order of F.
    pub lambda: u32,
    /// Multiplicity of each series factor, indexed from j = 1.
    pub factors: Vec<u32>,
    pub mu_power: u32,
    pub tau_power: Rational64,
    pub status: TermStatus,
}

fn status(mu_power: u32, tau_power: Rational64) -> TermStatus {
    if mu_power % 2 == 1 {
        TermStatus::ZeroBySymmetry
    } else if tau_power == Rational64::one() {
        TermStatus::Finite
    } else if tau_power.is_zero() || tau_power > Rational64::one() {
        TermStatus::Vanishes
    } else {
        TermStatus::Diverges
    }
}

fn multisets(kinds: usize, max_total: u32) -> Vec<Vec<u32>> {
    let mut out = vec![vec![0; kinds]];
    for pos in 0..kinds {
        let mut next = Vec::new();
        for base in &out {
            let used: u32 = base.iter().sum();
            for c in 0..=(max_total - used) {
                let mut v = base.clone();
                v[pos] = c;
                next.push(v);
            }
        }
        out = next;
    }
    out
}

fn position_factors(n: u32, beta: f64, hbar: f64, scheme: SeriesScheme) -> Vec<SeriesFactor> {
    (1..=n)
        .map(|j| {
            // n! / ((n−j)! (j+1)!)
            let mut c = 1.0;
            for t in (n - j + 1)..=n {
                c *= f64::from(t);
            }
            for t in 2..=(j + 1) {
                c /= f64::from(t);
            }
            let coeff = Complex64::new(0.0, c * libm::pow(beta, f64::from(n - j)) / hbar);
            let half_j = Rational64::new(i64::from(j), 2);
            let (mu_power, tau_power) = match scheme {
                SeriesScheme::Stated => (j, half_j + Rational64::one()),
                SeriesScheme::Flow => (j + 2, half_j),
            };
            SeriesFactor { mu_power, tau_power, coeff }
        })
        .collect()
}

fn enumerate(factors: &[SeriesFactor], lambda_max: u32, order_max: u32) -> Vec<ExpansionTerm> {
    let mut out = Vec::new();
    for lambda in 0..=lambda_max {
        for mult in multisets(factors.len(), order_max) {
            let mut mu_power = lambda;
            let mut tau_power = Rational64::new(i64::from(lambda), 2);
            for (f, &c) in factors.iter().zip(&mult) {
                mu_power += c * f.mu_power;
                tau_power += f.tau_power * Rational64::from_integer(i64::from(c));
            }
            out.push(ExpansionTerm { lambda, factors: mult, mu_power, tau_power, status: status(mu_power, tau_power) });
        }
    }
    out
}

/// Expansion table for the position deformation f = βⁿ under `scheme`.
pub fn expansion_terms(n: u32, scheme: SeriesScheme, lambda_max: u32, order_max: u32) -> Vec<ExpansionTerm> {
    enumerate(&position_factors(n, 0.0, 1.0, scheme), lambda_max, order_max)
}

/// −d/dτ at τ = 0 of the finite terms, per derivative order of F (raw,
/// before normalisation).
fn finite_contributions(factors: &[SeriesFactor], a: f64, lambda_max: u32, order_max: u32) -> Result<Vec<Complex64>, Error> {
    let mut raw = vec![Complex64::zero(); lambda_max as usize + 1];
    for t in enumerate(factors, lambda_max, order_max) {
        if t.status != TermStatus::Finite {
            continue;
        }
        let mut c = Complex64::one();
        for (f, &k) in factors.iter().zip(&t.factors) {
            c *= f.coeff.powu(k) / factorial(k);
        }
        c /= factorial(t.lambda);
        raw[t.lambda as usize] -= c * oscillatory_moment_raw(t.mu_power, 2, a)?;
    }
    Ok(raw)
}

fn factorial(k: u32) -> f64 {
    (2..=k).map(f64::from).product()
}

/// √(2πℏ) e^{iπ/4}: the undeformed λ = 0 moment ∫ e^{iμ²/(2ℏ)} dμ.
pub fn prefactor(hbar: f64) -> Result<Complex64, Error> {
    oscillatory_moment_raw(0, 2, 1.0 / (2.0 * hbar))
}

/// Coefficient as it appears in iℏ dF/dt = c · F^{(λ)} once the prefactor is
/// absorbed.
fn normalise(raw: Complex64, hbar: f64, p: Complex64) -> Complex64 {
    Complex64::new(0.0, hbar) * raw / (-p)
}

fn check_hbar(hbar: f64) -> Result<(), Error> {
    if hbar.is_finite() && hbar > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(alloc::format!("hbar = {hbar} must be positive")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CoefficientSample {
    pub beta: f64,
    /// Raw −d/dτ value multiplying F″.
    pub raw: Complex64,
    /// After dividing out the prefactor.
    pub coefficient: Complex64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PairingResult {
    pub converges: bool,
    pub normalization: Complex64,
    pub hbar: f64,
    /// Deformation order; 0 for the undeformed pairing.
    pub n: u32,
    pub samples: Vec<CoefficientSample>,
    pub terms: Vec<ExpansionTerm>,
}

impl PairingResult {
    /// Normalised coefficient of F″ at β.
    pub fn effective_coefficient(&self, beta: f64) -> Result<Complex64, Error> {
        Ok(sample(self.n, beta, self.hbar, self.normalization)?.coefficient)
    }
}

fn phase_coefficient(n: u32, beta: f64) -> Result<f64, Error> {
    let w = if n == 0 { 1.0 } else { 1.0 + 2.0 * libm::pow(beta, f64::from(n)) };
    if w <= 0.0 || !w.is_finite() {
        return Err(Error::Singular { q: beta, value: w });
    }
    Ok(w)
}

fn sample(n: u32, beta: f64, hbar: f64, p: Complex64) -> Result<CoefficientSample, Error> {
    let a = phase_coefficient(n, beta)? / (2.0 * hbar);
    let raw = -oscillatory_moment_raw(2, 2, a)? / 2.0;
    Ok(CoefficientSample { beta, raw, coefficient: normalise(raw, hbar, p) })
}

/// Pairing for f = βⁿ: the F″ coefficient at each sample, which is
/// −(ℏ²/2)(1 + 2βⁿ)^{−3/2} after normalisation.
pub fn position_pairing(n: u32, beta_samples: &[f64], hbar: f64) -> Result<PairingResult, Error> {
    if n == 0 {
        return Err(Error::InvalidParameter("deformation order n must be at least 1".into()));
    }
    check_hbar(hbar)?;
    let p = prefactor(hbar)?;
    let samples = beta_samples.iter().map(|&b| sample(n, b, hbar, p)).collect::<Result<Vec<_>, _>>()?;
    let terms = expansion_terms(n, SeriesScheme::Stated, 4, 3);
    let converges = terms.iter().all(|t| t.status != TermStatus::Diverges);
    Ok(PairingResult { converges, normalization: p, hbar, n, samples, terms })
}

/// Normalised coefficients of F, F′, F″ under the flow scheme.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FlowCoefficients {
    pub beta: f64,
    pub f0: Complex64,
    pub f1: Complex64,
    pub f2: Complex64,
}

pub fn flow_scheme_coefficients(n: u32, beta: f64, hbar: f64) -> Result<FlowCoefficients, Error> {
    if n == 0 {
        return Err(Error::InvalidParameter("deformation order n must be at least 1".into()));
    }
    check_hbar(hbar)?;
    let a = phase_coefficient(n, beta)? / (2.0 * hbar);
    let factors = position_factors(n, beta, hbar, SeriesScheme::Flow);
    let raw = finite_contributions(&factors, a, 2, 2)?;
    let p = prefactor(hbar)?;
    Ok(FlowCoefficients {
        beta,
        f0: normalise(raw[0], hbar, p),
        f1: normalise(raw[1], hbar, p),
        f2: normalise(raw[2], hbar, p),
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct StandardCheck {
    pub pairing: PairingResult,
    pub potential: Poly,
    /// Normalised coefficient of ψ″.
    pub kinetic: Complex64,
    /// Normalised factor multiplying V ψ.
    pub potential_coefficient: Complex64,
    /// The λ = 1 moment ∫ μ e^{iμ²/(2ℏ)} dμ.
    pub odd_moment: Complex64,
}

/// The undeformed pairing for H = ½α² + V(β).
pub fn standard_schrodinger_check(v: &Poly, hbar: f64) -> Result<StandardCheck, Error> {
    check_hbar(hbar)?;
    let chart = v.chart();
    if (0..chart.n()).any(|i| v.depends_on(Var::Alpha(i))) {
        return Err(Error::InvalidParameter("the potential must not depend on momenta".into()));
    }
    let p = prefactor(hbar)?;
    let a = 1.0 / (2.0 * hbar);
    // e^{−(i/ℏ)Vτ}: one factor μ⁰ τ¹ with unit V.
    let factors = [SeriesFactor { mu_power: 0, tau_power: Rational64::one(), coeff: Complex64::new(0.0, -1.0 / hbar) }];
    let raw = finite_contributions(&factors, a, 2, 3)?;
    let terms = enumerate(&factors, 6, 3);
    let converges = terms.iter().all(|t| t.status != TermStatus::Diverges);
    let s = sample(0, 0.0, hbar, p)?;
    Ok(StandardCheck {
        pairing: PairingResult { converges, normalization: p, hbar, n: 0, samples: vec![s], terms },
        potential: v.clone(),
        kinetic: normalise(raw[2], hbar, p),
        potential_coefficient: normalise(raw[0], hbar, p),
        odd_moment: oscillatory_moment_raw(1, 2, a)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symcore::ChartSpec;
    use core::f64::consts::PI;

    #[test]
    fn standard_coefficients() {
        let chart = ChartSpec::cotangent(1);
        for hbar in [1.0, 0.5, 2.0] {
            let c = standard_schrodinger_check(&Poly::beta(&chart, 0), hbar).unwrap();
            assert!((c.kinetic - Complex64::new(-hbar * hbar / 2.0, 0.0)).norm() < 1e-12);
            assert!((c.potential_coefficient - Complex64::new(1.0, 0.0)).norm() < 1e-12);
            assert_eq!(c.odd_moment, Complex64::zero());
            let expected = Complex64::from_polar(libm::sqrt(2.0 * PI * hbar), PI / 4.0);
            assert!((c.pairing.normalization - expected).norm() < 1e-12);
            assert!(c.pairing.converges);
        }
    }

    #[test]
    fn stated_scheme_keeps_only_second_order() {
        for n in 1..=5 {
            let finite: Vec<_> = expansion_terms(n, SeriesScheme::Stated, 6, 3)
                .into_iter()
                .filter(|t| t.status == TermStatus::Finite)
                .collect();
            assert_eq!(finite.len(), 1);
            assert_eq!(finite[0].lambda, 2);
            assert!(finite[0].factors.iter().all(|&c| c == 0));
        }
    }

    #[test]
    fn position_profile() {
        let r = position_pairing(2, &[0.0, 1.0], 1.0).unwrap();
        assert!(r.converges);
        assert!((r.samples[0].coefficient - Complex64::new(-0.5, 0.0)).norm() < 1e-12);
        let ratio = r.samples[1].coefficient / r.samples[0].coefficient;
        assert!((ratio - Complex64::new(libm::pow(3.0, -1.5), 0.0)).norm() < 1e-12);
    }

    #[test]
    fn singular_samples_are_rejected() {
        assert!(matches!(position_pairing(1, &[-0.5], 1.0), Err(Error::Singular { .. })));
        assert!(position_pairing(3, &[-1.0], 1.0).is_err());
    }

    #[test]
    fn flow_scheme_adds_lower_order_terms() {
        let stated = position_pairing(1, &[0.3], 1.0).unwrap().samples[0].coefficient;
        let flow = flow_scheme_coefficients(1, 0.3, 1.0).unwrap();
        assert!((flow.f2 - stated).norm() < 1e-12);
        assert!(flow.f1.norm() > 1e-3);
        assert!(flow.f0.norm() > 1e-3);
    }
}
