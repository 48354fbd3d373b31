//! Real polarisations in adapted gauge and direct quantisability of
//! observables.
//!
//! A polarisation here is spanned by the Hamiltonian vector fields of one
//! flat coordinate y_i per canonical pair; flat sections are functions of the
//! y_i alone. An observable A is tested through the operators
//! L_i = quantise({A, y_i}) − Ω(X_A, X_{y_i}), restricted to flat sections.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::Error;
use crate::prequant::{quantise, ConnectionData, FormalOperator};
use crate::symcore::{hamiltonian_vf, poisson, same_chart, ChartRef, OneForm, Poly, Scalar, TwoForm, Var};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polarisation {
    chart: ChartRef,
    flat: Vec<Var>,
    adapted: bool,
}

fn conjugate(v: Var) -> Var {
    match v {
        Var::Alpha(i) => Var::Beta(i),
        Var::Beta(i) => Var::Alpha(i),
        other => other,
    }
}

impl Polarisation {
    /// One flat coordinate per pair. The adapted flag records whether Θ
    /// annihilates every polarisation direction.
    pub fn new(c: &ConnectionData, flat: Vec<Var>) -> Result<Self, Error> {
        let chart = c.chart().clone();
        if flat.len() != chart.n() {
            return Err(Error::ComponentCount { expected: chart.n(), found: flat.len() });
        }
        for (i, v) in flat.iter().enumerate() {
            if *v != Var::Alpha(i) && *v != Var::Beta(i) {
                return Err(Error::InvalidChart(alloc::format!("flat coordinate {v:?} does not belong to pair {i}")));
            }
        }
        let adapted = flat.iter().all(|&y| {
            let x = hamiltonian_vf(&Poly::var(&chart, y).expect("chart coordinate"));
            c.theta().contract(&x).expect("same chart").is_zero()
        });
        Ok(Self { chart, flat, adapted })
    }

    /// The vertical polarisation: flat sections are functions of the β_i.
    pub fn vertical(c: &ConnectionData) -> Self {
        let flat = (0..c.chart().n()).map(Var::Beta).collect();
        Self::new(c, flat).expect("β coordinates are valid")
    }

    pub fn chart(&self) -> &ChartRef {
        &self.chart
    }

    pub fn flat_coords(&self) -> &[Var] {
        &self.flat
    }

    /// Coordinates flat sections do not depend on.
    pub fn transverse_coords(&self) -> Vec<Var> {
        self.flat.iter().map(|&v| conjugate(v)).collect()
    }

    pub fn is_adapted(&self) -> bool {
        self.adapted
    }

    fn flat_slot(&self, component: usize) -> Option<usize> {
        let var = self.chart.coord_var(component);
        self.flat.iter().position(|&v| v == var)
    }

    /// True when `p` has no dependence on the transverse coordinates.
    pub fn is_flat_function(&self, p: &Poly) -> bool {
        self.transverse_coords().into_iter().all(|v| !p.depends_on(v))
    }

    /// Splits `p` into its transverse-free part and the rest.
    pub fn split_transverse(&self, p: &Poly) -> (Poly, Poly) {
        let slots: Vec<usize> = self.transverse_coords().into_iter().map(|v| self.chart.slot(v).expect("coordinate")).collect();
        let mut flat = Vec::new();
        let mut rest = Vec::new();
        for (e, c) in p.terms() {
            if slots.iter().any(|&s| e[s] > 0) {
                rest.push((e.clone(), c.clone()));
            } else {
                flat.push((e.clone(), c.clone()));
            }
        }
        (Poly::from_terms(&self.chart, flat), Poly::from_terms(&self.chart, rest))
    }
}

/// Op(F) = Σ_k c_k ∂^k F for flat F, k a multi-index over the flat coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlatSectionAction {
    chart: ChartRef,
    flat: Vec<Var>,
    coeffs: BTreeMap<Vec<u32>, Poly>,
}

impl FlatSectionAction {
    pub fn coeffs(&self) -> &BTreeMap<Vec<u32>, Poly> {
        &self.coeffs
    }

    pub fn coefficient(&self, k: &[u32]) -> Poly {
        self.coeffs.get(k).cloned().unwrap_or_else(|| Poly::zero(&self.chart))
    }

    /// c₀.
    pub fn multiplier(&self) -> Poly {
        self.coefficient(&vec![0; self.flat.len()])
    }

    pub fn flat_coords(&self) -> &[Var] {
        &self.flat
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

/// Restricts an operator to flat sections: derivatives along transverse
/// coordinates annihilate F, the rest keep their coefficients.
pub fn flat_action(op: &FormalOperator, p: &Polarisation) -> Result<FlatSectionAction, Error> {
    if !same_chart(op.chart(), &p.chart) {
        return Err(Error::ChartMismatch);
    }
    if !p.adapted {
        return Err(Error::NotAdapted("the potential does not annihilate the polarisation".into()));
    }
    let mut coeffs = BTreeMap::new();
    'terms: for (k, c) in op.terms() {
        let mut idx = vec![0; p.flat.len()];
        for (component, &order) in k.iter().enumerate() {
            if order == 0 {
                continue;
            }
            match p.flat_slot(component) {
                Some(slot) => idx[slot] = order,
                None => continue 'terms,
            }
        }
        coeffs.insert(idx, c.clone());
    }
    Ok(FlatSectionAction { chart: p.chart.clone(), flat: p.flat.clone(), coeffs })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Preserves,
    Fails,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Preserves => "preserves",
            Verdict::Fails => "fails",
        }
    }
}

/// Shape of the potential, Θ = (1 + f) θ.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CaseTag {
    /// f = 0.
    Standard,
    /// f depends only on the flat coordinates.
    PolarisedScaled,
    /// f depends on the transverse coordinates too.
    GeneralScaled,
    /// Θ is not a scaling of θ.
    Other,
}

impl CaseTag {
    pub fn as_str(self) -> &'static str {
        match self {
            CaseTag::Standard => "standard",
            CaseTag::PolarisedScaled => "polarised-scaled",
            CaseTag::GeneralScaled => "general-scaled",
            CaseTag::Other => "other",
        }
    }
}

/// f with Θ = (1 + f) θ, if Θ has that form.
pub fn scaling_function(c: &ConnectionData) -> Option<Poly> {
    let chart = c.chart();
    let theta = c.theta();
    let sign = Scalar::from_int(chart.orientation().sign());
    let mut f: Option<Poly> = None;
    for i in 0..chart.n() {
        if !theta.component(Var::Alpha(i)).ok()?.is_zero() {
            return None;
        }
        let factor = theta.component(Var::Beta(i)).ok()?.scale(&sign).div_var(Var::Alpha(i))?;
        let fi = &factor - &Poly::one(chart);
        match &f {
            Some(prev) if *prev != fi => return None,
            Some(_) => {}
            None => f = Some(fi),
        }
    }
    f
}

pub fn detect_case(c: &ConnectionData, p: &Polarisation) -> CaseTag {
    match scaling_function(c) {
        None => CaseTag::Other,
        Some(f) if f.is_zero() => CaseTag::Standard,
        Some(f) if p.is_flat_function(&f) => CaseTag::PolarisedScaled,
        Some(_) => CaseTag::GeneralScaled,
    }
}

/// One offending coefficient: direction i, derivative multi-index k, c_k.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidualTerm {
    pub direction: usize,
    pub index: Vec<u32>,
    pub coeff: Poly,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PreservationReport {
    pub observable: Poly,
    /// Verdict under the coefficient rule: each L_i acts on flat sections as
    /// multiplication by a flat function.
    pub verdict: Verdict,
    /// Transverse-dependent part of c₀ and every derivative coefficient.
    pub residual: Vec<ResidualTerm>,
    pub case: CaseTag,
    /// Verdict when L_i must annihilate flat sections outright.
    pub strict_verdict: Verdict,
    /// Every nonzero coefficient of every L_i.
    pub strict_residual: Vec<ResidualTerm>,
}

/// The operators L_i = quantise({A, y_i}) − Ω(X_A, X_{y_i}).
pub fn preservation_operators(a: &Poly, c: &ConnectionData, p: &Polarisation) -> Result<Vec<FormalOperator>, Error> {
    if !same_chart(a.chart(), c.chart()) || !same_chart(a.chart(), &p.chart) {
        return Err(Error::ChartMismatch);
    }
    let xa = hamiltonian_vf(a);
    let mut out = Vec::with_capacity(p.flat.len());
    for &y in &p.flat {
        let yp = Poly::var(&p.chart, y)?;
        let curvature = c.omega_curv().eval(&xa, &hamiltonian_vf(&yp))?;
        let q = quantise(&poisson(a, &yp)?, c)?;
        out.push(q.sub(&FormalOperator::multiplication(&curvature))?);
    }
    Ok(out)
}

fn residual_terms(actions: &[FlatSectionAction], p: &Polarisation) -> (Vec<ResidualTerm>, Vec<ResidualTerm>) {
    let mut rule = Vec::new();
    let mut strict = Vec::new();
    for (direction, action) in actions.iter().enumerate() {
        for (k, coeff) in &action.coeffs {
            strict.push(ResidualTerm { direction, index: k.clone(), coeff: coeff.clone() });
            if k.iter().all(|&x| x == 0) {
                let (_, transverse) = p.split_transverse(coeff);
                if !transverse.is_zero() {
                    rule.push(ResidualTerm { direction, index: k.clone(), coeff: transverse });
                }
            } else {
                rule.push(ResidualTerm { direction, index: k.clone(), coeff: coeff.clone() });
            }
        }
    }
    (rule, strict)
}

fn verdict_of(residual: &[ResidualTerm]) -> Verdict {
    if residual.is_empty() {
        Verdict::Preserves
    } else {
        Verdict::Fails
    }
}

pub fn preserves(a: &Poly, c: &ConnectionData, p: &Polarisation) -> Result<PreservationReport, Error> {
    let ops = preservation_operators(a, c, p)?;
    let actions = ops.iter().map(|op| flat_action(op, p)).collect::<Result<Vec<_>, _>>()?;
    let (residual, strict_residual) = residual_terms(&actions, p);
    Ok(PreservationReport {
        observable: a.clone(),
        verdict: verdict_of(&residual),
        residual,
        case: detect_case(c, p),
        strict_verdict: verdict_of(&strict_residual),
        strict_residual,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridEntry {
    pub m: u32,
    pub n: u32,
    pub report: PreservationReport,
}

/// Verdicts for A = α₁^m β₁^n, 0 ≤ m ≤ m_max, 0 ≤ n ≤ n_max, under
/// Θ = (1 + f) θ in the vertical polarisation. The deformation must match
/// the requested case.
pub fn classify_monomials(m_max: u32, n_max: u32, deformation: &Poly, case: CaseTag) -> Result<Vec<GridEntry>, Error> {
    let c = ConnectionData::scaled(deformation);
    let p = Polarisation::vertical(&c);
    let found = detect_case(&c, &p);
    if found != case {
        return Err(Error::InconsistentDeformation(alloc::format!(
            "deformation {deformation} is {} but {} was requested",
            found.as_str(),
            case.as_str()
        )));
    }
    let chart = c.chart();
    let (alpha, beta) = (Poly::alpha(chart, 0), Poly::beta(chart, 0));
    let mut out = Vec::new();
    for m in 0..=m_max {
        for n in 0..=n_max {
            let a = &alpha.pow(m) * &beta.pow(n);
            out.push(GridEntry { m, n, report: preserves(&a, &c, &p)? });
        }
    }
    Ok(out)
}

/// Flat actions of −iℏ∇_{X_{A,y_i}} + dγ(X_A, X_{y_i}), the form the
/// preservation operators take when dγ = ω − Ω.
pub fn cohomologous_actions(
    a: &Poly,
    c: &ConnectionData,
    p: &Polarisation,
    gamma: &OneForm,
) -> Result<Vec<FlatSectionAction>, Error> {
    if !same_chart(gamma.chart(), c.chart()) {
        return Err(Error::ChartMismatch);
    }
    let expected: TwoForm = c.base_omega() - c.omega_curv();
    if gamma.d() != expected {
        return Err(Error::InconsistentDeformation("dγ differs from ω − Ω".into()));
    }
    let chart = c.chart();
    let xa = hamiltonian_vf(a);
    let mih = Poly::hbar(chart).scale(&-Scalar::i());
    let dgamma = gamma.d();
    let mut out = Vec::new();
    for &y in &p.flat {
        let yp = Poly::var(chart, y)?;
        let x = hamiltonian_vf(&poisson(a, &yp)?);
        let shift = &dgamma.eval(&xa, &hamiltonian_vf(&yp))? - &c.theta().contract(&x)?;
        let op = FormalOperator::from_vector_field(&x).left_mul(&mih).add(&FormalOperator::multiplication(&shift))?;
        out.push(flat_action(&op, p)?);
    }
    Ok(out)
}

/// The 1-degree-of-freedom general-scaled condition written as an operator on
/// flat F: 𝔭_α((1 + f + f_α)α F + iℏF′) + f 𝔭 F, with 𝔭 = {A, β}.
/// Returns (c₀, c₁).
pub fn general_scaled_display(a: &Poly, f: &Poly) -> Result<(Poly, Poly), Error> {
    let chart = a.chart();
    if chart.n() != 1 {
        return Err(Error::InvalidParameter("the displayed condition is compared in one degree of freedom".into()));
    }
    if !same_chart(chart, f.chart()) {
        return Err(Error::ChartMismatch);
    }
    let alpha = Poly::alpha(chart, 0);
    let pb = poisson(a, &Poly::beta(chart, 0))?;
    let p_alpha = pb.partial(Var::Alpha(0))?;
    let bracket = &(&Poly::one(chart) + f) + &f.partial(Var::Alpha(0))?;
    let c0 = &(&(&p_alpha * &bracket) * &alpha) + &(f * &pb);
    let c1 = (&p_alpha * &Poly::hbar(chart)).scale(&Scalar::i());
    Ok((c0, c1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symcore::ChartSpec;

    #[test]
    fn flat_action_examples() {
        let chart = ChartSpec::labelled(1, "a", "b");
        let c = ConnectionData::standard(&chart);
        let p = Polarisation::vertical(&c);
        assert!(p.is_adapted());
        let a = Poly::alpha(&chart, 0);
        let b = Poly::beta(&chart, 0);
        let pa = flat_action(&quantise(&a, &c).unwrap(), &p).unwrap();
        assert_eq!(pa.coefficient(&[1]), Poly::hbar(&chart).scale(&-Scalar::i()));
        assert!(pa.multiplier().is_zero());
        let mb = flat_action(&FormalOperator::multiplication(&b), &p).unwrap();
        assert_eq!(mb.multiplier(), b);
        let kinetic = flat_action(&quantise(&a.pow(2).scale(&Scalar::ratio(1, 2)), &c).unwrap(), &p).unwrap();
        assert!(kinetic.multiplier().depends_on(Var::Alpha(0)));
    }

    #[test]
    fn non_adapted_gauge_is_rejected() {
        let chart = ChartSpec::cotangent(1);
        let c = ConnectionData::standard(&chart);
        let p = Polarisation::new(&c, vec![Var::Alpha(0)]).unwrap();
        assert!(!p.is_adapted());
        assert!(matches!(flat_action(&FormalOperator::identity(&chart), &p), Err(Error::NotAdapted(_))));
    }

    #[test]
    fn scaling_detection() {
        let chart = ChartSpec::cotangent(2);
        let q1 = Poly::beta(&chart, 0);
        let p1 = Poly::alpha(&chart, 0);
        let c = ConnectionData::scaled(&(&q1 * &q1));
        let p = Polarisation::vertical(&c);
        assert_eq!(scaling_function(&c), Some(&q1 * &q1));
        assert_eq!(detect_case(&c, &p), CaseTag::PolarisedScaled);
        let g = ConnectionData::scaled(&(&p1 * &q1));
        assert_eq!(detect_case(&g, &Polarisation::vertical(&g)), CaseTag::GeneralScaled);
        assert_eq!(detect_case(&ConnectionData::folded(2), &p), CaseTag::Other);
    }

    #[test]
    fn squared_momentum_fails_under_polarised_scaling() {
        let chart = ChartSpec::cotangent(1);
        let c = ConnectionData::scaled(&Poly::beta(&chart, 0));
        let p = Polarisation::vertical(&c);
        let r = preserves(&Poly::alpha(&chart, 0).pow(2), &c, &p).unwrap();
        assert_eq!(r.verdict, Verdict::Fails);
        assert_eq!(r.case, CaseTag::PolarisedScaled);
    }

    #[test]
    fn linear_momentum_rule_versus_strict() {
        // Θ = (1+β²)αdβ: L = −β², flat but not zero.
        let chart = ChartSpec::cotangent(1);
        let b = Poly::beta(&chart, 0);
        let c = ConnectionData::scaled(&(&b * &b));
        let p = Polarisation::vertical(&c);
        let r = preserves(&Poly::alpha(&chart, 0), &c, &p).unwrap();
        assert_eq!(r.verdict, Verdict::Preserves);
        assert_eq!(r.strict_verdict, Verdict::Fails);
        assert_eq!(r.strict_residual.len(), 1);
        assert_eq!(r.strict_residual[0].coeff, -&(&b * &b));
    }
}
