//! JSON problem files: a chart, a connection potential, named observables,
//! and optionally a pullback map and a polarisation.
//!
//! ```json
//! {
//!   "chart": { "pairs": [["p1", "q1"]], "orientation": "standard", "params": [] },
//!   "theta": [ { "coeff": "(1/2)*p1^2", "basis": "dq1" } ],
//!   "observables": { "H": "(1/2)*p1^2" },
//!   "polarisation": ["q1"]
//! }
//! ```
//!
//! A missing `theta` means the tautological potential Σ α_i dβ_i. With a
//! `pullback`, the chart above is the source, `theta` must be absent, the
//! connection is the one induced from the target, and observables are
//! written in target coordinates. `polarisation` lists the coordinate each
//! flat section depends on, one per pair (default: every β).

use std::collections::BTreeMap;
use std::path::Path;

use pseudoquant_core::polarisation::Polarisation;
use pseudoquant_core::prequant::{ConnectionData, PullbackSetup};
use pseudoquant_core::symcore::{ChartRef, ChartSpec, OneForm, Orientation, Poly, SmoothMap, Var};
use serde::{Deserialize, Serialize};

use crate::parse::{parse_poly, ParseError};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OrientationDecl {
    #[default]
    Standard,
    Reversed,
}

impl OrientationDecl {
    fn is_standard(&self) -> bool {
        *self == OrientationDecl::Standard
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChartDecl {
    pub pairs: Vec<(String, String)>,
    #[serde(default, skip_serializing_if = "OrientationDecl::is_standard")]
    pub orientation: OrientationDecl,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub params: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThetaTerm {
    pub coeff: String,
    /// `dq1` or plain `q1`.
    pub basis: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PullbackDecl {
    pub target_chart: ChartDecl,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target_theta: Option<Vec<ThetaTerm>>,
    /// Target coordinate label → expression in source coordinates.
    pub components: BTreeMap<String, String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub chart: ChartDecl,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<Vec<ThetaTerm>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub observables: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pullback: Option<PullbackDecl>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub polarisation: Option<Vec<String>>,
}

#[derive(Debug, thiserror::Error)]
pub enum ProblemError {
    #[error("cannot read problem file: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed problem file: {0}")]
    Json(#[from] serde_json::Error),
    #[error("in `{field}`: {error}")]
    Expression { field: String, error: ParseError },
    #[error("{0}")]
    Core(#[from] pseudoquant_core::Error),
    #[error("{0}")]
    Invalid(String),
}

#[derive(Clone, Debug)]
pub struct Problem {
    pub chart: ChartRef,
    pub connection: ConnectionData,
    pub observables: BTreeMap<String, Poly>,
    pub pullback: Option<PullbackSetup>,
    pub polarisation: Option<Polarisation>,
}

fn build_chart(d: &ChartDecl) -> Result<ChartRef, ProblemError> {
    let orientation = match d.orientation {
        OrientationDecl::Standard => Orientation::Standard,
        OrientationDecl::Reversed => Orientation::Reversed,
    };
    Ok(ChartSpec::with_params(d.pairs.clone(), d.params.clone(), orientation)?)
}

fn chart_decl(chart: &ChartRef) -> ChartDecl {
    ChartDecl {
        pairs: chart.pairs().to_vec(),
        orientation: match chart.orientation() {
            Orientation::Standard => OrientationDecl::Standard,
            Orientation::Reversed => OrientationDecl::Reversed,
        },
        params: chart.params().to_vec(),
    }
}

fn expr(chart: &ChartRef, field: String, src: &str) -> Result<Poly, ProblemError> {
    parse_poly(chart, src).map_err(|error| ProblemError::Expression { field, error })
}

fn coordinate(chart: &ChartRef, label: &str, field: &str) -> Result<Var, ProblemError> {
    match chart.lookup(label) {
        Some(v) if v.is_coordinate() => Ok(v),
        _ => Err(ProblemError::Invalid(format!("in `{field}`: `{label}` is not a chart coordinate"))),
    }
}

fn build_theta(chart: &ChartRef, terms: &Option<Vec<ThetaTerm>>, field: &str) -> Result<OneForm, ProblemError> {
    let Some(terms) = terms else {
        return Ok(OneForm::tautological(chart));
    };
    let mut theta = OneForm::zero(chart);
    for (k, t) in terms.iter().enumerate() {
        let label = t.basis.strip_prefix('d').filter(|rest| chart.lookup(rest).is_some()).unwrap_or(&t.basis);
        let var = coordinate(chart, label, &format!("{field}[{k}].basis"))?;
        let coeff = expr(chart, format!("{field}[{k}].coeff"), &t.coeff)?;
        theta = &theta + &OneForm::basis(var, coeff)?;
    }
    Ok(theta)
}

fn theta_decl(theta: &OneForm) -> Option<Vec<ThetaTerm>> {
    let chart = theta.chart();
    if *theta == OneForm::tautological(chart) {
        return None;
    }
    let terms = chart
        .coords()
        .zip(theta.components())
        .filter(|(_, c)| !c.is_zero())
        .map(|(v, c)| ThetaTerm { coeff: c.to_string(), basis: format!("d{}", chart.label(v)) })
        .collect();
    Some(terms)
}

impl Problem {
    /// The standard connection on `chart` with no observables.
    pub fn standard(chart: &ChartRef) -> Self {
        Problem {
            chart: chart.clone(),
            connection: ConnectionData::standard(chart),
            observables: BTreeMap::new(),
            pullback: None,
            polarisation: None,
        }
    }

    pub fn from_json(text: &str) -> Result<Self, ProblemError> {
        Self::from_file(&serde_json::from_str(text)?)
    }

    pub fn load(path: &Path) -> Result<Self, ProblemError> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn from_file(f: &ProblemFile) -> Result<Self, ProblemError> {
        let chart = build_chart(&f.chart)?;
        let (connection, pullback) = match &f.pullback {
            None => (ConnectionData::new(build_theta(&chart, &f.theta, "theta")?), None),
            Some(pb) => {
                if f.theta.is_some() {
                    return Err(ProblemError::Invalid("`theta` and `pullback` cannot both be given".into()));
                }
                let target = build_chart(&pb.target_chart)?;
                let target_conn = ConnectionData::new(build_theta(&target, &pb.target_theta, "pullback.target_theta")?);
                let mut comps = Vec::with_capacity(2 * target.n());
                for v in target.coords() {
                    let label = target.label(v);
                    let src = pb.components.get(&label).ok_or_else(|| {
                        ProblemError::Invalid(format!("in `pullback.components`: no image for `{label}`"))
                    })?;
                    comps.push(expr(&chart, format!("pullback.components.{label}"), src)?);
                }
                if let Some(extra) = pb.components.keys().find(|k| target.lookup(k).is_none_or(|v| !v.is_coordinate())) {
                    return Err(ProblemError::Invalid(format!(
                        "in `pullback.components`: `{extra}` is not a target coordinate"
                    )));
                }
                let setup = PullbackSetup::new(SmoothMap::new(&chart, &target, comps)?, target_conn)?;
                (setup.induced().clone(), Some(setup))
            }
        };
        let obs_chart = pullback.as_ref().map_or(chart.clone(), |s| s.map().target().clone());
        let mut observables = BTreeMap::new();
        for (name, src) in &f.observables {
            observables.insert(name.clone(), expr(&obs_chart, format!("observables.{name}"), src)?);
        }
        let polarisation = match &f.polarisation {
            None => None,
            Some(labels) => {
                let flat = labels
                    .iter()
                    .enumerate()
                    .map(|(k, l)| coordinate(&chart, l, &format!("polarisation[{k}]")))
                    .collect::<Result<Vec<_>, _>>()?;
                Some(Polarisation::new(&connection, flat)?)
            }
        };
        Ok(Problem { chart, connection, observables, pullback, polarisation })
    }

    /// Canonical file form: normalised expressions, default fields omitted.
    pub fn to_file(&self) -> ProblemFile {
        let observables = self.observables.iter().map(|(k, v)| (k.clone(), v.to_string())).collect();
        let polarisation = self
            .polarisation
            .as_ref()
            .map(|p| p.flat_coords().iter().map(|&v| self.chart.label(v)).collect());
        match &self.pullback {
            None => ProblemFile {
                chart: chart_decl(&self.chart),
                theta: theta_decl(self.connection.theta()),
                observables,
                pullback: None,
                polarisation,
            },
            Some(s) => {
                let target = s.map().target();
                let components = target
                    .coords()
                    .zip(s.map().components())
                    .map(|(v, c)| (target.label(v), c.to_string()))
                    .collect();
                ProblemFile {
                    chart: chart_decl(&self.chart),
                    theta: None,
                    observables,
                    pullback: Some(PullbackDecl {
                        target_chart: chart_decl(target),
                        target_theta: theta_decl(s.target_connection().theta()),
                        components,
                    }),
                    polarisation,
                }
            }
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("problem files serialise")
    }

    /// Chart observables are written on: the target chart for pullbacks.
    pub fn observable_chart(&self) -> &ChartRef {
        self.pullback.as_ref().map_or(&self.chart, |s| s.map().target())
    }

    /// A named observable, or else an expression on the observable chart.
    pub fn observable(&self, text: &str, field: &str) -> Result<Poly, ProblemError> {
        match self.observables.get(text) {
            Some(p) => Ok(p.clone()),
            None => expr(self.observable_chart(), field.to_string(), text),
        }
    }

    /// The problem's polarisation, or the vertical one.
    pub fn polarisation_or_vertical(&self) -> Polarisation {
        self.polarisation.clone().unwrap_or_else(|| Polarisation::vertical(&self.connection))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const FOLDED: &str = r#"{
        "chart": { "pairs": [["p1", "q1"], ["p2", "q2"]] },
        "theta": [
            { "coeff": "(1/2)*p1^2", "basis": "dq1" },
            { "coeff": "p2", "basis": "q2" }
        ],
        "observables": { "H": "(1/2)*p1^2 + 0.5*p2^2", "x": "q1" }
    }"#;

    #[test]
    fn folded_problem_matches_catalog() {
        let p = Problem::from_json(FOLDED).unwrap();
        assert_eq!(p.connection, ConnectionData::folded(2));
        assert_eq!(p.observables["H"].to_string(), "(1/2)*p1^2 + (1/2)*p2^2");
    }

    #[test]
    fn canonical_form_round_trips() {
        let p = Problem::from_json(FOLDED).unwrap();
        let again = Problem::from_json(&p.to_json()).unwrap();
        assert_eq!(again.connection, p.connection);
        assert_eq!(again.observables, p.observables);
        assert_eq!(again.to_file(), p.to_file());
    }

    #[test]
    fn expression_errors_name_the_field() {
        let bad = FOLDED.replace("\"q1\" }", "\"q1 +\" }");
        let err = Problem::from_json(&bad).unwrap_err().to_string();
        assert!(err.starts_with("in `observables.x`: unexpected end of input at column 5"), "{err}");
    }

    #[test]
    fn pullback_problem() {
        let text = r#"{
            "chart": { "pairs": [["l", "phi_l"]] },
            "pullback": {
                "target_chart": { "pairs": [["z", "phi_z"]] },
                "components": { "z": "2*l", "phi_z": "phi_l" }
            },
            "observables": { "z": "z" }
        }"#;
        let p = Problem::from_json(text).unwrap();
        assert_eq!(p.connection.theta().to_string(), "2*l*dphi_l");
        assert_eq!(p.observable_chart().label(Var::Alpha(0)), "z");
        let again = Problem::from_json(&p.to_json()).unwrap();
        assert_eq!(again.to_file(), p.to_file());
        assert!(Problem::from_json(&text.replace("\"phi_z\": \"phi_l\"", "\"w\": \"phi_l\"")).is_err());
    }

    #[test]
    fn unknown_fields_are_rejected() {
        assert!(Problem::from_json(r#"{ "chart": { "pairs": [["p1","q1"]] }, "thetta": [] }"#).is_err());
    }
}
