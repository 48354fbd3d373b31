//! Single canonical charts on a 2n-dimensional phase space.

use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::error::Error;

/// Sign convention for the chart symplectic form.
///
/// `Standard` means ω = Σ dα_i ∧ dβ_i, `Reversed` means ω = Σ dβ_i ∧ dα_i.
/// Hamiltonian vector fields and brackets pick up the matching sign so that
/// {A,B} = ω(X_A, X_B) holds in both.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum Orientation {
    #[default]
    Standard,
    Reversed,
}

impl Orientation {
    pub fn sign(self) -> i64 {
        match self {
            Orientation::Standard => 1,
            Orientation::Reversed => -1,
        }
    }
}

/// A variable a [`Poly`](super::Poly) may depend on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    Hbar,
    /// A formal constant parameter (constant under d and the bracket).
    Param(usize),
    Alpha(usize),
    Beta(usize),
}

impl Var {
    pub fn is_coordinate(self) -> bool {
        matches!(self, Var::Alpha(_) | Var::Beta(_))
    }
}

/// Coordinate labels paired as (α_i, β_i), plus optional formal parameters.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ChartSpec {
    pairs: Vec<(String, String)>,
    params: Vec<String>,
    orientation: Orientation,
}

pub type ChartRef = Arc<ChartSpec>;

pub(crate) const RESERVED: [&str; 2] = ["hbar", "i"];

impl ChartSpec {
    pub fn new<S: Into<String>>(pairs: Vec<(S, S)>) -> Result<ChartRef, Error> {
        Self::with_params(pairs, Vec::<String>::new(), Orientation::Standard)
    }

    pub fn with_params<S: Into<String>, P: Into<String>>(
        pairs: Vec<(S, S)>,
        params: Vec<P>,
        orientation: Orientation,
    ) -> Result<ChartRef, Error> {
        let pairs: Vec<(String, String)> = pairs.into_iter().map(|(a, b)| (a.into(), b.into())).collect();
        let params: Vec<String> = params.into_iter().map(Into::into).collect();
        if pairs.is_empty() {
            return Err(Error::InvalidChart("a chart needs at least one canonical pair".into()));
        }
        let mut seen: Vec<&str> = Vec::new();
        for label in pairs.iter().flat_map(|(a, b)| [a.as_str(), b.as_str()]).chain(params.iter().map(String::as_str)) {
            if label.is_empty() || !is_identifier(label) {
                return Err(Error::InvalidChart(alloc::format!("bad label `{label}`")));
            }
            if RESERVED.contains(&label) || (label.len() > 1 && label.starts_with('d') && seen_is_form_basis(label, &pairs)) {
                return Err(Error::InvalidChart(alloc::format!("label `{label}` is reserved")));
            }
            if seen.contains(&label) {
                return Err(Error::InvalidChart(alloc::format!("duplicate label `{label}`")));
            }
            seen.push(label);
        }
        Ok(Arc::new(ChartSpec { pairs, params, orientation }))
    }

    /// T*ℝⁿ with labels `p1..pn` (momenta, α) and `q1..qn` (positions, β).
    pub fn cotangent(n: usize) -> ChartRef {
        Self::labelled(n, "p", "q")
    }

    /// `n` pairs named `{alpha}{i}`, `{beta}{i}` for i = 1..n.
    pub fn labelled(n: usize, alpha: &str, beta: &str) -> ChartRef {
        let pairs = (1..=n).map(|i| (alloc::format!("{alpha}{i}"), alloc::format!("{beta}{i}"))).collect();
        Self::new(pairs).expect("generated labels are valid")
    }

    pub fn with_orientation(&self, orientation: Orientation) -> ChartRef {
        Arc::new(ChartSpec { orientation, ..self.clone() })
    }

    /// Degrees of freedom.
    pub fn n(&self) -> usize {
        self.pairs.len()
    }

    pub fn pairs(&self) -> &[(String, String)] {
        &self.pairs
    }

    pub fn params(&self) -> &[String] {
        &self.params
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    /// Length of a monomial exponent vector: ℏ, parameters, α's, β's.
    pub fn slots(&self) -> usize {
        1 + self.params.len() + 2 * self.n()
    }

    pub fn slot(&self, var: Var) -> Result<usize, Error> {
        let n = self.n();
        let p = self.params.len();
        match var {
            Var::Hbar => Ok(0),
            Var::Param(k) if k < p => Ok(1 + k),
            Var::Alpha(i) if i < n => Ok(1 + p + i),
            Var::Beta(i) if i < n => Ok(1 + p + n + i),
            _ => Err(Error::UnknownCoordinate(alloc::format!("{var:?}"))),
        }
    }

    pub fn var_at_slot(&self, slot: usize) -> Var {
        let n = self.n();
        let p = self.params.len();
        match slot {
            0 => Var::Hbar,
            s if s <= p => Var::Param(s - 1),
            s if s <= p + n => Var::Alpha(s - 1 - p),
            s => Var::Beta(s - 1 - p - n),
        }
    }

    /// Index of a coordinate in form/vector-field component order (α's then β's).
    pub fn coord_index(&self, var: Var) -> Result<usize, Error> {
        let n = self.n();
        match var {
            Var::Alpha(i) if i < n => Ok(i),
            Var::Beta(i) if i < n => Ok(n + i),
            _ => Err(Error::UnknownCoordinate(alloc::format!("{var:?} is not a chart coordinate"))),
        }
    }

    pub fn coord_var(&self, index: usize) -> Var {
        let n = self.n();
        if index < n {
            Var::Alpha(index)
        } else {
            Var::Beta(index - n)
        }
    }

    /// All 2n coordinates in component order.
    pub fn coords(&self) -> impl Iterator<Item = Var> + '_ {
        (0..2 * self.n()).map(|k| self.coord_var(k))
    }

    pub fn label(&self, var: Var) -> String {
        match var {
            Var::Hbar => "hbar".to_string(),
            Var::Param(k) => self.params[k].clone(),
            Var::Alpha(i) => self.pairs[i].0.clone(),
            Var::Beta(i) => self.pairs[i].1.clone(),
        }
    }

    pub fn lookup(&self, label: &str) -> Option<Var> {
        if label == "hbar" {
            return Some(Var::Hbar);
        }
        if let Some(k) = self.params.iter().position(|p| p == label) {
            return Some(Var::Param(k));
        }
        for (i, (a, b)) in self.pairs.iter().enumerate() {
            if a == label {
                return Some(Var::Alpha(i));
            }
            if b == label {
                return Some(Var::Beta(i));
            }
        }
        None
    }
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

// `dq1` would be ambiguous with the covector basis name of `q1`.
fn seen_is_form_basis(label: &str, pairs: &[(String, String)]) -> bool {
    let rest = &label[1..];
    pairs.iter().any(|(a, b)| a == rest || b == rest)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slots_and_lookup() {
        let chart = ChartSpec::cotangent(2);
        assert_eq!(chart.slots(), 5);
        assert_eq!(chart.lookup("q2"), Some(Var::Beta(1)));
        assert_eq!(chart.slot(Var::Beta(1)).unwrap(), 4);
        assert_eq!(chart.var_at_slot(2), Var::Alpha(1));
        assert!(chart.slot(Var::Alpha(2)).is_err());
    }

    #[test]
    fn rejects_bad_charts() {
        assert!(ChartSpec::new(Vec::<(&str, &str)>::new()).is_err());
        assert!(ChartSpec::new(alloc::vec![("p", "p")]).is_err());
        assert!(ChartSpec::new(alloc::vec![("hbar", "q")]).is_err());
        assert!(ChartSpec::new(alloc::vec![("q", "dq")]).is_err());
        assert!(ChartSpec::new(alloc::vec![("1p", "q")]).is_err());
    }
}
