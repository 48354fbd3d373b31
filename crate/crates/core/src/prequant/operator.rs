//! Finite-order differential operators with polynomial coefficients.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::Error;
use crate::symcore::{same_chart, ChartRef, Poly, Scalar, Var, VectorField};

/// Derivative orders over the 2n chart coordinates (α's then β's).
pub type MultiIndex = Vec<u32>;

/// Σ_k c_k ∂^k acting on sections of the trivialised line bundle.
///
/// Coefficients are applied after differentiation (normal ordering), so
/// `(c ∂)(ψ) = c · ∂ψ`. Zero coefficients are never stored.
#[derive(Clone)]
pub struct FormalOperator {
    chart: ChartRef,
    terms: BTreeMap<MultiIndex, Poly>,
}

impl PartialEq for FormalOperator {
    fn eq(&self, other: &Self) -> bool {
        same_chart(&self.chart, &other.chart) && self.terms == other.terms
    }
}

impl Eq for FormalOperator {}

fn binomial(n: u32, k: u32) -> i64 {
    let mut r: i64 = 1;
    for t in 0..k {
        r = r * (n - t) as i64 / (t + 1) as i64;
    }
    r
}

/// All multi-indices j with j ≤ k componentwise.
fn sub_indices(k: &[u32]) -> Vec<MultiIndex> {
    let mut out = vec![vec![0; k.len()]];
    for (pos, &kmax) in k.iter().enumerate() {
        let mut next = Vec::with_capacity(out.len() * (kmax as usize + 1));
        for base in &out {
            for v in 0..=kmax {
                let mut j = base.clone();
                j[pos] = v;
                next.push(j);
            }
        }
        out = next;
    }
    out
}

impl FormalOperator {
    pub fn zero(chart: &ChartRef) -> Self {
        Self { chart: chart.clone(), terms: BTreeMap::new() }
    }

    /// Multiplication by `f`.
    pub fn multiplication(f: &Poly) -> Self {
        let mut op = Self::zero(f.chart());
        op.add_term(vec![0; 2 * f.chart().n()], f);
        op
    }

    pub fn identity(chart: &ChartRef) -> Self {
        Self::multiplication(&Poly::one(chart))
    }

    /// The first-order operator ψ ↦ X(ψ).
    pub fn from_vector_field(x: &VectorField) -> Self {
        let chart = x.chart();
        let mut op = Self::zero(chart);
        for (k, c) in x.components().iter().enumerate() {
            let mut idx = vec![0; 2 * chart.n()];
            idx[k] = 1;
            op.add_term(idx, c);
        }
        op
    }

    pub fn from_terms(chart: &ChartRef, terms: impl IntoIterator<Item = (MultiIndex, Poly)>) -> Result<Self, Error> {
        let mut op = Self::zero(chart);
        for (k, c) in terms {
            if k.len() != 2 * chart.n() {
                return Err(Error::ComponentCount { expected: 2 * chart.n(), found: k.len() });
            }
            if !same_chart(c.chart(), chart) {
                return Err(Error::ChartMismatch);
            }
            op.add_term(k, &c);
        }
        Ok(op)
    }

    fn add_term(&mut self, k: MultiIndex, c: &Poly) {
        if c.is_zero() {
            return;
        }
        let sum = match self.terms.get(&k) {
            Some(v) => v + c,
            None => c.clone(),
        };
        if sum.is_zero() {
            self.terms.remove(&k);
        } else {
            self.terms.insert(k, sum);
        }
    }

    pub fn chart(&self) -> &ChartRef {
        &self.chart
    }

    pub fn terms(&self) -> &BTreeMap<MultiIndex, Poly> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Highest total derivative order.
    pub fn order(&self) -> u32 {
        self.terms.keys().map(|k| k.iter().sum()).max().unwrap_or(0)
    }

    pub fn coefficient(&self, k: &[u32]) -> Poly {
        self.terms.get(k).cloned().unwrap_or_else(|| Poly::zero(&self.chart))
    }

    /// The function `f` when the operator is multiplication by `f`.
    pub fn as_multiplication(&self) -> Option<Poly> {
        match self.terms.len() {
            0 => Some(Poly::zero(&self.chart)),
            1 => {
                let (k, c) = self.terms.iter().next().unwrap();
                k.iter().all(|&x| x == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, Error> {
        if !same_chart(&self.chart, &other.chart) {
            return Err(Error::ChartMismatch);
        }
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(k.clone(), c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, Error> {
        self.add(&other.scale(&Scalar::from_int(-1)))
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        let mut out = Self::zero(&self.chart);
        for (k, v) in &self.terms {
            out.add_term(k.clone(), &v.scale(c));
        }
        out
    }

    /// Left multiplication by a function: ψ ↦ f · (Lψ).
    pub fn left_mul(&self, f: &Poly) -> Self {
        let mut out = Self::zero(&self.chart);
        for (k, v) in &self.terms {
            out.add_term(k.clone(), &(f * v));
        }
        out
    }

    fn derivative(&self, p: &Poly, j: &[u32]) -> Poly {
        let mut out = p.clone();
        for (pos, &times) in j.iter().enumerate() {
            let var = self.chart.coord_var(pos);
            for _ in 0..times {
                if out.is_zero() {
                    return out;
                }
                out = out.partial(var).expect("chart coordinate");
            }
        }
        out
    }

    /// Composition `self ∘ other` with Leibniz expansion.
    pub fn compose(&self, other: &Self) -> Result<Self, Error> {
        if !same_chart(&self.chart, &other.chart) {
            return Err(Error::ChartMismatch);
        }
        let mut out = Self::zero(&self.chart);
        for (k, a) in &self.terms {
            for j in sub_indices(k) {
                let weight: i64 = k.iter().zip(&j).map(|(&kk, &jj)| binomial(kk, jj)).product();
                let scaled = a.scale(&Scalar::from_int(weight));
                for (l, b) in &other.terms {
                    let db = self.derivative(b, &j);
                    if db.is_zero() {
                        continue;
                    }
                    let idx: MultiIndex = k.iter().zip(&j).zip(l).map(|((&kk, &jj), &ll)| kk - jj + ll).collect();
                    out.add_term(idx, &(&scaled * &db));
                }
            }
        }
        Ok(out)
    }

    /// Applies the operator to a polynomial section.
    pub fn apply(&self, psi: &Poly) -> Result<Poly, Error> {
        if !same_chart(&self.chart, psi.chart()) {
            return Err(Error::ChartMismatch);
        }
        let mut out = Poly::zero(&self.chart);
        for (k, c) in &self.terms {
            out = &out + &(c * &self.derivative(psi, k));
        }
        Ok(out)
    }

    /// Divides every coefficient by −iℏ, when possible. Used to print the
    /// "formal" commutator with the −iℏ factor removed.
    pub fn strip_minus_i_hbar(&self) -> Option<Self> {
        let mut out = Self::zero(&self.chart);
        for (k, c) in &self.terms {
            out.add_term(k.clone(), &c.div_var(Var::Hbar)?.scale(&Scalar::i()));
        }
        Some(out)
    }

    /// e^{−ig/ℏ} ∘ L ∘ e^{ig/ℏ} for an operator of order ≤ 1 whose
    /// derivative coefficients are divisible by ℏ. `None` otherwise.
    pub fn gauge_conjugate(&self, g: &Poly) -> Option<Self> {
        if self.order() > 1 || !same_chart(&self.chart, g.chart()) {
            return None;
        }
        let mut out = self.clone();
        for (k, c) in &self.terms {
            let Some(pos) = k.iter().position(|&x| x == 1) else { continue };
            let shift = &c.div_var(Var::Hbar)?.scale(&Scalar::i()) * &g.partial(self.chart.coord_var(pos)).ok()?;
            out.add_term(vec![0; k.len()], &shift);
        }
        Some(out)
    }
}

/// [L, M] = LM − ML.
pub fn commutator(a: &FormalOperator, b: &FormalOperator) -> Result<FormalOperator, Error> {
    a.compose(b)?.sub(&b.compose(a)?)
}

fn derivative_text(chart: &ChartRef, k: &[u32]) -> String {
    let mut parts: Vec<String> = Vec::new();
    for (pos, &times) in k.iter().enumerate() {
        if times == 0 {
            continue;
        }
        let label = chart.label(chart.coord_var(pos));
        if times == 1 {
            parts.push(label);
        } else {
            parts.push(alloc::format!("{label}^{times}"));
        }
    }
    alloc::format!("D[{}]", parts.join(","))
}

/// Canonical text: `-i*hbar`, `-i*hbar*D[q1] + p1`, `(q1 + 1)*D[p1]`.
impl fmt::Display for FormalOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        // Highest derivative order first, multiplication part last.
        let mut items: Vec<(&MultiIndex, &Poly)> = self.terms.iter().collect();
        items.sort_by(|(a, _), (b, _)| {
            let (da, db): (u32, u32) = (a.iter().sum(), b.iter().sum());
            db.cmp(&da).then_with(|| b.cmp(a))
        });
        let one = Poly::one(&self.chart);
        for (n, (k, c)) in items.into_iter().enumerate() {
            let text = if k.iter().all(|&x| x == 0) {
                if c.len() > 1 && n > 0 {
                    format!("({c})")
                } else {
                    c.to_string()
                }
            } else {
                let d = derivative_text(&self.chart, k);
                if *c == one {
                    d
                } else if *c == -&one {
                    format!("-{d}")
                } else if c.len() > 1 {
                    format!("({c})*{d}")
                } else {
                    format!("{c}*{d}")
                }
            };
            match (n, text.strip_prefix('-')) {
                (0, _) => f.write_str(&text)?,
                (_, Some(rest)) => write!(f, " - {rest}")?,
                (_, None) => write!(f, " + {text}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for FormalOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FormalOperator({self})")
    }
}
