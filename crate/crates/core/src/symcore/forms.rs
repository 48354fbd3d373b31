//! Degree 1 and 2 differential forms and vector fields with polynomial
//! coefficients.

use alloc::vec::Vec;
use core::fmt;

use super::chart::{ChartRef, Var};
use super::poly::{same_chart, Poly};
use super::scalar::Scalar;
use crate::error::Error;

/// Σ_k c_k ∂_k over the 2n chart coordinates (α's then β's).
#[derive(Clone, PartialEq, Eq)]
pub struct VectorField {
    chart: ChartRef,
    comps: Vec<Poly>,
}

/// Σ_k c_k dx_k over the 2n chart coordinates.
#[derive(Clone, PartialEq, Eq)]
pub struct OneForm {
    chart: ChartRef,
    comps: Vec<Poly>,
}

/// Σ_{j<k} c_jk dx_j ∧ dx_k, stored only in the ordered basis.
#[derive(Clone, PartialEq, Eq)]
pub struct TwoForm {
    chart: ChartRef,
    comps: Vec<Poly>,
}

fn check_components(chart: &ChartRef, comps: &[Poly], expected: usize) -> Result<(), Error> {
    if comps.len() != expected {
        return Err(Error::ComponentCount { expected, found: comps.len() });
    }
    if comps.iter().any(|c| !same_chart(c.chart(), chart)) {
        return Err(Error::ChartMismatch);
    }
    Ok(())
}

impl VectorField {
    pub fn new(chart: &ChartRef, comps: Vec<Poly>) -> Result<Self, Error> {
        check_components(chart, &comps, 2 * chart.n())?;
        Ok(Self { chart: chart.clone(), comps })
    }

    pub fn zero(chart: &ChartRef) -> Self {
        Self { chart: chart.clone(), comps: (0..2 * chart.n()).map(|_| Poly::zero(chart)).collect() }
    }

    /// The coordinate field ∂_var.
    pub fn coordinate(chart: &ChartRef, var: Var) -> Result<Self, Error> {
        let k = chart.coord_index(var)?;
        let mut v = Self::zero(chart);
        v.comps[k] = Poly::one(chart);
        Ok(v)
    }

    pub fn chart(&self) -> &ChartRef {
        &self.chart
    }

    pub fn components(&self) -> &[Poly] {
        &self.comps
    }

    pub fn component(&self, var: Var) -> Result<&Poly, Error> {
        Ok(&self.comps[self.chart.coord_index(var)?])
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(Poly::is_zero)
    }

    /// Directional derivative X(f).
    pub fn apply(&self, f: &Poly) -> Result<Poly, Error> {
        if !same_chart(&self.chart, f.chart()) {
            return Err(Error::ChartMismatch);
        }
        let mut out = Poly::zero(&self.chart);
        for (k, c) in self.comps.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let d = f.partial(self.chart.coord_var(k))?;
            out = &out + &(c * &d);
        }
        Ok(out)
    }

    /// Lie bracket [X, Y] = Σ_k (X(Y_k) − Y(X_k)) ∂_k.
    pub fn bracket(&self, other: &VectorField) -> Result<VectorField, Error> {
        if !same_chart(&self.chart, &other.chart) {
            return Err(Error::ChartMismatch);
        }
        let mut comps = Vec::with_capacity(self.comps.len());
        for k in 0..self.comps.len() {
            comps.push(&self.apply(&other.comps[k])? - &other.apply(&self.comps[k])?);
        }
        Ok(VectorField { chart: self.chart.clone(), comps })
    }

    pub fn scale(&self, f: &Poly) -> VectorField {
        VectorField { chart: self.chart.clone(), comps: self.comps.iter().map(|c| c * f).collect() }
    }
}

impl OneForm {
    pub fn new(chart: &ChartRef, comps: Vec<Poly>) -> Result<Self, Error> {
        check_components(chart, &comps, 2 * chart.n())?;
        Ok(Self { chart: chart.clone(), comps })
    }

    pub fn zero(chart: &ChartRef) -> Self {
        Self { chart: chart.clone(), comps: (0..2 * chart.n()).map(|_| Poly::zero(chart)).collect() }
    }

    /// `coeff · d(var)`.
    pub fn basis(var: Var, coeff: Poly) -> Result<Self, Error> {
        let chart = coeff.chart().clone();
        let k = chart.coord_index(var)?;
        let mut f = Self::zero(&chart);
        f.comps[k] = coeff;
        Ok(f)
    }

    /// The tautological form θ = Σ α_i dβ_i (sign-adjusted for a reversed chart).
    pub fn tautological(chart: &ChartRef) -> Self {
        let n = chart.n();
        let sign = Scalar::from_int(chart.orientation().sign());
        let mut f = Self::zero(chart);
        for i in 0..n {
            f.comps[n + i] = Poly::alpha(chart, i).scale(&sign);
        }
        f
    }

    pub fn chart(&self) -> &ChartRef {
        &self.chart
    }

    pub fn components(&self) -> &[Poly] {
        &self.comps
    }

    pub fn component(&self, var: Var) -> Result<&Poly, Error> {
        Ok(&self.comps[self.chart.coord_index(var)?])
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(Poly::is_zero)
    }

    /// Pointwise pairing θ(X).
    pub fn contract(&self, x: &VectorField) -> Result<Poly, Error> {
        if !same_chart(&self.chart, &x.chart) {
            return Err(Error::ChartMismatch);
        }
        let mut out = Poly::zero(&self.chart);
        for (a, b) in self.comps.iter().zip(&x.comps) {
            if !a.is_zero() && !b.is_zero() {
                out = &out + &(a * b);
            }
        }
        Ok(out)
    }

    /// dθ, with coefficient ∂_j θ_k − ∂_k θ_j on dx_j ∧ dx_k.
    pub fn d(&self) -> TwoForm {
        let m = self.comps.len();
        let mut out = TwoForm::zero(&self.chart);
        for j in 0..m {
            for k in (j + 1)..m {
                let dj = self.comps[k].partial(self.chart.coord_var(j)).expect("chart coordinate");
                let dk = self.comps[j].partial(self.chart.coord_var(k)).expect("chart coordinate");
                out.comps[pair_index(m, j, k)] = &dj - &dk;
            }
        }
        out
    }

    pub fn wedge(&self, other: &OneForm) -> Result<TwoForm, Error> {
        if !same_chart(&self.chart, &other.chart) {
            return Err(Error::ChartMismatch);
        }
        let m = self.comps.len();
        let mut out = TwoForm::zero(&self.chart);
        for j in 0..m {
            for k in (j + 1)..m {
                let c = &(&self.comps[j] * &other.comps[k]) - &(&self.comps[k] * &other.comps[j]);
                out.comps[pair_index(m, j, k)] = c;
            }
        }
        Ok(out)
    }

    pub fn scale(&self, f: &Poly) -> OneForm {
        OneForm { chart: self.chart.clone(), comps: self.comps.iter().map(|c| c * f).collect() }
    }
}

impl core::ops::Add for &OneForm {
    type Output = OneForm;
    fn add(self, rhs: &OneForm) -> OneForm {
        OneForm { chart: self.chart.clone(), comps: self.comps.iter().zip(&rhs.comps).map(|(a, b)| a + b).collect() }
    }
}

impl core::ops::Sub for &OneForm {
    type Output = OneForm;
    fn sub(self, rhs: &OneForm) -> OneForm {
        OneForm { chart: self.chart.clone(), comps: self.comps.iter().zip(&rhs.comps).map(|(a, b)| a - b).collect() }
    }
}

/// Position of dx_j ∧ dx_k (j < k) in the packed basis of an m-dimensional chart.
pub(crate) fn pair_index(m: usize, j: usize, k: usize) -> usize {
    debug_assert!(j < k && k < m);
    j * (2 * m - j - 1) / 2 + (k - j - 1)
}

impl TwoForm {
    pub fn zero(chart: &ChartRef) -> Self {
        let m = 2 * chart.n();
        Self { chart: chart.clone(), comps: (0..m * (m - 1) / 2).map(|_| Poly::zero(chart)).collect() }
    }

    /// The chart symplectic form ω.
    pub fn symplectic(chart: &ChartRef) -> Self {
        OneForm::tautological(chart).d()
    }

    pub fn chart(&self) -> &ChartRef {
        &self.chart
    }

    /// Coefficient on dx_j ∧ dx_k for any ordered pair (antisymmetric).
    pub fn get(&self, a: Var, b: Var) -> Result<Poly, Error> {
        let m = 2 * self.chart.n();
        let j = self.chart.coord_index(a)?;
        let k = self.chart.coord_index(b)?;
        Ok(match j.cmp(&k) {
            core::cmp::Ordering::Less => self.comps[pair_index(m, j, k)].clone(),
            core::cmp::Ordering::Greater => -&self.comps[pair_index(m, k, j)],
            core::cmp::Ordering::Equal => Poly::zero(&self.chart),
        })
    }

    /// Adds `coeff · dx_a ∧ dx_b`.
    pub fn add_term(&mut self, a: Var, b: Var, coeff: &Poly) -> Result<(), Error> {
        let m = 2 * self.chart.n();
        let j = self.chart.coord_index(a)?;
        let k = self.chart.coord_index(b)?;
        match j.cmp(&k) {
            core::cmp::Ordering::Less => {
                let idx = pair_index(m, j, k);
                self.comps[idx] = &self.comps[idx] + coeff;
            }
            core::cmp::Ordering::Greater => {
                let idx = pair_index(m, k, j);
                self.comps[idx] = &self.comps[idx] - coeff;
            }
            core::cmp::Ordering::Equal => {}
        }
        Ok(())
    }

    /// Packed coefficients with their (j, k) basis indices.
    pub fn entries(&self) -> impl Iterator<Item = ((Var, Var), &Poly)> + '_ {
        let m = 2 * self.chart.n();
        (0..m).flat_map(move |j| (j + 1..m).map(move |k| (j, k))).map(move |(j, k)| {
            ((self.chart.coord_var(j), self.chart.coord_var(k)), &self.comps[pair_index(m, j, k)])
        })
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(Poly::is_zero)
    }

    /// Ω(X, Y) = Σ_{j<k} c_jk (X_j Y_k − X_k Y_j).
    pub fn eval(&self, x: &VectorField, y: &VectorField) -> Result<Poly, Error> {
        if !same_chart(&self.chart, &x.chart) || !same_chart(&self.chart, &y.chart) {
            return Err(Error::ChartMismatch);
        }
        let m = 2 * self.chart.n();
        let mut out = Poly::zero(&self.chart);
        for j in 0..m {
            for k in (j + 1)..m {
                let c = &self.comps[pair_index(m, j, k)];
                if c.is_zero() {
                    continue;
                }
                let det = &(&x.comps[j] * &y.comps[k]) - &(&x.comps[k] * &y.comps[j]);
                if !det.is_zero() {
                    out = &out + &(c * &det);
                }
            }
        }
        Ok(out)
    }

    pub fn scale(&self, f: &Poly) -> TwoForm {
        TwoForm { chart: self.chart.clone(), comps: self.comps.iter().map(|c| c * f).collect() }
    }
}

impl core::ops::Add for &TwoForm {
    type Output = TwoForm;
    fn add(self, rhs: &TwoForm) -> TwoForm {
        TwoForm { chart: self.chart.clone(), comps: self.comps.iter().zip(&rhs.comps).map(|(a, b)| a + b).collect() }
    }
}

impl core::ops::Sub for &TwoForm {
    type Output = TwoForm;
    fn sub(self, rhs: &TwoForm) -> TwoForm {
        TwoForm { chart: self.chart.clone(), comps: self.comps.iter().zip(&rhs.comps).map(|(a, b)| a - b).collect() }
    }
}

fn join_terms(f: &mut fmt::Formatter<'_>, items: Vec<(Poly, alloc::string::String)>) -> fmt::Result {
    if items.is_empty() {
        return f.write_str("0");
    }
    for (k, (c, basis)) in items.into_iter().enumerate() {
        if k > 0 {
            f.write_str(" + ")?;
        }
        if c.len() > 1 {
            write!(f, "({c})*{basis}")?;
        } else {
            write!(f, "{c}*{basis}")?;
        }
    }
    Ok(())
}

impl fmt::Display for OneForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items = self
            .comps
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (c.clone(), alloc::format!("d{}", self.chart.label(self.chart.coord_var(k)))))
            .collect();
        join_terms(f, items)
    }
}

impl fmt::Display for TwoForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items = self
            .entries()
            .filter(|(_, c)| !c.is_zero())
            .map(|((a, b), c)| (c.clone(), alloc::format!("d{}^d{}", self.chart.label(a), self.chart.label(b))))
            .collect();
        join_terms(f, items)
    }
}

impl fmt::Display for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items = self
            .comps
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (c.clone(), alloc::format!("D[{}]", self.chart.label(self.chart.coord_var(k)))))
            .collect();
        join_terms(f, items)
    }
}

macro_rules! debug_via_display {
    ($($t:ty),*) => {$(
        impl fmt::Debug for $t {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "{}({})", stringify!($t), self)
            }
        }
    )*};
}
debug_via_display!(VectorField, OneForm, TwoForm);
