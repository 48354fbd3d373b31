//! Sparse multivariate polynomials over ℚ(i) in ℏ, chart parameters and
//! chart coordinates.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use super::chart::{ChartRef, Var};
use super::scalar::Scalar;
use crate::error::Error;

/// Exponent vector indexed by chart slot (see [`ChartSpec::slot`](super::ChartSpec::slot)).
pub type Exponents = Vec<u32>;

/// A polynomial on a fixed chart.
///
/// Zero coefficients are never stored. Arithmetic operators panic when the
/// operands live on different charts; the checked entry points in
/// [`calculus`](super::calculus) return [`Error::ChartMismatch`] instead.
#[derive(Clone)]
pub struct Poly {
    chart: ChartRef,
    terms: BTreeMap<Exponents, Scalar>,
}

pub(crate) fn same_chart(a: &ChartRef, b: &ChartRef) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        same_chart(&self.chart, &other.chart) && self.terms == other.terms
    }
}

impl Eq for Poly {}

impl Poly {
    pub fn zero(chart: &ChartRef) -> Self {
        Self { chart: chart.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(chart: &ChartRef, c: Scalar) -> Self {
        let mut p = Self::zero(chart);
        if !c.is_zero() {
            p.terms.insert(vec![0; chart.slots()], c);
        }
        p
    }

    pub fn one(chart: &ChartRef) -> Self {
        Self::constant(chart, Scalar::one())
    }

    pub fn int(chart: &ChartRef, v: i64) -> Self {
        Self::constant(chart, Scalar::from_int(v))
    }

    pub fn var(chart: &ChartRef, var: Var) -> Result<Self, Error> {
        let slot = chart.slot(var)?;
        let mut e = vec![0; chart.slots()];
        e[slot] = 1;
        Ok(Self::monomial(chart, e, Scalar::one()))
    }

    pub fn hbar(chart: &ChartRef) -> Self {
        Self::var(chart, Var::Hbar).expect("hbar always exists")
    }

    pub fn alpha(chart: &ChartRef, i: usize) -> Self {
        Self::var(chart, Var::Alpha(i)).expect("alpha index out of range")
    }

    pub fn beta(chart: &ChartRef, i: usize) -> Self {
        Self::var(chart, Var::Beta(i)).expect("beta index out of range")
    }

    pub fn monomial(chart: &ChartRef, exps: Exponents, c: Scalar) -> Self {
        assert_eq!(exps.len(), chart.slots(), "exponent vector length");
        let mut p = Self::zero(chart);
        if !c.is_zero() {
            p.terms.insert(exps, c);
        }
        p
    }

    /// Builds a polynomial from raw terms, merging duplicates and dropping zeros.
    pub fn from_terms(chart: &ChartRef, terms: impl IntoIterator<Item = (Exponents, Scalar)>) -> Self {
        let mut p = Self::zero(chart);
        for (e, c) in terms {
            assert_eq!(e.len(), chart.slots(), "exponent vector length");
            p.add_term(e, &c);
        }
        p
    }

    fn add_term(&mut self, e: Exponents, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&e);
                }
            }
            None => {
                self.terms.insert(e, c.clone());
            }
        }
    }

    pub fn chart(&self) -> &ChartRef {
        &self.chart
    }

    pub fn terms(&self) -> &BTreeMap<Exponents, Scalar> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    /// The value when the polynomial has no variable dependence.
    pub fn as_constant(&self) -> Option<Scalar> {
        match self.terms.len() {
            0 => Some(Scalar::zero()),
            1 => {
                let (e, c) = self.terms.iter().next().unwrap();
                e.iter().all(|&x| x == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn coefficient(&self, exps: &[u32]) -> Scalar {
        self.terms.get(exps).cloned().unwrap_or_default()
    }

    /// Relabels onto an equal chart held by a different reference.
    pub fn with_chart(mut self, chart: &ChartRef) -> Self {
        assert!(same_chart(&self.chart, chart));
        self.chart = chart.clone();
        self
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return Self::zero(&self.chart);
        }
        Self { chart: self.chart.clone(), terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect() }
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = Self::one(&self.chart);
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn depends_on(&self, var: Var) -> bool {
        match self.chart.slot(var) {
            Ok(s) => self.terms.keys().any(|e| e[s] > 0),
            Err(_) => false,
        }
    }

    pub fn degree_in(&self, var: Var) -> u32 {
        match self.chart.slot(var) {
            Ok(s) => self.terms.keys().map(|e| e[s]).max().unwrap_or(0),
            Err(_) => 0,
        }
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    /// Exact partial derivative.
    pub fn partial(&self, var: Var) -> Result<Self, Error> {
        let s = self.chart.slot(var)?;
        Ok(self.partial_slot(s))
    }

    pub(crate) fn partial_slot(&self, s: usize) -> Self {
        let mut out = Self::zero(&self.chart);
        for (e, c) in &self.terms {
            if e[s] == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[s] -= 1;
            out.add_term(e2, &c.scale_int(e[s] as i64));
        }
        out
    }

    /// Divides by `var`, if every term contains it.
    pub fn div_var(&self, var: Var) -> Option<Self> {
        let s = self.chart.slot(var).ok()?;
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            if e[s] == 0 {
                return None;
            }
            let mut e2 = e.clone();
            e2[s] -= 1;
            terms.insert(e2, c.clone());
        }
        Some(Self { chart: self.chart.clone(), terms })
    }

    /// Substitutes every slot by a polynomial on `target`.
    ///
    /// `images[s]` replaces the variable at slot `s`; all images must live on
    /// `target`.
    pub fn compose(&self, target: &ChartRef, images: &[Poly]) -> Self {
        assert_eq!(images.len(), self.chart.slots(), "one image per slot");
        let mut cache: Vec<Vec<Poly>> = images.iter().map(|p| vec![Poly::one(target), p.clone()]).collect();
        let mut out = Self::zero(target);
        for (e, c) in &self.terms {
            let mut term = Poly::constant(target, c.clone());
            for (s, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                let powers = &mut cache[s];
                while powers.len() <= k as usize {
                    let next = &powers[powers.len() - 1] * &images[s];
                    powers.push(next);
                }
                term = &term * &powers[k as usize];
            }
            out = &out + &term;
        }
        out
    }

    /// Replaces one variable by a polynomial on the same chart.
    pub fn substitute(&self, var: Var, value: &Poly) -> Result<Self, Error> {
        if !same_chart(&self.chart, &value.chart) {
            return Err(Error::ChartMismatch);
        }
        let s = self.chart.slot(var)?;
        let images: Vec<Poly> = (0..self.chart.slots())
            .map(|k| {
                if k == s {
                    value.clone()
                } else {
                    let mut e = vec![0; self.chart.slots()];
                    e[k] = 1;
                    Poly::monomial(&self.chart, e, Scalar::one())
                }
            })
            .collect();
        Ok(self.compose(&self.chart, &images))
    }

    /// Floating-point evaluation with one value per chart slot.
    pub fn eval(&self, point: &[Complex64]) -> Complex64 {
        assert_eq!(point.len(), self.chart.slots(), "one value per slot");
        let mut acc = Complex64::new(0.0, 0.0);
        for (e, c) in &self.terms {
            let mut t = c.to_complex();
            for (x, &k) in point.iter().zip(e) {
                if k > 0 {
                    t *= x.powu(k);
                }
            }
            acc += t;
        }
        acc
    }

    pub fn map_coefficients(&self, mut f: impl FnMut(&Scalar) -> Scalar) -> Self {
        Self::from_terms(&self.chart, self.terms.iter().map(|(e, c)| (e.clone(), f(c))))
    }

    fn combine(&self, rhs: &Poly, sign: bool) -> Poly {
        assert!(same_chart(&self.chart, &rhs.chart), "chart mismatch in polynomial arithmetic");
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            if sign {
                out.add_term(e.clone(), c);
            } else {
                out.add_term(e.clone(), &-c);
            }
        }
        out
    }
}

impl Scalar {
    pub(crate) fn scale_int(&self, k: i64) -> Scalar {
        self * &Scalar::from_int(k)
    }
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        self.combine(rhs, true)
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self.combine(rhs, false)
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        assert!(same_chart(&self.chart, &rhs.chart), "chart mismatch in polynomial arithmetic");
        let mut out = Poly::zero(&self.chart);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e: Exponents = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.add_term(e, &(ca * cb));
            }
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly { chart: self.chart.clone(), terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect() }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Poly> for Poly {
            type Output = Poly;
            fn $m(self, rhs: Poly) -> Poly {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a Poly> for Poly {
            type Output = Poly;
            fn $m(self, rhs: &Poly) -> Poly {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

fn monomial_text(chart: &ChartRef, e: &[u32]) -> String {
    let mut parts: Vec<String> = Vec::new();
    for (s, &k) in e.iter().enumerate() {
        if k == 0 {
            continue;
        }
        let label = chart.label(chart.var_at_slot(s));
        if k == 1 {
            parts.push(label);
        } else {
            parts.push(alloc::format!("{label}^{k}"));
        }
    }
    parts.join("*")
}

fn term_text(chart: &ChartRef, e: &[u32], c: &Scalar, lead: bool) -> String {
    let mono = monomial_text(chart, e);
    if mono.is_empty() {
        return if c.is_compound() && !lead { alloc::format!("({c})") } else { alloc::format!("{c}") };
    }
    if c.is_one() {
        mono
    } else if (-c).is_one() {
        alloc::format!("-{mono}")
    } else if c.is_compound() {
        alloc::format!("({c})*{mono}")
    } else {
        alloc::format!("{c}*{mono}")
    }
}

impl Poly {
    /// Terms in display order: higher degree in the coordinates first, then
    /// higher total degree, then by exponents descending.
    pub fn sorted_terms(&self) -> Vec<(&Exponents, &Scalar)> {
        let first_coord = 1 + self.chart.params().len();
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|(a, _), (b, _)| {
            let ca: u32 = a[first_coord..].iter().sum();
            let cb: u32 = b[first_coord..].iter().sum();
            let da: u32 = a.iter().sum();
            let db: u32 = b.iter().sum();
            cb.cmp(&ca).then_with(|| db.cmp(&da)).then_with(|| b.cmp(a))
        });
        v
    }
}

/// Canonical text, e.g. `(1/2)*p1^2 - i*hbar*q1 + 3`. The output parses back
/// to the same polynomial with the CLI expression grammar.
impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (e, c)) in self.sorted_terms().into_iter().enumerate() {
            if k == 0 {
                f.write_str(&term_text(&self.chart, e, c, true))?;
            } else if c.prints_negative() {
                write!(f, " - {}", term_text(&self.chart, e, &-c, false))?;
            } else {
                write!(f, " + {}", term_text(&self.chart, e, c, false))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symcore::ChartSpec;
    use alloc::string::ToString;

    #[test]
    fn partial_examples() {
        let c = ChartSpec::labelled(1, "a", "b");
        let a = Poly::alpha(&c, 0);
        let b = Poly::beta(&c, 0);
        let h = Poly::hbar(&c);
        let p = &(&a * &a) * &b;
        assert_eq!(p.partial(Var::Alpha(0)).unwrap(), (&a * &b).scale(&Scalar::from_int(2)));
        assert!(a.partial(Var::Beta(0)).unwrap().is_zero());
        assert_eq!((&h * &a).partial(Var::Alpha(0)).unwrap(), h);
        assert!(p.partial(Var::Alpha(3)).is_err());
    }

    #[test]
    fn display_is_canonical() {
        let c = ChartSpec::cotangent(1);
        let p = Poly::alpha(&c, 0);
        let h = Poly::hbar(&c);
        let x = &p.pow(2).scale(&Scalar::ratio(1, 2)) - &(&h * &Poly::beta(&c, 0)).scale(&Scalar::i());
        assert_eq!(x.to_string(), "(1/2)*p1^2 - i*hbar*q1");
        assert_eq!(h.scale(&-Scalar::i()).to_string(), "-i*hbar");
        assert_eq!(Poly::zero(&c).to_string(), "0");
        assert_eq!((&p - &Poly::int(&c, 2)).to_string(), "p1 - 2");
        let z = Poly::constant(&c, &Scalar::one() + &(&Scalar::i() * &Scalar::from_int(2)));
        assert_eq!((&p - &z).to_string(), "p1 - (1+2*i)");
        assert_eq!(z.to_string(), "1+2*i");
    }

    #[test]
    fn compose_substitutes() {
        let c = ChartSpec::cotangent(1);
        let p = Poly::alpha(&c, 0);
        let q = Poly::beta(&c, 0);
        let x = &p * &q;
        let y = x.substitute(Var::Alpha(0), &(&q + &Poly::one(&c))).unwrap();
        assert_eq!(y, &(&q * &q) + &q);
    }
}
