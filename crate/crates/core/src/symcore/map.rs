//! Polynomial maps between charts and pullback of functions and forms.

use alloc::vec::Vec;

use super::calculus::differential;
use super::chart::{ChartRef, Var};
use super::forms::{OneForm, TwoForm};
use super::poly::{same_chart, Poly};
use crate::error::Error;

/// f: source → target, given by one source polynomial per target coordinate
/// in component order (α′ then β′).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmoothMap {
    source: ChartRef,
    target: ChartRef,
    comps: Vec<Poly>,
}

impl SmoothMap {
    pub fn new(source: &ChartRef, target: &ChartRef, comps: Vec<Poly>) -> Result<Self, Error> {
        let expected = 2 * target.n();
        if comps.len() != expected {
            return Err(Error::ComponentCount { expected, found: comps.len() });
        }
        if comps.iter().any(|c| !same_chart(c.chart(), source)) {
            return Err(Error::ChartMismatch);
        }
        for p in target.params() {
            if source.lookup(p).is_none_or(|v| !matches!(v, Var::Param(_))) {
                return Err(Error::InvalidChart(alloc::format!("parameter `{p}` missing on the source chart")));
            }
        }
        Ok(Self { source: source.clone(), target: target.clone(), comps })
    }

    pub fn identity(chart: &ChartRef) -> Self {
        let comps = chart.coords().map(|v| Poly::var(chart, v).expect("chart coordinate")).collect();
        Self { source: chart.clone(), target: chart.clone(), comps }
    }

    pub fn source(&self) -> &ChartRef {
        &self.source
    }

    pub fn target(&self) -> &ChartRef {
        &self.target
    }

    pub fn components(&self) -> &[Poly] {
        &self.comps
    }

    /// f* of a target coordinate.
    pub fn component(&self, var: Var) -> Result<&Poly, Error> {
        Ok(&self.comps[self.target.coord_index(var)?])
    }

    fn slot_images(&self) -> Vec<Poly> {
        (0..self.target.slots())
            .map(|s| match self.target.var_at_slot(s) {
                Var::Hbar => Poly::hbar(&self.source),
                Var::Param(k) => {
                    let v = self.source.lookup(&self.target.params()[k]).expect("checked at construction");
                    Poly::var(&self.source, v).expect("source parameter")
                }
                v => self.comps[self.target.coord_index(v).expect("coordinate")].clone(),
            })
            .collect()
    }

    pub fn pull<T: Pullback>(&self, obj: &T) -> Result<T, Error> {
        obj.pullback(self)
    }
}

/// Objects that can be pulled back along a [`SmoothMap`].
pub trait Pullback: Sized {
    fn pullback(&self, map: &SmoothMap) -> Result<Self, Error>;
}

impl Pullback for Poly {
    fn pullback(&self, map: &SmoothMap) -> Result<Poly, Error> {
        if !same_chart(self.chart(), &map.target) {
            return Err(Error::ChartMismatch);
        }
        Ok(self.compose(&map.source, &map.slot_images()))
    }
}

impl Pullback for OneForm {
    fn pullback(&self, map: &SmoothMap) -> Result<OneForm, Error> {
        if !same_chart(self.chart(), &map.target) {
            return Err(Error::ChartMismatch);
        }
        let images = map.slot_images();
        let mut out = OneForm::zero(&map.source);
        for (k, c) in self.components().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let coeff = c.compose(&map.source, &images);
            out = &out + &differential(&map.comps[k]).scale(&coeff);
        }
        Ok(out)
    }
}

impl Pullback for TwoForm {
    fn pullback(&self, map: &SmoothMap) -> Result<TwoForm, Error> {
        if !same_chart(self.chart(), &map.target) {
            return Err(Error::ChartMismatch);
        }
        let images = map.slot_images();
        let target = &map.target;
        let mut out = TwoForm::zero(&map.source);
        for ((a, b), c) in self.entries() {
            if c.is_zero() {
                continue;
            }
            let coeff = c.compose(&map.source, &images);
            let da = differential(&map.comps[target.coord_index(a)?]);
            let db = differential(&map.comps[target.coord_index(b)?]);
            out = &out + &da.wedge(&db)?.scale(&coeff);
        }
        Ok(out)
    }
}

/// Pulls back a function or form along `map`.
pub fn pullback_form<T: Pullback>(map: &SmoothMap, obj: &T) -> Result<T, Error> {
    obj.pullback(map)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symcore::{ChartSpec, Scalar};

    #[test]
    fn identity_pullback_is_identity() {
        let c = ChartSpec::cotangent(2);
        let id = SmoothMap::identity(&c);
        let f = &Poly::alpha(&c, 0).pow(2) * &Poly::beta(&c, 1);
        assert_eq!(id.pull(&f).unwrap(), f);
        let theta = OneForm::tautological(&c);
        assert_eq!(id.pull(&theta).unwrap(), theta);
        assert_eq!(id.pull(&theta.d()).unwrap(), theta.d());
    }

    #[test]
    fn squeezed_cylinder_potential() {
        let m = ChartSpec::new(alloc::vec![("l", "phi_l")]).unwrap();
        let n = ChartSpec::new(alloc::vec![("z", "phi_z")]).unwrap();
        let lambda = Scalar::ratio(3, 2);
        let inv = lambda.recip().unwrap();
        let map = SmoothMap::new(&m, &n, alloc::vec![Poly::alpha(&m, 0).scale(&inv), Poly::beta(&m, 0)]).unwrap();
        let theta_n = OneForm::basis(Var::Beta(0), Poly::alpha(&n, 0)).unwrap();
        let expect = OneForm::basis(Var::Beta(0), Poly::alpha(&m, 0).scale(&inv)).unwrap();
        assert_eq!(map.pull(&theta_n).unwrap(), expect);
    }

    #[test]
    fn rejects_wrong_shapes() {
        let m = ChartSpec::cotangent(1);
        let n = ChartSpec::cotangent(2);
        assert!(matches!(
            SmoothMap::new(&m, &n, alloc::vec![Poly::alpha(&m, 0)]),
            Err(Error::ComponentCount { expected: 4, found: 1 })
        ));
        let id = SmoothMap::identity(&m);
        assert_eq!(id.pull(&Poly::alpha(&n, 0)), Err(Error::ChartMismatch));
    }
}
