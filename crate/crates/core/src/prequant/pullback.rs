//! Connections pulled back along polynomial maps.

use super::connection::{quantise, ConnectionData};
use super::operator::FormalOperator;
use crate::error::Error;
use crate::symcore::{hamiltonian_vf, poisson, same_chart, OneForm, Poly, Scalar, SmoothMap, Var};

/// f: M → N with a connection on N, and the connection induced on M.
#[derive(Clone, Debug)]
pub struct PullbackSetup {
    map: SmoothMap,
    target_connection: ConnectionData,
    induced: ConnectionData,
}

impl PullbackSetup {
    pub fn new(map: SmoothMap, target_connection: ConnectionData) -> Result<Self, Error> {
        if !same_chart(map.target(), target_connection.chart()) {
            return Err(Error::ChartMismatch);
        }
        let induced = ConnectionData::new(map.pull(target_connection.theta())?);
        debug_assert_eq!(*induced.omega_curv(), map.pull(target_connection.omega_curv())?);
        Ok(Self { map, target_connection, induced })
    }

    pub fn map(&self) -> &SmoothMap {
        &self.map
    }

    pub fn target_connection(&self) -> &ConnectionData {
        &self.target_connection
    }

    pub fn induced(&self) -> &ConnectionData {
        &self.induced
    }

    /// f*θᴺ.
    pub fn pulled_theta(&self) -> &OneForm {
        self.induced.theta()
    }
}

/// The pullback of Ă: the induced connection's operator for f*A.
pub fn pullback_quantise(a: &Poly, s: &PullbackSetup) -> Result<FormalOperator, Error> {
    quantise(&s.map.pull(a)?, &s.induced)
}

/// Commutator of pulled-back operators in closed form:
/// −iℏ(−iℏ X_𝔭 − (f*θ)(X_𝔭) + 𝔭(2 − Σ_i 𝔠_i)),
/// with 𝔭 = {f*A, f*B} and 𝔠_i = {f*p′_i, f*q′_i} on the source.
///
/// This agrees with the composed commutator for one degree of freedom; for
/// several it drops the cross terms that the curvature term carries.
pub fn theorem_commutator(a: &Poly, b: &Poly, s: &PullbackSetup) -> Result<FormalOperator, Error> {
    let src = s.map.source();
    let fa = s.map.pull(a)?;
    let fb = s.map.pull(b)?;
    let bracket = poisson(&fa, &fb)?;
    let mut c_sum = Poly::zero(src);
    for i in 0..s.map.target().n() {
        c_sum = &c_sum + &poisson(s.map.component(Var::Alpha(i))?, s.map.component(Var::Beta(i))?)?;
    }
    let x = hamiltonian_vf(&bracket);
    let mih = Poly::hbar(src).scale(&-Scalar::i());
    let derivative = FormalOperator::from_vector_field(&x).left_mul(&(&mih * &mih));
    let zeroth = &(&bracket * &(&Poly::int(src, 2) - &c_sum)) - &s.pulled_theta().contract(&x)?;
    derivative.add(&FormalOperator::multiplication(&(&mih * &zeroth)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prequant::commutator;
    use crate::symcore::ChartSpec;
    use alloc::vec;

    fn cylinder(lambda: Scalar) -> PullbackSetup {
        let m = ChartSpec::new(vec![("l", "phi_l")]).unwrap();
        let n = ChartSpec::new(vec![("z", "phi_z")]).unwrap();
        let z = Poly::alpha(&m, 0).scale(&lambda.recip().unwrap());
        let map = SmoothMap::new(&m, &n, vec![z, Poly::beta(&m, 0)]).unwrap();
        PullbackSetup::new(map, ConnectionData::standard(&n)).unwrap()
    }

    #[test]
    fn cylinder_theorem_matches_structure() {
        for (num, den) in [(1, 4), (1, 2), (1, 1), (2, 1), (3, 7)] {
            let lambda = Scalar::ratio(num, den);
            let s = cylinder(lambda.clone());
            let n = s.map().target().clone();
            let (z, phi) = (Poly::alpha(&n, 0), Poly::beta(&n, 0));
            let structural = commutator(&pullback_quantise(&z, &s).unwrap(), &pullback_quantise(&phi, &s).unwrap()).unwrap();
            let theorem = theorem_commutator(&z, &phi, &s).unwrap();
            assert_eq!(structural, theorem);
            // −iℏ(2λ−1)/λ²
            let value = &(&lambda.scale_int(2) - &Scalar::one()) / &lambda.pow(2);
            let src = s.map().source();
            let expected = Poly::hbar(src).scale(&(&-Scalar::i() * &value));
            assert_eq!(theorem, FormalOperator::multiplication(&expected));
        }
    }

    #[test]
    fn identity_map_gives_ordinary_quantisation() {
        let c = ConnectionData::folded(2);
        let s = PullbackSetup::new(SmoothMap::identity(c.chart()), c.clone()).unwrap();
        let a = &Poly::alpha(c.chart(), 0) * &Poly::beta(c.chart(), 1);
        assert_eq!(pullback_quantise(&a, &s).unwrap(), quantise(&a, &c).unwrap());
    }
}
