//! Named connections and maps used by the reference checks and sample problems.

use pseudoquant_core::prequant::{ConnectionData, PullbackSetup};
use pseudoquant_core::symcore::{ChartRef, ChartSpec, OneForm, Orientation, Poly, Scalar, SmoothMap, Var};
use pseudoquant_core::Error;

/// Θ = θ + q₁ dq₂ on T*ℝ².
pub fn q1dq2() -> ConnectionData {
    let chart = ChartSpec::cotangent(2);
    let extra = OneForm::basis(Var::Beta(1), Poly::beta(&chart, 0)).expect("coordinate");
    ConnectionData::standard(&chart).shifted(&extra).expect("same chart")
}

/// Θ = θ + p₁ dp₂ on T*ℝ², the potential under which [q̆₁, q̆₂] = iℏ.
pub fn p1dp2() -> ConnectionData {
    let chart = ChartSpec::cotangent(2);
    let extra = OneForm::basis(Var::Alpha(1), Poly::alpha(&chart, 0)).expect("coordinate");
    ConnectionData::standard(&chart).shifted(&extra).expect("same chart")
}

/// Θ = (p/2 − f) dq − (q/2 − g) dp on T*ℝ, for f, g on that chart.
pub fn coupled(f: &Poly, g: &Poly) -> Result<ConnectionData, Error> {
    let chart = f.chart().clone();
    let half = Scalar::ratio(1, 2);
    let dq = &Poly::alpha(&chart, 0).scale(&half) - f;
    let dp = g - &Poly::beta(&chart, 0).scale(&half);
    Ok(ConnectionData::new(OneForm::new(&chart, vec![dp, dq])?))
}

/// Cylinder (l, φ_l) → sphere chart (z, φ_z), z = l/λ, with the standard
/// potential z dφ_z on the target. Panics if λ = 0.
pub fn cylinder(lambda: &Scalar) -> PullbackSetup {
    let m = ChartSpec::new(vec![("l", "phi_l")]).expect("valid labels");
    let n = ChartSpec::new(vec![("z", "phi_z")]).expect("valid labels");
    let z = Poly::alpha(&m, 0).scale(&lambda.recip().expect("nonzero scale"));
    let map = SmoothMap::new(&m, &n, vec![z, Poly::beta(&m, 0)]).expect("two components");
    PullbackSetup::new(map, ConnectionData::standard(&n)).expect("same chart")
}

/// The cylinder map with z = k·l for a formal parameter k (k = 1/λ).
pub fn cylinder_with_parameter() -> PullbackSetup {
    let m = ChartSpec::with_params(vec![("l", "phi_l")], vec!["k"], Orientation::Standard).expect("valid labels");
    let n = ChartSpec::with_params(vec![("z", "phi_z")], vec!["k"], Orientation::Standard).expect("valid labels");
    let k = Poly::var(&m, Var::Param(0)).expect("parameter");
    let map = SmoothMap::new(&m, &n, vec![&k * &Poly::alpha(&m, 0), Poly::beta(&m, 0)]).expect("two components");
    PullbackSetup::new(map, ConnectionData::standard(&n)).expect("same chart")
}

/// The chart every problem defaults to: T*ℝ with `p1`, `q1`.
pub fn default_chart() -> ChartRef {
    ChartSpec::cotangent(1)
}
