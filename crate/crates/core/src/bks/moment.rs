//! Closed forms for ∫ μ^p e^{iaμ^k} dμ over the real line.

use core::f64::consts::PI;

use num_complex::Complex64;

use crate::error::Error;

/// ∫_0^∞ μ^{s−1} e^{ibμ^k} dμ = (1/k) Γ(s/k) |b|^{−s/k} e^{i·sgn(b)·πs/(2k)},
/// the value obtained by rotating the contour onto the ray where the phase
/// becomes a decaying exponential. For s ≥ k the integral only exists as a
/// regularised limit, which this formula also gives.
pub fn half_line_moment(s: f64, k: u32, b: f64) -> Complex64 {
    let kf = f64::from(k);
    let magnitude = libm::tgamma(s / kf) * libm::pow(libm::fabs(b), -s / kf) / kf;
    let angle = if b > 0.0 { 1.0 } else { -1.0 } * PI * s / (2.0 * kf);
    Complex64::from_polar(magnitude, angle)
}

fn check(k: u32, a: f64) -> Result<(), Error> {
    if k < 2 {
        return Err(Error::NonIntegrable(alloc::format!("phase power k = {k} must be at least 2")));
    }
    if !a.is_finite() || a == 0.0 {
        return Err(Error::NonIntegrable(alloc::format!("phase coefficient a = {a} must be finite and nonzero")));
    }
    Ok(())
}

/// ∫ μ^p e^{iaμ^k} dμ over ℝ, as the sum of the two half-line pieces.
pub fn oscillatory_moment_raw(p: u32, k: u32, a: f64) -> Result<Complex64, Error> {
    check(k, a)?;
    // Odd moments of even phases cancel exactly.
    if p % 2 == 1 && k.is_multiple_of(2) {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let s = f64::from(p) + 1.0;
    let neg_a = if k.is_multiple_of(2) { a } else { -a };
    let sign = if p.is_multiple_of(2) { 1.0 } else { -1.0 };
    Ok(half_line_moment(s, k, a) + half_line_moment(s, k, neg_a) * sign)
}

/// ∫ μ^{2j} e^{iaμ^k} dμ over ℝ.
pub fn oscillatory_moment(j: u32, k: u32, a: f64) -> Result<Complex64, Error> {
    oscillatory_moment_raw(2 * j, k, a)
}
