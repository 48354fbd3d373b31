//! Direct numerical evaluation of ∫ μ^p e^{iaμ^k} dμ, independent of the
//! Gamma-function closed form.
//!
//! The integral is regularised by e^{−εμ²}. For each ε the half line is split
//! at R: [0, R] is integrated by Gauss–Legendre on panels of equal phase
//! increment, [R, ∞) by repeated integration by parts evaluated with
//! truncated Taylor jets at R. The ε → 0 limit is taken by polynomial
//! extrapolation over a geometric sequence of ε.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::error::Error;

const GL_ORDER: usize = 24;
const PHASE_AT_SPLIT: f64 = 60.0;
const PHASE_PER_PANEL: f64 = 0.5;
const JET_LEN: usize = 48;
const LEVELS: usize = 9;

/// Gauss–Legendre nodes and weights on [−1, 1], n ≥ 2.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 2, "need at least two nodes");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut x = libm::cos(PI * (i as f64 + 0.75) / (nf + 0.5));
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = nf * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if libm::fabs(dx) < 1e-16 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

type Jet = Vec<Complex64>;

fn jet_mul(a: &[Complex64], b: &[Complex64]) -> Jet {
    let len = a.len().min(b.len());
    (0..len).map(|n| (0..=n).map(|k| a[k] * b[n - k]).sum()).collect()
}

fn jet_recip(c: &[Complex64]) -> Jet {
    let mut r: Jet = Vec::with_capacity(c.len());
    let inv = c[0].inv();
    r.push(inv);
    for n in 1..c.len() {
        let s: Complex64 = (1..=n).map(|k| c[k] * r[n - k]).sum();
        r.push(-s * inv);
    }
    r
}

fn jet_exp(g: &[Complex64]) -> Jet {
    let mut e: Jet = Vec::with_capacity(g.len());
    e.push(g[0].exp());
    for n in 1..g.len() {
        let s: Complex64 = (1..=n).map(|k| g[k] * e[n - k] * k as f64).sum();
        e.push(s / n as f64);
    }
    e
}

fn jet_derivative(v: &[Complex64]) -> Jet {
    (1..v.len()).map(|i| v[i] * i as f64).collect()
}

/// Taylor coefficients of (R + t)^p.
fn power_jet(r: f64, p: u32, len: usize) -> Jet {
    let mut out = vec![Complex64::new(0.0, 0.0); len];
    let mut binom = 1.0;
    for (i, slot) in out.iter_mut().enumerate().take((p as usize + 1).min(len)) {
        *slot = Complex64::new(binom * libm::pow(r, f64::from(p) - i as f64), 0.0);
        binom = binom * (f64::from(p) - i as f64) / (i as f64 + 1.0);
    }
    out
}

/// ∫_R^∞ h e^{iφ} dμ ≈ −e^{iφ(R)} Σ_m (u_m w)(R), with u_0 = h,
/// w = 1/(iφ′) and u_{m+1} = −(u_m w)′.
fn tail(p: u32, k: u32, b: f64, eps: f64, r: f64) -> Complex64 {
    let g = [Complex64::new(-eps * r * r, 0.0), Complex64::new(-2.0 * eps * r, 0.0), Complex64::new(-eps, 0.0)];
    let mut gj = vec![Complex64::new(0.0, 0.0); JET_LEN];
    gj[..3].copy_from_slice(&g);
    let h = jet_mul(&power_jet(r, p, JET_LEN), &jet_exp(&gj));
    let dphi: Jet = power_jet(r, k - 1, JET_LEN).into_iter().map(|c| c * Complex64::new(0.0, b * f64::from(k))).collect();
    let w = jet_recip(&dphi);
    let mut u = h;
    let mut sum = Complex64::new(0.0, 0.0);
    let mut last = f64::INFINITY;
    while !u.is_empty() {
        let v = jet_mul(&u, &w);
        let term = v[0];
        let size = term.norm();
        if size > last {
            break;
        }
        sum += term;
        if size <= 1e-18 * sum.norm() {
            break;
        }
        last = size;
        u = jet_derivative(&v).into_iter().map(|c| -c).collect();
    }
    -Complex64::from_polar(1.0, b * libm::pow(r, f64::from(k))) * sum
}

/// ∫_0^∞ μ^p e^{ibμ^k − εμ²} dμ.
pub fn regulated_half_line(p: u32, k: u32, b: f64, eps: f64) -> Complex64 {
    let r = libm::pow(PHASE_AT_SPLIT / libm::fabs(b), 1.0 / f64::from(k));
    let panels = libm::ceil(PHASE_AT_SPLIT / PHASE_PER_PANEL) as usize;
    let (x, wts) = gauss_legendre(GL_ORDER);
    let mut acc = Complex64::new(0.0, 0.0);
    let edge = |i: usize| r * libm::pow(i as f64 / panels as f64, 1.0 / f64::from(k));
    for i in 0..panels {
        let (lo, hi) = (edge(i), edge(i + 1));
        let half = 0.5 * (hi - lo);
        let mid = 0.5 * (hi + lo);
        for (xi, wi) in x.iter().zip(&wts) {
            let mu = mid + half * xi;
            let amp = libm::pow(mu, f64::from(p)) * libm::exp(-eps * mu * mu);
            acc += Complex64::from_polar(amp * wi * half, b * libm::pow(mu, f64::from(k)));
        }
    }
    acc + tail(p, k, b, eps, r)
}

/// ∫_ℝ μ^p e^{iaμ^k − εμ²} dμ.
pub fn regulated_moment(p: u32, k: u32, a: f64, eps: f64) -> Complex64 {
    let neg_a = if k.is_multiple_of(2) { a } else { -a };
    let sign = if p.is_multiple_of(2) { 1.0 } else { -1.0 };
    regulated_half_line(p, k, a, eps) + regulated_half_line(p, k, neg_a, eps) * sign
}

/// Neville extrapolation of the samples (x_i, y_i) to x = 0.
pub fn extrapolate_to_zero(xs: &[f64], ys: &[Complex64]) -> Complex64 {
    let mut t: Vec<Complex64> = ys.to_vec();
    let n = xs.len();
    for level in 1..n {
        for i in 0..n - level {
            let (x0, x1) = (xs[i], xs[i + level]);
            t[i] = (t[i + 1] * x0 - t[i] * x1) / (x0 - x1);
        }
    }
    t[0]
}

/// ε → 0 limit of the regularised moment, with ε_l = ε₀ 2^{−l}.
pub fn moment_by_quadrature(p: u32, k: u32, a: f64) -> Result<Complex64, Error> {
    if k < 2 || !a.is_finite() || a == 0.0 {
        return Err(Error::NonIntegrable(alloc::format!("k = {k}, a = {a}")));
    }
    let eps0 = libm::fabs(a) / 16.0;
    let xs: Vec<f64> = (0..LEVELS).map(|l| eps0 / f64::from(1u32 << l)).collect();
    let ys: Vec<Complex64> = xs.iter().map(|&e| regulated_moment(p, k, a, e)).collect();
    Ok(extrapolate_to_zero(&xs, &ys))
}
