//! Finite-difference evolution of iℏ ∂ψ/∂t = −(ℏ²/2)(1 + 2qⁿ)^{−3/2} ∂²ψ/∂q².
//!
//! The generator is symmetric for the weight w = (1 + 2qⁿ)^{3/2}, and the
//! Crank–Nicolson step is its Cayley transform, so Σ w|ψ|²Δq is conserved to
//! rounding error with Dirichlet boundaries. The plain L² norm is not.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::Error;

/// Uniform grid on [q_min, q_max] including both end nodes.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid1D {
    q_min: f64,
    q_max: f64,
    points: usize,
}

/// Fraction of the domain length kept clear of the singular point for odd n.
pub const DEFAULT_CLIP_MARGIN: f64 = 0.1;

impl Grid1D {
    pub fn new(q_min: f64, q_max: f64, points: usize) -> Result<Self, Error> {
        if points < 3 {
            return Err(Error::InvalidParameter(alloc::format!("grid needs at least 3 points, got {points}")));
        }
        if !(q_min.is_finite() && q_max.is_finite() && q_min < q_max) {
            return Err(Error::InvalidParameter(alloc::format!("bad grid interval [{q_min}, {q_max}]")));
        }
        Ok(Self { q_min, q_max, points })
    }

    /// Grid for deformation order n. For odd n the left end is moved to
    /// −(1/2)^{1/n} + margin·(q_max − q_min) when needed; the second value is
    /// the new left end in that case.
    pub fn for_deformation(q_min: f64, q_max: f64, points: usize, n: u32, margin: f64) -> Result<(Self, Option<f64>), Error> {
        let grid = Self::new(q_min, q_max, points)?;
        if n.is_multiple_of(2) {
            return Ok((grid, None));
        }
        let limit = -libm::pow(0.5, 1.0 / f64::from(n)) + margin * (q_max - q_min);
        if q_min >= limit {
            return Ok((grid, None));
        }
        if limit >= q_max {
            return Err(Error::InvalidParameter(alloc::format!(
                "clipping to q > {limit} leaves no room below q_max = {q_max}"
            )));
        }
        Ok((Self::new(limit, q_max, points)?, Some(limit)))
    }

    pub fn q_min(&self) -> f64 {
        self.q_min
    }

    pub fn q_max(&self) -> f64 {
        self.q_max
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn spacing(&self) -> f64 {
        (self.q_max - self.q_min) / (self.points - 1) as f64
    }

    pub fn node(&self, i: usize) -> f64 {
        self.q_min + i as f64 * self.spacing()
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.points).map(|i| self.node(i))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct WaveState {
    pub samples: Vec<Complex64>,
    pub time: f64,
}

impl WaveState {
    pub fn zero(grid: &Grid1D) -> Self {
        Self { samples: vec![Complex64::new(0.0, 0.0); grid.points], time: 0.0 }
    }

    /// (2πσ²)^{−1/4} exp(−(q−q₀)²/(4σ²) + i p₀ q/ℏ), with the end nodes set
    /// to zero.
    pub fn gaussian(grid: &Grid1D, q0: f64, p0: f64, sigma: f64, hbar: f64) -> Result<Self, Error> {
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(Error::InvalidParameter(alloc::format!("sigma = {sigma} must be positive")));
        }
        let norm = libm::pow(2.0 * core::f64::consts::PI * sigma * sigma, -0.25);
        let mut samples: Vec<Complex64> = grid
            .nodes()
            .map(|q| {
                let d = q - q0;
                Complex64::from_polar(norm * libm::exp(-d * d / (4.0 * sigma * sigma)), p0 * q / hbar)
            })
            .collect();
        samples[0] = Complex64::new(0.0, 0.0);
        let last = samples.len() - 1;
        samples[last] = Complex64::new(0.0, 0.0);
        Ok(Self { samples, time: 0.0 })
    }

    pub fn is_finite(&self) -> bool {
        self.samples.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Boundary {
    DirichletZero,
    /// Complex absorbing potential −iη((width − d)/width)² over `width` nodes
    /// at each end, d the distance to the end in nodes.
    Absorbing { width: usize, strength: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EvolutionConfig {
    /// Deformation order; 0 gives the free equation.
    pub n: u32,
    pub hbar: f64,
    pub dt: f64,
    pub steps: usize,
    pub boundary: Boundary,
}

impl EvolutionConfig {
    pub fn new(n: u32, hbar: f64, dt: f64, steps: usize) -> Result<Self, Error> {
        let cfg = Self { n, hbar, dt, steps, boundary: Boundary::DirichletZero };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_boundary(mut self, boundary: Boundary) -> Self {
        self.boundary = boundary;
        self
    }

    pub fn validate(&self) -> Result<(), Error> {
        if !(self.hbar > 0.0 && self.hbar.is_finite()) {
            return Err(Error::InvalidParameter(alloc::format!("hbar = {} must be positive", self.hbar)));
        }
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::InvalidParameter(alloc::format!("dt = {} must be positive", self.dt)));
        }
        if self.steps == 0 {
            return Err(Error::InvalidParameter("steps must be positive".into()));
        }
        if let Boundary::Absorbing { width, strength } = self.boundary {
            if width == 0 || !(strength >= 0.0 && strength.is_finite()) {
                return Err(Error::InvalidParameter("absorbing layer needs a width and a non-negative strength".into()));
            }
        }
        Ok(())
    }

    fn base(&self, q: f64) -> Result<f64, Error> {
        let value = 1.0 + 2.0 * libm::pow(q, f64::from(self.n));
        if value <= 0.0 || !value.is_finite() {
            return Err(Error::Singular { q, value });
        }
        Ok(value)
    }

    /// (1 + 2qⁿ)^{−3/2}; exactly 1 for n = 0.
    pub fn coefficient(&self, q: f64) -> Result<f64, Error> {
        if self.n == 0 {
            return Ok(1.0);
        }
        Ok(libm::pow(self.base(q)?, -1.5))
    }

    /// (1 + 2qⁿ)^{3/2}; exactly 1 for n = 0.
    pub fn weight(&self, q: f64) -> Result<f64, Error> {
        if self.n == 0 {
            return Ok(1.0);
        }
        Ok(libm::pow(self.base(q)?, 1.5))
    }
}

fn check_len(s: &WaveState, g: &Grid1D) -> Result<(), Error> {
    if s.samples.len() != g.points {
        return Err(Error::InvalidParameter(alloc::format!(
            "state has {} samples, grid has {} points",
            s.samples.len(),
            g.points
        )));
    }
    Ok(())
}

fn absorption(cfg: &EvolutionConfig, points: usize, i: usize) -> f64 {
    match cfg.boundary {
        Boundary::DirichletZero => 0.0,
        Boundary::Absorbing { width, strength } => {
            let d = i.min(points - 1 - i);
            if d >= width {
                0.0
            } else {
                let x = (width - d) as f64 / width as f64;
                strength * x * x
            }
        }
    }
}

/// Hψ on interior nodes (end nodes return 0): −(ℏ²/2) c(q) δ²ψ/Δq², plus the
/// absorbing term when configured.
pub fn apply_hamiltonian(s: &WaveState, cfg: &EvolutionConfig, g: &Grid1D) -> Result<WaveState, Error> {
    check_len(s, g)?;
    let h2 = g.spacing() * g.spacing();
    let mut out = vec![Complex64::new(0.0, 0.0); g.points];
    for i in 1..g.points - 1 {
        let c = cfg.coefficient(g.node(i))?;
        let lap = (s.samples[i + 1] - s.samples[i] * 2.0 + s.samples[i - 1]) / h2;
        out[i] = lap * (-0.5 * cfg.hbar * cfg.hbar * c) - Complex64::new(0.0, absorption(cfg, g.points, i)) * s.samples[i];
    }
    Ok(WaveState { samples: out, time: s.time })
}

/// Trapezoidal Σ w|ψ|²Δq.
pub fn weighted_norm(s: &WaveState, cfg: &EvolutionConfig, g: &Grid1D) -> Result<f64, Error> {
    check_len(s, g)?;
    let mut total = 0.0;
    for (i, z) in s.samples.iter().enumerate() {
        let end = if i == 0 || i == g.points - 1 { 0.5 } else { 1.0 };
        total += end * cfg.weight(g.node(i))? * z.norm_sqr();
    }
    Ok(total * g.spacing())
}

/// Trapezoidal Σ |ψ|²Δq.
pub fn l2_norm(s: &WaveState, g: &Grid1D) -> Result<f64, Error> {
    check_len(s, g)?;
    let mut total = 0.0;
    for (i, z) in s.samples.iter().enumerate() {
        let end = if i == 0 || i == g.points - 1 { 0.5 } else { 1.0 };
        total += end * z.norm_sqr();
    }
    Ok(total * g.spacing())
}

/// Crank–Nicolson integrator with the tridiagonal factorisation cached.
#[derive(Clone, Debug)]
pub struct Evolver {
    cfg: EvolutionConfig,
    grid: Grid1D,
    // Interior rows: explicit operator (I − iκH) and the factorised
    // implicit operator (I + iκH), κ = Δt/(2ℏ).
    diag: Vec<Complex64>,
    off: Vec<Complex64>,
    implicit_off: Vec<Complex64>,
    upper: Vec<Complex64>,
    pivots: Vec<Complex64>,
}

impl Evolver {
    pub fn new(cfg: EvolutionConfig, grid: Grid1D) -> Result<Self, Error> {
        cfg.validate()?;
        let m = grid.points - 2;
        let kappa = cfg.dt / (2.0 * cfg.hbar);
        let h2 = grid.spacing() * grid.spacing();
        let mut diag = Vec::with_capacity(m);
        let mut off = Vec::with_capacity(m);
        let mut implicit_diag = Vec::with_capacity(m);
        let mut implicit_off = Vec::with_capacity(m);
        for i in 1..=m {
            let c = cfg.coefficient(grid.node(i))?;
            // H_{i,i±1} = t, H_ii = −2t − iγ
            let t = -0.5 * cfg.hbar * cfg.hbar * c / h2;
            let h_ii = Complex64::new(-2.0 * t, -absorption(&cfg, grid.points, i));
            let ik = Complex64::new(0.0, kappa);
            diag.push(Complex64::new(1.0, 0.0) - ik * h_ii);
            off.push(-ik * t);
            implicit_diag.push(Complex64::new(1.0, 0.0) + ik * h_ii);
            implicit_off.push(ik * t);
        }
        // Thomas factorisation of the implicit matrix (row i couples to i±1
        // with coefficient implicit_off[i]).
        let mut upper = vec![Complex64::new(0.0, 0.0); m];
        let mut pivots = vec![Complex64::new(0.0, 0.0); m];
        for i in 0..m {
            let below = if i == 0 { Complex64::new(0.0, 0.0) } else { implicit_off[i] * upper[i - 1] };
            let pivot = implicit_diag[i] - below;
            if pivot.norm() < 1e-300 || !pivot.re.is_finite() {
                return Err(Error::SolveFailed(i + 1));
            }
            pivots[i] = pivot;
            upper[i] = implicit_off[i] / pivot;
        }
        Ok(Self { cfg, grid, diag, off, implicit_off, upper, pivots })
    }

    pub fn config(&self) -> &EvolutionConfig {
        &self.cfg
    }

    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    /// One step; end nodes are held at zero.
    pub fn step(&self, s: &WaveState) -> Result<WaveState, Error> {
        check_len(s, &self.grid)?;
        let m = self.grid.points - 2;
        let psi = &s.samples;
        let mut rhs = Vec::with_capacity(m);
        for i in 0..m {
            let k = i + 1;
            rhs.push(self.diag[i] * psi[k] + self.off[i] * (psi[k - 1] + psi[k + 1]));
        }
        // Forward sweep then back substitution.
        let mut y = vec![Complex64::new(0.0, 0.0); m];
        for i in 0..m {
            let prev = if i == 0 { Complex64::new(0.0, 0.0) } else { self.implicit_off[i] * y[i - 1] };
            y[i] = (rhs[i] - prev) / self.pivots[i];
        }
        for i in (0..m.saturating_sub(1)).rev() {
            let next = y[i + 1];
            y[i] -= self.upper[i] * next;
        }
        let mut samples = Vec::with_capacity(self.grid.points);
        samples.push(Complex64::new(0.0, 0.0));
        samples.extend(y);
        samples.push(Complex64::new(0.0, 0.0));
        let out = WaveState { samples, time: s.time + self.cfg.dt };
        if !out.is_finite() {
            return Err(Error::SolveFailed(0));
        }
        Ok(out)
    }
}

/// One Crank–Nicolson step without caching.
pub fn step(s: &WaveState, cfg: &EvolutionConfig, g: &Grid1D) -> Result<WaveState, Error> {
    Evolver::new(*cfg, *g)?.step(s)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Diagnostics {
    pub time: f64,
    pub weighted_norm: f64,
    pub l2_norm: f64,
    /// Mean and variance of q under the weighted density w|ψ|².
    pub mean_q: f64,
    pub var_q: f64,
    /// Weighted mass within [`BOUNDARY_NODES`] nodes of either end, relative
    /// to the total.
    pub boundary_mass: f64,
}

pub const BOUNDARY_NODES: usize = 5;
pub const BOUNDARY_MASS_WARNING: f64 = 1e-6;

pub fn diagnostics(s: &WaveState, cfg: &EvolutionConfig, g: &Grid1D) -> Result<Diagnostics, Error> {
    check_len(s, g)?;
    let mut mass = 0.0;
    let mut first = 0.0;
    let mut second = 0.0;
    let mut edge = 0.0;
    for (i, z) in s.samples.iter().enumerate() {
        let q = g.node(i);
        let end = if i == 0 || i == g.points - 1 { 0.5 } else { 1.0 };
        let rho = end * cfg.weight(q)? * z.norm_sqr();
        mass += rho;
        first += rho * q;
        second += rho * q * q;
        if i < BOUNDARY_NODES || i + BOUNDARY_NODES >= g.points {
            edge += rho;
        }
    }
    let (mean_q, var_q, boundary_mass) = if mass > 0.0 {
        let mean = first / mass;
        (mean, second / mass - mean * mean, edge / mass)
    } else {
        (0.0, 0.0, 0.0)
    };
    Ok(Diagnostics {
        time: s.time,
        weighted_norm: mass * g.spacing(),
        l2_norm: l2_norm(s, g)?,
        mean_q,
        var_q,
        boundary_mass,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub rows: Vec<Diagnostics>,
    pub snapshots: Vec<WaveState>,
    pub final_state: WaveState,
    /// Set when boundary mass exceeded [`BOUNDARY_MASS_WARNING`] at a
    /// recorded time.
    pub boundary_warning: bool,
}

/// Runs `cfg.steps` steps, recording diagnostics (and a snapshot when
/// `keep_snapshots`) at t = 0 and every `every` steps, plus the final step.
pub fn evolve(initial: &WaveState, cfg: &EvolutionConfig, g: &Grid1D, every: usize, keep_snapshots: bool) -> Result<Trajectory, Error> {
    let every = every.max(1);
    let evolver = Evolver::new(*cfg, *g)?;
    let mut state = initial.clone();
    let mut rows = Vec::new();
    let mut snapshots = Vec::new();
    let mut warning = false;
    let mut record = |s: &WaveState, rows: &mut Vec<Diagnostics>, snaps: &mut Vec<WaveState>| -> Result<(), Error> {
        let d = diagnostics(s, cfg, g)?;
        warning |= d.boundary_mass > BOUNDARY_MASS_WARNING;
        rows.push(d);
        if keep_snapshots {
            snaps.push(s.clone());
        }
        Ok(())
    };
    record(&state, &mut rows, &mut snapshots)?;
    for k in 1..=cfg.steps {
        state = evolver.step(&state)?;
        if k % every == 0 || k == cfg.steps {
            record(&state, &mut rows, &mut snapshots)?;
        }
    }
    Ok(Trajectory { rows, snapshots, final_state: state, boundary_warning: warning })
}
