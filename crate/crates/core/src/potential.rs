//! Potentials q(x) on [0, 1]: analytic families, sampled grids, extrema,
//! and the shape predicates (nonpositive, monotone, single-well,
//! single-barrier) that the ratio bounds require.
//!
//! Analytic families evaluate their closed form exactly; sampled grids
//! interpolate linearly between nodes. A potential is immutable after
//! construction and safe to share across threads.

use std::fmt;
use std::io::BufRead;

use thiserror::Error;

/// Grid resolution for extremum scans and shape detection on analytic
/// families. Sampled potentials are scanned at their own nodes instead.
pub const SCAN_POINTS: usize = 2048;

/// Default shape-classification tolerance for analytic families; covers
/// evaluation roundoff only. Sampled grids classify exactly (tolerance 0).
pub const ANALYTIC_SHAPE_TOL: f64 = 1e-9;

const GOLDEN: f64 = 0.618_033_988_749_894_9;
const REFINE_ITERS: usize = 120;

#[derive(Debug, Error)]
pub enum PotentialError {
    #[error("x = {x} lies outside the potential domain [0, {end}]")]
    OutOfDomain { x: f64, end: f64 },
    #[error("empty or inverted scan interval [{a}, {b}]")]
    EmptyInterval { a: f64, b: f64 },
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("invalid sample grid: {reason}")]
    InvalidSamples { reason: String },
    #[error("domain end {ell} outside (0, 1]")]
    InvalidDomainEnd { ell: f64 },
}

/// Functional form of a potential.
#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    /// q(x) = c
    Constant(f64),
    /// q(x) = offset + amplitude * sin(pi x)
    BarrierSin { offset: f64, amplitude: f64 },
    /// q(x) = offset + slope * x
    Ramp { offset: f64, slope: f64 },
    /// q(x) = coeffs[0] + coeffs[1] x + coeffs[2] x^2 + ...
    Poly(Vec<f64>),
    /// Piecewise linear through (xs[i], qs[i]); xs strictly increasing,
    /// running exactly from 0 to 1.
    Sampled { xs: Vec<f64>, qs: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Potential {
    family: Family,
    domain_end: f64,
}

/// Extrema of q over a scan interval.
#[derive(Debug, Clone, Copy)]
pub struct Extrema {
    pub q_min: f64,
    pub q_max: f64,
    pub argmin: f64,
    pub argmax: f64,
}

/// Shape predicates decided by [`Potential::classify`].
///
/// Monotonicity is weak throughout: a constant counts as nondecreasing and
/// nonincreasing at once, so it satisfies all four predicates, and a purely
/// monotone profile counts as single-barrier (and single-well) with its
/// x0 on the boundary.
#[derive(Debug, Clone)]
pub struct ShapeReport {
    pub nonpositive: bool,
    pub monotone_increasing: bool,
    /// x0 such that q is nonincreasing on [0, x0], nondecreasing on [x0, end];
    /// reported at the trough.
    pub single_well: Option<f64>,
    /// x0 such that q is nondecreasing on [0, x0], nonincreasing on [x0, end];
    /// reported at the peak.
    pub single_barrier: Option<f64>,
    /// Tolerance the predicates were decided with.
    pub tolerance: f64,
    /// True when a reported x0 sits on the domain boundary.
    pub x0_at_boundary: bool,
}

impl Potential {
    pub fn constant(c: f64) -> Self {
        Self::new(Family::Constant(c))
    }

    pub fn barrier_sin(offset: f64, amplitude: f64) -> Self {
        Self::new(Family::BarrierSin { offset, amplitude })
    }

    pub fn ramp(offset: f64, slope: f64) -> Self {
        Self::new(Family::Ramp { offset, slope })
    }

    pub fn poly(coeffs: Vec<f64>) -> Self {
        Self::new(Family::Poly(coeffs))
    }

    fn new(family: Family) -> Self {
        Potential { family, domain_end: 1.0 }
    }

    /// Build a sampled potential from (x, q) pairs covering [0, 1].
    pub fn from_samples(samples: &[(f64, f64)]) -> Result<Self, PotentialError> {
        let invalid = |reason: &str| PotentialError::InvalidSamples { reason: reason.into() };
        if samples.len() < 2 {
            return Err(invalid("need at least two samples"));
        }
        for w in samples.windows(2) {
            let increasing = w[1].0.partial_cmp(&w[0].0) == Some(std::cmp::Ordering::Greater);
            if !increasing {
                return Err(invalid("x values must be strictly increasing"));
            }
        }
        if samples[0].0 != 0.0 {
            return Err(invalid("grid must start at x = 0"));
        }
        if samples[samples.len() - 1].0 != 1.0 {
            return Err(invalid("grid must end at x = 1"));
        }
        if samples.iter().any(|&(x, q)| !x.is_finite() || !q.is_finite()) {
            return Err(invalid("samples must be finite"));
        }
        let xs = samples.iter().map(|s| s.0).collect();
        let qs = samples.iter().map(|s| s.1).collect();
        Ok(Self::new(Family::Sampled { xs, qs }))
    }

    /// Parse "x,q" lines. Blank lines are skipped and `#` starts a comment.
    /// Errors name the offending line.
    pub fn load_samples<R: BufRead>(reader: R) -> Result<Self, PotentialError> {
        let fail = |line: usize, reason: String| PotentialError::Parse { line, reason };
        let mut xs: Vec<f64> = Vec::new();
        let mut qs: Vec<f64> = Vec::new();
        let mut last_line = 0;
        for (idx, line) in reader.lines().enumerate() {
            let lineno = idx + 1;
            let line = line.map_err(|e| fail(lineno, format!("read failure: {e}")))?;
            let data = line.split('#').next().unwrap_or("").trim();
            if data.is_empty() {
                continue;
            }
            let (xrepr, qrepr) = data
                .split_once(',')
                .ok_or_else(|| fail(lineno, format!("expected \"x,q\", got {data:?}")))?;
            let parse = |repr: &str| -> Result<f64, PotentialError> {
                let repr = repr.trim();
                let v: f64 = repr
                    .parse()
                    .map_err(|_| fail(lineno, format!("invalid number {repr:?}")))?;
                if !v.is_finite() {
                    return Err(fail(lineno, format!("non-finite value {repr:?}")));
                }
                Ok(v)
            };
            let x = parse(xrepr)?;
            let q = parse(qrepr)?;
            match xs.last() {
                None if x != 0.0 => return Err(fail(lineno, "grid must start at x = 0".into())),
                Some(&prev) if x == prev => {
                    return Err(fail(lineno, format!("duplicate x = {x}")));
                }
                Some(&prev) if x < prev => {
                    return Err(fail(lineno, "x values must be strictly increasing".into()));
                }
                _ => {}
            }
            if x > 1.0 {
                return Err(fail(lineno, format!("x = {x} lies outside [0, 1]")));
            }
            xs.push(x);
            qs.push(q);
            last_line = lineno;
        }
        if xs.len() < 2 {
            return Err(fail(last_line.max(1), "need at least two samples".into()));
        }
        if *xs.last().unwrap() != 1.0 {
            return Err(fail(last_line, "grid must end at x = 1".into()));
        }
        Ok(Self::new(Family::Sampled { xs, qs }))
    }

    /// Restrict the active domain to [0, ell], ell in (0, 1].
    pub fn with_domain_end(mut self, ell: f64) -> Result<Self, PotentialError> {
        if !(ell.is_finite() && ell > 0.0 && ell <= 1.0) {
            return Err(PotentialError::InvalidDomainEnd { ell });
        }
        self.domain_end = ell;
        Ok(self)
    }

    pub fn domain_end(&self) -> f64 {
        self.domain_end
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn is_sampled(&self) -> bool {
        matches!(self.family, Family::Sampled { .. })
    }

    pub fn default_shape_tol(&self) -> f64 {
        if self.is_sampled() {
            0.0
        } else {
            ANALYTIC_SHAPE_TOL
        }
    }

    /// Evaluate q(x); x must lie in [0, domain_end].
    pub fn eval(&self, x: f64) -> Result<f64, PotentialError> {
        if !(0.0..=self.domain_end).contains(&x) {
            return Err(PotentialError::OutOfDomain { x, end: self.domain_end });
        }
        Ok(self.eval_raw(x))
    }

    /// Evaluation for integrator internals, tolerant of endpoint roundoff.
    pub(crate) fn eval_clamped(&self, x: f64) -> f64 {
        self.eval_raw(x.clamp(0.0, self.domain_end))
    }

    fn eval_raw(&self, x: f64) -> f64 {
        match &self.family {
            Family::Constant(c) => *c,
            Family::BarrierSin { offset, amplitude } => {
                offset + amplitude * (std::f64::consts::PI * x).sin()
            }
            Family::Ramp { offset, slope } => offset + slope * x,
            Family::Poly(coeffs) => coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c),
            Family::Sampled { xs, qs } => {
                if x <= xs[0] {
                    return qs[0];
                }
                if x >= *xs.last().unwrap() {
                    return *qs.last().unwrap();
                }
                let j = xs.partition_point(|&t| t <= x);
                let w = (x - xs[j - 1]) / (xs[j] - xs[j - 1]);
                qs[j - 1] + w * (qs[j] - qs[j - 1])
            }
        }
    }

    /// Extrema of q over [a, b] with their locations.
    ///
    /// Sampled potentials are piecewise linear, so scanning nodes and the
    /// interval endpoints is exact. Analytic families use a dense grid
    /// followed by derivative-free golden-section refinement around the
    /// best grid cells.
    pub fn min_max(&self, a: f64, b: f64) -> Result<Extrema, PotentialError> {
        if !(a.is_finite() && b.is_finite() && 0.0 <= a && a < b && b <= self.domain_end) {
            return Err(PotentialError::EmptyInterval { a, b });
        }
        let (xs, vs) = self.scan_grid(a, b);
        let mut imin = 0;
        let mut imax = 0;
        for i in 1..vs.len() {
            if vs[i] < vs[imin] {
                imin = i;
            }
            if vs[i] > vs[imax] {
                imax = i;
            }
        }
        let mut out = Extrema {
            q_min: vs[imin],
            argmin: xs[imin],
            q_max: vs[imax],
            argmax: xs[imax],
        };
        if !self.is_sampled() {
            let bracket = |i: usize| {
                let lo = if i > 0 { xs[i - 1] } else { a };
                let hi = if i + 1 < xs.len() { xs[i + 1] } else { b };
                (lo, hi)
            };
            let (lo, hi) = bracket(imin);
            let (x_r, v_r) = golden_min(&|x| self.eval_raw(x), lo, hi);
            if v_r < out.q_min {
                out.q_min = v_r;
                out.argmin = x_r;
            }
            let (lo, hi) = bracket(imax);
            let (x_r, v_r) = golden_min(&|x| -self.eval_raw(x), lo, hi);
            if -v_r > out.q_max {
                out.q_max = -v_r;
                out.argmax = x_r;
            }
        }
        Ok(out)
    }

    /// Decide the shape predicates on [0, domain_end] with the given
    /// tolerance on pointwise comparisons.
    pub fn classify(&self, tol: f64) -> ShapeReport {
        let tol = tol.max(0.0);
        let end = self.domain_end;
        let (_, vs) = self.scan_grid(0.0, end);
        let n = vs.len();

        let nonpositive = vs.iter().all(|&v| v <= tol);

        // Longest runs that tolerate violations of size <= tol. A profile is
        // single-barrier iff some split index lies in both the nondecreasing
        // prefix and the nonincreasing suffix; single-well mirrors this.
        let mut nondec_prefix_end = n - 1;
        for j in 1..n {
            if vs[j] < vs[j - 1] - tol {
                nondec_prefix_end = j - 1;
                break;
            }
        }
        let mut noninc_suffix_start = 0;
        for j in (1..n).rev() {
            if vs[j] > vs[j - 1] + tol {
                noninc_suffix_start = j;
                break;
            }
        }
        let mut noninc_prefix_end = n - 1;
        for j in 1..n {
            if vs[j] > vs[j - 1] + tol {
                noninc_prefix_end = j - 1;
                break;
            }
        }
        let mut nondec_suffix_start = 0;
        for j in (1..n).rev() {
            if vs[j] < vs[j - 1] - tol {
                nondec_suffix_start = j;
                break;
            }
        }

        let monotone_increasing = nondec_prefix_end == n - 1;
        let is_barrier = noninc_suffix_start <= nondec_prefix_end;
        let is_well = nondec_suffix_start <= noninc_prefix_end;

        let ext = self
            .min_max(0.0, end)
            .expect("full-domain scan interval is valid");
        let single_barrier = is_barrier.then_some(ext.argmax);
        let single_well = is_well.then_some(ext.argmin);

        let near = 1e-6 * end;
        let on_boundary = |x: f64| x <= near || x >= end - near;
        let x0_at_boundary = single_barrier.is_some_and(on_boundary)
            || single_well.is_some_and(on_boundary);

        ShapeReport {
            nonpositive,
            monotone_increasing,
            single_well,
            single_barrier,
            tolerance: tol,
            x0_at_boundary,
        }
    }

    /// Weak monotonicity of q on [a, b], up to tol.
    pub fn monotone_nondecreasing_on(
        &self,
        a: f64,
        b: f64,
        tol: f64,
    ) -> Result<bool, PotentialError> {
        if !(a.is_finite() && b.is_finite() && 0.0 <= a && a < b && b <= self.domain_end) {
            return Err(PotentialError::EmptyInterval { a, b });
        }
        let (_, vs) = self.scan_grid(a, b);
        Ok(vs.windows(2).all(|w| w[1] >= w[0] - tol))
    }

    /// Sample nodes strictly inside (from, to); integration steps must not
    /// straddle these since q has a kink there. Empty for analytic families.
    pub(crate) fn interior_nodes(&self, from: f64, to: f64) -> Vec<f64> {
        match &self.family {
            Family::Sampled { xs, .. } => {
                xs.iter().copied().filter(|&x| x > from && x < to).collect()
            }
            _ => Vec::new(),
        }
    }

    fn scan_grid(&self, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
        let xs: Vec<f64> = match &self.family {
            Family::Sampled { xs, .. } => {
                let mut g = vec![a];
                g.extend(xs.iter().copied().filter(|&x| x > a && x < b));
                g.push(b);
                g
            }
            _ => (0..=SCAN_POINTS)
                .map(|i| a + (b - a) * i as f64 / SCAN_POINTS as f64)
                .collect(),
        };
        let vs = xs.iter().map(|&x| self.eval_raw(x)).collect();
        (xs, vs)
    }
}

impl fmt::Display for Potential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.family {
            Family::Constant(c) => write!(f, "constant({c})"),
            Family::BarrierSin { offset, amplitude } => {
                write!(f, "barrier_sin({offset},{amplitude})")
            }
            Family::Ramp { offset, slope } => write!(f, "ramp({offset},{slope})"),
            Family::Poly(coeffs) => {
                write!(f, "poly(")?;
                for (i, c) in coeffs.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{c}")?;
                }
                write!(f, ")")
            }
            Family::Sampled { xs, .. } => write!(f, "sampled[{} nodes]", xs.len()),
        }
    }
}

fn golden_min(f: &dyn Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> (f64, f64) {
    let mut x1 = hi - GOLDEN * (hi - lo);
    let mut x2 = lo + GOLDEN * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    let mut best = if f1 < f2 { (x1, f1) } else { (x2, f2) };
    for _ in 0..REFINE_ITERS {
        if hi - lo < 1e-14 {
            break;
        }
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - GOLDEN * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + GOLDEN * (hi - lo);
            f2 = f(x2);
        }
        if f1 < best.1 {
            best = (x1, f1);
        }
        if f2 < best.1 {
            best = (x2, f2);
        }
    }
    best
}
