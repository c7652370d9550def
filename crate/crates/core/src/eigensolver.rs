//! Eigenvalues by phase shooting.
//!
//! z^2 is an eigenvalue exactly when the Pruefer phase phi(l, z) hits the
//! boundary-condition target: n pi for Dirichlet, (n - 1/2) pi for
//! Dirichlet-Neumann. Comparison with the free problem confines lambda_n
//! to [(target/l)^2 + q_min, (target/l)^2 + q_max], which seeds a bracket;
//! the root is then polished by secant steps that must stay inside the
//! bracket, with a bisection forced after every two secants.
//!
//! The phase criterion needs z > 0. When the comparison window collapses
//! onto lambda <= 0 the solver reports [`SolveError::NegativeSpectrumSuspected`]
//! and [`solve_range`] fills that index from the finite-difference oracle
//! instead, marking the record accordingly.

use std::cmp::Ordering;
use std::f64::consts::PI;

use serde::Serialize;
use thiserror::Error;

use crate::oracle::{self, OracleError};
use crate::par;
use crate::potential::{Potential, PotentialError};
use crate::prufer::{self, IntegrationError};

/// Lambda values at or below this are treated as nonpositive spectrum.
pub const LAMBDA_MIN: f64 = 1e-12;

/// Cap on geometric bracket expansions (factor 2 on the lambda scale).
pub const MAX_EXPANSIONS: usize = 60;

/// Certified ceiling on the phase residual of shooting records.
pub const RESIDUAL_TARGET: f64 = 1e-9;

const MAX_ROOT_ITERS: usize = 220;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundaryCondition {
    /// y(0) = y(l) = 0
    Dirichlet,
    /// y(0) = y'(l) = 0
    DirichletNeumann,
}

impl BoundaryCondition {
    /// Phase level phi(l, z) must reach for the n-th eigenvalue.
    pub fn phase_target(self, n: usize) -> f64 {
        match self {
            BoundaryCondition::Dirichlet => n as f64 * PI,
            BoundaryCondition::DirichletNeumann => (n as f64 - 0.5) * PI,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Shooting,
    Oracle,
}

/// One computed eigenvalue with its provenance and certificate.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct EigenvalueRecord {
    pub n: usize,
    /// sqrt(lambda); absent when lambda <= 0 (oracle-filled records).
    pub z: Option<f64>,
    pub lambda: f64,
    /// Shooting: |phi(l, z) - target| in radians. Oracle: the Richardson
    /// gap, an a-posteriori discretization error gauge.
    pub residual: f64,
    pub method: Method,
}

#[derive(Debug, Clone, Copy)]
pub struct SolverOptions {
    /// Relative tolerance handed to the phase integrator.
    pub rel_tol: f64,
    /// Relative tolerance on z at which root refinement stops.
    pub z_rel_tol: f64,
    /// Grid size for oracle fills of nonpositive eigenvalues.
    pub oracle_nodes: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions { rel_tol: prufer::DEFAULT_REL_TOL, z_rel_tol: 1e-11, oracle_nodes: 100_000 }
    }
}

#[derive(Debug, Error)]
pub enum SolveError {
    #[error("eigenvalue {n} appears nonpositive; the phase criterion needs lambda > 0")]
    NegativeSpectrumSuspected { n: usize },
    #[error("no sign change bracketing eigenvalue {n} after {expansions} expansions")]
    BracketFailed { n: usize, expansions: usize },
    #[error("computed eigenvalues are not strictly increasing at n = {n}")]
    NotIncreasing { n: usize },
    #[error("invalid parameter: {reason}")]
    InvalidParameter { reason: String },
    #[error(transparent)]
    Integration(#[from] IntegrationError),
    #[error(transparent)]
    Potential(#[from] PotentialError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

fn validate(p: &Potential, n: usize, ell: f64) -> Result<(), SolveError> {
    let invalid = |reason: String| SolveError::InvalidParameter { reason };
    if n == 0 {
        return Err(invalid("eigenvalue index must be >= 1".into()));
    }
    let end = p.domain_end();
    if !(ell.is_finite() && ell > 0.0 && ell <= end) {
        return Err(invalid(format!("interval length {ell} outside (0, {end}]")));
    }
    Ok(())
}

/// Pruefer phase phi(ell, z) at the right endpoint.
pub fn phase_at(p: &Potential, z: f64, ell: f64) -> Result<f64, SolveError> {
    validate(p, 1, ell)?;
    Ok(prufer::integrate_phase(p, z, ell, prufer::DEFAULT_REL_TOL)?.phi)
}

struct Bracket {
    z_lo: f64,
    f_lo: f64,
    z_hi: f64,
    f_hi: f64,
}

fn bracket_impl(
    p: &Potential,
    n: usize,
    bc: BoundaryCondition,
    ell: f64,
    opts: &SolverOptions,
) -> Result<Bracket, SolveError> {
    validate(p, n, ell)?;
    let target = bc.phase_target(n);
    let ext = p.min_max(0.0, ell)?;
    let base = (target / ell) * (target / ell);
    if base + ext.q_max <= LAMBDA_MIN {
        return Err(SolveError::NegativeSpectrumSuspected { n });
    }
    let mut lam_lo = (base + ext.q_min).max(LAMBDA_MIN);
    let mut lam_hi = base + ext.q_max;
    let phase = |lam: f64| -> Result<(f64, f64), SolveError> {
        let z = lam.sqrt();
        Ok((z, prufer::integrate_phase(p, z, ell, opts.rel_tol)?.phi - target))
    };

    let mut expansions = 0;
    let (mut z_lo, mut f_lo) = phase(lam_lo)?;
    while f_lo >= 0.0 {
        lam_lo /= 2.0;
        if lam_lo < LAMBDA_MIN {
            return Err(SolveError::NegativeSpectrumSuspected { n });
        }
        expansions += 1;
        if expansions > MAX_EXPANSIONS {
            return Err(SolveError::BracketFailed { n, expansions });
        }
        (z_lo, f_lo) = phase(lam_lo)?;
    }
    let (mut z_hi, mut f_hi) = phase(lam_hi)?;
    while f_hi <= 0.0 {
        lam_hi *= 2.0;
        expansions += 1;
        if expansions > MAX_EXPANSIONS {
            return Err(SolveError::BracketFailed { n, expansions });
        }
        (z_hi, f_hi) = phase(lam_hi)?;
    }
    Ok(Bracket { z_lo, f_lo, z_hi, f_hi })
}

/// Bracket [z_lo, z_hi] with phi(l, z_lo) below the n-th target and
/// phi(l, z_hi) above it.
pub fn bracket(
    p: &Potential,
    n: usize,
    bc: BoundaryCondition,
    ell: f64,
) -> Result<(f64, f64), SolveError> {
    let b = bracket_impl(p, n, bc, ell, &SolverOptions::default())?;
    Ok((b.z_lo, b.z_hi))
}

/// Solve for the n-th eigenvalue with z-tolerance `tol` (relative).
pub fn solve_one(
    p: &Potential,
    n: usize,
    bc: BoundaryCondition,
    ell: f64,
    tol: f64,
) -> Result<EigenvalueRecord, SolveError> {
    let opts = SolverOptions { z_rel_tol: tol, ..SolverOptions::default() };
    solve_one_with(p, n, bc, ell, &opts)
}

pub fn solve_one_with(
    p: &Potential,
    n: usize,
    bc: BoundaryCondition,
    ell: f64,
    opts: &SolverOptions,
) -> Result<EigenvalueRecord, SolveError> {
    if !(opts.z_rel_tol.is_finite() && opts.z_rel_tol > 0.0) {
        return Err(SolveError::InvalidParameter {
            reason: format!("z tolerance {} not positive", opts.z_rel_tol),
        });
    }
    let target = bc.phase_target(n);
    let b = bracket_impl(p, n, bc, ell, opts)?;
    let (mut lo, mut f_lo, mut hi, mut f_hi) = (b.z_lo, b.f_lo, b.z_hi, b.f_hi);
    let (mut best_z, mut best_f) =
        if f_lo.abs() <= f_hi.abs() { (lo, f_lo) } else { (hi, f_hi) };
    let mut prev_z = f64::NAN;
    let mut secant_streak = 0;

    for _ in 0..MAX_ROOT_ITERS {
        let width = hi - lo;
        if width <= 4.0 * f64::EPSILON * hi {
            break;
        }
        if width <= opts.z_rel_tol * hi && best_f.abs() <= 0.5 * RESIDUAL_TARGET {
            break;
        }
        let mut z = f64::NAN;
        if secant_streak < 2 && f_hi != f_lo {
            let cand = hi - f_hi * width / (f_hi - f_lo);
            let guard = 1e-3 * width;
            if cand > lo + guard && cand < hi - guard {
                z = cand;
                secant_streak += 1;
            }
        }
        if !z.is_finite() {
            z = 0.5 * (lo + hi);
            secant_streak = 0;
        }
        let f = prufer::integrate_phase(p, z, ell, opts.rel_tol)?.phi - target;
        if f.abs() < best_f.abs() {
            best_z = z;
            best_f = f;
        }
        if f < 0.0 {
            lo = z;
            f_lo = f;
        } else {
            hi = z;
            f_hi = f;
        }
        if (z - prev_z).abs() <= opts.z_rel_tol * z && best_f.abs() <= 0.5 * RESIDUAL_TARGET {
            break;
        }
        prev_z = z;
    }

    Ok(EigenvalueRecord {
        n,
        z: Some(best_z),
        lambda: best_z * best_z,
        residual: best_f.abs(),
        method: Method::Shooting,
    })
}

/// Records for n = 1..n_max, ascending in lambda. Indices whose phase
/// bracket collapses onto lambda <= 0 are filled from the oracle.
pub fn solve_range(
    p: &Potential,
    n_max: usize,
    bc: BoundaryCondition,
    ell: f64,
) -> Result<Vec<EigenvalueRecord>, SolveError> {
    solve_range_with(p, n_max, bc, ell, &SolverOptions::default())
}

pub fn solve_range_with(
    p: &Potential,
    n_max: usize,
    bc: BoundaryCondition,
    ell: f64,
    opts: &SolverOptions,
) -> Result<Vec<EigenvalueRecord>, SolveError> {
    validate(p, n_max.max(1), ell)?;
    if n_max == 0 {
        return Err(SolveError::InvalidParameter { reason: "n_max must be >= 1".into() });
    }
    let results = par::map_indexed(n_max, |i| {
        let n = i + 1;
        match solve_one_with(p, n, bc, ell, opts) {
            Err(SolveError::NegativeSpectrumSuspected { .. }) => {
                let r = oracle::refined_eigenvalue_detailed(p, ell, n, opts.oracle_nodes, bc)?;
                Ok(EigenvalueRecord {
                    n,
                    z: (r.lambda > 0.0).then(|| r.lambda.sqrt()),
                    lambda: r.lambda,
                    residual: r.gap,
                    method: Method::Oracle,
                })
            }
            other => other,
        }
    });
    let mut out = Vec::with_capacity(n_max);
    for r in results {
        out.push(r?);
    }
    for w in out.windows(2) {
        let increasing = w[1].lambda.partial_cmp(&w[0].lambda) == Some(Ordering::Greater);
        if !increasing {
            return Err(SolveError::NotIncreasing { n: w[1].n });
        }
    }
    Ok(out)
}
