//! Machine verification of eigenvalue-ratio inequalities.
//!
//! Each check_* operation computes the spectra (or phase derivatives) it
//! needs, evaluates every inequality instance, and returns a
//! [`VerificationReport`] listing the two sides and the margin of each
//! check. Nothing is asserted silently: `pass` is exactly the conjunction
//! of the listed margins being above `-slack` (scaled by the bound's
//! magnitude), and can be recomputed from the report alone.
//!
//! Verified statements, for -y'' + q y = lambda y on [0, l]:
//!
//! * T1: if q <= 0 is nondecreasing on [0, x0], the scaled phase
//!   derivative theta_dot(x0, z) is <= 0 for z >= sqrt(-2 q_min).
//! * T2: if q <= 0 is single-barrier, lambda_n/lambda_m >= n^2/m^2 for
//!   eligible pairs (lambda_m >= -2 q_min), Dirichlet.
//! * T3: some l0 makes every pair eligible: the same ratio bound holds
//!   for all pairs on [0, l0], with lambda_1(l0) > 0.
//! * T4: if q <= 0 is nondecreasing, lambda_n/lambda_m >=
//!   (2n-1)^2/(2m-1)^2 for eligible pairs, Dirichlet-Neumann.
//! * Cited classical bounds: lambda_n/lambda_1 <= n^2 and
//!   lambda_n/lambda_m <= ceil(n/m)^2 for q >= 0; lambda_n/lambda_m >=
//!   floor(n/m)^2 for q <= 0 (positive lambda_m); lambda_n/lambda_m <=
//!   n^2/m^2 for nonnegative single-well q.

use std::io::{self, Write};

use serde::Serialize;
use thiserror::Error;

use crate::eigensolver::{self, BoundaryCondition, SolveError, SolverOptions};
use crate::oracle::{self, OracleError};
use crate::par;
use crate::potential::{Potential, PotentialError, ShapeReport};
use crate::prufer::{self, IntegrationError};

/// Default margin slack: a check passes when margin >= -slack * max(1, |rhs|).
pub const DEFAULT_SLACK: f64 = 1e-8;

/// Grid size for the lambda_1 oracle fallback inside the l0 search.
const L0_ORACLE_NODES: usize = 20_000;

/// Absolute l-resolution of the l0 bisection.
const L0_BISECT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TheoremId {
    T1,
    T2,
    T3,
    T4,
    #[serde(rename = "AB_n2")]
    AbN2,
    #[serde(rename = "AB_ceil")]
    AbCeil,
    #[serde(rename = "Chen_floor")]
    ChenFloor,
    #[serde(rename = "HK_singlewell")]
    HkSingleWell,
}

impl TheoremId {
    /// True for upper bounds (lhs is the bound); false for lower bounds
    /// (lhs is the computed ratio) and for T1.
    pub fn is_upper(self) -> bool {
        matches!(self, TheoremId::AbN2 | TheoremId::AbCeil | TheoremId::HkSingleWell)
    }

    pub fn name(self) -> &'static str {
        match self {
            TheoremId::T1 => "T1",
            TheoremId::T2 => "T2",
            TheoremId::T3 => "T3",
            TheoremId::T4 => "T4",
            TheoremId::AbN2 => "AB_n2",
            TheoremId::AbCeil => "AB_ceil",
            TheoremId::ChenFloor => "Chen_floor",
            TheoremId::HkSingleWell => "HK_singlewell",
        }
    }
}

impl std::fmt::Display for TheoremId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Selector for [`check_cited_bounds`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CitedBound {
    /// lambda_n / lambda_1 <= n^2 for q >= 0.
    AbN2,
    /// lambda_n / lambda_m <= ceil(n/m)^2 for q >= 0.
    AbCeil,
    /// lambda_n / lambda_m >= floor(n/m)^2 for q <= 0, lambda_m > 0.
    ChenFloor,
    /// lambda_n / lambda_m <= n^2/m^2 for nonnegative single-well q.
    HkSingleWell,
}

impl CitedBound {
    fn theorem(self) -> TheoremId {
        match self {
            CitedBound::AbN2 => TheoremId::AbN2,
            CitedBound::AbCeil => TheoremId::AbCeil,
            CitedBound::ChenFloor => TheoremId::ChenFloor,
            CitedBound::HkSingleWell => TheoremId::HkSingleWell,
        }
    }
}

/// What a single check is about: an index pair or a z-grid point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Subject {
    Pair { m: usize, n: usize },
    Z { z: f64 },
}

/// One inequality instance, oriented so that lhs >= rhs is the claim.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Check {
    #[serde(flatten)]
    pub subject: Subject,
    pub lhs: f64,
    pub rhs: f64,
    /// lhs - rhs; nonnegative (up to slack) when the claim holds.
    pub margin: f64,
}

/// Tolerances a report was produced with.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Tolerances {
    pub slack: f64,
    pub rel_tol: f64,
    pub z_rel_tol: f64,
    pub oracle_nodes: usize,
    pub shape_tol: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub theorem: TheoremId,
    pub potential: String,
    /// Right endpoint the checks used: the domain end, or x0 for T1, or
    /// the found l0 for T3.
    pub ell: f64,
    pub checks: Vec<Check>,
    /// Subjects excluded by the theorem's eligibility condition; reported
    /// but never asserted.
    pub ineligible: Vec<Subject>,
    pub eligible_count: usize,
    pub pass: bool,
    pub tolerances: Tolerances,
}

impl VerificationReport {
    /// Re-derive `pass` from the listed checks and stored slack.
    pub fn recompute_pass(&self) -> bool {
        self.checks
            .iter()
            .all(|c| margin_ok(c.margin, c.rhs, self.tolerances.slack))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Plot-ready CSV: `z,theta_dot` rows for T1, `m,n,ratio,bound,margin`
    /// rows otherwise. Header only when there are no checks.
    pub fn write_plot_csv(&self, w: &mut impl Write) -> io::Result<()> {
        if self.theorem == TheoremId::T1 {
            writeln!(w, "z,theta_dot")?;
            for c in &self.checks {
                if let Subject::Z { z } = c.subject {
                    writeln!(w, "{z},{}", c.rhs)?;
                }
            }
        } else {
            writeln!(w, "m,n,ratio,bound,margin")?;
            let upper = self.theorem.is_upper();
            for c in &self.checks {
                if let Subject::Pair { m, n } = c.subject {
                    let (ratio, bound) = if upper { (c.rhs, c.lhs) } else { (c.lhs, c.rhs) };
                    writeln!(w, "{m},{n},{ratio},{bound},{}", c.margin)?;
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy)]
pub struct HarnessConfig {
    /// Margin slack; a check passes when margin >= -slack * max(1, |rhs|).
    /// Negative values demand strictly positive margins.
    pub slack: f64,
    pub rel_tol: f64,
    pub z_rel_tol: f64,
    pub oracle_nodes: usize,
    /// Shape-classification tolerance; None picks the potential's default
    /// (0 for sampled grids, a roundoff allowance for analytic families).
    pub shape_tol: Option<f64>,
}

impl Default for HarnessConfig {
    fn default() -> Self {
        HarnessConfig {
            slack: DEFAULT_SLACK,
            rel_tol: prufer::DEFAULT_REL_TOL,
            z_rel_tol: 1e-11,
            oracle_nodes: 100_000,
            shape_tol: None,
        }
    }
}

impl HarnessConfig {
    fn solver_options(&self) -> SolverOptions {
        SolverOptions {
            rel_tol: self.rel_tol,
            z_rel_tol: self.z_rel_tol,
            oracle_nodes: self.oracle_nodes,
        }
    }

    fn shape_tol_for(&self, p: &Potential) -> f64 {
        self.shape_tol.unwrap_or_else(|| p.default_shape_tol())
    }

    fn tolerances(&self, shape_tol: f64) -> Tolerances {
        Tolerances {
            slack: self.slack,
            rel_tol: self.rel_tol,
            z_rel_tol: self.z_rel_tol,
            oracle_nodes: self.oracle_nodes,
            shape_tol,
        }
    }
}

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("{theorem} does not apply: {reason}")]
    IneligiblePotential { theorem: TheoremId, reason: String },
    #[error("invalid parameter: {reason}")]
    InvalidParameter { reason: String },
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Integration(#[from] IntegrationError),
    #[error(transparent)]
    Potential(#[from] PotentialError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

fn margin_ok(margin: f64, rhs: f64, slack: f64) -> bool {
    margin >= -slack * rhs.abs().max(1.0)
}

fn finalize(mut report: VerificationReport) -> VerificationReport {
    report.eligible_count = report.checks.len();
    report.pass = report.recompute_pass();
    report
}

fn barrier_descriptor(p: &Potential, shape: &ShapeReport) -> String {
    if shape.x0_at_boundary {
        format!("{p} (x0 at boundary)")
    } else {
        p.to_string()
    }
}

/// Outcome of the Theorem 3 interval search.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct L0Result {
    /// Largest found l with lambda_1(l) >= -2 min q on [0, l]; certified
    /// at this endpoint.
    pub ell0: f64,
    pub lambda1: f64,
    /// Width of the final bisection bracket: lambda_1 drops below the
    /// threshold somewhere within (ell0, ell0 + gap]. Zero when ell0 is
    /// the full domain.
    pub gap: f64,
}

/// Scaled-phase derivative checks: theta_dot(x0, z) <= 0 on a geometric
/// z-grid of z_count points covering [z0, 4 z0] with z0 = sqrt(-2 q_min)
/// (or pi when q is identically zero, where the claim is vacuous).
pub fn check_theorem1(
    p: &Potential,
    x0: f64,
    z_count: usize,
) -> Result<VerificationReport, HarnessError> {
    check_theorem1_with(p, x0, z_count, &HarnessConfig::default())
}

pub fn check_theorem1_with(
    p: &Potential,
    x0: f64,
    z_count: usize,
    cfg: &HarnessConfig,
) -> Result<VerificationReport, HarnessError> {
    if z_count == 0 {
        return Err(HarnessError::InvalidParameter { reason: "z_count must be >= 1".into() });
    }
    let end = p.domain_end();
    if !(x0.is_finite() && x0 > 0.0 && x0 <= end) {
        return Err(HarnessError::InvalidParameter {
            reason: format!("x0 = {x0} outside (0, {end}]"),
        });
    }
    let tol = cfg.shape_tol_for(p);
    let ineligible = |reason: &str| HarnessError::IneligiblePotential {
        theorem: TheoremId::T1,
        reason: reason.into(),
    };
    if !p.classify(tol).nonpositive {
        return Err(ineligible("potential is not nonpositive"));
    }
    if !p.monotone_nondecreasing_on(0.0, x0, tol)? {
        return Err(ineligible("potential is not nondecreasing on [0, x0]"));
    }

    let q_min = p.min_max(0.0, x0)?.q_min;
    let z0 = if -2.0 * q_min > 0.0 { (-2.0 * q_min).sqrt() } else { std::f64::consts::PI };
    let zs: Vec<f64> = if z_count == 1 {
        vec![z0]
    } else {
        (0..z_count)
            .map(|i| z0 * 4.0_f64.powf(i as f64 / (z_count as f64 - 1.0)))
            .collect()
    };

    let values = par::map_indexed(zs.len(), |i| prufer::theta_dot(p, zs[i], x0, cfg.rel_tol));
    let mut checks = Vec::with_capacity(zs.len());
    for (z, value) in zs.into_iter().zip(values) {
        let td = value?;
        checks.push(Check { subject: Subject::Z { z }, lhs: 0.0, rhs: td, margin: -td });
    }

    Ok(finalize(VerificationReport {
        theorem: TheoremId::T1,
        potential: p.to_string(),
        ell: x0,
        checks,
        ineligible: Vec::new(),
        eligible_count: 0,
        pass: false,
        tolerances: cfg.tolerances(tol),
    }))
}

fn pair_list(theorem: TheoremId, n_max: usize) -> Vec<(usize, usize)> {
    let mut pairs = Vec::new();
    for m in 1..n_max {
        if theorem == TheoremId::AbN2 && m != 1 {
            break;
        }
        for n in (m + 1)..=n_max {
            pairs.push((m, n));
        }
    }
    pairs
}

fn pair_bound(theorem: TheoremId, m: usize, n: usize) -> f64 {
    match theorem {
        TheoremId::T2 | TheoremId::T3 | TheoremId::HkSingleWell => {
            (n * n) as f64 / (m * m) as f64
        }
        TheoremId::T4 => {
            let (a, b) = (2 * n - 1, 2 * m - 1);
            (a * a) as f64 / (b * b) as f64
        }
        TheoremId::AbN2 => (n * n) as f64,
        TheoremId::AbCeil => {
            let c = n.div_ceil(m);
            (c * c) as f64
        }
        TheoremId::ChenFloor => {
            let f = n / m;
            (f * f) as f64
        }
        TheoremId::T1 => unreachable!("T1 has no pair bound"),
    }
}

/// Assemble a ratio-bound report from an already computed spectrum
/// lambda_1..lambda_k (ascending). Pairs with lambda_m below
/// `eligibility_floor` are listed as ineligible; None admits all pairs.
/// T1 is not expressible this way.
pub fn report_from_spectrum(
    theorem: TheoremId,
    potential: &str,
    ell: f64,
    lambdas: &[f64],
    eligibility_floor: Option<f64>,
    cfg: &HarnessConfig,
) -> Result<VerificationReport, HarnessError> {
    if theorem == TheoremId::T1 {
        return Err(HarnessError::InvalidParameter {
            reason: "T1 checks z-grid values, not spectra".into(),
        });
    }
    let mut checks = Vec::new();
    let mut ineligible = Vec::new();
    for (m, n) in pair_list(theorem, lambdas.len()) {
        let lam_m = lambdas[m - 1];
        let lam_n = lambdas[n - 1];
        if eligibility_floor.is_some_and(|floor| lam_m < floor) {
            ineligible.push(Subject::Pair { m, n });
            continue;
        }
        let ratio = lam_n / lam_m;
        let bound = pair_bound(theorem, m, n);
        let (lhs, rhs) = if theorem.is_upper() { (bound, ratio) } else { (ratio, bound) };
        checks.push(Check { subject: Subject::Pair { m, n }, lhs, rhs, margin: lhs - rhs });
    }
    Ok(finalize(VerificationReport {
        theorem,
        potential: potential.to_string(),
        ell,
        checks,
        ineligible,
        eligible_count: 0,
        pass: false,
        tolerances: cfg.tolerances(f64::NAN),
    }))
}

/// Dirichlet ratio bound lambda_n/lambda_m >= n^2/m^2 for nonpositive
/// single-barrier potentials, on pairs with lambda_m >= -2 q_min.
pub fn check_theorem2(p: &Potential, n_max: usize) -> Result<VerificationReport, HarnessError> {
    check_theorem2_with(p, n_max, &HarnessConfig::default())
}

pub fn check_theorem2_with(
    p: &Potential,
    n_max: usize,
    cfg: &HarnessConfig,
) -> Result<VerificationReport, HarnessError> {
    let (shape, tol) = require_barrier(p, TheoremId::T2, cfg)?;
    let end = p.domain_end();
    let floor = -2.0 * p.min_max(0.0, end)?.q_min;
    let records = eigensolver::solve_range_with(
        p,
        n_max,
        BoundaryCondition::Dirichlet,
        end,
        &cfg.solver_options(),
    )?;
    let lambdas: Vec<f64> = records.iter().map(|r| r.lambda).collect();
    let mut report = report_from_spectrum(
        TheoremId::T2,
        &barrier_descriptor(p, &shape),
        end,
        &lambdas,
        Some(floor),
        cfg,
    )?;
    report.tolerances.shape_tol = tol;
    Ok(report)
}

fn require_barrier(
    p: &Potential,
    theorem: TheoremId,
    cfg: &HarnessConfig,
) -> Result<(ShapeReport, f64), HarnessError> {
    let tol = cfg.shape_tol_for(p);
    let shape = p.classify(tol);
    let ineligible = |reason: &str| HarnessError::IneligiblePotential {
        theorem,
        reason: reason.into(),
    };
    if !shape.nonpositive {
        return Err(ineligible("potential is not nonpositive"));
    }
    if shape.single_barrier.is_none() {
        return Err(ineligible("potential is not single-barrier"));
    }
    Ok((shape, tol))
}

fn lambda1_at(p: &Potential, ell: f64, opts: &SolverOptions) -> Result<f64, HarnessError> {
    match eigensolver::solve_one_with(p, 1, BoundaryCondition::Dirichlet, ell, opts) {
        Ok(rec) => Ok(rec.lambda),
        Err(SolveError::NegativeSpectrumSuspected { .. }) => Ok(oracle::refined_eigenvalue(
            p,
            ell,
            1,
            L0_ORACLE_NODES,
            BoundaryCondition::Dirichlet,
        )?),
        Err(e) => Err(e.into()),
    }
}

/// Search for the largest l with lambda_1(l) >= -2 min q on [0, l]: below
/// that l every index pair satisfies the Theorem 2 eligibility condition.
/// Scans `grid` points, then bisects; the returned endpoint is certified
/// (the inequality was evaluated and held there).
pub fn find_l0(p: &Potential, grid: usize) -> Result<L0Result, HarnessError> {
    find_l0_with(p, grid, &HarnessConfig::default())
}

pub fn find_l0_with(
    p: &Potential,
    grid: usize,
    cfg: &HarnessConfig,
) -> Result<L0Result, HarnessError> {
    if grid == 0 {
        return Err(HarnessError::InvalidParameter { reason: "grid must be >= 1".into() });
    }
    require_barrier(p, TheoremId::T3, cfg)?;
    let opts = cfg.solver_options();
    let end = p.domain_end();
    // surplus(l) >= 0 exactly when l qualifies
    let surplus = |ell: f64| -> Result<(f64, f64), HarnessError> {
        let lam1 = lambda1_at(p, ell, &opts)?;
        let q_min = p.min_max(0.0, ell)?.q_min;
        Ok((lam1 + 2.0 * q_min, lam1))
    };

    let (g_end, lam_end) = surplus(end)?;
    if g_end >= 0.0 {
        return Ok(L0Result { ell0: end, lambda1: lam_end, gap: 0.0 });
    }

    // Largest grid point that qualifies; lambda_1(l) grows like 1/l^2 as
    // l shrinks while the threshold stays bounded, so halving must
    // eventually find a qualifying l.
    let mut lo = 0.0;
    let mut lam_lo = f64::NAN;
    let mut hi = end;
    for j in (1..grid).rev() {
        let ell = end * j as f64 / grid as f64;
        let (g, lam) = surplus(ell)?;
        if g >= 0.0 {
            (lo, lam_lo) = (ell, lam);
            break;
        }
        hi = ell;
    }
    if lo == 0.0 {
        let mut ell = hi;
        for _ in 0..60 {
            ell /= 2.0;
            let (g, lam) = surplus(ell)?;
            if g >= 0.0 {
                (lo, lam_lo) = (ell, lam);
                break;
            }
            hi = ell;
        }
        if lo == 0.0 {
            return Err(HarnessError::InvalidParameter {
                reason: "l0 search collapsed to zero length".into(),
            });
        }
    }

    while hi - lo > L0_BISECT_TOL {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let (g, lam) = surplus(mid)?;
        if g >= 0.0 {
            (lo, lam_lo) = (mid, lam);
        } else {
            hi = mid;
        }
    }
    Ok(L0Result { ell0: lo, lambda1: lam_lo, gap: hi - lo })
}

/// Theorem 2's ratio bound asserted for ALL pairs on the interval
/// [0, l0] found by [`find_l0`].
pub fn check_theorem3(p: &Potential, n_max: usize) -> Result<VerificationReport, HarnessError> {
    check_theorem3_with(p, n_max, &HarnessConfig::default())
}

pub fn check_theorem3_with(
    p: &Potential,
    n_max: usize,
    cfg: &HarnessConfig,
) -> Result<VerificationReport, HarnessError> {
    let (shape, tol) = require_barrier(p, TheoremId::T3, cfg)?;
    let l0 = find_l0_with(p, 32, cfg)?;
    let records = eigensolver::solve_range_with(
        p,
        n_max,
        BoundaryCondition::Dirichlet,
        l0.ell0,
        &cfg.solver_options(),
    )?;
    let lambdas: Vec<f64> = records.iter().map(|r| r.lambda).collect();
    let mut report = report_from_spectrum(
        TheoremId::T3,
        &barrier_descriptor(p, &shape),
        l0.ell0,
        &lambdas,
        None,
        cfg,
    )?;
    report.tolerances.shape_tol = tol;
    Ok(report)
}

/// Dirichlet-Neumann odd-square ratio bound for nonpositive nondecreasing
/// potentials, on pairs with lambda_m >= -2 q_min.
pub fn check_theorem4(p: &Potential, n_max: usize) -> Result<VerificationReport, HarnessError> {
    check_theorem4_with(p, n_max, &HarnessConfig::default())
}

pub fn check_theorem4_with(
    p: &Potential,
    n_max: usize,
    cfg: &HarnessConfig,
) -> Result<VerificationReport, HarnessError> {
    let tol = cfg.shape_tol_for(p);
    let shape = p.classify(tol);
    let ineligible = |reason: &str| HarnessError::IneligiblePotential {
        theorem: TheoremId::T4,
        reason: reason.into(),
    };
    if !shape.nonpositive {
        return Err(ineligible("potential is not nonpositive"));
    }
    if !shape.monotone_increasing {
        return Err(ineligible("potential is not nondecreasing"));
    }
    let end = p.domain_end();
    let floor = -2.0 * p.min_max(0.0, end)?.q_min;
    let records = eigensolver::solve_range_with(
        p,
        n_max,
        BoundaryCondition::DirichletNeumann,
        end,
        &cfg.solver_options(),
    )?;
    let lambdas: Vec<f64> = records.iter().map(|r| r.lambda).collect();
    let mut report =
        report_from_spectrum(TheoremId::T4, &p.to_string(), end, &lambdas, Some(floor), cfg)?;
    report.tolerances.shape_tol = tol;
    Ok(report)
}

/// One of the classical bounds; the potential must satisfy the selected
/// bound's sign/shape hypothesis.
pub fn check_cited_bounds(
    p: &Potential,
    n_max: usize,
    which: CitedBound,
) -> Result<VerificationReport, HarnessError> {
    check_cited_bounds_with(p, n_max, which, &HarnessConfig::default())
}

pub fn check_cited_bounds_with(
    p: &Potential,
    n_max: usize,
    which: CitedBound,
    cfg: &HarnessConfig,
) -> Result<VerificationReport, HarnessError> {
    let theorem = which.theorem();
    let tol = cfg.shape_tol_for(p);
    let shape = p.classify(tol);
    let end = p.domain_end();
    let ext = p.min_max(0.0, end)?;
    let ineligible = |reason: &str| HarnessError::IneligiblePotential {
        theorem,
        reason: reason.into(),
    };

    let mut descriptor = p.to_string();
    let mut floor = None;
    match which {
        CitedBound::AbN2 | CitedBound::AbCeil => {
            if ext.q_min < -tol {
                return Err(ineligible("potential is not nonnegative"));
            }
        }
        CitedBound::ChenFloor => {
            if !shape.nonpositive {
                return Err(ineligible("potential is not nonpositive"));
            }
            // the ratio bound only makes sense above zero
            floor = Some(f64::MIN_POSITIVE);
        }
        CitedBound::HkSingleWell => {
            if ext.q_min < -tol {
                return Err(ineligible("potential is not nonnegative"));
            }
            if shape.single_well.is_none() {
                return Err(ineligible("potential is not single-well"));
            }
            descriptor = barrier_descriptor(p, &shape);
        }
    }

    let records = eigensolver::solve_range_with(
        p,
        n_max,
        BoundaryCondition::Dirichlet,
        end,
        &cfg.solver_options(),
    )?;
    let lambdas: Vec<f64> = records.iter().map(|r| r.lambda).collect();
    let mut report = report_from_spectrum(theorem, &descriptor, end, &lambdas, floor, cfg)?;
    report.tolerances.shape_tol = tol;
    Ok(report)
}
