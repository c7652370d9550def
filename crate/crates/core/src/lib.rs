//! Sturm-Liouville eigenvalues on an interval, and machine verification of
//! eigenvalue-ratio bounds.
//!
//! The operator is -y'' + q(x) y = lambda y on [0, l] with l in (0, 1],
//! under Dirichlet (y(0) = y(l) = 0) or Dirichlet-Neumann
//! (y(0) = y'(l) = 0) conditions. Two independent routes compute the
//! spectrum:
//!
//! * [`eigensolver`]: shooting on the phase of a modified Pruefer
//!   transformation, integrated by an adaptive embedded Runge-Kutta pair;
//! * [`oracle`]: a symmetric finite-difference discretization whose
//!   eigenvalues come from Sturm-sequence bisection, sharpened by
//!   Richardson extrapolation.
//!
//! On top of the solvers, [`theorems`] checks families of ratio
//! inequalities (lower bounds for nonpositive single-barrier or monotone
//! potentials, classical upper and lower bounds for signed ones) and
//! reports every margin, so a claimed inequality is either verified on the
//! spot or visibly fails.
//!
//! Everything is deterministic: given the same inputs and tolerances, the
//! same bits come out, with or without the `parallel` feature.

pub mod eigensolver;
pub mod oracle;
mod par;
pub mod potential;
pub mod prufer;
pub mod theorems;

pub use eigensolver::{BoundaryCondition, EigenvalueRecord, Method, SolveError, SolverOptions};
pub use oracle::{FdProblem, OracleError};
pub use potential::{Extrema, Family, Potential, PotentialError, ShapeReport};
pub use prufer::{IntegrationError, PrueferState};
pub use theorems::{
    Check, CitedBound, HarnessConfig, HarnessError, L0Result, Subject, TheoremId,
    VerificationReport,
};
