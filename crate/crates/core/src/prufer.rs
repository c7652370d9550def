//! Modified Pruefer phase flow.
//!
//! Writing y = r sin(phi), y' = z r cos(phi) with lambda = z^2, z > 0,
//! the equation -y'' + q y = lambda y becomes
//!
//! ```text
//! phi'     = z - (q/z) sin^2(phi)
//! (ln r)'  = (q/z) sin(phi) cos(phi)
//! ```
//!
//! together with the z-derivative of the phase (phi_dot = d phi / d z):
//!
//! ```text
//! phi_dot' = 1 + (q/z^2) sin^2(phi) - (q/z) sin(2 phi) phi_dot
//! ```
//!
//! started from phi(0) = 0, ln r(0) = -ln z, phi_dot(0) = 0. The scaled
//! phase theta = phi / z and its z-derivative are what the monotonicity
//! checks consume. All three components are integrated jointly by an
//! adaptive Dormand-Prince 5(4) pair with PI-free step control.

use thiserror::Error;

use crate::potential::Potential;

/// Default relative tolerance for the adaptive integrator.
pub const DEFAULT_REL_TOL: f64 = 1e-10;

/// Absolute floor in the per-component error scale, so components passing
/// through zero do not stall the controller.
pub const ABS_TOL_FLOOR: f64 = 1e-12;

/// Controller steps below this abort with [`IntegrationError::StepUnderflow`].
pub const MIN_STEP: f64 = 1e-14;

const SAFETY: f64 = 0.9;
const FAC_MIN: f64 = 0.2;
const FAC_MAX: f64 = 5.0;

#[derive(Debug, Error)]
pub enum IntegrationError {
    #[error("z must be positive and finite, got {z}")]
    NonPositiveZ { z: f64 },
    #[error("relative tolerance must be positive and finite, got {tol}")]
    NonPositiveTolerance { tol: f64 },
    #[error("integration endpoint {x} outside [{from}, {end}]")]
    BadEndpoint { x: f64, from: f64, end: f64 },
    #[error("step size underflow at x = {x} (h = {h:e})")]
    StepUnderflow { x: f64, h: f64 },
}

/// Phase-flow state at a point x.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrueferState {
    pub x: f64,
    pub phi: f64,
    pub log_r: f64,
    /// d phi / d z at fixed x.
    pub phi_dot: f64,
}

impl PrueferState {
    /// State at x = 0 for spectral parameter z (must be positive).
    pub fn initial(z: f64) -> Self {
        PrueferState { x: 0.0, phi: 0.0, log_r: -z.ln(), phi_dot: 0.0 }
    }

    /// Scaled phase theta = phi / z.
    pub fn theta(&self, z: f64) -> f64 {
        self.phi / z
    }

    /// d theta / d z = (phi_dot z - phi) / z^2.
    pub fn theta_dot(&self, z: f64) -> f64 {
        (self.phi_dot * z - self.phi) / (z * z)
    }

    /// y(x) = r sin(phi).
    pub fn eigenfunction_value(&self) -> f64 {
        self.log_r.exp() * self.phi.sin()
    }
}

fn deriv(p: &Potential, z: f64, x: f64, y: &[f64; 3]) -> [f64; 3] {
    let q = p.eval_clamped(x);
    let (s, c) = y[0].sin_cos();
    let qz = q / z;
    [
        z - qz * s * s,
        qz * s * c,
        1.0 + qz / z * s * s - 2.0 * qz * s * c * y[2],
    ]
}

// Dormand-Prince 5(4) tableau. The seventh stage sits at the step end and
// feeds only the embedded error estimate (no FSAL reuse here).
const A2: [f64; 1] = [1.0 / 5.0];
const A3: [f64; 2] = [3.0 / 40.0, 9.0 / 40.0];
const A4: [f64; 3] = [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0];
const A5: [f64; 4] = [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0];
const A6: [f64; 5] = [
    9017.0 / 3168.0,
    -355.0 / 33.0,
    46732.0 / 5247.0,
    49.0 / 176.0,
    -5103.0 / 18656.0,
];
const B: [f64; 6] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
];
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];
const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];

struct Attempt {
    y_new: [f64; 3],
    err: f64,
}

fn dopri_step(p: &Potential, z: f64, x: f64, y: &[f64; 3], h: f64, rel_tol: f64) -> Attempt {
    let k1 = deriv(p, z, x, y);
    let at = |coef: &[f64], ks: &[[f64; 3]]| {
        let mut yy = *y;
        for (c, k) in coef.iter().zip(ks) {
            for i in 0..3 {
                yy[i] += h * c * k[i];
            }
        }
        yy
    };
    let k2 = deriv(p, z, x + C[1] * h, &at(&A2, &[k1]));
    let k3 = deriv(p, z, x + C[2] * h, &at(&A3, &[k1, k2]));
    let k4 = deriv(p, z, x + C[3] * h, &at(&A4, &[k1, k2, k3]));
    let k5 = deriv(p, z, x + C[4] * h, &at(&A5, &[k1, k2, k3, k4]));
    let k6 = deriv(p, z, x + C[5] * h, &at(&A6, &[k1, k2, k3, k4, k5]));
    let y_new = at(&B, &[k1, k2, k3, k4, k5, k6]);
    let k7 = deriv(p, z, x + h, &y_new);

    let ks = [k1, k2, k3, k4, k5, k6, k7];
    let mut err_sq = 0.0;
    for i in 0..3 {
        let e_i: f64 = (0..7).map(|s| E[s] * ks[s][i]).sum::<f64>() * h;
        let sc = ABS_TOL_FLOOR + rel_tol * y[i].abs().max(y_new[i].abs());
        err_sq += (e_i / sc) * (e_i / sc);
    }
    Attempt { y_new, err: (err_sq / 3.0).sqrt() }
}

/// Advance a state to x_end. Sample-grid nodes in between become forced
/// step boundaries, so the right-hand side stays smooth within every step.
pub(crate) fn integrate_from(
    p: &Potential,
    z: f64,
    state: PrueferState,
    x_end: f64,
    rel_tol: f64,
) -> Result<PrueferState, IntegrationError> {
    if !(z.is_finite() && z > 0.0) {
        return Err(IntegrationError::NonPositiveZ { z });
    }
    if !(rel_tol.is_finite() && rel_tol > 0.0) {
        return Err(IntegrationError::NonPositiveTolerance { tol: rel_tol });
    }
    let end = p.domain_end();
    if !(x_end.is_finite() && x_end >= state.x && x_end <= end) {
        return Err(IntegrationError::BadEndpoint { x: x_end, from: state.x, end });
    }
    if x_end - state.x <= MIN_STEP {
        return Ok(PrueferState { x: x_end, ..state });
    }

    let mut x = state.x;
    let mut y = [state.phi, state.log_r, state.phi_dot];
    let mut h_ctrl = (x_end - x).min(0.1 / z);

    let mut stops = p.interior_nodes(x, x_end);
    stops.push(x_end);

    for stop in stops {
        while stop - x > MIN_STEP {
            if h_ctrl < MIN_STEP {
                return Err(IntegrationError::StepUnderflow { x, h: h_ctrl });
            }
            let clamped = h_ctrl >= stop - x;
            let h = if clamped { stop - x } else { h_ctrl };
            let attempt = dopri_step(p, z, x, &y, h, rel_tol);
            if attempt.err.is_finite() && attempt.err <= 1.0 {
                x += h;
                y = attempt.y_new;
                if !clamped {
                    let fac = (SAFETY * attempt.err.powf(-0.2)).clamp(FAC_MIN, FAC_MAX);
                    h_ctrl = h * fac;
                }
            } else {
                let fac = if attempt.err.is_finite() {
                    (SAFETY * attempt.err.powf(-0.2)).clamp(FAC_MIN, 1.0)
                } else {
                    FAC_MIN
                };
                h_ctrl = h * fac;
            }
        }
        x = stop;
    }

    Ok(PrueferState { x: x_end, phi: y[0], log_r: y[1], phi_dot: y[2] })
}

/// Integrate the phase flow from 0 to x_end for spectral parameter z.
pub fn integrate_phase(
    p: &Potential,
    z: f64,
    x_end: f64,
    rel_tol: f64,
) -> Result<PrueferState, IntegrationError> {
    if !(z.is_finite() && z > 0.0) {
        return Err(IntegrationError::NonPositiveZ { z });
    }
    integrate_from(p, z, PrueferState::initial(z), x_end, rel_tol)
}

/// Scaled phase theta(x_end, z) = phi(x_end, z) / z.
pub fn theta(p: &Potential, z: f64, x_end: f64, rel_tol: f64) -> Result<f64, IntegrationError> {
    Ok(integrate_phase(p, z, x_end, rel_tol)?.theta(z))
}

/// d theta / d z at (x0, z), from the jointly integrated variational
/// component rather than finite differences.
pub fn theta_dot(p: &Potential, z: f64, x0: f64, rel_tol: f64) -> Result<f64, IntegrationError> {
    Ok(integrate_phase(p, z, x0, rel_tol)?.theta_dot(z))
}

/// Eigenfunction samples y(x) = r sin(phi) on a nondecreasing grid in
/// [0, domain_end]. One integration pass serves all grid points.
pub fn eigenfunction_trace(
    p: &Potential,
    z: f64,
    grid: &[f64],
    rel_tol: f64,
) -> Result<Vec<(f64, f64)>, IntegrationError> {
    if !(z.is_finite() && z > 0.0) {
        return Err(IntegrationError::NonPositiveZ { z });
    }
    let mut state = PrueferState::initial(z);
    let mut out = Vec::with_capacity(grid.len());
    for &x in grid {
        state = integrate_from(p, z, state, x, rel_tol)?;
        out.push((x, state.eigenfunction_value()));
    }
    Ok(out)
}
