//! Phase and eigenvalue values pinned against independent oracles: a
//! fixed-step RK4 integration (support module) and the finite-difference
//! eigensolver. The frozen constants below were produced by the ignored
//! regenerator test at the bottom; rerun it with
//!   cargo test -p sturm-core --test derived_values -- --ignored --nocapture
//! and paste its output here if the oracle definitions ever change.

#![allow(clippy::excessive_precision)]

mod support;

use std::f64::consts::PI;

use sturm_core::eigensolver::{solve_one, BoundaryCondition};
use sturm_core::oracle::refined_eigenvalue_detailed;
use sturm_core::potential::Potential;
use sturm_core::prufer::{integrate_phase, eigenfunction_trace, theta_dot};

const ORACLE_STEPS: usize = 1_000_000;

/// phi(1, z=4) for barrier_sin(-5, 4), fixed-step RK4, step 1e-6.
const PHI_BARRIER_Z4: f64 = 4.22674763190120828e0;

/// First Dirichlet eigenvalue of barrier_sin(-5, 4) on [0, 1] from the
/// Richardson-refined finite-difference oracle at 100_000 nodes.
const LAMBDA1_BARRIER: f64 = 8.25896346371985324e0;

/// y(x) = exp(log r) sin(phi) at x = 0, 0.1, .., 1.0 for
/// barrier_sin(-5, 4) at z = sqrt(LAMBDA1_BARRIER), RK4 oracle.
const TRACE_BARRIER: [f64; 11] = [
    0.00000000000000000e0,
    9.79074675669418387e-2,
    1.84335082531408484e-1,
    2.50932663606724948e-1,
    2.92590299118891561e-1,
    3.06730303117846825e-1,
    2.92590299118793085e-1,
    2.50932663606600104e-1,
    1.84335082531296351e-1,
    9.79074675668107075e-2,
    -1.85391099555264869e-13,
];

fn barrier() -> Potential {
    Potential::barrier_sin(-5.0, 4.0)
}

#[test]
fn free_phase_is_linear_in_x() {
    let p = Potential::constant(0.0);
    let s = integrate_phase(&p, PI, 1.0, 1e-10).unwrap();
    assert!((s.phi - PI).abs() < 1e-10, "phi = {}", s.phi);
    assert!((s.phi_dot - 1.0).abs() < 1e-10, "phi_dot = {}", s.phi_dot);
    assert!((s.log_r + PI.ln()).abs() < 1e-10, "log_r = {}", s.log_r);

    let s = integrate_phase(&p, 2.5, 0.4, 1e-10).unwrap();
    assert!((s.phi - 1.0).abs() < 1e-10, "phi = {}", s.phi);
}

#[test]
fn shifted_constant_phase_reaches_pi() {
    let p = Potential::constant(-3.0);
    let z = (PI * PI - 3.0).sqrt();
    let s = integrate_phase(&p, z, 1.0, 1e-10).unwrap();
    assert!((s.phi - PI).abs() < 1e-9, "phi = {}", s.phi);
}

#[test]
fn barrier_phase_matches_frozen_oracle() {
    let s = integrate_phase(&barrier(), 4.0, 1.0, 1e-11).unwrap();
    assert!(
        (s.phi - PHI_BARRIER_Z4).abs() < 1e-8,
        "phi = {} frozen = {PHI_BARRIER_Z4}",
        s.phi
    );
}

#[test]
fn scaled_phase_examples() {
    let p = Potential::constant(0.0);
    let s = integrate_phase(&p, 2.0, 0.7, 1e-10).unwrap();
    assert!((s.theta(2.0) - 0.7).abs() < 1e-10);
    assert!((s.phi / 2.0 - s.theta(2.0)).abs() == 0.0);
}

#[test]
fn sensitivity_sign_and_finite_difference_cross_check() {
    let cases = [
        (Potential::constant(-2.0), 2.0),
        (Potential::ramp(-2.0, 2.0), 3.0),
    ];
    for (p, z) in cases {
        let td = theta_dot(&p, z, 1.0, 1e-10).unwrap();
        assert!(td <= 1e-8, "theta_dot = {td}");

        let h = 1e-5;
        let phi_hi = support::rk4_phase(&p, z + h, 1.0, 4000)[0];
        let phi_lo = support::rk4_phase(&p, z - h, 1.0, 4000)[0];
        let fd = (phi_hi / (z + h) - phi_lo / (z - h)) / (2.0 * h);
        assert!((td - fd).abs() < 1e-6, "theta_dot = {td} fd = {fd}");
    }
    let td = theta_dot(&Potential::constant(-2.0), 2.0, 1.0, 1e-10).unwrap();
    assert!(td < -1e-4, "expected strictly negative, got {td}");
}

#[test]
fn free_eigenfunction_trace() {
    let p = Potential::constant(0.0);
    let pts = eigenfunction_trace(&p, PI, &[0.0, 0.5, 1.0], 1e-10).unwrap();
    assert_eq!(pts[0].1, 0.0);
    assert!((pts[1].1 - 1.0 / PI).abs() < 1e-10);
    assert!(pts[2].1.abs() < 1e-9);

    let pts = eigenfunction_trace(&p, 2.0 * PI, &[0.25], 1e-10).unwrap();
    assert!((pts[0].1 - 1.0 / (2.0 * PI)).abs() < 1e-10);
}

#[test]
fn barrier_first_eigenfunction_is_positive_inside() {
    let z1 = LAMBDA1_BARRIER.sqrt();
    let grid: Vec<f64> = (0..=10).map(|i| i as f64 / 10.0).collect();
    let pts = eigenfunction_trace(&barrier(), z1, &grid, 1e-11).unwrap();
    assert_eq!(pts[0].1, 0.0);
    for (i, &(x, y)) in pts.iter().enumerate() {
        if i > 0 && i < 10 {
            assert!(y > 0.0, "y({x}) = {y}");
        }
        assert!(
            (y - TRACE_BARRIER[i]).abs() < 1e-8,
            "y({x}) = {y} frozen = {}",
            TRACE_BARRIER[i]
        );
    }
    assert!(pts[10].1.abs() < 1e-6, "endpoint y = {}", pts[10].1);
}

#[test]
fn barrier_lambda1_shooting_matches_fd_oracle() {
    let rec = solve_one(&barrier(), 1, BoundaryCondition::Dirichlet, 1.0, 1e-11).unwrap();
    assert!(
        support::rel_err(rec.lambda, LAMBDA1_BARRIER) < 1e-8,
        "lambda = {} frozen = {LAMBDA1_BARRIER}",
        rec.lambda
    );
}

#[test]
#[ignore]
fn regenerate_frozen_values() {
    let p = barrier();
    let phi = support::rk4_phase(&p, 4.0, 1.0, ORACLE_STEPS)[0];
    println!("const PHI_BARRIER_Z4: f64 = {phi:.17e};");

    let r = refined_eigenvalue_detailed(&p, 1.0, 1, 100_000, BoundaryCondition::Dirichlet)
        .unwrap();
    println!("const LAMBDA1_BARRIER: f64 = {:.17e}; // gap {:.3e}", r.lambda, r.gap);

    let z1 = r.lambda.sqrt();
    print!("const TRACE_BARRIER: [f64; 11] = [");
    for i in 0..=10 {
        let x = i as f64 / 10.0;
        let y = if i == 0 {
            0.0
        } else {
            let s = support::rk4_phase(&p, z1, x, (ORACLE_STEPS as f64 * x) as usize);
            s[1].exp() * s[0].sin()
        };
        print!("{}{y:.17e}", if i == 0 { "" } else { ", " });
    }
    println!("];");
}
