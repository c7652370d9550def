//! Independent cross-check machinery for the integration tests: a
//! fixed-step RK4 integration of the phase system (coded separately from
//! the library's adaptive integrator), a dense Jacobi eigensolver, and a
//! seeded generator of single-barrier sample grids.

#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use sturm_core::potential::Potential;

pub fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn rhs(p: &Potential, z: f64, x: f64, y: [f64; 3]) -> [f64; 3] {
    let xc = x.clamp(0.0, p.domain_end());
    let q = p.eval(xc).expect("clamped point is in domain");
    let s = y[0].sin();
    let c = y[0].cos();
    [
        z - q / z * s * s,
        q / z * s * c,
        1.0 + q / (z * z) * s * s - q / z * (2.0 * s * c) * y[2],
    ]
}

/// Classic fixed-step RK4 over [0, x_end] for [phi, ln r, d phi/d z].
pub fn rk4_phase(p: &Potential, z: f64, x_end: f64, n_steps: usize) -> [f64; 3] {
    let h = x_end / n_steps as f64;
    let mut y = [0.0, -z.ln(), 0.0];
    let mut x = 0.0;
    for _ in 0..n_steps {
        let k1 = rhs(p, z, x, y);
        let y2 = add_scaled(y, k1, h / 2.0);
        let k2 = rhs(p, z, x + h / 2.0, y2);
        let y3 = add_scaled(y, k2, h / 2.0);
        let k3 = rhs(p, z, x + h / 2.0, y3);
        let y4 = add_scaled(y, k3, h);
        let k4 = rhs(p, z, x + h, y4);
        for i in 0..3 {
            y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        x += h;
    }
    y
}

fn add_scaled(y: [f64; 3], k: [f64; 3], f: f64) -> [f64; 3] {
    [y[0] + f * k[0], y[1] + f * k[1], y[2] + f * k[2]]
}

/// d phi/d z by central differences of the fixed-step phase. The fixed
/// step makes the truncation error a smooth function of z, so it cancels
/// in the difference instead of being amplified by 1/h_z.
pub fn fd_phi_dot(p: &Potential, z: f64, x_end: f64, h_z: f64, n_steps: usize) -> f64 {
    let hi = rk4_phase(p, z + h_z, x_end, n_steps)[0];
    let lo = rk4_phase(p, z - h_z, x_end, n_steps)[0];
    (hi - lo) / (2.0 * h_z)
}

/// All eigenvalues of a symmetric tridiagonal matrix by cyclic Jacobi
/// rotations on the dense form, ascending. Intended for dimensions <= 16.
pub fn dense_eigenvalues(diag: &[f64], off: &[f64]) -> Vec<f64> {
    let n = diag.len();
    assert_eq!(off.len() + 1, n);
    let mut a = vec![vec![0.0_f64; n]; n];
    for i in 0..n {
        a[i][i] = diag[i];
    }
    for i in 0..n - 1 {
        a[i][i + 1] = off[i];
        a[i + 1][i] = off[i];
    }
    let scale = diag
        .iter()
        .chain(off)
        .map(|v| v.abs())
        .fold(1.0_f64, f64::max);
    for _ in 0..200 {
        let mut off_norm = 0.0;
        for (i, row) in a.iter().enumerate() {
            for v in &row[i + 1..] {
                off_norm += v * v;
            }
        }
        if off_norm.sqrt() <= 1e-14 * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p][q];
                if apq.abs() <= 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for row in &mut a {
                    let akp = row[p];
                    let akq = row[q];
                    row[p] = c * akp - s * akq;
                    row[q] = s * akp + c * akq;
                }
                let (top, bottom) = a.split_at_mut(q);
                for (apk, aqk) in top[p].iter_mut().zip(bottom[0].iter_mut()) {
                    let x = *apk;
                    let y = *aqk;
                    *apk = c * x - s * y;
                    *aqk = s * x + c * y;
                }
            }
        }
    }
    let mut eigs: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
    eigs.sort_by(f64::total_cmp);
    eigs
}

/// Random nonpositive single-barrier sample grid: node values rise to a
/// peak and fall after it, all within [-6, -0.3]. That floor keeps
/// lambda_1 >= pi^2 - 6 > 0, so the whole spectrum is reachable by
/// shooting.
pub fn random_single_barrier(rng: &mut ChaCha8Rng, interior: usize) -> Potential {
    let n = interior + 2;
    let mut xs = vec![0.0];
    for i in 1..=interior {
        let base = i as f64 / (interior + 1) as f64;
        let jitter = (rng.gen::<f64>() - 0.5) * 0.8 / (interior + 1) as f64;
        xs.push(base + jitter);
    }
    xs.push(1.0);

    let peak_idx = rng.gen_range(0..n);
    let v_peak = -0.3 - 1.2 * rng.gen::<f64>();
    let v_left = v_peak - rng.gen::<f64>() * (v_peak + 6.0);
    let v_right = v_peak - rng.gen::<f64>() * (v_peak + 6.0);

    let mut values = Vec::with_capacity(n);
    let mut left: Vec<f64> = (0..peak_idx)
        .map(|_| v_left + (v_peak - v_left) * rng.gen::<f64>())
        .collect();
    left.sort_by(f64::total_cmp);
    values.extend(left);
    values.push(v_peak);
    let mut right: Vec<f64> = (0..n - 1 - peak_idx)
        .map(|_| v_right + (v_peak - v_right) * rng.gen::<f64>())
        .collect();
    right.sort_by(|a, b| f64::total_cmp(b, a));
    values.extend(right);

    let samples: Vec<(f64, f64)> = xs.into_iter().zip(values).collect();
    Potential::from_samples(&samples).expect("generated grid is valid")
}
