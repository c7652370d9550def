//! Property tests for the structural invariants: shape classification
//! stability, extrema bounds, phase monotonicity and bounds, counting
//! against a dense eigensolver, and solver equivariances.

mod support;

use std::f64::consts::PI;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sturm_core::eigensolver::{solve_one, BoundaryCondition};
use sturm_core::oracle::FdProblem;
use sturm_core::potential::{Family, Potential};
use sturm_core::prufer::integrate_phase;

fn barrier_from_seed(seed: u64, interior: usize) -> Potential {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    support::random_single_barrier(&mut rng, interior)
}

fn mapped_samples(p: &Potential, f: impl Fn(f64) -> f64) -> Potential {
    let Family::Sampled { xs, qs } = p.family() else {
        panic!("expected a sampled potential");
    };
    let samples: Vec<(f64, f64)> = xs.iter().zip(qs).map(|(&x, &q)| (x, f(q))).collect();
    Potential::from_samples(&samples).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn barrier_shape_survives_constant_shift(
        seed in any::<u64>(),
        interior in 1usize..6,
        c in -3.0f64..3.0,
    ) {
        let p = barrier_from_seed(seed, interior);
        let shape = p.classify(0.0);
        prop_assert!(shape.single_barrier.is_some());

        let shifted = mapped_samples(&p, |q| q + c);
        let shifted_shape = shifted.classify(0.0);
        prop_assert!(shifted_shape.single_barrier.is_some());
        let (x0_a, x0_b) = (shape.single_barrier.unwrap(), shifted_shape.single_barrier.unwrap());
        prop_assert!((x0_a - x0_b).abs() < 1e-9);

        let a = p.min_max(0.0, 1.0).unwrap();
        let b = shifted.min_max(0.0, 1.0).unwrap();
        prop_assert!((b.q_min - (a.q_min + c)).abs() < 1e-12);
        prop_assert!((b.q_max - (a.q_max + c)).abs() < 1e-12);
    }

    #[test]
    fn extrema_bound_pointwise_values(
        coeffs in prop::collection::vec(-3.0f64..3.0, 1..5),
        xs in prop::collection::vec(0.0f64..=1.0, 20),
    ) {
        let p = Potential::poly(coeffs.clone());
        let ext = p.min_max(0.0, 1.0).unwrap();
        for &x in &xs {
            let v = p.eval(x).unwrap();
            prop_assert!(v >= ext.q_min - 1e-5, "q({x}) = {v} below {}", ext.q_min);
            prop_assert!(v <= ext.q_max + 1e-5, "q({x}) = {v} above {}", ext.q_max);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 12, ..ProptestConfig::default() })]

    #[test]
    fn phase_increases_with_z_for_nonpositive_q(
        seed in any::<u64>(),
        interior in 1usize..5,
        z1 in 0.5f64..12.0,
        dz in 0.05f64..3.0,
    ) {
        let p = barrier_from_seed(seed, interior);
        let z2 = z1 + dz;
        let phi1 = integrate_phase(&p, z1, 1.0, 1e-9).unwrap().phi;
        let phi2 = integrate_phase(&p, z2, 1.0, 1e-9).unwrap().phi;
        prop_assert!(phi2 > phi1 + 1e-9, "phi({z2}) = {phi2} vs phi({z1}) = {phi1}");
    }

    #[test]
    fn phase_bounded_by_free_comparison(
        seed in any::<u64>(),
        interior in 1usize..5,
        z in 0.5f64..12.0,
    ) {
        let p = barrier_from_seed(seed, interior);
        let ext = p.min_max(0.0, 1.0).unwrap();
        let phi = integrate_phase(&p, z, 1.0, 1e-10).unwrap().phi;
        let slack = 1e-8 * (1.0 + phi.abs());
        prop_assert!(phi >= z - slack);
        prop_assert!(phi <= z - ext.q_min / z + slack);

        // Mirror the samples to a nonnegative potential: phase then sits
        // at or below the free phase.
        let flipped = mapped_samples(&p, |q| -q);
        let ext = flipped.min_max(0.0, 1.0).unwrap();
        let phi = integrate_phase(&flipped, z, 1.0, 1e-10).unwrap().phi;
        prop_assert!(phi <= z + slack);
        prop_assert!(phi >= z - ext.q_max / z - slack);
    }

    #[test]
    fn lambda1_shrinks_as_the_interval_grows(
        seed in any::<u64>(),
        ell1 in 0.3f64..0.7,
        stretch in 0.1f64..0.4,
    ) {
        let p = barrier_from_seed(seed, 3);
        let ell2 = (ell1 + stretch).min(1.0);
        let a = solve_one(&p, 1, BoundaryCondition::Dirichlet, ell1, 1e-11).unwrap();
        let b = solve_one(&p, 1, BoundaryCondition::Dirichlet, ell2, 1e-11).unwrap();
        prop_assert!(a.lambda > b.lambda, "{} at {ell1} vs {} at {ell2}", a.lambda, b.lambda);
    }

    #[test]
    fn constant_potential_spectrum_is_exact(
        c in -6.0f64..0.0,
        ell in 0.4f64..=1.0,
        n in 1usize..4,
    ) {
        let p = Potential::constant(c);
        let rec = solve_one(&p, n, BoundaryCondition::Dirichlet, ell, 1e-11).unwrap();
        let exact = (n as f64 * PI / ell).powi(2) + c;
        prop_assert!(support::rel_err(rec.lambda, exact) < 1e-8);
        prop_assert!(rec.residual <= 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    #[test]
    fn sturm_count_matches_dense_eigensolver(
        diag in prop::collection::vec(-2.0f64..2.0, 2..10),
        off_seed in prop::collection::vec(-2.0f64..2.0, 9),
    ) {
        let n = diag.len();
        let off = off_seed[..n - 1].to_vec();
        let t = FdProblem::from_tridiagonal(diag.clone(), off.clone()).unwrap();
        let eigs = support::dense_eigenvalues(&diag, &off);
        for shift in [-3.25, -1.75, -0.25, 0.25, 1.75, 3.25] {
            if eigs.iter().any(|e| (e - shift).abs() < 1e-9) {
                continue;
            }
            let brute = eigs.iter().filter(|&&e| e < shift).count();
            prop_assert_eq!(t.sturm_count(shift), brute, "shift {}", shift);
        }
    }
}
