mod support;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use slt_core::codec::BpConfig;
use slt_core::ga::{phi, phi_inv};
use slt_core::optimizer::{solve_lp, LpStatus};
use support::{
    brute_force_map, phi_quadrature, random_forest_code, random_lp, vertex_enumeration,
    OracleOutcome,
};

#[test]
fn bp_matches_map_on_forests() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut worst: f64 = 0.0;
    for _ in 0..300 {
        let k = rng.random_range(1..=12);
        let m = rng.random_range(0..=k + 2);
        let code = random_forest_code(k, m, &mut rng);
        let z: Vec<f64> = (0..code.n()).map(|_| rng.random_range(-3.0..3.0)).collect();
        let cfg = BpConfig {
            max_iters: 2 * code.n() + 2,
            early_stop: false,
            ..BpConfig::default()
        };
        let bp = code.decode_with(&z, &cfg).unwrap();
        let map = brute_force_map(&code, &z);
        for (a, b) in bp.posterior_llrs.iter().zip(&map) {
            worst = worst.max((a - b).abs());
        }
    }
    assert!(worst < 1e-9, "largest BP/MAP gap {worst}");
}

#[test]
fn bp_is_not_map_on_a_cycle() {
    // two checks over the same pair of sources form a 4-cycle
    let code = slt_core::SltCode::from_neighbors(2, vec![vec![0, 1], vec![0, 1]], 0).unwrap();
    let z = [0.3, -0.8, 1.5, -0.4];
    let cfg = BpConfig {
        max_iters: 20,
        early_stop: false,
        ..BpConfig::default()
    };
    let bp = code.decode_with(&z, &cfg).unwrap();
    let map = brute_force_map(&code, &z);
    assert!((bp.posterior_llrs[0] - map[0]).abs() > 1e-3);
}

#[test]
fn simplex_matches_vertex_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let mut optimal = 0;
    for i in 0..400 {
        let lp = random_lp(&mut rng);
        let sol = solve_lp(&lp).unwrap();
        match vertex_enumeration(&lp) {
            OracleOutcome::Optimal(v) => {
                optimal += 1;
                assert_eq!(sol.status, LpStatus::Optimal, "instance {i}: {lp:?}");
                assert!((sol.objective_value - v).abs() < 1e-7, "instance {i}");
                assert!(lp.max_violation(&sol.theta) < 1e-8);
            }
            OracleOutcome::Infeasible => {
                assert_eq!(sol.status, LpStatus::Infeasible, "instance {i}")
            }
        }
    }
    assert!(optimal > 100);
}

#[test]
fn simplex_is_deterministic() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..50 {
        let lp = random_lp(&mut rng);
        assert_eq!(solve_lp(&lp).unwrap(), solve_lp(&lp).unwrap());
    }
}

#[test]
fn phi_tracks_its_integral_away_from_zero() {
    // The closed form undershoots the integral by up to ~0.035 for small x and
    // is within 0.02 from x = 2 on.
    let mut worst_small: f64 = 0.0;
    for i in 1..=3000 {
        let x = i as f64 * 0.01;
        let gap = (phi(x).unwrap() - phi_quadrature(x)).abs();
        if x >= 2.0 {
            assert!(gap < 0.02, "x = {x}, gap = {gap}");
        } else {
            worst_small = worst_small.max(gap);
        }
    }
    assert!(worst_small > 0.03 && worst_small < 0.036);
    assert!((phi_quadrature(1.0) - 0.64989).abs() < 1e-4);
}

#[test]
fn phi_round_trip() {
    let mut x = 0.01;
    while x <= 100.0 {
        if !(9.5..=10.5).contains(&x) {
            let back = phi_inv(phi(x).unwrap()).unwrap();
            assert!((back - x).abs() <= 1e-6 * x.max(1.0), "x = {x}");
        }
        x *= 1.01;
    }
}
