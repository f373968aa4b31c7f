use slt::config::{ExperimentConfig, Mode};
use slt::formats::load_distribution;
use slt::harness::{
    check_count, point_seed, run_ber_point, run_sweep, run_trial, trial_rng, BerRecord,
};
use slt_core::{lb1, lb2, q_func, BoundParams, ChannelParams};

fn cfg(k: usize, dist: &str, trials: usize) -> ExperimentConfig {
    ExperimentConfig {
        k,
        distribution: dist.into(),
        trials,
        master_seed: 2024,
        ..ExperimentConfig::default()
    }
}

fn point(c: &ExperimentConfig, epsilon: f64) -> BerRecord {
    let omega = load_distribution(&c.distribution).unwrap();
    run_ber_point(c, &omega, epsilon, point_seed(c.master_seed, 0)).unwrap()
}

#[test]
fn zero_overhead_is_uncoded_bpsk() {
    let c = ExperimentConfig {
        min_error_events: u64::MAX,
        ..cfg(500, "omega1", 200)
    };
    let r = point(&c, 0.0);
    assert_eq!(r.trials_run, 200);
    assert_eq!(r.error_events as f64, r.ber * r.bits() as f64);
    let q1 = q_func(1.0);
    let se = (q1 * (1.0 - q1) / r.bits() as f64).sqrt();
    assert!((r.ber - q1).abs() < 3.0 * se, "ber {} vs {q1}", r.ber);
}

#[test]
fn noiseless_channel_makes_no_errors() {
    let c = ExperimentConfig {
        sigma2: 1e-12,
        ..cfg(200, "omega1", 20)
    };
    for eps in [0.0, 0.5, 1.0] {
        let r = point(&c, eps);
        assert_eq!(r.ber, 0.0);
        assert_eq!(r.trials_run, 20);
    }
}

#[test]
fn early_stop_after_enough_errors() {
    let c = ExperimentConfig {
        min_error_events: 100,
        ..cfg(500, "omega1", 10_000)
    };
    let r = point(&c, 0.0);
    // ~80 errors per codeword: the first batch is already enough
    assert_eq!(r.trials_run, slt::harness::BATCH_SIZE);
    assert!(r.error_events >= 100);
}

#[test]
fn aggregate_ignores_trial_order() {
    let c = ExperimentConfig {
        min_error_events: u64::MAX,
        ..cfg(300, "omega1", 40)
    };
    let omega = load_distribution("omega1").unwrap();
    let channel = ChannelParams::new(c.sigma2).unwrap();
    let seed = point_seed(c.master_seed, 3);
    let m = check_count(c.k, 0.8);
    let per_trial = |t: usize| run_trial(&c, &omega, &channel, m, &mut trial_rng(seed, t)).unwrap();
    let forward: u64 = (0..40).map(per_trial).sum();
    let backward: u64 = (0..40).rev().map(per_trial).sum();
    assert_eq!(forward, backward);
    let r = run_ber_point(&c, &omega, 0.8, seed).unwrap();
    assert_eq!(r.error_events, forward);
}

#[test]
fn sweep_is_byte_identical_across_runs() {
    let c = ExperimentConfig {
        epsilons: vec![0.0, 0.5, 1.0],
        mode: Mode::All,
        ..cfg(200, "omega1", 30)
    };
    let run = || {
        let mut buf = Vec::new();
        run_sweep(&c, &mut buf).unwrap();
        buf
    };
    let a = run();
    assert_eq!(a, run());
    let other = ExperimentConfig {
        master_seed: 2025,
        ..c.clone()
    };
    let mut b = Vec::new();
    run_sweep(&other, &mut b).unwrap();
    assert_ne!(a, b);
}

#[test]
fn bounds_mode_delegates() {
    let omega = load_distribution("omega3").unwrap();
    let c = ExperimentConfig {
        epsilons: vec![0.0, 0.5, 1.0, 2.0],
        mode: Mode::Bounds,
        ..cfg(1000, "omega3", 1)
    };
    let res = run_sweep(&c, std::io::sink()).unwrap();
    assert!(res.records.is_empty());
    for row in &res.rows {
        let p = BoundParams::new(1.0, omega.avg_degree(), row.epsilon).unwrap();
        assert_eq!(row.lb1, Some(lb1(&p)));
        assert_eq!(row.lb2, Some(lb2(&p)));
        assert_eq!((row.ber, row.ga_ber, row.seed), (None, None, None));
    }
}

#[test]
fn coding_beats_uncoded_at_twice_overhead() {
    let c = cfg(1000, "omega3", 32);
    let r = point(&c, 2.0);
    assert!(r.ber < q_func(1.0) / 100.0, "ber {}", r.ber);
}

#[test]
fn random_codewords_match_all_zero() {
    let base = ExperimentConfig {
        min_error_events: u64::MAX,
        ..cfg(500, "omega1", 128)
    };
    let zero = point(&base, 1.0);
    let random = point(
        &ExperimentConfig {
            random_codeword: true,
            ..base
        },
        1.0,
    );
    // BP on a linear code over a symmetric channel is codeword-independent.
    let se = (zero.std_error().powi(2) + random.std_error().powi(2)).sqrt();
    assert!(
        (zero.ber - random.ber).abs() < 4.0 * se,
        "{} vs {}",
        zero.ber,
        random.ber
    );
    assert!(zero.ber > 0.0);
}

#[test]
fn ga_lower_envelopes_long_codes() {
    let omega = load_distribution("omega3").unwrap();
    let c = ExperimentConfig {
        min_error_events: u64::MAX,
        ..cfg(4000, "omega3", 64)
    };
    for (i, eps) in [1.6, 2.0].into_iter().enumerate() {
        let ga = slt::harness::ga_point(&omega, 1.0, eps).unwrap().ber;
        assert!(ga < 1e-3);
        let r = run_ber_point(&c, &omega, eps, point_seed(c.master_seed, i)).unwrap();
        assert!(r.ber <= 10.0 * ga, "eps {eps}: mc {} vs ga {ga}", r.ber);
    }
}
