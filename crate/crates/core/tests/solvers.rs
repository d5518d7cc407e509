//! Region invariants of the two-dimensional algorithm, checked on
//! instrumented runs.

use lsq_core::instances::gen_grid_instance;
use lsq_core::oracle::{L1Bowl, Landscape, TableLandscape, ValueOracle};
use lsq_core::solvers::{grid2d_quantum, Grid2dConfig, Outcome, SolveResult, SubroutineMode};
use lsq_core::{GridShape, Vertex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn landscapes(n: u32, seed: u64) -> Vec<Box<dyn Landscape>> {
    let shape = GridShape::new(n, 2).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let c = Vertex::new(vec![rng.gen_range(1..=n), rng.gen_range(1..=n)]);
    // Random values have many local minima and exercise the radius tests.
    let noise: Vec<i64> = (0..u64::from(n) * u64::from(n))
        .map(|_| rng.gen_range(0..1000))
        .collect();
    vec![
        Box::new(L1Bowl::new(shape.clone(), c).unwrap()),
        Box::new(gen_grid_instance(n, 2, 1, seed).unwrap()),
        Box::new(TableLandscape::new(shape, noise).unwrap()),
    ]
}

fn run(land: &dyn Landscape, seed: u64, mode: SubroutineMode) -> SolveResult {
    let config = Grid2dConfig {
        seed,
        mode,
        instrument: true,
        ..Default::default()
    };
    grid2d_quantum(ValueOracle::new(land), &config).unwrap()
}

#[test]
fn region_invariants_hold_every_round() {
    for n in [16u32, 25, 40] {
        for seed in 0..15 {
            for land in landscapes(n, seed) {
                let r = run(land.as_ref(), seed, SubroutineMode::Exact);
                let trace = r.trace.as_ref().unwrap();
                let mut prev_size = u64::MAX;
                let mut prev_value = i64::MAX;
                for t in trace {
                    // U_(i+1) ⊆ U_(i): sizes never grow and each region
                    // is a further intersection.
                    assert!(t.region_size <= prev_size);
                    prev_size = t.region_size;
                    // |U_(i)| never exceeds a full l1 ball of radius m_(i).
                    let m = t.radius;
                    assert!(t.region_size <= 2 * m * m + 2 * m + 1);
                    if t.round >= 1 {
                        assert!(t.anchor_value <= prev_value, "anchor got worse");
                    }
                    prev_value = t.anchor_value;
                    if let Some(next) = t.next_radius {
                        assert!(next >= m / 4 && next <= (3 * m).div_ceil(4));
                        assert_eq!(
                            t.boundary_step,
                            Some(true),
                            "n={n} seed={seed} round={}",
                            t.round
                        );
                        assert_eq!(t.boundary_union, Some(true));
                    }
                    // Enough good radii whenever the anchor ranks low.
                    let (rank, good) = (t.anchor_rank.unwrap(), t.good_radii.unwrap());
                    if 4 * rank <= m {
                        assert!(4 * good + 4 >= m, "m={m} good={good}");
                    }
                }
                if r.outcome == Outcome::Success {
                    assert!(r.is_local_min);
                }
                assert!(r.ledger.is_consistent());
            }
        }
    }
}

#[test]
fn round_count_stays_within_log_n_on_fixed_seeds() {
    for n in [16u32, 64, 256] {
        for seed in 0..20 {
            let land = &landscapes(n, seed)[0];
            let config = Grid2dConfig {
                seed,
                ..Default::default()
            };
            let r = grid2d_quantum(ValueOracle::new(land.as_ref()), &config).unwrap();
            assert!(
                f64::from(r.rounds) <= f64::from(n).log2(),
                "n={n} seed={seed} rounds={}",
                r.rounds
            );
        }
    }
}

#[test]
fn final_descent_stays_short_when_rounds_are_good() {
    // With every tested sphere good and a low-ranked anchor, the decreasing
    // path cannot leave U_(I), so it is no longer than m_(I) <= sqrt(n).
    for seed in 0..20 {
        for land in landscapes(36, seed) {
            let r = run(land.as_ref(), seed, SubroutineMode::Exact);
            let trace = r.trace.as_ref().unwrap();
            let all_good = trace
                .iter()
                .all(|t| 4 * t.anchor_rank.unwrap() <= t.radius && t.next_radius.is_some());
            if r.outcome == Outcome::Success && all_good {
                let last = trace.last().unwrap().next_radius.unwrap();
                assert!(
                    r.descent_steps <= last,
                    "steps {} radius {last}",
                    r.descent_steps
                );
            }
        }
    }
}

#[test]
fn faithful_mode_still_reports_verified_minima() {
    let mut successes = 0;
    for seed in 0..40 {
        let land = &landscapes(32, seed)[1];
        let r = run(land.as_ref(), seed, SubroutineMode::Faithful);
        if r.outcome == Outcome::Success {
            successes += 1;
            assert!(r.is_local_min);
        }
    }
    assert!(successes >= 20);
}

#[test]
fn runs_are_reproducible() {
    let land = &landscapes(64, 3)[2];
    let a = run(land.as_ref(), 8, SubroutineMode::Faithful);
    let b = run(land.as_ref(), 8, SubroutineMode::Faithful);
    assert_eq!(
        serde_json::to_string(&a).unwrap(),
        serde_json::to_string(&b).unwrap()
    );
}
