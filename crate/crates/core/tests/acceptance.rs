//! Acceptance criteria, one PASS/FAIL line each. Criteria run sequentially
//! so that the wall-time comparison is not disturbed by other work.
//!
//! ```bash
//! cargo test -p densest --test acceptance
//! ```

mod common;

use std::process::ExitCode;
use std::time::Instant;

use densest::generators::{erdos_renyi, planted_instance};
use densest::graph::{
    edge_density, is_connected, neighbors_of_set, non_articulation_nodes, Graph, Selection,
};
use densest::harness::{run_replication_study, StudyConfig, StudySummary};
use densest::rng;
use densest::saa::{
    default_partition, desired_distribution, gain_factor, region_index, sqrt_temperature,
    Partition, SaaConfig, ThetaVector,
};
use densest::samplers::{run_chain, Algorithm, Cooling, SamplerConfig};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

const STUDY_SEED: u64 = 2024;

type Outcome = Result<String, String>;
type Check = (&'static str, fn() -> Result<(), String>);
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn successes(s: &StudySummary, a: Algorithm) -> usize {
    s.get(a).map_or(0, |x| x.success_count)
}

fn median_hit(s: &StudySummary, a: Algorithm) -> Option<f64> {
    s.get(a).and_then(|x| x.median_first_hit)
}

fn mean_wall(s: &StudySummary, a: Algorithm) -> f64 {
    s.get(a).map_or(f64::NAN, |x| x.mean_wall_seconds)
}

/// Success counts: SM <= 30, SA in [65, 97], SAA >= 95.
fn criterion_1(study: &StudySummary) -> Outcome {
    let (sm, sa, saa) = (
        successes(study, Algorithm::Sm),
        successes(study, Algorithm::Sa),
        successes(study, Algorithm::Saa),
    );
    check(
        sm <= 30 && (65..=97).contains(&sa) && saa >= 95,
        format!("successes SM {sm}/100 (<= 30), SA {sa}/100 (65..=97), SAA {saa}/100 (>= 95)"),
    )
}

/// Median first hit of SAA below SA's and at most 6,000.
fn criterion_2(study: &StudySummary) -> Outcome {
    let sa = median_hit(study, Algorithm::Sa);
    let saa = median_hit(study, Algorithm::Saa);
    let detail = format!("median first hit SA {sa:?}, SAA {saa:?} (SAA < SA, SAA <= 6000)");
    match (sa, saa) {
        (Some(sa), Some(saa)) => check(saa < sa && saa <= 6_000.0, detail),
        _ => Err(detail),
    }
}

/// Mean wall time per full chain: SAA <= SA <= SM.
fn criterion_3(study: &StudySummary) -> Outcome {
    let (sm, sa, saa) = (
        mean_wall(study, Algorithm::Sm),
        mean_wall(study, Algorithm::Sa),
        mean_wall(study, Algorithm::Saa),
    );
    check(
        saa <= sa && sa <= sm,
        format!("mean wall seconds SAA {saa:.4} <= SA {sa:.4} <= SM {sm:.4}"),
    )
}

/// SA and SAA match the exhaustive optimum on >= 18 of 20 small instances,
/// in under a minute.
fn criterion_4() -> Outcome {
    let start = Instant::now();
    let sa = common::oracle_agreement(Algorithm::Sa);
    let saa = common::oracle_agreement(Algorithm::Saa);
    let secs = start.elapsed().as_secs_f64();
    check(
        sa >= 18 && saa >= 18 && secs < 60.0,
        format!("oracle matches SA {sa}/20, SAA {saa}/20 (>= 18) in {secs:.2} s (< 60)"),
    )
}

/// Frozen SAA and SA under the same schedule and draws decide identically
/// for 100,000 iterations.
fn criterion_5() -> Outcome {
    let g = planted_instance(100, 0.05, 10, 77)
        .map_err(|e| e.to_string())?
        .graph;
    let saa = SaaConfig {
        adapt: false,
        ..SaaConfig::default()
    };
    let sa_cfg = SamplerConfig {
        cooling: Some(Cooling::SquareRoot {
            base_temperature: saa.base_temperature,
            plateau: saa.plateau,
        }),
        record_decisions: true,
        ..SamplerConfig::new(Algorithm::Sa, 10, 100_000, 5)
    };
    let saa_cfg = SamplerConfig {
        algorithm: Algorithm::Saa,
        ..sa_cfg.clone()
    };
    let (sa, _) = run_chain(&g, &sa_cfg, None).map_err(|e| e.to_string())?;
    let (frozen, state) = run_chain(&g, &saa_cfg, Some(&saa)).map_err(|e| e.to_string())?;
    let mismatch = sa
        .decisions
        .iter()
        .zip(&frozen.decisions)
        .position(|(a, b)| a.accepted != b.accepted || a.draw != b.draw);
    let theta_zero = state
        .theta
        .is_some_and(|t| t.theta.iter().all(|&x| x == 0.0));
    check(
        mismatch.is_none()
            && sa.decisions.len() == 100_000
            && frozen.decisions.len() == 100_000
            && theta_zero,
        format!(
            "{} vs {} decisions, first mismatch {mismatch:?}, theta stayed zero: {theta_zero}",
            sa.decisions.len(),
            frozen.decisions.len()
        ),
    )
}

fn proptest_check<S: Strategy>(
    cases: u32,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<(), String> {
    let mut runner = TestRunner::new(Config {
        failure_persistence: None,
        ..Config::with_cases(cases)
    });
    runner.run(&strategy, test).map_err(|e| e.to_string())
}

fn density_bounds() -> Result<(), String> {
    let strategy = (2usize..=20, 0.0..=1.0f64, any::<u64>()).prop_flat_map(|(n, p, seed)| {
        let g = erdos_renyi(n, p, seed).unwrap();
        (
            Just(g),
            proptest::sample::subsequence((0..n).collect::<Vec<_>>(), 2..=n),
        )
    });
    proptest_check(500, strategy, |(g, nodes)| {
        let s = Selection::new(&g, nodes.iter().copied()).unwrap();
        let d = edge_density(&g, &s).unwrap();
        prop_assert!((0.0..=1.0).contains(&d));
        let complete = nodes
            .iter()
            .all(|&u| nodes.iter().all(|&v| u == v || g.has_edge(u, v)));
        prop_assert_eq!(d == 1.0, complete);
        Ok(())
    })
}

fn chains_connected_and_monotone() -> Result<(), String> {
    let saa = SaaConfig::default();
    for seed in 0..6 {
        let g = planted_instance(100, 0.05, 10, seed)
            .map_err(|e| e.to_string())?
            .graph;
        for algorithm in [Algorithm::Sa, Algorithm::Saa] {
            let cfg = SamplerConfig {
                verify_connectivity: true,
                ..SamplerConfig::new(algorithm, 10, 3_000, 50 + seed)
            };
            let (trace, state) = run_chain(&g, &cfg, Some(&saa)).map_err(|e| e.to_string())?;
            if !is_connected(&g, state.best.nodes()).unwrap() {
                return Err(format!("{algorithm} best state disconnected"));
            }
            if trace
                .records
                .windows(2)
                .any(|w| w[1].best_density < w[0].best_density)
            {
                return Err(format!("{algorithm} best-so-far decreased on seed {seed}"));
            }
        }
    }
    Ok(())
}

fn theta_conservation() -> Result<(), String> {
    let pi = desired_distribution(51);
    let mut theta = ThetaVector::zeros(51);
    let mut gen = rng::seeded(31);
    for l in 1..=1_000_000u64 {
        theta
            .update(1 + rng::pick_index(&mut gen, 51), &pi, gain_factor(l))
            .unwrap();
    }
    let drift = theta.sum().abs();
    if drift <= 1e-6 {
        Ok(())
    } else {
        Err(format!("theta sum drifted by {drift:e}"))
    }
}

fn pi_normalised() -> Result<(), String> {
    for n in 1..=500 {
        let total: f64 = desired_distribution(n).iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(format!("pi sums to {total} for N = {n}"));
        }
    }
    Ok(())
}

fn cooling_values() -> Result<(), String> {
    let got = [
        sqrt_temperature(1),
        sqrt_temperature(1500),
        sqrt_temperature(6000),
    ];
    if got == [0.001, 0.001, 0.0005] {
        Ok(())
    } else {
        Err(format!("schedule gave {got:?}"))
    }
}

fn region_boundaries() -> Result<(), String> {
    let default = default_partition(51).unwrap();
    for (i, &a) in default.thresholds().iter().enumerate() {
        if region_index(&default, a).unwrap() != i + 1 {
            return Err(format!("threshold {a} not in region {}", i + 1));
        }
    }
    let strategy = proptest::collection::btree_set(1u32..999, 1..40);
    proptest_check(300, strategy, |set| {
        let p = Partition::new(set.into_iter().map(|x| f64::from(x) / 1000.0).collect()).unwrap();
        for (i, &a) in p.thresholds().iter().enumerate() {
            prop_assert_eq!(region_index(&p, a).unwrap(), i + 1);
        }
        Ok(())
    })
}

fn articulation_oracle() -> Result<(), String> {
    let mut gen = rng::seeded(2718);
    let (mut checked, mut seed) = (0, 0u64);
    while checked < 1000 {
        seed += 1;
        let n = 2 + rng::pick_index(&mut gen, 29);
        let g = erdos_renyi(n, 0.05 + 0.5 * rng::unit(&mut gen), seed).unwrap();
        let size = 2 + rng::pick_index(&mut gen, n - 1);
        let mut nodes = vec![rng::pick_index(&mut gen, n)];
        while nodes.len() < size {
            let frontier = neighbors_of_set(&g, &nodes);
            if frontier.is_empty() {
                break;
            }
            nodes.push(*rng::pick(&mut gen, &frontier));
        }
        if nodes.len() < size {
            continue;
        }
        let naive: Vec<usize> = {
            let mut v: Vec<usize> = nodes
                .iter()
                .copied()
                .filter(|&x| {
                    is_connected(
                        &g,
                        &nodes
                            .iter()
                            .copied()
                            .filter(|&u| u != x)
                            .collect::<Vec<_>>(),
                    )
                    .unwrap()
                })
                .collect();
            v.sort_unstable();
            v
        };
        if non_articulation_nodes(&g, &nodes).unwrap() != naive {
            return Err(format!("mismatch on seed {seed}, nodes {nodes:?}"));
        }
        checked += 1;
    }
    Ok(())
}

fn bit_identical_reruns() -> Result<(), String> {
    let g: Graph = planted_instance(100, 0.05, 10, 21)
        .map_err(|e| e.to_string())?
        .graph;
    let saa = SaaConfig::default();
    for algorithm in Algorithm::ALL {
        let cfg = SamplerConfig::new(algorithm, 10, 2_000, 4242);
        let a = run_chain(&g, &cfg, Some(&saa))
            .map_err(|e| e.to_string())?
            .0;
        let b = run_chain(&g, &cfg, Some(&saa))
            .map_err(|e| e.to_string())?
            .0;
        if a.to_csv() != b.to_csv() {
            return Err(format!("{algorithm} rerun differs"));
        }
    }
    Ok(())
}

/// The invariant suite; every member must hold.
fn criterion_6() -> Outcome {
    let checks: [Check; 8] = [
        ("density bounds and clique characterization", density_bounds),
        (
            "SA/SAA states connected, best-so-far monotone",
            chains_connected_and_monotone,
        ),
        (
            "theta-sum conservation over 1e6 updates",
            theta_conservation,
        ),
        ("pi normalization", pi_normalised),
        ("cooling values at l = 1, 1500, 6000", cooling_values),
        ("region_index boundaries", region_boundaries),
        (
            "non_articulation_nodes vs removal oracle",
            articulation_oracle,
        ),
        ("bit-identical reruns", bit_identical_reruns),
    ];
    let failures: Vec<String> = checks
        .iter()
        .filter_map(|(name, f)| f().err().map(|e| format!("{name}: {e}")))
        .collect();
    if failures.is_empty() {
        Ok(format!("{} invariant checks hold", checks.len()))
    } else {
        Err(failures.join("; "))
    }
}

fn main() -> ExitCode {
    let start = Instant::now();
    let cfg = StudyConfig::planted_clique_protocol(STUDY_SEED);
    let study = run_replication_study(&cfg);
    eprintln!(
        "replication study: {} replicates, master seed {STUDY_SEED}, {:.1} s",
        cfg.replicates,
        start.elapsed().as_secs_f64()
    );
    if let Ok(s) = &study {
        eprint!("{}", s.table());
    }

    let study = &study;
    let from_study = |f: fn(&StudySummary) -> Outcome| {
        move || study.as_ref().map_err(|e| e.to_string()).and_then(f)
    };
    let criteria: Vec<Criterion> = vec![
        (
            "replication study success counts",
            Box::new(from_study(criterion_1)),
        ),
        ("iteration efficiency", Box::new(from_study(criterion_2))),
        ("relative speed ordering", Box::new(from_study(criterion_3))),
        ("oracle equivalence", Box::new(criterion_4)),
        ("reduction identity", Box::new(criterion_5)),
        ("invariant suite", Box::new(criterion_6)),
    ];

    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("criterion {}: PASS  {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {detail}", i + 1);
            }
        }
    }
    println!(
        "{} of {} acceptance criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
