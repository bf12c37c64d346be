use densest::generators::{erdos_renyi, planted_instance};
use densest::graph::{distance_objective, edge_density, is_connected, Graph, Selection};
use densest::harness::first_hit_iteration;
use densest::rng;
use densest::saa::SaaConfig;
use densest::samplers::{
    accept_with_draw, global_move, init_selection, local_move, metropolis_accept_density,
    run_chain, sm_log_ratio, sm_ninth_step, sm_swap_move, Algorithm, SamplerConfig,
};

fn benchmark_instance(seed: u64) -> Graph {
    planted_instance(100, 0.05, 10, seed).unwrap().graph
}

#[test]
fn local_moves_keep_size_and_connectivity() {
    let mut rng = rng::seeded(11);
    let mut proposals = 0;
    for trial in 0..10_000u64 {
        let g = if trial % 2 == 0 {
            benchmark_instance(trial / 100)
        } else {
            erdos_renyi(30, 0.15, trial / 100).unwrap()
        };
        let k = 3 + (trial % 8) as usize;
        let Ok(s) = init_selection(&g, k, &mut rng) else {
            continue;
        };
        if let Some(next) = local_move(&g, &s, &mut rng).unwrap() {
            proposals += 1;
            assert_eq!(next.k(), k);
            assert!(is_connected(&g, next.nodes()).unwrap(), "trial {trial}");
            // Exactly one node swapped.
            assert_eq!(next.nodes().iter().filter(|v| !s.contains(**v)).count(), 1);
        }
    }
    assert!(proposals > 9_000);
}

#[test]
fn global_moves_are_connected_k_sets() {
    let mut rng = rng::seeded(12);
    let mut proposals = 0;
    for trial in 0..10_000u64 {
        let g = benchmark_instance(trial / 500);
        let k = 2 + (trial % 12) as usize;
        let s = init_selection(&g, k, &mut rng).unwrap();
        if let Some(next) = global_move(&g, &s, k, &mut rng).unwrap() {
            proposals += 1;
            assert_eq!(next.k(), k);
            assert!(next.nodes().windows(2).all(|w| w[0] < w[1]));
            assert!(is_connected(&g, next.nodes()).unwrap());
        }
    }
    assert!(proposals > 9_000);
}

#[test]
fn sm_swaps_keep_size() {
    let mut rng = rng::seeded(13);
    for trial in 0..10_000u64 {
        let g = erdos_renyi(40, 0.05, trial / 1000).unwrap();
        let k = 2 + (trial % 10) as usize;
        let s = Selection::new(&g, (0..k).map(|i| (i * 3 + trial as usize) % 40)).unwrap();
        assert_eq!(sm_swap_move(&g, &s, &mut rng).k(), k);
        assert_eq!(sm_ninth_step(&g, &s, &mut rng).k(), k);
    }
}

#[test]
fn metropolis_frequency_matches_probability() {
    // Sum of (accept - p) over 10^6 random triples against 3 standard errors.
    let mut triples = rng::seeded(14);
    let mut coin = rng::seeded(15);
    let (mut excess, mut variance) = (0.0, 0.0);
    for _ in 0..1_000_000 {
        let d_new = rng::unit(&mut triples);
        let d_old = rng::unit(&mut triples);
        let t = 0.001 + rng::unit(&mut triples);
        let p = ((d_new - d_old) / t).exp().min(1.0);
        let accepted = metropolis_accept_density(d_new, d_old, t, &mut coin).unwrap();
        excess += f64::from(u8::from(accepted)) - p;
        variance += p * (1.0 - p);
    }
    assert!(
        excess.abs() <= 3.0 * variance.sqrt(),
        "excess {excess}, se {}",
        variance.sqrt()
    );
}

/// Re-runs the SM loop from the public moves and compares every decision
/// and every recorded density with the chain runner.
#[test]
fn sm_chain_replays_from_public_operations() {
    let g = benchmark_instance(5);
    let k = 10;
    let cfg = SamplerConfig {
        record_decisions: true,
        ..SamplerConfig::new(Algorithm::Sm, k, 2_000, 99)
    };
    let (trace, state) = run_chain(&g, &cfg, None).unwrap();
    assert_eq!(trace.decisions.len(), 2_000);

    let mut r = rng::seeded(99);
    let mut current = init_selection(&g, k, &mut r).unwrap();
    let mut objective = distance_objective(&g, &current);
    for (l, (decision, record)) in (1u64..).zip(trace.decisions.iter().zip(&trace.records)) {
        let proposal = sm_swap_move(&g, &current, &mut r);
        let proposed = distance_objective(&g, &proposal);
        let log_ratio = sm_log_ratio(proposed, objective, k);
        let draw = rng::unit(&mut r);
        let accepted = accept_with_draw(log_ratio, draw);
        assert_eq!(decision.log_ratio, log_ratio, "iteration {l}");
        assert_eq!(decision.draw, draw);
        assert_eq!(decision.accepted, accepted);
        assert_eq!(record.accepted, accepted);
        assert_eq!(accepted, proposed <= objective || draw < log_ratio.exp());
        if accepted {
            current = proposal;
            objective = proposed;
        }
        if l % 9 == 0 {
            current = sm_ninth_step(&g, &current, &mut r);
            objective = distance_objective(&g, &current);
        }
        assert_eq!(record.density, edge_density(&g, &current).unwrap());
    }
    assert_eq!(current, state.current);
}

#[test]
fn density_chains_stay_connected_and_best_is_monotone() {
    let saa = SaaConfig::default();
    for seed in 0..4 {
        let g = benchmark_instance(seed);
        for algorithm in [Algorithm::Sa, Algorithm::Saa] {
            let cfg = SamplerConfig {
                verify_connectivity: true,
                ..SamplerConfig::new(algorithm, 10, 3_000, seed + 100)
            };
            let (trace, state) = run_chain(&g, &cfg, Some(&saa)).unwrap();
            assert_eq!(trace.len(), 3_000);
            let mut prev = 0.0;
            for (i, r) in trace.records.iter().enumerate() {
                assert_eq!(r.iteration, i as u64 + 1);
                assert!(r.best_density >= prev);
                assert!(r.best_density >= r.density);
                assert_eq!(r.region.is_some(), algorithm == Algorithm::Saa);
                prev = r.best_density;
            }
            assert_eq!(
                state.current_density,
                edge_density(&g, &state.current).unwrap()
            );
            assert_eq!(state.best_density, edge_density(&g, &state.best).unwrap());
            assert!(is_connected(&g, state.best.nodes()).unwrap());
        }
    }
}

#[test]
fn reruns_are_bit_identical() {
    let g = benchmark_instance(21);
    let saa = SaaConfig::default();
    for algorithm in Algorithm::ALL {
        let cfg = SamplerConfig::new(algorithm, 10, 2_500, 4242);
        let (a, sa) = run_chain(&g, &cfg, Some(&saa)).unwrap();
        let (b, sb) = run_chain(&g, &cfg, Some(&saa)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.to_csv(), b.to_csv());
        assert_eq!(sa.best, sb.best);
        assert_eq!(sa.theta, sb.theta);
        let other = SamplerConfig::new(algorithm, 10, 2_500, 4243);
        assert_ne!(run_chain(&g, &other, Some(&saa)).unwrap().0, a);
    }
}

#[test]
fn every_selection_of_a_complete_graph_is_optimal() {
    let g = Graph::complete(12).unwrap();
    let saa = SaaConfig::default();
    for algorithm in Algorithm::ALL {
        let cfg = SamplerConfig::new(algorithm, 10, 50, 1);
        let (trace, state) = run_chain(&g, &cfg, Some(&saa)).unwrap();
        assert_eq!(trace.records[0].best_density, 1.0);
        assert_eq!(first_hit_iteration(&trace, 1.0), Some(1));
        assert!(state.found_clique());
        assert_eq!(state.first_hit(), 1);
    }
}

#[test]
fn closed_selection_with_local_moves_only_is_stationary() {
    // Two disjoint K4s: a selection of size 4 is a whole component.
    let edges = (0..4).flat_map(|u| (u + 1..4).flat_map(move |v| [(u, v), (u + 4, v + 4)]));
    let g = Graph::from_edges(8, edges).unwrap();
    let cfg = SamplerConfig {
        alpha: 1.0,
        ..SamplerConfig::new(Algorithm::Sa, 4, 500, 3)
    };
    let (trace, state) = run_chain(&g, &cfg, None).unwrap();
    assert!(trace
        .records
        .iter()
        .all(|r| !r.accepted && r.density == 1.0));
    let (_, again) = run_chain(
        &g,
        &SamplerConfig {
            max_iterations: 1,
            ..cfg
        },
        None,
    )
    .unwrap();
    assert_eq!(state.current, again.current);
}

#[test]
fn early_stop_truncates_an_identical_prefix() {
    let g = benchmark_instance(8);
    let saa = SaaConfig::default();
    for algorithm in [Algorithm::Sa, Algorithm::Saa] {
        let full_cfg = SamplerConfig {
            target_density: Some(1.0),
            ..SamplerConfig::new(algorithm, 10, 10_000, 17)
        };
        let (full, full_state) = run_chain(&g, &full_cfg, Some(&saa)).unwrap();
        let stop_cfg = SamplerConfig {
            stop_at_target: true,
            ..full_cfg.clone()
        };
        let (short, short_state) = run_chain(&g, &stop_cfg, Some(&saa)).unwrap();
        let hit = first_hit_iteration(&full, 1.0).expect("clique found on this instance");
        assert_eq!(short.len() as u64, hit);
        assert_eq!(&full.records[..short.len()], &short.records[..]);
        assert_eq!(short_state.first_hit(), hit);
        assert_eq!(full_state.first_hit(), hit);
    }
}

#[test]
fn infeasible_instances_are_reported() {
    let g = Graph::from_edges(6, [(0, 1), (2, 3), (4, 5)]).unwrap();
    let cfg = SamplerConfig::new(Algorithm::Sa, 3, 10, 0);
    assert!(matches!(
        run_chain(&g, &cfg, None),
        Err(densest::Error::Infeasible(_))
    ));
}
