//! Acceptance suite.
//!
//! One test per criterion; each prints a single `ACCEPTANCE <n> ...: PASS`
//! line on success and enforces its runtime budget.
//!
//! 1. Golden fixpoint on the running two-player Büchi example: all five
//!    label rows, the three removals, and the final labels, exactly.
//! 2. Golden decisions on the same game.
//! 3. `certify` end to end: good witness with the documented slot payoffs,
//!    verified profile, outcome payoff 01.
//! 4. Formula-game ground truth: the solver agrees with naive quantified
//!    Boolean evaluation on 200 reachability-variant and 50 safety-variant
//!    instances.
//! 5. Path-oracle equivalence with a brute-force infinite-visit enumerator
//!    on 300 seeded games across all prefix-independent classes.
//! 6. Decision equivalence with the exhaustive witness search on 50 seeded
//!    Büchi games.
//! 7. Invariant suites: label monotonicity and replay, stability at the
//!    fixpoint, removal-order independence, product monotonicity, lasso and
//!    profile size bounds, and certify never failing verification across
//!    the corpus.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use wspe_core::fixpoint::{
    decide_constraint, init_labels, remove_candidates, run_fixpoint, run_fixpoint_ordered,
    RemovalCause, RemovalOrder,
};
use wspe_core::game::{Game, ObjectiveClass, Payoff, Vertex};
use wspe_core::json::{game_from_json_str, witness_from_value};
use wspe_core::oracle::payoff_path;
use wspe_core::reductions::{
    qbf_eval, qbf_to_game, random_game, reach_safety_product, QbfFormula, QbfVariant,
    RandomGameParams,
};
use wspe_core::strategy::{outcome_from, synthesize_profile, verify_weak_spe};
use wspe_core::witness::{brute_force_witness_search, build_witness, check_goodness, Compaction};

fn demo_game() -> Game {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data/demo_buchi.json");
    game_from_json_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn pf(s: &str) -> Payoff {
    Payoff::parse(s).unwrap()
}

fn pass(name: &str, started: Instant, budget: Duration) {
    let elapsed = started.elapsed();
    assert!(
        elapsed < budget,
        "{name} exceeded its runtime budget: {elapsed:?} >= {budget:?}"
    );
    println!("ACCEPTANCE {name}: PASS ({elapsed:?})");
}

fn assert_row(game_table: &wspe_core::LabelingTable, expected: &[(Vertex, &[&str])]) {
    assert_eq!(game_table.vertices().count(), expected.len());
    for (v, strs) in expected {
        let want: BTreeSet<Payoff> = strs.iter().map(|s| pf(s)).collect();
        assert_eq!(
            game_table.get(*v),
            Some(&want),
            "labels of vertex {v} at step {}",
            game_table.step()
        );
    }
}

#[test]
fn acceptance_1_running_example_fixpoint() {
    let started = Instant::now();
    let game = demo_game();
    let initial = init_labels(&game, 0).unwrap();
    let (table, trace) = run_fixpoint(&game, 0).unwrap();

    let rows: [&[(Vertex, &[&str])]; 5] = [
        &[
            (0, &["00", "10", "01"]),
            (1, &["10", "01"]),
            (2, &["10", "01"]),
            (3, &["01"]),
            (4, &["00", "01"]),
            (5, &["01"]),
            (6, &["00"]),
        ],
        &[
            (0, &["00", "10", "01"]),
            (1, &["10", "01"]),
            (2, &["10", "01"]),
            (3, &["01"]),
            (4, &["01"]),
            (5, &["01"]),
            (6, &["00"]),
        ],
        &[
            (0, &["10", "01"]),
            (1, &["10", "01"]),
            (2, &["10", "01"]),
            (3, &["01"]),
            (4, &["01"]),
            (5, &["01"]),
            (6, &["00"]),
        ],
        &[
            (0, &["01"]),
            (1, &["10", "01"]),
            (2, &["10", "01"]),
            (3, &["01"]),
            (4, &["01"]),
            (5, &["01"]),
            (6, &["00"]),
        ],
        &[
            (0, &["01"]),
            (1, &["10", "01"]),
            (2, &["10", "01"]),
            (3, &["01"]),
            (4, &["01"]),
            (5, &["01"]),
            (6, &["00"]),
        ],
    ];
    for (step, row) in rows.iter().enumerate() {
        assert_row(&trace.replay(&initial, step as u64), row);
    }
    assert_eq!(table.step(), 4);
    assert_eq!(table.get(0), Some(&BTreeSet::from([pf("01")])));

    let events: Vec<(u64, Vertex, Payoff, RemovalCause)> = trace
        .removals
        .iter()
        .map(|e| (e.step, e.vertex, e.payoff, e.cause))
        .collect();
    assert_eq!(
        events,
        vec![
            (1, 4, pf("00"), RemovalCause::Remove),
            (2, 0, pf("00"), RemovalCause::Adjust),
            (3, 0, pf("10"), RemovalCause::Remove),
        ]
    );
    pass(
        "1 running-example-fixpoint",
        started,
        Duration::from_secs(1),
    );
}

#[test]
fn acceptance_2_running_example_decision() {
    let started = Instant::now();
    let game = demo_game();
    let yes = decide_constraint(&game, 0, &pf("00"), &pf("11")).unwrap();
    assert!(yes.exists);
    assert_eq!(yes.payoff, Some(pf("01")));
    let no = decide_constraint(&game, 0, &pf("10"), &pf("11")).unwrap();
    assert!(!no.exists);
    assert_eq!(no.payoff, None);
    pass(
        "2 running-example-decision",
        started,
        Duration::from_secs(1),
    );
}

#[test]
fn acceptance_3_certificate_soundness() {
    let started = Instant::now();
    let game_path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data/demo_buchi.json");
    let output = std::process::Command::new(env!("CARGO_BIN_EXE_wspe"))
        .args(["certify", "--game"])
        .arg(&game_path)
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(0), "certify must verify");
    let value: Value = serde_json::from_slice(&output.stdout).unwrap();
    assert_eq!(value["payoff"], "01");
    assert_eq!(value["outcome_payoff"], "01");
    assert_eq!(value["report"]["is_weak_spe"], Value::Bool(true));

    // Documented slot payoffs of the witness.
    let expected = [
        ("0,0", "01"),
        ("2,4", "01"),
        ("1,2", "01"),
        ("1,1", "01"),
        ("1,3", "01"),
        ("2,5", "01"),
        ("2,6", "00"),
        ("1,5", "01"),
        ("1,6", "00"),
    ];
    for (slot, payoff) in expected {
        assert_eq!(
            value["witness"]["lassoes"][slot]["payoff"], *payoff,
            "slot {slot}"
        );
    }

    // The emitted witness independently passes the goodness check.
    let game = demo_game();
    let witness = witness_from_value(&value["witness"]).unwrap();
    let report = check_goodness(&witness, &game).unwrap();
    assert!(report.good, "violations: {:?}", report.violations);
    pass("3 certificate-soundness", started, Duration::from_secs(1));
}

/// Seeded formula sample: `m` variables, `n` clauses, both at most 3.
fn sample_formula(rng: &mut ChaCha8Rng) -> QbfFormula {
    let m = rng.gen_range(1..=3usize);
    let n = rng.gen_range(1..=3usize);
    let clauses: Vec<Vec<i64>> = (0..n)
        .map(|_| {
            let size = rng.gen_range(1..=3usize.min(m));
            let mut vars: Vec<usize> = (1..=m).collect();
            let mut clause = Vec::new();
            for _ in 0..size {
                let var = vars.remove(rng.gen_range(0..vars.len()));
                let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
                clause.push(sign * var as i64);
            }
            clause
        })
        .collect();
    QbfFormula::new(m, clauses).unwrap()
}

#[test]
fn acceptance_4_qbf_ground_truth() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x51bf);
    for case in 0..250u32 {
        let variant = if case < 200 {
            QbfVariant::Reach
        } else {
            QbfVariant::Safety
        };
        let formula = sample_formula(&mut rng);
        let truth = qbf_eval(&formula);
        let instance = qbf_to_game(&formula, variant);
        let decision = decide_constraint(
            &instance.game,
            instance.initial,
            &instance.lower,
            &instance.upper,
        )
        .unwrap();
        assert_eq!(
            decision.exists, truth,
            "case {case} ({variant:?}): formula {formula:?}"
        );
    }
    pass("4 qbf-ground-truth", started, Duration::from_secs(300));
}

/// Brute-force path oracle: enumerates all candidate infinite-visit sets
/// (strongly connected with an internal edge, reachable inside `allowed`)
/// and evaluates the objectives on them directly. Reachability and strong
/// connectivity are recomputed here from scratch.
fn brute_payoffs(game: &Game, allowed: &BTreeSet<Vertex>, from: Vertex) -> BTreeSet<Payoff> {
    let n = game.num_vertices();
    // Plain BFS reachability inside `allowed`.
    let mut reach = BTreeSet::from([from]);
    let mut frontier = vec![from];
    while let Some(u) = frontier.pop() {
        for &w in game.successors(u) {
            if allowed.contains(&w) && reach.insert(w) {
                frontier.push(w);
            }
        }
    }
    let mut result = BTreeSet::new();
    for mask in 1u64..(1 << n) {
        let s: BTreeSet<Vertex> = (0..n).filter(|v| mask >> v & 1 == 1).collect();
        if !s.is_subset(&reach) {
            continue;
        }
        // Transitive closure over the induced subgraph.
        let mut closure = vec![vec![false; n]; n];
        let mut has_edge = false;
        for &u in &s {
            for &w in game.successors(u) {
                if s.contains(&w) {
                    closure[u][w] = true;
                    has_edge = true;
                }
            }
        }
        if !has_edge {
            continue;
        }
        for &k in &s {
            for &i in &s {
                for &j in &s {
                    if closure[i][k] && closure[k][j] {
                        closure[i][j] = true;
                    }
                }
            }
        }
        // For a singleton the only internal edge is a self-loop, so
        // `has_edge` already covers realizability.
        let connected = s.iter().all(|&u| {
            s.iter()
                .all(|&w| u == w || (closure[u][w] && closure[w][u]))
        });
        if !connected {
            continue;
        }
        let mut gains = Vec::new();
        for player in 1..=game.num_players() {
            gains.push(game.objective(player).satisfied_by_sets(&s, &s));
        }
        result.insert(Payoff::from_gains(&gains));
    }
    result
}

const PREFIX_INDEPENDENT: [ObjectiveClass; 7] = [
    ObjectiveClass::Buchi,
    ObjectiveClass::CoBuchi,
    ObjectiveClass::Parity,
    ObjectiveClass::Rabin,
    ObjectiveClass::Streett,
    ObjectiveClass::Muller,
    ObjectiveClass::ExplicitMuller,
];

fn oracle_corpus() -> Vec<Game> {
    (0..300u64)
        .map(|i| {
            let class = PREFIX_INDEPENDENT[(i % 7) as usize];
            random_game(&RandomGameParams {
                num_vertices: 2 + (i as usize * 5 + 3) % 5,
                num_players: 1 + (i as usize / 7) % 2,
                objective_class: class,
                edge_density: 0.3 + 0.1 * ((i % 3) as f64),
                seed: 0xa11ce ^ i,
            })
        })
        .collect()
}

#[test]
fn acceptance_5_path_oracle_equivalence() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x0a11);
    for (idx, game) in oracle_corpus().iter().enumerate() {
        let all: BTreeSet<Vertex> = game.vertices().collect();
        // Each game is also queried under a random vertex restriction.
        let restricted: BTreeSet<Vertex> =
            all.iter().copied().filter(|_| rng.gen_bool(0.75)).collect();
        for allowed in [&all, &restricted] {
            for &v in allowed.iter() {
                let expected = brute_payoffs(game, allowed, v);
                for p in Payoff::enumerate(game.num_players()) {
                    let got = payoff_path(game, allowed, &p, v).unwrap().is_some();
                    assert_eq!(
                        got,
                        expected.contains(&p),
                        "game {idx} ({:?}), vertex {v}, payoff {p}, allowed {allowed:?}",
                        game.objective_class()
                    );
                }
            }
        }
    }
    pass(
        "5 path-oracle-equivalence",
        started,
        Duration::from_secs(300),
    );
}

#[test]
fn acceptance_6_witness_search_equivalence() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xb217);
    for case in 0..50u64 {
        let game = random_game(&RandomGameParams {
            num_vertices: 2 + (case as usize % 3),
            num_players: 2,
            objective_class: ObjectiveClass::Buchi,
            edge_density: 0.35,
            seed: 0xbea7 ^ case,
        });
        let max_len = 2 * game.num_vertices() * game.num_vertices();
        let mut intervals = vec![(pf("00"), pf("11"))];
        let random_payoff =
            |rng: &mut ChaCha8Rng| Payoff::from_gains(&[rng.gen_bool(0.5), rng.gen_bool(0.5)]);
        let (a, b) = (random_payoff(&mut rng), random_payoff(&mut rng));
        intervals.push((a, b));
        for (x, y) in intervals {
            let decided = decide_constraint(&game, 0, &x, &y).unwrap().exists;
            let searched = brute_force_witness_search(&game, 0, &x, &y, max_len, 50_000_000)
                .unwrap()
                .is_some();
            assert_eq!(decided, searched, "case {case}, interval [{x}, {y}]");
        }
    }
    pass(
        "6 witness-search-equivalence",
        started,
        Duration::from_secs(600),
    );
}

fn property_corpus() -> Vec<Game> {
    (0..120u64)
        .map(|i| {
            let class = PREFIX_INDEPENDENT[(i % 7) as usize];
            random_game(&RandomGameParams {
                num_vertices: 2 + (i as usize % 5),
                num_players: 1 + (i as usize % 2),
                objective_class: class,
                edge_density: 0.35,
                seed: 0xc0de ^ i,
            })
        })
        .collect()
}

#[test]
fn acceptance_7_property_suites() {
    let started = Instant::now();
    let corpus = property_corpus();

    // Monotonicity, replay consistency, stability, and the certification of
    // every surviving payoff by a labeled play at the fixpoint.
    for game in &corpus {
        let initial = init_labels(game, 0).unwrap();
        let (table, trace) = run_fixpoint(game, 0).unwrap();
        assert_eq!(&trace.replay(&initial, table.step()), &table);
        let mut previous = initial.clone();
        for step in 1..=table.step() {
            let row = trace.replay(&initial, step);
            for (v, labels) in row.iter() {
                assert!(labels.is_subset(previous.get(v).unwrap()), "monotonicity");
            }
            previous = row;
        }
        assert!(remove_candidates(&table, game).is_empty(), "stability");
        for (v, labels) in table.iter() {
            for p in labels {
                let carriers = table.carriers(p);
                assert!(
                    payoff_path(game, &carriers, p, v).unwrap().is_some(),
                    "surviving payoff {p} at {v} must be certified by a labeled play"
                );
            }
        }
        let deletion_bound = (1u64 << game.num_players()) * game.num_vertices() as u64;
        assert!(
            trace.removals.len() as u64 <= deletion_bound,
            "removal count bound"
        );
        assert!(trace.rounds <= deletion_bound + 1, "round count bound");
    }

    // Removal-order independence on 100 games, three orders each.
    for (i, game) in corpus.iter().take(100).enumerate() {
        let (reference, _) = run_fixpoint(game, 0).unwrap();
        for order in [RemovalOrder::LargestFirst, RemovalOrder::Seeded(i as u64)] {
            let (other, _) = run_fixpoint_ordered(game, 0, order).unwrap();
            let same = reference.iter().all(|(v, set)| other.get(v) == Some(set))
                && other.vertices().count() == reference.vertices().count();
            assert!(same, "order {order:?} changed the fixpoint of game {i}");
        }
    }

    // Product invariant: the satisfied-player set never shrinks.
    for i in 0..20u64 {
        let class = if i % 2 == 0 {
            ObjectiveClass::Reachability
        } else {
            ObjectiveClass::Safety
        };
        let game = random_game(&RandomGameParams {
            num_vertices: 2 + (i as usize % 4),
            num_players: 1 + (i as usize % 3),
            objective_class: class,
            edge_density: 0.35,
            seed: 0xf00d ^ i,
        });
        let product = reach_safety_product(&game, 0).unwrap();
        for (u, v) in product.game.edges() {
            assert!(
                product
                    .structure
                    .satisfied(u)
                    .is_subset(product.structure.satisfied(v)),
                "monotone satisfied sets"
            );
        }
    }

    // End-to-end: wherever a weak subgame perfect equilibrium exists, the
    // whole certificate chain goes through, with the right payoff and the
    // stated size bounds. This is the library-level equivalent of `certify`
    // never exiting 3.
    let zeros_ones = |game: &Game| {
        (
            Payoff::zeros(game.num_players()),
            Payoff::ones(game.num_players()),
        )
    };
    let mut certified = 0usize;
    let mut qbf_rng = ChaCha8Rng::seed_from_u64(0xcafe);
    let mut full_corpus: Vec<Game> = corpus;
    for _ in 0..15 {
        let formula = sample_formula(&mut qbf_rng);
        full_corpus.push(qbf_to_game(&formula, QbfVariant::Reach).game);
        full_corpus.push(qbf_to_game(&formula, QbfVariant::Safety).game);
    }
    for (idx, game) in full_corpus.iter().enumerate() {
        let v0 = game.initial().unwrap();
        let (x, y) = zeros_ones(game);
        let decision = decide_constraint(game, v0, &x, &y).unwrap();
        if !decision.exists {
            continue;
        }
        let payoff = decision.payoff.unwrap();
        let (solved, start, compaction) = match &decision.product {
            Some(product) => (
                &product.game,
                product.initial,
                Compaction::Product(&product.structure),
            ),
            None => (game, v0, Compaction::General),
        };
        let witness = build_witness(solved, &decision.table, start, &payoff, compaction)
            .unwrap_or_else(|e| panic!("game {idx}: witness construction failed: {e}"));
        let report = check_goodness(&witness, solved).unwrap();
        assert!(
            report.good,
            "game {idx}: witness not good: {:?}",
            report.violations
        );

        // Each lasso realizes its recorded payoff and stays within the
        // vertices still labeled by it.
        for wl in witness.lassoes.values() {
            assert_eq!(solved.payoff_of(&wl.lasso), wl.payoff, "game {idx}");
            let carriers = decision.table.carriers(&wl.payoff);
            assert!(
                wl.lasso.occ().is_subset(&carriers),
                "game {idx}: lasso leaves the labeled region"
            );
        }

        // Lasso length bounds: general 2·|V|², product (|Π|+1)·|V| over the
        // base game.
        let bound = match &decision.product {
            Some(product) => (game.num_players() + 1) * product.structure.base_vertices(),
            None => 2 * solved.num_vertices() * solved.num_vertices(),
        };
        assert!(
            witness.max_lasso_len() <= bound,
            "game {idx}: lasso of length {} exceeds bound {bound}",
            witness.max_lasso_len()
        );

        let profile = synthesize_profile(&witness, solved).unwrap();
        let n = solved.num_vertices();
        let profile_bound = (n * solved.num_players() + 1) * (2 * n * n);
        assert!(profile.memory_size() <= profile_bound, "profile size bound");

        let verdict = verify_weak_spe(&profile, solved).unwrap();
        assert!(
            verdict.is_weak_spe,
            "game {idx}: certificate failed verification: {:?}",
            verdict.counterexample
        );
        let outcome = outcome_from(&profile, &profile.initial_configuration());
        assert_eq!(
            solved.payoff_of(&outcome),
            payoff,
            "game {idx}: outcome payoff"
        );
        // Simulation repeats a configuration within the memory budget.
        assert!(
            outcome.len() <= profile.memory_size() + 1,
            "outcome totality"
        );
        certified += 1;
    }
    assert!(certified > 50, "the corpus should certify many games");

    // The binary agrees: certify exits 0 or 1, never 3, on a spot-check.
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR")).join("acceptance7");
    std::fs::create_dir_all(&dir).unwrap();
    for (i, game) in full_corpus.iter().step_by(11).enumerate() {
        let path: PathBuf = dir.join(format!("game{i}.json"));
        std::fs::write(&path, wspe_core::json::game_to_json_string(game)).unwrap();
        let output = std::process::Command::new(env!("CARGO_BIN_EXE_wspe"))
            .args(["certify", "--game"])
            .arg(&path)
            .output()
            .unwrap();
        assert!(
            matches!(output.status.code(), Some(0) | Some(1)),
            "certify exit code {:?} on corpus game {i}",
            output.status.code()
        );
    }
    pass("7 property-suites", started, Duration::from_secs(600));
}
