//! The labeling fixpoint and the constrained-existence decision.
//!
//! Every vertex reachable from the initial vertex is labeled with the set of
//! payoffs of plays that start there. Labels then shrink by alternating two
//! operations until stable:
//!
//! * remove — if the owner of `v` has a successor whose every surviving
//!   payoff beats some payoff `p` at `v` in the owner's component, that `p`
//!   is no longer credible at `v` and one such `(v, p)` is deleted;
//! * adjust — every other vertex still carrying `p` must re-certify a play
//!   with payoff `p` that only visits vertices still labeled `p`.
//!
//! The stable labels at the initial vertex are exactly the payoffs of weak
//! subgame perfect equilibria, which [`decide_constraint`] intersects with a
//! componentwise threshold interval. Reachability and Safety games are
//! routed through the product construction transparently.
//!
//! Cost structure: with `m` the largest initial label size (at most `2^|Π|`,
//! and only the family signatures plus zero for Explicit Muller), the loop
//! runs at most `m·|V| + 1` rounds since every round deletes a payoff. Each
//! round scans all vertices and edges against up to `m²` payoff pairs and
//! re-certifies the carriers of one payoff with one path query each, so the
//! path oracle's complexity dominates. [`FixpointTrace`] records the rounds
//! and every deletion for replay and inspection.

use std::collections::{BTreeMap, BTreeSet};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::game::{Game, Payoff, Vertex};
use crate::oracle::{self, OracleError};
use crate::reductions::{reach_safety_product, ProductGame};

/// Per-vertex payoff label sets at an even step of the fixpoint
/// computation. Only vertices reachable from the query vertex appear.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelingTable {
    labels: BTreeMap<Vertex, BTreeSet<Payoff>>,
    step: u64,
}

impl LabelingTable {
    pub fn step(&self) -> u64 {
        self.step
    }

    pub fn get(&self, v: Vertex) -> Option<&BTreeSet<Payoff>> {
        self.labels.get(&v)
    }

    pub fn contains(&self, v: Vertex, p: &Payoff) -> bool {
        self.labels.get(&v).is_some_and(|set| set.contains(p))
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.labels.keys().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Vertex, &BTreeSet<Payoff>)> {
        self.labels.iter().map(|(&v, set)| (v, set))
    }

    /// True when no reachable vertex has lost all its payoffs.
    pub fn all_nonempty(&self) -> bool {
        self.labels.values().all(|set| !set.is_empty())
    }

    /// Vertices currently carrying payoff `p`.
    pub fn carriers(&self, p: &Payoff) -> BTreeSet<Vertex> {
        self.labels
            .iter()
            .filter(|(_, set)| set.contains(p))
            .map(|(&v, _)| v)
            .collect()
    }

    fn remove(&mut self, v: Vertex, p: &Payoff) {
        self.labels.get_mut(&v).expect("labeled vertex").remove(p);
    }
}

/// Why a payoff left the table.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RemovalCause {
    Remove,
    Adjust,
}

/// One deletion, tagged with the step at which it happened: removals occur
/// at odd steps, adjust deletions at the following even step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceEvent {
    pub step: u64,
    pub vertex: Vertex,
    pub payoff: Payoff,
    pub cause: RemovalCause,
}

/// Replayable record of a fixpoint run.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FixpointTrace {
    pub removals: Vec<TraceEvent>,
    /// Remove/adjust iterations executed, including the final one that
    /// found nothing to remove.
    pub rounds: u64,
}

impl FixpointTrace {
    /// Applies the recorded deletions with `step <= up_to_step` to an
    /// initial table; replaying the full trace reproduces the fixpoint.
    pub fn replay(&self, initial: &LabelingTable, up_to_step: u64) -> LabelingTable {
        let mut table = initial.clone();
        for event in self.removals.iter().filter(|e| e.step <= up_to_step) {
            table.remove(event.vertex, &event.payoff);
        }
        table.step = up_to_step;
        table
    }
}

/// Which matching `(vertex, payoff)` the remove operation deletes when
/// several qualify. All orders reach the same fixpoint; the seeded order
/// exists to test exactly that.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RemovalOrder {
    /// Smallest vertex, then lexicographically smallest payoff (default).
    SmallestFirst,
    /// Largest vertex, then lexicographically largest payoff.
    LargestFirst,
    /// Uniformly random among the candidates, deterministic in the seed.
    Seeded(u64),
}

/// Initial labels: for each vertex reachable from `v0`, all payoffs
/// realized by some play from it. Requires prefix-independent objectives.
pub fn init_labels(game: &Game, v0: Vertex) -> Result<LabelingTable, OracleError> {
    let reach = game.reachable_set(v0);
    let candidates = candidate_payoffs(game);
    let mut labels: BTreeMap<Vertex, BTreeSet<Payoff>> = BTreeMap::new();
    for &v in &reach {
        let mut set = BTreeSet::new();
        for p in &candidates {
            if oracle::payoff_path(game, &reach, p, v)?.is_some() {
                set.insert(*p);
            }
        }
        labels.insert(v, set);
    }
    Ok(LabelingTable { labels, step: 0 })
}

/// Payoffs that can appear at all. Explicit Muller games admit only the
/// family signatures plus the all-zero payoff; everywhere else the full
/// hypercube is scanned.
fn candidate_payoffs(game: &Game) -> Vec<Payoff> {
    use crate::game::ObjectiveSpec;
    let n = game.num_players();
    if game.objective_class() == crate::game::ObjectiveClass::ExplicitMuller {
        let mut sets: BTreeSet<BTreeSet<Vertex>> = BTreeSet::new();
        for player in 1..=n {
            if let ObjectiveSpec::ExplicitMuller(family) = game.objective(player) {
                sets.extend(family.iter().cloned());
            }
        }
        let mut payoffs: BTreeSet<Payoff> = BTreeSet::from([Payoff::zeros(n)]);
        for f in &sets {
            let mut p = Payoff::zeros(n);
            for player in 1..=n {
                if let ObjectiveSpec::ExplicitMuller(family) = game.objective(player) {
                    p = p.with(player, family.contains(f));
                }
            }
            payoffs.insert(p);
        }
        payoffs.into_iter().collect()
    } else {
        Payoff::enumerate(n).collect()
    }
}

/// All `(vertex, payoff)` pairs the remove operation may delete: the vertex
/// owner prefers some successor whose every surviving payoff strictly beats
/// `p` in the owner's component. Sorted ascending.
///
/// The comparison quantifies over the successor's surviving payoffs, so an
/// emptied successor label qualifies vacuously; in a valid game labels never
/// empty, since an equilibrium always exists.
pub fn remove_candidates(table: &LabelingTable, game: &Game) -> Vec<(Vertex, Payoff)> {
    let mut found = Vec::new();
    for (v, payoffs) in table.iter() {
        let player = game.owner(v);
        for p in payoffs {
            let improving = game.successors(v).iter().any(|&w| {
                table
                    .get(w)
                    .is_some_and(|succ| succ.iter().all(|q| q.get(player) && !p.get(player)))
            });
            if improving {
                found.push((v, *p));
            }
        }
    }
    found
}

/// One remove operation under the default order: deletes the smallest
/// matching `(vertex, payoff)` pair, if any.
pub fn remove_step(
    table: &LabelingTable,
    game: &Game,
) -> (LabelingTable, Option<(Vertex, Payoff)>) {
    debug_assert!(
        table.step.is_multiple_of(2),
        "remove acts on a settled table"
    );
    let candidates = remove_candidates(table, game);
    apply_removal(table, candidates.first().copied())
}

fn apply_removal(
    table: &LabelingTable,
    removed: Option<(Vertex, Payoff)>,
) -> (LabelingTable, Option<(Vertex, Payoff)>) {
    let mut next = table.clone();
    if let Some((v, p)) = removed {
        next.remove(v, &p);
    }
    (next, removed)
}

/// One adjust operation: after `(v, p)` was removed, every other carrier of
/// `p` keeps it only if a play with payoff `p` through `p`-labeled vertices
/// still exists. With no preceding removal the table is unchanged.
pub fn adjust_step(
    table: &LabelingTable,
    game: &Game,
    removed: Option<(Vertex, Payoff)>,
) -> Result<LabelingTable, OracleError> {
    Ok(adjust_step_dropping(table, game, removed)?.0)
}

fn adjust_step_dropping(
    table: &LabelingTable,
    game: &Game,
    removed: Option<(Vertex, Payoff)>,
) -> Result<(LabelingTable, Vec<(Vertex, Payoff)>), OracleError> {
    let Some((_, p)) = removed else {
        return Ok((table.clone(), Vec::new()));
    };
    // Every check reads the frozen post-remove carrier set; with
    // prefix-independent gains a surviving play through a dropped carrier
    // would certify that carrier too, so one pass settles the payoff.
    let carriers = table.carriers(&p);
    let mut next = table.clone();
    let mut dropped = Vec::new();
    for &u in &carriers {
        if oracle::payoff_path(game, &carriers, &p, u)?.is_none() {
            next.remove(u, &p);
            dropped.push((u, p));
        }
    }
    Ok((next, dropped))
}

/// Runs the fixpoint with the default removal order.
pub fn run_fixpoint(
    game: &Game,
    v0: Vertex,
) -> Result<(LabelingTable, FixpointTrace), OracleError> {
    run_fixpoint_ordered(game, v0, RemovalOrder::SmallestFirst)
}

/// Runs remove/adjust rounds from the initial labels until no removal
/// applies. The result is order-independent; the chosen `order` only
/// controls which candidate goes first each round.
pub fn run_fixpoint_ordered(
    game: &Game,
    v0: Vertex,
    order: RemovalOrder,
) -> Result<(LabelingTable, FixpointTrace), OracleError> {
    let mut table = init_labels(game, v0)?;
    let mut trace = FixpointTrace::default();
    let mut rng = match order {
        RemovalOrder::Seeded(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
        _ => None,
    };
    loop {
        trace.rounds += 1;
        let candidates = remove_candidates(&table, game);
        let chosen = match order {
            RemovalOrder::SmallestFirst => candidates.first().copied(),
            RemovalOrder::LargestFirst => candidates.last().copied(),
            RemovalOrder::Seeded(_) => {
                let rng = rng.as_mut().expect("seeded order has an rng");
                if candidates.is_empty() {
                    None
                } else {
                    Some(candidates[rng.gen_range(0..candidates.len())])
                }
            }
        };
        let Some((v, p)) = chosen else {
            // Nothing removable: the table is stable.
            break;
        };
        let odd_step = table.step + 1;
        let even_step = table.step + 2;
        let (after_remove, removed) = apply_removal(&table, Some((v, p)));
        trace.removals.push(TraceEvent {
            step: odd_step,
            vertex: v,
            payoff: p,
            cause: RemovalCause::Remove,
        });
        let (after_adjust, dropped) = adjust_step_dropping(&after_remove, game, removed)?;
        for (u, q) in dropped {
            trace.removals.push(TraceEvent {
                step: even_step,
                vertex: u,
                payoff: q,
                cause: RemovalCause::Adjust,
            });
        }
        table = after_adjust;
        table.step = even_step;
    }
    Ok((table, trace))
}

/// Outcome of the constrained-existence decision.
#[derive(Debug, Clone)]
pub struct Decision {
    pub exists: bool,
    /// Lexicographically smallest equilibrium payoff inside the interval.
    pub payoff: Option<Payoff>,
    /// Final labels; for Reachability/Safety inputs these live on the
    /// product game.
    pub table: LabelingTable,
    pub trace: FixpointTrace,
    /// Present exactly when the input needed the product construction.
    pub product: Option<ProductGame>,
}

/// Decides whether a weak subgame perfect equilibrium with payoff `p`,
/// `x <= p <= y` componentwise, exists from `v0`: the fixpoint must keep
/// every reachable vertex nonempty and the initial vertex must retain a
/// payoff inside the interval. Reachability and Safety games are lifted to
/// their product first; product payoffs coincide with the original ones.
pub fn decide_constraint(
    game: &Game,
    v0: Vertex,
    x: &Payoff,
    y: &Payoff,
) -> Result<Decision, OracleError> {
    let product = if game.is_prefix_independent() {
        None
    } else {
        let lifted =
            reach_safety_product(game, v0).expect("non-prefix-independent games have a product");
        Some(lifted)
    };
    let (solve_game, start) = match &product {
        Some(p) => (&p.game, p.initial),
        None => (game, v0),
    };
    let (table, trace) = run_fixpoint(solve_game, start)?;
    let payoff = if table.all_nonempty() {
        table
            .get(start)
            .into_iter()
            .flatten()
            .find(|p| p.in_range(x, y))
            .copied()
    } else {
        None
    };
    Ok(Decision {
        exists: payoff.is_some(),
        payoff,
        table,
        trace,
        product,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::{demo_game, pf, self_loop_game, vset};

    fn table_row(table: &LabelingTable, expected: &[(Vertex, &[&str])]) {
        assert_eq!(table.vertices().count(), expected.len());
        for (v, strs) in expected {
            let want: BTreeSet<Payoff> = strs.iter().map(|s| pf(s)).collect();
            assert_eq!(table.get(*v), Some(&want), "labels of vertex {v}");
        }
    }

    #[test]
    fn initial_labels_of_demo_game() {
        let g = demo_game();
        let table = init_labels(&g, 0).unwrap();
        table_row(
            &table,
            &[
                (0, &["00", "10", "01"]),
                (1, &["10", "01"]),
                (2, &["10", "01"]),
                (3, &["01"]),
                (4, &["00", "01"]),
                (5, &["01"]),
                (6, &["00"]),
            ],
        );
    }

    #[test]
    fn initial_labels_of_self_loop() {
        let g = self_loop_game();
        let table = init_labels(&g, 0).unwrap();
        table_row(&table, &[(0, &["1"])]);
    }

    #[test]
    fn initial_labels_skip_unreachable_vertices() {
        // Two disconnected halves; only the half of the initial vertex is
        // labeled.
        let g = crate::game::Game::new(
            1,
            vec![1, 1, 1, 1],
            vec![(0, 1), (1, 0), (2, 3), (3, 2)],
            vec![crate::game::ObjectiveSpec::Buchi(vset(&[1]))],
            Some(0),
        )
        .unwrap();
        let table = init_labels(&g, 0).unwrap();
        assert_eq!(table.vertices().collect::<Vec<_>>(), vec![0, 1]);
    }

    #[test]
    fn remove_steps_follow_the_documented_order() {
        let g = demo_game();
        let t0 = init_labels(&g, 0).unwrap();
        // First removal: (0,0) at vertex 4, whose owner 2 can move to 5.
        let (t1, removed) = remove_step(&t0, &g);
        assert_eq!(removed, Some((4, pf("00"))));
        // Adjust drops (0,0) at vertex 0.
        let t2 = {
            let mut t = adjust_step(&t1, &g, removed).unwrap();
            t.step = 2;
            t
        };
        assert_eq!(
            t2.get(0).unwrap().iter().copied().collect::<Vec<_>>(),
            vec![pf("01"), pf("10")]
        );
        // Second removal: (1,0) at vertex 0, owner 2 prefers vertex 4.
        let (t3, removed) = remove_step(&t2, &g);
        assert_eq!(removed, Some((0, pf("10"))));
        // Adjust leaves everything unchanged.
        let t4 = {
            let mut t = adjust_step(&t3, &g, removed).unwrap();
            t.step = 4;
            t
        };
        assert_eq!(t4.get(1), t3.get(1));
        assert_eq!(t4.get(2), t3.get(2));
        // No removal applies: fixpoint.
        let (_, removed) = remove_step(&t4, &g);
        assert_eq!(removed, None);
    }

    #[test]
    fn adjust_without_removal_is_identity() {
        let g = demo_game();
        let t0 = init_labels(&g, 0).unwrap();
        assert_eq!(adjust_step(&t0, &g, None).unwrap(), t0);
    }

    #[test]
    fn fixpoint_of_demo_game() {
        let g = demo_game();
        let (table, trace) = run_fixpoint(&g, 0).unwrap();
        table_row(
            &table,
            &[
                (0, &["01"]),
                (1, &["10", "01"]),
                (2, &["10", "01"]),
                (3, &["01"]),
                (4, &["01"]),
                (5, &["01"]),
                (6, &["00"]),
            ],
        );
        assert_eq!(table.step(), 4);
        assert_eq!(trace.rounds, 3);
        let got: Vec<(u64, Vertex, Payoff, RemovalCause)> = trace
            .removals
            .iter()
            .map(|e| (e.step, e.vertex, e.payoff, e.cause))
            .collect();
        assert_eq!(
            got,
            vec![
                (1, 4, pf("00"), RemovalCause::Remove),
                (2, 0, pf("00"), RemovalCause::Adjust),
                (3, 0, pf("10"), RemovalCause::Remove),
            ]
        );
    }

    #[test]
    fn fixpoint_of_self_loop_has_no_removals() {
        let g = self_loop_game();
        let (table, trace) = run_fixpoint(&g, 0).unwrap();
        assert_eq!(table, init_labels(&g, 0).unwrap());
        assert!(trace.removals.is_empty());
        assert_eq!(trace.rounds, 1);
    }

    #[test]
    fn trace_replay_reproduces_every_row() {
        let g = demo_game();
        let initial = init_labels(&g, 0).unwrap();
        let (table, trace) = run_fixpoint(&g, 0).unwrap();
        assert_eq!(trace.replay(&initial, 4), table);
        // Row at step 1: only the first removal applied.
        let row1 = trace.replay(&initial, 1);
        assert_eq!(row1.get(4).unwrap(), &BTreeSet::from([pf("01")]));
        assert_eq!(row1.get(0).unwrap().len(), 3);
    }

    #[test]
    fn decisions_on_demo_game() {
        let g = demo_game();
        let d = decide_constraint(&g, 0, &pf("00"), &pf("11")).unwrap();
        assert!(d.exists);
        assert_eq!(d.payoff, Some(pf("01")));
        assert!(d.product.is_none());

        let d = decide_constraint(&g, 0, &pf("10"), &pf("11")).unwrap();
        assert!(!d.exists);
        assert_eq!(d.payoff, None);

        // Empty interval.
        let d = decide_constraint(&g, 0, &pf("11"), &pf("00")).unwrap();
        assert!(!d.exists);
    }

    #[test]
    fn decision_routes_occurrence_games_through_the_product() {
        let g = crate::game::Game::new(
            1,
            vec![1, 1],
            vec![(0, 1), (1, 1)],
            vec![crate::game::ObjectiveSpec::Reachability(vset(&[1]))],
            Some(0),
        )
        .unwrap();
        let d = decide_constraint(&g, 0, &pf("1"), &pf("1")).unwrap();
        assert!(d.exists);
        assert_eq!(d.payoff, Some(pf("1")));
        assert!(d.product.is_some());
    }

    #[test]
    fn all_orders_reach_the_same_fixpoint() {
        let g = demo_game();
        let (reference, _) = run_fixpoint(&g, 0).unwrap();
        for order in [
            RemovalOrder::LargestFirst,
            RemovalOrder::Seeded(3),
            RemovalOrder::Seeded(11),
        ] {
            let (table, _) = run_fixpoint_ordered(&g, 0, order).unwrap();
            assert_eq!(table.labels, reference.labels);
        }
    }

    /// Batch-removal variant used as an independent oracle: delete every
    /// matching pair at once, then settle each touched payoff.
    fn batch_fixpoint(game: &Game, v0: Vertex) -> LabelingTable {
        let mut table = init_labels(game, v0).unwrap();
        loop {
            let candidates = remove_candidates(&table, game);
            if candidates.is_empty() {
                return table;
            }
            let mut payoffs: BTreeSet<Payoff> = BTreeSet::new();
            for (v, p) in candidates {
                table.remove(v, &p);
                payoffs.insert(p);
            }
            let mut changed = true;
            while changed {
                changed = false;
                for p in &payoffs {
                    let carriers = table.carriers(p);
                    for &u in &carriers {
                        if oracle::payoff_path(game, &carriers, p, u)
                            .unwrap()
                            .is_none()
                        {
                            table.remove(u, p);
                            changed = true;
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn sampled_parity_decision_is_order_stable() {
        use crate::reductions::{random_game, RandomGameParams};
        let g = random_game(&RandomGameParams {
            num_vertices: 5,
            num_players: 2,
            objective_class: crate::game::ObjectiveClass::Parity,
            edge_density: 0.4,
            seed: 1,
        });
        let (reference, _) = run_fixpoint(&g, 0).unwrap();
        for order in [RemovalOrder::LargestFirst, RemovalOrder::Seeded(42)] {
            let (table, _) = run_fixpoint_ordered(&g, 0, order).unwrap();
            assert_eq!(table.labels, reference.labels);
        }
    }

    #[test]
    fn batch_removal_oracle_agrees_on_random_games() {
        use crate::reductions::{random_game, RandomGameParams};
        for seed in 0..30 {
            let g = random_game(&RandomGameParams {
                num_vertices: 2 + (seed as usize % 5),
                num_players: 2,
                objective_class: crate::game::ObjectiveClass::Buchi,
                edge_density: 0.35,
                seed,
            });
            let (table, _) = run_fixpoint(&g, 0).unwrap();
            let batch = batch_fixpoint(&g, 0);
            assert_eq!(table.labels, batch.labels, "seed {seed}");
        }
    }
}
