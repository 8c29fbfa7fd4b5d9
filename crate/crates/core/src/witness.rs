//! Symbolic witnesses: finite families of lassoes certifying a weak subgame
//! perfect equilibrium.
//!
//! A witness holds one lasso per deviation slot `(i, v')` — player `i` can
//! enter `v'` from some reachable vertex — plus the outcome slot `(0, v0)`.
//! It is *good* when no lasso offers its visitor a profitable one-shot
//! switch into another slot's lasso. Good witnesses are built from the
//! labeling fixpoint by compacting labeled plays into bounded lassoes, and
//! an exhaustive search over per-slot lasso classes provides an independent
//! ground truth on tiny games.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use thiserror::Error;

use crate::fixpoint::LabelingTable;
use crate::game::{Game, Lasso, Payoff, Player, Vertex};
use crate::graph;
use crate::oracle::{self, OracleError, PathWitness};
use crate::reductions::ProductStructure;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WitnessError {
    #[error("payoff {payoff} is absent from the label of vertex {vertex}")]
    PayoffAbsent { vertex: Vertex, payoff: Payoff },
    #[error("vertex {0} has an empty label, no equilibrium exists")]
    EmptyLabel(Vertex),
    #[error("no lasso for required slot ({player}, {vertex})")]
    MissingLasso { player: usize, vertex: Vertex },
    #[error("no labeled play with payoff {payoff} from vertex {vertex}")]
    NoLabeledPlay { vertex: Vertex, payoff: Payoff },
    #[error("search budget exceeded")]
    BudgetExceeded,
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

/// The deviation slots of an initialized game: `(0, v0)` plus every pair
/// `(i, v')` such that some edge `(v, v')` between vertices reachable from
/// `v0` leaves a vertex of player `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessIndex {
    entries: BTreeSet<(usize, Vertex)>,
}

impl WitnessIndex {
    /// Assembles an index from explicit entries, e.g. when deserializing a
    /// stored witness; [`witness_index`] computes the canonical one.
    pub fn from_entries(entries: BTreeSet<(usize, Vertex)>) -> Self {
        WitnessIndex { entries }
    }

    pub fn entries(&self) -> &BTreeSet<(usize, Vertex)> {
        &self.entries
    }

    pub fn contains(&self, tag: usize, v: Vertex) -> bool {
        self.entries.contains(&(tag, v))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

pub fn witness_index(game: &Game, v0: Vertex) -> WitnessIndex {
    let reach = game.reachable_set(v0);
    let mut entries = BTreeSet::from([(0usize, v0)]);
    for &v in &reach {
        for &w in game.successors(v) {
            entries.insert((game.owner(v), w));
        }
    }
    WitnessIndex { entries }
}

/// A slot's lasso together with its payoff.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessLasso {
    pub lasso: Lasso,
    pub payoff: Payoff,
}

/// A symbolic witness: one lasso per slot, each starting at its slot's
/// vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolicWitness {
    pub index: WitnessIndex,
    pub lassoes: BTreeMap<(usize, Vertex), WitnessLasso>,
}

impl SymbolicWitness {
    pub fn outcome(&self) -> Option<&WitnessLasso> {
        self.lassoes
            .iter()
            .find(|((tag, _), _)| *tag == 0)
            .map(|(_, wl)| wl)
    }

    pub fn max_lasso_len(&self) -> usize {
        self.lassoes
            .values()
            .map(|wl| wl.lasso.len())
            .max()
            .unwrap_or(0)
    }
}

fn rotate_to(walk: &[Vertex], start: Vertex) -> Vec<Vertex> {
    let pos = walk
        .iter()
        .position(|&v| v == start)
        .expect("walk covers the rotation target");
    let mut rotated = Vec::with_capacity(walk.len());
    rotated.extend_from_slice(&walk[pos..]);
    rotated.extend_from_slice(&walk[..pos]);
    rotated
}

/// Compacts a path witness into a lasso of length at most `2·|V|²`: the
/// stem loses all its cycles and the infinite-visit set is entered through
/// its covering walk, so the infinite-visit set — and hence the payoff and
/// any labeling the witness respected — is preserved exactly.
pub fn compact_to_lasso(witness: &PathWitness, game: &Game) -> Lasso {
    let walk =
        oracle::closed_walk_covering(game, &witness.inf_set).expect("witness set is realizable");
    let simple = graph::eliminate_cycles(&witness.stem);
    match simple.last() {
        Some(&last) if witness.inf_set.contains(&last) => {
            let cycle = rotate_to(&walk, last);
            Lasso::new(simple[..simple.len() - 1].to_vec(), cycle)
        }
        Some(&last) => {
            debug_assert!(game.has_edge(last, walk[0]), "stem must reach the walk");
            Lasso::new(simple, walk)
        }
        None => Lasso::new(Vec::new(), walk),
    }
}

/// Product-game compaction with the tighter `(|Π|+1)·|V|` bound (`|V|`
/// counting the base game's vertices).
///
/// Along a product play the satisfied-player set only grows, so the stem
/// splits into at most `|Π|` simple phases below the final set; once the
/// final set is reached, cutting at the first repeated vertex yields a
/// cycle inside the final region. The cycle may cover only part of the
/// witness set, which is harmless: product gains depend only on the final
/// satisfied-player set.
pub fn compact_to_lasso_in_product(
    witness: &PathWitness,
    game: &Game,
    product: &ProductStructure,
) -> Lasso {
    let final_set = product
        .satisfied(*witness.inf_set.iter().next().expect("nonempty inf set"))
        .clone();
    let stem = &witness.stem;
    let entry = stem
        .iter()
        .position(|&v| product.satisfied(v) == &final_set)
        .expect("stem ends inside the final region");
    let head = graph::eliminate_cycles(&stem[..entry]);
    let last = *stem.last().expect("witness stems are nonempty");
    let walk = rotate_to(
        &oracle::closed_walk_covering(game, &witness.inf_set).expect("realizable set"),
        last,
    );
    let mut tail: Vec<Vertex> = stem[entry..].to_vec();
    tail.extend_from_slice(&walk[1..]);
    tail.push(walk[0]);
    let mut first_seen: HashMap<Vertex, usize> = HashMap::new();
    let mut cut = None;
    for (idx, &v) in tail.iter().enumerate() {
        if let Some(&first) = first_seen.get(&v) {
            cut = Some((first, idx));
            break;
        }
        first_seen.insert(v, idx);
    }
    let (from, to) = cut.expect("the covering walk closes on itself");
    let mut lasso_stem = head;
    lasso_stem.extend_from_slice(&tail[..from]);
    Lasso::new(lasso_stem, tail[from..to].to_vec())
}

/// How [`build_witness`] turns labeled plays into lassoes.
#[derive(Debug, Clone, Copy)]
pub enum Compaction<'a> {
    /// The general `2·|V|²` bound.
    General,
    /// The `(|Π|+1)·|V|` bound for product games.
    Product(&'a ProductStructure),
}

/// Builds a good symbolic witness from a stable labeling table.
///
/// The outcome slot carries a labeled play with payoff `p0`. Every other
/// slot `(i, v')` carries a labeled play whose payoff minimizes player `i`'s
/// component over the labels of `v'` (ties broken toward the
/// lexicographically smallest payoff), which is exactly what makes the
/// deviation unprofitable.
pub fn build_witness(
    game: &Game,
    table: &LabelingTable,
    v0: Vertex,
    p0: &Payoff,
    compaction: Compaction<'_>,
) -> Result<SymbolicWitness, WitnessError> {
    for (v, labels) in table.iter() {
        if labels.is_empty() {
            return Err(WitnessError::EmptyLabel(v));
        }
    }
    if !table.contains(v0, p0) {
        return Err(WitnessError::PayoffAbsent {
            vertex: v0,
            payoff: *p0,
        });
    }
    let index = witness_index(game, v0);
    let mut lassoes = BTreeMap::new();
    for &(tag, v) in index.entries() {
        let payoff = if tag == 0 {
            *p0
        } else {
            let labels = table.get(v).expect("slots are reachable");
            let best = labels
                .iter()
                .map(|q| q.get(tag))
                .min()
                .expect("nonempty label");
            *labels
                .iter()
                .find(|q| q.get(tag) == best)
                .expect("minimum is attained")
        };
        let carriers = table.carriers(&payoff);
        let path = oracle::payoff_path(game, &carriers, &payoff, v)?
            .ok_or(WitnessError::NoLabeledPlay { vertex: v, payoff })?;
        let lasso = match compaction {
            Compaction::General => compact_to_lasso(&path, game),
            Compaction::Product(structure) => compact_to_lasso_in_product(&path, game, structure),
        };
        lassoes.insert((tag, v), WitnessLasso { lasso, payoff });
    }
    Ok(SymbolicWitness { index, lassoes })
}

/// A failed goodness comparison: on slot `slot`'s lasso, vertex `at_vertex`
/// of player `player` could switch into slot `(player, target)` and gain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoodnessViolation {
    pub slot: (usize, Vertex),
    pub at_vertex: Vertex,
    pub player: Player,
    pub target: Vertex,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoodnessReport {
    pub good: bool,
    pub violations: Vec<GoodnessViolation>,
}

/// Checks the goodness condition: for every lasso of the witness, every
/// vertex `v` on it owned by player `i`, and every successor `v'` of `v`
/// indexed as a deviation slot, the lasso must give `i` at least the gain
/// of the slot's lasso. Gains are recomputed from the lassoes.
pub fn check_goodness(
    witness: &SymbolicWitness,
    game: &Game,
) -> Result<GoodnessReport, WitnessError> {
    for &(tag, v) in witness.index.entries() {
        if !witness.lassoes.contains_key(&(tag, v)) {
            return Err(WitnessError::MissingLasso {
                player: tag,
                vertex: v,
            });
        }
    }
    let payoffs: BTreeMap<(usize, Vertex), Payoff> = witness
        .lassoes
        .iter()
        .map(|(&slot, wl)| (slot, game.payoff_of(&wl.lasso)))
        .collect();
    let mut violations = Vec::new();
    for (&(tag, first), wl) in &witness.lassoes {
        let source_payoff = payoffs[&(tag, first)];
        for v in wl.lasso.occ() {
            let player = game.owner(v);
            if source_payoff.get(player) {
                continue;
            }
            for &target in game.successors(v) {
                if !witness.index.contains(player, target) {
                    continue;
                }
                let Some(target_payoff) = payoffs.get(&(player, target)) else {
                    continue;
                };
                if target_payoff.get(player) {
                    violations.push(GoodnessViolation {
                        slot: (tag, first),
                        at_vertex: v,
                        player,
                        target,
                    });
                }
            }
        }
    }
    Ok(GoodnessReport {
        good: violations.is_empty(),
        violations,
    })
}

/// A lasso from a fixed vertex, keyed by what goodness can observe: its
/// visited set and its infinite-visit set.
struct LassoClass {
    lasso: Lasso,
    payoff: Payoff,
    /// Indexed slots some vertex of the lasso can deviate into.
    triggers: u64,
}

/// Enumerates one minimal-length lasso per realizable `(Occ, Inf)` class
/// from `from`, up to the length bound, by breadth-first search over
/// abstract states (current vertex plus visited masks).
fn enumerate_lasso_classes(game: &Game, from: Vertex, max_len: usize) -> Vec<(u64, u64, Lasso)> {
    #[derive(Clone, Copy, PartialEq, Eq, Hash)]
    enum State {
        Stem {
            cur: Vertex,
            occ: u64,
        },
        Cycle {
            start: Vertex,
            cur: Vertex,
            occ: u64,
            cyc: u64,
        },
    }
    #[derive(Clone, Copy)]
    enum Action {
        Push(Vertex),
        Enter,
    }
    assert!(game.num_vertices() <= 64, "brute force is for tiny games");
    let bit = |v: Vertex| 1u64 << v;

    let init = State::Stem {
        cur: from,
        occ: bit(from),
    };
    let mut parents: HashMap<State, (Option<State>, Action)> = HashMap::new();
    parents.insert(init, (None, Action::Push(from)));
    let mut visited: HashSet<State> = HashSet::from([init]);
    let mut queue = std::collections::VecDeque::from([(init, 1usize)]);
    let mut classes: BTreeMap<(u64, u64), Lasso> = BTreeMap::new();

    let reconstruct = |parents: &HashMap<State, (Option<State>, Action)>, state: State| -> Lasso {
        let mut actions = Vec::new();
        let mut cur = Some(state);
        while let Some(s) = cur {
            let (parent, action) = parents[&s];
            actions.push(action);
            cur = parent;
        }
        actions.reverse();
        let mut walk = Vec::new();
        let mut split = None;
        for action in actions {
            match action {
                Action::Push(v) => walk.push(v),
                Action::Enter => split = Some(walk.len() - 1),
            }
        }
        let split = split.expect("cycle states passed an enter action");
        Lasso::new(walk[..split].to_vec(), walk[split..].to_vec())
    };

    while let Some((state, len)) = queue.pop_front() {
        match state {
            State::Stem { cur, occ } => {
                // Entering the cycle costs nothing: the current vertex
                // becomes the cycle start. Zero-cost transitions go to the
                // queue front so first discovery stays minimal.
                let entered = State::Cycle {
                    start: cur,
                    cur,
                    occ,
                    cyc: bit(cur),
                };
                if visited.insert(entered) {
                    parents.insert(entered, (Some(state), Action::Enter));
                    queue.push_front((entered, len));
                }
                if len < max_len {
                    for &w in game.successors(cur) {
                        let next = State::Stem {
                            cur: w,
                            occ: occ | bit(w),
                        };
                        if visited.insert(next) {
                            parents.insert(next, (Some(state), Action::Push(w)));
                            queue.push_back((next, len + 1));
                        }
                    }
                }
            }
            State::Cycle {
                start,
                cur,
                occ,
                cyc,
            } => {
                if game.has_edge(cur, start) {
                    classes
                        .entry((occ, cyc))
                        .or_insert_with(|| reconstruct(&parents, state));
                }
                if len < max_len {
                    for &w in game.successors(cur) {
                        let next = State::Cycle {
                            start,
                            cur: w,
                            occ: occ | bit(w),
                            cyc: cyc | bit(w),
                        };
                        if visited.insert(next) {
                            parents.insert(next, (Some(state), Action::Push(w)));
                            queue.push_back((next, len + 1));
                        }
                    }
                }
            }
        }
    }
    classes
        .into_iter()
        .map(|((occ, cyc), lasso)| (occ, cyc, lasso))
        .collect()
}

/// Exhaustively searches for a good symbolic witness whose outcome payoff
/// lies in `[x, y]` and whose every lasso has length at most `max_len`.
///
/// Goodness only observes each lasso through its visited set (which slots it
/// can deviate into) and its payoff, so the search ranges over one canonical
/// lasso per `(Occ, Inf)` class and prunes slot by slot. Intended for tiny
/// games; `budget` caps the number of search nodes.
pub fn brute_force_witness_search(
    game: &Game,
    v0: Vertex,
    x: &Payoff,
    y: &Payoff,
    max_len: usize,
    budget: u64,
) -> Result<Option<SymbolicWitness>, WitnessError> {
    let index = witness_index(game, v0);
    let slots: Vec<(usize, Vertex)> = index.entries().iter().copied().collect();
    assert!(slots.len() <= 64, "brute force is for tiny games");

    let candidates: Vec<Vec<LassoClass>> = slots
        .iter()
        .map(|&(_, v)| {
            enumerate_lasso_classes(game, v, max_len)
                .into_iter()
                .map(|(occ_mask, _, lasso)| {
                    let payoff = game.payoff_of(&lasso);
                    let mut triggers = 0u64;
                    for (slot_idx, &(tag, target)) in slots.iter().enumerate() {
                        if tag == 0 {
                            continue;
                        }
                        let reachable = (0..game.num_vertices()).any(|u| {
                            occ_mask >> u & 1 == 1
                                && game.owner(u) == tag
                                && game.has_edge(u, target)
                        });
                        if reachable {
                            triggers |= 1 << slot_idx;
                        }
                    }
                    LassoClass {
                        lasso,
                        payoff,
                        triggers,
                    }
                })
                .collect()
        })
        .collect();

    struct Search<'a> {
        slots: &'a [(usize, Vertex)],
        candidates: &'a [Vec<LassoClass>],
        chosen: Vec<usize>,
        budget: u64,
    }

    impl Search<'_> {
        fn compatible(&self, slot: usize, cand: &LassoClass) -> bool {
            for (other_slot, &other_idx) in self.chosen.iter().enumerate() {
                let other = &self.candidates[other_slot][other_idx];
                // The new lasso deviating into an assigned slot.
                if cand.triggers >> other_slot & 1 == 1 {
                    let player = self.slots[other_slot].0;
                    if !cand.payoff.get(player) && other.payoff.get(player) {
                        return false;
                    }
                }
                // An assigned lasso deviating into the new slot.
                if other.triggers >> slot & 1 == 1 {
                    let player = self.slots[slot].0;
                    if !other.payoff.get(player) && cand.payoff.get(player) {
                        return false;
                    }
                }
            }
            true
        }

        fn run(&mut self, slot: usize, x: &Payoff, y: &Payoff) -> Result<bool, WitnessError> {
            if slot == self.slots.len() {
                return Ok(true);
            }
            for idx in 0..self.candidates[slot].len() {
                if self.budget == 0 {
                    return Err(WitnessError::BudgetExceeded);
                }
                self.budget -= 1;
                let cand = &self.candidates[slot][idx];
                if self.slots[slot].0 == 0 && !cand.payoff.in_range(x, y) {
                    continue;
                }
                if !self.compatible(slot, cand) {
                    continue;
                }
                self.chosen.push(idx);
                if self.run(slot + 1, x, y)? {
                    return Ok(true);
                }
                self.chosen.pop();
            }
            Ok(false)
        }
    }

    let mut search = Search {
        slots: &slots,
        candidates: &candidates,
        chosen: Vec::new(),
        budget,
    };
    if !search.run(0, x, y)? {
        return Ok(None);
    }
    let lassoes = slots
        .iter()
        .zip(&search.chosen)
        .enumerate()
        .map(|(pos, (&slot, &idx))| {
            let cand = &candidates[pos][idx];
            (
                slot,
                WitnessLasso {
                    lasso: cand.lasso.clone(),
                    payoff: cand.payoff,
                },
            )
        })
        .collect();
    Ok(Some(SymbolicWitness { index, lassoes }))
}
