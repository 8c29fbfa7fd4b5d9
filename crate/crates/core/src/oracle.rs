//! Path oracles: decide whether an infinite path with a prescribed payoff
//! exists inside a vertex-restricted subgraph, and extract a constructive
//! witness when it does.
//!
//! A witness is a stem plus a realizable set `S` of vertices: `S` induces a
//! strongly connected subgraph with at least one edge, so a play can enter
//! via the stem and then cycle forever with `Inf = S`. All queries reduce to
//! searching strongly connected sets with the right membership pattern:
//!
//! * generalized Büchi ∧ co-Büchi — one pass over the maximal SCCs of the
//!   restricted reachable subgraph;
//! * Streett conjunctions — recursive SCC decomposition, deleting the `G`
//!   sets of violated pairs;
//! * Boolean combinations of Büchi atoms — per-assignment (or per-DNF-term)
//!   generalized Büchi ∧ co-Büchi queries;
//! * Explicit Muller — direct realizability of family members, or memoized
//!   SCC refinement for the complement.

use std::collections::{BTreeSet, HashSet};

use thiserror::Error;

use crate::game::{Game, ObjectiveClass, ObjectiveSpec, Payoff, Vertex};
use crate::graph;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("the candidate infinite-visit set is empty")]
    EmptySet,
    #[error("the set is not realizable as an infinite-visit set")]
    NotRealizable,
    #[error("{0} objectives are not prefix-independent; build the product game first")]
    UnsupportedObjective(ObjectiveClass),
}

/// Constructive answer to a path query: follow `stem` from the query vertex,
/// then cycle forever through `inf_set`.
///
/// The stem stays inside the query's allowed set and ends at a vertex of
/// `inf_set`; `inf_set` induces a strongly connected subgraph with at least
/// one edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathWitness {
    pub stem: Vec<Vertex>,
    pub inf_set: BTreeSet<Vertex>,
}

/// True exactly when a play with `Inf = s` exists inside `allowed`: the
/// subgraph induced on `s` must be strongly connected and carry at least one
/// edge (for a singleton, a self-loop).
pub fn realizable_inf(
    game: &Game,
    allowed: &BTreeSet<Vertex>,
    s: &BTreeSet<Vertex>,
) -> Result<bool, OracleError> {
    if s.is_empty() {
        return Err(OracleError::EmptySet);
    }
    if !s.is_subset(allowed) {
        return Ok(false);
    }
    Ok(graph::is_strongly_connected_within(game, s) && graph::has_internal_edge(game, s))
}

/// A closed walk through every vertex of `s`, using only edges inside `s`,
/// in cycle representation starting at the minimal vertex. Length is at most
/// `|s|²` and the result is deterministic: targets are acquired greedily by
/// breadth-first distance with smallest-index tie-breaking, so a simple
/// cycle returns exactly itself.
pub fn closed_walk_covering(game: &Game, s: &BTreeSet<Vertex>) -> Result<Vec<Vertex>, OracleError> {
    if s.is_empty() {
        return Err(OracleError::EmptySet);
    }
    let all: BTreeSet<Vertex> = game.vertices().collect();
    if !realizable_inf(game, &all, s)? {
        return Err(OracleError::NotRealizable);
    }
    let start = *s.iter().next().expect("nonempty");
    if s.len() == 1 {
        // realizable_inf guarantees the self-loop.
        return Ok(vec![start]);
    }
    let mut walk = vec![start];
    let mut remaining: BTreeSet<Vertex> = s.clone();
    remaining.remove(&start);
    while !remaining.is_empty() {
        let from = *walk.last().expect("walk nonempty");
        let segment =
            graph::shortest_path_to_set(game, s, from, &remaining).expect("strongly connected set");
        for &v in &segment[1..] {
            walk.push(v);
            remaining.remove(&v);
        }
    }
    // Segments always end at a target distinct from the start, so the walk
    // still has to close.
    let from = *walk.last().expect("walk nonempty");
    let back = graph::shortest_path(game, s, from, start).expect("strongly connected set");
    walk.extend_from_slice(&back[1..]);
    // Drop the final repetition of the start vertex: cycle representation.
    walk.pop();
    Ok(walk)
}

/// Builds the witness for a chosen infinite-visit set: breadth-first stem
/// from `v` to the nearest vertex of `s`, inside `allowed`.
fn witness_to(
    game: &Game,
    allowed: &BTreeSet<Vertex>,
    v: Vertex,
    s: BTreeSet<Vertex>,
) -> PathWitness {
    let stem =
        graph::shortest_path_to_set(game, allowed, v, &s).expect("inf set reachable from query");
    PathWitness { stem, inf_set: s }
}

/// Shrinks a qualifying SCC to the vertices of a closed walk through one
/// representative per must-hit set (the smallest member), connected greedily.
fn shrink_to_representatives(
    game: &Game,
    scc: &BTreeSet<Vertex>,
    must_hit: &[BTreeSet<Vertex>],
) -> BTreeSet<Vertex> {
    let mut reps: BTreeSet<Vertex> = must_hit
        .iter()
        .map(|b| *b.intersection(scc).next().expect("checked nonempty"))
        .collect();
    if reps.is_empty() {
        reps.insert(*scc.iter().next().expect("nonempty scc"));
    }
    if reps.len() == 1 {
        let rep = *reps.iter().next().expect("one representative");
        let cycle = graph::shortest_cycle_through(game, scc, rep).expect("nontrivial scc");
        return cycle.into_iter().collect();
    }
    // Closed walk visiting all representatives; its vertex set is strongly
    // connected by construction.
    let start = *reps.iter().next().expect("nonempty");
    let mut covered: BTreeSet<Vertex> = BTreeSet::from([start]);
    let mut remaining = reps.clone();
    remaining.remove(&start);
    let mut cur = start;
    while !remaining.is_empty() {
        let segment =
            graph::shortest_path_to_set(game, scc, cur, &remaining).expect("strongly connected");
        cur = *segment.last().expect("nonempty path");
        for v in segment {
            remaining.remove(&v);
            covered.insert(v);
        }
    }
    let back = graph::shortest_path(game, scc, cur, start).expect("strongly connected");
    covered.extend(back);
    covered
}

/// Decides the conjunction of a generalized Büchi objective (visit every set
/// of `must_hit` infinitely often) with a co-Büchi objective (eventually
/// avoid `must_avoid`) inside `allowed`, starting from `v`.
///
/// The stem may still cross `must_avoid`; only the infinite-visit set must
/// stay clear of it.
pub fn gen_buchi_cobuchi_path(
    game: &Game,
    allowed: &BTreeSet<Vertex>,
    must_hit: &[BTreeSet<Vertex>],
    must_avoid: &BTreeSet<Vertex>,
    v: Vertex,
) -> Option<PathWitness> {
    let reach = graph::reachable_within(game, allowed, v);
    if reach.is_empty() {
        return None;
    }
    let restricted: BTreeSet<Vertex> = reach.difference(must_avoid).copied().collect();
    for scc in graph::sccs_within(game, &restricted) {
        if !graph::has_internal_edge(game, &scc) {
            continue;
        }
        if must_hit.iter().all(|b| !b.is_disjoint(&scc)) {
            let s = shrink_to_representatives(game, &scc, must_hit);
            return Some(witness_to(game, allowed, v, s));
        }
    }
    None
}

/// Decides whether some reachable strongly connected set inside `allowed`
/// satisfies every Streett pair: for all `(G, R)`, miss `G` entirely or meet
/// `R`. Violated pairs have their `G` vertices deleted and the decomposition
/// recurses into the sub-SCCs.
pub fn streett_path(
    game: &Game,
    allowed: &BTreeSet<Vertex>,
    pairs: &[(BTreeSet<Vertex>, BTreeSet<Vertex>)],
    v: Vertex,
) -> Option<PathWitness> {
    fn search(
        game: &Game,
        region: &BTreeSet<Vertex>,
        pairs: &[(BTreeSet<Vertex>, BTreeSet<Vertex>)],
    ) -> Option<BTreeSet<Vertex>> {
        for scc in graph::sccs_within(game, region) {
            if !graph::has_internal_edge(game, &scc) {
                continue;
            }
            let mut violated: BTreeSet<Vertex> = BTreeSet::new();
            for (g, r) in pairs {
                if !scc.is_disjoint(g) && scc.is_disjoint(r) {
                    violated.extend(g.intersection(&scc).copied());
                }
            }
            if violated.is_empty() {
                return Some(scc);
            }
            let pruned: BTreeSet<Vertex> = scc.difference(&violated).copied().collect();
            if let Some(s) = search(game, &pruned, pairs) {
                return Some(s);
            }
        }
        None
    }

    let reach = graph::reachable_within(game, allowed, v);
    let s = search(game, &reach, pairs)?;
    Some(witness_to(game, allowed, v, s))
}

/// Streett pairs expressing a parity condition "the maximal color seen
/// infinitely often is even": one pair per odd color, guarding it with the
/// larger even colors. `negate` encodes the complementary condition by
/// shifting every color up by one.
pub fn parity_streett_pairs(
    colors: &[u32],
    negate: bool,
) -> Vec<(BTreeSet<Vertex>, BTreeSet<Vertex>)> {
    let shift = if negate { 1 } else { 0 };
    let colored = |c: u32| -> BTreeSet<Vertex> {
        colors
            .iter()
            .enumerate()
            .filter(|(_, &col)| col + shift == c)
            .map(|(v, _)| v)
            .collect()
    };
    let max = colors.iter().map(|&c| c + shift).max().unwrap_or(0);
    let mut pairs = Vec::new();
    for odd in (1..=max).filter(|c| c % 2 == 1) {
        let g = colored(odd);
        if g.is_empty() {
            continue;
        }
        let r: BTreeSet<Vertex> = colors
            .iter()
            .enumerate()
            .filter(|(_, &col)| {
                let c = col + shift;
                c > odd && c % 2 == 0
            })
            .map(|(v, _)| v)
            .collect();
        pairs.push((g, r));
    }
    pairs
}

/// A Boolean formula over Büchi atoms, used to combine infinite-visit
/// conditions. Variables are indices into a list of base sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BoolFormula {
    Const(bool),
    Var(usize),
    Not(Box<BoolFormula>),
    And(Vec<BoolFormula>),
    Or(Vec<BoolFormula>),
}

impl BoolFormula {
    pub fn and(parts: Vec<BoolFormula>) -> BoolFormula {
        BoolFormula::And(parts)
    }

    pub fn or(parts: Vec<BoolFormula>) -> BoolFormula {
        BoolFormula::Or(parts)
    }

    pub fn var(idx: usize) -> BoolFormula {
        BoolFormula::Var(idx)
    }

    pub fn negate(inner: BoolFormula) -> BoolFormula {
        BoolFormula::Not(Box::new(inner))
    }

    /// Evaluates under an assignment given as a bitmask; variable `i` reads
    /// bit `num_vars - 1 - i`, so assignments enumerate in the same
    /// most-significant-first order payoffs use.
    pub fn eval(&self, assignment: u64, num_vars: usize) -> bool {
        match self {
            BoolFormula::Const(b) => *b,
            BoolFormula::Var(i) => (assignment >> (num_vars - 1 - i)) & 1 == 1,
            BoolFormula::Not(f) => !f.eval(assignment, num_vars),
            BoolFormula::And(fs) => fs.iter().all(|f| f.eval(assignment, num_vars)),
            BoolFormula::Or(fs) => fs.iter().any(|f| f.eval(assignment, num_vars)),
        }
    }

    fn to_nnf(&self, negated: bool) -> BoolFormula {
        match self {
            BoolFormula::Const(b) => BoolFormula::Const(*b != negated),
            BoolFormula::Var(i) => {
                if negated {
                    BoolFormula::negate(BoolFormula::var(*i))
                } else {
                    BoolFormula::var(*i)
                }
            }
            BoolFormula::Not(f) => f.to_nnf(!negated),
            BoolFormula::And(fs) => {
                let parts = fs.iter().map(|f| f.to_nnf(negated)).collect();
                if negated {
                    BoolFormula::Or(parts)
                } else {
                    BoolFormula::And(parts)
                }
            }
            BoolFormula::Or(fs) => {
                let parts = fs.iter().map(|f| f.to_nnf(negated)).collect();
                if negated {
                    BoolFormula::And(parts)
                } else {
                    BoolFormula::Or(parts)
                }
            }
        }
    }

    /// Number of terms a disjunctive-normal-form expansion would produce.
    fn dnf_term_estimate(&self) -> u128 {
        match self {
            BoolFormula::Const(true) => 1,
            BoolFormula::Const(false) => 0,
            BoolFormula::Var(_) | BoolFormula::Not(_) => 1,
            BoolFormula::And(fs) => fs
                .iter()
                .map(|f| f.dnf_term_estimate())
                .fold(1u128, |a, b| a.saturating_mul(b)),
            BoolFormula::Or(fs) => fs
                .iter()
                .map(|f| f.dnf_term_estimate())
                .fold(0u128, |a, b| a.saturating_add(b)),
        }
    }

    /// Expands a negation-normal-form formula into DNF terms, each a pair of
    /// (positive, negative) variable masks. Contradictory terms are dropped.
    fn dnf_terms(&self) -> Vec<(u64, u64)> {
        fn expand(f: &BoolFormula) -> Vec<(u64, u64)> {
            match f {
                BoolFormula::Const(true) => vec![(0, 0)],
                BoolFormula::Const(false) => vec![],
                BoolFormula::Var(i) => vec![(1u64 << i, 0)],
                BoolFormula::Not(inner) => match inner.as_ref() {
                    BoolFormula::Var(i) => vec![(0, 1u64 << i)],
                    _ => unreachable!("formula is in negation normal form"),
                },
                BoolFormula::Or(fs) => fs.iter().flat_map(expand).collect(),
                BoolFormula::And(fs) => {
                    let mut acc = vec![(0u64, 0u64)];
                    for part in fs {
                        let terms = expand(part);
                        let mut next = Vec::with_capacity(acc.len() * terms.len());
                        for &(p, n) in &acc {
                            for &(tp, tn) in &terms {
                                let pos = p | tp;
                                let neg = n | tn;
                                if pos & neg == 0 {
                                    next.push((pos, neg));
                                }
                            }
                        }
                        acc = next;
                    }
                    acc
                }
            }
        }
        expand(&self.to_nnf(false))
    }
}

/// Decides a Boolean combination of Büchi conditions: does a play exist from
/// `v` inside `allowed` whose infinite-visit pattern over `base_sets`
/// satisfies `formula`?
///
/// Truth assignments are enumerated in increasing binary order (variable 0
/// most significant) and the first witness found is returned. When the
/// formula expands into fewer disjunctive terms than there are assignments,
/// the expansion is queried instead; both routes decide the same language.
pub fn bc_buchi_path(
    game: &Game,
    allowed: &BTreeSet<Vertex>,
    base_sets: &[BTreeSet<Vertex>],
    formula: &BoolFormula,
    v: Vertex,
) -> Option<PathWitness> {
    let num_vars = base_sets.len();
    assert!(num_vars < 64, "too many Büchi atoms");
    let assignments = 1u128 << num_vars;
    if formula.dnf_term_estimate() < assignments {
        for (pos, neg) in formula.dnf_terms() {
            let must_hit: Vec<BTreeSet<Vertex>> = (0..num_vars)
                .filter(|i| pos >> i & 1 == 1)
                .map(|i| base_sets[i].clone())
                .collect();
            let must_avoid: BTreeSet<Vertex> = (0..num_vars)
                .filter(|i| neg >> i & 1 == 1)
                .flat_map(|i| base_sets[i].iter().copied())
                .collect();
            if let Some(w) = gen_buchi_cobuchi_path(game, allowed, &must_hit, &must_avoid, v) {
                return Some(w);
            }
        }
        return None;
    }
    for assignment in 0..assignments as u64 {
        if !formula.eval(assignment, num_vars.max(1)) {
            continue;
        }
        let bit = |i: usize| assignment >> (num_vars - 1 - i) & 1 == 1;
        let must_hit: Vec<BTreeSet<Vertex>> = (0..num_vars)
            .filter(|&i| bit(i))
            .map(|i| base_sets[i].clone())
            .collect();
        let must_avoid: BTreeSet<Vertex> = (0..num_vars)
            .filter(|&i| !bit(i))
            .flat_map(|i| base_sets[i].iter().copied())
            .collect();
        if let Some(w) = gen_buchi_cobuchi_path(game, allowed, &must_hit, &must_avoid, v) {
            return Some(w);
        }
    }
    None
}

/// Query mode for Explicit Muller families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MullerQueryMode {
    /// The infinite-visit set must equal some member of the family.
    In,
    /// The infinite-visit set must avoid every member of the family.
    Avoid,
}

/// Decides Explicit Muller path queries.
///
/// `In` mode looks for a realizable, reachable family member and enters it
/// via a shortest stem. `Avoid` mode searches for any realizable strongly
/// connected set outside the family by SCC refinement: an SCC inside the
/// family has its vertices deleted one at a time, recursing into sub-SCCs,
/// with already-examined components memoized.
pub fn explicit_muller_path(
    game: &Game,
    allowed: &BTreeSet<Vertex>,
    candidate_family: &BTreeSet<BTreeSet<Vertex>>,
    mode: MullerQueryMode,
    v: Vertex,
) -> Option<PathWitness> {
    let reach = graph::reachable_within(game, allowed, v);
    match mode {
        MullerQueryMode::In => {
            for f in candidate_family {
                if f.is_empty() || !f.is_subset(allowed) || f.is_disjoint(&reach) {
                    continue;
                }
                if realizable_inf(game, allowed, f).expect("nonempty") {
                    return Some(witness_to(game, allowed, v, f.clone()));
                }
            }
            None
        }
        MullerQueryMode::Avoid => {
            fn refine(
                game: &Game,
                component: &BTreeSet<Vertex>,
                family: &BTreeSet<BTreeSet<Vertex>>,
                memo: &mut HashSet<BTreeSet<Vertex>>,
            ) -> Option<BTreeSet<Vertex>> {
                if !family.contains(component) {
                    return Some(component.clone());
                }
                if !memo.insert(component.clone()) {
                    return None;
                }
                for &u in component {
                    let mut region = component.clone();
                    region.remove(&u);
                    for sub in graph::sccs_within(game, &region) {
                        if !graph::has_internal_edge(game, &sub) {
                            continue;
                        }
                        if let Some(s) = refine(game, &sub, family, memo) {
                            return Some(s);
                        }
                    }
                }
                None
            }

            let mut memo: HashSet<BTreeSet<Vertex>> = HashSet::new();
            for scc in graph::sccs_within(game, &reach) {
                if !graph::has_internal_edge(game, &scc) {
                    continue;
                }
                if let Some(s) = refine(game, &scc, candidate_family, &mut memo) {
                    return Some(witness_to(game, allowed, v, s));
                }
            }
            None
        }
    }
}

/// The payoff signature of an Explicit Muller family member: which players
/// accept it as an infinite-visit set.
fn muller_signature(game: &Game, f: &BTreeSet<Vertex>) -> Payoff {
    let mut p = Payoff::zeros(game.num_players());
    for player in 1..=game.num_players() {
        if let ObjectiveSpec::ExplicitMuller(family) = game.objective(player) {
            p = p.with(player, family.contains(f));
        }
    }
    p
}

/// Decides whether a play with payoff exactly `p` exists from `v` inside
/// `allowed`, dispatching on the game's objective class:
///
/// * Büchi / co-Büchi — one generalized Büchi ∧ co-Büchi query;
/// * Parity — a Streett query over the per-player parity pair encodings;
/// * Rabin / Streett / Muller — a Boolean combination of Büchi atoms over the
///   pair sets (resp. color classes);
/// * Explicit Muller — family membership filtered by payoff signature, or
///   family avoidance for the all-zero payoff.
///
/// Reachability and Safety games are rejected; route them through the
/// product construction first.
pub fn payoff_path(
    game: &Game,
    allowed: &BTreeSet<Vertex>,
    p: &Payoff,
    v: Vertex,
) -> Result<Option<PathWitness>, OracleError> {
    debug_assert_eq!(p.num_players(), game.num_players());
    let class = game.objective_class();
    match class {
        ObjectiveClass::Reachability | ObjectiveClass::Safety => {
            Err(OracleError::UnsupportedObjective(class))
        }
        ObjectiveClass::Buchi | ObjectiveClass::CoBuchi => {
            let mut must_hit = Vec::new();
            let mut must_avoid = BTreeSet::new();
            for player in 1..=game.num_players() {
                let f = match game.objective(player) {
                    ObjectiveSpec::Buchi(f) => f,
                    ObjectiveSpec::CoBuchi(f) => f,
                    _ => unreachable!("uniform objective class"),
                };
                // Büchi wants F hit when gaining; co-Büchi wants it avoided.
                let hit = p.get(player) == (class == ObjectiveClass::Buchi);
                if hit {
                    must_hit.push(f.clone());
                } else {
                    must_avoid.extend(f.iter().copied());
                }
            }
            Ok(gen_buchi_cobuchi_path(
                game,
                allowed,
                &must_hit,
                &must_avoid,
                v,
            ))
        }
        ObjectiveClass::Parity => {
            let mut pairs = Vec::new();
            for player in 1..=game.num_players() {
                let ObjectiveSpec::Parity(colors) = game.objective(player) else {
                    unreachable!("uniform objective class");
                };
                pairs.extend(parity_streett_pairs(colors, !p.get(player)));
            }
            Ok(streett_path(game, allowed, &pairs, v))
        }
        ObjectiveClass::Rabin | ObjectiveClass::Streett => {
            let mut base_sets: Vec<BTreeSet<Vertex>> = Vec::new();
            let mut conjuncts: Vec<BoolFormula> = Vec::new();
            for player in 1..=game.num_players() {
                let pairs = match game.objective(player) {
                    ObjectiveSpec::Rabin(pairs) => pairs,
                    ObjectiveSpec::Streett(pairs) => pairs,
                    _ => unreachable!("uniform objective class"),
                };
                let mut vars = Vec::new();
                for (g, r) in pairs {
                    let g_var = base_sets.len();
                    base_sets.push(g.clone());
                    let r_var = base_sets.len();
                    base_sets.push(r.clone());
                    vars.push((g_var, r_var));
                }
                // Rabin holds when some pair hits G and misses R; Streett is
                // its dual. A gaining Rabin player and a losing Streett
                // player contribute the same shape.
                let rabin_side = match (game.objective(player), p.get(player)) {
                    (ObjectiveSpec::Rabin(_), gain) => gain,
                    (ObjectiveSpec::Streett(_), gain) => !gain,
                    _ => unreachable!(),
                };
                let conjunct = if rabin_side {
                    BoolFormula::or(
                        vars.iter()
                            .map(|&(g, r)| {
                                BoolFormula::and(vec![
                                    BoolFormula::var(g),
                                    BoolFormula::negate(BoolFormula::var(r)),
                                ])
                            })
                            .collect(),
                    )
                } else {
                    BoolFormula::and(
                        vars.iter()
                            .map(|&(g, r)| {
                                BoolFormula::or(vec![
                                    BoolFormula::negate(BoolFormula::var(g)),
                                    BoolFormula::var(r),
                                ])
                            })
                            .collect(),
                    )
                };
                conjuncts.push(conjunct);
            }
            Ok(bc_buchi_path(
                game,
                allowed,
                &base_sets,
                &BoolFormula::and(conjuncts),
                v,
            ))
        }
        ObjectiveClass::Muller => {
            let mut base_sets: Vec<BTreeSet<Vertex>> = Vec::new();
            let mut conjuncts: Vec<BoolFormula> = Vec::new();
            for player in 1..=game.num_players() {
                let ObjectiveSpec::Muller { colors, family } = game.objective(player) else {
                    unreachable!("uniform objective class");
                };
                let used: BTreeSet<u32> = colors.iter().copied().collect();
                let var_of: Vec<(u32, usize)> = used
                    .iter()
                    .map(|&c| {
                        let idx = base_sets.len();
                        base_sets.push(
                            colors
                                .iter()
                                .enumerate()
                                .filter(|(_, &col)| col == c)
                                .map(|(v, _)| v)
                                .collect(),
                        );
                        (c, idx)
                    })
                    .collect();
                // The infinitely seen colors equal a family member F exactly
                // when every color of F recurs and no other used color does.
                let member = |f: &BTreeSet<u32>| {
                    BoolFormula::and(
                        var_of
                            .iter()
                            .map(|&(c, idx)| {
                                if f.contains(&c) {
                                    BoolFormula::var(idx)
                                } else {
                                    BoolFormula::negate(BoolFormula::var(idx))
                                }
                            })
                            .collect(),
                    )
                };
                let gain_formula = BoolFormula::or(family.iter().map(member).collect());
                conjuncts.push(if p.get(player) {
                    gain_formula
                } else {
                    BoolFormula::negate(gain_formula)
                });
            }
            Ok(bc_buchi_path(
                game,
                allowed,
                &base_sets,
                &BoolFormula::and(conjuncts),
                v,
            ))
        }
        ObjectiveClass::ExplicitMuller => {
            if *p == Payoff::zeros(game.num_players()) {
                let mut union: BTreeSet<BTreeSet<Vertex>> = BTreeSet::new();
                for player in 1..=game.num_players() {
                    let ObjectiveSpec::ExplicitMuller(family) = game.objective(player) else {
                        unreachable!("uniform objective class");
                    };
                    union.extend(family.iter().cloned());
                }
                Ok(explicit_muller_path(
                    game,
                    allowed,
                    &union,
                    MullerQueryMode::Avoid,
                    v,
                ))
            } else {
                let mut candidates: BTreeSet<BTreeSet<Vertex>> = BTreeSet::new();
                for player in 1..=game.num_players() {
                    let ObjectiveSpec::ExplicitMuller(family) = game.objective(player) else {
                        unreachable!("uniform objective class");
                    };
                    for f in family {
                        if muller_signature(game, f) == *p {
                            candidates.insert(f.clone());
                        }
                    }
                }
                Ok(explicit_muller_path(
                    game,
                    allowed,
                    &candidates,
                    MullerQueryMode::In,
                    v,
                ))
            }
        }
    }
}
