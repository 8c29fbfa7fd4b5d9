//! Arena representation, ω-regular objectives, plays as lassoes, and gain
//! evaluation.
//!
//! A game is a finite directed graph whose vertices are partitioned among the
//! players; every vertex has at least one successor, so plays never block.
//! Each player carries one Boolean objective, and all players of a game use
//! the same objective class. Eventually periodic plays are represented
//! finitely as [`Lasso`] values.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Vertices are dense indices `0..num_vertices`.
pub type Vertex = usize;

/// Players are numbered `1..=num_players`.
pub type Player = usize;

/// Payoff vectors are packed into a `u64`, one bit per player, and the
/// full payoff hypercube must stay enumerable.
pub const MAX_PLAYERS: usize = 63;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GameError {
    #[error("vertex {0} has no outgoing edge")]
    DeadEndVertex(Vertex),
    #[error("unknown vertex {0}")]
    UnknownVertex(Vertex),
    #[error("expected {expected} objectives, found {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("number of players must be in 1..={MAX_PLAYERS}, got {0}")]
    PlayerCount(usize),
    #[error("vertex {vertex} is owned by {owner}, which is not a player")]
    BadOwner { vertex: Vertex, owner: usize },
    #[error("all players must use the same objective class")]
    MixedObjectives,
    #[error("player {player}: Rabin/Streett objective needs at least one pair")]
    EmptyPairs { player: Player },
    #[error("player {player}: vertex {vertex} has no color")]
    MissingColor { player: Player, vertex: Vertex },
    #[error("player {player}: color {color} is not used by the coloring")]
    UnknownColor { player: Player, color: u32 },
    #[error("player {player}: colors must be at least 1")]
    ZeroColor { player: Player },
    #[error("invalid payoff bitstring {0:?}")]
    InvalidPayoff(String),
    #[error("lasso is not a path of the game")]
    InvalidLasso,
}

/// The nine supported objective classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ObjectiveClass {
    Reachability,
    Safety,
    Buchi,
    CoBuchi,
    Parity,
    ExplicitMuller,
    Muller,
    Rabin,
    Streett,
}

impl ObjectiveClass {
    /// Prefix-independent classes evaluate a play by its infinitely visited
    /// vertices only; Reachability and Safety also look at finite visits.
    pub fn is_prefix_independent(self) -> bool {
        !matches!(self, ObjectiveClass::Reachability | ObjectiveClass::Safety)
    }

    pub fn name(self) -> &'static str {
        match self {
            ObjectiveClass::Reachability => "reachability",
            ObjectiveClass::Safety => "safety",
            ObjectiveClass::Buchi => "buchi",
            ObjectiveClass::CoBuchi => "cobuchi",
            ObjectiveClass::Parity => "parity",
            ObjectiveClass::ExplicitMuller => "explicit_muller",
            ObjectiveClass::Muller => "muller",
            ObjectiveClass::Rabin => "rabin",
            ObjectiveClass::Streett => "streett",
        }
    }
}

impl fmt::Display for ObjectiveClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ObjectiveClass {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "reachability" => Ok(ObjectiveClass::Reachability),
            "safety" => Ok(ObjectiveClass::Safety),
            "buchi" => Ok(ObjectiveClass::Buchi),
            "cobuchi" => Ok(ObjectiveClass::CoBuchi),
            "parity" => Ok(ObjectiveClass::Parity),
            "explicit_muller" => Ok(ObjectiveClass::ExplicitMuller),
            "muller" => Ok(ObjectiveClass::Muller),
            "rabin" => Ok(ObjectiveClass::Rabin),
            "streett" => Ok(ObjectiveClass::Streett),
            other => Err(format!("unknown objective class {other:?}")),
        }
    }
}

/// One player's objective.
///
/// Parity and Muller colorings are total maps `V -> {1..d}` stored densely by
/// vertex index. Muller families range over color sets, Explicit Muller
/// families over vertex sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ObjectiveSpec {
    /// Visit `F` at least once.
    Reachability(BTreeSet<Vertex>),
    /// Never visit `F`.
    Safety(BTreeSet<Vertex>),
    /// Visit `F` infinitely often.
    Buchi(BTreeSet<Vertex>),
    /// Visit `F` finitely often only.
    CoBuchi(BTreeSet<Vertex>),
    /// The maximal color seen infinitely often is even.
    Parity(Vec<u32>),
    /// The set of infinitely visited vertices belongs to the family.
    ExplicitMuller(BTreeSet<BTreeSet<Vertex>>),
    /// The set of infinitely seen colors belongs to the family.
    Muller {
        colors: Vec<u32>,
        family: BTreeSet<BTreeSet<u32>>,
    },
    /// Some pair has its `G` visited infinitely often and its `R` not.
    Rabin(Vec<(BTreeSet<Vertex>, BTreeSet<Vertex>)>),
    /// Every pair has its `G` visited finitely often or its `R` infinitely often.
    Streett(Vec<(BTreeSet<Vertex>, BTreeSet<Vertex>)>),
}

impl ObjectiveSpec {
    pub fn class(&self) -> ObjectiveClass {
        match self {
            ObjectiveSpec::Reachability(_) => ObjectiveClass::Reachability,
            ObjectiveSpec::Safety(_) => ObjectiveClass::Safety,
            ObjectiveSpec::Buchi(_) => ObjectiveClass::Buchi,
            ObjectiveSpec::CoBuchi(_) => ObjectiveClass::CoBuchi,
            ObjectiveSpec::Parity(_) => ObjectiveClass::Parity,
            ObjectiveSpec::ExplicitMuller(_) => ObjectiveClass::ExplicitMuller,
            ObjectiveSpec::Muller { .. } => ObjectiveClass::Muller,
            ObjectiveSpec::Rabin(_) => ObjectiveClass::Rabin,
            ObjectiveSpec::Streett(_) => ObjectiveClass::Streett,
        }
    }

    pub fn is_prefix_independent(&self) -> bool {
        self.class().is_prefix_independent()
    }

    fn validate(&self, num_vertices: usize, player: Player) -> Result<(), GameError> {
        let check_set = |set: &BTreeSet<Vertex>| -> Result<(), GameError> {
            match set.iter().find(|&&v| v >= num_vertices) {
                Some(&v) => Err(GameError::UnknownVertex(v)),
                None => Ok(()),
            }
        };
        let check_coloring = |colors: &Vec<u32>| -> Result<(), GameError> {
            if colors.len() != num_vertices {
                // A vertex is missing from the coloring map.
                return Err(GameError::MissingColor {
                    player,
                    vertex: colors.len().min(num_vertices),
                });
            }
            if colors.contains(&0) {
                return Err(GameError::ZeroColor { player });
            }
            Ok(())
        };
        match self {
            ObjectiveSpec::Reachability(f)
            | ObjectiveSpec::Safety(f)
            | ObjectiveSpec::Buchi(f)
            | ObjectiveSpec::CoBuchi(f) => check_set(f),
            ObjectiveSpec::Parity(colors) => check_coloring(colors),
            ObjectiveSpec::ExplicitMuller(family) => family.iter().try_for_each(&check_set),
            ObjectiveSpec::Muller { colors, family } => {
                check_coloring(colors)?;
                let used: BTreeSet<u32> = colors.iter().copied().collect();
                for set in family {
                    if let Some(&c) = set.iter().find(|c| !used.contains(c)) {
                        return Err(GameError::UnknownColor { player, color: c });
                    }
                }
                Ok(())
            }
            ObjectiveSpec::Rabin(pairs) | ObjectiveSpec::Streett(pairs) => {
                if pairs.is_empty() {
                    return Err(GameError::EmptyPairs { player });
                }
                for (g, r) in pairs {
                    check_set(g)?;
                    check_set(r)?;
                }
                Ok(())
            }
        }
    }

    /// Evaluates the objective on a play given its visited and infinitely
    /// visited vertex sets.
    pub fn satisfied_by_sets(&self, occ: &BTreeSet<Vertex>, inf: &BTreeSet<Vertex>) -> bool {
        match self {
            ObjectiveSpec::Reachability(f) => !occ.is_disjoint(f),
            ObjectiveSpec::Safety(f) => occ.is_disjoint(f),
            ObjectiveSpec::Buchi(f) => !inf.is_disjoint(f),
            ObjectiveSpec::CoBuchi(f) => inf.is_disjoint(f),
            ObjectiveSpec::Parity(colors) => {
                let max = inf.iter().map(|&v| colors[v]).max().expect("inf nonempty");
                max % 2 == 0
            }
            ObjectiveSpec::ExplicitMuller(family) => family.contains(inf),
            ObjectiveSpec::Muller { colors, family } => {
                let seen: BTreeSet<u32> = inf.iter().map(|&v| colors[v]).collect();
                family.contains(&seen)
            }
            ObjectiveSpec::Rabin(pairs) => pairs
                .iter()
                .any(|(g, r)| !inf.is_disjoint(g) && inf.is_disjoint(r)),
            ObjectiveSpec::Streett(pairs) => pairs
                .iter()
                .all(|(g, r)| inf.is_disjoint(g) || !inf.is_disjoint(r)),
        }
    }

    /// Gain of the play denoted by `lasso`: 1 exactly when the play satisfies
    /// the objective.
    pub fn satisfied_by(&self, lasso: &Lasso) -> bool {
        let (occ, inf) = lasso.occ_inf();
        self.satisfied_by_sets(&occ, &inf)
    }
}

/// A payoff vector: one Boolean gain per player, player 1 first.
///
/// Formats as a bitstring (`"01"` means player 1 gains 0 and player 2 gains
/// 1) and orders lexicographically by that bitstring.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Payoff {
    len: u8,
    bits: u64,
}

impl Payoff {
    pub fn zeros(num_players: usize) -> Self {
        assert!((1..=MAX_PLAYERS).contains(&num_players));
        Payoff {
            len: num_players as u8,
            bits: 0,
        }
    }

    pub fn ones(num_players: usize) -> Self {
        let mut p = Payoff::zeros(num_players);
        p.bits = (1u64 << num_players) - 1;
        p
    }

    /// Builds a payoff from gains listed player 1 first.
    pub fn from_gains(gains: &[bool]) -> Self {
        let mut p = Payoff::zeros(gains.len());
        for (idx, &gain) in gains.iter().enumerate() {
            p = p.with(idx + 1, gain);
        }
        p
    }

    pub fn num_players(&self) -> usize {
        self.len as usize
    }

    /// Gain of `player` (1-based).
    pub fn get(&self, player: Player) -> bool {
        debug_assert!(player >= 1 && player <= self.num_players());
        (self.bits >> (self.len as usize - player)) & 1 == 1
    }

    pub fn with(mut self, player: Player, gain: bool) -> Self {
        let bit = 1u64 << (self.len as usize - player);
        if gain {
            self.bits |= bit;
        } else {
            self.bits &= !bit;
        }
        self
    }

    /// Componentwise order.
    pub fn leq(&self, other: &Payoff) -> bool {
        debug_assert_eq!(self.len, other.len);
        self.bits & !other.bits == 0
    }

    pub fn in_range(&self, lower: &Payoff, upper: &Payoff) -> bool {
        lower.leq(self) && self.leq(upper)
    }

    /// All payoffs of the given width in ascending (lexicographic) order.
    pub fn enumerate(num_players: usize) -> impl Iterator<Item = Payoff> {
        assert!((1..=MAX_PLAYERS).contains(&num_players));
        (0..(1u64 << num_players)).map(move |bits| Payoff {
            len: num_players as u8,
            bits,
        })
    }

    pub fn parse(s: &str) -> Result<Self, GameError> {
        if s.is_empty() || s.len() > MAX_PLAYERS {
            return Err(GameError::InvalidPayoff(s.to_string()));
        }
        let mut p = Payoff::zeros(s.len());
        for (idx, c) in s.chars().enumerate() {
            match c {
                '0' => {}
                '1' => p = p.with(idx + 1, true),
                _ => return Err(GameError::InvalidPayoff(s.to_string())),
            }
        }
        Ok(p)
    }
}

impl fmt::Display for Payoff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for player in 1..=self.num_players() {
            f.write_str(if self.get(player) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Payoff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for Payoff {
    type Err = GameError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Payoff::parse(s)
    }
}

/// An eventually periodic play `stem · cycle^ω`, stored finitely.
///
/// The stem may be empty (the play starts inside its cycle); the cycle is
/// never empty and need not be a simple cycle. Equality is structural: no
/// rotation or unrolling normalization is applied.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Lasso {
    stem: Vec<Vertex>,
    cycle: Vec<Vertex>,
}

impl Lasso {
    pub fn new(stem: Vec<Vertex>, cycle: Vec<Vertex>) -> Self {
        assert!(!cycle.is_empty(), "lasso cycle must be nonempty");
        Lasso { stem, cycle }
    }

    pub fn stem(&self) -> &[Vertex] {
        &self.stem
    }

    pub fn cycle(&self) -> &[Vertex] {
        &self.cycle
    }

    /// First vertex of the denoted play.
    pub fn first(&self) -> Vertex {
        *self.stem.first().unwrap_or(&self.cycle[0])
    }

    /// Number of vertices in one unrolling `stem · cycle`; never zero,
    /// since the cycle is nonempty.
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.stem.len() + self.cycle.len()
    }

    /// Vertex at position `pos` of the denoted play (positions past the stem
    /// wrap inside the cycle).
    pub fn vertex_at(&self, pos: usize) -> Vertex {
        if pos < self.stem.len() {
            self.stem[pos]
        } else {
            self.cycle[(pos - self.stem.len()) % self.cycle.len()]
        }
    }

    /// Visited vertices: stem plus cycle.
    pub fn occ(&self) -> BTreeSet<Vertex> {
        self.stem.iter().chain(&self.cycle).copied().collect()
    }

    /// Infinitely visited vertices: exactly the cycle.
    pub fn inf(&self) -> BTreeSet<Vertex> {
        self.cycle.iter().copied().collect()
    }

    pub fn occ_inf(&self) -> (BTreeSet<Vertex>, BTreeSet<Vertex>) {
        (self.occ(), self.inf())
    }

    /// Checks that all consecutive moves, including stem-end to cycle-start
    /// and the cycle wrap-around, are edges of `game`.
    pub fn is_valid_in(&self, game: &Game) -> bool {
        let steps = self
            .stem
            .iter()
            .chain(&self.cycle)
            .chain(std::iter::once(&self.cycle[0]));
        let mut prev: Option<Vertex> = None;
        for &v in steps {
            if v >= game.num_vertices() {
                return false;
            }
            if let Some(u) = prev {
                if !game.has_edge(u, v) {
                    return false;
                }
            }
            prev = Some(v);
        }
        true
    }
}

/// A multiplayer Boolean game: arena, ownership partition, and one objective
/// per player. Immutable after construction; construction checks all
/// structural invariants.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Game {
    num_players: usize,
    owner: Vec<Player>,
    succ: Vec<Vec<Vertex>>,
    objectives: Vec<ObjectiveSpec>,
    initial: Option<Vertex>,
}

impl Game {
    /// Builds and validates a game. This is the single entry point through
    /// which raw input becomes a usable game; it rejects dead-end vertices,
    /// out-of-range owners or vertex references, objective arity mismatches,
    /// and mixed objective classes.
    pub fn new(
        num_players: usize,
        owner: Vec<Player>,
        edges: Vec<(Vertex, Vertex)>,
        objectives: Vec<ObjectiveSpec>,
        initial: Option<Vertex>,
    ) -> Result<Game, GameError> {
        if !(1..=MAX_PLAYERS).contains(&num_players) {
            return Err(GameError::PlayerCount(num_players));
        }
        if objectives.len() != num_players {
            return Err(GameError::ArityMismatch {
                expected: num_players,
                found: objectives.len(),
            });
        }
        let num_vertices = owner.len();
        for (vertex, &o) in owner.iter().enumerate() {
            if o < 1 || o > num_players {
                return Err(GameError::BadOwner { vertex, owner: o });
            }
        }
        let mut succ: Vec<BTreeSet<Vertex>> = vec![BTreeSet::new(); num_vertices];
        for (u, v) in edges {
            if u >= num_vertices {
                return Err(GameError::UnknownVertex(u));
            }
            if v >= num_vertices {
                return Err(GameError::UnknownVertex(v));
            }
            succ[u].insert(v);
        }
        if let Some(v) = succ.iter().position(|s| s.is_empty()) {
            return Err(GameError::DeadEndVertex(v));
        }
        let class = objectives[0].class();
        for (idx, obj) in objectives.iter().enumerate() {
            if obj.class() != class {
                return Err(GameError::MixedObjectives);
            }
            obj.validate(num_vertices, idx + 1)?;
        }
        if let Some(v0) = initial {
            if v0 >= num_vertices {
                return Err(GameError::UnknownVertex(v0));
            }
        }
        Ok(Game {
            num_players,
            owner,
            succ: succ.into_iter().map(|s| s.into_iter().collect()).collect(),
            objectives,
            initial,
        })
    }

    pub fn num_players(&self) -> usize {
        self.num_players
    }

    pub fn num_vertices(&self) -> usize {
        self.owner.len()
    }

    pub fn vertices(&self) -> std::ops::Range<Vertex> {
        0..self.num_vertices()
    }

    pub fn owner(&self, v: Vertex) -> Player {
        self.owner[v]
    }

    /// Successors of `v` in ascending order.
    pub fn successors(&self, v: Vertex) -> &[Vertex] {
        &self.succ[v]
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.succ[u].binary_search(&v).is_ok()
    }

    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.vertices()
            .flat_map(move |u| self.succ[u].iter().map(move |&v| (u, v)))
    }

    pub fn num_edges(&self) -> usize {
        self.succ.iter().map(|s| s.len()).sum()
    }

    /// Objective of `player` (1-based).
    pub fn objective(&self, player: Player) -> &ObjectiveSpec {
        &self.objectives[player - 1]
    }

    pub fn objectives(&self) -> &[ObjectiveSpec] {
        &self.objectives
    }

    pub fn objective_class(&self) -> ObjectiveClass {
        self.objectives[0].class()
    }

    pub fn is_prefix_independent(&self) -> bool {
        self.objective_class().is_prefix_independent()
    }

    pub fn initial(&self) -> Option<Vertex> {
        self.initial
    }

    pub fn with_initial(mut self, v0: Vertex) -> Result<Game, GameError> {
        if v0 >= self.num_vertices() {
            return Err(GameError::UnknownVertex(v0));
        }
        self.initial = Some(v0);
        Ok(self)
    }

    /// Payoff of the play denoted by `lasso`: component `i` is player `i`'s
    /// gain.
    pub fn payoff_of(&self, lasso: &Lasso) -> Payoff {
        let (occ, inf) = lasso.occ_inf();
        let mut p = Payoff::zeros(self.num_players);
        for player in 1..=self.num_players {
            p = p.with(player, self.objective(player).satisfied_by_sets(&occ, &inf));
        }
        p
    }

    /// Forward-reachable set from `v`, including `v` itself.
    pub fn reachable_set(&self, v: Vertex) -> BTreeSet<Vertex> {
        let mut seen = BTreeSet::from([v]);
        let mut stack = vec![v];
        while let Some(u) = stack.pop() {
            for &w in self.successors(u) {
                if seen.insert(w) {
                    stack.push(w);
                }
            }
        }
        seen
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::{demo_game, pf, vset};

    #[test]
    fn demo_game_is_accepted() {
        let g = demo_game();
        assert_eq!(g.num_vertices(), 7);
        assert_eq!(g.num_edges(), 10);
        assert_eq!(g.owner(0), 2);
        assert_eq!(g.owner(4), 2);
        assert_eq!(g.owner(2), 1);
    }

    #[test]
    fn smallest_legal_game() {
        let g = Game::new(
            1,
            vec![1],
            vec![(0, 0)],
            vec![ObjectiveSpec::Buchi(vset(&[0]))],
            Some(0),
        )
        .unwrap();
        assert_eq!(g.num_vertices(), 1);
    }

    #[test]
    fn dead_end_vertex_is_rejected() {
        let err = Game::new(
            1,
            vec![1, 1],
            vec![(0, 1)],
            vec![ObjectiveSpec::Buchi(vset(&[0]))],
            None,
        )
        .unwrap_err();
        assert_eq!(err, GameError::DeadEndVertex(1));
    }

    #[test]
    fn unknown_vertex_in_objective_is_rejected() {
        let err = Game::new(
            1,
            vec![1],
            vec![(0, 0)],
            vec![ObjectiveSpec::Buchi(vset(&[3]))],
            None,
        )
        .unwrap_err();
        assert_eq!(err, GameError::UnknownVertex(3));
    }

    #[test]
    fn objective_arity_must_match_player_count() {
        let err = Game::new(
            2,
            vec![1, 2],
            vec![(0, 1), (1, 0)],
            vec![ObjectiveSpec::Buchi(vset(&[0]))],
            None,
        )
        .unwrap_err();
        assert_eq!(
            err,
            GameError::ArityMismatch {
                expected: 2,
                found: 1
            }
        );
    }

    #[test]
    fn mixed_objective_classes_are_rejected() {
        let err = Game::new(
            2,
            vec![1, 2],
            vec![(0, 1), (1, 0)],
            vec![
                ObjectiveSpec::Buchi(vset(&[0])),
                ObjectiveSpec::CoBuchi(vset(&[1])),
            ],
            None,
        )
        .unwrap_err();
        assert_eq!(err, GameError::MixedObjectives);
    }

    #[test]
    fn occ_inf_of_stem_and_cycle() {
        let lasso = Lasso::new(vec![0, 1, 2], vec![3]);
        assert_eq!(lasso.occ(), vset(&[0, 1, 2, 3]));
        assert_eq!(lasso.inf(), vset(&[3]));

        let self_loop = Lasso::new(vec![], vec![5]);
        assert_eq!(self_loop.occ(), vset(&[5]));
        assert_eq!(self_loop.inf(), vset(&[5]));

        let lasso = Lasso::new(vec![0], vec![1, 2]);
        assert_eq!(lasso.occ(), vset(&[0, 1, 2]));
        assert_eq!(lasso.inf(), vset(&[1, 2]));
    }

    #[test]
    fn buchi_gain_on_demo_lassoes() {
        let cycle_play = Lasso::new(vec![0], vec![1, 2]);
        assert!(ObjectiveSpec::Buchi(vset(&[1])).satisfied_by(&cycle_play));
        assert!(!ObjectiveSpec::Buchi(vset(&[3, 5])).satisfied_by(&cycle_play));
    }

    #[test]
    fn parity_gain_even_self_loop() {
        let obj = ObjectiveSpec::Parity(vec![2]);
        assert!(obj.satisfied_by(&Lasso::new(vec![], vec![0])));
    }

    #[test]
    fn rabin_and_streett_pair_clause() {
        let pairs = vec![(vset(&[0]), vset(&[1]))];
        let lasso = Lasso::new(vec![], vec![0, 1]);
        assert!(!ObjectiveSpec::Rabin(pairs.clone()).satisfied_by(&lasso));
        assert!(ObjectiveSpec::Streett(pairs).satisfied_by(&lasso));
    }

    #[test]
    fn payoff_of_demo_plays() {
        let g = demo_game();
        assert_eq!(g.payoff_of(&Lasso::new(vec![0, 1, 2], vec![3])), pf("01"));
        assert_eq!(g.payoff_of(&Lasso::new(vec![0, 4], vec![6])), pf("00"));
    }

    #[test]
    fn empty_safety_sets_gain_everything() {
        let g = Game::new(
            2,
            vec![1, 2],
            vec![(0, 1), (1, 0)],
            vec![
                ObjectiveSpec::Safety(BTreeSet::new()),
                ObjectiveSpec::Safety(BTreeSet::new()),
            ],
            Some(0),
        )
        .unwrap();
        assert_eq!(g.payoff_of(&Lasso::new(vec![], vec![0, 1])), pf("11"));
    }

    #[test]
    fn reachable_sets_of_demo_game() {
        let g = demo_game();
        assert_eq!(g.reachable_set(0), vset(&[0, 1, 2, 3, 4, 5, 6]));
        assert_eq!(g.reachable_set(3), vset(&[3]));
        assert_eq!(g.reachable_set(4), vset(&[4, 5, 6]));
    }

    #[test]
    fn payoff_formatting_and_order() {
        assert_eq!(pf("01").to_string(), "01");
        assert!(pf("01") < pf("10"));
        assert!(pf("00") < pf("01"));
        assert!(pf("01").leq(&pf("11")));
        assert!(!pf("10").leq(&pf("01")));
        assert!(Payoff::parse("0s1").is_err());
        assert_eq!(
            Payoff::enumerate(2).collect::<Vec<_>>(),
            vec![pf("00"), pf("01"), pf("10"), pf("11")]
        );
    }

    #[test]
    fn core_values_are_shareable_across_threads() {
        fn assert_send_sync<T: Send + Sync>() {}
        assert_send_sync::<Game>();
        assert_send_sync::<ObjectiveSpec>();
        assert_send_sync::<Payoff>();
        assert_send_sync::<Lasso>();
    }

    #[test]
    fn lasso_validity_checks_all_steps() {
        let g = demo_game();
        assert!(Lasso::new(vec![0, 1, 2], vec![3]).is_valid_in(&g));
        assert!(Lasso::new(vec![0], vec![1, 2]).is_valid_in(&g));
        // 3 -> 4 is not an edge.
        assert!(!Lasso::new(vec![3], vec![4]).is_valid_in(&g));
        // cycle must wrap: 5 -> 6 missing.
        assert!(!Lasso::new(vec![], vec![5, 6]).is_valid_in(&g));
    }
}
