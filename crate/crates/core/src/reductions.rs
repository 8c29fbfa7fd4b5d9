//! Game transformations and instance generators.
//!
//! * [`reach_safety_product`] lifts Reachability/Safety games to Büchi or
//!   co-Büchi games over vertices `(v, I)`, where `I` records the players
//!   whose target set has already been visited. `I` only ever grows along a
//!   play, and the product is built lazily over the reachable part.
//! * [`qbf_to_game`] turns a fully quantified, alternating Boolean formula
//!   into a Reachability (or Safety) game whose constrained solution decides
//!   the formula's truth; [`qbf_eval`] is the independent truth oracle.
//! * [`random_game`] samples seeded arbitrary games for the test harnesses.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::game::{Game, GameError, ObjectiveClass, ObjectiveSpec, Payoff, Player, Vertex};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReductionError {
    #[error("the product construction applies to Reachability and Safety games only, got {0}")]
    UnsupportedObjective(ObjectiveClass),
    #[error("malformed formula: {0}")]
    MalformedFormula(String),
    #[error(transparent)]
    Game(#[from] GameError),
}

/// Maps product vertices back to the original game: base vertex plus the set
/// of players whose Reachability (resp. Safety) set has been visited.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductStructure {
    entries: Vec<(Vertex, BTreeSet<Player>)>,
    base_vertices: usize,
}

impl ProductStructure {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Number of vertices of the original game.
    pub fn base_vertices(&self) -> usize {
        self.base_vertices
    }

    pub fn base(&self, product_vertex: Vertex) -> Vertex {
        self.entries[product_vertex].0
    }

    pub fn satisfied(&self, product_vertex: Vertex) -> &BTreeSet<Player> {
        &self.entries[product_vertex].1
    }

    pub fn entries(&self) -> &[(Vertex, BTreeSet<Player>)] {
        &self.entries
    }
}

/// A Reachability/Safety game lifted to its prefix-independent product.
#[derive(Debug, Clone)]
pub struct ProductGame {
    pub game: Game,
    pub initial: Vertex,
    pub structure: ProductStructure,
}

/// Builds the product of a Reachability (resp. Safety) game: vertices are
/// reachable pairs `(v, I)` with `I' = I ∪ {i | v' ∈ F_i}` along each edge,
/// Reachability objectives become Büchi objectives `{(v, I) | i ∈ I}` and
/// Safety objectives become co-Büchi objectives over the same sets. Plays
/// correspond one-to-one and keep their payoffs.
pub fn reach_safety_product(game: &Game, v0: Vertex) -> Result<ProductGame, ReductionError> {
    let class = game.objective_class();
    if class.is_prefix_independent() {
        return Err(ReductionError::UnsupportedObjective(class));
    }
    let target = |player: Player| -> &BTreeSet<Vertex> {
        match game.objective(player) {
            ObjectiveSpec::Reachability(f) | ObjectiveSpec::Safety(f) => f,
            _ => unreachable!("checked objective class"),
        }
    };
    let touched = |v: Vertex, base: &BTreeSet<Player>| -> BTreeSet<Player> {
        let mut set = base.clone();
        for player in 1..=game.num_players() {
            if target(player).contains(&v) {
                set.insert(player);
            }
        }
        set
    };

    let initial_key = (v0, touched(v0, &BTreeSet::new()));
    let mut ids: BTreeMap<(Vertex, BTreeSet<Player>), Vertex> = BTreeMap::new();
    let mut entries: Vec<(Vertex, BTreeSet<Player>)> = Vec::new();
    let mut edges: Vec<(Vertex, Vertex)> = Vec::new();
    let mut queue = VecDeque::new();
    ids.insert(initial_key.clone(), 0);
    entries.push(initial_key.clone());
    queue.push_back((initial_key, 0));
    while let Some(((v, set), pid)) = queue.pop_front() {
        for &w in game.successors(v) {
            let next = (w, touched(w, &set));
            let nid = match ids.get(&next) {
                Some(&id) => id,
                None => {
                    let id = entries.len();
                    ids.insert(next.clone(), id);
                    entries.push(next.clone());
                    queue.push_back((next, id));
                    id
                }
            };
            edges.push((pid, nid));
        }
    }

    let owner: Vec<Player> = entries.iter().map(|(v, _)| game.owner(*v)).collect();
    let objectives: Vec<ObjectiveSpec> = (1..=game.num_players())
        .map(|player| {
            let lifted: BTreeSet<Vertex> = entries
                .iter()
                .enumerate()
                .filter(|(_, (_, set))| set.contains(&player))
                .map(|(id, _)| id)
                .collect();
            match class {
                ObjectiveClass::Reachability => ObjectiveSpec::Buchi(lifted),
                ObjectiveClass::Safety => ObjectiveSpec::CoBuchi(lifted),
                _ => unreachable!("checked objective class"),
            }
        })
        .collect();
    let product = Game::new(game.num_players(), owner, edges, objectives, Some(0))?;
    Ok(ProductGame {
        game: product,
        initial: 0,
        structure: ProductStructure {
            entries,
            base_vertices: game.num_vertices(),
        },
    })
}

/// A fully quantified Boolean formula in prenex conjunctive normal form with
/// strictly alternating quantifiers: variable 1 is existential, variable 2
/// universal, and so on. Literals are signed 1-based variable indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QbfFormula {
    num_vars: usize,
    clauses: Vec<Vec<i64>>,
}

impl QbfFormula {
    pub fn new(num_vars: usize, clauses: Vec<Vec<i64>>) -> Result<Self, ReductionError> {
        if num_vars == 0 {
            return Err(ReductionError::MalformedFormula(
                "at least one variable required".into(),
            ));
        }
        if clauses.is_empty() {
            return Err(ReductionError::MalformedFormula(
                "at least one clause required".into(),
            ));
        }
        for clause in &clauses {
            if clause.is_empty() {
                return Err(ReductionError::MalformedFormula("empty clause".into()));
            }
            for &lit in clause {
                let var = lit.unsigned_abs() as usize;
                if lit == 0 || var > num_vars {
                    return Err(ReductionError::MalformedFormula(format!(
                        "literal {lit} out of range"
                    )));
                }
            }
        }
        // Deduplicate literals inside clauses, keeping input order of the
        // clauses themselves.
        let clauses = clauses
            .into_iter()
            .map(|c| {
                let mut seen = BTreeSet::new();
                c.into_iter().filter(|&l| seen.insert(l)).collect()
            })
            .collect();
        Ok(QbfFormula { num_vars, clauses })
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn num_clauses(&self) -> usize {
        self.clauses.len()
    }

    pub fn clauses(&self) -> &[Vec<i64>] {
        &self.clauses
    }
}

/// Parses the QDIMACS-like format: a `p qbf <vars> <clauses>` header,
/// quantifier lines (`e`/`a`, variables, terminating 0) that must declare
/// variables 1..m in order with strictly alternating quantifiers starting
/// existentially, then clause lines of nonzero literals terminated by 0.
pub fn parse_qdimacs(input: &str) -> Result<QbfFormula, ReductionError> {
    let bad = |msg: &str| ReductionError::MalformedFormula(msg.to_string());
    let mut num_vars: Option<usize> = None;
    let mut num_clauses: Option<usize> = None;
    let mut declared: Vec<(char, usize)> = Vec::new();
    let mut clauses: Vec<Vec<i64>> = Vec::new();
    for line in input.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if let Some(rest) = line.strip_prefix('p') {
            if num_vars.is_some() {
                return Err(bad("duplicate header"));
            }
            let fields: Vec<&str> = rest.split_whitespace().collect();
            if fields.len() != 3 || fields[0] != "qbf" {
                return Err(bad("header must be `p qbf <vars> <clauses>`"));
            }
            num_vars = Some(fields[1].parse().map_err(|_| bad("bad variable count"))?);
            num_clauses = Some(fields[2].parse().map_err(|_| bad("bad clause count"))?);
            continue;
        }
        if num_vars.is_none() {
            return Err(bad("header must come first"));
        }
        if let Some(rest) = line.strip_prefix('e').or_else(|| line.strip_prefix('a')) {
            if !clauses.is_empty() {
                return Err(bad("quantifier line after clauses"));
            }
            let quant = line.chars().next().expect("nonempty line");
            let mut vars: Vec<usize> = Vec::new();
            for tok in rest.split_whitespace() {
                let n: i64 = tok.parse().map_err(|_| bad("bad quantifier line"))?;
                if n == 0 {
                    break;
                }
                if n < 0 {
                    return Err(bad("negative variable in quantifier line"));
                }
                vars.push(n as usize);
            }
            declared.extend(vars.into_iter().map(|v| (quant, v)));
            continue;
        }
        let mut clause: Vec<i64> = Vec::new();
        for tok in line.split_whitespace() {
            let n: i64 = tok.parse().map_err(|_| bad("bad clause literal"))?;
            if n == 0 {
                break;
            }
            clause.push(n);
        }
        clauses.push(clause);
    }
    let m = num_vars.ok_or_else(|| bad("missing header"))?;
    if declared.len() != m {
        return Err(bad("every variable must be quantified exactly once"));
    }
    for (idx, &(quant, var)) in declared.iter().enumerate() {
        let k = idx + 1;
        if var != k {
            return Err(bad("variables must be declared in order 1..m"));
        }
        let expected = if k % 2 == 1 { 'e' } else { 'a' };
        if quant != expected {
            return Err(bad(
                "quantifiers must strictly alternate starting existentially",
            ));
        }
    }
    if let Some(n) = num_clauses {
        if n != clauses.len() {
            return Err(bad("clause count does not match header"));
        }
    }
    QbfFormula::new(m, clauses)
}

/// Naive recursive truth evaluation: existential variables pick a value,
/// universal variables must work for both.
pub fn qbf_eval(formula: &QbfFormula) -> bool {
    fn recurse(formula: &QbfFormula, k: usize, assignment: &mut Vec<bool>) -> bool {
        if k > formula.num_vars {
            return formula.clauses.iter().all(|clause| {
                clause.iter().any(|&lit| {
                    let value = assignment[lit.unsigned_abs() as usize - 1];
                    (lit > 0) == value
                })
            });
        }
        let eval_with = |value: bool, assignment: &mut Vec<bool>| {
            assignment[k - 1] = value;
            recurse(formula, k + 1, assignment)
        };
        if k % 2 == 1 {
            eval_with(false, assignment) || eval_with(true, assignment)
        } else {
            eval_with(false, assignment) && eval_with(true, assignment)
        }
    }
    recurse(formula, 1, &mut vec![false; formula.num_vars()])
}

/// Which flavor of game [`qbf_to_game`] emits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QbfVariant {
    Reach,
    Safety,
}

/// Vertex layout of the generated formula game, for inspection and tests.
///
/// For `m` variables and `n` clauses the game has `3m + 2n + 1` vertices:
/// a chooser vertex and two literal vertices per variable, a clause vertex
/// and a trap vertex per clause, plus one final trap.
#[derive(Debug, Clone, Copy)]
pub struct QbfLayout {
    pub num_vars: usize,
    pub num_clauses: usize,
}

impl QbfLayout {
    pub fn num_vertices(&self) -> usize {
        3 * self.num_vars + 2 * self.num_clauses + 1
    }

    /// Chooser vertex for variable `k` (1-based).
    pub fn chooser(&self, k: usize) -> Vertex {
        3 * (k - 1)
    }

    /// Literal vertex for variable `k`, positive or negated.
    pub fn literal(&self, k: usize, positive: bool) -> Vertex {
        3 * (k - 1) + if positive { 1 } else { 2 }
    }

    /// Clause vertex for clause `j` (1-based).
    pub fn clause(&self, j: usize) -> Vertex {
        3 * self.num_vars + 2 * (j - 1)
    }

    /// Trap vertex for clause `j`; `j = n + 1` is the final trap.
    pub fn trap(&self, j: usize) -> Vertex {
        if j == self.num_clauses + 1 {
            3 * self.num_vars + 2 * self.num_clauses
        } else {
            3 * self.num_vars + 2 * (j - 1) + 1
        }
    }
}

/// A generated formula game together with its decision thresholds and
/// initial vertex.
#[derive(Debug, Clone)]
pub struct QbfGame {
    pub game: Game,
    pub initial: Vertex,
    pub lower: Payoff,
    pub upper: Payoff,
    pub layout: QbfLayout,
}

/// Builds the formula game: a chooser chain assigns the variables (the
/// existential player owns odd choosers, the universal player even ones),
/// then a clause chain where each clause's owner may bail out to a private
/// trap. The formula is true exactly when a weak subgame perfect equilibrium
/// with payoff at least `lower` exists from the first chooser.
pub fn qbf_to_game(formula: &QbfFormula, variant: QbfVariant) -> QbfGame {
    let m = formula.num_vars();
    let n = formula.num_clauses();
    let layout = QbfLayout {
        num_vars: m,
        num_clauses: n,
    };
    let num_players = n + 2;
    let existential = n + 1;
    let universal = n + 2;

    let mut owner = vec![1usize; layout.num_vertices()];
    for k in 1..=m {
        owner[layout.chooser(k)] = if k % 2 == 1 { existential } else { universal };
    }
    for j in 1..=n {
        owner[layout.clause(j)] = j;
    }

    let mut edges: Vec<(Vertex, Vertex)> = Vec::new();
    for k in 1..=m {
        edges.push((layout.chooser(k), layout.literal(k, true)));
        edges.push((layout.chooser(k), layout.literal(k, false)));
        let next = if k == m {
            layout.clause(1)
        } else {
            layout.chooser(k + 1)
        };
        edges.push((layout.literal(k, true), next));
        edges.push((layout.literal(k, false), next));
    }
    for j in 1..=n {
        edges.push((layout.clause(j), layout.trap(j)));
        let next = if j == n {
            layout.trap(n + 1)
        } else {
            layout.clause(j + 1)
        };
        edges.push((layout.clause(j), next));
    }
    for j in 1..=n + 1 {
        edges.push((layout.trap(j), layout.trap(j)));
    }

    let literal_vertices = |j: usize| -> BTreeSet<Vertex> {
        formula.clauses()[j - 1]
            .iter()
            .map(|&lit| layout.literal(lit.unsigned_abs() as usize, lit > 0))
            .collect()
    };
    let objectives: Vec<ObjectiveSpec> = (1..=num_players)
        .map(|player| {
            let f: BTreeSet<Vertex> = match variant {
                QbfVariant::Reach => {
                    if player <= n {
                        let mut f = literal_vertices(player);
                        f.insert(layout.trap(player));
                        f
                    } else if player == existential {
                        BTreeSet::from([layout.trap(n + 1)])
                    } else {
                        (1..=n).map(|j| layout.trap(j)).collect()
                    }
                }
                QbfVariant::Safety => {
                    if player <= n {
                        let mut f = literal_vertices(player);
                        f.insert(layout.trap(n + 1));
                        f
                    } else if player == existential {
                        (1..=n).map(|j| layout.trap(j)).collect()
                    } else {
                        BTreeSet::from([layout.trap(n + 1)])
                    }
                }
            };
            match variant {
                QbfVariant::Reach => ObjectiveSpec::Reachability(f),
                QbfVariant::Safety => ObjectiveSpec::Safety(f),
            }
        })
        .collect();

    let game = Game::new(
        num_players,
        owner,
        edges,
        objectives,
        Some(layout.chooser(1)),
    )
    .expect("generated formula game is structurally valid");
    let lower = Payoff::zeros(num_players).with(existential, true);
    let upper = Payoff::ones(num_players);
    QbfGame {
        game,
        initial: layout.chooser(1),
        lower,
        upper,
        layout,
    }
}

/// Parameters for the seeded random game generator.
#[derive(Debug, Clone)]
pub struct RandomGameParams {
    pub num_vertices: usize,
    pub num_players: usize,
    pub objective_class: ObjectiveClass,
    pub edge_density: f64,
    pub seed: u64,
}

/// Samples a valid game, deterministically in the seed: ownership is
/// uniform, every vertex keeps at least one outgoing edge, extra edges
/// appear with the given density, and objectives are drawn nonempty within
/// their class constraints.
pub fn random_game(params: &RandomGameParams) -> Game {
    assert!(params.num_vertices >= 1);
    assert!(params.num_players >= 1);
    assert!(params.edge_density > 0.0 && params.edge_density <= 1.0);
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let n = params.num_vertices;

    let owner: Vec<Player> = (0..n)
        .map(|_| rng.gen_range(1..=params.num_players))
        .collect();
    let mut edges: Vec<(Vertex, Vertex)> = Vec::new();
    for u in 0..n {
        edges.push((u, rng.gen_range(0..n)));
        for w in 0..n {
            if rng.gen_bool(params.edge_density) {
                edges.push((u, w));
            }
        }
    }

    let random_vertex_set = |rng: &mut ChaCha8Rng| -> BTreeSet<Vertex> {
        let mut set: BTreeSet<Vertex> = (0..n).filter(|_| rng.gen_bool(0.4)).collect();
        if set.is_empty() {
            set.insert(rng.gen_range(0..n));
        }
        set
    };
    let objectives: Vec<ObjectiveSpec> = (0..params.num_players)
        .map(|_| match params.objective_class {
            ObjectiveClass::Reachability => {
                ObjectiveSpec::Reachability(random_vertex_set(&mut rng))
            }
            ObjectiveClass::Safety => ObjectiveSpec::Safety(random_vertex_set(&mut rng)),
            ObjectiveClass::Buchi => ObjectiveSpec::Buchi(random_vertex_set(&mut rng)),
            ObjectiveClass::CoBuchi => ObjectiveSpec::CoBuchi(random_vertex_set(&mut rng)),
            ObjectiveClass::Parity => {
                let d = rng.gen_range(1..=4u32);
                ObjectiveSpec::Parity((0..n).map(|_| rng.gen_range(1..=d)).collect())
            }
            ObjectiveClass::ExplicitMuller => {
                let count = rng.gen_range(1..=3);
                let family = (0..count).map(|_| random_vertex_set(&mut rng)).collect();
                ObjectiveSpec::ExplicitMuller(family)
            }
            ObjectiveClass::Muller => {
                let d = rng.gen_range(1..=3u32);
                let colors: Vec<u32> = (0..n).map(|_| rng.gen_range(1..=d)).collect();
                let used: Vec<u32> = colors
                    .iter()
                    .copied()
                    .collect::<BTreeSet<_>>()
                    .into_iter()
                    .collect();
                let count = rng.gen_range(1..=3);
                let family: BTreeSet<BTreeSet<u32>> = (0..count)
                    .map(|_| {
                        let mut set: BTreeSet<u32> =
                            used.iter().copied().filter(|_| rng.gen_bool(0.5)).collect();
                        if set.is_empty() {
                            set.insert(used[rng.gen_range(0..used.len())]);
                        }
                        set
                    })
                    .collect();
                ObjectiveSpec::Muller { colors, family }
            }
            ObjectiveClass::Rabin | ObjectiveClass::Streett => {
                let count = rng.gen_range(1..=2);
                let pairs: Vec<(BTreeSet<Vertex>, BTreeSet<Vertex>)> = (0..count)
                    .map(|_| {
                        let g = random_vertex_set(&mut rng);
                        let r: BTreeSet<Vertex> = (0..n).filter(|_| rng.gen_bool(0.3)).collect();
                        (g, r)
                    })
                    .collect();
                if params.objective_class == ObjectiveClass::Rabin {
                    ObjectiveSpec::Rabin(pairs)
                } else {
                    ObjectiveSpec::Streett(pairs)
                }
            }
        })
        .collect();

    Game::new(params.num_players, owner, edges, objectives, Some(0))
        .expect("sampled game is structurally valid")
}
