//! JSON schemas for games, witnesses, profiles, and solver output.
//!
//! Emission is canonical: object keys are sorted, vertex lists ascend, and
//! payoffs are bitstrings with player 1 first, so equal values serialize to
//! identical bytes.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::fixpoint::{FixpointTrace, LabelingTable, RemovalCause};
use crate::game::{Game, GameError, Lasso, ObjectiveSpec, Payoff, Vertex};
use crate::reductions::ProductStructure;
use crate::strategy::{MooreProfile, VerifyReport};
use crate::witness::{SymbolicWitness, WitnessIndex, WitnessLasso};

#[derive(Debug, Error)]
pub enum JsonError {
    #[error("invalid JSON: {0}")]
    Parse(#[from] serde_json::Error),
    #[error(transparent)]
    Game(#[from] GameError),
    #[error("schema error: {0}")]
    Schema(String),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GameJson {
    pub players: usize,
    pub vertices: Vec<VertexJson>,
    pub edges: Vec<(usize, usize)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial: Option<usize>,
    pub objectives: Vec<ObjectiveJson>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VertexJson {
    pub id: usize,
    pub owner: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PairJson {
    #[serde(rename = "G")]
    pub g: Vec<usize>,
    #[serde(rename = "R")]
    pub r: Vec<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ObjectiveJson {
    Reachability {
        #[serde(rename = "F")]
        f: Vec<usize>,
    },
    Safety {
        #[serde(rename = "F")]
        f: Vec<usize>,
    },
    Buchi {
        #[serde(rename = "F")]
        f: Vec<usize>,
    },
    Cobuchi {
        #[serde(rename = "F")]
        f: Vec<usize>,
    },
    Parity {
        colors: BTreeMap<String, u32>,
    },
    ExplicitMuller {
        family: Vec<Vec<usize>>,
    },
    Muller {
        colors: BTreeMap<String, u32>,
        family: Vec<Vec<u32>>,
    },
    Rabin {
        pairs: Vec<PairJson>,
    },
    Streett {
        pairs: Vec<PairJson>,
    },
}

fn coloring_from_map(
    colors: &BTreeMap<String, u32>,
    num_vertices: usize,
) -> Result<Vec<u32>, JsonError> {
    let mut by_id: BTreeMap<usize, u32> = BTreeMap::new();
    for (key, &color) in colors {
        let id: usize = key
            .parse()
            .map_err(|_| JsonError::Schema(format!("bad vertex key {key:?} in coloring")))?;
        by_id.insert(id, color);
    }
    (0..num_vertices)
        .map(|v| {
            by_id
                .get(&v)
                .copied()
                .ok_or_else(|| JsonError::Schema(format!("vertex {v} has no color")))
        })
        .collect()
}

fn coloring_to_map(colors: &[u32]) -> BTreeMap<String, u32> {
    colors
        .iter()
        .enumerate()
        .map(|(v, &c)| (v.to_string(), c))
        .collect()
}

fn objective_from_json(
    raw: &ObjectiveJson,
    num_vertices: usize,
) -> Result<ObjectiveSpec, JsonError> {
    let set = |vs: &Vec<usize>| -> BTreeSet<Vertex> { vs.iter().copied().collect() };
    Ok(match raw {
        ObjectiveJson::Reachability { f } => ObjectiveSpec::Reachability(set(f)),
        ObjectiveJson::Safety { f } => ObjectiveSpec::Safety(set(f)),
        ObjectiveJson::Buchi { f } => ObjectiveSpec::Buchi(set(f)),
        ObjectiveJson::Cobuchi { f } => ObjectiveSpec::CoBuchi(set(f)),
        ObjectiveJson::Parity { colors } => {
            ObjectiveSpec::Parity(coloring_from_map(colors, num_vertices)?)
        }
        ObjectiveJson::ExplicitMuller { family } => {
            ObjectiveSpec::ExplicitMuller(family.iter().map(&set).collect())
        }
        ObjectiveJson::Muller { colors, family } => ObjectiveSpec::Muller {
            colors: coloring_from_map(colors, num_vertices)?,
            family: family.iter().map(|f| f.iter().copied().collect()).collect(),
        },
        ObjectiveJson::Rabin { pairs } => {
            ObjectiveSpec::Rabin(pairs.iter().map(|p| (set(&p.g), set(&p.r))).collect())
        }
        ObjectiveJson::Streett { pairs } => {
            ObjectiveSpec::Streett(pairs.iter().map(|p| (set(&p.g), set(&p.r))).collect())
        }
    })
}

fn objective_to_json(obj: &ObjectiveSpec) -> ObjectiveJson {
    let list = |s: &BTreeSet<Vertex>| -> Vec<usize> { s.iter().copied().collect() };
    match obj {
        ObjectiveSpec::Reachability(f) => ObjectiveJson::Reachability { f: list(f) },
        ObjectiveSpec::Safety(f) => ObjectiveJson::Safety { f: list(f) },
        ObjectiveSpec::Buchi(f) => ObjectiveJson::Buchi { f: list(f) },
        ObjectiveSpec::CoBuchi(f) => ObjectiveJson::Cobuchi { f: list(f) },
        ObjectiveSpec::Parity(colors) => ObjectiveJson::Parity {
            colors: coloring_to_map(colors),
        },
        ObjectiveSpec::ExplicitMuller(family) => ObjectiveJson::ExplicitMuller {
            family: family.iter().map(&list).collect(),
        },
        ObjectiveSpec::Muller { colors, family } => ObjectiveJson::Muller {
            colors: coloring_to_map(colors),
            family: family.iter().map(|f| f.iter().copied().collect()).collect(),
        },
        ObjectiveSpec::Rabin(pairs) => ObjectiveJson::Rabin {
            pairs: pairs
                .iter()
                .map(|(g, r)| PairJson {
                    g: list(g),
                    r: list(r),
                })
                .collect(),
        },
        ObjectiveSpec::Streett(pairs) => ObjectiveJson::Streett {
            pairs: pairs
                .iter()
                .map(|(g, r)| PairJson {
                    g: list(g),
                    r: list(r),
                })
                .collect(),
        },
    }
}

/// Converts the raw schema into a validated game. Vertex ids must be dense
/// `0..n-1`.
pub fn game_from_raw(raw: &GameJson) -> Result<Game, JsonError> {
    let n = raw.vertices.len();
    let mut owner = vec![0usize; n];
    let mut seen = vec![false; n];
    for v in &raw.vertices {
        if v.id >= n || seen[v.id] {
            return Err(JsonError::Schema(format!(
                "vertex ids must be dense 0..{}, got {}",
                n.saturating_sub(1),
                v.id
            )));
        }
        seen[v.id] = true;
        owner[v.id] = v.owner;
    }
    let objectives = raw
        .objectives
        .iter()
        .map(|o| objective_from_json(o, n))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Game::new(
        raw.players,
        owner,
        raw.edges.clone(),
        objectives,
        raw.initial,
    )?)
}

pub fn game_from_json_str(s: &str) -> Result<Game, JsonError> {
    let raw: GameJson = serde_json::from_str(s)?;
    game_from_raw(&raw)
}

pub fn game_to_raw(game: &Game) -> GameJson {
    GameJson {
        players: game.num_players(),
        vertices: game
            .vertices()
            .map(|id| VertexJson {
                id,
                owner: game.owner(id),
            })
            .collect(),
        edges: game.edges().collect(),
        initial: game.initial(),
        objectives: game.objectives().iter().map(objective_to_json).collect(),
    }
}

pub fn game_to_json_string(game: &Game) -> String {
    let mut out = serde_json::to_string_pretty(&game_to_raw(game)).expect("serializable schema");
    out.push('\n');
    out
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LassoJson {
    pub stem: Vec<usize>,
    pub cycle: Vec<usize>,
    pub payoff: String,
}

fn lasso_to_json(lasso: &Lasso, payoff: &Payoff) -> LassoJson {
    LassoJson {
        stem: lasso.stem().to_vec(),
        cycle: lasso.cycle().to_vec(),
        payoff: payoff.to_string(),
    }
}

fn lasso_from_json(raw: &LassoJson) -> Result<(Lasso, Payoff), JsonError> {
    if raw.cycle.is_empty() {
        return Err(JsonError::Schema("lasso cycle must be nonempty".into()));
    }
    Ok((
        Lasso::new(raw.stem.clone(), raw.cycle.clone()),
        Payoff::parse(&raw.payoff)?,
    ))
}

fn slot_key(tag: usize, vertex: Vertex) -> String {
    format!("{tag},{vertex}")
}

fn parse_slot_key(key: &str) -> Result<(usize, Vertex), JsonError> {
    let (tag, vertex) = key
        .split_once(',')
        .ok_or_else(|| JsonError::Schema(format!("bad slot key {key:?}")))?;
    Ok((
        tag.parse()
            .map_err(|_| JsonError::Schema(format!("bad slot key {key:?}")))?,
        vertex
            .parse()
            .map_err(|_| JsonError::Schema(format!("bad slot key {key:?}")))?,
    ))
}

pub fn witness_to_value(witness: &SymbolicWitness) -> Value {
    let index: Vec<Value> = witness
        .index
        .entries()
        .iter()
        .map(|&(tag, v)| json!([tag, v]))
        .collect();
    let lassoes: BTreeMap<String, LassoJson> = witness
        .lassoes
        .iter()
        .map(|(&(tag, v), wl)| (slot_key(tag, v), lasso_to_json(&wl.lasso, &wl.payoff)))
        .collect();
    json!({ "index": index, "lassoes": lassoes })
}

pub fn witness_from_value(value: &Value) -> Result<SymbolicWitness, JsonError> {
    let index_raw: Vec<(usize, usize)> =
        serde_json::from_value(value["index"].clone()).map_err(JsonError::Parse)?;
    let lassoes_raw: BTreeMap<String, LassoJson> =
        serde_json::from_value(value["lassoes"].clone()).map_err(JsonError::Parse)?;
    let mut lassoes = BTreeMap::new();
    for (key, raw) in &lassoes_raw {
        let slot = parse_slot_key(key)?;
        let (lasso, payoff) = lasso_from_json(raw)?;
        lassoes.insert(slot, WitnessLasso { lasso, payoff });
    }
    Ok(SymbolicWitness {
        index: WitnessIndex::from_entries(index_raw.into_iter().collect()),
        lassoes,
    })
}

pub fn profile_to_value(profile: &MooreProfile) -> Value {
    let slots: Vec<Value> = profile
        .slots()
        .iter()
        .map(|&(tag, v)| json!([tag, v]))
        .collect();
    let lassoes: BTreeMap<String, LassoJson> = profile
        .slots()
        .iter()
        .enumerate()
        .map(|(id, &(tag, v))| {
            (
                slot_key(tag, v),
                lasso_to_json(profile.lasso(id), &profile.slot_payoff(id)),
            )
        })
        .collect();
    let (tag, v) = profile.slots()[profile.initial_slot()];
    json!({ "slots": slots, "lassoes": lassoes, "initial": [tag, v] })
}

/// Rebuilds a profile from its JSON form; the lassoes are re-validated
/// against the game.
pub fn profile_from_value(value: &Value, game: &Game) -> Result<MooreProfile, JsonError> {
    let witness = {
        let slots: Vec<(usize, usize)> =
            serde_json::from_value(value["slots"].clone()).map_err(JsonError::Parse)?;
        let lassoes_raw: BTreeMap<String, LassoJson> =
            serde_json::from_value(value["lassoes"].clone()).map_err(JsonError::Parse)?;
        let mut lassoes = BTreeMap::new();
        for (key, raw) in &lassoes_raw {
            let slot = parse_slot_key(key)?;
            let (lasso, payoff) = lasso_from_json(raw)?;
            lassoes.insert(slot, WitnessLasso { lasso, payoff });
        }
        SymbolicWitness {
            index: WitnessIndex::from_entries(slots.into_iter().collect()),
            lassoes,
        }
    };
    crate::strategy::synthesize_profile(&witness, game)
        .map_err(|e| JsonError::Schema(e.to_string()))
}

pub fn table_to_value(table: &LabelingTable) -> Value {
    let map: BTreeMap<String, Vec<String>> = table
        .iter()
        .map(|(v, payoffs)| {
            (
                v.to_string(),
                payoffs.iter().map(|p| p.to_string()).collect(),
            )
        })
        .collect();
    json!(map)
}

pub fn trace_to_value(trace: &FixpointTrace) -> Value {
    let events: Vec<Value> = trace
        .removals
        .iter()
        .map(|e| {
            json!({
                "k": e.step,
                "vertex": e.vertex,
                "payoff": e.payoff.to_string(),
                "cause": match e.cause {
                    RemovalCause::Remove => "remove",
                    RemovalCause::Adjust => "adjust",
                },
            })
        })
        .collect();
    json!(events)
}

pub fn report_to_value(report: &VerifyReport) -> Value {
    let counterexample = report.counterexample.as_ref().map(|ce| {
        json!({
            "config": {
                "slot": ce.config.slot,
                "pos": ce.config.pos,
                "vertex": ce.config.vertex,
            },
            "deviator": ce.deviator,
            "alternative": ce.alternative,
            "gain_before": ce.gain_before as u8,
            "gain_after": ce.gain_after as u8,
        })
    });
    json!({
        "is_weak_spe": report.is_weak_spe,
        "counterexample": counterexample,
    })
}

pub fn product_to_value(structure: &ProductStructure) -> Value {
    let map: BTreeMap<String, Value> = structure
        .entries()
        .iter()
        .enumerate()
        .map(|(id, (base, satisfied))| {
            (
                id.to_string(),
                json!({
                    "base": base,
                    "satisfied": satisfied.iter().copied().collect::<Vec<_>>(),
                }),
            )
        })
        .collect();
    json!({
        "base_vertices": structure.base_vertices(),
        "vertices": map,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixpoint::run_fixpoint;
    use crate::testutil::{demo_game, pf};
    use crate::witness::{build_witness, Compaction};

    #[test]
    fn game_round_trips_through_json() {
        let g = demo_game();
        let text = game_to_json_string(&g);
        let parsed = game_from_json_str(&text).unwrap();
        assert_eq!(parsed, g);
        // Emission is byte-stable.
        assert_eq!(game_to_json_string(&parsed), text);
    }

    #[test]
    fn schema_rejects_sparse_vertex_ids() {
        let text = r#"{
            "players": 1,
            "vertices": [{"id": 0, "owner": 1}, {"id": 2, "owner": 1}],
            "edges": [[0, 0], [2, 2]],
            "objectives": [{"type": "buchi", "F": [0]}]
        }"#;
        assert!(matches!(
            game_from_json_str(text),
            Err(JsonError::Schema(_))
        ));
    }

    #[test]
    fn schema_rejects_partial_colorings() {
        let text = r#"{
            "players": 1,
            "vertices": [{"id": 0, "owner": 1}, {"id": 1, "owner": 1}],
            "edges": [[0, 1], [1, 0]],
            "objectives": [{"type": "parity", "colors": {"0": 2}}]
        }"#;
        assert!(matches!(
            game_from_json_str(text),
            Err(JsonError::Schema(_))
        ));
    }

    #[test]
    fn witness_and_profile_round_trip() {
        let g = demo_game();
        let (table, _) = run_fixpoint(&g, 0).unwrap();
        let witness = build_witness(&g, &table, 0, &pf("01"), Compaction::General).unwrap();
        let value = witness_to_value(&witness);
        let back = witness_from_value(&value).unwrap();
        assert_eq!(back, witness);

        let profile = crate::strategy::synthesize_profile(&witness, &g).unwrap();
        let value = profile_to_value(&profile);
        let back = profile_from_value(&value, &g).unwrap();
        assert_eq!(back, profile);
    }
}
