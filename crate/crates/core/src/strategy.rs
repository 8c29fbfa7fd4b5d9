//! Finite-memory strategy profiles built from symbolic witnesses, and the
//! independent one-shot-deviation verifier.
//!
//! All players share one memory automaton: a slot of the witness index plus
//! a position along that slot's lasso. As long as everyone follows, the
//! position advances through the current lasso (cycling inside its loop).
//! When the owner of the current vertex moves somewhere else, the memory
//! switches to the slot of the deviating player and target vertex and
//! replays that lasso from its start. Resistance to one-shot deviations in
//! every subgame is equivalent to the weak subgame perfect property, and for
//! prefix-independent objectives it only depends on the reachable
//! memory-vertex configurations, which is what the verifier enumerates.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use thiserror::Error;

use crate::game::{Game, Lasso, ObjectiveClass, Payoff, Player, Vertex};
use crate::witness::SymbolicWitness;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SynthError {
    #[error("no lasso for deviation slot ({player}, {vertex})")]
    MissingLasso { player: usize, vertex: Vertex },
    #[error("{0} objectives cannot be verified configuration-wise; verify the product game")]
    UnsupportedObjective(ObjectiveClass),
    #[error("profile has no outcome slot")]
    MissingOutcomeSlot,
    #[error("lasso of slot ({player}, {vertex}) is not a play of the game")]
    InvalidLasso { player: usize, vertex: Vertex },
}

/// A strategy profile as one shared Moore machine. Memory states are
/// `(slot, position)` pairs; the next-action function reads the current
/// lasso position, the update function advances it or switches slot on a
/// deviation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MooreProfile {
    slots: Vec<(usize, Vertex)>,
    lassoes: Vec<Lasso>,
    payoffs: Vec<Payoff>,
    slot_ids: BTreeMap<(usize, Vertex), usize>,
    initial_slot: usize,
}

/// A joint memory-and-vertex state of the profile; `vertex` always equals
/// the current lasso vertex at `pos`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ProfileConfiguration {
    pub slot: usize,
    pub pos: usize,
    pub vertex: Vertex,
}

impl MooreProfile {
    pub fn slots(&self) -> &[(usize, Vertex)] {
        &self.slots
    }

    pub fn lasso(&self, slot: usize) -> &Lasso {
        &self.lassoes[slot]
    }

    /// Recorded payoff of a slot's lasso.
    pub fn slot_payoff(&self, slot: usize) -> Payoff {
        self.payoffs[slot]
    }

    pub fn slot_id(&self, tag: usize, vertex: Vertex) -> Option<usize> {
        self.slot_ids.get(&(tag, vertex)).copied()
    }

    pub fn initial_slot(&self) -> usize {
        self.initial_slot
    }

    /// Total number of memory states: one per lasso position.
    pub fn memory_size(&self) -> usize {
        self.lassoes.iter().map(|l| l.len()).sum()
    }

    pub fn initial_configuration(&self) -> ProfileConfiguration {
        let lasso = &self.lassoes[self.initial_slot];
        ProfileConfiguration {
            slot: self.initial_slot,
            pos: 0,
            vertex: lasso.first(),
        }
    }

    fn advance(&self, slot: usize, pos: usize) -> usize {
        let lasso = &self.lassoes[slot];
        if pos + 1 < lasso.len() {
            pos + 1
        } else {
            lasso.stem().len()
        }
    }

    /// The move the profile prescribes at this configuration.
    pub fn next_action(&self, config: &ProfileConfiguration) -> Vertex {
        self.lassoes[config.slot].vertex_at(self.advance(config.slot, config.pos))
    }

    /// Successor configuration when everyone follows the profile.
    pub fn follow(&self, config: &ProfileConfiguration) -> ProfileConfiguration {
        let pos = self.advance(config.slot, config.pos);
        ProfileConfiguration {
            slot: config.slot,
            pos,
            vertex: self.lassoes[config.slot].vertex_at(pos),
        }
    }

    /// Successor configuration when the owner of the current vertex moves to
    /// `target` instead: memory switches to the deviation slot.
    pub fn deviate(
        &self,
        config: &ProfileConfiguration,
        target: Vertex,
        game: &Game,
    ) -> Result<ProfileConfiguration, SynthError> {
        let player = game.owner(config.vertex);
        let slot = self
            .slot_id(player, target)
            .ok_or(SynthError::MissingLasso {
                player,
                vertex: target,
            })?;
        Ok(ProfileConfiguration {
            slot,
            pos: 0,
            vertex: target,
        })
    }
}

/// Builds the shared-memory profile from a symbolic witness. Every index
/// slot must carry a lasso starting at its slot vertex; goodness of the
/// witness is the caller's obligation and makes the result a weak subgame
/// perfect equilibrium.
pub fn synthesize_profile(
    witness: &SymbolicWitness,
    game: &Game,
) -> Result<MooreProfile, SynthError> {
    for &(tag, v) in witness.index.entries() {
        if !witness.lassoes.contains_key(&(tag, v)) {
            return Err(SynthError::MissingLasso {
                player: tag,
                vertex: v,
            });
        }
    }
    let mut slots = Vec::new();
    let mut lassoes = Vec::new();
    let mut payoffs = Vec::new();
    let mut slot_ids = BTreeMap::new();
    for (&(tag, v), wl) in &witness.lassoes {
        if wl.lasso.first() != v || !wl.lasso.is_valid_in(game) {
            return Err(SynthError::InvalidLasso {
                player: tag,
                vertex: v,
            });
        }
        slot_ids.insert((tag, v), slots.len());
        slots.push((tag, v));
        lassoes.push(wl.lasso.clone());
        payoffs.push(game.payoff_of(&wl.lasso));
    }
    let initial_slot = slots
        .iter()
        .position(|&(tag, _)| tag == 0)
        .ok_or(SynthError::MissingOutcomeSlot)?;
    Ok(MooreProfile {
        slots,
        lassoes,
        payoffs,
        slot_ids,
        initial_slot,
    })
}

/// Simulates the profile from a configuration until a configuration
/// repeats, and returns the resulting eventually periodic play as a lasso.
pub fn outcome_from(profile: &MooreProfile, config: &ProfileConfiguration) -> Lasso {
    let mut seen: BTreeMap<ProfileConfiguration, usize> = BTreeMap::new();
    let mut visited: Vec<Vertex> = Vec::new();
    let mut cur = *config;
    loop {
        if let Some(&start) = seen.get(&cur) {
            return Lasso::new(visited[..start].to_vec(), visited[start..].to_vec());
        }
        seen.insert(cur, visited.len());
        visited.push(cur.vertex);
        cur = profile.follow(&cur);
    }
}

/// A profitable one-shot deviation found by the verifier.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub config: ProfileConfiguration,
    pub deviator: Player,
    pub alternative: Vertex,
    pub gain_before: bool,
    pub gain_after: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyReport {
    pub is_weak_spe: bool,
    pub counterexample: Option<Counterexample>,
}

/// Checks the weak subgame perfect property by enumerating every reachable
/// configuration and every one-shot deviation from it: stepping off the
/// prescribed move and then following the profile must never strictly
/// improve the deviator's gain.
///
/// Sound for prefix-independent objectives, where a subgame's gain is the
/// gain of its continuation; Reachability and Safety games must be verified
/// on their product, whose objectives are prefix-independent again.
pub fn verify_weak_spe(profile: &MooreProfile, game: &Game) -> Result<VerifyReport, SynthError> {
    if !game.is_prefix_independent() {
        return Err(SynthError::UnsupportedObjective(game.objective_class()));
    }
    let initial = profile.initial_configuration();
    let mut queue = VecDeque::from([initial]);
    let mut seen: BTreeSet<ProfileConfiguration> = BTreeSet::from([initial]);
    while let Some(config) = queue.pop_front() {
        let player = game.owner(config.vertex);
        let prescribed = profile.next_action(&config);
        // With prefix-independent gains, the outcome from any configuration
        // of a slot keeps the slot lasso's infinite-visit set, so its gain
        // is the recorded slot payoff.
        let gain_before = profile.slot_payoff(config.slot).get(player);
        debug_assert_eq!(
            gain_before,
            game.payoff_of(&outcome_from(profile, &config)).get(player)
        );
        for &target in game.successors(config.vertex) {
            if target == prescribed {
                continue;
            }
            let deviated = profile.deviate(&config, target, game)?;
            let gain_after = profile.slot_payoff(deviated.slot).get(player);
            if gain_after && !gain_before {
                return Ok(VerifyReport {
                    is_weak_spe: false,
                    counterexample: Some(Counterexample {
                        config,
                        deviator: player,
                        alternative: target,
                        gain_before,
                        gain_after,
                    }),
                });
            }
            if seen.insert(deviated) {
                queue.push_back(deviated);
            }
        }
        let followed = profile.follow(&config);
        if seen.insert(followed) {
            queue.push_back(followed);
        }
    }
    Ok(VerifyReport {
        is_weak_spe: true,
        counterexample: None,
    })
}
