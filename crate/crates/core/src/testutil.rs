//! Shared fixtures for the unit tests.

use std::collections::BTreeSet;

use crate::game::{Game, ObjectiveSpec, Payoff, Vertex};

pub(crate) fn vset(vs: &[Vertex]) -> BTreeSet<Vertex> {
    vs.iter().copied().collect()
}

pub(crate) fn pf(s: &str) -> Payoff {
    Payoff::parse(s).expect("valid payoff literal")
}

/// The running two-player Büchi example used throughout the tests: player 2
/// owns vertices 0 and 4, player 1 the rest; player 1 wants to see vertex 1
/// infinitely often, player 2 wants vertex 3 or 5.
pub(crate) fn demo_game() -> Game {
    Game::new(
        2,
        vec![2, 1, 1, 1, 2, 1, 1],
        vec![
            (0, 1),
            (0, 4),
            (1, 2),
            (2, 1),
            (2, 3),
            (3, 3),
            (4, 5),
            (4, 6),
            (5, 5),
            (6, 6),
        ],
        vec![
            ObjectiveSpec::Buchi(vset(&[1])),
            ObjectiveSpec::Buchi(vset(&[3, 5])),
        ],
        Some(0),
    )
    .expect("demo game is valid")
}

/// Single self-loop vertex owned by player 1 with a Büchi objective on it.
pub(crate) fn self_loop_game() -> Game {
    Game::new(
        1,
        vec![1],
        vec![(0, 0)],
        vec![ObjectiveSpec::Buchi(vset(&[0]))],
        Some(0),
    )
    .expect("self-loop game is valid")
}
