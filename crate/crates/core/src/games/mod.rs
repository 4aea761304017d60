//! Alternating two-player parity games: arenas built from automata,
//! Zielonka and attractor solvers, region restriction and products.

mod arena;
mod build;
mod game;
mod pgsolver;

use thiserror::Error;

pub use arena::{Arena, Solution};
pub use build::{dpa_to_game, dpa_to_scheduled_game, Schedule};
pub use game::{game_product, restrict_to_winning_region, solve_parity, solve_safety, ParityGame};
pub use pgsolver::{parse_pgsolver, PgSolverError};

/// Largest number of atoms per side for which actions are enumerated.
pub const MAX_ACTION_ATOMS: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Player {
    /// The system, choosing outputs. Wins plays whose maximal recurring colour is even.
    P0,
    /// The environment, choosing inputs.
    P1,
}

impl Player {
    pub fn opponent(self) -> Player {
        match self {
            Player::P0 => Player::P1,
            Player::P1 => Player::P0,
        }
    }

    /// The player favoured by a colour under max-even parity.
    pub fn of_color(c: u32) -> Player {
        if c % 2 == 0 {
            Player::P0
        } else {
            Player::P1
        }
    }

    pub fn index(self) -> usize {
        match self {
            Player::P0 => 0,
            Player::P1 => 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GameError {
    #[error("{atoms} atoms on one side exceed the action limit of {limit}")]
    TooManyActions { atoms: usize, limit: usize },
    #[error("atom {0} is neither an input, an output nor scheduled")]
    UncoveredAtom(String),
    #[error("atom {0} is both an input and an output")]
    OverlappingAtom(String),
    #[error("games are over different action alphabets")]
    AlphabetMismatch,
    #[error("not a safety game: colours must be 0 or 1 and colour-1 states absorbing")]
    NotSafety,
    #[error("players do not alternate at state {0}")]
    NotAlternating(u32),
    #[error("state {state} has {found} moves, expected {expected}")]
    WrongMoveCount { state: u32, found: usize, expected: usize },
    #[error("the initial state is losing: specification is unrealizable")]
    Unrealizable,
}
