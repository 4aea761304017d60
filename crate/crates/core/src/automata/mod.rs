//! LTL to automata: tableau Büchi automata, parity determinisation and
//! direct safety automata.

mod dpa;
mod guard;
mod nba;
mod safety;
mod safra;
mod tableau;

use thiserror::Error;

pub use dpa::Dpa;
pub use guard::{Cube, Guard};
pub use nba::{ltl_to_nba, Nba};
pub use safety::{product_automaton, safety_ltl_to_safety_automaton, SafetyAutomaton};
pub use safra::nba_to_dpa;

use crate::logic::{is_safety_nnf, simplify, to_nnf, Formula};

/// Largest number of atoms for which transition tables are built explicitly.
pub const MAX_EXPLICIT_ATOMS: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AutomataError {
    #[error("automaton exceeds the limit of {limit} states")]
    TooManyStates { limit: usize },
    #[error("{atoms} atoms exceed the explicit-alphabet limit of {limit}")]
    AlphabetTooLarge { atoms: usize, limit: usize },
    #[error("formula is not in negation normal form")]
    NotNnf,
    #[error("formula is not syntactically safe")]
    NotSafety,
    #[error("automata are over different alphabets")]
    AlphabetMismatch,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub max_states: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { max_states: 200_000 }
    }
}

/// How [`ltl_to_dpa`] built its result.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Construction {
    Safety,
    Determinised,
}

/// Deterministic parity automaton for an arbitrary formula: the safety
/// automaton when the formula is syntactically safe, otherwise the tableau
/// automaton determinised. The vocabulary is the formula's atoms after
/// simplification.
pub fn ltl_to_dpa(f: &Formula, limits: &Limits) -> Result<(Dpa, Construction), AutomataError> {
    let g = simplify(&to_nnf(f));
    if is_safety_nnf(&g) {
        Ok((safety_ltl_to_safety_automaton(&g, limits)?.to_dpa(), Construction::Safety))
    } else {
        Ok((nba_to_dpa(&ltl_to_nba(&g, limits)?, limits)?, Construction::Determinised))
    }
}

/// Safety automaton of a syntactically safe formula, after normalisation.
pub fn ltl_to_safety_automaton(f: &Formula, limits: &Limits) -> Result<SafetyAutomaton, AutomataError> {
    safety_ltl_to_safety_automaton(&simplify(&to_nnf(f)), limits)
}
