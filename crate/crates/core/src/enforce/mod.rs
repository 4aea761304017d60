//! Game-based enforcers: the parallel model, where `n` traces advance in
//! lock-step, and the sequential model, where sessions arrive one at a time.

mod parallel;
mod sequential;
mod stream;

use std::sync::Arc;
use std::time::Duration;

use thiserror::Error;

pub use parallel::{build_parallel_game, initialize, run_stream, RunResult};
pub use sequential::{run_sequential, SequentialRun, SequentialState, SessionOutcome};
pub use stream::{format_inputs, format_outputs, parse_sessions, parse_steps, Step, StreamError, NEW_SESSION};

use crate::automata::{AutomataError, Limits};
use crate::compose::{CompositionError, DEFAULT_NODE_BUDGET};
use crate::games::{GameError, ParityGame, Player, Solution};
use crate::logic::{Atom, Letter};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnforceError {
    #[error(transparent)]
    Composition(#[from] CompositionError),
    #[error(transparent)]
    Automata(#[from] AutomataError),
    #[error(transparent)]
    Game(#[from] GameError),
    #[error("specification is unrealizable")]
    Unrealizable,
    #[error("no correct continuation exists for session {session}")]
    NextSessionUnrealizable { session: usize },
    #[error("expected {expected} trace events per step, got {found}")]
    WrongArity { expected: usize, found: usize },
    #[error("letter {0:#x} sets propositions outside the expected set")]
    OutsideAlphabet(Letter),
    #[error("{0}")]
    Protocol(&'static str),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnforceConfig {
    /// Refusal threshold for self-composition, in formula nodes.
    pub budget: u64,
    pub limits: Limits,
    /// Return control to the system after each correction instead of keeping it.
    pub hand_back: bool,
    /// Sequential model only: build safety games incrementally.
    pub fast_path: bool,
}

impl Default for EnforceConfig {
    fn default() -> Self {
        EnforceConfig { budget: DEFAULT_NODE_BUDGET, limits: Limits::default(), hand_back: false, fast_path: true }
    }
}

/// A solved game plus the mapping between game actions and the per-trace
/// letters seen on the stream. Immutable; sessions share it.
#[derive(Debug, Clone)]
pub struct SolvedGame {
    game: ParityGame,
    solution: Solution,
    /// Number of letters per observed step.
    slots: usize,
    /// For each game output atom: observed slot and bit in that slot's letter.
    outputs: Vec<(usize, Letter)>,
    inputs: Vec<(usize, Letter)>,
    output_mask: Letter,
    input_mask: Letter,
}

impl SolvedGame {
    /// Solves `game` and checks that its initial state is winning. `locate`
    /// maps a game atom to its slot and bit.
    pub(crate) fn new(
        game: ParityGame,
        solution: Solution,
        slots: usize,
        masks: (Letter, Letter),
        locate: impl Fn(&Atom) -> (usize, Letter),
    ) -> Result<Self, EnforceError> {
        if !solution.wins(Player::P0, game.initial()) {
            return Err(EnforceError::Unrealizable);
        }
        let outputs = game.outputs().iter().map(&locate).collect();
        let inputs = game.inputs().iter().map(&locate).collect();
        Ok(SolvedGame { game, solution, slots, outputs, inputs, output_mask: masks.1, input_mask: masks.0 })
    }

    pub fn game(&self) -> &ParityGame {
        &self.game
    }

    pub fn solution(&self) -> &Solution {
        &self.solution
    }

    pub fn slots(&self) -> usize {
        self.slots
    }

    fn encode(map: &[(usize, Letter)], letters: &[Letter]) -> u32 {
        map.iter().enumerate().filter(|(_, &(s, bit))| letters[s] & bit != 0).fold(0, |a, (j, _)| a | 1 << j)
    }

    fn decode(&self, map: &[(usize, Letter)], action: u32) -> Vec<Letter> {
        let mut out = vec![0; self.slots];
        for (j, &(s, bit)) in map.iter().enumerate() {
            if action >> j & 1 == 1 {
                out[s] |= bit;
            }
        }
        out
    }

    pub(crate) fn output_action(&self, outputs: &[Letter]) -> u32 {
        Self::encode(&self.outputs, outputs)
    }

    pub(crate) fn input_action(&self, inputs: &[Letter]) -> u32 {
        Self::encode(&self.inputs, inputs)
    }

    fn check(&self, letters: &[Letter], mask: Letter) -> Result<(), EnforceError> {
        if letters.len() != self.slots {
            return Err(EnforceError::WrongArity { expected: self.slots, found: letters.len() });
        }
        match letters.iter().find(|&&l| l & !mask != 0) {
            Some(&l) => Err(EnforceError::OutsideAlphabet(l)),
            None => Ok(()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Monitoring,
    Enforcing,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    /// The system's outputs would leave the winning region; these replace them.
    TakeOver(Vec<Letter>),
}

/// Per-session statistics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SessionStats {
    pub steps: usize,
    /// Step of the first correction.
    pub intervention: Option<usize>,
    /// Wall time of the enforcement loop.
    pub elapsed: Duration,
}

/// One run over a shared solved game. Each step is an output move followed
/// by an input move.
#[derive(Debug, Clone)]
pub struct EnforcerSession {
    solved: Arc<SolvedGame>,
    hand_back: bool,
    lastq: u32,
    /// Game state after this step's output move, until the input arrives.
    pending: Option<u32>,
    mode: Mode,
    step: usize,
    intervention: Option<usize>,
}

impl EnforcerSession {
    pub fn new(solved: Arc<SolvedGame>, hand_back: bool) -> Self {
        let lastq = solved.game.initial();
        EnforcerSession { solved, hand_back, lastq, pending: None, mode: Mode::Monitoring, step: 0, intervention: None }
    }

    pub fn solved(&self) -> &Arc<SolvedGame> {
        &self.solved
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn step(&self) -> usize {
        self.step
    }

    pub fn intervention(&self) -> Option<usize> {
        self.intervention
    }

    /// Current system-owned game state.
    pub fn lastq(&self) -> u32 {
        self.lastq
    }

    fn strategy_move(&mut self) -> Vec<Letter> {
        let s = &self.solved;
        let action = s.solution.choice(self.lastq).expect("winning system state has a strategy");
        self.pending = Some(s.game.step(self.lastq, action));
        s.decode(&s.outputs, action)
    }

    /// Checks the system's outputs for this step and commits them, or
    /// commits the strategy's outputs instead when they would lose.
    pub fn observe_outputs(&mut self, outputs: &[Letter]) -> Result<Verdict, EnforceError> {
        if self.mode != Mode::Monitoring {
            return Err(EnforceError::Protocol("outputs observed while enforcing"));
        }
        if self.pending.is_some() {
            return Err(EnforceError::Protocol("outputs observed twice in one step"));
        }
        let s = Arc::clone(&self.solved);
        s.check(outputs, s.output_mask)?;
        let target = s.game.step(self.lastq, s.output_action(outputs));
        if s.solution.wins(Player::P0, target) {
            self.pending = Some(target);
            return Ok(Verdict::Pass);
        }
        self.intervention.get_or_insert(self.step);
        if !self.hand_back {
            self.mode = Mode::Enforcing;
        }
        Ok(Verdict::TakeOver(self.strategy_move()))
    }

    /// Outputs chosen by the winning strategy for this step.
    pub fn enforce_step(&mut self) -> Result<Vec<Letter>, EnforceError> {
        if self.mode != Mode::Enforcing {
            return Err(EnforceError::Protocol("enforce step while monitoring"));
        }
        if self.pending.is_some() {
            return Err(EnforceError::Protocol("outputs already chosen in this step"));
        }
        Ok(self.strategy_move())
    }

    pub fn observe_inputs(&mut self, inputs: &[Letter]) -> Result<(), EnforceError> {
        let Some(v) = self.pending else {
            return Err(EnforceError::Protocol("inputs observed before outputs"));
        };
        let s = &self.solved;
        s.check(inputs, s.input_mask)?;
        self.lastq = s.game.step(v, s.input_action(inputs));
        debug_assert!(s.solution.wins(Player::P0, self.lastq), "environment left the winning region");
        self.pending = None;
        self.step += 1;
        Ok(())
    }

    /// One full step: the outputs actually emitted and whether the enforcer
    /// chose them.
    pub fn advance(&mut self, outputs: &[Letter], inputs: &[Letter]) -> Result<(Vec<Letter>, bool), EnforceError> {
        let emitted = match self.mode {
            Mode::Monitoring => match self.observe_outputs(outputs)? {
                Verdict::Pass => (outputs.to_vec(), false),
                Verdict::TakeOver(o) => (o, true),
            },
            Mode::Enforcing => (self.enforce_step()?, true),
        };
        self.observe_inputs(inputs)?;
        Ok(emitted)
    }
}
