use std::sync::Arc;
use std::time::Instant;

use super::stream::Step;
use super::{EnforceConfig, EnforceError, EnforcerSession, SessionStats, SolvedGame};
use crate::automata::{ltl_to_dpa, Construction};
use crate::compose::{self_compose, FiniteTrace};
use crate::games::{dpa_to_scheduled_game, solve_parity, solve_safety, Schedule};
use crate::logic::{Atom, HyperSpec, TraceRef, END};

/// Builds and solves the game for `n` traces in lock-step. Each observed
/// step carries one letter per trace over the base alphabet.
pub fn build_parallel_game(spec: &HyperSpec, n: u32, config: &EnforceConfig) -> Result<SolvedGame, EnforceError> {
    if !spec.is_universal() {
        return Err(crate::compose::CompositionError::NotUniversal.into());
    }
    let f = self_compose(spec, n, config.budget)?;
    let (dpa, construction) = ltl_to_dpa(&f, &config.limits)?;
    let alphabet = spec.alphabet();
    let vocab = dpa.vocab();
    let present = |p: &String, i: u32| {
        let a = Atom::copy(p.as_str(), i);
        vocab.index_of(&a).map(|_| a)
    };
    let inputs: Vec<Atom> = (1..=n).flat_map(|i| alphabet.inputs().iter().filter_map(move |p| present(p, i))).collect();
    // `end` stays false while traces are live.
    let outputs: Vec<Atom> = (1..=n)
        .flat_map(|i| alphabet.outputs().iter().filter(|p| *p != END).filter_map(move |p| present(p, i)))
        .collect();
    let game = dpa_to_scheduled_game(&dpa, &inputs, &outputs, &Schedule::default())?;
    let solution = match construction {
        Construction::Safety => solve_safety(&game)?,
        Construction::Determinised => solve_parity(&game),
    };
    let base = alphabet.vocab();
    let locate = |a: &Atom| {
        let TraceRef::Copy(i) = a.trace else { unreachable!("game atoms are indexed") };
        let bit = base.index_of(&Atom::plain(a.prop.as_str())).expect("declared proposition");
        (i as usize - 1, 1 << bit)
    };
    let masks = (alphabet.input_mask(), alphabet.output_mask() & !alphabet.end_mask());
    SolvedGame::new(game, solution, n as usize, masks, locate)
}

/// Builds the game and opens a monitoring session at its initial state.
pub fn initialize(spec: &HyperSpec, n: u32, config: &EnforceConfig) -> Result<EnforcerSession, EnforceError> {
    let solved = build_parallel_game(spec, n, config)?;
    Ok(EnforcerSession::new(Arc::new(solved), config.hand_back))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunResult {
    /// The emitted traces, one per copy; events are letters over the base alphabet.
    pub traces: Vec<FiniteTrace>,
    /// Per step, whether the enforcer chose the outputs.
    pub enforced: Vec<bool>,
    pub stats: SessionStats,
}

/// Drives a session over a whole stream.
pub fn run_stream<'a, I>(session: &mut EnforcerSession, steps: I) -> Result<RunResult, EnforceError>
where
    I: IntoIterator<Item = &'a Step>,
{
    let start = Instant::now();
    let n = session.solved().slots();
    let mut traces = vec![FiniteTrace::default(); n];
    let mut enforced = Vec::new();
    for step in steps {
        let (outputs, by_enforcer) = session.advance(&step.outputs, &step.inputs)?;
        for (k, t) in traces.iter_mut().enumerate() {
            t.events.push(outputs[k] | step.inputs[k]);
        }
        enforced.push(by_enforcer);
    }
    let stats = SessionStats { steps: enforced.len(), intervention: session.intervention(), elapsed: start.elapsed() };
    Ok(RunResult { traces, enforced, stats })
}
