use std::collections::HashMap;
use std::sync::{Arc, Mutex};
use std::time::{Duration, Instant};

use super::stream::Step;
use super::{EnforceConfig, EnforceError, EnforcerSession, SessionStats, SolvedGame};
use crate::automata::{ltl_to_dpa, Construction, Dpa};
use crate::compose::{encode_finished_session, new_conjuncts, self_compose, CompositionError, FiniteTrace};
use crate::games::{
    dpa_to_scheduled_game, game_product, restrict_to_winning_region, solve_parity, solve_safety, Arena, GameError,
    ParityGame, Player, Schedule,
};
use crate::logic::{classify_syntactic_safety, Atom, Formula, HyperSpec, Letter, Vocab, END};

type AutomataCache = Arc<Mutex<HashMap<usize, Arc<(Dpa, Construction)>>>>;

/// Enforcement state between sessions: the finished traces and, on the
/// safety fast path, the game of the last session.
#[derive(Debug, Clone)]
pub struct SequentialState {
    spec: HyperSpec,
    config: EnforceConfig,
    history: Vec<FiniteTrace>,
    fast: bool,
    recycled: Option<Arc<SolvedGame>>,
    /// Automata by session index. They do not depend on the history, so
    /// clones of a state share them.
    automata: AutomataCache,
}

impl SequentialState {
    pub fn new(spec: HyperSpec, config: EnforceConfig) -> Result<Self, EnforceError> {
        if !spec.is_universal() {
            return Err(CompositionError::NotUniversal.into());
        }
        let fast = config.fast_path && classify_syntactic_safety(spec.body());
        Ok(SequentialState { spec, config, history: Vec::new(), fast, recycled: None, automata: Arc::default() })
    }

    pub fn spec(&self) -> &HyperSpec {
        &self.spec
    }

    /// 1-based index of the next session.
    pub fn session_index(&self) -> usize {
        self.history.len() + 1
    }

    pub fn history(&self) -> &[FiniteTrace] {
        &self.history
    }

    /// Whether sessions are built incrementally from the previous game.
    pub fn uses_fast_path(&self) -> bool {
        self.fast
    }

    /// Conjunction of the finished sessions, each pinned to its copy index.
    pub fn traces_formula(&self) -> Formula {
        let alphabet = self.spec.alphabet();
        Formula::conjunction(
            self.history.iter().enumerate().map(|(k, t)| encode_finished_session(t, k as u32 + 1, alphabet)),
        )
    }

    /// Values of the finished copies at every step, over `vocab`.
    fn schedule(&self, vocab: &Vocab) -> Schedule {
        let alphabet = self.spec.alphabet();
        let place = |copy: usize, letter: Letter| -> Letter {
            alphabet
                .props()
                .enumerate()
                .filter(|(b, _)| letter >> b & 1 == 1)
                .filter_map(|(_, p)| vocab.index_of(&Atom::copy(p, copy as u32)))
                .fold(0, |acc, b| acc | 1 << b)
        };
        let end = alphabet.end_mask();
        let at = |t: usize| -> Letter {
            self.history.iter().enumerate().fold(0, |acc, (k, tr)| acc | place(k + 1, tr.events.get(t).copied().unwrap_or(end)))
        };
        let horizon = self.history.iter().map(FiniteTrace::len).max().unwrap_or(0);
        Schedule { steps: (0..horizon).map(at).collect(), tail: at(horizon) }
    }

    /// The live copy's atoms that the automaton reads; `end` stays false.
    fn live_atoms(&self, vocab: &Vocab) -> (Vec<Atom>, Vec<Atom>) {
        let n = self.session_index() as u32;
        let alphabet = self.spec.alphabet();
        let pick = |names: &[String]| -> Vec<Atom> {
            names
                .iter()
                .filter(|p| *p != END)
                .map(|p| Atom::copy(p.as_str(), n))
                .filter(|a| vocab.index_of(a).is_some())
                .collect()
        };
        (pick(alphabet.inputs()), pick(alphabet.outputs()))
    }

    /// The automaton of the next session: for its new conjuncts on the fast
    /// path, for the whole composition otherwise.
    fn automaton(&self) -> Result<Arc<(Dpa, Construction)>, EnforceError> {
        let n = self.session_index();
        if let Some(a) = self.automata.lock().expect("automata cache").get(&n) {
            return Ok(Arc::clone(a));
        }
        let f: Formula = if self.fast {
            new_conjuncts(&self.spec, n as u32, self.config.budget)?
        } else {
            self_compose(&self.spec, n as u32, self.config.budget)?
        };
        let a = Arc::new(ltl_to_dpa(&f, &self.config.limits)?);
        self.automata.lock().expect("automata cache").insert(n, Arc::clone(&a));
        Ok(a)
    }

    fn scheduled_game(&self) -> Result<(ParityGame, Construction), EnforceError> {
        let a = self.automaton()?;
        let (dpa, construction) = (&a.0, a.1);
        let (inputs, outputs) = self.live_atoms(dpa.vocab());
        let game = dpa_to_scheduled_game(dpa, &inputs, &outputs, &self.schedule(dpa.vocab()))?;
        Ok((game, construction))
    }

    /// Builds and solves the game of the next session. Only the live copy
    /// has moves; finished copies replay their traces and then `end`.
    pub fn start_session(&self) -> Result<EnforcerSession, EnforceError> {
        let n = self.session_index();
        let unrealizable = |e: EnforceError| match e {
            EnforceError::Unrealizable | EnforceError::Game(GameError::Unrealizable) if n > 1 => {
                EnforceError::NextSessionUnrealizable { session: n }
            }
            EnforceError::Game(GameError::Unrealizable) => EnforceError::Unrealizable,
            e => e,
        };
        let (game, solution) = if self.fast {
            let (diff, _) = self.scheduled_game()?;
            let game = match &self.recycled {
                None => diff,
                Some(prev) => {
                    let past = replay(prev, self.history.last().expect("closed session"), &diff);
                    let kept = restrict_to_winning_region(&past, &solve_safety(&past)?).map_err(|e| unrealizable(e.into()))?;
                    game_product(&diff, &kept)?
                }
            };
            let solution = solve_safety(&game)?;
            (game, solution)
        } else {
            let (game, construction) = self.scheduled_game()?;
            let solution = match construction {
                Construction::Safety => solve_safety(&game)?,
                Construction::Determinised => solve_parity(&game),
            };
            (game, solution)
        };
        let alphabet = self.spec.alphabet();
        let base = alphabet.vocab();
        let locate = |a: &Atom| (0, 1 << base.index_of(&Atom::plain(a.prop.as_str())).expect("declared proposition"));
        let masks = (alphabet.input_mask(), alphabet.output_mask() & !alphabet.end_mask());
        let solved = SolvedGame::new(game, solution, 1, masks, locate).map_err(unrealizable)?;
        Ok(EnforcerSession::new(Arc::new(solved), self.config.hand_back))
    }

    /// Appends the emitted trace to the history. Closed sessions never change.
    pub fn close_session(&mut self, session: &EnforcerSession, emitted: FiniteTrace) {
        if self.fast {
            self.recycled = Some(Arc::clone(session.solved()));
        }
        self.history.push(emitted);
    }
}

/// The previous session's game along its now fixed trace, followed by the
/// end padding: a single path that reaches colour 1 exactly when the
/// finished traces violate the specification. It has the same actions as
/// `like` and ignores them.
fn replay(prev: &SolvedGame, trace: &FiniteTrace, like: &ParityGame) -> ParityGame {
    let g = prev.game();
    let mut index: HashMap<(u32, usize), usize> = HashMap::new();
    let mut path: Vec<(u32, u32)> = Vec::new();
    let mut v = g.initial();
    let mut t = 0;
    let back = loop {
        let key = (v, t.min(trace.len()));
        if let Some(&j) = index.get(&key) {
            break j;
        }
        index.insert(key, path.len());
        let letter = trace.events.get(t).copied().unwrap_or(0);
        let w = g.step(v, prev.output_action(&[letter]));
        path.push((v, w));
        v = g.step(w, prev.input_action(&[letter]));
        t += 1;
    };
    let (outs, ins) = (1usize << like.outputs().len(), 1usize << like.inputs().len());
    let m = path.len() as u32;
    let mut owner = Vec::new();
    let mut color = Vec::new();
    let mut succ = Vec::new();
    let mut label = Vec::new();
    for (j, &(v, w)) in path.iter().enumerate() {
        let j = j as u32;
        let next = if j + 1 == m { 2 * back as u32 } else { 2 * j + 2 };
        owner.extend([Player::P0, Player::P1]);
        color.extend([g.arena().color(v), g.arena().color(w)]);
        succ.extend([vec![2 * j + 1; outs], vec![next; ins]]);
        label.extend([format!("h{j}"), format!("h{j}'")]);
    }
    let arena = Arena::new(owner, color, succ, label);
    ParityGame::new(like.inputs().to_vec(), like.outputs().to_vec(), arena, 0).expect("replay path alternates")
}

/// How one session ended.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SessionOutcome {
    /// System prefix followed by the enforced suffix.
    pub trace: FiniteTrace,
    /// Step at which the enforcer took over, if it did.
    pub intervention: Option<usize>,
    pub init: Duration,
    pub stats: SessionStats,
}

impl SessionOutcome {
    pub fn is_ok(&self) -> bool {
        self.intervention.is_none()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SequentialRun {
    pub outcomes: Vec<SessionOutcome>,
    /// Why the run stopped before the last session, if it did.
    pub stopped: Option<EnforceError>,
}

/// Enforces the sessions in order. A session whose game is already lost
/// before it starts ends the run.
pub fn run_sequential(spec: &HyperSpec, sessions: &[Vec<Step>], config: &EnforceConfig) -> Result<SequentialRun, EnforceError> {
    let mut state = SequentialState::new(spec.clone(), *config)?;
    let mut outcomes = Vec::new();
    for steps in sessions {
        let started = Instant::now();
        let mut session = match state.start_session() {
            Ok(s) => s,
            Err(e @ (EnforceError::NextSessionUnrealizable { .. } | EnforceError::Unrealizable)) => {
                return Ok(SequentialRun { outcomes, stopped: Some(e) });
            }
            Err(e) => return Err(e),
        };
        let init = started.elapsed();
        let running = Instant::now();
        let mut trace = FiniteTrace::default();
        for step in steps {
            let (outputs, _) = session.advance(&step.outputs, &step.inputs)?;
            trace.events.push(outputs[0] | step.inputs[0]);
        }
        let stats = SessionStats { steps: steps.len(), intervention: session.intervention(), elapsed: running.elapsed() };
        state.close_session(&session, trace.clone());
        outcomes.push(SessionOutcome { trace, intervention: session.intervention(), init, stats });
    }
    Ok(SequentialRun { outcomes, stopped: None })
}
