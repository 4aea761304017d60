use std::collections::HashMap;

use super::arena::Arena;
use super::game::ParityGame;
use super::{GameError, Player, MAX_ACTION_ATOMS};
use crate::automata::Dpa;
use crate::logic::{Atom, Letter};

/// Values of the automaton atoms that neither player controls, per step.
/// `steps[t]` applies at step `t` and `tail` from step `steps.len()` on.
/// Letters are over the automaton's vocabulary.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Schedule {
    pub steps: Vec<Letter>,
    pub tail: Letter,
}

impl Schedule {
    pub fn at(&self, t: usize) -> Letter {
        self.steps.get(t).copied().unwrap_or(self.tail)
    }
}

/// Splits every automaton step into a P0 output move followed by a P1 input
/// move. Both halves carry the colour of the automaton state they belong to.
pub fn dpa_to_game(d: &Dpa, inputs: &[Atom], outputs: &[Atom]) -> Result<ParityGame, GameError> {
    if let Some(a) = d.vocab().atoms().iter().find(|a| !inputs.contains(a) && !outputs.contains(a)) {
        return Err(GameError::UncoveredAtom(a.to_string()));
    }
    dpa_to_scheduled_game(d, inputs, outputs, &Schedule::default())
}

/// As [`dpa_to_game`], with every atom outside `inputs` and `outputs` read
/// from `schedule`. Game states also track the step, up to the end of the
/// schedule.
pub fn dpa_to_scheduled_game(
    d: &Dpa,
    inputs: &[Atom],
    outputs: &[Atom],
    schedule: &Schedule,
) -> Result<ParityGame, GameError> {
    for side in [inputs, outputs] {
        if side.len() > MAX_ACTION_ATOMS {
            return Err(GameError::TooManyActions { atoms: side.len(), limit: MAX_ACTION_ATOMS });
        }
    }
    if let Some(a) = inputs.iter().find(|a| outputs.contains(a)) {
        return Err(GameError::OverlappingAtom(a.to_string()));
    }
    let vocab = d.vocab();
    let controlled: Letter = inputs.iter().chain(outputs).filter_map(|a| vocab.index_of(a)).fold(0, |m, b| m | 1 << b);
    let fixed = !controlled;
    let actions = |side: &[Atom]| -> Vec<Letter> {
        let bits: Vec<Option<usize>> = side.iter().map(|a| vocab.index_of(a)).collect();
        (0..1u64 << side.len())
            .map(|m| bits.iter().enumerate().filter(|(j, _)| m >> j & 1 == 1).filter_map(|(_, b)| *b).fold(0, |l, b| l | 1 << b))
            .collect()
    };
    let out_letters = actions(outputs);
    let in_letters = actions(inputs);
    let horizon = schedule.steps.len();
    let timed = horizon > 0;

    #[derive(Clone, Copy, PartialEq, Eq, Hash)]
    enum Key {
        Sys(u32, usize),
        Env(u32, usize, u32),
    }
    let mut index: HashMap<Key, u32> = HashMap::new();
    let mut keys: Vec<Key> = Vec::new();
    let mut intern = |k: Key, keys: &mut Vec<Key>| -> u32 {
        *index.entry(k).or_insert_with(|| {
            keys.push(k);
            keys.len() as u32 - 1
        })
    };
    let initial = intern(Key::Sys(d.initial(), 0), &mut keys);
    let mut succ: Vec<Vec<u32>> = Vec::new();
    let mut i = 0;
    while i < keys.len() {
        let row = match keys[i] {
            Key::Sys(q, t) => (0..out_letters.len() as u32).map(|o| intern(Key::Env(q, t, o), &mut keys)).collect(),
            Key::Env(q, t, o) => in_letters
                .iter()
                .map(|&l| {
                    let letter = (schedule.at(t) & fixed) | out_letters[o as usize] | l;
                    intern(Key::Sys(d.succ(q, letter), (t + 1).min(horizon)), &mut keys)
                })
                .collect(),
        };
        succ.push(row);
        i += 1;
    }

    let state = |q: u32, t: usize| if timed { format!("q{q}@{t}") } else { format!("q{q}") };
    let set = |o: u32| {
        let names: Vec<String> =
            outputs.iter().enumerate().filter(|(j, _)| o >> j & 1 == 1).map(|(_, a)| a.to_string()).collect();
        format!("{{{}}}", names.join(", "))
    };
    let mut owner = Vec::with_capacity(keys.len());
    let mut color = Vec::with_capacity(keys.len());
    let mut label = Vec::with_capacity(keys.len());
    for k in &keys {
        match *k {
            Key::Sys(q, t) => {
                owner.push(Player::P0);
                color.push(d.color(q));
                label.push(state(q, t));
            }
            Key::Env(q, t, o) => {
                owner.push(Player::P1);
                color.push(d.color(q));
                label.push(format!("{}, {}", state(q, t), set(o)));
            }
        }
    }
    ParityGame::new(inputs.to_vec(), outputs.to_vec(), Arena::new(owner, color, succ, label), initial)
}
