use std::collections::HashMap;

use super::arena::{Arena, Solution};
use super::pgsolver::node_line;
use super::{GameError, Player, MAX_ACTION_ATOMS};
use crate::logic::Atom;

/// Alternating game where P0 moves by choosing a subset of `outputs` and P1
/// by choosing a subset of `inputs`. Actions are bitmasks in atom order and
/// index the successor lists, so P0 nodes have `2^|outputs|` moves and P1
/// nodes `2^|inputs|`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParityGame {
    inputs: Vec<Atom>,
    outputs: Vec<Atom>,
    arena: Arena,
    initial: u32,
}

impl ParityGame {
    pub fn new(inputs: Vec<Atom>, outputs: Vec<Atom>, arena: Arena, initial: u32) -> Result<Self, GameError> {
        for side in [&inputs, &outputs] {
            if side.len() > MAX_ACTION_ATOMS {
                return Err(GameError::TooManyActions { atoms: side.len(), limit: MAX_ACTION_ATOMS });
            }
        }
        if let Some(a) = inputs.iter().find(|a| outputs.contains(a)) {
            return Err(GameError::OverlappingAtom(a.to_string()));
        }
        if arena.owner(initial) != Player::P0 {
            return Err(GameError::NotAlternating(initial));
        }
        for v in 0..arena.len() as u32 {
            let owner = arena.owner(v);
            let expected = match owner {
                Player::P0 => 1usize << outputs.len(),
                Player::P1 => 1usize << inputs.len(),
            };
            if arena.succ(v).len() != expected {
                return Err(GameError::WrongMoveCount { state: v, found: arena.succ(v).len(), expected });
            }
            if arena.succ(v).iter().any(|&w| arena.owner(w) == owner) {
                return Err(GameError::NotAlternating(v));
            }
        }
        Ok(ParityGame { inputs, outputs, arena, initial })
    }

    pub fn inputs(&self) -> &[Atom] {
        &self.inputs
    }

    pub fn outputs(&self) -> &[Atom] {
        &self.outputs
    }

    pub fn arena(&self) -> &Arena {
        &self.arena
    }

    pub fn initial(&self) -> u32 {
        self.initial
    }

    pub fn len(&self) -> usize {
        self.arena.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arena.is_empty()
    }

    /// Target of `action` at `v`, for either owner.
    pub fn step(&self, v: u32, action: u32) -> u32 {
        self.arena.succ(v)[action as usize]
    }

    /// Colours in {0, 1} with every colour-1 state leading only to colour-1 states.
    pub fn is_safety(&self) -> bool {
        (0..self.len() as u32).all(|v| match self.arena.color(v) {
            0 => true,
            1 => self.arena.succ(v).iter().all(|&w| self.arena.color(w) == 1),
            _ => false,
        })
    }

    /// PGSolver text with P0 states numbered first.
    pub fn to_pgsolver(&self) -> String {
        let a = &self.arena;
        let mut order: Vec<u32> = (0..a.len() as u32).filter(|&v| a.owner(v) == Player::P0).collect();
        order.extend((0..a.len() as u32).filter(|&v| a.owner(v) == Player::P1));
        let mut id = vec![0u32; a.len()];
        for (i, &v) in order.iter().enumerate() {
            id[v as usize] = i as u32;
        }
        let mut out = format!("parity {};\n", a.len().saturating_sub(1));
        for &v in &order {
            let mut succ: Vec<u32> = Vec::new();
            for &w in a.succ(v) {
                if !succ.contains(&id[w as usize]) {
                    succ.push(id[w as usize]);
                }
            }
            out += &node_line(id[v as usize], a.color(v), a.owner(v), &succ, a.label(v));
        }
        out
    }
}

pub fn solve_parity(g: &ParityGame) -> Solution {
    g.arena.solve()
}

/// Attractor-based solution of a safety game.
pub fn solve_safety(g: &ParityGame) -> Result<Solution, GameError> {
    if !g.is_safety() {
        return Err(GameError::NotSafety);
    }
    Ok(g.arena.solve_safety())
}

/// The game restricted to P0's winning region. Moves leaving the region go
/// to a pair of fresh colour-1 sinks, one per player, that alternate forever.
pub fn restrict_to_winning_region(g: &ParityGame, s: &Solution) -> Result<ParityGame, GameError> {
    if !s.wins(Player::P0, g.initial) {
        return Err(GameError::Unrealizable);
    }
    let a = &g.arena;
    let kept: Vec<u32> = s.region(Player::P0);
    let mut id = vec![u32::MAX; a.len()];
    for (i, &v) in kept.iter().enumerate() {
        id[v as usize] = i as u32;
    }
    let sink = [kept.len() as u32, kept.len() as u32 + 1];
    let mut owner: Vec<Player> = kept.iter().map(|&v| a.owner(v)).collect();
    let mut color: Vec<u32> = kept.iter().map(|&v| a.color(v)).collect();
    let mut label: Vec<String> = kept.iter().map(|&v| a.label(v).to_string()).collect();
    let mut succ: Vec<Vec<u32>> = kept
        .iter()
        .map(|&v| {
            a.succ(v)
                .iter()
                .map(|&w| if id[w as usize] == u32::MAX { sink[a.owner(w).index()] } else { id[w as usize] })
                .collect()
        })
        .collect();
    owner.extend([Player::P0, Player::P1]);
    color.extend([1, 1]);
    label.extend(["sink".to_string(), "sink".to_string()]);
    succ.push(vec![sink[1]; 1 << g.outputs.len()]);
    succ.push(vec![sink[0]; 1 << g.inputs.len()]);
    ParityGame::new(g.inputs.clone(), g.outputs.clone(), Arena::new(owner, color, succ, label), id[g.initial as usize])
}

/// Synchronous product of two safety games over the same actions. A pair is
/// losing as soon as either side is; all losing pairs collapse into one sink
/// per player.
pub fn game_product(g1: &ParityGame, g2: &ParityGame) -> Result<ParityGame, GameError> {
    if g1.inputs != g2.inputs || g1.outputs != g2.outputs {
        return Err(GameError::AlphabetMismatch);
    }
    if !g1.is_safety() || !g2.is_safety() {
        return Err(GameError::NotSafety);
    }
    let (a1, a2) = (&g1.arena, &g2.arena);
    const SINK: u32 = u32::MAX;
    let key = |v1: u32, v2: u32| -> (u32, u32, Player) {
        let p = a1.owner(v1);
        if a1.color(v1) == 1 || a2.color(v2) == 1 {
            (SINK, SINK, p)
        } else {
            (v1, v2, p)
        }
    };
    let mut index: HashMap<(u32, u32, Player), u32> = HashMap::new();
    let mut nodes: Vec<(u32, u32, Player)> = Vec::new();
    let mut intern = |k: (u32, u32, Player), nodes: &mut Vec<(u32, u32, Player)>| -> u32 {
        *index.entry(k).or_insert_with(|| {
            nodes.push(k);
            nodes.len() as u32 - 1
        })
    };
    let initial = intern(key(g1.initial, g2.initial), &mut nodes);
    let mut succ: Vec<Vec<u32>> = Vec::new();
    let mut i = 0;
    while i < nodes.len() {
        let (v1, v2, p) = nodes[i];
        let moves = match p {
            Player::P0 => 1u32 << g1.outputs.len(),
            Player::P1 => 1u32 << g1.inputs.len(),
        };
        let row = (0..moves)
            .map(|m| {
                let k = if v1 == SINK { (SINK, SINK, p.opponent()) } else { key(g1.step(v1, m), g2.step(v2, m)) };
                intern(k, &mut nodes)
            })
            .collect();
        succ.push(row);
        i += 1;
    }
    let owner = nodes.iter().map(|n| n.2).collect();
    let color = nodes.iter().map(|n| u32::from(n.0 == SINK)).collect();
    let label = nodes
        .iter()
        .map(|&(v1, v2, _)| if v1 == SINK { "sink".to_string() } else { format!("({}, {})", a1.label(v1), a2.label(v2)) })
        .collect();
    ParityGame::new(g1.inputs.clone(), g1.outputs.clone(), Arena::new(owner, color, succ, label), initial)
}
