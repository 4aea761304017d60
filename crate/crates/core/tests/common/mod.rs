//! Independent reference implementations used as test oracles.
#![allow(dead_code)]

use std::collections::{HashMap, HashSet};

use hyperfence::automata::{Dpa, Nba};
use hyperfence::logic::{Atom, Formula, LassoWord, Letter, Vocab};
use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;

pub fn rng(seed: u64) -> SplitMix64 {
    SplitMix64::seed_from_u64(seed)
}

pub fn below(rng: &mut SplitMix64, n: u64) -> u64 {
    rng.next_u64() % n
}

/// Every word over `0..letters` of length exactly `len`.
pub fn words(letters: u64, len: usize) -> Vec<Vec<Letter>> {
    let mut out = vec![vec![]];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|w| {
                (0..letters).map(move |l| {
                    let mut v = w.clone();
                    v.push(l);
                    v
                })
            })
            .collect();
    }
    out
}

/// All lassos with stem length `<= max_stem` and cycle length in `1..=max_cycle`.
pub fn lassos(letters: u64, max_stem: usize, max_cycle: usize) -> Vec<LassoWord> {
    let mut out = Vec::new();
    for s in 0..=max_stem {
        for stem in words(letters, s) {
            for c in 1..=max_cycle {
                for cycle in words(letters, c) {
                    out.push(LassoWord::new(stem.clone(), cycle));
                }
            }
        }
    }
    out
}

/// Position reached after `j` steps, folded back into the lasso.
fn canon(w: &LassoWord, j: usize) -> usize {
    if j < w.stem.len() {
        j
    } else {
        w.stem.len() + (j - w.stem.len()) % w.cycle.len()
    }
}

/// Definitional LTL semantics by direct quantification over the finitely many
/// distinct suffixes.
pub fn brute_ltl(f: &Formula, w: &LassoWord, vocab: &Vocab, i: usize) -> bool {
    let horizon = w.stem.len() + w.cycle.len();
    let ev = |g: &Formula, k: usize| brute_ltl(g, w, vocab, canon(w, k));
    match f {
        Formula::True => true,
        Formula::False => false,
        Formula::Atom(a) => vocab.index_of(a).is_some_and(|b| w.at(i) >> b & 1 == 1),
        Formula::Not(a) => !ev(a, i),
        Formula::And(a, b) => ev(a, i) && ev(b, i),
        Formula::Or(a, b) => ev(a, i) || ev(b, i),
        Formula::Implies(a, b) => !ev(a, i) || ev(b, i),
        Formula::Iff(a, b) => ev(a, i) == ev(b, i),
        Formula::Next(a) => ev(a, i + 1),
        Formula::Until(a, b) => (i..i + horizon).any(|j| ev(b, j) && (i..j).all(|k| ev(a, k))),
        Formula::WeakUntil(a, b) => {
            (i..i + horizon).all(|k| ev(a, k)) || (i..i + horizon).any(|j| ev(b, j) && (i..j).all(|k| ev(a, k)))
        }
        Formula::Release(a, b) => {
            (i..i + horizon).all(|k| ev(b, k)) || (i..i + horizon).any(|j| ev(a, j) && (i..=j).all(|k| ev(b, k)))
        }
        Formula::Globally(a) => (i..i + horizon).all(|k| ev(a, k)),
        Formula::Finally(a) => (i..i + horizon).any(|k| ev(a, k)),
    }
}

/// Runs the DPA on the lasso and inspects the colours of the eventual cycle.
pub fn dpa_accepts(d: &Dpa, w: &LassoWord, vocab: &Vocab) -> bool {
    let tr = |l: Letter| translate(l, vocab, d.vocab());
    let mut q = d.initial();
    for &l in &w.stem {
        q = d.succ(q, tr(l));
    }
    let mut seen = HashMap::new();
    let mut starts = Vec::new();
    loop {
        if let Some(&k) = seen.get(&q) {
            let mut max = 0;
            for &s in &starts[k..] {
                let mut p = s;
                for &l in &w.cycle {
                    max = max.max(d.color(p));
                    p = d.succ(p, tr(l));
                }
            }
            return max % 2 == 0;
        }
        seen.insert(q, starts.len());
        starts.push(q);
        for &l in &w.cycle {
            q = d.succ(q, tr(l));
        }
    }
}

/// Büchi membership: some accepting product node is reachable and lies on a cycle.
pub fn nba_accepts(a: &Nba, w: &LassoWord, vocab: &Vocab) -> bool {
    let node_succ = |(q, i): (usize, usize)| -> Vec<(usize, usize)> {
        let l = translate(w.at(i), vocab, a.vocab());
        a.successors(q, l).map(|t| (t, w.succ(i))).collect()
    };
    let reach = |from: Vec<(usize, usize)>| {
        let mut seen: HashSet<(usize, usize)> = HashSet::new();
        let mut stack = from;
        while let Some(n) = stack.pop() {
            for m in node_succ(n) {
                if seen.insert(m) {
                    stack.push(m);
                }
            }
        }
        seen
    };
    let start = (a.initial(), 0);
    let mut reachable = reach(vec![start]);
    reachable.insert(start);
    reachable
        .iter()
        .filter(|&&(q, _)| a.is_accepting(q))
        .any(|&n| reach(vec![n]).contains(&n))
}

/// Re-encodes a letter over `from` into the bit layout of `to`.
pub fn translate(l: Letter, from: &Vocab, to: &Vocab) -> Letter {
    to.atoms()
        .iter()
        .enumerate()
        .filter(|(_, a)| from.index_of(a).is_some_and(|b| l >> b & 1 == 1))
        .fold(0, |acc, (i, _)| acc | (1 << i))
}

/// Random formula over the given atoms using every operator.
pub fn random_formula(rng: &mut SplitMix64, atoms: &[Atom], depth: usize) -> Formula {
    if depth == 0 || below(rng, 5) == 0 {
        return match below(rng, 8) {
            0 => Formula::True,
            1 => Formula::False,
            _ => Formula::Atom(atoms[below(rng, atoms.len() as u64) as usize].clone()),
        };
    }
    let sub = |rng: &mut SplitMix64| random_formula(rng, atoms, depth - 1);
    match below(rng, 13) {
        0 => Formula::not(sub(rng)),
        1 => Formula::and(sub(rng), sub(rng)),
        2 => Formula::or(sub(rng), sub(rng)),
        3 => Formula::implies(sub(rng), sub(rng)),
        4 => Formula::iff(sub(rng), sub(rng)),
        5 => Formula::next(sub(rng)),
        6 => Formula::until(sub(rng), sub(rng)),
        7 => Formula::weak_until(sub(rng), sub(rng)),
        8 => Formula::release(sub(rng), sub(rng)),
        9 => Formula::globally(sub(rng)),
        10 => Formula::finally(sub(rng)),
        11 => Formula::and(sub(rng), Formula::globally(sub(rng))),
        _ => Formula::or(Formula::finally(sub(rng)), sub(rng)),
    }
}

/// Direct two-trace observational determinism check on finite prefixes:
/// violated iff at some step the outputs differ while all inputs so far,
/// the current step included, agreed.
pub fn od_violated(inputs: (&[Letter], &[Letter]), outputs: (&[Letter], &[Letter])) -> bool {
    let len = inputs.0.len().min(inputs.1.len());
    for t in 0..len {
        if inputs.0[t] != inputs.1[t] {
            return false;
        }
        if outputs.0[t] != outputs.1[t] {
            return true;
        }
    }
    false
}

/// Random alternating game: up to 6 nodes per player, one or two actions
/// per side, colours up to `max_color`.
pub fn random_game(rng: &mut SplitMix64, max_color: u32) -> hyperfence::games::ParityGame {
    use hyperfence::games::{Arena, ParityGame, Player};
    let n0 = 1 + below(rng, 6) as usize;
    let n1 = 1 + below(rng, 6) as usize;
    let outs: Vec<Atom> = (0..below(rng, 2)).map(|_| Atom::plain("o")).collect();
    let ins: Vec<Atom> = (0..below(rng, 2)).map(|_| Atom::plain("i")).collect();
    let mut owner = Vec::new();
    let mut color = Vec::new();
    let mut succ = Vec::new();
    for v in 0..n0 + n1 {
        let p0 = v < n0;
        owner.push(if p0 { Player::P0 } else { Player::P1 });
        color.push(below(rng, max_color as u64 + 1) as u32);
        let moves = if p0 { 1 << outs.len() } else { 1 << ins.len() };
        let row: Vec<u32> = (0..moves)
            .map(|_| if p0 { n0 + below(rng, n1 as u64) as usize } else { below(rng, n0 as u64) as usize } as u32)
            .collect();
        succ.push(row);
    }
    let label = (0..n0 + n1).map(|v| v.to_string()).collect();
    ParityGame::new(ins, outs, Arena::new(owner, color, succ, label), 0).unwrap()
}

/// Winners by enumerating every pair of positional strategies. Sound by
/// memoryless determinacy: P0 wins `v` iff some positional strategy of P0
/// beats every positional strategy of P1 from `v`.
pub fn brute_force_winners(a: &hyperfence::games::Arena) -> Vec<hyperfence::games::Player> {
    use hyperfence::games::Player;
    let n = a.len();
    let nodes_of = |p: Player| -> Vec<usize> { (0..n).filter(|&v| a.owner(v as u32) == p).collect() };
    let (mine, theirs) = (nodes_of(Player::P0), nodes_of(Player::P1));
    let strategies = |nodes: &[usize]| -> Vec<Vec<usize>> {
        let mut all = vec![vec![0usize; n]];
        for &v in nodes {
            let k = a.succ(v as u32).len();
            all = all.into_iter().flat_map(|s| (0..k).map(move |m| { let mut t = s.clone(); t[v] = m; t })).collect();
        }
        all
    };
    let (s0, s1) = (strategies(&mine), strategies(&theirs));
    let play_won = |start: usize, x: &[usize], y: &[usize]| -> bool {
        let mut seen = vec![usize::MAX; n];
        let mut path = Vec::new();
        let mut v = start;
        while seen[v] == usize::MAX {
            seen[v] = path.len();
            path.push(v);
            let m = if a.owner(v as u32) == Player::P0 { x[v] } else { y[v] };
            v = a.succ(v as u32)[m] as usize;
        }
        path[seen[v]..].iter().map(|&u| a.color(u as u32)).max().unwrap() % 2 == 0
    };
    (0..n)
        .map(|v| {
            if s0.iter().any(|x| s1.iter().all(|y| play_won(v, x, y))) {
                Player::P0
            } else {
                Player::P1
            }
        })
        .collect()
}

/// Strategy closure and strategy winning: with P0 fixed to its strategy
/// inside its region, P1 cannot leave the region and every cycle P1 can
/// close has an even maximal colour.
pub fn strategy_is_winning(a: &hyperfence::games::Arena, s: &hyperfence::games::Solution) -> bool {
    use hyperfence::games::Player;
    let n = a.len();
    let win: Vec<bool> = (0..n).map(|v| s.wins(Player::P0, v as u32)).collect();
    let moves = |v: usize| -> Vec<usize> {
        if a.owner(v as u32) == Player::P0 {
            vec![a.succ(v as u32)[s.choice(v as u32).expect("winning P0 node has a choice") as usize] as usize]
        } else {
            a.succ(v as u32).iter().map(|&w| w as usize).collect()
        }
    };
    for v in (0..n).filter(|&v| win[v]) {
        if moves(v).iter().any(|&w| !win[w]) {
            return false;
        }
    }
    // An odd-max cycle through colour c exists iff some colour-c node reaches
    // itself using only nodes of colour <= c.
    for v in (0..n).filter(|&v| win[v] && a.color(v as u32) % 2 == 1) {
        let c = a.color(v as u32);
        let mut seen = vec![false; n];
        let mut stack = moves(v);
        while let Some(u) = stack.pop() {
            if a.color(u as u32) > c || seen[u] {
                continue;
            }
            if u == v {
                return false;
            }
            seen[u] = true;
            stack.extend(moves(u));
        }
    }
    true
}

/// Pairwise observational determinism over traces with letters `i` = bit 0
/// and `o` = bit 1, shorter traces padded with all-false letters.
pub fn od_holds(traces: &[Vec<Letter>]) -> bool {
    let len = traces.iter().map(Vec::len).max().unwrap_or(0);
    let bits = |t: &Vec<Letter>, mask: Letter| -> Vec<Letter> {
        (0..len).map(|j| t.get(j).map_or(0, |l| l & mask)).collect()
    };
    traces.iter().all(|a| {
        traces.iter().all(|b| !od_violated((&bits(a, 1), &bits(b, 1)), (&bits(a, 2), &bits(b, 2))))
    })
}
