//! Büchi to parity determinisation with compact Safra trees.
//!
//! Tree nodes carry a name in `1..=N` (`N` = number of Büchi states) ordered
//! by age, so a parent is always older than its children and older siblings
//! come first. After each step the surviving names are compacted to `1..=m`
//! preserving order. A step emits a min-parity priority: `2f` when the
//! oldest marked node is named `f`, `2e − 1` when the oldest removed node is
//! named `e`, whichever is smaller, and `2N + 1` when nothing happened.

use std::collections::HashMap;

use super::dpa::Dpa;
use super::nba::Nba;
use super::{AutomataError, Limits, MAX_EXPLICIT_ATOMS};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct Node {
    name: u32,
    /// Sorted Büchi states.
    label: Vec<u32>,
    children: Vec<Node>,
}

struct Stepper<'a> {
    nba: &'a Nba,
    /// `succ[q][letter]`: sorted successor states.
    succ: Vec<Vec<Vec<u32>>>,
    accepting: Vec<bool>,
}

#[derive(Default)]
struct Events {
    removed: Option<u32>,
    marked: Option<u32>,
}

impl Events {
    fn remove(&mut self, name: u32, old: u32) {
        if name <= old {
            self.removed = Some(self.removed.map_or(name, |e| e.min(name)));
        }
    }
}

fn remove_all(node: &Node, old: u32, ev: &mut Events) {
    ev.remove(node.name, old);
    for c in &node.children {
        remove_all(c, old, ev);
    }
}

fn union_sorted(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut v: Vec<u32> = a.iter().chain(b).copied().collect();
    v.sort_unstable();
    v.dedup();
    v
}

fn max_name(node: &Node) -> u32 {
    node.children.iter().map(max_name).fold(node.name, u32::max)
}

impl<'a> Stepper<'a> {
    fn new(nba: &'a Nba) -> Self {
        let letters = nba.vocab().letter_count();
        let succ = (0..nba.num_states())
            .map(|q| {
                (0..letters)
                    .map(|l| {
                        let mut s: Vec<u32> = nba.successors(q, l).map(|t| t as u32).collect();
                        s.sort_unstable();
                        s.dedup();
                        s
                    })
                    .collect()
            })
            .collect();
        let accepting = (0..nba.num_states()).map(|q| nba.is_accepting(q)).collect();
        Stepper { nba, succ, accepting }
    }

    fn spawn(&self, node: &mut Node, next_name: &mut u32) {
        for c in &mut node.children {
            self.spawn(c, next_name);
        }
        let acc: Vec<u32> = node.label.iter().copied().filter(|&q| self.accepting[q as usize]).collect();
        if !acc.is_empty() {
            node.children.push(Node { name: *next_name, label: acc, children: Vec::new() });
            *next_name += 1;
        }
    }

    fn update(&self, node: &mut Node, letter: u64) {
        let mut label = Vec::new();
        for &q in &node.label {
            label.extend_from_slice(&self.succ[q as usize][letter as usize]);
        }
        label.sort_unstable();
        label.dedup();
        node.label = label;
        for c in &mut node.children {
            self.update(c, letter);
        }
    }

    /// One deterministic step; returns the successor tree and the priority.
    fn step(&self, tree: &Option<Node>, letter: u64) -> (Option<Node>, u32) {
        let n = self.nba.num_states() as u32;
        let Some(root) = tree else {
            return (None, 2 * n + 1);
        };
        let old = max_name(root);
        let mut root = root.clone();
        let mut next_name = old + 1;
        self.spawn(&mut root, &mut next_name);
        self.update(&mut root, letter);
        let mut claimed = Vec::new();
        horizontal(&mut root, &mut claimed);
        let mut ev = Events::default();
        let tree = if root.label.is_empty() {
            remove_all(&root, old, &mut ev);
            None
        } else {
            prune_empty(&mut root, old, &mut ev);
            vertical(&mut root, old, &mut ev);
            compact(&mut root);
            Some(root)
        };
        let f = ev.marked.unwrap_or(n + 1);
        let e = ev.removed.unwrap_or(n + 1);
        (tree, (2 * f).min(2 * e - 1).min(2 * n + 1))
    }
}

// Removes from each node the states owned by older siblings of it or of its
// ancestors.
fn horizontal(node: &mut Node, claimed: &mut Vec<u32>) {
    node.label.retain(|q| claimed.binary_search(q).is_err());
    let before = claimed.clone();
    for c in &mut node.children {
        horizontal(c, claimed);
    }
    *claimed = union_sorted(&before, &node.label);
}

fn prune_empty(node: &mut Node, old: u32, ev: &mut Events) {
    node.children.retain(|c| {
        if c.label.is_empty() {
            remove_all(c, old, ev);
            false
        } else {
            true
        }
    });
    for c in &mut node.children {
        prune_empty(c, old, ev);
    }
}

fn vertical(node: &mut Node, old: u32, ev: &mut Events) {
    if !node.children.is_empty() {
        let covered = node.children.iter().fold(Vec::new(), |acc, c| union_sorted(&acc, &c.label));
        if covered == node.label {
            for c in &node.children {
                remove_all(c, old, ev);
            }
            node.children.clear();
            ev.marked = Some(ev.marked.map_or(node.name, |f| f.min(node.name)));
            return;
        }
    }
    for c in &mut node.children {
        vertical(c, old, ev);
    }
}

fn collect_names(node: &Node, out: &mut Vec<u32>) {
    out.push(node.name);
    for c in &node.children {
        collect_names(c, out);
    }
}

fn rename(node: &mut Node, names: &[u32]) {
    node.name = names.binary_search(&node.name).expect("known name") as u32 + 1;
    for c in &mut node.children {
        rename(c, names);
    }
}

fn compact(root: &mut Node) {
    let mut names = Vec::new();
    collect_names(root, &mut names);
    names.sort_unstable();
    rename(root, &names);
}

/// Language-equivalent deterministic parity automaton (max-even colours).
/// The empty tree is a rejecting sink.
pub fn nba_to_dpa(nba: &Nba, limits: &Limits) -> Result<Dpa, AutomataError> {
    let atoms = nba.vocab().len();
    if atoms > MAX_EXPLICIT_ATOMS {
        return Err(AutomataError::AlphabetTooLarge { atoms, limit: MAX_EXPLICIT_ATOMS });
    }
    let stepper = Stepper::new(nba);
    let n = nba.num_states() as u32;
    let to_color = |p: u32| 2 * n + 2 - p;
    let letters = nba.vocab().letter_count();

    let initial_tree = Some(Node { name: 1, label: vec![nba.initial() as u32], children: Vec::new() });
    let mut index: HashMap<(Option<Node>, u32), u32> = HashMap::new();
    let mut states: Vec<(Option<Node>, u32)> = Vec::new();
    let mut steps: HashMap<Option<Node>, Vec<(Option<Node>, u32)>> = HashMap::new();
    let start = (initial_tree, to_color(2 * n + 1));
    index.insert(start.clone(), 0);
    states.push(start);
    let mut table = Vec::new();
    let mut i = 0;
    while i < states.len() {
        let tree = states[i].0.clone();
        let row = steps
            .entry(tree.clone())
            .or_insert_with(|| (0..letters).map(|l| stepper.step(&tree, l)).collect())
            .clone();
        for (t, p) in row {
            let key = (t, to_color(p));
            let id = match index.get(&key) {
                Some(&id) => id,
                None => {
                    if states.len() >= limits.max_states {
                        return Err(AutomataError::TooManyStates { limit: limits.max_states });
                    }
                    let id = states.len() as u32;
                    index.insert(key.clone(), id);
                    states.push(key);
                    id
                }
            };
            table.push(id);
        }
        i += 1;
    }
    let colors = states.iter().map(|(_, c)| *c).collect();
    Dpa::new(nba.vocab().clone(), 0, colors, table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::guard::Cube;
    use crate::logic::{Atom, Vocab};

    fn run_lasso(d: &Dpa, stem: &[u64], cycle: &[u64]) -> bool {
        let mut q = d.initial();
        for &l in stem {
            q = d.succ(q, l);
        }
        // Iterate the cycle until the state at its start repeats.
        let mut seen = HashMap::new();
        let mut starts = Vec::new();
        loop {
            if let Some(&k) = seen.get(&q) {
                let mut max = 0;
                for &s in &starts[k..] {
                    let mut p = s;
                    for &l in cycle {
                        max = max.max(d.color(p));
                        p = d.succ(p, l);
                    }
                }
                return max % 2 == 0;
            }
            seen.insert(q, starts.len());
            starts.push(q);
            for &l in cycle {
                q = d.succ(q, l);
            }
        }
    }

    #[test]
    fn eventually_always() {
        // q0 --t--> q0, q0 --a--> q1, q1 --a--> q1 (accepting).
        let vocab = Vocab::new([Atom::plain("a")]);
        let a = Cube { pos: 1, neg: 0 };
        let nba = Nba::new(vocab, 0, vec![false, true], vec![vec![(Cube::TRUE, 0), (a, 1)], vec![(a, 1)]]);
        let d = nba_to_dpa(&nba, &Limits::default()).unwrap();
        assert!(run_lasso(&d, &[0], &[1]));
        assert!(!run_lasso(&d, &[1], &[1, 0]));
        assert!(!run_lasso(&d, &[], &[0]));
        assert!(run_lasso(&d, &[1, 0, 0], &[1, 1]));
    }

    #[test]
    fn empty_language_is_rejecting_sink() {
        let vocab = Vocab::new([Atom::plain("a")]);
        let nba = Nba::new(vocab, 0, vec![true], vec![vec![]]);
        let d = nba_to_dpa(&nba, &Limits::default()).unwrap();
        assert!(!run_lasso(&d, &[], &[0]));
        assert!(!run_lasso(&d, &[], &[1]));
    }
}
