//! One-step tableau expansion of NNF obligation sets, shared by the Büchi
//! and safety constructions.

use std::collections::{BTreeSet, HashMap};

use super::guard::Cube;
use crate::logic::{Formula, Vocab};

pub(crate) type Id = u32;

/// Interned subformulas of an NNF formula.
pub(crate) struct Closure {
    formulas: Vec<Formula>,
    ids: HashMap<Formula, Id>,
    pub vocab: Vocab,
    /// `U` and `F` subformulas, in interning order.
    pub eventualities: Vec<Id>,
}

/// One way of satisfying an obligation set on the current letter.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) struct Alternative {
    pub cube: Cube,
    /// Obligations from the next position on, sorted.
    pub next: Vec<Id>,
    /// Eventualities postponed by this step, sorted.
    pub postponed: Vec<Id>,
}

impl Closure {
    /// Interns every subformula of `root`, which must be in NNF.
    pub fn new(root: &Formula) -> (Closure, Id) {
        let vocab = Vocab::new(root.atoms());
        let mut c = Closure { formulas: Vec::new(), ids: HashMap::new(), vocab, eventualities: Vec::new() };
        let id = c.intern(root);
        (c, id)
    }

    fn intern(&mut self, f: &Formula) -> Id {
        if let Some(&id) = self.ids.get(f) {
            return id;
        }
        for child in f.children() {
            self.intern(child);
        }
        let id = self.formulas.len() as Id;
        self.formulas.push(f.clone());
        self.ids.insert(f.clone(), id);
        if matches!(f, Formula::Until(..) | Formula::Finally(..)) {
            self.eventualities.push(id);
        }
        id
    }

    fn id(&self, f: &Formula) -> Id {
        self.ids[f]
    }

    /// Sorted obligation set with conjunctions split and `true` dropped, so
    /// that semantically identical sets built in different ways coincide.
    pub fn normalize(&self, ids: impl IntoIterator<Item = Id>) -> Vec<Id> {
        let mut out = BTreeSet::new();
        let mut stack: Vec<Id> = ids.into_iter().collect();
        while let Some(id) = stack.pop() {
            match &self.formulas[id as usize] {
                Formula::True => {}
                Formula::And(x, y) => {
                    stack.push(self.id(x));
                    stack.push(self.id(y));
                }
                _ => {
                    out.insert(id);
                }
            }
        }
        out.into_iter().collect()
    }

    /// All ways to satisfy every obligation in `node` at the current position.
    /// Alternatives made redundant by a weaker one are dropped.
    pub fn expand(&self, node: &[Id]) -> Vec<Alternative> {
        let mut out = BTreeSet::new();
        let branch = Branch {
            todo: node.to_vec(),
            done: BTreeSet::new(),
            cube: Cube::TRUE,
            next: BTreeSet::new(),
            postponed: BTreeSet::new(),
        };
        self.go(branch, &mut out);
        prune(out.into_iter().collect())
    }

    fn go(&self, mut b: Branch, out: &mut BTreeSet<Alternative>) {
        while let Some(id) = b.todo.pop() {
            if !b.done.insert(id) {
                continue;
            }
            match &self.formulas[id as usize] {
                Formula::True => {}
                Formula::False => return,
                Formula::Atom(a) => {
                    let bit = 1u64 << self.vocab.index_of(a).expect("atom in vocabulary");
                    match b.cube.and(&Cube { pos: bit, neg: 0 }) {
                        Some(c) => b.cube = c,
                        None => return,
                    }
                }
                Formula::Not(inner) => {
                    let Formula::Atom(a) = inner.as_ref() else { unreachable!("formula not in NNF") };
                    let bit = 1u64 << self.vocab.index_of(a).expect("atom in vocabulary");
                    match b.cube.and(&Cube { pos: 0, neg: bit }) {
                        Some(c) => b.cube = c,
                        None => return,
                    }
                }
                Formula::And(x, y) => {
                    b.todo.push(self.id(x));
                    b.todo.push(self.id(y));
                }
                Formula::Or(x, y) => {
                    let mut other = b.clone();
                    other.todo.push(self.id(y));
                    self.go(other, out);
                    b.todo.push(self.id(x));
                }
                Formula::Next(x) => {
                    b.next.insert(self.id(x));
                }
                Formula::Until(x, y) => {
                    let mut later = b.clone();
                    later.todo.push(self.id(x));
                    later.next.insert(id);
                    later.postponed.insert(id);
                    self.go(later, out);
                    b.todo.push(self.id(y));
                }
                Formula::Release(x, y) => {
                    let mut later = b.clone();
                    later.todo.push(self.id(y));
                    later.next.insert(id);
                    self.go(later, out);
                    b.todo.push(self.id(x));
                    b.todo.push(self.id(y));
                }
                Formula::Globally(x) => {
                    b.todo.push(self.id(x));
                    b.next.insert(id);
                }
                Formula::Finally(x) => {
                    let mut later = b.clone();
                    later.next.insert(id);
                    later.postponed.insert(id);
                    self.go(later, out);
                    b.todo.push(self.id(x));
                }
                Formula::Implies(..) | Formula::Iff(..) | Formula::WeakUntil(..) => {
                    unreachable!("formula not in NNF")
                }
            }
        }
        out.insert(Alternative {
            cube: b.cube,
            next: self.normalize(b.next),
            postponed: b.postponed.into_iter().collect(),
        });
    }
}

#[derive(Clone)]
struct Branch {
    todo: Vec<Id>,
    done: BTreeSet<Id>,
    cube: Cube,
    next: BTreeSet<Id>,
    postponed: BTreeSet<Id>,
}

fn is_subset(a: &[Id], b: &[Id]) -> bool {
    let mut it = b.iter();
    a.iter().all(|x| it.any(|y| y == x))
}

// `a` makes `b` redundant when it allows more letters, leaves fewer
// obligations and postpones fewer eventualities.
fn subsumes(a: &Alternative, b: &Alternative) -> bool {
    a.cube.implied_by(&b.cube) && is_subset(&a.next, &b.next) && is_subset(&a.postponed, &b.postponed)
}

fn prune(alts: Vec<Alternative>) -> Vec<Alternative> {
    let mut kept: Vec<Alternative> = Vec::with_capacity(alts.len());
    for (i, b) in alts.iter().enumerate() {
        let dominated = alts.iter().enumerate().any(|(j, a)| {
            // Ties keep the first occurrence.
            j != i && subsumes(a, b) && (!subsumes(b, a) || j < i)
        });
        if !dominated {
            kept.push(b.clone());
        }
    }
    kept
}
