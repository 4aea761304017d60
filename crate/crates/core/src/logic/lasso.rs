use std::collections::HashMap;
use std::fmt;

use super::formula::{Atom, Formula};

/// A letter: bit `k` is the truth value of the `k`-th atom of a [`Vocab`].
pub type Letter = u64;

/// Maximum number of atoms a [`Vocab`] can index.
pub const MAX_ATOMS: usize = 64;

/// Ordered, duplicate-free list of atoms giving each a bit position.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Vocab {
    atoms: Vec<Atom>,
    index: HashMap<Atom, usize>,
}

impl Vocab {
    /// Panics if more than [`MAX_ATOMS`] distinct atoms are given.
    pub fn new<I: IntoIterator<Item = Atom>>(atoms: I) -> Self {
        let mut v = Vocab::default();
        for a in atoms {
            v.push(a);
        }
        v
    }

    /// Adds `atom` if missing and returns its bit position.
    pub fn push(&mut self, atom: Atom) -> usize {
        if let Some(&i) = self.index.get(&atom) {
            return i;
        }
        assert!(self.atoms.len() < MAX_ATOMS, "vocabulary limited to {MAX_ATOMS} atoms");
        let i = self.atoms.len();
        self.index.insert(atom.clone(), i);
        self.atoms.push(atom);
        i
    }

    pub fn index_of(&self, atom: &Atom) -> Option<usize> {
        self.index.get(atom).copied()
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// Letter with exactly the given atoms set; atoms outside the vocabulary are ignored.
    pub fn letter<'a, I: IntoIterator<Item = &'a Atom>>(&self, atoms: I) -> Letter {
        atoms
            .into_iter()
            .filter_map(|a| self.index_of(a))
            .fold(0, |acc, i| acc | (1 << i))
    }

    pub fn holds(&self, letter: Letter, atom: &Atom) -> bool {
        self.index_of(atom).is_some_and(|i| letter & (1 << i) != 0)
    }

    /// Number of distinct letters, `2^len`.
    pub fn letter_count(&self) -> u64 {
        1u64 << self.atoms.len()
    }
}

/// Ultimately periodic word `stem · cycle^ω`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LassoWord {
    pub stem: Vec<Letter>,
    pub cycle: Vec<Letter>,
}

impl LassoWord {
    /// Panics if `cycle` is empty.
    pub fn new(stem: Vec<Letter>, cycle: Vec<Letter>) -> Self {
        assert!(!cycle.is_empty(), "lasso cycle must be nonempty");
        LassoWord { stem, cycle }
    }

    /// Number of distinct positions (stem plus one cycle period).
    pub fn positions(&self) -> usize {
        self.stem.len() + self.cycle.len()
    }

    /// Position following `i` on the lasso.
    pub fn succ(&self, i: usize) -> usize {
        if i + 1 < self.positions() {
            i + 1
        } else {
            self.stem.len()
        }
    }

    /// Letter at position `i` of the infinite word.
    pub fn at(&self, i: usize) -> Letter {
        if i < self.stem.len() {
            self.stem[i]
        } else {
            self.cycle[(i - self.stem.len()) % self.cycle.len()]
        }
    }

    /// Synchronous product of several words; word `j`'s letters are placed by
    /// `place(j, letter)` into the combined letter.
    pub fn zip<F: Fn(usize, Letter) -> Letter>(words: &[&LassoWord], place: F) -> LassoWord {
        let stem_len = words.iter().map(|w| w.stem.len()).max().unwrap_or(0);
        let cycle_len = words.iter().map(|w| w.cycle.len()).fold(1, lcm);
        let letter = |t: usize| {
            words.iter().enumerate().fold(0, |acc, (j, w)| acc | place(j, w.at(t)))
        };
        LassoWord {
            stem: (0..stem_len).map(letter).collect(),
            cycle: (stem_len..stem_len + cycle_len).map(letter).collect(),
        }
    }

    /// A finite trace padded with a constant letter forever.
    pub fn padded(prefix: Vec<Letter>, pad: Letter) -> Self {
        LassoWord { stem: prefix, cycle: vec![pad] }
    }
}

impl fmt::Display for LassoWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}({:?})^w", self.stem, self.cycle)
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

/// Truth value of `f` at position 0 of `w`. Atoms missing from `vocab` are false.
pub fn evaluate_ltl(f: &Formula, w: &LassoWord, vocab: &Vocab) -> bool {
    label(f, w, vocab)[0]
}

/// Truth value of `f` at every lasso position.
pub fn label(f: &Formula, w: &LassoWord, vocab: &Vocab) -> Vec<bool> {
    let n = w.positions();
    let step = |a: &[bool], b: &[bool], init: bool, rule: &dyn Fn(bool, bool, bool) -> bool| {
        let mut v = vec![init; n];
        loop {
            let mut changed = false;
            for i in (0..n).rev() {
                let nv = rule(a[i], b[i], v[w.succ(i)]);
                if nv != v[i] {
                    v[i] = nv;
                    changed = true;
                }
            }
            if !changed {
                return v;
            }
        }
    };
    let ones = vec![true; n];
    match f {
        Formula::True => ones,
        Formula::False => vec![false; n],
        Formula::Atom(a) => (0..n).map(|i| vocab.holds(w.at(i), a)).collect(),
        Formula::Not(a) => label(a, w, vocab).into_iter().map(|x| !x).collect(),
        Formula::And(a, b) => zip_with(label(a, w, vocab), label(b, w, vocab), |x, y| x && y),
        Formula::Or(a, b) => zip_with(label(a, w, vocab), label(b, w, vocab), |x, y| x || y),
        Formula::Implies(a, b) => zip_with(label(a, w, vocab), label(b, w, vocab), |x, y| !x || y),
        Formula::Iff(a, b) => zip_with(label(a, w, vocab), label(b, w, vocab), |x, y| x == y),
        Formula::Next(a) => {
            let a = label(a, w, vocab);
            (0..n).map(|i| a[w.succ(i)]).collect()
        }
        Formula::Until(a, b) => {
            step(&label(a, w, vocab), &label(b, w, vocab), false, &|a, b, nx| b || (a && nx))
        }
        Formula::WeakUntil(a, b) => {
            step(&label(a, w, vocab), &label(b, w, vocab), true, &|a, b, nx| b || (a && nx))
        }
        Formula::Release(a, b) => {
            step(&label(a, w, vocab), &label(b, w, vocab), true, &|a, b, nx| b && (a || nx))
        }
        Formula::Globally(a) => step(&label(a, w, vocab), &ones, true, &|a, _, nx| a && nx),
        Formula::Finally(a) => step(&label(a, w, vocab), &ones, false, &|a, _, nx| a || nx),
    }
}

fn zip_with(a: Vec<bool>, b: Vec<bool>, op: impl Fn(bool, bool) -> bool) -> Vec<bool> {
    a.into_iter().zip(b).map(|(x, y)| op(x, y)).collect()
}
