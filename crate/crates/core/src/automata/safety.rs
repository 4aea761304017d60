use std::collections::{BTreeSet, HashMap};

use super::dpa::Dpa;
use super::tableau::{Closure, Id};
use super::{AutomataError, Limits, MAX_EXPLICIT_ATOMS};
use crate::logic::{is_nnf, is_safety_nnf, Formula, Letter, Vocab};

/// Complete deterministic automaton over finite words whose absorbing
/// `reject` state is reached exactly by the bad prefixes of a safety
/// property. Every other state is accepting.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SafetyAutomaton {
    vocab: Vocab,
    initial: u32,
    reject: u32,
    table: Vec<u32>,
}

impl SafetyAutomaton {
    /// `table[q · 2^|vocab| + letter]`; `reject` must loop on every letter.
    pub fn new(vocab: Vocab, initial: u32, reject: u32, table: Vec<u32>) -> Result<Self, AutomataError> {
        if vocab.len() > MAX_EXPLICIT_ATOMS {
            return Err(AutomataError::AlphabetTooLarge { atoms: vocab.len(), limit: MAX_EXPLICIT_ATOMS });
        }
        let letters = vocab.letter_count() as usize;
        assert_eq!(table.len() % letters, 0, "table must be total");
        let states = table.len() / letters;
        assert!((initial as usize) < states && (reject as usize) < states, "state out of range");
        assert!(table.iter().all(|&t| (t as usize) < states), "transition target out of range");
        let r = reject as usize * letters;
        assert!(table[r..r + letters].iter().all(|&t| t == reject), "reject state must be absorbing");
        Ok(SafetyAutomaton { vocab, initial, reject, table })
    }

    pub fn vocab(&self) -> &Vocab {
        &self.vocab
    }

    pub fn initial(&self) -> u32 {
        self.initial
    }

    pub fn reject(&self) -> u32 {
        self.reject
    }

    pub fn num_states(&self) -> usize {
        self.table.len() / self.num_letters()
    }

    pub fn num_letters(&self) -> usize {
        self.vocab.letter_count() as usize
    }

    pub fn succ(&self, q: u32, letter: Letter) -> u32 {
        self.table[q as usize * self.num_letters() + letter as usize]
    }

    /// State reached after reading `word` from the initial state.
    pub fn run<I: IntoIterator<Item = Letter>>(&self, word: I) -> u32 {
        word.into_iter().fold(self.initial, |q, l| self.succ(q, l))
    }

    /// Whether `word` is a bad prefix.
    pub fn rejects<I: IntoIterator<Item = Letter>>(&self, word: I) -> bool {
        self.run(word) == self.reject
    }

    /// Parity view: colour 0 everywhere except colour 1 on `reject`.
    pub fn to_dpa(&self) -> Dpa {
        let colors = (0..self.num_states() as u32).map(|q| u32::from(q == self.reject)).collect();
        Dpa::new(self.vocab.clone(), self.initial, colors, self.table.clone()).expect("alphabet already checked")
    }
}

/// Bad-prefix recogniser for a syntactically safe NNF formula.
///
/// Tableau obligation sets without any infinite continuation are pruned
/// first; subset construction over the rest then reaches the empty set
/// exactly on bad prefixes. Within a subset, obligation sets that include
/// another member are dropped since they add no words.
pub fn safety_ltl_to_safety_automaton(f: &Formula, limits: &Limits) -> Result<SafetyAutomaton, AutomataError> {
    if !is_nnf(f) {
        return Err(AutomataError::NotNnf);
    }
    if !is_safety_nnf(f) {
        return Err(AutomataError::NotSafety);
    }
    let atoms = f.atoms().len();
    if atoms > MAX_EXPLICIT_ATOMS {
        return Err(AutomataError::AlphabetTooLarge { atoms, limit: MAX_EXPLICIT_ATOMS });
    }
    let (closure, root) = Closure::new(f);

    // Tableau graph over obligation sets.
    let mut index: HashMap<Vec<Id>, usize> = HashMap::new();
    let start = closure.normalize([root]);
    let mut nodes: Vec<Vec<Id>> = vec![start.clone()];
    index.insert(start, 0);
    let mut edges: Vec<Vec<(super::guard::Cube, usize)>> = Vec::new();
    let mut i = 0;
    while i < nodes.len() {
        let mut out = Vec::new();
        for alt in closure.expand(&nodes[i]) {
            let t = match index.get(&alt.next) {
                Some(&t) => t,
                None => {
                    if nodes.len() >= limits.max_states {
                        return Err(AutomataError::TooManyStates { limit: limits.max_states });
                    }
                    index.insert(alt.next.clone(), nodes.len());
                    nodes.push(alt.next.clone());
                    nodes.len() - 1
                }
            };
            out.push((alt.cube, t));
        }
        edges.push(out);
        i += 1;
    }

    // Greatest fixpoint: keep nodes with an edge into the kept set.
    let mut alive = vec![true; nodes.len()];
    loop {
        let mut changed = false;
        for q in 0..nodes.len() {
            if alive[q] && !edges[q].iter().any(|&(_, t)| alive[t]) {
                alive[q] = false;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }

    let minimal = |set: BTreeSet<usize>| -> Vec<usize> {
        let sets: Vec<usize> = set.into_iter().collect();
        let includes = |a: usize, b: usize| {
            let (x, y) = (&nodes[a], &nodes[b]);
            x.len() > y.len() && y.iter().all(|id| x.binary_search(id).is_ok())
        };
        sets.iter().copied().filter(|&a| !sets.iter().any(|&b| includes(a, b))).collect()
    };

    let letters = closure.vocab.letter_count();
    let mut subsets: Vec<Vec<usize>> = Vec::new();
    let mut sindex: HashMap<Vec<usize>, u32> = HashMap::new();
    let mut add = |s: Vec<usize>, subsets: &mut Vec<Vec<usize>>| -> Result<u32, AutomataError> {
        if let Some(&id) = sindex.get(&s) {
            return Ok(id);
        }
        if subsets.len() >= limits.max_states {
            return Err(AutomataError::TooManyStates { limit: limits.max_states });
        }
        let id = subsets.len() as u32;
        sindex.insert(s.clone(), id);
        subsets.push(s);
        Ok(id)
    };
    let reject = add(Vec::new(), &mut subsets)?;
    let start: BTreeSet<usize> = if alive[0] { [0].into() } else { BTreeSet::new() };
    let initial = add(minimal(start), &mut subsets)?;
    let mut table = Vec::new();
    let mut i = 0;
    while i < subsets.len() {
        let current = subsets[i].clone();
        for l in 0..letters {
            let next: BTreeSet<usize> = current
                .iter()
                .flat_map(|&q| edges[q].iter())
                .filter(|(c, t)| alive[*t] && c.holds(l))
                .map(|&(_, t)| t)
                .collect();
            table.push(add(minimal(next), &mut subsets)?);
        }
        i += 1;
    }
    SafetyAutomaton::new(closure.vocab.clone(), initial, reject, table)
}

/// Intersection: rejects as soon as either component does.
pub fn product_automaton(a: &SafetyAutomaton, b: &SafetyAutomaton) -> Result<SafetyAutomaton, AutomataError> {
    if a.vocab != b.vocab {
        return Err(AutomataError::AlphabetMismatch);
    }
    let letters = a.num_letters() as u64;
    let mut index: HashMap<(u32, u32), u32> = HashMap::new();
    let mut pairs: Vec<(u32, u32)> = Vec::new();
    let key = |p: u32, q: u32| if p == a.reject || q == b.reject { (a.reject, b.reject) } else { (p, q) };
    let mut add = |k: (u32, u32), pairs: &mut Vec<(u32, u32)>| {
        *index.entry(k).or_insert_with(|| {
            pairs.push(k);
            pairs.len() as u32 - 1
        })
    };
    let reject = add((a.reject, b.reject), &mut pairs);
    let initial = add(key(a.initial, b.initial), &mut pairs);
    let mut table = Vec::new();
    let mut i = 0;
    while i < pairs.len() {
        let (p, q) = pairs[i];
        for l in 0..letters {
            table.push(add(key(a.succ(p, l), b.succ(q, l)), &mut pairs));
        }
        i += 1;
    }
    SafetyAutomaton::new(a.vocab.clone(), initial, reject, table)
}
