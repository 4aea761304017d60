use std::collections::HashMap;

use super::guard::Cube;
use super::tableau::{Closure, Id};
use super::{AutomataError, Limits};
use crate::logic::{is_nnf, Formula, Letter, Vocab, MAX_ATOMS};

/// Nondeterministic Büchi automaton with state-based acceptance and cube
/// labelled edges. A missing letter means no transition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Nba {
    vocab: Vocab,
    initial: usize,
    accepting: Vec<bool>,
    edges: Vec<Vec<(Cube, usize)>>,
}

impl Nba {
    /// Panics if an edge targets a missing state or the initial state is out of range.
    pub fn new(vocab: Vocab, initial: usize, accepting: Vec<bool>, edges: Vec<Vec<(Cube, usize)>>) -> Self {
        assert_eq!(accepting.len(), edges.len(), "one acceptance flag per state");
        assert!(initial < edges.len(), "initial state out of range");
        assert!(edges.iter().flatten().all(|&(_, t)| t < edges.len()), "edge target out of range");
        Nba { vocab, initial, accepting, edges }
    }

    pub fn vocab(&self) -> &Vocab {
        &self.vocab
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn num_states(&self) -> usize {
        self.edges.len()
    }

    pub fn is_accepting(&self, q: usize) -> bool {
        self.accepting[q]
    }

    pub fn edges(&self, q: usize) -> &[(Cube, usize)] {
        &self.edges[q]
    }

    pub fn successors(&self, q: usize, letter: Letter) -> impl Iterator<Item = usize> + '_ {
        self.edges[q].iter().filter(move |(c, _)| c.holds(letter)).map(|&(_, t)| t)
    }
}

/// Tableau translation. States are obligation sets paired with a
/// degeneralisation level; a state is accepting once every eventuality has
/// been fulfilled or absent since the last accepting visit.
pub fn ltl_to_nba(f: &Formula, limits: &Limits) -> Result<Nba, AutomataError> {
    if !is_nnf(f) {
        return Err(AutomataError::NotNnf);
    }
    let atoms = f.atoms().len();
    if atoms > MAX_ATOMS {
        return Err(AutomataError::AlphabetTooLarge { atoms, limit: MAX_ATOMS });
    }
    let (closure, root) = Closure::new(f);
    let evs = &closure.eventualities;
    let k = evs.len();
    let mut index: HashMap<(Vec<Id>, usize), usize> = HashMap::new();
    let mut states: Vec<(Vec<Id>, usize)> = Vec::new();
    let mut edges: Vec<Vec<(Cube, usize)>> = Vec::new();
    let mut expansions: HashMap<Vec<Id>, Vec<super::tableau::Alternative>> = HashMap::new();

    let start = (closure.normalize([root]), 0usize);
    index.insert(start.clone(), 0);
    states.push(start);
    let mut i = 0;
    while i < states.len() {
        let (node, level) = states[i].clone();
        let alts = expansions.entry(node.clone()).or_insert_with(|| closure.expand(&node)).clone();
        let mut out = Vec::with_capacity(alts.len());
        for alt in alts {
            let mut j = if level == k { 0 } else { level };
            while j < k && alt.postponed.binary_search(&evs[j]).is_err() {
                j += 1;
            }
            let key = (alt.next, j);
            let target = match index.get(&key) {
                Some(&t) => t,
                None => {
                    if states.len() >= limits.max_states {
                        return Err(AutomataError::TooManyStates { limit: limits.max_states });
                    }
                    let t = states.len();
                    index.insert(key.clone(), t);
                    states.push(key);
                    t
                }
            };
            out.push((alt.cube, target));
        }
        edges.push(out);
        i += 1;
    }
    let accepting = states.iter().map(|&(_, level)| level == k).collect();
    Ok(Nba { vocab: closure.vocab.clone(), initial: 0, accepting, edges })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::{parse_ltl, to_nnf};

    fn nba(s: &str) -> Nba {
        ltl_to_nba(&to_nnf(&parse_ltl(s).unwrap()), &Limits::default()).unwrap()
    }

    #[test]
    fn globally_is_one_accepting_state() {
        let a = nba("G a");
        assert_eq!(a.num_states(), 1);
        assert!(a.is_accepting(0));
        assert_eq!(a.edges(0), [(Cube { pos: 1, neg: 0 }, 0)]);
    }

    #[test]
    fn false_has_no_transitions() {
        let a = nba("false");
        assert!(a.edges(a.initial()).is_empty());
    }

    #[test]
    fn next_walks_through_obligations() {
        let a = nba("X a");
        assert_eq!(a.num_states(), 3);
    }

    #[test]
    fn eventually_needs_accepting_level() {
        let a = nba("F a");
        assert!(!a.is_accepting(a.initial()));
        assert!((0..a.num_states()).any(|q| a.is_accepting(q)));
    }
}
