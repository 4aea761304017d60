use std::fmt::Write as _;

use super::guard::Guard;
use super::AutomataError;
use crate::logic::{Letter, Vocab};

/// Deterministic, complete parity automaton with state colours; a run is
/// accepting iff the largest colour seen infinitely often is even.
///
/// Transitions are stored as an explicit table over all `2^|vocab|` letters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dpa {
    vocab: Vocab,
    initial: u32,
    colors: Vec<u32>,
    table: Vec<u32>,
}

impl Dpa {
    /// `table[q · 2^|vocab| + letter]` is the successor of `q` on `letter`.
    pub fn new(vocab: Vocab, initial: u32, colors: Vec<u32>, table: Vec<u32>) -> Result<Self, AutomataError> {
        if vocab.len() > super::MAX_EXPLICIT_ATOMS {
            return Err(AutomataError::AlphabetTooLarge { atoms: vocab.len(), limit: super::MAX_EXPLICIT_ATOMS });
        }
        let letters = vocab.letter_count() as usize;
        assert_eq!(table.len(), colors.len() * letters, "table must be total");
        assert!((initial as usize) < colors.len(), "initial state out of range");
        assert!(table.iter().all(|&t| (t as usize) < colors.len()), "transition target out of range");
        Ok(Dpa { vocab, initial, colors, table })
    }

    pub fn vocab(&self) -> &Vocab {
        &self.vocab
    }

    pub fn initial(&self) -> u32 {
        self.initial
    }

    pub fn num_states(&self) -> usize {
        self.colors.len()
    }

    pub fn num_letters(&self) -> usize {
        self.vocab.letter_count() as usize
    }

    pub fn color(&self, q: u32) -> u32 {
        self.colors[q as usize]
    }

    pub fn max_color(&self) -> u32 {
        self.colors.iter().copied().max().unwrap_or(0)
    }

    pub fn succ(&self, q: u32, letter: Letter) -> u32 {
        self.table[q as usize * self.num_letters() + letter as usize]
    }

    /// Outgoing edges of `q` grouped by target, with guards covering exactly
    /// the letters leading there.
    pub fn edges(&self, q: u32) -> Vec<(Guard, u32)> {
        let row = &self.table[q as usize * self.num_letters()..(q as usize + 1) * self.num_letters()];
        let mut targets: Vec<u32> = row.to_vec();
        targets.sort_unstable();
        targets.dedup();
        targets
            .into_iter()
            .map(|t| (Guard::from_letters(self.vocab.len(), |l| row[l as usize] == t), t))
            .collect()
    }

    /// Hanoi Omega-Automata text.
    pub fn to_hoa(&self) -> String {
        let colors = self.max_color() + 1;
        let mut s = String::new();
        s.push_str("HOA: v1\n");
        let _ = writeln!(s, "States: {}", self.num_states());
        let _ = writeln!(s, "Start: {}", self.initial);
        let _ = write!(s, "AP: {}", self.vocab.len());
        for a in self.vocab.atoms() {
            let _ = write!(s, " \"{a}\"");
        }
        s.push('\n');
        let _ = writeln!(s, "acc-name: parity max even {colors}");
        let _ = writeln!(s, "Acceptance: {colors} {}", parity_max_even(colors - 1));
        s.push_str("properties: trans-labels explicit-labels state-acc deterministic complete\n");
        s.push_str("--BODY--\n");
        for q in 0..self.num_states() as u32 {
            let _ = writeln!(s, "State: {q} {{{}}}", self.color(q));
            for (guard, t) in self.edges(q) {
                s.push('[');
                let _ = guard.fmt_indexed(self.vocab.len(), &mut s);
                let _ = writeln!(s, "] {t}");
            }
        }
        s.push_str("--END--\n");
        s
    }
}

fn parity_max_even(top: u32) -> String {
    let here = if top % 2 == 0 { format!("Inf({top})") } else { format!("Fin({top})") };
    if top == 0 {
        return here;
    }
    let rest = parity_max_even(top - 1);
    if top % 2 == 0 {
        format!("{here} | ({rest})")
    } else {
        format!("{here} & ({rest})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::Atom;

    #[test]
    fn hoa_header_and_body() {
        let vocab = Vocab::new([Atom::plain("a")]);
        // q0 --a--> q0, q0 --!a--> q1 (sink).
        let dpa = Dpa::new(vocab, 0, vec![0, 1], vec![1, 0, 1, 1]).unwrap();
        let hoa = dpa.to_hoa();
        assert!(hoa.contains("States: 2\nStart: 0\nAP: 1 \"a\"\n"));
        assert!(hoa.contains("acc-name: parity max even 2\nAcceptance: 2 Fin(1) & (Inf(0))\n"));
        assert!(hoa.contains("State: 0 {0}\n[0] 0\n[!0] 1\n"));
        assert!(hoa.contains("State: 1 {1}\n[t] 1\n"));
    }

    #[test]
    fn acceptance_condition_nesting() {
        assert_eq!(parity_max_even(0), "Inf(0)");
        assert_eq!(parity_max_even(2), "Inf(2) | (Fin(1) & (Inf(0)))");
    }
}
