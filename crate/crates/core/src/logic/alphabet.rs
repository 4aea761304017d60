use std::collections::BTreeSet;

use thiserror::Error;

use super::formula::Atom;
use super::lasso::Vocab;

/// Reserved output proposition marking the padded tail of a finished trace.
pub const END: &str = "end";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlphabetError {
    #[error("invalid proposition name `{0}`")]
    InvalidName(String),
    #[error("proposition `{0}` declared more than once")]
    Duplicate(String),
    #[error("`{END}` is reserved and cannot be declared")]
    Reserved,
    #[error("alphabet declares no propositions")]
    Empty,
}

/// Propositions partitioned into environment inputs and system outputs.
///
/// The reserved proposition [`END`] is always appended to the outputs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    inputs: Vec<String>,
    outputs: Vec<String>,
}

pub(crate) fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn mask(from: usize, count: usize) -> u64 {
    let ones = if count >= 64 { u64::MAX } else { (1u64 << count) - 1 };
    ones << from
}

impl Alphabet {
    pub fn new<I, O, S, T>(inputs: I, outputs: O) -> Result<Self, AlphabetError>
    where
        I: IntoIterator<Item = S>,
        O: IntoIterator<Item = T>,
        S: Into<String>,
        T: Into<String>,
    {
        let inputs: Vec<String> = inputs.into_iter().map(Into::into).collect();
        let mut outputs: Vec<String> = outputs.into_iter().map(Into::into).collect();
        if inputs.is_empty() && outputs.is_empty() {
            return Err(AlphabetError::Empty);
        }
        let mut seen = BTreeSet::new();
        for name in inputs.iter().chain(outputs.iter()) {
            if name == END {
                return Err(AlphabetError::Reserved);
            }
            if !is_identifier(name) {
                return Err(AlphabetError::InvalidName(name.clone()));
            }
            if !seen.insert(name.as_str()) {
                return Err(AlphabetError::Duplicate(name.clone()));
            }
        }
        outputs.push(END.to_string());
        Ok(Alphabet { inputs, outputs })
    }

    pub fn inputs(&self) -> &[String] {
        &self.inputs
    }

    /// Declared outputs followed by `end`.
    pub fn outputs(&self) -> &[String] {
        &self.outputs
    }

    /// Inputs, then outputs (including `end`).
    pub fn props(&self) -> impl Iterator<Item = &str> {
        self.inputs.iter().chain(self.outputs.iter()).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.inputs.len() + self.outputs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn contains(&self, prop: &str) -> bool {
        self.is_input(prop) || self.is_output(prop)
    }

    pub fn is_input(&self, prop: &str) -> bool {
        self.inputs.iter().any(|p| p == prop)
    }

    pub fn is_output(&self, prop: &str) -> bool {
        self.outputs.iter().any(|p| p == prop)
    }

    /// Bits of the inputs in a letter over [`vocab`](Self::vocab).
    pub fn input_mask(&self) -> u64 {
        mask(0, self.inputs.len())
    }

    /// Bits of the outputs, `end` included.
    pub fn output_mask(&self) -> u64 {
        mask(self.inputs.len(), self.outputs.len())
    }

    /// Bit of `end`.
    pub fn end_mask(&self) -> u64 {
        1 << (self.len() - 1)
    }

    /// Plain atoms of all propositions, in [`props`](Self::props) order.
    pub fn vocab(&self) -> Vocab {
        Vocab::new(self.props().map(Atom::plain))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn end_is_appended_to_outputs() {
        let a = Alphabet::new(["i"], ["o"]).unwrap();
        assert_eq!(a.outputs(), ["o", "end"]);
        assert_eq!(a.props().collect::<Vec<_>>(), ["i", "o", "end"]);
    }

    #[test]
    fn rejects_bad_declarations() {
        assert_eq!(Alphabet::new(["a"], ["a"]), Err(AlphabetError::Duplicate("a".into())));
        assert_eq!(Alphabet::new(["end"], ["o"]), Err(AlphabetError::Reserved));
        assert_eq!(Alphabet::new(["1x"], ["o"]), Err(AlphabetError::InvalidName("1x".into())));
        assert_eq!(Alphabet::new(Vec::<String>::new(), Vec::<String>::new()), Err(AlphabetError::Empty));
    }
}
