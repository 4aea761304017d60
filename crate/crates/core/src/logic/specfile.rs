//! `.hltl` specification files.
//!
//! ```text
//! // observational determinism
//! inputs: i
//! outputs: o
//! spec: forall p1. forall p2. (o[p1] <-> o[p2]) W !(i[p1] <-> i[p2])
//! ```
//!
//! The formula after `spec:` may continue over the following lines.

use thiserror::Error;

use super::alphabet::{Alphabet, AlphabetError};
use super::hyper::HyperSpec;
use super::parse::{parse_hyperltl, ParseError};

#[derive(Debug, Error)]
pub enum SpecFileError {
    #[error("line {line}: expected `inputs:`, `outputs:` or `spec:`")]
    UnexpectedLine { line: usize },
    #[error("missing `{0}:` declaration")]
    Missing(&'static str),
    #[error("`{0}:` declared twice")]
    Repeated(&'static str),
    #[error(transparent)]
    Alphabet(#[from] AlphabetError),
    #[error("in formula: {0}")]
    Parse(#[from] ParseError),
}

fn names(list: &str) -> Vec<String> {
    list.split(',').map(str::trim).filter(|s| !s.is_empty()).map(String::from).collect()
}

fn strip_comment(line: &str) -> &str {
    line.find("//").map_or(line, |i| &line[..i])
}

pub fn parse_spec_file(text: &str) -> Result<HyperSpec, SpecFileError> {
    let mut inputs = None;
    let mut outputs = None;
    let mut formula: Option<String> = None;
    for (no, raw) in text.lines().enumerate() {
        if let Some(f) = formula.as_mut() {
            f.push('\n');
            f.push_str(raw);
            continue;
        }
        let line = strip_comment(raw).trim();
        if line.is_empty() {
            continue;
        }
        let (key, rest) = line.split_once(':').ok_or(SpecFileError::UnexpectedLine { line: no + 1 })?;
        match key.trim() {
            "inputs" => {
                if inputs.replace(names(rest)).is_some() {
                    return Err(SpecFileError::Repeated("inputs"));
                }
            }
            "outputs" => {
                if outputs.replace(names(rest)).is_some() {
                    return Err(SpecFileError::Repeated("outputs"));
                }
            }
            "spec" => {
                // Keep the original text after the colon so comments are handled by the lexer.
                let start = raw.find(':').map_or(raw.len(), |i| i + 1);
                formula = Some(raw[start..].to_string());
            }
            _ => return Err(SpecFileError::UnexpectedLine { line: no + 1 }),
        }
    }
    let inputs = inputs.ok_or(SpecFileError::Missing("inputs"))?;
    let outputs = outputs.ok_or(SpecFileError::Missing("outputs"))?;
    let formula = formula.ok_or(SpecFileError::Missing("spec"))?;
    let alphabet = Alphabet::new(inputs, outputs)?;
    Ok(parse_hyperltl(&formula, &alphabet)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_declarations_and_multiline_formula() {
        let text = "// od\ninputs: i\noutputs: o // the only output\nspec: forall p1. forall p2.\n  (o[p1] <-> o[p2])\n  W !(i[p1] <-> i[p2])\n";
        let spec = parse_spec_file(text).unwrap();
        assert_eq!(spec.arity(), 2);
        assert_eq!(spec.alphabet().inputs(), ["i"]);
        assert_eq!(spec.alphabet().outputs(), ["o", "end"]);
    }

    #[test]
    fn empty_input_list_allowed() {
        let spec = parse_spec_file("inputs:\noutputs: o\nspec: forall p. G o[p]").unwrap();
        assert!(spec.alphabet().inputs().is_empty());
    }

    #[test]
    fn missing_spec_line() {
        assert!(matches!(parse_spec_file("inputs: i\noutputs: o\n"), Err(SpecFileError::Missing("spec"))));
    }
}
