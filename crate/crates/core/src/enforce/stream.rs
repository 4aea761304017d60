//! Line protocol: each step is an `O:` line followed by an `I:` line, one
//! `|`-separated set per trace, each set comma-separated names or `-`.
//! Anything after `#` is a comment.

use thiserror::Error;

use crate::logic::{Alphabet, Letter, END};

/// Separates sessions in the sequential model.
pub const NEW_SESSION: &str = "NEWSESSION";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct StreamError {
    pub line: usize,
    pub message: String,
}

/// One lock-step event: per trace, the output and input letters over the
/// base alphabet.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Step {
    pub outputs: Vec<Letter>,
    pub inputs: Vec<Letter>,
}

fn parse_set(text: &str, alphabet: &Alphabet, want_output: bool) -> Result<Letter, String> {
    let text = text.trim();
    if text == "-" {
        return Ok(0);
    }
    let mut letter = 0;
    for name in text.split(',').map(str::trim) {
        let ok = if want_output { alphabet.is_output(name) && name != END } else { alphabet.is_input(name) };
        if !ok {
            let side = if want_output { "output" } else { "input" };
            return Err(format!("`{name}` is not an {side} proposition"));
        }
        let bit = alphabet.props().position(|p| p == name).expect("declared");
        letter |= 1 << bit;
    }
    Ok(letter)
}

fn parse_line(body: &str, tag: &str, alphabet: &Alphabet, n: usize) -> Result<Vec<Letter>, String> {
    let rest = body.strip_prefix(tag).ok_or_else(|| format!("expected a `{tag}` line"))?;
    let sets: Vec<&str> = rest.split('|').collect();
    if sets.len() != n {
        return Err(format!("expected {n} sets, found {}", sets.len()));
    }
    sets.iter().map(|s| parse_set(s, alphabet, tag == "O:")).collect()
}

fn content(raw: &str) -> &str {
    raw.split('#').next().unwrap_or("").trim()
}

/// Steps of a single parallel stream with `n` traces.
pub fn parse_steps(text: &str, alphabet: &Alphabet, n: usize) -> Result<Vec<Step>, StreamError> {
    let mut steps = Vec::new();
    let mut pending: Option<Vec<Letter>> = None;
    let mut last = 0;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        last = line;
        let body = content(raw);
        if body.is_empty() {
            continue;
        }
        let err = |message: String| StreamError { line, message };
        if body == NEW_SESSION {
            return Err(err("session separator in a parallel stream".into()));
        }
        match pending.take() {
            None => pending = Some(parse_line(body, "O:", alphabet, n).map_err(err)?),
            Some(outputs) => {
                let inputs = parse_line(body, "I:", alphabet, n).map_err(err)?;
                steps.push(Step { outputs, inputs });
            }
        }
    }
    if pending.is_some() {
        return Err(StreamError { line: last, message: "missing `I:` line for the last step".into() });
    }
    Ok(steps)
}

/// Single-trace sessions separated by [`NEW_SESSION`] lines. Empty sessions
/// are dropped.
pub fn parse_sessions(text: &str, alphabet: &Alphabet) -> Result<Vec<Vec<Step>>, StreamError> {
    let mut sessions = Vec::new();
    let mut chunk = String::new();
    let mut offset = 0;
    let flush = |chunk: &mut String, offset: usize, sessions: &mut Vec<Vec<Step>>| {
        let steps = parse_steps(chunk, alphabet, 1).map_err(|e| StreamError { line: e.line + offset, ..e })?;
        if !steps.is_empty() {
            sessions.push(steps);
        }
        chunk.clear();
        Ok::<(), StreamError>(())
    };
    for (i, raw) in text.lines().enumerate() {
        if content(raw) == NEW_SESSION {
            flush(&mut chunk, offset, &mut sessions)?;
            offset = i + 1;
        } else {
            chunk.push_str(raw);
            chunk.push('\n');
        }
    }
    flush(&mut chunk, offset, &mut sessions)?;
    Ok(sessions)
}

fn format_sets(letters: &[Letter], alphabet: &Alphabet) -> String {
    let sets: Vec<String> = letters
        .iter()
        .map(|&l| {
            let names: Vec<&str> = alphabet.props().enumerate().filter(|(b, _)| l >> b & 1 == 1).map(|(_, p)| p).collect();
            if names.is_empty() {
                "-".to_string()
            } else {
                names.join(",")
            }
        })
        .collect();
    sets.join("|")
}

pub fn format_outputs(letters: &[Letter], alphabet: &Alphabet, enforced: bool) -> String {
    let flag = if enforced { " #enforced" } else { "" };
    format!("O: {}{flag}", format_sets(letters, alphabet))
}

pub fn format_inputs(letters: &[Letter], alphabet: &Alphabet) -> String {
    format!("I: {}", format_sets(letters, alphabet))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alphabet() -> Alphabet {
        Alphabet::new(["i"], ["o", "p"]).unwrap()
    }

    #[test]
    fn parses_and_formats_steps() {
        let a = alphabet();
        let steps = parse_steps("O: o,p|-\nI: i|-\n\nO: -|p # note\nI: -|i\n", &a, 2).unwrap();
        assert_eq!(steps.len(), 2);
        assert_eq!(steps[0].outputs, vec![0b110, 0]);
        assert_eq!(steps[1].inputs, vec![0, 1]);
        assert_eq!(format_outputs(&steps[0].outputs, &a, false), "O: o,p|-");
        assert_eq!(format_outputs(&steps[1].outputs, &a, true), "O: -|p #enforced");
        assert_eq!(format_inputs(&steps[0].inputs, &a), "I: i|-");
    }

    #[test]
    fn reports_line_of_bad_input() {
        let a = alphabet();
        let e = parse_steps("O: o|-\nI: o|-\n", &a, 2).unwrap_err();
        assert_eq!(e.line, 2);
        assert!(parse_steps("O: end|-\nI: -|-\n", &a, 2).is_err());
        assert!(parse_steps("O: o\nI: -\n", &a, 2).is_err());
        assert_eq!(parse_steps("O: -|-\n", &a, 2).unwrap_err().line, 1);
    }

    #[test]
    fn splits_sessions() {
        let a = alphabet();
        let s = parse_sessions("O: o\nI: i\nNEWSESSION\nO: -\nI: -\nO: p\nI: -\nNEWSESSION\n", &a).unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(s[1].len(), 2);
        let e = parse_sessions("O: o\nI: i\nNEWSESSION\nO: x\nI: -\n", &a).unwrap_err();
        assert_eq!(e.line, 4);
    }
}
