//! PGSolver text format: a `parity <maxId>;` header followed by lines
//! `<id> <color> <owner> <succ,succ,...> "<label>";`.

use thiserror::Error;

use super::arena::{Arena, Solution};
use super::Player;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PgSolverError {
    #[error("missing `parity <maxId>;` header")]
    MissingHeader,
    #[error("line {line}: {reason}")]
    BadLine { line: usize, reason: String },
    #[error("node {0} defined twice")]
    Duplicate(u32),
    #[error("node {0} is not defined")]
    Undefined(u32),
}

pub(crate) fn node_line(id: u32, color: u32, owner: Player, succ: &[u32], label: &str) -> String {
    let succ: Vec<String> = succ.iter().map(u32::to_string).collect();
    format!("{id} {color} {} {} \"{label}\";\n", owner.index(), succ.join(","))
}

impl Arena {
    /// Node ids are arena indices; repeated successors are listed once.
    pub fn to_pgsolver(&self) -> String {
        let mut out = format!("parity {};\n", self.len().saturating_sub(1));
        for v in 0..self.len() as u32 {
            let mut succ: Vec<u32> = Vec::new();
            for &w in self.succ(v) {
                if !succ.contains(&w) {
                    succ.push(w);
                }
            }
            out += &node_line(v, self.color(v), self.owner(v), &succ, self.label(v));
        }
        out
    }
}

impl Solution {
    /// `paritysol` listing: `<id> <winner> [<successor>];`, the successor
    /// given where the owner wins.
    pub fn to_pgsolver(&self, arena: &Arena) -> String {
        let mut out = format!("paritysol {};\n", self.len().saturating_sub(1));
        for v in 0..self.len() as u32 {
            match self.choice(v) {
                Some(m) => out += &format!("{v} {} {};\n", self.winner(v).index(), arena.succ(v)[m as usize]),
                None => out += &format!("{v} {};\n", self.winner(v).index()),
            }
        }
        out
    }
}

/// Reads a game whose node ids are exactly `0..=maxId`.
pub fn parse_pgsolver(text: &str) -> Result<Arena, PgSolverError> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (_, header) = lines.next().ok_or(PgSolverError::MissingHeader)?;
    let max: u32 = header
        .trim()
        .strip_prefix("parity")
        .and_then(|r| r.trim().strip_suffix(';'))
        .and_then(|r| r.trim().parse().ok())
        .ok_or(PgSolverError::MissingHeader)?;
    let n = max as usize + 1;
    let mut nodes: Vec<Option<(u32, Player, Vec<u32>, String)>> = vec![None; n];
    for (i, raw) in lines {
        let line = i + 1;
        let bad = |reason: &str| PgSolverError::BadLine { line, reason: reason.to_string() };
        let body = raw.trim().strip_suffix(';').ok_or_else(|| bad("missing `;`"))?;
        let (fields, label) = match body.find('"') {
            Some(q) => {
                let label = body[q + 1..].strip_suffix('"').ok_or_else(|| bad("unterminated label"))?;
                (&body[..q], label.to_string())
            }
            None => (body, String::new()),
        };
        let parts: Vec<&str> = fields.split_whitespace().collect();
        let [id, color, owner, succ] = parts[..] else {
            return Err(bad("expected `<id> <color> <owner> <successors>`"));
        };
        let num = |s: &str| s.parse::<u32>().map_err(|_| bad(&format!("`{s}` is not a number")));
        let id = num(id)?;
        let color = num(color)?;
        let owner = match owner {
            "0" => Player::P0,
            "1" => Player::P1,
            _ => return Err(bad("owner must be 0 or 1")),
        };
        let succ = succ.split(',').map(num).collect::<Result<Vec<u32>, _>>()?;
        if id > max || succ.iter().any(|&w| w > max) {
            return Err(bad("node id exceeds the header's maximum"));
        }
        let slot = &mut nodes[id as usize];
        if slot.is_some() {
            return Err(PgSolverError::Duplicate(id));
        }
        *slot = Some((color, owner, succ, label));
    }
    let mut owner = Vec::with_capacity(n);
    let mut color = Vec::with_capacity(n);
    let mut succ = Vec::with_capacity(n);
    let mut label = Vec::with_capacity(n);
    for (id, node) in nodes.into_iter().enumerate() {
        let (c, o, s, l) = node.ok_or(PgSolverError::Undefined(id as u32))?;
        owner.push(o);
        color.push(c);
        succ.push(s);
        label.push(l);
    }
    Ok(Arena::new(owner, color, succ, label))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let text = "parity 2;\n0 2 0 1,2 \"a\";\n1 1 1 0 \"b\";\n2 0 1 2,0 \"c\";\n";
        let a = parse_pgsolver(text).unwrap();
        assert_eq!(a.to_pgsolver(), text);
        assert_eq!(a.succ(2), &[2, 0]);
    }

    #[test]
    fn rejects_gaps_and_duplicates() {
        assert_eq!(parse_pgsolver("parity 1;\n0 0 0 0;\n"), Err(PgSolverError::Undefined(1)));
        assert_eq!(parse_pgsolver("parity 0;\n0 0 0 0;\n0 0 0 0;\n"), Err(PgSolverError::Duplicate(0)));
        assert_eq!(parse_pgsolver("0 0 0 0;"), Err(PgSolverError::MissingHeader));
        assert!(matches!(parse_pgsolver("parity 0;\n0 0 2 0;\n"), Err(PgSolverError::BadLine { line: 2, .. })));
    }

    #[test]
    fn solution_lists_choices_of_winning_owners() {
        let a = parse_pgsolver("parity 1;\n0 0 0 1,0;\n1 1 1 0;\n").unwrap();
        let s = a.solve();
        assert_eq!(s.to_pgsolver(&a), "paritysol 1;\n0 0 0;\n1 0;\n");
    }
}
