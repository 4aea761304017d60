use std::fmt;

use super::alphabet::Alphabet;
use super::formula::{Atom, Formula, TraceRef};
use super::lasso::{evaluate_ltl, LassoWord, Vocab, MAX_ATOMS};
use super::parse::Span;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuantifierKind {
    Forall,
    Exists,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quantifier {
    pub kind: QuantifierKind,
    pub var: String,
    /// Source location; empty for constructed specifications.
    pub span: Span,
}

/// Prenex HyperLTL formula over a partitioned alphabet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HyperSpec {
    prefix: Vec<Quantifier>,
    body: Formula,
    alphabet: Alphabet,
}

impl HyperSpec {
    pub(crate) fn from_parts(prefix: Vec<Quantifier>, body: Formula, alphabet: Alphabet) -> Self {
        HyperSpec { prefix, body, alphabet }
    }

    /// Prenex formula with the given quantifiers. The caller guarantees the
    /// body only uses the quantified variables and propositions of `alphabet`.
    pub fn with_prefix<S: Into<String>>(
        quantifiers: impl IntoIterator<Item = (QuantifierKind, S)>,
        body: Formula,
        alphabet: Alphabet,
    ) -> Self {
        let prefix = quantifiers
            .into_iter()
            .map(|(kind, v)| Quantifier { kind, var: v.into(), span: Span { start: 0, end: 0 } })
            .collect();
        HyperSpec { prefix, body, alphabet }
    }

    /// `∀vars. body`.
    pub fn forall<S: Into<String>>(vars: impl IntoIterator<Item = S>, body: Formula, alphabet: Alphabet) -> Self {
        Self::with_prefix(vars.into_iter().map(|v| (QuantifierKind::Forall, v)), body, alphabet)
    }

    pub fn prefix(&self) -> &[Quantifier] {
        &self.prefix
    }

    pub fn body(&self) -> &Formula {
        &self.body
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    /// Number of quantified trace variables.
    pub fn arity(&self) -> usize {
        self.prefix.len()
    }

    pub fn vars(&self) -> impl Iterator<Item = &str> {
        self.prefix.iter().map(|q| q.var.as_str())
    }

    pub fn is_universal(&self) -> bool {
        self.prefix.iter().all(|q| q.kind == QuantifierKind::Forall)
    }

    /// The body with the `j`-th trace variable replaced by copy `copies[j]`.
    pub fn instantiate(&self, copies: &[u32]) -> Formula {
        assert_eq!(copies.len(), self.arity(), "one copy index per trace variable");
        self.body.map_atoms(&mut |a| {
            let trace = match &a.trace {
                TraceRef::Var(v) => match self.prefix.iter().position(|q| &q.var == v) {
                    Some(j) => TraceRef::Copy(copies[j]),
                    None => a.trace.clone(),
                },
                other => other.clone(),
            };
            Formula::Atom(Atom { prop: a.prop.clone(), trace })
        })
    }
}

impl fmt::Display for HyperSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for q in &self.prefix {
            let kw = match q.kind {
                QuantifierKind::Forall => "forall",
                QuantifierKind::Exists => "exists",
            };
            write!(f, "{kw} {}. ", q.var)?;
        }
        write!(f, "{}", self.body)
    }
}

/// Whether the set `traces` satisfies `spec`. Each trace is a lasso over the
/// plain propositions of the spec's alphabet, in [`Alphabet::vocab`] order.
///
/// Panics if `traces` is empty or `arity × |Σ|` exceeds 64.
pub fn evaluate_hyperltl(spec: &HyperSpec, traces: &[LassoWord]) -> bool {
    assert!(!traces.is_empty(), "trace set must be nonempty");
    let m = spec.alphabet.len();
    let k = spec.arity();
    assert!(k * m <= MAX_ATOMS, "too many propositions for evaluation");
    let vocab = Vocab::new(
        (1..=k as u32).flat_map(|j| spec.alphabet.props().map(move |p| Atom::copy(p, j))),
    );
    let copies: Vec<u32> = (1..=k as u32).collect();
    let body = spec.instantiate(&copies);
    let mut chosen = Vec::with_capacity(k);
    quantify(spec, &body, &vocab, traces, m, &mut chosen)
}

fn quantify(
    spec: &HyperSpec,
    body: &Formula,
    vocab: &Vocab,
    traces: &[LassoWord],
    m: usize,
    chosen: &mut Vec<usize>,
) -> bool {
    let depth = chosen.len();
    if depth == spec.arity() {
        let words: Vec<&LassoWord> = chosen.iter().map(|&i| &traces[i]).collect();
        let word = LassoWord::zip(&words, |j, l| l << (j * m));
        return evaluate_ltl(body, &word, vocab);
    }
    let mut check = |i| {
        chosen.push(i);
        let r = quantify(spec, body, vocab, traces, m, chosen);
        chosen.pop();
        r
    };
    match spec.prefix[depth].kind {
        QuantifierKind::Forall => (0..traces.len()).all(&mut check),
        QuantifierKind::Exists => (0..traces.len()).any(&mut check),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::parse_hyperltl;

    fn od() -> HyperSpec {
        let a = Alphabet::new(["i"], ["o"]).unwrap();
        parse_hyperltl("forall p1. forall p2. (o[p1] <-> o[p2]) W !(i[p1] <-> i[p2])", &a).unwrap()
    }

    // Vocabulary order: i, o, end.
    const I: u64 = 1;
    const O: u64 = 2;

    #[test]
    fn identical_traces_satisfy_od() {
        let t = LassoWord::new(vec![I | O, 0], vec![I]);
        assert!(evaluate_hyperltl(&od(), &[t.clone(), t]));
    }

    #[test]
    fn diverging_outputs_violate_od() {
        let t1 = LassoWord::new(vec![], vec![I | O]);
        let t2 = LassoWord::new(vec![], vec![I]);
        assert!(!evaluate_hyperltl(&od(), &[t1, t2]));
    }

    #[test]
    fn display_reparses() {
        let spec = od();
        let again = parse_hyperltl(&spec.to_string(), spec.alphabet()).unwrap();
        assert_eq!(again.body(), spec.body());
        assert_eq!(again.arity(), 2);
    }
}
