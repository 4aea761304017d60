//! Formula-level translations: self-composition, trace encodings, the
//! input-determinism gadget and satisfiability-encoding emitters.

use thiserror::Error;

use crate::logic::{Alphabet, Atom, Formula, HyperSpec, Letter, QuantifierKind, TraceRef, Vocab, END};

/// Default refusal threshold for [`self_compose`], in formula nodes.
pub const DEFAULT_NODE_BUDGET: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CompositionError {
    #[error("number of trace copies must be at least 1")]
    NoCopies,
    #[error("specification is not universally quantified")]
    NotUniversal,
    #[error("self-composition too large: {nodes} nodes exceed the budget of {budget}")]
    TooLarge { nodes: u128, budget: u64 },
    #[error("at least one observed trace is required")]
    NoTraces,
    #[error("observed traces must have equal length")]
    UnequalLengths,
}

/// A finite trace; each event is a letter over [`Alphabet::vocab`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct FiniteTrace {
    pub events: Vec<Letter>,
}

impl FiniteTrace {
    pub fn new(events: Vec<Letter>) -> Self {
        FiniteTrace { events }
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    /// The infinite trace `t · {end}^ω`.
    pub fn end_padded(&self, alphabet: &Alphabet) -> crate::logic::LassoWord {
        crate::logic::LassoWord::padded(self.events.clone(), alphabet.end_mask())
    }
}

/// `n` indexed copies `a[1] … a[n]` of a base alphabet.
///
/// Letters over the copies are laid out copy-major: copy `i` occupies bits
/// `(i-1)·|Σ| .. i·|Σ|`, each copy in base [`Alphabet::vocab`] order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexedAlphabet {
    base: Alphabet,
    n: u32,
}

impl IndexedAlphabet {
    pub fn new(base: Alphabet, n: u32) -> Self {
        assert!(n >= 1, "at least one copy");
        IndexedAlphabet { base, n }
    }

    pub fn base(&self) -> &Alphabet {
        &self.base
    }

    pub fn copies(&self) -> u32 {
        self.n
    }

    pub fn len(&self) -> usize {
        self.n as usize * self.base.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn atoms(&self) -> impl Iterator<Item = Atom> + '_ {
        (1..=self.n).flat_map(move |i| self.base.props().map(move |p| Atom::copy(p, i)))
    }

    pub fn input_atoms(&self) -> impl Iterator<Item = Atom> + '_ {
        (1..=self.n).flat_map(move |i| self.base.inputs().iter().map(move |p| Atom::copy(p.as_str(), i)))
    }

    pub fn output_atoms(&self) -> impl Iterator<Item = Atom> + '_ {
        (1..=self.n).flat_map(move |i| self.base.outputs().iter().map(move |p| Atom::copy(p.as_str(), i)))
    }

    /// Panics above [`crate::logic::MAX_ATOMS`] indexed propositions.
    pub fn vocab(&self) -> Vocab {
        Vocab::new(self.atoms())
    }

    /// Moves a base letter into copy `i`'s bits.
    pub fn place(&self, i: u32, letter: Letter) -> Letter {
        letter << ((i - 1) as usize * self.base.len())
    }

    /// Copy `i`'s part of an indexed letter, as a base letter.
    pub fn project(&self, i: u32, letter: Letter) -> Letter {
        let m = self.base.len();
        let mask = if m >= 64 { u64::MAX } else { (1 << m) - 1 };
        (letter >> ((i - 1) as usize * m)) & mask
    }
}

/// All `n^k` tuples over `[1, n]`, in lexicographic order.
pub fn copy_tuples(n: u32, k: usize) -> impl Iterator<Item = Vec<u32>> {
    let mut next = if n == 0 && k > 0 { None } else { Some(vec![1u32; k]) };
    std::iter::from_fn(move || {
        let current = next.take()?;
        let mut succ = current.clone();
        let mut pos = k;
        while pos > 0 {
            pos -= 1;
            if succ[pos] < n {
                succ[pos] += 1;
                for x in &mut succ[pos + 1..] {
                    *x = 1;
                }
                next = Some(succ);
                break;
            }
        }
        Some(current)
    })
}

/// Node count of `self_compose(spec, n)`, without building it.
pub fn composed_size(spec: &HyperSpec, n: u32) -> u128 {
    let tuples = (n as u128).saturating_pow(spec.arity() as u32);
    tuples.saturating_mul(spec.body().size() as u128).saturating_add(tuples.saturating_sub(1))
}

/// The LTL formula over `n` indexed copies equivalent to `spec` on any set of
/// at most `n` traces: the conjunction of the body instantiated with every
/// index tuple, diagonals included.
pub fn self_compose(spec: &HyperSpec, n: u32, budget: u64) -> Result<Formula, CompositionError> {
    compose_filtered(spec, n, budget, |_| true)
}

/// The conjuncts of `self_compose(spec, n)` that are new compared to
/// `self_compose(spec, n - 1)`: the tuples mentioning copy `n`.
pub fn new_conjuncts(spec: &HyperSpec, n: u32, budget: u64) -> Result<Formula, CompositionError> {
    compose_filtered(spec, n, budget, |t| t.contains(&n))
}

fn compose_filtered(
    spec: &HyperSpec,
    n: u32,
    budget: u64,
    keep: impl Fn(&[u32]) -> bool,
) -> Result<Formula, CompositionError> {
    if n == 0 {
        return Err(CompositionError::NoCopies);
    }
    if !spec.is_universal() {
        return Err(CompositionError::NotUniversal);
    }
    let nodes = composed_size(spec, n);
    if nodes > budget as u128 {
        return Err(CompositionError::TooLarge { nodes, budget });
    }
    Ok(Formula::conjunction(
        copy_tuples(n, spec.arity()).filter(|t| keep(t)).map(|t| spec.instantiate(&t)),
    ))
}

fn literal(atom: Atom, value: bool) -> Formula {
    if value {
        Formula::Atom(atom)
    } else {
        Formula::not(Formula::Atom(atom))
    }
}

fn encode_events(events: &[Letter], alphabet: &Alphabet, trace: &TraceRef) -> Vec<Formula> {
    let vocab = alphabet.vocab();
    events
        .iter()
        .enumerate()
        .map(|(j, &e)| {
            let exact = Formula::conjunction(vocab.atoms().iter().enumerate().map(|(b, a)| {
                literal(Atom { prop: a.prop.clone(), trace: trace.clone() }, e & (1 << b) != 0)
            }));
            Formula::next_n(j, exact)
        })
        .collect()
}

/// `⋀_j X^j (exact event j on copy idx)`; `true` for the empty trace.
pub fn encode_trace_prefix(t: &FiniteTrace, idx: u32, alphabet: &Alphabet) -> Formula {
    Formula::conjunction(encode_events(&t.events, alphabet, &TraceRef::Copy(idx)))
}

/// [`encode_trace_prefix`] followed by `X^|t| G end` on copy `idx`.
pub fn encode_finished_session(t: &FiniteTrace, idx: u32, alphabet: &Alphabet) -> Formula {
    finished(&t.events, alphabet, &TraceRef::Copy(idx))
}

fn finished(events: &[Letter], alphabet: &Alphabet, trace: &TraceRef) -> Formula {
    let end = Formula::Atom(Atom { prop: END.to_string(), trace: trace.clone() });
    let mut parts = encode_events(events, alphabet, trace);
    parts.push(Formula::next_n(events.len(), Formula::globally(end)));
    Formula::conjunction(parts)
}

fn fresh_vars(taken: &[&str], stem: &str, count: usize) -> Vec<String> {
    let mut out = Vec::with_capacity(count);
    let mut i = 1;
    while out.len() < count {
        let name = format!("{stem}{i}");
        if !taken.contains(&name.as_str()) {
            out.push(name);
        }
        i += 1;
    }
    out
}

/// `spec ∧ ∀π.∀π′. (⋀_o o_π ↔ o_π′) W (⋁_i ¬(i_π ↔ i_π′))`: outputs must be
/// a function of the inputs seen so far. Returned in prenex form with two
/// fresh trace variables; `end` is not treated as an output.
pub fn build_undecidability_gadget(spec: &HyperSpec) -> Result<HyperSpec, CompositionError> {
    if !spec.is_universal() {
        return Err(CompositionError::NotUniversal);
    }
    let taken: Vec<&str> = spec.vars().collect();
    let fresh = fresh_vars(&taken, "g", 2);
    let (l, r) = (&fresh[0], &fresh[1]);
    let alphabet = spec.alphabet();
    let same = |p: &String| {
        Formula::iff(Formula::Atom(Atom::var(p.as_str(), l.as_str())), Formula::Atom(Atom::var(p.as_str(), r.as_str())))
    };
    let outputs = Formula::conjunction(alphabet.outputs().iter().filter(|o| *o != END).map(same));
    let diverge = Formula::disjunction(alphabet.inputs().iter().map(|i| Formula::not(same(i))));
    let body = Formula::and(spec.body().clone(), Formula::weak_until(outputs, diverge));
    let vars: Vec<String> = spec.vars().map(String::from).chain(fresh.iter().cloned()).collect();
    Ok(HyperSpec::forall(vars, body, alphabet.clone()))
}

/// `∃p1…∃pn ∀u1…∀uk. φ ∧ ⋀_k prefix(t_k, p_k)` as text in the formula syntax.
/// The universal variables of `spec` are renamed to `u1…uk`.
pub fn emit_parallel_sat_encoding(spec: &HyperSpec, observed: &[FiniteTrace]) -> Result<String, CompositionError> {
    if !spec.is_universal() {
        return Err(CompositionError::NotUniversal);
    }
    let first = observed.first().ok_or(CompositionError::NoTraces)?;
    if observed.iter().any(|t| t.len() != first.len()) {
        return Err(CompositionError::UnequalLengths);
    }
    let traces: Vec<Formula> = observed
        .iter()
        .enumerate()
        .map(|(k, t)| Formula::conjunction(encode_events(&t.events, spec.alphabet(), &TraceRef::Var(format!("p{}", k + 1)))))
        .collect();
    Ok(emit(spec, observed.len(), traces))
}

/// The sequential variant: finished sessions are pinned with their `end`
/// padding, the live session by its prefix, all conjoined with `φ`.
pub fn emit_sequential_sat_encoding(
    spec: &HyperSpec,
    finished_sessions: &[FiniteTrace],
    current: &FiniteTrace,
) -> Result<String, CompositionError> {
    if !spec.is_universal() {
        return Err(CompositionError::NotUniversal);
    }
    let alphabet = spec.alphabet();
    let mut parts: Vec<Formula> = finished_sessions
        .iter()
        .enumerate()
        .map(|(k, t)| finished(&t.events, alphabet, &TraceRef::Var(format!("p{}", k + 1))))
        .collect();
    let n = finished_sessions.len() + 1;
    parts.push(Formula::conjunction(encode_events(&current.events, alphabet, &TraceRef::Var(format!("p{n}")))));
    Ok(emit(spec, n, parts))
}

fn emit(spec: &HyperSpec, n: usize, traces: Vec<Formula>) -> String {
    let renamed: Vec<String> = (1..=spec.arity()).map(|j| format!("u{j}")).collect();
    let body = spec.body().map_atoms(&mut |a| match &a.trace {
        TraceRef::Var(v) => {
            let j = spec.vars().position(|w| w == v).expect("bound variable");
            Formula::Atom(Atom::var(a.prop.as_str(), renamed[j].as_str()))
        }
        _ => Formula::Atom(a.clone()),
    });
    let prefix = (1..=n)
        .map(|k| (QuantifierKind::Exists, format!("p{k}")))
        .chain(renamed.iter().map(|u| (QuantifierKind::Forall, u.clone())));
    let full = Formula::and(body, Formula::conjunction(traces));
    HyperSpec::with_prefix(prefix, full, spec.alphabet().clone()).to_string()
}
