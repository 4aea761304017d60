use std::collections::BTreeSet;
use std::fmt;

/// What an atom's proposition is attached to.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TraceRef {
    /// Plain proposition, as used on a single trace.
    None,
    /// Trace variable of a quantified hyper formula, written `a[pi]`.
    Var(String),
    /// Resolved copy index after self-composition, written `a[2]`.
    Copy(u32),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Atom {
    pub prop: String,
    pub trace: TraceRef,
}

impl Atom {
    pub fn plain(prop: impl Into<String>) -> Self {
        Atom { prop: prop.into(), trace: TraceRef::None }
    }

    pub fn var(prop: impl Into<String>, var: impl Into<String>) -> Self {
        Atom { prop: prop.into(), trace: TraceRef::Var(var.into()) }
    }

    pub fn copy(prop: impl Into<String>, copy: u32) -> Self {
        Atom { prop: prop.into(), trace: TraceRef::Copy(copy) }
    }

    pub fn copy_index(&self) -> Option<u32> {
        match self.trace {
            TraceRef::Copy(i) => Some(i),
            _ => None,
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.trace {
            TraceRef::None => write!(f, "{}", self.prop),
            TraceRef::Var(v) => write!(f, "{}[{}]", self.prop, v),
            TraceRef::Copy(i) => write!(f, "{}[{}]", self.prop, i),
        }
    }
}

/// Quantifier-free temporal formula.
///
/// Binary connectives are kept binary so that node counts are exact; the
/// derived operators (`->`, `<->`, `W`, `G`, `F`) are first-class nodes and
/// only disappear in [`to_nnf`](crate::logic::to_nnf).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    True,
    False,
    Atom(Atom),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Next(Box<Formula>),
    Until(Box<Formula>, Box<Formula>),
    WeakUntil(Box<Formula>, Box<Formula>),
    Release(Box<Formula>, Box<Formula>),
    Globally(Box<Formula>),
    Finally(Box<Formula>),
}

use Formula::*;

impl Formula {
    pub fn atom(a: Atom) -> Self {
        Atom(a)
    }

    pub fn not(f: Formula) -> Self {
        Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Self {
        Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Self {
        Iff(Box::new(a), Box::new(b))
    }

    pub fn next(f: Formula) -> Self {
        Next(Box::new(f))
    }

    /// `X^j f`.
    pub fn next_n(j: usize, f: Formula) -> Self {
        (0..j).fold(f, |acc, _| Formula::next(acc))
    }

    pub fn until(a: Formula, b: Formula) -> Self {
        Until(Box::new(a), Box::new(b))
    }

    pub fn weak_until(a: Formula, b: Formula) -> Self {
        WeakUntil(Box::new(a), Box::new(b))
    }

    pub fn release(a: Formula, b: Formula) -> Self {
        Release(Box::new(a), Box::new(b))
    }

    pub fn globally(f: Formula) -> Self {
        Globally(Box::new(f))
    }

    pub fn finally(f: Formula) -> Self {
        Finally(Box::new(f))
    }

    /// Left-nested conjunction; the empty conjunction is `true`.
    pub fn conjunction<I: IntoIterator<Item = Formula>>(items: I) -> Self {
        let mut it = items.into_iter();
        match it.next() {
            None => True,
            Some(first) => it.fold(first, Formula::and),
        }
    }

    /// Left-nested disjunction; the empty disjunction is `false`.
    pub fn disjunction<I: IntoIterator<Item = Formula>>(items: I) -> Self {
        let mut it = items.into_iter();
        match it.next() {
            None => False,
            Some(first) => it.fold(first, Formula::or),
        }
    }

    pub fn children(&self) -> Vec<&Formula> {
        match self {
            True | False | Atom(_) => vec![],
            Not(a) | Next(a) | Globally(a) | Finally(a) => vec![a],
            And(a, b)
            | Or(a, b)
            | Implies(a, b)
            | Iff(a, b)
            | Until(a, b)
            | WeakUntil(a, b)
            | Release(a, b) => vec![a, b],
        }
    }

    /// Node count.
    pub fn size(&self) -> usize {
        let mut count = 0;
        let mut stack = vec![self];
        while let Some(f) = stack.pop() {
            count += 1;
            stack.extend(f.children());
        }
        count
    }

    pub fn depth(&self) -> usize {
        1 + self.children().iter().map(|c| c.depth()).max().unwrap_or(0)
    }

    pub fn atoms(&self) -> BTreeSet<Atom> {
        let mut out = BTreeSet::new();
        let mut stack = vec![self];
        while let Some(f) = stack.pop() {
            if let Atom(a) = f {
                out.insert(a.clone());
            }
            stack.extend(f.children());
        }
        out
    }

    /// Rebuilds the formula with every atom replaced by `g(atom)`.
    pub fn map_atoms<G: FnMut(&Atom) -> Formula>(&self, g: &mut G) -> Formula {
        let b = |f: &Formula, g: &mut G| Box::new(f.map_atoms(g));
        match self {
            True => True,
            False => False,
            Atom(a) => g(a),
            Not(a) => Not(b(a, g)),
            Next(a) => Next(b(a, g)),
            Globally(a) => Globally(b(a, g)),
            Finally(a) => Finally(b(a, g)),
            And(x, y) => {
                let x = b(x, g);
                And(x, b(y, g))
            }
            Or(x, y) => {
                let x = b(x, g);
                Or(x, b(y, g))
            }
            Implies(x, y) => {
                let x = b(x, g);
                Implies(x, b(y, g))
            }
            Iff(x, y) => {
                let x = b(x, g);
                Iff(x, b(y, g))
            }
            Until(x, y) => {
                let x = b(x, g);
                Until(x, b(y, g))
            }
            WeakUntil(x, y) => {
                let x = b(x, g);
                WeakUntil(x, b(y, g))
            }
            Release(x, y) => {
                let x = b(x, g);
                Release(x, b(y, g))
            }
        }
    }

    /// Flattens a (possibly nested) conjunction into its conjuncts.
    pub fn conjuncts(&self) -> Vec<&Formula> {
        let mut out = Vec::new();
        let mut stack = vec![self];
        while let Some(f) = stack.pop() {
            match f {
                And(a, b) => {
                    stack.push(b);
                    stack.push(a);
                }
                other => out.push(other),
            }
        }
        out
    }
}

impl From<Atom> for Formula {
    fn from(a: Atom) -> Self {
        Atom(a)
    }
}

// Binary nodes are always parenthesised, so the printed text reparses to the
// same tree regardless of associativity.
impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            True => write!(f, "true"),
            False => write!(f, "false"),
            Atom(a) => write!(f, "{a}"),
            Not(a) => write!(f, "!{a}"),
            Next(a) => write!(f, "X {a}"),
            Globally(a) => write!(f, "G {a}"),
            Finally(a) => write!(f, "F {a}"),
            And(a, b) => write!(f, "({a} & {b})"),
            Or(a, b) => write!(f, "({a} | {b})"),
            Implies(a, b) => write!(f, "({a} -> {b})"),
            Iff(a, b) => write!(f, "({a} <-> {b})"),
            Until(a, b) => write!(f, "({a} U {b})"),
            WeakUntil(a, b) => write!(f, "({a} W {b})"),
            Release(a, b) => write!(f, "({a} R {b})"),
        }
    }
}
