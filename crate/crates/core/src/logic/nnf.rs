use std::collections::BTreeSet;

use super::formula::Formula;

/// Negation normal form over `∧ ∨ X U R G F` and literals.
///
/// Weak until is rewritten through release, `a W b ≡ b R (a ∨ b)`, which
/// keeps safety formulas free of `U`.
pub fn to_nnf(f: &Formula) -> Formula {
    nnf(f, false)
}

fn nnf(f: &Formula, neg: bool) -> Formula {
    use Formula::*;
    let pos = |g: &Formula| nnf(g, false);
    let ng = |g: &Formula| nnf(g, true);
    match (f, neg) {
        (True, false) | (False, true) => True,
        (True, true) | (False, false) => False,
        (Atom(a), false) => Atom(a.clone()),
        (Atom(a), true) => Formula::not(Atom(a.clone())),
        (Not(a), _) => nnf(a, !neg),
        (And(a, b), false) => Formula::and(pos(a), pos(b)),
        (And(a, b), true) => Formula::or(ng(a), ng(b)),
        (Or(a, b), false) => Formula::or(pos(a), pos(b)),
        (Or(a, b), true) => Formula::and(ng(a), ng(b)),
        (Implies(a, b), false) => Formula::or(ng(a), pos(b)),
        (Implies(a, b), true) => Formula::and(pos(a), ng(b)),
        (Iff(a, b), false) => {
            Formula::or(Formula::and(pos(a), pos(b)), Formula::and(ng(a), ng(b)))
        }
        (Iff(a, b), true) => Formula::or(Formula::and(pos(a), ng(b)), Formula::and(ng(a), pos(b))),
        (Next(a), _) => Formula::next(nnf(a, neg)),
        (Until(a, b), false) => Formula::until(pos(a), pos(b)),
        (Until(a, b), true) => Formula::release(ng(a), ng(b)),
        (Release(a, b), false) => Formula::release(pos(a), pos(b)),
        (Release(a, b), true) => Formula::until(ng(a), ng(b)),
        (WeakUntil(a, b), false) => Formula::release(pos(b), Formula::or(pos(a), pos(b))),
        (WeakUntil(a, b), true) => Formula::until(ng(b), Formula::and(ng(a), ng(b))),
        (Globally(a), false) => Formula::globally(pos(a)),
        (Globally(a), true) => Formula::finally(ng(a)),
        (Finally(a), false) => Formula::finally(pos(a)),
        (Finally(a), true) => Formula::globally(ng(a)),
    }
}

/// Whether `f` is a literal or constant and, for literals, its atom and sign.
fn literal(f: &Formula) -> Option<(&super::formula::Atom, bool)> {
    match f {
        Formula::Atom(a) => Some((a, true)),
        Formula::Not(inner) => match inner.as_ref() {
            Formula::Atom(a) => Some((a, false)),
            _ => None,
        },
        _ => None,
    }
}

/// Local rewriting of an NNF formula: constant propagation, flattening and
/// deduplication of `∧`/`∨`, complementary literals, idempotent `G`/`F`.
/// The result is language-equivalent and still in NNF.
pub fn simplify(f: &Formula) -> Formula {
    use Formula::*;
    match f {
        True | False | Atom(_) => f.clone(),
        Not(_) => f.clone(),
        And(..) => junction(f, true),
        Or(..) => junction(f, false),
        Next(a) => match simplify(a) {
            True => True,
            False => False,
            a => Formula::next(a),
        },
        Until(a, b) => match (simplify(a), simplify(b)) {
            (_, True) => True,
            (_, False) => False,
            (False, b) => b,
            (True, b) => simplify(&Formula::finally(b)),
            (a, b) if a == b => a,
            (a, b) => Formula::until(a, b),
        },
        Release(a, b) => match (simplify(a), simplify(b)) {
            (_, True) => True,
            (_, False) => False,
            (True, b) => b,
            (False, b) => simplify(&Formula::globally(b)),
            (a, b) if a == b => a,
            (a, b) => Formula::release(a, b),
        },
        Globally(a) => match simplify(a) {
            True => True,
            False => False,
            g @ Globally(_) => g,
            a => Formula::globally(a),
        },
        Finally(a) => match simplify(a) {
            True => True,
            False => False,
            g @ Finally(_) => g,
            a => Formula::finally(a),
        },
        // Not NNF; leave the derived operators alone.
        Implies(..) | Iff(..) | WeakUntil(..) => f.clone(),
    }
}

fn junction(f: &Formula, is_and: bool) -> Formula {
    let (unit, zero) = if is_and { (Formula::True, Formula::False) } else { (Formula::False, Formula::True) };
    let mut parts = Vec::new();
    collect(f, is_and, &mut parts);
    let mut seen = BTreeSet::new();
    let mut kept = Vec::new();
    for p in parts {
        let p = simplify(&p);
        if p == zero {
            return zero;
        }
        if p == unit {
            continue;
        }
        // Nested junctions of the same kind may appear after simplification.
        let mut flat = Vec::new();
        collect(&p, is_and, &mut flat);
        for q in flat {
            if seen.insert(q.clone()) {
                kept.push(q);
            }
        }
    }
    for q in &kept {
        if let Some((atom, sign)) = literal(q) {
            let complement = if sign {
                Formula::not(Formula::Atom(atom.clone()))
            } else {
                Formula::Atom(atom.clone())
            };
            if seen.contains(&complement) {
                return zero;
            }
        }
    }
    let mut it = kept.into_iter();
    match it.next() {
        None => unit,
        Some(first) => it.fold(first, |acc, g| {
            if is_and {
                Formula::and(acc, g)
            } else {
                Formula::or(acc, g)
            }
        }),
    }
}

fn collect(f: &Formula, is_and: bool, out: &mut Vec<Formula>) {
    match (f, is_and) {
        (Formula::And(a, b), true) | (Formula::Or(a, b), false) => {
            collect(a, is_and, out);
            collect(b, is_and, out);
        }
        _ => out.push(f.clone()),
    }
}

/// True iff the NNF of `f` uses no `U` and no `F`. Such formulas denote
/// safety properties; the converse does not hold.
pub fn classify_syntactic_safety(f: &Formula) -> bool {
    is_safety_nnf(&to_nnf(f))
}

pub(crate) fn is_safety_nnf(f: &Formula) -> bool {
    let mut stack = vec![f];
    while let Some(g) = stack.pop() {
        if matches!(g, Formula::Until(..) | Formula::Finally(..)) {
            return false;
        }
        stack.extend(g.children());
    }
    true
}

/// Whether `f` only uses the NNF operator set.
pub fn is_nnf(f: &Formula) -> bool {
    let mut stack = vec![f];
    while let Some(g) = stack.pop() {
        match g {
            Formula::Implies(..) | Formula::Iff(..) | Formula::WeakUntil(..) => return false,
            Formula::Not(inner) if !matches!(inner.as_ref(), Formula::Atom(_)) => return false,
            _ => stack.extend(g.children()),
        }
    }
    true
}
