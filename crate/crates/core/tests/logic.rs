mod common;

use common::*;
use hyperfence::logic::*;
use proptest::prelude::*;

fn atoms() -> Vec<Atom> {
    vec![Atom::copy("a", 1), Atom::copy("b", 2)]
}

fn od() -> HyperSpec {
    parse_spec_file("inputs: i\noutputs: o\nspec: forall p1. forall p2. (o[p1] <-> o[p2]) W !(i[p1] <-> i[p2])\n").unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn printed_formulas_reparse(seed in any::<u64>()) {
        let f = random_formula(&mut rng(seed), &atoms(), 6);
        prop_assert_eq!(parse_ltl(&f.to_string()).unwrap(), f);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn nnf_keeps_semantics(seed in any::<u64>()) {
        let f = random_formula(&mut rng(seed), &atoms(), 5);
        let g = to_nnf(&f);
        prop_assert!(is_nnf(&g));
        let vocab = Vocab::new(atoms());
        for w in lassos(4, 3, 2) {
            prop_assert_eq!(evaluate_ltl(&f, &w, &vocab), evaluate_ltl(&g, &w, &vocab), "{} on {}", f, w);
        }
    }

    #[test]
    fn evaluator_matches_brute_force(seed in any::<u64>()) {
        let f = random_formula(&mut rng(seed), &atoms(), 4);
        let vocab = Vocab::new(atoms());
        for w in lassos(4, 2, 2) {
            prop_assert_eq!(evaluate_ltl(&f, &w, &vocab), brute_ltl(&f, &w, &vocab, 0));
        }
    }

    #[test]
    fn universal_specs_are_downward_closed(seed in any::<u64>()) {
        let mut r = rng(seed);
        let spec = od();
        let traces: Vec<LassoWord> = (0..3)
            .map(|_| {
                let stem = (0..below(&mut r, 4)).map(|_| below(&mut r, 4)).collect();
                let cycle = (0..1 + below(&mut r, 2)).map(|_| below(&mut r, 4)).collect();
                LassoWord::new(stem, cycle)
            })
            .collect();
        if evaluate_hyperltl(&spec, &traces) {
            for skip in 0..3 {
                let sub: Vec<LassoWord> = traces.iter().enumerate().filter(|(k, _)| *k != skip).map(|(_, t)| t.clone()).collect();
                prop_assert!(evaluate_hyperltl(&spec, &sub));
            }
        }
    }
}

#[test]
fn od_verdicts_match_pairwise_scanner() {
    // Padded finite traces, so the scanner sees the whole word.
    let mut r = rng(9);
    let spec = od();
    let mut violated = 0;
    for _ in 0..300 {
        let traces: Vec<Vec<Letter>> = (0..3).map(|_| (0..4).map(|_| below(&mut r, 4)).collect()).collect();
        let words: Vec<LassoWord> = traces.iter().map(|t| LassoWord::padded(t.clone(), 0)).collect();
        let mut padded = traces.clone();
        for t in &mut padded {
            t.push(0);
        }
        let ok = od_holds(&padded);
        violated += usize::from(!ok);
        assert_eq!(evaluate_hyperltl(&spec, &words), ok, "{traces:?}");
    }
    assert!(violated > 0 && violated < 300);
}

#[test]
fn nnf_duals() {
    let a = Formula::Atom(Atom::plain("a"));
    let b = Formula::Atom(Atom::plain("b"));
    assert_eq!(
        to_nnf(&Formula::not(Formula::until(a.clone(), b.clone()))),
        Formula::release(Formula::not(a.clone()), Formula::not(b))
    );
    assert_eq!(to_nnf(&Formula::not(Formula::next(a.clone()))), Formula::next(Formula::not(a)));
}

#[test]
fn safety_fragment_examples() {
    assert!(classify_syntactic_safety(od().body()));
    assert!(classify_syntactic_safety(&parse_ltl("G a").unwrap()));
    assert!(!classify_syntactic_safety(&parse_ltl("G (o -> F i)").unwrap()));
}

#[test]
fn evaluation_examples() {
    let vocab = Vocab::new([Atom::plain("a"), Atom::plain("b")]);
    let f = |s: &str| parse_ltl(s).unwrap();
    assert!(evaluate_ltl(&f("G a"), &LassoWord::new(vec![], vec![1]), &vocab));
    assert!(!evaluate_ltl(&f("a U b"), &LassoWord::new(vec![1, 1], vec![0]), &vocab));
    assert!(!evaluate_ltl(&f("F G a"), &LassoWord::new(vec![0], vec![1, 0]), &vocab));
}

#[test]
fn symmetry_spec_parses() {
    let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures/bakery_symmetry.hltl")).unwrap();
    let spec = parse_spec_file(&text).unwrap();
    assert_eq!(spec.arity(), 2);
    assert_eq!(spec.alphabet().inputs().len(), 5);
    assert!(classify_syntactic_safety(spec.body()));
    assert_eq!(parse_spec_file(&text).unwrap(), spec);
}
