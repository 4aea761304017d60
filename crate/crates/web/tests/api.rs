use hyperfence_web::*;

const OD: &str = "inputs: i\noutputs: o\nspec: forall p1. forall p2. (o[p1] <-> o[p2]) W !(i[p1] <-> i[p2])\n";

#[test]
fn inspect_reports_the_composition() {
    let r = inspect(OD, 2).unwrap();
    assert_eq!(r.quantifiers, 2);
    assert!(r.safety);
    assert!(r.composed.contains("o[1] <-> o[2]"));
    assert_eq!(r.outputs, vec!["o", "end"]);
}

#[test]
fn solve_reports_the_game() {
    let r = solve(OD, 2).unwrap();
    assert!(r.realizable);
    assert_eq!(r.nodes, 15);
    assert!(r.pgsolver.starts_with("parity 14;"));
    let bad = "inputs: i\noutputs: o\nspec: forall p. G (o[p] <-> i[p])\n";
    assert!(!solve(bad, 1).unwrap().realizable);
}

#[test]
fn enforce_corrects_disagreement() {
    let r = enforce(OD, 2, "O: o|-\nI: -|-\nO: -|-\nI: -|-\n").unwrap();
    assert_eq!(r.intervention, Some(0));
    assert!(r.output.lines().next().unwrap().ends_with("#enforced"));
}

#[test]
fn errors_become_json() {
    let out = inspect_json("spec: nonsense", 2);
    assert!(out.starts_with("{\"error\":"), "{out}");
    assert!(solve_json(OD, 9).contains("between 1 and"));
    assert!(enforce_json(OD, 2, "O: -|-\nI: -|-\n").contains("\"steps\":1"));
}
