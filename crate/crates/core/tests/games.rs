mod common;

use common::*;
use hyperfence::automata::{ltl_to_dpa, Dpa, Limits};
use hyperfence::compose::{self_compose, DEFAULT_NODE_BUDGET};
use hyperfence::games::*;
use hyperfence::logic::{parse_ltl, parse_spec_file, Atom, Formula, Vocab};

const OD: &str = "inputs: i\noutputs: o\nspec: forall p1. forall p2. (o[p1] <-> o[p2]) W !(i[p1] <-> i[p2])\n";

fn od_game() -> ParityGame {
    let spec = parse_spec_file(OD).unwrap();
    let f = self_compose(&spec, 2, DEFAULT_NODE_BUDGET).unwrap();
    let (d, _) = ltl_to_dpa(&f, &Limits::default()).unwrap();
    dpa_to_game(&d, &[Atom::copy("i", 1), Atom::copy("i", 2)], &[Atom::copy("o", 1), Atom::copy("o", 2)]).unwrap()
}

fn node(a: &Arena, label: &str) -> u32 {
    (0..a.len() as u32).find(|&v| a.label(v) == label).unwrap_or_else(|| panic!("no node {label}"))
}

#[test]
fn od_game_matches_golden_file() {
    let g = od_game();
    assert_eq!(g.to_pgsolver(), include_str!("data/od_game.pg"));
    assert_eq!(g.len(), 15);
}

#[test]
fn od_game_regions_follow_output_agreement() {
    let a = parse_pgsolver(include_str!("data/od_game.pg")).unwrap();
    let s = a.solve();
    for l in ["q1", "q1, {}", "q1, {o[1], o[2]}", "q2", "q2, {}", "q2, {o[1]}", "q2, {o[2]}", "q2, {o[1], o[2]}"] {
        assert!(s.wins(Player::P0, node(&a, l)), "{l}");
    }
    for l in ["q1, {o[1]}", "q1, {o[2]}", "q0", "q0, {}", "q0, {o[1], o[2]}"] {
        assert!(s.wins(Player::P1, node(&a, l)), "{l}");
    }
    let q1 = node(&a, "q1");
    let chosen = a.label(a.succ(q1)[s.choice(q1).unwrap() as usize]);
    assert!(chosen == "q1, {}" || chosen == "q1, {o[1], o[2]}");
    assert!(strategy_is_winning(&a, &s));
    // Safety solving may pick other moves; the regions must agree.
    assert_eq!(a.solve_safety().region(Player::P0), s.region(Player::P0));
}

#[test]
fn zielonka_agrees_with_positional_enumeration() {
    let mut rng = rng(2024);
    for _ in 0..100 {
        let g = random_game(&mut rng, 3);
        let s = solve_parity(&g);
        let expected = brute_force_winners(g.arena());
        for v in 0..g.len() as u32 {
            assert_eq!(s.winner(v), expected[v as usize], "node {v} of {:?}", g.arena());
        }
        assert!(strategy_is_winning(g.arena(), &s));
    }
}

#[test]
fn regions_do_not_depend_on_node_order() {
    let mut rng = rng(99);
    for _ in 0..50 {
        let g = random_game(&mut rng, 4);
        let a = g.arena();
        let n = a.len() as u32;
        // Reverse all ids except the initial node's.
        let perm: Vec<u32> = (0..n).map(|v| if v == 0 { 0 } else { n - v }).collect();
        let mut owner = vec![Player::P0; n as usize];
        let mut color = vec![0; n as usize];
        let mut succ = vec![Vec::new(); n as usize];
        for v in 0..n {
            let p = perm[v as usize] as usize;
            owner[p] = a.owner(v);
            color[p] = a.color(v);
            succ[p] = a.succ(v).iter().map(|&w| perm[w as usize]).collect();
        }
        let b = Arena::new(owner, color, succ, (0..n).map(|v| v.to_string()).collect());
        let (sa, sb) = (a.solve(), b.solve());
        for v in 0..n {
            assert_eq!(sa.winner(v), sb.winner(perm[v as usize]));
        }
    }
}

fn random_safety_game(rng: &mut rand_xoshiro::SplitMix64) -> ParityGame {
    let g = random_game(rng, 1);
    let a = g.arena();
    // Make colour-1 nodes absorbing by routing them into a colour-1 pair.
    let n = a.len() as u32;
    let mut owner: Vec<Player> = (0..n).map(|v| a.owner(v)).collect();
    let mut color: Vec<u32> = (0..n).map(|v| a.color(v)).collect();
    let mut succ: Vec<Vec<u32>> = (0..n).map(|v| a.succ(v).to_vec()).collect();
    owner.extend([Player::P0, Player::P1]);
    color.extend([1, 1]);
    succ.push(vec![n + 1; 1 << g.outputs().len()]);
    succ.push(vec![n; 1 << g.inputs().len()]);
    for v in 0..n as usize {
        if color[v] == 1 {
            let sink = if owner[v] == Player::P0 { n + 1 } else { n };
            succ[v].iter_mut().for_each(|w| *w = sink);
        }
    }
    let label = (0..n + 2).map(|v| v.to_string()).collect();
    ParityGame::new(g.inputs().to_vec(), g.outputs().to_vec(), Arena::new(owner, color, succ, label), 0).unwrap()
}

#[test]
fn safety_solver_matches_parity_solver() {
    let mut rng = rng(7);
    for _ in 0..200 {
        let g = random_safety_game(&mut rng);
        let s = solve_safety(&g).unwrap();
        assert_eq!(s.region(Player::P0), solve_parity(&g).region(Player::P0));
        assert!(strategy_is_winning(g.arena(), &s));
    }
}

#[test]
fn trivial_safety_games() {
    let two = |c0, c1| {
        let a = Arena::new(vec![Player::P0, Player::P1], vec![c0, c1], vec![vec![1], vec![0]], vec!["a".into(), "b".into()]);
        ParityGame::new(vec![], vec![], a, 0).unwrap()
    };
    assert_eq!(solve_safety(&two(0, 0)).unwrap().region(Player::P0), vec![0, 1]);
    assert_eq!(solve_safety(&two(1, 1)).unwrap().region(Player::P1), vec![0, 1]);
    assert_eq!(solve_safety(&two(2, 2)), Err(GameError::NotSafety));
    assert_eq!(solve_safety(&two(0, 1)), Err(GameError::NotSafety));
}

#[test]
fn rejects_malformed_games() {
    let a = Arena::new(vec![Player::P0, Player::P0], vec![0, 0], vec![vec![1], vec![0]], vec!["a".into(), "b".into()]);
    assert_eq!(ParityGame::new(vec![], vec![], a, 0), Err(GameError::NotAlternating(0)));
    let a = Arena::new(vec![Player::P0, Player::P1], vec![0, 0], vec![vec![1], vec![0]], vec!["a".into(), "b".into()]);
    assert!(matches!(ParityGame::new(vec![], vec![Atom::plain("o")], a, 0), Err(GameError::WrongMoveCount { .. })));
}

#[test]
fn all_accepting_automaton_gives_two_state_game() {
    let d = Dpa::new(Vocab::new([]), 0, vec![0], vec![0]).unwrap();
    let g = dpa_to_game(&d, &[], &[]).unwrap();
    assert_eq!(g.len(), 2);
    assert_eq!((g.arena().color(0), g.arena().color(1)), (0, 0));
    assert!(solve_parity(&g).wins(Player::P0, g.initial()));
}

#[test]
fn uncovered_atoms_are_refused() {
    let (d, _) = ltl_to_dpa(&parse_ltl("G (a -> b)").unwrap(), &Limits::default()).unwrap();
    assert_eq!(dpa_to_game(&d, &[Atom::plain("a")], &[]), Err(GameError::UncoveredAtom("b".into())));
    let a = Atom::plain("a");
    assert_eq!(
        dpa_to_game(&d, &[a.clone()], &[a, Atom::plain("b")]),
        Err(GameError::OverlappingAtom("a".into()))
    );
}

/// Random plays of the game, read back as letters, follow the automaton
/// run and show the colours of its states.
#[test]
fn plays_project_to_automaton_runs() {
    let f = parse_ltl("G F (a & X b) | F G !a").unwrap();
    let (d, _) = ltl_to_dpa(&f, &Limits::default()).unwrap();
    let (ins, outs) = ([Atom::plain("a")], [Atom::plain("b")]);
    let g = dpa_to_game(&d, &ins, &outs).unwrap();
    let bit = |a: &Atom| d.vocab().index_of(a).map_or(0, |b| 1u64 << b);
    let mut rng = rng(1);
    for _ in 0..1000 {
        let (mut v, mut q) = (g.initial(), d.initial());
        for _ in 0..20 {
            assert_eq!(g.arena().label(v), format!("q{q}"));
            assert_eq!(g.arena().color(v), d.color(q));
            let (o, i) = (below(&mut rng, 2) as u32, below(&mut rng, 2) as u32);
            let w = g.step(v, o);
            assert_eq!(g.arena().color(w), d.color(q));
            v = g.step(w, i);
            q = d.succ(q, if o == 1 { bit(&outs[0]) } else { 0 } | if i == 1 { bit(&ins[0]) } else { 0 });
        }
    }
}

#[test]
fn restriction_keeps_winning_plays_and_sinks_the_rest() {
    let g = od_game();
    let s = solve_safety(&g).unwrap();
    let r = restrict_to_winning_region(&g, &s).unwrap();
    assert_eq!(r.len(), s.region(Player::P0).len() + 2);
    assert!(r.is_safety());
    let rs = solve_safety(&r).unwrap();
    let a = r.arena();
    for v in 0..a.len() as u32 {
        assert_eq!(rs.wins(Player::P0, v), a.label(v) != "sink", "{}", a.label(v));
    }
    let bad = Arena::new(vec![Player::P0, Player::P1], vec![1, 1], vec![vec![1], vec![0]], vec!["x".into(), "y".into()]);
    let bad = ParityGame::new(vec![], vec![], bad, 0).unwrap();
    assert_eq!(restrict_to_winning_region(&bad, &solve_safety(&bad).unwrap()), Err(GameError::Unrealizable));
}

fn safety_formula(rng: &mut rand_xoshiro::SplitMix64, atoms: &[Atom]) -> Formula {
    loop {
        let f = hyperfence::logic::simplify(&hyperfence::logic::to_nnf(&Formula::globally(random_formula(rng, atoms, 2))));
        if hyperfence::logic::classify_syntactic_safety(&f) {
            return f;
        }
    }
}

#[test]
fn product_solution_equals_monolithic_conjunction() {
    let atoms = [Atom::plain("a"), Atom::plain("b")];
    let (ins, outs) = ([atoms[0].clone()], [atoms[1].clone()]);
    let game = |f: &Formula| {
        let (d, _) = ltl_to_dpa(f, &Limits::default()).unwrap();
        dpa_to_game(&d, &ins, &outs).unwrap()
    };
    let mut rng = rng(31);
    for _ in 0..50 {
        let (f, h) = (safety_formula(&mut rng, &atoms), safety_formula(&mut rng, &atoms));
        let product = game_product(&game(&f), &game(&h)).unwrap();
        let mono = game(&Formula::and(f.clone(), h.clone()));
        let (sp, sm) = (solve_safety(&product).unwrap(), solve_safety(&mono).unwrap());
        // Winning status depends only on the history, so it must agree along every play.
        for _ in 0..30 {
            let (mut p, mut m) = (product.initial(), mono.initial());
            for _ in 0..12 {
                assert_eq!(sp.winner(p), sm.winner(m), "{f} & {h}");
                let a = below(&mut rng, 2) as u32;
                p = product.step(p, a);
                m = mono.step(m, a);
            }
        }
    }
}

#[test]
fn product_with_trivial_game_and_with_losing_game() {
    let g = od_game();
    let t = Arena::new(vec![Player::P0, Player::P1], vec![0, 0], vec![vec![1; 4], vec![0; 4]], vec!["t".into(), "t".into()]);
    let t = ParityGame::new(g.inputs().to_vec(), g.outputs().to_vec(), t, 0).unwrap();
    let p = game_product(&g, &t).unwrap();
    assert!(solve_safety(&p).unwrap().wins(Player::P0, p.initial()));
    let bad = Arena::new(vec![Player::P0, Player::P1], vec![1, 1], vec![vec![1; 4], vec![0; 4]], vec!["x".into(), "x".into()]);
    let bad = ParityGame::new(g.inputs().to_vec(), g.outputs().to_vec(), bad, 0).unwrap();
    let p = game_product(&g, &bad).unwrap();
    assert_eq!(p.len(), 2);
    assert!(solve_safety(&p).unwrap().wins(Player::P1, p.initial()));
    let other = ParityGame::new(vec![], vec![], Arena::new(vec![Player::P0, Player::P1], vec![0, 0], vec![vec![1], vec![0]], vec!["a".into(), "b".into()]), 0).unwrap();
    assert_eq!(game_product(&g, &other), Err(GameError::AlphabetMismatch));
}
