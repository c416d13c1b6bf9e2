mod support;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use signalcheck::ctl::{check, counterexample, parse_formula, sat_set, to_enf, Formula, NormalFormula, SpecEntry};
use signalcheck::kripke::StateSet;
use support::*;

fn as_set(v: &[bool]) -> StateSet {
    StateSet::from_indices(v.len(), v.iter().enumerate().filter(|(_, b)| **b).map(|(i, _)| i))
}

#[test]
fn sat_set_matches_enumeration_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut compared = 0;
    for _ in 0..300 {
        let g = random_graph(&mut rng, 8);
        let ks = g.to_structure();
        for _ in 0..8 {
            let f = random_formula(&mut rng, 4);
            assert!(f.depth() <= 4);
            let expected = as_set(&oracle_eval(&g, &f));
            assert_eq!(sat_set(&ks, &f).unwrap(), expected, "formula {f} on {g:?}");
            compared += 1;
        }
    }
    assert_eq!(compared, 2400);
}

fn only_normal_ops(f: &NormalFormula) -> bool {
    // exhaustive match: adding a constructor to NormalFormula breaks this
    match f {
        NormalFormula::True | NormalFormula::Atom(_) => true,
        NormalFormula::Not(g) | NormalFormula::EX(g) | NormalFormula::EG(g) => only_normal_ops(g),
        NormalFormula::And(a, b) | NormalFormula::EU(a, b) => only_normal_ops(a) && only_normal_ops(b),
    }
}

#[test]
fn af_normal_form_agrees_with_path_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..100 {
        let g = random_graph(&mut rng, 6);
        let ks = g.to_structure();
        for atom in ATOMS {
            let f = Formula::af(Formula::atom(atom));
            assert!(only_normal_ops(&to_enf(&f)));
            assert_eq!(sat_set(&ks, &f).unwrap(), as_set(&oracle_eval(&g, &f)));
        }
    }
}

#[test]
fn counterexamples_are_valid_on_random_structures() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut failing = 0;
    for _ in 0..300 {
        let g = random_graph(&mut rng, 8);
        let ks = g.to_structure();
        let inner = random_formula(&mut rng, 2);
        for f in [Formula::ag(inner.clone()), Formula::af(inner.clone())] {
            let spec = SpecEntry {
                name: None,
                source_text: f.to_string(),
                formula: f.clone(),
            };
            let result = check(&ks, &spec).unwrap();
            let trace = counterexample(&ks, &spec, &result).unwrap();
            assert_eq!(trace.is_none(), result.holds);
            let Some(trace) = trace else { continue };
            failing += 1;
            assert!(ks.is_valid_trace(&trace));
            assert!(ks.initial().contains(trace.steps[0].state));
            let inner_sat = sat_set(&ks, &inner).unwrap();
            match f {
                Formula::AG(_) => {
                    assert!(!inner_sat.contains(trace.last_state().unwrap()));
                    assert!(trace.steps[..trace.len() - 1]
                        .iter()
                        .all(|s| inner_sat.contains(s.state)));
                    let dist = oracle_distance(&g, &g.initial, &oracle_eval(&g, &Formula::not(inner.clone())));
                    assert_eq!(Some(trace.len() - 1), dist);
                }
                _ => {
                    assert!(trace.loop_back.is_some());
                    assert!(trace.steps.iter().all(|s| !inner_sat.contains(s.state)));
                }
            }
        }
    }
    assert!(failing > 100, "only {failing} failing specs exercised");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn prop_sat_matches_oracle(g in graph_strategy(8), f in formula_strategy(4)) {
        let ks = g.to_structure();
        prop_assert_eq!(sat_set(&ks, &f).unwrap(), as_set(&oracle_eval(&g, &f)));
    }

    #[test]
    fn prop_duality_and_fixpoints(g in graph_strategy(8)) {
        let ks = g.to_structure();
        for atom in ATOMS {
            let p = Formula::atom(atom);
            let sat_p = sat_set(&ks, &p).unwrap();
            let ag = sat_set(&ks, &Formula::ag(p.clone())).unwrap();
            let eu = sat_set(&ks, &Formula::eu(Formula::True, Formula::not(p.clone()))).unwrap();
            prop_assert_eq!(&ag, &eu.complement());

            let ef = sat_set(&ks, &Formula::ef(p.clone())).unwrap();
            prop_assert!(sat_p.is_subset(&ef));
            prop_assert_eq!(&ef, &sat_p.union(&ks.pre_exists(&ef)));

            let eg = sat_set(&ks, &Formula::eg(p.clone())).unwrap();
            prop_assert!(eg.is_subset(&sat_p));
            prop_assert_eq!(&eg, &sat_p.intersection(&ks.pre_exists(&eg)));
        }
    }

    #[test]
    fn prop_pre_exists_monotone(g in graph_strategy(8), a in prop::collection::vec(any::<bool>(), 8), b in prop::collection::vec(any::<bool>(), 8)) {
        let ks = g.to_structure();
        let n = ks.state_count();
        let small = as_set(&a[..n]);
        let large = small.union(&as_set(&b[..n]));
        prop_assert!(ks.pre_exists(&small).is_subset(&ks.pre_exists(&large)));
    }

    #[test]
    fn prop_structure_is_total_and_transposed(g in graph_strategy(8)) {
        let ks = g.to_structure();
        for s in 0..ks.state_count() {
            prop_assert!(ks.successors(s).count() >= 1);
            for t in 0..ks.state_count() {
                prop_assert_eq!(ks.successors(s).any(|x| x == t), ks.predecessors(t).any(|x| x == s));
            }
        }
    }

    #[test]
    fn prop_shortest_path_is_minimal(g in graph_strategy(8), target in prop::collection::vec(any::<bool>(), 8)) {
        let ks = g.to_structure();
        let to = &target[..g.n];
        let path = ks.shortest_path(ks.initial(), &as_set(to));
        let expected = oracle_distance(&g, &g.initial, to);
        prop_assert_eq!(path.as_ref().map(|t| t.len() - 1), expected);
        if let Some(t) = path {
            prop_assert!(ks.is_valid_trace(&t));
            prop_assert!(ks.initial().contains(t.steps[0].state));
            prop_assert!(to[t.last_state().unwrap()]);
        }
    }

    #[test]
    fn prop_lasso_matches_enumeration(g in graph_strategy(8), within in prop::collection::vec(any::<bool>(), 8)) {
        let ks = g.to_structure();
        let within = &within[..g.n];
        let lasso = ks.find_lasso(ks.initial(), &as_set(within));
        prop_assert_eq!(lasso.is_some(), oracle_lasso_exists(&g, &g.initial, within));
        if let Some(t) = lasso {
            prop_assert!(ks.is_valid_trace(&t));
            prop_assert!(t.loop_back.is_some());
            prop_assert!(ks.initial().contains(t.steps[0].state));
            prop_assert!(t.steps.iter().all(|s| within[s.state]));
        }
    }

    #[test]
    fn prop_pretty_print_round_trips(f in formula_strategy(5)) {
        let printed = f.to_string();
        let reparsed = parse_formula(&printed).unwrap();
        prop_assert_eq!(&reparsed, &f);
        prop_assert_eq!(reparsed.to_string(), printed);
    }
}

#[test]
fn comparison_atoms_round_trip() {
    for text in [
        "AG (light0.wait <= 54)",
        "E [turn != 2 U counter > 3]",
        "!(x = -1 | y >= z)",
    ] {
        let f = parse_formula(text).unwrap();
        assert_eq!(parse_formula(&f.to_string()).unwrap(), f);
    }
}
