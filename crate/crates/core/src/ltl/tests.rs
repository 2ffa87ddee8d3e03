use std::str::FromStr;

use super::count::*;
use super::succinct::*;
use super::tableau::*;
use super::*;
use crate::circuit::increment_circuit;
use crate::oracle::{is_lexicographic_period, naive_find_model, naive_ltl_eval};
use crate::seq::SeqKind;

fn lasso(vars: &[&str], initial: &[&str], period: &[&str]) -> LassoModel {
    LassoModel::new(
        vars.iter().map(|v| v.to_string()).collect(),
        initial.iter().map(|s| State::parse(s).unwrap()).collect(),
        period.iter().map(|s| State::parse(s).unwrap()).collect(),
    )
    .unwrap()
}

fn parse(text: &str) -> Ltl {
    Ltl::parse(text).unwrap()
}

#[test]
fn recurrent_truth_on_a_constant_loop() {
    let m = lasso(&["x"], &[], &["1"]);
    assert!(ltl_eval(&parse("G F x"), &m, 0).unwrap());
    assert!(ltl_eval(&parse("G x"), &m, 0).unwrap());
}

#[test]
fn until_holds_across_the_initial_part() {
    // a is true in all points before b becomes true
    let m = lasso(&["a", "b"], &["10", "10", "01"], &["00"]);
    assert!(ltl_eval(&parse("a U b"), &m, 0).unwrap());
    assert!(!ltl_eval(&parse("a U b"), &m, 3).unwrap());
}

#[test]
fn chained_next_pins_a_prefix() {
    // a false twice, then true twice (and the period keeps it true)
    let m = lasso(&["a"], &["0", "0", "1"], &["1"]);
    let f = parse("!a & X !a & X X a & X X X a");
    assert!(ltl_eval(&f, &m, 0).unwrap());
}

#[test]
fn position_out_of_range_errors() {
    let m = lasso(&["a"], &[], &["1"]);
    assert!(matches!(
        ltl_eval(&parse("a"), &m, 1),
        Err(LtlError::PositionRange { pos: 1, len: 1 })
    ));
}

#[test]
fn eventually_and_globally_match_until_definitions() {
    let mut rng = crate::random::rng_from_seed(41);
    let vars: Vec<String> = vec!["a".into(), "b".into()];
    for _ in 0..60 {
        let m = crate::random::random_lasso(&mut rng, &vars, 2, 3);
        let g = crate::random::random_ltl(&mut rng, &vars, 2);
        let ev = Ltl::eventually(g.clone());
        let ev_def = Ltl::until(Ltl::True, g.clone());
        let gl = Ltl::globally(g.clone());
        let gl_def = Ltl::not(Ltl::until(Ltl::True, Ltl::not(g.clone())));
        for pos in 0..m.len() {
            assert_eq!(
                ltl_eval(&ev, &m, pos).unwrap(),
                ltl_eval(&ev_def, &m, pos).unwrap()
            );
            assert_eq!(
                ltl_eval(&gl, &m, pos).unwrap(),
                ltl_eval(&gl_def, &m, pos).unwrap()
            );
        }
    }
}

#[test]
fn evaluator_agrees_with_naive_recursion() {
    let mut rng = crate::random::rng_from_seed(42);
    let vars: Vec<String> = vec!["a".into(), "b".into(), "c".into()];
    for round in 0..100 {
        let m = crate::random::random_lasso(&mut rng, &vars, 2, 2);
        let f = crate::random::random_ltl(&mut rng, &vars, 3);
        assert_eq!(
            ltl_eval(&f, &m, 0).unwrap(),
            naive_ltl_eval(&f, &m, 0),
            "round {round}: {f} on {m}"
        );
    }
}

// ---------------------------------------------------------------------------
// Canonicalization
// ---------------------------------------------------------------------------

#[test]
fn canonicalize_rotates_into_the_initial_part() {
    // states a=00, b=01, c=10 stand in for the worked example
    let m = lasso(&["v1", "v2"], &["00", "01"], &["10", "01"]);
    let canonical = canonicalize(&m);
    assert_eq!(canonical, lasso(&["v1", "v2"], &["00"], &["01", "10"]));
}

#[test]
fn canonicalize_collapses_repeated_periods() {
    let m = lasso(&["v1", "v2"], &["00"], &["01", "10", "01", "10"]);
    assert_eq!(
        canonicalize(&m),
        lasso(&["v1", "v2"], &["00"], &["01", "10"])
    );
}

#[test]
fn canonicalize_fixes_canonical_inputs() {
    let m = lasso(&["a"], &["1"], &["0", "1"]);
    // hold on: 1 (01)^w = (10)^w shifted; the canonical form absorbs the
    // initial state into the rotation
    let canonical = canonicalize(&m);
    assert_eq!(canonical, lasso(&["a"], &[], &["1", "0"]));
    assert_eq!(canonicalize(&canonical), canonical);
}

#[test]
fn canonicalize_preserves_evaluation() {
    let mut rng = crate::random::rng_from_seed(43);
    let vars: Vec<String> = vec!["a".into(), "b".into()];
    for _ in 0..80 {
        let m = crate::random::random_lasso(&mut rng, &vars, 3, 4);
        let canonical = canonicalize(&m);
        assert_eq!(canonicalize(&canonical), canonical, "idempotent");
        let f = crate::random::random_ltl(&mut rng, &vars, 3);
        assert_eq!(
            ltl_eval(&f, &m, 0).unwrap(),
            ltl_eval(&f, &canonical, 0).unwrap(),
            "{f} on {m}"
        );
    }
}

// ---------------------------------------------------------------------------
// Counting
// ---------------------------------------------------------------------------

#[test]
fn single_bit_count_formula_shape() {
    let f = count_formula(1);
    assert_eq!(f, parse("G !(x1 <-> X x1)"));
}

#[test]
fn lexicographic_models_satisfy_the_count_formula() {
    for n in 1..=3usize {
        let f = count_formula(n);
        for start in 0..1u128 << n {
            let m = lexicographic_model(n, start, &[]).unwrap();
            assert!(ltl_eval(&f, &m, 0).unwrap(), "n={n} start={start}");
            assert!(is_lexicographic_period(&m));
        }
    }
}

#[test]
fn lexicographic_model_period_walks_in_order() {
    let m = lexicographic_model(2, 0, &[]).unwrap();
    let values: Vec<u128> = m.period.iter().map(State::to_u128).collect();
    assert_eq!(values, vec![0, 1, 2, 3]);
    let one = lexicographic_model(1, 0, &[]).unwrap();
    assert_eq!(one.period.iter().map(State::to_u128).collect::<Vec<_>>(), vec![0, 1]);
}

#[test]
fn constant_loop_falsifies_the_count_formula() {
    let m = lasso(&["x1", "x2"], &[], &["00", "00", "00", "00"]);
    assert!(!ltl_eval(&count_formula(2), &m, 0).unwrap());
}

#[test]
fn extras_ride_along_constantly() {
    let m = lexicographic_model(2, 1, &[("p".to_string(), true)]).unwrap();
    assert_eq!(m.vars, vec!["x1", "x2", "p"]);
    assert!(m.period.iter().all(|s| s.bit(2)));
    assert!(ltl_eval(&count_formula(2), &m, 0).unwrap());
}

// ---------------------------------------------------------------------------
// QBF-to-LTL ladder
// ---------------------------------------------------------------------------

mod ladder {
    use super::*;
    use crate::proplogic::{qbf_brute_valid, Formula};
    use crate::qbf::{Qbf, QuantBlock, Quantifier};

    fn single_var_qbf(quantifiers: &[Quantifier], matrix: &str) -> Qbf {
        let prefix = quantifiers
            .iter()
            .enumerate()
            .map(|(i, &quantifier)| QuantBlock {
                quantifier,
                vars: vec![format!("v{}", i + 1)],
            })
            .collect();
        Qbf::new(prefix, Formula::parse(matrix).unwrap()).unwrap()
    }

    #[test]
    fn universal_base_rung_is_an_until() {
        use Quantifier::*;
        let q = single_var_qbf(&[Forall], "v1 | !v1");
        let t = reduction::qbf_to_ltl(&q).unwrap();
        // F U x2, with the matrix renamed to x1
        assert_eq!(
            t.ladder,
            Ltl::until(parse("x1 | !x1"), Ltl::atom("x2"))
        );
    }

    #[test]
    fn existential_base_rung_is_the_dual() {
        use Quantifier::*;
        let q = single_var_qbf(&[Exists], "v1");
        let t = reduction::qbf_to_ltl(&q).unwrap();
        assert_eq!(
            t.ladder,
            Ltl::not(Ltl::until(Ltl::not(parse("x1")), Ltl::atom("x2")))
        );
    }

    #[test]
    fn ladder_decides_validity_on_the_counting_model() {
        use Quantifier::*;
        let shapes: Vec<Vec<Quantifier>> = vec![
            vec![Forall],
            vec![Exists],
            vec![Forall, Exists],
            vec![Exists, Forall],
            vec![Forall, Forall],
            vec![Exists, Exists],
        ];
        let matrices_1 = ["v1", "!v1", "v1 | !v1", "v1 & !v1", "true", "false"];
        let matrices_2 = [
            "v1 | v2",
            "v1 & v2",
            "v1 <-> v2",
            "v1 -> v2",
            "!(v1 <-> v2)",
            "v2",
            "v1 & !v1",
        ];
        for shape in shapes {
            let matrices: &[&str] = if shape.len() == 1 { &matrices_1 } else { &matrices_2 };
            for matrix in matrices {
                let q = single_var_qbf(&shape, matrix);
                let expected = qbf_brute_valid(&q).unwrap();
                let t = reduction::qbf_to_ltl(&q).unwrap();
                let model = t.counting_model().unwrap();
                assert_eq!(
                    ltl_eval(&t.ladder, &model, 0).unwrap(),
                    expected,
                    "{shape:?} . {matrix}"
                );
            }
        }
    }

    #[test]
    fn three_level_ladder_on_the_documented_example() {
        use Quantifier::*;
        let q = single_var_qbf(&[Forall, Exists], "v1 | v2");
        assert!(qbf_brute_valid(&q).unwrap());
        let t = reduction::qbf_to_ltl(&q).unwrap();
        let model = t.counting_model().unwrap();
        assert!(ltl_eval(&t.ladder, &model, 0).unwrap());
    }

    #[test]
    fn ladder_rejects_wide_blocks() {
        let q = Qbf::new(
            vec![QuantBlock::forall(vec!["a".into(), "b".into()])],
            Formula::parse("a | b").unwrap(),
        )
        .unwrap();
        assert!(reduction::qbf_to_ltl(&q).is_err());
    }
}

// ---------------------------------------------------------------------------
// Model search
// ---------------------------------------------------------------------------

#[test]
fn find_model_on_an_atom() {
    let model = find_model(&parse("x"), &TableauLimits::default()).unwrap().unwrap();
    assert!(ltl_eval(&parse("x"), &model, 0).unwrap());
}

#[test]
fn find_model_rejects_contradictions() {
    assert_eq!(find_model(&parse("x & !x"), &TableauLimits::default()).unwrap(), None);
    assert_eq!(
        find_model(&parse("G x & F !x"), &TableauLimits::default()).unwrap(),
        None
    );
}

#[test]
fn find_model_mixes_recurrent_obligations() {
    let f = parse("G F x & G F !x");
    let model = find_model(&f, &TableauLimits::default()).unwrap().unwrap();
    assert!(ltl_eval(&f, &model, 0).unwrap());
    let index = model.vars.iter().position(|v| v == "x").unwrap();
    assert!(model.period.iter().any(|s| s.bit(index)));
    assert!(model.period.iter().any(|s| !s.bit(index)));
}

#[test]
fn find_model_sound_on_random_formulas() {
    let mut rng = crate::random::rng_from_seed(44);
    let vars: Vec<String> = vec!["a".into(), "b".into()];
    for round in 0..120 {
        let f = crate::random::random_ltl(&mut rng, &vars, 3);
        if let Some(model) = find_model(&f, &TableauLimits::default()).unwrap() {
            assert!(ltl_eval(&f, &model, 0).unwrap(), "round {round}: {f}");
        }
    }
}

#[test]
fn find_model_complete_against_naive_search_on_small_formulas() {
    let mut rng = crate::random::rng_from_seed(45);
    let vars: Vec<String> = vec!["a".into(), "b".into()];
    for round in 0..40 {
        let f = crate::random::random_ltl(&mut rng, &vars, 2);
        let found = find_model(&f, &TableauLimits::default()).unwrap();
        if found.is_none() {
            assert!(
                naive_find_model(&f, 3, 3).is_none(),
                "round {round}: search missed a model of {f}"
            );
        }
    }
}

// ---------------------------------------------------------------------------
// Succinct lassos
// ---------------------------------------------------------------------------

#[test]
fn succinct_recurrent_atom_both_modes() {
    // one state, x true, looping on itself
    let circuit = crate::circuit::identity_circuit(1).with_name("loop");
    let lasso = SuccinctLasso::new(
        SeqKind::NextState,
        vec!["x".into()],
        circuit,
        0,
        1,
        Some(State::parse("1").unwrap()),
    )
    .unwrap();
    let f = parse("G F x");
    assert!(check_succinct_model(&f, &lasso, CheckMode::Expand, 1 << 12).unwrap());
    assert!(check_succinct_model(&f, &lasso, CheckMode::Conjoin, 1 << 12).unwrap());
}

#[test]
fn succinct_counter_satisfies_the_count_formula() {
    let lasso = SuccinctLasso::new(
        SeqKind::NextState,
        vec!["x1".into(), "x2".into()],
        increment_circuit(2),
        0,
        4,
        Some(State::zeros(2)),
    )
    .unwrap();
    let f = count_formula(2);
    assert!(check_succinct_model(&f, &lasso, CheckMode::Expand, 1 << 12).unwrap());
    assert!(check_succinct_model(&f, &lasso, CheckMode::Conjoin, 1 << 12).unwrap());
}

#[test]
fn succinct_check_rejects_a_false_always() {
    // time/state lasso over the full 2-bit clock: states 0,1,2,3
    let lasso = SuccinctLasso::new(
        SeqKind::TimeState,
        vec!["x1".into(), "x2".into()],
        crate::circuit::identity_circuit(2).with_name("clock"),
        0,
        4,
        None,
    )
    .unwrap();
    let f = parse("G x1");
    assert!(!check_succinct_model(&f, &lasso, CheckMode::Expand, 1 << 12).unwrap());
    assert!(!check_succinct_model(&f, &lasso, CheckMode::Conjoin, 1 << 12).unwrap());
}

#[test]
fn succinct_modes_agree_on_full_cycle_lassos() {
    let mut rng = crate::random::rng_from_seed(46);
    let vars: Vec<String> = vec!["x1".into(), "x2".into()];
    // next-state: the 2-bit counter; time/state: the identity clock
    let ss = SuccinctLasso::new(
        SeqKind::NextState,
        vars.clone(),
        increment_circuit(2),
        0,
        4,
        Some(State::zeros(2)),
    )
    .unwrap();
    let ts = SuccinctLasso::new(
        SeqKind::TimeState,
        vars.clone(),
        crate::circuit::identity_circuit(2).with_name("clock"),
        0,
        4,
        None,
    )
    .unwrap();
    for round in 0..60 {
        let f = crate::random::random_ltl(&mut rng, &vars, 3);
        for lasso in [&ss, &ts] {
            let expand = check_succinct_model(&f, lasso, CheckMode::Expand, 1 << 12).unwrap();
            let conjoin = check_succinct_model(&f, lasso, CheckMode::Conjoin, 1 << 12).unwrap();
            assert_eq!(expand, conjoin, "round {round}: {f}");
        }
    }
}

#[test]
fn next_state_lasso_must_close() {
    // negation from 0 with a period of one state does not close
    let lasso = SuccinctLasso::new(
        SeqKind::NextState,
        vec!["x".into()],
        increment_circuit(1),
        0,
        1,
        Some(State::zeros(1)),
    )
    .unwrap();
    assert!(lasso.expand(1 << 12).is_err());
}

// ---------------------------------------------------------------------------
// Division and expansion checks
// ---------------------------------------------------------------------------

#[test]
fn divide_keeps_every_t_th_element() {
    let states: Vec<State> =
        (0..6).map(|i| State::from_u128(i, 3).unwrap()).collect();
    let halved = divide(&states, 2);
    assert_eq!(
        halved.iter().map(State::to_u128).collect::<Vec<_>>(),
        vec![0, 2, 4]
    );
    assert_eq!(divide(&states, 1), states);
}

#[test]
fn expands_check_accepts_padded_and_rejects_mismatches() {
    let narrow_vars = vec!["a".to_string()];
    let wide_vars = vec!["a".to_string(), "extra".to_string()];
    let narrow = vec![State::parse("1").unwrap(), State::parse("0").unwrap()];
    let padded = vec![State::parse("10").unwrap(), State::parse("00").unwrap()];
    assert!(expands_check(&narrow_vars, &narrow, &wide_vars, &padded).unwrap());
    let dirty = vec![State::parse("10").unwrap(), State::parse("01").unwrap()];
    assert!(!expands_check(&narrow_vars, &narrow, &wide_vars, &dirty).unwrap());
}

// ---------------------------------------------------------------------------
// Unique-model embeddings
// ---------------------------------------------------------------------------

mod embeddings {
    use super::*;
    use crate::seq::{ActionSet, PlanSeqRepr};

    fn ss_source(trace: &[&str]) -> PlanSeqRepr {
        let states: Vec<State> = trace.iter().map(|s| State::parse(s).unwrap()).collect();
        let width = states[0].width();
        let transitions: Vec<(State, State)> =
            states.windows(2).map(|w| (w[0].clone(), w[1].clone())).collect();
        let circuit = crate::random::circuit_from_transitions("src", width, &transitions);
        PlanSeqRepr::new(
            SeqKind::NextState,
            (0..width).map(|i| format!("v{}", i + 1)).collect(),
            states[0].clone(),
            ActionSet::empty(),
            states.len() as u64 - 1,
            circuit,
        )
        .unwrap()
    }

    fn ts_source(trace: &[&str]) -> PlanSeqRepr {
        let states: Vec<State> = trace.iter().map(|s| State::parse(s).unwrap()).collect();
        let width = states[0].width();
        let time_bits = crate::bits::index_width(states.len() as u128);
        let circuit = crate::random::time_table_circuit("src", time_bits, &states);
        PlanSeqRepr::new(
            SeqKind::TimeState,
            (0..width).map(|i| format!("v{}", i + 1)).collect(),
            states[0].clone(),
            ActionSet::empty(),
            states.len() as u64 - 1,
            circuit,
        )
        .unwrap()
    }

    fn assert_embedding(source: &PlanSeqRepr) {
        let embedding = embed_unique_model(source, 1 << 12).unwrap();
        let expanded = embedding.lasso.expand(1 << 12).unwrap();
        // the formula holds on the embedded lasso
        assert!(
            ltl_eval(&embedding.formula, &expanded, 0).unwrap(),
            "embedding formula fails on its own lasso"
        );
        // dividing the (finite) expansion by two recovers the source,
        // padded with always-false scaffolding
        let mut wide = expanded.initial.clone();
        wide.extend(expanded.period.iter().cloned());
        let halved = divide(&wide, 2);
        let source_states = source
            .expand(&crate::seq::ExpandLimits::default())
            .unwrap()
            .states;
        assert!(expands_check(
            &source.vars,
            &source_states,
            &expanded.vars,
            &halved
        )
        .unwrap());
    }

    #[test]
    fn single_state_next_state_embedding() {
        assert_embedding(&ss_source(&["1"]));
    }

    #[test]
    fn three_state_next_state_embedding() {
        assert_embedding(&ss_source(&["00", "01", "11"]));
    }

    #[test]
    fn time_state_embeddings() {
        assert_embedding(&ts_source(&["0"]));
        assert_embedding(&ts_source(&["00", "10", "01", "11"]));
    }

    #[test]
    fn embedding_is_the_unique_tiny_model() {
        // at one source state over one variable the full lasso space up to
        // 3+3 positions is small enough to sweep: every lasso satisfying
        // the formula denotes the embedded word
        let source = ss_source(&["1"]);
        let embedding = embed_unique_model(&source, 1 << 12).unwrap();
        let expanded = embedding.lasso.expand(1 << 12).unwrap();
        let reference = canonicalize(&expanded);
        let vars = expanded.vars.clone();
        let width = vars.len();
        for init_len in 0..=3usize {
            for period_len in 1..=3usize {
                let positions = init_len + period_len;
                for combo in 0..1u64 << (width * positions) {
                    let state = |slot: usize| -> State {
                        State::new(
                            (0..width)
                                .map(|bit| combo >> (slot * width + bit) & 1 == 1)
                                .collect(),
                        )
                    };
                    let candidate = LassoModel::new(
                        vars.clone(),
                        (0..init_len).map(state).collect(),
                        (init_len..positions).map(state).collect(),
                    )
                    .unwrap();
                    if ltl_eval(&embedding.formula, &candidate, 0).unwrap() {
                        assert_eq!(canonicalize(&candidate), reference);
                    }
                }
            }
        }
    }

    #[test]
    fn action_kinds_are_rejected() {
        let mut rng = crate::random::rng_from_seed(47);
        let sa = crate::random::random_next_action_repr(&mut rng, 2, 2, 2);
        assert!(embed_unique_model(&sa, 1 << 12).is_err());
    }
}

// ---------------------------------------------------------------------------
// Parsing and formats
// ---------------------------------------------------------------------------

#[test]
fn parser_precedence() {
    // U binds tighter than &, unary operators tighter than U
    assert_eq!(
        parse("a U b & c"),
        Ltl::and(vec![Ltl::until(Ltl::atom("a"), Ltl::atom("b")), Ltl::atom("c")])
    );
    assert_eq!(
        parse("F a U b"),
        Ltl::until(Ltl::eventually(Ltl::atom("a")), Ltl::atom("b"))
    );
    // left-associative U
    assert_eq!(
        parse("a U b U c"),
        Ltl::until(Ltl::until(Ltl::atom("a"), Ltl::atom("b")), Ltl::atom("c"))
    );
}

#[test]
fn display_round_trips() {
    let mut rng = crate::random::rng_from_seed(48);
    let vars: Vec<String> = vec!["a".into(), "b".into()];
    for _ in 0..150 {
        let f = crate::random::random_ltl(&mut rng, &vars, 4);
        let rendered = f.to_string();
        assert_eq!(parse(&rendered), f, "through `{rendered}`");
    }
}

#[test]
fn lasso_file_round_trip() {
    let m = lasso(&["a", "b"], &["10"], &["01", "11"]);
    let text = m.to_string();
    assert_eq!(LassoModel::from_str(&text).unwrap(), m);
}

#[test]
fn find_model_honest_about_dropped_globally_claims() {
    // a set-lasso may not claim G !b false while b stays false forever:
    // the implication below is satisfiable only by making b true at some
    // point, and an under-claiming loop once produced a bogus "model"
    let f = parse("G !b -> F false U b");
    let model = find_model(&f, &TableauLimits::default()).unwrap().unwrap();
    assert!(ltl_eval(&f, &model, 0).unwrap());
    let index = model.vars.iter().position(|v| v == "b").unwrap();
    let reaches_b = model
        .initial
        .iter()
        .chain(&model.period)
        .any(|s| s.bit(index));
    assert!(reaches_b);
}
