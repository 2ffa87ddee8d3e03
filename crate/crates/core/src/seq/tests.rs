use super::gen::*;
use super::*;
use crate::circuit::{identity_circuit, increment_circuit};
use crate::proplogic::cnf::{Cnf3, Cnf3Encoding, Literal};
use crate::proplogic::{brute_sat, eval_formula, Assignment};

fn limits() -> ExpandLimits {
    ExpandLimits::default()
}

fn inc_actions(width: usize) -> ActionSet {
    ActionSet::new(vec![("inc".to_string(), increment_circuit(width))], width).unwrap()
}

fn ss_counter(width: usize, steps: u64) -> PlanSeqRepr {
    PlanSeqRepr::new(
        SeqKind::NextState,
        (0..width).map(|i| format!("b{}", i + 1)).collect(),
        State::zeros(width),
        inc_actions(width),
        steps,
        increment_circuit(width),
    )
    .unwrap()
}

#[test]
fn time_element_identity_walks_the_integers() {
    // 8 time bits, 129 elements: 0, 1, ..., 128
    let repr = TimeElementRepr::new(identity_circuit(8), 129).unwrap();
    let states = repr.expand(&limits()).unwrap();
    assert_eq!(states.len(), 129);
    for (t, state) in states.iter().enumerate() {
        assert_eq!(state.to_u128(), t as u128);
    }
    assert_eq!(repr.element_at(5).unwrap().to_u128(), 5);
    assert!(repr.element_at(129).is_err());
}

#[test]
fn next_state_counter_trace_matches_arithmetic() {
    let repr = ss_counter(2, 3);
    let expansion = repr.expand(&limits()).unwrap();
    let values: Vec<u128> = expansion.states.iter().map(State::to_u128).collect();
    assert_eq!(values, vec![0, 1, 2, 3]);
}

#[test]
fn zero_step_trace_is_the_initial_state() {
    let repr = ss_counter(2, 0);
    let expansion = repr.expand(&limits()).unwrap();
    assert_eq!(expansion.states, vec![State::zeros(2)]);
}

#[test]
fn element_at_agrees_with_expansion_on_all_kinds() {
    let ss = ss_counter(3, 6);
    let mut rng = crate::random::rng_from_seed(7);
    let ta = crate::random::random_next_action_repr(&mut rng, 4, 3, 9);
    let ts = crate::random::random_time_state_repr(&mut rng, 4, 2, 9);
    for repr in [&ss, &ta, &ts] {
        let expansion = repr.expand(&limits()).unwrap();
        for (t, state) in expansion.states.iter().enumerate() {
            assert_eq!(&repr.element_at(t as u64).unwrap(), state, "kind {}", repr.kind);
        }
        assert!(repr.element_at(repr.steps + 1).is_err());
    }
}

#[test]
fn next_element_repr_rejects_repetition() {
    // a 1-bit counter repeats after two steps
    let repr = NextElementRepr::new(State::zeros(1), increment_circuit(1), 3).unwrap();
    assert!(matches!(
        repr.expand(&limits()),
        Err(SeqError::Repetition { first: 0, second: 2 })
    ));
}

#[test]
fn validate_counter_with_matching_actions() {
    let repr = ss_counter(2, 3);
    let report = repr.validate(&limits()).unwrap();
    assert!(report.valid);
    assert!(report.steps.iter().all(|s| s.action == Some(0)));
}

#[test]
fn validate_flags_unwitnessed_step() {
    // trace driven by increment but the only action is a decrement
    let dec = {
        use crate::circuit::CircuitBuilder;
        let mut b = CircuitBuilder::new("dec");
        let x = b.add_inputs("x", 2);
        let out = b.sub_const(&x, 1);
        b.finish_indexed("o", &out).unwrap()
    };
    let repr = PlanSeqRepr::new(
        SeqKind::NextState,
        vec!["b1".into(), "b2".into()],
        State::zeros(2),
        ActionSet::new(vec![("dec".to_string(), dec)], 2).unwrap(),
        3,
        increment_circuit(2),
    )
    .unwrap();
    let report = repr.validate(&limits()).unwrap();
    assert!(!report.valid);
    assert_eq!(report.steps[0], StepReport { step: 0, action: None, ok: false });
}

#[test]
fn validate_flags_repetitions() {
    // time/state trace that revisits the initial state
    let states = vec![
        State::parse("00").unwrap(),
        State::parse("01").unwrap(),
        State::parse("00").unwrap(),
    ];
    let circuit = crate::random::time_table_circuit("wobble", 2, &states);
    let repr = PlanSeqRepr::new(
        SeqKind::TimeState,
        vec!["b1".into(), "b2".into()],
        states[0].clone(),
        inc_actions(2),
        2,
        circuit,
    )
    .unwrap();
    let report = repr.validate(&limits()).unwrap();
    assert!(!report.valid);
    assert_eq!(report.repetitions, vec![(0, 2)]);
}

// ---------------------------------------------------------------------------
// Conversions
// ---------------------------------------------------------------------------

mod conversions {
    use super::*;

    #[test]
    fn single_action_next_state_to_next_action_is_constant_zero() {
        let repr = ss_counter(2, 3);
        let converted = convert(&repr, SeqKind::NextAction).unwrap();
        assert_eq!(converted.kind, SeqKind::NextAction);
        assert_eq!(converted.actions, repr.actions);
        let expansion = converted.expand(&limits()).unwrap();
        assert_eq!(expansion.actions.unwrap(), vec![0, 0, 0]);
        assert_eq!(expansion.states, repr.expand(&limits()).unwrap().states);
    }

    #[test]
    fn next_action_round_trips_through_next_state() {
        let mut rng = crate::random::rng_from_seed(21);
        for _ in 0..10 {
            let sa = crate::random::random_next_action_repr(&mut rng, 5, 3, 12);
            let ss = convert(&sa, SeqKind::NextState).unwrap();
            let sa_states = sa.expand(&limits()).unwrap().states;
            assert_eq!(ss.expand(&limits()).unwrap().states, sa_states);
            // and back, possibly renumbering designated actions
            let back = convert(&ss, SeqKind::NextAction).unwrap();
            assert_eq!(back.expand(&limits()).unwrap().states, sa_states);
            assert_eq!(back.actions, sa.actions);
        }
    }

    #[test]
    fn time_state_to_time_action_preserves_the_trace() {
        let mut rng = crate::random::rng_from_seed(22);
        for _ in 0..10 {
            let ts = crate::random::random_time_state_repr(&mut rng, 5, 3, 10);
            let ta = convert(&ts, SeqKind::TimeAction).unwrap();
            assert_eq!(
                ta.expand(&limits()).unwrap().states,
                ts.expand(&limits()).unwrap().states
            );
            assert_eq!(ta.actions, ts.actions);
        }
    }

    #[test]
    fn forbidden_directions_raise_unsupported_errors() {
        let ss = ss_counter(2, 3);
        let err = convert(&ss, SeqKind::TimeState).unwrap_err();
        assert!(matches!(
            err,
            SeqError::UnsupportedDirection { from: SeqKind::NextState, to: SeqKind::TimeState, .. }
        ));
        let mut rng = crate::random::rng_from_seed(23);
        let sa = crate::random::random_next_action_repr(&mut rng, 3, 2, 4);
        assert!(convert(&sa, SeqKind::TimeAction).is_err());
        let ts = crate::random::random_time_state_repr(&mut rng, 3, 2, 4);
        let ta = convert(&ts, SeqKind::TimeAction).unwrap();
        assert!(convert(&ta, SeqKind::TimeState).is_err());
        assert!(convert(&ta, SeqKind::NextAction).is_err());
        assert!(convert(&ts, SeqKind::NextState).is_err());
    }
}

// ---------------------------------------------------------------------------
// Satisfiability-scanning generators
// ---------------------------------------------------------------------------

fn enc21() -> Cnf3Encoding {
    Cnf3Encoding::new(2, 1)
}

fn interpretation(r: usize, value: u64) -> Assignment {
    (0..r)
        .map(|i| (format!("x{}", i + 1), value >> (r - 1 - i) & 1 == 1))
        .collect()
}

#[test]
fn sat_scan_chunk_geometry_and_verdicts() {
    let enc = enc21();
    let scan = sat_scan_sequence(&enc).unwrap();
    assert_eq!(scan.chunk_len(), 5);
    assert_eq!(scan.repr.steps, 64 * 5 - 1);
    let expansion = scan.repr.expand(&limits()).unwrap();

    for k in 0..enc.num_formulas() as u64 {
        // chunk start: 1-indexed k*(2^r+1)+1
        let start = scan.chunk_start_1indexed(k) - 1;
        let (formula, model, x, y) = scan.decode_state(&expansion.states[start as usize]);
        assert_eq!((formula, model, x, y), (k as u128, 0, false, false));

        // the x bit at the query point answers satisfiability of formula k
        let query = scan.sat_query_1indexed(k) - 1;
        let (formula, model, x, y) = scan.decode_state(&expansion.states[query as usize]);
        let expected =
            brute_sat(&enc.formula_at(k as u128).unwrap().to_formula()).unwrap().is_some();
        assert_eq!((formula, model, y), (k as u128, 0, true));
        assert_eq!(x, expected, "formula {k}");
    }
}

#[test]
fn sat_scan_passes_validation() {
    let scan = sat_scan_sequence(&enc21()).unwrap();
    assert!(scan.repr.validate(&limits()).unwrap().valid);
}

#[test]
fn sat_flag_final_state_answers_satisfiability() {
    let enc = enc21();
    for k in 0..enc.num_formulas() {
        let bits = enc.formula_bits(k).unwrap();
        let flag_seq = sat_flag_sequence(&enc, &bits).unwrap();
        let expansion = flag_seq.repr.expand(&limits()).unwrap();
        let expected = brute_sat(&enc.formula_at(k).unwrap().to_formula()).unwrap().is_some();
        assert_eq!(flag_seq.flag_of(expansion.states.last().unwrap()), expected, "formula {k}");
    }
}

#[test]
fn sat_flag_actions_follow_the_matrix() {
    let enc = enc21();
    // a tautologous clause: (x1 | !x1 | x1)
    let tautology = Cnf3 {
        num_vars: 2,
        clauses: vec![[
            Literal { var: 0, positive: true },
            Literal { var: 0, positive: false },
            Literal { var: 0, positive: true },
        ]],
    };
    let bits = enc.encode(&tautology).unwrap();
    let flag_seq = sat_flag_sequence(&enc, &bits).unwrap();
    let expansion = flag_seq.repr.expand(&limits()).unwrap();
    // flag set right after the first step
    assert!(flag_seq.flag_of(&expansion.states[1]));

    // for every formula, the action at time t is sat exactly when
    // interpretation t satisfies the decoded formula
    for k in 0..enc.num_formulas() {
        let bits = enc.formula_bits(k).unwrap();
        let formula = enc.decode(&bits).unwrap().to_formula();
        let flag_seq = sat_flag_sequence(&enc, &bits).unwrap();
        let designated = flag_seq.repr.expand(&limits()).unwrap().actions.unwrap();
        for (t, &action) in designated.iter().enumerate() {
            let holds = eval_formula(&formula, &interpretation(2, t as u64)).unwrap();
            assert_eq!(action == 0, holds, "formula {k} time {t}");
        }
    }
}

#[test]
fn chunked_time_action_scan_matches_brute_force() {
    let enc = enc21();
    let chunked = sat_chunked_sequence(&enc).unwrap();
    assert_eq!(chunked.chunk_len(), 6);
    let expansion = chunked.repr.expand(&limits()).unwrap();
    let designated = expansion.actions.as_ref().unwrap();
    for k in 0..enc.num_formulas() as u64 {
        let expected =
            brute_sat(&enc.formula_at(k as u128).unwrap().to_formula()).unwrap().is_some();
        let end = chunked.scan_end_position(k) as usize;
        let (formula, model, x, y) = chunked.decode_state(&expansion.states[end]);
        assert_eq!((formula, model, y), (k as u128, 0, true));
        assert_eq!(x, expected, "formula {k}");
        // the flip action is designated there, and the inverted twin state
        // follows
        assert_eq!(chunked.repr.actions.name(designated[end]), "flip");
        let (formula2, _, x2, y2) = chunked.decode_state(&expansion.states[end + 1]);
        assert_eq!((formula2, x2, y2), (k as u128, !expected, true));
        if (end + 1) < designated.len() {
            assert_eq!(chunked.repr.actions.name(designated[end + 1]), "begin");
        }
    }
}

#[test]
fn state_action_scan_selects_sat_exactly_on_satisfiable_formulas() {
    let enc = enc21();
    let scan = sat_state_action_sequence(&enc).unwrap();
    let expansion = scan.repr.expand(&limits()).unwrap();
    let designated = expansion.actions.as_ref().unwrap();

    // the designated action at a state is the selector's output; the
    // trace's last state designates one too, even with no step left
    let designated_at = |state: &State| {
        let bits = scan.repr.circuit.evaluate(state.bits()).unwrap();
        crate::bits::u128_from_bits_be(&bits) as usize
    };

    for k in 0..enc.num_formulas() as u64 {
        let formula = enc.formula_at(k as u128).unwrap().to_formula();
        let expected = brute_sat(&formula).unwrap().is_some();
        let end = scan.chunk_final_position(k) as usize;
        let name = scan.repr.actions.name(designated_at(&expansion.states[end]));
        assert_eq!(name, if expected { "sat" } else { "unsat" }, "formula {k}");
        if end < designated.len() {
            assert_eq!(designated[end], designated_at(&expansion.states[end]));
        }
        // mid-chunk designations follow per-model truth; under ok the
        // model advances and x latches
        for offset in 0..scan.chunk_len() - 1 {
            let at = (k * scan.chunk_len() + offset) as usize;
            let (_, model, _) = scan.decode_state(&expansion.states[at]);
            let holds = eval_formula(&formula, &interpretation(2, model as u64)).unwrap();
            let name = scan.repr.actions.name(designated[at]);
            assert_eq!(name, if holds { "ok" } else { "no" }, "formula {k} model {model}");
            if holds {
                let (_, next_model, x) = scan.decode_state(&expansion.states[at + 1]);
                assert_eq!(next_model, model + 1);
                assert!(x);
            }
        }
    }
}

#[test]
fn state_action_scan_converts_to_next_state_exactly() {
    let enc = enc21();
    let scan = sat_state_action_sequence(&enc).unwrap();
    let ss = convert(&scan.repr, SeqKind::NextState).unwrap();
    assert_eq!(
        ss.expand(&limits()).unwrap().states,
        scan.repr.expand(&limits()).unwrap().states
    );
    assert_eq!(ss.actions, scan.repr.actions);
}

// ---------------------------------------------------------------------------
// Function-based sequences
// ---------------------------------------------------------------------------

#[test]
fn pair_sequence_alternates_image_and_preimage() {
    let f = identity_circuit(2);
    let repr = function_pair_sequence(&f).unwrap();
    let expansion = repr.expand(&limits()).unwrap();
    assert_eq!(expansion.states.len(), 8);
    for x in 0u128..4 {
        let even = &expansion.states[2 * x as usize];
        let odd = &expansion.states[2 * x as usize + 1];
        // f = identity: both elements carry x, distinguished by the tag
        assert_eq!(even.to_u128() >> 1, x);
        assert!(!even.bit(2));
        assert_eq!(odd.to_u128() >> 1, x);
        assert!(odd.bit(2));
    }
}

#[test]
fn pair_sequence_matches_direct_construction_for_increment() {
    let f = increment_circuit(3);
    let repr = function_pair_sequence(&f).unwrap();
    let expansion = repr.expand(&limits()).unwrap();
    for x in 0u128..8 {
        let even = expansion.states[2 * x as usize].to_u128();
        let odd = expansion.states[2 * x as usize + 1].to_u128();
        assert_eq!(even, ((x + 1) % 8) << 1, "f(x) tagged 0");
        assert_eq!(odd, (x << 1) | 1, "x tagged 1");
    }
}

#[test]
fn chunk_sequence_structure_and_validation() {
    let f = increment_circuit(2);
    let repr = function_chunk_sequence(&f).unwrap();
    let n = 2u64;
    assert_eq!(repr.actions.len() as u64, 2 * n + 1);
    let expansion = repr.expand(&limits()).unwrap();
    assert_eq!(expansion.states.len() as u64, (n + 1) * 4);

    // each chunk: n intermediate rewrites between the two anchor states
    for x in 0u128..4 {
        let base = (x * (n as u128 + 1)) as usize;
        let fx = (x + 1) % 4;
        let first = &expansion.states[base];
        assert_eq!(first.to_u128(), fx << 4 | fx << 2);
        let last = &expansion.states[base + n as usize];
        assert_eq!(last.to_u128(), fx << 4 | x << 2 | 0b11);
    }

    // no repeated states, and an action witnesses every step
    let report = repr.validate(&limits()).unwrap();
    assert!(report.valid, "{report:?}");
}

#[test]
fn chunk_sequence_rejects_nonsquare_functions() {
    let skew = crate::circuit::constant_circuit(2, &[true]);
    assert!(function_chunk_sequence(&skew).is_err());
}

// ---------------------------------------------------------------------------
// Format round-trip
// ---------------------------------------------------------------------------

#[test]
fn sequence_file_round_trip() {
    use std::str::FromStr;
    let mut rng = crate::random::rng_from_seed(9);
    let repr = crate::random::random_next_action_repr(&mut rng, 3, 2, 5);
    let text = repr.to_string();
    let parsed = PlanSeqRepr::from_str(&text).unwrap();
    assert_eq!(parsed, repr);
}

#[cfg(test)]
mod properties {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn element_at_equals_expansion(seed in 0u64..500, steps in 0u64..12) {
            let mut rng = crate::random::rng_from_seed(seed);
            let repr = crate::random::random_next_action_repr(&mut rng, 4, 2, steps);
            let expansion = repr.expand(&limits()).unwrap();
            for (t, state) in expansion.states.iter().enumerate() {
                prop_assert_eq!(&repr.element_at(t as u64).unwrap(), state);
            }
        }

        #[test]
        fn conversions_preserve_expansion(seed in 0u64..500) {
            let mut rng = crate::random::rng_from_seed(seed);
            let sa = crate::random::random_next_action_repr(&mut rng, 4, 3, 8);
            let ss = convert(&sa, SeqKind::NextState).unwrap();
            let back = convert(&ss, SeqKind::NextAction).unwrap();
            let reference = sa.expand(&limits()).unwrap().states;
            prop_assert_eq!(ss.expand(&limits()).unwrap().states, reference.clone());
            prop_assert_eq!(back.expand(&limits()).unwrap().states, reference);
        }
    }
}
