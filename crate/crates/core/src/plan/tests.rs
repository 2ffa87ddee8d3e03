use std::str::FromStr;

use super::gen::*;
use super::search::*;
use super::*;
use crate::circuit::{constant_circuit, increment_circuit};
use crate::proplogic::{qbf_brute_valid, Formula};
use crate::qbf::{Qbf, QuantBlock};
use crate::seq::SeqKind;

fn options() -> SimulateOptions {
    SimulateOptions::default()
}

fn limits() -> PlanSearchLimits {
    PlanSearchLimits::default()
}

fn counter_instance(width: usize) -> PolyplanInstance {
    long_plan_instance((1 << width) - 2).unwrap()
}

#[test]
fn apply_action_basics() {
    let inc = increment_circuit(2);
    assert_eq!(
        apply_action(&inc, &State::parse("00").unwrap()).unwrap(),
        State::parse("01").unwrap()
    );
    let id = crate::circuit::identity_circuit(3);
    let s = State::parse("101").unwrap();
    assert_eq!(apply_action(&id, &s).unwrap(), s);
    let k = constant_circuit(2, &[true, false]);
    assert_eq!(
        apply_action(&k, &State::parse("11").unwrap()).unwrap(),
        State::parse("10").unwrap()
    );
}

#[test]
fn simulate_accepts_the_counter_plan() {
    let inst = counter_instance(2);
    assert_eq!(inst.initial, State::parse("00").unwrap());
    let verdict = simulate(&inst, &[0, 0, 0], &options()).unwrap();
    assert_eq!(verdict, Verdict::Valid);
}

#[test]
fn simulate_empty_plan_when_initial_is_goal() {
    let inst = PolyplanInstance::new(
        vec!["b1".into()],
        State::zeros(1),
        GoalSpec::State(State::zeros(1)),
        crate::seq::ActionSet::new(
            vec![("inc".to_string(), increment_circuit(1))],
            1,
        )
        .unwrap(),
    )
    .unwrap();
    assert_eq!(simulate(&inst, &[], &options()).unwrap(), Verdict::Valid);
}

#[test]
fn simulate_rejects_wraparound_repetition() {
    let inst = counter_instance(2);
    let verdict = simulate(&inst, &[0, 0, 0, 0], &options()).unwrap();
    assert_eq!(
        verdict,
        Verdict::Failure { step: 4, reason: FailureReason::Repetition { first_seen: 0 } }
    );
}

#[test]
fn simulate_reports_goal_miss_and_bad_index() {
    let inst = counter_instance(2);
    assert_eq!(
        simulate(&inst, &[0, 0], &options()).unwrap(),
        Verdict::Failure { step: 2, reason: FailureReason::GoalMiss }
    );
    assert_eq!(
        simulate(&inst, &[0, 7], &options()).unwrap(),
        Verdict::Failure { step: 2, reason: FailureReason::BadActionIndex { index: 7 } }
    );
}

#[test]
fn search_plan_counts_all_the_way_up() {
    for width in [1usize, 2, 3, 4] {
        let inst = counter_instance(width);
        let plan = search_plan(&inst, &limits()).unwrap().unwrap();
        assert_eq!(plan.len(), (1 << width) - 1, "width {width}");
        assert_eq!(simulate(&inst, &plan, &options()).unwrap(), Verdict::Valid);
    }
}

#[test]
fn search_plan_trivial_and_unreachable_cases() {
    // initial equals goal: the empty plan
    let inst = PolyplanInstance::new(
        vec!["b1".into()],
        State::zeros(1),
        GoalSpec::State(State::zeros(1)),
        crate::seq::ActionSet::new(vec![("inc".to_string(), increment_circuit(1))], 1).unwrap(),
    )
    .unwrap();
    assert_eq!(search_plan(&inst, &limits()).unwrap(), Some(vec![]));

    // goal outside the reachable set: identity is the only action
    let stuck = PolyplanInstance::new(
        vec!["b1".into()],
        State::zeros(1),
        GoalSpec::State(State::ones(1)),
        crate::seq::ActionSet::new(
            vec![("id".to_string(), crate::circuit::identity_circuit(1))],
            1,
        )
        .unwrap(),
    )
    .unwrap();
    assert_eq!(search_plan(&stuck, &limits()).unwrap(), None);
}

#[test]
fn random_instances_simulate_their_found_plans() {
    let mut rng = crate::random::rng_from_seed(31);
    let mut found = 0;
    for _ in 0..100 {
        let width = rand::Rng::random_range(&mut rng, 1..=6);
        let actions = {
            let count = rand::Rng::random_range(&mut rng, 1..=3);
            let mut entries = Vec::new();
            for i in 0..count {
                // random transition tables over a handful of states
                let pairs: Vec<(State, State)> = (0..4)
                    .map(|_| {
                        (
                            crate::random::random_state(&mut rng, width),
                            crate::random::random_state(&mut rng, width),
                        )
                    })
                    .collect();
                let name = format!("a{i}");
                entries.push((
                    name.clone(),
                    crate::random::circuit_from_transitions(&name, width, &pairs),
                ));
            }
            crate::seq::ActionSet::new(entries, width).unwrap()
        };
        let inst = PolyplanInstance::new(
            (0..width).map(|i| format!("v{i}")).collect(),
            crate::random::random_state(&mut rng, width),
            GoalSpec::State(crate::random::random_state(&mut rng, width)),
            actions,
        )
        .unwrap();
        if let Some(plan) = search_plan(&inst, &limits()).unwrap() {
            found += 1;
            assert_eq!(simulate(&inst, &plan, &options()).unwrap(), Verdict::Valid);
        }
    }
    assert!(found > 0, "the sample should contain solvable instances");
}

#[test]
fn streaming_keeps_two_states() {
    let inst = counter_instance(6);
    let plan = search_plan(&inst, &limits()).unwrap().unwrap();
    let (verdict, stats) = simulate_with_stats(&inst, &plan, &options()).unwrap();
    assert_eq!(verdict, Verdict::Valid);
    assert_eq!(stats.steps, 63);
    assert!(stats.peak_states <= 2, "peak {}", stats.peak_states);
}

// ---------------------------------------------------------------------------
// Long-plan instances
// ---------------------------------------------------------------------------

#[test]
fn long_plan_instance_widths_and_lengths() {
    // k = 0: one bit, plan of length 1
    let inst = long_plan_instance(0).unwrap();
    assert_eq!(inst.width(), 1);
    assert_eq!(search_plan(&inst, &limits()).unwrap().unwrap().len(), 1);

    // k = 6: three bits, minimal plan of length 7
    let inst = long_plan_instance(6).unwrap();
    assert_eq!(inst.width(), 3);
    let plan = search_plan(&inst, &limits()).unwrap().unwrap();
    assert_eq!(plan.len(), 7);
    assert!(plan.len() >= 7);
}

#[test]
fn long_plan_minimal_lengths_exceed_k() {
    for k in [0u64, 1, 2, 5, 6, 14] {
        let inst = long_plan_instance(k).unwrap();
        let plan = search_plan(&inst, &limits()).unwrap().unwrap();
        assert!(plan.len() as u64 >= k + 1, "k={k} len={}", plan.len());
    }
}

// ---------------------------------------------------------------------------
// Bounded succinct-plan search
// ---------------------------------------------------------------------------

#[test]
fn bounded_search_finds_constant_time_action_circuit() {
    // one action, one step: the constant selector of size 0 suffices
    let inst = PolyplanInstance::new(
        vec!["b1".into()],
        State::zeros(1),
        GoalSpec::State(State::ones(1)),
        crate::seq::ActionSet::new(vec![("inc".to_string(), increment_circuit(1))], 1).unwrap(),
    )
    .unwrap();
    let repr = bounded_succinct_plan_exists(&inst, 0, SeqKind::TimeAction, &limits())
        .unwrap()
        .unwrap();
    assert_eq!(repr.circuit.size(), 0);
    assert_eq!(repr.steps, 1);
    assert_eq!(simulate_repr(&inst, &repr, &options()).unwrap(), Verdict::Valid);
}

#[test]
fn bounded_search_finds_the_smallest_next_state_recurrence() {
    // two increment steps are needed (init 00, goal 10), so constants and
    // pass-throughs are exhausted and the first valid recurrence has the
    // minimal size 3
    let inst = PolyplanInstance::new(
        vec!["b1".into(), "b2".into()],
        State::zeros(2),
        GoalSpec::State(State::parse("10").unwrap()),
        crate::seq::ActionSet::new(vec![("inc".to_string(), increment_circuit(2))], 2).unwrap(),
    )
    .unwrap();
    for k in 0..=2 {
        assert_eq!(
            bounded_succinct_plan_exists(&inst, k, SeqKind::NextState, &limits()).unwrap(),
            None,
            "bound {k}"
        );
    }
    let repr = bounded_succinct_plan_exists(&inst, 3, SeqKind::NextState, &limits())
        .unwrap()
        .unwrap();
    assert_eq!(repr.circuit.size(), 3);
    assert_eq!(repr.steps, 2);
    // the found recurrence increments on the two trace states
    let inc = increment_circuit(2);
    for input in [[false, false], [false, true]] {
        assert_eq!(repr.circuit.evaluate(&input).unwrap(), inc.evaluate(&input).unwrap());
    }
    assert_eq!(simulate_repr(&inst, &repr, &options()).unwrap(), Verdict::Valid);
}

#[test]
fn bounded_search_is_deterministic_on_the_one_bit_counter() {
    // a single step suffices, so the constant-true circuit of size 0 is
    // the first hit in enumeration order
    let inst = counter_instance(1);
    let repr = bounded_succinct_plan_exists(&inst, 2, SeqKind::NextState, &limits())
        .unwrap()
        .unwrap();
    assert_eq!(repr.circuit.size(), 0);
    assert_eq!(repr.steps, 1);
    assert_eq!(simulate_repr(&inst, &repr, &options()).unwrap(), Verdict::Valid);
}

#[test]
fn bounded_search_exhausts_state_kinds_at_zero() {
    let inst = long_plan_instance(3).unwrap();
    // at size 0 only constant circuits exist: no time/state or next-state
    // representation can walk the counter
    for kind in [SeqKind::TimeState, SeqKind::NextState] {
        assert_eq!(
            bounded_succinct_plan_exists(&inst, 0, kind, &limits()).unwrap(),
            None,
            "{kind}"
        );
    }
    // the action kinds do admit size-0 selectors: the single action is
    // applied regardless of time or state
    for kind in [SeqKind::TimeAction, SeqKind::NextAction] {
        let repr = bounded_succinct_plan_exists(&inst, 0, kind, &limits()).unwrap().unwrap();
        assert_eq!(repr.circuit.size(), 0);
        assert_eq!(repr.steps, 7);
    }
}

#[test]
fn bounded_search_respects_caps() {
    let inst = counter_instance(2);
    let tight = PlanSearchLimits { max_bound: 1, ..limits() };
    assert!(matches!(
        bounded_succinct_plan_exists(&inst, 5, SeqKind::NextState, &tight),
        Err(PlanError::CapExceeded { .. })
    ));
}

// ---------------------------------------------------------------------------
// Instances from QBFs
// ---------------------------------------------------------------------------

fn two_block_qbf(matrix: &str) -> Qbf {
    Qbf::new(
        vec![
            QuantBlock::exists(vec!["x1".into(), "x2".into()]),
            QuantBlock::forall(vec!["y1".into(), "y2".into()]),
        ],
        Formula::parse(matrix).unwrap(),
    )
    .unwrap()
}

#[test]
fn qbf_instance_goal_shape() {
    let q = Qbf::new(
        vec![
            QuantBlock::exists(vec!["x1".into()]),
            QuantBlock::forall(vec!["y1".into()]),
        ],
        Formula::parse("x1 | y1").unwrap(),
    )
    .unwrap();
    let inst = qbf_planning_instance(&q).unwrap();
    // goal: the flag variable true, everything else false
    match &inst.goal {
        GoalSpec::State(goal) => {
            assert!(goal.bit(0));
            assert!((1..goal.width()).all(|i| !goal.bit(i)));
        }
        _ => panic!("expected a single goal state"),
    }
    assert!(search_plan(&inst, &limits()).unwrap().is_some());
}

#[test]
fn qbf_instance_without_plan_for_invalid_formula() {
    let q = Qbf::new(
        vec![
            QuantBlock::exists(vec!["x1".into()]),
            QuantBlock::forall(vec!["y1".into()]),
        ],
        Formula::parse("x1 & y1").unwrap(),
    )
    .unwrap();
    assert!(!qbf_brute_valid(&q).unwrap());
    let inst = qbf_planning_instance(&q).unwrap();
    assert_eq!(search_plan(&inst, &limits()).unwrap(), None);
}

#[test]
fn qbf_instance_agrees_with_brute_force_on_random_matrices() {
    let mut rng = crate::random::rng_from_seed(18);
    let atoms: Vec<String> =
        ["x1", "x2", "y1", "y2"].iter().map(|s| s.to_string()).collect();
    for round in 0..100 {
        let matrix = crate::random::random_formula(&mut rng, &atoms, 3);
        let q = two_block_qbf(&matrix.to_string());
        let expected = qbf_brute_valid(&q).unwrap();
        let inst = qbf_planning_instance(&q).unwrap();
        let found = search_plan(&inst, &limits()).unwrap();
        assert_eq!(found.is_some(), expected, "round {round}: {matrix}");
        if let Some(plan) = found {
            assert_eq!(simulate(&inst, &plan, &options()).unwrap(), Verdict::Valid);
        }
    }
}

#[test]
fn qbf_instance_rejects_other_shapes() {
    let q = Qbf::new(
        vec![QuantBlock::forall(vec!["y1".into()]), QuantBlock::exists(vec!["x1".into()])],
        Formula::parse("x1 | y1").unwrap(),
    )
    .unwrap();
    assert!(qbf_planning_instance(&q).is_err());
}

// ---------------------------------------------------------------------------
// Unique-plan instances
// ---------------------------------------------------------------------------

#[test]
fn unique_plan_instance_has_exactly_one_plan() {
    let enc = crate::proplogic::cnf::Cnf3Encoding::new(2, 1);
    let unique = unique_plan_instance(&enc).unwrap();
    let plans = crate::oracle::enumerate_all_plans(&unique.instance, 3);
    assert_eq!(plans.len(), 1);
    let plan = &plans[0];
    assert_eq!(
        simulate(&unique.instance, plan, &options()).unwrap(),
        Verdict::Valid
    );

    // the chunk-opening action encodes satisfiability, formula by formula
    for k in 0..enc.num_formulas() as u64 {
        let expected = crate::proplogic::brute_sat(&enc.formula_at(k as u128).unwrap().to_formula())
            .unwrap()
            .is_some();
        let at = unique.chunk_start_position(k) as usize;
        let name = unique.instance.actions.name(plan[at]);
        assert_eq!(name, if expected { "sat" } else { "unsat" }, "formula {k}");
    }

    // the documented successor: the chunk-opening state steps to the
    // guessed state with both flag bits reflecting the verdict
    let trace = trace_of(&unique.instance, plan).unwrap();
    for k in 0..enc.num_formulas() as u64 {
        let at = unique.chunk_start_position(k) as usize;
        let (b1, b2, b3, formula, model) = unique.decode_state(&trace[at]);
        assert_eq!((b1, b2, b3, formula, model), (false, false, false, k as u128, 0));
        let expected = crate::proplogic::brute_sat(&enc.formula_at(k as u128).unwrap().to_formula())
            .unwrap()
            .is_some();
        let (b1, b2, _, formula, model) = unique.decode_state(&trace[at + 1]);
        assert_eq!((b1, b2, formula, model), (true, expected, k as u128, 0));
    }
}

#[test]
fn unique_plan_search_agrees() {
    let enc = crate::proplogic::cnf::Cnf3Encoding::new(2, 1);
    let unique = unique_plan_instance(&enc).unwrap();
    let plan = search_plan(&unique.instance, &limits()).unwrap().unwrap();
    assert_eq!(plan.len() as u64, enc.num_formulas() as u64 * unique.chunk_len() - 1);
}

// ---------------------------------------------------------------------------
// Formats
// ---------------------------------------------------------------------------

#[test]
fn instance_file_round_trip() {
    let inst = counter_instance(3);
    let parsed = PolyplanInstance::from_str(&inst.to_string()).unwrap();
    assert_eq!(parsed, inst);
}

#[test]
fn goal_circuit_round_trip() {
    let inst = PolyplanInstance::new(
        vec!["b1".into(), "b2".into()],
        State::zeros(2),
        GoalSpec::Predicate(crate::circuit::constant_circuit(2, &[true]).with_name("anygoal")),
        crate::seq::ActionSet::new(vec![("inc".to_string(), increment_circuit(2))], 2).unwrap(),
    )
    .unwrap();
    let parsed = PolyplanInstance::from_str(&inst.to_string()).unwrap();
    assert_eq!(parsed, inst);
}

#[test]
fn plan_file_round_trip() {
    let inst = counter_instance(2);
    let text = plan_to_text(&inst, &[0, 0, 0]);
    assert_eq!(plan_from_text(&inst, &text).unwrap(), vec![0, 0, 0]);
    assert!(plan_from_text(&inst, "plan\nnope\nend\n").is_err());
}
