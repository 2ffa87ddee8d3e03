//! The conversion lattice between plan sequence representations.
//!
//! Three directions admit polynomial, action-set-preserving translations
//! and are implemented here:
//!
//! * `SA -> SS`: the successor of a state is obtained by first computing
//!   the designated action and then its result, so one circuit composed of
//!   the selector and a mux over the action circuits does it;
//! * `SS -> SA`: the designated action in a state is the first action in
//!   set order whose result equals the successor circuit's output;
//! * `TS -> TA`: the action at time t is the first action leading from the
//!   state at t to the state at t + 1, both read off the time/state
//!   circuit.
//!
//! The remaining directions have no polynomial translation in general:
//! each is separated by a query problem (the time point or designated
//! action of a sequence) that is easy on one side and embeds
//! satisfiability scanning on the other, or in the time/state cases would
//! invert arbitrary injective functions. Requesting one yields
//! [`SeqError::UnsupportedDirection`] with the separating reason.

use super::{PlanSeqRepr, SeqError, SeqKind};
use crate::circuit::CircuitBuilder;

fn unsupported(from: SeqKind, to: SeqKind) -> SeqError {
    let reason = match (from, to) {
        (SeqKind::NextState, SeqKind::TimeState) => {
            "the time point problem is satisfiability-hard for next-state sequences, so no polynomial time-indexed form exists in general"
        }
        (SeqKind::TimeAction, SeqKind::TimeState) => {
            "the time point problem is satisfiability-hard for time/action sequences, so no polynomial time/state form exists in general"
        }
        (SeqKind::TimeAction, SeqKind::NextAction) => {
            "the designated-action-in-a-state problem is satisfiability-hard for time/action sequences, so no polynomial next-action form exists in general"
        }
        (SeqKind::NextAction, SeqKind::TimeAction) => {
            "the action-at-a-time-point problem is satisfiability-hard for next-action sequences with a fixed action set, so no polynomial time/action form exists in general"
        }
        (SeqKind::TimeState, SeqKind::NextState) => {
            "a polynomial next-state form of an arbitrary time/state sequence would invert arbitrary injective polynomial-time functions"
        }
        _ => "no direct translation rule exists for this pair",
    };
    SeqError::UnsupportedDirection { from, to, reason }
}

/// Convert `r` to `target` kind. The expansion is preserved state for
/// state and the action set is reused untouched; only the supported
/// directions (and the identity) succeed.
pub fn convert(r: &PlanSeqRepr, target: SeqKind) -> Result<PlanSeqRepr, SeqError> {
    match (r.kind, target) {
        (from, to) if from == to => Ok(r.clone()),
        (SeqKind::NextAction, SeqKind::NextState) => next_action_to_next_state(r),
        (SeqKind::NextState, SeqKind::NextAction) => next_state_to_next_action(r),
        (SeqKind::TimeState, SeqKind::TimeAction) => time_state_to_time_action(r),
        (from, to) => Err(unsupported(from, to)),
    }
}

/// `SA -> SS`: next(s) = actions[selector(s)](s).
fn next_action_to_next_state(r: &PlanSeqRepr) -> Result<PlanSeqRepr, SeqError> {
    let width = r.width();
    let mut b = CircuitBuilder::new("sa_to_ss");
    let state = b.add_inputs("s", width);
    let selector = b.embed(&r.circuit, &state);
    let mut next = vec![Vec::new(); width];
    for index in 0..r.actions.len() {
        let hit = b.eq_const(&selector.outputs, index as u128);
        let result = b.embed(r.actions.circuit(index), &state);
        for (bit, wire) in next.iter_mut().zip(result.outputs) {
            let masked = b.and(vec![hit.clone(), wire]);
            bit.push(masked);
        }
    }
    let outputs: Vec<String> = next.into_iter().map(|terms| b.or(terms)).collect();
    let circuit = b.finish_indexed("n", &outputs)?;
    PlanSeqRepr::new(
        SeqKind::NextState,
        r.vars.clone(),
        r.initial.clone(),
        r.actions.clone(),
        r.steps,
        circuit,
    )
}

/// Selector wire list: index of the first action whose result on `state`
/// equals `successor`, encoded in `index_bits` wires.
fn first_matching_action(
    b: &mut CircuitBuilder,
    r: &PlanSeqRepr,
    state: &[String],
    successor: &[String],
) -> Vec<String> {
    let mut matches = Vec::with_capacity(r.actions.len());
    for index in 0..r.actions.len() {
        let result = b.embed(r.actions.circuit(index), state);
        matches.push(b.eq_bits(&result.outputs, successor));
    }
    let mut first = Vec::with_capacity(matches.len());
    let mut none_before: Vec<String> = Vec::new();
    for m in &matches {
        let mut conj = none_before.clone();
        conj.push(m.clone());
        first.push(b.and(conj));
        none_before.push(b.not(m.clone()));
    }
    let index_bits = r.actions.index_bits();
    (0..index_bits)
        .map(|bit| {
            let terms = first
                .iter()
                .enumerate()
                .filter(|(index, _)| index >> (index_bits - 1 - bit) & 1 == 1)
                .map(|(_, wire)| wire.clone())
                .collect();
            b.or(terms)
        })
        .collect()
}

/// `SS -> SA`: evaluate the successor circuit and pick the first action
/// that leads there.
fn next_state_to_next_action(r: &PlanSeqRepr) -> Result<PlanSeqRepr, SeqError> {
    let width = r.width();
    let mut b = CircuitBuilder::new("ss_to_sa");
    let state = b.add_inputs("s", width);
    let successor = b.embed(&r.circuit, &state);
    let index = first_matching_action(&mut b, r, &state, &successor.outputs);
    let circuit = b.finish_indexed("a", &index)?;
    PlanSeqRepr::new(
        SeqKind::NextAction,
        r.vars.clone(),
        r.initial.clone(),
        r.actions.clone(),
        r.steps,
        circuit,
    )
}

/// `TS -> TA`: read the states at t and t + 1 off the time/state circuit
/// and pick the first action leading from one to the other.
fn time_state_to_time_action(r: &PlanSeqRepr) -> Result<PlanSeqRepr, SeqError> {
    let time_in = crate::bits::index_width(r.steps as u128);
    let time_full = r.circuit.num_inputs();
    let mut b = CircuitBuilder::new("ts_to_ta");
    let time = b.add_inputs("t", time_in);
    // zero-extend the action clock to the state clock's width
    let mut padded = Vec::with_capacity(time_full);
    for _ in 0..time_full - time_in {
        padded.push(b.const_bit(false));
    }
    padded.extend(time.iter().cloned());
    let here = b.embed(&r.circuit, &padded);
    let next_time = b.increment(&padded);
    let there = b.embed(&r.circuit, &next_time);
    let index = first_matching_action(&mut b, r, &here.outputs, &there.outputs);
    let circuit = b.finish_indexed("a", &index)?;
    PlanSeqRepr::new(
        SeqKind::TimeAction,
        r.vars.clone(),
        r.initial.clone(),
        r.actions.clone(),
        r.steps,
        circuit,
    )
}
