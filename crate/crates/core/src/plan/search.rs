//! Brute-force plan search and bounded succinct-plan search.

use std::collections::{HashMap, VecDeque};

use super::{simulate_repr, PlanError, PolyplanInstance, SimulateOptions, Verdict};
use crate::bits::{index_width, State};
use crate::circuit::{enumerate_circuits, EnumLimits};
use crate::seq::{PlanSeqRepr, SeqKind};

#[derive(Debug, Clone, Copy)]
pub struct PlanSearchLimits {
    /// Cap on `2^n`, the explored state space of breadth-first search.
    pub max_states: u64,
    /// Cap on the size bound of the succinct search.
    pub max_bound: u64,
    /// Cap on candidate representations tried by the succinct search.
    pub max_candidates: u64,
    pub enumeration: EnumLimits,
}

impl Default for PlanSearchLimits {
    fn default() -> Self {
        PlanSearchLimits {
            max_states: 1 << 22,
            max_bound: 8,
            max_candidates: 50_000_000,
            enumeration: EnumLimits::default(),
        }
    }
}

/// Shortest plan by breadth-first search over states, expanding actions in
/// set order so ties break deterministically; `None` exactly when the goal
/// is unreachable. The no-repetition requirement costs nothing here: a
/// shortest path never revisits a state.
pub fn search_plan(
    inst: &PolyplanInstance,
    limits: &PlanSearchLimits,
) -> Result<Option<Vec<usize>>, PlanError> {
    let width = inst.width();
    if width > 63 || 1u64 << width > limits.max_states {
        return Err(PlanError::CapExceeded {
            what: "search space",
            cap: limits.max_states as u128,
            actual: if width > 127 { u128::MAX } else { 1u128 << width },
        });
    }

    // parent map: packed state -> (packed predecessor, action index)
    let mut parents: HashMap<u128, (u128, usize)> = HashMap::new();
    let mut queue = VecDeque::new();
    let start = inst.initial.to_u128();
    parents.insert(start, (start, usize::MAX));
    queue.push_back(inst.initial.clone());

    while let Some(state) = queue.pop_front() {
        if inst.goal.accepts(&state)? {
            let mut plan = Vec::new();
            let mut at = state.to_u128();
            while at != start {
                let (prev, action) = parents[&at];
                plan.push(action);
                at = prev;
            }
            plan.reverse();
            return Ok(Some(plan));
        }
        for action in 0..inst.actions.len() {
            let next = inst.actions.apply(action, &state)?;
            let key = next.to_u128();
            if let std::collections::hash_map::Entry::Vacant(entry) = parents.entry(key) {
                entry.insert((state.to_u128(), action));
                queue.push_back(next);
            }
        }
    }
    Ok(None)
}

/// First succinct plan representation of the requested kind whose circuit
/// has size at most `k` and whose streaming verdict is valid, or `None`
/// after exhausting every candidate. Candidates are tried by increasing
/// step count `N` (the horizon stays below `2^n`, since a repetition-free
/// trace cannot be longer), and for each `N` in canonical enumeration
/// order, so the result is deterministic.
pub fn bounded_succinct_plan_exists(
    inst: &PolyplanInstance,
    k: u64,
    kind: SeqKind,
    limits: &PlanSearchLimits,
) -> Result<Option<PlanSeqRepr>, PlanError> {
    if k > limits.max_bound {
        return Err(PlanError::CapExceeded {
            what: "size bound",
            cap: limits.max_bound as u128,
            actual: k as u128,
        });
    }
    let width = inst.width();
    if width > 63 || 1u64 << width > limits.max_states {
        return Err(PlanError::CapExceeded {
            what: "horizon",
            cap: limits.max_states as u128,
            actual: if width > 127 { u128::MAX } else { 1u128 << width },
        });
    }

    let options = SimulateOptions::default();
    let mut tried: u64 = 0;
    // a repetition-free trace has at most 2^n states, so N < 2^n
    let horizon = (1u64 << width) - 1;
    for steps in 0..=horizon {
        let (ins, outs) = match kind {
            SeqKind::TimeState => (index_width(steps as u128 + 1), width),
            SeqKind::NextState => (width, width),
            SeqKind::TimeAction => (index_width(steps as u128), inst.actions.index_bits()),
            SeqKind::NextAction => (width, inst.actions.index_bits()),
        };
        let pool = enumerate_circuits(ins, outs, k, &limits.enumeration)?;
        for circuit in pool {
            tried += 1;
            if tried > limits.max_candidates {
                return Err(PlanError::CapExceeded {
                    what: "candidate representations",
                    cap: limits.max_candidates as u128,
                    actual: tried as u128,
                });
            }
            let candidate = PlanSeqRepr::new(
                kind,
                inst.vars.clone(),
                inst.initial.clone(),
                inst.actions.clone(),
                steps,
                circuit,
            )?;
            match simulate_repr(inst, &candidate, &options)? {
                Verdict::Valid => return Ok(Some(candidate)),
                Verdict::Failure { .. } => {}
            }
        }
    }
    Ok(None)
}

/// Convenience: the trace of an explicit plan, for tests and reports.
pub fn trace_of(
    inst: &PolyplanInstance,
    plan: &[usize],
) -> Result<Vec<State>, PlanError> {
    let mut states = vec![inst.initial.clone()];
    for (step, &action) in plan.iter().enumerate() {
        if action >= inst.actions.len() {
            return Err(PlanError::BadActionIndex {
                step: step as u64,
                index: action,
                actions: inst.actions.len(),
            });
        }
        let next = inst.actions.apply(action, states.last().unwrap())?;
        states.push(next);
    }
    Ok(states)
}
