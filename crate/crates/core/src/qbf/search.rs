//! Bounded-size directional model search by canonical enumeration.

use super::{check_model, DirectionalModel, Qbf, QbfError};
use crate::circuit::{enumerate_circuits, Circuit, EnumLimits};

#[derive(Debug, Clone, Copy)]
pub struct ModelSearchLimits {
    pub max_vars: usize,
    pub max_bound: u64,
    pub enumeration: EnumLimits,
}

impl Default for ModelSearchLimits {
    fn default() -> Self {
        ModelSearchLimits { max_vars: 16, max_bound: 8, enumeration: EnumLimits::default() }
    }
}

/// First directional model of total size at most `k` that checks against
/// `q`, or `None` if none exists. Tuples of block circuits are tried in
/// block-wise lexicographic enumeration order, so the result is
/// deterministic; `None` means the whole bounded space was exhausted.
pub fn bounded_model_exists(
    q: &Qbf,
    k: u64,
    limits: &ModelSearchLimits,
) -> Result<Option<DirectionalModel>, QbfError> {
    if q.num_vars() > limits.max_vars {
        return Err(QbfError::CapExceeded {
            kind: "qbf variables",
            cap: limits.max_vars as u64,
            actual: q.num_vars() as u64,
        });
    }
    if k > limits.max_bound {
        return Err(QbfError::CapExceeded { kind: "size bound", cap: limits.max_bound, actual: k });
    }

    let shape = q.model_shape();
    if shape.is_empty() {
        // no existential block: the empty model is the only candidate
        let model = DirectionalModel::new(vec![]);
        return Ok(check_model(q, &model)?.then_some(model));
    }
    let pools: Vec<Vec<Circuit>> = shape
        .iter()
        .map(|&(ins, outs)| enumerate_circuits(ins, outs, k, &limits.enumeration))
        .collect::<Result<_, _>>()?;

    let mut chosen: Vec<Circuit> = Vec::with_capacity(pools.len());
    search(q, k, &pools, &mut chosen, 0)
}

fn search(
    q: &Qbf,
    budget: u64,
    pools: &[Vec<Circuit>],
    chosen: &mut Vec<Circuit>,
    level: usize,
) -> Result<Option<DirectionalModel>, QbfError> {
    if level == pools.len() {
        let model = DirectionalModel::new(chosen.clone());
        return Ok(check_model(q, &model)?.then_some(model));
    }
    for circuit in &pools[level] {
        let cost = circuit.size();
        if cost > budget {
            // pools are sorted by size; everything after is at least as big
            break;
        }
        chosen.push(circuit.clone());
        if let Some(model) = search(q, budget - cost, pools, chosen, level + 1)? {
            return Ok(Some(model));
        }
        chosen.pop();
    }
    Ok(None)
}
