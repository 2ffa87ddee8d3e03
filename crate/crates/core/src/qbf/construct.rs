//! Explicit QBF constructions: the hard validity family and the two
//! property-circuit embeddings.

use super::{Qbf, QbfError, QuantBlock};
use crate::circuit::Circuit;
use crate::proplogic::Formula;

/// The alternating family `forall x1 exists y1 ... forall xk exists yk .
/// yk <-> x1 | ... | xk`. Valid for every `k >= 1`, but its minimal model
/// must compute the full disjunction in the last block.
pub fn hard_family(k: u32) -> Result<Qbf, QbfError> {
    if k == 0 {
        return Err(QbfError::BadParameter);
    }
    let mut prefix = Vec::new();
    for i in 1..=k {
        prefix.push(QuantBlock::forall(vec![format!("x{i}")]));
        prefix.push(QuantBlock::exists(vec![format!("y{i}")]));
    }
    let disjunction = Formula::or((1..=k).map(|i| Formula::atom(format!("x{i}"))).collect());
    let matrix = Formula::iff(Formula::atom(format!("y{k}")), disjunction);
    Qbf::new(prefix, matrix)
}

fn check_property(prefix: &[QuantBlock], property: &Circuit) -> Result<(), QbfError> {
    if property.num_outputs() != 1 {
        return Err(QbfError::PropertyOutputs(property.num_outputs()));
    }
    let prefix_vars: Vec<String> =
        prefix.iter().flat_map(|b| b.vars.iter().cloned()).collect();
    if property.inputs() != prefix_vars.as_slice() {
        return Err(QbfError::PropertyInputs {
            expected: prefix_vars,
            actual: property.inputs().to_vec(),
        });
    }
    for v in property.outputs().iter().chain(property.internal()) {
        if prefix_vars.contains(v) {
            return Err(QbfError::VariableClash(v.clone()));
        }
    }
    Ok(())
}

/// Embed a single-output property circuit under a quantifier prefix by
/// existentially quantifying the circuit's output and internal variables:
/// the matrix asserts the output together with every gate equation. The
/// result is valid exactly when the quantified property holds.
pub fn embed_exists(prefix: Vec<QuantBlock>, property: &Circuit) -> Result<Qbf, QbfError> {
    check_property(&prefix, property)?;
    let output = property.outputs()[0].clone();
    let mut block_vars = vec![output.clone()];
    block_vars.extend(property.internal().iter().cloned());
    let mut prefix = prefix;
    prefix.push(QuantBlock::exists(block_vars));
    let matrix = Formula::and(vec![Formula::Atom(output), property.gate_equations()]);
    Qbf::new(prefix, matrix)
}

/// The universal twin of [`embed_exists`]: quantify the circuit variables
/// universally over the matrix `o | <violation form>`, i.e. "an assignment
/// claiming the output false must break some gate". Assignments
/// inconsistent with the gates satisfy the violation disjunct outright, so
/// the result is valid exactly when the quantified property holds.
pub fn embed_forall(prefix: Vec<QuantBlock>, property: &Circuit) -> Result<Qbf, QbfError> {
    check_property(&prefix, property)?;
    let output = property.outputs()[0].clone();
    let mut block_vars = vec![output.clone()];
    block_vars.extend(property.internal().iter().cloned());
    let mut prefix = prefix;
    prefix.push(QuantBlock::forall(block_vars));
    let matrix = Formula::or(vec![Formula::Atom(output), property.violation_formula()]);
    Qbf::new(prefix, matrix)
}
