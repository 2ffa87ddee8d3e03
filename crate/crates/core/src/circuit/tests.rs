use std::str::FromStr;

use super::*;
use crate::circuit::build::{identity_circuit, increment_circuit};
use crate::proplogic::{eval_formula, Assignment};

fn conj2() -> Circuit {
    Circuit::new(
        "conj",
        vec!["x1".into(), "x2".into()],
        vec!["o1".into()],
        vec![Gate::new("o1", GateOp::And, vec!["x1".into(), "x2".into()])],
    )
    .unwrap()
}

#[test]
fn evaluate_conjunction() {
    let c = conj2();
    assert_eq!(c.evaluate(&[true, true]).unwrap(), vec![true]);
    assert_eq!(c.evaluate(&[true, false]).unwrap(), vec![false]);
}

#[test]
fn evaluate_pass_through() {
    let c = Circuit::new(
        "copy",
        vec!["x1".into()],
        vec!["y1".into()],
        vec![Gate::new("y1", GateOp::Id, vec!["x1".into()])],
    )
    .unwrap();
    assert_eq!(c.evaluate(&[false]).unwrap(), vec![false]);
    assert_eq!(c.evaluate(&[true]).unwrap(), vec![true]);
}

#[test]
fn evaluate_two_bit_incrementer_matches_arithmetic() {
    // oracle: integer increment modulo 4, checked on all four inputs
    let c = increment_circuit(2);
    for value in 0u128..4 {
        let input = crate::bits::bits_from_u128_be(value, 2).unwrap();
        let out = c.evaluate(&input).unwrap();
        assert_eq!(crate::bits::u128_from_bits_be(&out), (value + 1) % 4, "at {value}");
    }
    assert_eq!(c.evaluate(&[false, true]).unwrap(), vec![true, false]);
}

#[test]
fn evaluate_rejects_width_mismatch() {
    assert!(matches!(
        conj2().evaluate(&[true]),
        Err(CircuitError::InputArity { expected: 2, actual: 1 })
    ));
}

#[test]
fn size_metric_anchors() {
    let constant = Circuit::new(
        "t",
        vec![],
        vec!["y1".into()],
        vec![Gate::new("y1", GateOp::True, vec![])],
    )
    .unwrap();
    assert_eq!(constant.size(), 0);

    let disjunction = Circuit::new(
        "d",
        vec!["x1".into(), "x2".into(), "x3".into()],
        vec!["y3".into()],
        vec![Gate::new("y3", GateOp::Or, vec!["x1".into(), "x2".into(), "x3".into()])],
    )
    .unwrap();
    assert_eq!(disjunction.size(), 4);

    let copy = Circuit::new(
        "c",
        vec!["x1".into()],
        vec!["y1".into()],
        vec![Gate::new("y1", GateOp::Id, vec!["x1".into()])],
    )
    .unwrap();
    assert_eq!(copy.size(), 1);
}

fn assignment(pairs: &[(&str, bool)]) -> Assignment {
    pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

#[test]
fn violation_formula_on_negation() {
    let c = Circuit::new(
        "neg",
        vec!["x1".into()],
        vec!["o1".into()],
        vec![Gate::new("o1", GateOp::Not, vec!["x1".into()])],
    )
    .unwrap();
    let violation = c.violation_formula();
    // truth-table oracle over all four assignments: violated exactly when
    // o1 differs from !x1
    for x1 in [false, true] {
        for o1 in [false, true] {
            let a = assignment(&[("x1", x1), ("o1", o1)]);
            assert_eq!(eval_formula(&violation, &a).unwrap(), o1 != !x1);
        }
    }
    let consistent = assignment(&[("x1", false), ("o1", true)]);
    assert!(!eval_formula(&violation, &consistent).unwrap());
}

/// Any completion produced by evaluation falsifies the violation form;
/// every other completion satisfies it.
fn assert_violation_characterizes(c: &Circuit) {
    let violation = c.violation_formula();
    let n = c.num_inputs();
    let free: Vec<&String> = c.outputs().iter().chain(c.internal()).collect();
    let total = n + free.len();
    assert!(total <= 18, "exhaustive check is for small circuits");
    for word in 0u32..1 << total {
        let mut a = Assignment::new();
        let input: Vec<bool> = (0..n).map(|i| word >> i & 1 == 1).collect();
        for (i, v) in c.inputs().iter().enumerate() {
            a.insert(v.clone(), input[i]);
        }
        for (j, v) in free.iter().enumerate() {
            a.insert((*v).clone(), word >> (n + j) & 1 == 1);
        }
        let (outputs, internals) = c.evaluate_with_internals(&input).unwrap();
        let computed_matches = c
            .outputs()
            .iter()
            .zip(&outputs)
            .chain(c.internal().iter().zip(&internals))
            .all(|(v, &bit)| a[v] == bit);
        assert_eq!(
            eval_formula(&violation, &a).unwrap(),
            !computed_matches,
            "assignment {a:?} on {}",
            c.name()
        );
    }
}

#[test]
fn violation_formula_characterizes_consistency() {
    assert_violation_characterizes(&conj2());
    assert_violation_characterizes(&increment_circuit(2));
    let chained = Circuit::new(
        "chain",
        vec!["x1".into(), "x2".into()],
        vec!["o1".into()],
        vec![
            Gate::new("z1", GateOp::And, vec!["x1".into(), "x2".into()]),
            Gate::new("o1", GateOp::Id, vec!["z1".into()]),
        ],
    )
    .unwrap();
    assert_violation_characterizes(&chained);
    // the spec point for the chained circuit: x1=1, x2=1, z1=0, o1=0 violates
    let broken = assignment(&[("x1", true), ("x2", true), ("z1", false), ("o1", false)]);
    assert!(eval_formula(&chained.violation_formula(), &broken).unwrap());
}

#[test]
fn topological_violation_rejected() {
    let result = Circuit::new(
        "bad",
        vec!["x1".into()],
        vec!["o1".into()],
        vec![
            Gate::new("o1", GateOp::Id, vec!["z1".into()]),
            Gate::new("z1", GateOp::Not, vec!["x1".into()]),
        ],
    );
    assert!(matches!(result, Err(CircuitError::TopologicalOrder { .. })));
}

#[test]
fn text_format_round_trip() {
    let c = increment_circuit(3);
    let text = c.to_string();
    let parsed = Circuit::from_str(&text).unwrap();
    assert_eq!(parsed, c);
    for value in 0u128..8 {
        let input = crate::bits::bits_from_u128_be(value, 3).unwrap();
        assert_eq!(parsed.evaluate(&input).unwrap(), c.evaluate(&input).unwrap());
    }
}

#[test]
fn parser_rejects_forward_reference() {
    let text = "circuit bad\ninputs x1\noutputs o1\ngate o1 = ID z1\ngate z1 = NOT x1\nend\n";
    assert!(Circuit::from_str(text).is_err());
}

#[test]
fn identity_is_identity() {
    let c = identity_circuit(3);
    for value in 0u128..8 {
        let input = crate::bits::bits_from_u128_be(value, 3).unwrap();
        assert_eq!(c.evaluate(&input).unwrap(), input);
    }
}

// ---------------------------------------------------------------------------
// Enumeration
// ---------------------------------------------------------------------------

mod enumeration {
    use super::*;
    use crate::circuit::enumerate::{enumerate_circuits, EnumLimits};

    fn names(circuits: &[Circuit]) -> Vec<String> {
        circuits
            .iter()
            .map(|c| {
                c.gates()
                    .iter()
                    .map(|g| format!("{}={} {}", g.target, g.op, g.operands.join(" ")))
                    .collect::<Vec<_>>()
                    .join("; ")
            })
            .collect()
    }

    #[test]
    fn size_zero_is_the_two_constants() {
        let circuits = enumerate_circuits(1, 1, 0, &EnumLimits::default()).unwrap();
        assert_eq!(
            names(&circuits),
            vec!["o1=TRUE ".to_string(), "o1=FALSE ".to_string()]
        );
    }

    #[test]
    fn size_one_adds_the_pass_through() {
        let circuits = enumerate_circuits(1, 1, 1, &EnumLimits::default()).unwrap();
        assert_eq!(circuits.len(), 3);
        assert_eq!(circuits[2].gates()[0].op, GateOp::Id);
        assert_eq!(circuits[2].size(), 1);
    }

    #[test]
    fn yields_non_decreasing_sizes_without_duplicates() {
        let circuits = enumerate_circuits(2, 1, 3, &EnumLimits::default()).unwrap();
        let mut last = 0;
        for c in &circuits {
            assert!(c.size() >= last);
            last = c.size();
        }
        let mut seen = std::collections::HashSet::new();
        for c in &circuits {
            assert!(seen.insert(format!("{c}")), "duplicate circuit:\n{c}");
        }
    }

    #[test]
    fn enumeration_cap_is_reported() {
        let result = enumerate_circuits(2, 1, 3, &EnumLimits { max_circuits: 5 });
        assert!(matches!(result, Err(CircuitError::EnumerationCap(5))));
    }

    // Independent oracle: a brute-force generator over raw gate tuples with
    // a separately written canonicity predicate. Counts must match the
    // production enumerator exactly.

    #[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
    struct OracleGate {
        rank: u8,
        operands: Vec<usize>,
    }

    fn oracle_gate_cost(g: &OracleGate, n: usize) -> u64 {
        let gate = matches!(g.rank, 3..=5) as u64;
        gate + g.operands.iter().filter(|&&v| v < n).count() as u64
    }

    fn oracle_all_gates(vars: usize, internal: bool) -> Vec<OracleGate> {
        let mut out = Vec::new();
        if !internal {
            out.push(OracleGate { rank: 0, operands: vec![] });
            out.push(OracleGate { rank: 1, operands: vec![] });
            for v in 0..vars {
                out.push(OracleGate { rank: 2, operands: vec![v] });
            }
        }
        for v in 0..vars {
            out.push(OracleGate { rank: 3, operands: vec![v] });
        }
        for rank in [4u8, 5] {
            // every subset of size >= 2, via bitmask
            for mask in 0u32..1 << vars {
                if mask.count_ones() >= 2 {
                    let operands = (0..vars).filter(|&v| mask >> v & 1 == 1).collect();
                    out.push(OracleGate { rank, operands });
                }
            }
        }
        out
    }

    fn oracle_is_canonical(internals: &[OracleGate], outputs: &[OracleGate], n: usize) -> bool {
        // adjacent independent internal gates must ascend strictly
        for j in 1..internals.len() {
            let prev_var = n + j - 1;
            if !internals[j].operands.contains(&prev_var) && internals[j - 1] >= internals[j] {
                return false;
            }
        }
        // no duplicate internal gates
        for j in 1..internals.len() {
            if internals[..j].contains(&internals[j]) {
                return false;
            }
        }
        // every internal variable read later
        for j in 0..internals.len() {
            let var = n + j;
            let used = internals[j + 1..]
                .iter()
                .chain(outputs)
                .any(|g| g.operands.contains(&var));
            if !used {
                return false;
            }
        }
        true
    }

    fn oracle_count(n: usize, m: usize, max_size: u64) -> u64 {
        let mut count = 0;
        // internal gate counts are bounded by the budget: every internal
        // gate costs at least 1
        for num_internal in 0..=max_size as usize {
            let mut internals = vec![0usize; num_internal];
            loop {
                let gate_lists: Vec<Vec<OracleGate>> = (0..num_internal)
                    .map(|j| oracle_all_gates(n + j, true))
                    .collect();
                if internals.iter().enumerate().all(|(j, &i)| i < gate_lists[j].len()) {
                    let chosen: Vec<OracleGate> = internals
                        .iter()
                        .enumerate()
                        .map(|(j, &i)| gate_lists[j][i].clone())
                        .collect();
                    let internal_cost: u64 =
                        chosen.iter().map(|g| oracle_gate_cost(g, n)).sum();
                    if internal_cost <= max_size {
                        count += oracle_count_outputs(&chosen, n, m, max_size - internal_cost);
                    }
                }
                // odometer over the gate choice indices
                let mut pos = 0;
                loop {
                    if pos == num_internal {
                        break;
                    }
                    internals[pos] += 1;
                    if internals[pos] < oracle_all_gates(n + pos, true).len() {
                        break;
                    }
                    internals[pos] = 0;
                    pos += 1;
                }
                if pos == num_internal {
                    break;
                }
            }
            if num_internal == 0 {
                // the loop above ran exactly once for the empty list
                continue;
            }
        }
        count
    }

    fn oracle_count_outputs(internals: &[OracleGate], n: usize, m: usize, budget: u64) -> u64 {
        let vars = n + internals.len();
        let output_gates = oracle_all_gates(vars, false);
        let mut chosen = vec![0usize; m];
        let mut count = 0;
        loop {
            let outputs: Vec<OracleGate> =
                chosen.iter().map(|&i| output_gates[i].clone()).collect();
            let cost: u64 = outputs.iter().map(|g| oracle_gate_cost(g, n)).sum();
            if cost <= budget && oracle_is_canonical(internals, &outputs, n) {
                count += 1;
            }
            let mut pos = 0;
            loop {
                if pos == m {
                    return count;
                }
                chosen[pos] += 1;
                if chosen[pos] < output_gates.len() {
                    break;
                }
                chosen[pos] = 0;
                pos += 1;
            }
        }
    }

    #[test]
    fn count_matches_independent_oracle() {
        for (n, m, max_size) in [(1, 1, 2), (2, 1, 2), (2, 1, 3), (2, 2, 2), (3, 1, 2)] {
            let enumerated =
                enumerate_circuits(n, m, max_size, &EnumLimits::default()).unwrap().len() as u64;
            let counted = oracle_count(n, m, max_size);
            assert_eq!(enumerated, counted, "at ({n},{m},<={max_size})");
        }
    }

    #[test]
    fn frozen_count_for_two_inputs_bound_two() {
        // value computed with the independent recursive counter above
        assert_eq!(oracle_count(2, 1, 2), 8);
        let circuits = enumerate_circuits(2, 1, 2, &EnumLimits::default()).unwrap();
        assert_eq!(circuits.len(), 8);
    }
}
