//! Canonical enumeration of small circuits, the engine behind every
//! bounded-size search.
//!
//! Enumerating raw gate lists would yield the same function in endless
//! trivially-permuted forms, so enumeration is restricted to a canonical
//! shape. A canonical circuit with n inputs and m outputs has:
//!
//! * internal gates first, defining `z1..zk` in order, then one gate per
//!   output `o1..om`;
//! * internal operators drawn from `NOT`/`AND`/`OR` only (`ID` and
//!   constant internals are always removable without increasing size);
//! * output operators drawn from all six;
//! * `AND`/`OR` operand lists strictly ascending by variable index, with
//!   arity at least 2 (a one-operand `AND` is `ID`);
//! * operands taken from inputs and earlier internal variables — outputs
//!   never feed other gates;
//! * every internal variable read by some later gate;
//! * no two internal gates identical, and each adjacent pair of
//!   *independent* internal gates in strictly increasing encoding order,
//!   so reorderings of the same DAG do not reappear.
//!
//! Unused inputs are permitted. Circuits are yielded in (size,
//! lexicographic gate encoding) order, each exactly once.

use super::{Circuit, CircuitError, Gate, GateOp};

#[derive(Debug, Clone, Copy)]
pub struct EnumLimits {
    /// Hard cap on the number of circuits produced by one enumeration.
    pub max_circuits: u64,
}

impl Default for EnumLimits {
    fn default() -> Self {
        EnumLimits { max_circuits: 2_000_000 }
    }
}

/// A gate over variable indices: inputs are `0..n`, internal variable
/// `z_j` is `n + j`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
struct RawGate {
    rank: u8,
    operands: Vec<usize>,
}

impl RawGate {
    fn op(&self) -> GateOp {
        match self.rank {
            0 => GateOp::True,
            1 => GateOp::False,
            2 => GateOp::Id,
            3 => GateOp::Not,
            4 => GateOp::And,
            _ => GateOp::Or,
        }
    }

    fn cost(&self, num_inputs: usize) -> u64 {
        let gate = self.op().costed() as u64;
        gate + self.operands.iter().filter(|&&v| v < num_inputs).count() as u64
    }
}

struct Enumerator {
    num_inputs: usize,
    num_outputs: usize,
    max_size: u64,
    limit: u64,
    found: Vec<(u64, Vec<u32>, Vec<RawGate>, usize)>,
}

impl Enumerator {
    /// All strictly-ascending operand subsets of `0..vars` with size >= 2,
    /// within `budget` input reads.
    fn fanin_sets(&self, vars: usize, budget: u64) -> Vec<Vec<usize>> {
        let mut result = Vec::new();
        let mut current = Vec::new();
        self.fanin_rec(vars, 0, budget, &mut current, &mut result);
        result
    }

    fn fanin_rec(
        &self,
        vars: usize,
        from: usize,
        budget: u64,
        current: &mut Vec<usize>,
        result: &mut Vec<Vec<usize>>,
    ) {
        if current.len() >= 2 {
            result.push(current.clone());
        }
        for v in from..vars {
            let read = (v < self.num_inputs) as u64;
            if read > budget {
                // inputs precede internals, so later vs only get cheaper
                continue;
            }
            current.push(v);
            self.fanin_rec(vars, v + 1, budget - read, current, result);
            current.pop();
        }
    }

    /// Candidate gates at `vars` visible variables within `budget`;
    /// `internal` restricts to the internal operator set.
    fn candidates(&self, vars: usize, budget: u64, internal: bool) -> Vec<RawGate> {
        let mut out = Vec::new();
        if !internal {
            out.push(RawGate { rank: 0, operands: vec![] });
            out.push(RawGate { rank: 1, operands: vec![] });
            for v in 0..vars {
                let gate = RawGate { rank: 2, operands: vec![v] };
                if gate.cost(self.num_inputs) <= budget {
                    out.push(gate);
                }
            }
        }
        if budget >= 1 {
            for v in 0..vars {
                let gate = RawGate { rank: 3, operands: vec![v] };
                if gate.cost(self.num_inputs) <= budget {
                    out.push(gate);
                }
            }
            for rank in [4u8, 5] {
                for operands in self.fanin_sets(vars, budget - 1) {
                    out.push(RawGate { rank, operands });
                }
            }
        }
        out
    }

    fn run(&mut self) -> Result<(), CircuitError> {
        let mut internals = Vec::new();
        self.extend_internals(&mut internals, 0)
    }

    fn extend_internals(
        &mut self,
        internals: &mut Vec<RawGate>,
        cost: u64,
    ) -> Result<(), CircuitError> {
        self.emit_outputs(internals, cost)?;
        let vars = self.num_inputs + internals.len();
        // each further internal gate costs at least 1, plus at least one
        // zero-cost output per output variable
        if cost + 1 > self.max_size {
            return Ok(());
        }
        for gate in self.candidates(vars, self.max_size - cost, true) {
            if let Some(last) = internals.last() {
                let uses_last = gate.operands.contains(&(vars - 1));
                if !uses_last && *last >= gate {
                    continue;
                }
            }
            if internals.contains(&gate) {
                continue;
            }
            let gate_cost = gate.cost(self.num_inputs);
            internals.push(gate);
            self.extend_internals(internals, cost + gate_cost)?;
            internals.pop();
        }
        Ok(())
    }

    fn emit_outputs(&mut self, internals: &[RawGate], cost: u64) -> Result<(), CircuitError> {
        let vars = self.num_inputs + internals.len();
        let mut outputs = Vec::with_capacity(self.num_outputs);
        self.extend_outputs(internals, &mut outputs, cost, vars)
    }

    fn extend_outputs(
        &mut self,
        internals: &[RawGate],
        outputs: &mut Vec<RawGate>,
        cost: u64,
        vars: usize,
    ) -> Result<(), CircuitError> {
        if outputs.len() == self.num_outputs {
            if self.all_internals_used(internals, outputs) {
                self.record(internals, outputs, cost)?;
            }
            return Ok(());
        }
        for gate in self.candidates(vars, self.max_size - cost, false) {
            let gate_cost = gate.cost(self.num_inputs);
            outputs.push(gate);
            self.extend_outputs(internals, outputs, cost + gate_cost, vars)?;
            outputs.pop();
        }
        Ok(())
    }

    fn all_internals_used(&self, internals: &[RawGate], outputs: &[RawGate]) -> bool {
        (0..internals.len()).all(|j| {
            let var = self.num_inputs + j;
            internals[j + 1..]
                .iter()
                .chain(outputs)
                .any(|g| g.operands.contains(&var))
        })
    }

    fn record(
        &mut self,
        internals: &[RawGate],
        outputs: &[RawGate],
        cost: u64,
    ) -> Result<(), CircuitError> {
        if self.found.len() as u64 >= self.limit {
            return Err(CircuitError::EnumerationCap(self.limit));
        }
        let mut encoding = Vec::new();
        for gate in internals.iter().chain(outputs) {
            encoding.push(gate.rank as u32);
            encoding.push(gate.operands.len() as u32);
            encoding.extend(gate.operands.iter().map(|&v| v as u32));
        }
        let mut gates = internals.to_vec();
        gates.extend_from_slice(outputs);
        self.found.push((cost, encoding, gates, internals.len()));
        Ok(())
    }
}

fn var_name(num_inputs: usize, num_internals: usize, index: usize) -> String {
    if index < num_inputs {
        format!("x{}", index + 1)
    } else {
        debug_assert!(index < num_inputs + num_internals);
        format!("z{}", index - num_inputs + 1)
    }
}

/// Enumerate every canonical circuit with the given arity and
/// `size <= max_size`, in (size, lexicographic gate encoding) order.
/// Fails with [`CircuitError::EnumerationCap`] if more than
/// `limits.max_circuits` circuits exist.
pub fn enumerate_circuits(
    num_inputs: usize,
    num_outputs: usize,
    max_size: u64,
    limits: &EnumLimits,
) -> Result<Vec<Circuit>, CircuitError> {
    let mut enumerator = Enumerator {
        num_inputs,
        num_outputs,
        max_size,
        limit: limits.max_circuits,
        found: Vec::new(),
    };
    enumerator.run()?;
    enumerator.found.sort_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)));

    let mut circuits = Vec::with_capacity(enumerator.found.len());
    for (_, _, raw_gates, num_internals) in &enumerator.found {
        let inputs: Vec<String> = (0..num_inputs).map(|i| format!("x{}", i + 1)).collect();
        let outputs: Vec<String> = (0..num_outputs).map(|i| format!("o{}", i + 1)).collect();
        let gates = raw_gates
            .iter()
            .enumerate()
            .map(|(j, raw)| {
                let target = if j < *num_internals {
                    format!("z{}", j + 1)
                } else {
                    format!("o{}", j - num_internals + 1)
                };
                let operands = raw
                    .operands
                    .iter()
                    .map(|&v| var_name(num_inputs, *num_internals, v))
                    .collect();
                Gate::new(target, raw.op(), operands)
            })
            .collect();
        circuits.push(Circuit::new("c", inputs, outputs, gates)?);
    }
    Ok(circuits)
}
