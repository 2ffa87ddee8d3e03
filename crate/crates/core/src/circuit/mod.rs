//! Boolean circuits: representation, evaluation, sizing and enumeration.
//!
//! A circuit is a named, topologically ordered list of gates over three
//! disjoint variable groups: inputs, outputs and internal wires. Each gate
//! defines exactly one variable from a single operator applied to earlier
//! variables. Evaluation walks the gate list once, so it runs in time
//! linear in the circuit.
//!
//! The size metric is the one used throughout this crate for "how much
//! space does this representation take": every operand occurrence that
//! reads an *input* variable costs 1, and every `AND`/`OR`/`NOT` gate
//! costs 1. `ID`, `TRUE` and `FALSE` gates are free (their input reads,
//! if any, still count). Under this metric a constant output costs 0, a
//! bare pass-through costs 1 and an unbounded fan-in disjunction of k
//! inputs costs k + 1.

pub mod build;
pub mod enumerate;

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::proplogic::Formula;

pub use build::{
    constant_circuit, formula_to_circuit, identity_circuit, increment_circuit, CircuitBuilder,
};
pub use enumerate::{enumerate_circuits, EnumLimits};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CircuitError {
    #[error("input width {actual} does not match circuit arity {expected}")]
    InputArity { expected: usize, actual: usize },
    #[error("variable `{0}` is defined more than once")]
    DuplicateDefinition(String),
    #[error("variable `{0}` is declared more than once")]
    DuplicateName(String),
    #[error("gate for `{target}` reads `{operand}` before it is defined")]
    TopologicalOrder { target: String, operand: String },
    #[error("gate for `{target}`: operator {op} expects {expected} operands, got {actual}")]
    GateArity { target: String, op: GateOp, expected: &'static str, actual: usize },
    #[error("output variable `{0}` has no defining gate")]
    UndefinedOutput(String),
    #[error("input variable `{0}` may not be a gate target")]
    InputTarget(String),
    #[error("enumeration exceeded the cap of {0} circuits")]
    EnumerationCap(u64),
    #[error("circuit parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// Gate operators. The declaration order doubles as the canonical rank
/// used by the enumerator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GateOp {
    True,
    False,
    Id,
    Not,
    And,
    Or,
}

impl GateOp {
    pub fn name(self) -> &'static str {
        match self {
            GateOp::True => "TRUE",
            GateOp::False => "FALSE",
            GateOp::Id => "ID",
            GateOp::Not => "NOT",
            GateOp::And => "AND",
            GateOp::Or => "OR",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "TRUE" => GateOp::True,
            "FALSE" => GateOp::False,
            "ID" => GateOp::Id,
            "NOT" => GateOp::Not,
            "AND" => GateOp::And,
            "OR" => GateOp::Or,
            _ => return None,
        })
    }

    pub fn rank(self) -> u8 {
        self as u8
    }

    /// Whether the gate itself contributes to the size metric.
    pub fn costed(self) -> bool {
        matches!(self, GateOp::Not | GateOp::And | GateOp::Or)
    }

    fn arity_ok(self, n: usize) -> bool {
        match self {
            GateOp::True | GateOp::False => n == 0,
            GateOp::Id | GateOp::Not => n == 1,
            GateOp::And | GateOp::Or => n >= 1,
        }
    }

    fn arity_spec(self) -> &'static str {
        match self {
            GateOp::True | GateOp::False => "0",
            GateOp::Id | GateOp::Not => "1",
            GateOp::And | GateOp::Or => ">= 1",
        }
    }

    pub fn apply(self, args: &[bool]) -> bool {
        match self {
            GateOp::True => true,
            GateOp::False => false,
            GateOp::Id => args[0],
            GateOp::Not => !args[0],
            GateOp::And => args.iter().all(|&b| b),
            GateOp::Or => args.iter().any(|&b| b),
        }
    }
}

impl fmt::Display for GateOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Gate {
    pub target: String,
    pub op: GateOp,
    pub operands: Vec<String>,
}

impl Gate {
    pub fn new(target: impl Into<String>, op: GateOp, operands: Vec<String>) -> Self {
        Gate { target: target.into(), op, operands }
    }
}

/// Resolved evaluation schedule: variable names flattened to slots so that
/// evaluation allocates one `Vec<bool>` and nothing else.
#[derive(Debug, Clone, PartialEq, Eq)]
struct EvalPlan {
    slots: usize,
    steps: Vec<(usize, GateOp, Vec<usize>)>,
    output_slots: Vec<usize>,
    internal_slots: Vec<usize>,
}

/// A boolean circuit in single-operator gate form.
///
/// Invariants, enforced by [`Circuit::new`] and the parser:
/// * every output and internal variable is defined by exactly one gate,
///   inputs by none;
/// * operands of each gate are inputs or targets of strictly earlier gates;
/// * `NOT`/`ID` have one operand, `TRUE`/`FALSE` none, `AND`/`OR` at least
///   one (unbounded fan-in).
#[derive(Debug, Clone)]
pub struct Circuit {
    name: String,
    inputs: Vec<String>,
    outputs: Vec<String>,
    internal: Vec<String>,
    gates: Vec<Gate>,
    plan: EvalPlan,
}

impl PartialEq for Circuit {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
            && self.inputs == other.inputs
            && self.outputs == other.outputs
            && self.gates == other.gates
    }
}

impl Eq for Circuit {}

impl Circuit {
    pub fn new(
        name: impl Into<String>,
        inputs: Vec<String>,
        outputs: Vec<String>,
        gates: Vec<Gate>,
    ) -> Result<Self, CircuitError> {
        let name = name.into();
        let mut slot_of: HashMap<&str, usize> = HashMap::new();
        for v in &inputs {
            if slot_of.insert(v, slot_of.len()).is_some() {
                return Err(CircuitError::DuplicateName(v.clone()));
            }
        }
        let output_set: HashMap<&str, usize> = {
            let mut m = HashMap::new();
            for (i, v) in outputs.iter().enumerate() {
                if m.insert(v.as_str(), i).is_some() {
                    return Err(CircuitError::DuplicateName(v.clone()));
                }
            }
            m
        };

        let mut steps = Vec::with_capacity(gates.len());
        let mut internal = Vec::new();
        let mut internal_slots = Vec::new();
        for gate in &gates {
            if !gate.op.arity_ok(gate.operands.len()) {
                return Err(CircuitError::GateArity {
                    target: gate.target.clone(),
                    op: gate.op,
                    expected: gate.op.arity_spec(),
                    actual: gate.operands.len(),
                });
            }
            let mut operand_slots = Vec::with_capacity(gate.operands.len());
            for operand in &gate.operands {
                match slot_of.get(operand.as_str()) {
                    Some(&s) => operand_slots.push(s),
                    None => {
                        return Err(CircuitError::TopologicalOrder {
                            target: gate.target.clone(),
                            operand: operand.clone(),
                        })
                    }
                }
            }
            if inputs.iter().any(|v| *v == gate.target) {
                return Err(CircuitError::InputTarget(gate.target.clone()));
            }
            let slot = slot_of.len();
            if slot_of.insert(&gate.target, slot).is_some() {
                return Err(CircuitError::DuplicateDefinition(gate.target.clone()));
            }
            if !output_set.contains_key(gate.target.as_str()) {
                internal.push(gate.target.clone());
                internal_slots.push(slot);
            }
            steps.push((slot, gate.op, operand_slots));
        }

        let mut output_slots = Vec::with_capacity(outputs.len());
        for v in &outputs {
            match slot_of.get(v.as_str()) {
                Some(&s) if s >= inputs.len() => output_slots.push(s),
                _ => return Err(CircuitError::UndefinedOutput(v.clone())),
            }
        }

        let plan = EvalPlan { slots: slot_of.len(), steps, output_slots, internal_slots };
        Ok(Circuit { name, inputs, outputs, internal, gates, plan })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn inputs(&self) -> &[String] {
        &self.inputs
    }

    pub fn outputs(&self) -> &[String] {
        &self.outputs
    }

    /// Internal variables in definition order (gate targets that are not
    /// outputs).
    pub fn internal(&self) -> &[String] {
        &self.internal
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn num_inputs(&self) -> usize {
        self.inputs.len()
    }

    pub fn num_outputs(&self) -> usize {
        self.outputs.len()
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// Evaluate the circuit on one input vector, visiting each gate exactly
    /// once in definition order.
    pub fn evaluate(&self, input: &[bool]) -> Result<Vec<bool>, CircuitError> {
        Ok(self.run(input)?.0)
    }

    /// Like [`Circuit::evaluate`] but also returns the internal variable
    /// values in the order of [`Circuit::internal`].
    pub fn evaluate_with_internals(
        &self,
        input: &[bool],
    ) -> Result<(Vec<bool>, Vec<bool>), CircuitError> {
        self.run(input)
    }

    fn run(&self, input: &[bool]) -> Result<(Vec<bool>, Vec<bool>), CircuitError> {
        if input.len() != self.inputs.len() {
            return Err(CircuitError::InputArity {
                expected: self.inputs.len(),
                actual: input.len(),
            });
        }
        let mut slots = vec![false; self.plan.slots];
        slots[..input.len()].copy_from_slice(input);
        let mut args = Vec::new();
        for (target, op, operands) in &self.plan.steps {
            args.clear();
            args.extend(operands.iter().map(|&s| slots[s]));
            slots[*target] = op.apply(&args);
        }
        let outputs = self.plan.output_slots.iter().map(|&s| slots[s]).collect();
        let internals = self.plan.internal_slots.iter().map(|&s| slots[s]).collect();
        Ok((outputs, internals))
    }

    /// Size under the crate-wide metric: input reads plus costed gates.
    pub fn size(&self) -> u64 {
        let mut size = 0u64;
        for gate in &self.gates {
            if gate.op.costed() {
                size += 1;
            }
            size += gate
                .operands
                .iter()
                .filter(|v| self.inputs.iter().any(|i| i == *v))
                .count() as u64;
        }
        size
    }

    fn gate_body(&self, gate: &Gate) -> Formula {
        let atom = |v: &String| Formula::Atom(v.clone());
        match gate.op {
            GateOp::True => Formula::True,
            GateOp::False => Formula::False,
            GateOp::Id => atom(&gate.operands[0]),
            GateOp::Not => Formula::not(atom(&gate.operands[0])),
            GateOp::And => Formula::and(gate.operands.iter().map(atom).collect()),
            GateOp::Or => Formula::or(gate.operands.iter().map(atom).collect()),
        }
    }

    /// The circuit as a conjunction of gate equations `target <-> body`,
    /// over input, output and internal variables. An assignment satisfies
    /// this formula exactly when it is consistent with every gate.
    pub fn gate_equations(&self) -> Formula {
        Formula::and(
            self.gates
                .iter()
                .map(|g| Formula::iff(Formula::Atom(g.target.clone()), self.gate_body(g)))
                .collect(),
        )
    }

    /// The violation form of the circuit: a disjunction of gate-equation
    /// violations, true exactly when some gate equation is broken. Negated,
    /// it is equivalent to [`Circuit::gate_equations`]; it is the form that
    /// lets circuit variables be universally quantified.
    pub fn violation_formula(&self) -> Formula {
        Formula::or(
            self.gates
                .iter()
                .map(|g| {
                    Formula::not(Formula::iff(
                        Formula::Atom(g.target.clone()),
                        self.gate_body(g),
                    ))
                })
                .collect(),
        )
    }

    /// One propositional formula per output, over `input_atoms` (bound
    /// positionally to the circuit inputs), with every internal reference
    /// substituted through. Can grow exponentially on circuits with deep
    /// shared structure; meant for small circuits.
    pub fn output_formulas(&self, input_atoms: &[String]) -> Vec<Formula> {
        assert_eq!(input_atoms.len(), self.inputs.len(), "atom binding width mismatch");
        let mut by_wire: HashMap<&str, Formula> = self
            .inputs
            .iter()
            .zip(input_atoms)
            .map(|(v, a)| (v.as_str(), Formula::Atom(a.clone())))
            .collect();
        for gate in &self.gates {
            let of = |v: &String| by_wire[v.as_str()].clone();
            let body = match gate.op {
                GateOp::True => Formula::True,
                GateOp::False => Formula::False,
                GateOp::Id => of(&gate.operands[0]),
                GateOp::Not => Formula::not(of(&gate.operands[0])),
                GateOp::And => Formula::and(gate.operands.iter().map(of).collect()),
                GateOp::Or => Formula::or(gate.operands.iter().map(of).collect()),
            };
            by_wire.insert(&gate.target, body);
        }
        self.outputs.iter().map(|v| by_wire[v.as_str()].clone()).collect()
    }
}

// ---------------------------------------------------------------------------
// Text format
//
//   circuit <name>
//   inputs <id>...
//   outputs <id>...
//   gate <id> = <OP> <id>...
//   end
//
// One gate per line in definition order; parsers reject any violation of
// topological order. Files are UTF-8 with LF line ends.
// ---------------------------------------------------------------------------

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "circuit {}", self.name)?;
        write!(f, "inputs")?;
        for v in &self.inputs {
            write!(f, " {v}")?;
        }
        writeln!(f)?;
        write!(f, "outputs")?;
        for v in &self.outputs {
            write!(f, " {v}")?;
        }
        writeln!(f)?;
        for gate in &self.gates {
            write!(f, "gate {} = {}", gate.target, gate.op)?;
            for v in &gate.operands {
                write!(f, " {v}")?;
            }
            writeln!(f)?;
        }
        writeln!(f, "end")
    }
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Line-oriented cursor shared by all the text formats in this crate.
pub(crate) struct LineCursor<'a> {
    lines: std::iter::Peekable<std::str::Lines<'a>>,
    pub line_no: usize,
}

impl<'a> LineCursor<'a> {
    pub fn new(text: &'a str) -> Self {
        LineCursor { lines: text.lines().peekable(), line_no: 0 }
    }

    /// Next non-blank line, trimmed.
    pub fn next_line(&mut self) -> Option<&'a str> {
        loop {
            let line = self.lines.next()?;
            self.line_no += 1;
            let trimmed = line.trim();
            if !trimmed.is_empty() {
                return Some(trimmed);
            }
        }
    }

    pub fn peek_line(&mut self) -> Option<&'a str> {
        loop {
            let line = *self.lines.peek()?;
            if line.trim().is_empty() {
                self.lines.next();
                self.line_no += 1;
            } else {
                return Some(line.trim());
            }
        }
    }

    pub fn at_end(&mut self) -> bool {
        self.peek_line().is_none()
    }
}

fn parse_err(cursor: &LineCursor<'_>, message: impl Into<String>) -> CircuitError {
    CircuitError::Parse { line: cursor.line_no, message: message.into() }
}

fn parse_ids(cursor: &LineCursor<'_>, words: &[&str]) -> Result<Vec<String>, CircuitError> {
    words
        .iter()
        .map(|w| {
            if is_identifier(w) {
                Ok(w.to_string())
            } else {
                Err(parse_err(cursor, format!("`{w}` is not a valid identifier")))
            }
        })
        .collect()
}

/// Parse one `circuit ... end` block starting at the cursor's next line.
pub(crate) fn parse_circuit_block(cursor: &mut LineCursor<'_>) -> Result<Circuit, CircuitError> {
    let header = cursor.next_line().ok_or_else(|| parse_err(cursor, "expected `circuit`"))?;
    let mut words = header.split_whitespace();
    if words.next() != Some("circuit") {
        return Err(parse_err(cursor, "expected a `circuit <name>` header"));
    }
    let name = match (words.next(), words.next()) {
        (Some(n), None) if is_identifier(n) => n.to_string(),
        _ => return Err(parse_err(cursor, "expected a single circuit name")),
    };

    let inputs_line = cursor.next_line().ok_or_else(|| parse_err(cursor, "expected `inputs`"))?;
    let inputs_words: Vec<&str> = inputs_line.split_whitespace().collect();
    if inputs_words.first() != Some(&"inputs") {
        return Err(parse_err(cursor, "expected an `inputs` line"));
    }
    let inputs = parse_ids(cursor, &inputs_words[1..])?;

    let outputs_line =
        cursor.next_line().ok_or_else(|| parse_err(cursor, "expected `outputs`"))?;
    let outputs_words: Vec<&str> = outputs_line.split_whitespace().collect();
    if outputs_words.first() != Some(&"outputs") {
        return Err(parse_err(cursor, "expected an `outputs` line"));
    }
    let outputs = parse_ids(cursor, &outputs_words[1..])?;

    let mut gates = Vec::new();
    loop {
        let line = cursor.next_line().ok_or_else(|| parse_err(cursor, "expected `end`"))?;
        if line == "end" {
            break;
        }
        let words: Vec<&str> = line.split_whitespace().collect();
        if words.first() != Some(&"gate") || words.get(2) != Some(&"=") {
            return Err(parse_err(cursor, "expected `gate <id> = <OP> <id>...` or `end`"));
        }
        let target = parse_ids(cursor, &words[1..2])?.pop().unwrap();
        let op = GateOp::from_name(words[3])
            .ok_or_else(|| parse_err(cursor, format!("unknown operator `{}`", words[3])))?;
        let operands = parse_ids(cursor, &words[4..])?;
        gates.push(Gate::new(target, op, operands));
    }

    Circuit::new(name, inputs, outputs, gates)
        .map_err(|e| parse_err(cursor, format!("invalid circuit: {e}")))
}

impl std::str::FromStr for Circuit {
    type Err = CircuitError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut cursor = LineCursor::new(s);
        let circuit = parse_circuit_block(&mut cursor)?;
        if !cursor.at_end() {
            return Err(parse_err(&cursor, "trailing content after `end`"));
        }
        Ok(circuit)
    }
}

#[cfg(test)]
mod tests;
