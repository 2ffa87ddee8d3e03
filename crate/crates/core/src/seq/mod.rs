//! Succinct sequence representations.
//!
//! Four circuit-backed representations of finite state/action sequences
//! share one container, [`PlanSeqRepr`]:
//!
//! * `TS` (time/state): circuit from time index to state;
//! * `SS` (next state): circuit from state to successor state;
//! * `TA` (time/action): circuit from time index to action index;
//! * `SA` (next action): circuit from state to action index.
//!
//! Every representation carries the initial state and the action set, so a
//! sequence can always be validated against the actions that are supposed
//! to generate it, and conversions can be required to keep the action set
//! unchanged. Two generic forms without actions, [`TimeElementRepr`] and
//! [`NextElementRepr`], cover plain element sequences.
//!
//! Elements are 0-indexed everywhere in this crate. Constructions whose
//! natural statement is 1-indexed (chunk starts, query points) expose
//! helpers that say so explicitly.

pub mod convert;
pub mod gen;

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::bits::{bits_from_u128_be, index_width, u128_from_bits_be, State};
use crate::circuit::{parse_circuit_block, Circuit, CircuitError, LineCursor};

pub use convert::convert;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SeqError {
    #[error("expansion of {actual} steps exceeds the cap of {cap}")]
    ExpansionCap { cap: u64, actual: u64 },
    #[error("index {index} out of range for a sequence with {len} queryable points")]
    IndexRange { index: u64, len: u64 },
    #[error("decoded action index {index} at step {step} is out of range (the set has {actions} actions)")]
    ActionIndexRange { step: u64, index: usize, actions: usize },
    #[error("state repeated at steps {first} and {second} in a no-repetition representation")]
    Repetition { first: u64, second: u64 },
    #[error("circuit arity {actual_in}->{actual_out} does not match the {kind} representation ({expected_in}->{expected_out})")]
    CircuitArity {
        kind: &'static str,
        expected_in: usize,
        expected_out: usize,
        actual_in: usize,
        actual_out: usize,
    },
    #[error("initial state width {actual} does not match the {vars} declared variables")]
    StateWidth { vars: usize, actual: usize },
    #[error("action `{name}` has arity {ins}->{outs}, expected {width}->{width}")]
    ActionArity { name: String, ins: usize, outs: usize, width: usize },
    #[error("duplicate action name `{0}`")]
    DuplicateAction(String),
    #[error("conversion {from} -> {to} is not supported: {reason}")]
    UnsupportedDirection { from: SeqKind, to: SeqKind, reason: &'static str },
    #[error("{what} is too large: {actual} exceeds {cap}")]
    CapExceeded { what: &'static str, cap: u128, actual: u128 },
    #[error("sequence parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Circuit(#[from] CircuitError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SeqKind {
    TimeState,
    NextState,
    TimeAction,
    NextAction,
}

impl SeqKind {
    pub fn token(self) -> &'static str {
        match self {
            SeqKind::TimeState => "ts",
            SeqKind::NextState => "ss",
            SeqKind::TimeAction => "ta",
            SeqKind::NextAction => "sa",
        }
    }

    pub fn from_token(token: &str) -> Option<Self> {
        Some(match token {
            "ts" => SeqKind::TimeState,
            "ss" => SeqKind::NextState,
            "ta" => SeqKind::TimeAction,
            "sa" => SeqKind::NextAction,
            _ => return None,
        })
    }

    pub fn is_state_kind(self) -> bool {
        matches!(self, SeqKind::TimeState | SeqKind::NextState)
    }
}

impl fmt::Display for SeqKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

/// An ordered list of named actions, each a circuit from states to states
/// of one fixed width.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ActionSet {
    entries: Vec<(String, Circuit)>,
}

impl ActionSet {
    /// Build an action set; each circuit is renamed to its action name, so
    /// the serialized form (circuit blocks headed by action names) round
    /// trips exactly.
    pub fn new(entries: Vec<(String, Circuit)>, width: usize) -> Result<Self, SeqError> {
        let mut seen = std::collections::BTreeSet::new();
        let mut renamed = Vec::with_capacity(entries.len());
        for (name, circuit) in entries {
            if !seen.insert(name.clone()) {
                return Err(SeqError::DuplicateAction(name.clone()));
            }
            if circuit.num_inputs() != width || circuit.num_outputs() != width {
                return Err(SeqError::ActionArity {
                    name: name.clone(),
                    ins: circuit.num_inputs(),
                    outs: circuit.num_outputs(),
                    width,
                });
            }
            let circuit = circuit.with_name(&name);
            renamed.push((name, circuit));
        }
        Ok(ActionSet { entries: renamed })
    }

    pub fn empty() -> Self {
        ActionSet { entries: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn name(&self, index: usize) -> &str {
        &self.entries[index].0
    }

    pub fn circuit(&self, index: usize) -> &Circuit {
        &self.entries[index].1
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &Circuit)> {
        self.entries.iter().map(|(n, c)| (n.as_str(), c))
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.entries.iter().position(|(n, _)| n == name)
    }

    /// Output width a TA/SA selector circuit must have.
    pub fn index_bits(&self) -> usize {
        index_width(self.len() as u128)
    }

    pub fn apply(&self, index: usize, state: &State) -> Result<State, CircuitError> {
        Ok(State::new(self.circuit(index).evaluate(state.bits())?))
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ExpandLimits {
    pub max_steps: u64,
}

impl Default for ExpandLimits {
    fn default() -> Self {
        ExpandLimits { max_steps: 1 << 16 }
    }
}

/// Generic time->element representation: `circuit` maps the
/// `max(1, ceil_log2(len))`-bit index of an element to the element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TimeElementRepr {
    pub circuit: Circuit,
    pub len: u64,
}

impl TimeElementRepr {
    pub fn new(circuit: Circuit, len: u64) -> Result<Self, SeqError> {
        let want = index_width(len as u128);
        if circuit.num_inputs() != want {
            return Err(SeqError::CircuitArity {
                kind: "time/element",
                expected_in: want,
                expected_out: circuit.num_outputs(),
                actual_in: circuit.num_inputs(),
                actual_out: circuit.num_outputs(),
            });
        }
        Ok(TimeElementRepr { circuit, len })
    }

    pub fn element_at(&self, t: u64) -> Result<State, SeqError> {
        if t >= self.len {
            return Err(SeqError::IndexRange { index: t, len: self.len });
        }
        let input = bits_from_u128_be(t as u128, self.circuit.num_inputs()).unwrap();
        Ok(State::new(self.circuit.evaluate(&input)?))
    }

    pub fn expand(&self, limits: &ExpandLimits) -> Result<Vec<State>, SeqError> {
        if self.len > limits.max_steps {
            return Err(SeqError::ExpansionCap { cap: limits.max_steps, actual: self.len });
        }
        (0..self.len).map(|t| self.element_at(t)).collect()
    }
}

/// Generic next-element representation for repetition-free sequences:
/// `circuit` maps an element to its successor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NextElementRepr {
    pub first: State,
    pub circuit: Circuit,
    pub len: u64,
}

impl NextElementRepr {
    pub fn new(first: State, circuit: Circuit, len: u64) -> Result<Self, SeqError> {
        if circuit.num_inputs() != first.width() || circuit.num_outputs() != first.width() {
            return Err(SeqError::CircuitArity {
                kind: "next-element",
                expected_in: first.width(),
                expected_out: first.width(),
                actual_in: circuit.num_inputs(),
                actual_out: circuit.num_outputs(),
            });
        }
        Ok(NextElementRepr { first, circuit, len })
    }

    /// Expand all `len` elements, rejecting any repetition.
    pub fn expand(&self, limits: &ExpandLimits) -> Result<Vec<State>, SeqError> {
        if self.len > limits.max_steps {
            return Err(SeqError::ExpansionCap { cap: limits.max_steps, actual: self.len });
        }
        let mut states = Vec::with_capacity(self.len as usize);
        let mut seen: HashMap<State, u64> = HashMap::new();
        let mut current = self.first.clone();
        for i in 0..self.len {
            if let Some(&first) = seen.get(&current) {
                return Err(SeqError::Repetition { first, second: i });
            }
            seen.insert(current.clone(), i);
            states.push(current.clone());
            if i + 1 < self.len {
                current = State::new(self.circuit.evaluate(current.bits())?);
            }
        }
        Ok(states)
    }

    pub fn element_at(&self, t: u64) -> Result<State, SeqError> {
        if t >= self.len {
            return Err(SeqError::IndexRange { index: t, len: self.len });
        }
        let mut current = self.first.clone();
        for _ in 0..t {
            current = State::new(self.circuit.evaluate(current.bits())?);
        }
        Ok(current)
    }
}

/// A succinct plan sequence: initial state, action set, step count `N` and
/// the representation circuit of the given kind. A plan trace has `N + 1`
/// states (indices `0..=N`) and `N` actions (indices `0..N`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlanSeqRepr {
    pub kind: SeqKind,
    pub vars: Vec<String>,
    pub initial: State,
    pub actions: ActionSet,
    pub steps: u64,
    pub circuit: Circuit,
}

/// Explicit form of a plan sequence: the state trace and, for the action
/// kinds, the designated action indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expansion {
    pub states: Vec<State>,
    pub actions: Option<Vec<usize>>,
}

/// Per-step validation outcome: the witnessing action for state kinds, the
/// designated action for action kinds, or nothing when no action explains
/// the step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepReport {
    pub step: u64,
    pub action: Option<usize>,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub valid: bool,
    pub steps: Vec<StepReport>,
    /// Pairs of trace indices holding equal states.
    pub repetitions: Vec<(u64, u64)>,
}

impl PlanSeqRepr {
    pub fn new(
        kind: SeqKind,
        vars: Vec<String>,
        initial: State,
        actions: ActionSet,
        steps: u64,
        circuit: Circuit,
    ) -> Result<Self, SeqError> {
        initial
            .expect_width(vars.len())
            .map_err(|_| SeqError::StateWidth { vars: vars.len(), actual: initial.width() })?;
        let width = vars.len();
        let (expected_in, expected_out) = match kind {
            SeqKind::TimeState => (index_width(steps as u128 + 1), width),
            SeqKind::NextState => (width, width),
            SeqKind::TimeAction => (index_width(steps as u128), actions.index_bits()),
            SeqKind::NextAction => (width, actions.index_bits()),
        };
        if circuit.num_inputs() != expected_in || circuit.num_outputs() != expected_out {
            return Err(SeqError::CircuitArity {
                kind: kind.token(),
                expected_in,
                expected_out,
                actual_in: circuit.num_inputs(),
                actual_out: circuit.num_outputs(),
            });
        }
        Ok(PlanSeqRepr { kind, vars, initial, actions, steps, circuit })
    }

    pub fn width(&self) -> usize {
        self.vars.len()
    }

    fn time_input(&self, t: u64) -> Vec<bool> {
        bits_from_u128_be(t as u128, self.circuit.num_inputs()).unwrap()
    }

    fn decode_action(&self, bits: &[bool], step: u64) -> Result<usize, SeqError> {
        let index = u128_from_bits_be(bits) as usize;
        if index >= self.actions.len() {
            return Err(SeqError::ActionIndexRange {
                step,
                index,
                actions: self.actions.len(),
            });
        }
        Ok(index)
    }

    /// The state at trace position `t` (`t <= N`), computed the cheapest
    /// way the kind allows: one circuit evaluation for time-indexed kinds,
    /// `t` iterated evaluations for state-indexed ones. Agrees with
    /// [`PlanSeqRepr::expand`] position by position.
    pub fn element_at(&self, t: u64) -> Result<State, SeqError> {
        if t > self.steps {
            return Err(SeqError::IndexRange { index: t, len: self.steps + 1 });
        }
        match self.kind {
            SeqKind::TimeState => {
                Ok(State::new(self.circuit.evaluate(&self.time_input(t))?))
            }
            SeqKind::NextState => {
                let mut current = self.initial.clone();
                for _ in 0..t {
                    current = State::new(self.circuit.evaluate(current.bits())?);
                }
                Ok(current)
            }
            SeqKind::TimeAction => {
                let mut current = self.initial.clone();
                for step in 0..t {
                    let bits = self.circuit.evaluate(&self.time_input(step))?;
                    let action = self.decode_action(&bits, step)?;
                    current = self.actions.apply(action, &current)?;
                }
                Ok(current)
            }
            SeqKind::NextAction => {
                let mut current = self.initial.clone();
                for step in 0..t {
                    let bits = self.circuit.evaluate(current.bits())?;
                    let action = self.decode_action(&bits, step)?;
                    current = self.actions.apply(action, &current)?;
                }
                Ok(current)
            }
        }
    }

    /// Expand the full trace: `N + 1` states and, for action kinds, the
    /// `N` designated action indices. The next-state kind rejects repeated
    /// states (the representation is only defined for repetition-free
    /// sequences); other kinds expand mechanically and leave repetition
    /// flagging to [`PlanSeqRepr::validate`].
    pub fn expand(&self, limits: &ExpandLimits) -> Result<Expansion, SeqError> {
        if self.steps > limits.max_steps {
            return Err(SeqError::ExpansionCap { cap: limits.max_steps, actual: self.steps });
        }
        let mut states = Vec::with_capacity(self.steps as usize + 1);
        let mut actions = if self.kind.is_state_kind() { None } else { Some(Vec::new()) };
        match self.kind {
            SeqKind::TimeState => {
                for t in 0..=self.steps {
                    states.push(State::new(self.circuit.evaluate(&self.time_input(t))?));
                }
            }
            SeqKind::NextState => {
                let mut seen: HashMap<State, u64> = HashMap::new();
                let mut current = self.initial.clone();
                for t in 0..=self.steps {
                    if let Some(&first) = seen.get(&current) {
                        return Err(SeqError::Repetition { first, second: t });
                    }
                    seen.insert(current.clone(), t);
                    states.push(current.clone());
                    if t < self.steps {
                        current = State::new(self.circuit.evaluate(current.bits())?);
                    }
                }
            }
            SeqKind::TimeAction | SeqKind::NextAction => {
                let mut current = self.initial.clone();
                states.push(current.clone());
                for step in 0..self.steps {
                    let bits = match self.kind {
                        SeqKind::TimeAction => self.circuit.evaluate(&self.time_input(step))?,
                        _ => self.circuit.evaluate(current.bits())?,
                    };
                    let action = self.decode_action(&bits, step)?;
                    actions.as_mut().unwrap().push(action);
                    current = self.actions.apply(action, &current)?;
                    states.push(current.clone());
                }
            }
        }
        Ok(Expansion { states, actions })
    }

    /// Check the trace against the action set: each step must be witnessed
    /// (state kinds: the first action in set order mapping the state to
    /// its successor; action kinds: the designated action, which produced
    /// the trace by construction), and repeated states are flagged.
    /// Diagnostics go in the report; only caps and width mismatches error.
    pub fn validate(&self, limits: &ExpandLimits) -> Result<ValidationReport, SeqError> {
        let expansion = self.expand(limits)?;
        let mut steps = Vec::with_capacity(self.steps as usize);
        for t in 0..self.steps as usize {
            let (action, ok) = match &expansion.actions {
                Some(designated) => (Some(designated[t]), true),
                None => {
                    let witness = (0..self.actions.len()).find(|&a| {
                        self.actions
                            .apply(a, &expansion.states[t])
                            .map(|next| next == expansion.states[t + 1])
                            .unwrap_or(false)
                    });
                    (witness, witness.is_some())
                }
            };
            steps.push(StepReport { step: t as u64, action, ok });
        }
        let mut repetitions = Vec::new();
        let mut seen: HashMap<&State, u64> = HashMap::new();
        for (t, state) in expansion.states.iter().enumerate() {
            match seen.get(state) {
                Some(&first) => repetitions.push((first, t as u64)),
                None => {
                    seen.insert(state, t as u64);
                }
            }
        }
        let valid = steps.iter().all(|s| s.ok) && repetitions.is_empty();
        Ok(ValidationReport { valid, steps, repetitions })
    }
}

// ---------------------------------------------------------------------------
// Text format
//
//   seq <kind>
//   vars <id>...
//   init <bitstring>
//   len <N>
//   actions
//   <circuit blocks: the actions, then the representation circuit last>
//   end
// ---------------------------------------------------------------------------

impl fmt::Display for PlanSeqRepr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "seq {}", self.kind)?;
        write!(f, "vars")?;
        for v in &self.vars {
            write!(f, " {v}")?;
        }
        writeln!(f)?;
        writeln!(f, "init {}", self.initial)?;
        writeln!(f, "len {}", self.steps)?;
        writeln!(f, "actions")?;
        for (_, circuit) in self.actions.iter() {
            write!(f, "{circuit}")?;
        }
        write!(f, "{}", self.circuit)?;
        writeln!(f, "end")
    }
}

fn parse_err(cursor: &LineCursor<'_>, message: impl Into<String>) -> SeqError {
    SeqError::Parse { line: cursor.line_no, message: message.into() }
}

impl std::str::FromStr for PlanSeqRepr {
    type Err = SeqError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut cursor = LineCursor::new(s);
        let header = cursor.next_line().ok_or_else(|| parse_err(&cursor, "expected `seq`"))?;
        let words: Vec<&str> = header.split_whitespace().collect();
        let kind = match words.as_slice() {
            ["seq", token] => SeqKind::from_token(token)
                .ok_or_else(|| parse_err(&cursor, format!("unknown kind `{token}`")))?,
            _ => return Err(parse_err(&cursor, "expected `seq <kind>`")),
        };

        let vars_line = cursor.next_line().ok_or_else(|| parse_err(&cursor, "expected `vars`"))?;
        let vars_words: Vec<&str> = vars_line.split_whitespace().collect();
        if vars_words.first() != Some(&"vars") {
            return Err(parse_err(&cursor, "expected a `vars` line"));
        }
        let vars: Vec<String> = vars_words[1..].iter().map(|w| w.to_string()).collect();

        let init_line = cursor.next_line().ok_or_else(|| parse_err(&cursor, "expected `init`"))?;
        let initial = match init_line.split_whitespace().collect::<Vec<_>>().as_slice() {
            ["init", bits] => State::parse(bits)
                .map_err(|e| parse_err(&cursor, format!("bad initial state: {e}")))?,
            _ => return Err(parse_err(&cursor, "expected `init <bits>`")),
        };

        let len_line = cursor.next_line().ok_or_else(|| parse_err(&cursor, "expected `len`"))?;
        let steps = match len_line.split_whitespace().collect::<Vec<_>>().as_slice() {
            ["len", n] => n
                .parse::<u64>()
                .map_err(|e| parse_err(&cursor, format!("bad length: {e}")))?,
            _ => return Err(parse_err(&cursor, "expected `len <N>`")),
        };

        let actions_line =
            cursor.next_line().ok_or_else(|| parse_err(&cursor, "expected `actions`"))?;
        if actions_line != "actions" {
            return Err(parse_err(&cursor, "expected an `actions` line"));
        }

        let mut circuits = Vec::new();
        loop {
            match cursor.peek_line() {
                Some("end") => {
                    cursor.next_line();
                    break;
                }
                Some(_) => circuits.push(parse_circuit_block(&mut cursor)?),
                None => return Err(parse_err(&cursor, "expected `end`")),
            }
        }
        if !cursor.at_end() {
            return Err(parse_err(&cursor, "trailing content after `end`"));
        }
        let repr_circuit = circuits
            .pop()
            .ok_or_else(|| parse_err(&cursor, "missing the representation circuit"))?;
        let actions = ActionSet::new(
            circuits.into_iter().map(|c| (c.name().to_string(), c)).collect(),
            vars.len(),
        )?;
        PlanSeqRepr::new(kind, vars, initial, actions, steps, repr_circuit)
    }
}

#[cfg(test)]
mod tests;
