//! Circuit-action planning: instances, streaming plan verification,
//! brute-force plan search, bounded succinct-plan search and the instance
//! generators.
//!
//! An instance is a set of n boolean state variables, an initial state, a
//! goal (a single state by default, optionally a predicate circuit) and a
//! set of actions, each a circuit from states to states. A plan is an
//! action sequence whose trace runs from the initial state to the goal
//! without repeating a state.

pub mod gen;
pub mod search;

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::bits::State;
use crate::circuit::{parse_circuit_block, Circuit, CircuitError, LineCursor};
use crate::seq::{ActionSet, PlanSeqRepr, SeqError, SeqKind};

pub use gen::{long_plan_instance, qbf_planning_instance, unique_plan_instance};
pub use search::{bounded_succinct_plan_exists, search_plan, PlanSearchLimits};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PlanError {
    #[error("state width {actual} does not match the instance's {expected} variables")]
    StateWidth { expected: usize, actual: usize },
    #[error("goal circuit must map {width} state bits to one bit, has arity {ins}->{outs}")]
    GoalArity { width: usize, ins: usize, outs: usize },
    #[error("action index {index} at step {step} is out of range ({actions} actions)")]
    BadActionIndex { step: u64, index: usize, actions: usize },
    #[error("{what} exceeds the cap: {actual} > {cap}")]
    CapExceeded { what: &'static str, cap: u128, actual: u128 },
    #[error("repetition tracking supports at most 128 state bits, instance has {0}")]
    TooWideForTracking(usize),
    #[error("instance parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error(transparent)]
    Seq(#[from] SeqError),
}

/// Goal specification: a single exact state, or a predicate circuit from
/// states to one accept bit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GoalSpec {
    State(State),
    Predicate(Circuit),
}

impl GoalSpec {
    pub fn accepts(&self, state: &State) -> Result<bool, PlanError> {
        match self {
            GoalSpec::State(goal) => Ok(goal == state),
            GoalSpec::Predicate(circuit) => Ok(circuit.evaluate(state.bits())?[0]),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyplanInstance {
    pub vars: Vec<String>,
    pub initial: State,
    pub goal: GoalSpec,
    pub actions: ActionSet,
}

impl PolyplanInstance {
    pub fn new(
        vars: Vec<String>,
        initial: State,
        goal: GoalSpec,
        actions: ActionSet,
    ) -> Result<Self, PlanError> {
        let width = vars.len();
        initial
            .expect_width(width)
            .map_err(|_| PlanError::StateWidth { expected: width, actual: initial.width() })?;
        match &goal {
            GoalSpec::State(goal) => goal
                .expect_width(width)
                .map_err(|_| PlanError::StateWidth { expected: width, actual: goal.width() })?,
            GoalSpec::Predicate(circuit) => {
                if circuit.num_inputs() != width || circuit.num_outputs() != 1 {
                    return Err(PlanError::GoalArity {
                        width,
                        ins: circuit.num_inputs(),
                        outs: circuit.num_outputs(),
                    });
                }
            }
        }
        Ok(PolyplanInstance { vars, initial, goal, actions })
    }

    pub fn width(&self) -> usize {
        self.vars.len()
    }
}

/// An explicit plan: action indices into the instance's action set.
pub type Plan = Vec<usize>;

/// Apply one action circuit to a state.
pub fn apply_action(action: &Circuit, state: &State) -> Result<State, PlanError> {
    Ok(State::new(action.evaluate(state.bits())?))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FailureReason {
    BadActionIndex { index: usize },
    NoWitnessAction,
    Repetition { first_seen: u64 },
    GoalMiss,
    InitMismatch,
}

impl fmt::Display for FailureReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FailureReason::BadActionIndex { index } => write!(f, "action index {index} out of range"),
            FailureReason::NoWitnessAction => write!(f, "no action leads to the next state"),
            FailureReason::Repetition { first_seen } => {
                write!(f, "state already seen at step {first_seen}")
            }
            FailureReason::GoalMiss => write!(f, "final state does not meet the goal"),
            FailureReason::InitMismatch => {
                write!(f, "representation does not start at the initial state")
            }
        }
    }
}

/// Verdict of a simulation: valid, or the first failing step (the number
/// of actions applied when the failure was detected) and its reason.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Valid,
    Failure { step: u64, reason: FailureReason },
}

impl Verdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, Verdict::Valid)
    }
}

/// Instrumentation of a streaming run. `peak_states` counts explicit
/// `State` buffers held at once; the no-repetition index keeps packed
/// words, not states, and is excluded by design.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SimStats {
    pub steps: u64,
    pub peak_states: usize,
}

#[derive(Debug, Clone, Copy)]
pub struct SimulateOptions {
    /// Reject a step that revisits any earlier trace state. On by default;
    /// switching it off is for exploratory runs only.
    pub check_repetition: bool,
    pub max_steps: u64,
}

impl Default for SimulateOptions {
    fn default() -> Self {
        SimulateOptions { check_repetition: true, max_steps: 1 << 22 }
    }
}

/// What drives the next transition during a simulation.
enum Driver<'a> {
    Explicit(&'a [usize]),
    Repr(&'a PlanSeqRepr),
}

/// Streaming core shared by the plan and representation checkers: walk the
/// trace holding only the current state (plus a one-state lookahead for
/// witness checking), verify each transition, track repetitions via packed
/// words, and test the goal at the end.
fn simulate_stream(
    inst: &PolyplanInstance,
    driver: Driver<'_>,
    steps: u64,
    options: &SimulateOptions,
) -> Result<(Verdict, SimStats), PlanError> {
    if steps > options.max_steps {
        return Err(PlanError::CapExceeded {
            what: "plan length",
            cap: options.max_steps as u128,
            actual: steps as u128,
        });
    }
    if options.check_repetition && inst.width() > 128 {
        return Err(PlanError::TooWideForTracking(inst.width()));
    }

    let mut stats = SimStats { steps, peak_states: 1 };
    // repetition index over packed words; never holds a State buffer
    let mut seen: HashMap<u128, u64> = HashMap::new();
    let mut current = inst.initial.clone();
    if options.check_repetition {
        seen.insert(current.to_u128(), 0);
    }

    for step in 0..steps {
        let next = match &driver {
            Driver::Explicit(plan) => {
                let index = plan[step as usize];
                if index >= inst.actions.len() {
                    return Ok((
                        Verdict::Failure {
                            step: step + 1,
                            reason: FailureReason::BadActionIndex { index },
                        },
                        stats,
                    ));
                }
                inst.actions.apply(index, &current)?
            }
            Driver::Repr(repr) => match repr_step(inst, repr, step, &current)? {
                Ok(next) => next,
                Err(reason) => return Ok((Verdict::Failure { step: step + 1, reason }, stats)),
            },
        };
        stats.peak_states = stats.peak_states.max(2);
        if options.check_repetition {
            match seen.entry(next.to_u128()) {
                std::collections::hash_map::Entry::Occupied(entry) => {
                    return Ok((
                        Verdict::Failure {
                            step: step + 1,
                            reason: FailureReason::Repetition { first_seen: *entry.get() },
                        },
                        stats,
                    ));
                }
                std::collections::hash_map::Entry::Vacant(entry) => {
                    entry.insert(step + 1);
                }
            }
        }
        current = next;
    }

    if !inst.goal.accepts(&current)? {
        return Ok((Verdict::Failure { step: steps, reason: FailureReason::GoalMiss }, stats));
    }
    Ok((Verdict::Valid, stats))
}

/// One transition under a succinct representation: time/state and
/// next-state kinds must exhibit a witnessing action from the instance;
/// time/action and next-action kinds apply the designated action.
fn repr_step(
    inst: &PolyplanInstance,
    repr: &PlanSeqRepr,
    step: u64,
    current: &State,
) -> Result<Result<State, FailureReason>, PlanError> {
    use crate::bits::bits_from_u128_be;
    match repr.kind {
        SeqKind::TimeState | SeqKind::NextState => {
            let next = match repr.kind {
                SeqKind::TimeState => {
                    let input =
                        bits_from_u128_be(step as u128 + 1, repr.circuit.num_inputs()).unwrap();
                    State::new(repr.circuit.evaluate(&input)?)
                }
                _ => State::new(repr.circuit.evaluate(current.bits())?),
            };
            let witnessed = (0..inst.actions.len()).any(|a| {
                inst.actions
                    .apply(a, current)
                    .map(|result| result == next)
                    .unwrap_or(false)
            });
            if witnessed {
                Ok(Ok(next))
            } else {
                Ok(Err(FailureReason::NoWitnessAction))
            }
        }
        SeqKind::TimeAction | SeqKind::NextAction => {
            let bits = match repr.kind {
                SeqKind::TimeAction => {
                    let input = bits_from_u128_be(step as u128, repr.circuit.num_inputs()).unwrap();
                    repr.circuit.evaluate(&input)?
                }
                _ => repr.circuit.evaluate(current.bits())?,
            };
            let index = crate::bits::u128_from_bits_be(&bits) as usize;
            if index >= inst.actions.len() {
                return Ok(Err(FailureReason::BadActionIndex { index }));
            }
            Ok(Ok(inst.actions.apply(index, current)?))
        }
    }
}

/// Verify an explicit plan against an instance, streaming.
pub fn simulate(
    inst: &PolyplanInstance,
    plan: &[usize],
    options: &SimulateOptions,
) -> Result<Verdict, PlanError> {
    Ok(simulate_stream(inst, Driver::Explicit(plan), plan.len() as u64, options)?.0)
}

/// Like [`simulate`], also returning the instrumentation counters.
pub fn simulate_with_stats(
    inst: &PolyplanInstance,
    plan: &[usize],
    options: &SimulateOptions,
) -> Result<(Verdict, SimStats), PlanError> {
    simulate_stream(inst, Driver::Explicit(plan), plan.len() as u64, options)
}

/// Verify a succinct plan representation against an instance, streaming.
/// The representation's initial state must match the instance's; its
/// trace is checked against the *instance's* action set (the
/// representation's own set, if any, plays no role here). TS kind states
/// at time 0 must equal the instance's initial state.
pub fn simulate_repr(
    inst: &PolyplanInstance,
    repr: &PlanSeqRepr,
    options: &SimulateOptions,
) -> Result<Verdict, PlanError> {
    if repr.width() != inst.width() {
        return Err(PlanError::StateWidth { expected: inst.width(), actual: repr.width() });
    }
    if repr.kind == SeqKind::TimeState {
        let zero = crate::bits::bits_from_u128_be(0, repr.circuit.num_inputs()).unwrap();
        let start = State::new(repr.circuit.evaluate(&zero)?);
        if start != inst.initial {
            return Ok(Verdict::Failure { step: 0, reason: FailureReason::InitMismatch });
        }
    } else if repr.initial != inst.initial {
        return Ok(Verdict::Failure { step: 0, reason: FailureReason::InitMismatch });
    }
    Ok(simulate_stream(inst, Driver::Repr(repr), repr.steps, options)?.0)
}

// ---------------------------------------------------------------------------
// Text formats
//
//   polyplan
//   vars <id>...
//   init <bits>
//   goal <bits>            (or `goalcircuit` followed by a circuit block)
//   actions
//   <named circuit blocks>
//   end
//
// Explicit plans:  plan / one action name per line / end
// ---------------------------------------------------------------------------

impl fmt::Display for PolyplanInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "polyplan")?;
        write!(f, "vars")?;
        for v in &self.vars {
            write!(f, " {v}")?;
        }
        writeln!(f)?;
        writeln!(f, "init {}", self.initial)?;
        match &self.goal {
            GoalSpec::State(goal) => writeln!(f, "goal {goal}")?,
            GoalSpec::Predicate(circuit) => {
                writeln!(f, "goalcircuit")?;
                write!(f, "{circuit}")?;
            }
        }
        writeln!(f, "actions")?;
        for (_, circuit) in self.actions.iter() {
            write!(f, "{circuit}")?;
        }
        writeln!(f, "end")
    }
}

fn parse_err(cursor: &LineCursor<'_>, message: impl Into<String>) -> PlanError {
    PlanError::Parse { line: cursor.line_no, message: message.into() }
}

impl std::str::FromStr for PolyplanInstance {
    type Err = PlanError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut cursor = LineCursor::new(s);
        let header = cursor.next_line().ok_or_else(|| parse_err(&cursor, "expected `polyplan`"))?;
        if header != "polyplan" {
            return Err(parse_err(&cursor, "expected a `polyplan` header"));
        }
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

        let goal_line = cursor.next_line().ok_or_else(|| parse_err(&cursor, "expected `goal`"))?;
        let goal = match goal_line.split_whitespace().collect::<Vec<_>>().as_slice() {
            ["goal", bits] => GoalSpec::State(
                State::parse(bits).map_err(|e| parse_err(&cursor, format!("bad goal: {e}")))?,
            ),
            ["goalcircuit"] => GoalSpec::Predicate(parse_circuit_block(&mut cursor)?),
            _ => return Err(parse_err(&cursor, "expected `goal <bits>` or `goalcircuit`")),
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
        let actions = ActionSet::new(
            circuits.into_iter().map(|c| (c.name().to_string(), c)).collect(),
            vars.len(),
        )?;
        PolyplanInstance::new(vars, initial, goal, actions)
    }
}

/// Render an explicit plan using the instance's action names.
pub fn plan_to_text(inst: &PolyplanInstance, plan: &[usize]) -> String {
    let mut out = String::from("plan\n");
    for &index in plan {
        out.push_str(inst.actions.name(index));
        out.push('\n');
    }
    out.push_str("end\n");
    out
}

/// Parse an explicit plan file against an instance's action names.
pub fn plan_from_text(inst: &PolyplanInstance, text: &str) -> Result<Plan, PlanError> {
    let mut cursor = LineCursor::new(text);
    let header = cursor.next_line().ok_or_else(|| parse_err(&cursor, "expected `plan`"))?;
    if header != "plan" {
        return Err(parse_err(&cursor, "expected a `plan` header"));
    }
    let mut plan = Vec::new();
    loop {
        let line = cursor.next_line().ok_or_else(|| parse_err(&cursor, "expected `end`"))?;
        if line == "end" {
            break;
        }
        let index = inst
            .actions
            .index_of(line)
            .ok_or_else(|| parse_err(&cursor, format!("unknown action `{line}`")))?;
        plan.push(index);
    }
    if !cursor.at_end() {
        return Err(parse_err(&cursor, "trailing content after `end`"));
    }
    Ok(plan)
}

#[cfg(test)]
mod tests;
