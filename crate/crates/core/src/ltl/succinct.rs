//! Succinct lasso models and the unique-model embeddings.
//!
//! A [`SuccinctLasso`] is a circuit representation of an ultimately
//! periodic model: a time/state circuit queried on positions
//! `0..init+period`, or a next-state circuit iterated from a start state.
//! A next-state lasso must be closed (its circuit maps the last position
//! back to the period's first state) and repetition-free across the
//! distinct positions, otherwise it does not denote a lasso at all.
//!
//! Checking a formula against a succinct lasso comes in two modes that
//! must agree: expand the lasso and evaluate, or conjoin the formula with
//! a constraint formula derived from the circuit (for next-state lassos
//! `G` of "the next values of the state variables are the circuit of the
//! current ones"; for time/state lassos a counting formula over fresh
//! time atoms plus `G` of the circuit's input/output relation) and
//! evaluate that on the expanded, time-annotated model. The time/state
//! conjoin constraint counts time modulo `2^w`, so it coincides with the
//! expand mode on full-cycle lassos (no initial part, period `2^w`), the
//! shape the counting-model constructions produce.

use super::{ltl_eval, LassoModel, Ltl, LtlError};
use crate::bits::{bits_from_u128_be, index_width, State};
use crate::circuit::{Circuit, CircuitBuilder, GateOp};
use crate::seq::{PlanSeqRepr, SeqKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckMode {
    Expand,
    Conjoin,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuccinctLasso {
    /// `TimeState` or `NextState`; the action kinds make no sense here.
    pub kind: SeqKind,
    pub vars: Vec<String>,
    pub circuit: Circuit,
    pub init_len: u64,
    pub period_len: u64,
    /// Start state, next-state kind only.
    pub start: Option<State>,
}

impl SuccinctLasso {
    pub fn new(
        kind: SeqKind,
        vars: Vec<String>,
        circuit: Circuit,
        init_len: u64,
        period_len: u64,
        start: Option<State>,
    ) -> Result<Self, LtlError> {
        if period_len == 0 {
            return Err(LtlError::EmptyPeriod);
        }
        let width = vars.len();
        let total = init_len + period_len;
        let ok = match kind {
            SeqKind::TimeState => {
                circuit.num_inputs() >= index_width(total as u128)
                    && circuit.num_outputs() == width
                    && start.is_none()
            }
            SeqKind::NextState => {
                circuit.num_inputs() == width
                    && circuit.num_outputs() == width
                    && start.as_ref().map(|s| s.width()) == Some(width)
            }
            _ => false,
        };
        if !ok {
            return Err(LtlError::CapExceeded {
                what: "succinct lasso shape (kind, arity or start state)",
                cap: width as u64,
                actual: circuit.num_inputs() as u64,
            });
        }
        Ok(SuccinctLasso { kind, vars, circuit, init_len, period_len, start })
    }

    pub fn len(&self) -> u64 {
        self.init_len + self.period_len
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Expand into an explicit lasso model. Next-state lassos are checked
    /// for distinct states and for closure at the wrap.
    pub fn expand(&self, max_positions: u64) -> Result<LassoModel, LtlError> {
        let total = self.len();
        if total > max_positions {
            return Err(LtlError::CapExceeded {
                what: "lasso positions",
                cap: max_positions,
                actual: total,
            });
        }
        let mut states = Vec::with_capacity(total as usize);
        match self.kind {
            SeqKind::TimeState => {
                for p in 0..total {
                    let input = bits_from_u128_be(p as u128, self.circuit.num_inputs()).unwrap();
                    states.push(State::new(self.circuit.evaluate(&input)?));
                }
            }
            SeqKind::NextState => {
                let mut current = self.start.clone().unwrap();
                for p in 0..total {
                    if states.contains(&current) {
                        return Err(LtlError::StateWidth {
                            part: "repeated state in next-state lasso at position",
                            index: p as usize,
                            expected: self.vars.len(),
                            actual: current.width(),
                        });
                    }
                    states.push(current.clone());
                    current = State::new(self.circuit.evaluate(current.bits())?);
                }
                // closure: the successor of the last position must re-enter
                // the period
                if current != states[self.init_len as usize] {
                    return Err(LtlError::StateWidth {
                        part: "next-state lasso does not close its period; wrap position",
                        index: self.init_len as usize,
                        expected: self.vars.len(),
                        actual: current.width(),
                    });
                }
            }
            _ => unreachable!("validated at construction"),
        }
        let period = states.split_off(self.init_len as usize);
        LassoModel::new(self.vars.clone(), states, period)
    }
}

/// Check `f` against a succinct lasso in the requested mode.
pub fn check_succinct_model(
    f: &Ltl,
    lasso: &SuccinctLasso,
    mode: CheckMode,
    max_positions: u64,
) -> Result<bool, LtlError> {
    let expanded = lasso.expand(max_positions)?;
    match mode {
        CheckMode::Expand => ltl_eval(f, &expanded, 0),
        CheckMode::Conjoin => match lasso.kind {
            SeqKind::NextState => {
                let outputs = lasso.circuit.output_formulas(&lasso.vars);
                let step = Ltl::and(
                    lasso
                        .vars
                        .iter()
                        .zip(&outputs)
                        .map(|(v, body)| {
                            Ltl::iff(Ltl::next(Ltl::atom(v.clone())), Ltl::from_propositional(body))
                        })
                        .collect(),
                );
                let constraint = Ltl::globally(step);
                ltl_eval(&Ltl::and(vec![f.clone(), constraint]), &expanded, 0)
            }
            SeqKind::TimeState => {
                // annotate each position with its time, modulo the clock
                let w = lasso.circuit.num_inputs();
                let time_vars: Vec<String> = (0..w).map(|i| format!("time{}", i + 1)).collect();
                let mut vars = lasso.vars.clone();
                vars.extend(time_vars.iter().cloned());
                let annotate = |states: &[State], offset: u64| -> Vec<State> {
                    states
                        .iter()
                        .enumerate()
                        .map(|(i, s)| {
                            let t = (offset + i as u64) as u128 % (1 << w);
                            let mut bits = s.bits().to_vec();
                            bits.extend(bits_from_u128_be(t, w).unwrap());
                            State::new(bits)
                        })
                        .collect()
                };
                let extended = LassoModel::new(
                    vars,
                    annotate(&expanded.initial, 0),
                    annotate(&expanded.period, expanded.initial.len() as u64),
                )?;
                let outputs = lasso.circuit.output_formulas(&time_vars);
                let relation = Ltl::and(
                    lasso
                        .vars
                        .iter()
                        .zip(&outputs)
                        .map(|(v, body)| {
                            Ltl::iff(Ltl::atom(v.clone()), Ltl::from_propositional(body))
                        })
                        .collect(),
                );
                let constraint = Ltl::and(vec![
                    super::count::count_formula_over(&time_vars),
                    Ltl::globally(relation),
                ]);
                ltl_eval(&Ltl::and(vec![f.clone(), constraint]), &extended, 0)
            }
            _ => unreachable!("validated at construction"),
        },
    }
}

/// The elements at 1-indexed positions 1, t+1, 2t+1, ... of a sequence.
pub fn divide(states: &[State], t: usize) -> Vec<State> {
    assert!(t >= 1, "divisor must be positive");
    states.iter().step_by(t).cloned().collect()
}

/// Does `wide` expand `narrow`: equal lengths, agreement on the narrow
/// variables, and every extra variable false everywhere?
pub fn expands_check(
    narrow_vars: &[String],
    narrow: &[State],
    wide_vars: &[String],
    wide: &[State],
) -> Result<bool, LtlError> {
    if narrow.len() != wide.len() {
        return Ok(false);
    }
    let mut positions = Vec::with_capacity(narrow_vars.len());
    for v in narrow_vars {
        match wide_vars.iter().position(|w| w == v) {
            Some(p) => positions.push(p),
            None => return Err(LtlError::UnknownAtom(v.clone())),
        }
    }
    let extras: Vec<usize> =
        (0..wide_vars.len()).filter(|p| !positions.contains(p)).collect();
    for (ns, ws) in narrow.iter().zip(wide) {
        for (i, &p) in positions.iter().enumerate() {
            if ns.bit(i) != ws.bit(p) {
                return Ok(false);
            }
        }
        if extras.iter().any(|&p| ws.bit(p)) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// An embedding of a finite sequence as the only model of an LTL formula.
#[derive(Debug, Clone)]
pub struct UniqueModelEmbedding {
    pub formula: Ltl,
    pub lasso: SuccinctLasso,
}

/// Gate-body formula with a custom wire binding.
fn gate_formula(gate: &crate::circuit::Gate, bind: &dyn Fn(&str) -> Ltl) -> Ltl {
    let of = |v: &String| bind(v);
    match gate.op {
        GateOp::True => Ltl::True,
        GateOp::False => Ltl::False,
        GateOp::Id => of(&gate.operands[0]),
        GateOp::Not => Ltl::not(of(&gate.operands[0])),
        GateOp::And => Ltl::and(gate.operands.iter().map(of).collect()),
        GateOp::Or => Ltl::or(gate.operands.iter().map(of).collect()),
    }
}

fn state_literals(vars: &[String], state: &State) -> Ltl {
    Ltl::and(
        vars.iter()
            .zip(state.bits())
            .map(|(v, &bit)| Ltl::literal(v.clone(), bit))
            .collect(),
    )
}

fn fresh_names(base: &str, count: usize, taken: &[String]) -> Vec<String> {
    let mut names = Vec::with_capacity(count);
    let mut suffix = String::new();
    loop {
        names.clear();
        for i in 0..count {
            names.push(format!("{base}{suffix}{}", i + 1));
        }
        let clash = names.iter().any(|n| taken.contains(n));
        if !clash {
            return names;
        }
        suffix.push('_');
    }
}

fn fresh_name(base: &str, taken: &[String]) -> String {
    let mut name = base.to_string();
    while taken.contains(&name) {
        name.push('_');
    }
    name
}

/// Interleaved-state embedding shared machinery: expanded source trace.
struct SourceTrace {
    states: Vec<State>,
    internals: Vec<Vec<bool>>,
}

fn expand_source(s1: &PlanSeqRepr, max_steps: u64) -> Result<SourceTrace, LtlError> {
    let expansion = s1.expand(&crate::seq::ExpandLimits { max_steps })?;
    let mut internals = Vec::with_capacity(expansion.states.len());
    match s1.kind {
        SeqKind::NextState => {
            for state in &expansion.states {
                let (_, ints) = s1.circuit.evaluate_with_internals(state.bits())?;
                internals.push(ints);
            }
        }
        SeqKind::TimeState => {
            for t in 0..=s1.steps {
                let input = bits_from_u128_be(t as u128, s1.circuit.num_inputs()).unwrap();
                let (_, ints) = s1.circuit.evaluate_with_internals(&input)?;
                internals.push(ints);
            }
        }
        _ => unreachable!("caller checks the kind"),
    }
    Ok(SourceTrace { states: expansion.states, internals })
}

/// Embed a finite next-state or time/state sequence into an LTL formula
/// and a succinct lasso of the same kind that is the formula's model.
///
/// The target interleaves one helper state after every source state
/// (marked by a fresh alternation atom and carrying the source circuit's
/// internal wires, plus the clock for the time/state kind) and then lets
/// the final helper state repeat forever as the period. The formula pins
/// position 0, forces the step relation up to the final helper, and locks
/// the final helper in place; dividing the expansion by two recovers the
/// source sequence padded with always-false extras.
pub fn embed_unique_model(
    s1: &PlanSeqRepr,
    max_steps: u64,
) -> Result<UniqueModelEmbedding, LtlError> {
    match s1.kind {
        SeqKind::NextState => embed_next_state(s1, max_steps),
        SeqKind::TimeState => embed_time_state(s1, max_steps),
        _ => Err(LtlError::CapExceeded {
            what: "embedding applies to state kinds only; action kind",
            cap: 0,
            actual: 1,
        }),
    }
}

fn embed_next_state(
    s1: &PlanSeqRepr,
    max_steps: u64,
) -> Result<UniqueModelEmbedding, LtlError> {
    let n = s1.width();
    let k = s1.circuit.internal().len();
    let trace = expand_source(s1, max_steps)?;
    let last = trace.states.last().unwrap();

    let z_names = fresh_names("zc", k, &s1.vars);
    let alt = fresh_name("alt", &s1.vars);
    let mut vars = s1.vars.clone();
    vars.extend(z_names.iter().cloned());
    vars.push(alt.clone());

    // the final helper state, which absorbs the run
    let marker_state = {
        let mut bits = last.bits().to_vec();
        bits.extend(trace.internals.last().unwrap().iter().copied());
        bits.push(true);
        State::new(bits)
    };

    // the next-state circuit of the embedded sequence
    let circuit = {
        let mut b = CircuitBuilder::new("embedded");
        let x = b.add_inputs("s", n);
        let z = b.add_inputs("i", k);
        let a = b.add_input("alt");
        let mut whole = x.clone();
        whole.extend(z.iter().cloned());
        whole.push(a.clone());
        let at_marker = b.eq_const(&whole, marker_state.to_u128());

        let step = b.embed(&s1.circuit, &x);
        // from a source state: keep x, expose the internals, raise alt
        let mut helper_out = x.clone();
        helper_out.extend(step.internals.iter().cloned());
        helper_out.push(b.const_bit(true));
        // from a helper: advance x, clear the scaffolding
        let mut source_out = step.outputs.clone();
        let zero = b.const_bit(false);
        source_out.extend(std::iter::repeat_n(zero.clone(), k));
        source_out.push(zero);

        let moved = b.mux(a, &source_out, &helper_out);
        let out = b.mux(at_marker, &whole, &moved);
        b.finish_indexed("o", &out)?
    };

    let start = {
        let mut bits = trace.states[0].bits().to_vec();
        bits.extend(vec![false; k + 1]);
        State::new(bits)
    };
    let total = 2 * trace.states.len() as u64;
    let lasso = SuccinctLasso::new(
        SeqKind::NextState,
        vars.clone(),
        circuit,
        total - 1,
        1,
        Some(start.clone()),
    )?;

    // formula: position 0, step rules until the marker, marker absorbs
    let position0 = state_literals(&vars, &start);
    let x_atom = |v: &String| Ltl::atom(v.clone());
    let keep_x = Ltl::and(
        s1.vars.iter().map(|v| Ltl::iff(x_atom(v), Ltl::next(x_atom(v)))).collect(),
    );
    // helper internals: gate bodies over current x and next-position z
    let internal_of: std::collections::HashMap<&str, &str> = s1
        .circuit
        .internal()
        .iter()
        .zip(&z_names)
        .map(|(w, z)| (w.as_str(), z.as_str()))
        .collect();
    let input_of: std::collections::HashMap<&str, &str> = s1
        .circuit
        .inputs()
        .iter()
        .zip(&s1.vars)
        .map(|(w, v)| (w.as_str(), v.as_str()))
        .collect();
    let mut z_rules = Vec::new();
    {
        // bind inputs to current atoms and internals to next-position atoms
        let bind = |w: &str| -> Ltl {
            if let Some(v) = input_of.get(w) {
                Ltl::atom(v.to_string())
            } else {
                Ltl::next(Ltl::atom(internal_of[w].to_string()))
            }
        };
        for gate in s1.circuit.gates() {
            if let Some(z) = internal_of.get(gate.target.as_str()) {
                z_rules.push(Ltl::iff(
                    Ltl::next(Ltl::atom(z.to_string())),
                    gate_formula(gate, &bind),
                ));
            }
        }
    }
    let source_rule = Ltl::implies(
        Ltl::not(Ltl::atom(alt.clone())),
        Ltl::and(vec![keep_x, Ltl::and(z_rules), Ltl::next(Ltl::atom(alt.clone()))]),
    );

    // helper outputs: formulas over current x and z atoms
    let helper_rule = {
        let mut by_wire: std::collections::HashMap<&str, Ltl> = std::collections::HashMap::new();
        for (w, v) in s1.circuit.inputs().iter().zip(&s1.vars) {
            by_wire.insert(w.as_str(), Ltl::atom(v.clone()));
        }
        for (w, z) in s1.circuit.internal().iter().zip(&z_names) {
            by_wire.insert(w.as_str(), Ltl::atom(z.clone()));
        }
        let mut out_formulas: std::collections::HashMap<&str, Ltl> =
            std::collections::HashMap::new();
        for gate in s1.circuit.gates() {
            if s1.circuit.outputs().contains(&gate.target) {
                let bind = |w: &str| -> Ltl {
                    by_wire
                        .get(w)
                        .cloned()
                        .unwrap_or_else(|| out_formulas[w].clone())
                };
                let body = gate_formula(gate, &bind);
                out_formulas.insert(&gate.target, body);
            }
        }
        let mut parts = Vec::new();
        for (output, v) in s1.circuit.outputs().iter().zip(&s1.vars) {
            parts.push(Ltl::iff(
                Ltl::next(Ltl::atom(v.clone())),
                out_formulas[output.as_str()].clone(),
            ));
        }
        for z in &z_names {
            parts.push(Ltl::next(Ltl::not(Ltl::atom(z.clone()))));
        }
        parts.push(Ltl::next(Ltl::not(Ltl::atom(alt.clone()))));
        Ltl::implies(Ltl::atom(alt.clone()), Ltl::and(parts))
    };

    let marker = state_literals(&vars, &marker_state);
    let rules = Ltl::and(vec![source_rule, helper_rule]);
    let formula = Ltl::and(vec![
        position0,
        Ltl::until(rules, marker.clone()),
        Ltl::globally(Ltl::implies(marker.clone(), Ltl::next(marker))),
    ]);
    Ok(UniqueModelEmbedding { formula, lasso })
}

fn embed_time_state(
    s1: &PlanSeqRepr,
    max_steps: u64,
) -> Result<UniqueModelEmbedding, LtlError> {
    let k = s1.circuit.internal().len();
    let w = s1.circuit.num_inputs();
    let trace = expand_source(s1, max_steps)?;
    let count = trace.states.len();

    let z_names = fresh_names("zc", k, &s1.vars);
    let t_names = {
        let mut taken = s1.vars.clone();
        taken.extend(z_names.iter().cloned());
        fresh_names("tc", w, &taken)
    };
    let alt = {
        let mut taken = s1.vars.clone();
        taken.extend(z_names.iter().cloned());
        taken.extend(t_names.iter().cloned());
        fresh_name("alt", &taken)
    };
    let mut vars = s1.vars.clone();
    vars.extend(z_names.iter().cloned());
    vars.extend(t_names.iter().cloned());
    vars.push(alt.clone());

    let marker_state = {
        let mut bits = trace.states.last().unwrap().bits().to_vec();
        bits.extend(trace.internals.last().unwrap().iter().copied());
        bits.extend(bits_from_u128_be(count as u128 - 1, w).unwrap());
        bits.push(true);
        State::new(bits)
    };

    // position u addresses source element u >> 1; odd positions are helpers
    let circuit = {
        let mut b = CircuitBuilder::new("embedded");
        let u = b.add_inputs("u", w + 1);
        let (i, parity) = u.split_at(w);
        let parity = parity[0].clone();
        let source = b.embed(&s1.circuit, i);
        let mut out = source.outputs.clone();
        for z in &source.internals {
            out.push(b.and(vec![parity.clone(), z.clone()]));
        }
        for ti in i {
            out.push(b.and(vec![parity.clone(), ti.clone()]));
        }
        out.push(parity);
        b.finish_indexed("o", &out)?
    };

    let total = 2 * count as u64;
    let lasso =
        SuccinctLasso::new(SeqKind::TimeState, vars.clone(), circuit, total - 1, 1, None)?;

    // position 0: the first source state, clean scaffolding, and the first
    // helper's clock pinned to zero
    let start = {
        let mut bits = trace.states[0].bits().to_vec();
        bits.extend(vec![false; k + w + 1]);
        State::new(bits)
    };
    let mut position0_parts = vec![state_literals(&vars, &start)];
    position0_parts.push(Ltl::next(Ltl::and(
        t_names.iter().map(|t| Ltl::not(Ltl::atom(t.clone()))).collect(),
    )));
    let position0 = Ltl::and(position0_parts);

    // wire binding for helper self-consistency: inputs are the clock
    // atoms, internals the carried z atoms
    let input_of: std::collections::HashMap<&str, &str> = s1
        .circuit
        .inputs()
        .iter()
        .zip(&t_names)
        .map(|(wire, t)| (wire.as_str(), t.as_str()))
        .collect();
    let internal_of: std::collections::HashMap<&str, &str> = s1
        .circuit
        .internal()
        .iter()
        .zip(&z_names)
        .map(|(wire, z)| (wire.as_str(), z.as_str()))
        .collect();
    let helper_consistency = {
        let mut by_wire: std::collections::HashMap<&str, Ltl> = std::collections::HashMap::new();
        for (wire, t) in s1.circuit.inputs().iter().zip(&t_names) {
            by_wire.insert(wire.as_str(), Ltl::atom(t.clone()));
        }
        let mut parts = Vec::new();
        for gate in s1.circuit.gates() {
            let bind = |wire: &str| -> Ltl {
                if let Some(t) = input_of.get(wire) {
                    Ltl::atom(t.to_string())
                } else if let Some(z) = internal_of.get(wire) {
                    Ltl::atom(z.to_string())
                } else {
                    by_wire[wire].clone()
                }
            };
            let body = gate_formula(gate, &bind);
            if let Some(z) = internal_of.get(gate.target.as_str()) {
                parts.push(Ltl::iff(Ltl::atom(z.to_string()), body));
            } else {
                // an output gate: bind it for later output gates and pin
                // the corresponding state variable
                let position = s1
                    .circuit
                    .outputs()
                    .iter()
                    .position(|o| *o == gate.target)
                    .expect("non-internal target is an output");
                parts.push(Ltl::iff(Ltl::atom(s1.vars[position].clone()), body.clone()));
                by_wire.insert(&gate.target, body);
            }
        }
        Ltl::implies(Ltl::atom(alt.clone()), Ltl::and(parts))
    };

    // clock increment from helper to helper (two steps ahead), and a clean
    // source state in between
    let increment_rule = {
        let mut parts = Vec::new();
        for (j, t) in t_names.iter().enumerate() {
            // bit j two helpers ahead = bit j xor "all lower bits set"
            let lower = Ltl::and(
                t_names[j + 1..].iter().map(|l| Ltl::atom(l.clone())).collect(),
            );
            parts.push(Ltl::iff(
                Ltl::next(Ltl::next(Ltl::atom(t.clone()))),
                Ltl::not(Ltl::iff(Ltl::atom(t.clone()), lower)),
            ));
        }
        let mut clean = Vec::new();
        for name in z_names.iter().chain(&t_names) {
            clean.push(Ltl::next(Ltl::not(Ltl::atom(name.clone()))));
        }
        Ltl::implies(Ltl::atom(alt.clone()), Ltl::and(vec![Ltl::and(parts), Ltl::and(clean)]))
    };

    let keep_x = Ltl::implies(
        Ltl::not(Ltl::atom(alt.clone())),
        Ltl::and(
            s1.vars
                .iter()
                .map(|v| Ltl::iff(Ltl::atom(v.clone()), Ltl::next(Ltl::atom(v.clone()))))
                .collect(),
        ),
    );
    let alternation = alternation_rule(&alt);

    let marker = state_literals(&vars, &marker_state);
    let rules = Ltl::and(vec![alternation, keep_x, helper_consistency, increment_rule]);
    let formula = Ltl::and(vec![
        position0,
        Ltl::until(rules, marker.clone()),
        Ltl::globally(Ltl::implies(marker.clone(), Ltl::next(marker))),
    ]);
    Ok(UniqueModelEmbedding { formula, lasso })
}

/// `!(a <-> X a)`: the alternation step rule used inside the embeddings'
/// until (it must stop at the absorbing marker, so it is not wrapped in a
/// `G`).
fn alternation_rule(alt: &str) -> Ltl {
    Ltl::not(Ltl::iff(Ltl::atom(alt.to_string()), Ltl::next(Ltl::atom(alt.to_string()))))
}
