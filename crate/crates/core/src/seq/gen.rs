//! Sequence generators whose expansions encode satisfiability scans, plus
//! the function-based time/state constructions.
//!
//! The satisfiability-scanning family shares one idea: the state carries a
//! formula number F (m bits, under a fixed total 3CNF encoding) and a
//! model number M (r bits); the sequence walks every model of every
//! formula in one long run split into equal chunks, and a designated bit
//! or action at each chunk's end reveals whether its formula is
//! satisfiable. The satisfiability test inside every circuit is the
//! formula-evaluation circuit from [`crate::proplogic::cnf`], so the
//! generated objects are polynomial in m + r even though their expansions
//! enumerate all `2^m` formulas.

use super::{ActionSet, PlanSeqRepr, SeqError, SeqKind};
use crate::bits::{index_width, State};
use crate::circuit::{Circuit, CircuitBuilder};
use crate::proplogic::cnf::{cnf_eval_circuit, Cnf3Encoding};

/// Guard for encodings and function widths whose state spaces the desk
/// oracles can still walk.
const MAX_STATE_BITS: usize = 64;

fn check_state_bits(bits: usize) -> Result<(), SeqError> {
    if bits > MAX_STATE_BITS {
        return Err(SeqError::CapExceeded {
            what: "state width",
            cap: MAX_STATE_BITS as u128,
            actual: bits as u128,
        });
    }
    Ok(())
}

fn formula_vars(enc: &Cnf3Encoding) -> Vec<String> {
    (0..enc.total_bits()).map(|i| format!("f{}", i + 1)).collect()
}

fn model_vars(enc: &Cnf3Encoding) -> Vec<String> {
    (0..enc.num_vars()).map(|i| format!("m{}", i + 1)).collect()
}

// ---------------------------------------------------------------------------
// Next-state satisfiability scan
// ---------------------------------------------------------------------------

/// A next-state sequence over states `(F, M, x, y)`: one chunk of
/// `2^r + 1` states per formula, scanning all models in order. Within a
/// chunk x latches "some model seen so far satisfied F" and y marks the
/// chunk's final state; the transition out of a y-state resets everything
/// for the next formula.
pub struct SatScanSequence {
    pub repr: PlanSeqRepr,
    enc: Cnf3Encoding,
}

/// The single transition circuit of the scan.
fn sat_scan_circuit(enc: &Cnf3Encoding) -> Circuit {
    let m = enc.total_bits();
    let r = enc.num_vars();
    let mut b = CircuitBuilder::new("step");
    let f = b.add_inputs("f", m);
    let mv = b.add_inputs("m", r);
    let x = b.add_input("x");
    let y = b.add_input("y");

    let mut eval_in = f.clone();
    eval_in.extend(mv.iter().cloned());
    let sat_now = b.embed(&cnf_eval_circuit(enc), &eval_in).outputs[0].clone();

    // y = 0: advance the model, latch satisfaction, flag the wrap
    let f_same = f.clone();
    let m_next = b.increment(&mv);
    let x_latched = b.or(vec![x.clone(), sat_now]);
    let m_all_ones = b.eq_const(&mv, (1u128 << r) - 1);

    // y = 1: next formula, model and flags reset
    let f_next = b.increment(&f);
    let zeros = b.const_bits(0, r);
    let false_bit = b.const_bit(false);

    let mut out = Vec::new();
    out.extend(b.mux(y.clone(), &f_next, &f_same));
    out.extend(b.mux(y.clone(), &zeros, &m_next));
    out.push(b.mux_bit(y.clone(), false_bit.clone(), x_latched));
    out.push(b.mux_bit(y, false_bit, m_all_ones));
    b.finish_indexed("o", &out).expect("scan circuit is well formed")
}

pub fn sat_scan_sequence(enc: &Cnf3Encoding) -> Result<SatScanSequence, SeqError> {
    let m = enc.total_bits();
    let r = enc.num_vars();
    check_state_bits(m + r + 2)?;
    let circuit = sat_scan_circuit(enc);
    let mut vars = formula_vars(enc);
    vars.extend(model_vars(enc));
    vars.push("x".to_string());
    vars.push("y".to_string());
    let width = vars.len();
    let total_states = enc.num_formulas() as u64 * ((1u64 << r) + 1);
    let actions = ActionSet::new(vec![("step".to_string(), circuit.clone())], width)?;
    let repr = PlanSeqRepr::new(
        SeqKind::NextState,
        vars,
        State::zeros(width),
        actions,
        total_states - 1,
        circuit,
    )?;
    Ok(SatScanSequence { repr, enc: *enc })
}

impl SatScanSequence {
    pub fn encoding(&self) -> &Cnf3Encoding {
        &self.enc
    }

    /// States per chunk: `2^r + 1`.
    pub fn chunk_len(&self) -> u64 {
        (1u64 << self.enc.num_vars()) + 1
    }

    /// 1-indexed element at which formula k's chunk starts:
    /// `k * (2^r + 1) + 1`.
    pub fn chunk_start_1indexed(&self, k: u64) -> u64 {
        k * self.chunk_len() + 1
    }

    /// 1-indexed query point whose x bit answers satisfiability of formula
    /// k: `(k + 1) * (2^r + 1)`, the chunk's final state.
    pub fn sat_query_1indexed(&self, k: u64) -> u64 {
        (k + 1) * self.chunk_len()
    }

    /// Split a state into (formula number, model number, x, y).
    pub fn decode_state(&self, state: &State) -> (u128, u128, bool, bool) {
        let m = self.enc.total_bits();
        let r = self.enc.num_vars();
        let bits = state.bits();
        (
            crate::bits::u128_from_bits_be(&bits[..m]),
            crate::bits::u128_from_bits_be(&bits[m..m + r]),
            bits[m + r],
            bits[m + r + 1],
        )
    }
}

// ---------------------------------------------------------------------------
// Time/action satisfiability flag (single formula)
// ---------------------------------------------------------------------------

/// A time/action sequence of `2^r` steps for one fixed formula: at time t
/// the designated action is `sat` exactly when interpretation t (read
/// big-endian over `x1..xr`) satisfies the formula. Both actions increment
/// an n-bit copy of the clock kept in the state (flag first, then the
/// copy, least significant bit first), so no two states before the final
/// wrap coincide; the final state's flag answers satisfiability.
pub struct SatFlagSequence {
    pub repr: PlanSeqRepr,
    formula_bits: Vec<bool>,
    enc: Cnf3Encoding,
}

fn clock_action(name: &str, n: usize, set_flag: bool) -> Circuit {
    let mut b = CircuitBuilder::new(name);
    let flag = b.add_input("flag");
    let copy = b.add_inputs("c", n);
    // the copy is stored least significant bit first
    let reversed: Vec<String> = copy.iter().rev().cloned().collect();
    let incremented = b.increment(&reversed);
    let new_flag = if set_flag { b.const_bit(true) } else { flag };
    let mut out = vec![new_flag];
    out.extend(incremented.into_iter().rev());
    b.finish_indexed("o", &out).expect("clock action is well formed")
}

pub fn sat_flag_sequence(
    enc: &Cnf3Encoding,
    formula_bits: &[bool],
) -> Result<SatFlagSequence, SeqError> {
    let n = enc.num_vars();
    check_state_bits(n + 1)?;
    if formula_bits.len() != enc.total_bits() {
        return Err(SeqError::CapExceeded {
            what: "formula bit string",
            cap: enc.total_bits() as u128,
            actual: formula_bits.len() as u128,
        });
    }
    let width = n + 1;
    let actions = ActionSet::new(
        vec![
            ("sat".to_string(), clock_action("sat", n, true)),
            ("unsat".to_string(), clock_action("unsat", n, false)),
        ],
        width,
    )?;

    // selector: time t -> index 0 (sat) iff interpretation t satisfies F
    let mut b = CircuitBuilder::new("selector");
    let time = b.add_inputs("t", n);
    let mut eval_in: Vec<String> = formula_bits.iter().map(|&bit| b.const_bit(bit)).collect();
    eval_in.extend(time.iter().cloned());
    let sat_now = b.embed(&cnf_eval_circuit(enc), &eval_in).outputs[0].clone();
    let index = b.not(sat_now);
    let circuit = b.finish(vec![("a1".to_string(), index)])?;

    let mut vars = vec!["flag".to_string()];
    vars.extend((0..n).map(|i| format!("c{}", i + 1)));
    let repr = PlanSeqRepr::new(
        SeqKind::TimeAction,
        vars,
        State::zeros(width),
        actions,
        1u64 << n,
        circuit,
    )?;
    Ok(SatFlagSequence { repr, formula_bits: formula_bits.to_vec(), enc: *enc })
}

impl SatFlagSequence {
    pub fn formula_bits(&self) -> &[bool] {
        &self.formula_bits
    }

    pub fn encoding(&self) -> &Cnf3Encoding {
        &self.enc
    }

    pub fn flag_of(&self, state: &State) -> bool {
        state.bit(0)
    }
}

// ---------------------------------------------------------------------------
// Time/action satisfiability scan (chunked, all formulas)
// ---------------------------------------------------------------------------

/// A time/action sequence with a `2^r + 2`-state chunk per formula: the
/// scan states of [`sat_scan_sequence`] followed by one extra state with
/// the x bit inverted. Three actions drive it: `step` (the scan
/// transition), `flip` (invert x, taken exactly at each chunk's scan-end
/// state) and `begin` (reset to the next formula's chunk).
pub struct SatChunkedSequence {
    pub repr: PlanSeqRepr,
    enc: Cnf3Encoding,
}

pub fn sat_chunked_sequence(enc: &Cnf3Encoding) -> Result<SatChunkedSequence, SeqError> {
    let m = enc.total_bits();
    let r = enc.num_vars();
    check_state_bits(m + r + 2)?;
    let width = m + r + 2;
    let chunk_len = (1u64 << r) + 2;
    let total_states = enc.num_formulas() as u64 * chunk_len;
    let steps = total_states - 1;

    let step = sat_scan_circuit(enc);

    let flip = {
        let mut b = CircuitBuilder::new("flip");
        let f = b.add_inputs("f", m);
        let mv = b.add_inputs("m", r);
        let x = b.add_input("x");
        let y = b.add_input("y");
        let mut out = f;
        out.extend(mv);
        out.push(b.not(x));
        out.push(y);
        b.finish_indexed("o", &out)?
    };

    let begin = {
        let mut b = CircuitBuilder::new("begin");
        let f = b.add_inputs("f", m);
        b.add_inputs("m", r);
        b.add_input("x");
        b.add_input("y");
        let mut out = b.increment(&f);
        let zero = b.const_bit(false);
        out.extend(std::iter::repeat_n(zero.clone(), r));
        out.push(zero.clone());
        out.push(zero);
        b.finish_indexed("o", &out)?
    };

    // selector: position within the chunk decides the action
    let time_bits = index_width(steps as u128);
    let mut b = CircuitBuilder::new("selector");
    let time = b.add_inputs("t", time_bits);
    let (_, chunk_pos) = b.divmod_const(&time, chunk_len as u128);
    let is_flip = b.eq_const(&chunk_pos, chunk_len as u128 - 2);
    let is_begin = b.eq_const(&chunk_pos, chunk_len as u128 - 1);
    let circuit =
        b.finish(vec![("a1".to_string(), is_begin), ("a2".to_string(), is_flip)])?;

    let mut vars = formula_vars(enc);
    vars.extend(model_vars(enc));
    vars.push("x".to_string());
    vars.push("y".to_string());
    let actions = ActionSet::new(
        vec![
            ("step".to_string(), step),
            ("flip".to_string(), flip),
            ("begin".to_string(), begin),
        ],
        width,
    )?;
    let repr = PlanSeqRepr::new(
        SeqKind::TimeAction,
        vars,
        State::zeros(width),
        actions,
        steps,
        circuit,
    )?;
    Ok(SatChunkedSequence { repr, enc: *enc })
}

impl SatChunkedSequence {
    pub fn encoding(&self) -> &Cnf3Encoding {
        &self.enc
    }

    pub fn chunk_len(&self) -> u64 {
        (1u64 << self.enc.num_vars()) + 2
    }

    /// 0-indexed trace position of formula k's scan-end state
    /// `(F, 0..0, sat(F), 1)`, where the flip action is designated.
    pub fn scan_end_position(&self, k: u64) -> u64 {
        k * self.chunk_len() + self.chunk_len() - 2
    }

    /// 0-indexed trace position of the extra inverted state
    /// `(F, 0..0, !sat(F), 1)`, where the begin action is designated.
    pub fn flipped_position(&self, k: u64) -> u64 {
        k * self.chunk_len() + self.chunk_len() - 1
    }

    pub fn chunk_start_position(&self, k: u64) -> u64 {
        k * self.chunk_len()
    }

    pub fn decode_state(&self, state: &State) -> (u128, u128, bool, bool) {
        let m = self.enc.total_bits();
        let r = self.enc.num_vars();
        let bits = state.bits();
        (
            crate::bits::u128_from_bits_be(&bits[..m]),
            crate::bits::u128_from_bits_be(&bits[m..m + r]),
            bits[m + r],
            bits[m + r + 1],
        )
    }
}

// ---------------------------------------------------------------------------
// Next-action satisfiability scan
// ---------------------------------------------------------------------------

/// A next-action sequence over states `(F, M, x)` with one `2^r`-state
/// chunk per formula and four actions `ok`, `no`, `sat`, `unsat`:
/// mid-chunk the designated action is `ok`/`no` according to whether the
/// current model satisfies F (ok also latches x), and at the chunk-final
/// model it is `sat`/`unsat` according to the satisfiability of F, both
/// computable from the state alone.
pub struct SatStateActionSequence {
    pub repr: PlanSeqRepr,
    enc: Cnf3Encoding,
}

pub fn sat_state_action_sequence(enc: &Cnf3Encoding) -> Result<SatStateActionSequence, SeqError> {
    let m = enc.total_bits();
    let r = enc.num_vars();
    check_state_bits(m + r + 1)?;
    let width = m + r + 1;
    let eval = cnf_eval_circuit(enc);

    // guarded transitions; identity outside the guard
    let scan_action = |name: &str, guard_sat: bool, latch: bool| -> Result<Circuit, SeqError> {
        let mut b = CircuitBuilder::new(name);
        let f = b.add_inputs("f", m);
        let mv = b.add_inputs("m", r);
        let x = b.add_input("x");
        let mut eval_in = f.clone();
        eval_in.extend(mv.iter().cloned());
        let sat_now = b.embed(&eval, &eval_in).outputs[0].clone();
        let guard = if guard_sat { sat_now } else { b.not(sat_now) };
        let m_next = b.increment(&mv);
        let x_new = if latch { b.const_bit(true) } else { x.clone() };
        let mut out = f;
        out.extend(b.mux(guard.clone(), &m_next, &mv));
        out.push(b.mux_bit(guard, x_new, x));
        Ok(b.finish_indexed("o", &out)?)
    };
    let ok = scan_action("ok", true, true)?;
    let no = scan_action("no", false, false)?;

    let chunk_action = |name: &str, need_seen: bool| -> Result<Circuit, SeqError> {
        let mut b = CircuitBuilder::new(name);
        let f = b.add_inputs("f", m);
        let mv = b.add_inputs("m", r);
        let x = b.add_input("x");
        let mut eval_in = f.clone();
        eval_in.extend(mv.iter().cloned());
        let sat_now = b.embed(&eval, &eval_in).outputs[0].clone();
        let at_final = b.eq_const(&mv, (1u128 << r) - 1);
        let satisfiable = b.or(vec![x.clone(), sat_now.clone()]);
        let verdict = if need_seen { satisfiable } else { b.not(satisfiable) };
        let guard = b.and(vec![at_final, verdict]);
        let f_next = b.increment(&f);
        let zeros = b.const_bits(0, r);
        let false_bit = b.const_bit(false);
        let mut out = b.mux(guard.clone(), &f_next, &f);
        out.extend(b.mux(guard.clone(), &zeros, &mv));
        out.push(b.mux_bit(guard, false_bit, x));
        Ok(b.finish_indexed("o", &out)?)
    };
    let sat = chunk_action("sat", true)?;
    let unsat = chunk_action("unsat", false)?;

    // selector (F, M, x) -> ok=0 | no=1 | sat=2 | unsat=3
    let mut b = CircuitBuilder::new("selector");
    let f = b.add_inputs("f", m);
    let mv = b.add_inputs("m", r);
    let x = b.add_input("x");
    let mut eval_in = f.clone();
    eval_in.extend(mv.iter().cloned());
    let sat_now = b.embed(&eval, &eval_in).outputs[0].clone();
    let at_final = b.eq_const(&mv, (1u128 << r) - 1);
    let satisfiable = b.or(vec![x, sat_now.clone()]);
    let not_satisfiable = b.not(satisfiable);
    let not_sat_now = b.not(sat_now);
    let hi = at_final.clone();
    let lo = b.mux_bit(at_final, not_satisfiable, not_sat_now);
    let circuit = b.finish(vec![("a1".to_string(), hi), ("a2".to_string(), lo)])?;

    let mut vars = formula_vars(enc);
    vars.extend(model_vars(enc));
    vars.push("x".to_string());
    let actions = ActionSet::new(
        vec![
            ("ok".to_string(), ok),
            ("no".to_string(), no),
            ("sat".to_string(), sat),
            ("unsat".to_string(), unsat),
        ],
        width,
    )?;
    let total_states = enc.num_formulas() as u64 * (1u64 << r);
    let repr = PlanSeqRepr::new(
        SeqKind::NextAction,
        vars,
        State::zeros(width),
        actions,
        total_states - 1,
        circuit,
    )?;
    Ok(SatStateActionSequence { repr, enc: *enc })
}

impl SatStateActionSequence {
    pub fn encoding(&self) -> &Cnf3Encoding {
        &self.enc
    }

    pub fn chunk_len(&self) -> u64 {
        1u64 << self.enc.num_vars()
    }

    /// 0-indexed trace position of formula k's final model state, where
    /// the designated action is `sat` or `unsat`.
    pub fn chunk_final_position(&self, k: u64) -> u64 {
        k * self.chunk_len() + self.chunk_len() - 1
    }

    pub fn decode_state(&self, state: &State) -> (u128, u128, bool) {
        let m = self.enc.total_bits();
        let r = self.enc.num_vars();
        let bits = state.bits();
        (
            crate::bits::u128_from_bits_be(&bits[..m]),
            crate::bits::u128_from_bits_be(&bits[m..m + r]),
            bits[m + r],
        )
    }
}

// ---------------------------------------------------------------------------
// Function-based time/state sequences
// ---------------------------------------------------------------------------

fn check_function(f: &Circuit) -> Result<usize, SeqError> {
    let n = f.num_inputs();
    if f.num_outputs() != n {
        return Err(SeqError::CircuitArity {
            kind: "function",
            expected_in: n,
            expected_out: n,
            actual_in: n,
            actual_out: f.num_outputs(),
        });
    }
    if n == 0 || n > 16 {
        return Err(SeqError::CapExceeded { what: "function width", cap: 16, actual: n as u128 });
    }
    Ok(n)
}

/// The time/state sequence alternating `f(x)·0` and `x·1` for x ranging
/// over all n-bit values: element 2x is `f(x)` tagged 0, element 2x + 1 is
/// `x` tagged 1. Carries no actions: the step from `f(x)·0` to `x·1` is
/// precisely a function inversion, which is what makes this sequence easy
/// to write time-indexed and hard to write as a state recurrence.
pub fn function_pair_sequence(f: &Circuit) -> Result<PlanSeqRepr, SeqError> {
    let n = check_function(f)?;
    check_state_bits(n + 1)?;
    let mut b = CircuitBuilder::new("pair");
    let time = b.add_inputs("t", n + 1);
    let (x, tag) = time.split_at(n);
    let fx = b.embed(f, x);
    let mut out = b.mux(tag[0].clone(), x, &fx.outputs);
    out.push(tag[0].clone());
    let circuit = b.finish_indexed("o", &out)?;

    let mut vars: Vec<String> = (0..n).map(|i| format!("v{}", i + 1)).collect();
    vars.push("tag".to_string());
    let initial = State::new(f.evaluate(&vec![false; n])?.into_iter().chain([false]).collect());
    PlanSeqRepr::new(
        SeqKind::TimeState,
        vars,
        initial,
        ActionSet::empty(),
        (1u64 << (n + 1)) - 1,
        circuit,
    )
}

/// The chunked time/state sequence for an injective f: per x, n + 1 states
/// walk from `f(x)·f(x)·0..0` to `f(x)·x·1..1`, rewriting one middle bit
/// per step (and raising its progress flag), then one advance action jumps
/// to the next chunk. 2n + 1 actions generate it: `clear_i`/`set_i` write
/// middle bit i and raise flag i; `advance` maps the chunk-final state to
/// the next chunk's start.
pub fn function_chunk_sequence(f: &Circuit) -> Result<PlanSeqRepr, SeqError> {
    let n = check_function(f)?;
    check_state_bits(3 * n)?;
    let width = 3 * n;

    let mut actions = Vec::new();
    for value in [false, true] {
        for i in 0..n {
            let name = format!("{}{}", if value { "set" } else { "clear" }, i + 1);
            let mut b = CircuitBuilder::new(&name);
            let prefix = b.add_inputs("p", n);
            let middle = b.add_inputs("m", n);
            let flags = b.add_inputs("g", n);
            let mut out = prefix;
            for (j, wire) in middle.into_iter().enumerate() {
                out.push(if j == i { b.const_bit(value) } else { wire });
            }
            for (j, wire) in flags.into_iter().enumerate() {
                out.push(if j == i { b.const_bit(true) } else { wire });
            }
            actions.push((name.clone(), b.finish_indexed("o", &out)?));
        }
    }
    // order: clear1..clearn, set1..setn, advance
    let advance = {
        let mut b = CircuitBuilder::new("advance");
        b.add_inputs("p", n);
        let middle = b.add_inputs("m", n);
        b.add_inputs("g", n);
        let x_next = b.increment(&middle);
        let fx_next = b.embed(f, &x_next);
        let mut out = fx_next.outputs.clone();
        out.extend(fx_next.outputs);
        let zero = b.const_bit(false);
        out.extend(std::iter::repeat_n(zero, n));
        b.finish_indexed("o", &out)?
    };
    actions.push(("advance".to_string(), advance));

    // time/state circuit: t -> (chunk q, offset j), state =
    // (f(q), first j bits of q then the tail of f(q), flags 1^j 0^(n-j))
    let total_states = (1u64 << n) * (n as u64 + 1);
    let time_bits = index_width(total_states as u128);
    let mut b = CircuitBuilder::new("chunked");
    let time = b.add_inputs("t", time_bits);
    let (q, j) = b.divmod_const(&time, n as u128 + 1);
    let x = q[q.len() - n..].to_vec();
    let fx = b.embed(f, &x).outputs;
    let mut out = fx.clone();
    for i in 0..n {
        let reached = b.ge_const(&j, i as u128 + 1);
        out.push(b.mux_bit(reached, x[i].clone(), fx[i].clone()));
    }
    for i in 0..n {
        out.push(b.ge_const(&j, i as u128 + 1));
    }
    let circuit = b.finish_indexed("o", &out)?;

    let mut vars: Vec<String> = (0..n).map(|i| format!("p{}", i + 1)).collect();
    vars.extend((0..n).map(|i| format!("m{}", i + 1)));
    vars.extend((0..n).map(|i| format!("g{}", i + 1)));
    let f0 = f.evaluate(&vec![false; n])?;
    let mut initial_bits = f0.clone();
    initial_bits.extend(f0);
    initial_bits.extend(vec![false; n]);
    PlanSeqRepr::new(
        SeqKind::TimeState,
        vars,
        State::new(initial_bits),
        ActionSet::new(actions, width)?,
        total_states - 1,
        circuit,
    )
}
