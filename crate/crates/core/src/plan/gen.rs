//! Planning instance generators: the counter family with long minimal
//! plans, the QBF-encoding instance, and the unique-plan instance whose
//! single plan spells out a satisfiability table.

use super::{GoalSpec, PlanError, PolyplanInstance};
use crate::bits::{ceil_log2, State};
use crate::circuit::{increment_circuit, CircuitBuilder};
use crate::proplogic::cnf::{cnf_eval_circuit, Cnf3Encoding};
use crate::proplogic::{eval_formula, Assignment};
use crate::qbf::{Qbf, QbfError, Quantifier};
use crate::seq::ActionSet;

/// A `ceil(log2(k + 2))`-bit counter: all-zero initial state, all-one goal,
/// one increment action. Every plan counts all the way up, so plans have
/// length `2^width - 1 >= k + 1`.
pub fn long_plan_instance(k: u64) -> Result<PolyplanInstance, PlanError> {
    let width = ceil_log2(k as u128 + 2).max(1);
    if width > 63 {
        return Err(PlanError::CapExceeded { what: "counter width", cap: 63, actual: width as u128 });
    }
    let vars = (0..width).map(|i| format!("b{}", i + 1)).collect();
    PolyplanInstance::new(
        vars,
        State::zeros(width),
        GoalSpec::State(State::ones(width)),
        ActionSet::new(vec![("inc".to_string(), increment_circuit(width))], width)?,
    )
}

/// Encode a two-block formula `exists X forall Y . E` as a planning
/// instance over `{g} ∪ Z ∪ X ∪ Y` that has a plan exactly when the
/// formula is valid.
///
/// The four actions: `settrue` and `setfalse` mark the first unmarked
/// `z_i` and choose the corresponding `x_i` (true resp. left false);
/// `move` increments Y once all of Z is marked, but only while the current
/// X, Y satisfy E (checked before the increment); `last` jumps to the goal
/// state `g=1, rest 0` from an all-one Y that still satisfies E. Outside
/// their guards all actions are the identity, which the no-repetition rule
/// turns into dead ends.
pub fn qbf_planning_instance(q: &Qbf) -> Result<PolyplanInstance, QbfError> {
    let blocks = q.prefix();
    let shape_ok = blocks.len() == 2
        && blocks[0].quantifier == Quantifier::Exists
        && blocks[1].quantifier == Quantifier::Forall;
    if !shape_ok {
        return Err(QbfError::Parse {
            line: 0,
            message: "instance generation needs the two-block form `exists X forall Y . E`"
                .to_string(),
        });
    }
    let x_vars = &blocks[0].vars;
    let y_vars = &blocks[1].vars;
    let n = x_vars.len();
    let m = y_vars.len();
    let width = 1 + n + n + m;

    // state layout: [g, z1..zn, x1..xn, y1..ym]
    let build = |name: &str| -> (CircuitBuilder, String, Vec<String>, Vec<String>, Vec<String>) {
        let mut b = CircuitBuilder::new(name);
        let g = b.add_input("g");
        let z = b.add_inputs("z", n);
        let x = b.add_inputs("x", n);
        let y = b.add_inputs("y", m);
        (b, g, z, x, y)
    };
    let matrix_wire = |b: &mut CircuitBuilder, x: &[String], y: &[String]| {
        let mut bind = std::collections::HashMap::new();
        for (v, w) in x_vars.iter().zip(x) {
            bind.insert(v.clone(), w.clone());
        }
        for (v, w) in y_vars.iter().zip(y) {
            bind.insert(v.clone(), w.clone());
        }
        b.compile_formula(q.matrix(), &bind)
    };

    let set_action = |name: &str, also_x: bool| {
        let (mut b, g, z, x, y) = build(name);
        // first unmarked z: z_i clear, all earlier set
        let mut firsts = Vec::with_capacity(n);
        let mut prefix_set: Vec<String> = Vec::new();
        for zi in &z {
            let mut conj = prefix_set.clone();
            conj.push(b.not(zi.clone()));
            firsts.push(b.and(conj));
            prefix_set.push(zi.clone());
        }
        let mut out = vec![g];
        for (zi, first) in z.iter().zip(&firsts) {
            out.push(b.or(vec![zi.clone(), first.clone()]));
        }
        for (xi, first) in x.iter().zip(&firsts) {
            if also_x {
                out.push(b.or(vec![xi.clone(), first.clone()]));
            } else {
                out.push(xi.clone());
            }
        }
        out.extend(y);
        b.finish_indexed("o", &out)
    };

    let move_action = {
        let (mut b, g, z, x, y) = build("move");
        let all_z = b.and(z.clone());
        let all_y = b.eq_const(&y, (1u128 << m) - 1);
        let not_all_y = b.not(all_y);
        let sat = matrix_wire(&mut b, &x, &y);
        let guard = b.and(vec![all_z, not_all_y, sat]);
        let y_next = b.increment(&y);
        let mut out = vec![g];
        out.extend(z);
        out.extend(x);
        out.extend(b.mux(guard, &y_next, &y));
        b.finish_indexed("o", &out)
    }?;

    let last_action = {
        let (mut b, g, z, x, y) = build("last");
        let all_z = b.and(z.clone());
        let all_y = b.eq_const(&y, (1u128 << m) - 1);
        let sat = matrix_wire(&mut b, &x, &y);
        let guard = b.and(vec![all_z, all_y, sat]);
        let t = b.const_bit(true);
        let f = b.const_bit(false);
        let mut out = vec![b.mux_bit(guard.clone(), t, g)];
        for w in z.iter().chain(&x).chain(&y) {
            out.push(b.mux_bit(guard.clone(), f.clone(), w.clone()));
        }
        b.finish_indexed("o", &out)
    }?;

    let mut vars = vec!["g".to_string()];
    vars.extend((0..n).map(|i| format!("z{}", i + 1)));
    vars.extend(x_vars.iter().cloned());
    vars.extend(y_vars.iter().cloned());

    let mut goal_bits = vec![true];
    goal_bits.extend(vec![false; n + n + m]);

    let actions = ActionSet::new(
        vec![
            ("settrue".to_string(), set_action("settrue", true)?),
            ("setfalse".to_string(), set_action("setfalse", false)?),
            ("move".to_string(), move_action),
            ("last".to_string(), last_action),
        ],
        width,
    )
    .map_err(|e| QbfError::Parse { line: 0, message: e.to_string() })?;

    PolyplanInstance::new(vars, State::zeros(width), GoalSpec::State(State::new(goal_bits)), actions)
        .map_err(|e| QbfError::Parse { line: 0, message: e.to_string() })
}

/// The unique-plan instance over states `(b1, b2, b3, F, M)`: one chunk
/// per formula F, entered by guessing its satisfiability (`sat` sets b2,
/// `unsat` leaves it clear; both raise b1) and traversed by `move`, which
/// scans the models latching "a satisfying model was passed" in b3. At the
/// chunk-final model, `move` proceeds to the next chunk only if the guess
/// is confirmed, so exactly one action sequence crosses all chunks: the
/// instance's single plan encodes the satisfiability of every formula.
pub struct UniquePlanInstance {
    pub instance: PolyplanInstance,
    enc: Cnf3Encoding,
}

pub fn unique_plan_instance(enc: &Cnf3Encoding) -> Result<UniquePlanInstance, PlanError> {
    let m = enc.total_bits();
    let r = enc.num_vars();
    let width = 3 + m + r;
    if width > 64 {
        return Err(PlanError::CapExceeded { what: "state width", cap: 64, actual: width as u128 });
    }
    let eval = cnf_eval_circuit(enc);

    let build = |name: &str| {
        let mut b = CircuitBuilder::new(name);
        let b1 = b.add_input("b1");
        let b2 = b.add_input("b2");
        let b3 = b.add_input("b3");
        let f = b.add_inputs("f", m);
        let mv = b.add_inputs("m", r);
        (b, b1, b2, b3, f, mv)
    };

    let guess_action = |name: &str, optimistic: bool| {
        let (mut b, b1, b2, b3, f, mv) = build(name);
        let guard = b.not(b1.clone());
        let t = b.const_bit(true);
        let new_b2 = if optimistic { t.clone() } else { b2.clone() };
        let mut out = vec![
            b.mux_bit(guard.clone(), t.clone(), b1),
            b.mux_bit(guard, new_b2, b2),
            b3,
        ];
        out.extend(f);
        out.extend(mv);
        b.finish_indexed("o", &out)
    };

    let move_action = {
        let (mut b, b1, b2, b3, f, mv) = build("move");
        let mut eval_in = f.clone();
        eval_in.extend(mv.iter().cloned());
        let sat_now = b.embed(&eval, &eval_in).outputs[0].clone();
        let at_final = b.eq_const(&mv, (1u128 << r) - 1);
        let not_final = b.not(at_final.clone());

        // mid-chunk: advance the model, latch b3
        let scan_guard = b.and(vec![b1.clone(), not_final]);
        // chunk end: the guess must be confirmed to move on
        let not_b2 = b.not(b2.clone());
        let not_b3 = b.not(b3.clone());
        let not_sat = b.not(sat_now.clone());
        let unsat_confirmed = b.and(vec![not_b2, not_b3, not_sat]);
        let seen_earlier = b.and(vec![b2.clone(), b3.clone()]);
        let seen_last = b.and(vec![b2.clone(), sat_now.clone()]);
        let exit = b.or(vec![unsat_confirmed, seen_earlier, seen_last]);
        let exit_guard = b.and(vec![b1.clone(), at_final, exit]);

        let m_next = b.increment(&mv);
        let f_next = b.increment(&f);
        let zeros_m = b.const_bits(0, r);
        let false_bit = b.const_bit(false);
        let latched = b.or(vec![b3.clone(), sat_now]);

        let mut out = Vec::with_capacity(width);
        out.push(b.mux_bit(exit_guard.clone(), false_bit.clone(), b1));
        out.push(b.mux_bit(exit_guard.clone(), false_bit.clone(), b2));
        {
            let mid = b.mux_bit(scan_guard.clone(), latched, b3);
            out.push(b.mux_bit(exit_guard.clone(), false_bit, mid));
        }
        for (i, fw) in f.iter().enumerate() {
            out.push(b.mux_bit(exit_guard.clone(), f_next[i].clone(), fw.clone()));
        }
        for (i, mw) in mv.iter().enumerate() {
            let mid = b.mux_bit(scan_guard.clone(), m_next[i].clone(), mw.clone());
            out.push(b.mux_bit(exit_guard.clone(), zeros_m[i].clone(), mid));
        }
        b.finish_indexed("o", &out)
    }?;

    let actions = ActionSet::new(
        vec![
            ("sat".to_string(), guess_action("sat", true)?),
            ("unsat".to_string(), guess_action("unsat", false)?),
            ("move".to_string(), move_action),
        ],
        width,
    )?;

    // goal: the last state of the last chunk, computed by scanning the
    // final formula's models once
    let last_formula = enc.formula_at(enc.num_formulas() - 1).unwrap().to_formula();
    let model_assignment = |value: u64| -> Assignment {
        (0..r)
            .map(|i| (format!("x{}", i + 1), value >> (r - 1 - i) & 1 == 1))
            .collect()
    };
    let mut seen_before_final = false;
    for value in 0..(1u64 << r) - 1 {
        seen_before_final |= eval_formula(&last_formula, &model_assignment(value))
            .expect("closed formula evaluates");
    }
    let final_sat = seen_before_final
        || eval_formula(&last_formula, &model_assignment((1u64 << r) - 1)).unwrap();
    let mut goal_bits = vec![true, final_sat, seen_before_final];
    goal_bits.extend(vec![true; m + r]);

    let mut vars = vec!["b1".to_string(), "b2".to_string(), "b3".to_string()];
    vars.extend((0..m).map(|i| format!("f{}", i + 1)));
    vars.extend((0..r).map(|i| format!("m{}", i + 1)));

    let instance = PolyplanInstance::new(
        vars,
        State::zeros(width),
        GoalSpec::State(State::new(goal_bits)),
        actions,
    )?;
    Ok(UniquePlanInstance { instance, enc: *enc })
}

impl UniquePlanInstance {
    pub fn encoding(&self) -> &Cnf3Encoding {
        &self.enc
    }

    /// States per chunk: the guess state plus one per model.
    pub fn chunk_len(&self) -> u64 {
        (1u64 << self.enc.num_vars()) + 1
    }

    /// 0-indexed trace position of formula k's chunk-opening state, where
    /// the plan's action is `sat` or `unsat` according to satisfiability.
    pub fn chunk_start_position(&self, k: u64) -> u64 {
        k * self.chunk_len()
    }

    pub fn decode_state(&self, state: &State) -> (bool, bool, bool, u128, u128) {
        let m = self.enc.total_bits();
        let r = self.enc.num_vars();
        let bits = state.bits();
        (
            bits[0],
            bits[1],
            bits[2],
            crate::bits::u128_from_bits_be(&bits[3..3 + m]),
            crate::bits::u128_from_bits_be(&bits[3 + m..3 + m + r]),
        )
    }
}
