//! Seeded random object generators for the cross-validation suites.
//!
//! Everything takes an explicit RNG so identical seeds reproduce identical
//! suites, byte for byte.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::bits::State;
use crate::circuit::{Circuit, CircuitBuilder};
use crate::ltl::{LassoModel, Ltl};
use crate::proplogic::Formula;
use crate::seq::{ActionSet, PlanSeqRepr, SeqKind};

pub fn rng_from_seed(seed: u64) -> ChaCha12Rng {
    ChaCha12Rng::seed_from_u64(seed)
}

/// Random propositional formula over the given atoms.
pub fn random_formula(rng: &mut impl Rng, atoms: &[String], depth: usize) -> Formula {
    if depth == 0 || rng.random_ratio(1, 5) {
        return match rng.random_range(0..10) {
            0 => Formula::True,
            1 => Formula::False,
            _ => Formula::Atom(atoms[rng.random_range(0..atoms.len())].clone()),
        };
    }
    match rng.random_range(0..5) {
        0 => Formula::not(random_formula(rng, atoms, depth - 1)),
        1 => Formula::And(
            (0..rng.random_range(2..=3))
                .map(|_| random_formula(rng, atoms, depth - 1))
                .collect(),
        ),
        2 => Formula::Or(
            (0..rng.random_range(2..=3))
                .map(|_| random_formula(rng, atoms, depth - 1))
                .collect(),
        ),
        3 => Formula::implies(
            random_formula(rng, atoms, depth - 1),
            random_formula(rng, atoms, depth - 1),
        ),
        _ => Formula::iff(
            random_formula(rng, atoms, depth - 1),
            random_formula(rng, atoms, depth - 1),
        ),
    }
}

/// Random LTL formula over the given atoms.
pub fn random_ltl(rng: &mut impl Rng, atoms: &[String], depth: usize) -> Ltl {
    if depth == 0 || rng.random_ratio(1, 6) {
        return match rng.random_range(0..10) {
            0 => Ltl::True,
            1 => Ltl::False,
            _ => Ltl::Atom(atoms[rng.random_range(0..atoms.len())].clone()),
        };
    }
    match rng.random_range(0..9) {
        0 => Ltl::not(random_ltl(rng, atoms, depth - 1)),
        1 => Ltl::And(
            (0..2).map(|_| random_ltl(rng, atoms, depth - 1)).collect(),
        ),
        2 => Ltl::Or(
            (0..2).map(|_| random_ltl(rng, atoms, depth - 1)).collect(),
        ),
        3 => Ltl::implies(
            random_ltl(rng, atoms, depth - 1),
            random_ltl(rng, atoms, depth - 1),
        ),
        4 => Ltl::next(random_ltl(rng, atoms, depth - 1)),
        5 => Ltl::eventually(random_ltl(rng, atoms, depth - 1)),
        6 => Ltl::globally(random_ltl(rng, atoms, depth - 1)),
        _ => Ltl::until(
            random_ltl(rng, atoms, depth - 1),
            random_ltl(rng, atoms, depth - 1),
        ),
    }
}

pub fn random_state(rng: &mut impl Rng, width: usize) -> State {
    State::new((0..width).map(|_| rng.random()).collect())
}

/// Random lasso over the given variables.
pub fn random_lasso(
    rng: &mut impl Rng,
    vars: &[String],
    max_init: usize,
    max_period: usize,
) -> LassoModel {
    let init_len = rng.random_range(0..=max_init);
    let period_len = rng.random_range(1..=max_period);
    let initial = (0..init_len).map(|_| random_state(rng, vars.len())).collect();
    let period = (0..period_len).map(|_| random_state(rng, vars.len())).collect();
    LassoModel::new(vars.to_vec(), initial, period).unwrap()
}

/// Circuit mapping each listed state to a designated image and everything
/// else to itself: the workhorse for turning random traces into actions.
pub fn circuit_from_transitions(
    name: &str,
    width: usize,
    transitions: &[(State, State)],
) -> Circuit {
    let mut b = CircuitBuilder::new(name);
    let input = b.add_inputs("s", width);
    let mut out_wires = input.clone();
    for (from, to) in transitions {
        let hit = b.eq_const(&input, from.to_u128());
        let image: Vec<String> = to.bits().iter().map(|&bit| b.const_bit(bit)).collect();
        out_wires = b.mux(hit, &image, &out_wires);
    }
    b.finish_indexed("o", &out_wires).expect("transition circuit is well formed")
}

/// Circuit mapping each listed state to a constant index and everything
/// else to index 0.
pub fn selector_from_table(
    name: &str,
    width: usize,
    index_bits: usize,
    table: &[(State, usize)],
) -> Circuit {
    let mut b = CircuitBuilder::new(name);
    let input = b.add_inputs("s", width);
    let mut out_wires = b.const_bits(0, index_bits);
    for (state, index) in table {
        let hit = b.eq_const(&input, state.to_u128());
        let image = b.const_bits(*index as u128, index_bits);
        out_wires = b.mux(hit, &image, &out_wires);
    }
    b.finish_indexed("a", &out_wires).expect("selector circuit is well formed")
}

/// Circuit mapping time t to the t-th state of the list (don't-care
/// beyond).
pub fn time_table_circuit(name: &str, time_bits: usize, states: &[State]) -> Circuit {
    let width = states[0].width();
    let mut b = CircuitBuilder::new(name);
    let time = b.add_inputs("t", time_bits);
    let mut out_wires = b.const_bits(0, width);
    for (t, state) in states.iter().enumerate() {
        let hit = b.eq_const(&time, t as u128);
        let image: Vec<String> = state.bits().iter().map(|&bit| b.const_bit(bit)).collect();
        out_wires = b.mux(hit, &image, &out_wires);
    }
    b.finish_indexed("o", &out_wires).expect("time table circuit is well formed")
}

/// A random repetition-free trace of `steps + 1` distinct states.
pub fn random_trace(rng: &mut impl Rng, width: usize, steps: u64) -> Vec<State> {
    assert!(steps < 1 << width, "trace cannot be repetition-free");
    let mut states = Vec::with_capacity(steps as usize + 1);
    while states.len() <= steps as usize {
        let state = random_state(rng, width);
        if !states.contains(&state) {
            states.push(state);
        }
    }
    states
}

/// A random next-action representation realized by an explicit trace:
/// distinct states, random action assignment per step, actions built as
/// transition tables (identity off-trace).
pub fn random_next_action_repr(
    rng: &mut impl Rng,
    width: usize,
    num_actions: usize,
    steps: u64,
) -> PlanSeqRepr {
    let states = random_trace(rng, width, steps);
    let chosen: Vec<usize> =
        (0..steps as usize).map(|_| rng.random_range(0..num_actions)).collect();
    let mut per_action: Vec<Vec<(State, State)>> = vec![Vec::new(); num_actions];
    let mut table = Vec::new();
    for (t, &action) in chosen.iter().enumerate() {
        per_action[action].push((states[t].clone(), states[t + 1].clone()));
        table.push((states[t].clone(), action));
    }
    let actions = ActionSet::new(
        per_action
            .iter()
            .enumerate()
            .map(|(i, transitions)| {
                let name = format!("a{}", i + 1);
                (name.clone(), circuit_from_transitions(&name, width, transitions))
            })
            .collect(),
        width,
    )
    .unwrap();
    let selector = selector_from_table("pick", width, actions.index_bits(), &table);
    let vars = (0..width).map(|i| format!("v{}", i + 1)).collect();
    PlanSeqRepr::new(SeqKind::NextAction, vars, states[0].clone(), actions, steps, selector)
        .expect("random representation is well formed")
}

/// A random time/state representation with an action set that witnesses
/// every step (one transition-table action per step, folded into
/// `num_actions` buckets).
pub fn random_time_state_repr(
    rng: &mut impl Rng,
    width: usize,
    num_actions: usize,
    steps: u64,
) -> PlanSeqRepr {
    let states = random_trace(rng, width, steps);
    let mut per_action: Vec<Vec<(State, State)>> = vec![Vec::new(); num_actions];
    for t in 0..steps as usize {
        let bucket = rng.random_range(0..num_actions);
        per_action[bucket].push((states[t].clone(), states[t + 1].clone()));
    }
    let actions = ActionSet::new(
        per_action
            .iter()
            .enumerate()
            .map(|(i, transitions)| {
                let name = format!("a{}", i + 1);
                (name.clone(), circuit_from_transitions(&name, width, transitions))
            })
            .collect(),
        width,
    )
    .unwrap();
    let time_bits = crate::bits::index_width(steps as u128 + 1);
    let circuit = time_table_circuit("trace", time_bits, &states);
    let vars = (0..width).map(|i| format!("v{}", i + 1)).collect();
    PlanSeqRepr::new(SeqKind::TimeState, vars, states[0].clone(), actions, steps, circuit)
        .expect("random representation is well formed")
}

/// A random next-state representation realized by an explicit trace.
pub fn random_next_state_repr(
    rng: &mut impl Rng,
    width: usize,
    num_actions: usize,
    steps: u64,
) -> PlanSeqRepr {
    let ta = random_time_state_repr(rng, width, num_actions, steps);
    let states = {
        let mut states = Vec::new();
        for t in 0..=steps {
            states.push(ta.element_at(t).unwrap());
        }
        states
    };
    let transitions: Vec<(State, State)> = states.windows(2).map(|w| (w[0].clone(), w[1].clone())).collect();
    let circuit = circuit_from_transitions("succ", width, &transitions);
    PlanSeqRepr::new(
        SeqKind::NextState,
        ta.vars.clone(),
        states[0].clone(),
        ta.actions.clone(),
        steps,
        circuit,
    )
    .expect("random representation is well formed")
}
