//! Independent brute-force oracles.
//!
//! Everything here recomputes, by direct definition and without sharing
//! code paths with the production implementations, the answers those
//! implementations are tested against: a positional-recursion LTL
//! evaluator, an exhaustive lasso-model search, and an exhaustive
//! no-repetition plan enumerator. Slow on purpose; meant for desk-scale
//! cross-validation.

use crate::bits::State;
use crate::ltl::{LassoModel, Ltl};
use crate::plan::PolyplanInstance;

/// Naive LTL evaluation by direct recursion over positions of the
/// infinite word, mapping positions past the initial part through period
/// arithmetic.
///
/// Truth values of any formula are periodic past the initial part, so a
/// minimal witness (or counterexample) of an until, eventually or globally
/// lies within one period past `max(pos, |initial|)`; each node scans just
/// that window.
pub fn naive_ltl_eval(f: &Ltl, m: &LassoModel, pos: usize) -> bool {
    match f {
        Ltl::True => true,
        Ltl::False => false,
        Ltl::Atom(a) => {
            let index = m.vars.iter().position(|v| v == a).expect("atom bound by caller");
            m.state_at(pos).bit(index)
        }
        Ltl::Not(g) => !naive_ltl_eval(g, m, pos),
        Ltl::And(fs) => fs.iter().all(|g| naive_ltl_eval(g, m, pos)),
        Ltl::Or(fs) => fs.iter().any(|g| naive_ltl_eval(g, m, pos)),
        Ltl::Implies(a, b) => !naive_ltl_eval(a, m, pos) || naive_ltl_eval(b, m, pos),
        Ltl::Iff(a, b) => naive_ltl_eval(a, m, pos) == naive_ltl_eval(b, m, pos),
        Ltl::Next(g) => naive_ltl_eval(g, m, pos + 1),
        Ltl::Until(a, b) => {
            let window = pos.max(m.initial.len()) + m.period.len();
            (pos..=window).any(|q| {
                naive_ltl_eval(b, m, q) && (pos..q).all(|between| naive_ltl_eval(a, m, between))
            })
        }
        Ltl::Eventually(g) => {
            let window = pos.max(m.initial.len()) + m.period.len();
            (pos..=window).any(|q| naive_ltl_eval(g, m, q))
        }
        Ltl::Globally(g) => {
            let window = pos.max(m.initial.len()) + m.period.len();
            (pos..=window).all(|q| naive_ltl_eval(g, m, q))
        }
    }
}

/// Exhaustive lasso search: every initial part of length at most
/// `max_init` and period of length 1..=`max_period` over the formula's
/// atoms, in lexicographic order, evaluated with the production
/// evaluator. Returns the first model found.
pub fn naive_find_model(
    f: &Ltl,
    max_init: usize,
    max_period: usize,
) -> Option<LassoModel> {
    let vars: Vec<String> = f.atoms().into_iter().collect();
    let width = vars.len();
    for init_len in 0..=max_init {
        for period_len in 1..=max_period {
            let positions = init_len + period_len;
            let combos = 1u64 << (width * positions);
            for combo in 0..combos {
                let state = |slot: usize| -> State {
                    State::new(
                        (0..width)
                            .map(|bit| combo >> (slot * width + bit) & 1 == 1)
                            .collect(),
                    )
                };
                let initial: Vec<State> = (0..init_len).map(state).collect();
                let period: Vec<State> = (init_len..positions).map(state).collect();
                let model = LassoModel::new(vars.clone(), initial, period).unwrap();
                if crate::ltl::ltl_eval(f, &model, 0).unwrap() {
                    return Some(model);
                }
            }
        }
    }
    None
}

/// Exhaustive enumeration of every repetition-free plan of an instance by
/// depth-first search over action sequences, collecting up to `cap` plans.
/// The bound is only a safety valve: traces cannot repeat states, so the
/// search space is finite.
pub fn enumerate_all_plans(inst: &PolyplanInstance, cap: usize) -> Vec<Vec<usize>> {
    let mut found = Vec::new();
    let mut path = Vec::new();
    let mut trace = vec![inst.initial.clone()];
    dfs_plans(inst, &mut path, &mut trace, &mut found, cap);
    found
}

fn dfs_plans(
    inst: &PolyplanInstance,
    path: &mut Vec<usize>,
    trace: &mut Vec<State>,
    found: &mut Vec<Vec<usize>>,
    cap: usize,
) {
    if found.len() >= cap {
        return;
    }
    let current = trace.last().unwrap().clone();
    if inst.goal.accepts(&current).unwrap_or(false) {
        found.push(path.clone());
        // a goal state ends a plan; longer extensions would pass through
        // the goal, which we do not count as separate plans
        return;
    }
    for action in 0..inst.actions.len() {
        let next = match inst.actions.apply(action, &current) {
            Ok(next) => next,
            Err(_) => continue,
        };
        if trace.contains(&next) {
            continue;
        }
        path.push(action);
        trace.push(next);
        dfs_plans(inst, path, trace, found, cap);
        trace.pop();
        path.pop();
    }
}

/// Is the period of this lasso a lexicographic counting run over its
/// variables (first variable most significant)?
pub fn is_lexicographic_period(m: &LassoModel) -> bool {
    let n = m.vars.len();
    if n == 0 || n > 24 || !m.initial.is_empty() {
        return false;
    }
    let modulus = 1u128 << n;
    m.period.iter().zip(m.period.iter().cycle().skip(1)).all(|(s, s_next)| {
        (s.to_u128() + 1) % modulus == s_next.to_u128() % modulus
    })
}
