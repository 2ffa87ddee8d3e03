//! The counting formula and lexicographic models.
//!
//! A model is lexicographic over an ordered variable list when reading the
//! variables as a binary number (first variable most significant) yields a
//! value that increases by one, modulo `2^n`, at every step. The counting
//! formula pins exactly that behaviour: the least significant variable
//! toggles every step, and each higher variable toggles exactly when the
//! variable below it falls from true to false (the carry).

use super::{LassoModel, Ltl, LtlError};
use crate::bits::State;

/// The counting formula over an explicitly ordered variable list, most
/// significant first; the last variable toggles every step.
pub fn count_formula_over(vars: &[String]) -> Ltl {
    assert!(!vars.is_empty(), "counting needs at least one variable");
    let toggles = |v: &str| {
        Ltl::not(Ltl::iff(Ltl::atom(v), Ltl::next(Ltl::atom(v))))
    };
    let falls = |v: &str| {
        Ltl::and(vec![Ltl::atom(v), Ltl::next(Ltl::not(Ltl::atom(v)))])
    };
    let last = vars.len() - 1;
    let mut parts = vec![Ltl::globally(toggles(&vars[last]))];
    for i in (0..last).rev() {
        // vars[i] toggles exactly when vars[i + 1] falls from 1 to 0
        parts.push(Ltl::globally(Ltl::iff(falls(&vars[i + 1]), toggles(&vars[i]))));
    }
    Ltl::and(parts)
}

/// The counting formula over `x1..xn` with `xn` least significant.
pub fn count_formula(n: usize) -> Ltl {
    let vars: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
    count_formula_over(&vars)
}

/// The lexicographic model over `x1..xn` (plus optional extra variables
/// held constant, false unless listed in `extras_true`): an empty initial
/// part and the `2^n` counting states beginning at `start`. This is the
/// canonical form of its infinite word.
pub fn lexicographic_model(
    n: usize,
    start: u128,
    extras: &[(String, bool)],
) -> Result<LassoModel, LtlError> {
    let vars: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
    lexicographic_model_over(&vars, start, extras)
}

/// Like [`lexicographic_model`] over an explicit variable list, most
/// significant first.
pub fn lexicographic_model_over(
    vars: &[String],
    start: u128,
    extras: &[(String, bool)],
) -> Result<LassoModel, LtlError> {
    let n = vars.len();
    if n == 0 || n > 24 {
        return Err(LtlError::CapExceeded { what: "counting width", cap: 24, actual: n as u64 });
    }
    if start >= 1u128 << n {
        return Err(LtlError::PositionRange { pos: start as usize, len: 1 << n });
    }
    let mut all_vars = vars.to_vec();
    for (name, _) in extras {
        all_vars.push(name.clone());
    }
    let period = (0..1u128 << n)
        .map(|offset| {
            let value = (start + offset) % (1 << n);
            let mut bits = crate::bits::bits_from_u128_be(value, n).unwrap();
            bits.extend(extras.iter().map(|(_, v)| *v));
            State::new(bits)
        })
        .collect();
    LassoModel::new(all_vars, Vec::new(), period)
}
