//! From QBF validity to LTL satisfaction over a counting model.
//!
//! The quantified variables are renamed to odd indices `x1, x3, ...` with
//! the *innermost* block becoming `x1`, and even-indexed helper variables
//! are interleaved, one per block plus one above the outermost. On the
//! lexicographic model over all of them (`x1` least significant, so inner
//! variables cycle fastest), the first position of every region where the
//! variables above `x_j` hold a fresh value starts a full sweep of the
//! variables below; a ladder of until-formulas evaluates one quantifier
//! per rung:
//!
//! * rung 1 checks the matrix across both values of `x1`, delimited by the
//!   helper `x2` first turning true;
//! * rung j checks rung j-2 at the two positions inside its region where
//!   all variables below `x_j` are zero (the starts of the `x_j = 0` and
//!   `x_j = 1` subregions), delimited by the helper `x_{j+1}`.
//!
//! Universal rungs require both checkpoints, existential rungs one; the
//! dual is the usual negation of the until. The top rung, evaluated at
//! position 0 of the lexicographic model started at all-false, equals the
//! validity of the QBF.

use super::count::{count_formula_over, lexicographic_model_over};
use super::{LassoModel, Ltl, LtlError};
use crate::proplogic::Formula;
use crate::qbf::{Qbf, Quantifier};

/// Result of the translation: the evaluation ladder, the closed
/// satisfiability formula, and the variable bookkeeping.
#[derive(Debug, Clone)]
pub struct QbfToLtl {
    /// The top rung `L_n`: true at position 0 of the counting model
    /// exactly when the QBF is valid.
    pub ladder: Ltl,
    /// `ladder & COUNT & all variables initially false`: satisfiable
    /// exactly when the QBF is valid.
    pub sat_formula: Ltl,
    /// All model variables `x1..x(n+1)`, most significant first.
    pub vars: Vec<String>,
    /// Renaming applied to the QBF's variables, outermost block first.
    pub renaming: Vec<(String, String)>,
}

fn rename_formula(f: &Formula, map: &std::collections::HashMap<String, String>) -> Formula {
    match f {
        Formula::True => Formula::True,
        Formula::False => Formula::False,
        Formula::Atom(a) => Formula::Atom(map[a].clone()),
        Formula::Not(g) => Formula::not(rename_formula(g, map)),
        Formula::And(fs) => Formula::And(fs.iter().map(|g| rename_formula(g, map)).collect()),
        Formula::Or(fs) => Formula::Or(fs.iter().map(|g| rename_formula(g, map)).collect()),
        Formula::Implies(a, b) => {
            Formula::implies(rename_formula(a, map), rename_formula(b, map))
        }
        Formula::Iff(a, b) => Formula::iff(rename_formula(a, map), rename_formula(b, map)),
    }
}

/// Translate a QBF whose prefix consists of single-variable blocks.
pub fn qbf_to_ltl(q: &Qbf) -> Result<QbfToLtl, LtlError> {
    let blocks = q.prefix();
    if blocks.is_empty() || blocks.iter().any(|b| b.vars.len() != 1) {
        return Err(LtlError::CapExceeded {
            what: "translation needs single-variable quantifier blocks; block width",
            cap: 1,
            actual: blocks.iter().map(|b| b.vars.len()).max().unwrap_or(0) as u64,
        });
    }
    let t = blocks.len();
    let n = 2 * t - 1;
    if n + 1 > 24 {
        return Err(LtlError::CapExceeded { what: "quantifier blocks", cap: 11, actual: t as u64 });
    }

    // innermost block becomes x1, then x3, ... outermost x_n
    let mut renaming = Vec::new();
    let mut map = std::collections::HashMap::new();
    for (k, block) in blocks.iter().enumerate() {
        let new = format!("x{}", 2 * (t - k) - 1);
        renaming.push((block.vars[0].clone(), new.clone()));
        map.insert(block.vars[0].clone(), new);
    }
    let matrix = Ltl::from_propositional(&rename_formula(q.matrix(), &map));

    // rung j handles the block quantifying x_j (innermost first)
    let mut ladder = matrix;
    for (k, block) in blocks.iter().enumerate().rev() {
        let j = 2 * (t - k) - 1;
        let guard = Ltl::and((1..j).map(|v| Ltl::not(Ltl::atom(format!("x{v}")))).collect());
        let guarded = |body: Ltl| {
            if guard == Ltl::True {
                body
            } else {
                Ltl::implies(guard.clone(), body)
            }
        };
        let trigger = Ltl::atom(format!("x{}", j + 1));
        ladder = match block.quantifier {
            Quantifier::Forall => Ltl::until(guarded(ladder), trigger),
            Quantifier::Exists => Ltl::not(Ltl::until(guarded(Ltl::not(ladder)), trigger)),
        };
    }

    // model variables, most significant first: x_{n+1} down to x_1
    let vars: Vec<String> = (1..=n + 1).rev().map(|i| format!("x{i}")).collect();
    let mut conjuncts = vec![ladder.clone(), count_formula_over(&vars)];
    for v in &vars {
        conjuncts.push(Ltl::not(Ltl::atom(v.clone())));
    }
    let sat_formula = Ltl::and(conjuncts);

    Ok(QbfToLtl { ladder, sat_formula, vars, renaming })
}

impl QbfToLtl {
    /// The lexicographic model over the translation's variables, started
    /// at all-false: the model on which the ladder decides validity at
    /// position 0.
    pub fn counting_model(&self) -> Result<LassoModel, LtlError> {
        lexicographic_model_over(&self.vars, 0, &[])
    }
}
