//! Propositional formulas, brute-force SAT/QBF oracles and the fixed
//! bit-encoding of small 3CNF formulas used by the reduction generators.

pub mod cnf;

mod parse;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::qbf::{Qbf, Quantifier};

pub use cnf::{Clause, Cnf3, Cnf3Encoding, Literal};

/// Default atom cap for [`brute_sat`].
pub const DEFAULT_SAT_CAP: usize = 20;
/// Default total-variable cap for [`qbf_brute_valid`].
pub const DEFAULT_QBF_CAP: usize = 16;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FormulaError {
    #[error("assignment does not cover atom `{0}`")]
    MissingAtom(String),
    #[error("{kind} has {actual} variables, exceeding the cap of {cap}")]
    CapExceeded { kind: &'static str, cap: usize, actual: usize },
    #[error("formula parse error at {position}: {message}")]
    Parse { position: usize, message: String },
}

/// A propositional formula. Conjunction and disjunction have finite
/// arbitrary arity; an empty conjunction is true and an empty disjunction
/// is false.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    True,
    False,
    Atom(String),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn atom(name: impl Into<String>) -> Self {
        Formula::Atom(name.into())
    }

    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    /// Conjunction, flattening the trivial cases.
    pub fn and(mut fs: Vec<Formula>) -> Self {
        match fs.len() {
            0 => Formula::True,
            1 => fs.pop().unwrap(),
            _ => Formula::And(fs),
        }
    }

    /// Disjunction, flattening the trivial cases.
    pub fn or(mut fs: Vec<Formula>) -> Self {
        match fs.len() {
            0 => Formula::False,
            1 => fs.pop().unwrap(),
            _ => Formula::Or(fs),
        }
    }

    pub fn implies(a: Formula, b: Formula) -> Self {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Self {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    /// Atom for `name` if `positive`, its negation otherwise.
    pub fn literal(name: impl Into<String>, positive: bool) -> Self {
        let a = Formula::atom(name);
        if positive {
            a
        } else {
            Formula::not(a)
        }
    }

    /// The set of atoms, sorted by name.
    pub fn atoms(&self) -> BTreeSet<String> {
        let mut set = BTreeSet::new();
        self.collect_atoms(&mut set);
        set
    }

    fn collect_atoms(&self, set: &mut BTreeSet<String>) {
        match self {
            Formula::True | Formula::False => {}
            Formula::Atom(a) => {
                set.insert(a.clone());
            }
            Formula::Not(f) => f.collect_atoms(set),
            Formula::And(fs) | Formula::Or(fs) => {
                for f in fs {
                    f.collect_atoms(set);
                }
            }
            Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.collect_atoms(set);
                b.collect_atoms(set);
            }
        }
    }

    pub fn parse(text: &str) -> Result<Formula, FormulaError> {
        parse::parse_formula(text)
    }
}

/// A total assignment of atoms to truth values, ordered by atom name so
/// enumeration and display are deterministic.
pub type Assignment = BTreeMap<String, bool>;

/// Classical evaluation. Errors if the assignment misses an atom of `f`.
pub fn eval_formula(f: &Formula, assignment: &Assignment) -> Result<bool, FormulaError> {
    Ok(match f {
        Formula::True => true,
        Formula::False => false,
        Formula::Atom(a) => *assignment
            .get(a)
            .ok_or_else(|| FormulaError::MissingAtom(a.clone()))?,
        Formula::Not(g) => !eval_formula(g, assignment)?,
        Formula::And(fs) => {
            let mut result = true;
            for g in fs {
                result &= eval_formula(g, assignment)?;
            }
            result
        }
        Formula::Or(fs) => {
            let mut result = false;
            for g in fs {
                result |= eval_formula(g, assignment)?;
            }
            result
        }
        Formula::Implies(a, b) => !eval_formula(a, assignment)? || eval_formula(b, assignment)?,
        Formula::Iff(a, b) => eval_formula(a, assignment)? == eval_formula(b, assignment)?,
    })
}

fn assignment_from_index(atoms: &[String], index: u64) -> Assignment {
    let n = atoms.len();
    atoms
        .iter()
        .enumerate()
        .map(|(i, a)| (a.clone(), index >> (n - 1 - i) & 1 == 1))
        .collect()
}

/// First satisfying assignment in lexicographic order over the sorted atom
/// list (all-false first, first atom most significant), or `None`.
pub fn brute_sat(f: &Formula) -> Result<Option<Assignment>, FormulaError> {
    brute_sat_capped(f, DEFAULT_SAT_CAP)
}

pub fn brute_sat_capped(f: &Formula, cap: usize) -> Result<Option<Assignment>, FormulaError> {
    let atoms: Vec<String> = f.atoms().into_iter().collect();
    if atoms.len() > cap {
        return Err(FormulaError::CapExceeded {
            kind: "formula",
            cap,
            actual: atoms.len(),
        });
    }
    for index in 0..1u64 << atoms.len() {
        let assignment = assignment_from_index(&atoms, index);
        if eval_formula(f, &assignment)? {
            return Ok(Some(assignment));
        }
    }
    Ok(None)
}

/// Brute-force QBF validity by recursive expansion of the prefix.
pub fn qbf_brute_valid(q: &Qbf) -> Result<bool, FormulaError> {
    qbf_brute_valid_capped(q, DEFAULT_QBF_CAP)
}

pub fn qbf_brute_valid_capped(q: &Qbf, cap: usize) -> Result<bool, FormulaError> {
    let vars: Vec<(Quantifier, String)> = q
        .prefix()
        .iter()
        .flat_map(|b| b.vars.iter().map(move |v| (b.quantifier, v.clone())))
        .collect();
    if vars.len() > cap {
        return Err(FormulaError::CapExceeded { kind: "qbf", cap, actual: vars.len() });
    }
    let mut assignment = Assignment::new();
    expand(q.matrix(), &vars, 0, &mut assignment)
}

fn expand(
    matrix: &Formula,
    vars: &[(Quantifier, String)],
    depth: usize,
    assignment: &mut Assignment,
) -> Result<bool, FormulaError> {
    if depth == vars.len() {
        return eval_formula(matrix, assignment);
    }
    let (quantifier, ref var) = vars[depth];
    let mut results = [false, false];
    for (i, value) in [false, true].into_iter().enumerate() {
        assignment.insert(var.clone(), value);
        results[i] = expand(matrix, vars, depth + 1, assignment)?;
        assignment.remove(var);
    }
    Ok(match quantifier {
        Quantifier::Forall => results[0] && results[1],
        Quantifier::Exists => results[0] || results[1],
    })
}

// ---------------------------------------------------------------------------
// Text syntax, shared repo-wide: atoms are identifiers; operators
// `! & | -> <->`; constants `true` / `false`; parentheses. Precedence
// ! > & > | > -> > <->, with right-associative arrows.
// ---------------------------------------------------------------------------

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

impl Formula {
    /// Precedence levels: Iff 1, Implies 2, Or 3, And 4, Not 5.
    fn prec(&self) -> u8 {
        match self {
            Formula::Iff(..) => 1,
            Formula::Implies(..) => 2,
            Formula::Or(..) => 3,
            Formula::And(..) => 4,
            _ => 6,
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        let prec = self.prec();
        let parens = prec < min;
        if parens {
            write!(f, "(")?;
        }
        match self {
            Formula::True => write!(f, "true")?,
            Formula::False => write!(f, "false")?,
            Formula::Atom(a) => write!(f, "{a}")?,
            Formula::Not(g) => {
                write!(f, "!")?;
                g.fmt_prec(f, 5)?;
            }
            Formula::And(fs) => {
                for (i, g) in fs.iter().enumerate() {
                    if i > 0 {
                        write!(f, " & ")?;
                    }
                    g.fmt_prec(f, prec + 1)?;
                }
            }
            Formula::Or(fs) => {
                for (i, g) in fs.iter().enumerate() {
                    if i > 0 {
                        write!(f, " | ")?;
                    }
                    g.fmt_prec(f, prec + 1)?;
                }
            }
            Formula::Implies(a, b) => {
                a.fmt_prec(f, prec + 1)?;
                write!(f, " -> ")?;
                b.fmt_prec(f, prec)?;
            }
            Formula::Iff(a, b) => {
                a.fmt_prec(f, prec + 1)?;
                write!(f, " <-> ")?;
                b.fmt_prec(f, prec)?;
            }
        }
        if parens {
            write!(f, ")")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests;
