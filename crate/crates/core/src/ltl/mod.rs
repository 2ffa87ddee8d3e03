//! Linear temporal logic over ultimately periodic (lasso) models.
//!
//! A lasso is a finite initial segment followed by a period repeated
//! forever; every satisfiable LTL formula has such a model. The evaluator
//! here is exact: it labels the `|initial| + |period|` distinct positions
//! bottom-up, resolving until-style operators by fixpoint iteration over
//! the loop, so no unrolling or approximation is involved.

pub mod count;
pub mod reduction;
pub mod succinct;
pub mod tableau;

mod parse;

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::bits::State;
use crate::circuit::{CircuitError, LineCursor};
use crate::proplogic::Formula;

pub use count::{count_formula, count_formula_over, lexicographic_model};
pub use reduction::{qbf_to_ltl, QbfToLtl};
pub use succinct::{
    check_succinct_model, divide, embed_unique_model, expands_check, CheckMode, SuccinctLasso,
    UniqueModelEmbedding,
};
pub use tableau::{find_model, TableauLimits};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LtlError {
    #[error("position {pos} out of range: the lasso has {len} distinct positions")]
    PositionRange { pos: usize, len: usize },
    #[error("atom `{0}` is not a variable of the model")]
    UnknownAtom(String),
    #[error("lasso period must not be empty")]
    EmptyPeriod,
    #[error("state at {part} index {index} has width {actual}, expected {expected}")]
    StateWidth { part: &'static str, index: usize, expected: usize, actual: usize },
    #[error("{what} exceeds the cap: {actual} > {cap}")]
    CapExceeded { what: &'static str, cap: u64, actual: u64 },
    #[error("lasso parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("formula parse error at {position}: {message}")]
    FormulaParse { position: usize, message: String },
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error(transparent)]
    Seq(#[from] crate::seq::SeqError),
}

/// An LTL formula. `F` and `G` are primitive rather than sugar for `U`,
/// which keeps subformula closures small; their semantics coincide with
/// `true U a` and `!(true U !a)`, a fact the tests pin down.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Ltl {
    True,
    False,
    Atom(String),
    Not(Box<Ltl>),
    And(Vec<Ltl>),
    Or(Vec<Ltl>),
    Implies(Box<Ltl>, Box<Ltl>),
    Iff(Box<Ltl>, Box<Ltl>),
    Next(Box<Ltl>),
    Eventually(Box<Ltl>),
    Globally(Box<Ltl>),
    Until(Box<Ltl>, Box<Ltl>),
}

impl Ltl {
    pub fn atom(name: impl Into<String>) -> Self {
        Ltl::Atom(name.into())
    }

    pub fn not(f: Ltl) -> Self {
        Ltl::Not(Box::new(f))
    }

    pub fn and(mut fs: Vec<Ltl>) -> Self {
        match fs.len() {
            0 => Ltl::True,
            1 => fs.pop().unwrap(),
            _ => Ltl::And(fs),
        }
    }

    pub fn or(mut fs: Vec<Ltl>) -> Self {
        match fs.len() {
            0 => Ltl::False,
            1 => fs.pop().unwrap(),
            _ => Ltl::Or(fs),
        }
    }

    pub fn implies(a: Ltl, b: Ltl) -> Self {
        Ltl::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Ltl, b: Ltl) -> Self {
        Ltl::Iff(Box::new(a), Box::new(b))
    }

    pub fn next(f: Ltl) -> Self {
        Ltl::Next(Box::new(f))
    }

    pub fn eventually(f: Ltl) -> Self {
        Ltl::Eventually(Box::new(f))
    }

    pub fn globally(f: Ltl) -> Self {
        Ltl::Globally(Box::new(f))
    }

    pub fn until(a: Ltl, b: Ltl) -> Self {
        Ltl::Until(Box::new(a), Box::new(b))
    }

    pub fn literal(name: impl Into<String>, positive: bool) -> Self {
        let a = Ltl::atom(name);
        if positive {
            a
        } else {
            Ltl::not(a)
        }
    }

    pub fn parse(text: &str) -> Result<Ltl, LtlError> {
        parse::parse_ltl(text)
    }

    pub fn atoms(&self) -> BTreeSet<String> {
        let mut set = BTreeSet::new();
        self.collect_atoms(&mut set);
        set
    }

    fn collect_atoms(&self, set: &mut BTreeSet<String>) {
        match self {
            Ltl::True | Ltl::False => {}
            Ltl::Atom(a) => {
                set.insert(a.clone());
            }
            Ltl::Not(f) | Ltl::Next(f) | Ltl::Eventually(f) | Ltl::Globally(f) => {
                f.collect_atoms(set)
            }
            Ltl::And(fs) | Ltl::Or(fs) => {
                for f in fs {
                    f.collect_atoms(set);
                }
            }
            Ltl::Implies(a, b) | Ltl::Iff(a, b) | Ltl::Until(a, b) => {
                a.collect_atoms(set);
                b.collect_atoms(set);
            }
        }
    }

    /// Operator nesting depth; atoms and constants have depth 0.
    pub fn depth(&self) -> usize {
        match self {
            Ltl::True | Ltl::False | Ltl::Atom(_) => 0,
            Ltl::Not(f) | Ltl::Next(f) | Ltl::Eventually(f) | Ltl::Globally(f) => 1 + f.depth(),
            Ltl::And(fs) | Ltl::Or(fs) => 1 + fs.iter().map(Ltl::depth).max().unwrap_or(0),
            Ltl::Implies(a, b) | Ltl::Iff(a, b) | Ltl::Until(a, b) => {
                1 + a.depth().max(b.depth())
            }
        }
    }

    /// All subformulas, each once, children before parents.
    pub fn closure(&self) -> Vec<Ltl> {
        let mut seen = Vec::new();
        self.collect_closure(&mut seen);
        seen
    }

    fn collect_closure(&self, seen: &mut Vec<Ltl>) {
        match self {
            Ltl::True | Ltl::False | Ltl::Atom(_) => {}
            Ltl::Not(f) | Ltl::Next(f) | Ltl::Eventually(f) | Ltl::Globally(f) => {
                f.collect_closure(seen)
            }
            Ltl::And(fs) | Ltl::Or(fs) => {
                for f in fs {
                    f.collect_closure(seen);
                }
            }
            Ltl::Implies(a, b) | Ltl::Iff(a, b) | Ltl::Until(a, b) => {
                a.collect_closure(seen);
                b.collect_closure(seen);
            }
        }
        if !seen.contains(self) {
            seen.push(self.clone());
        }
    }

    /// Embed a propositional formula as an LTL formula.
    pub fn from_propositional(f: &Formula) -> Ltl {
        match f {
            Formula::True => Ltl::True,
            Formula::False => Ltl::False,
            Formula::Atom(a) => Ltl::Atom(a.clone()),
            Formula::Not(g) => Ltl::not(Ltl::from_propositional(g)),
            Formula::And(fs) => Ltl::And(fs.iter().map(Ltl::from_propositional).collect()),
            Formula::Or(fs) => Ltl::Or(fs.iter().map(Ltl::from_propositional).collect()),
            Formula::Implies(a, b) => {
                Ltl::implies(Ltl::from_propositional(a), Ltl::from_propositional(b))
            }
            Formula::Iff(a, b) => Ltl::iff(Ltl::from_propositional(a), Ltl::from_propositional(b)),
        }
    }
}

/// An ultimately periodic model: named variables, a finite initial part
/// and a nonempty period repeating forever. Position t denotes
/// `initial[t]` for `t < |initial|` and wraps through the period beyond.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LassoModel {
    pub vars: Vec<String>,
    pub initial: Vec<State>,
    pub period: Vec<State>,
}

impl LassoModel {
    pub fn new(
        vars: Vec<String>,
        initial: Vec<State>,
        period: Vec<State>,
    ) -> Result<Self, LtlError> {
        if period.is_empty() {
            return Err(LtlError::EmptyPeriod);
        }
        let width = vars.len();
        for (index, state) in initial.iter().enumerate() {
            if state.width() != width {
                return Err(LtlError::StateWidth {
                    part: "initial",
                    index,
                    expected: width,
                    actual: state.width(),
                });
            }
        }
        for (index, state) in period.iter().enumerate() {
            if state.width() != width {
                return Err(LtlError::StateWidth {
                    part: "period",
                    index,
                    expected: width,
                    actual: state.width(),
                });
            }
        }
        Ok(LassoModel { vars, initial, period })
    }

    /// Number of distinct positions: `|initial| + |period|`.
    pub fn len(&self) -> usize {
        self.initial.len() + self.period.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// The state at any (unbounded) position of the infinite word.
    pub fn state_at(&self, pos: usize) -> &State {
        if pos < self.initial.len() {
            &self.initial[pos]
        } else {
            &self.period[(pos - self.initial.len()) % self.period.len()]
        }
    }

    /// Fold an unbounded position into `0..len()`.
    pub fn fold(&self, pos: usize) -> usize {
        if pos < self.len() {
            pos
        } else {
            let offset = (pos - self.initial.len()) % self.period.len();
            self.initial.len() + offset
        }
    }

    /// Successor of a folded position.
    pub fn successor(&self, pos: usize) -> usize {
        if pos + 1 < self.len() {
            pos + 1
        } else {
            self.initial.len()
        }
    }

    fn var_index(&self, atom: &str) -> Result<usize, LtlError> {
        self.vars
            .iter()
            .position(|v| v == atom)
            .ok_or_else(|| LtlError::UnknownAtom(atom.to_string()))
    }
}

/// Exact evaluation of `f` on `m` at position `pos` (a folded position:
/// `pos < |initial| + |period|`).
///
/// Subformulas are labelled over all distinct positions, children first.
/// `Until` and `Eventually` are least fixpoints (iterate the one-step
/// expansion from all-false), `Globally` a greatest fixpoint; on a lasso
/// of L positions each stabilizes within L + 1 sweeps.
pub fn ltl_eval(f: &Ltl, m: &LassoModel, pos: usize) -> Result<bool, LtlError> {
    if pos >= m.len() {
        return Err(LtlError::PositionRange { pos, len: m.len() });
    }
    Ok(label_positions(f, m)?[pos])
}

/// The truth vector of `f` over all folded positions of `m`.
pub fn label_positions(f: &Ltl, m: &LassoModel) -> Result<Vec<bool>, LtlError> {
    let len = m.len();
    Ok(match f {
        Ltl::True => vec![true; len],
        Ltl::False => vec![false; len],
        Ltl::Atom(a) => {
            let index = m.var_index(a)?;
            (0..len).map(|p| m.state_at(p).bit(index)).collect()
        }
        Ltl::Not(g) => label_positions(g, m)?.into_iter().map(|b| !b).collect(),
        Ltl::And(fs) => {
            let mut acc = vec![true; len];
            for g in fs {
                for (a, b) in acc.iter_mut().zip(label_positions(g, m)?) {
                    *a &= b;
                }
            }
            acc
        }
        Ltl::Or(fs) => {
            let mut acc = vec![false; len];
            for g in fs {
                for (a, b) in acc.iter_mut().zip(label_positions(g, m)?) {
                    *a |= b;
                }
            }
            acc
        }
        Ltl::Implies(a, b) => {
            let la = label_positions(a, m)?;
            let lb = label_positions(b, m)?;
            la.into_iter().zip(lb).map(|(x, y)| !x || y).collect()
        }
        Ltl::Iff(a, b) => {
            let la = label_positions(a, m)?;
            let lb = label_positions(b, m)?;
            la.into_iter().zip(lb).map(|(x, y)| x == y).collect()
        }
        Ltl::Next(g) => {
            let lg = label_positions(g, m)?;
            (0..len).map(|p| lg[m.successor(p)]).collect()
        }
        Ltl::Until(a, b) => {
            let la = label_positions(a, m)?;
            let lb = label_positions(b, m)?;
            fixpoint(m, |labels, p| lb[p] || (la[p] && labels[m.successor(p)]), false)
        }
        Ltl::Eventually(g) => {
            let lg = label_positions(g, m)?;
            fixpoint(m, |labels, p| lg[p] || labels[m.successor(p)], false)
        }
        Ltl::Globally(g) => {
            let lg = label_positions(g, m)?;
            fixpoint(m, |labels, p| lg[p] && labels[m.successor(p)], true)
        }
    })
}

fn fixpoint(
    m: &LassoModel,
    step: impl Fn(&[bool], usize) -> bool,
    start: bool,
) -> Vec<bool> {
    let len = m.len();
    let mut labels = vec![start; len];
    for _ in 0..=len {
        let mut changed = false;
        // sweep backwards so information flows against the arrows
        for p in (0..len).rev() {
            let value = step(&labels, p);
            if value != labels[p] {
                labels[p] = value;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    labels
}

/// Canonicalize a lasso: the shortest period denoting the same infinite
/// word, then the shortest initial part consistent with that period.
pub fn canonicalize(m: &LassoModel) -> LassoModel {
    let init_len = m.initial.len();
    let period_len = m.period.len();
    // for p >= init_len the comparison w[p] = w[p + c] is periodic in p
    // with period |period|, so scanning one period past the initial part
    // sees every violation that matters
    let scan = init_len + period_len;
    let word = |p: usize| m.state_at(p);

    for candidate in 1..=period_len {
        let mut last_violation = None;
        for p in 0..scan {
            if word(p) != word(p + candidate) {
                last_violation = Some(p);
            }
        }
        let start = match last_violation {
            // a violation inside the periodic region rules the length out
            Some(p) if p >= init_len => continue,
            Some(p) => p + 1,
            None => 0,
        };
        let initial = (0..start).map(|p| word(p).clone()).collect();
        let period = (start..start + candidate).map(|p| word(p).clone()).collect();
        return LassoModel { vars: m.vars.clone(), initial, period };
    }
    // the given period length itself is always admissible
    unreachable!("a lasso is periodic with its own period length")
}

// ---------------------------------------------------------------------------
// Text formats: formulas use the propositional syntax extended with the
// prefix operators `X F G` and the left-associative infix `U` (binding
// tighter than `&`); lasso files are
//
//   lasso
//   vars <id>...
//   initpart
//   <bitstring per state>
//   period
//   <bitstring per state>
//   end
// ---------------------------------------------------------------------------

impl fmt::Display for Ltl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

impl Ltl {
    fn prec(&self) -> u8 {
        match self {
            Ltl::Iff(..) => 1,
            Ltl::Implies(..) => 2,
            Ltl::Or(..) => 3,
            Ltl::And(..) => 4,
            Ltl::Until(..) => 5,
            _ => 7,
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        let prec = self.prec();
        let parens = prec < min;
        if parens {
            write!(f, "(")?;
        }
        match self {
            Ltl::True => write!(f, "true")?,
            Ltl::False => write!(f, "false")?,
            Ltl::Atom(a) => write!(f, "{a}")?,
            Ltl::Not(g) => {
                write!(f, "!")?;
                g.fmt_prec(f, 7)?;
            }
            Ltl::Next(g) => {
                write!(f, "X ")?;
                g.fmt_prec(f, 7)?;
            }
            Ltl::Eventually(g) => {
                write!(f, "F ")?;
                g.fmt_prec(f, 7)?;
            }
            Ltl::Globally(g) => {
                write!(f, "G ")?;
                g.fmt_prec(f, 7)?;
            }
            Ltl::And(fs) => {
                for (i, g) in fs.iter().enumerate() {
                    if i > 0 {
                        write!(f, " & ")?;
                    }
                    g.fmt_prec(f, prec + 1)?;
                }
            }
            Ltl::Or(fs) => {
                for (i, g) in fs.iter().enumerate() {
                    if i > 0 {
                        write!(f, " | ")?;
                    }
                    g.fmt_prec(f, prec + 1)?;
                }
            }
            Ltl::Implies(a, b) => {
                a.fmt_prec(f, prec + 1)?;
                write!(f, " -> ")?;
                b.fmt_prec(f, prec)?;
            }
            Ltl::Iff(a, b) => {
                a.fmt_prec(f, prec + 1)?;
                write!(f, " <-> ")?;
                b.fmt_prec(f, prec)?;
            }
            Ltl::Until(a, b) => {
                // left-associative: the left child may print bare at the
                // same level, the right child needs one level more
                a.fmt_prec(f, prec)?;
                write!(f, " U ")?;
                b.fmt_prec(f, prec + 1)?;
            }
        }
        if parens {
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Display for LassoModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "lasso")?;
        write!(f, "vars")?;
        for v in &self.vars {
            write!(f, " {v}")?;
        }
        writeln!(f)?;
        writeln!(f, "initpart")?;
        for state in &self.initial {
            writeln!(f, "{state}")?;
        }
        writeln!(f, "period")?;
        for state in &self.period {
            writeln!(f, "{state}")?;
        }
        writeln!(f, "end")
    }
}

fn parse_err(cursor: &LineCursor<'_>, message: impl Into<String>) -> LtlError {
    LtlError::Parse { line: cursor.line_no, message: message.into() }
}

impl std::str::FromStr for LassoModel {
    type Err = LtlError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut cursor = LineCursor::new(s);
        let header = cursor.next_line().ok_or_else(|| parse_err(&cursor, "expected `lasso`"))?;
        if header != "lasso" {
            return Err(parse_err(&cursor, "expected a `lasso` header"));
        }
        let vars_line = cursor.next_line().ok_or_else(|| parse_err(&cursor, "expected `vars`"))?;
        let vars_words: Vec<&str> = vars_line.split_whitespace().collect();
        if vars_words.first() != Some(&"vars") {
            return Err(parse_err(&cursor, "expected a `vars` line"));
        }
        let vars: Vec<String> = vars_words[1..].iter().map(|w| w.to_string()).collect();

        let init_header =
            cursor.next_line().ok_or_else(|| parse_err(&cursor, "expected `initpart`"))?;
        if init_header != "initpart" {
            return Err(parse_err(&cursor, "expected `initpart`"));
        }
        let mut initial = Vec::new();
        let mut period = Vec::new();
        let mut in_period = false;
        loop {
            let line = cursor.next_line().ok_or_else(|| parse_err(&cursor, "expected `end`"))?;
            match line {
                "period" if !in_period => in_period = true,
                "end" => break,
                bits => {
                    let state = State::parse(bits)
                        .map_err(|e| parse_err(&cursor, format!("bad state: {e}")))?;
                    if in_period {
                        period.push(state);
                    } else {
                        initial.push(state);
                    }
                }
            }
        }
        if !cursor.at_end() {
            return Err(parse_err(&cursor, "trailing content after `end`"));
        }
        LassoModel::new(vars, initial, period)
    }
}

#[cfg(test)]
mod tests;
