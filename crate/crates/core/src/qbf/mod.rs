//! Quantified boolean formulas and their succinct directional models.
//!
//! A directional model assigns one circuit to each existential block; the
//! circuit reads all universal variables quantified up to that block (in
//! prefix order) and produces the block's variables. Checking a model
//! walks the quantifier prefix recursively, enumerating universal blocks
//! and driving existential blocks through their circuits, so it needs
//! memory for a single path only, never for the full and-or tree.

pub mod construct;
pub mod search;
pub mod tree;

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::circuit::{parse_circuit_block, Circuit, CircuitError, LineCursor};
use crate::proplogic::{eval_formula, Assignment, Formula, FormulaError};

pub use construct::{embed_exists, embed_forall, hard_family};
pub use search::{bounded_model_exists, ModelSearchLimits};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum QbfError {
    #[error("variable `{0}` is quantified more than once")]
    DuplicateVariable(String),
    #[error("matrix atom `{0}` is not quantified")]
    FreeAtom(String),
    #[error("quantifier block is empty")]
    EmptyBlock,
    #[error("model has {actual} circuits, prefix has {expected} existential blocks")]
    ModelLength { expected: usize, actual: usize },
    #[error("circuit {index} has arity {actual_in}->{actual_out}, block expects {expected_in}->{expected_out}")]
    ModelShape {
        index: usize,
        expected_in: usize,
        expected_out: usize,
        actual_in: usize,
        actual_out: usize,
    },
    #[error("{kind} exceeds the cap: {actual} > {cap}")]
    CapExceeded { kind: &'static str, cap: u64, actual: u64 },
    #[error("hard family parameter must be at least 1")]
    BadParameter,
    #[error("property circuit must have exactly one output, has {0}")]
    PropertyOutputs(usize),
    #[error("property circuit inputs {actual:?} do not match prefix variables {expected:?}")]
    PropertyInputs { expected: Vec<String>, actual: Vec<String> },
    #[error("circuit variable `{0}` clashes with a prefix variable")]
    VariableClash(String),
    #[error("qbf parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error(transparent)]
    Formula(#[from] FormulaError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Quantifier {
    Forall,
    Exists,
}

impl Quantifier {
    pub fn keyword(self) -> &'static str {
        match self {
            Quantifier::Forall => "forall",
            Quantifier::Exists => "exists",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuantBlock {
    pub quantifier: Quantifier,
    pub vars: Vec<String>,
}

impl QuantBlock {
    pub fn forall(vars: Vec<String>) -> Self {
        QuantBlock { quantifier: Quantifier::Forall, vars }
    }

    pub fn exists(vars: Vec<String>) -> Self {
        QuantBlock { quantifier: Quantifier::Exists, vars }
    }
}

/// A closed QBF: a quantifier prefix over pairwise distinct variables and
/// a matrix whose atoms all appear in the prefix. The first block may be
/// either quantifier.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Qbf {
    prefix: Vec<QuantBlock>,
    matrix: Formula,
}

impl Qbf {
    pub fn new(prefix: Vec<QuantBlock>, matrix: Formula) -> Result<Self, QbfError> {
        let mut seen = BTreeSet::new();
        for block in &prefix {
            if block.vars.is_empty() {
                return Err(QbfError::EmptyBlock);
            }
            for v in &block.vars {
                if !seen.insert(v.clone()) {
                    return Err(QbfError::DuplicateVariable(v.clone()));
                }
            }
        }
        for atom in matrix.atoms() {
            if !seen.contains(&atom) {
                return Err(QbfError::FreeAtom(atom));
            }
        }
        Ok(Qbf { prefix, matrix })
    }

    pub fn prefix(&self) -> &[QuantBlock] {
        &self.prefix
    }

    pub fn matrix(&self) -> &Formula {
        &self.matrix
    }

    pub fn num_vars(&self) -> usize {
        self.prefix.iter().map(|b| b.vars.len()).sum()
    }

    pub fn existential_blocks(&self) -> impl Iterator<Item = &QuantBlock> {
        self.prefix.iter().filter(|b| b.quantifier == Quantifier::Exists)
    }

    /// Input/output arities a directional model circuit must have for each
    /// existential block: all universal variables of blocks up to and
    /// including the block's position, then the block width.
    pub fn model_shape(&self) -> Vec<(usize, usize)> {
        let mut universals = 0;
        let mut shape = Vec::new();
        for block in &self.prefix {
            match block.quantifier {
                Quantifier::Forall => universals += block.vars.len(),
                Quantifier::Exists => shape.push((universals, block.vars.len())),
            }
        }
        shape
    }
}

/// One circuit per existential block, in prefix order. Circuit inputs are
/// bound positionally to the universal variables seen so far (in prefix
/// order), outputs to the block's variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectionalModel {
    pub circuits: Vec<Circuit>,
}

impl DirectionalModel {
    pub fn new(circuits: Vec<Circuit>) -> Self {
        DirectionalModel { circuits }
    }

    /// Sum of member circuit sizes.
    pub fn size(&self) -> u64 {
        self.circuits.iter().map(|c| c.size()).sum()
    }

    pub fn shape_check(&self, q: &Qbf) -> Result<(), QbfError> {
        let shape = q.model_shape();
        if shape.len() != self.circuits.len() {
            return Err(QbfError::ModelLength {
                expected: shape.len(),
                actual: self.circuits.len(),
            });
        }
        for (index, ((ins, outs), circuit)) in shape.iter().zip(&self.circuits).enumerate() {
            if circuit.num_inputs() != *ins || circuit.num_outputs() != *outs {
                return Err(QbfError::ModelShape {
                    index,
                    expected_in: *ins,
                    expected_out: *outs,
                    actual_in: circuit.num_inputs(),
                    actual_out: circuit.num_outputs(),
                });
            }
        }
        Ok(())
    }
}

/// Recursive model check: true iff every universal branch, with the
/// existential blocks driven by the model circuits, satisfies the matrix.
pub fn check_model(q: &Qbf, model: &DirectionalModel) -> Result<bool, QbfError> {
    model.shape_check(q)?;
    let mut assignment = Assignment::new();
    let mut universal_values = Vec::new();
    check_rec(q, model, 0, 0, &mut assignment, &mut universal_values)
}

fn check_rec(
    q: &Qbf,
    model: &DirectionalModel,
    block_index: usize,
    circuit_index: usize,
    assignment: &mut Assignment,
    universal_values: &mut Vec<bool>,
) -> Result<bool, QbfError> {
    let Some(block) = q.prefix().get(block_index) else {
        return Ok(eval_formula(q.matrix(), assignment)?);
    };
    match block.quantifier {
        Quantifier::Forall => {
            let width = block.vars.len();
            for combo in 0..1u64 << width {
                for (i, v) in block.vars.iter().enumerate() {
                    let value = combo >> (width - 1 - i) & 1 == 1;
                    assignment.insert(v.clone(), value);
                    universal_values.push(value);
                }
                let ok = check_rec(
                    q,
                    model,
                    block_index + 1,
                    circuit_index,
                    assignment,
                    universal_values,
                )?;
                for v in &block.vars {
                    assignment.remove(v);
                    universal_values.pop();
                }
                if !ok {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        Quantifier::Exists => {
            let outputs = model.circuits[circuit_index].evaluate(universal_values)?;
            for (v, value) in block.vars.iter().zip(&outputs) {
                assignment.insert(v.clone(), *value);
            }
            let ok = check_rec(
                q,
                model,
                block_index + 1,
                circuit_index + 1,
                assignment,
                universal_values,
            )?;
            for v in &block.vars {
                assignment.remove(v);
            }
            Ok(ok)
        }
    }
}

// ---------------------------------------------------------------------------
// Text formats.
//
// QBF:    qbf / one line per block (`forall x1 x2` or `exists y1`) /
//         `matrix <formula>` / end
// Model:  concatenated circuit blocks, one per existential block, in
//         prefix order.
// ---------------------------------------------------------------------------

impl fmt::Display for Qbf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "qbf")?;
        for block in &self.prefix {
            write!(f, "{}", block.quantifier.keyword())?;
            for v in &block.vars {
                write!(f, " {v}")?;
            }
            writeln!(f)?;
        }
        writeln!(f, "matrix {}", self.matrix)?;
        writeln!(f, "end")
    }
}

fn parse_err(cursor: &LineCursor<'_>, message: impl Into<String>) -> QbfError {
    QbfError::Parse { line: cursor.line_no, message: message.into() }
}

impl std::str::FromStr for Qbf {
    type Err = QbfError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut cursor = LineCursor::new(s);
        let header = cursor.next_line().ok_or_else(|| parse_err(&cursor, "expected `qbf`"))?;
        if header != "qbf" {
            return Err(parse_err(&cursor, "expected a `qbf` header"));
        }
        let mut prefix = Vec::new();
        let matrix;
        loop {
            let line =
                cursor.next_line().ok_or_else(|| parse_err(&cursor, "expected `matrix`"))?;
            let words: Vec<&str> = line.split_whitespace().collect();
            match words.first() {
                Some(&"forall") | Some(&"exists") => {
                    let quantifier = if words[0] == "forall" {
                        Quantifier::Forall
                    } else {
                        Quantifier::Exists
                    };
                    if words.len() == 1 {
                        return Err(parse_err(&cursor, "quantifier block needs variables"));
                    }
                    prefix.push(QuantBlock {
                        quantifier,
                        vars: words[1..].iter().map(|w| w.to_string()).collect(),
                    });
                }
                Some(&"matrix") => {
                    let text = line["matrix".len()..].trim();
                    matrix = Formula::parse(text)
                        .map_err(|e| parse_err(&cursor, format!("bad matrix: {e}")))?;
                    break;
                }
                _ => return Err(parse_err(&cursor, "expected `forall`, `exists` or `matrix`")),
            }
        }
        let end = cursor.next_line().ok_or_else(|| parse_err(&cursor, "expected `end`"))?;
        if end != "end" {
            return Err(parse_err(&cursor, "expected `end`"));
        }
        if !cursor.at_end() {
            return Err(parse_err(&cursor, "trailing content after `end`"));
        }
        Qbf::new(prefix, matrix)
    }
}

impl fmt::Display for DirectionalModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for circuit in &self.circuits {
            write!(f, "{circuit}")?;
        }
        Ok(())
    }
}

impl std::str::FromStr for DirectionalModel {
    type Err = QbfError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut cursor = LineCursor::new(s);
        let mut circuits = Vec::new();
        while !cursor.at_end() {
            circuits.push(parse_circuit_block(&mut cursor)?);
        }
        Ok(DirectionalModel::new(circuits))
    }
}
