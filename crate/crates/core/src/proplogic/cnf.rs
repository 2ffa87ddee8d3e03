//! The fixed bit-encoding of small 3CNF formulas.
//!
//! Every reduction generator in this crate walks through "all formulas on
//! r variables with c clauses" by walking through all m-bit strings, so
//! the encoding has to be total: every bit string must decode to some
//! 3CNF. The layout is, per clause, three literals; each literal is
//! `ceil(log2 r)` variable-index bits (big-endian, wrapping modulo r)
//! followed by one sign bit, `1` meaning positive. Formula number k is the
//! m-bit string whose big-endian unsigned value is k.

use thiserror::Error;

use crate::bits::{bits_from_u128_be, ceil_log2, u128_from_bits_be};
use crate::circuit::{Circuit, CircuitBuilder, CircuitError};
use crate::proplogic::{Assignment, Formula};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CnfError {
    #[error("bit string has {actual} bits, expected {expected}")]
    BitWidth { expected: usize, actual: usize },
    #[error("formula shape ({vars} vars, {clauses} clauses) does not match the encoding ({enc_vars}, {enc_clauses})")]
    Shape { vars: usize, clauses: usize, enc_vars: usize, enc_clauses: usize },
    #[error("literal references variable {var} but the formula has {vars}")]
    VarRange { var: usize, vars: usize },
    #[error("formula index {index} does not fit in {bits} bits")]
    IndexRange { index: u128, bits: usize },
}

/// A literal over variables `x1..xr`, stored 0-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Literal {
    pub var: usize,
    pub positive: bool,
}

impl Literal {
    pub fn atom_name(&self) -> String {
        format!("x{}", self.var + 1)
    }
}

pub type Clause = [Literal; 3];

/// A 3CNF formula: a conjunction of three-literal clauses over `num_vars`
/// variables named `x1..x<num_vars>`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cnf3 {
    pub num_vars: usize,
    pub clauses: Vec<Clause>,
}

impl Cnf3 {
    pub fn to_formula(&self) -> Formula {
        Formula::and(
            self.clauses
                .iter()
                .map(|clause| {
                    Formula::or(
                        clause
                            .iter()
                            .map(|lit| Formula::literal(lit.atom_name(), lit.positive))
                            .collect(),
                    )
                })
                .collect(),
        )
    }

    /// Truth value under a model given as bits for `x1..xr` in order.
    pub fn eval(&self, model: &[bool]) -> Result<bool, CnfError> {
        for clause in &self.clauses {
            let mut sat = false;
            for lit in clause {
                if lit.var >= model.len() {
                    return Err(CnfError::VarRange { var: lit.var + 1, vars: model.len() });
                }
                sat |= model[lit.var] == lit.positive;
            }
            if !sat {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Shape of the encoding: `r` variables, `c` clauses,
/// `m = 3 * c * (ceil(log2 r) + 1)` total bits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Cnf3Encoding {
    num_vars: usize,
    num_clauses: usize,
}

impl Cnf3Encoding {
    pub fn new(num_vars: usize, num_clauses: usize) -> Self {
        assert!(num_vars >= 1, "encoding needs at least one variable");
        assert!(num_clauses >= 1, "encoding needs at least one clause");
        Cnf3Encoding { num_vars, num_clauses }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn num_clauses(&self) -> usize {
        self.num_clauses
    }

    /// Bits per literal: index bits plus the sign bit.
    pub fn literal_bits(&self) -> usize {
        ceil_log2(self.num_vars as u128) + 1
    }

    /// Total bits `m`.
    pub fn total_bits(&self) -> usize {
        3 * self.num_clauses * self.literal_bits()
    }

    /// Number of distinct bit strings, i.e. of encoded formulas.
    pub fn num_formulas(&self) -> u128 {
        1u128 << self.total_bits()
    }

    pub fn encode(&self, cnf: &Cnf3) -> Result<Vec<bool>, CnfError> {
        if cnf.num_vars != self.num_vars || cnf.clauses.len() != self.num_clauses {
            return Err(CnfError::Shape {
                vars: cnf.num_vars,
                clauses: cnf.clauses.len(),
                enc_vars: self.num_vars,
                enc_clauses: self.num_clauses,
            });
        }
        let index_bits = self.literal_bits() - 1;
        let mut bits = Vec::with_capacity(self.total_bits());
        for clause in &cnf.clauses {
            for lit in clause {
                if lit.var >= self.num_vars {
                    return Err(CnfError::VarRange { var: lit.var + 1, vars: self.num_vars });
                }
                bits.extend(
                    bits_from_u128_be(lit.var as u128, index_bits)
                        .map_err(|_| CnfError::VarRange { var: lit.var + 1, vars: self.num_vars })?,
                );
                bits.push(lit.positive);
            }
        }
        Ok(bits)
    }

    /// Total decoding: out-of-range variable indices wrap modulo `r`.
    pub fn decode(&self, bits: &[bool]) -> Result<Cnf3, CnfError> {
        if bits.len() != self.total_bits() {
            return Err(CnfError::BitWidth { expected: self.total_bits(), actual: bits.len() });
        }
        let lit_bits = self.literal_bits();
        let index_bits = lit_bits - 1;
        let mut clauses = Vec::with_capacity(self.num_clauses);
        for clause_index in 0..self.num_clauses {
            let mut literals = [Literal { var: 0, positive: false }; 3];
            for (slot, literal) in literals.iter_mut().enumerate() {
                let at = (clause_index * 3 + slot) * lit_bits;
                let raw = u128_from_bits_be(&bits[at..at + index_bits]) as usize;
                *literal = Literal {
                    var: raw % self.num_vars,
                    positive: bits[at + index_bits],
                };
            }
            clauses.push(literals);
        }
        Ok(Cnf3 { num_vars: self.num_vars, clauses })
    }

    /// The m-bit string of formula number `index`, read big-endian.
    pub fn formula_bits(&self, index: u128) -> Result<Vec<bool>, CnfError> {
        bits_from_u128_be(index, self.total_bits())
            .map_err(|_| CnfError::IndexRange { index, bits: self.total_bits() })
    }

    pub fn formula_at(&self, index: u128) -> Result<Cnf3, CnfError> {
        self.decode(&self.formula_bits(index)?)
    }
}

/// Assignment for `x1..xr` from model bits.
pub fn model_assignment(model: &[bool]) -> Assignment {
    model
        .iter()
        .enumerate()
        .map(|(i, &b)| (format!("x{}", i + 1), b))
        .collect()
}

/// A circuit with `m + r` inputs (formula bits, then model bits) and one
/// output: the truth of the decoded formula under the model. Agrees with
/// decode-then-evaluate on every input.
pub fn cnf_eval_circuit(enc: &Cnf3Encoding) -> Circuit {
    let mut b = CircuitBuilder::new("cnfeval");
    let formula_in: Vec<String> = (0..enc.total_bits()).map(|i| format!("f{}", i + 1)).collect();
    let model_in: Vec<String> = (0..enc.num_vars()).map(|i| format!("m{}", i + 1)).collect();
    for w in formula_in.iter().chain(&model_in) {
        b.add_input(w.clone());
    }

    let lit_bits = enc.literal_bits();
    let index_bits = lit_bits - 1;
    let mut clause_wires = Vec::new();
    for clause_index in 0..enc.num_clauses() {
        let mut literal_wires = Vec::new();
        for slot in 0..3 {
            let at = (clause_index * 3 + slot) * lit_bits;
            let index_wires = &formula_in[at..at + index_bits];
            let sign = formula_in[at + index_bits].clone();
            // selected = model value of the decoded (wrapped) variable index
            let mut selectors = Vec::new();
            for pattern in 0u128..1 << index_bits {
                let var = pattern as usize % enc.num_vars();
                let hit = b.eq_const(index_wires, pattern);
                selectors.push(b.and(vec![hit, model_in[var].clone()]));
            }
            let selected = b.or(selectors);
            // literal true iff sign matches the selected value
            let both = b.and(vec![sign.clone(), selected.clone()]);
            let neither = {
                let ns = b.not(sign);
                let nv = b.not(selected);
                b.and(vec![ns, nv])
            };
            literal_wires.push(b.or(vec![both, neither]));
        }
        clause_wires.push(b.or(literal_wires));
    }
    let out = b.and(clause_wires);
    b.finish(vec![("sat".to_string(), out)])
        .expect("cnf evaluation circuit is well formed")
}

/// Check the circuit/decoder agreement exhaustively; used by tests and the
/// oracle suite.
pub fn cnf_circuit_agrees(enc: &Cnf3Encoding) -> Result<bool, CircuitError> {
    let circuit = cnf_eval_circuit(enc);
    let m = enc.total_bits();
    let r = enc.num_vars();
    for word in 0u128..1 << (m + r) {
        let bits = bits_from_u128_be(word, m + r).unwrap();
        let cnf = enc.decode(&bits[..m]).unwrap();
        let expected = cnf.eval(&bits[m..]).unwrap();
        let got = circuit.evaluate(&bits)?[0];
        if got != expected {
            return Ok(false);
        }
    }
    Ok(true)
}
