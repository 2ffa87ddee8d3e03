//! Programmatic circuit construction.
//!
//! [`CircuitBuilder`] hands out fresh internal wires and offers the handful
//! of arithmetic and selection gadgets the generators need: constants,
//! bitwise logic, equality against constants, multiplexers, increment,
//! add/subtract-a-constant, division by a constant and whole-circuit
//! embedding. All multi-bit gadgets are big-endian.

use std::collections::{HashMap, HashSet};

use super::{Circuit, CircuitError, Gate, GateOp};
use crate::bits::{bits_from_u128_be, ceil_log2};
use crate::proplogic::Formula;

pub struct CircuitBuilder {
    name: String,
    inputs: Vec<String>,
    gates: Vec<Gate>,
    names: HashSet<String>,
    next_wire: u64,
    const_true: Option<String>,
    const_false: Option<String>,
}

/// Wires of an embedded sub-circuit.
pub struct Embedded {
    pub outputs: Vec<String>,
    pub internals: Vec<String>,
}

impl CircuitBuilder {
    pub fn new(name: impl Into<String>) -> Self {
        CircuitBuilder {
            name: name.into(),
            inputs: Vec::new(),
            gates: Vec::new(),
            names: HashSet::new(),
            next_wire: 0,
            const_true: None,
            const_false: None,
        }
    }

    pub fn add_input(&mut self, name: impl Into<String>) -> String {
        let name = name.into();
        assert!(self.names.insert(name.clone()), "duplicate wire name `{name}`");
        self.inputs.push(name.clone());
        name
    }

    /// Adds `count` inputs named `<prefix>1..<prefix><count>`.
    pub fn add_inputs(&mut self, prefix: &str, count: usize) -> Vec<String> {
        (0..count).map(|i| self.add_input(format!("{prefix}{}", i + 1))).collect()
    }

    fn fresh(&mut self) -> String {
        loop {
            let name = format!("w{}", self.next_wire);
            self.next_wire += 1;
            if self.names.insert(name.clone()) {
                return name;
            }
        }
    }

    pub fn push(&mut self, op: GateOp, operands: Vec<String>) -> String {
        let target = self.fresh();
        self.gates.push(Gate::new(target.clone(), op, operands));
        target
    }

    pub fn const_bit(&mut self, value: bool) -> String {
        let cached = if value { &self.const_true } else { &self.const_false };
        if let Some(w) = cached {
            return w.clone();
        }
        let w = self.push(if value { GateOp::True } else { GateOp::False }, vec![]);
        if value {
            self.const_true = Some(w.clone());
        } else {
            self.const_false = Some(w.clone());
        }
        w
    }

    pub fn const_bits(&mut self, value: u128, width: usize) -> Vec<String> {
        bits_from_u128_be(value, width)
            .expect("constant fits the declared width")
            .into_iter()
            .map(|b| self.const_bit(b))
            .collect()
    }

    pub fn not(&mut self, wire: String) -> String {
        self.push(GateOp::Not, vec![wire])
    }

    pub fn and(&mut self, mut wires: Vec<String>) -> String {
        match wires.len() {
            0 => self.const_bit(true),
            1 => wires.pop().unwrap(),
            _ => self.push(GateOp::And, wires),
        }
    }

    pub fn or(&mut self, mut wires: Vec<String>) -> String {
        match wires.len() {
            0 => self.const_bit(false),
            1 => wires.pop().unwrap(),
            _ => self.push(GateOp::Or, wires),
        }
    }

    pub fn xor(&mut self, a: String, b: String) -> String {
        let na = self.not(a.clone());
        let nb = self.not(b.clone());
        let only_a = self.and(vec![a, nb]);
        let only_b = self.and(vec![na, b]);
        self.or(vec![only_a, only_b])
    }

    pub fn eq(&mut self, a: String, b: String) -> String {
        let na = self.not(a.clone());
        let nb = self.not(b.clone());
        let both = self.and(vec![a, b]);
        let neither = self.and(vec![na, nb]);
        self.or(vec![both, neither])
    }

    /// True iff the big-endian `wires` equal `value`.
    pub fn eq_const(&mut self, wires: &[String], value: u128) -> String {
        let pattern = bits_from_u128_be(value, wires.len()).expect("value fits the wire width");
        let literals = wires
            .iter()
            .zip(pattern)
            .map(|(w, bit)| if bit { w.clone() } else { self.not(w.clone()) })
            .collect();
        self.and(literals)
    }

    pub fn eq_bits(&mut self, a: &[String], b: &[String]) -> String {
        assert_eq!(a.len(), b.len(), "eq_bits width mismatch");
        let bit_eqs = a
            .iter()
            .zip(b)
            .map(|(x, y)| self.eq(x.clone(), y.clone()))
            .collect();
        self.and(bit_eqs)
    }

    pub fn mux_bit(&mut self, sel: String, then_wire: String, else_wire: String) -> String {
        let nsel = self.not(sel.clone());
        let t = self.and(vec![sel, then_wire]);
        let e = self.and(vec![nsel, else_wire]);
        self.or(vec![t, e])
    }

    pub fn mux(&mut self, sel: String, then_wires: &[String], else_wires: &[String]) -> Vec<String> {
        assert_eq!(then_wires.len(), else_wires.len(), "mux width mismatch");
        then_wires
            .iter()
            .zip(else_wires)
            .map(|(t, e)| self.mux_bit(sel.clone(), t.clone(), e.clone()))
            .collect()
    }

    /// Big-endian increment, wrapping modulo `2^width`.
    pub fn increment(&mut self, wires: &[String]) -> Vec<String> {
        self.add_const(wires, 1)
    }

    /// Big-endian addition of a constant, wrapping modulo `2^width`.
    pub fn add_const(&mut self, wires: &[String], value: u128) -> Vec<String> {
        let width = wires.len();
        let modulus_mask = if width >= 128 { u128::MAX } else { (1u128 << width) - 1 };
        let constant = bits_from_u128_be(value & modulus_mask, width).unwrap();
        let mut carry = self.const_bit(false);
        let mut out = vec![String::new(); width];
        for i in (0..width).rev() {
            let w = wires[i].clone();
            if constant[i] {
                // sum = !(w ^ carry), carry' = w | carry
                let x = self.xor(w.clone(), carry.clone());
                out[i] = self.not(x);
                carry = self.or(vec![w, carry]);
            } else {
                out[i] = self.xor(w.clone(), carry.clone());
                carry = self.and(vec![w, carry]);
            }
        }
        out
    }

    pub fn sub_const(&mut self, wires: &[String], value: u128) -> Vec<String> {
        let width = wires.len();
        let modulus = 1u128 << width;
        self.add_const(wires, (modulus - (value % modulus)) % modulus)
    }

    /// True iff the big-endian `wires`, read as an unsigned integer, are
    /// greater than or equal to `value`.
    pub fn ge_const(&mut self, wires: &[String], value: u128) -> String {
        if value == 0 {
            return self.const_bit(true);
        }
        let width = wires.len();
        if width < 128 && value > (1u128 << width) - 1 {
            return self.const_bit(false);
        }
        let pattern = bits_from_u128_be(value, width).unwrap();
        // Scan from the most significant bit keeping "all prefix bits equal".
        let mut branches = Vec::new();
        let mut prefix_eq: Vec<String> = Vec::new();
        for (w, bit) in wires.iter().zip(&pattern) {
            if !bit {
                // wire 1 where the constant has 0: strictly greater
                let mut conj = prefix_eq.clone();
                conj.push(w.clone());
                branches.push(self.and(conj));
            }
            let lit = if *bit { w.clone() } else { self.not(w.clone()) };
            prefix_eq.push(lit);
        }
        branches.push(self.and(prefix_eq));
        self.or(branches)
    }

    /// Quotient and remainder of the big-endian `wires` by a constant
    /// divisor, via restoring division. The remainder has
    /// `max(1, ceil_log2(divisor))` wires.
    pub fn divmod_const(&mut self, wires: &[String], divisor: u128) -> (Vec<String>, Vec<String>) {
        assert!(divisor >= 1, "division by zero");
        let rem_width = ceil_log2(divisor).max(1);
        let mut remainder = self.const_bits(0, rem_width);
        let mut quotient = Vec::with_capacity(wires.len());
        for wire in wires {
            // shifted = remainder * 2 + bit, one wire wider
            let mut shifted = remainder.clone();
            shifted.push(wire.clone());
            let ge = self.ge_const(&shifted, divisor);
            let reduced = self.sub_const(&shifted, divisor);
            let next = self.mux(ge.clone(), &reduced, &shifted);
            remainder = next[1..].to_vec();
            quotient.push(ge);
        }
        (quotient, remainder)
    }

    /// Inline `circuit`, wiring its inputs to `input_wires`; gate targets
    /// are renamed to fresh wires.
    pub fn embed(&mut self, circuit: &Circuit, input_wires: &[String]) -> Embedded {
        assert_eq!(
            input_wires.len(),
            circuit.num_inputs(),
            "embed: wiring width does not match circuit arity"
        );
        let mut map: HashMap<&str, String> = circuit
            .inputs()
            .iter()
            .zip(input_wires)
            .map(|(v, w)| (v.as_str(), w.clone()))
            .collect();
        for gate in circuit.gates() {
            let operands = gate.operands.iter().map(|v| map[v.as_str()].clone()).collect();
            let target = self.push(gate.op, operands);
            map.insert(&gate.target, target);
        }
        Embedded {
            outputs: circuit.outputs().iter().map(|v| map[v.as_str()].clone()).collect(),
            internals: circuit.internal().iter().map(|v| map[v.as_str()].clone()).collect(),
        }
    }

    /// Compile a propositional formula to a wire; `bind` maps atom names to
    /// wires and must cover every atom.
    pub fn compile_formula(&mut self, formula: &Formula, bind: &HashMap<String, String>) -> String {
        match formula {
            Formula::True => self.const_bit(true),
            Formula::False => self.const_bit(false),
            Formula::Atom(a) => bind
                .get(a)
                .unwrap_or_else(|| panic!("compile_formula: unbound atom `{a}`"))
                .clone(),
            Formula::Not(g) => {
                let w = self.compile_formula(g, bind);
                self.not(w)
            }
            Formula::And(fs) => {
                let wires = fs.iter().map(|g| self.compile_formula(g, bind)).collect();
                self.and(wires)
            }
            Formula::Or(fs) => {
                let wires = fs.iter().map(|g| self.compile_formula(g, bind)).collect();
                self.or(wires)
            }
            Formula::Implies(a, b) => {
                let wa = self.compile_formula(a, bind);
                let na = self.not(wa);
                let wb = self.compile_formula(b, bind);
                self.or(vec![na, wb])
            }
            Formula::Iff(a, b) => {
                let wa = self.compile_formula(a, bind);
                let wb = self.compile_formula(b, bind);
                self.eq(wa, wb)
            }
        }
    }

    /// Close the builder, exposing `outputs` as `(name, wire)` pairs. Each
    /// output becomes a zero-cost `ID` gate on its wire.
    pub fn finish(self, outputs: Vec<(String, String)>) -> Result<Circuit, CircuitError> {
        let mut gates = self.gates;
        for (name, wire) in &outputs {
            gates.push(Gate::new(name.clone(), GateOp::Id, vec![wire.clone()]));
        }
        Circuit::new(
            self.name,
            self.inputs,
            outputs.into_iter().map(|(name, _)| name).collect(),
            gates,
        )
    }

    /// Like [`CircuitBuilder::finish`] with outputs named `<prefix>1..`.
    pub fn finish_indexed(self, prefix: &str, wires: &[String]) -> Result<Circuit, CircuitError> {
        let outputs = wires
            .iter()
            .enumerate()
            .map(|(i, w)| (format!("{prefix}{}", i + 1), w.clone()))
            .collect();
        self.finish(outputs)
    }
}

/// Compile a formula into a fresh single-output circuit whose inputs are
/// exactly `input_vars`, in order. Atoms of the formula must be among the
/// input variables.
pub fn formula_to_circuit(
    name: &str,
    formula: &Formula,
    input_vars: &[String],
) -> Result<Circuit, CircuitError> {
    let mut b = CircuitBuilder::new(name);
    let mut bind = HashMap::new();
    for v in input_vars {
        let wire = b.add_input(format!("in_{v}"));
        bind.insert(v.clone(), wire);
    }
    let out = b.compile_formula(formula, &bind);
    b.finish(vec![("out1".to_string(), out)])
}

/// The identity function on `width` bits as a circuit.
pub fn identity_circuit(width: usize) -> Circuit {
    let mut b = CircuitBuilder::new("identity");
    let inputs = b.add_inputs("x", width);
    b.finish_indexed("o", &inputs).expect("identity circuit is well formed")
}

/// Increment modulo `2^width`, big-endian, as a circuit.
pub fn increment_circuit(width: usize) -> Circuit {
    let mut b = CircuitBuilder::new("increment");
    let inputs = b.add_inputs("x", width);
    let out = b.increment(&inputs);
    b.finish_indexed("o", &out).expect("increment circuit is well formed")
}

/// A circuit mapping every `width`-bit input to the given constant.
pub fn constant_circuit(width_in: usize, value: &[bool]) -> Circuit {
    let mut b = CircuitBuilder::new("constant");
    b.add_inputs("x", width_in);
    let wires: Vec<String> = value.iter().map(|&bit| b.const_bit(bit)).collect();
    b.finish_indexed("o", &wires).expect("constant circuit is well formed")
}
