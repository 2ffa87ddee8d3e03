//! Succinct labelled binary trees: directional (path-addressed) and
//! positional (heap-index-addressed) circuit representations, explicit
//! expansion, and the polynomial conversions between the two.
//!
//! Trees have `depth` levels; nodes live at heap positions `1..2^depth`
//! (root 1, children `2i` and `2i+1`). Some positions may be empty, so a
//! node's value is a present flag plus a fixed-width label.
//!
//! * Positional circuit: `depth` position bits (big-endian) in, `1 +
//!   label_width` bits out (present flag first).
//! * Directional circuit: `depth - 1` path-step bits (0 = left) followed
//!   by `max(1, ceil_log2(depth))` level bits in; the node addressed is
//!   the one reached from the root by the first `level` steps; outputs as
//!   above. Step bits beyond `level` are ignored by construction and
//!   queried as zero.

use thiserror::Error;

use crate::bits::{bits_from_u128_be, index_width, State};
use crate::circuit::{Circuit, CircuitBuilder, CircuitError};

pub const DEPTH_CAP: usize = 16;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TreeError {
    #[error("tree depth {0} exceeds the cap of {DEPTH_CAP}")]
    DepthCap(usize),
    #[error("tree depth must be at least 1")]
    ZeroDepth,
    #[error("circuit arity {actual_in}->{actual_out} does not match the representation ({expected_in}->{expected_out})")]
    Arity { expected_in: usize, expected_out: usize, actual_in: usize, actual_out: usize },
    #[error("explicit tree has {actual} slots, depth {depth} needs {expected}")]
    SlotCount { depth: usize, expected: usize, actual: usize },
    #[error("label at position {position} has width {actual}, expected {expected}")]
    LabelWidth { position: usize, expected: usize, actual: usize },
    #[error(transparent)]
    Circuit(#[from] CircuitError),
}

/// A fully expanded tree: `labels[p - 1]` is the node at heap position `p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExplicitTree {
    pub depth: usize,
    pub label_width: usize,
    pub labels: Vec<Option<State>>,
}

impl ExplicitTree {
    pub fn new(
        depth: usize,
        label_width: usize,
        labels: Vec<Option<State>>,
    ) -> Result<Self, TreeError> {
        check_depth(depth)?;
        let expected = (1usize << depth) - 1;
        if labels.len() != expected {
            return Err(TreeError::SlotCount { depth, expected, actual: labels.len() });
        }
        for (i, label) in labels.iter().enumerate() {
            if let Some(state) = label {
                if state.width() != label_width {
                    return Err(TreeError::LabelWidth {
                        position: i + 1,
                        expected: label_width,
                        actual: state.width(),
                    });
                }
            }
        }
        Ok(ExplicitTree { depth, label_width, labels })
    }

    pub fn node(&self, position: usize) -> &Option<State> {
        &self.labels[position - 1]
    }
}

fn check_depth(depth: usize) -> Result<(), TreeError> {
    if depth == 0 {
        return Err(TreeError::ZeroDepth);
    }
    if depth > DEPTH_CAP {
        return Err(TreeError::DepthCap(depth));
    }
    Ok(())
}

fn level_bits(depth: usize) -> usize {
    index_width(depth as u128)
}

/// Heap position `p` decomposed as (level, path steps root-to-node).
fn position_to_path(p: usize) -> (usize, Vec<bool>) {
    let level = usize::BITS as usize - 1 - p.leading_zeros() as usize;
    let steps = (0..level).map(|i| p >> (level - 1 - i) & 1 == 1).collect();
    (level, steps)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PositionalTreeRepr {
    pub depth: usize,
    pub label_width: usize,
    pub circuit: Circuit,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectionalTreeRepr {
    pub depth: usize,
    pub label_width: usize,
    pub circuit: Circuit,
}

impl PositionalTreeRepr {
    pub fn new(depth: usize, label_width: usize, circuit: Circuit) -> Result<Self, TreeError> {
        check_depth(depth)?;
        if circuit.num_inputs() != depth || circuit.num_outputs() != 1 + label_width {
            return Err(TreeError::Arity {
                expected_in: depth,
                expected_out: 1 + label_width,
                actual_in: circuit.num_inputs(),
                actual_out: circuit.num_outputs(),
            });
        }
        Ok(PositionalTreeRepr { depth, label_width, circuit })
    }

    pub fn expand(&self) -> Result<ExplicitTree, TreeError> {
        let mut labels = Vec::new();
        for p in 1..1usize << self.depth {
            let input = bits_from_u128_be(p as u128, self.depth).unwrap();
            let out = self.circuit.evaluate(&input)?;
            labels.push(out[0].then(|| State::new(out[1..].to_vec())));
        }
        ExplicitTree::new(self.depth, self.label_width, labels)
    }

    /// Mux-table circuit for an explicit tree; handy as a round-trip anchor.
    pub fn from_explicit(tree: &ExplicitTree) -> Result<Self, TreeError> {
        let mut b = CircuitBuilder::new("postree");
        let pos = b.add_inputs("p", tree.depth);
        let mut present_terms = Vec::new();
        let mut label_terms: Vec<Vec<String>> = vec![Vec::new(); tree.label_width];
        for p in 1..1usize << tree.depth {
            if let Some(label) = tree.node(p) {
                let hit = b.eq_const(&pos, p as u128);
                present_terms.push(hit.clone());
                for (j, &bit) in label.bits().iter().enumerate() {
                    if bit {
                        label_terms[j].push(hit.clone());
                    }
                }
            }
        }
        let mut outputs = vec![b.or(present_terms)];
        for terms in label_terms {
            outputs.push(b.or(terms));
        }
        let circuit = b.finish_indexed("n", &outputs)?;
        PositionalTreeRepr::new(tree.depth, tree.label_width, circuit)
    }
}

impl DirectionalTreeRepr {
    pub fn new(depth: usize, label_width: usize, circuit: Circuit) -> Result<Self, TreeError> {
        check_depth(depth)?;
        let expected_in = depth - 1 + level_bits(depth);
        if circuit.num_inputs() != expected_in || circuit.num_outputs() != 1 + label_width {
            return Err(TreeError::Arity {
                expected_in,
                expected_out: 1 + label_width,
                actual_in: circuit.num_inputs(),
                actual_out: circuit.num_outputs(),
            });
        }
        Ok(DirectionalTreeRepr { depth, label_width, circuit })
    }

    pub fn expand(&self) -> Result<ExplicitTree, TreeError> {
        let lbits = level_bits(self.depth);
        let mut labels = Vec::new();
        for p in 1..1usize << self.depth {
            let (level, steps) = position_to_path(p);
            let mut input = vec![false; self.depth - 1];
            input[..steps.len()].copy_from_slice(&steps);
            input.extend(bits_from_u128_be(level as u128, lbits).unwrap());
            let out = self.circuit.evaluate(&input)?;
            labels.push(out[0].then(|| State::new(out[1..].to_vec())));
        }
        ExplicitTree::new(self.depth, self.label_width, labels)
    }

    pub fn from_explicit(tree: &ExplicitTree) -> Result<Self, TreeError> {
        let lbits = level_bits(tree.depth);
        let mut b = CircuitBuilder::new("dirtree");
        let steps = b.add_inputs("s", tree.depth - 1);
        let level = b.add_inputs("l", lbits);
        let mut present_terms = Vec::new();
        let mut label_terms: Vec<Vec<String>> = vec![Vec::new(); tree.label_width];
        for p in 1..1usize << tree.depth {
            if let Some(label) = tree.node(p) {
                let (node_level, node_steps) = position_to_path(p);
                let mut hit = vec![b.eq_const(&level, node_level as u128)];
                for (i, &step) in node_steps.iter().enumerate() {
                    let wire = steps[i].clone();
                    hit.push(if step { wire } else { b.not(wire) });
                }
                let hit = b.and(hit);
                present_terms.push(hit.clone());
                for (j, &bit) in label.bits().iter().enumerate() {
                    if bit {
                        label_terms[j].push(hit.clone());
                    }
                }
            }
        }
        let mut outputs = vec![b.or(present_terms)];
        for terms in label_terms {
            outputs.push(b.or(terms));
        }
        let circuit = b.finish_indexed("n", &outputs)?;
        DirectionalTreeRepr::new(tree.depth, tree.label_width, circuit)
    }
}

/// Translate a directional representation into a positional one denoting
/// the same explicit tree. One copy of the directional circuit is embedded
/// per level, each with its level hard-wired, and the copies are selected
/// by the position's bit length; the output stays polynomial in the input.
pub fn directional_to_positional(
    t: &DirectionalTreeRepr,
) -> Result<PositionalTreeRepr, TreeError> {
    let d = t.depth;
    let lbits = level_bits(d);
    let mut b = CircuitBuilder::new("dir2pos");
    let pos = b.add_inputs("p", d);

    let mut selected_present = Vec::new();
    let mut selected_label: Vec<Vec<String>> = vec![Vec::new(); t.label_width];
    for level in 0..d {
        // position has bit length level+1: wire for weight 2^level set,
        // all higher-weight wires clear
        let mut indicator = vec![pos[d - 1 - level].clone()];
        for higher in level + 1..d {
            indicator.push(b.not(pos[d - 1 - higher].clone()));
        }
        let indicator = b.and(indicator);

        let mut wiring = Vec::with_capacity(d - 1 + lbits);
        for i in 0..d - 1 {
            if i < level {
                // step i+1 is the position bit of weight 2^(level-1-i)
                wiring.push(pos[d - 1 - (level - 1 - i)].clone());
            } else {
                wiring.push(b.const_bit(false));
            }
        }
        wiring.extend(b.const_bits(level as u128, lbits));
        let embedded = b.embed(&t.circuit, &wiring);

        selected_present.push(b.and(vec![indicator.clone(), embedded.outputs[0].clone()]));
        for (j, wire) in embedded.outputs[1..].iter().enumerate() {
            let hit = b.and(vec![indicator.clone(), wire.clone()]);
            selected_label[j].push(hit);
        }
    }
    let mut outputs = vec![b.or(selected_present)];
    for terms in selected_label {
        outputs.push(b.or(terms));
    }
    let circuit = b.finish_indexed("n", &outputs)?;
    PositionalTreeRepr::new(d, t.label_width, circuit)
}

/// Translate a positional representation into a directional one denoting
/// the same explicit tree, by computing the heap position of the addressed
/// node for each possible level.
pub fn positional_to_directional(
    t: &PositionalTreeRepr,
) -> Result<DirectionalTreeRepr, TreeError> {
    let d = t.depth;
    let lbits = level_bits(d);
    let mut b = CircuitBuilder::new("pos2dir");
    let steps = b.add_inputs("s", d - 1);
    let level = b.add_inputs("l", lbits);

    let mut selected_present = Vec::new();
    let mut selected_label: Vec<Vec<String>> = vec![Vec::new(); t.label_width];
    for node_level in 0..d {
        let indicator = b.eq_const(&level, node_level as u128);
        // p = 2^node_level followed by the first node_level steps
        let mut wiring = Vec::with_capacity(d);
        for weight in (0..d).rev() {
            if weight == node_level {
                wiring.push(b.const_bit(true));
            } else if weight < node_level {
                wiring.push(steps[node_level - 1 - weight].clone());
            } else {
                wiring.push(b.const_bit(false));
            }
        }
        let embedded = b.embed(&t.circuit, &wiring);
        selected_present.push(b.and(vec![indicator.clone(), embedded.outputs[0].clone()]));
        for (j, wire) in embedded.outputs[1..].iter().enumerate() {
            let hit = b.and(vec![indicator.clone(), wire.clone()]);
            selected_label[j].push(hit);
        }
    }
    let mut outputs = vec![b.or(selected_present)];
    for terms in selected_label {
        outputs.push(b.or(terms));
    }
    let circuit = b.finish_indexed("n", &outputs)?;
    DirectionalTreeRepr::new(d, t.label_width, circuit)
}
