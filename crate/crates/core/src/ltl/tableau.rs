//! Lasso-model search by guessing subformula sets.
//!
//! A subformula set assigns a truth claim to every formula in the closure
//! of the target. Propositional connectives are forced by their children;
//! atoms and the temporal operators are free, subject to the step rules
//! linking consecutive sets:
//!
//! * `X a` now  iff  `a` next;
//! * `a U b` now  iff  `b` now, or `a` now and `a U b` next;
//! * `F a` now  iff  `a` now or `F a` next;
//! * `G a` now  iff  `a` now and `G a` next.
//!
//! A model is a lasso of sets whose first set claims the target and whose
//! loop discharges every temporal obligation: an until or eventually
//! claimed true must realize its right argument inside the loop, and a
//! globally claimed false must see its argument fail inside the loop (the
//! dual matters because claims are two-sided truth assertions, not signed
//! formulas). The search builds the graph of consistent sets, finds the
//! strongly connected components whose members can discharge every
//! obligation, and threads a concrete loop through one witness per
//! obligation. Exhausting the graph certifies unsatisfiability, since
//! every satisfiable formula has a model of this shape within
//! `2^|closure|` sets.

use std::collections::HashMap;

use super::{ltl_eval, LassoModel, Ltl, LtlError};
use crate::bits::State;

#[derive(Debug, Clone, Copy)]
pub struct TableauLimits {
    pub max_closure: usize,
    pub max_sets: u64,
}

impl Default for TableauLimits {
    fn default() -> Self {
        TableauLimits { max_closure: 24, max_sets: 1 << 16 }
    }
}

#[derive(Debug, Clone, Copy)]
enum Shape {
    Constant(bool),
    Free,
    Not(usize),
    Many(bool),
    Implies(usize, usize),
    Iff(usize, usize),
}

/// One step constraint: (now-index, now-value) pins next-index to value.
#[derive(Debug, Clone, Copy)]
struct Pin {
    next_index: usize,
    value: bool,
}

struct Tableau {
    closure_len: usize,
    shapes: Vec<Shape>,
    many_children: Vec<Vec<usize>>,
    /// Free-bit slot per closure position, `usize::MAX` for derived ones.
    free_slot: Vec<usize>,
    free_count: usize,
    /// (x-index, child-index)
    nexts: Vec<(usize, usize)>,
    /// (u-index, left-index or usize::MAX, right/child-index, is_global)
    temporals: Vec<(usize, usize, usize, bool)>,
    atoms: Vec<(usize, String)>,
    target: usize,
}

impl Tableau {
    fn build(f: &Ltl, limits: &TableauLimits) -> Result<Self, LtlError> {
        let closure = f.closure();
        if closure.len() > limits.max_closure {
            return Err(LtlError::CapExceeded {
                what: "subformula closure",
                cap: limits.max_closure as u64,
                actual: closure.len() as u64,
            });
        }
        let index: HashMap<&Ltl, usize> =
            closure.iter().enumerate().map(|(i, g)| (g, i)).collect();
        let mut shapes = Vec::with_capacity(closure.len());
        let mut many_children = vec![Vec::new(); closure.len()];
        let mut free_slot = vec![usize::MAX; closure.len()];
        let mut free_count = 0;
        let mut nexts = Vec::new();
        let mut temporals = Vec::new();
        let mut atoms = Vec::new();
        for (i, g) in closure.iter().enumerate() {
            let mut claim_free = || {
                free_slot[i] = free_count;
                free_count += 1;
                Shape::Free
            };
            let shape = match g {
                Ltl::True => Shape::Constant(true),
                Ltl::False => Shape::Constant(false),
                Ltl::Atom(name) => {
                    atoms.push((i, name.clone()));
                    claim_free()
                }
                Ltl::Not(a) => Shape::Not(index[a.as_ref()]),
                Ltl::And(fs) | Ltl::Or(fs) => {
                    many_children[i] = fs.iter().map(|a| index[a]).collect();
                    Shape::Many(matches!(g, Ltl::And(_)))
                }
                Ltl::Implies(a, b) => Shape::Implies(index[a.as_ref()], index[b.as_ref()]),
                Ltl::Iff(a, b) => Shape::Iff(index[a.as_ref()], index[b.as_ref()]),
                Ltl::Next(a) => {
                    nexts.push((i, index[a.as_ref()]));
                    claim_free()
                }
                Ltl::Until(a, b) => {
                    temporals.push((i, index[a.as_ref()], index[b.as_ref()], false));
                    claim_free()
                }
                Ltl::Eventually(a) => {
                    temporals.push((i, usize::MAX, index[a.as_ref()], false));
                    claim_free()
                }
                Ltl::Globally(a) => {
                    temporals.push((i, usize::MAX, index[a.as_ref()], true));
                    claim_free()
                }
            };
            shapes.push(shape);
        }
        let target = closure.len() - 1;
        Ok(Tableau {
            closure_len: closure.len(),
            shapes,
            many_children,
            free_slot,
            free_count,
            nexts,
            temporals,
            atoms,
            target,
        })
    }

    /// Bit vector of claims for one free-bit assignment; children precede
    /// parents in the closure, so one forward pass settles everything.
    fn realize(&self, free_bits: u64) -> Vec<bool> {
        let mut bits = vec![false; self.closure_len];
        for i in 0..self.closure_len {
            bits[i] = match self.shapes[i] {
                Shape::Constant(v) => v,
                Shape::Free => free_bits >> self.free_slot[i] & 1 == 1,
                Shape::Not(a) => !bits[a],
                Shape::Many(is_and) => {
                    if is_and {
                        self.many_children[i].iter().all(|&c| bits[c])
                    } else {
                        self.many_children[i].iter().any(|&c| bits[c])
                    }
                }
                Shape::Implies(a, b) => !bits[a] || bits[b],
                Shape::Iff(a, b) => bits[a] == bits[b],
            };
        }
        bits
    }

    /// Step pins from a set, or `None` when the set has no successor.
    fn pins(&self, bits: &[bool]) -> Option<Vec<Pin>> {
        let mut pins: Vec<Pin> = Vec::new();
        let add = |pins: &mut Vec<Pin>, next_index: usize, value: bool| -> bool {
            if let Some(existing) = pins.iter().find(|p| p.next_index == next_index) {
                return existing.value == value;
            }
            pins.push(Pin { next_index, value });
            true
        };
        for &(x, child) in &self.nexts {
            if !add(&mut pins, child, bits[x]) {
                return None;
            }
        }
        for &(u, left, arg, is_global) in &self.temporals {
            let now = bits[u];
            let arg_now = bits[arg];
            if is_global {
                // g <-> arg & g'
                match (now, arg_now) {
                    (true, true) => {
                        if !add(&mut pins, u, true) {
                            return None;
                        }
                    }
                    (true, false) => return None,
                    (false, true) => {
                        if !add(&mut pins, u, false) {
                            return None;
                        }
                    }
                    (false, false) => {}
                }
            } else {
                // u <-> arg | (left & u'), with left absent meaning true
                let left_now = if left == usize::MAX { true } else { bits[left] };
                match (now, left_now, arg_now) {
                    (true, _, true) => {}
                    (true, true, false) => {
                        if !add(&mut pins, u, true) {
                            return None;
                        }
                    }
                    (true, false, false) => return None,
                    (false, _, true) => return None,
                    (false, true, false) => {
                        if !add(&mut pins, u, false) {
                            return None;
                        }
                    }
                    (false, false, false) => {}
                }
            }
        }
        Some(pins)
    }
}

struct Graph {
    sets: Vec<Vec<bool>>,
    edges: Vec<Vec<u32>>,
}

fn build_graph(t: &Tableau, limits: &TableauLimits) -> Result<Graph, LtlError> {
    let free_count = t.free_count;
    if free_count > 32 || 1u64 << free_count > limits.max_sets {
        return Err(LtlError::CapExceeded {
            what: "subformula set space",
            cap: limits.max_sets,
            actual: if free_count >= 64 { u64::MAX } else { 1 << free_count },
        });
    }
    let sets: Vec<Vec<bool>> = (0..1u64 << free_count).map(|mask| t.realize(mask)).collect();
    let mut edges = Vec::with_capacity(sets.len());
    for bits in &sets {
        let mut out = Vec::new();
        if let Some(pins) = t.pins(bits) {
            'next: for (j, candidate) in sets.iter().enumerate() {
                for pin in &pins {
                    if candidate[pin.next_index] != pin.value {
                        continue 'next;
                    }
                }
                out.push(j as u32);
            }
        }
        edges.push(out);
    }
    Ok(Graph { sets, edges })
}

/// Tarjan's strongly connected components, iterative, in deterministic
/// order. Returns the component id of each node.
fn sccs(edges: &[Vec<u32>]) -> (Vec<usize>, usize) {
    let n = edges.len();
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut comp = vec![usize::MAX; n];
    let mut next_index = 0;
    let mut comp_count = 0;

    for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        let mut call: Vec<(usize, usize)> = vec![(root, 0)];
        while let Some(&mut (v, ref mut ei)) = call.last_mut() {
            if *ei == 0 {
                index[v] = next_index;
                low[v] = next_index;
                next_index += 1;
                stack.push(v);
                on_stack[v] = true;
            }
            if *ei < edges[v].len() {
                let w = edges[v][*ei] as usize;
                *ei += 1;
                if index[w] == usize::MAX {
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                if low[v] == index[v] {
                    while let Some(w) = stack.pop() {
                        on_stack[w] = false;
                        comp[w] = comp_count;
                        if w == v {
                            break;
                        }
                    }
                    comp_count += 1;
                }
                call.pop();
                if let Some(&mut (parent, _)) = call.last_mut() {
                    low[parent] = low[parent].min(low[v]);
                }
            }
        }
    }
    (comp, comp_count)
}

/// Shortest path between nodes through `edges`, preferring smaller ids;
/// `allowed` restricts intermediate nodes when given.
fn bfs_path(
    edges: &[Vec<u32>],
    from: usize,
    goal: impl Fn(usize) -> bool,
    allowed: Option<&[bool]>,
) -> Option<Vec<usize>> {
    let mut prev = vec![usize::MAX; edges.len()];
    let mut queue = std::collections::VecDeque::new();
    let mut seen = vec![false; edges.len()];
    seen[from] = true;
    queue.push_back(from);
    if goal(from) {
        return Some(vec![from]);
    }
    while let Some(v) = queue.pop_front() {
        for &w in &edges[v] {
            let w = w as usize;
            if seen[w] || allowed.map(|a| !a[w]).unwrap_or(false) {
                continue;
            }
            seen[w] = true;
            prev[w] = v;
            if goal(w) {
                let mut path = vec![w];
                let mut at = w;
                while at != from {
                    at = prev[at];
                    path.push(at);
                }
                path.reverse();
                return Some(path);
            }
            queue.push_back(w);
        }
    }
    None
}

/// Search for a lasso model of `f`. Returns the atom projection of the
/// first accepting set-lasso in the deterministic order described in the
/// module docs; `None` certifies unsatisfiability within the exhaustive
/// set space. Any returned model satisfies `f` by construction (and the
/// evaluator re-checks in debug builds).
pub fn find_model(f: &Ltl, limits: &TableauLimits) -> Result<Option<LassoModel>, LtlError> {
    let t = Tableau::build(f, limits)?;
    let graph = build_graph(&t, limits)?;
    let (comp, comp_count) = sccs(&graph.edges);

    // a component accepts if it contains an internal edge and every
    // temporal claim can be discharged inside it: an until/eventually
    // claimed true must realize its argument at some member (or be
    // dropped), and dually a globally claimed false must see its argument
    // fail at some member (or be claimed). Claims persist along the step
    // rules until exactly such a member, so a cycle routed through one
    // witness per obligation is honest.
    let witness_ok = |bits: &[bool], u: usize, arg: usize, is_global: bool| {
        if is_global {
            bits[u] || !bits[arg]
        } else {
            !bits[u] || bits[arg]
        }
    };
    let eventualities: Vec<(usize, usize, bool)> =
        t.temporals.iter().map(|&(u, _, arg, is_global)| (u, arg, is_global)).collect();
    let mut has_edge = vec![false; comp_count];
    for (v, outs) in graph.edges.iter().enumerate() {
        for &w in outs {
            if comp[v] == comp[w as usize] {
                has_edge[comp[v]] = true;
            }
        }
    }
    let mut accepting = vec![false; comp_count];
    for c in 0..comp_count {
        if !has_edge[c] {
            continue;
        }
        accepting[c] = eventualities.iter().all(|&(u, arg, is_global)| {
            graph
                .sets
                .iter()
                .enumerate()
                .any(|(v, bits)| comp[v] == c && witness_ok(bits, u, arg, is_global))
        });
    }

    // nodes that can reach an accepting component
    let mut reaches = vec![false; graph.sets.len()];
    {
        let mut changed = true;
        for (v, _) in graph.sets.iter().enumerate() {
            reaches[v] = accepting[comp[v]];
        }
        while changed {
            changed = false;
            for v in 0..graph.sets.len() {
                if reaches[v] {
                    continue;
                }
                if graph.edges[v].iter().any(|&w| reaches[w as usize]) {
                    reaches[v] = true;
                    changed = true;
                }
            }
        }
    }

    let start = (0..graph.sets.len()).find(|&v| graph.sets[v][t.target] && reaches[v]);
    let Some(start) = start else {
        return Ok(None);
    };

    // stem: shortest path from the start into an accepting component
    let stem = bfs_path(&graph.edges, start, |v| accepting[comp[v]], None)
        .expect("reachability said an accepting component exists");
    let entry = *stem.last().unwrap();
    let home = comp[entry];
    let members: Vec<bool> = (0..graph.sets.len()).map(|v| comp[v] == home).collect();

    // loop: visit one witness per temporal obligation inside the
    // component, then return to the entry
    let mut loop_nodes = vec![entry];
    let mut at = entry;
    for &(u, arg, is_global) in &eventualities {
        let witness = |v: usize| members[v] && witness_ok(&graph.sets[v], u, arg, is_global);
        if witness(at) {
            continue;
        }
        let hop = bfs_path(&graph.edges, at, witness, Some(&members))
            .expect("accepting component contains a witness");
        loop_nodes.extend(&hop[1..]);
        at = *hop.last().unwrap();
    }
    // close the cycle; a single node needs a real self-loop step
    if at != entry || loop_nodes.len() == 1 {
        let back = bfs_step_path(&graph.edges, at, entry, &members)
            .expect("component is strongly connected");
        loop_nodes.extend(&back[1..]);
        // the closing node equals the entry; drop the duplicate
        loop_nodes.pop();
    }

    let vars: Vec<String> = t.atoms.iter().map(|(_, name)| name.clone()).collect();
    let project = |v: usize| -> State {
        State::new(t.atoms.iter().map(|&(i, _)| graph.sets[v][i]).collect())
    };
    let initial: Vec<State> = stem[..stem.len() - 1].iter().map(|&v| project(v)).collect();
    let period: Vec<State> = loop_nodes.iter().map(|&v| project(v)).collect();
    let model = LassoModel::new(vars, initial, period)?;
    debug_assert!(ltl_eval(f, &model, 0)?, "tableau produced a non-model");
    Ok(Some(model))
}

/// Like [`bfs_path`] but with at least one step (finds proper cycles).
fn bfs_step_path(
    edges: &[Vec<u32>],
    from: usize,
    to: usize,
    allowed: &[bool],
) -> Option<Vec<usize>> {
    for &w in &edges[from] {
        let w = w as usize;
        if !allowed[w] {
            continue;
        }
        if w == to {
            return Some(vec![from, to]);
        }
        if let Some(rest) = bfs_path(edges, w, |v| v == to, Some(allowed)) {
            let mut path = vec![from];
            path.extend(rest);
            return Some(path);
        }
    }
    None
}
