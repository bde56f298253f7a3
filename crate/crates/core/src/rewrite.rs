//! Gate-set rewriting and topology normalization.
//!
//! `rewrite_gateset` compiles an instance down to one of the four hard bases
//! (`{PURIFY, NOR}`, `{PURIFY, NAND}`, `{PURIFY, NOT, OR}`, `{PURIFY, NOT,
//! AND}`), preserving original node ids so solutions restrict back.
//!
//! `normalize` then enforces the interaction-graph discipline the game
//! reductions assume: every node is the input of exactly one gate, degrees are
//! `(1,1)`, `(2,1)` or `(1,2)`, and the graph is bipartite. It proceeds in
//! three passes: purification fan-out trees, node splitting, and sink
//! collection into a fresh terminal node.

use std::collections::BTreeMap;
use std::collections::BTreeSet;

use crate::circuit::{
    two_coloring, validate_instance, Gate, GateType, NodeId, PCAssignment, PCInstance,
};
use crate::error::Error;
use crate::interaction_graph;

/// The hard two/three-gate bases every input gate set can be compiled into.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TargetGateSet {
    PurifyNor,
    PurifyNand,
    PurifyNotOr,
    PurifyNotAnd,
}

impl TargetGateSet {
    pub fn gates(self) -> &'static [GateType] {
        match self {
            TargetGateSet::PurifyNor => &[GateType::Purify, GateType::Nor],
            TargetGateSet::PurifyNand => &[GateType::Purify, GateType::Nand],
            TargetGateSet::PurifyNotOr => &[GateType::Purify, GateType::Not, GateType::Or],
            TargetGateSet::PurifyNotAnd => &[GateType::Purify, GateType::Not, GateType::And],
        }
    }

    pub fn contains(self, t: GateType) -> bool {
        self.gates().contains(&t)
    }

    pub fn name(self) -> &'static str {
        match self {
            TargetGateSet::PurifyNor => "purify-nor",
            TargetGateSet::PurifyNand => "purify-nand",
            TargetGateSet::PurifyNotOr => "purify-not-or",
            TargetGateSet::PurifyNotAnd => "purify-not-and",
        }
    }

    pub fn parse(s: &str) -> Option<TargetGateSet> {
        match s {
            "purify-nor" => Some(TargetGateSet::PurifyNor),
            "purify-nand" => Some(TargetGateSet::PurifyNand),
            "purify-not-or" => Some(TargetGateSet::PurifyNotOr),
            "purify-not-and" => Some(TargetGateSet::PurifyNotAnd),
            _ => None,
        }
    }

    pub const ALL: [TargetGateSet; 4] = [
        TargetGateSet::PurifyNor,
        TargetGateSet::PurifyNand,
        TargetGateSet::PurifyNotOr,
        TargetGateSet::PurifyNotAnd,
    ];
}

/// Records which nodes of a transformed instance carry the original meaning.
/// Both rewriting and normalization keep original node ids alive, so mapping a
/// solution back is a restriction.
#[derive(Clone, Debug)]
pub struct SolutionBackMap {
    pub original_nodes: BTreeSet<NodeId>,
}

impl SolutionBackMap {
    pub fn restrict(&self, x: &PCAssignment) -> PCAssignment {
        PCAssignment {
            values: x
                .values
                .iter()
                .filter(|(n, _)| self.original_nodes.contains(*n))
                .map(|(n, v)| (n.clone(), *v))
                .collect(),
        }
    }
}

/// Allocates fresh node ids that cannot collide with existing ones.
struct FreshNames {
    used: BTreeSet<NodeId>,
    prefix: String,
    counter: usize,
}

impl FreshNames {
    fn new(inst: &PCInstance, pass: &str) -> FreshNames {
        FreshNames {
            used: inst.nodes.clone(),
            prefix: pass.to_string(),
            counter: 0,
        }
    }

    fn fresh(&mut self, hint: &str) -> NodeId {
        loop {
            let name = format!("{}/{}/{}", self.prefix, hint, self.counter);
            self.counter += 1;
            if self.used.insert(name.clone()) {
                return name;
            }
        }
    }
}

struct Rewriter {
    target: TargetGateSet,
    gates: Vec<Gate>,
    names: FreshNames,
}

impl Rewriter {
    fn gate(&mut self, t: GateType, inputs: &[&NodeId], outputs: &[&NodeId]) {
        self.gates.push(Gate {
            gate_type: t,
            inputs: inputs.iter().map(|n| (*n).clone()).collect(),
            outputs: outputs.iter().map(|n| (*n).clone()).collect(),
        });
    }

    /// NOT(u -> out) in the target basis. Where NOT is not native it is the
    /// classic purify-then-recombine trick: a pure `u` replicates into both
    /// PURIFY outputs, and NOR/NAND of two equal pure bits is their negation.
    fn emit_not(&mut self, u: &NodeId, out: &NodeId, hint: &str) {
        match self.target {
            TargetGateSet::PurifyNotOr | TargetGateSet::PurifyNotAnd => {
                self.gate(GateType::Not, &[u], &[out]);
            }
            TargetGateSet::PurifyNor | TargetGateSet::PurifyNand => {
                let a = self.names.fresh(hint);
                let b = self.names.fresh(hint);
                self.gate(GateType::Purify, &[u], &[&a, &b]);
                let recombine = if self.target == TargetGateSet::PurifyNor {
                    GateType::Nor
                } else {
                    GateType::Nand
                };
                self.gate(recombine, &[&a, &b], &[out]);
            }
        }
    }

    /// COPY(u -> out): a PURIFY whose second output dangles. PURIFY is strictly
    /// stronger than COPY, so any solution of the rewrite satisfies the copy.
    fn emit_copy(&mut self, u: &NodeId, out: &NodeId, hint: &str) {
        let dangle = self.names.fresh(hint);
        self.gate(GateType::Purify, &[u], &[out, &dangle]);
    }

    /// NOT of a fresh intermediate, returning it.
    fn not_fresh(&mut self, u: &NodeId, hint: &str) -> NodeId {
        let v = self.names.fresh(hint);
        self.emit_not(u, &v, hint);
        v
    }

}

/// Compiles `inst` into the target basis. Original node ids survive; every
/// fresh node is named `rw/<hint>/<k>`. Instances already inside the target
/// basis are returned unchanged.
pub fn rewrite_gateset(
    inst: &PCInstance,
    target: TargetGateSet,
) -> Result<(PCInstance, SolutionBackMap), Error> {
    let report = validate_instance(inst);
    if !report.is_valid() {
        return Err(Error::InvalidInstance(report.describe().join("; ")));
    }
    let back = SolutionBackMap {
        original_nodes: inst.nodes.clone(),
    };
    if inst.gates.iter().all(|g| target.contains(g.gate_type)) {
        return Ok((inst.clone(), back));
    }

    let mut rw = Rewriter {
        target,
        gates: Vec::new(),
        names: FreshNames::new(inst, "rw"),
    };
    for gate in &inst.gates {
        if target.contains(gate.gate_type) {
            rw.gates.push(gate.clone());
            continue;
        }
        let hint = gate.outputs[0].replace('/', "_");
        let hint = hint.as_str();
        let out = gate.outputs[0].clone();
        match (gate.gate_type, target) {
            (GateType::Not, _) => {
                let u = gate.inputs[0].clone();
                rw.emit_not(&u, &out, hint);
            }
            (GateType::Copy, _) => {
                let u = gate.inputs[0].clone();
                rw.emit_copy(&u, &out, hint);
            }
            (t, TargetGateSet::PurifyNor) => {
                let (u, v) = (gate.inputs[0].clone(), gate.inputs[1].clone());
                match t {
                    // OR = NOT . NOR
                    GateType::Or => {
                        let s = rw.names.fresh(hint);
                        rw.gate(GateType::Nor, &[&u, &v], &[&s]);
                        rw.emit_not(&s, &out, hint);
                    }
                    // AND = NOR of the negated inputs (De Morgan)
                    GateType::And => {
                        let nu = rw.not_fresh(&u, hint);
                        let nv = rw.not_fresh(&v, hint);
                        rw.gate(GateType::Nor, &[&nu, &nv], &[&out]);
                    }
                    // NAND = NOT . AND
                    GateType::Nand => {
                        let nu = rw.not_fresh(&u, hint);
                        let nv = rw.not_fresh(&v, hint);
                        let s = rw.names.fresh(hint);
                        rw.gate(GateType::Nor, &[&nu, &nv], &[&s]);
                        rw.emit_not(&s, &out, hint);
                    }
                    _ => unreachable!(),
                }
            }
            (t, TargetGateSet::PurifyNand) => {
                let (u, v) = (gate.inputs[0].clone(), gate.inputs[1].clone());
                match t {
                    // AND = NOT . NAND
                    GateType::And => {
                        let s = rw.names.fresh(hint);
                        rw.gate(GateType::Nand, &[&u, &v], &[&s]);
                        rw.emit_not(&s, &out, hint);
                    }
                    // OR = NAND of the negated inputs
                    GateType::Or => {
                        let nu = rw.not_fresh(&u, hint);
                        let nv = rw.not_fresh(&v, hint);
                        rw.gate(GateType::Nand, &[&nu, &nv], &[&out]);
                    }
                    // NOR = NOT . OR
                    GateType::Nor => {
                        let nu = rw.not_fresh(&u, hint);
                        let nv = rw.not_fresh(&v, hint);
                        let s = rw.names.fresh(hint);
                        rw.gate(GateType::Nand, &[&nu, &nv], &[&s]);
                        rw.emit_not(&s, &out, hint);
                    }
                    _ => unreachable!(),
                }
            }
            (t, TargetGateSet::PurifyNotOr) => {
                let (u, v) = (gate.inputs[0].clone(), gate.inputs[1].clone());
                match t {
                    GateType::Nor => {
                        let s = rw.names.fresh(hint);
                        rw.gate(GateType::Or, &[&u, &v], &[&s]);
                        rw.gate(GateType::Not, &[&s], &[&out]);
                    }
                    GateType::And => {
                        let nu = rw.not_fresh(&u, hint);
                        let nv = rw.not_fresh(&v, hint);
                        let s = rw.names.fresh(hint);
                        rw.gate(GateType::Or, &[&nu, &nv], &[&s]);
                        rw.gate(GateType::Not, &[&s], &[&out]);
                    }
                    GateType::Nand => {
                        let nu = rw.not_fresh(&u, hint);
                        let nv = rw.not_fresh(&v, hint);
                        rw.gate(GateType::Or, &[&nu, &nv], &[&out]);
                    }
                    _ => unreachable!(),
                }
            }
            (t, TargetGateSet::PurifyNotAnd) => {
                let (u, v) = (gate.inputs[0].clone(), gate.inputs[1].clone());
                match t {
                    GateType::Or => {
                        let nu = rw.not_fresh(&u, hint);
                        let nv = rw.not_fresh(&v, hint);
                        let s = rw.names.fresh(hint);
                        rw.gate(GateType::And, &[&nu, &nv], &[&s]);
                        rw.gate(GateType::Not, &[&s], &[&out]);
                    }
                    GateType::Nor => {
                        let nu = rw.not_fresh(&u, hint);
                        let nv = rw.not_fresh(&v, hint);
                        rw.gate(GateType::And, &[&nu, &nv], &[&out]);
                    }
                    GateType::Nand => {
                        let s = rw.names.fresh(hint);
                        rw.gate(GateType::And, &[&u, &v], &[&s]);
                        rw.gate(GateType::Not, &[&s], &[&out]);
                    }
                    _ => unreachable!(),
                }
            }
        }
    }
    let out = PCInstance::from_gates(rw.gates, inst.semantics);
    debug_assert!(validate_instance(&out).is_valid());
    Ok((out, back))
}

/// Builds a left-leaning balanced PURIFY tree from `root` to the given leaf
/// ids, pruned on the right when the leaf count is not a power of two.
/// Internal nodes come from `fresh`. Requires `leaves.len() >= 2`.
pub fn build_purify_tree(
    root: &NodeId,
    leaves: &[NodeId],
    fresh: &mut dyn FnMut() -> NodeId,
    gates: &mut Vec<Gate>,
) {
    assert!(leaves.len() >= 2, "purify tree needs at least two leaves");
    let half = leaves.len().next_power_of_two() / 2;
    let split = half.min(leaves.len() - 1);
    let (left, right) = leaves.split_at(split);
    let mut child = |side: &[NodeId], gates: &mut Vec<Gate>| -> NodeId {
        if side.len() == 1 {
            side[0].clone()
        } else {
            let id = fresh();
            build_purify_tree(&id, side, fresh, gates);
            id
        }
    };
    // Children are created depth-first, but the root gate is pushed first so
    // gate order follows the tree top-down; order is cosmetic only.
    let l = child(left, gates);
    let r = child(right, gates);
    gates.push(Gate {
        gate_type: GateType::Purify,
        inputs: vec![root.clone()],
        outputs: vec![l, r],
    });
}

/// The unary/binary gate pair `normalize` standardizes on.
fn choose_xy(inst: &PCInstance) -> Result<(GateType, GateType), Error> {
    let types = inst.gate_types();
    let unary: Vec<GateType> = types
        .iter()
        .copied()
        .filter(|t| matches!(t, GateType::Not | GateType::Copy))
        .collect();
    let binary: Vec<GateType> = types
        .iter()
        .copied()
        .filter(|t| t.is_binary_logic())
        .collect();
    if unary.len() > 1 || binary.len() > 1 {
        return Err(Error::UnsupportedGateSet(format!(
            "normalize wants gates over {{PURIFY, X, Y}} with one unary X and one binary Y; \
             found {:?} — run rewrite_gateset first",
            types
        )));
    }
    // Defaults kick in when the instance simply never uses a unary or binary
    // gate; the normalized instance may then use a gate type the input did not.
    let x = unary.first().copied().unwrap_or(GateType::Not);
    let y = binary.first().copied().unwrap_or(GateType::Nor);
    Ok((x, y))
}

/// Normalizes topology: after this, every node is the input of exactly one
/// gate, degrees are in `{(1,1), (2,1), (1,2)}`, and the interaction graph is
/// bipartite. Original node ids survive (as the outputs of their original
/// gates), so solutions restrict back through the returned map.
pub fn normalize(inst: &PCInstance) -> Result<(PCInstance, SolutionBackMap), Error> {
    let report = validate_instance(inst);
    if !report.is_valid() {
        return Err(Error::InvalidInstance(report.describe().join("; ")));
    }
    let (x, y) = choose_xy(inst)?;
    let back = SolutionBackMap {
        original_nodes: inst.nodes.clone(),
    };
    let mut names = FreshNames::new(inst, "nm");

    // Pass 1: fan-out trees. A node used as input by k >= 2 gates feeds a
    // PURIFY tree instead; each using gate gets its own leaf.
    let mut gates = inst.gates.clone();
    let usage: BTreeMap<NodeId, Vec<(usize, usize)>> = {
        let mut m: BTreeMap<NodeId, Vec<(usize, usize)>> = BTreeMap::new();
        for (gi, g) in gates.iter().enumerate() {
            for (si, u) in g.inputs.iter().enumerate() {
                m.entry(u.clone()).or_default().push((gi, si));
            }
        }
        m
    };
    let mut tree_gates = Vec::new();
    for (node, uses) in &usage {
        if uses.len() < 2 {
            continue;
        }
        let hint = format!("fan_{}", node.replace('/', "_"));
        let leaves: Vec<NodeId> = (0..uses.len()).map(|_| names.fresh(&hint)).collect();
        build_purify_tree(node, &leaves, &mut || names.fresh(&hint), &mut tree_gates);
        for ((gi, si), leaf) in uses.iter().zip(&leaves) {
            gates[*gi].inputs[*si] = leaf.clone();
        }
    }
    gates.extend(tree_gates);

    // Pass 2: node splitting. Each node u keeps its id on the producing side
    // and consumers are rewired to a fresh partner u_b, connected through the
    // unary gadget (COPY directly, or NOT-PURIFY-NOT when X = NOT). This kills
    // (2,2) degrees and makes the graph bipartite by construction.
    let current_nodes: BTreeSet<NodeId> = gates
        .iter()
        .flat_map(|g| g.nodes().cloned())
        .collect();
    let mut partner: BTreeMap<NodeId, NodeId> = BTreeMap::new();
    let mut gadget_gates = Vec::new();
    for node in &current_nodes {
        let hint = format!("split_{}", node.replace('/', "_"));
        let b = names.fresh(&hint);
        match x {
            GateType::Copy => gadget_gates.push(Gate {
                gate_type: GateType::Copy,
                inputs: vec![node.clone()],
                outputs: vec![b.clone()],
            }),
            GateType::Not => {
                let p = names.fresh(&hint);
                let q = names.fresh(&hint);
                let q2 = names.fresh(&hint);
                gadget_gates.push(Gate {
                    gate_type: GateType::Not,
                    inputs: vec![node.clone()],
                    outputs: vec![p.clone()],
                });
                gadget_gates.push(Gate {
                    gate_type: GateType::Purify,
                    inputs: vec![p],
                    outputs: vec![q.clone(), q2],
                });
                gadget_gates.push(Gate {
                    gate_type: GateType::Not,
                    inputs: vec![q],
                    outputs: vec![b.clone()],
                });
            }
            _ => unreachable!(),
        }
        partner.insert(node.clone(), b);
    }
    for g in &mut gates {
        for u in &mut g.inputs {
            *u = partner[u.as_str()].clone();
        }
    }
    gates.extend(gadget_gates);

    // Pass 3: sink collection. All nodes no gate consumes are folded through a
    // tree of Y gates into u_sink, which feeds a fresh terminal v* that is
    // itself a leaf of the tree — closing the last open inputs.
    let inst2 = PCInstance::from_gates(gates, inst.semantics);
    let consumed: BTreeSet<&NodeId> = inst2.gates.iter().flat_map(|g| g.inputs.iter()).collect();
    let sinks: Vec<NodeId> = inst2
        .nodes
        .iter()
        .filter(|n| !consumed.contains(n))
        .cloned()
        .collect();
    let coloring = two_coloring(&inst2, &interaction_graph(&inst2))
        .expect("instance is bipartite after node splitting");
    let mut gates = inst2.gates;
    if !sinks.is_empty() {
        let vstar = names.fresh("vstar");
        // Queue entries carry the color of the node (true = the side gate
        // inputs live on after normalizing leaves).
        let mut queue: std::collections::VecDeque<(NodeId, bool)> = std::collections::VecDeque::new();
        for s in sinks {
            let c = coloring.get(&s).copied().unwrap_or(false);
            queue.push_back((s, c));
        }
        queue.push_back((vstar.clone(), true));
        // Flip leaf colors with X gates so every Y gate sees equal colors.
        while queue.len() >= 2 {
            let (a, ca) = queue.pop_front().unwrap();
            let (mut b, mut cb) = queue.pop_front().unwrap();
            if ca != cb {
                let flipped = names.fresh("sinkflip");
                gates.push(Gate {
                    gate_type: x,
                    inputs: vec![b],
                    outputs: vec![flipped.clone()],
                });
                b = flipped;
                cb = ca;
            }
            let t = names.fresh("sink");
            gates.push(Gate {
                gate_type: y,
                inputs: vec![a, b],
                outputs: vec![t.clone()],
            });
            queue.push_back((t, !cb));
        }
        let (u_sink, c_sink) = queue.pop_front().unwrap();
        // v* was enqueued with color true; close the loop preserving parity.
        if !c_sink {
            gates.push(Gate {
                gate_type: x,
                inputs: vec![u_sink],
                outputs: vec![vstar],
            });
        } else {
            let mid = names.fresh("sinkmid");
            gates.push(Gate {
                gate_type: x,
                inputs: vec![u_sink],
                outputs: vec![mid.clone()],
            });
            gates.push(Gate {
                gate_type: x,
                inputs: vec![mid],
                outputs: vec![vstar],
            });
        }
    }
    let out = PCInstance::from_gates(gates, inst.semantics);
    debug_assert!(validate_instance(&out).is_valid());
    Ok((out, back))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{check_restrictions, verify_assignment, Semantics};
    use crate::solve::{brute_force_solve, enumerate_solutions, SolveBudget};

    fn purify_nor_feedback() -> PCInstance {
        PCInstance::from_gates(
            vec![
                Gate::new(GateType::Nor, &["v", "w"], &["u"]),
                Gate::new(GateType::Purify, &["u"], &["v", "w"]),
            ],
            Semantics::Robust,
        )
    }

    fn small_instances() -> Vec<PCInstance> {
        vec![
            purify_nor_feedback(),
            PCInstance::from_gates(
                vec![
                    Gate::new(GateType::Not, &["u"], &["v"]),
                    Gate::new(GateType::Not, &["v"], &["u"]),
                ],
                Semantics::Robust,
            ),
            PCInstance::from_gates(
                vec![
                    Gate::new(GateType::And, &["v", "w"], &["u"]),
                    Gate::new(GateType::Purify, &["u"], &["v", "w"]),
                ],
                Semantics::Robust,
            ),
            PCInstance::from_gates(
                vec![
                    Gate::new(GateType::Or, &["v", "w"], &["u"]),
                    Gate::new(GateType::Purify, &["u"], &["v", "w"]),
                ],
                Semantics::Robust,
            ),
            PCInstance::from_gates(
                vec![
                    Gate::new(GateType::Nand, &["v", "w"], &["u"]),
                    Gate::new(GateType::Purify, &["u"], &["v", "w"]),
                ],
                Semantics::Robust,
            ),
            PCInstance::from_gates(
                vec![
                    Gate::new(GateType::Copy, &["u"], &["v"]),
                    Gate::new(GateType::Not, &["v"], &["u"]),
                ],
                Semantics::Robust,
            ),
        ]
    }

    #[test]
    fn rewrite_uses_only_target_gates() {
        for inst in small_instances() {
            for target in TargetGateSet::ALL {
                let (out, _) = rewrite_gateset(&inst, target).unwrap();
                assert!(validate_instance(&out).is_valid());
                for g in &out.gates {
                    assert!(
                        target.contains(g.gate_type),
                        "{} leaked through {}",
                        g.gate_type,
                        target.name()
                    );
                }
            }
        }
    }

    #[test]
    fn rewrite_is_identity_inside_target() {
        let inst = purify_nor_feedback();
        let (out, back) = rewrite_gateset(&inst, TargetGateSet::PurifyNor).unwrap();
        assert_eq!(out.gates, inst.gates);
        assert_eq!(back.original_nodes, inst.nodes);
    }

    #[test]
    fn rewrite_solutions_restrict_to_original_solutions() {
        // Soundness by brute force: every solution of the rewritten instance,
        // restricted to original nodes, satisfies the original instance.
        for inst in small_instances() {
            for target in TargetGateSet::ALL {
                let (out, back) = rewrite_gateset(&inst, target).unwrap();
                let sols = enumerate_solutions(&out, 20_000).unwrap();
                assert!(
                    !sols.is_empty(),
                    "rewrite to {} destroyed solvability",
                    target.name()
                );
                for sol in sols {
                    let restricted = back.restrict(&sol);
                    assert!(
                        verify_assignment(&inst, &restricted).unwrap().all_satisfied(),
                        "bad back-mapped solution via {}",
                        target.name()
                    );
                }
            }
        }
    }

    #[test]
    fn rewrite_rejects_invalid_instances() {
        let inst = PCInstance::from_gates(
            vec![Gate::new(GateType::Not, &["u"], &["v"])],
            Semantics::Robust,
        );
        // u is the output of no gate.
        assert!(rewrite_gateset(&inst, TargetGateSet::PurifyNor).is_err());
    }

    #[test]
    fn normalize_enforces_all_restrictions() {
        for inst in [
            purify_nor_feedback(),
            PCInstance::from_gates(
                vec![
                    Gate::new(GateType::Not, &["u"], &["v"]),
                    Gate::new(GateType::Not, &["v"], &["u"]),
                ],
                Semantics::Robust,
            ),
            // Fan-out 3: u feeds three gates.
            PCInstance::from_gates(
                vec![
                    Gate::new(GateType::Nor, &["u", "a"], &["b"]),
                    Gate::new(GateType::Nor, &["u", "b"], &["a"]),
                    Gate::new(GateType::Nor, &["u", "x"], &["y"]),
                    Gate::new(GateType::Nor, &["a", "y"], &["u"]),
                    Gate::new(GateType::Purify, &["b"], &["x", "z"]),
                ],
                Semantics::Robust,
            ),
        ] {
            let (out, _) = normalize(&inst).unwrap();
            assert!(validate_instance(&out).is_valid());
            let flags = check_restrictions(&out);
            assert!(flags.input_exactly_once, "inputs not unique");
            assert!(flags.degree_profile, "bad degrees");
            assert!(flags.bipartite, "not bipartite");
        }
    }

    #[test]
    fn normalize_with_copy_gadget() {
        let inst = PCInstance::from_gates(
            vec![
                Gate::new(GateType::Copy, &["u"], &["v"]),
                Gate::new(GateType::Nand, &["v", "w"], &["u"]),
                Gate::new(GateType::Purify, &["u"], &["w", "z"]),
            ],
            Semantics::Robust,
        );
        let (out, _) = normalize(&inst).unwrap();
        assert!(check_restrictions(&out).all());
        // X = COPY was chosen: no NOT gates appear.
        assert!(out.gates.iter().all(|g| g.gate_type != GateType::Not));
    }

    #[test]
    fn normalize_rejects_mixed_gate_sets() {
        let inst = PCInstance::from_gates(
            vec![
                Gate::new(GateType::Nor, &["u", "v"], &["w"]),
                Gate::new(GateType::And, &["u", "w"], &["v"]),
                Gate::new(GateType::Purify, &["w"], &["u", "x"]),
                Gate::new(GateType::Not, &["x"], &["y"]),
                Gate::new(GateType::Not, &["y"], &["z"]),
                Gate::new(GateType::Not, &["z"], &["q"]),
                Gate::new(GateType::Not, &["q"], &["r"]),
                Gate::new(GateType::Not, &["r"], &["s"]),
                Gate::new(GateType::Not, &["s"], &["t"]),
                Gate::new(GateType::Not, &["t"], &["u0"]),
                Gate::new(GateType::Not, &["u0"], &["u1"]),
            ],
            Semantics::Robust,
        );
        // Two binary types (NOR and AND): normalize refuses.
        assert!(matches!(
            normalize(&inst),
            Err(Error::UnsupportedGateSet(_))
        ));
    }

    #[test]
    fn normalize_solution_restricts_back() {
        let inst = purify_nor_feedback();
        let (out, back) = normalize(&inst).unwrap();
        let sol = brute_force_solve(&out, &SolveBudget::default())
            .unwrap();
        let sol = sol.solution().expect("normalized instance stays solvable");
        let restricted = back.restrict(&sol.clone());
        assert!(verify_assignment(&inst, &restricted).unwrap().all_satisfied());
    }

    #[test]
    fn purify_tree_shape() {
        // 5 leaves: left-leaning, pruned on the right; 4 PURIFY gates.
        let leaves: Vec<NodeId> = (0..5).map(|i| format!("leaf{i}")).collect();
        let mut counter = 0;
        let mut fresh = || {
            counter += 1;
            format!("t{counter}")
        };
        let mut gates = Vec::new();
        build_purify_tree(&"root".to_string(), &leaves, &mut fresh, &mut gates);
        assert_eq!(gates.len(), 4);
        assert!(gates.iter().all(|g| g.gate_type == GateType::Purify));
        // Every leaf appears exactly once as an output.
        for leaf in &leaves {
            assert_eq!(
                gates
                    .iter()
                    .flat_map(|g| g.outputs.iter())
                    .filter(|o| *o == leaf)
                    .count(),
                1
            );
        }
    }
}
