//! Pure-circuit instances: three-valued nodes wired through a fixed gate set.
//!
//! A pure circuit assigns every node the output of exactly one gate; cycles are
//! allowed and are the whole point. An assignment over `{0, 1, bot}` is a
//! solution when every gate constraint holds. Under the robust semantics a
//! dominating pure input pins the output of a binary logical gate even when the
//! other input is garbage; the non-robust semantics only constrains logical
//! gates once both inputs are pure. PURIFY is the one gate that manufactures
//! purity: a pure input replicates to both outputs, and even a garbage input
//! must leave at least one output pure.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;

use crate::error::Error;

/// Node identifiers are plain strings; reductions build structured names like
/// `sort/2/5/min` but nothing in the core cares about their shape.
pub type NodeId = String;

/// The three-valued domain. `Bot` is the garbage value, written `bot` in files.
///
/// The derived order is `Zero < One < Bot`, which is the tie-break order used
/// by every deterministic search in this crate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Value {
    Zero,
    One,
    Bot,
}

impl Value {
    pub fn is_pure(self) -> bool {
        self != Value::Bot
    }

    pub fn from_bit(b: bool) -> Value {
        if b {
            Value::One
        } else {
            Value::Zero
        }
    }

    /// All values in tie-break order.
    pub const ALL: [Value; 3] = [Value::Zero, Value::One, Value::Bot];
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Zero => write!(f, "0"),
            Value::One => write!(f, "1"),
            Value::Bot => write!(f, "bot"),
        }
    }
}

/// Gate types. NOR and PURIFY already form a complete basis; the others are
/// accepted on input and can be compiled away by `rewrite_gateset`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GateType {
    Nor,
    Purify,
    Copy,
    Not,
    Or,
    And,
    Nand,
}

impl GateType {
    /// `(fan_in, fan_out)` of the gate type.
    pub fn arity(self) -> (usize, usize) {
        match self {
            GateType::Purify => (1, 2),
            GateType::Copy | GateType::Not => (1, 1),
            GateType::Nor | GateType::Or | GateType::And | GateType::Nand => (2, 1),
        }
    }

    /// Binary logical gates lose their constraining power on mixed inputs under
    /// the non-robust semantics; PURIFY, NOT and COPY are unaffected.
    pub fn is_binary_logic(self) -> bool {
        matches!(
            self,
            GateType::Nor | GateType::Or | GateType::And | GateType::Nand
        )
    }

    pub fn name(self) -> &'static str {
        match self {
            GateType::Nor => "NOR",
            GateType::Purify => "PURIFY",
            GateType::Copy => "COPY",
            GateType::Not => "NOT",
            GateType::Or => "OR",
            GateType::And => "AND",
            GateType::Nand => "NAND",
        }
    }

    pub fn parse(s: &str) -> Option<GateType> {
        match s {
            "NOR" => Some(GateType::Nor),
            "PURIFY" => Some(GateType::Purify),
            "COPY" => Some(GateType::Copy),
            "NOT" => Some(GateType::Not),
            "OR" => Some(GateType::Or),
            "AND" => Some(GateType::And),
            "NAND" => Some(GateType::Nand),
            _ => None,
        }
    }

    /// Classical truth table on pure bits.
    pub fn classical(self, bits: &[bool]) -> bool {
        match self {
            GateType::Nor => !(bits[0] || bits[1]),
            GateType::Or => bits[0] || bits[1],
            GateType::And => bits[0] && bits[1],
            GateType::Nand => !(bits[0] && bits[1]),
            GateType::Not => !bits[0],
            GateType::Copy => bits[0],
            GateType::Purify => bits[0],
        }
    }
}

impl fmt::Display for GateType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

/// One gate instance. All nodes mentioned by a gate must be pairwise distinct.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gate {
    pub gate_type: GateType,
    pub inputs: Vec<NodeId>,
    pub outputs: Vec<NodeId>,
}

impl Gate {
    pub fn new(gate_type: GateType, inputs: &[&str], outputs: &[&str]) -> Gate {
        Gate {
            gate_type,
            inputs: inputs.iter().map(|s| s.to_string()).collect(),
            outputs: outputs.iter().map(|s| s.to_string()).collect(),
        }
    }

    /// All nodes mentioned by the gate, inputs first.
    pub fn nodes(&self) -> impl Iterator<Item = &NodeId> {
        self.inputs.iter().chain(self.outputs.iter())
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "gate {}", self.gate_type)?;
        for u in &self.inputs {
            write!(f, " {u}")?;
        }
        write!(f, " ->")?;
        for v in &self.outputs {
            write!(f, " {v}")?;
        }
        Ok(())
    }
}

/// Which constraint table gates are checked against.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Semantics {
    Robust,
    NonRobust,
}

impl fmt::Display for Semantics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Semantics::Robust => write!(f, "robust"),
            Semantics::NonRobust => write!(f, "nonrobust"),
        }
    }
}

/// A pure-circuit instance. `nodes` is the full node set; every node must be
/// the output of exactly one gate for the instance to be structurally valid.
#[derive(Clone, Debug)]
pub struct PCInstance {
    pub nodes: BTreeSet<NodeId>,
    pub gates: Vec<Gate>,
    pub semantics: Semantics,
}

impl PCInstance {
    /// Builds an instance whose node set is exactly the nodes mentioned by the
    /// gates.
    pub fn from_gates(gates: Vec<Gate>, semantics: Semantics) -> PCInstance {
        let nodes = gates
            .iter()
            .flat_map(|g| g.nodes().cloned())
            .collect::<BTreeSet<_>>();
        PCInstance {
            nodes,
            gates,
            semantics,
        }
    }

    /// Sorted node list (tie-break order for deterministic searches).
    pub fn sorted_nodes(&self) -> Vec<NodeId> {
        self.nodes.iter().cloned().collect()
    }

    /// The set of gate types appearing in the instance.
    pub fn gate_types(&self) -> BTreeSet<GateType> {
        self.gates.iter().map(|g| g.gate_type).collect()
    }
}

/// A (possibly partial) node assignment.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PCAssignment {
    pub values: BTreeMap<NodeId, Value>,
}

impl PCAssignment {
    pub fn new() -> PCAssignment {
        PCAssignment::default()
    }

    pub fn from_pairs(pairs: &[(&str, Value)]) -> PCAssignment {
        PCAssignment {
            values: pairs
                .iter()
                .map(|(k, v)| (k.to_string(), *v))
                .collect(),
        }
    }

    pub fn get(&self, node: &str) -> Option<Value> {
        self.values.get(node).copied()
    }

    pub fn set(&mut self, node: &str, v: Value) {
        self.values.insert(node.to_string(), v);
    }

    /// True when every node of `inst` is assigned.
    pub fn is_total_for(&self, inst: &PCInstance) -> bool {
        inst.nodes.iter().all(|n| self.values.contains_key(n))
    }
}

/// Structural validation report. The instance is well-formed iff every
/// category of defect is empty.
#[derive(Clone, Debug, Default)]
pub struct StructuralReport {
    /// Nodes that are the output of zero or more than one gate, with counts.
    pub bad_output_counts: BTreeMap<NodeId, usize>,
    /// Gate indices whose node lists contain a repeated node.
    pub duplicate_node_gates: Vec<usize>,
    /// Gate indices whose input/output counts do not match the gate type.
    pub arity_errors: Vec<usize>,
    /// Nodes referenced by gates but absent from the declared node set.
    pub undeclared_nodes: BTreeSet<NodeId>,
}

impl StructuralReport {
    pub fn is_valid(&self) -> bool {
        self.bad_output_counts.is_empty()
            && self.duplicate_node_gates.is_empty()
            && self.arity_errors.is_empty()
            && self.undeclared_nodes.is_empty()
    }

    /// Human-readable defect lines, empty when valid.
    pub fn describe(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (n, c) in &self.bad_output_counts {
            out.push(format!("node {n} is the output of {c} gates (want exactly 1)"));
        }
        for i in &self.duplicate_node_gates {
            out.push(format!("gate #{i} mentions a node twice"));
        }
        for i in &self.arity_errors {
            out.push(format!("gate #{i} has the wrong number of inputs or outputs"));
        }
        for n in &self.undeclared_nodes {
            out.push(format!("node {n} is used by a gate but not declared"));
        }
        out
    }
}

/// Checks the structural conditions: declared nodes, per-gate arity and
/// distinctness, and the exactly-one-gate-per-output rule. How often a node is
/// *used as an input* is deliberately unconstrained here; the stricter degree
/// discipline is reported separately by [`check_restrictions`].
pub fn validate_instance(inst: &PCInstance) -> StructuralReport {
    let mut report = StructuralReport::default();
    let mut output_counts: BTreeMap<NodeId, usize> = BTreeMap::new();
    for (i, gate) in inst.gates.iter().enumerate() {
        let (fan_in, fan_out) = gate.gate_type.arity();
        if gate.inputs.len() != fan_in || gate.outputs.len() != fan_out {
            report.arity_errors.push(i);
        }
        let mut seen = BTreeSet::new();
        for n in gate.nodes() {
            if !seen.insert(n.clone()) {
                report.duplicate_node_gates.push(i);
            }
            if !inst.nodes.contains(n) {
                report.undeclared_nodes.insert(n.clone());
            }
        }
        for v in &gate.outputs {
            *output_counts.entry(v.clone()).or_insert(0) += 1;
        }
    }
    report.duplicate_node_gates.dedup();
    for n in &inst.nodes {
        let c = output_counts.get(n).copied().unwrap_or(0);
        if c != 1 {
            report.bad_output_counts.insert(n.clone(), c);
        }
    }
    for (n, c) in output_counts {
        if !inst.nodes.contains(&n) && c != 1 {
            report.bad_output_counts.insert(n, c);
        }
    }
    report
}

/// Per-gate verdict of [`verify_assignment`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Satisfied,
    Violated,
}

/// Gate verdicts in gate order, plus the overall answer.
#[derive(Clone, Debug)]
pub struct GateVerdicts {
    pub verdicts: Vec<Verdict>,
}

impl GateVerdicts {
    pub fn all_satisfied(&self) -> bool {
        self.verdicts.iter().all(|v| *v == Verdict::Satisfied)
    }

    pub fn violated_gates(&self) -> Vec<usize> {
        self.verdicts
            .iter()
            .enumerate()
            .filter(|(_, v)| **v == Verdict::Violated)
            .map(|(i, _)| i)
            .collect()
    }
}

/// Decides one gate constraint against a total assignment.
pub fn gate_satisfied(gate: &Gate, x: &PCAssignment, semantics: Semantics) -> bool {
    let val = |n: &NodeId| x.get(n).expect("assignment must be total");
    match gate.gate_type {
        GateType::Purify => {
            let u = val(&gate.inputs[0]);
            let v = val(&gate.outputs[0]);
            let w = val(&gate.outputs[1]);
            let one_pure = v.is_pure() || w.is_pure();
            if u.is_pure() {
                v == u && w == u
            } else {
                one_pure
            }
        }
        GateType::Copy => {
            let u = val(&gate.inputs[0]);
            let v = val(&gate.outputs[0]);
            !u.is_pure() || v == u
        }
        GateType::Not => {
            let u = val(&gate.inputs[0]);
            let v = val(&gate.outputs[0]);
            match u {
                Value::Zero => v == Value::One,
                Value::One => v == Value::Zero,
                Value::Bot => true,
            }
        }
        t => {
            // Binary logical gate.
            let u = val(&gate.inputs[0]);
            let v = val(&gate.inputs[1]);
            let w = val(&gate.outputs[0]);
            match semantics {
                Semantics::NonRobust => {
                    if u.is_pure() && v.is_pure() {
                        w == Value::from_bit(t.classical(&[u == Value::One, v == Value::One]))
                    } else {
                        true
                    }
                }
                Semantics::Robust => {
                    if u.is_pure() && v.is_pure() {
                        return w
                            == Value::from_bit(
                                t.classical(&[u == Value::One, v == Value::One]),
                            );
                    }
                    // Exactly one pure input: it dominates iff it already
                    // decides the classical output.
                    let pure = if u.is_pure() { u } else { v };
                    if !pure.is_pure() {
                        return true; // both inputs bot: unconstrained
                    }
                    let bit = pure == Value::One;
                    match t {
                        GateType::Or if bit => w == Value::One,
                        GateType::Nor if bit => w == Value::Zero,
                        GateType::And if !bit => w == Value::Zero,
                        GateType::Nand if !bit => w == Value::One,
                        _ => true,
                    }
                }
            }
        }
    }
}

/// Checks a total assignment against every gate; errors if the assignment
/// misses any node of the instance.
pub fn verify_assignment(inst: &PCInstance, x: &PCAssignment) -> Result<GateVerdicts, Error> {
    if let Some(missing) = inst.nodes.iter().find(|n| x.get(n).is_none()) {
        return Err(Error::PartialAssignment(missing.clone()));
    }
    let verdicts = inst
        .gates
        .iter()
        .map(|g| {
            if gate_satisfied(g, x, inst.semantics) {
                Verdict::Satisfied
            } else {
                Verdict::Violated
            }
        })
        .collect();
    Ok(GateVerdicts { verdicts })
}

/// The interaction graph: a directed edge `u -> v` whenever `v` is an output
/// of a gate that has `u` among its inputs.
#[derive(Clone, Debug)]
pub struct InteractionGraph {
    pub edges: BTreeSet<(NodeId, NodeId)>,
    /// `(in_degree, out_degree)` per node.
    pub degrees: BTreeMap<NodeId, (usize, usize)>,
}

impl InteractionGraph {
    pub fn successors<'a>(&'a self, u: &'a str) -> impl Iterator<Item = &'a NodeId> {
        self.edges
            .range((u.to_string(), String::new())..)
            .take_while(move |(a, _)| a == u)
            .map(|(_, b)| b)
    }
}

pub fn interaction_graph(inst: &PCInstance) -> InteractionGraph {
    let mut edges = BTreeSet::new();
    for gate in &inst.gates {
        for u in &gate.inputs {
            for v in &gate.outputs {
                edges.insert((u.clone(), v.clone()));
            }
        }
    }
    let mut degrees: BTreeMap<NodeId, (usize, usize)> = inst
        .nodes
        .iter()
        .map(|n| (n.clone(), (0, 0)))
        .collect();
    for (u, v) in &edges {
        degrees.entry(u.clone()).or_insert((0, 0)).1 += 1;
        degrees.entry(v.clone()).or_insert((0, 0)).0 += 1;
    }
    InteractionGraph { edges, degrees }
}

/// The extra structural discipline some downstream reductions assume.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RestrictionFlags {
    /// Every node is used as an input by exactly one gate.
    pub input_exactly_once: bool,
    /// Every `(in_degree, out_degree)` pair is `(1,1)`, `(2,1)` or `(1,2)`.
    pub degree_profile: bool,
    /// The interaction graph, viewed undirected, is 2-colorable.
    pub bipartite: bool,
}

impl RestrictionFlags {
    pub fn all(&self) -> bool {
        self.input_exactly_once && self.degree_profile && self.bipartite
    }
}

pub fn check_restrictions(inst: &PCInstance) -> RestrictionFlags {
    let mut input_gate_count: BTreeMap<&NodeId, usize> =
        inst.nodes.iter().map(|n| (n, 0)).collect();
    for gate in &inst.gates {
        for u in &gate.inputs {
            if let Some(c) = input_gate_count.get_mut(u) {
                *c += 1;
            }
        }
    }
    let input_exactly_once = input_gate_count.values().all(|c| *c == 1);

    let graph = interaction_graph(inst);
    let degree_profile = graph
        .degrees
        .values()
        .all(|d| matches!(d, (1, 1) | (2, 1) | (1, 2)));

    let bipartite = two_colorable(inst, &graph);
    RestrictionFlags {
        input_exactly_once,
        degree_profile,
        bipartite,
    }
}

/// BFS 2-coloring of the undirected interaction graph. Also used by the
/// normalization pass, which needs the coloring itself.
pub(crate) fn two_coloring(
    inst: &PCInstance,
    graph: &InteractionGraph,
) -> Option<HashMap<NodeId, bool>> {
    let mut adj: HashMap<&NodeId, Vec<&NodeId>> = HashMap::new();
    for (u, v) in &graph.edges {
        adj.entry(u).or_default().push(v);
        adj.entry(v).or_default().push(u);
    }
    let mut color: HashMap<NodeId, bool> = HashMap::new();
    for start in &inst.nodes {
        if color.contains_key(start) {
            continue;
        }
        color.insert(start.clone(), false);
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            let cu = color[u];
            for v in adj.get(u).into_iter().flatten() {
                match color.get(*v) {
                    Some(cv) if *cv == cu => return None,
                    Some(_) => {}
                    None => {
                        color.insert((*v).clone(), !cu);
                        queue.push_back(v);
                    }
                }
            }
        }
    }
    Some(color)
}

fn two_colorable(inst: &PCInstance, graph: &InteractionGraph) -> bool {
    two_coloring(inst, graph).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn not_two_cycle() -> PCInstance {
        PCInstance::from_gates(
            vec![
                Gate::new(GateType::Not, &["u"], &["v"]),
                Gate::new(GateType::Not, &["v"], &["u"]),
            ],
            Semantics::Robust,
        )
    }

    #[test]
    fn validate_accepts_not_cycle() {
        assert!(validate_instance(&not_two_cycle()).is_valid());
    }

    #[test]
    fn validate_rejects_double_output() {
        let inst = PCInstance::from_gates(
            vec![
                Gate::new(GateType::Not, &["u"], &["v"]),
                Gate::new(GateType::Copy, &["u"], &["v"]),
            ],
            Semantics::Robust,
        );
        let report = validate_instance(&inst);
        assert!(!report.is_valid());
        assert_eq!(report.bad_output_counts.get("v"), Some(&2));
        assert_eq!(report.bad_output_counts.get("u"), Some(&0));
    }

    #[test]
    fn validate_rejects_duplicate_node_in_gate() {
        let inst = PCInstance::from_gates(
            vec![
                Gate::new(GateType::Nor, &["u", "u"], &["w"]),
                Gate::new(GateType::Not, &["w"], &["u"]),
            ],
            Semantics::Robust,
        );
        let report = validate_instance(&inst);
        assert_eq!(report.duplicate_node_gates, vec![0]);
    }

    #[test]
    fn validate_rejects_bad_arity() {
        let inst = PCInstance::from_gates(
            vec![Gate {
                gate_type: GateType::Nor,
                inputs: vec!["u".into()],
                outputs: vec!["u".into()],
            }],
            Semantics::Robust,
        );
        assert_eq!(validate_instance(&inst).arity_errors, vec![0]);
    }

    #[test]
    fn verify_rejects_partial_assignment() {
        let inst = not_two_cycle();
        let x = PCAssignment::from_pairs(&[("u", Value::Bot)]);
        assert!(verify_assignment(&inst, &x).is_err());
    }

    #[test]
    fn not_cycle_solutions() {
        let inst = not_two_cycle();
        let good = [
            [("u", Value::Zero), ("v", Value::One)],
            [("u", Value::One), ("v", Value::Zero)],
            [("u", Value::Bot), ("v", Value::Bot)],
        ];
        for pairs in good {
            let x = PCAssignment::from_pairs(&pairs);
            assert!(verify_assignment(&inst, &x).unwrap().all_satisfied());
        }
        // bot -> anything is fine, but 0 -> 0 is not.
        let x = PCAssignment::from_pairs(&[("u", Value::Zero), ("v", Value::Zero)]);
        let verdicts = verify_assignment(&inst, &x).unwrap();
        assert!(!verdicts.all_satisfied());
        assert_eq!(verdicts.violated_gates(), vec![0, 1]);
        // NOT(bot) leaves its own output free, but the reverse gate still
        // constrains: v = 1 forces u = 0 through NOT(v -> u).
        let x = PCAssignment::from_pairs(&[("u", Value::Bot), ("v", Value::One)]);
        let verdicts = verify_assignment(&inst, &x).unwrap();
        assert_eq!(verdicts.verdicts[0], Verdict::Satisfied);
        assert_eq!(verdicts.violated_gates(), vec![1]);
    }

    #[test]
    fn robust_nor_dominating_one() {
        let inst = PCInstance::from_gates(
            vec![
                Gate::new(GateType::Nor, &["u", "v"], &["w"]),
                Gate::new(GateType::Purify, &["w"], &["u", "v"]),
            ],
            Semantics::Robust,
        );
        // u = 1 dominates: w must be 0 even though v is bot. But then PURIFY(0)
        // forces u = v = 0, contradiction — checked gate by gate here.
        let x = PCAssignment::from_pairs(&[
            ("u", Value::One),
            ("v", Value::Bot),
            ("w", Value::Bot),
        ]);
        let verdicts = verify_assignment(&inst, &x).unwrap();
        assert_eq!(verdicts.verdicts[0], Verdict::Violated);
    }

    #[test]
    fn nonrobust_nor_ignores_mixed_inputs() {
        let inst = PCInstance::from_gates(
            vec![
                Gate::new(GateType::Nor, &["u", "v"], &["w"]),
                Gate::new(GateType::Purify, &["w"], &["u", "v"]),
            ],
            Semantics::NonRobust,
        );
        let x = PCAssignment::from_pairs(&[
            ("u", Value::One),
            ("v", Value::Bot),
            ("w", Value::Bot),
        ]);
        let verdicts = verify_assignment(&inst, &x).unwrap();
        assert_eq!(verdicts.verdicts[0], Verdict::Satisfied);
    }

    #[test]
    fn purify_constraints() {
        let inst = PCInstance::from_gates(
            vec![
                Gate::new(GateType::Purify, &["u"], &["v", "w"]),
                Gate::new(GateType::Copy, &["v"], &["u"]),
            ],
            Semantics::Robust,
        );
        // Pure input replicates.
        let x = PCAssignment::from_pairs(&[
            ("u", Value::One),
            ("v", Value::One),
            ("w", Value::One),
        ]);
        assert!(verify_assignment(&inst, &x).unwrap().all_satisfied());
        // Bot input still demands one pure output.
        let x = PCAssignment::from_pairs(&[
            ("u", Value::Bot),
            ("v", Value::Bot),
            ("w", Value::Bot),
        ]);
        let verdicts = verify_assignment(&inst, &x).unwrap();
        assert_eq!(verdicts.verdicts[0], Verdict::Violated);
    }

    #[test]
    fn interaction_graph_of_not_cycle() {
        let graph = interaction_graph(&not_two_cycle());
        assert!(graph.edges.contains(&("u".into(), "v".into())));
        assert!(graph.edges.contains(&("v".into(), "u".into())));
        assert_eq!(graph.degrees["u"], (1, 1));
        assert_eq!(graph.degrees["v"], (1, 1));
    }

    #[test]
    fn restrictions_on_not_cycle() {
        let flags = check_restrictions(&not_two_cycle());
        assert!(flags.input_exactly_once);
        assert!(flags.degree_profile);
        assert!(flags.bipartite);
        assert!(flags.all());
    }

    #[test]
    fn odd_not_cycle_is_not_bipartite() {
        let inst = PCInstance::from_gates(
            vec![
                Gate::new(GateType::Not, &["a"], &["b"]),
                Gate::new(GateType::Not, &["b"], &["c"]),
                Gate::new(GateType::Not, &["c"], &["a"]),
            ],
            Semantics::Robust,
        );
        let flags = check_restrictions(&inst);
        assert!(flags.input_exactly_once);
        assert!(flags.degree_profile);
        assert!(!flags.bipartite);
    }

    #[test]
    fn purify_feedback_degree_profile() {
        // PURIFY(u -> v, w), NOR(v, w -> u): u has degree (2, 2), which the
        // restricted profile forbids — this is exactly what normalization fixes.
        let inst = PCInstance::from_gates(
            vec![
                Gate::new(GateType::Purify, &["u"], &["v", "w"]),
                Gate::new(GateType::Nor, &["v", "w"], &["u"]),
            ],
            Semantics::Robust,
        );
        let flags = check_restrictions(&inst);
        assert!(flags.input_exactly_once);
        assert!(!flags.degree_profile);
        let graph = interaction_graph(&inst);
        assert_eq!(graph.degrees["u"], (2, 2));
        assert_eq!(graph.degrees["v"], (1, 1));
        assert_eq!(graph.degrees["w"], (1, 1));
    }
}
