//! Generalized circuits, their approximate verifier, and the reduction from
//! pure circuits over `{NOR, PURIFY}`.
//!
//! An ε-solution assigns each node a rational in `[0, 1]`; arithmetic gates
//! constrain their output to within ε, and the comparison/logic gates
//! (`G<`, `Gor`, `Gand`, `Gnot`) constrain it only outside their dead bands.
//!
//! The reduction encodes pure-circuit 0 as `[0, ε]` and 1 as `[1-ε, 1]`:
//! NOR(u, v -> w) computes `u + v < 5/9`; PURIFY(u -> v, w) sets
//! `v = (u > 3/10)` and `w = (u > 7/10)`, with each `>` materialized as a
//! `<` followed by a negation. The NOR gadget is sound for every ε < 1/9 and
//! the PURIFY gadget for every ε < 1/10; both claims are checked on exact
//! rational grids by [`gadget_case_check`], and the failure of PURIFY at
//! ε = 1/10 with input exactly 1/2 is witnessed in the tests.

use std::collections::{BTreeMap, BTreeSet};

use num::{Signed, Zero};

use crate::circuit::{GateType, NodeId, PCAssignment, PCInstance, Semantics, Value};
use crate::error::Error;
use crate::rational::{rat, Rational};

/// The nine gate types of a generalized circuit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GCGateType {
    /// Constant: `w = c ± ε`.
    Const,
    /// Scaling: `w = u·c ± ε`.
    MulC,
    /// Copy: `w = u ± ε`.
    Eq,
    /// Truncated sum: `w = min(u + v, 1) ± ε`.
    Add,
    /// Truncated difference: `w = max(u - v, 0) ± ε`.
    Sub,
    /// Comparison: `w = 1 ± ε` if `u < v - ε`, `w = 0 ± ε` if `u > v + ε`.
    Less,
    /// Disjunction on encoded bits.
    Or,
    /// Conjunction on encoded bits.
    And,
    /// Negation on encoded bits.
    Not,
}

impl GCGateType {
    pub fn arity(self) -> usize {
        match self {
            GCGateType::Const => 0,
            GCGateType::MulC | GCGateType::Eq | GCGateType::Not => 1,
            _ => 2,
        }
    }

    pub fn uses_constant(self) -> bool {
        matches!(self, GCGateType::Const | GCGateType::MulC)
    }

    pub fn name(self) -> &'static str {
        match self {
            GCGateType::Const => "Gc",
            GCGateType::MulC => "G*c",
            GCGateType::Eq => "G=",
            GCGateType::Add => "G+",
            GCGateType::Sub => "G-",
            GCGateType::Less => "G<",
            GCGateType::Or => "Gor",
            GCGateType::And => "Gand",
            GCGateType::Not => "Gnot",
        }
    }

    pub fn parse(s: &str) -> Option<GCGateType> {
        Some(match s {
            "Gc" => GCGateType::Const,
            "G*c" => GCGateType::MulC,
            "G=" => GCGateType::Eq,
            "G+" => GCGateType::Add,
            "G-" => GCGateType::Sub,
            "G<" => GCGateType::Less,
            "Gor" => GCGateType::Or,
            "Gand" => GCGateType::And,
            "Gnot" => GCGateType::Not,
            _ => return None,
        })
    }
}

/// One generalized-circuit gate.
#[derive(Debug, Clone, PartialEq)]
pub struct GCGate {
    pub gate_type: GCGateType,
    pub inputs: Vec<NodeId>,
    pub output: NodeId,
    pub constant: Option<Rational>,
}

impl GCGate {
    pub fn new(
        gate_type: GCGateType,
        inputs: &[&str],
        output: &str,
        constant: Option<Rational>,
    ) -> GCGate {
        GCGate {
            gate_type,
            inputs: inputs.iter().map(|s| s.to_string()).collect(),
            output: output.to_string(),
            constant,
        }
    }
}

/// A generalized circuit: every node is the output of exactly one gate.
#[derive(Debug, Clone)]
pub struct GCInstance {
    pub nodes: BTreeSet<NodeId>,
    pub gates: Vec<GCGate>,
}

impl GCInstance {
    pub fn from_gates(gates: Vec<GCGate>) -> GCInstance {
        let nodes = gates
            .iter()
            .flat_map(|g| g.inputs.iter().chain(std::iter::once(&g.output)))
            .cloned()
            .collect();
        GCInstance { nodes, gates }
    }
}

/// Structural check: arities, constant usage and range, and the
/// one-producer-per-node rule.
pub fn validate_gc_instance(inst: &GCInstance) -> Result<(), Error> {
    let mut produced: BTreeMap<&NodeId, usize> = BTreeMap::new();
    for (i, g) in inst.gates.iter().enumerate() {
        if g.inputs.len() != g.gate_type.arity() {
            return Err(Error::InvalidInstance(format!(
                "gate {i} ({}) has {} inputs, expected {}",
                g.gate_type.name(),
                g.inputs.len(),
                g.gate_type.arity()
            )));
        }
        match (&g.constant, g.gate_type.uses_constant()) {
            (Some(c), true) => {
                if c < &Rational::zero() || c > &rat(1, 1) {
                    return Err(Error::InvalidInstance(format!(
                        "gate {i} constant outside [0, 1]"
                    )));
                }
            }
            (None, false) => {}
            _ => {
                return Err(Error::InvalidInstance(format!(
                    "gate {i} ({}) constant usage mismatch",
                    g.gate_type.name()
                )));
            }
        }
        *produced.entry(&g.output).or_insert(0) += 1;
    }
    for node in &inst.nodes {
        if produced.get(node).copied().unwrap_or(0) != 1 {
            return Err(Error::InvalidInstance(format!(
                "node {node} is the output of {} gates, expected 1",
                produced.get(node).copied().unwrap_or(0)
            )));
        }
    }
    Ok(())
}

/// Total map node → rational in `[0, 1]`.
#[derive(Debug, Clone)]
pub struct GCAssignment {
    pub values: BTreeMap<NodeId, Rational>,
}

impl GCAssignment {
    pub fn from_pairs(pairs: &[(&str, Rational)]) -> GCAssignment {
        GCAssignment {
            values: pairs
                .iter()
                .map(|(n, v)| (n.to_string(), v.clone()))
                .collect(),
        }
    }

    pub fn get(&self, node: &str) -> Option<&Rational> {
        self.values.get(node)
    }
}

/// Per-gate verdicts of the approximate verifier.
#[derive(Debug, Clone)]
pub struct GCVerdicts {
    pub satisfied: Vec<bool>,
}

impl GCVerdicts {
    pub fn all_satisfied(&self) -> bool {
        self.satisfied.iter().all(|s| *s)
    }

    pub fn violated_gates(&self) -> Vec<usize> {
        self.satisfied
            .iter()
            .enumerate()
            .filter(|(_, s)| !**s)
            .map(|(i, _)| i)
            .collect()
    }
}

fn within(x: &Rational, center: &Rational, eps: &Rational) -> bool {
    (x - center).abs() <= *eps
}

/// Checks every gate of the instance against the ε-constraint table with
/// exact rational arithmetic. Conditional gates impose no constraint inside
/// their dead bands.
pub fn verify_gcircuit(
    inst: &GCInstance,
    x: &GCAssignment,
    eps: &Rational,
) -> Result<GCVerdicts, Error> {
    if eps < &Rational::zero() || eps >= &rat(1, 1) {
        return Err(Error::Precondition(format!(
            "epsilon must lie in [0, 1), got {eps}"
        )));
    }
    let one = rat(1, 1);
    for node in &inst.nodes {
        match x.get(node) {
            None => return Err(Error::PartialAssignment(node.clone())),
            Some(v) if v < &Rational::zero() || v > &one => {
                return Err(Error::Precondition(format!(
                    "value of {node} outside [0, 1]"
                )));
            }
            _ => {}
        }
    }
    let satisfied = inst
        .gates
        .iter()
        .map(|g| {
            let w = &x.values[&g.output];
            let input = |i: usize| &x.values[&g.inputs[i]];
            match g.gate_type {
                GCGateType::Const => within(w, g.constant.as_ref().unwrap(), eps),
                GCGateType::MulC => within(w, &(input(0) * g.constant.as_ref().unwrap()), eps),
                GCGateType::Eq => within(w, input(0), eps),
                GCGateType::Add => {
                    let sum = input(0) + input(1);
                    within(w, if sum > one { &one } else { &sum }, eps)
                }
                GCGateType::Sub => {
                    let diff = input(0) - input(1);
                    let zero = Rational::zero();
                    within(w, if diff < zero { &zero } else { &diff }, eps)
                }
                GCGateType::Less => {
                    let (u, v) = (input(0), input(1));
                    if *u < v - eps {
                        within(w, &one, eps)
                    } else if *u > v + eps {
                        within(w, &Rational::zero(), eps)
                    } else {
                        true
                    }
                }
                GCGateType::Or => {
                    let (u, v) = (input(0), input(1));
                    let hi = &one - eps;
                    let mut ok = true;
                    if *u >= hi || *v >= hi {
                        ok &= within(w, &one, eps);
                    }
                    if u <= eps && v <= eps {
                        ok &= within(w, &Rational::zero(), eps);
                    }
                    ok
                }
                GCGateType::And => {
                    let (u, v) = (input(0), input(1));
                    let hi = &one - eps;
                    let mut ok = true;
                    if *u >= hi && *v >= hi {
                        ok &= within(w, &one, eps);
                    }
                    if u <= eps || v <= eps {
                        ok &= within(w, &Rational::zero(), eps);
                    }
                    ok
                }
                GCGateType::Not => {
                    let u = input(0);
                    if u <= eps {
                        within(w, &one, eps)
                    } else if *u >= &one - eps {
                        within(w, &Rational::zero(), eps)
                    } else {
                        true
                    }
                }
            }
        })
        .collect();
    Ok(GCVerdicts { satisfied })
}

/// Per-source-gate record of the gadget a reduction emitted.
#[derive(Debug, Clone)]
pub enum GCGadget {
    /// `w = (u + v < 5/9)` via `s = u + v`, `t = 5/9`, `w = s < t`.
    Nor {
        u: NodeId,
        v: NodeId,
        w: NodeId,
        s: NodeId,
        t: NodeId,
    },
    /// One branch of PURIFY: `out = (u > c)` via `a = c`, `b = (u < a)`,
    /// `out = not b`.
    Threshold {
        u: NodeId,
        out: NodeId,
        a: NodeId,
        b: NodeId,
        c: Rational,
    },
}

/// Node correspondence and gadget inventory of [`reduce_pc_to_gcircuit`].
#[derive(Debug, Clone)]
pub struct GCReductionMap {
    /// Original pure-circuit nodes (reused verbatim in the output).
    pub original_nodes: BTreeSet<NodeId>,
    pub gadgets: Vec<GCGadget>,
}

pub const NOR_THRESHOLD_NUM: i64 = 5;
pub const NOR_THRESHOLD_DEN: i64 = 9;

/// Reduces a robust pure circuit over `{NOR, PURIFY}` to a generalized
/// circuit. One NOR becomes three gates with two fresh nodes; one PURIFY
/// becomes six gates (two `Gc`, two `G<`, two `Gnot`) with four fresh nodes.
pub fn reduce_pc_to_gcircuit(inst: &PCInstance) -> Result<(GCInstance, GCReductionMap), Error> {
    if inst.semantics != Semantics::Robust {
        return Err(Error::Precondition(
            "reduction requires robust semantics".to_string(),
        ));
    }
    fn fresh(
        hint: &str,
        counter: &mut usize,
        used: &mut BTreeSet<NodeId>,
    ) -> NodeId {
        loop {
            let name = format!("gc/{hint}/{counter}");
            *counter += 1;
            if used.insert(name.clone()) {
                return name;
            }
        }
    }
    fn threshold(
        u: &NodeId,
        out: &NodeId,
        c: Rational,
        gates: &mut Vec<GCGate>,
        counter: &mut usize,
        used: &mut BTreeSet<NodeId>,
    ) -> GCGadget {
        let a = fresh("a", counter, used);
        let b = fresh("b", counter, used);
        gates.push(GCGate::new(GCGateType::Const, &[], &a, Some(c.clone())));
        gates.push(GCGate::new(GCGateType::Less, &[u, &a], &b, None));
        gates.push(GCGate::new(GCGateType::Not, &[&b], out, None));
        GCGadget::Threshold {
            u: u.clone(),
            out: out.clone(),
            a,
            b,
            c,
        }
    }
    let mut gates: Vec<GCGate> = Vec::new();
    let mut gadgets: Vec<GCGadget> = Vec::new();
    let mut used: BTreeSet<NodeId> = inst.nodes.clone();
    let mut counter = 0usize;
    for g in &inst.gates {
        match g.gate_type {
            GateType::Nor => {
                let (u, v, w) = (&g.inputs[0], &g.inputs[1], &g.outputs[0]);
                let s = fresh("s", &mut counter, &mut used);
                let t = fresh("t", &mut counter, &mut used);
                gates.push(GCGate::new(GCGateType::Add, &[u, v], &s, None));
                gates.push(GCGate::new(
                    GCGateType::Const,
                    &[],
                    &t,
                    Some(rat(NOR_THRESHOLD_NUM, NOR_THRESHOLD_DEN)),
                ));
                gates.push(GCGate::new(GCGateType::Less, &[&s, &t], w, None));
                gadgets.push(GCGadget::Nor {
                    u: u.clone(),
                    v: v.clone(),
                    w: w.clone(),
                    s,
                    t,
                });
            }
            GateType::Purify => {
                let u = &g.inputs[0];
                for (out, c) in [(&g.outputs[0], rat(3, 10)), (&g.outputs[1], rat(7, 10))] {
                    gadgets.push(threshold(u, out, c, &mut gates, &mut counter, &mut used));
                }
            }
            other => {
                return Err(Error::UnsupportedGateSet(format!(
                    "{} gate cannot be reduced directly; rewrite to {{PURIFY, NOR}} first",
                    other.name()
                )));
            }
        }
    }
    let gc = GCInstance::from_gates(gates);
    debug_assert!(validate_gc_instance(&gc).is_ok());
    Ok((
        gc,
        GCReductionMap {
            original_nodes: inst.nodes.clone(),
            gadgets,
        },
    ))
}

/// Rounds a rational to a pure-circuit value: `[0, ε] ↦ 0`, `[1-ε, 1] ↦ 1`,
/// everything else `⊥`.
pub fn decode_gc_value(x: &Rational, eps: &Rational) -> Value {
    if x <= eps {
        Value::Zero
    } else if *x >= rat(1, 1) - eps {
        Value::One
    } else {
        Value::Bot
    }
}

/// Decodes the original-node values of a generalized-circuit solution.
pub fn decode_gc_solution(
    map: &GCReductionMap,
    x: &GCAssignment,
    eps: &Rational,
) -> Result<PCAssignment, Error> {
    if eps >= &rat(1, 10) {
        return Err(Error::Precondition(format!(
            "decoding requires epsilon < 1/10, got {eps}"
        )));
    }
    let mut out = PCAssignment::from_pairs(&[]);
    for node in &map.original_nodes {
        let v = x
            .get(node)
            .ok_or_else(|| Error::PartialAssignment(node.clone()))?;
        out.set(node, decode_gc_value(v, eps));
    }
    Ok(out)
}

/// Searches for an ε-solution of the reduced instance that encodes a given
/// satisfying pure-circuit assignment: pure nodes map to exact 0/1, each ⊥
/// node tries a palette of landmark values (0, ε, the gadget thresholds
/// 3/10, 5/9 and 7/10, 1/2, 1-ε, 1), and gadget internals are filled by
/// propagation. Returns `None` if the budget runs out or no palette
/// combination verifies — not every satisfying pure-circuit assignment has
/// an ε-encoding at all (NOR forces its output near 1 whenever both encoded
/// inputs are small, even where the robust gate would allow ⊥).
pub fn encode_pc_witness_gc(
    pc: &PCInstance,
    map: &GCReductionMap,
    a: &PCAssignment,
    eps: &Rational,
) -> Result<Option<GCAssignment>, Error> {
    if eps > &rat(1, 10) {
        return Err(Error::Precondition(format!(
            "witness encoding requires epsilon <= 1/10, got {eps}"
        )));
    }
    let verdict = crate::circuit::verify_assignment(pc, a)?;
    if !verdict.all_satisfied() {
        return Err(Error::Precondition(
            "assignment does not satisfy the pure-circuit instance".to_string(),
        ));
    }
    let palette: Vec<Rational> = vec![
        rat(1, 2),
        Rational::zero(),
        rat(1, 1),
        eps.clone(),
        rat(1, 1) - eps,
        rat(3, 10),
        rat(NOR_THRESHOLD_NUM, NOR_THRESHOLD_DEN),
        rat(7, 10),
    ];
    let bot_nodes: Vec<&NodeId> = map
        .original_nodes
        .iter()
        .filter(|n| a.get(n) == Some(Value::Bot))
        .collect();
    let budget = 200_000usize;
    let mut tried = 0usize;
    let gc = reduced_instance_from_map(map);
    let mut choice = vec![0usize; bot_nodes.len()];
    loop {
        tried += 1;
        if tried > budget {
            return Ok(None);
        }
        let mut x = GCAssignment {
            values: BTreeMap::new(),
        };
        for node in &map.original_nodes {
            let v = match a.get(node).unwrap() {
                Value::Zero => Rational::zero(),
                Value::One => rat(1, 1),
                Value::Bot => {
                    let idx = bot_nodes.iter().position(|b| *b == node).unwrap();
                    palette[choice[idx]].clone()
                }
            };
            x.values.insert(node.clone(), v);
        }
        fill_gadget_internals(map, eps, &mut x);
        if verify_gcircuit(&gc, &x, eps)?.all_satisfied() {
            return Ok(Some(x));
        }
        // Next palette combination, odometer style.
        let mut i = choice.len();
        while i > 0 && choice[i - 1] == palette.len() - 1 {
            choice[i - 1] = 0;
            i -= 1;
        }
        if i == 0 {
            return Ok(None);
        }
        choice[i - 1] += 1;
    }
}

/// Rebuilds the reduced instance from the gadget inventory (used by the
/// encoder so it only needs the map).
fn reduced_instance_from_map(map: &GCReductionMap) -> GCInstance {
    let mut gates = Vec::new();
    for g in &map.gadgets {
        match g {
            GCGadget::Nor { u, v, w, s, t } => {
                gates.push(GCGate::new(GCGateType::Add, &[u, v], s, None));
                gates.push(GCGate::new(
                    GCGateType::Const,
                    &[],
                    t,
                    Some(rat(NOR_THRESHOLD_NUM, NOR_THRESHOLD_DEN)),
                ));
                gates.push(GCGate::new(GCGateType::Less, &[s, t], w, None));
            }
            GCGadget::Threshold { u, out, a, b, c } => {
                gates.push(GCGate::new(GCGateType::Const, &[], a, Some(c.clone())));
                gates.push(GCGate::new(GCGateType::Less, &[u, a], b, None));
                gates.push(GCGate::new(GCGateType::Not, &[b], out, None));
            }
        }
    }
    GCInstance::from_gates(gates)
}

/// Deterministic internal values given the original-node values: sums and
/// constants are exact, comparison outputs snap to 0/1 outside the dead band
/// and to 1/2 inside it (where they are unconstrained and constrain nothing).
fn fill_gadget_internals(map: &GCReductionMap, eps: &Rational, x: &mut GCAssignment) {
    let one = rat(1, 1);
    for g in &map.gadgets {
        match g {
            GCGadget::Nor { u, v, s, t, .. } => {
                let sum = &x.values[u] + &x.values[v];
                x.values
                    .insert(s.clone(), if sum > one { one.clone() } else { sum });
                x.values
                    .insert(t.clone(), rat(NOR_THRESHOLD_NUM, NOR_THRESHOLD_DEN));
            }
            GCGadget::Threshold { u, a, b, c, .. } => {
                x.values.insert(a.clone(), c.clone());
                let uv = &x.values[u];
                let bv = if *uv < c - eps {
                    one.clone()
                } else if *uv > c + eps {
                    Rational::zero()
                } else {
                    rat(1, 2)
                };
                x.values.insert(b.clone(), bv);
            }
        }
    }
}

/// Which gadget a grid case-check exercises.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GCGadgetKind {
    Nor,
    Purify,
}

/// Outcome of [`gadget_case_check`].
#[derive(Debug, Clone)]
pub struct CaseCheckReport {
    pub cases_checked: u64,
    pub failures: Vec<String>,
}

impl CaseCheckReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Grid value `i/d` decoded at integer scale: `i ≤ e` is 0, `i ≥ d - e` is 1.
fn decode_grid(i: i64, d: i64, e: i64) -> Value {
    if i <= e {
        Value::Zero
    } else if i >= d - e {
        Value::One
    } else {
        Value::Bot
    }
}

/// Grid positions consistent with a `Gc` constant: `i/d = c ± e/d`.
fn const_range(c: &Rational, d: i64, e: i64) -> (i64, i64) {
    let lo = crate::rational::ceil_int(&((c - rat(e, d)) * rat(d, 1)));
    let hi = crate::rational::floor_int(&((c + rat(e, d)) * rat(d, 1)));
    (lo.max(0), hi.min(d))
}

/// Exhaustively checks one gadget on the grid `{0, 1/d, …, 1}` at `ε = e/d`:
/// for every grid input and every internal valuation consistent with the
/// ε-constraints at grid resolution, the decoded outputs must satisfy the
/// robust pure-circuit gate table. `eps` must be a multiple of `1/d`.
pub fn gadget_case_check(
    kind: GCGadgetKind,
    eps: &Rational,
    grid_denominator: i64,
) -> Result<CaseCheckReport, Error> {
    let d = grid_denominator;
    let e_rat = eps * rat(d, 1);
    if !e_rat.is_integer() || e_rat < Rational::zero() {
        return Err(Error::Precondition(format!(
            "epsilon {eps} is not a nonneg multiple of 1/{d}"
        )));
    }
    let e = i64::try_from(e_rat.to_integer()).expect("epsilon scale fits in i64");
    let mut failures = Vec::new();
    let mut cases = 0u64;
    match kind {
        GCGadgetKind::Nor => {
            let (t_lo, t_hi) = const_range(&rat(NOR_THRESHOLD_NUM, NOR_THRESHOLD_DEN), d, e);
            for u in 0..=d {
                for v in 0..=d {
                    let (du, dv) = (decode_grid(u, d, e), decode_grid(v, d, e));
                    // Robust NOR forces the output only when a 1 dominates or
                    // both inputs are pure.
                    let required = if du == Value::One || dv == Value::One {
                        Some(Value::Zero)
                    } else if du == Value::Zero && dv == Value::Zero {
                        Some(Value::One)
                    } else {
                        None
                    };
                    let Some(req) = required else { continue };
                    let sum = (u + v).min(d);
                    for s in (sum - e).max(0)..=(sum + e).min(d) {
                        for t in t_lo..=t_hi {
                            cases += 1;
                            // Allowed outputs of G<(s, t).
                            let ok = if s < t - e {
                                req == Value::One
                            } else if s > t + e {
                                req == Value::Zero
                            } else {
                                false // dead band: output unconstrained
                            };
                            if !ok && failures.len() < 16 {
                                failures.push(format!(
                                    "NOR u={u}/{d} v={v}/{d} s={s}/{d} t={t}/{d}: output not forced to {req:?}"
                                ));
                            }
                        }
                    }
                }
            }
        }
        GCGadgetKind::Purify => {
            for u in 0..=d {
                let du = decode_grid(u, d, e);
                let v_set = threshold_decodes(u, &rat(3, 10), d, e, &mut cases);
                let w_set = threshold_decodes(u, &rat(7, 10), d, e, &mut cases);
                let ok = match du {
                    Value::Zero => {
                        v_set == BTreeSet::from([Value::Zero])
                            && w_set == BTreeSet::from([Value::Zero])
                    }
                    Value::One => {
                        v_set == BTreeSet::from([Value::One])
                            && w_set == BTreeSet::from([Value::One])
                    }
                    // Bot input: some output must always be pure, which fails
                    // exactly when both branches can leave theirs undecoded.
                    Value::Bot => {
                        !(v_set.contains(&Value::Bot) && w_set.contains(&Value::Bot))
                    }
                };
                if !ok && failures.len() < 16 {
                    failures.push(format!(
                        "PURIFY u={u}/{d}: v decodes {v_set:?}, w decodes {w_set:?}"
                    ));
                }
            }
        }
    }
    Ok(CaseCheckReport {
        cases_checked: cases,
        failures,
    })
}

/// Decoded values reachable by the output of one threshold branch
/// (`out = u > c`) over all grid-consistent internal valuations.
fn threshold_decodes(
    u: i64,
    c: &Rational,
    d: i64,
    e: i64,
    cases: &mut u64,
) -> BTreeSet<Value> {
    let mut out = BTreeSet::new();
    let (a_lo, a_hi) = const_range(c, d, e);
    for a in a_lo..=a_hi {
        // Possible G<(u, a) outputs.
        let (b_lo, b_hi) = if u < a - e {
            (d - e, d)
        } else if u > a + e {
            (0, e)
        } else {
            (0, d)
        };
        for b in b_lo..=b_hi {
            *cases += 1;
            // Possible Gnot(b) outputs, as an interval.
            let (o_lo, o_hi) = if b <= e {
                (d - e, d)
            } else if b >= d - e {
                (0, e)
            } else {
                (0, d)
            };
            if o_lo <= e {
                out.insert(Value::Zero);
            }
            if o_hi >= d - e {
                out.insert(Value::One);
            }
            // Bot is reachable when the interval meets (e, d-e).
            if o_lo.max(e + 1) <= o_hi.min(d - e - 1) {
                out.insert(Value::Bot);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{verify_assignment, Gate};

    fn gc(t: GCGateType, ins: &[&str], out: &str, c: Option<Rational>) -> GCGate {
        GCGate::new(t, ins, out, c)
    }

    #[test]
    fn verifier_table_rows() {
        let inst = GCInstance::from_gates(vec![gc(
            GCGateType::Const,
            &[],
            "w",
            Some(rat(1, 2)),
        )]);
        let x = GCAssignment::from_pairs(&[("w", rat(11, 20))]);
        assert!(verify_gcircuit(&inst, &x, &rat(1, 10)).unwrap().all_satisfied());
        let x = GCAssignment::from_pairs(&[("w", rat(7, 10))]);
        assert!(!verify_gcircuit(&inst, &x, &rat(1, 10)).unwrap().all_satisfied());

        let inst = GCInstance::from_gates(vec![
            gc(GCGateType::Const, &[], "u", Some(rat(1, 5))),
            gc(GCGateType::Const, &[], "v", Some(rat(1, 2))),
            gc(GCGateType::Less, &["u", "v"], "w", None),
        ]);
        let x = GCAssignment::from_pairs(&[
            ("u", rat(1, 5)),
            ("v", rat(1, 2)),
            ("w", rat(19, 20)),
        ]);
        assert!(verify_gcircuit(&inst, &x, &rat(1, 10)).unwrap().all_satisfied());
        // 1/5 < 1/2 - 1/10 forces w near 1, so w = 1/2 violates.
        let x = GCAssignment::from_pairs(&[
            ("u", rat(1, 5)),
            ("v", rat(1, 2)),
            ("w", rat(1, 2)),
        ]);
        let verdicts = verify_gcircuit(&inst, &x, &rat(1, 10)).unwrap();
        assert_eq!(verdicts.violated_gates(), vec![2]);

        let inst = GCInstance::from_gates(vec![
            gc(GCGateType::Const, &[], "u", Some(rat(7, 10))),
            gc(GCGateType::Const, &[], "v", Some(rat(6, 10))),
            gc(GCGateType::Add, &["u", "v"], "w", None),
        ]);
        let x = GCAssignment::from_pairs(&[
            ("u", rat(7, 10)),
            ("v", rat(6, 10)),
            ("w", rat(1, 1)),
        ]);
        assert!(verify_gcircuit(&inst, &x, &rat(1, 10)).unwrap().all_satisfied());
    }

    #[test]
    fn verifier_logic_gates_and_errors() {
        let inst = GCInstance::from_gates(vec![
            gc(GCGateType::Const, &[], "u", Some(rat(1, 1))),
            gc(GCGateType::Const, &[], "v", Some(Rational::zero())),
            gc(GCGateType::And, &["u", "v"], "w", None),
            gc(GCGateType::Or, &["u", "v"], "z", None),
            gc(GCGateType::Not, &["u"], "nu", None),
            gc(GCGateType::Sub, &["v", "u"], "s", None),
            gc(GCGateType::MulC, &["u"], "h", Some(rat(1, 2))),
            gc(GCGateType::Eq, &["u"], "cu", None),
        ]);
        let eps = rat(1, 20);
        let x = GCAssignment::from_pairs(&[
            ("u", rat(1, 1)),
            ("v", Rational::zero()),
            ("w", rat(1, 20)),
            ("z", rat(19, 20)),
            ("nu", Rational::zero()),
            ("s", Rational::zero()),
            ("h", rat(1, 2)),
            ("cu", rat(39, 40)),
        ]);
        assert!(verify_gcircuit(&inst, &x, &eps).unwrap().all_satisfied());
        let mut partial = x.clone();
        partial.values.remove("cu");
        assert!(matches!(
            verify_gcircuit(&inst, &partial, &eps),
            Err(Error::PartialAssignment(_))
        ));
        let mut out_of_range = x.clone();
        out_of_range.values.insert("cu".to_string(), rat(3, 2));
        assert!(verify_gcircuit(&inst, &out_of_range, &eps).is_err());
    }

    fn purify_nor_pc() -> PCInstance {
        PCInstance::from_gates(
            vec![
                Gate::new(GateType::Purify, &["u"], &["v", "w"]),
                Gate::new(GateType::Nor, &["v", "w"], &["u"]),
            ],
            Semantics::Robust,
        )
    }

    #[test]
    fn reduction_shape() {
        let (gc_inst, map) = reduce_pc_to_gcircuit(&purify_nor_pc()).unwrap();
        assert!(validate_gc_instance(&gc_inst).is_ok());
        // PURIFY: 6 gates + 4 fresh; NOR: 3 gates + 2 fresh; originals u,v,w.
        assert_eq!(gc_inst.gates.len(), 9);
        assert_eq!(gc_inst.nodes.len(), 3 + 4 + 2);
        assert_eq!(map.gadgets.len(), 3);
        let nonrobust = PCInstance::from_gates(
            purify_nor_pc().gates,
            Semantics::NonRobust,
        );
        assert!(reduce_pc_to_gcircuit(&nonrobust).is_err());
        let with_not = PCInstance::from_gates(
            vec![
                Gate::new(GateType::Not, &["a"], &["b"]),
                Gate::new(GateType::Not, &["b"], &["a"]),
            ],
            Semantics::Robust,
        );
        assert!(matches!(
            reduce_pc_to_gcircuit(&with_not),
            Err(Error::UnsupportedGateSet(_))
        ));
    }

    #[test]
    fn decode_rules() {
        let eps = rat(1, 10);
        // decode itself is defined for eps < 1/10; the raw value decoder:
        assert_eq!(decode_gc_value(&rat(1, 20), &eps), Value::Zero);
        assert_eq!(decode_gc_value(&rat(1, 2), &eps), Value::Bot);
        assert_eq!(decode_gc_value(&rat(19, 20), &eps), Value::One);
        let (_, map) = reduce_pc_to_gcircuit(&purify_nor_pc()).unwrap();
        let x = GCAssignment {
            values: map
                .original_nodes
                .iter()
                .map(|n| (n.clone(), rat(1, 2)))
                .collect(),
        };
        assert!(decode_gc_solution(&map, &x, &rat(1, 10)).is_err());
        let decoded = decode_gc_solution(&map, &x, &rat(9, 100)).unwrap();
        assert_eq!(decoded.get("u"), Some(Value::Bot));
    }

    #[test]
    fn nor_gadget_forward_example() {
        // NOR with inputs (0,0) and output 1: s=0, t=5/9, w=1 verifies.
        let gc_inst = GCInstance::from_gates(vec![
            gc(GCGateType::Const, &[], "u", Some(Rational::zero())),
            gc(GCGateType::Const, &[], "v", Some(Rational::zero())),
            gc(GCGateType::Add, &["u", "v"], "s", None),
            gc(GCGateType::Const, &[], "t", Some(rat(5, 9))),
            gc(GCGateType::Less, &["s", "t"], "w", None),
        ]);
        let x = GCAssignment::from_pairs(&[
            ("u", Rational::zero()),
            ("v", Rational::zero()),
            ("s", Rational::zero()),
            ("t", rat(5, 9)),
            ("w", rat(1, 1)),
        ]);
        assert!(verify_gcircuit(&gc_inst, &x, &rat(9, 100))
            .unwrap()
            .all_satisfied());
    }

    #[test]
    fn witness_encoding_round_trip() {
        let pc = purify_nor_pc();
        let eps = rat(9, 100);
        let (gc_inst, map) = reduce_pc_to_gcircuit(&pc).unwrap();
        let solutions = crate::solve::enumerate_solutions(&pc, 16).unwrap();
        assert!(!solutions.is_empty());
        // Not every satisfying assignment is encodable (see the encoder
        // docs), but every produced witness must verify and round-trip on
        // pure coordinates, and at least one solution must encode.
        let mut successes = 0;
        for a in &solutions {
            let Some(x) = encode_pc_witness_gc(&pc, &map, a, &eps).unwrap() else {
                continue;
            };
            successes += 1;
            assert!(verify_gcircuit(&gc_inst, &x, &eps).unwrap().all_satisfied());
            let decoded = decode_gc_solution(&map, &x, &eps).unwrap();
            for node in &map.original_nodes {
                let orig = a.get(node).unwrap();
                if orig.is_pure() {
                    assert_eq!(decoded.get(node), Some(orig), "node {node}");
                }
            }
        }
        assert!(successes >= 1);
        // Rejects non-satisfying assignments.
        let bad = PCAssignment::from_pairs(&[
            ("u", Value::One),
            ("v", Value::One),
            ("w", Value::One),
        ]);
        assert!(encode_pc_witness_gc(&pc, &map, &bad, &eps).is_err());
    }

    #[test]
    fn decoded_gc_solutions_satisfy_pure_circuit() {
        // Contract test: valid epsilon-solutions of the reduced instance
        // decode to satisfying pure-circuit assignments. Witnesses come from
        // the encoder across all pure-circuit solutions.
        let pc = purify_nor_pc();
        let eps = rat(9, 100);
        let (gc_inst, map) = reduce_pc_to_gcircuit(&pc).unwrap();
        let mut witnesses = 0;
        for a in crate::solve::enumerate_solutions(&pc, 16).unwrap() {
            let Some(x) = encode_pc_witness_gc(&pc, &map, &a, &eps).unwrap() else {
                continue;
            };
            witnesses += 1;
            assert!(verify_gcircuit(&gc_inst, &x, &eps).unwrap().all_satisfied());
            let decoded = decode_gc_solution(&map, &x, &eps).unwrap();
            assert!(verify_assignment(&pc, &decoded).unwrap().all_satisfied());
        }
        assert!(witnesses >= 1);
    }

    #[test]
    fn case_check_passes_below_thresholds() {
        let report = gadget_case_check(GCGadgetKind::Nor, &rat(9, 100), 100).unwrap();
        assert!(report.ok(), "{:?}", report.failures);
        assert!(report.cases_checked > 0);
        let report = gadget_case_check(GCGadgetKind::Purify, &rat(9, 100), 100).unwrap();
        assert!(report.ok(), "{:?}", report.failures);
    }

    #[test]
    fn case_check_fails_at_thresholds() {
        // NOR breaks at eps = 1/9 (grid 1/99 keeps eps on-grid).
        let report = gadget_case_check(GCGadgetKind::Nor, &rat(11, 99), 99).unwrap();
        assert!(!report.ok());
        // PURIFY breaks at eps = 1/10.
        let report = gadget_case_check(GCGadgetKind::Purify, &rat(1, 10), 100).unwrap();
        assert!(!report.ok());
        assert!(report.failures.iter().any(|f| f.contains("u=50/100")));
    }

    #[test]
    fn purify_tightness_witness_at_one_tenth() {
        // At eps = 1/10 and input exactly 1/2, both comparisons can sit in
        // their dead bands and leave both outputs undecoded.
        let eps = rat(1, 10);
        let gc_inst = GCInstance::from_gates(vec![
            gc(GCGateType::Const, &[], "u", Some(rat(1, 2))),
            gc(GCGateType::Const, &[], "a3", Some(rat(3, 10))),
            gc(GCGateType::Less, &["u", "a3"], "b3", None),
            gc(GCGateType::Not, &["b3"], "v", None),
            gc(GCGateType::Const, &[], "a7", Some(rat(7, 10))),
            gc(GCGateType::Less, &["u", "a7"], "b7", None),
            gc(GCGateType::Not, &["b7"], "w", None),
        ]);
        let x = GCAssignment::from_pairs(&[
            ("u", rat(1, 2)),
            ("a3", rat(2, 5)),
            ("b3", rat(1, 2)),
            ("v", rat(1, 2)),
            ("a7", rat(3, 5)),
            ("b7", rat(1, 2)),
            ("w", rat(1, 2)),
        ]);
        assert!(verify_gcircuit(&gc_inst, &x, &eps).unwrap().all_satisfied());
        assert_eq!(decode_gc_value(x.get("v").unwrap(), &eps), Value::Bot);
        assert_eq!(decode_gc_value(x.get("w").unwrap(), &eps), Value::Bot);
    }
}
