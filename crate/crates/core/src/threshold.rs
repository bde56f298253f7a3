//! Threshold games.
//!
//! A threshold game lives on a directed graph; every node picks a value in
//! [0, 1] and, at an ε-approximate equilibrium, must play ≤ ε when its
//! in-neighbourhood sums above 1/2 + ε, ≥ 1 − ε when it sums below 1/2 − ε,
//! and is free inside the band.  This module provides the model, an exact
//! verifier, the three-step polynomial algorithm for ε = 1/6, the gadget
//! reduction from pure-circuit instances over {NOT, NOR, PURIFY} (sound for
//! every ε < 1/6, with in/out-degrees ≤ 2 on restricted inputs), a decoder,
//! a forward-witness encoder, and scaled-integer gadget case checks.

use std::collections::{BTreeMap, BTreeSet};

use num::{Signed, ToPrimitive, Zero};

use crate::circuit::{GateType, NodeId, PCAssignment, PCInstance, Value};
use crate::circuit::verify_assignment;
use crate::error::Error;
use crate::rational::{format_rational, rat, Rational};

/// A threshold game: a directed graph.  `N_v` is the set of in-neighbours.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThresholdGame {
    /// All nodes (isolated nodes allowed).
    pub nodes: BTreeSet<NodeId>,
    /// Directed edges `(u, v)` meaning `u` contributes to `v`'s in-sum.
    pub edges: BTreeSet<(NodeId, NodeId)>,
}

impl ThresholdGame {
    /// Empty game.
    pub fn new() -> ThresholdGame {
        ThresholdGame { nodes: BTreeSet::new(), edges: BTreeSet::new() }
    }

    /// Adds a node.
    pub fn add_node(&mut self, v: &str) {
        self.nodes.insert(v.to_string());
    }

    /// Adds an edge (registering both endpoints).
    pub fn add_edge(&mut self, u: &str, v: &str) {
        self.nodes.insert(u.to_string());
        self.nodes.insert(v.to_string());
        self.edges.insert((u.to_string(), v.to_string()));
    }

    /// In-neighbours of `v`.
    pub fn in_neighbors(&self, v: &str) -> Vec<NodeId> {
        self.edges
            .iter()
            .filter(|(_, b)| b == v)
            .map(|(a, _)| a.clone())
            .collect()
    }

    /// `(in_degree, out_degree)` of a node.
    pub fn degrees(&self, v: &str) -> (usize, usize) {
        let ind = self.edges.iter().filter(|(_, b)| b == v).count();
        let outd = self.edges.iter().filter(|(a, _)| a == v).count();
        (ind, outd)
    }
}

impl Default for ThresholdGame {
    fn default() -> Self {
        Self::new()
    }
}

/// A value assignment for a threshold game.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TGAssignment {
    /// Value per node, each in [0, 1].
    pub values: BTreeMap<NodeId, Rational>,
}

impl TGAssignment {
    /// Builds an assignment from literal pairs.
    pub fn from_pairs(pairs: &[(&str, Rational)]) -> TGAssignment {
        TGAssignment {
            values: pairs.iter().map(|(n, r)| (n.to_string(), r.clone())).collect(),
        }
    }

    /// Value of a node, if assigned.
    pub fn get(&self, node: &str) -> Option<&Rational> {
        self.values.get(node)
    }
}

/// Per-node equilibrium verdicts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TGVerdicts {
    /// `true` iff the node's three-case condition holds.
    pub satisfied: BTreeMap<NodeId, bool>,
}

impl TGVerdicts {
    /// All nodes satisfied?
    pub fn all_satisfied(&self) -> bool {
        self.satisfied.values().all(|&b| b)
    }

    /// Nodes whose condition fails.
    pub fn violating_nodes(&self) -> Vec<NodeId> {
        self.satisfied.iter().filter(|(_, &b)| !b).map(|(n, _)| n.clone()).collect()
    }
}

/// Exact ε-approximate-equilibrium verifier.  Strict inequalities select the
/// forced cases; values are free inside the band [1/2 − ε, 1/2 + ε].
pub fn verify_threshold_eq(
    g: &ThresholdGame,
    x: &TGAssignment,
    eps: &Rational,
) -> Result<TGVerdicts, Error> {
    if eps.is_negative() || *eps >= rat(1, 2) {
        return Err(Error::Precondition("epsilon must lie in [0, 1/2)".into()));
    }
    for v in &g.nodes {
        let val = x
            .get(v)
            .ok_or_else(|| Error::PartialAssignment(format!("no value for node {v}")))?;
        if val.is_negative() || *val > rat(1, 1) {
            return Err(Error::InvalidInstance(format!(
                "value {} of node {v} is outside [0, 1]",
                format_rational(val)
            )));
        }
    }
    let half = rat(1, 2);
    let mut satisfied = BTreeMap::new();
    for v in &g.nodes {
        let sum: Rational = g.in_neighbors(v).iter().map(|u| x.get(u).unwrap().clone()).sum();
        let val = x.get(v).unwrap();
        let ok = if sum > &half + eps {
            val <= eps
        } else if sum < &half - eps {
            val >= &(rat(1, 1) - eps)
        } else {
            true
        };
        satisfied.insert(v.clone(), ok);
    }
    Ok(TGVerdicts { satisfied })
}

// ---------------------------------------------------------------------------
// The 1/6 algorithm
// ---------------------------------------------------------------------------

/// Computes a 1/6-approximate equilibrium of any threshold game in polynomial
/// time: nodes of in-degree ≥ 2 get 1/6 (their incoming edges are dropped),
/// remaining directed cycles get 1/2, and the rest is assigned by a
/// topological sweep (1/6 when the original in-sum exceeds 1/2 + 1/6,
/// otherwise 1).
pub fn algo_sixth(g: &ThresholdGame) -> TGAssignment {
    let mut values: BTreeMap<NodeId, Rational> = BTreeMap::new();
    // Original in-neighbourhoods (the equilibrium condition always uses these).
    let preds: BTreeMap<NodeId, Vec<NodeId>> =
        g.nodes.iter().map(|v| (v.clone(), g.in_neighbors(v))).collect();
    // Step 1: high in-degree nodes.
    for v in &g.nodes {
        if preds[v].len() >= 2 {
            values.insert(v.clone(), rat(1, 6));
        }
    }
    // After step 1, every unassigned node has at most one in-neighbour.
    let pred_of = |v: &NodeId| -> Option<NodeId> { preds[v].first().cloned() };
    // Step 2: walk predecessor chains backwards to find the remaining cycles.
    let mut done: BTreeSet<NodeId> = values.keys().cloned().collect();
    for start in &g.nodes {
        if done.contains(start) {
            continue;
        }
        let mut path: Vec<NodeId> = Vec::new();
        let mut on_path: BTreeSet<NodeId> = BTreeSet::new();
        let mut cur = start.clone();
        loop {
            if done.contains(&cur) || values.contains_key(&cur) {
                break;
            }
            if on_path.contains(&cur) {
                // Found a cycle: everything from the first occurrence of cur.
                let pos = path.iter().position(|n| n == &cur).unwrap();
                for n in &path[pos..] {
                    values.insert(n.clone(), rat(1, 2));
                }
                break;
            }
            on_path.insert(cur.clone());
            path.push(cur.clone());
            match pred_of(&cur) {
                Some(p) => cur = p,
                None => break,
            }
        }
        done.extend(path);
    }
    // Step 3: topological sweep over the remaining acyclic part.
    loop {
        let mut progressed = false;
        for v in &g.nodes {
            if values.contains_key(v) {
                continue;
            }
            if !preds[v].iter().all(|u| values.contains_key(u)) {
                continue;
            }
            let sum: Rational = preds[v].iter().map(|u| values[u].clone()).sum();
            let val = if sum > rat(1, 2) + rat(1, 6) { rat(1, 6) } else { rat(1, 1) };
            values.insert(v.clone(), val);
            progressed = true;
        }
        if !progressed {
            break;
        }
    }
    TGAssignment { values }
}

// ---------------------------------------------------------------------------
// Reduction from pure-circuit instances
// ---------------------------------------------------------------------------

/// The fresh nodes of one PURIFY gadget (u is the input, v and w the outputs).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PurifyInternals {
    /// Gate input node.
    pub u: NodeId,
    /// First gate output node.
    pub v: NodeId,
    /// Second gate output node.
    pub w: NodeId,
    /// Fresh chain node with in-edge from u.
    pub a: NodeId,
    /// Fresh chain node with in-edge from a.
    pub b: NodeId,
    /// Fresh node with in-edges from u and b, feeding v.
    pub c: NodeId,
    /// Fresh chain node with in-edge from b, feeding w.
    pub d: NodeId,
}

/// Maps a reduced threshold game back to its source instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TGReductionMap {
    /// Nodes of the original instance (decoded directly by value).
    pub original_nodes: BTreeSet<NodeId>,
    /// Internal nodes of each PURIFY gadget, for witness encoding.
    pub purify_internals: Vec<PurifyInternals>,
}

/// Reduces a pure-circuit instance over {NOT, NOR, PURIFY} to a threshold
/// game whose ε-approximate equilibria, for every ε < 1/6, decode to
/// satisfying assignments.  NOT(u→v) becomes the edge u→v; NOR(u,v→w) the
/// edges u→w and v→w; PURIFY(u→v,w) a seven-edge gadget with four fresh
/// nodes: u→a, a→b, b→d, d→w, u→c, b→c, c→v.  On restricted instances all
/// in- and out-degrees are at most two.
pub fn reduce_pc_to_threshold(
    inst: &PCInstance,
) -> Result<(ThresholdGame, TGReductionMap), Error> {
    for t in inst.gate_types() {
        if !matches!(t, GateType::Not | GateType::Nor | GateType::Purify) {
            return Err(Error::UnsupportedGateSet(format!(
                "gate {} is not supported; rewrite to {{NOT, NOR, PURIFY}} first",
                t.name()
            )));
        }
    }
    let mut g = ThresholdGame::new();
    for n in inst.sorted_nodes() {
        g.add_node(&n);
    }
    let mut used: BTreeSet<String> = inst.nodes.iter().cloned().collect();
    let mut counter = 0usize;
    let fresh = |hint: &str, used: &mut BTreeSet<String>, counter: &mut usize| -> String {
        loop {
            let name = format!("{hint}#{counter}");
            *counter += 1;
            if used.insert(name.clone()) {
                return name;
            }
        }
    };
    let mut internals = Vec::new();
    for (idx, gate) in inst.gates.iter().enumerate() {
        match gate.gate_type {
            GateType::Not => {
                g.add_edge(&gate.inputs[0], &gate.outputs[0]);
            }
            GateType::Nor => {
                g.add_edge(&gate.inputs[0], &gate.outputs[0]);
                g.add_edge(&gate.inputs[1], &gate.outputs[0]);
            }
            GateType::Purify => {
                let u = gate.inputs[0].clone();
                let v = gate.outputs[0].clone();
                let w = gate.outputs[1].clone();
                let a = fresh(&format!("g{idx}~a"), &mut used, &mut counter);
                let b = fresh(&format!("g{idx}~b"), &mut used, &mut counter);
                let c = fresh(&format!("g{idx}~c"), &mut used, &mut counter);
                let d = fresh(&format!("g{idx}~d"), &mut used, &mut counter);
                g.add_edge(&u, &a);
                g.add_edge(&a, &b);
                g.add_edge(&b, &d);
                g.add_edge(&d, &w);
                g.add_edge(&u, &c);
                g.add_edge(&b, &c);
                g.add_edge(&c, &v);
                internals.push(PurifyInternals { u, v, w, a, b, c, d });
            }
            _ => unreachable!("gate set checked above"),
        }
    }
    let map = TGReductionMap {
        original_nodes: inst.nodes.clone(),
        purify_internals: internals,
    };
    Ok((g, map))
}

/// Decodes a threshold assignment at tolerance ε < 1/6: values ≤ ε become 0,
/// values ≥ 1 − ε become 1, everything else becomes ⊥.
pub fn decode_threshold(
    map: &TGReductionMap,
    x: &TGAssignment,
    eps: &Rational,
) -> Result<PCAssignment, Error> {
    if eps.is_negative() || *eps >= rat(1, 6) {
        return Err(Error::Precondition("decoding needs 0 <= epsilon < 1/6".into()));
    }
    let mut a = PCAssignment::new();
    for node in &map.original_nodes {
        let Some(val) = x.get(node) else { continue };
        let v = if val <= eps {
            Value::Zero
        } else if val >= &(rat(1, 1) - eps) {
            Value::One
        } else {
            Value::Bot
        };
        a.set(node, v);
    }
    Ok(a)
}

/// Attempts to encode a satisfying pure-circuit assignment as a verified
/// ε-approximate equilibrium of the reduced game.  Original nodes draw from
/// {0} ∪ {ε} (for 0), {1} ∪ {1 − ε} (for 1), and {1/2} (for ⊥); gadget
/// internals draw from {0, 1/2, 1} extended with {ε, 1 − ε}.  Candidates are
/// tried in that documented order and only assignments passing the verifier
/// are returned; `None` means the search space is exhausted.
pub fn encode_pc_witness_threshold(
    inst: &PCInstance,
    game: &ThresholdGame,
    map: &TGReductionMap,
    a: &PCAssignment,
    eps: &Rational,
) -> Result<Option<TGAssignment>, Error> {
    if eps.is_negative() || *eps >= rat(1, 6) {
        return Err(Error::Precondition("witness encoding needs 0 <= epsilon < 1/6".into()));
    }
    let verdicts = verify_assignment(inst, a)?;
    if !verdicts.all_satisfied() {
        return Err(Error::Precondition(
            "the assignment does not satisfy the instance".into(),
        ));
    }
    let one = rat(1, 1);
    let mut nodes: Vec<NodeId> = Vec::new();
    let mut options: Vec<Vec<Rational>> = Vec::new();
    for node in &game.nodes {
        let opts = if map.original_nodes.contains(node) {
            match a.get(node) {
                Some(Value::Zero) => vec![Rational::zero(), eps.clone()],
                Some(Value::One) => vec![one.clone(), &one - eps],
                _ => vec![rat(1, 2)],
            }
        } else {
            vec![Rational::zero(), rat(1, 2), one.clone(), eps.clone(), &one - eps]
        };
        nodes.push(node.clone());
        options.push(opts);
    }
    const BUDGET: u64 = 200_000;
    let mut total: u64 = 1;
    for o in &options {
        total = total.saturating_mul(o.len() as u64).min(BUDGET + 1);
    }
    if total > BUDGET {
        return Ok(None);
    }
    let mut idx = vec![0usize; nodes.len()];
    loop {
        let candidate = TGAssignment {
            values: nodes
                .iter()
                .enumerate()
                .map(|(pos, n)| (n.clone(), options[pos][idx[pos]].clone()))
                .collect(),
        };
        if verify_threshold_eq(game, &candidate, eps)?.all_satisfied() {
            return Ok(Some(candidate));
        }
        let mut pos = nodes.len();
        loop {
            if pos == 0 {
                return Ok(None);
            }
            pos -= 1;
            if idx[pos] + 1 < options[pos].len() {
                idx[pos] += 1;
                break;
            }
            idx[pos] = 0;
        }
    }
}

// ---------------------------------------------------------------------------
// Gadget case checks (scaled-integer grids)
// ---------------------------------------------------------------------------

/// Which threshold gadget a case check exercises.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TGGadgetKind {
    /// NOR gadget (two in-edges into the output).
    Nor,
    /// PURIFY gadget (the seven-edge construction).
    Purify,
}

/// Result of a threshold gadget case check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TGCaseReport {
    /// Grid cells examined.
    pub cases_checked: u64,
    /// Counterexample descriptions (empty iff the check passed).
    pub failures: Vec<String>,
}

impl TGCaseReport {
    /// Did every case satisfy the claimed forcing?
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

/// `∃ g ∈ grid: x ≤ g ≤ y`.
fn any_grid_in(grid: &[i64], x: i64, y: i64) -> bool {
    let i = grid.partition_point(|&g| g < x);
    i < grid.len() && grid[i] <= y
}

/// Largest grid value in `[x, y]`, if any.
fn max_grid_in(grid: &[i64], x: i64, y: i64) -> Option<i64> {
    let i = grid.partition_point(|&g| g <= y);
    if i == 0 {
        return None;
    }
    let g = grid[i - 1];
    (g >= x).then_some(g)
}

/// All grid values in `[x, y]`.
fn grid_values_in(grid: &[i64], x: i64, y: i64) -> Vec<i64> {
    grid.iter().copied().filter(|&g| g >= x && g <= y).collect()
}

/// Given a set of attainable values (intervals, intersected with the grid)
/// for a node's in-sum shifted by `shift`, returns the attainable intervals
/// of the node itself under the three-case rule with scale `l` and scaled
/// tolerance `e`.
fn step_allowed(
    src: &[(i64, i64)],
    grid: &[i64],
    shift: i64,
    l: i64,
    e: i64,
) -> Vec<(i64, i64)> {
    let lo_thr = l / 2 - e;
    let hi_thr = l / 2 + e;
    let mut low = false;
    let mut high = false;
    let mut free = false;
    for &(x, y) in src {
        // In-sum strictly above 1/2 + ε: output forced into [0, ε].
        if any_grid_in(grid, (hi_thr - shift + 1).max(x), y) {
            low = true;
        }
        // In-sum strictly below 1/2 − ε: output forced into [1 − ε, 1].
        if any_grid_in(grid, x, (lo_thr - shift - 1).min(y)) {
            high = true;
        }
        // In-sum in the band: output free.
        if any_grid_in(grid, (lo_thr - shift).max(x), (hi_thr - shift).min(y)) {
            free = true;
        }
    }
    let mut out = Vec::new();
    if free {
        return vec![(0, l)];
    }
    if low {
        out.push((0, e));
    }
    if high {
        out.push((l - e, l));
    }
    out
}

/// Exhaustively checks one threshold gadget's forcing claims over the grid
/// {0, step, 2·step, …, 1} ∪ {ε, 1 − ε}, with all arithmetic on a common
/// integer scale.  Requires ε < 1/4 so the forced ranges and the band are
/// disjoint.
pub fn threshold_gadget_check(
    kind: TGGadgetKind,
    eps: &Rational,
    step: &Rational,
) -> Result<TGCaseReport, Error> {
    if eps.is_negative() || *eps >= rat(1, 4) {
        return Err(Error::Precondition("gadget checks need 0 <= epsilon < 1/4".into()));
    }
    let inv = step.recip();
    if !num::One::is_one(inv.denom()) || !inv.numer().is_positive() {
        return Err(Error::Precondition(format!(
            "step must be the reciprocal of a positive integer, got {}",
            format_rational(step)
        )));
    }
    let s = inv
        .numer()
        .to_i64()
        .ok_or_else(|| Error::Precondition("step too fine".into()))?;
    let eps_den = eps
        .denom()
        .to_i64()
        .ok_or_else(|| Error::Precondition("epsilon denominator too large".into()))?;
    // Common scale making 1/2, every grid point, and ε integral.
    let l = num::integer::lcm(num::integer::lcm(2, s), eps_den);
    let e = (eps * rat(l, 1)).to_integer().to_i64().unwrap();
    let mut grid: Vec<i64> = (0..=s).map(|j| j * (l / s)).collect();
    for extra in [e, l - e] {
        if !grid.contains(&extra) {
            grid.push(extra);
        }
    }
    grid.sort_unstable();
    let lo_thr = l / 2 - e;
    let hi_thr = l / 2 + e;
    let show = |v: i64| format_rational(&rat(v, l));
    let mut report = TGCaseReport { cases_checked: 0, failures: Vec::new() };
    match kind {
        TGGadgetKind::Nor => {
            for &u in &grid {
                for &v in &grid {
                    report.cases_checked += 1;
                    // Both inputs encode 0: the output must be forced to 1,
                    // i.e. the in-sum must fall strictly below 1/2 − ε.
                    if u <= e && v <= e && u + v >= lo_thr {
                        report.failures.push(format!(
                            "nor: inputs {} and {} both encode 0 but their sum {} does not force the output high",
                            show(u),
                            show(v),
                            show(u + v)
                        ));
                    }
                    // Any input encodes 1: the output must be forced to 0.
                    if (u >= l - e || v >= l - e) && u + v <= hi_thr {
                        report.failures.push(format!(
                            "nor: inputs {} and {} include a 1 but their sum {} does not force the output low",
                            show(u),
                            show(v),
                            show(u + v)
                        ));
                    }
                }
            }
        }
        TGGadgetKind::Purify => {
            for &u in &grid {
                report.cases_checked += 1;
                let ra = step_allowed(&[(u, u)], &grid, 0, l, e);
                let rb = step_allowed(&ra, &grid, 0, l, e);
                let rd = step_allowed(&rb, &grid, 0, l, e);
                let rw = step_allowed(&rd, &grid, 0, l, e);
                let rc = step_allowed(&rb, &grid, u, l, e);
                let rv = step_allowed(&rc, &grid, 0, l, e);
                let max_of = |set: &[(i64, i64)]| {
                    set.iter().filter_map(|&(x, y)| max_grid_in(&grid, x, y)).max()
                };
                let min_of = |set: &[(i64, i64)]| {
                    set.iter()
                        .filter_map(|&(x, y)| grid_values_in(&grid, x, y).into_iter().min())
                        .min()
                };
                if u <= e {
                    let bad_v = max_of(&rv).map(|m| m > e).unwrap_or(false);
                    let bad_w = max_of(&rw).map(|m| m > e).unwrap_or(false);
                    if bad_v || bad_w {
                        report.failures.push(format!(
                            "purify: input {} encodes 0 but an output can escape [0, {}]",
                            show(u),
                            format_rational(eps)
                        ));
                    }
                }
                if u >= l - e {
                    let bad_v = min_of(&rv).map(|m| m < l - e).unwrap_or(false);
                    let bad_w = min_of(&rw).map(|m| m < l - e).unwrap_or(false);
                    if bad_v || bad_w {
                        report.failures.push(format!(
                            "purify: input {} encodes 1 but an output can escape [{}, 1]",
                            show(u),
                            format_rational(&(rat(1, 1) - eps))
                        ));
                    }
                }
                // Purity claim: no internally consistent valuation leaves both
                // outputs strictly inside (ε, 1 − ε).  An output can sit in
                // the open band only when its feeding node lies in the closed
                // threshold band, so both outputs mix only if some reachable b
                // has both b and u + b in [1/2 − ε, 1/2 + ε].
                let mid_has_grid = any_grid_in(&grid, lo_thr, hi_thr);
                if mid_has_grid {
                    for &(x, y) in &rb {
                        for b in grid_values_in(&grid, x.max(lo_thr), y.min(hi_thr)) {
                            if u + b >= lo_thr && u + b <= hi_thr {
                                report.failures.push(format!(
                                    "purify: input {} with internal b = {} lets both outputs stay impure",
                                    show(u),
                                    show(b)
                                ));
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(report)
}

// ---------------------------------------------------------------------------
// Random digraphs (test fodder for the 1/6 algorithm)
// ---------------------------------------------------------------------------

/// Generates a seeded random directed graph on `n` nodes with roughly `2n`
/// edges (self-loops excluded, arbitrary degrees).
pub fn random_digraph(n: usize, seed: u64) -> ThresholdGame {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut g = ThresholdGame::new();
    let names: Vec<String> = (0..n).map(|i| format!("t{i:03}")).collect();
    for v in &names {
        g.add_node(v);
    }
    if n < 2 {
        return g;
    }
    for _ in 0..(2 * n) {
        let u = rng.gen_range(0..n);
        let v = rng.gen_range(0..n);
        if u != v {
            g.add_edge(&names[u], &names[v]);
        }
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{Gate, Semantics};

    fn purify_not_instance() -> PCInstance {
        PCInstance::from_gates(
            vec![
                Gate::new(GateType::Purify, &["u"], &["v", "w"]),
                Gate::new(GateType::Not, &["v"], &["u"]),
            ],
            Semantics::Robust,
        )
    }

    #[test]
    fn verifier_examples() {
        let eps = rat(1, 6);
        // Isolated node: empty in-sum forces a high value.
        let mut g = ThresholdGame::new();
        g.add_node("x");
        let hi = TGAssignment::from_pairs(&[("x", rat(1, 1))]);
        assert!(verify_threshold_eq(&g, &hi, &eps).unwrap().all_satisfied());
        let lo = TGAssignment::from_pairs(&[("x", rat(0, 1))]);
        assert!(!verify_threshold_eq(&g, &lo, &eps).unwrap().all_satisfied());
        // 2-cycle at (1/2, 1/2): always in the band.
        let mut c = ThresholdGame::new();
        c.add_edge("a", "b");
        c.add_edge("b", "a");
        let half = TGAssignment::from_pairs(&[("a", rat(1, 2)), ("b", rat(1, 2))]);
        assert!(verify_threshold_eq(&c, &half, &rat(0, 1)).unwrap().all_satisfied());
        assert!(verify_threshold_eq(&c, &half, &rat(1, 6)).unwrap().all_satisfied());
        // In-sum 9/10 forces the node to at most 1/6.
        let mut f = ThresholdGame::new();
        f.add_edge("p", "q");
        let x = TGAssignment::from_pairs(&[("p", rat(9, 10)), ("q", rat(1, 2))]);
        let verdicts = verify_threshold_eq(&f, &x, &eps).unwrap();
        assert_eq!(verdicts.violating_nodes(), vec!["q".to_string()]);
        // Errors: partial assignment, out-of-range value, bad epsilon.
        let partial = TGAssignment::from_pairs(&[("p", rat(1, 2))]);
        assert!(matches!(
            verify_threshold_eq(&f, &partial, &eps),
            Err(Error::PartialAssignment(_))
        ));
        let oob = TGAssignment::from_pairs(&[("p", rat(3, 2)), ("q", rat(1, 2))]);
        assert!(verify_threshold_eq(&f, &oob, &eps).is_err());
        assert!(verify_threshold_eq(&f, &x, &rat(1, 2)).is_err());
    }

    #[test]
    fn algo_examples() {
        // Single node: step 3 assigns 1 (empty sum).
        let mut g = ThresholdGame::new();
        g.add_node("x");
        let x = algo_sixth(&g);
        assert_eq!(x.get("x"), Some(&rat(1, 1)));
        // Directed 2-cycle: both get 1/2 in step 2.
        let mut c = ThresholdGame::new();
        c.add_edge("a", "b");
        c.add_edge("b", "a");
        let x = algo_sixth(&c);
        assert_eq!(x.get("a"), Some(&rat(1, 2)));
        assert_eq!(x.get("b"), Some(&rat(1, 2)));
        // A node with two in-neighbours gets 1/6 in step 1.
        let mut f = ThresholdGame::new();
        f.add_edge("u", "w");
        f.add_edge("v", "w");
        let x = algo_sixth(&f);
        assert_eq!(x.get("w"), Some(&rat(1, 6)));
        assert_eq!(x.get("u"), Some(&rat(1, 1)));
        assert!(verify_threshold_eq(&f, &x, &rat(1, 6)).unwrap().all_satisfied());
    }

    #[test]
    fn algo_passes_one_sixth_on_random_digraphs() {
        for seed in 0..500u64 {
            let n = 2 + (seed as usize % 99);
            let g = random_digraph(n, seed);
            let x = algo_sixth(&g);
            let verdicts = verify_threshold_eq(&g, &x, &rat(1, 6)).unwrap();
            assert!(
                verdicts.all_satisfied(),
                "seed {seed}: {:?}",
                verdicts.violating_nodes()
            );
        }
    }

    #[test]
    fn reduction_shapes() {
        // NOT 2-cycle: a 2-node digraph 2-cycle.
        let cycle = PCInstance::from_gates(
            vec![
                Gate::new(GateType::Not, &["a"], &["b"]),
                Gate::new(GateType::Not, &["b"], &["a"]),
            ],
            Semantics::Robust,
        );
        let (g, _) = reduce_pc_to_threshold(&cycle).unwrap();
        assert_eq!(g.nodes.len(), 2);
        assert_eq!(g.edges.len(), 2);
        // One PURIFY gate: 4 fresh nodes, 7 edges.
        let p = PCInstance::from_gates(
            vec![Gate::new(GateType::Purify, &["u"], &["v", "w"])],
            Semantics::Robust,
        );
        let (g, map) = reduce_pc_to_threshold(&p).unwrap();
        assert_eq!(g.nodes.len(), 7);
        assert_eq!(g.edges.len(), 7);
        assert_eq!(map.purify_internals.len(), 1);
        // Degrees stay within (2, 2) on the feedback instance.
        let (g, _) = reduce_pc_to_threshold(&purify_not_instance()).unwrap();
        for v in &g.nodes {
            let (din, dout) = g.degrees(v);
            assert!(din <= 2 && dout <= 2, "{v} has degrees ({din}, {dout})");
        }
        // Unsupported gate.
        let bad = PCInstance::from_gates(
            vec![Gate::new(GateType::And, &["u", "v"], &["w"])],
            Semantics::Robust,
        );
        assert!(matches!(reduce_pc_to_threshold(&bad), Err(Error::UnsupportedGateSet(_))));
    }

    #[test]
    fn decode_rules() {
        let map = TGReductionMap {
            original_nodes: ["n".to_string()].into_iter().collect(),
            purify_internals: Vec::new(),
        };
        let eps = rat(1, 6) - rat(1, 100);
        let d = |v: Rational| {
            decode_threshold(&map, &TGAssignment::from_pairs(&[("n", v)]), &eps)
                .unwrap()
                .get("n")
                .unwrap()
        };
        assert_eq!(d(rat(1, 12)), Value::Zero);
        assert_eq!(d(rat(1, 2)), Value::Bot);
        assert_eq!(d(rat(11, 12)), Value::One);
        assert!(decode_threshold(&map, &TGAssignment::from_pairs(&[]), &rat(1, 6)).is_err());
    }

    #[test]
    fn witness_round_trip_on_feedback_instance() {
        let inst = purify_not_instance();
        let (game, map) = reduce_pc_to_threshold(&inst).unwrap();
        let eps = rat(1, 6) - rat(1, 100);
        let a = PCAssignment::from_pairs(&[
            ("u", Value::Bot),
            ("v", Value::Bot),
            ("w", Value::Zero),
        ]);
        let witness = encode_pc_witness_threshold(&inst, &game, &map, &a, &eps)
            .unwrap()
            .expect("a witness exists");
        assert!(verify_threshold_eq(&game, &witness, &eps).unwrap().all_satisfied());
        let decoded = decode_threshold(&map, &witness, &eps).unwrap();
        assert!(verify_assignment(&inst, &decoded).unwrap().all_satisfied());
        assert_eq!(decoded.get("u"), Some(Value::Bot));
        assert_eq!(decoded.get("v"), Some(Value::Bot));
        assert_eq!(decoded.get("w"), Some(Value::Zero));
        // Non-satisfying assignments are rejected.
        let bad = PCAssignment::from_pairs(&[
            ("u", Value::Zero),
            ("v", Value::Zero),
            ("w", Value::Zero),
        ]);
        assert!(encode_pc_witness_threshold(&inst, &game, &map, &bad, &eps).is_err());
    }

    #[test]
    fn witness_for_all_pure_cycle() {
        // A NOT 2-cycle has the pure solution (0, 1); pure values encode
        // directly.  (A lone source node could not encode 0, since an empty
        // in-sum forces a high value.)
        let cycle = PCInstance::from_gates(
            vec![
                Gate::new(GateType::Not, &["a"], &["b"]),
                Gate::new(GateType::Not, &["b"], &["a"]),
            ],
            Semantics::Robust,
        );
        let (game, map) = reduce_pc_to_threshold(&cycle).unwrap();
        let eps = rat(1, 10);
        let a = PCAssignment::from_pairs(&[("a", Value::Zero), ("b", Value::One)]);
        let witness = encode_pc_witness_threshold(&cycle, &game, &map, &a, &eps)
            .unwrap()
            .expect("pure witness exists");
        assert_eq!(witness.get("a"), Some(&rat(0, 1)));
        assert_eq!(witness.get("b"), Some(&rat(1, 1)));
    }

    #[test]
    fn nor_case_check_passes_below_one_sixth() {
        let eps = rat(1, 6) - rat(1, 100);
        let r = threshold_gadget_check(TGGadgetKind::Nor, &eps, &rat(1, 200)).unwrap();
        assert!(r.ok(), "{:?}", r.failures);
        assert!(r.cases_checked >= 201 * 201);
    }

    #[test]
    fn nor_case_check_reports_boundary_at_one_sixth() {
        let r = threshold_gadget_check(TGGadgetKind::Nor, &rat(1, 6), &rat(1, 200)).unwrap();
        assert!(!r.ok());
        // The witness cell is both inputs at exactly ε = 1/6: the sum 1/3
        // equals 1/2 − ε, so the forcing disappears.
        assert!(
            r.failures.iter().any(|f| f.contains("1/6") && f.contains("1/3")),
            "{:?}",
            r.failures
        );
    }

    #[test]
    fn purify_case_check_passes_below_one_sixth() {
        let eps = rat(1, 6) - rat(1, 100);
        let r = threshold_gadget_check(TGGadgetKind::Purify, &eps, &rat(1, 200)).unwrap();
        assert!(r.ok(), "{:?}", r.failures);
        assert!(r.cases_checked > 0);
    }

    #[test]
    fn threshold_equilibria_decode_to_pc_solutions() {
        // Exhaustive-ish sanity: the 1/6-algorithm output on the reduced
        // feedback game is NOT usable (ε must be < 1/6), so check instead
        // that a hand-built equilibrium at ε = 1/6 − 1/100 decodes validly.
        let inst = purify_not_instance();
        let (game, map) = reduce_pc_to_threshold(&inst).unwrap();
        let eps = rat(1, 6) - rat(1, 100);
        let witness = encode_pc_witness_threshold(
            &inst,
            &game,
            &map,
            &PCAssignment::from_pairs(&[
                ("u", Value::Bot),
                ("v", Value::Bot),
                ("w", Value::One),
            ]),
            &eps,
        )
        .unwrap();
        if let Some(x) = witness {
            let decoded = decode_threshold(&map, &x, &eps).unwrap();
            assert!(verify_assignment(&inst, &decoded).unwrap().all_satisfied());
        }
    }
}
