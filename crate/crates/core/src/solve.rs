//! Solvers: exhaustive search plus the polynomial special cases (no PURIFY,
//! monotone gate sets, non-robust semantics) and a damped relaxation
//! heuristic. Everything deterministic; ties always break toward the lowest
//! node id and the value order `0 < 1 < bot`.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::circuit::{
    gate_satisfied, interaction_graph, validate_instance, verify_assignment, Gate, GateType,
    NodeId, PCAssignment, PCInstance, Semantics, Value,
};
use crate::error::Error;

/// Resource limits for the search-based solvers.
#[derive(Clone, Debug)]
pub struct SolveBudget {
    /// Cap on the number of total assignments the brute-force search may rule
    /// out (pruned subtrees count with their full size). `3^n` guarantees a
    /// complete search.
    pub max_assignments: u128,
    /// Iterations per relaxation pass.
    pub max_iterations: usize,
    /// Damping factor of the relaxation update, in `(0, 1]`.
    pub damping: f64,
    /// Rounding band `tau`: numeric values in `[0, tau]` round to 0, in
    /// `[1 - tau, 1]` to 1, everything else to bot.
    pub rounding_band: f64,
    /// Seed for relaxation restarts.
    pub seed: u64,
}

impl Default for SolveBudget {
    fn default() -> SolveBudget {
        SolveBudget {
            max_assignments: 1 << 40,
            max_iterations: 10_000,
            damping: 0.5,
            rounding_band: 0.1,
            seed: 0,
        }
    }
}

/// Outcome of a budgeted search.
#[derive(Clone, Debug)]
pub enum SolveOutcome {
    Solution(PCAssignment),
    /// The search space was exhausted without finding a solution; this proves
    /// unsatisfiability (which cannot happen for valid robust instances).
    NoSolution,
    /// The budget ran out first.
    Inconclusive,
}

impl SolveOutcome {
    pub fn solution(&self) -> Option<&PCAssignment> {
        match self {
            SolveOutcome::Solution(x) => Some(x),
            _ => None,
        }
    }
}

fn validated(inst: &PCInstance) -> Result<(), Error> {
    let report = validate_instance(inst);
    if report.is_valid() {
        Ok(())
    } else {
        Err(Error::InvalidInstance(report.describe().join("; ")))
    }
}

/// Backtracking engine shared by `brute_force_solve` and
/// `enumerate_solutions`. Visits assignments in lexicographic order over
/// sorted node ids with the value order `0 < 1 < bot`; prunes as soon as a
/// fully-assigned gate is violated.
struct Search<'a> {
    inst: &'a PCInstance,
    nodes: Vec<NodeId>,
    /// Gates checkable once the node at this depth is assigned (the gate's
    /// highest-indexed node).
    checkable_at: Vec<Vec<usize>>,
    budget: u128,
    spent: u128,
}

impl<'a> Search<'a> {
    fn new(inst: &'a PCInstance, budget: u128) -> Search<'a> {
        let nodes = inst.sorted_nodes();
        let index: HashMap<&NodeId, usize> = nodes.iter().enumerate().map(|(i, n)| (n, i)).collect();
        let mut checkable_at = vec![Vec::new(); nodes.len()];
        for (gi, g) in inst.gates.iter().enumerate() {
            if let Some(depth) = g.nodes().map(|n| index[n]).max() {
                checkable_at[depth].push(gi);
            }
        }
        Search {
            inst,
            nodes,
            checkable_at,
            budget,
            spent: 0,
        }
    }

    /// Explores assignments below `depth`; calls `found` for each solution.
    /// Returns `false` when the budget ran out, `true` when this subtree is
    /// fully explored (or `found` asked to stop by returning `false`).
    fn run(
        &mut self,
        depth: usize,
        x: &mut PCAssignment,
        found: &mut dyn FnMut(&PCAssignment) -> bool,
        stop: &mut bool,
    ) -> bool {
        if depth == self.nodes.len() {
            self.spent += 1;
            if !found(x) {
                *stop = true;
            }
            return self.spent <= self.budget || *stop;
        }
        let node = self.nodes[depth].clone();
        for v in Value::ALL {
            x.values.insert(node.clone(), v);
            let ok = self.checkable_at[depth]
                .iter()
                .all(|gi| gate_satisfied(&self.inst.gates[*gi], x, self.inst.semantics));
            if ok {
                if !self.run(depth + 1, x, found, stop) {
                    x.values.remove(&node);
                    return false;
                }
                if *stop {
                    x.values.remove(&node);
                    return true;
                }
            } else {
                // This entire subtree is ruled out.
                self.spent += 3u128.saturating_pow((self.nodes.len() - depth - 1) as u32);
                if self.spent > self.budget {
                    x.values.remove(&node);
                    return false;
                }
            }
        }
        x.values.remove(&node);
        true
    }
}

/// Exhaustive search for one solution, lexicographically first. With
/// `max_assignments >= 3^n` the search is complete, so `NoSolution` is a
/// proof of unsatisfiability.
pub fn brute_force_solve(inst: &PCInstance, budget: &SolveBudget) -> Result<SolveOutcome, Error> {
    validated(inst)?;
    let mut search = Search::new(inst, budget.max_assignments);
    let mut solution = None;
    let mut stop = false;
    let complete = search.run(
        0,
        &mut PCAssignment::new(),
        &mut |x| {
            solution = Some(x.clone());
            false
        },
        &mut stop,
    );
    Ok(match solution {
        Some(x) => SolveOutcome::Solution(x),
        None if complete => SolveOutcome::NoSolution,
        None => SolveOutcome::Inconclusive,
    })
}

/// All solutions in lexicographic order, up to `max_solutions`. Desk scale:
/// the search is complete or panics on nothing, but the caller should keep
/// node counts small.
pub fn enumerate_solutions(
    inst: &PCInstance,
    max_solutions: usize,
) -> Result<Vec<PCAssignment>, Error> {
    validated(inst)?;
    let mut search = Search::new(inst, u128::MAX);
    let mut out = Vec::new();
    let mut stop = false;
    search.run(
        0,
        &mut PCAssignment::new(),
        &mut |x| {
            out.push(x.clone());
            out.len() < max_solutions
        },
        &mut stop,
    );
    Ok(out)
}

/// PURIFY-free instances are solved by the all-bot assignment: no other gate
/// can force purity out of garbage.
pub fn solve_no_purify(inst: &PCInstance) -> Result<PCAssignment, Error> {
    validated(inst)?;
    if inst.gates.iter().any(|g| g.gate_type == GateType::Purify) {
        return Err(Error::Precondition(
            "solve_no_purify requires a PURIFY-free instance".into(),
        ));
    }
    let x = PCAssignment {
        values: inst.nodes.iter().map(|n| (n.clone(), Value::Bot)).collect(),
    };
    debug_assert!(verify_assignment(inst, &x)?.all_satisfied());
    Ok(x)
}

/// Monotone gate sets (`PURIFY`, `COPY`, `OR`, `AND`) are solved by all-one
/// (all-zero works equally well; all-one is the canonical pick here).
pub fn solve_monotone(inst: &PCInstance) -> Result<PCAssignment, Error> {
    validated(inst)?;
    let monotone = [
        GateType::Purify,
        GateType::Copy,
        GateType::Or,
        GateType::And,
    ];
    if let Some(g) = inst
        .gates
        .iter()
        .find(|g| !monotone.contains(&g.gate_type))
    {
        return Err(Error::Precondition(format!(
            "solve_monotone requires monotone gates only, found {}",
            g.gate_type
        )));
    }
    let x = PCAssignment {
        values: inst.nodes.iter().map(|n| (n.clone(), Value::One)).collect(),
    };
    debug_assert!(verify_assignment(inst, &x)?.all_satisfied());
    Ok(x)
}

/// Shortest directed cycle in the remaining interaction graph, as a node list
/// in edge order. Ties break toward the lowest node id; path reconstruction is
/// BFS with sorted successors, so the result is deterministic.
fn shortest_cycle(
    succ: &BTreeMap<NodeId, Vec<NodeId>>,
    alive: &BTreeSet<NodeId>,
) -> Option<Vec<NodeId>> {
    let mut best: Option<Vec<NodeId>> = None;
    for start in alive {
        // BFS from start; the first time we re-reach start, we have the
        // shortest cycle through it.
        let mut parent: BTreeMap<&NodeId, &NodeId> = BTreeMap::new();
        let mut queue = std::collections::VecDeque::from([start]);
        let mut closed: Option<&NodeId> = None;
        'bfs: while let Some(u) = queue.pop_front() {
            for v in succ.get(u).into_iter().flatten() {
                if !alive.contains(v) {
                    continue;
                }
                if v == start {
                    closed = Some(u);
                    break 'bfs;
                }
                if v != start && !parent.contains_key(v) {
                    parent.insert(v, u);
                    queue.push_back(v);
                }
            }
        }
        if let Some(mut u) = closed {
            let mut cycle = vec![u.clone()];
            while u != start {
                u = parent[u];
                cycle.push(u.clone());
            }
            cycle.reverse();
            if best.as_ref().map_or(true, |b| cycle.len() < b.len()) {
                best = Some(cycle);
            }
        }
    }
    best
}

/// Polynomial-time solver for the non-robust semantics. Stage 1 repeatedly
/// assigns bot along a shortest directed cycle and deletes it; stage 2 walks
/// the remaining DAG topologically, preferring 0 whenever the gate leaves a
/// choice. The one subtle case is a PURIFY whose twin output died on a cycle:
/// its input is then necessarily on that same cycle (the twin's only in-edge
/// comes from it), so a pure bit on the surviving output is always legal.
pub fn solve_non_robust(inst: &PCInstance) -> Result<PCAssignment, Error> {
    validated(inst)?;
    if inst.semantics != Semantics::NonRobust {
        return Err(Error::Precondition(
            "solve_non_robust requires non-robust semantics".into(),
        ));
    }
    let graph = interaction_graph(inst);
    let mut succ: BTreeMap<NodeId, Vec<NodeId>> = BTreeMap::new();
    for (u, v) in &graph.edges {
        succ.entry(u.clone()).or_default().push(v.clone());
    }
    let mut x = PCAssignment::new();
    let mut alive: BTreeSet<NodeId> = inst.nodes.clone();

    // Stage 1: garbage out the cycles.
    while let Some(cycle) = shortest_cycle(&succ, &alive) {
        for n in cycle {
            x.values.insert(n.clone(), Value::Bot);
            alive.remove(&n);
        }
    }

    // Stage 2: topological sweep of the remaining DAG.
    let producer: BTreeMap<&NodeId, &Gate> = inst
        .gates
        .iter()
        .flat_map(|g| g.outputs.iter().map(move |o| (o, g)))
        .collect();
    let mut remaining: BTreeSet<&NodeId> = alive.iter().collect();
    while !remaining.is_empty() {
        let ready = remaining
            .iter()
            .find(|n| {
                producer[**n]
                    .inputs
                    .iter()
                    .all(|u| x.values.contains_key(u))
            })
            .copied()
            .ok_or_else(|| {
                Error::CyclicDependency(remaining.iter().map(|n| (*n).to_string()).collect())
            })?;
        let gate = producer[ready];
        let ins: Vec<Value> = gate.inputs.iter().map(|u| x.values[u]).collect();
        match gate.gate_type {
            GateType::Purify => {
                let (o1, o2) = (&gate.outputs[0], &gate.outputs[1]);
                match ins[0] {
                    v @ (Value::Zero | Value::One) => {
                        for o in [o1, o2] {
                            debug_assert!(!x.values.contains_key(o), "twin died under pure input");
                            x.values.insert(o.clone(), v);
                            remaining.remove(o);
                        }
                    }
                    Value::Bot => {
                        // Any pure bit on a surviving output satisfies the
                        // gate; prefer 0, and only assign outputs still alive.
                        for o in [o1, o2] {
                            if !x.values.contains_key(o) {
                                x.values.insert(o.clone(), Value::Zero);
                                remaining.remove(o);
                            }
                        }
                    }
                }
            }
            t => {
                let v = if ins.iter().all(|v| v.is_pure()) {
                    Value::from_bit(t.classical(
                        &ins.iter().map(|v| *v == Value::One).collect::<Vec<_>>(),
                    ))
                } else if t == GateType::Copy || t == GateType::Not {
                    // bot input: unconstrained, prefer 0.
                    Value::Zero
                } else {
                    // Non-robust binary gate with a bot input: unconstrained.
                    Value::Zero
                };
                x.values.insert(gate.outputs[0].clone(), v);
                remaining.remove(&gate.outputs[0]);
            }
        }
    }
    debug_assert!(verify_assignment(inst, &x)?.all_satisfied());
    Ok(x)
}

/// Outcome of the relaxation heuristic.
#[derive(Clone, Debug)]
pub enum RelaxOutcome {
    Solution(PCAssignment),
    /// No rounded fixed point verified within budget; carries the final sup
    /// change for diagnostics.
    Inconclusive { residual: f64 },
}

fn relax_gate(t: GateType, ins: &[f64]) -> Vec<f64> {
    let ramp = |x: f64| x.clamp(0.0, 1.0);
    match t {
        GateType::Not => vec![1.0 - ins[0]],
        GateType::Copy => vec![ins[0]],
        GateType::And => vec![ins[0].min(ins[1])],
        GateType::Or => vec![ins[0].max(ins[1])],
        GateType::Nor => vec![1.0 - ins[0].max(ins[1])],
        GateType::Nand => vec![1.0 - ins[0].min(ins[1])],
        // Smoothed step functions at 0.3 and 0.7: for any input at least one
        // output is saturated, mirroring PURIFY's purity guarantee.
        GateType::Purify => vec![ramp((ins[0] - 0.3) * 5.0), ramp((ins[0] - 0.5) * 5.0)],
    }
}

fn round_value(x: f64, tau: f64) -> Value {
    if x <= tau {
        Value::Zero
    } else if x >= 1.0 - tau {
        Value::One
    } else {
        Value::Bot
    }
}

/// Damped fixed-point iteration over `[0,1]^n`, rounded through the band
/// `tau` and verified exactly. A heuristic: `Inconclusive` says nothing about
/// solvability. The first pass starts from the all-1/2 point; up to three
/// seeded random restarts follow.
pub fn relaxation_iterate(inst: &PCInstance, budget: &SolveBudget) -> Result<RelaxOutcome, Error> {
    validated(inst)?;
    let nodes = inst.sorted_nodes();
    let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
    let mut last_residual = f64::INFINITY;
    for pass in 0..4 {
        let mut x: BTreeMap<NodeId, f64> = nodes
            .iter()
            .map(|n| {
                let v = if pass == 0 { 0.5 } else { rng.gen::<f64>() };
                (n.clone(), v)
            })
            .collect();
        for _ in 0..budget.max_iterations {
            let mut next = x.clone();
            for gate in &inst.gates {
                let ins: Vec<f64> = gate.inputs.iter().map(|u| x[u]).collect();
                for (o, y) in gate.outputs.iter().zip(relax_gate(gate.gate_type, &ins)) {
                    next.insert(o.clone(), (1.0 - budget.damping) * x[o] + budget.damping * y);
                }
            }
            let residual = nodes
                .iter()
                .map(|n| (next[n] - x[n]).abs())
                .fold(0.0, f64::max);
            x = next;
            last_residual = residual;
            if residual < 1e-12 {
                break;
            }
        }
        let rounded = PCAssignment {
            values: x
                .iter()
                .map(|(n, v)| (n.clone(), round_value(*v, budget.rounding_band)))
                .collect(),
        };
        if verify_assignment(inst, &rounded)?.all_satisfied() {
            return Ok(RelaxOutcome::Solution(rounded));
        }
    }
    Ok(RelaxOutcome::Inconclusive {
        residual: last_residual,
    })
}

/// Seeded random instance over the allowed gate types: sample gates until
/// their outputs cover exactly `nodes` nodes, wire outputs bijectively, then
/// draw inputs uniformly (distinct within each gate). `nodes >= 3`.
pub fn random_instance(
    seed: u64,
    nodes: usize,
    allowed: &[GateType],
    semantics: Semantics,
) -> PCInstance {
    assert!(nodes >= 3, "need at least 3 nodes for distinct gate wiring");
    assert!(!allowed.is_empty());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let single_out: Vec<GateType> = allowed
        .iter()
        .copied()
        .filter(|t| t.arity().1 == 1)
        .collect();
    let mut types = Vec::new();
    let mut produced = 0;
    while produced < nodes {
        let t = if nodes - produced == 1 && !single_out.is_empty() {
            single_out[rng.gen_range(0..single_out.len())]
        } else {
            allowed[rng.gen_range(0..allowed.len())]
        };
        if produced + t.arity().1 > nodes {
            continue; // only possible when allowed = {PURIFY}; retry
        }
        produced += t.arity().1;
        types.push(t);
    }
    let width = nodes.to_string().len();
    let names: Vec<NodeId> = (0..nodes).map(|i| format!("n{i:0width$}")).collect();
    let mut order: Vec<usize> = (0..nodes).collect();
    for i in (1..nodes).rev() {
        order.swap(i, rng.gen_range(0..=i));
    }
    let mut next = order.into_iter();
    let mut gates = Vec::new();
    for t in types {
        let (fan_in, fan_out) = t.arity();
        let outputs: Vec<NodeId> = (0..fan_out).map(|_| names[next.next().unwrap()].clone()).collect();
        let mut inputs = Vec::new();
        while inputs.len() < fan_in {
            let cand = names[rng.gen_range(0..nodes)].clone();
            if !inputs.contains(&cand) && !outputs.contains(&cand) {
                inputs.push(cand);
            }
        }
        gates.push(Gate {
            gate_type: t,
            inputs,
            outputs,
        });
    }
    PCInstance::from_gates(gates, semantics)
}
