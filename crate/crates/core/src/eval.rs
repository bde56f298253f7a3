//! Forward (Kleene) evaluation of the acyclic part of an instance.
//!
//! Given source values, gates are evaluated in topological order using the
//! strong three-valued tables. This is *not* a solver — cycles make forward
//! evaluation impossible — but it is the workhorse for checking feed-forward
//! gadgetry such as sorting networks and purification trees.

use std::collections::{BTreeMap, BTreeSet};

use crate::circuit::{Gate, GateType, NodeId, PCAssignment, PCInstance, Value};
use crate::error::Error;

fn kleene_binary(t: GateType, a: Value, b: Value) -> Value {
    use Value::*;
    match t {
        GateType::And => match (a, b) {
            (Zero, _) | (_, Zero) => Zero,
            (One, One) => One,
            _ => Bot,
        },
        GateType::Or => match (a, b) {
            (One, _) | (_, One) => One,
            (Zero, Zero) => Zero,
            _ => Bot,
        },
        GateType::Nor => kleene_not(kleene_binary(GateType::Or, a, b)),
        GateType::Nand => kleene_not(kleene_binary(GateType::And, a, b)),
        _ => unreachable!("not a binary gate"),
    }
}

fn kleene_not(a: Value) -> Value {
    match a {
        Value::Zero => Value::One,
        Value::One => Value::Zero,
        Value::Bot => Value::Bot,
    }
}

/// Gate output(s) under strong Kleene evaluation. PURIFY of a bot input is
/// canonically `(0, 1)` — any choice with one pure output would do, this one is
/// fixed so the function is deterministic.
pub fn kleene_gate(t: GateType, inputs: &[Value]) -> Vec<Value> {
    match t {
        GateType::Not => vec![kleene_not(inputs[0])],
        GateType::Copy => vec![inputs[0]],
        GateType::Purify => match inputs[0] {
            Value::Bot => vec![Value::Zero, Value::One],
            v => vec![v, v],
        },
        t => vec![kleene_binary(t, inputs[0], inputs[1])],
    }
}

/// Evaluates all nodes reachable from `sources` through the gate structure.
///
/// Every node of the instance that is not a source must be computable in
/// topological order from the sources; if the unassigned region contains a
/// cycle, the error names it. Source nodes keep their given values even if a
/// gate also outputs them.
pub fn kleene_eval(inst: &PCInstance, sources: &PCAssignment) -> Result<PCAssignment, Error> {
    let mut values: BTreeMap<NodeId, Value> = sources.values.clone();
    // Gates that still have an output to produce.
    let mut pending: Vec<&Gate> = inst
        .gates
        .iter()
        .filter(|g| g.outputs.iter().any(|o| !values.contains_key(o)))
        .collect();
    loop {
        let mut progressed = false;
        pending.retain(|gate| {
            if gate.inputs.iter().all(|u| values.contains_key(u)) {
                let ins: Vec<Value> = gate.inputs.iter().map(|u| values[u]).collect();
                let outs = kleene_gate(gate.gate_type, &ins);
                for (node, v) in gate.outputs.iter().zip(outs) {
                    values.entry(node.clone()).or_insert(v);
                }
                progressed = true;
                false
            } else {
                true
            }
        });
        if pending.is_empty() {
            break;
        }
        if !progressed {
            return Err(Error::CyclicDependency(find_cycle(inst, &values, &pending)));
        }
    }
    Ok(PCAssignment { values })
}

/// Walks unassigned-input chains backwards until a node repeats. Every node is
/// the output of exactly one gate, so the walk cannot get stuck.
fn find_cycle(
    inst: &PCInstance,
    values: &BTreeMap<NodeId, Value>,
    pending: &[&Gate],
) -> Vec<NodeId> {
    let producer: BTreeMap<&NodeId, &Gate> = inst
        .gates
        .iter()
        .flat_map(|g| g.outputs.iter().map(move |o| (o, g)))
        .collect();
    let start = pending[0]
        .inputs
        .iter()
        .find(|u| !values.contains_key(*u))
        .expect("pending gate has an unassigned input");
    let mut trail: Vec<NodeId> = vec![start.clone()];
    let mut seen: BTreeSet<NodeId> = BTreeSet::from([start.clone()]);
    let mut cur = start;
    loop {
        let gate = match producer.get(cur) {
            Some(g) => g,
            None => return trail, // structurally invalid instance; report the trail
        };
        let next = match gate.inputs.iter().find(|u| !values.contains_key(*u)) {
            Some(u) => u,
            None => return trail,
        };
        if !seen.insert(next.clone()) {
            let pos = trail.iter().position(|n| n == next).unwrap();
            let mut cycle = trail.split_off(pos);
            cycle.reverse(); // report in forward (edge) direction
            return cycle;
        }
        trail.push(next.clone());
        cur = next;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::Semantics;
    use crate::circuit::verify_assignment;

    #[test]
    fn kleene_tables() {
        use Value::*;
        assert_eq!(kleene_gate(GateType::And, &[Zero, Bot]), vec![Zero]);
        assert_eq!(kleene_gate(GateType::And, &[One, Bot]), vec![Bot]);
        assert_eq!(kleene_gate(GateType::Or, &[One, Bot]), vec![One]);
        assert_eq!(kleene_gate(GateType::Or, &[Zero, Bot]), vec![Bot]);
        assert_eq!(kleene_gate(GateType::Nor, &[Zero, Zero]), vec![One]);
        assert_eq!(kleene_gate(GateType::Nor, &[Bot, One]), vec![Zero]);
        assert_eq!(kleene_gate(GateType::Nand, &[Zero, Bot]), vec![One]);
        assert_eq!(kleene_gate(GateType::Not, &[Bot]), vec![Bot]);
        assert_eq!(kleene_gate(GateType::Purify, &[Bot]), vec![Zero, One]);
        assert_eq!(kleene_gate(GateType::Purify, &[One]), vec![One, One]);
    }

    #[test]
    fn evaluates_feed_forward_region() {
        let inst = PCInstance::from_gates(
            vec![
                Gate::new(GateType::Not, &["a"], &["b"]),
                Gate::new(GateType::And, &["a", "b"], &["c"]),
            ],
            Semantics::Robust,
        );
        let sources = PCAssignment::from_pairs(&[("a", Value::One)]);
        let out = kleene_eval(&inst, &sources).unwrap();
        assert_eq!(out.get("b"), Some(Value::Zero));
        assert_eq!(out.get("c"), Some(Value::Zero));
        // The result satisfies the gates it evaluated.
        assert!(verify_assignment(&inst, &out).unwrap().all_satisfied());
    }

    #[test]
    fn result_is_robust_consistent_even_with_bot() {
        let inst = PCInstance::from_gates(
            vec![
                Gate::new(GateType::Purify, &["a"], &["b", "c"]),
                Gate::new(GateType::Nor, &["b", "c"], &["d"]),
            ],
            Semantics::Robust,
        );
        let sources = PCAssignment::from_pairs(&[("a", Value::Bot)]);
        let out = kleene_eval(&inst, &sources).unwrap();
        assert_eq!(out.get("b"), Some(Value::Zero));
        assert_eq!(out.get("c"), Some(Value::One));
        assert_eq!(out.get("d"), Some(Value::Zero));
        assert!(verify_assignment(&inst, &out).unwrap().all_satisfied());
    }

    #[test]
    fn cycle_is_reported_by_name() {
        let inst = PCInstance::from_gates(
            vec![
                Gate::new(GateType::Not, &["u"], &["v"]),
                Gate::new(GateType::Not, &["v"], &["u"]),
                Gate::new(GateType::Not, &["x"], &["y"]),
            ],
            Semantics::Robust,
        );
        let sources = PCAssignment::from_pairs(&[("x", Value::Zero)]);
        match kleene_eval(&inst, &sources) {
            Err(Error::CyclicDependency(cycle)) => {
                let mut c = cycle.clone();
                c.sort();
                assert_eq!(c, vec!["u".to_string(), "v".to_string()]);
            }
            other => panic!("expected cycle error, got {other:?}"),
        }
    }
}
