//! Topology normalization: fan-out trees, node splitting, sink collection.
//!
//! After normalization every node feeds exactly one gate, all gates have
//! degree profile (1,1), (2,1), or (1,2), and the interaction graph is
//! bipartite -- while original node ids survive, so solutions restrict back.

use pure_circuit::circuit::{
    check_restrictions, verify_assignment, Gate, GateType, PCInstance, Semantics,
};
use pure_circuit::rewrite::normalize;
use pure_circuit::solve::{brute_force_solve, SolveBudget, SolveOutcome};

fn main() {
    // Node v fans out into two gates, which breaks the "each node is the
    // input of exactly one gate" restriction.
    let inst = PCInstance::from_gates(
        vec![
            Gate::new(GateType::Not, &["u"], &["v"]),
            Gate::new(GateType::Not, &["v"], &["w"]),
            Gate::new(GateType::And, &["v", "w"], &["u"]),
        ],
        Semantics::Robust,
    );
    let before = check_restrictions(&inst);
    println!(
        "before: input-exactly-once={} degree-profile={} bipartite={}",
        before.input_exactly_once, before.degree_profile, before.bipartite
    );
    assert!(!before.all());

    let (normalized, back) = normalize(&inst).unwrap();
    let after = check_restrictions(&normalized);
    println!(
        "after:  input-exactly-once={} degree-profile={} bipartite={} ({} nodes, {} gates)",
        after.input_exactly_once,
        after.degree_profile,
        after.bipartite,
        normalized.nodes.len(),
        normalized.gates.len()
    );
    assert!(after.all());

    // Solutions of the normalized instance restrict to the original.  The
    // default budget refuses 3^33 assignments up front, but the pruned
    // search actually finishes in well under a second here.
    let budget = SolveBudget { max_assignments: u128::MAX, ..SolveBudget::default() };
    let outcome = brute_force_solve(&normalized, &budget).unwrap();
    let solution = match outcome {
        SolveOutcome::Solution(a) => a,
        other => panic!("unexpected outcome {other:?}"),
    };
    let restricted = back.restrict(&solution);
    assert!(verify_assignment(&inst, &restricted).unwrap().all_satisfied());
    println!(
        "restricted solution: u={} v={} w={}",
        restricted.get("u").unwrap(),
        restricted.get("v").unwrap(),
        restricted.get("w").unwrap()
    );
}
