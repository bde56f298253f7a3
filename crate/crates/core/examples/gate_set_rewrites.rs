//! Compiling an instance down to a hard two- or three-gate basis.
//!
//! Rewrites preserve solutions in the strong sense: any solution of the
//! rewritten instance restricts (on the original node ids) to a solution of
//! the original instance.

use pure_circuit::circuit::{
    verify_assignment, Gate, GateType, PCInstance, Semantics,
};
use pure_circuit::rewrite::{rewrite_gateset, TargetGateSet};
use pure_circuit::solve::{brute_force_solve, SolveBudget, SolveOutcome};

fn main() {
    // A mixed-basis instance: OR, COPY, and NAND, with feedback.
    let inst = PCInstance::from_gates(
        vec![
            Gate::new(GateType::Or, &["a", "b"], &["c"]),
            Gate::new(GateType::Copy, &["c"], &["a"]),
            Gate::new(GateType::Nand, &["c", "a"], &["b"]),
        ],
        Semantics::Robust,
    );

    for target in [
        TargetGateSet::PurifyNor,
        TargetGateSet::PurifyNand,
        TargetGateSet::PurifyNotOr,
        TargetGateSet::PurifyNotAnd,
    ] {
        let (rewritten, back) = rewrite_gateset(&inst, target).unwrap();
        // The rewritten instance really lives inside the target basis.
        for t in rewritten.gate_types() {
            assert!(target.contains(t), "{t:?} escaped the {} basis", target.name());
        }
        println!(
            "{}: {} nodes, {} gates (from 3 nodes, 3 gates)",
            target.name(),
            rewritten.nodes.len(),
            rewritten.gates.len()
        );

        // Solve the rewritten instance and pull the solution back.
        let outcome = brute_force_solve(&rewritten, &SolveBudget::default()).unwrap();
        let solution = match outcome {
            SolveOutcome::Solution(a) => a,
            other => panic!("unexpected outcome {other:?}"),
        };
        let restricted = back.restrict(&solution);
        let verdict = verify_assignment(&inst, &restricted).unwrap();
        assert!(verdict.all_satisfied());
        println!(
            "  solved and restricted back: a={} b={} c={}",
            restricted.get("a").unwrap(),
            restricted.get("b").unwrap(),
            restricted.get("c").unwrap()
        );
    }
}
