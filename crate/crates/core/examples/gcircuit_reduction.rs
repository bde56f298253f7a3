//! Pure circuit to eps-generalized circuit, with gadget checks and decoding.
//!
//! Generalized circuits constrain real values in [0, 1] up to an additive
//! eps.  The reduction replaces NOR and PURIFY gates by small arithmetic
//! gadgets; exhaustive grid checks certify the gadgets' forcing claims, and
//! any eps-satisfying valuation decodes back to a pure-circuit solution.

use pure_circuit::circuit::{verify_assignment, Gate, GateType, PCInstance, Semantics};
use pure_circuit::solve::enumerate_solutions;
use pure_circuit::gcircuit::{
    decode_gc_solution, encode_pc_witness_gc, gadget_case_check, reduce_pc_to_gcircuit,
    verify_gcircuit, GCGadgetKind,
};
use pure_circuit::rational::rat;

fn main() {
    let eps = rat(9, 100);

    // Certify the gadgets on the grid {0, 1/100, ..., 1}: every valuation
    // consistent with the eps-constraints decodes to a satisfied gate.
    for kind in [GCGadgetKind::Nor, GCGadgetKind::Purify] {
        let report = gadget_case_check(kind, &eps, 100).unwrap();
        println!("{kind:?} gadget: {} cases checked, ok = {}", report.cases_checked, report.ok());
        assert!(report.ok());
    }

    // Reduce the NOR/PURIFY feedback instance.
    let inst = PCInstance::from_gates(
        vec![
            Gate::new(GateType::Nor, &["v", "w"], &["u"]),
            Gate::new(GateType::Purify, &["u"], &["v", "w"]),
        ],
        Semantics::Robust,
    );
    let (gc, map) = reduce_pc_to_gcircuit(&inst).unwrap();
    println!("reduced: {} generalized-circuit nodes, {} gates", gc.nodes.len(), gc.gates.len());

    // Encode a known solution as an eps-satisfying valuation.  Not every
    // solution admits one (the gadgets can force values into dead bands that
    // no pure-circuit value explains), but at least one always does here.
    let solutions = enumerate_solutions(&inst, 100).unwrap();
    let (witness, x) = solutions
        .iter()
        .find_map(|a| {
            encode_pc_witness_gc(&inst, &map, a, &eps).unwrap().map(|x| (a.clone(), x))
        })
        .expect("some solution admits an eps-valuation");
    assert!(verify_assignment(&inst, &witness).unwrap().all_satisfied());
    println!(
        "encodable solution: u={} v={} w={}",
        witness.get("u").unwrap(),
        witness.get("v").unwrap(),
        witness.get("w").unwrap()
    );
    let verdict = verify_gcircuit(&gc, &x, &eps).unwrap();
    assert!(verdict.all_satisfied());
    println!("witness valuation satisfies all generalized-circuit gates at eps = 9/100");

    // Decode it back: values <= eps read as 0, >= 1 - eps as 1, else bot.
    let decoded = decode_gc_solution(&map, &x, &eps).unwrap();
    assert!(verify_assignment(&inst, &decoded).unwrap().all_satisfied());
    println!(
        "decoded solution: u={} v={} w={}",
        decoded.get("u").unwrap(),
        decoded.get("v").unwrap(),
        decoded.get("w").unwrap()
    );

    // The PURIFY gadget's guarantee breaks down at eps = 1/10: the grid
    // check finds the boundary counterexample.
    let report = gadget_case_check(GCGadgetKind::Purify, &rat(1, 10), 100).unwrap();
    println!("PURIFY gadget at eps = 1/10: ok = {}", report.ok());
    assert!(!report.ok());
    println!("  first counterexample: {}", report.failures[0]);
}
