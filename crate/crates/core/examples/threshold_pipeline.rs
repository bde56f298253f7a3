//! Threshold games: the 1/6 algorithm, the reduction, and decoding.
//!
//! A threshold game puts a value x_v in [0, 1] on each node of a digraph; an
//! eps-equilibrium forces x_v near 0 when the in-neighbour sum exceeds
//! 1/2 + eps and near 1 when it is below 1/2 - eps.  A polynomial-time
//! algorithm always achieves eps = 1/6, and the reduction from pure circuits
//! shows that bound is tight.

use pure_circuit::circuit::{
    verify_assignment, Gate, GateType, PCAssignment, PCInstance, Semantics, Value,
};
use pure_circuit::rational::rat;
use pure_circuit::threshold::{
    algo_sixth, decode_threshold, encode_pc_witness_threshold, random_digraph,
    reduce_pc_to_threshold, threshold_gadget_check, verify_threshold_eq, TGGadgetKind,
};

fn main() {
    // The upper bound: algo_sixth finds a 1/6-equilibrium of any digraph.
    let sixth = rat(1, 6);
    for seed in 0..20 {
        let g = random_digraph(5 + 3 * (seed as usize % 10), seed);
        let x = algo_sixth(&g);
        let verdict = verify_threshold_eq(&g, &x, &sixth).unwrap();
        assert!(verdict.all_satisfied(), "seed {seed}: {:?}", verdict.violating_nodes());
    }
    println!("algo_sixth: verified 1/6-equilibria on 20 random digraphs");

    // The matching gadgets work for every eps < 1/6 ...
    let eps = rat(1, 6) - rat(1, 100);
    for kind in [TGGadgetKind::Nor, TGGadgetKind::Purify] {
        let report = threshold_gadget_check(kind, &eps, &rat(1, 100)).unwrap();
        println!("{kind:?} gadget at eps = 1/6 - 1/100: {} cases, ok = {}",
            report.cases_checked, report.ok());
        assert!(report.ok());
    }
    // ... and break exactly at 1/6: with both NOR inputs at eps, the
    // in-neighbour sum 1/3 equals 1/2 - eps and forcing disappears.
    let report = threshold_gadget_check(TGGadgetKind::Nor, &sixth, &rat(1, 100)).unwrap();
    assert!(!report.ok());
    println!("NOR gadget at eps = 1/6 breaks: {}", report.failures[0]);

    // Reduce a {PURIFY, NOT} feedback instance and round-trip a solution.
    let inst = PCInstance::from_gates(
        vec![
            Gate::new(GateType::Purify, &["u"], &["v", "w"]),
            Gate::new(GateType::Not, &["v"], &["u"]),
        ],
        Semantics::Robust,
    );
    let (game, map) = reduce_pc_to_threshold(&inst).unwrap();
    println!("reduced threshold game: {} nodes, {} edges", game.nodes.len(), game.edges.len());

    let witness = PCAssignment::from_pairs(&[
        ("u", Value::Bot),
        ("v", Value::Bot),
        ("w", Value::Zero),
    ]);
    assert!(verify_assignment(&inst, &witness).unwrap().all_satisfied());
    let x = encode_pc_witness_threshold(&inst, &game, &map, &witness, &eps)
        .unwrap()
        .expect("this solution admits an eps-equilibrium encoding");
    assert!(verify_threshold_eq(&game, &x, &eps).unwrap().all_satisfied());
    let decoded = decode_threshold(&map, &x, &eps).unwrap();
    assert_eq!(decoded, witness);
    println!("witness encoded as an eps-equilibrium and decoded back exactly");
}
