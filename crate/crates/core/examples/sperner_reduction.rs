//! Strong Sperner instances and their reduction to pure circuits.
//!
//! A strong Sperner instance is an `[M]^N` grid with a circuit-computed
//! labeling; a solution is a set of pairwise-adjacent points covering both
//! labels in every dimension.  The reduction stamps out `K = 3NM^2` copies of
//! the labeling circuit over a pure circuit, feeding them from PURIFY trees
//! and closing the loop through a weak sorting network.

use pure_circuit::sperner::{
    brute_force_sperner, check_boundary, eval_labeling, reduce_to_pure_circuit,
    verify_sperner_solution, BooleanCircuit, BoundaryMode, BruteForceOutcome, SpernerInstance,
    WireOp,
};

fn main() {
    // N = 1, M = 2 with the count-symmetric labeling +1 iff NOT(AND(b1, b2)):
    // point 1 (encoded 00) is labeled +1, point 2 (encoded 11) is labeled -1.
    let circuit = BooleanCircuit {
        wires: vec![
            ("b1".into(), WireOp::Input { dim: 1, pos: 1 }),
            ("b2".into(), WireOp::Input { dim: 1, pos: 2 }),
            ("g".into(), WireOp::And("b1".into(), "b2".into())),
            ("out".into(), WireOp::Not("g".into())),
        ],
        outputs: vec!["out".into()],
    };
    let inst = SpernerInstance::new(1, 2, circuit).unwrap();

    for x in 1..=2usize {
        let label = eval_labeling(&inst, &[x]).unwrap();
        println!("label({x}) = {:+}", label[0]);
    }

    // Boundary conditions guarantee a solution exists.
    let boundary = check_boundary(&inst, BoundaryMode::Exhaustive { cap: 1000 }).unwrap();
    println!("boundary: {} points checked, ok = {}", boundary.points_checked, boundary.ok());
    assert!(boundary.ok());

    // Desk-scale oracle: scan unit cells for one covering all labels.
    let solution = match brute_force_sperner(&inst, 1000).unwrap() {
        BruteForceOutcome::Solution(s) => s,
        BruteForceOutcome::NoCell { .. } => panic!("boundary holds, so a cell must exist"),
    };
    println!("covering cell corners: {:?}", solution.points);
    let verdict = verify_sperner_solution(&inst, &solution.points).unwrap();
    assert!(verdict.ok, "{:?}", verdict.failure);

    // The reduction to a pure circuit.
    let (pc, map) = reduce_to_pure_circuit(&inst);
    let k = inst.copy_count();
    assert_eq!(k, 12);
    assert_eq!(map.k, k);
    assert_eq!(map.leaves.len(), inst.n * inst.m * k);
    println!(
        "reduced pure circuit: {} nodes, {} gates, {} circuit copies, {} leaves",
        pc.nodes.len(),
        pc.gates.len(),
        k,
        map.leaves.len()
    );
    // The reduction targets structural validity, not the stricter topology
    // restrictions; normalize() (see normalize_topology.rs) adds those.
    assert!(pure_circuit::circuit::validate_instance(&pc).is_valid());

    // Every satisfying assignment of the reduced circuit decodes -- via the
    // leaf map, copy by copy -- to grid points; for count-symmetric circuits
    // like this one the decoded points form a Sperner solution.  See the
    // library tests for a hand-built satisfying assignment pushed all the
    // way through extraction.
    println!("leaf of copy 5, block 1, bit 2: {}", map.leaves[&(1, 2, 5)]);
}
