//! Pure circuit to polymatrix WSNE: reduce, search, verify, decode.
//!
//! The reduction maps each node to a two-action player; in any well-supported
//! eps-Nash equilibrium with eps < 1/3, the players' mixtures decode to a
//! pure-circuit solution (probability of action 1 at least 2/3 reads as 1, at
//! most 1/3 as 0, anything else as bot).

use pure_circuit::circuit::{
    verify_assignment, Gate, GateType, PCInstance, Semantics,
};
use pure_circuit::polymatrix::{
    decode_wsne_profile, enumerate_grid_equilibria, grid_search_equilibrium, reduce_pc_to_wsne,
    verify_wsne, EqMode,
};
use pure_circuit::rational::rat;

fn main() {
    let inst = PCInstance::from_gates(
        vec![
            Gate::new(GateType::Purify, &["u"], &["v", "w"]),
            Gate::new(GateType::Not, &["v"], &["u"]),
        ],
        Semantics::Robust,
    );
    let (game, map) = reduce_pc_to_wsne(&inst).unwrap();
    println!(
        "reduced game: {} players, {} edges",
        game.players().len(),
        game.edges().len() / 2
    );

    let eps = rat(3, 10);
    let step = rat(1, 20);
    let profile = grid_search_equilibrium(&game, &eps, &step, EqMode::Wsne)
        .unwrap()
        .expect("the grid contains a WSNE");
    assert!(verify_wsne(&game, &profile, &eps).unwrap().all_satisfied());
    println!("found a 3/10-WSNE on the 1/20 grid:");
    for (p, s) in &profile.strategies {
        println!("  {p}: ({}, {})", s[0], s[1]);
    }

    let decoded = decode_wsne_profile(&map, &profile);
    assert!(verify_assignment(&inst, &decoded).unwrap().all_satisfied());
    println!(
        "decoded pure-circuit solution: u={} v={} w={}",
        decoded.get("u").unwrap(),
        decoded.get("v").unwrap(),
        decoded.get("w").unwrap()
    );

    // Soundness on the whole grid: every grid WSNE decodes to a solution.
    let all = enumerate_grid_equilibria(&game, &eps, &rat(1, 10), EqMode::Wsne, 10_000).unwrap();
    println!("grid WSNEs at step 1/10: {}", all.len());
    for p in &all {
        let d = decode_wsne_profile(&map, p);
        assert!(verify_assignment(&inst, &d).unwrap().all_satisfied());
    }
    println!("every one of them decodes to a verified solution");
}
