//! Win-lose polymatrix games: the reduction and its gadget checks.
//!
//! A win-lose game pays only 0 or 1.  The reduction first rewrites the
//! instance into the {PURIFY, NOT, AND} basis, replaces each NOT by a
//! double-negation triple, and emits {0,1}-payoff gadgets whose 1/3-WSNEs
//! decode to pure-circuit solutions.  The output is bipartite with degree at
//! most 7 and two actions per player.

use pure_circuit::circuit::{
    verify_assignment, Gate, GateType, PCInstance, Semantics,
};
use pure_circuit::polymatrix::{
    decode_wsne_profile, enumerate_grid_equilibria, gadget_case_check, game_bipartition,
    reduce_pc_to_winlose, verify_wsne, win_lose_violations, EqMode, PMGadgetKind,
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
    let (game, map) = reduce_pc_to_winlose(&inst).unwrap();

    // Structural guarantees.
    assert!(win_lose_violations(&game).is_empty(), "all payoffs are 0 or 1");
    let (left, right) = game_bipartition(&game).expect("interaction graph is bipartite");
    let max_degree = game.players().iter().map(|p| game.degree(p)).max().unwrap();
    println!(
        "win-lose game: {} players ({} | {} bipartition), max degree {max_degree}",
        game.players().len(),
        left.len(),
        right.len()
    );
    assert!(max_degree <= 7);

    // Gadget-level forcing claims at eps = 33/100 (just below 1/3).
    let eps = rat(33, 100);
    for kind in [PMGadgetKind::WinLoseCopy, PMGadgetKind::WinLoseAnd, PMGadgetKind::WinLosePurify] {
        let report = gadget_case_check(kind, &eps, &rat(1, 50), None).unwrap();
        println!(
            "{}: {} cases checked, ok = {}",
            kind.name(),
            report.cases_checked,
            report.ok()
        );
        assert!(report.ok());
    }

    // End to end on a NOT 2-cycle, whose win-lose game (12 players) stays
    // small enough for a coarse grid scan: every grid WSNE decodes to a
    // pure-circuit solution.
    let _ = map;
    let small = PCInstance::from_gates(
        vec![
            Gate::new(GateType::Not, &["a"], &["b"]),
            Gate::new(GateType::Not, &["b"], &["a"]),
        ],
        Semantics::Robust,
    );
    let (small_game, small_map) = reduce_pc_to_winlose(&small).unwrap();
    let equilibria =
        enumerate_grid_equilibria(&small_game, &eps, &rat(1, 2), EqMode::Wsne, 100).unwrap();
    assert!(!equilibria.is_empty());
    println!("NOT 2-cycle: {} WSNEs on the 1/2 grid decode to:", equilibria.len());
    for profile in &equilibria {
        assert!(verify_wsne(&small_game, profile, &eps).unwrap().all_satisfied());
        let decoded = decode_wsne_profile(&small_map, profile);
        assert!(verify_assignment(&small, &decoded).unwrap().all_satisfied());
        println!("  a={} b={}", decoded.get("a").unwrap(), decoded.get("b").unwrap());
    }
}
