//! Parameter bookkeeping for the exact-NE reduction: the cutoff delta, the
//! gap-growth constant, and the even NOT-chain length, plus a small
//! end-to-end run on a NOT-only instance.
//!
//! In an eps-NE, mixtures are only constrained up to eps, so AND and PURIFY
//! gadgets produce degraded encodings.  Appending an even chain of 2k NOT
//! gadgets restores them: each NOT grows the payoff gap by C(eps, delta)
//! until it absorbs at 1 - 2*delta, which pins the mixture within delta.

use pure_circuit::circuit::{
    verify_assignment, Gate, GateType, PCInstance, Semantics,
};
use pure_circuit::polymatrix::{
    choose_delta, decode_ne_profile, gap_recurrence_sequence, grid_search_equilibrium,
    reduce_pc_to_ne, verify_ne, EqMode,
};
use pure_circuit::rational::{format_rational, rat};

fn main() {
    let eps = rat(8, 100);
    let params = choose_delta(&eps).unwrap();
    println!("eps = {}", format_rational(&params.epsilon));
    println!("delta = {} (smallest on the 1/1000 grid)", format_rational(&params.delta));
    println!("gap growth C = {}", format_rational(&params.gap_growth));
    println!("chain length 2k = {}", params.chain_length());

    // The cutoff inequalities that make decoding sound.
    let margin = &params.delta * (rat(1, 1) - rat(2, 1) * &params.delta);
    assert!(eps < margin);
    assert!(params.delta < rat(1, 4));
    println!("eps < delta(1 - 2 delta) = {}", format_rational(&margin));

    // The recurrence really reaches and absorbs at 1 - 2*delta.
    let seq = gap_recurrence_sequence(&params);
    let cap = rat(1, 1) - rat(2, 1) * &params.delta;
    assert_eq!(seq.last().unwrap(), &cap);
    let reach = seq.iter().position(|g| g == &cap).unwrap();
    println!(
        "gap sequence: starts at {}, absorbs at {} after {} of {} steps",
        format_rational(&seq[0]),
        format_rational(&cap),
        reach,
        params.chain_length()
    );

    // End-to-end on a NOT 2-cycle (NOT-only instances need no chains, so the
    // reduced game stays small enough for a grid search).
    let inst = PCInstance::from_gates(
        vec![
            Gate::new(GateType::Not, &["a"], &["b"]),
            Gate::new(GateType::Not, &["b"], &["a"]),
        ],
        Semantics::Robust,
    );
    let (game, map) = reduce_pc_to_ne(&inst, &eps).unwrap();
    println!("NOT 2-cycle reduces to {} players", game.players().len());
    let profile = grid_search_equilibrium(&game, &eps, &rat(1, 4), EqMode::Ne)
        .unwrap()
        .expect("the grid contains an eps-NE");
    assert!(verify_ne(&game, &profile, &eps).unwrap().all_satisfied());
    let decoded = decode_ne_profile(&map, &profile, &params.delta);
    assert!(verify_assignment(&inst, &decoded).unwrap().all_satisfied());
    println!(
        "decoded solution: a={} b={}",
        decoded.get("a").unwrap(),
        decoded.get("b").unwrap()
    );
}
