//! Polynomial-time solvers for easy gate sets, plus exhaustive search.
//!
//! PURIFY-free instances are satisfied by all-bot, monotone gate sets by
//! all-one, and non-robust instances by a constructive assignment; general
//! instances fall back to brute force or damped relaxation.

use pure_circuit::circuit::{
    verify_assignment, Gate, GateType, PCInstance, Semantics, Value,
};
use pure_circuit::solve::{
    brute_force_solve, enumerate_solutions, random_instance, relaxation_iterate, solve_monotone,
    solve_no_purify, solve_non_robust, RelaxOutcome, SolveBudget, SolveOutcome,
};

fn main() {
    // PURIFY-free: a NOR cycle.  All-bot satisfies every gate.
    let nor_cycle = PCInstance::from_gates(
        vec![
            Gate::new(GateType::Nor, &["a", "b"], &["c"]),
            Gate::new(GateType::Nor, &["b", "c"], &["a"]),
            Gate::new(GateType::Nor, &["c", "a"], &["b"]),
        ],
        Semantics::Robust,
    );
    let x = solve_no_purify(&nor_cycle).unwrap();
    assert!(verify_assignment(&nor_cycle, &x).unwrap().all_satisfied());
    println!("no-purify solver on a NOR 3-cycle: {:?}", x.get("a"));

    // Monotone gate set {AND, PURIFY, COPY, OR}: all-one works.
    let monotone = PCInstance::from_gates(
        vec![
            Gate::new(GateType::Purify, &["p"], &["q", "r"]),
            Gate::new(GateType::And, &["q", "r"], &["p"]),
        ],
        Semantics::Robust,
    );
    let x = solve_monotone(&monotone).unwrap();
    assert!(verify_assignment(&monotone, &x).unwrap().all_satisfied());
    println!("monotone solver on PURIFY/AND feedback: {:?}", x.get("p"));

    // Non-robust semantics admit a polynomial-time solver for every gate set.
    let weak = random_instance(
        7,
        6,
        &[
            GateType::Nor,
            GateType::Purify,
            GateType::And,
            GateType::Or,
            GateType::Not,
            GateType::Copy,
            GateType::Nand,
        ],
        Semantics::NonRobust,
    );
    let x = solve_non_robust(&weak).unwrap();
    assert!(verify_assignment(&weak, &x).unwrap().all_satisfied());
    println!("non-robust solver on a random 6-node instance: ok");

    // General robust instances: exhaustive search.  The PURIFY/NOT feedback
    // instance has exactly the two solutions (bot, bot, 0) and (bot, bot, 1)
    // over (u, v, w).
    let hard = PCInstance::from_gates(
        vec![
            Gate::new(GateType::Purify, &["u"], &["v", "w"]),
            Gate::new(GateType::Not, &["v"], &["u"]),
        ],
        Semantics::Robust,
    );
    let all = enumerate_solutions(&hard, 100).unwrap();
    println!("all solutions of the PURIFY/NOT feedback instance:");
    for a in &all {
        println!("  u={} v={} w={}", a.get("u").unwrap(), a.get("v").unwrap(), a.get("w").unwrap());
    }
    assert_eq!(all.len(), 2);
    for a in &all {
        assert_eq!(a.get("u"), Some(Value::Bot));
        assert_eq!(a.get("v"), Some(Value::Bot));
        assert!(a.get("w") != Some(Value::Bot));
    }

    let budget = SolveBudget::default();
    match brute_force_solve(&hard, &budget).unwrap() {
        SolveOutcome::Solution(a) => {
            assert!(verify_assignment(&hard, &a).unwrap().all_satisfied());
            println!("brute force finds the lexicographically first solution");
        }
        other => panic!("unexpected outcome {other:?}"),
    }

    // Damped relaxation: a numeric fixpoint iteration with banded rounding.
    // It is a heuristic -- it either returns a verified solution or reports
    // its residual.
    match relaxation_iterate(&hard, &budget).unwrap() {
        RelaxOutcome::Solution(a) => {
            assert!(verify_assignment(&hard, &a).unwrap().all_satisfied());
            println!("relaxation converged to a verified solution");
        }
        RelaxOutcome::Inconclusive { residual } => {
            println!("relaxation inconclusive, residual {residual:.3}");
        }
    }
}
