//! Instances, structural checks, and assignment verification.
//!
//! Builds a two-gate feedback instance over {NOR, PURIFY}, validates its
//! structure, and verifies assignments under both the robust and the
//! non-robust gate semantics.

use pure_circuit::circuit::{
    check_restrictions, validate_instance, verify_assignment, Gate, GateType, PCAssignment,
    PCInstance, Semantics, Value,
};

fn main() {
    // u = NOR(v, w), (v, w) = PURIFY(u).  Every node is produced by exactly
    // one gate; the instance has no inputs at all, only feedback.
    let gates = vec![
        Gate::new(GateType::Nor, &["v", "w"], &["u"]),
        Gate::new(GateType::Purify, &["u"], &["v", "w"]),
    ];
    let inst = PCInstance::from_gates(gates, Semantics::Robust);

    let report = validate_instance(&inst);
    println!("structural report:");
    for line in report.describe() {
        println!("  {line}");
    }
    assert!(report.is_valid());

    let flags = check_restrictions(&inst);
    println!(
        "restrictions: input-exactly-once={} degree-profile={} bipartite={}",
        flags.input_exactly_once, flags.degree_profile, flags.bipartite
    );

    // A satisfying assignment: u undefined, v = 0 kills the NOR input side,
    // w absorbs the garbage.
    let good = PCAssignment::from_pairs(&[("u", Value::Bot), ("v", Value::Zero), ("w", Value::Bot)]);
    let verdict = verify_assignment(&inst, &good).unwrap();
    println!("robust verdict on (bot, 0, bot): all satisfied = {}", verdict.all_satisfied());
    assert!(verdict.all_satisfied());

    // All-ones violates both gates: NOR(1, 1) must be 0, and PURIFY of a
    // pure input must copy it to both outputs -- which it does here, so only
    // the NOR gate complains.
    let bad = PCAssignment::from_pairs(&[("u", Value::One), ("v", Value::One), ("w", Value::One)]);
    let verdict = verify_assignment(&inst, &bad).unwrap();
    println!("robust verdict on (1, 1, 1): violated gates = {:?}", verdict.violated_gates());
    assert!(!verdict.all_satisfied());

    // Semantics only differ on binary logic gates with exactly one pure
    // input.  Robust NOR(1, bot) must output 0; non-robust NOR is
    // unconstrained as soon as any input is bot.  (PURIFY demands a pure
    // output under both semantics.)
    let nor_only = |s| {
        PCInstance::from_gates(vec![Gate::new(GateType::Nor, &["v", "w"], &["u"])], s)
    };
    let x = PCAssignment::from_pairs(&[("u", Value::Bot), ("v", Value::One), ("w", Value::Bot)]);
    let robust = verify_assignment(&nor_only(Semantics::Robust), &x).unwrap();
    let weak = verify_assignment(&nor_only(Semantics::NonRobust), &x).unwrap();
    println!(
        "NOR(1, bot) = bot: robust satisfied = {}, non-robust satisfied = {}",
        robust.all_satisfied(),
        weak.all_satisfied()
    );
    assert!(!robust.all_satisfied());
    assert!(weak.all_satisfied());
}
