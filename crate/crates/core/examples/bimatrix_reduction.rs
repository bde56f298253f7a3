//! Bipartite two-action polymatrix games to bimatrix games, under relative
//! approximation.
//!
//! The reduction embeds an n-node polymatrix game (payoffs in [0, 1]) into a
//! 2n x 2n bimatrix game: lambda times the embedded payoffs plus a
//! generalized matching-pennies block structure.  In every relative
//! eps-well-supported equilibrium with eps = 1/57, both players spread mass
//! across all nodes (each node holds close to 1/n), so the conditional
//! two-action mixtures recover a polymatrix profile.

use pure_circuit::bimatrix::{
    decode_bimatrix, grid_search_relative_wsne, node_mass_bounds,
    random_bipartite_two_action_game, reduce_polymatrix_to_bimatrix, verify_relative_wsne,
    BimatrixReductionParams,
};
use pure_circuit::rational::{format_rational, rat};

fn main() {
    let params = BimatrixReductionParams::default();
    println!(
        "parameters: lambda = {}, eps = {}, beta = {}",
        format_rational(&params.lambda),
        format_rational(&params.epsilon),
        format_rational(&params.beta)
    );
    // The headline constant: beta * (1/57) < 1/3, exactly.
    let product = &params.beta * rat(1, 57);
    assert!(product < rat(1, 3));
    println!("beta * 1/57 = {} < 1/3", format_rational(&product));

    // A connected 2 + 2 bipartite game with two actions per player.
    let game = random_bipartite_two_action_game(2, 2, 23);
    let (bg, map) = reduce_polymatrix_to_bimatrix(&game, &params).unwrap();
    let n = bg.size() / 2;
    println!(
        "reduced bimatrix game: {} x {} actions over {} nodes ({} dummies)",
        bg.size(),
        bg.size(),
        n,
        map.dummies.len()
    );

    // Desk-scale oracle: search the 1/12 grid for a relative 1/10-WSNE.
    let eps = rat(1, 10);
    let profile = grid_search_relative_wsne(&bg, &eps, &rat(1, 12))
        .unwrap()
        .expect("the grid contains a relative WSNE");
    assert!(verify_relative_wsne(&bg, &profile, &eps).unwrap().all_satisfied());
    println!("found a relative 1/10-WSNE on the 1/12 grid");

    // Mass spreading: each node's two actions together hold close to 1/n.
    let (lo, hi) = node_mass_bounds(&eps, &params.lambda, n);
    println!(
        "node mass bounds: [{}, {}]",
        format_rational(&lo),
        format_rational(&hi)
    );
    for i in 0..n {
        let mass = &profile.x[2 * i] + &profile.x[2 * i + 1];
        assert!(mass >= lo && mass <= hi, "node {i} mass {}", format_rational(&mass));
    }
    println!("every node's row mass lies within the bounds");

    // Decode the conditional mixtures back to a polymatrix profile.
    let decoded = decode_bimatrix(&map, &profile).unwrap();
    println!("decoded polymatrix profile:");
    for (p, s) in &decoded.strategies {
        println!("  {p}: ({}, {})", format_rational(&s[0]), format_rational(&s[1]));
    }
    assert_eq!(decoded.strategies.len(), game.players().len());
}
