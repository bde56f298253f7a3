//! Bimatrix games with relative well-supported equilibria.
//!
//! A bimatrix game is two nonnegative square payoff matrices.  At a
//! *relative* ε-WSNE every support action earns at least (1 − ε) times the
//! best-response utility.  This module embeds bipartite two-action
//! polymatrix games into 2n × 2n bimatrix games (scaled by λ and overlaid
//! with a block imitation game), decodes node marginals back, and provides a
//! simplex-grid oracle for desk-scale cases.

use std::collections::BTreeSet;

use num::{One, Signed, ToPrimitive, Zero};

use crate::error::Error;
use crate::polymatrix::{game_bipartition, PlayerId, PolymatrixGame, StrategyProfile};
use crate::rational::{format_rational, rat, Rational};

/// A two-player game in matrix form: `r[k][j]` pays the row player and
/// `c[k][j]` the column player when row `k` meets column `j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BimatrixGame {
    /// Row player's payoff matrix.
    pub r: Vec<Vec<Rational>>,
    /// Column player's payoff matrix.
    pub c: Vec<Vec<Rational>>,
}

impl BimatrixGame {
    /// Number of actions per player.
    pub fn size(&self) -> usize {
        self.r.len()
    }
}

/// Checks squareness, matching dimensions, and nonnegativity.
pub fn validate_bimatrix(g: &BimatrixGame) -> Result<(), Error> {
    let d = g.r.len();
    if d == 0 || g.c.len() != d {
        return Err(Error::InvalidInstance(
            "payoff matrices must be nonempty and equally sized".into(),
        ));
    }
    for m in [&g.r, &g.c] {
        for row in m {
            if row.len() != d {
                return Err(Error::InvalidInstance("payoff matrices must be square".into()));
            }
            for e in row {
                if e.is_negative() {
                    return Err(Error::InvalidInstance(format!(
                        "negative payoff {}",
                        format_rational(e)
                    )));
                }
            }
        }
    }
    Ok(())
}

/// A mixed-strategy profile for a bimatrix game.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BimatrixProfile {
    /// Row player's mixed strategy.
    pub x: Vec<Rational>,
    /// Column player's mixed strategy.
    pub y: Vec<Rational>,
}

/// Per-action verdicts of the relative-WSNE check (`true` for actions
/// outside the support or meeting the ratio condition).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelWsneVerdicts {
    /// Row player's actions.
    pub row: Vec<bool>,
    /// Column player's actions.
    pub col: Vec<bool>,
}

impl RelWsneVerdicts {
    /// All support actions satisfied for both players?
    pub fn all_satisfied(&self) -> bool {
        self.row.iter().chain(self.col.iter()).all(|&b| b)
    }
}

fn check_profile(g: &BimatrixGame, p: &BimatrixProfile) -> Result<(), Error> {
    let d = g.size();
    for v in [&p.x, &p.y] {
        if v.len() != d {
            return Err(Error::Precondition("profile dimension mismatch".into()));
        }
        if v.iter().any(|e| e.is_negative()) || v.iter().sum::<Rational>() != Rational::one() {
            return Err(Error::Precondition(
                "strategies must be nonnegative and sum to 1".into(),
            ));
        }
    }
    Ok(())
}

/// Exact relative ε-WSNE verifier: every support action's expected utility
/// must be at least (1 − ε) times the player's best-response utility.
pub fn verify_relative_wsne(
    g: &BimatrixGame,
    p: &BimatrixProfile,
    eps: &Rational,
) -> Result<RelWsneVerdicts, Error> {
    validate_bimatrix(g)?;
    check_profile(g, p)?;
    if eps.is_negative() || *eps >= Rational::one() {
        return Err(Error::Precondition("epsilon must lie in [0, 1)".into()));
    }
    let d = g.size();
    let row_u: Vec<Rational> = (0..d)
        .map(|k| (0..d).map(|j| &g.r[k][j] * &p.y[j]).sum())
        .collect();
    let col_u: Vec<Rational> = (0..d)
        .map(|j| (0..d).map(|k| &g.c[k][j] * &p.x[k]).sum())
        .collect();
    let row_br = row_u.iter().max().unwrap().clone();
    let col_br = col_u.iter().max().unwrap().clone();
    let ratio = Rational::one() - eps;
    let row = (0..d)
        .map(|k| p.x[k].is_zero() || row_u[k] >= &ratio * &row_br)
        .collect();
    let col = (0..d)
        .map(|j| p.y[j].is_zero() || col_u[j] >= &ratio * &col_br)
        .collect();
    Ok(RelWsneVerdicts { row, col })
}

// ---------------------------------------------------------------------------
// Reduction from bipartite two-action polymatrix games
// ---------------------------------------------------------------------------

/// Parameters of the polymatrix-to-bimatrix embedding.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BimatrixReductionParams {
    /// Scale applied to the embedded polymatrix payoffs.
    pub lambda: Rational,
    /// Target relative tolerance (must satisfy λ < (1 − ε)/2).
    pub epsilon: Rational,
    /// Tolerance exchange rate between additive and relative WSNE.
    pub beta: Rational,
}

impl Default for BimatrixReductionParams {
    fn default() -> Self {
        BimatrixReductionParams {
            lambda: rat(1383, 10000),
            epsilon: rat(1, 57),
            beta: rat(189, 10),
        }
    }
}

/// Maps bimatrix actions back to polymatrix nodes: side lists give node
/// order (node `i`'s actions are `2i` and `2i + 1`); dummy padding nodes are
/// skipped when decoding.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BMReductionMap {
    /// Row player's nodes in action order.
    pub r_side: Vec<PlayerId>,
    /// Column player's nodes in action order.
    pub c_side: Vec<PlayerId>,
    /// Padding nodes (all-zero payoffs) that carry no decoded strategy.
    pub dummies: BTreeSet<PlayerId>,
}

/// Embeds a bipartite two-action polymatrix game with payoffs in [0, 1]
/// into a 2n × 2n bimatrix game: each side's nodes become one super-player's
/// actions, polymatrix payoffs are scaled by λ, and an imitation game is
/// overlaid — a block identity for the row player and the same blocks
/// shifted two columns to the right (mod 2n) for the column player.  The
/// smaller side is padded with zero-payoff dummy nodes.
pub fn reduce_polymatrix_to_bimatrix(
    g: &PolymatrixGame,
    params: &BimatrixReductionParams,
) -> Result<(BimatrixGame, BMReductionMap), Error> {
    if &rat(2, 1) * &params.lambda >= Rational::one() - &params.epsilon {
        return Err(Error::Precondition(
            "lambda must be below (1 - epsilon) / 2".into(),
        ));
    }
    for (i, &m) in &g.actions {
        if m != 2 {
            return Err(Error::Precondition(format!(
                "player {i} has {m} actions; the reduction needs two per player"
            )));
        }
    }
    for m in g.matrices.values() {
        for row in m {
            for e in row {
                if e.is_negative() || *e > Rational::one() {
                    return Err(Error::Precondition(format!(
                        "payoff {} is outside [0, 1]; normalize first",
                        format_rational(e)
                    )));
                }
            }
        }
    }
    let (left, right) = game_bipartition(g).ok_or_else(|| {
        Error::Precondition("the interaction graph is not bipartite".into())
    })?;
    let mut r_side: Vec<PlayerId> = left.into_iter().collect();
    let mut c_side: Vec<PlayerId> = right.into_iter().collect();
    let mut dummies = BTreeSet::new();
    let mut counter = 0usize;
    while r_side.len() != c_side.len() {
        let name = loop {
            let cand = format!("dummy#{counter}");
            counter += 1;
            if !g.actions.contains_key(&cand) && !dummies.contains(&cand) {
                break cand;
            }
        };
        dummies.insert(name.clone());
        if r_side.len() < c_side.len() {
            r_side.push(name);
        } else {
            c_side.push(name);
        }
    }
    let n = r_side.len();
    let d = 2 * n;
    let mut r = vec![vec![Rational::zero(); d]; d];
    let mut c = vec![vec![Rational::zero(); d]; d];
    for i in 0..n {
        for j in 0..n {
            let embed = g
                .matrix(&r_side[i], &c_side[j])
                .filter(|_| !dummies.contains(&r_side[i]) && !dummies.contains(&c_side[j]));
            let embed_rev = g
                .matrix(&c_side[j], &r_side[i])
                .filter(|_| !dummies.contains(&r_side[i]) && !dummies.contains(&c_side[j]));
            for a in 0..2 {
                for b in 0..2 {
                    let mut rv = Rational::zero();
                    let mut cv = Rational::zero();
                    if let Some(m) = embed {
                        rv += &params.lambda * &m[a][b];
                    }
                    if let Some(m) = embed_rev {
                        cv += &params.lambda * &m[b][a];
                    }
                    // Imitation game: the row player matches her own node,
                    // the column player matches the row node shifted by one.
                    if i == j {
                        rv += Rational::one();
                    }
                    if j == (i + 1) % n {
                        cv += Rational::one();
                    }
                    r[2 * i + a][2 * j + b] = rv;
                    c[2 * i + a][2 * j + b] = cv;
                }
            }
        }
    }
    let game = BimatrixGame { r, c };
    validate_bimatrix(&game)?;
    Ok((game, BMReductionMap { r_side, c_side, dummies }))
}

/// Decodes a bimatrix profile into per-node normalized marginals of the
/// source polymatrix game.  A node with zero mass signals that the input was
/// not a valid relative ε-WSNE and yields an error.
pub fn decode_bimatrix(
    map: &BMReductionMap,
    p: &BimatrixProfile,
) -> Result<StrategyProfile, Error> {
    let n = map.r_side.len();
    if p.x.len() != 2 * n || p.y.len() != 2 * n {
        return Err(Error::Precondition("profile dimension mismatch".into()));
    }
    let mut out = StrategyProfile { strategies: Default::default() };
    for (side, probs) in [(&map.r_side, &p.x), (&map.c_side, &p.y)] {
        for (i, node) in side.iter().enumerate() {
            if map.dummies.contains(node) {
                continue;
            }
            let mass = &probs[2 * i] + &probs[2 * i + 1];
            if mass.is_zero() {
                return Err(Error::Precondition(format!(
                    "node {node} has zero mass; the profile is not a valid relative WSNE"
                )));
            }
            out.strategies.insert(
                node.clone(),
                vec![&probs[2 * i] / &mass, &probs[2 * i + 1] / &mass],
            );
        }
    }
    Ok(out)
}

/// Node-mass bounds guaranteed at every relative ε-WSNE of a reduced game
/// (for λ < (1 − ε)/2): every node mass lies in
/// `[(1 − ε − 2λ)/n, (1 − ε − 2λ)^{-1}/n]`.
pub fn node_mass_bounds(eps: &Rational, lambda: &Rational, n: usize) -> (Rational, Rational) {
    let core = Rational::one() - eps - &rat(2, 1) * lambda;
    let n = rat(n as i64, 1);
    (&core / &n, (&core * &n).recip())
}

/// Per-action utility bounds at such profiles:
/// `[(1 − ε − 2λ)/n, (1 + 2λ)(1 − ε − 2λ)^{-1}/n]`.
pub fn utility_bounds(eps: &Rational, lambda: &Rational, n: usize) -> (Rational, Rational) {
    let core = Rational::one() - eps - &rat(2, 1) * lambda;
    let n = rat(n as i64, 1);
    (&core / &n, (Rational::one() + &rat(2, 1) * lambda) / (&core * &n))
}

// ---------------------------------------------------------------------------
// Simplex-grid oracle
// ---------------------------------------------------------------------------

/// Search budget: maximum number of (x, y) grid pairs examined.
pub const REL_GRID_BUDGET: u64 = 3_000_000;

/// Enumerates integer compositions of `s` into `d` parts in lexicographic
/// order.
fn compositions(s: i64, d: usize) -> Vec<Vec<i64>> {
    fn rec(s: i64, d: usize, prefix: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if d == 1 {
            prefix.push(s);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for v in 0..=s {
            prefix.push(v);
            rec(s - v, d - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(s, d, &mut Vec::new(), &mut out);
    out
}

fn binomial(n: u64, k: u64) -> u64 {
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u128::from(u64::MAX) {
            return u64::MAX;
        }
    }
    acc as u64
}

/// Finds the lexicographically first grid profile that is a relative
/// ε-WSNE, searching both strategies over the simplex grid with the given
/// step (the reciprocal of a positive integer).  Limited to at most six
/// actions per player and [`REL_GRID_BUDGET`] candidate pairs; exceeding the
/// budget is an error (the search is inconclusive, not negative).
pub fn grid_search_relative_wsne(
    g: &BimatrixGame,
    eps: &Rational,
    step: &Rational,
) -> Result<Option<BimatrixProfile>, Error> {
    validate_bimatrix(g)?;
    if eps.is_negative() || *eps >= Rational::one() {
        return Err(Error::Precondition("epsilon must lie in [0, 1)".into()));
    }
    let d = g.size();
    if d > 6 {
        return Err(Error::Precondition(format!(
            "grid search supports at most 6 actions per player, got {d}"
        )));
    }
    let inv = step.recip();
    if !inv.denom().is_one() || !inv.numer().is_positive() {
        return Err(Error::Precondition(format!(
            "step must be the reciprocal of a positive integer, got {}",
            format_rational(step)
        )));
    }
    let s = inv
        .numer()
        .to_i64()
        .ok_or_else(|| Error::Precondition("step too fine".into()))?;
    let per_side = binomial((s as u64) + (d as u64) - 1, (d as u64) - 1);
    if per_side.saturating_mul(per_side) > REL_GRID_BUDGET {
        return Err(Error::Precondition(format!(
            "grid too large: {per_side}^2 candidate pairs exceed the budget of {REL_GRID_BUDGET}"
        )));
    }
    // Scale payoffs to integers over a common denominator.
    let mut den = num::BigInt::one();
    for m in [&g.r, &g.c] {
        for row in m {
            for e in row {
                den = num::integer::lcm(den, e.denom().clone());
            }
        }
    }
    let scale = |m: &Vec<Vec<Rational>>| -> Option<Vec<Vec<i128>>> {
        m.iter()
            .map(|row| {
                row.iter()
                    .map(|e| (e * Rational::from(den.clone())).to_integer().to_i128())
                    .collect()
            })
            .collect()
    };
    let (ri, ci) = match (scale(&g.r), scale(&g.c)) {
        (Some(r), Some(c)) => (r, c),
        _ => return Err(Error::Precondition("payoffs too large for the grid oracle".into())),
    };
    let eps_num = eps
        .numer()
        .to_i128()
        .ok_or_else(|| Error::Precondition("epsilon too large".into()))?;
    let eps_den = eps
        .denom()
        .to_i128()
        .ok_or_else(|| Error::Precondition("epsilon too large".into()))?;
    let grid = compositions(s, d);
    // Precompute, per column strategy y, the row player's scaled utilities
    // and best response, and symmetrically per row strategy x.
    let row_data: Vec<(Vec<i128>, i128)> = grid
        .iter()
        .map(|y| {
            let u: Vec<i128> = (0..d)
                .map(|k| (0..d).map(|j| ri[k][j] * i128::from(y[j])).sum())
                .collect();
            let br = *u.iter().max().unwrap();
            (u, br)
        })
        .collect();
    let col_data: Vec<(Vec<i128>, i128)> = grid
        .iter()
        .map(|x| {
            let u: Vec<i128> = (0..d)
                .map(|j| (0..d).map(|k| ci[k][j] * i128::from(x[k])).sum())
                .collect();
            let br = *u.iter().max().unwrap();
            (u, br)
        })
        .collect();
    for (xi, x) in grid.iter().enumerate() {
        let (cu, cbr) = &col_data[xi];
        for (yi, y) in grid.iter().enumerate() {
            let (ru, rbr) = &row_data[yi];
            // Support condition: u_k · eps_den >= (eps_den − eps_num) · br.
            let row_ok = (0..d)
                .all(|k| x[k] == 0 || ru[k] * eps_den >= (eps_den - eps_num) * rbr);
            if !row_ok {
                continue;
            }
            let col_ok = (0..d)
                .all(|j| y[j] == 0 || cu[j] * eps_den >= (eps_den - eps_num) * cbr);
            if col_ok {
                let to_rat = |v: &Vec<i64>| v.iter().map(|&p| rat(p, s)).collect();
                return Ok(Some(BimatrixProfile { x: to_rat(x), y: to_rat(y) }));
            }
        }
    }
    Ok(None)
}

/// Generates a seeded random bipartite two-action polymatrix game with
/// payoffs in [0, 1] (`nl` left nodes, `nr` right nodes, edges only across
/// sides).
pub fn random_bipartite_two_action_game(nl: usize, nr: usize, seed: u64) -> PolymatrixGame {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut g = PolymatrixGame::new();
    let left: Vec<String> = (0..nl).map(|i| format!("l{i:02}")).collect();
    let right: Vec<String> = (0..nr).map(|i| format!("r{i:02}")).collect();
    for p in left.iter().chain(right.iter()) {
        g.add_player(p, 2);
    }
    let mut any = false;
    for l in &left {
        for r in &right {
            if rng.gen_range(0..2) == 0 {
                let m: Vec<Vec<Rational>> = (0..2)
                    .map(|_| (0..2).map(|_| rat(rng.gen_range(0..=12), 12)).collect())
                    .collect();
                let back: Vec<Vec<Rational>> = (0..2)
                    .map(|_| (0..2).map(|_| rat(rng.gen_range(0..=12), 12)).collect())
                    .collect();
                g.set_matrix(l, r, m);
                g.set_matrix(r, l, back);
                any = true;
            }
        }
    }
    if !any && !left.is_empty() && !right.is_empty() {
        g.set_matrix(&left[0], &right[0], vec![vec![Rational::zero(); 2]; 2]);
        g.set_matrix(&right[0], &left[0], vec![vec![Rational::zero(); 2]; 2]);
    }
    g
}
