//! Polymatrix games with exact rational payoffs.
//!
//! A polymatrix game places one player on every vertex of an undirected graph;
//! each edge `{i, j}` carries a pair of payoff matrices (one per orientation),
//! and a player's utility is the sum of the matrix payoffs against all of its
//! neighbours.  This module provides:
//!
//! * the game model, strategy profiles, and normalization;
//! * exact verifiers for ε-Nash and well-supported ε-Nash equilibria;
//! * a polynomial-time algorithm computing a 1/3-WSNE in two-action games;
//! * three gadget reductions from pure-circuit instances — to ε-WSNE
//!   (sound for all ε < 1/3), to ε-NE (sound below the 2√73 − 17 bound,
//!   using mixed-strategy encodings and NOT-gadget amplification chains),
//!   and to win-lose games (every payoff entry in {0, aᵢ}, degree ≤ 7,
//!   bipartite, sound for all ε < 1/3);
//! * decoders mapping equilibria back to pure-circuit assignments;
//! * desk-scale grid oracles and per-gadget case checkers.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num::{BigInt, One, Signed, ToPrimitive, Zero};

use crate::circuit::{GateType, NodeId, PCAssignment, PCInstance, Value};
use crate::error::Error;
use crate::rational::{ceil_int, format_rational, rat, Rational};

/// Players are named by strings (reduction players reuse node names).
pub type PlayerId = String;

fn rint(i: i64) -> Rational {
    rat(i, 1)
}

fn zero_matrix(rows: usize, cols: usize) -> Vec<Vec<Rational>> {
    vec![vec![Rational::zero(); cols]; rows]
}

/// 2×2 matrix literal helper (row major).
fn m2(a: Rational, b: Rational, c: Rational, d: Rational) -> Vec<Vec<Rational>> {
    vec![vec![a, b], vec![c, d]]
}

fn anti_diag_one() -> Vec<Vec<Rational>> {
    m2(rint(0), rint(1), rint(1), rint(0))
}

fn diag(a: Rational, b: Rational) -> Vec<Vec<Rational>> {
    m2(a, Rational::zero(), Rational::zero(), b)
}

// ---------------------------------------------------------------------------
// Game model
// ---------------------------------------------------------------------------

/// A polymatrix game: players with action counts and per-ordered-pair payoff
/// matrices.  For every edge both orientations are stored; `A[(i,j)]` has
/// dimensions `m_i × m_j` and gives player `i`'s payoffs against `j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolymatrixGame {
    /// Action count per player.
    pub actions: BTreeMap<PlayerId, usize>,
    /// Payoff matrices keyed by ordered player pairs.
    pub matrices: BTreeMap<(PlayerId, PlayerId), Vec<Vec<Rational>>>,
}

impl PolymatrixGame {
    /// Empty game.
    pub fn new() -> PolymatrixGame {
        PolymatrixGame { actions: BTreeMap::new(), matrices: BTreeMap::new() }
    }

    /// Registers a player (idempotent; panics on conflicting action counts).
    pub fn add_player(&mut self, id: &str, m: usize) {
        let prev = self.actions.insert(id.to_string(), m);
        if let Some(p) = prev {
            assert_eq!(p, m, "conflicting action counts for player {id}");
        }
    }

    /// Adds `add` entrywise into `A[(i, j)]`, creating zero matrices for both
    /// orientations if the edge did not exist yet.  Both players must already
    /// be registered.
    pub fn accumulate(&mut self, i: &str, j: &str, add: &[Vec<Rational>]) {
        let mi = *self.actions.get(i).expect("unknown player");
        let mj = *self.actions.get(j).expect("unknown player");
        assert!(add.len() == mi && add.iter().all(|r| r.len() == mj), "matrix shape");
        self.matrices
            .entry((j.to_string(), i.to_string()))
            .or_insert_with(|| zero_matrix(mj, mi));
        let m = self
            .matrices
            .entry((i.to_string(), j.to_string()))
            .or_insert_with(|| zero_matrix(mi, mj));
        for (row, arow) in m.iter_mut().zip(add) {
            for (cell, a) in row.iter_mut().zip(arow) {
                *cell += a;
            }
        }
    }

    /// Replaces `A[(i, j)]` (creating the zero reverse orientation if needed).
    pub fn set_matrix(&mut self, i: &str, j: &str, m: Vec<Vec<Rational>>) {
        let mi = *self.actions.get(i).expect("unknown player");
        let mj = *self.actions.get(j).expect("unknown player");
        assert!(m.len() == mi && m.iter().all(|r| r.len() == mj), "matrix shape");
        self.matrices
            .entry((j.to_string(), i.to_string()))
            .or_insert_with(|| zero_matrix(mj, mi));
        self.matrices.insert((i.to_string(), j.to_string()), m);
    }

    /// Players in sorted order.
    pub fn players(&self) -> Vec<PlayerId> {
        self.actions.keys().cloned().collect()
    }

    /// Neighbours of `i` (players sharing an edge with it).
    pub fn neighbors(&self, i: &str) -> BTreeSet<PlayerId> {
        self.matrices
            .keys()
            .filter(|(a, _)| a == i)
            .map(|(_, b)| b.clone())
            .collect()
    }

    /// Undirected edges as sorted pairs.
    pub fn edges(&self) -> BTreeSet<(PlayerId, PlayerId)> {
        self.matrices
            .keys()
            .map(|(a, b)| if a < b { (a.clone(), b.clone()) } else { (b.clone(), a.clone()) })
            .collect()
    }

    /// `A[(i, j)]` if the edge exists.
    pub fn matrix(&self, i: &str, j: &str) -> Option<&Vec<Vec<Rational>>> {
        self.matrices.get(&(i.to_string(), j.to_string()))
    }

    /// Graph degree of a player.
    pub fn degree(&self, i: &str) -> usize {
        self.neighbors(i).len()
    }
}

impl Default for PolymatrixGame {
    fn default() -> Self {
        Self::new()
    }
}

/// Structural validation: every matrix references known players, has the right
/// dimensions, and both orientations of every edge are present.
pub fn validate_polymatrix(g: &PolymatrixGame) -> Result<(), Error> {
    for ((i, j), m) in &g.matrices {
        let mi = *g
            .actions
            .get(i)
            .ok_or_else(|| Error::InvalidInstance(format!("matrix references unknown player {i}")))?;
        let mj = *g
            .actions
            .get(j)
            .ok_or_else(|| Error::InvalidInstance(format!("matrix references unknown player {j}")))?;
        if m.len() != mi || m.iter().any(|r| r.len() != mj) {
            return Err(Error::InvalidInstance(format!(
                "matrix ({i},{j}) must be {mi}x{mj}"
            )));
        }
        if !g.matrices.contains_key(&(j.clone(), i.clone())) {
            return Err(Error::InvalidInstance(format!(
                "edge {{{i},{j}}} is missing the ({j},{i}) orientation"
            )));
        }
    }
    Ok(())
}

/// A mixed-strategy profile: one probability vector per player.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrategyProfile {
    /// Probability vector per player.
    pub strategies: BTreeMap<PlayerId, Vec<Rational>>,
}

impl StrategyProfile {
    /// Builds a profile from literal pairs.
    pub fn from_pairs(pairs: &[(&str, Vec<Rational>)]) -> StrategyProfile {
        StrategyProfile {
            strategies: pairs.iter().map(|(p, v)| (p.to_string(), v.clone())).collect(),
        }
    }

    /// The uniform profile for a game.
    pub fn uniform(g: &PolymatrixGame) -> StrategyProfile {
        StrategyProfile {
            strategies: g
                .actions
                .iter()
                .map(|(p, &m)| (p.clone(), vec![Rational::new(BigInt::one(), BigInt::from(m)); m]))
                .collect(),
        }
    }

    /// Checks totality, dimensions, nonnegativity, and unit sums against `g`.
    pub fn validate(&self, g: &PolymatrixGame) -> Result<(), Error> {
        for (p, &m) in &g.actions {
            let s = self
                .strategies
                .get(p)
                .ok_or_else(|| Error::PartialAssignment(format!("no strategy for player {p}")))?;
            if s.len() != m {
                return Err(Error::InvalidInstance(format!(
                    "player {p} needs {m} probabilities, got {}",
                    s.len()
                )));
            }
            if s.iter().any(|x| x.is_negative()) {
                return Err(Error::InvalidInstance(format!("negative probability for {p}")));
            }
            let total: Rational = s.iter().sum();
            if !total.is_one() {
                return Err(Error::InvalidInstance(format!(
                    "probabilities of {p} sum to {}, not 1",
                    format_rational(&total)
                )));
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Normalization
// ---------------------------------------------------------------------------

/// Per-player normalization bounds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlayerBounds {
    /// Best achievable total payoff before normalization.
    pub upper: Rational,
    /// Worst achievable total payoff before normalization.
    pub lower: Rational,
    /// Graph degree.
    pub degree: usize,
}

/// Normalization summary for a whole game.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalizationData {
    /// Bounds per player.
    pub bounds: BTreeMap<PlayerId, PlayerBounds>,
}

/// Rescales every player's payoffs so that their best total payoff is 1 and
/// worst is 0: each entry `z` of `A[(i, j)]` becomes
/// `(z − Lᵢ/d(i)) / (Uᵢ − Lᵢ)` where `Uᵢ`/`Lᵢ` are the extreme totals and
/// `d(i)` the degree.  Players with `Uᵢ = Lᵢ` get all-zero payoffs.
pub fn normalize_game(g: &PolymatrixGame) -> (PolymatrixGame, NormalizationData) {
    let mut bounds = BTreeMap::new();
    for (i, &mi) in &g.actions {
        let nbrs = g.neighbors(i);
        let mut upper: Option<Rational> = None;
        let mut lower: Option<Rational> = None;
        for k in 0..mi {
            let mut hi = Rational::zero();
            let mut lo = Rational::zero();
            for j in &nbrs {
                let row = &g.matrices[&(i.clone(), j.clone())][k];
                hi += row.iter().max().cloned().unwrap_or_else(Rational::zero);
                lo += row.iter().min().cloned().unwrap_or_else(Rational::zero);
            }
            upper = Some(match upper {
                Some(u) => u.max(hi),
                None => hi,
            });
            lower = Some(match lower {
                Some(l) => l.min(lo),
                None => lo,
            });
        }
        bounds.insert(
            i.clone(),
            PlayerBounds {
                upper: upper.unwrap_or_else(Rational::zero),
                lower: lower.unwrap_or_else(Rational::zero),
                degree: nbrs.len(),
            },
        );
    }
    let mut out = PolymatrixGame::new();
    out.actions = g.actions.clone();
    for ((i, j), m) in &g.matrices {
        let b = &bounds[i];
        let span = &b.upper - &b.lower;
        let rescaled = if span.is_zero() {
            zero_matrix(m.len(), m[0].len())
        } else {
            let shift = &b.lower / rint(b.degree as i64);
            m.iter()
                .map(|row| row.iter().map(|z| (z - &shift) / &span).collect())
                .collect()
        };
        out.matrices.insert((i.clone(), j.clone()), rescaled);
    }
    (out, NormalizationData { bounds })
}

// ---------------------------------------------------------------------------
// Payoffs and equilibrium verification
// ---------------------------------------------------------------------------

/// Exact per-action utilities of `player` under `profile`:
/// `u_i(k) = Σ_j e_kᵀ · A_ij · s_j`.
pub fn payoff_vector(
    g: &PolymatrixGame,
    profile: &StrategyProfile,
    player: &str,
) -> Result<Vec<Rational>, Error> {
    profile.validate(g)?;
    let mi = *g
        .actions
        .get(player)
        .ok_or_else(|| Error::InvalidInstance(format!("unknown player {player}")))?;
    let mut out = vec![Rational::zero(); mi];
    for j in g.neighbors(player) {
        let m = &g.matrices[&(player.to_string(), j.clone())];
        let sj = &profile.strategies[&j];
        for (k, u) in out.iter_mut().enumerate() {
            for (q, p) in sj.iter().enumerate() {
                *u += &m[k][q] * p;
            }
        }
    }
    Ok(out)
}

/// Equilibrium notions recognised by the verifiers and oracles.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EqMode {
    /// ε-Nash: each player's expected payoff is within ε of their best response.
    Ne,
    /// Well-supported ε-Nash: every support action is within ε of the best response.
    Wsne,
}

/// Per-player equilibrium verdicts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlayerVerdicts {
    /// `true` iff the player's condition holds.
    pub satisfied: BTreeMap<PlayerId, bool>,
}

impl PlayerVerdicts {
    /// All players satisfied?
    pub fn all_satisfied(&self) -> bool {
        self.satisfied.values().all(|&b| b)
    }

    /// Players whose condition fails.
    pub fn violating_players(&self) -> Vec<PlayerId> {
        self.satisfied.iter().filter(|(_, &b)| !b).map(|(p, _)| p.clone()).collect()
    }
}

fn verify_equilibrium(
    g: &PolymatrixGame,
    profile: &StrategyProfile,
    eps: &Rational,
    mode: EqMode,
) -> Result<PlayerVerdicts, Error> {
    if eps.is_negative() {
        return Err(Error::Precondition("epsilon must be nonnegative".into()));
    }
    profile.validate(g)?;
    let mut satisfied = BTreeMap::new();
    for i in g.players() {
        let u = payoff_vector(g, profile, &i)?;
        let br = u.iter().max().cloned().unwrap_or_else(Rational::zero);
        let s = &profile.strategies[&i];
        let ok = match mode {
            EqMode::Wsne => u
                .iter()
                .zip(s)
                .all(|(uk, pk)| pk.is_zero() || *uk >= &br - eps),
            EqMode::Ne => {
                let expected: Rational = u.iter().zip(s).map(|(uk, pk)| uk * pk).sum();
                expected >= &br - eps
            }
        };
        satisfied.insert(i, ok);
    }
    Ok(PlayerVerdicts { satisfied })
}

/// Well-supported ε-Nash verifier (exact rationals).
pub fn verify_wsne(
    g: &PolymatrixGame,
    profile: &StrategyProfile,
    eps: &Rational,
) -> Result<PlayerVerdicts, Error> {
    verify_equilibrium(g, profile, eps, EqMode::Wsne)
}

/// ε-Nash verifier (exact rationals).
pub fn verify_ne(
    g: &PolymatrixGame,
    profile: &StrategyProfile,
    eps: &Rational,
) -> Result<PlayerVerdicts, Error> {
    verify_equilibrium(g, profile, eps, EqMode::Ne)
}

// ---------------------------------------------------------------------------
// The 1/3-WSNE algorithm for two-action games
// ---------------------------------------------------------------------------

/// Computes a 1/3-WSNE of a normalized two-action polymatrix game in
/// polynomial time.
///
/// Step 1 repeatedly removes any player `i` with an action `k` whose payoff
/// advantage `u_i(k) − u_i(1−k)` is at least −1/3 at *every* corner profile of
/// the remaining neighbours (the extremal corner value is a sum of per-column
/// minima by linearity); `i` is fixed to `k` and its fixed strategy is folded
/// into the neighbours' utilities as a constant bonus.  Step 2 lets all
/// surviving players mix uniformly.  Ties break towards the lowest player id
/// and action 0.
pub fn algo_third_wsne(g: &PolymatrixGame) -> Result<StrategyProfile, Error> {
    validate_polymatrix(g)?;
    if let Some((p, &m)) = g.actions.iter().find(|(_, &m)| m != 2) {
        return Err(Error::Precondition(format!(
            "player {p} has {m} actions; the algorithm needs exactly two"
        )));
    }
    let minus_third = rat(-1, 3);
    let mut active: BTreeSet<PlayerId> = g.actions.keys().cloned().collect();
    let mut fixed: BTreeMap<PlayerId, usize> = BTreeMap::new();
    let mut bonus: BTreeMap<PlayerId, [Rational; 2]> = g
        .actions
        .keys()
        .map(|p| (p.clone(), [Rational::zero(), Rational::zero()]))
        .collect();
    loop {
        let mut removal: Option<(PlayerId, usize)> = None;
        'scan: for i in &active {
            for k in 0..2usize {
                let b = &bonus[i];
                let mut worst = &b[k] - &b[1 - k];
                for j in g.neighbors(i) {
                    if !active.contains(&j) {
                        continue;
                    }
                    let m = &g.matrices[&(i.clone(), j.clone())];
                    let d0 = &m[k][0] - &m[1 - k][0];
                    let d1 = &m[k][1] - &m[1 - k][1];
                    worst += d0.min(d1);
                }
                if worst >= minus_third {
                    removal = Some((i.clone(), k));
                    break 'scan;
                }
            }
        }
        let Some((i, k)) = removal else { break };
        active.remove(&i);
        fixed.insert(i.clone(), k);
        for j in g.neighbors(&i) {
            if !active.contains(&j) {
                continue;
            }
            let mji = g.matrices[&(j.clone(), i.clone())].clone();
            let b = bonus.get_mut(&j).unwrap();
            b[0] += &mji[0][k];
            b[1] += &mji[1][k];
        }
    }
    let mut strategies = BTreeMap::new();
    for p in g.actions.keys() {
        let s = match fixed.get(p) {
            Some(&0) => vec![rint(1), rint(0)],
            Some(_) => vec![rint(0), rint(1)],
            None => vec![rat(1, 2), rat(1, 2)],
        };
        strategies.insert(p.clone(), s);
    }
    Ok(StrategyProfile { strategies })
}

// ---------------------------------------------------------------------------
// Reductions from pure-circuit instances
// ---------------------------------------------------------------------------

/// Records how a reduced game's players relate to the source instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PMReductionMap {
    /// For each original node, the player whose strategy encodes its value.
    pub node_players: BTreeMap<NodeId, PlayerId>,
    /// The mixed-strategy cutoff, present for the ε-NE reduction.
    pub delta: Option<Rational>,
}

fn require_gate_set(inst: &PCInstance, allowed: &[GateType]) -> Result<(), Error> {
    for t in inst.gate_types() {
        if !allowed.contains(&t) {
            return Err(Error::UnsupportedGateSet(format!(
                "gate {} is not supported by this reduction; rewrite to {{NOT, AND, PURIFY}} first",
                t.name()
            )));
        }
    }
    Ok(())
}

/// Reduces a pure-circuit instance over {NOT, AND, PURIFY} to a two-action
/// polymatrix game whose ε-WSNEs, for every ε < 1/3, decode to satisfying
/// assignments.  One player per node; each gate's output player receives the
/// gadget payoff matrices against the gate's input players and all reverse
/// matrices are zero.  The game is already normalized, and for restricted
/// instances it is bipartite with degree ≤ 3.
pub fn reduce_pc_to_wsne(inst: &PCInstance) -> Result<(PolymatrixGame, PMReductionMap), Error> {
    require_gate_set(inst, &[GateType::Not, GateType::And, GateType::Purify])?;
    let mut g = PolymatrixGame::new();
    for n in inst.sorted_nodes() {
        g.add_player(&n, 2);
    }
    for gate in &inst.gates {
        match gate.gate_type {
            GateType::Not => {
                let (u, v) = (&gate.inputs[0], &gate.outputs[0]);
                g.accumulate(v, u, &anti_diag_one());
            }
            GateType::And => {
                let (u, v, w) = (&gate.inputs[0], &gate.inputs[1], &gate.outputs[0]);
                let m = diag(rat(1, 2), rat(1, 6));
                g.accumulate(w, u, &m);
                g.accumulate(w, v, &m);
            }
            GateType::Purify => {
                let (u, v, w) = (&gate.inputs[0], &gate.outputs[0], &gate.outputs[1]);
                g.accumulate(v, u, &diag(rat(1, 3), rint(1)));
                g.accumulate(w, u, &diag(rint(1), rat(1, 3)));
            }
            _ => unreachable!("gate set checked above"),
        }
    }
    let map = PMReductionMap {
        node_players: inst.sorted_nodes().into_iter().map(|n| (n.clone(), n)).collect(),
        delta: None,
    };
    Ok((g, map))
}

/// Decodes a profile of a WSNE-reduced game: pure zero ↦ 0, pure one ↦ 1,
/// strictly mixed ↦ ⊥ (support-based, so (999/1000, 1/1000) is ⊥).
pub fn decode_wsne_profile(map: &PMReductionMap, profile: &StrategyProfile) -> PCAssignment {
    let mut a = PCAssignment::new();
    for (node, player) in &map.node_players {
        if let Some(s) = profile.strategies.get(player) {
            let v = if s[1].is_zero() {
                Value::Zero
            } else if s[0].is_zero() {
                Value::One
            } else {
                Value::Bot
            };
            a.set(node, v);
        }
    }
    a
}

// ---------------------------------------------------------------------------
// ε-NE reduction parameters
// ---------------------------------------------------------------------------

/// Parameters of the ε-NE reduction: the cutoff δ, the chain half-length k,
/// and the per-gadget gap growth constant C(ε, δ).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NEGadgetParams {
    /// Target approximation quality.
    pub epsilon: Rational,
    /// Mixed-strategy cutoff δ ∈ (0, 1/4) with ε < δ(1−2δ) < 2√73 − 17.
    pub delta: Rational,
    /// Half the NOT-chain length (chains have even length 2k).
    pub k: usize,
    /// Gap growth per NOT gadget: C(ε, δ) = 2(δ(1−2δ) − ε)/(1 − 2δ).
    pub gap_growth: Rational,
}

impl NEGadgetParams {
    /// The chain length 2k appended to AND/PURIFY gadget outputs.
    pub fn chain_length(&self) -> usize {
        2 * self.k
    }
}

/// `x < 2√73 − 17`, decided exactly via `(x + 17)² < 292` (valid for x ≥ −17).
fn below_ne_bound(x: &Rational) -> bool {
    let y = x + rint(17);
    &y * &y < rint(292)
}

/// Picks the smallest cutoff δ on the grid {j/1000} ∩ (0, 1/4) with
/// ε < δ(1−2δ) < 2√73 − 17, together with the minimal even chain length
/// 2k ≥ (1 − 4δ)/C(ε, δ).
pub fn choose_delta(eps: &Rational) -> Result<NEGadgetParams, Error> {
    if eps.is_negative() {
        return Err(Error::Precondition("epsilon must be nonnegative".into()));
    }
    if !below_ne_bound(eps) {
        return Err(Error::Precondition(format!(
            "epsilon = {} is not below the bound 2*sqrt(73) - 17",
            format_rational(eps)
        )));
    }
    for j in 1..250i64 {
        let delta = rat(j, 1000);
        let prod = &delta * (rint(1) - rint(2) * &delta);
        if eps < &prod && below_ne_bound(&prod) {
            let one_minus_2d = rint(1) - rint(2) * &delta;
            let gap_growth = rint(2) * (&prod - eps) / &one_minus_2d;
            let bound = (rint(1) - rint(4) * &delta) / &gap_growth;
            let mut two_k = ceil_int(&bound).max(2);
            if two_k % 2 != 0 {
                two_k += 1;
            }
            return Ok(NEGadgetParams {
                epsilon: eps.clone(),
                delta,
                k: (two_k / 2) as usize,
                gap_growth,
            });
        }
    }
    Err(Error::Precondition(format!(
        "no cutoff on the 1/1000 grid works for epsilon = {}; a finer grid is needed",
        format_rational(eps)
    )))
}

/// One step of the NOT-chain gap recurrence: a payoff gap γ at the chain input
/// guarantees a gap of at least `min(γ + C, 1 − 2δ)` (capped, and absorbing at
/// 1 − 2δ) at the next chain player, in any ε-NE.
pub fn gap_recurrence_step(gamma: &Rational, params: &NEGadgetParams) -> Rational {
    let cap = rint(1) - rint(2) * &params.delta;
    if gamma >= &cap {
        cap
    } else {
        (gamma + &params.gap_growth).min(cap)
    }
}

/// Iterates the gap recurrence from the starting gap 2δ for 2k steps,
/// returning all 2k + 1 lower bounds.  The final bound is 1 − 2δ, which is
/// what makes the even NOT chains restore a clean value encoding.
pub fn gap_recurrence_sequence(params: &NEGadgetParams) -> Vec<Rational> {
    let mut g = rint(2) * &params.delta;
    let mut out = vec![g.clone()];
    for _ in 0..params.chain_length() {
        g = gap_recurrence_step(&g, params);
        out.push(g.clone());
    }
    out
}

/// Generates fresh player ids that cannot collide with existing ones.
struct FreshPlayers {
    used: BTreeSet<String>,
    counter: usize,
}

impl FreshPlayers {
    fn new<I: IntoIterator<Item = String>>(reserved: I) -> FreshPlayers {
        FreshPlayers { used: reserved.into_iter().collect(), counter: 0 }
    }

    fn fresh(&mut self, hint: &str) -> String {
        loop {
            let name = format!("{hint}#{}", self.counter);
            self.counter += 1;
            if self.used.insert(name.clone()) {
                return name;
            }
        }
    }
}

/// Reduces a pure-circuit instance over {NOT, AND, PURIFY} to a two-action
/// polymatrix game whose ε-NEs decode (with cutoff δ) to satisfying
/// assignments, for any ε admitting a cutoff.  NOT gates keep the WSNE
/// matrix; AND and PURIFY use δ-parameterized payoffs and drive an internal
/// player whose value is amplified through an even chain of 2k NOT gadgets
/// ending at the declared output player.
pub fn reduce_pc_to_ne(
    inst: &PCInstance,
    eps: &Rational,
) -> Result<(PolymatrixGame, PMReductionMap), Error> {
    require_gate_set(inst, &[GateType::Not, GateType::And, GateType::Purify])?;
    let params = choose_delta(eps)?;
    let d = &params.delta;
    let mut g = PolymatrixGame::new();
    for n in inst.sorted_nodes() {
        g.add_player(&n, 2);
    }
    let mut fresh = FreshPlayers::new(inst.sorted_nodes());
    // Appends 2k NOT gadgets from `from`, ending at the declared output `out`.
    let chain = |g: &mut PolymatrixGame, fresh: &mut FreshPlayers, from: String, out: &str| {
        let mut prev = from;
        for t in 1..params.chain_length() {
            let nxt = fresh.fresh(&format!("{out}~c{t}"));
            g.add_player(&nxt, 2);
            g.accumulate(&nxt, &prev, &anti_diag_one());
            prev = nxt;
        }
        g.accumulate(out, &prev, &anti_diag_one());
    };
    let and_hi = (rint(1) + d) / (rint(6) - rint(2) * d);
    let purify_lo = (rint(1) + rint(2) * d) / (rint(3) - rint(2) * d);
    for gate in &inst.gates {
        match gate.gate_type {
            GateType::Not => {
                let (u, v) = (&gate.inputs[0], &gate.outputs[0]);
                g.accumulate(v, u, &anti_diag_one());
            }
            GateType::And => {
                let (u, v, w) = (&gate.inputs[0], &gate.inputs[1], &gate.outputs[0]);
                let inner = fresh.fresh(&format!("{w}~and"));
                g.add_player(&inner, 2);
                let m = diag(rat(1, 2), and_hi.clone());
                g.accumulate(&inner, u, &m);
                g.accumulate(&inner, v, &m);
                chain(&mut g, &mut fresh, inner, w);
            }
            GateType::Purify => {
                let (u, v, w) = (&gate.inputs[0], &gate.outputs[0], &gate.outputs[1]);
                let inner_v = fresh.fresh(&format!("{v}~pv"));
                let inner_w = fresh.fresh(&format!("{w}~pw"));
                g.add_player(&inner_v, 2);
                g.add_player(&inner_w, 2);
                g.accumulate(&inner_v, u, &diag(purify_lo.clone(), rint(1)));
                g.accumulate(&inner_w, u, &diag(rint(1), purify_lo.clone()));
                chain(&mut g, &mut fresh, inner_v, v);
                chain(&mut g, &mut fresh, inner_w, w);
            }
            _ => unreachable!("gate set checked above"),
        }
    }
    let map = PMReductionMap {
        node_players: inst.sorted_nodes().into_iter().map(|n| (n.clone(), n)).collect(),
        delta: Some(params.delta.clone()),
    };
    Ok((g, map))
}

/// Decodes a profile of an NE-reduced game with cutoff δ: mass ≥ 1−δ on
/// action zero ↦ 0, mass ≥ 1−δ on action one ↦ 1, otherwise ⊥.
pub fn decode_ne_profile(
    map: &PMReductionMap,
    profile: &StrategyProfile,
    delta: &Rational,
) -> PCAssignment {
    let cutoff = rint(1) - delta;
    let mut a = PCAssignment::new();
    for (node, player) in &map.node_players {
        if let Some(s) = profile.strategies.get(player) {
            let v = if s[0] >= cutoff {
                Value::Zero
            } else if s[1] >= cutoff {
                Value::One
            } else {
                Value::Bot
            };
            a.set(node, v);
        }
    }
    a
}

// ---------------------------------------------------------------------------
// Win-lose reduction
// ---------------------------------------------------------------------------

/// Reduces a pure-circuit instance over {NOT, AND, PURIFY} to a *win-lose*
/// two-action polymatrix game: every player's nonzero payoff entries share a
/// single value, and ε-WSNEs for ε < 1/3 decode to satisfying assignments.
///
/// Each node `v` is first split into a double-negation triple `v1 → v2 → v3`
/// (gadget outputs drive `v1`, gadget inputs read `v3`), which caps the
/// degree at 7.  Each NOT gadget routes through one auxiliary copy player so
/// the game is bipartite (originals on one side, auxiliaries on the other).
/// AND gadgets use six auxiliary copy players with 1/6 payoffs; PURIFY gadgets
/// use three auxiliary copy players with 1/3 payoffs.
pub fn reduce_pc_to_winlose(
    inst: &PCInstance,
) -> Result<(PolymatrixGame, PMReductionMap), Error> {
    require_gate_set(inst, &[GateType::Not, GateType::And, GateType::Purify])?;
    let mut g = PolymatrixGame::new();
    let mut fresh = FreshPlayers::new(std::iter::empty());
    let mut trio: BTreeMap<NodeId, [PlayerId; 3]> = BTreeMap::new();
    // A win-lose NOT gadget: `aux` copies `from` (identity payoff 1) and `to`
    // negates `aux` (anti-diagonal payoff 1).
    let winlose_not =
        |g: &mut PolymatrixGame, fresh: &mut FreshPlayers, from: &str, to: &str, hint: &str| {
            let aux = fresh.fresh(hint);
            g.add_player(&aux, 2);
            g.accumulate(&aux, from, &diag(rint(1), rint(1)));
            g.accumulate(to, &aux, &anti_diag_one());
        };
    for n in inst.sorted_nodes() {
        let names = [fresh.fresh(&format!("{n}!1")), fresh.fresh(&format!("{n}!2")), fresh
            .fresh(&format!("{n}!3"))];
        for p in &names {
            g.add_player(p, 2);
        }
        trio.insert(n, names);
    }
    for n in inst.sorted_nodes() {
        let [p1, p2, p3] = trio[&n].clone();
        winlose_not(&mut g, &mut fresh, &p1, &p2, &format!("{n}!n12"));
        winlose_not(&mut g, &mut fresh, &p2, &p3, &format!("{n}!n23"));
    }
    let sixth = diag(rat(1, 6), rat(1, 6));
    let sixth_zero = m2(rat(1, 6), rint(0), rint(0), rint(0));
    let third_both = diag(rat(1, 3), rat(1, 3));
    let third_zero = m2(rat(1, 3), rint(0), rint(0), rint(0));
    let third_one = m2(rint(0), rint(0), rint(0), rat(1, 3));
    for (idx, gate) in inst.gates.iter().enumerate() {
        // Copy players replicating a gadget input.
        let copies = |g: &mut PolymatrixGame, fresh: &mut FreshPlayers, src: &str, n: usize| {
            (0..n)
                .map(|t| {
                    let c = fresh.fresh(&format!("g{idx}!{src}!cp{t}"));
                    g.add_player(&c, 2);
                    g.accumulate(&c, src, &diag(rint(1), rint(1)));
                    c
                })
                .collect::<Vec<_>>()
        };
        match gate.gate_type {
            GateType::Not => {
                let u3 = trio[&gate.inputs[0]][2].clone();
                let v1 = trio[&gate.outputs[0]][0].clone();
                winlose_not(&mut g, &mut fresh, &u3, &v1, &format!("g{idx}!not"));
            }
            GateType::And => {
                let u3 = trio[&gate.inputs[0]][2].clone();
                let v3 = trio[&gate.inputs[1]][2].clone();
                let w1 = trio[&gate.outputs[0]][0].clone();
                let uc = copies(&mut g, &mut fresh, &u3, 3);
                let vc = copies(&mut g, &mut fresh, &v3, 3);
                g.accumulate(&w1, &uc[0], &sixth);
                g.accumulate(&w1, &vc[0], &sixth);
                for x in [&uc[1], &uc[2], &vc[1], &vc[2]] {
                    g.accumulate(&w1, x, &sixth_zero);
                }
            }
            GateType::Purify => {
                let u3 = trio[&gate.inputs[0]][2].clone();
                let v1 = trio[&gate.outputs[0]][0].clone();
                let w1 = trio[&gate.outputs[1]][0].clone();
                let uc = copies(&mut g, &mut fresh, &u3, 3);
                for x in [&uc[0], &uc[1]] {
                    g.accumulate(&v1, x, &third_one);
                    g.accumulate(&w1, x, &third_zero);
                }
                g.accumulate(&v1, &uc[2], &third_both);
                g.accumulate(&w1, &uc[2], &third_both);
            }
            _ => unreachable!("gate set checked above"),
        }
    }
    let map = PMReductionMap {
        node_players: inst
            .sorted_nodes()
            .into_iter()
            .map(|n| {
                let p = trio[&n][2].clone();
                (n, p)
            })
            .collect(),
        delta: None,
    };
    Ok((g, map))
}

/// Players whose nonzero payoff entries do not all share a single value
/// (empty iff the game is win-lose).
pub fn win_lose_violations(g: &PolymatrixGame) -> Vec<PlayerId> {
    let mut bad = Vec::new();
    for i in g.players() {
        let mut seen: BTreeSet<Rational> = BTreeSet::new();
        for j in g.neighbors(&i) {
            for row in &g.matrices[&(i.clone(), j.clone())] {
                for z in row {
                    if !z.is_zero() {
                        seen.insert(z.clone());
                    }
                }
            }
        }
        if seen.len() > 1 {
            bad.push(i);
        }
    }
    bad
}

/// Two-colors the game's interaction graph, returning the two sides, or
/// `None` if it is not bipartite.
pub fn game_bipartition(
    g: &PolymatrixGame,
) -> Option<(BTreeSet<PlayerId>, BTreeSet<PlayerId>)> {
    let mut color: BTreeMap<PlayerId, bool> = BTreeMap::new();
    for start in g.players() {
        if color.contains_key(&start) {
            continue;
        }
        color.insert(start.clone(), false);
        let mut queue = VecDeque::from([start]);
        while let Some(p) = queue.pop_front() {
            let c = color[&p];
            for q in g.neighbors(&p) {
                match color.get(&q) {
                    Some(&cq) if cq == c => return None,
                    Some(_) => {}
                    None => {
                        color.insert(q.clone(), !c);
                        queue.push_back(q);
                    }
                }
            }
        }
    }
    let mut a = BTreeSet::new();
    let mut b = BTreeSet::new();
    for (p, c) in color {
        if c {
            b.insert(p);
        } else {
            a.insert(p);
        }
    }
    Some((a, b))
}

// ---------------------------------------------------------------------------
// Grid oracles
// ---------------------------------------------------------------------------

const GRID_BUDGET: u64 = 3_000_000;

struct GridContext {
    players: Vec<PlayerId>,
    s: i64,
    /// Per player: (neighbor index, 2×2 payoff numerators over `denom`).
    links: Vec<Vec<(usize, [[i128; 2]; 2])>>,
    eps_num: i128,
    eps_den: i128,
    denom: i128,
}

impl GridContext {
    fn build(g: &PolymatrixGame, eps: &Rational, step: &Rational) -> Result<GridContext, Error> {
        validate_polymatrix(g)?;
        if g.actions.values().any(|&m| m != 2) {
            return Err(Error::Precondition("grid search needs two-action players".into()));
        }
        if eps.is_negative() {
            return Err(Error::Precondition("epsilon must be nonnegative".into()));
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
        let players = g.players();
        let index: BTreeMap<&PlayerId, usize> =
            players.iter().enumerate().map(|(i, p)| (p, i)).collect();
        // Common denominator of all payoff entries.
        let mut denom = BigInt::one();
        for m in g.matrices.values() {
            for row in m {
                for z in row {
                    denom = num::integer::lcm(denom, z.denom().clone());
                }
            }
        }
        let denom: i128 = denom
            .to_i128()
            .ok_or_else(|| Error::Precondition("payoff denominators too large for grid search".into()))?;
        let mut links = vec![Vec::new(); players.len()];
        for (pi, p) in players.iter().enumerate() {
            for q in g.neighbors(p) {
                let m = &g.matrices[&(p.clone(), q.clone())];
                let mut a = [[0i128; 2]; 2];
                for (k, row) in m.iter().enumerate() {
                    for (c, z) in row.iter().enumerate() {
                        let scaled = z * Rational::from_integer(BigInt::from(denom));
                        a[k][c] = scaled
                            .to_integer()
                            .to_i128()
                            .ok_or_else(|| Error::Precondition("payoff too large".into()))?;
                    }
                }
                links[pi].push((index[&q], a));
            }
        }
        let eps_num = eps.numer().to_i128().ok_or_else(|| Error::Precondition("epsilon too large".into()))?;
        let eps_den = eps.denom().to_i128().unwrap();
        Ok(GridContext { players, s, links, eps_num, eps_den, denom })
    }

    fn candidates(&self) -> Result<u64, Error> {
        let points = self.s as u64 + 1;
        let mut total: u64 = 1;
        for _ in &self.players {
            total = total
                .checked_mul(points)
                .filter(|&t| t <= GRID_BUDGET)
                .ok_or_else(|| {
                    Error::Precondition(format!(
                        "grid of {points}^{} profiles exceeds the search budget",
                        self.players.len()
                    ))
                })?;
        }
        Ok(total)
    }

    /// `t[i]` is the numerator (over s) of player i's mass on action one.
    fn is_equilibrium(&self, t: &[i64], mode: EqMode) -> bool {
        let s = self.s as i128;
        for (i, lk) in self.links.iter().enumerate() {
            let mut u = [0i128; 2];
            for &(j, ref a) in lk {
                let tj = t[j] as i128;
                for (k, uk) in u.iter_mut().enumerate() {
                    *uk += a[k][0] * (s - tj) + a[k][1] * tj;
                }
            }
            let br = u[0].max(u[1]);
            let ti = t[i] as i128;
            match mode {
                EqMode::Wsne => {
                    // Support actions: zero iff ti < s, one iff ti > 0.
                    if ti < s && (br - u[0]) * self.eps_den > self.eps_num * self.denom * s {
                        return false;
                    }
                    if ti > 0 && (br - u[1]) * self.eps_den > self.eps_num * self.denom * s {
                        return false;
                    }
                }
                EqMode::Ne => {
                    let expected = (s - ti) * u[0] + ti * u[1];
                    if (br * s - expected) * self.eps_den > self.eps_num * self.denom * s * s {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn profile(&self, t: &[i64]) -> StrategyProfile {
        StrategyProfile {
            strategies: self
                .players
                .iter()
                .zip(t)
                .map(|(p, &ti)| (p.clone(), vec![rat(self.s - ti, self.s), rat(ti, self.s)]))
                .collect(),
        }
    }
}

fn grid_scan(
    g: &PolymatrixGame,
    eps: &Rational,
    step: &Rational,
    mode: EqMode,
    limit: usize,
) -> Result<Vec<StrategyProfile>, Error> {
    let ctx = GridContext::build(g, eps, step)?;
    ctx.candidates()?;
    let n = ctx.players.len();
    let mut t = vec![0i64; n];
    let mut found = Vec::new();
    loop {
        if ctx.is_equilibrium(&t, mode) {
            found.push(ctx.profile(&t));
            if found.len() >= limit {
                return Ok(found);
            }
        }
        // Odometer: the last player's coordinate moves fastest, so profiles
        // are produced in ascending lexicographic order of mass-on-one.
        let mut pos = n;
        loop {
            if pos == 0 {
                return Ok(found);
            }
            pos -= 1;
            if t[pos] < ctx.s {
                t[pos] += 1;
                break;
            }
            t[pos] = 0;
        }
    }
}

/// Scans the product grid of per-player mixing probabilities with the given
/// step and returns the first profile passing the requested verifier, or
/// `None`.  Exact arithmetic throughout; errors if the grid exceeds the
/// search budget.
pub fn grid_search_equilibrium(
    g: &PolymatrixGame,
    eps: &Rational,
    step: &Rational,
    mode: EqMode,
) -> Result<Option<StrategyProfile>, Error> {
    Ok(grid_scan(g, eps, step, mode, 1)?.into_iter().next())
}

/// All grid profiles passing the requested verifier, up to `limit`.
pub fn enumerate_grid_equilibria(
    g: &PolymatrixGame,
    eps: &Rational,
    step: &Rational,
    mode: EqMode,
    limit: usize,
) -> Result<Vec<StrategyProfile>, Error> {
    grid_scan(g, eps, step, mode, limit)
}

// ---------------------------------------------------------------------------
// Gadget case checks
// ---------------------------------------------------------------------------

/// Which gadget a case check exercises.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PMGadgetKind {
    /// WSNE NOT gadget (forcing for every ε < 1).
    WsneNot,
    /// WSNE AND gadget (forcing for every ε < 1/3; tight at 1/3).
    WsneAnd,
    /// WSNE PURIFY gadget (forcing for every ε < 1/3).
    WsnePurify,
    /// NE NOT gadget with cutoff δ.
    NeNot,
    /// NE AND gadget with cutoff δ.
    NeAnd,
    /// NE PURIFY gadget with cutoff δ.
    NePurify,
    /// Win-lose copy subgame (forcing for every ε < 1).
    WinLoseCopy,
    /// Win-lose AND gadget (forcing for every ε < 1/3).
    WinLoseAnd,
    /// Win-lose PURIFY gadget (forcing for every ε < 1/3).
    WinLosePurify,
}

impl PMGadgetKind {
    /// CLI-facing name.
    pub fn name(self) -> &'static str {
        match self {
            PMGadgetKind::WsneNot => "wsne-not",
            PMGadgetKind::WsneAnd => "wsne-and",
            PMGadgetKind::WsnePurify => "wsne-purify",
            PMGadgetKind::NeNot => "ne-not",
            PMGadgetKind::NeAnd => "ne-and",
            PMGadgetKind::NePurify => "ne-purify",
            PMGadgetKind::WinLoseCopy => "winlose-copy",
            PMGadgetKind::WinLoseAnd => "winlose-and",
            PMGadgetKind::WinLosePurify => "winlose-purify",
        }
    }

    /// Parses a CLI-facing name.
    pub fn parse(s: &str) -> Option<PMGadgetKind> {
        [
            PMGadgetKind::WsneNot,
            PMGadgetKind::WsneAnd,
            PMGadgetKind::WsnePurify,
            PMGadgetKind::NeNot,
            PMGadgetKind::NeAnd,
            PMGadgetKind::NePurify,
            PMGadgetKind::WinLoseCopy,
            PMGadgetKind::WinLoseAnd,
            PMGadgetKind::WinLosePurify,
        ]
        .into_iter()
        .find(|k| k.name() == s)
    }
}

/// Result of a gadget case check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PMCaseReport {
    /// Grid cells examined.
    pub cases_checked: u64,
    /// Human-readable counterexample descriptions (empty iff the check passed).
    pub failures: Vec<String>,
}

impl PMCaseReport {
    /// Did every case satisfy the claimed forcing?
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

fn grid_points(step: &Rational) -> Result<Vec<Rational>, Error> {
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
    Ok((0..=s).map(|j| rat(j, s)).collect())
}

/// Exhaustively checks one gadget's forced-best-response claims over a grid
/// of input mixing probabilities.  The input variable `q` always denotes the
/// probability mass an input player puts on action `one` (for the win-lose
/// PURIFY gadget the three grid variables are the copy players' masses on
/// action `zero`, matching the case analysis).  NE gadget kinds require
/// `params` (the cutoff δ).
pub fn gadget_case_check(
    kind: PMGadgetKind,
    eps: &Rational,
    step: &Rational,
    params: Option<&NEGadgetParams>,
) -> Result<PMCaseReport, Error> {
    if eps.is_negative() {
        return Err(Error::Precondition("epsilon must be nonnegative".into()));
    }
    let grid = grid_points(step)?;
    let mut report = PMCaseReport { cases_checked: 0, failures: Vec::new() };
    let one = rint(1);
    let half = rat(1, 2);
    // "Only ε-best response" means the other action's payoff deficit strictly
    // exceeds ε.
    let forced = |hi: &Rational, lo: &Rational| &(hi - lo) > eps;
    match kind {
        PMGadgetKind::WsneNot | PMGadgetKind::WinLoseCopy => {
            for q in &grid {
                report.cases_checked += 1;
                // NOT: U = (q, 1−q), a pure input forces the opposite value.
                // Copy: U = (1−q, q), a pure input forces the same value.
                let (pz, po) = match kind {
                    PMGadgetKind::WsneNot => (q.clone(), &one - q),
                    _ => (&one - q, q.clone()),
                };
                // The action a pure-zero input must force.
                let (f0, g0) = match kind {
                    PMGadgetKind::WsneNot => (&po, &pz),
                    _ => (&pz, &po),
                };
                if q.is_zero() && !forced(f0, g0) {
                    report.failures.push(format!(
                        "{}: input pure zero does not force the output (gap {})",
                        kind.name(),
                        format_rational(&(f0 - g0))
                    ));
                }
                if q == &one && !forced(g0, f0) {
                    report.failures.push(format!(
                        "{}: input pure one does not force the output (gap {})",
                        kind.name(),
                        format_rational(&(g0 - f0))
                    ));
                }
            }
        }
        PMGadgetKind::WsneAnd | PMGadgetKind::WinLoseAnd => {
            // Identical utilities: U_w(0) = (1−q1)/2 + (1−q2)/2 and
            // U_w(1) = (q1 + q2)/6 (for win-lose the three copies replicate
            // each input, and their payoffs to w sum to the same form).
            for q1 in &grid {
                for q2 in &grid {
                    report.cases_checked += 1;
                    let u0 = (&one - q1) * &half + (&one - q2) * &half;
                    let u1 = (q1 + q2) / rint(6);
                    if q1 == &one && q2 == &one && !forced(&u1, &u0) {
                        report.failures.push(format!(
                            "{}: u=1, v=1 does not force output one (gap {})",
                            kind.name(),
                            format_rational(&(&u1 - &u0))
                        ));
                    }
                    if (q1.is_zero() || q2.is_zero()) && !forced(&u0, &u1) {
                        report.failures.push(format!(
                            "{}: u={}, v={} does not force output zero (gap {})",
                            kind.name(),
                            format_rational(q1),
                            format_rational(q2),
                            format_rational(&(&u0 - &u1))
                        ));
                    }
                }
            }
        }
        PMGadgetKind::WsnePurify => {
            for q in &grid {
                report.cases_checked += 1;
                let v0 = (&one - q) / rint(3);
                let v1 = q.clone();
                let w0 = &one - q;
                let w1 = q / rint(3);
                if q.is_zero() && (!forced(&v0, &v1) || !forced(&w0, &w1)) {
                    report.failures.push("wsne-purify: pure zero input not replicated".into());
                }
                if q == &one && (!forced(&v1, &v0) || !forced(&w1, &w0)) {
                    report.failures.push("wsne-purify: pure one input not replicated".into());
                }
                if q <= &half && !forced(&w0, &w1) {
                    report.failures.push(format!(
                        "wsne-purify: u mass-on-one {} <= 1/2 does not force w to zero",
                        format_rational(q)
                    ));
                }
                if q >= &half && !forced(&v1, &v0) {
                    report.failures.push(format!(
                        "wsne-purify: u mass-on-one {} >= 1/2 does not force v to one",
                        format_rational(q)
                    ));
                }
            }
        }
        PMGadgetKind::NeNot | PMGadgetKind::NeAnd | PMGadgetKind::NePurify => {
            let params = params.ok_or_else(|| {
                Error::Precondition("NE gadget checks need the cutoff parameters".into())
            })?;
            let d = &params.delta;
            let two_d = rint(2) * d;
            match kind {
                PMGadgetKind::NeNot => {
                    for q in &grid {
                        report.cases_checked += 1;
                        // At an ε-NE, a payoff gap g forces all but ε/g of the
                        // mass onto the better action.
                        let gap_one = &one - rint(2) * q; // U(1) − U(0)
                        if q <= d && (gap_one <= Rational::zero() || eps / &gap_one > *d) {
                            report.failures.push(format!(
                                "ne-not: input mass {} on one does not push the output above 1-delta",
                                format_rational(q)
                            ));
                        }
                        let gap_zero = -&gap_one;
                        if q >= &(&one - d)
                            && (gap_zero <= Rational::zero() || eps / &gap_zero > *d)
                        {
                            report.failures.push(format!(
                                "ne-not: input mass {} on one does not push the output below delta",
                                format_rational(q)
                            ));
                        }
                    }
                }
                PMGadgetKind::NeAnd => {
                    let hi = (&one + d) / (rint(6) - rint(2) * d);
                    for q1 in &grid {
                        for q2 in &grid {
                            report.cases_checked += 1;
                            let u0 = (&one - q1) * &half + (&one - q2) * &half;
                            let u1 = &hi * q1 + &hi * q2;
                            if (q1 <= d || q2 <= d) && &u0 - &u1 < two_d {
                                report.failures.push(format!(
                                    "ne-and: u={}, v={} leaves zero-gap {} < 2*delta",
                                    format_rational(q1),
                                    format_rational(q2),
                                    format_rational(&(&u0 - &u1))
                                ));
                            }
                            if q1 >= &(&one - d) && q2 >= &(&one - d) && &u1 - &u0 < two_d {
                                report.failures.push(format!(
                                    "ne-and: u={}, v={} leaves one-gap {} < 2*delta",
                                    format_rational(q1),
                                    format_rational(q2),
                                    format_rational(&(&u1 - &u0))
                                ));
                            }
                        }
                    }
                }
                _ => {
                    let lo = (&one + rint(2) * d) / (rint(3) - rint(2) * d);
                    for q in &grid {
                        report.cases_checked += 1;
                        let v0 = &lo * (&one - q);
                        let v1 = q.clone();
                        let w0 = &one - q;
                        let w1 = &lo * q;
                        let gv = &v0 - &v1;
                        let gw = &w0 - &w1;
                        if q <= d && (gv < two_d || gw < two_d) {
                            report.failures.push(format!(
                                "ne-purify: input mass {} on one leaves a zero-gap below 2*delta",
                                format_rational(q)
                            ));
                        }
                        if q >= &(&one - d) && (-&gv < two_d || -&gw < two_d) {
                            report.failures.push(format!(
                                "ne-purify: input mass {} on one leaves a one-gap below 2*delta",
                                format_rational(q)
                            ));
                        }
                        if q > d && q < &(&one - d) && gv.abs() < two_d && gw.abs() < two_d {
                            report.failures.push(format!(
                                "ne-purify: input mass {} on one leaves both outputs undetermined",
                                format_rational(q)
                            ));
                        }
                    }
                }
            }
        }
        PMGadgetKind::WinLosePurify => {
            // p1, p2, p3 are the copy players' masses on zero.
            for p1 in &grid {
                for p2 in &grid {
                    for p3 in &grid {
                        report.cases_checked += 1;
                        let total = (p1 + p2 + p3) / rint(3);
                        let gv = p3 / rint(3) - (&one - &total);
                        let gw = &total - (rat(1, 3) - p3 / rint(3));
                        let all_zero = p1 == &one && p2 == &one && p3 == &one;
                        let all_one = p1.is_zero() && p2.is_zero() && p3.is_zero();
                        if all_zero && (!forced(&gv, &Rational::zero()) || !forced(&gw, &Rational::zero()))
                        {
                            report
                                .failures
                                .push("winlose-purify: pure zero input not replicated".into());
                        }
                        if all_one
                            && (!forced(&Rational::zero(), &gv) || !forced(&Rational::zero(), &gw))
                        {
                            report
                                .failures
                                .push("winlose-purify: pure one input not replicated".into());
                        }
                        if &gv.abs() <= eps && &gw.abs() <= eps {
                            report.failures.push(format!(
                                "winlose-purify: copies at ({}, {}, {}) let both outputs mix",
                                format_rational(p1),
                                format_rational(p2),
                                format_rational(p3)
                            ));
                        }
                    }
                }
            }
        }
    }
    Ok(report)
}

// ---------------------------------------------------------------------------
// Random games (desk-scale test fodder)
// ---------------------------------------------------------------------------

/// Generates a seeded random two-action polymatrix game on `n` players with
/// payoff entries `j/12` for `j ∈ {0, …, 12}`.  Every pair becomes an edge
/// with probability ~1/4; isolated games are fine (players may have degree 0).
pub fn random_two_action_game(n: usize, seed: u64) -> PolymatrixGame {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut g = PolymatrixGame::new();
    let names: Vec<String> = (0..n).map(|i| format!("p{i:02}")).collect();
    for p in &names {
        g.add_player(p, 2);
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if rng.gen_range(0..4) != 0 {
                continue;
            }
            let m = |g: &mut PolymatrixGame, a: &str, b: &str, rng: &mut rand_chacha::ChaCha8Rng| {
                let mat = vec![
                    vec![rat(rng.gen_range(0..=12), 12), rat(rng.gen_range(0..=12), 12)],
                    vec![rat(rng.gen_range(0..=12), 12), rat(rng.gen_range(0..=12), 12)],
                ];
                g.set_matrix(a, b, mat);
            };
            m(&mut g, &names[i], &names[j], &mut rng);
            m(&mut g, &names[j], &names[i], &mut rng);
        }
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{interaction_graph, verify_assignment, Gate, Semantics};

    fn not_gadget_game() -> PolymatrixGame {
        let mut g = PolymatrixGame::new();
        g.add_player("u", 2);
        g.add_player("v", 2);
        g.set_matrix("v", "u", anti_diag_one());
        g
    }

    fn purify_not_instance() -> PCInstance {
        PCInstance::from_gates(
            vec![
                Gate::new(GateType::Purify, &["u"], &["v", "w"]),
                Gate::new(GateType::Not, &["v"], &["u"]),
            ],
            Semantics::Robust,
        )
    }

    #[test]
    fn normalization_examples() {
        // Gadget game already normalized: unchanged.
        let g = not_gadget_game();
        let (n, data) = normalize_game(&g);
        assert_eq!(n.matrices, g.matrices);
        assert_eq!(data.bounds["v"].upper, rint(1));
        assert_eq!(data.bounds["v"].lower, rint(0));
        // All-zero game: all zero after normalization.
        let mut z = PolymatrixGame::new();
        z.add_player("a", 2);
        z.add_player("b", 2);
        z.set_matrix("a", "b", zero_matrix(2, 2));
        let (nz, _) = normalize_game(&z);
        assert_eq!(nz.matrices, z.matrices);
        // Doubling payoffs does not change the normalized game.
        for seed in 0..5 {
            let g = random_two_action_game(6, seed);
            let mut doubled = g.clone();
            for m in doubled.matrices.values_mut() {
                for row in m {
                    for z in row {
                        *z *= rint(2);
                    }
                }
            }
            assert_eq!(normalize_game(&g).0, normalize_game(&doubled).0, "seed {seed}");
        }
    }

    #[test]
    fn payoff_vector_examples() {
        let g = not_gadget_game();
        let pure_zero = StrategyProfile::from_pairs(&[
            ("u", vec![rint(1), rint(0)]),
            ("v", vec![rint(1), rint(0)]),
        ]);
        assert_eq!(payoff_vector(&g, &pure_zero, "v").unwrap(), vec![rint(0), rint(1)]);
        assert_eq!(payoff_vector(&g, &pure_zero, "u").unwrap(), vec![rint(0), rint(0)]);
        let uniform = StrategyProfile::uniform(&g);
        assert_eq!(payoff_vector(&g, &uniform, "v").unwrap(), vec![rat(1, 2), rat(1, 2)]);
    }

    #[test]
    fn verifier_examples() {
        // Zero game: anything is an exact equilibrium.
        let mut z = PolymatrixGame::new();
        z.add_player("a", 2);
        z.add_player("b", 2);
        z.set_matrix("a", "b", zero_matrix(2, 2));
        let p = StrategyProfile::uniform(&z);
        assert!(verify_wsne(&z, &p, &rint(0)).unwrap().all_satisfied());
        assert!(verify_ne(&z, &p, &rint(0)).unwrap().all_satisfied());
        // Matching-pennies edge at the uniform profile: payoffs are flat, so
        // the profile is an exact equilibrium.
        let mut mp = PolymatrixGame::new();
        mp.add_player("r", 2);
        mp.add_player("c", 2);
        mp.set_matrix("r", "c", diag(rint(1), rint(1)));
        mp.set_matrix("c", "r", anti_diag_one());
        assert!(verify_wsne(&mp, &StrategyProfile::uniform(&mp), &rint(0)).unwrap().all_satisfied());
        // AND gadget with both inputs pure one and output pure zero: the
        // output's forgone payoff is exactly 1/3.
        let inst = PCInstance::from_gates(
            vec![Gate::new(GateType::And, &["u", "v"], &["w"])],
            Semantics::Robust,
        );
        let (g, _) = reduce_pc_to_wsne(&inst).unwrap();
        let prof = StrategyProfile::from_pairs(&[
            ("u", vec![rint(0), rint(1)]),
            ("v", vec![rint(0), rint(1)]),
            ("w", vec![rint(1), rint(0)]),
        ]);
        assert!(!verify_wsne(&g, &prof, &rat(33, 100)).unwrap().all_satisfied());
        assert!(verify_wsne(&g, &prof, &rat(1, 3)).unwrap().all_satisfied());
        assert!(!verify_ne(&g, &prof, &rat(33, 100)).unwrap().all_satisfied());
        // Partial profile errors.
        let partial = StrategyProfile::from_pairs(&[("u", vec![rint(1), rint(0)])]);
        assert!(matches!(
            verify_wsne(&g, &partial, &rint(0)),
            Err(Error::PartialAssignment(_))
        ));
    }

    #[test]
    fn algo_zero_game_fixes_everyone_to_action_zero() {
        let mut z = PolymatrixGame::new();
        z.add_player("a", 2);
        z.add_player("b", 2);
        z.set_matrix("a", "b", zero_matrix(2, 2));
        let p = algo_third_wsne(&z).unwrap();
        assert_eq!(p.strategies["a"], vec![rint(1), rint(0)]);
        assert_eq!(p.strategies["b"], vec![rint(1), rint(0)]);
    }

    #[test]
    fn algo_not_gadget_hand_execution() {
        // u has all-zero payoffs and is removed first (action 0); v then has
        // a strict preference for one.
        let p = algo_third_wsne(&not_gadget_game()).unwrap();
        assert_eq!(p.strategies["u"], vec![rint(1), rint(0)]);
        assert_eq!(p.strategies["v"], vec![rint(0), rint(1)]);
    }

    #[test]
    fn algo_survivors_mix_uniformly() {
        // Both players' payoff differences span past ±1/3 at the corners, so
        // nobody is removable and both mix.
        let mut g = PolymatrixGame::new();
        g.add_player("a", 2);
        g.add_player("b", 2);
        g.set_matrix("a", "b", diag(rint(1), rint(1)));
        g.set_matrix("b", "a", anti_diag_one());
        let p = algo_third_wsne(&g).unwrap();
        assert_eq!(p.strategies["a"], vec![rat(1, 2), rat(1, 2)]);
        assert_eq!(p.strategies["b"], vec![rat(1, 2), rat(1, 2)]);
        assert!(verify_wsne(&g, &p, &rat(1, 3)).unwrap().all_satisfied());
    }

    #[test]
    fn algo_passes_third_wsne_on_random_games() {
        for seed in 0..200u64 {
            let n = 3 + (seed as usize % 38);
            let (g, _) = normalize_game(&random_two_action_game(n, seed));
            let p = algo_third_wsne(&g).unwrap();
            let verdicts = verify_wsne(&g, &p, &rat(1, 3)).unwrap();
            assert!(verdicts.all_satisfied(), "seed {seed}: {:?}", verdicts.violating_players());
        }
    }

    #[test]
    fn normalization_is_scale_invariant() {
        for seed in [3u64, 17, 42] {
            let g = random_two_action_game(8, seed);
            let mut scaled = g.clone();
            let players = scaled.players();
            let target = &players[0];
            let keys: Vec<_> = scaled
                .matrices
                .keys()
                .filter(|(i, _)| i == target)
                .cloned()
                .collect();
            for k in keys {
                for row in scaled.matrices.get_mut(&k).unwrap() {
                    for z in row {
                        *z *= rat(7, 3);
                    }
                }
            }
            assert_eq!(normalize_game(&g).0, normalize_game(&scaled).0, "seed {seed}");
        }
    }

    #[test]
    fn wsne_reduction_matrices() {
        let not_inst = PCInstance::from_gates(
            vec![Gate::new(GateType::Not, &["u"], &["v"])],
            Semantics::Robust,
        );
        let (g, map) = reduce_pc_to_wsne(&not_inst).unwrap();
        assert_eq!(g.players().len(), 2);
        assert_eq!(g.matrix("v", "u").unwrap(), &anti_diag_one());
        assert_eq!(g.matrix("u", "v").unwrap(), &zero_matrix(2, 2));
        assert_eq!(map.node_players["u"], "u");

        let and_inst = PCInstance::from_gates(
            vec![Gate::new(GateType::And, &["u", "v"], &["w"])],
            Semantics::Robust,
        );
        let (g, _) = reduce_pc_to_wsne(&and_inst).unwrap();
        assert_eq!(g.players().len(), 3);
        assert_eq!(g.matrix("w", "u").unwrap(), &diag(rat(1, 2), rat(1, 6)));
        assert_eq!(g.matrix("w", "v").unwrap(), &diag(rat(1, 2), rat(1, 6)));

        // NOR is not in the supported gate set.
        let nor_inst = PCInstance::from_gates(
            vec![Gate::new(GateType::Nor, &["u", "v"], &["w"])],
            Semantics::Robust,
        );
        assert!(matches!(reduce_pc_to_wsne(&nor_inst), Err(Error::UnsupportedGateSet(_))));
    }

    #[test]
    fn wsne_reduction_preserves_interaction_graph() {
        let cycle = PCInstance::from_gates(
            vec![
                Gate::new(GateType::Not, &["a"], &["b"]),
                Gate::new(GateType::Not, &["b"], &["a"]),
            ],
            Semantics::Robust,
        );
        let (g, _) = reduce_pc_to_wsne(&cycle).unwrap();
        let pc_graph = interaction_graph(&cycle);
        let pc_edges: BTreeSet<(String, String)> = pc_graph
            .edges
            .iter()
            .map(|(a, b)| if a < b { (a.clone(), b.clone()) } else { (b.clone(), a.clone()) })
            .collect();
        assert_eq!(g.edges(), pc_edges);
    }

    #[test]
    fn decode_wsne_is_support_based() {
        let map = PMReductionMap {
            node_players: [("x".to_string(), "x".to_string())].into_iter().collect(),
            delta: None,
        };
        let d = |s: Vec<Rational>| {
            decode_wsne_profile(&map, &StrategyProfile::from_pairs(&[("x", s)]))
                .get("x")
                .unwrap()
        };
        assert_eq!(d(vec![rint(1), rint(0)]), Value::Zero);
        assert_eq!(d(vec![rint(0), rint(1)]), Value::One);
        assert_eq!(d(vec![rat(1, 2), rat(1, 2)]), Value::Bot);
        assert_eq!(d(vec![rat(999, 1000), rat(1, 1000)]), Value::Bot);
    }

    #[test]
    fn wsne_end_to_end_grid_search_decodes_to_solutions() {
        let inst = purify_not_instance();
        let (g, map) = reduce_pc_to_wsne(&inst).unwrap();
        let eps = rat(3, 10);
        let found = grid_search_equilibrium(&g, &eps, &rat(1, 20), EqMode::Wsne)
            .unwrap()
            .expect("a grid WSNE exists at 3/10");
        assert!(verify_wsne(&g, &found, &eps).unwrap().all_satisfied());
        let a = decode_wsne_profile(&map, &found);
        assert!(verify_assignment(&inst, &a).unwrap().all_satisfied());
        // Every grid WSNE decodes to a satisfying assignment.
        let all = enumerate_grid_equilibria(&g, &eps, &rat(1, 10), EqMode::Wsne, usize::MAX).unwrap();
        assert!(!all.is_empty());
        for p in &all {
            let a = decode_wsne_profile(&map, p);
            assert!(
                verify_assignment(&inst, &a).unwrap().all_satisfied(),
                "profile {:?} decoded to a non-solution",
                p.strategies
            );
        }
    }

    #[test]
    fn grid_search_budget_is_enforced() {
        let (g, _) = normalize_game(&random_two_action_game(12, 5));
        assert!(matches!(
            grid_search_equilibrium(&g, &rat(1, 3), &rat(1, 100), EqMode::Wsne),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn choose_delta_exact_values() {
        let p = choose_delta(&rat(8, 100)).unwrap();
        assert_eq!(p.delta, rat(101, 1000));
        assert_eq!(p.gap_growth, rat(299, 199500));
        assert_eq!(p.chain_length(), 398);
        // Inequalities and minimality of the even chain length.
        let prod = &p.delta * (rint(1) - rint(2) * &p.delta);
        assert!(rat(8, 100) < prod);
        assert!(below_ne_bound(&prod));
        let bound = (rint(1) - rint(4) * &p.delta) / &p.gap_growth;
        assert!(rint(p.chain_length() as i64) >= bound);
        assert!(rint(p.chain_length() as i64 - 2) < bound);

        assert_eq!(choose_delta(&rat(1, 100)).unwrap().delta, rat(11, 1000));
        // Above the hardness bound: rejected exactly.
        assert!(matches!(choose_delta(&rat(9, 100)), Err(Error::Precondition(_))));
        // Below the bound but with no admissible grid cutoff.
        assert!(matches!(choose_delta(&rat(11001, 125000)), Err(Error::Precondition(_))));
    }

    #[test]
    fn gap_recurrence_reaches_and_keeps_the_full_gap() {
        let p = choose_delta(&rat(8, 100)).unwrap();
        let cap = rint(1) - rint(2) * &p.delta;
        let seq = gap_recurrence_sequence(&p);
        assert_eq!(seq.len(), p.chain_length() + 1);
        assert_eq!(seq[0], rint(2) * &p.delta);
        assert_eq!(*seq.last().unwrap(), cap);
        // Absorbing above the cap.
        assert_eq!(gap_recurrence_step(&cap, &p), cap);
        assert_eq!(gap_recurrence_step(&(&cap + rat(1, 100)), &p), cap);
        // Monotone growth until the cap.
        for w in seq.windows(2) {
            assert!(w[1] >= w[0]);
        }
    }

    #[test]
    fn ne_reduction_structure() {
        let eps = rat(85, 1000);
        let params = choose_delta(&eps).unwrap();
        let inst = PCInstance::from_gates(
            vec![Gate::new(GateType::And, &["u", "v"], &["w"])],
            Semantics::Robust,
        );
        let (g, map) = reduce_pc_to_ne(&inst, &eps).unwrap();
        assert_eq!(map.delta, Some(params.delta.clone()));
        // Players: u, v, w, the gadget's inner output, and 2k−1 chain players.
        assert_eq!(g.players().len(), 3 + 1 + params.chain_length() - 1);
        let d = &params.delta;
        let hi = (rint(1) + d) / (rint(6) - rint(2) * d);
        let inner: Vec<PlayerId> = g
            .players()
            .into_iter()
            .filter(|p| p.contains("~and"))
            .collect();
        assert_eq!(inner.len(), 1);
        assert_eq!(g.matrix(&inner[0], "u").unwrap(), &diag(rat(1, 2), hi.clone()));
        assert_eq!(g.matrix(&inner[0], "v").unwrap(), &diag(rat(1, 2), hi));
        // The declared output is fed by exactly one anti-diagonal NOT matrix.
        let w_feeds: Vec<PlayerId> = g
            .neighbors("w")
            .into_iter()
            .filter(|j| g.matrix("w", j).unwrap() == &anti_diag_one())
            .collect();
        assert_eq!(w_feeds.len(), 1);
        // Purify matrices.
        let pinst = purify_not_instance();
        let (pg, _) = reduce_pc_to_ne(&pinst, &eps).unwrap();
        let lo = (rint(1) + rint(2) * d) / (rint(3) - rint(2) * d);
        let inner_v: Vec<PlayerId> =
            pg.players().into_iter().filter(|p| p.contains("~pv")).collect();
        assert_eq!(pg.matrix(&inner_v[0], "u").unwrap(), &diag(lo.clone(), rint(1)));
    }

    #[test]
    fn decode_ne_cutoff_rules() {
        let map = PMReductionMap {
            node_players: [("x".to_string(), "x".to_string())].into_iter().collect(),
            delta: Some(rat(1, 10)),
        };
        let d = |s: Vec<Rational>| {
            decode_ne_profile(&map, &StrategyProfile::from_pairs(&[("x", s)]), &rat(1, 10))
                .get("x")
                .unwrap()
        };
        assert_eq!(d(vec![rat(19, 20), rat(1, 20)]), Value::Zero);
        assert_eq!(d(vec![rat(1, 20), rat(19, 20)]), Value::One);
        assert_eq!(d(vec![rat(1, 2), rat(1, 2)]), Value::Bot);
        assert_eq!(d(vec![rat(9, 10), rat(1, 10)]), Value::Zero);
    }

    #[test]
    fn ne_not_cycle_end_to_end() {
        let cycle = PCInstance::from_gates(
            vec![
                Gate::new(GateType::Not, &["a"], &["b"]),
                Gate::new(GateType::Not, &["b"], &["a"]),
            ],
            Semantics::Robust,
        );
        let eps = rat(8, 100);
        let (g, map) = reduce_pc_to_ne(&cycle, &eps).unwrap();
        assert_eq!(g.players().len(), 2);
        let delta = map.delta.clone().unwrap();
        let found = grid_search_equilibrium(&g, &eps, &rat(1, 20), EqMode::Ne)
            .unwrap()
            .expect("a grid NE exists");
        let a = decode_ne_profile(&map, &found, &delta);
        assert!(verify_assignment(&cycle, &a).unwrap().all_satisfied());
        // Every grid NE decodes validly.
        for p in enumerate_grid_equilibria(&g, &eps, &rat(1, 20), EqMode::Ne, usize::MAX).unwrap() {
            let a = decode_ne_profile(&map, &p, &delta);
            assert!(verify_assignment(&cycle, &a).unwrap().all_satisfied());
        }
    }

    #[test]
    fn winlose_reduction_structure() {
        let inst = purify_not_instance();
        let (g, map) = reduce_pc_to_winlose(&inst).unwrap();
        // 3 trio players per node, 2 trio NOT auxiliaries per node, one
        // auxiliary for the NOT gate, three copies for the PURIFY gate.
        assert_eq!(g.players().len(), 3 * 3 + 3 * 2 + 1 + 3);
        assert!(g.actions.values().all(|&m| m == 2));
        assert!(win_lose_violations(&g).is_empty());
        assert!(g.players().iter().all(|p| g.degree(p) <= 7));
        assert!(game_bipartition(&g).is_some(), "win-lose game must be bipartite");
        assert!(map.node_players.values().all(|p| p.contains("!3")));
    }

    #[test]
    fn winlose_and_gadget_payoff_totals() {
        let inst = PCInstance::from_gates(
            vec![Gate::new(GateType::And, &["u", "v"], &["w"])],
            Semantics::Robust,
        );
        let (g, _) = reduce_pc_to_winlose(&inst).unwrap();
        let w1 = g
            .players()
            .into_iter()
            .find(|p| p.starts_with("w!1"))
            .unwrap();
        // All six copy players on action one: w's payoff vector is (0, 1/3).
        let mut profile = StrategyProfile::from_pairs(&[]);
        for p in g.players() {
            let s = if g.neighbors(&w1).contains(&p) {
                vec![rint(0), rint(1)]
            } else {
                vec![rint(1), rint(0)]
            };
            profile.strategies.insert(p, s);
        }
        let u = payoff_vector(&g, &profile, &w1).unwrap();
        assert_eq!(u, vec![rint(0), rat(1, 3)]);
    }

    #[test]
    fn winlose_hand_equilibrium_decodes() {
        let cycle = PCInstance::from_gates(
            vec![
                Gate::new(GateType::Not, &["a"], &["b"]),
                Gate::new(GateType::Not, &["b"], &["a"]),
            ],
            Semantics::Robust,
        );
        let (g, map) = reduce_pc_to_winlose(&cycle).unwrap();
        // Encode a = 0, b = 1: negation layers alternate, copies replicate.
        // Assign greedily: zero-payoff players default to their forced value.
        let mut values: BTreeMap<PlayerId, bool> = BTreeMap::new();
        values.insert("a!1#0".into(), false);
        // Propagate through each player's unique payoff structure until fixed:
        // copies equal their source, negators flip theirs.
        let mut changed = true;
        while changed {
            changed = false;
            for i in g.players() {
                if values.contains_key(&i) {
                    continue;
                }
                for j in g.neighbors(&i) {
                    let m = g.matrix(&i, &j).unwrap();
                    if m == &diag(rint(1), rint(1)) {
                        if let Some(&vj) = values.get(&j) {
                            values.insert(i.clone(), vj);
                            changed = true;
                        }
                    } else if m == &anti_diag_one() {
                        if let Some(&vj) = values.get(&j) {
                            values.insert(i.clone(), !vj);
                            changed = true;
                        }
                    }
                }
            }
        }
        let profile = StrategyProfile {
            strategies: g
                .players()
                .into_iter()
                .map(|p| {
                    let one = *values.get(&p).unwrap_or(&false);
                    (p, if one { vec![rint(0), rint(1)] } else { vec![rint(1), rint(0)] })
                })
                .collect(),
        };
        assert!(verify_wsne(&g, &profile, &rint(0)).unwrap().all_satisfied());
        let a = decode_wsne_profile(&map, &profile);
        assert_eq!(a.get("a"), Some(Value::Zero));
        assert_eq!(a.get("b"), Some(Value::One));
        assert!(verify_assignment(&cycle, &a).unwrap().all_satisfied());
    }

    #[test]
    fn wsne_case_checks_pass_below_one_third() {
        let eps = rat(33, 100);
        let step = rat(1, 20);
        for kind in [PMGadgetKind::WsneNot, PMGadgetKind::WsneAnd, PMGadgetKind::WsnePurify] {
            let r = gadget_case_check(kind, &eps, &step, None).unwrap();
            assert!(r.ok(), "{}: {:?}", kind.name(), r.failures);
            assert!(r.cases_checked > 0);
        }
    }

    #[test]
    fn wsne_and_tightness_at_one_third() {
        let r = gadget_case_check(PMGadgetKind::WsneAnd, &rat(34, 100), &rat(1, 20), None).unwrap();
        assert!(!r.ok());
        assert!(
            r.failures.iter().any(|f| f.contains("u=1, v=1")),
            "expected the both-inputs-one counterexample, got {:?}",
            r.failures
        );
    }

    #[test]
    fn ne_case_checks_pass_with_chosen_cutoff() {
        let params = choose_delta(&rat(8, 100)).unwrap();
        for kind in [PMGadgetKind::NeNot, PMGadgetKind::NeAnd, PMGadgetKind::NePurify] {
            let r = gadget_case_check(kind, &rat(8, 100), &rat(1, 20), Some(&params)).unwrap();
            assert!(r.ok(), "{}: {:?}", kind.name(), r.failures);
        }
        // Params are mandatory for NE kinds.
        assert!(gadget_case_check(PMGadgetKind::NeAnd, &rat(8, 100), &rat(1, 20), None).is_err());
    }

    #[test]
    fn winlose_case_checks() {
        let step = rat(1, 20);
        for kind in
            [PMGadgetKind::WinLoseCopy, PMGadgetKind::WinLoseAnd, PMGadgetKind::WinLosePurify]
        {
            let r = gadget_case_check(kind, &rat(33, 100), &step, None).unwrap();
            assert!(r.ok(), "{}: {:?}", kind.name(), r.failures);
        }
        // Above 1/3 the PURIFY claim fails at the all-half copies cell.
        let r = gadget_case_check(PMGadgetKind::WinLosePurify, &rat(34, 100), &step, None).unwrap();
        assert!(!r.ok());
        assert!(r.failures.iter().any(|f| f.contains("1/2")));
        let r = gadget_case_check(PMGadgetKind::WinLoseAnd, &rat(34, 100), &step, None).unwrap();
        assert!(!r.ok());
    }
}
