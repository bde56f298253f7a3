//! Line-oriented text formats.
//!
//! Every format is versioned by its header line (`pure-circuit v1`,
//! `sperner v1`, `gcircuit v1`, `polymatrix v1`, `threshold v1`,
//! `bimatrix v1`, `reduction-map v1`).  Blank lines and lines starting with
//! `#` are ignored everywhere.  All numbers are exact rationals `p/q` (or
//! plain integers).  Parse errors name the offending line and token.

use std::collections::{BTreeMap, BTreeSet};

use crate::bimatrix::{BMReductionMap, BimatrixGame, BimatrixProfile};
use crate::circuit::{Gate, GateType, PCAssignment, PCInstance, Semantics, Value};
use crate::error::Error;
use crate::gcircuit::{GCAssignment, GCGadget, GCGate, GCGateType, GCInstance, GCReductionMap};
use crate::polymatrix::{PMReductionMap, PolymatrixGame, StrategyProfile};
use crate::rational::{format_rational, parse_rational, Rational};
use crate::sperner::{BooleanCircuit, ExtractionMap, SpernerInstance, WireOp};
use crate::threshold::{PurifyInternals, TGAssignment, TGReductionMap, ThresholdGame};

/// Significant lines of a document: `(1-based line number, trimmed text)`.
fn significant_lines(text: &str) -> Vec<(usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .collect()
}

fn expect_header<'a>(
    lines: &'a [(usize, &'a str)],
    header: &str,
) -> Result<&'a [(usize, &'a str)], Error> {
    match lines.first() {
        Some((_, l)) if *l == header => Ok(&lines[1..]),
        Some((n, l)) => Err(Error::parse(*n, format!("expected header `{header}`, found `{l}`"))),
        None => Err(Error::parse(1, format!("empty document, expected header `{header}`"))),
    }
}

fn parse_rat_at(line: usize, tok: &str) -> Result<Rational, Error> {
    parse_rational(tok).map_err(|e| Error::parse(line, format!("bad rational `{tok}`: {e}")))
}

fn parse_usize_at(line: usize, tok: &str) -> Result<usize, Error> {
    tok.parse::<usize>()
        .map_err(|_| Error::parse(line, format!("bad integer `{tok}`")))
}

fn valid_node_id(s: &str) -> bool {
    !s.is_empty()
        && s.chars().all(|c| {
            c.is_ascii_alphanumeric() || matches!(c, '_' | '/' | '.' | '-' | '#' | '~' | '!' | ':')
        })
}

fn node_at(line: usize, tok: &str) -> Result<String, Error> {
    if valid_node_id(tok) {
        Ok(tok.to_string())
    } else {
        Err(Error::parse(line, format!("bad node id `{tok}`")))
    }
}

// ---------------------------------------------------------------------------
// Pure-circuit instances and assignments
// ---------------------------------------------------------------------------

/// Parses a `pure-circuit v1` document.
pub fn parse_pc_instance(text: &str) -> Result<PCInstance, Error> {
    let lines = significant_lines(text);
    let body = expect_header(&lines, "pure-circuit v1")?;
    let mut semantics = Semantics::Robust;
    let mut gates = Vec::new();
    for (i, (n, l)) in body.iter().enumerate() {
        let toks: Vec<&str> = l.split_whitespace().collect();
        match toks[0] {
            "semantics" if i == 0 => {
                semantics = match toks.get(1) {
                    Some(&"robust") => Semantics::Robust,
                    Some(&"nonrobust") => Semantics::NonRobust,
                    other => {
                        return Err(Error::parse(
                            *n,
                            format!("bad semantics `{}`", other.copied().unwrap_or("")),
                        ))
                    }
                };
            }
            "gate" => {
                let t = toks
                    .get(1)
                    .and_then(|s| GateType::parse(s))
                    .ok_or_else(|| {
                        Error::parse(*n, format!("unknown gate type `{}`", toks.get(1).unwrap_or(&"")))
                    })?;
                let arrow = toks.iter().position(|&s| s == "->").ok_or_else(|| {
                    Error::parse(*n, "gate line is missing `->`".to_string())
                })?;
                let (fan_in, fan_out) = t.arity();
                let ins = &toks[2..arrow];
                let outs = &toks[arrow + 1..];
                if ins.len() != fan_in || outs.len() != fan_out {
                    return Err(Error::parse(
                        *n,
                        format!(
                            "{} expects {fan_in} input(s) and {fan_out} output(s), found {} and {}",
                            t.name(),
                            ins.len(),
                            outs.len()
                        ),
                    ));
                }
                for tok in ins.iter().chain(outs.iter()) {
                    node_at(*n, tok)?;
                }
                gates.push(Gate::new(t, ins, outs));
            }
            other => return Err(Error::parse(*n, format!("unexpected token `{other}`"))),
        }
    }
    Ok(PCInstance::from_gates(gates, semantics))
}

/// Serializes a pure-circuit instance.
pub fn format_pc_instance(inst: &PCInstance) -> String {
    let mut out = String::from("pure-circuit v1\n");
    out.push_str(&format!("semantics {}\n", inst.semantics));
    for g in &inst.gates {
        out.push_str(&format!(
            "gate {} {} -> {}\n",
            g.gate_type.name(),
            g.inputs.join(" "),
            g.outputs.join(" ")
        ));
    }
    out
}

/// Parses a pure-circuit assignment: one `node = 0|1|bot` per line.
pub fn parse_pc_assignment(text: &str) -> Result<PCAssignment, Error> {
    let mut a = PCAssignment::new();
    for (n, l) in significant_lines(text) {
        let toks: Vec<&str> = l.split_whitespace().collect();
        if toks.len() != 3 || toks[1] != "=" {
            return Err(Error::parse(n, format!("expected `node = value`, found `{l}`")));
        }
        let node = node_at(n, toks[0])?;
        let v = match toks[2] {
            "0" => Value::Zero,
            "1" => Value::One,
            "bot" => Value::Bot,
            other => return Err(Error::parse(n, format!("bad value `{other}`"))),
        };
        a.set(&node, v);
    }
    Ok(a)
}

/// Serializes a pure-circuit assignment.
pub fn format_pc_assignment(a: &PCAssignment) -> String {
    a.values
        .iter()
        .map(|(node, v)| format!("{node} = {v}\n"))
        .collect()
}

// ---------------------------------------------------------------------------
// Rational-valued assignments (gcircuit and threshold share the shape)
// ---------------------------------------------------------------------------

fn parse_rational_assignment(text: &str) -> Result<BTreeMap<String, Rational>, Error> {
    let mut values = BTreeMap::new();
    for (n, l) in significant_lines(text) {
        let toks: Vec<&str> = l.split_whitespace().collect();
        if toks.len() != 3 || toks[1] != "=" {
            return Err(Error::parse(n, format!("expected `node = p/q`, found `{l}`")));
        }
        values.insert(node_at(n, toks[0])?, parse_rat_at(n, toks[2])?);
    }
    Ok(values)
}

fn format_rational_assignment(values: &BTreeMap<String, Rational>) -> String {
    values
        .iter()
        .map(|(node, v)| format!("{node} = {}\n", format_rational(v)))
        .collect()
}

/// Parses a gcircuit assignment (`node = p/q` lines).
pub fn parse_gc_assignment(text: &str) -> Result<GCAssignment, Error> {
    Ok(GCAssignment { values: parse_rational_assignment(text)? })
}

/// Serializes a gcircuit assignment.
pub fn format_gc_assignment(a: &GCAssignment) -> String {
    format_rational_assignment(&a.values)
}

/// Parses a threshold assignment (`node = p/q` lines).
pub fn parse_tg_assignment(text: &str) -> Result<TGAssignment, Error> {
    Ok(TGAssignment { values: parse_rational_assignment(text)? })
}

/// Serializes a threshold assignment.
pub fn format_tg_assignment(a: &TGAssignment) -> String {
    format_rational_assignment(&a.values)
}

// ---------------------------------------------------------------------------
// Generalized circuits
// ---------------------------------------------------------------------------

/// Parses a `gcircuit v1` document.
pub fn parse_gc_instance(text: &str) -> Result<GCInstance, Error> {
    let lines = significant_lines(text);
    let body = expect_header(&lines, "gcircuit v1")?;
    let mut gates = Vec::new();
    for (n, l) in body {
        let toks: Vec<&str> = l.split_whitespace().collect();
        if toks[0] != "gate" {
            return Err(Error::parse(*n, format!("unexpected token `{}`", toks[0])));
        }
        let t = toks
            .get(1)
            .and_then(|s| GCGateType::parse(s))
            .ok_or_else(|| {
                Error::parse(*n, format!("unknown gate type `{}`", toks.get(1).unwrap_or(&"")))
            })?;
        let arrow = toks
            .iter()
            .position(|&s| s == "->")
            .ok_or_else(|| Error::parse(*n, "gate line is missing `->`".to_string()))?;
        let ins = &toks[2..arrow];
        let mut rest = toks[arrow + 1..].to_vec();
        let constant = if let Some(last) = rest.last().filter(|s| s.starts_with("c=")) {
            let c = parse_rat_at(*n, &last[2..])?;
            rest.pop();
            Some(c)
        } else {
            None
        };
        if rest.len() != 1 {
            return Err(Error::parse(*n, "gate line needs exactly one output".to_string()));
        }
        if ins.len() != t.arity() {
            return Err(Error::parse(
                *n,
                format!("{} expects {} input(s), found {}", t.name(), t.arity(), ins.len()),
            ));
        }
        if t.uses_constant() != constant.is_some() {
            return Err(Error::parse(
                *n,
                format!("{} {} a constant", t.name(), if t.uses_constant() { "needs" } else { "does not take" }),
            ));
        }
        for tok in ins.iter().chain(std::iter::once(&rest[0])) {
            node_at(*n, tok)?;
        }
        gates.push(GCGate::new(t, ins, rest[0], constant));
    }
    Ok(GCInstance::from_gates(gates))
}

/// Serializes a generalized circuit.
pub fn format_gc_instance(inst: &GCInstance) -> String {
    let mut out = String::from("gcircuit v1\n");
    for g in &inst.gates {
        let mut line = format!("gate {} ", g.gate_type.name());
        if !g.inputs.is_empty() {
            line.push_str(&g.inputs.join(" "));
            line.push(' ');
        }
        line.push_str(&format!("-> {}", g.output));
        if let Some(c) = &g.constant {
            line.push_str(&format!(" c={}", format_rational(c)));
        }
        out.push_str(&line);
        out.push('\n');
    }
    out
}

// ---------------------------------------------------------------------------
// Sperner instances and points
// ---------------------------------------------------------------------------

/// Parses a `sperner v1` document.  `wire x = OUTPUT i w` lines register the
/// output wire of coordinate `i`; their left-hand name is only decorative.
pub fn parse_sperner_instance(text: &str) -> Result<SpernerInstance, Error> {
    let lines = significant_lines(text);
    let body = expect_header(&lines, "sperner v1")?;
    let Some((dn, dl)) = body.first() else {
        return Err(Error::parse(2, "missing `dims N M` line".to_string()));
    };
    let dt: Vec<&str> = dl.split_whitespace().collect();
    if dt.len() != 3 || dt[0] != "dims" {
        return Err(Error::parse(*dn, format!("expected `dims N M`, found `{dl}`")));
    }
    let n = parse_usize_at(*dn, dt[1])?;
    let m = parse_usize_at(*dn, dt[2])?;
    let mut wires: Vec<(String, WireOp)> = Vec::new();
    let mut outputs: Vec<Option<String>> = vec![None; n];
    for (ln, l) in &body[1..] {
        let toks: Vec<&str> = l.split_whitespace().collect();
        if toks.len() < 4 || toks[0] != "wire" || toks[2] != "=" {
            return Err(Error::parse(*ln, format!("expected `wire w = OP …`, found `{l}`")));
        }
        let name = node_at(*ln, toks[1])?;
        let op = toks[3];
        let args = &toks[4..];
        let two = |args: &[&str]| -> Result<(String, String), Error> {
            if args.len() != 2 {
                return Err(Error::parse(*ln, format!("{op} takes two arguments")));
            }
            Ok((args[0].to_string(), args[1].to_string()))
        };
        match op {
            "AND" => {
                let (a, b) = two(args)?;
                wires.push((name, WireOp::And(a, b)));
            }
            "OR" => {
                let (a, b) = two(args)?;
                wires.push((name, WireOp::Or(a, b)));
            }
            "NOT" => {
                if args.len() != 1 {
                    return Err(Error::parse(*ln, "NOT takes one argument".to_string()));
                }
                wires.push((name, WireOp::Not(args[0].to_string())));
            }
            "INPUT" => {
                let (i, j) = two(args)?;
                wires.push((
                    name,
                    WireOp::Input {
                        dim: parse_usize_at(*ln, &i)?,
                        pos: parse_usize_at(*ln, &j)?,
                    },
                ));
            }
            "OUTPUT" => {
                let (i, w) = two(args)?;
                let i = parse_usize_at(*ln, &i)?;
                if i == 0 || i > n {
                    return Err(Error::parse(*ln, format!("output coordinate {i} out of range")));
                }
                outputs[i - 1] = Some(w);
            }
            other => return Err(Error::parse(*ln, format!("unknown wire op `{other}`"))),
        }
    }
    let outputs: Vec<String> = outputs
        .into_iter()
        .enumerate()
        .map(|(i, o)| o.ok_or_else(|| Error::parse(1, format!("coordinate {} has no OUTPUT line", i + 1))))
        .collect::<Result<_, _>>()?;
    SpernerInstance::new(n, m, BooleanCircuit { wires, outputs })
}

/// Serializes a Sperner instance.
pub fn format_sperner_instance(inst: &SpernerInstance) -> String {
    let mut out = format!("sperner v1\ndims {} {}\n", inst.n, inst.m);
    for (w, op) in &inst.circuit.wires {
        let rhs = match op {
            WireOp::Input { dim, pos } => format!("INPUT {dim} {pos}"),
            WireOp::And(a, b) => format!("AND {a} {b}"),
            WireOp::Or(a, b) => format!("OR {a} {b}"),
            WireOp::Not(a) => format!("NOT {a}"),
        };
        out.push_str(&format!("wire {w} = {rhs}\n"));
    }
    for (i, w) in inst.circuit.outputs.iter().enumerate() {
        out.push_str(&format!("wire {w} = OUTPUT {} {w}\n", i + 1));
    }
    out
}

/// Parses grid points: one point per line, whitespace-separated integers.
pub fn parse_sperner_points(text: &str) -> Result<Vec<Vec<usize>>, Error> {
    significant_lines(text)
        .into_iter()
        .map(|(n, l)| {
            l.split_whitespace()
                .map(|t| parse_usize_at(n, t))
                .collect::<Result<Vec<usize>, Error>>()
        })
        .collect()
}

/// Serializes grid points.
pub fn format_sperner_points(points: &[Vec<usize>]) -> String {
    points
        .iter()
        .map(|p| {
            let mut l = p.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" ");
            l.push('\n');
            l
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Polymatrix games and profiles
// ---------------------------------------------------------------------------

/// Parses a `polymatrix v1` document.
pub fn parse_polymatrix(text: &str) -> Result<PolymatrixGame, Error> {
    let lines = significant_lines(text);
    let body = expect_header(&lines, "polymatrix v1")?;
    let mut g = PolymatrixGame::new();
    let mut edges: Vec<(usize, String, String)> = Vec::new();
    let mut idx = 0;
    while idx < body.len() {
        let (n, l) = body[idx];
        let toks: Vec<&str> = l.split_whitespace().collect();
        match toks[0] {
            "player" => {
                if toks.len() != 4 || toks[2] != "actions" {
                    return Err(Error::parse(n, format!("expected `player i actions m`, found `{l}`")));
                }
                let m = parse_usize_at(n, toks[3])?;
                if m == 0 {
                    return Err(Error::parse(n, "players need at least one action".to_string()));
                }
                g.add_player(&node_at(n, toks[1])?, m);
                idx += 1;
            }
            "edge" => {
                if toks.len() != 3 {
                    return Err(Error::parse(n, format!("expected `edge i j`, found `{l}`")));
                }
                edges.push((n, node_at(n, toks[1])?, node_at(n, toks[2])?));
                idx += 1;
            }
            "matrix" => {
                if toks.len() != 3 || !toks[2].ends_with(':') {
                    return Err(Error::parse(n, format!("expected `matrix i j:`, found `{l}`")));
                }
                let i = node_at(n, toks[1])?;
                let j = node_at(n, toks[2].trim_end_matches(':'))?;
                let mi = *g.actions.get(&i).ok_or_else(|| {
                    Error::parse(n, format!("matrix references undeclared player `{i}`"))
                })?;
                let mj = *g.actions.get(&j).ok_or_else(|| {
                    Error::parse(n, format!("matrix references undeclared player `{j}`"))
                })?;
                let mut rows = Vec::with_capacity(mi);
                for r in 0..mi {
                    let Some((rn, rl)) = body.get(idx + 1 + r) else {
                        return Err(Error::parse(n, format!("matrix {i} {j} is missing row {}", r + 1)));
                    };
                    let row: Vec<Rational> = rl
                        .split_whitespace()
                        .map(|t| parse_rat_at(*rn, t))
                        .collect::<Result<_, _>>()?;
                    if row.len() != mj {
                        return Err(Error::parse(
                            *rn,
                            format!("matrix {i} {j} row has {} entries, expected {mj}", row.len()),
                        ));
                    }
                    rows.push(row);
                }
                g.set_matrix(&i, &j, rows);
                idx += 1 + mi;
            }
            other => return Err(Error::parse(n, format!("unexpected token `{other}`"))),
        }
    }
    for (n, i, j) in edges {
        if g.matrix(&i, &j).is_none() || g.matrix(&j, &i).is_none() {
            return Err(Error::parse(
                n,
                format!("edge {i} {j} has no payoff matrices in both orientations"),
            ));
        }
    }
    Ok(g)
}

/// Serializes a polymatrix game.
pub fn format_polymatrix(g: &PolymatrixGame) -> String {
    let mut out = String::from("polymatrix v1\n");
    for (p, m) in &g.actions {
        out.push_str(&format!("player {p} actions {m}\n"));
    }
    for (i, j) in g.edges() {
        out.push_str(&format!("edge {i} {j}\n"));
    }
    for ((i, j), m) in &g.matrices {
        out.push_str(&format!("matrix {i} {j}:\n"));
        for row in m {
            let line: Vec<String> = row.iter().map(format_rational).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
    }
    out
}

/// Parses a strategy profile: `player i: p_1 … p_m` lines.
pub fn parse_profile(text: &str) -> Result<StrategyProfile, Error> {
    let mut strategies = BTreeMap::new();
    for (n, l) in significant_lines(text) {
        let toks: Vec<&str> = l.split_whitespace().collect();
        if toks.len() < 3 || toks[0] != "player" || !toks[1].ends_with(':') {
            return Err(Error::parse(n, format!("expected `player i: p …`, found `{l}`")));
        }
        let p = node_at(n, toks[1].trim_end_matches(':'))?;
        let probs: Vec<Rational> = toks[2..]
            .iter()
            .map(|t| parse_rat_at(n, t))
            .collect::<Result<_, _>>()?;
        strategies.insert(p, probs);
    }
    Ok(StrategyProfile { strategies })
}

/// Serializes a strategy profile.
pub fn format_profile(p: &StrategyProfile) -> String {
    p.strategies
        .iter()
        .map(|(player, probs)| {
            let ps: Vec<String> = probs.iter().map(format_rational).collect();
            format!("player {player}: {}\n", ps.join(" "))
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Threshold games
// ---------------------------------------------------------------------------

/// Parses a `threshold v1` document (`edge u v` lines, plus optional
/// `node u` lines for isolated nodes).
pub fn parse_threshold(text: &str) -> Result<ThresholdGame, Error> {
    let lines = significant_lines(text);
    let body = expect_header(&lines, "threshold v1")?;
    let mut g = ThresholdGame::new();
    for (n, l) in body {
        let toks: Vec<&str> = l.split_whitespace().collect();
        match toks[0] {
            "node" if toks.len() == 2 => g.add_node(&node_at(*n, toks[1])?),
            "edge" if toks.len() == 3 => {
                g.add_edge(&node_at(*n, toks[1])?, &node_at(*n, toks[2])?)
            }
            _ => return Err(Error::parse(*n, format!("expected `edge u v` or `node u`, found `{l}`"))),
        }
    }
    Ok(g)
}

/// Serializes a threshold game.
pub fn format_threshold(g: &ThresholdGame) -> String {
    let mut out = String::from("threshold v1\n");
    let touched: BTreeSet<&String> = g.edges.iter().flat_map(|(u, v)| [u, v]).collect();
    for v in &g.nodes {
        if !touched.contains(v) {
            out.push_str(&format!("node {v}\n"));
        }
    }
    for (u, v) in &g.edges {
        out.push_str(&format!("edge {u} {v}\n"));
    }
    out
}

// ---------------------------------------------------------------------------
// Bimatrix games and profiles
// ---------------------------------------------------------------------------

/// Parses a `bimatrix v1` document: `dimension d`, then `d` rows of the row
/// player's matrix and `d` rows of the column player's.
pub fn parse_bimatrix(text: &str) -> Result<BimatrixGame, Error> {
    let lines = significant_lines(text);
    let body = expect_header(&lines, "bimatrix v1")?;
    let Some((dn, dl)) = body.first() else {
        return Err(Error::parse(2, "missing `dimension d` line".to_string()));
    };
    let dt: Vec<&str> = dl.split_whitespace().collect();
    if dt.len() != 2 || dt[0] != "dimension" {
        return Err(Error::parse(*dn, format!("expected `dimension d`, found `{dl}`")));
    }
    let d = parse_usize_at(*dn, dt[1])?;
    if body.len() != 1 + 2 * d {
        return Err(Error::parse(
            *dn,
            format!("expected {} payoff rows after the dimension line, found {}", 2 * d, body.len() - 1),
        ));
    }
    let mut rows = Vec::with_capacity(2 * d);
    for (n, l) in &body[1..] {
        let row: Vec<Rational> = l
            .split_whitespace()
            .map(|t| parse_rat_at(*n, t))
            .collect::<Result<_, _>>()?;
        if row.len() != d {
            return Err(Error::parse(*n, format!("row has {} entries, expected {d}", row.len())));
        }
        rows.push(row);
    }
    let c = rows.split_off(d);
    Ok(BimatrixGame { r: rows, c })
}

/// Serializes a bimatrix game.
pub fn format_bimatrix(g: &BimatrixGame) -> String {
    let mut out = format!("bimatrix v1\ndimension {}\n", g.size());
    for m in [&g.r, &g.c] {
        for row in m {
            let line: Vec<String> = row.iter().map(format_rational).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
    }
    out
}

/// Parses a bimatrix profile: a `row: p …` line and a `col: p …` line.
pub fn parse_bimatrix_profile(text: &str) -> Result<BimatrixProfile, Error> {
    let mut x = None;
    let mut y = None;
    for (n, l) in significant_lines(text) {
        let toks: Vec<&str> = l.split_whitespace().collect();
        let probs: Vec<Rational> = toks[1..]
            .iter()
            .map(|t| parse_rat_at(n, t))
            .collect::<Result<_, _>>()?;
        match toks[0] {
            "row:" => x = Some(probs),
            "col:" => y = Some(probs),
            other => return Err(Error::parse(n, format!("expected `row:` or `col:`, found `{other}`"))),
        }
    }
    match (x, y) {
        (Some(x), Some(y)) => Ok(BimatrixProfile { x, y }),
        _ => Err(Error::parse(1, "profile needs both a `row:` and a `col:` line".to_string())),
    }
}

/// Serializes a bimatrix profile.
pub fn format_bimatrix_profile(p: &BimatrixProfile) -> String {
    let fmt = |v: &[Rational]| {
        v.iter().map(format_rational).collect::<Vec<_>>().join(" ")
    };
    format!("row: {}\ncol: {}\n", fmt(&p.x), fmt(&p.y))
}

// ---------------------------------------------------------------------------
// Reduction maps
// ---------------------------------------------------------------------------

/// A reduction map of any supported kind, as stored in `reduction-map v1`
/// files.
#[derive(Debug, Clone)]
pub enum ReductionMapFile {
    /// Pure circuit → generalized circuit.
    GCircuit(GCReductionMap),
    /// Pure circuit → polymatrix (WSNE gadgets).
    Wsne(PMReductionMap),
    /// Pure circuit → polymatrix (NE gadgets, stores δ).
    Ne(PMReductionMap),
    /// Pure circuit → win-lose polymatrix.
    WinLose(PMReductionMap),
    /// Pure circuit → threshold game.
    Threshold(TGReductionMap),
    /// Polymatrix → bimatrix.
    Bimatrix(BMReductionMap),
    /// Sperner → pure circuit.
    Sperner(ExtractionMap),
}

impl ReductionMapFile {
    /// The `kind` tag used in files and on the command line.
    pub fn kind(&self) -> &'static str {
        match self {
            ReductionMapFile::GCircuit(_) => "gcircuit",
            ReductionMapFile::Wsne(_) => "wsne",
            ReductionMapFile::Ne(_) => "ne",
            ReductionMapFile::WinLose(_) => "winlose",
            ReductionMapFile::Threshold(_) => "threshold",
            ReductionMapFile::Bimatrix(_) => "bimatrix",
            ReductionMapFile::Sperner(_) => "sperner",
        }
    }
}

/// Serializes a reduction map.
pub fn format_reduction_map(map: &ReductionMapFile) -> String {
    let mut out = format!("reduction-map v1\nkind {}\n", map.kind());
    match map {
        ReductionMapFile::GCircuit(m) => {
            for node in &m.original_nodes {
                out.push_str(&format!("node {node}\n"));
            }
            for g in &m.gadgets {
                match g {
                    GCGadget::Nor { u, v, w, s, t } => {
                        out.push_str(&format!("gadget nor {u} {v} {w} -> {s} {t}\n"));
                    }
                    GCGadget::Threshold { u, out: o, a, b, c } => {
                        out.push_str(&format!(
                            "gadget threshold {u} {o} -> {a} {b} c={}\n",
                            format_rational(c)
                        ));
                    }
                }
            }
        }
        ReductionMapFile::Wsne(m) | ReductionMapFile::Ne(m) | ReductionMapFile::WinLose(m) => {
            if let Some(d) = &m.delta {
                out.push_str(&format!("delta {}\n", format_rational(d)));
            }
            for (node, player) in &m.node_players {
                out.push_str(&format!("node {node} -> {player}\n"));
            }
        }
        ReductionMapFile::Threshold(m) => {
            for node in &m.original_nodes {
                out.push_str(&format!("node {node}\n"));
            }
            for p in &m.purify_internals {
                out.push_str(&format!(
                    "purify {} {} {} -> {} {} {} {}\n",
                    p.u, p.v, p.w, p.a, p.b, p.c, p.d
                ));
            }
        }
        ReductionMapFile::Bimatrix(m) => {
            for (i, node) in m.r_side.iter().enumerate() {
                out.push_str(&format!("rside {i} -> {node}\n"));
            }
            for (i, node) in m.c_side.iter().enumerate() {
                out.push_str(&format!("cside {i} -> {node}\n"));
            }
            for d in &m.dummies {
                out.push_str(&format!("dummy {d}\n"));
            }
        }
        ReductionMapFile::Sperner(m) => {
            out.push_str(&format!("dims {} {}\ncopies {}\n", m.n, m.m, m.k));
            for ((i, j, t), node) in &m.leaves {
                out.push_str(&format!("leaf {i} {j} {t} -> {node}\n"));
            }
        }
    }
    out
}

/// Parses a `reduction-map v1` document.
pub fn parse_reduction_map(text: &str) -> Result<ReductionMapFile, Error> {
    let lines = significant_lines(text);
    let body = expect_header(&lines, "reduction-map v1")?;
    let Some((kn, kl)) = body.first() else {
        return Err(Error::parse(2, "missing `kind …` line".to_string()));
    };
    let kt: Vec<&str> = kl.split_whitespace().collect();
    if kt.len() != 2 || kt[0] != "kind" {
        return Err(Error::parse(*kn, format!("expected `kind …`, found `{kl}`")));
    }
    let kind = kt[1];
    let rest = &body[1..];
    let arrow_split = |n: usize, toks: &[&str]| -> Result<(Vec<String>, Vec<String>), Error> {
        let pos = toks
            .iter()
            .position(|&s| s == "->")
            .ok_or_else(|| Error::parse(n, "record is missing `->`".to_string()))?;
        Ok((
            toks[..pos].iter().map(|s| s.to_string()).collect(),
            toks[pos + 1..].iter().map(|s| s.to_string()).collect(),
        ))
    };
    match kind {
        "gcircuit" => {
            let mut m = GCReductionMap { original_nodes: BTreeSet::new(), gadgets: Vec::new() };
            for (n, l) in rest {
                let toks: Vec<&str> = l.split_whitespace().collect();
                match toks[0] {
                    "node" if toks.len() == 2 => {
                        m.original_nodes.insert(node_at(*n, toks[1])?);
                    }
                    "gadget" if toks.get(1) == Some(&"nor") => {
                        let (lhs, rhs) = arrow_split(*n, &toks[2..])?;
                        if lhs.len() != 3 || rhs.len() != 2 {
                            return Err(Error::parse(*n, "nor gadget needs `u v w -> s t`".to_string()));
                        }
                        m.gadgets.push(GCGadget::Nor {
                            u: lhs[0].clone(),
                            v: lhs[1].clone(),
                            w: lhs[2].clone(),
                            s: rhs[0].clone(),
                            t: rhs[1].clone(),
                        });
                    }
                    "gadget" if toks.get(1) == Some(&"threshold") => {
                        let (lhs, mut rhs) = arrow_split(*n, &toks[2..])?;
                        let c = rhs
                            .last()
                            .filter(|s| s.starts_with("c="))
                            .map(|s| parse_rat_at(*n, &s[2..]))
                            .transpose()?
                            .ok_or_else(|| Error::parse(*n, "threshold gadget needs `c=p/q`".to_string()))?;
                        rhs.pop();
                        if lhs.len() != 2 || rhs.len() != 2 {
                            return Err(Error::parse(*n, "threshold gadget needs `u out -> a b c=p/q`".to_string()));
                        }
                        m.gadgets.push(GCGadget::Threshold {
                            u: lhs[0].clone(),
                            out: lhs[1].clone(),
                            a: rhs[0].clone(),
                            b: rhs[1].clone(),
                            c,
                        });
                    }
                    _ => return Err(Error::parse(*n, format!("unexpected record `{l}`"))),
                }
            }
            Ok(ReductionMapFile::GCircuit(m))
        }
        "wsne" | "ne" | "winlose" => {
            let mut m = PMReductionMap { node_players: BTreeMap::new(), delta: None };
            for (n, l) in rest {
                let toks: Vec<&str> = l.split_whitespace().collect();
                match toks[0] {
                    "delta" if toks.len() == 2 => m.delta = Some(parse_rat_at(*n, toks[1])?),
                    "node" if toks.len() == 4 && toks[2] == "->" => {
                        m.node_players.insert(node_at(*n, toks[1])?, node_at(*n, toks[3])?);
                    }
                    _ => return Err(Error::parse(*n, format!("unexpected record `{l}`"))),
                }
            }
            Ok(match kind {
                "wsne" => ReductionMapFile::Wsne(m),
                "ne" => ReductionMapFile::Ne(m),
                _ => ReductionMapFile::WinLose(m),
            })
        }
        "threshold" => {
            let mut m = TGReductionMap { original_nodes: BTreeSet::new(), purify_internals: Vec::new() };
            for (n, l) in rest {
                let toks: Vec<&str> = l.split_whitespace().collect();
                match toks[0] {
                    "node" if toks.len() == 2 => {
                        m.original_nodes.insert(node_at(*n, toks[1])?);
                    }
                    "purify" => {
                        let (lhs, rhs) = arrow_split(*n, &toks[1..])?;
                        if lhs.len() != 3 || rhs.len() != 4 {
                            return Err(Error::parse(*n, "purify record needs `u v w -> a b c d`".to_string()));
                        }
                        m.purify_internals.push(PurifyInternals {
                            u: lhs[0].clone(),
                            v: lhs[1].clone(),
                            w: lhs[2].clone(),
                            a: rhs[0].clone(),
                            b: rhs[1].clone(),
                            c: rhs[2].clone(),
                            d: rhs[3].clone(),
                        });
                    }
                    _ => return Err(Error::parse(*n, format!("unexpected record `{l}`"))),
                }
            }
            Ok(ReductionMapFile::Threshold(m))
        }
        "bimatrix" => {
            let mut r: Vec<(usize, String)> = Vec::new();
            let mut c: Vec<(usize, String)> = Vec::new();
            let mut dummies = BTreeSet::new();
            for (n, l) in rest {
                let toks: Vec<&str> = l.split_whitespace().collect();
                match toks[0] {
                    "rside" | "cside" if toks.len() == 4 && toks[2] == "->" => {
                        let i = parse_usize_at(*n, toks[1])?;
                        let node = node_at(*n, toks[3])?;
                        if toks[0] == "rside" {
                            r.push((i, node));
                        } else {
                            c.push((i, node));
                        }
                    }
                    "dummy" if toks.len() == 2 => {
                        dummies.insert(node_at(*n, toks[1])?);
                    }
                    _ => return Err(Error::parse(*n, format!("unexpected record `{l}`"))),
                }
            }
            r.sort();
            c.sort();
            Ok(ReductionMapFile::Bimatrix(BMReductionMap {
                r_side: r.into_iter().map(|(_, s)| s).collect(),
                c_side: c.into_iter().map(|(_, s)| s).collect(),
                dummies,
            }))
        }
        "sperner" => {
            let mut dims: Option<(usize, usize)> = None;
            let mut copies: Option<usize> = None;
            let mut leaves = BTreeMap::new();
            for (n, l) in rest {
                let toks: Vec<&str> = l.split_whitespace().collect();
                match toks[0] {
                    "dims" if toks.len() == 3 => {
                        dims = Some((parse_usize_at(*n, toks[1])?, parse_usize_at(*n, toks[2])?));
                    }
                    "copies" if toks.len() == 2 => copies = Some(parse_usize_at(*n, toks[1])?),
                    "leaf" if toks.len() == 6 && toks[4] == "->" => {
                        leaves.insert(
                            (
                                parse_usize_at(*n, toks[1])?,
                                parse_usize_at(*n, toks[2])?,
                                parse_usize_at(*n, toks[3])?,
                            ),
                            node_at(*n, toks[5])?,
                        );
                    }
                    _ => return Err(Error::parse(*n, format!("unexpected record `{l}`"))),
                }
            }
            let (n, m) = dims.ok_or_else(|| Error::parse(2, "missing `dims N M` record".to_string()))?;
            let k = copies.ok_or_else(|| Error::parse(2, "missing `copies K` record".to_string()))?;
            Ok(ReductionMapFile::Sperner(ExtractionMap { n, m, k, leaves }))
        }
        other => Err(Error::parse(*kn, format!("unknown map kind `{other}`"))),
    }
}
