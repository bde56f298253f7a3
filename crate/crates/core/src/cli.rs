//! Command-line front end.
//!
//! Subcommands: `validate`, `verify`, `solve`, `reduce`, `reduce-sperner`,
//! `decode`, `oracle`, and `gadget-check`.  Every invocation prints a
//! machine-readable status line (`OK`, `VIOLATED`, `INCONCLUSIVE`, or
//! `ERROR`) followed by a payload; the exit code is 0 exactly when the
//! status is `OK`.  All numeric input and output is exact rationals `p/q`.
//! Output is deterministic: identical inputs yield byte-identical output.

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::bimatrix::{
    decode_bimatrix, grid_search_relative_wsne, reduce_polymatrix_to_bimatrix,
    BimatrixReductionParams,
};
use crate::circuit::{check_restrictions, validate_instance, verify_assignment};
use crate::error::Error;
use crate::gcircuit::{decode_gc_solution, reduce_pc_to_gcircuit, GCGadgetKind};
use crate::io::*;
use crate::polymatrix::{
    choose_delta, decode_ne_profile, decode_wsne_profile, gadget_case_check,
    grid_search_equilibrium, reduce_pc_to_ne, reduce_pc_to_wsne, reduce_pc_to_winlose, EqMode,
    PMGadgetKind,
};
use crate::rational::{parse_rational, rat, Rational};
use crate::solve::{
    brute_force_solve, relaxation_iterate, solve_monotone, solve_no_purify, solve_non_robust,
    RelaxOutcome, SolveBudget, SolveOutcome,
};
use crate::sperner::{extract_solution, reduce_to_pure_circuit};
use crate::threshold::{
    decode_threshold, reduce_pc_to_threshold, threshold_gadget_check, TGGadgetKind,
};

/// Machine-readable command status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    /// The requested check or computation succeeded.
    Ok,
    /// The property under test fails (verifier rejected, counterexample found).
    Violated,
    /// The search was exhausted or over budget without a definite answer.
    Inconclusive,
    /// Bad input: unknown flags, malformed files, violated preconditions.
    Error,
}

impl Status {
    /// Status line text.
    pub fn name(self) -> &'static str {
        match self {
            Status::Ok => "OK",
            Status::Violated => "VIOLATED",
            Status::Inconclusive => "INCONCLUSIVE",
            Status::Error => "ERROR",
        }
    }

    /// Process exit code (0 iff `OK`).
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::Violated => 1,
            Status::Inconclusive => 2,
            Status::Error => 3,
        }
    }
}

/// Result of one invocation: status plus the payload printed after the
/// status line.
#[derive(Debug, Clone)]
pub struct CommandResult {
    /// Outcome category.
    pub status: Status,
    /// Payload lines (without the status line).
    pub output: String,
}

#[derive(Parser)]
#[command(
    name = "pure-circuit",
    about = "Pure-circuit instances, solvers, and gadget reductions to game fixpoint problems",
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Structurally validate a pure-circuit instance file.
    Validate { file: PathBuf },
    /// Verify an assignment against a pure-circuit instance.
    Verify { file: PathBuf, assignment: PathBuf },
    /// Solve a pure-circuit instance.
    Solve {
        file: PathBuf,
        /// brute | no-purify | monotone | non-robust | relaxation
        #[arg(long, default_value = "brute")]
        method: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Reduce an instance to a target problem, emitting the target instance
    /// and a reduction map.
    Reduce {
        /// A pure-circuit file (or a polymatrix file for `--to bimatrix`).
        file: PathBuf,
        /// gcircuit | wsne | ne | winlose | threshold | bimatrix
        #[arg(long)]
        to: String,
        /// Target tolerance (used by `--to ne`, default 8/100).
        #[arg(long)]
        eps: Option<String>,
        /// Output prefix; writes `<out>.instance` and `<out>.map`.  Without
        /// it, both documents go to stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Reduce a Sperner instance to a pure circuit.
    ReduceSperner {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decode a target-problem solution back through a reduction map.
    Decode {
        /// The reduction-map file emitted by `reduce`.
        #[arg(long)]
        map: PathBuf,
        /// The solution file (assignment or strategy profile).
        solution: PathBuf,
        /// Decoding tolerance where applicable (gcircuit default 1/20,
        /// threshold default 1/10).
        #[arg(long)]
        eps: Option<String>,
        /// The reduced pure-circuit instance (required for sperner maps).
        #[arg(long)]
        instance: Option<PathBuf>,
    },
    /// Grid-search a game file for an approximate equilibrium.
    Oracle {
        file: PathBuf,
        /// ne | wsne | relwsne
        #[arg(long)]
        mode: String,
        #[arg(long)]
        eps: String,
        #[arg(long)]
        step: String,
    },
    /// Exhaustively check one gadget's forcing claims on a grid.
    GadgetCheck {
        /// gc-nor | gc-purify | wsne-* | ne-* | winlose-* | threshold-nor |
        /// threshold-purify
        #[arg(long)]
        kind: String,
        #[arg(long)]
        eps: String,
        #[arg(long, default_value = "1/100")]
        step: String,
    },
}

fn read(path: &Path) -> Result<String, Error> {
    Ok(std::fs::read_to_string(path)?)
}

fn rational_arg(s: &str) -> Result<Rational, Error> {
    parse_rational(s).map_err(|e| Error::Precondition(format!("bad rational `{s}`: {e}")))
}

fn run_command(cmd: Command) -> Result<(Status, String), Error> {
    match cmd {
        Command::Validate { file } => {
            let inst = parse_pc_instance(&read(&file)?)?;
            let report = validate_instance(&inst);
            let flags = check_restrictions(&inst);
            let mut out = String::new();
            for line in report.describe() {
                out.push_str(&line);
                out.push('\n');
            }
            out.push_str(&format!(
                "restrictions: input-exactly-once={} degree-profile={} bipartite={}\n",
                flags.input_exactly_once, flags.degree_profile, flags.bipartite
            ));
            let status = if report.is_valid() { Status::Ok } else { Status::Violated };
            Ok((status, out))
        }
        Command::Verify { file, assignment } => {
            let inst = parse_pc_instance(&read(&file)?)?;
            let a = parse_pc_assignment(&read(&assignment)?)?;
            let verdicts = verify_assignment(&inst, &a)?;
            if verdicts.all_satisfied() {
                Ok((Status::Ok, "all gates satisfied\n".to_string()))
            } else {
                let bad: Vec<String> =
                    verdicts.violated_gates().iter().map(|i| i.to_string()).collect();
                Ok((Status::Violated, format!("violated gates: {}\n", bad.join(" "))))
            }
        }
        Command::Solve { file, method, seed } => {
            let inst = parse_pc_instance(&read(&file)?)?;
            let budget = SolveBudget { seed, ..SolveBudget::default() };
            let solution = match method.as_str() {
                "brute" => match brute_force_solve(&inst, &budget)? {
                    SolveOutcome::Solution(a) => Some(a),
                    SolveOutcome::NoSolution => {
                        return Ok((Status::Violated, "no solution exists\n".to_string()))
                    }
                    SolveOutcome::Inconclusive => None,
                },
                "no-purify" => Some(solve_no_purify(&inst)?),
                "monotone" => Some(solve_monotone(&inst)?),
                "non-robust" => Some(solve_non_robust(&inst)?),
                "relaxation" => match relaxation_iterate(&inst, &budget)? {
                    RelaxOutcome::Solution(a) => Some(a),
                    RelaxOutcome::Inconclusive { .. } => None,
                },
                other => {
                    return Err(Error::Precondition(format!("unknown solve method `{other}`")))
                }
            };
            match solution {
                Some(a) => Ok((Status::Ok, format_pc_assignment(&a))),
                None => Ok((Status::Inconclusive, "search budget exhausted\n".to_string())),
            }
        }
        Command::Reduce { file, to, eps, out } => {
            let text = read(&file)?;
            let (instance_doc, map) = match to.as_str() {
                "gcircuit" => {
                    let inst = parse_pc_instance(&text)?;
                    let (gc, map) = reduce_pc_to_gcircuit(&inst)?;
                    (format_gc_instance(&gc), ReductionMapFile::GCircuit(map))
                }
                "wsne" => {
                    let inst = parse_pc_instance(&text)?;
                    let (g, map) = reduce_pc_to_wsne(&inst)?;
                    (format_polymatrix(&g), ReductionMapFile::Wsne(map))
                }
                "ne" => {
                    let inst = parse_pc_instance(&text)?;
                    let e = match eps {
                        Some(s) => rational_arg(&s)?,
                        None => rat(8, 100),
                    };
                    let (g, map) = reduce_pc_to_ne(&inst, &e)?;
                    (format_polymatrix(&g), ReductionMapFile::Ne(map))
                }
                "winlose" => {
                    let inst = parse_pc_instance(&text)?;
                    let (g, map) = reduce_pc_to_winlose(&inst)?;
                    (format_polymatrix(&g), ReductionMapFile::WinLose(map))
                }
                "threshold" => {
                    let inst = parse_pc_instance(&text)?;
                    let (g, map) = reduce_pc_to_threshold(&inst)?;
                    (format_threshold(&g), ReductionMapFile::Threshold(map))
                }
                "bimatrix" => {
                    let g = parse_polymatrix(&text)?;
                    let (bg, map) =
                        reduce_polymatrix_to_bimatrix(&g, &BimatrixReductionParams::default())?;
                    (format_bimatrix(&bg), ReductionMapFile::Bimatrix(map))
                }
                other => {
                    return Err(Error::Precondition(format!("unknown reduction target `{other}`")))
                }
            };
            emit_reduction(&instance_doc, &format_reduction_map(&map), out)
        }
        Command::ReduceSperner { file, out } => {
            let inst = parse_sperner_instance(&read(&file)?)?;
            let (pc, map) = reduce_to_pure_circuit(&inst);
            emit_reduction(
                &format_pc_instance(&pc),
                &format_reduction_map(&ReductionMapFile::Sperner(map)),
                out,
            )
        }
        Command::Decode { map, solution, eps, instance } => {
            let map = parse_reduction_map(&read(&map)?)?;
            let sol = read(&solution)?;
            let eps = eps.map(|s| rational_arg(&s)).transpose()?;
            let decoded = match &map {
                ReductionMapFile::GCircuit(m) => {
                    let x = parse_gc_assignment(&sol)?;
                    let e = eps.unwrap_or_else(|| rat(1, 20));
                    format_pc_assignment(&decode_gc_solution(m, &x, &e)?)
                }
                ReductionMapFile::Wsne(m) | ReductionMapFile::WinLose(m) => {
                    let p = parse_profile(&sol)?;
                    format_pc_assignment(&decode_wsne_profile(m, &p))
                }
                ReductionMapFile::Ne(m) => {
                    let p = parse_profile(&sol)?;
                    let delta = m.delta.clone().ok_or_else(|| {
                        Error::Precondition("ne map is missing its delta record".into())
                    })?;
                    format_pc_assignment(&decode_ne_profile(m, &p, &delta))
                }
                ReductionMapFile::Threshold(m) => {
                    let x = parse_tg_assignment(&sol)?;
                    let e = eps.unwrap_or_else(|| rat(1, 10));
                    format_pc_assignment(&decode_threshold(m, &x, &e)?)
                }
                ReductionMapFile::Bimatrix(m) => {
                    let p = parse_bimatrix_profile(&sol)?;
                    format_profile(&decode_bimatrix(m, &p)?)
                }
                ReductionMapFile::Sperner(m) => {
                    let pc_file = instance.ok_or_else(|| {
                        Error::Precondition(
                            "sperner decoding needs --instance <pure-circuit file>".into(),
                        )
                    })?;
                    let pc = parse_pc_instance(&read(&pc_file)?)?;
                    let x = parse_pc_assignment(&sol)?;
                    format_sperner_points(&extract_solution(&pc, m, &x)?.points)
                }
            };
            Ok((Status::Ok, decoded))
        }
        Command::Oracle { file, mode, eps, step } => {
            let eps = rational_arg(&eps)?;
            let step = rational_arg(&step)?;
            let text = read(&file)?;
            let found = match mode.as_str() {
                "ne" | "wsne" => {
                    let g = parse_polymatrix(&text)?;
                    let m = if mode == "ne" { EqMode::Ne } else { EqMode::Wsne };
                    grid_search_equilibrium(&g, &eps, &step, m)?.map(|p| format_profile(&p))
                }
                "relwsne" => {
                    let g = parse_bimatrix(&text)?;
                    grid_search_relative_wsne(&g, &eps, &step)?
                        .map(|p| format_bimatrix_profile(&p))
                }
                other => {
                    return Err(Error::Precondition(format!("unknown oracle mode `{other}`")))
                }
            };
            match found {
                Some(p) => Ok((Status::Ok, p)),
                None => Ok((Status::Inconclusive, "no grid equilibrium found\n".to_string())),
            }
        }
        Command::GadgetCheck { kind, eps, step } => {
            let eps = rational_arg(&eps)?;
            let step = rational_arg(&step)?;
            let (checked, failures): (u64, Vec<String>) = match kind.as_str() {
                "gc-nor" | "gc-purify" => {
                    let k = if kind == "gc-nor" { GCGadgetKind::Nor } else { GCGadgetKind::Purify };
                    let inv = step.recip();
                    if !num::One::is_one(inv.denom()) {
                        return Err(Error::Precondition(
                            "step must be the reciprocal of a positive integer".into(),
                        ));
                    }
                    let den = num::ToPrimitive::to_i64(inv.numer())
                        .ok_or_else(|| Error::Precondition("step too fine".into()))?;
                    let r = crate::gcircuit::gadget_case_check(k, &eps, den)?;
                    (r.cases_checked, r.failures)
                }
                "threshold-nor" | "threshold-purify" => {
                    let k = if kind == "threshold-nor" {
                        TGGadgetKind::Nor
                    } else {
                        TGGadgetKind::Purify
                    };
                    let r = threshold_gadget_check(k, &eps, &step)?;
                    (r.cases_checked, r.failures)
                }
                other => {
                    let k = PMGadgetKind::parse(other).ok_or_else(|| {
                        Error::Precondition(format!("unknown gadget kind `{other}`"))
                    })?;
                    let params = match k {
                        PMGadgetKind::NeNot | PMGadgetKind::NeAnd | PMGadgetKind::NePurify => {
                            Some(choose_delta(&eps)?)
                        }
                        _ => None,
                    };
                    let r = gadget_case_check(k, &eps, &step, params.as_ref())?;
                    (r.cases_checked, r.failures)
                }
            };
            let mut out = format!("cases checked: {checked}\n");
            for f in &failures {
                out.push_str(&format!("counterexample: {f}\n"));
            }
            let status = if failures.is_empty() { Status::Ok } else { Status::Violated };
            Ok((status, out))
        }
    }
}

fn emit_reduction(
    instance_doc: &str,
    map_doc: &str,
    out: Option<PathBuf>,
) -> Result<(Status, String), Error> {
    match out {
        Some(prefix) => {
            let inst_path = prefix.with_extension("instance");
            let map_path = prefix.with_extension("map");
            std::fs::write(&inst_path, instance_doc)?;
            std::fs::write(&map_path, map_doc)?;
            Ok((
                Status::Ok,
                format!("wrote {}\nwrote {}\n", inst_path.display(), map_path.display()),
            ))
        }
        None => Ok((Status::Ok, format!("{instance_doc}{map_doc}"))),
    }
}

/// Runs one invocation.  `argv` must include the program name.
pub fn run<I, S>(argv: I) -> CommandResult
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            // Let clap's help/version output pass through untouched.
            let msg = e.to_string();
            let status = if e.use_stderr() { Status::Error } else { Status::Ok };
            return CommandResult { status, output: msg };
        }
    };
    match run_command(cli.command) {
        Ok((status, output)) => CommandResult { status, output },
        Err(e) => CommandResult { status: Status::Error, output: format!("{e}\n") },
    }
}

/// Entry point of the `pure-circuit` binary.
pub fn run_main() -> i32 {
    let result = run(std::env::args_os());
    println!("{}", result.status.name());
    print!("{}", result.output);
    result.status.exit_code()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> CommandResult {
        run(std::iter::once("pure-circuit").chain(args.iter().copied()))
    }

    fn write(dir: &Path, name: &str, content: &str) -> PathBuf {
        let p = dir.join(name);
        std::fs::write(&p, content).unwrap();
        p
    }

    const NOR_PURIFY: &str =
        "pure-circuit v1\ngate NOR v w -> u\ngate PURIFY u -> v w\n";
    const PURIFY_NOT: &str =
        "pure-circuit v1\ngate PURIFY u -> v w\ngate NOT v -> u\n";

    #[test]
    fn verify_reports_ok_on_known_solution() {
        let dir = tempfile::tempdir().unwrap();
        let inst = write(dir.path(), "i.pc", NOR_PURIFY);
        let good = write(dir.path(), "good.txt", "u = bot\nv = 0\nw = bot\n");
        let r = run_args(&["verify", inst.to_str().unwrap(), good.to_str().unwrap()]);
        assert_eq!(r.status, Status::Ok, "{}", r.output);
        let bad = write(dir.path(), "bad.txt", "u = 1\nv = 1\nw = 1\n");
        let r = run_args(&["verify", inst.to_str().unwrap(), bad.to_str().unwrap()]);
        assert_eq!(r.status, Status::Violated);
        assert_eq!(r.status.exit_code(), 1);
    }

    #[test]
    fn validate_and_solve() {
        let dir = tempfile::tempdir().unwrap();
        let inst = write(dir.path(), "i.pc", PURIFY_NOT);
        let r = run_args(&["validate", inst.to_str().unwrap()]);
        assert_eq!(r.status, Status::Ok, "{}", r.output);
        assert!(r.output.contains("bipartite=true"));
        let r = run_args(&["solve", inst.to_str().unwrap(), "--method", "brute"]);
        assert_eq!(r.status, Status::Ok, "{}", r.output);
        let a = parse_pc_assignment(&r.output).unwrap();
        let pc = parse_pc_instance(PURIFY_NOT).unwrap();
        assert!(verify_assignment(&pc, &a).unwrap().all_satisfied());
        // Malformed files are parse errors with the line number.
        let bad = write(dir.path(), "bad.pc", "pure-circuit v1\ngate NOR u -> w\n");
        let r = run_args(&["validate", bad.to_str().unwrap()]);
        assert_eq!(r.status, Status::Error);
        assert!(r.output.contains("line 2"), "{}", r.output);
        assert_eq!(r.status.exit_code(), 3);
    }

    #[test]
    fn wsne_pipeline_round_trips() {
        let dir = tempfile::tempdir().unwrap();
        let inst = write(dir.path(), "i.pc", PURIFY_NOT);
        let prefix = dir.path().join("red");
        let r = run_args(&[
            "reduce",
            inst.to_str().unwrap(),
            "--to",
            "wsne",
            "--out",
            prefix.to_str().unwrap(),
        ]);
        assert_eq!(r.status, Status::Ok, "{}", r.output);
        let game = prefix.with_extension("instance");
        let map = prefix.with_extension("map");
        let r = run_args(&[
            "oracle",
            game.to_str().unwrap(),
            "--mode",
            "wsne",
            "--eps",
            "3/10",
            "--step",
            "1/20",
        ]);
        assert_eq!(r.status, Status::Ok, "{}", r.output);
        let profile = write(dir.path(), "profile.txt", &r.output);
        let r = run_args(&[
            "decode",
            "--map",
            map.to_str().unwrap(),
            profile.to_str().unwrap(),
        ]);
        assert_eq!(r.status, Status::Ok, "{}", r.output);
        let decoded = parse_pc_assignment(&r.output).unwrap();
        let pc = parse_pc_instance(PURIFY_NOT).unwrap();
        assert!(verify_assignment(&pc, &decoded).unwrap().all_satisfied());
    }

    #[test]
    fn gadget_check_statuses() {
        let r = run_args(&["gadget-check", "--kind", "wsne-and", "--eps", "33/100"]);
        assert_eq!(r.status, Status::Ok, "{}", r.output);
        let r = run_args(&["gadget-check", "--kind", "wsne-and", "--eps", "34/100"]);
        assert_eq!(r.status, Status::Violated);
        assert!(r.output.contains("counterexample"), "{}", r.output);
        let r = run_args(&["gadget-check", "--kind", "nonsense", "--eps", "1/10"]);
        assert_eq!(r.status, Status::Error);
    }

    #[test]
    fn reduce_sperner_emits_parseable_files() {
        let dir = tempfile::tempdir().unwrap();
        let sp = write(
            dir.path(),
            "s.sperner",
            "sperner v1\ndims 1 2\nwire b1 = INPUT 1 1\nwire b2 = INPUT 1 2\nwire g = AND b1 b2\nwire o = NOT g\nwire o = OUTPUT 1 o\n",
        );
        let prefix = dir.path().join("sp");
        let r = run_args(&[
            "reduce-sperner",
            sp.to_str().unwrap(),
            "--out",
            prefix.to_str().unwrap(),
        ]);
        assert_eq!(r.status, Status::Ok, "{}", r.output);
        let pc_text = std::fs::read_to_string(prefix.with_extension("instance")).unwrap();
        assert!(parse_pc_instance(&pc_text).is_ok());
        let map_text = std::fs::read_to_string(prefix.with_extension("map")).unwrap();
        assert!(matches!(
            parse_reduction_map(&map_text).unwrap(),
            ReductionMapFile::Sperner(_)
        ));
    }

    #[test]
    fn reduce_without_out_prints_both_documents() {
        let dir = tempfile::tempdir().unwrap();
        let inst = write(dir.path(), "i.pc", PURIFY_NOT);
        let r = run_args(&["reduce", inst.to_str().unwrap(), "--to", "threshold"]);
        assert_eq!(r.status, Status::Ok, "{}", r.output);
        assert!(r.output.starts_with("threshold v1\n"));
        let map_start = r.output.find("reduction-map v1").unwrap();
        assert!(parse_threshold(&r.output[..map_start]).is_ok());
        assert!(parse_reduction_map(&r.output[map_start..]).is_ok());
        // Determinism: a second run is byte-identical.
        let again = run_args(&["reduce", inst.to_str().unwrap(), "--to", "threshold"]);
        assert_eq!(again.output, r.output);
    }
}
