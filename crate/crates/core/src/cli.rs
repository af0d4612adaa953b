//! Command-line front end.
//!
//! Exit codes: 0 positive verdict, 1 negative verdict, 2 bad input or
//! usage, 3 time budget exceeded.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::automata::{common_image, default_parikh_cap, parse_nfa, word_with_parikh, Nfa, ParikhVector};
use crate::constraints::{construct_permutation, parse_con};
use crate::error::{Error, Result};
use crate::logic::{eval_formula, parse_formula, to_snf, Assignment, Formula};
use crate::perm::{fingerprints, labeled_to_valued, parse_pm, summary_of, valued_to_labeled, write_pm, Valuation, ValuedPermutation};
use crate::rlp::{named, parse_rlp, shuffle_check, solve_rlp, unnamed, verify_witness, RlpOutcome, ShuffleMethod, SolveOptions};
use crate::sat::{decide_sat, decide_sat_oracle, SatBounds, SatOutcome};

#[derive(Parser, Debug)]
#[command(name = "permlogic", version, about = "Two-variable logic over two successor relations: model checking, satisfiability and the permutation problems behind it")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate a closed formula on a model.
    Check {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        formula: PathBuf,
    },
    /// Decide satisfiability within bounds.
    Sat(SatArgs),
    /// Print the normal form of a formula.
    Snf {
        #[arg(long)]
        formula: PathBuf,
    },
    /// Solve or verify restricted labeled permutation instances.
    #[command(subcommand)]
    Rlp(RlpCommand),
    /// Constraint permutations, blocks and fingerprints.
    #[command(subcommand)]
    Perm(PermCommand),
    /// Parikh membership and common Parikh images of automata.
    #[command(subcommand)]
    Nfa(NfaCommand),
    /// Find a word of one language and a spread-out reordering in another.
    Shuffle {
        #[arg(long)]
        l1: PathBuf,
        #[arg(long)]
        l2: PathBuf,
        #[arg(long, default_value_t = 8)]
        max_n: usize,
        #[arg(long, value_enum, default_value_t = Method::Rlp)]
        method: Method,
    },
}

#[derive(Args, Debug)]
struct SatArgs {
    #[arg(long)]
    formula: PathBuf,
    #[arg(long, default_value_t = 6)]
    max_fingerprints: usize,
    #[arg(long, default_value_t = 3)]
    block_len: usize,
    #[arg(long)]
    parikh_cap: Option<u64>,
    #[arg(long, default_value_t = 5)]
    max_size: usize,
    /// Use exhaustive model search instead of the structured procedure.
    #[arg(long)]
    oracle: bool,
    /// Seconds before the exhaustive search gives up.
    #[arg(long, default_value_t = 300)]
    time_cap: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum RlpCommand {
    /// Search for a witness.
    Solve {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, default_value_t = crate::constraints::RLP_THRESHOLD)]
        theta: usize,
        #[arg(long)]
        parikh_cap: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a witness file against an instance.
    Verify {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        witness: PathBuf,
    },
}

#[derive(Subcommand, Debug)]
enum PermCommand {
    /// Least permutation avoiding a constraint's forbidden cells.
    Construct {
        #[arg(long)]
        constraint: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List maximal blocks of a model.
    Blocks {
        #[arg(long)]
        model: PathBuf,
    },
    /// List fingerprints and valuation counts of a model.
    Fingerprints {
        #[arg(long)]
        model: PathBuf,
    },
}

#[derive(Subcommand, Debug)]
enum NfaCommand {
    /// Is a vector in the Parikh image?
    Parikh {
        #[arg(long)]
        nfa: PathBuf,
        /// e.g. `a=2,b=1`
        #[arg(long)]
        vector: String,
    },
    /// Do two automata share a Parikh vector?
    Intersect {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        #[arg(long)]
        cap: Option<u64>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Method {
    Rlp,
    Brute,
}

/// Run with `args` (without the program name) and return the exit code.
pub fn run(args: &[String], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(std::iter::once("permlogic".to_string()).chain(args.iter().cloned())) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(Error::Timeout) => {
            let _ = writeln!(err, "time budget exceeded");
            3
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn in_file<T>(path: &Path, parse: impl Fn(&str) -> Result<T>) -> Result<T> {
    parse(&read(path)?).map_err(|e| match e {
        Error::Parse { line, col, msg } => Error::Parse { line, col, msg: format!("{}: {msg}", path.display()) },
        other => other,
    })
}

fn closed_formula(path: &Path) -> Result<Formula> {
    let f = in_file(path, parse_formula)?;
    if !f.is_closed() {
        return Err(Error::NotClosed(f.to_string()));
    }
    Ok(f)
}

fn verdict(out: &mut dyn Write, positive: bool, yes: &str, no: &str) -> Result<i32> {
    writeln!(out, "{}", if positive { yes } else { no }).map_err(|e| Error::Io(e.to_string()))?;
    Ok(if positive { 0 } else { 1 })
}

fn line(out: &mut dyn Write, text: impl std::fmt::Display) -> Result<()> {
    writeln!(out, "{text}").map_err(|e| Error::Io(e.to_string()))
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> Result<i32> {
    match cmd {
        Command::Check { model, formula } => {
            let m = in_file(&model, parse_pm)?;
            let f = closed_formula(&formula)?;
            verdict(out, eval_formula(&m, &f, &Assignment::default())?, "OK", "FAIL")
        }
        Command::Sat(a) => sat(a, out),
        Command::Snf { formula } => {
            let f = closed_formula(&formula)?;
            let snf = to_snf(&f)?;
            line(out, "OK")?;
            write!(out, "{snf}").map_err(|e| Error::Io(e.to_string()))?;
            line(out, format!("formula: {}", snf.to_formula()))?;
            Ok(0)
        }
        Command::Rlp(RlpCommand::Solve { instance, theta, parikh_cap, out: path }) => {
            let inst = in_file(&instance, parse_rlp)?;
            let opts = SolveOptions { theta, parikh_cap, ..SolveOptions::default() };
            let cap = parikh_cap.unwrap_or_else(|| default_parikh_cap(&inst.nfa1, &inst.nfa2));
            match solve_rlp(&inst, &opts)? {
                RlpOutcome::Witness(lp) => {
                    line(out, "YES")?;
                    let m = labeled_to_valued(&named(&lp, &inst.alphabet));
                    if let Some(p) = path {
                        let header = vec![format!("rlp witness theta={theta} parikh-cap={cap}")];
                        write_file(&p, &write_pm(&m, &header))?;
                    } else {
                        write!(out, "{}", write_pm(&m, &[])).map_err(|e| Error::Io(e.to_string()))?;
                    }
                    Ok(0)
                }
                RlpOutcome::NoWitness { theta, parikh_cap } => {
                    line(out, "NO")?;
                    line(out, format!("# theta={theta} parikh-cap={parikh_cap}"))?;
                    Ok(1)
                }
            }
        }
        Command::Rlp(RlpCommand::Verify { instance, witness }) => {
            let inst = in_file(&instance, parse_rlp)?;
            let m = in_file(&witness, parse_pm)?;
            let lp = unnamed(&valued_to_labeled(&m)?, &inst.alphabet)?;
            verdict(out, verify_witness(&lp, &inst)?, "OK", "FAIL")
        }
        Command::Perm(PermCommand::Construct { constraint, out: path }) => {
            let z = in_file(&constraint, parse_con)?;
            match construct_permutation(&z) {
                Some(p) => {
                    line(out, "YES")?;
                    for (r, c) in &p.elements {
                        line(out, format!("{r} {c}"))?;
                    }
                    if let Some(path) = path {
                        let cells: Vec<_> = p.elements.iter().map(|e| (*e, Valuation::empty())).collect();
                        let m = ValuedPermutation::standardize(&cells)?;
                        let header = vec![format!("constructed for k={} on {} rows", z.k, z.domain.n())];
                        write_file(&path, &write_pm(&m, &header))?;
                    }
                    Ok(0)
                }
                None => verdict(out, false, "YES", "NO"),
            }
        }
        Command::Perm(PermCommand::Blocks { model }) => {
            let m = in_file(&model, parse_pm)?;
            line(out, "OK")?;
            for (b, _) in fingerprints(&m) {
                line(out, format!("{} rows {}..{} cols {}..{}", b.btype, b.i, b.i + b.k, b.j, b.j + b.k))?;
            }
            Ok(0)
        }
        Command::Perm(PermCommand::Fingerprints { model }) => {
            let m = in_file(&model, parse_pm)?;
            let s = summary_of(&m);
            line(out, "OK")?;
            for f in &s.fingerprints {
                line(out, f)?;
            }
            for v in &s.valuations {
                let c = s.capped_count(v);
                let shown = if c == crate::perm::COUNT_CAP { format!(">={c}") } else { c.to_string() };
                line(out, format!("count {v} {shown}"))?;
            }
            Ok(0)
        }
        Command::Nfa(NfaCommand::Parikh { nfa, vector }) => {
            let a = in_file(&nfa, parse_nfa)?;
            let v = ParikhVector::parse(&vector, &a.alphabet)?;
            match word_with_parikh(&a, &v)? {
                Some(w) => {
                    line(out, "YES")?;
                    line(out, a.decode(&w).join(" "))?;
                    Ok(0)
                }
                None => verdict(out, false, "YES", "NO"),
            }
        }
        Command::Nfa(NfaCommand::Intersect { a, b, cap }) => {
            let (a, b) = (in_file(&a, parse_nfa)?, in_file(&b, parse_nfa)?);
            let cap = cap.unwrap_or_else(|| default_parikh_cap(&a, &b));
            match common_image(&a, &b, cap, &[])? {
                Some(img) => {
                    line(out, "YES")?;
                    line(out, img.vector.render(&a.alphabet))?;
                    Ok(0)
                }
                None => {
                    line(out, "NO")?;
                    line(out, format!("# cap={cap}"))?;
                    Ok(1)
                }
            }
        }
        Command::Shuffle { l1, l2, max_n, method } => {
            let (a, b): (Nfa, Nfa) = (in_file(&l1, parse_nfa)?, in_file(&l2, parse_nfa)?);
            let m = match method {
                Method::Rlp => ShuffleMethod::Rlp,
                Method::Brute => ShuffleMethod::Brute,
            };
            match shuffle_check(&a, &b, max_n, m, &SolveOptions::default())? {
                Some(w) => {
                    line(out, "YES")?;
                    line(out, format!("word {}", a.decode(&w.word).join(" ")))?;
                    line(out, format!("p {}", w.p.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")))?;
                    Ok(0)
                }
                None => {
                    line(out, "NO")?;
                    line(out, format!("# max-n={max_n}"))?;
                    Ok(1)
                }
            }
        }
    }
}

fn sat(a: SatArgs, out: &mut dyn Write) -> Result<i32> {
    let f = closed_formula(&a.formula)?;
    let bounds = SatBounds {
        max_fingerprints: a.max_fingerprints,
        max_block_len: a.block_len,
        parikh_cap: a.parikh_cap,
        max_size: a.max_size,
        ..SatBounds::default()
    };
    let outcome = if a.oracle {
        decide_sat_oracle(&f, a.max_size, Duration::from_secs(a.time_cap))?.ok_or(Error::Timeout)?
    } else {
        decide_sat(&f, &bounds)?
    };
    let knobs = if a.oracle { format!("oracle max-size={}", a.max_size) } else { bounds.describe() };
    match outcome {
        SatOutcome::Sat { model, source } => {
            line(out, "SAT")?;
            let header = vec![format!("model for: {f}"), format!("{knobs} source={source:?}")];
            let text = write_pm(&model, &header);
            match a.out {
                Some(p) => write_file(&p, &text)?,
                None => write!(out, "{text}").map_err(|e| Error::Io(e.to_string()))?,
            }
            Ok(0)
        }
        SatOutcome::UnsatWithinBounds(b) => {
            line(out, "UNSAT-WITHIN-BOUNDS")?;
            line(out, format!("# {b}"))?;
            Ok(1)
        }
    }
}
