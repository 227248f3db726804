//! `uniflab`: solve problem files, generate reductions, run oracles and the
//! cross-check suites.

mod crosscheck;
mod solve;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use uniflab_core::parse::parse_term;
use uniflab_core::problem::Problem;
use uniflab_core::reductions::{
    acun_oracle, acunh_oracle, bounded_ground_solution, brute_coloring, brute_nae, brute_sat, coloring_to_acun_asym,
    nae3sat_to_r4_asym, sat3_to_r1_disunif, CnfFormula, Graph, NaeInstance, DEFAULT_NODE_CAP,
};
use uniflab_core::rewrite::normalize;
use uniflab_core::theory::{TheorySpec, TheoryTag};

use crate::solve::{render_text, solve, SolveOptions};

#[derive(Parser, Debug)]
#[command(name = "uniflab", version, about = "Asymmetric unification and disunification workbench")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Overrides the `theory` line of the input.
    #[arg(long, global = true)]
    theory: Option<TheoryTag>,
    /// Term depth for the bounded ground searches.
    #[arg(long, global = true, default_value_t = 1)]
    depth: usize,
    #[arg(long, global = true, env = "UNIFLAB_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true)]
    json: bool,
    #[arg(long, global = true)]
    trace: bool,
    /// Cap on flag combinations tried by the ACUNh automata backend.
    #[arg(long, global = true, default_value_t = 1 << 16)]
    max_guesses: usize,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide a problem file.
    Solve {
        input: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Turn a DIMACS formula or an edge list into a problem file.
    Reduce {
        kind: Kind,
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Brute-force answer for an instance or a problem file.
    Oracle {
        kind: OracleKind,
        input: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Randomized equivalence and oracle-agreement suites.
    Crosscheck {
        /// Instances per suite.
        #[arg(long, default_value_t = 200)]
        instances: usize,
        /// Restrict to the named suites.
        #[arg(long = "suite")]
        suites: Vec<String>,
        #[arg(long)]
        no_timing: bool,
        /// Where mismatching instances are written.
        #[arg(long, default_value = "crosscheck-replays")]
        replay_dir: PathBuf,
        #[arg(long, hide = true)]
        inject_bug: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Print the normal form of a term.
    Normalize {
        term: String,
        /// Extra constants, e.g. `--consts c1,c2`.
        #[arg(long, value_delimiter = ',')]
        consts: Vec<String>,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Kind {
    #[value(name = "3sat")]
    Sat3,
    #[value(name = "3col")]
    Col3,
    #[value(name = "nae3sat")]
    Nae3Sat,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum OracleKind {
    #[value(name = "3sat")]
    Sat3,
    #[value(name = "3col")]
    Col3,
    #[value(name = "nae3sat")]
    Nae3Sat,
    /// Bounded ground search on a problem file.
    Ground,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn load_problem(path: &Path, theory: Option<TheoryTag>) -> Result<Problem> {
    let mut text = read(path)?;
    if let Some(tag) = theory {
        let body: Vec<&str> = text
            .lines()
            .map(|l| if l.trim_start().starts_with("theory") { "" } else { l })
            .collect();
        text = format!("theory {tag}\n{}", body.join("\n"));
    }
    Problem::parse(&text).with_context(|| format!("{}", path.display()))
}

/// Exit 0 solvable, 1 unsolvable.
fn verdict_code(b: bool) -> ExitCode {
    if b {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn cmd_solve(input: &Path, c: &Common) -> Result<ExitCode> {
    let p = load_problem(input, c.theory)?;
    let opts = SolveOptions {
        depth: c.depth,
        max_guesses: c.max_guesses,
        trace: c.trace,
    };
    let report = solve(&p, &opts)?;
    if c.json {
        println!("{}", serde_json::to_string(&report)?);
    } else {
        print!("{}", render_text(&report));
    }
    Ok(verdict_code(report.solvable))
}

fn reduce_text(kind: Kind, text: &str) -> Result<Problem> {
    Ok(match kind {
        Kind::Sat3 => sat3_to_r1_disunif(&CnfFormula::parse_dimacs(text)?),
        Kind::Col3 => coloring_to_acun_asym(&Graph::parse_edges(text)?),
        Kind::Nae3Sat => nae3sat_to_r4_asym(&NaeInstance::parse_dimacs(text)?)?,
    })
}

fn cmd_reduce(kind: Kind, input: &Path, output: Option<&Path>, c: &Common) -> Result<ExitCode> {
    let p = reduce_text(kind, &read(input)?).with_context(|| format!("{}", input.display()))?;
    let text = p.to_string();
    match output {
        Some(path) => fs::write(path, &text).with_context(|| format!("cannot write {}", path.display()))?,
        None => print!("{text}"),
    }
    let stats = json!({
        "theory": p.theory.tag.as_str(),
        "variables": p.variables.len(),
        "items": p.items.len(),
        "size": p.size(),
    });
    if c.json && output.is_some() {
        println!("{stats}");
    } else {
        eprintln!(
            "{} variables, {} items, size {}",
            p.variables.len(),
            p.items.len(),
            p.size()
        );
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_oracle(kind: OracleKind, input: &Path, c: &Common) -> Result<ExitCode> {
    let (answer, witness) = match kind {
        OracleKind::Sat3 => (brute_sat(&CnfFormula::parse_dimacs(&read(input)?)?)?, None),
        OracleKind::Nae3Sat => (brute_nae(&NaeInstance::parse_dimacs(&read(input)?)?)?, None),
        OracleKind::Col3 => (brute_coloring(&Graph::parse_edges(&read(input)?)?)?, None),
        OracleKind::Ground => {
            let p = load_problem(input, c.theory)?;
            let found = match p.theory.tag {
                TheoryTag::Acun => acun_oracle(&p, p.variables.len(), 1 << 24)?,
                TheoryTag::Acunh => acunh_oracle(&p, c.depth, 1 << 24)?,
                TheoryTag::Custom => bail!("no ground oracle for custom theories"),
                _ => bounded_ground_solution(&p, c.depth, DEFAULT_NODE_CAP)?,
            };
            (found.is_some(), found.map(|s| s.to_string()))
        }
    };
    if c.json {
        println!("{}", json!({ "answer": answer, "witness": witness }));
    } else {
        println!("{}", if answer { "yes" } else { "no" });
        if let Some(w) = witness {
            println!("{w}");
        }
    }
    Ok(verdict_code(answer))
}

fn cmd_normalize(term: &str, consts: &[String], c: &Common) -> Result<ExitCode> {
    let tag = c.theory.context("normalize needs --theory")?;
    let th = TheorySpec::from_tag(tag)?;
    let t = parse_term(term, &th.signature(consts)?)?;
    let nf = normalize(&t, &th);
    if c.json {
        println!("{}", json!({ "input": t.to_string(), "normal_form": nf.to_string() }));
    } else {
        println!("{nf}");
    }
    Ok(ExitCode::SUCCESS)
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Solve { input, common } => cmd_solve(&input, &common),
        Command::Reduce {
            kind,
            input,
            output,
            common,
        } => cmd_reduce(kind, &input, output.as_deref(), &common),
        Command::Oracle { kind, input, common } => cmd_oracle(kind, &input, &common),
        Command::Crosscheck {
            instances,
            suites,
            no_timing,
            replay_dir,
            inject_bug,
            common,
        } => crosscheck::cmd_crosscheck(&crosscheck::Options {
            seed: common.seed,
            instances,
            suites,
            timing: !no_timing,
            replay_dir,
            inject_bug,
            json: common.json,
        }),
        Command::Normalize { term, consts, common } => cmd_normalize(&term, &consts, &common),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            let _ = std::io::stdout().flush();
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
