use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use serde_json::{json, Value};
use uniflab_core::crosscheck::{
    coloring_search, gauss_scaling, run_suite, SuiteReport, TimingTable, GAUSS_SIZES, PATH_K4_SIZES, SUITES,
    WHEEL_SIZES,
};
use uniflab_core::reductions::random::{path_then_k4, wheel};

pub struct Options {
    pub seed: u64,
    pub instances: usize,
    pub suites: Vec<String>,
    pub timing: bool,
    pub replay_dir: PathBuf,
    pub inject_bug: bool,
    pub json: bool,
}

fn suite_json(r: &SuiteReport) -> Value {
    json!({
        "suite": r.name,
        "instances": r.instances,
        "agreed": r.agreed,
        "solvable": r.solvable,
        "mismatches": r.mismatches.iter().map(|m| json!({
            "instance": m.instance,
            "detail": m.detail,
            "replay": m.replay,
        })).collect::<Vec<_>>(),
        "elapsed_ms": r.elapsed_ms,
    })
}

fn table_json(t: &TimingTable) -> Value {
    json!({
        "table": t.name,
        "backend": t.backend,
        "fitted_degree": t.fitted_degree,
        "rows": t.rows.iter().map(|r| json!({
            "size": r.size,
            "items": r.items,
            "solvable": r.solvable,
            "millis": r.millis,
        })).collect::<Vec<_>>(),
    })
}

fn print_tables(suites: &[SuiteReport], tables: &[TimingTable], seed: u64) {
    println!("seed {seed}");
    println!("{:<16} {:>9} {:>7} {:>9} {:>10}  status", "suite", "instances", "agreed", "solvable", "ms");
    for r in suites {
        println!(
            "{:<16} {:>9} {:>7} {:>9} {:>10.1}  {}",
            r.name,
            r.instances,
            r.agreed,
            r.solvable,
            r.elapsed_ms,
            if r.passed() { "ok" } else { "MISMATCH" }
        );
        for m in &r.mismatches {
            println!("    #{}: {}", m.instance, m.detail.trim_end().replace('\n', "; "));
        }
    }
    for t in tables {
        println!();
        println!("{} ({}), fitted degree {:.2}", t.name, t.backend, t.fitted_degree);
        println!("{:>6} {:>6} {:>10} {:>12}", "size", "items", "solvable", "ms");
        for row in &t.rows {
            println!("{:>6} {:>6} {:>10} {:>12.3}", row.size, row.items, row.solvable, row.millis);
        }
    }
}

fn write_replays(dir: &PathBuf, seed: u64, suites: &[SuiteReport]) -> Result<Vec<PathBuf>> {
    let mut written = Vec::new();
    for r in suites {
        for m in &r.mismatches {
            fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
            let path = dir.join(format!("{}-seed{seed}-{}.txt", r.name, m.instance));
            let detail = m.detail.trim_end().replace('\n', "\n# ");
            let text = format!("# suite {} seed {seed} instance {}\n# {detail}\n{}", r.name, m.instance, m.replay);
            fs::write(&path, text).with_context(|| format!("cannot write {}", path.display()))?;
            written.push(path);
        }
    }
    Ok(written)
}

pub fn cmd_crosscheck(o: &Options) -> Result<ExitCode> {
    let names: Vec<String> = if o.suites.is_empty() {
        SUITES.iter().map(|s| s.to_string()).collect()
    } else {
        o.suites.clone()
    };
    let suites = names
        .iter()
        .map(|s| run_suite(s, o.seed, o.instances, o.inject_bug))
        .collect::<uniflab_core::error::Result<Vec<_>>>()?;
    let tables = if o.timing {
        vec![
            gauss_scaling(o.seed, &GAUSS_SIZES)?,
            coloring_search("coloring-odd-wheel", &WHEEL_SIZES, wheel)?,
            coloring_search("coloring-path-k4", &PATH_K4_SIZES, path_then_k4)?,
        ]
    } else {
        Vec::new()
    };
    let replays = write_replays(&o.replay_dir, o.seed, &suites)?;
    let passed = suites.iter().all(SuiteReport::passed);
    if o.json {
        let out = json!({
            "seed": o.seed,
            "passed": passed,
            "suites": suites.iter().map(suite_json).collect::<Vec<_>>(),
            "tables": tables.iter().map(table_json).collect::<Vec<_>>(),
            "replays": replays.iter().map(|p| p.display().to_string()).collect::<Vec<_>>(),
        });
        println!("{out}");
    } else {
        print_tables(&suites, &tables, o.seed);
        for p in &replays {
            eprintln!("replay written to {}", p.display());
        }
    }
    Ok(if passed { ExitCode::SUCCESS } else { ExitCode::from(1) })
}
