//! Randomized equivalence and oracle-agreement suites, plus timing tables
//! contrasting the Gaussian backend with the coloring search.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::acunh_ground::decide_ground_disunif_acunh;
use crate::algebra::{smith_normal_form, solve_system_snf, Gf2Poly};
use crate::asym::{asym_unify, ground_free};
use crate::automata::{ground_asym_unify_acunh, AcunhConfig};
use crate::decision::Decision;
use crate::error::{Error, Result};
use crate::problem::Problem;
use crate::reductions::random::{
    random_acun_asym, random_acun_disunif, random_acun_system, random_acunh_asym, random_acunh_disunif, random_cnf,
    path_then_k4, random_graph, random_nae, random_poly, random_poly_matrix, random_syntactic_asym, wheel,
};
use crate::reductions::{
    acun_oracle, acunh_oracle, bounded_ground_solution, brute_coloring, brute_nae, brute_sat, coloring_to_acun_asym,
    decide_asym_r4, decide_disunif_r1, Graph, decode_assignment, decode_coloring, nae3sat_to_r4_asym, normal_ground_terms,
    sat3_to_r1_disunif, DEFAULT_DEPTH,
};
use crate::rewrite::verify_solution;
use crate::theory::TheorySpec;
use crate::xor::{decide_disunif_acun, decide_disunif_acun_faulty, ground_asym_unify_acun};

pub const SUITES: [&str; 9] = [
    "3sat-r1",
    "3col-acun",
    "nae-r4",
    "asym-syntactic",
    "acun-disunif",
    "acun-asym",
    "acunh-ground",
    "acunh-automata",
    "snf",
];

const ORACLE_CAP: u64 = 1 << 22;
const GROUND_NODE_CAP: u64 = 2_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrosscheckConfig {
    pub seed: u64,
    /// Instances per suite.
    pub instances: usize,
    /// Runs the ACUN disunification suite on a corrupted elimination.
    pub inject_bug: bool,
    pub timing: bool,
}

impl Default for CrosscheckConfig {
    fn default() -> Self {
        CrosscheckConfig {
            seed: 0,
            instances: 200,
            inject_bug: false,
            timing: true,
        }
    }
}

/// A failing instance, with a problem file that reproduces it.
#[derive(Debug, Clone, PartialEq)]
pub struct Mismatch {
    pub instance: usize,
    pub detail: String,
    pub replay: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub name: &'static str,
    pub instances: usize,
    pub agreed: usize,
    pub solvable: usize,
    pub mismatches: Vec<Mismatch>,
    pub elapsed_ms: f64,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TimingRow {
    pub size: usize,
    pub items: usize,
    pub solvable: bool,
    pub millis: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TimingTable {
    pub name: &'static str,
    pub backend: &'static str,
    pub rows: Vec<TimingRow>,
    /// Slope of `ln(millis)` against `ln(size)`.
    pub fitted_degree: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CrosscheckReport {
    pub seed: u64,
    pub suites: Vec<SuiteReport>,
    pub tables: Vec<TimingTable>,
}

impl CrosscheckReport {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(SuiteReport::passed)
    }
}

/// Outcome of one instance: its replay text, whether it was solvable, and
/// the disagreement if any.
struct Case {
    replay: String,
    solvable: bool,
    verdict: std::result::Result<(), String>,
}

impl Case {
    fn new(p: &Problem) -> Self {
        Case {
            replay: p.to_string(),
            solvable: false,
            verdict: Ok(()),
        }
    }

    fn fail(mut self, msg: impl Into<String>) -> Self {
        if self.verdict.is_ok() {
            self.verdict = Err(msg.into());
        }
        self
    }

    fn run(mut self, f: impl FnOnce(&mut Self) -> Result<()>) -> Self {
        if let Err(e) = f(&mut self) {
            self = self.fail(format!("error: {e}"));
        }
        self
    }
}

fn suite_rng(seed: u64, name: &str) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(SUITES.iter().position(|s| *s == name).unwrap_or(SUITES.len()) as u64);
    rng
}

fn witness_ok(p: &Problem, d: &Decision) -> bool {
    d.unifier().is_none_or(|s| verify_solution(p, s))
}

fn agree(c: &mut Case, solver: bool, oracle: bool) {
    c.solvable = solver;
    if solver != oracle {
        let msg = format!("solver says {}, oracle says {}", verdict(solver), verdict(oracle));
        c.verdict = c.verdict.clone().and(Err(msg));
    }
}

fn verdict(b: bool) -> &'static str {
    if b {
        "solvable"
    } else {
        "unsolvable"
    }
}

fn check(c: &mut Case, ok: bool, msg: &str) {
    if !ok && c.verdict.is_ok() {
        c.verdict = Err(msg.to_string());
    }
}

fn case_sat3(rng: &mut ChaCha8Rng) -> Case {
    let (n, m) = (rng.gen_range(3..=12), rng.gen_range(1..=20));
    let f = random_cnf(rng, n, m);
    let p = sat3_to_r1_disunif(&f);
    let mut c = Case::new(&p);
    c.replay = format!("# {}\n{}", f.to_dimacs().trim_end().replace('\n', "\n# "), c.replay);
    c.run(|c| {
        check(c, p.items.len() == n + m, "reduction size is not one item per variable and clause");
        let d = decide_disunif_r1(&p, DEFAULT_DEPTH)?;
        agree(c, d.is_solvable(), brute_sat(&f)?);
        check(c, witness_ok(&p, &d), "unifier does not verify");
        if let Some(s) = d.unifier() {
            let a = decode_assignment(s, n);
            check(c, a.is_some_and(|a| f.satisfied_by(&a)), "decoded assignment does not satisfy the formula");
        }
        Ok(())
    })
}

fn case_coloring(rng: &mut ChaCha8Rng) -> Case {
    let n = rng.gen_range(3..=8);
    let density = rng.gen_range(0.2..0.9);
    let g = random_graph(rng, n, density);
    let p = coloring_to_acun_asym(&g);
    let mut c = Case::new(&p);
    c.replay = format!("# {}\n{}", g.to_edges().trim_end().replace('\n', "\n# "), c.replay);
    c.run(|c| {
        check(c, p.items.len() == g.edges().len(), "reduction size is not one item per edge");
        let d = ground_asym_unify_acun(&p)?;
        agree(c, d.is_solvable(), brute_coloring(&g)?);
        check(c, witness_ok(&p, &d), "unifier does not verify");
        if let Some(s) = d.unifier() {
            let colors = decode_coloring(s, &g);
            check(c, colors.is_some_and(|k| g.is_proper(&k)), "decoded coloring is not proper");
        }
        Ok(())
    })
}

fn case_nae(rng: &mut ChaCha8Rng) -> Case {
    let (n, m) = (rng.gen_range(3..=12), rng.gen_range(1..=16));
    let f = random_nae(rng, n, m);
    let p = match nae3sat_to_r4_asym(&f) {
        Ok(p) => p,
        Err(e) => {
            return Case {
                replay: f.formula.to_dimacs(),
                solvable: false,
                verdict: Err(format!("reduction failed: {e}")),
            }
        }
    };
    let mut c = Case::new(&p);
    c.replay = format!("# {}\n{}", f.formula.to_dimacs().trim_end().replace('\n', "\n# "), c.replay);
    c.run(|c| {
        check(c, p.items.len() == n + m, "reduction size is not one item per variable and clause");
        let d = decide_asym_r4(&p, DEFAULT_DEPTH)?;
        agree(c, d.is_solvable(), brute_nae(&f)?);
        check(c, witness_ok(&p, &d), "unifier does not verify");
        if let Some(s) = d.unifier() {
            let a = decode_assignment(s, n);
            check(c, a.is_some_and(|a| f.satisfied_by(&a)), "decoded assignment is not NAE-satisfying");
        }
        Ok(())
    })
}

/// Deepest ground domain that keeps the oracle within `GROUND_NODE_CAP / 10`
/// nodes for `vars` variables.
fn oracle_depth(th: &TheorySpec, vars: usize) -> usize {
    let deep = normal_ground_terms(th, th.base_constants(), 2).len() as u64;
    if deep.saturating_pow(vars as u32) <= GROUND_NODE_CAP / 10 {
        2
    } else {
        1
    }
}

fn case_syntactic(rng: &mut ChaCha8Rng) -> Case {
    let th = if rng.gen_bool(0.5) { TheorySpec::r1() } else { TheorySpec::r5() };
    let p = random_syntactic_asym(rng, th);
    Case::new(&p).run(|c| {
        let d = asym_unify(&p)?;
        c.solvable = d.is_solvable();
        match d.unifier() {
            Some(s) => {
                let g = ground_free(s, &p.variables, p.theory.tag);
                check(c, verify_solution(&p, &g), "grounded unifier does not verify");
            }
            None => {
                let depth = oracle_depth(&p.theory, p.variables.len());
                if let Some(w) = bounded_ground_solution(&p, depth, GROUND_NODE_CAP)? {
                    agree(c, false, true);
                    c.verdict = c.verdict.clone().map_err(|e| format!("{e}; oracle witness {w}"));
                }
            }
        }
        Ok(())
    })
}

fn case_acun_disunif(rng: &mut ChaCha8Rng, faulty: bool) -> Case {
    let p = random_acun_disunif(rng);
    Case::new(&p).run(|c| {
        let d = if faulty {
            decide_disunif_acun_faulty(&p)?
        } else {
            decide_disunif_acun(&p)?
        };
        let oracle = acun_oracle(&p, p.variables.len(), ORACLE_CAP)?;
        agree(c, d.is_solvable(), oracle.is_some());
        check(c, witness_ok(&p, &d), "unifier does not verify");
        Ok(())
    })
}

fn case_acun_asym(rng: &mut ChaCha8Rng) -> Case {
    let p = random_acun_asym(rng);
    Case::new(&p).run(|c| {
        let d = ground_asym_unify_acun(&p)?;
        agree(c, d.is_solvable(), acun_oracle(&p, 0, ORACLE_CAP)?.is_some());
        check(c, witness_ok(&p, &d), "unifier does not verify");
        Ok(())
    })
}

fn case_acunh_ground(rng: &mut ChaCha8Rng) -> Case {
    let p = random_acunh_disunif(rng);
    Case::new(&p).run(|c| {
        let d = decide_ground_disunif_acunh(&p)?;
        c.solvable = d.is_solvable();
        check(c, witness_ok(&p, &d), "unifier does not verify");
        if !d.is_solvable() {
            if let Some(w) = acunh_oracle(&p, 3, ORACLE_CAP)? {
                agree(c, false, true);
                c.verdict = c.verdict.clone().map_err(|e| format!("{e}; oracle witness {w}"));
            }
        }
        Ok(())
    })
}

/// Highest h-degree, at most 3, that keeps the oracle within 2^18
/// assignments.
fn automata_oracle_degree(p: &Problem) -> usize {
    let cells = (p.variables.len() * p.constants.len()).max(1);
    (18 / cells).saturating_sub(1).min(3)
}

fn case_acunh_automata(rng: &mut ChaCha8Rng) -> Case {
    let p = random_acunh_asym(rng, 3, 2);
    Case::new(&p).run(|c| {
        let run = ground_asym_unify_acunh(&p, &AcunhConfig::default())?;
        let d = &run.decision;
        c.solvable = d.is_solvable();
        check(c, witness_ok(&p, d), "unifier does not verify");
        if !d.is_solvable() {
            if let Some(w) = acunh_oracle(&p, automata_oracle_degree(&p), ORACLE_CAP)? {
                agree(c, false, true);
                c.verdict = c.verdict.clone().map_err(|e| format!("{e}; oracle witness {w}"));
            }
        }
        Ok(())
    })
}

fn case_snf(rng: &mut ChaCha8Rng) -> Case {
    let (r, k) = (rng.gen_range(1..=4), rng.gen_range(1..=4));
    let a = random_poly_matrix(rng, r, k, 3);
    let x0: Vec<Gf2Poly> = (0..k).map(|_| random_poly(rng, 3)).collect();
    let b = a.mul_vec(&x0);
    let noise: Vec<Gf2Poly> = (0..r).map(|_| random_poly(rng, 3)).collect();
    let mut c = Case {
        replay: format!("A =\n{a}\nx0 = {x0:?}\nnoise = {noise:?}\n"),
        solvable: false,
        verdict: Ok(()),
    };
    let snf = smith_normal_form(&a);
    if let Err(e) = snf.check(&a) {
        return c.fail(e);
    }
    match solve_system_snf(&a, &b) {
        Err(e) => return c.fail(format!("A x = A x0 reported unsolvable: {e}")),
        Ok((sol, _)) => {
            c.solvable = true;
            check(&mut c, a.mul_vec(&sol.particular) == b, "A times the particular solution is not b");
            check(&mut c, sol.free_basis.len() == k - snf.rank, "free basis size is not cols - rank");
            for col in &sol.free_basis {
                check(&mut c, a.mul_vec(col).iter().all(num_traits::Zero::is_zero), "free column is not in the kernel");
            }
        }
    }
    if let Ok((sol, _)) = solve_system_snf(&a, &noise) {
        check(&mut c, a.mul_vec(&sol.particular) == noise, "particular solution of a random system is wrong");
    }
    c
}

/// Runs one named suite on `instances` seeded instances.
pub fn run_suite(name: &str, seed: u64, instances: usize, inject_bug: bool) -> Result<SuiteReport> {
    let name: &'static str = SUITES
        .iter()
        .find(|s| **s == name)
        .ok_or_else(|| Error::Unsupported(format!("unknown suite `{name}`; known: {}", SUITES.join(", "))))?;
    let mut rng = suite_rng(seed, name);
    let start = Instant::now();
    let mut report = SuiteReport {
        name,
        instances,
        agreed: 0,
        solvable: 0,
        mismatches: Vec::new(),
        elapsed_ms: 0.0,
    };
    for i in 0..instances {
        let case = match name {
            "3sat-r1" => case_sat3(&mut rng),
            "3col-acun" => case_coloring(&mut rng),
            "nae-r4" => case_nae(&mut rng),
            "asym-syntactic" => case_syntactic(&mut rng),
            "acun-disunif" => case_acun_disunif(&mut rng, inject_bug),
            "acun-asym" => case_acun_asym(&mut rng),
            "acunh-ground" => case_acunh_ground(&mut rng),
            "acunh-automata" => case_acunh_automata(&mut rng),
            _ => case_snf(&mut rng),
        };
        report.solvable += case.solvable as usize;
        match case.verdict {
            Ok(()) => report.agreed += 1,
            Err(detail) => report.mismatches.push(Mismatch {
                instance: i,
                detail,
                replay: case.replay,
            }),
        }
    }
    report.elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok(report)
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn fit_degree(points: &[(f64, f64)]) -> f64 {
    let pts: Vec<(f64, f64)> = points.iter().filter(|(x, y)| *x > 0.0 && *y > 0.0).map(|(x, y)| (x.ln(), y.ln())).collect();
    if pts.len() < 2 {
        return 0.0;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = pts.iter().map(|(x, _)| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        0.0
    } else {
        sxy / sxx
    }
}

fn best_of<T>(reps: usize, mut f: impl FnMut() -> T) -> (T, f64) {
    let mut best = f64::INFINITY;
    let mut out = None;
    for _ in 0..reps {
        let t = Instant::now();
        let v = f();
        best = best.min(t.elapsed().as_secs_f64() * 1e3);
        out = Some(v);
    }
    (out.expect("at least one repetition"), best)
}

pub const GAUSS_SIZES: [usize; 6] = [10, 20, 40, 80, 140, 200];
pub const WHEEL_SIZES: [usize; 7] = [4, 6, 8, 10, 12, 14, 16];

/// Gaussian disunification on random systems with half as many equations
/// as variables.
pub fn gauss_scaling(seed: u64, sizes: &[usize]) -> Result<TimingTable> {
    let mut rng = suite_rng(seed, "gauss-scaling");
    let mut rows = Vec::new();
    for &n in sizes {
        let p = random_acun_system(&mut rng, n, n / 2);
        let (d, millis) = best_of(3, || decide_disunif_acun(&p));
        rows.push(TimingRow {
            size: n,
            items: p.items.len(),
            solvable: d?.is_solvable(),
            millis,
        });
    }
    let fitted_degree = fit_degree(&rows.iter().map(|r| (r.size as f64, r.millis)).collect::<Vec<_>>());
    Ok(TimingTable {
        name: "gauss-scaling",
        backend: "xor-linear/gaussian",
        rows,
        fitted_degree,
    })
}

pub const PATH_K4_SIZES: [usize; 7] = [6, 8, 10, 12, 14, 16, 18];

/// Coloring reductions of a graph family that is not 3-colorable, so the
/// ground search must exhaust its space.
pub fn coloring_search(name: &'static str, sizes: &[usize], family: fn(usize) -> Graph) -> Result<TimingTable> {
    let mut rows = Vec::new();
    for &n in sizes {
        let p = coloring_to_acun_asym(&family(n));
        let (d, millis) = best_of(1, || ground_asym_unify_acun(&p));
        rows.push(TimingRow {
            size: n,
            items: p.items.len(),
            solvable: d?.is_solvable(),
            millis,
        });
    }
    let fitted_degree = fit_degree(&rows.iter().map(|r| (r.size as f64, r.millis)).collect::<Vec<_>>());
    Ok(TimingTable {
        name,
        backend: "xor-linear/ground-search",
        rows,
        fitted_degree,
    })
}

pub fn run_crosscheck(cfg: &CrosscheckConfig) -> Result<CrosscheckReport> {
    let suites = SUITES
        .iter()
        .map(|s| run_suite(s, cfg.seed, cfg.instances, cfg.inject_bug))
        .collect::<Result<Vec<_>>>()?;
    let tables = if cfg.timing {
        vec![
            gauss_scaling(cfg.seed, &GAUSS_SIZES)?,
            coloring_search("coloring-odd-wheel", &WHEEL_SIZES, wheel)?,
            coloring_search("coloring-path-k4", &PATH_K4_SIZES, path_then_k4)?,
        ]
    } else {
        Vec::new()
    };
    Ok(CrosscheckReport {
        seed: cfg.seed,
        suites,
        tables,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_suites_pass() {
        let r = run_crosscheck(&CrosscheckConfig {
            instances: 0,
            timing: false,
            ..Default::default()
        })
        .unwrap();
        assert!(r.passed());
        assert_eq!(r.suites.len(), SUITES.len());
    }

    #[test]
    fn small_run_agrees() {
        for s in SUITES {
            let r = run_suite(s, 7, 10, false).unwrap();
            assert!(r.passed(), "{s}: {:?}", r.mismatches);
        }
    }

    #[test]
    fn injected_bug_is_caught() {
        let r = run_suite("acun-disunif", 1, 200, true).unwrap();
        assert!(!r.passed());
    }

    #[test]
    fn degree_of_a_cube() {
        let pts: Vec<(f64, f64)> = (1..6).map(|x| (x as f64, (x * x * x) as f64)).collect();
        assert!((fit_degree(&pts) - 3.0).abs() < 1e-9);
    }

    #[test]
    fn unknown_suite() {
        assert!(run_suite("nope", 0, 1, false).is_err());
    }
}
