use std::collections::BTreeMap;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use serde::Serialize;
use uniflab_core::acunh_ground::decide_ground_disunif_acunh;
use uniflab_core::asym::{asym_unify_traced, ground_free};
use uniflab_core::automata::{ground_asym_unify_acunh, AcunhConfig};
use uniflab_core::decision::Decision;
use uniflab_core::problem::{Problem, Relation};
use uniflab_core::reductions::{decide_asym_r4, decide_disunif_r1};
use uniflab_core::rewrite::verify_solution;
use uniflab_core::subst::Substitution;
use uniflab_core::theory::TheoryTag;
use uniflab_core::xor::{decide_disunif_acun, gaussian_eliminate, ground_asym_unify_acun, to_xor_system};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Backend {
    AsymSyntactic,
    XorGaussian,
    XorGroundSearch,
    AcunhGround,
    AcunhAutomata,
    R1GroundSearch,
    R4GroundSearch,
}

impl Backend {
    pub fn name(self) -> &'static str {
        match self {
            Backend::AsymSyntactic => "asym-syntactic",
            Backend::XorGaussian => "xor-linear/gaussian",
            Backend::XorGroundSearch => "xor-linear/ground-search",
            Backend::AcunhGround => "acunh-ground",
            Backend::AcunhAutomata => "acunh-automata",
            Backend::R1GroundSearch => "reductions/r1-ground-search",
            Backend::R4GroundSearch => "reductions/r4-ground-search",
        }
    }

    /// Backend for the theory and relations of `p`.
    pub fn select(p: &Problem) -> Result<Backend> {
        let asym = p.has(Relation::AsymEq);
        let diseq = p.has(Relation::Diseq);
        let tag = p.theory.tag;
        Ok(match tag {
            TheoryTag::R1 | TheoryTag::R5 if asym && diseq => {
                bail!("theory {tag}: asymmetric equations and disequations cannot be mixed")
            }
            TheoryTag::R1 if diseq => Backend::R1GroundSearch,
            TheoryTag::R1 | TheoryTag::R5 => Backend::AsymSyntactic,
            TheoryTag::R4 => Backend::R4GroundSearch,
            TheoryTag::Acun | TheoryTag::Acunh if asym && diseq => {
                bail!("theory {tag}: asymmetric equations and disequations cannot be mixed")
            }
            TheoryTag::Acun if asym => Backend::XorGroundSearch,
            TheoryTag::Acun => Backend::XorGaussian,
            TheoryTag::Acunh if asym => Backend::AcunhAutomata,
            TheoryTag::Acunh => Backend::AcunhGround,
            TheoryTag::Custom => bail!("no decision procedure for custom theories"),
        })
    }
}

#[derive(Debug, Clone)]
pub struct SolveOptions {
    pub depth: usize,
    pub max_guesses: usize,
    pub trace: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub solvable: bool,
    pub unifier: Option<BTreeMap<String, String>>,
    pub backend: &'static str,
    pub elapsed_ms: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fail_rule: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub bounded: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace: Option<Vec<String>>,
}

fn run_backend(p: &Problem, backend: Backend, opts: &SolveOptions) -> Result<(Decision, Vec<String>)> {
    let mut trace = Vec::new();
    let decision = match backend {
        Backend::AsymSyntactic => {
            let run = asym_unify_traced(p)?;
            trace = run.trace;
            run.decision
        }
        Backend::XorGaussian => {
            if opts.trace {
                let reduced = gaussian_eliminate(&to_xor_system(p)?);
                trace = reduced.to_string().lines().map(String::from).collect();
            }
            decide_disunif_acun(p)?
        }
        Backend::XorGroundSearch => ground_asym_unify_acun(p)?,
        Backend::AcunhGround => decide_ground_disunif_acunh(p)?,
        Backend::AcunhAutomata => {
            let config = AcunhConfig {
                max_guesses: opts.max_guesses,
            };
            let run = ground_asym_unify_acunh(p, &config)?;
            trace = run.standard.shapes.iter().map(|s| s.to_string()).collect();
            trace.push(format!("guesses tried: {}", run.guesses));
            run.decision
        }
        Backend::R1GroundSearch => decide_disunif_r1(p, opts.depth)?,
        Backend::R4GroundSearch => decide_asym_r4(p, opts.depth)?,
    };
    Ok((decision, trace))
}

/// The substitution checked before printing. The syntactic procedure
/// returns most general unifiers, whose free variables are grounded first.
fn checked_instance(p: &Problem, backend: Backend, sigma: &Substitution) -> Substitution {
    match backend {
        Backend::AsymSyntactic => ground_free(sigma, &p.variables, p.theory.tag),
        _ => sigma.clone(),
    }
}

pub fn solve(p: &Problem, opts: &SolveOptions) -> Result<Report> {
    let backend = Backend::select(p)?;
    let start = Instant::now();
    let (decision, trace) = run_backend(p, backend, opts).with_context(|| format!("backend {}", backend.name()))?;
    let elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
    let mut report = Report {
        solvable: decision.is_solvable(),
        unifier: None,
        backend: backend.name(),
        elapsed_ms,
        fail_rule: None,
        reason: None,
        bounded: false,
        trace: opts.trace.then_some(trace),
    };
    match &decision {
        Decision::Solvable(sigma) => {
            if !verify_solution(p, &checked_instance(p, backend, sigma)) {
                bail!("backend {} returned {sigma}, which does not verify", backend.name());
            }
            report.unifier = Some(
                p.variables
                    .iter()
                    .filter_map(|v| sigma.get(v).map(|t| (v.to_string(), t.to_string())))
                    .collect(),
            );
        }
        Decision::Unsolvable(r) => {
            report.fail_rule = r.rule.clone();
            report.reason = Some(r.reason.clone());
            report.bounded = r.bounded;
        }
    }
    Ok(report)
}

pub fn render_text(r: &Report) -> String {
    let mut out = format!(
        "{} (backend {}, {:.3} ms)\n",
        if r.solvable { "solvable" } else { "unsolvable" },
        r.backend,
        r.elapsed_ms
    );
    if let Some(u) = &r.unifier {
        for (v, t) in u {
            out.push_str(&format!("  {v} ↦ {t}\n"));
        }
    }
    if let Some(rule) = &r.fail_rule {
        out.push_str(&format!("fail rule: {rule}\n"));
    }
    if let Some(reason) = &r.reason {
        out.push_str(&format!("reason: {reason}{}\n", if r.bounded { " (bounded)" } else { "" }));
    }
    if let Some(trace) = &r.trace {
        out.push_str("trace:\n");
        for line in trace {
            out.push_str(&format!("  {line}\n"));
        }
    }
    out
}
