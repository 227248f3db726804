use std::collections::BTreeMap;

use super::dfa::{check_width, explore_product, intersect_and_check, BitSymbol, EqAutomaton, Machine, Witness};
use super::standard::{standardize_acunh, Shape, StandardAcunh};
use crate::acunh_ground::poly_term;
use crate::algebra::Gf2Poly;
use crate::decision::{Decision, Refutation};
use crate::error::{Error, Result};
use crate::problem::Problem;
use crate::rewrite::{normalize, verify_solution};
use crate::subst::Substitution;
use crate::term::{Sym, Term};
use crate::theory::TheorySpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AcunhConfig {
    /// Upper bound on combinations of per-constant flag columns.
    pub max_guesses: usize,
}

impl Default for AcunhConfig {
    fn default() -> Self {
        AcunhConfig { max_guesses: 1 << 16 }
    }
}

/// Result of the automata procedure, with one witness per constant.
#[derive(Debug, Clone)]
pub struct AcunhRun {
    pub decision: Decision,
    pub standard: StandardAcunh,
    pub witnesses: Vec<Witness>,
    pub guesses: usize,
}

/// Which components a track is nonzero in, as chosen for one solution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentGuess {
    pub constant: Sym,
    pub nonzero: Vec<Sym>,
}

/// Machine for one shape in the component of constant `comp`. With `strict`
/// the asymmetric shapes carry their full side conditions.
pub fn build_machine(std: &StandardAcunh, shape: &Shape, comp: &str, strict: bool) -> Machine {
    let t = |v: &Sym| std.track(v);
    match shape {
        Shape::Sum { p, q, r } => Machine::Sum {
            p: t(p),
            q: t(q),
            r: t(r),
        },
        Shape::AsymSum { p, q, r } => Machine::DisjointSum {
            p: t(p),
            q: t(q),
            r: t(r),
            nonempty: strict,
        },
        Shape::Hom { x, y } => Machine::Hom { x: t(x), y: t(y) },
        Shape::AsymHom { x, y } => Machine::AsymHom {
            x: t(x),
            y: t(y),
            optional: !strict,
        },
        Shape::Const { x, c } if &**c == comp => Machine::Const { x: t(x) },
        Shape::Const { x, .. } | Shape::Zero { x } => Machine::Zero { x: t(x) },
        Shape::Eq { x, y } => Machine::Eq { x: t(x), y: t(y) },
    }
}

pub fn build_automaton(std: &StandardAcunh, shape: &Shape, comp: &str, strict: bool) -> Result<EqAutomaton> {
    EqAutomaton::build(build_machine(std, shape, comp, strict), std.tracks.len())
}

/// Reads track `i` of `witness` as `Σ h^j(constant)` over the positions `j`
/// where bit `i` is set.
pub fn decode(witness: &[BitSymbol], tracks: &[Sym], constant: &str) -> Substitution {
    let mut sigma = Substitution::new();
    for (i, v) in tracks.iter().enumerate() {
        let exps: Vec<usize> = (0..witness.len()).filter(|&j| witness[j] >> i & 1 == 1).collect();
        sigma.insert(v, poly_term(&Gf2Poly::from_exponents(&exps), constant));
    }
    sigma
}

fn assemble(p: &Problem, std: &StandardAcunh, witnesses: &[Witness]) -> Substitution {
    let acunh = TheorySpec::acunh();
    let parts: Vec<Substitution> = witnesses
        .iter()
        .zip(&p.constants)
        .map(|(w, c)| decode(w, &std.tracks, c))
        .collect();
    let mut sigma = Substitution::new();
    for x in &p.variables {
        let sum = Term::sum(parts.iter().map(|s| s.get(x).cloned().unwrap_or_else(Term::zero)).collect());
        sigma.insert(x, normalize(&sum, &acunh));
    }
    sigma
}

/// Global side conditions that the per-component machines leave open.
struct Global {
    /// Tracks that must be nonzero in at least one component.
    some: Vec<usize>,
    /// Tracks that must be nonzero in exactly one component.
    single: Vec<usize>,
}

impl Global {
    fn of(std: &StandardAcunh) -> Self {
        let mut g = Global {
            some: Vec::new(),
            single: Vec::new(),
        };
        for s in &std.shapes {
            match s {
                Shape::AsymSum { q, r, .. } => {
                    g.some.push(std.track(q));
                    g.some.push(std.track(r));
                }
                Shape::AsymHom { y, .. } => g.single.push(std.track(y)),
                _ => {}
            }
        }
        g
    }

    fn relevant(&self) -> u64 {
        self.some.iter().chain(&self.single).fold(0, |m, &t| m | 1 << t)
    }
}

struct Search<'a> {
    columns: &'a [Vec<(u64, Witness)>],
    global: &'a Global,
    cap: usize,
    guesses: usize,
    chosen: Vec<usize>,
}

impl Search<'_> {
    fn run(&mut self, k: usize, seen: u64, twice: u64) -> Result<bool> {
        if k == self.columns.len() {
            self.guesses += 1;
            if self.guesses > self.cap {
                return Err(Error::CapExceeded(format!("more than {} column combinations", self.cap)));
            }
            let ok = self.global.some.iter().all(|&t| seen >> t & 1 == 1)
                && self.global.single.iter().all(|&t| seen >> t & 1 == 1 && twice >> t & 1 == 0);
            return Ok(ok);
        }
        for (i, (mask, _)) in self.columns[k].iter().enumerate() {
            let twice = twice | (seen & mask);
            if self.global.single.iter().any(|&t| twice >> t & 1 == 1) {
                continue;
            }
            self.chosen.push(i);
            if self.run(k + 1, seen | mask, twice)? {
                return Ok(true);
            }
            self.chosen.pop();
        }
        Ok(false)
    }
}

/// Decides ground asymmetric unification modulo ACUNh. A ground substitution
/// maps each variable to a sum of `h^j(c)`; per constant this is a bit
/// string, and every standard shape becomes a regular language over the
/// tracks of all variables.
pub fn ground_asym_unify_acunh(p: &Problem, config: &AcunhConfig) -> Result<AcunhRun> {
    let std = standardize_acunh(p)?;
    let width = std.tracks.len();
    check_width(width)?;
    let finish = |decision: Decision, witnesses: Vec<Witness>, guesses: usize| AcunhRun {
        decision,
        standard: std.clone(),
        witnesses,
        guesses,
    };
    if p.constants.is_empty() {
        let sigma = Substitution::from_pairs(p.variables.iter().map(|v| (v.clone(), Term::zero())));
        let d = if verify_solution(p, &sigma) {
            Decision::Solvable(sigma)
        } else {
            Decision::Unsolvable(Refutation::new("without constants every ground term is 0"))
        };
        return Ok(finish(d, Vec::new(), 0));
    }
    let strict = p.constants.len() == 1;
    let mut per_comp = Vec::with_capacity(p.constants.len());
    for c in &p.constants {
        let automata = std
            .shapes
            .iter()
            .map(|s| build_automaton(&std, s, c, strict))
            .collect::<Result<Vec<_>>>()?;
        per_comp.push(automata);
    }
    let witnesses = if strict {
        match intersect_and_check(&per_comp[0]) {
            Some(w) => vec![w],
            None => {
                return Ok(finish(
                    Decision::Unsolvable(Refutation::new("the product automaton accepts no word")),
                    Vec::new(),
                    1,
                ))
            }
        }
    } else {
        let global = Global::of(&std);
        let columns: Vec<Vec<(u64, Witness)>> = per_comp
            .iter()
            .map(|a| explore_product(a, width, global.relevant()))
            .collect();
        let mut search = Search {
            columns: &columns,
            global: &global,
            cap: config.max_guesses,
            guesses: 0,
            chosen: Vec::new(),
        };
        if !search.run(0, 0, 0)? {
            let guesses = search.guesses;
            return Ok(finish(
                Decision::Unsolvable(Refutation::new("no choice of nonzero components is accepted")),
                Vec::new(),
                guesses,
            ));
        }
        let w: Vec<Witness> = search.chosen.iter().enumerate().map(|(k, &i)| columns[k][i].1.clone()).collect();
        let guesses = search.guesses;
        return verified(p, &std, &w).map(|d| finish(d, w, guesses));
    };
    verified(p, &std, &witnesses).map(|d| finish(d, witnesses, 1))
}

fn verified(p: &Problem, std: &StandardAcunh, witnesses: &[Witness]) -> Result<Decision> {
    let sigma = assemble(p, std, witnesses);
    if !verify_solution(p, &sigma) {
        return Err(Error::Internal(format!("decoded substitution {sigma} fails verification")));
    }
    Ok(Decision::Solvable(sigma))
}

/// The nonzero components of every variable in a solution.
pub fn component_guesses(p: &Problem, run: &AcunhRun) -> Vec<ComponentGuess> {
    let mut out = Vec::new();
    for (c, w) in p.constants.iter().zip(&run.witnesses) {
        let ones = w.iter().fold(0u64, |m, &s| m | s as u64);
        let nonzero: Vec<Sym> = run
            .standard
            .tracks
            .iter()
            .enumerate()
            .filter(|&(i, v)| ones >> i & 1 == 1 && p.variables.contains(v))
            .map(|(_, v)| v.clone())
            .collect();
        out.push(ComponentGuess {
            constant: c.clone(),
            nonzero,
        });
    }
    out
}

/// Per-variable values of a single-constant solution as bit masks.
pub fn values_by_var(std: &StandardAcunh, witness: &[BitSymbol]) -> BTreeMap<Sym, u64> {
    let vals = super::dfa::track_values(witness, std.tracks.len());
    std.tracks.iter().cloned().zip(vals).collect()
}
