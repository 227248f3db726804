use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::{
    infer_step, metric, remove_asymmetry, standardize, AsymTheory, Clause, FreshVars, Rhs, SolveState,
    StandardEquation, StepResult,
};
use crate::decision::{Decision, Refutation};
use crate::error::{Error, Result};
use crate::problem::Problem;
use crate::rewrite::{check_solution, normalize};
use crate::subst::Substitution;
use crate::term::{Sym, Term};
use crate::theory::TheoryTag;

/// Witness that the clausal constraints admit no assignment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Unsat {
    pub var: Sym,
    pub reason: String,
}

impl fmt::Display for Unsat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.var, self.reason)
    }
}

/// Unit resolution over `Γ` extended with the units implied by the dag.
/// Returns the constant chosen for every variable that is forced or that
/// carries a positive pair.
pub fn solve_constraints(
    dag: &[StandardEquation],
    gamma: &BTreeSet<Clause>,
    th: AsymTheory,
) -> std::result::Result<BTreeMap<Sym, Sym>, Unsat> {
    let clash = th.clash_constants();
    let mut negated: BTreeMap<&Sym, BTreeSet<&str>> = BTreeMap::new();
    let mut forced: BTreeMap<&Sym, &Sym> = BTreeMap::new();
    for e in dag {
        match &e.rhs {
            Rhs::Unary(..) | Rhs::Wide(..) => {
                negated.entry(&e.lhs).or_default().extend(clash);
            }
            Rhs::Const(d) => {
                if let Some(prev) = forced.insert(&e.lhs, d) {
                    if prev != d {
                        return Err(Unsat {
                            var: e.lhs.clone(),
                            reason: format!("forced to both {prev} and {d}"),
                        });
                    }
                }
                negated.entry(&e.lhs).or_default().extend(clash.iter().filter(|c| **c != &**d));
            }
            Rhs::Var(_) => {}
        }
    }
    let mut pairs: Vec<(&Sym, &Sym, &Sym)> = Vec::new();
    for c in gamma {
        match c {
            Clause::NegUnit(y, d) => {
                negated.entry(y).or_default().insert(d);
            }
            Clause::PosPair(y, d1, d2) => pairs.push((y, d1, d2)),
        }
    }
    let mut out = BTreeMap::new();
    for (y, d) in &forced {
        if negated.get(y).is_some_and(|n| n.contains(&***d)) {
            return Err(Unsat {
                var: (*y).clone(),
                reason: format!("{y} = {d} is both forced and refuted"),
            });
        }
        out.insert((*y).clone(), (*d).clone());
    }
    for (y, d1, d2) in pairs {
        let refuted = |d: &Sym| negated.get(y).is_some_and(|n| n.contains(&**d));
        let choice = match forced.get(y) {
            Some(d) if *d == d1 || *d == d2 => (*d).clone(),
            Some(d) => {
                return Err(Unsat {
                    var: y.clone(),
                    reason: format!("{y} = {d} contradicts ({y} = {d1}) ∨ ({y} = {d2})"),
                })
            }
            None if !refuted(d1) => d1.clone(),
            None if !refuted(d2) => d2.clone(),
            None => {
                return Err(Unsat {
                    var: y.clone(),
                    reason: format!("both disjuncts of ({y} = {d1}) ∨ ({y} = {d2}) are refuted"),
                })
            }
        };
        out.insert(y.clone(), choice);
    }
    Ok(out)
}

struct Extractor<'a> {
    defs: BTreeMap<&'a Sym, &'a Rhs>,
    assignment: &'a BTreeMap<Sym, Sym>,
    memo: BTreeMap<Sym, Term>,
}

impl Extractor<'_> {
    fn resolve(&mut self, x: &Sym) -> Term {
        if let Some(t) = self.memo.get(x) {
            return t.clone();
        }
        let t = if let Some(d) = self.assignment.get(x) {
            Term::Const(d.clone())
        } else if let Some(rhs) = self.defs.get(x).copied() {
            match rhs {
                Rhs::Var(y) => self.resolve(y),
                Rhs::Const(d) => Term::Const(d.clone()),
                Rhs::Unary(f, y) => Term::App(f.clone(), vec![self.resolve(y)]),
                Rhs::Wide(f, ys) => Term::App(f.clone(), ys.iter().map(|y| self.resolve(y)).collect()),
            }
        } else {
            Term::Var(x.clone())
        };
        self.memo.insert(x.clone(), t.clone());
        t
    }
}

/// Back-substitution through a dag-solved form, restricted to `vars`.
/// Variables left free stay variables; a fresh variable that is the whole
/// image of some `X ∈ vars` is renamed to `X`.
pub fn extract(
    dag: &[StandardEquation],
    assignment: &BTreeMap<Sym, Sym>,
    vars: &[Sym],
    tag: TheoryTag,
) -> Result<Substitution> {
    let theory = crate::theory::TheorySpec::from_tag(tag)?;
    let mut ex = Extractor {
        defs: dag.iter().map(|e| (&e.lhs, &e.rhs)).collect(),
        assignment,
        memo: BTreeMap::new(),
    };
    let mut sigma = Substitution::new();
    for x in vars {
        let t = normalize(&ex.resolve(x), &theory);
        sigma.insert(x, t);
    }
    let mut renaming = Substitution::new();
    for x in vars {
        if let Some(Term::Var(v)) = sigma.get(x) {
            if super::is_fresh(v) && !renaming.contains(v) {
                renaming.insert(v, Term::Var(x.clone()));
            }
        }
    }
    if renaming.is_empty() {
        return Ok(sigma);
    }
    let mut out = Substitution::new();
    for (x, t) in sigma.iter() {
        out.insert(x, renaming.apply(t));
    }
    Ok(out)
}

/// Grounds every variable of `vars` left free by `sigma`, and every variable
/// in its range, with `c` (R1) or the test-only constant `_e` (R5).
pub fn ground_free(sigma: &Substitution, vars: &[Sym], tag: TheoryTag) -> Substitution {
    let ground = match tag {
        TheoryTag::R5 | TheoryTag::R4 => Term::constant("_e"),
        _ => Term::constant("c"),
    };
    let mut free: BTreeSet<Sym> = vars.iter().filter(|x| !sigma.contains(x)).cloned().collect();
    for (_, t) in sigma.iter() {
        free.extend(t.vars());
    }
    let free: Vec<Sym> = free.into_iter().collect();
    let g = Substitution::new().ground_with(&free, &ground);
    let mut out = g.clone();
    for (x, t) in sigma.iter() {
        out.insert(x, g.apply(t));
    }
    out
}

/// Outcome of a run with its rule trace and the final state.
#[derive(Debug, Clone)]
pub struct AsymRun {
    pub decision: Decision,
    pub trace: Vec<String>,
    pub final_state: SolveState,
}

pub fn asym_unify_traced(p: &Problem) -> Result<AsymRun> {
    let th = AsymTheory::of(p.theory.tag)?;
    let mut fresh = FreshVars::new();
    let standard = standardize(p, &mut fresh)?;
    let mut trace = Vec::new();
    let mut state = standard;
    if state.asym_count() > 0 {
        state = remove_asymmetry(&state, th);
        trace.push("remove_asymmetry".to_string());
    }
    loop {
        match infer_step(&state, th) {
            StepResult::Progress(next, rule) => {
                if metric(&next) >= metric(&state) {
                    return Err(Error::Internal(format!("rule {rule} did not decrease the measure on {state}")));
                }
                trace.push(rule.to_string());
                state = next;
            }
            StepResult::Fail(rule) => {
                trace.push(rule.to_string());
                return Ok(AsymRun {
                    decision: Decision::Unsolvable(Refutation::rule(
                        rule.to_string(),
                        format!("failure rule {rule} applies to {state}"),
                    )),
                    trace,
                    final_state: state,
                });
            }
            StepResult::Done => break,
        }
    }
    let dag: Vec<StandardEquation> = state.equations.iter().cloned().collect();
    let assignment = match solve_constraints(&dag, &state.constraints, th) {
        Ok(a) => a,
        Err(unsat) => {
            trace.push("unsat".to_string());
            return Ok(AsymRun {
                decision: Decision::Unsolvable(Refutation::new(format!("constraints unsatisfiable: {unsat}"))),
                trace,
                final_state: state,
            });
        }
    };
    let sigma = extract(&dag, &assignment, &p.variables, p.theory.tag)?;
    let grounded = ground_free(&sigma, &p.variables, p.theory.tag);
    if let Err(v) = check_solution(p, &grounded) {
        return Err(Error::Internal(format!(
            "extracted unifier {sigma} fails item {} ({:?})",
            v.item, v.kind
        )));
    }
    Ok(AsymRun {
        decision: Decision::Solvable(sigma),
        trace,
        final_state: state,
    })
}

/// Asymmetric unification modulo R1 or R5.
pub fn asym_unify(p: &Problem) -> Result<Decision> {
    asym_unify_traced(p).map(|run| run.decision)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(text: &str) -> Decision {
        asym_unify(&Problem::parse(text).unwrap()).unwrap()
    }

    #[test]
    fn solvable_with_irreducible_h() {
        let d = run("theory r1\nasym X =v h(Y)\neq Y = c\n");
        assert_eq!(d.unifier().unwrap().to_string(), "{X ↦ h(c), Y ↦ c}");
    }

    #[test]
    fn root_conflict_against_asymmetry() {
        let d = run("theory r1\nasym X =v h(Y)\neq X = f(U,V)\n");
        assert!(!d.is_solvable());
        assert_eq!(d.fail_rule(), None);
        let d = run("theory r5\nasym X =v g(Y)\neq X = f(U,V,W)\n");
        assert!(!d.is_solvable());
    }

    #[test]
    fn symmetric_root_conflict_is_solvable() {
        let d = run("theory r1\neq X = h(Y)\neq X = f(U,V)\n");
        let s = d.unifier().unwrap();
        assert_eq!(s.get("Y"), Some(&Term::constant("a")));
        assert_eq!(s.get("X").unwrap().to_string(), "f(a,c)");
    }

    #[test]
    fn failure_rules_end_to_end() {
        assert_eq!(run("theory r1\neq X = a\neq X = b\n").fail_rule(), Some("F4"));
        assert_eq!(run("theory r1\neq X = h(Y)\neq Y = h(X)\n").fail_rule(), Some("F5"));
        assert_eq!(run("theory r1\neq X = c\neq X = f(U,V)\n").fail_rule(), Some("F1"));
    }

    #[test]
    fn constraints() {
        let y = Sym::from("Y");
        let pair = Clause::PosPair(y.clone(), "a".into(), "b".into());
        let neg = |d: &str| Clause::NegUnit(y.clone(), d.into());
        let g: BTreeSet<Clause> = [pair.clone(), neg("a"), neg("b")].into_iter().collect();
        assert!(solve_constraints(&[], &g, AsymTheory::R1).is_err());
        let g: BTreeSet<Clause> = [pair, neg("a")].into_iter().collect();
        let got = solve_constraints(&[], &g, AsymTheory::R1).unwrap();
        assert_eq!(got.get("Y").map(|d| &**d), Some("b"));
        assert!(solve_constraints(&[], &BTreeSet::new(), AsymTheory::R1).unwrap().is_empty());
    }

    #[test]
    fn free_fresh_image_is_renamed() {
        let d = run("theory r1\neq X = Y\n");
        let s = d.unifier().unwrap();
        assert!(s.len() <= 1);
    }
}
