//! Asymmetric unification modulo R1 and R5.
//!
//! Problems are flattened into standard form, asymmetric `h`/`g` equations are
//! traded for clausal constraints, the prioritized inference rules run to a
//! dag-solved form, and the constraints are settled by unit resolution.

mod rules;
mod solve;

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::problem::{Problem, Relation};
use crate::term::{Sym, Term, FRESH_PREFIX};
use crate::theory::TheoryTag;

pub use rules::{infer_step, metric, FailRule, Metric, RuleId, StepResult};
pub use solve::{asym_unify, asym_unify_traced, extract, ground_free, solve_constraints, AsymRun, Unsat};

/// Right-hand side shapes of a standard equation.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Rhs {
    Var(Sym),
    Unary(Sym, Sym),
    Wide(Sym, Vec<Sym>),
    Const(Sym),
}

impl Rhs {
    pub fn vars(&self) -> Vec<&Sym> {
        match self {
            Rhs::Var(y) | Rhs::Unary(_, y) => vec![y],
            Rhs::Wide(_, ys) => ys.iter().collect(),
            Rhs::Const(_) => vec![],
        }
    }

    pub fn to_term(&self) -> Term {
        match self {
            Rhs::Var(y) => Term::Var(y.clone()),
            Rhs::Unary(f, y) => Term::App(f.clone(), vec![Term::Var(y.clone())]),
            Rhs::Wide(f, ys) => Term::App(f.clone(), ys.iter().map(|y| Term::Var(y.clone())).collect()),
            Rhs::Const(d) => Term::Const(d.clone()),
        }
    }

    fn rename(&self, from: &str, to: &Sym) -> Rhs {
        let r = |y: &Sym| if &**y == from { to.clone() } else { y.clone() };
        match self {
            Rhs::Var(y) => Rhs::Var(r(y)),
            Rhs::Unary(f, y) => Rhs::Unary(f.clone(), r(y)),
            Rhs::Wide(f, ys) => Rhs::Wide(f.clone(), ys.iter().map(r).collect()),
            Rhs::Const(d) => Rhs::Const(d.clone()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StandardEquation {
    pub lhs: Sym,
    pub rhs: Rhs,
    pub asym: bool,
}

impl StandardEquation {
    pub fn new(lhs: &Sym, rhs: Rhs, asym: bool) -> Self {
        StandardEquation {
            lhs: lhs.clone(),
            rhs,
            asym,
        }
    }

    pub fn mentions(&self, v: &str) -> bool {
        &*self.lhs == v || self.rhs.vars().iter().any(|y| &***y == v)
    }

    fn rename(&self, from: &str, to: &Sym) -> Self {
        StandardEquation {
            lhs: if &*self.lhs == from { to.clone() } else { self.lhs.clone() },
            rhs: self.rhs.rename(from, to),
            asym: self.asym,
        }
    }
}

impl fmt::Display for StandardEquation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let op = if self.asym { "=v" } else { "≈" };
        write!(f, "{} {op} {}", self.lhs, self.rhs.to_term())
    }
}

/// Clausal constraints over `variable = constant` atoms.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Clause {
    /// `¬(Y = d)`
    NegUnit(Sym, Sym),
    /// `(Y = d1) ∨ (Y = d2)`
    PosPair(Sym, Sym, Sym),
}

impl Clause {
    pub fn var(&self) -> &Sym {
        match self {
            Clause::NegUnit(y, _) | Clause::PosPair(y, _, _) => y,
        }
    }

    fn rename(&self, from: &str, to: &Sym) -> Self {
        let r = |y: &Sym| if &**y == from { to.clone() } else { y.clone() };
        match self {
            Clause::NegUnit(y, d) => Clause::NegUnit(r(y), d.clone()),
            Clause::PosPair(y, d1, d2) => Clause::PosPair(r(y), d1.clone(), d2.clone()),
        }
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Clause::NegUnit(y, d) => write!(f, "¬({y} = {d})"),
            Clause::PosPair(y, d1, d2) => write!(f, "({y} = {d1}) ∨ ({y} = {d2})"),
        }
    }
}

/// The pair `EQ ∥ Γ`. Both parts are sets, so duplicates collapse and the
/// iteration order used for tie-breaking is deterministic.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SolveState {
    pub equations: BTreeSet<StandardEquation>,
    pub constraints: BTreeSet<Clause>,
}

impl SolveState {
    pub fn variables(&self) -> BTreeSet<Sym> {
        let mut vs = BTreeSet::new();
        for e in &self.equations {
            vs.insert(e.lhs.clone());
            vs.extend(e.rhs.vars().into_iter().cloned());
        }
        vs.extend(self.constraints.iter().map(|c| c.var().clone()));
        vs
    }

    pub fn asym_count(&self) -> usize {
        self.equations.iter().filter(|e| e.asym).count()
    }

    pub(crate) fn rename(&self, from: &str, to: &Sym) -> SolveState {
        SolveState {
            equations: self.equations.iter().map(|e| e.rename(from, to)).collect(),
            constraints: self.constraints.iter().map(|c| c.rename(from, to)).collect(),
        }
    }
}

impl fmt::Display for SolveState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let eqs: Vec<String> = self.equations.iter().map(|e| e.to_string()).collect();
        let cs: Vec<String> = self.constraints.iter().map(|c| c.to_string()).collect();
        write!(f, "{{{}}} ∥ {{{}}}", eqs.join(", "), cs.join(", "))
    }
}

/// Symbol table of the two supported theories.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AsymTheory {
    R1,
    R5,
}

impl AsymTheory {
    pub fn of(tag: TheoryTag) -> Result<Self> {
        match tag {
            TheoryTag::R1 => Ok(AsymTheory::R1),
            TheoryTag::R5 => Ok(AsymTheory::R5),
            other => Err(Error::Unsupported(format!(
                "asymmetric unification by inference rules supports r1 and r5, not {other}"
            ))),
        }
    }

    pub fn unary(self) -> &'static str {
        match self {
            AsymTheory::R1 => "h",
            AsymTheory::R5 => "g",
        }
    }

    pub fn wide(self) -> &'static str {
        "f"
    }

    /// Constants that occur as arguments of rule left-hand sides.
    pub fn clash_constants(self) -> [&'static str; 2] {
        ["a", "b"]
    }
}

/// Generator of reserved `_v<n>` names.
#[derive(Debug, Clone)]
pub struct FreshVars {
    next: usize,
}

impl FreshVars {
    pub fn new() -> Self {
        FreshVars { next: 1 }
    }

    pub fn fresh(&mut self) -> Sym {
        let v = Sym::from(format!("{FRESH_PREFIX}{}", self.next));
        self.next += 1;
        v
    }
}

impl Default for FreshVars {
    fn default() -> Self {
        Self::new()
    }
}

pub fn is_fresh(v: &str) -> bool {
    v.starts_with(FRESH_PREFIX)
}

struct Flattener<'a> {
    th: AsymTheory,
    fresh: &'a mut FreshVars,
    out: BTreeSet<StandardEquation>,
}

impl Flattener<'_> {
    fn name(&mut self, t: &Term, asym: bool) -> Result<Sym> {
        if let Term::Var(x) = t {
            return Ok(x.clone());
        }
        let v = self.fresh.fresh();
        self.define(&v, t, asym)?;
        Ok(v)
    }

    /// Adds `x ≈ t` for a non-variable `t`. The asymmetry flag is passed to
    /// every equation describing a subterm of `t`, since the instance of `t`
    /// is irreducible only if all of its subterm instances are.
    fn define(&mut self, x: &Sym, t: &Term, asym: bool) -> Result<()> {
        let rhs = match t {
            Term::Var(y) => Rhs::Var(y.clone()),
            Term::Const(d) => Rhs::Const(d.clone()),
            Term::App(f, args) if args.len() == 1 && &**f == self.th.unary() => {
                Rhs::Unary(f.clone(), self.name(&args[0], asym)?)
            }
            Term::App(f, args) if &**f == self.th.wide() => {
                let ys = args.iter().map(|a| self.name(a, asym)).collect::<Result<_>>()?;
                Rhs::Wide(f.clone(), ys)
            }
            other => return Err(Error::Signature(format!("`{other}` is not an R1/R5 term"))),
        };
        self.out.insert(StandardEquation::new(x, rhs, asym));
        Ok(())
    }
}

/// Flattens every item into the standard shapes with fresh `_v` variables.
pub fn standardize(p: &Problem, fresh: &mut FreshVars) -> Result<SolveState> {
    let th = AsymTheory::of(p.theory.tag)?;
    if th == AsymTheory::R1 {
        if let Some(c) = p.constants.iter().find(|c| !matches!(&***c, "a" | "b" | "c")) {
            return Err(Error::Signature(format!("constant `{c}` is outside {{a, b, c}}")));
        }
    }
    let mut fl = Flattener {
        th,
        fresh,
        out: BTreeSet::new(),
    };
    for it in &p.items {
        let asym = match it.rel {
            Relation::Eq => false,
            Relation::AsymEq => true,
            Relation::Diseq => {
                return Err(Error::Unsupported("disequations are not part of asymmetric unification".into()))
            }
        };
        match (&it.lhs, &it.rhs) {
            (Term::Var(x), r) => fl.define(x, r, asym)?,
            (l, Term::Var(y)) => fl.define(y, l, false)?,
            (l, r) => {
                let x = fl.name(l, false)?;
                fl.define(&x, r, asym)?;
            }
        }
    }
    Ok(SolveState {
        equations: fl.out,
        constraints: BTreeSet::new(),
    })
}

/// Replaces asymmetric equations by symmetric ones. `X =v h(Y)` contributes
/// `¬(Y = a)` and `¬(Y = b)`; other shapes lose the flag outright because
/// their normalized instances are always irreducible.
pub fn remove_asymmetry(state: &SolveState, th: AsymTheory) -> SolveState {
    let mut out = SolveState {
        equations: BTreeSet::new(),
        constraints: state.constraints.clone(),
    };
    for e in &state.equations {
        if e.asym {
            if let Rhs::Unary(_, y) = &e.rhs {
                for d in th.clash_constants() {
                    out.constraints.insert(Clause::NegUnit(y.clone(), Sym::from(d)));
                }
            }
        }
        out.equations.insert(StandardEquation {
            asym: false,
            ..e.clone()
        });
    }
    out
}
