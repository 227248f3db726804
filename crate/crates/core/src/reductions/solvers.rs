use std::collections::HashSet;

use crate::decision::{Decision, Refutation};
use crate::error::{Error, Result};
use crate::problem::{Problem, Relation};
use crate::rewrite::{check_item, is_normal_form, normalize, verify_solution};
use crate::subst::Substitution;
use crate::term::{Sym, Term};
use crate::theory::{TheorySpec, TheoryTag};

/// Ground normal forms of depth at most `depth` over the free function
/// symbols of `th` and `constants`, shallowest first.
pub fn normal_ground_terms(th: &TheorySpec, constants: &[Sym], depth: usize) -> Vec<Term> {
    let mut all: Vec<Term> = constants.iter().map(|c| Term::Const(c.clone())).collect();
    let mut seen: HashSet<Term> = all.iter().cloned().collect();
    for _ in 0..depth {
        let prev = all.clone();
        for (f, n) in th.functions() {
            let mut idx = vec![0usize; *n];
            'tuples: loop {
                let t = Term::App(f.clone(), idx.iter().map(|&i| prev[i].clone()).collect());
                if is_normal_form(&t, th) && seen.insert(t.clone()) {
                    all.push(t);
                }
                for k in (0..*n).rev() {
                    idx[k] += 1;
                    if idx[k] < prev.len() {
                        continue 'tuples;
                    }
                    idx[k] = 0;
                }
                break;
            }
        }
    }
    all
}

/// Variable that occurs once, as the whole left side of an equation or
/// asymmetric equation. Its value can be read off the other side.
fn derived_vars(p: &Problem) -> Vec<(Sym, usize)> {
    let count = |v: &Sym| {
        p.items
            .iter()
            .map(|it| it.lhs.vars().iter().chain(it.rhs.vars().iter()).filter(|w| *w == v).count())
            .sum::<usize>()
    };
    let mut out = Vec::new();
    for (i, it) in p.items.iter().enumerate() {
        if it.rel == Relation::Diseq {
            continue;
        }
        if let Term::Var(z) = &it.lhs {
            if count(z) == 1 && !out.iter().any(|(w, _)| w == z) {
                out.push((z.clone(), i));
            }
        }
    }
    out
}

/// Backtracking search for a ground solution with every free variable drawn
/// from `domain`. An item is checked as soon as its variables are bound.
pub struct GroundSearch<'a> {
    p: &'a Problem,
    domain: &'a [Term],
    order: Vec<Sym>,
    /// Items checked right after `order[k]` is bound; index `order.len()`
    /// holds the variable-free ones.
    ready: Vec<Vec<usize>>,
    derived: Vec<Option<Sym>>,
    cap: u64,
    pub nodes: u64,
}

impl<'a> GroundSearch<'a> {
    pub fn new(p: &'a Problem, domain: &'a [Term], cap: u64) -> Self {
        let derived_list = derived_vars(p);
        let mut derived = vec![None; p.items.len()];
        for (z, i) in &derived_list {
            derived[*i] = Some(z.clone());
        }
        let order: Vec<Sym> = p
            .variables
            .iter()
            .filter(|v| !derived_list.iter().any(|(z, _)| z == *v))
            .cloned()
            .collect();
        let mut ready = vec![Vec::new(); order.len() + 1];
        for (i, it) in p.items.iter().enumerate() {
            let last = it
                .lhs
                .vars()
                .iter()
                .chain(it.rhs.vars().iter())
                .filter_map(|v| order.iter().position(|w| w == v))
                .max();
            match last {
                Some(k) => ready[k].push(i),
                None => ready[order.len()].push(i),
            }
        }
        GroundSearch {
            p,
            domain,
            order,
            ready,
            derived,
            cap,
            nodes: 0,
        }
    }

    fn check(&self, items: &[usize], sigma: &mut Substitution) -> bool {
        for &i in items {
            let it = &self.p.items[i];
            if let Some(z) = &self.derived[i] {
                sigma.insert(z, normalize(&sigma.apply(&it.rhs), &self.p.theory));
            }
            if check_item(it, sigma, &self.p.theory).is_some() {
                return false;
            }
        }
        true
    }

    fn undo(&self, items: &[usize], sigma: &mut Substitution) {
        for &i in items {
            if let Some(z) = &self.derived[i] {
                sigma.remove(z);
            }
        }
    }

    fn go(&mut self, k: usize, sigma: &mut Substitution) -> Result<bool> {
        if k == self.order.len() {
            return Ok(true);
        }
        for t in self.domain {
            self.nodes += 1;
            if self.nodes > self.cap {
                return Err(Error::CapExceeded(format!("ground search passed {} nodes", self.cap)));
            }
            sigma.insert(&self.order[k], t.clone());
            let items = std::mem::take(&mut self.ready[k]);
            let ok = self.check(&items, sigma);
            let found = ok && self.go(k + 1, sigma)?;
            self.undo(&items, sigma);
            self.ready[k] = items;
            if found {
                return Ok(true);
            }
        }
        sigma.remove(&self.order[k]);
        Ok(false)
    }

    /// First solution in domain order, if any.
    pub fn run(&mut self) -> Result<Option<Substitution>> {
        let mut sigma = Substitution::new();
        let closed = self.ready[self.order.len()].clone();
        if !self.check(&closed, &mut sigma) {
            return Ok(None);
        }
        if !self.go(0, &mut sigma)? {
            return Ok(None);
        }
        // derived values were undone on the way out; rebuild them
        let mut full = sigma.clone();
        for (i, it) in self.p.items.iter().enumerate() {
            if let Some(z) = &self.derived[i] {
                full.insert(z, normalize(&sigma.apply(&it.rhs), &self.p.theory));
            }
        }
        Ok(verify_solution(self.p, &full).then_some(full))
    }
}

/// Shared driver: solvable with a verified witness, or unsolvable, complete
/// only when `complete` holds.
fn bounded(p: &Problem, depth: usize, cap: u64, complete: bool) -> Result<Decision> {
    let domain = normal_ground_terms(&p.theory, &p.constants, depth);
    let mut search = GroundSearch::new(p, &domain, cap);
    Ok(match search.run()? {
        Some(sigma) => Decision::Solvable(sigma),
        None if complete => Decision::Unsolvable(Refutation::new(format!(
            "no assignment over {} ground terms",
            domain.len()
        ))),
        None => Decision::Unsolvable(Refutation::bounded(format!(
            "no assignment over the {} ground normal forms of depth <= {depth}",
            domain.len()
        ))),
    })
}

fn var_of(t: &Term) -> Option<&Sym> {
    t.as_var()
}

/// Every variable has its own `h(x) = f(x, c)`, which confines it to `a` or
/// `b`.
pub fn is_r1_reduction_shaped(p: &Problem) -> bool {
    p.variables.iter().all(|x| {
        p.items_with(Relation::Eq).any(|it| {
            let pin = |l: &Term, r: &Term| {
                l.head() == Some("h")
                    && var_of(&l.args()[0]) == Some(x)
                    && r.head() == Some("f")
                    && var_of(&r.args()[0]) == Some(x)
                    && r.args()[1] == Term::constant("c")
            };
            pin(&it.lhs, &it.rhs) || pin(&it.rhs, &it.lhs)
        })
    })
}

pub const DEFAULT_DEPTH: usize = 1;
pub const DEFAULT_NODE_CAP: u64 = 50_000_000;

/// Disunification modulo R1 by bounded ground search. Unsolvable verdicts
/// are exact on reduction-shaped problems and marked bounded otherwise.
pub fn decide_disunif_r1(p: &Problem, depth: usize) -> Result<Decision> {
    if p.theory.tag != TheoryTag::R1 {
        return Err(Error::Unsupported(format!("expected theory r1, found {}", p.theory.tag)));
    }
    if p.has(Relation::AsymEq) {
        return Err(Error::Unsupported("asymmetric equations go to the syntactic procedure".into()));
    }
    bounded(p, depth, DEFAULT_NODE_CAP, is_r1_reduction_shaped(p))
}

/// Every variable not defined by its own asymmetric equation has
/// `f(x, x, x) = g(x)`.
pub fn is_r4_reduction_shaped(p: &Problem) -> bool {
    let derived = derived_vars(p);
    p.variables
        .iter()
        .filter(|x| !derived.iter().any(|(z, _)| z == *x))
        .all(|x| {
            p.items_with(Relation::Eq).any(|it| {
                let pin = |l: &Term, r: &Term| {
                    l.head() == Some("f")
                        && l.args().iter().all(|a| var_of(a) == Some(x))
                        && r.head() == Some("g")
                        && var_of(&r.args()[0]) == Some(x)
                };
                pin(&it.lhs, &it.rhs) || pin(&it.rhs, &it.lhs)
            })
        })
}

/// Asymmetric unification modulo R4 by bounded ground search; variables
/// defined by their own asymmetric equation take the normal form of the
/// instantiated right side.
pub fn decide_asym_r4(p: &Problem, depth: usize) -> Result<Decision> {
    if p.theory.tag != TheoryTag::R4 {
        return Err(Error::Unsupported(format!("expected theory r4, found {}", p.theory.tag)));
    }
    bounded(p, depth, DEFAULT_NODE_CAP, is_r4_reduction_shaped(p))
}

/// Ground solution over normal forms of depth at most `depth`, for any of
/// the syntactic theories.
pub fn bounded_ground_solution(p: &Problem, depth: usize, cap: u64) -> Result<Option<Substitution>> {
    let domain = normal_ground_terms(&p.theory, &p.constants, depth);
    GroundSearch::new(p, &domain, cap).run()
}
