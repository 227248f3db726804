//! Disunification modulo ACUN by Gaussian elimination over Z2, and a ground
//! search for ACUN asymmetric unification.

use std::fmt;

use bitvec::prelude::*;

use crate::decision::{Decision, Refutation};
use crate::error::{Error, Result};
use crate::problem::{Problem, Relation};
use crate::rewrite::{normalize, verify_solution};
use crate::subst::Substitution;
use crate::term::{Sym, Term};
use crate::theory::{TheorySpec, TheoryTag};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RowRel {
    EqZero,
    NeqZero,
}

/// `Σ vars + Σ consts ≈ 0` (or `≉ 0`) over Z2.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct XorRow {
    pub vars: BitVec,
    pub consts: BitVec,
    pub rel: RowRel,
}

impl XorRow {
    pub fn is_zero(&self) -> bool {
        self.vars.not_any() && self.consts.not_any()
    }

    pub fn leading_var(&self) -> Option<usize> {
        self.vars.first_one()
    }

    fn add(&mut self, other: &XorRow) {
        self.vars ^= other.vars.as_bitslice();
        self.consts ^= other.consts.as_bitslice();
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct XorSystem {
    pub variables: Vec<Sym>,
    pub constants: Vec<Sym>,
    pub rows: Vec<XorRow>,
}

impl XorSystem {
    pub fn new(variables: Vec<Sym>, constants: Vec<Sym>) -> Self {
        XorSystem {
            variables,
            constants,
            rows: Vec::new(),
        }
    }

    pub fn empty_row(&self, rel: RowRel) -> XorRow {
        XorRow {
            vars: bitvec![0; self.variables.len()],
            consts: bitvec![0; self.constants.len()],
            rel,
        }
    }

    pub fn row_to_string(&self, row: &XorRow) -> String {
        let mut parts: Vec<&str> = row.vars.iter_ones().map(|i| &*self.variables[i]).collect();
        parts.extend(row.consts.iter_ones().map(|i| &*self.constants[i]));
        let lhs = if parts.is_empty() { "0".to_string() } else { parts.join(" + ") };
        let op = match row.rel {
            RowRel::EqZero => "≈",
            RowRel::NeqZero => "≉",
        };
        format!("{lhs} {op} 0")
    }

    /// Equation rows whose leading variable is a pivot, with their pivot.
    pub fn pivots(&self) -> Vec<(usize, usize)> {
        self.rows
            .iter()
            .enumerate()
            .filter(|(_, r)| r.rel == RowRel::EqZero)
            .filter_map(|(i, r)| r.leading_var().map(|v| (i, v)))
            .collect()
    }
}

impl fmt::Display for XorSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, row) in self.rows.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{}", self.row_to_string(row))?;
        }
        Ok(())
    }
}

fn add_summands(t: &Term, row: &mut XorRow, sys: &XorSystem) -> Result<()> {
    match t {
        t if t.is_zero() => {}
        Term::Var(x) => {
            let i = sys.variables.iter().position(|v| v == x).expect("declared variable");
            let bit = !row.vars[i];
            row.vars.set(i, bit);
        }
        Term::Const(c) => {
            let i = sys.constants.iter().position(|k| k == c).expect("declared constant");
            let bit = !row.consts[i];
            row.consts.set(i, bit);
        }
        Term::Sum(args) => {
            for a in args {
                add_summands(a, row, sys)?;
            }
        }
        Term::App(f, _) => return Err(Error::Unsupported(format!("symbol `{f}` is outside ACUN"))),
    }
    Ok(())
}

/// One row per item, the row of `l + r` with duplicate symbols cancelled.
pub fn to_xor_system(p: &Problem) -> Result<XorSystem> {
    if p.theory.tag != TheoryTag::Acun {
        return Err(Error::Unsupported(format!("expected theory acun, found {}", p.theory.tag)));
    }
    let mut sys = XorSystem::new(p.variables.clone(), p.constants.clone());
    for it in &p.items {
        let rel = match it.rel {
            Relation::Eq => RowRel::EqZero,
            Relation::Diseq => RowRel::NeqZero,
            Relation::AsymEq => {
                return Err(Error::Unsupported("asymmetric equations need the ground search".into()))
            }
        };
        let mut row = sys.empty_row(rel);
        add_summands(&it.lhs, &mut row, &sys)?;
        add_summands(&it.rhs, &mut row, &sys)?;
        sys.rows.push(row);
    }
    Ok(sys)
}

fn eliminate(sys: &XorSystem, corrupt: bool) -> XorSystem {
    let mut rows = sys.rows.clone();
    let mut done = 0;
    for v in 0..sys.variables.len() {
        let Some(k) = (done..rows.len()).find(|&k| rows[k].rel == RowRel::EqZero && rows[k].vars[v]) else {
            continue;
        };
        rows.swap(done, k);
        let pivot = rows[done].clone();
        let mut skipped = !corrupt;
        for (i, row) in rows.iter_mut().enumerate() {
            if i != done && row.vars[v] {
                if !skipped {
                    skipped = true;
                    continue;
                }
                row.add(&pivot);
            }
        }
        done += 1;
    }
    rows.retain(|r| !(r.rel == RowRel::EqZero && r.is_zero()));
    rows.sort_by_key(|r| r.rel == RowRel::NeqZero);
    XorSystem {
        variables: sys.variables.clone(),
        constants: sys.constants.clone(),
        rows,
    }
}

/// Reduced echelon form. Pivots follow the variable order; disequations are
/// reduced but never chosen as pivots. Trivial `0 ≈ 0` rows are dropped and
/// equations come before disequations.
pub fn gaussian_eliminate(sys: &XorSystem) -> XorSystem {
    eliminate(sys, false)
}

/// Elimination that leaves one row unreduced, for harness self-checks.
#[doc(hidden)]
pub fn gaussian_eliminate_faulty(sys: &XorSystem) -> XorSystem {
    eliminate(sys, true)
}

/// Why the eliminated system has no solution.
pub fn unsolvable_row(reduced: &XorSystem) -> Option<&XorRow> {
    reduced.rows.iter().find(|r| match r.rel {
        RowRel::EqZero => r.vars.not_any() && r.consts.any(),
        RowRel::NeqZero => r.is_zero(),
    })
}

fn const_sum(sys: &XorSystem, bits: &BitSlice) -> Vec<Term> {
    bits.iter_ones().map(|i| Term::Const(sys.constants[i].clone())).collect()
}

/// Substitution assigning the pivot of each row its tail, with free
/// variables taken from `free` (unbound free variables stay symbolic).
fn back_substitute(reduced: &XorSystem, free: &Substitution) -> Substitution {
    let acun = TheorySpec::acun();
    let mut sigma = free.clone();
    for (i, v) in reduced.pivots() {
        let row = &reduced.rows[i];
        let mut summands = const_sum(reduced, &row.consts);
        for j in row.vars.iter_ones().filter(|&j| j != v) {
            summands.push(Term::Var(reduced.variables[j].clone()));
        }
        let t = normalize(&free.apply(&Term::sum(summands)), &acun);
        sigma.insert(&reduced.variables[v], t);
    }
    sigma
}

fn free_vars(reduced: &XorSystem) -> Vec<usize> {
    let pivots: Vec<usize> = reduced.pivots().into_iter().map(|(_, v)| v).collect();
    (0..reduced.variables.len()).filter(|v| !pivots.contains(v)).collect()
}

fn ground_assignment(reduced: &XorSystem, free: &[usize], values: &[BitVec]) -> Substitution {
    let mut s = Substitution::new();
    for (&v, bits) in free.iter().zip(values) {
        s.insert(&reduced.variables[v], Term::sum(const_sum(reduced, bits)));
    }
    s
}

/// Value of a disequation row under ground values of the free variables.
fn diseq_value(row: &XorRow, free: &[usize], values: &[BitVec]) -> BitVec {
    let mut acc = row.consts.clone();
    for (k, &v) in free.iter().enumerate() {
        if row.vars[v] {
            acc ^= values[k].as_bitslice();
        }
    }
    acc
}

const BRUTE_BITS: usize = 16;

fn extract(p: &Problem, reduced: &XorSystem) -> Result<Substitution> {
    let free = free_vars(reduced);
    let n = reduced.constants.len();
    let diseqs: Vec<&XorRow> = reduced.rows.iter().filter(|r| r.rel == RowRel::NeqZero).collect();
    let mut values = vec![bitvec![0; n]; free.len()];
    let candidate = |values: &[BitVec]| back_substitute(reduced, &ground_assignment(reduced, &free, values));

    let sigma = candidate(&values);
    if verify_solution(p, &sigma) {
        return Ok(sigma);
    }
    if n > 0 {
        for row in &diseqs {
            if diseq_value(row, &free, &values).not_any() {
                if let Some(k) = free.iter().position(|&v| row.vars[v]) {
                    let bit = !values[k][0];
                    values[k].set(0, bit);
                }
            }
        }
        let sigma = candidate(&values);
        if verify_solution(p, &sigma) {
            return Ok(sigma);
        }
        if free.len() * n <= BRUTE_BITS {
            let total = 1u64 << (free.len() * n);
            for code in 0..total {
                for (k, val) in values.iter_mut().enumerate() {
                    for j in 0..n {
                        val.set(j, code >> (k * n + j) & 1 == 1);
                    }
                }
                let sigma = candidate(&values);
                if verify_solution(p, &sigma) {
                    return Ok(sigma);
                }
            }
        }
    }
    let sigma = back_substitute(reduced, &Substitution::new());
    if verify_solution(p, &sigma) {
        return Ok(sigma);
    }
    Err(Error::Internal(format!("no verified extraction for\n{reduced}")))
}

/// Elimination followed by the full case split on the reduced rows: an
/// equation with only constants fails, `0 ≉ 0` fails, a disequation with
/// only constants holds iff it is nonzero, and one with a free variable is
/// always satisfiable.
pub fn decide_disunif_acun(p: &Problem) -> Result<Decision> {
    decide_with(p, gaussian_eliminate)
}

/// [`decide_disunif_acun`] on top of [`gaussian_eliminate_faulty`].
#[doc(hidden)]
pub fn decide_disunif_acun_faulty(p: &Problem) -> Result<Decision> {
    decide_with(p, gaussian_eliminate_faulty)
}

fn decide_with(p: &Problem, eliminate: fn(&XorSystem) -> XorSystem) -> Result<Decision> {
    let sys = to_xor_system(p)?;
    let reduced = eliminate(&sys);
    if let Some(row) = unsolvable_row(&reduced) {
        return Ok(Decision::Unsolvable(Refutation::new(format!(
            "row {} after elimination",
            reduced.row_to_string(row)
        ))));
    }
    extract(p, &reduced).map(Decision::Solvable)
}

/// Ground asymmetric unification modulo ACUN by search over subset sums of
/// the declared constants, with propagation of single-unknown items.
pub fn ground_asym_unify_acun(p: &Problem) -> Result<Decision> {
    ground_asym_unify_acun_capped(p, u64::MAX)
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Lin {
    vars: Vec<usize>,
    consts: u64,
}

struct AsymItem {
    lin: Lin,
    diseq: bool,
    /// Summands of the right-hand side that must stay pairwise disjoint
    /// and nonzero (asymmetric items only).
    rhs: Option<(Vec<usize>, Vec<u64>)>,
}

fn lin_of(t: &Term, vars: &[Sym], consts: &[Sym], lin: &mut Lin) -> Result<()> {
    match t {
        t if t.is_zero() => {}
        Term::Var(x) => {
            let i = vars.iter().position(|v| v == x).expect("declared variable");
            if let Some(k) = lin.vars.iter().position(|&j| j == i) {
                lin.vars.remove(k);
            } else {
                lin.vars.push(i);
            }
        }
        Term::Const(c) => {
            let i = consts.iter().position(|k| k == c).expect("declared constant");
            lin.consts ^= 1 << i;
        }
        Term::Sum(args) => {
            for a in args {
                lin_of(a, vars, consts, lin)?;
            }
        }
        Term::App(f, _) => return Err(Error::Unsupported(format!("symbol `{f}` is outside ACUN"))),
    }
    Ok(())
}

fn rhs_parts(t: &Term, vars: &[Sym], consts: &[Sym]) -> Result<(Vec<usize>, Vec<u64>)> {
    let mut vs = Vec::new();
    let mut cs = Vec::new();
    let summands = match t {
        Term::Sum(args) => args.as_slice(),
        other => std::slice::from_ref(other),
    };
    for s in summands {
        match s {
            z if z.is_zero() => cs.push(0),
            Term::Var(x) => vs.push(vars.iter().position(|v| v == x).expect("declared variable")),
            Term::Const(c) => cs.push(1 << consts.iter().position(|k| k == c).expect("declared constant")),
            other => return Err(Error::Unsupported(format!("`{other}` is outside ACUN"))),
        }
    }
    Ok((vs, cs))
}

fn rhs_ok(vs: &[usize], cs: &[u64], values: &[Option<u64>], single: bool) -> bool {
    // A lone summand is always irreducible.
    if single {
        return true;
    }
    let mut seen = 0u64;
    for &c in cs {
        if c == 0 || seen & c != 0 {
            return false;
        }
        seen |= c;
    }
    for &v in vs {
        if let Some(x) = values[v] {
            if x == 0 || seen & x != 0 {
                return false;
            }
            seen |= x;
        }
    }
    true
}

struct Search<'a> {
    items: &'a [AsymItem],
    order: Vec<usize>,
    values: Vec<Option<u64>>,
    choices: u64,
    nodes: u64,
    cap: u64,
}

impl Search<'_> {
    fn consistent(&self) -> bool {
        self.items.iter().all(|it| {
            if let Some((vs, cs)) = &it.rhs {
                if !rhs_ok(vs, cs, &self.values, vs.len() + cs.len() == 1) {
                    return false;
                }
            }
            if it.lin.vars.iter().all(|&v| self.values[v].is_some()) {
                let sum = it.lin.vars.iter().fold(it.lin.consts, |acc, &v| acc ^ self.values[v].unwrap());
                (sum == 0) != it.diseq
            } else {
                true
            }
        })
    }

    /// Assigns every variable that is the only unknown of an equation.
    fn propagate(&mut self, trail: &mut Vec<usize>) -> bool {
        loop {
            let mut changed = false;
            let items = self.items;
            for it in items.iter().filter(|it| !it.diseq) {
                let open: Vec<usize> = it.lin.vars.iter().copied().filter(|&v| self.values[v].is_none()).collect();
                if let [v] = open.as_slice() {
                    let rest = it
                        .lin
                        .vars
                        .iter()
                        .filter(|&&w| w != *v)
                        .fold(it.lin.consts, |acc, &w| acc ^ self.values[w].unwrap());
                    self.values[*v] = Some(rest);
                    trail.push(*v);
                    changed = true;
                    if !self.consistent() {
                        return false;
                    }
                }
            }
            if !changed {
                return true;
            }
        }
    }

    fn run(&mut self, depth: usize) -> Result<bool> {
        self.nodes += 1;
        if self.nodes > self.cap {
            return Err(Error::CapExceeded(format!("ground search visited more than {} nodes", self.cap)));
        }
        let Some(&v) = self.order[depth..].iter().find(|&&v| self.values[v].is_none()) else {
            return Ok(self.consistent());
        };
        let next = self.order.iter().position(|&w| w == v).unwrap() + 1;
        for x in 0..self.choices {
            self.values[v] = Some(x);
            let mut trail = Vec::new();
            if self.consistent() && self.propagate(&mut trail) && self.run(next)? {
                return Ok(true);
            }
            for w in trail {
                self.values[w] = None;
            }
        }
        self.values[v] = None;
        Ok(false)
    }
}

/// As [`ground_asym_unify_acun`] but stops with `CapExceeded` after `cap`
/// search nodes.
pub fn ground_asym_unify_acun_capped(p: &Problem, cap: u64) -> Result<Decision> {
    if p.theory.tag != TheoryTag::Acun {
        return Err(Error::Unsupported(format!("expected theory acun, found {}", p.theory.tag)));
    }
    let n = p.constants.len();
    if n > 20 {
        return Err(Error::CapExceeded(format!("{n} constants exceed the ground search limit of 20")));
    }
    let mut items = Vec::new();
    for it in &p.items {
        let mut lin = Lin {
            vars: Vec::new(),
            consts: 0,
        };
        lin_of(&it.lhs, &p.variables, &p.constants, &mut lin)?;
        lin_of(&it.rhs, &p.variables, &p.constants, &mut lin)?;
        let rhs = match it.rel {
            Relation::AsymEq => Some(rhs_parts(&it.rhs, &p.variables, &p.constants)?),
            _ => None,
        };
        items.push(AsymItem {
            lin,
            diseq: it.rel == Relation::Diseq,
            rhs,
        });
    }
    let mut search = Search {
        items: &items,
        order: (0..p.variables.len()).collect(),
        values: vec![None; p.variables.len()],
        choices: 1 << n,
        nodes: 0,
        cap,
    };
    let mut trail = Vec::new();
    let found = search.consistent() && search.propagate(&mut trail) && search.run(0)?;
    if !found {
        return Ok(Decision::Unsolvable(Refutation::new(format!(
            "no assignment over subset sums of {} constants",
            n
        ))));
    }
    let mut sigma = Substitution::new();
    for (i, x) in p.variables.iter().enumerate() {
        let bits = search.values[i].unwrap_or(0);
        let summands: Vec<Term> = (0..n)
            .filter(|j| bits >> j & 1 == 1)
            .map(|j| Term::Const(p.constants[j].clone()))
            .collect();
        sigma.insert(x, Term::sum(summands));
    }
    if !verify_solution(p, &sigma) {
        return Err(Error::Internal(format!("ground search produced {sigma}, which fails verification")));
    }
    Ok(Decision::Solvable(sigma))
}
