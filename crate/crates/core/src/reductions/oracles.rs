use std::collections::HashMap;

use super::generators::{x_var, y_var};
use super::instances::{CnfFormula, Graph, NaeInstance};
use crate::acunh_ground::poly_term;
use crate::algebra::Gf2Poly;
use crate::error::{Error, Result};
use crate::problem::{Problem, Relation};
use crate::rewrite::verify_solution;
use crate::subst::Substitution;
use crate::term::{Sym, Term};

pub const MAX_SAT_VARS: usize = 20;
pub const MAX_COLOR_VERTICES: usize = 10;

fn assignments(n: usize) -> impl Iterator<Item = Vec<bool>> {
    (0..1u64 << n).map(move |code| (0..n).map(|i| code >> i & 1 == 1).collect())
}

fn sat_cap(n: usize) -> Result<()> {
    if n > MAX_SAT_VARS {
        return Err(Error::CapExceeded(format!("{n} variables exceed the oracle limit of {MAX_SAT_VARS}")));
    }
    Ok(())
}

pub fn brute_sat(f: &CnfFormula) -> Result<bool> {
    sat_cap(f.vars())?;
    Ok(assignments(f.vars()).any(|a| f.satisfied_by(&a)))
}

pub fn brute_nae(f: &NaeInstance) -> Result<bool> {
    sat_cap(f.formula.vars())?;
    Ok(assignments(f.formula.vars()).any(|a| f.satisfied_by(&a)))
}

pub fn brute_coloring(g: &Graph) -> Result<bool> {
    let n = g.vertices();
    if n > MAX_COLOR_VERTICES {
        return Err(Error::CapExceeded(format!(
            "{n} vertices exceed the oracle limit of {MAX_COLOR_VERTICES}"
        )));
    }
    let mut colors = vec![0usize; n];
    loop {
        if g.is_proper(&colors) {
            return Ok(true);
        }
        let mut i = 0;
        loop {
            if i == n {
                return Ok(false);
            }
            colors[i] += 1;
            if colors[i] < 3 {
                break;
            }
            colors[i] = 0;
            i += 1;
        }
    }
}

/// Reads `x_i ↦ a` as true and `x_i ↦ b` as false.
pub fn decode_assignment(sigma: &Substitution, vars: usize) -> Option<Vec<bool>> {
    (1..=vars)
        .map(|i| match sigma.get(&x_var(i))? {
            Term::Const(c) if &**c == "a" => Some(true),
            Term::Const(c) if &**c == "b" => Some(false),
            _ => None,
        })
        .collect()
}

/// Reads `y_i ↦ c_k` as color `k - 1`. Isolated vertices get color 0.
pub fn decode_coloring(sigma: &Substitution, g: &Graph) -> Option<Vec<usize>> {
    (1..=g.vertices())
        .map(|i| match sigma.get(&y_var(i)) {
            None => Some(0),
            Some(Term::Const(c)) => match &**c {
                "c1" => Some(0),
                "c2" => Some(1),
                "c3" => Some(2),
                _ => None,
            },
            Some(_) => None,
        })
        .collect()
}

/// Value of an ACUNh term with one bit string per atom, bit `j` of
/// component `i` standing for `h^j` of atom `i`.
fn eval(t: &Term, atoms: &HashMap<Sym, usize>, vars: &HashMap<Sym, usize>, env: &[Vec<u64>], k: usize) -> Option<Vec<u64>> {
    Some(match t {
        z if z.is_zero() => vec![0; k],
        Term::Const(c) | Term::Var(c) if atoms.contains_key(c) => {
            let mut v = vec![0; k];
            v[atoms[c]] = 1;
            v
        }
        Term::Var(x) => env[*vars.get(x)?].clone(),
        Term::Const(_) => return None,
        Term::Sum(args) => {
            let mut acc = vec![0; k];
            for a in args {
                for (x, y) in acc.iter_mut().zip(eval(a, atoms, vars, env, k)?) {
                    *x ^= y;
                }
            }
            acc
        }
        Term::App(f, args) if &**f == "h" && args.len() == 1 => {
            let v = eval(&args[0], atoms, vars, env, k)?;
            if v.iter().any(|x| x >> 63 != 0) {
                return None;
            }
            v.into_iter().map(|x| x << 1).collect()
        }
        Term::App(..) => return None,
    })
}

/// Enumerates every assignment of the problem variables to vectors of
/// `bits`-wide components over `atoms`, filters by the linear part of each
/// item and confirms survivors with [`verify_solution`].
fn linear_search(
    p: &Problem,
    atoms: &[Term],
    bits: usize,
    build: impl Fn(&[u64]) -> Term,
    cap: u64,
) -> Result<Option<Substitution>> {
    let k = atoms.len();
    let atom_index: HashMap<Sym, usize> = atoms
        .iter()
        .enumerate()
        .filter_map(|(i, a)| match a {
            Term::Const(c) | Term::Var(c) => Some((c.clone(), i)),
            _ => None,
        })
        .collect();
    let var_index: HashMap<Sym, usize> = p.variables.iter().enumerate().map(|(i, v)| (v.clone(), i)).collect();
    let width = bits * k;
    let n = p.variables.len();
    if width * n >= 63 || (1u64 << (width * n)) > cap {
        return Err(Error::CapExceeded(format!("{} bits of search space", width * n)));
    }
    let mask = (1u64 << bits) - 1;
    let mut env = vec![vec![0u64; k]; n];
    for code in 0..1u64 << (width * n) {
        for (i, val) in env.iter_mut().enumerate() {
            let word = code >> (i * width);
            for (c, x) in val.iter_mut().enumerate() {
                *x = word >> (c * bits) & mask;
            }
        }
        let linear_ok = p.items.iter().all(|it| {
            match (
                eval(&it.lhs, &atom_index, &var_index, &env, k),
                eval(&it.rhs, &atom_index, &var_index, &env, k),
            ) {
                (Some(l), Some(r)) => (l == r) != (it.rel == Relation::Diseq),
                _ => true,
            }
        });
        if !linear_ok {
            continue;
        }
        let mut sigma = Substitution::new();
        for (x, val) in p.variables.iter().zip(&env) {
            sigma.insert(x, build(val));
        }
        if verify_solution(p, &sigma) {
            return Ok(Some(sigma));
        }
    }
    Ok(None)
}

/// Ground ACUN search over subset sums of the declared constants plus
/// `extra` fresh atoms, which stand in for free variables.
pub fn acun_oracle(p: &Problem, extra: usize, cap: u64) -> Result<Option<Substitution>> {
    let mut atoms: Vec<Term> = p.constants.iter().map(|c| Term::Const(c.clone())).collect();
    atoms.extend((1..=extra).map(|i| Term::var(&format!("_w{i}"))));
    let build = |v: &[u64]| {
        let summands = atoms.iter().zip(v).filter(|(_, &b)| b == 1).map(|(a, _)| a.clone()).collect();
        Term::sum(summands)
    };
    linear_search(p, &atoms, 1, build, cap)
}

/// Ground ACUNh search over `Σ h^j(c)` with `j <= degree` per constant.
pub fn acunh_oracle(p: &Problem, degree: usize, cap: u64) -> Result<Option<Substitution>> {
    let atoms: Vec<Term> = p.constants.iter().map(|c| Term::Const(c.clone())).collect();
    let names = p.constants.clone();
    let build = |v: &[u64]| {
        Term::sum(
            v.iter()
                .zip(&names)
                .map(|(&bits, c)| poly_term(&Gf2Poly::from_bits(bits), c))
                .filter(|t| !t.is_zero())
                .collect(),
        )
    };
    linear_search(p, &atoms, degree + 1, build, cap)
}
