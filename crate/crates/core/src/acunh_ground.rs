//! Ground disunification modulo ACUNh through one linear system over Z2[h]
//! per constant.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::algebra::{solve_system_snf, Gf2Poly, PolyMatrix, PolySnf, PolySolution};
use crate::decision::{Decision, Refutation};
use crate::error::{Error, Result};
use crate::problem::{Problem, Relation};
use crate::rewrite::{normalize, verify_solution};
use crate::subst::Substitution;
use crate::term::{Sym, Term};
use crate::theory::{TheorySpec, TheoryTag};

/// `Σ_k h^k(c)` for the exponents of `p`.
pub fn poly_term(p: &Gf2Poly, c: &str) -> Term {
    let summands = p.exponents().map(|k| Term::iterate("h", k, Term::constant(c))).collect();
    Term::sum(summands)
}

/// Splits a term into `h`-polynomial coefficients per variable or constant
/// name. The input is normalized first.
pub fn coefficients(t: &Term) -> Result<BTreeMap<Sym, Gf2Poly>> {
    let n = normalize(t, &TheorySpec::acunh());
    let summands = match &n {
        Term::Sum(args) => args.clone(),
        z if z.is_zero() => Vec::new(),
        other => vec![other.clone()],
    };
    let mut out: BTreeMap<Sym, Gf2Poly> = BTreeMap::new();
    for s in summands {
        let mut k = 0;
        let mut cur = &s;
        while let Term::App(f, args) = cur {
            if &**f != "h" || args.len() != 1 {
                return Err(Error::Unsupported(format!("symbol `{f}` is outside ACUNh")));
            }
            k += 1;
            cur = &args[0];
        }
        let name = match cur {
            Term::Var(x) | Term::Const(x) => x.clone(),
            other => return Err(Error::Unsupported(format!("`{other}` is outside ACUNh"))),
        };
        let e = out.entry(name).or_default();
        *e = e.clone() + Gf2Poly::monomial(k);
    }
    out.retain(|_, p| !p.is_zero());
    Ok(out)
}

/// The shared matrix `A` and one right-hand side per constant. Each
/// disequation `l ≉ r` contributes an unknown `z` with `z = l + r`.
#[derive(Debug, Clone)]
pub struct ComponentSystems {
    pub unknowns: Vec<Sym>,
    pub constants: Vec<Sym>,
    pub a: PolyMatrix,
    pub b: Vec<Vec<Gf2Poly>>,
    /// Unknown index of each disequation variable.
    pub diseqs: Vec<usize>,
}

pub fn build_component_systems(p: &Problem) -> Result<ComponentSystems> {
    if p.theory.tag != TheoryTag::Acunh {
        return Err(Error::Unsupported(format!("expected theory acunh, found {}", p.theory.tag)));
    }
    let mut unknowns = p.variables.clone();
    let mut diseqs = Vec::new();
    let mut rows: Vec<(Option<usize>, Term)> = Vec::new();
    for it in &p.items {
        let both = Term::sum(vec![it.lhs.clone(), it.rhs.clone()]);
        match it.rel {
            Relation::Eq => rows.push((None, both)),
            Relation::Diseq => {
                let z = Sym::from(format!("_z{}", diseqs.len() + 1));
                unknowns.push(z);
                diseqs.push(unknowns.len() - 1);
                rows.push((Some(unknowns.len() - 1), both));
            }
            Relation::AsymEq => {
                return Err(Error::Unsupported("asymmetric equations need the automata backend".into()))
            }
        }
    }
    let n = unknowns.len();
    let mut a = PolyMatrix::zeros(rows.len(), n);
    let mut b = vec![vec![Gf2Poly::zero(); rows.len()]; p.constants.len()];
    for (i, (z, t)) in rows.iter().enumerate() {
        if let Some(z) = z {
            a[(i, *z)] = num_traits::One::one();
        }
        for (name, poly) in coefficients(t)? {
            if let Some(j) = p.variables.iter().position(|v| *v == name) {
                a[(i, j)] = poly;
            } else if let Some(c) = p.constants.iter().position(|c| *c == name) {
                b[c][i] = poly;
            } else {
                return Err(Error::Signature(format!("undeclared symbol `{name}`")));
            }
        }
    }
    Ok(ComponentSystems {
        unknowns,
        constants: p.constants.clone(),
        a,
        b,
        diseqs,
    })
}

/// Per-constant general solutions.
#[derive(Debug, Clone)]
pub struct GroundAnalysis {
    pub systems: ComponentSystems,
    pub snf: PolySnf,
    pub solutions: Vec<PolySolution>,
}

/// Disequation `z ≉ 0` is satisfiable iff its particular value is nonzero in
/// some component or its row of `Q2` is nonzero (given one constant).
pub fn diseq_satisfiable(analysis: &GroundAnalysis, z: usize) -> bool {
    let any_particular = analysis.solutions.iter().any(|s| !s.particular[z].is_zero());
    let free = !analysis.solutions.is_empty()
        && analysis.solutions[0].free_row(z).iter().any(|q| !q.is_zero());
    any_particular || free
}

/// Runs the Smith normal form pipeline on every component.
pub fn analyze(p: &Problem) -> Result<std::result::Result<GroundAnalysis, Refutation>> {
    let systems = build_component_systems(p)?;
    let mut solutions = Vec::new();
    let mut snf = None;
    for (c, b) in systems.b.iter().enumerate() {
        match solve_system_snf(&systems.a, b) {
            Ok((sol, s)) => {
                solutions.push(sol);
                snf = Some(s);
            }
            Err(e) => {
                return Ok(Err(Refutation::new(format!(
                    "system for {} has no solution: {e}",
                    systems.constants[c]
                ))))
            }
        }
    }
    let snf = snf.unwrap_or_else(|| crate::algebra::smith_normal_form(&systems.a));
    Ok(Ok(GroundAnalysis {
        systems,
        snf,
        solutions,
    }))
}

/// Chooses free parameters so that every disequation holds. One parameter
/// is moved at a time along `h^j`; each disequation excludes at most one
/// step, so `#diseqs + 1` candidate steps always contain a good one.
fn choose_parameters(analysis: &GroundAnalysis) -> Option<Vec<Vec<Gf2Poly>>> {
    let sols = &analysis.solutions;
    let k = sols.first().map_or(0, |s| s.free_basis.len());
    let mut params = vec![vec![Gf2Poly::zero(); k]; sols.len()];
    let diseqs = &analysis.systems.diseqs;
    let value = |params: &[Vec<Gf2Poly>], z: usize| -> bool {
        sols.iter()
            .zip(params)
            .any(|(s, ps)| !s.instantiate(ps)[z].is_zero())
    };
    for (done, &z) in diseqs.iter().enumerate() {
        if value(&params, z) {
            continue;
        }
        let row = sols.first()?.free_row(z);
        let col = row.iter().position(|q| !q.is_zero())?;
        let mut fixed = false;
        for j in 0..=diseqs.len() {
            let mut trial = params.clone();
            trial[0][col] = trial[0][col].clone() + Gf2Poly::monomial(j);
            if value(&trial, z) && diseqs[..done].iter().all(|&w| value(&trial, w)) {
                params = trial;
                fixed = true;
                break;
            }
        }
        if !fixed {
            return None;
        }
    }
    Some(params)
}

pub fn decide_ground_disunif_acunh(p: &Problem) -> Result<Decision> {
    let analysis = match analyze(p)? {
        Ok(a) => a,
        Err(r) => return Ok(Decision::Unsolvable(r)),
    };
    for (k, &z) in analysis.systems.diseqs.iter().enumerate() {
        if !diseq_satisfiable(&analysis, z) {
            return Ok(Decision::Unsolvable(Refutation::new(format!(
                "disequation {} is zero in every solution",
                k + 1
            ))));
        }
    }
    let params = choose_parameters(&analysis)
        .ok_or_else(|| Error::Internal("no parameter choice satisfies the disequations".into()))?;
    let mut sigma = Substitution::new();
    let acunh = TheorySpec::acunh();
    for (j, x) in p.variables.iter().enumerate() {
        let mut summands = Vec::new();
        for (c, (sol, ps)) in analysis.solutions.iter().zip(&params).enumerate() {
            summands.push(poly_term(&sol.instantiate(ps)[j], &analysis.systems.constants[c]));
        }
        sigma.insert(x, normalize(&Term::sum(summands), &acunh));
    }
    if !verify_solution(p, &sigma) {
        return Err(Error::Internal(format!("assembled substitution {sigma} fails verification")));
    }
    Ok(Decision::Solvable(sigma))
}
