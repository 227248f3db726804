//! Seeded generators for the cross-check suites.

use rand::seq::SliceRandom;
use rand::Rng;

use super::instances::{CnfFormula, Graph, Literal, NaeInstance};
use crate::algebra::{Gf2Poly, PolyMatrix};
use crate::problem::{Item, Problem, Relation};
use crate::term::Term;
use crate::theory::TheorySpec;

pub fn random_cnf<R: Rng>(rng: &mut R, vars: usize, clauses: usize) -> CnfFormula {
    let cs = (0..clauses)
        .map(|_| {
            [0; 3].map(|_| Literal {
                var: rng.gen_range(1..=vars),
                positive: rng.gen_bool(0.5),
            })
        })
        .collect();
    CnfFormula::new(vars, cs).expect("indices in range")
}

/// Monotone clauses over three distinct variables when `vars >= 3`.
pub fn random_nae<R: Rng>(rng: &mut R, vars: usize, clauses: usize) -> NaeInstance {
    let all: Vec<usize> = (1..=vars).collect();
    let cs = (0..clauses)
        .map(|_| {
            let pick: Vec<usize> = if vars >= 3 {
                all.choose_multiple(rng, 3).copied().collect()
            } else {
                (0..3).map(|_| rng.gen_range(1..=vars)).collect()
            };
            [Literal::pos(pick[0]), Literal::pos(pick[1]), Literal::pos(pick[2])]
        })
        .collect();
    NaeInstance::new(CnfFormula::new(vars, cs).expect("indices in range"))
}

pub fn random_graph<R: Rng>(rng: &mut R, vertices: usize, density: f64) -> Graph {
    let mut edges = Vec::new();
    for u in 1..=vertices {
        for v in u + 1..=vertices {
            if rng.gen_bool(density) {
                edges.push((u, v));
            }
        }
    }
    Graph::new(vertices, edges).expect("valid graph")
}

/// A path on the first `n - 4` vertices followed by a `K4` on the last
/// four. Not 3-colorable, and the obstruction sits at the end of the vertex
/// order.
pub fn path_then_k4(n: usize) -> Graph {
    let mut edges: Vec<(usize, usize)> = (1..n.saturating_sub(4)).map(|v| (v, v + 1)).collect();
    for u in n - 3..=n {
        for v in u + 1..=n {
            edges.push((u, v));
        }
    }
    Graph::new(n, edges).expect("valid graph")
}

/// Wheel on `n` vertices: a hub joined to every vertex of a rim cycle. It
/// is 3-colorable iff the rim has even length.
pub fn wheel(n: usize) -> Graph {
    let rim = n - 1;
    let mut edges: Vec<(usize, usize)> = (2..=n).map(|v| (1, v)).collect();
    for i in 0..rim {
        edges.push((2 + i, 2 + (i + 1) % rim));
    }
    Graph::new(n, edges).expect("valid wheel")
}

fn random_free_term<R: Rng>(rng: &mut R, th: &TheorySpec, consts: &[&str], vars: &[&str], depth: usize) -> Term {
    let leaf = rng.gen_bool(if depth == 0 { 1.0 } else { 0.45 });
    if leaf {
        return if rng.gen_bool(0.6) {
            Term::var(vars.choose(rng).unwrap())
        } else {
            Term::constant(consts.choose(rng).unwrap())
        };
    }
    let (f, n) = th.functions().choose(rng).unwrap();
    let args = (0..*n).map(|_| random_free_term(rng, th, consts, vars, depth - 1)).collect();
    Term::App(f.clone(), args)
}

/// Up to three items over up to four variables, each an equation or an
/// asymmetric equation, for the R1 or R5 procedure.
pub fn random_syntactic_asym<R: Rng>(rng: &mut R, th: TheorySpec) -> Problem {
    let vars = ["X", "Y", "Z", "W"];
    let consts: Vec<&str> = th.base_constants().iter().map(|c| &**c).collect();
    let nv = rng.gen_range(1..=4);
    let vars = &vars[..nv];
    let items = (0..rng.gen_range(1..=3))
        .map(|_| {
            let l = Term::var(vars.choose(rng).unwrap());
            let r = random_free_term(rng, &th, &consts, vars, 2);
            if rng.gen_bool(0.5) {
                Item::asym(l, r)
            } else {
                Item::eq(l, r)
            }
        })
        .collect();
    Problem::new(th, &[] as &[&str], items).expect("well-formed")
}

fn names(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("{prefix}{i}")).collect()
}

fn random_sum<R: Rng>(rng: &mut R, atoms: &[Term], max_h: usize, width: usize) -> Term {
    let k = rng.gen_range(0..=width);
    let summands = (0..k)
        .map(|_| Term::iterate("h", rng.gen_range(0..=max_h), atoms.choose(rng).unwrap().clone()))
        .collect();
    Term::sum(summands)
}

struct Shape {
    max_h: usize,
    width: usize,
    items: usize,
}

fn random_linear<R: Rng>(rng: &mut R, th: TheorySpec, vars: usize, consts: usize, shape: Shape, rels: &[Relation]) -> Problem {
    let cs = names("c", consts);
    let vs = names("x", vars);
    let mut atoms: Vec<Term> = cs.iter().map(|c| Term::constant(c)).collect();
    atoms.extend(vs.iter().map(|v| Term::var(v)));
    let items = (0..rng.gen_range(1..=shape.items))
        .map(|_| {
            let rel = *rels.choose(rng).unwrap();
            let lhs = random_sum(rng, &atoms, shape.max_h, shape.width);
            let rhs = random_sum(rng, &atoms, shape.max_h, shape.width);
            Item { lhs, rhs, rel }
        })
        .collect();
    Problem::new(th, &cs, items).expect("well-formed").with_variable_order(&vs)
}

/// ACUN equations and disequations, at most three variables and constants.
pub fn random_acun_disunif<R: Rng>(rng: &mut R) -> Problem {
    let (v, c) = (rng.gen_range(1..=3), rng.gen_range(0..=3));
    random_linear(rng, TheorySpec::acun(), v, c, Shape { max_h: 0, width: 3, items: 3 }, &[Relation::Eq, Relation::Diseq])
}

/// ACUN equations and asymmetric equations, at most three variables and
/// constants.
pub fn random_acun_asym<R: Rng>(rng: &mut R) -> Problem {
    let (v, c) = (rng.gen_range(1..=3), rng.gen_range(1..=3));
    random_linear(rng, TheorySpec::acun(), v, c, Shape { max_h: 0, width: 3, items: 3 }, &[Relation::Eq, Relation::AsymEq])
}

/// ACUNh equations and disequations, at most two variables and constants.
pub fn random_acunh_disunif<R: Rng>(rng: &mut R) -> Problem {
    let (v, c) = (rng.gen_range(1..=2), rng.gen_range(1..=2));
    random_linear(rng, TheorySpec::acunh(), v, c, Shape { max_h: 2, width: 3, items: 3 }, &[Relation::Eq, Relation::Diseq])
}

/// ACUNh equations and asymmetric equations with sides of at most two
/// summands; `vars` and `consts` bound the sizes.
pub fn random_acunh_asym<R: Rng>(rng: &mut R, vars: usize, consts: usize) -> Problem {
    let (v, c) = (rng.gen_range(1..=vars), rng.gen_range(1..=consts));
    let shape = Shape { max_h: 1, width: 2, items: 3 };
    random_linear(rng, TheorySpec::acunh(), v, c, shape, &[Relation::Eq, Relation::AsymEq])
}

pub fn random_poly<R: Rng>(rng: &mut R, degree: usize) -> Gf2Poly {
    Gf2Poly::from_bits(rng.gen_range(0..1u64 << (degree + 1)))
}

pub fn random_poly_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize, degree: usize) -> PolyMatrix {
    PolyMatrix::from_rows((0..rows).map(|_| (0..cols).map(|_| random_poly(rng, degree)).collect()).collect())
}

/// `n` variables, `m` random ACUN equations and one disequation, for the
/// scaling table.
pub fn random_acun_system<R: Rng>(rng: &mut R, n: usize, m: usize) -> Problem {
    let cs = names("c", 4);
    let vs = names("x", n);
    let pick = |rng: &mut R| -> Term {
        let mut s: Vec<Term> = vs.iter().filter(|_| rng.gen_bool(3.0 / n as f64)).map(|v| Term::var(v)).collect();
        s.extend(cs.iter().filter(|_| rng.gen_bool(0.5)).map(|c| Term::constant(c)));
        Term::sum(s)
    };
    let mut items: Vec<Item> = (0..m).map(|_| Item::eq(pick(rng), Term::zero())).collect();
    items.push(Item::diseq(pick(rng), Term::zero()));
    Problem::new(TheorySpec::acun(), &cs, items).expect("well-formed").with_variable_order(&vs)
}
