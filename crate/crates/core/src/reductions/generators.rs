use super::instances::{CnfFormula, Graph, NaeInstance};
use crate::error::{Error, Result};
use crate::problem::{Item, Problem};
use crate::term::Term;
use crate::theory::TheorySpec;

pub fn x_var(i: usize) -> String {
    format!("x{i}")
}

pub fn y_var(i: usize) -> String {
    format!("y{i}")
}

pub fn z_var(k: usize) -> String {
    format!("z{k}")
}

/// `T` is `a`, `F` is `b`.
fn truth(b: bool) -> Term {
    Term::constant(if b { "a" } else { "b" })
}

/// One equation `h(x_j) = f(x_j, c)` per variable and one disequation
/// `f(x_p, f(x_q, x_r)) != f(d1, f(d2, d3))` per clause, `d` being the
/// assignment that falsifies the clause.
pub fn sat3_to_r1_disunif(f: &CnfFormula) -> Problem {
    let mut items = Vec::new();
    let mut order = Vec::new();
    for j in 1..=f.vars() {
        let x = Term::var(&x_var(j));
        order.push(x_var(j));
        items.push(Item::eq(
            Term::app("h", vec![x.clone()]),
            Term::app("f", vec![x, Term::constant("c")]),
        ));
    }
    for c in f.clauses() {
        let nest = |a: Term, b: Term, c: Term| Term::app("f", vec![a, Term::app("f", vec![b, c])]);
        let lhs = nest(
            Term::var(&x_var(c[0].var)),
            Term::var(&x_var(c[1].var)),
            Term::var(&x_var(c[2].var)),
        );
        let rhs = nest(truth(!c[0].positive), truth(!c[1].positive), truth(!c[2].positive));
        items.push(Item::diseq(lhs, rhs));
    }
    Problem::new(TheorySpec::r1(), &[] as &[&str], items)
        .expect("reduction output is well-formed")
        .with_variable_order(&order)
}

/// One asymmetric equation `c1 + c2 + c3 =v y_i + y_j + z_k` per edge.
pub fn coloring_to_acun_asym(g: &Graph) -> Problem {
    let colors = Term::sum(vec![Term::constant("c1"), Term::constant("c2"), Term::constant("c3")]);
    let mut items = Vec::new();
    let mut ys: Vec<usize> = Vec::new();
    for (k, &(i, j)) in g.edges().iter().enumerate() {
        ys.extend([i, j]);
        items.push(Item::asym(
            colors.clone(),
            Term::sum(vec![
                Term::var(&y_var(i)),
                Term::var(&y_var(j)),
                Term::var(&z_var(k + 1)),
            ]),
        ));
    }
    ys.sort_unstable();
    ys.dedup();
    let mut order: Vec<String> = ys.into_iter().map(y_var).collect();
    order.extend((1..=g.edges().len()).map(z_var));
    Problem::new(TheorySpec::acun(), &["c1", "c2", "c3"], items)
        .expect("reduction output is well-formed")
        .with_variable_order(&order)
}

/// `f(x_i, x_i, x_i) = g(x_i)` per variable and `z_j =v f(x_p, x_q, x_r)`
/// per clause. The clauses must be monotone.
pub fn nae3sat_to_r4_asym(f: &NaeInstance) -> Result<Problem> {
    if !f.formula.is_monotone() {
        return Err(Error::Unsupported("the NAE reduction takes clauses of positive literals only".into()));
    }
    let mut items = Vec::new();
    let mut order = Vec::new();
    for i in 1..=f.formula.vars() {
        let x = Term::var(&x_var(i));
        order.push(x_var(i));
        items.push(Item::eq(
            Term::app("f", vec![x.clone(), x.clone(), x.clone()]),
            Term::app("g", vec![x]),
        ));
    }
    for (j, c) in f.formula.clauses().iter().enumerate() {
        order.push(z_var(j + 1));
        items.push(Item::asym(
            Term::var(&z_var(j + 1)),
            Term::app("f", c.iter().map(|l| Term::var(&x_var(l.var))).collect()),
        ));
    }
    Ok(Problem::new(TheorySpec::r4(), &[] as &[&str], items)
        .expect("reduction output is well-formed")
        .with_variable_order(&order))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reductions::instances::Literal;

    fn lines(p: &Problem) -> Vec<String> {
        p.to_string().lines().map(String::from).collect()
    }

    #[test]
    fn clause_falsifier() {
        let f = CnfFormula::new(3, vec![[Literal::pos(1), Literal::neg(2), Literal::pos(3)]]).unwrap();
        let p = sat3_to_r1_disunif(&f);
        assert_eq!(p.items.len(), 4);
        assert_eq!(p.items[3].to_string(), "f(x1,f(x2,x3)) != f(b,f(a,b))");
    }

    #[test]
    fn empty_formula_gives_equations_only() {
        let p = sat3_to_r1_disunif(&CnfFormula::new(2, vec![]).unwrap());
        assert_eq!(
            lines(&p)[3..],
            ["eq h(x1) = f(x1,c)".to_string(), "eq h(x2) = f(x2,c)".to_string()]
        );
    }

    #[test]
    fn coloring_equations() {
        let g = Graph::new(3, vec![(1, 2)]).unwrap();
        let p = coloring_to_acun_asym(&g);
        assert_eq!(p.items[0].to_string(), "c1 + c2 + c3 =v y1 + y2 + z1");
        assert_eq!(p.variables, ["y1", "y2", "z1"].map(Into::into));
    }

    #[test]
    fn nae_needs_monotone_clauses() {
        let f = CnfFormula::new(3, vec![[Literal::pos(1), Literal::neg(2), Literal::pos(3)]]).unwrap();
        assert!(nae3sat_to_r4_asym(&NaeInstance::new(f)).is_err());
    }
}
