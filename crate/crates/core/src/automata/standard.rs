use std::collections::HashMap;
use std::fmt;

use crate::asym::FreshVars;
use crate::error::{Error, Result};
use crate::problem::{Problem, Relation};
use crate::rewrite::normalize;
use crate::term::{Sym, Term};
use crate::theory::{TheorySpec, TheoryTag};

/// Standard ACUNh equations over variable names.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Shape {
    Sum { p: Sym, q: Sym, r: Sym },
    AsymSum { p: Sym, q: Sym, r: Sym },
    Hom { x: Sym, y: Sym },
    AsymHom { x: Sym, y: Sym },
    Const { x: Sym, c: Sym },
    Zero { x: Sym },
    Eq { x: Sym, y: Sym },
}

impl Shape {
    pub fn vars(&self) -> Vec<&Sym> {
        match self {
            Shape::Sum { p, q, r } | Shape::AsymSum { p, q, r } => vec![p, q, r],
            Shape::Hom { x, y } | Shape::AsymHom { x, y } | Shape::Eq { x, y } => vec![x, y],
            Shape::Const { x, .. } | Shape::Zero { x } => vec![x],
        }
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Shape::Sum { p, q, r } => write!(f, "{p} = {q} + {r}"),
            Shape::AsymSum { p, q, r } => write!(f, "{p} =v {q} + {r}"),
            Shape::Hom { x, y } => write!(f, "{x} = h({y})"),
            Shape::AsymHom { x, y } => write!(f, "{x} =v h({y})"),
            Shape::Const { x, c } => write!(f, "{x} = {c}"),
            Shape::Zero { x } => write!(f, "{x} = 0"),
            Shape::Eq { x, y } => write!(f, "{x} = {y}"),
        }
    }
}

/// Standardized problem. `tracks` lists the problem variables in declared
/// order followed by the fresh ones.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StandardAcunh {
    pub tracks: Vec<Sym>,
    pub shapes: Vec<Shape>,
}

impl StandardAcunh {
    pub fn track(&self, v: &str) -> usize {
        self.tracks.iter().position(|t| &**t == v).expect("known track")
    }
}

struct Flattener {
    fresh: FreshVars,
    tracks: Vec<Sym>,
    shapes: Vec<Shape>,
    named: HashMap<(Term, bool), Sym>,
}

impl Flattener {
    fn fresh(&mut self) -> Sym {
        let v = self.fresh.fresh();
        self.tracks.push(v.clone());
        v
    }

    fn name(&mut self, t: &Term, asym: bool) -> Result<Sym> {
        if let Term::Var(x) = t {
            return Ok(x.clone());
        }
        if let Some(v) = self.named.get(&(t.clone(), asym)) {
            return Ok(v.clone());
        }
        let v = self.fresh();
        self.define(&v, t, asym)?;
        self.named.insert((t.clone(), asym), v.clone());
        Ok(v)
    }

    /// `x = t`. Under `asym` every subterm of `t` has to be irreducible as
    /// well, so the flag travels into the definitions of named subterms.
    fn define(&mut self, x: &Sym, t: &Term, asym: bool) -> Result<()> {
        let shape = match t {
            t if t.is_zero() => Shape::Zero { x: x.clone() },
            Term::Var(y) => Shape::Eq {
                x: x.clone(),
                y: y.clone(),
            },
            Term::Const(c) => Shape::Const {
                x: x.clone(),
                c: c.clone(),
            },
            Term::App(f, args) if &**f == "h" && args.len() == 1 => {
                let y = self.name(&args[0], asym)?;
                if asym {
                    Shape::AsymHom { x: x.clone(), y }
                } else {
                    Shape::Hom { x: x.clone(), y }
                }
            }
            Term::Sum(args) => {
                let q = self.name(&args[0], asym)?;
                let r = if args.len() == 2 {
                    self.name(&args[1], asym)?
                } else {
                    let rest = self.fresh();
                    self.define(&rest, &Term::Sum(args[1..].to_vec()), asym)?;
                    rest
                };
                if asym {
                    Shape::AsymSum { p: x.clone(), q, r }
                } else {
                    Shape::Sum { p: x.clone(), q, r }
                }
            }
            other => return Err(Error::Unsupported(format!("`{other}` is outside ACUNh"))),
        };
        self.shapes.push(shape);
        Ok(())
    }
}

/// Flattens eq and asym items into the shapes `P = Q + R`, `P =v Q + R`,
/// `X = h(Y)`, `X =v h(Y)`, `X = c`, `X = 0` and `X = Y`. Wide sums become
/// right-nested chains; an asymmetric chain keeps the flag on every link.
/// Sides that need not be irreducible are normalized first, and repeated
/// subterms share one name.
pub fn standardize_acunh(p: &Problem) -> Result<StandardAcunh> {
    if p.theory.tag != TheoryTag::Acunh {
        return Err(Error::Unsupported(format!("expected theory acunh, found {}", p.theory.tag)));
    }
    let mut fl = Flattener {
        fresh: FreshVars::new(),
        tracks: p.variables.clone(),
        shapes: Vec::new(),
        named: HashMap::new(),
    };
    let th = TheorySpec::acunh();
    for it in &p.items {
        let asym = match it.rel {
            Relation::Eq => false,
            Relation::AsymEq => true,
            Relation::Diseq => {
                return Err(Error::Unsupported(
                    "disequations are not part of asymmetric unification".into(),
                ))
            }
        };
        let lhs = normalize(&it.lhs, &th);
        let rhs = if asym { it.rhs.clone() } else { normalize(&it.rhs, &th) };
        match (&lhs, &rhs) {
            (Term::Var(x), r) => fl.define(x, r, asym)?,
            (l, Term::Var(y)) => fl.define(y, l, false)?,
            (l, r) => {
                let x = fl.name(l, false)?;
                fl.define(&x, r, asym)?;
            }
        }
    }
    Ok(StandardAcunh {
        tracks: fl.tracks,
        shapes: fl.shapes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn shapes(text: &str) -> Vec<String> {
        let p = Problem::parse(text).unwrap();
        standardize_acunh(&p).unwrap().shapes.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn worked_example_is_already_standard() {
        let got = shapes("theory acunh\nconsts a\nvars V W Y U\nasym U =v V + Y\neq W = h(V)\nasym Y =v h(W)\n");
        assert_eq!(got, vec!["U =v V + Y", "W = h(V)", "Y =v h(W)"]);
    }

    #[test]
    fn nested_homomorphism() {
        assert_eq!(shapes("theory acunh\neq X = h(h(Y))\n"), vec!["_v1 = h(Y)", "X = h(_v1)"]);
    }

    #[test]
    fn wide_asymmetric_sum() {
        assert_eq!(
            shapes("theory acunh\nasym X =v Q + R + S\n"),
            vec!["_v1 =v R + S", "X =v Q + _v1"]
        );
    }

    #[test]
    fn shared_and_cancelled_subterms() {
        assert_eq!(
            shapes("theory acunh
consts a
eq X + X + h(Y) = h(Y) + a
"),
            vec!["_v1 = h(Y)", "_v2 = a", "_v1 = _v2 + _v1"]
        );
    }
}
