use std::collections::BTreeMap;
use std::fmt;

use crate::term::{Sym, Term};

/// Finite map from variables to terms. Bindings `x ↦ x` are never stored.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Substitution {
    map: BTreeMap<Sym, Term>,
}

impl Substitution {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs<I, S>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (S, Term)>,
        S: AsRef<str>,
    {
        let mut s = Self::new();
        for (v, t) in pairs {
            s.insert(v.as_ref(), t);
        }
        s
    }

    pub fn insert(&mut self, var: &str, t: Term) {
        if t.as_var().is_some_and(|v| &**v == var) {
            self.map.remove(var);
        } else {
            self.map.insert(Sym::from(var), t);
        }
    }

    pub fn get(&self, var: &str) -> Option<&Term> {
        self.map.get(var)
    }

    pub fn remove(&mut self, var: &str) -> Option<Term> {
        self.map.remove(var)
    }

    pub fn contains(&self, var: &str) -> bool {
        self.map.contains_key(var)
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Sym, &Term)> {
        self.map.iter()
    }

    pub fn domain(&self) -> impl Iterator<Item = &Sym> {
        self.map.keys()
    }

    /// Simultaneous replacement; sums are re-flattened but not rewritten.
    pub fn apply(&self, t: &Term) -> Term {
        if self.map.is_empty() {
            return t.clone();
        }
        match t {
            Term::Var(x) => self.map.get(x).cloned().unwrap_or_else(|| t.clone()),
            Term::Const(_) => t.clone(),
            Term::App(f, args) => Term::App(f.clone(), args.iter().map(|a| self.apply(a)).collect()),
            Term::Sum(args) => Term::sum(args.iter().map(|a| self.apply(a)).collect()),
        }
    }

    /// `compose(σ, τ)` applies σ first, then τ.
    pub fn compose(&self, tau: &Substitution) -> Substitution {
        let mut out = Substitution::new();
        for (x, t) in &self.map {
            out.insert(x, tau.apply(t));
        }
        for (y, t) in &tau.map {
            if !self.map.contains_key(y) {
                out.insert(y, t.clone());
            }
        }
        out
    }

    /// Keeps only bindings for the given variables.
    pub fn restrict<S: AsRef<str>>(&self, vars: &[S]) -> Substitution {
        let mut out = Substitution::new();
        for v in vars {
            if let Some(t) = self.get(v.as_ref()) {
                out.insert(v.as_ref(), t.clone());
            }
        }
        out
    }

    /// Binds every variable occurring in the range (and not in the domain)
    /// to `ground`, yielding a substitution whose range is ground.
    pub fn ground_with(&self, vars: &[Sym], ground: &Term) -> Substitution {
        let mut free = Substitution::new();
        for v in vars {
            if !self.contains(v) {
                free.insert(v, ground.clone());
            }
        }
        for t in self.map.values() {
            for v in t.vars() {
                if !self.contains(&v) {
                    free.insert(&v, ground.clone());
                }
            }
        }
        self.compose(&free)
    }

    pub fn is_idempotent(&self) -> bool {
        self.map
            .values()
            .all(|t| t.vars().iter().all(|v| !self.map.contains_key(v)))
    }
}

impl fmt::Display for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (x, t)) in self.map.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x} ↦ {t}")?;
        }
        write!(f, "}}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn apply_keeps_duplicate_summands() {
        let s = Substitution::from_pairs([("u", Term::var("v")), ("w", Term::var("v"))]);
        let t = Term::sum(vec![Term::var("u"), Term::var("v")]);
        assert_eq!(s.apply(&t), Term::Sum(vec![Term::var("v"), Term::var("v")]));
    }

    #[test]
    fn identity_is_neutral() {
        let t = Term::app("f", vec![Term::var("x"), Term::constant("a")]);
        assert_eq!(Substitution::new().apply(&t), t);
    }

    #[test]
    fn compose_follows_definition() {
        let s = Substitution::from_pairs([("x", Term::var("y"))]);
        let t = Substitution::from_pairs([("y", Term::constant("a"))]);
        let expect =
            Substitution::from_pairs([("x", Term::constant("a")), ("y", Term::constant("a"))]);
        assert_eq!(s.compose(&t), expect);
        assert_eq!(Substitution::new().compose(&t), t);

        let x_then_y = Substitution::from_pairs([("x", Term::constant("a"))])
            .compose(&Substitution::from_pairs([("y", Term::constant("b"))]));
        let fxy = Term::app("f", vec![Term::var("x"), Term::var("y")]);
        assert_eq!(
            x_then_y.apply(&fxy),
            Term::app("f", vec![Term::constant("a"), Term::constant("b")])
        );
    }

    #[test]
    fn trivial_bindings_are_dropped() {
        let mut s = Substitution::new();
        s.insert("x", Term::var("x"));
        assert!(s.is_empty());
    }
}
