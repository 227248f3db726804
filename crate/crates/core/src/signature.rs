use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::term::{natural_cmp, term_order, Sym, Term, PLUS, ZERO};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SymbolKind {
    Function,
    /// The AC symbol `+`. Declared binary, variadic once flattened.
    AcBinary,
    Constant,
    /// The unit `0` of `+`.
    Unit,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Symbol {
    pub name: Sym,
    pub arity: usize,
    pub kind: SymbolKind,
}

/// Declared symbols plus, optionally, a declared variable sequence.
///
/// When variables are declared the parser rejects any other bare identifier
/// that is not a constant; otherwise every such identifier is a variable.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Signature {
    symbols: Vec<Symbol>,
    variables: Option<Vec<Sym>>,
}

impl Signature {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, name: &str, arity: usize, kind: SymbolKind) -> Result<()> {
        if self.lookup(name).is_some() {
            return Err(Error::Signature(format!("symbol `{name}` declared twice")));
        }
        match kind {
            SymbolKind::AcBinary if name != PLUS => {
                return Err(Error::Signature(format!("only `+` may be AC, not `{name}`")))
            }
            SymbolKind::Unit if name != ZERO => {
                return Err(Error::Signature(format!("only `0` may be the unit, not `{name}`")))
            }
            SymbolKind::Constant | SymbolKind::Unit if arity != 0 => {
                return Err(Error::Signature(format!("constant `{name}` must have arity 0")))
            }
            _ => {}
        }
        if name == ZERO && kind != SymbolKind::Unit {
            return Err(Error::Signature("`0` is reserved for the unit".into()));
        }
        self.symbols.push(Symbol {
            name: Sym::from(name),
            arity,
            kind,
        });
        Ok(())
    }

    pub fn function(mut self, name: &str, arity: usize) -> Result<Self> {
        self.add(name, arity, SymbolKind::Function)?;
        Ok(self)
    }

    pub fn constant(mut self, name: &str) -> Result<Self> {
        self.add(name, 0, SymbolKind::Constant)?;
        Ok(self)
    }

    /// Adds the AC symbol `+` together with its unit `0`.
    pub fn ac_plus(mut self) -> Result<Self> {
        self.add(PLUS, 2, SymbolKind::AcBinary)?;
        self.add(ZERO, 0, SymbolKind::Unit)?;
        Ok(self)
    }

    pub fn with_variables<I, S>(mut self, vars: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        self.variables = Some(vars.into_iter().map(|v| Sym::from(v.as_ref())).collect());
        self
    }

    pub fn lookup(&self, name: &str) -> Option<&Symbol> {
        self.symbols.iter().find(|s| &*s.name == name)
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn constants(&self) -> impl Iterator<Item = &Sym> {
        self.symbols
            .iter()
            .filter(|s| s.kind == SymbolKind::Constant)
            .map(|s| &s.name)
    }

    pub fn is_constant(&self, name: &str) -> bool {
        matches!(self.lookup(name), Some(s) if s.kind == SymbolKind::Constant)
    }

    pub fn has_ac_plus(&self) -> bool {
        matches!(self.lookup(PLUS), Some(s) if s.kind == SymbolKind::AcBinary)
    }

    pub fn variables(&self) -> Option<&[Sym]> {
        self.variables.as_deref()
    }

    fn var_index(&self, name: &str) -> Option<usize> {
        self.variables.as_ref()?.iter().position(|v| &**v == name)
    }

    fn const_index(&self, name: &str) -> Option<usize> {
        self.constants().position(|c| &**c == name)
    }

    /// Precedence order using declaration indices: a variable or constant
    /// declared earlier is greater. Undeclared names fall back to natural
    /// name order after all declared ones.
    pub fn term_order(&self, s: &Term, t: &Term) -> Ordering {
        let by_index = |a: Option<usize>, b: Option<usize>, na: &str, nb: &str| match (a, b) {
            (Some(i), Some(j)) => j.cmp(&i),
            (Some(_), None) => Ordering::Greater,
            (None, Some(_)) => Ordering::Less,
            (None, None) => natural_cmp(nb, na),
        };
        match (s, t) {
            (Term::Var(a), Term::Var(b)) => by_index(self.var_index(a), self.var_index(b), a, b),
            (Term::Const(a), Term::Const(b)) if &**a != ZERO && &**b != ZERO => {
                by_index(self.const_index(a), self.const_index(b), a, b)
            }
            _ => term_order(s, t),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_duplicates_and_bad_kinds() {
        let sig = Signature::new().constant("a").unwrap();
        assert!(sig.clone().constant("a").is_err());
        assert!(sig.clone().function("a", 1).is_err());
        let mut s = Signature::new();
        assert!(s.add("*", 2, SymbolKind::AcBinary).is_err());
        assert!(s.add("e", 0, SymbolKind::Unit).is_err());
        assert!(s.add("0", 0, SymbolKind::Constant).is_err());
    }

    #[test]
    fn declared_order_overrides_names() {
        let sig = Signature::new()
            .constant("c3")
            .unwrap()
            .constant("c1")
            .unwrap()
            .with_variables(["y", "x"]);
        assert_eq!(sig.term_order(&Term::var("y"), &Term::var("x")), Ordering::Greater);
        assert_eq!(
            sig.term_order(&Term::constant("c3"), &Term::constant("c1")),
            Ordering::Greater
        );
        assert_eq!(sig.term_order(&Term::var("x"), &Term::constant("c3")), Ordering::Greater);
    }
}
