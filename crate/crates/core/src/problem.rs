use std::fmt;

use crate::error::{Error, Result};
use crate::parse::parse_term;
use crate::signature::{Signature, SymbolKind};
use crate::term::{natural_cmp, Sym, Term};
use crate::theory::{TheorySpec, TheoryTag};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Relation {
    Eq,
    /// Asymmetric equation: the instantiated right side must be irreducible.
    AsymEq,
    Diseq,
}

impl Relation {
    pub fn keyword(self) -> &'static str {
        match self {
            Relation::Eq => "eq",
            Relation::AsymEq => "asym",
            Relation::Diseq => "diseq",
        }
    }

    pub fn operator(self) -> &'static str {
        match self {
            Relation::Eq => "=",
            Relation::AsymEq => "=v",
            Relation::Diseq => "!=",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Item {
    pub lhs: Term,
    pub rhs: Term,
    pub rel: Relation,
}

impl Item {
    pub fn eq(lhs: Term, rhs: Term) -> Self {
        Item { lhs, rhs, rel: Relation::Eq }
    }

    pub fn asym(lhs: Term, rhs: Term) -> Self {
        Item { lhs, rhs, rel: Relation::AsymEq }
    }

    pub fn diseq(lhs: Term, rhs: Term) -> Self {
        Item { lhs, rhs, rel: Relation::Diseq }
    }
}

impl fmt::Display for Item {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.lhs, self.rel.operator(), self.rhs)
    }
}

/// A theory plus equations, asymmetric equations and disequations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Problem {
    pub theory: TheorySpec,
    /// Every constant of the signature: the theory's own first, then extras.
    pub constants: Vec<Sym>,
    /// Variable order used by the order-sensitive procedures.
    pub variables: Vec<Sym>,
    pub items: Vec<Item>,
}

fn check_term(t: &Term, sig: &Signature) -> Result<()> {
    match t {
        Term::Var(_) => Ok(()),
        Term::Const(c) => match sig.lookup(c) {
            Some(s) if matches!(s.kind, SymbolKind::Constant | SymbolKind::Unit) => Ok(()),
            _ => Err(Error::Signature(format!("undeclared constant `{c}`"))),
        },
        Term::Sum(args) => {
            if !sig.has_ac_plus() {
                return Err(Error::Signature("`+` is not AC in this theory".into()));
            }
            args.iter().try_for_each(|a| check_term(a, sig))
        }
        Term::App(f, args) => {
            match sig.lookup(f) {
                Some(s) if s.kind == SymbolKind::Function && s.arity == args.len() => {}
                Some(s) => {
                    return Err(Error::Signature(format!(
                        "`{f}` has arity {} but is applied to {} argument(s)",
                        s.arity,
                        args.len()
                    )))
                }
                None => return Err(Error::Signature(format!("undeclared function `{f}`"))),
            }
            args.iter().try_for_each(|a| check_term(a, sig))
        }
    }
}

impl Problem {
    /// Builds a problem, checking every symbol against the theory signature
    /// extended with `extra_constants`. Variables are collected and sorted
    /// in natural name order.
    pub fn new<S: AsRef<str>>(theory: TheorySpec, extra_constants: &[S], items: Vec<Item>) -> Result<Self> {
        let sig = theory.signature(extra_constants)?;
        for it in &items {
            check_term(&it.lhs, &sig)?;
            check_term(&it.rhs, &sig)?;
        }
        let constants = sig.constants().cloned().collect();
        let mut p = Problem {
            theory,
            constants,
            variables: Vec::new(),
            items: items
                .into_iter()
                .map(|it| Item {
                    lhs: it.lhs.canonical(),
                    rhs: it.rhs.canonical(),
                    rel: it.rel,
                })
                .collect(),
        };
        let mut vars = p.collect_variables();
        vars.sort_by(|a, b| natural_cmp(a, b));
        p.variables = vars;
        Ok(p)
    }

    /// Replaces the variable order. Variables occurring in items but missing
    /// from `order` are appended in natural order.
    pub fn with_variable_order<S: AsRef<str>>(mut self, order: &[S]) -> Self {
        let mut vars: Vec<Sym> = order.iter().map(|v| Sym::from(v.as_ref())).collect();
        let mut rest: Vec<Sym> = self
            .collect_variables()
            .into_iter()
            .filter(|v| !vars.contains(v))
            .collect();
        rest.sort_by(|a, b| natural_cmp(a, b));
        vars.extend(rest);
        self.variables = vars;
        self
    }

    fn collect_variables(&self) -> Vec<Sym> {
        let mut out: Vec<Sym> = Vec::new();
        for it in &self.items {
            for v in it.lhs.vars().into_iter().chain(it.rhs.vars()) {
                if !out.contains(&v) {
                    out.push(v);
                }
            }
        }
        out
    }

    pub fn signature(&self) -> Result<Signature> {
        Ok(self.theory.signature(&self.constants)?.with_variables(self.variables.iter()))
    }

    pub fn has(&self, rel: Relation) -> bool {
        self.items.iter().any(|it| it.rel == rel)
    }

    pub fn items_with(&self, rel: Relation) -> impl Iterator<Item = &Item> {
        self.items.iter().filter(move |it| it.rel == rel)
    }

    /// Total number of symbol occurrences over all items.
    pub fn size(&self) -> usize {
        self.items.iter().map(|it| it.lhs.size() + it.rhs.size()).sum()
    }

    /// Parses the line-based problem format.
    pub fn parse(text: &str) -> Result<Self> {
        let mut theory = None;
        let mut consts: Vec<String> = Vec::new();
        let mut vars: Option<Vec<String>> = None;
        let mut lines = Vec::new();
        for (n, raw) in text.lines().enumerate() {
            let line_no = n + 1;
            let line = raw.split('#').next().unwrap_or("");
            let trimmed = line.trim_start();
            if trimmed.is_empty() {
                continue;
            }
            let indent = line.len() - trimmed.len();
            let (kw, rest) = trimmed
                .split_once(char::is_whitespace)
                .unwrap_or((trimmed, ""));
            let rest_col = indent + kw.len() + 1;
            match kw {
                "theory" => {
                    let tag: TheoryTag = rest.trim().parse().map_err(|_| Error::Syntax {
                        line: line_no,
                        column: rest_col + 1,
                        message: format!("unknown theory `{}`", rest.trim()),
                    })?;
                    theory = Some(TheorySpec::from_tag(tag)?);
                }
                "consts" => consts.extend(rest.split_whitespace().map(String::from)),
                "vars" => vars
                    .get_or_insert_with(Vec::new)
                    .extend(rest.split_whitespace().map(String::from)),
                "eq" | "asym" | "diseq" => lines.push((line_no, kw, rest, rest_col)),
                other => {
                    return Err(Error::Syntax {
                        line: line_no,
                        column: indent + 1,
                        message: format!("unknown directive `{other}`"),
                    })
                }
            }
        }
        let theory = theory.ok_or_else(|| Error::Syntax {
            line: 1,
            column: 1,
            message: "missing `theory` line".into(),
        })?;
        let mut sig = theory.signature(&consts)?;
        if let Some(vs) = &vars {
            for v in vs {
                if sig.lookup(v).is_some() {
                    return Err(Error::Signature(format!("`{v}` is declared both as a variable and a symbol")));
                }
                if v.starts_with(crate::term::FRESH_PREFIX) {
                    return Err(Error::Signature(format!("variable `{v}` uses a reserved prefix")));
                }
            }
            sig = sig.with_variables(vs);
        }
        let mut items = Vec::new();
        for (line_no, kw, rest, col) in lines {
            let (rel, op) = match kw {
                "eq" => (Relation::Eq, "="),
                "asym" => (Relation::AsymEq, "=v"),
                _ => (Relation::Diseq, "!="),
            };
            let Some(at) = find_operator(rest, op) else {
                return Err(Error::Syntax {
                    line: line_no,
                    column: col + 1,
                    message: format!("expected `{op}` in `{kw}` line"),
                });
            };
            let (l, r) = (&rest[..at], &rest[at + op.len()..]);
            let lhs = parse_term(l, &sig).map_err(|e| e.relocate(line_no, col))?;
            let rhs = parse_term(r, &sig)
                .map_err(|e| e.relocate(line_no, col + rest[..at + op.len()].chars().count()))?;
            items.push(Item { lhs, rhs, rel });
        }
        let p = Problem::new(theory, &consts, items)?;
        Ok(match vars {
            Some(vs) => p.with_variable_order(&vs),
            None => p,
        })
    }
}

/// Byte offset of the relation operator. For `=` a following `v` or a
/// preceding `!` disqualifies the match.
fn find_operator(s: &str, op: &str) -> Option<usize> {
    if op != "=" {
        return s.find(op);
    }
    let b = s.as_bytes();
    (0..b.len()).find(|&i| {
        b[i] == b'=' && (i == 0 || b[i - 1] != b'!') && b.get(i + 1) != Some(&b'v')
    })
}

impl fmt::Display for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "theory {}", self.theory.tag)?;
        if self.theory.tag == TheoryTag::Custom {
            writeln!(f, "# rules: {}", self.theory)?;
        }
        if !self.constants.is_empty() {
            let cs: Vec<&str> = self.constants.iter().map(|c| &**c).collect();
            writeln!(f, "consts {}", cs.join(" "))?;
        }
        if !self.variables.is_empty() {
            let vs: Vec<&str> = self.variables.iter().map(|v| &**v).collect();
            writeln!(f, "vars {}", vs.join(" "))?;
        }
        for it in &self.items {
            writeln!(f, "{} {}", it.rel.keyword(), it)?;
        }
        Ok(())
    }
}

/// True when `t` uses `+` only in the AC sense and nothing but `+`, `h`,
/// variables and constants.
pub fn is_xor_term(t: &Term, allow_h: bool) -> bool {
    match t {
        Term::Var(_) | Term::Const(_) => true,
        Term::Sum(args) => args.iter().all(|a| is_xor_term(a, allow_h)),
        Term::App(f, args) => {
            allow_h && &**f == "h" && args.len() == 1 && is_xor_term(&args[0], allow_h)
        }
    }
}
