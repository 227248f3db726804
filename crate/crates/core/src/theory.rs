use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::parse::parse_term;
use crate::signature::Signature;
use crate::term::{Sym, Term, PLUS};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TheoryTag {
    R1,
    R4,
    R5,
    Acun,
    Acunh,
    Custom,
}

impl TheoryTag {
    pub fn as_str(self) -> &'static str {
        match self {
            TheoryTag::R1 => "r1",
            TheoryTag::R4 => "r4",
            TheoryTag::R5 => "r5",
            TheoryTag::Acun => "acun",
            TheoryTag::Acunh => "acunh",
            TheoryTag::Custom => "custom",
        }
    }
}

impl fmt::Display for TheoryTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TheoryTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "r1" => Ok(TheoryTag::R1),
            "r4" => Ok(TheoryTag::R4),
            "r5" => Ok(TheoryTag::R5),
            "acun" => Ok(TheoryTag::Acun),
            "acunh" => Ok(TheoryTag::Acunh),
            other => Err(Error::Unsupported(format!("unknown theory `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RewriteRule {
    pub lhs: Term,
    pub rhs: Term,
}

impl RewriteRule {
    pub fn new(lhs: Term, rhs: Term) -> Result<Self> {
        if lhs.is_var() {
            return Err(Error::Signature(format!("rule left-hand side `{lhs}` is a variable")));
        }
        let lv = lhs.vars();
        if let Some(v) = rhs.vars().into_iter().find(|v| !lv.contains(v)) {
            return Err(Error::Signature(format!(
                "variable `{v}` of `{rhs}` does not occur in `{lhs}`"
            )));
        }
        Ok(RewriteRule { lhs, rhs })
    }
}

impl fmt::Display for RewriteRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {}", self.lhs, self.rhs)
    }
}

/// A rewrite theory: its rules plus the symbols it is built over.
///
/// For ACUN and ACUNh the listed rules are informational only; normalization
/// computes the canonical XOR form directly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TheorySpec {
    pub tag: TheoryTag,
    pub rules: Vec<RewriteRule>,
    pub ac: bool,
    functions: Vec<(Sym, usize)>,
    constants: Vec<Sym>,
}

fn t(s: &str, sig: &Signature) -> Term {
    parse_term(s, sig).expect("built-in rule parses")
}

fn builtin(tag: TheoryTag, functions: &[(&str, usize)], constants: &[&str], rules: &[(&str, &str)]) -> TheorySpec {
    let mut spec = TheorySpec {
        tag,
        rules: Vec::new(),
        ac: matches!(tag, TheoryTag::Acun | TheoryTag::Acunh),
        functions: functions.iter().map(|(f, n)| (Sym::from(*f), *n)).collect(),
        constants: constants.iter().map(|c| Sym::from(*c)).collect(),
    };
    let sig = spec.signature::<&str>(&[]).expect("built-in signature");
    spec.rules = rules
        .iter()
        .map(|(l, r)| RewriteRule::new(t(l, &sig), t(r, &sig)).expect("built-in rule"))
        .collect();
    spec
}

impl TheorySpec {
    pub fn r1() -> Self {
        builtin(
            TheoryTag::R1,
            &[("h", 1), ("f", 2)],
            &["a", "b", "c"],
            &[("h(a)", "f(a,c)"), ("h(b)", "f(b,c)")],
        )
    }

    pub fn r4() -> Self {
        builtin(
            TheoryTag::R4,
            &[("f", 3), ("g", 1)],
            &["a", "b"],
            &[("f(a,a,a)", "g(a)"), ("f(b,b,b)", "g(b)")],
        )
    }

    pub fn r5() -> Self {
        builtin(
            TheoryTag::R5,
            &[("f", 3), ("g", 1)],
            &["a", "b"],
            &[("g(a)", "f(a,a,a)"), ("g(b)", "f(b,b,b)")],
        )
    }

    pub fn acun() -> Self {
        builtin(
            TheoryTag::Acun,
            &[],
            &[],
            &[("x + x", "0"), ("x + 0", "x"), ("x + y + x", "y")],
        )
    }

    pub fn acunh() -> Self {
        builtin(
            TheoryTag::Acunh,
            &[("h", 1)],
            &[],
            &[
                ("x + x", "0"),
                ("x + 0", "x"),
                ("x + y + x", "y"),
                ("h(x + y)", "h(x) + h(y)"),
                ("h(0)", "0"),
            ],
        )
    }

    pub fn from_tag(tag: TheoryTag) -> Result<Self> {
        Ok(match tag {
            TheoryTag::R1 => Self::r1(),
            TheoryTag::R4 => Self::r4(),
            TheoryTag::R5 => Self::r5(),
            TheoryTag::Acun => Self::acun(),
            TheoryTag::Acunh => Self::acunh(),
            TheoryTag::Custom => {
                return Err(Error::Unsupported("a custom theory needs explicit rules".into()))
            }
        })
    }

    /// A theory given by plain (non-AC) rules. `+` may be declared as an
    /// ordinary binary function symbol.
    pub fn custom(functions: &[(&str, usize)], constants: &[&str], rules: &[(&str, &str)]) -> Result<Self> {
        let mut spec = TheorySpec {
            tag: TheoryTag::Custom,
            rules: Vec::new(),
            ac: false,
            functions: functions.iter().map(|(f, n)| (Sym::from(*f), *n)).collect(),
            constants: constants.iter().map(|c| Sym::from(*c)).collect(),
        };
        let sig = spec.signature::<&str>(&[])?;
        for (l, r) in rules {
            let rule = RewriteRule::new(parse_term(l, &sig)?, parse_term(r, &sig)?)?;
            spec.rules.push(rule);
        }
        Ok(spec)
    }

    /// Constants fixed by the theory itself (those in its rules).
    pub fn base_constants(&self) -> &[Sym] {
        &self.constants
    }

    pub fn functions(&self) -> &[(Sym, usize)] {
        &self.functions
    }

    /// Signature with the theory's symbols plus `extra` constants.
    pub fn signature<S: AsRef<str>>(&self, extra: &[S]) -> Result<Signature> {
        let mut sig = Signature::new();
        if self.ac {
            sig = sig.ac_plus()?;
        }
        for (f, n) in &self.functions {
            sig = sig.function(f, *n)?;
        }
        for c in &self.constants {
            sig = sig.constant(c)?;
        }
        for c in extra {
            if !sig.is_constant(c.as_ref()) {
                sig = sig.constant(c.as_ref())?;
            }
        }
        Ok(sig)
    }

    /// The unary symbol that distributes or is cancelled by the procedures
    /// (`h` for R1 and ACUNh, `g` for R4/R5).
    pub fn unary_symbol(&self) -> Option<&str> {
        match self.tag {
            TheoryTag::R1 | TheoryTag::Acunh => Some("h"),
            TheoryTag::R4 | TheoryTag::R5 => Some("g"),
            _ => None,
        }
    }

    pub fn has_free_plus(&self) -> bool {
        !self.ac && self.functions.iter().any(|(f, n)| &**f == PLUS && *n == 2)
    }
}

impl fmt::Display for TheorySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.tag)?;
        if self.ac {
            write!(f, " modulo AC(+)")?;
        }
        write!(f, ": {{")?;
        for (i, r) in self.rules.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{r}")?;
        }
        write!(f, "}}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins_have_two_rules_or_more() {
        assert_eq!(TheorySpec::r1().rules.len(), 2);
        assert_eq!(TheorySpec::r1().rules[0].to_string(), "h(a) -> f(a,c)");
        assert_eq!(TheorySpec::r5().rules[1].to_string(), "g(b) -> f(b,b,b)");
        assert_eq!(TheorySpec::acunh().rules.len(), 5);
    }

    #[test]
    fn rules_are_validated() {
        assert!(TheorySpec::custom(&[("+", 2)], &["a"], &[("x", "a")]).is_err());
        assert!(TheorySpec::custom(&[("+", 2)], &["a"], &[("x + a", "y")]).is_err());
        let th = TheorySpec::custom(&[("+", 2)], &["a"], &[("x + a", "x")]).unwrap();
        assert!(th.has_free_plus());
    }

    #[test]
    fn tags_round_trip() {
        for tag in [TheoryTag::R1, TheoryTag::R4, TheoryTag::R5, TheoryTag::Acun, TheoryTag::Acunh] {
            assert_eq!(tag.as_str().parse::<TheoryTag>().unwrap(), tag);
        }
        assert!("custom".parse::<TheoryTag>().is_err());
    }
}
