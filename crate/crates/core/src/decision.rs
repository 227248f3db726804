use std::fmt;

use crate::subst::Substitution;

/// Why a problem was judged unsolvable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Refutation {
    pub reason: String,
    /// Failure rule identifier for the rule-based procedures (`F1`..`F5`).
    pub rule: Option<String>,
    /// Set when the verdict only covers a bounded search space.
    pub bounded: bool,
}

impl Refutation {
    pub fn new(reason: impl Into<String>) -> Self {
        Refutation {
            reason: reason.into(),
            rule: None,
            bounded: false,
        }
    }

    pub fn rule(rule: impl Into<String>, reason: impl Into<String>) -> Self {
        Refutation {
            reason: reason.into(),
            rule: Some(rule.into()),
            bounded: false,
        }
    }

    pub fn bounded(reason: impl Into<String>) -> Self {
        Refutation {
            reason: reason.into(),
            rule: None,
            bounded: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Decision {
    Solvable(Substitution),
    Unsolvable(Refutation),
}

impl Decision {
    pub fn is_solvable(&self) -> bool {
        matches!(self, Decision::Solvable(_))
    }

    pub fn unifier(&self) -> Option<&Substitution> {
        match self {
            Decision::Solvable(s) => Some(s),
            Decision::Unsolvable(_) => None,
        }
    }

    pub fn refutation(&self) -> Option<&Refutation> {
        match self {
            Decision::Solvable(_) => None,
            Decision::Unsolvable(r) => Some(r),
        }
    }

    pub fn fail_rule(&self) -> Option<&str> {
        self.refutation().and_then(|r| r.rule.as_deref())
    }
}

impl fmt::Display for Decision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Decision::Solvable(s) => write!(f, "solvable {s}"),
            Decision::Unsolvable(r) => {
                write!(f, "unsolvable: {}", r.reason)?;
                if let Some(rule) = &r.rule {
                    write!(f, " [{rule}]")?;
                }
                if r.bounded {
                    write!(f, " (bounded search)")?;
                }
                Ok(())
            }
        }
    }
}
