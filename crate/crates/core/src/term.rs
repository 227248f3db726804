//! First-order terms with a flattened representation for the AC symbol `+`.
//!
//! Sums are kept *syntactically* canonical: nested sums are flattened and the
//! summands sorted by [`term_order`]. Nothing is cancelled or erased here, so
//! `x + x` and `x + 0` survive canonicalization; both are redexes that only the
//! rewrite engine removes. Asymmetric unification needs to see them.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

/// Interned-ish symbol name. Cloning is a reference-count bump.
pub type Sym = Arc<str>;

/// Name of the unit symbol of `+`.
pub const ZERO: &str = "0";
/// Name of the AC symbol.
pub const PLUS: &str = "+";
/// Prefix reserved for generated variables.
pub const FRESH_PREFIX: &str = "_v";

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Term {
    Var(Sym),
    /// A constant, including the unit `0`.
    Const(Sym),
    /// Application of a free function symbol. A non-AC binary `+` (used by
    /// custom theories) is also an `App`.
    App(Sym, Vec<Term>),
    /// Application of the AC symbol `+`. Always has at least two summands,
    /// none of which is itself a `Sum`, sorted by precedence.
    Sum(Vec<Term>),
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(Sym::from(name))
    }

    pub fn constant(name: &str) -> Term {
        Term::Const(Sym::from(name))
    }

    pub fn zero() -> Term {
        Term::Const(Sym::from(ZERO))
    }

    pub fn app(name: &str, args: Vec<Term>) -> Term {
        Term::App(Sym::from(name), args)
    }

    /// Builds a canonical AC sum from canonical summands.
    ///
    /// Nested sums are spliced in and the result is sorted. An empty list gives
    /// `0` and a single summand is returned as is.
    pub fn sum(args: Vec<Term>) -> Term {
        let mut flat = Vec::with_capacity(args.len());
        for a in args {
            match a {
                Term::Sum(inner) => flat.extend(inner),
                other => flat.push(other),
            }
        }
        match flat.len() {
            0 => Term::zero(),
            1 => flat.pop().unwrap(),
            _ => {
                flat.sort_by(|a, b| term_order(b, a));
                Term::Sum(flat)
            }
        }
    }

    /// `h^k(t)` for a unary symbol `h`.
    pub fn iterate(sym: &str, times: usize, t: Term) -> Term {
        (0..times).fold(t, |acc, _| Term::app(sym, vec![acc]))
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Term::Var(_))
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Term::Const(c) if &**c == ZERO)
    }

    pub fn as_var(&self) -> Option<&Sym> {
        match self {
            Term::Var(v) => Some(v),
            _ => None,
        }
    }

    /// Root symbol name; variables have none.
    pub fn head(&self) -> Option<&str> {
        match self {
            Term::Var(_) => None,
            Term::Const(c) => Some(c),
            Term::App(f, _) => Some(f),
            Term::Sum(_) => Some(PLUS),
        }
    }

    pub fn args(&self) -> &[Term] {
        match self {
            Term::App(_, args) | Term::Sum(args) => args,
            _ => &[],
        }
    }

    /// Recursively flattens and sorts every sum.
    pub fn canonical(&self) -> Term {
        match self {
            Term::Var(_) | Term::Const(_) => self.clone(),
            Term::App(f, args) => Term::App(f.clone(), args.iter().map(Term::canonical).collect()),
            Term::Sum(args) => Term::sum(args.iter().map(Term::canonical).collect()),
        }
    }

    pub fn is_canonical(&self) -> bool {
        self.canonical() == *self
    }

    /// Number of symbol occurrences (variables and constants count one).
    pub fn size(&self) -> usize {
        1 + self.args().iter().map(Term::size).sum::<usize>()
    }

    pub fn depth(&self) -> usize {
        self.args().iter().map(Term::depth).max().map_or(0, |d| d + 1)
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::Const(_) => true,
            Term::App(_, args) | Term::Sum(args) => args.iter().all(Term::is_ground),
        }
    }

    pub fn occurs(&self, v: &str) -> bool {
        match self {
            Term::Var(x) => &**x == v,
            Term::Const(_) => false,
            Term::App(_, args) | Term::Sum(args) => args.iter().any(|a| a.occurs(v)),
        }
    }

    /// Variables in order of first occurrence, without repeats.
    pub fn vars(&self) -> Vec<Sym> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        self.collect_vars(&mut seen, &mut out);
        out
    }

    fn collect_vars(&self, seen: &mut BTreeSet<Sym>, out: &mut Vec<Sym>) {
        match self {
            Term::Var(x) => {
                if seen.insert(x.clone()) {
                    out.push(x.clone());
                }
            }
            Term::Const(_) => {}
            Term::App(_, args) | Term::Sum(args) => {
                for a in args {
                    a.collect_vars(seen, out);
                }
            }
        }
    }

    /// Count of occurrences of the symbol `f` (for `+`, one per sum node).
    pub fn count_symbol(&self, f: &str) -> usize {
        let here = usize::from(self.head() == Some(f) && !self.is_var());
        here + self.args().iter().map(|a| a.count_symbol(f)).sum::<usize>()
    }

    /// Subterm at a position given as a path of argument indices.
    pub fn at(&self, path: &[usize]) -> Option<&Term> {
        match path.split_first() {
            None => Some(self),
            Some((&i, rest)) => self.args().get(i)?.at(rest),
        }
    }

    /// Replaces the subterm at `path`, re-canonicalizing sums on the way up.
    pub fn replace_at(&self, path: &[usize], new: Term) -> Term {
        match path.split_first() {
            None => new,
            Some((&i, rest)) => match self {
                Term::App(f, args) => {
                    let mut args = args.clone();
                    args[i] = args[i].replace_at(rest, new);
                    Term::App(f.clone(), args)
                }
                Term::Sum(args) => {
                    let mut args = args.clone();
                    args[i] = args[i].replace_at(rest, new);
                    Term::sum(args)
                }
                _ => panic!("position {path:?} does not exist"),
            },
        }
    }

    /// All positions, preorder.
    pub fn positions(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut path = Vec::new();
        self.walk_positions(&mut path, &mut out);
        out
    }

    fn walk_positions(&self, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        out.push(path.clone());
        for (i, a) in self.args().iter().enumerate() {
            path.push(i);
            a.walk_positions(path, out);
            path.pop();
        }
    }
}

/// Splits a name into an alphabetic stem and a trailing number, so that
/// `x2` sorts before `x10`.
fn natural_key(name: &str) -> (&str, Option<u64>) {
    let stem_end = name
        .char_indices()
        .rev()
        .take_while(|(_, c)| c.is_ascii_digit())
        .last()
        .map_or(name.len(), |(i, _)| i);
    let (stem, digits) = name.split_at(stem_end);
    (stem, digits.parse().ok())
}

/// Natural order on names: `x1 < x2 < x10 < y1`.
pub fn natural_cmp(a: &str, b: &str) -> Ordering {
    natural_key(a).cmp(&natural_key(b)).then_with(|| a.cmp(b))
}

fn kind_rank(t: &Term) -> u8 {
    match t {
        Term::Var(_) => 3,
        Term::Const(c) if &**c == ZERO => 1,
        Term::Const(_) => 2,
        Term::App(..) | Term::Sum(_) => 0,
    }
}

/// Total precedence order on terms: `Greater` means "comes first".
///
/// Variables precede constants, constants precede the unit `0`, and `0`
/// precedes applications. Among names, the one earlier in natural order is
/// greater (`x1 > x2`, `c1 > c3`). Applications compare by symbol name, then
/// arity, then arguments left to right.
pub fn term_order(s: &Term, t: &Term) -> Ordering {
    let by_kind = kind_rank(s).cmp(&kind_rank(t));
    if by_kind != Ordering::Equal {
        return by_kind;
    }
    match (s, t) {
        (Term::Var(a), Term::Var(b)) | (Term::Const(a), Term::Const(b)) => natural_cmp(b, a),
        _ => {
            let (fs, ft) = (s.head().unwrap_or(""), t.head().unwrap_or(""));
            natural_cmp(ft, fs)
                .then_with(|| s.args().len().cmp(&t.args().len()))
                .then_with(|| {
                    s.args()
                        .iter()
                        .zip(t.args())
                        .map(|(a, b)| term_order(a, b))
                        .find(|o| o.is_ne())
                        .unwrap_or(Ordering::Equal)
                })
        }
    }
}

/// Sorts terms so that the greatest comes first.
pub fn sort_by_precedence(terms: &mut [Term]) {
    terms.sort_by(|a, b| term_order(b, a));
}

fn is_infix_plus(t: &Term) -> bool {
    matches!(t, Term::App(f, args) if &**f == PLUS && args.len() == 2)
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(x) | Term::Const(x) => write!(f, "{x}"),
            Term::App(_, args) if is_infix_plus(self) => {
                // Non-AC `+` is left associative; only a right operand that is
                // itself a `+` needs brackets.
                write!(f, "{} + ", args[0])?;
                if is_infix_plus(&args[1]) {
                    write!(f, "({})", args[1])
                } else {
                    write!(f, "{}", args[1])
                }
            }
            Term::App(s, args) => {
                write!(f, "{s}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{a}")?;
                }
                write!(f, ")")
            }
            Term::Sum(args) => {
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, " + ")?;
                    }
                    write!(f, "{a}")?;
                }
                Ok(())
            }
        }
    }
}
