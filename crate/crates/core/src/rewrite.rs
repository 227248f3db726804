//! Normalization, joinability and solution checking.
//!
//! R1, R4, R5 and custom theories use innermost rewriting with syntactic
//! matching. ACUN and ACUNh use the canonical XOR form: distribute `h`
//! (ACUNh only), drop `h(0)` and zero summands, cancel equal pairs.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::problem::{Item, Problem, Relation};
use crate::subst::Substitution;
use crate::term::Term;
use crate::theory::{TheorySpec, TheoryTag};

/// Syntactic matching of `pattern` against `t`, extending `s`.
pub fn match_term(pattern: &Term, t: &Term, s: &mut Substitution) -> bool {
    match (pattern, t) {
        (Term::Var(x), _) => match s.get(x) {
            Some(bound) => bound == t,
            None => {
                s.insert(x, t.clone());
                true
            }
        },
        (Term::Const(a), Term::Const(b)) => a == b,
        (Term::App(f, ps), Term::App(g, ts)) if f == g && ps.len() == ts.len() => {
            ps.iter().zip(ts).all(|(p, u)| match_term(p, u, s))
        }
        (Term::Sum(ps), Term::Sum(ts)) if ps.len() == ts.len() => {
            ps.iter().zip(ts).all(|(p, u)| match_term(p, u, s))
        }
        _ => false,
    }
}

fn distributes_h(th: &TheorySpec) -> bool {
    th.tag == TheoryTag::Acunh
}

pub fn normalize(t: &Term, th: &TheorySpec) -> Term {
    if th.ac {
        xor_normal(t, distributes_h(th))
    } else {
        rule_normal(t, th)
    }
}

fn rule_normal(t: &Term, th: &TheorySpec) -> Term {
    let inner = match t {
        Term::Var(_) | Term::Const(_) => t.clone(),
        Term::App(f, args) => Term::App(f.clone(), args.iter().map(|a| rule_normal(a, th)).collect()),
        Term::Sum(args) => Term::sum(args.iter().map(|a| rule_normal(a, th)).collect()),
    };
    for rule in &th.rules {
        let mut s = Substitution::new();
        if match_term(&rule.lhs, &inner, &mut s) {
            return rule_normal(&s.apply(&rule.rhs), th);
        }
    }
    inner
}

fn summands(t: Term) -> Vec<Term> {
    match t {
        Term::Sum(args) => args,
        other => vec![other],
    }
}

/// Drops zeros and cancels equal pairs in a list of non-sum normal terms.
fn cancel(mut ts: Vec<Term>) -> Term {
    ts.retain(|t| !t.is_zero());
    ts.sort_by(|a, b| crate::term::term_order(b, a));
    let mut out: Vec<Term> = Vec::with_capacity(ts.len());
    for t in ts {
        if out.last() == Some(&t) {
            out.pop();
        } else {
            out.push(t);
        }
    }
    Term::sum(out)
}

fn xor_normal(t: &Term, distribute: bool) -> Term {
    match t {
        Term::Var(_) | Term::Const(_) => t.clone(),
        Term::App(f, args) if distribute && &**f == "h" && args.len() == 1 => {
            match xor_normal(&args[0], distribute) {
                z if z.is_zero() => z,
                Term::Sum(parts) => {
                    Term::sum(parts.into_iter().map(|p| Term::App(f.clone(), vec![p])).collect())
                }
                inner => Term::App(f.clone(), vec![inner]),
            }
        }
        Term::App(f, args) => Term::App(f.clone(), args.iter().map(|a| xor_normal(a, distribute)).collect()),
        Term::Sum(args) => cancel(
            args.iter()
                .flat_map(|a| summands(xor_normal(a, distribute)))
                .collect(),
        ),
    }
}

pub fn is_normal_form(t: &Term, th: &TheorySpec) -> bool {
    normalize(t, th) == t.canonical()
}

pub fn joinable(s: &Term, t: &Term, th: &TheorySpec) -> bool {
    normalize(s, th) == normalize(t, th)
}

/// Applies `sigma` and normalizes every binding.
pub fn normalize_subst(sigma: &Substitution, th: &TheorySpec) -> Substitution {
    let mut out = Substitution::new();
    for (x, t) in sigma.iter() {
        out.insert(x, normalize(t, th));
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViolationKind {
    /// An equation whose instances have different normal forms.
    NotJoinable,
    /// An asymmetric equation whose instantiated right side is reducible.
    Reducible,
    /// A disequation whose instances are joinable.
    Joinable,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub item: usize,
    pub kind: ViolationKind,
}

/// How `it` fails under `sigma`, if it does.
pub fn check_item(it: &Item, sigma: &Substitution, th: &TheorySpec) -> Option<ViolationKind> {
    let l = sigma.apply(&it.lhs);
    let r = sigma.apply(&it.rhs);
    let join = joinable(&l, &r, th);
    match it.rel {
        Relation::Eq if !join => Some(ViolationKind::NotJoinable),
        Relation::AsymEq if !join => Some(ViolationKind::NotJoinable),
        Relation::AsymEq if !is_normal_form(&r, th) => Some(ViolationKind::Reducible),
        Relation::Diseq if join => Some(ViolationKind::Joinable),
        _ => None,
    }
}

/// Checks every item of `p` under `sigma`; reports the first failure.
pub fn check_solution(p: &Problem, sigma: &Substitution) -> Result<(), Violation> {
    for (i, it) in p.items.iter().enumerate() {
        if let Some(kind) = check_item(it, sigma, &p.theory) {
            return Err(Violation { item: i, kind });
        }
    }
    Ok(())
}

pub fn verify_solution(p: &Problem, sigma: &Substitution) -> bool {
    check_solution(p, sigma).is_ok()
}

/// One-step redex kinds, used by the randomized strategy.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StepKind {
    Rule(usize),
    DropZero(usize),
    CancelPair(usize, usize),
    Distribute,
    HZero,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Redex {
    pub position: Vec<usize>,
    pub kind: StepKind,
}

/// Every redex of `t`, preorder.
pub fn redexes(t: &Term, th: &TheorySpec) -> Vec<Redex> {
    let mut out = Vec::new();
    for position in t.positions() {
        let sub = t.at(&position).expect("position exists");
        let mut push = |kind| {
            out.push(Redex {
                position: position.clone(),
                kind,
            })
        };
        if th.ac {
            if let Term::Sum(args) = sub {
                if let Some(k) = args.iter().position(Term::is_zero) {
                    push(StepKind::DropZero(k));
                }
                for i in 0..args.len() {
                    if let Some(j) = (i + 1..args.len()).find(|&j| args[j] == args[i]) {
                        if args[i].is_zero() {
                            continue;
                        }
                        push(StepKind::CancelPair(i, j));
                    }
                }
            }
            if distributes_h(th) && sub.head() == Some("h") && sub.args().len() == 1 {
                match &sub.args()[0] {
                    Term::Sum(_) => push(StepKind::Distribute),
                    z if z.is_zero() => push(StepKind::HZero),
                    _ => {}
                }
            }
        } else {
            for (i, rule) in th.rules.iter().enumerate() {
                if match_term(&rule.lhs, sub, &mut Substitution::new()) {
                    push(StepKind::Rule(i));
                }
            }
        }
    }
    out
}

/// Contracts one redex.
pub fn contract(t: &Term, redex: &Redex, th: &TheorySpec) -> Term {
    let sub = t.at(&redex.position).expect("redex position exists");
    let new = match &redex.kind {
        StepKind::Rule(i) => {
            let rule = &th.rules[*i];
            let mut s = Substitution::new();
            assert!(match_term(&rule.lhs, sub, &mut s), "stale redex");
            s.apply(&rule.rhs)
        }
        StepKind::DropZero(k) => {
            let mut args = sub.args().to_vec();
            args.remove(*k);
            Term::sum(args)
        }
        StepKind::CancelPair(i, j) => {
            let args = sub
                .args()
                .iter()
                .enumerate()
                .filter(|(k, _)| k != i && k != j)
                .map(|(_, a)| a.clone())
                .collect();
            Term::sum(args)
        }
        StepKind::Distribute => {
            let f = sub.head().expect("h");
            Term::sum(sub.args()[0].args().iter().map(|a| Term::app(f, vec![a.clone()])).collect())
        }
        StepKind::HZero => Term::zero(),
    };
    t.replace_at(&redex.position, new)
}

/// Normalizes by contracting uniformly random redexes. Used only as an
/// independent witness for convergence of the built-in theories.
pub fn normalize_randomized<R: Rng>(t: &Term, th: &TheorySpec, rng: &mut R) -> Term {
    let mut cur = t.canonical();
    loop {
        let rs = redexes(&cur, th);
        match rs.choose(rng) {
            None => return cur,
            Some(r) => cur = contract(&cur, r, th),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_term;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn term(s: &str, th: &TheorySpec) -> Term {
        parse_term(s, &th.signature(&["c1", "c2", "c3"]).unwrap()).unwrap()
    }

    #[test]
    fn r1_examples() {
        let th = TheorySpec::r1();
        assert_eq!(normalize(&term("h(a)", &th), &th), term("f(a,c)", &th));
        assert!(is_normal_form(&term("f(a,c)", &th), &th));
        assert!(!is_normal_form(&term("h(a)", &th), &th));
        assert!(joinable(&term("h(a)", &th), &term("f(a,c)", &th), &th));
        assert!(!joinable(&term("h(c)", &th), &term("f(c,c)", &th), &th));
        assert_eq!(normalize(&term("h(f(h(b), x))", &th), &th), term("h(f(f(b,c), x))", &th));
    }

    #[test]
    fn r4_r5_examples() {
        let r4 = TheorySpec::r4();
        assert_eq!(normalize(&term("f(a,a,a)", &r4), &r4), term("g(a)", &r4));
        assert!(is_normal_form(&term("f(a,b,a)", &r4), &r4));
        let r5 = TheorySpec::r5();
        assert_eq!(normalize(&term("g(g(b))", &r5), &r5), term("g(f(b,b,b))", &r5));
    }

    #[test]
    fn xor_examples() {
        let acun = TheorySpec::acun();
        assert_eq!(normalize(&term("x + x", &acun), &acun), Term::zero());
        assert_eq!(normalize(&term("x + 0", &acun), &acun), term("x", &acun));
        assert_eq!(normalize(&term("x + y + x", &acun), &acun), term("y", &acun));
        assert!(is_normal_form(&term("c1 + c2 + c3", &acun), &acun));
        assert!(!is_normal_form(&term("c1 + c1 + c3", &acun), &acun));
        let acunh = TheorySpec::acunh();
        assert_eq!(normalize(&term("h(x + y)", &acunh), &acunh), term("h(x) + h(y)", &acunh));
        assert_eq!(normalize(&term("h(x + x) + h(0)", &acunh), &acunh), Term::zero());
        assert_eq!(
            normalize(&term("h(h(c1 + c2) + h(c2))", &acunh), &acunh),
            term("h(h(c1))", &acunh)
        );
    }

    #[test]
    fn randomized_strategy_agrees_on_samples() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let th = TheorySpec::acunh();
        let t = term("h(x + h(y + x) + 0) + h(h(x)) + y + h(0 + y)", &th);
        for _ in 0..20 {
            assert_eq!(normalize_randomized(&t, &th, &mut rng), normalize(&t, &th));
        }
    }

    #[test]
    fn plus_a_examples() {
        let th = TheorySpec::custom(&[("+", 2)], &["a", "b"], &[("x + a", "x")]).unwrap();
        let sig = th.signature::<&str>(&[]).unwrap();
        let t = |s: &str| parse_term(s, &sig).unwrap();
        let asym = Problem::new(th.clone(), &["a", "b"], vec![crate::problem::Item::asym(t("u + v"), t("v + w"))]).unwrap();
        let theta = Substitution::from_pairs([("u", t("v")), ("w", t("v"))]);
        assert!(verify_solution(&asym, &theta));
        let rho = Substitution::from_pairs([("u", t("a")), ("v", t("a")), ("w", t("a"))]);
        assert_eq!(
            check_solution(&asym, &rho),
            Err(Violation { item: 0, kind: ViolationKind::Reducible })
        );
        let dis = Problem::new(th, &["a", "b"], vec![crate::problem::Item::diseq(t("u + v"), t("v + u"))]).unwrap();
        let theta = Substitution::from_pairs([("u", t("a")), ("v", t("b"))]);
        assert!(verify_solution(&dis, &theta));
    }
}
