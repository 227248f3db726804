use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use uniflab_core::algebra::{smith_normal_form, solve_system_snf, EuclideanDomain};
use uniflab_core::asym::{infer_step, metric, remove_asymmetry, standardize, AsymTheory, FreshVars, StepResult};
use uniflab_core::automata::{encode, track_values, BitSymbol, EqAutomaton, Machine};
use uniflab_core::problem::Problem;
use uniflab_core::reductions::random::{random_acun_system, random_poly_matrix, random_syntactic_asym};
use uniflab_core::rewrite::{is_normal_form, joinable, normalize, normalize_randomized};
use uniflab_core::subst::Substitution;
use uniflab_core::term::Term;
use uniflab_core::theory::TheorySpec;
use uniflab_core::xor::{gaussian_eliminate, to_xor_system, RowRel, XorSystem};

fn r1_term() -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![Just("a"), Just("b"), Just("c")].prop_map(Term::constant);
    leaf.prop_recursive(4, 32, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|t| Term::app("h", vec![t])),
            (inner.clone(), inner).prop_map(|(s, t)| Term::app("f", vec![s, t])),
        ]
    })
}

fn r1_open_term() -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![
        prop_oneof![Just("a"), Just("b"), Just("c")].prop_map(Term::constant),
        prop_oneof![Just("X"), Just("Y"), Just("Z")].prop_map(Term::var),
    ];
    leaf.prop_recursive(3, 16, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|t| Term::app("h", vec![t])),
            (inner.clone(), inner).prop_map(|(s, t)| Term::app("f", vec![s, t])),
        ]
    })
}

fn acunh_term() -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![
        Just(Term::zero()),
        prop_oneof![Just("c1"), Just("c2")].prop_map(Term::constant),
        prop_oneof![Just("x"), Just("y")].prop_map(Term::var),
    ];
    leaf.prop_recursive(4, 24, 4, |inner| {
        prop_oneof![
            inner.clone().prop_map(|t| Term::app("h", vec![t])),
            prop::collection::vec(inner, 2..4).prop_map(Term::sum),
        ]
    })
}

fn machine(width: usize) -> impl Strategy<Value = Machine> {
    let t = 0..width;
    prop_oneof![
        (t.clone(), t.clone(), t.clone()).prop_map(|(p, q, r)| Machine::Sum { p, q, r }),
        (t.clone(), t.clone(), t.clone(), any::<bool>())
            .prop_map(|(p, q, r, nonempty)| Machine::DisjointSum { p, q, r, nonempty }),
        (t.clone(), t.clone()).prop_map(|(x, y)| Machine::Hom { x, y }),
        (t.clone(), t.clone(), any::<bool>()).prop_map(|(x, y, optional)| Machine::AsymHom { x, y, optional }),
        t.clone().prop_map(|x| Machine::Const { x }),
        t.clone().prop_map(|x| Machine::Zero { x }),
        t.clone().prop_map(|x| Machine::NonZero { x }),
        (t.clone(), t).prop_map(|(x, y)| Machine::Eq { x, y }),
    ]
}

/// Rank over Z2 of rows given as bit masks.
fn rank(rows: &[u128]) -> usize {
    let mut basis: Vec<u128> = Vec::new();
    for &r in rows {
        let mut r = r;
        for b in &basis {
            r = r.min(r ^ b);
        }
        if r != 0 {
            basis.push(r);
            basis.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    basis.len()
}

fn eq_rows(sys: &XorSystem) -> Vec<u128> {
    let nv = sys.variables.len();
    sys.rows
        .iter()
        .filter(|r| r.rel == RowRel::EqZero)
        .map(|r| {
            let vars = r.vars.iter_ones().fold(0u128, |acc, i| acc | 1 << i);
            r.consts.iter_ones().fold(vars, |acc, i| acc | 1 << (nv + i))
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn canonical_is_idempotent_and_order_free(t in acunh_term(), seed in any::<u64>()) {
        let c = t.canonical();
        prop_assert!(c.is_canonical());
        prop_assert_eq!(c.canonical(), c.clone());
        if let Term::Sum(args) = &c {
            let mut shuffled = args.clone();
            rand::seq::SliceRandom::shuffle(&mut shuffled[..], &mut ChaCha8Rng::seed_from_u64(seed));
            prop_assert_eq!(Term::sum(shuffled), c);
        }
    }

    #[test]
    fn acunh_normal_forms(t in acunh_term(), seed in any::<u64>()) {
        let th = TheorySpec::acunh();
        let n = normalize(&t, &th);
        prop_assert!(is_normal_form(&n, &th));
        prop_assert_eq!(normalize(&n, &th), n.clone());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        prop_assert_eq!(normalize_randomized(&t, &th, &mut rng), n);
    }

    #[test]
    fn r1_normal_forms(t in r1_term(), seed in any::<u64>()) {
        let th = TheorySpec::r1();
        let n = normalize(&t, &th);
        prop_assert!(is_normal_form(&n, &th));
        prop_assert_eq!(normalize(&n, &th), n.clone());
        prop_assert!(n.size() >= t.size());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        prop_assert_eq!(normalize_randomized(&t, &th, &mut rng), n);
    }

    #[test]
    fn compose_applies_in_order(t in r1_open_term(), x in r1_open_term(), y in r1_term(), z in r1_open_term()) {
        let sigma = Substitution::from_pairs([("X", x), ("Y", Term::var("Z"))]);
        let tau = Substitution::from_pairs([("Z", y), ("Y", z)]);
        prop_assert_eq!(sigma.compose(&tau).apply(&t), tau.apply(&sigma.apply(&t)));
    }

    #[test]
    fn cancellativity_and_root_conflict(s in r1_term(), t in r1_term(), u in r1_term()) {
        let th = TheorySpec::r1();
        let h = |s: &Term| Term::app("h", vec![s.clone()]);
        let f = |s: &Term, t: &Term| Term::app("f", vec![s.clone(), t.clone()]);
        prop_assert_eq!(joinable(&h(&s), &h(&t), &th), joinable(&s, &t, &th));
        prop_assert_eq!(
            joinable(&f(&s, &t), &f(&u, &t), &th),
            joinable(&s, &u, &th)
        );
        let (ns, nt, nu) = (normalize(&s, &th), normalize(&t, &th), normalize(&u, &th));
        let shape = nu == Term::constant("c")
            && ns == nt
            && (ns == Term::constant("a") || ns == Term::constant("b"));
        prop_assert_eq!(joinable(&h(&s), &f(&t, &u), &th), shape);
        if is_normal_form(&s, &th) {
            let a_or_b = s == Term::constant("a") || s == Term::constant("b");
            prop_assert_eq!(is_normal_form(&h(&s), &th), !a_or_b);
        }
    }

    #[test]
    fn snf_identities(seed in any::<u64>(), rows in 1usize..=4, cols in 1usize..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_poly_matrix(&mut rng, rows, cols, 3);
        let snf = smith_normal_form(&a);
        prop_assert_eq!(snf.check(&a), Ok(()));
        let d = snf.diagonal();
        for w in d.windows(2) {
            prop_assert!(w[0].divides(&w[1]));
        }
        let x0: Vec<_> = (0..cols).map(|_| uniflab_core::reductions::random::random_poly(&mut rng, 2)).collect();
        let b = a.mul_vec(&x0);
        let (sol, snf) = solve_system_snf(&a, &b).expect("consistent by construction");
        prop_assert_eq!(a.mul_vec(&sol.particular), b);
        prop_assert_eq!(sol.free_basis.len(), cols - snf.rank);
        for col in &sol.free_basis {
            prop_assert!(a.mul_vec(col).iter().all(num_traits::Zero::is_zero));
        }
    }

    #[test]
    fn rule_steps_decrease_the_measure(seed in any::<u64>(), r5 in any::<bool>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let th = if r5 { TheorySpec::r5() } else { TheorySpec::r1() };
        let p = random_syntactic_asym(&mut rng, th);
        let at = AsymTheory::of(p.theory.tag).unwrap();
        let mut state = remove_asymmetry(&standardize(&p, &mut FreshVars::new()).unwrap(), at);
        let mut steps = 0;
        while let StepResult::Progress(next, rule) = infer_step(&state, at) {
            prop_assert!(metric(&next) < metric(&state), "rule {} on {}", rule, state);
            state = next;
            steps += 1;
            prop_assert!(steps < 10_000);
        }
    }

    #[test]
    fn machine_language_matches_semantics(
        (width, m, words) in (1usize..=4).prop_flat_map(|w| {
            (Just(w), machine(w), prop::collection::vec(prop::collection::vec(0u32..(1 << w), 0..=4), 8))
        })
    ) {
        let dfa = EqAutomaton::build(m, width).unwrap();
        prop_assert!(dfa.is_total());
        for word in &words {
            let word: Vec<BitSymbol> = word.clone();
            prop_assert_eq!(dfa.accepts(&word), m.holds(&track_values(&word, width)), "{:?} on {:?}", m, word);
        }
    }

    #[test]
    fn encode_round_trip(values in prop::collection::vec(0u64..(1 << 20), 1..=6)) {
        let w = encode(&values);
        prop_assert!(w.last().is_none_or(|&s| s != 0));
        prop_assert_eq!(track_values(&w, values.len()), values);
    }

    #[test]
    fn elimination_keeps_the_row_space(seed in any::<u64>(), n in 3usize..=30) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p: Problem = random_acun_system(&mut rng, n, n.div_ceil(2));
        let sys = to_xor_system(&p).unwrap();
        let reduced = gaussian_eliminate(&sys);
        prop_assert_eq!(gaussian_eliminate(&reduced), reduced.clone());
        let (before, after) = (eq_rows(&sys), eq_rows(&reduced));
        let both: Vec<u128> = before.iter().chain(&after).copied().collect();
        prop_assert_eq!(rank(&before), rank(&after));
        prop_assert_eq!(rank(&both), rank(&before));
    }
}
