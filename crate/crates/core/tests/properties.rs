use num_rational::BigRational;
use proptest::prelude::*;
use thuemorse::algebra::{Algebra, Element, Mode, Ring};
use thuemorse::characters::{spread_char, spread_char_expanded, DEFAULT_CLASS_CAP};
use thuemorse::group::WreathRecursion;
use thuemorse::words::{free_reduce, gamma, is_freely_reduced, theta, Alphabet, GroupWord, Letter};

fn letter(q: usize) -> impl Strategy<Value = Letter> {
    (0..q, any::<bool>()).prop_map(|(i, inv)| if inv { Letter::inv(i) } else { Letter::gen(i) })
}

fn raw_word(q: usize, max: usize) -> impl Strategy<Value = GroupWord> {
    prop::collection::vec(letter(q), 0..=max).prop_map(GroupWord)
}

fn word(q: usize, max: usize) -> impl Strategy<Value = GroupWord> {
    raw_word(q, max).prop_map(|w| free_reduce(&w))
}

fn positive_word(q: usize, max: usize) -> impl Strategy<Value = GroupWord> {
    prop::collection::vec((0..q).prop_map(Letter::gen), 0..=max).prop_map(GroupWord)
}

fn alph(q: usize) -> Alphabet {
    Alphabet::new(q).unwrap()
}

fn algebra(q: usize, mode: Mode) -> Algebra {
    Algebra::new(alph(q), mode, Ring::Rationals)
}

/// Small random elements: up to three terms, coefficients in -3..=3.
fn element(q: usize, mode: Mode) -> impl Strategy<Value = Element> {
    let a = algebra(q, mode);
    let w = match mode {
        Mode::A => positive_word(q, 3).boxed(),
        Mode::B => word(q, 3).boxed(),
    };
    prop::collection::vec((w, -3i64..=3), 1..=3).prop_map(move |terms| {
        terms.into_iter().fold(Element::zero(), |acc, (w, c)| {
            let m = a.monomial(&w).unwrap();
            a.add(&acc, &a.scale(&m, &BigRational::from_integer(c.into())))
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn free_reduce_is_idempotent(w in raw_word(3, 12)) {
        let r = free_reduce(&w);
        prop_assert!(is_freely_reduced(&r));
        prop_assert_eq!(free_reduce(&r), r);
    }

    #[test]
    fn inverse_cancels(w in word(3, 10)) {
        prop_assert!(w.mul(&w.inverse()).is_empty());
        prop_assert_eq!(w.inverse().inverse(), w);
    }

    #[test]
    fn theta_is_multiplicative(u in word(3, 6), v in word(3, 6)) {
        let q = alph(3);
        let lhs = theta(&u.mul(&v), q).unwrap();
        let rhs = theta(&u, q).unwrap().mul(&theta(&v, q).unwrap());
        prop_assert_eq!(free_reduce(&lhs), free_reduce(&rhs));
    }

    #[test]
    fn gamma_composes(w in word(4, 8), a in -6i64..6, b in -6i64..6) {
        let q = alph(4);
        prop_assert_eq!(gamma(&gamma(&w, a, q), b, q), gamma(&w, a + b, q));
        prop_assert_eq!(gamma(&w, 4, q), w.clone());
        prop_assert_eq!(
            free_reduce(&theta(&gamma(&w, a, q), q).unwrap()),
            free_reduce(&gamma(&theta(&w, q).unwrap(), a, q))
        );
    }

    #[test]
    fn decompose_is_a_homomorphism(q in 2usize..=4, seed in any::<u64>()) {
        let r = WreathRecursion::thue_morse(alph(q));
        let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(seed);
        let g = thuemorse::verify::random_word(&mut rng, q, 8);
        let h = thuemorse::verify::random_word(&mut rng, q, 8);
        prop_assert_eq!(r.decompose(&g).unwrap().mul(&r.decompose(&h).unwrap()), r.decompose(&g.mul(&h)).unwrap());
    }

    #[test]
    fn action_is_a_right_action(g in word(3, 6), h in word(3, 6), v in prop::collection::vec(0usize..3, 0..5)) {
        let r = WreathRecursion::thue_morse(alph(3));
        prop_assert_eq!(r.act(&g.mul(&h), &v), r.act(&h, &r.act(&g, &v)));
        // sections compose along the action
        let lhs = free_reduce(&r.section(&g.mul(&h), &v));
        let rhs = r.section(&g, &v).mul(&r.section(&h, &r.act(&g, &v)));
        prop_assert_eq!(lhs, free_reduce(&rhs));
    }

    #[test]
    fn phi_is_a_ring_homomorphism(a in element(3, Mode::B), b in element(3, Mode::B)) {
        let alg = algebra(3, Mode::B);
        let (pa, pb) = (alg.phi(&a), alg.phi(&b));
        prop_assert_eq!(alg.phi(&alg.mul(&a, &b)), alg.matrix_mul(&pa, &pb));
        prop_assert_eq!(alg.phi(&alg.add(&a, &b)), alg.matrix_add(&pa, &pb));
    }

    #[test]
    fn star_is_an_involutive_antihomomorphism(a in element(2, Mode::B), b in element(2, Mode::B)) {
        let alg = algebra(2, Mode::B);
        let s = |x: &Element| alg.star(x).unwrap();
        prop_assert_eq!(s(&s(&a)), a.clone());
        prop_assert_eq!(s(&alg.mul(&a, &b)), alg.mul(&s(&b), &s(&a)));
        // phi commutes with star: conjugate transpose
        let m = alg.phi(&a);
        let ms = alg.phi(&s(&a));
        for i in 0..2 {
            for j in 0..2 {
                prop_assert_eq!(ms.get(i, j), &s(m.get(j, i)));
            }
        }
    }

    #[test]
    fn display_round_trips(a in element(3, Mode::B)) {
        let alg = algebra(3, Mode::B);
        prop_assert_eq!(alg.parse(&a.to_string()).unwrap(), a.clone());
        prop_assert_eq!(alg.from_json(&alg.to_json(&a)).unwrap(), a);
    }

    #[test]
    fn word_display_round_trips(w in word(4, 10)) {
        prop_assert_eq!(GroupWord::parse(&w.to_string()).unwrap(), w);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn spread_is_scalar_blind_and_in_image(a in element(2, Mode::A), c in 1i64..7, neg in any::<bool>()) {
        let alg = algebra(2, Mode::A);
        let c = if neg { -c } else { c };
        let v = spread_char(&alg, &a, DEFAULT_CLASS_CAP).unwrap();
        prop_assert!(v.value.in_image(2));
        let scaled = alg.scale(&a, &BigRational::from_integer(c.into()));
        prop_assert_eq!(spread_char(&alg, &scaled, DEFAULT_CLASS_CAP).unwrap().value, v.value);
    }

    #[test]
    fn spread_survives_forced_expansion(a in element(3, Mode::A)) {
        let alg = algebra(3, Mode::A);
        prop_assert_eq!(
            spread_char(&alg, &a, DEFAULT_CLASS_CAP).unwrap().value,
            spread_char_expanded(&alg, &a, DEFAULT_CLASS_CAP).unwrap().value
        );
    }

    #[test]
    fn monomials_have_spread_one(w in word(3, 8)) {
        let alg = algebra(3, Mode::B);
        let m = alg.monomial(&w).unwrap();
        prop_assert_eq!(spread_char(&alg, &m, DEFAULT_CLASS_CAP).unwrap().value, thuemorse::characters::ExactQ::one());
        prop_assert_eq!(spread_char_expanded(&alg, &m, DEFAULT_CLASS_CAP).unwrap().value, thuemorse::characters::ExactQ::one());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn gamma_invariance_on_family(pick in 0usize..98, shift in 1i64..2) {
        let alg = algebra(2, Mode::A);
        let mut pool = alg.omega(0, 2, 1000).unwrap();
        pool.extend(alg.omega(1, 2, 1000).unwrap());
        let s = &pool[pick % pool.len()];
        prop_assert_eq!(
            spread_char(&alg, &alg.gamma(s, shift), DEFAULT_CLASS_CAP).unwrap().value,
            spread_char(&alg, s, DEFAULT_CLASS_CAP).unwrap().value
        );
    }
}
