use dnls_core::{antiderivative, twist_substitute, DiffPoly, Direction, Factor, GaussianRational, Monomial};
use proptest::prelude::*;

fn coeff() -> impl Strategy<Value = GaussianRational> {
    (-6i64..=6, 1i64..=4, -6i64..=6, 1i64..=4).prop_map(|(a, b, c, d)| GaussianRational::from_parts(a, b, c, d))
}

fn factor() -> impl Strategy<Value = Factor> {
    (any::<bool>(), 0u32..4).prop_map(|(is_q, k)| if is_q { Factor::q(k) } else { Factor::r(k) })
}

fn poly() -> impl Strategy<Value = DiffPoly> {
    prop::collection::vec((prop::collection::vec(factor(), 0..4), coeff()), 0..5)
        .prop_map(|terms| DiffPoly::from_terms(terms.into_iter().map(|(f, c)| (Monomial::new(f), c))))
}

fn balanced_poly() -> impl Strategy<Value = DiffPoly> {
    prop::collection::vec((0u32..3, 0usize..2, prop::collection::vec(0u32..3, 4), coeff()), 1..4).prop_map(|terms| {
        DiffPoly::from_terms(terms.into_iter().map(|(d0, extra, ords, c)| {
            let mut f = vec![Factor::q(d0)];
            for i in 0..extra {
                f.push(Factor::q(ords[2 * i]));
                f.push(Factor::r(ords[2 * i + 1]));
            }
            (Monomial::new(f), c)
        }))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(a in poly(), b in poly(), c in poly()) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn dx_is_a_derivation(a in poly(), b in poly()) {
        prop_assert_eq!((&a * &b).dx(), &(&a.dx() * &b) + &(&a * &b.dx()));
    }

    #[test]
    fn conj_is_an_involutive_ring_map(a in poly(), b in poly()) {
        prop_assert_eq!(a.conj().conj(), a.clone());
        prop_assert_eq!((&a * &b).conj(), &a.conj() * &b.conj());
        prop_assert_eq!(a.dx().conj(), a.conj().dx());
    }

    #[test]
    fn order_is_additive_and_dx_raises_by_two(a in poly(), b in poly()) {
        for (ma, _) in a.terms() {
            for (mb, _) in b.terms() {
                prop_assert_eq!(ma.mul(mb).order(), ma.order() + mb.order());
            }
        }
        for (m, _) in a.terms() {
            let single = DiffPoly::monomial(m.clone(), GaussianRational::one());
            for (d, _) in single.dx().terms() {
                prop_assert_eq!(d.order(), m.order() + 2);
            }
        }
    }

    #[test]
    fn text_and_json_round_trip(a in poly()) {
        let text = a.to_string();
        let back: DiffPoly = text.parse().unwrap();
        prop_assert_eq!(back.to_string(), text);
        let json: DiffPoly = serde_json::from_value(a.to_json()).unwrap();
        prop_assert_eq!(json, a);
    }

    #[test]
    fn antiderivative_inverts_dx(a in poly()) {
        // constants are invisible to dx
        let a = a.filter(|m| m.degree() > 0);
        let p = antiderivative(&a.dx()).unwrap();
        prop_assert_eq!(p.dx(), a.dx());
        prop_assert_eq!(p, a);
    }

    #[test]
    fn twist_directions_are_inverse(p in balanced_poly()) {
        let there = twist_substitute(&p, Direction::Plus).unwrap();
        prop_assert_eq!(twist_substitute(&there, Direction::Minus).unwrap(), p);
    }
}
