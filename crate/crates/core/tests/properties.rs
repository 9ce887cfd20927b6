use courant::exactmath::{parse_scalar, rat, Monomial, QMatrix};
use courant::exterior::blades;
use courant::kerforms::{kerform_basis, leibniz_defect, KerForm};
use courant::structure::{load_spec, spec_to_json, Sampler};
use courant::twist::{c_twist, make_standard, so3_plus_split, twist_bracket};
use courant::{AlgebroidSpec, Multivector, Scalar, Section};
use proptest::prelude::*;

/// Polynomials in `x1, x2` and, when `three`, `x3`.
fn scalar_in(three: bool) -> impl Strategy<Value = Scalar> {
    let top = if three { 2u32 } else { 1 };
    proptest::collection::vec(((0u32..3, 0u32..3, 0u32..top), -6i64..=6, 1i64..=4), 0..4).prop_map(|terms| {
        Scalar::from_terms(
            terms
                .into_iter()
                .map(|((a, b, c), n, d)| (Monomial::new(vec![a, b, c]), rat(n, d))),
        )
    })
}

fn scalar() -> impl Strategy<Value = Scalar> {
    scalar_in(true)
}

fn form(rank: usize, p: usize) -> impl Strategy<Value = Multivector> {
    let n = blades(rank, p).len();
    proptest::collection::vec(-3i64..=3, n).prop_map(move |cs| {
        let mut m = Multivector::zero();
        for (b, c) in blades(rank, p).into_iter().zip(cs) {
            m.add_term(b, Scalar::int(c));
        }
        m
    })
}

fn section(rank: usize) -> impl Strategy<Value = Section> {
    proptest::collection::vec(scalar_in(false), rank).prop_map(Section::new)
}

fn ctwist4() -> AlgebroidSpec {
    c_twist(4, &Multivector::blade(0b1110, Scalar::var(0))).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn scalars_form_a_ring(a in scalar(), b in scalar(), c in scalar()) {
        prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn partial_derivatives_obey_leibniz(a in scalar(), b in scalar(), v in 0usize..3) {
        let lhs = (&a * &b).partial_derivative(v);
        let rhs = &(&a.partial_derivative(v) * &b) + &(&a * &b.partial_derivative(v));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn scalars_print_and_parse_back(a in scalar()) {
        prop_assert_eq!(parse_scalar(&a.to_string()).unwrap(), a);
    }

    #[test]
    fn wedge_is_associative_and_graded(p in 0usize..3, q in 0usize..3, seed in any::<u64>()) {
        let mut s = Sampler::new(seed, 0);
        let a = s.constant_form(5, p);
        let b = s.constant_form(5, q);
        let c = s.constant_form(5, 1);
        prop_assert_eq!(a.wedge(&b).wedge(&c), a.wedge(&b.wedge(&c)));
        let swapped = b.wedge(&a);
        let expected = if (p * q) % 2 == 0 { swapped } else { swapped.scale(&Scalar::int(-1)) };
        prop_assert_eq!(a.wedge(&b), expected);
    }

    #[test]
    fn odd_forms_square_to_zero(a in form(5, 1), b in form(5, 3)) {
        prop_assert!(a.wedge(&a).is_zero());
        prop_assert!(b.wedge(&b).is_zero());
    }

    #[test]
    fn bracket_obeys_the_right_leibniz_rule(x in section(4), y in section(4), f in scalar_in(false)) {
        let s = make_standard(2).unwrap();
        let lhs = s.bracket(&x, &y.scale(&f));
        let rhs = s.bracket(&x, &y).scale(&f).add(&y.scale(&s.anchor_derivative(&x, &f)));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn twisted_specs_round_trip(seed in any::<u64>()) {
        let base = so3_plus_split(2);
        let mut s = Sampler::new(seed, 0);
        let b = KerForm::certify(&base, 3, s.constant_form(5, 3)).unwrap();
        let t = twist_bracket(&base, &b).unwrap();
        prop_assert_eq!(load_spec(&spec_to_json(&t)).unwrap(), t);
    }

    #[test]
    fn d_is_a_derivation_on_ker_forms(seed in any::<u64>(), p in 0usize..2, q in 1usize..3) {
        let s = ctwist4();
        let mut sampler = Sampler::new(seed, 1);
        let mut pick = |deg: usize| {
            if deg == 0 {
                return KerForm::scalar(sampler.scalar(4));
            }
            let basis = kerform_basis(&s, deg, Some(1)).unwrap();
            let mut m = Multivector::zero();
            for f in basis.iter().take(12) {
                m = m.add(&f.form().scale(&Scalar::constant(sampler.rational())));
            }
            KerForm::certify(&s, deg, m).unwrap()
        };
        let a = pick(p);
        let b = pick(q);
        prop_assert!(leibniz_defect(&s, &a, &b).unwrap().is_zero());
    }

    #[test]
    fn inverse_is_two_sided(entries in proptest::collection::vec(-4i64..=4, 16)) {
        let m = QMatrix::from_fn(4, 4, |i, j| rat(entries[4 * i + j], 1));
        if let Some(inv) = m.inverse() {
            let id = QMatrix::from_fn(4, 4, |i, j| rat(i64::from(i == j), 1));
            prop_assert_eq!(m.mul(&inv), id.clone());
            prop_assert_eq!(inv.mul(&m), id);
        } else {
            prop_assert!(m.rank() < 4);
        }
    }
}
