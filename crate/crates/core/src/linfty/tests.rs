use super::*;
use crate::kerforms::KerForm;
use crate::structure::{check_axioms, CheckOptions, Suite};
use crate::twist::{c_twist, make_standard, so3, so3_plus_split, split_point, twist_bracket};
use crate::Multivector;
use proptest::prelude::*;

fn opts() -> LInftyOptions {
    LInftyOptions::default()
}

fn assert_all_pass(data: &LInftyData) {
    let report = verify_linfty(data, &opts());
    assert!(report.passed(), "{}", report.to_text());
}

fn twisted_point(seed: u64) -> AlgebroidSpec {
    let base = so3_plus_split(2);
    let mut sampler = Sampler::new(seed, 0);
    for _ in 0..50 {
        let b = KerForm::certify(&base, 3, sampler.constant_form(5, 3)).unwrap();
        let t = twist_bracket(&base, &b).unwrap();
        if t.twist().is_some_and(|h| !h.is_zero()) {
            return t;
        }
    }
    panic!("no twisted point spec with nonzero H for seed {seed}");
}

fn ctwist4() -> AlgebroidSpec {
    c_twist(4, &Multivector::blade(0b1110, Scalar::var(0))).unwrap()
}

#[test]
fn so3_classical() {
    let data = build_classical(&so3()).unwrap();
    assert_all_pass(&data);
    let e = data.v0_basis().to_vec();
    // ⟨[e1,e2],e3⟩ = 1 for each of the three cyclic terms
    assert_eq!(data.l3(&e[0], &e[1], &e[2]), V1::Function(Scalar::ratio(-1, 2)));
    let literal = data.clone().with_l3(L3Variant::Literal);
    assert_eq!(literal.l3(&e[0], &e[1], &e[2]), V1::Function(Scalar::ratio(1, 2)));
    // over a point ∂ vanishes, so the sign of l3 is invisible
    assert_all_pass(&literal);
}

#[test]
fn standard_classical_values() {
    let s = make_standard(2).unwrap();
    let data = build_classical(&s).unwrap();
    let x1 = V1::Function(Scalar::var(0));
    assert_eq!(data.differential(&x1), s.basis(2));
    assert_eq!(data.act(&s.basis(0), &x1), V1::Function(Scalar::ratio(1, 2)));
    assert_all_pass(&data);
}

#[test]
fn literal_l3_fails_over_a_base() {
    let data = build_classical(&make_standard(2).unwrap())
        .unwrap()
        .with_l3(L3Variant::Literal);
    let report = verify_linfty(&data, &opts());
    assert!(report.failed_axioms().contains(&"n=3"), "{}", report.to_text());
    let data = build_twisted(&ctwist4()).unwrap().with_l3(L3Variant::Literal);
    assert!(verify_linfty(&data, &opts()).failed_axioms().contains(&"n=3"));
}

#[test]
fn classical_rejects_twist() {
    assert!(matches!(build_classical(&ctwist4()), Err(Error::Inapplicable { .. })));
    assert!(matches!(build_twisted(&so3()), Err(Error::MissingTwist)));
}

#[test]
fn twisted_points_pass() {
    for seed in 0..3 {
        let spec = twisted_point(seed);
        assert!(check_axioms(&spec, Suite::HTwisted, &CheckOptions::default())
            .unwrap()
            .passed());
        assert_all_pass(&build_twisted(&spec).unwrap());
    }
}

#[test]
fn zeroed_l3_is_caught() {
    let data = build_twisted(&twisted_point(0)).unwrap().with_l3(L3Variant::Zero);
    let report = verify_linfty(&data, &opts());
    let n3 = report.get("n=3").unwrap();
    assert!(!n3.passed());
    assert!(n3.witness.is_some());
}

#[test]
fn n4_terms_are_not_vacuous() {
    let data = build_twisted(&twisted_point(1)).unwrap();
    let e = data.v0_basis().to_vec();
    let mut seen = false;
    for ix in increasing(5, 4) {
        let x = [&e[ix[0]], &e[ix[1]], &e[ix[2]], &e[ix[3]]];
        let (inner, outer) = data.n4_parts(x);
        assert_eq!(inner, outer);
        if !inner.is_zero() {
            // the opposite relative sign would need both groups to vanish
            assert!(!inner.add(&outer).is_zero());
            seen = true;
        }
    }
    assert!(seen, "every (n=4) group vanished");
}

#[test]
fn ctwist_data() {
    let spec = ctwist4();
    let data = build_twisted(&spec).unwrap();
    let l = data.l3(&spec.basis(0), &spec.basis(1), &spec.basis(2));
    let V1::Section(s) = l else {
        panic!("twisted l3 lands in sections")
    };
    assert!(!s[7].is_zero(), "no dx4 component in {s:?}");
    assert_all_pass(&data);
}

#[test]
fn abelian_twists_with_vanishing_h() {
    let base = split_point(4);
    for seed in 0..50 {
        let mut sampler = Sampler::new(seed, 0);
        let b = KerForm::certify(&base, 3, sampler.constant_form(4, 3)).unwrap();
        let spec = twist_bracket(&base, &b).unwrap().with_zero_twist();
        let data = build_twisted(&spec).unwrap();
        let e = data.v0_basis().to_vec();
        assert!(data.l3(&e[0], &e[1], &e[2]).is_zero());
        let report = verify_linfty(&data, &LInftyOptions { seed, ..opts() });
        assert!(report.passed(), "seed {seed}: {}", report.to_text());
    }
}

fn point_section() -> impl Strategy<Value = Section> {
    prop::collection::vec(-3i64..=3, 5).prop_map(|v| v.into_iter().map(Scalar::int).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn l2_is_skew(seed in 0u64..1000) {
        let spec = ctwist4();
        let data = build_twisted(&spec).unwrap();
        let mut s = Sampler::new(seed, 1);
        let (a, b) = (s.section(8, 4), s.section(8, 4));
        prop_assert!(data.l2(&a, &a).is_zero());
        prop_assert_eq!(data.l2(&a, &b), data.l2(&b, &a).neg());
    }

    #[test]
    fn l3_is_alternating(a in point_section(), b in point_section(), c in point_section()) {
        let data = build_twisted(&twisted_point(2)).unwrap();
        let abc = data.l3(&a, &b, &c);
        prop_assert_eq!(abc.scale(&Scalar::int(-1)), data.l3(&b, &a, &c));
        prop_assert_eq!(abc.scale(&Scalar::int(-1)), data.l3(&a, &c, &b));
        prop_assert!(data.l3(&a, &a, &c).is_zero());
    }
}
