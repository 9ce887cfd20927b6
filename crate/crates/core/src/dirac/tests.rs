use super::*;
use crate::kerforms::KerForm;
use crate::structure::{corrupt_bracket, Sampler};
use crate::twist::{c_twist, make_point, make_standard, split_point, twist_bracket};
use crate::Multivector;
use proptest::prelude::*;

fn opts() -> CheckOptions {
    CheckOptions::default()
}

fn sec(spec: &AlgebroidSpec, terms: &[(usize, Scalar)]) -> Section {
    let mut s = Section::zero(spec.rank());
    for (i, c) in terms {
        s = s.add(&spec.basis(*i).scale(c));
    }
    s
}

/// Graph of `b = x1 dx1∧dx2` in the standard algebroid over two variables.
fn closed_graph(s: &AlgebroidSpec) -> Subbundle {
    let x1 = Scalar::var(0);
    Subbundle::new(
        s,
        vec![
            sec(s, &[(0, Scalar::one()), (3, x1.clone())]),
            sec(s, &[(1, Scalar::one()), (2, -x1)]),
        ],
    )
    .unwrap()
}

/// Graph of `b = x3 dx1∧dx2` over three variables; `db ≠ 0`.
fn open_graph(s: &AlgebroidSpec) -> Subbundle {
    let x3 = Scalar::var(2);
    Subbundle::new(
        s,
        vec![
            sec(s, &[(0, Scalar::one()), (4, x3.clone())]),
            sec(s, &[(1, Scalar::one()), (3, -x3)]),
            s.basis(2),
        ],
    )
    .unwrap()
}

#[test]
fn standard_examples() {
    let s = make_standard(2).unwrap();
    let cot = Subbundle::coordinate(&s, &[2, 3]).unwrap();
    assert!(is_lagrangean(&s, &cot).unwrap());
    assert!(integrability_defect(&s, &cot).unwrap().is_empty());
    let diag = Subbundle::new(&s, vec![sec(&s, &[(0, Scalar::one()), (2, Scalar::one())])]).unwrap();
    assert!(!is_isotropic(&s, &diag));
    assert_eq!(s.pairing(&diag.generators()[0], &diag.generators()[0]), Scalar::int(2));
    let found: Vec<_> = search_coordinate_dirac(&s)
        .unwrap()
        .iter()
        .filter_map(coordinate_blade)
        .collect();
    assert!(found.contains(&0b1100) && found.contains(&0b0011), "{found:?}");
}

#[test]
fn closed_graph_is_dirac() {
    let s = make_standard(2).unwrap();
    let l = closed_graph(&s);
    assert!(is_lagrangean(&s, &l).unwrap());
    assert!(check_dirac(&s, &l).unwrap().passed());
    let induced = induced_htla(&s, &l, &opts()).unwrap();
    assert!(induced.report.passed(), "{}", induced.report.to_text());
    let lie = induced.spec.unwrap();
    assert_eq!(lie.kind(), Kind::LieAlgebroid);
    // the b-field transform of the tangent bundle: abelian, identity anchor
    assert!(lie.parts().brackets.is_empty());
    assert_eq!(lie.anchor_row(0), &[Scalar::one(), Scalar::zero()]);
    assert_eq!(lie.anchor_row(1), &[Scalar::zero(), Scalar::one()]);
}

#[test]
fn open_graph_fails_integrability() {
    let s = make_standard(3).unwrap();
    let l = open_graph(&s);
    assert!(is_lagrangean(&s, &l).unwrap());
    let defects = integrability_defect(&s, &l).unwrap();
    assert!(!defects.is_empty());
    // [∂3, ∂1 + x3 dx2] = dx2, which ι_{∂3}ι_{∂1} db also gives
    let w = defects.iter().find(|w| w.left == 2 && w.right == 0).unwrap();
    assert_eq!(w.residual, s.basis(4).to_strings());
    let report = check_dirac(&s, &l).unwrap();
    assert_eq!(report.failed_axioms(), vec!["integrable"]);
    assert!(report.get("integrable").unwrap().witness.is_some());
    assert!(induced_htla(&s, &l, &opts()).is_err());
}

#[test]
fn ctwist_cotangent() {
    let s = c_twist(4, &Multivector::blade(0b1110, Scalar::var(0))).unwrap();
    let cot = Subbundle::coordinate(&s, &[4, 5, 6, 7]).unwrap();
    assert!(check_dirac(&s, &cot).unwrap().passed());
    let induced = induced_htla(&s, &cot, &opts()).unwrap();
    assert!(induced.report.passed(), "{}", induced.report.to_text());
    let lie = induced.spec.unwrap();
    assert_eq!(lie.kind(), Kind::HTwistedLieAlgebroid);
    assert!(lie.parts().brackets.is_empty());
    // H̃ pairs cotangent arguments to zero
    assert!(lie.vector_twist().unwrap().is_empty());
    let tangent = Subbundle::coordinate(&s, &[0, 1, 2, 3]).unwrap();
    assert!(!check_dirac(&s, &tangent).unwrap().passed());
}

#[test]
fn non_split_signature_is_rejected() {
    let s = split_point(5);
    let l = Subbundle::coordinate(&s, &[0, 3]).unwrap();
    assert!(matches!(is_lagrangean(&s, &l), Err(Error::Invariant { .. })));
    assert!(search_coordinate_dirac(&s).unwrap().is_empty());
}

#[test]
fn diagonal_split_point_has_no_coordinate_dirac() {
    let s = split_point(4);
    let l = Subbundle::coordinate(&s, &[0, 1]).unwrap();
    assert!(!is_isotropic(&s, &l));
    // every basis vector of a diagonal gram is non-null
    assert!(search_coordinate_dirac(&s).unwrap().is_empty());
}

fn hyperbolic(half: usize) -> SMatrix {
    SMatrix::from_fn(2 * half, 2 * half, |i, j| {
        if i.abs_diff(j) == half {
            Scalar::one()
        } else {
            Scalar::zero()
        }
    })
}

#[test]
fn coordinate_search_matches_the_table() {
    let base = make_point(hyperbolic(2), BTreeMap::new(), None).unwrap();
    for seed in 0..10 {
        let mut sampler = Sampler::new(seed, 0);
        let b = KerForm::certify(&base, 3, sampler.constant_form(4, 3)).unwrap();
        let s = twist_bracket(&base, &b).unwrap();
        let found: Vec<Blade> = search_coordinate_dirac(&s)
            .unwrap()
            .iter()
            .filter_map(coordinate_blade)
            .collect();
        let table = &s.parts().brackets;
        let expected: Vec<Blade> = blades(4, 2)
            .into_iter()
            .filter(|&bl| {
                let ix = indices(bl);
                let iso = ix.iter().all(|&i| ix.iter().all(|&j| s.gram()[(i, j)].is_zero()));
                let closed = ix.iter().all(|&i| {
                    ix.iter().all(|&j| {
                        table
                            .get(&(i, j))
                            .is_none_or(|v| (0..4).all(|k| ix.contains(&k) || v[k].is_zero()))
                    })
                });
                iso && closed
            })
            .collect();
        assert_eq!(found, expected, "seed {seed}");
    }
}

/// A point algebroid of rank `2h` with a Lagrangean `L = span{e_i + e_{i+h}}` kept
/// integrable by a twist `B` with no `Λ³W` component, `W = span{e_i − e_{i+h}}`.
fn twisted_with_dirac(seed: u64, h: usize) -> (AlgebroidSpec, Subbundle) {
    let base = split_point(2 * h);
    let u: Vec<Section> = (0..h).map(|i| base.basis(i).add(&base.basis(i + h))).collect();
    let w: Vec<Section> = (0..h).map(|i| base.basis(i).sub(&base.basis(i + h))).collect();
    let mut sampler = Sampler::new(seed, 0);
    let mut b = Multivector::zero();
    let both: Vec<&Section> = u.iter().chain(&w).collect();
    for bl in blades(2 * h, 3) {
        let ix = indices(bl);
        if ix.iter().all(|&i| i >= h) {
            continue;
        }
        let args: Vec<Section> = ix.iter().map(|&i| both[i].clone()).collect();
        b = b.add(&Multivector::wedge_sections(&args).scale(&Scalar::constant(sampler.rational())));
    }
    let s = twist_bracket(&base, &KerForm::certify(&base, 3, b).unwrap()).unwrap();
    let l = Subbundle::new(&s, u).unwrap();
    (s, l)
}

#[test]
fn twisted_dirac_structures_induce_twisted_lie_algebroids() {
    let mut nonzero = 0;
    for (seed, h) in (0..6).flat_map(|seed| [(seed, 3), (seed, 4)]) {
        let (s, l) = twisted_with_dirac(seed, h);
        assert!(check_dirac(&s, &l).unwrap().passed(), "seed {seed}");
        let induced = induced_htla(&s, &l, &opts()).unwrap();
        assert!(induced.report.passed(), "seed {seed}: {}", induced.report.to_text());
        let lie = induced.spec.unwrap();
        if lie.vector_twist().is_some_and(|v| !v.is_empty()) {
            nonzero += 1;
            let bad = corrupt_bracket(&lie).unwrap();
            let r = check_axioms(&bad, Suite::LieRinehart, &opts()).unwrap();
            let failed = r.failed_axioms();
            assert!(failed.contains(&"jacobi") || failed.contains(&"h-closed"), "{failed:?}");
        }
    }
    assert!(nonzero > 0, "every restricted twist vanished");
}

#[test]
fn no_constant_block_is_undecidable() {
    let s = make_standard(1).unwrap();
    let x = Scalar::var(0);
    let l = Subbundle::new(&s, vec![sec(&s, &[(0, x.clone()), (1, x)])]).unwrap();
    assert!(!l.has_constant_block());
    assert!(matches!(integrability_defect(&s, &l), Err(Error::Undecidable(_))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn isotropy_ignores_the_choice_of_generators(a in -4i64..=4, b in 1i64..=3, open in any::<bool>()) {
        let s = make_standard(2).unwrap();
        let l = closed_graph(&s);
        let g = l.generators();
        let g1 = if open { g[1].add(&s.basis(0)) } else { g[1].clone() };
        // unit-determinant change [[b, a], [0, 1/b]]
        let changed = vec![
            g[0].scale(&Scalar::int(b)).add(&g1.scale(&Scalar::int(a))),
            g1.scale(&Scalar::ratio(1, b)),
        ];
        let before = Subbundle::new(&s, vec![g[0].clone(), g1]).unwrap();
        let after = Subbundle::new(&s, changed).unwrap();
        prop_assert_eq!(is_isotropic(&s, &before), is_isotropic(&s, &after));
        prop_assert_eq!(is_isotropic(&s, &after), !open);
    }
}
