//! Constructors: the standard `T⊕T*` algebroid, point algebras, twists by a
//! ker-ρ three-form `B`, base-form pullbacks and the exact `C`-twist family.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::exactmath::{SMatrix, Scalar};
use crate::exterior::{blades, indices, wedge_sign, Multivector};
use crate::kerforms::{covariant_derivative, insertion, KerForm, SplitForm};
use crate::section::Section;
use crate::structure::{AlgebroidSpec, BaseRing, Kind, Sampler, SpecParts};

/// Basis names `d1..dn, dx1..dxn` of the standard algebroid.
pub fn standard_basis_names(n: usize) -> Vec<String> {
    (1..=n)
        .map(|i| format!("d{i}"))
        .chain((1..=n).map(|i| format!("dx{i}")))
        .collect()
}

/// `TM ⊕ T*M` over `ℚ[x1..xn]` with `⟨X+ξ, Y+η⟩ = η(X) + ξ(Y)` and the Dorfman
/// bracket. All basis brackets vanish.
pub fn make_standard(n: usize) -> Result<AlgebroidSpec> {
    if n == 0 {
        return Err(Error::invariant("standard dimension", "n must be at least 1"));
    }
    let r = 2 * n;
    let gram = SMatrix::from_fn(r, r, |i, j| {
        if (i + n == j) || (j + n == i) {
            Scalar::one()
        } else {
            Scalar::zero()
        }
    });
    let mut parts = SpecParts::new(BaseRing::Polynomial { vars: n }, gram, Kind::Courant);
    parts.anchor = SMatrix::from_fn(r, n, |i, j| if i == j { Scalar::one() } else { Scalar::zero() });
    parts.basis_names = Some(standard_basis_names(n));
    AlgebroidSpec::new(parts)
}

/// A spec over a point from a constant gram matrix and a bracket table.
/// Missing mirrored entries are filled in by skewness; a non-skew table is rejected.
pub fn make_point(
    gram: SMatrix,
    brackets: BTreeMap<(usize, usize), Section>,
    twist: Option<Multivector>,
) -> Result<AlgebroidSpec> {
    let mut full = brackets.clone();
    for (&(i, j), s) in &brackets {
        if i == j && !s.is_zero() {
            return Err(Error::invariant(
                "skew bracket over a point",
                format!("[e{},e{}] must vanish", i + 1, i + 1),
            ));
        }
        match brackets.get(&(j, i)) {
            Some(t) if t.add(s).is_zero() => {}
            Some(_) => {
                return Err(Error::invariant(
                    "skew bracket over a point",
                    format!("[e{},e{}] is not minus [e{},e{}]", i + 1, j + 1, j + 1, i + 1),
                ))
            }
            None => {
                full.insert((j, i), s.neg());
            }
        }
    }
    let kind = if twist.is_some() { Kind::HTwisted } else { Kind::Courant };
    let mut parts = SpecParts::new(BaseRing::Point, gram, kind);
    parts.brackets = full;
    parts.twist = twist;
    AlgebroidSpec::new(parts)
}

fn diagonal(entries: &[i64]) -> SMatrix {
    SMatrix::from_fn(entries.len(), entries.len(), |i, j| {
        if i == j {
            Scalar::int(entries[i])
        } else {
            Scalar::zero()
        }
    })
}

fn int_section(coeffs: &[i64]) -> Section {
    coeffs.iter().map(|&c| Scalar::int(c)).collect()
}

/// `so(3)` with the identity form and `[e1,e2] = e3` cyclically.
pub fn so3() -> AlgebroidSpec {
    let mut b = BTreeMap::new();
    b.insert((0, 1), int_section(&[0, 0, 1]));
    b.insert((1, 2), int_section(&[1, 0, 0]));
    b.insert((2, 0), int_section(&[0, 1, 0]));
    make_point(diagonal(&[1, 1, 1]), b, None).expect("so(3) table is valid")
}

/// Abelian point spec with split diagonal form `diag(1,…,1,−1,…,−1)`,
/// the extra `+1` going first for odd rank.
pub fn split_point(rank: usize) -> AlgebroidSpec {
    let plus = rank.div_ceil(2);
    let diag: Vec<i64> = (0..rank).map(|i| if i < plus { 1 } else { -1 }).collect();
    make_point(diagonal(&diag), BTreeMap::new(), None).expect("split table is valid")
}

/// de Rham differential of a base form stored as a multivector on `dx1..dxn`.
pub fn de_rham(omega: &Multivector) -> Multivector {
    let mut out = Multivector::zero();
    for (b, c) in omega.terms() {
        for j in 0..c.var_span() {
            let d = c.partial_derivative(j);
            let s = wedge_sign(1 << j, b);
            if d.is_zero() || s == 0 {
                continue;
            }
            out.add_term(b | (1 << j), if s > 0 { d } else { -d });
        }
    }
    out
}

/// `Λ^p ρ*` of a base form; certified since `im ρ* ⊂ ker ρ` on valid specs.
pub fn pullback(spec: &AlgebroidSpec, omega: &Multivector, p: usize) -> Result<KerForm> {
    if omega.is_zero() {
        return KerForm::certify(spec, p, Multivector::zero());
    }
    if spec.ring().is_point() {
        return Err(Error::invariant(
            "one-forms over a point",
            "a point base has no nonzero forms",
        ));
    }
    if omega.index_span() > spec.nvars() {
        return Err(Error::Degree("base form index beyond the base dimension".into()));
    }
    let n = spec.nvars();
    let columns: Vec<Section> = (0..n)
        .map(|j| {
            let mut xi = vec![Scalar::zero(); n];
            xi[j] = Scalar::one();
            spec.rho_star(&xi)
        })
        .collect::<Result<_>>()?;
    let image = omega.apply_outer(|j| {
        columns[j]
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (k, c.clone()))
            .collect()
    });
    KerForm::certify(spec, p, image)
}

pub fn pullback_4form(spec: &AlgebroidSpec, h: &Multivector) -> Result<KerForm> {
    pullback(spec, h, 4)
}

/// `D(ρ*ω) − ρ*(dω)`.
pub fn pullback_lemma_defect(spec: &AlgebroidSpec, omega: &Multivector, p: usize) -> Result<KerForm> {
    let lhs = covariant_derivative(spec, pullback(spec, omega, p)?.form(), p)?;
    let rhs = pullback(spec, &de_rham(omega), p + 1)?;
    KerForm::uncertified(p + 1, lhs.sub(rhs.form()))
}

fn require_three_form(b: &KerForm) -> Result<()> {
    if b.degree() != 3 {
        return Err(Error::Degree(format!("B must be a 3-form, got degree {}", b.degree())));
    }
    if !b.is_certified() {
        return Err(Error::NotInKernel("B is not certified".into()));
    }
    Ok(())
}

/// `T_B α = −ι_{B̃} α`, the change of `D` when `B̃` is added to the bracket.
pub fn torsion_term(spec0: &AlgebroidSpec, split_b: &SplitForm, alpha: &Multivector, p: usize) -> Result<Multivector> {
    Ok(insertion(spec0, 2, |s| split_b.apply_basis(s), alpha, p)?.neg())
}

/// The four-form whose splitting is the cyclic square `B̃²`,
/// assembled from pairings `⟨B̃(a,b), B̃(c,d)⟩`.
pub fn b_squared(spec0: &AlgebroidSpec, b: &KerForm) -> Result<Multivector> {
    require_three_form(b)?;
    let split = SplitForm::from_form(spec0, 3, b.form())?;
    let r = spec0.rank();
    let mut cache = BTreeMap::new();
    let mut value = |x: usize, y: usize| -> Section {
        cache
            .entry((x, y))
            .or_insert_with(|| split.apply_basis(&[x, y]))
            .clone()
    };
    let mut low = Multivector::zero();
    for set in blades(r, 4) {
        let i = indices(set);
        let (a, bb, c, d) = (i[0], i[1], i[2], i[3]);
        let q = |s: &Section, t: &Section| spec0.pairing(s, t);
        let total =
            &(&q(&value(a, bb), &value(c, d)) + &q(&value(bb, c), &value(a, d))) + &q(&value(c, a), &value(bb, d));
        low.add_term(set, -total);
    }
    spec0.raise(&low)
}

/// `H = D₀B + B̃²`, written through the cyclic square as a four-form.
pub fn curvature_h(spec0: &AlgebroidSpec, b: &KerForm) -> Result<KerForm> {
    require_three_form(b)?;
    let d0b = covariant_derivative(spec0, b.form(), 3)?;
    let h = d0b.add(&b_squared(spec0, b)?);
    KerForm::certify(spec0, 4, h)
}

/// The bracket `[φ,ψ]_B = [φ,ψ]₀ + B̃(φ,ψ)` with twist `curvature_h`.
pub fn twist_bracket(spec0: &AlgebroidSpec, b: &KerForm) -> Result<AlgebroidSpec> {
    require_three_form(b)?;
    if b.is_zero() {
        return Ok(spec0.clone());
    }
    let split = SplitForm::from_form(spec0, 3, b.form())?;
    let r = spec0.rank();
    let mut parts = spec0.parts().clone();
    for i in 0..r {
        for j in 0..r {
            if i == j {
                continue;
            }
            let extra = split.apply_basis(&[i, j]);
            if extra.is_zero() {
                continue;
            }
            let entry = parts.brackets.entry((i, j)).or_insert_with(|| Section::zero(r));
            *entry = entry.add(&extra);
        }
    }
    parts.twist = Some(curvature_h(spec0, b)?.into_form());
    parts.kind = Kind::HTwisted;
    AlgebroidSpec::new(parts)
}

/// `D_B H`, computed with the twisted bracket.
pub fn integrability_defect(spec0: &AlgebroidSpec, b: &KerForm) -> Result<KerForm> {
    let twisted = twist_bracket(spec0, b)?;
    let h = twisted.twist().cloned().unwrap_or_default();
    KerForm::uncertified(5, covariant_derivative(&twisted, &h, 4)?)
}

/// `D₀(B̃²) + B̃·D₀B + B̃³`, each term assembled separately from `spec0`.
pub fn integrability_expansion(spec0: &AlgebroidSpec, b: &KerForm) -> Result<KerForm> {
    require_three_form(b)?;
    let split = SplitForm::from_form(spec0, 3, b.form())?;
    let sq = b_squared(spec0, b)?;
    let d0b = covariant_derivative(spec0, b.form(), 3)?;
    let first = covariant_derivative(spec0, &sq, 4)?;
    let second = torsion_term(spec0, &split, &d0b, 4)?;
    let third = torsion_term(spec0, &split, &sq, 4)?;
    KerForm::uncertified(5, first.add(&second).add(&third))
}

/// Random constant three-forms on point specs of rank at least five, looking
/// for a twist whose integrability defect is nonzero.
pub fn search_nonintegrable(seed: u64, attempts: usize) -> Result<Option<(AlgebroidSpec, KerForm)>> {
    let mut sampler = Sampler::new(seed, 0);
    let bases = [split_point(5), split_point(6), so3_plus_split(2), so3_plus_so3()];
    for k in 0..attempts {
        let base = &bases[k % bases.len()];
        let b = KerForm::certify(base, 3, sampler.constant_form(base.rank(), 3))?;
        if !integrability_defect(base, &b)?.is_zero() {
            return Ok(Some((base.clone(), b)));
        }
    }
    Ok(None)
}

/// `so(3) ⊕ ℚ^m` with the identity form on `so(3)` and a split form on the abelian part.
pub fn so3_plus_split(m: usize) -> AlgebroidSpec {
    let mut diag = vec![1, 1, 1];
    diag.extend((0..m).map(|i| if i < m / 2 { 1 } else { -1 }));
    let r = diag.len();
    let mut b = BTreeMap::new();
    let pad = |c: &[i64]| {
        let mut v = c.to_vec();
        v.resize(r, 0);
        int_section(&v)
    };
    b.insert((0, 1), pad(&[0, 0, 1]));
    b.insert((1, 2), pad(&[1, 0, 0]));
    b.insert((2, 0), pad(&[0, 1, 0]));
    make_point(diagonal(&diag), b, None).expect("so(3) plus abelian is valid")
}

/// `so(3) ⊕ so(3)` with the form `diag(1,1,1,−1,−1,−1)`.
pub fn so3_plus_so3() -> AlgebroidSpec {
    let mut b = BTreeMap::new();
    for off in [0usize, 3] {
        let e = |k: usize| Section::basis(6, off + k);
        b.insert((off, off + 1), e(2));
        b.insert((off + 1, off + 2), e(0));
        b.insert((off + 2, off), e(1));
    }
    make_point(diagonal(&[1, 1, 1, -1, -1, -1]), b, None).expect("so(3)+so(3) is valid")
}

/// Standard algebroid with `ι_Y ι_X C` added to the bracket of vector fields and
/// twist `ρ*(dC)`, for a base three-form `C`.
pub fn c_twist(n: usize, c: &Multivector) -> Result<AlgebroidSpec> {
    if n < 3 {
        return Err(Error::invariant("c-twist dimension", "n must be at least 3"));
    }
    let spec0 = make_standard(n)?;
    if c.is_zero() {
        return Ok(spec0);
    }
    if c.terms().any(|(b, _)| b.count_ones() != 3) || c.index_span() > n {
        return Err(Error::Degree("C must be a base three-form on dx1..dxn".into()));
    }
    let r = 2 * n;
    let mut parts = spec0.parts().clone();
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let mut s = Section::zero(r);
            let mut any = false;
            for k in 0..n {
                if k == i || k == j {
                    continue;
                }
                // C(∂i, ∂j, ∂k) read off the sorted blade
                let set = (1u32 << i) | (1 << j) | (1 << k);
                let coeff = c.coefficient(set);
                if coeff.is_zero() {
                    continue;
                }
                let sign = wedge_sign(1 << i, (1 << j) | (1 << k)) * wedge_sign(1 << j, 1 << k);
                let mut coeffs = s.into_coeffs();
                coeffs[n + k] = if sign > 0 { coeff } else { -coeff };
                s = Section::new(coeffs);
                any = true;
            }
            if any {
                parts.brackets.insert((i, j), s);
            }
        }
    }
    parts.twist = Some(pullback(&spec0, &de_rham(c), 4)?.into_form());
    parts.kind = Kind::HTwisted;
    AlgebroidSpec::new(parts)
}
