use super::{wedge, KerForm, SplitForm};
use crate::error::{Error, Result};
use crate::exactmath::Scalar;
use crate::exterior::{blades, indices, wedge_sign, Blade, Multivector};
use crate::section::Section;
use crate::structure::{apply_vector_field, AlgebroidSpec};

/// Global sign of `ins_H` relative to the plain insertion of `H̃`.
pub const INS_H_SIGN: i64 = -1;

fn parity(k: usize) -> Scalar {
    if k.is_multiple_of(2) {
        Scalar::one()
    } else {
        Scalar::int(-1)
    }
}

/// `⟨α, v ∧ e_rest⟩` from the lowered components of `α`.
fn pair_with_wedge(low: &Multivector, v: &[Scalar], rest: Blade) -> Scalar {
    let mut acc = Scalar::zero();
    for (m, vm) in v.iter().enumerate() {
        if vm.is_zero() || rest & (1 << m) != 0 {
            continue;
        }
        let c = low.coefficient(rest | (1 << m));
        if c.is_zero() {
            continue;
        }
        let term = vm * &c;
        if wedge_sign(1 << m, rest) < 0 {
            acc -= &term;
        } else {
            acc += &term;
        }
    }
    acc
}

fn sub_blades(set: Blade, k: usize) -> impl Iterator<Item = (Blade, Vec<usize>)> {
    let idx = indices(set);
    blades(idx.len(), k).into_iter().map(move |local| {
        let positions = indices(local);
        let sub = positions.iter().fold(0, |b, &p| b | (1 << idx[p]));
        (sub, positions)
    })
}

/// Covariant components of the plain insertion of a `k`-ary section-valued
/// table into a `p`-form: on a `(p+k−1)`-subset `I`,
/// `Σ_{S⊂I, |S|=k} ε(S, I∖S) ⟨α, K(e_S) ∧ e_{I∖S}⟩`, where `ε` is the unshuffle sign.
/// The result is returned raised.
pub fn insertion<F>(spec: &AlgebroidSpec, k: usize, table: F, alpha: &Multivector, p: usize) -> Result<Multivector>
where
    F: Fn(&[usize]) -> Section,
{
    let low = spec.lower(alpha);
    let mut out = Multivector::zero();
    if low.is_zero() || k == 0 {
        return Ok(out);
    }
    let r = spec.rank();
    let mut cache = std::collections::HashMap::new();
    for set in blades(r, p + k - 1) {
        let mut val = Scalar::zero();
        for (sub, positions) in sub_blades(set, k) {
            let shift: usize = positions.iter().sum::<usize>() + k * (k - 1) / 2;
            let value = cache.entry(sub).or_insert_with(|| table(&indices(sub)));
            if value.is_zero() {
                continue;
            }
            let term = pair_with_wedge(&low, value, set & !sub);
            if shift.is_multiple_of(2) {
                val += &term;
            } else {
                val -= &term;
            }
        }
        out.add_term(set, val);
    }
    spec.raise(&out)
}

/// The exterior covariant derivative of a `p`-vector, with no membership check.
pub fn covariant_derivative(spec: &AlgebroidSpec, alpha: &Multivector, p: usize) -> Result<Multivector> {
    let r = spec.rank();
    let low = spec.lower(alpha);
    let mut out = Multivector::zero();
    if low.is_zero() {
        return Ok(out);
    }
    let point = spec.ring().is_point();
    for set in blades(r, p + 1) {
        let idx = indices(set);
        let mut val = Scalar::zero();
        if !point {
            for (k, &ik) in idx.iter().enumerate() {
                let c = low.coefficient(set & !(1 << ik));
                if c.is_zero() {
                    continue;
                }
                let d = apply_vector_field(spec.anchor_row(ik), &c);
                val += &(&parity(k) * &d);
            }
        }
        for (k, &ik) in idx.iter().enumerate() {
            for (l, &il) in idx.iter().enumerate().skip(k + 1) {
                let br = spec.basis_bracket(ik, il);
                if br.is_zero() {
                    continue;
                }
                let rest = set & !(1 << ik) & !(1 << il);
                let term = pair_with_wedge(&low, br, rest);
                val += &(&parity(k + l) * &term);
            }
        }
        out.add_term(set, val);
    }
    spec.raise(&out)
}

fn require_certified(alpha: &KerForm) -> Result<()> {
    if !alpha.is_certified() {
        return Err(Error::NotInKernel("input form is not certified".into()));
    }
    Ok(())
}

/// `D α`; the result is certified after an explicit `ρ̃` check.
pub fn cov_derivative(spec: &AlgebroidSpec, alpha: &KerForm) -> Result<KerForm> {
    require_certified(alpha)?;
    let d = covariant_derivative(spec, alpha.form(), alpha.degree())?;
    KerForm::certify(spec, alpha.degree() + 1, d).map_err(|e| match e {
        Error::NotInKernel(detail) => Error::invariant("D preserves ker rho~", detail),
        other => other,
    })
}

/// `D(α∧β) − (Dα)∧β − (−1)^{|α|} α∧Dβ`.
pub fn leibniz_defect(spec: &AlgebroidSpec, alpha: &KerForm, beta: &KerForm) -> Result<KerForm> {
    let lhs = cov_derivative(spec, &wedge(alpha, beta))?;
    let da = cov_derivative(spec, alpha)?;
    let db = cov_derivative(spec, beta)?;
    let mut defect = lhs.form().sub(&wedge(&da, beta).into_form());
    let second = wedge(alpha, &db).into_form();
    defect = if alpha.degree().is_multiple_of(2) {
        defect.sub(&second)
    } else {
        defect.add(&second)
    };
    Ok(KerForm::trusted(lhs.degree(), defect))
}

pub fn d_squared(spec: &AlgebroidSpec, alpha: &KerForm) -> Result<KerForm> {
    cov_derivative(spec, &cov_derivative(spec, alpha)?)
}

/// The degree-2 derivation inserting `H̃` into all slots of `α`.
pub fn ins_h(spec: &AlgebroidSpec, alpha: &KerForm) -> Result<KerForm> {
    let h = spec.twist().ok_or(Error::MissingTwist)?;
    let split = SplitForm::from_form(spec, 4, h)?;
    let raw = insertion(spec, 3, |s| split.apply_basis(s), alpha.form(), alpha.degree())?;
    Ok(KerForm {
        degree: alpha.degree() + 2,
        form: raw.scale(&Scalar::int(INS_H_SIGN)),
        certified: alpha.is_certified(),
    })
}
