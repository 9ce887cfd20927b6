//! Forms on the kernel of the anchor.
//!
//! A ker-ρ `p`-form is a `p`-vector annihilated by `ρ̃`. Forms are stored
//! contravariantly; pairings go through [`AlgebroidSpec::lower`].

mod derivative;
mod split;

pub use derivative::{cov_derivative, covariant_derivative, d_squared, ins_h, insertion, leibniz_defect, INS_H_SIGN};
pub use split::{tilde_split, SplitForm};

use crate::error::{Error, Result};
use crate::exactmath::{sparse_kernel, Monomial, Rational, Scalar};
use crate::exterior::{blades, grade, Multivector};
use crate::structure::AlgebroidSpec;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KerForm {
    degree: usize,
    form: Multivector,
    certified: bool,
}

fn check_grade(degree: usize, form: &Multivector) -> Result<()> {
    if let Some((b, _)) = form.terms().find(|&(b, _)| grade(b) != degree) {
        return Err(Error::Degree(format!(
            "term of degree {} in a form declared of degree {degree}",
            grade(b)
        )));
    }
    Ok(())
}

impl KerForm {
    /// Check `ρ̃(form) = 0` and wrap.
    pub fn certify(spec: &AlgebroidSpec, degree: usize, form: Multivector) -> Result<Self> {
        check_grade(degree, &form)?;
        if form.index_span() > spec.rank() {
            return Err(Error::Degree("form index beyond the rank".into()));
        }
        if !in_kernel(spec, &form) {
            return Err(Error::NotInKernel(format!("{:?}", form.to_literal())));
        }
        Ok(KerForm {
            degree,
            form,
            certified: true,
        })
    }

    pub fn uncertified(degree: usize, form: Multivector) -> Result<Self> {
        check_grade(degree, &form)?;
        Ok(KerForm {
            degree,
            form,
            certified: false,
        })
    }

    pub fn scalar(c: Scalar) -> Self {
        KerForm {
            degree: 0,
            form: Multivector::scalar(c),
            certified: true,
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn form(&self) -> &Multivector {
        &self.form
    }

    pub fn into_form(self) -> Multivector {
        self.form
    }

    pub fn is_certified(&self) -> bool {
        self.certified
    }

    pub fn is_zero(&self) -> bool {
        self.form.is_zero()
    }

    pub(crate) fn trusted(degree: usize, form: Multivector) -> Self {
        KerForm {
            degree,
            form,
            certified: true,
        }
    }
}

/// `ρ̃(ω)` as one `(p−1)`-vector per base coordinate: component `j` is the
/// contraction with the `j`-th anchor column read as a covector.
pub fn rho_tilde(spec: &AlgebroidSpec, omega: &Multivector) -> Vec<Multivector> {
    (0..spec.nvars())
        .map(|j| omega.interior(&spec.anchor().column(j)))
        .collect()
}

pub fn in_kernel(spec: &AlgebroidSpec, omega: &Multivector) -> bool {
    rho_tilde(spec, omega).iter().all(Multivector::is_zero)
}

/// Spanning independent set of ker ρ̃ in degree `p`. Over a polynomial base the
/// coefficients range over monomials of degree at most `truncation`.
pub fn kerform_basis(spec: &AlgebroidSpec, p: usize, truncation: Option<u32>) -> Result<Vec<KerForm>> {
    let r = spec.rank();
    if spec.ring().is_point() {
        return Ok(blades(r, p)
            .into_iter()
            .map(|b| KerForm::trusted(p, Multivector::blade(b, Scalar::one())))
            .collect());
    }
    let d =
        truncation.ok_or_else(|| Error::Degree("a monomial truncation is required over a polynomial base".into()))?;
    let unknowns = truncated_unknowns(spec, p, d);
    let images: Vec<Vec<_>> = unknowns
        .iter()
        .map(|u| {
            rho_tilde(spec, u)
                .into_iter()
                .enumerate()
                .flat_map(|(j, m)| m.coordinates().into_iter().map(move |(k, v)| ((j, k), v)))
                .collect()
        })
        .collect();
    Ok(combine(&unknowns, sparse_kernel(&images))
        .into_iter()
        .map(|f| KerForm::trusted(p, f))
        .collect())
}

/// The monomial multiples `x^m e_B` spanning the truncated space of `p`-vectors.
pub(crate) fn truncated_unknowns(spec: &AlgebroidSpec, p: usize, d: u32) -> Vec<Multivector> {
    let monos = Monomial::up_to_degree(spec.nvars(), d);
    blades(spec.rank(), p)
        .into_iter()
        .flat_map(|b| {
            monos
                .iter()
                .map(move |m| Multivector::blade(b, Scalar::monomial(m.clone(), Rational::from_integer(1.into()))))
        })
        .collect()
}

/// Linear combinations of `unknowns` with the given coefficient vectors.
pub(crate) fn combine(unknowns: &[Multivector], vectors: Vec<Vec<Rational>>) -> Vec<Multivector> {
    vectors
        .into_iter()
        .map(|v| {
            unknowns
                .iter()
                .zip(&v)
                .filter(|(_, c)| !num::Zero::is_zero(*c))
                .fold(Multivector::zero(), |acc, (u, c)| {
                    acc.add(&u.scale(&Scalar::constant(c.clone())))
                })
        })
        .collect()
}

/// Partial pairing: `⟨contract(α, χ), β⟩ = ⟨α, χ ∧ β⟩`.
pub fn contract(spec: &AlgebroidSpec, alpha: &KerForm, chi: &Multivector) -> Result<KerForm> {
    let k = match chi.homogeneous_grade() {
        Some(k) => k,
        None if chi.is_zero() => 0,
        None => return Err(Error::Degree("contraction needs a homogeneous multivector".into())),
    };
    if k > alpha.degree {
        return Err(Error::Degree(format!(
            "cannot contract a {}-form with a {k}-vector",
            alpha.degree
        )));
    }
    let low = spec.lower(&alpha.form).left_contract(chi);
    let raised = spec.raise(&low)?;
    Ok(KerForm {
        degree: alpha.degree - k,
        form: raised,
        certified: alpha.certified,
    })
}

pub fn wedge(alpha: &KerForm, beta: &KerForm) -> KerForm {
    KerForm {
        degree: alpha.degree + beta.degree,
        form: alpha.form.wedge(&beta.form),
        certified: alpha.certified && beta.certified,
    }
}
