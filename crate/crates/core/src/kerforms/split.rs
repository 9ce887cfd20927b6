use super::KerForm;
use crate::error::{Error, Result};
use crate::exactmath::{SMatrix, Scalar};
use crate::exterior::Multivector;
use crate::section::Section;
use crate::structure::AlgebroidSpec;

/// The canonical splitting `α̃` of a `p`-form into a section-valued `(p−1)`-form,
/// `⟨α̃(ψ1,…,ψ_{p−1}), χ⟩ = ⟨α, ψ1∧…∧ψ_{p−1}∧χ⟩`.
#[derive(Clone, Debug)]
pub struct SplitForm {
    arity: usize,
    lowered: Multivector,
    gram_inv: SMatrix,
}

pub fn tilde_split(spec: &AlgebroidSpec, alpha: &KerForm) -> Result<SplitForm> {
    if alpha.degree() == 0 {
        return Err(Error::Degree("a degree-0 form has no splitting".into()));
    }
    SplitForm::from_form(spec, alpha.degree(), alpha.form())
}

impl SplitForm {
    pub fn from_form(spec: &AlgebroidSpec, degree: usize, form: &Multivector) -> Result<Self> {
        let gram_inv = spec
            .gram_inverse()
            .cloned()
            .ok_or_else(|| Error::invariant("unit-determinant gram", "splitting needs a nondegenerate pairing"))?;
        Ok(SplitForm {
            arity: degree.saturating_sub(1),
            lowered: spec.lower(form),
            gram_inv,
        })
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    /// Components of `χ ↦ ⟨α, ψ1∧…∧χ⟩`.
    pub fn covector(&self, args: &[Section]) -> Vec<Scalar> {
        assert_eq!(args.len(), self.arity, "wrong number of arguments for a split form");
        let mut acc = self.lowered.clone();
        for psi in args {
            acc = acc.interior(psi);
            if acc.is_zero() {
                break;
            }
        }
        (0..self.gram_inv.rows()).map(|m| acc.coefficient(1 << m)).collect()
    }

    pub fn apply(&self, args: &[Section]) -> Section {
        Section::new(self.gram_inv.mul_vec(&self.covector(args)))
    }

    pub fn apply_basis(&self, indices: &[usize]) -> Section {
        let r = self.gram_inv.rows();
        let args: Vec<Section> = indices.iter().map(|&i| Section::basis(r, i)).collect();
        self.apply(&args)
    }
}
