//! The naive cochain complex `Ω^p(ker ρ) ∩ ker H̃` with differential `D`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactmath::{sparse_kernel, Monomial, QMatrix, Rational, Scalar};
use crate::exterior::{blades, Blade, Multivector};
use crate::kerforms::{
    combine, covariant_derivative, ins_h, kerform_basis, rho_tilde, truncated_unknowns, KerForm, SplitForm,
};
use crate::section::Section;
use crate::structure::AlgebroidSpec;

/// How `α ∈ ker H̃` is read.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Reading {
    /// `α` annihilates every `H̃(ψ1,ψ2,ψ3)` in any slot.
    Slotwise,
    /// `ins_H α = 0`.
    InsH,
}

type Key = (usize, (Blade, Monomial));

fn keyed(group: usize, m: &Multivector) -> impl Iterator<Item = (Key, Rational)> {
    m.coordinates().into_iter().map(move |(k, v)| ((group, k), v))
}

/// The values `H̃(e_a, e_b, e_c)` for `a < b < c`, zero ones dropped.
fn twist_images(spec: &AlgebroidSpec) -> Result<Vec<Section>> {
    let Some(h) = spec.twist() else {
        return Ok(Vec::new());
    };
    if h.is_zero() {
        return Ok(Vec::new());
    }
    let split = SplitForm::from_form(spec, 4, h)?;
    Ok(blades(spec.rank(), 3)
        .into_iter()
        .map(|b| split.apply_basis(&crate::exterior::indices(b)))
        .filter(|s| !s.is_zero())
        .collect())
}

fn twist_constraints(
    spec: &AlgebroidSpec,
    images: &[Section],
    reading: Reading,
    p: usize,
    u: &Multivector,
) -> Result<Vec<(Key, Rational)>> {
    let mut out = Vec::new();
    match reading {
        Reading::Slotwise => {
            let low = spec.lower(u);
            for (t, v) in images.iter().enumerate() {
                out.extend(keyed(1 + t, &low.left_contract(&Multivector::from_section(v))));
            }
        }
        Reading::InsH if !images.is_empty() => {
            let form = ins_h(spec, &KerForm::uncertified(p, u.clone())?)?;
            out.extend(keyed(1, form.form()));
        }
        Reading::InsH => {}
    }
    Ok(out)
}

fn require_truncation(spec: &AlgebroidSpec, truncation: Option<u32>) -> Result<u32> {
    if spec.ring().is_point() {
        return Ok(0);
    }
    truncation.ok_or_else(|| Error::Degree("a monomial truncation is required over a polynomial base".into()))
}

/// Basis of `C^p` under the given reading; over a polynomial base the coefficients
/// range over monomials of degree at most `truncation`.
pub fn cochain_basis_with(
    spec: &AlgebroidSpec,
    p: usize,
    truncation: Option<u32>,
    reading: Reading,
) -> Result<Vec<KerForm>> {
    let d = require_truncation(spec, truncation)?;
    let images = twist_images(spec)?;
    if images.is_empty() {
        return kerform_basis(spec, p, Some(d));
    }
    let unknowns = truncated_unknowns(spec, p, d);
    let mut columns = Vec::with_capacity(unknowns.len());
    for u in &unknowns {
        let mut col: Vec<(Key, Rational)> = Vec::new();
        for (j, m) in rho_tilde(spec, u).iter().enumerate() {
            col.extend(m.coordinates().into_iter().map(|(k, v)| ((usize::MAX - j, k), v)));
        }
        col.extend(twist_constraints(spec, &images, reading, p, u)?);
        columns.push(col);
    }
    combine(&unknowns, sparse_kernel(&columns))
        .into_iter()
        .map(|f| KerForm::certify(spec, p, f))
        .collect::<Result<_>>()
}

pub fn cochain_basis(spec: &AlgebroidSpec, p: usize, truncation: Option<u32>) -> Result<Vec<KerForm>> {
    cochain_basis_with(spec, p, truncation, Reading::Slotwise)
}

fn require_point(spec: &AlgebroidSpec) -> Result<()> {
    if !spec.ring().is_point() {
        return Err(Error::Inapplicable {
            suite: "cohomology".into(),
            reason: "full cochain complexes are computed over a point only".into(),
        });
    }
    Ok(())
}

fn blade_vector(form: &Multivector, all: &[Blade]) -> Vec<Rational> {
    all.iter()
        .map(|&b| {
            form.coefficient(b)
                .as_rational()
                .expect("point forms have constant coefficients")
        })
        .collect()
}

/// Matrix of `D: C^p → C^{p+1}` in the bases returned by [`cochain_basis_with`].
pub fn differential_matrix_with(spec: &AlgebroidSpec, p: usize, reading: Reading) -> Result<QMatrix> {
    require_point(spec)?;
    let src = cochain_basis_with(spec, p, None, reading)?;
    let dst = cochain_basis_with(spec, p + 1, None, reading)?;
    let all = blades(spec.rank(), p + 1);
    let target = QMatrix::from_fn(all.len(), dst.len(), |i, j| {
        dst[j]
            .form()
            .coefficient(all[i])
            .as_rational()
            .expect("point forms have constant coefficients")
    });
    let mut columns = Vec::with_capacity(src.len());
    for alpha in &src {
        let image = covariant_derivative(spec, alpha.form(), p)?;
        let rhs = blade_vector(&image, &all);
        let coords = target
            .solve(&rhs)
            .ok_or_else(|| Error::CochainEscape(format!("D of {:?} leaves C^{}", alpha.form().to_literal(), p + 1)))?;
        columns.push(coords);
    }
    Ok(QMatrix::from_fn(dst.len(), src.len(), |i, j| columns[j][i].clone()))
}

pub fn differential_matrix(spec: &AlgebroidSpec, p: usize) -> Result<QMatrix> {
    differential_matrix_with(spec, p, Reading::Slotwise)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Cohomology {
    pub reading: Reading,
    pub dims: Vec<usize>,
    pub betti: Vec<usize>,
    pub d_squared_zero: bool,
}

impl Cohomology {
    pub fn euler_characteristic(&self) -> (i64, i64) {
        let alt = |v: &[usize]| {
            v.iter()
                .enumerate()
                .map(|(p, &x)| if p % 2 == 0 { x as i64 } else { -(x as i64) })
                .sum()
        };
        (alt(&self.dims), alt(&self.betti))
    }
}

/// Dimensions, Betti numbers and the `d² = 0` check for degrees `0..=p_max`.
pub fn compute_with(spec: &AlgebroidSpec, p_max: usize, reading: Reading) -> Result<Cohomology> {
    require_point(spec)?;
    let p_max = p_max.min(spec.rank());
    let mut dims = Vec::with_capacity(p_max + 1);
    let mut mats = Vec::with_capacity(p_max + 1);
    for p in 0..=p_max {
        dims.push(cochain_basis_with(spec, p, None, reading)?.len());
        mats.push(differential_matrix_with(spec, p, reading)?);
    }
    let ranks: Vec<usize> = mats.iter().map(QMatrix::rank).collect();
    let betti = (0..=p_max)
        .map(|p| dims[p] - ranks[p] - if p > 0 { ranks[p - 1] } else { 0 })
        .collect();
    let d_squared_zero = mats.windows(2).all(|w| w[1].mul(&w[0]).is_zero());
    Ok(Cohomology {
        reading,
        dims,
        betti,
        d_squared_zero,
    })
}

pub fn betti(spec: &AlgebroidSpec, p_max: usize) -> Result<Vec<usize>> {
    Ok(compute_with(spec, p_max, Reading::Slotwise)?.betti)
}

/// Both readings side by side, for surfacing where they differ. A reading whose
/// cochains are not `D`-stable carries the escape message.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReadingComparison {
    pub slotwise: std::result::Result<Cohomology, String>,
    pub ins_h: std::result::Result<Cohomology, String>,
}

impl ReadingComparison {
    pub fn agree(&self) -> bool {
        match (&self.slotwise, &self.ins_h) {
            (Ok(a), Ok(b)) => a.dims == b.dims && a.betti == b.betti,
            _ => false,
        }
    }
}

pub fn compare_readings(spec: &AlgebroidSpec, p_max: usize) -> Result<ReadingComparison> {
    require_point(spec)?;
    let run = |reading| match compute_with(spec, p_max, reading) {
        Ok(c) => Ok(Ok(c)),
        Err(Error::CochainEscape(msg)) => Ok(Err(msg)),
        Err(e) => Err(e),
    };
    Ok(ReadingComparison {
        slotwise: run(Reading::Slotwise)?,
        ins_h: run(Reading::InsH)?,
    })
}

fn annihilates_twist(spec: &AlgebroidSpec, low: &Multivector) -> Result<bool> {
    Ok(twist_images(spec)?
        .iter()
        .all(|v| low.left_contract(&Multivector::from_section(v)).is_zero()))
}

/// `α ∈ Ω^p(ker ρ)` and `α` annihilates `H̃` slotwise.
pub fn is_cochain(spec: &AlgebroidSpec, alpha: &KerForm) -> Result<bool> {
    if !crate::kerforms::in_kernel(spec, alpha.form()) {
        return Ok(false);
    }
    annihilates_twist(spec, &spec.lower(alpha.form()))
}

/// Courant–Dorfman cochains: `ι_{D₀ x_j} α = 0` for every generator and `α ∈ ker H̃` slotwise.
pub fn cd_cochain_membership(spec: &AlgebroidSpec, degree: usize, alpha: &Multivector) -> Result<bool> {
    KerForm::uncertified(degree, alpha.clone())?;
    let low = spec.lower(alpha);
    for j in 0..spec.nvars() {
        let v = spec.d0(&Scalar::var(j));
        if !low.left_contract(&Multivector::from_section(&v)).is_zero() {
            return Ok(false);
        }
    }
    annihilates_twist(spec, &low)
}
