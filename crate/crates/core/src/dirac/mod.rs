//! Isotropic, Lagrangean and integrable subbundles, and the twisted Lie
//! algebroid a Dirac structure inherits.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactmath::{rat, QMatrix, Rational, SMatrix, Scalar};
use crate::exterior::{blade_of, blades, indices, Blade};
use crate::kerforms::SplitForm;
use crate::section::Section;
use crate::structure::{
    check_axioms, AlgebroidSpec, AxiomRun, CheckOptions, CheckReport, Kind, SpecParts, Suite, WitnessValue,
};

/// A subbundle given by generating sections. Membership over a polynomial base
/// goes through an invertible block of constant columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subbundle {
    generators: Vec<Section>,
    block: Option<(Vec<usize>, QMatrix)>,
}

/// Points at which independence of polynomial generators is tested.
fn probe_points(nvars: usize) -> Vec<Vec<Rational>> {
    [(2, 7), (3, 11), (5, 13)]
        .iter()
        .map(|&(a, b)| (0..nvars as i64).map(|j| rat(a + j, b + 2 * j)).collect())
        .collect()
}

impl Subbundle {
    pub fn new(spec: &AlgebroidSpec, generators: Vec<Section>) -> Result<Self> {
        let r = spec.rank();
        if let Some(g) = generators.iter().find(|g| g.rank() != r) {
            return Err(Error::invariant(
                "generator length",
                format!("generator has {} entries, expected {r}", g.rank()),
            ));
        }
        let m = generators.len();
        let independent = if spec.ring().is_point() {
            QMatrix::from_fn(m, r, |i, j| generators[i][j].as_rational().expect("point coefficients")).rank() == m
        } else {
            probe_points(spec.nvars())
                .iter()
                .any(|pt| QMatrix::from_fn(m, r, |i, j| generators[i][j].eval(pt)).rank() == m)
        };
        if !independent {
            return Err(Error::invariant(
                "independent generators",
                "generators are linearly dependent",
            ));
        }
        let constant: Vec<usize> = (0..r)
            .filter(|&j| generators.iter().all(|g| g[j].is_constant()))
            .collect();
        let sub = QMatrix::from_fn(m, constant.len(), |i, t| {
            generators[i][constant[t]].as_rational().expect("constant column")
        });
        let rref = sub.rref();
        let block = (rref.rank == m).then(|| {
            let cols: Vec<usize> = rref.pivots.iter().map(|&t| constant[t]).collect();
            let b = QMatrix::from_fn(m, m, |i, t| generators[i][cols[t]].as_rational().expect("constant"));
            (cols, b.inverse().expect("pivot block is invertible"))
        });
        Ok(Subbundle { generators, block })
    }

    /// The span of the given basis elements.
    pub fn coordinate(spec: &AlgebroidSpec, basis: &[usize]) -> Result<Self> {
        Subbundle::new(spec, basis.iter().map(|&i| spec.basis(i)).collect())
    }

    pub fn generators(&self) -> &[Section] {
        &self.generators
    }

    pub fn dim(&self) -> usize {
        self.generators.len()
    }

    pub fn has_constant_block(&self) -> bool {
        self.block.is_some()
    }

    /// Coefficients `c` with `s = Σ c_k l_k + residual`, read off the constant block.
    pub fn express(&self, s: &Section) -> Result<(Vec<Scalar>, Section)> {
        let (cols, inv) = self.block.as_ref().ok_or_else(|| {
            Error::Undecidable("the generator matrix has no invertible block of constant columns".into())
        })?;
        let m = self.dim();
        let coeffs: Vec<Scalar> = (0..m)
            .map(|k| {
                cols.iter().enumerate().fold(Scalar::zero(), |acc, (t, &c)| {
                    acc + &s[c] * &Scalar::constant(inv[(t, k)].clone())
                })
            })
            .collect();
        let mut residual = s.clone();
        for (c, l) in coeffs.iter().zip(&self.generators) {
            residual = residual.sub(&l.scale(c));
        }
        Ok((coeffs, residual))
    }
}

pub fn is_isotropic(spec: &AlgebroidSpec, l: &Subbundle) -> bool {
    let g = l.generators();
    (0..g.len()).all(|i| (i..g.len()).all(|j| spec.pairing(&g[i], &g[j]).is_zero()))
}

/// Signature `(positive, negative, zero)` of a constant gram matrix.
pub fn gram_signature(spec: &AlgebroidSpec) -> Result<(usize, usize, usize)> {
    let q = spec
        .gram()
        .to_rational()
        .ok_or_else(|| Error::invariant("constant gram", "signature needs constant pairing coefficients"))?;
    Ok(q.signature())
}

fn require_split(spec: &AlgebroidSpec) -> Result<()> {
    let (p, n, z) = gram_signature(spec)?;
    if p != n || z != 0 {
        return Err(Error::invariant(
            "split signature",
            format!("gram has signature ({p},{n}) with {z} null directions"),
        ));
    }
    Ok(())
}

pub fn is_lagrangean(spec: &AlgebroidSpec, l: &Subbundle) -> Result<bool> {
    require_split(spec)?;
    Ok(2 * l.dim() == spec.rank() && is_isotropic(spec, l))
}

/// `[l_i, l_j]` for a pair of generators that does not return to `L`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IntegrabilityWitness {
    pub left: usize,
    pub right: usize,
    pub residual: Vec<String>,
}

pub fn integrability_defect(spec: &AlgebroidSpec, l: &Subbundle) -> Result<Vec<IntegrabilityWitness>> {
    let g = l.generators();
    let mut out = Vec::new();
    for i in 0..g.len() {
        for j in 0..g.len() {
            let (_, residual) = l.express(&spec.bracket(&g[i], &g[j]))?;
            if !residual.is_zero() {
                out.push(IntegrabilityWitness {
                    left: i,
                    right: j,
                    residual: residual.to_strings(),
                });
            }
        }
    }
    Ok(out)
}

pub fn check_dirac(spec: &AlgebroidSpec, l: &Subbundle) -> Result<CheckReport> {
    let mut report = CheckReport::new("dirac");
    let g = l.generators();
    let mut iso = AxiomRun::new("isotropic");
    for i in 0..g.len() {
        for j in i..g.len() {
            iso.scalar_case(
                || vec![WitnessValue::from(&g[i]), WitnessValue::from(&g[j])],
                spec.pairing(&g[i], &g[j]),
            );
        }
    }
    report.push(iso.finish());
    require_split(spec)?;
    let mut lag = AxiomRun::new("lagrangean");
    let half = (2 * l.dim() != spec.rank())
        .then(|| WitnessValue::note(format!("{} generators in rank {}", l.dim(), spec.rank())));
    lag.case(Vec::new, half);
    report.push(lag.finish());
    let mut int = AxiomRun::new("integrable");
    for i in 0..g.len() {
        for j in 0..g.len() {
            let (_, residual) = l.express(&spec.bracket(&g[i], &g[j]))?;
            int.section_case(&[&g[i], &g[j]], residual);
        }
    }
    report.push(int.finish());
    Ok(report)
}

/// The twisted Lie algebroid carried by a Dirac structure, in the basis of its generators.
#[derive(Clone, Debug)]
pub struct InducedHtla {
    /// `None` when the restricted twist leaves `L ∩ ker ρ`.
    pub spec: Option<AlgebroidSpec>,
    pub report: CheckReport,
}

pub fn induced_htla(spec: &AlgebroidSpec, l: &Subbundle, opts: &CheckOptions) -> Result<InducedHtla> {
    let dirac = check_dirac(spec, l)?;
    if !dirac.passed() {
        return Err(Error::invariant(
            "dirac structure",
            format!("failed axioms: {}", dirac.failed_axioms().join(", ")),
        ));
    }
    let g = l.generators();
    let m = g.len();
    let mut brackets = BTreeMap::new();
    for i in 0..m {
        for j in 0..m {
            let (coeffs, _) = l.express(&spec.bracket(&g[i], &g[j]))?;
            brackets.insert((i, j), Section::new(coeffs));
        }
    }
    let anchor_rows: Vec<Vec<Scalar>> = g.iter().map(|s| spec.anchor_apply(s)).collect();
    let mut report = CheckReport::new("h-twisted-lie-algebroid");
    let mut values = AxiomRun::new("h-values");
    let mut vector_twist = BTreeMap::new();
    if let Some(h) = spec.twist().filter(|h| !h.is_zero()) {
        let split = SplitForm::from_form(spec, 4, h)?;
        for b in blades(m, 3) {
            let ix = indices(b);
            let args: Vec<Section> = ix.iter().map(|&i| g[i].clone()).collect();
            let v = split.apply(&args);
            let (coeffs, residual) = l.express(&v)?;
            let rho = spec.anchor_apply(&v);
            let defect = if !residual.is_zero() {
                Some(WitnessValue::from(&residual))
            } else if rho.iter().any(|c| !c.is_zero()) {
                Some(WitnessValue::vector_field(&rho))
            } else {
                None
            };
            values.case(|| args.iter().map(WitnessValue::from).collect(), defect);
            let coeffs = Section::new(coeffs);
            if !coeffs.is_zero() {
                vector_twist.insert(b, coeffs);
            }
        }
    }
    let escaped = values.failed();
    report.push(values.finish());
    if escaped {
        return Ok(InducedHtla { spec: None, report });
    }
    let mut parts = SpecParts::new(
        spec.ring(),
        SMatrix::zeros(m, m),
        if spec.twist().is_some_and(|h| !h.is_zero()) {
            Kind::HTwistedLieAlgebroid
        } else {
            Kind::LieAlgebroid
        },
    );
    parts.anchor = SMatrix::from_fn(m, spec.nvars(), |i, j| anchor_rows[i][j].clone());
    parts.brackets = brackets;
    if parts.kind == Kind::HTwistedLieAlgebroid {
        parts.vector_twist = Some(vector_twist);
    }
    parts.basis_names = Some((1..=m).map(|i| format!("l{i}")).collect());
    let induced = AlgebroidSpec::new(parts)?;
    report.merge(check_axioms(&induced, Suite::LieRinehart, opts)?);
    Ok(InducedHtla {
        spec: Some(induced),
        report,
    })
}

/// Spans of basis subsets of half the rank that are Dirac structures.
pub fn search_coordinate_dirac(spec: &AlgebroidSpec) -> Result<Vec<Subbundle>> {
    let r = spec.rank();
    let (p, n, z) = gram_signature(spec)?;
    if p != n || z != 0 {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for b in blades(r, r / 2) {
        let l = Subbundle::coordinate(spec, &indices(b))?;
        if check_dirac(spec, &l)?.passed() {
            out.push(l);
        }
    }
    Ok(out)
}

/// The basis subset a coordinate subbundle spans, if it is one.
pub fn coordinate_blade(l: &Subbundle) -> Option<Blade> {
    let mut ix = Vec::new();
    for g in l.generators() {
        let nz: Vec<usize> = (0..g.rank()).filter(|&i| !g[i].is_zero()).collect();
        if nz.len() != 1 || !g[nz[0]].is_one() {
            return None;
        }
        ix.push(nz[0]);
    }
    ix.sort_unstable();
    blade_of(&ix).ok()
}

#[cfg(test)]
mod tests;
