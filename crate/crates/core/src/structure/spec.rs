//! The algebroid data model and its bracket, pairing and anchor operations.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::exactmath::{SMatrix, Scalar};
use crate::exterior::{grade, Blade, Multivector};
use crate::section::Section;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BaseRing {
    Point,
    Polynomial { vars: usize },
}

impl BaseRing {
    pub fn nvars(&self) -> usize {
        match self {
            BaseRing::Point => 0,
            BaseRing::Polynomial { vars } => *vars,
        }
    }

    pub fn is_point(&self) -> bool {
        matches!(self, BaseRing::Point)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Kind {
    Almost,
    StronglyAnchored,
    Courant,
    HTwisted,
    LieAlgebroid,
    HTwistedLieAlgebroid,
}

impl Kind {
    pub fn as_str(&self) -> &'static str {
        match self {
            Kind::Almost => "almost",
            Kind::StronglyAnchored => "strongly-anchored",
            Kind::Courant => "courant",
            Kind::HTwisted => "h-twisted",
            Kind::LieAlgebroid => "lie-algebroid",
            Kind::HTwistedLieAlgebroid => "h-twisted-lie-algebroid",
        }
    }

    /// Lie-type kinds carry no pairing requirement.
    pub fn is_lie(&self) -> bool {
        matches!(self, Kind::LieAlgebroid | Kind::HTwistedLieAlgebroid)
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Kind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Kind> {
        Ok(match s {
            "almost" => Kind::Almost,
            "strongly-anchored" => Kind::StronglyAnchored,
            "courant" => Kind::Courant,
            "h-twisted" => Kind::HTwisted,
            "lie-algebroid" => Kind::LieAlgebroid,
            "h-twisted-lie-algebroid" => Kind::HTwistedLieAlgebroid,
            other => return Err(Error::parse("kind", format!("unknown kind `{other}`"))),
        })
    }
}

/// Raw ingredients of a spec, validated by [`AlgebroidSpec::new`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpecParts {
    pub ring: BaseRing,
    pub rank: usize,
    /// `rank × rank`, entry `(i, j)` is `⟨e_i, e_j⟩`.
    pub gram: SMatrix,
    /// `rank × nvars`, row `i` holds the components of `ρ(e_i)`.
    pub anchor: SMatrix,
    /// `[e_i, e_j]` for the listed pairs; missing pairs are zero.
    pub brackets: BTreeMap<(usize, usize), Section>,
    /// The ker-ρ four-form `H`.
    pub twist: Option<Multivector>,
    /// Section-valued three-form of an induced twisted Lie algebroid.
    pub vector_twist: Option<BTreeMap<Blade, Section>>,
    pub kind: Kind,
    pub basis_names: Option<Vec<String>>,
}

impl SpecParts {
    /// Empty bracket, no twist, zero anchor.
    pub fn new(ring: BaseRing, gram: SMatrix, kind: Kind) -> Self {
        let rank = gram.rows();
        SpecParts {
            ring,
            rank,
            anchor: SMatrix::zeros(rank, ring.nvars()),
            gram,
            brackets: BTreeMap::new(),
            twist: None,
            vector_twist: None,
            kind,
            basis_names: None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct AlgebroidSpec {
    parts: SpecParts,
    table: Vec<Section>,
    gram_inv: Option<SMatrix>,
}

impl PartialEq for AlgebroidSpec {
    fn eq(&self, other: &Self) -> bool {
        let p = &self.parts;
        let q = &other.parts;
        p.ring == q.ring
            && p.rank == q.rank
            && p.gram == q.gram
            && p.anchor == q.anchor
            && self.table == other.table
            && p.twist == q.twist
            && p.vector_twist == q.vector_twist
            && p.kind == q.kind
            && p.basis_names == q.basis_names
    }
}

impl Eq for AlgebroidSpec {}

fn check_vars(s: &Scalar, nvars: usize, what: &str) -> Result<()> {
    if s.var_span() > nvars {
        return Err(Error::invariant(
            "variables within base ring",
            format!("{what} = {s} uses variables beyond x{nvars}"),
        ));
    }
    Ok(())
}

impl AlgebroidSpec {
    pub fn new(parts: SpecParts) -> Result<Self> {
        let r = parts.rank;
        let n = parts.ring.nvars();
        if r == 0 || r > 32 {
            return Err(Error::invariant("rank", format!("rank {r} outside 1..=32")));
        }
        if parts.gram.rows() != r || parts.gram.cols() != r {
            return Err(Error::invariant("gram dimensions", "gram must be rank × rank"));
        }
        if !parts.gram.is_symmetric() {
            return Err(Error::invariant("symmetric gram", "gram is not symmetric"));
        }
        for (i, g) in parts.gram.entries().enumerate() {
            check_vars(g, n, &format!("gram[{}][{}]", i / r, i % r))?;
        }
        if parts.anchor.rows() != r || parts.anchor.cols() != n {
            return Err(Error::invariant(
                "anchor dimensions",
                format!(
                    "anchor is {}×{}, expected {r}×{n}",
                    parts.anchor.rows(),
                    parts.anchor.cols()
                ),
            ));
        }
        for (i, a) in parts.anchor.entries().enumerate() {
            check_vars(a, n, &format!("anchor[{}][{}]", i / n.max(1), i % n.max(1)))?;
        }
        let mut table = vec![Section::zero(r); r * r];
        for (&(i, j), s) in &parts.brackets {
            if i >= r || j >= r {
                return Err(Error::invariant(
                    "bracket indices",
                    format!("pair ({i},{j}) out of range"),
                ));
            }
            if s.rank() != r {
                return Err(Error::invariant(
                    "bracket section length",
                    format!("[e{i},e{j}] has {} entries, expected {r}", s.rank()),
                ));
            }
            for c in s.iter() {
                check_vars(c, n, &format!("bracket[{i},{j}]"))?;
            }
            table[i * r + j] = s.clone();
        }
        if let Some(h) = &parts.twist {
            if h.terms().any(|(b, _)| grade(b) != 4) {
                return Err(Error::invariant("twist degree", "twist must be a four-form"));
            }
            if h.index_span() > r {
                return Err(Error::invariant("twist indices", "twist index beyond rank"));
            }
            for (_, c) in h.terms() {
                check_vars(c, n, "twist coefficient")?;
            }
        }
        if let Some(vt) = &parts.vector_twist {
            for (&b, s) in vt {
                if grade(b) != 3 || (32 - b.leading_zeros() as usize) > r || s.rank() != r {
                    return Err(Error::invariant(
                        "vector twist shape",
                        "vector twist entries must be rank-length sections on three indices",
                    ));
                }
            }
        }
        if let Some(names) = &parts.basis_names {
            if names.len() != r {
                return Err(Error::invariant("basis names", "one name per basis element"));
            }
            let mut seen = std::collections::BTreeSet::new();
            if !names.iter().all(|s| seen.insert(s)) {
                return Err(Error::invariant("basis names", "names must be distinct"));
            }
        }
        let gram_inv = match unit_inverse(&parts.gram) {
            Some(inv) => Some(inv),
            None if parts.kind.is_lie() => None,
            None => {
                return Err(Error::invariant(
                    "unit-determinant gram",
                    "gram determinant is not a nonzero rational constant",
                ))
            }
        };
        let mut parts = parts;
        parts.brackets.retain(|_, s| !s.is_zero());
        Ok(AlgebroidSpec { parts, table, gram_inv })
    }

    pub fn parts(&self) -> &SpecParts {
        &self.parts
    }

    pub fn into_parts(self) -> SpecParts {
        self.parts
    }

    pub fn ring(&self) -> BaseRing {
        self.parts.ring
    }

    pub fn nvars(&self) -> usize {
        self.parts.ring.nvars()
    }

    pub fn rank(&self) -> usize {
        self.parts.rank
    }

    pub fn kind(&self) -> Kind {
        self.parts.kind
    }

    pub fn gram(&self) -> &SMatrix {
        &self.parts.gram
    }

    pub fn gram_inverse(&self) -> Option<&SMatrix> {
        self.gram_inv.as_ref()
    }

    pub fn anchor(&self) -> &SMatrix {
        &self.parts.anchor
    }

    pub fn twist(&self) -> Option<&Multivector> {
        self.parts.twist.as_ref()
    }

    pub fn vector_twist(&self) -> Option<&BTreeMap<Blade, Section>> {
        self.parts.vector_twist.as_ref()
    }

    pub fn basis_names(&self) -> Option<&[String]> {
        self.parts.basis_names.as_deref()
    }

    /// Copy of this spec carrying the given twist.
    pub fn with_twist(&self, twist: Option<Multivector>) -> Result<Self> {
        let mut parts = self.parts.clone();
        parts.twist = twist;
        AlgebroidSpec::new(parts)
    }

    /// A Courant algebroid read as an H-twisted one with `H = 0`.
    pub fn with_zero_twist(&self) -> Self {
        let mut out = self.clone();
        if out.parts.twist.is_none() {
            out.parts.twist = Some(Multivector::zero());
        }
        out
    }

    pub fn basis(&self, i: usize) -> Section {
        Section::basis(self.rank(), i)
    }

    pub fn basis_sections(&self) -> Vec<Section> {
        (0..self.rank()).map(|i| self.basis(i)).collect()
    }

    /// `[e_i, e_j]` as stored.
    pub fn basis_bracket(&self, i: usize, j: usize) -> &Section {
        &self.table[i * self.rank() + j]
    }

    pub fn pairing(&self, phi: &Section, psi: &Section) -> Scalar {
        let g = &self.parts.gram;
        let mut acc = Scalar::zero();
        for (i, a) in phi.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in psi.iter().enumerate() {
                let gij = &g[(i, j)];
                if b.is_zero() || gij.is_zero() {
                    continue;
                }
                acc += &(a * gij) * b;
            }
        }
        acc
    }

    /// `ρ(ψ)` as components on `∂_1..∂_n`.
    pub fn anchor_apply(&self, psi: &Section) -> Vec<Scalar> {
        let a = &self.parts.anchor;
        (0..self.nvars())
            .map(|j| {
                let mut acc = Scalar::zero();
                for (i, c) in psi.iter().enumerate() {
                    if !c.is_zero() && !a[(i, j)].is_zero() {
                        acc += c * &a[(i, j)];
                    }
                }
                acc
            })
            .collect()
    }

    /// The anchor row `ρ(e_i)`.
    pub fn anchor_row(&self, i: usize) -> &[Scalar] {
        self.parts.anchor.row(i)
    }

    /// `ρ(ψ)[f]`.
    pub fn anchor_derivative(&self, psi: &Section, f: &Scalar) -> Scalar {
        apply_vector_field(&self.anchor_apply(psi), f)
    }

    /// Solve `⟨ρ*ξ, ψ⟩ = ξ(ρψ)` for a base one-form `ξ` given by components on `dx_1..dx_n`.
    pub fn rho_star(&self, xi: &[Scalar]) -> Result<Section> {
        if self.ring().is_point() {
            if xi.iter().any(|c| !c.is_zero()) {
                return Err(Error::invariant(
                    "one-forms over a point",
                    "a point base has no nonzero one-forms",
                ));
            }
            return Ok(Section::zero(self.rank()));
        }
        if xi.len() != self.nvars() {
            return Err(Error::Degree(format!(
                "one-form has {} components, base has {} variables",
                xi.len(),
                self.nvars()
            )));
        }
        Ok(self.rho_star_unchecked(xi))
    }

    fn rho_star_unchecked(&self, xi: &[Scalar]) -> Section {
        let paired: Vec<Scalar> = self.parts.anchor.mul_vec(xi);
        match &self.gram_inv {
            Some(inv) => Section::new(inv.mul_vec(&paired)),
            None => Section::zero(self.rank()),
        }
    }

    /// The derivation `∂₀ f = ρ*(df)`. Zero over a point, and zero when the
    /// pairing is degenerate (Lie-type kinds never pair against it).
    pub fn d0(&self, f: &Scalar) -> Section {
        if self.ring().is_point() || f.is_constant() {
            return Section::zero(self.rank());
        }
        let df: Vec<Scalar> = (0..self.nvars()).map(|j| f.partial_derivative(j)).collect();
        self.rho_star_unchecked(&df)
    }

    /// The bracket on arbitrary sections.
    ///
    /// Right argument: `[e_i, gψ] = ρ(e_i)[g]ψ + g[e_i, ψ]`.
    /// Left argument: `[fφ, ψ] = f[φ,ψ] − (ρ(ψ)f)φ + ⟨φ,ψ⟩ ∂₀f`.
    pub fn bracket(&self, phi: &Section, psi: &Section) -> Section {
        let r = self.rank();
        let mut out = Section::zero(r);
        let rho_psi = self.anchor_apply(psi);
        let point = self.ring().is_point();
        for (i, f) in phi.iter().enumerate() {
            if f.is_zero() {
                continue;
            }
            // [e_i, ψ]
            let mut ei_psi = Section::zero(r);
            let rho_i = self.anchor_row(i);
            for (j, g) in psi.iter().enumerate() {
                if g.is_zero() {
                    continue;
                }
                if !point && !g.is_constant() {
                    let dg = apply_vector_field(rho_i, g);
                    ei_psi.add_scaled(&self.basis(j), &dg);
                }
                ei_psi.add_scaled(self.basis_bracket(i, j), g);
            }
            out.add_scaled(&ei_psi, f);
            if point || f.is_constant() {
                continue;
            }
            let drift = apply_vector_field(&rho_psi, f);
            if !drift.is_zero() {
                out.add_scaled(&self.basis(i), &-drift);
            }
            let ei_pair = self.pairing(&self.basis(i), psi);
            if !ei_pair.is_zero() {
                out.add_scaled(&self.d0(f), &ei_pair);
            }
        }
        out
    }

    /// The vector-valued three-form of a twisted Lie algebroid on `(a, b, c)`; zero when absent.
    pub fn vector_twist_value(&self, a: &Section, b: &Section, c: &Section) -> Section {
        let r = self.rank();
        let mut out = Section::zero(r);
        let Some(vt) = self.vector_twist() else {
            return out;
        };
        let abc = Multivector::wedge_sections(&[a.clone(), b.clone(), c.clone()]);
        for (&blade, value) in vt {
            let det = abc.coefficient(blade);
            if !det.is_zero() {
                out.add_scaled(value, &det);
            }
        }
        out
    }

    /// `[φ,[ψ1,ψ2]] − [[φ,ψ1],ψ2] − [ψ1,[φ,ψ2]]`.
    pub fn jacobiator(&self, phi: &Section, psi1: &Section, psi2: &Section) -> Section {
        let a = self.bracket(phi, &self.bracket(psi1, psi2));
        let b = self.bracket(&self.bracket(phi, psi1), psi2);
        let c = self.bracket(psi1, &self.bracket(phi, psi2));
        a.sub(&b).sub(&c)
    }

    /// `ρ[φ,ψ] − [ρφ, ρψ]`.
    pub fn anchor_morphism_defect(&self, phi: &Section, psi: &Section) -> Vec<Scalar> {
        let lhs = self.anchor_apply(&self.bracket(phi, psi));
        let rhs = vector_field_bracket(&self.anchor_apply(phi), &self.anchor_apply(psi));
        lhs.iter().zip(&rhs).map(|(a, b)| a - b).collect()
    }

    /// `Λ^p G` applied to a multivector: the covariant components `⟨α, e_J⟩`.
    pub fn lower(&self, alpha: &Multivector) -> Multivector {
        let g = &self.parts.gram;
        alpha.apply_outer(|i| sparse_column(g, i))
    }

    /// Inverse of [`lower`](Self::lower): `Λ^p G⁻¹`.
    pub fn raise(&self, alpha: &Multivector) -> Result<Multivector> {
        let inv = self
            .gram_inv
            .as_ref()
            .ok_or_else(|| Error::invariant("unit-determinant gram", "pairing is degenerate, cannot raise indices"))?;
        Ok(alpha.apply_outer(|i| sparse_column(inv, i)))
    }

    /// Determinant extension of the pairing to `Λ^p`.
    pub fn lambda_pairing(&self, alpha: &Multivector, beta: &Multivector) -> Result<Scalar> {
        let (ga, gb) = (alpha.homogeneous_grade(), beta.homogeneous_grade());
        if let (Some(p), Some(q)) = (ga, gb) {
            if p != q {
                return Err(Error::Degree(format!("cannot pair a {p}-vector with a {q}-vector")));
            }
        } else if alpha.homogeneous_grade().is_none() && !alpha.is_zero()
            || beta.homogeneous_grade().is_none() && !beta.is_zero()
        {
            return Err(Error::Degree("pairing needs homogeneous multivectors".into()));
        }
        Ok(self.lower(alpha).dot(beta))
    }
}

fn sparse_column(m: &SMatrix, i: usize) -> Vec<(usize, Scalar)> {
    (0..m.rows())
        .filter(|&k| !m[(k, i)].is_zero())
        .map(|k| (k, m[(k, i)].clone()))
        .collect()
}

/// Inverse when the determinant is a nonzero constant.
fn unit_inverse(g: &SMatrix) -> Option<SMatrix> {
    if let Some(q) = g.to_rational() {
        return q.inverse().map(|inv| SMatrix::from_rational(&inv));
    }
    let (det, adj) = g.det_adjugate();
    let d = det.as_rational()?;
    if num::Zero::is_zero(&d) {
        return None;
    }
    let inv = d.recip();
    Some(adj.map(|e| e.scale(&inv)))
}

/// `X[f] = Σ X_j ∂_j f`.
pub fn apply_vector_field(x: &[Scalar], f: &Scalar) -> Scalar {
    let mut acc = Scalar::zero();
    if f.is_constant() {
        return acc;
    }
    for (j, xj) in x.iter().enumerate() {
        if xj.is_zero() {
            continue;
        }
        let d = f.partial_derivative(j);
        if !d.is_zero() {
            acc += xj * &d;
        }
    }
    acc
}

/// Lie bracket of polynomial vector fields.
pub fn vector_field_bracket(x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
    (0..x.len().max(y.len()))
        .map(|k| {
            let yk = y.get(k).cloned().unwrap_or_default();
            let xk = x.get(k).cloned().unwrap_or_default();
            &apply_vector_field(x, &yk) - &apply_vector_field(y, &xk)
        })
        .collect()
}
