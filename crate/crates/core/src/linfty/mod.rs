//! The two-term L∞-algebra of a Courant algebroid, classical or twisted.

use crate::error::{Error, Result};
use crate::exactmath::{Monomial, Rational, Scalar};
use crate::kerforms::{kerform_basis, SplitForm};
use crate::section::Section;
use crate::structure::{AlgebroidSpec, AxiomCheck, AxiomRun, CheckReport, Sampler, WitnessValue};

/// Degree of the monomial coefficients spanning the `V1` test basis.
const V1_TRUNCATION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Packaging {
    /// `V1` = functions, `∂ = ρ*∘d`.
    Classical,
    /// `V1` = sections of `ker ρ`, `∂` = inclusion.
    Twisted,
}

/// Which correction term `l3` carries.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum L3Variant {
    /// `H̃(ψ1,ψ2,ψ3) − 1/6 ∂⟨l2(ψ1,ψ2),ψ3⟩ + cycl.`
    Calibrated,
    /// `H̃(ψ1,ψ2,ψ3) + 1/6 ∂⟨[ψ1,ψ2],ψ3⟩ + cycl.` with the Dorfman bracket.
    Literal,
    /// `l3 ≡ 0`.
    Zero,
}

/// An element of the degree-one space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum V1 {
    Function(Scalar),
    Section(Section),
}

impl V1 {
    pub fn is_zero(&self) -> bool {
        match self {
            V1::Function(f) => f.is_zero(),
            V1::Section(s) => s.is_zero(),
        }
    }

    fn combine(&self, other: &V1, sign: i64) -> V1 {
        let c = Scalar::int(sign);
        match (self, other) {
            (V1::Function(a), V1::Function(b)) => V1::Function(a + &(&c * b)),
            (V1::Section(a), V1::Section(b)) => V1::Section(a.add(&b.scale(&c))),
            _ => panic!("mixed packagings in one L-infinity expression"),
        }
    }

    pub fn add(&self, other: &V1) -> V1 {
        self.combine(other, 1)
    }

    pub fn sub(&self, other: &V1) -> V1 {
        self.combine(other, -1)
    }

    pub fn scale(&self, f: &Scalar) -> V1 {
        match self {
            V1::Function(a) => V1::Function(a * f),
            V1::Section(s) => V1::Section(s.scale(f)),
        }
    }
}

impl From<&V1> for WitnessValue {
    fn from(v: &V1) -> Self {
        match v {
            V1::Function(f) => WitnessValue::from(f),
            V1::Section(s) => WitnessValue::from(s),
        }
    }
}

#[derive(Clone, Debug)]
pub struct LInftyData {
    spec: AlgebroidSpec,
    packaging: Packaging,
    l3_variant: L3Variant,
    split: Option<SplitForm>,
    v0_basis: Vec<Section>,
    v1_basis: Vec<V1>,
}

fn require_pairing(spec: &AlgebroidSpec) -> Result<()> {
    if spec.gram_inverse().is_none() {
        return Err(Error::Inapplicable {
            suite: "linfty".into(),
            reason: "the pairing is degenerate".into(),
        });
    }
    Ok(())
}

pub fn build_twisted(spec: &AlgebroidSpec) -> Result<LInftyData> {
    require_pairing(spec)?;
    let h = spec.twist().ok_or(Error::MissingTwist)?;
    let split = SplitForm::from_form(spec, 4, h)?;
    let v1_basis = kerform_basis(spec, 1, Some(V1_TRUNCATION))?
        .into_iter()
        .map(|k| {
            let r = spec.rank();
            V1::Section((0..r).map(|i| k.form().coefficient(1 << i)).collect())
        })
        .collect();
    Ok(LInftyData {
        spec: spec.clone(),
        packaging: Packaging::Twisted,
        l3_variant: L3Variant::Calibrated,
        split: Some(split),
        v0_basis: spec.basis_sections(),
        v1_basis,
    })
}

pub fn build_classical(spec: &AlgebroidSpec) -> Result<LInftyData> {
    require_pairing(spec)?;
    if spec.twist().is_some_and(|h| !h.is_zero()) {
        return Err(Error::Inapplicable {
            suite: "linfty".into(),
            reason: "the classical packaging needs an untwisted spec".into(),
        });
    }
    let v1_basis = Monomial::up_to_degree(spec.nvars(), 2)
        .into_iter()
        .map(|m| V1::Function(Scalar::monomial(m, Rational::from_integer(1.into()))))
        .collect();
    Ok(LInftyData {
        spec: spec.clone(),
        packaging: Packaging::Classical,
        l3_variant: L3Variant::Calibrated,
        split: None,
        v0_basis: spec.basis_sections(),
        v1_basis,
    })
}

impl LInftyData {
    pub fn with_l3(mut self, variant: L3Variant) -> Self {
        self.l3_variant = variant;
        self
    }

    pub fn spec(&self) -> &AlgebroidSpec {
        &self.spec
    }

    pub fn packaging(&self) -> Packaging {
        self.packaging
    }

    pub fn l3_variant(&self) -> L3Variant {
        self.l3_variant
    }

    pub fn v0_basis(&self) -> &[Section] {
        &self.v0_basis
    }

    pub fn v1_basis(&self) -> &[V1] {
        &self.v1_basis
    }

    pub fn v1_zero(&self) -> V1 {
        match self.packaging {
            Packaging::Classical => V1::Function(Scalar::zero()),
            Packaging::Twisted => V1::Section(Section::zero(self.spec.rank())),
        }
    }

    /// A degree-zero function seen in `V1`: itself, or `∂₀ f`.
    fn function_term(&self, f: Scalar) -> V1 {
        match self.packaging {
            Packaging::Classical => V1::Function(f),
            Packaging::Twisted => V1::Section(self.spec.d0(&f)),
        }
    }

    pub fn differential(&self, v: &V1) -> Section {
        match v {
            V1::Function(f) => self.spec.d0(f),
            V1::Section(s) => s.clone(),
        }
    }

    pub fn l2(&self, a: &Section, b: &Section) -> Section {
        let corr = self.spec.d0(&self.spec.pairing(a, b)).scale(&Scalar::ratio(1, 2));
        self.spec.bracket(a, b).sub(&corr)
    }

    /// `φ ▷ v`.
    pub fn act(&self, phi: &Section, v: &V1) -> V1 {
        match v {
            V1::Function(f) => {
                let p = self.spec.pairing(phi, &self.spec.d0(f));
                V1::Function(&p * &Scalar::ratio(1, 2))
            }
            V1::Section(s) => V1::Section(self.l2(phi, s)),
        }
    }

    pub fn l3(&self, a: &Section, b: &Section, c: &Section) -> V1 {
        let mut out = match (&self.split, self.l3_variant) {
            (Some(split), L3Variant::Calibrated | L3Variant::Literal) => {
                V1::Section(split.apply(&[a.clone(), b.clone(), c.clone()]))
            }
            _ => self.v1_zero(),
        };
        let (coeff, inner): (Scalar, BinaryOp) = match self.l3_variant {
            L3Variant::Zero => return out,
            L3Variant::Calibrated => (Scalar::ratio(-1, 6), Self::l2),
            L3Variant::Literal => (Scalar::ratio(1, 6), |d, x, y| d.spec.bracket(x, y)),
        };
        let mut t = Scalar::zero();
        for (x, y, z) in [(a, b, c), (b, c, a), (c, a, b)] {
            t += &self.spec.pairing(&inner(self, x, y), z);
        }
        out = out.add(&self.function_term(&t * &coeff));
        out
    }
}

type BinaryOp = fn(&LInftyData, &Section, &Section) -> Section;

#[derive(Clone, Debug)]
pub struct LInftyOptions {
    pub seed: u64,
    pub degree: u32,
    /// Random tuples per equation on top of the basis tuples.
    pub tuples: usize,
}

impl Default for LInftyOptions {
    fn default() -> Self {
        LInftyOptions {
            seed: 0,
            degree: 1,
            tuples: 3,
        }
    }
}

struct Samples {
    v0: Vec<Section>,
    v1: Vec<V1>,
}

impl Samples {
    fn new(data: &LInftyData, opts: &LInftyOptions) -> Self {
        let spec = &data.spec;
        let (r, n) = (spec.rank(), spec.nvars());
        let mut sampler = Sampler::new(opts.seed, opts.degree);
        let v0 = (0..opts.tuples.max(1) + 3).map(|_| sampler.section(r, n)).collect();
        let v1 = (0..opts.tuples)
            .map(|_| match data.packaging {
                Packaging::Classical => V1::Function(sampler.scalar(n)),
                Packaging::Twisted => data
                    .v1_basis
                    .iter()
                    .fold(data.v1_zero(), |acc, v| acc.add(&v.scale(&sampler.scalar(n)))),
            })
            .filter(|v| !v.is_zero())
            .collect();
        Samples { v0, v1 }
    }

    fn tuple(&self, start: usize, k: usize) -> Vec<&Section> {
        (0..k).map(|i| &self.v0[(start + i) % self.v0.len()]).collect()
    }
}

/// Strictly increasing index tuples of length `k` below `r`.
fn increasing(r: usize, k: usize) -> Vec<Vec<usize>> {
    crate::exterior::blades(r, k)
        .into_iter()
        .map(crate::exterior::indices)
        .collect()
}

fn witness(args: &[&Section], extra: &[&V1]) -> Vec<WitnessValue> {
    let mut out: Vec<WitnessValue> = args.iter().map(|s| WitnessValue::from(*s)).collect();
    out.extend(extra.iter().map(|v| WitnessValue::from(*v)));
    out
}

fn v1_case(run: &mut AxiomRun, args: &[&Section], extra: &[&V1], defect: V1) {
    let d = (!defect.is_zero()).then(|| WitnessValue::from(&defect));
    run.case(|| witness(args, extra), d);
}

impl LInftyData {
    fn v0_tuples<'a>(&'a self, samples: &'a Samples, k: usize) -> Vec<Vec<&'a Section>> {
        let mut out: Vec<Vec<&Section>> = increasing(self.v0_basis.len(), k)
            .into_iter()
            .map(|ix| ix.into_iter().map(|i| &self.v0_basis[i]).collect())
            .collect();
        out.extend((0..samples.v0.len()).map(|s| samples.tuple(s, k)));
        out
    }

    fn v1_elements<'a>(&'a self, samples: &'a Samples) -> Vec<&'a V1> {
        self.v1_basis.iter().chain(&samples.v1).collect()
    }

    fn eq_n2(&self, s: &Samples) -> AxiomCheck {
        let mut run = AxiomRun::new("n=2");
        for phi in self.v0_tuples(s, 1) {
            for v in self.v1_elements(s) {
                let lhs = self.l2(phi[0], &self.differential(v));
                let rhs = self.differential(&self.act(phi[0], v));
                v1_case(&mut run, &phi, &[v], V1::Section(lhs.sub(&rhs)));
            }
        }
        run.finish()
    }

    fn eq_n2b(&self, s: &Samples) -> AxiomCheck {
        let mut run = AxiomRun::new("n=2b");
        let vs = self.v1_elements(s);
        for (i, f) in vs.iter().enumerate() {
            for g in &vs[i..] {
                let a = self.act(&self.differential(f), g);
                let b = self.act(&self.differential(g), f);
                v1_case(&mut run, &[], &[f, g], a.add(&b));
            }
        }
        run.finish()
    }

    fn eq_n3(&self, s: &Samples) -> AxiomCheck {
        let mut run = AxiomRun::new("n=3");
        for t in self.v0_tuples(s, 3) {
            let (a, b, c) = (t[0], t[1], t[2]);
            let mut lhs = Section::zero(self.spec.rank());
            for (x, y, z) in [(a, b, c), (b, c, a), (c, a, b)] {
                lhs = lhs.add(&self.l2(x, &self.l2(y, z)));
            }
            let rhs = self.differential(&self.l3(a, b, c));
            run.section_case(&t, lhs.sub(&rhs));
        }
        run.finish()
    }

    fn eq_n3b(&self, s: &Samples) -> AxiomCheck {
        let mut run = AxiomRun::new("n=3b");
        let vs = self.v1_elements(s);
        for t in self.v0_tuples(s, 2) {
            let (a, b) = (t[0], t[1]);
            let ab = self.l2(a, b);
            for v in &vs {
                let lhs = self
                    .act(a, &self.act(b, v))
                    .sub(&self.act(b, &self.act(a, v)))
                    .sub(&self.act(&ab, v));
                let rhs = self.l3(a, b, &self.differential(v));
                v1_case(&mut run, &t, &[v], lhs.sub(&rhs));
            }
        }
        run.finish()
    }

    /// `Σ_{(2,2)} ε l3(l2(x,y),z,w) − Σ_{(1,3)} ε x ▷ l3(y,z,w)`.
    pub fn n4_defect(&self, x: [&Section; 4]) -> V1 {
        let (a, b) = self.n4_parts(x);
        a.sub(&b)
    }

    fn n4_parts(&self, x: [&Section; 4]) -> (V1, V1) {
        const SPLIT_22: [([usize; 4], i64); 6] = [
            ([0, 1, 2, 3], 1),
            ([0, 2, 1, 3], -1),
            ([0, 3, 1, 2], 1),
            ([1, 2, 0, 3], 1),
            ([1, 3, 0, 2], -1),
            ([2, 3, 0, 1], 1),
        ];
        const SPLIT_13: [([usize; 4], i64); 4] = [
            ([0, 1, 2, 3], 1),
            ([1, 0, 2, 3], -1),
            ([2, 0, 1, 3], 1),
            ([3, 0, 1, 2], -1),
        ];
        let mut inner = self.v1_zero();
        for (p, sign) in SPLIT_22 {
            let term = self.l3(&self.l2(x[p[0]], x[p[1]]), x[p[2]], x[p[3]]);
            inner = inner.add(&term.scale(&Scalar::int(sign)));
        }
        let mut outer = self.v1_zero();
        for (p, sign) in SPLIT_13 {
            let term = self.act(x[p[0]], &self.l3(x[p[1]], x[p[2]], x[p[3]]));
            outer = outer.add(&term.scale(&Scalar::int(sign)));
        }
        (inner, outer)
    }

    fn eq_n4(&self, s: &Samples) -> AxiomCheck {
        let mut run = AxiomRun::new("n=4");
        for t in self.v0_tuples(s, 4) {
            let defect = self.n4_defect([t[0], t[1], t[2], t[3]]);
            v1_case(&mut run, &t, &[], defect);
        }
        run.finish()
    }
}

/// Check the five two-term L∞ equations on basis tuples and seeded random tuples.
pub fn verify_linfty(data: &LInftyData, opts: &LInftyOptions) -> CheckReport {
    let samples = Samples::new(data, opts);
    let mut report = CheckReport::new("linfty");
    report.push(data.eq_n2(&samples));
    report.push(data.eq_n2b(&samples));
    report.push(data.eq_n3(&samples));
    report.push(data.eq_n3b(&samples));
    report.push(data.eq_n4(&samples));
    report
}

#[cfg(test)]
mod tests;
