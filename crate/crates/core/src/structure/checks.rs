//! Axiom suites evaluated on basis tuples and seeded random polynomial sections.

use std::fmt;
use std::str::FromStr;

use super::report::{AxiomCheck, AxiomRun, CheckReport, WitnessValue};
use super::sampler::Sampler;
use super::spec::AlgebroidSpec;
use crate::error::{Error, Result};
use crate::exactmath::Scalar;
use crate::exterior::{blades, indices, Multivector};
use crate::kerforms::{covariant_derivative, rho_tilde, SplitForm};
use crate::section::Section;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Suite {
    Courant,
    StronglyAnchored,
    HTwisted,
    CourantDorfman,
    AlmostCourantDorfman,
    SaCourantDorfman,
    HTwistedCd,
    LieRinehart,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::Courant,
        Suite::StronglyAnchored,
        Suite::HTwisted,
        Suite::CourantDorfman,
        Suite::AlmostCourantDorfman,
        Suite::SaCourantDorfman,
        Suite::HTwistedCd,
        Suite::LieRinehart,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Suite::Courant => "courant",
            Suite::StronglyAnchored => "strongly-anchored",
            Suite::HTwisted => "h-twisted",
            Suite::CourantDorfman => "courant-dorfman",
            Suite::AlmostCourantDorfman => "almost-courant-dorfman",
            Suite::SaCourantDorfman => "sa-courant-dorfman",
            Suite::HTwistedCd => "h-twisted-cd",
            Suite::LieRinehart => "lie-rinehart",
        }
    }

    fn needs_twist(&self) -> bool {
        matches!(self, Suite::HTwisted | Suite::HTwistedCd)
    }

    fn needs_pairing(&self) -> bool {
        !matches!(self, Suite::LieRinehart)
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Suite> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.as_str() == s)
            .ok_or_else(|| Error::parse("suite", format!("unknown suite `{s}`")))
    }
}

/// Controls the randomized part of a check.
#[derive(Clone, Debug)]
pub struct CheckOptions {
    pub seed: u64,
    /// Maximal polynomial degree of random coefficients.
    pub degree: u32,
    /// Number of random sections (and random functions) drawn.
    pub random_sections: usize,
    /// Additional caller-supplied test sections.
    pub extra_sections: Vec<Section>,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions {
            seed: 0,
            degree: 2,
            random_sections: 4,
            extra_sections: Vec::new(),
        }
    }
}

/// Test material shared by the axioms of one suite run.
pub struct Fixture<'a> {
    pub spec: &'a AlgebroidSpec,
    pub basis: Vec<Section>,
    pub random: Vec<Section>,
    pub functions: Vec<Scalar>,
}

impl<'a> Fixture<'a> {
    pub fn new(spec: &'a AlgebroidSpec, opts: &CheckOptions) -> Self {
        let mut sampler = Sampler::new(opts.seed, opts.degree);
        let (r, n) = (spec.rank(), spec.nvars());
        let mut random: Vec<Section> = (0..opts.random_sections).map(|_| sampler.section(r, n)).collect();
        random.extend(opts.extra_sections.iter().cloned());
        let mut functions: Vec<Scalar> = (0..n).map(Scalar::var).collect();
        if n == 0 {
            functions.push(Scalar::one());
        }
        functions.extend((0..opts.random_sections).map(|_| sampler.scalar(n)));
        Fixture {
            spec,
            basis: spec.basis_sections(),
            random,
            functions,
        }
    }

    fn random_pairs(&self) -> Vec<(&Section, &Section)> {
        let k = self.random.len();
        (0..k).map(|i| (&self.random[i], &self.random[(i + 1) % k])).collect()
    }

    fn random_triples(&self) -> Vec<(&Section, &Section, &Section)> {
        let k = self.random.len();
        (0..k)
            .map(|i| (&self.random[i], &self.random[(i + 1) % k], &self.random[(i + 2) % k]))
            .collect()
    }

    fn basis_triples(&self) -> Vec<(&Section, &Section, &Section)> {
        let b = &self.basis;
        let mut out = Vec::with_capacity(b.len().pow(3));
        for x in b {
            for y in b {
                for z in b {
                    out.push((x, y, z));
                }
            }
        }
        out
    }

    fn basis_pairs(&self) -> Vec<(&Section, &Section)> {
        let b = &self.basis;
        b.iter().flat_map(|x| b.iter().map(move |y| (x, y))).collect()
    }

    /// `⟨ψ, ∂₀ f⟩`: the anchor read through the derivation.
    fn cd_anchor(&self, psi: &Section, f: &Scalar) -> Scalar {
        self.spec.pairing(psi, &self.spec.d0(f))
    }
}

fn sec(s: &Section) -> WitnessValue {
    WitnessValue::from(s)
}

pub fn jacobi(fx: &Fixture) -> AxiomCheck {
    let mut run = AxiomRun::new("jacobi");
    for (a, b, c) in fx.basis_triples().into_iter().chain(fx.random_triples()) {
        run.section_case(&[a, b, c], fx.spec.jacobiator(a, b, c));
    }
    run.finish()
}

/// Jacobiator minus the split twist.
pub fn h_jacobi(fx: &Fixture, h: &Multivector) -> Result<AxiomCheck> {
    let split = SplitForm::from_form(fx.spec, 4, h)?;
    let mut run = AxiomRun::new("h-jacobi");
    for (a, b, c) in fx.basis_triples().into_iter().chain(fx.random_triples()) {
        let jac = fx.spec.jacobiator(a, b, c);
        let ht = split.apply(&[a.clone(), b.clone(), c.clone()]);
        run.section_case(&[a, b, c], jac.sub(&ht));
    }
    Ok(run.finish())
}

pub fn dh_closed(fx: &Fixture, h: &Multivector) -> Result<AxiomCheck> {
    let mut run = AxiomRun::new("dh-closed");
    let dh = covariant_derivative(fx.spec, h, 4)?;
    let defect = (!dh.is_zero()).then(|| WitnessValue::from(&dh));
    run.case(|| vec![WitnessValue::from(h)], defect);
    Ok(run.finish())
}

/// `H ∈ ker ρ̃` and every `H̃(e_a, e_b, e_c)` in `ker ρ`.
pub fn h_kernel(fx: &Fixture, h: &Multivector) -> Result<AxiomCheck> {
    let mut run = AxiomRun::new("h-kernel");
    let comps = rho_tilde(fx.spec, h);
    let bad = comps.iter().enumerate().find(|(_, c)| !c.is_zero());
    run.case(
        || vec![WitnessValue::from(h)],
        bad.map(|(j, c)| WitnessValue::note(format!("d{} component {:?}", j + 1, c.to_literal()))),
    );
    let split = SplitForm::from_form(fx.spec, 4, h)?;
    let r = fx.spec.rank();
    for a in 0..r {
        for b in a + 1..r {
            for c in b + 1..r {
                let v = split.apply_basis(&[a, b, c]);
                let rho = fx.spec.anchor_apply(&v);
                let defect = rho
                    .iter()
                    .any(|x| !x.is_zero())
                    .then(|| WitnessValue::vector_field(&rho));
                run.case(|| vec![sec(&fx.basis[a]), sec(&fx.basis[b]), sec(&fx.basis[c])], defect);
            }
        }
    }
    Ok(run.finish())
}

/// `[φ, fψ] − ρ(φ)[f]ψ − f[φ,ψ]`, with the anchor read through `∂₀` when `via_d0`.
fn leibniz_with(fx: &Fixture, via_d0: bool) -> AxiomCheck {
    let mut run = AxiomRun::new("leibniz");
    let spec = fx.spec;
    let mut cases: Vec<(&Section, &Section, &Scalar)> = Vec::new();
    for (a, b) in fx.basis_pairs() {
        for f in &fx.functions {
            cases.push((a, b, f));
        }
    }
    for (i, (a, b)) in fx.random_pairs().into_iter().enumerate() {
        cases.push((a, b, &fx.functions[i % fx.functions.len()]));
    }
    for (phi, psi, f) in cases {
        let lhs = spec.bracket(phi, &psi.scale(f));
        let df = if via_d0 {
            fx.cd_anchor(phi, f)
        } else {
            spec.anchor_derivative(phi, f)
        };
        let rhs = psi.scale(&df).add(&spec.bracket(phi, psi).scale(f));
        let defect = lhs.sub(&rhs);
        let d = (!defect.is_zero()).then(|| sec(&defect));
        run.case(|| vec![sec(phi), sec(psi), WitnessValue::from(f)], d);
    }
    run.finish()
}

pub fn leibniz(fx: &Fixture) -> AxiomCheck {
    leibniz_with(fx, false)
}

/// `[ψ,ψ] = ½∂₀⟨ψ,ψ⟩`, polarized on basis pairs.
pub fn nskew(fx: &Fixture) -> AxiomCheck {
    let mut run = AxiomRun::new("nskew");
    let spec = fx.spec;
    let b = &fx.basis;
    for i in 0..b.len() {
        for j in i..b.len() {
            let sym = spec.bracket(&b[i], &b[j]).add(&spec.bracket(&b[j], &b[i]));
            let defect = sym.sub(&spec.d0(&spec.pairing(&b[i], &b[j])));
            run.section_case(&[&b[i], &b[j]], defect);
        }
    }
    let half = Scalar::ratio(1, 2);
    for psi in &fx.random {
        let defect = spec
            .bracket(psi, psi)
            .sub(&spec.d0(&spec.pairing(psi, psi)).scale(&half));
        run.section_case(&[psi], defect);
    }
    run.finish()
}

/// `ρ(φ)⟨ψ,ψ⟩ = 2⟨[φ,ψ],ψ⟩`, polarized on basis triples.
fn adinv_with(fx: &Fixture, via_d0: bool) -> AxiomCheck {
    let mut run = AxiomRun::new("adinv");
    let spec = fx.spec;
    let deriv = |phi: &Section, f: &Scalar| {
        if via_d0 {
            fx.cd_anchor(phi, f)
        } else {
            spec.anchor_derivative(phi, f)
        }
    };
    let b = &fx.basis;
    for phi in b {
        for i in 0..b.len() {
            for j in i..b.len() {
                let lhs = deriv(phi, &spec.pairing(&b[i], &b[j]));
                let rhs =
                    &spec.pairing(&spec.bracket(phi, &b[i]), &b[j]) + &spec.pairing(&b[i], &spec.bracket(phi, &b[j]));
                run.scalar_case(|| vec![sec(phi), sec(&b[i]), sec(&b[j])], &lhs - &rhs);
            }
        }
    }
    for (phi, psi) in fx.random_pairs() {
        let lhs = deriv(phi, &spec.pairing(psi, psi));
        let rhs = spec
            .pairing(&spec.bracket(phi, psi), psi)
            .scale(&crate::exactmath::rat(2, 1));
        run.scalar_case(|| vec![sec(phi), sec(psi)], &lhs - &rhs);
    }
    run.finish()
}

pub fn adinv(fx: &Fixture) -> AxiomCheck {
    adinv_with(fx, false)
}

pub fn rho_morphism(fx: &Fixture) -> AxiomCheck {
    let mut run = AxiomRun::new("rho-morphism");
    for (a, b) in fx.basis_pairs().into_iter().chain(fx.random_pairs()) {
        let d = fx.spec.anchor_morphism_defect(a, b);
        let defect = d.iter().any(|x| !x.is_zero()).then(|| WitnessValue::vector_field(&d));
        run.case(|| vec![sec(a), sec(b)], defect);
    }
    run.finish()
}

/// `[∂₀f, φ] = 0`.
pub fn exact_bracket(fx: &Fixture) -> AxiomCheck {
    let mut run = AxiomRun::new("exact-bracket");
    for f in &fx.functions {
        let df = fx.spec.d0(f);
        for phi in fx.basis.iter().chain(&fx.random) {
            let defect = fx.spec.bracket(&df, phi);
            let d = (!defect.is_zero()).then(|| sec(&defect));
            run.case(|| vec![WitnessValue::from(f), sec(phi)], d);
        }
    }
    run.finish()
}

/// `⟨∂₀f, ∂₀g⟩ = 0`.
pub fn exact_isotropic(fx: &Fixture) -> AxiomCheck {
    let mut run = AxiomRun::new("exact-isotropic");
    let ds: Vec<Section> = fx.functions.iter().map(|f| fx.spec.d0(f)).collect();
    for (i, f) in fx.functions.iter().enumerate() {
        for (j, g) in fx.functions.iter().enumerate().skip(i) {
            run.scalar_case(
                || vec![WitnessValue::from(f), WitnessValue::from(g)],
                fx.spec.pairing(&ds[i], &ds[j]),
            );
        }
    }
    run.finish()
}

/// `⟨[ψ,φ],∂₀f⟩ = ⟨ψ,∂₀⟨φ,∂₀f⟩⟩ − ⟨φ,∂₀⟨ψ,∂₀f⟩⟩`.
pub fn anchor_compat(fx: &Fixture) -> AxiomCheck {
    let mut run = AxiomRun::new("anchor-compat");
    let spec = fx.spec;
    let mut cases: Vec<(&Section, &Section)> = fx.basis_pairs();
    cases.extend(fx.random_pairs());
    for (psi, phi) in cases {
        for f in &fx.functions {
            let lhs = fx.cd_anchor(&spec.bracket(psi, phi), f);
            let rhs = &fx.cd_anchor(psi, &fx.cd_anchor(phi, f)) - &fx.cd_anchor(phi, &fx.cd_anchor(psi, f));
            run.scalar_case(|| vec![sec(psi), sec(phi), WitnessValue::from(f)], &lhs - &rhs);
        }
    }
    run.finish()
}

/// `H ∈ ker ι_{∂₀R}`, tested on the ring generators.
pub fn h_cochain(fx: &Fixture, h: &Multivector) -> AxiomCheck {
    let mut run = AxiomRun::new("h-cochain");
    let low = fx.spec.lower(h);
    for j in 0..fx.spec.nvars() {
        let x = Scalar::var(j);
        let c = low.interior(&fx.spec.d0(&x));
        let defect = (!c.is_zero()).then(|| WitnessValue::from(&c));
        run.case(|| vec![WitnessValue::from(h), WitnessValue::from(&x)], defect);
    }
    run.finish()
}

pub fn skew(fx: &Fixture) -> AxiomCheck {
    let mut run = AxiomRun::new("skew");
    for (a, b) in fx.basis_pairs().into_iter().chain(fx.random_pairs()) {
        let defect = fx.spec.bracket(a, b).add(&fx.spec.bracket(b, a));
        run.section_case(&[a, b], defect);
    }
    run.finish()
}

/// `[ψ1,[ψ2,ψ3]] + cycl. = 0`.
pub fn cyclic_jacobi(fx: &Fixture) -> AxiomCheck {
    let mut run = AxiomRun::new("jacobi");
    let br = |x: &Section, y: &Section| fx.spec.bracket(x, y);
    for (a, b, c) in fx.basis_triples().into_iter().chain(fx.random_triples()) {
        let defect = br(a, &br(b, c)).add(&br(b, &br(c, a))).add(&br(c, &br(a, b)));
        run.section_case(&[a, b, c], defect.sub(&fx.spec.vector_twist_value(a, b, c)));
    }
    run.finish()
}

/// `ρ H(e_a, e_b, e_c) = 0` for the vector-valued twist.
pub fn vector_h_kernel(fx: &Fixture) -> AxiomCheck {
    let mut run = AxiomRun::new("h-kernel");
    let b = &fx.basis;
    for ix in blades(b.len(), 3).into_iter().map(indices) {
        let (x, y, z) = (&b[ix[0]], &b[ix[1]], &b[ix[2]]);
        let v = fx.spec.vector_twist_value(x, y, z);
        let rho = fx.spec.anchor_apply(&v);
        let defect = rho
            .iter()
            .any(|c| !c.is_zero())
            .then(|| WitnessValue::vector_field(&rho));
        run.case(|| vec![sec(x), sec(y), sec(z)], defect);
    }
    run.finish()
}

/// `D̲H = 0`, with `∇_ψ v = [ψ, v]` in place of the anchor terms.
pub fn vector_h_closed(fx: &Fixture) -> AxiomCheck {
    let mut run = AxiomRun::new("h-closed");
    let spec = fx.spec;
    let b = &fx.basis;
    for ix in blades(b.len(), 4).into_iter().map(indices) {
        let x: Vec<&Section> = ix.iter().map(|&i| &b[i]).collect();
        let mut out = Section::zero(spec.rank());
        for m in 0..4 {
            let rest: Vec<&Section> = (0..4).filter(|&t| t != m).map(|t| x[t]).collect();
            let term = spec.bracket(x[m], &spec.vector_twist_value(rest[0], rest[1], rest[2]));
            out = if m % 2 == 0 { out.add(&term) } else { out.sub(&term) };
        }
        for m in 0..4 {
            for n in m + 1..4 {
                let rest: Vec<&Section> = (0..4).filter(|&t| t != m && t != n).map(|t| x[t]).collect();
                let term = spec.vector_twist_value(&spec.bracket(x[m], x[n]), rest[0], rest[1]);
                out = if (m + n) % 2 == 0 {
                    out.add(&term)
                } else {
                    out.sub(&term)
                };
            }
        }
        run.section_case(&x, out);
    }
    run.finish()
}

/// Evaluate a suite. Axioms are reported in a fixed order.
pub fn check_axioms(spec: &AlgebroidSpec, suite: Suite, opts: &CheckOptions) -> Result<CheckReport> {
    let inapplicable = |reason: &str| Error::Inapplicable {
        suite: suite.as_str().into(),
        reason: reason.into(),
    };
    if suite.needs_pairing() && spec.gram_inverse().is_none() {
        return Err(inapplicable("the pairing is degenerate"));
    }
    let twist = spec.twist();
    if suite.needs_twist() && twist.is_none() {
        return Err(inapplicable("the spec carries no twist"));
    }
    let h = twist.cloned().unwrap_or_default();
    let fx = Fixture::new(spec, opts);
    let mut report = CheckReport::new(suite.as_str());
    match suite {
        Suite::Courant => {
            report.push(jacobi(&fx));
            report.push(leibniz(&fx));
            report.push(nskew(&fx));
            report.push(adinv(&fx));
        }
        Suite::StronglyAnchored => {
            report.push(rho_morphism(&fx));
            report.push(leibniz(&fx));
            report.push(nskew(&fx));
            report.push(adinv(&fx));
        }
        Suite::HTwisted => {
            report.push(h_jacobi(&fx, &h)?);
            report.push(dh_closed(&fx, &h)?);
            report.push(leibniz(&fx));
            report.push(nskew(&fx));
            report.push(adinv(&fx));
            report.push(h_kernel(&fx, &h)?);
        }
        Suite::CourantDorfman => {
            report.push(leibniz_with(&fx, true));
            report.push(adinv_with(&fx, true));
            report.push(nskew(&fx));
            report.push(jacobi(&fx));
            report.push(exact_bracket(&fx));
            report.push(exact_isotropic(&fx));
        }
        Suite::AlmostCourantDorfman => {
            report.push(leibniz_with(&fx, true));
            report.push(adinv_with(&fx, true));
            report.push(nskew(&fx));
        }
        Suite::SaCourantDorfman => {
            report.push(leibniz_with(&fx, true));
            report.push(adinv_with(&fx, true));
            report.push(nskew(&fx));
            report.push(anchor_compat(&fx));
        }
        Suite::HTwistedCd => {
            report.push(leibniz_with(&fx, true));
            report.push(adinv_with(&fx, true));
            report.push(nskew(&fx));
            report.push(h_jacobi(&fx, &h)?);
            report.push(dh_closed(&fx, &h)?);
            report.push(exact_bracket(&fx));
            report.push(exact_isotropic(&fx));
            report.push(h_cochain(&fx, &h));
        }
        Suite::LieRinehart => {
            report.push(skew(&fx));
            report.push(cyclic_jacobi(&fx));
            report.push(leibniz(&fx));
            report.push(rho_morphism(&fx));
            if spec.vector_twist().is_some() {
                report.push(vector_h_kernel(&fx));
                report.push(vector_h_closed(&fx));
            }
        }
    }
    Ok(report)
}
