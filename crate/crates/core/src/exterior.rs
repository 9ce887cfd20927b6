//! Exterior powers of a free module with a fixed basis.
//!
//! A basis wedge `e_{i1} ∧ … ∧ e_{ip}` with `i1 < … < ip` is a bitmask
//! ([`Blade`]); a [`Multivector`] maps blades to nonzero coefficients.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactmath::Scalar;
use crate::section::Section;

pub type Blade = u32;

pub fn grade(b: Blade) -> usize {
    b.count_ones() as usize
}

/// Indices of a blade in increasing order.
pub fn indices(b: Blade) -> Vec<usize> {
    (0..32).filter(|i| b & (1 << i) != 0).collect()
}

pub fn blade_of(indices: &[usize]) -> Result<Blade> {
    let mut b: Blade = 0;
    let mut last: Option<usize> = None;
    for &i in indices {
        if i >= 32 {
            return Err(Error::parse("wedge indices", format!("index {i} out of range")));
        }
        if last.is_some_and(|l| l >= i) {
            return Err(Error::parse(
                "wedge indices",
                format!("indices {indices:?} are not strictly increasing"),
            ));
        }
        last = Some(i);
        b |= 1 << i;
    }
    Ok(b)
}

/// Sign of `e_a ∧ e_b` relative to the sorted blade `a | b` (0 when they overlap).
pub fn wedge_sign(a: Blade, b: Blade) -> i32 {
    if a & b != 0 {
        return 0;
    }
    let mut swaps = 0u32;
    let mut rest = b;
    while rest != 0 {
        let i = rest.trailing_zeros();
        swaps += (a >> (i + 1)).count_ones();
        rest &= rest - 1;
    }
    if swaps.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// All blades of grade `p` among `n` basis vectors, in increasing numeric order.
pub fn blades(n: usize, p: usize) -> Vec<Blade> {
    if p > n {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut combo: Vec<usize> = (0..p).collect();
    loop {
        out.push(combo.iter().fold(0, |b, &i| b | (1 << i)));
        let mut k = p;
        loop {
            if k == 0 {
                out.sort_unstable();
                return out;
            }
            k -= 1;
            if combo[k] < n - p + k {
                combo[k] += 1;
                for j in k + 1..p {
                    combo[j] = combo[j - 1] + 1;
                }
                break;
            }
        }
    }
}

fn signed(s: &Scalar, sign: i32) -> Scalar {
    if sign < 0 {
        -s
    } else {
        s.clone()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Multivector {
    terms: BTreeMap<Blade, Scalar>,
}

impl Multivector {
    pub fn zero() -> Self {
        Multivector::default()
    }

    pub fn scalar(c: Scalar) -> Self {
        Multivector::blade(0, c)
    }

    pub fn blade(b: Blade, c: Scalar) -> Self {
        let mut m = Multivector::zero();
        m.add_term(b, c);
        m
    }

    pub fn from_section(s: &Section) -> Self {
        let mut m = Multivector::zero();
        for (i, c) in s.iter().enumerate() {
            m.add_term(1 << i, c.clone());
        }
        m
    }

    /// Wedge of a list of sections, `s1 ∧ s2 ∧ …` (the unit for an empty list).
    pub fn wedge_sections(sections: &[Section]) -> Self {
        sections.iter().fold(Multivector::scalar(Scalar::one()), |acc, s| {
            acc.wedge(&Multivector::from_section(s))
        })
    }

    pub fn add_term(&mut self, b: Blade, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&b) {
            Some(existing) => {
                *existing += &c;
                if existing.is_zero() {
                    self.terms.remove(&b);
                }
            }
            None => {
                self.terms.insert(b, c);
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (Blade, &Scalar)> {
        self.terms.iter().map(|(&b, c)| (b, c))
    }

    pub fn coefficient(&self, b: Blade) -> Scalar {
        self.terms.get(&b).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// The common grade of all terms, `None` for mixed grades; zero counts as any grade.
    pub fn homogeneous_grade(&self) -> Option<usize> {
        let mut grades = self.terms.keys().map(|&b| grade(b));
        let first = grades.next()?;
        grades.all(|g| g == first).then_some(first)
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        let mut out = Multivector::zero();
        if c.is_zero() {
            return out;
        }
        for (&b, v) in &self.terms {
            out.add_term(b, v * c);
        }
        out
    }

    pub fn add(&self, other: &Multivector) -> Self {
        let mut out = self.clone();
        for (&b, c) in &other.terms {
            out.add_term(b, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Multivector) -> Self {
        let mut out = self.clone();
        for (&b, c) in &other.terms {
            out.add_term(b, -c);
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(&Scalar::int(-1))
    }

    pub fn wedge(&self, other: &Multivector) -> Self {
        let mut out = Multivector::zero();
        for (&a, ca) in &self.terms {
            for (&b, cb) in &other.terms {
                let s = wedge_sign(a, b);
                if s != 0 {
                    out.add_term(a | b, signed(&(ca * cb), s));
                }
            }
        }
        out
    }

    /// Interior product with a covector `c` (components on the basis),
    /// contracting from the left: `ι_c(ψ1∧…∧ψp) = Σ (-1)^k c(ψk) ψ1∧…ψ̂k…∧ψp`.
    pub fn interior(&self, covector: &[Scalar]) -> Self {
        let mut out = Multivector::zero();
        for (&b, coeff) in &self.terms {
            for (pos, i) in indices(b).into_iter().enumerate() {
                let Some(ci) = covector.get(i) else { continue };
                if ci.is_zero() {
                    continue;
                }
                let sign = if pos % 2 == 0 { 1 } else { -1 };
                out.add_term(b & !(1 << i), signed(&(coeff * ci), sign));
            }
        }
        out
    }

    /// Contraction by a multivector of covector components, adjoint to `χ ∧ ·`
    /// under [`dot`](Self::dot): `(self ⌊ χ) · β = self · (χ ∧ β)`.
    pub fn left_contract(&self, chi: &Multivector) -> Self {
        let mut out = Multivector::zero();
        for (&a, ca) in &self.terms {
            for (&b, cb) in &chi.terms {
                if a & b != b {
                    continue;
                }
                let rest = a & !b;
                out.add_term(rest, signed(&(ca * cb), wedge_sign(b, rest)));
            }
        }
        out
    }

    /// Rational coordinates keyed by `(blade, monomial)`.
    pub fn coordinates(&self) -> Vec<((Blade, crate::exactmath::Monomial), crate::exactmath::Rational)> {
        self.terms
            .iter()
            .flat_map(|(&b, c)| c.terms().iter().map(move |(m, q)| ((b, m.clone()), q.clone())))
            .collect()
    }

    /// `Λ^p M` applied blade-wise: `e_{i1}∧…∧e_{ip} ↦ M e_{i1} ∧ … ∧ M e_{ip}`,
    /// where `column(i)` returns the sparse column `M e_i`.
    pub fn apply_outer<F>(&self, column: F) -> Self
    where
        F: Fn(usize) -> Vec<(usize, Scalar)>,
    {
        let mut out = Multivector::zero();
        for (&b, coeff) in &self.terms {
            let mut acc: BTreeMap<Blade, Scalar> = BTreeMap::new();
            acc.insert(0, coeff.clone());
            for i in indices(b) {
                let col = column(i);
                let mut next: BTreeMap<Blade, Scalar> = BTreeMap::new();
                for (&mask, c) in &acc {
                    for (m, v) in &col {
                        if mask & (1 << m) != 0 || v.is_zero() {
                            continue;
                        }
                        // moving e_m left past the higher indices already present
                        let s = if (mask >> (m + 1)).count_ones() % 2 == 0 { 1 } else { -1 };
                        let entry = next.entry(mask | (1 << m)).or_default();
                        *entry += signed(&(c * v), s);
                    }
                }
                next.retain(|_, c| !c.is_zero());
                acc = next;
            }
            for (mask, c) in acc {
                out.add_term(mask, c);
            }
        }
        out
    }

    /// Bilinear dot product of coefficient vectors: `Σ_B a_B b_B`.
    pub fn dot(&self, other: &Multivector) -> Scalar {
        let mut acc = Scalar::zero();
        for (&b, c) in &self.terms {
            if let Some(d) = other.terms.get(&b) {
                acc += c * d;
            }
        }
        acc
    }

    /// Largest basis index referenced, plus one.
    pub fn index_span(&self) -> usize {
        self.terms
            .keys()
            .map(|&b| 32 - b.leading_zeros() as usize)
            .max()
            .unwrap_or(0)
    }

    /// Apply `f` to every coefficient, dropping zeros.
    pub fn map_coefficients(&self, f: impl Fn(&Scalar) -> Scalar) -> Self {
        let mut out = Multivector::zero();
        for (&b, c) in &self.terms {
            out.add_term(b, f(c));
        }
        out
    }

    pub fn to_literal(&self) -> Vec<FormTerm> {
        self.terms
            .iter()
            .map(|(&b, c)| FormTerm {
                indices: indices(b),
                coeff: c.to_string(),
            })
            .collect()
    }

    pub fn from_literal(terms: &[FormTerm]) -> Result<Self> {
        let mut m = Multivector::zero();
        for t in terms {
            let b = blade_of(&t.indices)?;
            let c: Scalar = t.coeff.parse()?;
            m.add_term(b, c);
        }
        Ok(m)
    }
}

/// One entry of the form literal syntax: `{"indices": [...], "coeff": "..."}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormTerm {
    pub indices: Vec<usize>,
    pub coeff: String,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(i: usize) -> Multivector {
        Multivector::blade(1 << i, Scalar::one())
    }

    #[test]
    fn wedge_is_alternating() {
        let a = e(0).wedge(&e(1));
        let b = e(1).wedge(&e(0));
        assert_eq!(a, b.neg());
        assert!(e(2).wedge(&e(2)).is_zero());
        assert_eq!(wedge_sign(0b100, 0b011), 1);
        assert_eq!(wedge_sign(0b010, 0b001), -1);
    }

    #[test]
    fn blade_enumeration() {
        assert_eq!(blades(4, 2).len(), 6);
        assert_eq!(blades(4, 0), vec![0]);
        assert!(blades(3, 4).is_empty());
        assert_eq!(blades(3, 3), vec![0b111]);
    }

    #[test]
    fn interior_signs() {
        // ι_{e1*}(e0 ∧ e1) = -e0
        let w = e(0).wedge(&e(1));
        let c = vec![Scalar::zero(), Scalar::one()];
        assert_eq!(w.interior(&c), e(0).neg());
    }

    #[test]
    fn outer_power_of_swap() {
        // M swaps e0 and e1; Λ²M(e0∧e1) = e1∧e0 = -e0∧e1
        let w = e(0).wedge(&e(1));
        let image = w.apply_outer(|i| vec![(1 - i, Scalar::one())]);
        assert_eq!(image, w.neg());
    }

    #[test]
    fn literal_rejects_unsorted_indices() {
        let bad = [FormTerm {
            indices: vec![2, 1],
            coeff: "1".into(),
        }];
        assert!(Multivector::from_literal(&bad).is_err());
    }
}
