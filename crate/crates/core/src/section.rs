//! Sections of the free module: coefficient vectors in the module basis.

use std::ops::{Deref, Index};

use crate::exactmath::Scalar;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Section(Vec<Scalar>);

impl Section {
    pub fn new(coeffs: Vec<Scalar>) -> Self {
        Section(coeffs)
    }

    pub fn zero(rank: usize) -> Self {
        Section(vec![Scalar::zero(); rank])
    }

    pub fn basis(rank: usize, i: usize) -> Self {
        let mut s = Section::zero(rank);
        s.0[i] = Scalar::one();
        s
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.0
    }

    pub fn into_coeffs(self) -> Vec<Scalar> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Scalar::is_zero)
    }

    pub fn add(&self, other: &Section) -> Section {
        debug_assert_eq!(self.rank(), other.rank());
        Section(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Section) -> Section {
        debug_assert_eq!(self.rank(), other.rank());
        Section(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn neg(&self) -> Section {
        Section(self.0.iter().map(|a| -a).collect())
    }

    pub fn scale(&self, f: &Scalar) -> Section {
        Section(self.0.iter().map(|a| a * f).collect())
    }

    pub fn add_scaled(&mut self, other: &Section, f: &Scalar) {
        if f.is_zero() {
            return;
        }
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            if !b.is_zero() {
                *a += b * f;
            }
        }
    }

    pub fn map(&self, f: impl Fn(&Scalar) -> Scalar) -> Section {
        Section(self.0.iter().map(f).collect())
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.0.iter().map(Scalar::to_string).collect()
    }
}

impl Deref for Section {
    type Target = [Scalar];
    fn deref(&self) -> &[Scalar] {
        &self.0
    }
}

impl Index<usize> for Section {
    type Output = Scalar;
    fn index(&self, i: usize) -> &Scalar {
        &self.0[i]
    }
}

impl FromIterator<Scalar> for Section {
    fn from_iter<I: IntoIterator<Item = Scalar>>(iter: I) -> Self {
        Section(iter.into_iter().collect())
    }
}
