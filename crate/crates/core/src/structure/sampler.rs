//! Seeded random polynomial sections and forms.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exactmath::{rat, Monomial, Rational, Scalar};
use crate::exterior::{blades, Multivector};
use crate::section::Section;

pub struct Sampler {
    rng: ChaCha8Rng,
    degree: u32,
}

impl Sampler {
    pub fn new(seed: u64, degree: u32) -> Self {
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
            degree,
        }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    /// Small nonzero rational, mostly integers.
    pub fn rational(&mut self) -> Rational {
        let num = loop {
            let n: i64 = self.rng.gen_range(-4..=4);
            if n != 0 {
                break n;
            }
        };
        let den = if self.rng.gen_bool(0.25) {
            self.rng.gen_range(2..=3)
        } else {
            1
        };
        rat(num, den)
    }

    /// Polynomial of degree at most the sampler degree with up to three terms.
    pub fn scalar(&mut self, nvars: usize) -> Scalar {
        if nvars == 0 {
            return Scalar::constant(self.rational());
        }
        let monos = Monomial::up_to_degree(nvars, self.degree);
        let count = self.rng.gen_range(1..=3);
        let picked: Vec<Monomial> = monos.choose_multiple(&mut self.rng, count).cloned().collect();
        let terms: Vec<(Monomial, Rational)> = picked.into_iter().map(|m| (m, self.rational())).collect();
        Scalar::from_terms(terms)
    }

    /// Section whose coefficients are each nonzero with probability one half.
    pub fn section(&mut self, rank: usize, nvars: usize) -> Section {
        loop {
            let s: Section = (0..rank)
                .map(|_| {
                    if self.rng.gen_bool(0.5) {
                        self.scalar(nvars)
                    } else {
                        Scalar::zero()
                    }
                })
                .collect();
            if !s.is_zero() {
                return s;
            }
        }
    }

    /// Constant `p`-vector on `rank` basis elements with random rational coefficients.
    pub fn constant_form(&mut self, rank: usize, p: usize) -> Multivector {
        let mut m = Multivector::zero();
        for b in blades(rank, p) {
            if self.rng.gen_bool(0.7) {
                m.add_term(b, Scalar::constant(self.rational()));
            }
        }
        m
    }

    /// `p`-vector with polynomial coefficients on a random subset of blades.
    pub fn form(&mut self, rank: usize, p: usize, nvars: usize) -> Multivector {
        let mut m = Multivector::zero();
        for b in blades(rank, p) {
            if self.rng.gen_bool(0.4) {
                m.add_term(b, self.scalar(nvars));
            }
        }
        m
    }
}
