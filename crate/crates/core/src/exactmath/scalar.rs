//! Sparse multivariate polynomials over the rationals.
//!
//! A [`Scalar`] is the single ring element type of the crate. Rational numbers
//! are the constant polynomials, so a value over a point base is simply a
//! `Scalar` whose only monomial is the empty one. Terms are stored sorted by
//! graded-lexicographic order with no zero coefficients, which makes the
//! representation canonical: two scalars are equal iff their term vectors are.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num::{BigInt, BigRational, One, Signed, Zero};

pub type Rational = BigRational;

/// Build a rational from a small integer pair.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Exponent vector with trailing zeros trimmed.
///
/// Ordered graded-lexicographically: total degree first, then lexicographic
/// with `x1 > x2 > ...`. Trimming makes `Vec` comparison agree with the
/// zero-padded lexicographic comparison.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn new(mut exps: Vec<u32>) -> Self {
        while exps.last() == Some(&0) {
            exps.pop();
        }
        Monomial(exps)
    }

    pub fn var(index: usize) -> Self {
        let mut exps = vec![0; index + 1];
        exps[index] = 1;
        Monomial(exps)
    }

    pub fn exponent(&self, var: usize) -> u32 {
        self.0.get(var).copied().unwrap_or(0)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    /// Number of variables this monomial touches (highest index + 1).
    pub fn span(&self) -> usize {
        self.0.len()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let len = self.0.len().max(other.0.len());
        let exps = (0..len).map(|i| self.exponent(i) + other.exponent(i)).collect();
        Monomial(exps)
    }

    /// Exponent vector with `var` lowered by one, or `None` when absent.
    fn lower(&self, var: usize) -> Option<Monomial> {
        let e = self.exponent(var);
        if e == 0 {
            return None;
        }
        let mut exps = self.0.clone();
        exps[var] -= 1;
        Some(Monomial::new(exps))
    }

    /// All monomials in `nvars` variables of total degree at most `max_degree`,
    /// in ascending graded-lexicographic order.
    pub fn up_to_degree(nvars: usize, max_degree: u32) -> Vec<Monomial> {
        fn fill(prefix: &mut Vec<u32>, nvars: usize, left: u32, out: &mut Vec<Monomial>) {
            if prefix.len() == nvars {
                out.push(Monomial::new(prefix.clone()));
                return;
            }
            for e in 0..=left {
                prefix.push(e);
                fill(prefix, nvars, left - e, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        fill(&mut Vec::new(), nvars, max_degree, &mut out);
        out.sort();
        out
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Element of ℚ or ℚ[x1..xn], in canonical sparse form.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Scalar {
    /// Ascending by monomial order, coefficients nonzero.
    terms: Vec<(Monomial, Rational)>,
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Scalar::constant(Rational::one())
    }

    pub fn int(n: i64) -> Self {
        Scalar::constant(Rational::from_integer(BigInt::from(n)))
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        Scalar::constant(rat(num, den))
    }

    pub fn constant(c: Rational) -> Self {
        if c.is_zero() {
            Scalar::zero()
        } else {
            Scalar {
                terms: vec![(Monomial::one(), c)],
            }
        }
    }

    /// The variable `x_{index+1}`.
    pub fn var(index: usize) -> Self {
        Scalar::monomial(Monomial::var(index), Rational::one())
    }

    pub fn monomial(m: Monomial, c: Rational) -> Self {
        if c.is_zero() {
            Scalar::zero()
        } else {
            Scalar { terms: vec![(m, c)] }
        }
    }

    /// Build from arbitrary (possibly repeated, possibly zero) terms.
    pub fn from_terms<I: IntoIterator<Item = (Monomial, Rational)>>(terms: I) -> Self {
        let mut acc: BTreeMap<Monomial, Rational> = BTreeMap::new();
        for (m, c) in terms {
            *acc.entry(m).or_insert_with(Rational::zero) += c;
        }
        Scalar {
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    pub fn terms(&self) -> &[(Monomial, Rational)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1.is_one()
    }

    /// The rational value when this scalar is constant.
    pub fn as_rational(&self) -> Option<Rational> {
        match self.terms.as_slice() {
            [] => Some(Rational::zero()),
            [(m, c)] if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.as_rational().is_some()
    }

    /// Total degree; the zero polynomial has degree 0.
    pub fn degree(&self) -> u32 {
        self.terms.last().map(|(m, _)| m.degree()).unwrap_or(0)
    }

    /// Number of variables referenced (highest index + 1).
    pub fn var_span(&self) -> usize {
        self.terms.iter().map(|(m, _)| m.span()).max().unwrap_or(0)
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms
            .binary_search_by(|(t, _)| t.cmp(m))
            .map(|i| self.terms[i].1.clone())
            .unwrap_or_else(|_| Rational::zero())
    }

    pub fn scale(&self, c: &Rational) -> Scalar {
        if c.is_zero() {
            return Scalar::zero();
        }
        Scalar {
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    /// Exact partial derivative with respect to `x_{var+1}`.
    pub fn partial_derivative(&self, var: usize) -> Scalar {
        let terms: Vec<_> = self
            .terms
            .iter()
            .filter_map(|(m, c)| {
                let e = m.exponent(var);
                m.lower(var)
                    .map(|low| (low, c * Rational::from_integer(BigInt::from(e))))
            })
            .collect();
        Scalar::from_terms(terms)
    }

    pub fn pow(&self, e: u32) -> Scalar {
        let mut acc = Scalar::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Evaluate at a rational point (missing coordinates count as zero).
    pub fn eval(&self, point: &[Rational]) -> Rational {
        let mut total = Rational::zero();
        for (m, c) in &self.terms {
            let mut v = c.clone();
            for (i, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let x = point.get(i).cloned().unwrap_or_else(Rational::zero);
                for _ in 0..e {
                    v *= &x;
                }
            }
            total += v;
        }
        total
    }

    fn merge(&self, other: &Scalar, negate_other: bool) -> Scalar {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &other.terms);
        while i < a.len() || j < b.len() {
            let ord = match (a.get(i), b.get(j)) {
                (Some(x), Some(y)) => x.0.cmp(&y.0),
                (Some(_), None) => Ordering::Less,
                _ => Ordering::Greater,
            };
            match ord {
                Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    let c = if negate_other { -&b[j].1 } else { b[j].1.clone() };
                    out.push((b[j].0.clone(), c));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate_other {
                        &a[i].1 - &b[j].1
                    } else {
                        &a[i].1 + &b[j].1
                    };
                    if !c.is_zero() {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        Scalar { terms: out }
    }
}

impl From<Rational> for Scalar {
    fn from(c: Rational) -> Self {
        Scalar::constant(c)
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::int(n)
    }
}

impl Add<&Scalar> for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        self.merge(rhs, false)
    }
}

impl Sub<&Scalar> for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self.merge(rhs, true)
    }
}

impl Mul<&Scalar> for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        if self.is_zero() || rhs.is_zero() {
            return Scalar::zero();
        }
        if let Some(c) = self.as_rational() {
            return rhs.scale(&c);
        }
        if let Some(c) = rhs.as_rational() {
            return self.scale(&c);
        }
        let mut acc: BTreeMap<Monomial, Rational> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                *acc.entry(ma.mul(mb)).or_insert_with(Rational::zero) += ca * cb;
            }
        }
        Scalar {
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $f(self, rhs: Scalar) -> Scalar {
                (&self).$f(&rhs)
            }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $f(self, rhs: &Scalar) -> Scalar {
                (&self).$f(rhs)
            }
        }
        impl $tr<Scalar> for &Scalar {
            type Output = Scalar;
            fn $f(self, rhs: Scalar) -> Scalar {
                self.$f(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        *self = &*self + rhs;
    }
}

impl AddAssign<Scalar> for Scalar {
    fn add_assign(&mut self, rhs: Scalar) {
        *self = &*self + &rhs;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        *self = &*self - rhs;
    }
}

impl SubAssign<Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: Scalar) {
        *self = &*self - &rhs;
    }
}

fn fmt_rational(c: &Rational) -> String {
    if c.denom().is_one() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for Scalar {
    /// Leading (largest) term first, e.g. `3/2*x1^2*x2 - x3 + 1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let negative = c.is_negative();
            let abs = c.abs();
            if k == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else if negative {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mut factors = Vec::new();
            if !abs.is_one() || m.is_one() {
                factors.push(fmt_rational(&abs));
            }
            for (i, &e) in m.exponents().iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(format!("x{}", i + 1)),
                    _ => factors.push(format!("x{}^{}", i + 1, e)),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(i: usize) -> Scalar {
        Scalar::var(i)
    }

    #[test]
    fn power_rule() {
        let p = &(&x(0) * &x(0)) * &x(1);
        assert_eq!(p.partial_derivative(0), &Scalar::int(2) * &(&x(0) * &x(1)));
    }

    #[test]
    fn independent_variable_derivative_vanishes() {
        let p = x(0).scale(&rat(3, 2));
        assert!(p.partial_derivative(1).is_zero());
    }

    #[test]
    fn linear_derivative() {
        let p = &x(0) + &(&x(1) * &x(1));
        assert_eq!(p.partial_derivative(0), Scalar::one());
    }

    #[test]
    fn constant_derivative_is_zero() {
        assert!(Scalar::ratio(7, 3).partial_derivative(4).is_zero());
    }

    #[test]
    fn grlex_order() {
        let a = Monomial::new(vec![1]);
        let b = Monomial::new(vec![0, 1]);
        let c = Monomial::new(vec![0, 0, 2]);
        assert!(a > b);
        assert!(c > a);
        assert!(Monomial::one() < b);
    }

    #[test]
    fn cancellation_is_canonical() {
        let p = &x(0) + &x(1);
        let q = &p - &x(1);
        assert_eq!(q, x(0));
        assert!((&p - &p).is_zero());
    }

    #[test]
    fn display_orders_leading_term_first() {
        let p = &(&x(0) * &x(0)).scale(&rat(3, 2)) - &x(2) + Scalar::one();
        assert_eq!(p.to_string(), "3/2*x1^2 - x3 + 1");
        assert_eq!((-x(0)).to_string(), "-x1");
        assert_eq!(Scalar::zero().to_string(), "0");
    }

    #[test]
    fn monomials_up_to_degree_count() {
        // C(n+d, d)
        assert_eq!(Monomial::up_to_degree(3, 2).len(), 10);
        assert_eq!(Monomial::up_to_degree(0, 5).len(), 1);
    }
}
