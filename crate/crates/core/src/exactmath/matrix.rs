//! Dense matrices over ℚ and ℚ[x], with exact row reduction.

use std::ops::{Index, IndexMut};

use num::{BigInt, One, Zero};

use super::scalar::{Rational, Scalar};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

pub type QMatrix = Matrix<Rational>;
pub type SMatrix = Matrix<Scalar>;

impl<T: Clone> Matrix<T> {
    pub fn filled(rows: usize, cols: usize, value: T) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![value; rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let nrows = rows.len();
        let cols = rows.first().map(Vec::len).unwrap_or(0);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged matrix rows");
        Matrix {
            rows: nrows,
            cols,
            data: rows.into_iter().flatten().collect(),
        }
    }

    /// Zero-column matrices keep their row count.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn map<U: Clone>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn entries(&self) -> impl Iterator<Item = &T> {
        self.data.iter()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

/// Result of [`QMatrix::rref`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub reduced: QMatrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix::filled(rows, cols, Rational::zero())
    }

    pub fn identity(n: usize) -> Self {
        Matrix::from_fn(n, n, |i, j| if i == j { Rational::one() } else { Rational::zero() })
    }

    pub fn from_ints(rows: &[&[i64]]) -> Self {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| Rational::from_integer(BigInt::from(v))).collect())
                .collect(),
        )
    }

    /// `(positive, negative, zero)` counts of a symmetric matrix, by congruence.
    pub fn signature(&self) -> (usize, usize, usize) {
        assert_eq!(self.rows, self.cols);
        let mut a = self.clone();
        let n = self.rows;
        let (mut pos, mut neg) = (0, 0);
        for k in 0..n {
            if a[(k, k)].is_zero() {
                let swap = (k + 1..n).find(|&i| !a[(i, i)].is_zero());
                if let Some(i) = swap {
                    a.swap_congruent(k, i);
                } else if let Some(j) = (k + 1..n).find(|&j| !a[(k, j)].is_zero()) {
                    // row/column k += row/column j makes the pivot 2 a_kj
                    for t in 0..n {
                        let v = a[(j, t)].clone();
                        a[(k, t)] += v;
                    }
                    for t in 0..n {
                        let v = a[(t, j)].clone();
                        a[(t, k)] += v;
                    }
                } else {
                    continue;
                }
            }
            let p = a[(k, k)].clone();
            if p > Rational::zero() {
                pos += 1;
            } else {
                neg += 1;
            }
            for i in k + 1..n {
                if a[(i, k)].is_zero() {
                    continue;
                }
                let f = &a[(i, k)] / &p;
                for t in 0..n {
                    let v = &f * &a[(k, t)];
                    a[(i, t)] -= v;
                }
                for t in 0..n {
                    let v = &f * &a[(t, k)];
                    a[(t, i)] -= v;
                }
            }
        }
        (pos, neg, n - pos - neg)
    }

    fn swap_congruent(&mut self, i: usize, j: usize) {
        let n = self.rows;
        for t in 0..n {
            let v = self[(i, t)].clone();
            self[(i, t)] = self[(j, t)].clone();
            self[(j, t)] = v;
        }
        for t in 0..n {
            let v = self[(t, i)].clone();
            self[(t, i)] = self[(t, j)].clone();
            self[(t, j)] = v;
        }
    }

    /// Reduced row-echelon form with rank and pivot columns.
    pub fn rref(&self) -> Rref {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&i| !m[(i, col)].is_zero()) else {
                continue;
            };
            m.swap_rows(row, p);
            let inv = m[(row, col)].recip();
            for j in col..m.cols {
                let v = &m[(row, j)] * &inv;
                m[(row, j)] = v;
            }
            for i in 0..m.rows {
                if i == row || m[(i, col)].is_zero() {
                    continue;
                }
                let factor = m[(i, col)].clone();
                for j in col..m.cols {
                    if m[(row, j)].is_zero() {
                        continue;
                    }
                    let v = &m[(i, j)] - &factor * &m[(row, j)];
                    m[(i, j)] = v;
                }
            }
            pivots.push(col);
            row += 1;
        }
        Rref {
            rank: pivots.len(),
            reduced: m,
            pivots,
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// Basis of the right null space, one vector per free column.
    pub fn kernel_basis(&self) -> Vec<Vec<Rational>> {
        let Rref { reduced, pivots, .. } = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Rational::zero(); self.cols];
                v[f] = Rational::one();
                for (r, &p) in pivots.iter().enumerate() {
                    v[p] = -reduced[(r, f)].clone();
                }
                v
            })
            .collect()
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    pub fn mul(&self, other: &QMatrix) -> QMatrix {
        assert_eq!(self.cols, other.rows);
        Matrix::from_fn(self.rows, other.cols, |i, j| {
            (0..self.cols).fold(Rational::zero(), |acc, k| {
                if self[(i, k)].is_zero() || other[(k, j)].is_zero() {
                    acc
                } else {
                    acc + &self[(i, k)] * &other[(k, j)]
                }
            })
        })
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    /// Inverse of a square matrix, `None` when singular.
    pub fn inverse(&self) -> Option<QMatrix> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let aug = Matrix::from_fn(n, 2 * n, |i, j| {
            if j < n {
                self[(i, j)].clone()
            } else if j - n == i {
                Rational::one()
            } else {
                Rational::zero()
            }
        });
        let r = aug.rref();
        if r.pivots.iter().take_while(|&&p| p < n).count() < n {
            return None;
        }
        Some(Matrix::from_fn(n, n, |i, j| r.reduced[(i, n + j)].clone()))
    }

    /// Solve `self * x = b` for one particular solution.
    pub fn solve(&self, b: &[Rational]) -> Option<Vec<Rational>> {
        assert_eq!(b.len(), self.rows);
        let aug = Matrix::from_fn(self.rows, self.cols + 1, |i, j| {
            if j < self.cols {
                self[(i, j)].clone()
            } else {
                b[i].clone()
            }
        });
        let r = aug.rref();
        if r.pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![Rational::zero(); self.cols];
        for (row, &p) in r.pivots.iter().enumerate() {
            x[p] = r.reduced[(row, self.cols)].clone();
        }
        Some(x)
    }
}

/// Dense matrix whose columns are given as sparse coordinate lists keyed by `K`;
/// rows are the distinct keys in ascending order.
pub fn sparse_columns<K: Ord + Clone>(columns: &[Vec<(K, Rational)>]) -> QMatrix {
    let keys: std::collections::BTreeSet<&K> = columns.iter().flatten().map(|(k, _)| k).collect();
    let index: std::collections::BTreeMap<&K, usize> = keys.into_iter().enumerate().map(|(i, k)| (k, i)).collect();
    let mut m = QMatrix::zeros(index.len(), columns.len());
    for (j, col) in columns.iter().enumerate() {
        for (k, v) in col {
            let i = index[k];
            let sum = &m[(i, j)] + v;
            m[(i, j)] = sum;
        }
    }
    m
}

/// Kernel of the linear map sending unknown `j` to `columns[j]`.
pub fn sparse_kernel<K: Ord + Clone>(columns: &[Vec<(K, Rational)>]) -> Vec<Vec<Rational>> {
    let m = sparse_columns(columns);
    if m.rows() == 0 {
        return QMatrix::identity(columns.len()).to_rows();
    }
    m.kernel_basis()
}

impl SMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix::filled(rows, cols, Scalar::zero())
    }

    pub fn identity(n: usize) -> Self {
        Matrix::from_fn(n, n, |i, j| if i == j { Scalar::one() } else { Scalar::zero() })
    }

    pub fn mul(&self, other: &SMatrix) -> SMatrix {
        assert_eq!(self.cols, other.rows);
        Matrix::from_fn(self.rows, other.cols, |i, j| {
            let mut acc = Scalar::zero();
            for k in 0..self.cols {
                if self[(i, k)].is_zero() || other[(k, j)].is_zero() {
                    continue;
                }
                acc += &self[(i, k)] * &other[(k, j)];
            }
            acc
        })
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut acc = Scalar::zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc += a * b;
                    }
                }
                acc
            })
            .collect()
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    /// Entrywise conversion when every entry is constant.
    pub fn to_rational(&self) -> Option<QMatrix> {
        let data: Option<Vec<_>> = self.data.iter().map(Scalar::as_rational).collect();
        data.map(|data| Matrix {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn from_rational(m: &QMatrix) -> SMatrix {
        m.map(|c| Scalar::constant(c.clone()))
    }

    fn trace(&self) -> Scalar {
        let mut t = Scalar::zero();
        for i in 0..self.rows {
            t += &self[(i, i)];
        }
        t
    }

    /// Determinant and adjugate by Faddeev–LeVerrier.
    ///
    /// Only divides by integers, so it stays inside ℚ[x].
    pub fn det_adjugate(&self) -> (Scalar, SMatrix) {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        if n == 0 {
            return (Scalar::one(), SMatrix::zeros(0, 0));
        }
        // M_k = A M_{k-1} + c_{n-k+1} I,  c_{n-k} = -tr(A M_k)/k
        let mut m = SMatrix::zeros(n, n);
        let mut c = Scalar::one();
        for k in 1..=n {
            let mut next = self.mul(&m);
            for i in 0..n {
                next[(i, i)] += &c;
            }
            m = next;
            let am = self.mul(&m);
            let k_inv = Rational::new(BigInt::from(-1), BigInt::from(k as i64));
            c = am.trace().scale(&k_inv);
        }
        // c is now c_0 = (-1)^n det(A); adj(A) = (-1)^{n+1} M_n
        let sign = if n.is_multiple_of(2) {
            -Rational::one()
        } else {
            Rational::one()
        };
        let det = if n.is_multiple_of(2) { c.clone() } else { -&c };
        let adj = m.map(|e| e.scale(&sign));
        (det, adj)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::scalar::rat;

    fn q(rows: &[&[i64]]) -> QMatrix {
        QMatrix::from_ints(rows)
    }

    #[test]
    fn rref_identity() {
        let r = QMatrix::identity(3).rref();
        assert_eq!(r.reduced, QMatrix::identity(3));
        assert_eq!(r.rank, 3);
        assert_eq!(r.pivots, vec![0, 1, 2]);
    }

    #[test]
    fn rref_zero() {
        let r = QMatrix::zeros(2, 3).rref();
        assert_eq!(r.reduced, QMatrix::zeros(2, 3));
        assert_eq!(r.rank, 0);
        assert!(r.pivots.is_empty());
    }

    #[test]
    fn rref_proportional_rows() {
        let r = q(&[&[2, 4], &[1, 2]]).rref();
        assert_eq!(r.reduced, q(&[&[1, 2], &[0, 0]]));
        assert_eq!(r.rank, 1);
        assert_eq!(r.pivots, vec![0]);
    }

    #[test]
    fn kernel_examples() {
        assert!(QMatrix::identity(3).kernel_basis().is_empty());
        let full = QMatrix::zeros(2, 3).kernel_basis();
        assert_eq!(full.len(), 3);
        for (i, v) in full.iter().enumerate() {
            for (j, x) in v.iter().enumerate() {
                assert_eq!(x, &if i == j { Rational::one() } else { Rational::zero() });
            }
        }
        let k = q(&[&[1, 1, 0], &[0, 0, 1]]).kernel_basis();
        assert_eq!(k, vec![vec![rat(-1, 1), rat(1, 1), rat(0, 1)]]);
    }

    #[test]
    fn inverse_and_solve() {
        let m = q(&[&[2, 1], &[1, 1]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), QMatrix::identity(2));
        assert!(q(&[&[1, 2], &[2, 4]]).inverse().is_none());
        let x = m.solve(&[rat(3, 1), rat(2, 1)]).unwrap();
        assert_eq!(x, vec![rat(1, 1), rat(1, 1)]);
        assert!(q(&[&[1, 1], &[1, 1]]).solve(&[rat(0, 1), rat(1, 1)]).is_none());
    }

    #[test]
    fn faddeev_leverrier_on_polynomial_unimodular_matrix() {
        let x: Scalar = Scalar::var(0);
        // [[1, x], [x, x^2 + 1]] has determinant 1
        let m = Matrix::from_rows(vec![
            vec![Scalar::one(), x.clone()],
            vec![x.clone(), &(&x * &x) + &Scalar::one()],
        ]);
        let (det, adj) = m.det_adjugate();
        assert_eq!(det, Scalar::one());
        assert_eq!(m.mul(&adj), SMatrix::identity(2));
    }

    #[test]
    fn faddeev_leverrier_matches_rational_inverse() {
        let m = q(&[&[0, 0, 1, 0], &[0, 0, 0, 1], &[1, 0, 0, 0], &[0, 1, 0, 0]]);
        let (det, adj) = SMatrix::from_rational(&m).det_adjugate();
        assert_eq!(det, Scalar::one());
        let inv = m.inverse().unwrap();
        assert_eq!(adj.to_rational().unwrap(), inv);
        let d3 = q(&[&[2, 0, 0], &[0, 3, 0], &[0, 0, -1]]);
        assert_eq!(SMatrix::from_rational(&d3).det_adjugate().0, Scalar::int(-6));
    }

    #[test]
    fn signature_examples() {
        assert_eq!(q(&[&[0, 1], &[1, 0]]).signature(), (1, 1, 0));
        assert_eq!(q(&[&[1, 0, 0], &[0, -1, 0], &[0, 0, 0]]).signature(), (1, 1, 1));
        assert_eq!(
            q(&[&[0, 0, 1, 0], &[0, 0, 0, 1], &[1, 0, 0, 0], &[0, 1, 0, 0]]).signature(),
            (2, 2, 0)
        );
        assert_eq!(q(&[&[0, 1, 1], &[1, 0, 1], &[1, 1, 0]]).signature(), (1, 2, 0));
    }

    proptest::proptest! {
        #[test]
        fn signature_is_a_congruence_invariant(
            diag in proptest::collection::vec(-2i64..=2, 1..6),
            upper in proptest::collection::vec(-3i64..=3, 15),
        ) {
            let n = diag.len();
            let d = QMatrix::from_fn(n, n, |i, j| if i == j { rat(diag[i], 1) } else { Rational::zero() });
            let mut it = upper.iter().cycle();
            let p = QMatrix::from_fn(n, n, |i, j| match i.cmp(&j) {
                std::cmp::Ordering::Equal => Rational::one(),
                std::cmp::Ordering::Less => rat(*it.next().unwrap(), 1),
                std::cmp::Ordering::Greater => Rational::zero(),
            });
            let a = p.transpose().mul(&d).mul(&p);
            let pos = diag.iter().filter(|&&x| x > 0).count();
            let neg = diag.iter().filter(|&&x| x < 0).count();
            proptest::prop_assert_eq!(a.signature(), (pos, neg, n - pos - neg));
        }
    }
}
