//! Dense matrices over catalog number fields.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::exactnum::{compose_fields, rationals, AlgebraicNumber, Field, NumError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is singular")]
    Singular,
    #[error(transparent)]
    Num(#[from] NumError),
}

#[derive(Clone, PartialEq, Eq)]
pub struct FMatrix {
    rows: usize,
    cols: usize,
    data: Vec<AlgebraicNumber>,
}

impl FMatrix {
    pub fn from_rows(rows: Vec<Vec<AlgebraicNumber>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        FMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_fn(r: usize, c: usize, mut f: impl FnMut(usize, usize) -> AlgebraicNumber) -> Self {
        let mut data = Vec::with_capacity(r * c);
        for i in 0..r {
            for j in 0..c {
                data.push(f(i, j));
            }
        }
        FMatrix { rows: r, cols: c, data }
    }

    pub fn from_ints(field: &Field, rows: &[Vec<i64>]) -> Self {
        Self::from_fn(rows.len(), rows[0].len(), |i, j| AlgebraicNumber::from_int(field, rows[i][j]))
    }

    pub fn from_rationals(field: &Field, rows: &[Vec<BigRational>]) -> Self {
        Self::from_fn(rows.len(), rows[0].len(), |i, j| AlgebraicNumber::from_rational(field, &rows[i][j]))
    }

    pub fn zeros(r: usize, c: usize, field: &Field) -> Self {
        Self::from_fn(r, c, |_, _| AlgebraicNumber::zero(field))
    }

    pub fn identity(n: usize, field: &Field) -> Self {
        Self::from_fn(n, n, |i, j| AlgebraicNumber::from_int(field, (i == j) as i64))
    }

    pub fn diag(d: &[AlgebraicNumber]) -> Self {
        let f = common_field(d.iter());
        Self::from_fn(d.len(), d.len(), |i, j| {
            if i == j {
                d[i].inject(&f).unwrap()
            } else {
                AlgebraicNumber::zero(&f)
            }
        })
    }

    /// Permutation matrix with A[sigma(j)][j] = 1 (sigma zero-based).
    pub fn permutation(sigma: &[usize]) -> Self {
        let q = rationals();
        let n = sigma.len();
        Self::from_fn(n, n, |i, j| AlgebraicNumber::from_int(&q, (sigma[j] == i) as i64))
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &AlgebraicNumber {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: AlgebraicNumber) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> Vec<AlgebraicNumber> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn col(&self, j: usize) -> Vec<AlgebraicNumber> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<AlgebraicNumber>> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn entries(&self) -> &[AlgebraicNumber] {
        &self.data
    }

    /// Smallest catalog field holding all entries.
    pub fn field(&self) -> Field {
        common_field(self.data.iter())
    }

    pub fn lift(&self, f: &Field) -> Result<Self, NumError> {
        let data = self.data.iter().map(|x| x.inject(f)).collect::<Result<_, _>>()?;
        Ok(FMatrix { rows: self.rows, cols: self.cols, data })
    }

    /// All entries in one common field.
    pub fn homogenized(&self) -> Self {
        let f = self.field();
        self.lift(&f).expect("common field")
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn scale(&self, k: &AlgebraicNumber) -> Self {
        FMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * k).collect() }
    }

    pub fn try_mul(&self, o: &FMatrix) -> Result<FMatrix, LinalgError> {
        if self.cols != o.rows {
            return Err(LinalgError::DimensionMismatch(format!(
                "{}x{} * {}x{}",
                self.rows, self.cols, o.rows, o.cols
            )));
        }
        let f = compose_fields(&self.field(), &o.field())?;
        let a = self.lift(&f)?;
        let b = o.lift(&f)?;
        let mut out = FMatrix::zeros(self.rows, o.cols, &f);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let x = a.get(i, k);
                if x.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let y = b.get(k, j);
                    if y.is_zero() {
                        continue;
                    }
                    let t = out.get(i, j) + &(x * y);
                    out.set(i, j, t);
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[AlgebraicNumber]) -> Vec<AlgebraicNumber> {
        assert_eq!(v.len(), self.cols);
        let f = compose_fields(&self.field(), &common_field(v.iter())).unwrap();
        (0..self.rows)
            .map(|i| {
                let mut acc = AlgebraicNumber::zero(&f);
                for (j, x) in v.iter().enumerate() {
                    let a = self.get(i, j);
                    if !a.is_zero() && !x.is_zero() {
                        acc = &acc + &(a * x);
                    }
                }
                acc
            })
            .collect()
    }

    /// Row vector times matrix.
    pub fn vec_mul(&self, v: &[AlgebraicNumber]) -> Vec<AlgebraicNumber> {
        self.transpose().mul_vec(v)
    }

    pub fn pow(&self, e: i64) -> Self {
        assert!(self.is_square());
        if e < 0 {
            return self.inverse().expect("invertible").pow(-e);
        }
        let mut r = FMatrix::identity(self.rows, &self.field());
        let mut b = self.clone();
        let mut e = e as u64;
        while e > 0 {
            if e & 1 == 1 {
                r = &r * &b;
            }
            e >>= 1;
            if e > 0 {
                b = &b * &b;
            }
        }
        r
    }

    /// Reduced row echelon form; returns pivot columns.
    pub fn rref(&self) -> (FMatrix, Vec<usize>) {
        let mut m = self.homogenized();
        let mut pivots = vec![];
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else { continue };
            m.swap_rows(r, p);
            let inv = m.get(r, c).inverse().unwrap();
            for j in c..m.cols {
                let v = m.get(r, j);
                if !v.is_zero() {
                    let t = v * &inv;
                    m.set(r, j, t);
                }
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let f = m.get(i, c).clone();
                if f.is_zero() {
                    continue;
                }
                for j in c..m.cols {
                    let y = m.get(r, j);
                    if y.is_zero() {
                        continue;
                    }
                    let t = m.get(i, j) - &(&f * y);
                    m.set(i, j, t);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of {v : M v = 0}, one vector per free column, normalized so that
    /// the free coordinate is 1.
    pub fn nullspace(&self) -> Vec<Vec<AlgebraicNumber>> {
        let (r, piv) = self.rref();
        let f = r.field();
        let mut out = vec![];
        for free in 0..self.cols {
            if piv.contains(&free) {
                continue;
            }
            let mut v = vec![AlgebraicNumber::zero(&f); self.cols];
            v[free] = AlgebraicNumber::one(&f);
            for (row, &pc) in piv.iter().enumerate() {
                v[pc] = -r.get(row, free);
            }
            out.push(v);
        }
        out
    }

    pub fn det(&self) -> AlgebraicNumber {
        assert!(self.is_square());
        let mut m = self.homogenized();
        let f = m.field();
        let n = self.rows;
        let mut d = AlgebraicNumber::one(&f);
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m.get(i, c).is_zero()) else {
                return AlgebraicNumber::zero(&f);
            };
            if p != c {
                m.swap_rows(p, c);
                d = -d;
            }
            let piv = m.get(c, c).clone();
            d = &d * &piv;
            let inv = piv.inverse().unwrap();
            for i in c + 1..n {
                let x = m.get(i, c).clone();
                if x.is_zero() {
                    continue;
                }
                let k = &x * &inv;
                for j in c..n {
                    let y = m.get(c, j);
                    if y.is_zero() {
                        continue;
                    }
                    let t = m.get(i, j) - &(&k * y);
                    m.set(i, j, t);
                }
            }
        }
        d
    }

    pub fn inverse(&self) -> Result<FMatrix, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::DimensionMismatch("inverse of non-square".into()));
        }
        let n = self.rows;
        let f = self.field();
        let aug = FMatrix::from_fn(n, 2 * n, |i, j| {
            if j < n {
                self.get(i, j).inject(&f).unwrap()
            } else {
                AlgebraicNumber::from_int(&f, (j - n == i) as i64)
            }
        });
        let (r, piv) = aug.rref();
        if piv.len() < n || piv[n - 1] != n - 1 {
            return Err(LinalgError::Singular);
        }
        Ok(FMatrix::from_fn(n, n, |i, j| r.get(i, j + n).clone()))
    }

    /// Solve M x = b for square nonsingular M.
    pub fn solve(&self, b: &[AlgebraicNumber]) -> Result<Vec<AlgebraicNumber>, LinalgError> {
        Ok(self.inverse()?.mul_vec(b))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..self.cols).all(|j| {
                let x = self.get(i, j);
                if i == j { x.is_one() } else { x.is_zero() }
            }))
    }

    /// Scalar lambda with other = lambda * self, if any.
    pub fn scalar_ratio(&self, other: &FMatrix) -> Option<AlgebraicNumber> {
        if self.rows != other.rows || self.cols != other.cols {
            return None;
        }
        let k = self.data.iter().position(|x| !x.is_zero())?;
        let lambda = other.data[k].try_div(&self.data[k]).ok()?;
        if lambda.is_zero() {
            return None;
        }
        for (a, b) in self.data.iter().zip(&other.data) {
            if &(a * &lambda) != b {
                return None;
            }
        }
        Some(lambda)
    }

    /// Equality up to a nonzero scalar.
    pub fn proj_eq(&self, other: &FMatrix) -> bool {
        self.scalar_ratio(other).is_some()
    }

    /// Projective normal form: first nonzero entry scaled to 1.
    pub fn normalized(&self) -> FMatrix {
        let k = self.data.iter().position(|x| !x.is_zero()).expect("nonzero matrix");
        let inv = self.data[k].inverse().unwrap();
        self.scale(&inv)
    }

    pub fn kron(&self, o: &FMatrix) -> FMatrix {
        FMatrix::from_fn(self.rows * o.rows, self.cols * o.cols, |i, j| {
            self.get(i / o.rows, j / o.cols) * o.get(i % o.rows, j % o.cols)
        })
    }

    pub fn block_diag(&self, o: &FMatrix) -> FMatrix {
        let f = compose_fields(&self.field(), &o.field()).unwrap();
        FMatrix::from_fn(self.rows + o.rows, self.cols + o.cols, |i, j| {
            if i < self.rows && j < self.cols {
                self.get(i, j).inject(&f).unwrap()
            } else if i >= self.rows && j >= self.cols {
                o.get(i - self.rows, j - self.cols).inject(&f).unwrap()
            } else {
                AlgebraicNumber::zero(&f)
            }
        })
    }

    pub fn submatrix(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> FMatrix {
        FMatrix::from_fn(r1 - r0, c1 - c0, |i, j| self.get(r0 + i, c0 + j).clone())
    }

    pub fn is_rational(&self) -> bool {
        self.data.iter().all(|x| x.is_rational())
    }

    /// Integer entries, if all entries are integers.
    pub fn to_integer(&self) -> Option<Vec<Vec<BigInt>>> {
        let mut out = vec![];
        for i in 0..self.rows {
            let mut r = vec![];
            for j in 0..self.cols {
                let q = self.get(i, j).to_rational()?;
                if !q.is_integer() {
                    return None;
                }
                r.push(q.to_integer());
            }
            out.push(r);
        }
        Some(out)
    }

    pub fn to_strings(&self) -> Vec<Vec<String>> {
        (0..self.rows).map(|i| (0..self.cols).map(|j| self.get(i, j).expr_string()).collect()).collect()
    }

    pub fn trace(&self) -> AlgebraicNumber {
        let f = self.field();
        (0..self.rows).fold(AlgebraicNumber::zero(&f), |acc, i| &acc + self.get(i, i))
    }

    /// Canonical hashable key of the projective class.
    pub fn proj_key(&self) -> Vec<(Vec<BigInt>, BigInt)> {
        let n = self.normalized();
        n.lift(&n.field())
            .unwrap()
            .data
            .iter()
            .map(|x| {
                let (_, n, d) = x.key();
                (n, d)
            })
            .collect()
    }
}

pub fn common_field<'a>(xs: impl Iterator<Item = &'a AlgebraicNumber>) -> Field {
    let mut f = rationals();
    for x in xs {
        if x.field().kind() != f.kind() && !x.is_rational() {
            f = compose_fields(&f, x.field()).expect("compatible fields");
        }
    }
    f
}

impl fmt::Debug for FMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[")?;
        for r in self.to_strings() {
            writeln!(f, "  [{}]", r.join(", "))?;
        }
        write!(f, "]")
    }
}

impl Mul<&FMatrix> for &FMatrix {
    type Output = FMatrix;
    fn mul(self, o: &FMatrix) -> FMatrix {
        self.try_mul(o).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Mul<FMatrix> for FMatrix {
    type Output = FMatrix;
    fn mul(self, o: FMatrix) -> FMatrix {
        &self * &o
    }
}

impl Add<&FMatrix> for &FMatrix {
    type Output = FMatrix;
    fn add(self, o: &FMatrix) -> FMatrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        FMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub<&FMatrix> for &FMatrix {
    type Output = FMatrix;
    fn sub(self, o: &FMatrix) -> FMatrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        FMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &FMatrix {
    type Output = FMatrix;
    fn neg(self) -> FMatrix {
        FMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| -a).collect() }
    }
}

/// Integer matrix helpers shared by the lattice and group code.
pub mod int {
    use super::*;

    pub type IMat = Vec<Vec<BigInt>>;

    pub fn from_i64(rows: &[Vec<i64>]) -> IMat {
        rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    pub fn identity(n: usize) -> IMat {
        (0..n).map(|i| (0..n).map(|j| BigInt::from((i == j) as i64)).collect()).collect()
    }

    pub fn mul(a: &IMat, b: &IMat) -> IMat {
        let (n, m, p) = (a.len(), b.len(), b[0].len());
        (0..n)
            .map(|i| {
                (0..p)
                    .map(|j| (0..m).fold(BigInt::zero(), |acc, k| acc + &a[i][k] * &b[k][j]))
                    .collect()
            })
            .collect()
    }

    pub fn transpose(a: &IMat) -> IMat {
        (0..a[0].len()).map(|j| a.iter().map(|r| r[j].clone()).collect()).collect()
    }

    pub fn det(a: &IMat) -> BigInt {
        let q: Vec<Vec<BigRational>> =
            a.iter().map(|r| r.iter().map(|x| BigRational::from_integer(x.clone())).collect()).collect();
        crate::exactnum::ratmat::det(&q).to_integer()
    }

    pub fn is_identity(a: &IMat) -> bool {
        a.iter().enumerate().all(|(i, r)| {
            r.iter().enumerate().all(|(j, x)| if i == j { x.is_one() } else { x.is_zero() })
        })
    }

    pub fn to_fmatrix(a: &IMat) -> FMatrix {
        let q = rationals();
        FMatrix::from_fn(a.len(), a[0].len(), |i, j| {
            AlgebraicNumber::from_rational(&q, &BigRational::from_integer(a[i][j].clone()))
        })
    }

    pub fn to_i64(a: &IMat) -> Vec<Vec<i64>> {
        use num_traits::ToPrimitive;
        a.iter().map(|r| r.iter().map(|x| x.to_i64().expect("small entry")).collect()).collect()
    }
}
