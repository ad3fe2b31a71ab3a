//! Dense row-major real and complex matrices.
//!
//! Everything here is a plain value type: operations allocate a fresh result
//! and never mutate their inputs. Matrix products accumulate strictly left to
//! right over the inner index so repeated runs are bit-identical on a given
//! platform.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_complex::Complex64;

use crate::eig;
use crate::error::{Error, Result};

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

/// Dense real matrix, row-major.
#[derive(Clone, PartialEq)]
pub struct RealMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

/// Dense complex matrix, row-major. Each entry is an explicit `(re, im)` pair.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

fn check_len(rows: usize, cols: usize, len: usize) -> Result<()> {
    if rows.checked_mul(cols) != Some(len) {
        return Err(Error::Shape(format!(
            "{} entries supplied for a {}x{} matrix",
            len, rows, cols
        )));
    }
    Ok(())
}

impl RealMatrix {
    /// Builds a matrix from row-major data, rejecting NaN and infinities.
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        check_len(rows, cols, data.len())?;
        if let Some(k) = data.iter().position(|x| !x.is_finite()) {
            return Err(Error::NonFinite {
                row: k / cols,
                col: k % cols,
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        let m = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != m) {
            return Err(Error::Shape("ragged rows".into()));
        }
        Self::new(n, m, rows.concat())
    }

    pub fn from_fn(
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> f64,
    ) -> Result<Self> {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self::new(rows, cols, data)
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn filled(rows: usize, cols: usize, value: f64) -> Self {
        Self {
            rows,
            cols,
            data: vec![value; rows * cols],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)];
            }
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a - b)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a + b)
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * s).collect(),
        }
    }

    fn zip(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Shape(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn to_complex(&self) -> ComplexMatrix {
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
        }
    }
}

impl Index<(usize, usize)> for RealMatrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for RealMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for RealMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "RealMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", &self.data[i * self.cols..(i + 1) * self.cols])?;
        }
        write!(f, "]")
    }
}

impl ComplexMatrix {
    /// Builds a matrix from row-major data, rejecting non-finite components.
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        check_len(rows, cols, data.len())?;
        if let Some(k) = data.iter().position(|z| !z.is_finite()) {
            return Err(Error::NonFinite {
                row: k / cols,
                col: k % cols,
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let n = rows.len();
        let m = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != m) {
            return Err(Error::Shape("ragged rows".into()));
        }
        Self::new(n, m, rows.concat())
    }

    /// Assembles `re + i·im` from two real matrices of equal shape.
    pub fn from_parts(re: &RealMatrix, im: &RealMatrix) -> Result<Self> {
        if re.rows != im.rows || re.cols != im.cols {
            return Err(Error::Shape(
                "real and imaginary parts differ in shape".into(),
            ));
        }
        Ok(Self {
            rows: re.rows,
            cols: re.cols,
            data: re
                .data
                .iter()
                .zip(&im.data)
                .map(|(&a, &b)| Complex64::new(a, b))
                .collect(),
        })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn diag(entries: &[Complex64]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, &z) in entries.iter().enumerate() {
            m[(i, i)] = z;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn re(&self) -> RealMatrix {
        RealMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z.re).collect(),
        }
    }

    pub fn im(&self) -> RealMatrix {
        RealMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z.im).collect(),
        }
    }

    pub fn conj(&self) -> Self {
        self.map(|z| z.conj())
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)];
            }
        }
        out
    }

    pub fn conj_transpose(&self) -> Self {
        conj_transpose(self)
    }

    pub fn scale(&self, s: Complex64) -> Self {
        self.map(|z| z * s)
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| f(z)).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a - b)
    }

    fn zip(&self, other: &Self, f: impl Fn(Complex64, Complex64) -> Complex64) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Shape(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        matmul(self, other)
    }

    pub fn frobenius_norm(&self) -> f64 {
        frobenius_norm(self)
    }

    /// Column `j` as an owned vector.
    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    /// New matrix made of the listed columns, in the given order.
    pub fn select_columns(&self, cols: &[usize]) -> Self {
        let mut out = Self::zeros(self.rows, cols.len());
        for i in 0..self.rows {
            for (k, &j) in cols.iter().enumerate() {
                out[(i, k)] = self[(i, j)];
            }
        }
        out
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, " ")?;
            for z in &self.data[i * self.cols..(i + 1) * self.cols] {
                write!(f, " {}", z)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// `M*`: entry `(j, i)` of the result is the conjugate of `M[(i, j)]`.
pub fn conj_transpose(m: &ComplexMatrix) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(m.cols, m.rows);
    for i in 0..m.rows {
        for j in 0..m.cols {
            out[(j, i)] = m[(i, j)].conj();
        }
    }
    out
}

/// Matrix product. Each entry is accumulated as `((a0*b0 + a1*b1) + a2*b2) + ...`.
pub fn matmul(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    if a.cols != b.rows {
        return Err(Error::Shape(format!(
            "cannot multiply {}x{} by {}x{}",
            a.rows, a.cols, b.rows, b.cols
        )));
    }
    let mut out = ComplexMatrix::zeros(a.rows, b.cols);
    for i in 0..a.rows {
        let arow = &a.data[i * a.cols..(i + 1) * a.cols];
        for j in 0..b.cols {
            let mut acc = ZERO;
            for (k, &aik) in arow.iter().enumerate() {
                acc += aik * b.data[k * b.cols + j];
            }
            out.data[i * b.cols + j] = acc;
        }
    }
    Ok(out)
}

pub fn frobenius_norm(m: &ComplexMatrix) -> f64 {
    m.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Singular values of `m` in descending order, `min(rows, cols)` of them.
///
/// They are read off the Hermitian dilation `[[0, M], [M*, 0]]`, whose
/// spectrum is `{±σ_i}` padded with zeros. Working on the dilation rather than
/// on `M*M` keeps the absolute error near `eps·σ_max` instead of
/// `sqrt(eps)·σ_max`, which matters for the rank gate.
pub fn singular_values(m: &ComplexMatrix) -> Result<Vec<f64>> {
    let (r, c) = (m.rows, m.cols);
    let k = r.min(c);
    if k == 0 {
        return Ok(Vec::new());
    }
    let n = r + c;
    let mut dil = ComplexMatrix::zeros(n, n);
    for i in 0..r {
        for j in 0..c {
            dil[(i, r + j)] = m[(i, j)];
            dil[(r + j, i)] = m[(i, j)].conj();
        }
    }
    let e = eig::eigh(&dil, eig::DEFAULT_MAX_SWEEPS, eig::DEFAULT_TOL)?;
    Ok(e.d.iter().rev().take(k).map(|&s| s.max(0.0)).collect())
}

/// Number of singular values strictly above `tol · max(rows, cols) · σ_max`.
pub fn numerical_rank(m: &ComplexMatrix, tol: f64) -> Result<usize> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::Argument(format!(
            "rank tolerance must be positive, got {tol}"
        )));
    }
    let sv = singular_values(m)?;
    let smax = sv.first().copied().unwrap_or(0.0);
    if smax == 0.0 {
        return Ok(0);
    }
    let gate = tol * m.rows.max(m.cols) as f64 * smax;
    Ok(sv.iter().filter(|&&s| s > gate).count())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random(rng: &mut ChaCha8Rng, r: usize, cl: usize) -> ComplexMatrix {
        let data = (0..r * cl)
            .map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        ComplexMatrix::new(r, cl, data).unwrap()
    }

    // Reference product written independently of `matmul`: column-major walk.
    fn naive_product(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(a.rows(), b.cols());
        for j in 0..b.cols() {
            for i in 0..a.rows() {
                let (mut re, mut im) = (0.0, 0.0);
                for k in 0..a.cols() {
                    let (x, y) = (a[(i, k)], b[(k, j)]);
                    re += x.re * y.re - x.im * y.im;
                    im += x.re * y.im + x.im * y.re;
                }
                out[(i, j)] = c(re, im);
            }
        }
        out
    }

    #[test]
    fn construction_rejects_bad_input() {
        assert!(matches!(
            RealMatrix::new(2, 2, vec![1.0; 3]),
            Err(Error::Shape(_))
        ));
        assert_eq!(
            RealMatrix::new(2, 2, vec![1.0, 2.0, f64::NAN, 0.0]),
            Err(Error::NonFinite { row: 1, col: 0 })
        );
        assert!(ComplexMatrix::new(1, 1, vec![c(0.0, f64::INFINITY)]).is_err());
    }

    #[test]
    fn conj_transpose_examples() {
        let m = ComplexMatrix::new(1, 1, vec![I]).unwrap();
        assert_eq!(conj_transpose(&m).data(), &[c(0.0, -1.0)]);

        let m = ComplexMatrix::from_rows(&[vec![ZERO, ONE], vec![I, ZERO]]).unwrap();
        let expected =
            ComplexMatrix::from_rows(&[vec![ZERO, c(0.0, -1.0)], vec![ONE, ZERO]]).unwrap();
        assert_eq!(conj_transpose(&m), expected);

        let sym = RealMatrix::from_rows(&[vec![1.0, 2.0], vec![2.0, -3.0]])
            .unwrap()
            .to_complex();
        assert_eq!(conj_transpose(&sym), sym);
    }

    #[test]
    fn conj_transpose_rectangular_swaps_dims() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let m = random(&mut rng, 2, 5);
        let t = conj_transpose(&m);
        assert_eq!((t.rows(), t.cols()), (5, 2));
        assert_eq!(conj_transpose(&t), m);
    }

    #[test]
    fn matmul_examples() {
        let m = ComplexMatrix::from_rows(&[vec![ZERO, ONE], vec![I, ZERO]]).unwrap();
        assert_eq!(matmul(&ComplexMatrix::identity(2), &m).unwrap(), m);
        let sq = matmul(&m, &m).unwrap();
        assert_eq!(sq, naive_product(&m, &m));
        assert_eq!(sq, ComplexMatrix::diag(&[I, I]));

        let row = ComplexMatrix::new(1, 3, vec![ONE, I, c(2.0, 0.0)]).unwrap();
        let col = ComplexMatrix::new(3, 1, vec![ONE, I, c(0.5, 0.0)]).unwrap();
        let dot = matmul(&row, &col).unwrap();
        assert_eq!((dot.rows(), dot.cols()), (1, 1));
        assert_eq!(dot[(0, 0)], c(1.0, 0.0));
    }

    #[test]
    fn matmul_shape_error() {
        let a = ComplexMatrix::zeros(2, 3);
        assert!(matches!(matmul(&a, &a), Err(Error::Shape(_))));
    }

    #[test]
    fn matmul_matches_naive_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let (n, k, m) = (
                rng.random_range(1..7),
                rng.random_range(1..7),
                rng.random_range(1..7),
            );
            let a = random(&mut rng, n, k);
            let b = random(&mut rng, k, m);
            let diff = matmul(&a, &b).unwrap().sub(&naive_product(&a, &b)).unwrap();
            assert!(frobenius_norm(&diff) < 1e-14);
        }
    }

    #[test]
    fn matmul_associative() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..10 {
            let (a, b, cm) = (
                random(&mut rng, 5, 5),
                random(&mut rng, 5, 5),
                random(&mut rng, 5, 5),
            );
            let left = matmul(&matmul(&a, &b).unwrap(), &cm).unwrap();
            let right = matmul(&a, &matmul(&b, &cm).unwrap()).unwrap();
            let rel = frobenius_norm(&left.sub(&right).unwrap()) / frobenius_norm(&left);
            assert!(rel <= 1e-12, "{rel}");
        }
    }

    #[test]
    fn frobenius_examples() {
        assert_eq!(frobenius_norm(&ComplexMatrix::zeros(3, 4)), 0.0);
        assert_eq!(
            frobenius_norm(&ComplexMatrix::new(1, 1, vec![c(3.0, 4.0)]).unwrap()),
            5.0
        );
        for n in 1..6 {
            let f = frobenius_norm(&ComplexMatrix::identity(n));
            assert!((f - (n as f64).sqrt()).abs() < 1e-15);
        }
    }

    #[test]
    fn rank_examples() {
        assert_eq!(
            numerical_rank(&ComplexMatrix::identity(3), 1e-12).unwrap(),
            3
        );
        let m = RealMatrix::from_rows(&[vec![1.0, 1.0], vec![0.0, 0.0]]).unwrap();
        assert_eq!(numerical_rank(&m.to_complex(), 1e-12).unwrap(), 1);
        let ones = RealMatrix::filled(3, 3, 1.0).to_complex();
        assert_eq!(numerical_rank(&ones, 1e-12).unwrap(), 1);
        assert_eq!(
            numerical_rank(&ComplexMatrix::zeros(3, 3), 1e-12).unwrap(),
            0
        );
        assert!(matches!(
            numerical_rank(&ones, 0.0),
            Err(Error::Argument(_))
        ));
    }

    #[test]
    fn rank_of_low_rank_products() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for k in 1..5 {
            let u = random(&mut rng, 7, k);
            let v = random(&mut rng, k, 6);
            let m = matmul(&u, &v).unwrap();
            assert_eq!(numerical_rank(&m, 1e-10).unwrap(), k);
        }
    }

    #[test]
    fn singular_values_of_diagonal() {
        let m = ComplexMatrix::diag(&[c(-3.0, 0.0), c(0.0, 2.0), ZERO]);
        let sv = singular_values(&m).unwrap();
        assert!((sv[0] - 3.0).abs() < 1e-13);
        assert!((sv[1] - 2.0).abs() < 1e-13);
        assert!(sv[2].abs() < 1e-13);
    }

    #[test]
    fn rank_is_subadditive() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..15 {
            let n = rng.random_range(2..7);
            let kb = rng.random_range(1..=n);
            let kc = rng.random_range(1..=n);
            let b = matmul(&random(&mut rng, n, kb), &random(&mut rng, kb, n)).unwrap();
            let cm = matmul(&random(&mut rng, n, kc), &random(&mut rng, kc, n)).unwrap();
            let rb = numerical_rank(&b, 1e-10).unwrap();
            let rc = numerical_rank(&cm, 1e-10).unwrap();
            let rsum = numerical_rank(&b.add(&cm).unwrap(), 1e-10).unwrap();
            assert!(rsum <= rb + rc);
        }
    }
}
