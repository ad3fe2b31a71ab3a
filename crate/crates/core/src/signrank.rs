//! Sign matrices, their reconstruction from low-rank witnesses, and the
//! rank-1 diagonal obstruction.
//!
//! Sign-rank itself is never computed. Callers supply a real witness `A`
//! whose sign pattern is the target; its rank-bounded decomposition then
//! reproduces that pattern with at most `2·rank(A)` columns.

use std::fmt;

use crate::decomp::{diagonalize_rank_bounded, UnitaryDiag, DEFAULT_RANK_TOL};
use crate::densecore::RealMatrix;
use crate::error::{Error, Result};

/// Entries with magnitude at or below this are treated as zero by
/// [`reconstruct_sign`].
pub const DEFAULT_ZERO_TOL: f64 = 1e-12;

/// An entry is ambiguous when it sits within this multiple of the
/// reconstruction residual.
pub const AMBIGUITY_FACTOR: f64 = 10.0;

/// How [`sign_of`] treats entries that are numerically zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ZeroMode {
    /// Near-zero entries are an error.
    #[default]
    Strict,
    /// Near-zero entries map to `+1`.
    Lenient,
}

/// Matrix with every entry in `{-1, +1}`.
#[derive(Clone, PartialEq, Eq)]
pub struct SignMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i8>,
}

impl SignMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<i8>) -> Result<Self> {
        if rows.checked_mul(cols) != Some(data.len()) {
            return Err(Error::Shape(format!(
                "{} entries supplied for a {}x{} sign matrix",
                data.len(),
                rows,
                cols
            )));
        }
        if let Some(k) = data.iter().position(|&v| v != 1 && v != -1) {
            return Err(Error::Argument(format!(
                "sign entry at ({}, {}) is {}, expected -1 or 1",
                k / cols,
                k % cols,
                data[k]
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<i8>]) -> Result<Self> {
        let m = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != m) {
            return Err(Error::Shape("ragged rows".into()));
        }
        Self::new(rows.len(), m, rows.concat())
    }

    pub fn filled(rows: usize, cols: usize, value: i8) -> Result<Self> {
        Self::new(rows, cols, vec![value; rows * cols])
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

    pub fn get(&self, i: usize, j: usize) -> i8 {
        self.data[i * self.cols + j]
    }

    pub fn data(&self) -> &[i8] {
        &self.data
    }

    /// The same pattern as a real matrix of ±1.
    pub fn to_real(&self) -> RealMatrix {
        RealMatrix::new(
            self.rows,
            self.cols,
            self.data.iter().map(|&v| f64::from(v)).collect(),
        )
        .expect("sign entries are finite")
    }

    /// Diagonal census `(count of +1, count of -1)`.
    pub fn diagonal_census(&self) -> (usize, usize) {
        let n = self.rows.min(self.cols);
        let plus = (0..n).filter(|&i| self.get(i, i) == 1).count();
        (plus, n - plus)
    }
}

impl fmt::Debug for SignMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SignMatrix {}x{} ", self.rows, self.cols)?;
        let rows: Vec<&[i8]> = self.data.chunks(self.cols.max(1)).collect();
        write!(f, "{:?}", rows)
    }
}

/// Entrywise sign. `|a_ij| ≤ zero_tol` is an error in strict mode and `+1`
/// in lenient mode.
pub fn sign_of(a: &RealMatrix, zero_tol: f64, mode: ZeroMode) -> Result<SignMatrix> {
    if zero_tol.is_nan() || zero_tol < 0.0 {
        return Err(Error::Argument(format!(
            "zero_tol must be non-negative, got {zero_tol}"
        )));
    }
    let mut data = Vec::with_capacity(a.rows() * a.cols());
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            let v = a[(i, j)];
            let s = if v.abs() <= zero_tol {
                match mode {
                    ZeroMode::Strict => {
                        return Err(Error::DegenerateSign {
                            row: i,
                            col: j,
                            value: v,
                        })
                    }
                    ZeroMode::Lenient => 1,
                }
            } else if v > 0.0 {
                1
            } else {
                -1
            };
            data.push(s);
        }
    }
    SignMatrix::new(a.rows(), a.cols(), data)
}

/// Decomposes a witness with [`diagonalize_rank_bounded`] and reads the sign
/// pattern back off `Re(SΛS*)`.
pub fn reconstruct_sign(witness: &RealMatrix) -> Result<(SignMatrix, UnitaryDiag)> {
    let target = sign_of(witness, DEFAULT_ZERO_TOL, ZeroMode::Strict)?;
    let dec = diagonalize_rank_bounded(witness, DEFAULT_RANK_TOL)?;
    let rec = dec.reconstruct_real();
    let residual = witness.sub(&rec)?.frobenius_norm();
    let guard = AMBIGUITY_FACTOR * residual;
    for i in 0..rec.rows() {
        for j in 0..rec.cols() {
            let v = rec[(i, j)];
            if v.abs() <= guard || (v > 0.0) != (target.get(i, j) > 0) {
                return Err(Error::ReconstructionAmbiguity {
                    row: i,
                    col: j,
                    value: v,
                    residual,
                });
            }
        }
    }
    let signs = sign_of(&rec, DEFAULT_ZERO_TOL, ZeroMode::Strict)?;
    Ok((signs, dec))
}

/// Necessary condition for `Y = sign(Re(λ·s·s*))` with a single eigenpair.
///
/// The diagonal of a rank-1 term is `Re(λ)·|s_i|²`, so every diagonal entry
/// shares the sign of `Re(λ)`. Returns true iff the diagonal of `y` is
/// constant. Off-diagonal entries are not examined.
pub fn rank1_sign_feasible(y: &SignMatrix) -> Result<bool> {
    if !y.is_square() {
        return Err(Error::Shape(format!(
            "expected a square sign matrix, got {}x{}",
            y.rows(),
            y.cols()
        )));
    }
    let (plus, minus) = y.diagonal_census();
    Ok(plus == 0 || minus == 0)
}
