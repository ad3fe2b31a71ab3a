//! Normal lifts of real square matrices.
//!
//! `X = A + iAᵀ` satisfies `X* = Aᵀ − iA = −iX`, so `X` commutes with its
//! conjugate transpose and is therefore unitarily diagonalizable while
//! `Re(X) = A`. The constructions below only copy entries, so the real and
//! imaginary parts are exact.

use num_complex::Complex64;

use crate::densecore::{conj_transpose, frobenius_norm, matmul, ComplexMatrix, RealMatrix, I};
use crate::error::{Error, Result};

fn require_square_real(a: &RealMatrix) -> Result<()> {
    if !a.is_square() {
        return Err(Error::Shape(format!(
            "expected a square matrix, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    Ok(())
}

pub(crate) fn require_square(x: &ComplexMatrix) -> Result<()> {
    if !x.is_square() {
        return Err(Error::Shape(format!(
            "expected a square matrix, got {}x{}",
            x.rows(),
            x.cols()
        )));
    }
    Ok(())
}

/// `X = A + iAᵀ`, so that `Re(X) = A` and `Im(X) = Aᵀ`.
pub fn lift_real(a: &RealMatrix) -> Result<ComplexMatrix> {
    require_square_real(a)?;
    let n = a.rows();
    let mut x = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            x[(i, j)] = Complex64::new(a[(i, j)], a[(j, i)]);
        }
    }
    Ok(x)
}

/// `X = Aᵀ + iA`, the variant with `Im(X) = A`.
pub fn lift_imag(a: &RealMatrix) -> Result<ComplexMatrix> {
    require_square_real(a)?;
    let n = a.rows();
    let mut x = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            x[(i, j)] = Complex64::new(a[(j, i)], a[(i, j)]);
        }
    }
    Ok(x)
}

/// `‖XX* − X*X‖_F ≤ tol · max(1, ‖X‖_F²)`.
pub fn is_normal(x: &ComplexMatrix, tol: f64) -> Result<bool> {
    require_square(x)?;
    let xh = conj_transpose(x);
    let comm = matmul(x, &xh)?.sub(&matmul(&xh, x)?)?;
    let scale = frobenius_norm(x).powi(2).max(1.0);
    Ok(frobenius_norm(&comm) <= tol * scale)
}

/// Checks the quarter-turn identity `X* = −iX` as `‖X* + iX‖_F ≤ tol · max(1, ‖X‖_F)`.
pub fn check_quarter_turn(x: &ComplexMatrix, tol: f64) -> Result<bool> {
    Ok(quarter_turn_defect(x)? <= tol * frobenius_norm(x).max(1.0))
}

/// `‖X* + iX‖_F`, zero exactly for a normal lift.
pub fn quarter_turn_defect(x: &ComplexMatrix) -> Result<f64> {
    require_square(x)?;
    let n = x.rows();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            acc += (x[(j, i)].conj() + I * x[(i, j)]).norm_sqr();
        }
    }
    Ok(acc.sqrt())
}
