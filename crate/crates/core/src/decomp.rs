//! Real-part unitary diagonalization `A = Re(S·diag(λ)·S*)`.
//!
//! The full decomposition diagonalizes the normal lift `X = A + iAᵀ`. Because
//! `X` has rank at most `2·rank(A)`, a rank-`k` input needs at most `2k`
//! retained eigenpairs, which is what [`diagonalize_rank_bounded`] returns.

use num_complex::Complex64;

use crate::densecore::{numerical_rank, ComplexMatrix, RealMatrix, ZERO};
use crate::eig::eig_normal_lift;
use crate::error::{Error, Result};
use crate::lift::lift_real;

/// Relative eigenvalue cutoff used by [`diagonalize_rank_bounded`] when
/// callers do not pick one.
pub const DEFAULT_RANK_TOL: f64 = 1e-10;

/// `S` (n×r, orthonormal columns) together with the diagonal `λ` (length r).
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryDiag {
    pub s: ComplexMatrix,
    pub lambda: Vec<Complex64>,
}

impl UnitaryDiag {
    pub fn new(s: ComplexMatrix, lambda: Vec<Complex64>) -> Self {
        assert_eq!(s.cols(), lambda.len(), "one eigenvalue per column of S");
        Self { s, lambda }
    }

    /// Ambient dimension.
    pub fn n(&self) -> usize {
        self.s.rows()
    }

    /// Retained rank.
    pub fn r(&self) -> usize {
        self.lambda.len()
    }

    /// `S·diag(λ)·S*`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.n();
        let mut out = ComplexMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = ZERO;
                for (c, &l) in self.lambda.iter().enumerate() {
                    acc += self.s[(i, c)] * l * self.s[(j, c)].conj();
                }
                out[(i, j)] = acc;
            }
        }
        out
    }

    /// `Re(S·diag(λ)·S*)`.
    pub fn reconstruct_real(&self) -> RealMatrix {
        self.reconstruct().re()
    }

    /// `‖A − Re(SΛS*)‖_F / max(1, ‖A‖_F)`.
    pub fn relative_residual(&self, a: &RealMatrix) -> Result<f64> {
        let diff = a.sub(&self.reconstruct_real())?;
        Ok(diff.frobenius_norm() / a.frobenius_norm().max(1.0))
    }

    fn keep(&self, mut idx: Vec<usize>) -> Self {
        idx.sort_unstable();
        Self {
            s: self.s.select_columns(&idx),
            lambda: idx.iter().map(|&j| self.lambda[j]).collect(),
        }
    }
}

/// Full decomposition (`r = n`) of a real square matrix.
pub fn unitary_diagonalize(a: &RealMatrix) -> Result<UnitaryDiag> {
    eig_normal_lift(&lift_real(a)?)
}

pub fn reconstruct_real(d: &UnitaryDiag) -> RealMatrix {
    d.reconstruct_real()
}

/// Indices of the `count` largest `|λ|`, ties going to the smaller index.
fn largest_moduli(lambda: &[Complex64], candidates: &[usize], count: usize) -> Vec<usize> {
    let mut idx = candidates.to_vec();
    idx.sort_by(|&i, &j| {
        lambda[j]
            .norm()
            .total_cmp(&lambda[i].norm())
            .then(i.cmp(&j))
    });
    idx.truncate(count);
    idx
}

/// Keeps the `r_keep` eigenpairs of largest modulus; surviving columns stay in
/// their original order.
pub fn truncate(d: &UnitaryDiag, r_keep: usize) -> Result<UnitaryDiag> {
    if r_keep == 0 || r_keep > d.r() {
        return Err(Error::Argument(format!(
            "r_keep must lie in 1..={}, got {}",
            d.r(),
            r_keep
        )));
    }
    let all: Vec<usize> = (0..d.r()).collect();
    Ok(d.keep(largest_moduli(&d.lambda, &all, r_keep)))
}

/// Decomposition keeping every eigenvalue with `|λ| > tol·max|λ|`, capped at
/// `2·numerical_rank(A, tol)` columns.
pub fn diagonalize_rank_bounded(a: &RealMatrix, tol: f64) -> Result<UnitaryDiag> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::Argument(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let full = unitary_diagonalize(a)?;
    let max_mod = full.lambda.iter().map(|l| l.norm()).fold(0.0, f64::max);
    let above: Vec<usize> = (0..full.r())
        .filter(|&j| full.lambda[j].norm() > tol * max_mod)
        .collect();
    let bound = 2 * numerical_rank(&a.to_complex(), tol)?;
    let keep = if above.len() > bound {
        largest_moduli(&full.lambda, &above, bound)
    } else {
        above
    };
    Ok(full.keep(keep))
}
