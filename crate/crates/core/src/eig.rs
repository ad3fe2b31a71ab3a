//! Hermitian eigensolver and diagonalization of normal lifts.
//!
//! A normal lift satisfies `X* = −iX`. Multiplying by `e^{−iπ/4}` turns it
//! into a Hermitian matrix `H`, since `H* = e^{iπ/4}X* = −i·e^{iπ/4}X = e^{−iπ/4}X = H`.
//! `H` is diagonalized with cyclic complex Jacobi rotations and the
//! eigenvalues are rotated back onto the line `t·e^{iπ/4}`.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use crate::decomp::UnitaryDiag;
use crate::densecore::{conj_transpose, frobenius_norm, ComplexMatrix};
use crate::error::{Error, Result};
use crate::lift::{check_quarter_turn, quarter_turn_defect, require_square};

/// Relative off-diagonal tolerance used when callers have no preference.
pub const DEFAULT_TOL: f64 = 1e-12;
pub const DEFAULT_MAX_SWEEPS: usize = 30;

/// Tolerance for accepting a matrix as a normal lift.
pub const QUARTER_TURN_TOL: f64 = 1e-10;

/// `e^{iπ/4}`.
pub const EIGHTH_TURN: Complex64 = Complex64::new(FRAC_1_SQRT_2, FRAC_1_SQRT_2);

/// Eigendecomposition `H = U·diag(d)·U*` of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct HermitianEig {
    /// Unitary matrix whose columns are the eigenvectors.
    pub u: ComplexMatrix,
    /// Eigenvalues in ascending order.
    pub d: Vec<f64>,
    /// Number of full sweeps performed.
    pub sweeps: usize,
    /// Off-diagonal Frobenius norm at the start of every sweep, followed by
    /// the norm on exit.
    pub offdiag_history: Vec<f64>,
}

/// `H = e^{−iπ/4}·X` for a matrix satisfying `X* = −iX`.
pub fn hermitian_from_lift(x: &ComplexMatrix) -> Result<ComplexMatrix> {
    if !check_quarter_turn(x, QUARTER_TURN_TOL)? {
        return Err(Error::Precondition(format!(
            "X* = -iX does not hold: ||X* + iX||_F = {:e}",
            quarter_turn_defect(x)?
        )));
    }
    Ok(x.scale(EIGHTH_TURN.conj()))
}

fn offdiag_norm(a: &[Complex64], n: usize) -> f64 {
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += a[i * n + j].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

/// Cyclic-by-row complex Jacobi eigensolver for Hermitian `h`.
///
/// Sweeps until the off-diagonal Frobenius norm is at most `tol·‖H‖_F`.
pub fn eigh(h: &ComplexMatrix, max_sweeps: usize, tol: f64) -> Result<HermitianEig> {
    require_square(h)?;
    if max_sweeps == 0 {
        return Err(Error::Argument("max_sweeps must be at least 1".into()));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::Argument(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let hnorm = frobenius_norm(h);
    let skew = frobenius_norm(&h.sub(&conj_transpose(h))?);
    if skew > tol * hnorm.max(1.0) {
        return Err(Error::Precondition(format!(
            "matrix is not Hermitian: ||H - H*||_F = {skew:e}"
        )));
    }

    let n = h.rows();
    // Hermitian part; exact when `h` already is Hermitian.
    let mut a: Vec<Complex64> = vec![Complex64::new(0.0, 0.0); n * n];
    for i in 0..n {
        a[i * n + i] = Complex64::new(h[(i, i)].re, 0.0);
        for j in (i + 1)..n {
            let z = (h[(i, j)] + h[(j, i)].conj()) * 0.5;
            a[i * n + j] = z;
            a[j * n + i] = z.conj();
        }
    }
    let mut u = ComplexMatrix::identity(n);
    let target = tol * hnorm;
    let mut history = Vec::new();
    let mut sweeps = 0;

    loop {
        let off = offdiag_norm(&a, n);
        history.push(off);
        if off <= target {
            break;
        }
        if sweeps == max_sweeps {
            return Err(Error::Convergence {
                sweeps,
                residual: off,
            });
        }
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut u, n, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i * n + i].re.total_cmp(&a[j * n + j].re));
    let d = order.iter().map(|&i| a[i * n + i].re).collect();
    Ok(HermitianEig {
        u: u.select_columns(&order),
        d,
        sweeps,
        offdiag_history: history,
    })
}

/// Annihilates `a[p][q]` with the unitary `V = diag(1, e^{−iφ})·[[c, s], [−s, c]]`
/// acting on coordinates `p, q`, where `a[p][q] = r·e^{iφ}`.
fn rotate(a: &mut [Complex64], u: &mut ComplexMatrix, n: usize, p: usize, q: usize) {
    let g = a[p * n + q];
    let r = g.norm();
    if r == 0.0 {
        return;
    }
    let phase = g / r;
    let app = a[p * n + p].re;
    let aqq = a[q * n + q].re;
    let theta = (aqq - app) / (2.0 * r);
    let t = if theta.abs() > 1e150 {
        0.5 / theta
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    let sp = phase * s;
    let spc = sp.conj();
    let cp = phase * c;
    let cpc = cp.conj();

    // A <- A V
    for k in 0..n {
        let akp = a[k * n + p];
        let akq = a[k * n + q];
        a[k * n + p] = akp * c - spc * akq;
        a[k * n + q] = akp * s + cpc * akq;
    }
    // A <- V* A
    for k in 0..n {
        let apk = a[p * n + k];
        let aqk = a[q * n + k];
        a[p * n + k] = apk * c - sp * aqk;
        a[q * n + k] = apk * s + cp * aqk;
    }
    a[p * n + p] = Complex64::new(app - t * r, 0.0);
    a[q * n + q] = Complex64::new(aqq + t * r, 0.0);
    a[p * n + q] = Complex64::new(0.0, 0.0);
    a[q * n + p] = Complex64::new(0.0, 0.0);

    // U <- U V
    for k in 0..n {
        let ukp = u[(k, p)];
        let ukq = u[(k, q)];
        u[(k, p)] = ukp * c - spc * ukq;
        u[(k, q)] = ukp * s + cpc * ukq;
    }
}

/// Unitary diagonalization `X = S·diag(λ)·S*` of a normal lift.
///
/// Eigenvalues are `λ_j = e^{iπ/4}·d_j` with `d` the ascending spectrum of
/// `e^{−iπ/4}X`, so they all lie on the line `t·e^{iπ/4}`.
pub fn eig_normal_lift(x: &ComplexMatrix) -> Result<UnitaryDiag> {
    eig_normal_lift_with(x, DEFAULT_MAX_SWEEPS, DEFAULT_TOL)
}

pub fn eig_normal_lift_with(x: &ComplexMatrix, max_sweeps: usize, tol: f64) -> Result<UnitaryDiag> {
    let h = hermitian_from_lift(x)?;
    let e = eigh(&h, max_sweeps, tol)?;
    let lambda = e.d.iter().map(|&d| EIGHTH_TURN * d).collect();
    Ok(UnitaryDiag::new(e.u, lambda))
}
