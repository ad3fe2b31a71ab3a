//! Real-part unitary diagonalization of real square matrices.
//!
//! Every real square `A` is the real part of the normal matrix
//! `X = A + iAᵀ`, so `A = Re(S·diag(λ)·S*)` with `S` unitary. This crate
//! builds that decomposition from scratch:
//!
//! - [`densecore`]: dense real/complex matrices, products, norms, numerical rank
//! - [`lift`]: the normal lifts and their structural checks
//! - [`eig`]: complex Jacobi eigensolver and diagonalization of lifts
//! - [`decomp`]: full, truncated and rank-bounded decompositions
//! - [`signrank`]: sign matrices and reconstruction from low-rank witnesses
//! - [`fit`]: gradient-descent fit of a relaxed low-rank real-part model
//! - [`matfile`], [`cli`]: text matrix format and the `realdiag` command

pub mod cli;
pub mod decomp;
pub mod densecore;
pub mod eig;
pub mod error;
pub mod fit;
pub mod lift;
pub mod matfile;
pub mod signrank;

pub use decomp::{
    diagonalize_rank_bounded, reconstruct_real, truncate, unitary_diagonalize, UnitaryDiag,
};
pub use densecore::{
    conj_transpose, frobenius_norm, matmul, numerical_rank, ComplexMatrix, RealMatrix,
};
pub use eig::{eig_normal_lift, eigh, hermitian_from_lift, HermitianEig};
pub use error::{Error, Result};
pub use fit::{
    fit_lowrank, loss_and_gradient, predict, FitConfig, FitModel, FitResult, Loss, Target,
};
pub use lift::{check_quarter_turn, is_normal, lift_imag, lift_real};
pub use num_complex::Complex64;
pub use signrank::{rank1_sign_feasible, reconstruct_sign, sign_of, SignMatrix, ZeroMode};
