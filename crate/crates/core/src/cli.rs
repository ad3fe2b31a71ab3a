//! Command-line front end.
//!
//! Exit codes: 0 success, 2 input or usage error, 3 degraded accuracy,
//! 4 eigensolver non-convergence, 5 fit divergence.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use crate::decomp::{
    diagonalize_rank_bounded, truncate, unitary_diagonalize, UnitaryDiag, DEFAULT_RANK_TOL,
};
use crate::densecore::{numerical_rank, RealMatrix};
use crate::eig::QUARTER_TURN_TOL;
use crate::error::Error;
use crate::fit::{fit_lowrank, predict, sign_accuracy, FitConfig, Loss, Target};
use crate::lift::{check_quarter_turn, lift_imag, lift_real};
use crate::matfile::{self, format_complex, format_real, MatrixFile};
use crate::signrank::rank1_sign_feasible;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_DEGRADED: i32 = 3;
pub const EXIT_NONCONVERGENCE: i32 = 4;
pub const EXIT_DIVERGENCE: i32 = 5;

/// Reports with a relative residual above this exit with [`EXIT_DEGRADED`].
pub const RESIDUAL_GATE: f64 = 1e-8;

#[derive(Debug, Parser)]
#[command(
    name = "realdiag",
    version,
    about = "Real-part unitary diagonalization of real square matrices"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write the normal lift A + iA^T of a real square matrix.
    Lift {
        input: PathBuf,
        /// Emit A^T + iA instead, whose imaginary part is A.
        #[arg(long)]
        imag: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Decompose A = Re(S diag(lambda) S*) and write a key: value report.
    Decompose {
        /// Real square matrix, or a complex normal lift of one.
        input: PathBuf,
        /// Keep the r eigenpairs of largest modulus.
        #[arg(long, conflicts_with = "auto_tol")]
        rank: Option<usize>,
        /// Drop eigenvalues with |lambda| <= t * max|lambda|.
        #[arg(long)]
        auto_tol: Option<f64>,
        /// Include the basis S in the report.
        #[arg(long)]
        emit_basis: bool,
        /// Include wall-clock time in the report (makes it non-reproducible).
        #[arg(long)]
        timing: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check the rank-1 diagonal sign condition of a square sign matrix.
    Signcheck { input: PathBuf },
    /// Fit a relaxed rank-m model Re(E diag(w) E*) by gradient descent.
    Fit {
        target: PathBuf,
        #[arg(long)]
        rank: usize,
        #[arg(long, value_enum, default_value_t = LossArg::Squared)]
        loss: LossArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 2000)]
        epochs: usize,
        #[arg(long, default_value_t = 0.05)]
        lr: f64,
        #[arg(long, default_value_t = 0.0)]
        l2: f64,
        #[arg(long, default_value_t = 0.1)]
        init_scale: f64,
        /// Where to write the model (E block then w block).
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum LossArg {
    Squared,
    Logistic,
}

struct Failure {
    code: i32,
    msg: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Convergence { .. } => EXIT_NONCONVERGENCE,
            Error::Divergence { .. } => EXIT_DIVERGENCE,
            _ => EXIT_INPUT,
        };
        Failure {
            code,
            msg: e.to_string(),
        }
    }
}

fn input_failure(msg: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_INPUT,
        msg: msg.into(),
    }
}

/// Runs the CLI with explicit argument list and output streams; returns the
/// process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{text}");
                return EXIT_INPUT;
            }
            let _ = write!(out, "{text}");
            return EXIT_OK;
        }
    };
    let result = match cli.command {
        Command::Lift {
            input,
            imag,
            output,
        } => cmd_lift(&input, imag, output.as_deref(), out),
        Command::Decompose {
            input,
            rank,
            auto_tol,
            emit_basis,
            timing,
            output,
        } => cmd_decompose(
            &input,
            rank,
            auto_tol,
            emit_basis,
            timing,
            output.as_deref(),
            out,
        ),
        Command::Signcheck { input } => cmd_signcheck(&input, out),
        Command::Fit {
            target,
            rank,
            loss,
            seed,
            epochs,
            lr,
            l2,
            init_scale,
            output,
        } => {
            let config = FitConfig {
                m: rank,
                loss: match loss {
                    LossArg::Squared => Loss::Squared,
                    LossArg::Logistic => Loss::Logistic,
                },
                learning_rate: lr,
                epochs,
                l2,
                seed,
                init_scale,
            };
            cmd_fit(&target, &config, output.as_deref(), out)
        }
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.msg);
            f.code
        }
    }
}

fn read_matrix(path: &Path) -> Result<MatrixFile, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| input_failure(format!("cannot read {}: {e}", path.display())))?;
    matfile::parse(&text).map_err(|e| input_failure(format!("{}: {e}", path.display())))
}

fn emit(path: Option<&Path>, text: &str, out: &mut dyn Write) -> Result<(), Failure> {
    match path {
        Some(p) => std::fs::write(p, text)
            .map_err(|e| input_failure(format!("cannot write {}: {e}", p.display()))),
        None => out
            .write_all(text.as_bytes())
            .map_err(|e| input_failure(format!("cannot write output: {e}"))),
    }
}

fn require_square(rows: usize, cols: usize) -> Result<(), Failure> {
    if rows != cols {
        return Err(input_failure(format!(
            "expected a square matrix, got shape {rows}x{cols}"
        )));
    }
    Ok(())
}

fn cmd_lift(
    input: &Path,
    imag: bool,
    output: Option<&Path>,
    out: &mut dyn Write,
) -> Result<i32, Failure> {
    let a = match read_matrix(input)? {
        MatrixFile::Real(a) => a,
        other => {
            return Err(input_failure(format!(
                "lift needs a real matrix, got {}",
                other.kind()
            )))
        }
    };
    require_square(a.rows(), a.cols())?;
    let x = if imag { lift_imag(&a)? } else { lift_real(&a)? };
    emit(output, &matfile::write_complex(&x), out)?;
    Ok(EXIT_OK)
}

/// Key: value summary of a decomposition.
#[derive(Debug, Clone)]
pub struct DecompReport {
    pub n: usize,
    pub r: usize,
    pub residual: f64,
    pub residual_transpose: f64,
    pub rank_input: usize,
    pub rank_bound_2k: usize,
    pub decomposition: UnitaryDiag,
    pub emit_basis: bool,
    pub elapsed_ms: Option<f64>,
}

impl DecompReport {
    pub fn build(a: &RealMatrix, d: UnitaryDiag, rank_tol: f64) -> Result<Self, Error> {
        let rec = d.reconstruct();
        let scale = a.frobenius_norm().max(1.0);
        let residual = a.sub(&rec.re())?.frobenius_norm() / scale;
        let residual_transpose = a.transpose().sub(&rec.im())?.frobenius_norm() / scale;
        let rank_input = numerical_rank(&a.to_complex(), rank_tol)?;
        Ok(Self {
            n: d.n(),
            r: d.r(),
            residual,
            residual_transpose,
            rank_input,
            rank_bound_2k: 2 * rank_input,
            decomposition: d,
            emit_basis: false,
            elapsed_ms: None,
        })
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "n: {}", self.n);
        let _ = writeln!(s, "r: {}", self.r);
        let _ = writeln!(s, "residual: {}", format_real(self.residual));
        let _ = writeln!(
            s,
            "residual_transpose: {}",
            format_real(self.residual_transpose)
        );
        let _ = writeln!(s, "rank_input: {}", self.rank_input);
        let _ = writeln!(s, "rank_bound_2k: {}", self.rank_bound_2k);
        let lambda: Vec<String> = self
            .decomposition
            .lambda
            .iter()
            .map(|l| format!("({},{})", format_real(l.re), format_real(l.im)))
            .collect();
        let _ = writeln!(s, "lambda: {}", lambda.join(" "));
        if self.emit_basis {
            let sm = &self.decomposition.s;
            for i in 0..sm.rows() {
                let row: Vec<String> = (0..sm.cols()).map(|j| format_complex(sm[(i, j)])).collect();
                let _ = writeln!(s, "basis_row_{i}: {}", row.join(" "));
            }
        }
        if let Some(ms) = self.elapsed_ms {
            let _ = writeln!(s, "elapsed_ms: {}", format_real(ms));
        }
        s
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_decompose(
    input: &Path,
    rank: Option<usize>,
    auto_tol: Option<f64>,
    emit_basis: bool,
    timing: bool,
    output: Option<&Path>,
    out: &mut dyn Write,
) -> Result<i32, Failure> {
    let a = match read_matrix(input)? {
        MatrixFile::Real(a) => {
            require_square(a.rows(), a.cols())?;
            a
        }
        MatrixFile::Complex(x) => {
            require_square(x.rows(), x.cols())?;
            if !check_quarter_turn(&x, QUARTER_TURN_TOL)? {
                return Err(input_failure(
                    "complex input is not a normal lift (X* = -iX fails)",
                ));
            }
            x.re()
        }
        MatrixFile::Sign(_) => {
            return Err(input_failure("decompose needs a real or complex matrix"))
        }
    };
    if let Some(t) = auto_tol {
        if t.is_nan() || t <= 0.0 {
            return Err(input_failure(format!(
                "--auto-tol must be positive, got {t}"
            )));
        }
    }
    let rank_tol = auto_tol.unwrap_or(DEFAULT_RANK_TOL);
    let start = Instant::now();
    let d = match (rank, auto_tol) {
        (_, Some(t)) => diagonalize_rank_bounded(&a, t)?,
        (Some(r), None) => truncate(&unitary_diagonalize(&a)?, r)?,
        (None, None) => unitary_diagonalize(&a)?,
    };
    let mut report = DecompReport::build(&a, d, rank_tol)?;
    report.emit_basis = emit_basis;
    if timing {
        report.elapsed_ms = Some(start.elapsed().as_secs_f64() * 1e3);
    }
    emit(output, &report.render(), out)?;
    Ok(if report.residual <= RESIDUAL_GATE {
        EXIT_OK
    } else {
        EXIT_DEGRADED
    })
}

fn cmd_signcheck(input: &Path, out: &mut dyn Write) -> Result<i32, Failure> {
    let y = match read_matrix(input)? {
        MatrixFile::Sign(y) => y,
        other => {
            return Err(input_failure(format!(
                "signcheck needs a sign matrix, got {}",
                other.kind()
            )))
        }
    };
    require_square(y.rows(), y.cols())?;
    let feasible = rank1_sign_feasible(&y)?;
    let (plus, minus) = y.diagonal_census();
    let text = format!(
        "n: {}\nrank1_feasible: {}\ndiag_plus: {}\ndiag_minus: {}\n",
        y.rows(),
        feasible,
        plus,
        minus
    );
    emit(None, &text, out)?;
    Ok(EXIT_OK)
}

fn cmd_fit(
    target: &Path,
    config: &FitConfig,
    output: Option<&Path>,
    out: &mut dyn Write,
) -> Result<i32, Failure> {
    config.validate()?;
    let file = read_matrix(target)?;
    let (rows, cols) = file.shape();
    require_square(rows, cols)?;
    let res = match &file {
        MatrixFile::Real(a) => fit_lowrank(Target::Real(a), config)?,
        MatrixFile::Sign(y) => fit_lowrank(Target::Sign(y), config)?,
        MatrixFile::Complex(_) => return Err(input_failure("fit needs a real or sign target")),
    };
    if let Some(p) = output {
        emit(Some(p), &matfile::write_model(&res.model), out)?;
    }
    let mut text = format!(
        "n: {}\nm: {}\nepochs: {}\nfinal_loss: {}\n",
        rows,
        config.m,
        config.epochs,
        format_real(res.final_loss)
    );
    if let MatrixFile::Sign(y) = &file {
        let acc = sign_accuracy(&predict(&res.model), y);
        let _ = writeln!(text, "sign_accuracy: {}", format_real(acc));
    }
    emit(None, &text, out)?;
    Ok(EXIT_OK)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(args.iter().copied(), &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(run_args(&["realdiag"]).0, EXIT_INPUT);
        assert_eq!(run_args(&["realdiag", "bogus"]).0, EXIT_INPUT);
        assert_eq!(
            run_args(&[
                "realdiag",
                "decompose",
                "x",
                "--rank",
                "2",
                "--auto-tol",
                "1e-9"
            ])
            .0,
            EXIT_INPUT
        );
        assert_eq!(run_args(&["realdiag", "--help"]).0, EXIT_OK);
    }

    #[test]
    fn missing_file_exit_2() {
        let (code, _, err) = run_args(&["realdiag", "lift", "/nonexistent/file.txt"]);
        assert_eq!(code, EXIT_INPUT);
        assert!(err.contains("cannot read"));
    }

    #[test]
    fn report_render_keys() {
        let a = RealMatrix::identity(2);
        let d = unitary_diagonalize(&a).unwrap();
        let mut rep = DecompReport::build(&a, d, DEFAULT_RANK_TOL).unwrap();
        rep.emit_basis = true;
        let text = rep.render();
        for key in [
            "n",
            "r",
            "residual",
            "rank_input",
            "rank_bound_2k",
            "lambda",
            "basis_row_0",
            "basis_row_1",
        ] {
            assert!(
                text.lines().any(|l| l.starts_with(&format!("{key}: "))),
                "{key} missing:\n{text}"
            );
        }
        assert!(!text.contains("elapsed_ms"));
        rep.elapsed_ms = Some(1.5);
        assert!(rep.render().contains("elapsed_ms: 1.5\n"));
    }
}
