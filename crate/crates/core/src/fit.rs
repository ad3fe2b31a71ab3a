//! Relaxed low-rank real-part factorization trained by gradient descent.
//!
//! The model predicts `Re(E·diag(w)·E*)` where `E` is an unconstrained n×m
//! complex matrix (one row per entity) and `w` a length-m complex vector.
//! Dropping the orthonormality of `E` leaves a bilinear form that can still
//! represent asymmetric targets, since `Re(w·e_i·conj(e_j))` need not equal
//! `Re(w·e_j·conj(e_i))`.
//!
//! Gradients treat the real and imaginary part of every parameter as
//! independent real variables and are packed back as `∂L/∂re + i·∂L/∂im`
//! (twice the conjugate Wirtinger derivative).

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::densecore::{ComplexMatrix, RealMatrix, ZERO};
use crate::error::{Error, Result};
use crate::signrank::SignMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Loss {
    /// `Σ (pred − a)²`.
    Squared,
    /// `Σ log(1 + exp(−y·pred))`.
    Logistic,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitConfig {
    pub m: usize,
    pub loss: Loss,
    pub learning_rate: f64,
    pub epochs: usize,
    pub l2: f64,
    pub seed: u64,
    pub init_scale: f64,
}

impl Default for FitConfig {
    fn default() -> Self {
        Self {
            m: 2,
            loss: Loss::Squared,
            learning_rate: 0.05,
            epochs: 2000,
            l2: 0.0,
            seed: 0,
            init_scale: 0.1,
        }
    }
}

impl FitConfig {
    pub fn validate(&self) -> Result<()> {
        if self.m == 0 {
            return Err(Error::Argument("rank m must be at least 1".into()));
        }
        if self.epochs == 0 {
            return Err(Error::Argument("epochs must be at least 1".into()));
        }
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return Err(Error::Argument(format!(
                "learning rate must be positive, got {}",
                self.learning_rate
            )));
        }
        if !(self.l2 >= 0.0 && self.l2.is_finite()) {
            return Err(Error::Argument(format!(
                "l2 must be non-negative, got {}",
                self.l2
            )));
        }
        if !(self.init_scale > 0.0 && self.init_scale.is_finite()) {
            return Err(Error::Argument(format!(
                "init scale must be positive, got {}",
                self.init_scale
            )));
        }
        Ok(())
    }
}

/// What the model is fitted against.
#[derive(Debug, Clone, Copy)]
pub enum Target<'a> {
    Real(&'a RealMatrix),
    Sign(&'a SignMatrix),
}

impl Target<'_> {
    fn values(&self) -> RealMatrix {
        match self {
            Target::Real(a) => (*a).clone(),
            Target::Sign(y) => y.to_real(),
        }
    }

    fn shape(&self) -> (usize, usize) {
        match self {
            Target::Real(a) => (a.rows(), a.cols()),
            Target::Sign(y) => (y.rows(), y.cols()),
        }
    }
}

/// Row embeddings `e` (n×m) and diagonal weights `w` (length m).
///
/// Also used as the gradient record in [`loss_and_gradient`].
#[derive(Debug, Clone, PartialEq)]
pub struct FitModel {
    pub e: ComplexMatrix,
    pub w: Vec<Complex64>,
}

impl FitModel {
    pub fn new(e: ComplexMatrix, w: Vec<Complex64>) -> Result<Self> {
        if e.cols() != w.len() {
            return Err(Error::Shape(format!(
                "embedding has {} columns but {} weights",
                e.cols(),
                w.len()
            )));
        }
        if w.iter().any(|z| !z.is_finite()) {
            return Err(Error::Argument("non-finite weight".into()));
        }
        Ok(Self { e, w })
    }

    /// Number of entities.
    pub fn n(&self) -> usize {
        self.e.rows()
    }

    /// Model rank.
    pub fn m(&self) -> usize {
        self.w.len()
    }

    /// Flattened real parameters: `(re, im)` of `e` row-major, then of `w`.
    pub fn to_params(&self) -> Vec<f64> {
        self.e
            .data()
            .iter()
            .chain(&self.w)
            .flat_map(|z| [z.re, z.im])
            .collect()
    }

    /// Inverse of [`FitModel::to_params`] for a model of shape `n×m`.
    pub fn from_params(n: usize, m: usize, params: &[f64]) -> Result<Self> {
        if params.len() != 2 * (n * m + m) {
            return Err(Error::Shape(format!(
                "{} parameters do not fit an n={n}, m={m} model",
                params.len()
            )));
        }
        let z: Vec<Complex64> = params
            .chunks(2)
            .map(|p| Complex64::new(p[0], p[1]))
            .collect();
        let e = ComplexMatrix::new(n, m, z[..n * m].to_vec())?;
        Self::new(e, z[n * m..].to_vec())
    }

    fn squared_norm(&self) -> f64 {
        self.e
            .data()
            .iter()
            .chain(&self.w)
            .map(|z| z.norm_sqr())
            .sum()
    }
}

/// `pred[i][j] = Re(Σ_c w_c·E[i][c]·conj(E[j][c]))`.
pub fn predict(model: &FitModel) -> RealMatrix {
    let n = model.n();
    let mut out = RealMatrix::zeros(n, n);
    // E·diag(w), reused across columns
    let mut ew = model.e.clone();
    for i in 0..n {
        for (c, &w) in model.w.iter().enumerate() {
            ew[(i, c)] = model.e[(i, c)] * w;
        }
    }
    for i in 0..n {
        for j in 0..n {
            let mut acc = ZERO;
            for c in 0..model.m() {
                acc += ew[(i, c)] * model.e[(j, c)].conj();
            }
            out[(i, j)] = acc.re;
        }
    }
    out
}

fn softplus(x: f64) -> f64 {
    if x > 0.0 {
        x + (-x).exp().ln_1p()
    } else {
        x.exp().ln_1p()
    }
}

fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

/// Loss value and gradient for the current parameters.
pub fn loss_and_gradient(
    model: &FitModel,
    target: Target<'_>,
    config: &FitConfig,
) -> Result<(f64, FitModel)> {
    let n = model.n();
    if target.shape() != (n, n) {
        let (r, c) = target.shape();
        return Err(Error::Shape(format!(
            "target is {r}x{c}, model predicts {n}x{n}"
        )));
    }
    let labels = target.values();
    let pred = predict(model);

    // dL/dpred
    let mut g = RealMatrix::zeros(n, n);
    let mut loss = 0.0;
    for i in 0..n {
        for j in 0..n {
            let (p, a) = (pred[(i, j)], labels[(i, j)]);
            match config.loss {
                Loss::Squared => {
                    loss += (p - a) * (p - a);
                    g[(i, j)] = 2.0 * (p - a);
                }
                Loss::Logistic => {
                    loss += softplus(-a * p);
                    g[(i, j)] = -a * sigmoid(-a * p);
                }
            }
        }
    }
    loss += config.l2 * model.squared_norm();

    let m = model.m();
    let mut ge = ComplexMatrix::zeros(n, m);
    let mut gw = vec![ZERO; m];
    for c in 0..m {
        let w = model.w[c];
        for i in 0..n {
            let ei = model.e[(i, c)];
            let mut row_acc = ZERO; // Σ_j G_ij E_jc
            let mut col_acc = ZERO; // Σ_j G_ji E_jc
            for j in 0..n {
                let ej = model.e[(j, c)];
                row_acc += ej * g[(i, j)];
                col_acc += ej * g[(j, i)];
                gw[c] += (ei.conj() * ej) * g[(i, j)];
            }
            ge[(i, c)] = w.conj() * row_acc + w * col_acc;
        }
    }
    if config.l2 > 0.0 {
        let k = 2.0 * config.l2;
        ge = ge.add(&model.e.scale(Complex64::new(k, 0.0)))?;
        for (gc, wc) in gw.iter_mut().zip(&model.w) {
            *gc += wc * k;
        }
    }
    Ok((loss, FitModel { e: ge, w: gw }))
}

/// Trained model and its loss history.
#[derive(Debug, Clone)]
pub struct FitResult {
    pub model: FitModel,
    /// Loss before each of the `epochs` updates.
    pub trace: Vec<f64>,
    /// Loss after the last update.
    pub final_loss: f64,
}

/// Deterministic seeded initialization: every component is `init_scale·N(0, 1)`.
pub fn init_model(n: usize, config: &FitConfig) -> Result<FitModel> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut draw = || {
        let re: f64 = StandardNormal.sample(&mut rng);
        let im: f64 = StandardNormal.sample(&mut rng);
        Complex64::new(re, im) * config.init_scale
    };
    let e: Vec<Complex64> = (0..n * config.m).map(|_| draw()).collect();
    let w: Vec<Complex64> = (0..config.m).map(|_| draw()).collect();
    FitModel::new(ComplexMatrix::new(n, config.m, e)?, w)
}

/// Full-batch gradient descent from a seeded Gaussian start.
pub fn fit_lowrank(target: Target<'_>, config: &FitConfig) -> Result<FitResult> {
    config.validate()?;
    let (n, cols) = target.shape();
    if n != cols {
        return Err(Error::Shape(format!(
            "target must be square, got {n}x{cols}"
        )));
    }
    let mut model = init_model(n, config)?;
    let mut trace = Vec::with_capacity(config.epochs);
    let step = Complex64::new(config.learning_rate, 0.0);
    for epoch in 0..config.epochs {
        let (loss, grad) = loss_and_gradient(&model, target, config)?;
        if !loss.is_finite() {
            return Err(Error::Divergence { epoch });
        }
        trace.push(loss);
        model.e = model
            .e
            .sub(&grad.e.scale(step))
            .map_err(|_| Error::Divergence { epoch })?;
        for (w, gw) in model.w.iter_mut().zip(&grad.w) {
            *w -= gw * step;
        }
        if model.w.iter().any(|z| !z.is_finite()) || model.e.data().iter().any(|z| !z.is_finite()) {
            return Err(Error::Divergence { epoch });
        }
    }
    let (final_loss, _) = loss_and_gradient(&model, target, config)?;
    if !final_loss.is_finite() {
        return Err(Error::Divergence {
            epoch: config.epochs,
        });
    }
    Ok(FitResult {
        model,
        trace,
        final_loss,
    })
}

/// Fraction of entries where `pred·y > 0`. A zero prediction never counts.
pub fn sign_accuracy(pred: &RealMatrix, y: &SignMatrix) -> f64 {
    let total = y.rows() * y.cols();
    if total == 0 {
        return 1.0;
    }
    let hits = (0..y.rows())
        .flat_map(|i| (0..y.cols()).map(move |j| (i, j)))
        .filter(|&(i, j)| pred[(i, j)] * f64::from(y.get(i, j)) > 0.0)
        .count();
    hits as f64 / total as f64
}
