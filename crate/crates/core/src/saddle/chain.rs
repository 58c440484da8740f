use rug::Float;

use super::jet::Jet;
use super::model::{jet_of_map, PolycycleModel};
use super::SaddleError;

/// All chain quantities at one base point `x0`.
#[derive(Clone, Debug)]
pub struct ChainResult {
    pub x0: Float,
    /// `F_0 = x, F_1, .., F_n` as jets in `x` of order `r`.
    pub f: Vec<Jet>,
    /// `Z_i = F'_{i−1} / F_{i−1}` for `i = 1..=n`.
    pub z: Vec<Float>,
    /// `mu[i−1][q−1] = y^q d^q/dy^q ln |f_i'(y)|` at `y = F_{i−1}(x0)`, for `q = 1..r−1`.
    pub mu: Vec<Vec<Float>>,
    /// `d[l]` is the `l`-th derivative of `ln |Δ'|` at `x0`, for `l = 0..r−1`.
    pub d: Vec<Float>,
}

impl ChainResult {
    /// `μ_{iq}`, 1-based.
    pub fn mu(&self, i: usize, q: usize) -> &Float {
        &self.mu[i - 1][q - 1]
    }

    pub fn delta(&self) -> &Jet {
        self.f.last().expect("chain has at least one stage")
    }
}

/// Evaluates the composition `Δ = f_n ∘ .. ∘ f_1` and its derived quantities at `x0`.
pub fn chain(model: &PolycycleModel, x0: &Float) -> Result<ChainResult, SaddleError> {
    let prec = model.precision_bits;
    let r = model.jet_order;
    let x0 = Float::with_val(prec, x0);
    let mut f = vec![Jet::variable(&x0, r)];
    let mut z = Vec::with_capacity(model.n());
    let mut mu = Vec::with_capacity(model.n());
    for (i, saddle) in model.saddles.iter().enumerate() {
        let stage = i + 1;
        let prev = &f[i];
        if *prev.value() <= 0 {
            return Err(SaddleError::at_stage(stage, format!("argument {} is not positive", prev.value().to_f64())));
        }
        z.push(Float::with_val(prec, prev.coeff(1) / prev.value()));
        mu.push(saddle.log_derivative_scaled(prev.value(), r - 1).map_err(|e| e.with_stage(stage))?);
        let next = jet_of_map(saddle, prev).map_err(|e| e.with_stage(stage))?;
        f.push(next);
    }
    let log = f[model.n()]
        .derivative_jet()
        .ln_abs()
        .map_err(|_| SaddleError::domain("the composed map has zero derivative"))?;
    let d = log.derivatives();
    Ok(ChainResult { x0, f, z, mu, d })
}
