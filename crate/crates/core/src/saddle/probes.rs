use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use rug::ops::Pow;
use rug::Float;
use serde::Serialize;

use crate::poly::{MPoly, Var};
use crate::recurrence::{mu_limit_coefficient, p_family, PFamily};

use super::chain::chain;
use super::jet::Jet;
use super::model::PolycycleModel;
use super::{float_string, to_float, SaddleError};

/// `(−1)^{q−1} (q−1)! (λ − 1)`.
pub fn mu_target(lambda: &BigRational, q: usize) -> BigRational {
    mu_limit_coefficient(q) * (lambda - BigRational::one())
}

/// `start, start·ratio, .., start·ratio^{count−1}`.
pub fn geometric_grid(start: &BigRational, ratio: &BigRational, count: usize) -> Vec<BigRational> {
    let mut out = Vec::with_capacity(count);
    let mut x = start.clone();
    for _ in 0..count {
        out.push(x.clone());
        x = &x * ratio;
    }
    out
}

/// Richardson extrapolation of values sampled at `x_k = x_0 ρ^k`, assuming an
/// error expansion in integer powers of `x`.
pub fn richardson(values: &[Float], ratio: &Float) -> Float {
    let prec = values.first().map_or(64, Float::prec);
    let mut table: Vec<Float> = values.to_vec();
    let mut rho_m = Float::with_val(prec, 1);
    for m in 1..values.len() {
        rho_m *= ratio;
        let denom = Float::with_val(prec, 1 - &rho_m);
        table = (0..values.len() - m)
            .map(|k| {
                let num = Float::with_val(prec, &table[k + 1] - Float::with_val(prec, &rho_m * &table[k]));
                num / &denom
            })
            .collect();
    }
    table.pop().unwrap_or_else(|| Float::new(prec))
}

/// Outcome of sampling `x^q d^q/dx^q ln |Δ_i'(x)|` along a geometric sequence.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MuLimitReport {
    pub i: usize,
    pub q: usize,
    pub lambda: String,
    pub xs: Vec<String>,
    pub estimates: Vec<String>,
    /// `|estimate − target|` per sample.
    pub estimate_errors: Vec<f64>,
    pub extrapolated: String,
    pub target: String,
    /// `|extrapolated − target|`.
    pub error: f64,
    pub precision_bits: u32,
}

impl MuLimitReport {
    pub fn within(&self, tolerance: f64) -> bool {
        self.error <= tolerance
    }
}

fn mu_estimates(model: &PolycycleModel, i: usize, q: usize, xs: &[BigRational], prec: u32) -> Result<Vec<Float>, SaddleError> {
    let saddle = &model.saddles[i - 1];
    xs.iter()
        .map(|x| Ok(saddle.log_derivative_scaled(&to_float(x, prec), q)?.pop().expect("q ≥ 1")))
        .collect()
}

fn agrees(a: &[Float], b: &[Float], bits: u32) -> bool {
    let tol = Float::with_val(64, Float::i_exp(1, -(bits as i32)));
    a.iter().zip(b).all(|(x, y)| {
        let diff = Float::with_val(y.prec(), x - y).abs();
        let scale = Float::with_val(y.prec(), y.abs_ref()).max(&Float::with_val(64, 1));
        diff <= Float::with_val(y.prec(), &tol * &scale)
    })
}

/// Samples the scaled log-derivative of saddle `i` at the points `xs` (a geometric
/// sequence tending to zero) and extrapolates its limit.
///
/// Samples are recomputed with extra guard bits; when more than half the working
/// bits disagree the precision doubles once before giving up.
pub fn mu_limit_probe(model: &PolycycleModel, i: usize, q: usize, xs: &[BigRational]) -> Result<MuLimitReport, SaddleError> {
    if i == 0 || i > model.n() {
        return Err(SaddleError::Argument(format!("saddle index {i} outside 1..={}", model.n())));
    }
    if q == 0 || q + 1 > model.jet_order {
        return Err(SaddleError::Argument(format!("q = {q} must lie in 1..={}", model.jet_order - 1)));
    }
    if xs.len() < 2 || xs.iter().any(|x| !x.is_positive()) {
        return Err(SaddleError::Argument("need at least two positive sample points".into()));
    }
    let ratio = &xs[1] / &xs[0];
    if ratio >= BigRational::one() || xs.windows(2).any(|w| &w[1] / &w[0] != ratio) {
        return Err(SaddleError::Argument("sample points must form a decreasing geometric sequence".into()));
    }
    let base = model.precision_bits;
    let mut accepted = None;
    for prec in [base, 2 * base] {
        let est = mu_estimates(model, i, q, xs, prec)?;
        let guard = mu_estimates(model, i, q, xs, prec + prec / 2)?;
        if agrees(&est, &guard, prec / 2) {
            accepted = Some((prec, est));
            break;
        }
    }
    let (prec, est) = accepted.ok_or_else(|| SaddleError::Precision(format!("samples for q = {q} lose more than half of {} bits", 2 * base)))?;
    let lambda = &model.saddles[i - 1].lambda;
    let target_exact = mu_target(lambda, q);
    let target = to_float(&target_exact, prec);
    let extrapolated = richardson(&est, &to_float(&ratio, prec));
    let err = |v: &Float| Float::with_val(prec, v - &target).abs().to_f64();
    Ok(MuLimitReport {
        i,
        q,
        lambda: lambda.to_string(),
        xs: xs.iter().map(ToString::to_string).collect(),
        estimate_errors: est.iter().map(err).collect(),
        estimates: est.iter().map(float_string).collect(),
        error: err(&extrapolated),
        extrapolated: float_string(&extrapolated),
        target: target_exact.to_string(),
        precision_bits: prec,
    })
}

/// Evaluates `p` at float values; returns the value and the sum of absolute term values.
pub fn eval_float(p: &MPoly, values: &BTreeMap<Var, Float>, prec: u32) -> Result<(Float, Float), SaddleError> {
    let space = p.space();
    let mut total = Float::new(prec);
    let mut magnitude = Float::new(prec);
    for (m, c) in p.terms() {
        let mut t = to_float(c, prec);
        for &(idx, e) in m.pairs() {
            let v = space.var(idx);
            let x = values.get(v).ok_or_else(|| SaddleError::Argument(format!("no value for {v}")))?;
            t *= Float::with_val(prec, x.pow(e));
        }
        magnitude += Float::with_val(prec, t.abs_ref());
        total += &t;
    }
    Ok((total, magnitude))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdentityRow {
    pub l: usize,
    /// `𝒟^(l)(x0)` by differentiating `ln |Δ'|` directly.
    pub jet_value: String,
    /// `P_{n,l}` evaluated at the numeric `μ_{iq}(x0), Z_i(x0)`.
    pub poly_value: String,
    /// `|jet − poly| / max(|jet|, Σ |terms of P|)`.
    pub rel_error: String,
    pub within_tolerance: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdentityReport {
    pub n: usize,
    pub x0: String,
    pub precision_bits: u32,
    /// Accepted relative error is `2^tolerance_log2`.
    pub tolerance_log2: i32,
    pub rows: Vec<IdentityRow>,
    pub max_rel_error: String,
    pub passed: bool,
}

/// Compares `𝒟^(l)(x0)` computed by jets with `P_{n,l}` evaluated at the chain
/// quantities, for `l = 1..=l_max`, using a precomputed family.
pub fn identity_check_with(model: &PolycycleModel, x0: &BigRational, l_max: usize, family: &PFamily) -> Result<IdentityReport, SaddleError> {
    if l_max == 0 || l_max + 1 > model.jet_order {
        return Err(SaddleError::Argument(format!("l_max = {l_max} must lie in 1..={}", model.jet_order - 1)));
    }
    if family.n != model.n() || family.polys.len() < l_max {
        return Err(SaddleError::Argument("family does not match the model".into()));
    }
    let prec = model.precision_bits;
    let ch = chain(model, &to_float(x0, prec))?;
    let mut values = BTreeMap::new();
    for i in 1..=model.n() {
        values.insert(Var::Z(i), ch.z[i - 1].clone());
        for q in 1..model.jet_order {
            values.insert(Var::Mu(i, q), ch.mu(i, q).clone());
        }
    }
    let tolerance_log2 = -((prec / 2) as i32);
    let tol = Float::with_val(prec, Float::i_exp(1, tolerance_log2));
    let mut rows = Vec::with_capacity(l_max);
    let mut max_err = Float::new(prec);
    for l in 1..=l_max {
        let p = family.get(l).expect("length checked");
        let (poly, magnitude) = eval_float(p, &values, prec)?;
        let jet = &ch.d[l];
        let denom = Float::with_val(prec, jet.abs_ref()).max(&magnitude);
        let diff = Float::with_val(prec, jet - &poly).abs();
        let err = if denom.is_zero() { diff } else { diff / &denom };
        if err > max_err {
            max_err.clone_from(&err);
        }
        rows.push(IdentityRow {
            l,
            jet_value: float_string(jet),
            poly_value: float_string(&poly),
            rel_error: err.to_string_radix(10, Some(6)),
            within_tolerance: err <= tol,
        });
    }
    let passed = rows.iter().all(|r| r.within_tolerance);
    Ok(IdentityReport {
        n: model.n(),
        x0: x0.to_string(),
        precision_bits: prec,
        tolerance_log2,
        rows,
        max_rel_error: max_err.to_string_radix(10, Some(6)),
        passed,
    })
}

/// [`identity_check_with`] with the family generated on the spot.
pub fn identity_check(model: &PolycycleModel, x0: &BigRational, l_max: usize) -> Result<IdentityReport, SaddleError> {
    let family = p_family(model.n(), l_max)?;
    identity_check_with(model, x0, l_max, &family)
}

/// Behaviour of `ln |Δ'(x)|` along `x_k = 10^{−k}` for a single saddle.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DivergenceReport {
    pub lambda: String,
    pub xs: Vec<String>,
    pub values: Vec<String>,
    /// `−1` for `−∞`, `+1` for `+∞`, `0` for a bounded limit.
    pub expected_direction: i8,
    /// `d ln Δ' / d ln x` between the last two samples.
    pub tail_slope: f64,
    /// The slope of the leading behaviour, `λ − 1`.
    pub expected_slope: f64,
    /// First index after which every step moves in the expected direction.
    pub monotone_from: Option<usize>,
    /// `max − min` of the sampled values.
    pub spread: f64,
    pub passed: bool,
}

/// Checks that `ln |Δ'|` diverges to `−sign(λ−1)·∞` as `x → 0`, log-linearly with
/// slope `λ − 1`, or stays bounded when `λ = 1`.
pub fn divergence_probe_n1(model: &PolycycleModel, decades: usize) -> Result<DivergenceReport, SaddleError> {
    if model.n() != 1 {
        return Err(SaddleError::Argument("the divergence probe needs exactly one saddle".into()));
    }
    if decades < 3 {
        return Err(SaddleError::Argument("need at least three decades".into()));
    }
    let prec = model.precision_bits;
    let saddle = &model.saddles[0];
    let tenth = BigRational::new(BigInt::one(), BigInt::from(10));
    let xs = geometric_grid(&tenth, &tenth, decades);
    let values: Vec<Float> = xs
        .iter()
        .map(|x| {
            let jet = saddle.transition_jet(&Jet::variable(&to_float(x, prec), 1))?;
            Ok(jet.derivative_jet().ln_abs()?.value().clone())
        })
        .collect::<Result<_, SaddleError>>()?;
    let slope_of = |a: &Float, b: &Float| -> f64 {
        let ln10 = Float::with_val(prec, 10).ln();
        Float::with_val(prec, b - a).to_f64() / -ln10.to_f64()
    };
    let lambda_minus_one = &saddle.lambda - BigRational::one();
    let expected_direction: i8 = if lambda_minus_one.is_positive() {
        -1
    } else if lambda_minus_one.is_negative() {
        1
    } else {
        0
    };
    let expected_slope = to_float(&lambda_minus_one, 64).to_f64();
    let tail_slope = slope_of(&values[decades - 2], &values[decades - 1]);
    let steps: Vec<i8> = values
        .windows(2)
        .map(|w| {
            let d = Float::with_val(prec, &w[1] - &w[0]);
            if d.is_zero() {
                0
            } else if d.is_sign_positive() {
                1
            } else {
                -1
            }
        })
        .collect();
    let monotone_from = if expected_direction == 0 {
        None
    } else {
        let bad = steps.iter().rposition(|&s| s != expected_direction);
        match bad {
            None => Some(0),
            Some(k) if k + 1 < steps.len() => Some(k + 1),
            Some(_) => None,
        }
    };
    let (lo, hi) = values
        .iter()
        .fold((values[0].to_f64(), values[0].to_f64()), |(lo, hi), v| (lo.min(v.to_f64()), hi.max(v.to_f64())));
    let passed = if expected_direction == 0 {
        tail_slope.abs() < 1e-3 && (hi - lo).is_finite()
    } else {
        monotone_from.is_some_and(|k| k <= decades / 2) && (tail_slope - expected_slope).abs() <= 1e-2 * expected_slope.abs()
    };
    Ok(DivergenceReport {
        lambda: saddle.lambda.to_string(),
        xs: xs.iter().map(ToString::to_string).collect(),
        values: values.iter().map(float_string).collect(),
        expected_direction,
        tail_slope,
        expected_slope,
        monotone_from,
        spread: hi - lo,
        passed,
    })
}
