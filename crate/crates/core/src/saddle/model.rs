use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use rug::Float;
use serde::Serialize;
use serde_json::{Map, Value};

use crate::poly::parse_rational;

use super::jet::Jet;
use super::{to_float, SaddleError};

pub const DEFAULT_PRECISION_BITS: u32 = 256;
pub const MIN_PRECISION_BITS: u32 = 64;
pub const MAX_PRECISION_BITS: u32 = 1 << 16;

/// A malformed model file, naming the offending field.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("model field `{field}`: {message}")]
pub struct ModelError {
    pub field: String,
    pub message: String,
}

impl ModelError {
    fn new(field: impl Into<String>, message: impl Into<String>) -> Self {
        ModelError {
            field: field.into(),
            message: message.into(),
        }
    }
}

/// One correspondence map `x ↦ τ ± C x^λ (1 + a_1 x + a_2 x² + ..)`, with exact
/// rational parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SaddleModel {
    pub lambda: BigRational,
    pub c: BigRational,
    pub tau: BigRational,
    pub sign: i8,
    pub corrections: Vec<BigRational>,
}

impl SaddleModel {
    pub fn new(lambda: BigRational, c: BigRational, tau: BigRational, sign: i8, corrections: Vec<BigRational>) -> Result<Self, ModelError> {
        if !lambda.is_positive() {
            return Err(ModelError::new("lambda", "must be positive"));
        }
        if !c.is_positive() {
            return Err(ModelError::new("c", "must be positive"));
        }
        if sign != 1 && sign != -1 {
            return Err(ModelError::new("sign", "must be 1 or -1"));
        }
        Ok(SaddleModel {
            lambda,
            c,
            tau,
            sign,
            corrections,
        })
    }

    /// `x ↦ x^λ` with no offset and no corrections.
    pub fn pure_power(lambda: BigRational) -> Result<Self, ModelError> {
        Self::new(lambda, BigRational::one(), BigRational::zero(), 1, Vec::new())
    }

    /// Jet of the transition part `C x^λ (1 + Σ a_j x^j)`, without offset or sign.
    pub fn transition_jet(&self, x: &Jet) -> Result<Jet, SaddleError> {
        if *x.value() <= 0 {
            return Err(SaddleError::domain("nonpositive argument to a fractional power"));
        }
        let prec = x.prec();
        let power = x.powf(&to_float(&self.lambda, prec))?;
        let scaled = power.scale(&to_float(&self.c, prec));
        if self.corrections.is_empty() {
            return Ok(scaled);
        }
        let mut coefficients = vec![Float::with_val(prec, 1)];
        coefficients.extend(self.corrections.iter().map(|a| to_float(a, prec)));
        let factor = Jet::polynomial(&coefficients, x);
        if *factor.value() <= 0.5 {
            return Err(SaddleError::domain("argument lies outside the correction radius"));
        }
        Ok(scaled.mul(&factor))
    }

    /// Jet of `τ' ± Δ(x)` for an offset `τ'` that may differ from the model's own.
    pub fn jet_with_offset(&self, x: &Jet, tau: &Float) -> Result<Jet, SaddleError> {
        let t = self.transition_jet(x)?;
        let t = if self.sign < 0 { t.neg() } else { t };
        Ok(t.add_scalar(tau))
    }

    /// `y^q d^q/dy^q ln |f'(y)|` for `q = 1..=q_max`.
    pub fn log_derivative_scaled(&self, y: &Float, q_max: usize) -> Result<Vec<Float>, SaddleError> {
        let prec = y.prec();
        let f = self.transition_jet(&Jet::variable(y, q_max + 1))?;
        let log = f.derivative_jet().ln_abs()?;
        let mut out = Vec::with_capacity(q_max);
        let mut y_pow = Float::with_val(prec, 1);
        for q in 1..=q_max {
            y_pow *= y;
            out.push(Float::with_val(prec, log.derivative(q) * &y_pow));
        }
        Ok(out)
    }

    fn to_file(&self) -> SaddleFile {
        SaddleFile {
            lambda: self.lambda.to_string(),
            c: self.c.to_string(),
            tau: self.tau.to_string(),
            sign: self.sign,
            corrections: self.corrections.iter().map(ToString::to_string).collect(),
        }
    }
}

/// `τ ± C x^λ (1 + Σ a_j x^j)` on a jet.
pub fn jet_of_map(m: &SaddleModel, x: &Jet) -> Result<Jet, SaddleError> {
    m.jet_with_offset(x, &to_float(&m.tau, x.prec()))
}

/// A chain of correspondence maps together with the numeric settings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolycycleModel {
    pub saddles: Vec<SaddleModel>,
    pub precision_bits: u32,
    pub jet_order: usize,
}

#[derive(Serialize)]
struct SaddleFile {
    lambda: String,
    c: String,
    tau: String,
    sign: i8,
    corrections: Vec<String>,
}

#[derive(Serialize)]
struct ModelFile {
    saddles: Vec<SaddleFile>,
    precision_bits: u32,
    jet_order: usize,
}

fn rational_field(obj: &Map<String, Value>, key: &str, path: &str, default: Option<BigRational>) -> Result<BigRational, ModelError> {
    let field = format!("{path}.{key}");
    match obj.get(key) {
        None => default.ok_or_else(|| ModelError::new(&field, "missing")),
        Some(Value::String(s)) => parse_rational(s).map_err(|_| ModelError::new(&field, format!("`{s}` is not a rational number"))),
        Some(_) => Err(ModelError::new(&field, "expected a rational written as a string, such as \"3/2\"")),
    }
}

fn integer_field(obj: &Map<String, Value>, key: &str, field: &str) -> Result<Option<i64>, ModelError> {
    match obj.get(key) {
        None => Ok(None),
        Some(v) => v.as_i64().map(Some).ok_or_else(|| ModelError::new(field, "expected an integer")),
    }
}

fn check_keys(obj: &Map<String, Value>, allowed: &[&str], path: &str) -> Result<(), ModelError> {
    for k in obj.keys() {
        if !allowed.contains(&k.as_str()) {
            let field = if path.is_empty() { k.clone() } else { format!("{path}.{k}") };
            return Err(ModelError::new(field, "unknown field"));
        }
    }
    Ok(())
}

fn parse_saddle(v: &Value, path: &str) -> Result<SaddleModel, ModelError> {
    let obj = v.as_object().ok_or_else(|| ModelError::new(path, "expected an object"))?;
    check_keys(obj, &["lambda", "c", "tau", "sign", "corrections"], path)?;
    let lambda = rational_field(obj, "lambda", path, None)?;
    let c = rational_field(obj, "c", path, Some(BigRational::one()))?;
    let tau = rational_field(obj, "tau", path, Some(BigRational::zero()))?;
    let sign_field = format!("{path}.sign");
    let sign = match integer_field(obj, "sign", &sign_field)? {
        None => 1,
        Some(1) => 1,
        Some(-1) => -1,
        Some(_) => return Err(ModelError::new(sign_field, "must be 1 or -1")),
    };
    let corr_field = format!("{path}.corrections");
    let corrections = match obj.get("corrections") {
        None => Vec::new(),
        Some(Value::Array(items)) => items
            .iter()
            .enumerate()
            .map(|(j, item)| {
                let field = format!("{corr_field}[{j}]");
                match item {
                    Value::String(s) => parse_rational(s).map_err(|_| ModelError::new(&field, format!("`{s}` is not a rational number"))),
                    _ => Err(ModelError::new(&field, "expected a rational written as a string")),
                }
            })
            .collect::<Result<_, _>>()?,
        Some(_) => return Err(ModelError::new(corr_field, "expected an array")),
    };
    SaddleModel::new(lambda, c, tau, sign, corrections).map_err(|e| ModelError::new(format!("{path}.{}", e.field), e.message))
}

impl PolycycleModel {
    pub fn new(saddles: Vec<SaddleModel>, precision_bits: u32, jet_order: usize) -> Result<Self, ModelError> {
        if saddles.is_empty() {
            return Err(ModelError::new("saddles", "at least one saddle is required"));
        }
        if !(MIN_PRECISION_BITS..=MAX_PRECISION_BITS).contains(&precision_bits) {
            return Err(ModelError::new(
                "precision_bits",
                format!("must lie in {MIN_PRECISION_BITS}..={MAX_PRECISION_BITS}"),
            ));
        }
        if jet_order < saddles.len() + 1 || jet_order > 64 {
            return Err(ModelError::new(
                "jet_order",
                format!("must lie in {}..=64 for {} saddles", saddles.len() + 1, saddles.len()),
            ));
        }
        Ok(PolycycleModel {
            saddles,
            precision_bits,
            jet_order,
        })
    }

    pub fn n(&self) -> usize {
        self.saddles.len()
    }

    pub fn with_precision(&self, bits: u32) -> Result<Self, ModelError> {
        Self::new(self.saddles.clone(), bits, self.jet_order)
    }

    pub fn with_jet_order(&self, order: usize) -> Result<Self, ModelError> {
        Self::new(self.saddles.clone(), self.precision_bits, order)
    }

    /// Parses a model file:
    /// `{"saddles": [{"lambda": "3/2", "c": "1", "tau": "0", "sign": 1, "corrections": ["1/2"]}], "precision_bits": 256, "jet_order": 6}`.
    ///
    /// `c` defaults to 1, `tau` to 0, `sign` to 1, `corrections` to none,
    /// `precision_bits` to 256 and `jet_order` to `n + 1`.
    pub fn from_json_str(s: &str) -> Result<Self, ModelError> {
        let v: Value = serde_json::from_str(s).map_err(|e| ModelError::new("<root>", format!("invalid JSON: {e}")))?;
        let obj = v.as_object().ok_or_else(|| ModelError::new("<root>", "expected an object"))?;
        check_keys(obj, &["saddles", "precision_bits", "jet_order"], "")?;
        let saddles = match obj.get("saddles") {
            Some(Value::Array(items)) => items
                .iter()
                .enumerate()
                .map(|(i, s)| parse_saddle(s, &format!("saddles[{i}]")))
                .collect::<Result<Vec<_>, _>>()?,
            Some(_) => return Err(ModelError::new("saddles", "expected an array")),
            None => return Err(ModelError::new("saddles", "missing")),
        };
        let bits = integer_field(obj, "precision_bits", "precision_bits")?.unwrap_or(i64::from(DEFAULT_PRECISION_BITS));
        let bits = u32::try_from(bits).map_err(|_| ModelError::new("precision_bits", "out of range"))?;
        let order = integer_field(obj, "jet_order", "jet_order")?.unwrap_or(saddles.len() as i64 + 1);
        let order = usize::try_from(order).map_err(|_| ModelError::new("jet_order", "out of range"))?;
        Self::new(saddles, bits, order)
    }

    /// The model in file form, with rationals as strings.
    pub fn to_json_value(&self) -> Value {
        let file = ModelFile {
            saddles: self.saddles.iter().map(SaddleModel::to_file).collect(),
            precision_bits: self.precision_bits,
            jet_order: self.jet_order,
        };
        serde_json::to_value(file).expect("model serializes")
    }

    pub fn to_json_string(&self) -> String {
        self.to_json_value().to_string()
    }
}

/// A randomly drawn model together with a base point in its domain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RandomModel {
    pub model: PolycycleModel,
    pub x0: BigRational,
}

fn rational_in(rng: &mut impl Rng, lo: i64, hi: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(rng.gen_range(lo * den + 1..hi * den)), BigInt::from(den))
}

fn dyadic_floor(v: &Float, bits: u32) -> BigRational {
    let mut scaled = v.clone();
    scaled <<= bits;
    let n = scaled.floor().to_integer().expect("finite");
    let num: BigInt = n.to_string().parse().expect("integer");
    BigRational::new(num, BigInt::one() << bits as usize)
}

/// Draws a model with `n` saddles whose chain stays in `(0, 1)` at a random base
/// point, with up to three small corrections per saddle.
///
/// Offsets are chosen so that each intermediate value lands near a random target
/// in `(1/10, 9/10)`; corrections are bounded by `1/8` in absolute value, so the
/// correction factor stays above `1/2` on `(0, 1]`.
pub fn random_model(n: usize, jet_order: usize, precision_bits: u32, rng: &mut impl Rng) -> Result<RandomModel, SaddleError> {
    if n == 0 {
        return Err(SaddleError::Argument("n must be at least 1".into()));
    }
    let x0 = rational_in(rng, 0, 1, 64)
        .max(BigRational::new(1.into(), 16.into()))
        .min(BigRational::new(15.into(), 16.into()));
    let prec = precision_bits.max(128);
    let mut y = to_float(&x0, prec);
    let mut saddles = Vec::with_capacity(n);
    for _ in 0..n {
        let lambda = rational_in(rng, 0, 4, 12);
        let c = rational_in(rng, 0, 3, 8);
        let sign: i8 = if rng.gen_bool(0.5) { 1 } else { -1 };
        let k = rng.gen_range(0..=3);
        let corrections: Vec<BigRational> = (0..k)
            .map(|_| BigRational::new(BigInt::from(rng.gen_range(-15..=15)), BigInt::from(128)))
            .collect();
        let mut saddle = SaddleModel::new(lambda, c, BigRational::zero(), sign, corrections).map_err(SaddleError::Model)?;
        let delta = saddle.transition_jet(&Jet::variable(&y, 0))?.value().clone();
        let target = to_float(&BigRational::new(BigInt::from(rng.gen_range(10..=90)), BigInt::from(100)), prec);
        let wanted = if sign > 0 {
            Float::with_val(prec, &target - &delta)
        } else {
            Float::with_val(prec, &target + &delta)
        };
        saddle.tau = dyadic_floor(&wanted, 40);
        y = jet_of_map(&saddle, &Jet::variable(&y, 0))?.value().clone();
        if y <= 0 || y.to_f64() >= 1.0 {
            return Err(SaddleError::domain("random model left the unit interval"));
        }
        saddles.push(saddle);
    }
    let model = PolycycleModel::new(saddles, precision_bits, jet_order).map_err(SaddleError::Model)?;
    debug_assert!(model
        .saddles
        .iter()
        .all(|s| s.corrections.iter().all(|a| a.abs().to_f64().unwrap_or(1.0) < 0.125)));
    Ok(RandomModel { model, x0 })
}
