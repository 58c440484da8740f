use rug::ops::Pow;
use rug::Float;

use super::SaddleError;

/// Truncated Taylor expansion of a scalar function at a point.
///
/// Coefficients are stored normalized, `c_k = g^(k)(x) / k!`, which keeps products
/// and quotients free of factorials; [`Jet::derivatives`] converts back.
#[derive(Clone, Debug, PartialEq)]
pub struct Jet {
    point: Float,
    coeffs: Vec<Float>,
    prec: u32,
}

impl Jet {
    /// The identity function `x ↦ x` at `point`: `[x, 1, 0, ..]`.
    pub fn variable(point: &Float, order: usize) -> Self {
        let prec = point.prec();
        let mut coeffs = vec![Float::new(prec); order + 1];
        coeffs[0].clone_from(point);
        if order >= 1 {
            coeffs[1] = Float::with_val(prec, 1);
        }
        Jet {
            point: point.clone(),
            coeffs,
            prec,
        }
    }

    pub fn constant(value: &Float, point: &Float, order: usize) -> Self {
        let prec = point.prec();
        let mut coeffs = vec![Float::new(prec); order + 1];
        coeffs[0] = Float::with_val(prec, value);
        Jet {
            point: point.clone(),
            coeffs,
            prec,
        }
    }

    /// Builds a jet from `[g(x), g'(x), .., g^(r)(x)]`.
    pub fn from_derivatives(point: &Float, derivs: &[Float]) -> Self {
        let prec = point.prec();
        let mut fact = Float::with_val(prec, 1);
        let coeffs = derivs
            .iter()
            .enumerate()
            .map(|(k, d)| {
                if k > 0 {
                    fact *= k as u32;
                }
                Float::with_val(prec, d / &fact)
            })
            .collect();
        Jet {
            point: point.clone(),
            coeffs,
            prec,
        }
    }

    fn with_coeffs(&self, coeffs: Vec<Float>) -> Self {
        Jet {
            point: self.point.clone(),
            coeffs,
            prec: self.prec,
        }
    }

    pub fn point(&self) -> &Float {
        &self.point
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn value(&self) -> &Float {
        &self.coeffs[0]
    }

    /// Normalized Taylor coefficient `g^(k)(x) / k!`.
    pub fn coeff(&self, k: usize) -> &Float {
        &self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[Float] {
        &self.coeffs
    }

    /// `g^(k)(x)`.
    pub fn derivative(&self, k: usize) -> Float {
        let mut d = self.coeffs[k].clone();
        for j in 2..=k as u32 {
            d *= j;
        }
        d
    }

    /// `[g(x), g'(x), .., g^(r)(x)]`.
    pub fn derivatives(&self) -> Vec<Float> {
        (0..=self.order()).map(|k| self.derivative(k)).collect()
    }

    /// Jet of `g'`, one order lower.
    pub fn derivative_jet(&self) -> Self {
        let coeffs = (1..self.coeffs.len())
            .map(|k| Float::with_val(self.prec, &self.coeffs[k] * k as u32))
            .collect::<Vec<_>>();
        let coeffs = if coeffs.is_empty() { vec![Float::new(self.prec)] } else { coeffs };
        self.with_coeffs(coeffs)
    }

    pub fn truncate(&self, order: usize) -> Self {
        self.with_coeffs(self.coeffs[..=order.min(self.order())].to_vec())
    }

    fn common_order(&self, other: &Self) -> usize {
        self.order().min(other.order())
    }

    pub fn add(&self, other: &Self) -> Self {
        let r = self.common_order(other);
        self.with_coeffs((0..=r).map(|k| Float::with_val(self.prec, &self.coeffs[k] + &other.coeffs[k])).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let r = self.common_order(other);
        self.with_coeffs((0..=r).map(|k| Float::with_val(self.prec, &self.coeffs[k] - &other.coeffs[k])).collect())
    }

    pub fn neg(&self) -> Self {
        self.with_coeffs(self.coeffs.iter().map(|c| Float::with_val(self.prec, -c)).collect())
    }

    pub fn scale(&self, s: &Float) -> Self {
        self.with_coeffs(self.coeffs.iter().map(|c| Float::with_val(self.prec, c * s)).collect())
    }

    pub fn add_scalar(&self, s: &Float) -> Self {
        let mut out = self.clone();
        out.coeffs[0] += s;
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let r = self.common_order(other);
        let coeffs = (0..=r)
            .map(|k| {
                let mut acc = Float::new(self.prec);
                for j in 0..=k {
                    acc += &self.coeffs[j] * &other.coeffs[k - j];
                }
                acc
            })
            .collect();
        self.with_coeffs(coeffs)
    }

    pub fn div(&self, other: &Self) -> Result<Self, SaddleError> {
        let b0 = &other.coeffs[0];
        if b0.is_zero() {
            return Err(SaddleError::domain("division by a jet with zero value"));
        }
        let r = self.common_order(other);
        let mut out: Vec<Float> = Vec::with_capacity(r + 1);
        for k in 0..=r {
            let mut acc = self.coeffs[k].clone();
            for j in 1..=k {
                acc -= &other.coeffs[j] * &out[k - j];
            }
            acc /= b0;
            out.push(acc);
        }
        Ok(self.with_coeffs(out))
    }

    /// `ln g` for `g(x) > 0`.
    pub fn ln(&self) -> Result<Self, SaddleError> {
        let a0 = &self.coeffs[0];
        if *a0 <= 0 {
            return Err(SaddleError::domain("logarithm of a nonpositive value"));
        }
        let r = self.order();
        let mut out: Vec<Float> = Vec::with_capacity(r + 1);
        out.push(Float::with_val(self.prec, a0.ln_ref()));
        for k in 1..=r {
            let mut acc = Float::new(self.prec);
            for (j, o) in out.iter().enumerate().take(k).skip(1) {
                acc += Float::with_val(self.prec, o * &self.coeffs[k - j]) * j as u32;
            }
            acc /= k as u32;
            let v = Float::with_val(self.prec, &self.coeffs[k] - &acc) / a0;
            out.push(v);
        }
        Ok(self.with_coeffs(out))
    }

    /// `ln |g|` for `g(x) ≠ 0`.
    pub fn ln_abs(&self) -> Result<Self, SaddleError> {
        if self.coeffs[0].is_sign_negative() && !self.coeffs[0].is_zero() {
            self.neg().ln()
        } else {
            self.ln()
        }
    }

    pub fn exp(&self) -> Self {
        let r = self.order();
        let mut out: Vec<Float> = Vec::with_capacity(r + 1);
        out.push(Float::with_val(self.prec, self.coeffs[0].exp_ref()));
        for k in 1..=r {
            let mut acc = Float::new(self.prec);
            for j in 1..=k {
                acc += Float::with_val(self.prec, &self.coeffs[j] * &out[k - j]) * j as u32;
            }
            acc /= k as u32;
            out.push(acc);
        }
        self.with_coeffs(out)
    }

    /// `g^λ` for `g(x) > 0`.
    pub fn powf(&self, lambda: &Float) -> Result<Self, SaddleError> {
        let a0 = &self.coeffs[0];
        if *a0 <= 0 {
            return Err(SaddleError::domain("fractional power of a nonpositive value"));
        }
        let p = self.prec;
        let r = self.order();
        let mut out: Vec<Float> = Vec::with_capacity(r + 1);
        out.push(Float::with_val(p, a0.pow(lambda)));
        for k in 1..=r {
            let mut acc = Float::new(p);
            for j in 1..=k {
                // λ j − (k − j)
                let w = Float::with_val(p, lambda * j as u32) - (k - j) as u32;
                acc += w * Float::with_val(p, &self.coeffs[j] * &out[k - j]);
            }
            acc /= Float::with_val(p, a0 * k as u32);
            out.push(acc);
        }
        Ok(self.with_coeffs(out))
    }

    /// `outer ∘ inner`, where `outer` is expanded at `inner`'s value.
    pub fn compose(outer: &Self, inner: &Self) -> Self {
        let r = outer.order().min(inner.order());
        let prec = inner.prec;
        let mut shift = inner.truncate(r);
        shift.coeffs[0] = Float::new(prec);
        let mut acc = Jet::constant(&outer.coeffs[r], &inner.point, r);
        for k in (0..r).rev() {
            acc = acc.mul(&shift).add_scalar(&outer.coeffs[k]);
        }
        acc
    }

    /// Evaluates `Σ c_k x^k` on a jet by Horner's rule.
    pub fn polynomial(coefficients: &[Float], x: &Self) -> Self {
        let r = x.order();
        let mut acc = Jet::constant(&Float::new(x.prec), &x.point, r);
        for c in coefficients.iter().rev() {
            acc = acc.mul(x).add_scalar(c);
        }
        acc
    }
}
