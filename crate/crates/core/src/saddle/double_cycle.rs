use num_rational::BigRational;
use num_traits::{One, Signed};
use rug::ops::Pow;
use rug::Float;
use serde::Serialize;

use super::jet::Jet;
use super::model::{PolycycleModel, SaddleModel};
use super::{float_string, to_float, SaddleError};

/// Absolute residual tolerance for `Δ(x0) − x0` and `Δ'(x0) − 1`.
pub const NEWTON_TOLERANCE: f64 = 1e-30;

const SUBSTEPS: u32 = 8;
const MAX_ITERATIONS: usize = 200;
const MAX_HALVINGS: u32 = 80;

/// One solved member of the family: offsets making `x0` a fixed point of
/// multiplicity at least two.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DoubleCyclePoint {
    pub x0: String,
    pub tau: [String; 2],
    /// `f_1(x0)`.
    pub y: String,
    /// `(Z_1 : Z_2)` scaled to unit Euclidean length.
    pub z: [String; 2],
    /// `min(|z_1|, |z_2|) / ‖z‖`, the distance to the coordinate axes.
    pub min_ratio: f64,
    pub residuals: [f64; 2],
    pub iterations: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DoubleCycleReport {
    pub lambda: [String; 2],
    pub precision_bits: u32,
    pub tolerance: f64,
    pub points: Vec<DoubleCyclePoint>,
    /// `min_ratio` strictly decreases along the grid.
    pub monotone_decreasing: bool,
    pub final_min_ratio: f64,
}

struct Eval {
    tau: [Float; 2],
    residual: [Float; 2],
    /// `∂(Δ' − 1)/∂τ_1`; the other residual is linear in `τ_2` with unit slope.
    slope_tau1: Float,
    y: Float,
    slope1: Float,
}

impl Eval {
    fn norm(&self) -> Float {
        Float::with_val(self.y.prec(), self.residual[0].abs_ref()).max(&Float::with_val(self.y.prec(), self.residual[1].abs_ref()))
    }
}

/// Evaluates both conditions at `τ_1`, with `τ_2` chosen to satisfy `Δ(x0) = x0`.
fn evaluate(s1: &SaddleModel, s2: &SaddleModel, x0: &Float, tau1: &Float) -> Option<Eval> {
    let prec = x0.prec();
    let first = s1.jet_with_offset(&Jet::variable(x0, 1), tau1).ok()?;
    let y = first.value().clone();
    if y <= 0 {
        return None;
    }
    let slope1 = first.coeff(1).clone();
    let bare = s2.jet_with_offset(&Jet::variable(&y, 2), &Float::new(prec)).ok()?;
    let tau2 = Float::with_val(prec, x0 - bare.value());
    let value = Float::with_val(prec, &tau2 + bare.value());
    let g1 = bare.coeff(1).clone();
    let g2 = Float::with_val(prec, bare.coeff(2) * 2u32);
    let residual = [Float::with_val(prec, &value - x0), Float::with_val(prec, &g1 * &slope1) - 1u32];
    let slope_tau1 = Float::with_val(prec, &g2 * &slope1);
    Some(Eval {
        tau: [tau1.clone(), tau2],
        residual,
        slope_tau1,
        y,
        slope1,
    })
}

/// Damped Newton for `Δ(x0) = x0, Δ'(x0) = 1` in the offsets `(τ_1, τ_2)`.
///
/// The first condition is linear in `τ_2` with unit coefficient, so after each
/// Newton update of `τ_1` it is solved exactly for `τ_2`; step halving then
/// monitors `|Δ'(x0) − 1|` alone, whose scale does not depend on `τ_2`.
fn solve(s1: &SaddleModel, s2: &SaddleModel, x0: &Float, tau1: Float) -> Result<(Eval, usize), SaddleError> {
    let prec = x0.prec();
    let tol = Float::with_val(prec, NEWTON_TOLERANCE);
    let fail = |e: Option<&Eval>| SaddleError::Newton {
        x0: x0.to_string_radix(10, Some(12)),
        residuals: e.map_or([f64::NAN; 2], |e| [e.residual[0].to_f64(), e.residual[1].to_f64()]),
    };
    let mut cur = evaluate(s1, s2, x0, &tau1).ok_or_else(|| fail(None))?;
    for it in 0..MAX_ITERATIONS {
        if cur.norm() <= tol {
            return Ok((cur, it));
        }
        if cur.slope_tau1.is_zero() {
            return Err(fail(Some(&cur)));
        }
        let delta = -Float::with_val(prec, &cur.residual[1] / &cur.slope_tau1);
        let merit = Float::with_val(prec, cur.residual[1].abs_ref());
        let mut step = Float::with_val(prec, 1);
        let mut accepted = None;
        for _ in 0..MAX_HALVINGS {
            let cand = Float::with_val(prec, &cur.tau[0] + Float::with_val(prec, &delta * &step));
            if let Some(e) = evaluate(s1, s2, x0, &cand) {
                if e.residual[1].clone().abs() < merit || e.norm() <= tol {
                    accepted = Some(e);
                    break;
                }
            }
            step /= 2u32;
        }
        cur = accepted.ok_or_else(|| fail(Some(&cur)))?;
    }
    if cur.norm() <= tol {
        Ok((cur, MAX_ITERATIONS))
    } else {
        Err(fail(Some(&cur)))
    }
}

/// Solves, along a decreasing grid of `x0`, for offsets `(τ_1, τ_2)` that make
/// `x0` a double fixed point of `f_2 ∘ f_1`, and tracks the direction `(Z_1 : Z_2)`.
///
/// Each grid point starts from the previous solution and is reached through
/// geometric substeps. The model's own offsets are ignored.
pub fn double_cycle_family_probe(model: &PolycycleModel, grid: &[BigRational]) -> Result<DoubleCycleReport, SaddleError> {
    if model.n() != 2 {
        return Err(SaddleError::Argument("the double-cycle probe needs exactly two saddles".into()));
    }
    let (s1, s2) = (&model.saddles[0], &model.saddles[1]);
    if &s1.lambda * &s2.lambda == BigRational::one() {
        return Err(SaddleError::Precondition("λ_1 λ_2 = 1".into()));
    }
    if grid.is_empty() || grid.iter().any(|x| !x.is_positive()) || grid.windows(2).any(|w| w[1] >= w[0]) {
        return Err(SaddleError::Argument("grid must be a nonempty decreasing sequence of positive values".into()));
    }
    let prec = model.precision_bits;
    let zero = Float::new(prec);

    // Start from the offset that sends the first x0 to 1.
    let first = to_float(&grid[0], prec);
    let to_one = s1.jet_with_offset(&Jet::variable(&first, 0), &zero)?;
    let mut tau1 = Float::with_val(prec, 1 - to_one.value());
    let mut previous: Option<Float> = None;

    let mut points = Vec::with_capacity(grid.len());
    for x in grid {
        let target = to_float(x, prec);
        let mut iterations = 0;
        if let Some(prev) = &previous {
            let ratio = Float::with_val(prec, &target / prev);
            for s in 1..SUBSTEPS {
                let frac = Float::with_val(prec, s) / SUBSTEPS;
                let xs = Float::with_val(prec, prev * Float::with_val(prec, (&ratio).pow(&frac)));
                let (e, it) = solve(s1, s2, &xs, tau1)?;
                tau1 = e.tau[0].clone();
                iterations += it;
            }
        }
        let (eval, it) = solve(s1, s2, &target, tau1.clone())?;
        tau1 = eval.tau[0].clone();
        iterations += it;

        let z1 = Float::with_val(prec, 1 / &target);
        let z2 = Float::with_val(prec, &eval.slope1 / &eval.y);
        let norm = Float::with_val(prec, z1.hypot_ref(&z2));
        let (u1, u2) = (Float::with_val(prec, &z1 / &norm), Float::with_val(prec, &z2 / &norm));
        let min_ratio = Float::with_val(prec, u1.abs_ref()).min(&Float::with_val(prec, u2.abs_ref())).to_f64();
        points.push(DoubleCyclePoint {
            x0: x.to_string(),
            tau: [float_string(&eval.tau[0]), float_string(&eval.tau[1])],
            y: float_string(&eval.y),
            z: [float_string(&u1), float_string(&u2)],
            min_ratio,
            residuals: [eval.residual[0].to_f64(), eval.residual[1].to_f64()],
            iterations,
        });
        previous = Some(target);
    }
    let monotone_decreasing = points.windows(2).all(|w| w[1].min_ratio < w[0].min_ratio);
    let final_min_ratio = points.last().expect("nonempty grid").min_ratio;
    Ok(DoubleCycleReport {
        lambda: [s1.lambda.to_string(), s2.lambda.to_string()],
        precision_bits: prec,
        tolerance: NEWTON_TOLERANCE,
        points,
        monotone_decreasing,
        final_min_ratio,
    })
}
