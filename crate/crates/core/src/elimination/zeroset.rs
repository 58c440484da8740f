use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::poly::{Factored, MPoly, Var, VariableSpace};

use super::EliminationError;

pub type Point = BTreeMap<Var, BigRational>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Pool {
    Random,
    OnFactor,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Disagreement {
    pub pool: Pool,
    pub point: BTreeMap<String, String>,
    pub left: bool,
    pub right: bool,
}

/// Outcome of comparing two vanishing predicates on sampled rational points.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ZeroSetReport {
    pub seed: u64,
    pub sample_count: usize,
    pub agree_count: usize,
    pub on_factor_count: usize,
    pub random_count: usize,
    /// Points on which the left side vanished.
    pub left_vanishing: usize,
    /// Random draws thrown away because an excluded polynomial vanished there.
    pub redrawn: usize,
    /// Factors on which no rational point could be constructed.
    pub unsolved_factors: Vec<String>,
    pub disagreements: Vec<Disagreement>,
}

impl ZeroSetReport {
    pub fn passed(&self) -> bool {
        self.disagreements.is_empty() && self.agree_count == self.sample_count
    }
}

/// Rational in `(0, 4)` with denominator at most 64.
pub fn random_rational(rng: &mut impl Rng) -> BigRational {
    let den: i64 = rng.gen_range(1..=64);
    let num: i64 = rng.gen_range(1..4 * den);
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

fn random_point(vars: &[Var], rng: &mut impl Rng) -> Point {
    vars.iter().map(|v| (v.clone(), random_rational(rng))).collect()
}

/// A rational point on `f = 0`: draw all but one variable at random and solve
/// for the remaining one, which must enter `f` linearly.
fn point_on(f: &MPoly, vars: &[Var], rng: &mut impl Rng) -> Result<Option<Point>, EliminationError> {
    let mut linear: Vec<&Var> = vars.iter().filter(|v| f.degree_in(v) == 1).collect();
    if linear.is_empty() {
        return Ok(None);
    }
    for _ in 0..64 {
        linear.shuffle(rng);
        let v = linear[0];
        let mut point = random_point(vars, rng);
        point.remove(v);
        let restricted = f.specialize(&point)?;
        let c = restricted.coefficients_in(v)?;
        let (b, a) = (c[0].as_constant(), c.get(1).and_then(MPoly::as_constant));
        if let (Some(b), Some(a)) = (b, a) {
            if !a.is_zero() {
                point.insert(v.clone(), -b / a);
                return Ok(Some(point));
            }
        }
    }
    Ok(None)
}

fn render(point: &Point) -> BTreeMap<String, String> {
    point.iter().map(|(v, c)| (v.to_string(), c.to_string())).collect()
}

/// Samples points half at random and half on the given factors, and compares two
/// predicates on them. Random draws where an `exclude` polynomial vanishes are redrawn.
#[allow(clippy::too_many_arguments)]
pub fn compare_predicates(
    space: &Arc<VariableSpace>,
    factors: &[MPoly],
    exclude: &[MPoly],
    samples: usize,
    seed: u64,
    left: impl Fn(&Point) -> Result<bool, EliminationError>,
    right: impl Fn(&Point) -> Result<bool, EliminationError>,
) -> Result<ZeroSetReport, EliminationError> {
    if samples == 0 {
        return Err(EliminationError::Argument("need at least one sample".into()));
    }
    let vars: Vec<Var> = space.vars().to_vec();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = ZeroSetReport {
        seed,
        sample_count: samples,
        agree_count: 0,
        on_factor_count: 0,
        random_count: 0,
        left_vanishing: 0,
        redrawn: 0,
        unsolved_factors: Vec::new(),
        disagreements: Vec::new(),
    };
    let solvable: Vec<&MPoly> = factors.iter().filter(|f| vars.iter().any(|v| f.degree_in(v) == 1)).collect();
    for f in factors.iter().filter(|f| !solvable.contains(f)) {
        report.unsolved_factors.push(f.to_string());
    }
    let wanted_on_factor = if solvable.is_empty() { 0 } else { samples / 2 };
    for k in 0..samples {
        let mut drawn = None;
        if k < wanted_on_factor {
            let f = solvable[k % solvable.len()];
            drawn = point_on(f, &vars, &mut rng)?.map(|p| (Pool::OnFactor, p));
        }
        let (pool, point) = match drawn {
            Some(d) => d,
            None => loop {
                let p = random_point(&vars, &mut rng);
                let mut bad = false;
                for e in exclude {
                    if e.eval(&p)?.is_zero() {
                        bad = true;
                        break;
                    }
                }
                if bad {
                    report.redrawn += 1;
                    continue;
                }
                break (Pool::Random, p);
            },
        };
        match pool {
            Pool::Random => report.random_count += 1,
            Pool::OnFactor => report.on_factor_count += 1,
        }
        let (l, r) = (left(&point)?, right(&point)?);
        if l {
            report.left_vanishing += 1;
        }
        if l == r {
            report.agree_count += 1;
        } else {
            report.disagreements.push(Disagreement {
                pool,
                point: render(&point),
                left: l,
                right: r,
            });
        }
    }
    Ok(report)
}

/// Compares where `a` and `b` vanish, sampling on every factor of both.
pub fn zero_set_compare(a: &Factored, b: &Factored, samples: usize, seed: u64) -> Result<ZeroSetReport, EliminationError> {
    if a.space() != b.space() {
        return Err(EliminationError::Argument("operands live in different spaces".into()));
    }
    let mut factors: Vec<MPoly> = a.distinct_factors();
    for f in b.distinct_factors() {
        if !factors.contains(&f) {
            factors.push(f);
        }
    }
    compare_predicates(a.space(), &factors, &[], samples, seed, |p| Ok(a.vanishes_at(p)?), |p| Ok(b.vanishes_at(p)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::recurrence::r_small;

    #[test]
    fn multiplicity_is_ignored() {
        let r2 = r_small(2).unwrap();
        let mut squared = r2.clone();
        let s = r2.space().clone();
        squared.push(&MPoly::var(&s, &Var::Lambda(1)).unwrap() - &MPoly::one(&s), 1).unwrap();
        let rep = zero_set_compare(&r2, &squared, 200, 7).unwrap();
        assert!(rep.passed());
        assert!(rep.on_factor_count >= 100);
    }

    #[test]
    fn distinct_hyperplanes_disagree() {
        let s = VariableSpace::lambda_only(2).unwrap();
        let one = MPoly::one(&s);
        let a = Factored::from_poly(&(&MPoly::var(&s, &Var::Lambda(1)).unwrap() - &one));
        let b = Factored::from_poly(&(&MPoly::var(&s, &Var::Lambda(2)).unwrap() - &one));
        let rep = zero_set_compare(&a, &b, 50, 1).unwrap();
        assert!(!rep.passed());
        assert_eq!(rep.agree_count + rep.disagreements.len(), 50);
    }

    #[test]
    fn same_seed_same_report() {
        let r2 = r_small(2).unwrap();
        assert_eq!(zero_set_compare(&r2, &r2, 40, 3).unwrap(), zero_set_compare(&r2, &r2, 40, 3).unwrap());
    }
}
