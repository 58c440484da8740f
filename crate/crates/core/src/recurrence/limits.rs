use std::collections::BTreeMap;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;

use super::{mu_limit_coefficient, q_family, q_step_with, QFamily, RecurrenceError};
use crate::poly::{power_sum, Block, MPoly, Var, VariableSpace};

const T: &str = "t";

fn t_space(m: usize) -> Result<Arc<VariableSpace>, RecurrenceError> {
    Ok(VariableSpace::new(m, vec![Block::Z, Block::Aux { name: T.into() }])?)
}

fn check_range(n: usize, l: usize) -> Result<(), RecurrenceError> {
    if n < 2 || l == 0 || l >= n {
        return Err(RecurrenceError::Argument(format!("need 1 <= l <= n - 1, got n = {n}, l = {l}")));
    }
    Ok(())
}

/// `(−1)^{l−1} (l−1)! (z_1^l + .. + z_{n−1}^l)` over `Z(n−1)`.
pub fn power_sum_target(n: usize, l: usize) -> Result<MPoly, RecurrenceError> {
    check_range(n, l)?;
    let s = VariableSpace::z_only(n - 1)?;
    Ok(power_sum(&s, l as u32)?.scale(&mu_limit_coefficient(l)))
}

/// Divides by `t` (which must divide) and then sets `t = 0`.
fn leading_t_coefficient(p: &MPoly) -> Result<MPoly, RecurrenceError> {
    let s = p.space();
    let t = s.require(&Var::Aux(T.into()))?;
    let mut terms = Vec::new();
    for (m, c) in p.terms() {
        match m.exponent(t) {
            0 => return Err(RecurrenceError::Invariant(format!("term {c}·{m:?} is not divisible by t"))),
            1 => terms.push((m.without(t), c.clone())),
            _ => {}
        }
    }
    Ok(MPoly::from_terms(s, terms).embed(&VariableSpace::z_only(s.n())?)?)
}

/// The limit of `Q_{n−1,l}(1+t, .., 1+t; z) / t` as `t → 0`.
///
/// The operator commutes with the substitution `λ_j − 1 ↦ t`, so the family is
/// generated directly with constant coefficients `t`, which keeps it small.
pub fn power_sum_limit(n: usize, l: usize) -> Result<MPoly, RecurrenceError> {
    check_range(n, l)?;
    let m = n - 1;
    let s = t_space(m)?;
    let t = MPoly::var(&s, &Var::Aux(T.into()))?;
    let mut q = MPoly::zero(&s);
    for i in 1..=m {
        q += &(&t * &MPoly::var(&s, &Var::Z(i))?);
    }
    let coeffs = vec![t; m];
    for _ in 1..l {
        q = q_step_with(&q, &coeffs)?;
    }
    leading_t_coefficient(&q)
}

/// Same limit, computed by substituting `λ_i = 1 + t` into the full `Q_{n−1,l}`.
pub fn power_sum_limit_by_substitution(n: usize, l: usize) -> Result<MPoly, RecurrenceError> {
    check_range(n, l)?;
    let m = n - 1;
    let s = t_space(m)?;
    let one_plus_t = &MPoly::one(&s) + &MPoly::var(&s, &Var::Aux(T.into()))?;
    let q = q_family(m, l)?.polys.pop().expect("l >= 1");
    let assignments: BTreeMap<Var, MPoly> = (1..=m).map(|i| (Var::Lambda(i), one_plus_t.clone())).collect();
    leading_t_coefficient(&q.substitute(&assignments, &s)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LinkBranch {
    /// `z_j := 0`
    ZZero,
    /// `λ_j := 1`
    LambdaOne,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LinkCheck {
    pub l: usize,
    pub j: usize,
    pub branch: LinkBranch,
    pub holds: bool,
}

/// Checks that killing `z_j` (or setting `λ_j = 1`) in `Q_{n,l}` gives `Q_{n−1,l}` in
/// the remaining variables, for every `j` and every `l` present in both families.
pub fn link_property(upper: &QFamily, lower: &QFamily) -> Result<Vec<LinkCheck>, RecurrenceError> {
    let n = upper.n;
    if n < 2 || lower.n + 1 != n {
        return Err(RecurrenceError::Argument(format!("families for n = {} and {} do not link", upper.n, lower.n)));
    }
    let dst = VariableSpace::lz(n - 1)?;
    let mut out = Vec::new();
    for (k, (q, target)) in upper.polys.iter().zip(&lower.polys).enumerate() {
        for j in 1..=n {
            let mut relabel = BTreeMap::new();
            for i in (1..=n).filter(|&i| i != j) {
                let to = if i < j { i } else { i - 1 };
                relabel.insert(Var::Lambda(i), MPoly::var(&dst, &Var::Lambda(to))?);
                relabel.insert(Var::Z(i), MPoly::var(&dst, &Var::Z(to))?);
            }
            for branch in [LinkBranch::ZZero, LinkBranch::LambdaOne] {
                let (set, value, must_vanish) = match branch {
                    LinkBranch::ZZero => (Var::Z(j), BigRational::from_integer(0.into()), Var::Lambda(j)),
                    LinkBranch::LambdaOne => (Var::Lambda(j), BigRational::one(), Var::Z(j)),
                };
                let reduced = q.specialize(&BTreeMap::from([(set.clone(), value)]))?;
                let holds = !reduced.uses(&must_vanish) && !reduced.uses(&set) && reduced.substitute(&relabel, &dst)? == *target;
                out.push(LinkCheck { l: k + 1, j, branch, holds });
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Monomial;

    #[test]
    fn small_power_sum_limits() {
        assert_eq!(power_sum_limit(3, 1).unwrap().to_string(), "z1 + z2");
        assert_eq!(power_sum_limit(3, 2).unwrap().to_string(), "-z1^2 - z2^2");
        assert_eq!(power_sum_limit(4, 3).unwrap().to_string(), "2*z1^3 + 2*z2^3 + 2*z3^3");
        assert!(power_sum_limit(3, 3).is_err());
    }

    #[test]
    fn both_routes_agree() {
        for n in 2..=5 {
            for l in 1..n {
                assert_eq!(power_sum_limit(n, l).unwrap(), power_sum_limit_by_substitution(n, l).unwrap());
            }
        }
    }

    #[test]
    fn division_by_t_drops_higher_powers() {
        let s = t_space(1).unwrap();
        let t = s.require(&Var::Aux(T.into())).unwrap();
        let z = s.require(&Var::Z(1)).unwrap();
        let p = MPoly::from_terms(
            &s,
            [
                (Monomial::from_pairs(vec![(z, 1), (t, 2)]), BigRational::one()),
                (Monomial::from_pairs(vec![(z, 1), (t, 1)]), BigRational::one()),
            ],
        );
        assert_eq!(leading_t_coefficient(&p).unwrap().to_string(), "z1");
    }
}
