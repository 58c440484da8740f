//! The polynomial families `P_{n,l}` (symbolic μ) and `Q_{n,l}` (specialized),
//! and the named polynomials built from them.

mod limits;
mod named;

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::poly::{Block, BlockKind, MPoly, Monomial, PolyError, Var, VariableSpace};

pub use limits::{link_property, power_sum_limit, power_sum_limit_by_substitution, power_sum_target, LinkBranch, LinkCheck};
pub use named::{big_lambda, l_general, l_small, m_poly, r_small};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RecurrenceError {
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

fn check_n(n: usize) -> Result<(), RecurrenceError> {
    if n == 0 {
        return Err(RecurrenceError::Argument("n must be at least 1".into()));
    }
    Ok(())
}

/// `P_{n,1} = Σ μ_{i1} z_i`, over `Z ∪ MU(1)`.
pub fn p_initial(n: usize) -> Result<MPoly, RecurrenceError> {
    check_n(n)?;
    let s = VariableSpace::z_mu(n, 1)?;
    let mut terms = Vec::with_capacity(n);
    for i in 1..=n {
        let m = Monomial::from_pairs(vec![(s.require(&Var::Z(i))?, 1), (s.require(&Var::Mu(i, 1))?, 1)]);
        terms.push((m, BigRational::one()));
    }
    Ok(MPoly::from_terms(&s, terms))
}

/// One step of the μ-recurrence:
/// `Σ_{i,q} (q μ_iq + μ_{i,q+1}) z_i ∂P/∂μ_iq + Σ_i (−z_i + Σ_{j<i} μ_j1 z_j) z_i ∂P/∂z_i`.
///
/// The result lives in a space whose μ-block is one order larger than needed by `p`.
pub fn p_step(n: usize, p: &MPoly) -> Result<MPoly, RecurrenceError> {
    check_n(n)?;
    let src = p.space();
    if src.n() != n || !src.has_block(BlockKind::Z) || !src.has_block(BlockKind::Mu) {
        return Err(RecurrenceError::Argument(format!("expected a Z ∪ MU polynomial for n = {n}")));
    }
    let q_used = p
        .vars_used()
        .iter()
        .filter_map(|v| if let Var::Mu(_, q) = v { Some(*q) } else { None })
        .max()
        .unwrap_or(0);
    let q_max = src.q_max().unwrap_or(1).max(q_used + 1);
    let dst = src.with_block(Block::Mu { q_max })?;
    let p = p.embed(&dst)?;

    let z: Vec<usize> = (1..=n).map(|i| dst.require(&Var::Z(i))).collect::<Result<_, _>>()?;
    let mu1: Vec<usize> = (1..=n).map(|i| dst.require(&Var::Mu(i, 1))).collect::<Result<_, _>>()?;
    let mut acc: HashMap<Monomial, BigRational> = HashMap::new();
    let mut add = |m: Monomial, c: BigRational| *acc.entry(m).or_insert_with(BigRational::zero) += c;

    for (m, c) in p.terms() {
        for &(idx, e) in m.pairs() {
            let ce = c * BigRational::from_integer(e.into());
            match dst.var(idx) {
                Var::Mu(i, q) => {
                    let zi = Monomial::var(z[i - 1], 1);
                    // q μ_iq z_i ∂/∂μ_iq keeps the monomial.
                    add(m.mul(&zi), &ce * BigRational::from_integer((*q).into()));
                    // μ_{i,q+1} z_i ∂/∂μ_iq trades one μ_iq for μ_{i,q+1}.
                    let next = dst.require(&Var::Mu(*i, q + 1))?;
                    let (_, lowered) = m.differentiate(idx).expect("exponent is positive");
                    add(lowered.mul(&Monomial::from_pairs(vec![(next, 1), (z[i - 1], 1)])), ce);
                }
                Var::Z(i) => {
                    add(m.mul(&Monomial::var(z[i - 1], 1)), -ce.clone());
                    for j in 1..*i {
                        add(m.mul(&Monomial::from_pairs(vec![(mu1[j - 1], 1), (z[j - 1], 1)])), ce.clone());
                    }
                }
                _ => {}
            }
        }
    }
    Ok(MPoly::from_terms(&dst, acc))
}

/// `μ_iq ↦ (−1)^{q−1} (q−1)! (λ_i − 1)`, from `Z ∪ MU` to `L ∪ Z`.
pub fn mu_specialize(p: &MPoly) -> Result<MPoly, RecurrenceError> {
    let src = p.space();
    let n = src.n();
    let dst = VariableSpace::lz(n)?;
    let mut assignments = BTreeMap::new();
    for v in p.vars_used() {
        if let Var::Mu(i, q) = v {
            let li = &MPoly::var(&dst, &Var::Lambda(i))? - &MPoly::one(&dst);
            assignments.insert(Var::Mu(i, q), li.scale(&mu_limit_coefficient(q)));
        }
    }
    Ok(p.substitute(&assignments, &dst)?)
}

/// `(−1)^{q−1} (q−1)!`
pub fn mu_limit_coefficient(q: usize) -> BigRational {
    let f: BigInt = (1..q).map(BigInt::from).product();
    let f = BigRational::from_integer(f);
    if q.is_multiple_of(2) {
        -f
    } else {
        f
    }
}

/// `Q_{n,1} = Σ (λ_i − 1) z_i`, over `L ∪ Z`.
pub fn q_initial(n: usize) -> Result<MPoly, RecurrenceError> {
    check_n(n)?;
    let s = VariableSpace::lz(n)?;
    let mut acc = MPoly::zero(&s);
    for i in 1..=n {
        let li = &MPoly::var(&s, &Var::Lambda(i))? - &MPoly::one(&s);
        acc += &(&li * &MPoly::var(&s, &Var::Z(i))?);
    }
    Ok(acc)
}

/// The coefficients `λ_j − 1` used by [`q_step`], in the space of `q`.
pub fn q_step_coefficients(space: &Arc<VariableSpace>) -> Result<Vec<MPoly>, RecurrenceError> {
    (1..=space.n()).map(|j| Ok(&MPoly::var(space, &Var::Lambda(j))? - &MPoly::one(space))).collect()
}

/// `Σ_i (−z_i + Σ_{j<i} (λ_j − 1) z_j) z_i ∂Q/∂z_i`.
pub fn q_step(n: usize, q: &MPoly) -> Result<MPoly, RecurrenceError> {
    check_n(n)?;
    if q.space().n() != n {
        return Err(RecurrenceError::Argument(format!("polynomial has n = {}, expected {n}", q.space().n())));
    }
    let coeffs = q_step_coefficients(q.space())?;
    q_step_with(q, &coeffs)
}

/// The operator of [`q_step`] with `λ_j − 1` replaced by arbitrary `coeffs[j−1]`.
pub fn q_step_with(q: &MPoly, coeffs: &[MPoly]) -> Result<MPoly, RecurrenceError> {
    let s = q.space();
    let n = s.n();
    if coeffs.len() != n {
        return Err(RecurrenceError::Argument(format!("need {n} coefficients, got {}", coeffs.len())));
    }
    let z: Vec<usize> = (1..=n).map(|i| s.require(&Var::Z(i))).collect::<Result<_, _>>()?;
    let mut acc: HashMap<Monomial, BigRational> = HashMap::new();
    for (m, c) in q.terms() {
        for &(idx, e) in m.pairs() {
            let Var::Z(i) = s.var(idx) else { continue };
            let ce = c * BigRational::from_integer(e.into());
            *acc.entry(m.mul(&Monomial::var(z[i - 1], 1))).or_insert_with(BigRational::zero) -= &ce;
            for j in 1..*i {
                let base = m.mul(&Monomial::var(z[j - 1], 1));
                for (cm, cc) in coeffs[j - 1].terms() {
                    *acc.entry(base.mul(cm)).or_insert_with(BigRational::zero) += &ce * cc;
                }
            }
        }
    }
    Ok(MPoly::from_terms(s, acc))
}

/// `P_{n,1..=l_max}`; member `l` lives over `Z ∪ MU(l)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PFamily {
    pub n: usize,
    pub polys: Vec<MPoly>,
}

/// `Q_{n,1..=l_max}` over `L ∪ Z`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QFamily {
    pub n: usize,
    pub polys: Vec<MPoly>,
}

impl PFamily {
    /// Member `l`, 1-based.
    pub fn get(&self, l: usize) -> Option<&MPoly> {
        l.checked_sub(1).and_then(|k| self.polys.get(k))
    }
}

impl QFamily {
    /// Member `l`, 1-based.
    pub fn get(&self, l: usize) -> Option<&MPoly> {
        l.checked_sub(1).and_then(|k| self.polys.get(k))
    }
}

fn check_l(l_max: usize) -> Result<(), RecurrenceError> {
    if l_max == 0 {
        return Err(RecurrenceError::Argument("l must be at least 1".into()));
    }
    Ok(())
}

pub fn p_family(n: usize, l_max: usize) -> Result<PFamily, RecurrenceError> {
    check_l(l_max)?;
    let mut polys = vec![p_initial(n)?];
    while polys.len() < l_max {
        let next = p_step(n, polys.last().expect("nonempty"))?;
        polys.push(next);
    }
    Ok(PFamily { n, polys })
}

pub fn q_family(n: usize, l_max: usize) -> Result<QFamily, RecurrenceError> {
    check_l(l_max)?;
    let mut polys = vec![q_initial(n)?];
    while polys.len() < l_max {
        let next = q_step(n, polys.last().expect("nonempty"))?;
        polys.push(next);
    }
    Ok(QFamily { n, polys })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_p_step_for_one_saddle() {
        // (1·μ11 + μ12) z1 · z1  +  (−z1) z1 · μ11
        let p2 = p_step(1, &p_initial(1).unwrap()).unwrap();
        assert_eq!(p2.to_string(), "z1^2*mu1_2");
    }

    #[test]
    fn specialization_constants() {
        assert_eq!(mu_limit_coefficient(1), crate::poly::int(1));
        assert_eq!(mu_limit_coefficient(2), crate::poly::int(-1));
        assert_eq!(mu_limit_coefficient(3), crate::poly::int(2));
        assert_eq!(mu_limit_coefficient(5), crate::poly::int(24));
    }

    #[test]
    fn q22_from_both_routes() {
        let q = q_family(2, 2).unwrap();
        let expect = "l1*l2*z1*z2 - l1*z1^2 - l1*z1*z2 - l2*z1*z2 - l2*z2^2 + z1^2 + z1*z2 + z2^2";
        assert_eq!(q.polys[1].to_string(), expect);
        let p = p_family(2, 2).unwrap();
        assert_eq!(mu_specialize(&p.polys[1]).unwrap(), q.polys[1]);
    }

    #[test]
    fn q_step_of_zero() {
        let s = VariableSpace::lz(3).unwrap();
        assert!(q_step(3, &MPoly::zero(&s)).unwrap().is_zero());
    }

    #[test]
    fn rejects_zero_sizes() {
        assert!(p_initial(0).is_err());
        assert!(q_family(2, 0).is_err());
    }
}
