use std::collections::BTreeMap;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::One;

use super::RecurrenceError;
use crate::poly::{Block, Factored, MPoly, Var, VariableSpace};

fn lambda(space: &Arc<VariableSpace>, i: usize) -> Result<MPoly, RecurrenceError> {
    Ok(MPoly::var(space, &Var::Lambda(i))?)
}

/// `λ^I − 1` for the index set `I`.
fn product_minus_one(space: &Arc<VariableSpace>, idx: &[usize]) -> Result<MPoly, RecurrenceError> {
    let mut p = MPoly::one(space);
    for &i in idx {
        p = &p * &lambda(space, i)?;
    }
    Ok(&p - &MPoly::one(space))
}

/// `Λ_n = Π (λ^I − 1)` over the nonempty subsets `I ⊆ {1..n}`.
pub fn big_lambda(n: usize) -> Result<Factored, RecurrenceError> {
    if n == 0 || n > 16 {
        return Err(RecurrenceError::Argument(format!("n = {n} out of range 1..=16")));
    }
    let s = VariableSpace::lambda_only(n)?;
    let mut subsets: Vec<Vec<usize>> = (1u32..(1 << n)).map(|mask| (1..=n).filter(|i| mask & (1 << (i - 1)) != 0).collect()).collect();
    subsets.sort_by_key(|v| (v.len(), v.clone()));
    let mut f = Factored::new(&s, BigRational::one(), Vec::new())?;
    for idx in subsets {
        f.push(product_minus_one(&s, &idx)?, 1)?;
    }
    Ok(f)
}

/// `M(λ_i, λ_j, λ_k) = 4(λ_i λ_j λ_k − 1) − (λ_i − 1)(λ_j − 1)(λ_k − 1)` in `space`.
pub fn m_poly(space: &Arc<VariableSpace>, i: usize, j: usize, k: usize) -> Result<MPoly, RecurrenceError> {
    let one = MPoly::one(space);
    let triple = product_minus_one(space, &[i, j, k])?;
    let cube = &(&(&lambda(space, i)? - &one) * &(&lambda(space, j)? - &one)) * &(&lambda(space, k)? - &one);
    Ok(&triple.scale(&BigRational::from_integer(4.into())) - &cube)
}

/// Closed forms of the eliminants `ℛ_1 = λ_1 − 1`, `ℛ_2 = Λ_2`, `ℛ_3 = Λ_3 · M(λ_1, λ_2, λ_3)`.
pub fn r_small(m: usize) -> Result<Factored, RecurrenceError> {
    match m {
        1 | 2 => big_lambda(m),
        3 => {
            let mut f = big_lambda(3)?;
            let s = f.space().clone();
            f.push(m_poly(&s, 1, 2, 3)?, 1)?;
            Ok(f)
        }
        0 => Err(RecurrenceError::Argument("m must be at least 1".into())),
        _ => Err(RecurrenceError::Unsupported(format!("no closed form for m = {m}"))),
    }
}

/// The closed-form genericity polynomial for `n ≤ 4`.
pub fn l_small(n: usize) -> Result<Factored, RecurrenceError> {
    match n {
        1..=3 => big_lambda(n),
        4 => {
            let mut f = big_lambda(4)?;
            let s = f.space().clone();
            for (i, j, k) in [(1, 2, 3), (1, 2, 4), (1, 3, 4), (2, 3, 4)] {
                f.push(m_poly(&s, i, j, k)?, 1)?;
            }
            Ok(f)
        }
        0 => Err(RecurrenceError::Argument("n must be at least 1".into())),
        _ => Err(RecurrenceError::Unsupported(format!("no closed form for n = {n}"))),
    }
}

/// `(λ_1 ⋯ λ_n − 1) · Π_j R(λ_1, .., λ̂_j, .., λ_n)` for an eliminant `R` in `n − 1` variables.
pub fn l_general(n: usize, resultant: &Factored) -> Result<Factored, RecurrenceError> {
    if n < 2 {
        return Err(RecurrenceError::Argument("n must be at least 2".into()));
    }
    let src = resultant.space();
    if src.n() != n - 1 || src.blocks() != [Block::Lambda] {
        return Err(RecurrenceError::Argument(format!("expected an eliminant in λ_1..λ_{}", n - 1)));
    }
    let dst = VariableSpace::lambda_only(n)?;
    let all: Vec<usize> = (1..=n).collect();
    let mut out = Factored::new(&dst, BigRational::one(), vec![(product_minus_one(&dst, &all)?, 1)])?;
    for j in 1..=n {
        let mut relabel = BTreeMap::new();
        for k in 1..n {
            let target = if k < j { k } else { k + 1 };
            relabel.insert(Var::Lambda(k), lambda(&dst, target)?);
        }
        let part = resultant.map(|p| p.substitute(&relabel, &dst), &dst)?;
        out = out.mul(&part)?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::int;

    #[test]
    fn lambda_two() {
        let f = big_lambda(2).unwrap();
        assert_eq!(f.to_string(), "(l1 - 1)*(l2 - 1)*(l1*l2 - 1)");
        assert_eq!(f.factors().len(), 3);
        assert_eq!(big_lambda(4).unwrap().factors().len(), 15);
    }

    #[test]
    fn m_vanishes_at_ones() {
        let s = VariableSpace::lambda_only(3).unwrap();
        let m = m_poly(&s, 1, 2, 3).unwrap();
        let at: BTreeMap<Var, BigRational> = (1..=3).map(|i| (Var::Lambda(i), int(1))).collect();
        assert_eq!(m.eval(&at).unwrap(), int(0));
    }

    #[test]
    fn general_two_is_lambda_two() {
        let r1 = r_small(1).unwrap();
        assert_eq!(l_general(2, &r1).unwrap().expand(), big_lambda(2).unwrap().expand());
    }

    #[test]
    fn refuses_large_n() {
        assert!(matches!(l_small(5), Err(RecurrenceError::Unsupported(_))));
        assert!(l_general(3, &r_small(1).unwrap()).is_err());
    }
}
