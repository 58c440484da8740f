use std::sync::Arc;

use num_rational::BigRational;
use num_traits::One;

use super::{MPoly, Monomial, PolyError, Var, VariableSpace};

/// `z_1^l + ... + z_m^l` where `m` is the space's `n`.
pub fn power_sum(space: &Arc<VariableSpace>, l: u32) -> Result<MPoly, PolyError> {
    let mut terms = Vec::new();
    for i in 1..=space.n() {
        terms.push((Monomial::var(space.require(&Var::Z(i))?, l), BigRational::one()));
    }
    Ok(MPoly::from_terms(space, terms))
}

/// The elementary symmetric polynomial of degree `l` in `z_1..z_m`.
pub fn elementary_symmetric(space: &Arc<VariableSpace>, l: usize) -> Result<MPoly, PolyError> {
    let m = space.n();
    let idx: Vec<usize> = (1..=m).map(|i| space.require(&Var::Z(i))).collect::<Result<_, _>>()?;
    // e_k(z_1..z_j) by the usual table, one column at a time.
    let mut e = vec![MPoly::zero(space); l + 1];
    e[0] = MPoly::one(space);
    for &ix in &idx {
        let z = MPoly::monomial(space, Monomial::var(ix, 1), BigRational::one());
        for k in (1..=l).rev() {
            let t = &e[k - 1] * &z;
            e[k] += &t;
        }
    }
    Ok(e.swap_remove(l))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cases() {
        let s = VariableSpace::z_only(3).unwrap();
        assert_eq!(elementary_symmetric(&s, 2).unwrap().to_string(), "z1*z2 + z1*z3 + z2*z3");
        assert_eq!(elementary_symmetric(&s, 4).unwrap(), MPoly::zero(&s));
        assert_eq!(elementary_symmetric(&s, 0).unwrap(), MPoly::one(&s));
        assert_eq!(power_sum(&s, 2).unwrap().to_string(), "z1^2 + z2^2 + z3^2");
    }
}
