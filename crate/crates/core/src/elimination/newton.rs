use num_rational::BigRational;
use serde::Serialize;

use crate::poly::{elementary_symmetric, power_sum, Block, MPoly, UniPoly, Var, VariableSpace};

use super::EliminationError;

/// One Newton identity `l σ_l = Σ_{i=1}^{l} (−1)^{i−1} σ_{l−i} p_i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NewtonStep {
    pub l: usize,
    pub identity_holds: bool,
    /// `σ_l` lies in the ideal of `p_1..p_l` with these cofactors of `p_1..p_l`.
    pub cofactors: Vec<String>,
}

/// Why `p_1 = .. = p_m = 0` forces `w = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NewtonDerivation {
    pub m: usize,
    pub steps: Vec<NewtonStep>,
    /// `Π (w − w_k) = Σ (−1)^l σ_l w^{m−l}` holds as a polynomial identity.
    pub vieta_holds: bool,
    /// With every `σ_l = 0` the product collapses to `w^m`.
    pub collapses_to_power: bool,
    /// The only root of the collapsed polynomial is `0`.
    pub only_zero_root: bool,
    pub no_common_zero: bool,
}

/// Derives, symbolically, that the power sums `p_1..p_m` in `m` variables have no
/// common nontrivial zero.
pub fn newton_no_common_zero(m: usize) -> Result<NewtonDerivation, EliminationError> {
    if m == 0 {
        return Err(EliminationError::Argument("m must be at least 1".into()));
    }
    let s = VariableSpace::new(m, vec![Block::Z, Block::Aux { name: "w".into() }])?;
    let sigma: Vec<MPoly> = (0..=m).map(|l| elementary_symmetric(&s, l)).collect::<Result<_, _>>()?;
    let p: Vec<MPoly> = (1..=m).map(|l| power_sum(&s, l as u32)).collect::<Result<_, _>>()?;

    let mut steps = Vec::with_capacity(m);
    // Each σ_l is written through p_1..p_l with cofactors that only involve
    // earlier σ's, so vanishing power sums force every σ_l to vanish.
    for l in 1..=m {
        let inv_l = BigRational::new(1.into(), (l as i64).into());
        let mut combo = MPoly::zero(&s);
        let mut cofactors = Vec::with_capacity(l);
        for i in 1..=l {
            let sign = if i % 2 == 1 { inv_l.clone() } else { -inv_l.clone() };
            let cof = sigma[l - i].scale(&sign);
            combo += &(&cof * &p[i - 1]);
            cofactors.push(cof.to_string());
        }
        steps.push(NewtonStep {
            l,
            identity_holds: combo == sigma[l],
            cofactors,
        });
    }

    let w = MPoly::var(&s, &Var::Aux("w".into()))?;
    let mut product = MPoly::one(&s);
    for k in 1..=m {
        product = &product * &(&w - &MPoly::var(&s, &Var::Z(k))?);
    }
    let mut expansion = MPoly::zero(&s);
    let mut collapsed = MPoly::zero(&s);
    for (l, sig) in sigma.iter().enumerate() {
        let term = &sig.scale(&BigRational::from_integer(if l % 2 == 0 { 1 } else { -1 }.into())) * &w.pow((m - l) as u32);
        expansion += &term;
        if l == 0 {
            collapsed += &term;
        }
    }
    let vieta_holds = product == expansion;
    let power = w.pow(m as u32);
    let collapses_to_power = collapsed == power;
    let uni = UniPoly::from_mpoly(&collapsed, &Var::Aux("w".into()))?;
    let only_zero_root = uni.squarefree_part() == UniPoly::linear_root(BigRational::from_integer(0.into()));

    let no_common_zero = steps.iter().all(|st| st.identity_holds) && vieta_holds && collapses_to_power && only_zero_root;
    Ok(NewtonDerivation {
        m,
        steps,
        vieta_holds,
        collapses_to_power,
        only_zero_root,
        no_common_zero,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_m() {
        for m in 1..=4 {
            let d = newton_no_common_zero(m).unwrap();
            assert!(d.no_common_zero, "m = {m}: {d:?}");
            assert_eq!(d.steps.len(), m);
        }
        assert_eq!(newton_no_common_zero(1).unwrap().steps[0].cofactors, ["1"]);
    }
}
