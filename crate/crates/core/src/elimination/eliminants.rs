use std::collections::BTreeMap;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::One;

use crate::poly::{int, Factored, MPoly, Var, VariableSpace};
use crate::recurrence::{m_poly, q_family, q_step, r_small};

use super::resultant::sylvester_resultant;
use super::EliminationError;

/// An eliminant in `λ_1..λ_m` for the system `Q_{m,1} = .. = Q_{m,m} = 0`.
#[derive(Clone, Debug)]
pub struct Eliminant {
    pub m: usize,
    pub poly: MPoly,
    /// The eliminant split over the factors of the closed form, when that succeeds.
    pub factored: Option<Factored>,
    /// The closed form it is compared with.
    pub closed_form: Factored,
    /// Leading coefficients of the eliminated variable in each Sylvester step.
    pub leading_coefficients: Vec<MPoly>,
}

impl Eliminant {
    /// Same distinct factors as the closed form, up to units.
    pub fn matches_closed_form(&self) -> bool {
        self.factored.as_ref().is_some_and(|f| f.same_factors(&self.closed_form))
    }
}

fn lambda_space(m: usize) -> Result<Arc<VariableSpace>, EliminationError> {
    Ok(VariableSpace::lambda_only(m)?)
}

fn candidates(f: &Factored) -> Vec<MPoly> {
    f.factors().iter().map(|(p, _)| p.clone()).collect()
}

/// `m = 1`: the single equation `(λ_1 − 1) z_1 = 0`.
pub fn eliminant_n2() -> Result<Eliminant, EliminationError> {
    let q = q_family(1, 1)?.polys.remove(0);
    let lc = q.coefficients_in(&Var::Z(1))?.pop().expect("degree one");
    let poly = lc.embed(&lambda_space(1)?)?;
    let closed_form = r_small(1)?;
    Ok(Eliminant {
        m: 1,
        factored: Factored::trial_factor(&poly, &candidates(&closed_form)),
        poly,
        closed_form,
        leading_coefficients: vec![lc],
    })
}

/// `m = 2`: the Sylvester resultant in `z_1` on the chart `z_2 = 1`.
///
/// Both leading coefficients are multiples of `λ_1 − 1`, so the point `(1:0)` adds
/// nothing beyond the zero set of the resultant.
pub fn eliminant_n3() -> Result<Eliminant, EliminationError> {
    let fam = q_family(2, 2)?;
    let s = fam.polys[0].space().clone();
    let chart = BTreeMap::from([(Var::Z(2), MPoly::one(&s))]);
    let a = fam.polys[0].substitute(&chart, &s)?;
    let b = fam.polys[1].substitute(&chart, &s)?;
    let x = Var::Z(1);
    let lcs = vec![a.coefficients_in(&x)?.pop().expect("nonzero"), b.coefficients_in(&x)?.pop().expect("nonzero")];
    let poly = sylvester_resultant(&a, &b, &x)?.embed(&lambda_space(2)?)?;
    let closed_form = r_small(2)?;
    Ok(Eliminant {
        m: 2,
        factored: Factored::trial_factor(&poly, &candidates(&closed_form)),
        poly,
        closed_form,
        leading_coefficients: lcs,
    })
}

/// Intermediate results of the three-variable elimination.
#[derive(Clone, Debug)]
pub struct EliminantN4 {
    /// `Q_{3,2} + (z_1+z_2+z_3) Q_{3,1}`, in reversed coordinates.
    pub combined: MPoly,
    pub combined_matches: bool,
    /// The ideal of the modified system equals that of the original one.
    pub same_ideal: bool,
    /// The linear form `L(z_2, z_3) = α z_2 − β z_3` split off after the combination step.
    pub linear_factor: MPoly,
    pub alpha: MPoly,
    pub beta: MPoly,
    pub linear_factor_matches: bool,
    /// The reduced 2×2 linear system in `z_1, z_2`.
    pub reduced: [[MPoly; 2]; 2],
    pub determinant: MPoly,
    pub determinant_factored: Option<Factored>,
    /// The determinant equals `−(λ_3−1)(λ_1λ_3−1)(λ_1λ_2λ_3−1) M(λ_1,λ_2,λ_3)`.
    pub determinant_matches: bool,
    /// Determinant times the boundary eliminants, in the original coordinates.
    pub r_star: Factored,
    pub closed_form: Factored,
}

/// `λ_i ↔ λ_{4−i}`, `z_i ↔ z_{4−i}` on `L ∪ Z(3)`.
fn reverse(p: &MPoly) -> Result<MPoly, EliminationError> {
    let s = p.space();
    let mut assign = BTreeMap::new();
    for i in 1..=3 {
        assign.insert(Var::Lambda(i), MPoly::var(s, &Var::Lambda(4 - i))?);
        assign.insert(Var::Z(i), MPoly::var(s, &Var::Z(4 - i))?);
    }
    Ok(p.substitute(&assign, s)?)
}

fn reversed_step(p: &MPoly) -> Result<MPoly, EliminationError> {
    reverse(&q_step(3, &reverse(p)?)?)
}

/// The three-variable elimination: combine the system until a linear factor splits
/// off, solve along it, and reduce to a 2×2 linear system whose determinant, times
/// the eliminants of the coordinate lines, vanishes on the solvable locus.
///
/// The computation runs with indices reversed, which is where the combination
/// coefficients take their simplest form; `r_star` is mapped back.
pub fn eliminant_n4() -> Result<EliminantN4, EliminationError> {
    let fam = q_family(3, 3)?;
    let s = fam.polys[0].space().clone();
    let q: Vec<MPoly> = fam.polys.iter().map(reverse).collect::<Result<_, _>>()?;
    let v = |x: Var| MPoly::var(&s, &x);
    let (l1, l2, l3) = (v(Var::Lambda(1))?, v(Var::Lambda(2))?, v(Var::Lambda(3))?);
    let (z1, z2, z3) = (v(Var::Z(1))?, v(Var::Z(2))?, v(Var::Z(3))?);
    let one = MPoly::one(&s);
    let k = |c: i64| MPoly::integer(&s, c);

    let sum = &(&z1 + &z2) + &z3;
    let t1 = q[0].clone();
    let t2 = &q[1] + &(&sum * &q[0]);
    let expected = &(&(&(&(&l1 * &l2) - &one) * &(&z1 * &z2)) + &(&(&(&l1 * &l3) - &one) * &(&z1 * &z3))) + &(&(&(&l2 * &l3) - &one) * &(&z2 * &z3));
    let combined_matches = t2 == expected;

    let t3 = reversed_step(&t2)?;
    let same_ideal = t3 == &(&q[2] + &(&sum * &q[1])) + &(&reversed_step(&sum)? * &q[0]);

    let a = &(&(-&z1) + &(&(&l2 - &k(2)) * &z2)) + &(&(&(&l3 * &k(2)) - &k(3)) * &z3);
    let b = &(&(&l2 * &l3) - &one) * &(&z2 * &z3);
    let c = &(&t3 - &(&a * &t2)) + &(&b * &t1);
    let linear_factor = c.div_exact(&(&z1 * &z3))?;

    let point = |y2: i64, y3: i64| -> Result<MPoly, EliminationError> {
        let at = BTreeMap::from([(Var::Z(1), int(0)), (Var::Z(2), int(y2)), (Var::Z(3), int(y3))]);
        Ok(linear_factor.specialize(&at)?)
    };
    let alpha = point(1, 0)?;
    let beta = -point(0, 1)?;
    let l123 = &(&l1 * &l2) * &l3;
    let alpha_expected = &(&(&(&l123 + &(&l1 * &l2)) + &(&l1 * &l3)) - &l1) - &k(2);
    let beta_expected = &(&(&l1 * &l3) - &one) * &(&l3 - &one);
    let linear_factor_matches = alpha == alpha_expected && beta == beta_expected && linear_factor == &(&alpha * &z2) - &(&beta * &z3);

    // On L = 0 the direction (z_2 : z_3) is (β : α).
    let along = BTreeMap::from([(Var::Z(1), &beta * &z1), (Var::Z(2), &beta * &z2), (Var::Z(3), &alpha * &z2)]);
    let e1 = t1.substitute(&along, &s)?;
    let e2 = t2.substitute(&along, &s)?.div_exact(&(&beta * &z2))?;
    let coeff = |e: &MPoly, zi: usize| -> Result<MPoly, EliminationError> {
        let at = BTreeMap::from([(Var::Z(1), int(i64::from(zi == 1))), (Var::Z(2), int(i64::from(zi == 2)))]);
        Ok(e.specialize(&at)?)
    };
    let reduced = [[coeff(&e1, 1)?, coeff(&e1, 2)?], [coeff(&e2, 1)?, coeff(&e2, 2)?]];
    for row in &reduced {
        for c in row {
            debug_assert!(c.vars_used().iter().all(|v| matches!(v, Var::Lambda(_))));
        }
    }
    let ls = lambda_space(3)?;
    let determinant = (&(&reduced[0][0] * &reduced[1][1]) - &(&reduced[0][1] * &reduced[1][0])).embed(&ls)?;

    let lam = |i: usize| MPoly::var(&ls, &Var::Lambda(i));
    let lone = MPoly::one(&ls);
    let (m1, m2, m3) = (lam(1)?, lam(2)?, lam(3)?);
    let det_factors = vec![&m3 - &lone, &(&m1 * &m3) - &lone, &(&(&m1 * &m2) * &m3) - &lone, m_poly(&ls, 1, 2, 3)?];
    let determinant_factored = Factored::trial_factor(&determinant, &det_factors);
    let determinant_matches = determinant_factored
        .as_ref()
        .is_some_and(|f| f.unit() == &-BigRational::one() && f.factors().iter().all(|(_, e)| *e == 1) && f.factors().len() == 4);

    let boundary_base = eliminant_n3()?;
    let mut r_star = determinant_factored.clone().unwrap_or_else(|| Factored::from_poly(&determinant));
    for (i, j) in [(1, 2), (1, 3), (2, 3)] {
        let relabel = BTreeMap::from([(Var::Lambda(1), lam(i)?), (Var::Lambda(2), lam(j)?)]);
        let base = boundary_base.factored.clone().unwrap_or_else(|| Factored::from_poly(&boundary_base.poly));
        r_star = r_star.mul(&base.map(|p| p.substitute(&relabel, &ls), &ls)?)?;
    }
    let rev_l: BTreeMap<Var, MPoly> = (1..=3).map(|i| Ok((Var::Lambda(i), lam(4 - i)?))).collect::<Result<_, EliminationError>>()?;
    let r_star = r_star.map(|p| p.substitute(&rev_l, &ls), &ls)?;

    Ok(EliminantN4 {
        combined: t2,
        combined_matches,
        same_ideal,
        linear_factor,
        alpha,
        beta,
        linear_factor_matches,
        reduced,
        determinant,
        determinant_factored,
        determinant_matches,
        r_star,
        closed_form: r_small(3)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_variable_eliminant() {
        let e = eliminant_n2().unwrap();
        assert_eq!(e.poly.to_string(), "l1 - 1");
        assert!(e.matches_closed_form());
    }

    #[test]
    fn two_variable_eliminant() {
        let e = eliminant_n3().unwrap();
        let f = e.factored.as_ref().unwrap();
        assert_eq!(f.unit(), &-BigRational::one());
        assert!(f.factors().iter().all(|(_, k)| *k == 1));
        assert!(e.matches_closed_form());
    }

    #[test]
    fn three_variable_pipeline() {
        let e = eliminant_n4().unwrap();
        assert!(e.combined_matches);
        assert!(e.same_ideal);
        assert!(e.linear_factor_matches, "L = {}", e.linear_factor);
        assert!(e.determinant_matches, "det = {}", e.determinant);
        assert!(e.r_star.same_factors(&e.closed_form), "{} vs {}", e.r_star, e.closed_form);
    }
}
