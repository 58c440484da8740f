use std::collections::BTreeMap;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::Zero;

use crate::poly::{BlockKind, MPoly, UniPoly, Var, VariableSpace};
use crate::recurrence::q_family;

use super::resultant::sylvester_resultant;
use super::EliminationError;

/// Polynomials homogeneous in the `z` block, optionally with fixed λ values.
#[derive(Clone, Debug)]
pub struct HomSystem {
    polys: Vec<MPoly>,
    degrees: Vec<u32>,
    lambda: Option<BTreeMap<Var, BigRational>>,
}

impl HomSystem {
    pub fn new(polys: Vec<MPoly>) -> Result<Self, EliminationError> {
        let first = polys.first().ok_or_else(|| EliminationError::Argument("empty system".into()))?;
        let space = first.space().clone();
        if !space.has_block(BlockKind::Z) {
            return Err(EliminationError::Argument("system has no z variables".into()));
        }
        let mut degrees = Vec::with_capacity(polys.len());
        for p in &polys {
            if *p.space() != space {
                return Err(EliminationError::Argument("members live in different spaces".into()));
            }
            let d = if p.is_zero() { Some(0) } else { p.homogeneous_degree_in(BlockKind::Z) };
            degrees.push(d.ok_or_else(|| EliminationError::Argument(format!("{p} is not homogeneous in z")))?);
        }
        Ok(HomSystem { polys, degrees, lambda: None })
    }

    /// `Q_{m,l} = 0` for `l = 1..m`.
    pub fn q_system(m: usize) -> Result<Self, EliminationError> {
        Self::new(q_family(m, m)?.polys)
    }

    pub fn with_lambda(mut self, values: BTreeMap<Var, BigRational>) -> Self {
        self.lambda = Some(values);
        self
    }

    pub fn polys(&self) -> &[MPoly] {
        &self.polys
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn z_count(&self) -> usize {
        self.polys[0].space().n()
    }

    /// The members with λ fixed, moved into the pure `z` space.
    pub fn numeric(&self) -> Result<Vec<MPoly>, EliminationError> {
        let zs = VariableSpace::z_only(self.z_count())?;
        let empty = BTreeMap::new();
        let values = self.lambda.as_ref().unwrap_or(&empty);
        self.polys
            .iter()
            .map(|p| {
                let fixed = p.specialize(
                    &values
                        .iter()
                        .filter(|(v, _)| p.space().index_of(v).is_some())
                        .map(|(v, c)| (v.clone(), c.clone()))
                        .collect(),
                )?;
                if let Some(v) = fixed.vars_used().into_iter().find(|v| v.kind() != BlockKind::Z) {
                    return Err(EliminationError::Argument(format!("no value given for {v}")));
                }
                Ok(fixed.embed(&zs)?)
            })
            .collect()
    }
}

/// How [`has_nontrivial_zero_with`] attacks the system.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Strategy {
    /// Eliminate a variable through any linear member first.
    #[default]
    Auto,
    /// Never use linear members specially; work chart by chart.
    Charts,
}

/// Whether the numeric system has a common zero in complex projective space.
pub fn has_nontrivial_zero(sys: &HomSystem) -> Result<bool, EliminationError> {
    has_nontrivial_zero_with(sys, Strategy::Auto)
}

pub fn has_nontrivial_zero_with(sys: &HomSystem, strategy: Strategy) -> Result<bool, EliminationError> {
    let m = sys.z_count();
    if !(1..=3).contains(&m) {
        return Err(EliminationError::Unsupported(format!("{m} homogeneous variables (supported: 1 to 3)")));
    }
    projective(sys.numeric()?, strategy)
}

fn z(space: &Arc<VariableSpace>, i: usize) -> Result<MPoly, EliminationError> {
    Ok(MPoly::var(space, &Var::Z(i))?)
}

/// Common projective zero of homogeneous polynomials in `Z(m)`.
fn projective(polys: Vec<MPoly>, strategy: Strategy) -> Result<bool, EliminationError> {
    let polys: Vec<MPoly> = polys.into_iter().filter(|p| !p.is_zero()).collect();
    let Some(first) = polys.first() else { return Ok(true) };
    let space = first.space().clone();
    let m = space.n();
    if polys.iter().any(|p| p.total_degree() == Some(0)) {
        return Ok(false);
    }
    if m == 1 {
        return Ok(false);
    }
    if strategy == Strategy::Auto {
        if let Some(lin) = polys.iter().find(|p| p.total_degree() == Some(1)) {
            let reduced = eliminate_linear(lin, &polys)?;
            return projective(reduced, strategy);
        }
    }
    match m {
        2 => binary(&polys),
        3 => ternary(&polys),
        _ => Err(EliminationError::Unsupported(format!("{m} homogeneous variables"))),
    }
}

/// Solves the linear form for its last variable and substitutes into the rest.
fn eliminate_linear(lin: &MPoly, polys: &[MPoly]) -> Result<Vec<MPoly>, EliminationError> {
    let space = lin.space();
    let m = space.n();
    let coeff = |i: usize| -> Result<BigRational, EliminationError> { Ok(lin.coefficient(&crate::poly::Monomial::var(space.require(&Var::Z(i))?, 1))) };
    let k = (1..=m)
        .rev()
        .find(|&i| !coeff(i).map(|c| c.is_zero()).unwrap_or(true))
        .expect("linear form has a variable");
    let ak = coeff(k)?;
    let dst = VariableSpace::z_only(m - 1)?;
    let mut assign = BTreeMap::new();
    let mut image = MPoly::zero(&dst);
    for i in (1..=m).filter(|&i| i != k) {
        let to = if i < k { i } else { i - 1 };
        let zi = z(&dst, to)?;
        image.add_scaled(&zi, &(-coeff(i)? / &ak))?;
        assign.insert(Var::Z(i), zi);
    }
    assign.insert(Var::Z(k), image);
    polys.iter().filter(|p| *p != lin).map(|p| Ok(p.substitute(&assign, &dst)?)).collect()
}

/// Two homogeneous variables: the point `(1:0)` and the chart `z_2 = 1`.
fn binary(polys: &[MPoly]) -> Result<bool, EliminationError> {
    let space = polys[0].space();
    let at_infinity = BTreeMap::from([(Var::Z(1), BigRational::from_integer(1.into())), (Var::Z(2), BigRational::zero())]);
    let mut all_vanish = true;
    for p in polys {
        if !p.eval(&at_infinity)?.is_zero() {
            all_vanish = false;
            break;
        }
    }
    if all_vanish {
        return Ok(true);
    }
    let chart = BTreeMap::from([(Var::Z(2), MPoly::one(space))]);
    let mut g = UniPoly::zero();
    for p in polys {
        g = g.gcd(&UniPoly::from_mpoly(&p.substitute(&chart, space)?, &Var::Z(1))?);
    }
    Ok(g.degree().unwrap_or(0) >= 1)
}

/// Three homogeneous variables: the line `z_3 = 0` and the chart `z_3 = 1`.
fn ternary(polys: &[MPoly]) -> Result<bool, EliminationError> {
    let space = polys[0].space();
    let plane = VariableSpace::z_only(2)?;
    let mut at_line = Vec::with_capacity(polys.len());
    let mut on_chart = Vec::with_capacity(polys.len());
    let line = BTreeMap::from([(Var::Z(3), MPoly::zero(&plane))]);
    let chart = BTreeMap::from([(Var::Z(3), MPoly::one(&plane))]);
    for p in polys {
        at_line.push(p.substitute(&line, &plane)?);
        on_chart.push(p.substitute(&chart, &plane)?);
    }
    debug_assert_eq!(space.n(), 3);
    if projective(at_line, Strategy::Charts)? {
        return Ok(true);
    }
    affine_plane(on_chart)
}

fn as_univariate_in_z2(p: &MPoly) -> Result<UniPoly, EliminationError> {
    Ok(UniPoly::from_mpoly(p, &Var::Z(2))?)
}

/// Coefficients in `z_1`, each a polynomial in `z_2`.
fn split_in_z1(p: &MPoly) -> Result<Vec<UniPoly>, EliminationError> {
    p.coefficients_in(&Var::Z(1))?.iter().map(as_univariate_in_z2).collect()
}

/// Common zero in the affine plane of arbitrary polynomials in `z_1, z_2`.
fn affine_plane(polys: Vec<MPoly>) -> Result<bool, EliminationError> {
    let polys: Vec<MPoly> = polys.into_iter().filter(|p| !p.is_zero()).collect();
    if polys.is_empty() {
        return Ok(true);
    }
    if polys.iter().any(|p| p.total_degree() == Some(0)) {
        return Ok(false);
    }
    let x = Var::Z(1);
    let (with_x, without_x): (Vec<&MPoly>, Vec<&MPoly>) = polys.iter().partition(|p| p.uses(&x));
    let mut hu: Option<UniPoly> = None;
    for p in &without_x {
        let u = as_univariate_in_z2(p)?;
        hu = Some(match hu {
            None => u.monic(),
            Some(h) => h.gcd(&u),
        });
    }
    if let Some(h) = &hu {
        if h.degree() == Some(0) {
            return Ok(false);
        }
    }
    if with_x.is_empty() {
        return Ok(hu.and_then(|h| h.degree()).unwrap_or(0) >= 1);
    }
    let (pivot_at, pivot) = with_x.iter().enumerate().min_by_key(|(_, p)| (p.total_degree(), p.len())).expect("nonempty");
    let others: Vec<&MPoly> = polys.iter().filter(|p| !std::ptr::eq(*p, with_x[pivot_at])).collect();
    if others.is_empty() {
        return Ok(true);
    }
    // A generic combination of the others meets the pivot in finitely many z_2 values
    // unless everything shares a factor involving z_1.
    let tries = pivot.degree_in(&x) as usize * others.len().saturating_sub(1) + 1;
    let mut h = None;
    for c in 0..tries {
        let cr = BigRational::from_integer((c as i64 + 1).into());
        let mut comb = MPoly::zero(pivot.space());
        let mut w = BigRational::from_integer(1.into());
        for o in &others {
            comb.add_scaled(o, &w)?;
            w *= &cr;
        }
        if comb.is_zero() {
            continue;
        }
        let r = sylvester_resultant(pivot, &comb, &x)?;
        if !r.is_zero() {
            h = Some(as_univariate_in_z2(&r)?.squarefree_part());
            break;
        }
    }
    let Some(mut h) = h else { return Ok(true) };
    if let Some(u) = hu {
        h = h.gcd(&u);
    }
    if h.degree().unwrap_or(0) == 0 {
        return Ok(false);
    }
    let split: Vec<Vec<UniPoly>> = polys.iter().map(split_in_z1).collect::<Result<_, _>>()?;
    Ok(common_root_over(h, &split))
}

/// Whether, for some root `b` of the squarefree `h`, the polynomials `Σ c_k(b) x^k`
/// have a common root in `x`. Computation runs in `Q[y]/(h)`, splitting `h`
/// whenever a zero divisor shows up.
fn common_root_over(h: UniPoly, polys: &[Vec<UniPoly>]) -> bool {
    let mut stack = vec![h];
    while let Some(h) = stack.pop() {
        if h.degree().unwrap_or(0) == 0 {
            continue;
        }
        match gcd_degree_over(&h, polys) {
            Ok(true) => return true,
            Ok(false) => {}
            Err((a, b)) => {
                stack.push(a);
                stack.push(b);
            }
        }
    }
    false
}

type Split = (UniPoly, UniPoly);

fn reduce(p: &[UniPoly], h: &UniPoly) -> Vec<UniPoly> {
    let mut out: Vec<UniPoly> = p.iter().map(|c| c.rem(h).expect("h is nonzero")).collect();
    while out.last().is_some_and(UniPoly::is_zero) {
        out.pop();
    }
    out
}

fn inverse_mod(a: &UniPoly, h: &UniPoly) -> Result<UniPoly, Split> {
    let (g, s, _) = a.ext_gcd(h);
    if g.degree() == Some(0) {
        Ok(s.rem(h).expect("h is nonzero"))
    } else {
        let rest = h.div_rem(&g).expect("g is nonzero").0;
        Err((g, rest))
    }
}

fn mul_mod(a: &UniPoly, b: &UniPoly, h: &UniPoly) -> UniPoly {
    a.mul(b).rem(h).expect("h is nonzero")
}

/// `a mod b` over `Q[y]/(h)`, with `lc(b)` known to be invertible.
fn rem_over(a: &[UniPoly], b: &[UniPoly], lc_inv: &UniPoly, h: &UniPoly) -> Vec<UniPoly> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    while r.len() > db {
        let k = r.len() - 1;
        let c = mul_mod(&r[k], lc_inv, h);
        for (j, bc) in b.iter().enumerate() {
            let t = mul_mod(&c, bc, h);
            r[k - db + j] = r[k - db + j].sub(&t);
        }
        r = reduce(&r, h);
    }
    r
}

/// `Ok(true)` if the gcd over this component has positive degree in `x`.
fn gcd_degree_over(h: &UniPoly, polys: &[Vec<UniPoly>]) -> Result<bool, Split> {
    let mut nonzero: Vec<Vec<UniPoly>> = Vec::new();
    for p in polys {
        let r = reduce(p, h);
        if !r.is_empty() {
            inverse_mod(r.last().expect("nonempty"), h)?;
            nonzero.push(r);
        }
    }
    let Some(mut acc) = nonzero.first().cloned() else { return Ok(true) };
    for p in &nonzero[1..] {
        let (mut a, mut b) = (acc, p.clone());
        while !b.is_empty() {
            let inv = inverse_mod(b.last().expect("nonempty"), h)?;
            let r = rem_over(&a, &b, &inv, h);
            a = std::mem::replace(&mut b, r);
        }
        acc = a;
        if acc.len() == 1 {
            return Ok(false);
        }
    }
    Ok(acc.len() >= 2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{int, rat};

    fn lam(values: &[BigRational]) -> BTreeMap<Var, BigRational> {
        values.iter().enumerate().map(|(i, v)| (Var::Lambda(i + 1), v.clone())).collect()
    }

    #[test]
    fn one_variable() {
        let sys = HomSystem::q_system(1).unwrap();
        assert!(has_nontrivial_zero(&sys.clone().with_lambda(lam(&[int(1)]))).unwrap());
        assert!(!has_nontrivial_zero(&sys.with_lambda(lam(&[int(3)]))).unwrap());
    }

    #[test]
    fn two_variables() {
        let sys = HomSystem::q_system(2).unwrap();
        for strategy in [Strategy::Auto, Strategy::Charts] {
            let at = |a, b| has_nontrivial_zero_with(&sys.clone().with_lambda(lam(&[a, b])), strategy).unwrap();
            assert!(!at(int(2), int(3)));
            assert!(at(int(2), rat(1, 2)));
            assert!(at(int(1), int(5)));
            assert!(at(int(5), int(1)));
        }
    }

    #[test]
    fn three_variables_known_points() {
        let sys = HomSystem::q_system(3).unwrap();
        for strategy in [Strategy::Auto, Strategy::Charts] {
            let at = |v: [BigRational; 3]| has_nontrivial_zero_with(&sys.clone().with_lambda(lam(&v)), strategy).unwrap();
            assert!(!at([int(2), int(3), int(5)]));
            assert!(at([int(2), int(3), rat(1, 6)]));
            assert!(at([int(2), int(3), rat(1, 11)]));
            assert!(at([rat(1, 2), int(3), rat(2, 3)]));
            assert!(at([int(2), int(1), int(7)]));
        }
    }

    #[test]
    fn needs_all_lambdas() {
        let sys = HomSystem::q_system(2).unwrap().with_lambda(lam(&[int(2)]));
        assert!(has_nontrivial_zero(&sys).is_err());
        let four = HomSystem::q_system(4).unwrap().with_lambda(lam(&[int(2), int(3), int(5), int(7)]));
        assert!(matches!(has_nontrivial_zero(&four), Err(EliminationError::Unsupported(_))));
    }
}
