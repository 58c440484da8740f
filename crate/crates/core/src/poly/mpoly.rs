use std::collections::{BTreeMap, HashMap};
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{BlockKind, Monomial, PolyError, Var, VariableSpace};

/// A sparse polynomial with rational coefficients over a fixed variable space.
///
/// Terms are kept in a map ordered by graded-lex monomial order, so equality is
/// structural and iteration is deterministic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MPoly {
    space: Arc<VariableSpace>,
    terms: BTreeMap<Monomial, BigRational>,
}

impl MPoly {
    pub fn zero(space: &Arc<VariableSpace>) -> Self {
        MPoly {
            space: space.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(space: &Arc<VariableSpace>) -> Self {
        Self::constant(space, BigRational::one())
    }

    pub fn constant(space: &Arc<VariableSpace>, c: BigRational) -> Self {
        let mut p = Self::zero(space);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(), c);
        }
        p
    }

    pub fn integer(space: &Arc<VariableSpace>, c: i64) -> Self {
        Self::constant(space, BigRational::from_integer(c.into()))
    }

    pub fn var(space: &Arc<VariableSpace>, v: &Var) -> Result<Self, PolyError> {
        let idx = space.require(v)?;
        Ok(Self::monomial(space, Monomial::var(idx, 1), BigRational::one()))
    }

    pub fn monomial(space: &Arc<VariableSpace>, m: Monomial, c: BigRational) -> Self {
        let mut p = Self::zero(space);
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    /// Sums arbitrary terms, merging repeated monomials.
    pub fn from_terms(space: &Arc<VariableSpace>, terms: impl IntoIterator<Item = (Monomial, BigRational)>) -> Self {
        let mut acc: HashMap<Monomial, BigRational> = HashMap::new();
        for (m, c) in terms {
            *acc.entry(m).or_insert_with(BigRational::zero) += c;
        }
        Self::from_map(space, acc)
    }

    fn from_map(space: &Arc<VariableSpace>, acc: HashMap<Monomial, BigRational>) -> Self {
        MPoly {
            space: space.clone(),
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    pub fn space(&self) -> &Arc<VariableSpace> {
        &self.space
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> BigRational {
        self.terms.get(m).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &BigRational)> {
        self.terms.iter().next_back()
    }

    /// The constant value, if the polynomial has degree at most 0.
    pub fn as_constant(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn degree_in(&self, v: &Var) -> u32 {
        match self.space.index_of(v) {
            Some(idx) => self.terms.keys().map(|m| m.exponent(idx)).max().unwrap_or(0),
            None => 0,
        }
    }

    pub fn uses(&self, v: &Var) -> bool {
        self.degree_in(v) > 0
    }

    /// Variables that occur with positive exponent, in space order.
    pub fn vars_used(&self) -> Vec<Var> {
        let mut seen = vec![false; self.space.len()];
        for m in self.terms.keys() {
            for &(i, _) in m.pairs() {
                seen[i] = true;
            }
        }
        seen.iter().enumerate().filter(|(_, s)| **s).map(|(i, _)| self.space.var(i).clone()).collect()
    }

    fn check_space(&self, other: &MPoly) -> Result<(), PolyError> {
        if Arc::ptr_eq(&self.space, &other.space) || self.space == other.space {
            Ok(())
        } else {
            Err(PolyError::SpaceMismatch)
        }
    }

    pub fn try_add(&self, other: &MPoly) -> Result<MPoly, PolyError> {
        self.check_space(other)?;
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            match terms.get_mut(m) {
                Some(x) => {
                    *x += c;
                    if x.is_zero() {
                        terms.remove(m);
                    }
                }
                None => {
                    terms.insert(m.clone(), c.clone());
                }
            }
        }
        Ok(MPoly {
            space: self.space.clone(),
            terms,
        })
    }

    /// In-place `self += c * other`.
    pub fn add_scaled(&mut self, other: &MPoly, c: &BigRational) -> Result<(), PolyError> {
        self.check_space(other)?;
        if c.is_zero() {
            return Ok(());
        }
        for (m, x) in &other.terms {
            let t = x * c;
            match self.terms.get_mut(m) {
                Some(y) => {
                    *y += t;
                    if y.is_zero() {
                        self.terms.remove(m);
                    }
                }
                None => {
                    self.terms.insert(m.clone(), t);
                }
            }
        }
        Ok(())
    }

    pub fn try_sub(&self, other: &MPoly) -> Result<MPoly, PolyError> {
        self.try_add(&other.neg_ref())
    }

    pub fn try_mul(&self, other: &MPoly) -> Result<MPoly, PolyError> {
        self.check_space(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(MPoly::zero(&self.space));
        }
        let mut acc: HashMap<Monomial, BigRational> = HashMap::with_capacity(self.len() * other.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let c = ca * cb;
                match acc.get_mut(&ma.mul(mb)) {
                    Some(x) => *x += c,
                    None => {
                        acc.insert(ma.mul(mb), c);
                    }
                }
            }
        }
        Ok(Self::from_map(&self.space, acc))
    }

    fn neg_ref(&self) -> MPoly {
        MPoly {
            space: self.space.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, c: &BigRational) -> MPoly {
        if c.is_zero() {
            return MPoly::zero(&self.space);
        }
        MPoly {
            space: self.space.clone(),
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> MPoly {
        MPoly {
            space: self.space.clone(),
            terms: self.terms.iter().map(|(k, c)| (k.mul(m), c.clone())).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> MPoly {
        let mut result = MPoly::one(&self.space);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    pub fn partial_derivative(&self, v: &Var) -> Result<MPoly, PolyError> {
        let idx = self.space.require(v)?;
        let mut out = BTreeMap::new();
        for (m, c) in &self.terms {
            if let Some((e, dm)) = m.differentiate(idx) {
                out.insert(dm, c * BigRational::from_integer(e.into()));
            }
        }
        Ok(MPoly {
            space: self.space.clone(),
            terms: out,
        })
    }

    /// Simultaneous substitution into a (possibly different) target space.
    ///
    /// Assigned variables are replaced by the given polynomials, which must live in
    /// `target`. Every other variable that occurs is mapped to the variable of the
    /// same name in `target`; it is an error if there is none.
    pub fn substitute(&self, assignments: &BTreeMap<Var, MPoly>, target: &Arc<VariableSpace>) -> Result<MPoly, PolyError> {
        for p in assignments.values() {
            if p.space != *target {
                return Err(PolyError::SpaceMismatch);
            }
        }
        let mut powers: HashMap<(usize, u32), MPoly> = HashMap::new();
        let mut acc: HashMap<Monomial, BigRational> = HashMap::new();
        for (m, c) in &self.terms {
            let mut plain = Vec::with_capacity(m.pairs().len());
            let mut factor: Option<MPoly> = None;
            for &(i, e) in m.pairs() {
                let v = self.space.var(i);
                match assignments.get(v) {
                    None => plain.push((target.require(v)?, e)),
                    Some(img) => {
                        let pw = powers.entry((i, e)).or_insert_with(|| img.pow(e));
                        factor = Some(match factor {
                            None => pw.clone(),
                            Some(f) => &f * &*pw,
                        });
                    }
                }
            }
            let plain = Monomial::from_pairs(plain);
            match factor {
                None => *acc.entry(plain).or_insert_with(BigRational::zero) += c,
                Some(f) => {
                    for (fm, fc) in &f.terms {
                        *acc.entry(fm.mul(&plain)).or_insert_with(BigRational::zero) += fc * c;
                    }
                }
            }
        }
        Ok(MPoly::from_map(target, acc))
    }

    /// Moves the polynomial into another space that contains all of its variables.
    pub fn embed(&self, target: &Arc<VariableSpace>) -> Result<MPoly, PolyError> {
        self.substitute(&BTreeMap::new(), target)
    }

    /// Substitutes rational constants, staying in the same space.
    pub fn specialize(&self, values: &BTreeMap<Var, BigRational>) -> Result<MPoly, PolyError> {
        let assignments = values
            .iter()
            .map(|(v, c)| {
                self.space.require(v)?;
                Ok((v.clone(), MPoly::constant(&self.space, c.clone())))
            })
            .collect::<Result<BTreeMap<_, _>, PolyError>>()?;
        self.substitute(&assignments, &self.space)
    }

    /// Exact evaluation; every occurring variable needs a value.
    pub fn eval(&self, values: &BTreeMap<Var, BigRational>) -> Result<BigRational, PolyError> {
        let mut powers: HashMap<(usize, u32), BigRational> = HashMap::new();
        let mut sum = BigRational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for &(i, e) in m.pairs() {
                let v = self.space.var(i);
                let x = values.get(v).ok_or_else(|| PolyError::UnknownVariable(v.to_string()))?;
                t *= &*powers.entry((i, e)).or_insert_with(|| num_traits::pow(x.clone(), e as usize));
            }
            sum += t;
        }
        Ok(sum)
    }

    /// Coefficients of `v^0, v^1, ...` as polynomials free of `v`.
    pub fn coefficients_in(&self, v: &Var) -> Result<Vec<MPoly>, PolyError> {
        let idx = self.space.require(v)?;
        let d = self.degree_in(v) as usize;
        let mut out = vec![BTreeMap::new(); d + 1];
        for (m, c) in &self.terms {
            out[m.exponent(idx) as usize].insert(m.without(idx), c.clone());
        }
        Ok(out
            .into_iter()
            .map(|terms| MPoly {
                space: self.space.clone(),
                terms,
            })
            .collect())
    }

    /// Assembles `Σ c_k v^k`.
    pub fn from_coefficients(coeffs: &[MPoly], v: &Var) -> Result<MPoly, PolyError> {
        let space = coeffs.first().map(|c| c.space.clone()).ok_or(PolyError::Empty)?;
        let idx = space.require(v)?;
        let mut acc = MPoly::zero(&space);
        for (k, c) in coeffs.iter().enumerate() {
            acc = acc.try_add(&c.mul_monomial(&Monomial::var(idx, k as u32)))?;
        }
        Ok(acc)
    }

    /// Whether every term has the given degree in the variables of `kind`.
    pub fn is_homogeneous_in(&self, kind: BlockKind, degree: u32) -> bool {
        self.terms.keys().all(|m| self.block_degree(m, kind) == degree)
    }

    pub fn block_degree(&self, m: &Monomial, kind: BlockKind) -> u32 {
        m.pairs().iter().filter(|(i, _)| self.space.var(*i).kind() == kind).map(|p| p.1).sum()
    }

    /// The common degree in block `kind`, if every term agrees.
    pub fn homogeneous_degree_in(&self, kind: BlockKind) -> Option<u32> {
        let mut it = self.terms.keys().map(|m| self.block_degree(m, kind));
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    pub fn is_integral(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }

    /// Exact division, failing if `divisor` does not divide `self`.
    pub fn div_exact(&self, divisor: &MPoly) -> Result<MPoly, PolyError> {
        self.check_space(divisor)?;
        let (lm, lc) = divisor.leading_term().ok_or(PolyError::DivisionByZero)?;
        let (lm, lc) = (lm.clone(), lc.clone());
        let mut rem = self.clone();
        let mut quot = BTreeMap::new();
        while let Some((m, c)) = rem.leading_term() {
            let qm = m.div(&lm).ok_or(PolyError::NotDivisible)?;
            let qc = c / &lc;
            rem = rem.try_sub(&divisor.mul_monomial(&qm).scale(&qc))?;
            quot.insert(qm, qc);
        }
        Ok(MPoly {
            space: self.space.clone(),
            terms: quot,
        })
    }

    /// Scales to integer coefficients with gcd 1 and a positive leading coefficient.
    /// Returns the factor `u` with `self = u * primitive`.
    pub fn primitive(&self) -> (BigRational, MPoly) {
        if self.is_zero() {
            return (BigRational::one(), self.clone());
        }
        let mut den_lcm = BigInt::one();
        let mut num_gcd = BigInt::zero();
        for c in self.terms.values() {
            den_lcm = den_lcm.lcm(c.denom());
            num_gcd = num_gcd.gcd(c.numer());
        }
        let mut unit = BigRational::new(num_gcd, den_lcm);
        if self.leading_term().map(|(_, c)| c.is_negative()).unwrap_or(false) {
            unit = -unit;
        }
        let inv = unit.recip();
        (unit, self.scale(&inv))
    }

    /// Whether `self = u * other` for a nonzero rational `u`.
    pub fn equal_up_to_unit(&self, other: &MPoly) -> bool {
        self.space == other.space && self.primitive().1.terms == other.primitive().1.terms
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $call:ident) => {
        impl $tr<&MPoly> for &MPoly {
            type Output = MPoly;
            fn $method(self, rhs: &MPoly) -> MPoly {
                self.$call(rhs).expect("operands must share a variable space")
            }
        }
        impl $tr<MPoly> for MPoly {
            type Output = MPoly;
            fn $method(self, rhs: MPoly) -> MPoly {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&MPoly> for MPoly {
            type Output = MPoly;
            fn $method(self, rhs: &MPoly) -> MPoly {
                (&self).$method(rhs)
            }
        }
        impl $tr<MPoly> for &MPoly {
            type Output = MPoly;
            fn $method(self, rhs: MPoly) -> MPoly {
                self.$method(&rhs)
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);

impl Neg for &MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        self.neg_ref()
    }
}

impl Neg for MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        self.neg_ref()
    }
}

impl AddAssign<&MPoly> for MPoly {
    fn add_assign(&mut self, rhs: &MPoly) {
        self.add_scaled(rhs, &BigRational::one()).expect("operands must share a variable space");
    }
}

impl SubAssign<&MPoly> for MPoly {
    fn sub_assign(&mut self, rhs: &MPoly) {
        self.add_scaled(rhs, &-BigRational::one()).expect("operands must share a variable space");
    }
}
