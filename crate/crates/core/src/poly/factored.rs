use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{MPoly, PolyError, Var, VariableSpace};

/// A product `unit * Π f_k^{e_k}` with primitive, non-constant factors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factored {
    space: Arc<VariableSpace>,
    unit: BigRational,
    factors: Vec<(MPoly, u32)>,
}

impl Factored {
    pub fn new(space: &Arc<VariableSpace>, unit: BigRational, factors: Vec<(MPoly, u32)>) -> Result<Self, PolyError> {
        let mut f = Factored {
            space: space.clone(),
            unit,
            factors: Vec::new(),
        };
        for (p, e) in factors {
            f.push(p, e)?;
        }
        Ok(f)
    }

    pub fn from_poly(p: &MPoly) -> Self {
        let mut f = Factored {
            space: p.space().clone(),
            unit: BigRational::one(),
            factors: Vec::new(),
        };
        f.push(p.clone(), 1).expect("same space");
        f
    }

    /// Multiplies in `p^e`, folding constants into the unit and merging repeats.
    pub fn push(&mut self, p: MPoly, e: u32) -> Result<(), PolyError> {
        if **p.space() != *self.space {
            return Err(PolyError::SpaceMismatch);
        }
        if e == 0 {
            return Ok(());
        }
        let (u, prim) = p.primitive();
        if p.is_zero() {
            self.unit = BigRational::zero();
            self.factors.clear();
            return Ok(());
        }
        self.unit *= num_traits::pow(u, e as usize);
        if prim.as_constant().is_some() {
            return Ok(());
        }
        match self.factors.iter_mut().find(|(f, _)| *f == prim) {
            Some(slot) => slot.1 += e,
            None => self.factors.push((prim, e)),
        }
        Ok(())
    }

    pub fn space(&self) -> &Arc<VariableSpace> {
        &self.space
    }

    pub fn unit(&self) -> &BigRational {
        &self.unit
    }

    pub fn factors(&self) -> &[(MPoly, u32)] {
        &self.factors
    }

    pub fn is_zero(&self) -> bool {
        self.unit.is_zero()
    }

    pub fn mul(&self, other: &Factored) -> Result<Factored, PolyError> {
        let mut out = self.clone();
        out.unit *= &other.unit;
        if out.unit.is_zero() {
            out.factors.clear();
            return Ok(out);
        }
        for (p, e) in &other.factors {
            out.push(p.clone(), *e)?;
        }
        Ok(out)
    }

    pub fn expand(&self) -> MPoly {
        let mut acc = MPoly::constant(&self.space, self.unit.clone());
        for (p, e) in &self.factors {
            acc = &acc * &p.pow(*e);
        }
        acc
    }

    /// Distinct factors, sorted by their text form.
    pub fn distinct_factors(&self) -> Vec<MPoly> {
        let mut v: Vec<MPoly> = self.factors.iter().map(|(p, _)| p.clone()).collect();
        v.sort_by_key(|p| p.to_string());
        v
    }

    /// Same distinct factors, ignoring units and multiplicities.
    pub fn same_factors(&self, other: &Factored) -> bool {
        self.space == other.space && self.is_zero() == other.is_zero() && self.distinct_factors() == other.distinct_factors()
    }

    pub fn vanishes_at(&self, values: &BTreeMap<Var, BigRational>) -> Result<bool, PolyError> {
        if self.is_zero() {
            return Ok(true);
        }
        for (p, _) in &self.factors {
            if p.eval(values)?.is_zero() {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// Applies a substitution factor by factor.
    pub fn map(&self, f: impl Fn(&MPoly) -> Result<MPoly, PolyError>, target: &Arc<VariableSpace>) -> Result<Factored, PolyError> {
        let mut out = Factored {
            space: target.clone(),
            unit: self.unit.clone(),
            factors: Vec::new(),
        };
        for (p, e) in &self.factors {
            out.push(f(p)?, *e)?;
        }
        Ok(out)
    }

    /// Divides out the candidates as often as possible. Succeeds when the
    /// cofactor left over is a constant.
    pub fn trial_factor(p: &MPoly, candidates: &[MPoly]) -> Option<Factored> {
        if p.is_zero() {
            return None;
        }
        let mut rest = p.clone();
        let mut out = Factored {
            space: p.space().clone(),
            unit: BigRational::one(),
            factors: Vec::new(),
        };
        for c in candidates {
            if c.as_constant().is_some() {
                continue;
            }
            let mut e = 0;
            while let Ok(q) = rest.div_exact(c) {
                rest = q;
                e += 1;
            }
            out.push(c.clone(), e).ok()?;
        }
        let unit = rest.as_constant()?;
        out.unit *= unit;
        Some(out)
    }
}

impl fmt::Display for Factored {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "{}", self.unit);
        }
        if self.unit == -BigRational::one() {
            f.write_str("-")?;
        } else if !self.unit.is_one() {
            write!(f, "{}*", self.unit)?;
        }
        for (k, (p, e)) in self.factors.iter().enumerate() {
            if k > 0 {
                f.write_str("*")?;
            }
            write!(f, "({p})")?;
            if *e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}
