use std::fmt;

use num_traits::{One, Signed};

use super::MPoly;

/// Terms from the highest monomial down, e.g. `-l1*z1^2 + l1*l2*z1*z2 - 1/2*z2`.
impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms().rev().enumerate() {
            let neg = c.is_negative();
            match (k, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let a = c.abs();
            let mut first = true;
            if !a.is_one() || m.is_one() {
                write!(f, "{a}")?;
                first = false;
            }
            for &(i, e) in m.pairs() {
                if !first {
                    f.write_str("*")?;
                }
                first = false;
                write!(f, "{}", self.space().var(i))?;
                if e > 1 {
                    write!(f, "^{e}")?;
                }
            }
        }
        Ok(())
    }
}
