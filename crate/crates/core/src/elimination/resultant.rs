use crate::poly::{MPoly, Var};

use super::EliminationError;

/// Sylvester matrix of `a` and `b` with respect to `v`; entries are free of `v`.
pub fn sylvester_matrix(a: &MPoly, b: &MPoly, v: &Var) -> Result<Vec<Vec<MPoly>>, EliminationError> {
    if a.is_zero() || b.is_zero() {
        return Err(EliminationError::Argument("resultant of the zero polynomial".into()));
    }
    if a.space() != b.space() {
        return Err(EliminationError::Argument("operands live in different spaces".into()));
    }
    let ca = a.coefficients_in(v)?;
    let cb = b.coefficients_in(v)?;
    let (p, q) = (ca.len() - 1, cb.len() - 1);
    let size = p + q;
    let zero = MPoly::zero(a.space());
    let mut rows = Vec::with_capacity(size);
    for (coeffs, shifts, deg) in [(&ca, q, p), (&cb, p, q)] {
        for k in 0..shifts {
            let mut row = vec![zero.clone(); size];
            for (j, c) in coeffs.iter().rev().enumerate() {
                row[k + j] = c.clone();
            }
            debug_assert!(k + deg < size);
            rows.push(row);
        }
    }
    Ok(rows)
}

/// `Res_v(a, b)` as the determinant of the Sylvester matrix.
pub fn sylvester_resultant(a: &MPoly, b: &MPoly, v: &Var) -> Result<MPoly, EliminationError> {
    let m = sylvester_matrix(a, b, v)?;
    if m.is_empty() {
        return Ok(MPoly::one(a.space()));
    }
    determinant(m)
}

/// Fraction-free (Bareiss) determinant; every intermediate division is exact.
pub fn determinant(mut m: Vec<Vec<MPoly>>) -> Result<MPoly, EliminationError> {
    let n = m.len();
    let space = match m.first().and_then(|r| r.first()) {
        Some(p) => p.space().clone(),
        None => return Err(EliminationError::Argument("empty matrix".into())),
    };
    if m.iter().any(|r| r.len() != n) {
        return Err(EliminationError::Argument("matrix is not square".into()));
    }
    let mut negate = false;
    let mut prev = MPoly::one(&space);
    for k in 0..n.saturating_sub(1) {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    negate = !negate;
                }
                None => return Ok(MPoly::zero(&space)),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&m[i][j] * &m[k][k]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = num.div_exact(&prev)?;
            }
            m[i][k] = MPoly::zero(&space);
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    Ok(if negate { -d } else { d })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{int, VariableSpace};

    #[test]
    fn textbook_cases() {
        let s = VariableSpace::z_only(1).unwrap();
        let z = MPoly::var(&s, &Var::Z(1)).unwrap();
        let one = MPoly::one(&s);
        let r = sylvester_resultant(&(&z - &one), &(&z + &one), &Var::Z(1)).unwrap();
        assert_eq!(r, MPoly::integer(&s, 2));
        let zz = &z * &z;
        assert!(sylvester_resultant(&zz, &zz, &Var::Z(1)).unwrap().is_zero());
        // Res(c, z^2 + 1) = c^2
        let c = MPoly::integer(&s, 3);
        assert_eq!(sylvester_resultant(&c, &(&zz + &one), &Var::Z(1)).unwrap(), MPoly::integer(&s, 9));
        assert!(sylvester_resultant(&MPoly::zero(&s), &z, &Var::Z(1)).is_err());
    }

    #[test]
    fn bareiss_with_pivoting() {
        let s = VariableSpace::z_only(1).unwrap();
        let k = |x: i64| MPoly::integer(&s, x);
        let m = vec![vec![k(0), k(2), k(1)], vec![k(1), k(0), k(3)], vec![k(4), k(5), k(6)]];
        // 0·(0−15) − 2·(6−12) + 1·(5−0) = 17
        assert_eq!(determinant(m).unwrap().as_constant(), Some(int(17)));
    }
}
