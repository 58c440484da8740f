use std::cmp::Ordering;

/// A sparse exponent vector: `(variable index, exponent)` pairs sorted by index,
/// exponents strictly positive.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<(usize, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(idx: usize, exp: u32) -> Self {
        if exp == 0 {
            Monomial::one()
        } else {
            Monomial(vec![(idx, exp)])
        }
    }

    /// Builds from arbitrary pairs; merges repeats and drops zeros.
    pub fn from_pairs(mut pairs: Vec<(usize, u32)>) -> Self {
        pairs.sort_unstable_by_key(|p| p.0);
        let mut out: Vec<(usize, u32)> = Vec::with_capacity(pairs.len());
        for (i, e) in pairs {
            match out.last_mut() {
                Some(last) if last.0 == i => last.1 += e,
                _ => out.push((i, e)),
            }
        }
        out.retain(|p| p.1 > 0);
        Monomial(out)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn pairs(&self) -> &[(usize, u32)] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|p| p.1).sum()
    }

    pub fn exponent(&self, idx: usize) -> u32 {
        match self.0.binary_search_by_key(&idx, |p| p.0) {
            Ok(k) => self.0[k].1,
            Err(_) => 0,
        }
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = Vec::with_capacity(self.0.len());
        let mut j = 0;
        for &(i, e) in &self.0 {
            if j < other.0.len() && other.0[j].0 < i {
                return None;
            }
            if j < other.0.len() && other.0[j].0 == i {
                let d = other.0[j].1;
                if d > e {
                    return None;
                }
                if e > d {
                    out.push((i, e - d));
                }
                j += 1;
            } else {
                out.push((i, e));
            }
        }
        if j < other.0.len() {
            return None;
        }
        Some(Monomial(out))
    }

    /// Lowers the exponent of `idx` by one; returns the old exponent.
    pub fn differentiate(&self, idx: usize) -> Option<(u32, Monomial)> {
        let k = self.0.binary_search_by_key(&idx, |p| p.0).ok()?;
        let e = self.0[k].1;
        let mut out = self.0.clone();
        if e == 1 {
            out.remove(k);
        } else {
            out[k].1 -= 1;
        }
        Some((e, Monomial(out)))
    }

    pub fn without(&self, idx: usize) -> Monomial {
        Monomial(self.0.iter().copied().filter(|p| p.0 != idx).collect())
    }
}

/// Graded lexicographic order: total degree first, then the exponent vector
/// compared lexicographically in variable order.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            for (a, b) in self.0.iter().zip(&other.0) {
                if a.0 != b.0 {
                    // The side holding the lower variable index has the larger exponent there.
                    return if a.0 < b.0 { Ordering::Greater } else { Ordering::Less };
                }
                if a.1 != b.1 {
                    return a.1.cmp(&b.1);
                }
            }
            self.0.len().cmp(&other.0.len())
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dense(m: &Monomial, nvars: usize) -> Vec<u32> {
        (0..nvars).map(|i| m.exponent(i)).collect()
    }

    #[test]
    fn order_matches_dense_grlex() {
        let ms = [
            Monomial::one(),
            Monomial::var(0, 1),
            Monomial::var(1, 1),
            Monomial::from_pairs(vec![(0, 1), (1, 1)]),
            Monomial::var(0, 2),
            Monomial::var(2, 2),
            Monomial::from_pairs(vec![(1, 1), (2, 1)]),
            Monomial::from_pairs(vec![(0, 1), (2, 3)]),
        ];
        for a in &ms {
            for b in &ms {
                let (da, db) = (dense(a, 3), dense(b, 3));
                let expect = a.degree().cmp(&b.degree()).then(da.cmp(&db));
                assert_eq!(a.cmp(b), expect, "{da:?} vs {db:?}");
            }
        }
    }

    #[test]
    fn div_and_mul_invert() {
        let a = Monomial::from_pairs(vec![(0, 2), (3, 1)]);
        let b = Monomial::from_pairs(vec![(1, 1), (3, 4)]);
        let p = a.mul(&b);
        assert_eq!(p.div(&b), Some(a.clone()));
        assert_eq!(p.div(&a), Some(b.clone()));
        assert_eq!(a.div(&b), None);
    }
}
