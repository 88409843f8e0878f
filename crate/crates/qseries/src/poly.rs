use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::coeff::Rat;
use crate::series::binomial_big;

/// A finitely supported Laurent polynomial in `y` on the half-integer grid:
/// keys denote exponents `k/2`, so `y^{1/2}` is representable.
///
/// Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct LaurentPolyY {
    coeffs: BTreeMap<i64, Rat>,
}

impl LaurentPolyY {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Rat) -> Self {
        let mut p = Self::zero();
        p.add_half(0, c);
        p
    }

    pub fn one() -> Self {
        Self::constant(Rat::from_integer(BigInt::from(1)))
    }

    /// `c·y^e` for an integer exponent `e`.
    pub fn term_int(e: i64, c: Rat) -> Self {
        let mut p = Self::zero();
        p.add_half(2 * e, c);
        p
    }

    /// Add `c·y^{k/2}` in place.
    pub fn add_half(&mut self, k: i64, c: Rat) {
        if c.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(k).or_insert_with(Rat::zero);
        *entry += c;
        if entry.is_zero() {
            self.coeffs.remove(&k);
        }
    }

    /// Coefficient of `y^e` (integer exponent).
    pub fn get_int(&self, e: i64) -> Rat {
        self.coeffs.get(&(2 * e)).cloned().unwrap_or_else(Rat::zero)
    }

    /// Coefficient of `y^{k/2}`.
    pub fn get_half(&self, k: i64) -> Rat {
        self.coeffs.get(&k).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Iterate terms as `(k, coeff)` where the exponent is `k/2`, in
    /// increasing order.
    pub fn terms_half(&self) -> impl Iterator<Item = (i64, &Rat)> + '_ {
        self.coeffs.iter().map(|(k, c)| (*k, c))
    }

    /// Smallest and largest stored `k` (exponent numerators over 2).
    pub fn support_half(&self) -> Option<(i64, i64)> {
        let lo = self.coeffs.keys().next()?;
        let hi = self.coeffs.keys().next_back()?;
        Some((*lo, *hi))
    }

    /// True if every exponent is an integer.
    pub fn has_integer_support(&self) -> bool {
        self.coeffs.keys().all(|k| k % 2 == 0)
    }

    /// True if invariant under `y ↔ y^{-1}`.
    pub fn is_symmetric(&self) -> bool {
        self.coeffs.iter().all(|(k, c)| self.get_half(-k) == *c)
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &rhs.coeffs {
            out.add_half(*k, c.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &rhs.coeffs {
            out.add_half(*k, -c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        LaurentPolyY { coeffs: self.coeffs.iter().map(|(k, c)| (*k, -c.clone())).collect() }
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        LaurentPolyY { coeffs: self.coeffs.iter().map(|(k, v)| (*k, v * c)).collect() }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let mut out = Self::zero();
        for (ka, ca) in &self.coeffs {
            for (kb, cb) in &rhs.coeffs {
                out.add_half(ka + kb, ca * cb);
            }
        }
        out
    }

    /// Evaluate at `y = 1` (the sum of all coefficients).
    pub fn eval_one(&self) -> Rat {
        let mut acc = Rat::zero();
        for c in self.coeffs.values() {
            acc += c;
        }
        acc
    }

    /// Keep only exponents `k/2` with `lo ≤ k ≤ hi`.
    pub fn restrict_half(&self, lo: i64, hi: i64) -> Self {
        LaurentPolyY {
            coeffs: self
                .coeffs
                .range(lo..=hi)
                .map(|(k, c)| (*k, c.clone()))
                .collect(),
        }
    }

    /// `(y^{1/2} − y^{−1/2})^{2g} = Σ_j (−1)^j C(2g, j) y^{g−j}`.
    ///
    /// Integer exponents from `−g` to `g`, top coefficient 1.
    pub fn sin_pow(g: i64) -> Self {
        assert!(g >= 0);
        let mut p = Self::zero();
        for j in 0..=(2 * g) {
            let mut c = binomial_big(2 * g, j as u64);
            if j % 2 == 1 {
                c = -c;
            }
            p.add_half(2 * (g - j), Rat::from_integer(c));
        }
        p
    }
}

impl fmt::Display for LaurentPolyY {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        for (i, (k, c)) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if *k == 0 {
                write!(f, "({c})")?;
            } else if k % 2 == 0 {
                write!(f, "({})*y^{}", c, k / 2)?;
            } else {
                write!(f, "({c})*y^({k}/2)")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat;

    #[test]
    fn sin_pow_small() {
        assert_eq!(LaurentPolyY::sin_pow(0), LaurentPolyY::one());
        let b1 = LaurentPolyY::sin_pow(1);
        // y - 2 + y^{-1}
        assert_eq!(b1.get_int(1), rat(1));
        assert_eq!(b1.get_int(0), rat(-2));
        assert_eq!(b1.get_int(-1), rat(1));
        assert!(b1.is_symmetric());
        // (y^{1/2} - y^{-1/2})^{2g} vanishes at y = 1
        assert_eq!(LaurentPolyY::sin_pow(3).eval_one(), rat(0));
    }

    #[test]
    fn sin_pow_is_power_of_sin_pow_one() {
        let b1 = LaurentPolyY::sin_pow(1);
        let mut p = LaurentPolyY::one();
        for _ in 0..3 {
            p = p.mul(&b1);
        }
        assert_eq!(p, LaurentPolyY::sin_pow(3));
    }

    #[test]
    fn symmetry_detection() {
        let mut p = LaurentPolyY::term_int(2, rat(5));
        p = p.add(&LaurentPolyY::term_int(-2, rat(5)));
        assert!(p.is_symmetric());
        p = p.add(&LaurentPolyY::term_int(1, rat(3)));
        assert!(!p.is_symmetric());
    }
}
