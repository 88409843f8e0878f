use std::collections::BTreeMap;

use num_traits::Zero;

use crate::coeff::Rat;
use crate::error::SeriesError;
use crate::poly::LaurentPolyY;
use crate::series::binomial_big;

/// A series in `q` (integer exponents) whose coefficients are Laurent
/// polynomials in `y`.
///
/// Coefficients are exact strictly below `q_trunc`. Any `y`-window guarantee
/// beyond finite support is the responsibility of the operation that builds
/// the series.
#[derive(Clone, Debug, PartialEq)]
pub struct BiSeries {
    q_trunc: i64,
    coeffs: BTreeMap<i64, LaurentPolyY>,
}

impl BiSeries {
    pub fn zero(q_trunc: i64) -> Self {
        BiSeries { q_trunc, coeffs: BTreeMap::new() }
    }

    pub fn one(q_trunc: i64) -> Self {
        let mut s = Self::zero(q_trunc);
        if q_trunc > 0 {
            s.coeffs.insert(0, LaurentPolyY::one());
        }
        s
    }

    pub fn q_truncation(&self) -> i64 {
        self.q_trunc
    }

    /// Set the coefficient of `q^h`.
    pub fn set(&mut self, h: i64, p: LaurentPolyY) {
        if h >= self.q_trunc {
            return;
        }
        if p.is_zero() {
            self.coeffs.remove(&h);
        } else {
            self.coeffs.insert(h, p);
        }
    }

    /// Coefficient of `q^h`; errors at or beyond the truncation.
    pub fn coeff(&self, h: i64) -> Result<LaurentPolyY, SeriesError> {
        if h >= self.q_trunc {
            return Err(SeriesError::BeyondTruncation);
        }
        Ok(self.coeffs.get(&h).cloned().unwrap_or_default())
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &LaurentPolyY)> + '_ {
        self.coeffs.iter().map(|(h, p)| (*h, p))
    }

    fn lower_bound(&self) -> i64 {
        self.coeffs.keys().next().copied().unwrap_or(self.q_trunc).min(self.q_trunc)
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let trunc =
            (self.q_trunc + rhs.lower_bound()).min(rhs.q_trunc + self.lower_bound());
        let mut out = Self::zero(trunc);
        for (ha, pa) in &self.coeffs {
            for (hb, pb) in &rhs.coeffs {
                let h = ha + hb;
                if h < trunc {
                    let prod = pa.mul(pb);
                    let acc = out.coeffs.entry(h).or_insert_with(LaurentPolyY::zero);
                    *acc = acc.add(&prod);
                }
            }
        }
        out.coeffs.retain(|_, p| !p.is_zero());
        out
    }

    /// Multiply every `q`-coefficient by the fixed `y`-polynomial `p`.
    pub fn scale_poly(&self, p: &LaurentPolyY) -> Self {
        let mut out = Self::zero(self.q_trunc);
        for (h, c) in &self.coeffs {
            out.set(*h, c.mul(p));
        }
        out
    }

    /// Restrict every coefficient to `y`-exponents `k/2` with `lo ≤ k ≤ hi`.
    pub fn restrict_y_half(&self, lo: i64, hi: i64) -> Self {
        let mut out = Self::zero(self.q_trunc);
        for (h, c) in &self.coeffs {
            out.set(*h, c.restrict_half(lo, hi));
        }
        out
    }

    /// Expansion of `(1 + s·y^a·q^n)^p` through `q^{q_trunc−1}`, where the
    /// `y`-exponent `a` is an integer and `n ≥ 1`.
    pub fn binomial_factor(s: &Rat, a: i64, n: i64, p: i64, q_trunc: i64) -> Self {
        assert!(n >= 1);
        let mut out = Self::zero(q_trunc);
        let mut k = 0i64;
        let mut s_pow = Rat::from_integer(1.into());
        while k * n < q_trunc {
            let c = Rat::from_integer(binomial_big(p, k as u64)) * &s_pow;
            if !c.is_zero() {
                let cur = out.coeffs.entry(k * n).or_insert_with(LaurentPolyY::zero);
                *cur = cur.add(&LaurentPolyY::term_int(a * k, c));
            }
            s_pow *= s;
            k += 1;
        }
        out.coeffs.retain(|_, q| !q.is_zero());
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat;

    #[test]
    fn factor_expansion() {
        // (1 - y q)^{-2} = 1 + 2yq + 3y^2q^2 + ...
        let f = BiSeries::binomial_factor(&rat(-1), 1, 1, -2, 4);
        assert_eq!(f.coeff(0).unwrap(), LaurentPolyY::one());
        assert_eq!(f.coeff(1).unwrap().get_int(1), rat(2));
        assert_eq!(f.coeff(2).unwrap().get_int(2), rat(3));
    }

    #[test]
    fn product_truncation() {
        let a = BiSeries::binomial_factor(&rat(-1), 0, 1, -1, 5);
        let b = BiSeries::binomial_factor(&rat(-1), 0, 2, -1, 7);
        let p = a.mul(&b);
        assert_eq!(p.q_truncation(), 5);
        // 1/((1-q)(1-q^2)): partitions into parts of size <= 2
        assert_eq!(p.coeff(4).unwrap().get_int(0), rat(3));
    }
}
