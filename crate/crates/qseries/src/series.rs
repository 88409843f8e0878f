use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::coeff::{Coeff, Rat};
use crate::error::SeriesError;

/// Exact exponent value: a rational with small components.
///
/// Exponents and truncation bounds stay tiny (a few thousand at most), so a
/// machine-word rational is exact and cheap to compare.
pub type Exp = num_rational::Rational64;

/// A sparse formal Laurent series with exponents on the grid `(1/N)·Z`.
///
/// Invariants:
/// - `grid ≥ 1`;
/// - every stored key `k` satisfies `k/grid < trunc`;
/// - no stored coefficient is zero.
///
/// The truncation is an exponent bound, not a term count: coefficients are
/// exact strictly below `trunc` and unknown at or above it. Every operation
/// computes the tightest sound propagated bound, so precision loss in chained
/// products is tracked rather than silently ignored.
#[derive(Clone, Debug)]
pub struct FracSeries<C: Coeff> {
    grid: i64,
    coeffs: BTreeMap<i64, C>,
    trunc: Exp,
}

impl<C: Coeff> FracSeries<C> {
    /// The zero series on the given grid, exact below `trunc`.
    pub fn zero(grid: i64, trunc: Exp) -> Self {
        assert!(grid >= 1, "grid must be positive");
        FracSeries { grid, coeffs: BTreeMap::new(), trunc }
    }

    /// The constant series 1.
    pub fn one(grid: i64, trunc: Exp) -> Self {
        Self::monomial(grid, 0, C::one(), trunc)
    }

    /// `c·x^{k/grid}`. The term is dropped if it lies at or beyond `trunc`.
    pub fn monomial(grid: i64, k: i64, c: C, trunc: Exp) -> Self {
        let mut s = Self::zero(grid, trunc);
        if !c.is_zero() && Exp::new(k, grid) < trunc {
            s.coeffs.insert(k, c);
        }
        s
    }

    /// The variable itself (grid 1).
    pub fn var(trunc: Exp) -> Self {
        Self::monomial(1, 1, C::one(), trunc)
    }

    /// Build a grid-1 series from `(exponent, coefficient)` pairs.
    /// Terms at or beyond `trunc` are dropped; repeated exponents accumulate.
    pub fn from_integer_terms(trunc: Exp, terms: impl IntoIterator<Item = (i64, C)>) -> Self {
        Self::from_grid_terms(1, trunc, terms)
    }

    /// Build a series from `(key, coefficient)` pairs where the key `k`
    /// denotes the exponent `k/grid`.
    pub fn from_grid_terms(
        grid: i64,
        trunc: Exp,
        terms: impl IntoIterator<Item = (i64, C)>,
    ) -> Self {
        let mut s = Self::zero(grid, trunc);
        for (k, c) in terms {
            if Exp::new(k, grid) < trunc {
                s.add_term(k, c);
            }
        }
        s
    }

    fn add_term(&mut self, key: i64, c: C) {
        if c.is_zero() {
            return;
        }
        match self.coeffs.entry(key) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().add_ref(&c);
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn grid(&self) -> i64 {
        self.grid
    }

    pub fn truncation(&self) -> Exp {
        self.trunc
    }

    /// Iterate stored terms as `(exponent, coefficient)` in increasing
    /// exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (Exp, &C)> + '_ {
        let grid = self.grid;
        self.coeffs.iter().map(move |(k, c)| (Exp::new(*k, grid), c))
    }

    /// Number of stored (nonzero) terms.
    pub fn num_terms(&self) -> usize {
        self.coeffs.len()
    }

    /// Smallest exponent with a nonzero coefficient, if any term is stored.
    pub fn min_exp(&self) -> Option<Exp> {
        self.coeffs.keys().next().map(|k| Exp::new(*k, self.grid))
    }

    /// True if no term is stored (the series is zero as far as it is known).
    pub fn is_zero_to_trunc(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// A lower bound for the exponent of any term, known or unknown.
    fn lower_bound(&self) -> Exp {
        self.min_exp().map_or(self.trunc, |e| e.min(self.trunc))
    }

    /// Coefficient at exponent `e`, or zero if absent. Errors if `e` lies at
    /// or beyond the truncation bound.
    pub fn coeff(&self, e: Exp) -> Result<C, SeriesError> {
        if e >= self.trunc {
            return Err(SeriesError::BeyondTruncation);
        }
        // e = k/grid for integer k, else the coefficient is zero by grid.
        let scaled = e * Exp::from_integer(self.grid);
        if !scaled.is_integer() {
            return Ok(C::zero());
        }
        Ok(self.coeffs.get(&scaled.to_integer()).cloned().unwrap_or_else(C::zero))
    }

    /// Coefficient at the integer exponent `e`.
    pub fn coeff_int(&self, e: i64) -> Result<C, SeriesError> {
        self.coeff(Exp::from_integer(e))
    }

    /// Refine the grid to `new_grid`, which must be a multiple of the current
    /// grid.
    pub fn with_grid(&self, new_grid: i64) -> Self {
        assert!(new_grid >= 1 && new_grid % self.grid == 0, "grid must refine");
        if new_grid == self.grid {
            return self.clone();
        }
        let f = new_grid / self.grid;
        let coeffs = self.coeffs.iter().map(|(k, c)| (k * f, c.clone())).collect();
        FracSeries { grid: new_grid, coeffs, trunc: self.trunc }
    }

    /// Put two series on their common (lcm) grid.
    fn unified(a: &Self, b: &Self) -> (Self, Self) {
        let g = a.grid.lcm(&b.grid);
        (a.with_grid(g), b.with_grid(g))
    }

    /// Restrict the truncation to `min(trunc, t)`, dropping terms beyond it.
    pub fn truncate_to(&self, t: Exp) -> Self {
        if t >= self.trunc {
            return self.clone();
        }
        let coeffs = self
            .coeffs
            .iter()
            .filter(|(k, _)| Exp::new(**k, self.grid) < t)
            .map(|(k, c)| (*k, c.clone()))
            .collect();
        FracSeries { grid: self.grid, coeffs, trunc: t }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let (a, b) = Self::unified(self, rhs);
        let trunc = a.trunc.min(b.trunc);
        let mut out = Self::zero(a.grid, trunc);
        for (k, c) in a.coeffs.iter().chain(b.coeffs.iter()) {
            if Exp::new(*k, a.grid) < trunc {
                out.add_term(*k, c.clone());
            }
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        let coeffs = self.coeffs.iter().map(|(k, c)| (*k, c.neg_ref())).collect();
        FracSeries { grid: self.grid, coeffs, trunc: self.trunc }
    }

    /// Multiply every coefficient by `c`.
    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero(self.grid, self.trunc);
        }
        let coeffs = self.coeffs.iter().map(|(k, v)| (*k, v.mul_ref(c))).collect();
        FracSeries { grid: self.grid, coeffs, trunc: self.trunc }
    }

    /// Exact product with sound truncation propagation.
    ///
    /// If `a` is exact below `Ta` with terms no lower than `va`, and likewise
    /// for `b`, the product is exact below `min(Ta + vb, Tb + va)`.
    pub fn mul(&self, rhs: &Self) -> Self {
        let (a, b) = Self::unified(self, rhs);
        let trunc = (a.trunc + b.lower_bound()).min(b.trunc + a.lower_bound());
        let mut out = Self::zero(a.grid, trunc);
        for (ka, ca) in &a.coeffs {
            for (kb, cb) in &b.coeffs {
                let k = ka + kb;
                if Exp::new(k, a.grid) < trunc {
                    out.add_term(k, ca.mul_ref(cb));
                }
            }
        }
        out
    }

    /// Integer power, with negative powers via inversion.
    pub fn pow(&self, n: i64) -> Result<Self, SeriesError> {
        if n == 0 {
            return Ok(Self::one(self.grid, self.trunc));
        }
        let base = if n < 0 { self.inv()? } else { self.clone() };
        let mut e = n.unsigned_abs();
        let mut acc: Option<Self> = None;
        let mut sq = base;
        loop {
            if e & 1 == 1 {
                acc = Some(match acc {
                    None => sq.clone(),
                    Some(r) => r.mul(&sq),
                });
            }
            e >>= 1;
            if e == 0 {
                break;
            }
            sq = sq.mul(&sq);
        }
        Ok(acc.expect("n != 0"))
    }

    /// Largest key strictly below the truncation exponent `t` on this grid.
    fn key_below(&self, t: Exp) -> i64 {
        // k < t*grid  <=>  k <= ceil(t*grid) - 1
        let p = *t.numer();
        let q = *t.denom();
        Integer::div_ceil(&(p * self.grid), &q) - 1
    }

    /// Multiplicative inverse.
    ///
    /// The leading exponent of the result is the negation of the input's, and
    /// the truncation drops to `trunc − 2·v` where `v` is the input's leading
    /// exponent.
    pub fn inv(&self) -> Result<Self, SeriesError> {
        let (&k0, c0) = self.coeffs.iter().next().ok_or(SeriesError::ZeroLeadingTerm)?;
        let v = Exp::new(k0, self.grid);
        let out_trunc = self.trunc - v - v;
        // Dense recursion over relative slots j: b[0] = 1/a[0],
        // b[j] = -1/a[0] * sum_{i=1..j} a[i] b[j-i], where a[j] is the
        // coefficient at key k0 + j.
        let jmax = self.key_below(self.trunc) - k0;
        let c0_inv = c0.inv_ref();
        let mut b: Vec<C> = Vec::with_capacity(jmax.max(0) as usize + 1);
        b.push(c0_inv.clone());
        for j in 1..=jmax {
            let mut acc = C::zero();
            for (ki, ai) in self.coeffs.range((k0 + 1)..=(k0 + j)) {
                let i = ki - k0;
                let bj = &b[(j - i) as usize];
                if !bj.is_zero() {
                    acc = acc.add_ref(&ai.mul_ref(bj));
                }
            }
            b.push(c0_inv.neg_ref().mul_ref(&acc));
        }
        let mut out = Self::zero(self.grid, out_trunc);
        for (j, c) in b.into_iter().enumerate() {
            let k = j as i64 - k0;
            if Exp::new(k, self.grid) < out_trunc {
                out.add_term(k, c);
            }
        }
        Ok(out)
    }

    /// Logarithm of a series with constant term 1 and no negative exponents.
    /// `exp0(log1(a)) = a` up to truncation.
    pub fn log1(&self) -> Result<Self, SeriesError> {
        if self.trunc <= Exp::zero() {
            return Err(SeriesError::BadConstantTerm);
        }
        match self.coeffs.iter().next() {
            Some((&0, c)) if *c == C::one() => {}
            _ => return Err(SeriesError::BadConstantTerm),
        }
        // u[j] = a[j] - sum_{0<i<j} (i/j) u[i] a[j-i]
        let jmax = self.key_below(self.trunc);
        let mut u: Vec<C> = vec![C::zero(); jmax as usize + 1];
        for j in 1..=jmax {
            let mut acc = self.coeffs.get(&j).cloned().unwrap_or_else(C::zero);
            for i in 1..j {
                if u[i as usize].is_zero() {
                    continue;
                }
                if let Some(a) = self.coeffs.get(&(j - i)) {
                    let w = C::from_rat(&Rat::new(BigInt::from(i), BigInt::from(j)));
                    acc = acc.sub_ref(&w.mul_ref(&u[i as usize]).mul_ref(a));
                }
            }
            u[j as usize] = acc;
        }
        let mut out = Self::zero(self.grid, self.trunc);
        for (j, c) in u.into_iter().enumerate() {
            out.add_term(j as i64, c);
        }
        Ok(out)
    }

    /// Exponential of a series with zero constant term and no negative
    /// exponents. `log1(exp0(b)) = b` up to truncation.
    pub fn exp0(&self) -> Result<Self, SeriesError> {
        if self.trunc <= Exp::zero() {
            return Err(SeriesError::BadConstantTerm);
        }
        if let Some((&k, _)) = self.coeffs.iter().next() {
            if k <= 0 {
                return Err(SeriesError::BadConstantTerm);
            }
        }
        // b[0] = 1; b[j] = (1/j) sum_{i=1..j} i a[i] b[j-i]
        let jmax = self.key_below(self.trunc);
        let mut b: Vec<C> = vec![C::zero(); jmax as usize + 1];
        b[0] = C::one();
        for j in 1..=jmax {
            let mut acc = C::zero();
            for (ki, ai) in self.coeffs.range(1..=j) {
                let i = *ki;
                let bji = &b[(j - i) as usize];
                if bji.is_zero() {
                    continue;
                }
                let w = C::from_rat(&Rat::new(BigInt::from(i), BigInt::from(j)));
                acc = acc.add_ref(&w.mul_ref(ai).mul_ref(bji));
            }
            b[j as usize] = acc;
        }
        let mut out = Self::zero(self.grid, self.trunc);
        for (j, c) in b.into_iter().enumerate() {
            out.add_term(j as i64, c);
        }
        Ok(out)
    }

    /// The substitution `q ↦ −(−q)^k`, i.e. `c·q^e ↦ c·(−1)^{(k+1)e}·q^{ke}`.
    ///
    /// Requires grid 1. The truncation scales by `k`.
    pub fn substitute_cover(&self, k: i64) -> Result<Self, SeriesError> {
        assert!(k >= 1, "cover index must be positive");
        if self.grid != 1 {
            return Err(SeriesError::FractionalExponent);
        }
        let trunc = self.trunc * Exp::from_integer(k);
        let mut out = Self::zero(1, trunc);
        for (e, c) in &self.coeffs {
            let sign_neg = ((k + 1) * e).rem_euclid(2) == 1;
            let c = if sign_neg { c.neg_ref() } else { c.clone() };
            out.add_term(k * e, c);
        }
        Ok(out)
    }

    /// Map coefficients into another ring.
    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> FracSeries<D> {
        let coeffs = self
            .coeffs
            .iter()
            .filter_map(|(k, c)| {
                let d = f(c);
                if d.is_zero() {
                    None
                } else {
                    Some((*k, d))
                }
            })
            .collect();
        FracSeries { grid: self.grid, coeffs, trunc: self.trunc }
    }
}

/// Semantic equality: same truncation and the same coefficients on the common
/// grid refinement.
impl<C: Coeff> PartialEq for FracSeries<C> {
    fn eq(&self, other: &Self) -> bool {
        if self.trunc != other.trunc {
            return false;
        }
        let (a, b) = Self::unified(self, other);
        a.coeffs == b.coeffs
    }
}

impl<C: Coeff> fmt::Display for FracSeries<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            write!(f, "0")?;
        } else {
            for (i, (k, c)) in self.coeffs.iter().enumerate() {
                if i > 0 {
                    write!(f, " + ")?;
                }
                if *k == 0 {
                    write!(f, "({c})")?;
                } else if self.grid == 1 {
                    write!(f, "({c})*q^{k}")?;
                } else {
                    write!(f, "({c})*q^({}/{})", k, self.grid)?;
                }
            }
        }
        write!(f, " + O(q^{})", self.trunc)
    }
}

/// Generalized binomial coefficient `C(e, k)` for integer `e` (possibly
/// negative) and `k ≥ 0`, as an exact big integer.
pub fn binomial_big(e: i64, k: u64) -> BigInt {
    let mut num = BigInt::one();
    for i in 0..k {
        num *= BigInt::from(e) - BigInt::from(i);
    }
    let mut den = BigInt::one();
    for i in 2..=k {
        den *= BigInt::from(i);
    }
    let (q, r) = num.div_rem(&den);
    debug_assert!(r.is_zero(), "binomial coefficient must be integral");
    q
}

/// Expansion of `∏_{n≥1} (1−qⁿ)^{e(n)}` exactly through `q^{order−1}`.
///
/// Factors with `n ≥ order` contribute nothing and are skipped.
pub fn infinite_product(order: i64, exponent_of: impl Fn(i64) -> i64) -> FracSeries<Rat> {
    assert!(order >= 0, "order must be nonnegative");
    let trunc = Exp::from_integer(order);
    let mut acc = FracSeries::<Rat>::one(1, trunc);
    for n in 1..order {
        let e = exponent_of(n);
        if e == 0 {
            continue;
        }
        // (1 - q^n)^e = sum_k C(e,k) (-1)^k q^{nk}
        let mut terms = Vec::new();
        let mut k = 0u64;
        while (k as i64) * n < order {
            let mut c = binomial_big(e, k);
            if k % 2 == 1 {
                c = -c;
            }
            terms.push((k as i64 * n, Rat::from_integer(c)));
            k += 1;
        }
        let factor = FracSeries::from_integer_terms(trunc, terms);
        acc = acc.mul(&factor);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{rat, ratio};

    fn t(n: i64) -> Exp {
        Exp::from_integer(n)
    }

    #[test]
    fn mul_difference_of_squares() {
        let a = FracSeries::from_integer_terms(t(5), [(0, rat(1)), (1, rat(1))]);
        let b = FracSeries::from_integer_terms(t(5), [(0, rat(1)), (1, rat(-1))]);
        let p = a.mul(&b);
        assert_eq!(p.coeff_int(0).unwrap(), rat(1));
        assert_eq!(p.coeff_int(1).unwrap(), rat(0));
        assert_eq!(p.coeff_int(2).unwrap(), rat(-1));
    }

    #[test]
    fn mul_identity() {
        let a = FracSeries::from_integer_terms(t(7), [(-2, rat(3)), (0, rat(5)), (4, rat(-1))]);
        let one = FracSeries::one(1, t(7));
        assert_eq!(a.mul(&one), a.truncate_to(t(5)));
        // trunc of a*1: min(7 + 0, 7 + (-2)) = 5
        assert_eq!(a.mul(&one).truncation(), t(5));
    }

    #[test]
    fn theta_square_on_eighths_grid() {
        // A = sum_{n in Z} q^{n^2/8}; A^2 through q^{1/2} by brute-force
        // convolution over pairs (n, m) with n^2 + m^2 < 4.
        let trunc = Exp::new(1, 2);
        let mut a = FracSeries::<Rat>::zero(8, trunc);
        for n in -3i64..=3 {
            if Exp::new(n * n, 8) < trunc {
                a = a.add(&FracSeries::monomial(8, n * n, rat(1), trunc));
            }
        }
        let mut expected = std::collections::BTreeMap::new();
        for n in -3i64..=3 {
            for m in -3i64..=3 {
                let k = n * n + m * m;
                if Exp::new(k, 8) < trunc {
                    *expected.entry(k).or_insert(0i64) += 1;
                }
            }
        }
        let sq = a.mul(&a);
        assert_eq!(sq.truncation(), trunc);
        for (k, v) in expected {
            assert_eq!(sq.coeff(Exp::new(k, 8)).unwrap(), rat(v), "at q^{{{k}/8}}");
        }
        // 1 + 4q^{1/8} + 4q^{2/8}
        assert_eq!(sq.coeff(Exp::new(0, 8)).unwrap(), rat(1));
        assert_eq!(sq.coeff(Exp::new(1, 8)).unwrap(), rat(4));
        assert_eq!(sq.coeff(Exp::new(2, 8)).unwrap(), rat(4));
    }

    #[test]
    fn inv_geometric() {
        let a = FracSeries::from_integer_terms(t(6), [(0, rat(1)), (1, rat(-1))]);
        let inv = a.inv().unwrap();
        for e in 0..6 {
            assert_eq!(inv.coeff_int(e).unwrap(), rat(1));
        }
        assert_eq!(a.mul(&inv).coeff_int(0).unwrap(), rat(1));
        assert_eq!(a.mul(&inv).coeff_int(3).unwrap(), rat(0));
    }

    #[test]
    fn inv_monomial() {
        let q = FracSeries::<Rat>::var(t(6));
        let inv = q.inv().unwrap();
        assert_eq!(inv.coeff_int(-1).unwrap(), rat(1));
        assert_eq!(inv.num_terms(), 1);
        assert_eq!(inv.min_exp(), Some(t(-1)));
    }

    #[test]
    fn inv_laurent_long_division() {
        // inv(q + 2 + q^{-1}) = q/(1+q)^2 = q - 2q^2 + 3q^3 - 4q^4 + ...
        let a = FracSeries::from_integer_terms(t(5), [(-1, rat(1)), (0, rat(2)), (1, rat(1))]);
        let inv = a.inv().unwrap();
        // trunc = 5 - 2*(-1) = 7
        assert_eq!(inv.truncation(), t(7));
        for e in 1..7 {
            let sign = if e % 2 == 1 { 1 } else { -1 };
            assert_eq!(inv.coeff_int(e).unwrap(), rat(sign * e), "at q^{e}");
        }
        assert_eq!(inv.coeff_int(0).unwrap(), rat(0));
    }

    #[test]
    fn inv_errors_on_zero() {
        let z = FracSeries::<Rat>::zero(1, t(4));
        assert_eq!(z.inv().unwrap_err(), SeriesError::ZeroLeadingTerm);
    }

    #[test]
    fn log_of_one_is_zero() {
        let one = FracSeries::<Rat>::one(1, t(8));
        assert!(one.log1().unwrap().is_zero_to_trunc());
    }

    #[test]
    fn exp_of_q() {
        let q = FracSeries::<Rat>::var(t(3));
        let e = q.exp0().unwrap();
        assert_eq!(e.coeff_int(0).unwrap(), rat(1));
        assert_eq!(e.coeff_int(1).unwrap(), rat(1));
        assert_eq!(e.coeff_int(2).unwrap(), ratio(1, 2));
    }

    #[test]
    fn log_quadratic() {
        // log(1 + 24q + 324q^2) = 24q + (324 - 288)q^2 + O(q^3)
        let a = FracSeries::from_integer_terms(t(3), [(0, rat(1)), (1, rat(24)), (2, rat(324))]);
        let l = a.log1().unwrap();
        assert_eq!(l.coeff_int(1).unwrap(), rat(24));
        assert_eq!(l.coeff_int(2).unwrap(), rat(36));
    }

    #[test]
    fn log_exp_preconditions() {
        let q = FracSeries::<Rat>::var(t(4));
        assert_eq!(q.log1().unwrap_err(), SeriesError::BadConstantTerm);
        let one = FracSeries::<Rat>::one(1, t(4));
        assert_eq!(one.exp0().unwrap_err(), SeriesError::BadConstantTerm);
        let laurent = FracSeries::from_integer_terms(t(4), [(-1, rat(1)), (0, rat(1))]);
        assert_eq!(laurent.log1().unwrap_err(), SeriesError::BadConstantTerm);
    }

    #[test]
    fn infinite_product_yau_zaslow_head() {
        let s = infinite_product(5, |_| -24);
        let expect = [1, 24, 324, 3200, 25650];
        for (e, v) in expect.iter().enumerate() {
            assert_eq!(s.coeff_int(e as i64).unwrap(), rat(*v), "at q^{e}");
        }
    }

    #[test]
    fn infinite_product_trivial() {
        let s = infinite_product(9, |_| 0);
        assert_eq!(s.coeff_int(0).unwrap(), rat(1));
        assert_eq!(s.num_terms(), 1);
    }

    #[test]
    fn infinite_product_partitions() {
        // 1/prod(1-q^n) generates partition numbers; brute-force count below.
        fn partitions(n: usize) -> i64 {
            fn count(n: i64, max: i64) -> i64 {
                if n == 0 {
                    return 1;
                }
                (1..=max.min(n)).map(|p| count(n - p, p)).sum()
            }
            count(n as i64, n as i64)
        }
        let s = infinite_product(6, |_| -1);
        for n in 0..6 {
            assert_eq!(s.coeff_int(n as i64).unwrap(), rat(partitions(n)), "p({n})");
        }
    }

    #[test]
    fn substitute_cover_identity_and_signs() {
        let a = FracSeries::from_integer_terms(t(5), [(1, rat(1)), (2, rat(-1))]);
        assert_eq!(a.substitute_cover(1).unwrap(), a);
        // k = 2 on q - q^2: -q^2 - q^4
        let s2 = a.substitute_cover(2).unwrap();
        assert_eq!(s2.coeff_int(2).unwrap(), rat(-1));
        assert_eq!(s2.coeff_int(4).unwrap(), rat(-1));
        assert_eq!(s2.truncation(), t(10));
        // k = 3 on q^{-1}: q^{-3} with positive sign
        let b = FracSeries::from_integer_terms(t(2), [(-1, rat(1))]);
        let s3 = b.substitute_cover(3).unwrap();
        assert_eq!(s3.coeff_int(-3).unwrap(), rat(1));
        // fractional grids are rejected
        let frac = FracSeries::<Rat>::monomial(2, 1, rat(1), t(3));
        assert_eq!(frac.substitute_cover(2).unwrap_err(), SeriesError::FractionalExponent);
    }

    #[test]
    fn coeff_beyond_truncation() {
        let a = FracSeries::from_integer_terms(t(2), [(0, rat(1)), (1, rat(24))]);
        assert_eq!(a.coeff_int(1).unwrap(), rat(24));
        assert_eq!(a.coeff_int(2).unwrap_err(), SeriesError::BeyondTruncation);
    }

    #[test]
    fn grid_unification_in_mixed_ops() {
        let a = FracSeries::<Rat>::monomial(2, 1, rat(1), t(3)); // q^{1/2}
        let b = FracSeries::<Rat>::monomial(3, 1, rat(1), t(3)); // q^{1/3}
        let p = a.mul(&b);
        assert_eq!(p.grid(), 6);
        assert_eq!(p.coeff(Exp::new(5, 6)).unwrap(), rat(1));
    }
}
