//! The Kawai-Yoshioka Euler-characteristic series, the signed residue series
//! `t·I_h`, and the consistency check tying it back to the BPS table.
//!
//! The generating function of Euler characteristics of stable-pair moduli on
//! a K3 surface is
//!
//! ```text
//! Σ_{h≥0} Σ_{n≥1−h} e(P_n(S,h)) yⁿ q^h
//!   = (√y − 1/√y)^{−2} ∏_{n≥1} (1−qⁿ)^{−20}(1−yqⁿ)^{−2}(1−y^{−1}qⁿ)^{−2},
//! ```
//!
//! with the prefactor expanded in ascending powers of `y` as `Σ_{n≥1} n yⁿ`.
//! The signed version replaces `y` by `−y` in the prefactor and flips the
//! sign of the `y`-factors:
//!
//! ```text
//! Σ_h t·I_h(y) q^h
//!   = −(√−y − 1/√−y)^{−2} ∏ (1−qⁿ)^{−20}(1+yqⁿ)^{−2}(1+y^{−1}qⁿ)^{−2},
//! ```
//!
//! equivalently `t·I_h = Σ_n (−1)^{n−1} e(P_n(S,h)) yⁿ`. Both routes are
//! computed here and compared. The overall `1/t` residue prefactor is
//! normalized away: all stored values are `t·I_h`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use qseries::{rat, BiSeries, Exp, FracSeries, LaurentPolyY, Rat};

use crate::kkv::{reassemble_row, BpsTable};
use crate::potentials::{bps_from_pairs, PairsPotential};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum KyError {
    /// The requested `y`-window is too small to certify the comparison.
    WindowTooSmall,
}

impl fmt::Display for KyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KyError::WindowTooSmall => write!(f, "y-window too small for the cross-check"),
        }
    }
}

impl std::error::Error for KyError {}

/// Table of Euler characteristics `e(P_n(S,h))`.
///
/// The series starts at `n = 1−h`: entries with `n < 1−h` vanish.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct KyTable {
    entries: BTreeMap<(i64, i64), BigInt>,
}

impl KyTable {
    /// `e(P_n(S,h))`, zero outside the stored range.
    pub fn get(&self, n: i64, h: i64) -> BigInt {
        self.entries.get(&(n, h)).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn entries(&self) -> impl Iterator<Item = (i64, i64, &BigInt)> + '_ {
        self.entries.iter().map(|((n, h), e)| (*n, *h, e))
    }
}

/// The signed residue series `t·I_h` as a Laurent series in `y` (grid 1),
/// lowest exponent `1−h`.
#[derive(Clone, Debug, PartialEq)]
pub struct ISeries {
    pub h: i64,
    pub series: FracSeries<Rat>,
}

/// The product part `∏ (1−qⁿ)^{−20}(s·yqⁿ-factor)^{−2}(s·y^{−1}qⁿ-factor)^{−2}`
/// with sign `s = −1` for the unsigned series and `s = +1` for the signed one.
///
/// The `q^h` coefficient is exact with `y`-support inside `[−h, h]`; no
/// `y`-truncation is involved at this stage.
fn factor_product(sign: i64, q_order: i64) -> BiSeries {
    let s = rat(sign);
    let mut acc = BiSeries::one(q_order);
    for n in 1..q_order {
        let f20 = BiSeries::binomial_factor(&rat(-1), 0, n, -20, q_order);
        let fy = BiSeries::binomial_factor(&s, 1, n, -2, q_order);
        let fyinv = BiSeries::binomial_factor(&s, -1, n, -2, q_order);
        acc = acc.mul(&f20).mul(&fy).mul(&fyinv);
    }
    acc
}

/// Ascending expansion of `y/(1 − s·y)²  = Σ_{n≥1} n sⁿ⁻¹ yⁿ` through
/// `y^{order}`; `s = 1` gives the prefactor `(√y−1/√y)^{−2}`, `s = −1` the
/// signed prefactor `−(√−y−1/√−y)^{−2} = y/(1+y)²`.
fn prefactor(sign: i64, order: i64) -> LaurentPolyY {
    let mut p = LaurentPolyY::zero();
    for n in 1..=order {
        let c = if sign < 0 && n % 2 == 0 { -n } else { n };
        p.add_half(2 * n, rat(c));
    }
    p
}

/// The Euler-characteristic generating series through `q^{q_order−1}`.
///
/// Every `q^h` coefficient is exact for `y`-exponents `≤ y_order` (the
/// prefactor is expanded with a margin of `q_order` to absorb the downward
/// `y`-shifts of the product part) and is truncated there.
pub fn ky_generating(q_order: i64, y_order: i64) -> BiSeries {
    assert!(q_order >= 1 && y_order >= 1);
    let product = factor_product(-1, q_order);
    let pre = prefactor(1, y_order + q_order);
    product.scale_poly(&pre).restrict_y_half(i64::MIN / 2, 2 * y_order)
}

/// Read off the table `e(P_n(S,h))` for `h < q_order`, `n ≤ y_order`.
pub fn ky_table(q_order: i64, y_order: i64) -> KyTable {
    let series = ky_generating(q_order, y_order);
    let mut entries = BTreeMap::new();
    for (h, poly) in series.terms() {
        for (k, c) in poly.terms_half() {
            debug_assert!(k % 2 == 0, "integer y-exponents only");
            debug_assert!(c.denom() == &BigInt::from(1), "Euler numbers are integers");
            entries.insert((k / 2, h), c.to_integer());
        }
    }
    KyTable { entries }
}

/// `t·I_h` exactly through `y^{y_order}`, computed along both routes —
/// the signed product formula and the signed resummation of the
/// Euler-characteristic table — which are asserted to agree.
pub fn i_series(h: i64, y_order: i64) -> ISeries {
    assert!(y_order >= 0);
    if h < 0 {
        // vanishes by convention for negative norm square
        return ISeries { h, series: FracSeries::zero(1, Exp::from_integer(y_order + 1)) };
    }
    let trunc = Exp::from_integer(y_order + 1);

    // route 1: signed product formula
    let product = factor_product(1, h + 1);
    let pre = prefactor(-1, y_order + h + 1);
    let coeff = product.scale_poly(&pre).coeff(h).expect("within truncation");
    let mut series = FracSeries::zero(1, trunc);
    for (k, c) in coeff.terms_half() {
        debug_assert!(k % 2 == 0);
        if Exp::from_integer(k / 2) < trunc {
            series = series.add(&FracSeries::from_integer_terms(trunc, [(k / 2, c.clone())]));
        }
    }

    // route 2: signed resummation of the Euler-characteristic table
    let table = ky_table(h + 1, y_order);
    let mut resummed = FracSeries::zero(1, trunc);
    for (n, hh, e) in table.entries() {
        if hh != h || n > y_order {
            continue;
        }
        let signed = if (n - 1).rem_euclid(2) == 0 { e.clone() } else { -e.clone() };
        resummed =
            resummed.add(&FracSeries::from_integer_terms(trunc, [(n, Rat::from_integer(signed))]));
    }
    assert_eq!(series, resummed, "product route and resummation route must agree at h={h}");

    debug_assert!(series.min_exp().is_none_or(|e| e >= Exp::from_integer(1 - h)));
    ISeries { h, series }
}

/// The rationality witness `t·I_h · (y + 2 + y^{−1})`, which must be a
/// Laurent polynomial: returns the product together with its largest nonzero
/// exponent (all coefficients beyond it vanish through the window).
pub fn rationality_witness(h: i64, y_order: i64) -> (FracSeries<Rat>, Option<i64>) {
    let is = i_series(h, y_order);
    let quad = FracSeries::from_integer_terms(
        Exp::from_integer(y_order + 2),
        [(-1, rat(1)), (0, rat(2)), (1, rat(1))],
    );
    let witness = is.series.mul(&quad);
    let top = witness.terms().last().map(|(e, _)| e.to_integer());
    (witness, top)
}

/// Consistency of the Euler-characteristic series with the BPS table at
/// `q^h`, via both routes:
///
/// 1. `(y^{1/2}−y^{−1/2})² · [q^h] ky_generating` equals
///    `Σ_g (−1)^g r_{g,h} (y^{1/2}−y^{−1/2})^{2g}` on the exact `y`-window;
/// 2. stable-pairs BPS extraction from `t·I_h` (with `y` renamed `q`)
///    reproduces row `h` of the table.
pub fn kkv_cross_check(h: i64, r: &BpsTable, y_order: i64) -> Result<bool, KyError> {
    assert!(r.covers(h), "table must cover h");
    // route 1 window: after multiplying by y - 2 + y^{-1} the product is
    // exact for y-exponents <= y_order - 1; the target polynomial has
    // support [-h, h].
    if y_order - 1 < h + 1 {
        return Err(KyError::WindowTooSmall);
    }
    let ky = ky_generating(h + 1, y_order);
    let sin2 = LaurentPolyY::sin_pow(1);
    let lhs = ky.coeff(h).expect("within truncation").mul(&sin2);
    let target = reassemble_row(r, h);
    // compare on the certified window [-(h+1), y_order - 1]; the target has
    // support [-h, h], so the comparison also certifies vanishing beyond it
    for k in -(h + 1)..=(y_order - 1) {
        if lhs.get_int(k) != target.get_int(k) {
            return Ok(false);
        }
    }

    // route 2: bps extraction from t·I_h renamed to the pairs variable
    let is = i_series(h, y_order);
    let pot = PairsPotential::new(h, vec![is.series]);
    let extracted = bps_from_pairs(&pot, None).map_err(|_| KyError::WindowTooSmall)?;
    for g in 0..=(h + 1) {
        if extracted.get(g, 1, h) != r.get(g, h) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kkv::extract_r_table;

    #[test]
    fn euler_characteristic_low_values() {
        let t = ky_table(2, 6);
        // h = 0 column is the prefactor itself
        assert_eq!(t.get(1, 0), BigInt::from(1));
        assert_eq!(t.get(2, 0), BigInt::from(2));
        // q^1 coefficient: (20 + 2y + 2y^{-1}) * sum n y^n
        assert_eq!(t.get(0, 1), BigInt::from(2));
        assert_eq!(t.get(1, 1), BigInt::from(24));
        // by-hand oracle for e(P_2(S,1)): 2*3 + 20*2 + 2*1 = 48
        assert_eq!(t.get(2, 1), BigInt::from(48));
    }

    #[test]
    fn i_series_h0_and_h1() {
        let i0 = i_series(0, 8);
        for n in 1..=8 {
            let sign = if n % 2 == 1 { 1 } else { -1 };
            assert_eq!(i0.series.coeff_int(n).unwrap(), rat(sign * n));
        }
        let i1 = i_series(1, 8);
        assert_eq!(i1.series.coeff_int(0).unwrap(), rat(-2));
        assert_eq!(i1.series.coeff_int(1).unwrap(), rat(24));
        assert_eq!(i1.series.coeff_int(2).unwrap(), rat(-48));
        assert_eq!(i1.series.coeff_int(3).unwrap(), rat(72));
    }

    #[test]
    fn i_series_negative_h_is_zero() {
        assert!(i_series(-3, 6).series.is_zero_to_trunc());
    }

    #[test]
    fn sign_relation_to_euler_numbers() {
        let h = 2;
        let table = ky_table(h + 1, 9);
        let is = i_series(h, 9);
        for n in (1 - h)..=9 {
            let e = table.get(n, h);
            let signed = if (n - 1).rem_euclid(2) == 0 { e.clone() } else { -e };
            assert_eq!(is.series.coeff_int(n).unwrap(), Rat::from_integer(signed), "n={n}");
        }
    }

    #[test]
    fn witness_is_laurent_polynomial() {
        // t·I_0 · (1+y)^2/y = 1
        let (w0, top0) = rationality_witness(0, 12);
        assert_eq!(w0.coeff_int(0).unwrap(), rat(1));
        assert_eq!(w0.num_terms(), 1);
        assert_eq!(top0, Some(0));
        // t·I_1 · (1+y)^2/y = -2y^{-1} + 20 - 2y
        let (w1, top1) = rationality_witness(1, 12);
        assert_eq!(w1.coeff_int(-1).unwrap(), rat(-2));
        assert_eq!(w1.coeff_int(0).unwrap(), rat(20));
        assert_eq!(w1.coeff_int(1).unwrap(), rat(-2));
        assert_eq!(w1.num_terms(), 3);
        assert_eq!(top1, Some(1));
    }

    #[test]
    fn cross_check_low_rows() {
        let r = extract_r_table(4).unwrap();
        assert!(kkv_cross_check(0, &r, 12).unwrap());
        assert!(kkv_cross_check(1, &r, 12).unwrap());
        assert!(kkv_cross_check(4, &r, 16).unwrap());
    }

    #[test]
    fn cross_check_window_guard() {
        let r = extract_r_table(4).unwrap();
        assert_eq!(kkv_cross_check(4, &r, 4).unwrap_err(), KyError::WindowTooSmall);
    }

    #[test]
    fn cross_check_rejects_uncovered_rows() {
        let r = extract_r_table(2).unwrap();
        assert!(kkv_cross_check(2, &r, 12).unwrap());
        // asking for a row the table does not cover trips the guard
        let short = extract_r_table(1).unwrap();
        let result = std::panic::catch_unwind(|| kkv_cross_check(2, &short, 12));
        assert!(result.is_err());
    }
}
