//! The two-variable BPS generating function for K3 surfaces and extraction of
//! the integer table `r_{g,h}` by triangular decomposition in the
//! `(y^{1/2} − y^{−1/2})^{2g}` basis.
//!
//! The generating identity is
//!
//! ```text
//! Σ_{g,h} (−1)^g r_{g,h} (y^{1/2} − y^{−1/2})^{2g} q^h
//!     = ∏_{n≥1} (1−qⁿ)^{−20} (1−yqⁿ)^{−2} (1−y^{−1}qⁿ)^{−2},
//! ```
//!
//! whose genus-0 specialization is `Σ_h r_{0,h} q^h = ∏ (1−qⁿ)^{−24}`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use qseries::{infinite_product, rat, BiSeries, FracSeries, LaurentPolyY, Rat};

/// Errors from BPS table extraction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum KkvError {
    /// Input to the basis decomposition is not symmetric under `y ↔ y^{−1}`
    /// or has half-integer support.
    NotSymmetric,
    /// A decomposition coefficient failed to be an integer. Indicates an
    /// implementation bug, never valid input.
    IntegralityViolation { g: i64, h: i64 },
    /// A structural law of the table failed. Indicates an implementation bug.
    InvariantViolation { g: i64, h: i64, detail: String },
}

impl fmt::Display for KkvError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KkvError::NotSymmetric => write!(f, "polynomial is not symmetric in y <-> 1/y"),
            KkvError::IntegralityViolation { g, h } => {
                write!(f, "non-integral BPS value at (g={g}, h={h})")
            }
            KkvError::InvariantViolation { g, h, detail } => {
                write!(f, "table invariant failed at (g={g}, h={h}): {detail}")
            }
        }
    }
}

impl std::error::Error for KkvError {}

/// Integer table of BPS counts `r_{g,h}` for `0 ≤ g`, `0 ≤ h ≤ hmax`.
///
/// Lookups outside the stored range return 0, which encodes both the
/// vanishing for `g > h` and the convention `r_{g,m,h} = 0` for `h < 0`.
/// Because the counts depend on a class only through its norm square, this
/// table is also the unique source for `r_{g,m,h}` regardless of the
/// divisibility `m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BpsTable {
    entries: BTreeMap<(i64, i64), BigInt>,
    hmax: i64,
}

impl BpsTable {
    /// Assemble a table from explicit entries (zeros are dropped).
    ///
    /// This bypasses the structural checks of [`extract_r_table`]; it exists
    /// for synthetic inputs in tests and conversions, not for K3 data.
    pub fn from_entries(
        hmax: i64,
        entries: impl IntoIterator<Item = ((i64, i64), BigInt)>,
    ) -> Self {
        let entries = entries.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        BpsTable { entries, hmax }
    }

    pub fn hmax(&self) -> i64 {
        self.hmax
    }

    /// `r_{g,h}`, with 0 outside the stored range.
    pub fn get(&self, g: i64, h: i64) -> BigInt {
        self.entries.get(&(g, h)).cloned().unwrap_or_else(BigInt::zero)
    }

    /// Same lookup as a rational.
    pub fn get_rat(&self, g: i64, h: i64) -> Rat {
        Rat::from_integer(self.get(g, h))
    }

    /// Stored entries in `(g, h)` order (nonzero values only).
    pub fn entries(&self) -> impl Iterator<Item = (i64, i64, &BigInt)> + '_ {
        self.entries.iter().map(|((g, h), r)| (*g, *h, r))
    }

    /// Largest genus with a stored entry (0 for an empty table). Extraction
    /// tables never exceed the diagonal, but synthetic tables may.
    pub fn max_genus(&self) -> i64 {
        self.entries.keys().map(|(g, _)| *g).max().unwrap_or(0)
    }

    /// True when `h` is covered by this table.
    pub fn covers(&self, h: i64) -> bool {
        h <= self.hmax
    }
}

/// The right side of the generating identity through `q^{order−1}`.
///
/// The `q^h` coefficient is a symmetric Laurent polynomial in `y` with integer
/// exponents in `[−h, h]`; no `y`-truncation is involved because each factor
/// `(1 ∓ y^{±1}qⁿ)^{−2}` moves the `y`-exponent no faster than the `q`-order.
pub fn kkv_product(order: i64) -> BiSeries {
    assert!(order >= 1, "order must be at least 1");
    let mut acc = BiSeries::one(order);
    for n in 1..order {
        let f20 = BiSeries::binomial_factor(&rat(-1), 0, n, -20, order);
        let fy = BiSeries::binomial_factor(&rat(-1), 1, n, -2, order);
        let fyinv = BiSeries::binomial_factor(&rat(-1), -1, n, -2, order);
        acc = acc.mul(&f20).mul(&fy).mul(&fyinv);
    }
    acc
}

/// Decompose a symmetric Laurent polynomial with integer `y`-exponents in the
/// basis `(y^{1/2} − y^{−1/2})^{2g}`: returns `c_0..c_G` with
/// `p = Σ_g c_g (y^{1/2}−y^{−1/2})^{2g}` and `G` the top exponent of `p`.
///
/// The basis element for `g` has top term `y^g` with coefficient 1, so the
/// decomposition is strictly triangular from the highest exponent down.
pub fn sin_basis_decompose(p: &LaurentPolyY) -> Result<Vec<Rat>, KkvError> {
    if !p.has_integer_support() || !p.is_symmetric() {
        return Err(KkvError::NotSymmetric);
    }
    let top = match p.support_half() {
        None => return Ok(vec![Rat::zero()]),
        Some((_, hi)) => hi / 2,
    };
    let mut rest = p.clone();
    let mut coeffs = vec![Rat::zero(); (top + 1) as usize];
    for g in (0..=top).rev() {
        let c = rest.get_int(g);
        if !c.is_zero() {
            coeffs[g as usize] = c.clone();
            rest = rest.sub(&LaurentPolyY::sin_pow(g).scale(&c));
        }
    }
    debug_assert!(rest.is_zero(), "triangular decomposition must terminate exactly");
    Ok(coeffs)
}

/// Extract `r_{g,h}` for `h ≤ hmax` from the generating product:
/// `r_{g,h} = (−1)^g c_g` where `c` decomposes the `q^h` coefficient.
///
/// All structural laws are verified before the table is returned:
/// integrality, `r_{g,h} = 0` for `g > h`, and `r_{g,g} = (−1)^g (g+1)`.
pub fn extract_r_table(hmax: i64) -> Result<BpsTable, KkvError> {
    assert!(hmax >= 0);
    let product = kkv_product(hmax + 1);
    let mut entries = BTreeMap::new();
    for h in 0..=hmax {
        let p = product.coeff(h).expect("within truncation");
        let coeffs = sin_basis_decompose(&p)?;
        if coeffs.len() as i64 > h + 1 {
            return Err(KkvError::InvariantViolation {
                g: coeffs.len() as i64 - 1,
                h,
                detail: "nonzero value above the diagonal".into(),
            });
        }
        for (g, c) in coeffs.into_iter().enumerate() {
            let g = g as i64;
            let signed = if g % 2 == 0 { c } else { -c };
            if !signed.denom().is_one() {
                return Err(KkvError::IntegralityViolation { g, h });
            }
            let r = signed.to_integer();
            if g == h {
                let expect = {
                    let v = BigInt::from(g + 1);
                    if g % 2 == 0 {
                        v
                    } else {
                        -v
                    }
                };
                if r != expect {
                    return Err(KkvError::InvariantViolation {
                        g,
                        h,
                        detail: format!("diagonal value {r}, expected {expect}"),
                    });
                }
            }
            if !r.is_zero() {
                entries.insert((g, h), r);
            }
        }
    }
    Ok(BpsTable { entries, hmax })
}

/// The genus-0 specialization `∏ (1−qⁿ)^{−24}`, exact through `q^{order−1}`;
/// equal to the `g = 0` row of [`extract_r_table`].
pub fn yau_zaslow(order: i64) -> FracSeries<Rat> {
    infinite_product(order, |_| -24)
}

/// Reassemble `Σ_g (−1)^g r_{g,h} (y^{1/2}−y^{−1/2})^{2g}` from a table row.
pub fn reassemble_row(table: &BpsTable, h: i64) -> LaurentPolyY {
    let mut acc = LaurentPolyY::zero();
    for g in 0..=h.max(0) {
        let r = table.get_rat(g, h);
        if r.is_zero() {
            continue;
        }
        let signed = if g % 2 == 0 { r } else { -r };
        acc = acc.add(&LaurentPolyY::sin_pow(g).scale(&signed));
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use qseries::ratio;

    #[test]
    fn product_low_coefficients() {
        let p = kkv_product(3);
        assert_eq!(p.coeff(0).unwrap(), LaurentPolyY::one());
        // Oracle for the q^1 coefficient: first-order terms of each factor,
        // multiplied by hand: 20 from (1-q)^{-20}, 2y and 2y^{-1} from the
        // squared factors.
        let c1 = p.coeff(1).unwrap();
        assert_eq!(c1.get_int(-1), rat(2));
        assert_eq!(c1.get_int(0), rat(20));
        assert_eq!(c1.get_int(1), rat(2));
        assert_eq!(c1.support_half(), Some((-2, 2)));
        // y = 1 specialization gives r_{0,1} = 24
        assert_eq!(c1.eval_one(), rat(24));
    }

    #[test]
    fn product_coefficient_support_and_symmetry() {
        let p = kkv_product(6);
        for h in 0..6 {
            let c = p.coeff(h).unwrap();
            assert!(c.is_symmetric());
            assert!(c.has_integer_support());
            if let Some((lo, hi)) = c.support_half() {
                assert!(lo >= -2 * h && hi <= 2 * h, "support of q^{h} within [-h, h]");
            }
        }
    }

    #[test]
    fn decompose_basics() {
        assert_eq!(sin_basis_decompose(&LaurentPolyY::one()).unwrap(), vec![rat(1)]);
        assert_eq!(
            sin_basis_decompose(&LaurentPolyY::sin_pow(1)).unwrap(),
            vec![rat(0), rat(1)]
        );
        // 2y^{-1} + 20 + 2y = 24 + 2(y - 2 + y^{-1})
        let mut p = LaurentPolyY::constant(rat(20));
        p = p.add(&LaurentPolyY::term_int(1, rat(2)));
        p = p.add(&LaurentPolyY::term_int(-1, rat(2)));
        assert_eq!(sin_basis_decompose(&p).unwrap(), vec![rat(24), rat(2)]);
        // rational coefficients survive decomposition
        let q = LaurentPolyY::sin_pow(2).scale(&ratio(1, 3));
        assert_eq!(
            sin_basis_decompose(&q).unwrap(),
            vec![rat(0), rat(0), ratio(1, 3)]
        );
    }

    #[test]
    fn decompose_rejects_asymmetric() {
        let p = LaurentPolyY::term_int(1, rat(1));
        assert_eq!(sin_basis_decompose(&p).unwrap_err(), KkvError::NotSymmetric);
    }

    #[test]
    fn golden_table_entries() {
        let table = extract_r_table(4).unwrap();
        assert_eq!(table.get(0, 0), BigInt::from(1));
        assert_eq!(table.get(0, 1), BigInt::from(24));
        assert_eq!(table.get(1, 1), BigInt::from(-2));
        assert_eq!(table.get(2, 4), BigInt::from(1401));
        assert_eq!(table.get(3, 4), BigInt::from(-126));
        assert_eq!(table.get(4, 4), BigInt::from(5));
        // vanishing above the diagonal
        assert_eq!(table.get(3, 2), BigInt::zero());
    }

    #[test]
    fn decompose_reassemble_roundtrip() {
        let table = extract_r_table(5).unwrap();
        let product = kkv_product(6);
        for h in 0..=5 {
            assert_eq!(reassemble_row(&table, h), product.coeff(h).unwrap(), "row {h}");
        }
    }

    #[test]
    fn genus_zero_row_is_yau_zaslow() {
        let table = extract_r_table(6).unwrap();
        let yz = yau_zaslow(7);
        for h in 0..=6 {
            assert_eq!(Rat::from_integer(table.get(0, h)), yz.coeff_int(h).unwrap());
        }
    }
}
