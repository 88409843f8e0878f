//! Conversion between BPS tables and potentials in both conventions — the
//! Gromov-Witten side (series in `λ`, sine basis) and the stable-pairs side
//! (Laurent series in `q`, `(−q)^d − 2 + (−q)^{−d}` basis) — together with a
//! formal verification of the variable change `−q = e^{iλ}`.
//!
//! The two basis families are tied by the identity
//!
//! ```text
//! (2 sin(dλ/2))^{2g−2} = (−1)^{g−1} ((−q)^d − 2 + (−q)^{−d})^{g−1},
//! ```
//!
//! under `−q = e^{iλ}`, which [`dictionary_check`] verifies coefficient by
//! coefficient with `i` adjoined formally.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use qseries::{factorial_big, i_power, rat, Coeff, Exp, FracSeries, GaussRat, Rat};

use crate::kkv::BpsTable;
use crate::linalg::solve_exact;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PotentialError {
    /// The potential was not expanded far enough for the requested recovery.
    InsufficientOrder,
    /// The coefficient-matching window does not determine all unknowns.
    SingularSystem,
    /// The linear system has no solution: the input is not a finite BPS
    /// combination over the assumed genus range.
    Inconsistent,
    /// A recovered BPS value is not an integer.
    NonIntegral { g: i64, m: i64 },
}

impl fmt::Display for PotentialError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PotentialError::InsufficientOrder => write!(f, "series order too small"),
            PotentialError::SingularSystem => {
                write!(f, "window too small to separate the basis elements")
            }
            PotentialError::Inconsistent => {
                write!(f, "input is not consistent with a finite BPS expansion")
            }
            PotentialError::NonIntegral { g, m } => {
                write!(f, "non-integral BPS value at (g={g}, m={m})")
            }
        }
    }
}

impl std::error::Error for PotentialError {}

/// The `v^{mα}` coefficients of the Gromov-Witten potential for classes
/// proportional to a primitive class of norm square `2h−2`: one series in `λ`
/// per `1 ≤ m ≤ mmax`, with minimal exponent `≥ −2` (only `g = 0`
/// contributes `λ^{−2}`).
#[derive(Clone, Debug, PartialEq)]
pub struct GwPotential {
    pub h: i64,
    coeffs: Vec<FracSeries<Rat>>,
}

impl GwPotential {
    pub fn mmax(&self) -> i64 {
        self.coeffs.len() as i64
    }

    /// The `v^{mα}` coefficient, `1 ≤ m ≤ mmax`.
    pub fn coeff_vm(&self, m: i64) -> &FracSeries<Rat> {
        &self.coeffs[(m - 1) as usize]
    }
}

/// The stable-pairs analogue: one Laurent series in `q` per `m`, with finitely
/// many negative exponents.
#[derive(Clone, Debug, PartialEq)]
pub struct PairsPotential {
    pub h: i64,
    coeffs: Vec<FracSeries<Rat>>,
}

impl PairsPotential {
    pub fn new(h: i64, coeffs: Vec<FracSeries<Rat>>) -> Self {
        PairsPotential { h, coeffs }
    }

    pub fn mmax(&self) -> i64 {
        self.coeffs.len() as i64
    }

    pub fn coeff_vm(&self, m: i64) -> &FracSeries<Rat> {
        &self.coeffs[(m - 1) as usize]
    }
}

/// Integer table of stable-pairs BPS counts `r̃_{g,m,h}`.
///
/// Plain storage; [`PairsBpsTable::check_invariants`] verifies the structural
/// laws (independence of divisibility, and vanishing at `h ≤ 0` except
/// `r̃_{0,1,0} = 1`) where the stored keys make them checkable.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PairsBpsTable {
    entries: BTreeMap<(i64, i64, i64), BigInt>,
}

impl PairsBpsTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, g: i64, m: i64, h: i64, value: BigInt) {
        if value.is_zero() {
            self.entries.remove(&(g, m, h));
        } else {
            self.entries.insert((g, m, h), value);
        }
    }

    pub fn get(&self, g: i64, m: i64, h: i64) -> BigInt {
        self.entries.get(&(g, m, h)).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn entries(&self) -> impl Iterator<Item = (i64, i64, i64, &BigInt)> + '_ {
        self.entries.iter().map(|((g, m, h), v)| (*g, *m, *h, v))
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Check the structural laws on the stored keys: for every pair of
    /// entries sharing `(g, h)` the values agree regardless of `m`, and every
    /// entry with `h ≤ 0` vanishes except `r̃_{0,1,0} = 1`.
    pub fn check_invariants(&self) -> Result<(), String> {
        let mut by_gh: BTreeMap<(i64, i64), &BigInt> = BTreeMap::new();
        for ((g, m, h), v) in &self.entries {
            if *h <= 0 && !(*g == 0 && *m == 1 && *h == 0 && v.is_one()) {
                return Err(format!("nonzero entry at (g={g}, m={m}, h={h})"));
            }
            if let Some(prev) = by_gh.insert((*g, *h), v) {
                if prev != v {
                    return Err(format!(
                        "divisibility dependence at (g={g}, h={h}): {prev} vs {v}"
                    ));
                }
            }
        }
        Ok(())
    }
}

pub fn divisors(m: i64) -> Vec<i64> {
    (1..=m).filter(|d| m % d == 0).collect()
}

/// `(2 sin(dλ/2))^{2g−2}` as an exact series in `λ`.
///
/// This equals `λ^{2g−2} (sin(dλ/2)/(λ/2))^{2g−2}`; for `g = 0` the series is
/// Laurent with leading term `λ^{−2}/d²`.
pub fn sin_factor(g: i64, d: i64, lambda_order: i64) -> FracSeries<Rat> {
    assert!(g >= 0 && d >= 1);
    let trunc = Exp::from_integer(lambda_order + 5);
    let two_sin = two_sin_half(d, trunc);
    two_sin.pow(2 * g - 2).expect("leading term dλ is nonzero")
}

/// `2 sin(dλ/2) = Σ_{j odd} 2(−1)^{(j−1)/2} (d/2)^j λ^j / j!`.
fn two_sin_half(d: i64, trunc: Exp) -> FracSeries<Rat> {
    let mut terms = Vec::new();
    let mut j = 1i64;
    while Exp::from_integer(j) < trunc {
        let mut c = Rat::new(BigInt::from(d).pow(j as u32), BigInt::from(2).pow(j as u32 - 1))
            / Rat::from_integer(factorial_big(j as u64));
        if (j - 1) / 2 % 2 == 1 {
            c = -c;
        }
        terms.push((j, c));
        j += 2;
    }
    FracSeries::from_integer_terms(trunc, terms)
}

/// `(−1)^{g−1} ((−q)^d − 2 + (−q)^{−d})^{g−1}` as a Laurent series in `q`,
/// exact below `q^{window}`.
///
/// For `g ≥ 1` this is a Laurent polynomial; for `g = 0` it is the expansion
/// of `−((−q)^d − 2 + (−q)^{−d})^{−1}` in ascending powers of `q`, fixed once
/// as the Laurent-series convention.
pub fn pairs_basis(g: i64, d: i64, window: i64) -> FracSeries<Rat> {
    assert!(g >= 0 && d >= 1);
    let pad = Exp::from_integer(window + d * (g + 2));
    let k_poly = minus_q_pow_sum(d, pad);
    let series = if g == 0 {
        k_poly.inv().expect("leading term is nonzero").neg()
    } else {
        let p = k_poly.pow(g - 1).expect("nonnegative power");
        if (g - 1) % 2 == 1 {
            p.neg()
        } else {
            p
        }
    };
    series.truncate_to(Exp::from_integer(window))
}

/// `(−q)^d − 2 + (−q)^{−d}` as a Laurent polynomial.
fn minus_q_pow_sum(d: i64, trunc: Exp) -> FracSeries<Rat> {
    let s = if d % 2 == 0 { rat(1) } else { rat(-1) };
    FracSeries::from_integer_terms(trunc, [(d, s.clone()), (0, rat(-2)), (-d, s)])
}

/// `e^{iaλ}` as a formal series with Gaussian-rational coefficients.
pub fn exp_i_lambda(a: i64, trunc: Exp) -> FracSeries<GaussRat> {
    let mut terms = Vec::new();
    let mut j = 0i64;
    while Exp::from_integer(j) < trunc {
        let mag = Rat::new(BigInt::from(a).pow(j as u32), factorial_big(j as u64));
        terms.push((j, i_power(j).mul_ref(&GaussRat::from_real(mag))));
        j += 1;
    }
    FracSeries::from_integer_terms(trunc, terms)
}

/// The pairs basis element composed with `q = −e^{iλ}`, i.e.
/// `(−1)^{g−1} (e^{idλ} − 2 + e^{−idλ})^{g−1}` as a `λ`-series.
///
/// For `g = 0` the composition goes through the rational structure: the
/// finitely many terms of `(−q)^d − 2 + (−q)^{−d}` are composed termwise and
/// the result (leading term `−d²λ²`) is inverted as a `λ`-series. Termwise
/// composition of the ascending `q`-expansion would not stabilize: every
/// `e^{idnλ}` meets every power of `λ`.
pub fn compose_pairs_basis(g: i64, d: i64, lambda_order: i64) -> FracSeries<GaussRat> {
    assert!(g >= 0 && d >= 1);
    let trunc = Exp::from_integer(lambda_order + 5);
    let k_composed = exp_i_lambda(d, trunc)
        .add(&exp_i_lambda(-d, trunc))
        .sub(&FracSeries::monomial(1, 0, GaussRat::from_real(rat(2)), trunc));
    if g == 0 {
        k_composed.inv().expect("leading coefficient -d^2 is nonzero").neg()
    } else {
        let p = k_composed.pow(g - 1).expect("nonnegative power");
        if (g - 1) % 2 == 1 {
            p.neg()
        } else {
            p
        }
    }
}

/// Build the Gromov-Witten potential from a BPS table:
///
/// `[v^{mα}] F = Σ_g Σ_{d|m} r_{g,h′} (1/d) (2 sin(dλ/2))^{2g−2}` with
/// `h′ = (m/d)²(h−1) + 1`, using divisibility independence for the lookup.
///
/// The table must cover every needed `h′ ≥ 0`.
pub fn gw_from_bps(r: &BpsTable, h: i64, mmax: i64, lambda_order: i64) -> GwPotential {
    assert!(mmax >= 1);
    let out_trunc = Exp::from_integer(lambda_order + 1);
    let mut coeffs = Vec::with_capacity(mmax as usize);
    for m in 1..=mmax {
        let mut acc = FracSeries::zero(1, out_trunc);
        for d in divisors(m) {
            let k = m / d;
            let hp = k * k * (h - 1) + 1;
            if hp < 0 {
                continue;
            }
            assert!(r.covers(hp), "BPS table must cover h' = {hp}");
            let inv_d = Rat::new(BigInt::one(), BigInt::from(d));
            for g in 0..=hp.max(r.max_genus()) {
                let val = r.get_rat(g, hp);
                if val.is_zero() {
                    continue;
                }
                let term = sin_factor(g, d, lambda_order).scale(&(val * &inv_d));
                acc = acc.add(&term.truncate_to(out_trunc));
            }
        }
        coeffs.push(acc);
    }
    GwPotential { h, coeffs }
}

/// Recover BPS counts from a Gromov-Witten potential: induction on `m`
/// (stripping the `d > 1` divisor contributions) followed by a triangular
/// solve in `g` from `λ^{−2}` upward.
pub fn bps_from_gw(
    pot: &GwPotential,
    gmax: i64,
) -> Result<BTreeMap<(i64, i64), Rat>, PotentialError> {
    let mut out: BTreeMap<(i64, i64), Rat> = BTreeMap::new();
    for m in 1..=pot.mmax() {
        let series = pot.coeff_vm(m);
        let order = 2 * gmax - 2;
        if series.truncation() <= Exp::from_integer(order) {
            return Err(PotentialError::InsufficientOrder);
        }
        let lambda_order = 2 * gmax;
        let mut residual = series.clone();
        for d in divisors(m).into_iter().filter(|&d| d > 1) {
            let k = m / d;
            let inv_d = Rat::new(BigInt::one(), BigInt::from(d));
            for g in 0..=gmax {
                let val = out.get(&(g, k)).cloned().unwrap_or_else(Rat::zero);
                if val.is_zero() {
                    continue;
                }
                let term = sin_factor(g, d, lambda_order).scale(&(val * &inv_d));
                residual = residual.sub(&term);
            }
        }
        for g in 0..=gmax {
            let c = residual
                .coeff_int(2 * g - 2)
                .map_err(|_| PotentialError::InsufficientOrder)?;
            if !c.is_zero() {
                residual = residual.sub(&sin_factor(g, 1, lambda_order).scale(&c));
                out.insert((g, m), c);
            }
        }
        if !residual.is_zero_to_trunc() {
            return Err(PotentialError::Inconsistent);
        }
    }
    Ok(out)
}

/// Build the stable-pairs potential from a table of `r̃` values:
///
/// `[v^{mα}] F̃ = Σ_g Σ_{d|m} r̃_{g,(m/d)α} (−1)^{g−1} (1/d)
/// ((−q)^d−2+(−q)^{−d})^{g−1}`, exact below `q^{window}`.
pub fn pairs_from_bps(rt: &PairsBpsTable, h: i64, mmax: i64, window: i64) -> PairsPotential {
    assert!(mmax >= 1);
    let trunc = Exp::from_integer(window);
    let mut coeffs = Vec::with_capacity(mmax as usize);
    for m in 1..=mmax {
        let mut acc = FracSeries::zero(1, trunc);
        for d in divisors(m) {
            let k = m / d;
            let hp = k * k * (h - 1) + 1;
            let inv_d = Rat::new(BigInt::one(), BigInt::from(d));
            // genus range: everything stored for the class (k, hp)
            for (g, _, _, v) in rt.entries().filter(|(_, mm, hh, _)| *mm == k && *hh == hp) {
                let val = Rat::from_integer(v.clone()) * &inv_d;
                acc = acc.add(&pairs_basis(g, d, window).scale(&val));
            }
        }
        coeffs.push(acc);
    }
    PairsPotential { h, coeffs }
}

/// Recover stable-pairs BPS counts from a pairs potential by one exact dense
/// linear solve over the finite unknown set `{(g, k) : k ≤ mmax, 0 ≤ g ≤ G}`,
/// matching Laurent coefficients of every `v^{mα}` series on its window.
///
/// `G` is `gmax` when given; otherwise it is inferred as
/// `1 + |most negative q-exponent|` over the potential (the basis element for
/// genus `g` and divisor `d` reaches `q^{−d(g−1)}`).
pub fn bps_from_pairs(
    pot: &PairsPotential,
    gmax: Option<i64>,
) -> Result<PairsBpsTable, PotentialError> {
    let mmax = pot.mmax();
    let mut table = PairsBpsTable::new();
    if (1..=mmax).all(|m| pot.coeff_vm(m).is_zero_to_trunc()) {
        return Ok(table);
    }
    let inferred = (1..=mmax)
        .filter_map(|m| pot.coeff_vm(m).min_exp())
        .map(|e| {
            if e < Exp::zero() {
                1 - e.to_integer()
            } else {
                1
            }
        })
        .max()
        .unwrap_or(1);
    let g_top = gmax.unwrap_or(inferred);
    let unknowns: Vec<(i64, i64)> = (1..=mmax)
        .flat_map(|k| (0..=g_top).map(move |g| (g, k)))
        .collect();
    let col_of = |g: i64, k: i64| -> usize { ((k - 1) * (g_top + 1) + g) as usize };

    let mut matrix: Vec<Vec<Rat>> = Vec::new();
    let mut rhs: Vec<Rat> = Vec::new();
    for m in 1..=mmax {
        let series = pot.coeff_vm(m);
        let hi = series.truncation();
        let lo = -m * (g_top - 1).max(0);
        // no basis element reaches below lo; deeper input terms are
        // unexplainable within the genus range
        if series.min_exp().is_some_and(|e| e < Exp::from_integer(lo)) {
            return Err(PotentialError::Inconsistent);
        }
        // per-divisor basis columns on this block
        let mut cols: BTreeMap<(i64, i64), FracSeries<Rat>> = BTreeMap::new();
        for d in divisors(m) {
            let inv_d = Rat::new(BigInt::one(), BigInt::from(d));
            for g in 0..=g_top {
                let window = hi.ceil().to_integer() + 1;
                cols.insert((g, d), pairs_basis(g, d, window).scale(&inv_d));
            }
        }
        let mut e = lo;
        while Exp::from_integer(e) < hi {
            let mut row = vec![Rat::zero(); unknowns.len()];
            for d in divisors(m) {
                for g in 0..=g_top {
                    let c = cols[&(g, d)].coeff_int(e).expect("window padded");
                    row[col_of(g, m / d)] = row[col_of(g, m / d)].clone() + c;
                }
            }
            matrix.push(row);
            rhs.push(series.coeff_int(e).expect("below truncation"));
            e += 1;
        }
    }
    if matrix.len() < unknowns.len() {
        return Err(PotentialError::SingularSystem);
    }
    let outcome = solve_exact(matrix, rhs);
    if !outcome.unique {
        return Err(PotentialError::SingularSystem);
    }
    if !outcome.consistent {
        return Err(PotentialError::Inconsistent);
    }
    for ((g, k), val) in unknowns.iter().zip(outcome.solution) {
        if val.is_zero() {
            continue;
        }
        if !val.denom().is_one() {
            return Err(PotentialError::NonIntegral { g: *g, m: *k });
        }
        let hp = k * k * (pot.h - 1) + 1;
        table.insert(*g, *k, hp, val.to_integer());
    }
    Ok(table)
}

/// Verify `(2 sin(dλ/2))^{2g−2} = (−1)^{g−1}((−q)^d−2+(−q)^{−d})^{g−1}` under
/// `−q = e^{iλ}`, coefficientwise through `λ^{lambda_order}`: true iff every
/// imaginary part vanishes exactly and the real parts agree.
pub fn dictionary_check(g: i64, d: i64, lambda_order: i64) -> Result<bool, PotentialError> {
    let lhs = sin_factor(g, d, lambda_order);
    let rhs = compose_pairs_basis(g, d, lambda_order);
    series_match_real(&lhs, &rhs, lambda_order)
}

/// Compare a rational `λ`-series against a Gaussian-rational one through
/// `λ^{order}`: imaginary parts must vanish and real parts must agree.
fn series_match_real(
    lhs: &FracSeries<Rat>,
    rhs: &FracSeries<GaussRat>,
    order: i64,
) -> Result<bool, PotentialError> {
    let bound = Exp::from_integer(order);
    if lhs.truncation() <= bound || rhs.truncation() <= bound {
        return Err(PotentialError::InsufficientOrder);
    }
    let lo = lhs
        .min_exp()
        .into_iter()
        .chain(rhs.min_exp())
        .min()
        .unwrap_or_else(Exp::zero)
        .to_integer();
    for e in lo..=order {
        let a = lhs.coeff_int(e).expect("below truncation");
        let b = rhs.coeff_int(e).expect("below truncation");
        if !b.is_real() || b.re != a {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Verify the equality of potentials under `−q = e^{iλ}` at the level of the
/// finite BPS sums: the stable-pairs potential built from `r` (read as `r̃`),
/// composed term by term, must equal the Gromov-Witten potential built from
/// the same table, through `λ^{order}` for every `m ≤ mmax`.
pub fn potential_equality_check(
    r: &BpsTable,
    h: i64,
    mmax: i64,
    lambda_order: i64,
) -> Result<bool, PotentialError> {
    let gw = gw_from_bps(r, h, mmax, lambda_order);
    let trunc = Exp::from_integer(lambda_order + 1);
    for m in 1..=mmax {
        let mut composed = FracSeries::<GaussRat>::zero(1, trunc);
        for d in divisors(m) {
            let k = m / d;
            let hp = k * k * (h - 1) + 1;
            if hp < 0 {
                continue;
            }
            let inv_d = Rat::new(BigInt::one(), BigInt::from(d));
            for g in 0..=hp.max(r.max_genus()) {
                let val = r.get_rat(g, hp);
                if val.is_zero() {
                    continue;
                }
                let scale = GaussRat::from_real(val * &inv_d);
                composed = composed.add(&compose_pairs_basis(g, d, lambda_order).scale(&scale));
            }
        }
        if !series_match_real(gw.coeff_vm(m), &composed, lambda_order)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;
    use qseries::ratio;

    /// Test-local long division: invert a dense series given as
    /// `(leading exponent, coefficients)`, returning enough terms.
    fn naive_invert(lead: i64, coeffs: &[Rat], terms: usize) -> (i64, Vec<Rat>) {
        let mut b = vec![Rat::zero(); terms];
        b[0] = coeffs[0].recip();
        for j in 1..terms {
            let mut acc = Rat::zero();
            for i in 1..=j.min(coeffs.len() - 1) {
                acc += &coeffs[i] * &b[j - i];
            }
            b[j] = -acc / &coeffs[0];
        }
        (-lead, b)
    }

    #[test]
    fn sin_factor_genus_zero_head() {
        // Oracle: (2 sin(λ/2))^2 = λ^2 - λ^4/12 + λ^6/360..., inverted by
        // test-local long division; the λ^0 coefficient of the inverse
        // (relative slot 2) must be 1/12.
        let sin_sq = [
            rat(1),
            rat(0),
            ratio(-1, 12),
            rat(0),
            Rat::new(1.into(), 360.into()),
        ];
        let (lead, inv) = naive_invert(2, &sin_sq, 5);
        assert_eq!(lead, -2);
        assert_eq!(inv[2], ratio(1, 12));

        let s = sin_factor(0, 1, 8);
        assert_eq!(s.coeff_int(-2).unwrap(), rat(1));
        assert_eq!(s.coeff_int(0).unwrap(), ratio(1, 12));
        assert_eq!(s.coeff_int(-1).unwrap(), rat(0));
    }

    #[test]
    fn sin_factor_genus_one_is_one() {
        let s = sin_factor(1, 3, 10);
        assert_eq!(s.coeff_int(0).unwrap(), rat(1));
        assert_eq!(s.num_terms(), 1);
    }

    #[test]
    fn gw_from_singleton_table_matches_inverse_sine_square() {
        // table with r_{0,h} = 1 only: [v^α]F = (2 sin(λ/2))^{-2}
        let r = crate::kkv::extract_r_table(0).unwrap(); // r_{0,0} = 1 only
        let pot = gw_from_bps(&r, 0, 1, 8);
        let s = pot.coeff_vm(1);
        assert_eq!(s.coeff_int(-2).unwrap(), rat(1));
        assert_eq!(s.coeff_int(0).unwrap(), ratio(1, 12));
    }

    #[test]
    fn gw_divisor_sum_against_double_loop() {
        // m = 2, h = 1: divisors d = 1 (class 2α, h' = 1) and d = 2 (class α,
        // h' = 1). Brute-force the same double loop directly.
        let r = crate::kkv::extract_r_table(1).unwrap();
        let pot = gw_from_bps(&r, 1, 2, 8);
        let mut expect = FracSeries::zero(1, Exp::from_integer(9));
        for (d, _k) in [(1i64, 2i64), (2, 1)] {
            let hp = 1; // k²(h−1) + 1 collapses at h = 1
            for g in 0..=hp {
                let val = r.get_rat(g, hp) * Rat::new(1.into(), d.into());
                if !val.is_zero() {
                    expect = expect.add(&sin_factor(g, d, 8).scale(&val).truncate_to(
                        Exp::from_integer(9),
                    ));
                }
            }
        }
        assert_eq!(pot.coeff_vm(2), &expect);
    }

    #[test]
    fn bps_from_gw_roundtrip_kkv_rows() {
        let r = crate::kkv::extract_r_table(13).unwrap();
        for h in 0..=3 {
            let gmax = (4 * (h - 1) + 1).max(0) + 2; // covers d = 1 class at m = 2
            let pot = gw_from_bps(&r, h, 2, 2 * gmax + 2);
            let rec = bps_from_gw(&pot, gmax).unwrap();
            for m in 1..=2i64 {
                let hp = m * m * (h - 1) + 1;
                for g in 0..=gmax {
                    let expect = if hp >= 0 { r.get_rat(g, hp) } else { Rat::zero() };
                    let got = rec.get(&(g, m)).cloned().unwrap_or_else(Rat::zero);
                    assert_eq!(got, expect, "h={h} g={g} m={m}");
                }
            }
        }
    }

    #[test]
    fn bps_from_gw_needs_enough_order() {
        let r = crate::kkv::extract_r_table(1).unwrap();
        let pot = gw_from_bps(&r, 1, 1, 4);
        assert_eq!(bps_from_gw(&pot, 4).unwrap_err(), PotentialError::InsufficientOrder);
    }

    #[test]
    fn bps_from_gw_trivial_cases() {
        let zero_pot = GwPotential {
            h: 1,
            coeffs: vec![FracSeries::zero(1, Exp::from_integer(10))],
        };
        assert!(bps_from_gw(&zero_pot, 3).unwrap().is_empty());

        let unit = GwPotential {
            h: 1,
            coeffs: vec![sin_factor(1, 1, 9).truncate_to(Exp::from_integer(10))],
        };
        let rec = bps_from_gw(&unit, 3).unwrap();
        assert_eq!(rec.get(&(1, 1)), Some(&rat(1)));
        assert_eq!(rec.len(), 1);
    }

    #[test]
    fn pairs_basis_examples() {
        // raw g=2, d=1 power: (-q) - 2 + (-q)^{-1} = -q^{-1} - 2 - q
        let raw = minus_q_pow_sum(1, Exp::from_integer(6));
        assert_eq!(raw.coeff_int(-1).unwrap(), rat(-1));
        assert_eq!(raw.coeff_int(0).unwrap(), rat(-2));
        assert_eq!(raw.coeff_int(1).unwrap(), rat(-1));
        // with the (−1)^{g−1} sign attached the basis flips to q^{-1}+2+q
        let b = pairs_basis(2, 1, 6);
        assert_eq!(b.coeff_int(-1).unwrap(), rat(1));
        assert_eq!(b.coeff_int(0).unwrap(), rat(2));
        assert_eq!(b.coeff_int(1).unwrap(), rat(1));

        // g=0, d=1: ascending expansion of q/(1+q)^2
        let b0 = pairs_basis(0, 1, 6);
        for e in 1..6 {
            let sign = if e % 2 == 1 { 1 } else { -1 };
            assert_eq!(b0.coeff_int(e).unwrap(), rat(sign * e));
        }

        // the g=0 element times ((-q)^d - 2 + (-q)^{-d}) equals -1
        for d in 1..=3 {
            let prod = pairs_basis(0, d, 10).mul(&minus_q_pow_sum(d, Exp::from_integer(11)));
            assert_eq!(prod.coeff_int(0).unwrap(), rat(-1));
            assert_eq!(prod.num_terms(), 1);
        }
    }

    #[test]
    fn pairs_potential_h1_head() {
        // table {r̃_{0,1,1}=24, r̃_{1,1,1}=-2}: -2 + 24q - 48q^2 + 72q^3 - ...
        let mut rt = PairsBpsTable::new();
        rt.insert(0, 1, 1, BigInt::from(24));
        rt.insert(1, 1, 1, BigInt::from(-2));
        let pot = pairs_from_bps(&rt, 1, 1, 6);
        let s = pot.coeff_vm(1);
        assert_eq!(s.coeff_int(0).unwrap(), rat(-2));
        assert_eq!(s.coeff_int(1).unwrap(), rat(24));
        assert_eq!(s.coeff_int(2).unwrap(), rat(-48));
        assert_eq!(s.coeff_int(3).unwrap(), rat(72));
    }

    #[test]
    fn pairs_constant_from_unit_g1() {
        let mut rt = PairsBpsTable::new();
        rt.insert(1, 1, 1, BigInt::one());
        let pot = pairs_from_bps(&rt, 1, 1, 8);
        let s = pot.coeff_vm(1);
        assert_eq!(s.coeff_int(0).unwrap(), rat(1));
        assert_eq!(s.num_terms(), 1);
    }

    #[test]
    fn bps_from_pairs_inverse_example() {
        let series = FracSeries::from_integer_terms(
            Exp::from_integer(4),
            [(0, rat(-2)), (1, rat(24)), (2, rat(-48)), (3, rat(72))],
        );
        let pot = PairsPotential { h: 1, coeffs: vec![series] };
        let rec = bps_from_pairs(&pot, None).unwrap();
        assert_eq!(rec.get(0, 1, 1), BigInt::from(24));
        assert_eq!(rec.get(1, 1, 1), BigInt::from(-2));
    }

    #[test]
    fn bps_from_pairs_zero_input() {
        let pot = PairsPotential {
            h: 2,
            coeffs: vec![FracSeries::zero(1, Exp::from_integer(5))],
        };
        assert!(bps_from_pairs(&pot, None).unwrap().is_empty());
    }

    #[test]
    fn pairs_roundtrip_kkv_row_h2() {
        // r-row h=2 read as r̃: {324, -54, 3} roundtrips through the potential.
        let mut rt = PairsBpsTable::new();
        rt.insert(0, 1, 2, BigInt::from(324));
        rt.insert(1, 1, 2, BigInt::from(-54));
        rt.insert(2, 1, 2, BigInt::from(3));
        let pot = pairs_from_bps(&rt, 2, 1, 10);
        let rec = bps_from_pairs(&pot, None).unwrap();
        assert_eq!(rec, rt);
    }

    #[test]
    fn pairs_roundtrip_multidivisor() {
        // m up to 3 with h = 2; values depend only on (g, h-index)
        let h = 2i64;
        let mut rt = PairsBpsTable::new();
        for k in 1..=3i64 {
            let hp = k * k * (h - 1) + 1;
            for g in 0..=3i64 {
                let v = BigInt::from((g + 1) * 7 - hp + 2 * g * g);
                rt.insert(g, k, hp, v);
            }
        }
        let pot = pairs_from_bps(&rt, h, 3, 14);
        let rec = bps_from_pairs(&pot, Some(3)).unwrap();
        assert_eq!(rec, rt);
    }

    #[test]
    fn bps_from_pairs_window_too_small() {
        let series = FracSeries::from_integer_terms(
            Exp::from_integer(1),
            [(-2, rat(1)), (0, rat(3))],
        );
        let pot = PairsPotential { h: 1, coeffs: vec![series] };
        assert_eq!(bps_from_pairs(&pot, None).unwrap_err(), PotentialError::SingularSystem);
    }

    #[test]
    fn bps_from_pairs_rejects_too_deep_terms() {
        // a term below every basis element's reach for the forced genus range
        let series = FracSeries::from_integer_terms(
            Exp::from_integer(6),
            [(-5, rat(1)), (0, rat(2))],
        );
        let pot = PairsPotential { h: 1, coeffs: vec![series] };
        assert_eq!(
            bps_from_pairs(&pot, Some(2)).unwrap_err(),
            PotentialError::Inconsistent
        );
    }

    #[test]
    fn bps_from_pairs_non_integral() {
        let series = pairs_basis(1, 1, 8).scale(&ratio(1, 2));
        let pot = PairsPotential { h: 1, coeffs: vec![series] };
        match bps_from_pairs(&pot, Some(2)) {
            Err(PotentialError::NonIntegral { .. }) => {}
            other => panic!("expected NonIntegral, got {other:?}"),
        }
    }

    #[test]
    fn dictionary_trivial_and_low_genus() {
        // g = 1: both sides are 1
        assert!(dictionary_check(1, 1, 8).unwrap());
        assert!(dictionary_check(1, 3, 8).unwrap());
        // g = 2, d = 1: λ^2 - λ^4/12 + ... against -(e^{iλ}-2+e^{-iλ})
        assert!(dictionary_check(2, 1, 12).unwrap());
        let lhs = sin_factor(2, 1, 8);
        assert_eq!(lhs.coeff_int(2).unwrap(), rat(1));
        assert_eq!(lhs.coeff_int(4).unwrap(), ratio(-1, 12));
        // g = 0, d = 1: both sides λ^{-2} + 1/12 + O(λ^2)
        assert!(dictionary_check(0, 1, 12).unwrap());
        let rhs = compose_pairs_basis(0, 1, 8);
        assert_eq!(rhs.coeff_int(-2).unwrap().re, rat(1));
        assert_eq!(rhs.coeff_int(0).unwrap().re, ratio(1, 12));
    }

    #[test]
    fn dictionary_insufficient_order_detected() {
        // truncation bookkeeping: requesting more than was built must error
        let lhs = sin_factor(0, 1, 4);
        let t = lhs.truncation().to_integer().to_i64().unwrap();
        let rhs = compose_pairs_basis(0, 1, 4);
        assert!(series_match_real(&lhs, &rhs, t + 3).is_err());
    }

    #[test]
    fn potential_equality_small_cases() {
        let r = crate::kkv::extract_r_table(5).unwrap();
        assert!(potential_equality_check(&r, 1, 1, 8).unwrap());
        assert!(potential_equality_check(&r, 2, 2, 8).unwrap());
        // zero table: both sides vanish
        let zero = crate::kkv::BpsTable::from_entries(3, []);
        assert!(potential_equality_check(&zero, 1, 2, 6).unwrap());
    }

    #[test]
    fn gw_singleton_genus_one_delta_table() {
        // a lone r_{1,1} = 1 produces the constant series 1 at m = 1
        let r = crate::kkv::BpsTable::from_entries(1, [((1, 1), BigInt::one())]);
        let pot = gw_from_bps(&r, 1, 1, 8);
        let s = pot.coeff_vm(1);
        assert_eq!(s.coeff_int(0).unwrap(), rat(1));
        assert_eq!(s.num_terms(), 1);
    }

    #[test]
    fn gw_from_bps_linear_in_the_table() {
        let t1 = crate::kkv::BpsTable::from_entries(
            5,
            [((0, 1), BigInt::from(5)), ((2, 2), BigInt::from(-3))],
        );
        let t2 = crate::kkv::BpsTable::from_entries(
            5,
            [((0, 1), BigInt::from(2)), ((1, 2), BigInt::from(7))],
        );
        let sum = crate::kkv::BpsTable::from_entries(
            5,
            [
                ((0, 1), BigInt::from(7)),
                ((1, 2), BigInt::from(7)),
                ((2, 2), BigInt::from(-3)),
            ],
        );
        for (h, m) in [(1i64, 1i64), (2, 2)] {
            let p1 = gw_from_bps(&t1, h, m, 8);
            let p2 = gw_from_bps(&t2, h, m, 8);
            let ps = gw_from_bps(&sum, h, m, 8);
            for k in 1..=m {
                assert_eq!(p1.coeff_vm(k).add(p2.coeff_vm(k)), ps.coeff_vm(k).clone());
            }
        }
    }

    /// Test-local deterministic generator for randomized roundtrips.
    struct Lcg(u64);
    impl Lcg {
        fn next(&mut self) -> u64 {
            self.0 = self.0.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            self.0 >> 16
        }
        fn range(&mut self, lo: i64, hi: i64) -> i64 {
            lo + (self.next() % ((hi - lo + 1) as u64)) as i64
        }
    }

    #[test]
    fn randomized_gw_roundtrip() {
        // random integer tables with g <= 4, classes up to m = 3
        let mut rng = Lcg(11);
        for _ in 0..6 {
            let h = rng.range(0, 2);
            let mut entries = Vec::new();
            for k in 1..=3i64 {
                let hp = k * k * (h - 1) + 1;
                if hp < 0 {
                    continue;
                }
                for g in 0..=4i64 {
                    entries.push(((g, hp), BigInt::from(rng.range(-9, 9))));
                }
            }
            let table = crate::kkv::BpsTable::from_entries(9 * (h - 1).max(0) + 1, entries);
            let pot = gw_from_bps(&table, h, 3, 12);
            let rec = bps_from_gw(&pot, 4).unwrap();
            for m in 1..=3i64 {
                let hp = m * m * (h - 1) + 1;
                for g in 0..=4i64 {
                    let expect = if hp >= 0 { table.get_rat(g, hp) } else { Rat::zero() };
                    let got = rec.get(&(g, m)).cloned().unwrap_or_else(Rat::zero);
                    assert_eq!(got, expect, "h={h} g={g} m={m}");
                }
            }
        }
    }

    #[test]
    fn randomized_pairs_roundtrip() {
        let mut rng = Lcg(23);
        for _ in 0..6 {
            let h = rng.range(1, 2);
            // values keyed by (g, hp) so tables with coinciding class indices
            // (h = 1) stay independent of the divisibility
            let mut values: BTreeMap<(i64, i64), BigInt> = BTreeMap::new();
            let mut rt = PairsBpsTable::new();
            for k in 1..=3i64 {
                let hp = k * k * (h - 1) + 1;
                for g in 0..=4i64 {
                    let v = values
                        .entry((g, hp))
                        .or_insert_with(|| BigInt::from(rng.range(-9, 9)))
                        .clone();
                    rt.insert(g, k, hp, v);
                }
            }
            let pot = pairs_from_bps(&rt, h, 3, 16);
            let rec = bps_from_pairs(&pot, Some(4)).unwrap();
            assert_eq!(rec, rt, "h={h}");
        }
    }

    #[test]
    fn pairs_forward_linear_on_random_tables() {
        let mut rng = Lcg(97);
        for _ in 0..5 {
            let h = rng.range(1, 2);
            let mut make = |rng: &mut Lcg| {
                let mut t = PairsBpsTable::new();
                for k in 1..=2i64 {
                    let hp = k * k * (h - 1) + 1;
                    for g in 0..=3i64 {
                        t.insert(g, k, hp, BigInt::from(rng.range(-9, 9)));
                    }
                }
                t
            };
            let t1 = make(&mut rng);
            let t2 = make(&mut rng);
            let mut sum = t1.clone();
            for (g, m, hh, v) in t2.entries() {
                let cur = sum.get(g, m, hh);
                sum.insert(g, m, hh, cur + v);
            }
            let p1 = pairs_from_bps(&t1, h, 2, 10);
            let p2 = pairs_from_bps(&t2, h, 2, 10);
            let ps = pairs_from_bps(&sum, h, 2, 10);
            for m in 1..=2 {
                assert_eq!(p1.coeff_vm(m).add(p2.coeff_vm(m)), ps.coeff_vm(m).clone());
            }
        }
    }
}
