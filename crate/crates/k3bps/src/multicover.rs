//! The stable-pairs multiple cover formula, the exponential/logarithm
//! dictionary between connected and star-restricted partition functions on a
//! rank-1 effective cone, and the recursion they satisfy.
//!
//! The fundamental formula expresses the degree-`mα` series through primitive
//! ones evaluated at `−(−q)^k`:
//!
//! ```text
//! R̃_{mα}(q) = Σ_{k|m} (1/k) R̃_{(m²/k²)(h−1)+1}(−(−q)^k),
//! ```
//!
//! where `R̃_h = t·I_h` with the residue variable renamed `q`, and `R̃_h = 0`
//! for `h < 0`.

use num_bigint::BigInt;
use num_traits::One;
use qseries::{Exp, FracSeries, Rat};

use crate::kawai_yoshioka::i_series;
use crate::potentials::{bps_from_pairs, divisors, PairsPotential, PotentialError};

/// The `v^{mα}` coefficient of the stable-pairs potential for a primitive
/// class of norm square `2h−2`, as a Laurent series in `q`.
#[derive(Clone, Debug, PartialEq)]
pub struct RtildeSeries {
    pub m: i64,
    pub h: i64,
    pub series: FracSeries<Rat>,
}

/// Primitive series `R̃_h(q) = t·I_h` with `y` renamed `q`, exact below
/// `q^{order}`; the zero series for `h < 0`.
pub fn rtilde_primitive(h: i64, order: i64) -> RtildeSeries {
    assert!(order >= 1);
    RtildeSeries { m: 1, h, series: i_series(h, order - 1).series }
}

/// The multiple cover formula:
/// `Σ_{k|m} (1/k)·R̃_{(m²/k²)(h−1)+1}(−(−q)^k)` exact below `q^{order}`.
pub fn rtilde_multiple(m: i64, h: i64, order: i64) -> RtildeSeries {
    assert!(m >= 1 && order >= 1);
    let trunc = Exp::from_integer(order);
    let mut acc = FracSeries::zero(1, trunc);
    for k in divisors(m) {
        let hp = (m / k) * (m / k) * (h - 1) + 1;
        let primitive = rtilde_primitive(hp, order);
        let covered = primitive.series.substitute_cover(k).expect("grid 1");
        let inv_k = Rat::new(BigInt::one(), BigInt::from(k));
        acc = acc.add(&covered.scale(&inv_k).truncate_to(trunc));
    }
    RtildeSeries { m, h, series: acc }
}

/// Verify that the BPS counts extracted from the multiple-cover potential do
/// not depend on the divisibility: the `(g, mα)` values recovered from
/// `[v^{α}],…,[v^{mα}]` must equal the `(g, 1)` values extracted from the
/// primitive series of the same norm square `m²(h−1)+1`.
pub fn divisibility_independence_check(
    m: i64,
    h: i64,
    order: i64,
) -> Result<bool, PotentialError> {
    let coeffs: Vec<FracSeries<Rat>> =
        (1..=m).map(|k| rtilde_multiple(k, h, order).series).collect();
    let pot = PairsPotential::new(h, coeffs);
    let multi = bps_from_pairs(&pot, None)?;

    for k in 1..=m {
        let hp = k * k * (h - 1) + 1;
        let primitive = rtilde_primitive(hp, order);
        let prim_pot = PairsPotential::new(hp, vec![primitive.series]);
        let prim = bps_from_pairs(&prim_pot, None)?;
        let gmax = (1 - hp).abs() + 1;
        for g in 0..=gmax {
            if multi.get(g, k, hp) != prim.get(g, 1, hp) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The star-restricted partition function coefficients `P*_1..P*_m` on the
/// rank-1 effective cone `{α, 2α, …, mα}`.
#[derive(Clone, Debug, PartialEq)]
pub struct EffConeSeries {
    star: Vec<FracSeries<Rat>>,
}

impl EffConeSeries {
    pub fn mmax(&self) -> i64 {
        self.star.len() as i64
    }

    /// `P*_k`, `1 ≤ k ≤ m`.
    pub fn star(&self, k: i64) -> &FracSeries<Rat> {
        &self.star[(k - 1) as usize]
    }
}

/// Multiply two `v`-polynomials with `q`-series coefficients and zero
/// constant term, truncated at `v^{mmax}`; slot `i` holds the `v^{i+1}`
/// coefficient.
fn v_poly_mul(
    a: &[FracSeries<Rat>],
    b: &[FracSeries<Rat>],
    mmax: usize,
    proto: &FracSeries<Rat>,
) -> Vec<FracSeries<Rat>> {
    let mut out = vec![proto.clone(); mmax];
    for (i, ai) in a.iter().enumerate() {
        for (j, bj) in b.iter().enumerate() {
            let deg = i + j + 2;
            if deg <= mmax {
                out[deg - 1] = out[deg - 1].add(&ai.mul(bj));
            }
        }
    }
    out
}

/// `P*_k = [v^k] exp(Σ_j v^j R̃_j)` for `k = 1..m`: the exponential sums
/// `Σ_n A^n/n!` with `A` the argument, truncated at `v^m`.
pub fn eff_exp(rt: &[FracSeries<Rat>]) -> EffConeSeries {
    let m = rt.len();
    assert!(m >= 1);
    let trunc = rt.iter().map(|s| s.truncation()).min().expect("nonempty");
    let zero = FracSeries::zero(1, trunc);
    let mut acc: Vec<FracSeries<Rat>> = rt.to_vec();
    let mut power: Vec<FracSeries<Rat>> = rt.to_vec();
    let mut factorial = BigInt::one();
    for n in 2..=m {
        power = v_poly_mul(&power, rt, m, &zero);
        factorial *= BigInt::from(n as i64);
        let w = Rat::new(BigInt::one(), factorial.clone());
        for k in 0..m {
            acc[k] = acc[k].add(&power[k].scale(&w));
        }
    }
    EffConeSeries { star: acc }
}

/// Invert [`eff_exp`]: `Σ_j v^j R̃_j = log(1 + Σ_k v^k P*_k)` via the
/// alternating series `Σ_n (−1)^{n+1} B^n/n`.
pub fn eff_log(p: &EffConeSeries) -> Vec<FracSeries<Rat>> {
    let m = p.star.len();
    let trunc = p.star.iter().map(|s| s.truncation()).min().expect("nonempty");
    let zero = FracSeries::zero(1, trunc);
    let mut acc: Vec<FracSeries<Rat>> = p.star.clone();
    let mut power: Vec<FracSeries<Rat>> = p.star.clone();
    for n in 2..=m {
        power = v_poly_mul(&power, &p.star, m, &zero);
        let mut w = Rat::new(BigInt::one(), BigInt::from(n as i64));
        if n % 2 == 0 {
            w = -w;
        }
        for k in 0..m {
            acc[k] = acc[k].add(&power[k].scale(&w));
        }
    }
    acc
}

/// The recursion satisfied by `P* = eff_exp(R̃)` on a rank-1 cone:
///
/// `P*_m − R̃_m = (1/m) Σ_{m₁+m₂=m} P*_{m₁} · m₂ · R̃_{m₂}`,
///
/// with the degree pairing `⟨δ, kα⟩ = k·c` cancelled analytically. Returns
/// true iff the identity holds coefficientwise in `q` for every `2 ≤ k ≤ m`
/// (at `m = 1` both sides are zero by the empty decomposition sum).
pub fn recursion_check(rt: &[FracSeries<Rat>]) -> bool {
    let m = rt.len() as i64;
    let star = eff_exp(rt);
    for k in 1..=m {
        let lhs = star.star(k).sub(&rt[(k - 1) as usize]);
        let mut rhs = FracSeries::zero(1, lhs.truncation());
        for m1 in 1..k {
            let m2 = k - m1;
            let w = Rat::new(BigInt::from(m2), BigInt::from(k));
            rhs = rhs.add(&star.star(m1).mul(&rt[(m2 - 1) as usize]).scale(&w));
        }
        let through = lhs.truncation().min(rhs.truncation());
        if lhs.truncate_to(through) != rhs.truncate_to(through) {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;
    use qseries::rat;

    #[test]
    fn primitive_series_examples() {
        let r0 = rtilde_primitive(0, 6);
        assert_eq!(r0.series.coeff_int(1).unwrap(), rat(1));
        assert_eq!(r0.series.coeff_int(2).unwrap(), rat(-2));
        assert_eq!(r0.series.coeff_int(3).unwrap(), rat(3));
        assert!(rtilde_primitive(-3, 6).series.is_zero_to_trunc());
        let r1 = rtilde_primitive(1, 6);
        assert_eq!(r1.series.coeff_int(0).unwrap(), rat(-2));
        assert_eq!(r1.series.coeff_int(1).unwrap(), rat(24));
    }

    #[test]
    fn multiple_cover_m1_is_primitive() {
        let a = rtilde_multiple(1, 2, 8);
        let b = rtilde_primitive(2, 8);
        assert_eq!(a.series, b.series);
    }

    #[test]
    fn multiple_cover_m2_h1_assembles_covers() {
        // R̃_1(q) + (1/2) R̃_1(-q^2): both divisor terms hit index 1
        let got = rtilde_multiple(2, 1, 8);
        let prim = rtilde_primitive(1, 8).series;
        let expect = prim
            .add(
                &prim
                    .substitute_cover(2)
                    .unwrap()
                    .scale(&Rat::new(1.into(), 2.into())),
            )
            .truncate_to(Exp::from_integer(8));
        assert_eq!(got.series, expect);
    }

    #[test]
    fn multiple_cover_m2_h2_indices() {
        // k=1 pulls index 4(h-1)+1 = 5, k=2 pulls index (h-1)+1 = 2
        let got = rtilde_multiple(2, 2, 6);
        let first = rtilde_primitive(5, 6).series;
        let second = rtilde_primitive(2, 6).series.substitute_cover(2).unwrap();
        let expect = first
            .add(&second.scale(&Rat::new(1.into(), 2.into())))
            .truncate_to(Exp::from_integer(6));
        assert_eq!(got.series, expect);
    }

    #[test]
    fn multiple_cover_survives_vanishing_primitives() {
        // m = 2, h = 0: the k = 1 term has index -3 and vanishes, leaving
        // (1/2) R̃_0(-q²) = -q²/2 - q⁴ - 3q⁶/2 - ...
        let got = rtilde_multiple(2, 0, 8);
        assert_eq!(got.series.coeff_int(1).unwrap(), rat(0));
        assert_eq!(got.series.coeff_int(2).unwrap(), Rat::new((-1).into(), 2.into()));
        assert_eq!(got.series.coeff_int(4).unwrap(), rat(-1));
        assert_eq!(got.series.coeff_int(6).unwrap(), Rat::new((-3).into(), 2.into()));
    }

    #[test]
    fn divisibility_independence_small() {
        assert!(divisibility_independence_check(1, 2, 12).unwrap());
        assert!(divisibility_independence_check(2, 1, 16).unwrap());
        assert!(divisibility_independence_check(3, 1, 18).unwrap());
    }

    #[test]
    fn eff_exp_m2_explicit() {
        // P*_2 = R̃_2 + (1/2) R̃_1^2
        let r1 = rtilde_primitive(1, 8).series;
        let r2 = rtilde_multiple(2, 1, 8).series;
        let cone = eff_exp(&[r1.clone(), r2.clone()]);
        assert_eq!(cone.star(1), &r1);
        let expect = r2.add(&r1.mul(&r1).scale(&Rat::new(1.into(), 2.into())));
        let through = expect.truncation();
        assert_eq!(cone.star(2).truncate_to(through), expect);
    }

    #[test]
    fn eff_log_inverts_eff_exp() {
        // synthetic deterministic inputs
        let trunc = Exp::from_integer(7);
        let mk = |seed: i64| {
            FracSeries::from_integer_terms(
                trunc,
                (-2..7).map(move |e| (e, rat((seed * e * e - 3 * e + seed) % 11))),
            )
        };
        let rt: Vec<_> = (1..=4).map(mk).collect();
        let back = eff_log(&eff_exp(&rt));
        for (orig, rec) in rt.iter().zip(&back) {
            let through = rec.truncation();
            assert_eq!(&orig.truncate_to(through), rec);
        }
    }

    #[test]
    fn recursion_trivial_and_ky() {
        // m = 1: both sides vanish
        assert!(recursion_check(&[rtilde_primitive(1, 8).series]));
        // KY-derived inputs for m <= 3, h = 1
        let rt: Vec<_> = (1..=3).map(|k| rtilde_multiple(k, 1, 10).series).collect();
        assert!(recursion_check(&rt));
    }

    #[test]
    fn recursion_synthetic() {
        let trunc = Exp::from_integer(6);
        for seed in 0..5i64 {
            let rt: Vec<_> = (1..=3)
                .map(|k| {
                    FracSeries::from_integer_terms(
                        trunc,
                        (-1..6).map(move |e| {
                            (e, rat((seed * 7 + k * 3 + e * e * 5) % 13 - 6))
                        }),
                    )
                })
                .collect();
            assert!(recursion_check(&rt), "seed {seed}");
        }
    }

    #[test]
    fn boundary_extraction_at_h0() {
        // extraction at h = 0, m = 1 yields exactly r̃_{0,1,0} = 1
        let prim = rtilde_primitive(0, 10);
        let pot = PairsPotential::new(0, vec![prim.series]);
        let table = bps_from_pairs(&pot, None).unwrap();
        assert_eq!(table.get(0, 1, 0), BigInt::from(1));
        assert_eq!(table.entries().count(), 1);
        table.check_invariants().unwrap();
    }

    #[test]
    fn pairs_table_invariants_on_real_data() {
        // m <= 3, h <= 3: extraction satisfies both structural laws
        for h in 1..=3i64 {
            let order = 12 + 2 * (h - 1);
            let coeffs: Vec<_> =
                (1..=3).map(|k| rtilde_multiple(k, h, order).series).collect();
            let pot = PairsPotential::new(h, coeffs);
            let table = bps_from_pairs(&pot, None).unwrap();
            table.check_invariants().unwrap();
            assert!(!table.get(0, 1, h).is_zero());
        }
    }
}
