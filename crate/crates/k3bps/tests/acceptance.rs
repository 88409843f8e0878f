//! Acceptance suite: each test implements one criterion at its stated scale
//! and exact tolerance, prints one pass/fail line, and asserts the result.
//!
//! Run with `cargo test -p k3bps --test acceptance -- --nocapture` to see the
//! per-criterion lines.

use std::collections::BTreeMap;
use std::time::Instant;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use k3bps::kawai_yoshioka::{i_series, kkv_cross_check, rationality_witness};
use k3bps::kkv::{extract_r_table, yau_zaslow};
use k3bps::lattice::{discriminant_group, CosetClass, EvenLattice};
use k3bps::multicover::{divisibility_independence_check, recursion_check, rtilde_multiple};
use k3bps::noether_lefschetz::{
    gwnl_forward_refined, gwnl_invert, inversion_degrees, refined_multiplicity, TableProvider,
};
use k3bps::potentials::{bps_from_pairs, dictionary_check, potential_equality_check, PairsPotential};
use k3bps::qseries::{rat, Exp, FracSeries, Rat};
use k3bps::quartic::theta_quartic;

fn report(criterion: u32, passed: bool, elapsed_ms: u128, detail: &str) {
    println!(
        "{} acceptance criterion {criterion} ({elapsed_ms} ms): {detail}",
        if passed { "PASS" } else { "FAIL" },
    );
}

/// Test-local deterministic RNG, independent of the library's.
struct Rng(u64);

impl Rng {
    fn next(&mut self) -> u64 {
        // splitmix64
        self.0 = self.0.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }
    fn range(&mut self, lo: i64, hi: i64) -> i64 {
        lo + (self.next() % ((hi - lo + 1) as u64)) as i64
    }
}

#[test]
fn criterion_01_kkv_golden_table() {
    let start = Instant::now();
    let table = extract_r_table(4).expect("extraction");
    let golden: [(i64, i64, i64); 15] = [
        (0, 0, 1),
        (0, 1, 24),
        (0, 2, 324),
        (0, 3, 3200),
        (0, 4, 25650),
        (1, 1, -2),
        (1, 2, -54),
        (1, 3, -800),
        (1, 4, -8550),
        (2, 2, 3),
        (2, 3, 88),
        (2, 4, 1401),
        (3, 3, -4),
        (3, 4, -126),
        (4, 4, 5),
    ];
    let mut ok = true;
    for (g, h, v) in golden {
        if table.get(g, h) != BigInt::from(v) {
            ok = false;
        }
    }
    // nothing else below the diagonal may be nonzero
    let stored: usize = table.entries().count();
    ok &= stored == 15;
    let ms = start.elapsed().as_millis();
    report(1, ok && ms < 1000, ms, "15/15 published r_{g,h} entries, exact");
    assert!(ok, "golden table mismatch");
    assert!(ms < 1000, "over the 1 s budget");
}

#[test]
fn criterion_02_structural_laws() {
    let start = Instant::now();
    let table = extract_r_table(10).expect("extraction");
    let mut ok = true;
    for h in 0..=10i64 {
        for g in (h + 1)..=(h + 4) {
            ok &= table.get(g, h).is_zero();
        }
        let expect = if h % 2 == 0 { BigInt::from(h + 1) } else { -BigInt::from(h + 1) };
        ok &= table.get(h, h) == expect;
    }
    let yz = yau_zaslow(11);
    for h in 0..=10i64 {
        ok &= table.get_rat(0, h) == yz.coeff_int(h).expect("within order");
    }
    let ms = start.elapsed().as_millis();
    report(2, ok && ms < 5000, ms, "vanishing, diagonal and genus-0 laws through h = 10");
    assert!(ok, "structural law violated");
    assert!(ms < 5000, "over the 5 s budget");
}

#[test]
fn criterion_03_kawai_yoshioka_cross_check() {
    let start = Instant::now();
    let table = extract_r_table(6).expect("extraction");
    let mut ok = true;
    for h in 0..=6i64 {
        // direct route: stable-pairs BPS extraction from t·I_h
        let y_order = 2 * h + 12;
        let is = i_series(h, y_order);
        let pot = PairsPotential::new(h, vec![is.series]);
        let extracted = bps_from_pairs(&pot, None).expect("extraction");
        for g in 0..=(h + 1) {
            ok &= extracted.get(g, 1, h) == table.get(g, h);
        }
        // and the series-identity route must agree as well
        ok &= kkv_cross_check(h, &table, y_order).expect("window");
    }
    let ms = start.elapsed().as_millis();
    report(3, ok && ms < 10_000, ms, "t·I_h reproduces rows h <= 6 of the BPS table");
    assert!(ok, "cross-check failed");
    assert!(ms < 10_000, "over the 10 s budget");
}

#[test]
fn criterion_04_dictionary_identity() {
    let start = Instant::now();
    let mut ok = true;
    for g in 0..=4i64 {
        for d in 1..=3i64 {
            // dictionary_check returns false if any imaginary part survives
            ok &= dictionary_check(g, d, 12).expect("order");
        }
    }
    let ms = start.elapsed().as_millis();
    report(4, ok && ms < 5000, ms, "variable change for g <= 4, d <= 3 through lambda^12");
    assert!(ok, "dictionary identity failed");
    assert!(ms < 5000, "over the 5 s budget");
}

#[test]
fn criterion_05_potential_equality_desk_scale() {
    let start = Instant::now();
    let table = extract_r_table(10).expect("extraction");
    let mut ok = true;
    for h in [1i64, 2] {
        ok &= potential_equality_check(&table, h, 3, 10).expect("order");
    }
    let ms = start.elapsed().as_millis();
    report(5, ok && ms < 30_000, ms, "potential equality for h in {1,2}, m <= 3, order 10");
    assert!(ok, "potential comparison failed");
    assert!(ms < 30_000, "over the 30 s budget");
}

#[test]
fn criterion_06_multiple_cover_and_divisibility() {
    let start = Instant::now();
    let mut ok = true;
    for (m, h) in [(2i64, 1i64), (2, 2), (3, 1)] {
        let order = 10 + 2 * m * m * (h - 1).max(1) + 4;
        ok &= divisibility_independence_check(m, h, order).expect("solve");
    }
    // rationality witness: Laurent polynomial with support inside [-h, h]
    for h in 0..=6i64 {
        let y_order = 3 * h + 12;
        let (w, top) = rationality_witness(h, y_order);
        let lo = w.min_exp().map(|e| e.to_integer()).unwrap_or(0);
        ok &= lo >= -h && top.unwrap_or(0) <= h;
    }
    let ms = start.elapsed().as_millis();
    report(6, ok && ms < 30_000, ms, "divisibility independence and rationality witness");
    assert!(ok, "multiple-cover checks failed");
    assert!(ms < 30_000, "over the 30 s budget");
}

#[test]
fn criterion_07_recursion() {
    let start = Instant::now();
    let mut ok = true;
    // KY-derived inputs for m <= 4
    let rt: Vec<FracSeries<Rat>> = (1..=4).map(|k| rtilde_multiple(k, 1, 12).series).collect();
    ok &= recursion_check(&rt);
    let rt2: Vec<FracSeries<Rat>> = (1..=4).map(|k| rtilde_multiple(k, 2, 12).series).collect();
    ok &= recursion_check(&rt2);
    // 20 randomized synthetic inputs
    let mut rng = Rng(7);
    for _ in 0..20 {
        let trunc = Exp::from_integer(7);
        let rt: Vec<FracSeries<Rat>> = (1..=4)
            .map(|_| {
                FracSeries::from_integer_terms(
                    trunc,
                    (-2..7).map(|e| (e, rat(rng.range(-9, 9)))),
                )
            })
            .collect();
        ok &= recursion_check(&rt);
    }
    let ms = start.elapsed().as_millis();
    report(7, ok && ms < 5000, ms, "m <= 4 with KY-derived and 20 synthetic inputs");
    assert!(ok, "recursion failed");
    assert!(ms < 5000, "over the 5 s budget");
}

#[test]
fn criterion_08_quartic_theta_displayed_coefficients() {
    let start = Instant::now();
    let theta = theta_quartic(20).expect("exact division");
    // the five displayed coefficients, as printed
    let displayed: [(i64, i64, i64); 5] =
        [(0, 1, -1), (1, 1, 108), (9, 8, 320), (3, 2, 50016), (2, 1, 76950)];
    let mut ok = true;
    let mut mismatch = String::new();
    for (num, den, v) in displayed {
        let got = theta.coeff(Exp::new(num, den)).expect("computed");
        if got != rat(v) {
            ok = false;
            mismatch = format!(
                "Θ[{num}/{den}] computed {got} from the defining polynomial, but the printed \
                 expansion reads {v}; the polynomial is pinned by the other four values, the \
                 Hodge degree Θ[0] = -1 and the mod-8 support, so the printed digit string \
                 cannot be reproduced"
            );
        }
    }
    let ms = start.elapsed().as_millis();
    let detail = if ok {
        "five displayed Θ coefficients after the exact 2^22 division".to_string()
    } else {
        mismatch
    };
    report(8, ok && ms < 5000, ms, &detail);
    assert!(ms < 5000, "over the 5 s budget");
    assert!(ok, "{detail}");
}

// ---------------------------------------------------------------------------
// criterion 9: refined multiplicities against an independent box oracle
// ---------------------------------------------------------------------------

/// Test-local brute-force count: sweep every integer point `(b, t)` of a
/// bounded box in the type-`(Δ, δ)` receptacle and check the degree and norm
/// conditions by direct evaluation of the bordered pairing.
fn oracle_box_count(
    lattice: &EvenLattice,
    h: i64,
    degrees: &[i64],
    target_disc: i64,
    coset: &CosetClass,
) -> Option<u64> {
    if target_disc <= 0 {
        return Some(0);
    }
    let r = lattice.rank();
    let gram = lattice.gram();
    // border from the coset representative, corner from the discriminant
    let e: Vec<i64> = coset
        .functional(lattice)
        .iter()
        .map(|v| i64::try_from(v).expect("small entries"))
        .collect();
    // corner c satisfies  -Δ(Λ)(c − Σ e_i x_i) = Δ
    let mut q_e = Rat::zero();
    for (ei, xi) in e.iter().zip(coset.dual_coords()) {
        q_e += Rat::from_integer(BigInt::from(*ei)) * xi;
    }
    let disc_lambda = lattice.discriminant();
    let corner = q_e - Rat::new(BigInt::from(target_disc), disc_lambda);
    if !corner.denom().is_one() || !(corner.numer() % BigInt::from(2)).is_zero() {
        return Some(0);
    }
    let corner = corner.to_integer().to_i64().expect("small");

    let big_disc = lattice.extended_discriminant(h, degrees).to_i64().expect("small");
    let t_bound = (1..).find(|t| t * t > big_disc).unwrap_or(1);
    // coarse but sound coordinate bound: any solution has
    // b = gram^{-1}(d − t e), so |b_i| <= Σ_j |inv_ij| (|d_j| + T |e_j|)
    let inv = lattice.gram_inverse()?;
    let mut b_bound: i64 = 1;
    for row in &inv {
        let mut acc = Rat::zero();
        for (j, c) in row.iter().enumerate() {
            let mag = if c.is_negative() { -c.clone() } else { c.clone() };
            acc += mag * Rat::from_integer(BigInt::from(degrees[j].abs() + t_bound * e[j].abs()));
        }
        b_bound = b_bound.max(acc.ceil().to_integer().to_i64().expect("small") + 1);
    }
    let box_points = (2 * b_bound + 1).checked_pow(r as u32)?.checked_mul(2 * t_bound + 1)?;
    if box_points > 6_000_000 {
        return None; // budget guard; the caller resamples
    }

    let mut count = 0u64;
    let mut b = vec![-b_bound; r];
    loop {
        for t in -t_bound..=t_bound {
            if t == 0 {
                continue;
            }
            let mut degrees_ok = true;
            for i in 0..r {
                let mut pair = t * e[i];
                for j in 0..r {
                    pair += gram[i][j] * b[j];
                }
                if pair != degrees[i] {
                    degrees_ok = false;
                    break;
                }
            }
            if !degrees_ok {
                continue;
            }
            let mut norm = corner * t * t;
            for i in 0..r {
                norm += 2 * t * e[i] * b[i];
                for j in 0..r {
                    norm += gram[i][j] * b[i] * b[j];
                }
            }
            if norm == 2 * h - 2 {
                count += 1;
            }
        }
        let mut i = 0;
        loop {
            if i == r {
                return Some(count);
            }
            b[i] += 1;
            if b[i] <= b_bound {
                break;
            }
            b[i] = -b_bound;
            i += 1;
        }
    }
}

#[test]
fn criterion_09_refined_multiplicity_oracle() {
    let start = Instant::now();
    let mut rng = Rng(20260808);
    let mut cases = 0u32;
    let mut ok = true;
    while cases < 50 {
        // random even lattice of rank 1 or 2, signature (1, r-1), |entries| <= 6
        let rank = rng.range(1, 2) as usize;
        let gram = if rank == 1 {
            vec![vec![2 * rng.range(1, 3)]]
        } else {
            let b = rng.range(-6, 6);
            vec![vec![2 * rng.range(-3, 3), b], vec![b, 2 * rng.range(-3, 3)]]
        };
        let Ok(lattice) = EvenLattice::new(gram) else { continue };
        if lattice.det().is_zero() || lattice.signature() != (1, rank - 1, 0) {
            continue;
        }
        let h = rng.range(-1, 3);
        let degrees: Vec<i64> = (0..rank).map(|_| rng.range(-5, 5)).collect();
        let disc_big = lattice.extended_discriminant(h, &degrees);
        if !disc_big.is_positive() || disc_big > BigInt::from(90) {
            continue;
        }
        let disc = disc_big.to_i64().expect("small");
        let group = discriminant_group(&lattice).expect("nondegenerate");
        let classes = group.classes_mod_negation();

        // all candidate types: Δ = disc/t² over square divisors, δ over G/±
        let mut smart_total = 0u64;
        let mut box_total = 0u64;
        let mut budget_ok = true;
        for t in 1.. {
            if t * t > disc {
                break;
            }
            if disc % (t * t) != 0 {
                continue;
            }
            let target = disc / (t * t);
            for class in &classes {
                let smart = refined_multiplicity(
                    &lattice,
                    h,
                    &degrees,
                    &BigInt::from(target),
                    class,
                )
                .expect("positive discriminant");
                match oracle_box_count(&lattice, h, &degrees, target, class) {
                    Some(bute) => {
                        if smart != bute {
                            ok = false;
                            println!(
                                "  mismatch: gram {:?}, h={h}, d={degrees:?}, type ({target}, {class}): \
                                 smart {smart} vs box {bute}",
                                lattice.gram()
                            );
                        }
                        smart_total += smart;
                        box_total += bute;
                    }
                    None => {
                        budget_ok = false;
                        break;
                    }
                }
            }
            if !budget_ok {
                break;
            }
        }
        if !budget_ok {
            continue; // resample an instance whose box fits the budget
        }
        // partition property: the per-type counts exhaust the box totals and
        // include the adjoined generator itself
        ok &= smart_total == box_total && smart_total >= 1;
        cases += 1;
    }
    let ms = start.elapsed().as_millis();
    report(9, ok && ms < 30_000, ms, "50 random lattices: oracle agreement and partition");
    assert!(ok, "multiplicity oracle disagreement");
    assert!(ms < 30_000, "over the 30 s budget");
}

#[test]
fn criterion_10_gwnl_roundtrip() {
    let start = Instant::now();
    let mut rng = Rng(41);
    let mut ok = true;
    for _case in 0..20 {
        let lattice =
            EvenLattice::new(vec![vec![2, 3, 0], vec![3, 0, 0], vec![0, 0, -2]]).expect("rank 3");
        let (gmax, mmax, hmax) = (2i64, 2i64, 5i64);
        let mut provider = TableProvider::new(lattice, rat(-2));
        let mut input: BTreeMap<(i64, i64, i64), Rat> = BTreeMap::new();
        for m in 1..=mmax {
            for h in 1..=hmax {
                if (h - 1) % (m * m) != 0 {
                    continue;
                }
                let s = (h - 1) / (m * m) + 1;
                let degrees = inversion_degrees(m, s);
                for hp in 0..h {
                    for mp in 1..=mmax {
                        // positive-discriminant strip values, random
                        provider.set(Some(mp), hp, &degrees, rat(rng.range(-5, 5)));
                    }
                }
                for g in 0..=gmax {
                    let v = rng.range(-9, 9);
                    if v != 0 {
                        input.insert((g, m, h), rat(v));
                    }
                }
            }
        }
        let mut with_seed = input.clone();
        with_seed.insert((0, 1, 0), Rat::one());
        let n = |g: i64, d: &[i64]| {
            gwnl_forward_refined(&with_seed, &provider, g, d).expect("forward")
        };
        let solved = gwnl_invert(n, &provider, gmax, mmax, hmax).expect("invert");
        ok &= solved == input;
    }
    let ms = start.elapsed().as_millis();
    report(10, ok && ms < 5000, ms, "20 synthetic forward/invert roundtrips, leading value -2");
    assert!(ok, "roundtrip mismatch");
    assert!(ms < 5000, "over the 5 s budget");
}
