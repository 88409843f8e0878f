//! Named verification suites: each check recomputes a published value or a
//! structural identity from scratch and reports pass/fail with the first
//! mismatch. The CLI `verify` subcommand prints one line per check; the exit
//! code reflects the overall result.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use qseries::{rat, Exp, FracSeries, Rat};

use crate::kawai_yoshioka::{i_series, kkv_cross_check, rationality_witness};
use crate::kkv::{extract_r_table, yau_zaslow};
use crate::lattice::{discriminant_group, CosetClass, EvenLattice};
use crate::multicover::{divisibility_independence_check, recursion_check, rtilde_multiple};
use crate::noether_lefschetz::{
    gwnl_forward_refined, gwnl_invert, inversion_degrees, refined_multiplicity, TableProvider,
};
use crate::potentials::{dictionary_check, potential_equality_check};
use crate::quartic::QuarticPencil;

/// One verification item.
#[derive(Clone, Debug)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn pass(name: impl Into<String>, detail: impl Into<String>) -> Self {
        Check { name: name.into(), passed: true, detail: detail.into() }
    }
    fn fail(name: impl Into<String>, detail: impl Into<String>) -> Self {
        Check { name: name.into(), passed: false, detail: detail.into() }
    }
    fn from(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Check { name: name.into(), passed, detail: detail.into() }
    }
}

/// Scales for the verification suites.
#[derive(Clone, Copy, Debug)]
pub struct VerifyConfig {
    pub hmax: i64,
    pub gmax: i64,
    pub mmax: i64,
    pub dmax: i64,
    pub q_order: i64,
    pub y_order: i64,
    pub lambda_order: i64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            hmax: 6,
            gmax: 4,
            mmax: 3,
            dmax: 3,
            q_order: 10,
            y_order: 16,
            lambda_order: 12,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Kkv,
    Ky,
    Dictionary,
    Multicover,
    Recursion,
    Nl,
    All,
}

impl Suite {
    pub fn parse(name: &str) -> Option<Self> {
        Some(match name {
            "kkv" => Suite::Kkv,
            "ky" => Suite::Ky,
            "dictionary" => Suite::Dictionary,
            "multicover" => Suite::Multicover,
            "recursion" => Suite::Recursion,
            "nl" => Suite::Nl,
            "all" => Suite::All,
            _ => return None,
        })
    }
}

/// Run one suite (or all of them).
pub fn run_suite(suite: Suite, cfg: &VerifyConfig) -> Vec<Check> {
    match suite {
        Suite::Kkv => suite_kkv(cfg),
        Suite::Ky => suite_ky(cfg),
        Suite::Dictionary => suite_dictionary(cfg),
        Suite::Multicover => suite_multicover(cfg),
        Suite::Recursion => suite_recursion(cfg),
        Suite::Nl => suite_nl(cfg),
        Suite::All => {
            let mut out = Vec::new();
            for s in [Suite::Kkv, Suite::Ky, Suite::Dictionary, Suite::Multicover, Suite::Recursion, Suite::Nl] {
                out.extend(run_suite(s, cfg));
            }
            out
        }
    }
}

/// The 15 published low-degree BPS counts, by `(g, h, value)`.
pub const GOLDEN_R_TABLE: [(i64, i64, i64); 15] = [
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

fn suite_kkv(cfg: &VerifyConfig) -> Vec<Check> {
    let mut out = Vec::new();
    let table = match extract_r_table(cfg.hmax.max(4)) {
        Ok(t) => t,
        Err(e) => return vec![Check::fail("kkv/extract", e.to_string())],
    };
    let mut bad = Vec::new();
    for (g, h, v) in GOLDEN_R_TABLE {
        if table.get(g, h) != BigInt::from(v) {
            bad.push(format!("r_{{{g},{h}}} = {} (expected {v})", table.get(g, h)));
        }
    }
    out.push(Check::from(
        "kkv/golden-table",
        bad.is_empty(),
        if bad.is_empty() { "15/15 published entries".into() } else { bad.join("; ") },
    ));

    let mut law_fail = None;
    for h in 0..=table.hmax() {
        for g in (h + 1)..=(h + 3) {
            if !table.get(g, h).is_zero() {
                law_fail = Some(format!("r_{{{g},{h}}} nonzero above the diagonal"));
            }
        }
        let diag = table.get(h, h);
        let expect = if h % 2 == 0 { BigInt::from(h + 1) } else { -BigInt::from(h + 1) };
        if diag != expect {
            law_fail = Some(format!("diagonal r_{{{h},{h}}} = {diag}, expected {expect}"));
        }
    }
    out.push(Check::from(
        "kkv/structural-laws",
        law_fail.is_none(),
        law_fail.unwrap_or_else(|| format!("vanishing and diagonal laws, h <= {}", table.hmax())),
    ));

    let yz = yau_zaslow(cfg.q_order + 1);
    let mut yz_fail = None;
    for h in 0..=cfg.q_order.min(table.hmax()) {
        let lhs = table.get_rat(0, h);
        let rhs = yz.coeff_int(h).expect("within order");
        if lhs != rhs {
            yz_fail = Some(format!("q^{h}: table {lhs} vs product {rhs}"));
            break;
        }
    }
    out.push(Check::from(
        "kkv/genus-zero-row",
        yz_fail.is_none(),
        yz_fail.unwrap_or_else(|| format!("matches the 24th-power product through q^{}", cfg.q_order.min(table.hmax()))),
    ));
    out
}

fn suite_ky(cfg: &VerifyConfig) -> Vec<Check> {
    let mut out = Vec::new();
    let table = match extract_r_table(cfg.hmax) {
        Ok(t) => t,
        Err(e) => return vec![Check::fail("ky/extract", e.to_string())],
    };
    for h in 0..=cfg.hmax {
        let y_order = cfg.y_order.max(2 * h + 4);
        let name = format!("ky/cross-check-h{h}");
        match kkv_cross_check(h, &table, y_order) {
            Ok(true) => out.push(Check::pass(name, "both extraction routes agree")),
            Ok(false) => out.push(Check::fail(name, "row mismatch")),
            Err(e) => out.push(Check::fail(name, e.to_string())),
        }
    }
    // the signed residue series at h = 1 starts -2 + 24q - 48q^2
    let i1 = i_series(1, 6);
    let head_ok = i1.series.coeff_int(0).unwrap() == rat(-2)
        && i1.series.coeff_int(1).unwrap() == rat(24)
        && i1.series.coeff_int(2).unwrap() == rat(-48);
    out.push(Check::from("ky/i1-head", head_ok, "t·I_1 = -2 + 24y - 48y^2 + ..."));
    out
}

fn suite_dictionary(cfg: &VerifyConfig) -> Vec<Check> {
    let mut out = Vec::new();
    for g in 0..=cfg.gmax {
        for d in 1..=cfg.dmax {
            let name = format!("dictionary/g{g}-d{d}");
            match dictionary_check(g, d, cfg.lambda_order) {
                Ok(true) => {
                    out.push(Check::pass(name, "imaginary parts vanish, real parts agree"))
                }
                Ok(false) => out.push(Check::fail(name, "coefficient mismatch")),
                Err(e) => out.push(Check::fail(name, e.to_string())),
            }
        }
    }
    let needed = cfg.mmax * cfg.mmax + 1; // class mmax·α at h = 2
    match extract_r_table(needed.max(4)) {
        Ok(table) => {
            for h in [1i64, 2] {
                let name = format!("dictionary/potential-equality-h{h}");
                match potential_equality_check(&table, h, cfg.mmax, 10) {
                    Ok(true) => out.push(Check::pass(name, "potentials agree under -q = e^{i\u{3bb}}")),
                    Ok(false) => out.push(Check::fail(name, "potential mismatch")),
                    Err(e) => out.push(Check::fail(name, e.to_string())),
                }
            }
        }
        Err(e) => out.push(Check::fail("dictionary/potential-equality", e.to_string())),
    }
    out
}

fn suite_multicover(cfg: &VerifyConfig) -> Vec<Check> {
    let mut out = Vec::new();
    for (m, h) in [(2i64, 1i64), (2, 2), (3, 1)] {
        let name = format!("multicover/divisibility-m{m}-h{h}");
        let order = 8 + 2 * m * m * (h - 1).max(1) + 6;
        match divisibility_independence_check(m, h, order) {
            Ok(true) => out.push(Check::pass(name, "BPS counts independent of divisibility")),
            Ok(false) => out.push(Check::fail(name, "extracted counts differ")),
            Err(e) => out.push(Check::fail(name, e.to_string())),
        }
    }
    // rationality witness: t·I_h·(1+y)²/y is a Laurent polynomial with
    // support inside [-h, h] through the window
    let mut witness_fail = None;
    for h in 0..=cfg.hmax {
        let y_order = (3 * h + 10).max(cfg.y_order);
        let (w, top) = rationality_witness(h, y_order);
        let lo = w.min_exp().map(|e| e.to_integer()).unwrap_or(0);
        let hi = top.unwrap_or(0);
        if lo < -h || hi > h {
            witness_fail = Some(format!("h={h}: support [{lo}, {hi}] exceeds [-{h}, {h}]"));
            break;
        }
    }
    out.push(Check::from(
        "multicover/rationality-witness",
        witness_fail.is_none(),
        witness_fail.unwrap_or_else(|| format!("Laurent polynomial with support in [-h, h], h <= {}", cfg.hmax)),
    ));
    out
}

fn suite_recursion(cfg: &VerifyConfig) -> Vec<Check> {
    let mut out = Vec::new();
    // KY-derived inputs
    let rt: Vec<FracSeries<Rat>> =
        (1..=4).map(|k| rtilde_multiple(k, 1, cfg.q_order + 4).series).collect();
    out.push(Check::from(
        "recursion/ky-inputs-m4",
        recursion_check(&rt),
        "star-restricted recursion on the degree-1 tower",
    ));
    // randomized synthetic inputs
    let mut rng = XorShift::new(0x9e3779b97f4a7c15);
    let mut failed = None;
    for case in 0..20 {
        let trunc = Exp::from_integer(7);
        let rt: Vec<FracSeries<Rat>> = (1..=4)
            .map(|_| {
                FracSeries::from_integer_terms(
                    trunc,
                    (-2..7).map(|e| (e, rat(rng.next_range(-9, 9)))),
                )
            })
            .collect();
        if !recursion_check(&rt) {
            failed = Some(format!("synthetic case {case}"));
            break;
        }
    }
    out.push(Check::from(
        "recursion/synthetic-20",
        failed.is_none(),
        failed.unwrap_or_else(|| "20 randomized inputs".into()),
    ));
    out
}

/// The five displayed coefficients of `Θ` by `(numerator-of-8ths, value)` as
/// printed; `q^{3/2}` is printed as 50016 although the defining polynomial
/// evaluates to 5016 there (the other four values, the Hodge degree and the
/// mod-8 support all pin the polynomial, so the printed digit string cannot
/// be reproduced by any faithful evaluation).
pub const GOLDEN_THETA_PRINTED: [(i64, i64); 5] =
    [(0, -1), (8, 108), (9, 320), (12, 50016), (16, 76950)];

fn suite_nl(cfg: &VerifyConfig) -> Vec<Check> {
    let mut out = Vec::new();
    let pencil = QuarticPencil::for_degree(cfg.dmax.max(3));
    for (k, v) in GOLDEN_THETA_PRINTED {
        let got = pencil.theta().coeff(Exp::new(k, 8)).expect("computed");
        let name = format!("nl/theta-{k}-8ths");
        if got == rat(v) {
            out.push(Check::pass(name, format!("Θ[{k}/8] = {v}")));
        } else {
            out.push(Check::fail(
                name,
                format!(
                    "Θ[{k}/8] computed {got} from the defining polynomial, printed value {v} \
                     (the printed expansion misprints this coefficient)"
                ),
            ));
        }
    }
    // quartic parity and the degree-1 count
    let table = extract_r_table(cfg.hmax.max(4)).expect("table");
    let mut parity_ok = true;
    for h in 0..=2 {
        for d in 0..=cfg.dmax {
            if pencil.nl(h, d) != pencil.nl(h, -d) {
                parity_ok = false;
            }
        }
    }
    out.push(Check::from("nl/quartic-parity", parity_ok, "NL_{h,d} = NL_{h,-d}"));
    out.push(Check::from(
        "nl/quartic-degree-one",
        pencil.bps(&table, 0, 1) == BigInt::from(320),
        "n_{0,1} = 320 (Θ[1/8] vanishes)",
    ));

    // refined multiplicities against the box oracle on random small lattices
    let mut rng = XorShift::new(0x2545f4914f6cdd1d);
    let mut mult_fail = None;
    let mut cases = 0;
    while cases < 10 {
        let Some(instance) = random_multiplicity_instance(&mut rng) else { continue };
        match partition_check(&instance) {
            Ok(()) => cases += 1,
            Err(e) => {
                mult_fail = Some(e);
                break;
            }
        }
    }
    out.push(Check::from(
        "nl/refined-multiplicity-oracle",
        mult_fail.is_none(),
        mult_fail.unwrap_or_else(|| "10 random lattices: per-type counts and partition".into()),
    ));

    // triangular inversion roundtrip on synthetic providers
    let mut rng = XorShift::new(0x135d1a2b3c4d5e6f);
    let mut round_fail = None;
    for case in 0..8 {
        if let Err(e) = gwnl_roundtrip_case(&mut rng) {
            round_fail = Some(format!("case {case}: {e}"));
            break;
        }
    }
    out.push(Check::from(
        "nl/gwnl-roundtrip",
        round_fail.is_none(),
        round_fail.unwrap_or_else(|| "8 synthetic forward/invert roundtrips".into()),
    ));
    out
}

// ---------------------------------------------------------------------------
// synthetic-instance machinery shared by the `verify` suites
// ---------------------------------------------------------------------------

/// Deterministic xorshift64*; the verification suites must not depend on an
/// external RNG for reproducibility.
pub struct XorShift {
    state: u64,
}

impl XorShift {
    pub fn new(seed: u64) -> Self {
        XorShift { state: seed.max(1) }
    }

    pub fn next_u64(&mut self) -> u64 {
        let mut x = self.state;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        self.state = x;
        x.wrapping_mul(0x2545_f491_4f6c_dd1d)
    }

    /// Uniform-ish in `[lo, hi]` inclusive.
    pub fn next_range(&mut self, lo: i64, hi: i64) -> i64 {
        let span = (hi - lo + 1) as u64;
        lo + (self.next_u64() % span) as i64
    }
}

/// A random even lattice of rank 1 or 2 with signature `(1, r−1)` and small
/// entries, plus a query `(h, degrees)` with small positive discriminant.
pub struct MultiplicityInstance {
    pub lattice: EvenLattice,
    pub h: i64,
    pub degrees: Vec<i64>,
}

pub fn random_multiplicity_instance(rng: &mut XorShift) -> Option<MultiplicityInstance> {
    let rank = rng.next_range(1, 2) as usize;
    let gram: Vec<Vec<i64>> = if rank == 1 {
        vec![vec![2 * rng.next_range(1, 3)]]
    } else {
        let a = 2 * rng.next_range(-3, 3);
        let b = rng.next_range(-6, 6);
        let c = 2 * rng.next_range(-3, 3);
        vec![vec![a, b], vec![b, c]]
    };
    let lattice = EvenLattice::new(gram).ok()?;
    if lattice.det().is_zero() || lattice.signature() != (1, rank - 1, 0) {
        return None;
    }
    let h = rng.next_range(-1, 3);
    let degrees: Vec<i64> = (0..rank).map(|_| rng.next_range(-5, 5)).collect();
    let disc = lattice.extended_discriminant(h, &degrees);
    if !disc.is_positive() || disc > BigInt::from(100) {
        return None;
    }
    Some(MultiplicityInstance { lattice, h, degrees })
}

/// Check every candidate type of an instance against the brute-force box
/// oracle, and the partition property (sum over types = total box count).
pub fn partition_check(inst: &MultiplicityInstance) -> Result<(), String> {
    let disc = inst.lattice.extended_discriminant(inst.h, &inst.degrees);
    let group = discriminant_group(&inst.lattice).map_err(|e| e.to_string())?;
    let classes = group.classes_mod_negation();
    let mut smart_total = 0u64;
    let mut box_total = 0u64;
    let mut t = 1i64;
    while BigInt::from(t * t) <= disc {
        if (&disc % BigInt::from(t * t)).is_zero() {
            let target: BigInt = &disc / BigInt::from(t * t);
            for class in &classes {
                let smart =
                    refined_multiplicity(&inst.lattice, inst.h, &inst.degrees, &target, class)
                        .map_err(|e| e.to_string())?;
                let brute = box_multiplicity(&inst.lattice, inst.h, &inst.degrees, &target, class)
                    .ok_or_else(|| "box budget exceeded".to_string())?;
                if smart != brute {
                    return Err(format!(
                        "type (Δ={target}, δ={class}): smart {smart} vs box {brute} \
                         at h={}, d={:?}",
                        inst.h, inst.degrees
                    ));
                }
                smart_total += smart;
                box_total += brute;
            }
        }
        t += 1;
    }
    // a non-divisor target never counts
    let bogus = &disc + BigInt::from(1);
    for class in &classes {
        let smart = refined_multiplicity(&inst.lattice, inst.h, &inst.degrees, &bogus, class)
            .map_err(|e| e.to_string())?;
        if smart != 0 {
            return Err(format!("non-divisor Δ={bogus} counted {smart}"));
        }
    }
    if smart_total != box_total {
        return Err(format!("partition mismatch: {smart_total} vs {box_total}"));
    }
    if smart_total == 0 {
        return Err("total count must include the adjoined generator".into());
    }
    Ok(())
}

/// Brute-force multiplicity by exhaustive integer sweep over a bounded
/// coefficient box in the type-`(Δ, δ)` receptacle, checking the degree and
/// norm constraints by direct pairing evaluation. Returns `None` when the
/// analytically derived box would exceed the search budget.
pub fn box_multiplicity(
    lattice: &EvenLattice,
    h: i64,
    degrees: &[i64],
    target_disc: &BigInt,
    target_coset: &CosetClass,
) -> Option<u64> {
    if !target_disc.is_positive() {
        return Some(0);
    }
    let r = lattice.rank();
    // receptacle data: border e and corner c
    let e = target_coset.functional(lattice);
    let e_i64: Vec<i64> = e.iter().map(|v| i64::try_from(v).expect("small")).collect();
    let mut q_e = Rat::zero();
    for (ei, xi) in e.iter().zip(target_coset.dual_coords()) {
        q_e += Rat::from_integer(ei.clone()) * xi;
    }
    let corner = q_e - Rat::new(target_disc.clone(), lattice.discriminant());
    if !corner.denom().is_one() || !(corner.numer() % BigInt::from(2)).is_zero() {
        return Some(0);
    }
    let corner = i64::try_from(corner.to_integer()).expect("small");

    // |t| <= sqrt(Δ(h,d)) since Δ | Δ(h,d) with square cofactor
    let big_disc = lattice.extended_discriminant(h, degrees);
    let t_bound = i64::try_from(big_disc.sqrt()).expect("small") + 1;
    // |b_i| <= max_t ||gram^{-1} (d - t e)||_inf, over the t-range
    let inv = lattice.gram_inverse()?;
    let mut b_bound = 1i64;
    for t in [-t_bound, t_bound] {
        for row in &inv {
            let mut acc = Rat::zero();
            for (j, c) in row.iter().enumerate() {
                acc += c * Rat::from_integer(BigInt::from(degrees[j]))
                    - c * Rat::from_integer(BigInt::from(t) * &e[j]);
            }
            let bound = acc.ceil().to_integer().magnitude().clone();
            let bound = i64::try_from(BigInt::from(bound)).expect("small") + 1;
            b_bound = b_bound.max(bound);
        }
    }
    let budget: i64 = 4_000_000;
    let box_size = (2 * b_bound + 1).checked_pow(r as u32)?.checked_mul(2 * t_bound + 1)?;
    if box_size > budget {
        return None;
    }

    let gram = lattice.gram();
    let mut count = 0u64;
    let mut b = vec![-b_bound; r];
    'sweep: loop {
        for t in -t_bound..=t_bound {
            if t == 0 {
                continue;
            }
            // degree constraints: (gram b)_i + t e_i = d_i
            let mut ok = true;
            for i in 0..r {
                let mut acc = 0i64;
                for j in 0..r {
                    acc += gram[i][j] * b[j];
                }
                if acc + t * e_i64[i] != degrees[i] {
                    ok = false;
                    break;
                }
            }
            if !ok {
                continue;
            }
            // norm constraint: b^T gram b + 2 t (e·b) + c t² = 2h−2
            let mut norm = corner * t * t;
            for i in 0..r {
                norm += 2 * t * e_i64[i] * b[i];
                for j in 0..r {
                    norm += gram[i][j] * b[i] * b[j];
                }
            }
            if norm == 2 * h - 2 {
                count += 1;
            }
        }
        // advance the box counter
        let mut i = 0;
        loop {
            if i == r {
                break 'sweep;
            }
            b[i] += 1;
            if b[i] <= b_bound {
                break;
            }
            b[i] = -b_bound;
            i += 1;
        }
    }
    Some(count)
}

/// One synthetic forward/invert roundtrip honoring the triangular support
/// with leading value −2.
pub fn gwnl_roundtrip_case(rng: &mut XorShift) -> Result<(), String> {
    let lattice = EvenLattice::new(vec![vec![2, 3, 0], vec![3, 0, 0], vec![0, 0, -2]])
        .expect("rank-3 family lattice");
    let (gmax, mmax, hmax) = (2i64, 2i64, 5i64);
    let mut provider = TableProvider::new(lattice, rat(-2));
    let mut r_input: BTreeMap<(i64, i64, i64), Rat> = BTreeMap::new();
    for m in 1..=mmax {
        for h in 1..=hmax {
            if (h - 1) % (m * m) != 0 {
                continue;
            }
            let s = (h - 1) / (m * m) + 1;
            let degrees = inversion_degrees(m, s);
            // positive-discriminant values needed when stripping below h
            for hp in 0..h {
                for mp in 1..=mmax {
                    provider.set(Some(mp), hp, &degrees, rat(rng.next_range(-5, 5)));
                }
            }
            for g in 0..=gmax {
                let v = rng.next_range(-9, 9);
                if v != 0 {
                    r_input.insert((g, m, h), rat(v));
                }
            }
        }
    }
    let mut full = r_input.clone();
    full.insert((0, 1, 0), Rat::one());
    let n = |g: i64, d: &[i64]| {
        gwnl_forward_refined(&full, &provider, g, d).expect("forward sum")
    };
    let solved = gwnl_invert(n, &provider, gmax, mmax, hmax).map_err(|e| e.to_string())?;
    if solved != r_input {
        return Err("recovered table differs from the input".into());
    }
    Ok(())
}
