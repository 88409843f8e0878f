//! Randomized structural laws for the series engine: ring axioms, the
//! defining identities of `inv`/`log1`/`exp0`, infinite-product inverses,
//! and composition of the cover substitution.

use proptest::prelude::*;
use qseries::{infinite_product, rat, Exp, FracSeries, Rat};

fn t(n: i64) -> Exp {
    Exp::from_integer(n)
}

/// A small random Laurent series on grid 1 with truncation in (0, 12].
fn small_series() -> impl Strategy<Value = FracSeries<Rat>> {
    (
        1i64..=12,
        prop::collection::vec(((-3i64..8), (-9i64..=9), (1i64..=4)), 0..6),
    )
        .prop_map(|(trunc, terms)| {
            FracSeries::from_integer_terms(
                t(trunc),
                terms
                    .into_iter()
                    .map(|(e, n, d)| (e, Rat::new(n.into(), d.into()))),
            )
        })
}

/// Like [`small_series`], but with constant term 1 and no negative exponents.
fn one_plus_series() -> impl Strategy<Value = FracSeries<Rat>> {
    (
        2i64..=12,
        prop::collection::vec(((1i64..8), (-9i64..=9), (1i64..=4)), 0..5),
    )
        .prop_map(|(trunc, terms)| {
            let tail = terms
                .into_iter()
                .map(|(e, n, d)| (e, Rat::new(n.into(), d.into())));
            FracSeries::from_integer_terms(t(trunc), std::iter::once((0, rat(1))).chain(tail))
        })
}

/// Zero constant term, no negative exponents.
fn zero_constant_series() -> impl Strategy<Value = FracSeries<Rat>> {
    (
        2i64..=12,
        prop::collection::vec(((1i64..8), (-9i64..=9), (1i64..=4)), 0..5),
    )
        .prop_map(|(trunc, terms)| {
            FracSeries::from_integer_terms(
                t(trunc),
                terms
                    .into_iter()
                    .map(|(e, n, d)| (e, Rat::new(n.into(), d.into()))),
            )
        })
}

/// Compare two series on every grid point below `through`.
fn agree_below(a: &FracSeries<Rat>, b: &FracSeries<Rat>, through: Exp) -> bool {
    assert!(through <= a.truncation() && through <= b.truncation());
    let g = num_integer::lcm(a.grid(), b.grid());
    let mut k = -(12 * g);
    while Exp::new(k, g) < through {
        if a.coeff(Exp::new(k, g)).unwrap() != b.coeff(Exp::new(k, g)).unwrap() {
            return false;
        }
        k += 1;
    }
    true
}

proptest! {
    #[test]
    fn mul_associative(a in small_series(), b in small_series(), c in small_series()) {
        let lhs = a.mul(&b).mul(&c);
        let rhs = a.mul(&b.mul(&c));
        let through = lhs.truncation().min(rhs.truncation());
        prop_assert!(agree_below(&lhs, &rhs, through));
    }

    #[test]
    fn mul_commutative(a in small_series(), b in small_series()) {
        prop_assert_eq!(a.mul(&b), b.mul(&a));
    }

    #[test]
    fn distributive(a in small_series(), b in small_series(), c in small_series()) {
        let lhs = a.mul(&b.add(&c));
        let rhs = a.mul(&b).add(&a.mul(&c));
        let through = lhs.truncation().min(rhs.truncation());
        prop_assert!(agree_below(&lhs, &rhs, through));
    }

    #[test]
    fn inverse_identity(a in small_series()) {
        prop_assume!(!a.is_zero_to_trunc());
        let inv = a.inv().unwrap();
        let prod = a.mul(&inv);
        let through = prod.truncation();
        let one = FracSeries::one(1, through);
        prop_assert!(agree_below(&prod, &one, through));
    }

    #[test]
    fn log_exp_roundtrip(a in one_plus_series()) {
        let round = a.log1().unwrap().exp0().unwrap();
        prop_assert_eq!(round, a);
    }

    #[test]
    fn exp_log_roundtrip(b in zero_constant_series()) {
        let round = b.exp0().unwrap().log1().unwrap();
        prop_assert_eq!(round, b);
    }

    #[test]
    fn infinite_product_inverse(exps in prop::collection::vec(-6i64..=6, 9)) {
        let order = 10;
        let p = infinite_product(order, |n| exps[(n - 1) as usize]);
        let q = infinite_product(order, |n| -exps[(n - 1) as usize]);
        let prod = p.mul(&q);
        let one = FracSeries::one(1, prod.truncation());
        prop_assert!(agree_below(&prod, &one, prod.truncation()));
    }

    #[test]
    fn substitute_cover_composes(a in small_series(), j in 1i64..=3, k in 1i64..=3) {
        let two_step = a.substitute_cover(j).unwrap().substitute_cover(k).unwrap();
        let one_step = a.substitute_cover(j * k).unwrap();
        prop_assert_eq!(two_step, one_step);
    }

    /// Soundness of truncation propagation: multiplying truncated views of
    /// two polynomials must agree with the full product everywhere below the
    /// propagated bound.
    #[test]
    fn mul_truncation_is_sound(
        a_terms in prop::collection::vec(((-4i64..9), (-9i64..=9)), 0..6),
        b_terms in prop::collection::vec(((-4i64..9), (-9i64..=9)), 0..6),
        ta in -2i64..=10,
        tb in -2i64..=10,
    ) {
        let full = t(64);
        let a_full = FracSeries::from_integer_terms(full, a_terms.iter().map(|&(e, n)| (e, rat(n))));
        let b_full = FracSeries::from_integer_terms(full, b_terms.iter().map(|&(e, n)| (e, rat(n))));
        let exact = a_full.mul(&b_full);
        let truncated = a_full.truncate_to(t(ta)).mul(&b_full.truncate_to(t(tb)));
        prop_assert!(truncated.truncation() <= exact.truncation());
        let mut e = -16i64;
        while t(e) < truncated.truncation() {
            prop_assert_eq!(
                truncated.coeff_int(e).unwrap(),
                exact.coeff_int(e).unwrap(),
                "exponent {}", e
            );
            e += 1;
        }
    }

    /// The same soundness for inversion: the inverse of a truncated view
    /// agrees with the inverse of the full series below its bound.
    #[test]
    fn inv_truncation_is_sound(
        lead in -3i64..=3,
        tail in prop::collection::vec((-9i64..=9), 0..5),
        trunc in 2i64..=9,
    ) {
        let full = t(40);
        let mut terms = vec![(lead, rat(1))];
        for (i, &n) in tail.iter().enumerate() {
            terms.push((lead + 1 + i as i64, rat(n)));
        }
        let a_full = FracSeries::from_integer_terms(full, terms);
        let exact = a_full.inv().unwrap();
        let view = a_full.truncate_to(t(lead + trunc));
        let inv_view = view.inv().unwrap();
        let mut e = -16i64;
        while t(e) < inv_view.truncation() {
            prop_assert_eq!(
                inv_view.coeff_int(e).unwrap(),
                exact.coeff_int(e).unwrap(),
                "exponent {}", e
            );
            e += 1;
        }
    }
}
