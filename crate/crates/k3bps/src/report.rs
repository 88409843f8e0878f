//! Deterministic serialization helpers: canonical JSON values and CSV rows
//! for series and tables. Every rational is rendered in lowest terms as
//! `"p/q"` (or `"n"` when integral), so no precision is lost in transit and
//! output is byte-identical across runs.

use num_traits::One;
use qseries::{Exp, FracSeries, Rat};
use serde_json::{json, Value};

/// Canonical string form of an exact rational.
pub fn rat_str(r: &Rat) -> String {
    // Display already prints `p/q`, or just `p` when the denominator is 1
    r.to_string()
}

/// Canonical string form of an exponent.
pub fn exp_str(e: Exp) -> String {
    if e.denom().is_one() {
        e.numer().to_string()
    } else {
        format!("{}/{}", e.numer(), e.denom())
    }
}

/// A series as its canonical text form: sorted `(exponent, coefficient)`
/// pairs plus the truncation bound.
pub fn series_json(s: &FracSeries<Rat>, variable: &str) -> Value {
    let terms: Vec<Value> = s
        .terms()
        .map(|(e, c)| {
            json!({
                "exponent": exp_str(e),
                "coefficient": rat_str(c),
            })
        })
        .collect();
    json!({
        "variable": variable,
        "grid": s.grid(),
        "truncation": exp_str(s.truncation()),
        "terms": terms,
    })
}

/// CSV rows (`exponent,coefficient`) for a series, with a header.
pub fn series_csv(s: &FracSeries<Rat>) -> String {
    let mut out = String::from("exponent,coefficient\n");
    for (e, c) in s.terms() {
        out.push_str(&format!("{},{}\n", exp_str(e), rat_str(c)));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use qseries::{rat, ratio};

    #[test]
    fn canonical_rational_strings() {
        assert_eq!(rat_str(&rat(5)), "5");
        assert_eq!(rat_str(&ratio(-3, 4)), "-3/4");
        assert_eq!(rat_str(&ratio(6, 4)), "3/2");
    }

    #[test]
    fn series_roundtrip_shape() {
        let s = FracSeries::from_grid_terms(
            8,
            Exp::new(3, 2),
            [(0, rat(-1)), (9, rat(320))],
        );
        let v = series_json(&s, "q");
        assert_eq!(v["grid"], 8);
        assert_eq!(v["truncation"], "3/2");
        assert_eq!(v["terms"][1]["exponent"], "9/8");
        assert_eq!(v["terms"][1]["coefficient"], "320");
        let csv = series_csv(&s);
        assert!(csv.contains("9/8,320"));
    }
}
