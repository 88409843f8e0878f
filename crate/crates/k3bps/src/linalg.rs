//! Exact dense linear algebra over the rationals, just enough for the
//! coefficient-matching solves used by the BPS extractions.

use num_traits::Zero;
use qseries::Rat;

/// Outcome of an exact Gaussian elimination on an overdetermined system.
pub struct SolveOutcome {
    /// One value per unknown, valid only when `unique && consistent`.
    pub solution: Vec<Rat>,
    /// Every unknown had a pivot.
    pub unique: bool,
    /// No row reduced to `0 = nonzero`.
    pub consistent: bool,
}

/// Solve `A·x = b` exactly, where `A` is `rows × cols` (rows ≥ cols allowed).
pub fn solve_exact(mut a: Vec<Vec<Rat>>, mut b: Vec<Rat>) -> SolveOutcome {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut pivot_row_of_col: Vec<Option<usize>> = vec![None; cols];
    let mut row = 0usize;
    for col in 0..cols {
        let Some(p) = (row..rows).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(row, p);
        b.swap(row, p);
        let inv = a[row][col].recip();
        for c in col..cols {
            let v = &a[row][c] * &inv;
            a[row][c] = v;
        }
        b[row] = &b[row] * &inv;
        for r in 0..rows {
            if r != row && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in col..cols {
                    let v = &a[r][c] - &f * &a[row][c];
                    a[r][c] = v;
                }
                let v = &b[r] - &f * &b[row];
                b[r] = v;
            }
        }
        pivot_row_of_col[col] = Some(row);
        row += 1;
        if row == rows {
            break;
        }
    }
    let unique = pivot_row_of_col.iter().all(Option::is_some);
    let consistent = (0..rows).all(|r| {
        (0..cols).any(|c| !a[r][c].is_zero()) || b[r].is_zero()
    });
    let solution = pivot_row_of_col
        .into_iter()
        .map(|p| p.map_or_else(Rat::zero, |r| b[r].clone()))
        .collect();
    SolveOutcome { solution, unique, consistent }
}

#[cfg(test)]
mod tests {
    use super::*;
    use qseries::{rat, ratio};

    #[test]
    fn solves_square_system() {
        let a = vec![vec![rat(2), rat(1)], vec![rat(1), rat(-1)]];
        let b = vec![rat(4), rat(-1)];
        let out = solve_exact(a, b);
        assert!(out.unique && out.consistent);
        assert_eq!(out.solution, vec![rat(1), rat(2)]);
    }

    #[test]
    fn detects_inconsistency_and_rank_deficiency() {
        let a = vec![vec![rat(1), rat(1)], vec![rat(2), rat(2)]];
        let out = solve_exact(a.clone(), vec![rat(1), rat(3)]);
        assert!(!out.consistent);
        let out2 = solve_exact(a, vec![rat(1), rat(2)]);
        assert!(out2.consistent && !out2.unique);
    }

    #[test]
    fn overdetermined_consistent() {
        let a = vec![vec![rat(1)], vec![rat(2)], vec![rat(3)]];
        let b = vec![ratio(1, 2), rat(1), ratio(3, 2)];
        let out = solve_exact(a, b);
        assert!(out.unique && out.consistent);
        assert_eq!(out.solution, vec![ratio(1, 2)]);
    }
}
