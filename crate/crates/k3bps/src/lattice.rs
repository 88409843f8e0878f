//! Even-lattice machinery: Gram matrices, discriminants, discriminant groups
//! via integer normal form, coset classes modulo negation, divisibility, and
//! refined multiplicities by exact enumeration.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use qseries::Rat;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LatticeError {
    /// Gram matrix is not square or not symmetric, or has an odd diagonal.
    NotEven(String),
    /// Operation requires a nondegenerate Gram matrix.
    DegenerateLattice,
    /// Divisibility of the zero vector is undefined.
    ZeroVector,
}

impl fmt::Display for LatticeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LatticeError::NotEven(msg) => write!(f, "not an even lattice: {msg}"),
            LatticeError::DegenerateLattice => write!(f, "degenerate Gram matrix"),
            LatticeError::ZeroVector => write!(f, "zero vector has no divisibility"),
        }
    }
}

impl std::error::Error for LatticeError {}

/// A lattice with an integral Gram matrix that is symmetric with even
/// diagonal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvenLattice {
    gram: Vec<Vec<i64>>,
}

impl EvenLattice {
    pub fn new(gram: Vec<Vec<i64>>) -> Result<Self, LatticeError> {
        let r = gram.len();
        if r == 0 {
            return Err(LatticeError::NotEven("empty Gram matrix".into()));
        }
        if gram.iter().any(|row| row.len() != r) {
            return Err(LatticeError::NotEven("matrix is not square".into()));
        }
        for i in 0..r {
            if gram[i][i] % 2 != 0 {
                return Err(LatticeError::NotEven(format!("odd diagonal entry at {i}")));
            }
            for j in 0..i {
                if gram[i][j] != gram[j][i] {
                    return Err(LatticeError::NotEven(format!(
                        "asymmetric entries at ({i},{j})"
                    )));
                }
            }
        }
        Ok(EvenLattice { gram })
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn gram(&self) -> &Vec<Vec<i64>> {
        &self.gram
    }

    /// `⟨a, b⟩` for coordinate vectors in the integral basis.
    pub fn pairing(&self, a: &[BigInt], b: &[BigInt]) -> BigInt {
        let mut acc = BigInt::zero();
        for (i, ai) in a.iter().enumerate() {
            for (j, bj) in b.iter().enumerate() {
                acc += ai * bj * BigInt::from(self.gram[i][j]);
            }
        }
        acc
    }

    /// Exact determinant of the Gram matrix.
    pub fn det(&self) -> BigInt {
        det_big(&self.gram_big())
    }

    /// `(−1)^{r−1} det(gram)`; positive for signature `(1, r−1)`.
    pub fn discriminant(&self) -> BigInt {
        let d = self.det();
        if (self.rank() as i64 - 1).rem_euclid(2) == 1 {
            -d
        } else {
            d
        }
    }

    fn gram_big(&self) -> Vec<Vec<BigInt>> {
        self.gram
            .iter()
            .map(|row| row.iter().map(|&v| BigInt::from(v)).collect())
            .collect()
    }

    /// Signature `(positive, negative, zero)` by exact symmetric reduction
    /// over the rationals.
    pub fn signature(&self) -> (usize, usize, usize) {
        let r = self.rank();
        let mut m: Vec<Vec<Rat>> = self
            .gram
            .iter()
            .map(|row| row.iter().map(|&v| Rat::from_integer(v.into())).collect())
            .collect();
        let mut pos = 0;
        let mut neg = 0;
        let mut zero = 0;
        let mut rows: Vec<usize> = (0..r).collect();
        while let Some(&i) = rows.first() {
            // find a nonzero diagonal pivot among the remaining rows
            let pivot = rows.iter().copied().find(|&k| !m[k][k].is_zero());
            let p = match pivot {
                Some(p) => p,
                None => {
                    // all remaining diagonal entries vanish: look for an
                    // off-diagonal entry to symmetrize, else all zero
                    let mut found = None;
                    'outer: for &a in &rows {
                        for &b in &rows {
                            if a != b && !m[a][b].is_zero() {
                                found = Some((a, b));
                                break 'outer;
                            }
                        }
                    }
                    match found {
                        None => {
                            zero += rows.len();
                            break;
                        }
                        Some((a, b)) => {
                            // row/col a += row/col b creates a nonzero diagonal
                            for k in 0..r {
                                let v = &m[a][k] + &m[b][k];
                                m[a][k] = v;
                            }
                            for k in 0..r {
                                let v = &m[k][a] + &m[k][b];
                                m[k][a] = v;
                            }
                            a
                        }
                    }
                }
            };
            let d = m[p][p].clone();
            if d.is_positive() {
                pos += 1;
            } else {
                neg += 1;
            }
            let remaining: Vec<usize> = rows.iter().copied().filter(|&k| k != p).collect();
            for &k in &remaining {
                if m[k][p].is_zero() {
                    continue;
                }
                let f = &m[k][p] / &d;
                for c in 0..r {
                    let v = &m[k][c] - &f * &m[p][c];
                    m[k][c] = v;
                }
                for c in 0..r {
                    let v = &m[c][k] - &f * &m[c][p];
                    m[c][k] = v;
                }
            }
            rows = remaining;
            let _ = i;
        }
        (pos, neg, zero)
    }

    /// Inverse of the Gram matrix over the rationals, if nondegenerate.
    pub fn gram_inverse(&self) -> Option<Vec<Vec<Rat>>> {
        let r = self.rank();
        let mut m: Vec<Vec<Rat>> = self
            .gram
            .iter()
            .map(|row| row.iter().map(|&v| Rat::from_integer(v.into())).collect())
            .collect();
        let mut inv: Vec<Vec<Rat>> = (0..r)
            .map(|i| (0..r).map(|j| if i == j { Rat::one() } else { Rat::zero() }).collect())
            .collect();
        for col in 0..r {
            let p = (col..r).find(|&k| !m[k][col].is_zero())?;
            m.swap(col, p);
            inv.swap(col, p);
            let d = m[col][col].clone();
            for c in 0..r {
                m[col][c] = &m[col][c] / &d;
                inv[col][c] = &inv[col][c] / &d;
            }
            for k in 0..r {
                if k != col && !m[k][col].is_zero() {
                    let f = m[k][col].clone();
                    for c in 0..r {
                        let v = &m[k][c] - &f * &m[col][c];
                        m[k][c] = v;
                        let v = &inv[k][c] - &f * &inv[col][c];
                        inv[k][c] = v;
                    }
                }
            }
        }
        Some(inv)
    }

    /// Solve `gram·x = d` over the rationals.
    pub fn solve_degrees(&self, degrees: &[i64]) -> Option<Vec<Rat>> {
        let inv = self.gram_inverse()?;
        Some(mat_vec(&inv, &degrees.iter().map(|&v| Rat::from_integer(v.into())).collect::<Vec<_>>()))
    }

    /// The unique `v` with `⟨v_i, v⟩ = d_i`, when `gram^{−1}·d` is integral.
    pub fn vector_of_degrees(&self, degrees: &[i64]) -> Option<Vec<BigInt>> {
        let x = self.solve_degrees(degrees)?;
        let mut out = Vec::with_capacity(x.len());
        for c in x {
            if !c.denom().is_one() {
                return None;
            }
            out.push(c.to_integer());
        }
        Some(out)
    }

    /// The extended discriminant `Δ(h, d) = (−1)^r det 𝕃_{h,d}` of the Gram
    /// matrix bordered by the degree vector and corner `2h−2`.
    pub fn extended_discriminant(&self, h: i64, degrees: &[i64]) -> BigInt {
        assert_eq!(degrees.len(), self.rank(), "degree vector must match the rank");
        let r = self.rank();
        let mut m = self.gram_big();
        for (i, &d) in degrees.iter().enumerate() {
            m[i].push(BigInt::from(d));
        }
        let mut last: Vec<BigInt> = degrees.iter().map(|&d| BigInt::from(d)).collect();
        last.push(BigInt::from(2 * h - 2));
        m.push(last);
        let d = det_big(&m);
        if (r as i64).rem_euclid(2) == 1 {
            -d
        } else {
            d
        }
    }
}

/// Exact determinant by fraction-free Gaussian elimination (Bareiss).
fn det_big(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a: Vec<Vec<BigInt>> = m.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&r| !a[r][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    sign * a[n - 1][n - 1].clone()
}

fn mat_vec(m: &[Vec<Rat>], v: &[Rat]) -> Vec<Rat> {
    m.iter()
        .map(|row| {
            let mut acc = Rat::zero();
            for (a, b) in row.iter().zip(v) {
                acc += a * b;
            }
            acc
        })
        .collect()
}

/// A class of the discriminant group `G = Λ*/Λ` modulo `±`, encoded as a
/// vector of rationals in dual coordinates, each reduced to `[0, 1)`, with
/// the lexicographically smaller of `{x, −x}` as canonical representative.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct CosetClass {
    rep: Vec<Rat>,
}

impl CosetClass {
    /// Canonicalize dual coordinates: reduce mod 1, pick `min(x, −x)`.
    pub fn from_dual_coords(x: &[Rat]) -> Self {
        let reduce = |v: &[Rat]| -> Vec<Rat> { v.iter().map(frac_part).collect() };
        let a = reduce(x);
        let neg: Vec<Rat> = x.iter().map(|c| -c.clone()).collect();
        let b = reduce(&neg);
        CosetClass { rep: a.clone().min(b) }
    }

    pub fn dual_coords(&self) -> &[Rat] {
        &self.rep
    }

    pub fn is_identity(&self) -> bool {
        self.rep.iter().all(|c| c.is_zero())
    }

    /// An integer functional `e` with `e_i = (gram·x)_i` for the
    /// representative `x`; entries are exact integers by construction.
    pub fn functional(&self, lattice: &EvenLattice) -> Vec<BigInt> {
        let r = lattice.rank();
        let mut out = Vec::with_capacity(r);
        for i in 0..r {
            let mut acc = Rat::zero();
            for j in 0..r {
                acc += Rat::from_integer(lattice.gram()[i][j].into()) * &self.rep[j];
            }
            assert!(acc.denom().is_one(), "coset representative must pair integrally");
            out.push(acc.to_integer());
        }
        out
    }
}

impl fmt::Display for CosetClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.rep.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

fn frac_part(r: &Rat) -> Rat {
    let f = r - r.floor();
    debug_assert!(!f.is_negative() && f < Rat::one());
    f
}

/// The discriminant group `G = Λ*/Λ` with enumeration support.
#[derive(Clone, Debug)]
pub struct DiscriminantGroup {
    /// Invariant factors `> 1` of the Gram matrix.
    pub invariant_factors: Vec<BigInt>,
    elements: Vec<Vec<Rat>>,
}

impl DiscriminantGroup {
    pub fn order(&self) -> BigInt {
        self.invariant_factors.iter().product()
    }

    /// Dual coordinates of every element of `G` (order of the group many).
    pub fn elements(&self) -> &[Vec<Rat>] {
        &self.elements
    }

    /// The classes of `G/±`, canonicalized and sorted.
    pub fn classes_mod_negation(&self) -> Vec<CosetClass> {
        let mut out: Vec<CosetClass> =
            self.elements.iter().map(|x| CosetClass::from_dual_coords(x)).collect();
        out.sort();
        out.dedup();
        out
    }
}

/// Compute `G = Λ*/Λ ≅ Z^r / gram·Z^r` by exact integer normal-form
/// reduction (Smith form) of the Gram matrix.
pub fn discriminant_group(lattice: &EvenLattice) -> Result<DiscriminantGroup, LatticeError> {
    let r = lattice.rank();
    if lattice.det().is_zero() {
        return Err(LatticeError::DegenerateLattice);
    }
    let (d, u) = smith_normal_form(&lattice.gram_big());
    // u is unimodular with u·gram·v = d; classes of Z^r/gram·Z^r are labeled
    // by tuples a mod diag(d), with representative w = u^{-1}·a.
    let u_inv = invert_unimodular(&u);
    let gram_inv = lattice.gram_inverse().ok_or(LatticeError::DegenerateLattice)?;
    let factors: Vec<BigInt> = (0..r).map(|i| d[i][i].magnitude().clone().into()).collect();

    let mut elements = Vec::new();
    let mut counters = vec![BigInt::zero(); r];
    loop {
        // w = u^{-1} * counters; dual coords x = gram^{-1} w mod 1
        let w: Vec<Rat> = (0..r)
            .map(|i| {
                let mut acc = BigInt::zero();
                for j in 0..r {
                    acc += &u_inv[i][j] * &counters[j];
                }
                Rat::from_integer(acc)
            })
            .collect();
        let x: Vec<Rat> = mat_vec(&gram_inv, &w).iter().map(frac_part).collect();
        elements.push(x);
        // increment the mixed-radix counter
        let mut i = 0;
        loop {
            if i == r {
                return Ok(DiscriminantGroup {
                    invariant_factors: canonical_chain(&factors),
                    elements,
                });
            }
            counters[i] += 1;
            if counters[i] < factors[i] {
                break;
            }
            counters[i] = BigInt::zero();
            i += 1;
        }
    }
}

/// Normalize a multiset of elementary divisors into the canonical chain
/// `d_1 | d_2 | …`, dropping trivial factors.
fn canonical_chain(diag: &[BigInt]) -> Vec<BigInt> {
    let mut d: Vec<BigInt> = diag.to_vec();
    let n = d.len();
    loop {
        let mut changed = false;
        for i in 0..n {
            for j in i + 1..n {
                if !(&d[j] % &d[i]).is_zero() {
                    let g = d[i].gcd(&d[j]);
                    let l = (&d[i] / &g) * &d[j];
                    d[i] = g;
                    d[j] = l;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    d.sort();
    d.into_iter().filter(|f| !f.is_one()).collect()
}

/// The class in `G/±` of the functional `v_i ↦ d_i`.
pub fn coset_of_degrees(
    lattice: &EvenLattice,
    degrees: &[i64],
) -> Result<CosetClass, LatticeError> {
    let x = lattice.solve_degrees(degrees).ok_or(LatticeError::DegenerateLattice)?;
    Ok(CosetClass::from_dual_coords(&x))
}

/// Smith normal form: returns `(D, U)` with `U·M·V = D` diagonal with
/// nonnegative entries and `U`, `V` unimodular (`V` is not needed here).
fn smith_normal_form(m: &[Vec<BigInt>]) -> (Vec<Vec<BigInt>>, Vec<Vec<BigInt>>) {
    let n = m.len();
    let mut a: Vec<Vec<BigInt>> = m.to_vec();
    let mut u: Vec<Vec<BigInt>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();
    for t in 0..n {
        loop {
            // find the entry of minimal nonzero magnitude in the submatrix
            let mut best: Option<(usize, usize)> = None;
            for i in t..n {
                for j in t..n {
                    if !a[i][j].is_zero()
                        && best.is_none_or(|(bi, bj)| {
                            a[i][j].magnitude() < a[bi][bj].magnitude()
                        })
                    {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else { break };
            a.swap(t, bi);
            u.swap(t, bi);
            for row in a.iter_mut() {
                row.swap(t, bj);
            }
            // reduce column t and row t by the pivot
            let mut clean = true;
            for i in t + 1..n {
                if !a[i][t].is_zero() {
                    let q = div_round(&a[i][t], &a[t][t]);
                    if !q.is_zero() {
                        for j in 0..n {
                            let v = &a[i][j] - &q * &a[t][j];
                            a[i][j] = v;
                            let v = &u[i][j] - &q * &u[t][j];
                            u[i][j] = v;
                        }
                    }
                    if !a[i][t].is_zero() {
                        clean = false;
                    }
                }
            }
            for j in t + 1..n {
                if !a[t][j].is_zero() {
                    let q = div_round(&a[t][j], &a[t][t]);
                    if !q.is_zero() {
                        for i in 0..n {
                            let v = &a[i][j] - &q * &a[i][t];
                            a[i][j] = v;
                        }
                    }
                    if !a[t][j].is_zero() {
                        clean = false;
                    }
                }
            }
            if clean {
                break;
            }
        }
    }
    // normalize signs
    for t in 0..n {
        if a[t][t].is_negative() {
            for j in 0..n {
                a[t][j] = -a[t][j].clone();
                u[t][j] = -u[t][j].clone();
            }
        }
    }
    (a, u)
}

/// Rounded integer division (nearest, ties toward zero) for normal-form
/// reduction steps.
fn div_round(a: &BigInt, b: &BigInt) -> BigInt {
    let (q, r) = a.div_rem(b);
    let twice = &r * 2i32;
    if twice.magnitude() > b.magnitude() {
        if (r.is_negative()) != (b.is_negative()) {
            q - 1
        } else {
            q + 1
        }
    } else {
        q
    }
}

/// Invert a unimodular integer matrix exactly.
fn invert_unimodular(u: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let n = u.len();
    let rat: Vec<Vec<Rat>> =
        u.iter().map(|row| row.iter().map(|v| Rat::from_integer(v.clone())).collect()).collect();
    let lattice_like = invert_rat(&rat).expect("unimodular matrices are invertible");
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    assert!(lattice_like[i][j].denom().is_one(), "inverse must be integral");
                    lattice_like[i][j].to_integer()
                })
                .collect()
        })
        .collect()
}

fn invert_rat(m: &[Vec<Rat>]) -> Option<Vec<Vec<Rat>>> {
    let n = m.len();
    let mut a = m.to_vec();
    let mut inv: Vec<Vec<Rat>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { Rat::one() } else { Rat::zero() }).collect())
        .collect();
    for col in 0..n {
        let p = (col..n).find(|&k| !a[k][col].is_zero())?;
        a.swap(col, p);
        inv.swap(col, p);
        let d = a[col][col].clone();
        for c in 0..n {
            a[col][c] = &a[col][c] / &d;
            inv[col][c] = &inv[col][c] / &d;
        }
        for k in 0..n {
            if k != col && !a[k][col].is_zero() {
                let f = a[k][col].clone();
                for c in 0..n {
                    let v = &a[k][c] - &f * &a[col][c];
                    a[k][c] = v;
                    let v = &inv[k][c] - &f * &inv[col][c];
                    inv[k][c] = v;
                }
            }
        }
    }
    Some(inv)
}

/// Divisibility of a nonzero lattice vector: the gcd of its coordinates in
/// the integral basis.
pub fn divisibility(beta: &[BigInt]) -> Result<BigInt, LatticeError> {
    let mut g = BigInt::zero();
    for c in beta {
        g = g.gcd(c);
    }
    if g.is_zero() {
        return Err(LatticeError::ZeroVector);
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lat(gram: &[&[i64]]) -> EvenLattice {
        EvenLattice::new(gram.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    fn pi3() -> EvenLattice {
        lat(&[&[2, 3, 0], &[3, 0, 0], &[0, 0, -2]])
    }

    #[test]
    fn construction_guards() {
        assert!(EvenLattice::new(vec![vec![1]]).is_err()); // odd diagonal
        assert!(EvenLattice::new(vec![vec![2, 1], vec![0, 2]]).is_err()); // asymmetric
        assert!(EvenLattice::new(vec![vec![2, 1]]).is_err()); // not square
    }

    #[test]
    fn discriminants() {
        assert_eq!(lat(&[&[4]]).discriminant(), BigInt::from(4));
        assert_eq!(pi3().discriminant(), BigInt::from(18));
        // hyperbolic plane: (-1)^{2-1} * det = (-1)(-1) = 1
        assert_eq!(lat(&[&[0, 1], &[1, 0]]).discriminant(), BigInt::from(1));
    }

    #[test]
    fn signatures() {
        assert_eq!(lat(&[&[4]]).signature(), (1, 0, 0));
        assert_eq!(lat(&[&[0, 1], &[1, 0]]).signature(), (1, 1, 0));
        assert_eq!(pi3().signature(), (1, 2, 0));
        assert_eq!(lat(&[&[-2]]).signature(), (0, 1, 0));
    }

    #[test]
    fn extended_discriminant_quartic_rule() {
        // rank 1, gram [[4]]: Δ(h, d) = d² − 8h + 8
        let l = lat(&[&[4]]);
        for h in -2i64..5 {
            for d in -4i64..5 {
                assert_eq!(
                    l.extended_discriminant(h, &[d]),
                    BigInt::from(d * d - 8 * h + 8),
                    "h={h} d={d}"
                );
            }
        }
    }

    #[test]
    fn extended_discriminant_pi3_tuples() {
        // degrees (2ms+3m, 3ms, −2m(s+1)) give Δ(h', d) = 36(h − h') where
        // 2h−2 = m²(2s−2)
        let l = pi3();
        for (m, s) in [(1i64, 1i64), (1, 2), (2, 1), (2, 2), (3, 1)] {
            let h = m * m * (s - 1) + 1;
            let d = [2 * m * s + 3 * m, 3 * m * s, -2 * m * (s + 1)];
            for hp in 0..=(h + 2) {
                assert_eq!(
                    l.extended_discriminant(hp, &d),
                    BigInt::from(36 * (h - hp)),
                    "m={m} s={s} h'={hp}"
                );
            }
        }
        // the displayed instances
        assert_eq!(l.extended_discriminant(1, &[5, 3, -4]), BigInt::zero());
        assert_eq!(l.extended_discriminant(0, &[5, 3, -4]), BigInt::from(36));
    }

    #[test]
    fn discriminant_groups() {
        let g4 = discriminant_group(&lat(&[&[4]])).unwrap();
        assert_eq!(g4.order(), BigInt::from(4));
        assert_eq!(g4.invariant_factors, vec![BigInt::from(4)]);
        // G/± for Z/4: {0, ±1, 2}: three classes
        assert_eq!(g4.classes_mod_negation().len(), 3);

        let u = discriminant_group(&lat(&[&[0, 1], &[1, 0]])).unwrap();
        assert_eq!(u.order(), BigInt::from(1));
        assert!(u.invariant_factors.is_empty());

        let g18 = discriminant_group(&pi3()).unwrap();
        assert_eq!(g18.order(), BigInt::from(18));
        assert_eq!(g18.elements().len(), 18);
    }

    #[test]
    fn degenerate_is_rejected() {
        let l = lat(&[&[2, 2], &[2, 2]]);
        assert_eq!(discriminant_group(&l).unwrap_err(), LatticeError::DegenerateLattice);
        assert_eq!(coset_of_degrees(&l, &[1, 0]).unwrap_err(), LatticeError::DegenerateLattice);
    }

    #[test]
    fn cosets_of_degrees() {
        let l = lat(&[&[4]]);
        // d = 1: dual coordinate 1/4
        let c1 = coset_of_degrees(&l, &[1]).unwrap();
        assert_eq!(c1.dual_coords()[0], Rat::new(1.into(), 4.into()));
        // d = 0: identity
        assert!(coset_of_degrees(&l, &[0]).unwrap().is_identity());
        // d = 2: the 2-torsion class 1/2
        let c2 = coset_of_degrees(&l, &[2]).unwrap();
        assert_eq!(c2.dual_coords()[0], Rat::new(1.into(), 2.into()));
        // d = 3 lands in the same class as d = 1 modulo negation
        let c3 = coset_of_degrees(&l, &[3]).unwrap();
        assert_eq!(c1, c3);
    }

    #[test]
    fn coset_functional_roundtrip() {
        let l = pi3();
        let g = discriminant_group(&l).unwrap();
        for class in g.classes_mod_negation() {
            let e = class.functional(&l);
            let degrees: Vec<i64> = e.iter().map(|v| i64::try_from(v).unwrap()).collect();
            assert_eq!(coset_of_degrees(&l, &degrees).unwrap(), class);
        }
    }

    #[test]
    fn divisibility_and_degree_vectors() {
        assert_eq!(
            divisibility(&[BigInt::from(2), BigInt::from(4)]).unwrap(),
            BigInt::from(2)
        );
        assert_eq!(divisibility(&[BigInt::zero()]).unwrap_err(), LatticeError::ZeroVector);
        let l = lat(&[&[4]]);
        assert_eq!(l.vector_of_degrees(&[4]).unwrap(), vec![BigInt::one()]);
        assert_eq!(l.vector_of_degrees(&[1]), None);
    }

    /// Independent validation of the invariant factors: the number of
    /// k-torsion classes of G = Z^r/gram·Z^r is ∏ gcd(k, f_i), and it can be
    /// counted without any normal form. D·Z^r ⊆ gram·Z^r for D = |det|, so
    /// the box [0,D)^r covers every class the same number of times
    /// (D^{r-1} each), and w is k-torsion iff gram^{-1}(k·w) is integral.
    #[test]
    fn torsion_counts_against_box_oracle() {
        let mut state = 0x243f6a8885a308d3u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        let mut cases = 0;
        while cases < 12 {
            let rank = (next() % 2 + 1) as usize;
            let gram: Vec<Vec<i64>> = if rank == 1 {
                vec![vec![2 * ((next() % 7) as i64 - 3)]]
            } else {
                let b = (next() % 9) as i64 - 4;
                vec![
                    vec![2 * ((next() % 5) as i64 - 2), b],
                    vec![b, 2 * ((next() % 5) as i64 - 2)],
                ]
            };
            let Ok(lattice) = EvenLattice::new(gram) else { continue };
            let det = lattice.det();
            if det.is_zero() || *det.magnitude() > num_bigint::BigUint::from(40u32) {
                continue;
            }
            let group = discriminant_group(&lattice).unwrap();
            let inv = lattice.gram_inverse().unwrap();
            let d: i64 = i64::try_from(&BigInt::from(det.magnitude().clone())).unwrap();
            let per_class = d.pow(rank as u32 - 1);
            for k in 1..=6i64 {
                let expected: BigInt = group
                    .invariant_factors
                    .iter()
                    .map(|f| f.gcd(&BigInt::from(k)))
                    .product();
                // brute-force census over the box
                let mut count = 0i64;
                let mut w = vec![0i64; rank];
                'box_sweep: loop {
                    let torsion = (0..rank).all(|i| {
                        let mut acc = Rat::zero();
                        for j in 0..rank {
                            acc += &inv[i][j] * Rat::from_integer(BigInt::from(k * w[j]));
                        }
                        acc.denom().is_one()
                    });
                    if torsion {
                        count += 1;
                    }
                    let mut i = 0;
                    loop {
                        if i == rank {
                            break 'box_sweep;
                        }
                        w[i] += 1;
                        if w[i] < d {
                            break;
                        }
                        w[i] = 0;
                        i += 1;
                    }
                }
                assert_eq!(
                    BigInt::from(count / per_class),
                    expected,
                    "k={k}, gram {:?}",
                    lattice.gram()
                );
            }
            cases += 1;
        }
    }

    #[test]
    fn smith_form_invariant_factors() {
        // the 2x2-minor gcd of the pi3 Gram matrix is 1 (minors -9 and -4),
        // so the group of order 18 is cyclic
        let g = discriminant_group(&pi3()).unwrap();
        assert_eq!(g.invariant_factors, vec![BigInt::from(18)]);
        // a genuinely non-cyclic example: diag(2, -2) has group (Z/2)^2
        let l = lat(&[&[2, 0], &[0, -2]]);
        let g22 = discriminant_group(&l).unwrap();
        assert_eq!(g22.invariant_factors, vec![BigInt::from(2), BigInt::from(2)]);
        assert_eq!(g22.classes_mod_negation().len(), 4);
    }
}
