use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Arbitrary-precision rational, the coefficient field for all series.
pub type Rat = num_rational::BigRational;

/// Coefficient ring for [`crate::FracSeries`].
///
/// Implemented for [`Rat`] and [`GaussRat`]. The by-reference methods avoid
/// cloning big-integer values more than necessary; `zero`/`one`/`is_zero`
/// come from the `num_traits` supertraits.
pub trait Coeff: Clone + PartialEq + fmt::Debug + fmt::Display + Zero + One {
    fn add_ref(&self, rhs: &Self) -> Self;
    fn sub_ref(&self, rhs: &Self) -> Self;
    fn mul_ref(&self, rhs: &Self) -> Self;
    fn neg_ref(&self) -> Self;
    /// Multiplicative inverse. Must only be called on nonzero values.
    fn inv_ref(&self) -> Self;
    /// Embedding of the rationals.
    fn from_rat(r: &Rat) -> Self;
}

impl Coeff for Rat {
    fn add_ref(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub_ref(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul_ref(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn inv_ref(&self) -> Self {
        assert!(!Zero::is_zero(self), "inverse of zero rational");
        self.recip()
    }
    fn from_rat(r: &Rat) -> Self {
        r.clone()
    }
}

/// A Gaussian rational `re + im·i` with exact rational components.
///
/// Used to host formal expansions of `e^{iλ}`; reality of final answers is
/// asserted, never assumed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaussRat {
    pub re: Rat,
    pub im: Rat,
}

impl GaussRat {
    pub fn new(re: Rat, im: Rat) -> Self {
        GaussRat { re, im }
    }

    pub fn from_real(re: Rat) -> Self {
        GaussRat { re, im: Rat::zero() }
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        GaussRat { re: Rat::zero(), im: Rat::one() }
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    /// `re² + im²`.
    fn norm_sq(&self) -> Rat {
        &self.re * &self.re + &self.im * &self.im
    }
}

impl fmt::Display for GaussRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else if self.re.is_zero() {
            write!(f, "{}*i", self.im)
        } else {
            write!(f, "{}+{}*i", self.re, self.im)
        }
    }
}

impl Add for GaussRat {
    type Output = GaussRat;
    fn add(self, rhs: Self) -> Self {
        GaussRat { re: self.re + rhs.re, im: self.im + rhs.im }
    }
}

impl Sub for GaussRat {
    type Output = GaussRat;
    fn sub(self, rhs: Self) -> Self {
        GaussRat { re: self.re - rhs.re, im: self.im - rhs.im }
    }
}

impl Mul for GaussRat {
    type Output = GaussRat;
    fn mul(self, rhs: Self) -> Self {
        Coeff::mul_ref(&self, &rhs)
    }
}

impl Neg for GaussRat {
    type Output = GaussRat;
    fn neg(self) -> Self {
        GaussRat { re: -self.re, im: -self.im }
    }
}

impl Zero for GaussRat {
    fn zero() -> Self {
        GaussRat { re: Rat::zero(), im: Rat::zero() }
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for GaussRat {
    fn one() -> Self {
        GaussRat { re: Rat::one(), im: Rat::zero() }
    }
}

impl Coeff for GaussRat {
    fn add_ref(&self, rhs: &Self) -> Self {
        GaussRat { re: &self.re + &rhs.re, im: &self.im + &rhs.im }
    }
    fn sub_ref(&self, rhs: &Self) -> Self {
        GaussRat { re: &self.re - &rhs.re, im: &self.im - &rhs.im }
    }
    fn mul_ref(&self, rhs: &Self) -> Self {
        GaussRat {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
    fn neg_ref(&self) -> Self {
        GaussRat { re: -self.re.clone(), im: -self.im.clone() }
    }
    fn inv_ref(&self) -> Self {
        let n = self.norm_sq();
        assert!(!n.is_zero(), "inverse of zero Gaussian rational");
        GaussRat { re: &self.re / &n, im: -(&self.im / &n) }
    }
    fn from_rat(r: &Rat) -> Self {
        GaussRat::from_real(r.clone())
    }
}

/// `i^k` for any integer `k`, as a Gaussian rational.
pub fn i_power(k: i64) -> GaussRat {
    match k.rem_euclid(4) {
        0 => GaussRat::from_real(Rat::one()),
        1 => GaussRat::new(Rat::zero(), Rat::one()),
        2 => GaussRat::from_real(-Rat::one()),
        _ => GaussRat::new(Rat::zero(), -Rat::one()),
    }
}

/// Exact factorial as a big integer.
pub fn factorial_big(n: u64) -> BigInt {
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc *= BigInt::from(k);
    }
    acc
}
