//! Exact scalar types.
//!
//! Everything in this crate is exact. The generic code is written against
//! [`Field`], which is implemented for `num_rational::Ratio<T>` with any
//! signed integer `T`, for [`Gaussian`] over any field, and for the radical
//! towers in `exactverify`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// A commutative ring in which nonzero elements may be invertible.
///
/// `inv` returns `None` on zero and on zero divisors.
pub trait Field:
    Clone
    + PartialEq
    + fmt::Debug
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn inv(&self) -> Option<Self>;

    fn from_i64(n: i64) -> Self;

    fn div(&self, rhs: &Self) -> Option<Self> {
        rhs.inv().map(|r| self.clone() * r)
    }

    fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base.clone();
            }
            base = base.clone() * base;
            e >>= 1;
        }
        acc
    }
}

impl<T> Field for Ratio<T>
where
    T: Clone + Integer + Signed + fmt::Debug + From<i32> + TryFrom<i64>,
{
    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }

    fn from_i64(n: i64) -> Self {
        match T::try_from(n) {
            Ok(v) => Ratio::from_integer(v),
            Err(_) => panic!("integer {n} does not fit the rational base type"),
        }
    }
}

/// Elements `re + im·√−1` over a field `T`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Gaussian<T> {
    pub re: T,
    pub im: T,
}

impl<T: Field> Gaussian<T> {
    pub fn new(re: T, im: T) -> Self {
        Gaussian { re, im }
    }

    pub fn real(re: T) -> Self {
        Gaussian { re, im: T::zero() }
    }

    /// `√−1`.
    pub fn i() -> Self {
        Gaussian { re: T::zero(), im: T::one() }
    }

    pub fn conj(&self) -> Self {
        Gaussian { re: self.re.clone(), im: -self.im.clone() }
    }

    pub fn norm(&self) -> T {
        self.re.clone() * self.re.clone() + self.im.clone() * self.im.clone()
    }

    pub fn scale(&self, k: &T) -> Self {
        Gaussian { re: self.re.clone() * k.clone(), im: self.im.clone() * k.clone() }
    }
}

impl<T: Field> Add for Gaussian<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Gaussian { re: self.re + o.re, im: self.im + o.im }
    }
}

impl<T: Field> Sub for Gaussian<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Gaussian { re: self.re - o.re, im: self.im - o.im }
    }
}

impl<T: Field> Mul for Gaussian<T> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Gaussian {
            re: self.re.clone() * o.re.clone() - self.im.clone() * o.im.clone(),
            im: self.re * o.im + self.im * o.re,
        }
    }
}

impl<T: Field> Neg for Gaussian<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Gaussian { re: -self.re, im: -self.im }
    }
}

impl<T: Field> Zero for Gaussian<T> {
    fn zero() -> Self {
        Gaussian { re: T::zero(), im: T::zero() }
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl<T: Field> One for Gaussian<T> {
    fn one() -> Self {
        Gaussian { re: T::one(), im: T::zero() }
    }
}

impl<T: Field> Field for Gaussian<T> {
    fn inv(&self) -> Option<Self> {
        // Over a field where -1 is not a sum of squares the norm vanishes only at zero.
        let n = self.norm().inv()?;
        Some(self.conj().scale(&n))
    }

    fn from_i64(n: i64) -> Self {
        Gaussian::real(T::from_i64(n))
    }
}

pub fn rat(n: i64, d: i64) -> Ratio<BigInt> {
    Ratio::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Ratio<BigInt> {
    Ratio::from_integer(BigInt::from(n))
}

/// Renders a rational as `"num/den"` (denominator always present).
pub fn rat_string(q: &Ratio<BigInt>) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Whether a rational is the square of a rational.
pub fn is_rational_square(q: &Ratio<BigInt>) -> bool {
    if q.is_negative() {
        return false;
    }
    let is_sq = |n: &BigInt| {
        let r = n.sqrt();
        &(&r * &r) == n
    };
    is_sq(q.numer()) && is_sq(q.denom())
}

/// Rational square root when it exists.
pub fn rational_sqrt(q: &Ratio<BigInt>) -> Option<Ratio<BigInt>> {
    if !is_rational_square(q) {
        return None;
    }
    Some(Ratio::new(q.numer().sqrt(), q.denom().sqrt()))
}
