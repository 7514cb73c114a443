//! Dense complex-coefficient polynomials.
//!
//! [`Poly`] is generic over its coefficient ring so that the same recursions
//! run either in exact Gaussian-integer arithmetic ([`GPoly`]) or in floating
//! point ([`CPoly`]). Every word built from ±1 letters produces Gaussian-integer
//! polynomials, so identities between them are checked with `==`.

mod roots;
mod text;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::C64;

pub use roots::{find_roots, find_roots_from, RootSet, MAX_SWEEPS};
pub use text::{format_c64, parse_c64};

/// Gaussian integer.
pub type GaussInt = Complex<i64>;

/// Coefficient ring for [`Poly`].
pub trait Coeff:
    Copy
    + PartialEq
    + fmt::Debug
    + Send
    + Sync
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn from_i64(v: i64) -> Self;
    fn to_c64(self) -> C64;
}

impl Coeff for C64 {
    fn from_i64(v: i64) -> Self {
        C64::new(v as f64, 0.0)
    }
    fn to_c64(self) -> C64 {
        self
    }
}

impl Coeff for GaussInt {
    fn from_i64(v: i64) -> Self {
        GaussInt::new(v, 0)
    }
    fn to_c64(self) -> C64 {
        C64::new(self.re as f64, self.im as f64)
    }
}

/// Exact integral value of `c`, if it has one that fits comfortably in `i64`.
pub fn to_gauss(c: C64) -> Option<GaussInt> {
    const LIMIT: f64 = (1u64 << 52) as f64;
    let ok = |x: f64| x.fract() == 0.0 && x.abs() < LIMIT;
    (ok(c.re) && ok(c.im)).then(|| GaussInt::new(c.re as i64, c.im as i64))
}

/// Polynomial with coefficients stored in ascending order.
///
/// The coefficient vector never carries trailing zeros; the zero polynomial
/// is the empty vector.
#[derive(Clone, PartialEq)]
pub struct Poly<T> {
    coeffs: Vec<T>,
}

pub type CPoly = Poly<C64>;
pub type GPoly = Poly<GaussInt>;

impl<T: Coeff> Poly<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(T::one())
    }

    pub fn constant(c: T) -> Self {
        Self::new(vec![c])
    }

    /// The identity polynomial `z`.
    pub fn z() -> Self {
        Self::monomial(T::one(), 1)
    }

    pub fn monomial(c: T, power: usize) -> Self {
        let mut coeffs = vec![T::zero(); power + 1];
        coeffs[power] = c;
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    /// Coefficient of `z^k` (zero beyond the degree).
    pub fn coeff(&self, k: usize) -> T {
        self.coeffs.get(k).copied().unwrap_or_else(T::zero)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<T> {
        self.coeffs.last().copied()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn scale(&self, c: T) -> Self {
        Self::new(self.coeffs.iter().map(|&a| a * c).collect())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &a)| a * T::from_i64(k as i64))
                .collect(),
        )
    }

    /// `p(z²)`.
    pub fn compose_z2(&self) -> Self {
        let mut coeffs = vec![T::zero(); 2 * self.coeffs.len()];
        for (k, &a) in self.coeffs.iter().enumerate() {
            coeffs[2 * k] = a;
        }
        Self::new(coeffs)
    }

    /// `z · p(z)`.
    pub fn shift(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(T::zero());
        coeffs.extend_from_slice(&self.coeffs);
        Poly { coeffs }
    }

    /// Horner evaluation.
    pub fn eval(&self, z: T) -> T {
        self.coeffs.iter().rev().fold(T::zero(), |acc, &a| acc * z + a)
    }

    /// True when only even powers of `z` appear.
    pub fn is_even(&self) -> bool {
        self.coeffs.iter().skip(1).step_by(2).all(|c| c.is_zero())
    }

    pub fn to_complex(&self) -> CPoly {
        Poly { coeffs: self.coeffs.iter().map(|c| c.to_c64()).collect() }
    }
}

impl CPoly {
    /// Value and first derivative at `z` in one Horner pass.
    pub fn eval_with_derivative(&self, z: C64) -> (C64, C64) {
        let mut p = C64::zero();
        let mut dp = C64::zero();
        for &a in self.coeffs.iter().rev() {
            dp = dp * z + p;
            p = p * z + a;
        }
        (p, dp)
    }

    /// Exact Gaussian-integer copy, if every coefficient is integral.
    pub fn to_gauss(&self) -> Option<GPoly> {
        self.coeffs.iter().map(|&c| to_gauss(c)).collect::<Option<Vec<_>>>().map(GPoly::new)
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

impl<T: Coeff> Default for Poly<T> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<T: Coeff> fmt::Debug for Poly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly{:?}", self.coeffs)
    }
}

impl<T: Coeff> Add for &Poly<T> {
    type Output = Poly<T>;
    fn add(self, rhs: &Poly<T>) -> Poly<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl<T: Coeff> Sub for &Poly<T> {
    type Output = Poly<T>;
    fn sub(self, rhs: &Poly<T>) -> Poly<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl<T: Coeff> Mul for &Poly<T> {
    type Output = Poly<T>;
    fn mul(self, rhs: &Poly<T>) -> Poly<T> {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![T::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j] + a * b;
            }
        }
        Poly::new(out)
    }
}

impl<T: Coeff> Neg for &Poly<T> {
    type Output = Poly<T>;
    fn neg(self) -> Poly<T> {
        Poly { coeffs: self.coeffs.iter().map(|&c| -c).collect() }
    }
}

macro_rules! forward_owned {
    ($($tr:ident::$method:ident),*) => {$(
        impl<T: Coeff> $tr for Poly<T> {
            type Output = Poly<T>;
            fn $method(self, rhs: Poly<T>) -> Poly<T> {
                (&self).$method(&rhs)
            }
        }
    )*};
}
forward_owned!(Add::add, Sub::sub, Mul::mul);

#[cfg(test)]
mod tests {
    use super::*;

    fn g(c: &[i64]) -> GPoly {
        GPoly::new(c.iter().map(|&v| GaussInt::new(v, 0)).collect())
    }

    #[test]
    fn derivative_of_z2_minus_4() {
        assert_eq!(g(&[-4, 0, 1]).derivative(), g(&[0, 2]));
    }

    #[test]
    fn difference_of_squares() {
        assert_eq!(&g(&[1, 0, 1]) * &g(&[-1, 0, 1]), g(&[-1, 0, 0, 0, 1]));
    }

    #[test]
    fn sextic_vanishes_at_i() {
        let q = g(&[4, 0, 1, 0, -2, 0, 1]);
        assert_eq!(q.eval(GaussInt::new(0, 1)), GaussInt::zero());
        assert_eq!(q.eval(GaussInt::new(0, -1)), GaussInt::zero());
        let qc = q.to_complex();
        assert!(qc.eval(C64::i()).norm() < 1e-15);
    }

    #[test]
    fn trimming_and_degree() {
        let p = g(&[1, 2, 0, 0]);
        assert_eq!(p.degree(), Some(1));
        assert_eq!(g(&[0, 0]).degree(), None);
        assert!(g(&[]).is_zero());
        assert_eq!(&p - &p, GPoly::zero());
    }

    #[test]
    fn compose_and_shift() {
        let p = g(&[1, 2, 3]);
        assert_eq!(p.compose_z2(), g(&[1, 0, 2, 0, 3]));
        assert!(p.compose_z2().is_even());
        assert!(!p.is_even());
        assert_eq!(p.shift(), g(&[0, 1, 2, 3]));
        assert_eq!(&p * &GPoly::z(), p.shift());
    }

    #[test]
    fn horner_with_derivative() {
        let p = CPoly::new(vec![C64::new(1.0, 1.0), C64::new(0.0, -2.0), C64::new(3.0, 0.0)]);
        let z = C64::new(0.3, -1.7);
        let (v, dv) = p.eval_with_derivative(z);
        assert!((v - p.eval(z)).norm() < 1e-14);
        assert!((dv - p.derivative().eval(z)).norm() < 1e-14);
    }

    #[test]
    fn gauss_conversion() {
        assert_eq!(to_gauss(C64::new(3.0, -2.0)), Some(GaussInt::new(3, -2)));
        assert_eq!(to_gauss(C64::new(0.5, 0.0)), None);
        let p = g(&[3, 0, -1]);
        assert_eq!(p.to_complex().to_gauss(), Some(p));
    }
}
