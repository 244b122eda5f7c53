use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use super::{RadicalScalar, Rat, ScalarError};

/// Complexified radical scalar `re + i*im`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct RadicalComplex {
    pub re: RadicalScalar,
    pub im: RadicalScalar,
}

impl RadicalComplex {
    pub fn new(re: RadicalScalar, im: RadicalScalar) -> Self {
        RadicalComplex { re, im }
    }

    pub fn real(re: RadicalScalar) -> Self {
        RadicalComplex { re, im: RadicalScalar::zero() }
    }

    pub fn from_rat(q: Rat) -> Self {
        Self::real(RadicalScalar::from_rat(q))
    }

    pub fn i() -> Self {
        RadicalComplex { re: RadicalScalar::zero(), im: RadicalScalar::one() }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        RadicalComplex { re: self.re.clone(), im: -self.im.clone() }
    }

    /// `|z|^2` as a real radical scalar.
    pub fn norm_sqr(&self) -> RadicalScalar {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inverse(&self) -> Result<Self, ScalarError> {
        let inv = self.norm_sqr().inverse()?;
        Ok(RadicalComplex { re: &self.re * &inv, im: -(&self.im * &inv) })
    }

    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }
}

impl Add for RadicalComplex {
    type Output = RadicalComplex;
    fn add(self, rhs: RadicalComplex) -> RadicalComplex {
        RadicalComplex { re: self.re + rhs.re, im: self.im + rhs.im }
    }
}

impl Sub for RadicalComplex {
    type Output = RadicalComplex;
    fn sub(self, rhs: RadicalComplex) -> RadicalComplex {
        RadicalComplex { re: self.re - rhs.re, im: self.im - rhs.im }
    }
}

impl Neg for RadicalComplex {
    type Output = RadicalComplex;
    fn neg(self) -> RadicalComplex {
        RadicalComplex { re: -self.re, im: -self.im }
    }
}

impl Mul for RadicalComplex {
    type Output = RadicalComplex;
    fn mul(self, rhs: RadicalComplex) -> RadicalComplex {
        if self.im.is_zero() && rhs.im.is_zero() {
            return RadicalComplex::real(&self.re * &rhs.re);
        }
        RadicalComplex {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl fmt::Display for RadicalComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else if self.re.is_zero() {
            write!(f, "i*({})", self.im)
        } else {
            write!(f, "{} + i*({})", self.re, self.im)
        }
    }
}

impl fmt::Debug for RadicalComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
