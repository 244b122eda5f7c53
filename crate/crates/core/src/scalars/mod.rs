//! Scalar fields used throughout the crate.
//!
//! Exact work happens in [`RadicalComplex`], the complexification of the field of
//! rational combinations of square roots of square-free integers. Numerical work uses
//! [`FloatComplex`]. Both implement [`Scalar`]; the solver's forward-mode jets only
//! implement the ring part ([`Ring`]).

mod complex;
mod radical;
mod rat;

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

pub use complex::RadicalComplex;
pub use num_complex::Complex64;
pub use radical::{split_square, RadicalScalar, MAX_INVERSE_ATOMS, TRIAL_DIVISION_LIMIT};
pub use rat::Rat;

/// Double-precision complex scalar.
pub type FloatComplex = Complex64;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ScalarError {
    #[error("square root of negative rational {0}")]
    NegativeRadicand(String),
    #[error("radicand {0} too large for exact factoring")]
    RadicandTooLarge(String),
    #[error("cannot factor {0} by trial division up to 10^6")]
    FactorLimit(u64),
    #[error("inverse of zero")]
    ZeroInverse,
    #[error("inverse needs {0} radical atoms (limit {MAX_INVERSE_ATOMS})")]
    TooManyAtoms(usize),
    #[error("value not representable in the exact field: {0}")]
    NotRepresentable(String),
    #[error("parse error: {0}")]
    Parse(String),
}

/// Commutative ring operations shared by exact scalars, floats and jets.
pub trait Ring:
    Clone
    + Debug
    + PartialEq
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    /// Structural zero test (exact for exact scalars, `== 0.0` for floats).
    fn is_zero(&self) -> bool;

    fn scale_int(&self, k: i64) -> Self {
        self.clone() * Self::from_i64(k)
    }
}

/// A complex scalar field with conjugation.
pub trait Scalar: Ring {
    /// Whether equality and zero tests are exact.
    const EXACT: bool;

    fn conj(&self) -> Self;
    fn from_rat(q: &Rat) -> Self;
    fn sqrt_rat(q: &Rat) -> Result<Self, ScalarError>;
    fn inverse(&self) -> Result<Self, ScalarError>;
    fn to_c64(&self) -> Complex64;
    /// Square root of a real non-negative value, when representable.
    fn sqrt_real(&self) -> Result<Self, ScalarError>;
    /// A unit-modulus `l` with `l * self` real, when representable.
    fn real_rotation(&self) -> Result<Self, ScalarError>;

    /// `a == b` exactly, or within `tol` in absolute value for floats.
    fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        if Self::EXACT {
            self == other
        } else {
            (self.to_c64() - other.to_c64()).norm() <= tol
        }
    }

    fn abs_sqr(&self) -> Self {
        self.clone() * self.conj()
    }
}

impl Ring for RadicalComplex {
    fn zero() -> Self {
        RadicalComplex::default()
    }
    fn one() -> Self {
        RadicalComplex::from_rat(Rat::one())
    }
    fn from_i64(v: i64) -> Self {
        RadicalComplex::from_rat(Rat::from_int(v))
    }
    fn is_zero(&self) -> bool {
        RadicalComplex::is_zero(self)
    }
    fn scale_int(&self, k: i64) -> Self {
        let q = Rat::from_int(k);
        RadicalComplex::new(self.re.scale(&q), self.im.scale(&q))
    }
}

impl Scalar for RadicalComplex {
    const EXACT: bool = true;

    fn conj(&self) -> Self {
        RadicalComplex::conj(self)
    }
    fn from_rat(q: &Rat) -> Self {
        RadicalComplex::from_rat(q.clone())
    }
    fn sqrt_rat(q: &Rat) -> Result<Self, ScalarError> {
        Ok(RadicalComplex::real(RadicalScalar::sqrt_rat(q)?))
    }
    fn inverse(&self) -> Result<Self, ScalarError> {
        RadicalComplex::inverse(self)
    }
    fn to_c64(&self) -> Complex64 {
        RadicalComplex::to_c64(self)
    }
    fn sqrt_real(&self) -> Result<Self, ScalarError> {
        match (self.is_real(), self.re.as_rat()) {
            (true, Some(q)) => Self::sqrt_rat(&q),
            _ => Err(ScalarError::NotRepresentable(format!("sqrt({self})"))),
        }
    }
    fn real_rotation(&self) -> Result<Self, ScalarError> {
        if self.im.is_zero() {
            return Ok(Ring::one());
        }
        if self.re.is_zero() {
            return Ok(RadicalComplex::i());
        }
        let norm = RadicalComplex::real(self.norm_sqr()).sqrt_real()?;
        Ok(self.conj() * norm.inverse()?)
    }
}

impl Ring for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn from_i64(v: i64) -> Self {
        Complex64::new(v as f64, 0.0)
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn scale_int(&self, k: i64) -> Self {
        self * k as f64
    }
}

impl Scalar for Complex64 {
    const EXACT: bool = false;

    fn conj(&self) -> Self {
        Complex64::conj(self)
    }
    fn from_rat(q: &Rat) -> Self {
        Complex64::new(q.to_f64(), 0.0)
    }
    fn sqrt_rat(q: &Rat) -> Result<Self, ScalarError> {
        if q.is_negative() {
            return Err(ScalarError::NegativeRadicand(q.to_string()));
        }
        Ok(Complex64::new(q.to_f64().sqrt(), 0.0))
    }
    fn inverse(&self) -> Result<Self, ScalarError> {
        if Ring::is_zero(self) {
            return Err(ScalarError::ZeroInverse);
        }
        Ok(self.inv())
    }
    fn to_c64(&self) -> Complex64 {
        *self
    }
    fn sqrt_real(&self) -> Result<Self, ScalarError> {
        if self.re < 0.0 {
            return Err(ScalarError::NotRepresentable(format!("sqrt({self})")));
        }
        Ok(Complex64::new(self.re.sqrt(), 0.0))
    }
    fn real_rotation(&self) -> Result<Self, ScalarError> {
        let n = self.norm();
        if n == 0.0 {
            Ok(Ring::one())
        } else {
            Ok(self.conj() / n)
        }
    }
}

/// Parses the textual exact form used in files: `{"re": "...", "im": "..."}` components.
pub fn parse_radical_complex(re: &str, im: &str) -> Result<RadicalComplex, ScalarError> {
    Ok(RadicalComplex::new(re.parse()?, im.parse()?))
}
