//! First-order forward-mode jets over holomorphic parameters.

use std::ops::{Add, Mul, Neg, Sub};

use crate::scalars::{Complex64, Ring};

/// `value + sum_p tangent[p] da_p` for complex parameters `a_p`.
///
/// An empty tangent stands for the zero tangent, so constants carry no allocation.
#[derive(Debug, Clone, PartialEq)]
pub struct Jet {
    pub value: Complex64,
    pub tangent: Vec<Complex64>,
}

impl Jet {
    pub fn constant(value: Complex64) -> Self {
        Jet { value, tangent: Vec::new() }
    }

    /// The `index`-th of `len` independent variables, at `value`.
    pub fn variable(value: Complex64, index: usize, len: usize) -> Self {
        let mut tangent = vec![Complex64::new(0.0, 0.0); len];
        tangent[index] = Complex64::new(1.0, 0.0);
        Jet { value, tangent }
    }

    /// `d(self)/da_p`.
    pub fn derivative(&self, p: usize) -> Complex64 {
        self.tangent.get(p).copied().unwrap_or_default()
    }

    fn combine(mut self, rhs: &Jet, f: impl Fn(Complex64, Complex64) -> Complex64) -> Jet {
        if self.tangent.len() < rhs.tangent.len() {
            self.tangent.resize(rhs.tangent.len(), Complex64::new(0.0, 0.0));
        }
        for (a, b) in self.tangent.iter_mut().zip(&rhs.tangent) {
            *a = f(*a, *b);
        }
        self
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, rhs: Jet) -> Jet {
        let value = self.value + rhs.value;
        let mut out = self.combine(&rhs, |a, b| a + b);
        out.value = value;
        out
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, rhs: Jet) -> Jet {
        let value = self.value - rhs.value;
        let mut out = self.combine(&rhs, |a, b| a - b);
        out.value = value;
        out
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(mut self) -> Jet {
        self.value = -self.value;
        self.tangent.iter_mut().for_each(|t| *t = -*t);
        self
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(mut self, rhs: Jet) -> Jet {
        let (a, b) = (self.value, rhs.value);
        self.tangent.iter_mut().for_each(|t| *t *= b);
        let mut out = self.combine(&rhs, |x, y| x + a * y);
        out.value = a * b;
        out
    }
}

impl Ring for Jet {
    fn zero() -> Self {
        Jet::constant(Complex64::new(0.0, 0.0))
    }
    fn one() -> Self {
        Jet::constant(Complex64::new(1.0, 0.0))
    }
    fn from_i64(v: i64) -> Self {
        Jet::constant(Complex64::new(v as f64, 0.0))
    }
    fn is_zero(&self) -> bool {
        self.value == Complex64::new(0.0, 0.0) && self.tangent.iter().all(|t| *t == Complex64::new(0.0, 0.0))
    }
    fn scale_int(&self, k: i64) -> Self {
        let k = k as f64;
        Jet { value: self.value * k, tangent: self.tangent.iter().map(|t| t * k).collect() }
    }
}
