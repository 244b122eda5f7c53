//! Polynomials in `z` with exterior-algebra coefficients and their Hermitian norm surfaces.

mod roots;

pub use roots::{common_roots, companion_roots, numeric_gcd, GcdMethod, Root, RootError, RootLocation, RootReport, NUMERIC_GCD_TOL};

use crate::exterior::{ExteriorError, KVector};
use crate::scalars::{Complex64, Rat, Ring, Scalar};

/// Relative tolerance used by float-mode binomial matching.
pub const BINOMIAL_REL_TOL: f64 = 1e-9;

/// `sum_j c_j z^j` with `KVector` coefficients of a common shape.
///
/// Trailing zero coefficients are trimmed; the zero polynomial keeps one zero coefficient.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyKVector<S> {
    coeffs: Vec<KVector<S>>,
}

impl<S: Ring> PolyKVector<S> {
    pub fn new(coeffs: Vec<KVector<S>>) -> Result<Self, ExteriorError> {
        assert!(!coeffs.is_empty(), "polynomial needs at least one coefficient");
        let (dim, degree) = (coeffs[0].dim(), coeffs[0].degree());
        for c in &coeffs {
            if c.dim() != dim {
                return Err(ExteriorError::DimensionMismatch(dim, c.dim()));
            }
            if c.degree() != degree {
                return Err(ExteriorError::DegreeMismatch(degree, c.degree()));
            }
        }
        let mut p = PolyKVector { coeffs };
        p.trim();
        Ok(p)
    }

    pub fn zero(dim: usize, degree: usize) -> Self {
        PolyKVector { coeffs: vec![KVector::zeros(dim, degree)] }
    }

    pub fn constant(c: KVector<S>) -> Self {
        let mut p = PolyKVector { coeffs: vec![c] };
        p.trim();
        p
    }

    /// `c z^power`.
    pub fn monomial(c: KVector<S>, power: usize) -> Self {
        let mut coeffs = vec![KVector::zeros(c.dim(), c.degree()); power];
        coeffs.push(c);
        let mut p = PolyKVector { coeffs };
        p.trim();
        p
    }

    /// Builds a degree-1-valued polynomial from per-component scalar polynomials.
    pub fn from_components(components: &[Vec<S>]) -> Self {
        let dim = components.len();
        let len = components.iter().map(Vec::len).max().unwrap_or(1).max(1);
        let coeffs = (0..len)
            .map(|j| KVector::vector(components.iter().map(|c| c.get(j).cloned().unwrap_or_else(S::zero)).collect()))
            .collect();
        let mut p = PolyKVector { coeffs };
        debug_assert!(p.coeffs.iter().all(|c| c.dim() == dim));
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.coeffs.len() > 1 && self.coeffs.last().is_some_and(KVector::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[KVector<S>] {
        &self.coeffs
    }

    pub fn coeff(&self, j: usize) -> Option<&KVector<S>> {
        self.coeffs.get(j)
    }

    /// Polynomial degree of the trimmed coefficient list (0 for the zero polynomial).
    pub fn poly_degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn dim(&self) -> usize {
        self.coeffs[0].dim()
    }

    /// Exterior degree of the coefficients.
    pub fn kdegree(&self) -> usize {
        self.coeffs[0].degree()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_zero()
    }

    /// `d/dz`: coefficient `j` becomes `(j+1) c_{j+1}`.
    pub fn derivative(&self) -> Self {
        if self.coeffs.len() == 1 {
            return Self::zero(self.dim(), self.kdegree());
        }
        let coeffs = self.coeffs.iter().enumerate().skip(1).map(|(j, c)| c.scale_int(j as i64)).collect();
        let mut p = PolyKVector { coeffs };
        p.trim();
        p
    }

    pub fn add(&self, other: &Self) -> Result<Self, ExteriorError> {
        if (self.dim(), self.kdegree()) != (other.dim(), other.kdegree()) {
            return Err(ExteriorError::DimensionMismatch(self.dim(), other.dim()));
        }
        let len = self.coeffs.len().max(other.coeffs.len());
        let zero = KVector::zeros(self.dim(), self.kdegree());
        let coeffs = (0..len)
            .map(|j| {
                let a = self.coeffs.get(j).unwrap_or(&zero);
                let b = other.coeffs.get(j).unwrap_or(&zero);
                a.add(b)
            })
            .collect::<Result<Vec<_>, _>>()?;
        let mut p = PolyKVector { coeffs };
        p.trim();
        Ok(p)
    }

    pub fn scale(&self, s: &S) -> Self {
        let mut p = PolyKVector { coeffs: self.coeffs.iter().map(|c| c.scale(s)).collect() };
        p.trim();
        p
    }

    /// Cauchy product under the exterior wedge.
    pub fn wedge(&self, other: &Self) -> Result<Self, ExteriorError> {
        if self.dim() != other.dim() {
            return Err(ExteriorError::DimensionMismatch(self.dim(), other.dim()));
        }
        let len = self.coeffs.len() + other.coeffs.len() - 1;
        let mut coeffs = vec![KVector::zeros(self.dim(), self.kdegree() + other.kdegree()); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                coeffs[i + j].add_assign_unchecked(&a.wedge(b)?);
            }
        }
        let mut p = PolyKVector { coeffs };
        p.trim();
        Ok(p)
    }

    /// Re-embeds each coefficient vector of a degree-1 polynomial into `C^new_dim`
    /// starting at coordinate `offset`.
    pub fn embed(&self, new_dim: usize, offset: usize) -> Self {
        assert_eq!(self.kdegree(), 1, "embedding is defined for vector-valued polynomials");
        assert!(offset + self.dim() <= new_dim);
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| {
                let mut v = vec![S::zero(); new_dim];
                for (i, x) in c.coeffs().iter().enumerate() {
                    v[offset + i] = x.clone();
                }
                KVector::vector(v)
            })
            .collect();
        PolyKVector { coeffs }
    }

    /// Scalar polynomial of each basis component, lowest degree first.
    pub fn component_polys(&self) -> Vec<Vec<S>> {
        let width = self.coeffs[0].coeffs().len();
        (0..width).map(|i| self.coeffs.iter().map(|c| c.coeffs()[i].clone()).collect()).collect()
    }

    pub fn map<T: Ring>(&self, f: impl Fn(&S) -> T) -> PolyKVector<T> {
        let mut p = PolyKVector { coeffs: self.coeffs.iter().map(|c| c.map(&f)).collect() };
        p.trim();
        p
    }
}

impl<S: Scalar> PolyKVector<S> {
    /// Evaluates at a float point.
    pub fn eval(&self, z: Complex64) -> KVector<Complex64> {
        let mut acc = self.coeffs.last().expect("nonempty").map(Scalar::to_c64);
        for c in self.coeffs.iter().rev().skip(1) {
            acc = acc.scale(&z).add(&c.map(Scalar::to_c64)).expect("same shape");
        }
        acc
    }

    pub fn max_coeff_norm(&self) -> f64 {
        self.coeffs
            .iter()
            .flat_map(|c| c.coeffs().iter())
            .map(|x| x.to_c64().norm())
            .fold(0.0, f64::max)
    }
}

/// The real-analytic function `sum_{j,k} H[j][k] z^j zbar^k`, stored as its Gram matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianSurface<S> {
    h: Vec<Vec<S>>,
}

/// Result of recognizing `H` as `c0 (1 + z zbar)^m`.
#[derive(Debug, Clone, PartialEq)]
pub struct BinomialMatch<S> {
    pub c0: S,
    pub m: usize,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SurfaceError {
    #[error("surface value has imaginary residue {0:e}")]
    ImaginaryResidue(f64),
    #[error("matrix is not square")]
    NotSquare,
}

impl<S: Scalar> HermitianSurface<S> {
    /// `H[j][k] = <c_j, c_k>` for the coefficients of `w`.
    pub fn of(w: &PolyKVector<S>) -> Self {
        let c = w.coeffs();
        let n = c.len();
        let mut h = vec![vec![S::zero(); n]; n];
        for j in 0..n {
            for k in j..n {
                let v = c[j].inner(&c[k]).expect("same shape");
                if k != j {
                    h[k][j] = v.conj();
                }
                h[j][k] = v;
            }
        }
        HermitianSurface { h }
    }

    pub fn from_matrix(h: Vec<Vec<S>>) -> Result<Self, SurfaceError> {
        if h.iter().any(|row| row.len() != h.len()) || h.is_empty() {
            return Err(SurfaceError::NotSquare);
        }
        Ok(HermitianSurface { h })
    }

    pub fn diagonal(d: Vec<S>) -> Self {
        let n = d.len();
        let mut h = vec![vec![S::zero(); n]; n];
        for (i, x) in d.into_iter().enumerate() {
            h[i][i] = x;
        }
        HermitianSurface { h }
    }

    pub fn size(&self) -> usize {
        self.h.len()
    }

    pub fn get(&self, j: usize, k: usize) -> &S {
        &self.h[j][k]
    }

    pub fn rows(&self) -> &[Vec<S>] {
        &self.h
    }

    /// Whether off-diagonal entries vanish (exactly, or within `tol` for floats).
    pub fn is_diagonal(&self, tol: f64) -> bool {
        let z = S::zero();
        (0..self.size()).all(|j| (0..self.size()).all(|k| j == k || self.h[j][k].approx_eq(&z, tol)))
    }

    /// Radial profile `sum_k H[k][k] u^k` in `u = z zbar`, meaningful when diagonal.
    pub fn radial_profile(&self) -> Vec<S> {
        (0..self.size()).map(|k| self.h[k][k].clone()).collect()
    }

    /// Tolerance used for float comparisons against this surface: `1e-9 * max(|H[0][0]|, 1)`.
    pub fn tolerance(&self) -> f64 {
        if S::EXACT {
            0.0
        } else {
            BINOMIAL_REL_TOL * self.h[0][0].to_c64().norm().max(1.0)
        }
    }

    /// One plus the index of the last diagonal entry that is not negligible.
    ///
    /// For Gram matrices a vanishing diagonal entry forces its row and column to vanish,
    /// so this is the trimmed coefficient length; float round-off tails are dropped.
    pub fn effective_size(&self) -> usize {
        let tol = self.tolerance();
        let zero = S::zero();
        (0..self.size()).rev().find(|&k| !self.h[k][k].approx_eq(&zero, tol)).map_or(1, |k| k + 1)
    }

    /// Recognizes `c0 (1 + z zbar)^m` with `m = effective_size - 1` and `c0 = H[0][0]`.
    pub fn match_binomial(&self) -> Option<BinomialMatch<S>> {
        let c0 = self.h[0][0].clone();
        let m = self.effective_size() - 1;
        let tol = self.tolerance();
        let zero = S::zero();
        for j in 0..self.size() {
            for k in 0..self.size() {
                let ok = if j == k && j <= m {
                    let target = c0.clone() * S::from_rat(&Rat::binomial(m as u64, k as u64));
                    self.h[j][k].approx_eq(&target, tol)
                } else {
                    self.h[j][k].approx_eq(&zero, tol)
                };
                if !ok {
                    return None;
                }
            }
        }
        Some(BinomialMatch { c0, m })
    }

    /// Float value at `z`; the imaginary residue must be below `1e-9` (relative to the magnitude).
    pub fn eval(&self, z: Complex64) -> Result<f64, SurfaceError> {
        let n = self.size();
        let zp: Vec<Complex64> = (0..n).map(|j| z.powu(j as u32)).collect();
        let mut acc = Complex64::new(0.0, 0.0);
        let mut mag = 0.0;
        for j in 0..n {
            for k in 0..n {
                let term = self.h[j][k].to_c64() * zp[j] * zp[k].conj();
                mag += term.norm();
                acc += term;
            }
        }
        if acc.im.abs() > 1e-9 * mag.max(1.0) {
            return Err(SurfaceError::ImaginaryResidue(acc.im));
        }
        Ok(acc.re)
    }

    /// Smallest eigenvalue of the float image of `H`.
    pub fn min_eigenvalue(&self) -> f64 {
        let n = self.size();
        let m = nalgebra::DMatrix::from_fn(n, n, |j, k| self.h[j][k].to_c64());
        m.symmetric_eigenvalues().iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> HermitianSurface<T> {
        HermitianSurface { h: self.h.iter().map(|r| r.iter().map(&f).collect()).collect() }
    }
}
