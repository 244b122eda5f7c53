//! Dense exterior algebra over `C^N` with the standard orthonormal basis.
//!
//! Basis `k`-vectors `e_I` are indexed by strictly increasing multi-indices `I`, ranked
//! lexicographically. The constraint-matrix column order downstream is this ranking.

use std::sync::OnceLock;

use crate::scalars::{Ring, Scalar};

/// Largest ambient dimension supported by the basis tables.
pub const MAX_DIM: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExteriorError {
    #[error("ambient dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("invalid multi-index {index:?} in dimension {dim}")]
    InvalidIndex { index: Vec<usize>, dim: usize },
    #[error("ambient dimension {0} exceeds supported maximum {MAX_DIM}")]
    TooLarge(usize),
    #[error("coefficient count {got} does not match C({dim},{degree}) = {expected}")]
    Length { dim: usize, degree: usize, expected: usize, got: usize },
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// `masks[n][k]` lists the bitmasks of all `k`-subsets of `0..n` in lexicographic order.
fn basis_table() -> &'static Vec<Vec<Vec<u32>>> {
    static TABLE: OnceLock<Vec<Vec<Vec<u32>>>> = OnceLock::new();
    TABLE.get_or_init(|| {
        (0..=MAX_DIM)
            .map(|n| {
                (0..=n)
                    .map(|k| {
                        let mut out = Vec::with_capacity(binomial(n, k));
                        let mut idx: Vec<usize> = (0..k).collect();
                        loop {
                            out.push(idx.iter().fold(0u32, |m, &i| m | (1 << i)));
                            // advance to the next combination in lex order
                            let mut i = k;
                            loop {
                                if i == 0 {
                                    return out;
                                }
                                i -= 1;
                                if idx[i] < n - k + i {
                                    break;
                                }
                            }
                            idx[i] += 1;
                            for j in i + 1..k {
                                idx[j] = idx[j - 1] + 1;
                            }
                        }
                    })
                    .collect()
            })
            .collect()
    })
}

fn masks(dim: usize, degree: usize) -> &'static [u32] {
    if degree > dim {
        return &[];
    }
    &basis_table()[dim][degree]
}

/// Lexicographic rank of a `k`-subset given as a bitmask.
fn rank_mask(mask: u32, dim: usize) -> usize {
    let mut remaining = mask.count_ones() as usize;
    let mut rank = 0;
    for pos in 0..dim {
        if remaining == 0 {
            break;
        }
        if mask & (1 << pos) != 0 {
            remaining -= 1;
        } else {
            rank += binomial(dim - pos - 1, remaining - 1);
        }
    }
    rank
}

/// Strictly increasing index sequence `i_1 < ... < i_k` in `0..dim`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex(Vec<usize>);

impl MultiIndex {
    pub fn new(indices: Vec<usize>, dim: usize) -> Result<Self, ExteriorError> {
        let ok = indices.windows(2).all(|w| w[0] < w[1]) && indices.iter().all(|&i| i < dim);
        if !ok || dim > MAX_DIM {
            return Err(ExteriorError::InvalidIndex { index: indices, dim });
        }
        Ok(MultiIndex(indices))
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn rank(&self, dim: usize) -> usize {
        rank_mask(self.mask(), dim)
    }

    pub fn unrank(rank: usize, dim: usize, degree: usize) -> Option<Self> {
        let m = *masks(dim, degree).get(rank)?;
        Some(MultiIndex((0..dim).filter(|i| m & (1 << i) != 0).collect()))
    }

    fn mask(&self) -> u32 {
        self.0.iter().fold(0u32, |m, &i| m | (1 << i))
    }
}

/// A homogeneous element of `Λ^k C^N`, stored densely in lexicographic basis order.
#[derive(Debug, Clone, PartialEq)]
pub struct KVector<S> {
    dim: usize,
    degree: usize,
    coeffs: Vec<S>,
}

impl<S: Ring> KVector<S> {
    pub fn zeros(dim: usize, degree: usize) -> Self {
        assert!(dim <= MAX_DIM, "ambient dimension {dim} exceeds {MAX_DIM}");
        KVector { dim, degree, coeffs: vec![S::zero(); binomial(dim, degree)] }
    }

    pub fn from_coeffs(dim: usize, degree: usize, coeffs: Vec<S>) -> Result<Self, ExteriorError> {
        if dim > MAX_DIM {
            return Err(ExteriorError::TooLarge(dim));
        }
        let expected = binomial(dim, degree);
        if coeffs.len() != expected {
            return Err(ExteriorError::Length { dim, degree, expected, got: coeffs.len() });
        }
        Ok(KVector { dim, degree, coeffs })
    }

    /// A vector in `C^N` (degree 1).
    pub fn vector(coeffs: Vec<S>) -> Self {
        let dim = coeffs.len();
        assert!(dim <= MAX_DIM, "ambient dimension {dim} exceeds {MAX_DIM}");
        KVector { dim, degree: 1, coeffs }
    }

    /// The scalar `s` as a 0-vector.
    pub fn scalar(dim: usize, s: S) -> Self {
        KVector { dim, degree: 0, coeffs: vec![s] }
    }

    /// The basis element `e_I`.
    pub fn basis(dim: usize, index: &MultiIndex) -> Self {
        let mut out = Self::zeros(dim, index.degree());
        out.coeffs[index.rank(dim)] = S::one();
        out
    }

    /// `e_i` in `C^N`.
    pub fn unit(dim: usize, i: usize) -> Self {
        let mut out = Self::zeros(dim, 1);
        out.coeffs[i] = S::one();
        out
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<S> {
        self.coeffs
    }

    pub fn get(&self, index: &MultiIndex) -> &S {
        &self.coeffs[index.rank(self.dim)]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Ring::is_zero)
    }

    fn check_same_shape(&self, other: &Self) -> Result<(), ExteriorError> {
        if self.dim != other.dim {
            return Err(ExteriorError::DimensionMismatch(self.dim, other.dim));
        }
        if self.degree != other.degree {
            return Err(ExteriorError::DegreeMismatch(self.degree, other.degree));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, ExteriorError> {
        self.check_same_shape(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.clone() + b.clone()).collect();
        Ok(KVector { dim: self.dim, degree: self.degree, coeffs })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, ExteriorError> {
        self.check_same_shape(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.clone() - b.clone()).collect();
        Ok(KVector { dim: self.dim, degree: self.degree, coeffs })
    }

    /// In-place `self += other`, panicking on shape mismatch.
    pub(crate) fn add_assign_unchecked(&mut self, other: &Self) {
        debug_assert_eq!((self.dim, self.degree), (other.dim, other.degree));
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            if !b.is_zero() {
                *a = a.clone() + b.clone();
            }
        }
    }

    pub fn scale(&self, s: &S) -> Self {
        KVector { dim: self.dim, degree: self.degree, coeffs: self.coeffs.iter().map(|a| a.clone() * s.clone()).collect() }
    }

    pub fn scale_int(&self, k: i64) -> Self {
        KVector { dim: self.dim, degree: self.degree, coeffs: self.coeffs.iter().map(|a| a.scale_int(k)).collect() }
    }

    pub fn map<T: Ring>(&self, f: impl Fn(&S) -> T) -> KVector<T> {
        KVector { dim: self.dim, degree: self.degree, coeffs: self.coeffs.iter().map(f).collect() }
    }

    /// Exterior product `self ∧ other`.
    ///
    /// Degrees above the ambient dimension give the zero-dimensional space.
    pub fn wedge(&self, other: &Self) -> Result<Self, ExteriorError> {
        if self.dim != other.dim {
            return Err(ExteriorError::DimensionMismatch(self.dim, other.dim));
        }
        let dim = self.dim;
        let degree = self.degree + other.degree;
        let mut out = Self::zeros(dim, degree);
        if degree > dim {
            return Ok(out);
        }
        let left = masks(dim, self.degree);
        let right = masks(dim, other.degree);
        for (a, &ma) in self.coeffs.iter().zip(left) {
            if a.is_zero() {
                continue;
            }
            for (b, &mb) in other.coeffs.iter().zip(right) {
                if ma & mb != 0 || b.is_zero() {
                    continue;
                }
                // sign = (-1)^{#(i in I, j in J) with i > j}
                let mut inversions = 0u32;
                let mut rest = mb;
                while rest != 0 {
                    let j = rest.trailing_zeros();
                    inversions += (ma >> (j + 1)).count_ones();
                    rest &= rest - 1;
                }
                let term = a.clone() * b.clone();
                let slot = &mut out.coeffs[rank_mask(ma | mb, dim)];
                *slot = if inversions % 2 == 0 { slot.clone() + term } else { slot.clone() - term };
            }
        }
        Ok(out)
    }
}

impl<S: Scalar> KVector<S> {
    /// Hermitian inner product `sum_I a_I conj(b_I)`, conjugate-linear in `other`.
    pub fn inner(&self, other: &Self) -> Result<S, ExteriorError> {
        self.check_same_shape(other)?;
        Ok(self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .filter(|(a, b)| !a.is_zero() && !b.is_zero())
            .fold(S::zero(), |acc, (a, b)| acc + a.clone() * b.conj()))
    }

    pub fn norm_sqr(&self) -> S {
        self.inner(self).expect("same shape")
    }

    pub fn conj(&self) -> Self {
        self.map(Scalar::conj)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{Complex64, RadicalComplex, Rat};
    use proptest::prelude::*;

    type E = RadicalComplex;

    fn idx(v: &[usize], dim: usize) -> MultiIndex {
        MultiIndex::new(v.to_vec(), dim).unwrap()
    }

    fn ints(v: &[i64]) -> KVector<E> {
        KVector::vector(v.iter().map(|&x| E::from_i64(x)).collect())
    }

    #[test]
    fn lexicographic_ranking() {
        let dim = 5;
        for k in 0..=dim {
            for r in 0..binomial(dim, k) {
                let m = MultiIndex::unrank(r, dim, k).unwrap();
                assert_eq!(m.rank(dim), r);
            }
        }
        assert_eq!(idx(&[0, 1], 4).rank(4), 0);
        assert_eq!(idx(&[0, 3], 4).rank(4), 2);
        assert_eq!(idx(&[1, 2], 4).rank(4), 3);
        assert_eq!(idx(&[2, 3], 4).rank(4), 5);
        assert!(MultiIndex::new(vec![1, 1], 4).is_err());
        assert!(MultiIndex::new(vec![0, 4], 4).is_err());
    }

    #[test]
    fn basic_wedges() {
        let e0 = KVector::<E>::unit(3, 0);
        let e1 = KVector::<E>::unit(3, 1);
        let e01 = KVector::basis(3, &idx(&[0, 1], 3));
        assert_eq!(e0.wedge(&e1).unwrap(), e01);
        assert_eq!(e1.wedge(&e0).unwrap(), e01.scale_int(-1));
        let a = e0.add(&e1).unwrap();
        let b = e0.sub(&e1).unwrap();
        assert_eq!(a.wedge(&b).unwrap(), e01.scale_int(-2));
    }

    #[test]
    fn inner_products() {
        let dim = 3;
        let e01 = KVector::<E>::basis(dim, &idx(&[0, 1], dim));
        let e02 = KVector::<E>::basis(dim, &idx(&[0, 2], dim));
        let e12 = KVector::<E>::basis(dim, &idx(&[1, 2], dim));
        assert_eq!(e01.inner(&e01).unwrap(), E::one());
        assert_eq!(e01.inner(&e02).unwrap(), E::zero());
        let a = e01.scale_int(2).add(&e12.scale(&E::i())).unwrap();
        assert_eq!(a.inner(&e12).unwrap(), E::i());
    }

    #[test]
    fn wedge_sign_on_three_vectors() {
        let e = |i| KVector::<E>::unit(4, i);
        let e021 = e(0).wedge(&e(2)).unwrap().wedge(&e(1)).unwrap();
        assert_eq!(e021, KVector::basis(4, &idx(&[0, 1, 2], 4)).scale_int(-1));
        let e2_01 = e(2).wedge(&e(0).wedge(&e(1)).unwrap()).unwrap();
        assert_eq!(e2_01, KVector::basis(4, &idx(&[0, 1, 2], 4)));
        assert_eq!(e(0).wedge(&KVector::zeros(5, 1)), Err(ExteriorError::DimensionMismatch(4, 5)));
    }

    fn arb_int_vec(dim: usize) -> impl Strategy<Value = Vec<i64>> {
        prop::collection::vec(-5i64..6, dim)
    }

    fn arb_float_vec(dim: usize) -> impl Strategy<Value = KVector<Complex64>> {
        prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), dim)
            .prop_map(|v| KVector::vector(v.into_iter().map(|(a, b)| Complex64::new(a, b)).collect()))
    }

    fn gaussian_rat_vec(v: &[i64], w: &[i64]) -> KVector<E> {
        KVector::vector(
            v.iter()
                .zip(w)
                .map(|(&a, &b)| E::new(crate::scalars::RadicalScalar::from_int(a), crate::scalars::RadicalScalar::from_rat(Rat::new(b, 3))))
                .collect(),
        )
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn self_wedge_vanishes_exact(v in arb_int_vec(5)) {
            let a = ints(&v);
            prop_assert!(a.wedge(&a).unwrap().is_zero());
        }

        #[test]
        fn self_wedge_vanishes_float(a in arb_float_vec(5)) {
            let w = a.wedge(&a).unwrap();
            prop_assert!(w.coeffs().iter().all(|c| c.norm() < 1e-15));
        }

        #[test]
        fn cauchy_schwarz_on_bivectors(a in arb_float_vec(6), b in arb_float_vec(6)) {
            let w = a.wedge(&b).unwrap();
            let lhs = w.norm_sqr().re;
            let rhs = a.norm_sqr().re * b.norm_sqr().re;
            prop_assert!(lhs <= rhs * (1.0 + 1e-12) + 1e-300);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn gram_identity_exact(
            a in arb_int_vec(4), a2 in arb_int_vec(4),
            b in arb_int_vec(4), b2 in arb_int_vec(4),
            c in arb_int_vec(4), c2 in arb_int_vec(4),
            d in arb_int_vec(4), d2 in arb_int_vec(4),
        ) {
            let (a, b, c, d) = (gaussian_rat_vec(&a, &a2), gaussian_rat_vec(&b, &b2), gaussian_rat_vec(&c, &c2), gaussian_rat_vec(&d, &d2));
            let lhs = a.wedge(&b).unwrap().inner(&c.wedge(&d).unwrap()).unwrap();
            let ip = |x: &KVector<E>, y: &KVector<E>| x.inner(y).unwrap();
            let rhs = ip(&a, &c) * ip(&b, &d) - ip(&a, &d) * ip(&b, &c);
            prop_assert_eq!(lhs, rhs);
        }
    }
}
