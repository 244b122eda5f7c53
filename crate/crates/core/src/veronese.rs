//! Veronese curves, their harmonic sequences and the reducible constructions built from them.

use serde::Serialize;

use crate::exterior::KVector;
use crate::polysurface::{HermitianSurface, PolyKVector};
use crate::scalars::{Complex64, Rat, Scalar};

/// Jets whose orthogonal remainder falls below this fraction of their norm are rejected.
pub const JET_CONDITION_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum VeroneseError {
    #[error("index i = {i} out of range for n = {n}")]
    Index { n: usize, i: usize },
    #[error("jets are numerically dependent (ratio {0:e})")]
    DependentJets(f64),
    #[error("osculating wedge is not a constant multiple of (1 + z zbar)^m")]
    NotBinomial,
}

/// `V_0^(n)(z) = (sqrt C(n, p) z^p)_p`.
pub fn v0<S: Scalar>(n: usize) -> PolyKVector<S> {
    assert!(n >= 1, "Veronese degree is positive");
    let comps: Vec<Vec<S>> = (0..=n)
        .map(|p| {
            let mut c = vec![S::zero(); p + 1];
            c[p] = S::sqrt_rat(&Rat::binomial(n as u64, p as u64)).expect("binomials are positive");
            c
        })
        .collect();
    PolyKVector::from_components(&comps)
}

fn binom(a: i64, b: i64) -> f64 {
    if b < 0 || b > a {
        0.0
    } else {
        Rat::binomial(a as u64, b as u64).to_f64()
    }
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|x| x as f64).product()
}

/// Closed form of the `i`-th harmonic-sequence element of `V_0^(n)` at `z`.
pub fn f_closed(n: usize, i: usize, z: Complex64) -> Result<Vec<Complex64>, VeroneseError> {
    if i > n {
        return Err(VeroneseError::Index { n, i });
    }
    let u = z.norm_sqr();
    let prefactor = factorial(i) / (1.0 + u).powi(i as i32);
    let (n_, i_) = (n as i64, i as i64);
    Ok((0..=n_)
        .map(|p| {
            let mut sum = Complex64::new(0.0, 0.0);
            for k in 0..=i_ {
                let c = binom(p, i_ - k) * binom(n_ - p, k);
                if c == 0.0 {
                    continue;
                }
                // z^(p - i) (z zbar)^k = z^(p - i + k) zbar^k, and p - i + k >= 0 whenever c != 0.
                let term = z.powu((p - i_ + k) as u32) * z.conj().powu(k as u32);
                sum += term * if k % 2 == 0 { c } else { -c };
            }
            sum * prefactor * binom(n_, p).sqrt()
        })
        .collect())
}

/// `d^j/dz^j V_0^(n)` at `z`.
pub fn v0_jet(n: usize, j: usize, z: Complex64) -> Vec<Complex64> {
    (0..=n)
        .map(|p| {
            if p < j {
                Complex64::new(0.0, 0.0)
            } else {
                z.powu((p - j) as u32) * (binom(n as i64, p as i64).sqrt() * factorial(p) / factorial(p - j))
            }
        })
        .collect()
}

fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x * y.conj()).sum()
}

/// The part of `d^i V_0^(n)(z)` orthogonal to all lower jets, by modified Gram-Schmidt.
pub fn f_gram_schmidt(n: usize, i: usize, z: Complex64) -> Result<Vec<Complex64>, VeroneseError> {
    if i > n {
        return Err(VeroneseError::Index { n, i });
    }
    let mut basis: Vec<Vec<Complex64>> = Vec::with_capacity(i);
    let mut last = Vec::new();
    for j in 0..=i {
        let jet = v0_jet(n, j, z);
        let scale = inner(&jet, &jet).re.sqrt();
        let mut v = jet;
        // Two sweeps keep the result orthogonal to working precision.
        for _ in 0..2 {
            for b in &basis {
                let c = inner(&v, b);
                v.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
            }
        }
        let norm = inner(&v, &v).re.sqrt();
        if norm < JET_CONDITION_TOL * scale {
            return Err(VeroneseError::DependentJets(norm / scale));
        }
        if j == i {
            last = v;
        } else {
            basis.push(v.iter().map(|x| x / norm).collect());
        }
    }
    Ok(last)
}

/// Frobenius distance between the orthogonal projectors onto the lines through `a` and `b`.
pub fn projector_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    let (na, nb) = (inner(a, a).re, inner(b, b).re);
    let mut sq = 0.0;
    for j in 0..a.len() {
        for k in 0..a.len() {
            let pa = a[j] * a[k].conj() / na;
            let pb = b[j] * b[k].conj() / nb;
            sq += (pa - pb).norm_sqr();
        }
    }
    sq.sqrt()
}

/// `K_i = 4 / (n + 2i(n - i))` and `cos alpha_i = (n - 2i) / (n + 2i(n - i))`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SequenceConstants {
    #[serde(serialize_with = "crate::serialize_display")]
    pub k: Rat,
    #[serde(serialize_with = "crate::serialize_display")]
    pub cos_alpha: Rat,
}

pub fn sequence_constants(n: usize, i: usize) -> Result<SequenceConstants, VeroneseError> {
    if i > n || n == 0 {
        return Err(VeroneseError::Index { n, i });
    }
    let (n, i) = (n as i64, i as i64);
    let den = n + 2 * i * (n - i);
    Ok(SequenceConstants { k: Rat::new(4, den), cos_alpha: Rat::new(n - 2 * i, den) })
}

/// Degree and constant of the osculating wedge `f_0 ^ f_0' ^ ... ^ f_0^(k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Osculating<S> {
    pub degree: usize,
    pub c0: S,
}

/// Expands the osculating wedge of `V_0^(n)` and confirms its surface is `c0 (1 + z zbar)^degree`.
pub fn osculating<S: Scalar>(n: usize, k: usize) -> Result<Osculating<S>, VeroneseError> {
    if k >= n {
        return Err(VeroneseError::Index { n, i: k });
    }
    let mut jet = v0::<S>(n);
    let mut w = jet.clone();
    for _ in 0..k {
        jet = jet.derivative();
        w = w.wedge(&jet).expect("same dimension");
    }
    let m = HermitianSurface::of(&w).match_binomial().ok_or(VeroneseError::NotBinomial)?;
    if m.m != w.poly_degree() || m.c0.to_c64().re <= 0.0 {
        return Err(VeroneseError::NotBinomial);
    }
    Ok(Osculating { degree: m.m, c0: m.c0 })
}

pub fn osculating_degree(n: usize, k: usize) -> Result<usize, VeroneseError> {
    osculating::<crate::scalars::RadicalComplex>(n, k).map(|o| o.degree)
}

fn pad<S: Scalar>(v: &PolyKVector<S>, dim: usize, offset: usize) -> PolyKVector<S> {
    v.embed(dim, offset)
}

/// `(V_0^(n+1), dV_0^(n+1))`, a frame of the span of the first two harmonic-sequence elements, in `C^(n+2)`.
pub fn reducible_type_a<S: Scalar>(n: usize) -> (PolyKVector<S>, PolyKVector<S>) {
    let v = v0::<S>(n + 1);
    let d = v.derivative();
    (v, d)
}

/// `(V_0^(n) padded by one zero, e_(n+1))` in `C^(n+2)`.
pub fn reducible_type_b<S: Scalar>(n: usize) -> (PolyKVector<S>, PolyKVector<S>) {
    let dim = n + 2;
    (pad(&v0::<S>(n), dim, 0), PolyKVector::constant(KVector::unit(dim, n + 1)))
}

/// `(V_0^(a) + 0, 0 + V_0^(b))` in `C^(a+b+2)`.
pub fn direct_sum<S: Scalar>(a: usize, b: usize) -> (PolyKVector<S>, PolyKVector<S>) {
    let dim = a + b + 2;
    (pad(&v0::<S>(a), dim, 0), pad(&v0::<S>(b), dim, a + 1))
}
