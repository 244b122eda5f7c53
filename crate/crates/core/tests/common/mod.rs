//! Curve generators shared by the integration tests.
#![allow(dead_code)]

use holosphere::curve::CurveForm;
use holosphere::family::{family_curve, FamilyParam};
use holosphere::scalars::{Complex64, RadicalComplex, Rat, Ring, Scalar};
use rand::Rng;

pub type E = RadicalComplex;

/// Right action `F -> F M` on every coefficient matrix.
pub fn act_on_columns<S: Scalar>(curve: &CurveForm<S>, m: &[Vec<S>]) -> CurveForm<S> {
    let n = curve.n();
    let coeffs = curve
        .coeffs()
        .iter()
        .map(|rows| rows.clone().map(|row| (0..n).map(|j| (0..n).fold(S::zero(), |acc, k| acc + row[k].clone() * m[k][j].clone())).collect()))
        .collect();
    CurveForm::new(n, coeffs).expect("shape preserved")
}

/// Rotation in the `(i, j)` plane with a Pythagorean cosine and sine.
pub fn rational_givens(n: usize, i: usize, j: usize, triple: (i64, i64, i64)) -> Vec<Vec<E>> {
    let (a, b, c) = triple;
    let mut m: Vec<Vec<E>> = (0..n).map(|r| (0..n).map(|s| E::from_rat(Rat::from_int((r == s) as i64))).collect()).collect();
    let (cos, sin) = (E::from_rat(Rat::new(a, c)), E::from_rat(Rat::new(b, c)));
    m[i][i] = cos.clone();
    m[j][j] = cos;
    m[i][j] = sin.clone();
    m[j][i] = E::from_rat(Rat::new(-b, c));
    m
}

const TRIPLES: [(i64, i64, i64); 4] = [(3, 4, 5), (5, 12, 13), (8, 15, 17), (7, 24, 25)];

/// A random rational orthogonal matrix as a product of Pythagorean rotations.
pub fn random_rational_orthogonal<R: Rng>(n: usize, rng: &mut R) -> Vec<Vec<E>> {
    let mut m = rational_givens(n, 0, 1, (1, 0, 1));
    for _ in 0..3 {
        let i = rng.random_range(0..n);
        let j = (i + rng.random_range(1..n)) % n;
        let g = rational_givens(n, i, j, TRIPLES[rng.random_range(0..TRIPLES.len())]);
        m = (0..n).map(|r| (0..n).map(|s| (0..n).fold(E::zero(), |acc, k| acc + m[r][k].clone() * g[k][s].clone())).collect()).collect();
    }
    m
}

/// A random complex unitary matrix from the QR factorization of a Gaussian matrix.
pub fn random_unitary<R: Rng>(n: usize, rng: &mut R) -> Vec<Vec<Complex64>> {
    let g = nalgebra::DMatrix::from_fn(n, n, |_, _| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5));
    let q = g.qr().q();
    (0..n).map(|i| (0..n).map(|j| q[(i, j)]).collect()).collect()
}

/// A family member at a random rational `t` in `(0, 3]`.
pub fn random_family_member<R: Rng>(rng: &mut R) -> (Rat, CurveForm<E>) {
    let den = rng.random_range(1..=12);
    let num = rng.random_range(1..=3 * den);
    let t = Rat::new(num, den);
    let curve = family_curve(&FamilyParam::new(t.clone()).expect("in range"));
    (t, curve)
}

/// A random nonconstant sparse curve with small integer entries and `F(0) = 0`.
pub fn random_integer_curve<R: Rng>(n: usize, m: usize, rng: &mut R) -> CurveForm<E> {
    loop {
        let curve = sparse_integer_curve(n, m, rng);
        if curve.coeffs().iter().flatten().flatten().any(|x| !x.is_zero()) {
            return curve;
        }
    }
}

fn sparse_integer_curve<R: Rng>(n: usize, m: usize, rng: &mut R) -> CurveForm<E> {
    let coeffs = (0..m)
        .map(|_| {
            [0, 1].map(|_| {
                (0..n).map(|_| if rng.random_bool(0.3) { E::from_rat(Rat::from_int(rng.random_range(-2..=2))) } else { E::zero() }).collect()
            })
        })
        .collect();
    CurveForm::new(n, coeffs).expect("consistent shape")
}

/// A random float curve with Gaussian-like entries.
pub fn random_float_curve<R: Rng>(n: usize, m: usize, rng: &mut R) -> CurveForm<Complex64> {
    let coeffs = (0..m).map(|_| [0, 1].map(|_| (0..n).map(|_| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)).collect())).collect();
    CurveForm::new(n, coeffs).expect("consistent shape")
}
