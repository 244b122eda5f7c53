//! Common zeros of the scalar components of a `PolyKVector`.

use nalgebra::DMatrix;
use serde::Serialize;

use super::PolyKVector;
use crate::scalars::{Complex64, Ring, Scalar, ScalarError};

/// Remainder sequences stop once the remainder norm drops to this fraction of the input norm.
pub const NUMERIC_GCD_TOL: f64 = 1e-8;
/// Eigenvalues closer than this (relative to `max(1, |z|)`) are merged into one root.
const CLUSTER_TOL: f64 = 1e-5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum RootLocation {
    Finite { re: f64, im: f64 },
    Infinity,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Root {
    pub location: RootLocation,
    pub multiplicity: usize,
}

impl Root {
    pub fn finite(z: Complex64, multiplicity: usize) -> Self {
        Root { location: RootLocation::Finite { re: z.re, im: z.im }, multiplicity }
    }

    pub fn value(&self) -> Option<Complex64> {
        match self.location {
            RootLocation::Finite { re, im } => Some(Complex64::new(re, im)),
            RootLocation::Infinity => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RootError {
    #[error("polynomial is identically zero")]
    ZeroInput,
    #[error("eigenvalue computation did not converge")]
    Eigen,
}

/// How the gcd was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GcdMethod {
    Exact,
    Numeric,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RootReport {
    pub roots: Vec<Root>,
    pub method: GcdMethod,
    pub gcd_degree: usize,
}

/// Roots of the gcd of all scalar components of `w`, with multiplicities.
///
/// With `expected_degree = Some(D)` and `D > deg w`, infinity is appended with multiplicity `D - deg w`.
pub fn common_roots<S: Scalar>(w: &PolyKVector<S>, expected_degree: Option<usize>) -> Result<RootReport, RootError> {
    if w.is_zero() {
        return Err(RootError::ZeroInput);
    }
    let comps: Vec<Vec<S>> = w.component_polys().into_iter().map(trimmed).filter(|p| !p.is_empty()).collect();

    let exact = if S::EXACT { exact_roots(&comps).ok() } else { None };
    let (mut roots, method, gcd_degree) = match exact {
        Some((roots, deg)) => (roots, GcdMethod::Exact, deg),
        None => {
            let floats: Vec<Vec<Complex64>> = comps.iter().map(|p| p.iter().map(Scalar::to_c64).collect()).collect();
            let g = numeric_gcd(&floats);
            let deg = g.len() - 1;
            (clustered(companion_roots(&g)?), GcdMethod::Numeric, deg)
        }
    };
    roots.sort_by(|a, b| {
        let (za, zb) = (a.value().unwrap_or_default(), b.value().unwrap_or_default());
        za.re.total_cmp(&zb.re).then(za.im.total_cmp(&zb.im))
    });
    if let Some(top) = expected_degree {
        let deg = if S::EXACT { w.poly_degree() } else { numeric_degree(w) };
        if top > deg {
            roots.push(Root { location: RootLocation::Infinity, multiplicity: top - deg });
        }
    }
    Ok(RootReport { roots, method, gcd_degree })
}

/// Last power whose coefficient is not negligible against the largest one.
fn numeric_degree<S: Scalar>(w: &PolyKVector<S>) -> usize {
    let norms: Vec<f64> = w.coeffs().iter().map(|c| c.coeffs().iter().map(|x| x.to_c64().norm_sqr()).sum::<f64>().sqrt()).collect();
    let top = norms.iter().copied().fold(0.0, f64::max);
    norms.iter().rposition(|&x| x > NUMERIC_GCD_TOL * top).unwrap_or(0)
}

fn trimmed<S: Scalar>(mut p: Vec<S>) -> Vec<S> {
    while p.last().is_some_and(Ring::is_zero) {
        p.pop();
    }
    p
}

fn exact_roots<S: Scalar>(comps: &[Vec<S>]) -> Result<(Vec<Root>, usize), ScalarError> {
    let mut g = comps[0].clone();
    for p in &comps[1..] {
        if g.len() == 1 {
            break;
        }
        g = exact_gcd(&g, p)?;
    }
    let g = monic(&g)?;
    let deg = g.len() - 1;
    let mut roots = Vec::new();
    for (mult, factor) in yun(&g)? {
        let floats: Vec<Complex64> = factor.iter().map(Scalar::to_c64).collect();
        for z in companion_roots(&floats).map_err(|_| ScalarError::NotRepresentable("eigenvalues".into()))? {
            roots.push(Root::finite(z, mult));
        }
    }
    Ok((roots, deg))
}

fn monic<S: Scalar>(p: &[S]) -> Result<Vec<S>, ScalarError> {
    let inv = p.last().expect("nonzero polynomial").inverse()?;
    Ok(p.iter().map(|c| c.clone() * inv.clone()).collect())
}

/// `(quotient, remainder)` of `a / b` over an exact field; `b` must be trimmed and nonzero.
fn exact_divmod<S: Scalar>(a: &[S], b: &[S]) -> Result<(Vec<S>, Vec<S>), ScalarError> {
    let lead_inv = b.last().expect("nonzero divisor").inverse()?;
    let mut r = a.to_vec();
    if r.len() < b.len() {
        return Ok((vec![], r));
    }
    let mut q = vec![S::zero(); r.len() - b.len() + 1];
    while r.len() >= b.len() {
        let shift = r.len() - b.len();
        let f = r.last().expect("nonempty").clone() * lead_inv.clone();
        for (i, bi) in b.iter().enumerate() {
            r[shift + i] = r[shift + i].clone() - f.clone() * bi.clone();
        }
        q[shift] = f;
        r.pop();
        r = trimmed(r);
    }
    Ok((q, r))
}

fn exact_gcd<S: Scalar>(a: &[S], b: &[S]) -> Result<Vec<S>, ScalarError> {
    let (mut a, mut b) = (a.to_vec(), b.to_vec());
    while !b.is_empty() {
        let (_, r) = exact_divmod(&a, &b)?;
        a = b;
        b = r;
    }
    monic(&a)
}

fn derivative<S: Scalar>(p: &[S]) -> Vec<S> {
    trimmed(p.iter().enumerate().skip(1).map(|(j, c)| c.scale_int(j as i64)).collect())
}

/// Yun's square-free decomposition of a monic polynomial: `(multiplicity, factor)` pairs
/// with non-constant factors.
fn yun<S: Scalar>(f: &[S]) -> Result<Vec<(usize, Vec<S>)>, ScalarError> {
    let mut out = Vec::new();
    if f.len() <= 1 {
        return Ok(out);
    }
    let df = derivative(f);
    let a0 = exact_gcd(f, &df)?;
    let mut b = exact_divmod(f, &a0)?.0;
    let mut c = exact_divmod(&df, &a0)?.0;
    let mut d: Vec<S> = sub(&c, &derivative(&b));
    let mut i = 1;
    while b.len() > 1 {
        let a = exact_gcd(&b, &d)?;
        if a.len() > 1 {
            out.push((i, a.clone()));
        }
        b = exact_divmod(&b, &a)?.0;
        c = exact_divmod(&d, &a)?.0;
        d = sub(&c, &derivative(&b));
        i += 1;
    }
    Ok(out)
}

fn sub<S: Scalar>(a: &[S], b: &[S]) -> Vec<S> {
    let n = a.len().max(b.len());
    trimmed(
        (0..n)
            .map(|j| a.get(j).cloned().unwrap_or_else(S::zero) - b.get(j).cloned().unwrap_or_else(S::zero))
            .collect(),
    )
}

fn norm(p: &[Complex64]) -> f64 {
    p.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

/// Drops leading coefficients below `tol` in absolute value.
fn numeric_trim(mut p: Vec<Complex64>, tol: f64) -> Vec<Complex64> {
    while p.last().is_some_and(|c| c.norm() <= tol) {
        p.pop();
    }
    p
}

fn numeric_gcd2(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let tol = NUMERIC_GCD_TOL * norm(a).max(norm(b));
    let (mut a, mut b) = (numeric_trim(a.to_vec(), tol), numeric_trim(b.to_vec(), tol));
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
    }
    while !b.is_empty() {
        let lead = *b.last().expect("nonempty");
        let mut r = a.clone();
        while r.len() >= b.len() {
            let shift = r.len() - b.len();
            let f = *r.last().expect("nonempty") / lead;
            for (i, bi) in b.iter().enumerate() {
                r[shift + i] -= f * bi;
            }
            r.pop();
        }
        // Rescale to keep the sequence comparable to the input norm.
        let bn = norm(&b);
        a = b.iter().map(|c| c / bn).collect();
        let rn = r.iter().map(|c| c / bn).collect::<Vec<_>>();
        b = numeric_trim(rn, NUMERIC_GCD_TOL);
    }
    let lead = *a.last().expect("nonempty");
    a.iter().map(|c| c / lead).collect()
}

/// Monic numeric gcd of a list of nonzero polynomials.
pub fn numeric_gcd(polys: &[Vec<Complex64>]) -> Vec<Complex64> {
    let mut g = polys[0].clone();
    for p in &polys[1..] {
        if g.len() <= 1 {
            break;
        }
        g = numeric_gcd2(&g, p);
    }
    let lead = *g.last().expect("nonempty");
    g.iter().map(|c| c / lead).collect()
}

/// Eigenvalues of the companion matrix of `p` (lowest coefficient first).
pub fn companion_roots(p: &[Complex64]) -> Result<Vec<Complex64>, RootError> {
    let n = p.len().saturating_sub(1);
    if n == 0 {
        return Ok(vec![]);
    }
    // Zero roots are exact; the remaining companion matrix is nonsingular.
    let zeros = p.iter().take(n).take_while(|c| c.norm() == 0.0).count();
    let p = &p[zeros..];
    let n = n - zeros;
    let mut roots = vec![Complex64::new(0.0, 0.0); zeros];
    if n == 0 {
        return Ok(roots);
    }
    let lead = p[n];
    let m = DMatrix::from_fn(n, n, |i, j| {
        if j == n - 1 {
            -p[i] / lead
        } else if i == j + 1 {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let eigen = |m: DMatrix<Complex64>| nalgebra::linalg::Schur::try_new(m, f64::EPSILON, 10_000).and_then(|s| s.eigenvalues());
    let values = match eigen(m.clone()) {
        Some(v) => v,
        None => {
            // A fixed unitary similarity breaks the exact structure that stalls the iteration.
            let h = DMatrix::from_fn(n, n, |i, j| Complex64::from_polar(1.0, 0.7 * (i * j) as f64 + 0.3 * i as f64));
            let q = h.qr().q();
            eigen(q.adjoint() * m * q).ok_or(RootError::Eigen)?
        }
    };
    roots.extend(values.iter().copied());
    Ok(roots)
}

fn clustered(zs: Vec<Complex64>) -> Vec<Root> {
    let mut groups: Vec<Vec<Complex64>> = Vec::new();
    for z in zs {
        match groups.iter_mut().find(|g| (g[0] - z).norm() <= CLUSTER_TOL * z.norm().max(1.0)) {
            Some(g) => g.push(z),
            None => groups.push(vec![z]),
        }
    }
    groups
        .into_iter()
        .map(|g| {
            let mean = g.iter().sum::<Complex64>() / g.len() as f64;
            Root::finite(mean, g.len())
        })
        .collect()
}
