//! Bringing a polynomial 2-frame into the normal form `[I_2, F]` with `F(0) = 0`.

use super::{CurveError, CurveForm};
use crate::polysurface::PolyKVector;
use crate::scalars::Scalar;

/// Float coefficients of the pivot determinant above this (relative) count as nonconstant.
const PIVOT_TOL: f64 = 1e-10;

type Poly<S> = Vec<S>;

fn inner<S: Scalar>(a: &[S], b: &[S]) -> S {
    a.iter().zip(b).fold(S::zero(), |acc, (x, y)| acc + x.clone() * y.conj())
}

fn negligible<S: Scalar>(x: &S, scale: f64) -> bool {
    if S::EXACT {
        x.is_zero()
    } else {
        x.to_c64().norm() <= 1e-12 * scale.max(1.0)
    }
}

/// Index of the pivot entry among `start..`: the preferred one when nonzero in exact mode,
/// the largest in float mode.
fn pivot<S: Scalar>(x: &[S], start: usize) -> Option<usize> {
    if S::EXACT {
        (start..x.len()).find(|&i| !x[i].is_zero())
    } else {
        (start..x.len()).max_by(|&i, &j| x[i].to_c64().norm().total_cmp(&x[j].to_c64().norm()))
    }
}

/// A unitary of `C^N` accumulated as an explicit matrix, acting on column vectors.
struct Unitary<S> {
    rows: Vec<Vec<S>>,
}

impl<S: Scalar> Unitary<S> {
    fn identity(n: usize) -> Self {
        Unitary { rows: (0..n).map(|i| (0..n).map(|j| if i == j { S::one() } else { S::zero() }).collect()).collect() }
    }

    fn apply(&self, x: &[S]) -> Vec<S> {
        self.rows.iter().map(|r| r.iter().zip(x).fold(S::zero(), |acc, (a, b)| acc + a.clone() * b.clone())).collect()
    }

    /// Left-multiplies by the operator `op` (applied column by column).
    fn then(&mut self, op: impl Fn(&[S]) -> Vec<S>) {
        let n = self.rows.len();
        let cols: Vec<Vec<S>> = (0..n).map(|j| op(&self.rows.iter().map(|r| r[j].clone()).collect::<Vec<_>>())).collect();
        for i in 0..n {
            for j in 0..n {
                self.rows[i][j] = cols[j][i].clone();
            }
        }
    }

    /// Composes a swap, a phase and a Householder reflection sending unit `x` to `e_k`,
    /// where `x` is supported on coordinates `k..`.
    fn send_to_basis(&mut self, x: &[S], k: usize) -> Result<(), CurveError> {
        let p = pivot(x, k).ok_or(CurveError::DependentFrame)?;
        self.then(|y| {
            let mut y = y.to_vec();
            y.swap(k, p);
            y
        });
        let mut x = x.to_vec();
        x.swap(k, p);
        let phase = x[k].real_rotation()?;
        self.then(|y| {
            let mut y = y.to_vec();
            y[k] = phase.clone() * y[k].clone();
            y
        });
        x[k] = phase.clone() * x[k].clone();
        let mut w = x;
        w[k] = w[k].clone() - S::one();
        let ww = inner(&w, &w);
        if negligible(&ww, 1.0) {
            return Ok(());
        }
        let factor = ww.inverse()?.scale_int(2);
        self.then(|y| {
            let c = inner(y, &w) * factor.clone();
            y.iter().zip(&w).map(|(a, b)| a.clone() - c.clone() * b.clone()).collect()
        });
        Ok(())
    }
}

fn poly_mul<S: Scalar>(a: &[S], b: &[S]) -> Poly<S> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![S::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = out[i + j].clone() + x.clone() * y.clone();
        }
    }
    out
}

fn poly_sub<S: Scalar>(a: &[S], b: &[S]) -> Poly<S> {
    (0..a.len().max(b.len()))
        .map(|j| a.get(j).cloned().unwrap_or_else(S::zero) - b.get(j).cloned().unwrap_or_else(S::zero))
        .collect()
}

/// Normal form of the curve spanned by `v1(z), v2(z)`.
///
/// Applies a constant unitary sending `span{v1(0), v2(0)}` to `span{e_1, e_2}`, then the
/// inverse of the leading 2x2 block, which must have a nonzero constant determinant.
pub fn normalize_span<S: Scalar>(v1: &PolyKVector<S>, v2: &PolyKVector<S>) -> Result<CurveForm<S>, CurveError> {
    let dim = v1.dim();
    if v1.kdegree() != 1 || v2.kdegree() != 1 || v2.dim() != dim || dim < 3 {
        return Err(CurveError::FrameShape);
    }
    let comps1 = v1.component_polys();
    let comps2 = v2.component_polys();
    let u1: Vec<S> = comps1.iter().map(|p| p[0].clone()).collect();
    let u2: Vec<S> = comps2.iter().map(|p| p[0].clone()).collect();

    let n1 = inner(&u1, &u1);
    let scale = n1.to_c64().norm();
    if negligible(&n1, 1.0) {
        return Err(CurveError::DependentFrame);
    }
    let inv1 = n1.sqrt_real()?.inverse()?;
    let e1: Vec<S> = u1.iter().map(|x| x.clone() * inv1.clone()).collect();
    let proj = inner(&u2, &e1);
    let r: Vec<S> = u2.iter().zip(&e1).map(|(a, b)| a.clone() - proj.clone() * b.clone()).collect();
    let n2 = inner(&r, &r);
    if negligible(&n2, scale.max(inner(&u2, &u2).to_c64().norm())) {
        return Err(CurveError::DependentFrame);
    }
    let inv2 = n2.sqrt_real()?.inverse()?;
    let e2: Vec<S> = r.iter().map(|x| x.clone() * inv2.clone()).collect();

    let mut t = Unitary::identity(dim);
    t.send_to_basis(&e1, 0)?;
    let mut y = t.apply(&e2);
    if !S::EXACT {
        y[0] = S::zero();
    }
    t.send_to_basis(&y, 1)?;

    let transform = |comps: &[Poly<S>]| -> Vec<Poly<S>> {
        let len = comps.iter().map(Vec::len).max().unwrap_or(1);
        let coeff_vecs: Vec<Vec<S>> = (0..len).map(|j| t.apply(&comps.iter().map(|p| p.get(j).cloned().unwrap_or_else(S::zero)).collect::<Vec<_>>())).collect();
        (0..dim).map(|i| coeff_vecs.iter().map(|c| c[i].clone()).collect()).collect()
    };
    let m1 = transform(&comps1);
    let m2 = transform(&comps2);

    let det = poly_sub(&poly_mul(&m1[0], &m2[1]), &poly_mul(&m1[1], &m2[0]));
    let det0 = det[0].clone();
    if negligible(&det0, 1.0) {
        return Err(CurveError::DependentFrame);
    }
    let det_scale = det0.to_c64().norm();
    let constant = det[1..].iter().all(|x| if S::EXACT { x.is_zero() } else { x.to_c64().norm() <= PIVOT_TOL * det_scale.max(1.0) });
    if !constant {
        return Err(CurveError::NonconstantPivot);
    }
    let inv = det0.inverse()?;
    let combine = |a: &[S], b: &[S], ma: &[S], mb: &[S]| -> Poly<S> {
        poly_sub(&poly_mul(a, ma), &poly_mul(b, mb)).into_iter().map(|x| x * inv.clone()).collect()
    };
    let (b11, b12, b21, b22) = (&m1[0], &m1[1], &m2[0], &m2[1]);
    let mut f1 = Vec::with_capacity(dim - 2);
    let mut f2 = Vec::with_capacity(dim - 2);
    for col in 2..dim {
        // Rows of adj(B) * M.
        let mut p1 = combine(b22, b12, &m1[col], &m2[col]);
        let mut p2 = combine(b11, b21, &m2[col], &m1[col]);
        for p in [&mut p1, &mut p2] {
            if !S::EXACT {
                if let Some(c0) = p.first_mut() {
                    *c0 = S::zero();
                }
            }
        }
        f1.push(p1);
        f2.push(p2);
    }
    Ok(CurveForm::from_rows(&f1, &f2)?.trimmed())
}
