//! The `U` and `Q` coefficient matrices and the conditions `UU* = L1`, `QQ* = L2`.

use serde::Serialize;

use super::CurveForm;
use crate::exterior::KVector;
use crate::polysurface::HermitianSurface;
use crate::scalars::{Rat, Ring, Scalar};

/// Coefficient blocks of `F_1 ^ F_2`, `dF_1 ^ dF_2` and their products with the rows of `F`.
///
/// Index conventions: `a1[alpha]`, `v[j]`, `r[j]` with `j` the total degree in
/// `sum V_j z^j` and `sum R_j z^(j-2)`; `s[p]`, `t[p]`, `x[p]` with `p - 2` the power of `z`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientBlocks<S> {
    pub a1: Vec<KVector<S>>,
    pub a2: Vec<KVector<S>>,
    pub v: Vec<KVector<S>>,
    pub r: Vec<KVector<S>>,
    pub s: Vec<KVector<S>>,
    pub t: Vec<KVector<S>>,
    pub x: Vec<KVector<S>>,
}

impl<S: Scalar> CoefficientBlocks<S> {
    pub fn of(curve: &CurveForm<S>) -> Self {
        Self::from_coeffs(curve.n(), curve.coeffs())
    }
}

impl<S: Ring> CoefficientBlocks<S> {
    /// Blocks of `F = sum_alpha A_alpha z^alpha` with `coeffs[alpha - 1] = A_alpha`.
    pub fn from_coeffs(n: usize, coeffs: &[[Vec<S>; 2]]) -> Self {
        let m = coeffs.len();
        let row = |i: usize, alpha: usize| {
            if alpha == 0 {
                KVector::zeros(n, 1)
            } else {
                KVector::vector(coeffs[alpha - 1][i].clone())
            }
        };
        let a1: Vec<_> = (0..=m).map(|a| row(0, a)).collect();
        let a2: Vec<_> = (0..=m).map(|a| row(1, a)).collect();

        let mut v = vec![KVector::zeros(n, 2); 2 * m + 1];
        let mut r = vec![KVector::zeros(n, 2); 2 * m + 1];
        for b in 1..=m {
            for g in 1..=m {
                let w = a1[b].wedge(&a2[g]).expect("same dimension");
                r[b + g].add_assign_unchecked(&w.scale_int((b * g) as i64));
                v[b + g].add_assign_unchecked(&w);
            }
        }
        let convolve = |left: &[KVector<S>], right: &[KVector<S>], degree: usize| {
            let mut out = vec![KVector::zeros(n, degree); left.len() + right.len() - 1];
            for (j, lj) in left.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
                for (k, rk) in right.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
                    out[j + k].add_assign_unchecked(&lj.wedge(rk).expect("same dimension"));
                }
            }
            out
        };
        let s = convolve(&r, &a1, 3);
        let t = convolve(&r, &a2, 3);
        let x = convolve(&r, &v, 4);
        CoefficientBlocks { a1, a2, v, r, s, t, x }
    }

    /// Row `alpha` of `U`: `(delta | a1, a2 | V_alpha)`.
    pub fn u_row(&self, alpha: usize) -> Vec<S> {
        let n = self.a1[0].dim();
        let mut row = vec![if alpha == 0 { S::one() } else { S::zero() }];
        for a in [&self.a1, &self.a2] {
            match a.get(alpha) {
                Some(x) => row.extend_from_slice(x.coeffs()),
                None => row.extend(std::iter::repeat_n(S::zero(), n)),
            }
        }
        extend_block(&mut row, &self.v, alpha, n, 2);
        row
    }

    /// Row `k` of `Q`: `(R_p | S_p | T_p | X_p)` with `p = k + 2`.
    pub fn q_row(&self, k: usize) -> Vec<S> {
        let n = self.a1[0].dim();
        let p = k + 2;
        let mut row = Vec::new();
        extend_block(&mut row, &self.r, p, n, 2);
        extend_block(&mut row, &self.s, p, n, 3);
        extend_block(&mut row, &self.t, p, n, 3);
        extend_block(&mut row, &self.x, p, n, 4);
        row
    }

    /// Rows of `U` that can be nonzero.
    pub fn u_structural_rows(&self) -> usize {
        self.v.len()
    }

    /// Rows of `Q` that can be nonzero.
    pub fn q_structural_rows(&self) -> usize {
        self.x.len() - 2
    }
}

fn extend_block<S: Ring>(row: &mut Vec<S>, blocks: &[KVector<S>], i: usize, n: usize, degree: usize) {
    match blocks.get(i) {
        Some(x) => row.extend_from_slice(x.coeffs()),
        None => row.extend(std::iter::repeat_n(S::zero(), crate::exterior::binomial(n, degree))),
    }
}

/// `U`, `Q` and the diagonal targets `L1 = diag C(d, k)`, `L2 = c diag C(2d - 4, k)`.
///
/// Rows extend past `d` (resp. `2d - 4`) whenever the curve has nonzero coefficients there;
/// the targets are zero on those rows.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstraintMatrices<S> {
    pub d: usize,
    pub c: S,
    pub u: Vec<Vec<S>>,
    pub q: Vec<Vec<S>>,
    pub lambda1: Vec<S>,
    pub lambda2: Vec<S>,
}

/// `M M*`.
pub fn gram<S: Scalar>(rows: &[Vec<S>]) -> Vec<Vec<S>> {
    let n = rows.len();
    let mut g = vec![vec![S::zero(); n]; n];
    for j in 0..n {
        for k in j..n {
            let v = rows[j].iter().zip(&rows[k]).fold(S::zero(), |acc, (a, b)| acc + a.clone() * b.conj());
            if j != k {
                g[k][j] = v.conj();
            }
            g[j][k] = v;
        }
    }
    g
}

fn effective_rows<S: Scalar>(rows: &[Vec<S>]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    HermitianSurface::from_matrix(gram(rows)).expect("square").effective_size()
}

/// Builds `U`, `Q`, `L1`, `L2`.
///
/// `d` defaults to the trimmed degree of the `U` rows; `c` defaults to `(QQ*)[0][0]`.
pub fn assemble_constraints<S: Scalar>(curve: &CurveForm<S>, d: Option<usize>, c: Option<S>) -> ConstraintMatrices<S> {
    let blocks = CoefficientBlocks::of(curve);
    let u_all: Vec<_> = (0..blocks.u_structural_rows()).map(|a| blocks.u_row(a)).collect();
    let q_all: Vec<_> = (0..blocks.q_structural_rows()).map(|k| blocks.q_row(k)).collect();
    let u_eff = effective_rows(&u_all);
    let q_eff = effective_rows(&q_all);

    let d = d.unwrap_or(u_eff - 1);
    let top = (2 * d).checked_sub(4);
    let c = c.unwrap_or_else(|| q_all.first().map_or_else(S::zero, |row| gram(std::slice::from_ref(row))[0][0].clone()));

    let u_rows = u_eff.max(d + 1);
    let q_rows = q_eff.max(top.map_or(0, |t| t + 1)).max(1);
    let width_u = u_all[0].len();
    let width_q = blocks.q_row(0).len();
    let resize = |mut rows: Vec<Vec<S>>, len: usize, width: usize| {
        rows.resize(len, vec![S::zero(); width]);
        rows
    };
    let lambda1 = (0..u_rows)
        .map(|k| if k <= d { S::from_rat(&Rat::binomial(d as u64, k as u64)) } else { S::zero() })
        .collect();
    let lambda2 = (0..q_rows)
        .map(|k| match top {
            Some(t) if k <= t => c.clone() * S::from_rat(&Rat::binomial(t as u64, k as u64)),
            _ => S::zero(),
        })
        .collect();
    ConstraintMatrices { d, c, u: resize(u_all, u_rows, width_u), q: resize(q_all, q_rows, width_q), lambda1, lambda2 }
}

/// Outcome of comparing `UU*` and `QQ*` against their targets.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConstraintCheck {
    pub u_ok: bool,
    pub q_ok: bool,
    /// Frobenius norm of `UU* - L1`.
    pub u_residual: f64,
    /// Frobenius norm of `QQ* - L2`.
    pub q_residual: f64,
}

fn compare<S: Scalar>(rows: &[Vec<S>], target: &[S]) -> (bool, f64) {
    let g = gram(rows);
    let tol = if S::EXACT { 0.0 } else { crate::polysurface::BINOMIAL_REL_TOL * target.first().map_or(0.0, |t| t.to_c64().norm()).max(1.0) };
    let mut ok = true;
    let mut sq = 0.0;
    for (j, row) in g.iter().enumerate() {
        for (k, x) in row.iter().enumerate() {
            let t = if j == k { target[j].clone() } else { S::zero() };
            ok &= x.approx_eq(&t, tol);
            sq += (x.to_c64() - t.to_c64()).norm_sqr();
        }
    }
    (ok, sq.sqrt())
}

/// Exact equality in exact mode; entrywise `1e-9 * max(|target_0|, 1)` in float mode.
pub fn check_constraints<S: Scalar>(cm: &ConstraintMatrices<S>) -> ConstraintCheck {
    let (u_ok, u_residual) = compare(&cm.u, &cm.lambda1);
    let (q_ok, q_residual) = compare(&cm.q, &cm.lambda2);
    ConstraintCheck { u_ok, q_ok, u_residual, q_residual }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exterior::MultiIndex;
    use crate::scalars::{RadicalComplex, RadicalScalar};

    type E = RadicalComplex;

    fn r(s: &str) -> E {
        E::real(s.parse::<RadicalScalar>().unwrap())
    }

    #[test]
    fn shapes() {
        let c = CurveForm::from_rows(
            &[vec![r("0"), r("1")], vec![r("0"), r("0"), r("1")], vec![], vec![]],
            &[vec![], vec![], vec![r("0"), r("2")], vec![]],
        )
        .unwrap();
        let cm = assemble_constraints(&c, Some(4), None);
        assert_eq!(cm.u.len(), 5);
        assert!(cm.u.iter().all(|row| row.len() == 1 + 8 + 6));
        assert_eq!(cm.q.len(), 5);
        assert!(cm.q.iter().all(|row| row.len() == 6 + 2 * 4 + 1));
    }

    #[test]
    fn single_quadratic_block() {
        // F = A_2 z^2 only: R_4 = 4 a1 ^ a2.
        let a2 = [vec![r("1"), r("0"), r("0")], vec![r("0"), r("1"), r("1")]];
        let c = CurveForm::new(3, vec![[vec![E::zero(); 3], vec![E::zero(); 3]], a2]).unwrap();
        let b = CoefficientBlocks::of(&c);
        let e01 = KVector::<E>::basis(3, &MultiIndex::new(vec![0, 1], 3).unwrap());
        let e02 = KVector::<E>::basis(3, &MultiIndex::new(vec![0, 2], 3).unwrap());
        assert_eq!(b.r[4], e01.add(&e02).unwrap().scale_int(4));
        assert_eq!(b.v[4], e01.add(&e02).unwrap());
        assert!(b.r[2].is_zero() && b.r[3].is_zero());
    }

    #[test]
    fn residual_of_a_non_curve() {
        let c = CurveForm::from_rows(&[vec![r("0"), r("1")], vec![]], &[vec![], vec![]]).unwrap();
        let cm = assemble_constraints(&c, Some(2), Some(E::one()));
        let check = check_constraints(&cm);
        assert!(!check.u_ok);
        // UU* = diag(1, 1, 0) against diag(1, 2, 1).
        assert!((check.u_residual - 2f64.sqrt()).abs() < 1e-12);
    }
}
