//! The least-squares residual of `UU* = L1`, `QQ* = L2` over real parameters, with its Jacobian.
//!
//! Parameter layout: complex entry `k = ((alpha - 1) * 2 + row) * n + col` of `A_alpha`
//! occupies `x[2k]` (real part) and `x[2k + 1]` (imaginary part).

use nalgebra::DMatrix;

use super::jet::Jet;
use super::{CMode, Problem, SolverError};
use crate::curve::{CoefficientBlocks, CurveForm};
use crate::scalars::{Complex64, Rat, Ring};

const SQRT2: f64 = std::f64::consts::SQRT_2;

pub fn param_len(problem: &Problem) -> usize {
    4 * problem.n * problem.d
}

fn coeffs_from_params<T>(x: &[f64], d: usize, n: usize, make: impl Fn(Complex64, usize) -> T) -> Vec<[Vec<T>; 2]> {
    (0..d)
        .map(|a| {
            [0, 1].map(|row| {
                (0..n)
                    .map(|col| {
                        let k = (a * 2 + row) * n + col;
                        make(Complex64::new(x[2 * k], x[2 * k + 1]), k)
                    })
                    .collect()
            })
        })
        .collect()
}

/// Float curve with `A_1..A_d` read from `x`.
pub fn curve_from_params(x: &[f64], problem: &Problem) -> CurveForm<Complex64> {
    CurveForm::new(problem.n, coeffs_from_params(x, problem.d, problem.n, |z, _| z)).expect("consistent shape")
}

/// Parameters of a curve with at most `d` coefficient matrices (zero-padded).
pub fn params_from_curve(curve: &CurveForm<Complex64>, problem: &Problem) -> Result<Vec<f64>, SolverError> {
    if curve.n() != problem.n || curve.trimmed().m() > problem.d {
        return Err(SolverError::Shape { d: problem.d, n: problem.n });
    }
    let mut x = vec![0.0; param_len(problem)];
    for (a, rows) in curve.coeffs().iter().enumerate().take(problem.d) {
        for (row, entries) in rows.iter().enumerate() {
            for (col, z) in entries.iter().enumerate() {
                let k = (a * 2 + row) * problem.n + col;
                x[2 * k] = z.re;
                x[2 * k + 1] = z.im;
            }
        }
    }
    Ok(x)
}

fn rows<T: Ring>(n: usize, coeffs: &[[Vec<T>; 2]]) -> (Vec<Vec<T>>, Vec<Vec<T>>) {
    let b = CoefficientBlocks::from_coeffs(n, coeffs);
    let u = (0..b.u_structural_rows()).map(|a| b.u_row(a)).collect();
    let q = (0..b.q_structural_rows()).map(|k| b.q_row(k)).collect();
    (u, q)
}

fn gram(rows: &[Vec<Complex64>]) -> Vec<Vec<Complex64>> {
    let n = rows.len();
    let mut g = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    for j in 0..n {
        for k in j..n {
            let v: Complex64 = rows[j].iter().zip(&rows[k]).map(|(a, b)| a * b.conj()).sum();
            g[j][k] = v;
            g[k][j] = v.conj();
        }
    }
    g
}

/// `L1` on `len` rows.
fn lambda1(d: usize, len: usize) -> Vec<f64> {
    (0..len).map(|k| if k <= d { Rat::binomial(d as u64, k as u64).to_f64() } else { 0.0 }).collect()
}

/// The shape `C(2d - 4, k)` of `L2 / c` on `len` rows.
fn lambda2_shape(d: usize, len: usize) -> Vec<f64> {
    let top = 2 * d - 4;
    (0..len).map(|k| if k <= top { Rat::binomial(top as u64, k as u64).to_f64() } else { 0.0 }).collect()
}

/// Least-squares optimal `c` for the diagonal of `QQ*`.
fn optimal_c(gq: &[Vec<Complex64>], shape: &[f64]) -> f64 {
    let num: f64 = shape.iter().enumerate().map(|(k, s)| s * gq[k][k].re).sum();
    let den: f64 = shape.iter().map(|s| s * s).sum();
    num / den
}

/// Residual vector `r` with `|r|^2 = |UU* - L1|_F^2 + |QQ* - L2|_F^2`, optionally with `dr/dx`.
#[derive(Debug, Clone)]
pub struct Evaluation {
    pub r: Vec<f64>,
    pub jacobian: Option<DMatrix<f64>>,
    pub c: f64,
}

impl Evaluation {
    pub fn cost(&self) -> f64 {
        self.r.iter().map(|x| x * x).sum()
    }
}

fn push_residuals(r: &mut Vec<f64>, g: &[Vec<Complex64>], target: &[f64]) {
    for j in 0..g.len() {
        r.push(g[j][j].re - target[j]);
        for k in j + 1..g.len() {
            r.push(SQRT2 * g[j][k].re);
            r.push(SQRT2 * g[j][k].im);
        }
    }
}

/// Rows of `d(MM*)/dx` in the layout of [`push_residuals`], appended to `jac` starting at `row0`.
fn push_jacobian(jac: &mut DMatrix<f64>, row0: usize, rows: &[Vec<Jet>], nparams: usize) {
    let nr = rows.len();
    let values: Vec<Vec<Complex64>> = rows.iter().map(|r| r.iter().map(|j| j.value).collect()).collect();
    // a[p][j][k] = sum_col dM[j][col]/da_p * conj(M[k][col]).
    let zero = Complex64::new(0.0, 0.0);
    let mut a = vec![vec![vec![zero; nr]; nr]; nparams];
    for j in 0..nr {
        for (col, entry) in rows[j].iter().enumerate() {
            for (p, t) in entry.tangent.iter().enumerate() {
                if *t == zero {
                    continue;
                }
                let ap = &mut a[p][j];
                for k in 0..nr {
                    ap[k] += t * values[k][col].conj();
                }
            }
        }
    }
    for p in 0..nparams {
        let ap = &a[p];
        let mut row = row0;
        for j in 0..nr {
            for k in j..nr {
                let holo = ap[j][k];
                let anti = ap[k][j].conj();
                let dx = holo + anti;
                let dy = Complex64::new(0.0, 1.0) * (holo - anti);
                if j == k {
                    jac[(row, 2 * p)] = dx.re;
                    jac[(row, 2 * p + 1)] = dy.re;
                    row += 1;
                } else {
                    jac[(row, 2 * p)] = SQRT2 * dx.re;
                    jac[(row, 2 * p + 1)] = SQRT2 * dy.re;
                    jac[(row + 1, 2 * p)] = SQRT2 * dx.im;
                    jac[(row + 1, 2 * p + 1)] = SQRT2 * dy.im;
                    row += 2;
                }
            }
        }
    }
}

fn triangle_len(n: usize) -> usize {
    n * n
}

/// Index of the diagonal entry `j` inside the residual block of an `n x n` Gram matrix.
fn diag_index(j: usize, n: usize) -> usize {
    // Row j of the upper triangle contributes 1 + 2 (n - j - 1) entries.
    (0..j).map(|i| 1 + 2 * (n - i - 1)).sum()
}

pub fn evaluate(x: &[f64], problem: &Problem, with_jacobian: bool) -> Evaluation {
    let (d, n) = (problem.d, problem.n);
    let (u, q, ujet, qjet) = if with_jacobian {
        let nparams = 2 * n * d;
        let coeffs = coeffs_from_params(x, d, n, |z, k| Jet::variable(z, k, nparams));
        let (uj, qj) = rows(n, &coeffs);
        let strip = |rows: &[Vec<Jet>]| rows.iter().map(|r| r.iter().map(|j| j.value).collect()).collect::<Vec<Vec<_>>>();
        (strip(&uj), strip(&qj), Some(uj), Some(qj))
    } else {
        let coeffs = coeffs_from_params(x, d, n, |z, _| z);
        let (u, q) = rows(n, &coeffs);
        (u, q, None, None)
    };
    let gu = gram(&u);
    let gq = gram(&q);
    let l1 = lambda1(d, u.len());
    let shape = lambda2_shape(d, q.len());
    let c = match problem.c_mode {
        CMode::Fixed(c) => c,
        CMode::Free => optimal_c(&gq, &shape),
    };
    let l2: Vec<f64> = shape.iter().map(|s| c * s).collect();

    let mut r = Vec::with_capacity(triangle_len(u.len()) + triangle_len(q.len()));
    push_residuals(&mut r, &gu, &l1);
    push_residuals(&mut r, &gq, &l2);

    let jacobian = match (ujet, qjet) {
        (Some(uj), Some(qj)) => {
            let nparams = 2 * n * d;
            let mut jac = DMatrix::zeros(r.len(), 2 * nparams);
            push_jacobian(&mut jac, 0, &uj, nparams);
            let q0 = triangle_len(u.len());
            push_jacobian(&mut jac, q0, &qj, nparams);
            if problem.c_mode == CMode::Free {
                // r_k = G_kk - c*(G) s_k with c* = <s, diag G> / |s|^2.
                let ss: f64 = shape.iter().map(|s| s * s).sum();
                let idx: Vec<usize> = (0..q.len()).map(|k| q0 + diag_index(k, q.len())).collect();
                for col in 0..jac.ncols() {
                    let dc: f64 = idx.iter().zip(&shape).map(|(&i, s)| s * jac[(i, col)]).sum::<f64>() / ss;
                    for (&i, s) in idx.iter().zip(&shape) {
                        jac[(i, col)] -= dc * s;
                    }
                }
            }
            Some(jac)
        }
        _ => None,
    };
    Evaluation { r, jacobian, c }
}

/// `|UU* - L1|_F^2 + |QQ* - L2|_F^2`.
pub fn residual(x: &[f64], problem: &Problem) -> f64 {
    evaluate(x, problem, false).cost()
}

/// Analytic gradient `2 J^T r` of [`residual`].
pub fn gradient(x: &[f64], problem: &Problem) -> Vec<f64> {
    let e = evaluate(x, problem, true);
    let jac = e.jacobian.expect("requested");
    let r = nalgebra::DVector::from_vec(e.r);
    (jac.transpose() * r * 2.0).iter().copied().collect()
}
