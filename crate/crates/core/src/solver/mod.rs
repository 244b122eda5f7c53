//! Damped least-squares search for coefficient matrices with `UU* = L1` and `QQ* = L2`.

mod fingerprint;
mod jet;
mod lm;
mod residual;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::Serialize;

pub use fingerprint::{match_family, Candidate, Fingerprint, FamilyMatch, FAMILY_MATCH_TOL};
pub use jet::Jet;
pub use lm::{levenberg_marquardt, LmOutcome, LmStatus};
pub use residual::{curve_from_params, evaluate, gradient, param_len, params_from_curve, residual, Evaluation};

use crate::curve::{assemble_constraints, check_constraints, CurveForm, CurveInvariants};
use crate::scalars::{Complex64, Rat};

/// Fingerprint distance below which two solutions are the same.
pub const DEDUP_TOL: f64 = 1e-4;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SolverError {
    #[error("coefficients do not fit the problem shape d = {d}, n = {n}")]
    Shape { d: usize, n: usize },
    #[error("invalid problem: {0}")]
    Invalid(String),
    #[error("family matching needs d = 4, n = 4, got d = {d}, n = {n}")]
    NotFamilyShape { d: usize, n: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "lowercase")]
pub enum CMode {
    Fixed(f64),
    /// `c` eliminated as the least-squares optimum given `Q`.
    Free,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Problem {
    pub d: usize,
    pub n: usize,
    pub c_mode: CMode,
    pub restarts: usize,
    pub seed: u64,
    /// Threshold on the residual norm `sqrt(residual)`.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for Problem {
    fn default() -> Self {
        Problem { d: 4, n: 4, c_mode: CMode::Free, restarts: 200, seed: 0, tol: 1e-9, max_iter: 500 }
    }
}

impl Problem {
    pub fn validate(&self) -> Result<(), SolverError> {
        let bad = |m: &str| Err(SolverError::Invalid(m.to_string()));
        if self.d < 2 {
            return bad("d must be at least 2");
        }
        if self.n < 2 || self.n > crate::exterior::MAX_DIM {
            return bad("n must lie in 2..=16");
        }
        if self.restarts < 1 {
            return bad("restarts must be at least 1");
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return bad("tol must be positive");
        }
        if let CMode::Fixed(c) = self.c_mode {
            if !c.is_finite() {
                return bad("c must be finite");
            }
        }
        Ok(())
    }

    /// Independent random stream of restart `index`.
    pub fn restart_rng(&self, index: usize) -> ChaCha8Rng {
        let mut seed = [0u8; 32];
        seed[..8].copy_from_slice(&self.seed.to_le_bytes());
        seed[8..16].copy_from_slice(&(index as u64).to_le_bytes());
        ChaCha8Rng::from_seed(seed)
    }

    /// Centered Gaussian start with `E |A_alpha|_F^2 = C(d, alpha)`.
    pub fn initial_point(&self, index: usize) -> Vec<f64> {
        let mut rng = self.restart_rng(index);
        let mut x = vec![0.0; param_len(self)];
        let per_alpha = 4 * self.n;
        for (a, chunk) in x.chunks_mut(per_alpha).enumerate() {
            let var = Rat::binomial(self.d as u64, a as u64 + 1).to_f64() / (2 * self.n) as f64;
            let normal = Normal::new(0.0, (var / 2.0).sqrt()).expect("finite variance");
            chunk.iter_mut().for_each(|v| *v = normal.sample(&mut rng));
        }
        x
    }
}

/// A converged, re-verified solution.
#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub curve: CurveForm<Complex64>,
    /// Residual norm `sqrt(|UU* - L1|^2 + |QQ* - L2|^2)`.
    pub residual: f64,
    pub c: f64,
    /// `8 - 16c/d^2 - 8/d` with `d` and `c` read off the curve's surfaces when they are binomial.
    pub s: f64,
    pub fingerprint: Fingerprint,
    pub restart: usize,
}

impl Solution {
    fn from_params(x: &[f64], problem: &Problem, restart: usize) -> Option<Self> {
        let e = evaluate(x, problem, false);
        let residual = e.cost().sqrt();
        if !(residual < problem.tol) {
            return None;
        }
        let curve = curve_from_params(x, problem);
        let cm = assemble_constraints(&curve, Some(problem.d), Some(Complex64::new(e.c, 0.0)));
        let check = check_constraints(&cm);
        if !(check.u_residual.hypot(check.q_residual) < problem.tol) {
            return None;
        }
        let s = match curve.invariant_chain() {
            Ok(inv) => inv.s.re,
            Err(_) => CurveInvariants::new(problem.d, Complex64::new(e.c, 0.0)).s.re,
        };
        let fingerprint = Fingerprint::of(&curve, problem.d, e.c, s);
        Some(Solution { curve, residual, c: e.c, s, fingerprint, restart })
    }
}

/// Outcome of one restart, kept for diagnostics.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RestartSummary {
    pub restart: usize,
    pub status: LmStatus,
    pub iterations: usize,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveOutcome {
    pub solutions: Vec<Solution>,
    pub restarts: Vec<RestartSummary>,
}

impl SolveOutcome {
    /// Smallest residual norm over all restarts.
    pub fn best_residual(&self) -> f64 {
        self.restarts.iter().map(|r| r.residual).fold(f64::INFINITY, f64::min)
    }
}

/// Runs every restart, keeps re-verified solutions under `tol`, sorts by `(residual, fingerprint)`
/// and removes fingerprint duplicates.
///
/// The output depends only on the problem, never on thread scheduling.
pub fn solve_detailed(problem: &Problem) -> Result<SolveOutcome, SolverError> {
    problem.validate()?;
    let runs: Vec<(RestartSummary, Option<Solution>)> = (0..problem.restarts)
        .into_par_iter()
        .map(|i| {
            let out = levenberg_marquardt(problem.initial_point(i), problem);
            let summary = RestartSummary { restart: i, status: out.status, iterations: out.iterations, residual: out.cost.sqrt() };
            let solution = (out.status == LmStatus::Converged).then(|| Solution::from_params(&out.x, problem, i)).flatten();
            (summary, solution)
        })
        .collect();
    let (restarts, found): (Vec<_>, Vec<_>) = runs.into_iter().unzip();
    let mut found: Vec<Solution> = found.into_iter().flatten().collect();
    found.sort_by(|a, b| a.residual.total_cmp(&b.residual).then_with(|| a.fingerprint.cmp_lex(&b.fingerprint)));
    let mut solutions: Vec<Solution> = Vec::new();
    for s in found {
        if solutions.iter().all(|k| k.fingerprint.distance(&s.fingerprint) >= DEDUP_TOL) {
            solutions.push(s);
        }
    }
    Ok(SolveOutcome { solutions, restarts })
}

/// Deduplicated solutions of `problem`; empty when no restart converges.
pub fn solve(problem: &Problem) -> Result<Vec<Solution>, SolverError> {
    solve_detailed(problem).map(|o| o.solutions)
}

/// JSON solve report: problem echo and one entry per solution.
#[derive(Debug, Clone, Serialize)]
pub struct SolveReport {
    pub problem: Problem,
    pub converged_restarts: usize,
    pub best_residual: f64,
    pub solutions: Vec<SolutionReport>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SolutionReport {
    pub restart: usize,
    pub residual: f64,
    pub c: f64,
    pub s: f64,
    pub fingerprint: Fingerprint,
    pub family: Option<FamilyMatch>,
    /// `coeffs[alpha - 1][row][col] = [re, im]`.
    pub coeffs: Vec<[Vec<[f64; 2]>; 2]>,
}

impl SolveReport {
    pub fn new(problem: &Problem, outcome: &SolveOutcome) -> Self {
        let solutions = outcome
            .solutions
            .iter()
            .map(|s| SolutionReport {
                restart: s.restart,
                residual: s.residual,
                c: s.c,
                s: s.s,
                fingerprint: s.fingerprint.clone(),
                family: match_family(s, problem).ok(),
                coeffs: s.curve.coeffs().iter().map(|rows| rows.clone().map(|r| r.iter().map(|z| [z.re, z.im]).collect())).collect(),
            })
            .collect();
        SolveReport {
            problem: problem.clone(),
            converged_restarts: outcome.restarts.iter().filter(|r| r.status == LmStatus::Converged).count(),
            best_residual: outcome.best_residual(),
            solutions,
        }
    }
}
