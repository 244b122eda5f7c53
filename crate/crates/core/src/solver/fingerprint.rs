//! Gauge-invariant summaries of solutions and their comparison with the family.

use nalgebra::DMatrix;
use serde::Serialize;

use super::{Problem, Solution, SolverError};
use crate::curve::CurveForm;
use crate::family::family_curve_float;
use crate::scalars::Complex64;

/// Fingerprint distance below which a family member is accepted as a candidate.
pub const FAMILY_MATCH_TOL: f64 = 1e-4;
const C_MATCH_TOL: f64 = 1e-4;
/// Slack on the endpoint `t = 3` for singular values carrying round-off.
const RANGE_SLACK: f64 = 1e-6;

/// Descending singular values of each `A_alpha`, then `(c, S)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Fingerprint {
    pub singular_values: Vec<Vec<f64>>,
    pub c: f64,
    pub s: f64,
}

impl Fingerprint {
    /// Singular values of `A_1..A_d`; missing matrices count as zero.
    pub fn of(curve: &CurveForm<Complex64>, d: usize, c: f64, s: f64) -> Self {
        let singular_values = (1..=d)
            .map(|alpha| {
                let a = curve.a(alpha);
                let m = DMatrix::from_fn(2, curve.n(), |i, j| a[i][j]);
                let mut sv: Vec<f64> = m.singular_values().iter().copied().collect();
                sv.sort_by(|x, y| y.total_cmp(x));
                sv
            })
            .collect();
        Fingerprint { singular_values, c, s }
    }

    fn flat(&self) -> Vec<f64> {
        self.singular_values.iter().flatten().copied().chain([self.c, self.s]).collect()
    }

    pub fn distance(&self, other: &Fingerprint) -> f64 {
        let (a, b) = (self.flat(), other.flat());
        let len = a.len().max(b.len());
        let get = |v: &[f64], i: usize| v.get(i).copied().unwrap_or(0.0);
        (0..len).map(|i| (get(&a, i) - get(&b, i)).powi(2)).sum::<f64>().sqrt()
    }

    pub(crate) fn cmp_lex(&self, other: &Fingerprint) -> std::cmp::Ordering {
        self.flat().iter().zip(other.flat().iter()).map(|(a, b)| a.total_cmp(b)).find(|o| o.is_ne()).unwrap_or(std::cmp::Ordering::Equal)
    }
}

/// A proposed family parameter with its fingerprint distance to the family member.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Candidate {
    pub t: f64,
    pub distance: f64,
    pub accepted: bool,
}

/// Family members consistent with a solution's fingerprint.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FamilyMatch {
    /// Every `t` proposed from `sigma(A_1)` that passes the `c` filter.
    pub proposals: Vec<Candidate>,
    /// The accepted proposals.
    pub candidates: Vec<f64>,
    pub note: &'static str,
}

/// Proposes `t` in `{sigma_1^2, sigma_2^2}` from `A_1` with `|c - (4t - t^2)| < 1e-4` and accepts
/// those whose fingerprint lies within [`FAMILY_MATCH_TOL`] of the family member at `t`.
///
/// Matching fingerprints are necessary for unitary congruence, not sufficient.
pub fn match_family(solution: &Solution, problem: &Problem) -> Result<FamilyMatch, SolverError> {
    if problem.d != 4 || problem.n != 4 {
        return Err(SolverError::NotFamilyShape { d: problem.d, n: problem.n });
    }
    let fp = &solution.fingerprint;
    let mut ts: Vec<f64> = fp.singular_values[0]
        .iter()
        .map(|s| s * s)
        .filter(|&t| t > 0.0 && t <= 3.0 + RANGE_SLACK)
        .map(|t| t.min(3.0))
        .filter(|t| (fp.c - (4.0 * t - t * t)).abs() < C_MATCH_TOL)
        .collect();
    ts.dedup_by(|a, b| (*a - *b).abs() < C_MATCH_TOL);
    let proposals: Vec<Candidate> = ts
        .into_iter()
        .map(|t| {
            let member = family_curve_float(t);
            let c = 4.0 * t - t * t;
            let target = Fingerprint::of(&member, problem.d, c, t * t - 4.0 * t + 6.0);
            let distance = fp.distance(&target);
            Candidate { t, distance, accepted: distance < FAMILY_MATCH_TOL }
        })
        .collect();
    let candidates = proposals.iter().filter(|c| c.accepted).map(|c| c.t).collect();
    Ok(FamilyMatch { proposals, candidates, note: "necessary conditions only" })
}
