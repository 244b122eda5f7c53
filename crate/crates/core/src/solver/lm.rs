//! Levenberg–Marquardt with multiplicative damping.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use super::residual::evaluate;
use super::Problem;

const INITIAL_DAMPING: f64 = 1e-3;
const DAMPING_UP: f64 = 2.0;
const DAMPING_DOWN: f64 = 3.0;
const MAX_DAMPING: f64 = 1e16;
/// Accepted steps in a row with relative decrease below `STALL_DECREASE` before giving up.
const STALL_WINDOW: usize = 25;
const STALL_DECREASE: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LmStatus {
    Converged,
    Stalled,
    MaxIterations,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LmOutcome {
    pub x: Vec<f64>,
    /// Final `|r|^2`.
    pub cost: f64,
    pub iterations: usize,
    pub status: LmStatus,
}

/// Minimizes `|r(x)|^2` from `x`; each linear solve counts as one iteration.
///
/// Stops once `sqrt(|r|^2) < tol`.
pub fn levenberg_marquardt(mut x: Vec<f64>, problem: &Problem) -> LmOutcome {
    let mut current = evaluate(&x, problem, true);
    let mut cost = current.cost();
    let mut damping = INITIAL_DAMPING;
    let mut slow = 0;
    let mut iterations = 0;
    let mut jtj = DMatrix::zeros(0, 0);
    let mut grad = DVector::zeros(0);
    let mut fresh = true;
    let status = loop {
        if cost.sqrt() < problem.tol {
            break LmStatus::Converged;
        }
        if iterations >= problem.max_iter {
            break LmStatus::MaxIterations;
        }
        if fresh {
            let jac = current.jacobian.take().expect("requested");
            let r = DVector::from_column_slice(&current.r);
            jtj = jac.tr_mul(&jac);
            grad = jac.tr_mul(&r);
            fresh = false;
        }
        iterations += 1;
        let mut system = jtj.clone();
        for i in 0..system.nrows() {
            system[(i, i)] += damping * jtj[(i, i)] + 1e-14;
        }
        let step = match system.cholesky() {
            Some(ch) => ch.solve(&(-&grad)),
            None => {
                damping *= DAMPING_UP;
                continue;
            }
        };
        let trial: Vec<f64> = x.iter().zip(step.iter()).map(|(a, b)| a + b).collect();
        let trial_cost = evaluate(&trial, problem, false).cost();
        if trial_cost.is_finite() && trial_cost < cost {
            slow = if trial_cost > cost * (1.0 - STALL_DECREASE) { slow + 1 } else { 0 };
            x = trial;
            current = evaluate(&x, problem, true);
            cost = current.cost();
            damping = (damping / DAMPING_DOWN).max(1e-15);
            fresh = true;
            if slow >= STALL_WINDOW {
                break LmStatus::Stalled;
            }
        } else {
            damping *= DAMPING_UP;
            if damping > MAX_DAMPING {
                break LmStatus::Stalled;
            }
        }
    };
    LmOutcome { x, cost, iterations, status }
}
