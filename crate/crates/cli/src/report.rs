//! JSON reports with every number tagged by its arithmetic.

use holosphere::curve::{assemble_constraints, check_constraints, CurveForm, Mode};
use holosphere::polysurface::{HermitianSurface, RootReport};
use holosphere::scalars::{Complex64, RadicalComplex, Rat, Scalar};
use holosphere::solver::Fingerprint;
use serde::Serialize;

/// A number tagged `exact` (radical text form) or `float`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Num {
    Exact { value: String },
    Float { re: f64, im: f64 },
}

impl Num {
    pub fn rat(q: &Rat) -> Num {
        Num::Exact { value: q.to_string() }
    }
}

/// Scalars that can be written into a report.
pub trait Tagged: Scalar {
    fn tag(&self) -> Num;
}

impl Tagged for RadicalComplex {
    fn tag(&self) -> Num {
        Num::Exact { value: self.to_string() }
    }
}

impl Tagged for Complex64 {
    fn tag(&self) -> Num {
        Num::Float { re: self.re, im: self.im }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    /// Frobenius distance from the target, present on failure.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Invariants {
    pub d: usize,
    pub c: Num,
    pub k: Num,
    pub s: Num,
    pub det_a1_sq: Num,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: String,
    pub input: String,
    pub mode: Option<Mode>,
    pub checks: Vec<Check>,
    pub invariants: Option<Invariants>,
    pub reducible: Option<bool>,
    pub ramification: Option<RootReport>,
    pub fingerprint: Option<Fingerprint>,
    pub notes: Vec<String>,
    /// Command-specific payload.
    #[serde(skip_serializing_if = "serde_json::Value::is_null")]
    pub details: serde_json::Value,
}

impl Report {
    pub fn new(command: &str, input: &str) -> Self {
        Report {
            command: command.into(),
            input: input.into(),
            mode: None,
            checks: Vec::new(),
            invariants: None,
            reducible: None,
            ramification: None,
            fingerprint: None,
            notes: Vec::new(),
            details: serde_json::Value::Null,
        }
    }

    pub fn check(&mut self, name: &str, passed: bool, residual: f64) {
        self.checks.push(Check { name: name.into(), passed, residual: (!passed).then_some(residual) });
    }

    pub fn passed(&self, name: &str) -> bool {
        self.checks.iter().any(|c| c.name == name && c.passed)
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Frobenius distance of a surface from `c0 * diag C(m, k)`.
fn binomial_distance<S: Scalar>(h: &HermitianSurface<S>, c0: Complex64, m: usize) -> f64 {
    let mut sq = 0.0;
    for (j, row) in h.rows().iter().enumerate() {
        for (k, x) in row.iter().enumerate() {
            let target = if j == k && j <= m { c0 * Rat::binomial(m as u64, j as u64).to_f64() } else { Complex64::new(0.0, 0.0) };
            sq += (x.to_c64() - target).norm_sqr();
        }
    }
    sq.sqrt()
}

/// Runs the full check pipeline: Plücker identity, second-wedge identity, `UU*`/`QQ*` constraints,
/// reducibility, ramification and fingerprint.
pub fn analyze<S: Tagged>(report: &mut Report, curve: &CurveForm<S>) {
    report.mode = Some(if S::EXACT { Mode::Exact } else { Mode::Float });
    let (plucker, _) = curve.plucker_surface();
    let degree = curve.curvature_degree();
    let d = degree.unwrap_or_else(|| curve.plucker_degree());
    report.check("plucker_binomial", degree.is_some(), binomial_distance(&plucker, Complex64::new(1.0, 0.0), d));

    let reducible = curve.is_reducible();
    report.reducible = Some(reducible);
    let second = curve.second_surface();
    let top = (2 * d).saturating_sub(4);
    let inv = curve.invariant_chain();
    let second_ok = inv.is_ok() && degree.is_some();
    report.check("second_form_constant", second_ok, binomial_distance(&second, second.get(0, 0).to_c64(), top));
    if !second_ok && degree.is_some() {
        report.notes.push("second form not constant".into());
    }

    let c = match &inv {
        Ok(i) => i.c.clone(),
        Err(_) => second.get(0, 0).clone(),
    };
    let cm = assemble_constraints(curve, Some(d), Some(c));
    let cc = check_constraints(&cm);
    report.check("constraints_u", cc.u_ok, cc.u_residual);
    report.check("constraints_q", cc.q_ok, cc.q_residual);

    if let Ok(i) = &inv {
        let defect = i.gauss_defect();
        report.check("gauss_closure", defect.approx_eq(&S::zero(), 1e-9), defect.to_c64().norm());
        report.invariants = Some(Invariants { d: i.d, c: i.c.tag(), k: i.k.tag(), s: i.s.tag(), det_a1_sq: i.det_a1_sq.tag() });
    }

    if reducible {
        report.notes.push("reducible: second wedge vanishes identically, ramification undefined".into());
    } else {
        match curve.ramification() {
            Ok(r) => report.ramification = Some(r),
            Err(e) => report.notes.push(format!("ramification unavailable: {e}")),
        }
    }

    let (cf, sf) = match &inv {
        Ok(i) => (i.c.to_c64().re, i.s.to_c64().re),
        Err(_) => (f64::NAN, f64::NAN),
    };
    let float = curve.map(|x| x.to_c64());
    report.fingerprint = Some(Fingerprint::of(&float, float.m(), cf, sf));
}
