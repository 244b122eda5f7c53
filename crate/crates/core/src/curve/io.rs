//! The JSON curve file format.
//!
//! ```json
//! {"n": 2, "mode": "exact", "coeffs": [{"alpha": 1, "rows": [[{"re": "1", "im": "0"}, ...], [...]]}]}
//! ```
//!
//! Float scalars are `[re, im]` pairs.

use serde::{Deserialize, Serialize};

use super::{CurveError, CurveForm};
use crate::scalars::{Complex64, RadicalComplex, Scalar, ScalarError};

#[derive(Debug, thiserror::Error)]
pub enum CurveFileError {
    #[error("malformed curve file: {0}")]
    Json(#[from] serde_json::Error),
    #[error("scalar does not match mode {0:?}")]
    ModeMismatch(Mode),
    #[error("invalid exact scalar: {0}")]
    Scalar(#[from] ScalarError),
    #[error("coefficient index {0} is repeated or below 1")]
    Alpha(usize),
    #[error(transparent)]
    Curve(#[from] CurveError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Float,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
enum ScalarRepr {
    Float([f64; 2]),
    Exact {
        re: String,
        #[serde(default = "zero_text")]
        im: String,
    },
}

fn zero_text() -> String {
    "0".into()
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CoeffEntry {
    alpha: usize,
    rows: [Vec<ScalarRepr>; 2],
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CurveFile {
    n: usize,
    mode: Mode,
    coeffs: Vec<CoeffEntry>,
}

/// A curve in either arithmetic mode.
#[derive(Debug, Clone, PartialEq)]
pub enum AnyCurve {
    Exact(CurveForm<RadicalComplex>),
    Float(CurveForm<Complex64>),
}

impl AnyCurve {
    pub fn mode(&self) -> Mode {
        match self {
            AnyCurve::Exact(_) => Mode::Exact,
            AnyCurve::Float(_) => Mode::Float,
        }
    }

    pub fn to_float(&self) -> CurveForm<Complex64> {
        match self {
            AnyCurve::Exact(c) => c.to_float(),
            AnyCurve::Float(c) => c.clone(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self, CurveFileError> {
        let file: CurveFile = serde_json::from_str(text)?;
        match file.mode {
            Mode::Exact => Ok(AnyCurve::Exact(build(&file, |s| match s {
                ScalarRepr::Exact { re, im } => Ok(RadicalComplex::new(re.parse()?, im.parse()?)),
                ScalarRepr::Float(_) => Err(CurveFileError::ModeMismatch(Mode::Exact)),
            })?)),
            Mode::Float => Ok(AnyCurve::Float(build(&file, |s| match s {
                ScalarRepr::Float([re, im]) => Ok(Complex64::new(*re, *im)),
                ScalarRepr::Exact { .. } => Err(CurveFileError::ModeMismatch(Mode::Float)),
            })?)),
        }
    }

    pub fn to_json(&self) -> String {
        let file = match self {
            AnyCurve::Exact(c) => dump(c, Mode::Exact, |x| ScalarRepr::Exact { re: x.re.to_string(), im: x.im.to_string() }),
            AnyCurve::Float(c) => dump(c, Mode::Float, |x| ScalarRepr::Float([x.re, x.im])),
        };
        serde_json::to_string_pretty(&file).expect("serializable")
    }
}

fn build<S: Scalar>(file: &CurveFile, conv: impl Fn(&ScalarRepr) -> Result<S, CurveFileError>) -> Result<CurveForm<S>, CurveFileError> {
    let m = file.coeffs.iter().map(|e| e.alpha).max().unwrap_or(1).max(1);
    let mut coeffs: Vec<Option<[Vec<S>; 2]>> = vec![None; m];
    for entry in &file.coeffs {
        let slot = entry.alpha.checked_sub(1).and_then(|i| coeffs.get_mut(i)).ok_or(CurveFileError::Alpha(entry.alpha))?;
        if slot.is_some() {
            return Err(CurveFileError::Alpha(entry.alpha));
        }
        let [r1, r2] = &entry.rows;
        *slot = Some([r1.iter().map(&conv).collect::<Result<_, _>>()?, r2.iter().map(&conv).collect::<Result<_, _>>()?]);
    }
    let coeffs = coeffs.into_iter().map(|a| a.unwrap_or_else(|| [vec![S::zero(); file.n], vec![S::zero(); file.n]])).collect();
    Ok(CurveForm::new(file.n, coeffs)?)
}

fn dump<S: Scalar>(curve: &CurveForm<S>, mode: Mode, conv: impl Fn(&S) -> ScalarRepr) -> CurveFile {
    CurveFile {
        n: curve.n(),
        mode,
        coeffs: curve
            .coeffs()
            .iter()
            .enumerate()
            .map(|(i, [r1, r2])| CoeffEntry { alpha: i + 1, rows: [r1.iter().map(&conv).collect(), r2.iter().map(&conv).collect()] })
            .collect(),
    }
}
