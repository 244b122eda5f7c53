//! The one-parameter family of constantly curved spheres in `G(2, 6)` with constant `S`,
//! its degenerate members, and a constantly curved sphere whose `S` is not constant.

use serde::Serialize;

use crate::curve::{normalize_span, CurveForm, CurveInvariants, SignedPermutation};
use crate::scalars::{Complex64, RadicalComplex, RadicalScalar, Rat, Ring, Scalar};
use crate::veronese::direct_sum;

type E = RadicalComplex;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FamilyError {
    #[error("family parameter t = {0} must satisfy 0 < t <= 3")]
    OutOfRange(String),
    #[error("no signed column permutation matches the direct sum")]
    NoPermutation,
}

/// A rational family parameter `t` in `(0, 3]`; `sin^2 theta = t / 3`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyParam(Rat);

impl FamilyParam {
    pub fn new(t: Rat) -> Result<Self, FamilyError> {
        if !t.is_positive() || t > Rat::from_int(3) {
            return Err(FamilyError::OutOfRange(t.to_string()));
        }
        Ok(FamilyParam(t))
    }

    pub fn t(&self) -> &Rat {
        &self.0
    }

    pub fn theta(&self) -> f64 {
        (self.0.to_f64() / 3.0).sqrt().asin()
    }

    /// `c = 4t - t^2`.
    pub fn c(&self) -> Rat {
        let t = &self.0;
        Rat::from_int(4) * t.clone() - t.clone() * t.clone()
    }

    /// `S = t^2 - 4t + 6`.
    pub fn s(&self) -> Rat {
        let t = &self.0;
        t.clone() * t.clone() - Rat::from_int(4) * t.clone() + Rat::from_int(6)
    }
}

fn sqrt(q: Rat) -> RadicalScalar {
    RadicalScalar::sqrt_rat(&q).expect("nonnegative by the parameter range")
}

/// Column polynomials `(F_1, F_2)` of the family member at `t`, generic over the scalar type.
fn family_rows<S: Scalar>(
    abs_t2: S,
    sqrt_t: S,
    sqrt_4mt: S,
    sqrt_3mt: S,
    sqrt_ratio_a: S,
    sqrt_ratio_b: S,
) -> (Vec<Vec<S>>, Vec<Vec<S>>) {
    let z = S::zero;
    let f1 = vec![
        vec![z(), z(), z(), abs_t2.clone()],
        vec![z(), sqrt_t],
        vec![z(), z(), sqrt_ratio_a * abs_t2],
        vec![z(), z(), sqrt_ratio_b],
    ];
    let f2 = vec![vec![z(), z(), sqrt_3mt], vec![], vec![z(), sqrt_4mt], vec![]];
    (f1, f2)
}

/// The family member at `t` with `n = 4`:
///
/// `F_1 = (|t-2| z^3, sqrt(t) z, sqrt((3-t)/(4-t)) |t-2| z^2, sqrt(t/(4-t)) z^2)`,
/// `F_2 = (sqrt(3-t) z^2, 0, sqrt(4-t) z, 0)`.
pub fn family_curve(p: &FamilyParam) -> CurveForm<E> {
    let t = p.t().clone();
    let (three, four) = (Rat::from_int(3), Rat::from_int(4));
    let abs_t2 = (t.clone() - Rat::from_int(2)).abs();
    let q = |x: Rat| E::real(sqrt(x));
    let (f1, f2) = family_rows(
        E::from_rat(abs_t2),
        q(t.clone()),
        q(four.clone() - t.clone()),
        q(three.clone() - t.clone()),
        q((three - t.clone()) * (four.clone() - t.clone()).recip().expect("t < 4")),
        q(t.clone() * (four - t).recip().expect("t < 4")),
    );
    CurveForm::from_rows(&f1, &f2).expect("valid layout")
}

/// Float version of [`family_curve`] for real `t` in `(0, 3]`.
pub fn family_curve_float(t: f64) -> CurveForm<Complex64> {
    let c = |x: f64| Complex64::new(x, 0.0);
    let (f1, f2) = family_rows(
        c((t - 2.0).abs()),
        c(t.sqrt()),
        c((4.0 - t).sqrt()),
        c((3.0 - t).max(0.0).sqrt()),
        c(((3.0 - t) / (4.0 - t)).max(0.0).sqrt()),
        c((t / (4.0 - t)).sqrt()),
    );
    CurveForm::from_rows(&f1, &f2).expect("valid layout")
}

/// Closed-form invariants: `d = 4`, `c = 4t - t^2`, `K = 1`, `S = t^2 - 4t + 6`.
pub fn family_invariants(p: &FamilyParam) -> CurveInvariants<E> {
    CurveInvariants::new(4, E::from_rat(p.c()))
}

/// The curve with `F_1 = (z/sqrt 2, sqrt 31/(2 sqrt 7) z^2, 9/(2 sqrt 7) z^2, 0)` and
/// `F_2 = (0, 0, sqrt 7/sqrt 2 z, z^2/2)`: constantly curved of degree 4 with nonconstant `|det A_1|^2`.
pub fn nonconstant_det_curve() -> CurveForm<E> {
    let r = |s: &str| E::real(s.parse().expect("valid radical"));
    let z = E::zero;
    let f1 = vec![vec![z(), r("1/2*sqrt(2)")], vec![z(), z(), r("1/14*sqrt(217)")], vec![z(), z(), r("9/14*sqrt(7)")], vec![]];
    let f2 = vec![vec![], vec![], vec![z(), r("1/2*sqrt(14)")], vec![z(), z(), r("1/2")]];
    CurveForm::from_rows(&f1, &f2).expect("valid layout")
}

/// Coefficients of `112 + 1024u + 1176u^2 + 376u^3 + 31u^4`; the second-wedge norm of
/// [`nonconstant_det_curve`] is this polynomial in `u = z zbar` divided by 64.
pub const NONCONSTANT_DET_NUMERATOR: [i64; 5] = [112, 1024, 1176, 376, 31];

/// Whether the second-wedge surface of [`nonconstant_det_curve`] equals `NONCONSTANT_DET_NUMERATOR(u) / 64` exactly,
/// i.e. `|det A_1|^2 = N(u) / (1024 (1 + u)^4)` once divided by `d^2 (1 + u)^(2d - 4)`.
pub fn nonconstant_det_profile_check() -> bool {
    let h = nonconstant_det_curve().second_surface();
    let target: Vec<E> = NONCONSTANT_DET_NUMERATOR.iter().map(|&x| E::from_rat(Rat::new(x, 64))).collect();
    h.size() == target.len() && h.is_diagonal(0.0) && h.radial_profile() == target
}

/// A degenerate family member identified with a direct sum of Veronese curves.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Identification {
    pub t: String,
    /// Degrees `(a, b)` of `V_0^(a) + V_0^(b)`.
    pub summands: (usize, usize),
    pub permutation: SignedPermutation,
    /// Whether applying the permutation reproduces the normalized direct sum exactly.
    pub verified: bool,
}

/// At `t = 2` and `t = 3`, finds the signed column permutation (with optional row swap)
/// carrying the family member onto the normal form of `V_0^(2) + V_0^(2)` resp. `V_0^(1) + V_0^(3)`.
pub fn degenerate_identification(t: &Rat) -> Result<Identification, FamilyError> {
    let summands = if *t == Rat::from_int(2) {
        (2, 2)
    } else if *t == Rat::from_int(3) {
        (1, 3)
    } else {
        return Err(FamilyError::NoPermutation);
    };
    let curve = family_curve(&FamilyParam::new(t.clone())?);
    let (v1, v2) = direct_sum::<E>(summands.0, summands.1);
    let target = normalize_span(&v1, &v2).map_err(|_| FamilyError::NoPermutation)?;
    let permutation = SignedPermutation::find(&curve, &target).ok_or(FamilyError::NoPermutation)?;
    let verified = permutation.apply(&curve).trimmed() == target.trimmed();
    Ok(Identification { t: t.to_string(), summands, permutation, verified })
}
