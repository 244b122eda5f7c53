//! Named curves: `jiao`, `family:t`, `veronese-sum-a:n`, `veronese-sum-b:n`.

use holosphere::curve::{normalize_span, AnyCurve, CurveForm};
use holosphere::family::{family_curve, nonconstant_det_curve, FamilyParam};
use holosphere::scalars::{RadicalComplex, Rat};
use holosphere::veronese::{reducible_type_a, reducible_type_b};

type E = RadicalComplex;

/// Degree-label note attached to the reducible constructions.
pub const DEGREE_LABEL_NOTE: &str = "degree-label discrepancy: the published degree labels of the two reducible \
constructions are swapped relative to their computed Plücker degrees; (V_0^(n+1), dV_0^(n+1)) has degree 2n \
and (V_0^(n) + 0, e_(n+1)) has degree n";

pub struct Builtin {
    pub curve: AnyCurve,
    pub notes: Vec<String>,
}

fn reducible(frames: (holosphere::polysurface::PolyKVector<E>, holosphere::polysurface::PolyKVector<E>)) -> Result<CurveForm<E>, String> {
    normalize_span(&frames.0, &frames.1).map_err(|e| e.to_string())
}

fn veronese_n(arg: &str) -> Result<usize, String> {
    match arg.parse::<usize>() {
        Ok(n) if (1..=12).contains(&n) => Ok(n),
        _ => Err(format!("invalid Veronese degree {arg:?}; expected 1..=12")),
    }
}

/// `Ok(None)` when `name` is not a builtin.
pub fn lookup(name: &str) -> Result<Option<Builtin>, String> {
    let (head, arg) = match name.split_once(':') {
        Some((h, a)) => (h, Some(a)),
        None => (name, None),
    };
    let exact = |c: CurveForm<E>, notes: Vec<String>| Ok(Some(Builtin { curve: AnyCurve::Exact(c), notes }));
    match (head, arg) {
        ("jiao", None) => exact(nonconstant_det_curve(), vec![]),
        ("family", Some(t)) => {
            let t: Rat = t.parse().map_err(|e| format!("{e}"))?;
            let p = FamilyParam::new(t).map_err(|e| e.to_string())?;
            exact(family_curve(&p), vec![])
        }
        ("veronese-sum-a", Some(n)) => exact(reducible(reducible_type_a::<E>(veronese_n(n)?))?, vec![DEGREE_LABEL_NOTE.into()]),
        ("veronese-sum-b", Some(n)) => exact(reducible(reducible_type_b::<E>(veronese_n(n)?))?, vec![DEGREE_LABEL_NOTE.into()]),
        _ => Ok(None),
    }
}

/// A builtin name or a curve file path.
pub fn load(source: &str) -> Result<Builtin, String> {
    if let Some(b) = lookup(source)? {
        return Ok(b);
    }
    let text = std::fs::read_to_string(source).map_err(|e| format!("cannot read {source}: {e}"))?;
    let curve = AnyCurve::from_json(&text).map_err(|e| e.to_string())?;
    Ok(Builtin { curve, notes: vec![] })
}
