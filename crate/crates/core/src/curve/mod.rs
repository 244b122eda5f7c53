//! Holomorphic curves `[I_2, F(z)]` in `G(2, n+2)` with `F = sum_{alpha >= 1} A_alpha z^alpha`.

mod constraints;
mod io;
mod normalize;

use serde::Serialize;

pub use constraints::{assemble_constraints, check_constraints, CoefficientBlocks, ConstraintCheck, ConstraintMatrices};
pub use io::{AnyCurve, CurveFileError, Mode};
pub use normalize::normalize_span;

use crate::exterior::KVector;
use crate::polysurface::{common_roots, BinomialMatch, HermitianSurface, PolyKVector, RootError, RootReport};
use crate::scalars::{Complex64, Rat, Ring, Scalar, ScalarError};

/// Coefficients with norm at most this are treated as zero by float reducibility tests.
pub const REDUCIBLE_ABS_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CurveError {
    #[error("coefficient matrices must have 2 rows of length {expected}, found {found}")]
    Shape { expected: usize, found: usize },
    #[error("curve needs n >= 1 and at least one coefficient matrix")]
    Empty,
    #[error("F(0) must vanish")]
    NonzeroConstantTerm,
    #[error("curve is constant")]
    Constant,
    #[error("not constantly curved")]
    NotConstantlyCurved,
    #[error("second form not constant")]
    SecondFormNotConstant,
    #[error("curve is reducible")]
    Reducible,
    #[error("dependent frame at origin")]
    DependentFrame,
    #[error("nonconstant pivot minor")]
    NonconstantPivot,
    #[error("frame vectors must live in the same C^N with N >= 3")]
    FrameShape,
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error(transparent)]
    Roots(#[from] RootError),
}

/// `A_alpha` for `alpha = 1..=m`, each a pair of rows of length `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveForm<S> {
    n: usize,
    coeffs: Vec<[Vec<S>; 2]>,
}

impl<S: Scalar> CurveForm<S> {
    /// `coeffs[alpha - 1] = A_alpha`.
    pub fn new(n: usize, coeffs: Vec<[Vec<S>; 2]>) -> Result<Self, CurveError> {
        if n == 0 || coeffs.is_empty() {
            return Err(CurveError::Empty);
        }
        for a in &coeffs {
            for row in a {
                if row.len() != n {
                    return Err(CurveError::Shape { expected: n, found: row.len() });
                }
            }
        }
        Ok(CurveForm { n, coeffs })
    }

    pub fn zero(n: usize) -> Self {
        CurveForm { n, coeffs: vec![[vec![S::zero(); n], vec![S::zero(); n]]] }
    }

    /// Builds a curve from the column polynomials of `F_1` and `F_2` (lowest power first).
    pub fn from_rows(f1: &[Vec<S>], f2: &[Vec<S>]) -> Result<Self, CurveError> {
        let n = f1.len();
        if f2.len() != n {
            return Err(CurveError::Shape { expected: n, found: f2.len() });
        }
        let m = f1.iter().chain(f2).map(Vec::len).max().unwrap_or(0).saturating_sub(1).max(1);
        let at = |p: &Vec<S>, j: usize| p.get(j).cloned().unwrap_or_else(S::zero);
        if f1.iter().chain(f2).any(|p| !at(p, 0).is_zero()) {
            return Err(CurveError::NonzeroConstantTerm);
        }
        let coeffs = (1..=m).map(|a| [f1.iter().map(|p| at(p, a)).collect(), f2.iter().map(|p| at(p, a)).collect()]).collect();
        CurveForm::new(n, coeffs)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of stored coefficient matrices.
    pub fn m(&self) -> usize {
        self.coeffs.len()
    }

    /// `A_alpha`, zero beyond the stored range.
    pub fn a(&self, alpha: usize) -> [Vec<S>; 2] {
        assert!(alpha >= 1, "coefficient indices start at 1");
        self.coeffs.get(alpha - 1).cloned().unwrap_or_else(|| [vec![S::zero(); self.n], vec![S::zero(); self.n]])
    }

    pub fn coeffs(&self) -> &[[Vec<S>; 2]] {
        &self.coeffs
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> CurveForm<T> {
        CurveForm {
            n: self.n,
            coeffs: self.coeffs.iter().map(|[r1, r2]| [r1.iter().map(&f).collect(), r2.iter().map(&f).collect()]).collect(),
        }
    }

    pub fn to_float(&self) -> CurveForm<Complex64> {
        self.map(Scalar::to_c64)
    }

    /// `F_i` as a `C^n`-valued polynomial.
    pub fn row_poly(&self, i: usize) -> PolyKVector<S> {
        let comps: Vec<Vec<S>> = (0..self.n)
            .map(|col| std::iter::once(S::zero()).chain(self.coeffs.iter().map(|a| a[i][col].clone())).collect())
            .collect();
        PolyKVector::from_components(&comps)
    }

    /// `(v1, v2)` with `v_i = e_i + F_i` in `C^{n+2}`.
    pub fn frames(&self) -> (PolyKVector<S>, PolyKVector<S>) {
        let dim = self.n + 2;
        let frame = |i: usize| {
            let e = PolyKVector::constant(KVector::unit(dim, i));
            e.add(&self.row_poly(i).embed(dim, 2)).expect("same shape")
        };
        (frame(0), frame(1))
    }

    /// `v1 ^ v2`.
    pub fn plucker(&self) -> PolyKVector<S> {
        let (v1, v2) = self.frames();
        v1.wedge(&v2).expect("same dimension")
    }

    /// `|v1 ^ v2|^2` and its binomial match, if any.
    pub fn plucker_surface(&self) -> (HermitianSurface<S>, Option<BinomialMatch<S>>) {
        let h = HermitianSurface::of(&self.plucker());
        let m = h.match_binomial();
        (h, m)
    }

    /// `v1 ^ v2 ^ dv1 ^ dv2`.
    pub fn second_wedge(&self) -> PolyKVector<S> {
        let (v1, v2) = self.frames();
        let (d1, d2) = (v1.derivative(), v2.derivative());
        v1.wedge(&v2).and_then(|w| w.wedge(&d1)).and_then(|w| w.wedge(&d2)).expect("same dimension")
    }

    pub fn second_surface(&self) -> HermitianSurface<S> {
        HermitianSurface::of(&self.second_wedge())
    }

    /// Whether the Plücker surface is `(1 + z zbar)^d`; returns `d`.
    pub fn curvature_degree(&self) -> Option<usize> {
        let (h, m) = self.plucker_surface();
        let m = m?;
        m.c0.approx_eq(&S::one(), h.tolerance()).then_some(m.m)
    }

    pub fn is_reducible(&self) -> bool {
        let w = self.second_wedge();
        if S::EXACT {
            w.is_zero()
        } else {
            w.max_coeff_norm() <= REDUCIBLE_ABS_TOL
        }
    }

    /// `(d, c, K, S, |det A_1|^2)` from the two verified identities.
    pub fn invariant_chain(&self) -> Result<CurveInvariants<S>, CurveError> {
        let d = self.curvature_degree().ok_or(CurveError::NotConstantlyCurved)?;
        if d == 0 {
            return Err(CurveError::Constant);
        }
        if self.is_reducible() {
            return Ok(CurveInvariants::new(d, S::zero()));
        }
        let m = self.second_surface().match_binomial().ok_or(CurveError::SecondFormNotConstant)?;
        if d < 2 || m.m != 2 * d - 4 {
            return Err(CurveError::SecondFormNotConstant);
        }
        Ok(CurveInvariants::new(d, m.c0))
    }

    /// Trimmed polynomial degree of `v1 ^ v2`.
    pub fn plucker_degree(&self) -> usize {
        HermitianSurface::of(&self.plucker()).effective_size() - 1
    }

    /// Zeros of the second wedge, with infinity at multiplicity `2d - 4 - deg w`.
    pub fn ramification(&self) -> Result<RootReport, CurveError> {
        if self.is_reducible() {
            return Err(CurveError::Reducible);
        }
        let d = self.invariant_chain().map(|inv| inv.d).unwrap_or_else(|_| self.plucker_degree());
        let w = self.second_wedge();
        Ok(common_roots(&w, (2 * d).checked_sub(4))?)
    }

    /// Swaps `F_1` and `F_2`.
    pub fn swap_rows(&self) -> Self {
        CurveForm { n: self.n, coeffs: self.coeffs.iter().map(|[a, b]| [b.clone(), a.clone()]).collect() }
    }

    /// Drops trailing zero coefficient matrices (keeping at least one).
    pub fn trimmed(&self) -> Self {
        let mut coeffs = self.coeffs.clone();
        while coeffs.len() > 1 && coeffs.last().is_some_and(|[a, b]| a.iter().chain(b).all(Ring::is_zero)) {
            coeffs.pop();
        }
        CurveForm { n: self.n, coeffs }
    }
}

/// `(d, c, K = 4/d, |det A_1|^2 = c/d^2, S = 8 - 16c/d^2 - 8/d)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveInvariants<S> {
    pub d: usize,
    pub c: S,
    pub k: S,
    pub det_a1_sq: S,
    pub s: S,
}

impl<S: Scalar> CurveInvariants<S> {
    pub fn new(d: usize, c: S) -> Self {
        assert!(d >= 1, "degree is positive");
        let di = d as i64;
        let k = S::from_rat(&Rat::new(4, di));
        let det_a1_sq = c.clone() * S::from_rat(&Rat::new(1, di * di));
        let s = S::from_i64(8) - det_a1_sq.scale_int(16) - S::from_rat(&Rat::new(8, di));
        CurveInvariants { d, c, k, det_a1_sq, s }
    }

    /// `K + 8|det A_1|^2 + S/2 - 4`; zero by construction, exactly in exact mode.
    pub fn gauss_defect(&self) -> S {
        self.k.clone() + self.det_a1_sq.scale_int(8) + self.s.clone() * S::from_rat(&Rat::new(1, 2)) - S::from_i64(4)
    }
}

/// Reorders and signs the `F` columns, optionally swapping `F_1` and `F_2`.
///
/// Column `i` of the result is `signs[i]` times column `perm[i]` of the input.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SignedPermutation {
    pub perm: Vec<usize>,
    pub signs: Vec<i8>,
    pub swap_rows: bool,
}

impl SignedPermutation {
    pub fn identity(n: usize) -> Self {
        SignedPermutation { perm: (0..n).collect(), signs: vec![1; n], swap_rows: false }
    }

    pub fn apply<S: Scalar>(&self, curve: &CurveForm<S>) -> CurveForm<S> {
        assert_eq!(self.perm.len(), curve.n(), "permutation size");
        let base = if self.swap_rows { curve.swap_rows() } else { curve.clone() };
        let coeffs = base
            .coeffs
            .iter()
            .map(|rows| rows.clone().map(|row| (0..row.len()).map(|i| row[self.perm[i]].scale_int(self.signs[i] as i64)).collect()))
            .collect();
        CurveForm { n: curve.n(), coeffs }
    }

    /// Every signed column permutation, with and without a row swap.
    pub fn all(n: usize) -> Vec<SignedPermutation> {
        let mut perms = vec![vec![]];
        for k in 0..n {
            perms = perms
                .into_iter()
                .flat_map(|p: Vec<usize>| (0..=k).map(move |pos| {
                    let mut q = p.clone();
                    q.insert(pos, k);
                    q
                }))
                .collect();
        }
        let mut out = Vec::new();
        for swap_rows in [false, true] {
            for p in &perms {
                for mask in 0..(1u32 << n) {
                    let signs = (0..n).map(|i| if mask >> i & 1 == 1 { -1 } else { 1 }).collect();
                    out.push(SignedPermutation { perm: p.clone(), signs, swap_rows });
                }
            }
        }
        out
    }

    /// The first signed permutation carrying `from` exactly onto `to`, after trimming both.
    pub fn find<S: Scalar>(from: &CurveForm<S>, to: &CurveForm<S>) -> Option<SignedPermutation> {
        if from.n() != to.n() {
            return None;
        }
        let target = to.trimmed();
        Self::all(from.n()).into_iter().find(|p| p.apply(from).trimmed() == target)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{RadicalComplex, RadicalScalar};
    use crate::polysurface::RootLocation;

    type E = RadicalComplex;

    fn r(s: &str) -> E {
        E::real(s.parse::<RadicalScalar>().unwrap())
    }

    fn poly(v: &[&str]) -> Vec<E> {
        v.iter().map(|s| r(s)).collect()
    }

    #[test]
    fn frames_of_simple_curves() {
        let (v1, v2) = CurveForm::<E>::zero(3).frames();
        assert_eq!(v1, PolyKVector::constant(KVector::unit(5, 0)));
        assert_eq!(v2, PolyKVector::constant(KVector::unit(5, 1)));

        let c = CurveForm::from_rows(&[poly(&["0", "1"]), vec![]], &[vec![], vec![]]).unwrap();
        let (v1, v2) = c.frames();
        let expected = PolyKVector::constant(KVector::unit(4, 0)).add(&PolyKVector::monomial(KVector::unit(4, 2), 1)).unwrap();
        assert_eq!(v1, expected);
        assert_eq!(v2, PolyKVector::constant(KVector::unit(4, 1)));
    }

    #[test]
    fn rank_one_first_block_is_not_binomial() {
        let c = CurveForm::from_rows(&[poly(&["0", "1"]), vec![]], &[vec![], vec![]]).unwrap();
        assert!(c.plucker_surface().1.is_some_and(|m| m.m == 1));
        let c = CurveForm::from_rows(&[poly(&["0", "1"]), poly(&["0", "0", "1"])], &[vec![], vec![]]).unwrap();
        assert!(c.plucker_surface().1.is_none());
        assert_eq!(c.invariant_chain(), Err(CurveError::NotConstantlyCurved));
    }

    #[test]
    fn constant_term_is_rejected() {
        assert_eq!(CurveForm::from_rows(&[poly(&["1"])], &[vec![]]), Err(CurveError::NonzeroConstantTerm));
    }

    #[test]
    fn vanishing_second_row_is_reducible() {
        let c = CurveForm::from_rows(&[poly(&["0", "sqrt(2)"]), poly(&["0", "0", "1"])], &[vec![], vec![]]).unwrap();
        assert!(c.is_reducible());
        let inv = c.invariant_chain().unwrap();
        assert_eq!(inv.d, 2);
        assert_eq!(inv.c, E::zero());
        assert_eq!(inv.s, E::from_i64(4));
        assert!(inv.gauss_defect().is_zero());
        assert_eq!(c.ramification(), Err(CurveError::Reducible));
    }

    #[test]
    fn planted_ramification_at_origin() {
        // F1 = (z, z^2), F2 = (z^2, 0): the second wedge is -4 z^2 e_0123.
        let c = CurveForm::from_rows(&[poly(&["0", "1"]), poly(&["0", "0", "1"])], &[poly(&["0", "0", "1"]), vec![]]).unwrap();
        let w = c.second_wedge();
        assert_eq!(w.poly_degree(), 2);
        assert_eq!(w.coeff(2).unwrap().coeffs(), &[E::from_i64(-4)]);
        let report = c.ramification().unwrap();
        assert_eq!(report.roots.len(), 2);
        assert_eq!(report.roots[0].value().unwrap().norm(), 0.0);
        assert_eq!(report.roots[0].multiplicity, 2);
        assert_eq!(report.roots[1].location, RootLocation::Infinity);
        assert_eq!(report.roots[1].multiplicity, 2);

        let float = c.to_float().ramification().unwrap();
        assert_eq!(float.roots[0].multiplicity, 2);
        assert!(float.roots[0].value().unwrap().norm() < 1e-6);
    }

    #[test]
    fn signed_permutations() {
        assert_eq!(SignedPermutation::all(3).len(), 2 * 6 * 8);
        let c = CurveForm::from_rows(&[poly(&["0", "1"]), poly(&["0", "0", "2"])], &[poly(&["0", "3"]), vec![]]).unwrap();
        let p = SignedPermutation { perm: vec![1, 0], signs: vec![-1, 1], swap_rows: true };
        let moved = p.apply(&c);
        assert_eq!(moved.a(1), [vec![E::zero(), r("3")], vec![E::zero(), r("1")]]);
        assert_eq!(moved.a(2), [vec![E::zero(), E::zero()], vec![r("-2"), E::zero()]]);
        let found = SignedPermutation::find(&c, &moved).unwrap();
        assert_eq!(found.apply(&c), moved);
        assert_eq!(moved.invariant_chain().is_ok(), c.invariant_chain().is_ok());
    }
}
