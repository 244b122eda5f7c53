use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_integer::Integer;
use num_traits::ToPrimitive;

use super::{Rat, ScalarError};

/// Trial division bound for radicand factoring.
pub const TRIAL_DIVISION_LIMIT: u64 = 1_000_000;

/// Maximum number of distinct prime atoms accepted by [`RadicalScalar::inverse`].
pub const MAX_INVERSE_ATOMS: usize = 8;

/// An element `sum_d q_d * sqrt(d)` of the field generated over the rationals by
/// square roots of square-free positive integers.
///
/// Keys are square-free; zero coefficients are never stored, so the empty map is zero
/// and structural equality is numerical equality.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct RadicalScalar {
    terms: BTreeMap<u64, Rat>,
}

/// Splits `n` as `s^2 * r` with `r` square-free.
pub fn split_square(n: u64) -> Result<(u64, u64), ScalarError> {
    if n == 0 {
        return Ok((0, 1));
    }
    let mut m = n;
    let mut square = 1u64;
    let mut free = 1u64;
    let mut p = 2u64;
    while p.saturating_mul(p) <= m {
        if p > TRIAL_DIVISION_LIMIT {
            return Err(ScalarError::FactorLimit(n));
        }
        let mut e = 0;
        while m % p == 0 {
            m /= p;
            e += 1;
        }
        square *= p.pow(e / 2);
        if e % 2 == 1 {
            free *= p;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if m > 1 {
        free *= m;
    }
    Ok((square, free))
}

fn prime_factors(n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut m = n;
    let mut p = 2u64;
    while p * p <= m {
        if m % p == 0 {
            out.push(p);
            while m % p == 0 {
                m /= p;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if m > 1 {
        out.push(m);
    }
    out
}

impl RadicalScalar {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_rat(Rat::one())
    }

    pub fn from_rat(q: Rat) -> Self {
        let mut out = Self::zero();
        out.push_term(1, q);
        out
    }

    pub fn from_int(v: i64) -> Self {
        Self::from_rat(Rat::from_int(v))
    }

    /// `coeff * sqrt(radicand)` for arbitrary positive `radicand` (not necessarily square-free).
    pub fn term(coeff: Rat, radicand: u64) -> Result<Self, ScalarError> {
        let (s, r) = split_square(radicand)?;
        let mut out = Self::zero();
        out.push_term(r, coeff * Rat::from_int(s as i64));
        Ok(out)
    }

    /// Exact square root of a non-negative rational: `sqrt(a/b) = sqrt(ab)/b`.
    pub fn sqrt_rat(q: &Rat) -> Result<Self, ScalarError> {
        if q.is_negative() {
            return Err(ScalarError::NegativeRadicand(q.to_string()));
        }
        if q.is_zero() {
            return Ok(Self::zero());
        }
        let ab = q.numer() * q.denom();
        let ab = ab.to_u64().ok_or_else(|| ScalarError::RadicandTooLarge(ab.to_string()))?;
        let (s, r) = split_square(ab)?;
        let coeff = Rat::from_big(s.into(), q.denom().clone())?;
        let mut out = Self::zero();
        out.push_term(r, coeff);
        Ok(out)
    }

    fn push_term(&mut self, key: u64, q: Rat) {
        if q.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(key) {
            Entry::Vacant(v) => {
                v.insert(q);
            }
            Entry::Occupied(mut o) => {
                let sum = &*o.get() + &q;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (u64, &Rat)> {
        self.terms.iter().map(|(k, q)| (*k, q))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// The rational value, if there are no irrational terms.
    pub fn as_rat(&self) -> Option<Rat> {
        match self.terms.len() {
            0 => Some(Rat::zero()),
            1 => self.terms.get(&1).cloned(),
            _ => None,
        }
    }

    pub fn scale(&self, q: &Rat) -> Self {
        if q.is_zero() {
            return Self::zero();
        }
        RadicalScalar { terms: self.terms.iter().map(|(k, c)| (*k, c * q)).collect() }
    }

    pub fn to_f64(&self) -> f64 {
        self.terms.iter().map(|(k, q)| q.to_f64() * (*k as f64).sqrt()).sum()
    }

    /// Distinct primes dividing any radicand.
    pub fn atoms(&self) -> Vec<u64> {
        let mut atoms: Vec<u64> = self.terms.keys().flat_map(|&k| prime_factors(k)).collect();
        atoms.sort_unstable();
        atoms.dedup();
        atoms
    }

    /// Galois conjugate flipping the sign of `sqrt(p)`.
    fn flip(&self, p: u64) -> Self {
        RadicalScalar {
            terms: self
                .terms
                .iter()
                .map(|(k, q)| (*k, if k % p == 0 { -q.clone() } else { q.clone() }))
                .collect(),
        }
    }

    /// Multiplicative inverse by successive conjugation over each prime atom.
    pub fn inverse(&self) -> Result<Self, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::ZeroInverse);
        }
        let atoms = self.atoms();
        if atoms.len() > MAX_INVERSE_ATOMS {
            return Err(ScalarError::TooManyAtoms(atoms.len()));
        }
        let mut numer = Self::one();
        let mut cur = self.clone();
        for p in atoms {
            let conj = cur.flip(p);
            numer = numer * conj.clone();
            cur = cur * conj;
        }
        let denom = cur.as_rat().expect("conjugate product is rational");
        Ok(numer.scale(&denom.recip()?))
    }

    pub fn canonicalized(&self) -> Self {
        let mut out = Self::zero();
        for (k, q) in &self.terms {
            out = out + Self::term(q.clone(), *k).expect("stored radicands are square-free");
        }
        out
    }
}

impl Add for RadicalScalar {
    type Output = RadicalScalar;
    fn add(mut self, rhs: RadicalScalar) -> RadicalScalar {
        for (k, q) in rhs.terms {
            self.push_term(k, q);
        }
        self
    }
}

impl Sub for RadicalScalar {
    type Output = RadicalScalar;
    fn sub(self, rhs: RadicalScalar) -> RadicalScalar {
        self + (-rhs)
    }
}

impl Neg for RadicalScalar {
    type Output = RadicalScalar;
    fn neg(self) -> RadicalScalar {
        RadicalScalar { terms: self.terms.into_iter().map(|(k, q)| (k, -q)).collect() }
    }
}

impl Mul for RadicalScalar {
    type Output = RadicalScalar;
    fn mul(self, rhs: RadicalScalar) -> RadicalScalar {
        &self * &rhs
    }
}

impl<'a> Mul<&'a RadicalScalar> for &'a RadicalScalar {
    type Output = RadicalScalar;
    fn mul(self, rhs: &'a RadicalScalar) -> RadicalScalar {
        let mut out = RadicalScalar::zero();
        for (k1, q1) in &self.terms {
            for (k2, q2) in &rhs.terms {
                // sqrt(k1) sqrt(k2) = g sqrt((k1/g)(k2/g)); the cofactors are coprime and square-free.
                let g = k1.gcd(k2);
                let key = (k1 / g).checked_mul(k2 / g).expect("radicand overflow");
                out.push_term(key, q1 * q2 * Rat::from_int(g as i64));
            }
        }
        out
    }
}

impl fmt::Display for RadicalScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (k, q)) in self.terms.iter().enumerate() {
            let neg = q.is_negative();
            let mag = q.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { "-" } else { "+" })?;
            }
            if *k == 1 {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "sqrt({k})")?;
            } else {
                write!(f, "{mag}*sqrt({k})")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for RadicalScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for RadicalScalar {
    type Err = ScalarError;

    /// Accepts sums of terms `q`, `q*sqrt(k)`, `sqrt(k)` joined by `+`/`-` (ASCII or U+2212).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let cleaned: String = s.replace('\u{2212}', "-").chars().filter(|c| !c.is_whitespace()).collect();
        if cleaned.is_empty() {
            return Err(ScalarError::Parse("empty scalar".into()));
        }
        let mut terms: Vec<(bool, String)> = Vec::new();
        let mut cur = String::new();
        let mut sign_neg = false;
        let mut depth = 0i32;
        for (i, ch) in cleaned.chars().enumerate() {
            match ch {
                '(' => {
                    depth += 1;
                    cur.push(ch);
                }
                ')' => {
                    depth -= 1;
                    cur.push(ch);
                }
                '+' | '-' if depth == 0 => {
                    if i == 0 && cur.is_empty() {
                        sign_neg = ch == '-';
                        continue;
                    }
                    if cur.is_empty() {
                        return Err(ScalarError::Parse(format!("dangling sign in {s:?}")));
                    }
                    terms.push((sign_neg, std::mem::take(&mut cur)));
                    sign_neg = ch == '-';
                }
                _ => cur.push(ch),
            }
        }
        if cur.is_empty() {
            return Err(ScalarError::Parse(format!("dangling sign in {s:?}")));
        }
        terms.push((sign_neg, cur));

        let mut out = RadicalScalar::zero();
        for (neg, body) in terms {
            let mut t = parse_term(&body)?;
            if neg {
                t = -t;
            }
            out = out + t;
        }
        Ok(out)
    }
}

fn parse_term(body: &str) -> Result<RadicalScalar, ScalarError> {
    let bad = || ScalarError::Parse(format!("invalid term {body:?}"));
    let (coeff, rad) = if let Some(rest) = body.strip_prefix("sqrt(") {
        (Rat::one(), Some(rest))
    } else if let Some((c, rest)) = body.split_once("*sqrt(") {
        (c.parse::<Rat>()?, Some(rest))
    } else {
        (body.parse::<Rat>()?, None)
    };
    match rad {
        None => Ok(RadicalScalar::from_rat(coeff)),
        Some(rest) => {
            let inner = rest.strip_suffix(')').ok_or_else(bad)?;
            let k: u64 = inner.parse().map_err(|_| bad())?;
            if k == 0 {
                return Ok(RadicalScalar::zero());
            }
            RadicalScalar::term(coeff, k)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> RadicalScalar {
        s.parse().unwrap()
    }

    #[test]
    fn products_reduce_by_gcd() {
        assert_eq!(r("sqrt(2)") * r("sqrt(2)"), r("2"));
        assert_eq!(r("sqrt(2)") * r("sqrt(3)"), r("sqrt(6)"));
        // (2 sqrt 15)^2 = 60 = 6 * 10
        assert_eq!(r("sqrt(6)") * r("sqrt(10)"), r("2*sqrt(15)"));
        let lhs = r("2*sqrt(15)");
        assert_eq!(lhs.clone() * lhs, r("60"));
    }

    #[test]
    fn sqrt_of_rationals() {
        assert_eq!(RadicalScalar::sqrt_rat(&Rat::from_int(4)).unwrap(), r("2"));
        assert_eq!(RadicalScalar::sqrt_rat(&Rat::new(1, 2)).unwrap(), r("1/2*sqrt(2)"));
        assert_eq!(RadicalScalar::sqrt_rat(&Rat::new(3, 4)).unwrap(), r("1/2*sqrt(3)"));
        assert!(matches!(
            RadicalScalar::sqrt_rat(&Rat::new(-1, 3)),
            Err(ScalarError::NegativeRadicand(_))
        ));
    }

    #[test]
    fn inverses() {
        assert_eq!(r("2").inverse().unwrap(), r("1/2"));
        assert_eq!(r("sqrt(2)").inverse().unwrap(), r("1/2*sqrt(2)"));
        assert_eq!(r("1+sqrt(2)").inverse().unwrap(), r("-1+sqrt(2)"));
        let a = r("1-sqrt(2)+sqrt(3)+1/5*sqrt(30)");
        assert_eq!(a.inverse().unwrap() * a, r("1"));
        assert!(matches!(r("0").inverse(), Err(ScalarError::ZeroInverse)));
    }

    #[test]
    fn too_many_atoms_rejected() {
        let primes = [2u64, 3, 5, 7, 11, 13, 17, 19, 23];
        let mut a = RadicalScalar::one();
        for p in primes {
            a = a + RadicalScalar::term(Rat::one(), p).unwrap();
        }
        assert!(matches!(a.inverse(), Err(ScalarError::TooManyAtoms(9))));
    }

    #[test]
    fn float_evaluation() {
        assert!((r("sqrt(2)").to_f64() - std::f64::consts::SQRT_2).abs() < 1e-15);
        assert_eq!(r("0").to_f64(), 0.0);
        // 1 - 1.4142135623730951 + 1.7320508075688772
        assert!((r("1-sqrt(2)+sqrt(3)").to_f64() - 1.317_837_245_195_782).abs() < 1e-14);
    }

    #[test]
    fn text_round_trip() {
        for s in ["0", "3/4", "1/2*sqrt(3)", "1-sqrt(2)+sqrt(3)", "-1/3-2/7*sqrt(14)", "-sqrt(31)"] {
            assert_eq!(r(s).to_string(), s);
        }
        assert_eq!(r("sqrt(8)").to_string(), "2*sqrt(2)");
        assert_eq!(r("1 \u{2212} sqrt(2)").to_string(), "1-sqrt(2)");
        assert!("1+".parse::<RadicalScalar>().is_err());
        assert!("sqrt(x)".parse::<RadicalScalar>().is_err());
        assert!("".parse::<RadicalScalar>().is_err());
    }

    #[test]
    fn factoring_limit() {
        assert_eq!(split_square(72).unwrap(), (6, 2));
        assert_eq!(split_square(999_983 * 999_979).unwrap(), (1, 999_983 * 999_979));
        let big_prime_square = 1_000_003u64 * 1_000_003;
        assert!(matches!(split_square(big_prime_square * 2), Err(ScalarError::FactorLimit(_))));
    }
}
