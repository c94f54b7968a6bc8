//! Exact Laurent polynomials in one variable `t` with half-integer exponents
//! and arbitrary-precision integer coefficients, plus quantum integers,
//! factorials and binomials, and truncated exact-rational power series.
//!
//! Exponents are stored doubled (`half_exp = 2 * exponent`), so every exponent
//! with denominator 1 or 2 is an `i64`. Values are immutable after
//! construction and all arithmetic is exact.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PolyError {
    #[error("division is not exact: {0}")]
    NotDivisible(String),
    #[error("invalid arguments: {0}")]
    InvalidArgs(String),
    #[error("parse error: {0}")]
    Parse(String),
}

/// A Laurent polynomial `sum c_e * t^(e/2)` over the integers.
///
/// The map never stores zero coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LaurentPoly {
    terms: BTreeMap<i64, BigInt>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly::default()
    }

    pub fn one() -> Self {
        LaurentPoly::term(BigInt::one(), 0)
    }

    /// `c * t^(half_exp / 2)`.
    pub fn term(c: impl Into<BigInt>, half_exp: i64) -> Self {
        let c = c.into();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(half_exp, c);
        }
        LaurentPoly { terms }
    }

    /// `t^k` for integer `k`.
    pub fn tpow(k: i64) -> Self {
        Self::term(1, 2 * k)
    }

    /// `t^(h/2)`.
    pub fn tpow_half(h: i64) -> Self {
        Self::term(1, h)
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::term(c, 0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0).map(|c| c.is_one()).unwrap_or(false)
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Iterate (half_exp, coefficient) in ascending exponent order.
    pub fn iter(&self) -> impl Iterator<Item = (&i64, &BigInt)> {
        self.terms.iter()
    }

    pub fn coeff(&self, half_exp: i64) -> BigInt {
        self.terms.get(&half_exp).cloned().unwrap_or_default()
    }

    pub fn min_half_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_half_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    fn insert_add(terms: &mut BTreeMap<i64, BigInt>, e: i64, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        let entry = terms.entry(e).or_insert_with(BigInt::zero);
        *entry += c;
        if entry.is_zero() {
            terms.remove(&e);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (e, c) in &other.terms {
            Self::insert_add(&mut terms, *e, c);
        }
        LaurentPoly { terms }
    }

    pub fn neg(&self) -> Self {
        LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut terms = BTreeMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let prod = c1 * c2;
                Self::insert_add(&mut terms, e1 + e2, &prod);
            }
        }
        LaurentPoly { terms }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        LaurentPoly {
            terms: self.terms.iter().map(|(e, k)| (*e, k * c)).collect(),
        }
    }

    /// Multiply by the monomial `t^(h/2)`.
    pub fn shift(&self, h: i64) -> Self {
        LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (e + h, c.clone())).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Substitute `t -> t^m` for a nonzero integer `m` (e.g. `-1` inverts).
    pub fn subst_power(&self, m: i64) -> Self {
        assert!(m != 0, "substitution power must be nonzero");
        LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (e * m, c.clone())).collect(),
        }
    }

    pub fn eval_at_one(&self) -> BigInt {
        self.terms.values().sum()
    }

    /// Exact division: returns `q` with `self = other * q`, or an error if no
    /// exact quotient exists.
    pub fn exact_divide(&self, other: &Self) -> Result<Self, PolyError> {
        if other.is_zero() {
            return Err(PolyError::InvalidArgs("division by zero".into()));
        }
        let mut rem = self.clone();
        let mut q = BTreeMap::new();
        let (le, lc) = {
            let (e, c) = other.terms.iter().next_back().unwrap();
            (*e, c.clone())
        };
        while !rem.is_zero() {
            let (re, rc) = {
                let (e, c) = rem.terms.iter().next_back().unwrap();
                (*e, c.clone())
            };
            if (&rc % &lc) != BigInt::zero() {
                return Err(PolyError::NotDivisible(format!("{} / {}", self, other)));
            }
            let ce = re - le;
            let cc = &rc / &lc;
            Self::insert_add(&mut q, ce, &cc);
            rem = rem.sub(&other.mul(&Self::term(cc, ce)));
            if let Some(me) = rem.max_half_exp() {
                if me > re {
                    return Err(PolyError::NotDivisible(format!("{} / {}", self, other)));
                }
            }
        }
        Ok(LaurentPoly { terms: q })
    }

    /// If `self = eps * t^(k/2) * other` for `eps` in {+1,-1}, return `(eps, k)`.
    pub fn equal_up_to_unit(&self, other: &Self) -> Option<(i8, i64)> {
        if self.is_zero() || other.is_zero() {
            return if self.is_zero() && other.is_zero() {
                Some((1, 0))
            } else {
                None
            };
        }
        let k = self.min_half_exp().unwrap() - other.min_half_exp().unwrap();
        for eps in [1i8, -1] {
            let mut cand = other.shift(k);
            if eps < 0 {
                cand = cand.neg();
            }
            if cand == *self {
                return Some((eps, k));
            }
        }
        None
    }
}

impl std::ops::Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        LaurentPoly::add(self, rhs)
    }
}
impl std::ops::Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        LaurentPoly::sub(self, rhs)
    }
}
impl std::ops::Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        LaurentPoly::mul(self, rhs)
    }
}

/// The quantum integer `(m)_q = 1 + q + ... + q^(m-1)` in the variable
/// `q = t^sign` (`sign` in {+1,-1}); `(0)_q = 0`.
pub fn qint(m: u32, sign: i8) -> LaurentPoly {
    let mut p = LaurentPoly::zero();
    for i in 0..m {
        p = p.add(&LaurentPoly::term(1, 2 * sign as i64 * i as i64));
    }
    p
}

/// `(m)_q! = (1)_q (2)_q ... (m)_q` in `q = t^sign`.
pub fn qfactorial(m: u32, sign: i8) -> LaurentPoly {
    let mut p = LaurentPoly::one();
    for i in 1..=m {
        p = p.mul(&qint(i, sign));
    }
    p
}

/// The quantum binomial coefficient in `q = t^sign`.
pub fn qbinom(m: u32, k: u32, sign: i8) -> Result<LaurentPoly, PolyError> {
    if k > m {
        return Err(PolyError::InvalidArgs(format!("qbinom({m},{k})")));
    }
    qfactorial(m, sign)
        .exact_divide(&qfactorial(k, sign).mul(&qfactorial(m - k, sign)))
}

// ---------------------------------------------------------------------------
// canonical text form
// ---------------------------------------------------------------------------

fn render_term(c: &BigInt, h: i64, first: bool, out: &mut String) {
    let neg = c.is_negative();
    if first {
        if neg {
            out.push('-');
        }
    } else if neg {
        out.push_str(" - ");
    } else {
        out.push_str(" + ");
    }
    let a = c.abs();
    let coef_one = a.is_one();
    if h == 0 {
        out.push_str(&a.to_string());
        return;
    }
    if !coef_one {
        out.push_str(&a.to_string());
        out.push('*');
    }
    out.push('t');
    if h == 2 {
        return;
    }
    if h % 2 == 0 {
        out.push_str(&format!("^{}", h / 2));
    } else {
        out.push_str(&format!("^({}/2)", h));
    }
}

impl fmt::Display for LaurentPoly {
    /// Canonical text: terms in ascending exponent, `0` for the zero
    /// polynomial, exponents as reduced fractions over 2.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut s = String::new();
        for (i, (e, c)) in self.terms.iter().enumerate() {
            render_term(c, *e, i == 0, &mut s);
        }
        write!(f, "{}", s)
    }
}

impl FromStr for LaurentPoly {
    type Err = PolyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "0" {
            return Ok(Self::zero());
        }
        let mut p = LaurentPoly::zero();
        // split into signed terms
        let bytes = s.as_bytes();
        let mut i = 0;
        let mut sign = 1i64;
        if bytes.first() == Some(&b'-') {
            sign = -1;
            i = 1;
        }
        loop {
            // read a term
            let start = i;
            let mut depth = 0;
            while i < bytes.len() {
                match bytes[i] {
                    b'(' => depth += 1,
                    b')' => depth -= 1,
                    b'+' | b'-' if depth == 0 && i > start && bytes[i - 1] == b' ' => break,
                    _ => {}
                }
                i += 1;
            }
            let term = s[start..i].trim();
            let (c, h) = parse_term(term)?;
            p = p.add(&LaurentPoly::term(c * sign, h));
            if i >= bytes.len() {
                break;
            }
            sign = if bytes[i] == b'-' { -1 } else { 1 };
            i += 1;
            while i < bytes.len() && bytes[i] == b' ' {
                i += 1;
            }
        }
        Ok(p)
    }
}

fn parse_term(t: &str) -> Result<(BigInt, i64), PolyError> {
    let bad = |m: &str| PolyError::Parse(format!("{m}: `{t}`"));
    if t.is_empty() {
        return Err(bad("empty term"));
    }
    let (coef_str, var_str) = match t.find('t') {
        None => (t, ""),
        Some(k) => (&t[..k], &t[k..]),
    };
    let coef_str = coef_str.trim().trim_end_matches('*').trim();
    let c: BigInt = if coef_str.is_empty() {
        BigInt::one()
    } else {
        coef_str.parse().map_err(|_| bad("bad coefficient"))?
    };
    if var_str.is_empty() {
        return Ok((c, 0));
    }
    let rest = &var_str[1..];
    if rest.is_empty() {
        return Ok((c, 2));
    }
    let rest = rest.strip_prefix('^').ok_or_else(|| bad("expected ^"))?;
    if let Some(inner) = rest.strip_prefix('(').and_then(|r| r.strip_suffix(')')) {
        let (num, den) = inner
            .split_once('/')
            .ok_or_else(|| bad("expected p/2 exponent"))?;
        let num: i64 = num.trim().parse().map_err(|_| bad("bad exponent"))?;
        let den: i64 = den.trim().parse().map_err(|_| bad("bad exponent"))?;
        if den != 2 {
            return Err(bad("exponent denominator must be 2"));
        }
        Ok((c, num))
    } else {
        let e: i64 = rest.parse().map_err(|_| bad("bad exponent"))?;
        Ok((c, 2 * e))
    }
}

// ---------------------------------------------------------------------------
// truncated power series
// ---------------------------------------------------------------------------

/// A power series in `h` truncated at order `D`: coefficients of `h^0..h^D`,
/// exact rationals. Arithmetic is modulo `h^(D+1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    pub coeffs: Vec<BigRational>,
}

impl TruncatedSeries {
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn constant(c: BigRational, order: usize) -> Self {
        let mut coeffs = vec![BigRational::zero(); order + 1];
        coeffs[0] = c;
        TruncatedSeries { coeffs }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.order(), other.order());
        TruncatedSeries {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.order(), other.order());
        TruncatedSeries {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.order(), other.order());
        let d = self.order();
        let mut coeffs = vec![BigRational::zero(); d + 1];
        for i in 0..=d {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..=(d - i) {
                let prod = &self.coeffs[i] * &other.coeffs[j];
                coeffs[i + j] += prod;
            }
        }
        TruncatedSeries { coeffs }
    }

    /// Multiplicative inverse modulo `h^(D+1)`; fails if the constant term is 0.
    pub fn inverse(&self) -> Result<Self, PolyError> {
        if self.coeffs[0].is_zero() {
            return Err(PolyError::InvalidArgs(
                "series with zero constant term cannot be inverted".into(),
            ));
        }
        let d = self.order();
        let mut inv = vec![BigRational::zero(); d + 1];
        inv[0] = BigRational::one() / &self.coeffs[0];
        for k in 1..=d {
            let mut s = BigRational::zero();
            for j in 1..=k {
                s += &self.coeffs[j] * &inv[k - j];
            }
            inv[k] = -s / &self.coeffs[0];
        }
        Ok(TruncatedSeries { coeffs: inv })
    }
}

/// Substitute `t -> exp(scale * h)` in `p` and truncate at `h^order`: the
/// coefficient of `h^j` is `sum_terms c * (scale * e)^j / j!` over the terms
/// `c * t^e` of `p`, computed exactly.
pub fn exp_substitute(p: &LaurentPoly, scale: &BigRational, order: usize) -> TruncatedSeries {
    let mut coeffs = vec![BigRational::zero(); order + 1];
    let two = BigRational::from_integer(2.into());
    for (h, c) in p.iter() {
        let x = BigRational::from_integer((*h).into()) / &two * scale;
        let mut pw = BigRational::one();
        let mut fact = BigRational::one();
        let crat = BigRational::from_integer(c.clone());
        for (j, cj) in coeffs.iter_mut().enumerate() {
            if j > 0 {
                pw *= &x;
                fact *= BigRational::from_integer(j.into());
            }
            *cj += &crat * &pw / &fact;
        }
    }
    TruncatedSeries { coeffs }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> LaurentPoly {
        s.parse().unwrap()
    }

    #[test]
    fn arithmetic_basics() {
        // (t + 1)(t - 1) = t^2 - 1
        assert_eq!(p("t + 1").mul(&p("t - 1")), p("-1 + t^2"));
        // p + 0 = p
        let q = p("3 - t - t^-1");
        assert_eq!(q.add(&LaurentPoly::zero()), q);
        // t^(1/2) * t^(1/2) = t
        assert_eq!(
            LaurentPoly::tpow_half(1).mul(&LaurentPoly::tpow_half(1)),
            LaurentPoly::tpow(1)
        );
    }

    #[test]
    fn exact_division() {
        let a = p("-1 + t^2");
        let b = p("-1 + t");
        assert_eq!(a.exact_divide(&b).unwrap(), p("1 + t"));
        let q = p("-t^-1 + 3 - t");
        assert!(q.exact_divide(&q).unwrap().is_one());
        assert!(p("1 + t").exact_divide(&p("-1 + t")).is_err());
    }

    #[test]
    fn quantum_integers() {
        assert!(qint(0, 1).is_zero());
        assert_eq!(qint(3, 1), p("1 + t + t^2"));
        assert_eq!(qint(2, -1), p("t^-1 + 1"));
        assert_eq!(qbinom(3, 1, 1).unwrap(), p("1 + t + t^2"));
        assert!(qbinom(7, 0, 1).unwrap().is_one());
        assert!(qbinom(7, 0, -1).unwrap().is_one());
        assert!(qbinom(1, 2, 1).is_err());
    }

    #[test]
    fn qbinom_4_2_against_division_oracle() {
        // oracle: expand (4)_q! and divide by (2)_q!(2)_q! directly
        let num = qfactorial(4, 1);
        let den = qfactorial(2, 1).mul(&qfactorial(2, 1));
        let expected = num.exact_divide(&den).unwrap();
        assert_eq!(qbinom(4, 2, 1).unwrap(), expected);
        assert_eq!(expected, p("1 + t + 2*t^2 + t^3 + t^4"));
    }

    #[test]
    fn qbinom_at_one_is_binomial() {
        for m in 0..=7u32 {
            for k in 0..=m {
                let qb = qbinom(m, k, 1).unwrap().eval_at_one();
                let qbm = qbinom(m, k, -1).unwrap().eval_at_one();
                let mut c = BigInt::one();
                for i in 0..k {
                    c = c * (m - i) / (i + 1);
                }
                assert_eq!(qb, c);
                assert_eq!(qbm, c);
            }
        }
    }

    #[test]
    fn units() {
        assert_eq!(p("-1 + t").equal_up_to_unit(&p("1 - t")), Some((-1, 0)));
        assert_eq!(p("t + t^2").equal_up_to_unit(&p("1 + t")), Some((1, 2)));
        assert_eq!(p("1 + t").equal_up_to_unit(&p("-1 + t")), None);
        let q = p("3 - t - t^-1");
        assert_eq!(q.equal_up_to_unit(&q), Some((1, 0)));
    }

    #[test]
    fn render_parse_roundtrip() {
        for s in [
            "0",
            "1",
            "-t^-1 + 3 - t",
            "t^(-3/2) + 2*t^(1/2)",
            "-2 + t^5",
            "t",
            "-t",
        ] {
            let q = p(s);
            assert_eq!(q.to_string(), s, "canonical render of `{s}`");
            assert_eq!(q.to_string().parse::<LaurentPoly>().unwrap(), q);
        }
    }

    #[test]
    fn exp_substitution() {
        let one = BigRational::one();
        // t -> 1 + h + h^2/2
        let s = exp_substitute(&LaurentPoly::tpow(1), &one, 2);
        assert_eq!(s.coeffs[0], BigRational::one());
        assert_eq!(s.coeffs[1], BigRational::one());
        assert_eq!(
            s.coeffs[2],
            BigRational::new(1.into(), 2.into())
        );
        // constants are flat
        let s = exp_substitute(&LaurentPoly::constant(1), &one, 3);
        assert_eq!(s, TruncatedSeries::constant(BigRational::one(), 3));
        // 3 - t - t^-1 -> 1 - h^2 + O(h^3)
        let s = exp_substitute(&"3 - t - t^-1".parse().unwrap(), &one, 2);
        assert_eq!(s.coeffs[0], BigRational::one());
        assert!(s.coeffs[1].is_zero());
        assert_eq!(s.coeffs[2], -BigRational::one());
    }

    #[test]
    fn series_inverse() {
        let s = exp_substitute(&"3 - t - t^-1".parse().unwrap(), &BigRational::one(), 4);
        let inv = s.inverse().unwrap();
        assert!(s.mul(&inv).sub(&TruncatedSeries::constant(BigRational::one(), 4)).coeffs.iter().all(|c| c.is_zero()));
        // 1/(1 - h^2 - ...) = 1 + h^2 + O(h^3)
        assert_eq!(inv.coeffs[0], BigRational::one());
        assert!(inv.coeffs[1].is_zero());
        assert_eq!(inv.coeffs[2], BigRational::one());
    }
}
