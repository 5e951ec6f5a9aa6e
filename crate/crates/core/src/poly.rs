//! Laurent polynomials in `q` (one variable, signed coefficients) and in
//! `(q, t)` (two variables, non-negative coefficients).

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// One-variable Laurent polynomial in `q` with integer coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Laurent {
    terms: BTreeMap<i64, i64>,
}

impl Laurent {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(0, 1)
    }

    pub fn monomial(exp: i64, coeff: i64) -> Self {
        let mut p = Self::zero();
        p.add_term(exp, coeff);
        p
    }

    /// `q + q^-1`, the value of a single circle.
    pub fn circle() -> Self {
        Self::from_terms([(1, 1), (-1, 1)])
    }

    pub fn from_terms<I: IntoIterator<Item = (i64, i64)>>(it: I) -> Self {
        let mut p = Self::zero();
        for (e, c) in it {
            p.add_term(e, c);
        }
        p
    }

    pub fn add_term(&mut self, exp: i64, coeff: i64) {
        if coeff == 0 {
            return;
        }
        let e = self.terms.entry(exp).or_insert(0);
        *e += coeff;
        if *e == 0 {
            self.terms.remove(&exp);
        }
    }

    pub fn coeff(&self, exp: i64) -> i64 {
        self.terms.get(&exp).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        self.terms.iter().map(|(&e, &c)| (e, c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Substitute `q -> q^-1`.
    pub fn bar(&self) -> Self {
        Self::from_terms(self.terms().map(|(e, c)| (-e, c)))
    }

    pub fn shift(&self, by: i64) -> Self {
        Self::from_terms(self.terms().map(|(e, c)| (e + by, c)))
    }

    pub fn scale(&self, k: i64) -> Self {
        Self::from_terms(self.terms().map(|(e, c)| (e, c * k)))
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::one(), |acc, _| &acc * self)
    }

    /// Exact division by `q + q^-1`, if it divides.
    pub fn div_circle(&self) -> Option<Self> {
        let Some(&lo) = self.terms.keys().next() else {
            return Some(Self::zero());
        };
        let mut rem = self.clone();
        let mut out = Self::zero();
        while let Some((&top, &c)) = rem.terms.iter().next_back() {
            if top < lo + 2 {
                return None;
            }
            out.add_term(top - 1, c);
            rem.add_term(top, -c);
            rem.add_term(top - 2, -c);
        }
        Some(out)
    }
}

impl Add for &Laurent {
    type Output = Laurent;
    fn add(self, rhs: &Laurent) -> Laurent {
        let mut out = self.clone();
        for (e, c) in rhs.terms() {
            out.add_term(e, c);
        }
        out
    }
}

impl Mul for &Laurent {
    type Output = Laurent;
    fn mul(self, rhs: &Laurent) -> Laurent {
        let mut out = Laurent::zero();
        for (e1, c1) in self.terms() {
            for (e2, c2) in rhs.terms() {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }
}

fn fmt_var(f: &mut fmt::Formatter<'_>, var: char, exp: i64) -> fmt::Result {
    match exp {
        0 => Ok(()),
        1 => write!(f, "{var}"),
        e => write!(f, "{var}^{e}"),
    }
}

impl fmt::Display for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (e, c)) in self.terms().enumerate() {
            let mag = c.unsigned_abs();
            match (k, c < 0) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if mag != 1 || e == 0 {
                write!(f, "{mag}")?;
            }
            fmt_var(f, 'q', e)?;
        }
        Ok(())
    }
}

/// Two-variable Laurent polynomial with non-negative coefficients, keyed by
/// `(i, j)` = (`t`-exponent, `q`-exponent). Iteration and printing follow
/// ascending `(i, j)` order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct LaurentPoly2 {
    terms: BTreeMap<(i64, i64), u64>,
}

impl LaurentPoly2 {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_term(&mut self, i: i64, j: i64, coeff: u64) {
        if coeff > 0 {
            *self.terms.entry((i, j)).or_insert(0) += coeff;
        }
    }

    pub fn coeff(&self, i: i64, j: i64) -> u64 {
        self.terms.get(&(i, j)).copied().unwrap_or(0)
    }

    /// Terms as `((i, j), coefficient)` in ascending `(i, j)` order.
    pub fn terms(&self) -> impl Iterator<Item = ((i64, i64), u64)> + '_ {
        self.terms.iter().map(|(&k, &c)| (k, c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Evaluate at `t = -1`.
    pub fn euler_characteristic(&self) -> Laurent {
        Laurent::from_terms(
            self.terms().map(|((i, j), c)| (j, if i.rem_euclid(2) == 0 { c as i64 } else { -(c as i64) })),
        )
    }
}

impl fmt::Display for LaurentPoly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, ((i, j), c)) in self.terms().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            if c != 1 || (i == 0 && j == 0) {
                write!(f, "{c}")?;
            }
            fmt_var(f, 'q', j)?;
            fmt_var(f, 't', i)?;
        }
        Ok(())
    }
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
#[error("cannot parse polynomial term '{0}'")]
pub struct PolyParseError(pub String);

fn parse_exp(rest: &str) -> Result<(i64, &str), ()> {
    if let Some(r) = rest.strip_prefix('^') {
        let end = r
            .char_indices()
            .find(|&(k, ch)| !(ch.is_ascii_digit() || (k == 0 && ch == '-')))
            .map(|(k, _)| k)
            .unwrap_or(r.len());
        let e = r[..end].parse::<i64>().map_err(|_| ())?;
        Ok((e, &r[end..]))
    } else {
        Ok((1, rest))
    }
}

impl From<LaurentPoly2> for String {
    fn from(p: LaurentPoly2) -> String {
        p.to_string()
    }
}

impl TryFrom<String> for LaurentPoly2 {
    type Error = PolyParseError;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl FromStr for LaurentPoly2 {
    type Err = PolyParseError;

    /// Parses the canonical printed form, e.g. `q^-1 + q + 2q^3t^2`.
    /// Term order is not required; repeated monomials accumulate.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut p = LaurentPoly2::new();
        let s = s.trim();
        if s == "0" {
            return Ok(p);
        }
        for raw in s.split('+') {
            let term = raw.trim();
            let err = || PolyParseError(term.to_string());
            if term.is_empty() {
                return Err(err());
            }
            let digits = term.chars().take_while(|c| c.is_ascii_digit()).count();
            let coeff = if digits > 0 { term[..digits].parse::<u64>().map_err(|_| err())? } else { 1 };
            let mut rest = &term[digits..];
            let (mut i, mut j) = (0, 0);
            while let Some(ch) = rest.chars().next() {
                let (e, r) = parse_exp(&rest[1..]).map_err(|_| err())?;
                match ch {
                    'q' => j += e,
                    't' => i += e,
                    _ => return Err(err()),
                }
                rest = r;
            }
            if digits == 0 && term == rest {
                return Err(err());
            }
            p.add_term(i, j, coeff);
        }
        Ok(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn laurent_display() {
        assert_eq!(Laurent::circle().to_string(), "q^-1 + q");
        let p = Laurent::from_terms([(-9, -1), (-5, 1), (0, 3)]);
        assert_eq!(p.to_string(), "-q^-9 + q^-5 + 3");
        assert_eq!(Laurent::zero().to_string(), "0");
    }

    #[test]
    fn div_circle_inverts_mul() {
        let p = Laurent::from_terms([(-3, 2), (1, -1), (4, 7)]);
        let prod = &p * &Laurent::circle();
        assert_eq!(prod.div_circle(), Some(p));
        assert_eq!(Laurent::one().div_circle(), None);
    }

    #[test]
    fn poly2_canonical_roundtrip() {
        let mut p = LaurentPoly2::new();
        p.add_term(0, -1, 1);
        p.add_term(0, 1, 1);
        assert_eq!(p.to_string(), "q^-1 + q");
        let mut t = LaurentPoly2::new();
        for (i, j) in [(0, 1), (0, 3), (2, 5), (3, 9)] {
            t.add_term(i, j, 1);
        }
        t.add_term(-2, -1, 2);
        let s = t.to_string();
        assert_eq!(s, "2q^-1t^-2 + q + q^3 + q^5t^2 + q^9t^3");
        assert_eq!(s.parse::<LaurentPoly2>().unwrap(), t);
    }

    #[test]
    fn poly2_parse_errors() {
        assert!("q^x".parse::<LaurentPoly2>().is_err());
        assert!("q + ".parse::<LaurentPoly2>().is_err());
        assert!("z".parse::<LaurentPoly2>().is_err());
        assert_eq!("1".parse::<LaurentPoly2>().unwrap().coeff(0, 0), 1);
    }

    #[test]
    fn euler_characteristic_signs() {
        let p: LaurentPoly2 = "q + q^3 + q^5t^2 + q^9t^3".parse().unwrap();
        assert_eq!(p.euler_characteristic(), Laurent::from_terms([(1, 1), (3, 1), (5, 1), (9, -1)]));
    }
}
