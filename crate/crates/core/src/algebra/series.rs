//! Power series in `(q2, q4)` truncated at a total degree.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::numbers::{binom, fmt_rational, parse_rational, Rational};
use crate::error::Error;

/// Element of `Q[[q2, q4]]` modulo all monomials of total degree `> order`.
///
/// Only nonzero coefficients with `a + b <= order` are stored, keyed by the
/// exponent pair `(a, b)` of `q2^a q4^b`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Series {
    order: u32,
    terms: BTreeMap<(u32, u32), Rational>,
}

impl Series {
    pub fn zero(order: u32) -> Self {
        Self { order, terms: BTreeMap::new() }
    }

    pub fn one(order: u32) -> Self {
        Self::constant(order, Rational::one())
    }

    pub fn constant(order: u32, c: Rational) -> Self {
        Self::monomial(order, 0, 0, c)
    }

    /// `c * q2^a * q4^b`, or zero if the monomial is beyond the order.
    pub fn monomial(order: u32, a: u32, b: u32, c: Rational) -> Self {
        let mut s = Self::zero(order);
        s.add_term(a, b, c);
        s
    }

    pub fn q2(order: u32) -> Self {
        Self::monomial(order, 1, 0, Rational::one())
    }

    pub fn q4(order: u32) -> Self {
        Self::monomial(order, 0, 1, Rational::one())
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn coeff(&self, a: u32, b: u32) -> Rational {
        self.terms.get(&(a, b)).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &Rational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn constant_term(&self) -> Rational {
        self.coeff(0, 0)
    }

    /// Adds `c q2^a q4^b` in place, dropping it if beyond the order.
    pub fn add_term(&mut self, a: u32, b: u32, c: Rational) {
        if a + b > self.order || c.is_zero() {
            return;
        }
        let slot = self.terms.entry((a, b)).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&(a, b));
        }
    }

    /// Re-truncates at a lower order (or pads the order upward).
    pub fn with_order(&self, order: u32) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|((a, b), _)| a + b <= order)
            .map(|(k, v)| (*k, v.clone()))
            .collect();
        Self { order, terms }
    }

    fn check_order(&self, other: &Self) -> Result<(), Error> {
        if self.order != other.order {
            return Err(Error::OrderMismatch { left: self.order, right: other.order });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, Error> {
        self.check_order(other)?;
        let mut out = self.clone();
        for (&(a, b), c) in &other.terms {
            out.add_term(a, b, c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, Error> {
        self.checked_add(&-other)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, Error> {
        self.check_order(other)?;
        let mut out = Self::zero(self.order);
        for (&(a1, b1), c1) in &self.terms {
            for (&(a2, b2), c2) in &other.terms {
                if a1 + a2 + b1 + b2 <= self.order {
                    out.add_term(a1 + a2, b1 + b2, c1 * c2);
                }
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.order);
        }
        let terms = self.terms.iter().map(|(k, v)| (*k, v * c)).collect();
        Self { order: self.order, terms }
    }

    /// Multiplies by `q2^a q4^b`.
    pub fn shift(&self, a: u32, b: u32) -> Self {
        let mut out = Self::zero(self.order);
        for (&(x, y), c) in &self.terms {
            out.add_term(x + a, y + b, c.clone());
        }
        out
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::one(self.order), |acc, _| &acc * self)
    }

    /// Multiplicative inverse, solved degree by degree.
    pub fn invert(&self) -> Result<Self, Error> {
        let c0 = self.constant_term();
        if c0.is_zero() {
            return Err(Error::NotInvertible);
        }
        let inv0 = c0.recip();
        let mut out = Self::zero(self.order);
        for total in 0..=self.order {
            for a in 0..=total {
                let b = total - a;
                // coefficient of q2^a q4^b in self * out must vanish (or be 1 at 0)
                let mut acc = if total == 0 { Rational::one() } else { Rational::zero() };
                for (&(sa, sb), sc) in &self.terms {
                    if (sa, sb) == (0, 0) || sa > a || sb > b {
                        continue;
                    }
                    acc -= sc * out.coeff(a - sa, b - sb);
                }
                out.add_term(a, b, acc * &inv0);
            }
        }
        Ok(out)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(SeriesJson::from(self)).expect("series serializes")
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self, Error> {
        let raw: SeriesJson =
            serde_json::from_value(value.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        raw.try_into()
    }
}

impl fmt::Display for Series {
    /// Prints `2*q4 + 6*q4^2 - 1/2*q2*q4` style, lowest total degree first.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut keys: Vec<_> = self.terms.keys().copied().collect();
        keys.sort_by_key(|&(a, b)| (a + b, a));
        for (i, (a, b)) in keys.into_iter().enumerate() {
            let c = &self.terms[&(a, b)];
            let negative = c < &Rational::zero();
            let mag = if negative { -c.clone() } else { c.clone() };
            if i == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if negative { '-' } else { '+' })?;
            }
            let mono = monomial_string(a, b);
            match (mono.is_empty(), mag.is_one()) {
                (true, _) => write!(f, "{}", fmt_rational(&mag))?,
                (false, true) => write!(f, "{mono}")?,
                (false, false) => write!(f, "{}*{mono}", fmt_rational(&mag))?,
            }
        }
        Ok(())
    }
}

pub(crate) fn monomial_string(a: u32, b: u32) -> String {
    let var = |name: &str, e: u32| match e {
        0 => None,
        1 => Some(name.to_string()),
        _ => Some(format!("{name}^{e}")),
    };
    [var("q2", a), var("q4", b)].into_iter().flatten().collect::<Vec<_>>().join("*")
}

/// `f(q4) = sum_{d >= 1} binom(2d, d) q4^d`, truncated at `order`.
pub fn f_series(order: u32) -> Series {
    let mut s = Series::zero(order);
    for d in 1..=order {
        s.add_term(0, d, Rational::from_integer(binom(2 * d as u64, d as i64)));
    }
    s
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr<&Series> for &Series {
            type Output = Series;
            fn $method(self, rhs: &Series) -> Series {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl $tr<Series> for Series {
            type Output = Series;
            fn $method(self, rhs: Series) -> Series {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&Series> for Series {
            type Output = Series;
            fn $method(self, rhs: &Series) -> Series {
                (&self).$method(rhs)
            }
        }
        impl $tr<Series> for &Series {
            type Output = Series;
            fn $method(self, rhs: Series) -> Series {
                self.$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);

impl Neg for &Series {
    type Output = Series;
    fn neg(self) -> Series {
        let terms = self.terms.iter().map(|(k, v)| (*k, -v.clone())).collect();
        Series { order: self.order, terms }
    }
}

impl Neg for Series {
    type Output = Series;
    fn neg(self) -> Series {
        -&self
    }
}

/// One stored coefficient of a serialized series.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct SeriesTerm {
    pub q2: u32,
    pub q4: u32,
    pub num: String,
    pub den: String,
}

#[derive(Serialize, Deserialize)]
struct SeriesJson {
    order: u32,
    terms: Vec<SeriesTerm>,
}

impl From<&Series> for SeriesJson {
    fn from(s: &Series) -> Self {
        let terms = s
            .terms
            .iter()
            .map(|(&(a, b), c)| SeriesTerm {
                q2: a,
                q4: b,
                num: c.numer().to_string(),
                den: c.denom().to_string(),
            })
            .collect();
        SeriesJson { order: s.order, terms }
    }
}

impl TryFrom<SeriesJson> for Series {
    type Error = Error;

    fn try_from(raw: SeriesJson) -> Result<Self, Error> {
        let mut s = Series::zero(raw.order);
        for t in raw.terms {
            if t.q2 + t.q4 > raw.order {
                return Err(Error::Parse(format!(
                    "term q2^{} q4^{} exceeds order {}",
                    t.q2, t.q4, raw.order
                )));
            }
            let c = parse_rational(&format!("{}/{}", t.num, t.den))?;
            s.add_term(t.q2, t.q4, c);
        }
        Ok(s)
    }
}
