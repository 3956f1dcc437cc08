//! The 2-pointed quasimap invariants of `F2`.
//!
//! The virtual dimension of the 2-pointed space in class `a D2 + b D4` is
//! `1 + 2a`, so only `a = 0` with insertions `(D_k, 1)` and `a = 1` with
//! insertions `(D_k, pt)` can be nonzero, up to swapping the two markings.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::algebra::{binom, fmt_rational, int, Rational};
use crate::error::{Error, Result};
use crate::localization::{invariant_by_localization, Family, Method};
use crate::par::Exec;
use crate::report::Report;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Insertion {
    One,
    /// Toric divisor `D_k`, `k` in `1..=4`.
    D(u8),
    Pt,
}

impl Insertion {
    pub const ALL: [Insertion; 6] =
        [Insertion::One, Insertion::D(1), Insertion::D(2), Insertion::D(3), Insertion::D(4), Insertion::Pt];

    pub fn codim(self) -> u32 {
        match self {
            Insertion::One => 0,
            Insertion::D(_) => 1,
            Insertion::Pt => 2,
        }
    }
}

impl fmt::Display for Insertion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Insertion::One => f.write_str("1"),
            Insertion::D(k) => write!(f, "D{k}"),
            Insertion::Pt => f.write_str("pt"),
        }
    }
}

impl FromStr for Insertion {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "1" => Ok(Insertion::One),
            "pt" => Ok(Insertion::Pt),
            "D1" => Ok(Insertion::D(1)),
            "D2" => Ok(Insertion::D(2)),
            "D3" => Ok(Insertion::D(3)),
            "D4" => Ok(Insertion::D(4)),
            _ => Err(Error::Parse(format!("unknown insertion {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct InvariantKey {
    /// `beta = a D2 + b D4`.
    pub a: u32,
    pub b: u32,
    pub insertions: (Insertion, Insertion),
}

impl InvariantKey {
    pub fn new(a: u32, b: u32, first: Insertion, second: Insertion) -> Result<Self> {
        for ins in [first, second] {
            if let Insertion::D(k) = ins {
                if !(1..=4).contains(&k) {
                    return Err(Error::InvalidArgument(format!("D{k} is not a toric divisor of F2")));
                }
            }
        }
        Ok(Self { a, b, insertions: (first, second) })
    }

    pub fn dimension_valid(&self) -> bool {
        self.a <= 1
            && (self.a, self.b) != (0, 0)
            && self.insertions.0.codim() + self.insertions.1.codim() == 1 + 2 * self.a
    }

    pub fn swapped(&self) -> Self {
        Self { insertions: (self.insertions.1, self.insertions.0), ..*self }
    }
}

impl fmt::Display for InvariantKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let beta = match (self.a, self.b) {
            (0, b) => format!("{b}D4"),
            (1, 0) => "D2".to_string(),
            (1, b) => format!("D2+{b}D4"),
            (a, b) => format!("{a}D2+{b}D4"),
        };
        write!(f, "<{},{}>_{beta}", self.insertions.0, self.insertions.1)
    }
}

fn central(d: u32) -> Rational {
    Rational::from_integer(binom(2 * d as u64, d as i64))
}

/// `(<D2, .>, <D4, .>)` in class `a D2 + d D4`; the other divisors follow
/// from `D1 = D2` and `D3 = 2 D2 + D4`.
///
/// At `beta = D2` the only contributing graph is the bare vertical edge and
/// the values are `<D2, pt> = 0`, `<D4, pt> = 1`. The general formula
/// `binom(2d, d)/(2(2d - 1))` would give `-1/2` there, which is inconsistent
/// with the `q2 D2` term of the action of `D4` on `pt`.
pub fn closed_divisor_pair(a: u32, d: u32) -> Option<(Rational, Rational)> {
    match (a, d) {
        (0, 0) => None,
        (0, d) => {
            let c = central(d);
            Some((-&c / int(2 * d as i64), c / int(d as i64)))
        }
        (1, 0) => Some((Rational::zero(), int(1))),
        (1, d) => {
            let c = central(d);
            let m = int(2 * d as i64 - 1);
            Some((&c / (int(2) * &m), -c / m))
        }
        _ => None,
    }
}

fn divisor_value(k: u8, v2: &Rational, v4: &Rational) -> Rational {
    match k {
        1 | 2 => v2.clone(),
        3 => int(2) * v2 + v4,
        4 => v4.clone(),
        _ => unreachable!("checked in InvariantKey::new"),
    }
}

fn divisor_of(key: &InvariantKey) -> Option<u8> {
    match key.insertions {
        (Insertion::D(k), _) | (_, Insertion::D(k)) => Some(k),
        _ => None,
    }
}

/// Closed value of any 2-pointed invariant; zero unless dimension-valid.
pub fn closed_invariant(key: &InvariantKey) -> Rational {
    if !key.dimension_valid() {
        return Rational::zero();
    }
    let (Some(k), Some((v2, v4))) = (divisor_of(key), closed_divisor_pair(key.a, key.b)) else {
        return Rational::zero();
    };
    divisor_value(k, &v2, &v4)
}

/// Invariant values for `a in {0, 1}` and `b <= d_max`, stored as the pair
/// `(<D2, .>, <D4, .>)` per class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantTable {
    d_max: u32,
    pairs: BTreeMap<(u32, u32), (Rational, Rational)>,
}

impl InvariantTable {
    pub fn closed(d_max: u32) -> Self {
        let mut pairs = BTreeMap::new();
        for a in 0..=1 {
            for d in 0..=d_max {
                if let Some(p) = closed_divisor_pair(a, d) {
                    pairs.insert((a, d), p);
                }
            }
        }
        Self { d_max, pairs }
    }

    /// `<D2, .>` from the localization engine and `<D4, .> = -2 <D2, .>`
    /// from `<D3, .> = 0`. At `beta = D2` the vanishing of `<D3, pt>` fails,
    /// and the `D4` value is taken from the closed table.
    pub fn localized(d_max: u32, method: Method, exec: Exec) -> Result<Self> {
        let mut jobs = Vec::new();
        for d in 1..=d_max {
            jobs.push((0u32, Family::DD4, d));
        }
        for d in 0..=d_max {
            jobs.push((1u32, Family::D2PlusDD4, d));
        }
        let values = exec.map(jobs.clone(), |(_, fam, d)| invariant_by_localization(fam, d, method, Exec::Sequential));
        let mut pairs = BTreeMap::new();
        for ((a, _, d), v) in jobs.into_iter().zip(values) {
            let v2 = v?;
            let v4 = if (a, d) == (1, 0) {
                closed_divisor_pair(1, 0).expect("beta = D2 is tabulated").1
            } else {
                int(-2) * &v2
            };
            pairs.insert((a, d), (v2, v4));
        }
        Ok(Self { d_max, pairs })
    }

    pub fn d_max(&self) -> u32 {
        self.d_max
    }

    pub fn get(&self, key: &InvariantKey) -> Result<Rational> {
        if !key.dimension_valid() {
            return Ok(Rational::zero());
        }
        if key.b > self.d_max {
            return Err(Error::InvalidArgument(format!("{key} is beyond the table (d_max = {})", self.d_max)));
        }
        let k = divisor_of(key).expect("dimension-valid keys carry a divisor");
        let (v2, v4) = &self.pairs[&(key.a, key.b)];
        Ok(divisor_value(k, v2, v4))
    }

    /// Every dimension-valid key with `b <= d_max`, in a fixed order.
    pub fn records(&self) -> Vec<InvariantRecord> {
        let mut out = Vec::new();
        for &(a, b) in self.pairs.keys() {
            for x in Insertion::ALL {
                for y in Insertion::ALL {
                    let key = InvariantKey { a, b, insertions: (x, y) };
                    if key.dimension_valid() {
                        let value = self.get(&key).expect("key is in range");
                        out.push(InvariantRecord {
                            beta: [a, b],
                            insertions: [x.to_string(), y.to_string()],
                            value: fmt_rational(&value),
                        });
                    }
                }
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantRecord {
    pub beta: [u32; 2],
    pub insertions: [String; 2],
    pub value: String,
}

/// The divisor relations between closed values, and agreement of the
/// localization engine (both methods) with the closed table.
pub fn verify_relations(d_max: u32, exec: Exec) -> Result<Report> {
    let mut r = Report::new();
    for (a, family) in [(0u32, Family::DD4), (1, Family::D2PlusDD4)] {
        let other = if a == 0 { Insertion::One } else { Insertion::Pt };
        for d in family.min_degree()..=d_max {
            let inv = |k: u8| closed_invariant(&InvariantKey { a, b: d, insertions: (Insertion::D(k), other) });
            let [d1, d2, d3, d4] = [inv(1), inv(2), inv(3), inv(4)];
            let tag = format!("{family} d={d}");
            r.check_eq(format!("{tag}: <D1> = <D2>"), &d1, &d2);
            r.check_eq(format!("{tag}: <D3> = 2<D2> + <D4>"), &d3, &(int(2) * &d2 + &d4));
            if d >= 1 {
                r.check_eq(format!("{tag}: <D3> = 0"), &d3, &Rational::zero());
                r.check_eq(format!("{tag}: <D4> = -2<D2>"), &d4, &(int(-2) * &d2));
            }
            for k in 1..=4u8 {
                let key = InvariantKey { a, b: d, insertions: (Insertion::D(k), other) };
                r.check_eq(format!("{tag}: {key} symmetric"), &closed_invariant(&key.swapped()), &closed_invariant(&key));
            }
            for method in [Method::Closed, Method::Assembled] {
                let loc = invariant_by_localization(family, d, method, exec)?;
                r.check_eq(format!("{tag}: localization ({method}) = closed"), &loc, &d2);
            }
        }
    }
    Ok(r)
}
