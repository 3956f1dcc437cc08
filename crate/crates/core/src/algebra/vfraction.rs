//! Homogeneous rational functions in the weights `V` and `W`.
//!
//! A value is stored dehomogenized at `W = 1` as `num(V) / den(V)` together
//! with its total degree, so `V` and `W` themselves are
//! `(V / 1, degree 1)` and `(1 / 1, degree 1)`.

use std::fmt;
use std::ops::{Add, Mul, Neg};

use num_traits::{One, Zero};

use super::numbers::{fmt_rational, int, Rational};
use super::poly::VPoly;
use crate::error::Error;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VFraction {
    degree: i64,
    num: VPoly,
    den: VPoly,
}

impl VFraction {
    pub fn new(degree: i64, num: VPoly, den: VPoly) -> Result<Self, Error> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self { degree, num, den }.reduced())
    }

    /// A rational constant times `W^degree`.
    pub fn constant(c: Rational, degree: i64) -> Self {
        Self { degree, num: VPoly::constant(c), den: VPoly::constant(Rational::one()) }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one(), 0)
    }

    pub fn w() -> Self {
        Self::constant(Rational::one(), 1)
    }

    pub fn v() -> Self {
        Self { degree: 1, num: VPoly::v(), den: VPoly::constant(Rational::one()) }
    }

    /// `V + c W`.
    pub fn v_plus_w(c: Rational) -> Self {
        Self { degree: 1, num: VPoly::v_plus(c), den: VPoly::constant(Rational::one()) }
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn numerator(&self) -> &VPoly {
        &self.num
    }

    pub fn denominator(&self) -> &VPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Strips the common power of `V` and normalizes the denominator to be
    /// monic in its lowest nonzero coefficient.
    fn reduced(mut self) -> Self {
        if self.num.is_zero() {
            self.den = VPoly::constant(Rational::one());
            return self;
        }
        let k = self.num.v_valuation().min(self.den.v_valuation());
        if k > 0 {
            self.num = self.num.shift_down(k);
            self.den = self.den.shift_down(k);
        }
        let lead = self.den.coeffs()[self.den.v_valuation()].clone();
        if !lead.is_one() {
            let inv = lead.recip();
            self.num = self.num.scale(&inv);
            self.den = self.den.scale(&inv);
        }
        self
    }

    pub fn recip(&self) -> Result<Self, Error> {
        if self.num.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self { degree: -self.degree, num: self.den.clone(), den: self.num.clone() }.reduced())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, Error> {
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch { left: self.degree, right: other.degree });
        }
        let num = &(&self.num * &other.den) + &(&other.num * &self.den);
        let den = &self.den * &other.den;
        Ok(Self { degree: self.degree, num, den }.reduced())
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::one(), |acc, _| &acc * self)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self { degree: self.degree, num: self.num.scale(c), den: self.den.clone() }.reduced()
    }

    /// Value at `V = 0` as `(coefficient, power of W)`.
    ///
    /// Fails with [`Error::PoleAtVZero`] when the reduced denominator vanishes
    /// at `V = 0`.
    pub fn eval_at_v0(&self) -> Result<(Rational, i64), Error> {
        let d0 = self.den.at_zero();
        if d0.is_zero() {
            return Err(Error::PoleAtVZero);
        }
        Ok((self.num.at_zero() / d0, self.degree))
    }

    /// Evaluates at rational `V`, `W` (`W != 0`).
    pub fn eval(&self, v: &Rational, w: &Rational) -> Result<Rational, Error> {
        if w.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let t = v / w;
        let d = self.den.eval(&t);
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let scale = if self.degree >= 0 {
            num_traits::pow(w.clone(), self.degree as usize)
        } else {
            num_traits::pow(w.recip(), (-self.degree) as usize)
        };
        Ok(self.num.eval(&t) / d * scale)
    }
}

impl Mul for &VFraction {
    type Output = VFraction;
    fn mul(self, rhs: &VFraction) -> VFraction {
        VFraction {
            degree: self.degree + rhs.degree,
            num: &self.num * &rhs.num,
            den: &self.den * &rhs.den,
        }
        .reduced()
    }
}

impl Mul for VFraction {
    type Output = VFraction;
    fn mul(self, rhs: VFraction) -> VFraction {
        &self * &rhs
    }
}

impl Add for &VFraction {
    type Output = VFraction;
    fn add(self, rhs: &VFraction) -> VFraction {
        self.checked_add(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Neg for &VFraction {
    type Output = VFraction;
    fn neg(self) -> VFraction {
        self.scale(&int(-1))
    }
}

impl fmt::Display for VFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |p: &VPoly| {
            let parts: Vec<String> = p
                .coeffs()
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| match i {
                    0 => fmt_rational(c),
                    1 => format!("{}*V", fmt_rational(c)),
                    _ => format!("{}*V^{i}", fmt_rational(c)),
                })
                .collect();
            if parts.is_empty() { "0".to_string() } else { parts.join(" + ") }
        };
        write!(f, "({}) / ({}) [deg {}]", show(&self.num), show(&self.den), self.degree)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;
    use proptest::prelude::*;

    #[test]
    fn w_times_inverse_is_one() {
        let w = VFraction::w();
        let prod = &w * &w.recip().unwrap();
        assert_eq!(prod, VFraction::one());
        assert_eq!(prod.degree(), 0);
    }

    #[test]
    fn v2_at_v0_is_two() {
        let v2 = VFraction::v_plus_w(int(2));
        assert_eq!(v2.eval_at_v0().unwrap(), (int(2), 1));
    }

    #[test]
    fn substitution_examples() {
        let x = &VFraction::v_plus_w(int(1)) * &VFraction::w().recip().unwrap();
        assert_eq!(x.eval_at_v0().unwrap(), (int(1), 0));
        assert_eq!(VFraction::constant(int(5), 0).eval_at_v0().unwrap(), (int(5), 0));
        let v_over_w = &VFraction::v() * &VFraction::w().recip().unwrap();
        assert_eq!(v_over_w.eval_at_v0().unwrap(), (int(0), 0));
    }

    #[test]
    fn removable_v_factor_cancels() {
        // (V (V + 2W)) / (V W) -> (V + 2W) / W
        let num = &VFraction::v() * &VFraction::v_plus_w(int(2));
        let den = &VFraction::v() * &VFraction::w();
        let q = &num * &den.recip().unwrap();
        assert_eq!(q.eval_at_v0().unwrap(), (int(2), 0));
    }

    #[test]
    fn genuine_pole_is_reported() {
        let x = VFraction::v().recip().unwrap();
        assert!(matches!(x.eval_at_v0(), Err(Error::PoleAtVZero)));
        assert!(matches!(VFraction::constant(int(0), 0).recip(), Err(Error::DivisionByZero)));
    }

    #[test]
    fn addition_requires_matching_degree() {
        let err = VFraction::v().checked_add(&VFraction::one()).unwrap_err();
        assert!(matches!(err, Error::DegreeMismatch { left: 1, right: 0 }));
        let s = VFraction::v().checked_add(&VFraction::w()).unwrap();
        assert_eq!(s, VFraction::v_plus_w(int(1)));
    }

    fn small_vf() -> impl Strategy<Value = VFraction> {
        (prop::collection::vec(-4i64..=4, 1..3), prop::collection::vec(-4i64..=4, 1..3), -2i64..=2)
            .prop_filter_map("nonzero denominator", |(n, d, deg)| {
                let num = VPoly::new(n.into_iter().map(int).collect());
                let den = VPoly::new(d.into_iter().map(int).collect());
                VFraction::new(deg, num, den).ok()
            })
    }

    fn same_value(a: &VFraction, b: &VFraction) -> bool {
        a.degree() == b.degree()
            && [rat(1, 3), int(2), rat(-7, 5), int(11)].iter().all(|v| {
                match (a.eval(v, &int(1)), b.eval(v, &int(1))) {
                    (Ok(x), Ok(y)) => x == y,
                    _ => true,
                }
            })
    }

    proptest! {
        #[test]
        fn multiplication_is_commutative_and_associative(a in small_vf(), b in small_vf(), c in small_vf()) {
            prop_assert!(same_value(&(&a * &b), &(&b * &a)));
            prop_assert!(same_value(&(&(&a * &b) * &c), &(&a * &(&b * &c))));
            prop_assert_eq!((&a * &b).degree(), a.degree() + b.degree());
        }

        #[test]
        fn addition_is_commutative_and_distributes(a in small_vf(), b in small_vf(), c in small_vf()) {
            let b = VFraction::new(a.degree(), b.numerator().clone(), b.denominator().clone()).unwrap();
            prop_assert!(same_value(&(&a + &b), &(&b + &a)));
            let lhs = &c * &(&a + &b);
            let rhs = &(&c * &a) + &(&c * &b);
            prop_assert!(same_value(&lhs, &rhs));
        }

        #[test]
        fn reciprocal_negates_degree(a in small_vf()) {
            if !a.is_zero() {
                let r = a.recip().unwrap();
                prop_assert_eq!(r.degree(), -a.degree());
                prop_assert!(same_value(&(&a * &r), &VFraction::one()));
            }
        }
    }
}
