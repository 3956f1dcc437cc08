use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Zero;

use super::numbers::Rational;

/// Dense univariate polynomial in `V` with rational coefficients.
/// `coeffs[i]` is the coefficient of `V^i`; no trailing zeros are stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct VPoly {
    coeffs: Vec<Rational>,
}

impl VPoly {
    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// The polynomial `V`.
    pub fn v() -> Self {
        Self::new(vec![Rational::zero(), Rational::from_integer(1.into())])
    }

    /// `V + c`.
    pub fn v_plus(c: Rational) -> Self {
        Self::new(vec![c, Rational::from_integer(1.into())])
    }

    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn at_zero(&self) -> Rational {
        self.coeffs.first().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn eval(&self, v: &Rational) -> Rational {
        self.coeffs.iter().rev().fold(Rational::zero(), |acc, c| acc * v + c)
    }

    /// Largest `k` with `V^k` dividing the polynomial (0 for the zero polynomial).
    pub fn v_valuation(&self) -> usize {
        self.coeffs.iter().take_while(|c| c.is_zero()).count()
    }

    /// Divides by `V^k`; the caller guarantees divisibility.
    pub fn shift_down(&self, k: usize) -> Self {
        debug_assert!(k <= self.v_valuation() || self.is_zero());
        Self::new(self.coeffs.iter().skip(k).cloned().collect())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|x| x * c).collect())
    }
}

impl Add for &VPoly {
    type Output = VPoly;
    fn add(self, rhs: &VPoly) -> VPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let get = |p: &VPoly, i: usize| p.coeffs.get(i).cloned().unwrap_or_else(Rational::zero);
        VPoly::new((0..n).map(|i| get(self, i) + get(rhs, i)).collect())
    }
}

impl Neg for &VPoly {
    type Output = VPoly;
    fn neg(self) -> VPoly {
        VPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Sub for &VPoly {
    type Output = VPoly;
    fn sub(self, rhs: &VPoly) -> VPoly {
        self + &(-rhs)
    }
}

impl Mul for &VPoly {
    type Output = VPoly;
    fn mul(self, rhs: &VPoly) -> VPoly {
        if self.is_zero() || rhs.is_zero() {
            return VPoly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        VPoly::new(out)
    }
}
