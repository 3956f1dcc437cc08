use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::Error;

/// Exact rational number. Always reduced with a positive denominator.
pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// Binomial coefficient with the convention `binom(n, k) = 0` outside `0..=n`.
pub fn binom(n: u64, k: i64) -> BigInt {
    if k < 0 || k as u64 > n {
        return BigInt::zero();
    }
    let k = (k as u64).min(n - k as u64);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Generalized binomial `r (r-1) ... (r-k+1) / k!` for a rational top.
pub fn binom_rational(r: &Rational, k: u64) -> Rational {
    let mut acc = Rational::one();
    for i in 0..k {
        acc *= r - int(i as i64);
        acc /= int(i as i64 + 1);
    }
    acc
}

/// Multiset coefficient: the number of degree-`e` monomials in `b` variables.
pub fn multiset(b: u64, e: u64) -> BigInt {
    if b == 0 {
        return if e == 0 { BigInt::one() } else { BigInt::zero() };
    }
    binom(b + e - 1, e as i64)
}

/// `p/q`, or just `p` for integers.
pub fn fmt_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn parse_rational(s: &str) -> Result<Rational, Error> {
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    let (num, den) = match s.trim().split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s.trim(), "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    let r = Rational::new(num, den);
    debug_assert!(r.denom().is_positive());
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binom_examples() {
        assert_eq!(binom(4, 2), BigInt::from(6));
        assert_eq!(binom(0, 0), BigInt::from(1));
        assert_eq!(binom(3, 5), BigInt::from(0));
        assert_eq!(binom(3, -1), BigInt::from(0));
    }

    #[test]
    fn binom_rational_examples() {
        let half = rat(-1, 2);
        assert_eq!(binom_rational(&half, 1), rat(-1, 2));
        assert_eq!(binom_rational(&half, 2), rat(3, 8));
        assert_eq!(binom_rational(&half, 0), int(1));
        assert_eq!(binom_rational(&half, 3) * int(-64), int(20));
    }

    #[test]
    fn central_binomial_convolution() {
        for n in 0..=20u64 {
            let s: BigInt = (0..=n)
                .map(|k| binom(2 * k, k as i64) * binom(2 * (n - k), (n - k) as i64))
                .sum();
            assert_eq!(s, BigInt::from(4).pow(n as u32), "n = {n}");
        }
    }

    #[test]
    fn central_binomial_via_negative_half() {
        for n in 0..=20u64 {
            let lhs = Rational::from_integer(binom(2 * n, n as i64));
            let rhs = Rational::from_integer(BigInt::from(-4).pow(n as u32)) * binom_rational(&rat(-1, 2), n);
            assert_eq!(lhs, rhs, "n = {n}");
        }
    }

    #[test]
    fn rational_formatting_roundtrip() {
        for r in [rat(-3, 2), int(7), rat(0, 5), rat(10, -4)] {
            assert_eq!(parse_rational(&fmt_rational(&r)).unwrap(), r);
        }
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }
}
