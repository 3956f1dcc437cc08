//! Intersection calculus on the Losev-Manin space `LM(b)` of chains with two
//! heavy points `n, n'` and `b` light points.
//!
//! A monomial is `D_pi * psi_n^a * psi_n'^c` where `pi` is a set partition of
//! the light points (the product of the diagonals `D_B` over its blocks).
//! Products that would produce a light-point psi class are kept with the
//! `hat` flag set; they integrate to zero against heavy-psi monomials.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::algebra::{binom, factorial, int, multiset, Rational};
use crate::combinatorics::{block_type, set_partitions, Partition};
use crate::error::{Error, Result};
use crate::par::Exec;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct LMMonomial {
    /// Blocks as bitmasks over the light points, sorted.
    blocks: Vec<u32>,
    pub a: u32,
    pub c: u32,
    pub hat: bool,
}

impl LMMonomial {
    pub fn blocks(&self) -> &[u32] {
        &self.blocks
    }

    pub fn n_blocks(&self) -> usize {
        self.blocks.len()
    }

    /// Codimension of the monomial: `sum (|B| - 1) + a + c`.
    pub fn codim(&self, b: u32) -> u32 {
        b - self.blocks.len() as u32 + self.a + self.c
    }

    fn identity(b: u32) -> Self {
        Self { blocks: (0..b).map(|i| 1 << i).collect(), a: 0, c: 0, hat: false }
    }

    fn times(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.a += other.a;
        out.c += other.c;
        out.hat |= other.hat;
        for &j in other.blocks.iter().filter(|m| m.count_ones() > 1) {
            out.times_diagonal(j);
        }
        out
    }

    /// Multiplies by `D_J`. Meeting a block in two or more points creates a
    /// hat-psi factor.
    fn times_diagonal(&mut self, j: u32) {
        let (touched, rest): (Vec<u32>, Vec<u32>) = self.blocks.iter().partition(|&&blk| blk & j != 0);
        if touched.iter().any(|&blk| (blk & j).count_ones() >= 2) {
            self.hat = true;
        }
        let merged = touched.iter().fold(0, |acc, &blk| acc | blk);
        let mut blocks = rest;
        blocks.push(merged);
        blocks.sort_unstable();
        self.blocks = blocks;
    }
}

impl fmt::Display for LMMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for &blk in self.blocks.iter().filter(|m| m.count_ones() > 1) {
            let idx: String = (0..32).filter(|i| blk & (1 << i) != 0).map(|i| (i + 1).to_string()).collect();
            parts.push(format!("D{idx}"));
        }
        if self.a > 0 {
            parts.push(if self.a == 1 { "psi".into() } else { format!("psi^{}", self.a) });
        }
        if self.c > 0 {
            parts.push(if self.c == 1 { "psi'".into() } else { format!("psi'^{}", self.c) });
        }
        if self.hat {
            parts.push("[hat]".into());
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("*"))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LMClass {
    b: u32,
    terms: BTreeMap<LMMonomial, Rational>,
}

impl LMClass {
    pub fn zero(b: u32) -> Self {
        assert!(b <= 31, "at most 31 light points");
        Self { b, terms: BTreeMap::new() }
    }

    pub fn one(b: u32) -> Self {
        Self::monomial(b, LMMonomial::identity(b), Rational::one())
    }

    fn monomial(b: u32, m: LMMonomial, c: Rational) -> Self {
        let mut out = Self::zero(b);
        out.add_term(m, c);
        out
    }

    /// `D_J` for a subset `J` of `{1..b}` given 1-based.
    pub fn diagonal(b: u32, j: &[u32]) -> Result<Self> {
        let mut mask = 0u32;
        for &i in j {
            if i == 0 || i > b {
                return Err(Error::InvalidArgument(format!("light point {i} out of range 1..={b}")));
            }
            mask |= 1 << (i - 1);
        }
        let mut m = LMMonomial::identity(b);
        if mask.count_ones() > 1 {
            m.times_diagonal(mask);
        }
        Ok(Self::monomial(b, m, Rational::one()))
    }

    /// `D_pi` for a set partition given as bitmasks.
    pub fn partition_class(b: u32, blocks: &[u32]) -> Self {
        let mut m = LMMonomial::identity(b);
        for &blk in blocks.iter().filter(|m| m.count_ones() > 1) {
            m.times_diagonal(blk);
        }
        Self::monomial(b, m, Rational::one())
    }

    /// `D_lambda`: the sum of `D_pi` over set partitions of block type `lambda`.
    pub fn d_lambda(b: u32, lambda: &Partition) -> Result<Self> {
        if lambda.size() != b {
            return Err(Error::NotAPartition { b, lambda: lambda.parts().to_vec() });
        }
        let mut out = Self::zero(b);
        for sp in set_partitions(b) {
            if &block_type(&sp) == lambda {
                out = out.add(&Self::partition_class(b, &sp))?;
            }
        }
        Ok(out)
    }

    pub fn psi(b: u32, a: u32, c: u32) -> Self {
        let mut m = LMMonomial::identity(b);
        m.a = a;
        m.c = c;
        Self::monomial(b, m, Rational::one())
    }

    pub fn b(&self) -> u32 {
        self.b
    }

    pub fn terms(&self) -> impl Iterator<Item = (&LMMonomial, &Rational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Whether any term carries a discarded hat-psi factor.
    pub fn hat_dropped(&self) -> bool {
        self.terms.keys().any(|m| m.hat)
    }

    fn add_term(&mut self, m: LMMonomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(m).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    fn check_b(&self, other: &Self) -> Result<()> {
        if self.b != other.b {
            return Err(Error::LightPointMismatch { left: self.b, right: other.b });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_b(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero(self.b);
        for (m, x) in &self.terms {
            out.add_term(m.clone(), x * c);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_b(other)?;
        let mut out = Self::zero(self.b);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.times(m2), c1 * c2);
            }
        }
        Ok(out)
    }

    /// Drops every term of codimension above `max_codim`.
    pub fn truncate(&self, max_codim: u32) -> Self {
        let mut out = self.clone();
        out.terms.retain(|m, _| m.codim(self.b) <= max_codim);
        out
    }

    /// Each `D_pi psi_n^a psi_n'^c` with `l` blocks reduces to `LM(l)`.
    pub fn integrate(&self) -> Rational {
        self.terms
            .iter()
            .filter(|(m, _)| !m.hat)
            .map(|(m, c)| c * Rational::from_integer(psi_integral(m.n_blocks() as u32, m.a, m.c)))
            .fold(Rational::zero(), |acc, x| acc + x)
    }

    /// Relabels light point `i` as `perm[i]`.
    pub fn relabel(&self, perm: &[u32]) -> Self {
        let mut out = Self::zero(self.b);
        for (m, c) in &self.terms {
            let mut blocks: Vec<u32> = m
                .blocks
                .iter()
                .map(|&blk| (0..self.b).filter(|&i| blk & (1 << i) != 0).fold(0, |acc, i| acc | (1 << perm[i as usize])))
                .collect();
            blocks.sort_unstable();
            out.add_term(LMMonomial { blocks, ..m.clone() }, c.clone());
        }
        out
    }
}

impl fmt::Display for LMClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(m, c)| format!("({c})*{m}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// `int_{LM(b)} psi_n^a psi_n'^c`.
pub fn psi_integral(b: u32, a: u32, c: u32) -> BigInt {
    if b == 0 || a + c != b - 1 {
        return BigInt::zero();
    }
    binom((b - 1) as u64, c as i64)
}

/// `int D_lambda psi_n^a psi_n'^c`.
pub fn integrate_d_lambda(b: u32, lambda: &Partition, a: u32, c: u32) -> Result<Rational> {
    Ok(LMClass::d_lambda(b, lambda)?.mul(&LMClass::psi(b, a, c))?.integrate())
}

/// `Delta_j = sum_{i<j} D_ij` (1-based `j`).
pub fn delta(b: u32, j: u32) -> Result<LMClass> {
    let mut out = LMClass::zero(b);
    for i in 1..j {
        out = out.add(&LMClass::diagonal(b, &[i, j])?)?;
    }
    Ok(out)
}

/// `prod_{j=2}^b (1 + t Delta_j)`.
pub fn delta_product(b: u32, t: &Rational) -> Result<LMClass> {
    let mut acc = LMClass::one(b);
    for j in 2..=b {
        let factor = LMClass::one(b).add(&delta(b, j)?.scale(t))?;
        acc = acc.mul(&factor)?;
    }
    Ok(acc)
}

/// `sum_lambda prod_q (lambda_q - 1)! D_lambda`.
pub fn expansion_rhs(b: u32) -> LMClass {
    let mut out = LMClass::zero(b);
    for sp in set_partitions(b) {
        let w: BigInt = sp.iter().map(|blk| factorial(blk.count_ones() as u64 - 1)).product();
        out = out.add(&LMClass::partition_class(b, &sp).scale(&Rational::from_integer(w))).unwrap();
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpansionReport {
    pub b: u32,
    pub classes_equal: bool,
    pub integrals_equal: bool,
    pub hat_terms: bool,
}

impl ExpansionReport {
    pub fn ok(&self) -> bool {
        self.classes_equal && self.integrals_equal && !self.hat_terms
    }
}

/// Expands `prod (1 + Delta_j)` and compares it with `expansion_rhs`, both
/// termwise and after integrating against every `psi_n^a psi_n'^c`.
pub fn expansion_check(b: u32) -> Result<ExpansionReport> {
    if b == 0 || b > 10 {
        return Err(Error::InvalidArgument(format!("expansion check needs 1 <= b <= 10, got {b}")));
    }
    let lhs = delta_product(b, &Rational::one())?;
    let rhs = expansion_rhs(b);
    let mut integrals_equal = true;
    for k in 0..b {
        for c in 0..=k {
            let psi = LMClass::psi(b, k - c, c);
            if lhs.mul(&psi)?.integrate() != rhs.mul(&psi)?.integrate() {
                integrals_equal = false;
            }
        }
    }
    Ok(ExpansionReport { b, classes_equal: lhs == rhs, integrals_equal, hat_terms: lhs.hat_dropped() })
}

/// A base-vertex contribution at `V = 0`: `value * W^w_exp`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BaseContribution {
    pub value: Rational,
    pub w_exp: i64,
}

/// Table of `int prod_{j=2}^b (1 - Delta_j) psi_n^{k-m} psi_n'^m` for
/// `0 <= m <= k < b`, indexed `[k][m]`.
#[derive(Clone, Debug)]
pub struct BaseIntegrals {
    b: u32,
    table: Vec<Vec<Rational>>,
}

impl BaseIntegrals {
    pub fn new(b: u32) -> Result<Self> {
        if b == 0 {
            return Err(Error::InvalidArgument("b must be positive".into()));
        }
        let p = delta_product(b, &int(-1))?;
        let table = (0..b)
            .map(|k| {
                (0..=k)
                    .map(|m| p.mul(&LMClass::psi(b, k - m, m)).map(|x| x.integrate()))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { b, table })
    }

    fn sign(&self) -> Rational {
        if (self.b - 1) % 2 == 0 {
            int(1)
        } else {
            int(-1)
        }
    }

    fn pow(x: u32, k: u32) -> Rational {
        Rational::from_integer(BigInt::from(x).pow(k))
    }

    /// Interior base vertex between edges of degrees `e` and `e'`.
    ///
    /// Expands `1/(W + e psi_n)`, `1/(W + e' psi_n')` and `1/(W - Delta_j)` as
    /// finite geometric series at `W = 1`; only the top-degree part survives
    /// integration, and it carries `W^{-(b-1)}`.
    pub fn interior_brute(&self, e: u32, e2: u32) -> BaseContribution {
        let b = self.b;
        let mut integral = Rational::zero();
        for k in 0..b {
            let mut inner = Rational::zero();
            for m in 0..=k {
                inner += Self::pow(e, k - m) * Self::pow(e2, m) * &self.table[k as usize][m as usize];
            }
            if k % 2 == 1 {
                inner = -inner;
            }
            integral += inner;
        }
        let pre = self.sign()
            * Rational::from_integer(BigInt::from(e) * e2 * (BigInt::one() << (2 * b - 1)))
            / Rational::from_integer(factorial(b as u64));
        BaseContribution { value: pre * integral, w_exp: (b as i64 - 4) - (b as i64 - 1) }
    }

    /// Base vertex at the end of the chain, attached to one edge of degree `e`.
    pub fn end_brute(&self, e: u32) -> BaseContribution {
        let b = self.b;
        let mut integral = Rational::zero();
        for k in 0..b {
            let term = Self::pow(e, k) * &self.table[k as usize][0];
            integral += if k % 2 == 1 { -term } else { term };
        }
        let pre = -self.sign() * Rational::from_integer(BigInt::from(e) * (BigInt::one() << (2 * b - 1)))
            / Rational::from_integer(factorial(b as u64));
        BaseContribution { value: pre * integral, w_exp: (b as i64 - 3) - (b as i64 - 1) }
    }
}

pub fn cont_b_interior_closed(b: u32, e: u32, e2: u32) -> BaseContribution {
    let v = BigInt::from(e) * e2 * (BigInt::one() << (2 * b - 1)) * multiset(b as u64, (e + e2) as u64);
    BaseContribution { value: Rational::new(v, BigInt::from(b)), w_exp: -3 }
}

pub fn cont_b_end_closed(b: u32, e: u32) -> BaseContribution {
    let v = -(BigInt::from(e) * (BigInt::one() << (2 * b)) * multiset(b as u64, e as u64));
    BaseContribution { value: Rational::new(v, BigInt::from(2 * b)), w_exp: -2 }
}

fn check_args(b: u32, es: &[u32]) -> Result<()> {
    if b == 0 || es.contains(&0) {
        return Err(Error::InvalidArgument("b and edge degrees must be positive".into()));
    }
    Ok(())
}

/// `Cont_B` of an interior base vertex at `V = 0`, brute force checked
/// against the closed form.
pub fn cont_b_interior(b: u32, e: u32, e2: u32) -> Result<BaseContribution> {
    check_args(b, &[e, e2])?;
    let brute = BaseIntegrals::new(b)?.interior_brute(e, e2);
    let closed = cont_b_interior_closed(b, e, e2);
    if brute != closed {
        return Err(Error::Internal(format!(
            "Cont_B interior mismatch at b={b}, e={e}, e'={e2}: {brute:?} vs {closed:?}"
        )));
    }
    Ok(closed)
}

/// `Cont_B` of an end base vertex at `V = 0`.
pub fn cont_b_end(b: u32, e: u32) -> Result<BaseContribution> {
    check_args(b, &[e])?;
    let brute = BaseIntegrals::new(b)?.end_brute(e);
    let closed = cont_b_end_closed(b, e);
    if brute != closed {
        return Err(Error::Internal(format!("Cont_B end mismatch at b={b}, e={e}: {brute:?} vs {closed:?}")));
    }
    Ok(closed)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridMismatch {
    pub b: u32,
    pub e: u32,
    pub e2: Option<u32>,
    pub brute: BaseContribution,
    pub closed: BaseContribution,
}

/// Brute force against closed form for all `b <= b_max`, `e, e' <= e_max`,
/// both vertex kinds. Returns the number of cases and the mismatches.
pub fn cont_b_grid(b_max: u32, e_max: u32, exec: Exec) -> Result<(usize, Vec<GridMismatch>)> {
    let tables = exec.map((1..=b_max).collect(), BaseIntegrals::new);
    let tables = tables.into_iter().collect::<Result<Vec<_>>>()?;
    let mut cases = Vec::new();
    for t in &tables {
        for e in 1..=e_max {
            cases.push((t, e, None));
            for e2 in 1..=e_max {
                cases.push((t, e, Some(e2)));
            }
        }
    }
    let n = cases.len();
    let results = exec.map(cases, |(t, e, e2)| match e2 {
        Some(e2) => (t.b, e, Some(e2), t.interior_brute(e, e2), cont_b_interior_closed(t.b, e, e2)),
        None => (t.b, e, None, t.end_brute(e), cont_b_end_closed(t.b, e)),
    });
    let mismatches = results
        .into_iter()
        .filter(|r| r.3 != r.4)
        .map(|(b, e, e2, brute, closed)| GridMismatch { b, e, e2, brute, closed })
        .collect();
    Ok((n, mismatches))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::count_set_partitions;
    use proptest::prelude::*;

    fn p(parts: &[u32]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    #[test]
    fn psi_integrals() {
        assert_eq!(psi_integral(3, 1, 1), BigInt::from(2));
        assert_eq!(psi_integral(4, 3, 0), BigInt::from(1));
        assert_eq!(psi_integral(3, 2, 2), BigInt::from(0));
        assert_eq!(psi_integral(1, 0, 0), BigInt::from(1));
    }

    #[test]
    fn diagonal_products() {
        let d = |b, j: &[u32]| LMClass::diagonal(b, j).unwrap();
        assert_eq!(d(3, &[1, 2]).mul(&d(3, &[2, 3])).unwrap(), d(3, &[1, 2, 3]));
        let sq = d(2, &[1, 2]).mul(&d(2, &[1, 2])).unwrap();
        assert!(sq.hat_dropped());
        assert_eq!(sq.integrate(), Rational::zero());
        let disjoint = d(4, &[1, 2]).mul(&d(4, &[3, 4])).unwrap();
        assert!(!disjoint.hat_dropped());
        assert_eq!(disjoint.terms().next().unwrap().0.blocks(), &[0b0011, 0b1100]);
        assert!(matches!(d(2, &[1, 2]).mul(&d(3, &[1, 2])), Err(Error::LightPointMismatch { .. })));
        // a cycle of diagonals produces a hat term in any order
        let cyc1 = d(4, &[1, 2]).mul(&d(4, &[3, 4])).unwrap().mul(&d(4, &[1, 3])).unwrap().mul(&d(4, &[2, 4])).unwrap();
        let cyc2 = d(4, &[2, 4]).mul(&d(4, &[1, 3])).unwrap().mul(&d(4, &[3, 4])).unwrap().mul(&d(4, &[1, 2])).unwrap();
        assert!(cyc1.hat_dropped() && cyc2.hat_dropped());
    }

    #[test]
    fn integrals() {
        assert_eq!(integrate_d_lambda(3, &p(&[2, 1]), 0, 1).unwrap(), int(3));
        assert_eq!(integrate_d_lambda(4, &p(&[4]), 0, 0).unwrap(), int(1));
        for b in 1..=7 {
            assert_eq!(LMClass::diagonal(b, &(1..=b).collect::<Vec<_>>()).unwrap().integrate(), int(1));
        }
        assert!(integrate_d_lambda(3, &p(&[2, 1, 1]), 0, 0).is_err());
    }

    #[test]
    fn dimension_filter() {
        for b in 1..=5 {
            for sp in set_partitions(b) {
                for a in 0..b {
                    for c in 0..b {
                        let x = LMClass::partition_class(b, &sp).mul(&LMClass::psi(b, a, c)).unwrap();
                        let m = x.terms().next().unwrap().0.clone();
                        if m.codim(b) != b - 1 {
                            assert_eq!(x.integrate(), Rational::zero());
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn d_lambda_integrals_count_set_partitions() {
        for b in 1..=6 {
            for lambda in crate::combinatorics::partitions(b) {
                let l = lambda.len() as u32;
                for c in 0..l {
                    let v = integrate_d_lambda(b, &lambda, l - 1 - c, c).unwrap();
                    let expected = count_set_partitions(b, &lambda).unwrap() * binom((l - 1) as u64, c as i64);
                    assert_eq!(v, Rational::from_integer(expected));
                }
            }
        }
    }

    #[test]
    fn expansion_identity() {
        for b in 1..=6 {
            let r = expansion_check(b).unwrap();
            assert!(r.ok(), "{r:?}");
        }
        assert_eq!(expansion_rhs(2), LMClass::one(2).add(&LMClass::diagonal(2, &[1, 2]).unwrap()).unwrap());
    }

    #[test]
    fn cont_b_examples() {
        assert_eq!(cont_b_interior(1, 1, 1).unwrap(), BaseContribution { value: int(2), w_exp: -3 });
        assert_eq!(cont_b_interior(2, 1, 1).unwrap().value, int(12));
        assert_eq!(cont_b_interior(1, 2, 3).unwrap().value, int(12));
        assert_eq!(cont_b_end(1, 1).unwrap(), BaseContribution { value: int(-2), w_exp: -2 });
        assert_eq!(cont_b_end(1, 2).unwrap().value, int(-4));
        assert_eq!(cont_b_end(2, 1).unwrap().value, int(-8));
        assert_eq!(cont_b_end(3, 2).unwrap().value, int(-128));
        assert!(cont_b_end(0, 1).is_err());
    }

    #[test]
    fn cont_b_grid_matches_closed_forms() {
        for exec in [Exec::Sequential, Exec::Parallel] {
            let (n, bad) = cont_b_grid(6, 4, exec).unwrap();
            assert_eq!(n, 6 * (4 + 16));
            assert!(bad.is_empty(), "{bad:?}");
        }
    }

    proptest! {
        #[test]
        fn integration_is_relabeling_invariant(
            b in 2u32..6,
            seed in proptest::collection::vec(0u32..100, 6),
            which in 0usize..52,
            c in 0u32..5,
        ) {
            let sps = set_partitions(b);
            let sp = &sps[which % sps.len()];
            let blocks = sp.len() as u32;
            let c = c % blocks;
            let x = LMClass::partition_class(b, sp).mul(&LMClass::psi(b, blocks - 1 - c, c)).unwrap();
            let mut perm: Vec<u32> = (0..b).collect();
            perm.sort_by_key(|&i| (seed[i as usize], i));
            let y = x.relabel(&perm);
            prop_assert_eq!(x.integrate(), y.integrate());
        }

        #[test]
        fn multiplication_is_commutative(b in 2u32..6, i in 1u32..6, j in 1u32..6, k in 1u32..6, l in 1u32..6) {
            let clamp = |x: u32| (x - 1) % b + 1;
            let x = LMClass::diagonal(b, &[clamp(i), clamp(j)]).unwrap().add(&LMClass::psi(b, 1, 0)).unwrap();
            let y = LMClass::diagonal(b, &[clamp(k), clamp(l)]).unwrap();
            prop_assert_eq!(x.mul(&y).unwrap(), y.mul(&x).unwrap());
        }
    }
}
