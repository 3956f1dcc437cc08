//! Integer partitions, set-partition and cycle-type counts, and the
//! power-sum expansion of the multiset coefficient.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::{factorial, multiset};
use crate::error::{Error, Result};

/// Integer partition, parts stored in weakly decreasing order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    /// Sorts the parts; rejects zero parts.
    pub fn new(mut parts: Vec<u32>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::InvalidArgument(format!("partition with a zero part: {parts:?}")));
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Self { parts })
    }

    /// Checks that the partition has size `b`.
    pub fn of(b: u32, parts: Vec<u32>) -> Result<Self> {
        let p = Self::new(parts.clone()).map_err(|_| Error::NotAPartition { b, lambda: parts.clone() })?;
        if p.size() != b {
            return Err(Error::NotAPartition { b, lambda: parts });
        }
        Ok(p)
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn size(&self) -> u32 {
        self.parts.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// `k_N` = number of parts equal to `N`, for each `N` that occurs.
    pub fn multiplicities(&self) -> BTreeMap<u32, u32> {
        let mut m = BTreeMap::new();
        for &p in &self.parts {
            *m.entry(p).or_insert(0) += 1;
        }
        m
    }

    /// `prod_q (lambda_q - 1)!`
    pub fn hook_weight(&self) -> BigInt {
        self.parts.iter().map(|&p| factorial(p as u64 - 1)).product()
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.parts.iter().map(u32::to_string).collect();
        write!(f, "({})", s.join(","))
    }
}

/// All partitions of `b`, in reverse lexicographic order: `(b)` first and
/// `(1, ..., 1)` last.
pub fn partitions(b: u32) -> Vec<Partition> {
    fn rec(remaining: u32, max_part: u32, prefix: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if remaining == 0 {
            out.push(Partition { parts: prefix.clone() });
            return;
        }
        for p in (1..=remaining.min(max_part)).rev() {
            prefix.push(p);
            rec(remaining - p, p, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if b > 0 {
        rec(b, b, &mut Vec::new(), &mut out);
    }
    out
}

/// `z_lambda = prod_N N^{k_N} k_N!`
pub fn z_lambda(lambda: &Partition) -> BigInt {
    lambda
        .multiplicities()
        .into_iter()
        .map(|(n, k)| BigInt::from(n).pow(k) * factorial(k as u64))
        .product()
}

/// Number of unordered set partitions of `[b]` with block sizes `lambda`:
/// `b! / prod_N (N!)^{k_N} k_N!`.
pub fn count_set_partitions(b: u32, lambda: &Partition) -> Result<BigInt> {
    check_size(b, lambda)?;
    let den: BigInt = lambda
        .multiplicities()
        .into_iter()
        .map(|(n, k)| factorial(n as u64).pow(k) * factorial(k as u64))
        .product();
    Ok(factorial(b as u64) / den)
}

/// Number of permutations of `[b]` with cycle type `lambda`, `b! / z_lambda`.
///
/// Cross-checks against `prod (lambda_q - 1)! * |P(b, lambda)|`.
pub fn count_cycle_type(b: u32, lambda: &Partition) -> Result<BigInt> {
    check_size(b, lambda)?;
    let (q, r) = factorial(b as u64).div_rem(&z_lambda(lambda));
    if !r.is_zero() {
        return Err(Error::Internal(format!("z_lambda does not divide {b}! for {lambda}")));
    }
    let via_blocks = lambda.hook_weight() * count_set_partitions(b, lambda)?;
    if via_blocks != q {
        return Err(Error::Internal(format!(
            "cycle count mismatch for {lambda}: {q} vs {via_blocks}"
        )));
    }
    Ok(q)
}

fn check_size(b: u32, lambda: &Partition) -> Result<()> {
    if lambda.size() != b {
        return Err(Error::NotAPartition { b, lambda: lambda.parts.clone() });
    }
    Ok(())
}

/// Evaluates `sum_l e^{l-1}/(b-1)! * sum_{l(lambda)=l} |p(b, lambda)|` and
/// checks it against `binom(b + e - 1, e)`.
pub fn multiset_via_partitions(b: u32, e: u32) -> Result<BigInt> {
    if b == 0 || e == 0 {
        return Err(Error::InvalidArgument("b and e must be positive".into()));
    }
    let mut total = BigInt::zero();
    for lambda in partitions(b) {
        let l = lambda.len() as u32;
        total += BigInt::from(e).pow(l - 1) * count_cycle_type(b, &lambda)?;
    }
    let (q, r) = total.div_rem(&factorial(b as u64 - 1));
    let expected = multiset(b as u64, e as u64);
    if !r.is_zero() || q != expected {
        return Err(Error::Internal(format!(
            "multiset identity failed at b={b}, e={e}: {total}/({}!) vs {expected}",
            b - 1
        )));
    }
    Ok(q)
}

/// All set partitions of `{0, .., b-1}`, each block a bitmask, blocks sorted
/// by their least element. Enumerated from restricted growth strings.
pub fn set_partitions(b: u32) -> Vec<Vec<u32>> {
    assert!(b <= 16, "set partition enumeration is bounded to b <= 16");
    fn rec(i: u32, b: u32, blocks: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i == b {
            out.push(blocks.clone());
            return;
        }
        for k in 0..blocks.len() {
            blocks[k] |= 1 << i;
            rec(i + 1, b, blocks, out);
            blocks[k] &= !(1 << i);
        }
        blocks.push(1 << i);
        rec(i + 1, b, blocks, out);
        blocks.pop();
    }
    let mut out = Vec::new();
    rec(0, b, &mut Vec::new(), &mut out);
    out
}

/// Block-size partition of a set partition given as bitmasks.
pub fn block_type(blocks: &[u32]) -> Partition {
    Partition::new(blocks.iter().map(|m| m.count_ones()).collect()).expect("nonempty blocks")
}

/// Number of permutations of `[b]` of each cycle type, by enumerating `S_b`.
/// Intended as a brute-force oracle (`b <= 8`).
pub fn cycle_type_census(b: u32) -> BTreeMap<Partition, u64> {
    assert!(b <= 9, "permutation enumeration is bounded to b <= 9");
    let n = b as usize;
    let mut perm: Vec<usize> = (0..n).collect();
    let mut census = BTreeMap::new();
    loop {
        let mut seen = vec![false; n];
        let mut lens = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            let (mut len, mut x) = (0, s);
            while !seen[x] {
                seen[x] = true;
                x = perm[x];
                len += 1;
            }
            lens.push(len);
        }
        if n > 0 {
            *census.entry(Partition::new(lens).unwrap()).or_insert(0) += 1;
        }
        // next lexicographic permutation
        let Some(i) = (1..n).rev().find(|&i| perm[i - 1] < perm[i]) else { break };
        let j = (i..n).rev().find(|&j| perm[j] > perm[i - 1]).unwrap();
        perm.swap(i - 1, j);
        perm[i..].reverse();
    }
    census
}

/// `sum_{lambda |- b} z_lambda^{-1} e^{l(lambda)}`, i.e. `h_b(1, .., 1)` with
/// `e` ones. Returned exactly as a rational.
pub fn h_at_ones(b: u32, e: u32) -> num_rational::BigRational {
    partitions(b)
        .iter()
        .map(|l| {
            num_rational::BigRational::new(BigInt::from(e).pow(l.len() as u32), z_lambda(l))
        })
        .fold(num_rational::BigRational::zero(), |a, x| a + x)
}

pub fn bell(b: u32) -> BigInt {
    // Bell triangle
    let mut row = vec![BigInt::one()];
    for _ in 0..b {
        let mut next = vec![row.last().unwrap().clone()];
        for x in &row {
            let v = next.last().unwrap() + x;
            next.push(v);
        }
        row = next;
    }
    row[0].clone()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(parts: &[u32]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    #[test]
    fn partitions_examples() {
        assert_eq!(partitions(3), vec![p(&[3]), p(&[2, 1]), p(&[1, 1, 1])]);
        assert_eq!(partitions(4).len(), 5);
        assert_eq!(partitions(1), vec![p(&[1])]);
        let counts: Vec<usize> = (1..=10).map(|b| partitions(b).len()).collect();
        assert_eq!(counts, vec![1, 2, 3, 5, 7, 11, 15, 22, 30, 42]);
    }

    #[test]
    fn z_lambda_examples() {
        assert_eq!(z_lambda(&p(&[2, 1, 1])), BigInt::from(4));
        assert_eq!(z_lambda(&p(&[1; 5])), factorial(5));
        assert_eq!(z_lambda(&p(&[6])), BigInt::from(6));
    }

    #[test]
    fn set_partition_counts_match_brute_force() {
        assert_eq!(count_set_partitions(4, &p(&[2, 1, 1])).unwrap(), BigInt::from(6));
        assert_eq!(count_set_partitions(2, &p(&[1, 1])).unwrap(), BigInt::from(1));
        assert_eq!(count_set_partitions(3, &p(&[2, 1])).unwrap(), BigInt::from(3));
        for b in 1..=8 {
            let mut census: BTreeMap<Partition, u64> = BTreeMap::new();
            for sp in set_partitions(b) {
                *census.entry(block_type(&sp)).or_insert(0) += 1;
            }
            for lambda in partitions(b) {
                let brute = census.get(&lambda).copied().unwrap_or(0);
                assert_eq!(count_set_partitions(b, &lambda).unwrap(), BigInt::from(brute), "{lambda}");
            }
        }
    }

    #[test]
    fn cycle_type_counts_match_brute_force() {
        assert_eq!(count_cycle_type(4, &p(&[2, 1, 1])).unwrap(), BigInt::from(6));
        assert_eq!(count_cycle_type(3, &p(&[3])).unwrap(), BigInt::from(2));
        assert_eq!(count_cycle_type(3, &p(&[2, 1])).unwrap(), BigInt::from(3));
        for b in 1..=8 {
            let census = cycle_type_census(b);
            for lambda in partitions(b) {
                assert_eq!(
                    count_cycle_type(b, &lambda).unwrap(),
                    BigInt::from(census[&lambda]),
                    "{lambda}"
                );
            }
        }
    }

    #[test]
    fn wrong_size_is_rejected() {
        assert!(matches!(
            count_set_partitions(5, &p(&[2, 1])),
            Err(Error::NotAPartition { b: 5, .. })
        ));
        assert!(Partition::of(4, vec![2, 1]).is_err());
        assert!(Partition::new(vec![2, 0]).is_err());
    }

    #[test]
    fn closures_bell_and_factorial() {
        for b in 1..=10 {
            let sp: BigInt = partitions(b).iter().map(|l| count_set_partitions(b, l).unwrap()).sum();
            let cy: BigInt = partitions(b).iter().map(|l| count_cycle_type(b, l).unwrap()).sum();
            assert_eq!(sp, bell(b), "b = {b}");
            assert_eq!(cy, factorial(b as u64), "b = {b}");
        }
        assert_eq!(bell(5), BigInt::from(52));
    }

    #[test]
    fn multiset_identity() {
        assert_eq!(multiset_via_partitions(3, 2).unwrap(), BigInt::from(6));
        assert_eq!(multiset_via_partitions(2, 3).unwrap(), BigInt::from(4));
        for e in 1..=10 {
            assert_eq!(multiset_via_partitions(1, e).unwrap(), BigInt::from(1));
        }
        for b in 1..=10 {
            for e in 1..=10 {
                assert_eq!(
                    multiset_via_partitions(b, e).unwrap(),
                    crate::algebra::binom((b + e - 1) as u64, e as i64)
                );
            }
        }
    }

    #[test]
    fn homogeneous_symmetric_function_at_ones() {
        for b in 1..=10 {
            for e in 1..=10 {
                let expected = crate::algebra::binom((e + b - 1) as u64, b as i64);
                assert_eq!(h_at_ones(b, e), num_rational::BigRational::from_integer(expected));
            }
        }
    }
}
