//! The action of the generators `sigma2`, `sigma4` of `H*((C*)^2)` on
//! `H*(F2)` over `Q[[q2, q4]]`, built from the 2-pointed invariants.
//!
//! Basis order is `(1, D2, D4, pt)` throughout.

use std::fmt;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::algebra::{f_series, fmt_rational, int, rat, Rational, Series, SeriesMatrix};
use crate::error::{Error, Result};
use crate::invariants::{Insertion, InvariantKey, InvariantTable};
use crate::par::Exec;
use crate::report::Report;
use crate::toric::{basis, f2_cup, f2_divisor_degree, f2_dual_basis, f2_pairing};

/// A vector in `H*(F2)[[q2, q4]]`.
pub type CohClass = Vec<Series>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Generator {
    Sigma2,
    Sigma4,
}

impl Generator {
    pub const ALL: [Generator; 2] = [Generator::Sigma2, Generator::Sigma4];

    /// Position of `D_k` in the cohomology basis.
    pub fn basis_index(self) -> usize {
        match self {
            Generator::Sigma2 => basis::D2,
            Generator::Sigma4 => basis::D4,
        }
    }

    /// Index of the ray `rho_k` (0-based).
    pub fn ray(self) -> usize {
        match self {
            Generator::Sigma2 => 1,
            Generator::Sigma4 => 3,
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Generator::Sigma2 => "sigma2",
            Generator::Sigma4 => "sigma4",
        })
    }
}

/// The intersection pairing and the dual basis `T^i`.
pub fn pairing_and_dual() -> ([[Rational; 4]; 4], [[Rational; 4]; 4]) {
    let g = f2_pairing().map(|row| row.map(int));
    (g, f2_dual_basis())
}

fn insertion(i: usize) -> Insertion {
    match i {
        basis::ONE => Insertion::One,
        basis::D2 => Insertion::D(2),
        basis::D4 => Insertion::D(4),
        _ => Insertion::Pt,
    }
}

pub fn basis_vector(i: usize, order: u32) -> CohClass {
    (0..4).map(|k| if k == i { Series::one(order) } else { Series::zero(order) }).collect()
}

/// `sigma_k * T_j = T_j D_k + sum_{beta != 0} q^beta (D_k . beta) sum_i <T_j, T_i>_beta T^i`.
fn star_column(k: Generator, j: usize, table: &InvariantTable, order: u32) -> Result<CohClass> {
    let (_, dual) = pairing_and_dual();
    let mut out = vec![Series::zero(order); 4];
    for (c, x) in out.iter_mut().zip(f2_cup(j, k.basis_index())) {
        c.add_term(0, 0, int(x));
    }
    for a in 0..=1u32 {
        for b in 0..=order {
            if (a, b) == (0, 0) || a + b > order {
                continue;
            }
            let deg = f2_divisor_degree(k.ray(), a as i64, b as i64);
            if deg == 0 {
                continue;
            }
            for (i, t_dual) in dual.iter().enumerate() {
                let key = InvariantKey { a, b, insertions: (insertion(j), insertion(i)) };
                let inv = table.get(&key)?;
                if inv.is_zero() {
                    continue;
                }
                let c = inv * int(deg);
                for (slot, t) in out.iter_mut().zip(t_dual) {
                    slot.add_term(a, b, &c * t);
                }
            }
        }
    }
    Ok(out)
}

/// Matrix of `sigma_k *` at series order `order`, using invariants from
/// `table` (which must reach degree `order`).
pub fn star_matrix_from(k: Generator, table: &InvariantTable, order: u32, exec: Exec) -> Result<SeriesMatrix> {
    if table.d_max() < order {
        return Err(Error::InvalidArgument(format!(
            "invariant table reaches degree {} but order {order} is requested",
            table.d_max()
        )));
    }
    let cols: Result<Vec<CohClass>> = exec.map((0..4).collect(), |j| star_column(k, j, table, order)).into_iter().collect();
    Ok(SeriesMatrix::from_columns(order, cols?))
}

/// Star matrix from the closed invariant table.
pub fn star_matrix(k: Generator, order: u32) -> SeriesMatrix {
    star_matrix_from(k, &InvariantTable::closed(order), order, Exec::Sequential).expect("closed table covers the order")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Factor {
    One,
    F,
    OnePlusF,
    OnePlusFSquared,
}

impl Factor {
    pub fn series(self, order: u32) -> Series {
        let f = f_series(order);
        match self {
            Factor::One => Series::one(order),
            Factor::F => f,
            Factor::OnePlusF => Series::one(order) + f,
            Factor::OnePlusFSquared => (Series::one(order) + f).pow(2),
        }
    }

    fn text(self, order: u32) -> Option<String> {
        match self {
            Factor::One => None,
            Factor::F => Some(format!("({})", f_series(order))),
            Factor::OnePlusF => Some(format!("({})", Factor::OnePlusF.series(order))),
            Factor::OnePlusFSquared => Some(format!("({})^2", Factor::OnePlusF.series(order))),
        }
    }
}

/// `coeff * q2^q2 * q4^q4 * factor * T_basis`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableTerm {
    pub coeff: Rational,
    pub q2: u32,
    pub q4: u32,
    pub factor: Factor,
    pub basis: usize,
}

fn term(coeff: Rational, q2: u32, q4: u32, factor: Factor, basis: usize) -> TableTerm {
    TableTerm { coeff, q2, q4, factor, basis }
}

/// Closed form of `sigma_k * T_j`.
pub fn table_entry(k: Generator, j: usize) -> Vec<TableTerm> {
    use basis::*;
    use Factor::*;
    let half = rat(-1, 2);
    match (k, j) {
        (Generator::Sigma2, ONE) => vec![term(int(1), 0, 0, One, D2), term(half, 0, 0, F, D4)],
        (Generator::Sigma2, D2) => vec![term(int(1), 1, 1, OnePlusF, ONE), term(half, 0, 0, F, PT)],
        (Generator::Sigma2, D4) => vec![term(int(-2), 1, 1, OnePlusF, ONE), term(int(1), 0, 0, OnePlusF, PT)],
        (Generator::Sigma2, _) => vec![term(int(1), 1, 1, OnePlusF, D4)],
        (Generator::Sigma4, ONE) => vec![term(int(1), 0, 0, OnePlusF, D4)],
        (Generator::Sigma4, D2) => vec![term(half, 1, 0, F, ONE), term(int(1), 0, 0, OnePlusF, PT)],
        (Generator::Sigma4, D4) => vec![term(int(1), 1, 0, OnePlusF, ONE), term(int(-2), 0, 0, OnePlusF, PT)],
        (Generator::Sigma4, _) => vec![term(int(1), 1, 0, One, D2), term(half, 1, 0, F, D4)],
    }
}

pub fn evaluate_terms(terms: &[TableTerm], order: u32) -> CohClass {
    let mut out = vec![Series::zero(order); 4];
    for t in terms {
        let s = t.factor.series(order).shift(t.q2, t.q4).scale(&t.coeff);
        out[t.basis] = &out[t.basis] + &s;
    }
    out
}

/// Text layout of a closed-form entry, e.g.
/// `D2 - 1/2*(2*q4 + 6*q4^2 + 20*q4^3)*D4`.
pub fn format_terms(terms: &[TableTerm], order: u32) -> String {
    let mut out = String::new();
    for (n, t) in terms.iter().enumerate() {
        let negative = t.coeff < Rational::zero();
        let mag = if negative { -t.coeff.clone() } else { t.coeff.clone() };
        match (n, negative) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        let mut parts = Vec::new();
        if !mag.is_one() {
            parts.push(fmt_rational(&mag));
        }
        let mono = crate::algebra::monomial_string(t.q2, t.q4);
        if !mono.is_empty() {
            parts.push(mono);
        }
        if let Some(s) = t.factor.text(order) {
            parts.push(s);
        }
        if t.basis != basis::ONE || parts.is_empty() {
            parts.push(basis::NAMES[t.basis].to_string());
        }
        out.push_str(&parts.join("*"));
    }
    out
}

pub fn closed_matrix(k: Generator, order: u32) -> SeriesMatrix {
    SeriesMatrix::from_columns(order, (0..4).map(|j| evaluate_terms(&table_entry(k, j), order)).collect())
}

#[derive(Clone, Debug, Serialize)]
pub struct TableRow {
    pub generator: String,
    pub input: String,
    pub text: String,
    pub components: serde_json::Map<String, serde_json::Value>,
}

/// The eight closed-form entries at series order `order`.
pub fn module_table(order: u32) -> Vec<TableRow> {
    let mut rows = Vec::new();
    for k in Generator::ALL {
        for j in 0..4 {
            let terms = table_entry(k, j);
            let v = evaluate_terms(&terms, order);
            let components = (0..4).map(|i| (basis::NAMES[i].to_string(), v[i].to_json())).collect();
            rows.push(TableRow {
                generator: k.to_string(),
                input: basis::NAMES[j].to_string(),
                text: format_terms(&terms, order),
                components,
            });
        }
    }
    rows
}

fn describe_diff(got: &[Series], want: &[Series]) -> String {
    (0..4)
        .filter(|&i| got[i] != want[i])
        .map(|i| format!("{} component: got {}, expected {}", basis::NAMES[i], got[i], want[i]))
        .collect::<Vec<_>>()
        .join("; ")
}

/// Star matrices from `table` against the eight closed-form entries.
pub fn verify_table_with(table: &InvariantTable, order: u32, exec: Exec) -> Result<Report> {
    let mut r = Report::new();
    for k in Generator::ALL {
        let m = star_matrix_from(k, table, order, exec)?;
        let c = closed_matrix(k, order);
        for j in 0..4 {
            let (got, want) = (m.column(j), c.column(j));
            let detail = if got == want { String::new() } else { describe_diff(&got, &want) };
            r.push(format!("{k}*{} at order {order}", basis::NAMES[j]), got == want, detail);
        }
    }
    Ok(r)
}

pub fn verify_table(order: u32) -> Report {
    verify_table_with(&InvariantTable::closed(order), order, Exec::Sequential).expect("closed table covers the order")
}

pub fn commutator(order: u32) -> SeriesMatrix {
    let (a, b) = (star_matrix(Generator::Sigma2, order), star_matrix(Generator::Sigma4, order));
    &(&a * &b) - &(&b * &a)
}

pub fn verify_module_axiom(order: u32) -> Report {
    let c = commutator(order);
    let bad = c.nonzero_entries();
    let mut r = Report::new();
    let detail = bad
        .iter()
        .map(|&(i, j)| format!("({}, {}) = {}", basis::NAMES[i], basis::NAMES[j], c.get(i, j)))
        .collect::<Vec<_>>()
        .join("; ");
    r.push(format!("[sigma2][sigma4] = [sigma4][sigma2] at order {order}"), bad.is_empty(), detail);
    r
}

pub fn verify_quantum_relations(order: u32) -> Report {
    let (s2, s4) = (star_matrix(Generator::Sigma2, order), star_matrix(Generator::Sigma4, order));
    let one = basis_vector(basis::ONE, order);
    let s4_1 = s4.apply(&one);
    let s44 = s4.apply(&s4_1);
    let s22 = s2.apply(&s2.apply(&one));
    let mut r = Report::new();

    let lhs = (&s2.scale(&int(2)) + &s4).apply(&s4_1);
    let want: CohClass = one.iter().map(|s| s * Series::q2(order)).collect();
    r.push("(2 sigma2 + sigma4) * (sigma4 * 1) = q2", lhs == want, describe_diff(&lhs, &want));

    let rhs: CohClass = s44.iter().map(|s| s * Series::q4(order)).collect();
    r.push("sigma2 * (sigma2 * 1) = q4 sigma4 * (sigma4 * 1)", s22 == rhs, describe_diff(&s22, &rhs));

    let sq = Factor::OnePlusFSquared;
    let closed_44 = evaluate_terms(&[term(int(1), 1, 0, sq, basis::ONE), term(int(-2), 0, 0, sq, basis::PT)], order);
    r.push("sigma4 * (sigma4 * 1) = (1+f)^2 (q2 - 2pt)", s44 == closed_44, describe_diff(&s44, &closed_44));
    let closed_22 = evaluate_terms(&[term(int(1), 1, 1, sq, basis::ONE), term(int(-2), 0, 1, sq, basis::PT)], order);
    r.push("sigma2 * (sigma2 * 1) = q4 (1+f)^2 (q2 - 2pt)", s22 == closed_22, describe_diff(&s22, &closed_22));
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::binom;
    use crate::localization::Method;

    #[test]
    fn duals() {
        let (g, dual) = pairing_and_dual();
        assert_eq!(g[1][2], int(1));
        assert_eq!(g[2][2], int(-2));
        let v = |x: [i64; 4]| x.map(int);
        assert_eq!(dual[basis::ONE], v([0, 0, 0, 1]));
        assert_eq!(dual[basis::D2], v([0, 2, 1, 0]));
        assert_eq!(dual[basis::D4], v([0, 1, 0, 0]));
        assert_eq!(dual[basis::PT], v([1, 0, 0, 0]));
        for i in 0..4 {
            for j in 0..4 {
                let s = (0..4).fold(Rational::zero(), |acc, k| acc + &g[i][k] * &dual[j][k]);
                assert_eq!(s, if i == j { int(1) } else { int(0) });
            }
        }
    }

    #[test]
    fn examples() {
        let n = 6;
        let s2 = star_matrix(Generator::Sigma2, n);
        assert_eq!(s2.get(basis::ONE, basis::D4).coeff(1, 1), int(-2));
        assert_eq!(s2.get(basis::PT, basis::D2).coeff(0, 1), int(-1));
        assert_eq!(s2.get(basis::D2, basis::ONE).coeff(0, 0), int(1));
        let s4 = star_matrix(Generator::Sigma4, n);
        assert_eq!(s4.get(basis::D2, basis::PT), &Series::q2(n));
        assert_eq!(s4.get(basis::D4, basis::PT).coeff(1, 2), int(-3));
    }

    #[test]
    fn text_layout() {
        assert_eq!(
            format_terms(&table_entry(Generator::Sigma2, basis::ONE), 3),
            "D2 - 1/2*(2*q4 + 6*q4^2 + 20*q4^3)*D4"
        );
        assert_eq!(format_terms(&table_entry(Generator::Sigma2, basis::PT), 1), "q2*q4*(1 + 2*q4)*D4");
        assert_eq!(format_terms(&table_entry(Generator::Sigma4, basis::D4), 1), "q2*(1 + 2*q4) - 2*(1 + 2*q4)*pt");
        assert_eq!(module_table(2).len(), 8);
    }

    #[test]
    fn table_and_relations() {
        for n in [1, 2, 5, 12] {
            let r = verify_table(n);
            assert!(r.ok(), "{r}");
            assert!(verify_module_axiom(n).ok());
            let r = verify_quantum_relations(n);
            assert!(r.ok(), "{r}");
        }
    }

    #[test]
    fn localized_invariants_reproduce_the_table() {
        let t = InvariantTable::localized(7, Method::Assembled, Exec::Parallel).unwrap();
        let r = verify_table_with(&t, 7, Exec::Parallel).unwrap();
        assert!(r.ok(), "{r}");
    }

    #[test]
    fn classical_limit_is_cup_product() {
        for k in Generator::ALL {
            let m = star_matrix(k, 4);
            for j in 0..4 {
                let cup = f2_cup(j, k.basis_index());
                for i in 0..4 {
                    assert_eq!(m.get(i, j).constant_term(), int(cup[i]));
                }
            }
        }
    }

    #[test]
    fn q2_column_coefficients() {
        for d in 1..=12u64 {
            let lhs = rat(d as i64, 2 * d as i64 - 1) * Rational::from_integer(binom(2 * d, d as i64));
            assert_eq!(lhs, Rational::from_integer(binom(2 * d - 2, d as i64 - 1) * 2));
        }
    }

    #[test]
    fn short_table_is_rejected() {
        assert!(star_matrix_from(Generator::Sigma2, &InvariantTable::closed(2), 3, Exec::Sequential).is_err());
    }
}
