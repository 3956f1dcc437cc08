//! The Batyrev ring of `F2`,
//! `Q[[q2, q4]][x2, x4] / (x2^2 - q4 x4^2, (2 x2 + x4) x4 - q2)`,
//! as a module over `Q[sigma2, sigma4]` (acting by `x2`, `x4`), and its
//! isomorphism with the quantum module.
//!
//! Elements are written in the basis `(1, x2, x4, x2 x4)`.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::algebra::{int, rat, Series, SeriesMatrix};
use crate::error::{Error, Result};
use crate::quantum_module::{basis_vector, star_matrix, Factor, Generator};
use crate::report::Report;

pub const BASIS: [(u32, u32); 4] = [(0, 0), (1, 0), (0, 1), (1, 1)];
pub const BASIS_NAMES: [&str; 4] = ["1", "x2", "x4", "x2*x4"];

/// A polynomial in `x2`, `x4` with truncated series coefficients, keyed by
/// the exponent pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BatPoly {
    order: u32,
    terms: BTreeMap<(u32, u32), Series>,
}

impl BatPoly {
    pub fn zero(order: u32) -> Self {
        Self { order, terms: BTreeMap::new() }
    }

    pub fn monomial(order: u32, i: u32, j: u32, c: Series) -> Self {
        let mut p = Self::zero(order);
        p.add_term(i, j, c);
        p
    }

    pub fn x(order: u32, i: u32, j: u32) -> Self {
        Self::monomial(order, i, j, Series::one(order))
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &Series)> {
        self.terms.iter()
    }

    pub fn coeff(&self, i: u32, j: u32) -> Series {
        self.terms.get(&(i, j)).cloned().unwrap_or_else(|| Series::zero(self.order))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, i: u32, j: u32, c: Series) {
        let c = c.with_order(self.order);
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry((i, j)).or_insert_with(|| Series::zero(self.order));
        *slot = &*slot + &c;
        if slot.is_zero() {
            self.terms.remove(&(i, j));
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&(i, j), c) in &other.terms {
            out.add_term(i, j, c.clone());
        }
        out
    }

    pub fn scale(&self, s: &Series) -> Self {
        let mut out = Self::zero(self.order);
        for (&(i, j), c) in &self.terms {
            out.add_term(i, j, c * s);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.order);
        for (&(i1, j1), c1) in &self.terms {
            for (&(i2, j2), c2) in &other.terms {
                out.add_term(i1 + i2, j1 + j2, c1 * c2);
            }
        }
        out
    }

    pub fn from_element(e: &[Series]) -> Self {
        let order = e[0].order();
        let mut p = Self::zero(order);
        for (&(i, j), c) in BASIS.iter().zip(e) {
            p.add_term(i, j, c.clone());
        }
        p
    }
}

/// `x2^2 - q4 x4^2` and `(2 x2 + x4) x4 - q2`.
pub fn relations(order: u32) -> [BatPoly; 2] {
    let one = Series::one(order);
    let mut r1 = BatPoly::x(order, 2, 0);
    r1.add_term(0, 2, -Series::q4(order));
    let mut r2 = BatPoly::monomial(order, 1, 1, one.scale(&int(2)));
    r2.add_term(0, 2, one);
    r2.add_term(0, 0, -Series::q2(order));
    [r1, r2]
}

/// Coefficient `c` in `x2^2 x4 = c (x4 - 2 x2)`, solved from
/// `(1 - 4 q4) x2^2 x4 = q2 q4 (x4 - 2 x2)`.
pub fn cubic_coefficient(order: u32) -> Series {
    let unit = Series::one(order) - Series::q4(order).scale(&int(4));
    let inv = unit.invert().expect("1 - 4 q4 is a unit");
    Series::monomial(order, 1, 1, int(1)) * inv
}

/// Reduces to the basis `(1, x2, x4, x2 x4)`.
///
/// Always rewrites the non-basis monomial that is largest in
/// `(deg x2, deg x4)`: `x2^2 x4` first when it divides, then `x2^2`, then
/// `x4^2`.
pub fn normal_form(p: &BatPoly) -> Result<Vec<Series>> {
    let order = p.order();
    let cubic = cubic_coefficient(order);
    let q2 = Series::q2(order);
    let q4 = Series::q4(order);
    let q2q4 = &q2 * &q4;
    let mut work = p.clone();
    let mut steps = 0usize;
    while let Some((&(i, j), c)) = work.terms.iter().rev().find(|(k, _)| !BASIS.contains(k)) {
        let c = c.clone();
        steps += 1;
        if steps > 100_000 {
            return Err(Error::Internal("normal form rewriting did not terminate".into()));
        }
        work.terms.remove(&(i, j));
        if i >= 2 && j >= 1 {
            let k = &c * &cubic;
            work.add_term(i - 2, j, k.clone());
            work.add_term(i - 1, j - 1, k.scale(&int(-2)));
        } else if i >= 2 {
            work.add_term(i - 2, j, &c * &q2q4);
            work.add_term(i - 1, j + 1, (&c * &q4).scale(&int(-2)));
        } else {
            work.add_term(i, j - 2, &c * &q2);
            work.add_term(i + 1, j - 1, c.scale(&int(-2)));
        }
    }
    Ok(BASIS.iter().map(|&(i, j)| work.coeff(i, j)).collect())
}

/// Multiplication by `x2` (for `sigma2`) or `x4` (for `sigma4`).
pub fn bat_action_matrix(k: Generator, order: u32) -> SeriesMatrix {
    let (di, dj) = match k {
        Generator::Sigma2 => (1, 0),
        Generator::Sigma4 => (0, 1),
    };
    let cols = BASIS
        .iter()
        .map(|&(i, j)| normal_form(&BatPoly::x(order, i + di, j + dj)).expect("rewriting terminates"))
        .collect();
    SeriesMatrix::from_columns(order, cols)
}

/// `[[1, 0, 0, -2(1+f)^2 q2 q4], [0, 1, 0, 0], [0, -f/2, 1+f, 0], [0, 0, 0, (1+f)^2]]`.
pub fn phi_matrix(order: u32) -> SeriesMatrix {
    let f = Factor::F.series(order);
    let one_f = Factor::OnePlusF.series(order);
    let sq = Factor::OnePlusFSquared.series(order);
    let mut m = SeriesMatrix::identity(4, order);
    m.set(0, 3, sq.shift(1, 1).scale(&int(-2)));
    m.set(2, 1, f.scale(&rat(-1, 2)));
    m.set(2, 2, one_f);
    m.set(3, 3, sq);
    m
}

/// `phi` sends `x2^a x4^b` to `sigma2^a sigma4^b * 1`.
pub fn phi_from_star(order: u32) -> SeriesMatrix {
    let s2 = star_matrix(Generator::Sigma2, order);
    let s4 = star_matrix(Generator::Sigma4, order);
    let one = basis_vector(0, order);
    let x4 = s4.apply(&one);
    let cols = vec![one.clone(), s2.apply(&one), x4.clone(), s2.apply(&x4)];
    SeriesMatrix::from_columns(order, cols)
}

pub fn verify_isomorphism(order: u32) -> Report {
    let mut r = Report::new();
    let phi = phi_matrix(order);
    r.push(format!("[phi] = action of sigma monomials on 1, order {order}"), phi == phi_from_star(order), "");
    for k in Generator::ALL {
        let lhs = &phi * &bat_action_matrix(k, order);
        let rhs = &star_matrix(k, order) * &phi;
        let diff = &lhs - &rhs;
        let bad: Vec<String> = diff.nonzero_entries().iter().map(|(i, j)| format!("({i}, {j})")).collect();
        r.push(format!("[phi][{k}]_Bat = [{k}]_QH[phi], order {order}"), bad.is_empty(), bad.join(", "));
    }
    let det = phi.det();
    let want = Factor::OnePlusF.series(order).pow(3);
    r.check_eq(format!("det[phi] = (1+f)^3, order {order}"), &det, &want);
    let c0 = det.constant_term();
    r.push("det[phi] is a unit", !c0.is_zero(), format!("constant term {c0}"));
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn rewrite_examples() {
        let n = 6;
        let z = || Series::zero(n);
        let q2 = Series::q2(n);
        let q4 = Series::q4(n);
        assert_eq!(normal_form(&BatPoly::x(n, 0, 2)).unwrap(), vec![q2.clone(), z(), z(), Series::constant(n, int(-2))]);
        assert_eq!(
            normal_form(&BatPoly::x(n, 2, 0)).unwrap(),
            vec![&q2 * &q4, z(), z(), q4.scale(&int(-2))]
        );
        let c = Factor::OnePlusFSquared.series(n).shift(1, 1);
        assert_eq!(cubic_coefficient(n), c);
        assert_eq!(normal_form(&BatPoly::x(n, 2, 1)).unwrap(), vec![z(), c.scale(&int(-2)), c.clone(), z()]);
        // x4 * x2 x4 = q2 x2 - 2 x2^2 x4
        assert_eq!(
            normal_form(&BatPoly::x(n, 1, 2)).unwrap(),
            vec![z(), &q2 + &c.scale(&int(4)), c.scale(&int(-2)), z()]
        );
    }

    #[test]
    fn relations_reduce_to_zero() {
        let n = 5;
        for r in relations(n) {
            for i in 0..=4 {
                for j in 0..=4 - i {
                    let p = r.mul(&BatPoly::x(n, i, j));
                    assert!(normal_form(&p).unwrap().iter().all(Series::is_zero), "{i} {j}");
                }
            }
        }
    }

    #[test]
    fn phi_entries() {
        let n = 4;
        let phi = phi_matrix(n);
        assert_eq!(phi.get(2, 1).coeff(0, 1), int(-1));
        assert_eq!(phi.get(2, 1).coeff(0, 2), int(-3));
        assert_eq!(phi.get(0, 3).coeff(1, 1), int(-2));
        assert_eq!(phi.get(0, 3).coeff(1, 2), int(-8));
        assert_eq!(phi.det().constant_term(), int(1));
        assert_eq!(phi.get(1, 1), &Series::one(n));
    }

    #[test]
    fn isomorphism() {
        for n in [1, 3, 6, 12] {
            let r = verify_isomorphism(n);
            assert!(r.ok(), "{r}");
        }
    }

    #[test]
    fn action_matrices_commute() {
        for n in [2, 7, 12] {
            let (a, b) = (bat_action_matrix(Generator::Sigma2, n), bat_action_matrix(Generator::Sigma4, n));
            assert_eq!(&a * &b, &b * &a);
        }
    }

    fn small_series(n: u32) -> impl Strategy<Value = Series> {
        prop::collection::vec((0u32..3, 0u32..3, -3i64..=3), 0..4).prop_map(move |ts| {
            let mut s = Series::zero(n);
            for (a, b, c) in ts {
                s.add_term(a, b, int(c));
            }
            s
        })
    }

    fn small_poly(n: u32) -> impl Strategy<Value = BatPoly> {
        prop::collection::vec((0u32..4, 0u32..4, small_series(n)), 0..4).prop_map(move |ts| {
            let mut p = BatPoly::zero(n);
            for (i, j, c) in ts {
                p.add_term(i, j, c);
            }
            p
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn normal_form_is_idempotent_and_linear(p in small_poly(4), q in small_poly(4), s in small_series(4)) {
            let np = normal_form(&p).unwrap();
            let again = normal_form(&BatPoly::from_element(&np)).unwrap();
            prop_assert_eq!(&again, &np);
            let nq = normal_form(&q).unwrap();
            let lhs = normal_form(&p.scale(&s).add(&q)).unwrap();
            let rhs: Vec<Series> = np.iter().zip(&nq).map(|(a, b)| a * &s + b).collect();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn normal_form_respects_products(p in small_poly(4), q in small_poly(4)) {
            let np = BatPoly::from_element(&normal_form(&p).unwrap());
            let nq = BatPoly::from_element(&normal_form(&q).unwrap());
            prop_assert_eq!(normal_form(&p.mul(&q)).unwrap(), normal_form(&np.mul(&nq)).unwrap());
        }
    }

    #[test]
    fn element_roundtrip() {
        let n = 2;
        let e = [Series::q2(n), Series::one(n), Series::zero(n), Series::q4(n)];
        assert_eq!(normal_form(&BatPoly::from_element(&e)).unwrap(), e.to_vec());
    }
}
