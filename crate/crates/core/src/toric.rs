//! Smooth complete two-dimensional fans: validation, primitive collections,
//! the divisor class matrix, primitive relations and the Batyrev ideal.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::{int, Rational};
use crate::error::{Error, Result};

/// Raw JSON shape of a fan, with 0-based cone indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FanSpec {
    pub rays: Vec<Vec<i64>>,
    pub max_cones: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fan {
    rays: Vec<[i64; 2]>,
    max_cones: Vec<[usize; 2]>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FanViolation {
    TooFewRays(usize),
    ZeroRay(usize),
    NotPrimitive(usize),
    DuplicateDirection(usize, usize),
    ConeIndexOutOfRange(usize),
    DegenerateCone(usize),
    NotSmooth { cone: usize, det: i64 },
    /// A pair of angularly adjacent rays that spans no maximal cone.
    Gap(usize, usize),
    /// A maximal cone whose rays are not angularly adjacent.
    Overlap(usize),
}

impl fmt::Display for FanViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::TooFewRays(n) => write!(f, "a complete 2D fan needs at least 3 rays, got {n}"),
            Self::ZeroRay(i) => write!(f, "ray {i} is the zero vector"),
            Self::NotPrimitive(i) => write!(f, "ray {i} is not primitive"),
            Self::DuplicateDirection(i, j) => write!(f, "rays {i} and {j} point the same way"),
            Self::ConeIndexOutOfRange(c) => write!(f, "cone {c} refers to a missing ray"),
            Self::DegenerateCone(c) => write!(f, "cone {c} repeats a ray"),
            Self::NotSmooth { cone, det } => write!(f, "cone {cone} has determinant {det}"),
            Self::Gap(i, j) => write!(f, "incomplete: no cone between rays {i} and {j}"),
            Self::Overlap(c) => write!(f, "cone {c} is not spanned by adjacent rays"),
        }
    }
}

fn det(a: [i64; 2], b: [i64; 2]) -> i64 {
    a[0] * b[1] - a[1] * b[0]
}

fn half(v: [i64; 2]) -> u8 {
    if v[1] > 0 || (v[1] == 0 && v[0] > 0) {
        0
    } else {
        1
    }
}

fn angular_cmp(a: [i64; 2], b: [i64; 2]) -> Ordering {
    half(a).cmp(&half(b)).then_with(|| 0.cmp(&det(a, b)))
}

impl Fan {
    /// Builds a fan without validating it; see [`Fan::validate`].
    pub fn new(rays: Vec<[i64; 2]>, max_cones: Vec<[usize; 2]>) -> Self {
        Self { rays, max_cones }
    }

    /// Rays `(-1,2), (1,0), (0,-1), (0,1)`.
    pub fn f2() -> Self {
        Self::hirzebruch(2)
    }

    pub fn hirzebruch(a: i64) -> Self {
        Self::new(vec![[-1, a], [1, 0], [0, -1], [0, 1]], vec![[1, 3], [3, 0], [0, 2], [2, 1]])
    }

    pub fn p2() -> Self {
        Self::new(vec![[1, 0], [0, 1], [-1, -1]], vec![[0, 1], [1, 2], [2, 0]])
    }

    pub fn p1xp1() -> Self {
        Self::new(vec![[1, 0], [0, 1], [-1, 0], [0, -1]], vec![[0, 1], [1, 2], [2, 3], [3, 0]])
    }

    pub fn from_spec(spec: &FanSpec) -> Result<Self> {
        let mut rays = Vec::with_capacity(spec.rays.len());
        for (i, r) in spec.rays.iter().enumerate() {
            match r.as_slice() {
                &[x, y] => rays.push([x, y]),
                _ => {
                    return Err(Error::InvalidFan(format!(
                        "ray {i} has {} coordinates; only 2D fans are supported",
                        r.len()
                    )))
                }
            }
        }
        let mut cones = Vec::with_capacity(spec.max_cones.len());
        for (c, cone) in spec.max_cones.iter().enumerate() {
            match cone.as_slice() {
                &[i, j] => cones.push([i, j]),
                _ => {
                    return Err(Error::InvalidFan(format!(
                        "cone {c} has {} rays; maximal cones of a 2D fan have 2",
                        cone.len()
                    )))
                }
            }
        }
        Ok(Self::new(rays, cones))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let spec: FanSpec = serde_json::from_str(text).map_err(|e| {
            Error::Parse(format!("fan JSON, line {} column {}: {e}", e.line(), e.column()))
        })?;
        Self::from_spec(&spec)
    }

    pub fn to_spec(&self) -> FanSpec {
        FanSpec {
            rays: self.rays.iter().map(|r| r.to_vec()).collect(),
            max_cones: self.max_cones.iter().map(|c| c.to_vec()).collect(),
        }
    }

    pub fn rays(&self) -> &[[i64; 2]] {
        &self.rays
    }

    pub fn max_cones(&self) -> &[[usize; 2]] {
        &self.max_cones
    }

    pub fn n_rays(&self) -> usize {
        self.rays.len()
    }

    pub fn validate(&self) -> Vec<FanViolation> {
        let n = self.rays.len();
        let mut out = Vec::new();
        if n < 3 {
            out.push(FanViolation::TooFewRays(n));
        }
        for (i, &r) in self.rays.iter().enumerate() {
            if r == [0, 0] {
                out.push(FanViolation::ZeroRay(i));
            } else if r[0].gcd(&r[1]) != 1 {
                out.push(FanViolation::NotPrimitive(i));
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                let (a, b) = (self.rays[i], self.rays[j]);
                if a != [0, 0] && det(a, b) == 0 && a[0] * b[0] + a[1] * b[1] > 0 {
                    out.push(FanViolation::DuplicateDirection(i, j));
                }
            }
        }
        let mut cone_set = BTreeSet::new();
        for (c, &[i, j]) in self.max_cones.iter().enumerate() {
            if i >= n || j >= n {
                out.push(FanViolation::ConeIndexOutOfRange(c));
                continue;
            }
            if i == j {
                out.push(FanViolation::DegenerateCone(c));
                continue;
            }
            let d = det(self.rays[i], self.rays[j]);
            if d.abs() != 1 {
                out.push(FanViolation::NotSmooth { cone: c, det: d });
            }
            cone_set.insert((i.min(j), i.max(j)));
        }
        if !out.is_empty() {
            return out;
        }
        let order = self.angular_order();
        let mut adjacent = BTreeSet::new();
        for k in 0..n {
            let (i, j) = (order[k], order[(k + 1) % n]);
            adjacent.insert((i.min(j), i.max(j)));
            if !cone_set.contains(&(i.min(j), i.max(j))) || det(self.rays[i], self.rays[j]) <= 0 {
                out.push(FanViolation::Gap(i, j));
            }
        }
        for (c, &[i, j]) in self.max_cones.iter().enumerate() {
            if !adjacent.contains(&(i.min(j), i.max(j))) {
                out.push(FanViolation::Overlap(c));
            }
        }
        if self.max_cones.len() != cone_set.len() {
            // repeated cones
            for (c, _) in self.max_cones.iter().enumerate().skip(cone_set.len()) {
                out.push(FanViolation::Overlap(c));
            }
        }
        out
    }

    pub fn checked(self) -> Result<Self> {
        let v = self.validate();
        if v.is_empty() {
            Ok(self)
        } else {
            let msgs: Vec<String> = v.iter().map(ToString::to_string).collect();
            Err(Error::InvalidFan(msgs.join("; ")))
        }
    }

    /// Ray indices sorted counterclockwise starting from the positive x-axis.
    pub fn angular_order(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.rays.len()).collect();
        idx.sort_by(|&i, &j| angular_cmp(self.rays[i], self.rays[j]));
        idx
    }

    fn in_some_cone(&self, mask: u32) -> bool {
        mask.count_ones() <= 1
            || self.max_cones.iter().any(|&[i, j]| mask & !((1 << i) | (1 << j)) == 0)
    }

    /// Brute force over all subsets of rays.
    pub fn primitive_collections(&self) -> Result<Vec<Vec<usize>>> {
        self.require_valid()?;
        let n = self.rays.len();
        let mut out = Vec::new();
        for mask in 1u32..(1 << n) {
            if self.in_some_cone(mask) {
                continue;
            }
            let proper_ok = (0..n)
                .filter(|&i| mask & (1 << i) != 0)
                .all(|i| self.in_some_cone(mask & !(1 << i)));
            if proper_ok {
                out.push((0..n).filter(|&i| mask & (1 << i) != 0).collect());
            }
        }
        out.sort();
        Ok(out)
    }

    pub fn is_primitive_collection(&self, p: &[usize]) -> bool {
        let mask = p.iter().fold(0u32, |m, &i| m | (1 << i));
        !self.in_some_cone(mask)
            && p.iter().all(|&i| self.in_some_cone(mask & !(1 << i)))
    }

    fn require_valid(&self) -> Result<()> {
        let v = self.validate();
        if v.is_empty() {
            return Ok(());
        }
        let msgs: Vec<String> = v.iter().map(ToString::to_string).collect();
        Err(Error::InvalidFan(msgs.join("; ")))
    }

    /// Coordinates of `v` in the basis of the cone's rays.
    fn cone_coords(&self, cone: [usize; 2], v: [i64; 2]) -> Option<[i64; 2]> {
        let (a, b) = (self.rays[cone[0]], self.rays[cone[1]]);
        let d = det(a, b);
        if d == 0 {
            return None;
        }
        let (x, y) = (det(v, b), det(a, v));
        if x % d != 0 || y % d != 0 {
            return None;
        }
        Some([x / d, y / d])
    }

    /// Divisor class matrix. The Picard basis is the divisors of the rays
    /// outside `basis_cone`.
    pub fn class_matrix(&self, basis_cone: usize) -> Result<ClassMatrix> {
        self.require_valid()?;
        let n = self.rays.len();
        let cone = *self
            .max_cones
            .get(basis_cone)
            .ok_or_else(|| Error::InvalidArgument(format!("no cone with index {basis_cone}")))?;
        if det(self.rays[cone[0]], self.rays[cone[1]]).abs() != 1 {
            return Err(Error::SingularBasis(basis_cone));
        }
        let basis: Vec<usize> = (0..n).filter(|i| !cone.contains(i)).collect();
        let mut entries = vec![vec![0i64; n]; basis.len()];
        for (k, &b) in basis.iter().enumerate() {
            entries[k][b] = 1;
        }
        for (pos, &rho) in cone.iter().enumerate() {
            // m dual to the cone rays: <m, v_rho> = 1, <m, v_other> = 0
            let other = cone[1 - pos];
            let (a, o) = (self.rays[rho], self.rays[other]);
            let d = det(a, o);
            let m = [o[1] * d, -o[0] * d];
            // D_rho = -sum_{tau in basis} <m, v_tau> D_tau
            for (k, &tau) in basis.iter().enumerate() {
                let t = self.rays[tau];
                entries[k][rho] = -(m[0] * t[0] + m[1] * t[1]);
            }
        }
        let cm = ClassMatrix { entries, basis_rays: basis };
        for m in [[1, 0], [0, 1]] {
            let rel: Vec<i64> = self.rays.iter().map(|v| m[0] * v[0] + m[1] * v[1]).collect();
            if cm.apply(&rel).iter().any(|&x| x != 0) {
                return Err(Error::Internal(format!("class matrix does not kill {m:?}")));
            }
        }
        Ok(cm)
    }

    /// The first cone whose class matrix has no negative entries, else cone 0.
    pub fn default_basis_cone(&self) -> Result<usize> {
        for c in 0..self.max_cones.len() {
            if self.class_matrix(c)?.entries.iter().flatten().all(|&x| x >= 0) {
                return Ok(c);
            }
        }
        Ok(0)
    }

    pub fn default_class_matrix(&self) -> Result<ClassMatrix> {
        self.class_matrix(self.default_basis_cone()?)
    }

    /// `D_i . D_j` for all torus-invariant divisors.
    pub fn intersection_matrix(&self) -> Result<Vec<Vec<i64>>> {
        self.require_valid()?;
        let n = self.rays.len();
        let order = self.angular_order();
        let mut m = vec![vec![0i64; n]; n];
        for k in 0..n {
            let (prev, cur, next) = (order[(k + n - 1) % n], order[k], order[(k + 1) % n]);
            m[cur][next] = 1;
            m[next][cur] = 1;
            // v_prev + v_next = a v_cur, D_cur^2 = -a
            let s = [self.rays[prev][0] + self.rays[next][0], self.rays[prev][1] + self.rays[next][1]];
            let v = self.rays[cur];
            let a = if v[0] != 0 { s[0] / v[0] } else { s[1] / v[1] };
            if s != [a * v[0], a * v[1]] {
                return Err(Error::Internal(format!("rays around {cur} violate the wall relation")));
            }
            m[cur][cur] = -a;
        }
        Ok(m)
    }

    pub fn primitive_relation(&self, p: &[usize], cm: &ClassMatrix) -> Result<PrimitiveCollection> {
        self.require_valid()?;
        let mut p: Vec<usize> = p.to_vec();
        p.sort_unstable();
        p.dedup();
        if p.iter().any(|&i| i >= self.rays.len()) || !self.is_primitive_collection(&p) {
            return Err(Error::NotPrimitive(p));
        }
        let s = p.iter().fold([0i64, 0], |acc, &i| [acc[0] + self.rays[i][0], acc[1] + self.rays[i][1]]);
        let mut relation = vec![0i64; self.rays.len()];
        for &i in &p {
            relation[i] += 1;
        }
        let mut cone = None;
        if s != [0, 0] {
            for &c in &self.max_cones {
                if let Some(k) = self.cone_coords(c, s) {
                    if k[0] >= 0 && k[1] >= 0 {
                        cone = Some((c, k));
                        break;
                    }
                }
            }
            let (c, k) = cone.ok_or_else(|| {
                Error::Internal(format!("sum of rays {p:?} lies in no cone of a complete fan"))
            })?;
            for (pos, &r) in c.iter().enumerate() {
                relation[r] -= k[pos];
            }
        }
        let cone_part: BTreeMap<usize, u32> = relation
            .iter()
            .enumerate()
            .filter(|(_, &x)| x < 0)
            .map(|(i, &x)| (i, (-x) as u32))
            .collect();
        let beta = self.solve_curve_class(&relation, cm)?;
        Ok(PrimitiveCollection { rays: p, relation, beta, cone_part })
    }

    /// Solves `beta . D_rho = relation[rho]` for `beta` in the Picard basis.
    fn solve_curve_class(&self, relation: &[i64], cm: &ClassMatrix) -> Result<Vec<i64>> {
        let inter = self.intersection_matrix()?;
        let r = cm.basis_rays.len();
        let g: Vec<Vec<Rational>> = cm
            .basis_rays
            .iter()
            .map(|&bi| cm.basis_rays.iter().map(|&bj| int(inter[bi][bj])).collect())
            .collect();
        let rhs: Vec<Rational> = cm.basis_rays.iter().map(|&b| int(relation[b])).collect();
        let y = solve(g, rhs).ok_or_else(|| Error::Internal("singular intersection form".into()))?;
        let mut beta = Vec::with_capacity(r);
        for c in &y {
            if !c.is_integer() {
                return Err(Error::Internal(format!("non-integral curve class {c}")));
            }
            beta.push(c.to_integer().to_i64().ok_or_else(|| Error::Internal("overflow".into()))?);
        }
        for rho in 0..self.rays.len() {
            let lhs: i64 = cm.basis_rays.iter().zip(&beta).map(|(&b, &y)| y * inter[b][rho]).sum();
            if lhs != relation[rho] {
                return Err(Error::Internal(format!("beta fails the pairing with ray {rho}")));
            }
        }
        Ok(beta)
    }

    pub fn batyrev_generators(&self, cm: &ClassMatrix) -> Result<BatyrevGenerators> {
        let linear = [[1, 0], [0, 1]]
            .iter()
            .map(|m| self.rays.iter().map(|v| m[0] * v[0] + m[1] * v[1]).collect())
            .collect();
        let quantum_sr = self
            .primitive_collections()?
            .iter()
            .map(|p| self.primitive_relation(p, cm))
            .collect::<Result<Vec<_>>>()?;
        Ok(BatyrevGenerators { n_rays: self.rays.len(), basis_rays: cm.basis_rays.clone(), linear, quantum_sr })
    }

    /// Weights of `O(D_rho)` at each torus fixed point, as integer
    /// combinations of the characters `alpha_1..alpha_n` of the Cox torus.
    /// Fixed points are listed in `max_cones` order.
    pub fn fixed_point_weights(&self, cm: &ClassMatrix) -> Result<Vec<FixedPoint>> {
        self.require_valid()?;
        let n = self.rays.len();
        let mut out = Vec::with_capacity(self.max_cones.len());
        for &cone in &self.max_cones {
            let outside: Vec<usize> = (0..n).filter(|i| !cone.contains(i)).collect();
            let a: Vec<Vec<Rational>> = (0..cm.rank())
                .map(|k| outside.iter().map(|&t| int(cm.entries[k][t])).collect())
                .collect();
            let mut weights = Vec::with_capacity(n);
            for rho in 0..n {
                let rhs: Vec<Rational> = (0..cm.rank()).map(|k| int(cm.entries[k][rho])).collect();
                let k = solve(a.clone(), rhs).ok_or(Error::SingularBasis(0))?;
                let mut w = vec![0i64; n];
                w[rho] -= 1;
                for (c, &t) in k.iter().zip(&outside) {
                    if !c.is_integer() {
                        return Err(Error::Internal("non-integral fixed-point weight".into()));
                    }
                    w[t] += c.to_integer().to_i64().unwrap();
                }
                weights.push(w);
            }
            out.push(FixedPoint { cone, weights });
        }
        Ok(out)
    }
}

/// Gaussian elimination over the rationals for a square system.
fn solve(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Option<Vec<Rational>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        b.swap(col, piv);
        let inv = Rational::one() / &a[col][col];
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = &a[r][col] * &inv;
                for c in col..n {
                    let t = &f * &a[col][c];
                    a[r][c] -= t;
                }
                let t = &f * &b[col];
                b[r] -= t;
            }
        }
    }
    Some((0..n).map(|i| &b[i] / &a[i][i]).collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassMatrix {
    pub entries: Vec<Vec<i64>>,
    pub basis_rays: Vec<usize>,
}

impl ClassMatrix {
    pub fn rank(&self) -> usize {
        self.entries.len()
    }

    pub fn apply(&self, v: &[i64]) -> Vec<i64> {
        self.entries.iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }

    /// Name of the Novikov variable for basis element `k`: `q` in rank one,
    /// else `q` followed by the 1-based ray number.
    pub fn q_name(&self, k: usize) -> String {
        if self.rank() == 1 {
            "q".to_string()
        } else {
            format!("q{}", self.basis_rays[k] + 1)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimitiveCollection {
    pub rays: Vec<usize>,
    /// Coefficient of each ray in `sum_{P} v - sum c_j v_j = 0`.
    pub relation: Vec<i64>,
    /// `beta_P` in the Picard basis of the class matrix.
    pub beta: Vec<i64>,
    /// The rays `v_j` with their exponents `c_j`.
    pub cone_part: BTreeMap<usize, u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixedPoint {
    pub cone: [usize; 2],
    pub weights: Vec<Vec<i64>>,
}

/// Polynomial in the Picard-basis variables with integer coefficients,
/// keyed by exponent vectors.
pub type IntPoly = BTreeMap<Vec<u32>, i64>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducedRelation {
    pub lhs: IntPoly,
    pub q: Vec<i64>,
    pub rhs: IntPoly,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BatyrevGenerators {
    pub n_rays: usize,
    pub basis_rays: Vec<usize>,
    /// `sum_rho <m, v_rho> x_rho` for `m = e1, e2`.
    pub linear: Vec<Vec<i64>>,
    pub quantum_sr: Vec<PrimitiveCollection>,
}

fn var(i: usize) -> String {
    format!("x{}", i + 1)
}

fn monomial(exps: &[(usize, u32)], name: impl Fn(usize) -> String) -> String {
    let parts: Vec<String> = exps
        .iter()
        .filter(|(_, e)| *e > 0)
        .map(|&(i, e)| if e == 1 { name(i) } else { format!("{}^{e}", name(i)) })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

fn poly_string(p: &IntPoly, basis: &[usize]) -> String {
    let mut out = String::new();
    for (exps, &c) in p.iter().rev() {
        if c == 0 {
            continue;
        }
        let mono = monomial(&exps.iter().copied().enumerate().collect::<Vec<_>>(), |k| var(basis[k]));
        let sign = if c < 0 { "-" } else { "+" };
        if out.is_empty() {
            if c < 0 {
                out.push('-');
            }
        } else {
            out.push_str(&format!(" {sign} "));
        }
        match (c.abs(), mono.as_str()) {
            (1, m) => out.push_str(m),
            (a, "1") => out.push_str(&a.to_string()),
            (a, m) => out.push_str(&format!("{a}*{m}")),
        }
    }
    if out.is_empty() {
        "0".into()
    } else {
        out
    }
}

impl BatyrevGenerators {
    pub fn linear_strings(&self) -> Vec<String> {
        self.linear
            .iter()
            .map(|row| {
                let p: IntPoly = row
                    .iter()
                    .enumerate()
                    .filter(|(_, &c)| c != 0)
                    .map(|(i, &c)| {
                        let mut e = vec![0; self.n_rays];
                        e[i] = 1;
                        (e, c)
                    })
                    .collect();
                poly_string(&p, &(0..self.n_rays).collect::<Vec<_>>())
            })
            .collect()
    }

    pub fn q_monomial(&self, cm: &ClassMatrix, beta: &[i64]) -> String {
        let parts: Vec<String> = beta
            .iter()
            .enumerate()
            .filter(|(_, &e)| e != 0)
            .map(|(k, &e)| if e == 1 { cm.q_name(k) } else { format!("{}^{e}", cm.q_name(k)) })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }

    /// `x_P - q^beta x^c`.
    pub fn quantum_sr_strings(&self, cm: &ClassMatrix) -> Vec<String> {
        self.quantum_sr
            .iter()
            .map(|pc| {
                let lhs = monomial(&pc.rays.iter().map(|&i| (i, 1)).collect::<Vec<_>>(), var);
                let q = self.q_monomial(cm, &pc.beta);
                let rhs = monomial(&pc.cone_part.iter().map(|(&i, &e)| (i, e)).collect::<Vec<_>>(), var);
                let term = match (q.as_str(), rhs.as_str()) {
                    ("1", r) => r.to_string(),
                    (q, "1") => q.to_string(),
                    (q, r) => format!("{q}*{r}"),
                };
                format!("{lhs} - {term}")
            })
            .collect()
    }

    /// Quantum Stanley-Reisner generators after substituting every `x_rho`
    /// by its class `sum_k A[k][rho] x_{basis_k}`.
    pub fn reduced(&self, cm: &ClassMatrix) -> Vec<ReducedRelation> {
        let subst = |rho: usize| -> IntPoly {
            let mut p = IntPoly::new();
            for k in 0..cm.rank() {
                let c = cm.entries[k][rho];
                if c != 0 {
                    let mut e = vec![0; cm.rank()];
                    e[k] = 1;
                    p.insert(e, c);
                }
            }
            p
        };
        let product = |factors: Vec<usize>| -> IntPoly {
            let mut acc: IntPoly = [(vec![0; cm.rank()], 1)].into_iter().collect();
            for rho in factors {
                let f = subst(rho);
                let mut next = IntPoly::new();
                for (ea, ca) in &acc {
                    for (eb, cb) in &f {
                        let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                        *next.entry(e).or_insert(0) += ca * cb;
                    }
                }
                next.retain(|_, c| *c != 0);
                acc = next;
            }
            acc
        };
        self.quantum_sr
            .iter()
            .map(|pc| {
                let rhs_factors: Vec<usize> =
                    pc.cone_part.iter().flat_map(|(&i, &e)| std::iter::repeat_n(i, e as usize)).collect();
                ReducedRelation { lhs: product(pc.rays.clone()), q: pc.beta.clone(), rhs: product(rhs_factors) }
            })
            .collect()
    }

    pub fn reduced_strings(&self, cm: &ClassMatrix) -> Vec<String> {
        self.reduced(cm)
            .iter()
            .map(|r| {
                let q = self.q_monomial(cm, &r.q);
                let rhs = poly_string(&r.rhs, &cm.basis_rays);
                let rhs = if r.rhs.len() > 1 { format!("({rhs})") } else { rhs };
                let term = match (q.as_str(), rhs.as_str()) {
                    ("1", r) => r.to_string(),
                    (q, "1") => q.to_string(),
                    (q, r) => format!("{q}*{r}"),
                };
                format!("{} - {term}", poly_string(&r.lhs, &cm.basis_rays))
            })
            .collect()
    }
}

/// Basis indices of `H*(F2)` in the order `(1, D2, D4, pt)`.
pub mod basis {
    pub const ONE: usize = 0;
    pub const D2: usize = 1;
    pub const D4: usize = 2;
    pub const PT: usize = 3;
    pub const NAMES: [&str; 4] = ["1", "D2", "D4", "pt"];
}

/// Cup product of `H*(F2) = Q[D2, D4]/(D2^2, D4^2 + 2 D2 D4)` in the basis
/// `(1, D2, D4, pt)`, with `pt = D2 D4`.
pub fn f2_cup(i: usize, j: usize) -> [i64; 4] {
    use basis::*;
    let (i, j) = (i.min(j), i.max(j));
    let mut out = [0; 4];
    match (i, j) {
        (ONE, k) => out[k] = 1,
        (D2, D2) => {}
        (D2, D4) => out[PT] = 1,
        (D4, D4) => out[PT] = -2,
        _ => {}
    }
    out
}

/// Poincare pairing `int_{F2} T_i T_j`.
pub fn f2_pairing() -> [[i64; 4]; 4] {
    let mut g = [[0; 4]; 4];
    for (i, row) in g.iter_mut().enumerate() {
        for (j, x) in row.iter_mut().enumerate() {
            *x = f2_cup(i, j)[basis::PT];
        }
    }
    g
}

/// Dual basis `T^i` with `int T_i T^j = delta_ij`, as coordinate vectors.
pub fn f2_dual_basis() -> [[Rational; 4]; 4] {
    let g = f2_pairing();
    let a: Vec<Vec<Rational>> = g.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect();
    std::array::from_fn(|i| {
        let mut e = vec![Rational::zero(); 4];
        e[i] = Rational::one();
        let x = solve(a.clone(), e).expect("pairing is nondegenerate");
        std::array::from_fn(|k| x[k].clone())
    })
}

/// Degree of `D_rho` on a curve class `a D2 + b D4` of `F2`.
pub fn f2_divisor_degree(rho: usize, a: i64, b: i64) -> i64 {
    // D1 = D2, D3 = 2 D2 + D4; D2.D2 = 0, D2.D4 = 1, D4.D4 = -2
    let d2 = b;
    let d4 = a - 2 * b;
    match rho {
        0 | 1 => d2,
        2 => 2 * d2 + d4,
        3 => d4,
        _ => panic!("F2 has four rays"),
    }
}
