//! Fixed-locus chain graphs and their localization contributions.
//!
//! All weights are specialized through `V1 = V`, `W1 = W`, `V2 = V + 2W`,
//! `W2 = -W`. Graph vertices alternate between the fixed points `p1` and
//! `p2`, starting with `p1` at the left.
//!
//! For `dD4` the first marking (insertion `D2`, weight `W` at `p1`) sits on
//! the leftmost vertex and the second on the rightmost. For `D2 + dD4` a
//! vertical `D2` edge joins the leftmost vertex to `p4`, where the second
//! marking (insertion `pt = D2 D3`) lives; the first marking (insertion
//! `D1`, weight `-W` at `p2`, zero at `p1`) sits on the rightmost vertex.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::{binom, binom_rational, fmt_rational, int, rat, Rational, VFraction};
use crate::error::{Error, Result};
use crate::losev_manin::{cont_b_end, cont_b_interior};
use crate::par::Exec;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Family {
    #[serde(rename = "dD4")]
    DD4,
    #[serde(rename = "D2+dD4")]
    D2PlusDD4,
}

impl Family {
    pub fn min_degree(self) -> u32 {
        match self {
            Family::DD4 => 1,
            Family::D2PlusDD4 => 0,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::DD4 => "dD4",
            Family::D2PlusDD4 => "D2+dD4",
        })
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dD4" => Ok(Family::DD4),
            "D2+dD4" => Ok(Family::D2PlusDD4),
            _ => Err(Error::InvalidArgument(format!("unknown family {s:?} (expected dD4 or D2+dD4)"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Closed,
    Assembled,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Closed => "closed",
            Method::Assembled => "assembled",
        })
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "closed" => Ok(Method::Closed),
            "assembled" => Ok(Method::Assembled),
            _ => Err(Error::InvalidArgument(format!("unknown method {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FixedPoint {
    P1,
    P2,
}

/// A decorated chain graph: horizontal edges left to right, and the degree
/// of the dashed half-edge at each vertex (0 for none).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ChainGraph {
    family: Family,
    edges: Vec<u32>,
    half_edges: Vec<u32>,
}

impl ChainGraph {
    pub fn new(family: Family, edges: Vec<u32>, half_edges: Vec<u32>) -> Result<Self> {
        if half_edges.len() != edges.len() + 1 {
            return Err(Error::InvalidArgument(format!(
                "{} edges need {} vertices, got {}",
                edges.len(),
                edges.len() + 1,
                half_edges.len()
            )));
        }
        if edges.contains(&0) {
            return Err(Error::InvalidArgument("edge degrees must be positive".into()));
        }
        if family == Family::DD4 && edges.is_empty() {
            return Err(Error::InvalidArgument("a dD4 chain needs at least one edge".into()));
        }
        Ok(Self { family, edges, half_edges })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn edges(&self) -> &[u32] {
        &self.edges
    }

    pub fn half_edges(&self) -> &[u32] {
        &self.half_edges
    }

    /// `d` in `dD4` or `D2 + dD4`.
    pub fn degree(&self) -> u32 {
        self.edges.iter().sum::<u32>() + self.half_edges.iter().sum::<u32>()
    }

    pub fn n_vertices(&self) -> usize {
        self.half_edges.len()
    }

    pub fn vertex_point(&self, v: usize) -> FixedPoint {
        if v % 2 == 0 {
            FixedPoint::P1
        } else {
            FixedPoint::P2
        }
    }

    /// Vertex carrying the first marking.
    pub fn marking_1(&self) -> usize {
        match self.family {
            Family::DD4 => 0,
            Family::D2PlusDD4 => self.n_vertices() - 1,
        }
    }

    /// Vertex carrying the second marking; `None` means the top of the
    /// vertical edge at `p4`.
    pub fn marking_2(&self) -> Option<usize> {
        match self.family {
            Family::DD4 => Some(self.n_vertices() - 1),
            Family::D2PlusDD4 => None,
        }
    }

    pub fn name(&self) -> String {
        let h = &self.half_edges;
        match (self.family, self.edges.as_slice(), h.as_slice()) {
            (Family::DD4, &[d], &[0, 0]) => format!("F_{d}"),
            (Family::DD4, &[e, e2], &[0, 0, 0]) => format!("F_{{{e},{e2}}}"),
            (Family::DD4, &[e], &[0, b]) => format!("F_{e}^{b}"),
            (Family::DD4, &[e, e2], &[0, b, 0]) => format!("F_{{{e},{e2}}}^{b}"),
            (Family::D2PlusDD4, &[], &[0]) => "F'".to_string(),
            (Family::D2PlusDD4, &[_], &[0, b]) => format!("F'_{b}"),
            _ => {
                let e: Vec<String> = self.edges.iter().map(u32::to_string).collect();
                let b: Vec<String> = h.iter().map(u32::to_string).collect();
                let tag = if self.family == Family::DD4 { "G" } else { "G'" };
                format!("{tag}[{}|{}]", e.join(","), b.join(","))
            }
        }
    }

    /// Edge degrees on either side of vertex `v`.
    fn neighbours(&self, v: usize) -> (Option<u32>, Option<u32>) {
        let left = if v > 0 { Some(self.edges[v - 1]) } else { None };
        (left, self.edges.get(v).copied())
    }
}

impl fmt::Display for ChainGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// The necessary loci: `F_d`, `F_{e,d-e}`, `F_{d-b}^b`, `F_{e,e'}^b` for
/// `dD4`; `F'_b` (`0 <= b < d`) for `D2 + dD4`, or the bare vertical edge at
/// `d = 0`. Listed in a fixed canonical order.
pub fn enumerate_necessary_loci(family: Family, d: u32) -> Result<Vec<ChainGraph>> {
    if d < family.min_degree() {
        return Err(Error::InvalidArgument(format!("degree {d} out of range for {family}")));
    }
    let mut out = Vec::new();
    match family {
        Family::DD4 => {
            out.push(ChainGraph::new(family, vec![d], vec![0, 0])?);
            for e in 1..d {
                out.push(ChainGraph::new(family, vec![e, d - e], vec![0, 0, 0])?);
            }
            for b in (1..d).rev() {
                out.push(ChainGraph::new(family, vec![d - b], vec![0, b])?);
            }
            for b in 1..d {
                for e in 1..d - b {
                    out.push(ChainGraph::new(family, vec![e, d - b - e], vec![0, b, 0])?);
                }
            }
        }
        Family::D2PlusDD4 => {
            if d == 0 {
                out.push(ChainGraph::new(family, vec![], vec![0])?);
            }
            for b in 0..d {
                out.push(ChainGraph::new(family, vec![d - b], vec![0, b])?);
            }
        }
    }
    Ok(out)
}

fn w_i(p: FixedPoint) -> VFraction {
    match p {
        FixedPoint::P1 => VFraction::w(),
        FixedPoint::P2 => VFraction::constant(int(-1), 1),
    }
}

fn v_i(p: FixedPoint) -> VFraction {
    match p {
        FixedPoint::P1 => VFraction::v(),
        FixedPoint::P2 => VFraction::v_plus_w(int(2)),
    }
}

/// `Cont_E(e) = (1/e) e^{2e} prod_{j=0}^{2e-2} (V + (1+j) W / e) / ((e!)^2 W^{2e} (-1)^e)`.
pub fn edge_factor(e: u32) -> Result<VFraction> {
    if e == 0 {
        return Err(Error::InvalidArgument("edge degree must be positive".into()));
    }
    let mut acc = VFraction::one();
    for j in 0..2 * e - 1 {
        acc = &acc * &VFraction::v_plus_w(rat(1 + j as i64, e as i64));
    }
    let e_big = BigInt::from(e);
    let fact = crate::algebra::factorial(e as u64);
    let mut c = Rational::new(e_big.pow(2 * e), e_big * &fact * &fact);
    if e % 2 == 1 {
        c = -c;
    }
    Ok(&acc * &VFraction::constant(c, -2 * e as i64))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Contribution {
    pub graph: ChainGraph,
    pub value: Rational,
    pub w_exponent: i64,
    pub method: Method,
}

/// JSON row for a per-locus table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocusRecord {
    pub graph: String,
    pub value: String,
    pub method: Method,
}

impl From<&Contribution> for LocusRecord {
    fn from(c: &Contribution) -> Self {
        Self { graph: c.graph.name(), value: fmt_rational(&c.value), method: c.method }
    }
}

fn bin(n: u32, k: i64) -> Rational {
    Rational::from_integer(binom(n as u64, k))
}

fn central(n: u32) -> Rational {
    bin(2 * n, n as i64)
}

fn pow4(k: u32) -> Rational {
    Rational::from_integer(BigInt::from(4).pow(k))
}

fn sign(k: i64) -> Rational {
    if k.rem_euclid(2) == 0 {
        int(1)
    } else {
        int(-1)
    }
}

/// Closed per-locus values for the necessary loci.
pub fn closed_value(g: &ChainGraph) -> Result<Rational> {
    let d = g.degree();
    let di = d as i64;
    let h = g.half_edges();
    let v = match (g.family(), g.edges(), h) {
        (Family::DD4, &[_], &[0, 0]) => sign(di) * central(d) / int(2 * di),
        (Family::DD4, &[e, e2], &[0, 0, 0]) => sign(di) * central(e) * central(e2) / int(2 * di),
        (Family::DD4, &[e], &[0, b]) => {
            sign(di - b as i64) * pow4(b) / int(2 * b as i64) * bin(d - 1, b as i64 - 1) * central(e)
        }
        (Family::DD4, &[e, e2], &[0, b, 0]) if b > 0 => {
            sign(di - b as i64) * pow4(b) / int(2 * b as i64) * bin(d - 1, b as i64 - 1) * central(e) * central(e2)
        }
        // the first marking sits at p1, where the D1 weight vanishes
        (Family::D2PlusDD4, &[], &[0]) => Rational::zero(),
        (Family::D2PlusDD4, &[_], &[0, b]) => {
            sign(di - b as i64 - 1) * pow4(b) / int(2) * central(d - b) * bin(d - 1, b as i64)
        }
        _ => {
            return Err(Error::InvalidArgument(format!(
                "{} is not a necessary locus; no closed value",
                g.name()
            )))
        }
    };
    Ok(v)
}

/// Product of all factors of the localization formula, evaluated at `V = 0`.
///
/// Base vertices at `p2` use the Losev-Manin values of `Cont_B` (regular at
/// `V = 0`). A base vertex at `p1` carries an explicit `V` in its numerator;
/// it is kept as that factor and the rest of its integral is never needed,
/// since every such locus vanishes at `V = 0`.
pub fn assembled_value(g: &ChainGraph) -> Result<(Rational, i64)> {
    let n = g.n_vertices();
    let last = n - 1;
    let mut rest = VFraction::one();
    let mut base_values = Rational::one();
    let mut base_w = 0i64;
    let mut p1_base = 0u32;

    // insertions
    match g.family() {
        Family::DD4 => {
            // D2 at p1
            rest = &rest * &VFraction::w();
        }
        Family::D2PlusDD4 => {
            let d1 = match g.vertex_point(last) {
                FixedPoint::P1 => return Ok((Rational::zero(), 0)),
                FixedPoint::P2 => VFraction::constant(int(-1), 1),
            };
            // D2 and D3 at p4: W and -V
            let pt = &VFraction::w() * &VFraction::v().scale(&int(-1));
            // vertical D2 edge
            let vertical = (&VFraction::w() * &VFraction::v().pow(2)).recip()?.scale(&int(-1));
            rest = &(&(&rest * &d1) * &pt) * &vertical;
            if g.edges().is_empty() {
                return Err(Error::Internal("unreachable: d1 weight at p1".into()));
            }
        }
    }

    for &e in g.edges() {
        rest = &rest * &edge_factor(e)?;
    }

    for v in 0..n {
        let p = g.vertex_point(v);
        let b = g.half_edges()[v];
        let (left, right) = g.neighbours(v);
        let is_end = v == 0 || v == last;
        let d2_node = g.family() == Family::D2PlusDD4 && v == 0;
        let (vi, wi) = (v_i(p), w_i(p));
        let w = VFraction::w();
        // vertex counting, with signs from W2 = -W
        let vc = match (d2_node, is_end, b > 0) {
            (true, _, false) => &vi * &w,
            (true, _, true) => (&vi * &w).pow(2),
            (false, false, false) => &(&vi * &w) * &sign_at(p),
            (false, false, true) => (&vi * &w).pow(2),
            (false, true, true) => &(&vi * &w) * &sign_at(p),
            (false, true, false) => VFraction::one(),
        };
        rest = &rest * &vc;
        // node smoothing
        if b == 0 {
            match (left, right) {
                (Some(e), Some(e2)) => {
                    let s = rat(1, e as i64) + rat(1, e2 as i64);
                    rest = &rest * &wi.scale(&s).recip()?;
                }
                (None, Some(e0)) if d2_node => {
                    rest = &rest * &VFraction::v_plus_w(rat(1, e0 as i64)).recip()?;
                }
                _ => {}
            }
        }
        // base vertices
        if b > 0 {
            match p {
                FixedPoint::P1 => {
                    p1_base += 1;
                    rest = &rest * &VFraction::v();
                }
                FixedPoint::P2 => {
                    let c = match (left, right) {
                        (Some(e), Some(e2)) => cont_b_interior(b, e, e2)?,
                        (Some(e), None) | (None, Some(e)) => cont_b_end(b, e)?,
                        (None, None) => {
                            return Err(Error::InvalidArgument("isolated base vertex".into()))
                        }
                    };
                    base_values *= c.value;
                    base_w += c.w_exp;
                }
            }
        }
    }

    let (x, w_rest) = rest.eval_at_v0()?;
    if p1_base > 0 {
        if !x.is_zero() {
            return Err(Error::Internal(format!(
                "{}: base vertex at p1 without a vanishing V factor",
                g.name()
            )));
        }
        return Ok((Rational::zero(), 0));
    }
    if x.is_zero() {
        return Ok((Rational::zero(), 0));
    }
    Ok((x * base_values, w_rest + base_w))
}

fn sign_at(p: FixedPoint) -> VFraction {
    match p {
        FixedPoint::P1 => VFraction::one(),
        FixedPoint::P2 => VFraction::constant(int(-1), 0),
    }
}

pub fn locus_contribution(g: &ChainGraph, method: Method) -> Result<Contribution> {
    let (value, w_exponent) = match method {
        Method::Closed => (closed_value(g)?, 0),
        Method::Assembled => assembled_value(g)?,
    };
    if w_exponent != 0 {
        return Err(Error::Internal(format!("{}: contribution has W-degree {w_exponent}", g.name())));
    }
    Ok(Contribution { graph: g.clone(), value, w_exponent, method })
}

/// All necessary-locus contributions of degree `d`, in enumeration order.
pub fn contributions(family: Family, d: u32, method: Method, exec: Exec) -> Result<Vec<Contribution>> {
    let loci = enumerate_necessary_loci(family, d)?;
    exec.map(loci, |g| locus_contribution(&g, method)).into_iter().collect()
}

/// `<D2, 1>` for `dD4`, `<D1, pt>` for `D2 + dD4`.
pub fn invariant_by_localization(family: Family, d: u32, method: Method, exec: Exec) -> Result<Rational> {
    Ok(contributions(family, d, method, exec)?
        .into_iter()
        .fold(Rational::zero(), |acc, c| acc + c.value))
}

/// Successive rewritings of the `dD4` localization sum, each of which must
/// equal the previous one. The first entry is the sum of per-locus closed
/// values and the last is `-binom(2d, d)/(2d)`.
pub fn resummation_stages_dd4(d: u32) -> Result<Vec<Rational>> {
    if d == 0 {
        return Err(Error::InvalidArgument("d must be positive".into()));
    }
    let di = d as i64;
    let two_d = int(2 * di);
    let mut stages = vec![invariant_by_localization(Family::DD4, d, Method::Closed, Exec::Sequential)?];

    let mut s = Rational::zero();
    for b in 0..d {
        let inner = (0..d - b).fold(Rational::zero(), |acc, e| acc + central(e) * central(d - b - e));
        s += sign(di - b as i64) * pow4(b) / &two_d * bin(d, b as i64) * inner;
    }
    stages.push(s);

    let mut s = Rational::zero();
    for b in 0..d {
        s += sign(di - b as i64) * pow4(b) / &two_d * bin(d, b as i64) * (pow4(d - b) - central(d - b));
    }
    stages.push(s);

    let mut s = Rational::zero();
    for b in 0..=d {
        s += sign(di - b as i64 - 1) * pow4(b) / &two_d * bin(d, b as i64) * central(d - b);
    }
    stages.push(s);

    let half = rat(-1, 2);
    let sum = (0..=d).fold(Rational::zero(), |acc, b| acc + bin(d, b as i64) * binom_rational(&half, (d - b) as u64));
    stages.push(-pow4(d) / &two_d * sum);

    stages.push(-central(d) / two_d);
    Ok(stages)
}

/// The analogous chain for `D2 + dD4`, ending at `binom(2d, d)/(2(2d - 1))`.
pub fn resummation_stages_d2(d: u32) -> Result<Vec<Rational>> {
    if d == 0 {
        return Err(Error::InvalidArgument("d must be positive".into()));
    }
    let di = d as i64;
    let mut stages = vec![invariant_by_localization(Family::D2PlusDD4, d, Method::Closed, Exec::Sequential)?];
    let half = rat(-1, 2);
    let sum = (0..d).fold(Rational::zero(), |acc, b| acc + bin(d - 1, b as i64) * binom_rational(&half, (d - b) as u64));
    stages.push(-pow4(d) / int(2) * sum);
    stages.push(central(d) / int(2 * (2 * di - 1)));
    Ok(stages)
}
