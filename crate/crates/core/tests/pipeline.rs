//! End-to-end checks against values worked out by hand.

use qf2_core::algebra::{fmt_rational, int, rat, Series};
use qf2_core::batyrev::{bat_action_matrix, normal_form, BatPoly};
use qf2_core::invariants::{closed_invariant, Insertion, InvariantKey, InvariantTable};
use qf2_core::localization::{contributions, Family, LocusRecord, Method};
use qf2_core::losev_manin::{cont_b_end, cont_b_interior, integrate_d_lambda};
use qf2_core::combinatorics::Partition;
use qf2_core::quantum_module::{format_terms, module_table, star_matrix, table_entry, Generator};
use qf2_core::toric::{basis, Fan, FanSpec};
use qf2_core::Exec;

fn loci(family: Family, d: u32, method: Method) -> Vec<(String, String)> {
    contributions(family, d, method, Exec::Parallel)
        .unwrap()
        .iter()
        .map(|c| {
            let r = LocusRecord::from(c);
            (r.graph, r.value)
        })
        .collect()
}

fn pairs(v: &[(&str, &str)]) -> Vec<(String, String)> {
    v.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect()
}

#[test]
fn degree_three_loci() {
    let want = pairs(&[
        ("F_3", "-10/3"),
        ("F_{1,2}", "-2"),
        ("F_{2,1}", "-2"),
        ("F_1^2", "-16"),
        ("F_2^1", "12"),
        ("F_{1,1}^1", "8"),
    ]);
    assert_eq!(loci(Family::DD4, 3, Method::Closed), want);
    assert_eq!(loci(Family::DD4, 3, Method::Assembled), want);
    let want = pairs(&[("F'_0", "10"), ("F'_1", "-24"), ("F'_2", "16")]);
    assert_eq!(loci(Family::D2PlusDD4, 3, Method::Assembled), want);
}

#[test]
fn class_d2_is_a_single_vanishing_locus() {
    assert_eq!(loci(Family::D2PlusDD4, 0, Method::Assembled), pairs(&[("F'", "0")]));
    let k = InvariantKey::new(1, 0, Insertion::D(4), Insertion::Pt).unwrap();
    assert_eq!(closed_invariant(&k), int(1));
}

#[test]
fn base_contributions() {
    let c = cont_b_interior(1, 1, 1).unwrap();
    assert_eq!((c.value, c.w_exp), (int(2), -3));
    let c = cont_b_end(2, 1).unwrap();
    assert_eq!((c.value, c.w_exp), (int(-8), -2));
    let c = cont_b_end(1, 3).unwrap();
    assert_eq!(c.value, int(-6));
    let lam = Partition::of(3, vec![2, 1]).unwrap();
    assert_eq!(integrate_d_lambda(3, &lam, 0, 1).unwrap(), int(3));
}

#[test]
fn invariant_table_json() {
    let recs = InvariantTable::closed(1).records();
    let text = serde_json::to_string(&recs[..2]).unwrap();
    assert_eq!(
        text,
        r#"[{"beta":[0,1],"insertions":["1","D1"],"value":"-1"},{"beta":[0,1],"insertions":["1","D2"],"value":"-1"}]"#
    );
}

#[test]
fn frozen_module_table() {
    let lines: Vec<String> = module_table(2).into_iter().map(|r| format!("{}*{} = {}", r.generator, r.input, r.text)).collect();
    assert_eq!(
        lines,
        [
            "sigma2*1 = D2 - 1/2*(2*q4 + 6*q4^2)*D4",
            "sigma2*D2 = q2*q4*(1 + 2*q4 + 6*q4^2) - 1/2*(2*q4 + 6*q4^2)*pt",
            "sigma2*D4 = -2*q2*q4*(1 + 2*q4 + 6*q4^2) + (1 + 2*q4 + 6*q4^2)*pt",
            "sigma2*pt = q2*q4*(1 + 2*q4 + 6*q4^2)*D4",
            "sigma4*1 = (1 + 2*q4 + 6*q4^2)*D4",
            "sigma4*D2 = -1/2*q2*(2*q4 + 6*q4^2) + (1 + 2*q4 + 6*q4^2)*pt",
            "sigma4*D4 = q2*(1 + 2*q4 + 6*q4^2) - 2*(1 + 2*q4 + 6*q4^2)*pt",
            "sigma4*pt = q2*D2 - 1/2*q2*(2*q4 + 6*q4^2)*D4",
        ]
    );
    assert_eq!(format_terms(&table_entry(Generator::Sigma4, basis::ONE), 0), "(1)*D4");
}

#[test]
fn frozen_star_entries() {
    let s4 = star_matrix(Generator::Sigma4, 3);
    // sigma4 * D2, the unit component: -1/2 q2 f
    assert_eq!(s4.get(basis::ONE, basis::D2).to_string(), "-q2*q4 - 3*q2*q4^2");
    assert_eq!(s4.get(basis::PT, basis::D4).to_string(), "-2 - 4*q4 - 12*q4^2 - 40*q4^3");
    let s2 = star_matrix(Generator::Sigma2, 3);
    assert_eq!(s2.get(basis::D4, basis::PT).to_string(), "q2*q4 + 2*q2*q4^2");
}

#[test]
fn frozen_batyrev_action() {
    let x4 = bat_action_matrix(Generator::Sigma4, 2);
    assert_eq!(x4.get(1, 3).to_string(), "q2 + 4*q2*q4");
    assert_eq!(x4.get(2, 3).to_string(), "-2*q2*q4");
    let nf = normal_form(&BatPoly::x(3, 3, 3)).unwrap();
    // x2^3 x4^3 = q2 q4 x2^2 x4^2 + ... has no constant or q-free part
    assert!(nf.iter().all(|s| s.constant_term() == int(0)));
}

#[test]
fn fan_json_roundtrip() {
    let spec = Fan::f2().to_spec();
    let text = serde_json::to_string(&spec).unwrap();
    assert_eq!(text, r#"{"rays":[[-1,2],[1,0],[0,-1],[0,1]],"max_cones":[[1,3],[3,0],[0,2],[2,1]]}"#);
    let back: FanSpec = serde_json::from_str(&text).unwrap();
    assert_eq!(Fan::from_spec(&back).unwrap(), Fan::f2());
}

#[test]
fn series_json_roundtrip() {
    let mut s = Series::zero(3);
    s.add_term(1, 2, rat(-7, 3));
    s.add_term(0, 0, int(1));
    let v = s.to_json();
    assert_eq!(
        v.to_string(),
        r#"{"order":3,"terms":[{"q2":0,"q4":0,"num":"1","den":"1"},{"q2":1,"q4":2,"num":"-7","den":"3"}]}"#
    );
    assert_eq!(Series::from_json(&v).unwrap(), s);
    assert_eq!(fmt_rational(&rat(6, -4)), "-3/2");
}
