//! `qf2`: command-line front end for the quasimap engine.
//!
//! Exit codes: 0 success, 1 a verification failed, 2 bad input.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use qf2_core::acceptance::run_criterion;
use qf2_core::algebra::{fmt_rational, Series, SeriesMatrix};
use qf2_core::batyrev::{bat_action_matrix, phi_matrix, verify_isomorphism, BASIS_NAMES};
use qf2_core::combinatorics::Partition;
use qf2_core::invariants::verify_relations;
use qf2_core::localization::{contributions, Family, LocusRecord, Method};
use qf2_core::losev_manin::integrate_d_lambda;
use qf2_core::quantum_module::{module_table, verify_module_axiom, verify_quantum_relations, verify_table, Generator};
use qf2_core::toric::{basis, Fan};
use qf2_core::{Error, Exec, Report};

#[derive(Parser)]
#[command(name = "qf2", version, about = "Exact quasimap invariants and the quantum module of the Hirzebruch surface F2")]
struct Cli {
    /// Series truncation order (total degree in q2, q4).
    #[arg(long, global = true, env = "QF2_ORDER", default_value_t = 8)]
    order: u32,
    /// Largest degree d for invariant tables.
    #[arg(long, global = true, default_value_t = 8)]
    d_max: u32,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Closed,
    Assembled,
    Both,
}

impl MethodArg {
    fn methods(self) -> Vec<Method> {
        match self {
            MethodArg::Closed => vec![Method::Closed],
            MethodArg::Assembled => vec![Method::Assembled],
            MethodArg::Both => vec![Method::Closed, Method::Assembled],
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Validate a fan and print its primitive collections, class matrix and Batyrev presentation.
    Fan {
        /// JSON fan file; defaults to F2.
        #[arg(long)]
        fan: Option<PathBuf>,
    },
    /// Invariants of one degree family by localization.
    Invariants {
        #[arg(long, default_value = "dD4")]
        family: String,
        #[arg(long, value_enum, default_value_t = MethodArg::Closed)]
        method: MethodArg,
        /// Include the per-locus breakdown.
        #[arg(long)]
        show_loci: bool,
    },
    /// Per-locus contributions of one degree family.
    Loci {
        #[arg(long, default_value = "dD4")]
        family: String,
        #[arg(long, value_enum, default_value_t = MethodArg::Closed)]
        method: MethodArg,
    },
    /// The action of sigma2 and sigma4 on H*(F2) in closed form.
    ModuleTable,
    /// Check the invariant relations, the module table, commutation, the quantum relations and the Batyrev isomorphism.
    Verify,
    /// Batyrev ring actions and the isomorphism matrix.
    Batyrev {
        #[arg(long)]
        check_iso: bool,
    },
    /// Integrate D_lambda psi_n^a psi_n'^c over the Losev-Manin space of b light points.
    LmIntegrate {
        #[arg(long)]
        b: u32,
        #[arg(long, value_delimiter = ',')]
        lambda: Vec<u32>,
        #[arg(long, value_delimiter = ',', num_args = 1, default_value = "0,0")]
        psi: Vec<u32>,
    },
    /// Run the acceptance suite.
    Selftest {
        /// Run a single criterion (1-10).
        #[arg(long)]
        criterion: Option<u8>,
    },
}

enum Failure {
    Input(String),
    Verify(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidFan(_)
            | Error::Parse(_)
            | Error::InvalidArgument(_)
            | Error::NotAPartition { .. }
            | Error::NotPrimitive(_)
            | Error::SingularBasis(_) => Failure::Input(e.to_string()),
            _ => Failure::Verify(e.to_string()),
        }
    }
}

type Outcome = Result<String, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Verify(msg)) => {
            eprint!("{msg}");
            if !msg.ends_with('\n') {
                eprintln!();
            }
            ExitCode::from(1)
        }
    }
}

fn run(cli: &Cli) -> Outcome {
    if cli.d_max < 1 {
        return Err(Failure::Input("--d-max must be at least 1".into()));
    }
    match &cli.command {
        Command::Fan { fan } => cmd_fan(fan.as_ref(), cli.format),
        Command::Invariants { family, method, show_loci } => {
            cmd_invariants(parse_family(family)?, *method, cli.d_max, *show_loci, cli.format)
        }
        Command::Loci { family, method } => cmd_loci(parse_family(family)?, *method, cli.d_max, cli.format),
        Command::ModuleTable => Ok(cmd_module_table(cli.order, cli.format)),
        Command::Verify => cmd_verify(cli.order, cli.d_max, cli.format),
        Command::Batyrev { check_iso } => cmd_batyrev(cli.order, *check_iso, cli.format),
        Command::LmIntegrate { b, lambda, psi } => cmd_lm(*b, lambda, psi, cli.format),
        Command::Selftest { criterion } => cmd_selftest(*criterion, cli.format),
    }
}

fn parse_family(s: &str) -> Result<Family, Failure> {
    Ok(s.parse()?)
}

fn json_out(v: Value) -> String {
    let mut s = serde_json::to_string_pretty(&v).expect("json values serialize");
    s.push('\n');
    s
}

fn cmd_fan(path: Option<&PathBuf>, format: Format) -> Outcome {
    let fan = match path {
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| Failure::Input(format!("cannot read {}: {e}", p.display())))?;
            Fan::from_json(&text)?
        }
        None => Fan::f2(),
    };
    let violations = fan.validate();
    if !violations.is_empty() {
        let list: Vec<String> = violations.iter().map(ToString::to_string).collect();
        return Err(Failure::Input(format!("invalid fan: {}", list.join("; "))));
    }
    let pcs = fan.primitive_collections()?;
    let cone = fan.default_basis_cone()?;
    let cm = fan.class_matrix(cone)?;
    let gens = fan.batyrev_generators(&cm)?;
    let relations: Vec<_> = pcs.iter().map(|p| fan.primitive_relation(p, &cm)).collect::<Result<_, _>>()?;

    if format == Format::Json {
        let beta: Vec<Value> = relations
            .iter()
            .map(|pc| json!({"rays": pc.rays, "relation": pc.relation, "beta": pc.beta, "q": gens.q_monomial(&cm, &pc.beta)}))
            .collect();
        return Ok(json_out(json!({
            "fan": fan.to_spec(),
            "valid": true,
            "primitive_collections": pcs,
            "class_matrix": {"basis_cone": cone, "basis_rays": cm.basis_rays, "entries": cm.entries},
            "beta_p": beta,
            "batyrev": {
                "linear": gens.linear_strings(),
                "quantum_sr": gens.quantum_sr_strings(&cm),
                "reduced": gens.reduced_strings(&cm),
            },
        })));
    }
    let label = |p: &[usize]| format!("{{{}}}", p.iter().map(|i| format!("rho{}", i + 1)).collect::<Vec<_>>().join(","));
    let mut out = String::new();
    writeln!(out, "rays: {:?}", fan.rays()).unwrap();
    writeln!(out, "max cones: {:?}", fan.max_cones()).unwrap();
    writeln!(out, "valid: yes").unwrap();
    let basis_rays: Vec<String> = cm.basis_rays.iter().map(|i| format!("rho{}", i + 1)).collect();
    writeln!(out, "class matrix (basis cone {cone}, dual to {}):", basis_rays.join(", ")).unwrap();
    for row in &cm.entries {
        writeln!(out, "  {row:?}").unwrap();
    }
    writeln!(out, "primitive collections:").unwrap();
    for pc in &relations {
        writeln!(out, "  {}  relation {:?}  beta {:?} -> {}", label(&pc.rays), pc.relation, pc.beta, gens.q_monomial(&cm, &pc.beta))
            .unwrap();
    }
    writeln!(out, "linear relations: {}", gens.linear_strings().join(", ")).unwrap();
    writeln!(out, "quantum Stanley-Reisner: {}", gens.quantum_sr_strings(&cm).join(", ")).unwrap();
    writeln!(out, "presentation: <{}>", gens.reduced_strings(&cm).join(", ")).unwrap();
    Ok(out)
}

fn invariant_name(family: Family) -> &'static str {
    match family {
        Family::DD4 => "<D2,1>",
        Family::D2PlusDD4 => "<D1,pt>",
    }
}

struct DegreeRow {
    d: u32,
    value: String,
    loci: Vec<LocusRecord>,
}

fn degree_rows(family: Family, method: MethodArg, d_max: u32) -> Result<Vec<DegreeRow>, Failure> {
    let degrees: Vec<u32> = (family.min_degree()..=d_max).collect();
    let methods = method.methods();
    let per_d = Exec::Parallel.map(degrees.clone(), |d| {
        methods
            .iter()
            .map(|&m| contributions(family, d, m, Exec::Sequential))
            .collect::<Result<Vec<_>, Error>>()
    });
    let mut rows = Vec::new();
    for (d, per_method) in degrees.into_iter().zip(per_d) {
        let per_method = per_method?;
        let totals: Vec<_> = per_method
            .iter()
            .map(|cs| cs.iter().fold(num_traits::Zero::zero(), |acc: qf2_core::algebra::Rational, c| acc + &c.value))
            .collect();
        if totals.windows(2).any(|w| w[0] != w[1]) {
            return Err(Failure::Verify(format!(
                "{family} d={d}: closed {} and assembled {} disagree",
                fmt_rational(&totals[0]),
                fmt_rational(&totals[1])
            )));
        }
        let loci = per_method.iter().flatten().map(LocusRecord::from).collect();
        rows.push(DegreeRow { d, value: fmt_rational(&totals[0]), loci });
    }
    Ok(rows)
}

fn cmd_invariants(family: Family, method: MethodArg, d_max: u32, show_loci: bool, format: Format) -> Outcome {
    let rows = degree_rows(family, method, d_max)?;
    if format == Format::Json {
        let values: Vec<Value> = rows.iter().map(|r| json!({"d": r.d, "value": r.value})).collect();
        let mut v = json!({"family": family.to_string(), "invariant": invariant_name(family), "values": values});
        if show_loci {
            v["loci"] = rows.iter().map(|r| json!({"d": r.d, "loci": r.loci})).collect();
        }
        return Ok(json_out(v));
    }
    let mut out = String::new();
    writeln!(out, "{} in class {}", invariant_name(family), if family == Family::DD4 { "dD4" } else { "D2+dD4" }).unwrap();
    for r in &rows {
        writeln!(out, "d={:<3} {}", r.d, r.value).unwrap();
        if show_loci {
            for l in &r.loci {
                writeln!(out, "    {:<16} {:>24}  ({})", l.graph, l.value, l.method).unwrap();
            }
        }
    }
    Ok(out)
}

fn cmd_loci(family: Family, method: MethodArg, d_max: u32, format: Format) -> Outcome {
    let rows = degree_rows(family, method, d_max)?;
    if format == Format::Json {
        let v: Vec<Value> = rows.iter().map(|r| json!({"d": r.d, "loci": r.loci})).collect();
        return Ok(json_out(json!({"family": family.to_string(), "degrees": v})));
    }
    let mut out = String::new();
    for r in &rows {
        writeln!(out, "{family} d={}", r.d).unwrap();
        for l in &r.loci {
            writeln!(out, "    {:<16} {:>24}  ({})", l.graph, l.value, l.method).unwrap();
        }
        writeln!(out, "    {:<16} {:>24}", "total", r.value).unwrap();
    }
    Ok(out)
}

fn cmd_module_table(order: u32, format: Format) -> String {
    let rows = module_table(order);
    if format == Format::Json {
        return json_out(json!({"order": order, "entries": rows}));
    }
    let mut out = String::new();
    for r in rows {
        writeln!(out, "{}*{} = {}", r.generator, r.input, r.text).unwrap();
    }
    out
}

fn report_output(title: &str, r: &Report, format: Format) -> String {
    if format == Format::Json {
        json_out(json!({"check": title, "ok": r.ok(), "checks": r.checks}))
    } else {
        format!("{r}{title}: {}\n", if r.ok() { "all checks pass" } else { "FAILED" })
    }
}

fn finish(title: &str, r: Report, format: Format) -> Outcome {
    let out = report_output(title, &r, format);
    if r.ok() {
        Ok(out)
    } else {
        print!("{out}");
        Err(Failure::Verify(format!("{} check(s) failed\n", r.failures().count())))
    }
}

fn cmd_verify(order: u32, d_max: u32, format: Format) -> Outcome {
    let mut r = verify_relations(d_max, Exec::Parallel)?;
    r.extend(verify_table(order));
    r.extend(verify_module_axiom(order));
    r.extend(verify_quantum_relations(order));
    r.extend(verify_isomorphism(order));
    finish("verify", r, format)
}

fn element_text(v: &[Series], names: &[&str]) -> String {
    let parts: Vec<String> = v
        .iter()
        .zip(names)
        .filter(|(s, _)| !s.is_zero())
        .map(|(s, n)| if *n == "1" { format!("({s})") } else { format!("({s})*{n}") })
        .collect();
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

fn matrix_json(m: &SeriesMatrix) -> Value {
    (0..m.n()).map(|i| (0..m.n()).map(|j| m.get(i, j).to_json()).collect::<Value>()).collect()
}

fn cmd_batyrev(order: u32, check_iso: bool, format: Format) -> Outcome {
    let actions: Vec<(Generator, SeriesMatrix)> = Generator::ALL.iter().map(|&k| (k, bat_action_matrix(k, order))).collect();
    let phi = phi_matrix(order);
    let report = check_iso.then(|| verify_isomorphism(order));
    let out = if format == Format::Json {
        let mut v = json!({
            "order": order,
            "basis": BASIS_NAMES,
            "x2": matrix_json(&actions[0].1),
            "x4": matrix_json(&actions[1].1),
            "phi": matrix_json(&phi),
        });
        if let Some(r) = &report {
            v["isomorphism"] = json!({"ok": r.ok(), "checks": r.checks});
        }
        json_out(v)
    } else {
        let mut out = String::new();
        for (k, m) in &actions {
            let x = if *k == Generator::Sigma2 { "x2" } else { "x4" };
            for (j, name) in BASIS_NAMES.iter().enumerate() {
                writeln!(out, "{x} * {name} = {}", element_text(&m.column(j), &BASIS_NAMES)).unwrap();
            }
        }
        for (j, name) in BASIS_NAMES.iter().enumerate() {
            writeln!(out, "phi({name}) = {}", element_text(&phi.column(j), &basis::NAMES)).unwrap();
        }
        if let Some(r) = &report {
            write!(out, "{r}").unwrap();
        }
        out
    };
    match report {
        Some(r) if !r.ok() => {
            print!("{out}");
            Err(Failure::Verify("isomorphism check failed\n".into()))
        }
        _ => Ok(out),
    }
}

fn cmd_lm(b: u32, lambda: &[u32], psi: &[u32], format: Format) -> Outcome {
    if psi.len() != 2 {
        return Err(Failure::Input(format!("--psi takes two exponents a,c; got {psi:?}")));
    }
    let lambda = if lambda.is_empty() { vec![1; b as usize] } else { lambda.to_vec() };
    let part = Partition::of(b, lambda.clone())?;
    let value = integrate_d_lambda(b, &part, psi[0], psi[1])?;
    if format == Format::Json {
        return Ok(json_out(json!({"b": b, "lambda": part.parts(), "psi": psi, "value": fmt_rational(&value)})));
    }
    Ok(format!("{}\n", fmt_rational(&value)))
}

fn cmd_selftest(only: Option<u8>, format: Format) -> Outcome {
    let ids: Vec<u8> = match only {
        Some(id) if (1..=10).contains(&id) => vec![id],
        Some(id) => return Err(Failure::Input(format!("no criterion {id}; valid ids are 1-10"))),
        None => (1..=10).collect(),
    };
    let results: Vec<_> = ids.into_iter().map(|id| run_criterion(id, Exec::Parallel)).collect();
    let ok = results.iter().all(|c| c.passed);
    let out = if format == Format::Json {
        let v: Vec<Value> = results
            .iter()
            .map(|c| json!({"id": c.id, "title": c.title, "passed": c.passed, "detail": c.detail}))
            .collect();
        json_out(json!({"ok": ok, "criteria": v}))
    } else {
        results.iter().map(|c| format!("{c}\n")).collect()
    };
    if ok {
        Ok(out)
    } else {
        print!("{out}");
        let n = results.iter().filter(|c| !c.passed).count();
        Err(Failure::Verify(format!("{n} criterion(s) failed\n")))
    }
}
