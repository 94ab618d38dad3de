use std::f64::consts::PI;
use std::fs;

use copula_forge::generator::{CheckStatus, Family};
use copula_forge::measures::{
    closed_form_measures, generator_integrals, quadrature_measures, tau_phi5, MeasuresError,
};
use copula_forge::properties::{
    dependence_profile, oracle_pfd, oracle_pqd, oracle_tp2, pfd_closed_form, PropertyReport, Status, Verdict,
    PQD_ORACLE_GRID, TP2_ORACLE_GRID,
};
use copula_forge::{parse, AssociationMeasures, Copula, Generator, SamplePairs, ValidationReport};
use serde_json::{json, Value};

use crate::args::{Command, Format, GeneratorArgs, MethodArg};
use crate::render::{csv, fixed, num, object, opt_num, sci, table, to_json, witness, witness_text};

/// Why a command did not succeed, with its exit code.
#[derive(Debug)]
pub enum Failure {
    /// Bad arguments (exit 2).
    Usage(String),
    /// The generator is not admissible (exit 1).
    Validation { message: String, report: Option<Value> },
    /// Numerical failure (exit 1).
    Runtime(String),
}

impl Failure {
    pub fn code(&self) -> i32 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Validation { .. } | Failure::Runtime(_) => 1,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Failure::Usage(_) => "usage",
            Failure::Validation { .. } => "validation",
            Failure::Runtime(_) => "runtime",
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Runtime(m) => m,
            Failure::Validation { message, .. } => message,
        }
    }

    pub fn to_json(&self) -> Value {
        let mut err = object(vec![
            ("kind", json!(self.kind())),
            ("message", json!(self.message())),
            ("exit_code", json!(self.code())),
        ]);
        if let Failure::Validation { report: Some(r), .. } = self {
            err["report"] = r.clone();
        }
        json!({ "error": err })
    }
}

/// Text for stdout, plus a failure that still produced output.
pub struct Output {
    pub stdout: String,
    pub failure: Option<Failure>,
}

impl Output {
    fn ok(stdout: String) -> Self {
        Self { stdout, failure: None }
    }
}

pub fn execute(cmd: &Command) -> Result<Output, Failure> {
    match cmd {
        Command::Validate { generator, grid, tol, format } => validate(generator, *grid, *tol, *format),
        Command::Measures { generator, theta, method, resolution, format } => {
            measures(generator, *theta, *method, *resolution, *format)
        }
        Command::Table1 { theta, format } => table1(*theta, *format),
        Command::Sample { generator, theta, n, seed, out, format } => {
            let text = sample(&generator.clone().into(), *theta, *n, *seed, *format)?;
            match out {
                Some(path) => {
                    fs::write(path, text)
                        .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))?;
                    Ok(Output::ok(String::new()))
                }
                None => Ok(Output::ok(text)),
            }
        }
        Command::Check { generator, theta, grid, tol, oracle, format } => {
            check(generator, *theta, *grid, *tol, *oracle, *format)
        }
        Command::Converge { theta, n_min, n_max, format } => converge(*theta, *n_min, *n_max, *format),
    }
}

fn build_generator(args: &GeneratorArgs) -> Result<Generator, Failure> {
    match (&args.phi, &args.phi_expr) {
        (Some(f), None) => Generator::builtin(*f, args.phi_n).map_err(|e| Failure::Usage(e.to_string())),
        (None, Some(text)) => {
            let expr = parse(text).map_err(|e| Failure::Usage(format!("cannot parse --phi-expr: {e}")))?;
            Generator::from_expression(expr).map_err(|e| Failure::Validation {
                message: format!("generator is not admissible: {e}"),
                report: None,
            })
        }
        _ => Err(Failure::Usage("give exactly one of --phi or --phi-expr".to_string())),
    }
}

fn check_theta(theta: f64) -> Result<(), Failure> {
    if (-1.0..=1.0).contains(&theta) {
        Ok(())
    } else {
        Err(Failure::Usage(format!("--theta must lie in [-1, 1], got {theta}")))
    }
}

fn status_name(s: &CheckStatus<f64>) -> &'static str {
    match s {
        CheckStatus::Pass => "pass",
        CheckStatus::PassGrid => "pass_grid",
        CheckStatus::Fail { .. } => "fail",
        CheckStatus::Inconclusive { .. } => "inconclusive",
    }
}

fn validation_json(r: &ValidationReport) -> Value {
    let conditions: Vec<Value> = r
        .checks()
        .iter()
        .map(|c| {
            let (w, v, reason) = match &c.status {
                CheckStatus::Fail { witness, value } => (Some(*witness), Some(*value), None),
                CheckStatus::Inconclusive { reason } => (None, None, Some(reason.clone())),
                _ => (None, None, None),
            };
            object(vec![
                ("condition", json!(c.condition.code())),
                ("description", json!(c.condition.description())),
                ("status", json!(status_name(&c.status))),
                ("witness", opt_num(w)),
                ("value", opt_num(v)),
                ("reason", reason.map(Value::from).unwrap_or(Value::Null)),
                ("grid_points", json!(c.grid_points)),
                ("tol", num(c.tol)),
            ])
        })
        .collect();
    object(vec![
        ("generator", json!(r.generator)),
        ("passed", json!(r.passed())),
        ("conditions", Value::Array(conditions)),
    ])
}

fn validation_table(r: &ValidationReport) -> String {
    let rows: Vec<Vec<String>> = r
        .checks()
        .iter()
        .map(|c| {
            let (w, v) = match &c.status {
                CheckStatus::Fail { witness, value } => (fixed(*witness), fixed(*value)),
                _ => ("-".to_string(), "-".to_string()),
            };
            vec![
                format!("({})", c.condition.code()),
                c.condition.description().to_string(),
                c.status.label().to_string(),
                w,
                v,
                c.grid_points.to_string(),
                format!("{:e}", c.tol),
            ]
        })
        .collect();
    let verdict = if r.passed() { "admissible" } else { "not admissible" };
    format!(
        "generator: {}\n{}overall: {verdict}\n",
        r.generator,
        table(&["cond", "requirement", "status", "witness", "value", "grid", "tol"], &rows)
    )
}

fn validation_failure(r: &ValidationReport) -> Failure {
    let problems: Vec<String> = r
        .checks()
        .iter()
        .filter_map(|c| match &c.status {
            CheckStatus::Fail { witness, value } => Some(format!(
                "condition ({}) {} violated at x = {witness} (value {value})",
                c.condition.code(),
                c.condition.description()
            )),
            CheckStatus::Inconclusive { reason } => {
                Some(format!("condition ({}) inconclusive: {reason}", c.condition.code()))
            }
            _ => None,
        })
        .collect();
    Failure::Validation {
        message: format!("validation failed: {}", problems.join("; ")),
        report: Some(validation_json(r)),
    }
}

fn validated_copula(args: &GeneratorArgs, theta: f64) -> Result<Copula, Failure> {
    check_theta(theta)?;
    let gen = build_generator(args)?;
    let report = gen.validate_default();
    if !report.passed() {
        return Err(validation_failure(&report));
    }
    Copula::new(gen, theta).map_err(|e| Failure::Runtime(e.to_string()))
}

fn validate(args: &GeneratorArgs, grid: usize, tol: f64, format: Format) -> Result<Output, Failure> {
    if !(tol > 0.0) {
        return Err(Failure::Usage(format!("--tol must be positive, got {tol}")));
    }
    let gen = build_generator(args)?;
    let report = gen.validate(grid, tol).map_err(|e| Failure::Usage(e.to_string()))?;
    let stdout = match format {
        Format::Json => to_json(&validation_json(&report)),
        _ => validation_table(&report),
    };
    let failure = (!report.passed()).then(|| validation_failure(&report));
    Ok(Output { stdout, failure })
}

fn measures_json(m: &AssociationMeasures) -> Value {
    object(vec![
        ("method", json!(m.method.name())),
        ("sigma", num(m.sigma)),
        ("tau", num(m.tau)),
        ("rho", num(m.rho)),
    ])
}

fn measures(
    args: &GeneratorArgs,
    theta: f64,
    method: MethodArg,
    resolution: usize,
    format: Format,
) -> Result<Output, Failure> {
    let cop = validated_copula(args, theta)?;
    let runtime = |e: MeasuresError| Failure::Runtime(e.to_string());
    let mut results = Vec::new();
    if matches!(method, MethodArg::Closed | MethodArg::Both) {
        results.push(closed_form_measures(&cop).map_err(runtime)?);
    }
    if matches!(method, MethodArg::Quad | MethodArg::Both) {
        let q = quadrature_measures(&cop, resolution).map_err(|e| match e {
            MeasuresError::Resolution(_) => Failure::Usage(e.to_string()),
            other => runtime(other),
        })?;
        results.push(q);
    }
    let diff = (results.len() == 2).then(|| {
        let (a, b) = (results[0], results[1]);
        [(a.sigma - b.sigma).abs(), (a.tau - b.tau).abs(), (a.rho - b.rho).abs()]
    });
    let label = cop.generator().label().to_string();
    let stdout = match format {
        Format::Json => {
            let mut entries = vec![
                ("generator", json!(label)),
                ("theta", num(theta)),
                ("results", Value::Array(results.iter().map(measures_json).collect())),
            ];
            if let Some(d) = diff {
                entries.push(("abs_diff", object(vec![("sigma", num(d[0])), ("tau", num(d[1])), ("rho", num(d[2]))])));
            }
            to_json(&object(entries))
        }
        _ => {
            let mut headers = vec!["measure"];
            headers.extend(results.iter().map(|m| m.method.name()));
            if diff.is_some() {
                headers.push("abs_diff");
            }
            let rows: Vec<Vec<String>> = ["sigma", "tau", "rho"]
                .iter()
                .enumerate()
                .map(|(i, name)| {
                    let mut row = vec![name.to_string()];
                    for m in &results {
                        row.push(fixed([m.sigma, m.tau, m.rho][i]));
                    }
                    if let Some(d) = diff {
                        row.push(fixed(d[i]));
                    }
                    row
                })
                .collect();
            format!("generator: {label}\ntheta: {}\n{}", fixed(theta), table(&headers, &rows))
        }
    };
    Ok(Output::ok(stdout))
}

/// Reference values `(sigma, tau, rho)` and their formulas for phi1 to phi4.
pub fn table1_reference(family: Family, theta: f64) -> ([f64; 3], [&'static str; 3]) {
    let a = theta.abs();
    let p4 = PI.powi(4);
    match family {
        Family::Phi1 => ([3.0 * a / 4.0, theta / 2.0, 3.0 * theta / 4.0], ["3|theta|/4", "theta/2", "3theta/4"]),
        Family::Phi2 => ([a / 3.0, 2.0 * theta / 9.0, theta / 3.0], ["|theta|/3", "2theta/9", "theta/3"]),
        Family::Phi3 => ([3.0 * a / 64.0, 0.0, 0.0], ["3|theta|/64", "0", "0"]),
        Family::Phi4 => (
            [48.0 * a / p4, 32.0 * theta / p4, 48.0 * theta / p4],
            ["48|theta|/pi^4", "32theta/pi^4", "48theta/pi^4"],
        ),
        _ => unreachable!("table covers phi1 to phi4"),
    }
}

pub const TABLE1_TOL: f64 = 1e-10;

fn table1(theta: f64, format: Format) -> Result<Output, Failure> {
    check_theta(theta)?;
    let families = [Family::Phi1, Family::Phi2, Family::Phi3, Family::Phi4];
    let mut rows = Vec::new();
    for f in families {
        let cop = Copula::new(Generator::builtin(f, None).expect("catalog"), theta)
            .map_err(|e| Failure::Runtime(e.to_string()))?;
        let m = closed_form_measures(&cop).map_err(|e| Failure::Runtime(e.to_string()))?;
        let (reference, formulas) = table1_reference(f, theta);
        let computed = [m.sigma, m.tau, m.rho];
        let agree = computed.iter().zip(&reference).all(|(c, r)| (c - r).abs() <= TABLE1_TOL);
        rows.push((f, computed, reference, formulas, agree));
    }
    let names = ["sigma", "tau", "rho"];
    let stdout = match format {
        Format::Json => {
            let items: Vec<Value> = rows
                .iter()
                .map(|(f, c, r, fo, agree)| {
                    let mut entries = vec![("generator", json!(f.name()))];
                    let mut per = Vec::new();
                    for i in 0..3 {
                        per.push((
                            names[i],
                            object(vec![("computed", num(c[i])), ("reference", num(r[i])), ("formula", json!(fo[i]))]),
                        ));
                    }
                    entries.extend(per);
                    entries.push(("agree", json!(agree)));
                    object(entries)
                })
                .collect();
            to_json(&object(vec![
                ("theta", num(theta)),
                ("tolerance", num(TABLE1_TOL)),
                ("rows", Value::Array(items)),
            ]))
        }
        Format::Csv => {
            let body: Vec<Vec<String>> = rows
                .iter()
                .map(|(f, c, r, fo, agree)| {
                    let mut row = vec![f.name().to_string()];
                    for i in 0..3 {
                        row.extend([sci(c[i]), sci(r[i]), fo[i].to_string()]);
                    }
                    row.push(agree.to_string());
                    row
                })
                .collect();
            csv(
                &[
                    "generator", "sigma", "sigma_ref", "sigma_formula", "tau", "tau_ref", "tau_formula", "rho",
                    "rho_ref", "rho_formula", "agree",
                ],
                &body,
            )
        }
        Format::Table => {
            let body: Vec<Vec<String>> = rows
                .iter()
                .map(|(f, c, r, fo, agree)| {
                    let mut row = vec![f.name().to_string()];
                    for i in 0..3 {
                        row.push(fixed(c[i]));
                        row.push(format!("{} = {}", fixed(r[i]), fo[i]));
                    }
                    row.push(if *agree { "yes" } else { "no" }.to_string());
                    row
                })
                .collect();
            format!(
                "theta: {}\n{}",
                fixed(theta),
                table(&["generator", "sigma", "sigma ref", "tau", "tau ref", "rho", "rho ref", "agree"], &body)
            )
        }
    };
    Ok(Output::ok(stdout))
}

pub fn sample_csv(s: &SamplePairs) -> String {
    let mut out = String::with_capacity(48 * s.pairs.len() + 4);
    out.push_str("u,v\n");
    for &(u, v) in &s.pairs {
        out.push_str(&sci(u));
        out.push(',');
        out.push_str(&sci(v));
        out.push('\n');
    }
    out
}

fn sample(args: &GeneratorArgs, theta: f64, n: usize, seed: u64, format: Format) -> Result<String, Failure> {
    if n == 0 {
        return Err(Failure::Usage("--n must be at least 1".to_string()));
    }
    let cop = validated_copula(args, theta)?;
    let s = cop.sample(n, seed).map_err(|e| Failure::Runtime(e.to_string()))?;
    Ok(match format {
        Format::Json => to_json(&object(vec![
            ("generator", json!(cop.generator().label())),
            ("theta", num(theta)),
            ("seed", json!(seed)),
            ("n", json!(s.n)),
            (
                "pairs",
                Value::Array(s.pairs.iter().map(|&(u, v)| Value::Array(vec![num(u), num(v)])).collect()),
            ),
        ])),
        _ => sample_csv(&s),
    })
}

fn verdict_json(v: &Verdict<f64>) -> Value {
    object(vec![
        ("status", json!(v.status.name())),
        ("method", json!(v.method.name())),
        ("witness", witness(&v.witness)),
        ("note", json!(v.note)),
    ])
}

pub fn report_json(r: &PropertyReport<f64>) -> Value {
    let verdicts = object(r.verdicts().iter().map(|(name, v)| (*name, verdict_json(v))).collect());
    object(vec![
        ("generator", json!(r.generator)),
        ("theta", num(r.theta)),
        ("grid", json!(r.grid)),
        ("tol", num(r.tol)),
        ("negative_dependence", json!(r.negative_dependence)),
        ("verdicts", verdicts),
    ])
}

type TestFunction = (&'static str, fn(f64) -> f64);

const PFD_TEST_FUNCTIONS: [TestFunction; 4] = [
    ("t", |t| t),
    ("t^2", |t| t * t),
    ("sin(pi t)", |t| (PI * t).sin()),
    ("logistic step", |t| 1.0 / (1.0 + (-40.0 * (t - 0.5)).exp())),
];

pub const PFD_AGREEMENT_TOL: f64 = 1e-6;
pub const PFD_NEGATIVE_SLACK: f64 = 1e-10;

fn agreement(condition: &Verdict<f64>, oracle: &Verdict<f64>, theta: f64) -> &'static str {
    if theta < 0.0 {
        "not_applicable"
    } else if condition.status == Status::Inconclusive || oracle.status == Status::Inconclusive {
        "inconclusive"
    } else if condition.status == oracle.status {
        "agree"
    } else {
        "disagree"
    }
}

fn check(
    args: &GeneratorArgs,
    theta: f64,
    grid: usize,
    tol: f64,
    with_oracle: bool,
    format: Format,
) -> Result<Output, Failure> {
    if grid < 3 {
        return Err(Failure::Usage(format!("--grid must be at least 3, got {grid}")));
    }
    if !(tol > 0.0) {
        return Err(Failure::Usage(format!("--tol must be positive, got {tol}")));
    }
    let cop = validated_copula(args, theta)?;
    let report = dependence_profile(cop.generator(), theta, grid, tol);
    let oracle = if with_oracle {
        let pqd = oracle_pqd(&cop, PQD_ORACLE_GRID);
        let tp2 = oracle_tp2(&cop, TP2_ORACLE_GRID);
        let mut pfd = Vec::new();
        for (name, g) in PFD_TEST_FUNCTIONS {
            let cov = oracle_pfd(&cop, g, 512).map_err(|e| Failure::Runtime(e.to_string()))?;
            let closed = pfd_closed_form(&cop, g).map_err(|e| Failure::Runtime(e.to_string()))?;
            pfd.push((name, cov, closed));
        }
        Some((pqd, tp2, pfd))
    } else {
        None
    };
    let stdout = match format {
        Format::Json => {
            let mut doc = report_json(&report);
            if let Some((pqd, tp2, pfd)) = &oracle {
                let o = |v: &Verdict<f64>, cond: &Verdict<f64>| {
                    let mut j = verdict_json(v);
                    j["agreement"] = json!(agreement(cond, v, theta));
                    j
                };
                let pqd_j = o(pqd, &report.pqd);
                let tp2_j = o(tp2, &report.tp2);
                let pfd_j: Vec<Value> = pfd
                    .iter()
                    .map(|(name, cov, closed)| {
                        object(vec![
                            ("g", json!(name)),
                            ("covariance", num(*cov)),
                            ("closed_form", num(*closed)),
                            ("abs_diff", num((cov - closed).abs())),
                            ("agree", json!((cov - closed).abs() <= PFD_AGREEMENT_TOL)),
                            ("nonnegative", json!(*cov >= -PFD_NEGATIVE_SLACK)),
                        ])
                    })
                    .collect();
                doc["oracle"] = object(vec![("pqd", pqd_j), ("tp2", tp2_j), ("pfd", Value::Array(pfd_j))]);
            }
            to_json(&doc)
        }
        _ => {
            let rows: Vec<Vec<String>> = report
                .verdicts()
                .iter()
                .map(|(name, v)| {
                    vec![
                        name.to_string(),
                        v.status.name().to_string(),
                        v.method.name().to_string(),
                        witness_text(&v.witness),
                        v.note.clone(),
                    ]
                })
                .collect();
            let mut out = format!(
                "generator: {}\ntheta: {}\ngrid: {grid}\ntol: {tol:e}\n",
                report.generator,
                fixed(theta)
            );
            if report.negative_dependence {
                out.push_str("semantics: theta < 0, verdicts refer to the negative-dependence counterparts\n");
            }
            out.push_str(&table(&["property", "status", "method", "witness", "note"], &rows));
            if let Some((pqd, tp2, pfd)) = &oracle {
                out.push_str("\noracles:\n");
                let rows = vec![
                    vec![
                        "pqd".to_string(),
                        pqd.status.name().to_string(),
                        agreement(&report.pqd, pqd, theta).to_string(),
                        witness_text(&pqd.witness),
                    ],
                    vec![
                        "tp2".to_string(),
                        tp2.status.name().to_string(),
                        agreement(&report.tp2, tp2, theta).to_string(),
                        witness_text(&tp2.witness),
                    ],
                ];
                out.push_str(&table(&["oracle", "status", "agreement", "witness"], &rows));
                let rows: Vec<Vec<String>> = pfd
                    .iter()
                    .map(|(name, cov, closed)| {
                        vec![
                            name.to_string(),
                            fixed(*cov),
                            fixed(*closed),
                            if (cov - closed).abs() <= PFD_AGREEMENT_TOL { "agree" } else { "disagree" }.to_string(),
                        ]
                    })
                    .collect();
                out.push('\n');
                out.push_str(&table(&["pfd g", "covariance", "closed form", "agreement"], &rows));
            }
            out
        }
    };
    Ok(Output::ok(stdout))
}

struct ConvergeRow {
    n: u32,
    tau5_formula: f64,
    tau5_quadrature: f64,
    phi5_admissible: bool,
    tau6_quadrature: Option<f64>,
}

fn tau_by_quadrature(g: &Generator, theta: f64) -> Result<f64, Failure> {
    let (i, _) = generator_integrals(g).map_err(|e| Failure::Runtime(e.to_string()))?;
    Ok(8.0 * theta * i * i)
}

fn converge(theta: f64, n_min: u32, n_max: u32, format: Format) -> Result<Output, Failure> {
    check_theta(theta)?;
    if n_min < 1 || n_max < n_min {
        return Err(Failure::Usage(format!("need 1 <= --n-min <= --n-max, got {n_min} and {n_max}")));
    }
    let mut rows = Vec::new();
    for n in n_min..=n_max {
        let g5 = Generator::builtin(Family::Phi5, Some(n)).expect("n >= 1");
        let tau6 = if n >= 2 {
            Some(tau_by_quadrature(&Generator::builtin(Family::Phi6, Some(n)).expect("n >= 2"), theta)?)
        } else {
            None
        };
        rows.push(ConvergeRow {
            n,
            tau5_formula: tau_phi5(n, theta),
            tau5_quadrature: tau_by_quadrature(&g5, theta)?,
            phi5_admissible: g5.validate_default().passed(),
            tau6_quadrature: tau6,
        });
    }
    let stdout = match format {
        Format::Json => {
            let items: Vec<Value> = rows
                .iter()
                .map(|r| {
                    object(vec![
                        ("n", json!(r.n)),
                        ("tau5_formula", num(r.tau5_formula)),
                        ("tau5_quadrature", num(r.tau5_quadrature)),
                        ("phi5_admissible", json!(r.phi5_admissible)),
                        ("tau6_quadrature", opt_num(r.tau6_quadrature)),
                    ])
                })
                .collect();
            to_json(&object(vec![("theta", num(theta)), ("rows", Value::Array(items))]))
        }
        Format::Csv => csv(
            &["n", "tau5_formula", "tau5_quadrature", "phi5_admissible", "tau6_quadrature"],
            &rows
                .iter()
                .map(|r| {
                    vec![
                        r.n.to_string(),
                        sci(r.tau5_formula),
                        sci(r.tau5_quadrature),
                        r.phi5_admissible.to_string(),
                        r.tau6_quadrature.map(sci).unwrap_or_default(),
                    ]
                })
                .collect::<Vec<_>>(),
        ),
        Format::Table => {
            let body: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    vec![
                        r.n.to_string(),
                        fixed(r.tau5_formula),
                        fixed(r.tau5_quadrature),
                        if r.phi5_admissible { "yes" } else { "no" }.to_string(),
                        r.tau6_quadrature.map(fixed).unwrap_or_else(|| "-".to_string()),
                    ]
                })
                .collect();
            format!(
                "theta: {}\n{}",
                fixed(theta),
                table(&["n", "tau5 formula", "tau5 quadrature", "phi5 admissible", "tau6 quadrature"], &body)
            )
        }
    };
    Ok(Output::ok(stdout))
}
