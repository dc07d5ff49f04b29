use cimirror::equivariant::{equiv_integral, pairing_matrix, poly_to_localizations, residue_integral, TorusSetup};
use cimirror::exactalg::{fmt_rat, parse_rat, QSeries, Rat, RatFunc};
use cimirror::hyperseries::{
    annihilates, build_s, build_s_star, build_zstar_equivariant, modified_pf_operator, pf_operator, zstar_coefficient,
    CIConfig, HyperError, Regime,
};
use cimirror::locrec::verify::{random_rats, sample_kernels};
use cimirror::locrec::{classp_check, verify_recursion_identity, EqualityMode, LocrecError, RecursionKernel};
use cimirror::mirrormap::{
    certify_pipeline_exact, check_initial_conditions, check_pipeline_sampled, instanton_numbers, yukawa_k, MirrorCheck,
    MirrorError,
};
use cimirror::p2gw::{compare_limits, p2_recursion, p2_recursion_symbolic, weighted_degree, P2Setup};
use cimirror::sqcring::{closed_form_relation, lines_on_cubic, relation_from_pf, SqcError};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};
use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

#[derive(Parser)]
#[command(name = "cimirror", about = "Exact mirror-theorem computations for projective complete intersections")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Seed for random weight sampling.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Use symbolic weights and exact identities where a check supports it.
    #[arg(long, global = true)]
    exact: bool,
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum WeightMode {
    Symbolic,
    Random,
    Explicit,
}

#[derive(Args, Clone)]
struct ConfigArgs {
    /// Dimension of the ambient projective space.
    #[arg(long)]
    n: Option<usize>,
    /// Comma-separated degrees of the defining equations (may be empty).
    #[arg(long, default_value = "")]
    degrees: String,
}

#[derive(Subcommand)]
enum Command {
    /// Hypergeometric series S* and the Z* coefficients.
    Series {
        #[command(flatten)]
        config: ConfigArgs,
        #[arg(long, default_value_t = 3)]
        order: usize,
        #[arg(long, value_enum, default_value_t = WeightMode::Symbolic)]
        weights: WeightMode,
        /// Comma-separated rationals for explicit weights.
        #[arg(long)]
        lambdas: Option<String>,
        #[arg(long)]
        mus: Option<String>,
    },
    /// Runs one family of checks; exit 0 iff all pass.
    Verify(VerifyArgs),
    /// Instanton numbers of a Calabi-Yau threefold.
    Instanton {
        #[command(flatten)]
        config: ConfigArgs,
        #[arg(long, default_value_t = 3)]
        max_d: usize,
    },
    /// Table of N_{d,k} for the projective plane.
    P2 {
        #[arg(long, default_value_t = 4)]
        max_d: usize,
        #[arg(long, default_value_t = 0)]
        max_k: usize,
        /// Integer weights a,b,c; symbolic e1,e2,e3 when omitted.
        #[arg(long)]
        weights: Option<String>,
    },
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(value_enum)]
    check: Check,
    #[command(flatten)]
    config: ConfigArgs,
    #[arg(long, default_value_t = 3)]
    order: usize,
    #[arg(long, default_value_t = 4)]
    max_d: usize,
    /// Random weight points for sampled checks.
    #[arg(long, default_value_t = 3)]
    points: usize,
    /// Random polynomials for the residue check.
    #[arg(long, default_value_t = 50)]
    samples: usize,
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq, Debug)]
enum Check {
    Pf,
    Recursion,
    Mirror,
    Initial,
    Classp,
    Sqc,
    P2,
    Equivariant,
}

enum Failure {
    Config(String),
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Config(e.to_string())
    }
}

struct Report {
    config: Value,
    results: Vec<Value>,
    verdict: Option<bool>,
    table: Option<(Vec<String>, Vec<Vec<String>>)>,
}

fn parse_config(a: &ConfigArgs) -> Result<CIConfig, Failure> {
    let n = a.n.ok_or_else(|| Failure::Config("--n is required".into()))?;
    let degrees = parse_list(&a.degrees, |s| s.parse::<usize>().map_err(|e| e.to_string()))?;
    CIConfig::new(n, degrees).map_err(|e| match e {
        HyperError::RegimeOutOfRange => Failure::Config("degree regime out of range".into()),
        other => Failure::Config(other.to_string()),
    })
}

fn parse_list<T>(s: &str, f: impl Fn(&str) -> Result<T, String>) -> Result<Vec<T>, Failure> {
    s.split(',')
        .map(str::trim)
        .filter(|x| !x.is_empty())
        .map(|x| f(x).map_err(|e| Failure::Config(format!("cannot parse {x:?}: {e}"))))
        .collect()
}

fn config_json(c: &CIConfig) -> Value {
    json!({"n": c.n(), "degrees": c.degrees(), "regime": c.regime().to_string()})
}

fn rat_series(s: &QSeries<Rat>) -> Value {
    Value::from(s.coeffs().iter().map(fmt_rat).collect::<Vec<_>>())
}

fn check(name: &str, passed: bool, detail: impl Into<String>) -> Value {
    json!({"check": name, "passed": passed, "detail": detail.into()})
}

fn mirror_checks(v: Vec<MirrorCheck>) -> Vec<Value> {
    v.into_iter().map(|c| check(&c.name, c.passed, c.detail)).collect()
}

fn weights_setup(
    config: &CIConfig,
    mode: WeightMode,
    lambdas: &Option<String>,
    mus: &Option<String>,
    seed: u64,
    order: usize,
) -> Result<TorusSetup, Failure> {
    let symbolic = TorusSetup::symbolic(config.n(), config.r())?;
    match mode {
        WeightMode::Symbolic => Ok(symbolic),
        WeightMode::Random => {
            let kernel = RecursionKernel::new(config.clone(), symbolic)?;
            Ok(sample_kernels(&kernel, 1, seed, order)?.remove(0).setup().clone())
        }
        WeightMode::Explicit => {
            let parse = |s: &Option<String>| {
                parse_list(s.as_deref().unwrap_or(""), |x| parse_rat(x).map_err(|e| e.to_string()))
            };
            let l = parse(lambdas)?;
            let m = parse(mus)?;
            if l.len() != config.n() + 1 || m.len() != config.r() {
                return Err(Failure::Config(format!("expected {} lambdas and {} mus", config.n() + 1, config.r())));
            }
            Ok(TorusSetup::at_point(&l, &m)?)
        }
    }
}

fn cmd_series(
    config: &CIConfig,
    order: usize,
    mode: WeightMode,
    lambdas: &Option<String>,
    mus: &Option<String>,
    seed: u64,
) -> Result<Report, Failure> {
    let f = QSeries::from_fn(order, |d| config.hypergeometric_coefficient(d));
    let s = build_s_star(config, order);
    let s_star: Vec<Value> = s.coeffs().iter().map(|c| Value::from(c.to_string())).collect();
    let setup = weights_setup(config, mode, lambdas, mus, seed, order)?;
    let mut zstar = Vec::new();
    for i in 0..=config.n() {
        let z = build_zstar_equivariant(config, &setup, i, order)?;
        zstar.push(Value::from(z.coeffs().iter().map(RatFunc::to_exact_string).collect::<Vec<_>>()));
    }
    let weights: Vec<String> = setup.lambdas().iter().chain(setup.mus()).map(|m| m.to_string()).collect();
    let mut cfg = config_json(config);
    cfg["order"] = json!(order);
    cfg["weights"] = json!(weights);
    Ok(Report {
        config: cfg,
        results: vec![json!({"f": rat_series(&f), "s_star": s_star, "zstar": zstar})],
        verdict: None,
        table: None,
    })
}

fn verify_pf(config: &CIConfig, order: usize) -> Vec<Value> {
    let s_star = build_s_star(config, order);
    let mut out = vec![check(
        "Picard-Fuchs operator annihilates S*",
        annihilates(&pf_operator(config), &s_star),
        format!("through q^{order}"),
    )];
    if config.regime() == Regime::Critical {
        let s = build_s(config, order).expect("critical twist");
        out.push(check(
            "modified operator annihilates S",
            annihilates(&modified_pf_operator(config), &s),
            format!("through q^{order}"),
        ));
    }
    out
}

fn verify_recursion(
    config: &CIConfig,
    order: usize,
    exact: bool,
    points: usize,
    seed: u64,
) -> Result<Vec<Value>, Failure> {
    let kernel = RecursionKernel::new(config.clone(), TorusSetup::symbolic(config.n(), config.r())?)?;
    let mode = match (exact, EqualityMode::default_for(config.n(), seed)) {
        (true, _) => EqualityMode::Exact,
        (false, EqualityMode::Sampled { .. }) => EqualityMode::Sampled { points, seed },
        (false, m) => m,
    };
    let rep = verify_recursion_identity(&kernel, order, mode)?;
    Ok(rep
        .checks
        .iter()
        .map(|c| check(&format!("recursion identity i={} d={}", c.i, c.d), c.passed, c.detail.clone()))
        .collect())
}

fn verify_classp(config: &CIConfig, order: usize, exact: bool, seed: u64) -> Result<Vec<Value>, Failure> {
    if config.regime() != Regime::CalabiYau {
        return Err(Failure::Config(MirrorError::NotCalabiYau.to_string()));
    }
    let symbolic = RecursionKernel::new(config.clone(), TorusSetup::symbolic(config.n(), config.r())?)?;
    let kernel = if exact { symbolic } else { sample_kernels(&symbolic, 1, seed, order)?.remove(0) };
    let table: Vec<Vec<RatFunc>> = (0..=config.n())
        .map(|i| (0..=order.max(1)).map(|d| zstar_coefficient(config, kernel.setup(), i, d)).collect::<Result<_, _>>())
        .collect::<Result<_, _>>()?;
    let fam = |i: usize, d: usize| -> Result<RatFunc, LocrecError> { Ok(table[i][d].clone()) };
    let verdict = classp_check(&kernel, &fam, order)?;
    let mut out: Vec<Value> = verdict
        .per_degree
        .iter()
        .map(|(d, ok)| check(&format!("correlator of Z* at d={d} is a bounded polynomial"), *ok, ""))
        .collect();
    let corrupted = |i: usize, d: usize| -> Result<RatFunc, LocrecError> {
        let c = table[i][d].clone();
        Ok(if d == 1 { c.div_poly(&kernel.setup().hbar())? } else { c })
    };
    let rejected = !classp_check(&kernel, &corrupted, order.max(1))?.passed();
    out.push(check("corrupted family is rejected", rejected, "C_i(1) divided by ħ"));
    Ok(out)
}

fn verify_sqc(config: &CIConfig) -> Result<Vec<Value>, Failure> {
    let rel = relation_from_pf(config).map_err(|e| match e {
        SqcError::CalabiYau => Failure::Config(e.to_string()),
        other => Failure::Config(other.to_string()),
    })?;
    let closed = closed_form_relation(config)?;
    let mut matches = check("relation matches closed form", rel == closed, rel.to_string());
    if rel.is_formal() {
        matches["formal"] = json!("formal, excluded surface case");
    }
    let mut out =
        vec![matches, check("relation is homogeneous", rel.is_homogeneous(), format!("deg q = {}", rel.q_weight()))];
    if config.n() == 3 && config.degrees() == [3] {
        let lines = lines_on_cubic();
        out.push(check("lines on the cubic surface", lines == Rat::from_integer(27.into()), fmt_rat(&lines)));
    }
    Ok(out)
}

fn verify_p2(max_d: usize) -> Vec<Value> {
    let table = p2_recursion(&P2Setup::new(0, 0, 0), max_d, 0);
    let rep = compare_limits(&table, max_d);
    let detail = match rep.first_mismatch {
        None => format!("degrees 2..={max_d} agree"),
        Some(d) => format!("first mismatch at d={d}"),
    };
    let sym = p2_recursion_symbolic(max_d, 3);
    let graded = sym.entries().all(|((_, k), v)| weighted_degree(v) == Some(k as u32));
    vec![
        check("zero-weight limit equals Kontsevich oracle", rep.passed(), detail),
        check("N_{d,k} weighted-homogeneous of degree k", graded, format!("d <= {max_d}, k <= 3")),
    ]
}

fn verify_equivariant(n: usize, samples: usize, seed: u64) -> Result<Vec<Value>, Failure> {
    let setup = TorusSetup::symbolic(n, 0)?;
    let ctx = setup.ctx().clone();
    let m = pairing_matrix(&setup)?;
    let mut ortho = true;
    for (i, row) in m.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            let want = if i == j {
                RatFunc::from_factors(&ctx, &[], &[setup.tangent_weight(i)])?
            } else {
                RatFunc::zero(&ctx)
            };
            ortho &= v.equals(&want);
        }
    }
    let mut agree = true;
    let deg = 2 * n + 1;
    let coeffs = random_rats(seed, samples * (deg + 1));
    for chunk in coeffs.chunks(deg + 1) {
        let f: Vec<RatFunc> = chunk.iter().map(|c| RatFunc::constant(&ctx, c.clone())).collect();
        let loc = equiv_integral(&setup, &poly_to_localizations(&setup, &f))?;
        agree &= loc.equals(&residue_integral(&setup, &f));
    }
    Ok(vec![
        check("phi basis orthogonality", ortho, format!("n={n}")),
        check("residue integral equals localization sum", agree, format!("{samples} random polynomials")),
    ])
}

fn cmd_verify(args: &VerifyArgs, exact: bool, seed: u64) -> Result<Report, Failure> {
    let VerifyArgs { check: which, config: ref cfg, order, max_d, points, samples } = *args;
    let mut config_v = json!({"check": format!("{which:?}").to_lowercase(), "order": order, "exact": exact});
    let needs_config = !matches!(which, Check::P2 | Check::Equivariant);
    let config = if needs_config { Some(parse_config(cfg)?) } else { None };
    if let Some(c) = &config {
        let Value::Object(extra) = config_json(c) else { unreachable!() };
        config_v.as_object_mut().expect("object").extend(extra);
    }
    let results = match (which, &config) {
        (Check::Pf, Some(c)) => verify_pf(c, order),
        (Check::Recursion, Some(c)) => verify_recursion(c, order, exact, points, seed)?,
        (Check::Mirror, Some(c)) => {
            let r = if exact {
                certify_pipeline_exact(c, order, seed)
            } else {
                check_pipeline_sampled(c, order, points, seed)
            };
            mirror_checks(r?)
        }
        (Check::Initial, Some(c)) => mirror_checks(check_initial_conditions(c, order, points, seed)?),
        (Check::Classp, Some(c)) => verify_classp(c, order, exact, seed)?,
        (Check::Sqc, Some(c)) => verify_sqc(c)?,
        (Check::P2, _) => {
            config_v["max_d"] = json!(max_d);
            verify_p2(max_d)
        }
        (Check::Equivariant, _) => {
            let n = cfg.n.ok_or_else(|| Failure::Config("--n is required".into()))?;
            config_v["n"] = json!(n);
            verify_equivariant(n, samples, seed)?
        }
        _ => unreachable!("configuration parsed above"),
    };
    let verdict = results.iter().all(|r| r["passed"] == Value::Bool(true));
    Ok(Report { config: config_v, results, verdict: Some(verdict), table: None })
}

fn cmd_instanton(cfg: &ConfigArgs, max_d: usize) -> Result<Report, Failure> {
    let config = parse_config(cfg)?;
    let k = yukawa_k(&config, max_d)?;
    let table = instanton_numbers(&k, max_d);
    let mut numbers = Map::new();
    let mut integral = Map::new();
    let mut rows = Vec::new();
    for (d, v) in &table.n {
        numbers.insert(d.to_string(), Value::from(fmt_rat(v)));
        integral.insert(d.to_string(), Value::from(v.is_integer()));
        rows.push(vec![d.to_string(), fmt_rat(v), v.is_integer().to_string()]);
    }
    let mut cfg_v = config_json(&config);
    cfg_v["max_d"] = json!(max_d);
    Ok(Report {
        config: cfg_v,
        results: vec![json!({"yukawa": rat_series(&k), "instanton_numbers": numbers, "integral": integral})],
        verdict: Some(table.all_integral()),
        table: Some((vec!["d".into(), "n_d".into(), "integral".into()], rows)),
    })
}

fn cmd_p2(max_d: usize, max_k: usize, weights: &Option<String>) -> Result<Report, Failure> {
    let (table, w) = match weights {
        Some(s) => {
            let v = parse_list(s, |x| x.parse::<i64>().map_err(|e| e.to_string()))?;
            let [a, b, c] = v[..] else {
                return Err(Failure::Config("expected three integer weights a,b,c".into()));
            };
            (p2_recursion(&P2Setup::new(a, b, c), max_d, max_k), json!([a, b, c]))
        }
        None => (p2_recursion_symbolic(max_d, max_k), json!("symbolic")),
    };
    let mut results = Vec::new();
    let mut rows = Vec::new();
    for ((d, k), v) in table.entries() {
        let s = match v.constant_value() {
            Some(c) => fmt_rat(&c),
            None => v.to_string(),
        };
        results.push(json!({"d": d, "k": k, "N": s}));
        rows.push(vec![d.to_string(), k.to_string(), s]);
    }
    Ok(Report {
        config: json!({"max_d": max_d, "max_k": max_k, "weights": w}),
        results,
        verdict: None,
        table: Some((vec!["d".into(), "k".into(), "N".into()], rows)),
    })
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Series { .. } => "series",
        Command::Verify(_) => "verify",
        Command::Instanton { .. } => "instanton",
        Command::P2 { .. } => "p2",
    }
}

fn run(cli: &Cli) -> Result<Report, Failure> {
    match &cli.command {
        Command::Series { config, order, weights, lambdas, mus } => {
            let c = parse_config(config)?;
            cmd_series(&c, *order, *weights, lambdas, mus, cli.seed)
        }
        Command::Verify(args) => cmd_verify(args, cli.exact, cli.seed),
        Command::Instanton { config, max_d } => cmd_instanton(config, *max_d),
        Command::P2 { max_d, max_k, weights } => cmd_p2(*max_d, *max_k, weights),
    }
}

fn render(cli: &Cli, report: &Report, elapsed_ms: u128) -> Result<String, Failure> {
    let verdict = match report.verdict {
        None => Value::Null,
        Some(true) => Value::from("pass"),
        Some(false) => Value::from("fail"),
    };
    match cli.format {
        Format::Json => {
            let doc = json!({
                "command": command_name(&cli.command),
                "config": report.config,
                "results": report.results,
                "verdict": verdict,
                "seed": cli.seed,
                "elapsed_ms": elapsed_ms as u64,
            });
            Ok(serde_json::to_string_pretty(&doc).expect("serializable"))
        }
        Format::Csv => {
            let (header, rows) = report
                .table
                .as_ref()
                .ok_or_else(|| Failure::Config("csv output is only available for scalar tables".into()))?;
            let mut lines = vec![header.join(",")];
            lines.extend(rows.iter().map(|r| r.join(",")));
            Ok(lines.join("\n"))
        }
        Format::Text => {
            let mut lines = Vec::new();
            for r in &report.results {
                match (r.get("check"), r.get("passed")) {
                    (Some(name), Some(ok)) => lines.push(format!(
                        "[{}] {} {}",
                        if ok == &Value::Bool(true) { "PASS" } else { "FAIL" },
                        name.as_str().unwrap_or(""),
                        r["detail"].as_str().unwrap_or("")
                    )),
                    _ => lines.push(r.to_string()),
                }
            }
            if let Value::String(v) = verdict {
                lines.push(format!("verdict: {v}"));
            }
            Ok(lines.join("\n"))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let outcome = run(&cli).and_then(|r| {
        let text = render(&cli, &r, start.elapsed().as_millis())?;
        Ok((r.verdict, text))
    });
    match outcome {
        Ok((verdict, text)) => {
            let _ = writeln!(std::io::stdout().lock(), "{text}");
            if verdict == Some(false) {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
