mod error;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use chevlab::classify;
use chevlab::constants::{self, LogScaled};
use chevlab::degrees;
use chevlab::escape::{self, Action, EscapeInstance};
use chevlab::gf::Field;
use chevlab::groups::{self, Family, GroupSpec, Theorem, TorusSpec};
use chevlab::growth::{self, GenSet, Target};
use chevlab::matrix::Mat;
use chevlab::report::{self, obj};
use chevlab::rng;
use chevlab::torus_lab::{self, CertMode};
use chevlab::varieties::{VarietySpec, DEFAULT_SCAN_CAP};
use chevlab::verify;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::Value;

use crate::error::CliError;

const THREADS_VAR: &str = "CHEVLAB_THREADS";

#[derive(Parser, Debug)]
#[command(
    name = "chevlab",
    version,
    about = "Growth, diameter and escape experiments in finite classical groups"
)]
struct Cli {
    /// Run seed; every randomized step draws from a stream split off it.
    #[arg(long, global = true, default_value_t = verify::DEFAULT_SEED)]
    seed: u64,
    /// Largest ball or group that may be materialized.
    #[arg(long = "cap", global = true, default_value_t = 1_000_000)]
    ball_cap: usize,
    /// Largest ambient point scan for varieties.
    #[arg(long, global = true, default_value_t = DEFAULT_SCAN_CAP)]
    ambient_cap: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct GroupArgs {
    /// Family (SL, SOeven, SOodd, Sp) or a full `family:n:q[:modulus]` string.
    #[arg(long)]
    group: String,
    /// Family parameter.
    #[arg(long)]
    n: Option<u32>,
    /// Field order.
    #[arg(long)]
    q: Option<u64>,
    /// Modulus coefficients, low degree first, comma separated.
    #[arg(long)]
    modulus: Option<String>,
}

impl GroupArgs {
    fn resolve(&self) -> Result<(GroupSpec, Field), CliError> {
        if self.group.contains(':') {
            return Ok(groups::parse_group(&self.group)?);
        }
        let n = self.n.ok_or_else(|| CliError::Usage("--n is required".into()))?;
        let q = self.q.ok_or_else(|| CliError::Usage("--q is required".into()))?;
        let mut s = format!("{}:{n}:{q}", self.group);
        if let Some(m) = &self.modulus {
            s.push(':');
            s.push_str(m);
        }
        Ok(groups::parse_group(&s)?)
    }
}

#[derive(Args, Debug, Clone)]
struct GensArgs {
    /// Generating-set file, one matrix per line; closed under inverses and the identity on load.
    #[arg(long, conflicts_with = "random_gens")]
    gens: Option<PathBuf>,
    /// Draw this many random elements and close under inverses.
    #[arg(long)]
    random_gens: Option<usize>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Emit {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ActionArg {
    Left,
    Conj,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Route {
    /// Plain breadth-first search against the variety.
    Bfs,
    /// The same search checked against the linearization bound.
    Shitov,
    /// Search on the linearized generators against the linearized variety.
    Linearized,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Which {
    Clg,
    Torus,
    Growth,
    Diameter,
    Appendix,
    Asymptotic,
    Suite,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Lie,
    Adjoint,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Profile {
    Desk,
}

#[derive(Clone, Copy, Debug, ValueEnum, PartialEq, Eq)]
enum GrowthCheck {
    Ruzsa,
    Olson,
    Dichotomy,
    Np,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Group order from the closed formula.
    Order {
        #[command(flatten)]
        group: GroupArgs,
    },
    /// Cayley graph diameter by breadth-first search.
    Diameter {
        #[command(flatten)]
        group: GroupArgs,
        #[command(flatten)]
        gens: GensArgs,
    },
    /// Ball growth, target intersections and growth inequalities.
    Growth {
        #[command(flatten)]
        group: GroupArgs,
        #[command(flatten)]
        gens: GensArgs,
        #[arg(long, default_value_t = 8)]
        tmax: usize,
        /// `class:<matrix>`, `torus:<eta|max>`, `torus_nonrs:<eta|max>` or `nonrs`.
        #[arg(long)]
        target: Option<String>,
        #[arg(long, value_enum, default_value_t = Emit::Json)]
        emit: Emit,
        #[arg(long, value_enum)]
        check: Vec<GrowthCheck>,
        /// Parameter `l` of the growth dichotomy.
        #[arg(long, default_value_t = 1)]
        l: u64,
    },
    /// Escape of a point from a variety.
    Escape {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long)]
        gens: Option<PathBuf>,
        /// Variety file with an `ambient=m dim=d deg=D` header.
        #[arg(long, required_unless_present = "regular_semisimple")]
        variety: Option<PathBuf>,
        /// Point as comma-separated field elements; defaults to the identity matrix.
        #[arg(long)]
        point: Option<String>,
        #[arg(long, value_enum, default_value_t = ActionArg::Left)]
        action: ActionArg,
        #[arg(long, value_enum, default_value_t = Route::Bfs)]
        route: Route,
        /// Search for a regular semisimple element instead.
        #[arg(long)]
        regular_semisimple: bool,
    },
    /// Characteristic polynomials, regular semisimplicity and class sizes.
    Classify {
        #[command(flatten)]
        group: GroupArgs,
        /// Element as comma-separated entries; repeatable.
        #[arg(long)]
        element: Vec<String>,
        /// Emit a record for every element of the group.
        #[arg(long)]
        all: bool,
    },
    /// Exact degree and table bound of a group.
    Degree {
        #[arg(long)]
        group: String,
        #[arg(long)]
        n: u32,
    },
    /// Explicit constants and the closing-inequality suites.
    Constants {
        #[arg(long)]
        r: u32,
        #[arg(long, default_value_t = 1)]
        t: u64,
        #[arg(long, value_enum)]
        which: Which,
        /// Dimension for the appendix constants.
        #[arg(long, default_value_t = 1)]
        d: u64,
        /// Degree for the appendix constants.
        #[arg(long, default_value_t = 2)]
        deg: u64,
    },
    /// Linear-independence certificate for a non-maximal torus.
    TorusCert {
        #[command(flatten)]
        group: GroupArgs,
        /// Character coefficients, comma separated.
        #[arg(long)]
        eta: String,
        #[arg(long, value_enum, default_value_t = ModeArg::Lie)]
        mode: ModeArg,
    },
    /// The acceptance suite.
    Verify {
        #[arg(long, value_enum, default_value_t = Profile::Desk)]
        profile: Profile,
    },
}

struct Ctx {
    seed: u64,
    ball_cap: usize,
    ambient_cap: u64,
}

impl Ctx {
    fn config(&self, command: &str, extra: Vec<(&str, Value)>) -> Value {
        let mut pairs = vec![
            ("command", Value::String(command.into())),
            ("seed", report::int(self.seed)),
            (
                "caps",
                obj([
                    ("ball_cap", report::int(self.ball_cap as u64)),
                    ("ambient_cap", report::int(self.ambient_cap)),
                ]),
            ),
        ];
        pairs.extend(extra);
        obj(pairs)
    }
}

fn with_config(config: Value, body: Value) -> Value {
    let mut out = match body {
        Value::Object(m) => m,
        other => {
            let mut m = serde_json::Map::new();
            m.insert("result".into(), other);
            m
        }
    };
    out.insert("config".into(), config);
    Value::Object(out)
}

fn group_config(spec: &GroupSpec, f: &Field) -> Vec<(&'static str, Value)> {
    vec![
        ("group", spec.to_json()),
        ("q", report::int(f.q())),
        (
            "modulus",
            Value::Array(f.modulus().iter().map(|&c| report::int(c)).collect()),
        ),
    ]
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn parse_matrix(s: &str, size: usize, f: &Field) -> Result<Mat, CliError> {
    Ok(Mat::parse(size, s.trim(), f)?)
}

fn read_matrices(path: &Path, size: usize, f: &Field) -> Result<Vec<Mat>, CliError> {
    let gens = read(path)?
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| parse_matrix(l, size, f))
        .collect::<Result<Vec<_>, _>>()?;
    if gens.is_empty() {
        return Err(CliError::Usage(format!("{}: no matrices", path.display())));
    }
    let mut sym = groups::symmetrize(&gens, f);
    sym.sort();
    sym.dedup();
    Ok(sym)
}

fn generating_set(ctx: &Ctx, spec: &GroupSpec, f: &Field, gens: &GensArgs) -> Result<GenSet, CliError> {
    Ok(match (&gens.gens, gens.random_gens) {
        (Some(path), _) => GenSet::new(spec, f, read_matrices(path, spec.size, f)?)?,
        (None, Some(s)) => GenSet::random(spec, f, s, None, &mut rng::stream(ctx.seed, 0))?,
        (None, None) => GenSet::standard(spec, f)?,
    })
}

fn gens_json(a: &GenSet) -> Value {
    Value::Array(a.elements().iter().map(|g| Value::String(g.format(&a.field))).collect())
}

fn hypotheses(spec: &GroupSpec, f: &Field, theorem: Theorem) -> Value {
    groups::hypotheses_ok(spec, u64::from(f.q()), theorem).to_json()
}

fn cmd_order(ctx: &Ctx, g: &GroupArgs) -> Result<Value, CliError> {
    let (spec, f) = g.resolve()?;
    let order = groups::group_order(&spec, u64::from(f.q()))?;
    Ok(with_config(
        ctx.config("order", group_config(&spec, &f)),
        obj([("order", report::big(&order))]),
    ))
}

fn cmd_diameter(ctx: &Ctx, g: &GroupArgs, gens: &GensArgs) -> Result<Value, CliError> {
    let (spec, f) = g.resolve()?;
    let a = generating_set(ctx, &spec, &f, gens)?;
    let diam = growth::diameter(&a, ctx.ball_cap)?;
    let order = a.group_order();
    let de = constants::diameter_exponent(spec.rank);
    Ok(with_config(
        ctx.config("diameter", group_config(&spec, &f)),
        obj([
            ("generators", gens_json(&a)),
            ("diameter", report::int(diam as u64)),
            ("group_order", report::int(order)),
            ("exponent", report::real(de.exponent)),
            ("q_threshold", de.q_threshold.to_json()),
            (
                "within_main_bound",
                Value::Bool(growth::diameter_within_main_bound(diam, order, spec.rank)),
            ),
            ("hypotheses", hypotheses(&spec, &f, Theorem::Main)),
        ]),
    ))
}

#[allow(clippy::too_many_arguments)]
fn cmd_growth(
    ctx: &Ctx,
    g: &GroupArgs,
    gens: &GensArgs,
    tmax: usize,
    target: Option<&str>,
    emit: Emit,
    checks: &[GrowthCheck],
    l: u64,
) -> Result<(Value, Option<String>), CliError> {
    let (spec, f) = g.resolve()?;
    let a = generating_set(ctx, &spec, &f, gens)?;
    let target = target.map(|t| Target::parse(t, &spec, &f)).transpose()?;
    let rows = growth::growth_table(&a, tmax, target.as_ref(), ctx.ball_cap)?;
    let csv = report::to_csv(
        &["t", "ball_size", "target_count"],
        &rows
            .iter()
            .map(|(t, s, c)| vec![t.to_string(), s.to_string(), c.map_or(String::new(), |c| c.to_string())])
            .collect::<Vec<_>>(),
    );
    let series = growth::ball_series(&a, tmax, ctx.ball_cap)?;
    let mut body = vec![
        ("generators", gens_json(&a)),
        ("series", series.to_json()),
        (
            "table",
            Value::Array(
                rows.iter()
                    .map(|(t, s, c)| {
                        obj([
                            ("t", report::int(*t as u64)),
                            ("ball_size", report::int(*s)),
                            ("target_count", c.map_or(Value::Null, report::int)),
                        ])
                    })
                    .collect(),
            ),
        ),
    ];
    if let Some(t) = &target {
        body.push((
            "intersection",
            growth::intersect_count(&a, tmax, t, ctx.ball_cap)?.to_json(),
        ));
    }
    let mut results = Vec::new();
    for check in checks {
        let v = match check {
            GrowthCheck::Ruzsa => Value::Array(
                (4..=6)
                    .map(|k| growth::ruzsa_check(&a, k, ctx.ball_cap).map(|r| r.to_json()))
                    .collect::<Result<_, _>>()?,
            ),
            GrowthCheck::Olson => growth::olson_check(&a, ctx.ball_cap)?.to_json(),
            GrowthCheck::Dichotomy => growth::growth_dichotomy_check(&a, l, ctx.ball_cap)?.to_json(),
            GrowthCheck::Np => growth::np_check(&spec, &f, a.elements())?.to_json(),
        };
        results.push(obj([(format!("{check:?}").to_lowercase(), v)]));
    }
    body.push(("checks", Value::Array(results)));
    body.push(("hypotheses", hypotheses(&spec, &f, Theorem::Main)));
    let mut extra = group_config(&spec, &f);
    extra.push(("tmax", report::int(tmax as u64)));
    let report = with_config(ctx.config("growth", extra), obj(body));
    Ok((report, matches!(emit, Emit::Csv).then_some(csv)))
}

#[allow(clippy::too_many_arguments)]
fn cmd_escape(
    ctx: &Ctx,
    g: &GroupArgs,
    gens: Option<&Path>,
    variety: Option<&Path>,
    point: Option<&str>,
    action: ActionArg,
    route: Route,
    rs: bool,
) -> Result<Value, CliError> {
    let (spec, f) = g.resolve()?;
    let generators = match gens {
        Some(p) => read_matrices(p, spec.size, &f)?,
        None => groups::symmetrize(&groups::standard_generators(&spec, &f)?, &f),
    };
    let config = ctx.config("escape", group_config(&spec, &f));
    if rs {
        let cert = escape::find_regular_semisimple(&generators, spec.rank, &f, ctx.ball_cap)?;
        return Ok(with_config(
            config,
            obj([
                ("certificate", cert.to_json(&f)),
                ("hypotheses", hypotheses(&spec, &f, Theorem::Main)),
            ]),
        ));
    }
    let path = variety.ok_or_else(|| CliError::Usage("--variety is required".into()))?;
    let variety = VarietySpec::parse(&read(path)?, &f)?;
    let point = match point {
        Some(s) => s
            .split(',')
            .map(|t| f.parse(t.trim()))
            .collect::<Result<Vec<u32>, _>>()?,
        None => Mat::identity(spec.size).into_codes(),
    };
    let action = match action {
        ActionArg::Left => Action::LeftMultiplication,
        ActionArg::Conj => Action::Conjugation,
    };
    let inst = EscapeInstance::new(generators, variety, point, action, &f)?;
    let cert = match route {
        Route::Bfs => escape::escape_point(&inst, &f, ctx.ball_cap)?.to_json(&f),
        Route::Shitov => escape::shitov_escape(&inst, false, &f, ctx.ball_cap)?.to_json(&f),
        Route::Linearized => escape::shitov_escape(&inst, true, &f, ctx.ball_cap)?.to_json(&f),
    };
    Ok(with_config(
        config,
        obj([
            ("action", Value::String(action.name().into())),
            ("certificate", cert),
            ("hypotheses", hypotheses(&spec, &f, Theorem::EscapePoint)),
        ]),
    ))
}

fn cmd_classify(ctx: &Ctx, g: &GroupArgs, elements: &[String], all: bool) -> Result<Value, CliError> {
    let (spec, f) = g.resolve()?;
    let universe = groups::materialize(&spec, &f, ctx.ball_cap)?;
    let gens = groups::symmetrize(&groups::standard_generators(&spec, &f)?, &f);
    let mut records = Vec::new();
    for e in elements {
        let m = parse_matrix(e, spec.size, &f)?;
        if !groups::is_member(&m, &spec, &f)? {
            return Err(CliError::Usage(format!("{e} is not in {}", spec.label())));
        }
        let (class, cent) = classify::orbit_stabilizer(&m, &universe, &gens, &f, ctx.ball_cap)?;
        let mut rec = classify::element_record(&m, &f);
        if let Value::Object(map) = &mut rec {
            map.insert("class_size".into(), report::int(class as u64));
            map.insert("centralizer_size".into(), report::int(cent as u64));
        }
        records.push(rec);
    }
    if all {
        records.extend(universe.iter().map(|m| classify::element_record(m, &f)));
    }
    Ok(with_config(
        ctx.config("classify", group_config(&spec, &f)),
        obj([
            ("group_order", report::int(universe.len() as u64)),
            (
                "non_regular_semisimple",
                report::int(classify::count_nonrs(&universe, &f) as u64),
            ),
            ("records", Value::Array(records)),
        ]),
    ))
}

fn cmd_degree(ctx: &Ctx, family: &str, n: u32) -> Result<Value, CliError> {
    let spec = GroupSpec::new(Family::parse(family)?, n)?;
    Ok(with_config(
        ctx.config("degree", vec![("group", spec.to_json())]),
        degrees::degree_report(&spec),
    ))
}

fn pair(name: &str, x: &LogScaled) -> (String, Value) {
    (name.to_string(), x.to_json())
}

fn cmd_constants(ctx: &Ctx, r: u32, t: u64, which: Which, d: u64, deg: u64) -> Result<Value, CliError> {
    if r == 0 {
        return Err(CliError::Usage("--r must be at least 1".into()));
    }
    let body = match which {
        Which::Clg => {
            let c = constants::clg_constants(r, t);
            obj([pair("c1", &c.c1), pair("c2", &c.c2)])
        }
        Which::Torus => {
            let c = constants::torus_constants(r, t)?;
            obj([pair("c1", &c.c1), pair("c2", &c.c2), pair("c1_full", &c.c1_full)])
        }
        Which::Growth => Value::Array(
            constants::growth_pairs(r, t)
                .iter()
                .map(|p| {
                    obj([
                        ("m".to_string(), p.m.to_json()),
                        ("eps".to_string(), Value::String(p.eps.to_string())),
                    ])
                })
                .collect(),
        ),
        Which::Diameter => {
            let de = constants::diameter_exponent(r);
            obj([
                ("exponent", report::real(de.exponent)),
                ("q_threshold", de.q_threshold.to_json()),
            ])
        }
        Which::Appendix => constants::appendix_constants(r, d, deg, t)?,
        Which::Asymptotic => constants::asymptotic_constants(r).to_json(r, t),
        Which::Suite => {
            let proof = constants::proof_inequality_suite(r);
            let derivation = constants::derivation_suite(r);
            let passed = proof.passed() && derivation.passed();
            let body = obj([
                ("passed", Value::Bool(passed)),
                ("proof_inequalities", proof.to_json()),
                ("derivations", derivation.to_json()),
            ]);
            if !passed {
                return Err(CliError::Violation(report::to_json(&body)));
            }
            body
        }
    };
    Ok(with_config(
        ctx.config(
            "constants",
            vec![
                ("r", report::int(r)),
                ("t", report::int(t)),
                ("which", Value::String(format!("{which:?}").to_lowercase())),
            ],
        ),
        obj([("constants", body)]),
    ))
}

fn cmd_torus_cert(ctx: &Ctx, g: &GroupArgs, eta: &str, mode: ModeArg) -> Result<Value, CliError> {
    let (spec, f) = g.resolve()?;
    let eta: Vec<i64> = eta
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| s.trim().parse::<i64>())
        .collect::<Result<_, _>>()
        .map_err(|e| CliError::Usage(format!("--eta: {e}")))?;
    let torus = if eta.is_empty() {
        TorusSpec::maximal(&spec)
    } else {
        TorusSpec::canonical(&spec, eta)?
    };
    let mode = match mode {
        ModeArg::Lie => CertMode::LieBracket,
        ModeArg::Adjoint => CertMode::Adjoint,
    };
    let cert = torus_lab::rank_certificate(&torus, &f, mode, ctx.seed)?;
    Ok(with_config(
        ctx.config("torus-cert", group_config(&spec, &f)),
        obj([("certificate", cert.to_json(&f))]),
    ))
}

fn cmd_verify(ctx: &Ctx) -> Result<Value, CliError> {
    let reports = verify::run_all(ctx.seed);
    for r in &reports {
        eprintln!("{}", r.line());
    }
    let suite = verify::suite_json(&reports, ctx.seed);
    if reports.iter().all(|r| r.passed) {
        Ok(suite)
    } else {
        print!("{}", report::to_json(&suite));
        Err(CliError::Failed("acceptance suite failed".into()))
    }
}

fn init_threads() -> Result<(), CliError> {
    if let Ok(v) = std::env::var(THREADS_VAR) {
        let n: usize = v
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("{THREADS_VAR} must be a positive integer, got {v:?}")))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Usage(e.to_string()))?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<String, CliError> {
    init_threads()?;
    let ctx = Ctx {
        seed: cli.seed,
        ball_cap: cli.ball_cap,
        ambient_cap: cli.ambient_cap,
    };
    let value = match &cli.command {
        Command::Order { group } => cmd_order(&ctx, group)?,
        Command::Diameter { group, gens } => cmd_diameter(&ctx, group, gens)?,
        Command::Growth {
            group,
            gens,
            tmax,
            target,
            emit,
            check,
            l,
        } => {
            let (v, csv) = cmd_growth(&ctx, group, gens, *tmax, target.as_deref(), *emit, check, *l)?;
            if let Some(csv) = csv {
                return Ok(csv);
            }
            v
        }
        Command::Escape {
            group,
            gens,
            variety,
            point,
            action,
            route,
            regular_semisimple,
        } => cmd_escape(
            &ctx,
            group,
            gens.as_deref(),
            variety.as_deref(),
            point.as_deref(),
            *action,
            *route,
            *regular_semisimple,
        )?,
        Command::Classify { group, element, all } => cmd_classify(&ctx, group, element, *all)?,
        Command::Degree { group, n } => cmd_degree(&ctx, group, *n)?,
        Command::Constants { r, t, which, d, deg } => cmd_constants(&ctx, *r, *t, *which, *d, *deg)?,
        Command::TorusCert { group, eta, mode } => cmd_torus_cert(&ctx, group, eta, *mode)?,
        Command::Verify { profile: Profile::Desk } => cmd_verify(&ctx)?,
    };
    Ok(report::to_json(&value))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("chevlab: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
