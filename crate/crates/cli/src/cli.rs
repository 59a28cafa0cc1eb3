//! Argument parsing and command dispatch. `run` is side-effect free apart from reading
//! operator files, so it can be driven in-process.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;

use aop_core::classify::{classify_full, Verdict};
use aop_core::nullspace::{kernel_dimension_profile, poly_kernel, stabilized_kernel, KernelProfile, SmoothField};
use aop_core::opcore::Operator;
use aop_core::opdsl::{self, zoo, BuiltinSpec, OpSpecError};
use aop_lab::bergman::{bergman_blowup, BergmanConfig};
use aop_lab::multiplier::multiplier_reconstruct;
use aop_lab::nikolskii::{nikolskii_scaling, NikolskiiConfig};
use aop_lab::poincare::{poincare_ratio, PoincareConfig};
use aop_lab::riesz::{riesz_boundedness, RieszConfig};
use aop_lab::testfields::{CompactBump, GaussianBump, TrigField, TrigMode};
use aop_whitney::decompose::CubeRecord;
use aop_whitney::extend::{boundedness_experiment, BoundednessConfig};
use aop_whitney::reflect::chain_statistics;
use aop_whitney::{decompose, reflect, Domain, WhitneyConfig};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::report::{seed_from_env, Report};
use crate::table::{run_table, TableConfig, TableReport};

pub const EXIT_OK: i32 = 0;
/// Invalid configuration or a failed computation.
pub const EXIT_FAILURE: i32 = 1;
/// Unreadable or malformed input, including command-line errors.
pub const EXIT_INPUT: i32 = 2;
/// `--exact-only` and some verdict is not exact.
pub const EXIT_NOT_EXACT: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "aop", version, about = "Classify constant-coefficient differential operators and run experiments")]
struct Cli {
    /// Seed for every randomized step; overrides AOP_SEED.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Ellipticity, C-ellipticity, cancellation and related verdicts.
    Classify {
        #[command(flatten)]
        op: OperatorArgs,
        /// Exit with code 3 unless every verdict is exact.
        #[arg(long)]
        exact_only: bool,
        #[arg(long)]
        json: bool,
    },
    /// Recompute the E / EC / FDN comparison table.
    Table {
        /// n range, "lo..hi" or a single value.
        #[arg(long, default_value = "2..3", value_parser = parse_range)]
        n: (u32, u32),
        #[arg(long = "N", default_value = "1..3", value_parser = parse_range)]
        big_n: (u32, u32),
        #[arg(long, default_value = "1..3", value_parser = parse_range)]
        k: (u32, u32),
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long)]
        json: bool,
    },
    /// Numerical experiments.
    Lab {
        #[command(subcommand)]
        experiment: Experiment,
    },
    /// Polynomial null space of the operator.
    Nullspace {
        #[command(flatten)]
        op: OperatorArgs,
        /// Fixed degree; by default grow the degree until the dimension plateaus.
        #[arg(long)]
        degree: Option<u32>,
        #[arg(long, default_value_t = 10)]
        max_degree: u32,
        #[arg(long)]
        json: bool,
    },
    /// Whitney decomposition of the unit disc or of its exterior.
    Decompose {
        #[arg(long, default_value_t = 8)]
        cap: i32,
        #[arg(long, value_enum, default_value_t = DomainArg::Exterior)]
        domain: DomainArg,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
enum DomainArg {
    Disc,
    Exterior,
}

#[derive(Args, Debug)]
struct OperatorArgs {
    /// Path to an .opspec.json document.
    #[arg(conflicts_with = "builtin", required_unless_present = "builtin")]
    path: Option<PathBuf>,
    /// Builtin zoo id.
    #[arg(long)]
    builtin: Option<String>,
    #[command(flatten)]
    params: ZooParams,
}

#[derive(Args, Debug, Default)]
struct ZooParams {
    #[arg(long)]
    n: Option<i64>,
    #[arg(long = "N")]
    big_n: Option<i64>,
    #[arg(long)]
    k: Option<i64>,
}

impl ZooParams {
    fn map(&self) -> BTreeMap<String, i64> {
        [("n", self.n), ("N", self.big_n), ("k", self.k)]
            .into_iter()
            .filter_map(|(a, b)| b.map(|v| (a.to_string(), v)))
            .collect()
    }
}

#[derive(Args, Debug)]
struct LabOp {
    /// Builtin zoo id.
    #[arg(long)]
    op: Option<String>,
    #[command(flatten)]
    params: ZooParams,
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand, Debug)]
enum Experiment {
    /// Null-space elements in L¹ but not in L² near the boundary.
    Bergman {
        #[command(flatten)]
        op: LabOp,
        #[arg(long, num_args = 1.., value_delimiter = ',')]
        beta: Option<Vec<f64>>,
        #[arg(long, num_args = 1.., value_delimiter = ',')]
        levels: Option<Vec<usize>>,
    },
    /// Poincaré ratios over random fields on the disc.
    Poincare {
        #[command(flatten)]
        op: LabOp,
        #[arg(long, default_value_t = 0)]
        l: u32,
        #[arg(long, default_value_t = 2.0)]
        p: f64,
        #[arg(long, default_value_t = 50)]
        trials: usize,
        #[arg(long, default_value_t = 1.0)]
        radius: f64,
    },
    /// Translation estimate for a smooth bump.
    Nikolskii {
        #[command(flatten)]
        op: LabOp,
        #[arg(long, default_value_t = 0.5)]
        s: f64,
        #[arg(long, default_value_t = 1.0)]
        p: f64,
    },
    /// Fourier multiplier reconstruction of a band-limited field on the torus.
    Multiplier {
        #[command(flatten)]
        op: LabOp,
        #[arg(long, default_value_t = 128)]
        size: usize,
        /// Largest |κ_i| of the random modes.
        #[arg(long, default_value_t = 8)]
        band: i64,
    },
    /// Riesz potential ratios under refinement.
    Riesz {
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        #[arg(long, default_value_t = 1.5)]
        p: f64,
        #[arg(long, default_value_t = 3.0)]
        q: f64,
        #[arg(long)]
        json: bool,
    },
    /// Boundedness of the extension operator on the disc.
    Extend {
        #[command(flatten)]
        op: LabOp,
        /// Level caps, e.g. 7,8.
        #[arg(long, num_args = 1.., value_delimiter = ',')]
        cap: Option<Vec<i32>>,
        /// Random fields besides the fixed quadratic one.
        #[arg(long, default_value_t = 20)]
        fields: usize,
        #[arg(long, default_value_t = 0.25)]
        tolerance: f64,
    },
}

fn parse_range(s: &str) -> Result<(u32, u32), String> {
    let bad = || format!("expected \"lo..hi\" or a single integer, got {s:?}");
    match s.split_once("..") {
        Some((a, b)) => Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?)),
        None => {
            let v = s.trim().parse().map_err(|_| bad())?;
            Ok((v, v))
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Self { code: EXIT_OK, stdout, stderr: String::new() }
    }
    fn fail(code: i32, stderr: String) -> Self {
        Self { code, stdout: String::new(), stderr }
    }
}

/// Run the tool on `args` (including the program name); `env_seed` is the value of AOP_SEED.
pub fn run(args: &[String], env_seed: Option<&str>) -> Outcome {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => Outcome::ok(text),
                _ => Outcome::fail(EXIT_INPUT, text),
            };
        }
    };
    let seed = match cli.seed {
        Some(s) => s,
        None => match seed_from_env(env_seed) {
            Ok(s) => s,
            Err(m) => return Outcome::fail(EXIT_INPUT, format!("error: {m}\n")),
        },
    };
    let joined = args[1..].join("\u{1f}");
    match cli.command {
        Command::Classify { op, exact_only, json } => classify_cmd(&op, exact_only, json, seed),
        Command::Table { n, big_n, k, samples, json } => {
            let cfg = TableConfig { n, dim_v: big_n, k, samples, seed, ..Default::default() };
            match run_table(&cfg) {
                Ok(t) => {
                    let code = if t.all_agree { EXIT_OK } else { EXIT_FAILURE };
                    let out = if json { Report::new("table", joined.as_bytes(), seed, &t).to_json() } else { table_text(&t) };
                    Outcome { code, stdout: out, stderr: String::new() }
                }
                Err(e) => Outcome::fail(EXIT_INPUT, format!("error: {e}\n")),
            }
        }
        Command::Lab { experiment } => lab_cmd(experiment, joined.as_bytes(), seed),
        Command::Nullspace { op, degree, max_degree, json } => nullspace_cmd(&op, degree, max_degree, json, seed),
        Command::Decompose { cap, domain, json } => decompose_cmd(cap, domain, json, joined.as_bytes(), seed),
    }
}

struct LoadedOperator {
    op: Operator,
    label: String,
    bytes: Vec<u8>,
}

fn load_operator(args: &OperatorArgs) -> Result<LoadedOperator, Outcome> {
    if let Some(path) = &args.path {
        if args.params.n.is_some() || args.params.big_n.is_some() || args.params.k.is_some() {
            return Err(Outcome::fail(EXIT_INPUT, "error: --n/--N/--k apply to --builtin only\n".into()));
        }
        let text = std::fs::read_to_string(path)
            .map_err(|e| Outcome::fail(EXIT_INPUT, format!("error: cannot read {}: {e}\n", path.display())))?;
        let op = opdsl::parse(&text).map_err(|e| parse_failure(&path.display().to_string(), &e))?;
        return Ok(LoadedOperator { op, label: path.display().to_string(), bytes: text.into_bytes() });
    }
    let id = args.builtin.as_deref().expect("clap requires a path or --builtin");
    builtin(id, &args.params)
}

fn builtin(id: &str, params: &ZooParams) -> Result<LoadedOperator, Outcome> {
    let spec = BuiltinSpec { id: id.to_string(), params: params.map() };
    let op = zoo::zoo(id, &spec.params).map_err(|e| Outcome::fail(EXIT_INPUT, format!("error: {e}\n")))?;
    let bytes = serde_json::to_vec(&serde_json::json!({ "builtin": spec })).expect("serializes");
    Ok(LoadedOperator { op, label: id.to_string(), bytes })
}

fn parse_failure(source: &str, e: &OpSpecError) -> Outcome {
    let msg = match e {
        OpSpecError::Syntax { line, column, message } => {
            format!("error: {source}:{line}:{column}: syntax error at line {line}, column {column}: {message}\n")
        }
        _ => format!("error: {source}: {e}\n"),
    };
    Outcome::fail(EXIT_INPUT, msg)
}

fn shape(op: &Operator) -> String {
    format!("n={}, N={}, m={}, k={}", op.n(), op.dim_v(), op.dim_w(), op.order())
}

#[derive(Serialize)]
struct ClassifyResult<'a> {
    operator: &'a str,
    n: usize,
    #[serde(rename = "N")]
    dim_v: usize,
    m: usize,
    k: u32,
    verdict: &'a Verdict,
    fully_exact: bool,
}

fn classify_cmd(args: &OperatorArgs, exact_only: bool, json: bool, seed: u64) -> Outcome {
    let loaded = match load_operator(args) {
        Ok(l) => l,
        Err(o) => return o,
    };
    let op = &loaded.op;
    let v = classify_full(op);
    let exact = v.is_fully_exact();
    let stdout = if json {
        let r = ClassifyResult {
            operator: &loaded.label,
            n: op.n(),
            dim_v: op.dim_v(),
            m: op.dim_w(),
            k: op.order(),
            verdict: &v,
            fully_exact: exact,
        };
        Report::new("classify", &loaded.bytes, seed, r).to_json()
    } else {
        verdict_text(&loaded.label, op, &v)
    };
    let code = if exact_only && !exact { EXIT_NOT_EXACT } else { EXIT_OK };
    let stderr = if code == EXIT_NOT_EXACT { "error: some verdicts are not exact\n".to_string() } else { String::new() };
    Outcome { code, stdout, stderr }
}

fn verdict_text(label: &str, op: &Operator, v: &Verdict) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "operator  {label} ({})", shape(op));
    let rows = v.rows();
    let w = rows.iter().map(|(l, _)| l.len()).max().unwrap_or(0);
    for (l, c) in rows {
        let _ = writeln!(s, "  {l:<w$}  {:<3} {c}", c.mark());
    }
    if let Some(d) = v.intersection_dimension {
        let _ = writeln!(s, "  dim ⋂ A[ξ](V) = {d}");
    }
    let _ = writeln!(s, "  C-ellipticity: {}", v.c_elliptic_method);
    if v.cancellation_conditional {
        let _ = writeln!(s, "  cancellation assumes the numeric ellipticity verdict");
    }
    for n in &v.notes {
        let _ = writeln!(s, "  note: {n}");
    }
    if !v.consistent {
        let _ = writeln!(s, "  WARNING: verdicts contradict a known implication");
    }
    s
}

fn table_text(t: &TableReport) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "{:<4} {:<4} {:<4} {:<10} {:<10} {:>8} {:>6} {:>10}  witness",
        "n", "N", "k", "expected", "observed", "premise", "FDN", "E∧¬FDN"
    );
    for c in &t.cells {
        let witness = c
            .ec_witness
            .or(c.e_witness)
            .map(|i| {
                let w = &c.zoo[i];
                let p: Vec<String> = w.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
                format!("{}({}) {}", w.id, p.join(","), if Some(i) == c.ec_witness { "EC∧¬FDN" } else { "E∧¬FDN" })
            })
            .unwrap_or_else(|| "-".into());
        let _ = writeln!(
            s,
            "{:<4} {:<4} {:<4} {:<10} {:<10} {:>8} {:>6} {:>10}  {witness}{}",
            c.cell.n.to_string(),
            c.cell.dim_v.to_string(),
            c.cell.k.to_string(),
            c.cell.expected.to_string(),
            c.observed.to_string(),
            c.samples.premise,
            c.samples.fdn,
            format!("{}/{}", c.non_fdn.not_cancelling, c.non_fdn.elliptic),
            if c.agrees { "" } else { "  MISMATCH" }
        );
    }
    let _ = writeln!(s, "E∧¬FDN column: sampled elliptic non-FDN operators that fail to cancel / total");
    let _ = writeln!(s, "{}", if t.all_agree { "all cells agree" } else { "some cells disagree" });
    s
}

#[derive(Serialize)]
struct NullspaceResult {
    operator: String,
    profile: Option<KernelProfile>,
    /// Degree of the reported basis; absent when the profile never plateaus.
    degree: Option<u32>,
    dimension: Option<usize>,
    /// Each element lists its N components.
    basis: Vec<Vec<String>>,
}

fn nullspace_cmd(args: &OperatorArgs, degree: Option<u32>, max_degree: u32, json: bool, seed: u64) -> Outcome {
    let loaded = match load_operator(args) {
        Ok(l) => l,
        Err(o) => return o,
    };
    let (profile, space) = match degree {
        Some(d) => (None, Some(poly_kernel(&loaded.op, d))),
        None => match stabilized_kernel(&loaded.op, max_degree) {
            Some((p, s)) => (Some(p), Some(s)),
            None => (Some(kernel_dimension_profile(&loaded.op, max_degree)), None),
        },
    };
    let r = NullspaceResult {
        operator: loaded.label.clone(),
        degree: space.as_ref().map(|s| s.degree),
        dimension: space.as_ref().map(|s| s.dimension()),
        basis: space
            .iter()
            .flat_map(|s| &s.basis)
            .map(|b| b.iter().map(|p| p.to_string()).collect())
            .collect(),
        profile,
    };
    if json {
        return Outcome::ok(Report::new("nullspace", &loaded.bytes, seed, r).to_json());
    }
    let mut s = String::new();
    let _ = writeln!(s, "operator  {} ({})", r.operator, shape(&loaded.op));
    if let Some(p) = &r.profile {
        let _ = writeln!(s, "dim ker on degree ≤ d, d = 0..: {:?}", p.dims);
    }
    match (r.degree, r.dimension) {
        (Some(d), Some(dim)) => {
            let _ = writeln!(s, "kernel at degree {d}: dimension {dim}");
        }
        _ => {
            let _ = writeln!(s, "no plateau up to degree {max_degree}: the null space looks infinite-dimensional");
        }
    }
    for (i, b) in r.basis.iter().enumerate() {
        let _ = writeln!(s, "  [{i}] ({})", b.join(", "));
    }
    Outcome::ok(s)
}

#[derive(Serialize)]
struct DecomposeResult {
    domain: DomainArg,
    config: WhitneyConfig,
    cubes: usize,
    small_cubes: usize,
    truncated: usize,
    violations: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    reflection: Option<ReflectionSummary>,
    records: Vec<CubeRecord>,
}

#[derive(Serialize)]
struct ReflectionSummary {
    distance_constant: f64,
    max_multiplicity: usize,
    max_chain_length: usize,
}

fn decompose_cmd(cap: i32, domain: DomainArg, json: bool, input: &[u8], seed: u64) -> Outcome {
    let cfg = WhitneyConfig::new(cap);
    let fail = |e: aop_whitney::WhitneyError| Outcome::fail(EXIT_FAILURE, format!("error: {e}\n"));
    let inner = match decompose(Domain::Disc { radius: 1.0 }, &cfg) {
        Ok(d) => d,
        Err(e) => return fail(e),
    };
    let (d, reflection, records) = match domain {
        DomainArg::Disc => {
            let records = inner.records(|_| None);
            (inner, None, records)
        }
        DomainArg::Exterior => {
            let outer = match decompose(Domain::Exterior { radius: 1.0, half_width: 4.0 }, &cfg) {
                Ok(d) => d,
                Err(e) => return fail(e),
            };
            let map = match reflect(&outer, &inner) {
                Ok(m) => m,
                Err(e) => return fail(e),
            };
            let stats = match chain_statistics(&map, &outer, &inner) {
                Ok(s) => s,
                Err(e) => return fail(e),
            };
            let records = outer.records(|k| map.target(k).map(|s| inner.cubes[s]));
            let summary = ReflectionSummary {
                distance_constant: map.distance_constant,
                max_multiplicity: map.max_multiplicity,
                max_chain_length: stats.max_length,
            };
            (outer, Some(summary), records)
        }
    };
    let v = d.verify();
    let r = DecomposeResult {
        domain,
        config: cfg,
        cubes: d.len(),
        small_cubes: d.small().len(),
        truncated: d.truncated,
        violations: v.d1.len() + v.d2.len() + v.d3.len(),
        reflection,
        records,
    };
    if json {
        return Outcome::ok(Report::new("decompose", input, seed, r).to_json());
    }
    let mut s = String::new();
    let _ = writeln!(s, "domain {:?}, cap {}", domain, cap);
    let mut by_level: BTreeMap<i32, usize> = BTreeMap::new();
    for c in &r.records {
        *by_level.entry(c.level).or_insert(0) += 1;
    }
    let _ = writeln!(s, "{:>6} {:>8}", "level", "cubes");
    for (l, c) in by_level {
        let _ = writeln!(s, "{l:>6} {c:>8}");
    }
    let _ = writeln!(s, "total {}, small {}, truncated {}, D1-D3 violations {}", r.cubes, r.small_cubes, r.truncated, r.violations);
    if let Some(m) = &r.reflection {
        let _ = writeln!(
            s,
            "reflection: dist(Q, Q*) ≤ {:.3} ℓ(Q), multiplicity ≤ {}, chains ≤ {} cubes",
            m.distance_constant, m.max_multiplicity, m.max_chain_length
        );
    }
    Outcome::ok(s)
}

fn lab_operator(op: &LabOp, default: &str) -> Result<LoadedOperator, Outcome> {
    builtin(op.op.as_deref().unwrap_or(default), &op.params)
}

fn emit<T: Serialize>(json: bool, input: &[u8], seed: u64, result: &T, text: impl FnOnce(&T) -> String) -> Outcome {
    if json {
        Outcome::ok(Report::new("lab", input, seed, result).to_json())
    } else {
        Outcome::ok(text(result))
    }
}

fn lab_error(e: impl std::fmt::Display) -> Outcome {
    Outcome::fail(EXIT_FAILURE, format!("error: {e}\n"))
}

/// Random modes with |κ_i| ≤ band and unit-range coefficients.
pub fn band_limited_field(dim: usize, band: i64, modes: usize, seed: u64) -> TrigField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coeffs = |rng: &mut ChaCha8Rng| (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect::<Vec<f64>>();
    let modes = (0..modes)
        .map(|_| {
            let kappa = vec![rng.gen_range(-band..=band), rng.gen_range(-band..=band)];
            let cos = coeffs(&mut rng);
            let sin = coeffs(&mut rng);
            TrigMode { kappa, cos, sin }
        })
        .collect();
    TrigField { nvars: 2, dim, modes }
}

fn fmt_list(v: &[f64]) -> String {
    v.iter().map(|x| format!("{x:.6}")).collect::<Vec<_>>().join("  ")
}

fn lab_cmd(exp: Experiment, input: &[u8], seed: u64) -> Outcome {
    match exp {
        Experiment::Bergman { op, beta, levels } => {
            let l = match lab_operator(&op, "delbar") {
                Ok(l) => l,
                Err(o) => return o,
            };
            let mut cfg = BergmanConfig::default();
            if let Some(b) = beta {
                cfg.betas = b;
            }
            if let Some(lv) = levels {
                cfg.levels = lv;
            }
            match bergman_blowup(&l.op, &cfg) {
                Ok(r) => emit(op.json, input, seed, &r, |r| {
                    let mut s = format!("family {}, singular point ({:.4}, {:.4})\n", r.family, r.singular_point[0], r.singular_point[1]);
                    let _ = writeln!(s, "levels {:?}", r.config.levels);
                    for row in &r.rows {
                        let _ = writeln!(s, "beta {}", row.beta);
                        let _ = writeln!(s, "  L1  {}   Cauchy {}", fmt_list(&row.l1), row.l1_cauchy);
                        let _ = writeln!(s, "  L2  {}   growth {}", fmt_list(&row.l2), fmt_list(&row.l2_growth));
                        let _ = writeln!(
                            s,
                            "  L2 divergent {} (in L2 by the exponent rule: {})",
                            row.l2_divergent, row.l2_expected
                        );
                    }
                    s
                }),
                Err(e) => lab_error(e),
            }
        }
        Experiment::Poincare { op, l, p, trials, radius } => {
            let lo = match lab_operator(&op, "sym_grad") {
                Ok(l) => l,
                Err(o) => return o,
            };
            let cfg = PoincareConfig { trials, radius, seed, ..PoincareConfig::new(l, p) };
            match poincare_ratio(&lo.op, &cfg) {
                Ok(r) => emit(op.json, input, seed, &r, |r| {
                    format!(
                        "{} trials, l = {}, p = {}, radius {}\nratio min {:.6}  mean {:.6}  max {:.6}  all finite {}\n",
                        r.ratios.len(),
                        r.config.l,
                        r.config.p,
                        r.config.radius,
                        r.min,
                        r.mean,
                        r.max,
                        r.all_finite
                    )
                }),
                Err(e) => lab_error(e),
            }
        }
        Experiment::Nikolskii { op, s, p } => {
            let lo = match lab_operator(&op, "grad_k") {
                Ok(l) => l,
                Err(o) => return o,
            };
            let n = lo.op.n();
            let bump = CompactBump::smooth(vec![0.0; n], 0.5, vec![1.0; lo.op.dim_v()]);
            match nikolskii_scaling(&lo.op, &bump, &NikolskiiConfig::new(s, p)) {
                Ok(r) => emit(op.json, input, seed, &r, |r| {
                    let mut t = format!("{:>12} {:>14}\n", "|y|", "∫|Δ_y u|^p");
                    for (y, d) in r.shifts.iter().zip(&r.differences) {
                        let _ = writeln!(t, "{y:>12.6e} {d:>14.6e}");
                    }
                    let _ = writeln!(t, "slope {:.4} (required ≥ {:.4}): {}", r.slope, r.required_slope, if r.passed { "pass" } else { "fail" });
                    t
                }),
                Err(e) => lab_error(e),
            }
        }
        Experiment::Multiplier { op, size, band } => {
            let lo = match lab_operator(&op, "grad_k") {
                Ok(l) => l,
                Err(o) => return o,
            };
            if lo.op.n() != 2 {
                return lab_error("the torus experiment is two-dimensional");
            }
            let u = band_limited_field(lo.op.dim_v(), band, 12, seed);
            match multiplier_reconstruct(&lo.op, &u, size) {
                Ok(r) => emit(op.json, input, seed, &r, |r| {
                    format!("torus {0}×{0}, {1} modes inverted, relative l2 error {2:.3e}\n", r.size, r.modes_inverted, r.relative_error)
                }),
                Err(e) => lab_error(e),
            }
        }
        Experiment::Riesz { alpha, p, q, json } => {
            let cfg = RieszConfig { alpha, p, q, ..Default::default() };
            let g1 = GaussianBump { center: vec![0.2, 0.1], sigma: 0.3, amplitude: vec![1.0] };
            let g2 = GaussianBump { center: vec![-0.3, 0.0], sigma: 0.15, amplitude: vec![1.0] };
            let fields: Vec<&dyn SmoothField> = vec![&g1, &g2];
            match riesz_boundedness(&cfg, &fields) {
                Ok(r) => emit(json, input, seed, &r, |r| {
                    let mut s = format!("{:>8}  ratios ‖I_α f‖_q / ‖f‖_p\n", "level");
                    for (lv, row) in r.config.levels.iter().zip(&r.ratios) {
                        let _ = writeln!(s, "{lv:>8}  {}", fmt_list(row));
                    }
                    let _ = writeln!(s, "max relative change {:.4}, stable {}", r.max_relative_change, r.stable);
                    s
                }),
                Err(e) => lab_error(e),
            }
        }
        Experiment::Extend { op, cap, fields, tolerance } => {
            let lo = match lab_operator(&op, "sym_grad") {
                Ok(l) => l,
                Err(o) => return o,
            };
            let cfg = BoundednessConfig {
                caps: cap.unwrap_or_else(|| vec![7, 8]),
                tolerance,
                random_fields: fields,
                seed,
                ..Default::default()
            };
            match boundedness_experiment(&lo.op, &cfg) {
                Ok(r) => emit(op.json, input, seed, &r, |r| {
                    let mut s = format!("{:>4} {:>8} {:>10} {:>10}\n", "cap", "small", "max ratio", "min ratio");
                    for row in &r.rows {
                        let min = row.ratios.iter().copied().fold(f64::INFINITY, f64::min);
                        let _ = writeln!(s, "{:>4} {:>8} {:>10.4} {:>10.4}", row.cap, row.small_cubes, row.max_ratio, min);
                    }
                    let _ = writeln!(s, "ratio = ‖Eu‖ on disc and collar / ‖u‖ on the disc, ‖·‖ = L¹ norm of u plus that of Au");
                    let _ = writeln!(s, "max relative change {:.4}, stable {}", r.max_relative_change, r.stable);
                    s
                }),
                Err(e) => lab_error(e),
            }
        }
    }
}
