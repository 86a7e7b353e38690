//! `arcsine` — command-line surface for the exact and Monte Carlo
//! random-walk absorption statistics in `arcsine-core`.
//!
//! Every invocation runs one command and emits one machine-readable result:
//! a single JSON object by default, or a CSV table with a mandatory header
//! via `--format csv`. Exact rationals are rendered as `p/q` strings (never
//! as floats); floating-point values are rendered in shortest round-trip
//! form, byte-identical between the JSON and CSV renderings. Exit codes:
//! `0` ok, `2` a verification command found an exact mismatch, `1` error.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::Instant;

use arcsine_core::geometry::Arrangement;
use arcsine_core::simulate::{sample_walk, IncrementSampler};
use arcsine_core::weyl::{
    average_trivial_faces_a, average_trivial_faces_b_with_workers, bridge_face_equivalence,
    corollary_vertex_distribution, default_halfspace_normal, random_gp_subspace,
    walk_face_equivalence,
};
use arcsine_core::{
    arcsine_pmf, expected_containing_count, expected_m_bridge, expected_m_walk,
    limit_moment_bridge, limit_moment_walk, monte_carlo_expected_m, nonabsorption_bridge,
    nonabsorption_walk, uniform_bridge_pmf,
};
use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(
    name = "arcsine",
    about = "Exact and Monte Carlo absorption statistics for multidimensional random walks",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output rendering.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Add a decimal approximation (this many digits) next to each exact
    /// rational value.
    #[arg(long, global = true, value_name = "DIGITS")]
    decimal: Option<u32>,
    /// Omit elapsed_ms so identical invocations produce byte-identical
    /// output.
    #[arg(long, global = true)]
    stable: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Dist {
    /// Independent standard normal coordinates.
    Gaussian,
    /// Isotropic Cauchy (no moments).
    Cauchy,
    /// Coordinates uniform on [-1, 1].
    Uniform,
    /// Brownian motion at sorted uniform times: dependent, exchangeable
    /// increments.
    BrownianUniform,
}

impl Dist {
    fn sampler(self) -> IncrementSampler {
        match self {
            Dist::Gaussian => IncrementSampler::Gaussian,
            Dist::Cauchy => IncrementSampler::HeavyTail,
            Dist::Uniform => IncrementSampler::UniformCube,
            Dist::BrownianUniform => IncrementSampler::BrownianUniformTimes,
        }
    }

    fn name(self) -> &'static str {
        match self {
            Dist::Gaussian => "gaussian",
            Dist::Cauchy => "cauchy",
            Dist::Uniform => "uniform",
            Dist::BrownianUniform => "brownian-uniform",
        }
    }
}

const ALL_DISTS: [Dist; 4] = [
    Dist::Gaussian,
    Dist::Cauchy,
    Dist::Uniform,
    Dist::BrownianUniform,
];

#[derive(Subcommand)]
enum Command {
    /// Closed-form exact values (rationals rendered as "p/q").
    Exact {
        #[command(subcommand)]
        which: ExactCmd,
    },
    /// Monte Carlo estimates against their exact targets.
    Mc {
        #[command(subcommand)]
        which: McCmd,
    },
    /// Exact verification runs; a failed comparison exits with code 2.
    Verify {
        #[command(subcommand)]
        which: VerifyCmd,
    },
    /// Sweep n, k, d ranges into a value table.
    Table(TableArgs),
}

#[derive(Args)]
struct NkdArgs {
    /// Number of steps.
    #[arg(long)]
    n: usize,
    /// Tuple/face size.
    #[arg(long)]
    k: usize,
    /// Ambient dimension.
    #[arg(long)]
    d: usize,
}

#[derive(Args)]
struct NdArgs {
    /// Number of steps.
    #[arg(long)]
    n: usize,
    /// Ambient dimension.
    #[arg(long)]
    d: usize,
}

#[derive(Args)]
struct NArgs {
    /// Number of steps.
    #[arg(long)]
    n: usize,
}

#[derive(Subcommand)]
enum ExactCmd {
    /// Expected number of origin-avoiding k-tuple hulls of a walk, halved.
    Walk(NkdArgs),
    /// The same expectation for an exchangeable bridge.
    Bridge(NkdArgs),
    /// Expected number of k-tuple hulls containing the origin.
    Containing(NkdArgs),
    /// Probability that a walk's whole-path hull misses the origin.
    NonabsorbWalk(NdArgs),
    /// Probability that a bridge's whole-path hull misses the origin.
    NonabsorbBridge(NdArgs),
    /// One-dimensional positive-side occupation law of a walk.
    ArcsinePmf(NArgs),
    /// One-dimensional positive-side occupation law of a bridge.
    UniformPmf(NArgs),
    /// Large-n limit of the normalized k-th factorial moment.
    LimitMoment {
        /// Moment order.
        #[arg(long)]
        k: usize,
        /// Ambient dimension.
        #[arg(long)]
        d: usize,
        /// Use the bridge limit instead of the walk limit.
        #[arg(long)]
        bridge: bool,
    },
}

#[derive(Args)]
struct McArgs {
    #[command(flatten)]
    nkd: NkdArgs,
    /// Increment distribution.
    #[arg(long, value_enum, default_value_t = Dist::Gaussian)]
    dist: Dist,
    /// Number of independent paths.
    #[arg(long, default_value_t = 10_000)]
    trials: u64,
    /// Base seed; trial i uses seed XOR i.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads (the estimate is bit-identical for any count).
    #[arg(long, default_value_t = 1)]
    workers: usize,
}

#[derive(Subcommand)]
enum McCmd {
    /// Estimate the walk expectation and report it beside the exact target.
    Walk(McArgs),
    /// Estimate the bridge expectation likewise.
    Bridge(McArgs),
    /// Run every increment distribution at the same flags: the targets
    /// coincide, exhibiting distribution-freeness.
    Compare {
        #[command(flatten)]
        nkd: NkdArgs,
        /// Estimate the bridge expectation instead of the walk's.
        #[arg(long)]
        bridge: bool,
        /// Number of independent paths per distribution.
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        /// Base seed; trial i uses seed XOR i.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Worker threads (the estimate is bit-identical for any count).
        #[arg(long, default_value_t = 1)]
        workers: usize,
    },
}

#[derive(Args)]
struct VerifyWeylArgs {
    #[command(flatten)]
    nkd: NkdArgs,
    /// Seed for drawing the random general-position subspace.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads for the enumeration.
    #[arg(long, default_value_t = 1)]
    workers: usize,
}

#[derive(Args)]
struct VerifyLemmaArgs {
    #[command(flatten)]
    nkd: NkdArgs,
    /// Increment distribution for the sampled path.
    #[arg(long, value_enum, default_value_t = Dist::Gaussian)]
    dist: Dist,
    /// Seed for the sampled path.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum VerifyCmd {
    /// Exhaustive signed-fan k-face average against its closed form, on a
    /// seeded random general-position subspace.
    WeylB(VerifyWeylArgs),
    /// Exhaustive unsigned-fan k-face average against its closed form.
    /// Known anomaly: at k = 1 the closed form disagrees with the true
    /// average (which is always 1), so those runs report a mismatch.
    WeylA(VerifyWeylArgs),
    /// Tuple/face equivalence on one exact (dyadically lifted) random walk:
    /// absorbed k-tuples must biject with nontrivially-meeting k-faces.
    LemmaWalk(VerifyLemmaArgs),
    /// The same equivalence on one exactly centered random bridge.
    LemmaBridge(VerifyLemmaArgs),
    /// Sampled chamber vertex-count distribution against the discrete
    /// arcsine law (total-variation distance below the bound passes).
    Corollary {
        /// Number of steps.
        #[arg(long)]
        n: usize,
        /// Number of sampled chambers.
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
        /// Seed for chamber sampling.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Total-variation distance bound to pass.
        #[arg(long, default_value_t = 0.02)]
        tv_bound: f64,
    },
}

#[derive(Args)]
struct TableArgs {
    /// Largest number of steps; rows cover 1 ≤ k ≤ n ≤ n-max.
    #[arg(long)]
    n_max: usize,
    /// Largest ambient dimension; rows cover 1 ≤ d ≤ d-max.
    #[arg(long)]
    d_max: usize,
    /// Tabulate the bridge expectation instead of the walk's.
    #[arg(long)]
    bridge: bool,
}

/// One result cell; renders identically (for numerics, byte-identically)
/// into JSON and CSV.
#[derive(Clone)]
enum Cell {
    Str(String),
    Int(u64),
    Float(f64),
    Bool(bool),
}

impl Cell {
    fn json(&self) -> Value {
        match self {
            Cell::Str(s) => Value::String(s.clone()),
            Cell::Int(v) => json!(v),
            Cell::Float(v) => json!(v),
            Cell::Bool(v) => json!(v),
        }
    }

    fn csv(&self) -> String {
        match self {
            Cell::Str(s) => s.clone(),
            Cell::Int(v) => v.to_string(),
            // serde_json renders f64 both here and in the JSON object, so
            // the two formats carry identical numeric strings.
            Cell::Float(v) => serde_json::to_string(v).expect("floats serialize"),
            Cell::Bool(v) => v.to_string(),
        }
    }
}

/// A result table: named columns and at least one row. Single-row tables
/// render as a flat JSON object, multi-row tables as {"rows": [...]}.
struct Table {
    columns: Vec<&'static str>,
    rows: Vec<Vec<Cell>>,
}

impl Table {
    fn single(cells: Vec<(&'static str, Cell)>) -> Self {
        let (columns, row): (Vec<_>, Vec<_>) = cells.into_iter().unzip();
        Table {
            columns,
            rows: vec![row],
        }
    }

    fn json(&self) -> Value {
        let objects: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                Value::Object(
                    self.columns
                        .iter()
                        .zip(row)
                        .map(|(c, cell)| (c.to_string(), cell.json()))
                        .collect(),
                )
            })
            .collect();
        if objects.len() == 1 {
            objects.into_iter().next().expect("one row")
        } else {
            json!({ "rows": objects })
        }
    }

    fn csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let line: Vec<String> = row.iter().map(Cell::csv).collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Status {
    Ok,
    Mismatch,
    Error,
}

impl Status {
    fn label(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::Mismatch => "mismatch",
            Status::Error => "error",
        }
    }

    fn exit(self) -> ExitCode {
        match self {
            Status::Ok => ExitCode::SUCCESS,
            Status::Mismatch => ExitCode::from(2),
            Status::Error => ExitCode::from(1),
        }
    }
}

/// Renders an exact rational as a "p/q" string (integers print without the
/// denominator), exactly as the core's display does.
fn rational(r: &BigRational) -> String {
    r.to_string()
}

/// Exact decimal approximation of `r` with `digits` fractional digits,
/// correctly rounded (ties away from zero).
fn decimal_string(r: &BigRational, digits: u32) -> String {
    let pow = BigInt::from(10u32).pow(digits);
    let scaled = (r * BigRational::from_integer(pow.clone())).round();
    let v = scaled.to_integer();
    let sign = if v.is_negative() { "-" } else { "" };
    let (int_part, frac_part) = v.abs().div_rem(&pow);
    if digits == 0 {
        format!("{sign}{int_part}")
    } else {
        format!(
            "{sign}{int_part}.{frac:0digits$}",
            frac = frac_part,
            digits = digits as usize
        )
    }
}

/// Pushes a rational-valued column plus, when requested, its decimal
/// approximation column.
fn push_rational(
    cells: &mut Vec<(&'static str, Cell)>,
    name: &'static str,
    decimal_name: &'static str,
    value: &BigRational,
    decimal: Option<u32>,
) {
    cells.push((name, Cell::Str(rational(value))));
    if let Some(digits) = decimal {
        cells.push((decimal_name, Cell::Str(decimal_string(value, digits))));
    }
}

struct Run {
    command: &'static str,
    parameters: BTreeMap<&'static str, Value>,
    status: Status,
    table: Table,
}

fn param_map(pairs: Vec<(&'static str, Value)>) -> BTreeMap<&'static str, Value> {
    pairs.into_iter().collect()
}

fn nkd_params(nkd: &NkdArgs) -> Vec<(&'static str, Value)> {
    vec![
        ("n", json!(nkd.n)),
        ("k", json!(nkd.k)),
        ("d", json!(nkd.d)),
    ]
}

/// Lifts sampled floating-point increments to exact dyadic rationals.
fn lift_increments(increments: &[Vec<f64>]) -> Vec<Vec<BigRational>> {
    increments
        .iter()
        .map(|xi| {
            xi.iter()
                .map(|&x| BigRational::from_float(x).expect("finite floats lift exactly"))
                .collect()
        })
        .collect()
}

fn mc_estimate_row(
    args: &McArgs,
    bridge: bool,
    decimal: Option<u32>,
) -> Result<Table, Box<dyn std::error::Error>> {
    let est = monte_carlo_expected_m(
        args.nkd.n,
        args.nkd.k,
        args.nkd.d,
        args.dist.sampler(),
        bridge,
        args.trials,
        args.seed,
        args.workers,
    )?;
    let mut cells = vec![
        ("mean", Cell::Float(est.mean)),
        ("std_error", Cell::Float(est.std_error)),
    ];
    push_rational(&mut cells, "target", "target_decimal", &est.target, decimal);
    cells.push(("absolute_error", Cell::Float(est.absolute_error())));
    Ok(Table::single(cells))
}

fn execute(cli: &Cli) -> Result<Run, (String, &'static str, BTreeMap<&'static str, Value>)> {
    let decimal = cli.decimal;
    // Each arm returns (command name, parameter map, status, result table);
    // core errors bubble up with the same command identity so the error
    // object still names what was attempted.
    let attempt: (&'static str, BTreeMap<&'static str, Value>) = match &cli.command {
        Command::Exact { which } => match which {
            ExactCmd::Walk(a) => ("exact walk", param_map(nkd_params(a))),
            ExactCmd::Bridge(a) => ("exact bridge", param_map(nkd_params(a))),
            ExactCmd::Containing(a) => ("exact containing", param_map(nkd_params(a))),
            ExactCmd::NonabsorbWalk(a) => (
                "exact nonabsorb-walk",
                param_map(vec![("n", json!(a.n)), ("d", json!(a.d))]),
            ),
            ExactCmd::NonabsorbBridge(a) => (
                "exact nonabsorb-bridge",
                param_map(vec![("n", json!(a.n)), ("d", json!(a.d))]),
            ),
            ExactCmd::ArcsinePmf(a) => ("exact arcsine-pmf", param_map(vec![("n", json!(a.n))])),
            ExactCmd::UniformPmf(a) => ("exact uniform-pmf", param_map(vec![("n", json!(a.n))])),
            ExactCmd::LimitMoment { k, d, bridge } => (
                "exact limit-moment",
                param_map(vec![
                    ("k", json!(k)),
                    ("d", json!(d)),
                    ("bridge", json!(bridge)),
                ]),
            ),
        },
        Command::Mc { which } => match which {
            McCmd::Walk(a) => (
                "mc walk",
                param_map(
                    nkd_params(&a.nkd)
                        .into_iter()
                        .chain([
                            ("dist", json!(a.dist.name())),
                            ("trials", json!(a.trials)),
                            ("seed", json!(a.seed)),
                            ("workers", json!(a.workers)),
                        ])
                        .collect(),
                ),
            ),
            McCmd::Bridge(a) => (
                "mc bridge",
                param_map(
                    nkd_params(&a.nkd)
                        .into_iter()
                        .chain([
                            ("dist", json!(a.dist.name())),
                            ("trials", json!(a.trials)),
                            ("seed", json!(a.seed)),
                            ("workers", json!(a.workers)),
                        ])
                        .collect(),
                ),
            ),
            McCmd::Compare {
                nkd,
                bridge,
                trials,
                seed,
                workers,
            } => (
                "mc compare",
                param_map(
                    nkd_params(nkd)
                        .into_iter()
                        .chain([
                            ("bridge", json!(bridge)),
                            ("trials", json!(trials)),
                            ("seed", json!(seed)),
                            ("workers", json!(workers)),
                        ])
                        .collect(),
                ),
            ),
        },
        Command::Verify { which } => match which {
            VerifyCmd::WeylB(a) => (
                "verify weyl-b",
                param_map(
                    nkd_params(&a.nkd)
                        .into_iter()
                        .chain([("seed", json!(a.seed)), ("workers", json!(a.workers))])
                        .collect(),
                ),
            ),
            VerifyCmd::WeylA(a) => (
                "verify weyl-a",
                param_map(
                    nkd_params(&a.nkd)
                        .into_iter()
                        .chain([("seed", json!(a.seed)), ("workers", json!(a.workers))])
                        .collect(),
                ),
            ),
            VerifyCmd::LemmaWalk(a) => (
                "verify lemma-walk",
                param_map(
                    nkd_params(&a.nkd)
                        .into_iter()
                        .chain([("dist", json!(a.dist.name())), ("seed", json!(a.seed))])
                        .collect(),
                ),
            ),
            VerifyCmd::LemmaBridge(a) => (
                "verify lemma-bridge",
                param_map(
                    nkd_params(&a.nkd)
                        .into_iter()
                        .chain([("dist", json!(a.dist.name())), ("seed", json!(a.seed))])
                        .collect(),
                ),
            ),
            VerifyCmd::Corollary {
                n,
                trials,
                seed,
                tv_bound,
            } => (
                "verify corollary",
                param_map(vec![
                    ("n", json!(n)),
                    ("trials", json!(trials)),
                    ("seed", json!(seed)),
                    ("tv_bound", json!(tv_bound)),
                ]),
            ),
        },
        Command::Table(a) => (
            "table",
            param_map(vec![
                ("n_max", json!(a.n_max)),
                ("d_max", json!(a.d_max)),
                ("bridge", json!(a.bridge)),
            ]),
        ),
    };
    let (command, parameters) = attempt;

    let run = |status: Status, table: Table| Run {
        command,
        parameters: parameters.clone(),
        status,
        table,
    };

    let outcome: Result<Run, Box<dyn std::error::Error>> = (|| {
        match &cli.command {
            Command::Exact { which } => {
                let table = match which {
                    ExactCmd::Walk(a) => {
                        let v = expected_m_walk(a.n, a.k, a.d)?;
                        let mut cells = Vec::new();
                        push_rational(&mut cells, "value", "value_decimal", &v, decimal);
                        Table::single(cells)
                    }
                    ExactCmd::Bridge(a) => {
                        let v = expected_m_bridge(a.n, a.k, a.d)?;
                        let mut cells = Vec::new();
                        push_rational(&mut cells, "value", "value_decimal", &v, decimal);
                        Table::single(cells)
                    }
                    ExactCmd::Containing(a) => {
                        let v = expected_containing_count(a.n, a.k, a.d)?;
                        let mut cells = Vec::new();
                        push_rational(&mut cells, "value", "value_decimal", &v, decimal);
                        Table::single(cells)
                    }
                    ExactCmd::NonabsorbWalk(a) => {
                        let v = nonabsorption_walk(a.n, a.d)?;
                        let mut cells = Vec::new();
                        push_rational(&mut cells, "value", "value_decimal", &v, decimal);
                        Table::single(cells)
                    }
                    ExactCmd::NonabsorbBridge(a) => {
                        let v = nonabsorption_bridge(a.n, a.d)?;
                        let mut cells = Vec::new();
                        push_rational(&mut cells, "value", "value_decimal", &v, decimal);
                        Table::single(cells)
                    }
                    ExactCmd::ArcsinePmf(a) => pmf_table(arcsine_pmf(a.n)?, decimal),
                    ExactCmd::UniformPmf(a) => pmf_table(uniform_bridge_pmf(a.n)?, decimal),
                    ExactCmd::LimitMoment { k, d, bridge } => {
                        let v = if *bridge {
                            limit_moment_bridge(*k, *d)?
                        } else {
                            limit_moment_walk(*k, *d)?
                        };
                        let mut cells = Vec::new();
                        push_rational(&mut cells, "value", "value_decimal", &v, decimal);
                        Table::single(cells)
                    }
                };
                Ok(run(Status::Ok, table))
            }
            Command::Mc { which } => match which {
                McCmd::Walk(a) => Ok(run(Status::Ok, mc_estimate_row(a, false, decimal)?)),
                McCmd::Bridge(a) => Ok(run(Status::Ok, mc_estimate_row(a, true, decimal)?)),
                McCmd::Compare {
                    nkd,
                    bridge,
                    trials,
                    seed,
                    workers,
                } => {
                    let mut columns = vec!["dist", "mean", "std_error", "target"];
                    if decimal.is_some() {
                        columns.push("target_decimal");
                    }
                    columns.push("absolute_error");
                    let mut rows = Vec::new();
                    for dist in ALL_DISTS {
                        let est = monte_carlo_expected_m(
                            nkd.n,
                            nkd.k,
                            nkd.d,
                            dist.sampler(),
                            *bridge,
                            *trials,
                            *seed,
                            *workers,
                        )?;
                        let mut row = vec![
                            Cell::Str(dist.name().to_string()),
                            Cell::Float(est.mean),
                            Cell::Float(est.std_error),
                            Cell::Str(rational(&est.target)),
                        ];
                        if let Some(digits) = decimal {
                            row.push(Cell::Str(decimal_string(&est.target, digits)));
                        }
                        row.push(Cell::Float(est.absolute_error()));
                        rows.push(row);
                    }
                    Ok(run(Status::Ok, Table { columns, rows }))
                }
            },
            Command::Verify { which } => match which {
                VerifyCmd::WeylB(a) => {
                    let subspace = random_gp_subspace(a.nkd.n, a.nkd.d, Arrangement::B, a.seed)?;
                    let report = average_trivial_faces_b_with_workers(
                        a.nkd.n, a.nkd.k, a.nkd.d, &subspace, a.workers,
                    )?;
                    let status = if report.matches {
                        Status::Ok
                    } else {
                        Status::Mismatch
                    };
                    let mut cells = Vec::new();
                    push_rational(
                        &mut cells,
                        "formula",
                        "formula_decimal",
                        &report.formula_value,
                        decimal,
                    );
                    push_rational(
                        &mut cells,
                        "exhaustive",
                        "exhaustive_decimal",
                        &report.average_trivial,
                        decimal,
                    );
                    cells.push(("matches", Cell::Bool(report.matches)));
                    Ok(run(status, Table::single(cells)))
                }
                VerifyCmd::WeylA(a) => {
                    let subspace = random_gp_subspace(a.nkd.n, a.nkd.d, Arrangement::A, a.seed)?;
                    let report = average_trivial_faces_a(a.nkd.n, a.nkd.k, a.nkd.d, &subspace)?;
                    let status = if report.matches {
                        Status::Ok
                    } else {
                        Status::Mismatch
                    };
                    let mut cells = Vec::new();
                    push_rational(
                        &mut cells,
                        "formula",
                        "formula_decimal",
                        &report.formula_value,
                        decimal,
                    );
                    push_rational(
                        &mut cells,
                        "exhaustive",
                        "exhaustive_decimal",
                        &report.average_trivial,
                        decimal,
                    );
                    cells.push(("matches", Cell::Bool(report.matches)));
                    Ok(run(status, Table::single(cells)))
                }
                VerifyCmd::LemmaWalk(a) => {
                    let path = sample_walk(a.nkd.n, a.nkd.d, a.dist.sampler(), a.seed)?;
                    let increments = lift_increments(path.increments());
                    let (absorbed, nontrivial, equal) =
                        walk_face_equivalence(&increments, a.nkd.k)?;
                    let status = if equal { Status::Ok } else { Status::Mismatch };
                    Ok(run(
                        status,
                        Table::single(vec![
                            ("absorbed_tuples", Cell::Int(absorbed)),
                            ("nontrivial_faces", Cell::Int(nontrivial)),
                            ("equal", Cell::Bool(equal)),
                        ]),
                    ))
                }
                VerifyCmd::LemmaBridge(a) => {
                    // Lift a sampled walk exactly, then center it exactly in
                    // rational arithmetic so the bridge constraint holds with
                    // zero tolerance.
                    let path = sample_walk(a.nkd.n, a.nkd.d, a.dist.sampler(), a.seed)?;
                    let mut increments = lift_increments(path.increments());
                    let n = increments.len();
                    for r in 0..a.nkd.d {
                        let mean = increments
                            .iter()
                            .fold(BigRational::zero(), |acc, xi| acc + &xi[r])
                            / BigRational::from_integer(BigInt::from(n as u64));
                        for xi in increments.iter_mut() {
                            xi[r] -= &mean;
                        }
                    }
                    let (absorbed, nontrivial, equal) =
                        bridge_face_equivalence(&increments, a.nkd.k)?;
                    let status = if equal { Status::Ok } else { Status::Mismatch };
                    Ok(run(
                        status,
                        Table::single(vec![
                            ("absorbed_tuples", Cell::Int(absorbed)),
                            ("nontrivial_faces", Cell::Int(nontrivial)),
                            ("equal", Cell::Bool(equal)),
                        ]),
                    ))
                }
                VerifyCmd::Corollary {
                    n,
                    trials,
                    seed,
                    tv_bound,
                } => {
                    let normal = default_halfspace_normal(*n);
                    let dist = corollary_vertex_distribution(*n, *trials, *seed, &normal)?;
                    let within = dist.tv_distance < *tv_bound;
                    let status = if within { Status::Ok } else { Status::Mismatch };
                    Ok(run(
                        status,
                        Table::single(vec![
                            ("tv_distance", Cell::Float(dist.tv_distance)),
                            ("tv_bound", Cell::Float(*tv_bound)),
                            ("within_bound", Cell::Bool(within)),
                        ]),
                    ))
                }
            },
            Command::Table(a) => {
                let mut columns = vec!["n", "k", "d", "value"];
                if decimal.is_some() {
                    columns.push("value_decimal");
                }
                let mut rows = Vec::new();
                let n_min = if a.bridge { 2 } else { 1 };
                for n in n_min..=a.n_max {
                    let k_max = if a.bridge { n - 1 } else { n };
                    for k in 1..=k_max {
                        for d in 1..=a.d_max {
                            let v = if a.bridge {
                                expected_m_bridge(n, k, d)?
                            } else {
                                expected_m_walk(n, k, d)?
                            };
                            let mut row = vec![
                                Cell::Int(n as u64),
                                Cell::Int(k as u64),
                                Cell::Int(d as u64),
                                Cell::Str(rational(&v)),
                            ];
                            if let Some(digits) = decimal {
                                row.push(Cell::Str(decimal_string(&v, digits)));
                            }
                            rows.push(row);
                        }
                    }
                }
                Ok(run(Status::Ok, Table { columns, rows }))
            }
        }
    })();

    outcome.map_err(|e| (e.to_string(), command, parameters))
}

fn pmf_table(pmf: Vec<BigRational>, decimal: Option<u32>) -> Table {
    let mut columns = vec!["m", "probability"];
    if decimal.is_some() {
        columns.push("probability_decimal");
    }
    let rows = pmf
        .iter()
        .enumerate()
        .map(|(m, p)| {
            let mut row = vec![Cell::Int(m as u64), Cell::Str(rational(p))];
            if let Some(digits) = decimal {
                row.push(Cell::Str(decimal_string(p, digits)));
            }
            row
        })
        .collect();
    Table { columns, rows }
}

fn print_json(
    command: &str,
    parameters: &BTreeMap<&'static str, Value>,
    status: Status,
    result: Value,
    elapsed_ms: Option<u128>,
) {
    let params: serde_json::Map<String, Value> = parameters
        .iter()
        .map(|(k, v)| (k.to_string(), v.clone()))
        .collect();
    let mut object = json!({
        "command": command,
        "parameters": params,
        "status": status.label(),
        "result": result,
    });
    if let Some(ms) = elapsed_ms {
        object["elapsed_ms"] = json!(ms);
    }
    println!("{object}");
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version requests are not errors; anything else is
            // usage text on standard error with exit code 1.
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            eprint!("{e}");
            return ExitCode::from(1);
        }
    };

    let started = Instant::now();
    match execute(&cli) {
        Ok(run) => {
            let elapsed = (!cli.stable).then(|| started.elapsed().as_millis());
            match cli.format {
                Format::Json => print_json(
                    run.command,
                    &run.parameters,
                    run.status,
                    run.table.json(),
                    elapsed,
                ),
                Format::Csv => print!("{}", run.table.csv()),
            }
            run.status.exit()
        }
        Err((message, command, parameters)) => {
            let elapsed = (!cli.stable).then(|| started.elapsed().as_millis());
            match cli.format {
                Format::Json => print_json(
                    command,
                    &parameters,
                    Status::Error,
                    json!({ "message": message }),
                    elapsed,
                ),
                Format::Csv => eprintln!("error: {message}"),
            }
            Status::Error.exit()
        }
    }
}
