use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use uob_core::census::{self, CensusConfig, Filter};
use uob_core::constructors::{self, Fixture};
use uob_core::dot::{export_dot, DotOptions};
use uob_core::io::{self, LoadedColoring, Metadata};
use uob_core::locc;
use uob_core::refine::{find_refinement, Refinement};
use uob_core::uob::{self as qb, T0Rule, Tolerances};
use uob_core::{Edge, EdgeColoring, Error, Vertex};

#[derive(Parser)]
#[command(name = "uob", version, about = "Admissible hypercube colorings and unentangled qubit bases")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Admissibility, color count, maximality and local distinguishability of a coloring file.
    Check { input: PathBuf },
    /// Enumerate admissible colorings and print a census report.
    Enumerate(EnumerateArgs),
    /// Build a coloring and print it as a coloring document.
    Construct {
        #[command(subcommand)]
        which: Construct,
        #[arg(long, global = true)]
        output: Option<PathBuf>,
    },
    /// Maximal-family and local distinguishability verdicts, with a refinement if one exists.
    Classify { input: PathBuf },
    /// Sample rays for each color and build the product basis.
    Synthesize {
        #[arg(long)]
        coloring: PathBuf,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 0.1)]
        min_separation: f64,
        /// Gram tolerance for the orthonormality check.
        #[arg(long, default_value_t = 1e-10)]
        tolerance: f64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Read a basis document back into a coloring.
    Recover {
        #[arg(long)]
        uob: PathBuf,
        /// Ray equality tolerance.
        #[arg(long, default_value_t = 1e-9)]
        tolerance: f64,
        #[arg(long, value_enum, default_value_t = Rule::InputOrder)]
        rule: Rule,
        /// Give every direction its own colors.
        #[arg(long)]
        separate_directions: bool,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Run the measurement protocol on basis states.
    Simulate {
        #[arg(long)]
        coloring: PathBuf,
        #[arg(long)]
        seed: u64,
        /// Vertex to identify; all vertices when omitted.
        #[arg(long)]
        secret: Option<Vertex>,
        /// Measure positions in this fixed order instead of the adaptive protocol.
        #[arg(long, value_delimiter = ',')]
        order: Option<Vec<usize>>,
        #[arg(long, default_value_t = 0.1)]
        min_separation: f64,
        /// Certainty tolerance on branch probabilities.
        #[arg(long, default_value_t = 1e-9)]
        tolerance: f64,
        #[arg(long, env = "UOB_WORKERS", default_value_t = 1)]
        workers: usize,
        /// Also write the protocol tree here.
        #[arg(long)]
        protocol: Option<PathBuf>,
    },
    /// Fewest colors of a maximal coloring: exact for n <= 3, bounds beyond.
    MinColors {
        #[arg(long)]
        n: usize,
        #[arg(long, env = "UOB_WORKERS", default_value_t = 1)]
        workers: usize,
    },
    /// Check the extremal statements on the full census (n <= 3).
    VerifyTheorems {
        #[arg(long)]
        n: usize,
        #[arg(long, env = "UOB_WORKERS", default_value_t = 1)]
        workers: usize,
    },
    /// GraphViz rendering of a coloring.
    ExportDot {
        input: PathBuf,
        /// Pin vertex positions to a cube projection.
        #[arg(long)]
        positions: bool,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(clap::Args)]
struct EnumerateArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    up_to_symmetry: bool,
    #[arg(long, value_enum, default_value_t = FilterArg::All)]
    filter: FilterArg,
    #[arg(long, env = "UOB_WORKERS", default_value_t = 1)]
    workers: usize,
    /// Stop after this many search nodes.
    #[arg(long)]
    node_budget: Option<u64>,
    /// Stop after this many seconds.
    #[arg(long)]
    time_budget: Option<f64>,
    /// Resume from and save progress to this file.
    #[arg(long)]
    checkpoint: Option<PathBuf>,
    /// Include wall time in the report (makes output run-dependent).
    #[arg(long)]
    wall_time: bool,
    /// Write the selected colorings as a JSON array of coloring documents.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Construct {
    /// Recursive maximum-color coloring with 2^n - 1 colors.
    Max {
        #[arg(long)]
        n: usize,
    },
    /// Dominant/non-dominant construction.
    Bdf {
        #[arg(long)]
        n: usize,
        /// Seed non-dominant edge as `a-b`.
        #[arg(long)]
        seed_edge: Option<String>,
        /// Which completion to use, in sorted order.
        #[arg(long, default_value_t = 0)]
        completion: usize,
    },
    /// Join two colorings of Q_{n-1} by a fresh vertical color.
    Cone {
        #[arg(long)]
        bottom: PathBuf,
        #[arg(long)]
        top: PathBuf,
    },
    /// Copy a coloring to both halves and color each vertical edge freshly.
    Double {
        #[arg(long)]
        input: PathBuf,
    },
    /// One color on every edge.
    Minimal {
        #[arg(long)]
        n: usize,
    },
    /// A reference example: fig1, fig2 or bdf4.
    Fixture { name: String },
}

#[derive(Clone, Copy, ValueEnum)]
enum Rule {
    InputOrder,
    Lexicographic,
}

#[derive(Clone, Copy, ValueEnum)]
enum FilterArg {
    All,
    Maximal,
    MaxColors,
}

enum Report {
    Json(Value),
    /// Already formatted document, printed verbatim.
    Text(String),
}

/// What a command prints and whether it counts as success.
struct Outcome {
    report: Report,
    ok: bool,
}

impl Outcome {
    fn ok(report: Value) -> Self {
        Outcome { report: Report::Json(report), ok: true }
    }

    fn text(text: String) -> Self {
        Outcome { report: Report::Text(text), ok: true }
    }
}

fn emit(text: &str) {
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(text.as_bytes());
    if !text.ends_with('\n') {
        let _ = out.write_all(b"\n");
    }
    let _ = out.flush();
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("json values serialize")
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(out) => {
            match &out.report {
                Report::Json(v) => emit(&pretty(v)),
                Report::Text(t) => emit(t),
            }
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            emit(&pretty(&json!({ "error": e.to_string() })));
            ExitCode::from(1)
        }
    }
}

fn load(path: &Path) -> uob_core::Result<LoadedColoring> {
    io::load_coloring(path)
}

/// Writes `text` to `output` and returns the summary, or returns the text itself with the summary on stderr.
fn document_or_summary(output: Option<&Path>, text: String, mut summary: Value, ok: bool) -> uob_core::Result<Outcome> {
    match output {
        Some(p) => {
            std::fs::write(p, &text)?;
            summary["written"] = json!(p.display().to_string());
            Ok(Outcome { report: Report::Json(summary), ok })
        }
        None => {
            eprintln!("{}", serde_json::to_string(&summary)?);
            Ok(Outcome { report: Report::Text(text), ok })
        }
    }
}

fn run(command: Command) -> uob_core::Result<Outcome> {
    match command {
        Command::Check { input } => check(&input),
        Command::Enumerate(args) => enumerate(args),
        Command::Construct { which, output } => construct(which, output.as_deref()),
        Command::Classify { input } => classify(&input),
        Command::Synthesize { coloring, seed, min_separation, tolerance, output } => {
            let loaded = load(&coloring)?;
            let c = &loaded.coloring;
            let a = qb::sample_assignment(c, min_separation, seed)?;
            let u = qb::synthesize(c, &a)?;
            let tol = Tolerances { gram: tolerance, ..Tolerances::default() };
            let report = qb::verify_uob(&u, &tol)?;
            let meta = Metadata {
                generator: Some(format!("synthesize {}", coloring.display())),
                seed: Some(seed),
                provenance: Some(format!("min_separation {min_separation}")),
            };
            let doc = io::uob_to_json(&u, tolerance, meta)?;
            let summary = json!({
                "passed": report.passed,
                "max_off_diagonal": report.max_off_diagonal,
                "max_diagonal_deviation": report.max_diagonal_deviation,
                "failures": report.failures,
            });
            document_or_summary(output.as_deref(), doc, summary, report.passed)
        }
        Command::Recover { uob, tolerance, rule, separate_directions, output } => {
            let u = io::load_uob(&uob)?;
            let tol = Tolerances { ray_equality: tolerance, ..Tolerances::default() };
            let rule = match rule {
                Rule::InputOrder => T0Rule::InputOrder,
                Rule::Lexicographic => T0Rule::Lexicographic,
            };
            let rec = qb::recover_coloring_with(&u, &tol, rule)?;
            let coloring = if separate_directions { rec.coloring.separate_directions()? } else { rec.coloring.clone() };
            let meta = Metadata { generator: Some(format!("recover {}", uob.display())), ..Metadata::default() };
            let doc = io::coloring_to_json(&coloring, None, meta)?;
            let summary = json!({
                "colors": coloring.color_count(),
                "relabeling": rec.relabeling,
                "rule": rec.rule,
                "t0": rec.assignment.rays,
                "t1": rec.t1,
            });
            document_or_summary(output.as_deref(), doc, summary, true)
        }
        Command::Simulate { coloring, seed, secret, order, min_separation, tolerance, workers, protocol } => {
            let loaded = load(&coloring)?;
            let c = &loaded.coloring;
            let a = qb::sample_assignment(c, min_separation, seed)?;
            let u = qb::synthesize(c, &a)?;
            let tree = match &order {
                Some(o) => locc::fixed_order_protocol(c, &a, o)?,
                None => locc::extract_protocol(c, &a)?,
            };
            if let Some(p) = &protocol {
                std::fs::write(p, io::protocol_to_json(c.n(), &tree)?)?;
            }
            let tol = Tolerances { certainty: tolerance, ..Tolerances::default() };
            let results = match secret {
                Some(s) => vec![locc::simulate_seeded(&u, &tree, s, &tol, seed)?],
                None => locc::simulate_all(&u, &tree, &tol, seed, workers)?,
            };
            let all_certain = results.iter().all(|r| r.certain);
            Ok(Outcome {
                ok: all_certain,
                report: Report::Json(json!({
                    "certain": all_certain,
                    "adaptive": order.is_none(),
                    "depth": tree.depth(),
                    "results": results,
                })),
            })
        }
        Command::MinColors { n, workers } => Ok(Outcome::ok(serde_json::to_value(census::min_colors(n, workers)?)?)),
        Command::VerifyTheorems { n, workers } => {
            let r = census::verify_extremal_theorems(n, workers)?;
            Ok(Outcome { ok: r.all_passed(), report: Report::Json(serde_json::to_value(&r)?) })
        }
        Command::ExportDot { input, positions, output } => {
            let loaded = load(&input)?;
            let opts = DotOptions { color_names: Some(loaded.color_names), positions, title: None };
            let dot = export_dot(&loaded.coloring, &opts)?;
            match output {
                Some(p) => {
                    std::fs::write(&p, dot)?;
                    Ok(Outcome::ok(json!({ "written": p.display().to_string() })))
                }
                None => Ok(Outcome::text(dot)),
            }
        }
    }
}

fn check(input: &Path) -> uob_core::Result<Outcome> {
    let loaded = load(input)?;
    let c = &loaded.coloring;
    let violation = c.first_violation();
    let mut report = json!({
        "n": c.n(),
        "admissible": violation.is_none(),
        "two_face_admissible": c.is_two_face_admissible(),
        "colors": c.color_count(),
    });
    if let Some((a, b)) = violation {
        report["violation"] = json!([a, b]);
        return Ok(Outcome { report: Report::Json(report), ok: false });
    }
    report["maximal"] = json!(find_refinement(c)?.is_maximal());
    report["locc"] = json!(locc::is_locc_distinguishable(c)?);
    report["uniform_direction"] = json!(c.uniform_direction());
    Ok(Outcome::ok(report))
}

fn classify(input: &Path) -> uob_core::Result<Outcome> {
    let loaded = load(input)?;
    let c = &loaded.coloring;
    let locc_ok = locc::is_locc_distinguishable(c)?;
    let refinement = match find_refinement(c)? {
        Refinement::Maximal => Value::Null,
        Refinement::Refined(w) => serde_json::from_str(&io::coloring_to_json(&w.finer, None, Metadata::default())?)?,
    };
    Ok(Outcome::ok(json!({
        "colors": c.color_count(),
        "max_family": c.is_max_family()?,
        "locc": locc_ok,
        "maximal": refinement.is_null(),
        "refinement": refinement,
        "uniform_directions": c.uniform_directions(),
    })))
}

fn enumerate(args: EnumerateArgs) -> uob_core::Result<Outcome> {
    let cfg = CensusConfig {
        n: args.n,
        up_to_symmetry: args.up_to_symmetry,
        filter: match args.filter {
            FilterArg::All => Filter::All,
            FilterArg::Maximal => Filter::Maximal,
            FilterArg::MaxColors => Filter::MaxColors,
        },
        workers: args.workers,
        collect: args.output.is_some(),
        node_budget: args.node_budget,
        time_budget: args.time_budget.map(Duration::from_secs_f64),
        checkpoint: args.checkpoint,
        record_wall_time: args.wall_time,
    };
    let (report, colorings) = census::run_census(&cfg)?;
    if let Some(p) = &args.output {
        let docs: Vec<io::ColoringDocument> =
            colorings.iter().map(|c| io::ColoringDocument::from_coloring(c, None, Metadata::default())).collect();
        std::fs::write(p, serde_json::to_string_pretty(&docs)? + "\n")?;
    }
    Ok(Outcome::ok(serde_json::to_value(&report)?))
}

fn parse_edge(s: &str) -> uob_core::Result<Edge> {
    let bad = || Error::Document(format!("edge `{s}` is not of the form a-b with adjacent vertices"));
    let (a, b) = s.split_once('-').ok_or_else(bad)?;
    let (a, b): (Vertex, Vertex) = (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?);
    Edge::between(a, b).ok_or_else(bad)
}

fn construct(which: Construct, output: Option<&Path>) -> uob_core::Result<Outcome> {
    let (c, names, generator): (EdgeColoring, Option<Vec<String>>, String) = match which {
        Construct::Max { n } => (constructors::construct_max(n)?, None, format!("construct max --n {n}")),
        Construct::Bdf { n, seed_edge, completion } => {
            let seed = match seed_edge {
                Some(s) => parse_edge(&s)?,
                None => constructors::default_seed(n),
            };
            let patterns = constructors::dominant_pattern(n, seed)?;
            let p = patterns.get(completion).ok_or(Error::IndexOutOfRange {
                what: "completion",
                index: completion,
                limit: patterns.len(),
            })?;
            (constructors::generalized_bdf(p)?, None, format!("construct bdf --n {n} --seed-edge {seed}"))
        }
        Construct::Cone { bottom, top } => {
            let (b, t) = (load(&bottom)?.coloring, load(&top)?.coloring);
            (constructors::cone(&b, &t)?, None, "construct cone".to_string())
        }
        Construct::Double { input } => {
            (constructors::doubling(&load(&input)?.coloring)?, None, "construct double".into())
        }
        Construct::Minimal { n } => (constructors::minimal_coloring(n)?, None, format!("construct minimal --n {n}")),
        Construct::Fixture { name } => {
            let f: Fixture = name.parse()?;
            let named = constructors::fixture(f);
            (named.coloring, Some(named.color_names), format!("fixture {name}"))
        }
    };
    let meta = Metadata { generator: Some(generator), ..Metadata::default() };
    let text = io::coloring_to_json(&c, names.as_deref(), meta)?;
    document_or_summary(output, text, json!({ "colors": c.color_count() }), true)
}
