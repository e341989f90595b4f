//! Command-line front end: build, route, measure, generate, verify, render.

pub mod render;

use std::fs;
use std::io::Write;
use std::path::{Path as FsPath, PathBuf};
use std::str::FromStr;

use clap::{CommandFactory, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use serde::Serialize;
use thiserror::Error;

use theta6::adversarial::lower_bound_pointset;
use theta6::lemmas::{lemma_suite, LemmaId};
use theta6::lp::{measure_instance, verify_all, CatalogOptions};
use theta6::metrics::{shortest_path, spanning_ratio, theorem_check};
use theta6::routing::{greedy_path, Path, PathDocument};
use theta6::sampling::SampleSpec;
use theta6::scalar::parse_rational;
use theta6::theta6::GraphDocument;
use theta6::{ConeIndex, PointSet, Theta6Graph};

/// Names the config file read when `--config` is absent.
pub const CONFIG_ENV: &str = "THETA6_CONFIG";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{0}")]
    Input(String),
    #[error("config line {line}: {message}")]
    Config { line: usize, message: String },
}

impl CliError {
    fn input(e: impl std::fmt::Display) -> Self {
        CliError::Input(e.to_string())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Text,
    Json,
}

impl FromStr for OutputFormat {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "text" => Ok(OutputFormat::Text),
            "json" => Ok(OutputFormat::Json),
            other => Err(format!("unknown output format `{other}`")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Config {
    pub tolerance: f64,
    pub precision_bits: u32,
    pub seed: u64,
    pub output_format: OutputFormat,
}

impl Default for Config {
    fn default() -> Self {
        Self { tolerance: 1e-9, precision_bits: 256, seed: 0, output_format: OutputFormat::Text }
    }
}

impl Config {
    /// `key = value` lines; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut cfg = Config::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bad = |message: String| CliError::Config { line: idx + 1, message };
            let (key, value) = line.split_once('=').ok_or_else(|| bad("expected key = value".into()))?;
            let value = value.trim();
            match key.trim() {
                "tolerance" => cfg.tolerance = value.parse().map_err(|_| bad(format!("bad tolerance `{value}`")))?,
                "precision_bits" => {
                    cfg.precision_bits = value.parse().map_err(|_| bad(format!("bad precision_bits `{value}`")))?
                }
                "seed" => cfg.seed = value.parse().map_err(|_| bad(format!("bad seed `{value}`")))?,
                "output_format" => cfg.output_format = value.parse().map_err(bad)?,
                other => return Err(bad(format!("unknown key `{other}`"))),
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &FsPath) -> Result<Self, CliError> {
        Self::parse(&read(path)?)
    }

    fn validate(&self) -> Result<(), CliError> {
        if self.tolerance.is_nan() || self.tolerance <= 0.0 {
            return Err(CliError::Config { line: 0, message: "tolerance must be positive".into() });
        }
        if self.precision_bits < 64 {
            return Err(CliError::Config { line: 0, message: "precision_bits must be at least 64".into() });
        }
        Ok(())
    }
}

#[derive(Debug, Parser)]
#[command(name = "theta6", version, about = "Directed Θ₆ graphs: construction, routing, spanning ratios, case verification")]
struct Cli {
    /// key=value config file; defaults to $THETA6_CONFIG when set.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Overrides `output_format` from the config.
    #[arg(long, global = true, value_enum)]
    format: Option<OutputFormat>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    Greedy,
    Shortest,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build the graph of a point file and write it as JSON.
    Build {
        #[arg(long)]
        points: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Restore general position with a seeded rational offset of this magnitude.
        #[arg(long)]
        perturb: Option<String>,
    },
    /// Route between two vertices of a graph file.
    Route {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long = "from")]
        from: usize,
        #[arg(long = "to")]
        to: usize,
        #[arg(long, value_enum, default_value = "greedy")]
        mode: Mode,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Spanning ratio of the graph of a point file.
    Ratio {
        #[arg(long)]
        points: PathBuf,
        #[arg(long)]
        per_pair: bool,
        /// Also check `d ≤ 5‖st‖thex + tolerance` for every pair; exit 1 on failure.
        #[arg(long)]
        check: bool,
    },
    /// Write the lower-bound family for `delta` as a labeled point file.
    Lowerbound {
        #[arg(long)]
        delta: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Solve every catalog system and compare with its expectation.
    VerifyCases {
        #[arg(long = "case")]
        case: Option<String>,
        #[arg(long)]
        certificates: Option<PathBuf>,
        /// Remove rows with this label from every system.
        #[arg(long, num_args = 1..)]
        drop: Vec<String>,
        /// Add optional rows (only `Y5geY0`).
        #[arg(long = "with", num_args = 1..)]
        with: Vec<String>,
    },
    /// Run a seeded lemma suite.
    Lemmas {
        #[arg(long)]
        suite: String,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 16)]
        size: usize,
    },
    /// Draw a graph file as SVG, optionally highlighting a path file.
    Render {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        svg: PathBuf,
        #[arg(long)]
        path: Option<PathBuf>,
    },
    /// Measure the case variables of an instance with `s ∈ C_t^0`.
    Measure {
        #[arg(long)]
        points: PathBuf,
        #[arg(long)]
        s: usize,
        #[arg(long)]
        t: usize,
    },
}

fn read(path: &FsPath) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn write(path: &FsPath, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn rational(s: &str) -> Result<BigRational, CliError> {
    parse_rational(s).ok_or_else(|| CliError::Usage(format!("expected a rational p/q, got `{s}`")))
}

fn load_graph(path: &FsPath) -> Result<Theta6Graph, CliError> {
    let doc: GraphDocument = serde_json::from_str(&read(path)?).map_err(CliError::input)?;
    Theta6Graph::from_json(&doc).map_err(CliError::input)
}

fn load_points(path: &FsPath) -> Result<PointSet, CliError> {
    PointSet::from_text(&read(path)?).map_err(CliError::input)
}

fn json(v: &impl Serialize) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

struct Ctx<'a> {
    cfg: Config,
    out: &'a mut dyn Write,
}

impl Ctx<'_> {
    fn emit(&mut self, text: &str) -> Result<(), CliError> {
        self.out.write_all(text.as_bytes()).map_err(|source| CliError::Io { path: "<stdout>".into(), source })
    }

    fn report(&mut self, value: &impl Serialize, text: impl FnOnce() -> String) -> Result<(), CliError> {
        match self.cfg.output_format {
            OutputFormat::Json => self.emit(&json(value)),
            OutputFormat::Text => self.emit(&text()),
        }
    }
}

/// Whether the checks a command ran all passed.
type Checked = bool;

fn execute(cmd: Command, ctx: &mut Ctx) -> Result<Checked, CliError> {
    match cmd {
        Command::Build { points, out, perturb } => {
            let set = match perturb {
                None => load_points(&points)?,
                Some(m) => {
                    let raw = PointSet::parse_points(&read(&points)?).map_err(CliError::input)?;
                    PointSet::perturbed(&raw, &rational(&m)?, ctx.cfg.seed).map_err(CliError::input)?
                }
            };
            let doc = json(&Theta6Graph::build(set).to_json());
            match out {
                Some(p) => write(&p, &doc)?,
                None => ctx.emit(&doc)?,
            }
            Ok(true)
        }
        Command::Route { graph, from, to, mode, out } => {
            let g = load_graph(&graph)?;
            let path: Path = match mode {
                Mode::Greedy => greedy_path(&g, from, to).map_err(CliError::input)?,
                Mode::Shortest => shortest_path(&g, from, to).map_err(CliError::input)?.path,
            };
            let doc = PathDocument::new(&g, &path);
            if let Some(p) = out {
                write(&p, &json(&doc))?;
            }
            ctx.report(&doc, || {
                let ids: Vec<String> = doc.vertices.iter().map(usize::to_string).collect();
                format!(
                    "path {}\nedges {}\nhex {}\nthex {}\neuclid {:.12}\n",
                    ids.join(" "),
                    path.edge_count(),
                    doc.hex_total,
                    doc.thex_total,
                    doc.euclid_total
                )
            })?;
            Ok(true)
        }
        Command::Ratio { points, per_pair, check } => {
            let g = Theta6Graph::build(load_points(&points)?);
            let report = spanning_ratio(&g, per_pair).map_err(CliError::input)?;
            let theorem = check.then(|| theorem_check(&g, ctx.cfg.tolerance, ctx.cfg.precision_bits));
            let passed = theorem.as_ref().is_none_or(|t| t.all_pass());
            #[derive(Serialize)]
            struct Out<'a> {
                ratio: &'a theta6::metrics::RatioReport,
                #[serde(skip_serializing_if = "Option::is_none")]
                check: Option<&'a theta6::metrics::TheoremReport>,
            }
            ctx.report(&Out { ratio: &report, check: theorem.as_ref() }, || {
                let mut s = format!(
                    "vertices {}\nratio {:.12} .. {:.12} at {:?}\nratio_vs_thex {:.12} .. {:.12} at {:?}\n",
                    report.vertices,
                    report.ratio_vs_euclid.lo,
                    report.ratio_vs_euclid.hi,
                    report.worst_pair,
                    report.ratio_vs_thex.lo,
                    report.ratio_vs_thex.hi,
                    report.worst_thex_pair
                );
                if let Some(rows) = &report.per_pair {
                    for r in rows {
                        s.push_str(&format!("{} {} {:.12}\n", r.s, r.t, r.ratio_vs_euclid.midpoint()));
                    }
                }
                if let Some(t) = &theorem {
                    s.push_str(&format!(
                        "check {} of {} pairs pass, {} fail, {} inconclusive\n",
                        t.passed,
                        t.pairs,
                        t.failed.len(),
                        t.inconclusive.len()
                    ));
                }
                s
            })?;
            Ok(passed)
        }
        Command::Lowerbound { delta, out } => {
            let inst = lower_bound_pointset(&rational(&delta)?).map_err(CliError::input)?;
            write(&out, &inst.to_text())?;
            ctx.emit(&format!("wrote {} points (k = {}) to {}\n", inst.points.len(), inst.k, out.display()))?;
            Ok(true)
        }
        Command::VerifyCases { case, certificates, drop, with } => {
            let mut opts = CatalogOptions { drop, ..CatalogOptions::default() };
            for w in &with {
                match w.as_str() {
                    theta6::lp::catalog::Y5_GE_Y0 => opts.with_y5 = true,
                    other => return Err(CliError::Usage(format!("--with accepts only Y5geY0, got `{other}`"))),
                }
            }
            let report = verify_all(&opts, case.as_deref()).map_err(CliError::input)?;
            if report.systems.is_empty() {
                return Err(CliError::Usage(format!("no system named `{}`", case.unwrap_or_default())));
            }
            if let Some(p) = certificates {
                write(&p, &json(&report))?;
            }
            ctx.report(&report, || {
                let passed = report.systems.iter().filter(|s| s.passed).count();
                format!("{}{passed} of {} systems as expected\n", report.table(), report.systems.len())
            })?;
            Ok(report.all_passed())
        }
        Command::Lemmas { suite, samples, seed, size } => {
            let lemma: LemmaId = suite.parse().map_err(|e: theta6::lemmas::UnknownLemma| CliError::Usage(e.to_string()))?;
            let spec = SampleSpec { instances: samples, size, seed: seed.unwrap_or(ctx.cfg.seed), ..SampleSpec::default() };
            let report = lemma_suite(&spec, lemma).map_err(CliError::input)?;
            ctx.report(&report, || {
                let mut s = format!(
                    "{} samples {} premise hits {} rejected {} violations {}\n",
                    report.lemma,
                    report.samples,
                    report.premise_hits,
                    report.rejected,
                    report.violations.len()
                );
                for v in &report.violations {
                    s.push_str(&format!("violation: {}\n{}", v.detail, v.instance));
                }
                s
            })?;
            Ok(report.passed())
        }
        Command::Render { graph, svg, path } => {
            let g = load_graph(&graph)?;
            let highlight = match path {
                Some(p) => {
                    let doc: PathDocument = serde_json::from_str(&read(&p)?).map_err(CliError::input)?;
                    if doc.vertices.iter().any(|&v| v >= g.len()) {
                        return Err(CliError::Input("path names a vertex outside the graph".into()));
                    }
                    let edge_cones: Vec<ConeIndex> = doc.cones.clone();
                    vec![Path { vertices: doc.vertices, edge_cones }]
                }
                None => Vec::new(),
            };
            write(&svg, &render::render_svg(&g, &highlight))?;
            Ok(true)
        }
        Command::Measure { points, s, t } => {
            let g = Theta6Graph::build(load_points(&points)?);
            let m = measure_instance(&g, s, t).map_err(CliError::input)?;
            let rows = m.check_rows();
            let violated = rows.iter().any(|r| r.holds == Some(false));
            #[derive(Serialize)]
            struct Out<'a> {
                measurement: &'a theta6::lp::Measurement,
                rows: &'a [theta6::lp::measure::RowCheck],
            }
            ctx.report(&Out { measurement: &m, rows: &rows }, || {
                let mut out = format!("mirrored {}\npremises {}\n", m.mirrored, m.premises_hold());
                out.push_str(&format!("case {}\n", m.flags.case_label().unwrap_or_else(|| "-".into())));
                for (k, v) in &m.values {
                    out.push_str(&format!("{k} = {v}\n"));
                }
                for (k, why) in &m.undefined {
                    out.push_str(&format!("{k} undefined: {why}\n"));
                }
                for r in rows.iter().filter(|r| r.applicable) {
                    let state = match r.holds {
                        Some(true) => "holds",
                        Some(false) => "VIOLATED",
                        None => "undefined",
                    };
                    out.push_str(&format!("row {} {state}\n", r.label));
                }
                out
            })?;
            Ok(!violated)
        }
    }
}

/// Runs the command line `argv` (program name first) and returns the exit code:
/// 0 when everything passed, 1 when a check failed, 2 on usage or input errors.
pub fn run_with<I, S>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let mut text = e.render().to_string();
            return if e.use_stderr() {
                if !text.contains("Usage:") {
                    text = format!("{text}\n{}\n", Cli::command().render_usage());
                }
                let _ = write!(err, "{text}");
                2
            } else {
                let _ = write!(out, "{text}");
                0
            };
        }
    };
    let cfg_path = cli.config.clone().or_else(|| std::env::var_os(CONFIG_ENV).map(PathBuf::from));
    let mut cfg = match cfg_path {
        Some(p) => match Config::load(&p) {
            Ok(c) => c,
            Err(e) => {
                let _ = writeln!(err, "error: {e}");
                return 2;
            }
        },
        None => Config::default(),
    };
    if let Some(f) = cli.format {
        cfg.output_format = f;
    }
    let mut ctx = Ctx { cfg, out };
    match execute(cli.command, &mut ctx) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

pub fn run<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    run_with(argv, &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}
