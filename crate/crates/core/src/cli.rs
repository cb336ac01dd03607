//! Command-line front end: argument grammar, report rendering, and the
//! figure-data emitter.
//!
//! Commands render to strings so they can be tested without a process;
//! the binary only maps [`CliError`] onto exit codes.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::analysis::{
    canonical_grid, classify_representations, decay_curve, esd_threshold, linear_grid,
    robustness_ranking, DecayCurve, EsdResult, EsdVerdict, RankingReport, RepClass,
    DEFAULT_ESD_TOL, MATCH_TOL,
};
use crate::clusterstate::{apply_hadamards, build_cluster, ClusterSpec, RepresentationMask};
use crate::error::Error;
use crate::negativity::Measure;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Domain(#[from] Error),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Usage(_) => 2,
            Self::Domain(_) => 3,
            Self::Io { .. } => 4,
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

#[derive(Debug, Parser)]
#[command(
    name = "cluster-dephasing",
    version,
    about = "Entanglement decay of small cluster states under dephasing"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, clap::Args)]
pub struct StateArgs {
    /// Number of qubits.
    #[arg(long)]
    pub n: usize,
    /// `chain`, or CZ edges such as `1-2,2-3`; empty for no edges.
    #[arg(long, default_value = "chain")]
    pub graph: String,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the amplitudes of a representation state.
    Build {
        #[command(flatten)]
        state: StateArgs,
        /// Hadamard mask such as `1,3`, or `none`.
        #[arg(long, default_value = "none")]
        mask: String,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Negativity decay curves over a dephasing grid.
    Curve {
        #[command(flatten)]
        state: StateArgs,
        #[arg(long, default_value = "none")]
        mask: String,
        /// Comma list such as `N1,N23,N3part`; defaults to every cut of at
        /// most n/2 qubits.
        #[arg(long)]
        measures: Option<String>,
        /// `start:stop:steps`, both ends included.
        #[arg(long, default_value = "0:1:201")]
        p: String,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Locate the entanglement sudden-death threshold of one measure.
    Esd {
        #[command(flatten)]
        state: StateArgs,
        #[arg(long, default_value = "none")]
        mask: String,
        #[arg(long)]
        measure: String,
        #[arg(long, default_value_t = DEFAULT_ESD_TOL)]
        tol: f64,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Group all Hadamard masks into decay-equivalence classes.
    Classify {
        #[command(flatten)]
        state: StateArgs,
        #[arg(long, default_value = "0:1:201")]
        p: String,
        #[arg(long, default_value_t = MATCH_TOL)]
        tol: f64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Rank masks by negativity at one dephasing strength.
    Rank {
        #[command(flatten)]
        state: StateArgs,
        /// Semicolon-separated masks such as `none;1,3;2,3`; defaults to all.
        #[arg(long)]
        masks: Option<String>,
        #[arg(long)]
        p: f64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write the figure data files into a directory.
    Figures {
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
}

/// What a command produced: text for standard output or a file, or a set
/// of files already written.
#[derive(Debug)]
pub enum Output {
    Text { body: String, out: Option<PathBuf> },
    Files(Vec<PathBuf>),
}

pub fn run(cli: Cli) -> CliResult<Output> {
    match cli.command {
        Command::Build { state, mask, format, out } => {
            let spec = parse_spec(&state)?;
            let mask = parse_mask(&mask)?;
            Ok(Output::Text { body: cmd_build(&spec, &mask, format)?, out })
        }
        Command::Curve { state, mask, measures, p, format, out } => {
            let spec = parse_spec(&state)?;
            let mask = parse_mask(&mask)?;
            let measures = match measures {
                Some(text) => parse_measures(&text)?,
                None => Measure::report_set(spec.n()),
            };
            let grid = parse_range(&p)?;
            Ok(Output::Text { body: cmd_curve(&spec, &mask, &measures, &grid, format)?, out })
        }
        Command::Esd { state, mask, measure, tol, format, out } => {
            let spec = parse_spec(&state)?;
            let mask = parse_mask(&mask)?;
            let measure: Measure = measure.parse().map_err(|e: Error| usage(e.to_string()))?;
            Ok(Output::Text { body: cmd_esd(&spec, &mask, &measure, tol, format)?, out })
        }
        Command::Classify { state, p, tol, format, out } => {
            let spec = parse_spec(&state)?;
            let grid = parse_range(&p)?;
            Ok(Output::Text { body: cmd_classify(&spec, &grid, tol, format)?, out })
        }
        Command::Rank { state, masks, p, format, out } => {
            let spec = parse_spec(&state)?;
            let masks = match masks {
                Some(text) => text.split(';').map(parse_mask).collect::<CliResult<Vec<_>>>()?,
                None => RepresentationMask::all(spec.n()),
            };
            Ok(Output::Text { body: cmd_rank(&spec, &masks, p, format)?, out })
        }
        Command::Figures { out } => Ok(Output::Files(cmd_figures(&out)?)),
    }
}

/// Writes a text output to its destination; `None` means standard output.
pub fn emit(output: &Output) -> CliResult<()> {
    match output {
        Output::Text { body, out: Some(path) } => write_file(path, body),
        Output::Text { body, out: None } => {
            print!("{body}");
            Ok(())
        }
        Output::Files(paths) => {
            for p in paths {
                println!("{}", p.display());
            }
            Ok(())
        }
    }
}

fn write_file(path: &Path, body: &str) -> CliResult<()> {
    fs::write(path, body).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

// ---- argument grammar ----

pub fn parse_spec(state: &StateArgs) -> CliResult<ClusterSpec> {
    let graph = state.graph.trim();
    if graph == "chain" {
        return Ok(ClusterSpec::linear_chain(state.n)?);
    }
    Ok(ClusterSpec::new(state.n, parse_edges(graph)?)?)
}

/// `1-2,2-3`; the empty string and `none` mean no edges.
pub fn parse_edges(text: &str) -> CliResult<Vec<(usize, usize)>> {
    let text = text.trim();
    if text.is_empty() || text == "none" {
        return Ok(Vec::new());
    }
    text.split(',')
        .map(|pair| {
            let (a, b) = pair
                .split_once('-')
                .ok_or_else(|| usage(format!("edge {pair:?} is not of the form i-j")))?;
            Ok((parse_index(a)?, parse_index(b)?))
        })
        .collect()
}

/// `none`, or a comma list of qubit indices.
pub fn parse_mask(text: &str) -> CliResult<RepresentationMask> {
    let text = text.trim();
    if text == "none" || text.is_empty() {
        return Ok(RepresentationMask::basic());
    }
    let qubits = text.split(',').map(parse_index).collect::<CliResult<Vec<_>>>()?;
    RepresentationMask::new(qubits).map_err(|e| usage(e.to_string()))
}

fn parse_index(text: &str) -> CliResult<usize> {
    text.trim()
        .parse::<usize>()
        .ok()
        .filter(|&q| q > 0)
        .ok_or_else(|| usage(format!("{text:?} is not a qubit index")))
}

pub fn parse_measures(text: &str) -> CliResult<Vec<Measure>> {
    text.split(',')
        .map(|s| s.trim().parse::<Measure>().map_err(|e| usage(e.to_string())))
        .collect()
}

/// `start:stop:steps`.
pub fn parse_range(text: &str) -> CliResult<Vec<f64>> {
    let parts: Vec<&str> = text.split(':').collect();
    let [start, stop, steps] = parts.as_slice() else {
        return Err(usage(format!("range {text:?} is not start:stop:steps")));
    };
    let num = |s: &str| {
        s.trim()
            .parse::<f64>()
            .map_err(|_| usage(format!("{s:?} is not a number")))
    };
    let steps: usize = steps
        .trim()
        .parse()
        .map_err(|_| usage(format!("{steps:?} is not a step count")))?;
    linear_grid(num(start)?, num(stop)?, steps).map_err(|e| usage(e.to_string()))
}

// ---- number formatting ----

/// Twelve significant digits, `%g` style: fixed notation for decimal
/// exponents in `[-4, 12)`, scientific otherwise, trailing zeros removed.
pub fn format_number(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{:.11e}", x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        trim_zeros(&format!("{:.*}", decimals, x)).to_string()
    } else {
        format!("{}e{}", trim_zeros(mantissa), exp)
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn format_row(values: impl IntoIterator<Item = f64>) -> String {
    values.into_iter().map(format_number).collect::<Vec<_>>().join(",")
}

// ---- JSON helpers ----

fn spec_json(spec: &ClusterSpec) -> Value {
    json!({
        "n": spec.n(),
        "edges": spec.edges().iter().map(|&(i, j)| vec![i, j]).collect::<Vec<_>>(),
    })
}

fn to_json_string(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn bitstring(index: usize, n: usize) -> String {
    format!("{index:0n$b}")
}

// ---- commands ----

pub fn cmd_build(spec: &ClusterSpec, mask: &RepresentationMask, format: Format) -> CliResult<String> {
    let state = apply_hadamards(&build_cluster(spec), mask)?;
    let n = spec.n();
    match format {
        Format::Csv => {
            let mut out = String::from("index,bitstring,re,im\n");
            for (i, a) in state.amplitudes().iter().enumerate() {
                out.push_str(&format!(
                    "{i},{},{},{}\n",
                    bitstring(i, n),
                    format_number(a.re),
                    format_number(a.im)
                ));
            }
            Ok(out)
        }
        Format::Json => {
            let amps: Vec<Value> = state
                .amplitudes()
                .iter()
                .enumerate()
                .map(|(i, a)| json!({"index": i, "bitstring": bitstring(i, n), "re": a.re, "im": a.im}))
                .collect();
            Ok(to_json_string(&json!({
                "config": {"command": "build", "spec": spec_json(spec), "mask": mask.qubits()},
                "amplitudes": amps,
            })))
        }
    }
}

pub fn curve_csv(curve: &DecayCurve) -> String {
    let mut out = String::from("p");
    for m in curve.measures() {
        out.push(',');
        out.push_str(&m.to_string());
    }
    out.push('\n');
    for (k, &p) in curve.grid.iter().enumerate() {
        out.push_str(&format_row(
            std::iter::once(p).chain(curve.series.iter().map(|s| s.values[k])),
        ));
        out.push('\n');
    }
    out
}

pub fn cmd_curve(
    spec: &ClusterSpec,
    mask: &RepresentationMask,
    measures: &[Measure],
    grid: &[f64],
    format: Format,
) -> CliResult<String> {
    let curve = decay_curve(spec, mask, measures, grid)?;
    match format {
        Format::Csv => Ok(curve_csv(&curve)),
        Format::Json => {
            let mut series = Map::new();
            for s in &curve.series {
                series.insert(s.measure.to_string(), json!(s.values));
            }
            Ok(to_json_string(&json!({
                "config": {
                    "command": "curve",
                    "spec": spec_json(spec),
                    "mask": mask.qubits(),
                    "measures": measures.iter().map(|m| m.to_string()).collect::<Vec<_>>(),
                },
                "grid": curve.grid,
                "series": series,
            })))
        }
    }
}

/// `esd,<threshold>,<tol>` or `no_esd`; a `,non_monotone` suffix flags a
/// revival seen by the coarse scan.
pub fn esd_line(result: &EsdResult) -> String {
    match result.verdict {
        EsdVerdict::NoEsd => "no_esd".to_string(),
        EsdVerdict::Esd { threshold, tolerance } => {
            let decimals = (-tolerance.log10()).ceil().max(0.0) as usize;
            let mut line = format!("esd,{threshold:.decimals$},{tolerance:e}");
            if result.non_monotone {
                line.push_str(",non_monotone");
            }
            line
        }
    }
}

pub fn cmd_esd(
    spec: &ClusterSpec,
    mask: &RepresentationMask,
    measure: &Measure,
    tol: f64,
    format: Format,
) -> CliResult<String> {
    let result = esd_threshold(spec, mask, measure, tol)?;
    match format {
        Format::Csv => Ok(esd_line(&result) + "\n"),
        Format::Json => {
            let verdict = match result.verdict {
                EsdVerdict::NoEsd => json!({"kind": "no_esd"}),
                EsdVerdict::Esd { threshold, tolerance } => json!({
                    "kind": "esd",
                    "threshold": threshold,
                    "tolerance": tolerance,
                    "non_monotone": result.non_monotone,
                }),
            };
            Ok(to_json_string(&json!({
                "config": {
                    "command": "esd",
                    "spec": spec_json(spec),
                    "mask": mask.qubits(),
                    "measure": measure.to_string(),
                    "tol": tol,
                },
                "verdict": verdict,
            })))
        }
    }
}

/// SHA-256 over the representative signature rendered as curve CSV.
pub fn signature_digest(class: &RepClass) -> String {
    hex::encode(Sha256::digest(curve_csv(&class.signature).as_bytes()))
}

pub fn cmd_classify(spec: &ClusterSpec, grid: &[f64], tol: f64, format: Format) -> CliResult<String> {
    if !(tol > 0.0) {
        return Err(usage(format!("tolerance {tol} must be positive")));
    }
    let classes = classify_representations(spec, grid, tol)?;
    match format {
        Format::Csv => {
            let mut out = String::from("class,mask,relabeling\n");
            for (k, c) in classes.iter().enumerate() {
                for (mask, perm) in c.masks.iter().zip(&c.relabelings) {
                    let perm: Vec<String> = perm.iter().map(usize::to_string).collect();
                    out.push_str(&format!("{k},\"{}\",\"{}\"\n", mask.to_arg(), perm.join(",")));
                }
            }
            Ok(out)
        }
        Format::Json => {
            let classes: Vec<Value> = classes
                .iter()
                .enumerate()
                .map(|(k, c)| {
                    json!({
                        "index": k,
                        "representative": c.representative().qubits(),
                        "masks": c.masks.iter().map(|m| m.qubits().to_vec()).collect::<Vec<_>>(),
                        "relabelings": c.relabelings,
                        "measures": c.signature.measures().map(|m| m.to_string()).collect::<Vec<_>>(),
                        "signature_digest": signature_digest(c),
                    })
                })
                .collect();
            Ok(to_json_string(&json!({
                "config": {"command": "classify", "spec": spec_json(spec), "tol": tol},
                "grid": grid,
                "classes": classes,
            })))
        }
    }
}

pub fn ranking_json(spec: &ClusterSpec, report: &RankingReport) -> Value {
    let rankings: Vec<Value> = report
        .rankings
        .iter()
        .map(|r| {
            json!({
                "measure": r.measure.to_string(),
                "entries": r.entries.iter().map(|e| json!({
                    "mask": e.mask.qubits(),
                    "value": e.value,
                    "tied_with_previous": e.tied_with_previous,
                })).collect::<Vec<_>>(),
            })
        })
        .collect();
    let summary: Vec<Value> = report
        .summary
        .iter()
        .map(|s| json!({"mask": s.mask.qubits(), "first_places": s.first_places}))
        .collect();
    let dominance: Vec<Value> = report
        .dominance
        .iter()
        .filter(|d| !d.intervals.is_empty())
        .map(|d| {
            json!({
                "measure": d.measure.to_string(),
                "mask": d.mask.qubits(),
                "intervals": d.intervals.iter().map(|&(a, b)| vec![a, b]).collect::<Vec<_>>(),
            })
        })
        .collect();
    json!({
        "config": {"command": "rank", "spec": spec_json(spec), "p": report.p},
        "rankings": rankings,
        "summary": summary,
        "dominance": dominance,
    })
}

pub fn cmd_rank(spec: &ClusterSpec, masks: &[RepresentationMask], p: f64, format: Format) -> CliResult<String> {
    let report = robustness_ranking(spec, masks, p)?;
    match format {
        Format::Json => Ok(to_json_string(&ranking_json(spec, &report))),
        Format::Csv => {
            let mut out = String::from("measure,rank,mask,value,tied\n");
            for r in &report.rankings {
                for (k, e) in r.entries.iter().enumerate() {
                    out.push_str(&format!(
                        "{},{},\"{}\",{},{}\n",
                        r.measure,
                        k + 1,
                        e.mask.to_arg(),
                        format_number(e.value),
                        e.tied_with_previous
                    ));
                }
            }
            Ok(out)
        }
    }
}

// ---- figures ----

/// One labelled column of a figure file.
struct Column {
    label: String,
    values: Vec<f64>,
}

fn figure_columns(
    n: usize,
    panels: &[(&str, &[usize], &[&str])],
    grid: &[f64],
) -> CliResult<Vec<Column>> {
    let spec = ClusterSpec::linear_chain(n)?;
    let mut cols = Vec::new();
    for &(label, mask, measures) in panels {
        let mask = RepresentationMask::new(mask.iter().copied())?;
        let measures = measures
            .iter()
            .map(|m| m.parse::<Measure>())
            .collect::<Result<Vec<_>, _>>()?;
        let curve = decay_curve(&spec, &mask, &measures, grid)?;
        for s in curve.series {
            cols.push(Column {
                label: format!("{}_{}", s.measure, label),
                values: s.values,
            });
        }
    }
    Ok(cols)
}

fn figure_csv(grid: &[f64], cols: &[Column]) -> String {
    let mut out = String::from("p");
    for c in cols {
        out.push(',');
        out.push_str(&c.label);
    }
    out.push('\n');
    for (k, &p) in grid.iter().enumerate() {
        out.push_str(&format_row(std::iter::once(p).chain(cols.iter().map(|c| c.values[k]))));
        out.push('\n');
    }
    out
}

const FOUR_QUBIT_MASKS: [(&str, &[usize]); 5] = [
    ("basic", &[]),
    ("h13", &[1, 3]),
    ("h1", &[1]),
    ("h123", &[1, 2, 3]),
    ("h23", &[2, 3]),
];

/// Figure files and their contents, in emission order.
pub fn figure_tables() -> CliResult<Vec<(&'static str, String)>> {
    let grid = canonical_grid();

    let fig1 = figure_columns(2, &[("basic", &[], &["N1"]), ("ghz", &[2], &["N1"])], &grid)?;
    // One column per distinct behavior: the GHZ measures coincide, the
    // single-end rotation has N2 = N3, and the basic state has N1 = N3.
    let fig2_left = figure_columns(
        3,
        &[
            ("ghz", &[1, 3], &["N1"]),
            ("h3", &[3], &["N1", "N2"]),
            ("basic", &[], &["N1", "N2"]),
        ],
        &grid,
    )?;
    let fig2_right = figure_columns(
        3,
        &[
            ("basic", &[], &["N3part"]),
            ("ghz", &[1, 3], &["N3part"]),
            ("h3", &[3], &["N3part"]),
        ],
        &grid,
    )?;
    let four = |measures: &'static [&'static str]| -> Vec<(&'static str, &'static [usize], &'static [&'static str])> {
        FOUR_QUBIT_MASKS.iter().map(|&(l, m)| (l, m, measures)).collect()
    };
    static SINGLE: [&str; 4] = ["N1", "N2", "N3", "N4"];
    static PAIRS: [&str; 6] = ["N12", "N13", "N14", "N23", "N24", "N34"];
    let fig3_left = figure_columns(4, &four(&SINGLE), &grid)?;
    let fig3_right = figure_columns(4, &four(&PAIRS), &grid)?;

    Ok(vec![
        ("fig1.csv", figure_csv(&grid, &fig1)),
        ("fig2_left.csv", figure_csv(&grid, &fig2_left)),
        ("fig2_right.csv", figure_csv(&grid, &fig2_right)),
        ("fig3_left.csv", figure_csv(&grid, &fig3_left)),
        ("fig3_right.csv", figure_csv(&grid, &fig3_right)),
    ])
}

pub fn cmd_figures(dir: &Path) -> CliResult<Vec<PathBuf>> {
    let tables = figure_tables()?;
    fs::create_dir_all(dir).map_err(|source| CliError::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    let mut written = Vec::new();
    for (name, body) in tables {
        let path = dir.join(name);
        write_file(&path, &body)?;
        written.push(path);
    }
    Ok(written)
}
