//! Command-line interface: the whole pipeline (`run`) plus one subcommand per
//! stage so each step can be run and inspected on its own.
//!
//! Exit status: 0 success, 2 input/validation error, 3 numerical error,
//! 4 I/O error.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use indexmap::IndexMap;
use log::info;
use thiserror::Error;

use crate::discriminant::{
    fit_classification_functions, rank_by_coefficient, ClassificationModel, FitOptions, LabeledMatrix,
};
use crate::error::{Error, ErrorKind};
use crate::graph::{forest_to_dot, kruskal_max_forest, Edge, WeightedGraph};
use crate::pipeline::{
    run_pipeline, select_positive_edges, write_outputs, DiscriminantMode, OutputPaths, PipelineConfig,
    PipelineError,
};
use crate::stats::correlation_matrix;
use crate::survey::{self, AttributeSchema, CsvOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;
pub const EXIT_IO: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "likert-mst", version, about = "Likert survey → maximum spanning tree preference model")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the full pipeline and write the preference model.
    Run(RunArgs),
    /// Replace missing cells with column means.
    Impute(ImputeArgs),
    /// Combine simple attributes into composites (or group scores).
    Aggregate(AggregateArgs),
    /// Pearson correlations between columns.
    Correlate(CorrelateArgs),
    /// Rank groups by classification-function coefficient.
    Rank(RankArgs),
    /// Maximum spanning forest of an edge list `u,v,w`.
    Mst(MstArgs),
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("mode").required(true).args(["coefficients", "labels_column"])))]
pub struct RunArgs {
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long)]
    pub schema: PathBuf,
    /// Classification-function coefficients (JSON).
    #[arg(long)]
    pub coefficients: Option<PathBuf>,
    /// Fit classification functions using this label column.
    #[arg(long)]
    pub labels_column: Option<String>,
    /// Class whose coefficients rank the groups.
    #[arg(long)]
    pub class: Option<String>,
    /// Class priors as `name=p,name=p` (fit mode).
    #[arg(long, requires = "labels_column")]
    pub priors: Option<String>,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub dot: Option<PathBuf>,
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// Regularize a singular pooled covariance (fit mode).
    #[arg(long)]
    pub ridge: bool,
    #[arg(long, default_value = "1,5")]
    pub bounds: String,
}

#[derive(Debug, Args)]
pub struct TableInput {
    #[arg(long)]
    pub data: PathBuf,
    /// Non-numeric label column carried through unchanged.
    #[arg(long)]
    pub labels_column: Option<String>,
    #[arg(long, default_value = "1,5")]
    pub bounds: String,
}

#[derive(Debug, Args)]
pub struct ImputeArgs {
    #[command(flatten)]
    pub input: TableInput,
    /// Output CSV (standard output if omitted).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct AggregateArgs {
    #[command(flatten)]
    pub input: TableInput,
    #[arg(long)]
    pub schema: PathBuf,
    /// Emit one column per group instead of per composite.
    #[arg(long)]
    pub group_scores: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CorrelateFormat {
    /// Full correlation matrix.
    Matrix,
    /// Positive pairs as an edge list `u,v,w`.
    Edges,
}

#[derive(Debug, Args)]
pub struct CorrelateArgs {
    #[command(flatten)]
    pub input: TableInput,
    /// Comma-separated column names.
    #[arg(long, conflicts_with = "group")]
    pub columns: Option<String>,
    #[arg(long, requires = "group")]
    pub schema: Option<PathBuf>,
    /// Use the member composites of this schema group as columns.
    #[arg(long, requires = "schema")]
    pub group: Option<String>,
    #[arg(long, value_enum, default_value_t = CorrelateFormat::Matrix)]
    pub format: CorrelateFormat,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("source").required(true).args(["coefficients", "data"])))]
pub struct RankArgs {
    #[arg(long)]
    pub coefficients: Option<PathBuf>,
    /// Group-score table to fit classification functions on.
    #[arg(long, requires = "labels_column")]
    pub data: Option<PathBuf>,
    #[arg(long)]
    pub labels_column: Option<String>,
    #[arg(long)]
    pub class: Option<String>,
    #[arg(long)]
    pub priors: Option<String>,
    #[arg(long)]
    pub ridge: bool,
    #[arg(long, default_value = "1,5")]
    pub bounds: String,
}

#[derive(Debug, Args)]
pub struct MstArgs {
    /// Edge list CSV with header `u,v,w`.
    #[arg(long)]
    pub edges: PathBuf,
    /// Comma-separated node list, so isolated nodes are kept.
    #[arg(long, conflicts_with = "group")]
    pub nodes: Option<String>,
    #[arg(long, requires = "group")]
    pub schema: Option<PathBuf>,
    /// Take the node list from this schema group.
    #[arg(long, requires = "schema")]
    pub group: Option<String>,
    /// Write the forest as JSON.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub dot: Option<PathBuf>,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Pipeline(#[from] PipelineError),
    #[error(transparent)]
    Stage(#[from] Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        let kind = match self {
            CliError::Pipeline(e) => e.kind(),
            CliError::Stage(e) => e.kind(),
        };
        match kind {
            ErrorKind::Input => EXIT_INPUT,
            ErrorKind::Numerical => EXIT_NUMERICAL,
            ErrorKind::Io => EXIT_IO,
        }
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// exit status. Data goes to `stdout`, diagnostics to standard error.
pub fn main_with_args<I, T>(args: I, stdout: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli, stdout) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

pub fn execute(cli: Cli, stdout: &mut dyn Write) -> Result<(), CliError> {
    match cli.command {
        Command::Run(a) => cmd_run(a, stdout),
        Command::Impute(a) => cmd_impute(a, stdout),
        Command::Aggregate(a) => cmd_aggregate(a, stdout),
        Command::Correlate(a) => cmd_correlate(a, stdout),
        Command::Rank(a) => cmd_rank(a, stdout),
        Command::Mst(a) => cmd_mst(a, stdout),
    }
}

fn parse_priors(s: &str) -> Result<IndexMap<String, f64>, Error> {
    s.split(',')
        .map(|item| {
            let (k, v) = item
                .split_once('=')
                .ok_or_else(|| Error::Priors(format!("expected name=p, got {item:?}")))?;
            let p = v
                .trim()
                .parse::<f64>()
                .map_err(|_| Error::Priors(format!("not a number: {v:?}")))?;
            Ok((k.trim().to_string(), p))
        })
        .collect()
}

fn split_list(s: &str) -> Vec<String> {
    s.split(',').map(|x| x.trim().to_string()).filter(|x| !x.is_empty()).collect()
}

fn write_err(e: io::Error) -> Error {
    Error::io("<stdout>", e)
}

/// Runs `f` against the file at `path`, or against `stdout` when no path is
/// given.
fn with_output(
    path: Option<&Path>,
    stdout: &mut dyn Write,
    f: impl FnOnce(&mut dyn Write) -> Result<(), Error>,
) -> Result<(), Error> {
    match path {
        Some(p) => {
            let file = File::create(p).map_err(|e| Error::io(p, e))?;
            let mut w = BufWriter::new(file);
            f(&mut w)?;
            w.flush().map_err(|e| Error::io(p, e))
        }
        None => f(stdout),
    }
}

fn cmd_run(a: RunArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let mode = match (a.coefficients, a.labels_column) {
        (Some(path), None) => DiscriminantMode::Coefficients { path, class: a.class },
        (None, Some(labels_column)) => DiscriminantMode::Fit {
            labels_column,
            class: a.class,
            priors: a.priors.as_deref().map(parse_priors).transpose()?,
            ridge: a.ridge,
        },
        _ => return Err(Error::Config("choose exactly one of --coefficients, --labels-column".into()).into()),
    };
    let cfg = PipelineConfig {
        data: a.data,
        schema: a.schema,
        mode,
        bounds: a.bounds.parse()?,
        outputs: OutputPaths {
            json: Some(a.out),
            dot: a.dot,
            report: a.report,
        },
    };
    let model = run_pipeline(&cfg)?;
    write_outputs(&cfg.outputs, &model)?;
    writeln!(
        stdout,
        "population={} group_order={} total_cost={:.6}",
        model.population,
        model.group_order().join(","),
        model.total_cost
    )
    .map_err(write_err)?;
    Ok(())
}

fn read_table(input: &TableInput, allow_real: bool) -> Result<survey::LoadedSurvey, Error> {
    survey::read_csv(
        &input.data,
        &CsvOptions {
            bounds: input.bounds.parse()?,
            label_column: input.labels_column.clone(),
            allow_real,
        },
    )
}

fn write_table(
    table: &survey::SurveyTable,
    input: &TableInput,
    labels: Option<&[String]>,
    out: Option<&Path>,
    stdout: &mut dyn Write,
) -> Result<(), Error> {
    let labels = input.labels_column.as_deref().zip(labels);
    with_output(out, stdout, |w| survey::write_csv(table, labels, w))
}

fn cmd_impute(a: ImputeArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let loaded = read_table(&a.input, false)?;
    let before = loaded.table.missing_count();
    let imputed = survey::impute_mean(&loaded.table)?;
    info!("imputed {before} missing cells");
    write_table(&imputed, &a.input, loaded.labels.as_deref(), a.out.as_deref(), stdout)?;
    Ok(())
}

fn cmd_aggregate(a: AggregateArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let schema = AttributeSchema::load(&a.schema)?;
    let loaded = read_table(&a.input, true)?;
    let composites = survey::aggregate_composites(&loaded.table, &schema)?;
    let table = if a.group_scores {
        survey::group_scores(&composites, &schema)?
    } else {
        composites
    };
    write_table(&table, &a.input, loaded.labels.as_deref(), a.out.as_deref(), stdout)?;
    Ok(())
}

fn group_members(schema: &Path, group: &str) -> Result<Vec<String>, Error> {
    let schema = AttributeSchema::load(schema)?;
    schema
        .groups()
        .get(group)
        .cloned()
        .ok_or_else(|| Error::Config(format!("schema has no group {group:?}")))
}

fn cmd_correlate(a: CorrelateArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let loaded = read_table(&a.input, true)?;
    let columns = match (&a.columns, &a.schema, &a.group) {
        (Some(c), _, _) => split_list(c),
        (None, Some(s), Some(g)) => group_members(s, g)?,
        _ => loaded.table.attribute_names().to_vec(),
    };
    let m = correlation_matrix(&loaded.table, &columns)?;
    with_output(a.out.as_deref(), stdout, |w| {
        let mut csv = csv::Writer::from_writer(w);
        let csv_err = |e: csv::Error| Error::io("<output>", e.into());
        match a.format {
            CorrelateFormat::Matrix => {
                let mut header = vec!["attribute".to_string()];
                header.extend(m.names().iter().cloned());
                csv.write_record(&header).map_err(csv_err)?;
                for (i, name) in m.names().iter().enumerate() {
                    let mut row = vec![name.clone()];
                    row.extend((0..m.len()).map(|j| match m.get(i, j) {
                        Some(r) => format!("{r:?}"),
                        None => "NA".to_string(),
                    }));
                    csv.write_record(&row).map_err(csv_err)?;
                }
            }
            CorrelateFormat::Edges => {
                let (graph, removed) = select_positive_edges(&m);
                for r in &removed {
                    info!("dropped {} -- {} (r = {:?})", r.u, r.v, r.r);
                }
                csv.write_record(["u", "v", "w"]).map_err(csv_err)?;
                for e in graph.edges() {
                    csv.write_record([e.u.clone(), e.v.clone(), format!("{:?}", e.w)])
                        .map_err(csv_err)?;
                }
            }
        }
        csv.flush().map_err(|e| Error::io("<output>", e))
    })?;
    Ok(())
}

fn cmd_rank(a: RankArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let (model, class) = if let Some(path) = &a.coefficients {
        let model = ClassificationModel::load_coefficients(path)?;
        let class = match &a.class {
            Some(c) => c.clone(),
            None if model.classes().len() == 1 => model.classes()[0].name.clone(),
            None => return Err(Error::Config("several classes in coefficient file; pass --class".into()).into()),
        };
        (model, class)
    } else {
        let input = TableInput {
            data: a.data.clone().unwrap_or_default(),
            labels_column: a.labels_column.clone(),
            bounds: a.bounds.clone(),
        };
        let loaded = read_table(&input, true)?;
        let t = &loaded.table;
        let features = (0..t.n())
            .map(|r| (0..t.attribute_names().len()).map(|c| t.get(r, c)).collect::<Option<Vec<f64>>>())
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::MissingValues(input.data.display().to_string()))?;
        let data = LabeledMatrix::new(features, loaded.labels.unwrap_or_default(), t.attribute_names().to_vec())?;
        let opts = FitOptions {
            priors: a.priors.as_deref().map(parse_priors).transpose()?,
            ridge: a.ridge,
        };
        let model = fit_classification_functions(&data, &opts)?;
        let class = a.class.clone().unwrap_or_else(|| data.class_names()[0].clone());
        (model, class)
    };
    let order = rank_by_coefficient(&model.coefficients_of(&class)?)?;
    writeln!(stdout, "{}", order.join(" ")).map_err(write_err)?;
    Ok(())
}

fn read_edges(path: &Path) -> Result<Vec<Edge>, Error> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(file);
    let header = rdr
        .headers()
        .map_err(|e| Error::Parse {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?
        .clone();
    if header.iter().collect::<Vec<_>>() != ["u", "v", "w"] {
        return Err(Error::Parse {
            path: path.to_path_buf(),
            message: "edge list header must be `u,v,w`".into(),
        });
    }
    rdr.deserialize()
        .map(|r| {
            r.map_err(|e| Error::Parse {
                path: path.to_path_buf(),
                message: e.to_string(),
            })
        })
        .collect()
}

fn cmd_mst(a: MstArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let edges = read_edges(&a.edges)?;
    let nodes = match (&a.nodes, &a.schema, &a.group) {
        (Some(n), _, _) => split_list(n),
        (None, Some(s), Some(g)) => group_members(s, g)?,
        _ => Vec::new(),
    };
    let graph = WeightedGraph::from_edges(nodes, edges)?;
    let forest = kruskal_max_forest(&graph);
    for e in &forest.edges {
        writeln!(stdout, "{} -- {} {:.6}", e.u, e.v, e.w).map_err(write_err)?;
    }
    writeln!(
        stdout,
        "total {:.6} components {}",
        forest.total_weight, forest.component_count
    )
    .map_err(write_err)?;
    if let Some(p) = &a.out {
        let mut text = serde_json::to_string_pretty(&forest).map_err(|e| Error::Config(e.to_string()))?;
        text.push('\n');
        std::fs::write(p, text).map_err(|e| Error::io(p, e))?;
    }
    if let Some(p) = &a.dot {
        let name = a.group.as_deref().unwrap_or("forest");
        std::fs::write(p, forest_to_dot(name, &graph, &forest)).map_err(|e| Error::io(p, e))?;
    }
    Ok(())
}
