//! End-to-end run: survey file in, preference model out.
//!
//! Stages run strictly in order and each consumes only the outputs of the
//! stages before it:
//!
//! | step | stage                                   |
//! |------|-----------------------------------------|
//! | b    | load and mean-impute the survey         |
//! | c    | aggregate simple attributes             |
//! | d    | group-level scores                      |
//! | e    | discriminant ranking of groups          |
//! | f    | within-group correlation matrices       |
//! | g    | positive-correlation edge selection     |
//! | h    | maximum spanning forest per group       |
//! | i    | model assembly and total cost           |

mod model;
mod render;

use std::fmt;
use std::path::PathBuf;

use indexmap::IndexMap;
use log::warn;
use thiserror::Error;

use crate::discriminant::{
    fit_classification_functions, rank_by_coefficient, ClassificationModel, FitOptions, LabeledMatrix,
};
use crate::error::{Error, ErrorKind};
use crate::graph::kruskal_max_forest;
use crate::stats::correlation_matrix;
use crate::survey::{self, AttributeSchema, CsvOptions, SurveyTable, ValueBounds};

pub use model::{
    attribute_order, compute_total_cost, select_positive_edges, GroupModel, PreferenceModel, RemovedEdge,
};
pub use render::{model_to_dot, model_to_json, model_to_report};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Step {
    Load,
    Aggregate,
    Group,
    Discriminant,
    Correlate,
    Select,
    SpanningForest,
    Assemble,
}

impl Step {
    pub fn letter(self) -> char {
        match self {
            Step::Load => 'b',
            Step::Aggregate => 'c',
            Step::Group => 'd',
            Step::Discriminant => 'e',
            Step::Correlate => 'f',
            Step::Select => 'g',
            Step::SpanningForest => 'h',
            Step::Assemble => 'i',
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            Step::Load => "load and impute survey",
            Step::Aggregate => "aggregate composite attributes",
            Step::Group => "group scores",
            Step::Discriminant => "discriminant ranking",
            Step::Correlate => "correlation",
            Step::Select => "feature selection",
            Step::SpanningForest => "maximum spanning forest",
            Step::Assemble => "model assembly",
        }
    }
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "step {} ({})", self.letter(), self.description())
    }
}

#[derive(Debug, Error)]
#[error("{step}: {source}")]
pub struct PipelineError {
    pub step: Step,
    #[source]
    pub source: Error,
}

impl PipelineError {
    pub fn kind(&self) -> ErrorKind {
        self.source.kind()
    }
}

trait AtStep<T> {
    fn at(self, step: Step) -> Result<T, PipelineError>;
}

impl<T> AtStep<T> for Result<T, Error> {
    fn at(self, step: Step) -> Result<T, PipelineError> {
        self.map_err(|source| PipelineError { step, source })
    }
}

/// How group preferences are obtained.
#[derive(Debug, Clone, PartialEq)]
pub enum DiscriminantMode {
    /// Use published classification-function coefficients.
    Coefficients {
        path: PathBuf,
        /// Class whose coefficients rank the groups; may be omitted when the
        /// file holds a single class.
        class: Option<String>,
    },
    /// Fit classification functions to a labeled survey.
    Fit {
        labels_column: String,
        /// Class whose coefficients rank the groups and whose respondents
        /// feed the correlations. Defaults to the first label in the file.
        class: Option<String>,
        priors: Option<IndexMap<String, f64>>,
        ridge: bool,
    },
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct OutputPaths {
    pub json: Option<PathBuf>,
    pub dot: Option<PathBuf>,
    pub report: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig {
    pub data: PathBuf,
    pub schema: PathBuf,
    pub mode: DiscriminantMode,
    pub bounds: ValueBounds,
    pub outputs: OutputPaths,
}

/// Intermediate tables, exposed for inspection and tests.
#[derive(Debug, Clone)]
pub struct Stages {
    pub imputed: SurveyTable,
    pub composites: SurveyTable,
    pub group_scores: SurveyTable,
    pub classifier: ClassificationModel,
    pub model: PreferenceModel,
}

pub fn run_pipeline(cfg: &PipelineConfig) -> Result<PreferenceModel, PipelineError> {
    run_stages(cfg).map(|s| s.model)
}

pub fn run_stages(cfg: &PipelineConfig) -> Result<Stages, PipelineError> {
    // b
    let schema = AttributeSchema::load(&cfg.schema).at(Step::Load)?;
    let label_column = match &cfg.mode {
        DiscriminantMode::Fit { labels_column, .. } => Some(labels_column.clone()),
        DiscriminantMode::Coefficients { .. } => None,
    };
    let loaded = survey::read_csv(
        &cfg.data,
        &CsvOptions {
            bounds: cfg.bounds,
            label_column,
            allow_real: false,
        },
    )
    .at(Step::Load)?;
    let imputed = survey::impute_mean(&loaded.table).at(Step::Load)?;

    // c, d
    let composites = survey::aggregate_composites(&imputed, &schema).at(Step::Aggregate)?;
    let group_scores = survey::group_scores(&composites, &schema).at(Step::Group)?;

    // e
    let (classifier, population) =
        discriminant_step(cfg, &schema, &group_scores, loaded.labels.as_deref()).at(Step::Discriminant)?;
    let coefficients = classifier.coefficients_of(&population).at(Step::Discriminant)?;
    let order = rank_by_coefficient(&coefficients).at(Step::Discriminant)?;

    let population_rows = match &loaded.labels {
        Some(labels) => composites.filter_rows(|i| labels[i] == population),
        None => composites.clone(),
    };

    let mut groups = Vec::with_capacity(order.len());
    for name in &order {
        let members = &schema.groups()[name];
        // f
        let matrix = correlation_matrix(&population_rows, members).at(Step::Correlate)?;
        // g
        let (graph, removed_edges) = select_positive_edges(&matrix);
        for r in removed_edges.iter().filter(|r| r.r.is_none()) {
            warn!("group {name}: correlation {} -- {} undefined (constant column); pair dropped", r.u, r.v);
        }
        // h
        let forest = kruskal_max_forest(&graph);
        if forest.component_count > 1 {
            warn!(
                "group {name}: selected edges leave {} disconnected components",
                forest.component_count
            );
        }
        groups.push(GroupModel {
            name: name.clone(),
            label: schema.label(name).map(str::to_string),
            coefficient: coefficients[name],
            attribute_order: attribute_order(members, &forest),
            nodes: members.clone(),
            forest,
            removed_edges,
        });
    }

    // i
    let model = PreferenceModel::assemble(population, groups);
    Ok(Stages {
        imputed,
        composites,
        group_scores,
        classifier,
        model,
    })
}

fn discriminant_step(
    cfg: &PipelineConfig,
    schema: &AttributeSchema,
    group_scores: &SurveyTable,
    labels: Option<&[String]>,
) -> Result<(ClassificationModel, String), Error> {
    match &cfg.mode {
        DiscriminantMode::Coefficients { path, class } => {
            let model = ClassificationModel::load_coefficients(path)?;
            check_features(&model, schema)?;
            let class = match class {
                Some(c) => c.clone(),
                None if model.classes().len() == 1 => model.classes()[0].name.clone(),
                None => {
                    return Err(Error::Config(
                        "coefficient file has several classes; choose one".into(),
                    ))
                }
            };
            model.class(&class)?;
            Ok((model, class))
        }
        DiscriminantMode::Fit {
            class,
            priors,
            ridge,
            ..
        } => {
            let labels = labels.ok_or_else(|| Error::Config("labels column not loaded".into()))?;
            let features = (0..group_scores.n())
                .map(|r| {
                    (0..group_scores.attribute_names().len())
                        .map(|c| group_scores.get(r, c).unwrap_or(f64::NAN))
                        .collect()
                })
                .collect();
            let data = LabeledMatrix::new(
                features,
                labels.to_vec(),
                group_scores.attribute_names().to_vec(),
            )?;
            let model = fit_classification_functions(
                &data,
                &FitOptions {
                    priors: priors.clone(),
                    ridge: *ridge,
                },
            )?;
            let class = class.clone().unwrap_or_else(|| data.class_names()[0].clone());
            model.class(&class)?;
            Ok((model, class))
        }
    }
}

fn check_features(model: &ClassificationModel, schema: &AttributeSchema) -> Result<(), Error> {
    let groups = schema.groups();
    let features = model.feature_names();
    if features.len() != groups.len() || features.iter().any(|f| !groups.contains_key(f)) {
        return Err(Error::Config(format!(
            "coefficient features {features:?} do not match schema groups {:?}",
            groups.keys().collect::<Vec<_>>()
        )));
    }
    Ok(())
}

/// Writes every requested rendering of `model`.
pub fn write_outputs(outputs: &OutputPaths, model: &PreferenceModel) -> Result<(), Error> {
    let write = |path: &PathBuf, text: String| std::fs::write(path, text).map_err(|e| Error::io(path, e));
    if let Some(p) = &outputs.json {
        write(p, model_to_json(model))?;
    }
    if let Some(p) = &outputs.dot {
        write(p, model_to_dot(model))?;
    }
    if let Some(p) = &outputs.report {
        write(p, model_to_report(model))?;
    }
    Ok(())
}
