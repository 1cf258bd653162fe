//! Fisher linear classification functions.
//!
//! For class k with mean μ_k and prior π_k, and the pooled within-class
//! covariance Σ, the classification function is
//!
//! ```text
//! C_k(x) = c_kᵀx + c_k0,   c_k = Σ⁻¹μ_k,   c_k0 = −½ μ_kᵀΣ⁻¹μ_k + ln π_k
//! ```
//!
//! Σ⁻¹ is never formed; every product goes through a Cholesky solve.

use std::cmp::Ordering;
use std::path::Path;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Observations × features with one class label per observation.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledMatrix {
    features: Vec<Vec<f64>>,
    labels: Vec<String>,
    feature_names: Vec<String>,
    class_names: Vec<String>,
}

impl LabeledMatrix {
    /// Class names are kept in order of first appearance.
    pub fn new(features: Vec<Vec<f64>>, labels: Vec<String>, feature_names: Vec<String>) -> Result<Self> {
        let invalid = |m: String| Err(Error::LabeledData(m));
        if features.len() != labels.len() {
            return invalid(format!(
                "{} observations but {} labels",
                features.len(),
                labels.len()
            ));
        }
        let p = feature_names.len();
        if p == 0 {
            return invalid("no features".into());
        }
        if let Some(row) = features.iter().find(|r| r.len() != p) {
            return invalid(format!("observation has {} values, expected {p}", row.len()));
        }
        if features.iter().flatten().any(|v| !v.is_finite()) {
            return invalid("non-finite feature value".into());
        }
        let mut class_names: Vec<String> = Vec::new();
        for l in &labels {
            if !class_names.contains(l) {
                class_names.push(l.clone());
            }
        }
        if class_names.len() < 2 {
            return invalid("need at least 2 classes".into());
        }
        for c in &class_names {
            let count = labels.iter().filter(|l| *l == c).count();
            if count < 2 {
                return invalid(format!("class {c:?} has {count} observation(s), need 2"));
            }
        }
        if features.len() <= class_names.len() + p {
            return invalid(format!(
                "{} observations is too few for {} classes and {p} features",
                features.len(),
                class_names.len()
            ));
        }
        Ok(Self {
            features,
            labels,
            feature_names,
            class_names,
        })
    }

    pub fn feature_names(&self) -> &[String] {
        &self.feature_names
    }

    pub fn class_names(&self) -> &[String] {
        &self.class_names
    }

    /// Feature rows and their labels.
    pub fn observations(&self) -> (&[Vec<f64>], &[String]) {
        (&self.features, &self.labels)
    }

    fn rows_of<'a>(&'a self, class: &'a str) -> impl Iterator<Item = &'a Vec<f64>> + 'a {
        self.features
            .iter()
            .zip(&self.labels)
            .filter(move |(_, l)| *l == class)
            .map(|(x, _)| x)
    }

    fn class_mean(&self, class: &str) -> Vec<f64> {
        let p = self.feature_names.len();
        let mut sum = vec![0.0; p];
        let mut count = 0usize;
        for row in self.rows_of(class) {
            for (s, v) in sum.iter_mut().zip(row) {
                *s += v;
            }
            count += 1;
        }
        sum.iter().map(|s| s / count as f64).collect()
    }
}

/// Pooled within-class covariance: total within-class scatter over `n − K`.
pub fn pooled_within_covariance(data: &LabeledMatrix) -> Result<Vec<Vec<f64>>> {
    let cov = scatter(data);
    // Surface singularity here too so callers get the offending feature.
    cholesky(&cov, &data.feature_names)?;
    Ok(cov)
}

fn scatter(data: &LabeledMatrix) -> Vec<Vec<f64>> {
    let p = data.feature_names.len();
    let mut s = vec![vec![0.0; p]; p];
    for class in &data.class_names {
        let mu = data.class_mean(class);
        for row in data.rows_of(class) {
            let d: Vec<f64> = row.iter().zip(&mu).map(|(x, m)| x - m).collect();
            for i in 0..p {
                for j in 0..p {
                    s[i][j] += d[i] * d[j];
                }
            }
        }
    }
    let df = (data.features.len() - data.class_names.len()) as f64;
    for row in &mut s {
        for v in row.iter_mut() {
            *v /= df;
        }
    }
    s
}

/// Lower-triangular Cholesky factor. A pivot that is not clearly positive
/// relative to the largest diagonal entry is reported as singular.
fn cholesky(a: &[Vec<f64>], names: &[String]) -> Result<Vec<Vec<f64>>> {
    let p = a.len();
    let scale = a.iter().enumerate().map(|(i, r)| r[i].abs()).fold(0.0, f64::max);
    let tol = scale * 1e-12;
    let mut l = vec![vec![0.0; p]; p];
    for j in 0..p {
        let mut d = a[j][j];
        for k in 0..j {
            d -= l[j][k] * l[j][k];
        }
        // NaN pivots count as singular
        #[allow(clippy::neg_cmp_op_on_partial_ord)]
        if !(d > tol) {
            return Err(Error::SingularCovariance {
                feature: names[j].clone(),
            });
        }
        let d = d.sqrt();
        l[j][j] = d;
        for i in j + 1..p {
            let mut s = a[i][j];
            for k in 0..j {
                s -= l[i][k] * l[j][k];
            }
            l[i][j] = s / d;
        }
    }
    Ok(l)
}

fn cholesky_solve(l: &[Vec<f64>], b: &[f64]) -> Vec<f64> {
    let p = l.len();
    let mut y = vec![0.0; p];
    for i in 0..p {
        let s: f64 = (0..i).map(|k| l[i][k] * y[k]).sum();
        y[i] = (b[i] - s) / l[i][i];
    }
    let mut x = vec![0.0; p];
    for i in (0..p).rev() {
        let s: f64 = (i + 1..p).map(|k| l[k][i] * x[k]).sum();
        x[i] = (y[i] - s) / l[i][i];
    }
    x
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// One class's linear classification function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassFunction {
    pub name: String,
    pub coefficients: Vec<f64>,
    pub constant: f64,
    /// Present for fitted models.
    pub mean: Option<Vec<f64>>,
    pub prior: Option<f64>,
}

impl ClassFunction {
    pub fn score(&self, x: &[f64]) -> f64 {
        dot(&self.coefficients, x) + self.constant
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassificationModel {
    feature_names: Vec<String>,
    classes: Vec<ClassFunction>,
    pooled_covariance: Option<Vec<Vec<f64>>>,
}

#[derive(Debug, Clone, Default)]
pub struct FitOptions {
    /// Class → prior probability. Equal priors when absent.
    pub priors: Option<IndexMap<String, f64>>,
    /// Add ε·I with ε = 1e-8 × mean diagonal before factorizing.
    pub ridge: bool,
}

#[derive(Debug, Deserialize)]
struct CoefficientEntry {
    coefficients: IndexMap<String, f64>,
    constant: f64,
}

impl ClassificationModel {
    pub fn feature_names(&self) -> &[String] {
        &self.feature_names
    }

    pub fn classes(&self) -> &[ClassFunction] {
        &self.classes
    }

    pub fn class(&self, name: &str) -> Result<&ClassFunction> {
        self.classes
            .iter()
            .find(|c| c.name == name)
            .ok_or_else(|| Error::UnknownClass(name.to_string()))
    }

    pub fn pooled_covariance(&self) -> Option<&[Vec<f64>]> {
        self.pooled_covariance.as_deref()
    }

    /// Feature → coefficient map for one class.
    pub fn coefficients_of(&self, class: &str) -> Result<IndexMap<String, f64>> {
        let c = self.class(class)?;
        Ok(self
            .feature_names
            .iter()
            .cloned()
            .zip(c.coefficients.iter().copied())
            .collect())
    }

    /// Builds a model from externally supplied coefficients: a JSON object
    /// mapping class → `{"coefficients": {feature: real}, "constant": real}`.
    pub fn from_coefficients_json(text: &str) -> Result<Self> {
        let parsed: IndexMap<String, CoefficientEntry> =
            serde_json::from_str(text).map_err(|e| Error::Config(format!("coefficient file: {e}")))?;
        let Some(first) = parsed.values().next() else {
            return Err(Error::Config("coefficient file has no classes".into()));
        };
        let feature_names: Vec<String> = first.coefficients.keys().cloned().collect();
        if feature_names.is_empty() {
            return Err(Error::Config("coefficient file has no features".into()));
        }
        let mut classes = Vec::new();
        for (name, entry) in &parsed {
            if entry.coefficients.len() != feature_names.len() {
                return Err(Error::Config(format!(
                    "class {name:?} has a different feature set"
                )));
            }
            let coefficients = feature_names
                .iter()
                .map(|f| {
                    entry.coefficients.get(f).copied().ok_or_else(|| {
                        Error::Config(format!("class {name:?} lacks feature {f:?}"))
                    })
                })
                .collect::<Result<Vec<f64>>>()?;
            if let Some(bad) = coefficients.iter().position(|c| !c.is_finite()) {
                return Err(Error::NonFiniteCoefficient(feature_names[bad].clone()));
            }
            if !entry.constant.is_finite() {
                return Err(Error::NonFiniteCoefficient(format!("{name} constant")));
            }
            classes.push(ClassFunction {
                name: name.clone(),
                coefficients,
                constant: entry.constant,
                mean: None,
                prior: None,
            });
        }
        Ok(Self {
            feature_names,
            classes,
            pooled_covariance: None,
        })
    }

    pub fn load_coefficients(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_coefficients_json(&text)
    }

    /// Per-class scores C_k(x), in model class order.
    pub fn scores(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.feature_names.len() {
            return Err(Error::DimensionMismatch {
                expected: self.feature_names.len(),
                got: x.len(),
            });
        }
        Ok(self.classes.iter().map(|c| c.score(x)).collect())
    }
}

fn check_priors(data: &LabeledMatrix, priors: &IndexMap<String, f64>) -> Result<Vec<f64>> {
    if let Some(extra) = priors.keys().find(|k| !data.class_names.contains(k)) {
        return Err(Error::Priors(format!("unknown class {extra:?}")));
    }
    let values = data
        .class_names
        .iter()
        .map(|c| {
            priors
                .get(c)
                .copied()
                .ok_or_else(|| Error::Priors(format!("no prior for class {c:?}")))
        })
        .collect::<Result<Vec<f64>>>()?;
    if values.iter().any(|&p| !(p > 0.0 && p <= 1.0)) {
        return Err(Error::Priors("priors must lie in (0, 1]".into()));
    }
    let total: f64 = values.iter().sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::Priors(format!("priors sum to {total}, not 1")));
    }
    Ok(values)
}

pub fn fit_classification_functions(data: &LabeledMatrix, opts: &FitOptions) -> Result<ClassificationModel> {
    let k = data.class_names.len();
    let priors = match &opts.priors {
        Some(p) => check_priors(data, p)?,
        None => vec![1.0 / k as f64; k],
    };
    let mut cov = scatter(data);
    if opts.ridge {
        let p = cov.len();
        let eps = 1e-8 * (0..p).map(|i| cov[i][i]).sum::<f64>() / p as f64;
        for (i, row) in cov.iter_mut().enumerate() {
            row[i] += eps;
        }
    }
    let l = cholesky(&cov, &data.feature_names)?;
    let classes = data
        .class_names
        .iter()
        .zip(&priors)
        .map(|(name, &prior)| {
            let mu = data.class_mean(name);
            let coefficients = cholesky_solve(&l, &mu);
            let constant = -0.5 * dot(&mu, &coefficients) + prior.ln();
            ClassFunction {
                name: name.clone(),
                coefficients,
                constant,
                mean: Some(mu),
                prior: Some(prior),
            }
        })
        .collect();
    Ok(ClassificationModel {
        feature_names: data.feature_names.clone(),
        classes,
        pooled_covariance: Some(cov),
    })
}

/// Class with the highest classification score. Ties go to the
/// lexicographically smallest class name.
pub fn classify<'m>(model: &'m ClassificationModel, x: &[f64]) -> Result<&'m str> {
    let scores = model.scores(x)?;
    let best = model
        .classes
        .iter()
        .zip(&scores)
        .max_by(|(a, sa), (b, sb)| sa.total_cmp(sb).then_with(|| b.name.cmp(&a.name)))
        .map(|(c, _)| c.name.as_str());
    best.ok_or_else(|| Error::Config("model has no classes".into()))
}

/// Names sorted by descending coefficient, ties by name.
pub fn rank_by_coefficient(coefficients: &IndexMap<String, f64>) -> Result<Vec<String>> {
    if coefficients.is_empty() {
        return Err(Error::Empty("coefficient map".into()));
    }
    if let Some((name, _)) = coefficients.iter().find(|(_, v)| !v.is_finite()) {
        return Err(Error::NonFiniteCoefficient(name.clone()));
    }
    let mut entries: Vec<(&String, f64)> = coefficients.iter().map(|(k, v)| (k, *v)).collect();
    entries.sort_by(|(na, a), (nb, b)| match b.total_cmp(a) {
        Ordering::Equal => na.cmp(nb),
        o => o,
    });
    Ok(entries.into_iter().map(|(n, _)| n.clone()).collect())
}
