//! Survey tables: loading, mean imputation, composite aggregation and
//! group-level scores.
//!
//! A [`SurveyTable`] is a respondents × attributes matrix of Likert scores
//! where any cell may be missing. Raw files hold integers on a bounded scale;
//! once imputed or aggregated the cells are reals.

use std::collections::{HashMap, HashSet};
use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;
use std::str::FromStr;

use indexmap::IndexMap;
use serde::Deserialize;

use crate::error::{Error, Result};

/// Name of the mandatory first header column.
pub const RESPONDENT_ID: &str = "respondent_id";

/// Inclusive bounds for raw survey values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValueBounds {
    pub lo: f64,
    pub hi: f64,
}

impl ValueBounds {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite()) || lo > hi {
            return Err(Error::Bounds(format!("[{lo}, {hi}]")));
        }
        Ok(Self { lo, hi })
    }

    pub fn contains(&self, value: f64) -> bool {
        value >= self.lo && value <= self.hi
    }
}

impl Default for ValueBounds {
    /// Five-point satisfaction scale.
    fn default() -> Self {
        Self { lo: 1.0, hi: 5.0 }
    }
}

impl FromStr for ValueBounds {
    type Err = Error;

    /// Parses `lo,hi`.
    fn from_str(s: &str) -> Result<Self> {
        let (lo, hi) = s
            .split_once(',')
            .ok_or_else(|| Error::Bounds(format!("expected `lo,hi`, got {s:?}")))?;
        let parse = |t: &str| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| Error::Bounds(format!("not a number: {t:?}")))
        };
        Self::new(parse(lo)?, parse(hi)?)
    }
}

/// Respondents × attributes score matrix with a missing-value mask.
#[derive(Debug, Clone, PartialEq)]
pub struct SurveyTable {
    respondent_ids: Vec<String>,
    attribute_names: Vec<String>,
    // row-major, `None` = missing
    cells: Vec<Vec<Option<f64>>>,
}

impl SurveyTable {
    pub fn new(
        respondent_ids: Vec<String>,
        attribute_names: Vec<String>,
        cells: Vec<Vec<Option<f64>>>,
    ) -> Result<Self> {
        let mut seen = HashSet::new();
        for id in &respondent_ids {
            if id.is_empty() {
                return Err(Error::Empty("respondent id".into()));
            }
            if !seen.insert(id.as_str()) {
                return Err(Error::DuplicateRespondent(id.clone()));
            }
        }
        let mut seen = HashSet::new();
        for name in &attribute_names {
            if !seen.insert(name.as_str()) {
                return Err(Error::DuplicateAttribute(name.clone()));
            }
        }
        if cells.len() != respondent_ids.len() {
            return Err(Error::LengthMismatch {
                left: respondent_ids.len(),
                right: cells.len(),
            });
        }
        for row in &cells {
            if row.len() != attribute_names.len() {
                return Err(Error::LengthMismatch {
                    left: attribute_names.len(),
                    right: row.len(),
                });
            }
        }
        Ok(Self {
            respondent_ids,
            attribute_names,
            cells,
        })
    }

    /// Builds a table with no missing cells.
    pub fn from_complete(
        respondent_ids: Vec<String>,
        attribute_names: Vec<String>,
        rows: Vec<Vec<f64>>,
    ) -> Result<Self> {
        let cells = rows
            .into_iter()
            .map(|r| r.into_iter().map(Some).collect())
            .collect();
        Self::new(respondent_ids, attribute_names, cells)
    }

    pub fn respondent_ids(&self) -> &[String] {
        &self.respondent_ids
    }

    pub fn attribute_names(&self) -> &[String] {
        &self.attribute_names
    }

    /// Number of respondents.
    pub fn n(&self) -> usize {
        self.respondent_ids.len()
    }

    pub fn cells(&self) -> &[Vec<Option<f64>>] {
        &self.cells
    }

    pub fn get(&self, row: usize, col: usize) -> Option<f64> {
        self.cells[row][col]
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.attribute_names.iter().position(|a| a == name)
    }

    pub fn missing_count(&self) -> usize {
        self.cells.iter().flatten().filter(|c| c.is_none()).count()
    }

    /// Values of a fully observed column.
    pub fn column(&self, name: &str) -> Result<Vec<f64>> {
        let idx = self
            .column_index(name)
            .ok_or_else(|| Error::UnknownColumn(name.to_string()))?;
        self.cells
            .iter()
            .map(|row| row[idx].ok_or_else(|| Error::MissingValues(name.to_string())))
            .collect()
    }

    /// Keeps only the rows whose index satisfies `keep`.
    pub fn filter_rows(&self, mut keep: impl FnMut(usize) -> bool) -> SurveyTable {
        let (ids, cells) = self
            .respondent_ids
            .iter()
            .zip(&self.cells)
            .enumerate()
            .filter(|(i, _)| keep(*i))
            .map(|(_, (id, row))| (id.clone(), row.clone()))
            .unzip();
        SurveyTable {
            respondent_ids: ids,
            attribute_names: self.attribute_names.clone(),
            cells,
        }
    }

    fn require_complete(&self) -> Result<()> {
        for (c, name) in self.attribute_names.iter().enumerate() {
            if self.cells.iter().any(|row| row[c].is_none()) {
                return Err(Error::MissingValues(name.clone()));
            }
        }
        Ok(())
    }
}

/// Options for reading a survey CSV.
#[derive(Debug, Clone, Default)]
pub struct CsvOptions {
    pub bounds: ValueBounds,
    /// Header name of a non-numeric class-label column, if present.
    pub label_column: Option<String>,
    /// Accept real-valued cells (intermediate stage output) instead of
    /// integers only.
    pub allow_real: bool,
}

/// A parsed survey file.
#[derive(Debug, Clone, PartialEq)]
pub struct LoadedSurvey {
    pub table: SurveyTable,
    /// Per-row label when a label column was requested.
    pub labels: Option<Vec<String>>,
}

/// Loads a raw survey file: integer cells within `bounds`, empty = missing.
pub fn load_csv(path: impl AsRef<Path>, bounds: ValueBounds) -> Result<SurveyTable> {
    let opts = CsvOptions {
        bounds,
        ..CsvOptions::default()
    };
    Ok(read_csv(path, &opts)?.table)
}

pub fn read_csv(path: impl AsRef<Path>, opts: &CsvOptions) -> Result<LoadedSurvey> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    parse_csv(file, path, opts)
}

pub fn parse_csv<R: Read>(reader: R, source: &Path, opts: &CsvOptions) -> Result<LoadedSurvey> {
    let parse_err = |message: String| Error::Parse {
        path: source.to_path_buf(),
        message,
    };
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(false)
        .from_reader(reader);
    let mut records = rdr.records();

    let header = match records.next() {
        None => return Err(Error::Empty(source.display().to_string())),
        Some(r) => r.map_err(|e| parse_err(e.to_string()))?,
    };
    let header: Vec<String> = header.iter().map(|h| h.trim().to_string()).collect();
    if header.first().map(String::as_str) != Some(RESPONDENT_ID) {
        return Err(parse_err(format!(
            "first header column must be `{RESPONDENT_ID}`"
        )));
    }
    let label_idx = match &opts.label_column {
        Some(name) => Some(
            header
                .iter()
                .position(|h| h == name)
                .filter(|&i| i > 0)
                .ok_or_else(|| Error::UnknownColumn(name.clone()))?,
        ),
        None => None,
    };
    let attr_cols: Vec<usize> = (1..header.len()).filter(|&i| Some(i) != label_idx).collect();
    let attribute_names: Vec<String> = attr_cols.iter().map(|&i| header[i].clone()).collect();
    let mut seen = HashSet::new();
    for name in &attribute_names {
        if !seen.insert(name.as_str()) {
            return Err(Error::DuplicateAttribute(name.clone()));
        }
    }

    let mut ids = Vec::new();
    let mut labels = Vec::new();
    let mut cells = Vec::new();
    let mut seen_ids = HashSet::new();
    for (i, record) in records.enumerate() {
        let record = record.map_err(|e| parse_err(e.to_string()))?;
        let row = i + 1;
        let id = record[0].trim().to_string();
        if id.is_empty() {
            return Err(parse_err(format!("row {row}: empty respondent id")));
        }
        if !seen_ids.insert(id.clone()) {
            return Err(Error::DuplicateRespondent(id));
        }
        if let Some(li) = label_idx {
            let label = record[li].trim();
            if label.is_empty() {
                return Err(Error::InvalidCell {
                    row,
                    respondent: id,
                    column: header[li].clone(),
                    message: "empty label".into(),
                });
            }
            labels.push(label.to_string());
        }
        let mut values = Vec::with_capacity(attr_cols.len());
        for &c in &attr_cols {
            let raw = record[c].trim();
            if raw.is_empty() {
                values.push(None);
                continue;
            }
            let value = if opts.allow_real {
                raw.parse::<f64>().ok().filter(|v| v.is_finite())
            } else {
                raw.parse::<i64>().ok().map(|v| v as f64)
            };
            let value = value.ok_or_else(|| Error::InvalidCell {
                row,
                respondent: id.clone(),
                column: header[c].clone(),
                message: format!(
                    "{raw:?} is not {}",
                    if opts.allow_real { "a number" } else { "an integer" }
                ),
            })?;
            if !opts.bounds.contains(value) {
                return Err(Error::OutOfRange {
                    row,
                    respondent: id.clone(),
                    column: header[c].clone(),
                    value,
                    lo: opts.bounds.lo,
                    hi: opts.bounds.hi,
                });
            }
            values.push(Some(value));
        }
        ids.push(id);
        cells.push(values);
    }
    if ids.is_empty() {
        return Err(Error::Empty(format!(
            "{}: no data rows",
            source.display()
        )));
    }

    Ok(LoadedSurvey {
        table: SurveyTable::new(ids, attribute_names, cells)?,
        labels: label_idx.map(|_| labels),
    })
}

/// Writes a table as CSV. Reals use the shortest round-trip representation
/// so that reading the file back reproduces every value exactly.
pub fn write_csv<W: Write>(
    table: &SurveyTable,
    labels: Option<(&str, &[String])>,
    writer: W,
) -> Result<()> {
    let to_err = |e: csv::Error| Error::Parse {
        path: "<output>".into(),
        message: e.to_string(),
    };
    let mut w = csv::Writer::from_writer(writer);
    let mut header = vec![RESPONDENT_ID.to_string()];
    if let Some((name, _)) = labels {
        header.push(name.to_string());
    }
    header.extend(table.attribute_names.iter().cloned());
    w.write_record(&header).map_err(to_err)?;
    for (r, id) in table.respondent_ids.iter().enumerate() {
        let mut record = vec![id.clone()];
        if let Some((_, l)) = labels {
            record.push(l[r].clone());
        }
        record.extend(table.cells[r].iter().map(|c| match c {
            Some(v) => format!("{v:?}"),
            None => String::new(),
        }));
        w.write_record(&record).map_err(to_err)?;
    }
    w.flush().map_err(|e| Error::io("<output>", e))?;
    Ok(())
}

/// Replaces each missing cell with the mean of the observed values in its
/// column. Observed cells are left untouched and means are not rounded.
pub fn impute_mean(table: &SurveyTable) -> Result<SurveyTable> {
    let mut out = table.clone();
    for (c, name) in table.attribute_names.iter().enumerate() {
        let observed: Vec<f64> = table.cells.iter().filter_map(|row| row[c]).collect();
        if observed.len() == table.n() {
            continue;
        }
        if observed.is_empty() {
            return Err(Error::ImputationImpossible(name.clone()));
        }
        let mean = observed.iter().sum::<f64>() / observed.len() as f64;
        for row in &mut out.cells {
            row[c].get_or_insert(mean);
        }
    }
    Ok(out)
}

#[derive(Debug, Deserialize)]
struct SchemaFile {
    composites: IndexMap<String, Vec<String>>,
    groups: IndexMap<String, Vec<String>>,
    #[serde(default)]
    labels: IndexMap<String, String>,
}

/// Mapping from simple attributes to composites and from composites to groups.
///
/// Group members that are not declared under `composites` are single-member
/// composites over the simple attribute of the same name.
#[derive(Debug, Clone, PartialEq)]
pub struct AttributeSchema {
    // ordered by first appearance across groups
    composites: IndexMap<String, Vec<String>>,
    groups: IndexMap<String, Vec<String>>,
    labels: IndexMap<String, String>,
}

impl AttributeSchema {
    pub fn new(
        composites: IndexMap<String, Vec<String>>,
        groups: IndexMap<String, Vec<String>>,
        labels: IndexMap<String, String>,
    ) -> Result<Self> {
        if groups.is_empty() {
            return Err(Error::Schema("no groups".into()));
        }
        let mut ordered = IndexMap::new();
        for (group, members) in &groups {
            if members.is_empty() {
                return Err(Error::Schema(format!("group {group:?} is empty")));
            }
            for composite in members {
                let parts = match composites.get(composite) {
                    Some(parts) => parts.clone(),
                    None => vec![composite.clone()],
                };
                if parts.is_empty() {
                    return Err(Error::Schema(format!("composite {composite:?} is empty")));
                }
                if ordered.insert(composite.clone(), parts).is_some() {
                    return Err(Error::Schema(format!(
                        "composite {composite:?} appears in more than one group"
                    )));
                }
            }
        }
        if let Some(orphan) = composites.keys().find(|c| !ordered.contains_key(*c)) {
            return Err(Error::Schema(format!(
                "composite {orphan:?} is not assigned to any group"
            )));
        }
        let mut owner: HashMap<&str, &str> = HashMap::new();
        for (composite, parts) in &ordered {
            for simple in parts {
                if let Some(prev) = owner.insert(simple, composite) {
                    return Err(Error::Schema(format!(
                        "simple attribute {simple:?} appears in both {prev:?} and {composite:?}"
                    )));
                }
            }
        }
        if let Some(unknown) = labels.keys().find(|g| !groups.contains_key(*g)) {
            return Err(Error::Schema(format!("label for unknown group {unknown:?}")));
        }
        Ok(Self {
            composites: ordered,
            groups,
            labels,
        })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: SchemaFile = serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
        Self::new(file.composites, file.groups, file.labels)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text).map_err(|e| match e {
            Error::Schema(m) => Error::Schema(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    /// Composite name → constituent simple attributes, in schema order.
    pub fn composites(&self) -> &IndexMap<String, Vec<String>> {
        &self.composites
    }

    /// Group name → member composites, in schema order.
    pub fn groups(&self) -> &IndexMap<String, Vec<String>> {
        &self.groups
    }

    pub fn label(&self, group: &str) -> Option<&str> {
        self.labels.get(group).map(String::as_str)
    }

    pub fn group_of(&self, composite: &str) -> Option<&str> {
        self.groups
            .iter()
            .find(|(_, members)| members.iter().any(|m| m == composite))
            .map(|(g, _)| g.as_str())
    }

    /// Schema with one group removed.
    pub fn without_group(&self, group: &str) -> Result<Self> {
        let mut groups = self.groups.clone();
        let removed = groups
            .shift_remove(group)
            .ok_or_else(|| Error::Schema(format!("unknown group {group:?}")))?;
        let mut composites = self.composites.clone();
        for c in &removed {
            composites.shift_remove(c);
        }
        let mut labels = self.labels.clone();
        labels.shift_remove(group);
        Self::new(composites, groups, labels)
    }
}

fn row_means(table: &SurveyTable, members: &[String]) -> Result<Vec<f64>> {
    let idx: Vec<usize> = members
        .iter()
        .map(|m| {
            table
                .column_index(m)
                .ok_or_else(|| Error::UnknownColumn(m.clone()))
        })
        .collect::<Result<_>>()?;
    Ok(table
        .cells
        .iter()
        .map(|row| {
            // callers guarantee completeness
            idx.iter().map(|&i| row[i].unwrap_or(f64::NAN)).sum::<f64>() / idx.len() as f64
        })
        .collect())
}

fn assemble(table: &SurveyTable, names: Vec<String>, columns: Vec<Vec<f64>>) -> Result<SurveyTable> {
    let rows = (0..table.n())
        .map(|r| columns.iter().map(|col| col[r]).collect())
        .collect();
    SurveyTable::from_complete(table.respondent_ids.clone(), names, rows)
}

/// Combines simple attributes into composites by per-respondent arithmetic
/// mean. Simple attributes that no composite references are carried over
/// unchanged after the schema composites.
pub fn aggregate_composites(table: &SurveyTable, schema: &AttributeSchema) -> Result<SurveyTable> {
    table.require_complete()?;
    let mut names = Vec::new();
    let mut columns = Vec::new();
    for (composite, parts) in &schema.composites {
        columns.push(row_means(table, parts)?);
        names.push(composite.clone());
    }
    let referenced: HashSet<&str> = schema.composites.values().flatten().map(String::as_str).collect();
    for (c, name) in table.attribute_names.iter().enumerate() {
        if referenced.contains(name.as_str()) {
            continue;
        }
        columns.push(table.cells.iter().map(|row| row[c].unwrap_or(f64::NAN)).collect());
        names.push(name.clone());
    }
    assemble(table, names, columns)
}

/// One column per group holding the mean of the group's composite values.
pub fn group_scores(table: &SurveyTable, schema: &AttributeSchema) -> Result<SurveyTable> {
    table.require_complete()?;
    let mut names = Vec::new();
    let mut columns = Vec::new();
    for (group, members) in &schema.groups {
        columns.push(row_means(table, members)?);
        names.push(group.clone());
    }
    assemble(table, names, columns)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<SurveyTable> {
        parse_csv(text.as_bytes(), Path::new("test.csv"), &CsvOptions::default()).map(|l| l.table)
    }

    fn table(cols: &[&str], rows: Vec<Vec<Option<f64>>>) -> SurveyTable {
        let ids = (0..rows.len()).map(|i| format!("r{}", i + 1)).collect();
        SurveyTable::new(ids, cols.iter().map(|s| s.to_string()).collect(), rows).unwrap()
    }

    #[test]
    fn load_well_formed() {
        let t = parse("respondent_id,2D,3D\nr1,1,5\nr2,3,4\nr3,2,2\n").unwrap();
        assert_eq!(t.n(), 3);
        assert_eq!(t.missing_count(), 0);
        assert_eq!(t.attribute_names(), ["2D", "3D"]);
        assert_eq!(t.get(1, 0), Some(3.0));
    }

    #[test]
    fn empty_cell_is_missing() {
        let t = parse("respondent_id,2D,3D\nr1,1,5\nr2,3,\n").unwrap();
        assert_eq!(t.get(1, 1), None);
        assert_eq!(t.missing_count(), 1);
    }

    #[test]
    fn out_of_range_names_row_and_column() {
        let err = parse("respondent_id,2D,3D\nr1,1,5\nr2,7,4\n").unwrap_err();
        match &err {
            Error::OutOfRange {
                row,
                respondent,
                column,
                ..
            } => {
                assert_eq!(*row, 2);
                assert_eq!(respondent, "r2");
                assert_eq!(column, "2D");
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(err.to_string().contains("r2"));
    }

    #[test]
    fn load_errors() {
        assert!(matches!(
            parse("respondent_id,a\nr1,1\nr1,2\n"),
            Err(Error::DuplicateRespondent(_))
        ));
        assert!(matches!(
            parse("respondent_id,a,a\nr1,1,2\n"),
            Err(Error::DuplicateAttribute(_))
        ));
        assert!(matches!(
            parse("respondent_id,a\nr1,2.5\n"),
            Err(Error::InvalidCell { .. })
        ));
        assert!(matches!(parse(""), Err(Error::Empty(_))));
        assert!(matches!(parse("respondent_id,a\n"), Err(Error::Empty(_))));
        assert!(matches!(parse("id,a\nr1,1\n"), Err(Error::Parse { .. })));
    }

    #[test]
    fn custom_bounds_and_labels() {
        let opts = CsvOptions {
            bounds: "0,10".parse().unwrap(),
            label_column: Some("population".into()),
            allow_real: false,
        };
        let l = parse_csv(
            "respondent_id,population,a\nr1,Students,7\nr2,Staff,0\n".as_bytes(),
            Path::new("x"),
            &opts,
        )
        .unwrap();
        assert_eq!(l.table.attribute_names(), ["a"]);
        assert_eq!(l.labels.unwrap(), ["Students", "Staff"]);
        assert!("5,1".parse::<ValueBounds>().is_err());
    }

    #[test]
    fn impute_column_mean() {
        let t = table(&["a"], vec![vec![Some(4.0)], vec![None], vec![Some(2.0)]]);
        let out = impute_mean(&t).unwrap();
        assert_eq!(out.column("a").unwrap(), [4.0, 3.0, 2.0]);

        let t = table(
            &["a"],
            vec![vec![Some(5.0)], vec![None], vec![None], vec![Some(4.0)]],
        );
        assert_eq!(impute_mean(&t).unwrap().column("a").unwrap(), [5.0, 4.5, 4.5, 4.0]);
    }

    #[test]
    fn impute_complete_table_is_identity() {
        let t = table(&["a", "b"], vec![vec![Some(1.0), Some(2.0)], vec![Some(3.0), Some(4.0)]]);
        assert_eq!(impute_mean(&t).unwrap(), t);
    }

    #[test]
    fn impute_all_missing_column_fails() {
        let t = table(&["a", "b"], vec![vec![Some(1.0), None], vec![Some(3.0), None]]);
        match impute_mean(&t) {
            Err(Error::ImputationImpossible(col)) => assert_eq!(col, "b"),
            other => panic!("unexpected {other:?}"),
        }
    }

    fn media_output_schema() -> AttributeSchema {
        AttributeSchema::from_json(
            r#"{
                "composites": {
                    "2D": ["2D Videos", "Partial 2D/3D"],
                    "Result as Mash up": ["Mash up", "Mash up of results", "Mash up of tutorials", "Mash up of SNS"]
                },
                "groups": {
                    "G2": ["2D", "Audio"],
                    "G3": ["Custom mash up", "Result as Mash up"]
                },
                "labels": {"G2": "Media", "G3": "Output"}
            }"#,
        )
        .unwrap()
    }

    #[test]
    fn aggregate_means_and_passthrough() {
        let schema = media_output_schema();
        let cols = [
            "2D Videos",
            "Partial 2D/3D",
            "Audio",
            "Custom mash up",
            "Mash up",
            "Mash up of results",
            "Mash up of tutorials",
            "Mash up of SNS",
            "Extra",
        ];
        let row = [4.0, 2.0, 5.0, 2.0, 3.0, 4.0, 4.0, 5.0, 1.0];
        let t = table(&cols, vec![row.iter().map(|&v| Some(v)).collect()]);
        let out = aggregate_composites(&t, &schema).unwrap();
        assert_eq!(
            out.attribute_names(),
            ["2D", "Audio", "Custom mash up", "Result as Mash up", "Extra"]
        );
        assert_eq!(out.column("2D").unwrap(), [3.0]);
        assert_eq!(out.column("Audio").unwrap(), [5.0]);
        assert_eq!(out.column("Result as Mash up").unwrap(), [4.0]);
        assert_eq!(out.column("Extra").unwrap(), [1.0]);

        let groups = group_scores(&out, &schema).unwrap();
        assert_eq!(groups.attribute_names(), ["G2", "G3"]);
        assert_eq!(groups.column("G3").unwrap(), [3.0]);
        assert_eq!(groups.column("G2").unwrap(), [4.0]);
    }

    #[test]
    fn aggregate_rejects_absent_column_and_missing() {
        let schema = media_output_schema();
        let t = table(&["2D Videos"], vec![vec![Some(1.0)]]);
        assert!(matches!(
            aggregate_composites(&t, &schema),
            Err(Error::UnknownColumn(_))
        ));
        let t = table(&["a"], vec![vec![None]]);
        assert!(matches!(
            aggregate_composites(&t, &schema),
            Err(Error::MissingValues(_))
        ));
    }

    #[test]
    fn group_scores_five_way_means() {
        let schema = AttributeSchema::from_json(
            r#"{"composites": {}, "groups": {"G1": ["p1","p2","p3","p4","p5"]}}"#,
        )
        .unwrap();
        let t = table(
            &["p1", "p2", "p3", "p4", "p5"],
            vec![
                [1.0, 2.0, 3.0, 4.0, 5.0].map(Some).to_vec(),
                [5.0, 5.0, 4.0, 4.0, 2.0].map(Some).to_vec(),
            ],
        );
        let g = group_scores(&t, &schema).unwrap();
        assert_eq!(g.column("G1").unwrap(), [3.0, 4.0]);

        let single = AttributeSchema::from_json(r#"{"composites": {}, "groups": {"G": ["p1"]}}"#).unwrap();
        let t = table(&["p1"], vec![vec![Some(3.0)]]);
        assert_eq!(group_scores(&t, &single).unwrap().column("G").unwrap(), [3.0]);
    }

    #[test]
    fn schema_validation() {
        let bad = [
            r#"{"composites": {"a": []}, "groups": {"G": ["a"]}}"#,
            r#"{"composites": {}, "groups": {"G": []}}"#,
            r#"{"composites": {}, "groups": {"G": ["a"], "H": ["a"]}}"#,
            r#"{"composites": {"a": ["x"], "b": ["x"]}, "groups": {"G": ["a", "b"]}}"#,
            r#"{"composites": {"a": ["x"]}, "groups": {"G": ["b"]}}"#,
            r#"{"composites": {}, "groups": {}}"#,
        ];
        for text in bad {
            assert!(
                matches!(AttributeSchema::from_json(text), Err(Error::Schema(_))),
                "{text}"
            );
        }
        let s = media_output_schema();
        assert_eq!(s.label("G2"), Some("Media"));
        assert_eq!(s.group_of("Audio"), Some("G2"));
        let reduced = s.without_group("G2").unwrap();
        assert_eq!(reduced.composites().len(), 2);
    }

    #[test]
    fn csv_round_trip_is_exact() {
        let t = table(
            &["a", "b"],
            vec![
                vec![Some(4.0 / 3.0), Some(4.0)],
                vec![Some(17.0 / 7.0 - 1.0), None],
            ],
        );
        let mut buf = Vec::new();
        write_csv(&t, None, &mut buf).unwrap();
        let opts = CsvOptions {
            allow_real: true,
            ..CsvOptions::default()
        };
        let back = parse_csv(buf.as_slice(), Path::new("x"), &opts).unwrap().table;
        assert_eq!(back, t);
    }
}
