//! CSV and JSON artifacts: feature matrices, schema sidecars, importance
//! reports, evaluation reports and predictions.
//!
//! Reports start with a `# config: {...}` line carrying the resolved run
//! configuration, followed by a CSV header and rows.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};
use veritag_core::eval::{CrossDomainCell, EvalReport, GridCell, TemporalReport, TermFrequencyReport};
use veritag_core::features::{FeatureSchema, FeatureVector, Granularity, Group, PruningMode};
use veritag_core::models::Prediction;
use veritag_core::selection::SelectionReport;
use veritag_core::Label;

use crate::error::{AppError, AppResult, IoContext};

/// Round to 9 significant digits, then print the shortest decimal that
/// reads back to the rounded value.
pub fn fmt_sig9(v: f64) -> String {
    let rounded: f64 = format!("{v:.8e}").parse().expect("formatted float parses");
    if rounded == 0.0 {
        return "0".into();
    }
    format!("{rounded}")
}

fn write_file(path: &Path, bytes: &[u8]) -> AppResult<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).at(parent)?;
    }
    fs::write(path, bytes).at(path)
}

fn csv_bytes(header: Option<&str>, f: impl FnOnce(&mut csv::Writer<&mut Vec<u8>>) -> csv::Result<()>) -> AppResult<Vec<u8>> {
    let mut buf = Vec::new();
    if let Some(h) = header {
        buf.extend_from_slice(h.as_bytes());
        buf.push(b'\n');
    }
    {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(&mut buf);
        f(&mut w)?;
        w.flush().map_err(|e| AppError::internal(e.to_string()))?;
    }
    Ok(buf)
}

// ---- feature matrix ----

pub fn write_features(path: &Path, schema: &FeatureSchema, rows: &[FeatureVector]) -> AppResult<()> {
    let with_label = rows.iter().any(|r| r.label.is_some());
    let bytes = csv_bytes(None, |w| {
        let mut header = vec!["doc_id".to_string()];
        header.extend(schema.names.iter().cloned());
        if with_label {
            header.push("label".into());
        }
        w.write_record(&header)?;
        for r in rows {
            let mut rec = vec![r.doc_id.clone()];
            rec.extend(r.values.iter().map(|v| fmt_sig9(*v)));
            if with_label {
                rec.push(r.label.map_or(String::new(), |l| l.to_string()));
            }
            w.write_record(&rec)?;
        }
        Ok(())
    })?;
    write_file(path, &bytes)
}

/// Read a feature matrix; returns the column names and rows.
pub fn read_features(path: &Path) -> AppResult<(Vec<String>, Vec<FeatureVector>)> {
    let text = fs::read_to_string(path).at(path)?;
    let mut rdr = csv::ReaderBuilder::new().from_reader(text.as_bytes());
    let header: Vec<String> = rdr.headers()?.iter().map(String::from).collect();
    let bad = |msg: String| AppError::data(format!("{}: {msg}", path.display()));
    if header.first().map(String::as_str) != Some("doc_id") {
        return Err(bad("first column must be doc_id".into()));
    }
    let has_label = header.last().map(String::as_str) == Some("label");
    let end = if has_label { header.len() - 1 } else { header.len() };
    let names = header[1..end].to_vec();
    let mut rows = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let line = i + 2;
        let values = (1..end)
            .map(|j| {
                let v: f64 = rec[j].parse().map_err(|_| bad(format!("line {line}: {:?} is not a number", &rec[j])))?;
                if v.is_finite() {
                    Ok(v)
                } else {
                    Err(bad(format!("line {line}: non-finite value")))
                }
            })
            .collect::<AppResult<Vec<f64>>>()?;
        let label = match has_label {
            true if !rec[end].is_empty() => {
                Some(rec[end].parse::<Label>().map_err(|e| bad(format!("line {line}: {e}")))?)
            }
            _ => None,
        };
        rows.push(FeatureVector { doc_id: rec[0].to_string(), values, label });
    }
    Ok((names, rows))
}

// ---- schema sidecar ----

/// On-disk schema: `pruning` is `none`, `paper` or `computed:PATH`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SchemaFile {
    pub granularity: Granularity,
    pub groups: Vec<Group>,
    pub pruning: String,
    pub names: Vec<String>,
}

impl From<&FeatureSchema> for SchemaFile {
    fn from(s: &FeatureSchema) -> Self {
        let pruning = match &s.pruning {
            PruningMode::None => "none".to_string(),
            PruningMode::Paper => "paper".to_string(),
            PruningMode::Computed(p) => format!("computed:{p}"),
        };
        SchemaFile { granularity: s.granularity, groups: s.groups.clone(), pruning, names: s.names.clone() }
    }
}

impl SchemaFile {
    pub fn into_schema(self) -> AppResult<FeatureSchema> {
        let pruning = match self.pruning.as_str() {
            "none" => PruningMode::None,
            "paper" => PruningMode::Paper,
            p => match p.strip_prefix("computed:") {
                Some(path) => PruningMode::Computed(path.to_string()),
                None => return Err(AppError::data(format!("unknown pruning mode {p:?}"))),
            },
        };
        let schema = FeatureSchema { names: self.names, granularity: self.granularity, groups: self.groups, pruning };
        schema.validate()?;
        Ok(schema)
    }
}

pub fn write_schema(path: &Path, schema: &FeatureSchema) -> AppResult<()> {
    let text = serde_json::to_string_pretty(&SchemaFile::from(schema))? + "\n";
    write_file(path, text.as_bytes())
}

pub fn read_schema(path: &Path) -> AppResult<FeatureSchema> {
    let text = fs::read_to_string(path).at(path)?;
    let file: SchemaFile =
        serde_json::from_str(&text).map_err(|e| AppError::data(format!("{}: invalid schema: {e}", path.display())))?;
    file.into_schema().map_err(|e| e.context(path.display()))
}

// ---- selection report ----

pub const IMPORTANCE_COLUMNS: [&str; 11] = [
    "feature", "se_raw", "tb_raw", "l1_raw", "mi_raw", "se_inv_norm", "tb_norm", "l1_norm", "mi_norm", "r", "retained",
];

pub fn write_importance(path: &Path, report: &SelectionReport) -> AppResult<()> {
    let bytes = csv_bytes(None, |w| {
        w.write_record(IMPORTANCE_COLUMNS)?;
        for ((name, f), keep) in report.names.iter().zip(&report.scores.features).zip(&report.retained) {
            let nums = [f.se_raw, f.tb_raw, f.l1_raw, f.mi_raw, f.se_inv_norm, f.tb_norm, f.l1_norm, f.mi_norm, f.r];
            let mut rec = vec![name.clone()];
            rec.extend(nums.iter().map(|v| format!("{v}")));
            rec.push(keep.to_string());
            w.write_record(&rec)?;
        }
        Ok(())
    })?;
    write_file(path, &bytes)
}

// ---- evaluation reports ----

fn config_line(config_json: &str) -> String {
    format!("# config: {config_json}")
}

pub fn cv_report_csv(report: &EvalReport, config_json: &str) -> AppResult<Vec<u8>> {
    csv_bytes(Some(&config_line(config_json)), |w| {
        w.write_record(["fold", "accuracy"])?;
        for (i, a) in report.fold_accuracies.iter().enumerate() {
            w.write_record([(i + 1).to_string(), format!("{a}")])?;
        }
        w.write_record(["mean".to_string(), format!("{}", report.mean_accuracy)])
    })
}

/// Long form: one row per (train_year, test_year) cell, then one
/// `mean` row per train year. Skipped train years are listed in a comment.
pub fn temporal_report_csv(report: &TemporalReport, config_json: &str) -> AppResult<Vec<u8>> {
    let mut header = config_line(config_json);
    if !report.skipped.is_empty() {
        let years: Vec<String> = report.skipped.iter().map(i32::to_string).collect();
        header.push_str(&format!("\n# skipped single-class train years: {}", years.join(" ")));
    }
    csv_bytes(Some(&header), |w| {
        w.write_record(["train_year", "test_year", "accuracy"])?;
        for c in &report.cells {
            w.write_record([c.train_year.to_string(), c.test_year.to_string(), format!("{}", c.accuracy)])?;
        }
        for (y, m) in &report.means {
            if let Some(m) = m {
                w.write_record([y.to_string(), "mean".to_string(), format!("{m}")])?;
            }
        }
        Ok(())
    })
}

pub fn cross_domain_report_csv(cells: &[CrossDomainCell], config_json: &str) -> AppResult<Vec<u8>> {
    csv_bytes(Some(&config_line(config_json)), |w| {
        w.write_record(["classifier", "accuracy"])?;
        for c in cells {
            w.write_record([c.classifier.as_str().to_string(), format!("{}", c.accuracy)])?;
        }
        Ok(())
    })
}

pub fn grid_report_csv(cells: &[GridCell], config_json: &str) -> AppResult<Vec<u8>> {
    let folds = cells.first().map_or(0, |c| c.report.fold_accuracies.len());
    csv_bytes(Some(&config_line(config_json)), |w| {
        let mut header = vec!["groups".to_string(), "granularity".into(), "mean_accuracy".into()];
        header.extend((1..=folds).map(|i| format!("fold_{i}")));
        w.write_record(&header)?;
        for c in cells {
            let mut rec = vec![c.report.config.groups_label(), c.granularity.to_string(), format!("{}", c.report.mean_accuracy)];
            rec.extend(c.report.fold_accuracies.iter().map(|a| format!("{a}")));
            w.write_record(&rec)?;
        }
        Ok(())
    })
}

pub fn terms_report_csv(report: &TermFrequencyReport, config_json: &str) -> AppResult<Vec<u8>> {
    csv_bytes(Some(&config_line(config_json)), |w| {
        w.write_record(["year", "rank", "term", "count"])?;
        for y in &report.years {
            for (i, (term, count)) in y.terms.iter().enumerate() {
                w.write_record([y.year.to_string(), (i + 1).to_string(), term.clone(), count.to_string()])?;
            }
        }
        Ok(())
    })
}

pub fn write_report(path: &Path, bytes: &[u8]) -> AppResult<()> {
    write_file(path, bytes)
}

/// Split a report into its config JSON and the CSV body.
pub fn split_report(text: &str) -> Option<(&str, &str)> {
    let first = text.lines().next()?;
    let json = first.strip_prefix("# config: ")?;
    let body_start = text.lines().take_while(|l| l.starts_with('#')).map(|l| l.len() + 1).sum::<usize>();
    Some((json, &text[body_start.min(text.len())..]))
}

// ---- predictions ----

pub fn write_predictions(path: &Path, rows: &[(String, Prediction)]) -> AppResult<()> {
    let bytes = csv_bytes(None, |w| {
        w.write_record(["doc_id", "predicted", "score"])?;
        for (id, p) in rows {
            let label = Label::from_id(p.class).map_or_else(|| p.class.to_string(), |l| l.to_string());
            w.write_record([id.clone(), label, format!("{}", p.score)])?;
        }
        Ok(())
    })?;
    write_file(path, &bytes)
}

/// Write lines of JSON to `out`.
pub fn write_jsonl<T: Serialize>(mut out: impl Write, items: &[T]) -> AppResult<()> {
    for item in items {
        serde_json::to_writer(&mut out, item)?;
        out.write_all(b"\n").map_err(|e| AppError::data(e.to_string()))?;
    }
    Ok(())
}
