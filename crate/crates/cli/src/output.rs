//! Report documents, trace CSVs and plain-text tables.

use std::fmt::Write as _;
use std::path::Path;

use anyhow::{Context, Result};
use effort_core::harness::BoundOverride;
use effort_core::{
    Algorithm, ExperimentReport, MetricsReport, ModelSpec, OptimizerConfig, SearchSpace,
};
use serde::{Deserialize, Serialize};

/// Echo of the settings an invocation ran with.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub dataset: String,
    pub records: usize,
    pub train_ids: Vec<u32>,
    pub test_ids: Vec<u32>,
    pub runs: usize,
    pub master_seed: u64,
    pub bounds: Vec<BoundOverride>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitDocument {
    pub command: String,
    pub config: ConfigEcho,
    pub optimizer: OptimizerConfig,
    pub space: SearchSpace,
    pub report: ExperimentReport,
    pub table: Vec<TableRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompareEntry {
    pub model: ModelSpec,
    pub algorithm: Algorithm,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub report: Option<ExperimentReport>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompareDocument {
    pub command: String,
    pub config: ConfigEcho,
    pub iterations: usize,
    pub population: usize,
    pub cells: Vec<CompareEntry>,
    /// Rendered table rows, one block per model.
    pub tables: Vec<ModelTable>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelTable {
    pub model: ModelSpec,
    pub rows: Vec<TableRow>,
}

/// One metric row exactly as printed: training cells then testing cells.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub metric: String,
    pub training: Vec<String>,
    pub testing: Vec<String>,
}

/// Two decimals everywhere except R², which keeps four.
pub fn format_metric(index: usize, value: f64) -> String {
    match MetricsReport::NAMES[index] {
        "VAF" => format!("{value:.2}%"),
        "R2" => format!("{value:.4}"),
        _ => format!("{value:.2}"),
    }
}

/// Rows for a table whose columns are `(train, test)` metric pairs; a
/// missing column renders as `n/a`.
pub fn table_rows(columns: &[Option<(MetricsReport, MetricsReport)>]) -> Vec<TableRow> {
    MetricsReport::NAMES
        .iter()
        .enumerate()
        .map(|(k, name)| {
            let cell = |m: Option<&MetricsReport>| {
                m.map_or_else(|| "n/a".to_owned(), |m| format_metric(k, m.values()[k]))
            };
            TableRow {
                metric: (*name).to_owned(),
                training: columns
                    .iter()
                    .map(|c| cell(c.as_ref().map(|c| &c.0)))
                    .collect(),
                testing: columns
                    .iter()
                    .map(|c| cell(c.as_ref().map(|c| &c.1)))
                    .collect(),
            }
        })
        .collect()
}

pub fn render_table(title: &str, headers: &[&str], rows: &[TableRow]) -> String {
    let width = rows
        .iter()
        .flat_map(|r| r.training.iter().chain(&r.testing))
        .map(String::len)
        .chain(headers.iter().map(|h| h.len()))
        .max()
        .unwrap_or(8)
        .max(8);
    let group = headers.len() * (width + 1);
    let mut out = String::new();
    writeln!(out, "{title}").unwrap();
    let banner = format!("{:6} {:^group$}| {:^group$}", "", "Training", "Testing");
    writeln!(out, "{}", banner.trim_end()).unwrap();
    write!(out, "{:6} ", "").unwrap();
    for _ in 0..2 {
        for h in headers {
            write!(out, "{h:>width$} ").unwrap();
        }
        out.push_str("| ");
    }
    out.truncate(out.trim_end_matches([' ', '|']).len());
    out.push('\n');
    for r in rows {
        write!(out, "{:6} ", r.metric).unwrap();
        for v in &r.training {
            write!(out, "{v:>width$} ").unwrap();
        }
        out.push_str("| ");
        let testing: Vec<String> = r.testing.iter().map(|v| format!("{v:>width$}")).collect();
        writeln!(out, "{}", testing.join(" ")).unwrap();
    }
    out
}

/// `iteration,<col>...` CSV, iterations starting at 1. Values use the
/// shortest round-tripping representation; missing columns are left empty.
pub fn trace_csv(columns: &[&str], traces: &[Option<&[f64]>]) -> String {
    let len = traces.iter().flatten().map(|t| t.len()).max().unwrap_or(0);
    let mut out = String::from("iteration");
    for c in columns {
        out.push(',');
        out.push_str(c);
    }
    out.push('\n');
    for t in 0..len {
        write!(out, "{}", t + 1).unwrap();
        for trace in traces {
            out.push(',');
            if let Some(v) = trace.and_then(|tr| tr.get(t)) {
                write!(out, "{v}").unwrap();
            }
        }
        out.push('\n');
    }
    out
}

pub fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}

pub fn to_json<T: Serialize>(doc: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(doc)?;
    s.push('\n');
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn metric_formatting() {
        assert_eq!(format_metric(0, 93.8249), "93.82%");
        assert_eq!(format_metric(1, 104.875), "104.88");
        assert_eq!(format_metric(5, 0.93671), "0.9367");
    }

    #[test]
    fn trace_layout() {
        let a = [3.0, 2.5];
        let b = [4.0, 1.0];
        let csv = trace_csv(&["firefly", "ga", "pso"], &[Some(&a), None, Some(&b)]);
        assert_eq!(csv, "iteration,firefly,ga,pso\n1,3,,4\n2,2.5,,1\n");
    }

    #[test]
    fn table_has_six_rows() {
        let m = MetricsReport::from_values([100.0, 0.0, 0.0, 0.0, 0.0, 1.0]);
        let rows = table_rows(&[Some((m, m)), None]);
        assert_eq!(rows.len(), 6);
        assert_eq!(rows[0].training, vec!["100.00%", "n/a"]);
        let text = render_table("T", &["Firefly", "GA"], &rows);
        assert!(text.contains("R2"));
        assert_eq!(text.lines().count(), 9);
    }
}

#[cfg(test)]
mod round_trip {
    use super::*;
    use effort_core::{nasa_dataset, run_experiment, split_fixed, ExperimentConfig};

    #[test]
    fn fit_document_parses_back_exactly() {
        let split = split_fixed(&nasa_dataset(), 13).unwrap();
        let mut cfg = ExperimentConfig::new(ModelSpec::ModelII, Algorithm::Pso, split.clone(), 5);
        cfg.runs = 3;
        cfg.optimizer.set_iterations(20);
        cfg.optimizer.set_population(15);
        let report = run_experiment(&cfg).unwrap();
        let doc = FitDocument {
            command: "fit".into(),
            config: ConfigEcho {
                dataset: "nasa18".into(),
                records: 18,
                train_ids: split.train.ids(),
                test_ids: split.test.ids(),
                runs: 3,
                master_seed: 5,
                bounds: vec![BoundOverride {
                    index: 1,
                    lower: 0.1,
                    upper: 1.9,
                }],
            },
            optimizer: cfg.optimizer.clone(),
            space: cfg.space.clone(),
            table: table_rows(&[Some((report.mean_train, report.mean_test))]),
            report,
        };
        let text = to_json(&doc).unwrap();
        let back: FitDocument = serde_json::from_str(&text).unwrap();
        assert_eq!(back, doc);
        assert_eq!(to_json(&back).unwrap(), text);
    }
}
