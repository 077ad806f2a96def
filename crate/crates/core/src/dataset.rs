//! Project datasets: CSV loading, the built-in NASA-18 table and the fixed
//! ordered train/test split.
//!
//! The interchange format is UTF-8 CSV with one header row naming the
//! columns `id`, `kloc`, `me` and `effort`. Column names are matched
//! case-insensitively and may appear in any order.

use std::collections::HashSet;
use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One software project.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProjectRecord {
    /// Project number, unique within a dataset.
    pub id: u32,
    /// Size in thousands of delivered lines of code.
    pub kloc: f64,
    /// Methodology score.
    pub me: f64,
    /// Measured effort in person-months.
    pub effort: f64,
}

impl ProjectRecord {
    pub fn new(id: u32, kloc: f64, me: f64, effort: f64) -> Result<Self> {
        let record = Self {
            id,
            kloc,
            me,
            effort,
        };
        record.validate().map_err(Error::Dataset)?;
        Ok(record)
    }

    fn validate(&self) -> std::result::Result<(), String> {
        if self.id == 0 {
            return Err("id must be a positive integer".into());
        }
        if !(self.kloc.is_finite() && self.me.is_finite() && self.effort.is_finite()) {
            return Err(format!("project {}: values must be finite", self.id));
        }
        if self.kloc <= 0.0 {
            return Err(format!(
                "project {}: kloc must be > 0, got {}",
                self.id, self.kloc
            ));
        }
        if self.effort <= 0.0 {
            return Err(format!(
                "project {}: effort must be > 0, got {}",
                self.id, self.effort
            ));
        }
        Ok(())
    }
}

/// A non-empty, ordered collection of projects with unique ids.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    name: String,
    records: Vec<ProjectRecord>,
}

impl Dataset {
    pub fn new(name: impl Into<String>, records: Vec<ProjectRecord>) -> Result<Self> {
        if records.is_empty() {
            return Err(Error::Dataset("dataset has no records".into()));
        }
        let mut seen = HashSet::with_capacity(records.len());
        for r in &records {
            r.validate().map_err(Error::Dataset)?;
            if !seen.insert(r.id) {
                return Err(Error::Dataset(format!("duplicate project id {}", r.id)));
            }
        }
        Ok(Self {
            name: name.into(),
            records,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn records(&self) -> &[ProjectRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    /// Always false; kept for clippy's `len_without_is_empty`.
    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn ids(&self) -> Vec<u32> {
        self.records.iter().map(|r| r.id).collect()
    }

    /// Measured efforts in dataset order.
    pub fn efforts(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.effort).collect()
    }
}

/// Disjoint train and test partitions of one source dataset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitDataset {
    pub train: Dataset,
    pub test: Dataset,
}

const COLUMNS: [&str; 4] = ["id", "kloc", "me", "effort"];

/// Reads a dataset from a CSV file. The dataset is named after the file stem.
pub fn load_csv(path: impl AsRef<Path>) -> Result<Dataset> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "dataset".into());
    read_csv(file, name)
}

/// Reads a dataset from any CSV source. Errors carry the 1-based data row
/// number (the header is row 0).
pub fn read_csv<R: Read>(reader: R, name: impl Into<String>) -> Result<Dataset> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(reader);

    let headers = rdr
        .headers()
        .map_err(|e| Error::Csv {
            row: 0,
            message: e.to_string(),
        })?
        .clone();
    let mut index = [usize::MAX; 4];
    for (pos, h) in headers.iter().enumerate() {
        let h = h.trim_start_matches('\u{feff}').to_ascii_lowercase();
        if let Some(k) = COLUMNS.iter().position(|c| *c == h) {
            if index[k] != usize::MAX {
                return Err(Error::Csv {
                    row: 0,
                    message: format!("duplicate column '{}'", COLUMNS[k]),
                });
            }
            index[k] = pos;
        }
    }
    if let Some(k) = index.iter().position(|&i| i == usize::MAX) {
        return Err(Error::Csv {
            row: 0,
            message: format!("missing column '{}'", COLUMNS[k]),
        });
    }

    let mut records = Vec::new();
    let mut seen = HashSet::new();
    for (n, row) in rdr.records().enumerate() {
        let row_no = n + 1;
        let row = row.map_err(|e| Error::Csv {
            row: row_no,
            message: e.to_string(),
        })?;
        let cell = |k: usize| -> Result<&str> {
            row.get(index[k]).ok_or_else(|| Error::Csv {
                row: row_no,
                message: format!("missing value for '{}'", COLUMNS[k]),
            })
        };
        let number = |k: usize| -> Result<f64> {
            let raw = cell(k)?;
            match raw.parse::<f64>() {
                Ok(v) if v.is_finite() => Ok(v),
                _ => Err(Error::Csv {
                    row: row_no,
                    message: format!("'{}' is not a finite number: {raw:?}", COLUMNS[k]),
                }),
            }
        };
        let raw_id = cell(0)?;
        let id = match raw_id.parse::<u32>() {
            Ok(v) if v > 0 => v,
            _ => {
                return Err(Error::Csv {
                    row: row_no,
                    message: format!("'id' must be a positive integer: {raw_id:?}"),
                })
            }
        };
        let record = ProjectRecord {
            id,
            kloc: number(1)?,
            me: number(2)?,
            effort: number(3)?,
        };
        record.validate().map_err(|message| Error::Csv {
            row: row_no,
            message,
        })?;
        if !seen.insert(id) {
            return Err(Error::Csv {
                row: row_no,
                message: format!("duplicate project id {id}"),
            });
        }
        records.push(record);
    }
    if records.is_empty() {
        return Err(Error::Csv {
            row: 1,
            message: "no data rows".into(),
        });
    }
    Dataset::new(name, records)
}

/// Writes `id,kloc,me,effort` CSV. Floats use the shortest representation
/// that parses back to the same value.
pub fn write_csv<W: Write>(dataset: &Dataset, writer: W) -> Result<()> {
    let io_err = |e: csv::Error| Error::Io {
        path: dataset.name().to_owned(),
        message: e.to_string(),
    };
    let mut wtr = csv::Writer::from_writer(writer);
    wtr.write_record(COLUMNS).map_err(io_err)?;
    for r in dataset.records() {
        wtr.write_record([
            r.id.to_string(),
            r.kloc.to_string(),
            r.me.to_string(),
            r.effort.to_string(),
        ])
        .map_err(io_err)?;
    }
    wtr.flush().map_err(|e| Error::Io {
        path: dataset.name().to_owned(),
        message: e.to_string(),
    })
}

/// (KLOC, ME, measured effort) for NASA projects 1..=18.
const NASA: [(f64, f64, f64); 18] = [
    (90.2, 30.0, 115.8),
    (46.2, 20.0, 96.0),
    (46.5, 19.0, 79.0),
    (54.5, 20.0, 90.8),
    (31.1, 35.0, 39.6),
    (67.5, 29.0, 98.4),
    (12.8, 26.0, 18.9),
    (10.5, 34.0, 10.3),
    (21.5, 31.0, 28.5),
    (3.1, 26.0, 7.0),
    (4.2, 19.0, 9.0),
    (7.8, 31.0, 7.3),
    (2.1, 28.0, 5.0),
    (5.0, 29.0, 8.4),
    (78.6, 35.0, 98.7),
    (9.7, 27.0, 15.6),
    (12.5, 27.0, 23.9),
    (100.8, 34.0, 138.3),
];

/// Number of NASA projects used for training in the standard protocol.
pub const NASA_TRAIN_COUNT: usize = 13;

/// The 18-project NASA effort dataset, ids 1 through 18.
pub fn nasa_dataset() -> Dataset {
    let records = NASA
        .iter()
        .zip(1u32..)
        .map(|(&(kloc, me, effort), id)| ProjectRecord {
            id,
            kloc,
            me,
            effort,
        })
        .collect();
    Dataset {
        name: "nasa18".into(),
        records,
    }
}

/// Splits off the first `train_count` records as training data, keeping order.
pub fn split_fixed(dataset: &Dataset, train_count: usize) -> Result<SplitDataset> {
    let len = dataset.len();
    if train_count == 0 || train_count >= len {
        return Err(Error::Split { train_count, len });
    }
    let (train, test) = dataset.records.split_at(train_count);
    Ok(SplitDataset {
        train: Dataset {
            name: format!("{}-train", dataset.name),
            records: train.to_vec(),
        },
        test: Dataset {
            name: format!("{}-test", dataset.name),
            records: test.to_vec(),
        },
    })
}
