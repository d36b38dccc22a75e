//! Numeric datasets: an `n × d` matrix of finite reals, one observation per
//! row.
//!
//! Ingestion reads delimited UTF-8 text (comma or tab, auto-detected; any
//! other single-byte delimiter must be given explicitly). Sample variance uses
//! the `n - 1` denominator throughout.

use std::fmt::Write as _;
use std::io::Read;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    rows: usize,
    cols: usize,
    values: Vec<f64>,
}

impl Dataset {
    /// Builds a dataset from row-major values.
    pub fn new(rows: usize, cols: usize, values: Vec<f64>) -> Result<Self> {
        if cols == 0 {
            return Err(Error::InvalidArgument("dataset needs at least one column".into()));
        }
        if rows < 2 {
            return Err(Error::TooFewRows { required: 2, actual: rows });
        }
        if values.len() != rows * cols {
            return Err(Error::InvalidArgument(format!(
                "expected {} values for a {rows}x{cols} dataset, got {}",
                rows * cols,
                values.len()
            )));
        }
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Parse {
                row: pos / cols + 1,
                col: pos % cols + 1,
                message: "value is not finite".into(),
            });
        }
        Ok(Self { rows, cols, values })
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut values = Vec::with_capacity(rows.len() * cols);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(Error::Shape { row: i + 1, expected: cols, found: r.len() });
            }
            values.extend_from_slice(r);
        }
        Self::new(rows.len(), cols, values)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.cols..(i + 1) * self.cols]
    }

    pub fn iter_rows(&self) -> impl Iterator<Item = &[f64]> + '_ {
        self.values.chunks_exact(self.cols)
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.values[row * self.cols + col]
    }

    pub fn column(&self, col: usize) -> Vec<f64> {
        self.iter_rows().map(|r| r[col]).collect()
    }

    pub fn column_means(&self) -> Vec<f64> {
        let mut means = vec![0.0; self.cols];
        for r in self.iter_rows() {
            for (m, v) in means.iter_mut().zip(r) {
                *m += v;
            }
        }
        let n = self.rows as f64;
        means.iter_mut().for_each(|m| *m /= n);
        means
    }

    /// Sample standard deviation of each column (`n - 1` denominator).
    pub fn column_std_devs(&self) -> Vec<f64> {
        let means = self.column_means();
        let mut ss = vec![0.0; self.cols];
        for r in self.iter_rows() {
            for ((s, v), m) in ss.iter_mut().zip(r).zip(&means) {
                *s += (v - m) * (v - m);
            }
        }
        let denom = (self.rows - 1) as f64;
        ss.into_iter().map(|s| (s / denom).sqrt()).collect()
    }

    /// Returns a dataset whose rows are `self`'s rows in the order given by `order`.
    pub fn permute_rows(&self, order: &[usize]) -> Result<Self> {
        if order.len() != self.rows {
            return Err(Error::InvalidArgument("permutation length differs from row count".into()));
        }
        let mut values = Vec::with_capacity(self.values.len());
        for &i in order {
            values.extend_from_slice(self.row(i));
        }
        Self::new(self.rows, self.cols, values)
    }

    /// Applies `f` to every entry.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(self.rows, self.cols, self.values.iter().map(|&v| f(v)).collect())
    }

    /// Writes the dataset as delimited text. Values use the shortest decimal
    /// form that reads back to the same `f64`.
    pub fn to_delimited(&self, delimiter: char, header: Option<&[String]>) -> String {
        let mut out = String::new();
        if let Some(names) = header {
            out.push_str(&names.join(&delimiter.to_string()));
            out.push('\n');
        }
        for r in self.iter_rows() {
            for (j, v) in r.iter().enumerate() {
                if j > 0 {
                    out.push(delimiter);
                }
                let _ = write!(out, "{v}");
            }
            out.push('\n');
        }
        out
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StandardizationMode {
    #[default]
    None,
    Center,
    #[serde(alias = "zscore")]
    CenterAndUnitVariance,
}

impl std::str::FromStr for StandardizationMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(Self::None),
            "center" => Ok(Self::Center),
            "zscore" | "center-and-unit-variance" => Ok(Self::CenterAndUnitVariance),
            other => Err(Error::InvalidArgument(format!("unknown standardization mode '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum Delimiter {
    /// Tab if the first data line contains a tab and no comma, comma otherwise.
    #[default]
    Auto,
    Byte(u8),
}

/// Parses delimited numeric text into a dataset.
pub fn load_matrix<R: Read>(mut source: R, has_header: bool, delimiter: Delimiter) -> Result<Dataset> {
    let mut text = String::new();
    source.read_to_string(&mut text)?;
    parse_matrix(&text, has_header, delimiter)
}

pub fn parse_matrix(text: &str, has_header: bool, delimiter: Delimiter) -> Result<Dataset> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim_end_matches('\r')))
        .filter(|(_, l)| !l.trim().is_empty());
    if has_header {
        lines.next();
    }
    let lines: Vec<(usize, &str)> = lines.collect();

    let delim = match delimiter {
        Delimiter::Byte(b) => b as char,
        Delimiter::Auto => match lines.first() {
            Some((_, l)) if l.contains('\t') && !l.contains(',') => '\t',
            _ => ',',
        },
    };

    let mut cols = None;
    let mut values = Vec::new();
    for &(line_no, line) in &lines {
        let mut found = 0;
        for (j, cell) in line.split(delim).enumerate() {
            let cell = cell.trim();
            let v: f64 = cell.parse().map_err(|_| Error::Parse {
                row: line_no,
                col: j + 1,
                message: format!("'{cell}' is not a number"),
            })?;
            if !v.is_finite() {
                return Err(Error::Parse { row: line_no, col: j + 1, message: format!("'{cell}' is not finite") });
            }
            values.push(v);
            found += 1;
        }
        match cols {
            None => cols = Some(found),
            Some(expected) if expected != found => {
                return Err(Error::Shape { row: line_no, expected, found });
            }
            _ => {}
        }
    }
    let rows = lines.len();
    if rows < 2 {
        return Err(Error::TooFewRows { required: 2, actual: rows });
    }
    Dataset::new(rows, cols.unwrap_or(0), values)
}

/// Centers (and optionally scales) every column.
pub fn standardize(data: &Dataset, mode: StandardizationMode) -> Result<Dataset> {
    match mode {
        StandardizationMode::None => Ok(data.clone()),
        StandardizationMode::Center => {
            let means = data.column_means();
            let cols = data.cols();
            let values = data.values().iter().enumerate().map(|(k, v)| v - means[k % cols]).collect();
            Dataset::new(data.rows(), cols, values)
        }
        StandardizationMode::CenterAndUnitVariance => {
            let cols = data.cols();
            for j in 0..cols {
                let first = data.get(0, j);
                if data.iter_rows().all(|r| r[j] == first) {
                    return Err(Error::DegenerateColumn { column: j + 1 });
                }
            }
            let means = data.column_means();
            let sds = data.column_std_devs();
            let values = data
                .values()
                .iter()
                .enumerate()
                .map(|(k, v)| (v - means[k % cols]) / sds[k % cols])
                .collect();
            Dataset::new(data.rows(), cols, values)
        }
    }
}
