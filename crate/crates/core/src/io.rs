//! CSV matrices, result tables, trajectories and SVG line charts.
//!
//! Matrix files carry one header row of column (capability or activity)
//! labels and one leading label column:
//!
//! ```text
//! activity,b0,b1
//! p0,0.5,0.25
//! p1,1,0
//! ```
//!
//! Numbers are written in the shortest decimal form that parses back to
//! the same `f64`. Missing values (non-finite) are written as empty
//! cells. Every file is written to a temporary sibling and renamed into
//! place.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::kinematics::Trajectory;
use crate::model::{CapabilityRequirements, Endowments};

/// Shortest round-trip decimal; empty for non-finite values.
pub fn format_number(v: f64) -> String {
    if v.is_finite() {
        format!("{v}")
    } else {
        String::new()
    }
}

/// Write `bytes` to `path` through a temporary file in the same directory.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d.to_path_buf(),
        _ => PathBuf::from("."),
    };
    fs::create_dir_all(&dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(&dir)?;
    tmp.write_all(bytes)?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

/// Matrix with row and column labels as read from or written to CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledMatrix {
    /// Header of the label column, e.g. `activity` or `economy`.
    pub corner: String,
    pub row_labels: Vec<String>,
    pub col_labels: Vec<String>,
    pub values: DMatrix<f64>,
}

impl LabeledMatrix {
    /// Labels `{row_prefix}{i}` and `{col_prefix}{j}`.
    pub fn with_default_labels(
        corner: &str,
        row_prefix: &str,
        col_prefix: &str,
        values: DMatrix<f64>,
    ) -> Self {
        Self {
            corner: corner.to_string(),
            row_labels: (0..values.nrows())
                .map(|i| format!("{row_prefix}{i}"))
                .collect(),
            col_labels: (0..values.ncols())
                .map(|j| format!("{col_prefix}{j}"))
                .collect(),
            values,
        }
    }

    pub fn requirements(&self) -> Result<CapabilityRequirements> {
        CapabilityRequirements::new(self.values.clone())
    }

    pub fn endowments(&self) -> Result<Endowments> {
        Endowments::new(self.values.clone())
    }

    pub fn to_csv(&self) -> Result<Vec<u8>> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(std::iter::once(&self.corner).chain(&self.col_labels))?;
        for (i, label) in self.row_labels.iter().enumerate() {
            let cells = (0..self.values.ncols()).map(|j| format_number(self.values[(i, j)]));
            w.write_record(std::iter::once(label.clone()).chain(cells))?;
        }
        w.into_inner().map_err(|e| Error::Io(e.into_error()))
    }
}

/// Parse a labeled numeric CSV without domain checks.
pub fn read_matrix(path: &Path) -> Result<LabeledMatrix> {
    let parse_err = |line: usize, column: usize, message: String| Error::Parse {
        path: path.to_path_buf(),
        line,
        column,
        message,
    };
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_path(path)?;
    let header = reader.headers()?.clone();
    if header.len() < 2 {
        return Err(parse_err(
            1,
            1,
            "need a label column and at least one data column".into(),
        ));
    }
    let corner = header[0].trim().to_string();
    let col_labels: Vec<String> = header
        .iter()
        .skip(1)
        .map(|s| s.trim().to_string())
        .collect();
    let mut row_labels = Vec::new();
    let mut data = Vec::new();
    for record in reader.records() {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        if record.len() != header.len() {
            return Err(parse_err(
                line,
                record.len().min(header.len()) + 1,
                format!("expected {} fields, found {}", header.len(), record.len()),
            ));
        }
        row_labels.push(record[0].trim().to_string());
        for (j, field) in record.iter().enumerate().skip(1) {
            let v: f64 = field
                .trim()
                .parse()
                .map_err(|_| parse_err(line, j + 1, format!("not a number: `{field}`")))?;
            data.push(v);
        }
    }
    let values = DMatrix::from_row_slice(row_labels.len(), col_labels.len(), &data);
    Ok(LabeledMatrix {
        corner,
        row_labels,
        col_labels,
        values,
    })
}

/// Parse a labeled probability matrix, rejecting entries outside `[0, 1]`.
pub fn load_matrix(path: &Path) -> Result<LabeledMatrix> {
    let m = read_matrix(path)?;
    let mut bad = Vec::new();
    for i in 0..m.values.nrows() {
        for j in 0..m.values.ncols() {
            let v = m.values[(i, j)];
            if !(0.0..=1.0).contains(&v) {
                bad.push(format!(
                    "row `{}`, column `{}` (line {}, field {}) = {v}",
                    m.row_labels[i],
                    m.col_labels[j],
                    i + 2,
                    j + 2
                ));
            }
        }
    }
    if bad.is_empty() {
        Ok(m)
    } else {
        Err(Error::DomainViolation {
            path: path.to_path_buf(),
            cells: bad,
        })
    }
}

pub fn save_matrix(path: &Path, m: &LabeledMatrix) -> Result<()> {
    write_atomic(path, &m.to_csv()?)
}

/// Column-oriented numeric table.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(columns: Vec<String>) -> Self {
        Self {
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let j = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[j]).collect())
    }

    pub fn to_csv(&self) -> Result<Vec<u8>> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|&v| format_number(v)))?;
        }
        w.into_inner().map_err(|e| Error::Io(e.into_error()))
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        write_atomic(path, &self.to_csv()?)
    }

    /// Read a table written by [`Table::write_csv`]; empty cells become NaN.
    pub fn read_csv(path: &Path) -> Result<Self> {
        let mut reader = csv::Reader::from_path(path)?;
        let columns = reader.headers()?.iter().map(str::to_string).collect();
        let mut rows = Vec::new();
        for record in reader.records() {
            let record = record?;
            let line = record.position().map_or(0, |p| p.line() as usize);
            let row = record
                .iter()
                .enumerate()
                .map(|(j, f)| {
                    if f.is_empty() {
                        Ok(f64::NAN)
                    } else {
                        f.parse().map_err(|_| Error::Parse {
                            path: path.to_path_buf(),
                            line,
                            column: j + 1,
                            message: format!("not a number: `{f}`"),
                        })
                    }
                })
                .collect::<Result<Vec<f64>>>()?;
            rows.push(row);
        }
        Ok(Self { columns, rows })
    }
}

impl From<&Trajectory> for Table {
    /// Columns `t` followed by one column per series.
    fn from(traj: &Trajectory) -> Self {
        let mut columns = vec!["t".to_string()];
        columns.extend(traj.series.iter().map(|s| s.name.clone()));
        let rows = traj
            .times
            .iter()
            .enumerate()
            .map(|(i, &t)| {
                std::iter::once(t)
                    .chain(traj.series.iter().map(|s| s.values[i]))
                    .collect()
            })
            .collect();
        Table { columns, rows }
    }
}

pub fn write_trajectory(path: &Path, traj: &Trajectory) -> Result<()> {
    Table::from(traj).write_csv(path)
}

const PALETTE: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf",
];

/// Line chart of every non-`x` column of `table` against column `x`.
pub fn line_chart_svg(table: &Table, x: &str, title: &str) -> Result<String> {
    let xj = table
        .columns
        .iter()
        .position(|c| c == x)
        .ok_or_else(|| Error::InvalidArgument(format!("no column `{x}`")))?;
    let (width, height, margin) = (640.0, 420.0, 50.0);
    let finite = |v: &f64| v.is_finite();
    let xs: Vec<f64> = table.rows.iter().map(|r| r[xj]).collect();
    let ys: Vec<f64> = table
        .rows
        .iter()
        .flat_map(|r| {
            r.iter()
                .enumerate()
                .filter(|(j, _)| *j != xj)
                .map(|(_, v)| *v)
        })
        .filter(finite)
        .collect();
    let bounds = |v: &[f64]| {
        let lo = v
            .iter()
            .cloned()
            .filter(finite)
            .fold(f64::INFINITY, f64::min);
        let hi = v
            .iter()
            .cloned()
            .filter(finite)
            .fold(f64::NEG_INFINITY, f64::max);
        if !lo.is_finite() {
            (0.0, 1.0)
        } else if hi > lo {
            (lo, hi)
        } else {
            (lo - 0.5, hi + 0.5)
        }
    };
    let (x0, x1) = bounds(&xs);
    let (y0, y1) = bounds(&ys);
    let sx = |v: f64| margin + (v - x0) / (x1 - x0) * (width - 2.0 * margin);
    let sy = |v: f64| height - margin - (v - y0) / (y1 - y0) * (height - 2.0 * margin);

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="20" text-anchor="middle" font-family="sans-serif" font-size="14">{}</text>"#,
        width / 2.0,
        escape(title)
    );
    let _ = writeln!(
        svg,
        r#"<path d="M{m} {m} V{b} H{r}" fill="none" stroke="black"/>"#,
        m = margin,
        b = height - margin,
        r = width - margin
    );
    for (label, px, py, anchor) in [
        (format!("{x0:.3}"), margin, height - margin + 16.0, "start"),
        (
            format!("{x1:.3}"),
            width - margin,
            height - margin + 16.0,
            "end",
        ),
        (format!("{y0:.3}"), margin - 4.0, height - margin, "end"),
        (format!("{y1:.3}"), margin - 4.0, margin + 4.0, "end"),
        (escape(x), width / 2.0, height - 12.0, "middle"),
    ] {
        let _ = writeln!(
            svg,
            r#"<text x="{px}" y="{py}" text-anchor="{anchor}" font-family="sans-serif" font-size="11">{label}</text>"#
        );
    }
    let mut k = 0;
    for (j, name) in table.columns.iter().enumerate() {
        if j == xj {
            continue;
        }
        let color = PALETTE[k % PALETTE.len()];
        let points: Vec<String> = table
            .rows
            .iter()
            .filter(|r| r[xj].is_finite() && r[j].is_finite())
            .map(|r| format!("{:.2},{:.2}", sx(r[xj]), sy(r[j])))
            .collect();
        let _ = writeln!(
            svg,
            r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
            points.join(" ")
        );
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="{}" font-family="sans-serif" font-size="11" fill="{color}">{}</text>"#,
            width - margin - 150.0,
            margin + 14.0 * k as f64,
            escape(name)
        );
        k += 1;
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}
