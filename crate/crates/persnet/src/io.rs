//! File formats: matrix CSV, price CSV, the dynamic-network directory
//! layout with its `network.json` metadata, series CSV, and JSON output.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use ndarray::Array2;
use serde::{Deserialize, Serialize};

use crate::graph::WeightedMatrix;
use crate::pipeline::DynamicNetwork;
use crate::{Error, Result};

fn parse_error(path: &Path, line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path.display().to_string(),
        line,
        column,
        message: message.into(),
    }
}

fn parse_cell(path: &Path, line: usize, column: usize, token: &str) -> Result<f64> {
    token.trim().parse::<f64>().map_err(|_| {
        parse_error(
            path,
            line,
            column,
            format!("expected a number, got '{token}'"),
        )
    })
}

/// Reads a square matrix of comma-separated values. A single header row is
/// skipped when its first token is not numeric.
pub fn read_matrix_csv(path: &Path) -> Result<Array2<f64>> {
    let text = fs::read_to_string(path)?;
    parse_matrix_csv(&text, path)
}

/// Parses matrix CSV text; `path` labels parse errors.
pub fn parse_matrix_csv(text: &str, path: &Path) -> Result<Array2<f64>> {
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut width = None;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        if raw.trim().is_empty() {
            continue;
        }
        let first = raw.split(',').next().unwrap_or("");
        if rows.is_empty() && width.is_none() && first.trim().parse::<f64>().is_err() {
            width = Some(raw.split(',').count());
            continue;
        }
        let row = raw
            .split(',')
            .enumerate()
            .map(|(col, token)| parse_cell(path, line_no, col + 1, token))
            .collect::<Result<Vec<f64>>>()?;
        match width {
            None => width = Some(row.len()),
            Some(w) if w != row.len() => {
                return Err(parse_error(
                    path,
                    line_no,
                    1,
                    format!("row has {} values, expected {w}", row.len()),
                ));
            }
            Some(_) => {}
        }
        rows.push(row);
    }
    let n = rows.len();
    if n == 0 {
        return Err(parse_error(path, 1, 1, "file contains no data rows"));
    }
    if rows[0].len() != n {
        return Err(parse_error(
            path,
            1,
            1,
            format!(
                "matrix is {n} rows by {} columns, must be square",
                rows[0].len()
            ),
        ));
    }
    Ok(Array2::from_shape_fn((n, n), |(i, j)| rows[i][j]))
}

/// Writes a matrix as comma-separated rows, full precision, no header.
pub fn write_matrix_csv(path: &Path, matrix: &WeightedMatrix) -> Result<()> {
    let entries = matrix.entries();
    let mut out = String::new();
    for row in entries.rows() {
        let mut first = true;
        for v in row {
            if !first {
                out.push(',');
            }
            write!(out, "{v}").expect("writing to a string");
            first = false;
        }
        out.push('\n');
    }
    fs::write(path, out)?;
    Ok(())
}

/// A parsed price CSV: dates ascending, one column of prices per asset.
#[derive(Debug, Clone)]
pub struct PriceTable {
    pub dates: Vec<String>,
    pub names: Vec<String>,
    /// k dates by n assets.
    pub prices: Array2<f64>,
}

fn looks_like_iso_date(token: &str) -> bool {
    let bytes = token.as_bytes();
    bytes.len() == 10
        && bytes[4] == b'-'
        && bytes[7] == b'-'
        && bytes
            .iter()
            .enumerate()
            .all(|(i, b)| matches!(i, 4 | 7) || b.is_ascii_digit())
}

/// Reads a price CSV with header `date,NAME1,...`; rows must carry
/// ISO-8601 dates in strictly ascending order.
pub fn read_price_csv(path: &Path) -> Result<PriceTable> {
    let text = fs::read_to_string(path)?;
    let mut lines = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty());

    let (header_idx, header) = lines
        .next()
        .ok_or_else(|| parse_error(path, 1, 1, "file is empty"))?;
    let mut fields = header.split(',');
    let date_field = fields.next().unwrap_or("").trim();
    if !date_field.eq_ignore_ascii_case("date") {
        return Err(parse_error(
            path,
            header_idx + 1,
            1,
            format!("header must start with 'date', got '{date_field}'"),
        ));
    }
    let names: Vec<String> = fields.map(|f| f.trim().to_string()).collect();
    if names.is_empty() || names.iter().any(String::is_empty) {
        return Err(parse_error(
            path,
            header_idx + 1,
            2,
            "header must name at least one asset, with no empty names",
        ));
    }

    let mut dates = Vec::new();
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (idx, raw) in lines {
        let line_no = idx + 1;
        let mut fields = raw.split(',');
        let date = fields.next().unwrap_or("").trim().to_string();
        if !looks_like_iso_date(&date) {
            return Err(parse_error(
                path,
                line_no,
                1,
                format!("expected an ISO-8601 date (YYYY-MM-DD), got '{date}'"),
            ));
        }
        if let Some(prev) = dates.last() {
            if *prev >= date {
                return Err(parse_error(
                    path,
                    line_no,
                    1,
                    format!("date {date} does not ascend past {prev}"),
                ));
            }
        }
        let row = fields
            .enumerate()
            .map(|(col, token)| parse_cell(path, line_no, col + 2, token))
            .collect::<Result<Vec<f64>>>()?;
        if row.len() != names.len() {
            return Err(parse_error(
                path,
                line_no,
                1,
                format!("row has {} prices, expected {}", row.len(), names.len()),
            ));
        }
        dates.push(date);
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(parse_error(
            path,
            header_idx + 1,
            1,
            "no price rows after the header",
        ));
    }
    let shape = (rows.len(), names.len());
    let prices = Array2::from_shape_fn(shape, |(i, j)| rows[i][j]);
    Ok(PriceTable {
        dates,
        names,
        prices,
    })
}

/// Writes a price CSV in the format [`read_price_csv`] accepts.
pub fn write_price_csv(path: &Path, table: &PriceTable) -> Result<()> {
    let mut out = String::from("date");
    for name in &table.names {
        write!(out, ",{name}").expect("writing to a string");
    }
    out.push('\n');
    for (i, date) in table.dates.iter().enumerate() {
        out.push_str(date);
        for v in table.prices.row(i) {
            write!(out, ",{v}").expect("writing to a string");
        }
        out.push('\n');
    }
    fs::write(path, out)?;
    Ok(())
}

/// Sidecar metadata for a dynamic-network directory.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NetworkMeta {
    pub n: usize,
    pub cap: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub experiment: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub times: Option<Vec<usize>>,
}

const META_FILE: &str = "network.json";
const LABELS_FILE: &str = "labels.txt";

fn snapshot_files(dir: &Path) -> Result<Vec<(usize, PathBuf)>> {
    let mut files = Vec::new();
    for entry in fs::read_dir(dir)? {
        let entry = entry?;
        let name = entry.file_name();
        let Some(name) = name.to_str() else { continue };
        let Some(index) = name
            .strip_prefix("t_")
            .and_then(|rest| rest.strip_suffix(".csv"))
        else {
            continue;
        };
        if index.is_empty() || !index.bytes().all(|b| b.is_ascii_digit()) {
            continue;
        }
        let index: usize = index.parse().map_err(|_| {
            Error::InvalidInput(format!("snapshot index in '{name}' is out of range"))
        })?;
        files.push((index, entry.path()));
    }
    files.sort_by_key(|(index, _)| *index);
    for pair in files.windows(2) {
        if pair[0].0 == pair[1].0 {
            return Err(Error::InvalidInput(format!(
                "duplicate snapshot index {} in {}",
                pair[0].0,
                dir.display()
            )));
        }
    }
    if files.is_empty() {
        return Err(Error::InvalidInput(format!(
            "no t_<index>.csv files in {}",
            dir.display()
        )));
    }
    Ok(files)
}

/// Reads a dynamic network from a directory of `t_<index>.csv` matrices,
/// optional `labels.txt`, and optional `network.json`.
///
/// File indices order the snapshots; the time axis is their position. The
/// cap is taken from `cap_override`, else the metadata, else the largest
/// finite entry found (1.0 when there is none); larger entries become
/// absent edges.
pub fn read_network_dir(dir: &Path, cap_override: Option<f64>) -> Result<DynamicNetwork> {
    let meta: Option<NetworkMeta> = {
        let meta_path = dir.join(META_FILE);
        if meta_path.exists() {
            let text = fs::read_to_string(&meta_path)?;
            Some(
                serde_json::from_str(&text)
                    .map_err(|e| parse_error(&meta_path, e.line(), e.column(), e.to_string()))?,
            )
        } else {
            None
        }
    };

    let raw: Vec<Array2<f64>> = snapshot_files(dir)?
        .into_iter()
        .map(|(_, path)| read_matrix_csv(&path))
        .collect::<Result<Vec<_>>>()?;

    let cap = cap_override
        .or(meta.as_ref().map(|m| m.cap))
        .unwrap_or_else(|| {
            let max = raw
                .iter()
                .flat_map(|m| m.iter())
                .copied()
                .filter(|v| v.is_finite())
                .fold(0.0, f64::max);
            if max > 0.0 {
                max
            } else {
                1.0
            }
        });

    let matrices = raw
        .into_iter()
        .map(|entries| WeightedMatrix::new(entries, cap))
        .collect::<Result<Vec<_>>>()?;

    let labels_path = dir.join(LABELS_FILE);
    let node_labels = if labels_path.exists() {
        let text = fs::read_to_string(&labels_path)?;
        let labels: Vec<String> = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty())
            .map(str::to_string)
            .collect();
        Some(labels)
    } else {
        None
    };

    if let Some(meta) = &meta {
        if meta.n != matrices[0].n() {
            return Err(Error::DimensionMismatch {
                expected: meta.n,
                actual: matrices[0].n(),
            });
        }
    }
    DynamicNetwork::new(matrices, node_labels)
}

/// Writes `net` as the directory layout [`read_network_dir`] accepts,
/// carrying `experiment` and `seed` into the metadata when given.
pub fn write_network_dir(
    dir: &Path,
    net: &DynamicNetwork,
    experiment: Option<String>,
    seed: Option<u64>,
) -> Result<()> {
    fs::create_dir_all(dir)?;
    let width = digits(net.len().saturating_sub(1)).max(3);
    for (t, matrix) in net.matrices().iter().enumerate() {
        write_matrix_csv(&dir.join(format!("t_{t:0width$}.csv")), matrix)?;
    }
    if let Some(labels) = net.node_labels() {
        fs::write(dir.join(LABELS_FILE), labels.join("\n") + "\n")?;
    }
    let meta = NetworkMeta {
        n: net.n(),
        cap: net.cap(),
        experiment,
        seed,
        times: Some(net.times().to_vec()),
    };
    write_json(&dir.join(META_FILE), &meta)
}

fn digits(mut v: usize) -> usize {
    let mut d = 1;
    while v >= 10 {
        v /= 10;
        d += 1;
    }
    d
}

/// Writes a distance series as `t,wasserstein` rows.
pub fn write_series_csv(path: &Path, times: &[usize], values: &[f64]) -> Result<()> {
    if times.len() != values.len() {
        return Err(Error::DimensionMismatch {
            expected: times.len(),
            actual: values.len(),
        });
    }
    let mut out = String::from("t,wasserstein\n");
    for (t, v) in times.iter().zip(values) {
        writeln!(out, "{t},{v}").expect("writing to a string");
    }
    fs::write(path, out)?;
    Ok(())
}

/// Reads a series CSV written by [`write_series_csv`].
pub fn read_series_csv(path: &Path) -> Result<(Vec<usize>, Vec<f64>)> {
    let text = fs::read_to_string(path)?;
    let mut times = Vec::new();
    let mut values = Vec::new();
    for (idx, raw) in text.lines().enumerate().skip(1) {
        if raw.trim().is_empty() {
            continue;
        }
        let line_no = idx + 1;
        let mut fields = raw.split(',');
        let t = fields
            .next()
            .unwrap_or("")
            .trim()
            .parse::<usize>()
            .map_err(|_| parse_error(path, line_no, 1, "expected a time index"))?;
        let v = parse_cell(path, line_no, 2, fields.next().unwrap_or(""))?;
        times.push(t);
        values.push(v);
    }
    Ok((times, values))
}

/// Serializes `value` as pretty-printed JSON.
pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value)
        .map_err(|e| Error::InvalidInput(format!("serialization failed: {e}")))?;
    fs::write(path, text + "\n")?;
    Ok(())
}
