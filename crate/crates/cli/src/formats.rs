//! File formats: CSV for bulk numerics, JSON for configs and reports.
//!
//! All numeric CSV output uses Rust's shortest-round-trip `f64` formatting,
//! so a save/load cycle reproduces values bit-for-bit. Files are UTF-8 with
//! LF line endings. Datasets with planted provenance get a sibling
//! `<stem>.planted.csv` carrying the activation label and teacher weights.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use shallow_landscape::activations::Activation;
use shallow_landscape::landscape::{ExperimentTable, LogisticFit, SweepRow};
use shallow_landscape::linalg::Matrix;
use shallow_landscape::network::{Dataset, NetworkParams, Planted};
use shallow_landscape::optimizer::{InitKind, RunClassification, TrialRecord};

#[derive(Debug)]
pub enum FormatError {
    Io(io::Error),
    /// Malformed content; carries the 1-based line number.
    Parse { path: PathBuf, line: usize, msg: String },
    Domain(String),
    /// Output exists and `--force` was not given.
    WouldOverwrite(PathBuf),
}

impl std::fmt::Display for FormatError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FormatError::Io(e) => write!(f, "{e}"),
            FormatError::Parse { path, line, msg } => {
                write!(f, "{}:{line}: {msg}", path.display())
            }
            FormatError::Domain(msg) => write!(f, "{msg}"),
            FormatError::WouldOverwrite(path) => {
                write!(f, "refusing to overwrite {} (pass --force)", path.display())
            }
        }
    }
}

impl std::error::Error for FormatError {}

impl From<io::Error> for FormatError {
    fn from(e: io::Error) -> Self {
        FormatError::Io(e)
    }
}

/// Write `content`, refusing to clobber existing files unless forced.
pub fn write_output(path: &Path, content: &str, force: bool) -> Result<(), FormatError> {
    if path.exists() && !force {
        return Err(FormatError::WouldOverwrite(path.to_path_buf()));
    }
    fs::write(path, content)?;
    Ok(())
}

fn parse_f64(path: &Path, line_no: usize, tok: &str) -> Result<f64, FormatError> {
    tok.trim().parse::<f64>().map_err(|_| FormatError::Parse {
        path: path.to_path_buf(),
        line: line_no,
        msg: format!("expected a number, got '{}'", tok.trim()),
    })
}

fn parse_usize(path: &Path, line_no: usize, tok: &str) -> Result<usize, FormatError> {
    tok.trim().parse::<usize>().map_err(|_| FormatError::Parse {
        path: path.to_path_buf(),
        line: line_no,
        msg: format!("expected a count, got '{}'", tok.trim()),
    })
}

/// One row per line, comma separated, no header.
pub fn matrix_to_csv(m: &Matrix) -> String {
    let mut out = String::new();
    for i in 0..m.rows() {
        let row = m.row(i);
        for (j, x) in row.iter().enumerate() {
            if j > 0 {
                out.push(',');
            }
            let _ = write!(out, "{x}");
        }
        out.push('\n');
    }
    out
}

pub fn matrix_from_csv_lines(
    path: &Path,
    lines: &[(usize, &str)],
) -> Result<Matrix, FormatError> {
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (line_no, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let row: Vec<f64> = line
            .split(',')
            .map(|tok| parse_f64(path, *line_no, tok))
            .collect::<Result<_, _>>()?;
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(FormatError::Parse {
            path: path.to_path_buf(),
            line: lines.first().map(|l| l.0).unwrap_or(1),
            msg: "empty matrix".into(),
        });
    }
    Matrix::from_rows(&rows).map_err(|e| FormatError::Domain(e.to_string()))
}

/// `k,d` header, then the output weights on one line, then the rows of `W`.
pub fn params_to_csv(params: &NetworkParams) -> String {
    let mut out = format!("{},{}\n", params.k(), params.d());
    for (j, x) in params.v().iter().enumerate() {
        if j > 0 {
            out.push(',');
        }
        let _ = write!(out, "{x}");
    }
    out.push('\n');
    out.push_str(&matrix_to_csv(params.w()));
    out
}

pub fn params_from_str(path: &Path, content: &str, offset: usize) -> Result<NetworkParams, FormatError> {
    let lines: Vec<(usize, &str)> = content
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1 + offset, l))
        .filter(|(_, l)| !l.trim().is_empty())
        .collect();
    if lines.len() < 3 {
        return Err(FormatError::Parse {
            path: path.to_path_buf(),
            line: offset + 1,
            msg: "weights file needs a k,d header, a v line, and W rows".into(),
        });
    }
    let (hdr_no, hdr) = lines[0];
    let mut parts = hdr.split(',');
    let k = parse_usize(path, hdr_no, parts.next().unwrap_or(""))?;
    let d = parse_usize(path, hdr_no, parts.next().unwrap_or(""))?;
    let (v_no, v_line) = lines[1];
    let v: Vec<f64> =
        v_line.split(',').map(|tok| parse_f64(path, v_no, tok)).collect::<Result<_, _>>()?;
    if v.len() != k {
        return Err(FormatError::Parse {
            path: path.to_path_buf(),
            line: v_no,
            msg: format!("expected {k} output weights, got {}", v.len()),
        });
    }
    if lines.len() != 2 + k {
        return Err(FormatError::Parse {
            path: path.to_path_buf(),
            line: lines.last().unwrap().0,
            msg: format!("expected {k} weight rows, got {}", lines.len() - 2),
        });
    }
    let w = matrix_from_csv_lines(path, &lines[2..])?;
    if w.rows() != k || w.cols() != d {
        return Err(FormatError::Parse {
            path: path.to_path_buf(),
            line: lines[2].0,
            msg: format!("W is {}x{}, header says {k}x{d}", w.rows(), w.cols()),
        });
    }
    NetworkParams::new(v, w).map_err(|e| FormatError::Domain(e.to_string()))
}

pub fn save_params(path: &Path, params: &NetworkParams, force: bool) -> Result<(), FormatError> {
    write_output(path, &params_to_csv(params), force)
}

pub fn load_params(path: &Path) -> Result<NetworkParams, FormatError> {
    let content = fs::read_to_string(path)?;
    params_from_str(path, &content, 0)
}

/// Sibling path holding planted provenance for a dataset file.
pub fn planted_sibling(path: &Path) -> PathBuf {
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("dataset");
    path.with_file_name(format!("{stem}.planted.csv"))
}

/// Dataset CSV: `d,n,k_planted_or_0` header, the `d` rows of `X`, then the
/// label line. Teacher weights go to the planted sibling file.
pub fn save_dataset(path: &Path, data: &Dataset, force: bool) -> Result<(), FormatError> {
    let k_planted = data.planted().map(|p| p.params.k()).unwrap_or(0);
    let mut out = format!("{},{},{}\n", data.d(), data.n(), k_planted);
    out.push_str(&matrix_to_csv(data.x()));
    for (j, y) in data.y().iter().enumerate() {
        if j > 0 {
            out.push(',');
        }
        let _ = write!(out, "{y}");
    }
    out.push('\n');
    write_output(path, &out, force)?;
    if let Some(planted) = data.planted() {
        let mut sibling = format!("activation,{}\n", planted.activation.label());
        sibling.push_str(&params_to_csv(&planted.params));
        write_output(&planted_sibling(path), &sibling, force)?;
    }
    Ok(())
}

pub fn load_dataset(path: &Path) -> Result<Dataset, FormatError> {
    let content = fs::read_to_string(path)?;
    let lines: Vec<(usize, &str)> = content
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| !l.trim().is_empty())
        .collect();
    if lines.is_empty() {
        return Err(FormatError::Parse { path: path.to_path_buf(), line: 1, msg: "empty file".into() });
    }
    let (hdr_no, hdr) = lines[0];
    let mut parts = hdr.split(',');
    let d = parse_usize(path, hdr_no, parts.next().unwrap_or(""))?;
    let n = parse_usize(path, hdr_no, parts.next().unwrap_or(""))?;
    let k_planted = parse_usize(path, hdr_no, parts.next().unwrap_or(""))?;
    if lines.len() != 1 + d + 1 {
        return Err(FormatError::Parse {
            path: path.to_path_buf(),
            line: lines.last().unwrap().0,
            msg: format!("expected {d} input rows plus a label line, got {} lines", lines.len() - 1),
        });
    }
    let x = matrix_from_csv_lines(path, &lines[1..1 + d])?;
    if x.cols() != n {
        return Err(FormatError::Parse {
            path: path.to_path_buf(),
            line: lines[1].0,
            msg: format!("expected {n} columns, got {}", x.cols()),
        });
    }
    let (y_no, y_line) = lines[1 + d];
    let y: Vec<f64> =
        y_line.split(',').map(|tok| parse_f64(path, y_no, tok)).collect::<Result<_, _>>()?;
    let mut data = Dataset::new(x, y).map_err(|e| FormatError::Domain(e.to_string()))?;
    if k_planted > 0 {
        let sibling = planted_sibling(path);
        let sib_content = fs::read_to_string(&sibling)?;
        let mut sib_lines = sib_content.lines();
        let first = sib_lines.next().unwrap_or("");
        let label = first.strip_prefix("activation,").ok_or_else(|| FormatError::Parse {
            path: sibling.clone(),
            line: 1,
            msg: "missing 'activation,<label>' header".into(),
        })?;
        let activation = Activation::parse(label.trim())
            .map_err(|e| FormatError::Parse { path: sibling.clone(), line: 1, msg: e.to_string() })?;
        let rest: String = sib_content.lines().skip(1).collect::<Vec<_>>().join("\n");
        let params = params_from_str(&sibling, &rest, 1)?;
        data = data
            .with_planted(Planted { params, activation })
            .map_err(|e| FormatError::Domain(e.to_string()))?;
    }
    Ok(data)
}

/// Sweep results CSV with the `param,successes,trials,probability` header.
pub fn table_to_csv(table: &ExperimentTable) -> String {
    let mut out = String::from("param,successes,trials,probability\n");
    for row in &table.rows {
        let _ = writeln!(out, "{},{},{},{}", row.param, row.successes, row.trials, row.probability());
    }
    out
}

pub fn table_from_csv(path: &Path, content: &str) -> Result<ExperimentTable, FormatError> {
    let mut rows = Vec::new();
    for (i, line) in content.lines().enumerate() {
        let line_no = i + 1;
        if line.trim().is_empty() || (i == 0 && line.starts_with("param")) {
            continue;
        }
        let toks: Vec<&str> = line.split(',').collect();
        if toks.len() < 3 {
            return Err(FormatError::Parse {
                path: path.to_path_buf(),
                line: line_no,
                msg: "expected param,successes,trials[,probability]".into(),
            });
        }
        rows.push(SweepRow {
            param: parse_usize(path, line_no, toks[0])?,
            successes: parse_usize(path, line_no, toks[1])? as u64,
            trials: parse_usize(path, line_no, toks[2])? as u64,
        });
    }
    if rows.is_empty() {
        return Err(FormatError::Parse { path: path.to_path_buf(), line: 1, msg: "no data rows".into() });
    }
    Ok(ExperimentTable { rows, logistic: None })
}

/// Fit report JSON.
pub fn fit_to_json(fit: &LogisticFit) -> String {
    let crossing = match fit.crossing {
        Some(c) => format!("{c}"),
        None => "null".into(),
    };
    format!(
        "{{\"intercept\":{},\"slope\":{},\"crossing\":{},\"flags\":{{\"separation\":{},\"ridge_used\":{},\"no_crossing\":{}}}}}\n",
        fit.intercept, fit.slope, crossing, fit.flags.separation, fit.flags.ridge_used, fit.flags.no_crossing
    )
}

/// Gnuplot-friendly `.dat`: sweep parameter, empirical probability, and the
/// fitted curve (blank when no fit).
pub fn table_to_dat(table: &ExperimentTable) -> String {
    let mut out = String::from("# param probability fitted\n");
    for row in &table.rows {
        let fitted = table
            .logistic
            .as_ref()
            .map(|fit| {
                let eta = fit.intercept + fit.slope * row.param as f64;
                format!("{}", 1.0 / (1.0 + (-eta).exp()))
            })
            .unwrap_or_else(|| "nan".into());
        let _ = writeln!(out, "{} {} {}", row.param, row.probability(), fitted);
    }
    out
}

/// RMSE traces as a `.dat` block per width, gnuplot `index`-addressable.
pub fn rmse_traces_to_dat(traces: &[shallow_landscape::landscape::RmseTrace]) -> String {
    let mut out = String::new();
    for trace in traces {
        let _ = writeln!(out, "# k = {}", trace.k);
        for (iter, rmse) in &trace.trace {
            let _ = writeln!(out, "{iter} {rmse}");
        }
        out.push_str("\n\n");
    }
    out
}

fn classification_label(c: RunClassification) -> &'static str {
    match c {
        RunClassification::Global => "global",
        RunClassification::ApproxLocalMin => "approx_local_min",
        RunClassification::SaddleWithNegCurv => "saddle_with_neg_curv",
        RunClassification::BudgetExhausted => "budget_exhausted",
    }
}

fn init_kind_label(k: InitKind) -> &'static str {
    match k {
        InitKind::Random => "random",
        InitKind::NearPlanted => "near_planted",
        InitKind::Custom => "custom",
    }
}

/// One JSON line per trial record.
pub fn trial_record_to_jsonl(record: &TrialRecord) -> String {
    format!(
        "{{\"seed\":{},\"init_kind\":\"{}\",\"final_loss\":{},\"iters_used\":{},\"reached_global\":{},\"classification\":\"{}\",\"final_step\":{},\"trace_points\":{}}}\n",
        record.seed,
        init_kind_label(record.init_kind),
        record.final_loss,
        record.iters_used,
        record.reached_global,
        classification_label(record.classification),
        record.final_step,
        record.loss_trace.len()
    )
}

/// Loss trace CSV: `iter,loss`.
pub fn trace_to_csv(record: &TrialRecord) -> String {
    let mut out = String::from("iter,loss\n");
    for (iter, loss) in &record.loss_trace {
        let _ = writeln!(out, "{iter},{loss}");
    }
    out
}
