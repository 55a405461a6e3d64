//! Two-column `node,value` CSV with a one-line `# kind=<kind> tol=<tol>` header.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

pub fn write_two_column(
    path: &Path,
    kind: &str,
    tol: f64,
    nodes: &[f64],
    values: &[f64],
) -> Result<()> {
    if nodes.len() != values.len() {
        return Err(Error::invalid(format!(
            "column lengths differ: {} nodes, {} values",
            nodes.len(),
            values.len()
        )));
    }
    let mut out = String::with_capacity(32 * (nodes.len() + 1));
    let _ = writeln!(out, "# kind={kind} tol={tol:e}");
    for (x, y) in nodes.iter().zip(values) {
        let _ = writeln!(out, "{x:e},{y:e}");
    }
    fs::write(path, out).map_err(|e| Error::io(path, e))
}

/// Returns `(kind, tol, nodes, values)`. A missing header is tolerated
/// (kind `""`, tol `NaN`) so that hand-written profile files load too.
pub fn read_two_column(path: &Path) -> Result<(String, f64, Vec<f64>, Vec<f64>)> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_two_column(&text).map_err(|msg| Error::Config {
        path: path.display().to_string(),
        msg,
    })
}

fn parse_two_column(text: &str) -> std::result::Result<(String, f64, Vec<f64>, Vec<f64>), String> {
    let mut kind = String::new();
    let mut tol = f64::NAN;
    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(header) = line.strip_prefix('#') {
            for field in header.split_whitespace() {
                if let Some(v) = field.strip_prefix("kind=") {
                    kind = v.to_string();
                } else if let Some(v) = field.strip_prefix("tol=") {
                    tol = v.parse().map_err(|_| format!("line {}: bad tol {v:?}", lineno + 1))?;
                }
            }
            continue;
        }
        let mut cols = line.split(',');
        let parse = |c: Option<&str>| -> std::result::Result<f64, String> {
            let c = c.ok_or_else(|| format!("line {}: expected two columns", lineno + 1))?;
            c.trim()
                .parse::<f64>()
                .map_err(|_| format!("line {}: not a number: {:?}", lineno + 1, c.trim()))
        };
        let x = match parse(cols.next()) {
            Ok(x) => x,
            // tolerate a plain column-name header row
            Err(_) if xs.is_empty() => continue,
            Err(e) => return Err(e),
        };
        let y = parse(cols.next())?;
        if cols.next().is_some() {
            return Err(format!("line {}: more than two columns", lineno + 1));
        }
        xs.push(x);
        ys.push(y);
    }
    Ok((kind, tol, xs, ys))
}
