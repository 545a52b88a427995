use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::spectral::Signal;

/// Reads one value per line, or one column of a CSV.
///
/// Blank lines and lines starting with `#` are skipped. The first remaining
/// line may be a header; then the column named `signal` or `value` is used, or
/// the only column if there is just one. Files written by the generator can be
/// read back this way. Odd lengths are rejected unless `allow_truncate`, which
/// drops the last sample.
pub fn load_samples(path: impl AsRef<Path>, sample_rate: f64, allow_truncate: bool) -> Result<Signal> {
    let text = fs::read_to_string(path.as_ref())?;
    let mut column = None;
    let mut samples = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if samples.is_empty() && column.is_none() && fields.iter().any(|f| f.parse::<f64>().is_err()) {
            column = Some(header_column(&fields, line_no)?);
            continue;
        }
        let col = match column {
            Some(c) => c,
            None if fields.len() == 1 => 0,
            None => {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("{} columns without a header naming 'signal' or 'value'", fields.len()),
                })
            }
        };
        column.get_or_insert(col);
        let field = fields.get(col).ok_or_else(|| Error::Parse {
            line: line_no,
            message: format!("missing column {}", col + 1),
        })?;
        let value: f64 = field
            .parse()
            .map_err(|_| Error::Parse { line: line_no, message: format!("not a number: '{field}'") })?;
        if !value.is_finite() {
            return Err(Error::Parse { line: line_no, message: format!("non-finite value '{field}'") });
        }
        samples.push(value);
    }
    if samples.len() % 2 != 0 {
        if !allow_truncate {
            return Err(Error::invalid(format!(
                "{} samples is odd; pass --allow-truncate to drop the last one",
                samples.len()
            )));
        }
        samples.pop();
    }
    Signal::new(samples, sample_rate)
}

fn header_column(fields: &[&str], line_no: usize) -> Result<usize> {
    if let Some(i) = fields.iter().position(|f| f.eq_ignore_ascii_case("signal") || f.eq_ignore_ascii_case("value")) {
        return Ok(i);
    }
    if fields.len() == 1 {
        return Ok(0);
    }
    Err(Error::Parse { line: line_no, message: "header has no 'signal' or 'value' column".into() })
}
