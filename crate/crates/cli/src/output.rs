use std::fmt;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use serde_json::{json, Value};

#[derive(Debug)]
pub enum CliError {
    /// Bad or missing arguments; exit 2.
    Usage(String),
    Core(efd_core::Error),
    Io(io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        use efd_core::Error as E;
        match self {
            CliError::Usage(_) => 2,
            CliError::Io(_) => 3,
            CliError::Core(E::InvalidInput(_) | E::Parse { .. } | E::Io(_)) => 3,
            CliError::Core(E::Config(_) | E::ConventionViolation { .. }) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => f.write_str(m),
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "{e}"),
        }
    }
}

impl From<efd_core::Error> for CliError {
    fn from(e: efd_core::Error) -> Self {
        CliError::Core(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

/// Run metadata stamped on every output file.
pub struct Meta {
    pub args: String,
    pub seed: u64,
}

impl Meta {
    pub fn new(argv: &[String], seed: u64) -> Self {
        Self { args: argv.join(" "), seed }
    }

    fn comment_line(&self) -> String {
        format!("# efd {} args={} seed={}", env!("CARGO_PKG_VERSION"), self.args, self.seed)
    }

    fn json(&self) -> Value {
        json!({ "version": env!("CARGO_PKG_VERSION"), "args": self.args, "seed": self.seed })
    }
}

/// Writes a CSV file whose first line is the `#` metadata comment.
pub fn write_csv(
    path: &Path,
    meta: &Meta,
    body: impl FnOnce(&mut BufWriter<File>) -> io::Result<()>,
) -> Result<(), CliError> {
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "{}", meta.comment_line())?;
    body(&mut w)?;
    w.flush()?;
    Ok(())
}

/// Writes a JSON object with the metadata under a `meta` key (JSON has no comments).
pub fn write_json(path: &Path, meta: &Meta, mut value: Value) -> Result<(), CliError> {
    if let Value::Object(map) = &mut value {
        map.insert("meta".into(), meta.json());
    }
    let mut w = BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(&mut w, &value).map_err(io::Error::from)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}
