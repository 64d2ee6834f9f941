use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::config::{Command, ExperimentConfig, OutputSection};
use crate::HarnessError;

const DIGITS: usize = 12;

/// `%.12g`: 12 significant digits, trailing zeros dropped, exponent form
/// outside `1e-4 ≤ |x| < 1e12`.
pub fn fmt_g(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", DIGITS - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= DIGITS as i32 {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mantissa), exp.abs())
    } else {
        let decimals = (DIGITS as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_owned()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// A CSV table held as formatted strings until written.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Table {
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_bytes(&self) -> Result<Vec<u8>, HarnessError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let csv_err = |e: csv::Error| HarnessError::Config(format!("csv: {e}"));
        w.write_record(&self.header).map_err(csv_err)?;
        for row in &self.rows {
            w.write_record(row).map_err(csv_err)?;
        }
        w.into_inner()
            .map_err(|e| HarnessError::Config(format!("csv: {e}")))
    }
}

#[derive(Serialize)]
struct Envelope<'a, R: Serialize> {
    tool: &'static str,
    version: &'static str,
    command: Command,
    config: &'a ExperimentConfig,
    verdict: &'a str,
    report: &'a R,
}

pub fn json_summary<R: Serialize>(
    command: Command,
    config: &ExperimentConfig,
    verdict: &str,
    report: &R,
) -> Result<Vec<u8>, HarnessError> {
    let env = Envelope {
        tool: "mvbv",
        version: env!("CARGO_PKG_VERSION"),
        command,
        config,
        verdict,
        report,
    };
    let mut bytes =
        serde_json::to_vec_pretty(&env).map_err(|e| HarnessError::Config(format!("json: {e}")))?;
    bytes.push(b'\n');
    Ok(bytes)
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), HarnessError> {
    let io = |source| HarnessError::Io {
        path: path.to_owned(),
        source,
    };
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(io)?;
    }
    fs::write(path, bytes).map_err(io)
}

/// Writes the CSV/JSON pair where `output` asks; with no destination the CSV goes to stdout.
pub fn write_outputs(
    command: Command,
    output: &OutputSection,
    csv: &[u8],
    json: &[u8],
) -> Result<Vec<PathBuf>, HarnessError> {
    let mut written = Vec::new();
    let mut emit = |path: PathBuf, bytes: &[u8]| -> Result<(), HarnessError> {
        write_file(&path, bytes)?;
        written.push(path);
        Ok(())
    };
    if let Some(dir) = &output.out_dir {
        emit(dir.join(format!("{command}.csv")), csv)?;
        emit(dir.join(format!("{command}.json")), json)?;
    }
    if let Some(p) = &output.csv {
        emit(p.clone(), csv)?;
    }
    if let Some(p) = &output.out {
        emit(p.clone(), json)?;
    }
    if written.is_empty() {
        std::io::stdout()
            .write_all(csv)
            .map_err(|source| HarnessError::Io {
                path: PathBuf::from("<stdout>"),
                source,
            })?;
    }
    Ok(written)
}
