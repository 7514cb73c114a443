//! CSV, JSON and SVG emission, and reading point files back.
//!
//! Floats are written with `Display`, the shortest text that parses back to
//! the same `f64`, so point files round-trip exactly.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use fzspec_core::C64;
use serde::Serialize;

use crate::args::{Format, OutputArgs};
use crate::error::{CliError, CliResult};

/// A CSV table built row by row.
pub struct Table {
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Table { header: header.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn to_csv(&self) -> CliResult<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let err = |e: csv::Error| CliError::Output(e.to_string());
        w.write_record(&self.header).map_err(err)?;
        for row in &self.rows {
            w.write_record(row).map_err(err)?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Output(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| CliError::Output(e.to_string()))
    }
}

pub fn num(x: f64) -> String {
    format!("{x}")
}

pub fn to_json<T: Serialize>(value: &T) -> CliResult<String> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| CliError::Output(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

/// `prefix` with `.ext` appended (not substituted).
pub fn with_suffix(prefix: &Path, ext: &str) -> PathBuf {
    let mut s = OsString::from(prefix.as_os_str());
    s.push(".");
    s.push(ext);
    PathBuf::from(s)
}

pub fn write_file(path: &Path, contents: &str) -> CliResult<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    std::fs::write(path, contents).map_err(|e| CliError::io(path, e))
}

pub fn write_stdout(contents: &str) -> CliResult<()> {
    let mut out = std::io::stdout().lock();
    out.write_all(contents.as_bytes()).and_then(|_| out.flush()).map_err(|e| CliError::Output(e.to_string()))
}

/// Everything a command can emit. The SVG is rendered on demand.
pub struct Emission<'a> {
    pub table: Table,
    pub json: String,
    pub svg: Option<&'a dyn Fn() -> CliResult<String>>,
}

impl Emission<'_> {
    fn svg(&self) -> CliResult<String> {
        match self.svg {
            Some(render) => render(),
            None => Err(CliError::usage("this command has no SVG output")),
        }
    }

    /// Writes to `--out` files or stdout, plus `extra_svg` when given.
    pub fn emit(&self, output: &OutputArgs, extra_svg: Option<&Path>) -> CliResult<()> {
        let mut svg_cache: Option<String> = None;
        let mut svg = || -> CliResult<String> {
            if svg_cache.is_none() {
                svg_cache = Some(self.svg()?);
            }
            Ok(svg_cache.clone().unwrap())
        };
        match &output.out {
            Some(prefix) => {
                write_file(&with_suffix(prefix, "csv"), &self.table.to_csv()?)?;
                write_file(&with_suffix(prefix, "json"), &self.json)?;
                if output.format == Format::Svg {
                    write_file(&with_suffix(prefix, "svg"), &svg()?)?;
                }
            }
            None => match output.format {
                Format::Csv => write_stdout(&self.table.to_csv()?)?,
                Format::Json => write_stdout(&self.json)?,
                Format::Svg => write_stdout(&svg()?)?,
            },
        }
        if let Some(path) = extra_svg {
            write_file(path, &svg()?)?;
        }
        Ok(())
    }
}

/// Reads the `re` and `im` columns of a point file. A header-only or empty
/// file gives no points.
pub fn read_points(path: &Path) -> CliResult<Vec<C64>> {
    let file = std::fs::File::open(path).map_err(|e| CliError::io(path, e))?;
    let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(file);
    let csv_err = |e: csv::Error| {
        let line = e.position().map(|p| p.line()).unwrap_or(0);
        match e.into_kind() {
            csv::ErrorKind::Io(source) => CliError::io(path, source),
            kind => CliError::Csv { path: path.into(), line, message: format!("{kind:?}") },
        }
    };
    let headers = reader.headers().map_err(csv_err)?.clone();
    if headers.is_empty() {
        return Ok(Vec::new());
    }
    let column = |name: &str| {
        headers.iter().position(|h| h.trim() == name).ok_or_else(|| CliError::Csv {
            path: path.into(),
            line: 1,
            message: format!("header has no {name:?} column"),
        })
    };
    let (ire, iim) = (column("re")?, column("im")?);
    let mut points = Vec::new();
    for record in reader.records() {
        let record = record.map_err(csv_err)?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        let field = |i: usize, name: &str| -> CliResult<f64> {
            let raw = record.get(i).unwrap_or("");
            raw.trim().parse::<f64>().map_err(|_| CliError::Csv {
                path: path.into(),
                line,
                message: format!("{name} value {raw:?} is not a number"),
            })
        };
        points.push(C64::new(field(ire, "re")?, field(iim, "im")?));
    }
    Ok(points)
}
