//! CSV and JSON writers. Floats are written with 17 significant digits so
//! that every value round-trips exactly.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{CliError, CliResult};

/// 17 significant digits in scientific notation, '.' as decimal point.
pub fn fmt_f64(x: f64) -> String {
    if x.is_nan() {
        "nan".to_owned()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.to_owned()
    } else if x == 0.0 {
        // no signed zeros in output
        format!("{:.16e}", 0.0)
    } else {
        format!("{x:.16e}")
    }
}

pub fn cplx(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

#[derive(Debug, Clone)]
pub enum Cell {
    Num(f64),
    Int(usize),
    Text(String),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Num(x) => fmt_f64(*x),
            Cell::Int(n) => n.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }
}

pub struct Csv {
    header: Vec<String>,
    body: String,
}

impl Csv {
    pub fn new<S: AsRef<str>>(header: &[S]) -> Self {
        Self {
            header: header.iter().map(|s| s.as_ref().to_owned()).collect(),
            body: String::new(),
        }
    }

    pub fn row(&mut self, cells: &[Cell]) {
        debug_assert_eq!(cells.len(), self.header.len());
        let line: Vec<String> = cells.iter().map(Cell::render).collect();
        let _ = writeln!(self.body, "{}", line.join(","));
    }

    pub fn num_row(&mut self, values: &[f64]) {
        let cells: Vec<Cell> = values.iter().map(|&x| Cell::Num(x)).collect();
        self.row(&cells);
    }

    pub fn render(&self) -> String {
        format!("{}\n{}", self.header.join(","), self.body)
    }
}

/// Collects the files of one output set and writes them with a manifest.
pub struct OutputSet {
    dir: PathBuf,
    files: Vec<String>,
}

impl OutputSet {
    pub fn create(dir: &Path) -> CliResult<Self> {
        std::fs::create_dir_all(dir).map_err(|source| CliError::Write {
            path: dir.to_owned(),
            source,
        })?;
        Ok(Self {
            dir: dir.to_owned(),
            files: Vec::new(),
        })
    }

    pub fn write_text(&mut self, name: &str, text: &str) -> CliResult<PathBuf> {
        let path = self.dir.join(name);
        std::fs::write(&path, text).map_err(|source| CliError::Write {
            path: path.clone(),
            source,
        })?;
        self.files.push(name.to_owned());
        Ok(path)
    }

    pub fn write_csv(&mut self, name: &str, csv: &Csv) -> CliResult<PathBuf> {
        self.write_text(name, &csv.render())
    }

    pub fn write_json<T: Serialize>(&mut self, name: &str, value: &T) -> CliResult<PathBuf> {
        let mut text = serde_json::to_string_pretty(value).expect("output values serialize");
        text.push('\n');
        self.write_text(name, &text)
    }

    /// Writes `manifest.json` listing the files written so far. It carries no
    /// timestamps so reruns produce byte-identical output.
    pub fn finish<T: Serialize>(mut self, run: &T) -> CliResult<()> {
        #[derive(Serialize)]
        struct Manifest<'a, T> {
            tool: &'static str,
            version: &'static str,
            run: &'a T,
            files: &'a [String],
        }
        let files = std::mem::take(&mut self.files);
        let manifest = Manifest {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            run,
            files: &files,
        };
        self.write_json("manifest.json", &manifest)?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits_round_trip() {
        for x in [0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, f64::MIN_POSITIVE] {
            let s = fmt_f64(x);
            assert_eq!(s.parse::<f64>().unwrap(), x, "{s}");
            let mantissa = s.split('e').next().unwrap().trim_start_matches('-');
            assert_eq!(mantissa.chars().filter(|c| c.is_ascii_digit()).count(), 17);
        }
    }

    #[test]
    fn header_only_csv() {
        let csv = Csv::new(&["a", "b"]);
        assert_eq!(csv.render(), "a,b\n");
    }
}
