//! Versioned CSV tables and JSON files.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;

pub const NA: &str = "NA";

/// 17 significant digits, enough to round-trip any `f64`.
pub fn exact(x: f64) -> String {
    format!("{x:.16e}")
}

/// Six significant digits for reading by eye.
pub fn approx(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let mag = x.abs().log10().floor() as i32;
    if (-4..6).contains(&mag) {
        let decimals = (5 - mag).max(0) as usize;
        format!("{x:.decimals$}")
    } else {
        format!("{x:.5e}")
    }
}

pub fn exact_opt(x: Option<f64>) -> String {
    x.map(exact).unwrap_or_else(|| NA.to_string())
}

/// CSV with a schema line, a column-name line and a units line.
pub struct Table {
    schema: String,
    columns: Vec<(&'static str, &'static str)>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(schema: &str, columns: &[(&'static str, &'static str)]) -> Self {
        Self {
            schema: schema.to_string(),
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        assert_eq!(row.len(), self.columns.len(), "row width");
        self.rows.push(row);
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# schema: {}", self.schema);
        let join = |f: fn(&(&'static str, &'static str)) -> &'static str| {
            self.columns.iter().map(f).collect::<Vec<_>>().join(",")
        };
        let _ = writeln!(out, "{}", join(|c| c.0));
        let _ = writeln!(out, "{}", join(|c| c.1));
        for r in &self.rows {
            let _ = writeln!(out, "{}", r.join(","));
        }
        out
    }
}

/// Files to write once every computation has succeeded.
#[derive(Default)]
pub struct Outputs {
    files: Vec<(String, String)>,
}

impl Outputs {
    pub fn text(&mut self, name: &str, body: String) {
        self.files.push((name.to_string(), body));
    }

    pub fn table(&mut self, name: &str, t: &Table) {
        self.text(name, t.render());
    }

    pub fn json<T: Serialize>(&mut self, name: &str, value: &T) {
        let mut body = serde_json::to_string_pretty(value).expect("report serializes");
        body.push('\n');
        self.text(name, body);
    }

    pub fn write(&self, dir: &Path) -> std::io::Result<Vec<PathBuf>> {
        std::fs::create_dir_all(dir)?;
        self.files
            .iter()
            .map(|(name, body)| {
                let p = dir.join(name);
                std::fs::write(&p, body)?;
                Ok(p)
            })
            .collect()
    }

    pub fn get(&self, name: &str) -> Option<&str> {
        self.files.iter().find(|(n, _)| n == name).map(|(_, b)| b.as_str())
    }
}
