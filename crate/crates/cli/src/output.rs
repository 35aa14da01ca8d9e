//! CSV and JSON tables.
//!
//! Reals are written as `{:.16e}`, i.e. 17 significant digits, which
//! round-trips every f64 exactly. Metadata lines start with `# key=value`;
//! the only line that varies between identical runs is `# timestamp=`.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;
use serde_json::{json, Map, Value};

use lyaprod::rng::EnsembleSpec;

use crate::config::Format;
use crate::CliError;

pub const GIT_DESCRIBE: &str = env!("LYAPROD_GIT_DESCRIBE");

/// Ordered key=value header.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Meta(pub Vec<(String, String)>);

impl Meta {
    /// The standard keys for an ensemble.
    pub fn for_spec(spec: &EnsembleSpec) -> Self {
        let ensemble = match spec.family.beta() {
            Some(b) => format!("ginibre-beta{}", b.value()),
            None => "isotropic".to_string(),
        };
        let mut m = Meta::default();
        m.push("ensemble", ensemble);
        m.push("N", spec.n);
        m.push("t", spec.t);
        m.push("samples", spec.samples);
        m.push("seed", spec.master_seed);
        m.push("observable", enum_name(&spec.observable));
        if let Some(law) = spec.sv_law {
            m.push("sv-law", serde_json::to_string(&law).unwrap_or_default());
        }
        m.push("git-describe", GIT_DESCRIBE);
        m
    }

    pub fn push(&mut self, key: &str, value: impl ToString) {
        self.0.push((key.to_string(), value.to_string()));
    }

    pub fn with(mut self, key: &str, value: impl ToString) -> Self {
        self.push(key, value);
        self
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.0.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }
}

/// kebab-case name of a serde unit variant.
pub fn enum_name<T: Serialize>(v: &T) -> String {
    match serde_json::to_value(v) {
        Ok(Value::String(s)) => s,
        Ok(other) => other.to_string(),
        Err(_) => String::new(),
    }
}

/// Numeric table; the first `int_cols` columns hold integers.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub int_cols: usize,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new<S: AsRef<str>>(columns: &[S], int_cols: usize) -> Self {
        Table {
            columns: columns.iter().map(|c| c.as_ref().to_string()).collect(),
            int_cols,
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
}

pub fn fmt_real(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "nan".to_string()
    } else if x > 0.0 {
        "inf".to_string()
    } else {
        "-inf".to_string()
    }
}

fn fmt_cell(x: f64, integer: bool) -> String {
    if integer && x.fract() == 0.0 && x.abs() < 9.0e15 {
        format!("{}", x as i64)
    } else {
        fmt_real(x)
    }
}

fn timestamp() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0)
}

fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    Ok(BufWriter::new(File::create(path).map_err(|e| CliError::io(path, e))?))
}

/// Writes a table in either format. JSON output is `{meta, columns, rows}`.
pub fn write_table(path: &Path, format: Format, meta: &Meta, table: &Table, stamp: bool) -> Result<(), CliError> {
    match format {
        Format::Csv => write_csv(path, meta, table, stamp),
        Format::Json => {
            let mut m = Map::new();
            for (k, v) in &meta.0 {
                m.insert(k.clone(), Value::String(v.clone()));
            }
            if stamp {
                m.insert("timestamp".into(), json!(timestamp()));
            }
            let doc = json!({ "meta": m, "columns": table.columns, "rows": table.rows });
            write_json(path, &doc)
        }
    }
}

pub fn write_csv(path: &Path, meta: &Meta, table: &Table, stamp: bool) -> Result<(), CliError> {
    let mut w = create(path)?;
    let io = |e| CliError::io(path, e);
    for (k, v) in &meta.0 {
        writeln!(w, "# {k}={v}").map_err(io)?;
    }
    if stamp {
        writeln!(w, "# timestamp={}", timestamp()).map_err(io)?;
    }
    let mut c = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(w);
    c.write_record(&table.columns).map_err(|e| CliError::csv(path, e))?;
    for row in &table.rows {
        let cells = row.iter().enumerate().map(|(j, &x)| fmt_cell(x, j < table.int_cols));
        c.write_record(cells).map_err(|e| CliError::csv(path, e))?;
    }
    c.flush().map_err(io)?;
    Ok(())
}

pub fn write_json<T: Serialize>(path: &Path, doc: &T) -> Result<(), CliError> {
    let mut w = create(path)?;
    serde_json::to_writer_pretty(&mut w, doc).map_err(|e| CliError::io(path, e.into()))?;
    writeln!(w).and_then(|_| w.flush()).map_err(|e| CliError::io(path, e))
}

/// Reads back a CSV written by [`write_csv`]; `timestamp` is kept in the meta.
pub fn read_csv(path: &Path) -> Result<(Meta, Table), CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let mut meta = Meta::default();
    let mut body = String::new();
    for line in text.lines() {
        match line.strip_prefix("# ") {
            Some(kv) => {
                let (k, v) = kv.split_once('=').unwrap_or((kv, ""));
                meta.push(k, v);
            }
            None => {
                body.push_str(line);
                body.push('\n');
            }
        }
    }
    let mut r = csv::ReaderBuilder::new().from_reader(body.as_bytes());
    let columns: Vec<String> = r.headers().map_err(|e| CliError::csv(path, e))?.iter().map(String::from).collect();
    let mut table = Table::new(&columns, 0);
    for rec in r.records() {
        let rec = rec.map_err(|e| CliError::csv(path, e))?;
        let row = rec
            .iter()
            .map(|s| {
                s.parse::<f64>()
                    .map_err(|_| CliError::Config(format!("{}: not a number: '{s}'", path.display())))
            })
            .collect::<Result<Vec<_>, _>>()?;
        table.rows.push(row);
    }
    Ok((meta, table))
}

/// `dir/stem_suffix.ext` next to `base`.
pub fn sibling(base: &Path, suffix: &str, ext: &str) -> PathBuf {
    let stem = base.file_stem().and_then(|s| s.to_str()).unwrap_or("out");
    base.with_file_name(format!("{stem}_{suffix}.{ext}"))
}

/// One plotted series of a gnuplot script.
pub struct Series<'a> {
    pub file: &'a Path,
    /// gnuplot `using` spec, e.g. "1:2"
    pub using: &'a str,
    pub title: &'a str,
    pub style: &'a str,
}

impl<'a> Series<'a> {
    pub fn new(file: &'a Path, using: &'a str, title: &'a str, style: &'a str) -> Self {
        Series { file, using, title, style }
    }
}

/// Gnuplot commands that plot CSV series; the script is written next to
/// `path` with extension `.gp` and refers to the data files by name.
pub fn write_plot_script(path: &Path, title: &str, xlabel: &str, series: &[Series]) -> Result<PathBuf, CliError> {
    let gp = path.with_extension("gp");
    let png = path.with_extension("png");
    let name = |p: &Path| p.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let mut s = String::new();
    s.push_str("set datafile separator ','\nset datafile commentschars '#'\nset key autotitle columnhead\n");
    s.push_str(&format!("set terminal pngcairo size 900,600\nset output '{}'\n", name(&png)));
    s.push_str(&format!("set title '{title}'\nset xlabel '{xlabel}'\n"));
    let parts: Vec<String> = series
        .iter()
        .map(|sr| format!("'{}' using {} with {} title '{}'", name(sr.file), sr.using, sr.style, sr.title))
        .collect();
    s.push_str(&format!("plot {}\n", parts.join(", \\\n     ")));
    std::fs::write(&gp, s).map_err(|e| CliError::io(&gp, e))?;
    Ok(gp)
}
