//! Run configuration: a sectioned TOML file.
//!
//! ```toml
//! [geometry]
//! coords = ["x", "y"]                 # optional
//! frame = [["1", "0"], ["0", "1+x^2"]] # row i = components of X_i
//!
//! [observables]
//! phi = ["y"]                         # optional
//!
//! [domain]
//! box = [[-3, 3], [-3, 3]]
//! resolution = 61                     # or one entry per axis
//! samples = [[0, 0], [0.5, 0]]        # optional, used by analyze/verify
//!
//! [numerics]                          # everything optional
//! rank_tol = 1e-9
//!
//! [outputs]
//! directory = "out"
//! formats = ["csv", "toml"]
//! ```

use std::path::{Path, PathBuf};

use parsym_core::{FrameSpec, Numerics};
use thiserror::Error;
use toml::{Table, Value};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("[{section}] {key}{}: {message}", line_suffix(*.line))]
    Invalid {
        section: String,
        key: String,
        message: String,
        line: Option<usize>,
    },
}

fn line_suffix(line: Option<usize>) -> String {
    line.map(|l| format!(" (line {l})")).unwrap_or_default()
}

impl ConfigError {
    pub fn section(&self) -> Option<&str> {
        match self {
            ConfigError::Invalid { section, .. } => Some(section),
            _ => None,
        }
    }

    pub fn key(&self) -> Option<&str> {
        match self {
            ConfigError::Invalid { key, .. } => Some(key),
            _ => None,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            ConfigError::Io { message, .. }
            | ConfigError::Syntax { message, .. }
            | ConfigError::Invalid { message, .. } => message,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Toml,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub coords: Vec<String>,
    pub frame: Vec<Vec<String>>,
    pub phi: Vec<String>,
    pub bounds: Vec<(f64, f64)>,
    pub resolution: Vec<usize>,
    pub samples: Option<Vec<Vec<f64>>>,
    pub numerics: Numerics,
    /// Order `R` of the reported Killing filtration.
    pub max_order: usize,
    pub lattice_spacing: f64,
    pub lattice_half_width: usize,
    /// Path length used by the `verify` transport and ODE checks.
    pub verify_duration: f64,
    pub out_dir: PathBuf,
    pub formats: Vec<OutputFormat>,
}

impl RunConfig {
    pub fn dim(&self) -> usize {
        self.frame.len()
    }

    /// The frame, with a jet budget large enough for order-`n+2` probing.
    pub fn frame_spec(&self) -> parsym_core::Result<FrameSpec> {
        let n = self.dim();
        FrameSpec::new(&self.coords, &self.frame, &self.phi, &self.bounds)?
            .with_max_order(self.max_order.max(n + 2) + 1)
    }

    /// Configured samples, or 3 per axis at the cell centres of the box.
    pub fn sample_points(&self) -> Vec<Vec<f64>> {
        if let Some(s) = &self.samples {
            return s.clone();
        }
        let n = self.dim();
        (0..3usize.pow(n as u32))
            .map(|mut idx| {
                let mut p = vec![0.0; n];
                for axis in (0..n).rev() {
                    let (lo, hi) = self.bounds[axis];
                    p[axis] = lo + ((idx % 3) as f64 + 0.5) / 3.0 * (hi - lo);
                    idx /= 3;
                }
                p
            })
            .collect()
    }

    pub fn centre(&self) -> Vec<f64> {
        self.bounds.iter().map(|(lo, hi)| 0.5 * (lo + hi)).collect()
    }

    pub fn wants(&self, format: OutputFormat) -> bool {
        self.formats.contains(&format)
    }
}

const SECTIONS: [(&str, &[&str]); 5] = [
    ("geometry", &["dim", "coords", "frame"]),
    ("observables", &["phi"]),
    ("domain", &["box", "resolution", "samples"]),
    (
        "numerics",
        &[
            "rank_tol",
            "feature_tol",
            "const_tol",
            "killing_tol",
            "transport_tol",
            "ode_step",
            "probe_radius",
            "probe_count",
            "fd_step",
            "max_order",
            "lattice_spacing",
            "lattice_half_width",
            "verify_duration",
        ],
    ),
    ("outputs", &["directory", "formats"]),
];

pub fn load_config(path: &Path) -> Result<RunConfig, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    parse_config(&text)
}

/// 1-based line of `key = …` inside `[section]`, if present.
fn key_line(text: &str, section: &str, key: &str) -> Option<usize> {
    let mut current = String::new();
    for (no, line) in text.lines().enumerate() {
        let t = line.trim();
        if t.starts_with('[') && t.ends_with(']') {
            current = t.trim_matches(|c| c == '[' || c == ']').trim().to_string();
        } else if current == section {
            if let Some(rest) = t.strip_prefix(key) {
                if rest.trim_start().starts_with('=') {
                    return Some(no + 1);
                }
            }
        }
    }
    None
}

fn section_line(text: &str, section: &str) -> Option<usize> {
    text.lines()
        .position(|l| l.trim() == format!("[{section}]"))
        .map(|p| p + 1)
}

struct Reader<'a> {
    text: &'a str,
    root: Table,
}

impl Reader<'_> {
    fn err(&self, section: &str, key: &str, message: impl Into<String>) -> ConfigError {
        let line = if key.is_empty() {
            section_line(self.text, section)
        } else {
            key_line(self.text, section, key)
        };
        ConfigError::Invalid {
            section: section.into(),
            key: key.into(),
            message: message.into(),
            line,
        }
    }

    fn get(&self, section: &str, key: &str) -> Option<&Value> {
        self.root
            .get(section)
            .and_then(Value::as_table)
            .and_then(|t| t.get(key))
    }

    fn required(&self, section: &str, key: &str) -> Result<&Value, ConfigError> {
        self.get(section, key)
            .ok_or_else(|| self.err(section, key, "missing required key"))
    }

    fn real(&self, section: &str, key: &str, v: &Value) -> Result<f64, ConfigError> {
        match v {
            Value::Float(f) => Ok(*f),
            Value::Integer(i) => Ok(*i as f64),
            _ => Err(self.err(
                section,
                key,
                format!("expected a number, got {}", v.type_str()),
            )),
        }
    }

    fn positive(&self, section: &str, key: &str, default: f64) -> Result<f64, ConfigError> {
        let Some(v) = self.get(section, key) else {
            return Ok(default);
        };
        let x = self.real(section, key, v)?;
        if !(x > 0.0 && x.is_finite()) {
            return Err(self.err(section, key, format!("must be a positive number, got {x}")));
        }
        Ok(x)
    }

    fn integer(&self, section: &str, key: &str, v: &Value) -> Result<i64, ConfigError> {
        v.as_integer().ok_or_else(|| {
            self.err(
                section,
                key,
                format!("expected an integer, got {}", v.type_str()),
            )
        })
    }

    fn array<'v>(
        &self,
        section: &str,
        key: &str,
        v: &'v Value,
    ) -> Result<&'v Vec<Value>, ConfigError> {
        v.as_array().ok_or_else(|| {
            self.err(
                section,
                key,
                format!("expected an array, got {}", v.type_str()),
            )
        })
    }

    /// Strings, with bare numbers accepted as their decimal spelling.
    fn expression(&self, section: &str, key: &str, v: &Value) -> Result<String, ConfigError> {
        match v {
            Value::String(s) => Ok(s.clone()),
            Value::Integer(i) => Ok(i.to_string()),
            Value::Float(f) => Ok(f.to_string()),
            _ => Err(self.err(
                section,
                key,
                format!("expected an expression string, got {}", v.type_str()),
            )),
        }
    }

    fn point(
        &self,
        section: &str,
        key: &str,
        v: &Value,
        n: usize,
    ) -> Result<Vec<f64>, ConfigError> {
        let items = self.array(section, key, v)?;
        if items.len() != n {
            return Err(self.err(
                section,
                key,
                format!("expected points with {n} coordinates, got {}", items.len()),
            ));
        }
        items.iter().map(|x| self.real(section, key, x)).collect()
    }
}

pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let root: Table = text.parse().map_err(|e: toml::de::Error| {
        let line = e.span().map_or(1, |s| {
            text[..s.start.min(text.len())].lines().count().max(1)
        });
        ConfigError::Syntax {
            line,
            message: e.message().to_string(),
        }
    })?;
    let r = Reader { text, root };

    for (name, value) in &r.root {
        let Some((_, keys)) = SECTIONS.iter().find(|(s, _)| s == name) else {
            return Err(r.err(name, "", "unknown section"));
        };
        let table = value
            .as_table()
            .ok_or_else(|| r.err(name, "", "expected a section"))?;
        if let Some(key) = table.keys().find(|k| !keys.contains(&k.as_str())) {
            return Err(r.err(name, key, "unknown key"));
        }
    }

    // [geometry]
    let rows = r.array("geometry", "frame", r.required("geometry", "frame")?)?;
    let n = rows.len();
    if n == 0 {
        return Err(r.err("geometry", "frame", "frame must have at least one row"));
    }
    let shape_error = || {
        r.err(
            "geometry",
            "frame",
            format!("expected {n} rows of {n} entries"),
        )
    };
    let mut frame = Vec::with_capacity(n);
    for row in rows {
        let entries = row.as_array().ok_or_else(shape_error)?;
        if entries.len() != n {
            return Err(shape_error());
        }
        frame.push(
            entries
                .iter()
                .map(|e| r.expression("geometry", "frame", e))
                .collect::<Result<Vec<_>, _>>()?,
        );
    }
    if let Some(v) = r.get("geometry", "dim") {
        let dim = r.integer("geometry", "dim", v)?;
        if dim != n as i64 {
            return Err(r.err(
                "geometry",
                "dim",
                format!("dim = {dim} but the frame has {n} rows"),
            ));
        }
    }
    let coords = match r.get("geometry", "coords") {
        Some(v) => {
            let names = r.array("geometry", "coords", v)?;
            if names.len() != n {
                return Err(r.err(
                    "geometry",
                    "coords",
                    format!("expected {n} coordinate names, got {}", names.len()),
                ));
            }
            names
                .iter()
                .map(|c| {
                    c.as_str().map(String::from).ok_or_else(|| {
                        r.err("geometry", "coords", "coordinate names must be strings")
                    })
                })
                .collect::<Result<Vec<_>, _>>()?
        }
        None if n <= 3 => ["x", "y", "z"][..n].iter().map(|s| s.to_string()).collect(),
        None => (1..=n).map(|i| format!("x{i}")).collect(),
    };

    // [observables]
    let phi = match r.get("observables", "phi") {
        Some(v) => r
            .array("observables", "phi", v)?
            .iter()
            .map(|e| r.expression("observables", "phi", e))
            .collect::<Result<Vec<_>, _>>()?,
        None => Vec::new(),
    };

    // [domain]
    let box_rows = r.array("domain", "box", r.required("domain", "box")?)?;
    if box_rows.len() != n {
        return Err(r.err(
            "domain",
            "box",
            format!("expected {n} intervals, got {}", box_rows.len()),
        ));
    }
    let bounds = box_rows
        .iter()
        .map(|iv| {
            let pair = r.point("domain", "box", iv, 2)?;
            if pair[0].partial_cmp(&pair[1]) != Some(std::cmp::Ordering::Less)
                || pair.iter().any(|v| !v.is_finite())
            {
                return Err(r.err(
                    "domain",
                    "box",
                    format!("interval [{}, {}] is empty", pair[0], pair[1]),
                ));
            }
            Ok((pair[0], pair[1]))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let resolution = match r.get("domain", "resolution") {
        None => vec![21; n],
        Some(v @ Value::Integer(_)) => vec![r.integer("domain", "resolution", v)?; n]
            .into_iter()
            .map(|x| x as usize)
            .collect(),
        Some(v) => {
            let items = r.array("domain", "resolution", v)?;
            if items.len() != n {
                return Err(r.err(
                    "domain",
                    "resolution",
                    format!("expected {n} entries, got {}", items.len()),
                ));
            }
            items
                .iter()
                .map(|x| r.integer("domain", "resolution", x).map(|x| x as usize))
                .collect::<Result<Vec<_>, _>>()?
        }
    };
    if resolution.iter().any(|&k| !(3..=100_000).contains(&k)) {
        return Err(r.err(
            "domain",
            "resolution",
            "each resolution must be between 3 and 100000",
        ));
    }
    let samples = match r.get("domain", "samples") {
        None => None,
        Some(v) => {
            let pts = r
                .array("domain", "samples", v)?
                .iter()
                .map(|p| r.point("domain", "samples", p, n))
                .collect::<Result<Vec<_>, _>>()?;
            if pts.is_empty() {
                return Err(r.err("domain", "samples", "at least one sample point is required"));
            }
            if let Some(p) = pts
                .iter()
                .find(|p| p.iter().zip(&bounds).any(|(v, (lo, hi))| v < lo || v > hi))
            {
                return Err(r.err(
                    "domain",
                    "samples",
                    format!("sample {p:?} lies outside the box"),
                ));
            }
            Some(pts)
        }
    };

    // [numerics]
    let d = Numerics::default();
    let s = "numerics";
    let probe_count = match r.get(s, "probe_count") {
        None => None,
        Some(v) => {
            let k = r.integer(s, "probe_count", v)?;
            if k < 1 {
                return Err(r.err(s, "probe_count", "must be at least 1"));
            }
            Some(k as usize)
        }
    };
    let numerics = Numerics {
        rank_tol: r.positive(s, "rank_tol", d.rank_tol)?,
        feature_tol: r.positive(s, "feature_tol", d.feature_tol)?,
        const_tol: r.positive(s, "const_tol", d.const_tol)?,
        killing_tol: r.positive(s, "killing_tol", d.killing_tol)?,
        transport_tol: r.positive(s, "transport_tol", d.transport_tol)?,
        ode_step: r.positive(s, "ode_step", d.ode_step)?,
        probe_radius: r.positive(s, "probe_radius", d.probe_radius)?,
        probe_count,
        fd_step: r.positive(s, "fd_step", d.fd_step)?,
    };
    let max_order = match r.get(s, "max_order") {
        None => n + 2,
        Some(v) => {
            let m = r.integer(s, "max_order", v)?;
            if m < (n + 1) as i64 || m > (n + 3) as i64 {
                return Err(r.err(
                    s,
                    "max_order",
                    format!("must lie in [{}, {}], got {m}", n + 1, n + 3),
                ));
            }
            m as usize
        }
    };
    let lattice_half_width = match r.get(s, "lattice_half_width") {
        None => 2,
        Some(v) => {
            let w = r.integer(s, "lattice_half_width", v)?;
            if !(0..=50).contains(&w) {
                return Err(r.err(s, "lattice_half_width", "must lie in [0, 50]"));
            }
            w as usize
        }
    };

    // [outputs]
    let out_dir = match r.get("outputs", "directory") {
        None => PathBuf::from("out"),
        Some(v) => PathBuf::from(
            v.as_str()
                .ok_or_else(|| r.err("outputs", "directory", "expected a string"))?,
        ),
    };
    let formats = match r.get("outputs", "formats") {
        None => vec![OutputFormat::Csv, OutputFormat::Toml],
        Some(v) => r
            .array("outputs", "formats", v)?
            .iter()
            .map(|f| match f.as_str() {
                Some("csv") => Ok(OutputFormat::Csv),
                Some("toml") => Ok(OutputFormat::Toml),
                _ => Err(r.err(
                    "outputs",
                    "formats",
                    format!("unknown format {f}; expected \"csv\" or \"toml\""),
                )),
            })
            .collect::<Result<Vec<_>, _>>()?,
    };

    let cfg = RunConfig {
        coords,
        frame,
        phi,
        bounds,
        resolution,
        samples,
        numerics,
        max_order,
        lattice_spacing: r.positive(s, "lattice_spacing", 0.1)?,
        lattice_half_width,
        verify_duration: r.positive(s, "verify_duration", 0.5)?,
        out_dir,
        formats,
    };
    // Expression and coordinate-name errors surface here.
    cfg.frame_spec().map_err(|e| {
        let key = match &e {
            parsym_core::Error::Parse { source_text, .. } if cfg.phi.contains(source_text) => {
                ("observables", "phi")
            }
            parsym_core::Error::Parse { .. } => ("geometry", "frame"),
            _ => ("geometry", "coords"),
        };
        r.err(key.0, key.1, e.to_string())
    })?;
    Ok(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    const QUADRATIC: &str = "[geometry]\nframe = [[\"1\",\"0\"],[\"0\",\"1+x^2\"]]\n\n[domain]\nbox = [[-3, 3], [-3, 3]]\n";

    #[test]
    fn defaults_are_filled() {
        let cfg = parse_config(QUADRATIC).unwrap();
        assert_eq!(cfg.dim(), 2);
        assert_eq!(cfg.coords, vec!["x", "y"]);
        assert_eq!(cfg.numerics, Numerics::default());
        assert_eq!(cfg.max_order, 4);
        assert_eq!(cfg.sample_points().len(), 9);
        assert_eq!(cfg.sample_points()[0], vec![-2.0, -2.0]);
    }

    #[test]
    fn key_lines_are_found() {
        let text = QUADRATIC.replace("\"1\",\"0\"],[", "\"1\",\"0\",\"0\"],[");
        let err = parse_config(&text).unwrap_err();
        assert_eq!(err.section(), Some("geometry"));
        assert_eq!(err.key(), Some("frame"));
        assert_eq!(err.message(), "expected 2 rows of 2 entries");
        assert_eq!(
            err.to_string(),
            "[geometry] frame (line 2): expected 2 rows of 2 entries"
        );
    }

    #[test]
    fn bad_expression_points_at_frame() {
        let err = parse_config(&QUADRATIC.replace("1+x^2", "1+q")).unwrap_err();
        assert_eq!(err.key(), Some("frame"));
        assert!(err.message().contains("q"), "{err}");
    }
}
