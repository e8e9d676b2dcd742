//! Run configuration: one `key = value` per line, `#` starts a comment.
//!
//! `l`, `m` and `H` take expressions in `t`; numeric keys take constant
//! expressions such as `2*pi` or `3/4`.

use std::collections::HashMap;
use std::path::{Path, PathBuf};

use singrev::{Expr, ProblemSpec, Tolerances};

use crate::error::CliError;

const KEYS: [&str; 18] = [
    "l", "m", "H", "c1", "c2", "t_min", "t_max", "samples", "L", "n_theta", "tol", "zero_tol",
    "branch_tol", "period_tol", "trace_out", "plot_out", "mesh_out", "report_out",
];

pub const DEFAULT_SAMPLES: usize = 2001;
pub const DEFAULT_THETA: usize = 64;

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub path: PathBuf,
    pub l: Expr,
    pub m: Expr,
    pub h: Option<Expr>,
    pub c1: Option<f64>,
    pub c2: Option<f64>,
    pub t_min: Option<f64>,
    pub t_max: Option<f64>,
    pub period: Option<f64>,
    pub samples: usize,
    pub n_theta: usize,
    pub tol: Tolerances,
    pub trace_out: Option<PathBuf>,
    pub plot_out: Option<PathBuf>,
    pub mesh_out: Option<PathBuf>,
    pub report_out: Option<PathBuf>,
}

struct Entry {
    line: usize,
    value: String,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text, path)
    }

    pub fn parse(text: &str, path: &Path) -> Result<Self, CliError> {
        let config_error = |line: usize, message: String| CliError::Config {
            path: path.to_path_buf(),
            line,
            message,
        };
        let mut entries: HashMap<&'static str, Entry> = HashMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let Some((key, value)) = content.split_once('=') else {
                return Err(config_error(line, format!("expected `key = value`, found `{content}`")));
            };
            let key = key.trim();
            let Some(&known) = KEYS.iter().find(|k| **k == key) else {
                return Err(config_error(line, format!("unknown key `{key}`")));
            };
            let value = value.trim();
            if value.is_empty() {
                return Err(config_error(line, format!("empty value for `{key}`")));
            }
            if let Some(first) = entries.get(known) {
                return Err(config_error(
                    line,
                    format!("duplicate key `{key}` (first set on line {})", first.line),
                ));
            }
            entries.insert(
                known,
                Entry {
                    line,
                    value: value.to_string(),
                },
            );
        }

        let reader = Reader { path, entries: &entries };
        let l = reader.expr("l")?.ok_or_else(|| reader.missing("l"))?;
        let m = reader.expr("m")?.ok_or_else(|| reader.missing("m"))?;
        let defaults = Tolerances::default();
        let tol = Tolerances {
            quad: reader.positive("tol")?.unwrap_or(defaults.quad),
            zero: reader.positive("zero_tol")?.unwrap_or(defaults.zero),
            branch: reader.positive("branch_tol")?.unwrap_or(defaults.branch),
            period: reader.positive("period_tol")?.unwrap_or(defaults.period),
        };
        Ok(RunConfig {
            path: path.to_path_buf(),
            l,
            m,
            h: reader.expr("H")?,
            c1: reader.number("c1")?,
            c2: reader.number("c2")?,
            t_min: reader.number("t_min")?,
            t_max: reader.number("t_max")?,
            period: reader.positive("L")?,
            samples: reader.count("samples")?.unwrap_or(DEFAULT_SAMPLES),
            n_theta: reader.count("n_theta")?.unwrap_or(DEFAULT_THETA),
            tol,
            trace_out: reader.path("trace_out"),
            plot_out: reader.path("plot_out"),
            mesh_out: reader.path("mesh_out"),
            report_out: reader.path("report_out"),
        })
    }

    fn field_error(&self, key: &'static str, message: impl Into<String>) -> CliError {
        CliError::Field {
            path: self.path.clone(),
            key,
            message: message.into(),
        }
    }

    pub fn constants(&self) -> Result<(f64, f64), CliError> {
        let c1 = self.c1.ok_or_else(|| self.field_error("c1", "required by this command"))?;
        let c2 = self.c2.ok_or_else(|| self.field_error("c2", "required by this command"))?;
        Ok((c1, c2))
    }

    /// The domain, falling back to `[0, L]` when only the period is given.
    pub fn domain(&self) -> Result<(f64, f64), CliError> {
        match (self.t_min, self.t_max, self.period) {
            (Some(a), Some(b), _) => Ok((a, b)),
            (None, None, Some(period)) => Ok((0.0, period)),
            (None, _, _) => Err(self.field_error("t_min", "required by this command")),
            (_, None, _) => Err(self.field_error("t_max", "required by this command")),
        }
    }

    pub fn spec(&self) -> Result<ProblemSpec, CliError> {
        let (c1, c2) = self.constants()?;
        let (t_min, t_max) = self.domain()?;
        let mut spec = ProblemSpec::new(self.l.clone(), self.m.clone(), c1, c2, t_min, t_max)?;
        if let Some(h) = &self.h {
            spec = spec.with_h(h.clone());
        }
        if let Some(period) = self.period {
            spec = spec.with_period(period);
        }
        Ok(spec)
    }

    pub fn period(&self) -> Result<f64, CliError> {
        self.period.ok_or_else(|| self.field_error("L", "required by this command"))
    }
}

struct Reader<'a> {
    path: &'a Path,
    entries: &'a HashMap<&'static str, Entry>,
}

impl Reader<'_> {
    fn missing(&self, key: &'static str) -> CliError {
        CliError::Field {
            path: self.path.to_path_buf(),
            key,
            message: "missing".into(),
        }
    }

    fn at_line(&self, key: &str, message: String) -> CliError {
        CliError::Config {
            path: self.path.to_path_buf(),
            line: self.entries[key].line,
            message: format!("`{key}`: {message}"),
        }
    }

    fn expr(&self, key: &'static str) -> Result<Option<Expr>, CliError> {
        let Some(entry) = self.entries.get(key) else {
            return Ok(None);
        };
        singrev::parse(&entry.value).map(Some).map_err(|source| CliError::Syntax {
            path: self.path.to_path_buf(),
            line: entry.line,
            key,
            source,
        })
    }

    fn number(&self, key: &'static str) -> Result<Option<f64>, CliError> {
        let Some(e) = self.expr(key)? else {
            return Ok(None);
        };
        if e.depends_on_t() {
            return Err(self.at_line(key, "must be a constant".into()));
        }
        match e.eval(0.0) {
            Ok(v) => Ok(Some(v)),
            Err(err) => Err(self.at_line(key, err.reason.to_string())),
        }
    }

    fn positive(&self, key: &'static str) -> Result<Option<f64>, CliError> {
        match self.number(key)? {
            Some(v) if !(v > 0.0) => Err(self.at_line(key, format!("must be positive, got {v}"))),
            other => Ok(other),
        }
    }

    fn count(&self, key: &'static str) -> Result<Option<usize>, CliError> {
        let Some(entry) = self.entries.get(key) else {
            return Ok(None);
        };
        entry
            .value
            .parse::<usize>()
            .map(Some)
            .map_err(|_| self.at_line(key, format!("expected a non-negative integer, found `{}`", entry.value)))
    }

    fn path(&self, key: &'static str) -> Option<PathBuf> {
        self.entries.get(key).map(|e| PathBuf::from(&e.value))
    }
}
