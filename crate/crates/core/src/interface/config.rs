//! Run configuration: a flat sectioned `key = value` text format.
//!
//! ```text
//! [model]
//! kind = strong_slip
//!
//! [params]
//! re = 1
//! beta = inf        # only beta accepts inf
//!
//! [grid]
//! n = 128
//!
//! [initial]
//! family = cosine   # or: snapshot = path/to/file.snap
//! mean = 1
//! amp = 0.1
//! k = 1
//!
//! [time]
//! t_end = 0.1
//!
//! [output]
//! dir = out
//!
//! [study]
//! parameter = beta_to_zero
//! values = 0.1, 0.03, 0.01
//! ```
//!
//! `#` starts a comment. Values may be double-quoted. Every key is optional
//! except `[model] kind`; unknown sections and keys are rejected.

use std::collections::HashSet;
use std::path::PathBuf;

use crate::constitutive::PhysParams;
use crate::discretization::Grid;
use crate::dynamics::{ModelKind, StepControl};
use crate::error::{Error, Result};
use crate::experiments::{CosineProfile, StudyKind};

/// Where the initial state comes from.
#[derive(Debug, Clone, PartialEq)]
pub enum InitialSource {
    Cosine(CosineProfile),
    Snapshot(PathBuf),
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutputSettings {
    pub dir: PathBuf,
    /// Write a snapshot every this many accepted steps (0: final state only).
    pub snapshot_every: usize,
    /// Write a diagnostics row every this many accepted steps. The initial and
    /// final rows are always written.
    pub diagnostics_every: usize,
}

impl Default for OutputSettings {
    fn default() -> Self {
        OutputSettings {
            dir: PathBuf::from("slipfilm-out"),
            snapshot_every: 0,
            diagnostics_every: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StudyBlock {
    pub study: StudyKind,
    pub values: Vec<f64>,
    /// Limit model; only the study's own reference is accepted.
    pub reference: Option<ModelKind>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    pub model: ModelKind,
    pub params: PhysParams,
    pub grid_n: usize,
    pub initial: InitialSource,
    pub t_end: f64,
    pub control: StepControl,
    pub output: OutputSettings,
    pub study: Option<StudyBlock>,
}

/// Step control used when the `[time]` section leaves a field out. The
/// steps are small enough that the entropy check of a run passes on the
/// default cosine data.
pub fn default_run_control() -> StepControl {
    StepControl {
        dt: 1e-5,
        dt_min: 1e-12,
        dt_max: 2e-5,
        ..StepControl::default()
    }
}

pub const DEFAULT_T_END: f64 = 0.1;
/// `t_end` of a study when `[time]` does not set one.
pub const DEFAULT_STUDY_T_END: f64 = 0.05;

const SECTIONS: &[(&str, &[&str])] = &[
    ("model", &["kind"]),
    ("params", &["re", "beta", "sigma", "nu", "alpha", "b", "eps"]),
    ("grid", &["n"]),
    ("initial", &["family", "mean", "amp", "k", "u_amp", "snapshot"]),
    (
        "time",
        &[
            "t_end",
            "dt",
            "dt_min",
            "dt_max",
            "cfl_factor",
            "energy_guard_tol",
            "h_floor",
        ],
    ),
    ("output", &["dir", "snapshot_every", "diagnostics_every"]),
    ("study", &["parameter", "values", "reference"]),
];

struct Entry {
    line: usize,
    section: &'static str,
    key: &'static str,
    value: String,
}

fn err(line: usize, key: &str, reason: impl Into<String>) -> Error {
    Error::Config {
        line,
        key: key.to_string(),
        reason: reason.into(),
    }
}

fn tokenize(text: &str) -> Result<Vec<Entry>> {
    let mut entries: Vec<Entry> = Vec::new();
    let mut seen = HashSet::new();
    let mut section: Option<(&'static str, &'static [&'static str])> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let body = strip_comment(raw).trim();
        if body.is_empty() {
            continue;
        }
        if let Some(name) = body.strip_prefix('[') {
            let name = name
                .strip_suffix(']')
                .ok_or_else(|| err(line, body, "unterminated section header"))?
                .trim();
            let found = SECTIONS
                .iter()
                .find(|(s, _)| *s == name)
                .ok_or_else(|| err(line, name, "unknown section"))?;
            section = Some((found.0, found.1));
            continue;
        }
        let (key, value) = body
            .split_once('=')
            .ok_or_else(|| err(line, body, "expected `key = value`"))?;
        let key = key.trim();
        let (sec, keys) = section.ok_or_else(|| err(line, key, "key outside of any section"))?;
        let key = keys
            .iter()
            .copied()
            .find(|k| *k == key)
            .ok_or_else(|| err(line, key, format!("unknown key in [{sec}]")))?;
        if !seen.insert((sec, key)) {
            return Err(err(line, key, "duplicate key"));
        }
        let value = value.trim();
        let value = value
            .strip_prefix('"')
            .and_then(|v| v.strip_suffix('"'))
            .unwrap_or(value);
        entries.push(Entry {
            line,
            section: sec,
            key,
            value: value.to_string(),
        });
    }
    Ok(entries)
}

fn strip_comment(line: &str) -> &str {
    let mut in_quotes = false;
    for (i, c) in line.char_indices() {
        match c {
            '"' => in_quotes = !in_quotes,
            '#' if !in_quotes => return &line[..i],
            _ => {}
        }
    }
    line
}

fn number(e: &Entry) -> Result<f64> {
    let v: f64 = e
        .value
        .parse()
        .map_err(|_| err(e.line, e.key, format!("`{}` is not a number", e.value)))?;
    if !v.is_finite() {
        return Err(err(e.line, e.key, "must be finite"));
    }
    Ok(v)
}

fn integer(e: &Entry) -> Result<usize> {
    e.value
        .parse()
        .map_err(|_| err(e.line, e.key, format!("`{}` is not a non-negative integer", e.value)))
}

/// Parses and validates a configuration.
pub fn parse_config(text: &str) -> Result<Config> {
    let entries = tokenize(text)?;
    let find = |section: &str, key: &str| entries.iter().find(|e| e.section == section && e.key == key);

    let kind_entry = find("model", "kind").ok_or_else(|| err(0, "kind", "missing required key in [model]"))?;
    let model: ModelKind = kind_entry.value.parse().map_err(|_| {
        err(
            kind_entry.line,
            "kind",
            format!("unknown model kind `{}`", kind_entry.value),
        )
    })?;

    let mut params = PhysParams::default();
    for e in entries.iter().filter(|e| e.section == "params") {
        let v = if e.key == "beta" && e.value == "inf" {
            f64::INFINITY
        } else {
            number(e)?
        };
        match e.key {
            "re" => params.re = v,
            "beta" => params.beta = v,
            "sigma" => params.sigma = v,
            "nu" => params.nu = v,
            "alpha" => params.alpha = v,
            "b" => params.b = v,
            _ => params.eps = v,
        }
    }
    let params_line = |name: &str| find("params", name).map_or(0, |e| e.line);
    params.validate().map_err(|e| match e {
        Error::InvalidParameter { name, reason } => err(params_line(name), name, reason),
        other => other,
    })?;
    model.effective_params(&params).map_err(|e| match e {
        Error::InvalidParameter { name, reason } => err(params_line(name), name, reason),
        other => other,
    })?;

    let grid_n = match find("grid", "n") {
        Some(e) => {
            let n = integer(e)?;
            Grid::new(n).map_err(|x| err(e.line, "n", x.to_string()))?;
            n
        }
        None => 128,
    };

    let initial = if let Some(e) = find("initial", "snapshot") {
        if let Some(other) = entries.iter().find(|o| o.section == "initial" && o.key != "snapshot") {
            return Err(err(other.line, other.key, "not allowed together with `snapshot`"));
        }
        InitialSource::Snapshot(PathBuf::from(&e.value))
    } else {
        let mut c = CosineProfile::default();
        for e in entries.iter().filter(|e| e.section == "initial") {
            match e.key {
                "family" if e.value != "cosine" => {
                    return Err(err(e.line, e.key, format!("unknown family `{}`", e.value)));
                }
                "family" => {}
                "mean" => c.mean = number(e)?,
                "amp" => c.amp = number(e)?,
                "k" => {
                    let k = integer(e)?;
                    c.k = u32::try_from(k).map_err(|_| err(e.line, "k", "too large"))?;
                }
                _ => c.u_amp = number(e)?,
            }
        }
        c.validate().map_err(|x| match x {
            Error::InvalidParameter { name, reason } => err(find("initial", name).map_or(0, |e| e.line), name, reason),
            other => other,
        })?;
        InitialSource::Cosine(c)
    };

    let study = parse_study(&entries)?;
    let mut control = default_run_control();
    let mut t_end = if study.is_some() {
        DEFAULT_STUDY_T_END
    } else {
        DEFAULT_T_END
    };
    for e in entries.iter().filter(|e| e.section == "time") {
        let v = number(e)?;
        match e.key {
            "t_end" => t_end = v,
            "dt" => control.dt = v,
            "dt_min" => control.dt_min = v,
            "dt_max" => control.dt_max = v,
            "cfl_factor" => control.cfl_factor = v,
            "energy_guard_tol" => control.energy_guard_tol = v,
            _ => control.h_floor = v,
        }
    }
    // a dt beyond the default ceiling lifts it, so `dt = ...` alone is enough
    if find("time", "dt_max").is_none() && control.dt > control.dt_max {
        control.dt_max = control.dt;
    }
    if !(t_end > 0.0) {
        return Err(err(
            find("time", "t_end").map_or(0, |e| e.line),
            "t_end",
            "must be positive",
        ));
    }
    control.validate().map_err(|x| match x {
        Error::InvalidParameter { name, reason } => err(find("time", name).map_or(0, |e| e.line), name, reason),
        other => other,
    })?;

    let mut output = OutputSettings::default();
    for e in entries.iter().filter(|e| e.section == "output") {
        match e.key {
            "dir" => output.dir = PathBuf::from(&e.value),
            "snapshot_every" => output.snapshot_every = integer(e)?,
            _ => {
                output.diagnostics_every = integer(e)?;
                if output.diagnostics_every == 0 {
                    return Err(err(e.line, e.key, "must be at least 1"));
                }
            }
        }
    }

    Ok(Config {
        model,
        params,
        grid_n,
        initial,
        t_end,
        control,
        output,
        study,
    })
}

fn parse_study(entries: &[Entry]) -> Result<Option<StudyBlock>> {
    let in_study: Vec<&Entry> = entries.iter().filter(|e| e.section == "study").collect();
    if in_study.is_empty() {
        return Ok(None);
    }
    let get = |k: &str| in_study.iter().find(|e| e.key == k);
    let p = get("parameter").ok_or_else(|| err(in_study[0].line, "parameter", "missing required key in [study]"))?;
    let study: StudyKind = p
        .value
        .parse()
        .map_err(|_| err(p.line, "parameter", format!("unknown study `{}`", p.value)))?;
    let values = match get("values") {
        Some(e) => {
            let vals = e
                .value
                .split(',')
                .map(|s| {
                    s.trim()
                        .parse::<f64>()
                        .ok()
                        .filter(|v| v.is_finite() && *v > 0.0)
                        .ok_or_else(|| err(e.line, "values", format!("`{}` is not a positive number", s.trim())))
                })
                .collect::<Result<Vec<_>>>()?;
            if vals.is_empty() {
                return Err(err(e.line, "values", "empty ladder"));
            }
            vals
        }
        None => study.default_ladder(),
    };
    let reference = match get("reference") {
        Some(e) => {
            let r: ModelKind = e
                .value
                .parse()
                .map_err(|_| err(e.line, "reference", format!("unknown model kind `{}`", e.value)))?;
            if study.reference() != Some(r) {
                return Err(err(
                    e.line,
                    "reference",
                    format!(
                        "the {study} study compares against {:?}",
                        study.reference().map(|k| k.name())
                    ),
                ));
            }
            Some(r)
        }
        None => None,
    };
    Ok(Some(StudyBlock {
        study,
        values,
        reference,
    }))
}
