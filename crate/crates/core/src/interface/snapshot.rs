//! Plain-text snapshots of a state.
//!
//! ```text
//! slipfilm-snapshot 1
//! model strong_slip
//! re 1e0
//! ...
//! n 128
//! t 5e-2
//! h
//! <x_center> <h>      (n lines)
//! u
//! <x_node> <u>        (n + 1 lines)
//! ```
//!
//! Floats are written with Rust's shortest round-trip formatting, so a read
//! reproduces every value bit for bit.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::constitutive::PhysParams;
use crate::discretization::{Field, Grid, Location, State};
use crate::dynamics::ModelKind;
use crate::error::{Error, Result};

pub const SNAPSHOT_MAGIC: &str = "slipfilm-snapshot";
pub const SNAPSHOT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub model: ModelKind,
    pub params: PhysParams,
    pub state: State,
}

pub fn format_snapshot(snap: &Snapshot) -> String {
    let p = &snap.params;
    let grid = snap.state.grid();
    let mut out = String::new();
    let _ = writeln!(out, "{SNAPSHOT_MAGIC} {SNAPSHOT_VERSION}");
    let _ = writeln!(out, "model {}", snap.model);
    for (k, v) in [
        ("re", p.re),
        ("beta", p.beta),
        ("sigma", p.sigma),
        ("nu", p.nu),
        ("alpha", p.alpha),
        ("b", p.b),
        ("eps", p.eps),
    ] {
        let _ = writeln!(out, "{k} {v:e}");
    }
    let _ = writeln!(out, "n {}", grid.n());
    let _ = writeln!(out, "t {:e}", snap.state.t());
    out.push_str("h\n");
    for (i, h) in snap.state.h().values().iter().enumerate() {
        let _ = writeln!(out, "{:e} {h:e}", grid.center(i));
    }
    out.push_str("u\n");
    for (j, u) in snap.state.u().values().iter().enumerate() {
        let _ = writeln!(out, "{:e} {u:e}", grid.node(j));
    }
    out
}

pub fn write_snapshot(path: &Path, snap: &Snapshot) -> Result<()> {
    fs::write(path, format_snapshot(snap)).map_err(|e| Error::io(path, e))
}

pub fn read_snapshot(path: &Path) -> Result<Snapshot> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_snapshot(&text).map_err(|reason| match reason {
        Error::Snapshot { reason, .. } => Error::Snapshot {
            path: path.to_path_buf(),
            reason,
        },
        other => other,
    })
}

fn bad(reason: impl Into<String>) -> Error {
    Error::Snapshot {
        path: PathBuf::new(),
        reason: reason.into(),
    }
}

struct Reader<'a> {
    lines: std::iter::Enumerate<std::str::Lines<'a>>,
}

impl<'a> Reader<'a> {
    fn next(&mut self, what: &str) -> Result<(usize, &'a str)> {
        self.lines
            .next()
            .map(|(i, l)| (i + 1, l.trim()))
            .ok_or_else(|| bad(format!("truncated: expected {what}")))
    }

    fn field(&mut self, name: &str) -> Result<(usize, &'a str)> {
        let (line, l) = self.next(name)?;
        let rest = l
            .strip_prefix(name)
            .filter(|r| r.starts_with(' '))
            .ok_or_else(|| bad(format!("line {line}: expected `{name} <value>`")))?;
        Ok((line, rest.trim()))
    }

    fn float(&mut self, name: &str) -> Result<f64> {
        let (line, v) = self.field(name)?;
        v.parse()
            .map_err(|_| bad(format!("line {line}: bad value `{v}` for {name}")))
    }

    fn column(&mut self, tag: &str, coords: &[f64]) -> Result<Vec<f64>> {
        let (line, l) = self.next(tag)?;
        if l != tag {
            return Err(bad(format!("line {line}: expected `{tag}`")));
        }
        coords
            .iter()
            .map(|&expect| {
                let (line, l) = self.next(&format!("a row of {tag}"))?;
                let malformed = || bad(format!("line {line}: malformed row `{l}`"));
                let mut parts = l.split_whitespace().map(|s| s.parse::<f64>());
                let (Some(Ok(x)), Some(Ok(v)), None) = (parts.next(), parts.next(), parts.next()) else {
                    return Err(malformed());
                };
                if x != expect {
                    return Err(bad(format!("line {line}: coordinate {x} does not match the grid")));
                }
                Ok(v)
            })
            .collect()
    }
}

/// Parses snapshot text. Errors carry an empty path; [`read_snapshot`] fills it in.
pub fn parse_snapshot(text: &str) -> Result<Snapshot> {
    let mut r = Reader {
        lines: text.lines().enumerate(),
    };
    let (_, head) = r.next("header")?;
    let version = head
        .strip_prefix(SNAPSHOT_MAGIC)
        .map(str::trim)
        .ok_or_else(|| bad("not a slipfilm snapshot"))?;
    if version != SNAPSHOT_VERSION.to_string() {
        return Err(bad(format!(
            "format version {version} is not supported (expected {SNAPSHOT_VERSION})"
        )));
    }
    let (line, model) = r.field("model")?;
    let model: ModelKind = model
        .parse()
        .map_err(|_| bad(format!("line {line}: unknown model `{model}`")))?;
    let params = PhysParams {
        re: r.float("re")?,
        beta: r.float("beta")?,
        sigma: r.float("sigma")?,
        nu: r.float("nu")?,
        alpha: r.float("alpha")?,
        b: r.float("b")?,
        eps: r.float("eps")?,
    };
    let (line, n) = r.field("n")?;
    let n: usize = n
        .parse()
        .map_err(|_| bad(format!("line {line}: bad cell count `{n}`")))?;
    let t = r.float("t")?;
    let grid = Grid::new(n).map_err(|e| bad(e.to_string()))?;
    let h = r.column("h", &grid.centers())?;
    let u = r.column("u", &grid.nodes())?;
    if let Some((i, extra)) = r.lines.find(|(_, l)| !l.trim().is_empty()) {
        return Err(bad(format!("line {}: trailing content `{extra}`", i + 1)));
    }

    params.validate()?;
    let state = State::new(
        Field::new(grid, Location::Centers, h)?,
        Field::new(grid, Location::Nodes, u)?,
        t,
    )?;
    Ok(Snapshot { model, params, state })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::CosineProfile;

    fn sample() -> Snapshot {
        let state = CosineProfile {
            u_amp: 0.37,
            ..CosineProfile::default()
        }
        .sample(Grid::new(16).unwrap())
        .unwrap()
        .with_time(0.1 + 0.2);
        Snapshot {
            model: ModelKind::FreeFilm,
            params: PhysParams {
                beta: f64::INFINITY,
                alpha: 1.0 / 3.0,
                ..PhysParams::default()
            },
            state,
        }
    }

    #[test]
    fn round_trip_is_exact() {
        let s = sample();
        let back = parse_snapshot(&format_snapshot(&s)).unwrap();
        assert_eq!(back, s);
        for (a, b) in back.state.h().values().iter().zip(s.state.h().values()) {
            assert_eq!(a.to_bits(), b.to_bits());
        }
    }

    #[test]
    fn truncated_file_is_malformed() {
        let text = format_snapshot(&sample());
        let cut: String = text.lines().take(20).map(|l| format!("{l}\n")).collect();
        assert!(matches!(parse_snapshot(&cut), Err(Error::Snapshot { .. })));
    }

    #[test]
    fn version_mismatch_is_rejected() {
        let text = format_snapshot(&sample()).replacen("slipfilm-snapshot 1", "slipfilm-snapshot 2", 1);
        let e = parse_snapshot(&text).unwrap_err();
        assert!(e.to_string().contains("version"), "{e}");
    }

    #[test]
    fn invariant_violation_on_read() {
        let text = format_snapshot(&sample());
        let mut lines: Vec<String> = text.lines().map(String::from).collect();
        // first h row
        let row = lines.iter().position(|l| l == "h").unwrap() + 1;
        let x = lines[row].split_whitespace().next().unwrap().to_string();
        lines[row] = format!("{x} -1e0");
        assert!(parse_snapshot(&lines.join("\n")).is_err());
    }
}
