//! Command layer: configuration, snapshots, and the `run`, `limits`,
//! `verify` and `resume` commands.

pub mod config;
pub mod snapshot;
pub mod verify;

use std::fmt;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::constitutive::PhysParams;
use crate::diagnostics::{
    bd_norm, coercivity_gap, energy, entropy_dissipation, entropy_functional, DiagnosticsRecord, DiagnosticsSink,
    CSV_HEADER,
};
use crate::discretization::{Grid, State};
use crate::dynamics::{advance, ModelKind};
use crate::error::{Error, Result};
use crate::experiments::{run_study, ConvergenceTable, InitialData, StudyKind, StudySetup};

pub use config::{default_run_control, parse_config, Config, InitialSource, OutputSettings, StudyBlock};
pub use snapshot::{format_snapshot, parse_snapshot, read_snapshot, write_snapshot, Snapshot};
pub use verify::{run_battery, CheckOutcome, Laws};

/// Overrides `[output] dir` when set.
pub const OUTPUT_DIR_ENV: &str = "SLIPFILM_OUTPUT_DIR";

pub const DIAGNOSTICS_FILE: &str = "diagnostics.csv";
pub const FINAL_SNAPSHOT: &str = "final.snap";
/// Written when adaptive stepping gives up, holding the last accepted state.
pub const LAST_VALID_SNAPSHOT: &str = "last_valid.snap";

/// Tolerances of the verdicts printed after a run.
pub const ENTROPY_TOL: f64 = 1e-6;
pub const COERCIVITY_TOL: f64 = 1e-12;

/// Process exit status for an error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Usage(_) | Error::Config { .. } => 2,
        Error::Io { .. } | Error::Snapshot { .. } => 3,
        Error::Positivity { .. } | Error::Singular { .. } | Error::Divergence { .. } | Error::NonConvergence { .. } => {
            4
        }
        Error::InvalidParameter { .. } | Error::Domain { .. } => 5,
    }
}

/// Exit status when a command ran but one of its checks failed.
pub const EXIT_CHECK_FAILED: i32 = 1;

/// Applies the environment override of the output directory.
pub fn apply_env_overrides(config: &mut Config) {
    if let Some(dir) = std::env::var_os(OUTPUT_DIR_ENV).filter(|d| !d.is_empty()) {
        config.output.dir = PathBuf::from(dir);
    }
}

pub fn load_config(path: &Path) -> Result<Config> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_config(&text)
}

/// Initial state of a config; a snapshot brings its own grid and time.
pub fn initial_state(config: &Config) -> Result<State> {
    match &config.initial {
        InitialSource::Cosine(c) => c.sample(Grid::new(config.grid_n)?),
        InitialSource::Snapshot(path) => Ok(read_snapshot(path)?.state),
    }
}

fn create_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

/// Pass/fail of one inequality tracked during a run.
#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub name: &'static str,
    /// `None` when the check does not apply to the model kind.
    pub worst: Option<f64>,
    pub tolerance: f64,
}

impl Verdict {
    pub fn passed(&self) -> bool {
        self.worst.map_or(true, |w| w <= self.tolerance)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.worst {
            None => write!(f, "{:<11} n/a", self.name),
            Some(w) => write!(
                f,
                "{:<11} {} worst={w:.3e} tol={:.1e}",
                self.name,
                if self.passed() { "PASS" } else { "FAIL" },
                self.tolerance
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub model: ModelKind,
    pub steps: usize,
    pub t_end: f64,
    pub mass_drift: f64,
    /// `E(0) - E(t_end)`.
    pub energy_drop: f64,
    pub min_h: f64,
    pub verdicts: Vec<Verdict>,
    pub final_state: State,
    pub diagnostics: PathBuf,
}

impl RunSummary {
    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(Verdict::passed)
    }
}

impl fmt::Display for RunSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "model        {}", self.model)?;
        writeln!(f, "t_end        {:e}", self.t_end)?;
        writeln!(f, "steps        {}", self.steps)?;
        writeln!(f, "mass drift   {:.3e}", self.mass_drift)?;
        writeln!(f, "energy drop  {:.6e}", self.energy_drop)?;
        writeln!(f, "min h        {:.6e}", self.min_h)?;
        for v in &self.verdicts {
            writeln!(f, "{v}")?;
        }
        write!(f, "diagnostics  {}", self.diagnostics.display())
    }
}

/// Streams diagnostics to CSV and snapshots to disk while tracking the
/// energy, entropy, coercivity and lower-bound verdicts on the fly.
struct RunMonitor {
    csv: BufWriter<File>,
    dir: PathBuf,
    model: ModelKind,
    params: PhysParams,
    eff: PhysParams,
    output: OutputSettings,
    steps: usize,
    pending: Option<DiagnosticsRecord>,
    failure: Option<Error>,
    energy_prev: f64,
    energy_worst: f64,
    entropy: Option<EntropyTrack>,
    coercivity_worst: f64,
    min_h: f64,
}

struct EntropyTrack {
    s0: f64,
    integral: f64,
    d_prev: f64,
    t_prev: f64,
    worst: f64,
}

/// Entropy balance is tracked for the velocity kinds without smoothing.
fn tracks_entropy(kind: ModelKind) -> bool {
    kind.has_velocity() && kind != ModelKind::Regularized
}

impl RunMonitor {
    fn new(config: &Config, initial: &State, eff: PhysParams) -> Result<Self> {
        let dir = config.output.dir.clone();
        let path = dir.join(DIAGNOSTICS_FILE);
        let file = File::create(&path).map_err(|e| Error::io(&path, e))?;
        let mut monitor = RunMonitor {
            csv: BufWriter::new(file),
            dir,
            model: config.model,
            params: config.params,
            eff,
            output: config.output.clone(),
            steps: 0,
            pending: None,
            failure: None,
            energy_prev: energy(initial, &eff),
            energy_worst: 0.0,
            entropy: tracks_entropy(config.model).then(|| EntropyTrack {
                s0: entropy_functional(initial, &eff),
                integral: 0.0,
                d_prev: entropy_dissipation(initial, &eff),
                t_prev: initial.t(),
                worst: 0.0,
            }),
            coercivity_worst: 0.0,
            min_h: initial.h().min(),
        };
        monitor.write_line(CSV_HEADER);
        let first = DiagnosticsRecord::new(initial, &config.params, config.model, 0.0)?;
        monitor.write_line(&first.csv_row());
        monitor.check_coercivity(initial);
        Ok(monitor)
    }

    fn write_line(&mut self, line: &str) {
        if self.failure.is_some() {
            return;
        }
        if let Err(e) = writeln!(self.csv, "{line}") {
            self.failure = Some(Error::io(self.dir.join(DIAGNOSTICS_FILE), e));
        }
    }

    fn snapshot(&mut self, name: &str, state: &State) {
        if self.failure.is_some() {
            return;
        }
        let snap = Snapshot {
            model: self.model,
            params: self.params,
            state: state.clone(),
        };
        if let Err(e) = write_snapshot(&self.dir.join(name), &snap) {
            self.failure = Some(e);
        }
    }

    fn check_coercivity(&mut self, state: &State) {
        if !tracks_entropy(self.model) {
            return;
        }
        let p = &self.eff;
        let scale = 1.0 + bd_norm(state, p).abs() + (p.re * energy(state, p)).abs();
        self.coercivity_worst = self.coercivity_worst.max(-coercivity_gap(state, p) / scale);
    }

    /// Flushes the last record if the cadence skipped it.
    fn finish(&mut self) -> Result<()> {
        if let Some(r) = self.pending.take() {
            self.write_line(&r.csv_row());
        }
        if self.failure.is_none() {
            if let Err(e) = self.csv.flush() {
                self.failure = Some(Error::io(self.dir.join(DIAGNOSTICS_FILE), e));
            }
        }
        self.failure.take().map_or(Ok(()), Err)
    }

    fn verdicts(&self, h_floor: f64) -> Vec<Verdict> {
        let entropy = self.entropy.as_ref();
        vec![
            Verdict {
                name: "energy",
                worst: Some(self.energy_worst),
                tolerance: ENERGY_TOL,
            },
            Verdict {
                name: "entropy",
                worst: entropy.map(|e| e.worst),
                tolerance: ENTROPY_TOL,
            },
            Verdict {
                name: "coercivity",
                worst: tracks_entropy(self.model).then_some(self.coercivity_worst),
                tolerance: COERCIVITY_TOL,
            },
            Verdict {
                name: "lower_bound",
                // relative shortfall below ten times the floor
                worst: Some(((10.0 * h_floor - self.min_h) / (10.0 * h_floor)).max(0.0)),
                tolerance: 0.0,
            },
        ]
    }
}

/// Per-step energy non-increase tolerance, relative to `1 + |E|`.
pub const ENERGY_TOL: f64 = 1e-8;

impl DiagnosticsSink for RunMonitor {
    fn record(&mut self, record: &DiagnosticsRecord, state: &State) {
        self.steps += 1;
        let e = energy(state, &self.eff);
        self.energy_worst = self
            .energy_worst
            .max((e - self.energy_prev) / (1.0 + self.energy_prev.abs()));
        self.energy_prev = e;
        self.min_h = self.min_h.min(record.min_h);
        if let Some(track) = self.entropy.as_mut() {
            let d = entropy_dissipation(state, &self.eff);
            track.integral += 0.5 * (track.d_prev + d) * (state.t() - track.t_prev);
            track.d_prev = d;
            track.t_prev = state.t();
            let s = entropy_functional(state, &self.eff);
            track.worst = track
                .worst
                .max((s + track.integral - track.s0) / (1.0 + track.s0.abs()));
        }
        self.check_coercivity(state);

        if self.steps % self.output.diagnostics_every == 0 {
            self.pending = None;
            self.write_line(&record.csv_row());
        } else {
            self.pending = Some(*record);
        }
        if self.output.snapshot_every > 0 && self.steps % self.output.snapshot_every == 0 {
            self.snapshot(&format!("snapshot_{:06}.snap", self.steps), state);
        }
    }
}

/// Advances a configuration to `t_end`, writing `diagnostics.csv`,
/// periodic snapshots and `final.snap` into the output directory.
///
/// Solver errors are returned after the outputs written so far are flushed;
/// a step-size collapse additionally leaves `last_valid.snap`.
pub fn cmd_run(config: &Config) -> Result<RunSummary> {
    if config.study.is_some() {
        return Err(Error::usage("this config has a [study] block; use `limits`"));
    }
    let initial = initial_state(config)?;
    let eff = config.model.effective_params(&config.params)?;
    if !(config.t_end > initial.t()) {
        return Err(Error::usage(format!(
            "t_end = {} must exceed the initial time {}",
            config.t_end,
            initial.t()
        )));
    }
    create_dir(&config.output.dir)?;
    let mut monitor = RunMonitor::new(config, &initial, eff)?;
    let result = advance(
        &initial,
        &config.params,
        config.model,
        config.t_end,
        &config.control,
        &mut monitor,
    );
    let written = monitor.finish();
    let final_state = match result {
        Ok(s) => s,
        Err(e) => {
            if let Error::NonConvergence { last_state, .. } = &e {
                monitor.snapshot(LAST_VALID_SNAPSHOT, last_state);
            }
            return Err(e);
        }
    };
    written?;
    monitor.snapshot(FINAL_SNAPSHOT, &final_state);
    if let Some(e) = monitor.failure.take() {
        return Err(e);
    }

    let m0 = initial.mass();
    Ok(RunSummary {
        model: config.model,
        steps: monitor.steps,
        t_end: final_state.t(),
        mass_drift: ((final_state.mass() - m0) / m0).abs(),
        energy_drop: energy(&initial, &eff) - energy(&final_state, &eff),
        min_h: monitor.min_h,
        verdicts: monitor.verdicts(config.control.h_floor),
        diagnostics: config.output.dir.join(DIAGNOSTICS_FILE),
        final_state,
    })
}

/// Continues a snapshot to `t_end` with the default step control.
pub fn resume_config(snapshot_path: &Path, t_end: f64) -> Result<Config> {
    let snap = read_snapshot(snapshot_path)?;
    Ok(Config {
        model: snap.model,
        params: snap.params,
        grid_n: snap.state.grid().n(),
        initial: InitialSource::Snapshot(snapshot_path.to_path_buf()),
        t_end,
        control: default_run_control(),
        output: OutputSettings::default(),
        study: None,
    })
}

pub fn cmd_resume(snapshot_path: &Path, t_end: f64, output_dir: Option<&Path>) -> Result<RunSummary> {
    let mut config = resume_config(snapshot_path, t_end)?;
    if let Some(dir) = output_dir {
        config.output.dir = dir.to_path_buf();
    }
    cmd_run(&config)
}

#[derive(Debug, Clone, PartialEq)]
pub struct LimitsOutcome {
    pub table: ConvergenceTable,
    pub csv: PathBuf,
    pub report: PathBuf,
    pub warnings: Vec<String>,
}

impl LimitsOutcome {
    /// Monotone decrease of the height errors, and of the velocity errors
    /// in the small-slip study.
    pub fn passed(&self) -> bool {
        self.table.is_monotone() && (self.table.study != StudyKind::BetaToZero || self.table.velocity_is_monotone())
    }
}

/// The study setup described by a config with a `[study]` block.
pub fn study_setup(config: &Config) -> Result<(StudyKind, StudySetup)> {
    let block = config
        .study
        .as_ref()
        .ok_or_else(|| Error::usage("`limits` needs a [study] block"))?;
    let initial = match &config.initial {
        InitialSource::Cosine(c) => InitialData::Cosine(*c),
        InitialSource::Snapshot(path) => InitialData::Given(read_snapshot(path)?.state),
    };
    let n = match &initial {
        InitialData::Given(s) => s.grid().n(),
        InitialData::Cosine(_) => config.grid_n,
    };
    Ok((
        block.study,
        StudySetup {
            params: config.params,
            initial,
            n,
            t_end: config.t_end,
            dt: config.control.dt,
            h_floor: config.control.h_floor,
            values: block.values.clone(),
            model: config.model,
        },
    ))
}

/// Runs the study of the config and writes `<study>.csv` and `<study>.txt`.
pub fn cmd_limits(config: &Config) -> Result<LimitsOutcome> {
    let (study, setup) = study_setup(config)?;
    let table = run_study(study, &setup)?;
    let mut warnings = Vec::new();
    if table.rows.len() < 2 {
        warnings.push("a single-value ladder has no observed order".to_string());
    }
    create_dir(&config.output.dir)?;
    let csv = config.output.dir.join(format!("{study}.csv"));
    let report = config.output.dir.join(format!("{study}.txt"));
    fs::write(&csv, table.to_csv()).map_err(|e| Error::io(&csv, e))?;
    fs::write(&report, table.report()).map_err(|e| Error::io(&report, e))?;
    Ok(LimitsOutcome {
        table,
        csv,
        report,
        warnings,
    })
}

/// Runs the property battery and returns the outcomes in order.
pub fn cmd_verify(laws: &Laws) -> Vec<CheckOutcome> {
    run_battery(laws)
}

/// The pass/fail table printed by `verify`.
pub fn format_battery(outcomes: &[CheckOutcome]) -> String {
    let mut out = String::new();
    for c in outcomes {
        out.push_str(&format!(
            "{:<34} {}  {}\n",
            c.name,
            if c.passed { "PASS" } else { "FAIL" },
            c.detail
        ));
    }
    out
}
