//! Parameter-limit studies and grid self-convergence.
//!
//! Every study runs one family member per ladder value plus a reference
//! model from the same initial data to a common time, then tabulates the
//! distance of each member from the reference. Members are independent and
//! run on separate threads.

use std::f64::consts::PI;
use std::fmt::{self, Write as _};
use std::str::FromStr;
use std::thread;

use crate::constitutive::PhysParams;
use crate::diagnostics::NullSink;
use crate::discretization::{div_n2c, grad_c2n, Field, Grid, Location, State};
use crate::dynamics::{advance, ModelKind, StepControl};
use crate::error::{Error, Result};

/// Discrete norms of a difference.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Norms {
    pub l2: f64,
    pub linf: f64,
    /// `H^1` seminorm: L2 norm of the discrete derivative.
    pub h1: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct StateErrors {
    pub h: Norms,
    pub u: Norms,
}

/// Norms of `a - b` for two fields on the same grid and location.
pub fn compare_fields(a: &Field, b: &Field) -> Result<Norms> {
    if a.grid() != b.grid() || a.location() != b.location() {
        return Err(Error::usage("fields live on different grids or locations"));
    }
    let dx = a.grid().dx();
    let d: Vec<f64> = a.values().iter().zip(b.values()).map(|(x, y)| x - y).collect();
    let linf = d.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let (l2sq, h1sq) = match a.location() {
        Location::Centers => {
            let g = grad_c2n(&d, dx);
            (sum_sq(&d) * dx, trapezoid_sq(&g) * dx)
        }
        Location::Nodes => {
            let g = div_n2c(&d, dx);
            (trapezoid_sq(&d) * dx, sum_sq(&g) * dx)
        }
    };
    Ok(Norms {
        l2: l2sq.sqrt(),
        linf,
        h1: h1sq.sqrt(),
    })
}

fn sum_sq(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum()
}

fn trapezoid_sq(v: &[f64]) -> f64 {
    let n = v.len() - 1;
    sum_sq(v) - 0.5 * (v[0] * v[0] + v[n] * v[n])
}

/// Norms of the height and velocity differences of two states.
pub fn compare_states(a: &State, b: &State) -> Result<StateErrors> {
    if a.grid() != b.grid() {
        return Err(Error::usage("states live on different grids"));
    }
    Ok(StateErrors {
        h: compare_fields(a.h(), b.h())?,
        u: compare_fields(a.u(), b.u())?,
    })
}

/// `h0 = mean + amp cos(k pi x)`, `u0 = u_amp sin(k pi x)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CosineProfile {
    pub mean: f64,
    pub amp: f64,
    pub k: u32,
    pub u_amp: f64,
}

impl Default for CosineProfile {
    fn default() -> Self {
        CosineProfile {
            mean: 1.0,
            amp: 0.1,
            k: 1,
            u_amp: 0.0,
        }
    }
}

impl CosineProfile {
    pub fn validate(&self) -> Result<()> {
        if !(self.mean > 0.0 && self.mean.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "mean",
                reason: "must be positive".into(),
            });
        }
        if !(self.amp.abs() < self.mean) {
            return Err(Error::InvalidParameter {
                name: "amp",
                reason: format!("|amp| must be below mean = {} to keep h0 positive", self.mean),
            });
        }
        if self.k == 0 {
            return Err(Error::InvalidParameter {
                name: "k",
                reason: "wavenumber must be a positive integer".into(),
            });
        }
        if !self.u_amp.is_finite() {
            return Err(Error::InvalidParameter {
                name: "u_amp",
                reason: "must be finite".into(),
            });
        }
        Ok(())
    }

    pub fn sample(&self, grid: Grid) -> Result<State> {
        self.validate()?;
        let q = self.k as f64 * PI;
        let h = Field::from_fn(grid, Location::Centers, |x| self.mean + self.amp * (q * x).cos());
        let n = grid.n();
        let u: Vec<f64> = (0..=n)
            .map(|j| {
                if j == 0 || j == n {
                    0.0
                } else {
                    self.u_amp * (q * grid.node(j)).sin()
                }
            })
            .collect();
        State::new(h, Field::new(grid, Location::Nodes, u)?, 0.0)
    }
}

/// Where a study takes its initial data from.
#[derive(Debug, Clone, PartialEq)]
pub enum InitialData {
    Cosine(CosineProfile),
    /// A fixed state; only usable at its own resolution.
    Given(State),
}

impl InitialData {
    pub fn sample(&self, n: usize) -> Result<State> {
        match self {
            InitialData::Cosine(c) => c.sample(Grid::new(n)?),
            InitialData::Given(s) if s.grid().n() == n => Ok(s.clone().with_time(0.0)),
            InitialData::Given(s) => Err(Error::usage(format!(
                "initial state has {} cells, the study needs {n}",
                s.grid().n()
            ))),
        }
    }
}

/// The six studies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StudyKind {
    BetaToZero,
    ReToZero,
    BetaToInfinity,
    SigmaToZero,
    EpsilonToZero,
    SelfConvergence,
}

impl StudyKind {
    pub const ALL: [StudyKind; 6] = [
        StudyKind::BetaToZero,
        StudyKind::ReToZero,
        StudyKind::BetaToInfinity,
        StudyKind::SigmaToZero,
        StudyKind::EpsilonToZero,
        StudyKind::SelfConvergence,
    ];

    pub fn name(self) -> &'static str {
        match self {
            StudyKind::BetaToZero => "beta_to_zero",
            StudyKind::ReToZero => "re_to_zero",
            StudyKind::BetaToInfinity => "beta_to_infinity",
            StudyKind::SigmaToZero => "sigma_to_zero",
            StudyKind::EpsilonToZero => "epsilon_to_zero",
            StudyKind::SelfConvergence => "self_convergence",
        }
    }

    /// Name of the varied parameter as it appears in table headers.
    pub fn parameter(self) -> &'static str {
        match self {
            StudyKind::BetaToZero | StudyKind::BetaToInfinity => "beta",
            StudyKind::ReToZero => "re",
            StudyKind::SigmaToZero => "sigma",
            StudyKind::EpsilonToZero => "eps",
            StudyKind::SelfConvergence => "n",
        }
    }

    pub fn default_ladder(self) -> Vec<f64> {
        match self {
            StudyKind::BetaToZero => vec![0.1, 0.03, 0.01, 0.003],
            StudyKind::ReToZero => vec![1.0, 0.3, 0.1, 0.03],
            StudyKind::BetaToInfinity => vec![1.0, 10.0, 100.0, 1000.0],
            StudyKind::SigmaToZero => vec![1.0, 0.3, 0.1, 0.03],
            StudyKind::EpsilonToZero => vec![1e-2, 1e-3, 1e-4],
            StudyKind::SelfConvergence => vec![64.0, 128.0, 256.0],
        }
    }

    /// The limit model the members are compared against, when there is one.
    pub fn reference(self) -> Option<ModelKind> {
        match self {
            StudyKind::BetaToZero => Some(ModelKind::IntermediateSlip),
            StudyKind::ReToZero => Some(ModelKind::Stokes),
            StudyKind::BetaToInfinity => Some(ModelKind::FreeFilm),
            StudyKind::SigmaToZero => Some(ModelKind::NoCapillarity),
            StudyKind::EpsilonToZero => Some(ModelKind::StrongSlip),
            StudyKind::SelfConvergence => None,
        }
    }

    /// The kind each ladder member runs.
    pub fn member(self) -> ModelKind {
        match self {
            StudyKind::BetaToZero => ModelKind::ScaledStrongSlip,
            StudyKind::EpsilonToZero => ModelKind::Regularized,
            _ => ModelKind::StrongSlip,
        }
    }
}

impl fmt::Display for StudyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for StudyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        StudyKind::ALL
            .iter()
            .copied()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::usage(format!("unknown study `{s}`")))
    }
}

/// Common settings of a study.
#[derive(Debug, Clone, PartialEq)]
pub struct StudySetup {
    pub params: PhysParams,
    pub initial: InitialData,
    pub n: usize,
    pub t_end: f64,
    /// Fixed step of every member run. Self-convergence scales it with
    /// `dx^2`, taking this value at `n`.
    pub dt: f64,
    pub h_floor: f64,
    /// Ladder in the limit direction.
    pub values: Vec<f64>,
    /// Model kind refined by the self-convergence study.
    pub model: ModelKind,
}

impl StudySetup {
    pub fn new(study: StudyKind) -> Self {
        StudySetup {
            params: PhysParams::default(),
            initial: InitialData::Cosine(CosineProfile::default()),
            n: 128,
            t_end: 0.05,
            dt: 1e-5,
            h_floor: 1e-8,
            values: study.default_ladder(),
            model: ModelKind::StrongSlip,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRow {
    pub param: f64,
    pub error_l2: f64,
    pub error_linf: f64,
    pub error_h1: f64,
    /// Observed order of the max-norm error from the previous row.
    pub order: Option<f64>,
    /// L2 error of the velocity, where the study compares velocities.
    pub u_error_l2: Option<f64>,
    /// Smallest height of the member at the final time.
    pub min_h: f64,
    /// `eps/2 int h_xxx^2` of the regularized member at the final time.
    pub eps_energy: Option<f64>,
    /// Why the member run failed, if it did.
    pub failure: Option<String>,
}

impl ConvergenceRow {
    fn failed(param: f64, err: &Error) -> Self {
        ConvergenceRow {
            param,
            error_l2: f64::NAN,
            error_linf: f64::NAN,
            error_h1: f64::NAN,
            order: None,
            u_error_l2: None,
            min_h: f64::NAN,
            eps_energy: None,
            failure: Some(format!("{}: {err}", err.code())),
        }
    }
}

/// Errors at or below this are treated as round-off.
pub const ROUNDOFF: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceTable {
    pub study: StudyKind,
    pub parameter: String,
    pub reference: String,
    pub rows: Vec<ConvergenceRow>,
}

impl ConvergenceTable {
    fn new(study: StudyKind, reference: String, mut rows: Vec<ConvergenceRow>) -> Self {
        for k in 1..rows.len() {
            let (a, b) = (&rows[k - 1], &rows[k]);
            let usable =
                a.failure.is_none() && b.failure.is_none() && a.error_linf > ROUNDOFF && b.error_linf > ROUNDOFF;
            rows[k].order = usable.then(|| (a.error_linf / b.error_linf).ln() / (b.param / a.param).ln().abs());
        }
        ConvergenceTable {
            study,
            parameter: study.parameter().to_string(),
            reference,
            rows,
        }
    }

    /// Max-norm errors strictly decrease down the table (pairs that are both
    /// at round-off count as decreasing). Failed rows break monotonicity.
    pub fn is_monotone(&self) -> bool {
        self.rows.iter().all(|r| r.failure.is_none())
            && self.rows.windows(2).all(|w| {
                w[1].error_linf < w[0].error_linf || (w[0].error_linf <= ROUNDOFF && w[1].error_linf <= ROUNDOFF)
            })
    }

    /// Velocity errors (where present) strictly decrease down the table.
    pub fn velocity_is_monotone(&self) -> bool {
        self.rows.windows(2).all(|w| match (w[0].u_error_l2, w[1].u_error_l2) {
            (Some(a), Some(b)) => b < a || (a <= ROUNDOFF && b <= ROUNDOFF),
            _ => true,
        })
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("param,error_L2,error_Linf,error_H1,order\n");
        for r in &self.rows {
            let order = r.order.map(|o| format!("{o:e}")).unwrap_or_default();
            let _ = writeln!(
                out,
                "{:e},{:e},{:e},{:e},{}",
                r.param, r.error_l2, r.error_linf, r.error_h1, order
            );
        }
        out
    }

    /// Aligned plain-text report with the extra columns.
    pub fn report(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "study: {}  (reference: {})", self.study, self.reference);
        let _ = writeln!(
            out,
            "{:>12} {:>12} {:>12} {:>12} {:>8} {:>12} {:>12} {:>12}",
            self.parameter, "err_L2", "err_Linf", "err_H1", "order", "u_err_L2", "min_h", "eps_energy"
        );
        let opt = |v: Option<f64>, w: usize, prec: usize| match v {
            Some(x) => format!("{x:>w$.prec$e}"),
            None => format!("{:>w$}", "-"),
        };
        for r in &self.rows {
            if let Some(f) = &r.failure {
                let _ = writeln!(out, "{:>12.4e} FAILED {f}", r.param);
                continue;
            }
            let order = r
                .order
                .map(|o| format!("{o:>8.3}"))
                .unwrap_or_else(|| format!("{:>8}", "-"));
            let _ = writeln!(
                out,
                "{:>12.4e} {:>12.4e} {:>12.4e} {:>12.4e} {} {} {:>12.6} {}",
                r.param,
                r.error_l2,
                r.error_linf,
                r.error_h1,
                order,
                opt(r.u_error_l2, 12, 4),
                r.min_h,
                opt(r.eps_energy, 12, 4),
            );
        }
        let _ = writeln!(
            out,
            "monotone decrease: {}",
            if self.is_monotone() { "yes" } else { "NO" }
        );
        if self.rows.len() < 2 {
            let _ = writeln!(out, "warning: a single row has no observed order");
        }
        out
    }
}

fn run(initial: &State, params: &PhysParams, kind: ModelKind, setup: &StudySetup, dt: f64) -> Result<State> {
    let control = StepControl {
        h_floor: setup.h_floor,
        ..StepControl::fixed(dt)
    };
    advance(initial, params, kind, setup.t_end, &control, &mut NullSink)
}

/// Member parameters for one ladder value.
fn member_params(study: StudyKind, base: &PhysParams, value: f64) -> PhysParams {
    let mut p = *base;
    match study {
        StudyKind::BetaToZero | StudyKind::BetaToInfinity => p.beta = value,
        StudyKind::ReToZero => p.re = value,
        StudyKind::SigmaToZero => p.sigma = value,
        StudyKind::EpsilonToZero => p.eps = value,
        StudyKind::SelfConvergence => {}
    }
    p
}

/// Runs any study.
pub fn run_study(study: StudyKind, setup: &StudySetup) -> Result<ConvergenceTable> {
    if setup.values.is_empty() {
        return Err(Error::usage("the study ladder is empty"));
    }
    if !(setup.t_end > 0.0 && setup.dt > 0.0) {
        return Err(Error::usage("t_end and dt must be positive"));
    }
    setup.params.validate()?;
    match study {
        StudyKind::SelfConvergence => self_convergence(setup),
        _ => limit_study(study, setup),
    }
}

fn limit_study(study: StudyKind, setup: &StudySetup) -> Result<ConvergenceTable> {
    if matches!(
        study,
        StudyKind::BetaToZero | StudyKind::ReToZero | StudyKind::BetaToInfinity
    ) && !(setup.params.sigma > 0.0)
    {
        return Err(Error::InvalidParameter {
            name: "sigma",
            reason: format!("the {study} study needs sigma > 0"),
        });
    }
    let reference_kind = study.reference().expect("limit studies have a reference");
    let member_kind = study.member();
    let initial = setup.initial.sample(setup.n)?;

    let (reference, members) = thread::scope(|scope| {
        let reference = scope.spawn(|| run(&initial, &setup.params, reference_kind, setup, setup.dt));
        let handles: Vec<_> = setup
            .values
            .iter()
            .map(|&v| {
                let initial = &initial;
                scope.spawn(move || {
                    let p = member_params(study, &setup.params, v);
                    run(initial, &p, member_kind, setup, setup.dt)
                })
            })
            .collect();
        let members: Vec<Result<State>> = handles
            .into_iter()
            .map(|h| h.join().expect("member run panicked"))
            .collect();
        (reference.join().expect("reference run panicked"), members)
    });
    let reference = reference?;

    let rows = setup
        .values
        .iter()
        .zip(members)
        .map(|(&v, member)| match member {
            Ok(state) => limit_row(study, setup, v, &state, &reference),
            Err(e) => Ok(ConvergenceRow::failed(v, &e)),
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ConvergenceTable::new(study, reference_kind.name().to_string(), rows))
}

fn limit_row(
    study: StudyKind,
    setup: &StudySetup,
    value: f64,
    member: &State,
    reference: &State,
) -> Result<ConvergenceRow> {
    let errors = compare_states(member, reference)?;
    // The thin-film reference state already carries u = h (sigma h_xx - Pi)_x,
    // recomputed from its own height; velocities are compared throughout.
    let u_error_l2 = Some(errors.u.l2);
    let eps_energy = (study == StudyKind::EpsilonToZero).then(|| {
        let p = member_params(study, &setup.params, value);
        regularizing_energy(member, p.eps)
    });
    Ok(ConvergenceRow {
        param: value,
        error_l2: errors.h.l2,
        error_linf: errors.h.linf,
        error_h1: errors.h.h1,
        order: None,
        u_error_l2,
        min_h: member.h().min(),
        eps_energy,
        failure: None,
    })
}

/// `eps/2 int h_xxx^2` on nodes.
pub fn regularizing_energy(state: &State, eps: f64) -> f64 {
    let dx = state.grid().dx();
    let lap = crate::discretization::laplacian(state.h().values(), dx);
    let d3 = grad_c2n(&lap, dx);
    0.5 * eps * d3.iter().map(|v| v * v).sum::<f64>() * dx
}

/// Restricts a height on `2n` cells to `n` cells by averaging pairs.
fn restrict_centers(fine: &[f64]) -> Vec<f64> {
    fine.chunks_exact(2).map(|c| 0.5 * (c[0] + c[1])).collect()
}

/// Richardson-style self-convergence: with solutions on `n, 2n, 4n` the
/// error at resolution `n` is the distance to the restricted `2n` solution.
/// The step shrinks like `dx^2`.
fn self_convergence(setup: &StudySetup) -> Result<ConvergenceTable> {
    let ns: Vec<usize> = setup
        .values
        .iter()
        .map(|&v| {
            if v >= 8.0 && v.fract() == 0.0 {
                Ok(v as usize)
            } else {
                Err(Error::usage(format!("grid size {v} is not an integer >= 8")))
            }
        })
        .collect::<Result<_>>()?;
    if ns.windows(2).any(|w| w[1] != 2 * w[0]) {
        return Err(Error::usage("self-convergence needs grid sizes that double"));
    }
    let n0 = ns[0] as f64;
    let solutions: Vec<Result<State>> = thread::scope(|scope| {
        let handles: Vec<_> = ns
            .iter()
            .map(|&n| {
                scope.spawn(move || {
                    let initial = setup.initial.sample(n)?;
                    let ratio = n0 / n as f64;
                    run(&initial, &setup.params, setup.model, setup, setup.dt * ratio * ratio)
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("member run panicked"))
            .collect()
    });

    let mut rows = Vec::new();
    for k in 0..ns.len().saturating_sub(1) {
        let param = ns[k] as f64;
        let row = match (&solutions[k], &solutions[k + 1]) {
            (Ok(coarse), Ok(fine)) => {
                let restricted = Field::new(coarse.grid(), Location::Centers, restrict_centers(fine.h().values()))?;
                let e = compare_fields(coarse.h(), &restricted)?;
                ConvergenceRow {
                    param,
                    error_l2: e.l2,
                    error_linf: e.linf,
                    error_h1: e.h1,
                    order: None,
                    u_error_l2: None,
                    min_h: coarse.h().min(),
                    eps_energy: None,
                    failure: None,
                }
            }
            (Err(e), _) | (_, Err(e)) => ConvergenceRow::failed(param, e),
        };
        rows.push(row);
    }
    let mut table = ConvergenceTable::new(
        StudyKind::SelfConvergence,
        format!("{} on the next finer grid", setup.model),
        rows,
    );
    table.parameter = format!("n ({})", setup.model);
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pair(n: usize) -> (State, State) {
        let a = CosineProfile {
            u_amp: 0.3,
            ..CosineProfile::default()
        }
        .sample(Grid::new(n).unwrap())
        .unwrap();
        let b = CosineProfile {
            mean: 1.25,
            u_amp: 0.3,
            ..CosineProfile::default()
        }
        .sample(Grid::new(n).unwrap())
        .unwrap();
        (a, b)
    }

    #[test]
    fn identical_states_have_zero_errors() {
        let (a, _) = pair(16);
        assert_eq!(compare_states(&a, &a).unwrap(), StateErrors::default());
    }

    #[test]
    fn constant_shift_is_invisible_to_h1() {
        let (a, b) = pair(16);
        let e = compare_states(&a, &b).unwrap();
        assert!((e.h.linf - 0.25).abs() < 1e-15);
        assert!((e.h.l2 - 0.25).abs() < 1e-14);
        assert!(e.h.h1 < 1e-13);
        assert_eq!(e.u, Norms::default());
    }

    #[test]
    fn grid_mismatch_is_usage_error() {
        let (a, _) = pair(16);
        let (c, _) = pair(32);
        assert!(matches!(compare_states(&a, &c), Err(Error::Usage(_))));
    }

    #[test]
    fn cosine_profile_validation() {
        let bad = CosineProfile {
            amp: 2.0,
            ..CosineProfile::default()
        };
        assert!(bad.sample(Grid::new(16).unwrap()).is_err());
        let bad = CosineProfile {
            k: 0,
            ..CosineProfile::default()
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn order_and_monotonicity() {
        let row = |param: f64, e: f64| ConvergenceRow {
            param,
            error_l2: e,
            error_linf: e,
            error_h1: e,
            order: None,
            u_error_l2: None,
            min_h: 1.0,
            eps_energy: None,
            failure: None,
        };
        let t = ConvergenceTable::new(
            StudyKind::SelfConvergence,
            "x".into(),
            vec![row(64.0, 4e-4), row(128.0, 1e-4)],
        );
        assert!((t.rows[1].order.unwrap() - 2.0).abs() < 1e-12);
        assert!(t.rows[0].order.is_none());
        assert!(t.is_monotone());
        let flat = ConvergenceTable::new(StudyKind::ReToZero, "x".into(), vec![row(1.0, 0.0), row(0.3, 0.0)]);
        assert!(flat.is_monotone());
        assert!(flat.rows[1].order.is_none());
        let single = ConvergenceTable::new(StudyKind::ReToZero, "x".into(), vec![row(1.0, 1e-3)]);
        assert!(single.rows[0].order.is_none());
        assert!(single.report().contains("warning"));
        let csv = t.to_csv();
        assert_eq!(csv.lines().next().unwrap(), "param,error_L2,error_Linf,error_H1,order");
        assert!(csv.lines().nth(1).unwrap().ends_with(','));
    }

    #[test]
    fn study_names_round_trip() {
        for s in StudyKind::ALL {
            assert_eq!(s.name().parse::<StudyKind>().unwrap(), s);
        }
    }

    #[test]
    fn constant_data_gives_zero_tables() {
        let flat = InitialData::Cosine(CosineProfile {
            amp: 0.0,
            ..CosineProfile::default()
        });
        for study in StudyKind::ALL {
            let setup = StudySetup {
                initial: flat.clone(),
                n: 16,
                t_end: 1e-3,
                dt: 1e-4,
                values: if study == StudyKind::SelfConvergence {
                    vec![16.0, 32.0, 64.0]
                } else {
                    study.default_ladder()
                },
                ..StudySetup::new(study)
            };
            let t = run_study(study, &setup).unwrap();
            for r in &t.rows {
                assert!(r.failure.is_none(), "{study}");
                assert!(r.error_linf <= 1e-13, "{study} {}", r.error_linf);
                assert!(r.order.is_none());
            }
            assert!(t.is_monotone(), "{study}");
        }
    }

    proptest! {
        #[test]
        fn l2_is_bounded_by_linf(hs in prop::collection::vec(0.1f64..3.0, 16), gs in prop::collection::vec(0.1f64..3.0, 16)) {
            let g = Grid::new(16).unwrap();
            let a = Field::new(g, Location::Centers, hs).unwrap();
            let b = Field::new(g, Location::Centers, gs).unwrap();
            let e = compare_fields(&a, &b).unwrap();
            prop_assert!(e.l2 <= e.linf * (1.0 + 1e-12));
        }
    }
}
