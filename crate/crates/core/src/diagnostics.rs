//! Discrete energy, entropy and dissipation functionals, and the checks run
//! on trajectories.
//!
//! Integrals over centers use the midpoint rule and integrals over nodes the
//! trapezoid rule, so the summation-by-parts identities of the staggered
//! operators carry over to the functionals. Kinetic terms live on the nodes
//! (`Re/2 * sum interp(h) u^2 dx`): with that choice the discrete energy
//! balance of the velocity stepper has no spatial defect.

use std::fmt;

use crate::constitutive::{pi_prime_unchecked, u_pot_floor, u_pot_unchecked, PhysParams};
use crate::discretization::{div_n2c, dot_centers, dot_nodes, grad_c2n, interp_c2n, laplacian, State};
use crate::dynamics::{pressure, ModelKind};
use crate::error::{Error, Result};

/// Column order of [`DiagnosticsRecord::csv_row`].
pub const CSV_HEADER: &str = "t,dt,mass,energy,entropy,min_h,max_h,diss_visc,diss_slip,bd_norm";

/// Scalar summary of one state along a trajectory.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiagnosticsRecord {
    pub t: f64,
    /// The step that produced this state (0 for the initial record).
    pub dt: f64,
    pub mass: f64,
    pub energy: f64,
    pub entropy: f64,
    pub min_h: f64,
    pub max_h: f64,
    /// Viscous dissipation `4 nu int h u_x^2` (plus `eps^2 int u_xx^2` for the
    /// regularized kind). Zero for the thin-film kinds.
    pub diss_visc: f64,
    /// Slip dissipation `int u^2 / beta`. For the thin-film kinds this column
    /// holds their whole dissipation `int M(h) p_x^2`.
    pub diss_slip: f64,
    /// `int h (Re u + phi(h)_x)^2 / 2`.
    pub bd_norm: f64,
}

impl DiagnosticsRecord {
    /// Evaluates every column for `state` under the constants that `kind`
    /// integrates with.
    pub fn new(state: &State, params: &PhysParams, kind: ModelKind, dt: f64) -> Result<Self> {
        let p = kind.effective_params(params)?;
        let (diss_visc, diss_slip) = dissipation(state, &p, kind);
        Ok(DiagnosticsRecord {
            t: state.t(),
            dt,
            mass: state.mass(),
            energy: energy(state, &p),
            entropy: entropy_functional(state, &p),
            min_h: state.h().min(),
            max_h: state.h().max(),
            diss_visc,
            diss_slip,
            bd_norm: bd_norm(state, &p),
        })
    }

    /// One CSV row in [`CSV_HEADER`] order; floats use the shortest
    /// representation that round-trips.
    pub fn csv_row(&self) -> String {
        format!(
            "{:e},{:e},{:e},{:e},{:e},{:e},{:e},{:e},{:e},{:e}",
            self.t,
            self.dt,
            self.mass,
            self.energy,
            self.entropy,
            self.min_h,
            self.max_h,
            self.diss_visc,
            self.diss_slip,
            self.bd_norm
        )
    }

    pub fn total_dissipation(&self) -> f64 {
        self.diss_visc + self.diss_slip
    }
}

/// Receives one record per accepted step.
pub trait DiagnosticsSink {
    fn record(&mut self, record: &DiagnosticsRecord, state: &State);
}

impl<F: FnMut(&DiagnosticsRecord, &State)> DiagnosticsSink for F {
    fn record(&mut self, record: &DiagnosticsRecord, state: &State) {
        self(record, state)
    }
}

/// Discards everything.
pub struct NullSink;

impl DiagnosticsSink for NullSink {
    fn record(&mut self, _: &DiagnosticsRecord, _: &State) {}
}

/// Records, and optionally the states they were taken from.
#[derive(Debug, Clone, Default)]
pub struct Trajectory {
    pub records: Vec<DiagnosticsRecord>,
    pub states: Vec<State>,
    keep_states: bool,
}

impl Trajectory {
    pub fn new(keep_states: bool) -> Self {
        Trajectory {
            records: Vec::new(),
            states: Vec::new(),
            keep_states,
        }
    }

    /// A trajectory holding only the initial record (and state).
    pub fn start(state: &State, params: &PhysParams, kind: ModelKind, keep_states: bool) -> Result<Self> {
        let mut traj = Trajectory::new(keep_states);
        traj.record(&DiagnosticsRecord::new(state, params, kind, 0.0)?, state);
        Ok(traj)
    }
}

impl DiagnosticsSink for Trajectory {
    fn record(&mut self, record: &DiagnosticsRecord, state: &State) {
        self.records.push(*record);
        if self.keep_states {
            self.states.push(state.clone());
        }
    }
}

// ---------------------------------------------------------------------------
// Functionals. `params` here are taken verbatim; use
// `ModelKind::effective_params` first for kind-aware values.

fn kinetic_nodes(state: &State) -> (Vec<f64>, &[f64]) {
    (interp_c2n(state.h().values()), state.u().values())
}

fn kinetic(state: &State, params: &PhysParams) -> f64 {
    let (hn, u) = kinetic_nodes(state);
    let hu2: f64 = hn.iter().zip(u).map(|(a, b)| a * b * b).sum();
    0.5 * params.re * hu2 * state.grid().dx()
}

/// Potential plus surface (plus regularizing) part of the energy.
fn free_energy(state: &State, params: &PhysParams) -> f64 {
    let dx = state.grid().dx();
    let h = state.h().values();
    let potential: f64 = h.iter().map(|&v| u_pot_unchecked(v, params.alpha)).sum::<f64>() * dx;
    let dh = grad_c2n(h, dx);
    let mut e = potential + 0.5 * params.sigma * dot_nodes(&dh, &dh, dx);
    if params.eps > 0.0 {
        let d3 = grad_c2n(&laplacian(h, dx), dx);
        e += 0.5 * params.eps * dot_nodes(&d3, &d3, dx);
    }
    e
}

/// `E = int Re h u^2/2 + U(h) + sigma h_x^2/2 (+ eps h_xxx^2/2)`.
pub fn energy(state: &State, params: &PhysParams) -> f64 {
    kinetic(state, params) + free_energy(state, params)
}

/// `int h (Re u + phi(h)_x)^2 / 2` with `phi = 4 nu log h`, on nodes.
pub fn bd_norm(state: &State, params: &PhysParams) -> f64 {
    let dx = state.grid().dx();
    let (hn, u) = kinetic_nodes(state);
    let logs: Vec<f64> = state.h().values().iter().map(|v| v.ln()).collect();
    let dphi = grad_c2n(&logs, dx);
    let w: Vec<f64> = (0..hn.len())
        .map(|j| {
            let a = params.re * u[j] + 4.0 * params.nu * dphi[j];
            hn[j] * a * a
        })
        .collect();
    0.5 * w.iter().sum::<f64>() * dx
}

/// `S = int h (Re u + phi_x)^2/2 + (4 nu h - phi)/beta + Re (sigma h_x^2/2 + U(h))`
/// (plus `Re eps h_xxx^2/2` when `eps > 0`).
pub fn entropy_functional(state: &State, params: &PhysParams) -> f64 {
    let dx = state.grid().dx();
    let h = state.h().values();
    let mut s = bd_norm(state, params);
    let inv_beta = params.inv_beta();
    if inv_beta > 0.0 {
        let slip: f64 = h.iter().map(|&v| 4.0 * params.nu * (v - v.ln())).sum::<f64>() * dx;
        s += inv_beta * slip;
    }
    if params.re > 0.0 {
        s += params.re * free_energy(state, params);
    }
    s
}

/// `(viscous, slip)` dissipation rates of the energy for `kind`.
pub fn dissipation(state: &State, params: &PhysParams, kind: ModelKind) -> (f64, f64) {
    let dx = state.grid().dx();
    let h = state.h().values();
    let u = state.u().values();
    if !kind.has_velocity() {
        // hn u = M p_x, so M p_x^2 = (hn u) p_x
        let hn = interp_c2n(h);
        let dp = grad_c2n(&pressure(h, params, dx), dx);
        let w: Vec<f64> = (0..hn.len()).map(|j| hn[j] * u[j] * dp[j]).collect();
        return (0.0, w.iter().sum::<f64>() * dx);
    }
    let gu = div_n2c(u, dx);
    let visc_w: Vec<f64> = h.iter().zip(&gu).map(|(a, g)| a * g * g).collect();
    let mut visc = 4.0 * params.nu * visc_w.iter().sum::<f64>() * dx;
    if params.eps > 0.0 {
        let dgu = grad_c2n(&gu, dx);
        visc += params.eps * params.eps * dot_nodes(&dgu, &dgu, dx);
    }
    let slip = params.inv_beta() * dot_nodes(u, u, dx);
    (visc, slip)
}

/// Right-hand side of the entropy balance for the velocity kinds without
/// regularization: `Re int u^2/beta + 4 sigma nu int h_xx^2 + 4 nu int Pi'(h) h_x^2`.
///
/// `Pi'(h) h_x^2` is evaluated at centers with the squared node gradients
/// of the two flanking nodes averaged.
pub fn entropy_dissipation(state: &State, params: &PhysParams) -> f64 {
    let dx = state.grid().dx();
    let h = state.h().values();
    let u = state.u().values();
    let lap = laplacian(h, dx);
    let dh = grad_c2n(h, dx);
    let mut pi_term = 0.0;
    for i in 0..h.len() {
        let g2 = 0.5 * (dh[i] * dh[i] + dh[i + 1] * dh[i + 1]);
        pi_term += pi_prime_unchecked(h[i], params.alpha) * g2;
    }
    pi_term *= dx;
    params.re * params.inv_beta() * dot_nodes(u, u, dx)
        + 4.0 * params.sigma * params.nu * dot_centers(&lap, &lap, dx)
        + 4.0 * params.nu * pi_term
}

/// Slack in the coercivity estimate
/// `int h phi_x^2 / 4 <= bd_norm + Re E + Re/(6 alpha^2)`; nonnegative when
/// the estimate holds.
pub fn coercivity_gap(state: &State, params: &PhysParams) -> f64 {
    let dx = state.grid().dx();
    let hn = interp_c2n(state.h().values());
    let logs: Vec<f64> = state.h().values().iter().map(|v| v.ln()).collect();
    let dphi = grad_c2n(&logs, dx);
    let lhs: f64 = (0..hn.len())
        .map(|j| {
            let d = 4.0 * params.nu * dphi[j];
            hn[j] * d * d
        })
        .sum::<f64>()
        * dx
        / 4.0;
    let rhs = bd_norm(state, params) + params.re * energy(state, params) - params.re * u_pot_floor(params.alpha);
    rhs - lhs
}

/// `int h_x^2 / h` on nodes.
pub fn fisher_information(state: &State) -> f64 {
    let dx = state.grid().dx();
    let h = state.h().values();
    let hn = interp_c2n(h);
    let dh = grad_c2n(h, dx);
    (0..hn.len()).map(|j| dh[j] * dh[j] / hn[j]).sum::<f64>() * dx
}

/// `int (h_x/h)_x u_x h`, the rate in `(1/2) d/dt int h_x^2/h = ...`.
pub fn fisher_rate(state: &State) -> f64 {
    let dx = state.grid().dx();
    let h = state.h().values();
    let hn = interp_c2n(h);
    let dh = grad_c2n(h, dx);
    let ratio: Vec<f64> = dh.iter().zip(&hn).map(|(a, b)| a / b).collect();
    let g = div_n2c(&ratio, dx);
    let gu = div_n2c(state.u().values(), dx);
    (0..h.len()).map(|i| g[i] * gu[i] * h[i]).sum::<f64>() * dx
}

/// Largest residual of `(1/2) dF/dt = fisher_rate` along stored states, with
/// the difference quotient compared to the rate averaged over each step.
pub fn fisher_balance_residual(states: &[State]) -> Result<f64> {
    if states.len() < 2 {
        return Err(Error::usage("the Fisher balance needs at least two stored states"));
    }
    let mut worst: f64 = 0.0;
    for w in states.windows(2) {
        let dt = w[1].t() - w[0].t();
        let lhs = 0.5 * (fisher_information(&w[1]) - fisher_information(&w[0])) / dt;
        let rhs = 0.5 * (fisher_rate(&w[0]) + fisher_rate(&w[1]));
        worst = worst.max((lhs - rhs).abs());
    }
    Ok(worst)
}

// ---------------------------------------------------------------------------
// Trajectory checks.

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InequalityKind {
    Energy,
    Entropy,
    Coercivity,
    LowerBound,
}

impl fmt::Display for InequalityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            InequalityKind::Energy => "energy",
            InequalityKind::Entropy => "entropy",
            InequalityKind::Coercivity => "coercivity",
            InequalityKind::LowerBound => "lower_bound",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct InequalityReport {
    pub kind: InequalityKind,
    /// Largest relative excess `(lhs - rhs)+ / scale`; zero when the inequality holds everywhere.
    pub worst_violation: f64,
    /// Time of the worst violation (or of the worst margin when none occurs).
    pub location: f64,
    pub tolerance: f64,
    pub passed: bool,
    /// Energy balance residuals `(E_{k+1} - E_k)/dt + D_{k+1}` per step; empty for the other checks.
    pub residuals: Vec<f64>,
    /// `(inf min_h, sup max_h)` for the lower-bound check.
    pub bounds: Option<(f64, f64)>,
}

impl InequalityReport {
    fn new(kind: InequalityKind, tolerance: f64) -> Self {
        InequalityReport {
            kind,
            worst_violation: 0.0,
            location: 0.0,
            tolerance,
            passed: true,
            residuals: Vec::new(),
            bounds: None,
        }
    }

    fn offer(&mut self, violation: f64, t: f64) {
        if violation > self.worst_violation {
            self.worst_violation = violation;
            self.location = t;
        }
    }

    fn finish(mut self) -> Self {
        self.passed = self.worst_violation <= self.tolerance;
        self
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().fold(0.0, |a, r| a.max(r.abs()))
    }
}

impl fmt::Display for InequalityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:<12} {} worst={:.3e} at t={:.4e} tol={:.1e}",
            self.kind,
            if self.passed { "PASS" } else { "FAIL" },
            self.worst_violation,
            self.location,
            self.tolerance
        )?;
        if let Some((lo, hi)) = self.bounds {
            write!(f, " min_h={lo:.6e} max_h={hi:.6e}")?;
        }
        if !self.residuals.is_empty() {
            write!(f, " balance_residual={:.3e}", self.max_residual())?;
        }
        Ok(())
    }
}

/// Energy non-increase `E_{k+1} <= E_k + tol (1 + |E_k|)` and the balance
/// residual series.
pub fn check_energy_balance(records: &[DiagnosticsRecord], tol: f64) -> Result<InequalityReport> {
    if records.len() < 2 {
        return Err(Error::usage("the energy check needs at least two records"));
    }
    let mut report = InequalityReport::new(InequalityKind::Energy, tol);
    for w in records.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        report.offer((b.energy - a.energy) / (1.0 + a.energy.abs()), b.t);
        let dt = b.t - a.t;
        report
            .residuals
            .push((b.energy - a.energy) / dt + b.total_dissipation());
    }
    Ok(report.finish())
}

/// `S(t) + int_0^t D_S <= S(0) + tol (1 + |S(0)|)`, the time integral by
/// the trapezoid rule over the stored states.
pub fn check_entropy_balance(
    traj: &Trajectory,
    params: &PhysParams,
    kind: ModelKind,
    tol: f64,
) -> Result<InequalityReport> {
    if matches!(
        kind,
        ModelKind::IntermediateSlip | ModelKind::WeakSlip | ModelKind::Regularized
    ) {
        return Err(Error::usage(format!("no entropy balance is checked for `{kind}`")));
    }
    if traj.states.is_empty() {
        return Err(Error::usage("the entropy check needs stored states"));
    }
    let p = kind.effective_params(params)?;
    let s0 = entropy_functional(&traj.states[0], &p);
    let scale = 1.0 + s0.abs();
    let mut report = InequalityReport::new(InequalityKind::Entropy, tol);
    let mut integral = 0.0;
    let mut prev = entropy_dissipation(&traj.states[0], &p);
    for w in traj.states.windows(2) {
        let d = entropy_dissipation(&w[1], &p);
        integral += 0.5 * (prev + d) * (w[1].t() - w[0].t());
        prev = d;
        let s = entropy_functional(&w[1], &p);
        report.offer((s + integral - s0) / scale, w[1].t());
    }
    Ok(report.finish())
}

/// Coercivity at every stored state, relative to `1 + rhs`.
pub fn check_coercivity(traj: &Trajectory, params: &PhysParams, kind: ModelKind, tol: f64) -> Result<InequalityReport> {
    if traj.states.is_empty() {
        return Err(Error::usage("the coercivity check needs stored states"));
    }
    let p = kind.effective_params(params)?;
    let mut report = InequalityReport::new(InequalityKind::Coercivity, tol);
    for s in &traj.states {
        let gap = coercivity_gap(s, &p);
        let scale = 1.0 + bd_norm(s, &p).abs() + (p.re * energy(s, &p)).abs();
        report.offer(-gap / scale, s.t());
    }
    Ok(report.finish())
}

/// Extrema of `h` over the trajectory; fails when `inf min_h <= 10 h_floor`.
pub fn positivity_report(records: &[DiagnosticsRecord], h_floor: f64) -> Result<InequalityReport> {
    if records.is_empty() {
        return Err(Error::usage("the positivity report needs at least one record"));
    }
    let mut report = InequalityReport::new(InequalityKind::LowerBound, 0.0);
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for r in records {
        if r.min_h < lo {
            lo = r.min_h;
            report.location = r.t;
        }
        hi = hi.max(r.max_h);
    }
    report.bounds = Some((lo, hi));
    let margin = 10.0 * h_floor;
    if !(lo > margin) {
        report.worst_violation = (margin - lo) / margin;
    }
    let mut report = report.finish();
    report.passed = lo > margin;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constitutive::u_pot;
    use crate::discretization::{Field, Grid, Location};
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn cosine(n: usize) -> State {
        let g = Grid::new(n).unwrap();
        State::new(
            Field::from_fn(g, Location::Centers, |x| 1.0 + 0.1 * (PI * x).cos()),
            Field::constant(g, Location::Nodes, 0.0),
            0.0,
        )
        .unwrap()
    }

    fn simpson(f: impl Fn(f64) -> f64, m: usize) -> f64 {
        let h = 1.0 / m as f64;
        let mut s = f(0.0) + f(1.0);
        for i in 1..m {
            s += f(i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
        }
        s * h / 3.0
    }

    #[test]
    fn constant_state_values() {
        let s = State::constant(Grid::new(16).unwrap(), 1.0).unwrap();
        let p = PhysParams::default();
        let u1 = -0.5 + 0.1 / 3.0;
        assert!((energy(&s, &p) - u1).abs() < 1e-14);
        assert!((entropy_functional(&s, &p) - (4.0 + u1)).abs() < 1e-14);
        let free = PhysParams {
            beta: f64::INFINITY,
            ..p
        };
        assert!((entropy_functional(&s, &free) - u1).abs() < 1e-14);
        let r = DiagnosticsRecord::new(&s, &p, ModelKind::StrongSlip, 0.0).unwrap();
        assert_eq!((r.diss_visc, r.diss_slip, r.bd_norm), (0.0, 0.0, 0.0));
    }

    #[test]
    fn energy_matches_fine_quadrature() {
        let s = cosine(256);
        let p = PhysParams::default();
        let exact = simpson(
            |x| {
                let h = 1.0 + 0.1 * (PI * x).cos();
                let hx = -0.1 * PI * (PI * x).sin();
                u_pot(h, p.alpha).unwrap() + 0.5 * hx * hx
            },
            20000,
        );
        assert!((energy(&s, &p) - exact).abs() < 1e-6, "{} {exact}", energy(&s, &p));
    }

    #[test]
    fn entropy_matches_fine_quadrature() {
        let n = 256;
        let g = Grid::new(n).unwrap();
        let s = State::new(
            Field::from_fn(g, Location::Centers, |x| 1.0 + 0.1 * (PI * x).cos()),
            Field::new(
                g,
                Location::Nodes,
                (0..=n)
                    .map(|j| {
                        if j == 0 || j == n {
                            0.0
                        } else {
                            0.2 * (PI * g.node(j)).sin()
                        }
                    })
                    .collect(),
            )
            .unwrap(),
            0.0,
        )
        .unwrap();
        let p = PhysParams::default();
        let exact = simpson(
            |x| {
                let h = 1.0 + 0.1 * (PI * x).cos();
                let hx = -0.1 * PI * (PI * x).sin();
                let u = 0.2 * (PI * x).sin();
                let a = u + 4.0 * hx / h;
                0.5 * h * a * a + 4.0 * (h - h.ln()) + 0.5 * hx * hx + u_pot(h, p.alpha).unwrap()
            },
            20000,
        );
        let got = entropy_functional(&s, &p);
        assert!((got - exact).abs() < 1e-5, "{got} {exact}");
    }

    #[test]
    fn csv_row_has_header_arity() {
        let s = cosine(16);
        let r = DiagnosticsRecord::new(&s, &PhysParams::default(), ModelKind::StrongSlip, 1e-3).unwrap();
        assert_eq!(r.csv_row().split(',').count(), CSV_HEADER.split(',').count());
        let back: Vec<f64> = r.csv_row().split(',').map(|v| v.parse().unwrap()).collect();
        assert_eq!(back[3], r.energy);
    }

    #[test]
    fn energy_report_flags_increase() {
        let mk = |t: f64, e: f64| DiagnosticsRecord {
            t,
            dt: 0.1,
            mass: 1.0,
            energy: e,
            entropy: 0.0,
            min_h: 1.0,
            max_h: 1.0,
            diss_visc: 0.0,
            diss_slip: 0.0,
            bd_norm: 0.0,
        };
        let ok = check_energy_balance(&[mk(0.0, 1.0), mk(0.1, 0.9)], 1e-8).unwrap();
        assert!(ok.passed);
        let bad = check_energy_balance(&[mk(0.0, 1.0), mk(0.1, 1.1)], 1e-8).unwrap();
        assert!(!bad.passed);
        assert!((bad.location - 0.1).abs() < 1e-15);
        assert!(check_energy_balance(&[mk(0.0, 1.0)], 1e-8).is_err());
    }

    #[test]
    fn positivity_report_margin() {
        let s = cosine(16);
        let r = DiagnosticsRecord::new(&s, &PhysParams::default(), ModelKind::StrongSlip, 0.0).unwrap();
        let rep = positivity_report(&[r], 1e-8).unwrap();
        assert!(rep.passed);
        assert!(!positivity_report(&[r], 0.095).unwrap().passed);
    }

    #[test]
    fn entropy_check_requires_states() {
        let traj = Trajectory::new(false);
        assert!(check_entropy_balance(&traj, &PhysParams::default(), ModelKind::StrongSlip, 1e-6).is_err());
    }

    proptest! {
        #[test]
        fn coercivity_holds_for_random_states(
            hs in prop::collection::vec(0.05f64..5.0, 16),
            us in prop::collection::vec(-10.0f64..10.0, 15),
            re in 0.0f64..5.0,
            alpha in 0.05f64..0.5,
        ) {
            let g = Grid::new(16).unwrap();
            let mut u = vec![0.0; 17];
            u[1..16].copy_from_slice(&us);
            let s = State::new(
                Field::new(g, Location::Centers, hs).unwrap(),
                Field::new(g, Location::Nodes, u).unwrap(),
                0.0,
            ).unwrap();
            let p = PhysParams { re, alpha, ..PhysParams::default() };
            let gap = coercivity_gap(&s, &p);
            prop_assert!(gap >= -1e-9 * (1.0 + bd_norm(&s, &p) + (re * energy(&s, &p)).abs()), "gap {gap}");
        }

        #[test]
        fn energy_respects_potential_floor(hs in prop::collection::vec(0.02f64..5.0, 16), alpha in 0.05f64..0.5) {
            let g = Grid::new(16).unwrap();
            let s = State::new(
                Field::new(g, Location::Centers, hs).unwrap(),
                Field::constant(g, Location::Nodes, 0.0),
                0.0,
            ).unwrap();
            let p = PhysParams { alpha, ..PhysParams::default() };
            prop_assert!(energy(&s, &p) >= u_pot_floor(alpha) - 1e-12);
        }
    }
}
