//! Adaptive time loop.

use crate::constitutive::PhysParams;
use crate::diagnostics::{energy, DiagnosticsRecord, DiagnosticsSink};
use crate::discretization::State;
use crate::error::{Error, Result};

use super::{step, ModelKind, StepControl};

/// Consecutive accepted steps before the step size grows.
const GROW_AFTER: usize = 10;
const GROWTH: f64 = 1.2;

/// Advances `state` to `t_end`, emitting one record per accepted step.
///
/// A trial step is rejected, and retried at half the step, when it loses
/// positivity, hits a singular system, or raises the energy by more than
/// `energy_guard_tol * (1 + |E|)`. The initial state is not recorded.
pub fn advance(
    state: &State,
    params: &PhysParams,
    kind: ModelKind,
    t_end: f64,
    control: &StepControl,
    sink: &mut dyn DiagnosticsSink,
) -> Result<State> {
    control.validate()?;
    let p = kind.effective_params(params)?;
    if !(t_end >= state.t()) || !t_end.is_finite() {
        return Err(Error::usage(format!(
            "t_end = {t_end} must not precede the state time {}",
            state.t()
        )));
    }
    let dx = state.grid().dx();
    super::check_floor(state.h().values(), dx, state.t(), control.h_floor)?;
    let mut current = state.clone();
    let mut e = energy(&current, &p);
    let mut dt = control.dt;
    let mut streak = 0;

    while current.t() < t_end {
        let umax = current.u().values().iter().fold(0.0f64, |a, v| a.max(v.abs()));
        let mut trial_dt = dt.min(control.dt_max);
        if umax > 0.0 {
            let cfl = control.cfl_factor * dx / umax;
            if cfl < control.dt_min {
                return Err(non_convergence(current, cfl, control));
            }
            trial_dt = trial_dt.min(cfl);
        }
        let remaining = t_end - current.t();
        let last = trial_dt * (1.0 + 1e-9) >= remaining;
        if last {
            trial_dt = remaining;
        }

        let outcome = match step(&current, params, kind, trial_dt, control.h_floor) {
            Ok(next) => {
                let e_next = energy(&next, &p);
                if e_next - e > control.energy_guard_tol * (1.0 + e.abs()) {
                    None
                } else {
                    Some((next, e_next))
                }
            }
            Err(Error::Positivity { .. } | Error::Singular { .. }) => None,
            Err(other) => return Err(other),
        };

        match outcome {
            Some((next, e_next)) => {
                current = if last { next.with_time(t_end) } else { next };
                e = e_next;
                sink.record(&DiagnosticsRecord::new(&current, params, kind, trial_dt)?, &current);
                streak += 1;
                if streak >= GROW_AFTER {
                    dt = (dt * GROWTH).min(control.dt_max);
                    streak = 0;
                }
            }
            None => {
                dt = trial_dt / 2.0;
                streak = 0;
                if dt < control.dt_min {
                    return Err(non_convergence(current, dt, control));
                }
            }
        }
    }
    Ok(current)
}

fn non_convergence(state: State, dt: f64, control: &StepControl) -> Error {
    Error::NonConvergence {
        t: state.t(),
        dt,
        dt_min: control.dt_min,
        last_state: Box::new(state),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagnostics::Trajectory;
    use crate::discretization::{Field, Grid, Location};
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

    #[test]
    fn zero_span_is_identity() {
        let s = cosine(16);
        let mut traj = Trajectory::new(false);
        let out = advance(
            &s,
            &PhysParams::default(),
            ModelKind::StrongSlip,
            0.0,
            &StepControl::default(),
            &mut traj,
        )
        .unwrap();
        assert_eq!(out, s);
        assert!(traj.records.is_empty());
    }

    #[test]
    fn lands_exactly_on_t_end() {
        let s = cosine(32);
        let mut traj = Trajectory::new(false);
        let out = advance(
            &s,
            &PhysParams::default(),
            ModelKind::StrongSlip,
            0.0123,
            &StepControl::default(),
            &mut traj,
        )
        .unwrap();
        assert_eq!(out.t(), 0.0123);
        assert_eq!(traj.records.last().unwrap().t, 0.0123);
        for w in traj.records.windows(2) {
            assert!(w[1].energy <= w[0].energy + 1e-8 * (1.0 + w[0].energy.abs()));
        }
    }

    #[test]
    fn floor_above_initial_minimum_is_positivity_error() {
        let s = cosine(16);
        let control = StepControl {
            h_floor: 0.99,
            ..StepControl::default()
        };
        let err = advance(
            &s,
            &PhysParams::default(),
            ModelKind::StrongSlip,
            1.0,
            &control,
            &mut crate::diagnostics::NullSink,
        );
        assert!(matches!(err, Err(Error::Positivity { .. })), "{err:?}");
    }

    #[test]
    fn fixed_step_rejection_is_non_convergence() {
        // With weak capillarity the cosine is linearly unstable, so its
        // minimum drops through a floor set just below it; a fixed step
        // cannot shrink.
        let s = cosine(16);
        let params = PhysParams {
            sigma: 1e-3,
            ..PhysParams::default()
        };
        let control = StepControl {
            h_floor: 0.8999,
            ..StepControl::fixed(1e-2)
        };
        let err = advance(
            &s,
            &params,
            ModelKind::WeakSlip,
            1.0,
            &control,
            &mut crate::diagnostics::NullSink,
        );
        match err {
            Err(Error::NonConvergence { last_state, .. }) => assert_eq!(*last_state, s),
            other => panic!("{other:?}"),
        }
    }
}
