//! Time steppers for every model kind.
//!
//! Velocity-based kinds (strong slip and its variants) advance `(h, u)` with a
//! linearly implicit step: one symmetric banded solve for the velocity, one
//! tridiagonal solve for the transported height. The fourth-order thin-film
//! kinds advance `h` alone with one pentadiagonal solve; their velocity field
//! is the diagnostic `u = M(h)/h * d/dx(sigma h_xx - Pi(h))`.

mod advance;
mod reference;
mod thinfilm;
mod velocity;

use std::fmt;
use std::str::FromStr;

use crate::constitutive::{pi_unchecked, PhysParams};
use crate::discretization::{laplacian, State};
use crate::error::{Error, Result};

pub use advance::advance;
pub use reference::reference_integrate;
pub use thinfilm::step_thinfilm;
pub use velocity::step_velocity_models;

/// Model taxonomy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModelKind {
    /// Full strong-slip system.
    StrongSlip,
    /// Strong slip in the slip-rescaled variables (`t -> t beta`, `u -> u / beta`).
    ScaledStrongSlip,
    /// Suspended free film, `1/beta = 0`.
    FreeFilm,
    /// Strong slip without inertia, `Re = 0`.
    Stokes,
    /// Strong slip without capillarity, `sigma = 0`.
    NoCapillarity,
    /// Regularized strong slip with seventh/fourth-order smoothing of strength `eps`.
    Regularized,
    /// Fourth-order thin-film equation with mobility `h^2`.
    IntermediateSlip,
    /// Fourth-order thin-film equation with mobility `h^3 + b h^2`.
    WeakSlip,
}

impl ModelKind {
    pub const ALL: [ModelKind; 8] = [
        ModelKind::StrongSlip,
        ModelKind::ScaledStrongSlip,
        ModelKind::FreeFilm,
        ModelKind::Stokes,
        ModelKind::NoCapillarity,
        ModelKind::Regularized,
        ModelKind::IntermediateSlip,
        ModelKind::WeakSlip,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ModelKind::StrongSlip => "strong_slip",
            ModelKind::ScaledStrongSlip => "scaled_strong_slip",
            ModelKind::FreeFilm => "free_film",
            ModelKind::Stokes => "stokes",
            ModelKind::NoCapillarity => "no_capillarity",
            ModelKind::Regularized => "regularized",
            ModelKind::IntermediateSlip => "intermediate_slip",
            ModelKind::WeakSlip => "weak_slip",
        }
    }

    /// True for the kinds that carry a prognostic velocity.
    pub fn has_velocity(self) -> bool {
        !matches!(self, ModelKind::IntermediateSlip | ModelKind::WeakSlip)
    }

    /// The constants the stepper actually integrates with.
    ///
    /// Free film forces `beta = inf`, Stokes forces `Re = 0`, no-capillarity
    /// forces `sigma = 0`, and every kind except the regularized one drops
    /// `eps`. The scaled kind maps `(Re, nu, beta)` to `(beta^2 Re, beta nu, 1)`,
    /// the coefficients of the rescaled momentum balance. Thin-film kinds have
    /// no inertia (`Re = 0`).
    pub fn effective_params(self, params: &PhysParams) -> Result<PhysParams> {
        params.validate()?;
        let mut p = *params;
        if self != ModelKind::Regularized {
            p.eps = 0.0;
        }
        match self {
            ModelKind::StrongSlip => {}
            ModelKind::ScaledStrongSlip => {
                if !params.beta.is_finite() {
                    return Err(Error::InvalidParameter {
                        name: "beta",
                        reason: "the rescaled model needs a finite slip length".into(),
                    });
                }
                p.re = params.re * params.beta * params.beta;
                p.nu = params.nu * params.beta;
                p.beta = 1.0;
            }
            ModelKind::FreeFilm => p.beta = f64::INFINITY,
            ModelKind::Stokes => p.re = 0.0,
            ModelKind::NoCapillarity => p.sigma = 0.0,
            ModelKind::Regularized => {
                if !(params.eps > 0.0) {
                    return Err(Error::InvalidParameter {
                        name: "eps",
                        reason: "the regularized model needs eps > 0".into(),
                    });
                }
            }
            ModelKind::IntermediateSlip | ModelKind::WeakSlip => p.re = 0.0,
        }
        Ok(p)
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ModelKind::ALL
            .iter()
            .copied()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::usage(format!("unknown model kind `{s}`")))
    }
}

/// Adaptive step-size control.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepControl {
    pub dt: f64,
    pub dt_min: f64,
    pub dt_max: f64,
    /// Safety factor on the advective bound `dt <= cfl_factor * dx / max|u|`.
    pub cfl_factor: f64,
    /// Relative tolerance of the energy non-increase guard.
    pub energy_guard_tol: f64,
    /// Heights at or below this value abort the step.
    pub h_floor: f64,
}

impl Default for StepControl {
    fn default() -> Self {
        StepControl {
            dt: 1e-4,
            dt_min: 1e-12,
            dt_max: 1e-3,
            cfl_factor: 0.5,
            energy_guard_tol: 1e-8,
            h_floor: 1e-8,
        }
    }
}

impl StepControl {
    /// Fixed step: `dt_min = dt = dt_max`.
    pub fn fixed(dt: f64) -> Self {
        StepControl {
            dt,
            dt_min: dt,
            dt_max: dt,
            ..StepControl::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |name: &'static str, reason: &str| {
            Err(Error::InvalidParameter {
                name,
                reason: reason.into(),
            })
        };
        if !(self.dt_min > 0.0 && self.dt_min.is_finite()) {
            return bad("dt_min", "must be positive");
        }
        if !(self.dt_min <= self.dt && self.dt <= self.dt_max && self.dt_max.is_finite()) {
            return bad("dt", "need dt_min <= dt <= dt_max");
        }
        if !(self.cfl_factor > 0.0 && self.cfl_factor <= 1.0) {
            return bad("cfl_factor", "must lie in (0, 1]");
        }
        if !(self.energy_guard_tol >= 0.0) {
            return bad("energy_guard_tol", "must be >= 0");
        }
        if !(self.h_floor > 0.0 && self.h_floor.is_finite()) {
            return bad("h_floor", "must be positive");
        }
        Ok(())
    }
}

/// One step of any kind, dispatching on whether the kind carries velocity.
pub fn step(state: &State, params: &PhysParams, kind: ModelKind, dt: f64, h_floor: f64) -> Result<State> {
    if kind.has_velocity() {
        step_velocity_models(state, params, kind, dt, h_floor)
    } else {
        let h = step_thinfilm(state, params, kind, dt, h_floor)?;
        thinfilm::state_from_height(h, params, kind, state.t() + dt)
    }
}

/// Capillary-disjoining pressure at centers:
/// `sigma h_xx - Pi(h) + eps d6h` (the last term only when `eps > 0`).
pub(crate) fn pressure(h: &[f64], p: &PhysParams, dx: f64) -> Vec<f64> {
    let lap = laplacian(h, dx);
    let mut out: Vec<f64> = h
        .iter()
        .zip(&lap)
        .map(|(&hi, &li)| p.sigma * li - pi_unchecked(hi, p.alpha))
        .collect();
    if p.eps > 0.0 {
        let l3 = laplacian(&laplacian(&lap, dx), dx);
        out.iter_mut().zip(&l3).for_each(|(o, l)| *o += p.eps * l);
    }
    out
}

pub(crate) fn check_pre(state: &State, dt: f64, h_floor: f64) -> Result<()> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::usage(format!("step size must be positive, got {dt}")));
    }
    check_floor(state.h().values(), state.grid().dx(), state.t(), h_floor)
}

pub(crate) fn check_floor(h: &[f64], dx: f64, t: f64, h_floor: f64) -> Result<()> {
    let (imin, hmin) = h.iter().copied().enumerate().fold(
        (0, f64::INFINITY),
        |(ia, a), (i, v)| {
            if !(v >= a) {
                (i, v)
            } else {
                (ia, a)
            }
        },
    );
    if !(hmin > h_floor) {
        return Err(Error::Positivity {
            t,
            x: (imin as f64 + 0.5) * dx,
            min_h: hmin,
            floor: h_floor,
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kind_names_round_trip() {
        for k in ModelKind::ALL {
            assert_eq!(k.name().parse::<ModelKind>().unwrap(), k);
        }
        assert!("slippery".parse::<ModelKind>().is_err());
    }

    #[test]
    fn effective_params_force_limits() {
        let p = PhysParams {
            eps: 1e-3,
            beta: 0.5,
            ..PhysParams::default()
        };
        assert_eq!(ModelKind::FreeFilm.effective_params(&p).unwrap().inv_beta(), 0.0);
        assert_eq!(ModelKind::Stokes.effective_params(&p).unwrap().re, 0.0);
        assert_eq!(ModelKind::NoCapillarity.effective_params(&p).unwrap().sigma, 0.0);
        assert_eq!(ModelKind::StrongSlip.effective_params(&p).unwrap().eps, 0.0);
        let s = ModelKind::ScaledStrongSlip.effective_params(&p).unwrap();
        assert_eq!((s.re, s.nu, s.beta), (0.25, 0.5, 1.0));
        let no_eps = PhysParams::default();
        assert!(ModelKind::Regularized.effective_params(&no_eps).is_err());
        let inf = PhysParams {
            beta: f64::INFINITY,
            ..PhysParams::default()
        };
        assert!(ModelKind::ScaledStrongSlip.effective_params(&inf).is_err());
    }

    #[test]
    fn step_control_validation() {
        assert!(StepControl::default().validate().is_ok());
        assert!(StepControl::fixed(1e-4).validate().is_ok());
        let bad = StepControl {
            dt: 1.0,
            ..StepControl::default()
        };
        assert!(bad.validate().is_err());
        let bad = StepControl {
            cfl_factor: 1.5,
            ..StepControl::default()
        };
        assert!(bad.validate().is_err());
    }
}
