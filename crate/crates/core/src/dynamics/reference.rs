//! Forward-Euler integration of the same semi-discrete system the steppers
//! solve. Used as an independent check of the implicit steppers; it is only
//! stable for very small steps (`dt ~ dx^2` with inertia, `dt ~ dx^4` for the
//! fourth-order kinds).
//!
//! The Stokes kind has no time derivative of `u`, so its velocity comes from
//! the instantaneous force balance, a tridiagonal solve per step.

use crate::banded::solve_tridiagonal;
use crate::constitutive::PhysParams;
use crate::discretization::{div_n2c, grad_c2n, interp_c2n, State};
use crate::error::{Error, Result};

use super::thinfilm::thinfilm_velocity;
use super::velocity::{convection, fourth_derivative_nodes, viscous_force};
use super::{pressure, ModelKind};

/// Integrates from `state.t()` to `t_end` with fixed step `dt` (the final
/// step is shortened to land on `t_end`).
pub fn reference_integrate(state: &State, params: &PhysParams, kind: ModelKind, t_end: f64, dt: f64) -> Result<State> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::usage(format!("step size must be positive, got {dt}")));
    }
    if !(t_end >= state.t()) {
        return Err(Error::usage(format!(
            "t_end = {t_end} precedes the state time {}",
            state.t()
        )));
    }
    let p = kind.effective_params(params)?;
    let grid = state.grid();
    let dx = grid.dx();
    let mut h = state.h().values().to_vec();
    let mut u = state.u().values().to_vec();
    let mut t = state.t();
    let span = t_end - t;
    let steps = ((span / dt) * (1.0 - 1e-12)).ceil() as usize;
    for k in 0..steps {
        let tau = if k + 1 == steps { t_end - t } else { dt };
        match kind {
            ModelKind::IntermediateSlip | ModelKind::WeakSlip => {
                let v = thinfilm_velocity(&h, &p, kind, dx);
                let hn = interp_c2n(&h);
                let flux: Vec<f64> = hn.iter().zip(&v).map(|(a, b)| a * b).collect();
                let dh = div_n2c(&flux, dx);
                h.iter_mut().zip(&dh).for_each(|(hi, d)| *hi -= tau * d);
                u = v;
            }
            ModelKind::Stokes => {
                u = stokes_velocity(&h, &p, dx)?;
                advect(&mut h, &u, tau, dx);
            }
            _ => {
                let rate = momentum_rate(&h, &u, &p, dx);
                advect(&mut h, &u, tau, dx);
                u.iter_mut().zip(&rate).for_each(|(uj, r)| *uj += tau * r);
            }
        }
        t += tau;
        if h.iter().chain(&u).any(|v| !v.is_finite()) {
            return Err(Error::Divergence { t });
        }
        if let Some((i, &m)) = h.iter().enumerate().find(|(_, v)| **v <= 0.0) {
            return Err(Error::Positivity {
                t,
                x: grid.center(i),
                min_h: m,
                floor: 0.0,
            });
        }
    }
    if matches!(kind, ModelKind::IntermediateSlip | ModelKind::WeakSlip) {
        u = thinfilm_velocity(&h, &p, kind, dx);
    } else if kind == ModelKind::Stokes {
        u = stokes_velocity(&h, &p, dx)?;
    }
    Ok(State::from_parts(grid, h, u, t_end))
}

fn advect(h: &mut [f64], u: &[f64], tau: f64, dx: f64) {
    let hn = interp_c2n(h);
    let flux: Vec<f64> = hn.iter().zip(u).map(|(a, b)| a * b).collect();
    let dh = div_n2c(&flux, dx);
    h.iter_mut().zip(&dh).for_each(|(hi, d)| *hi -= tau * d);
}

/// `du/dt` at nodes for the kinds with inertia.
fn momentum_rate(h: &[f64], u: &[f64], p: &PhysParams, dx: f64) -> Vec<f64> {
    let n = h.len();
    let hn = interp_c2n(h);
    let conv = convection(&hn, u, dx);
    let visc = viscous_force(h, u, p.nu, dx);
    let dp = grad_c2n(&pressure(h, p, dx), dx);
    let d4 = (p.eps > 0.0).then(|| fourth_derivative_nodes(u, dx));
    let inv_beta = p.inv_beta();
    let mut rate = vec![0.0; n + 1];
    for j in 1..n {
        let mut force = -p.re * conv[j] + visc[j] - inv_beta * u[j] + hn[j] * dp[j];
        if let Some(d4) = &d4 {
            force -= p.eps * p.eps * d4[j];
        }
        rate[j] = force / (p.re * hn[j]);
    }
    rate
}

/// Force balance `-4 d/dx(nu h u_x) + u/beta = h p_x` at interior nodes.
fn stokes_velocity(h: &[f64], p: &PhysParams, dx: f64) -> Result<Vec<f64>> {
    let n = h.len();
    let hn = interp_c2n(h);
    let dp = grad_c2n(&pressure(h, p, dx), dx);
    let c = 4.0 * p.nu / (dx * dx);
    let inv_beta = p.inv_beta();
    let m = n - 1;
    let mut lower = vec![0.0; m];
    let mut diag = vec![0.0; m];
    let mut upper = vec![0.0; m];
    let mut rhs = vec![0.0; m];
    for k in 0..m {
        let j = k + 1;
        // cells j-1 and j flank node j
        lower[k] = -c * h[j - 1];
        upper[k] = -c * h[j];
        diag[k] = c * (h[j - 1] + h[j]) + inv_beta;
        rhs[k] = hn[j] * dp[j];
    }
    let interior = solve_tridiagonal(&lower, &diag, &upper, &rhs)?;
    let mut u = vec![0.0; n + 1];
    u[1..n].copy_from_slice(&interior);
    Ok(u)
}

#[cfg(test)]
mod tests {
    use super::*;
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
    fn stokes_velocity_satisfies_force_balance() {
        let s = cosine(32);
        let p = PhysParams {
            re: 0.0,
            ..PhysParams::default()
        };
        let h = s.h().values();
        let dx = 1.0 / 32.0;
        let u = stokes_velocity(h, &p, dx).unwrap();
        let visc = viscous_force(h, &u, p.nu, dx);
        let hn = interp_c2n(h);
        let dp = grad_c2n(&pressure(h, &p, dx), dx);
        for j in 1..32 {
            let r = -visc[j] + u[j] - hn[j] * dp[j];
            assert!(r.abs() < 1e-9, "{j} {r}");
        }
    }

    #[test]
    fn lands_on_t_end_and_conserves_mass() {
        let s = cosine(16);
        let out = reference_integrate(&s, &PhysParams::default(), ModelKind::StrongSlip, 0.00105, 1e-4).unwrap();
        assert_eq!(out.t(), 0.00105);
        assert!(((out.mass() - s.mass()) / s.mass()).abs() < 1e-13);
    }

    #[test]
    fn unstable_step_reports_divergence() {
        let s = cosine(64);
        let err = reference_integrate(&s, &PhysParams::default(), ModelKind::WeakSlip, 1.0, 1e-3).unwrap_err();
        assert!(
            matches!(err, Error::Divergence { .. } | Error::Positivity { .. }),
            "{err}"
        );
    }
}
