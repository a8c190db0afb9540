//! Linearly implicit step for the fourth-order thin-film kinds
//! `h_t + d/dx(M(h) d/dx(sigma h_xx - Pi(h))) = 0`.
//!
//! The pressure is linearized about the old height,
//! `p(h') ~ sigma L h' - Pi(h) - Pi'(h)(h' - h)`, and the mobility is frozen at
//! the old node heights. That leaves one pentadiagonal solve per step.

use crate::banded::BandMatrix;
use crate::constitutive::{pi_prime_unchecked, pi_unchecked, PhysParams};
use crate::discretization::{div_n2c, grad_c2n, interp_c2n, laplacian, Field, Location, State};
use crate::error::{Error, Result};

use super::{check_floor, check_pre, pressure, ModelKind};

fn node_mobility(h: f64, kind: ModelKind, b: f64) -> f64 {
    match kind {
        ModelKind::WeakSlip => h * h * (h + b),
        _ => h * h,
    }
}

/// One step of a thin-film kind. Returns the height at `t + dt`.
pub fn step_thinfilm(state: &State, params: &PhysParams, kind: ModelKind, dt: f64, h_floor: f64) -> Result<Field> {
    if kind.has_velocity() {
        return Err(Error::usage(format!(
            "`{kind}` carries a velocity; use step_velocity_models"
        )));
    }
    let p = kind.effective_params(params)?;
    check_pre(state, dt, h_floor)?;
    let grid = state.grid();
    let (n, dx) = (grid.n(), grid.dx());
    let h = state.h().values();
    let mob: Vec<f64> = interp_c2n(h).iter().map(|&v| node_mobility(v, kind, p.b)).collect();
    let slope: Vec<f64> = h.iter().map(|&v| pi_prime_unchecked(v, p.alpha)).collect();

    // G(M D w) for a center field w
    let flux_div = |w: &[f64]| -> Vec<f64> {
        let mut f = grad_c2n(w, dx);
        f.iter_mut().zip(&mob).for_each(|(fj, m)| *fj *= m);
        div_n2c(&f, dx)
    };

    // Solve for the increment: A dh = -dt G(M D p(h)). Constant heights give
    // an exactly zero right-hand side and stay fixed to the last bit.
    let lap_old = laplacian(h, dx);
    let p_old: Vec<f64> = (0..n)
        .map(|i| p.sigma * lap_old[i] - pi_unchecked(h[i], p.alpha))
        .collect();
    let rhs: Vec<f64> = flux_div(&p_old).iter().map(|v| -dt * v).collect();

    let matrix = BandMatrix::from_operator(n, 2, |v, out| {
        let lap = laplacian(v, dx);
        let q: Vec<f64> = (0..n).map(|i| p.sigma * lap[i] - slope[i] * v[i]).collect();
        let fq = flux_div(&q);
        for i in 0..n {
            out[i] = v[i] + dt * fq[i];
        }
    });
    let delta = matrix.solve(&rhs)?;
    let tilde: Vec<f64> = (0..n).map(|i| h[i] + delta[i]).collect();

    // Flux form of the same update so mass telescopes exactly.
    let lap = laplacian(&tilde, dx);
    let q: Vec<f64> = (0..n)
        .map(|i| p.sigma * lap[i] - pi_unchecked(h[i], p.alpha) - slope[i] * delta[i])
        .collect();
    let fq = flux_div(&q);
    let h_new: Vec<f64> = (0..n).map(|i| h[i] - dt * fq[i]).collect();
    let t_new = state.t() + dt;
    check_floor(&h_new, dx, t_new, h_floor)?;
    Field::new(grid, Location::Centers, h_new)
}

/// Thin-film velocity `u = M(h)/h * d/dx(sigma h_xx - Pi(h))` at nodes.
pub(crate) fn thinfilm_velocity(h: &[f64], p: &PhysParams, kind: ModelKind, dx: f64) -> Vec<f64> {
    let hn = interp_c2n(h);
    let mut u = grad_c2n(&pressure(h, p, dx), dx);
    let n = h.len();
    for j in 1..n {
        u[j] *= node_mobility(hn[j], kind, p.b) / hn[j];
    }
    u
}

/// Wraps a thin-film height into a full state with its diagnostic velocity.
pub(crate) fn state_from_height(h: Field, params: &PhysParams, kind: ModelKind, t: f64) -> Result<State> {
    let p = kind.effective_params(params)?;
    let grid = h.grid();
    let u = thinfilm_velocity(h.values(), &p, kind, grid.dx());
    State::new(h, Field::new(grid, Location::Nodes, u)?, t)
}
