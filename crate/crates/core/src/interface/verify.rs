//! Built-in property battery behind `slipfilm verify`.

use std::f64::consts::PI;

use crate::constitutive::{
    pi_prime_lower_bound, pressure_pi, pressure_pi1, pressure_pi_prime, u_pot, u_pot_floor, PhysParams,
};
use crate::diagnostics::{check_coercivity, check_energy_balance, check_entropy_balance, Trajectory};
use crate::discretization::{div_node_to_center, grad_center_to_node, laplacian_neumann, Field, Grid, Location, State};
use crate::dynamics::{advance, reference_integrate, step, ModelKind, StepControl};
use crate::experiments::CosineProfile;

/// The scalar laws under test. Swapping one out lets the battery be checked
/// against a deliberately broken law.
#[derive(Clone, Copy)]
pub struct Laws {
    pub pi: fn(f64, f64) -> f64,
    pub u_pot: fn(f64, f64) -> f64,
    pub pi_prime: fn(f64, f64) -> f64,
    pub pi1: fn(f64, f64) -> f64,
}

impl Laws {
    pub fn standard() -> Self {
        Laws {
            pi: |h, a| pressure_pi(h, a).expect("positive h"),
            u_pot: |h, a| u_pot(h, a).expect("positive h"),
            pi_prime: |h, a| pressure_pi_prime(h, a).expect("positive h"),
            pi1: |h, a| pressure_pi1(h, a).expect("positive h"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn outcome(name: &'static str, worst: f64, tol: f64) -> CheckOutcome {
    CheckOutcome {
        name,
        passed: worst <= tol,
        detail: format!("worst {worst:.3e} (tol {tol:.0e})"),
    }
}

pub const ALPHAS: [f64; 3] = [0.05, 0.1, 0.5];

/// 100 log-spaced heights in `[0.05, 20]`.
pub fn sample_heights() -> Vec<f64> {
    (0..100).map(|k| 0.05 * 400f64.powf(k as f64 / 99.0)).collect()
}

/// Fourth-order central difference.
pub fn derivative(f: impl Fn(f64) -> f64, h: f64) -> f64 {
    let d = 1e-3 * h;
    (8.0 * (f(h + d) - f(h - d)) - (f(h + 2.0 * d) - f(h - 2.0 * d))) / (12.0 * d)
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

/// Size of the individual terms of `Pi`; `Pi` itself vanishes at `h = 4 alpha / 3`
/// and a plain relative error is meaningless there.
pub fn pi_scale(h: f64, alpha: f64) -> f64 {
    1.0 / h.powi(3) + alpha / h.powi(4)
}

/// Same for `h Pi'`.
pub fn h_pi_prime_scale(h: f64, alpha: f64) -> f64 {
    3.0 / h.powi(3) + 4.0 * alpha / h.powi(4)
}

/// `Pi = U'` at the sample heights.
pub fn check_pi_is_potential_derivative(laws: &Laws) -> CheckOutcome {
    let mut worst: f64 = 0.0;
    for a in ALPHAS {
        for h in sample_heights() {
            let fd = derivative(|x| (laws.u_pot)(x, a), h);
            worst = worst.max((fd - (laws.pi)(h, a)).abs() / pi_scale(h, a));
        }
    }
    outcome("pi = U'", worst, 1e-8)
}

/// `Pi_1' = h Pi'` at the sample heights.
pub fn check_pi1_derivative(laws: &Laws) -> CheckOutcome {
    let mut worst: f64 = 0.0;
    for a in ALPHAS {
        for h in sample_heights() {
            let fd = derivative(|x| (laws.pi1)(x, a), h);
            let exact = h * (laws.pi_prime)(h, a);
            worst = worst.max((fd - exact).abs() / h_pi_prime_scale(h, a));
        }
    }
    outcome("pi1' = h pi'", worst, 1e-8)
}

/// Composite Gauss-Legendre (5 points) on `m` panels.
pub fn gauss_legendre(f: impl Fn(f64) -> f64, a: f64, b: f64, m: usize) -> f64 {
    const X: [f64; 5] = [
        0.0,
        0.538_469_310_105_683_1,
        -0.538_469_310_105_683_1,
        0.906_179_845_938_664,
        -0.906_179_845_938_664,
    ];
    const W: [f64; 5] = [
        0.568_888_888_888_888_9,
        0.478_628_670_499_366_5,
        0.478_628_670_499_366_5,
        0.236_926_885_056_189_1,
        0.236_926_885_056_189_1,
    ];
    let h = (b - a) / m as f64;
    (0..m)
        .map(|k| {
            let mid = a + (k as f64 + 0.5) * h;
            X.iter().zip(W).map(|(x, w)| w * f(mid + 0.5 * h * x)).sum::<f64>() * 0.5 * h
        })
        .sum()
}

/// `Pi_1(h) = -int_h^inf s Pi'(s) ds`, the tail integral mapped to `[0, 1/h]`
/// by `s = 1/r`.
pub fn check_pi1_quadrature(laws: &Laws) -> CheckOutcome {
    let mut worst: f64 = 0.0;
    for a in ALPHAS {
        for h in sample_heights() {
            // s Pi'(s) ds with s = 1/r: integrand s Pi'(s) / r^2
            let tail = gauss_legendre(
                |r| {
                    if r == 0.0 {
                        0.0
                    } else {
                        let s = 1.0 / r;
                        s * (laws.pi_prime)(s, a) / (r * r)
                    }
                },
                0.0,
                1.0 / h,
                400,
            );
            worst = worst.max(rel(-tail, (laws.pi1)(h, a)));
        }
    }
    outcome("pi1 closed form vs quadrature", worst, 1e-8)
}

/// `U >= -1/(6 alpha^2)` with equality at `h = alpha`, and the lower bound
/// on `Pi'`, on a dense scan.
pub fn check_analytic_bounds(laws: &Laws) -> CheckOutcome {
    let mut worst: f64 = 0.0;
    for a in ALPHAS {
        let floor = u_pot_floor(a);
        for k in 0..200_000 {
            let h = 0.01 * a + 50.0 * a * k as f64 / 200_000.0;
            worst = worst.max(floor - (laws.u_pot)(h, a));
            worst = worst.max(pi_prime_lower_bound(h, a) - (laws.pi_prime)(h, a));
        }
        worst = worst.max(((laws.u_pot)(a, a) - floor).abs());
    }
    outcome("U floor and pi' lower bound", worst.max(0.0), 1e-12)
}

/// Second-order convergence of the gradient and the Neumann Laplacian.
pub fn check_operator_orders() -> CheckOutcome {
    let err = |n: usize| -> (f64, f64) {
        let g = Grid::new(n).unwrap();
        let f = Field::from_fn(g, Location::Centers, |x| (PI * x).cos());
        let d = grad_center_to_node(&f).unwrap();
        let l = laplacian_neumann(&f).unwrap();
        let ed = d
            .values()
            .iter()
            .enumerate()
            .map(|(j, v)| (v + PI * (PI * g.node(j)).sin()).abs())
            .fold(0.0, f64::max);
        let el = l
            .values()
            .iter()
            .enumerate()
            .map(|(i, v)| (v + PI * PI * (PI * g.center(i)).cos()).abs())
            .fold(0.0, f64::max);
        (ed, el)
    };
    let (d1, l1) = err(64);
    let (d2, l2) = err(128);
    let order = (d1 / d2).log2().min((l1 / l2).log2());
    CheckOutcome {
        name: "operator orders",
        passed: order >= 1.9,
        detail: format!("observed order {order:.3}"),
    }
}

/// `sum_nodes Dh v dx = -sum_centers h Gv dx` for `v` vanishing at the ends.
pub fn check_summation_by_parts() -> CheckOutcome {
    let g = Grid::new(37).unwrap();
    let h = Field::from_fn(g, Location::Centers, |x| (3.0 * x).exp() + x * x);
    let mut v: Vec<f64> = g.nodes().iter().map(|x| (7.0 * x).sin() + 0.3).collect();
    v[0] = 0.0;
    v[37] = 0.0;
    let v = Field::new(g, Location::Nodes, v).unwrap();
    let lhs = grad_center_to_node(&h).unwrap().dot(&v).unwrap();
    let rhs = -h.dot(&div_node_to_center(&v).unwrap()).unwrap();
    outcome("summation by parts", (lhs - rhs).abs() / (1.0 + lhs.abs()), 1e-13)
}

fn cosine(n: usize) -> State {
    CosineProfile::default().sample(Grid::new(n).unwrap()).unwrap()
}

fn battery_params() -> PhysParams {
    PhysParams {
        eps: 1e-3,
        ..PhysParams::default()
    }
}

/// Constant states are fixed points of every stepper.
pub fn check_constant_states() -> CheckOutcome {
    let s = State::constant(Grid::new(32).unwrap(), 0.8).unwrap();
    let mut worst: f64 = 0.0;
    for kind in ModelKind::ALL {
        let mut cur = s.clone();
        for _ in 0..20 {
            cur = step(&cur, &battery_params(), kind, 1e-2, 1e-8).unwrap();
        }
        let dh = cur.h().values().iter().fold(0.0f64, |m, v| m.max((v - 0.8).abs()));
        let du = cur.u().values().iter().fold(0.0f64, |m, v| m.max(v.abs()));
        worst = worst.max(dh).max(du);
    }
    outcome("constant states are fixed", worst, 1e-13)
}

/// Mass drift over 200 steps of every kind.
pub fn check_mass_conservation() -> CheckOutcome {
    let s = cosine(64);
    let m0 = s.mass();
    let mut worst: f64 = 0.0;
    for kind in ModelKind::ALL {
        let mut cur = s.clone();
        for _ in 0..200 {
            cur = step(&cur, &battery_params(), kind, 1e-5, 1e-8).unwrap();
        }
        worst = worst.max(((cur.mass() - m0) / m0).abs());
    }
    outcome("mass conservation", worst, 1e-12)
}

fn standard_trajectory(t_end: f64) -> Result<Trajectory, String> {
    let s = cosine(64);
    let p = PhysParams::default();
    let mut traj = Trajectory::start(&s, &p, ModelKind::StrongSlip, true).map_err(|e| e.to_string())?;
    advance(
        &s,
        &p,
        ModelKind::StrongSlip,
        t_end,
        &StepControl::fixed(1e-5),
        &mut traj,
    )
    .map_err(|e| e.to_string())?;
    Ok(traj)
}

/// Energy, entropy and coercivity along the standard cosine run.
pub fn check_inequalities() -> Vec<CheckOutcome> {
    let p = PhysParams::default();
    let traj = match standard_trajectory(0.02) {
        Ok(t) => t,
        Err(e) => {
            return vec![CheckOutcome {
                name: "energy/entropy inequalities",
                passed: false,
                detail: e,
            }]
        }
    };
    let mut out = Vec::new();
    for (name, report) in [
        ("energy inequality", check_energy_balance(&traj.records, 1e-8)),
        (
            "entropy inequality",
            check_entropy_balance(&traj, &p, ModelKind::StrongSlip, 1e-6),
        ),
        ("coercivity", check_coercivity(&traj, &p, ModelKind::StrongSlip, 1e-12)),
    ] {
        out.push(match report {
            Ok(r) => CheckOutcome {
                name,
                passed: r.passed,
                detail: format!("worst {:.3e} (tol {:.0e})", r.worst_violation, r.tolerance),
            },
            Err(e) => CheckOutcome {
                name,
                passed: false,
                detail: e.to_string(),
            },
        });
    }
    out
}

/// The rescaled strong-slip model at `beta = 1/2` with step `dt` equals the
/// original model with step `2 dt` and velocity divided by beta.
pub fn check_scaling_equivalence() -> CheckOutcome {
    let s = cosine(32);
    let beta = 0.5;
    let p = PhysParams {
        beta,
        ..PhysParams::default()
    };
    let run = || -> crate::Result<f64> {
        let a = reference_integrate(&s, &p, ModelKind::ScaledStrongSlip, 0.005, 1e-6)?;
        let b = reference_integrate(&s, &p, ModelKind::StrongSlip, 0.01, 2e-6)?;
        let dh = a.h().values().iter().zip(b.h().values()).map(|(x, y)| (x - y).abs());
        let du = a
            .u()
            .values()
            .iter()
            .zip(b.u().values())
            .map(|(x, y)| (x - y / beta).abs());
        Ok(dh.chain(du).fold(0.0, f64::max))
    };
    match run() {
        Ok(w) => outcome("scaling equivalence", w, 1e-12),
        Err(e) => CheckOutcome {
            name: "scaling equivalence",
            passed: false,
            detail: e.to_string(),
        },
    }
}

/// Runs the whole battery with the given laws.
pub fn run_battery(laws: &Laws) -> Vec<CheckOutcome> {
    let mut out = vec![
        check_pi_is_potential_derivative(laws),
        check_pi1_derivative(laws),
        check_pi1_quadrature(laws),
        check_analytic_bounds(laws),
        check_operator_orders(),
        check_summation_by_parts(),
        check_constant_states(),
        check_mass_conservation(),
    ];
    out.extend(check_inequalities());
    out.push(check_scaling_equivalence());
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_laws_pass_the_scalar_checks() {
        let laws = Laws::standard();
        for c in [
            check_pi_is_potential_derivative(&laws),
            check_pi1_derivative(&laws),
            check_pi1_quadrature(&laws),
            check_analytic_bounds(&laws),
        ] {
            assert!(c.passed, "{}: {}", c.name, c.detail);
        }
    }

    #[test]
    fn tampered_pi1_fails_its_derivative_check() {
        let laws = Laws {
            pi1: |h, a| 3.0 / (2.0 * h * h) - 4.1 * a / (3.0 * h * h * h),
            ..Laws::standard()
        };
        assert!(!check_pi1_derivative(&laws).passed);
        assert!(!check_pi1_quadrature(&laws).passed);
    }

    #[test]
    fn gauss_legendre_is_exact_for_polynomials() {
        let v = gauss_legendre(|x| x.powi(9) - 3.0 * x * x, 0.0, 2.0, 1);
        assert!((v - (102.4 - 8.0)).abs() < 1e-12);
    }
}
