//! Constitutive laws: disjoining pressure, its potential and integrated form,
//! the entropy function and the thin-film mobilities.
//!
//! All functions are pure. Every function that takes a height rejects
//! `h <= 0` with [`Error::Domain`]; positivity loss is never clamped away.

use crate::dynamics::ModelKind;
use crate::error::{Error, Result};

/// Physical constants of the strong-slip family.
///
/// `beta` may be `f64::INFINITY`, which encodes the free-film case; the slip
/// coefficient [`PhysParams::inv_beta`] is then exactly zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysParams {
    /// Reynolds number.
    pub re: f64,
    /// Navier slip length of the strong-slip model.
    pub beta: f64,
    /// Capillarity coefficient.
    pub sigma: f64,
    /// Viscosity coefficient, `nu(h) = nu * h`.
    pub nu: f64,
    /// Born repulsion strength in the disjoining pressure.
    pub alpha: f64,
    /// Slip length of the weak-slip model.
    pub b: f64,
    /// Regularization strength of the regularized system.
    pub eps: f64,
}

impl Default for PhysParams {
    fn default() -> Self {
        PhysParams {
            re: 1.0,
            beta: 1.0,
            sigma: 1.0,
            nu: 1.0,
            alpha: 0.1,
            b: 1.0,
            eps: 0.0,
        }
    }
}

impl PhysParams {
    /// Checks the sign constraints on every constant.
    pub fn validate(&self) -> Result<()> {
        fn check(name: &'static str, ok: bool, value: f64, what: &str) -> Result<()> {
            if ok {
                Ok(())
            } else {
                Err(Error::InvalidParameter {
                    name,
                    reason: format!("{what}, got {value}"),
                })
            }
        }
        check(
            "re",
            self.re.is_finite() && self.re >= 0.0,
            self.re,
            "must be finite and >= 0",
        )?;
        check(
            "beta",
            !self.beta.is_nan() && self.beta > 0.0,
            self.beta,
            "must be > 0 or inf",
        )?;
        check(
            "sigma",
            self.sigma.is_finite() && self.sigma >= 0.0,
            self.sigma,
            "must be finite and >= 0",
        )?;
        check(
            "nu",
            self.nu.is_finite() && self.nu > 0.0,
            self.nu,
            "must be finite and > 0",
        )?;
        check(
            "alpha",
            self.alpha.is_finite() && self.alpha > 0.0,
            self.alpha,
            "must be finite and > 0",
        )?;
        check(
            "b",
            self.b.is_finite() && self.b >= 0.0,
            self.b,
            "must be finite and >= 0",
        )?;
        check(
            "eps",
            self.eps.is_finite() && self.eps >= 0.0,
            self.eps,
            "must be finite and >= 0",
        )?;
        Ok(())
    }

    /// `1 / beta`, exactly zero for the free film.
    #[inline]
    pub fn inv_beta(&self) -> f64 {
        1.0 / self.beta
    }

    pub fn is_free_film(&self) -> bool {
        self.beta == f64::INFINITY
    }
}

#[inline]
fn positive(h: f64) -> Result<()> {
    if h > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain { h })
    }
}

/// Disjoining pressure `1/h^3 - alpha/h^4`.
pub fn pressure_pi(h: f64, alpha: f64) -> Result<f64> {
    positive(h)?;
    Ok(pi_unchecked(h, alpha))
}

/// Potential `U` with `U' = Pi`: `-1/(2h^2) + alpha/(3h^3)`.
///
/// Its global minimum `-1/(6 alpha^2)` is attained at `h = alpha`.
pub fn u_pot(h: f64, alpha: f64) -> Result<f64> {
    positive(h)?;
    Ok(u_pot_unchecked(h, alpha))
}

/// Derivative of the disjoining pressure, `-3/h^4 + 4 alpha/h^5`.
pub fn pressure_pi_prime(h: f64, alpha: f64) -> Result<f64> {
    positive(h)?;
    Ok(pi_prime_unchecked(h, alpha))
}

/// Integrated pressure `Pi_1(h) = -int_h^inf tau Pi'(tau) dtau`, in closed form
/// `3/(2h^2) - 4 alpha/(3h^3)`. Satisfies `Pi_1'(h) = h Pi'(h)`.
pub fn pressure_pi1(h: f64, alpha: f64) -> Result<f64> {
    positive(h)?;
    let h2 = h * h;
    Ok(1.5 / h2 - 4.0 * alpha / (3.0 * h2 * h))
}

/// Entropy function `4 nu log h`.
pub fn entropy_phi(h: f64, nu: f64) -> Result<f64> {
    positive(h)?;
    Ok(4.0 * nu * h.ln())
}

/// Scalar mobility of the fourth-order thin-film kinds.
///
/// Weak slip: `h^3 + b h^2`; intermediate slip: `h^2`. Velocity-based kinds
/// have no scalar mobility and yield [`Error::Usage`].
pub fn mobility(h: f64, kind: ModelKind, b: f64) -> Result<f64> {
    positive(h)?;
    match kind {
        ModelKind::WeakSlip => Ok(h * h * (h + b)),
        ModelKind::IntermediateSlip => Ok(h * h),
        other => Err(Error::usage(format!(
            "model kind `{}` has no scalar mobility",
            other.name()
        ))),
    }
}

/// Lower bound on `U` over all positive heights.
pub fn u_pot_floor(alpha: f64) -> f64 {
    -1.0 / (6.0 * alpha * alpha)
}

/// The bound `Pi'(h) >= 2 alpha/h^5 - (6/5)^5 / (2 alpha^4)`.
pub fn pi_prime_lower_bound(h: f64, alpha: f64) -> f64 {
    2.0 * alpha / h.powi(5) - 1.2f64.powi(5) / (2.0 * alpha.powi(4))
}

// Hot-loop variants. Callers guarantee positivity (state invariants are
// checked once per step).

#[inline]
pub(crate) fn pi_unchecked(h: f64, alpha: f64) -> f64 {
    let h3 = h * h * h;
    (h - alpha) / (h3 * h)
}

#[inline]
pub(crate) fn pi_prime_unchecked(h: f64, alpha: f64) -> f64 {
    let h4 = h * h * h * h;
    (4.0 * alpha - 3.0 * h) / (h4 * h)
}

#[inline]
pub(crate) fn u_pot_unchecked(h: f64, alpha: f64) -> f64 {
    let h2 = h * h;
    -0.5 / h2 + alpha / (3.0 * h2 * h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rel_close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * (1.0 + b.abs())
    }

    #[test]
    fn pressure_vanishes_at_alpha() {
        assert_eq!(pressure_pi(0.1, 0.1).unwrap(), 0.0);
        assert!((pressure_pi(1.0, 0.1).unwrap() - 0.9).abs() < 1e-15);
    }

    #[test]
    fn potential_minimum_and_tail() {
        let v = u_pot(0.1, 0.1).unwrap();
        assert!((v + 1.0 / 0.06).abs() < 1e-10, "{v}");
        let tail = u_pot(100.0, 0.1).unwrap();
        assert!(tail < 0.0);
        assert!((tail - (-0.5e-4 + 0.1 / 3e6)).abs() < 1e-15, "{tail}");
    }

    #[test]
    fn potential_floor_by_brute_force_scan() {
        let alpha = 0.3;
        let (mut best, mut arg) = (f64::INFINITY, 0.0);
        for k in 1..=500_000 {
            let h = 50.0 * k as f64 / 500_000.0;
            let v = u_pot(h, alpha).unwrap();
            if v < best {
                best = v;
                arg = h;
            }
        }
        let floor = -1.0 / (6.0 * 0.09);
        assert!(best >= floor - 1e-12);
        assert!((best - floor).abs() < 1e-8);
        assert!((arg - alpha).abs() < 1e-3);
    }

    #[test]
    fn pi_prime_root() {
        let alpha = 0.2;
        assert!(pressure_pi_prime(4.0 * alpha / 3.0, alpha).unwrap().abs() < 1e-10);
    }

    #[test]
    fn pi1_known_value_and_tail() {
        let v = pressure_pi1(1.0, 0.1).unwrap();
        assert!((v - (1.5 - 0.4 / 3.0)).abs() < 1e-15);
        assert!(pressure_pi1(1e8, 0.1).unwrap().abs() < 1e-15);
    }

    #[test]
    fn entropy_values() {
        assert_eq!(entropy_phi(1.0, 3.0).unwrap(), 0.0);
        assert!((entropy_phi(std::f64::consts::E, 0.5).unwrap() - 2.0).abs() < 1e-15);
        for k in 1..=10_000 {
            let h = k as f64 * 1e-3;
            let nu = 0.7;
            let gap = 4.0 * nu * h - entropy_phi(h, nu).unwrap();
            assert!(gap >= 4.0 * nu - 1e-12);
        }
    }

    #[test]
    fn mobilities() {
        assert_eq!(mobility(2.0, ModelKind::WeakSlip, 1.0).unwrap(), 12.0);
        assert_eq!(mobility(3.0, ModelKind::IntermediateSlip, 5.0).unwrap(), 9.0);
        assert_eq!(mobility(1.7, ModelKind::WeakSlip, 0.0).unwrap(), 1.7f64.powi(3));
        assert!(matches!(
            mobility(1.0, ModelKind::StrongSlip, 0.0),
            Err(Error::Usage(_))
        ));
    }

    #[test]
    fn non_positive_heights_are_domain_errors() {
        for h in [0.0, -1.0, f64::NAN] {
            assert!(matches!(pressure_pi(h, 0.1), Err(Error::Domain { .. })));
            assert!(matches!(u_pot(h, 0.1), Err(Error::Domain { .. })));
            assert!(matches!(pressure_pi_prime(h, 0.1), Err(Error::Domain { .. })));
            assert!(matches!(pressure_pi1(h, 0.1), Err(Error::Domain { .. })));
            assert!(matches!(entropy_phi(h, 1.0), Err(Error::Domain { .. })));
        }
    }

    #[test]
    fn divergence_directions_near_zero() {
        let hs = [1e-1, 1e-2, 1e-3, 1e-4];
        let alpha = 0.1;
        for w in hs.windows(2) {
            assert!(u_pot(w[1], alpha).unwrap() > u_pot(w[0], alpha).unwrap());
            assert!(pressure_pi(w[1], alpha).unwrap() < pressure_pi(w[0], alpha).unwrap());
            assert!(entropy_phi(w[1], 1.0).unwrap() < entropy_phi(w[0], 1.0).unwrap());
        }
    }

    #[test]
    fn pi_prime_bound_minimizer() {
        let alpha = 0.1f64;
        // 2a/h^5 - 3/h^4 is minimized at h = 5a/6 with value -(6/5)^5/(2a^4).
        let h = 5.0 * alpha / 6.0;
        let aux = 2.0 * alpha / h.powi(5) - 3.0 / h.powi(4);
        assert!(rel_close(aux, -1.2f64.powi(5) / (2.0 * alpha.powi(4)), 1e-12));
    }

    proptest! {
        #[test]
        fn pi_is_derivative_of_potential(h in 0.2f64..5.0, alpha in 0.05f64..0.5) {
            let d = 1e-5 * h;
            let fd = (u_pot(h + d, alpha).unwrap() - u_pot(h - d, alpha).unwrap()) / (2.0 * d);
            prop_assert!(rel_close(pressure_pi(h, alpha).unwrap(), fd, 1e-8));
        }

        #[test]
        fn pi_prime_matches_central_difference(h in 0.2f64..5.0, alpha in 0.05f64..0.5) {
            // fourth-order stencil: the root of Pi' at 4 alpha / 3 rules out a relative test
            let d = 1e-3 * h;
            let f = |x: f64| pressure_pi(x, alpha).unwrap();
            let fd = (8.0 * (f(h + d) - f(h - d)) - (f(h + 2.0 * d) - f(h - 2.0 * d))) / (12.0 * d);
            let exact = pressure_pi_prime(h, alpha).unwrap();
            prop_assert!((exact - fd).abs() <= 1e-8 * (1.0 + exact.abs()));
        }

        #[test]
        fn pi1_derivative_identity(h in 0.2f64..5.0, alpha in 0.05f64..0.5) {
            let d = 1e-5 * h;
            let fd = (pressure_pi1(h + d, alpha).unwrap() - pressure_pi1(h - d, alpha).unwrap()) / (2.0 * d);
            let target = h * pressure_pi_prime(h, alpha).unwrap();
            prop_assert!((fd - target).abs() <= 1e-8 * (1.0 + target.abs()));
        }

        #[test]
        fn potential_bounded_below(h in 1e-3f64..100.0, alpha in 0.01f64..2.0) {
            prop_assert!(u_pot(h, alpha).unwrap() >= u_pot_floor(alpha) * (1.0 + 1e-14));
        }

        #[test]
        fn pressure_sign_follows_h_minus_alpha(h in 1e-3f64..100.0, alpha in 0.01f64..2.0) {
            let p = pressure_pi(h, alpha).unwrap();
            prop_assert_eq!(p > 0.0, h > alpha);
        }
    }
}
