//! Scalar kernel of specular differentiation.
//!
//! The specular directional derivative blends the two one-sided difference
//! quotients through the angular mean: the slope of the bisector of the two
//! one-sided tangent lines. At a symmetric kink (slopes `a` and `-a`) the
//! bisector is horizontal, so the specular derivative vanishes; where the
//! function is smooth both slopes coincide and the classical derivative is
//! recovered.

use crate::error::{Error, Result};
use crate::linalg::Vector;

/// The pair of one-sided directional derivatives at a point, `plus` for the
/// forward limit and `minus` for the backward one. For convex functions
/// `minus <= plus`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OneSidedSlopes {
    pub plus: f64,
    pub minus: f64,
}

impl OneSidedSlopes {
    /// Validating constructor; rejects non-finite slopes.
    pub fn new(plus: f64, minus: f64) -> Result<Self> {
        if !plus.is_finite() || !minus.is_finite() {
            return Err(Error::NonFinite { context: "one-sided slope" });
        }
        Ok(Self { plus, minus })
    }

    /// As `new`, additionally enforcing the convex-function ordering
    /// `minus <= plus` (with a hair of roundoff slack).
    pub fn new_convex(plus: f64, minus: f64) -> Result<Self> {
        let s = Self::new(plus, minus)?;
        let slack = 1e-12 * (1.0 + plus.abs().max(minus.abs()));
        if s.minus > s.plus + slack {
            return Err(Error::Domain(format!(
                "one-sided slopes violate convex ordering: minus {minus} > plus {plus}"
            )));
        }
        Ok(s)
    }
}

/// `a / sqrt(1 + a^2)` and `1 / sqrt(1 + a^2)` computed together.
///
/// For |a| above 1e8 the direct form loses the `1 +` entirely and can
/// overflow `a*a`; rewrite through `1/a` instead.
fn sine_and_weight(a: f64) -> (f64, f64) {
    if a.abs() > 1e8 {
        let inv = 1.0 / a;
        let t = (1.0 + inv * inv).sqrt();
        (a.signum() / t, inv.abs() / t)
    } else {
        let t = (1.0 + a * a).sqrt();
        (a / t, 1.0 / t)
    }
}

/// Angular mean of two slopes: the slope of the bisector of lines with
/// slopes `alpha` and `beta`,
/// `(alpha/sqrt(1+alpha^2) + beta/sqrt(1+beta^2)) / (1/sqrt(1+alpha^2) + 1/sqrt(1+beta^2))`.
///
/// A convex combination of its arguments: symmetric, lies between
/// `min(alpha, beta)` and `max(alpha, beta)`, equals the common value when
/// `alpha == beta` and 0 when `alpha == -beta`.
pub fn angular_mean(alpha: f64, beta: f64) -> Result<f64> {
    if !alpha.is_finite() || !beta.is_finite() {
        return Err(Error::NonFinite { context: "angular_mean argument" });
    }
    if alpha == beta {
        return Ok(alpha);
    }
    let (sa, wa) = sine_and_weight(alpha);
    let (sb, wb) = sine_and_weight(beta);
    Ok((sa + sb) / (wa + wb))
}

/// Specular directional derivative from exact one-sided slopes along a
/// direction of norm `v_norm`:
/// `v_norm * angular_mean(plus / v_norm, minus / v_norm)`.
///
/// When the two slopes agree the common value is returned as-is.
pub fn specular_directional(slopes: OneSidedSlopes, v_norm: f64) -> Result<f64> {
    if !v_norm.is_finite() || v_norm <= 0.0 {
        return Err(Error::Domain(format!(
            "direction norm must be positive and finite, got {v_norm}"
        )));
    }
    if !slopes.plus.is_finite() || !slopes.minus.is_finite() {
        return Err(Error::NonFinite { context: "one-sided slope" });
    }
    if slopes.plus == slopes.minus {
        return Ok(slopes.plus);
    }
    Ok(v_norm * angular_mean(slopes.plus / v_norm, slopes.minus / v_norm)?)
}

/// Specular directional derivative along the zero direction, which is 0 by
/// definition, for any function and point.
pub fn zero_direction_specular() -> f64 {
    0.0
}

/// Outcome of the necessary-optimality check on a specular gradient.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimalityCertificate {
    /// |sum of the specular partial derivatives|.
    pub sum_value: f64,
    /// sqrt(dimension).
    pub bound: f64,
    /// Whether `sum_value <= bound + tol`.
    pub sum_bound_ok: bool,
}

pub const DEFAULT_CERTIFICATE_TOL: f64 = 1e-12;

/// Necessary condition at a local minimizer or maximizer: the absolute sum
/// of the specular partial derivatives is at most sqrt(n). A point failing
/// this check cannot be a local extremum.
pub fn optimality_certificate(sg: &Vector, tol: f64) -> Result<OptimalityCertificate> {
    if sg.is_empty() {
        return Err(Error::EmptyInput("specular gradient"));
    }
    if !sg.is_finite() {
        return Err(Error::NonFinite { context: "specular gradient" });
    }
    let sum_value = sg.iter().sum::<f64>().abs();
    let bound = (sg.len() as f64).sqrt();
    Ok(OptimalityCertificate {
        sum_value,
        bound,
        sum_bound_ok: sum_value <= bound + tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn angular_mean_symmetric_kink_is_zero() {
        assert_eq!(angular_mean(1.0, -1.0).unwrap(), 0.0);
    }

    #[test]
    fn angular_mean_identity_case() {
        assert_eq!(angular_mean(2.5, 2.5).unwrap(), 2.5);
        assert_eq!(angular_mean(-7.0, -7.0).unwrap(), -7.0);
    }

    #[test]
    fn angular_mean_frozen_values() {
        // 1/(1+sqrt(2)), independently evaluated both in closed form and by
        // the limit definition on max(x, 0) at 0 with h = 1e-6.
        assert!(close(angular_mean(1.0, 0.0).unwrap(), 0.4142135623730950, 1e-15));
        // (1+sqrt(5))/2, closed-form hand evaluation checked at high precision.
        assert!(close(angular_mean(3.0, 1.0).unwrap(), 1.6180339887498949, 1e-15));
        // (sqrt(5)-1)/2.
        assert!(close(angular_mean(2.0, 0.0).unwrap(), 0.6180339887498949, 1e-15));
        assert!(close(angular_mean(0.0, -2.0).unwrap(), -0.6180339887498949, 1e-15));
    }

    #[test]
    fn angular_mean_rejects_non_finite() {
        assert!(angular_mean(f64::NAN, 0.0).is_err());
        assert!(angular_mean(0.0, f64::INFINITY).is_err());
    }

    #[test]
    fn angular_mean_large_slopes_stable() {
        // Steep symmetric-ish kink: lambda1 = 100-type slopes and far beyond.
        let v = angular_mean(1e12, -1e12 + 2.0).unwrap();
        assert!(v.is_finite() && v.abs() < 1.0);
        let v = angular_mean(1e300, 1.0).unwrap();
        assert!(v.is_finite() && (1.0..=1e300).contains(&v));
    }

    #[test]
    fn specular_directional_cases() {
        // f(x) = |x| at 0: symmetric kink.
        let s = OneSidedSlopes::new(1.0, -1.0).unwrap();
        assert_eq!(specular_directional(s, 1.0).unwrap(), 0.0);
        // Smooth case: slope preserved independent of the direction norm.
        let s = OneSidedSlopes::new(2.0, 2.0).unwrap();
        assert_eq!(specular_directional(s, 5.0).unwrap(), 2.0);
        // max(x, 0) at 0 along the unit direction.
        let s = OneSidedSlopes::new(1.0, 0.0).unwrap();
        assert!(close(specular_directional(s, 1.0).unwrap(), 0.4142135623730950, 1e-15));
    }

    #[test]
    fn specular_directional_rejects_bad_norm() {
        let s = OneSidedSlopes::new(1.0, 0.0).unwrap();
        assert!(specular_directional(s, 0.0).is_err());
        assert!(specular_directional(s, -1.0).is_err());
        assert!(specular_directional(s, f64::NAN).is_err());
    }

    #[test]
    fn zero_direction_is_zero() {
        assert_eq!(zero_direction_specular(), 0.0);
    }

    #[test]
    fn convex_ordering_enforced() {
        assert!(OneSidedSlopes::new_convex(1.0, -1.0).is_ok());
        assert!(OneSidedSlopes::new_convex(-1.0, 1.0).is_err());
        assert!(OneSidedSlopes::new_convex(2.0, 2.0).is_ok());
    }

    #[test]
    fn certificate_zero_gradient() {
        let sg = Vector::new(vec![0.0, 0.0, 0.0]).unwrap();
        let c = optimality_certificate(&sg, DEFAULT_CERTIFICATE_TOL).unwrap();
        assert!(c.sum_bound_ok);
        assert_eq!(c.sum_value, 0.0);
        assert!(close(c.bound, 3f64.sqrt(), 1e-15));
    }

    #[test]
    fn certificate_rejects_far_point() {
        // Sum 4 against bound sqrt(4) = 2: not an extremum candidate.
        let sg = Vector::new(vec![1.0, 1.0, 1.0, 1.0]).unwrap();
        let c = optimality_certificate(&sg, DEFAULT_CERTIFICATE_TOL).unwrap();
        assert!(!c.sum_bound_ok);
        assert_eq!(c.sum_value, 4.0);
        assert_eq!(c.bound, 2.0);
    }

    #[test]
    fn certificate_rejects_empty() {
        let sg = Vector::zeros(0);
        assert!(optimality_certificate(&sg, 1e-12).is_err());
    }
}
