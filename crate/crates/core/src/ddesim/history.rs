//! Pre-history of a delay problem: `x(t) = phi(t)`, `xdot(t) = psi(t)` for
//! `t <= t0`, evaluated lazily at whatever points the integrator requests.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum HistoryFn<T> {
    /// `phi = x`, `psi = xdot` everywhere.
    Constant { x: T, xdot: T },
    /// `phi(t) = sum_i coeffs[i] t^i`; `psi` is its derivative.
    Polynomial { coeffs: Vec<T> },
    /// `phi(t) = center + amplitude * exp(rate * t)`.
    ExponentialEnvelope { center: T, amplitude: T, rate: T },
    /// Linear interpolation through `(times, values)`, clamped outside the
    /// table; the slope comes from the active segment.
    Tabulated { times: Vec<T>, values: Vec<T> },
    /// `phi` from `shape` with the derivative history replaced by a constant.
    /// Used when the initial slope is prescribed independently of `phi'`.
    WithVelocity { shape: Box<HistoryFn<T>>, xdot: T },
}

impl<T: Real> HistoryFn<T> {
    pub fn constant(x: T, xdot: T) -> Self {
        HistoryFn::Constant { x, xdot }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            HistoryFn::Constant { x, xdot } => {
                if !x.is_finite() || !xdot.is_finite() {
                    return Err(Error::History("constant history must be finite".into()));
                }
            }
            HistoryFn::Polynomial { coeffs } => {
                if coeffs.is_empty() {
                    return Err(Error::History("polynomial history needs coefficients".into()));
                }
                if coeffs.iter().any(|c| !c.is_finite()) {
                    return Err(Error::History("polynomial coefficients must be finite".into()));
                }
            }
            HistoryFn::ExponentialEnvelope { center, amplitude, rate } => {
                if !center.is_finite() || !amplitude.is_finite() || !rate.is_finite() {
                    return Err(Error::History("envelope history must be finite".into()));
                }
            }
            HistoryFn::Tabulated { times, values } => {
                if times.is_empty() || times.len() != values.len() {
                    return Err(Error::History(
                        "tabulated history needs equally long, nonempty tables".into(),
                    ));
                }
                if times.windows(2).any(|w| !(w[0] < w[1])) {
                    return Err(Error::History(
                        "tabulated history times must be strictly increasing".into(),
                    ));
                }
                if values.iter().any(|v| !v.is_finite()) {
                    return Err(Error::History("tabulated values must be finite".into()));
                }
            }
            HistoryFn::WithVelocity { shape, xdot } => {
                if !xdot.is_finite() {
                    return Err(Error::History("override velocity must be finite".into()));
                }
                shape.validate()?;
            }
        }
        Ok(())
    }

    pub fn eval_x(&self, t: T) -> T {
        match self {
            HistoryFn::Constant { x, .. } => *x,
            HistoryFn::Polynomial { coeffs } => {
                coeffs.iter().rev().fold(T::zero(), |acc, &c| acc * t + c)
            }
            HistoryFn::ExponentialEnvelope { center, amplitude, rate } => {
                *center + *amplitude * (*rate * t).exp()
            }
            HistoryFn::Tabulated { times, values } => {
                if t <= times[0] {
                    values[0]
                } else if t >= times[times.len() - 1] {
                    values[values.len() - 1]
                } else {
                    let hi = times.partition_point(|&ti| ti <= t);
                    let w = (t - times[hi - 1]) / (times[hi] - times[hi - 1]);
                    values[hi - 1] + w * (values[hi] - values[hi - 1])
                }
            }
            HistoryFn::WithVelocity { shape, .. } => shape.eval_x(t),
        }
    }

    pub fn eval_xdot(&self, t: T) -> T {
        match self {
            HistoryFn::Constant { xdot, .. } => *xdot,
            HistoryFn::Polynomial { coeffs } => {
                let mut acc = T::zero();
                for (i, &c) in coeffs.iter().enumerate().skip(1).rev() {
                    acc = acc * t + c * T::from(i).expect("small index");
                }
                acc
            }
            HistoryFn::ExponentialEnvelope { amplitude, rate, .. } => {
                *amplitude * *rate * (*rate * t).exp()
            }
            HistoryFn::Tabulated { times, values } => {
                if times.len() < 2 || t <= times[0] || t >= times[times.len() - 1] {
                    T::zero()
                } else {
                    let hi = times.partition_point(|&ti| ti <= t);
                    (values[hi] - values[hi - 1]) / (times[hi] - times[hi - 1])
                }
            }
            HistoryFn::WithVelocity { xdot, .. } => *xdot,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_history_and_derivative() {
        // 1 + 2t + 3t^2
        let h = HistoryFn::Polynomial {
            coeffs: vec![1.0, 2.0, 3.0],
        };
        assert!((h.eval_x(2.0) - 17.0).abs() < 1e-14);
        assert!((h.eval_xdot(2.0) - 14.0).abs() < 1e-14);
    }

    #[test]
    fn tabulated_history_interpolates_and_clamps() {
        let h = HistoryFn::Tabulated {
            times: vec![-1.0, 0.0, 1.0],
            values: vec![0.0, 2.0, 2.0],
        };
        assert_eq!(h.eval_x(-0.5), 1.0);
        assert_eq!(h.eval_x(-5.0), 0.0);
        assert_eq!(h.eval_x(5.0), 2.0);
        assert_eq!(h.eval_xdot(-0.5), 2.0);
    }

    #[test]
    fn velocity_override_keeps_shape() {
        let h = HistoryFn::WithVelocity {
            shape: Box::new(HistoryFn::ExponentialEnvelope {
                center: 0.0,
                amplitude: 1.0,
                rate: 0.5,
            }),
            xdot: -0.25,
        };
        assert!((h.eval_x(0.0) - 1.0).abs() < 1e-14);
        assert_eq!(h.eval_xdot(-3.0), -0.25);
    }

    #[test]
    fn bad_tables_are_rejected() {
        let h = HistoryFn::Tabulated {
            times: vec![0.0, 0.0],
            values: vec![1.0, 2.0],
        };
        assert!(h.validate().is_err());
    }
}
