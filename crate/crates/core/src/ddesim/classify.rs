//! Heuristic decay/growth classification of trajectories over trailing
//! amplitude windows. Verdicts from here are empirical, never proofs.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{lit, Real};

use super::trajectory::{ClassLabel, Classification, Trajectory};

/// Window layout and thresholds. The defaults (ratio < 0.7 decaying,
/// > 1.3 growing, five ratios) are configuration, not constants.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassifyParams<T> {
    pub window: T,
    pub decay_thresh: T,
    pub growth_thresh: T,
    pub n_windows: usize,
}

impl<T: Real> ClassifyParams<T> {
    pub fn with_window(window: T) -> Self {
        Self {
            window,
            decay_thresh: lit(0.7),
            growth_thresh: lit(1.3),
            n_windows: 5,
        }
    }
}

/// Peak amplitudes over the last `n_windows + 1` windows of length `window`
/// produce `n_windows` consecutive ratios; all below the decay threshold
/// means `Decaying`, all above the growth threshold `Growing`, all inside
/// the band `BoundedNonDecaying`, anything mixed `Inconclusive`.
/// A divergence flag short-circuits to `Growing`. The ratio convention for
/// an identically zero pair of windows is `0/0 = 0`.
pub fn classify_trajectory<T: Real>(
    tr: &Trajectory<T>,
    params: &ClassifyParams<T>,
) -> Result<Classification<T>> {
    if !(params.window > T::zero()) {
        return Err(Error::Simulation("window must be positive".into()));
    }
    if params.n_windows == 0 {
        return Err(Error::Simulation("need at least one window ratio".into()));
    }
    let count = params.n_windows + 1;
    let span = tr.last_time() - tr.t0;
    let needed = params.window * T::from(count).expect("window count");
    if span < needed {
        return Err(Error::Simulation(
            "window too large for trajectory span".into(),
        ));
    }

    let t_end = tr.last_time();
    let mut peaks = vec![T::zero(); count];
    for (i, &t) in tr.times.iter().enumerate() {
        let from_end = t_end - t;
        let slot = (from_end / params.window).to_f64().unwrap_or(f64::NAN);
        if !slot.is_finite() || slot >= count as f64 {
            continue;
        }
        // windows ordered oldest-first
        let idx = count - 1 - (slot.floor() as usize).min(count - 1);
        let mag = tr.x[i].abs();
        if mag > peaks[idx] {
            peaks[idx] = mag;
        }
    }

    let mut ratios = Vec::with_capacity(params.n_windows);
    for w in peaks.windows(2) {
        let (prev, next) = (w[0], w[1]);
        let r = if next == T::zero() && prev == T::zero() {
            T::zero()
        } else if prev == T::zero() {
            T::infinity()
        } else {
            next / prev
        };
        ratios.push(r);
    }

    let label = if tr.diverged {
        ClassLabel::Growing
    } else if ratios.iter().all(|&r| r < params.decay_thresh) {
        ClassLabel::Decaying
    } else if ratios.iter().all(|&r| r > params.growth_thresh) {
        ClassLabel::Growing
    } else if ratios
        .iter()
        .all(|&r| r >= params.decay_thresh && r <= params.growth_thresh)
    {
        ClassLabel::BoundedNonDecaying
    } else {
        ClassLabel::Inconclusive
    };

    Ok(Classification {
        label,
        window_ratios: ratios,
        peak_amplitudes: peaks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ddesim::{integrate, HistoryFn};
    use crate::model::{CoefFn, DelayFn, EquationSpec};

    #[test]
    fn strongly_damped_delay_equation_decays() {
        let spec = EquationSpec::LinearVarDelay7 {
            a: CoefFn::constant(3.0),
            b: CoefFn::constant(1.1),
            c: vec![CoefFn::constant(-0.8)],
            delays: vec![DelayFn::SinLag { amplitude: 2.0 }],
        };
        let tr = integrate(&spec, &HistoryFn::constant(1.0, 0.0), 0.0, 200.0, 1e-2).unwrap();
        let c = classify_trajectory(&tr, &ClassifyParams::with_window(20.0)).unwrap();
        assert_eq!(c.label, ClassLabel::Decaying);
    }

    #[test]
    fn identically_zero_trajectory_counts_as_decaying() {
        let spec = EquationSpec::LinearVarDelay7 {
            a: CoefFn::constant(1.0),
            b: CoefFn::constant(1.0),
            c: vec![],
            delays: vec![],
        };
        let tr = integrate(&spec, &HistoryFn::constant(0.0, 0.0), 0.0, 150.0, 1e-2).unwrap();
        let c = classify_trajectory(&tr, &ClassifyParams::with_window(20.0)).unwrap();
        assert_eq!(c.label, ClassLabel::Decaying);
        assert!(c.window_ratios.iter().all(|&r| r == 0.0));
    }

    #[test]
    fn undamped_center_is_bounded_non_decaying() {
        let spec = EquationSpec::LinearVarDelay7 {
            a: CoefFn::constant(0.0),
            b: CoefFn::constant(42.0),
            c: vec![],
            delays: vec![],
        };
        let tr = integrate(&spec, &HistoryFn::constant(1.0, 0.0), 0.0, 200.0, 1e-3).unwrap();
        let c = classify_trajectory(&tr, &ClassifyParams::with_window(20.0)).unwrap();
        assert_eq!(c.label, ClassLabel::BoundedNonDecaying);
    }

    #[test]
    fn exponential_growth_is_flagged() {
        // xddot = +x grows like cosh t
        let spec = EquationSpec::LinearVarDelay7 {
            a: CoefFn::constant(0.0),
            b: CoefFn::constant(-1.0),
            c: vec![],
            delays: vec![],
        };
        let tr = integrate(&spec, &HistoryFn::constant(1.0, 0.0), 0.0, 40.0, 1e-2).unwrap();
        let c = classify_trajectory(&tr, &ClassifyParams::with_window(5.0)).unwrap();
        assert_eq!(c.label, ClassLabel::Growing);
    }

    #[test]
    fn oversized_window_is_rejected() {
        let spec = EquationSpec::LinearVarDelay7 {
            a: CoefFn::constant(1.0),
            b: CoefFn::constant(1.0),
            c: vec![],
            delays: vec![],
        };
        let tr = integrate(&spec, &HistoryFn::constant(1.0, 0.0), 0.0, 10.0, 1e-2).unwrap();
        assert!(classify_trajectory(&tr, &ClassifyParams::with_window(5.0)).is_err());
    }
}
