//! Fixed-step classical Runge-Kutta integration of the second-order
//! families by the method of steps.
//!
//! Delayed state values are resolved from three zones: the history function
//! for arguments at or before `t0`, cubic-Hermite dense output over
//! completed steps, and a first-order predictor from the last completed node
//! for arguments inside the step being computed (vanishing delays).

use crate::error::{Error, Result};
use crate::model::EquationSpec;
use crate::scalar::{lit, Real};

use super::history::HistoryFn;
use super::trajectory::Trajectory;

/// Delayed-state provider for the right-hand sides.
pub(crate) trait StateLookup<T: Real> {
    fn x_at(&self, r: T) -> Result<T>;
    fn xdot_at(&self, r: T) -> Result<T>;
    /// Latest time with finalized dense data.
    fn horizon(&self) -> T;
}

/// Acceleration of the second-order families, with delayed values resolved
/// through `lookup`.
pub(crate) fn acceleration<T: Real, L: StateLookup<T>>(
    spec: &EquationSpec<T>,
    t: T,
    x: T,
    v: T,
    lookup: &L,
) -> Result<T> {
    match spec {
        EquationSpec::LinearConstAutonomous { p1, p2, q1, q2, tau } => {
            let xd = lookup.x_at(t - *tau)?;
            let vd = lookup.xdot_at(t - *tau)?;
            Ok(*p1 * v + *p2 * vd + *q1 * x + *q2 * xd)
        }
        EquationSpec::LinearVarDelay7 { a, b, c, delays } => {
            let mut acc = -a.eval(t) * v - b.eval(t) * x;
            for (ck, dk) in c.iter().zip(delays) {
                acc = acc - ck.eval(t) * lookup.x_at(dk.arg(t)?)?;
            }
            Ok(acc)
        }
        EquationSpec::LinearVarDelay10 { a, b, c, delays } => {
            let mut acc = -a.eval(t) * v - b.eval(t) * x;
            for (ck, dk) in c.iter().zip(delays) {
                acc = acc - ck.eval(t) * lookup.xdot_at(dk.arg(t)?)?;
            }
            Ok(acc)
        }
        EquationSpec::LinearVarDelay12 { a, b_terms, delays } => {
            let mut acc = -a.eval(t) * v;
            for (bk, dk) in b_terms.iter().zip(delays) {
                acc = acc - bk.eval(t) * lookup.x_at(dk.arg(t)?)?;
            }
            Ok(acc)
        }
        EquationSpec::DifferenceForm15 { a, b, c, delays } => {
            let mut acc = -a.eval(t) * v - b.eval(t) * x;
            for (ck, dk) in c.iter().zip(delays) {
                acc = acc + ck.eval(t) * (x - lookup.x_at(dk.arg(t)?)?);
            }
            Ok(acc)
        }
        EquationSpec::Sunflower { a, b, delay } => {
            let xd = lookup.x_at(delay.arg(t)?)?;
            Ok(-a.eval(t) * v - b.eval(t) * xd.sin())
        }
        EquationSpec::KaldorKalecki {
            alpha,
            beta,
            p,
            s_coef,
            delay,
        } => {
            let xd = lookup.x_at(delay.arg(t)?)?;
            let damping = alpha.eval(t) - beta.eval(t) * p.derivative(x);
            Ok(-damping * v - s_coef.eval(t) * x + p.eval(x) - p.eval(xd))
        }
        EquationSpec::NonlinearDemo {
            damping_base,
            damping_amp,
            restoring_base,
            restoring_amp,
            lag_amplitude,
        } => {
            let s = t.sin();
            let r = t - *lag_amplitude * s * s;
            let xd = lookup.x_at(r)?;
            let damping = *damping_base + *damping_amp * x.sin();
            let restoring = *restoring_base + *restoring_amp * x.cos();
            Ok(-damping * v - restoring * xd)
        }
        EquationSpec::KernelIntegral { .. } => Err(Error::Simulation(
            "kernel-integral specs are integrated by integrate_kernel".into(),
        )),
    }
}

/// Growing node store used while stepping.
pub(crate) struct Stepper<'a, T: Real> {
    pub hist: &'a HistoryFn<T>,
    pub t0: T,
    pub times: Vec<T>,
    pub x: Vec<T>,
    pub v: Vec<T>,
    pub acc: Vec<T>,
}

impl<'a, T: Real> Stepper<'a, T> {
    pub fn new(hist: &'a HistoryFn<T>, t0: T) -> Self {
        Stepper {
            hist,
            t0,
            times: Vec::new(),
            x: Vec::new(),
            v: Vec::new(),
            acc: Vec::new(),
        }
    }

    fn segment(&self, r: T) -> usize {
        // r is within [t0, last]; find i with times[i] <= r <= times[i+1]
        let n = self.times.len();
        if r <= self.times[0] {
            return 0;
        }
        if r >= self.times[n - 1] {
            return n - 2;
        }
        self.times.partition_point(|&ti| ti <= r) - 1
    }

    fn hermite_x(&self, r: T) -> T {
        let i = self.segment(r);
        dense(
            r,
            self.times[i],
            self.times[i + 1],
            self.x[i],
            self.v[i],
            self.x[i + 1],
            self.v[i + 1],
        )
    }

    fn hermite_v(&self, r: T) -> T {
        let i = self.segment(r);
        dense(
            r,
            self.times[i],
            self.times[i + 1],
            self.v[i],
            self.acc[i],
            self.v[i + 1],
            self.acc[i + 1],
        )
    }
}

fn dense<T: Real>(r: T, ta: T, tb: T, y0: T, d0: T, y1: T, d1: T) -> T {
    let h = tb - ta;
    let theta = (r - ta) / h;
    let one = T::one();
    let two = lit::<T>(2.0);
    let three = lit::<T>(3.0);
    let t2 = theta * theta;
    let t3 = t2 * theta;
    (two * t3 - three * t2 + one) * y0
        + (t3 - two * t2 + theta) * h * d0
        + (-two * t3 + three * t2) * y1
        + (t3 - t2) * h * d1
}

impl<'a, T: Real> StateLookup<T> for Stepper<'a, T> {
    fn x_at(&self, r: T) -> Result<T> {
        if r <= self.t0 {
            return Ok(self.hist.eval_x(r));
        }
        let last = *self.times.last().expect("at least the initial node");
        if r <= last && self.times.len() >= 2 {
            return Ok(self.hermite_x(r));
        }
        // vanishing delay: predict forward from the last completed node
        let n = self.times.len() - 1;
        Ok(self.x[n] + (r - last) * self.v[n])
    }

    fn xdot_at(&self, r: T) -> Result<T> {
        if r <= self.t0 {
            return Ok(self.hist.eval_xdot(r));
        }
        let last = *self.times.last().expect("at least the initial node");
        if r <= last && self.times.len() >= 2 {
            return Ok(self.hermite_v(r));
        }
        let n = self.times.len() - 1;
        Ok(self.v[n] + (r - last) * self.acc[n])
    }

    fn horizon(&self) -> T {
        *self.times.last().expect("at least the initial node")
    }
}

/// Number of steps so the final (possibly shortened) step lands on `t_end`.
pub(crate) fn step_count<T: Real>(t0: T, t_end: T, step: T) -> usize {
    let ratio = ((t_end - t0) / step).to_f64().unwrap_or(f64::NAN);
    let rounded = ratio.round();
    let n = if (ratio - rounded).abs() < 1e-9 * rounded.max(1.0) {
        rounded
    } else {
        ratio.ceil()
    };
    (n as usize).max(1)
}

fn validate_span<T: Real>(t0: T, t_end: T, step: T) -> Result<()> {
    if !(step > T::zero()) || !step.is_finite() {
        return Err(Error::Simulation("step must be positive and finite".into()));
    }
    if !(t_end > t0) {
        return Err(Error::Simulation("t_end must exceed t0".into()));
    }
    Ok(())
}

/// Integrates a second-order family over `[t0, t_end]` with fixed step
/// `step` (final partial step shortened), starting from
/// `x(t0) = phi(t0)`, `xdot(t0) = psi(t0)`.
///
/// A non-finite state truncates the trajectory at the last finite node and
/// sets the divergence flag.
pub fn integrate<T: Real>(
    spec: &EquationSpec<T>,
    hist: &HistoryFn<T>,
    t0: T,
    t_end: T,
    step: T,
) -> Result<Trajectory<T>> {
    validate_span(t0, t_end, step)?;
    hist.validate()?;
    if spec.is_kernel_family() {
        return Err(Error::Simulation(
            "kernel-integral specs are integrated by integrate_kernel".into(),
        ));
    }

    let n_steps = step_count(t0, t_end, step);
    let mut st = Stepper::new(hist, t0);
    st.times.reserve(n_steps + 1);
    st.x.reserve(n_steps + 1);
    st.v.reserve(n_steps + 1);
    st.acc.reserve(n_steps + 1);

    let x0 = hist.eval_x(t0);
    let v0 = hist.eval_xdot(t0);
    st.times.push(t0);
    st.x.push(x0);
    st.v.push(v0);
    let a0 = acceleration(spec, t0, x0, v0, &st)?;
    st.acc.push(a0);

    let two = lit::<T>(2.0);
    let six = lit::<T>(6.0);
    let mut diverged = false;

    for i in 0..n_steps {
        let t = *st.times.last().expect("node");
        let t_next = if i + 1 == n_steps {
            t_end
        } else {
            t0 + step * T::from(i + 1).expect("step index")
        };
        let h = t_next - t;
        if !(h > T::zero()) {
            break;
        }
        let n = st.times.len() - 1;
        let (x, v) = (st.x[n], st.v[n]);
        let a_k1 = st.acc[n];

        let half = h / two;
        let (x2, v2) = (x + half * v, v + half * a_k1);
        let a_k2 = acceleration(spec, t + half, x2, v2, &st)?;
        let (x3, v3) = (x + half * v2, v + half * a_k2);
        let a_k3 = acceleration(spec, t + half, x3, v3, &st)?;
        let (x4, v4) = (x + h * v3, v + h * a_k3);
        let a_k4 = acceleration(spec, t_next, x4, v4, &st)?;

        let x_next = x + h / six * (v + two * (v2 + v3) + v4);
        let v_next = v + h / six * (a_k1 + two * (a_k2 + a_k3) + a_k4);

        if !x_next.is_finite() || !v_next.is_finite() {
            diverged = true;
            break;
        }
        // endpoint slope; in-step delayed references still use the predictor
        let a_next = acceleration(spec, t_next, x_next, v_next, &st)?;
        if !a_next.is_finite() {
            diverged = true;
            break;
        }
        st.times.push(t_next);
        st.x.push(x_next);
        st.v.push(v_next);
        st.acc.push(a_next);
    }

    Ok(Trajectory {
        t0,
        t_end: *st.times.last().expect("node"),
        step,
        times: st.times,
        x: st.x,
        xdot: st.v,
        xddot: Some(st.acc),
        diverged,
    })
}

/// Lookup over a finished trajectory (no history): valid for arguments
/// inside the simulated span.
pub(crate) struct TrajectoryLookup<'a, T: Real> {
    pub tr: &'a Trajectory<T>,
}

impl<'a, T: Real> StateLookup<T> for TrajectoryLookup<'a, T> {
    fn x_at(&self, r: T) -> Result<T> {
        Ok(self.tr.eval_x(r))
    }

    fn xdot_at(&self, r: T) -> Result<T> {
        Ok(self.tr.eval_xdot(r))
    }

    fn horizon(&self) -> T {
        self.tr.last_time()
    }
}

/// Checks `max |xdot|` over the trajectory nodes against `bound`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivativeBoundReport<T> {
    pub ok: bool,
    /// `max |xdot| - bound`; negative values are margin.
    pub worst_excess: T,
}

pub fn verify_derivative_bound<T: Real>(tr: &Trajectory<T>, bound: T) -> DerivativeBoundReport<T> {
    let worst = tr.max_abs_xdot() - bound;
    DerivativeBoundReport {
        ok: worst <= lit(1e-6),
        worst_excess: worst,
    }
}

/// Maximum absolute equation residual at `sample_count` quasi-random
/// interior times. The second derivative is approximated by a central
/// difference of the dense `xdot` output (step-sized stencil), so the
/// result is an integration-quality gate of order `step^2`.
///
/// Samples are restricted to `t >= t0 + max lag` so every delayed argument
/// stays inside the simulated span.
pub fn residual_check<T: Real>(
    tr: &Trajectory<T>,
    spec: &EquationSpec<T>,
    sample_count: usize,
) -> Result<T> {
    let delta = tr.step;
    let lag = spec.max_delay_bound();
    let lo = tr.t0 + lag + delta + delta;
    let hi = tr.last_time() - delta - delta;
    if !(hi > lo) {
        return Err(Error::Simulation(
            "trajectory too short for residual sampling".into(),
        ));
    }
    let lookup = TrajectoryLookup { tr };
    let span = hi - lo;
    let golden = lit::<T>(0.618_033_988_749_894_9);
    let mut worst = T::zero();
    for i in 0..sample_count.max(1) {
        let frac = (golden * T::from(i + 1).expect("index")).fract();
        let t = lo + span * frac;
        let residual = match spec {
            EquationSpec::KernelIntegral { b, kernel } => {
                let udot = (tr.eval_x(t + delta) - tr.eval_x(t - delta)) / (delta + delta);
                let quad_h = super::kernel::quad_spacing(delta);
                let integral = super::kernel::kernel_term(kernel, t, quad_h, &lookup, None)?;
                udot + *b * integral
            }
            _ => {
                let xdd = (tr.eval_xdot(t + delta) - tr.eval_xdot(t - delta)) / (delta + delta);
                let x = tr.eval_x(t);
                let v = tr.eval_xdot(t);
                xdd - acceleration(spec, t, x, v, &lookup)?
            }
        };
        if residual.abs() > worst {
            worst = residual.abs();
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{CoefFn, DelayFn};

    fn harmonic() -> EquationSpec<f64> {
        EquationSpec::LinearVarDelay7 {
            a: CoefFn::constant(0.0),
            b: CoefFn::constant(1.0),
            c: vec![],
            delays: vec![],
        }
    }

    #[test]
    fn harmonic_oscillator_full_period() {
        let hist = HistoryFn::constant(1.0, 0.0);
        let tr = integrate(&harmonic(), &hist, 0.0, 2.0 * std::f64::consts::PI, 1e-3).unwrap();
        assert!(!tr.diverged);
        assert!((tr.x.last().unwrap() - 1.0).abs() < 1e-9);
        assert!(tr.xdot.last().unwrap().abs() < 1e-9);
    }

    #[test]
    fn node_grid_hits_t_end_exactly() {
        let hist = HistoryFn::constant(1.0, 0.0);
        let tr = integrate(&harmonic(), &hist, 0.0, 1.0, 0.3).unwrap();
        assert_eq!(tr.times.len(), 5); // ceil(1/0.3) = 4 steps
        assert_eq!(*tr.times.last().unwrap(), 1.0);
    }

    #[test]
    fn divergence_is_flagged_and_truncated() {
        // xddot = +x with huge feedback blows up fast
        let spec = EquationSpec::LinearVarDelay7 {
            a: CoefFn::constant(0.0),
            b: CoefFn::constant(-1e300),
            c: vec![],
            delays: vec![],
        };
        let hist = HistoryFn::constant(1.0, 0.0);
        let tr = integrate(&spec, &hist, 0.0, 10.0, 0.1).unwrap();
        assert!(tr.diverged);
        assert!(tr.x.iter().all(|v| v.is_finite()));
    }

    #[test]
    fn custom_delay_reaching_forward_errors() {
        let spec = EquationSpec::LinearVarDelay7 {
            a: CoefFn::constant(1.0),
            b: CoefFn::constant(1.0),
            c: vec![CoefFn::constant(0.1)],
            delays: vec![DelayFn::Custom {
                times: vec![0.0, 1.0],
                lags: vec![0.5, -0.5],
            }],
        };
        let hist = HistoryFn::constant(1.0, 0.0);
        let err = integrate(&spec, &hist, 0.0, 2.0, 0.1).unwrap_err();
        assert!(matches!(err, Error::DelayViolation { .. }));
    }

    #[test]
    fn vanishing_delay_runs_clean() {
        let spec = EquationSpec::LinearVarDelay7 {
            a: CoefFn::constant(3.0),
            b: CoefFn::constant(1.1),
            c: vec![CoefFn::constant(-0.8)],
            delays: vec![DelayFn::SinLag { amplitude: 2.0 }],
        };
        let hist = HistoryFn::constant(1.0, 0.0);
        let tr = integrate(&spec, &hist, 0.0, 20.0, 1e-3).unwrap();
        assert!(!tr.diverged);
        assert!(tr.x.last().unwrap().abs() < 1.0);
    }

    #[test]
    fn determinism_bit_identical() {
        let spec = EquationSpec::LinearVarDelay7 {
            a: CoefFn::constant(2.0),
            b: CoefFn::constant(1.1),
            c: vec![CoefFn::constant(-0.8)],
            delays: vec![DelayFn::SinLag { amplitude: 2.0 }],
        };
        let hist = HistoryFn::constant(1.0, 0.0);
        let a = integrate(&spec, &hist, 0.0, 15.0, 1e-2).unwrap();
        let b = integrate(&spec, &hist, 0.0, 15.0, 1e-2).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn linear_families_scale_linearly() {
        let spec = EquationSpec::LinearVarDelay7 {
            a: CoefFn::constant(3.0),
            b: CoefFn::constant(1.1),
            c: vec![CoefFn::constant(-0.8)],
            delays: vec![DelayFn::SinLag { amplitude: 2.0 }],
        };
        let alpha = 3.7;
        let one = integrate(&spec, &HistoryFn::constant(1.0, 0.0), 0.0, 20.0, 1e-2).unwrap();
        let scaled = integrate(&spec, &HistoryFn::constant(alpha, 0.0), 0.0, 20.0, 1e-2).unwrap();
        for i in 0..one.len() {
            let diff = (scaled.x[i] - alpha * one.x[i]).abs();
            assert!(diff <= 1e-9 * (1.0 + scaled.x[i].abs()));
        }
    }

    #[test]
    fn residual_gates_integration_quality() {
        let hist = HistoryFn::constant(1.0, 0.0);
        let tr = integrate(&harmonic(), &hist, 0.0, 10.0, 1e-3).unwrap();
        let r = residual_check(&tr, &harmonic(), 64).unwrap();
        assert!(r < 1e-5, "residual {r}");

        // mismatched spec must stick out
        let wrong = EquationSpec::LinearVarDelay7 {
            a: CoefFn::constant(0.0),
            b: CoefFn::constant(5.0),
            c: vec![],
            delays: vec![],
        };
        let r = residual_check(&tr, &wrong, 64).unwrap();
        assert!(r > 0.5, "mismatch residual {r}");

        // identically zero solution satisfies the equation to rounding
        let zero = integrate(&harmonic(), &HistoryFn::constant(0.0, 0.0), 0.0, 10.0, 1e-3).unwrap();
        let r = residual_check(&zero, &harmonic(), 64).unwrap();
        assert!(r < 1e-12);
    }

    #[test]
    fn derivative_bound_report() {
        let hist = HistoryFn::constant(0.0, 1.0);
        let tr = integrate(&harmonic(), &hist, 0.0, 5.0, 1e-3).unwrap();
        let rep = verify_derivative_bound(&tr, 1.0);
        assert!(rep.ok);
        let rep = verify_derivative_bound(&tr, 0.0);
        assert!(!rep.ok);
        assert!(rep.worst_excess > 0.9);
    }
}
