//! Integration of the integro-differential family
//! `udot + b * integral of K(t, s) sin u(s) ds = 0`
//! by the same fixed-step stepping as the second-order families.
//!
//! The memory integral is evaluated by composite trapezoid quadrature at a
//! spacing tied to the step (`step / 8`). Box kernels have a support that is
//! constant across each time window, so their integral is computed once per
//! window and cached as soon as the support lies in finalized data.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::model::{EquationSpec, KernelSpec};
use crate::scalar::{lit, Real};

use super::history::HistoryFn;
use super::integrate::{step_count, StateLookup, Stepper};
use super::trajectory::Trajectory;

const QUAD_REFINEMENT: f64 = 8.0;

pub(crate) fn quad_spacing<T: Real>(step: T) -> T {
    step / lit(QUAD_REFINEMENT)
}

fn trapezoid<T: Real>(lo: T, hi: T, h: T, f: impl Fn(T) -> Result<T>) -> Result<T> {
    let width = hi - lo;
    if !(width > T::zero()) {
        return Ok(T::zero());
    }
    let n = (width / h).to_f64().unwrap_or(8.0).ceil().max(8.0) as usize;
    let dx = width / T::from(n).expect("interval count");
    let two = lit::<T>(2.0);
    let mut acc = (f(lo)? + f(hi)?) / two;
    for i in 1..n {
        acc = acc + f(lo + dx * T::from(i).expect("node index"))?;
    }
    Ok(acc * dx)
}

/// `integral of K(t, s) sin u(s) ds` over the kernel support at time `t`.
pub(crate) fn kernel_term<T: Real, L: StateLookup<T>>(
    kernel: &KernelSpec<T>,
    t: T,
    quad_h: T,
    lookup: &L,
    cache: Option<&mut HashMap<i64, T>>,
) -> Result<T> {
    match kernel {
        KernelSpec::PiecewiseBox { height, period, .. } => {
            let widx = (t / *period)
                .round()
                .to_f64()
                .map(|w| w as i64)
                .ok_or_else(|| Error::Simulation("window index overflow".into()))?;
            if let Some(c) = cache.as_ref() {
                if let Some(&v) = c.get(&widx) {
                    return Ok(v);
                }
            }
            let (s_lo, s_hi) = kernel.support(t);
            let val = *height * trapezoid(s_lo, s_hi, quad_h, |s| Ok(lookup.x_at(s)?.sin()))?;
            if let Some(c) = cache {
                if s_hi <= lookup.horizon() {
                    c.insert(widx, val);
                }
            }
            Ok(val)
        }
        KernelSpec::ExponentialBound { .. } => {
            let (s_lo, s_hi) = kernel.support(t);
            trapezoid(s_lo, s_hi, quad_h, |s| {
                Ok(kernel.eval(t, s) * lookup.x_at(s)?.sin())
            })
        }
    }
}

/// Integrates a kernel-integral spec over `[t0, t_end]`; the trajectory
/// stores the first-order state in `x` and its derivative in `xdot`.
pub fn integrate_kernel<T: Real>(
    spec: &EquationSpec<T>,
    hist: &HistoryFn<T>,
    t0: T,
    t_end: T,
    step: T,
) -> Result<Trajectory<T>> {
    let (b, kernel) = match spec {
        EquationSpec::KernelIntegral { b, kernel } => (*b, kernel),
        _ => {
            return Err(Error::Simulation(
                "integrate_kernel requires a kernel-integral spec".into(),
            ))
        }
    };
    if !(step > T::zero()) || !step.is_finite() {
        return Err(Error::Simulation("step must be positive and finite".into()));
    }
    if !(t_end > t0) {
        return Err(Error::Simulation("t_end must exceed t0".into()));
    }
    hist.validate()?;
    if !(kernel.tau() > T::zero()) {
        return Err(Error::Simulation("kernel delay tau must be positive".into()));
    }

    let quad_h = quad_spacing(step);
    let mut cache: HashMap<i64, T> = HashMap::new();
    let n_steps = step_count(t0, t_end, step);

    let mut st = Stepper::new(hist, t0);
    st.times.reserve(n_steps + 1);
    let u0 = hist.eval_x(t0);
    st.times.push(t0);
    st.x.push(u0);
    let g0 = -b * kernel_term(kernel, t0, quad_h, &st, Some(&mut cache))?;
    st.v.push(g0);
    st.acc.push(T::zero());

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
        let u = *st.x.last().expect("node");
        // the memory integral only reads u strictly in the past, so the
        // right-hand side is a pure function of time within the step
        let k1 = *st.v.last().expect("node");
        let k2 = -b * kernel_term(kernel, t + h / two, quad_h, &st, Some(&mut cache))?;
        let k3 = k2;
        let k4 = -b * kernel_term(kernel, t_next, quad_h, &st, Some(&mut cache))?;
        let u_next = u + h / six * (k1 + two * (k2 + k3) + k4);
        if !u_next.is_finite() {
            diverged = true;
            break;
        }
        st.times.push(t_next);
        st.x.push(u_next);
        let g_next = -b * kernel_term(kernel, t_next, quad_h, &st, Some(&mut cache))?;
        if !g_next.is_finite() {
            st.times.pop();
            st.x.pop();
            diverged = true;
            break;
        }
        st.v.push(g_next);
        st.acc.push(T::zero());
    }

    Ok(Trajectory {
        t0,
        t_end: *st.times.last().expect("node"),
        step,
        times: st.times,
        x: st.x,
        xdot: st.v,
        xddot: None,
        diverged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn zero_kernel_keeps_state_constant() {
        let spec = EquationSpec::KernelIntegral {
            b: 2.0,
            kernel: KernelSpec::PiecewiseBox {
                height: 0.0,
                period: 2.0 * PI,
                s_lo_offset: -3.0 * PI,
                s_hi_offset: -2.0 * PI,
                tau: PI,
            },
        };
        let hist = HistoryFn::constant(0.7, 0.0);
        let tr = integrate_kernel(&spec, &hist, 0.0, 10.0, 0.01).unwrap();
        assert!(tr.x.iter().all(|&u| (u - 0.7).abs() < 1e-15));
    }

    #[test]
    fn box_kernel_sustains_linear_growth() {
        // quarter-height box with b = 2 turns u(t) = t into a fixed point
        let spec = EquationSpec::KernelIntegral {
            b: 2.0,
            kernel: KernelSpec::quarter_box(),
        };
        let hist = HistoryFn::Tabulated {
            times: vec![-PI, PI],
            values: vec![-PI, PI],
        };
        let tr = integrate_kernel(&spec, &hist, PI, 7.0 * PI, 1e-3).unwrap();
        let mut worst: f64 = 0.0;
        for i in 0..tr.len() {
            worst = worst.max((tr.x[i] - tr.times[i]).abs());
        }
        assert!(worst <= 1e-6, "max |u - t| = {worst}");
    }

    #[test]
    fn exponential_kernel_drains_small_offsets() {
        let spec = EquationSpec::KernelIntegral {
            b: 0.05,
            kernel: KernelSpec::ExponentialBound { a: 1.0, tau: 1.0 },
        };
        let hist = HistoryFn::constant(0.5, 0.0);
        let tr = integrate_kernel(&spec, &hist, 0.0, 10.0, 0.02).unwrap();
        assert!(!tr.diverged);
        let last = *tr.x.last().unwrap();
        assert!(last > 0.0 && last < 0.5);
        for w in tr.x.windows(2) {
            assert!(w[1] <= w[0] + 1e-12);
        }
    }
}
