//! Dense numerical solution with cubic-Hermite continuous extension.

use std::io::{self, Write};

use serde::{Deserialize, Serialize};

use crate::scalar::{lit, Real};

/// Node data plus per-step Hermite coefficients (implicitly: node values and
/// node derivatives). Dense evaluation at node times reproduces node values
/// exactly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory<T> {
    pub t0: T,
    pub t_end: T,
    pub step: T,
    pub times: Vec<T>,
    pub x: Vec<T>,
    pub xdot: Vec<T>,
    /// Node accelerations for second-order problems; `None` for first-order
    /// (kernel) trajectories, whose `xdot` already stores the full state
    /// derivative.
    pub xddot: Option<Vec<T>>,
    /// Set when the state left the finite range; the trajectory is truncated
    /// at the last finite node.
    pub diverged: bool,
}

fn hermite<T: Real>(theta: T, h: T, y0: T, d0: T, y1: T, d1: T) -> T {
    let one = T::one();
    let two = lit::<T>(2.0);
    let three = lit::<T>(3.0);
    let t2 = theta * theta;
    let t3 = t2 * theta;
    let h00 = two * t3 - three * t2 + one;
    let h10 = t3 - two * t2 + theta;
    let h01 = -two * t3 + three * t2;
    let h11 = t3 - t2;
    h00 * y0 + h10 * h * d0 + h01 * y1 + h11 * h * d1
}

impl<T: Real> Trajectory<T> {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn last_time(&self) -> T {
        *self.times.last().expect("trajectory has at least one node")
    }

    /// Index of the segment containing `t` (clamped to the span).
    fn segment(&self, t: T) -> usize {
        let n = self.times.len();
        if n < 2 || t <= self.times[0] {
            return 0;
        }
        if t >= self.times[n - 1] {
            return n - 2;
        }
        self.times.partition_point(|&ti| ti <= t) - 1
    }

    /// Dense evaluation of `x`, clamped to `[t0, last node]`.
    pub fn eval_x(&self, t: T) -> T {
        if self.times.len() == 1 {
            return self.x[0];
        }
        let i = self.segment(t);
        let (ta, tb) = (self.times[i], self.times[i + 1]);
        let h = tb - ta;
        let theta = clamp01((t - ta) / h);
        hermite(theta, h, self.x[i], self.xdot[i], self.x[i + 1], self.xdot[i + 1])
    }

    /// Dense evaluation of `xdot`. Uses node accelerations as Hermite slopes
    /// when available, otherwise linear interpolation.
    pub fn eval_xdot(&self, t: T) -> T {
        if self.times.len() == 1 {
            return self.xdot[0];
        }
        let i = self.segment(t);
        let (ta, tb) = (self.times[i], self.times[i + 1]);
        let h = tb - ta;
        let theta = clamp01((t - ta) / h);
        match &self.xddot {
            Some(acc) => hermite(theta, h, self.xdot[i], acc[i], self.xdot[i + 1], acc[i + 1]),
            None => self.xdot[i] + theta * (self.xdot[i + 1] - self.xdot[i]),
        }
    }

    pub fn max_abs_xdot(&self) -> T {
        self.xdot
            .iter()
            .fold(T::zero(), |acc, &v| if v.abs() > acc { v.abs() } else { acc })
    }

    /// CSV export: header `t,x,xdot`, one row per node, 17 significant digits.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "t,x,xdot")?;
        for i in 0..self.times.len() {
            writeln!(
                w,
                "{:.16e},{:.16e},{:.16e}",
                self.times[i].to_f64().unwrap_or(f64::NAN),
                self.x[i].to_f64().unwrap_or(f64::NAN),
                self.xdot[i].to_f64().unwrap_or(f64::NAN)
            )?;
        }
        Ok(())
    }
}

fn clamp01<T: Real>(theta: T) -> T {
    if theta < T::zero() {
        T::zero()
    } else if theta > T::one() {
        T::one()
    } else {
        theta
    }
}

/// Trajectory classification over trailing amplitude windows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Classification<T> {
    pub label: ClassLabel,
    pub window_ratios: Vec<T>,
    pub peak_amplitudes: Vec<T>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ClassLabel {
    Decaying,
    Growing,
    BoundedNonDecaying,
    Inconclusive,
}

impl ClassLabel {
    pub fn text(&self) -> &'static str {
        match self {
            ClassLabel::Decaying => "decaying",
            ClassLabel::Growing => "growing",
            ClassLabel::BoundedNonDecaying => "bounded non-decaying",
            ClassLabel::Inconclusive => "inconclusive",
        }
    }
}
