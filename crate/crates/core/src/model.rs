//! Shared domain types: coefficient envelopes, delay descriptions, verdicts,
//! and the simulable equation specification consumed by the other modules.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mmatrix::RealMatrix;
use crate::scalar::{lit, Real};

/// Envelope bounds for the time-varying coefficients of a damped second-order
/// equation with delayed perturbation terms.
///
/// `a_lo <= a(t) <= a_hi` bounds the damping coefficient, `b_lo <= b(t) <= b_hi`
/// the restoring coefficient (optional when the equation has no undelayed
/// restoring term), `|c_k(t)| <= c_abs[k]` the perturbation magnitudes and
/// `t - h_k(t) <= tau[k]` the delays. `b_term_lo/b_term_hi` carry per-term
/// bounds `b_k <= b_k(t) <= B_k` for equations whose restoring terms are all
/// delayed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefficientBounds<T> {
    pub a_lo: T,
    pub a_hi: T,
    #[serde(default = "none_t")]
    pub b_lo: Option<T>,
    #[serde(default = "none_t")]
    pub b_hi: Option<T>,
    #[serde(rename = "C")]
    pub c_abs: Vec<T>,
    pub tau: Vec<T>,
    #[serde(default = "none_vec")]
    pub b_term_lo: Option<Vec<T>>,
    #[serde(default = "none_vec")]
    pub b_term_hi: Option<Vec<T>>,
}

fn none_t<T>() -> Option<T> {
    None
}

fn none_vec<T>() -> Option<Vec<T>> {
    None
}

impl<T: Real> CoefficientBounds<T> {
    /// Bounds for constant coefficients `a`, `b` and perturbations `c_k` with
    /// delays `tau_k`.
    pub fn constant(a: T, b: T, c_abs: Vec<T>, tau: Vec<T>) -> Self {
        Self {
            a_lo: a,
            a_hi: a,
            b_lo: Some(b),
            b_hi: Some(b),
            c_abs,
            tau,
            b_term_lo: None,
            b_term_hi: None,
        }
    }
}

/// Reports every invariant violated by `b`; an empty list means the bounds
/// are admissible. Pure: reports, never aborts.
pub fn validate_bounds<T: Real>(b: &CoefficientBounds<T>) -> Vec<String> {
    let mut viols = Vec::new();
    let finite = |x: T| x.is_finite();

    if !finite(b.a_lo) || !finite(b.a_hi) {
        viols.push("a bounds must be finite".to_string());
    }
    if !(b.a_lo > T::zero()) {
        viols.push("a_lo must be positive".to_string());
    }
    if b.a_lo > b.a_hi {
        viols.push("a_lo must not exceed a_hi".to_string());
    }
    match (b.b_lo, b.b_hi) {
        (Some(lo), Some(hi)) => {
            if !finite(lo) || !finite(hi) {
                viols.push("b bounds must be finite".to_string());
            }
            if !(lo > T::zero()) {
                viols.push("b_lo must be positive".to_string());
            }
            if lo > hi {
                viols.push("b_lo must not exceed b_hi".to_string());
            }
        }
        (None, None) => {}
        _ => viols.push("b_lo and b_hi must be given together".to_string()),
    }
    if b.c_abs.iter().any(|&c| !finite(c) || c < T::zero()) {
        viols.push("C entries must be nonnegative".to_string());
    }
    if b.tau.iter().any(|&t| !finite(t) || t < T::zero()) {
        viols.push("tau entries must be nonnegative".to_string());
    }
    if !b.c_abs.is_empty() && !b.tau.is_empty() && b.c_abs.len() != b.tau.len() {
        viols.push("C and tau length mismatch".to_string());
    }
    match (&b.b_term_lo, &b.b_term_hi) {
        (Some(lo), Some(hi)) => {
            if lo.len() != hi.len() {
                viols.push("b_term_lo and b_term_hi length mismatch".to_string());
            } else {
                for (l, h) in lo.iter().zip(hi) {
                    if !(*l > T::zero()) || l > h || !finite(*l) || !finite(*h) {
                        viols.push("b_term entries must satisfy 0 < lo <= hi".to_string());
                        break;
                    }
                }
            }
        }
        (None, None) => {}
        _ => viols.push("b_term_lo and b_term_hi must be given together".to_string()),
    }
    viols
}

/// Essential-sup norm data for the quoted norm-based stability tests.
/// Only the fields a given test consumes need to be populated.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct NormData<T> {
    #[serde(default = "none_t")]
    pub norm_a: Option<T>,
    #[serde(default = "none_t")]
    pub norm_b: Option<T>,
    #[serde(default = "none_t")]
    pub norm_a_over_b: Option<T>,
    #[serde(default = "none_t")]
    pub norm_b_over_a: Option<T>,
    #[serde(default = "none_t")]
    pub norm_a1_over_a: Option<T>,
    #[serde(default = "none_t")]
    pub norm_a1_over_b: Option<T>,
    #[serde(default = "none_t")]
    pub norm_b1_over_a: Option<T>,
    #[serde(default = "none_t")]
    pub norm_b1_over_b: Option<T>,
    #[serde(default = "none_t")]
    pub delta: Option<T>,
    #[serde(default = "none_t")]
    pub tau: Option<T>,
}

/// Identifier of the test a verdict came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TestId {
    Th1,
    Th2,
    Th3,
    Th3Const,
    Th4,
    Th5,
    B2_51,
    B2_53,
    AutoUnstable,
    AutoIff,
    Nl32,
    Nl33,
    Nl34,
    Nl35,
    Kk,
    SunflowerEq,
    SunflowerRoot,
}

impl TestId {
    pub const ALL: [TestId; 17] = [
        TestId::Th1,
        TestId::Th2,
        TestId::Th3,
        TestId::Th3Const,
        TestId::Th4,
        TestId::Th5,
        TestId::B2_51,
        TestId::B2_53,
        TestId::AutoUnstable,
        TestId::AutoIff,
        TestId::Nl32,
        TestId::Nl33,
        TestId::Nl34,
        TestId::Nl35,
        TestId::Kk,
        TestId::SunflowerEq,
        TestId::SunflowerRoot,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            TestId::Th1 => "th1",
            TestId::Th2 => "th2",
            TestId::Th3 => "th3",
            TestId::Th3Const => "th3_const",
            TestId::Th4 => "th4",
            TestId::Th5 => "th5",
            TestId::B2_51 => "b2_51",
            TestId::B2_53 => "b2_53",
            TestId::AutoUnstable => "auto_unstable",
            TestId::AutoIff => "auto_iff",
            TestId::Nl32 => "nl32",
            TestId::Nl33 => "nl33",
            TestId::Nl34 => "nl34",
            TestId::Nl35 => "nl35",
            TestId::Kk => "kk",
            TestId::SunflowerEq => "sunflower_eq",
            TestId::SunflowerRoot => "sunflower_root",
        }
    }

    pub fn parse(s: &str) -> Option<TestId> {
        TestId::ALL.iter().copied().find(|t| t.name() == s)
    }
}

impl std::fmt::Display for TestId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Claim class of a stability verdict.
///
/// `Inconclusive` always means "no implemented sufficient condition fired",
/// never "unstable"; instability claims come only from the tests that assert
/// them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StabilityClaim {
    ExponentiallyStable,
    GlobalAttractorZero,
    Unstable,
    NotAsymptoticallyStable,
    Inconclusive,
}

impl StabilityClaim {
    pub fn text(&self) -> &'static str {
        match self {
            StabilityClaim::ExponentiallyStable => "exponentially stable",
            StabilityClaim::GlobalAttractorZero => "global attractor: zero",
            StabilityClaim::Unstable => "unstable",
            StabilityClaim::NotAsymptoticallyStable => "not asymptotically stable",
            StabilityClaim::Inconclusive => "inconclusive",
        }
    }
}

/// Supporting evidence attached to a verdict.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate<T> {
    /// Companion matrix from the substitution `xdot = -(a/2) x + y`,
    /// with its leading principal minors and M-matrix status.
    Companion {
        matrix: RealMatrix<T>,
        minors: Vec<T>,
        is_m_matrix: bool,
    },
    /// Positive real root of a characteristic quasipolynomial.
    CharacteristicRoot { lambda0: T, residual: T },
    /// Frequency window index used by the autonomous if-and-only-if test.
    FrequencyWindow { k: u32 },
}

/// Per-condition evaluation detail: whether the condition holds and its
/// margin (minimum slack across the condition's inequalities; positive
/// means satisfied with room).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConditionReport<T> {
    pub index: u8,
    pub holds: bool,
    pub margin: T,
}

/// Structured outcome of one stability test.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StabilityVerdict<T> {
    pub test_id: TestId,
    pub claim: StabilityClaim,
    /// Which sufficient condition fired (1 or 2), when applicable.
    pub condition_fired: Option<u8>,
    pub certificate: Option<Certificate<T>>,
    /// Distance to the binding inequality of the decisive condition; for
    /// inconclusive verdicts, the best margin over all conditions (negative).
    pub margin: Option<T>,
    #[serde(default)]
    pub conditions: Vec<ConditionReport<T>>,
    /// Premises the test relies on but cannot check from its inputs.
    #[serde(default)]
    pub unchecked_premises: Vec<String>,
    #[serde(default)]
    pub notes: Vec<String>,
}

impl<T: Real> StabilityVerdict<T> {
    pub fn new(test_id: TestId, claim: StabilityClaim) -> Self {
        Self {
            test_id,
            claim,
            condition_fired: None,
            certificate: None,
            margin: None,
            conditions: Vec::new(),
            unchecked_premises: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn is_stable_claim(&self) -> bool {
        matches!(
            self.claim,
            StabilityClaim::ExponentiallyStable | StabilityClaim::GlobalAttractorZero
        )
    }
}

/// Named scalar coefficient function of time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CoefFn<T> {
    Constant { value: T },
    /// `base + amp * sin(freq * t)`
    SinOsc { base: T, amp: T, freq: T },
    /// `base + amp * cos(freq * t)`
    CosOsc { base: T, amp: T, freq: T },
}

impl<T: Real> CoefFn<T> {
    pub fn constant(value: T) -> Self {
        CoefFn::Constant { value }
    }

    pub fn eval(&self, t: T) -> T {
        match *self {
            CoefFn::Constant { value } => value,
            CoefFn::SinOsc { base, amp, freq } => base + amp * (freq * t).sin(),
            CoefFn::CosOsc { base, amp, freq } => base + amp * (freq * t).cos(),
        }
    }
}

/// Delay function `h(t) <= t`, described through the lag `t - h(t)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DelayFn<T> {
    /// `h(t) = t - tau`
    ConstantLag { tau: T },
    /// `h(t) = t - amplitude * |sin t|`
    SinLag { amplitude: T },
    /// `h(t) = t - amplitude * sin^2 t`
    SinSquaredLag { amplitude: T },
    /// Tabulated lag values, linearly interpolated and clamped outside
    /// the table.
    Custom { times: Vec<T>, lags: Vec<T> },
}

impl<T: Real> DelayFn<T> {
    /// Evaluates `h(t)`, rejecting lags that would reach ahead of `t`.
    pub fn arg(&self, t: T) -> Result<T> {
        let lag = match self {
            DelayFn::ConstantLag { tau } => *tau,
            DelayFn::SinLag { amplitude } => *amplitude * t.sin().abs(),
            DelayFn::SinSquaredLag { amplitude } => {
                let s = t.sin();
                *amplitude * s * s
            }
            DelayFn::Custom { times, lags } => interp_clamped(times, lags, t),
        };
        if lag < T::zero() || !lag.is_finite() {
            return Err(Error::DelayViolation {
                t: t.to_f64().unwrap_or(f64::NAN),
                h: (t - lag).to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(t - lag)
    }

    /// Upper bound on the lag over all times.
    pub fn lag_bound(&self) -> T {
        match self {
            DelayFn::ConstantLag { tau } => *tau,
            DelayFn::SinLag { amplitude } | DelayFn::SinSquaredLag { amplitude } => *amplitude,
            DelayFn::Custom { lags, .. } => {
                lags.iter().fold(T::zero(), |acc, &l| if l > acc { l } else { acc })
            }
        }
    }
}

fn interp_clamped<T: Real>(xs: &[T], ys: &[T], x: T) -> T {
    if xs.is_empty() || xs.len() != ys.len() {
        return T::nan();
    }
    if x <= xs[0] {
        return ys[0];
    }
    if x >= xs[xs.len() - 1] {
        return ys[ys.len() - 1];
    }
    let hi = xs.partition_point(|&xi| xi <= x);
    let (x0, x1) = (xs[hi - 1], xs[hi]);
    let (y0, y1) = (ys[hi - 1], ys[hi]);
    let w = (x - x0) / (x1 - x0);
    y0 + w * (y1 - y0)
}

/// Memory kernel for the integro-differential sunflower generalization.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum KernelSpec<T> {
    /// `K(t, s) = (1/tau) exp(-(a/tau)(t - s - tau))` on `s <= t - tau`,
    /// zero elsewhere.
    ExponentialBound { a: T, tau: T },
    /// Constant-height box: for `t` in the window of width `period` around
    /// `m * period`, the kernel equals `height` on
    /// `s in [m*period + s_lo_offset, m*period + s_hi_offset]` and zero
    /// elsewhere.
    PiecewiseBox {
        height: T,
        period: T,
        s_lo_offset: T,
        s_hi_offset: T,
        tau: T,
    },
}

impl<T: Real> KernelSpec<T> {
    /// The constant-height kernel driving the unbounded-solution example:
    /// height 1/4, window period `2*pi`, support offsets `[-3*pi, -2*pi]`,
    /// `tau = pi`.
    pub fn quarter_box() -> Self {
        let pi = T::PI();
        KernelSpec::PiecewiseBox {
            height: lit(0.25),
            period: pi + pi,
            s_lo_offset: -(pi + pi + pi),
            s_hi_offset: -(pi + pi),
            tau: pi,
        }
    }

    pub fn eval(&self, t: T, s: T) -> T {
        match *self {
            KernelSpec::ExponentialBound { a, tau } => {
                if s <= t - tau {
                    (-(a / tau) * (t - s - tau)).exp() / tau
                } else {
                    T::zero()
                }
            }
            KernelSpec::PiecewiseBox {
                height,
                period,
                s_lo_offset,
                s_hi_offset,
                ..
            } => {
                let center = (t / period).round() * period;
                if s >= center + s_lo_offset && s <= center + s_hi_offset {
                    height
                } else {
                    T::zero()
                }
            }
        }
    }

    /// Support of `K(t, .)` as an interval; empty support yields `lo > hi`.
    /// Exponential tails are truncated where the envelope falls below 1e-12
    /// of its peak.
    pub fn support(&self, t: T) -> (T, T) {
        match *self {
            KernelSpec::ExponentialBound { a, tau } => {
                let cutoff = tau / a * lit(27.631021115928547); // ln(1e12)
                (t - tau - cutoff, t - tau)
            }
            KernelSpec::PiecewiseBox {
                period,
                s_lo_offset,
                s_hi_offset,
                ..
            } => {
                let center = (t / period).round() * period;
                (center + s_lo_offset, center + s_hi_offset)
            }
        }
    }

    /// Upper bound `h(t)` on the kernel's memory reach.
    pub fn delay_upper(&self, t: T) -> T {
        match *self {
            KernelSpec::ExponentialBound { tau, .. } => t - tau,
            KernelSpec::PiecewiseBox { .. } => self.support(t).1,
        }
    }

    /// Largest lag `t - s` over the truncated support.
    pub fn max_lag(&self) -> T {
        match *self {
            KernelSpec::ExponentialBound { a, tau } => tau + tau / a * lit(27.631021115928547),
            KernelSpec::PiecewiseBox {
                period, s_lo_offset, ..
            } => period / lit(2.0) - s_lo_offset,
        }
    }

    pub fn tau(&self) -> T {
        match *self {
            KernelSpec::ExponentialBound { tau, .. } => tau,
            KernelSpec::PiecewiseBox { tau, .. } => tau,
        }
    }
}

/// Centered sigmoid `p(x) = amplitude / (1 + exp(-slope x)) - amplitude / 2`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SigmoidP<T> {
    pub amplitude: T,
    pub slope: T,
}

impl<T: Real> SigmoidP<T> {
    pub fn eval(&self, x: T) -> T {
        // amplitude/2 * tanh(slope x / 2), numerically stable for large |x|
        self.amplitude / lit(2.0) * (self.slope * x / lit(2.0)).tanh()
    }

    pub fn derivative(&self, x: T) -> T {
        let c = (self.slope * x / lit(2.0)).cosh();
        self.amplitude * self.slope / (lit::<T>(4.0) * c * c)
    }
}

/// Simulable description of one equation family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum EquationSpec<T> {
    /// `xddot = p1 xdot(t) + p2 xdot(t - tau) + q1 x(t) + q2 x(t - tau)`
    LinearConstAutonomous { p1: T, p2: T, q1: T, q2: T, tau: T },
    /// `xddot + a(t) xdot + b(t) x + sum_k c_k(t) x(h_k(t)) = 0`
    LinearVarDelay7 {
        a: CoefFn<T>,
        b: CoefFn<T>,
        c: Vec<CoefFn<T>>,
        delays: Vec<DelayFn<T>>,
    },
    /// `xddot + a(t) xdot + b(t) x + sum_k c_k(t) xdot(h_k(t)) = 0`
    LinearVarDelay10 {
        a: CoefFn<T>,
        b: CoefFn<T>,
        c: Vec<CoefFn<T>>,
        delays: Vec<DelayFn<T>>,
    },
    /// `xddot + a(t) xdot + sum_k b_k(t) x(h_k(t)) = 0`
    LinearVarDelay12 {
        a: CoefFn<T>,
        b_terms: Vec<CoefFn<T>>,
        delays: Vec<DelayFn<T>>,
    },
    /// `xddot + a(t) xdot + b(t) x = sum_k c_k(t) [x(t) - x(h_k(t))]`
    DifferenceForm15 {
        a: CoefFn<T>,
        b: CoefFn<T>,
        c: Vec<CoefFn<T>>,
        delays: Vec<DelayFn<T>>,
    },
    /// `xddot + a(t) xdot + b(t) sin x(h(t)) = 0`
    Sunflower {
        a: CoefFn<T>,
        b: CoefFn<T>,
        delay: DelayFn<T>,
    },
    /// `xddot + [alpha(t) - beta(t) p'(x)] xdot + s(t) x = p(x(t)) - p(x(h(t)))`
    KaldorKalecki {
        alpha: CoefFn<T>,
        beta: CoefFn<T>,
        p: SigmoidP<T>,
        s_coef: CoefFn<T>,
        delay: DelayFn<T>,
    },
    /// State-dependent damping and restoring coefficients with an
    /// oscillating lag:
    /// `xddot + (db + da sin x) xdot + (rb + ra cos x) x(t - la sin^2 t) = 0`
    NonlinearDemo {
        damping_base: T,
        damping_amp: T,
        restoring_base: T,
        restoring_amp: T,
        lag_amplitude: T,
    },
    /// `udot + b * integral of K(t, s) sin u(s) ds over s <= h(t) = 0`
    KernelIntegral { b: T, kernel: KernelSpec<T> },
}

impl<T: Real> EquationSpec<T> {
    /// The canonical nonlinear demonstration coefficients.
    pub fn nonlinear_demo() -> Self {
        EquationSpec::NonlinearDemo {
            damping_base: lit(1.9),
            damping_amp: lit(0.1),
            restoring_base: lit(1.1),
            restoring_amp: lit(0.1),
            lag_amplitude: lit(0.19),
        }
    }

    /// Upper bound on all lags the right-hand side can request.
    pub fn max_delay_bound(&self) -> T {
        let max_of = |ds: &[DelayFn<T>]| {
            ds.iter()
                .map(|d| d.lag_bound())
                .fold(T::zero(), |acc, l| if l > acc { l } else { acc })
        };
        match self {
            EquationSpec::LinearConstAutonomous { tau, .. } => *tau,
            EquationSpec::LinearVarDelay7 { delays, .. }
            | EquationSpec::LinearVarDelay10 { delays, .. }
            | EquationSpec::LinearVarDelay12 { delays, .. }
            | EquationSpec::DifferenceForm15 { delays, .. } => max_of(delays),
            EquationSpec::Sunflower { delay, .. } => delay.lag_bound(),
            EquationSpec::KaldorKalecki { delay, .. } => delay.lag_bound(),
            EquationSpec::NonlinearDemo { lag_amplitude, .. } => *lag_amplitude,
            EquationSpec::KernelIntegral { kernel, .. } => kernel.max_lag(),
        }
    }

    pub fn is_kernel_family(&self) -> bool {
        matches!(self, EquationSpec::KernelIntegral { .. })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn admissible_constant_bounds_pass() {
        let b = CoefficientBounds::constant(3.0, 1.1, vec![0.8], vec![2.0]);
        assert!(validate_bounds(&b).is_empty());
    }

    #[test]
    fn nonpositive_damping_reported() {
        let b = CoefficientBounds::constant(0.0, 1.0, vec![0.5], vec![1.0]);
        let viols = validate_bounds(&b);
        assert!(viols.contains(&"a_lo must be positive".to_string()));
    }

    #[test]
    fn length_mismatch_reported() {
        let b = CoefficientBounds::constant(1.0, 1.0, vec![0.5], vec![1.0, 2.0]);
        let viols = validate_bounds(&b);
        assert!(viols.contains(&"C and tau length mismatch".to_string()));
    }

    #[test]
    fn validation_is_pure() {
        let b = CoefficientBounds::constant(-1.0, 0.0, vec![-0.5], vec![1.0]);
        assert_eq!(validate_bounds(&b), validate_bounds(&b));
    }

    #[test]
    fn sigmoid_matches_logistic_form() {
        let p = SigmoidP {
            amplitude: 4.0,
            slope: 1.0,
        };
        for &x in &[-3.0, -0.5, 0.0, 0.7, 2.0] {
            let direct = 4.0 / (1.0 + (-x as f64).exp()) - 2.0;
            assert!((p.eval(x) - direct).abs() < 1e-14);
        }
        assert!((p.derivative(0.0) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn delay_functions_stay_causal() {
        let d = DelayFn::SinLag { amplitude: 2.0 };
        for &t in &[0.0, 0.5, 1.0, std::f64::consts::PI, 10.0] {
            assert!(d.arg(t).unwrap() <= t);
        }
        let custom = DelayFn::Custom {
            times: vec![0.0, 1.0],
            lags: vec![0.5, -0.5],
        };
        assert!(custom.arg(1.0).is_err());
    }

    #[test]
    fn quarter_box_kernel_geometry() {
        let k = KernelSpec::<f64>::quarter_box();
        let pi = std::f64::consts::PI;
        // window around 2*pi: support [-pi, 0] for t near pi
        assert_eq!(k.eval(1.5 * pi, -0.5 * pi), 0.25);
        assert_eq!(k.eval(1.5 * pi, 0.5 * pi), 0.0);
        let (lo, hi) = k.support(1.5 * pi);
        assert!((lo + pi).abs() < 1e-12 && hi.abs() < 1e-12);
    }

    #[test]
    fn equation_spec_round_trips_through_json() {
        let spec = EquationSpec::LinearVarDelay7 {
            a: CoefFn::constant(3.0),
            b: CoefFn::constant(1.1),
            c: vec![CoefFn::constant(-0.8)],
            delays: vec![DelayFn::SinLag { amplitude: 2.0 }],
        };
        let text = serde_json::to_string(&spec).unwrap();
        let back: EquationSpec<f64> = serde_json::from_str(&text).unwrap();
        assert_eq!(spec, back);
    }

    #[test]
    fn test_ids_round_trip() {
        for id in TestId::ALL {
            assert_eq!(TestId::parse(id.name()), Some(id));
        }
        assert_eq!(TestId::parse("th9"), None);
    }
}
