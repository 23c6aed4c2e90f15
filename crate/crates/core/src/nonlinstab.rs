//! Global-attractivity tests for nonlinear damped second-order delay
//! equations. Each test reduces an envelope of the nonlinear components to
//! the corresponding linear verdict and upgrades the claim to "zero is a
//! global attractor".

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linstab::{th1_shaped, th2_shaped, th3_shaped, th4_shaped};
use crate::model::{CoefFn, EquationSpec, StabilityClaim, StabilityVerdict, TestId};
use crate::scalar::{lit, sum, Real};

/// Envelope of the nonlinear components: `a0 <= f(t, v, u)/u <= a_hi` for the
/// damping term, `b0 <= s(t, u)/u <= b_hi` for the undelayed restoring term,
/// `|s_k/u| <= c_abs[k]` or `b_term_lo[k] <= s_k/v <= b_term_hi[k]` for the
/// delayed terms, with lags bounded by `tau`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NonlinearEnvelope<T> {
    pub a0: T,
    pub a_hi: T,
    pub b0: Option<T>,
    pub b_hi: Option<T>,
    #[serde(default, rename = "C")]
    pub c_abs: Vec<T>,
    #[serde(default)]
    pub b_term_lo: Option<Vec<T>>,
    #[serde(default)]
    pub b_term_hi: Option<Vec<T>>,
    #[serde(default)]
    pub tau: Vec<T>,
}

/// Bounds for the generalized business-cycle model with a nondecreasing
/// investment nonlinearity `p`: damping is `alpha(t) - beta(t) p'(x)`,
/// the delayed feedback is `p(x(t)) - p(x(h(t)))` with `|p'| <= cp`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KKParams<T> {
    pub alpha0: T,
    pub alpha1: T,
    pub beta0: T,
    pub beta1: T,
    #[serde(rename = "Cp")]
    pub cp: T,
    pub b0: T,
    #[serde(rename = "B")]
    pub b_hi: T,
    pub tau: T,
}

fn invalid<T>(msgs: Vec<String>) -> Result<T> {
    Err(Error::InvalidBounds(msgs.join("; ")))
}

fn base_envelope_violations<T: Real>(e: &NonlinearEnvelope<T>) -> Vec<String> {
    let mut viols = Vec::new();
    if !(e.a0 > T::zero()) || !e.a0.is_finite() {
        viols.push("a0 must be positive".to_string());
    }
    if e.a0 > e.a_hi || !e.a_hi.is_finite() {
        viols.push("a0 must not exceed A".to_string());
    }
    if let (Some(lo), Some(hi)) = (e.b0, e.b_hi) {
        if !(lo > T::zero()) || lo > hi {
            viols.push("b bounds must satisfy 0 < b0 <= B".to_string());
        }
    }
    if e.c_abs.iter().any(|&c| c < T::zero()) {
        viols.push("C entries must be nonnegative".to_string());
    }
    if e.tau.iter().any(|&t| t < T::zero()) {
        viols.push("tau entries must be nonnegative".to_string());
    }
    viols
}

fn require_b<T: Real>(e: &NonlinearEnvelope<T>) -> Result<(T, T)> {
    match (e.b0, e.b_hi) {
        (Some(lo), Some(hi)) => Ok((lo, hi)),
        _ => Err(Error::MissingField("b0/B")),
    }
}

fn checked<T: Real>(e: &NonlinearEnvelope<T>) -> Result<()> {
    let viols = base_envelope_violations(e);
    if viols.is_empty() {
        Ok(())
    } else {
        invalid(viols)
    }
}

/// Global attractivity when the delayed nonlinearities act on displacement
/// (test id `nl32`): the delay-independent damping/restoring conditions with
/// envelope constants `(a0, A, b0, B, C_k)`.
pub fn check_global_th32<T: Real>(e: &NonlinearEnvelope<T>) -> Result<StabilityVerdict<T>> {
    checked(e)?;
    let (b0, b_hi) = require_b(e)?;
    if e.c_abs.is_empty() {
        return invalid(vec!["C must be nonempty".into()]);
    }
    th1_shaped(
        TestId::Nl32,
        StabilityClaim::GlobalAttractorZero,
        e.a0,
        e.a_hi,
        b0,
        b_hi,
        sum(&e.c_abs),
    )
}

/// Global attractivity when the delayed nonlinearities act on velocity
/// (test id `nl33`).
pub fn check_global_th33<T: Real>(e: &NonlinearEnvelope<T>) -> Result<StabilityVerdict<T>> {
    checked(e)?;
    let (b0, b_hi) = require_b(e)?;
    if e.c_abs.is_empty() {
        return invalid(vec!["C must be nonempty".into()]);
    }
    th2_shaped(
        TestId::Nl33,
        StabilityClaim::GlobalAttractorZero,
        e.a0,
        e.a_hi,
        b0,
        b_hi,
        sum(&e.c_abs),
    )
}

/// Global attractivity when every restoring term is delayed, with per-term
/// envelopes `b_term_lo[k] <= s_k/v <= b_term_hi[k]` (test id `nl34`).
/// The second condition uses the lower damping bound `a0` on both sides.
pub fn check_global_th34<T: Real>(e: &NonlinearEnvelope<T>) -> Result<StabilityVerdict<T>> {
    checked(e)?;
    let (lo, hi) = match (&e.b_term_lo, &e.b_term_hi) {
        (Some(lo), Some(hi)) => (lo.as_slice(), hi.as_slice()),
        _ => return Err(Error::MissingField("b_term_lo/b_term_hi")),
    };
    let mut v = th3_shaped(
        TestId::Nl34,
        StabilityClaim::GlobalAttractorZero,
        e.a0,
        e.a_hi,
        lo,
        hi,
        &e.tau,
    )?;
    v.notes
        .push("condition 2 uses the lower damping bound a0 uniformly".into());
    Ok(v)
}

/// Global attractivity for the difference form with delay-weighted
/// perturbations (test id `nl35`).
pub fn check_global_th35<T: Real>(e: &NonlinearEnvelope<T>) -> Result<StabilityVerdict<T>> {
    checked(e)?;
    let (b0, b_hi) = require_b(e)?;
    if e.c_abs.is_empty() || e.c_abs.len() != e.tau.len() {
        return invalid(vec!["C and tau must be nonempty and equally long".into()]);
    }
    let sum_c_tau = e
        .c_abs
        .iter()
        .zip(&e.tau)
        .fold(T::zero(), |acc, (&c, &t)| acc + c * t);
    th4_shaped(
        TestId::Nl35,
        StabilityClaim::GlobalAttractorZero,
        e.a0,
        e.a_hi,
        b0,
        b_hi,
        sum_c_tau,
    )
}

/// Global attractivity for the generalized business-cycle model
/// (test id `kk`). Effective damping floor is `a0 = alpha0 - beta1 * cp`,
/// and the delayed feedback contributes `cp * tau` in the difference-form
/// conditions. The second condition's restoring threshold uses `b0`.
pub fn check_kaldor_kalecki<T: Real>(p: &KKParams<T>) -> Result<StabilityVerdict<T>> {
    let mut viols = Vec::new();
    if !(p.alpha0 > T::zero()) || p.alpha0 > p.alpha1 {
        viols.push("alpha bounds must satisfy 0 < alpha0 <= alpha1".to_string());
    }
    if !(p.beta0 > T::zero()) || p.beta0 > p.beta1 {
        viols.push("beta bounds must satisfy 0 < beta0 <= beta1".to_string());
    }
    if p.cp < T::zero() {
        viols.push("Cp must be nonnegative".to_string());
    }
    if !(p.b0 > T::zero()) || p.b0 > p.b_hi {
        viols.push("b bounds must satisfy 0 < b0 <= B".to_string());
    }
    if p.tau < T::zero() {
        viols.push("tau must be nonnegative".to_string());
    }
    if !viols.is_empty() {
        return invalid(viols);
    }
    let a0 = p.alpha0 - p.beta1 * p.cp;
    if !(a0 > T::zero()) {
        return Err(Error::Precondition("effective damping nonpositive".into()));
    }
    let mut v = th4_shaped(
        TestId::Kk,
        StabilityClaim::GlobalAttractorZero,
        a0,
        p.alpha1,
        p.b0,
        p.b_hi,
        p.cp * p.tau,
    )?;
    v.notes
        .push("condition 2 threshold reads the restoring floor b0".into());
    Ok(v)
}

/// Supremum of the derivative of the centered sigmoid
/// `p(x) = A/(1+exp(-bx)) - A/2`, attained at the origin: `A*b/4`.
pub fn sigmoid_derivative_bound<T: Real>(amplitude: T, slope: T) -> Result<T> {
    if !(amplitude > T::zero()) || !(slope > T::zero()) {
        return Err(Error::Precondition(
            "sigmoid parameters must be positive".into(),
        ));
    }
    Ok(amplitude * slope / lit(4.0))
}

/// One sampled point where a component ratio leaves its declared envelope.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnvelopeViolation<T> {
    pub quantity: String,
    pub t: T,
    pub v: T,
    pub u: T,
    pub value: T,
    pub lo: Option<T>,
    pub hi: Option<T>,
}

impl<T: Real> std::fmt::Display for EnvelopeViolation<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{} = {} at (t={}, v={}, u={}) outside [",
            self.quantity, self.value, self.t, self.v, self.u
        )?;
        match self.lo {
            Some(lo) => write!(f, "{lo}, ")?,
            None => write!(f, "-inf, ")?,
        }
        match self.hi {
            Some(hi) => write!(f, "{hi}]"),
            None => write!(f, "inf]"),
        }
    }
}

/// Sampling grid for [`envelope_audit`]: a box in `(t, v, u)` space,
/// where `v` stands for the state argument of each component and `u`
/// for the rate argument.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditGrid<T> {
    pub t_lo: T,
    pub t_hi: T,
    pub t_points: usize,
    pub v_lo: T,
    pub v_hi: T,
    pub v_points: usize,
}

impl<T: Real> Default for AuditGrid<T> {
    fn default() -> Self {
        Self {
            t_lo: T::zero(),
            t_hi: lit(20.0),
            t_points: 41,
            v_lo: lit(-10.0),
            v_hi: lit(10.0),
            v_points: 81,
        }
    }
}

fn axis<T: Real>(lo: T, hi: T, n: usize) -> Vec<T> {
    if n <= 1 {
        return vec![lo];
    }
    let span = hi - lo;
    (0..n)
        .map(|i| lo + span * lit::<T>(i as f64) / lit::<T>((n - 1) as f64))
        .collect()
}

struct RatioCheck<'a, T> {
    quantity: String,
    lo: Option<T>,
    hi: Option<T>,
    f: Box<dyn Fn(T, T) -> T + 'a>, // (t, v) -> ratio
}

/// Samples the component ratios of `spec` over `grid` and reports every
/// sample that leaves the declared envelope. An empty list means
/// "consistent at the sampled resolution" — it is not a proof.
pub fn envelope_audit<T: Real>(
    spec: &EquationSpec<T>,
    e: &NonlinearEnvelope<T>,
    grid: &AuditGrid<T>,
) -> Result<Vec<EnvelopeViolation<T>>> {
    let slack = lit::<T>(1e-12);
    let mut checks: Vec<RatioCheck<T>> = Vec::new();

    let damping = |lo: T, hi: T, f: Box<dyn Fn(T, T) -> T + '_>| RatioCheck {
        quantity: "damping ratio".to_string(),
        lo: Some(lo),
        hi: Some(hi),
        f,
    };

    match spec {
        EquationSpec::NonlinearDemo {
            damping_base,
            damping_amp,
            restoring_base,
            restoring_amp,
            ..
        } => {
            let (db, da) = (*damping_base, *damping_amp);
            let (rb, ra) = (*restoring_base, *restoring_amp);
            checks.push(damping(e.a0, e.a_hi, Box::new(move |_t, v| db + da * v.sin())));
            if let (Some(lo), Some(hi)) = (&e.b_term_lo, &e.b_term_hi) {
                if !lo.is_empty() {
                    let (l0, h0) = (lo[0], hi[0]);
                    checks.push(RatioCheck {
                        quantity: "delayed restoring ratio 1".to_string(),
                        lo: Some(l0),
                        hi: Some(h0),
                        f: Box::new(move |_t, v| rb + ra * v.cos()),
                    });
                }
            }
        }
        EquationSpec::KaldorKalecki {
            alpha,
            beta,
            p,
            s_coef,
            ..
        } => {
            let (alpha, beta, p, s_coef) = (alpha.clone(), beta.clone(), p.clone(), s_coef.clone());
            checks.push(damping(
                e.a0,
                e.a_hi,
                Box::new(move |t, v| alpha.eval(t) - beta.eval(t) * p.derivative(v)),
            ));
            if let (Some(b0), Some(bh)) = (e.b0, e.b_hi) {
                checks.push(RatioCheck {
                    quantity: "restoring ratio".to_string(),
                    lo: Some(b0),
                    hi: Some(bh),
                    f: Box::new(move |t, _v| s_coef.eval(t)),
                });
            }
            if !e.c_abs.is_empty() {
                let cp = e.c_abs[0];
                let p2 = match spec {
                    EquationSpec::KaldorKalecki { p, .. } => p.clone(),
                    _ => unreachable!(),
                };
                checks.push(RatioCheck {
                    quantity: "feedback slope".to_string(),
                    lo: Some(-cp),
                    hi: Some(cp),
                    f: Box::new(move |_t, v| p2.derivative(v)),
                });
            }
        }
        EquationSpec::LinearVarDelay7 { a, b, c, .. }
        | EquationSpec::DifferenceForm15 { a, b, c, .. } => {
            push_coef_checks(&mut checks, e, a, Some(b), c);
        }
        EquationSpec::LinearVarDelay10 { a, b, c, .. } => {
            push_coef_checks(&mut checks, e, a, Some(b), c);
        }
        EquationSpec::LinearVarDelay12 { a, b_terms, .. } => {
            push_coef_checks(&mut checks, e, a, None, &[]);
            if let (Some(lo), Some(hi)) = (&e.b_term_lo, &e.b_term_hi) {
                for (k, bt) in b_terms.iter().enumerate() {
                    if k >= lo.len() {
                        break;
                    }
                    let bt = bt.clone();
                    checks.push(RatioCheck {
                        quantity: format!("delayed restoring ratio {}", k + 1),
                        lo: Some(lo[k]),
                        hi: Some(hi[k]),
                        f: Box::new(move |t, _v| bt.eval(t)),
                    });
                }
            }
        }
        EquationSpec::Sunflower { a, b, .. } => {
            push_coef_checks(&mut checks, e, a, None, &[]);
            if let (Some(lo), Some(hi)) = (&e.b_term_lo, &e.b_term_hi) {
                if !lo.is_empty() {
                    let b = b.clone();
                    checks.push(RatioCheck {
                        quantity: "delayed restoring ratio 1".to_string(),
                        lo: Some(lo[0]),
                        hi: Some(hi[0]),
                        f: Box::new(move |t, _v| b.eval(t)),
                    });
                }
            }
        }
        EquationSpec::LinearConstAutonomous { .. } | EquationSpec::KernelIntegral { .. } => {
            return Err(Error::Precondition(
                "envelope audit does not apply to this family".into(),
            ));
        }
    }

    let ts = axis(grid.t_lo, grid.t_hi, grid.t_points);
    let vs = axis(grid.v_lo, grid.v_hi, grid.v_points);
    let mut violations = Vec::new();
    for check in &checks {
        for &t in &ts {
            for &v in &vs {
                let value = (check.f)(t, v);
                let below = check.lo.map_or(false, |lo| value < lo - slack);
                let above = check.hi.map_or(false, |hi| value > hi + slack);
                if below || above {
                    violations.push(EnvelopeViolation {
                        quantity: check.quantity.clone(),
                        t,
                        v,
                        u: T::zero(),
                        value,
                        lo: check.lo,
                        hi: check.hi,
                    });
                }
            }
        }
    }
    Ok(violations)
}

fn push_coef_checks<'a, T: Real>(
    checks: &mut Vec<RatioCheck<'a, T>>,
    e: &NonlinearEnvelope<T>,
    a: &'a CoefFn<T>,
    b: Option<&'a CoefFn<T>>,
    c: &'a [CoefFn<T>],
) {
    checks.push(RatioCheck {
        quantity: "damping ratio".to_string(),
        lo: Some(e.a0),
        hi: Some(e.a_hi),
        f: Box::new(move |t, _v| a.eval(t)),
    });
    if let (Some(b), Some(b0), Some(bh)) = (b, e.b0, e.b_hi) {
        checks.push(RatioCheck {
            quantity: "restoring ratio".to_string(),
            lo: Some(b0),
            hi: Some(bh),
            f: Box::new(move |t, _v| b.eval(t)),
        });
    }
    for (k, ck) in c.iter().enumerate() {
        if k >= e.c_abs.len() {
            break;
        }
        let bound = e.c_abs[k];
        checks.push(RatioCheck {
            quantity: format!("perturbation magnitude {}", k + 1),
            lo: Some(-bound),
            hi: Some(bound),
            f: Box::new(move |t, _v| ck.eval(t)),
        });
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn demo_envelope() -> NonlinearEnvelope<f64> {
        NonlinearEnvelope {
            a0: 1.8,
            a_hi: 2.0,
            b0: None,
            b_hi: None,
            c_abs: vec![],
            b_term_lo: Some(vec![1.0]),
            b_term_hi: Some(vec![1.2]),
            tau: vec![0.19],
        }
    }

    #[test]
    fn nl32_mirrors_the_linear_arithmetic() {
        let e = NonlinearEnvelope {
            a0: 3.0,
            a_hi: 3.0,
            b0: Some(1.1),
            b_hi: Some(1.1),
            c_abs: vec![0.8],
            b_term_lo: None,
            b_term_hi: None,
            tau: vec![2.0],
        };
        let v = check_global_th32(&e).unwrap();
        assert_eq!(v.claim, StabilityClaim::GlobalAttractorZero);
        assert_eq!(v.condition_fired, Some(1));

        let trivial = NonlinearEnvelope {
            a0: 2.0,
            a_hi: 2.0,
            b0: Some(1.0),
            b_hi: Some(1.0),
            c_abs: vec![0.0],
            ..e.clone()
        };
        let v = check_global_th32(&trivial).unwrap();
        assert_eq!(v.condition_fired, Some(1));

        let weak = NonlinearEnvelope {
            a0: 0.1,
            a_hi: 0.1,
            b0: Some(1.5),
            b_hi: Some(1.5),
            c_abs: vec![1.45],
            ..e
        };
        assert_eq!(
            check_global_th32(&weak).unwrap().claim,
            StabilityClaim::Inconclusive
        );
    }

    #[test]
    fn nl33_cases() {
        let base = NonlinearEnvelope {
            a0: 2.1,
            a_hi: 2.1,
            b0: Some(1.0),
            b_hi: Some(1.0),
            c_abs: vec![0.4],
            b_term_lo: None,
            b_term_hi: None,
            tau: vec![2.0],
        };
        assert_eq!(check_global_th33(&base).unwrap().condition_fired, Some(1));
        let no_delay = NonlinearEnvelope {
            c_abs: vec![0.0],
            ..base
        };
        assert_eq!(
            check_global_th33(&no_delay).unwrap().claim,
            StabilityClaim::GlobalAttractorZero
        );
    }

    #[test]
    fn nl34_demo_equation_fires_condition_2() {
        let v = check_global_th34(&demo_envelope()).unwrap();
        assert_eq!(v.claim, StabilityClaim::GlobalAttractorZero);
        assert_eq!(v.condition_fired, Some(2));
        assert!(!v.conditions[0].holds);

        let zero_delay = NonlinearEnvelope {
            a0: 2.0,
            a_hi: 2.0,
            b_term_lo: Some(vec![0.9]),
            b_term_hi: Some(vec![0.9]),
            tau: vec![0.0],
            ..demo_envelope()
        };
        let v = check_global_th34(&zero_delay).unwrap();
        assert_eq!(v.condition_fired, Some(1));

        let weak = NonlinearEnvelope {
            a0: 1.0,
            a_hi: 1.0,
            b_term_lo: Some(vec![1.1]),
            b_term_hi: Some(vec![1.1]),
            tau: vec![2.5],
            ..demo_envelope()
        };
        assert_eq!(
            check_global_th34(&weak).unwrap().claim,
            StabilityClaim::Inconclusive
        );
    }

    #[test]
    fn nl35_cases() {
        let e = NonlinearEnvelope {
            a0: 2.1,
            a_hi: 2.1,
            b0: Some(1.0),
            b_hi: Some(1.0),
            c_abs: vec![0.4],
            b_term_lo: None,
            b_term_hi: None,
            tau: vec![1.0],
        };
        assert_eq!(check_global_th35(&e).unwrap().condition_fired, Some(1));
        let weak = NonlinearEnvelope {
            a0: 1.0,
            a_hi: 1.0,
            b0: Some(1.5),
            b_hi: Some(1.5),
            c_abs: vec![0.8],
            tau: vec![2.0],
            ..e
        };
        assert_eq!(
            check_global_th35(&weak).unwrap().claim,
            StabilityClaim::Inconclusive
        );
    }

    #[test]
    fn kaldor_kalecki_cases() {
        let p = KKParams {
            alpha0: 4.0,
            alpha1: 4.0,
            beta0: 1.0,
            beta1: 1.0,
            cp: 1.0,
            b0: 2.0,
            b_hi: 2.0,
            tau: 0.1,
        };
        let v = check_kaldor_kalecki(&p).unwrap();
        assert_eq!(v.claim, StabilityClaim::GlobalAttractorZero);
        assert_eq!(v.condition_fired, Some(1));

        let bad = KKParams {
            alpha0: 1.0,
            alpha1: 1.0,
            cp: 2.0,
            ..p
        };
        let err = check_kaldor_kalecki(&bad).unwrap_err();
        assert_eq!(
            err,
            Error::Precondition("effective damping nonpositive".into())
        );
    }

    #[test]
    fn kk_with_linear_p_matches_th4_with_no_delay_term() {
        let p = KKParams {
            alpha0: 2.1,
            alpha1: 2.1,
            beta0: 0.5,
            beta1: 1.0,
            cp: 0.0,
            b0: 1.0,
            b_hi: 1.0,
            tau: 5.0,
        };
        let kk = check_kaldor_kalecki(&p).unwrap();
        let lin = crate::linstab::check_th4(&crate::model::CoefficientBounds::constant(
            2.1,
            1.0,
            vec![0.0],
            vec![5.0],
        ))
        .unwrap();
        assert_eq!(kk.claim.text(), "global attractor: zero");
        assert_eq!(kk.condition_fired, lin.condition_fired);
    }

    #[test]
    fn sigmoid_bound_matches_grid_search() {
        let grid_max = |a: f64, b: f64| {
            let p = crate::model::SigmoidP {
                amplitude: a,
                slope: b,
            };
            let mut best = 0.0f64;
            let mut x = -40.0 / b;
            while x <= 40.0 / b {
                best = best.max(p.derivative(x));
                x += 0.001 / b;
            }
            best
        };
        for &(a, b) in &[(4.0, 1.0), (1.0, 4.0), (0.4, 10.0)] {
            let bound = sigmoid_derivative_bound(a, b).unwrap();
            assert!((bound - 1.0).abs() < 1e-12);
            assert!((bound - grid_max(a, b)).abs() <= 1e-8 * bound);
        }
        assert!(sigmoid_derivative_bound(-1.0, 1.0).is_err());
    }

    #[test]
    fn audit_accepts_consistent_demo_envelope() {
        let spec = EquationSpec::<f64>::nonlinear_demo();
        let viols = envelope_audit(&spec, &demo_envelope(), &AuditGrid::default()).unwrap();
        assert!(viols.is_empty(), "unexpected violations: {viols:?}");
    }

    #[test]
    fn audit_flags_understated_damping_ceiling() {
        let spec = EquationSpec::<f64>::nonlinear_demo();
        let tight = NonlinearEnvelope {
            a_hi: 1.95,
            ..demo_envelope()
        };
        let viols = envelope_audit(&spec, &tight, &AuditGrid::default()).unwrap();
        assert!(viols.iter().any(|v| v.quantity == "damping ratio" && v.value > 1.95));
    }

    #[test]
    fn audit_accepts_matching_constant_linear_spec() {
        let spec = EquationSpec::LinearVarDelay7 {
            a: CoefFn::constant(3.0),
            b: CoefFn::constant(1.1),
            c: vec![CoefFn::constant(-0.8)],
            delays: vec![crate::model::DelayFn::SinLag { amplitude: 2.0 }],
        };
        let e = NonlinearEnvelope {
            a0: 3.0,
            a_hi: 3.0,
            b0: Some(1.1),
            b_hi: Some(1.1),
            c_abs: vec![0.8],
            b_term_lo: None,
            b_term_hi: None,
            tau: vec![2.0],
        };
        assert!(envelope_audit(&spec, &e, &AuditGrid::default())
            .unwrap()
            .is_empty());
    }
}
