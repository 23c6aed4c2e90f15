//! Explicit stability and instability tests for second-order linear delay
//! equations. Every test returns a [`StabilityVerdict`] carrying the fired
//! condition, the margin to the binding inequality, and — for the
//! envelope-based tests — the 2x2 companion matrix certified by
//! [`crate::mmatrix::is_nonsingular_m_matrix`].
//!
//! Inequalities are compared exactly as written (strict vs non-strict),
//! with no epsilon slack; margins let callers judge borderline cases.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mmatrix::{is_nonsingular_m_matrix, lemma1_matrix, lemma2_matrix, RealMatrix};
use crate::model::{
    validate_bounds, Certificate, CoefficientBounds, ConditionReport, NormData, StabilityClaim,
    StabilityVerdict, TestId,
};
use crate::scalar::{lit, sum, Real};

/// Parameters of the constant-coefficient autonomous equation
/// `xddot = p1 xdot(t) + p2 xdot(t - tau) + q1 x(t) + q2 x(t - tau)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AutonomousParams<T> {
    pub p1: T,
    pub p2: T,
    pub q1: T,
    pub q2: T,
    pub tau: T,
}

fn min2<T: Real>(a: T, b: T) -> T {
    if a < b {
        a
    } else {
        b
    }
}

fn max2<T: Real>(a: T, b: T) -> T {
    if a > b {
        a
    } else {
        b
    }
}

fn invalid<T>(msgs: Vec<String>) -> Result<T> {
    Err(Error::InvalidBounds(msgs.join("; ")))
}

fn checked_bounds<T: Real>(b: &CoefficientBounds<T>) -> Result<()> {
    let viols = validate_bounds(b);
    if viols.is_empty() {
        Ok(())
    } else {
        invalid(viols)
    }
}

fn require_b_range<T: Real>(b: &CoefficientBounds<T>) -> Result<(T, T)> {
    match (b.b_lo, b.b_hi) {
        (Some(lo), Some(hi)) => Ok((lo, hi)),
        _ => Err(Error::MissingField("b_lo/b_hi")),
    }
}

fn require_terms<T: Real>(b: &CoefficientBounds<T>) -> Result<()> {
    if b.c_abs.is_empty() || b.tau.is_empty() {
        return invalid(vec!["C and tau must be nonempty".into()]);
    }
    if b.c_abs.len() != b.tau.len() {
        return invalid(vec!["C and tau length mismatch".into()]);
    }
    Ok(())
}

/// Builds a verdict from the two condition reports, constructing the
/// certificate for the first condition that holds.
fn two_condition_verdict<T: Real>(
    test_id: TestId,
    stable_claim: StabilityClaim,
    conds: [ConditionReport<T>; 2],
    mut certificate: impl FnMut(u8) -> Result<Certificate<T>>,
) -> Result<StabilityVerdict<T>> {
    let fired = conds.iter().find(|c| c.holds).map(|c| c.index);
    let mut verdict = StabilityVerdict::new(
        test_id,
        if fired.is_some() {
            stable_claim
        } else {
            StabilityClaim::Inconclusive
        },
    );
    verdict.condition_fired = fired;
    verdict.margin = Some(match fired {
        Some(idx) => conds[(idx - 1) as usize].margin,
        None => max2(conds[0].margin, conds[1].margin),
    });
    if let Some(idx) = fired {
        verdict.certificate = Some(certificate(idx)?);
    }
    verdict.conditions = conds.to_vec();
    Ok(verdict)
}

fn companion_lemma1<T: Real>(a_lo: T, l21: T, l22: T) -> Result<Certificate<T>> {
    let half_a = a_lo / lit(2.0);
    let coupling = RealMatrix::from_rows(&[vec![T::zero(), T::one()], vec![l21, l22]])?;
    let matrix = lemma1_matrix(&[half_a, half_a], &coupling)?;
    let cert = is_nonsingular_m_matrix(&matrix);
    Ok(Certificate::Companion {
        matrix,
        minors: cert.leading_minors,
        is_m_matrix: cert.is_m_matrix,
    })
}

fn companion_lemma2<T: Real>(a_lo: T, direct21: T, integral_weight: T) -> Result<Certificate<T>> {
    let half_a = a_lo / lit(2.0);
    let zero = T::zero();
    let one = T::one();
    let integral = RealMatrix::from_rows(&[
        vec![zero, zero],
        vec![half_a * integral_weight, integral_weight],
    ])?;
    let window = RealMatrix::from_rows(&[vec![zero, zero], vec![one, one]])?;
    let direct = RealMatrix::from_rows(&[vec![zero, one], vec![direct21, zero]])?;
    let matrix = lemma2_matrix(&[half_a, half_a], &integral, &window, &direct)?;
    let cert = is_nonsingular_m_matrix(&matrix);
    Ok(Certificate::Companion {
        matrix,
        minors: cert.leading_minors,
        is_m_matrix: cert.is_m_matrix,
    })
}

/// Delay-independent test for
/// `xddot + a(t) xdot + b(t) x + sum_k c_k(t) x(h_k(t)) = 0` (test id `th1`).
pub fn check_th1<T: Real>(b: &CoefficientBounds<T>) -> Result<StabilityVerdict<T>> {
    checked_bounds(b)?;
    require_terms(b)?;
    let (b_lo, b_hi) = require_b_range(b)?;
    Ok(th1_shaped(
        TestId::Th1,
        StabilityClaim::ExponentiallyStable,
        b.a_lo,
        b.a_hi,
        b_lo,
        b_hi,
        sum(&b.c_abs),
    )?)
}

/// Shared arithmetic for the th1-shaped conditions (also the nonlinear
/// global-attractor reduction).
pub(crate) fn th1_shaped<T: Real>(
    test_id: TestId,
    stable_claim: StabilityClaim,
    a_lo: T,
    a_hi: T,
    b_lo: T,
    b_hi: T,
    sum_c: T,
) -> Result<StabilityVerdict<T>> {
    let two = lit::<T>(2.0);
    let four = lit::<T>(4.0);
    let quarter_a2 = a_lo * a_lo / four;
    let half_a = a_lo / two;

    let c1_gap = quarter_a2 - b_hi; // >= 0 required
    let c1_room = (b_lo - half_a * (a_hi - a_lo)) - sum_c; // > 0 required
    let c1 = ConditionReport {
        index: 1,
        holds: b_hi <= quarter_a2 && c1_room > T::zero(),
        margin: min2(c1_gap, c1_room),
    };

    let c2_gap = b_lo - half_a * (a_hi - half_a); // >= 0 required
    let c2_room = (a_lo * a_lo / two - b_hi) - sum_c; // > 0 required
    let c2 = ConditionReport {
        index: 2,
        holds: c2_gap >= T::zero() && c2_room > T::zero(),
        margin: min2(c2_gap, c2_room),
    };

    two_condition_verdict(test_id, stable_claim, [c1, c2], |idx| {
        let l21 = if idx == 1 {
            half_a * (a_hi - half_a) - b_lo + sum_c
        } else {
            b_hi - quarter_a2 + sum_c
        };
        companion_lemma1(a_lo, l21, T::zero())
    })
}

/// Delay-independent test for
/// `xddot + a(t) xdot + b(t) x + sum_k c_k(t) xdot(h_k(t)) = 0` (test id `th2`).
pub fn check_th2<T: Real>(b: &CoefficientBounds<T>) -> Result<StabilityVerdict<T>> {
    checked_bounds(b)?;
    require_terms(b)?;
    let (b_lo, b_hi) = require_b_range(b)?;
    th2_shaped(
        TestId::Th2,
        StabilityClaim::ExponentiallyStable,
        b.a_lo,
        b.a_hi,
        b_lo,
        b_hi,
        sum(&b.c_abs),
    )
}

pub(crate) fn th2_shaped<T: Real>(
    test_id: TestId,
    stable_claim: StabilityClaim,
    a_lo: T,
    a_hi: T,
    b_lo: T,
    b_hi: T,
    sum_c: T,
) -> Result<StabilityVerdict<T>> {
    let two = lit::<T>(2.0);
    let four = lit::<T>(4.0);
    let quarter_a2 = a_lo * a_lo / four;
    let half_a = a_lo / two;

    let c1_gap = quarter_a2 - b_hi;
    let c1_room = (two * b_lo - a_lo * (a_hi - a_lo)) / (two * a_lo) - sum_c;
    let c1 = ConditionReport {
        index: 1,
        holds: b_hi <= quarter_a2 && c1_room > T::zero(),
        margin: min2(c1_gap, c1_room),
    };

    let c2_gap = b_lo - half_a * (a_hi - half_a);
    let c2_room = (a_lo * a_lo - two * b_hi) / (two * a_lo) - sum_c;
    let c2 = ConditionReport {
        index: 2,
        holds: c2_gap >= T::zero() && c2_room > T::zero(),
        margin: min2(c2_gap, c2_room),
    };

    two_condition_verdict(test_id, stable_claim, [c1, c2], |idx| {
        let l21 = if idx == 1 {
            half_a * (a_hi - half_a) - b_lo + half_a * sum_c
        } else {
            b_hi - quarter_a2 + half_a * sum_c
        };
        companion_lemma1(a_lo, l21, sum_c)
    })
}

/// Delay-dependent test for
/// `xddot + a(t) xdot + sum_k b_k(t) x(h_k(t)) = 0` with per-term bounds
/// `b_lo[k] <= b_k(t) <= b_hi[k]` and lags `tau[k]` (test id `th3`).
pub fn check_th3<T: Real>(
    a_lo: T,
    a_hi: T,
    b_term_lo: &[T],
    b_term_hi: &[T],
    tau: &[T],
) -> Result<StabilityVerdict<T>> {
    th3_shaped(
        TestId::Th3,
        StabilityClaim::ExponentiallyStable,
        a_lo,
        a_hi,
        b_term_lo,
        b_term_hi,
        tau,
    )
}

pub(crate) fn th3_shaped<T: Real>(
    test_id: TestId,
    stable_claim: StabilityClaim,
    a_lo: T,
    a_hi: T,
    b_term_lo: &[T],
    b_term_hi: &[T],
    tau: &[T],
) -> Result<StabilityVerdict<T>> {
    let mut viols = Vec::new();
    if !(a_lo > T::zero()) || !a_lo.is_finite() {
        viols.push("a_lo must be positive".to_string());
    }
    if a_lo > a_hi || !a_hi.is_finite() {
        viols.push("a_lo must not exceed a_hi".to_string());
    }
    if b_term_lo.is_empty() || b_term_lo.len() != b_term_hi.len() || b_term_lo.len() != tau.len() {
        viols.push("b_term and tau lists must be nonempty and equally long".to_string());
    } else {
        if b_term_lo
            .iter()
            .zip(b_term_hi)
            .any(|(l, h)| !(*l > T::zero()) || l > h)
        {
            viols.push("b_term entries must satisfy 0 < lo <= hi".to_string());
        }
        if tau.iter().any(|&t| t < T::zero()) {
            viols.push("tau entries must be nonnegative".to_string());
        }
    }
    if !viols.is_empty() {
        return invalid(viols);
    }

    let two = lit::<T>(2.0);
    let four = lit::<T>(4.0);
    let half_a = a_lo / two;
    let quarter_a2 = a_lo * a_lo / four;
    let sum_lo = sum(b_term_lo);
    let sum_hi = sum(b_term_hi);
    let sum_hi_tau = b_term_hi
        .iter()
        .zip(tau)
        .fold(T::zero(), |acc, (&bh, &tk)| acc + bh * tk);
    let sum_hi_weighted = b_term_hi
        .iter()
        .zip(tau)
        .fold(T::zero(), |acc, (&bh, &tk)| acc + bh * (T::one() + a_lo * tk));

    let c1_gap = quarter_a2 - sum_hi;
    let c1_room = (sum_lo - a_lo * sum_hi_tau) - half_a * (a_hi - a_lo);
    let c1 = ConditionReport {
        index: 1,
        holds: sum_hi <= quarter_a2 && c1_room > T::zero(),
        margin: min2(c1_gap, c1_room),
    };

    let c2_gap = sum_lo - half_a * (a_hi - half_a);
    let c2_room = a_lo * a_lo / two - sum_hi_weighted;
    let c2 = ConditionReport {
        index: 2,
        holds: c2_gap >= T::zero() && c2_room > T::zero(),
        margin: min2(c2_gap, c2_room),
    };

    two_condition_verdict(test_id, stable_claim, [c1, c2], |idx| {
        let direct21 = if idx == 1 {
            half_a * (a_hi - half_a) - sum_lo
        } else {
            sum_hi - quarter_a2
        };
        companion_lemma2(a_lo, direct21, sum_hi_tau)
    })
}

/// Constant-coefficient corollary of [`check_th3`]: `a(t) = a`,
/// `b_k(t) = b[k]` (test id `th3_const`). Implemented through the
/// corollary's own inequalities so it stays an independent route from
/// the envelope test.
pub fn check_th3_constant<T: Real>(a: T, b: &[T], tau: &[T]) -> Result<StabilityVerdict<T>> {
    let mut viols = Vec::new();
    if !(a > T::zero()) || !a.is_finite() {
        viols.push("a must be positive".to_string());
    }
    if b.is_empty() || b.len() != tau.len() {
        viols.push("b and tau lists must be nonempty and equally long".to_string());
    } else {
        if b.iter().any(|&bk| !(bk > T::zero())) {
            viols.push("b entries must be positive".to_string());
        }
        if tau.iter().any(|&t| t < T::zero()) {
            viols.push("tau entries must be nonnegative".to_string());
        }
    }
    if !viols.is_empty() {
        return invalid(viols);
    }

    let two = lit::<T>(2.0);
    let four = lit::<T>(4.0);
    let quarter_a2 = a * a / four;
    let sum_b = sum(b);
    let sum_shrunk = b
        .iter()
        .zip(tau)
        .fold(T::zero(), |acc, (&bk, &tk)| acc + bk * (T::one() - a * tk));
    let sum_grown = b
        .iter()
        .zip(tau)
        .fold(T::zero(), |acc, (&bk, &tk)| acc + bk * (T::one() + a * tk));

    let c1 = ConditionReport {
        index: 1,
        holds: sum_b <= quarter_a2 && sum_shrunk > T::zero(),
        margin: min2(quarter_a2 - sum_b, sum_shrunk),
    };
    let c2 = ConditionReport {
        index: 2,
        holds: sum_b >= quarter_a2 && sum_grown < a * a / two,
        margin: min2(sum_b - quarter_a2, a * a / two - sum_grown),
    };

    let half_a = a / two;
    let sum_b_tau = b
        .iter()
        .zip(tau)
        .fold(T::zero(), |acc, (&bk, &tk)| acc + bk * tk);
    two_condition_verdict(
        TestId::Th3Const,
        StabilityClaim::ExponentiallyStable,
        [c1, c2],
        |idx| {
            let direct21 = if idx == 1 {
                half_a * (a - half_a) - sum_b
            } else {
                sum_b - quarter_a2
            };
            companion_lemma2(a, direct21, sum_b_tau)
        },
    )
}

/// Delay-dependent test for the difference form
/// `xddot + a(t) xdot + b(t) x = sum_k c_k(t) [x(t) - x(h_k(t))]`
/// (test id `th4`). Requires per-term lags.
pub fn check_th4<T: Real>(b: &CoefficientBounds<T>) -> Result<StabilityVerdict<T>> {
    checked_bounds(b)?;
    require_terms(b)?;
    let (b_lo, b_hi) = require_b_range(b)?;
    let sum_c_tau = b
        .c_abs
        .iter()
        .zip(&b.tau)
        .fold(T::zero(), |acc, (&c, &t)| acc + c * t);
    th4_shaped(
        TestId::Th4,
        StabilityClaim::ExponentiallyStable,
        b.a_lo,
        b.a_hi,
        b_lo,
        b_hi,
        sum_c_tau,
    )
}

pub(crate) fn th4_shaped<T: Real>(
    test_id: TestId,
    stable_claim: StabilityClaim,
    a_lo: T,
    a_hi: T,
    b_lo: T,
    b_hi: T,
    sum_c_tau: T,
) -> Result<StabilityVerdict<T>> {
    let two = lit::<T>(2.0);
    let four = lit::<T>(4.0);
    let half_a = a_lo / two;
    let quarter_a2 = a_lo * a_lo / four;

    let c1_gap = quarter_a2 - b_hi;
    let c1_room = (two * b_lo - a_lo * (a_hi - a_lo)) / (two * a_lo) - sum_c_tau;
    let c1 = ConditionReport {
        index: 1,
        holds: b_hi <= quarter_a2 && c1_room > T::zero(),
        margin: min2(c1_gap, c1_room),
    };

    let c2_gap = b_lo - half_a * (a_hi - half_a);
    let c2_room = (a_lo * a_lo - two * b_hi) / (two * a_lo) - sum_c_tau;
    let c2 = ConditionReport {
        index: 2,
        holds: c2_gap >= T::zero() && c2_room > T::zero(),
        margin: min2(c2_gap, c2_room),
    };

    two_condition_verdict(test_id, stable_claim, [c1, c2], |idx| {
        let direct21 = if idx == 1 {
            half_a * (a_hi - half_a) - b_lo
        } else {
            b_hi - quarter_a2
        };
        companion_lemma2(a_lo, direct21, sum_c_tau)
    })
}

/// Delay-dependent companion of [`check_th1`]: the undelayed restoring
/// coefficient is the combined `b(t) + sum_k c_k(t)` with bounds
/// `combined_lo/combined_hi`, and the difference-form conditions of
/// [`check_th4`] are applied (test id `th5`).
pub fn check_th5<T: Real>(
    a_lo: T,
    a_hi: T,
    combined_lo: T,
    combined_hi: T,
    c_abs: &[T],
    tau: &[T],
) -> Result<StabilityVerdict<T>> {
    let mut viols = Vec::new();
    if !(a_lo > T::zero()) || a_lo > a_hi {
        viols.push("damping bounds must satisfy 0 < a_lo <= a_hi".to_string());
    }
    if !(combined_lo > T::zero()) || combined_lo > combined_hi {
        viols.push("combined bounds must satisfy 0 < lo <= hi".to_string());
    }
    if c_abs.is_empty() || c_abs.len() != tau.len() {
        viols.push("C and tau lists must be nonempty and equally long".to_string());
    } else {
        if c_abs.iter().any(|&c| c < T::zero()) {
            viols.push("C entries must be nonnegative".to_string());
        }
        if tau.iter().any(|&t| t < T::zero()) {
            viols.push("tau entries must be nonnegative".to_string());
        }
    }
    if !viols.is_empty() {
        return invalid(viols);
    }
    let sum_c_tau = c_abs
        .iter()
        .zip(tau)
        .fold(T::zero(), |acc, (&c, &t)| acc + c * t);
    th4_shaped(
        TestId::Th5,
        StabilityClaim::ExponentiallyStable,
        a_lo,
        a_hi,
        combined_lo,
        combined_hi,
        sum_c_tau,
    )
}

fn need<T: Real>(v: Option<T>, name: &'static str) -> Result<T> {
    v.ok_or(Error::MissingField(name))
}

const NORM_TEST_PREMISES: [&str; 3] = [
    "a(t) >= a0 > 0 and b(t) >= b0 > 0 on the half-line",
    "a(t)^2 >= 4 b(t)",
    "integral of a over [g(t), t] stays below 1/e",
];

/// Norm-based delay test for `xddot + a(t) xdot(g(t)) + b(t) x(h(t)) = 0`
/// (test id `b2_51`): stable when
/// `delta ||a/b|| (||a|| ||b/a|| + ||b||) + tau ||b/a|| < 1`.
/// The standing assumptions about the raw coefficient functions cannot be
/// checked from norms alone and are recorded as unchecked premises.
pub fn check_b2_th51<T: Real>(n: &NormData<T>) -> Result<StabilityVerdict<T>> {
    let na = need(n.norm_a, "norm_a")?;
    let nb = need(n.norm_b, "norm_b")?;
    let nab = need(n.norm_a_over_b, "norm_a_over_b")?;
    let nba = need(n.norm_b_over_a, "norm_b_over_a")?;
    let delta = need(n.delta, "delta")?;
    let tau = need(n.tau, "tau")?;
    for (v, name) in [
        (na, "norm_a"),
        (nb, "norm_b"),
        (nab, "norm_a_over_b"),
        (nba, "norm_b_over_a"),
        (delta, "delta"),
        (tau, "tau"),
    ] {
        if v < T::zero() || !v.is_finite() {
            return invalid(vec![format!("{name} must be a finite nonnegative real")]);
        }
    }

    let lhs = delta * nab * (na * nba + nb) + tau * nba;
    let margin = T::one() - lhs;
    let holds = lhs < T::one();
    let mut verdict = StabilityVerdict::new(
        TestId::B2_51,
        if holds {
            StabilityClaim::ExponentiallyStable
        } else {
            StabilityClaim::Inconclusive
        },
    );
    verdict.condition_fired = holds.then_some(1);
    verdict.margin = Some(margin);
    verdict.conditions = vec![ConditionReport {
        index: 1,
        holds,
        margin,
    }];
    verdict.unchecked_premises = NORM_TEST_PREMISES.iter().map(|s| s.to_string()).collect();
    Ok(verdict)
}

/// Norm-based test for the perturbed equation with extra delayed damping and
/// restoring terms (test id `b2_53`): requires `||a1/a|| < 1` and
/// `||a1/b|| (||b/a|| + ||b1/a||) / (1 - ||a1/a||) + ||b1/b|| < 1`.
pub fn check_b2_th53<T: Real>(n: &NormData<T>) -> Result<StabilityVerdict<T>> {
    let na1a = need(n.norm_a1_over_a, "norm_a1_over_a")?;
    let na1b = need(n.norm_a1_over_b, "norm_a1_over_b")?;
    let nba = need(n.norm_b_over_a, "norm_b_over_a")?;
    let nb1a = need(n.norm_b1_over_a, "norm_b1_over_a")?;
    let nb1b = need(n.norm_b1_over_b, "norm_b1_over_b")?;
    for (v, name) in [
        (na1a, "norm_a1_over_a"),
        (na1b, "norm_a1_over_b"),
        (nba, "norm_b_over_a"),
        (nb1a, "norm_b1_over_a"),
        (nb1b, "norm_b1_over_b"),
    ] {
        if v < T::zero() || !v.is_finite() {
            return invalid(vec![format!("{name} must be a finite nonnegative real")]);
        }
    }

    let first_margin = T::one() - na1a;
    if !(na1a < T::one()) {
        let mut verdict = StabilityVerdict::new(TestId::B2_53, StabilityClaim::Inconclusive);
        verdict.margin = Some(first_margin);
        verdict.conditions = vec![ConditionReport {
            index: 1,
            holds: false,
            margin: first_margin,
        }];
        verdict.notes.push("first inequality fails".into());
        verdict.unchecked_premises = NORM_TEST_PREMISES.iter().map(|s| s.to_string()).collect();
        return Ok(verdict);
    }

    let lhs = na1b * (nba + nb1a) / (T::one() - na1a) + nb1b;
    let margin = min2(first_margin, T::one() - lhs);
    let holds = lhs < T::one();
    let mut verdict = StabilityVerdict::new(
        TestId::B2_53,
        if holds {
            StabilityClaim::ExponentiallyStable
        } else {
            StabilityClaim::Inconclusive
        },
    );
    verdict.condition_fired = holds.then_some(1);
    verdict.margin = Some(margin);
    verdict.conditions = vec![ConditionReport {
        index: 1,
        holds,
        margin,
    }];
    verdict.unchecked_premises = NORM_TEST_PREMISES.iter().map(|s| s.to_string()).collect();
    Ok(verdict)
}

/// Sign-pattern instability test for the autonomous equation
/// (test id `auto_unstable`).
pub fn check_autonomous_instability<T: Real>(
    p: &AutonomousParams<T>,
) -> Result<StabilityVerdict<T>> {
    let zero = T::zero();
    let c1_margin = min2(p.p1 * p.p2, min2(p.q1, p.q2));
    let c1 = ConditionReport {
        index: 1,
        holds: p.p1 * p.p2 > zero && p.q1 > zero && p.q2 > zero,
        margin: c1_margin,
    };
    let c2_margin = min2(min2(p.p1, p.p2), min2(p.q1, -p.q2));
    let c2 = ConditionReport {
        index: 2,
        holds: p.p1 > zero && p.p2 > zero && p.q1 > zero && p.q2 < zero,
        margin: c2_margin,
    };
    let fired = [&c1, &c2].iter().find(|c| c.holds).map(|c| c.index);
    let mut verdict = StabilityVerdict::new(
        TestId::AutoUnstable,
        if fired.is_some() {
            StabilityClaim::Unstable
        } else {
            StabilityClaim::Inconclusive
        },
    );
    verdict.condition_fired = fired;
    verdict.margin = Some(match fired {
        Some(1) => c1.margin,
        Some(2) => c2.margin,
        _ => max2(c1.margin, c2.margin),
    });
    verdict.conditions = vec![c1, c2];
    Ok(verdict)
}

/// Necessary-and-sufficient test for `xddot = q1 x(t) + q2 x(t - tau)`
/// with `q2 > 0` (test id `auto_iff`).
///
/// With `B = tau^2 q1` and `D = tau^2 q2`, the equation is asymptotically
/// stable iff `q1 < 0` and some window index `k` satisfies
/// `2 k pi < sqrt(-B) < (2k+1) pi` together with
/// `D < min(-(2k)^2 pi^2 - B, (2k+1)^2 pi^2 + B)`. Because the
/// characterization is exact, failure yields `NotAsymptoticallyStable`.
pub fn check_autonomous_iff<T: Real>(p: &AutonomousParams<T>) -> Result<StabilityVerdict<T>> {
    if p.p1 != T::zero() || p.p2 != T::zero() || !(p.q2 > T::zero()) {
        return Err(Error::Precondition(
            "theorem requires p1=p2=0, q2>0".into(),
        ));
    }
    if !(p.tau > T::zero()) {
        return invalid(vec!["tau must be positive".into()]);
    }

    let pi = T::PI();
    let b_cap = p.tau * p.tau * p.q1;
    let d_cap = p.tau * p.tau * p.q2;

    let mut verdict = StabilityVerdict::new(TestId::AutoIff, StabilityClaim::NotAsymptoticallyStable);
    if !(p.q1 < T::zero()) {
        verdict.notes.push("q1 < 0 is required".into());
        return Ok(verdict);
    }

    let root = (-b_cap).sqrt();
    let k_max = (root / (pi + pi)).ceil().to_u32().unwrap_or(0);
    for k in 0..=k_max {
        let kf = lit::<T>(f64::from(k));
        let lo = (kf + kf) * pi;
        let hi = (kf + kf + T::one()) * pi;
        if lo < root && root < hi {
            let even_sq = lo * lo; // (2k pi)^2
            let odd_sq = hi * hi; // ((2k+1) pi)^2
            let cap = min2(-even_sq - b_cap, odd_sq + b_cap);
            let window_margin = min2(root - lo, hi - root);
            if d_cap < cap {
                verdict.claim = StabilityClaim::ExponentiallyStable;
                verdict.condition_fired = Some(1);
                verdict.certificate = Some(Certificate::FrequencyWindow { k });
                verdict.margin = Some(min2(window_margin, cap - d_cap));
                verdict
                    .notes
                    .push("asymptotic stability is exponential for the autonomous equation".into());
            } else {
                verdict.margin = Some(cap - d_cap);
                verdict.certificate = Some(Certificate::FrequencyWindow { k });
                verdict
                    .notes
                    .push("frequency window found but the delayed weight is too large".into());
            }
            return Ok(verdict);
        }
    }
    verdict
        .notes
        .push("sqrt(-tau^2 q1) falls in no admissible frequency window".into());
    Ok(verdict)
}
