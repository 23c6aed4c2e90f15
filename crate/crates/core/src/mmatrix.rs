//! Nonsingular M-matrix verification and the companion matrices used as
//! stability certificates.
//!
//! A square matrix with nonpositive off-diagonal entries is a nonsingular
//! M-matrix iff all its leading principal minors are strictly positive,
//! equivalently iff its inverse is entrywise nonnegative (strictly positive
//! in the irreducible case). The stability tests in [`crate::linstab`]
//! attach a 2x2 matrix built by [`lemma1_matrix`] / [`lemma2_matrix`] and
//! certify it here.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{lit, Real};

/// Largest supported dimension. The certificates produced by the stability
/// tests are 2x2; the cap keeps minor arithmetic near machine precision.
pub const MAX_DIM: usize = 8;

/// Small dense square matrix, row-major storage.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RealMatrix<T> {
    n: usize,
    entries: Vec<T>,
}

impl<T: Real> RealMatrix<T> {
    /// Builds an `n x n` matrix from row-major entries.
    pub fn new(n: usize, entries: Vec<T>) -> Result<Self> {
        if n == 0 {
            return Err(Error::Matrix("dimension must be at least 1".into()));
        }
        if n > MAX_DIM {
            return Err(Error::Matrix(format!(
                "dimension {n} exceeds supported maximum {MAX_DIM}"
            )));
        }
        if entries.len() != n * n {
            return Err(Error::Matrix(format!(
                "expected {} entries for a {n}x{n} matrix, got {}",
                n * n,
                entries.len()
            )));
        }
        if entries.iter().any(|e| !e.is_finite()) {
            return Err(Error::Matrix("entries must be finite".into()));
        }
        Ok(Self { n, entries })
    }

    pub fn from_rows(rows: &[Vec<T>]) -> Result<Self> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::Matrix("rows must form a square matrix".into()));
            }
            entries.extend_from_slice(row);
        }
        Self::new(n, entries)
    }

    pub fn identity(n: usize) -> Result<Self> {
        let mut entries = vec![T::zero(); n * n];
        for i in 0..n {
            entries[i * n + i] = T::one();
        }
        Self::new(n, entries)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        self.entries[i * self.n + j]
    }

    pub fn entries(&self) -> &[T] {
        &self.entries
    }

    fn max_abs_entry(&self) -> f64 {
        self.entries
            .iter()
            .map(|e| e.to_f64().unwrap_or(f64::NAN).abs())
            .fold(0.0, f64::max)
    }
}

/// Outcome of the M-matrix test.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MMatrixCertificate<T> {
    pub is_m_matrix: bool,
    /// All off-diagonal entries nonpositive.
    pub offdiag_ok: bool,
    /// Leading principal minors, order 1..n.
    pub leading_minors: Vec<T>,
    /// 1-based order of the first minor that fails the positivity test.
    pub failing_index: Option<usize>,
}

/// Tests whether `m` is a nonsingular M-matrix.
///
/// Off-diagonal entries must be `<= 0` and every leading principal minor
/// strictly positive. A minor of order `k` counts as positive iff it
/// exceeds `1e-12 * (max |entry|)^k`, so strict inequalities are never
/// granted by roundoff alone. Minors are accumulated in `f64` regardless
/// of the working scalar type.
pub fn is_nonsingular_m_matrix<T: Real>(m: &RealMatrix<T>) -> MMatrixCertificate<T> {
    let n = m.dim();
    let mut offdiag_ok = true;
    for i in 0..n {
        for j in 0..n {
            if i != j && m.get(i, j) > T::zero() {
                offdiag_ok = false;
            }
        }
    }

    let minors = leading_minors_f64(m);
    let scale = m.max_abs_entry();
    let mut failing_index = None;
    for (idx, &minor) in minors.iter().enumerate() {
        let order = idx + 1;
        let tol = 1e-12 * scale.powi(order as i32);
        if !(minor > tol) {
            failing_index = Some(order);
            break;
        }
    }

    MMatrixCertificate {
        is_m_matrix: offdiag_ok && failing_index.is_none(),
        offdiag_ok,
        leading_minors: minors.into_iter().map(|d| lit::<T>(d)).collect(),
        failing_index,
    }
}

/// Leading principal minors via fraction-free (Bareiss) elimination in f64.
/// Falls back to pivoted elimination per submatrix once a pivot degenerates.
fn leading_minors_f64<T: Real>(m: &RealMatrix<T>) -> Vec<f64> {
    let n = m.dim();
    let mut a: Vec<f64> = m
        .entries()
        .iter()
        .map(|e| e.to_f64().unwrap_or(f64::NAN))
        .collect();
    let scale = m.max_abs_entry();
    let mut minors = vec![0.0; n];
    let mut prev = 1.0;
    for k in 0..n {
        let pivot = a[k * n + k];
        minors[k] = pivot;
        if k + 1 == n {
            break;
        }
        // A degenerate pivot would poison the fraction-free update; finish
        // the remaining minors with independent pivoted eliminations.
        if pivot.abs() <= 1e-14 * scale.powi((k + 1) as i32) || !pivot.is_finite() {
            for (order, minor) in minors.iter_mut().enumerate().skip(k) {
                *minor = det_leading(m, order + 1);
            }
            break;
        }
        for i in (k + 1)..n {
            for j in (k + 1)..n {
                a[i * n + j] = (pivot * a[i * n + j] - a[i * n + k] * a[k * n + j]) / prev;
            }
        }
        prev = pivot;
    }
    minors
}

/// Determinant of the leading `k x k` block via partial-pivot elimination.
fn det_leading<T: Real>(m: &RealMatrix<T>, k: usize) -> f64 {
    let n = m.dim();
    let mut a = vec![0.0f64; k * k];
    for i in 0..k {
        for j in 0..k {
            a[i * k + j] = m.entries()[i * n + j].to_f64().unwrap_or(f64::NAN);
        }
    }
    let mut det = 1.0;
    for col in 0..k {
        let mut piv = col;
        for row in (col + 1)..k {
            if a[row * k + col].abs() > a[piv * k + col].abs() {
                piv = row;
            }
        }
        if a[piv * k + col] == 0.0 {
            return 0.0;
        }
        if piv != col {
            for j in 0..k {
                a.swap(col * k + j, piv * k + j);
            }
            det = -det;
        }
        det *= a[col * k + col];
        for row in (col + 1)..k {
            let f = a[row * k + col] / a[col * k + col];
            for j in col..k {
                a[row * k + j] -= f * a[col * k + j];
            }
        }
    }
    det
}

fn check_rates<T: Real>(alpha: &[T], n: usize) -> Result<()> {
    if alpha.len() != n {
        return Err(Error::Matrix(format!(
            "expected {n} decay rates, got {}",
            alpha.len()
        )));
    }
    if alpha.iter().any(|&a| !(a > T::zero()) || !a.is_finite()) {
        return Err(Error::Precondition("alpha must be positive".into()));
    }
    Ok(())
}

fn check_nonnegative<T: Real>(m: &RealMatrix<T>, name: &str) -> Result<()> {
    if m.entries().iter().any(|&e| e < T::zero()) {
        return Err(Error::Precondition(format!(
            "{name} entries must be nonnegative"
        )));
    }
    Ok(())
}

/// Companion matrix for a diagonally damped system with delayed couplings:
/// `b_ii = 1 - L_ii / alpha_i`, `b_ij = -L_ij / alpha_i` for `i != j`,
/// where `L_ij` bounds the summed coupling magnitudes into equation `i`.
pub fn lemma1_matrix<T: Real>(alpha: &[T], coupling: &RealMatrix<T>) -> Result<RealMatrix<T>> {
    let n = coupling.dim();
    check_rates(alpha, n)?;
    check_nonnegative(coupling, "coupling")?;
    let mut entries = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let scaled = coupling.get(i, j) / alpha[i];
            entries.push(if i == j { T::one() - scaled } else { -scaled });
        }
    }
    RealMatrix::new(n, entries)
}

/// Companion matrix when couplings enter both directly and through running
/// integrals over a delay window: the effective bound per entry is
/// `L_ij * sigma_ij + C_ij` with `sigma_ij` the window length.
pub fn lemma2_matrix<T: Real>(
    alpha: &[T],
    integral: &RealMatrix<T>,
    window: &RealMatrix<T>,
    direct: &RealMatrix<T>,
) -> Result<RealMatrix<T>> {
    let n = integral.dim();
    if window.dim() != n || direct.dim() != n {
        return Err(Error::Matrix("bound matrices must share one dimension".into()));
    }
    check_rates(alpha, n)?;
    check_nonnegative(integral, "integral")?;
    check_nonnegative(window, "window")?;
    check_nonnegative(direct, "direct")?;
    let mut entries = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let combined = integral.get(i, j) * window.get(i, j) + direct.get(i, j);
            let scaled = combined / alpha[i];
            entries.push(if i == j { T::one() - scaled } else { -scaled });
        }
    }
    RealMatrix::new(n, entries)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: &[&[f64]]) -> RealMatrix<f64> {
        RealMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn identity_is_m_matrix() {
        let cert = is_nonsingular_m_matrix(&RealMatrix::<f64>::identity(2).unwrap());
        assert!(cert.is_m_matrix);
        assert!(cert.offdiag_ok);
        assert_eq!(cert.leading_minors, vec![1.0, 1.0]);
        assert_eq!(cert.failing_index, None);
    }

    #[test]
    fn weak_coupling_passes() {
        let cert = is_nonsingular_m_matrix(&mat(&[&[1.0, -2.0 / 3.0], &[-2.0 / 3.0, 1.0]]));
        assert!(cert.is_m_matrix);
        assert!((cert.leading_minors[0] - 1.0).abs() < 1e-15);
        assert!((cert.leading_minors[1] - 5.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn strong_coupling_fails_second_minor() {
        let cert = is_nonsingular_m_matrix(&mat(&[&[1.0, -2.0], &[-2.0, 1.0]]));
        assert!(!cert.is_m_matrix);
        assert!(cert.offdiag_ok);
        assert!((cert.leading_minors[1] + 3.0).abs() < 1e-15);
        assert_eq!(cert.failing_index, Some(2));
    }

    #[test]
    fn positive_offdiagonal_disqualifies() {
        let cert = is_nonsingular_m_matrix(&mat(&[&[1.0, 0.5], &[0.0, 1.0]]));
        assert!(!cert.is_m_matrix);
        assert!(!cert.offdiag_ok);
    }

    #[test]
    fn lemma1_no_coupling_gives_identity() {
        let l = mat(&[&[0.0, 0.0], &[0.0, 0.0]]);
        let b = lemma1_matrix(&[1.0, 1.0], &l).unwrap();
        assert_eq!(b, RealMatrix::identity(2).unwrap());
    }

    #[test]
    fn lemma1_scales_by_rate() {
        let l = mat(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let b = lemma1_matrix(&[2.0, 2.0], &l).unwrap();
        assert_eq!(b, mat(&[&[1.0, -0.5], &[-0.5, 1.0]]));
    }

    #[test]
    fn lemma1_self_coupling_can_break_m_property() {
        let l = RealMatrix::new(1, vec![2.0]).unwrap();
        let b = lemma1_matrix(&[1.0], &l).unwrap();
        assert_eq!(b.entries(), &[-1.0]);
        assert!(!is_nonsingular_m_matrix(&b).is_m_matrix);
    }

    #[test]
    fn lemma1_rejects_nonpositive_rate() {
        let l = mat(&[&[0.0, 0.0], &[0.0, 0.0]]);
        let err = lemma1_matrix(&[0.0, 1.0], &l).unwrap_err();
        assert_eq!(err, Error::Precondition("alpha must be positive".into()));
    }

    #[test]
    fn lemma2_zero_bounds_give_identity() {
        let z = mat(&[&[0.0, 0.0], &[0.0, 0.0]]);
        let b = lemma2_matrix(&[1.0, 1.0], &z, &z, &z).unwrap();
        assert_eq!(b, RealMatrix::identity(2).unwrap());
    }

    #[test]
    fn lemma2_combines_window_and_direct_terms() {
        let l = mat(&[&[0.0, 1.0], &[0.0, 0.0]]);
        let s = mat(&[&[0.0, 0.5], &[0.0, 0.0]]);
        let z = mat(&[&[0.0, 0.0], &[0.0, 0.0]]);
        let b = lemma2_matrix(&[2.0, 2.0], &l, &s, &z).unwrap();
        assert_eq!(b, mat(&[&[1.0, -0.25], &[0.0, 1.0]]));
    }

    #[test]
    fn lemma2_direct_coupling_can_break_m_property() {
        let z = mat(&[&[0.0, 0.0], &[0.0, 0.0]]);
        let c = mat(&[&[0.0, 3.0], &[3.0, 0.0]]);
        let b = lemma2_matrix(&[1.0, 1.0], &z, &z, &c).unwrap();
        assert_eq!(b, mat(&[&[1.0, -3.0], &[-3.0, 1.0]]));
        assert!(!is_nonsingular_m_matrix(&b).is_m_matrix);
    }

    #[test]
    fn dimension_cap_enforced() {
        let err = RealMatrix::<f64>::identity(9).unwrap_err();
        assert!(matches!(err, Error::Matrix(_)));
    }
}
