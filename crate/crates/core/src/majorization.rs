//! Classical majorization `x ≺ y` on R^N and its doubly stochastic
//! certificates.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::function::ScalarFunction;
use crate::report::InequalityReport;

/// Residual bound on `‖x − Ay‖∞` for a certificate returned by
/// [`hlp_transfer_matrix`] when the inputs are exactly majorized.
pub const TRANSFER_RESIDUAL: f64 = 1e-10;

/// Indices ordering `x` decreasingly; ties keep the original order.
pub fn decreasing_order(x: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..x.len()).collect();
    idx.sort_by(|&i, &j| x[j].total_cmp(&x[i]));
    idx
}

/// `x↓`
pub fn decreasing_rearrangement(x: &[f64]) -> Vec<f64> {
    decreasing_order(x).into_iter().map(|i| x[i]).collect()
}

fn check_lengths(x: &[f64], y: &[f64]) -> Result<()> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    if x.is_empty() {
        return Err(Error::InvalidInput("majorization needs nonempty vectors".into()));
    }
    Ok(())
}

/// Largest violation of the majorization conditions: the maximum over
/// `k < N` of `Σᵏ x↓ − Σᵏ y↓` together with `|Σ x − Σ y|`. Nonpositive
/// partial-sum gaps and a zero total gap mean `x ≺ y`.
pub fn majorization_gap(x: &[f64], y: &[f64]) -> Result<f64> {
    check_lengths(x, y)?;
    let xs = decreasing_rearrangement(x);
    let ys = decreasing_rearrangement(y);
    let n = xs.len();
    let (mut sx, mut sy) = (0.0, 0.0);
    let mut gap = f64::NEG_INFINITY;
    for k in 0..n {
        sx += xs[k];
        sy += ys[k];
        if k + 1 < n {
            gap = gap.max(sx - sy);
        }
    }
    Ok(gap.max((sx - sy).abs()))
}

pub fn is_majorized(x: &[f64], y: &[f64], tol: f64) -> Result<bool> {
    Ok(majorization_gap(x, y)? <= tol)
}

/// A nonnegative square matrix with unit row and column sums.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DoublyStochasticMatrix {
    entries: Vec<Vec<f64>>,
}

impl DoublyStochasticMatrix {
    pub fn new(entries: Vec<Vec<f64>>, tol: f64) -> Result<Self> {
        if !is_doubly_stochastic(&entries, tol)? {
            return Err(Error::InvalidInput("matrix is not doubly stochastic".into()));
        }
        Ok(Self { entries })
    }

    pub fn identity(n: usize) -> Self {
        let entries = (0..n)
            .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
            .collect();
        Self { entries }
    }

    pub fn order(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[Vec<f64>] {
        &self.entries
    }

    pub fn apply(&self, y: &[f64]) -> Vec<f64> {
        mat_vec(&self.entries, y)
    }

    pub fn into_entries(self) -> Vec<Vec<f64>> {
        self.entries
    }
}

pub(crate) fn mat_vec(a: &[Vec<f64>], y: &[f64]) -> Vec<f64> {
    a.iter()
        .map(|row| row.iter().zip(y).map(|(a, y)| a * y).sum())
        .collect()
}

pub fn is_doubly_stochastic(a: &[Vec<f64>], tol: f64) -> Result<bool> {
    let n = a.len();
    if let Some(row) = a.iter().find(|r| r.len() != n) {
        return Err(Error::InvalidInput(format!(
            "matrix is not square: {n} rows, a row of length {}",
            row.len()
        )));
    }
    let nonneg = a.iter().flatten().all(|&v| v >= -tol);
    let rows = a.iter().all(|r| (r.iter().sum::<f64>() - 1.0).abs() <= tol);
    let cols = (0..n).all(|j| (a.iter().map(|r| r[j]).sum::<f64>() - 1.0).abs() <= tol);
    Ok(nonneg && rows && cols)
}

/// Builds a doubly stochastic `A` with `x = A y` from a chain of at most
/// `N − 1` T-transforms on the decreasing rearrangements.
///
/// At each step `j` is the last index where the current vector `z` exceeds
/// `x↓` and `k` the first later index where it falls short; mass
/// `δ = min(z_j − x_j, x_k − z_k)` moves from `j` to `k`, which fixes one
/// more coordinate and keeps `z` sorted.
pub fn hlp_transfer_matrix(x: &[f64], y: &[f64], tol: f64) -> Result<DoublyStochasticMatrix> {
    let gap = majorization_gap(x, y)?;
    if gap > tol {
        return Err(Error::NotMajorized(format!("majorization conditions fail by {gap:e}")));
    }
    let n = x.len();
    let px = decreasing_order(x);
    let py = decreasing_order(y);
    let xs: Vec<f64> = px.iter().map(|&i| x[i]).collect();
    let mut z: Vec<f64> = py.iter().map(|&i| y[i]).collect();

    let scale = xs.iter().chain(&z).fold(0.0f64, |m, v| m.max(v.abs())).max(1.0);
    let eps = 8.0 * f64::EPSILON * scale * n as f64;

    // m[r] holds the sorted-space row r of the composed transform
    let mut m = DoublyStochasticMatrix::identity(n).into_entries();
    for _ in 0..n {
        let Some(j) = (0..n).rev().find(|&i| z[i] > xs[i] + eps) else {
            break;
        };
        let Some(k) = (j + 1..n).find(|&i| z[i] < xs[i] - eps) else {
            break;
        };
        let spread = z[j] - z[k];
        let delta = (z[j] - xs[j]).min(xs[k] - z[k]);
        let keep = 1.0 - delta / spread;
        if delta == z[j] - xs[j] {
            z[k] += delta;
            z[j] = xs[j];
        } else {
            z[j] -= delta;
            z[k] = xs[k];
        }
        let (rj, rk) = (m[j].clone(), m[k].clone());
        for c in 0..n {
            m[j][c] = keep * rj[c] + (1.0 - keep) * rk[c];
            m[k][c] = (1.0 - keep) * rj[c] + keep * rk[c];
        }
    }

    let mut a = vec![vec![0.0; n]; n];
    for r in 0..n {
        for s in 0..n {
            a[px[r]][py[s]] = m[r][s];
        }
    }
    let residual = mat_vec(&a, y)
        .iter()
        .zip(x)
        .map(|(ay, x)| (ay - x).abs())
        .fold(0.0, f64::max);
    let allowed = TRANSFER_RESIDUAL.max(2.0 * n as f64 * tol);
    if residual > allowed {
        return Err(Error::NoConvergence {
            iterations: n,
            detail: format!("T-transform chain left residual {residual:e}"),
        });
    }
    Ok(DoublyStochasticMatrix { entries: a })
}

/// `Σ f(xᵢ) ≤ Σ f(yᵢ)` with both sides reported.
pub fn hlp_convex_sum_check(x: &[f64], y: &[f64], f: &ScalarFunction, tol: f64) -> Result<InequalityReport> {
    check_lengths(x, y)?;
    f.check_domain(x)?;
    f.check_domain(y)?;
    let lhs = x.iter().map(|&t| f.value(t)).sum();
    let rhs = y.iter().map(|&t| f.value(t)).sum();
    Ok(InequalityReport::le(lhs, rhs, tol))
}
