//! Symmetric matrices, their spectra, and functional calculus through the
//! spectrum.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::function::ScalarFunction;
use crate::majorization::is_majorized;
use crate::measures::Interval;
use crate::report::InequalityReport;

pub const MAX_SWEEPS: usize = 100;
pub const DEFAULT_EIGEN_TOL: f64 = 1e-14;

/// Dense symmetric matrix, row-major.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SymmetricMatrix {
    n: usize,
    data: Vec<f64>,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
pub struct MatrixFile {
    pub n: usize,
    pub entries: Vec<Vec<f64>>,
}

impl SymmetricMatrix {
    pub fn new(entries: Vec<Vec<f64>>) -> Result<Self> {
        let n = entries.len();
        if n == 0 {
            return Err(Error::InvalidInput("empty matrix".into()));
        }
        if let Some(r) = entries.iter().find(|r| r.len() != n) {
            return Err(Error::InvalidInput(format!(
                "matrix is not square: {n} rows, a row of length {}",
                r.len()
            )));
        }
        let data: Vec<f64> = entries.into_iter().flatten().collect();
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("non-finite matrix entry".into()));
        }
        let m = Self { n, data };
        let tol = 1e-12 * m.norm_inf().max(1.0);
        for i in 0..n {
            for j in i + 1..n {
                if (m.get(i, j) - m.get(j, i)).abs() > tol {
                    return Err(Error::InvalidInput(format!("entries ({i},{j}) and ({j},{i}) differ")));
                }
            }
        }
        Ok(m)
    }

    pub fn diagonal(values: &[f64]) -> Self {
        let n = values.len();
        let mut data = vec![0.0; n * n];
        for (i, v) in values.iter().enumerate() {
            data[i * n + i] = *v;
        }
        Self { n, data }
    }

    pub fn identity(n: usize) -> Self {
        Self::diagonal(&vec![1.0; n])
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let file: MatrixFile = serde_json::from_str(s).map_err(|e| Error::InvalidInput(format!("matrix JSON: {e}")))?;
        if file.entries.len() != file.n {
            return Err(Error::DimensionMismatch {
                expected: file.n,
                found: file.entries.len(),
            });
        }
        Self::new(file.entries)
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.data.chunks(self.n).map(<[f64]>::to_vec).collect()
    }

    pub fn diag(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.get(i, i)).collect()
    }

    pub fn trace(&self) -> f64 {
        self.diag().iter().sum()
    }

    /// Maximum absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        self.data
            .chunks(self.n)
            .map(|r| r.iter().map(|v| v.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn norm_frobenius(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// `Σ λₖ Aₖ`
    pub fn weighted_sum(weights: &[f64], mats: &[SymmetricMatrix]) -> Result<Self> {
        let Some(first) = mats.first() else {
            return Err(Error::InvalidInput("no matrices".into()));
        };
        if weights.len() != mats.len() {
            return Err(Error::LengthMismatch {
                left: weights.len(),
                right: mats.len(),
            });
        }
        let n = first.n;
        let mut data = vec![0.0; n * n];
        for (w, m) in weights.iter().zip(mats) {
            if m.n != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: m.n,
                });
            }
            for (d, v) in data.iter_mut().zip(&m.data) {
                *d += w * v;
            }
        }
        Ok(Self { n, data })
    }

    /// `Qᵀ A Q` for a row-major square `q`, symmetrized.
    pub fn conjugate(&self, q: &[f64]) -> Self {
        let n = self.n;
        let mut aq = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                aq[i * n + j] = (0..n).map(|k| self.get(i, k) * q[k * n + j]).sum();
            }
        }
        let mut out = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                out[i * n + j] = (0..n).map(|k| q[k * n + i] * aq[k * n + j]).sum();
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                let v = 0.5 * (out[i * n + j] + out[j * n + i]);
                out[i * n + j] = v;
                out[j * n + i] = v;
            }
        }
        Self { n, data: out }
    }
}

/// Eigenvalues in decreasing order with matching orthonormal eigenvectors
/// stored as the columns of `vectors` (row-major).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EigenDecomposition {
    pub values: Vec<f64>,
    pub vectors: Vec<f64>,
    pub sweeps: usize,
}

impl EigenDecomposition {
    /// `‖A Q − Q diag(values)‖∞` (max absolute row sum).
    pub fn residual(&self, a: &SymmetricMatrix) -> f64 {
        let n = a.n;
        let q = &self.vectors;
        let mut worst = 0.0f64;
        for i in 0..n {
            let mut row = 0.0;
            for j in 0..n {
                let aq: f64 = (0..n).map(|k| a.get(i, k) * q[k * n + j]).sum();
                row += (aq - q[i * n + j] * self.values[j]).abs();
            }
            worst = worst.max(row);
        }
        worst
    }

    /// `‖QᵀQ − I‖∞`
    pub fn orthogonality_defect(&self) -> f64 {
        let n = self.values.len();
        let q = &self.vectors;
        let mut worst = 0.0f64;
        for i in 0..n {
            let mut row = 0.0;
            for j in 0..n {
                let dot: f64 = (0..n).map(|k| q[k * n + i] * q[k * n + j]).sum();
                row += (dot - if i == j { 1.0 } else { 0.0 }).abs();
            }
            worst = worst.max(row);
        }
        worst
    }
}

/// Cyclic-by-row Jacobi: sweep over every `(p, q)` with `p < q`, zeroing
/// `a_pq` with a plane rotation, until the off-diagonal Frobenius norm is at
/// most `tol·‖A‖_F` or [`MAX_SWEEPS`] sweeps have run.
pub fn jacobi_eigen(a: &SymmetricMatrix, tol: f64) -> EigenDecomposition {
    let n = a.n;
    let mut m = a.data.clone();
    let mut v = SymmetricMatrix::identity(n).data;
    let target = tol * a.norm_frobenius();
    let off = |m: &[f64]| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += m[i * n + j] * m[i * n + j];
                }
            }
        }
        s.sqrt()
    };

    let mut sweeps = 0;
    while sweeps < MAX_SWEEPS && off(&m) > target {
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let (app, aqq) = (m[p * n + p], m[q * n + q]);
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + theta.hypot(1.0));
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / t.hypot(1.0);
                let s = t * c;

                for k in 0..n {
                    let (akp, akq) = (m[k * n + p], m[k * n + q]);
                    m[k * n + p] = c * akp - s * akq;
                    m[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (m[p * n + k], m[q * n + k]);
                    m[p * n + k] = c * apk - s * aqk;
                    m[q * n + k] = s * apk + c * aqk;
                }
                m[p * n + q] = 0.0;
                m[q * n + p] = 0.0;
                for k in 0..n {
                    let (vkp, vkq) = (v[k * n + p], v[k * n + q]);
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }

    let diag: Vec<f64> = (0..n).map(|i| m[i * n + i]).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| diag[j].total_cmp(&diag[i]));
    let values = order.iter().map(|&i| diag[i]).collect();
    let mut vectors = vec![0.0; n * n];
    for (col, &src) in order.iter().enumerate() {
        for k in 0..n {
            vectors[k * n + col] = v[k * n + src];
        }
    }
    EigenDecomposition {
        values,
        vectors,
        sweeps,
    }
}

pub fn eigenvalues(a: &SymmetricMatrix) -> Vec<f64> {
    jacobi_eigen(a, DEFAULT_EIGEN_TOL).values
}

/// `trace f(A) = Σ f(λᵢ(A))`
pub fn trace_f(a: &SymmetricMatrix, f: &ScalarFunction) -> Result<f64> {
    let eig = eigenvalues(a);
    f.check_domain(&eig)?;
    Ok(eig.iter().map(|&l| f.value(l)).sum())
}

pub fn spectrum_in(a: &SymmetricMatrix, region: &Interval, tol: f64) -> bool {
    eigenvalues(a).iter().all(|&l| region.contains_tol(l, tol))
}

/// `(−∞, −2]`, where `t·e^t` is concave.
pub fn concave_xexp_range() -> Interval {
    Interval {
        lo: f64::NEG_INFINITY,
        hi: -2.0,
        lo_open: true,
        hi_open: false,
    }
}

/// `[−2, ∞)`, where `t·e^t` is convex.
pub fn convex_xexp_range() -> Interval {
    Interval {
        lo: -2.0,
        hi: f64::INFINITY,
        lo_open: false,
        hi_open: true,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SpectrumSet {
    /// spectrum in (−∞, −2]
    ConcaveRange,
    /// spectrum in [−2, ∞)
    ConvexRange,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceInequalityReport {
    pub membership: Vec<SpectrumSet>,
    pub mean_min_eigenvalue: f64,
    pub inequality: InequalityReport,
}

impl TraceInequalityReport {
    pub fn holds(&self) -> bool {
        self.inequality.holds()
    }
}

/// `Σ λₖ trace(Aₖ e^{Aₖ}) ≥ trace(M e^M)` with `M = Σ λₖ Aₖ ⪰ −I`, for
/// matrices whose spectra lie in `(−∞, −2]` or in `[−2, ∞)`.
pub fn trace_inequality_verify(lambdas: &[f64], mats: &[SymmetricMatrix], tol: f64) -> Result<TraceInequalityReport> {
    if lambdas.len() != mats.len() {
        return Err(Error::LengthMismatch {
            left: lambdas.len(),
            right: mats.len(),
        });
    }
    if let Some(l) = lambdas.iter().find(|l| !(**l > 0.0)) {
        return Err(Error::InvalidInput(format!("weight {l} is not positive")));
    }
    let total: f64 = lambdas.iter().sum();
    if (total - 1.0).abs() > tol {
        return Err(Error::InvalidInput(format!("weights sum to {total}, not 1")));
    }
    let mean = SymmetricMatrix::weighted_sum(lambdas, mats)?;

    let xexp = ScalarFunction::xexp();
    let mut membership = Vec::with_capacity(mats.len());
    let mut lhs = 0.0;
    for (k, (l, a)) in lambdas.iter().zip(mats).enumerate() {
        let eig = eigenvalues(a);
        let set = if eig.iter().all(|&e| concave_xexp_range().contains_tol(e, tol)) {
            SpectrumSet::ConcaveRange
        } else if eig.iter().all(|&e| convex_xexp_range().contains_tol(e, tol)) {
            SpectrumSet::ConvexRange
        } else {
            return Err(Error::Hypothesis(format!(
                "matrix {k} has spectrum {eig:?}, in neither (-inf, -2] nor [-2, inf)"
            )));
        };
        membership.push(set);
        lhs += l * eig.iter().map(|&e| xexp.value(e)).sum::<f64>();
    }

    let mean_eig = eigenvalues(&mean);
    let mean_min_eigenvalue = mean_eig.last().copied().unwrap_or(f64::NAN);
    if mean_min_eigenvalue < -1.0 - tol {
        return Err(Error::Hypothesis(format!(
            "weighted mean matrix has eigenvalue {mean_min_eigenvalue} < -1, so it is not >= -I"
        )));
    }
    let rhs = mean_eig.iter().map(|&e| xexp.value(e)).sum();
    Ok(TraceInequalityReport {
        membership,
        mean_min_eigenvalue,
        inequality: InequalityReport::ge(lhs, rhs, tol),
    })
}

/// Diagonal majorized by the spectrum.
pub fn schur_horn_check(a: &SymmetricMatrix, tol: f64) -> Result<bool> {
    is_majorized(&a.diag(), &eigenvalues(a), tol)
}

/// Orthogonal matrix (row-major) as a product of plane rotations
/// `(p, q, angle)`.
pub fn rotations_product(n: usize, rotations: &[(usize, usize, f64)]) -> Vec<f64> {
    let mut q = SymmetricMatrix::identity(n).data;
    for &(p, r, angle) in rotations {
        let (s, c) = angle.sin_cos();
        for k in 0..n {
            let (qkp, qkr) = (q[k * n + p], q[k * n + r]);
            q[k * n + p] = c * qkp - s * qkr;
            q[k * n + r] = s * qkp + c * qkr;
        }
    }
    q
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[f64]]) -> SymmetricMatrix {
        SymmetricMatrix::new(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    #[test]
    fn eigen_examples() {
        let e = jacobi_eigen(&SymmetricMatrix::identity(3), 1e-14);
        assert_eq!(e.values, vec![1.0; 3]);
        let d = SymmetricMatrix::diagonal(&[1.0, 3.0]);
        let e = jacobi_eigen(&d, 1e-14);
        assert_eq!(e.values, vec![3.0, 1.0]);
        assert_eq!(
            e.vectors.iter().map(|v| v.abs()).collect::<Vec<_>>(),
            vec![0.0, 1.0, 1.0, 0.0]
        );
        let a = m(&[&[2.0, 1.0], &[1.0, 2.0]]);
        let e = jacobi_eigen(&a, 1e-14);
        assert!((e.values[0] - 3.0).abs() < 1e-14 && (e.values[1] - 1.0).abs() < 1e-14);
        assert!(e.residual(&a) < 1e-14);
        assert!(e.orthogonality_defect() < 1e-14);
    }

    #[test]
    fn construction_errors() {
        assert!(SymmetricMatrix::new(vec![vec![1.0, 2.0], vec![0.0, 1.0]]).is_err());
        assert!(SymmetricMatrix::new(vec![vec![1.0, 2.0]]).is_err());
        assert!(SymmetricMatrix::from_json_str(r#"{"n": 2, "entries": [[1, 0], [0, 1]]}"#).is_ok());
        assert!(SymmetricMatrix::from_json_str(r#"{"n": 3, "entries": [[1, 0], [0, 1]]}"#).is_err());
    }

    #[test]
    fn trace_examples() {
        let f = ScalarFunction::xexp();
        let t = trace_f(&SymmetricMatrix::identity(3), &f).unwrap();
        assert!((t - 3.0 * std::f64::consts::E).abs() < 1e-14);
        let t = trace_f(&SymmetricMatrix::diagonal(&[-2.0, 0.0]), &f).unwrap();
        assert!((t + 2.0 * (-2.0f64).exp()).abs() < 1e-15);
        assert!((t + 0.2707).abs() < 1e-4);
        let a = m(&[&[1.0, 0.5, -2.0], &[0.5, 3.0, 0.1], &[-2.0, 0.1, -4.0]]);
        assert!((trace_f(&a, &ScalarFunction::identity()).unwrap() - a.trace()).abs() < 1e-9);
        let err = trace_f(&SymmetricMatrix::diagonal(&[-1.0, 2.0]), &ScalarFunction::log_squared()).unwrap_err();
        assert_eq!(
            err,
            Error::OutsideDomain {
                function: "log2".into(),
                point: vec![-1.0]
            }
        );
    }

    #[test]
    fn spectrum_examples() {
        assert!(spectrum_in(
            &SymmetricMatrix::diagonal(&[-3.0, -2.0]),
            &concave_xexp_range(),
            1e-12
        ));
        assert!(!spectrum_in(
            &SymmetricMatrix::diagonal(&[-3.0, 0.0]),
            &concave_xexp_range(),
            1e-12
        ));
        assert!(spectrum_in(
            &m(&[&[2.0, 1.0], &[1.0, 2.0]]),
            &convex_xexp_range(),
            1e-12
        ));
    }

    #[test]
    fn trace_inequality_examples() {
        let a = m(&[&[0.3, 0.2], &[0.2, -0.7]]);
        let r = trace_inequality_verify(&[1.0], &[a], 1e-9).unwrap();
        assert!(r.inequality.slack().abs() < 1e-12);

        let a1 = SymmetricMatrix::diagonal(&[2.0, 0.0]);
        let a2 = SymmetricMatrix::diagonal(&[-2.0, 0.0]);
        let r = trace_inequality_verify(&[0.5, 0.5], &[a1, a2], 1e-9).unwrap();
        let lhs = (2.0 * 2f64.exp() - 2.0 * (-2.0f64).exp()) / 2.0;
        assert!((r.inequality.lhs - lhs).abs() < 1e-12);
        assert!((r.inequality.lhs - 7.2537).abs() < 1e-4);
        assert_eq!(r.inequality.rhs, 0.0);
        assert!(r.holds());

        let a1 = m(&[&[2.0, 1.0], &[1.0, 2.0]]);
        let a2 = SymmetricMatrix::diagonal(&[1.0, 3.0]);
        let r = trace_inequality_verify(&[0.5, 0.5], &[a1, a2], 1e-9).unwrap();
        assert_eq!(r.membership, vec![SpectrumSet::ConvexRange; 2]);
        assert!(r.holds());

        // hypothesis failures
        let bad = SymmetricMatrix::diagonal(&[-3.0, 1.0]);
        assert!(matches!(
            trace_inequality_verify(&[1.0], &[bad], 1e-9),
            Err(Error::Hypothesis(_))
        ));
        let low = SymmetricMatrix::diagonal(&[-3.0, -3.0]);
        let err = trace_inequality_verify(&[1.0], &[low], 1e-9).unwrap_err();
        assert!(matches!(err, Error::Hypothesis(m) if m.contains("-I")));
    }

    #[test]
    fn schur_horn_examples() {
        assert!(schur_horn_check(&SymmetricMatrix::diagonal(&[1.0, -4.0, 2.0]), 1e-12).unwrap());
        assert!(schur_horn_check(&m(&[&[2.0, 1.0], &[1.0, 2.0]]), 1e-12).unwrap());
    }

    #[test]
    fn conjugation_by_rotations_preserves_spectrum() {
        let a = m(&[&[4.0, 1.0, 0.0], &[1.0, -1.0, 2.0], &[0.0, 2.0, 0.5]]);
        let q = rotations_product(3, &[(0, 1, 0.3), (1, 2, -1.1), (0, 2, 2.0)]);
        let b = a.conjugate(&q);
        for (x, y) in eigenvalues(&a).iter().zip(eigenvalues(&b)) {
            assert!((x - y).abs() < 1e-12);
        }
    }
}
