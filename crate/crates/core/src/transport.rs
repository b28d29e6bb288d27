//! Weighted majorization between discrete measures.
//!
//! `Σ λᵢ δ_{xᵢ} ≺ Σ μⱼ δ_{yⱼ}` holds when some `m × n` matrix `A` satisfies
//!
//! * `a_ij ≥ 0`
//! * `Σⱼ a_ij = 1` for every row,
//! * `μⱼ = Σᵢ a_ij λᵢ` for every column,
//! * `xᵢ = Σⱼ a_ij yⱼ` for every row.
//!
//! The relation is decided by a phase-1 simplex over the entries of `A`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lp;
use crate::measures::{Integrand, WeightedMeasure};
use crate::report::InequalityReport;

/// Most negative entry tolerated in a certificate.
pub const ENTRY_FLOOR: f64 = -1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResidualReport {
    /// `maxᵢ |Σⱼ a_ij − 1|`
    pub row_sum: f64,
    /// `maxⱼ |Σᵢ a_ij λᵢ − μⱼ|`
    pub weight_transfer: f64,
    /// `maxᵢ,ₖ |Σⱼ a_ij yⱼₖ − xᵢₖ|`
    pub barycenter: f64,
    pub min_entry: f64,
    pub tol: f64,
    pub passes: bool,
}

impl ResidualReport {
    pub fn max_residual(&self) -> f64 {
        self.row_sum.max(self.weight_transfer).max(self.barycenter)
    }
}

/// Row-stochastic matrix witnessing a weighted majorization.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RowStochasticCertificate {
    entries: Vec<Vec<f64>>,
    residuals: ResidualReport,
}

impl RowStochasticCertificate {
    /// Wraps a candidate matrix after checking it against the two measures.
    pub fn new(entries: Vec<Vec<f64>>, mu_x: &WeightedMeasure, mu_y: &WeightedMeasure, tol: f64) -> Result<Self> {
        let residuals = residuals(&entries, mu_x, mu_y, tol)?;
        Ok(Self { entries, residuals })
    }

    pub fn rows(&self) -> usize {
        self.entries.len()
    }

    pub fn cols(&self) -> usize {
        self.entries.first().map_or(0, Vec::len)
    }

    pub fn entries(&self) -> &[Vec<f64>] {
        &self.entries
    }

    pub fn residuals(&self) -> &ResidualReport {
        &self.residuals
    }

    /// The probability measure `Σⱼ a_ij δ_{yⱼ}` of row `i`; its barycenter is `xᵢ`.
    pub fn row_measure(&self, i: usize, mu_y: &WeightedMeasure) -> Result<WeightedMeasure> {
        let (pts, ws): (Vec<Vec<f64>>, Vec<f64>) = self.entries[i]
            .iter()
            .zip(mu_y.points())
            .filter(|(a, _)| **a > 0.0)
            .map(|(a, y)| (y.clone(), *a))
            .unzip();
        WeightedMeasure::new(pts, ws)
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("certificate serializes")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum FeasibilityVerdict {
    Feasible(RowStochasticCertificate),
    /// Phase-1 objective at termination.
    Infeasible(f64),
}

impl FeasibilityVerdict {
    pub fn is_feasible(&self) -> bool {
        matches!(self, FeasibilityVerdict::Feasible(_))
    }

    pub fn certificate(&self) -> Option<&RowStochasticCertificate> {
        match self {
            FeasibilityVerdict::Feasible(c) => Some(c),
            FeasibilityVerdict::Infeasible(_) => None,
        }
    }
}

fn check_compatible(mu_x: &WeightedMeasure, mu_y: &WeightedMeasure, tol: f64) -> Result<()> {
    if mu_x.dimension() != mu_y.dimension() {
        return Err(Error::DimensionMismatch {
            expected: mu_x.dimension(),
            found: mu_y.dimension(),
        });
    }
    let (mx, my) = (mu_x.total_mass(), mu_y.total_mass());
    if (mx - my).abs() > tol {
        return Err(Error::MassMismatch { left: mx, right: my });
    }
    Ok(())
}

/// Decides `mu_x ≺ mu_y`. The equality system has `m + n + m·d` rows with
/// the last column-mass row dropped, since it follows from the others
/// when the total masses agree.
pub fn weighted_majorization_decide(
    mu_x: &WeightedMeasure,
    mu_y: &WeightedMeasure,
    tol: f64,
) -> Result<FeasibilityVerdict> {
    check_compatible(mu_x, mu_y, tol)?;
    let (m, n, d) = (mu_x.len(), mu_y.len(), mu_x.dimension());
    let var = |i: usize, j: usize| i * n + j;
    let cols = m * n;

    let mut a = Vec::with_capacity(m + n + m * d);
    let mut b = Vec::with_capacity(m + n + m * d);
    for i in 0..m {
        let mut row = vec![0.0; cols];
        for j in 0..n {
            row[var(i, j)] = 1.0;
        }
        a.push(row);
        b.push(1.0);
    }
    for j in 0..n.saturating_sub(1) {
        let mut row = vec![0.0; cols];
        for (i, lambda) in mu_x.weights().iter().enumerate() {
            row[var(i, j)] = *lambda;
        }
        a.push(row);
        b.push(mu_y.weights()[j]);
    }
    for (i, xi) in mu_x.points().iter().enumerate() {
        for k in 0..d {
            let mut row = vec![0.0; cols];
            for (j, yj) in mu_y.points().iter().enumerate() {
                row[var(i, j)] = yj[k];
            }
            a.push(row);
            b.push(xi[k]);
        }
    }

    let out = lp::phase_one(&a, &b, cols)?;
    if out.objective > m as f64 * tol {
        return Ok(FeasibilityVerdict::Infeasible(out.objective));
    }
    let entries: Vec<Vec<f64>> = (0..m).map(|i| out.x[i * n..(i + 1) * n].to_vec()).collect();
    let cert = RowStochasticCertificate::new(entries, mu_x, mu_y, tol)?;
    if !cert.residuals.passes {
        return Ok(FeasibilityVerdict::Infeasible(
            out.objective.max(cert.residuals.max_residual()),
        ));
    }
    Ok(FeasibilityVerdict::Feasible(cert))
}

fn residuals(a: &[Vec<f64>], mu_x: &WeightedMeasure, mu_y: &WeightedMeasure, tol: f64) -> Result<ResidualReport> {
    let (m, n) = (mu_x.len(), mu_y.len());
    if a.len() != m {
        return Err(Error::LengthMismatch {
            left: a.len(),
            right: m,
        });
    }
    if let Some(row) = a.iter().find(|r| r.len() != n) {
        return Err(Error::LengthMismatch {
            left: row.len(),
            right: n,
        });
    }
    if mu_x.dimension() != mu_y.dimension() {
        return Err(Error::DimensionMismatch {
            expected: mu_x.dimension(),
            found: mu_y.dimension(),
        });
    }

    let row_sum = a
        .iter()
        .map(|r| (r.iter().sum::<f64>() - 1.0).abs())
        .fold(0.0, f64::max);
    let weight_transfer = (0..n)
        .map(|j| {
            let moved: f64 = a.iter().zip(mu_x.weights()).map(|(r, l)| r[j] * l).sum();
            (moved - mu_y.weights()[j]).abs()
        })
        .fold(0.0, f64::max);
    let mut barycenter = 0.0f64;
    for (row, xi) in a.iter().zip(mu_x.points()) {
        for (k, xik) in xi.iter().enumerate() {
            let combo: f64 = row.iter().zip(mu_y.points()).map(|(a, y)| a * y[k]).sum();
            barycenter = barycenter.max((combo - xik).abs());
        }
    }
    let min_entry = a.iter().flatten().copied().fold(f64::INFINITY, f64::min);
    let passes = min_entry >= ENTRY_FLOOR && row_sum <= tol && weight_transfer <= tol && barycenter <= tol;
    Ok(ResidualReport {
        row_sum,
        weight_transfer,
        barycenter,
        min_entry,
        tol,
        passes,
    })
}

/// Recomputes every residual of `cert` from scratch against the measures.
pub fn verify_certificate(
    cert: &RowStochasticCertificate,
    mu_x: &WeightedMeasure,
    mu_y: &WeightedMeasure,
    tol: f64,
) -> Result<ResidualReport> {
    residuals(cert.entries(), mu_x, mu_y, tol)
}

/// Checks `Σ λᵢ f(xᵢ) ≤ Σ μⱼ f(yⱼ)` for measures in weighted majorization.
///
/// This verifies the conclusion only. That every `xᵢ` is a point of
/// convexity of `f` relative to the hull of the `yⱼ` is the caller's
/// hypothesis; see [`crate::convexity::support_line_certify`].
pub fn generalized_hlp_verify<F: Integrand + ?Sized>(
    f: &F,
    mu_x: &WeightedMeasure,
    mu_y: &WeightedMeasure,
    tol: f64,
) -> Result<InequalityReport> {
    match weighted_majorization_decide(mu_x, mu_y, tol)? {
        FeasibilityVerdict::Feasible(_) => hlp_sides(f, mu_x, mu_y, tol),
        FeasibilityVerdict::Infeasible(objective) => Err(Error::NotInRelation { objective }),
    }
}

/// As [`generalized_hlp_verify`], with the relation witnessed by a
/// caller-supplied certificate instead of a solve.
pub fn generalized_hlp_verify_with<F: Integrand + ?Sized>(
    f: &F,
    mu_x: &WeightedMeasure,
    mu_y: &WeightedMeasure,
    cert: &RowStochasticCertificate,
    tol: f64,
) -> Result<InequalityReport> {
    let report = verify_certificate(cert, mu_x, mu_y, tol)?;
    if !report.passes {
        return Err(Error::NotInRelation {
            objective: report.max_residual(),
        });
    }
    hlp_sides(f, mu_x, mu_y, tol)
}

fn hlp_sides<F: Integrand + ?Sized>(
    f: &F,
    mu_x: &WeightedMeasure,
    mu_y: &WeightedMeasure,
    tol: f64,
) -> Result<InequalityReport> {
    let lhs = mu_x.expectation(f)? * mu_x.total_mass();
    let rhs = mu_y.expectation(f)? * mu_y.total_mass();
    Ok(InequalityReport::le(lhs, rhs, tol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::function::ScalarFunction;

    const TOL: f64 = 1e-9;

    fn line(points: &[f64]) -> WeightedMeasure {
        WeightedMeasure::uniform_on_line(points).unwrap()
    }

    #[test]
    fn identical_diracs() {
        let d = WeightedMeasure::dirac(vec![1.0, 2.0], 1.0).unwrap();
        let v = weighted_majorization_decide(&d, &d, TOL).unwrap();
        assert_eq!(v.certificate().unwrap().entries(), &[vec![1.0]]);
    }

    #[test]
    fn barycenter_dirac_gets_the_weight_row() {
        let mu_y = WeightedMeasure::new(
            vec![vec![0.0, 0.0], vec![3.0, 0.0], vec![0.0, 3.0]],
            vec![0.2, 0.3, 0.5],
        )
        .unwrap();
        let mu_x = WeightedMeasure::dirac(mu_y.barycenter(), 1.0).unwrap();
        let v = weighted_majorization_decide(&mu_x, &mu_y, TOL).unwrap();
        let cert = v.certificate().unwrap();
        for (a, w) in cert.entries()[0].iter().zip(mu_y.weights()) {
            assert!((a - w).abs() < 1e-12);
        }
        let r = verify_certificate(cert, &mu_x, &mu_y, TOL).unwrap();
        assert!(r.max_residual() < 1e-14);
    }

    #[test]
    fn point_outside_hull_is_infeasible() {
        let mu_y = line(&[0.0, 1.0]);
        let mu_x = WeightedMeasure::dirac(vec![2.0], 1.0).unwrap();
        match weighted_majorization_decide(&mu_x, &mu_y, TOL).unwrap() {
            FeasibilityVerdict::Infeasible(obj) => assert!(obj > 0.1),
            v => panic!("expected infeasible, got {v:?}"),
        }
    }

    #[test]
    fn popoviciu_witness_measures() {
        let x = line(&[2.5, 2.5, 2.0, 2.0, 1.5, 1.5]);
        let y = line(&[3.0, 2.0, 2.0, 2.0, 2.0, 1.0]);
        let v = weighted_majorization_decide(&x, &y, TOL).unwrap();
        let cert = v.certificate().expect("feasible");
        assert!(verify_certificate(cert, &x, &y, TOL).unwrap().passes);
    }

    #[test]
    fn perturbed_certificate_fails() {
        let mu_y = line(&[0.0, 1.0, 4.0]);
        let mu_x = WeightedMeasure::dirac(mu_y.barycenter(), 1.0).unwrap();
        let v = weighted_majorization_decide(&mu_x, &mu_y, TOL).unwrap();
        let mut entries = v.certificate().unwrap().entries().to_vec();
        entries[0][1] += 1e-3;
        let bad = RowStochasticCertificate::new(entries, &mu_x, &mu_y, TOL).unwrap();
        let r = verify_certificate(&bad, &mu_x, &mu_y, TOL).unwrap();
        assert!(!r.passes);
        assert!((r.row_sum - 1e-3).abs() < 1e-12);
    }

    #[test]
    fn errors_are_distinct() {
        let a = line(&[0.0]);
        let b = WeightedMeasure::dirac(vec![0.0, 0.0], 1.0).unwrap();
        assert!(matches!(
            weighted_majorization_decide(&a, &b, TOL),
            Err(Error::DimensionMismatch { .. })
        ));
        let c = WeightedMeasure::dirac(vec![0.0], 2.0).unwrap();
        assert!(matches!(
            weighted_majorization_decide(&a, &c, TOL),
            Err(Error::MassMismatch { .. })
        ));
    }

    #[test]
    fn generalized_hlp_examples() {
        let sq = ScalarFunction::square();
        let r = generalized_hlp_verify(&sq, &line(&[1.0, 1.0, 1.0]), &line(&[3.0, 0.0, 0.0]), TOL).unwrap();
        assert!(r.holds());

        let log2 = ScalarFunction::log_squared();
        let r = generalized_hlp_verify(&log2, &line(&[2.0, 2.0]), &line(&[1.0, 3.0]), TOL).unwrap();
        assert!((r.lhs - 2f64.ln().powi(2)).abs() < 1e-12);
        assert!((r.rhs - 0.5 * 3f64.ln().powi(2)).abs() < 1e-12);
        assert!(r.holds());

        let affine = |p: &[f64]| 3.0 * p[0] - 1.0;
        let r = generalized_hlp_verify(&affine, &line(&[1.0, 2.0]), &line(&[0.0, 3.0]), TOL).unwrap();
        assert!(r.slack().abs() < 1e-9);

        let err = generalized_hlp_verify(&sq, &line(&[3.0, 0.0]), &line(&[1.0, 2.0]), TOL).unwrap_err();
        assert!(matches!(err, Error::NotInRelation { .. }));
    }

    #[test]
    fn rows_are_barycentric_decompositions() {
        let x = line(&[0.5, -0.5]);
        let y = line(&[0.0, 3f64.sqrt() / 2.0, -(3f64.sqrt()) / 2.0]);
        let x = WeightedMeasure::new(x.points().to_vec(), vec![0.5, 0.5]).unwrap();
        let v = weighted_majorization_decide(&x, &y, TOL).unwrap();
        let cert = v.certificate().unwrap();
        for i in 0..cert.rows() {
            let b = cert.row_measure(i, &y).unwrap().barycenter();
            assert!((b[0] - x.points()[i][0]).abs() < 1e-9);
        }
    }
}
