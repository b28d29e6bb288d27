//! Complex polynomials, their roots, and the root-measure inequalities
//! between a polynomial and its derivative.

use std::sync::OnceLock;

use num_complex::Complex64;
use serde::Serialize;

use crate::convexity::{convexity_boundary, Boundary, Direction};
use crate::error::{Error, Result};
use crate::function::ScalarFunction;
use crate::geometry::{convex_hull_2d, hull_contains_2d};
use crate::measures::WeightedMeasure;
use crate::report::InequalityReport;
use crate::transport::{weighted_majorization_decide, FeasibilityVerdict};

pub const MAX_ITERATIONS: usize = 200;
pub const STEP_RTOL: f64 = 1e-12;
/// Residual bound, relative to `Σ |c_k| |z|^k`, used by the derived checks.
pub const DEFAULT_ROOT_TOL: f64 = 1e-10;
/// Radii, relative to `max(1, |z|)`, within which nearby roots are tested
/// for being one multiple root.
pub const CLUSTER_RADII: [f64; 5] = [1e-2, 1e-3, 1e-4, 1e-5, 1e-6];
const LEADING_FLOOR: f64 = 1e-300;

/// Polynomial `c₀ + c₁z + … + c_n zⁿ`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComplexPolynomial {
    coeffs: Vec<Complex64>,
}

impl ComplexPolynomial {
    /// Trailing coefficients with modulus at most `1e-300` are dropped.
    pub fn new(mut coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::InvalidInput("non-finite coefficient".into()));
        }
        while coeffs.last().is_some_and(|c| c.norm() <= LEADING_FLOOR) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            return Err(Error::InvalidInput("zero polynomial".into()));
        }
        Ok(Self { coeffs })
    }

    pub fn from_real(coeffs: &[f64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    /// Monic polynomial `Π (z − rₖ)`.
    pub fn from_roots(roots: &[Complex64]) -> Self {
        let mut coeffs = vec![Complex64::new(1.0, 0.0)];
        for &r in roots {
            let mut next = vec![Complex64::new(0.0, 0.0); coeffs.len() + 1];
            for (k, &c) in coeffs.iter().enumerate() {
                next[k + 1] += c;
                next[k] -= r * c;
            }
            coeffs = next;
        }
        Self { coeffs }
    }

    /// Ascending list of `[re, im]` pairs.
    pub fn from_json_str(s: &str) -> Result<Self> {
        let pairs: Vec<[f64; 2]> =
            serde_json::from_str(s).map_err(|e| Error::InvalidInput(format!("polynomial JSON: {e}")))?;
        Self::new(pairs.into_iter().map(|[re, im]| Complex64::new(re, im)).collect())
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::Value::from(self.coeffs.iter().map(|c| vec![c.re, c.im]).collect::<Vec<_>>())
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn leading(&self) -> Complex64 {
        self.coeffs[self.degree()]
    }

    /// `max |c_k|`
    pub fn scale(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    /// `Σ |c_k| |z|^k`, the magnitude against which evaluation error is
    /// measured.
    pub fn abs_bound(&self, z: Complex64) -> f64 {
        let r = z.norm();
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * r + c.norm())
    }

    pub fn derivative(&self) -> Result<Self> {
        if self.degree() == 0 {
            return Err(Error::InvalidInput("derivative of a constant polynomial".into()));
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, &c)| c * k as f64)
            .collect();
        Self::new(coeffs)
    }

    pub fn monic(&self) -> Self {
        let lead = self.leading();
        Self {
            coeffs: self.coeffs.iter().map(|c| c / lead).collect(),
        }
    }
}

/// Positive root of `|c_n| xⁿ − Σ_{k<n} |c_k| x^k`; every root lies in the
/// disc of this radius.
pub fn cauchy_bound(p: &ComplexPolynomial) -> f64 {
    let n = p.degree();
    let lead = p.leading().norm();
    let aux = |x: f64| -> f64 {
        let lower = p.coeffs[..n].iter().rev().fold(0.0, |acc, c| acc * x + c.norm());
        lead * x.powi(n as i32) - lower
    };
    let mut hi = 1.0 + p.coeffs[..n].iter().map(|c| c.norm() / lead).fold(0.0, f64::max);
    let mut lo = 0.0;
    if p.coeffs[..n].iter().all(|c| c.norm() == 0.0) {
        return 0.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if aux(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-15 * hi {
            break;
        }
    }
    hi
}

/// All `n` roots with multiplicity. Aberth–Ehrlich iteration from a
/// perturbed circle of the Cauchy radius, then nearby iterates that form a
/// multiple root are merged onto the root of the matching derivative.
/// Every returned root satisfies `|P(r)| ≤ tol·Σ |c_k| |r|^k`.
pub fn roots(p: &ComplexPolynomial, tol: f64) -> Result<Vec<Complex64>> {
    let n = p.degree();
    if n == 0 {
        return Err(Error::InvalidInput("constant polynomial has no roots".into()));
    }
    let q = p.monic();
    if n == 1 {
        return Ok(vec![-q.coeffs[0]]);
    }
    let dq = q.derivative()?;
    let radius = cauchy_bound(&q).max(f64::MIN_POSITIVE);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            let angle = std::f64::consts::TAU * k as f64 / n as f64 + 0.4;
            Complex64::from_polar(radius, angle)
        })
        .collect();

    let mut done = vec![false; n];
    let mut iterations = 0;
    while iterations < MAX_ITERATIONS && done.iter().any(|d| !d) {
        iterations += 1;
        for i in 0..n {
            if done[i] {
                continue;
            }
            let pz = q.eval(z[i]);
            if pz.norm() <= 4.0 * f64::EPSILON * q.abs_bound(z[i]) {
                done[i] = true;
                continue;
            }
            let ratio = pz / dq.eval(z[i]);
            let repulsion: Complex64 = (0..n).filter(|&j| j != i).map(|j| (z[i] - z[j]).inv()).sum();
            let step = ratio / (1.0 - ratio * repulsion);
            if !step.re.is_finite() || !step.im.is_finite() {
                continue;
            }
            z[i] -= step;
            if step.norm() <= STEP_RTOL * z[i].norm() {
                done[i] = true;
            }
        }
    }

    let merged = merge_clusters(&q, z);
    let worst = merged
        .iter()
        .map(|&r| q.eval(r).norm() / q.abs_bound(r).max(f64::MIN_POSITIVE))
        .fold(0.0, f64::max);
    if worst > tol {
        return Err(Error::NoConvergence {
            iterations,
            detail: format!("relative residual {worst:e} exceeds {tol:e}; best iterate {merged:?}"),
        });
    }
    Ok(merged)
}

/// Groups nearby iterates, coarse radii first, and replaces each group that
/// passes [`multiple_root_near`] by the multiple root. A `k`-fold root
/// leaves iterates spread by about `eps^{1/k}`.
fn merge_clusters(q: &ComplexPolynomial, z: Vec<Complex64>) -> Vec<Complex64> {
    let n = z.len();
    let mut out = z.clone();
    let mut merged = vec![false; n];
    for radius in CLUSTER_RADII {
        let mut group: Vec<usize> = (0..n).collect();
        for i in (0..n).filter(|&i| !merged[i]) {
            for j in (i + 1..n).filter(|&j| !merged[j]) {
                if (z[i] - z[j]).norm() <= radius * z[i].norm().max(1.0) {
                    let (a, b) = (find(&mut group, i), find(&mut group, j));
                    group[b] = a;
                }
            }
        }
        for root in 0..n {
            let members: Vec<usize> = (0..n).filter(|&i| !merged[i] && find(&mut group, i) == root).collect();
            let k = members.len();
            if k < 2 {
                continue;
            }
            let center = members.iter().map(|&i| z[i]).sum::<Complex64>() / k as f64;
            if let Some(r) = multiple_root_near(q, center, k, radius) {
                for &i in &members {
                    out[i] = r;
                    merged[i] = true;
                }
            }
        }
    }
    out
}

fn find(group: &mut [usize], i: usize) -> usize {
    let mut r = i;
    while group[r] != r {
        r = group[r];
    }
    group[i] = r;
    r
}

/// Newton on `P^{(k−1)}` from `center`, accepted when the result stays
/// within `radius` and `P` vanishes there to rounding level. Distinct roots
/// `s` apart leave `|P| ≈ s²/4` at their midpoint, so only clusters tighter
/// than about `√eps` pass.
fn multiple_root_near(q: &ComplexPolynomial, center: Complex64, k: usize, radius: f64) -> Option<Complex64> {
    let mut g = q.clone();
    for _ in 1..k {
        g = g.derivative().ok()?;
    }
    let dg = g.derivative().ok()?;
    let mut r = center;
    for _ in 0..50 {
        let step = g.eval(r) / dg.eval(r);
        if !step.re.is_finite() || !step.im.is_finite() {
            break;
        }
        r -= step;
        if step.norm() <= 4.0 * f64::EPSILON * r.norm().max(f64::MIN_POSITIVE) {
            break;
        }
    }
    if (r - center).norm() > radius * center.norm().max(1.0) {
        return None;
    }
    (q.eval(r).norm() <= 64.0 * f64::EPSILON * q.abs_bound(r)).then_some(r)
}

fn as_point(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

fn root_pair(p: &ComplexPolynomial) -> Result<(Vec<Complex64>, Vec<Complex64>)> {
    if p.degree() < 2 {
        return Err(Error::InvalidInput(format!("degree {} is below 2", p.degree())));
    }
    Ok((roots(p, DEFAULT_ROOT_TOL)?, roots(&p.derivative()?, DEFAULT_ROOT_TOL)?))
}

/// Every root of `P′` lies in the convex hull of the roots of `P`, within
/// `tol` of its boundary.
pub fn gauss_lucas_check(p: &ComplexPolynomial, tol: f64) -> Result<bool> {
    let (zeros, critical) = root_pair(p)?;
    let hull = convex_hull_2d(&zeros.iter().map(|&z| as_point(z)).collect::<Vec<_>>());
    Ok(critical.iter().all(|&m| hull_contains_2d(&hull, as_point(m), tol)))
}

/// Uniform probability measures on the roots of `P′` and of `P`, as
/// measures on R².
pub fn root_measures(p: &ComplexPolynomial) -> Result<(WeightedMeasure, WeightedMeasure)> {
    let (zeros, critical) = root_pair(p)?;
    let to_points = |rs: &[Complex64]| rs.iter().map(|z| vec![z.re, z.im]).collect::<Vec<_>>();
    Ok((
        WeightedMeasure::uniform(to_points(&critical))?,
        WeightedMeasure::uniform(to_points(&zeros))?,
    ))
}

/// Decides `(1/(n−1)) Σ δ_{μₖ} ≺ (1/n) Σ δ_{λⱼ}` for the critical points
/// `μₖ` and zeros `λⱼ`.
pub fn malamud_majorization_check(p: &ComplexPolynomial, tol: f64) -> Result<FeasibilityVerdict> {
    let (critical, zeros) = root_measures(p)?;
    weighted_majorization_decide(&critical, &zeros, tol)
}

/// `(1/(n−1)) Σ f(μₖ) ≤ (1/n) Σ f(λⱼ)` for convex `f`.
pub fn debruijn_springer_verify(
    p: &ComplexPolynomial,
    f: &dyn Fn(Complex64) -> f64,
    tol: f64,
) -> Result<InequalityReport> {
    let (zeros, critical) = root_pair(p)?;
    let mean = |rs: &[Complex64]| rs.iter().map(|&z| f(z)).sum::<f64>() / rs.len() as f64;
    Ok(InequalityReport::le(mean(&critical), mean(&zeros), tol))
}

/// Right end of the interval on which `e^{−t²}` has a supporting line at
/// `1/2`.
pub fn r_star() -> Result<f64> {
    static R_STAR: OnceLock<f64> = OnceLock::new();
    if let Some(r) = R_STAR.get() {
        return Ok(*r);
    }
    match convexity_boundary(&ScalarFunction::gauss1d(), 0.5, Direction::Right, 1e-14)? {
        Boundary::Finite { point, .. } => Ok(*R_STAR.get_or_init(|| point)),
        Boundary::Unbounded { searched_to } => Err(Error::NoConvergence {
            iterations: 0,
            detail: format!("no tangent crossing for exp(-t^2) at 1/2 up to {searched_to}"),
        }),
    }
}

pub const CRITICAL_DISC_RADIUS: f64 = 0.5;

/// `(1/(n−1)) Σ e^{−|μₖ|²} ≥ (1/n) Σ e^{−|λⱼ|²}` when every `μₖ` lies in the
/// disc of radius 1/2 and every `λⱼ` in the disc of radius `r*`.
pub fn relative_concavity_verify(p: &ComplexPolynomial, tol: f64) -> Result<InequalityReport> {
    let (zeros, critical) = root_pair(p)?;
    if let Some(m) = critical.iter().find(|m| m.norm() > CRITICAL_DISC_RADIUS + tol) {
        return Err(Error::Hypothesis(format!(
            "root {m} of P' lies outside the disc of radius {CRITICAL_DISC_RADIUS}"
        )));
    }
    let r = r_star()?;
    if let Some(l) = zeros.iter().find(|l| l.norm() > r + tol) {
        return Err(Error::Hypothesis(format!(
            "root {l} of P lies outside the disc of radius r* = {r}"
        )));
    }
    let mean = |rs: &[Complex64]| rs.iter().map(|z| (-z.norm_sqr()).exp()).sum::<f64>() / rs.len() as f64;
    Ok(InequalityReport::ge(mean(&critical), mean(&zeros), tol))
}
