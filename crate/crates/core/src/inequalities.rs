//! Verifiers for the named inequalities built on points of convexity.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::function::ScalarFunction;
use crate::majorization::is_majorized;
use crate::measures::WeightedMeasure;
use crate::report::InequalityReport;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum WitnessCase {
    /// `a ≥ (a+b+c)/3 ≥ b ≥ c`
    MeanAboveMiddle,
    /// `a ≥ b ≥ (a+b+c)/3 ≥ c`
    MeanBelowMiddle,
}

/// Two six-point families with `(1/6)Σδ_x ≺ (1/6)Σδ_y`, from which the
/// three-point Popoviciu inequality follows by the generalized HLP theorem.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SexticWitness {
    pub x: [f64; 6],
    pub y: [f64; 6],
    pub case: WitnessCase,
}

impl SexticWitness {
    pub fn x_measure(&self) -> WeightedMeasure {
        WeightedMeasure::uniform_on_line(&self.x).expect("six finite points")
    }

    pub fn y_measure(&self) -> WeightedMeasure {
        WeightedMeasure::uniform_on_line(&self.y).expect("six finite points")
    }

    pub fn is_majorized(&self, tol: f64) -> bool {
        is_majorized(&self.x, &self.y, tol).expect("equal lengths")
    }
}

fn sort3_desc(a: f64, b: f64, c: f64) -> (f64, f64, f64) {
    let mut v = [a, b, c];
    v.sort_by(|p, q| q.total_cmp(p));
    (v[0], v[1], v[2])
}

pub fn popoviciu_witness(a: f64, b: f64, c: f64) -> SexticWitness {
    let (a, b, c) = sort3_desc(a, b, c);
    let m = (a + b + c) / 3.0;
    let (ab, ac, bc) = ((a + b) / 2.0, (a + c) / 2.0, (b + c) / 2.0);
    let x = [ab, ab, ac, ac, bc, bc];
    if m >= b {
        SexticWitness {
            x,
            y: [a, m, m, m, b, c],
            case: WitnessCase::MeanAboveMiddle,
        }
    } else {
        SexticWitness {
            x,
            y: [a, b, m, m, m, c],
            case: WitnessCase::MeanBelowMiddle,
        }
    }
}

/// `(f(a)+f(b)+f(c))/3 + f((a+b+c)/3) ≥ (2/3)[f((a+b)/2) + f((a+c)/2) + f((b+c)/2)]`
pub fn popoviciu_verify(f: &ScalarFunction, a: f64, b: f64, c: f64, tol: f64) -> Result<InequalityReport> {
    let m = (a + b + c) / 3.0;
    let mids = [(a + b) / 2.0, (a + c) / 2.0, (b + c) / 2.0];
    f.check_domain(&[a, b, c, m])?;
    f.check_domain(&mids)?;
    let lhs = (f.value(a) + f.value(b) + f.value(c)) / 3.0 + f.value(m);
    let rhs = 2.0 / 3.0 * mids.iter().map(|&t| f.value(t)).sum::<f64>();
    Ok(InequalityReport::ge(lhs, rhs, tol))
}

fn check_probability_weights(lambdas: &[f64], len: usize, tol: f64) -> Result<()> {
    if lambdas.len() != len {
        return Err(Error::LengthMismatch {
            left: lambdas.len(),
            right: len,
        });
    }
    if len == 0 {
        return Err(Error::InvalidInput("no points".into()));
    }
    if let Some(l) = lambdas.iter().find(|l| !(**l > 0.0)) {
        return Err(Error::InvalidInput(format!("weight {l} is not positive")));
    }
    let total: f64 = lambdas.iter().sum();
    if (total - 1.0).abs() > tol {
        return Err(Error::InvalidInput(format!("weights sum to {total}, not 1")));
    }
    Ok(())
}

/// `Σ λₖ xₖ e^{xₖ} ≥ (Σ λₖ xₖ) e^{Σ λₖ xₖ}` when `Σ λₖ xₖ ≥ −1`.
pub fn xexp_weighted_jensen_verify(lambdas: &[f64], xs: &[f64], tol: f64) -> Result<InequalityReport> {
    check_probability_weights(lambdas, xs.len(), tol)?;
    let mean: f64 = lambdas.iter().zip(xs).map(|(l, x)| l * x).sum();
    if mean < -1.0 - tol {
        return Err(Error::Hypothesis(format!(
            "weighted mean {mean} is outside the certified region [-1, ∞)"
        )));
    }
    let lhs = lambdas.iter().zip(xs).map(|(l, x)| l * x * x.exp()).sum();
    Ok(InequalityReport::ge(lhs, mean * mean.exp(), tol))
}

/// `max{2, e(1 − 1/n)} / n`
pub fn borwein_girgensohn_constant(n: usize) -> f64 {
    let n = n as f64;
    2f64.max(std::f64::consts::E * (1.0 - 1.0 / n)) / n
}

/// `Σ xₖ e^{xₖ} ≥ (max{2, e(1−1/n)}/n) Σ xₖ²` for `Σ xₖ ≥ 0`.
pub fn borwein_girgensohn_verify(xs: &[f64], tol: f64) -> Result<InequalityReport> {
    if xs.is_empty() {
        return Err(Error::InvalidInput("no points".into()));
    }
    let sum: f64 = xs.iter().sum();
    if sum < -tol {
        return Err(Error::Hypothesis(format!("sum {sum} is negative")));
    }
    let lhs = xs.iter().map(|x| x * x.exp()).sum();
    let rhs = borwein_girgensohn_constant(xs.len()) * xs.iter().map(|x| x * x).sum::<f64>();
    Ok(InequalityReport::ge(lhs, rhs, tol))
}

/// Elementary symmetric functions `(e₁, e₂, e₃)` of a triple.
pub fn elementary_symmetric(v: [f64; 3]) -> [f64; 3] {
    let [a, b, c] = v;
    [a + b + c, a * b + b * c + c * a, a * b * c]
}

/// `Σ log² xᵢ ≤ Σ log² yᵢ` for positive triples with `e₁(x) ≤ e₁(y)`,
/// `e₂(x) ≤ e₂(y)` and `e₃(x) = e₃(y)`.
pub fn bnl_triplet_verify(x: [f64; 3], y: [f64; 3], tol: f64) -> Result<InequalityReport> {
    if let Some(v) = x.iter().chain(&y).find(|v| !(**v > 0.0)) {
        return Err(Error::Hypothesis(format!("entry {v} is not positive")));
    }
    let (ex, ey) = (elementary_symmetric(x), elementary_symmetric(y));
    if ex[0] > ey[0] + tol {
        return Err(Error::Hypothesis(format!(
            "e1(x) = {} exceeds e1(y) = {}",
            ex[0], ey[0]
        )));
    }
    if ex[1] > ey[1] + tol {
        return Err(Error::Hypothesis(format!(
            "e2(x) = {} exceeds e2(y) = {}",
            ex[1], ey[1]
        )));
    }
    if (ex[2] - ey[2]).abs() > tol {
        return Err(Error::Hypothesis(format!(
            "e3(x) = {} differs from e3(y) = {}",
            ex[2], ey[2]
        )));
    }
    let sq = |v: [f64; 3]| v.iter().map(|t| t.ln().powi(2)).sum::<f64>();
    Ok(InequalityReport::le(sq(x), sq(y), tol))
}

/// A real random variable given by a finite distribution or by samples.
#[derive(Debug, Clone, PartialEq)]
pub enum Distribution {
    Discrete(WeightedMeasure),
    Samples(Vec<f64>),
}

impl Distribution {
    fn to_measure(&self) -> Result<WeightedMeasure> {
        match self {
            Distribution::Discrete(m) => {
                if m.dimension() != 1 {
                    return Err(Error::DimensionMismatch {
                        expected: 1,
                        found: m.dimension(),
                    });
                }
                Ok(m.normalize())
            }
            Distribution::Samples(s) => WeightedMeasure::empirical_from_samples(s.iter().map(|&v| vec![v]).collect()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JensenReport {
    /// `E(X)`, after truncation when requested.
    pub mean: f64,
    pub f_of_mean: f64,
    pub mean_of_f: f64,
    pub truncation: Option<f64>,
    pub inequality: InequalityReport,
}

impl JensenReport {
    pub fn holds(&self) -> bool {
        self.inequality.holds()
    }
}

/// `f(E X) ≤ E f(X)` on the law of `X`, optionally truncated to
/// `Xₙ = clamp(X, −n, n)`. Whether `E X` is a point of convexity is not
/// checked here.
pub fn probabilistic_jensen_verify(
    dist: &Distribution,
    f: &ScalarFunction,
    truncation: Option<f64>,
    tol: f64,
) -> Result<JensenReport> {
    let mut law = dist.to_measure()?;
    if let Some(n) = truncation {
        if !(n > 0.0) {
            return Err(Error::InvalidInput(format!("truncation level {n} must be positive")));
        }
        law = law.push_forward(|p| vec![p[0].clamp(-n, n)])?;
    }
    let mean = law.barycenter()[0];
    let mean_of_f = law.expectation(f)?;
    let f_of_mean = f.eval(mean)?;
    Ok(JensenReport {
        mean,
        f_of_mean,
        mean_of_f,
        truncation,
        inequality: InequalityReport::le(f_of_mean, mean_of_f, tol),
    })
}
