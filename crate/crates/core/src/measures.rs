//! Finite positive discrete measures on R^d and the regions they live in.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry;

/// A finite positive measure `Σ λᵢ δ_{xᵢ}`. Weights are kept as given;
/// [`WeightedMeasure::normalize`] rescales to a probability measure.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeightedMeasure {
    dimension: usize,
    points: Vec<Vec<f64>>,
    weights: Vec<f64>,
}

impl WeightedMeasure {
    pub fn new(points: Vec<Vec<f64>>, weights: Vec<f64>) -> Result<Self> {
        let Some(first) = points.first() else {
            return Err(Error::InvalidInput("a measure needs at least one point".into()));
        };
        let dimension = first.len();
        if dimension == 0 {
            return Err(Error::InvalidInput("points must have at least one coordinate".into()));
        }
        if weights.len() != points.len() {
            return Err(Error::LengthMismatch {
                left: points.len(),
                right: weights.len(),
            });
        }
        for p in &points {
            if p.len() != dimension {
                return Err(Error::DimensionMismatch {
                    expected: dimension,
                    found: p.len(),
                });
            }
            if p.iter().any(|v| !v.is_finite()) {
                return Err(Error::InvalidInput(format!("non-finite coordinate in {p:?}")));
            }
        }
        if let Some(w) = weights.iter().find(|w| !(w.is_finite() && **w > 0.0)) {
            return Err(Error::InvalidInput(format!(
                "weights must be finite and positive, got {w}"
            )));
        }
        let total: f64 = weights.iter().sum();
        if !total.is_finite() {
            return Err(Error::InvalidInput("total mass overflows".into()));
        }
        Ok(Self {
            dimension,
            points,
            weights,
        })
    }

    /// Uniform weights `1/n`.
    pub fn uniform(points: Vec<Vec<f64>>) -> Result<Self> {
        let n = points.len();
        Self::new(points, vec![1.0 / n.max(1) as f64; n])
    }

    /// Measure on the real line.
    pub fn on_line(points: &[f64], weights: &[f64]) -> Result<Self> {
        Self::new(points.iter().map(|&p| vec![p]).collect(), weights.to_vec())
    }

    pub fn uniform_on_line(points: &[f64]) -> Result<Self> {
        Self::uniform(points.iter().map(|&p| vec![p]).collect())
    }

    /// Dirac mass `mass·δ_x`.
    pub fn dirac(x: Vec<f64>, mass: f64) -> Result<Self> {
        Self::new(vec![x], vec![mass])
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn total_mass(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// `(Σ λᵢ xᵢ) / (Σ λᵢ)`.
    pub fn barycenter(&self) -> Vec<f64> {
        let total = self.total_mass();
        let mut b = vec![0.0; self.dimension];
        for (p, w) in self.points.iter().zip(&self.weights) {
            for (bk, pk) in b.iter_mut().zip(p) {
                *bk += w * pk;
            }
        }
        b.iter_mut().for_each(|v| *v /= total);
        b
    }

    /// `(Σ λᵢ f(xᵢ)) / (Σ λᵢ)`, failing on the first point outside the
    /// integrand's domain.
    pub fn expectation<F: Integrand + ?Sized>(&self, f: &F) -> Result<f64> {
        let mut acc = 0.0;
        for (p, w) in self.points.iter().zip(&self.weights) {
            acc += w * f.eval_at(p)?;
        }
        Ok(acc / self.total_mass())
    }

    pub fn normalize(&self) -> Self {
        let total = self.total_mass();
        Self {
            dimension: self.dimension,
            points: self.points.clone(),
            weights: self.weights.iter().map(|w| w / total).collect(),
        }
    }

    /// Empirical measure of a sample: each sample point gets mass `1/n`.
    pub fn empirical_from_samples(samples: Vec<Vec<f64>>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::InvalidInput("empty sample list".into()));
        }
        Self::uniform(samples)
    }

    /// Image of the measure under a map of the support points.
    pub fn push_forward(&self, map: impl Fn(&[f64]) -> Vec<f64>) -> Result<Self> {
        Self::new(self.points.iter().map(|p| map(p)).collect(), self.weights.clone())
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let file: MeasureFile =
            serde_json::from_str(s).map_err(|e| Error::InvalidInput(format!("measure JSON: {e}")))?;
        file.into_measure()
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::json!({
            "dimension": self.dimension,
            "points": self.points,
            "weights": self.weights,
        })
    }
}

/// On-disk form: `{"dimension": d, "points": [[...],...], "weights": [...]}`.
/// Missing weights mean uniform.
#[derive(Debug, Clone, Deserialize, Serialize)]
pub struct MeasureFile {
    pub dimension: usize,
    pub points: Vec<Vec<f64>>,
    #[serde(default)]
    pub weights: Option<Vec<f64>>,
}

impl MeasureFile {
    pub fn into_measure(self) -> Result<WeightedMeasure> {
        if let Some(p) = self.points.iter().find(|p| p.len() != self.dimension) {
            return Err(Error::DimensionMismatch {
                expected: self.dimension,
                found: p.len(),
            });
        }
        match self.weights {
            Some(w) => WeightedMeasure::new(self.points, w),
            None => WeightedMeasure::uniform(self.points),
        }
    }
}

/// Anything that can be integrated against a measure.
pub trait Integrand {
    fn eval_at(&self, point: &[f64]) -> Result<f64>;
}

impl<F> Integrand for F
where
    F: Fn(&[f64]) -> f64,
{
    fn eval_at(&self, point: &[f64]) -> Result<f64> {
        Ok(self(point))
    }
}

/// A real interval, possibly unbounded, with each finite endpoint open or closed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
    pub lo_open: bool,
    pub hi_open: bool,
}

impl Interval {
    pub fn closed(lo: f64, hi: f64) -> Self {
        Self {
            lo,
            hi,
            lo_open: false,
            hi_open: false,
        }
    }

    /// `(lo, hi]`
    pub fn open_closed(lo: f64, hi: f64) -> Self {
        Self {
            lo,
            hi,
            lo_open: true,
            hi_open: false,
        }
    }

    /// `(lo, hi)`
    pub fn open(lo: f64, hi: f64) -> Self {
        Self {
            lo,
            hi,
            lo_open: true,
            hi_open: true,
        }
    }

    pub fn real_line() -> Self {
        Self::open(f64::NEG_INFINITY, f64::INFINITY)
    }

    pub fn validate(&self) -> Result<()> {
        if self.lo.is_nan() || self.hi.is_nan() || self.lo >= self.hi {
            return Err(Error::InvalidInput(format!(
                "empty interval [{}, {}]",
                self.lo, self.hi
            )));
        }
        Ok(())
    }

    pub fn contains(&self, t: f64) -> bool {
        self.contains_tol(t, 0.0)
    }

    /// Membership with the endpoints widened by `tol`. Open endpoints stay
    /// open: `t = lo` is never inside `(lo, ...`.
    pub fn contains_tol(&self, t: f64, tol: f64) -> bool {
        let above = if self.lo_open { t > self.lo } else { t >= self.lo - tol };
        let below = if self.hi_open { t < self.hi } else { t <= self.hi + tol };
        t.is_finite() && above && below
    }

    pub fn is_bounded(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let (lo, lo_open) = if self.lo > other.lo {
            (self.lo, self.lo_open)
        } else if other.lo > self.lo {
            (other.lo, other.lo_open)
        } else {
            (self.lo, self.lo_open || other.lo_open)
        };
        let (hi, hi_open) = if self.hi < other.hi {
            (self.hi, self.hi_open)
        } else if other.hi < self.hi {
            (other.hi, other.hi_open)
        } else {
            (self.hi, self.hi_open || other.hi_open)
        };
        let out = Interval {
            lo,
            hi,
            lo_open,
            hi_open,
        };
        out.validate().ok().map(|_| out)
    }
}

/// A convex set on which points of convexity are considered.
#[derive(Debug, Clone, PartialEq)]
pub enum Region {
    Interval(Interval),
    Disc { center: [f64; 2], radius: f64 },
    Hull { points: Vec<Vec<f64>> },
}

impl Region {
    pub fn disc(center: [f64; 2], radius: f64) -> Result<Self> {
        if !(radius >= 0.0) {
            return Err(Error::InvalidInput(format!("disc radius {radius} is negative")));
        }
        Ok(Region::Disc { center, radius })
    }

    pub fn hull(points: Vec<Vec<f64>>) -> Result<Self> {
        let Some(d) = points.first().map(Vec::len) else {
            return Err(Error::InvalidInput("hull needs at least one point".into()));
        };
        if let Some(p) = points.iter().find(|p| p.len() != d) {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: p.len(),
            });
        }
        Ok(Region::Hull { points })
    }

    pub fn interval(iv: Interval) -> Result<Self> {
        iv.validate()?;
        Ok(Region::Interval(iv))
    }

    pub fn dimension(&self) -> usize {
        match self {
            Region::Interval(_) => 1,
            Region::Disc { .. } => 2,
            Region::Hull { points } => points[0].len(),
        }
    }

    /// Membership predicate; points of the wrong dimension are outside.
    pub fn contains(&self, point: &[f64], tol: f64) -> bool {
        if point.len() != self.dimension() {
            return false;
        }
        match self {
            Region::Interval(iv) => iv.contains_tol(point[0], tol),
            Region::Disc { center, radius } => (point[0] - center[0]).hypot(point[1] - center[1]) <= radius + tol,
            Region::Hull { points } => geometry::in_convex_hull(points, point, tol).unwrap_or(false),
        }
    }

    pub fn as_interval(&self) -> Option<&Interval> {
        match self {
            Region::Interval(iv) => Some(iv),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-12
    }

    #[test]
    fn barycenter_examples() {
        let m = WeightedMeasure::on_line(&[2.5], &[1.0]).unwrap();
        assert_eq!(m.barycenter(), vec![2.5]);
        let m = WeightedMeasure::on_line(&[-1.0, 1.0], &[0.5, 0.5]).unwrap();
        assert!(close(m.barycenter()[0], 0.0));
        let m = WeightedMeasure::on_line(&[0.0, 3.0], &[1.0 / 3.0, 2.0 / 3.0]).unwrap();
        assert!(close(m.barycenter()[0], 2.0));
    }

    #[test]
    fn expectation_examples() {
        let m = WeightedMeasure::on_line(&[-1.0, 1.0], &[0.5, 0.5]).unwrap();
        assert!(close(m.expectation(&|_: &[f64]| 7.0).unwrap(), 7.0));
        assert!(close(m.expectation(&|p: &[f64]| p[0] * p[0]).unwrap(), 1.0));
        let e = std::f64::consts::E;
        let m = WeightedMeasure::on_line(&[1.0, e], &[0.5, 0.5]).unwrap();
        let v = m.expectation(&|p: &[f64]| p[0].ln().powi(2)).unwrap();
        assert!(close(v, 0.5));
    }

    #[test]
    fn normalize_examples() {
        let m = WeightedMeasure::on_line(&[0.0, 1.0], &[2.0, 2.0]).unwrap().normalize();
        assert_eq!(m.weights(), &[0.5, 0.5]);
        assert_eq!(m.normalize(), m);
        let m = WeightedMeasure::on_line(&[0.0, 1.0, 2.0], &[1.0, 2.0, 3.0])
            .unwrap()
            .normalize();
        for (w, e) in m.weights().iter().zip([1.0 / 6.0, 1.0 / 3.0, 0.5]) {
            assert!(close(*w, e));
        }
    }

    #[test]
    fn empirical_examples() {
        let m = WeightedMeasure::empirical_from_samples(vec![vec![4.0]]).unwrap();
        assert_eq!(m.weights(), &[1.0]);
        let m = WeightedMeasure::empirical_from_samples(vec![vec![0.0], vec![0.0], vec![3.0]]).unwrap();
        assert!(m.weights().iter().all(|w| close(*w, 1.0 / 3.0)));
        assert!(close(m.barycenter()[0], 1.0));
        assert!(WeightedMeasure::empirical_from_samples(vec![]).is_err());
    }

    #[test]
    fn invariants_are_enforced() {
        assert!(WeightedMeasure::on_line(&[1.0], &[0.0]).is_err());
        assert!(WeightedMeasure::on_line(&[1.0], &[-1.0]).is_err());
        assert!(WeightedMeasure::new(vec![vec![1.0], vec![1.0, 2.0]], vec![1.0, 1.0]).is_err());
        assert!(WeightedMeasure::new(vec![], vec![]).is_err());
        assert!(WeightedMeasure::on_line(&[1.0, 2.0], &[1.0]).is_err());
    }

    #[test]
    fn measure_file_defaults_to_uniform() {
        let m = WeightedMeasure::from_json_str(r#"{"dimension": 2, "points": [[0,0],[2,0]]}"#).unwrap();
        assert_eq!(m.weights(), &[0.5, 0.5]);
        assert_eq!(m.barycenter(), vec![1.0, 0.0]);
        let bad = WeightedMeasure::from_json_str(r#"{"dimension": 3, "points": [[0,0]]}"#);
        assert!(matches!(bad, Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn regions() {
        let iv = Interval::open_closed(0.0, 2.0);
        assert!(!iv.contains(0.0));
        assert!(iv.contains(2.0));
        assert!(Interval::closed(1.0, 1.0).validate().is_err());
        let d = Region::disc([0.0, 0.0], 0.5).unwrap();
        assert!(d.contains(&[0.3, 0.4], 0.0));
        assert!(!d.contains(&[0.3, 0.5], 1e-9));
        assert!(!d.contains(&[0.1], 1e-9));
        assert!(Region::disc([0.0, 0.0], -1.0).is_err());
        let h = Region::hull(vec![vec![0.0], vec![3.0]]).unwrap();
        assert!(h.contains(&[1.5], 0.0));
        let lo = Interval::real_line()
            .intersect(&Interval::open_closed(0.0, 5.0))
            .unwrap();
        assert_eq!(lo, Interval::open_closed(0.0, 5.0));
    }
}
