//! Real functions on interval domains, the subjects of every inequality check.

use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::measures::{Integrand, Interval};

type Eval = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Number of random interior points at which a supplied derivative is
/// compared against central differences.
const DERIVATIVE_CHECKS: usize = 100;
const DERIVATIVE_RTOL: f64 = 1e-5;

#[derive(Clone)]
pub struct ScalarFunction {
    name: String,
    domain: Interval,
    eval: Eval,
    derivative: Option<Eval>,
}

impl fmt::Debug for ScalarFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ScalarFunction")
            .field("name", &self.name)
            .field("domain", &self.domain)
            .field("has_derivative", &self.derivative.is_some())
            .finish()
    }
}

impl ScalarFunction {
    pub fn new(
        name: impl Into<String>,
        domain: Interval,
        eval: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Result<Self> {
        domain.validate()?;
        Ok(Self {
            name: name.into(),
            domain,
            eval: Arc::new(eval),
            derivative: None,
        })
    }

    /// Attaches a derivative after checking it against central differences
    /// at random interior points.
    pub fn with_derivative(mut self, derivative: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Result<Self> {
        let derivative: Eval = Arc::new(derivative);
        let window = self
            .domain
            .intersect(&Interval::closed(-10.0, 10.0))
            .unwrap_or(self.domain);
        let span = window.hi - window.lo;
        let (lo, hi) = (window.lo + 0.01 * span, window.hi - 0.01 * span);
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        for _ in 0..DERIVATIVE_CHECKS {
            let t = rng.gen_range(lo..hi);
            let h = 1e-5 * t.abs().max(1.0);
            let fd = ((self.eval)(t + h) - (self.eval)(t - h)) / (2.0 * h);
            let d = derivative(t);
            if !((d - fd).abs() <= DERIVATIVE_RTOL * d.abs().max(fd.abs()).max(1.0)) {
                return Err(Error::DerivativeMismatch {
                    function: self.name.clone(),
                    at: t,
                    derivative: d,
                    finite_difference: fd,
                });
            }
        }
        self.derivative = Some(derivative);
        Ok(self)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn domain(&self) -> &Interval {
        &self.domain
    }

    pub fn has_derivative(&self) -> bool {
        self.derivative.is_some()
    }

    /// Evaluates inside the domain, erroring outside it.
    pub fn eval(&self, t: f64) -> Result<f64> {
        if !self.domain.contains(t) {
            return Err(Error::OutsideDomain {
                function: self.name.clone(),
                point: vec![t],
            });
        }
        Ok((self.eval)(t))
    }

    /// Evaluates without the domain check.
    pub fn value(&self, t: f64) -> f64 {
        (self.eval)(t)
    }

    pub fn derivative_at(&self, t: f64) -> Option<f64> {
        self.derivative.as_ref().map(|d| d(t))
    }

    pub fn derivative_or_err(&self, t: f64) -> Result<f64> {
        self.derivative_at(t).ok_or_else(|| Error::MissingDerivative {
            function: self.name.clone(),
        })
    }

    /// Checks that every value lies in the domain.
    pub fn check_domain(&self, ts: &[f64]) -> Result<()> {
        match ts.iter().find(|&&t| !self.domain.contains(t)) {
            Some(&t) => Err(Error::OutsideDomain {
                function: self.name.clone(),
                point: vec![t],
            }),
            None => Ok(()),
        }
    }

    /// `−f`, with the derivative negated as well.
    pub fn negated(&self) -> Self {
        let eval = self.eval.clone();
        let derivative = self.derivative.clone().map(|d| -> Eval { Arc::new(move |t| -d(t)) });
        Self {
            name: format!("-{}", self.name),
            domain: self.domain,
            eval: Arc::new(move |t| -eval(t)),
            derivative,
        }
    }

    /// `t ↦ t·e^t`: concave on (−∞, −2], convex on [−2, ∞), minimum at −1.
    pub fn xexp() -> Self {
        builtin(
            "xexp",
            Interval::real_line(),
            |t| t * t.exp(),
            Some(|t: f64| (1.0 + t) * t.exp()),
        )
    }

    /// `t ↦ e^{−t²}`, the radial profile of `w ↦ e^{−|w|²}`.
    pub fn gauss1d() -> Self {
        builtin(
            "gauss1d",
            Interval::real_line(),
            |t| (-t * t).exp(),
            Some(|t: f64| -2.0 * t * (-t * t).exp()),
        )
    }

    /// `t ↦ log²t` on (0, ∞): convex on (0, e], concave on [e, ∞).
    pub fn log_squared() -> Self {
        builtin(
            "log2",
            Interval::open(0.0, f64::INFINITY),
            |t| t.ln().powi(2),
            Some(|t: f64| 2.0 * t.ln() / t),
        )
    }

    pub fn square() -> Self {
        builtin("square", Interval::real_line(), |t| t * t, Some(|t: f64| 2.0 * t))
    }

    /// `t ↦ |t² − 1|`; not differentiable at ±1, so no derivative is attached.
    pub fn abs_x2_minus_1() -> Self {
        builtin(
            "absx2m1",
            Interval::real_line(),
            |t| (t * t - 1.0).abs(),
            None::<fn(f64) -> f64>,
        )
    }

    pub fn identity() -> Self {
        builtin("identity", Interval::real_line(), |t| t, Some(|_| 1.0))
    }

    pub fn abs() -> Self {
        builtin("abs", Interval::real_line(), f64::abs, None::<fn(f64) -> f64>)
    }

    pub fn exp() -> Self {
        builtin("exp", Interval::real_line(), f64::exp, Some(f64::exp))
    }

    /// `t ↦ max(t, 0)`
    pub fn positive_part() -> Self {
        builtin("relu", Interval::real_line(), |t| t.max(0.0), None::<fn(f64) -> f64>)
    }

    /// Looks up a built-in by its CLI name.
    pub fn builtin(name: &str) -> Option<Self> {
        Some(match name {
            "xexp" => Self::xexp(),
            "gauss1d" => Self::gauss1d(),
            "log2" => Self::log_squared(),
            "square" => Self::square(),
            "absx2m1" => Self::abs_x2_minus_1(),
            "identity" => Self::identity(),
            "abs" => Self::abs(),
            "exp" => Self::exp(),
            "relu" => Self::positive_part(),
            _ => return None,
        })
    }

    pub const BUILTIN_NAMES: [&'static str; 9] = [
        "xexp", "gauss1d", "log2", "square", "absx2m1", "identity", "abs", "exp", "relu",
    ];
}

fn builtin<F, D>(name: &str, domain: Interval, f: F, df: Option<D>) -> ScalarFunction
where
    F: Fn(f64) -> f64 + Send + Sync + 'static,
    D: Fn(f64) -> f64 + Send + Sync + 'static,
{
    let base = ScalarFunction::new(name, domain, f).expect("built-in domain is valid");
    match df {
        Some(df) => base.with_derivative(df).expect("built-in derivative is consistent"),
        None => base,
    }
}

impl Integrand for ScalarFunction {
    fn eval_at(&self, point: &[f64]) -> Result<f64> {
        if point.len() != 1 {
            return Err(Error::DimensionMismatch {
                expected: 1,
                found: point.len(),
            });
        }
        self.eval(point[0])
    }
}
