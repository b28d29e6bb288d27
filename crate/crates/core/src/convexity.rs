//! Points of convexity.
//!
//! `a` is a point of convexity of `f` relative to `V` when
//! `f(a) ≤ Σ λₖ f(xₖ)` for every finite probability measure on `V` with
//! barycenter `a`. A supporting line `h` with `h(a) = f(a)` and `f ≥ h` on
//! `V` is enough, and that is what [`support_line_certify`] looks for on a
//! refined grid.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::function::ScalarFunction;
use crate::measures::{Interval, Region, WeightedMeasure};
use crate::report::InequalityReport;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Side {
    /// `f(a) ≤ E f`
    Convexity,
    /// `f(a) ≥ E f`
    Concavity,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Direction {
    Left,
    Right,
}

impl Direction {
    fn sign(self) -> f64 {
        match self {
            Direction::Left => -1.0,
            Direction::Right => 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CertifyOptions {
    pub grid_points: usize,
    pub refine_depth: usize,
    pub tol: f64,
    /// Half-width used to truncate unbounded regions around `a`.
    pub horizon: f64,
    /// Open endpoints are approached to within `open_eps · span`.
    pub open_eps: f64,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        Self {
            grid_points: 4096,
            refine_depth: 20,
            tol: 1e-9,
            horizon: 50.0,
            open_eps: 1e-12,
        }
    }
}

/// Affine minorant `h(t) = slope·t + offset` touching `f` at `base_point`,
/// with the evidence that `f − h ≥ −tol` on the region.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SupportCertificate {
    pub base_point: f64,
    pub slope: f64,
    pub offset: f64,
    /// Region actually examined, after truncation and endpoint clamping.
    pub region: Interval,
    pub truncated: bool,
    pub min_margin: f64,
    pub argmin: f64,
    pub grid_points: usize,
    pub refine_depth: usize,
    pub evaluations: usize,
}

impl SupportCertificate {
    pub fn h(&self, t: f64) -> f64 {
        self.slope * t + self.offset
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum CertifyOutcome {
    Certified(SupportCertificate),
    /// `f(witness) < h(witness) − tol` for the best candidate slope.
    Refuted {
        witness: f64,
        margin: f64,
        slope: f64,
    },
}

impl CertifyOutcome {
    pub fn is_certified(&self) -> bool {
        matches!(self, CertifyOutcome::Certified(_))
    }
}

/// Bounded, clamped working interval for `v`, plus whether truncation
/// happened.
fn working_interval(
    f: &ScalarFunction,
    a: f64,
    v: &Region,
    horizon: f64,
    open_eps: f64,
) -> Result<(f64, f64, Interval, bool)> {
    let Some(iv) = v.as_interval() else {
        return Err(Error::InvalidInput(
            "support lines are certified on interval regions only".into(),
        ));
    };
    iv.validate()?;
    if !iv.contains(a) {
        return Err(Error::InvalidInput(format!("base point {a} is outside the region")));
    }
    if f.domain().intersect(iv) != Some(*iv) {
        return Err(Error::InvalidInput(format!(
            "region is not contained in the domain of {}",
            f.name()
        )));
    }
    let truncated = !iv.is_bounded();
    let iv = if truncated {
        iv.intersect(&Interval::closed(a - horizon, a + horizon))
            .expect("a lies in both")
    } else {
        *iv
    };
    let span = iv.hi - iv.lo;
    let lo = if iv.lo_open { iv.lo + open_eps * span } else { iv.lo };
    let hi = if iv.hi_open { iv.hi - open_eps * span } else { iv.hi };
    Ok((lo, hi, iv, truncated))
}

fn grid(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    let n = n.max(2);
    let step = (hi - lo) / (n - 1) as f64;
    (0..n).map(move |i| if i + 1 == n { hi } else { lo + step * i as f64 })
}

/// Supporting slope from one-sided secant extremes, for functions without
/// a derivative evaluator.
fn secant_slope(f: &ScalarFunction, a: f64, lo: f64, hi: f64, n: usize) -> f64 {
    let fa = f.value(a);
    let (mut left, mut right) = (f64::NEG_INFINITY, f64::INFINITY);
    for t in grid(lo, hi, n) {
        if t < a {
            left = left.max((fa - f.value(t)) / (a - t));
        } else if t > a {
            right = right.min((f.value(t) - fa) / (t - a));
        }
    }
    match (left.is_finite(), right.is_finite()) {
        (true, true) => 0.5 * (left + right),
        (true, false) => left,
        (false, true) => right,
        (false, false) => 0.0,
    }
}

pub fn support_line_certify(f: &ScalarFunction, a: f64, v: &Region, opts: &CertifyOptions) -> Result<CertifyOutcome> {
    let (lo, hi, region, truncated) = working_interval(f, a, v, opts.horizon, opts.open_eps)?;
    let slope = match f.derivative_at(a) {
        Some(s) => s,
        None => secant_slope(f, a, lo, hi, opts.grid_points),
    };
    let fa = f.value(a);
    let margin = |t: f64| f.value(t) - fa - slope * (t - a);

    let mut evaluations = 0usize;
    let mut worst = (a, 0.0);
    let note = |t: f64, g: f64, worst: &mut (f64, f64)| {
        if g < worst.1 || g.is_nan() {
            *worst = (t, g);
        }
    };

    let ts: Vec<f64> = grid(lo, hi, opts.grid_points).collect();
    let gs: Vec<f64> = ts.iter().map(|&t| margin(t)).collect();
    evaluations += ts.len();
    for (&t, &g) in ts.iter().zip(&gs) {
        note(t, g, &mut worst);
    }

    let flag = 10.0 * opts.tol;
    for i in 0..ts.len() - 1 {
        let (mut l, mut r, mut gl, mut gr) = (ts[i], ts[i + 1], gs[i], gs[i + 1]);
        if !(gl * gr < 0.0 || gl.min(gr) < flag) {
            continue;
        }
        for _ in 0..opts.refine_depth {
            let m = 0.5 * (l + r);
            let gm = margin(m);
            evaluations += 1;
            note(m, gm, &mut worst);
            let go_left = if gl * gm < 0.0 {
                true
            } else if gm * gr < 0.0 {
                false
            } else {
                gl <= gr
            };
            if go_left {
                (r, gr) = (m, gm);
            } else {
                (l, gl) = (m, gm);
            }
        }
    }

    let (argmin, min_margin) = worst;
    if !(min_margin >= -opts.tol) {
        return Ok(CertifyOutcome::Refuted {
            witness: argmin,
            margin: min_margin,
            slope,
        });
    }
    Ok(CertifyOutcome::Certified(SupportCertificate {
        base_point: a,
        slope,
        offset: fa - slope * a,
        region,
        truncated,
        min_margin,
        argmin,
        grid_points: opts.grid_points,
        refine_depth: opts.refine_depth,
        evaluations,
    }))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Boundary {
    /// The tangent at `a` meets the graph again at `point`.
    Finite { point: f64, residual: f64 },
    /// No crossing before the horizon or the end of the domain.
    Unbounded { searched_to: f64 },
}

impl Boundary {
    pub fn point(&self) -> Option<f64> {
        match self {
            Boundary::Finite { point, .. } => Some(*point),
            Boundary::Unbounded { .. } => None,
        }
    }
}

pub const DEFAULT_BOUNDARY_HORIZON: f64 = 50.0;

/// Nearest point in `direction` where the tangent line at `a` crosses the
/// graph of `f`; bracketing by a marching scan, bisection, then Newton to
/// `|f − h| ≤ tol`.
pub fn convexity_boundary(f: &ScalarFunction, a: f64, direction: Direction, tol: f64) -> Result<Boundary> {
    convexity_boundary_within(f, a, direction, tol, DEFAULT_BOUNDARY_HORIZON)
}

pub fn convexity_boundary_within(
    f: &ScalarFunction,
    a: f64,
    direction: Direction,
    tol: f64,
    horizon: f64,
) -> Result<Boundary> {
    let slope = f.derivative_or_err(a)?;
    let dom = f.domain();
    if !dom.contains(a) {
        return Err(Error::OutsideDomain {
            function: f.name().to_string(),
            point: vec![a],
        });
    }
    let dir = direction.sign();
    let fa = f.value(a);
    let g = |t: f64| f.value(t) - fa - slope * (t - a);
    let dg = |t: f64| f.derivative_at(t).expect("checked above") - slope;

    let edge = if dir > 0.0 { dom.hi } else { dom.lo };
    let limit = if edge.is_finite() && (edge - a).abs() < horizon {
        let open = if dir > 0.0 { dom.hi_open } else { dom.lo_open };
        if open {
            edge - dir * 1e-12 * (edge - a).abs()
        } else {
            edge
        }
    } else {
        a + dir * horizon
    };

    let step = a.abs().max(1.0) / 256.0;
    let mut sign = 0.0;
    let mut t = a;
    loop {
        let next = t + dir * step;
        let next = if (next - limit) * dir >= 0.0 { limit } else { next };
        let gn = g(next);
        if sign == 0.0 {
            if gn != 0.0 {
                sign = gn.signum();
            }
        } else if gn.signum() == -sign {
            return polish(&g, &dg, t, next, tol).map(|(point, residual)| Boundary::Finite { point, residual });
        }
        t = next;
        if t == limit {
            break;
        }
    }
    Ok(Boundary::Unbounded { searched_to: limit })
}

/// Root of `g` in the bracket `[p, q]` (unordered).
fn polish(g: &impl Fn(f64) -> f64, dg: &impl Fn(f64) -> f64, p: f64, q: f64, tol: f64) -> Result<(f64, f64)> {
    let (mut lo, mut hi) = if p < q { (p, q) } else { (q, p) };
    let mut glo = g(lo);
    // shrink to a narrow bracket first so Newton starts in its basin
    for _ in 0..40 {
        let mid = 0.5 * (lo + hi);
        let gm = g(mid);
        if gm == 0.0 {
            return Ok((mid, 0.0));
        }
        if gm.signum() == glo.signum() {
            lo = mid;
            glo = gm;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-6 * mid.abs().max(1.0) {
            break;
        }
    }
    let mut t = 0.5 * (lo + hi);
    for _ in 0..100 {
        let gt = g(t);
        if gt.abs() <= tol {
            return Ok((t, gt.abs()));
        }
        let d = dg(t);
        let newton = t - gt / d;
        if gt.signum() == glo.signum() {
            lo = t;
        } else {
            hi = t;
        }
        t = if d != 0.0 && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if hi - lo <= f64::EPSILON * t.abs().max(1.0) {
            let gt = g(t);
            return Ok((t, gt.abs()));
        }
    }
    Err(Error::NoConvergence {
        iterations: 100,
        detail: format!("boundary polish stalled near {t}"),
    })
}

/// Checks `f(a) ≤ ∫ f dμ` at `a` for a given probability measure with
/// barycenter `a`, on the convex or concave side.
pub fn jensen_at_point_verify(
    f: &ScalarFunction,
    a: f64,
    mu: &WeightedMeasure,
    side: Side,
    tol: f64,
) -> Result<InequalityReport> {
    if mu.dimension() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            found: mu.dimension(),
        });
    }
    let mu = mu.normalize();
    let b = mu.barycenter()[0];
    if (b - a).abs() > tol {
        return Err(Error::Hypothesis(format!("barycenter {b} differs from the point {a}")));
    }
    let fa = f.eval(a)?;
    let mean = mu.expectation(f)?;
    Ok(match side {
        Side::Convexity => InequalityReport::le(fa, mean, tol),
        Side::Concavity => InequalityReport::ge(fa, mean, tol),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum FalsifierOutcome {
    Pass {
        trials: usize,
    },
    Counterexample {
        measure: WeightedMeasure,
        violation: f64,
        trial: usize,
    },
}

impl FalsifierOutcome {
    pub fn is_pass(&self) -> bool {
        matches!(self, FalsifierOutcome::Pass { .. })
    }
}

/// Random search for probability measures on `v` with barycenter `a` that
/// violate `f(a) ≤ E f` by more than `tol`. Samples two-point measures at
/// global and local scales, and mixtures of several of them.
pub fn random_convexity_falsifier(
    f: &ScalarFunction,
    a: f64,
    v: &Region,
    trials: usize,
    seed: u64,
    tol: f64,
) -> Result<FalsifierOutcome> {
    let opts = CertifyOptions::default();
    let (lo, hi, _, _) = working_interval(f, a, v, opts.horizon, opts.open_eps)?;
    if !(lo < a && a < hi) {
        // only δ_a has barycenter a
        return Ok(FalsifierOutcome::Pass { trials });
    }
    let fa = f.value(a);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let two_point = |rng: &mut ChaCha8Rng| -> (f64, f64, f64, f64) {
        let (u, w) = if rng.gen_bool(0.5) {
            (rng.gen_range(lo..a), rng.gen_range(a..hi))
        } else {
            let r = (hi - lo) * 10f64.powf(-rng.gen_range(0.0..6.0));
            let u = (a - r * rng.gen_range(0.05..=1.0)).max(lo);
            let w = (a + r * rng.gen_range(0.05..=1.0)).min(hi);
            (u, w)
        };
        let pu = (w - a) / (w - u);
        (u, pu, w, 1.0 - pu)
    };

    for trial in 0..trials {
        let parts = if rng.gen_bool(0.5) { 1 } else { rng.gen_range(2..=4) };
        let mut points = Vec::with_capacity(2 * parts);
        let mut weights = Vec::with_capacity(2 * parts);
        let mix: Vec<f64> = (0..parts).map(|_| rng.gen_range(0.1..1.0)).collect();
        let total: f64 = mix.iter().sum();
        for m in mix {
            let (u, pu, w, pw) = two_point(&mut rng);
            for (p, q) in [(u, pu), (w, pw)] {
                if q > 0.0 {
                    points.push(p);
                    weights.push(q * m / total);
                }
            }
        }
        let mean: f64 = points.iter().zip(&weights).map(|(p, q)| q * f.value(*p)).sum();
        let violation = fa - mean;
        if violation > tol {
            let measure = WeightedMeasure::on_line(&points, &weights)?;
            return Ok(FalsifierOutcome::Counterexample {
                measure,
                violation,
                trial,
            });
        }
    }
    Ok(FalsifierOutcome::Pass { trials })
}

/// `φ(r₀) + φ'(r₀)(t − r₀) − φ(|t|)`: how far the tangent of an even radial
/// profile at `r₀` lies above the profile at `t`.
pub fn profile_tangent_margin(profile: &ScalarFunction, r0: f64, t: f64) -> Result<f64> {
    let d = profile.derivative_or_err(r0)?;
    Ok(profile.value(r0) + d * (t - r0) - profile.value(t.abs()))
}

/// Tangent plane of `w ↦ φ(|w|)` at `w0`, minus the surface, at `w`.
/// Bounded below by [`profile_tangent_margin`] at `t = |w|` whenever
/// `φ' ≤ 0` at `|w0|`, with equality on the line through `w0` and the origin.
pub fn radial_tangent_plane_margin(profile: &ScalarFunction, w0: [f64; 2], w: [f64; 2]) -> Result<f64> {
    let r0 = w0[0].hypot(w0[1]);
    let d = profile.derivative_or_err(r0)?;
    let along = if r0 > 0.0 {
        ((w[0] - w0[0]) * w0[0] + (w[1] - w0[1]) * w0[1]) / r0
    } else {
        0.0
    };
    Ok(profile.value(r0) + d * along - profile.value(w[0].hypot(w[1])))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn whole(lo: f64, hi: f64) -> Region {
        Region::Interval(Interval::closed(lo, hi))
    }

    #[test]
    fn square_at_its_minimum() {
        let out = support_line_certify(
            &ScalarFunction::square(),
            0.0,
            &whole(-1.0, 1.0),
            &CertifyOptions::default(),
        )
        .unwrap();
        let CertifyOutcome::Certified(c) = out else {
            panic!("{out:?}")
        };
        assert_eq!(c.slope, 0.0);
        assert_eq!(c.min_margin, 0.0);
        assert_eq!(c.argmin, 0.0);
    }

    #[test]
    fn xexp_certified_at_minus_one_refuted_at_minus_three() {
        let f = ScalarFunction::xexp();
        let opts = CertifyOptions::default();
        assert!(support_line_certify(&f, -1.0, &whole(-20.0, 20.0), &opts)
            .unwrap()
            .is_certified());
        match support_line_certify(&f, -3.0, &whole(-20.0, 20.0), &opts).unwrap() {
            CertifyOutcome::Refuted { witness, margin, .. } => {
                // direct evaluation of f − h at the witness
                let h = f.value(-3.0) + f.derivative_at(-3.0).unwrap() * (witness + 3.0);
                assert!((f.value(witness) - h - margin).abs() < 1e-12);
                assert!(margin < -1e-9);
            }
            other => panic!("expected refutation, got {other:?}"),
        }
        // oracle: the tangent at −3 lies above the graph at −3 ± 1/2
        for t in [-3.5, -2.5] {
            let h = f.value(-3.0) + f.derivative_at(-3.0).unwrap() * (t + 3.0);
            assert!(f.value(t) < h);
        }
    }

    #[test]
    fn region_checks() {
        let f = ScalarFunction::log_squared();
        let opts = CertifyOptions::default();
        assert!(support_line_certify(&f, 3.0, &whole(0.5, 2.0), &opts).is_err());
        assert!(support_line_certify(&f, 1.0, &whole(0.0, 2.0), &opts).is_err());
        let disc = Region::disc([0.0, 0.0], 1.0).unwrap();
        assert!(support_line_certify(&f, 1.0, &disc, &opts).is_err());
    }

    #[test]
    fn unbounded_region_is_truncated() {
        let f = ScalarFunction::xexp();
        let out = support_line_certify(
            &f,
            0.0,
            &Region::Interval(Interval::real_line()),
            &CertifyOptions::default(),
        )
        .unwrap();
        let CertifyOutcome::Certified(c) = out else { panic!() };
        assert!(c.truncated);
        assert_eq!((c.region.lo, c.region.hi), (-50.0, 50.0));
    }

    #[test]
    fn secant_slope_without_derivative() {
        let f = ScalarFunction::abs_x2_minus_1();
        let opts = CertifyOptions::default();
        let out = support_line_certify(&f, 1.5, &whole(-10.0, 10.0), &opts).unwrap();
        let CertifyOutcome::Certified(c) = out else {
            panic!("{out:?}")
        };
        assert!((c.slope - 3.0).abs() < 0.05);
        // kink at 1 is a global minimum of |t² − 1|
        assert!(support_line_certify(&f, 1.0, &whole(-10.0, 10.0), &opts)
            .unwrap()
            .is_certified());
        // 0 is a local maximum
        assert!(!support_line_certify(&f, 0.0, &whole(-10.0, 10.0), &opts)
            .unwrap()
            .is_certified());
    }

    #[test]
    fn boundary_constants() {
        let b = convexity_boundary(&ScalarFunction::log_squared(), 2.0, Direction::Right, 1e-12).unwrap();
        assert!((b.point().unwrap() - 5.495869874).abs() < 1e-6);
        let b = convexity_boundary(&ScalarFunction::gauss1d(), 0.5, Direction::Right, 1e-12).unwrap();
        assert!((b.point().unwrap() - 1.183802).abs() < 1e-5);
        for a in [-3.0, 0.0, 2.5] {
            let b = convexity_boundary(&ScalarFunction::square(), a, Direction::Right, 1e-12).unwrap();
            assert!(matches!(b, Boundary::Unbounded { .. }));
        }
        let b = convexity_boundary(&ScalarFunction::log_squared(), 2.0, Direction::Left, 1e-12).unwrap();
        assert!(matches!(b, Boundary::Unbounded { searched_to } if searched_to > 0.0 && searched_to < 1e-9));
        let err = convexity_boundary(&ScalarFunction::abs(), 1.0, Direction::Right, 1e-12).unwrap_err();
        assert!(matches!(err, Error::MissingDerivative { .. }));
    }

    #[test]
    fn jensen_examples() {
        let f = ScalarFunction::xexp();
        let r = jensen_at_point_verify(
            &f,
            0.7,
            &WeightedMeasure::dirac(vec![0.7], 1.0).unwrap(),
            Side::Convexity,
            1e-12,
        )
        .unwrap();
        assert_eq!(r.slack(), 0.0);

        let mu = WeightedMeasure::uniform_on_line(&[-4.0, 2.0]).unwrap();
        let r = jensen_at_point_verify(&f, -1.0, &mu, Side::Convexity, 1e-9).unwrap();
        assert!((r.lhs + (-1.0f64).exp()).abs() < 1e-15);
        let rhs = (-4.0 * (-4.0f64).exp() + 2.0 * 2f64.exp()) / 2.0;
        assert!((r.rhs - rhs).abs() < 1e-12);
        assert!((r.rhs - 7.3524).abs() < 1e-4);
        assert!(r.holds());

        let g = ScalarFunction::gauss1d();
        let mu = WeightedMeasure::uniform_on_line(&[-0.5, 0.5]).unwrap();
        let r = jensen_at_point_verify(&g, 0.0, &mu, Side::Concavity, 1e-12).unwrap();
        assert_eq!(r.lhs, 1.0);
        assert!((r.rhs - (-0.25f64).exp()).abs() < 1e-15);
        assert!(r.holds());

        let err = jensen_at_point_verify(&f, 0.0, &mu, Side::Convexity, 1e-9);
        assert!(err.is_ok());
        let err = jensen_at_point_verify(&f, 1.0, &mu, Side::Convexity, 1e-9).unwrap_err();
        assert!(matches!(err, Error::Hypothesis(_)));
    }

    #[test]
    fn falsifier_examples() {
        let sq = ScalarFunction::square();
        for a in [-3.0, 0.0, 4.0] {
            let out = random_convexity_falsifier(&sq, a, &whole(-5.0, 5.0), 2000, 1, 1e-9).unwrap();
            assert!(out.is_pass());
        }
        let f = ScalarFunction::xexp();
        match random_convexity_falsifier(&f, -3.0, &whole(-10.0, 10.0), 10_000, 42, 1e-9).unwrap() {
            FalsifierOutcome::Counterexample { measure, violation, .. } => {
                assert!((measure.normalize().barycenter()[0] + 3.0).abs() < 1e-9);
                let direct = f.value(-3.0) - measure.normalize().expectation(&f).unwrap();
                assert!((direct - violation).abs() < 1e-9);
                assert!(direct > 0.0);
            }
            FalsifierOutcome::Pass { .. } => panic!("−3 is not a point of convexity of t·e^t"),
        }
        let g = ScalarFunction::abs_x2_minus_1();
        assert!(
            random_convexity_falsifier(&g, 1.5, &whole(-10.0, 10.0), 10_000, 42, 1e-9)
                .unwrap()
                .is_pass()
        );
        assert!(
            !random_convexity_falsifier(&g, 0.0, &whole(-10.0, 10.0), 10_000, 42, 1e-9)
                .unwrap()
                .is_pass()
        );
    }

    #[test]
    fn radial_margins_agree_on_the_axis() {
        let g = ScalarFunction::gauss1d();
        let w0 = [0.3, 0.4];
        for t in [-1.0, -0.2, 0.0, 0.5, 1.1] {
            let w = [0.6 * t, 0.8 * t];
            let two = radial_tangent_plane_margin(&g, w0, w).unwrap();
            let one = profile_tangent_margin(&g, 0.5, t).unwrap();
            assert!((two - one).abs() < 1e-14);
        }
    }
}
