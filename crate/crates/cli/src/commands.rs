//! One handler per subcommand. Each returns the deterministic part of the
//! run report.

use anyhow::{bail, Result};
use serde_json::{json, Value};

use relconvex_core::convexity::{convexity_boundary_within, random_convexity_falsifier, support_line_certify};
use relconvex_core::inequalities::{
    bnl_triplet_verify, borwein_girgensohn_constant, borwein_girgensohn_verify, popoviciu_verify, popoviciu_witness,
    probabilistic_jensen_verify, xexp_weighted_jensen_verify, Distribution,
};
use relconvex_core::majorization::{hlp_convex_sum_check, hlp_transfer_matrix, is_majorized, majorization_gap};
use relconvex_core::polyroots::{
    debruijn_springer_verify, gauss_lucas_check, malamud_majorization_check, r_star, relative_concavity_verify, roots,
    DEFAULT_ROOT_TOL,
};
use relconvex_core::spectra::{jacobi_eigen, schur_horn_check, trace_f, trace_inequality_verify, DEFAULT_EIGEN_TOL};
use relconvex_core::transport::weighted_majorization_decide;
use relconvex_core::{
    Boundary, CertifyOptions, CertifyOutcome, Complex64, Direction, FeasibilityVerdict, Region, ScalarFunction,
};

use crate::args::{
    BoundaryArgs, CertifyArgs, DirectionArg, FunctionArgs, MajorizeArgs, PlaneFunction, PolyCommand, SpectraCommand,
    TransportArgs, VerifyCommand,
};
use crate::input::{
    parse_function, parse_interval, parse_matrices, parse_matrix, parse_measure, parse_polynomial, parse_samples,
    parse_trace_instance, parse_triple, parse_vector,
};

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub inputs: Value,
    pub verdict: Option<bool>,
    pub value: Value,
    pub residuals: Value,
    pub tolerances: Value,
}

impl Outcome {
    fn new(inputs: Value, verdict: Option<bool>, value: Value, tol: f64) -> Self {
        Self {
            inputs,
            verdict,
            value,
            residuals: Value::Null,
            tolerances: json!({ "tol": tol }),
        }
    }

    fn with_residuals(mut self, residuals: Value) -> Self {
        self.residuals = residuals;
        self
    }

    fn with_tolerances(mut self, tolerances: Value) -> Self {
        self.tolerances = tolerances;
        self
    }
}

fn function(args: &FunctionArgs) -> Result<ScalarFunction> {
    parse_function(&args.function, args.domain.as_deref())
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(u, v)| (u - v).abs()).fold(0.0, f64::max)
}

pub fn majorize(args: &MajorizeArgs, tol: f64) -> Result<Outcome> {
    let x = parse_vector(&args.x)?;
    let y = parse_vector(&args.y)?;
    let gap = majorization_gap(&x, &y)?;
    let verdict = is_majorized(&x, &y, tol)?;
    let mut value = json!({ "gap": gap });
    let mut residuals = Value::Null;
    if args.witness && verdict {
        let a = hlp_transfer_matrix(&x, &y, tol)?;
        let residual = max_abs_diff(&x, &a.apply(&y));
        value["witness"] = json!(a.entries());
        residuals = json!({ "x_minus_ay_inf": residual });
    }
    if let Some(name) = &args.function {
        let Some(f) = ScalarFunction::builtin(name) else {
            bail!(
                "unknown builtin {name:?}; expected one of {:?}",
                ScalarFunction::BUILTIN_NAMES
            );
        };
        value["convex_sum"] = json!(hlp_convex_sum_check(&x, &y, &f, tol)?);
    }
    let inputs = json!({ "x": x, "y": y, "witness": args.witness, "fn": args.function });
    Ok(Outcome::new(inputs, Some(verdict), value, tol).with_residuals(residuals))
}

pub fn transport(args: &TransportArgs, tol: f64) -> Result<Outcome> {
    let mu_x = parse_measure(&args.mu_x)?;
    let mu_y = parse_measure(&args.mu_y)?;
    let inputs = json!({ "mu_x": mu_x.to_json_value(), "mu_y": mu_y.to_json_value(), "witness": args.witness });
    Ok(match weighted_majorization_decide(&mu_x, &mu_y, tol)? {
        FeasibilityVerdict::Feasible(cert) => {
            let mut value = json!({ "relation": "feasible" });
            if args.witness {
                value["certificate"] = cert.to_json_value();
            }
            Outcome::new(inputs, Some(true), value, tol).with_residuals(json!(cert.residuals()))
        }
        FeasibilityVerdict::Infeasible(objective) => Outcome::new(
            inputs,
            Some(false),
            json!({ "relation": "infeasible", "phase_one_objective": objective }),
            tol,
        ),
    })
}

pub fn certify(args: &CertifyArgs, tol: f64) -> Result<Outcome> {
    let f = function(&args.function)?;
    let iv = parse_interval(&args.region)?;
    let region = Region::interval(iv)?;
    let opts = CertifyOptions {
        grid_points: args.grid,
        refine_depth: args.depth,
        tol,
        ..CertifyOptions::default()
    };
    let outcome = support_line_certify(&f, args.at, &region, &opts)?;
    let mut verdict = outcome.is_certified();
    let mut value = json!({ "outcome": outcome });
    if let Some(trials) = args.falsify {
        let found = random_convexity_falsifier(&f, args.at, &region, trials, args.seed, tol)?;
        verdict &= found.is_pass();
        value["falsifier"] = json!(found);
    }
    let inputs = json!({
        "fn": f.name(), "at": args.at, "region": iv, "grid": args.grid, "depth": args.depth,
        "falsify": args.falsify, "seed": args.seed,
    });
    let residuals = match &outcome {
        CertifyOutcome::Certified(c) => json!({ "min_margin": c.min_margin }),
        CertifyOutcome::Refuted { margin, .. } => json!({ "margin": margin }),
    };
    Ok(Outcome::new(inputs, Some(verdict), value, tol).with_residuals(residuals))
}

pub fn boundary(args: &BoundaryArgs, tol: f64) -> Result<Outcome> {
    let f = function(&args.function)?;
    let direction = match args.direction {
        DirectionArg::Left => Direction::Left,
        DirectionArg::Right => Direction::Right,
    };
    let b = convexity_boundary_within(&f, args.at, direction, tol, args.horizon)?;
    let inputs = json!({ "fn": f.name(), "at": args.at, "direction": direction, "horizon": args.horizon });
    let (value, residuals) = match b {
        Boundary::Finite { point, residual } => (json!({ "point": point }), json!({ "tangent_gap": residual })),
        Boundary::Unbounded { searched_to } => (json!({ "point": null, "searched_to": searched_to }), Value::Null),
    };
    Ok(Outcome::new(inputs, None, value, tol).with_residuals(residuals))
}

pub fn verify(cmd: &VerifyCommand, tol: f64) -> Result<Outcome> {
    match cmd {
        VerifyCommand::Popoviciu { function: fa, points } => {
            let f = function(fa)?;
            let [a, b, c] = parse_triple(points)?;
            let report = popoviciu_verify(&f, a, b, c, tol)?;
            let witness = popoviciu_witness(a, b, c);
            let value =
                json!({ "inequality": report, "witness": witness, "witness_majorized": witness.is_majorized(tol) });
            Ok(Outcome::new(
                json!({ "fn": f.name(), "points": [a, b, c] }),
                Some(report.holds()),
                value,
                tol,
            ))
        }
        VerifyCommand::Xexp { lambdas, xs } => {
            let (lambdas, xs) = (parse_vector(lambdas)?, parse_vector(xs)?);
            let report = xexp_weighted_jensen_verify(&lambdas, &xs, tol)?;
            let inputs = json!({ "lambdas": lambdas, "xs": xs });
            Ok(Outcome::new(
                inputs,
                Some(report.holds()),
                json!({ "inequality": report }),
                tol,
            ))
        }
        VerifyCommand::Bg { xs } => {
            let xs = parse_vector(xs)?;
            let report = borwein_girgensohn_verify(&xs, tol)?;
            let value = json!({ "inequality": report, "constant": borwein_girgensohn_constant(xs.len()) });
            Ok(Outcome::new(json!({ "xs": xs }), Some(report.holds()), value, tol))
        }
        VerifyCommand::Bnl { x, y } => {
            let (x, y) = (parse_triple(x)?, parse_triple(y)?);
            let report = bnl_triplet_verify(x, y, tol)?;
            Ok(Outcome::new(
                json!({ "x": x, "y": y }),
                Some(report.holds()),
                json!({ "inequality": report }),
                tol,
            ))
        }
        VerifyCommand::Jensen {
            function: fa,
            measure,
            samples,
            truncate,
        } => {
            let f = function(fa)?;
            let dist = match (measure, samples) {
                (Some(m), _) => Distribution::Discrete(parse_measure(m)?),
                (None, Some(s)) => Distribution::Samples(parse_samples(s)?),
                (None, None) => bail!("give --measure or --samples"),
            };
            let report = probabilistic_jensen_verify(&dist, &f, *truncate, tol)?;
            let law = match &dist {
                Distribution::Discrete(m) => m.to_json_value(),
                Distribution::Samples(s) => json!(s),
            };
            let inputs = json!({ "fn": f.name(), "law": law, "truncate": truncate });
            Ok(Outcome::new(inputs, Some(report.holds()), json!(report), tol))
        }
    }
}

pub fn spectra(cmd: &SpectraCommand, tol: f64) -> Result<Outcome> {
    match cmd {
        SpectraCommand::Eigen { matrix } => {
            let a = parse_matrix(matrix)?;
            let e = jacobi_eigen(&a, DEFAULT_EIGEN_TOL);
            let n = a.order();
            let vectors: Vec<Vec<f64>> = e.vectors.chunks(n).map(<[f64]>::to_vec).collect();
            let value = json!({ "eigenvalues": e.values, "eigenvectors": vectors, "sweeps": e.sweeps });
            let residuals = json!({
                "aq_minus_qd_inf": e.residual(&a),
                "relative": e.residual(&a) / a.norm_inf().max(f64::MIN_POSITIVE),
                "orthogonality": e.orthogonality_defect(),
            });
            Ok(Outcome::new(json!({ "matrix": a.rows() }), None, value, tol)
                .with_residuals(residuals)
                .with_tolerances(json!({ "tol": tol, "eigen_tol": DEFAULT_EIGEN_TOL })))
        }
        SpectraCommand::TraceF { function: fa, matrix } => {
            let f = function(fa)?;
            let a = parse_matrix(matrix)?;
            let value = json!({ "trace": trace_f(&a, &f)? });
            Ok(Outcome::new(
                json!({ "fn": f.name(), "matrix": a.rows() }),
                None,
                value,
                tol,
            ))
        }
        SpectraCommand::TraceIneq {
            lambdas,
            matrices,
            input,
        } => {
            let (lambdas, mats) = match (input, lambdas, matrices) {
                (Some(input), _, _) => parse_trace_instance(input)?,
                (None, Some(l), Some(m)) => (parse_vector(l)?, parse_matrices(m)?),
                _ => bail!("give --input, or both --lambdas and --matrices"),
            };
            let report = trace_inequality_verify(&lambdas, &mats, tol)?;
            let inputs = json!({ "lambdas": lambdas, "matrices": mats.iter().map(|m| m.rows()).collect::<Vec<_>>() });
            Ok(Outcome::new(inputs, Some(report.holds()), json!(report), tol))
        }
        SpectraCommand::SchurHorn { matrix } => {
            let a = parse_matrix(matrix)?;
            let e = jacobi_eigen(&a, DEFAULT_EIGEN_TOL);
            let verdict = schur_horn_check(&a, tol)?;
            let value = json!({ "diagonal": a.diag(), "eigenvalues": e.values });
            Ok(Outcome::new(json!({ "matrix": a.rows() }), Some(verdict), value, tol)
                .with_residuals(json!({ "aq_minus_qd_inf": e.residual(&a) })))
        }
    }
}

fn pairs(zs: &[Complex64]) -> Value {
    json!(zs.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>())
}

fn plane_function(f: PlaneFunction) -> (&'static str, fn(Complex64) -> f64) {
    match f {
        PlaneFunction::Abs2 => ("|z|^2", |z| z.norm_sqr()),
        PlaneFunction::Re => ("Re z", |z| z.re),
        PlaneFunction::AbsRe => ("|Re z|", |z| z.re.abs()),
        PlaneFunction::PosRe => ("max(Re z, 0)", |z| z.re.max(0.0)),
    }
}

pub fn poly(cmd: &PolyCommand, tol: f64) -> Result<Outcome> {
    let coeffs = match cmd {
        PolyCommand::Roots(c) | PolyCommand::GaussLucas(c) | PolyCommand::RelConcave(c) => c,
        PolyCommand::Malamud { coeffs, .. } | PolyCommand::Dbs { coeffs, .. } => coeffs,
    };
    let p = parse_polynomial(&coeffs.coeffs)?;
    let inputs = json!({ "coefficients": p.to_json_value() });
    let root_tols = json!({ "tol": tol, "root_tol": DEFAULT_ROOT_TOL });
    match cmd {
        PolyCommand::Roots(_) => {
            let rs = roots(&p, DEFAULT_ROOT_TOL)?;
            let residuals: Vec<f64> = rs.iter().map(|&r| p.eval(r).norm() / p.abs_bound(r)).collect();
            Ok(Outcome::new(inputs, None, json!({ "roots": pairs(&rs) }), tol)
                .with_residuals(json!({ "relative": residuals }))
                .with_tolerances(root_tols))
        }
        PolyCommand::GaussLucas(_) => {
            let verdict = gauss_lucas_check(&p, tol)?;
            let value = json!({
                "roots": pairs(&roots(&p, DEFAULT_ROOT_TOL)?),
                "critical_points": pairs(&roots(&p.derivative()?, DEFAULT_ROOT_TOL)?),
            });
            Ok(Outcome::new(inputs, Some(verdict), value, tol).with_tolerances(root_tols))
        }
        PolyCommand::Malamud { witness, .. } => match malamud_majorization_check(&p, tol)? {
            FeasibilityVerdict::Feasible(cert) => {
                let mut value = json!({ "relation": "feasible" });
                if *witness {
                    value["certificate"] = cert.to_json_value();
                }
                Ok(Outcome::new(inputs, Some(true), value, tol)
                    .with_residuals(json!(cert.residuals()))
                    .with_tolerances(root_tols))
            }
            FeasibilityVerdict::Infeasible(objective) => {
                let value = json!({ "relation": "infeasible", "phase_one_objective": objective });
                Ok(Outcome::new(inputs, Some(false), value, tol).with_tolerances(root_tols))
            }
        },
        PolyCommand::Dbs { function, .. } => {
            let (name, f) = plane_function(*function);
            let report = debruijn_springer_verify(&p, &f, tol)?;
            let value = json!({ "fn": name, "inequality": report });
            Ok(Outcome::new(inputs, Some(report.holds()), value, tol).with_tolerances(root_tols))
        }
        PolyCommand::RelConcave(_) => {
            let report = relative_concavity_verify(&p, tol)?;
            let value = json!({ "inequality": report, "r_star": r_star()?, "critical_radius": 0.5 });
            Ok(Outcome::new(inputs, Some(report.holds()), value, tol).with_tolerances(root_tols))
        }
    }
}
