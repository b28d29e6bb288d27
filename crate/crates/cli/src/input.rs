//! Inline and file inputs.

use std::path::Path;
use std::str::FromStr;
use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use evalexpr::{ContextWithMutableVariables, HashMapContext, Value};
use relconvex_core::{Complex64, ComplexPolynomial, Interval, ScalarFunction, SymmetricMatrix, WeightedMeasure};

/// File contents when `arg` names an existing file, otherwise `arg` itself.
pub fn source(arg: &str) -> Result<(String, bool)> {
    let path = Path::new(arg);
    if path.is_file() {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {arg}"))?;
        return Ok((text, true));
    }
    Ok((arg.to_string(), false))
}

fn looks_like_json(text: &str) -> bool {
    matches!(text.trim_start().chars().next(), Some('[' | '{'))
}

pub fn parse_f64(token: &str) -> Result<f64> {
    let t = token.trim();
    t.parse::<f64>().map_err(|_| anyhow!("not a number: {t:?}"))
}

fn split_list(text: &str) -> impl Iterator<Item = &str> {
    text.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
}

pub fn parse_vector(arg: &str) -> Result<Vec<f64>> {
    let (text, _) = source(arg)?;
    if looks_like_json(&text) {
        return serde_json::from_str(&text).with_context(|| "vector JSON must be an array of numbers");
    }
    let v: Vec<f64> = split_list(&text).map(parse_f64).collect::<Result<_>>()?;
    if v.is_empty() {
        bail!("empty vector");
    }
    Ok(v)
}

pub fn parse_triple(arg: &str) -> Result<[f64; 3]> {
    let v = parse_vector(arg)?;
    v.try_into()
        .map_err(|v: Vec<f64>| anyhow!("expected three numbers, got {}", v.len()))
}

/// `"p:w,p:w,..."` with space-separated coordinates in `p` and an optional
/// weight (default 1), or a JSON measure.
pub fn parse_measure(arg: &str) -> Result<WeightedMeasure> {
    let (text, _) = source(arg)?;
    if looks_like_json(&text) {
        return Ok(WeightedMeasure::from_json_str(&text)?);
    }
    let mut points = Vec::new();
    let mut weights = Vec::new();
    for atom in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (p, w) = match atom.split_once(':') {
            Some((p, w)) => (p, parse_f64(w)?),
            None => (atom, 1.0),
        };
        let coords: Vec<f64> = p.split_whitespace().map(parse_f64).collect::<Result<_>>()?;
        points.push(coords);
        weights.push(w);
    }
    if points.is_empty() {
        bail!("empty measure");
    }
    Ok(WeightedMeasure::new(points, weights)?)
}

pub fn parse_samples(arg: &str) -> Result<Vec<f64>> {
    parse_vector(arg)
}

fn matrix_from_json(value: serde_json::Value) -> Result<SymmetricMatrix> {
    if value.is_object() {
        return Ok(SymmetricMatrix::from_json_str(&value.to_string())?);
    }
    let rows: Vec<Vec<f64>> = serde_json::from_value(value).context("matrix JSON must be rows of numbers")?;
    Ok(SymmetricMatrix::new(rows)?)
}

fn matrix_inline(text: &str) -> Result<SymmetricMatrix> {
    let rows: Vec<Vec<f64>> = text
        .split(';')
        .map(str::trim)
        .filter(|r| !r.is_empty())
        .map(|r| split_list(r).map(parse_f64).collect())
        .collect::<Result<_>>()?;
    Ok(SymmetricMatrix::new(rows)?)
}

/// Rows separated by `;`, or JSON (`{"n", "entries"}` or an array of rows).
pub fn parse_matrix(arg: &str) -> Result<SymmetricMatrix> {
    let (text, _) = source(arg)?;
    if looks_like_json(&text) {
        return matrix_from_json(serde_json::from_str(&text)?);
    }
    matrix_inline(&text)
}

/// Inline matrices separated by `|`, or a JSON array of matrices.
pub fn parse_matrices(arg: &str) -> Result<Vec<SymmetricMatrix>> {
    let (text, _) = source(arg)?;
    if looks_like_json(&text) {
        let values: Vec<serde_json::Value> = serde_json::from_str(&text)?;
        return values.into_iter().map(matrix_from_json).collect();
    }
    text.split('|').map(matrix_inline).collect()
}

/// `{"lambdas": [...], "matrices": [...]}` with matrices in any JSON form
/// accepted by [`parse_matrix`].
pub fn parse_trace_instance(arg: &str) -> Result<(Vec<f64>, Vec<SymmetricMatrix>)> {
    #[derive(serde::Deserialize)]
    struct Instance {
        lambdas: Vec<f64>,
        matrices: Vec<serde_json::Value>,
    }
    let (text, _) = source(arg)?;
    let inst: Instance = serde_json::from_str(&text).context("expected {\"lambdas\": [...], \"matrices\": [...]}")?;
    let mats = inst.matrices.into_iter().map(matrix_from_json).collect::<Result<_>>()?;
    Ok((inst.lambdas, mats))
}

pub fn parse_polynomial(arg: &str) -> Result<ComplexPolynomial> {
    let (text, _) = source(arg)?;
    if looks_like_json(&text) {
        return Ok(ComplexPolynomial::from_json_str(&text)?);
    }
    let coeffs: Vec<Complex64> = text
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|t| Complex64::from_str(&t.replace(' ', "")).map_err(|_| anyhow!("not a complex number: {t:?}")))
        .collect::<Result<_>>()?;
    Ok(ComplexPolynomial::new(coeffs)?)
}

/// `"lo,hi"` (closed), or bracketed like `"(0,5]"`; `inf` and `-inf` allowed.
pub fn parse_interval(arg: &str) -> Result<Interval> {
    let t = arg.trim();
    let (lo_open, rest) = match t.chars().next() {
        Some('(') => (true, &t[1..]),
        Some('[') => (false, &t[1..]),
        _ => (false, t),
    };
    let (hi_open, body) = match rest.chars().last() {
        Some(')') => (true, &rest[..rest.len() - 1]),
        Some(']') => (false, &rest[..rest.len() - 1]),
        _ => (false, rest),
    };
    let (lo, hi) = body
        .split_once(',')
        .ok_or_else(|| anyhow!("interval needs two ends: {arg:?}"))?;
    let (lo, hi) = (parse_f64(lo)?, parse_f64(hi)?);
    let iv = Interval {
        lo,
        hi,
        lo_open: lo_open || lo.is_infinite(),
        hi_open: hi_open || hi.is_infinite(),
    };
    iv.validate()?;
    Ok(iv)
}

/// A builtin by name, otherwise an expression in `t` (with `e` and `pi`
/// defined) on `domain`, or on the real line.
pub fn parse_function(expr: &str, domain: Option<&str>) -> Result<ScalarFunction> {
    if let Some(f) = ScalarFunction::builtin(expr) {
        if domain.is_some() {
            bail!("--domain applies to expressions only; {expr} has a fixed domain");
        }
        return Ok(f);
    }
    let tree = evalexpr::build_operator_tree(expr).map_err(|e| anyhow!("cannot parse {expr:?}: {e}"))?;
    let domain = match domain {
        Some(d) => parse_interval(d)?,
        None => Interval::real_line(),
    };
    let tree = Arc::new(tree);
    let eval = move |t: f64| -> f64 {
        let mut ctx = HashMapContext::new();
        let set = |ctx: &mut HashMapContext, name: &str, v: f64| ctx.set_value(name.into(), Value::Float(v));
        if set(&mut ctx, "t", t)
            .and(set(&mut ctx, "e", std::f64::consts::E))
            .and(set(&mut ctx, "pi", std::f64::consts::PI))
            .is_err()
        {
            return f64::NAN;
        }
        tree.eval_number_with_context(&ctx).unwrap_or(f64::NAN)
    };
    let probe = if domain.contains(0.0) {
        0.0
    } else if domain.is_bounded() {
        0.5 * (domain.lo + domain.hi)
    } else if domain.lo.is_finite() {
        domain.lo + 1.0
    } else {
        domain.hi - 1.0
    };
    if !eval(probe).is_finite() && !eval(probe + 0.25).is_finite() {
        bail!("expression {expr:?} does not evaluate to a number of t (tried t = {probe})");
    }
    Ok(ScalarFunction::new(expr, domain, eval)?)
}
