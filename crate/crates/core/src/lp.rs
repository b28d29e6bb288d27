//! Dense phase-1 simplex for equality-constrained feasibility problems
//! `A x = b, x >= 0`. Artificial variables start in the basis; Bland's rule
//! picks both the entering and the leaving variable, so degenerate systems
//! (repeated support points, redundant rows) terminate.

use crate::error::{Error, Result};

const PIVOT_EPS: f64 = 1e-11;
const COST_EPS: f64 = 1e-12;

#[derive(Debug, Clone)]
pub(crate) struct PhaseOne {
    /// Values of the structural variables at the terminal vertex.
    pub x: Vec<f64>,
    /// Sum of artificial variables at termination; zero iff feasible.
    pub objective: f64,
    #[allow(dead_code)]
    pub pivots: usize,
}

/// Minimizes the sum of artificials for `A x = b`, `x >= 0`.
///
/// `a` is row-major with `b.len()` rows, each of length `cols`.
pub(crate) fn phase_one(a: &[Vec<f64>], b: &[f64], cols: usize) -> Result<PhaseOne> {
    let rows = b.len();
    if a.len() != rows {
        return Err(Error::LengthMismatch {
            left: a.len(),
            right: rows,
        });
    }
    if let Some(r) = a.iter().find(|r| r.len() != cols) {
        return Err(Error::LengthMismatch {
            left: r.len(),
            right: cols,
        });
    }
    if rows == 0 {
        return Ok(PhaseOne {
            x: vec![0.0; cols],
            objective: 0.0,
            pivots: 0,
        });
    }

    // columns: structural 0..cols, artificial cols..cols+rows, rhs last
    let width = cols + rows + 1;
    let rhs = width - 1;
    let mut t = vec![vec![0.0; width]; rows];
    for i in 0..rows {
        let sign = if b[i] < 0.0 { -1.0 } else { 1.0 };
        for j in 0..cols {
            t[i][j] = sign * a[i][j];
        }
        t[i][cols + i] = 1.0;
        t[i][rhs] = sign * b[i];
    }
    let mut basis: Vec<usize> = (cols..cols + rows).collect();

    // reduced costs of the phase-1 objective (sum of artificials)
    let mut cost = vec![0.0; width];
    for row in &t {
        for j in 0..cols {
            cost[j] -= row[j];
        }
        cost[rhs] -= row[rhs];
    }

    let max_pivots = 50 * (rows + cols) + 1000;
    let mut pivots = 0;
    loop {
        let entering = (0..cols).find(|&j| cost[j] < -COST_EPS);
        let Some(e) = entering else { break };

        let mut leave: Option<(usize, f64)> = None;
        for i in 0..rows {
            let coef = t[i][e];
            if coef <= PIVOT_EPS {
                continue;
            }
            let ratio = t[i][rhs].max(0.0) / coef;
            leave = match leave {
                None => Some((i, ratio)),
                Some((k, best)) => {
                    let tie = (ratio - best).abs() <= 1e-12 * best.abs().max(1.0);
                    if ratio < best && !tie || tie && basis[i] < basis[k] {
                        Some((i, ratio))
                    } else {
                        Some((k, best))
                    }
                }
            };
        }
        let Some((p, _)) = leave else {
            // cannot happen for a phase-1 objective bounded below by zero;
            // treat the column as numerically dead
            cost[e] = 0.0;
            continue;
        };

        pivot(&mut t, &mut cost, p, e);
        basis[p] = e;
        pivots += 1;
        if pivots > max_pivots {
            return Err(Error::NoConvergence {
                iterations: pivots,
                detail: "phase-1 simplex exceeded its pivot budget".into(),
            });
        }
    }

    let mut x = vec![0.0; cols];
    for (i, &var) in basis.iter().enumerate() {
        if var < cols {
            x[var] = t[i][rhs].max(0.0);
        }
    }
    Ok(PhaseOne {
        x,
        objective: (-cost[rhs]).max(0.0),
        pivots,
    })
}

fn pivot(t: &mut [Vec<f64>], cost: &mut [f64], p: usize, e: usize) {
    let inv = 1.0 / t[p][e];
    for v in t[p].iter_mut() {
        *v *= inv;
    }
    t[p][e] = 1.0;
    let prow = t[p].clone();
    for (i, row) in t.iter_mut().enumerate() {
        if i == p {
            continue;
        }
        let f = row[e];
        if f != 0.0 {
            for (v, pv) in row.iter_mut().zip(&prow) {
                *v -= f * pv;
            }
            row[e] = 0.0;
        }
    }
    let f = cost[e];
    if f != 0.0 {
        for (v, pv) in cost.iter_mut().zip(&prow) {
            *v -= f * pv;
        }
        cost[e] = 0.0;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn feasible_simplex_point() {
        // x0 + x1 + x2 = 1, x0 - x2 = 0.25
        let a = vec![vec![1.0, 1.0, 1.0], vec![1.0, 0.0, -1.0]];
        let out = phase_one(&a, &[1.0, 0.25], 3).unwrap();
        assert!(out.objective < 1e-12);
        let x = &out.x;
        assert!((x[0] + x[1] + x[2] - 1.0).abs() < 1e-12);
        assert!((x[0] - x[2] - 0.25).abs() < 1e-12);
        assert!(x.iter().all(|&v| v >= 0.0));
    }

    #[test]
    fn infeasible_reports_positive_objective() {
        // x0 + x1 = 1 and x0 + x1 = 2 cannot both hold
        let a = vec![vec![1.0, 1.0], vec![1.0, 1.0]];
        let out = phase_one(&a, &[1.0, 2.0], 2).unwrap();
        assert!((out.objective - 1.0).abs() < 1e-12);
    }

    #[test]
    fn negative_rhs_and_redundant_rows() {
        let a = vec![vec![-1.0, -1.0], vec![-1.0, -1.0], vec![1.0, 0.0]];
        let out = phase_one(&a, &[-1.0, -1.0, 0.5], 2).unwrap();
        assert!(out.objective < 1e-12);
        assert!((out.x[0] - 0.5).abs() < 1e-12 && (out.x[1] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn empty_system_is_feasible() {
        let out = phase_one(&[], &[], 4).unwrap();
        assert_eq!(out.objective, 0.0);
    }
}
