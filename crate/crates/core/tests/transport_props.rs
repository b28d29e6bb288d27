use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use relconvex_core::majorization::is_majorized;
use relconvex_core::transport::{generalized_hlp_verify_with, weighted_majorization_decide};
use relconvex_core::{FeasibilityVerdict, WeightedMeasure};

const TOL: f64 = 1e-9;

fn random_vec(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(-5.0..5.0)).collect()
}

fn random_weights(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let w: Vec<f64> = (0..n).map(|_| rng.gen_range(0.1..1.0)).collect();
    let total: f64 = w.iter().sum();
    w.into_iter().map(|v| v / total).collect()
}

fn random_points(rng: &mut ChaCha8Rng, n: usize, d: usize) -> Vec<Vec<f64>> {
    (0..n).map(|_| random_vec(rng, d)).collect()
}

/// A pair related by a random row-stochastic matrix: `μ = λA`, `xᵢ = Σⱼ aᵢⱼ yⱼ`.
fn related_pair(rng: &mut ChaCha8Rng, m: usize, n: usize, d: usize) -> (WeightedMeasure, WeightedMeasure) {
    let y = random_points(rng, n, d);
    let lambda = random_weights(rng, m);
    let a: Vec<Vec<f64>> = (0..m).map(|_| random_weights(rng, n)).collect();
    let mu: Vec<f64> = (0..n).map(|j| (0..m).map(|i| lambda[i] * a[i][j]).sum()).collect();
    let x: Vec<Vec<f64>> = a
        .iter()
        .map(|row| {
            (0..d)
                .map(|k| row.iter().zip(&y).map(|(w, p)| w * p[k]).sum())
                .collect()
        })
        .collect();
    (
        WeightedMeasure::new(x, lambda).unwrap(),
        WeightedMeasure::new(y, mu).unwrap(),
    )
}

#[test]
fn classical_embedding_matches_vector_majorization() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut feasible = 0;
    for _ in 0..1000 {
        let n = rng.gen_range(1..=6);
        let y = random_vec(&mut rng, n);
        let x = if rng.gen_bool(0.5) {
            // average y over random blocks of a random permutation
            let mut perm: Vec<usize> = (0..n).collect();
            for i in (1..n).rev() {
                perm.swap(i, rng.gen_range(0..=i));
            }
            let t: f64 = rng.gen_range(0.0..1.0);
            let mean = y.iter().sum::<f64>() / n as f64;
            perm.iter().map(|&j| t * y[j] + (1.0 - t) * mean).collect()
        } else {
            let mut x = random_vec(&mut rng, n);
            let shift = (y.iter().sum::<f64>() - x.iter().sum::<f64>()) / n as f64;
            x.iter_mut().for_each(|v| *v += shift);
            x
        };
        let verdict = weighted_majorization_decide(
            &WeightedMeasure::uniform_on_line(&x).unwrap(),
            &WeightedMeasure::uniform_on_line(&y).unwrap(),
            TOL,
        )
        .unwrap();
        assert_eq!(verdict.is_feasible(), is_majorized(&x, &y, TOL).unwrap(), "{x:?} {y:?}");
        feasible += verdict.is_feasible() as usize;
    }
    assert!(feasible > 400);
}

#[test]
fn feasible_pairs_share_barycenters_and_decompose() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..300 {
        let (m, n, d) = (rng.gen_range(1..=4), rng.gen_range(1..=5), rng.gen_range(1..=3));
        let (mu_x, mu_y) = related_pair(&mut rng, m, n, d);
        let FeasibilityVerdict::Feasible(cert) = weighted_majorization_decide(&mu_x, &mu_y, TOL).unwrap() else {
            panic!("related pair judged infeasible: {mu_x:?} {mu_y:?}");
        };
        for (bx, by) in mu_x.barycenter().iter().zip(mu_y.barycenter()) {
            assert!((bx - by).abs() <= n as f64 * TOL);
        }
        for (i, xi) in mu_x.points().iter().enumerate() {
            let row = cert.row_measure(i, &mu_y).unwrap();
            assert!((row.total_mass() - 1.0).abs() <= TOL);
            for (u, v) in row.barycenter().iter().zip(xi) {
                assert!((u - v).abs() <= TOL, "row {i} barycenter {u} vs {v}");
            }
        }
        let f = |p: &[f64]| p.iter().map(|v| v * v).sum::<f64>() + p[0].abs();
        assert!(generalized_hlp_verify_with(&f, &mu_x, &mu_y, &cert, TOL)
            .unwrap()
            .holds());
    }
}

/// Every grid point of the product of simplices at resolution `1/steps`.
fn simplex_grid(n: usize, steps: usize) -> Vec<Vec<f64>> {
    fn rec(n: usize, left: usize, steps: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<f64>>) {
        if cur.len() + 1 == n {
            cur.push(left);
            out.push(cur.iter().map(|&k| k as f64 / steps as f64).collect());
            cur.pop();
            return;
        }
        for k in 0..=left {
            cur.push(k);
            rec(n, left - k, steps, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, steps, steps, &mut Vec::new(), &mut out);
    out
}

fn residual(a: &[&Vec<f64>], mu_x: &WeightedMeasure, mu_y: &WeightedMeasure) -> f64 {
    let (n, d) = (mu_y.len(), mu_y.dimension());
    let mut worst = 0.0f64;
    for j in 0..n {
        let mass: f64 = a.iter().zip(mu_x.weights()).map(|(row, l)| l * row[j]).sum();
        worst = worst.max((mass - mu_y.weights()[j]).abs());
    }
    for (row, x) in a.iter().zip(mu_x.points()) {
        for k in 0..d {
            let b: f64 = row.iter().zip(mu_y.points()).map(|(w, p)| w * p[k]).sum();
            worst = worst.max((b - x[k]).abs());
        }
    }
    worst
}

fn grid_min_residual(mu_x: &WeightedMeasure, mu_y: &WeightedMeasure) -> f64 {
    let grid = simplex_grid(mu_y.len(), 200);
    let m = mu_x.len();
    let mut idx = vec![0usize; m];
    let mut best = f64::INFINITY;
    loop {
        let rows: Vec<&Vec<f64>> = idx.iter().map(|&k| &grid[k]).collect();
        best = best.min(residual(&rows, mu_x, mu_y));
        let mut pos = 0;
        while pos < m {
            idx[pos] += 1;
            if idx[pos] < grid.len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
        if pos == m {
            return best;
        }
    }
}

/// Coordinates in {−1, −½, 0, ½, 1}, so that an unrelated pair misses
/// feasibility by a visible margin rather than by rounding.
fn lattice_points(rng: &mut ChaCha8Rng, n: usize, d: usize) -> Vec<Vec<f64>> {
    (0..n)
        .map(|_| (0..d).map(|_| rng.gen_range(-2..=2) as f64 / 2.0).collect())
        .collect()
}

/// Probability weights in quarters.
fn lattice_weights(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let mut quarters = vec![1usize; n];
    for _ in n..4 {
        quarters[rng.gen_range(0..n)] += 1;
    }
    let total: usize = quarters.iter().sum();
    quarters.into_iter().map(|q| q as f64 / total as f64).collect()
}

#[test]
fn agrees_with_grid_search_on_small_instances() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let shapes = [(1, 1), (1, 2), (2, 1), (2, 2), (1, 3), (3, 1)];
    let (mut feasible, mut infeasible) = (0, 0);
    for k in 0..120 {
        let (m, n) = shapes[k % shapes.len()];
        let d = 1 + (k / shapes.len()) % 2;
        let (mu_x, mu_y) = if rng.gen_bool(0.5) {
            // rows on the grid, so the grid contains an exact certificate
            let grid: Vec<Vec<f64>> = simplex_grid(n, 200)
                .into_iter()
                .filter(|r| r.iter().all(|&v| v > 0.0))
                .collect();
            let y = random_points(&mut rng, n, d);
            let lambda = random_weights(&mut rng, m);
            let a: Vec<&Vec<f64>> = (0..m).map(|_| &grid[rng.gen_range(0..grid.len())]).collect();
            let mu: Vec<f64> = (0..n).map(|j| (0..m).map(|i| lambda[i] * a[i][j]).sum()).collect();
            let x = a
                .iter()
                .map(|row| {
                    (0..d)
                        .map(|c| row.iter().zip(&y).map(|(w, p)| w * p[c]).sum())
                        .collect()
                })
                .collect();
            (
                WeightedMeasure::new(x, lambda).unwrap(),
                WeightedMeasure::new(y, mu).unwrap(),
            )
        } else {
            let x = lattice_points(&mut rng, m, d);
            let y = lattice_points(&mut rng, n, d);
            (
                WeightedMeasure::new(x, lattice_weights(&mut rng, m)).unwrap(),
                WeightedMeasure::new(y, lattice_weights(&mut rng, n)).unwrap(),
            )
        };
        let solver = weighted_majorization_decide(&mu_x, &mu_y, TOL).unwrap().is_feasible();
        let grid = grid_min_residual(&mu_x, &mu_y);
        if grid <= TOL {
            assert!(solver, "grid finds a certificate the solver misses: {mu_x:?} {mu_y:?}");
        }
        if !solver {
            assert!(
                grid > 1e-2,
                "solver infeasible but grid residual {grid}: {mu_x:?} {mu_y:?}"
            );
        }
        if solver {
            feasible += 1
        } else {
            infeasible += 1
        }
    }
    assert!(feasible >= 40 && infeasible >= 20, "{feasible} {infeasible}");
}
