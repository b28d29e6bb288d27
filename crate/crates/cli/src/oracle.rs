//! Exhaustive search over row-stochastic matrices with entries in
//! multiples of `1/steps`, used as an independent check on the weighted
//! majorization solver.

use relconvex_core::WeightedMeasure;

/// Whether some grid matrix `A` has every residual of the weighted
/// majorization conditions at most `thr`: `|Σᵢ λᵢ aᵢⱼ − μⱼ|` for each
/// column and `|xᵢ − Σⱼ aᵢⱼ yⱼ|` for each row and coordinate.
///
/// Branch and bound over the entries, row by row. A branch is cut only when
/// no completion can meet `thr`, so the answer equals that of scanning the
/// whole grid.
pub fn grid_has_point_within(mu_x: &WeightedMeasure, mu_y: &WeightedMeasure, steps: usize, thr: f64) -> bool {
    let search = Search {
        x: mu_x.points(),
        lambda: mu_x.weights(),
        y: mu_y.points(),
        mu: mu_y.weights(),
        d: mu_y.dimension(),
        steps,
        thr,
        tail_lambda: (0..=mu_x.len()).map(|i| mu_x.weights()[i..].iter().sum()).collect(),
    };
    let mut columns = vec![0.0; mu_y.len()];
    search.row(0, &mut columns)
}

struct Search<'a> {
    x: &'a [Vec<f64>],
    lambda: &'a [f64],
    y: &'a [Vec<f64>],
    mu: &'a [f64],
    d: usize,
    steps: usize,
    thr: f64,
    /// `Σ_{i' ≥ i} λ_{i'}`
    tail_lambda: Vec<f64>,
}

impl Search<'_> {
    fn row(&self, i: usize, columns: &mut [f64]) -> bool {
        if i == self.x.len() {
            return columns.iter().zip(self.mu).all(|(c, m)| (c - m).abs() <= self.thr);
        }
        let mut partial = vec![0.0; self.d];
        self.entry(i, 0, self.steps, &mut partial, columns)
    }

    fn entry(&self, i: usize, j: usize, left: usize, partial: &mut [f64], columns: &mut [f64]) -> bool {
        let n = self.y.len();
        let range: Vec<usize> = if j + 1 == n { vec![left] } else { (0..=left).collect() };
        for k in range {
            let a = k as f64 / self.steps as f64;
            let column = columns[j] + self.lambda[i] * a;
            // later rows add between 0 and their total weight to column j
            if column > self.mu[j] + self.thr || column + self.tail_lambda[i + 1] < self.mu[j] - self.thr {
                continue;
            }
            for (p, y) in partial.iter_mut().zip(&self.y[j]) {
                *p += a * y;
            }
            let remaining = (left - k) as f64 / self.steps as f64;
            if self.row_reachable(i, j + 1, remaining, partial) {
                columns[j] = column;
                let found = if j + 1 == n {
                    self.row(i + 1, columns)
                } else {
                    self.entry(i, j + 1, left - k, partial, columns)
                };
                columns[j] -= self.lambda[i] * a;
                if found {
                    for (p, y) in partial.iter_mut().zip(&self.y[j]) {
                        *p -= a * y;
                    }
                    return true;
                }
            }
            for (p, y) in partial.iter_mut().zip(&self.y[j]) {
                *p -= a * y;
            }
        }
        false
    }

    /// Whether mass `remaining` on `y[from..]` can bring row `i`'s
    /// barycenter within `thr` of `x[i]` in every coordinate.
    fn row_reachable(&self, i: usize, from: usize, remaining: f64, partial: &[f64]) -> bool {
        (0..self.d).all(|c| {
            let need = self.x[i][c] - partial[c];
            if from == self.y.len() {
                return need.abs() <= self.thr;
            }
            let (lo, hi) = self.y[from..]
                .iter()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| {
                    (lo.min(p[c]), hi.max(p[c]))
                });
            need >= remaining * lo - self.thr && need <= remaining * hi + self.thr
        })
    }
}
