use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use relconvex_core::majorization::{hlp_convex_sum_check, hlp_transfer_matrix, is_doubly_stochastic, is_majorized};
use relconvex_core::ScalarFunction;

const TOL: f64 = 1e-9;

fn battery() -> Vec<ScalarFunction> {
    vec![
        ScalarFunction::square(),
        ScalarFunction::abs(),
        ScalarFunction::exp(),
        ScalarFunction::positive_part(),
    ]
}

/// `x = D y` for a random doubly stochastic `D` built as a convex
/// combination of permutation matrices, so that `x ≺ y`.
fn majorized_pair(rng: &mut ChaCha8Rng, n: usize) -> (Vec<f64>, Vec<f64>) {
    let y: Vec<f64> = (0..n).map(|_| rng.gen_range(-5.0..5.0)).collect();
    let d = random_doubly_stochastic(rng, n);
    let x = d
        .iter()
        .map(|row| row.iter().zip(&y).map(|(a, b)| a * b).sum())
        .collect();
    (x, y)
}

fn random_doubly_stochastic(rng: &mut ChaCha8Rng, n: usize) -> Vec<Vec<f64>> {
    let k = rng.gen_range(1..=4);
    let weights: Vec<f64> = (0..k).map(|_| rng.gen_range(0.05..1.0)).collect();
    let total: f64 = weights.iter().sum();
    let mut d = vec![vec![0.0; n]; n];
    for w in weights {
        let mut perm: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            perm.swap(i, rng.gen_range(0..=i));
        }
        for (i, &j) in perm.iter().enumerate() {
            d[i][j] += w / total;
        }
    }
    d
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(u, v)| (u - v).abs()).fold(0.0, f64::max)
}

proptest! {
    #[test]
    fn reflexive(x in prop::collection::vec(-100.0..100.0f64, 1..10)) {
        prop_assert!(is_majorized(&x, &x, TOL).unwrap());
    }

    #[test]
    fn doubly_stochastic_contraction(seed in any::<u64>(), n in 1..8usize) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = random_doubly_stochastic(&mut rng, n);
        prop_assert!(is_doubly_stochastic(&d, 1e-12).unwrap());
        let y: Vec<f64> = (0..n).map(|_| rng.gen_range(-10.0..10.0)).collect();
        let x: Vec<f64> = d.iter().map(|row| row.iter().zip(&y).map(|(a, b)| a * b).sum()).collect();
        prop_assert!(is_majorized(&x, &y, TOL).unwrap());
    }
}

#[test]
fn transitive_where_both_links_hold() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..500 {
        let n = rng.gen_range(1..=6);
        let (y, z) = majorized_pair(&mut rng, n);
        let d = random_doubly_stochastic(&mut rng, n);
        let x: Vec<f64> = d
            .iter()
            .map(|row| row.iter().zip(&y).map(|(a, b)| a * b).sum())
            .collect();
        assert!(is_majorized(&x, &y, TOL).unwrap() && is_majorized(&y, &z, TOL).unwrap());
        assert!(is_majorized(&x, &z, TOL).unwrap());
    }
}

/// Majorization, the transfer-matrix certificate and the convex-sum
/// inequalities agree, on a mix of majorized and unrelated pairs.
#[test]
fn three_way_equivalence() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let fs = battery();
    let (mut related, mut unrelated) = (0, 0);
    for _ in 0..1000 {
        let n = rng.gen_range(1..=6);
        let (x, y) = if rng.gen_bool(0.5) {
            majorized_pair(&mut rng, n)
        } else {
            let x: Vec<f64> = (0..n).map(|_| rng.gen_range(-5.0..5.0)).collect();
            let mut y: Vec<f64> = (0..n).map(|_| rng.gen_range(-5.0..5.0)).collect();
            let shift = (x.iter().sum::<f64>() - y.iter().sum::<f64>()) / n as f64;
            y.iter_mut().for_each(|v| *v += shift);
            (x, y)
        };
        let majorized = is_majorized(&x, &y, TOL).unwrap();
        match hlp_transfer_matrix(&x, &y, TOL) {
            Ok(a) => {
                assert!(majorized, "certificate for an unrelated pair {x:?} {y:?}");
                assert!(is_doubly_stochastic(a.entries(), TOL).unwrap());
                assert!(max_abs_diff(&x, &a.apply(&y)) <= TOL);
            }
            Err(e) => assert!(!majorized, "no certificate for {x:?} ≺ {y:?}: {e}"),
        }
        if majorized {
            related += 1;
            for f in &fs {
                let r = hlp_convex_sum_check(&x, &y, f, TOL).unwrap();
                assert!(r.slack() >= -TOL, "{} on {x:?} {y:?}: {r:?}", f.name());
            }
        } else {
            unrelated += 1;
        }
    }
    assert!(related > 300 && unrelated > 100);
}
