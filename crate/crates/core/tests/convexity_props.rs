use relconvex_core::convexity::{
    convexity_boundary, profile_tangent_margin, radial_tangent_plane_margin, random_convexity_falsifier,
    support_line_certify,
};
use relconvex_core::polyroots::r_star;
use relconvex_core::{Boundary, CertifyOptions, CertifyOutcome, Direction, Interval, Region, ScalarFunction};

fn interval(lo: f64, hi: f64) -> Region {
    Region::interval(Interval::closed(lo, hi)).unwrap()
}

#[test]
fn certificates_survive_the_falsifier() {
    let opts = CertifyOptions::default();
    let mut certified = 0;
    for name in ScalarFunction::BUILTIN_NAMES {
        let f = ScalarFunction::builtin(name).unwrap();
        let (lo, hi): (f64, f64) = if name == "log2" { (0.05, 8.0) } else { (-6.0, 6.0) };
        for (k, a) in [-3.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0, 4.0].into_iter().enumerate() {
            if !(lo < a && a < hi) {
                continue;
            }
            for (l, r) in [(lo, hi), (lo.max(a - 1.0), a + 1.0), (a - 0.3, hi)] {
                let region = interval(l, r);
                if let CertifyOutcome::Certified(_) = support_line_certify(&f, a, &region, &opts).unwrap() {
                    certified += 1;
                    let seed = 1000 + k as u64;
                    let out = random_convexity_falsifier(&f, a, &region, 2000, seed, 1e-9).unwrap();
                    assert!(out.is_pass(), "{name} at {a} on [{l}, {r}]: {out:?}");
                }
            }
        }
    }
    assert!(certified >= 30, "{certified}");
}

#[test]
fn log_squared_certifies_up_to_its_boundary_only() {
    let f = ScalarFunction::log_squared();
    let a_star = convexity_boundary(&f, 2.0, Direction::Right, 1e-12)
        .unwrap()
        .point()
        .unwrap();
    assert!((a_star - 5.495869874).abs() < 1e-6);
    let opts = CertifyOptions::default();
    let below = Region::interval(Interval::open_closed(0.0, a_star - 1e-3)).unwrap();
    assert!(support_line_certify(&f, 2.0, &below, &opts).unwrap().is_certified());
    let above = Region::interval(Interval::open_closed(0.0, a_star + 1e-1)).unwrap();
    let out = support_line_certify(&f, 2.0, &above, &opts).unwrap();
    let CertifyOutcome::Refuted { witness, margin, .. } = out else {
        panic!("expected a refutation, got {out:?}");
    };
    assert!(witness > a_star && margin < 0.0);
}

#[test]
fn boundary_points_are_tangency_crossings() {
    let tol = 1e-10;
    let cases = [
        ("log2", 2.0, Direction::Right),
        ("log2", 4.0, Direction::Left),
        ("gauss1d", 0.5, Direction::Right),
        ("gauss1d", 1.0, Direction::Left),
        ("xexp", -3.0, Direction::Right),
        ("xexp", -1.5, Direction::Left),
    ];
    for (name, a, dir) in cases {
        let f = ScalarFunction::builtin(name).unwrap();
        let Boundary::Finite { point: b, .. } = convexity_boundary(&f, a, dir, tol).unwrap() else {
            panic!("{name} at {a}: no finite boundary");
        };
        let h = f.value(a) + f.derivative_at(a).unwrap() * (b - a);
        assert!((f.value(b) - h).abs() <= 10.0 * tol, "{name} at {a}: {b}");
    }
}

#[test]
fn radial_reduction_on_a_polar_grid() {
    let phi = ScalarFunction::gauss1d();
    let r_star = r_star().unwrap();
    for k in 0..24 {
        let theta0 = std::f64::consts::TAU * k as f64 / 24.0;
        let w0 = [0.5 * theta0.cos(), 0.5 * theta0.sin()];
        let (ux, uy) = (w0[0] / 0.5, w0[1] / 0.5);
        for i in 0..=40 {
            let rho = 2.0 * r_star * i as f64 / 40.0;
            for j in 0..64 {
                let theta = std::f64::consts::TAU * j as f64 / 64.0;
                let w = [rho * theta.cos(), rho * theta.sin()];
                let plane = radial_tangent_plane_margin(&phi, w0, w).unwrap();
                let profile = profile_tangent_margin(&phi, 0.5, rho).unwrap();
                assert!(plane >= profile - 1e-8, "w0 {w0:?} w {w:?}: {plane} < {profile}");
                if rho <= r_star {
                    assert!(plane >= -1e-8, "tangent plane below the surface at {w:?}");
                }
            }
            // along the line through w0 and the origin the two margins agree
            for t in [rho, -rho] {
                let w = [t * ux, t * uy];
                let plane = radial_tangent_plane_margin(&phi, w0, w).unwrap();
                let profile = profile_tangent_margin(&phi, 0.5, t).unwrap();
                assert!((plane - profile).abs() <= 1e-8);
            }
        }
    }
}
