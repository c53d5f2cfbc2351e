use std::f64::consts::PI;

use harmonic_kernels::kernel_transform::c_n;
use harmonic_kernels::numeric_oracle::quadrature::{ball_integral, gauss_legendre, integrate, radial_ift, sphere_integral};
use harmonic_kernels::reference_kernels::{
    eval_bergman_closed, eval_poisson_closed, eval_weighted_halfspace, hyp2f1, ClosedKind, PointPair,
};
use harmonic_kernels::Error;
use statrs::function::gamma::gamma;

fn pp(x: &[f64], y: &[f64]) -> PointPair {
    PointPair::new(x.to_vec(), y.to_vec()).unwrap()
}

#[test]
fn halfspace_poisson_integrates_to_one() {
    let rule = gauss_legendre(20);
    for xn in [0.1, 1.0, 3.0] {
        // ρ = x_n s/(1−s) maps [0,1) onto [0,∞)
        let n2 = integrate(
            |s| {
                let r = xn * s / (1.0 - s);
                let jac = xn / ((1.0 - s) * (1.0 - s));
                let k = eval_poisson_closed(ClosedKind::HalfSpace, &pp(&[0.0, xn], &[r, 0.0])).unwrap();
                2.0 * k * jac
            },
            0.0,
            1.0,
            40,
            &rule,
        );
        let n3 = integrate(
            |s| {
                let r = xn * s / (1.0 - s);
                let jac = xn / ((1.0 - s) * (1.0 - s));
                let k = eval_poisson_closed(ClosedKind::HalfSpace, &pp(&[0.0, 0.0, xn], &[r, 0.0, 0.0])).unwrap();
                2.0 * PI * r * k * jac
            },
            0.0,
            1.0,
            40,
            &rule,
        );
        assert!((n2 - 1.0).abs() < 1e-8, "n=2 x_n={xn}: {n2}");
        assert!((n3 - 1.0).abs() < 1e-8, "n=3 x_n={xn}: {n3}");
    }
}

#[test]
fn ball_poisson_mean_value() {
    let u3 = |p: &[f64]| p[0] * p[0] - p[2] * p[2] + 3.0 * p[0] * p[1] * p[2] + p[1];
    let u2 = |p: &[f64]| p[0].powi(3) - 3.0 * p[0] * p[1] * p[1] + 0.5;
    for x in [[0.0, 0.0, 0.0], [0.2, -0.3, 0.4], [0.5, 0.1, -0.2]] {
        let got = sphere_integral(3, 40, |z| eval_poisson_closed(ClosedKind::unit_ball(), &pp(&x, z)).unwrap() * u3(z));
        assert!((got - u3(&x)).abs() < 1e-8 * u3(&x).abs().max(1.0), "{x:?}: {got} vs {}", u3(&x));
    }
    for x in [[0.0, 0.0], [0.3, -0.4]] {
        let got = sphere_integral(2, 60, |z| eval_poisson_closed(ClosedKind::unit_ball(), &pp(&x, z)).unwrap() * u2(z));
        assert!((got - u2(&x)).abs() < 1e-8, "{x:?}: {got} vs {}", u2(&x));
    }
}

#[test]
fn poisson_is_positive() {
    for x in [[0.0, 0.0, 0.9], [0.7, 0.0, 0.0], [-0.3, 0.3, -0.3]] {
        for z in [[0.0, 0.0, 1.0], [0.0, 0.0, -1.0], [0.6, 0.8, 0.0]] {
            assert!(eval_poisson_closed(ClosedKind::unit_ball(), &pp(&x, &z)).unwrap() > 0.0);
        }
    }
}

#[test]
fn ball_bergman_reproduces_degree_four() {
    let polys: [fn(&[f64]) -> f64; 4] = [
        |_| 1.0,
        |p| p[0] * p[1] - 2.0 * p[2],
        |p| p[0].powi(3) - 3.0 * p[0] * p[1] * p[1],
        |p| p[0].powi(4) - 6.0 * p[0] * p[0] * p[2] * p[2] + p[2].powi(4),
    ];
    for x in [[0.1, 0.2, -0.3], [0.0, -0.5, 0.2]] {
        for u in polys {
            let got = ball_integral(3, 28, |y| u(y) * eval_bergman_closed(ClosedKind::unit_ball(), &pp(&x, y)).unwrap());
            assert!((got - u(&x)).abs() < 1e-6 * u(&x).abs().max(1.0), "{x:?}: {got} vs {}", u(&x));
        }
    }
}

#[test]
fn ball_radius_scaling() {
    let r = 2.5;
    let a = eval_bergman_closed(ClosedKind::Ball { radius: r }, &pp(&[0.5, 1.0], &[-0.25, 0.75])).unwrap();
    let b = eval_bergman_closed(ClosedKind::unit_ball(), &pp(&[0.2, 0.4], &[-0.1, 0.3])).unwrap();
    assert!((a - b / (r * r)).abs() < 1e-14 * b.abs());
}

#[test]
fn weighted_alpha_one_matches_hankel_quadrature() {
    let (alpha, t, rho) = (1.0, 1.0, 1.0);
    let closed = eval_weighted_halfspace(alpha, 0.0, &pp(&[rho, 0.0, 0.5], &[0.0, 0.0, 0.5])).unwrap();
    let num = radial_ift(|w| (2.0 * w).powf(alpha + 1.0) * (-t * w).exp() / gamma(alpha + 1.0), rho, 2, 60.0);
    assert!((closed - num).abs() < 1e-8 * num.abs(), "{closed} vs {num}");
}

#[test]
fn weighted_g0_scales() {
    let p = pp(&[0.3, 0.4, 0.2], &[0.0, 0.1, 0.7]);
    let a = eval_weighted_halfspace(0.5, 0.0, &p).unwrap();
    let b = eval_weighted_halfspace(0.5, 0.7, &p).unwrap();
    assert!((b - a * (-0.7f64).exp()).abs() < 1e-14 * a.abs());
}

#[test]
fn hyp2f1_elementary_cases() {
    // ₂F₁(1,1;2;z) = −log(1−z)/z; the 1/z branch needs b − a ∉ ℤ
    for z in [-0.3, -0.9, -1.7] {
        let g = hyp2f1(1.0, 1.0, 2.0, z).unwrap();
        let want = -(1.0 - z).ln() / z;
        assert!((g - want).abs() < 1e-12 * want.abs(), "z={z}");
    }
    assert!(hyp2f1(1.0, 1.0, 2.0, -3.0).is_err());
    // ₂F₁(a,b;b;z) = (1−z)^{−a}
    for z in [-0.4, -1.5, -7.0] {
        let f = hyp2f1(0.75, 1.25, 1.25, z).unwrap();
        assert!((f - (1.0 - z).powf(-0.75)).abs() < 1e-12);
    }
}

#[test]
fn rejects_bad_input() {
    assert!(matches!(PointPair::new(vec![0.0, 1.0], vec![0.0]), Err(Error::Parameter(_))));
    assert!(matches!(
        eval_poisson_closed(ClosedKind::HalfSpace, &pp(&[0.0, 1.0], &[0.0, 0.5])),
        Err(Error::Parameter(_))
    ));
    assert!(matches!(
        eval_poisson_closed(ClosedKind::HalfSpace, &pp(&[1.0, 0.0], &[1.0, 0.0])),
        Err(Error::Singular(_))
    ));
    assert!(eval_weighted_halfspace(-1.0, 0.0, &pp(&[0.0, 1.0], &[0.0, 1.0])).is_err());
    assert!((c_n(3) - 1.0 / (2.0 * PI)).abs() < 1e-16);
}
