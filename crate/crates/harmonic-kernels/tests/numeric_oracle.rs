use std::sync::Arc;

use harmonic_kernels::kernel_transform::c_n;
use harmonic_kernels::numeric_oracle::fd::max_error;
use harmonic_kernels::numeric_oracle::fit::log_spaced;
use harmonic_kernels::numeric_oracle::{
    fd_convergence, fit_boundary_expansion, numeric_poisson_model_fit, solve_dirichlet_fd, BallRegion, BasisTerm,
    FdGrid, ModelRegion, SpectralBall,
};
use harmonic_kernels::reference_kernels::{eval_poisson_closed, ClosedKind, PointPair};
use harmonic_kernels::Error;

#[test]
fn constant_data_gives_one() {
    for n in [2, 3] {
        let grid = FdGrid::new(Arc::new(BallRegion::unit(n)), 1.0 / 8.0).unwrap();
        let sol = solve_dirichlet_fd(&grid, |_| 1.0).unwrap();
        assert!(max_error(&sol, |_| 1.0) < 1e-12);
    }
}

#[test]
fn disk_cosine_data_is_second_order() {
    let u = |p: &[f64]| p[0];
    // data cos θ on the circle, solution r cos θ; linear data is reproduced exactly
    let g = |p: &[f64]| p[0] / (p[0] * p[0] + p[1] * p[1]).sqrt();
    let errs: Vec<f64> = [8.0, 16.0, 32.0]
        .iter()
        .map(|k| {
            let grid = FdGrid::new(Arc::new(BallRegion::unit(2)), 1.0 / k).unwrap();
            max_error(&solve_dirichlet_fd(&grid, g).unwrap(), u)
        })
        .collect();
    for (e, k) in errs.iter().zip([8.0f64, 16.0, 32.0]) {
        assert!(*e <= 1.0 / (k * k), "{errs:?}");
    }
}

#[test]
fn discrete_maximum_principle() {
    let grid = FdGrid::new(Arc::new(BallRegion::unit(2)), 1.0 / 32.0).unwrap();
    let g = |p: &[f64]| (5.0 * p[0]).sin() * p[1].exp();
    let sol = solve_dirichlet_fd(&grid, g).unwrap();
    let bound = std::f64::consts::E;
    assert!(sol.values.iter().all(|v| v.abs() <= bound));
}

#[test]
fn convergence_order_on_the_disk() {
    let r = fd_convergence(2, 1.0 / 8.0, 3).unwrap();
    assert!(r.orders.iter().all(|&o| o >= 1.9), "{:?}", r.orders);
}

#[test]
fn bad_mesh_is_a_configuration_error() {
    assert!(matches!(FdGrid::new(Arc::new(BallRegion::unit(2)), 0.0), Err(Error::Parameter(_))));
    assert!(matches!(FdGrid::new(Arc::new(BallRegion::unit(4)), 0.1), Err(Error::Parameter(_))));
}

#[test]
fn spectral_ball_properties() {
    let sb = SpectralBall::new(60, 3).unwrap();
    assert_eq!(sb.lambda_eigenvalue(0), 1.0 / 3.0);
    for l in 0..60 {
        assert!(sb.lambda_eigenvalue(l) > sb.lambda_eigenvalue(l + 1));
    }
    let h00 = sb.bergman(&[0.0; 3], &[0.0; 3]).unwrap();
    assert!((h00 - 1.5 * c_n(3)).abs() < 1e-15);
    let (x, y) = ([0.3, -0.1, 0.5], [-0.2, 0.6, 0.1]);
    assert_eq!(sb.bergman(&x, &y).unwrap(), sb.bergman(&y, &x).unwrap());
}

#[test]
fn halfspace_fit_is_exact() {
    let cn = c_n(3);
    let samples: Vec<(f64, f64)> = log_spaced(0.01, 0.5, 30)
        .into_iter()
        .map(|d| {
            let pp = PointPair::new(vec![0.0, 0.0, d], vec![0.0; 3]).unwrap();
            (d, eval_poisson_closed(ClosedKind::HalfSpace, &pp).unwrap())
        })
        .collect();
    let basis = [BasisTerm::pow(-2), BasisTerm::pow(-1), BasisTerm::pow(0), BasisTerm::pow_log(1)];
    let r = fit_boundary_expansion(&samples, &basis, &[Some(cn), Some(0.0), Some(0.0), Some(0.0)]).unwrap();
    assert!(r.relative_error.iter().all(|e| e.unwrap() <= 1e-10), "{r:?}");
    assert!(r.condition_number < 1e12);
}

#[test]
fn too_few_samples_is_an_error() {
    let basis = [BasisTerm::pow(-1), BasisTerm::pow(0)];
    assert!(fit_boundary_expansion(&[(0.1, 1.0), (0.2, 2.0), (0.3, 3.0)], &basis, &[]).is_err());
}

/// Model domain `x_n > |x′|²` (Φ′(0) = 1) truncated to a box; grades 0 and 1
/// of the expansion are recovered from FD harmonic measure.
#[test]
fn model_domain_grades_from_fd_in_2d() {
    let reg = ModelRegion { n: 2, jet: vec![1.0], half_width: 0.8, top: 0.8 };
    let r = numeric_poisson_model_fit(&reg, 1.0 / 128.0, 0.03, 0.1, 0.4).unwrap();
    assert!((r.coefficient("d^-1").unwrap() - c_n(2)).abs() <= 0.05 * c_n(2), "{r:?}");
    assert!(r.relative_error[1].unwrap() <= 0.05 && r.relative_error[2].unwrap() <= 0.05, "{r:?}");
}

#[test]
fn model_domain_grades_from_fd_in_3d() {
    let reg = ModelRegion { n: 3, jet: vec![1.0], half_width: 0.8, top: 0.8 };
    let r = numeric_poisson_model_fit(&reg, 1.0 / 64.0, 0.045, 0.12, 0.45).unwrap();
    assert_eq!(r.basis[1..3], ["d^-2".to_string(), "d^-1".to_string()]);
    assert!(r.relative_error[1].unwrap() <= 0.05 && r.relative_error[2].unwrap() <= 0.05, "{r:?}");
}
