//! Brute-force numerical oracles: finite-difference Dirichlet solves,
//! the spectral ball, radial quadrature of symbol transforms and
//! least-squares fitting of sampled kernels.

pub mod fd;
pub mod fit;
pub mod quadrature;
pub mod spectral;
pub mod transforms;

pub use fd::{numeric_poisson_ball, numeric_poisson_model, solve_dirichlet_fd, BallRegion, FdGrid, FdSolution, ModelRegion, Region};
pub use fit::{fit_boundary_expansion, BasisTerm, NumericReport};
pub use spectral::{ball_spectral_bergman, SpectralBall};

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::kernel_transform::c_n;

/// Errors of FD solves on dyadically refined meshes.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvergenceReport {
    pub n: usize,
    pub h: Vec<f64>,
    pub max_error: Vec<f64>,
    pub orders: Vec<f64>,
}

/// Harmonic quartic used for order studies: quadratics are reproduced
/// exactly by the stencil and would show no convergence.
pub fn harmonic_test_polynomial(p: &[f64]) -> f64 {
    let (x, y) = (p[0], p[1]);
    let base = x.powi(4) - 6.0 * x * x * y * y + y.powi(4);
    match p.len() {
        2 => base,
        _ => base + x * p[2] - 0.5 * p[2],
    }
}

/// FD convergence study on the unit ball at `h = h0, h0/2, …` (`levels` meshes).
pub fn fd_convergence(n: usize, h0: f64, levels: usize) -> Result<ConvergenceReport> {
    let mut h = Vec::new();
    let mut err = Vec::new();
    for k in 0..levels {
        let hk = h0 / f64::from(1u32 << k);
        let grid = FdGrid::new(Arc::new(BallRegion::unit(n)), hk)?;
        let sol = solve_dirichlet_fd(&grid, harmonic_test_polynomial)?;
        h.push(hk);
        err.push(fd::max_error(&sol, harmonic_test_polynomial));
    }
    let orders = fd::observed_orders(&err);
    Ok(ConvergenceReport { n, h, max_error: err, orders })
}

/// Fits the numeric Poisson kernel of the unit ball along the inner normal
/// at `ζ₀ = e₁`. The numeric kernel is the discrete harmonic extension of a
/// bump of radius `eps` divided by its mass, sampled at lattice nodes with
/// `d ∈ [d_lo, d_hi]`. The basis is the closed form's
/// `c_n(d^{1−n} − d^{2−n}/2)` plus `d, d²` and the bump-width correction `d^{−n}`.
pub fn numeric_poisson_fit(n: usize, h: f64, eps: f64, d_lo: f64, d_hi: f64) -> Result<NumericReport> {
    if !(2..=3).contains(&n) {
        return Err(Error::Parameter(format!("finite differences support n = 2, 3, got {n}")));
    }
    let mut zeta = vec![0.0; n];
    zeta[0] = 1.0;
    let sol = fd::numeric_poisson_ball(&BallRegion::unit(n), &zeta, eps, h)?;
    let mut samples = Vec::new();
    let (k_lo, k_hi) = ((d_lo / h).ceil() as i64, (d_hi / h).floor() as i64);
    for k in k_lo..=k_hi {
        let d = k as f64 * h;
        let mut p = vec![0.0; n];
        p[0] = 1.0 - d;
        if let Some(v) = sol.value_at(&p) {
            samples.push((d, v));
        }
    }
    let ni = n as i32;
    let cn = c_n(n);
    let basis = [
        BasisTerm::pow(-ni - 1),
        BasisTerm::pow(1 - ni),
        BasisTerm::pow(2 - ni),
        BasisTerm::pow(3 - ni),
        BasisTerm::pow(4 - ni),
    ];
    let predicted = [None, Some(cn), Some(-cn / 2.0), Some(0.0), Some(0.0)];
    fit_boundary_expansion(&samples, &basis, &predicted)
}

/// Fits the numeric Poisson kernel of a model region along the normal at
/// the origin, `d ∈ [d_lo, d_hi]`.
///
/// The FD values at mesh widths `h` and `h/2` are Richardson-extrapolated at
/// the shared nodes of the normal ray. Grades 2 and 3 of the symbolic
/// expansion, including its log term, are subtracted as known; grades 0 and
/// 1 are fitted and predicted. `d^{−n−1}` absorbs the bump width and
/// `1, d, d²` the smooth part coming from the truncated region.
pub fn numeric_poisson_model_fit(region: &ModelRegion, h: f64, eps: f64, d_lo: f64, d_hi: f64) -> Result<NumericReport> {
    let n = region.n;
    let coarse = fd::numeric_poisson_model(region, eps, h)?;
    let fine = fd::numeric_poisson_model(region, eps, h / 2.0)?;
    let dom = crate::symbol_algebra::DomainSpec::symbolic(n, 3)?;
    let exp = crate::kernel_transform::poisson_kernel_expansion(&dom, 3)?;
    let (sym_basis, sym_coeff) = fit::basis_from_expansion(&exp, &region.jet);
    let ni = n as i32;
    let known: Vec<(BasisTerm, f64)> = sym_basis
        .iter()
        .zip(&sym_coeff)
        .filter(|(b, _)| b.power >= 3 - ni)
        .map(|(b, c)| (*b, c.unwrap_or(0.0)))
        .collect();
    let mut samples = Vec::new();
    let (k_lo, k_hi) = ((d_lo / h).ceil() as i64, (d_hi / h).floor() as i64);
    for k in k_lo..=k_hi {
        let mut p = vec![0.0; n];
        p[n - 1] = k as f64 * h;
        let (Some(a), Some(b)) = (coarse.node_value(&node(&p, h)), fine.node_value(&node(&p, h / 2.0))) else {
            continue;
        };
        let d = p[n - 1];
        let rest: f64 = known.iter().map(|(bt, c)| c * bt.eval(d)).sum();
        samples.push((d, (4.0 * b - a) / 3.0 - rest));
    }
    let mut basis = vec![BasisTerm::pow(-ni - 1)];
    let mut predicted = vec![None];
    for (b, c) in sym_basis.iter().zip(&sym_coeff) {
        if b.power < 3 - ni {
            basis.push(*b);
            predicted.push(*c);
        }
    }
    for p in 0..=2 {
        if !basis.contains(&BasisTerm::pow(p)) {
            basis.push(BasisTerm::pow(p));
            predicted.push(None);
        }
    }
    fit_boundary_expansion(&samples, &basis, &predicted)
}

fn node(p: &[f64], h: f64) -> Vec<i64> {
    p.iter().map(|v| (v / h).round() as i64).collect()
}
