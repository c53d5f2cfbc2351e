//! Numeric checks of the closed-form transforms of `w^p e^{−tw}`.
//!
//! Regular families are compared pointwise with the quadrature. At lattice
//! families the symbol is not integrable at `ξ′ = 0`; the quadrature then uses
//! the cutoff `(1 − e^{−|ξ′|²/σ²})^k`, `k` large enough for integrability, which changes the kernel by a smooth `S`.
//! Writing `F = R^m (U + Q log R) + S`, the scaling defect
//! `F(λz) − λ^m F(z) = λ^m log λ · R^m Q(τ) + Σ_k (λ^k − λ^m) S_k(z)`
//! is a polynomial whose degree-`m` part is exactly the log coefficient;
//! a least-squares polynomial fit recovers it.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use super::quadrature::radial_ift;
use crate::error::{Error, Result};
use crate::kernel_transform::radial::{family, Family};
use crate::kernel_transform::{c_n, radial_ift_term};
use crate::symbol_algebra::jet::q_to_f64;

/// Transform of `w^p e^{−tw}` (with the low-frequency cutoff when `sigma` is given) by quadrature.
pub fn numeric_family_value(n: usize, p: i32, t: f64, rho: f64, sigma: Option<f64>) -> f64 {
    let r_max = (40.0 + p.max(0) as f64 * (100.0 / t).ln()) / t;
    // r^{p+d−1} θ(r) integrable at 0 needs 2k > −p − d
    let k = (-p - (n as i32 - 1)).max(0) / 2 + 1;
    let f = |r: f64| {
        if r == 0.0 {
            return 0.0;
        }
        let cut = sigma.map_or(1.0, |s| (-(-(r * r) / (s * s)).exp_m1()).powi(k));
        cut * r.powi(p) * (-t * r).exp()
    };
    radial_ift(f, rho, n - 1, r_max)
}

/// Result of one family check.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FamilyCheck {
    pub n: usize,
    pub p: i32,
    pub lattice: bool,
    /// Max deviation relative to `c_n R^{−(p+n−1)}` (regular) or to the largest log coefficient (lattice).
    pub max_error: f64,
}

/// Compares a regular family with quadrature at points with `t > 0`, one of
/// them on the zero set of `2τ² − 1`.
pub fn check_regular_family(n: usize, p: i32) -> Result<f64> {
    let exp = radial_ift_term(0, 0, p, n, false)?;
    if exp.truncation().is_some() {
        return Err(Error::Parameter(format!("w^{p} is not a regular family in dimension {n}")));
    }
    let pts: [(f64, f64); 5] = [(1.0, 0.0), (0.6, 0.3), (0.3, 0.7), (0.5, 1.5), (0.2, 0.2)];
    let errs = crate::par::map(&pts, |&(t, rho)| {
        let r = (t * t + rho * rho).sqrt();
        let exact = exp.eval(&[t / r], r, &[]);
        let num = numeric_family_value(n, p, t, rho, None);
        // relative to the homogeneity scale: the exact value can vanish
        let scale = c_n(n) * r.powi(-(p + n as i32 - 1));
        (num - exact).abs() / scale
    });
    Ok(errs.into_iter().fold(0.0, f64::max))
}

/// Monomials `t^a s^b` (`s = ρ²`) with `a + 2b ≤ deg`.
fn monomials(deg: u32) -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    for b in 0..=deg / 2 {
        for a in 0..=deg - 2 * b {
            out.push((a, b));
        }
    }
    out
}

/// Recovers the log coefficient of a lattice family numerically and returns
/// the max deviation of its `t^{m−2j}ρ^{2j}` coefficients, relative to the
/// largest one.
pub fn check_lattice_family(n: usize, p: i32) -> Result<f64> {
    let (m, log) = match family(n, p) {
        Family::Lattice { m, log } => (m, log),
        _ => return Err(Error::Parameter(format!("w^{p} is not a lattice family in dimension {n}"))),
    };
    // σ and the degree trade smooth-part truncation against quadrature noise
    let (lambda, sigma, deg, scale) = (2.0f64, 0.5, 10u32, 0.6);
    let mut pts = Vec::new();
    for i in 0..14 {
        for j in 0..14 {
            let r = 0.1 + 0.2 * i as f64 / 13.0;
            let tau = 0.3 + 0.7 * j as f64 / 13.0;
            pts.push((r * tau, r * (1.0 - tau * tau).sqrt()));
        }
    }
    let lm = lambda.powi(m as i32);
    let vals = crate::par::map(&pts, |&(t, rho)| {
        numeric_family_value(n, p, lambda * t, lambda * rho, Some(sigma))
            - lm * numeric_family_value(n, p, t, rho, Some(sigma))
    });
    let mons = monomials(deg);
    let a = DMatrix::from_fn(pts.len(), mons.len(), |i, k| {
        let (t, rho) = pts[i];
        let (ea, eb) = mons[k];
        (t / scale).powi(ea as i32) * (rho * rho / (scale * scale)).powi(eb as i32)
    });
    let b = DVector::from_vec(vals);
    let svd = a.svd(true, true);
    let x = svd.solve(&b, 1e-14).map_err(|e| Error::Solver(e.to_string()))?;
    // log coefficient as polynomial in (t, ρ²): expand Q(τ)R^m with ρ² = R²(1−τ²)
    let cn = c_n(n);
    let norm = lm * lambda.ln();
    let mut want = vec![0.0; m as usize / 2 + 1];
    let mut got = vec![0.0; m as usize / 2 + 1];
    for (k, &(ea, eb)) in mons.iter().enumerate() {
        if ea + 2 * eb == m {
            got[eb as usize] = x[k] / scale.powi(m as i32) / norm;
        }
    }
    // Σ_a q_a τ^a R^m: τ^a R^{m} = t^a R^{m−a}, and m − a is even
    for (ea, qa) in log.iter().enumerate() {
        let qa = q_to_f64(qa) * cn;
        if qa == 0.0 {
            continue;
        }
        let half = (m as usize - ea) / 2;
        // R^{2·half} = (t² + s)^half
        let mut binom = 1.0;
        for (j, wj) in want.iter_mut().enumerate().take(half + 1) {
            // t^{ea + 2(half−j)} s^j, coefficient C(half, j)
            *wj += qa * binom;
            binom = binom * (half - j) as f64 / (j + 1) as f64;
        }
    }
    let top = want.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    Ok(want.iter().zip(&got).map(|(w, g)| (w - g).abs() / top).fold(0.0, f64::max))
}

/// Checks one family in dimension `n` (2 or 3).
pub fn check_family(n: usize, p: i32) -> Result<FamilyCheck> {
    if !(2..=3).contains(&n) {
        return Err(Error::Parameter(format!("transform quadrature supports n = 2, 3, got {n}")));
    }
    match family(n, p) {
        Family::Lattice { .. } => Ok(FamilyCheck { n, p, lattice: true, max_error: check_lattice_family(n, p)? }),
        Family::Regular(_) => Ok(FamilyCheck { n, p, lattice: false, max_error: check_regular_family(n, p)? }),
        Family::Unsupported => Err(Error::Parameter(format!("no closed form for w^{p} in dimension {n}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn regular_families() {
        for (n, p) in [(3, 0), (3, 1), (3, -1), (2, 0), (2, 1), (2, 2)] {
            let e = check_regular_family(n, p).unwrap();
            assert!(e < 1e-10, "n={n} p={p}: {e:e}");
        }
    }

    #[test]
    fn lattice_families() {
        for (n, p) in [(3, -2), (3, -3), (3, -4), (2, -1), (2, -2), (2, -3)] {
            let e = check_lattice_family(n, p).unwrap();
            assert!(e < 1e-8, "n={n} p={p}: {e:e}");
        }
    }
}
