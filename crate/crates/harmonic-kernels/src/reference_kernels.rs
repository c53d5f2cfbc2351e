//! Closed-form Poisson and harmonic Bergman kernels of the half-space and the
//! ball, and the leading weighted kernel of the half-space.

use statrs::function::gamma::gamma;

use crate::error::{Error, Result};
use crate::kernel_transform::c_n;

/// Which closed form.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ClosedKind {
    /// `{x_n > 0}`.
    HalfSpace,
    /// `{|x| < radius}`.
    Ball { radius: f64 },
}

impl ClosedKind {
    pub fn unit_ball() -> Self {
        ClosedKind::Ball { radius: 1.0 }
    }
}

/// Two points of `ℝⁿ`; the second is a boundary point for Poisson kernels.
#[derive(Clone, Debug, PartialEq)]
pub struct PointPair {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

impl PointPair {
    pub fn new(x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        if x.len() != y.len() || x.len() < 2 {
            return Err(Error::Parameter(format!("points must share a dimension ≥ 2 (got {} and {})", x.len(), y.len())));
        }
        Ok(PointPair { x, y })
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }

    /// `ỹ = (y′, −y_n)`.
    pub fn reflected(&self) -> Vec<f64> {
        let mut r = self.y.clone();
        let n = r.len();
        r[n - 1] = -r[n - 1];
        r
    }
}

fn dist2(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(u, v)| (u - v) * (u - v)).sum()
}

fn norm2(a: &[f64]) -> f64 {
    a.iter().map(|u| u * u).sum()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(u, v)| u * v).sum()
}

const BOUNDARY_TOL: f64 = 1e-9;

/// `K(x,ζ) = c_n x_n/|x−ζ|^n` (half-space) or `(c_n/2)(1−|x|²)/|x−ζ|^n` (unit ball, rescaled for other radii).
pub fn eval_poisson_closed(kind: ClosedKind, pp: &PointPair) -> Result<f64> {
    let n = pp.n();
    match kind {
        ClosedKind::HalfSpace => {
            let xn = pp.x[n - 1];
            if pp.y[n - 1].abs() > BOUNDARY_TOL {
                return Err(Error::Parameter("ζ must lie on {x_n = 0}".into()));
            }
            if xn < 0.0 {
                return Err(Error::Parameter("x must lie in the half-space".into()));
            }
            let d2 = dist2(&pp.x, &pp.y);
            if d2 == 0.0 {
                return Err(Error::Singular("x = ζ on the boundary".into()));
            }
            Ok(c_n(n) * xn / d2.powf(n as f64 / 2.0))
        }
        ClosedKind::Ball { radius } => {
            let x: Vec<f64> = pp.x.iter().map(|v| v / radius).collect();
            let z: Vec<f64> = pp.y.iter().map(|v| v / radius).collect();
            if (norm2(&z) - 1.0).abs() > BOUNDARY_TOL {
                return Err(Error::Parameter("ζ must lie on the sphere".into()));
            }
            if norm2(&x) > 1.0 {
                return Err(Error::Parameter("x must lie in the ball".into()));
            }
            let d2 = dist2(&x, &z);
            if d2 == 0.0 {
                return Err(Error::Singular("x = ζ on the boundary".into()));
            }
            let k = 0.5 * c_n(n) * (1.0 - norm2(&x)) / d2.powf(n as f64 / 2.0);
            Ok(k * radius.powi(1 - n as i32))
        }
    }
}

/// Harmonic Bergman kernel:
/// `2c_n (n(x_n+y_n)² − |x−ỹ|²)/|x−ỹ|^{n+2}` on the half-space,
/// `(c_n/2)((n−4)|x|⁴|y|⁴ + (8x·y−2n−4)|x|²|y|² + n)/(1−2x·y+|x|²|y|²)^{n/2+1}` on the unit ball.
pub fn eval_bergman_closed(kind: ClosedKind, pp: &PointPair) -> Result<f64> {
    let n = pp.n();
    let nf = n as f64;
    match kind {
        ClosedKind::HalfSpace => {
            let (xn, yn) = (pp.x[n - 1], pp.y[n - 1]);
            if xn < 0.0 || yn < 0.0 {
                return Err(Error::Parameter("points must lie in the closed half-space".into()));
            }
            let d2 = dist2(&pp.x, &pp.reflected());
            if d2 == 0.0 {
                return Err(Error::Singular("x = y on the boundary".into()));
            }
            let s = xn + yn;
            Ok(2.0 * c_n(n) * (nf * s * s - d2) / d2.powf(nf / 2.0 + 1.0))
        }
        ClosedKind::Ball { radius } => {
            let x: Vec<f64> = pp.x.iter().map(|v| v / radius).collect();
            let y: Vec<f64> = pp.y.iter().map(|v| v / radius).collect();
            let (xx, yy, xy) = (norm2(&x), norm2(&y), dot(&x, &y));
            if xx > 1.0 + BOUNDARY_TOL || yy > 1.0 + BOUNDARY_TOL {
                return Err(Error::Parameter("points must lie in the closed ball".into()));
            }
            let den = 1.0 - 2.0 * xy + xx * yy;
            if den <= 0.0 {
                return Err(Error::Singular("x = y on the sphere".into()));
            }
            let num = (nf - 4.0) * xx * xx * yy * yy + (8.0 * xy - 2.0 * nf - 4.0) * xx * yy + nf;
            Ok(0.5 * c_n(n) * num / den.powf(nf / 2.0 + 1.0) * radius.powi(-(n as i32)))
        }
    }
}

/// `1/Γ(x)`, zero at the poles.
pub fn rgamma(x: f64) -> f64 {
    if x <= 0.0 && x == x.floor() {
        return 0.0;
    }
    1.0 / gamma(x)
}

fn series_2f1(a: f64, b: f64, c: f64, z: f64) -> f64 {
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 0..2000 {
        let kf = k as f64;
        term *= (a + kf) * (b + kf) / ((c + kf) * (kf + 1.0)) * z;
        sum += term;
        if term.abs() < 1e-17 * sum.abs() && k > 2 {
            break;
        }
    }
    sum
}

/// Gauss `₂F₁(a,b;c;z)` for real `z ≤ 1/2`: power series for `|z| ≤ 1/2`, the
/// Pfaff transformation `(1−z)^{−a} ₂F₁(a, c−b; c; z/(z−1))` for
/// `−2 ≤ z < −1/2`, and the `1/z` connection formula below `−2`
/// (which needs `b − a` not an integer).
pub fn hyp2f1(a: f64, b: f64, c: f64, z: f64) -> Result<f64> {
    if z > 0.5 {
        return Err(Error::Parameter(format!("₂F₁ is only evaluated for z ≤ 1/2, got {z}")));
    }
    if z.abs() <= 0.5 {
        return Ok(series_2f1(a, b, c, z));
    }
    if z >= -2.0 {
        return Ok((1.0 - z).powf(-a) * series_2f1(a, c - b, c, z / (z - 1.0)));
    }
    if (b - a).fract() == 0.0 {
        return Err(Error::Parameter("the 1/z branch needs b − a off the integers".into()));
    }
    let w = 1.0 / z;
    let mz = -z;
    let t1 = gamma(c) * gamma(b - a) * rgamma(b) * rgamma(c - a) * mz.powf(-a) * series_2f1(a, a - c + 1.0, a - b + 1.0, w);
    let t2 = gamma(c) * gamma(a - b) * rgamma(a) * rgamma(c - b) * mz.powf(-b) * series_2f1(b, b - c + 1.0, b - a + 1.0, w);
    Ok(t1 + t2)
}

/// Leading weighted half-space kernel, the inverse transform of
/// `(2|ξ′|)^{α+1} e^{−(x_n+y_n)|ξ′|}/(Γ(α+1)e^{g0})`:
///
/// ```text
/// 4^{α+1} Γ((n+α)/2) Γ((n+α+1)/2) / (π^{n/2} Γ((n−1)/2) Γ(α+1) e^{g0}) · t^{−(n+α)}
///   · ₂F₁((n+α)/2, (n+α+1)/2; (n−1)/2; −|x′−y′|²/t²),   t = x_n + y_n.
/// ```
pub fn eval_weighted_halfspace(alpha: f64, g0: f64, pp: &PointPair) -> Result<f64> {
    let n = pp.n();
    if alpha <= -1.0 || !alpha.is_finite() {
        return Err(Error::Parameter(format!("weight exponent α must exceed −1, got {alpha}")));
    }
    let nf = n as f64;
    let t = pp.x[n - 1] + pp.y[n - 1];
    if t <= 0.0 {
        return Err(Error::Parameter("x_n + y_n must be positive".into()));
    }
    let rho2 = dist2(&pp.x[..n - 1], &pp.y[..n - 1]);
    let a = (nf + alpha) / 2.0;
    let b = a + 0.5;
    let c = (nf - 1.0) / 2.0;
    let pre = 4f64.powf(alpha + 1.0) * gamma(a) * gamma(b)
        / (std::f64::consts::PI.powf(nf / 2.0) * gamma(c) * gamma(alpha + 1.0) * g0.exp());
    Ok(pre * t.powf(-(nf + alpha)) * hyp2f1(a, b, c, -rho2 / (t * t))?)
}

/// The unweighted leading term `−2∂_t[c_n t/(t²+ρ²)^{n/2}]` at `t = x_n+y_n`.
pub fn unweighted_leading_green(pp: &PointPair) -> f64 {
    let n = pp.n();
    let nf = n as f64;
    let t = pp.x[n - 1] + pp.y[n - 1];
    let r2 = t * t + dist2(&pp.x[..n - 1], &pp.y[..n - 1]);
    2.0 * c_n(n) * (nf * t * t - r2) / r2.powf(nf / 2.0 + 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pp(x: &[f64], y: &[f64]) -> PointPair {
        PointPair::new(x.to_vec(), y.to_vec()).unwrap()
    }

    #[test]
    fn poisson_examples() {
        let k = eval_poisson_closed(ClosedKind::unit_ball(), &pp(&[0.0, 0.0, 0.0], &[0.0, 1.0, 0.0])).unwrap();
        assert!((k - c_n(3) / 2.0).abs() < 1e-15);
        let k = eval_poisson_closed(ClosedKind::HalfSpace, &pp(&[0.0, 0.0, 1.0], &[0.0, 0.0, 0.0])).unwrap();
        assert!((k - 1.0 / (2.0 * std::f64::consts::PI)).abs() < 1e-15);
        assert!(matches!(
            eval_poisson_closed(ClosedKind::HalfSpace, &pp(&[0.0, 0.0], &[0.0, 0.0])),
            Err(Error::Singular(_))
        ));
    }

    #[test]
    fn bergman_examples() {
        let h = eval_bergman_closed(ClosedKind::unit_ball(), &pp(&[0.0; 3], &[0.0; 3])).unwrap();
        assert!((h - 1.5 * c_n(3)).abs() < 1e-15);
        let h = eval_bergman_closed(ClosedKind::HalfSpace, &pp(&[0.0, 0.0, 1.0], &[0.0, 0.0, 1.0])).unwrap();
        assert!((h - 1.0 / (4.0 * std::f64::consts::PI)).abs() < 1e-15);
    }

    #[test]
    fn hyp2f1_branches_agree() {
        // (1−z)^{−a} = ₂F₁(a, b; b; z)
        for &z in &[-0.3, -0.9, -1.9, -2.5, -40.0] {
            let v = hyp2f1(0.7, 1.3, 1.3, z).unwrap();
            assert!((v - (1.0 - z).powf(-0.7)).abs() < 1e-12 * v.abs(), "z={z}");
        }
        // continuity across the branch points
        for &z in &[-0.5, -2.0] {
            let lo = hyp2f1(1.5, 2.0, 2.5, z - 1e-9).unwrap();
            let hi = hyp2f1(1.5, 2.0, 2.5, z + 1e-9).unwrap();
            assert!((lo - hi).abs() < 1e-7 * lo.abs());
        }
    }

    #[test]
    fn weighted_alpha_zero_is_unweighted() {
        for (x, y) in [([0.3, -0.2, 0.4], [0.1, 0.5, 0.2]), ([0.0, 0.0, 0.1], [2.0, 1.0, 0.05])] {
            let p = pp(&x, &y);
            let w = eval_weighted_halfspace(0.0, 0.0, &p).unwrap();
            let u = unweighted_leading_green(&p);
            assert!((w - u).abs() < 1e-10 * u.abs(), "{w} vs {u}");
        }
        assert!(eval_weighted_halfspace(-1.0, 0.0, &pp(&[0.0, 1.0], &[0.0, 1.0])).is_err());
    }
}
