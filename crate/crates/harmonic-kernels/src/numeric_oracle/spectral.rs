//! Spectral `Λ` and `H` on the unit ball.
//!
//! `K` maps a degree-`l` spherical harmonic `Y` to `r^l Y`, so
//! `⟨KY, KY⟩_ball = ‖Y‖²/(2l+n)` and `Λ` is diagonal with eigenvalue
//! `1/(2l+n)`. Then `H(x,y) = ⟨Λ⁻¹K_x, K_y⟩ = Σ_l (2l+n)(|x||y|)^l Z_l(x̂·ŷ)`
//! with `Z_l` the reproducing kernel of degree-`l` harmonics on the sphere.

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectralBall {
    pub l_max: usize,
    pub n: usize,
}

fn sphere_area(n: usize) -> f64 {
    2.0 / crate::kernel_transform::c_n(n)
}

impl SpectralBall {
    pub fn new(l_max: usize, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::Parameter(format!("dimension must be at least 2, got {n}")));
        }
        Ok(SpectralBall { l_max, n })
    }

    /// Eigenvalue of `Λ` on degree-`l` harmonics.
    pub fn lambda_eigenvalue(&self, l: usize) -> f64 {
        1.0 / (2 * l + self.n) as f64
    }

    /// `Z_l(s)` for `l = 0..=l_max`, `s = x̂·ŷ`.
    pub fn zonal(&self, s: f64) -> Vec<f64> {
        let n = self.n;
        let area = sphere_area(n);
        let mut out = Vec::with_capacity(self.l_max + 1);
        if n == 2 {
            // dim 2 for l ≥ 1, Chebyshev T_l
            let (mut t0, mut t1) = (1.0, s);
            for l in 0..=self.l_max {
                let v = match l {
                    0 => 1.0,
                    1 => 2.0 * s,
                    _ => {
                        let t2 = 2.0 * s * t1 - t0;
                        t0 = t1;
                        t1 = t2;
                        2.0 * t2
                    }
                };
                out.push(v / area);
            }
            return out;
        }
        // (2l+n−2)/(n−2) · C_l^{λ}, λ = (n−2)/2
        let lam = (n as f64 - 2.0) / 2.0;
        let (mut c0, mut c1) = (1.0, 2.0 * lam * s);
        for l in 0..=self.l_max {
            let c = match l {
                0 => c0,
                1 => c1,
                _ => {
                    let lf = (l - 1) as f64;
                    let c2 = (2.0 * (lf + lam) * s * c1 - (lf + 2.0 * lam - 1.0) * c0) / (lf + 1.0);
                    c0 = c1;
                    c1 = c2;
                    c2
                }
            };
            let dimfac = (2 * l + n - 2) as f64 / (n - 2) as f64;
            out.push(dimfac * c / area);
        }
        out
    }

    /// Truncated spectral sum for the harmonic Bergman kernel.
    pub fn bergman(&self, x: &[f64], y: &[f64]) -> Result<f64> {
        if x.len() != self.n || y.len() != self.n {
            return Err(Error::Parameter(format!("points must have {} coordinates", self.n)));
        }
        let rx = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        let ry = y.iter().map(|v| v * v).sum::<f64>().sqrt();
        if rx >= 1.0 || ry >= 1.0 {
            return Err(Error::Parameter("points must lie in the open ball".into()));
        }
        let s = if rx == 0.0 || ry == 0.0 {
            1.0
        } else {
            (x.iter().zip(y).map(|(a, b)| a * b).sum::<f64>() / (rx * ry)).clamp(-1.0, 1.0)
        };
        let z = self.zonal(s);
        let mut pw = 1.0;
        let mut h = 0.0;
        for (l, zl) in z.iter().enumerate() {
            h += pw * zl / self.lambda_eigenvalue(l);
            pw *= rx * ry;
            if pw == 0.0 {
                break;
            }
        }
        Ok(h)
    }
}

/// `H(x,y)` via [`SpectralBall::bergman`].
pub fn ball_spectral_bergman(sb: &SpectralBall, x: &[f64], y: &[f64]) -> Result<f64> {
    sb.bergman(x, y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel_transform::c_n;
    use crate::reference_kernels::{eval_bergman_closed, ClosedKind, PointPair};

    #[test]
    fn origin_and_eigenvalue() {
        let sb = SpectralBall::new(10, 3).unwrap();
        assert!((sb.lambda_eigenvalue(0) - 1.0 / 3.0).abs() < 1e-16);
        let h = sb.bergman(&[0.0; 3], &[0.0; 3]).unwrap();
        assert!((h - 1.5 * c_n(3)).abs() < 1e-15);
    }

    #[test]
    fn matches_closed_form() {
        for n in [2usize, 3, 4] {
            let sb = SpectralBall::new(60, n).unwrap();
            let mut x = vec![0.0; n];
            let mut y = vec![0.0; n];
            x[0] = 0.4;
            x[n - 1] = -0.3;
            y[1] = 0.5;
            y[n - 1] = 0.2;
            let s = sb.bergman(&x, &y).unwrap();
            let c = eval_bergman_closed(ClosedKind::unit_ball(), &PointPair::new(x, y).unwrap()).unwrap();
            assert!((s - c).abs() < 1e-12 * c.abs(), "n={n}: {s} vs {c}");
        }
    }
}
