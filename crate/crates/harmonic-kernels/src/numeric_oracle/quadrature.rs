//! Gauss–Legendre rules, Bessel `J₀`, radial Fourier inversion and ball quadrature.

use std::f64::consts::PI;

/// Gauss–Legendre nodes and weights on `[−1, 1]`.
pub fn gauss_legendre(m: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; m];
    let mut w = vec![0.0; m];
    for i in 0..m.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=m {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            if m == 1 {
                p0 = 1.0;
            }
            dp = m as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        if m == 1 {
            return (vec![0.0], vec![2.0]);
        }
        x[i] = -z;
        x[m - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[m - 1 - i] = w[i];
    }
    (x, w)
}

/// `∫_a^b f` by `panels` equal Gauss–Legendre panels.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize, rule: &(Vec<f64>, Vec<f64>)) -> f64 {
    let hw = (b - a) / panels as f64 / 2.0;
    let mut s = 0.0;
    for k in 0..panels {
        let mid = a + (2 * k + 1) as f64 * hw;
        s += rule.0.iter().zip(&rule.1).map(|(x, w)| w * f(mid + hw * x)).sum::<f64>();
    }
    s * hw
}

/// Bessel `J₀`: Miller's backward recurrence below 25, the Hankel asymptotic series above.
pub fn bessel_j0(x: f64) -> f64 {
    let x = x.abs();
    if x < 1e-8 {
        return 1.0 - x * x / 4.0;
    }
    if x > 25.0 {
        return j0_asymptotic(x);
    }
    let top = 2 * ((x as usize + 40) / 2);
    let (mut jp1, mut j) = (0.0f64, 1e-30f64);
    let mut norm = 0.0;
    let mut j0 = 0.0;
    for k in (0..top).rev() {
        let jm1 = 2.0 * (k + 1) as f64 / x * j - jp1;
        jp1 = j;
        j = jm1;
        if k == 0 {
            j0 = j;
            norm += j;
        } else if k % 2 == 0 {
            norm += 2.0 * j;
        }
        if j.abs() > 1e250 {
            j *= 1e-250;
            jp1 *= 1e-250;
            norm *= 1e-250;
        }
    }
    j0 / norm
}

fn j0_asymptotic(x: f64) -> f64 {
    // J₀ = (2/πx)^{1/2} (P cos χ − Q sin χ), a_k = Π(−(2i−1)²)/(k! 8^k)
    let (mut p, mut qs) = (1.0, 0.0);
    let mut term = 1.0f64;
    for k in 1..60 {
        let next = term * -(((2 * k - 1) * (2 * k - 1)) as f64) / (8.0 * k as f64 * x);
        if next.abs() > term.abs() {
            break;
        }
        term = next;
        let sign = if ((k - k % 2) / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 0 {
            p += sign * term;
        } else {
            qs += sign * term;
        }
        if term.abs() < 1e-17 {
            break;
        }
    }
    let chi = x - PI / 4.0;
    (2.0 / (PI * x)).sqrt() * (p * chi.cos() - qs * chi.sin())
}

/// Inverse Fourier transform over `ℝ^d` (`d` = 1 or 2) of a radial
/// function `f(|ξ′|)`, evaluated at `|x′| = rho`, integrating over `[0, r_max]`.
pub fn radial_ift(f: impl Fn(f64) -> f64, rho: f64, d: usize, r_max: f64) -> f64 {
    let rule = gauss_legendre(20);
    let width = if rho > 0.0 { (1.0 / rho).min(0.5) } else { 0.5 };
    let panels = (r_max / width).ceil().max(1.0) as usize;
    match d {
        1 => integrate(|r| f(r) * (rho * r).cos(), 0.0, r_max, panels, &rule) / PI,
        2 => integrate(|r| f(r) * bessel_j0(rho * r) * r, 0.0, r_max, panels, &rule) / (2.0 * PI),
        _ => panic!("radial_ift supports d = 1, 2"),
    }
}

/// `∫_{|y|<1} f(y) dy` in dimension 2 or 3 by a product rule of the given order.
pub fn ball_integral(n: usize, order: usize, f: impl Fn(&[f64]) -> f64 + Sync + Send) -> f64 {
    let (xr, wr) = gauss_legendre(order);
    let nphi = 2 * order;
    let dphi = 2.0 * PI / nphi as f64;
    match n {
        2 => crate::par::sum_f64(order * nphi, |k| {
            let (i, j) = (k / nphi, k % nphi);
            let r = 0.5 * (xr[i] + 1.0);
            let phi = j as f64 * dphi;
            0.5 * wr[i] * r * dphi * f(&[r * phi.cos(), r * phi.sin()])
        }),
        3 => crate::par::sum_f64(order * order * nphi, |k| {
            let (i, rest) = (k / (order * nphi), k % (order * nphi));
            let (j, l) = (rest / nphi, rest % nphi);
            let r = 0.5 * (xr[i] + 1.0);
            let ct = xr[j];
            let st = (1.0 - ct * ct).sqrt();
            let phi = l as f64 * dphi;
            0.5 * wr[i] * r * r * wr[j] * dphi * f(&[r * st * phi.cos(), r * st * phi.sin(), r * ct])
        }),
        _ => panic!("ball_integral supports n = 2, 3"),
    }
}

/// `∫_{|ζ|=1} f(ζ) dσ` in dimension 2 or 3.
pub fn sphere_integral(n: usize, order: usize, f: impl Fn(&[f64]) -> f64) -> f64 {
    let nphi = 2 * order;
    let dphi = 2.0 * PI / nphi as f64;
    match n {
        2 => (0..nphi).map(|j| f(&[(j as f64 * dphi).cos(), (j as f64 * dphi).sin()]) * dphi).sum(),
        3 => {
            let (x, w) = gauss_legendre(order);
            let mut s = 0.0;
            for (ct, wc) in x.iter().zip(&w) {
                let st = (1.0 - ct * ct).sqrt();
                for l in 0..nphi {
                    let phi = l as f64 * dphi;
                    s += wc * dphi * f(&[st * phi.cos(), st * phi.sin(), *ct]);
                }
            }
            s
        }
        _ => panic!("sphere_integral supports n = 2, 3"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gl_integrates_polynomials() {
        let rule = gauss_legendre(10);
        let v = integrate(|x| x.powi(19) + x.powi(18), -1.0, 1.0, 1, &rule);
        assert!((v - 2.0 / 19.0).abs() < 1e-14);
    }

    #[test]
    fn j0_values() {
        // reference values
        for (x, v) in [
            (0.5, 0.938_469_807_240_813),
            (2.404_825_557_695_773, 0.0),
            (10.0, -0.245_935_764_451_348_3),
            (24.0, -0.056_230_274_166_859_1),
            (30.0, -0.086_367_983_581_040_2),
            (100.0, 0.019_985_850_304_223_12),
        ] {
            assert!((bessel_j0(x) - v).abs() < 1e-13, "J0({x}) = {}", bessel_j0(x));
        }
    }

    #[test]
    fn radial_ift_of_exponential() {
        // transform of e^{−t|ξ′|} is c_n t/(t²+ρ²)^{n/2}
        let (t, rho) = (0.7, 0.4);
        let r2 = t * t + rho * rho;
        let v3 = radial_ift(|r| (-t * r).exp(), rho, 2, 60.0);
        assert!((v3 - t / (2.0 * PI * r2.powf(1.5))).abs() < 1e-13);
        let v2 = radial_ift(|r| (-t * r).exp(), rho, 1, 60.0);
        assert!((v2 - t / (PI * r2)).abs() < 1e-13);
    }

    #[test]
    fn ball_volumes() {
        assert!((ball_integral(2, 8, |_| 1.0) - PI).abs() < 1e-13);
        assert!((ball_integral(3, 8, |_| 1.0) - 4.0 * PI / 3.0).abs() < 1e-13);
        assert!((sphere_integral(3, 8, |_| 1.0) - 4.0 * PI).abs() < 1e-13);
    }
}
