//! Finite-difference Dirichlet solver with Shortley–Weller boundary stencils.
//!
//! Interior lattice nodes `h·ℤⁿ ∩ Ω` are unknowns. Along each axis a node
//! whose neighbour falls outside `Ω` uses the exact distance `θh` to the
//! boundary crossing and the Dirichlet value there. The resulting matrix is
//! an M-matrix (discrete maximum principle) but not symmetric at cut cells,
//! so it is solved with preconditioned BiCGSTAB.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::par;

/// A bounded open set with computable boundary crossings along lattice axes.
pub trait Region: Send + Sync {
    fn dim(&self) -> usize;
    fn contains(&self, p: &[f64]) -> bool;
    /// Axis-aligned bounding box `(lo, hi)`.
    fn bbox(&self) -> (Vec<f64>, Vec<f64>);
    /// Distance `s ∈ (0, h]` from the interior point `p` to `∂Ω` along `dir·e_axis`.
    fn crossing(&self, p: &[f64], axis: usize, dir: f64, h: f64) -> f64 {
        let mut q = p.to_vec();
        let (mut lo, mut hi) = (0.0, h);
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            q[axis] = p[axis] + dir * mid;
            if self.contains(&q) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }
}

/// `{|x − center| < radius}`.
#[derive(Clone, Debug, PartialEq)]
pub struct BallRegion {
    pub center: Vec<f64>,
    pub radius: f64,
}

impl BallRegion {
    pub fn unit(n: usize) -> Self {
        BallRegion { center: vec![0.0; n], radius: 1.0 }
    }

    /// `∫_{∂B} φ(|ζ − ζ₀|/ε) dσ(ζ)` for a boundary point `ζ₀` (n = 2, 3).
    pub fn cap_mass(&self, eps: f64, profile: impl Fn(f64) -> f64) -> f64 {
        let n = self.dim();
        let r = self.radius;
        // chord 2r sin(θ/2) reaches ε at θ_max
        let th_max = if eps >= 2.0 * r { std::f64::consts::PI } else { 2.0 * (eps / (2.0 * r)).asin() };
        let rule = super::quadrature::gauss_legendre(20);
        let f = |th: f64| profile(2.0 * r * (th / 2.0).sin() / eps);
        match n {
            2 => 2.0 * r * super::quadrature::integrate(f, 0.0, th_max, 16, &rule),
            3 => {
                2.0 * std::f64::consts::PI
                    * r
                    * r
                    * super::quadrature::integrate(|th| f(th) * th.sin(), 0.0, th_max, 16, &rule)
            }
            _ => panic!("cap_mass supports n = 2, 3"),
        }
    }
}

impl Region for BallRegion {
    fn dim(&self) -> usize {
        self.center.len()
    }

    fn contains(&self, p: &[f64]) -> bool {
        p.iter().zip(&self.center).map(|(a, c)| (a - c) * (a - c)).sum::<f64>() < self.radius * self.radius
    }

    fn bbox(&self) -> (Vec<f64>, Vec<f64>) {
        (self.center.iter().map(|c| c - self.radius).collect(), self.center.iter().map(|c| c + self.radius).collect())
    }

    fn crossing(&self, p: &[f64], axis: usize, dir: f64, _h: f64) -> f64 {
        let rel: Vec<f64> = p.iter().zip(&self.center).map(|(a, c)| a - c).collect();
        let r2: f64 = rel.iter().map(|v| v * v).sum();
        let pa = rel[axis] * dir;
        -pa + (pa * pa + self.radius * self.radius - r2).max(0.0).sqrt()
    }
}

/// Model domain `{Φ(|x′|²) < x_n < top, |x_i| < half_width}` with `Φ`
/// the Taylor polynomial `Σ a_k s^k/k!` of a numeric jet.
#[derive(Clone, Debug, PartialEq)]
pub struct ModelRegion {
    pub n: usize,
    pub jet: Vec<f64>,
    pub half_width: f64,
    pub top: f64,
}

impl ModelRegion {
    pub fn phi(&self, s: f64) -> f64 {
        let mut fact = 1.0;
        let mut pw = 1.0;
        let mut v = 0.0;
        for (k, a) in self.jet.iter().enumerate() {
            fact *= (k + 1) as f64;
            pw *= s;
            v += a * pw / fact;
        }
        v
    }

    pub fn phi_prime(&self, s: f64) -> f64 {
        let mut fact = 1.0;
        let mut pw = 1.0;
        let mut v = 0.0;
        for (k, a) in self.jet.iter().enumerate() {
            if k > 0 {
                fact *= k as f64;
                pw *= s;
            }
            v += a * pw / fact;
        }
        v
    }

    /// `∫ φ(|x′|/ε) dσ` over the graph part of the boundary near the origin.
    pub fn cap_mass(&self, eps: f64, profile: impl Fn(f64) -> f64) -> f64 {
        let rule = super::quadrature::gauss_legendre(20);
        // |∇_{x′} Φ(|x′|²)| = 2r Φ′(r²)
        let g = |r: f64| profile(r / eps) * (1.0 + (2.0 * r * self.phi_prime(r * r)).powi(2)).sqrt();
        match self.n {
            2 => 2.0 * super::quadrature::integrate(g, 0.0, eps, 16, &rule),
            3 => 2.0 * std::f64::consts::PI * super::quadrature::integrate(|r| r * g(r), 0.0, eps, 16, &rule),
            _ => panic!("cap_mass supports n = 2, 3"),
        }
    }
}

impl Region for ModelRegion {
    fn dim(&self) -> usize {
        self.n
    }

    fn contains(&self, p: &[f64]) -> bool {
        let n = self.n;
        let s: f64 = p[..n - 1].iter().map(|v| v * v).sum();
        p[..n - 1].iter().all(|v| v.abs() < self.half_width) && p[n - 1] > self.phi(s) && p[n - 1] < self.top
    }

    fn bbox(&self) -> (Vec<f64>, Vec<f64>) {
        let n = self.n;
        let s = (n - 1) as f64 * self.half_width * self.half_width;
        let bottom = (0..=20).map(|i| self.phi(s * i as f64 / 20.0)).fold(0.0f64, f64::min);
        let mut lo = vec![-self.half_width; n];
        let mut hi = vec![self.half_width; n];
        lo[n - 1] = bottom;
        hi[n - 1] = self.top;
        (lo, hi)
    }
}

/// Uniform lattice of mesh width `h` over a region.
#[derive(Clone)]
pub struct FdGrid {
    pub n: usize,
    pub h: f64,
    pub region: Arc<dyn Region>,
}

impl std::fmt::Debug for FdGrid {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FdGrid").field("n", &self.n).field("h", &self.h).finish_non_exhaustive()
    }
}

impl FdGrid {
    pub fn new(region: Arc<dyn Region>, h: f64) -> Result<Self> {
        let n = region.dim();
        if !(h > 0.0 && h.is_finite()) {
            return Err(Error::Parameter(format!("mesh width must be positive, got {h}")));
        }
        if !(2..=3).contains(&n) {
            return Err(Error::Parameter(format!("finite differences support n = 2, 3, got {n}")));
        }
        Ok(FdGrid { n, h, region })
    }
}

/// Compressed sparse rows.
#[derive(Clone, Debug, Default)]
pub struct Csr {
    pub row_ptr: Vec<usize>,
    pub cols: Vec<usize>,
    pub vals: Vec<f64>,
}

impl Csr {
    pub fn rows(&self) -> usize {
        self.row_ptr.len() - 1
    }

    pub fn mul_into(&self, x: &[f64], y: &mut [f64]) {
        par::fill(y, |i| {
            let (a, b) = (self.row_ptr[i], self.row_ptr[i + 1]);
            (a..b).map(|k| self.vals[k] * x[self.cols[k]]).sum()
        });
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.rows())
            .map(|i| {
                (self.row_ptr[i]..self.row_ptr[i + 1]).find(|&k| self.cols[k] == i).map_or(0.0, |k| self.vals[k])
            })
            .collect()
    }
}

/// Outcome of an iterative solve.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolveStats {
    pub iterations: usize,
    pub relative_residual: f64,
}

/// Preconditioner for [`bicgstab`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Precond {
    Jacobi,
    /// Relaxed modified ILU(0): a fraction `omega` of the dropped fill is
    /// moved to the diagonal (`0` is plain ILU(0), `1` is MILU).
    Milu { omega: f64 },
}

enum Factor {
    Jacobi(Vec<f64>),
    Lu { lu: Csr, diag: Vec<usize> },
}

impl Factor {
    fn new(a: &Csr, pc: Precond) -> Result<Self> {
        match pc {
            Precond::Jacobi => {
                Ok(Factor::Jacobi(a.diagonal().iter().map(|d| if *d != 0.0 { 1.0 / d } else { 1.0 }).collect()))
            }
            Precond::Milu { omega } => {
                let mut lu = a.clone();
                let m = lu.rows();
                let mut diag = vec![usize::MAX; m];
                for (i, d) in diag.iter_mut().enumerate() {
                    if let Some(k) = (lu.row_ptr[i]..lu.row_ptr[i + 1]).find(|&k| lu.cols[k] == i) {
                        *d = k;
                    }
                }
                if diag.contains(&usize::MAX) {
                    return Err(Error::Solver("matrix has a structurally zero diagonal".into()));
                }
                for i in 0..m {
                    let (lo, hi) = (lu.row_ptr[i], lu.row_ptr[i + 1]);
                    for kk in lo..hi {
                        let k = lu.cols[kk];
                        if k >= i {
                            break;
                        }
                        let piv = lu.vals[diag[k]];
                        if piv == 0.0 {
                            return Err(Error::Solver(format!("zero pivot in incomplete factorization at row {k}")));
                        }
                        let lik = lu.vals[kk] / piv;
                        lu.vals[kk] = lik;
                        let mut dropped = 0.0;
                        for kj in diag[k] + 1..lu.row_ptr[k + 1] {
                            let j = lu.cols[kj];
                            let ukj = lu.vals[kj];
                            match (kk + 1..hi).find(|&q| lu.cols[q] == j) {
                                Some(q) => lu.vals[q] -= lik * ukj,
                                None => dropped += lik * ukj,
                            }
                        }
                        lu.vals[diag[i]] -= omega * dropped;
                    }
                }
                Ok(Factor::Lu { lu, diag })
            }
        }
    }

    fn apply(&self, r: &[f64], z: &mut [f64]) {
        match self {
            Factor::Jacobi(dinv) => par::fill(z, |i| dinv[i] * r[i]),
            Factor::Lu { lu, diag } => {
                // triangular solves are inherently sequential
                let m = r.len();
                for i in 0..m {
                    let mut v = r[i];
                    for k in lu.row_ptr[i]..diag[i] {
                        v -= lu.vals[k] * z[lu.cols[k]];
                    }
                    z[i] = v;
                }
                for i in (0..m).rev() {
                    let mut v = z[i];
                    for k in diag[i] + 1..lu.row_ptr[i + 1] {
                        v -= lu.vals[k] * z[lu.cols[k]];
                    }
                    z[i] = v / lu.vals[diag[i]];
                }
            }
        }
    }
}

/// Preconditioned BiCGSTAB for `A x = b`; columns of each row must be sorted.
pub fn bicgstab(a: &Csr, b: &[f64], pc: Precond, tol: f64, max_iter: usize) -> Result<(Vec<f64>, SolveStats)> {
    let m = a.rows();
    let factor = Factor::new(a, pc)?;
    let bnorm = par::dot(b, b).sqrt();
    let mut x = vec![0.0; m];
    if bnorm == 0.0 {
        return Ok((x, SolveStats { iterations: 0, relative_residual: 0.0 }));
    }
    let mut r = b.to_vec();
    let r0 = r.clone();
    let (mut rho, mut alpha, mut omega) = (1.0f64, 1.0f64, 1.0f64);
    let mut v = vec![0.0; m];
    let mut p = vec![0.0; m];
    let mut ph = vec![0.0; m];
    let mut sh = vec![0.0; m];
    let mut t = vec![0.0; m];
    let mut s = vec![0.0; m];
    for it in 1..=max_iter {
        let rho_new = par::dot(&r0, &r);
        if rho_new == 0.0 || omega == 0.0 {
            return Err(Error::Solver(format!("BiCGSTAB breakdown at iteration {it}")));
        }
        let beta = (rho_new / rho) * (alpha / omega);
        rho = rho_new;
        par::update(&mut p, |i, pi| r[i] + beta * (pi - omega * v[i]));
        factor.apply(&p, &mut ph);
        a.mul_into(&ph, &mut v);
        alpha = rho / par::dot(&r0, &v);
        par::fill(&mut s, |i| r[i] - alpha * v[i]);
        let snorm = par::dot(&s, &s).sqrt();
        if snorm / bnorm < tol {
            par::update(&mut x, |i, xi| xi + alpha * ph[i]);
            return Ok((x, SolveStats { iterations: it, relative_residual: snorm / bnorm }));
        }
        factor.apply(&s, &mut sh);
        a.mul_into(&sh, &mut t);
        omega = par::dot(&t, &s) / par::dot(&t, &t);
        par::update(&mut x, |i, xi| xi + alpha * ph[i] + omega * sh[i]);
        par::fill(&mut r, |i| s[i] - omega * t[i]);
        let rnorm = par::dot(&r, &r).sqrt();
        if rnorm / bnorm < tol {
            return Ok((x, SolveStats { iterations: it, relative_residual: rnorm / bnorm }));
        }
    }
    Err(Error::Solver(format!("BiCGSTAB did not reach {tol:e} in {max_iter} iterations")))
}

/// Discrete harmonic function on the grid nodes.
#[derive(Clone, Debug)]
pub struct FdSolution {
    pub grid: FdGrid,
    /// Integer lattice coordinates of the unknowns.
    pub nodes: Vec<Vec<i64>>,
    pub values: Vec<f64>,
    pub stats: SolveStats,
    index: HashMap<Vec<i64>, usize>,
}

impl FdSolution {
    pub fn point(&self, k: usize) -> Vec<f64> {
        self.nodes[k].iter().map(|&i| i as f64 * self.grid.h).collect()
    }

    pub fn node_value(&self, idx: &[i64]) -> Option<f64> {
        self.index.get(idx).map(|&k| self.values[k])
    }

    /// Value at a lattice node, or multilinear interpolation when every
    /// surrounding node is an unknown.
    pub fn value_at(&self, p: &[f64]) -> Option<f64> {
        let h = self.grid.h;
        let base: Vec<i64> = p.iter().map(|v| (v / h + 1e-9).floor() as i64).collect();
        let frac: Vec<f64> = p.iter().zip(&base).map(|(v, b)| (v / h - *b as f64).clamp(0.0, 1.0)).collect();
        let n = p.len();
        let mut acc = 0.0;
        for corner in 0..(1usize << n) {
            let mut idx = base.clone();
            let mut w = 1.0;
            for a in 0..n {
                if corner >> a & 1 == 1 {
                    idx[a] += 1;
                    w *= frac[a];
                } else {
                    w *= 1.0 - frac[a];
                }
            }
            if w < 1e-12 {
                continue;
            }
            acc += w * self.node_value(&idx)?;
        }
        Some(acc)
    }
}

/// Discrete Dirichlet problem `Δu = 0` in `Ω`, `u = g` on `∂Ω`.
pub fn solve_dirichlet_fd(grid: &FdGrid, g: impl Fn(&[f64]) -> f64 + Sync + Send) -> Result<FdSolution> {
    let n = grid.n;
    let h = grid.h;
    let region = grid.region.as_ref();
    let (lo, hi) = region.bbox();
    let ilo: Vec<i64> = lo.iter().map(|v| (v / h).floor() as i64).collect();
    let ihi: Vec<i64> = hi.iter().map(|v| (v / h).ceil() as i64).collect();
    let extent: Vec<usize> = ilo.iter().zip(&ihi).map(|(a, b)| (b - a + 1) as usize).collect();
    let total: usize = extent.iter().product();
    let coord = |lin: usize| -> Vec<i64> {
        let mut rem = lin;
        let mut out = vec![0i64; n];
        for a in 0..n {
            out[a] = ilo[a] + (rem % extent[a]) as i64;
            rem /= extent[a];
        }
        out
    };
    let inside = par::map_range(total, |lin| {
        let c = coord(lin);
        let p: Vec<f64> = c.iter().map(|&i| i as f64 * h).collect();
        region.contains(&p)
    });
    let nodes: Vec<Vec<i64>> = (0..total).filter(|&l| inside[l]).map(coord).collect();
    if nodes.is_empty() {
        return Err(Error::Parameter(format!("no interior nodes at h = {h}")));
    }
    let index: HashMap<Vec<i64>, usize> = nodes.iter().enumerate().map(|(k, c)| (c.clone(), k)).collect();

    // one row per node: (entries, rhs)
    let rows = par::map(&nodes, |c| {
        let p: Vec<f64> = c.iter().map(|&i| i as f64 * h).collect();
        let mut diag = 0.0;
        let mut entries: Vec<(usize, f64)> = Vec::with_capacity(2 * n + 1);
        let mut rhs = 0.0;
        for a in 0..n {
            let mut arm = [(h, None, 0.0); 2];
            for (s, dir) in [-1.0f64, 1.0].into_iter().enumerate() {
                let mut nb = c.clone();
                nb[a] += dir as i64;
                match index.get(&nb) {
                    Some(&k) => arm[s] = (h, Some(k), 0.0),
                    None => {
                        let d = region.crossing(&p, a, dir, h).clamp(1e-10 * h, h);
                        let mut q = p.clone();
                        q[a] += dir * d;
                        arm[s] = (d, None, g(&q));
                    }
                }
            }
            let (hm, hp) = (arm[0].0, arm[1].0);
            diag += 2.0 / (hm * hp);
            for (s, len) in [(0usize, hm), (1, hp)] {
                let coef = 2.0 / (len * (hm + hp));
                match arm[s].1 {
                    Some(k) => entries.push((k, -coef)),
                    None => rhs += coef * arm[s].2,
                }
            }
        }
        let scale = h * h;
        entries.iter_mut().for_each(|e| e.1 *= scale);
        (diag * scale, entries, rhs * scale)
    });
    let mut a = Csr { row_ptr: vec![0], cols: Vec::new(), vals: Vec::new() };
    let mut b = Vec::with_capacity(nodes.len());
    for (k, (d, entries, rhs)) in rows.into_iter().enumerate() {
        let mut row: Vec<(usize, f64)> = entries;
        row.push((k, d));
        row.sort_by_key(|e| e.0);
        for (c, v) in row {
            a.cols.push(c);
            a.vals.push(v);
        }
        a.row_ptr.push(a.cols.len());
        b.push(rhs);
    }
    let max_iter = 50 * (nodes.len() as f64).sqrt() as usize + 1000;
    let (values, stats) = match bicgstab(&a, &b, Precond::Milu { omega: 1.0 }, 1e-12, max_iter) {
        Ok(v) => v,
        Err(_) => bicgstab(&a, &b, Precond::Jacobi, 1e-12, max_iter)?,
    };
    Ok(FdSolution { grid: grid.clone(), nodes, values, stats, index })
}

/// Maximum nodal error against an exact solution.
pub fn max_error(sol: &FdSolution, exact: impl Fn(&[f64]) -> f64 + Sync + Send) -> f64 {
    par::map_range(sol.nodes.len(), |k| (sol.values[k] - exact(&sol.point(k))).abs())
        .into_iter()
        .fold(0.0, f64::max)
}

/// Observed orders `log₂(e_k/e_{k+1})` for errors on dyadically refined meshes.
pub fn observed_orders(errors: &[f64]) -> Vec<f64> {
    errors.windows(2).map(|w| (w[0] / w[1]).log2()).collect()
}

/// Smooth bump `(1 − s²)⁴` on `s < 1`.
pub fn bump(s: f64) -> f64 {
    if s < 1.0 {
        (1.0 - s * s).powi(4)
    } else {
        0.0
    }
}

/// Numeric Poisson kernel `K(·, ζ₀)` of a ball: the discrete harmonic
/// extension of a bump of chord radius `eps` around `ζ₀`, divided by the
/// bump's surface mass.
pub fn numeric_poisson_ball(ball: &BallRegion, zeta: &[f64], eps: f64, h: f64) -> Result<FdSolution> {
    let grid = FdGrid::new(Arc::new(ball.clone()), h)?;
    let mass = ball.cap_mass(eps, bump);
    let z = zeta.to_vec();
    let mut sol = solve_dirichlet_fd(&grid, move |q| {
        let d2: f64 = q.iter().zip(&z).map(|(a, b)| (a - b) * (a - b)).sum();
        bump(d2.sqrt() / eps)
    })?;
    sol.values.iter_mut().for_each(|v| *v /= mass);
    Ok(sol)
}

/// Numeric Poisson kernel `K(·, 0)` of a model region: bump data
/// `φ(|x′|/ε)` on the graph part of the boundary, divided by its mass.
pub fn numeric_poisson_model(region: &ModelRegion, eps: f64, h: f64) -> Result<FdSolution> {
    if eps >= region.half_width || region.phi(eps * eps) >= 0.5 * region.top {
        return Err(Error::Parameter("the bump must stay on the graph part of the boundary".into()));
    }
    let grid = FdGrid::new(Arc::new(region.clone()), h)?;
    let mass = region.cap_mass(eps, bump);
    let (n, half_top) = (region.n, 0.5 * region.top);
    let mut sol = solve_dirichlet_fd(&grid, move |q| {
        if q[n - 1] > half_top {
            return 0.0;
        }
        let r2: f64 = q[..n - 1].iter().map(|v| v * v).sum();
        bump(r2.sqrt() / eps)
    })?;
    sol.values.iter_mut().for_each(|v| *v /= mass);
    Ok(sol)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constants_are_exact() {
        let grid = FdGrid::new(Arc::new(BallRegion::unit(2)), 1.0 / 16.0).unwrap();
        let sol = solve_dirichlet_fd(&grid, |_| 1.0).unwrap();
        assert!(max_error(&sol, |_| 1.0) < 1e-10);
    }

    #[test]
    fn quadratics_are_exact() {
        let grid = FdGrid::new(Arc::new(BallRegion::unit(2)), 1.0 / 16.0).unwrap();
        let u = |p: &[f64]| p[0] * p[0] - p[1] * p[1] + 0.3 * p[0] * p[1];
        let sol = solve_dirichlet_fd(&grid, u).unwrap();
        assert!(max_error(&sol, u) < 1e-9);
    }

    #[test]
    fn second_order_in_3d() {
        let u = |p: &[f64]| p[0].powi(4) - 6.0 * p[0] * p[0] * p[1] * p[1] + p[1].powi(4) + p[2];
        let errs: Vec<f64> = [4.0, 8.0, 16.0]
            .iter()
            .map(|k| {
                let grid = FdGrid::new(Arc::new(BallRegion::unit(3)), 1.0 / k).unwrap();
                max_error(&solve_dirichlet_fd(&grid, u).unwrap(), u)
            })
            .collect();
        let orders = observed_orders(&errs);
        assert!(orders.last().unwrap() > &1.7, "{errs:?}");
    }

    #[test]
    fn cap_mass_small_cap_is_flat() {
        // small caps see a flat boundary: ∫(1−s²)⁴ ds over [−ε, ε] = 256ε/315
        let eps = 1e-3;
        let m = BallRegion::unit(2).cap_mass(eps, bump);
        assert!((m / (256.0 * eps / 315.0) - 1.0).abs() < 1e-6);
    }
}
