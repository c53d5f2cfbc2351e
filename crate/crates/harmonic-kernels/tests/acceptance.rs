//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

use std::time::{Duration, Instant};

use harmonic_kernels::bergman_chain::bergman_chain;
use harmonic_kernels::kernel_transform::{c_n, family, symbol_families, Family};
use harmonic_kernels::numeric_oracle::quadrature::ball_integral;
use harmonic_kernels::numeric_oracle::transforms::check_family;
use harmonic_kernels::numeric_oracle::{fd_convergence, numeric_poisson_fit, SpectralBall};
use harmonic_kernels::poisson_recursion::{center_profile, compute_poisson_symbols};
use harmonic_kernels::reference_kernels::{
    eval_bergman_closed, eval_weighted_halfspace, unweighted_leading_green, ClosedKind, PointPair,
};
use harmonic_kernels::symbol_algebra::DomainSpec;
use harmonic_kernels::verify::{self, Check};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome, Option<u64>);
type Harmonic = (&'static str, fn(&[f64]) -> f64);

fn from_check(c: Check) -> Outcome {
    if c.passed {
        Ok(c.detail)
    } else {
        Err(c.detail)
    }
}

fn lib<T>(r: harmonic_kernels::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

/// Grade `j` of the Poisson symbol carries jet weight `j` (dilation covariance).
fn dilation_weights() -> Outcome {
    let k = lib(compute_poisson_symbols(&lib(DomainSpec::symbolic(3, 3))?, 3, 3))?;
    for j in 0..=3usize {
        for (key, c) in lib(center_profile(&k, j))? {
            if !(c.re().is_weight_homogeneous(j as u32) && c.im().is_weight_homogeneous(j as u32)) {
                return Err(format!("grade {j}, {key:?}: {c} is not of jet weight {j}"));
            }
        }
    }
    Ok("each grade has its dilation weight".into())
}

fn criterion1() -> Outcome {
    let d = from_check(verify::check_poisson_grades())?;
    Ok(format!("{d}; {}", dilation_weights()?))
}

fn criterion2() -> Outcome {
    from_check(verify::check_poisson_expansion())
}

/// `H(x,y) = −2c₃|x−y|^{−3}` on the unit sphere, expanded in the tangent chart,
/// has `|y′|^{−1}` coefficient `3c₃a₁²` with `a₁ = 1/2`.
fn sphere_oracle() -> Outcome {
    let c3 = c_n(3);
    let rho: f64 = 1e-3;
    let chord = (2.0 * rho * rho / (1.0 + (1.0 - rho * rho).sqrt())).sqrt();
    let coeff = (-2.0 * c3 / chord.powi(3) + 2.0 * c3 / rho.powi(3)) * rho;
    let want = 3.0 * c3 * 0.25;
    if ((coeff - want) / want).abs() > 1e-5 {
        return Err(format!("sphere chart coefficient {coeff} vs 3c₃a₁² = {want}"));
    }
    Ok(format!("sphere oracle |y′|⁻¹ coefficient {coeff:.8}"))
}

fn criterion3() -> Outcome {
    let d = from_check(verify::check_lambda_chain())?;
    Ok(format!("{}; {}", d.lines().next().unwrap_or(""), sphere_oracle()?))
}

fn criterion4() -> Outcome {
    from_check(verify::check_bergman_leading())
}

fn criterion5() -> Outcome {
    from_check(verify::check_log_vanishing())
}

fn criterion6() -> Outcome {
    from_check(verify::check_sobolev())
}

fn random_in_ball(rng: &mut ChaCha8Rng, n: usize, r_max: f64) -> Vec<f64> {
    loop {
        let p: Vec<f64> = (0..n).map(|_| rng.gen_range(-r_max..r_max)).collect();
        if p.iter().map(|v| v * v).sum::<f64>() <= r_max * r_max {
            return p;
        }
    }
}

fn criterion7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let sb = lib(SpectralBall::new(60, 3))?;
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let (x, y) = (random_in_ball(&mut rng, 3, 0.7), random_in_ball(&mut rng, 3, 0.7));
        let s = lib(sb.bergman(&x, &y))?;
        let c = lib(eval_bergman_closed(ClosedKind::unit_ball(), &lib(PointPair::new(x, y))?))?;
        worst = worst.max(((s - c) / c).abs());
    }
    if worst > 1e-6 {
        return Err(format!("spectral vs closed form: max relative error {worst:e}"));
    }
    // ∫ u(y)H(x,y)dy = u(x) for harmonic u of degree ≤ 3
    let polys: [Harmonic; 6] = [
        ("1", |_| 1.0),
        ("y1", |p| p[0]),
        ("y1y2", |p| p[0] * p[1]),
        ("y1²−y3²", |p| p[0] * p[0] - p[2] * p[2]),
        ("y1y2y3", |p| p[0] * p[1] * p[2]),
        ("y3³−3y1²y3", |p| p[2].powi(3) - 3.0 * p[0] * p[0] * p[2]),
    ];
    let xs = [[0.0, 0.0, 0.0], [0.3, -0.2, 0.1], [-0.1, 0.4, 0.35]];
    let mut worst_rep: f64 = 0.0;
    for x in &xs {
        for (name, u) in &polys {
            let got = ball_integral(3, 24, |y| {
                let pp = PointPair::new(x.to_vec(), y.to_vec()).expect("dimension");
                u(y) * eval_bergman_closed(ClosedKind::unit_ball(), &pp).expect("interior points")
            });
            let want = u(x);
            let err = (got - want).abs() / want.abs().max(1.0);
            if err > 1e-4 {
                return Err(format!("reproduction of {name} at {x:?}: {got} vs {want}"));
            }
            worst_rep = worst_rep.max(err);
        }
    }
    Ok(format!("spectral max rel {worst:.1e}; reproduction max err {worst_rep:.1e}"))
}

fn criterion8() -> Outcome {
    let mut jobs: Vec<(usize, i32)> = Vec::new();
    let k3 = lib(compute_poisson_symbols(&lib(DomainSpec::symbolic(3, 3))?, 3, 3))?;
    let g3 = lib(bergman_chain(&lib(DomainSpec::symbolic(3, 3))?, 3, 3))?.g;
    jobs.extend(lib(symbol_families(&k3, 3))?.into_iter().map(|p| (3, p)));
    jobs.extend(lib(symbol_families(&g3, 3))?.into_iter().map(|p| (3, p)));
    let g2 = lib(bergman_chain(&lib(DomainSpec::symbolic(2, 1))?, 0, 0))?.g;
    jobs.extend(lib(symbol_families(&g2, 0))?.into_iter().map(|p| (2, p)));
    jobs.sort_unstable();
    jobs.dedup();
    let mut worst: f64 = 0.0;
    let mut lattice = 0;
    for &(n, p) in &jobs {
        let c = lib(check_family(n, p))?;
        if c.max_error > 1e-8 {
            return Err(format!("n={n} w^{p}: error {:e}", c.max_error));
        }
        if matches!(family(n, p), Family::Lattice { .. }) {
            lattice += 1;
        }
        worst = worst.max(c.max_error);
    }
    Ok(format!("{} families ({lattice} lattice), max error {worst:.1e}", jobs.len()))
}

fn criterion9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut worst: f64 = 0.0;
    for i in 0..10 {
        let n = 2 + i % 3;
        let mut x: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let mut y: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        x[n - 1] = rng.gen_range(0.05..1.0);
        y[n - 1] = rng.gen_range(0.05..1.0);
        let pp = lib(PointPair::new(x, y))?;
        let w = lib(eval_weighted_halfspace(0.0, 0.0, &pp))?;
        let u = unweighted_leading_green(&pp);
        worst = worst.max(((w - u) / u).abs());
    }
    if worst > 1e-10 {
        return Err(format!("α = 0 against the unweighted transform: {worst:e}"));
    }
    let d = from_check(verify::check_weighted_principal())?;
    Ok(format!("α=0 max rel {worst:.1e}; {d}"))
}

fn criterion10() -> Outcome {
    let conv = lib(fd_convergence(2, 1.0 / 16.0, 4))?;
    if conv.orders.iter().any(|&o| o < 1.9) {
        return Err(format!("observed orders {:?}", conv.orders));
    }
    let fit = lib(numeric_poisson_fit(2, 1.0 / 256.0, 1.0 / 64.0, 0.1, 0.3))?;
    let lead = fit.coefficient("d^-1").ok_or("no d^-1 term")?;
    let rel = ((lead - c_n(2)) / c_n(2)).abs();
    if rel > 0.01 {
        return Err(format!("grade-0 coefficient {lead} vs c₂ = {}", c_n(2)));
    }
    let orders: Vec<String> = conv.orders.iter().map(|o| format!("{o:.3}")).collect();
    Ok(format!("orders [{}]; grade-0 coefficient {lead:.6} ({:.2}% from c₂); log term not claimed", orders.join(", "), rel * 100.0))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("1 poisson symbol grades k0..k-3", criterion1, Some(10)),
        ("2 poisson kernel expansion", criterion2, Some(30)),
        ("3 s, p and the inverse boundary kernel", criterion3, Some(60)),
        ("4 leading Bergman term, symbolic n", criterion4, None),
        ("5 vanishing log terms", criterion5, None),
        ("6 Sobolev identities", criterion6, Some(5)),
        ("7 spectral ball oracle", criterion7, Some(60)),
        ("8 transform families vs quadrature", criterion8, Some(60)),
        ("9 weighted consistency", criterion9, None),
        ("10 finite-difference oracle", criterion10, None),
    ];
    let mut failed = 0;
    for (name, f, budget) in criteria {
        let t = Instant::now();
        let mut r = f();
        let el = t.elapsed();
        if let (Ok(_), Some(b)) = (&r, budget) {
            if el > Duration::from_secs(b) {
                r = Err(format!("took {:.1}s, budget {b}s", el.as_secs_f64()));
            }
        }
        match r {
            Ok(d) => println!("PASS criterion {name} ({:.2}s): {}", el.as_secs_f64(), d.replace('\n', " ")),
            Err(d) => {
                failed += 1;
                println!("FAIL criterion {name} ({:.2}s): {}", el.as_secs_f64(), d.replace('\n', " "));
            }
        }
    }
    println!("{}/10 criteria passed", 10 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
