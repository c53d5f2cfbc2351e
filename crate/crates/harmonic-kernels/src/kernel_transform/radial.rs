//! Closed-form inverse Fourier transforms of radial boundary symbols.
//!
//! With `R = (t² + |x′|²)^{1/2}` and `τ = t/R`, the transform of
//! `e^{−t|ξ′|}` over `ℝ^{n−1}` is `c_n τ R^{1−n}`. Multiplying the symbol by
//! `w = |ξ′|` is `−∂_t` on the kernel side, and on `τ^a R^b`
//!
//! ```text
//! −∂_t(τ^a R^b) = −R^{b−1} (a τ^{a−1} + (b−a) τ^{a+1})
//! ```
//!
//! so every `w^p e^{−tw}` with `p` above the lattice is `c_n R^{1−n−p} P_p(τ)`
//! for a polynomial `P_p`. At and below the lattice (`m = 1−n−p ≥ 0`) the
//! transform is `R^m (U(τ) + Q(τ) log R)` modulo smooth functions, with `Q`
//! the zonal harmonic fixed by the `t^m` coefficient `(−1)^m κ_n/m!`,
//! `κ_n = −c_n/(n−2)!`.

use num_traits::{One, Zero};

use crate::symbol_algebra::jet::{factorial, q, Q};
use crate::symbol_algebra::JetPoly;

/// `c_n = Γ(n/2)/π^{n/2}` as `(r, k)` meaning `r·π^k`.
pub fn c_n_exact(n: usize) -> (Q, i32) {
    let (g, sqrt_pi) = gamma_half(n as i64).expect("n ≥ 1");
    // π^{n/2} = π^{⌊n/2⌋}·√π^{n mod 2}
    debug_assert_eq!(sqrt_pi, n % 2 == 1);
    (g, -((n / 2) as i32))
}

pub fn c_n(n: usize) -> f64 {
    let (r, k) = c_n_exact(n);
    crate::symbol_algebra::jet::q_to_f64(&r) * std::f64::consts::PI.powi(k)
}

/// `Γ(k/2)` as `(r, s)` meaning `r·√π` when `s`, else `r`; `None` at poles.
pub fn gamma_half(k: i64) -> Option<(Q, bool)> {
    if k <= 0 && k % 2 == 0 {
        return None;
    }
    let odd = k.rem_euclid(2) == 1;
    // start at Γ(1/2) = √π or Γ(1) = 1 and step by one unit of the argument
    let (mut x2, mut g) = if odd { (1i64, Q::one()) } else { (2i64, Q::one()) };
    while x2 < k {
        g *= Q::new(x2.into(), 2.into());
        x2 += 2;
    }
    while x2 > k {
        x2 -= 2;
        g /= Q::new(x2.into(), 2.into());
    }
    Some((g, odd))
}

/// How `w^p e^{−tw}` transforms in dimension `n`.
#[derive(Clone, Debug, PartialEq)]
pub enum Family {
    /// `c_n R^{1−n−p} P(τ)`, coefficients of `P` by power of `τ`.
    Regular(Vec<Q>),
    /// Log part `c_n R^m Q(τ) log R`; the non-log part is not polynomial in `τ`.
    Lattice { m: u32, log: Vec<Q> },
    /// Above the lattice but not polynomial in `τ` (n ≥ 4, 2−n ≤ p ≤ −2).
    Unsupported,
}

pub fn family(n: usize, p: i32) -> Family {
    let n_i = n as i32;
    let m = 1 - n_i - p;
    if m >= 0 {
        return Family::Lattice { m: m as u32, log: lattice_log(n, m as u32) };
    }
    if p >= 0 {
        let mut cur = vec![Q::zero(), Q::one()];
        for k in 0..p {
            cur = step(&cur, &q((1 - n_i - k) as i64));
        }
        return Family::Regular(trim(cur));
    }
    if p == -1 {
        return Family::Regular(vec![Q::one() / q(n as i64 - 2)]);
    }
    Family::Unsupported
}

/// `P ↦ −∂_t` on `R^b P(τ)`, returning the τ-polynomial multiplying `R^{b−1}`.
fn step(c: &[Q], b: &Q) -> Vec<Q> {
    let mut out = vec![Q::zero(); c.len() + 1];
    for (a, ca) in c.iter().enumerate() {
        if ca.is_zero() {
            continue;
        }
        let aq = q(a as i64);
        if a > 0 {
            out[a - 1] -= &aq * ca;
        }
        out[a + 1] -= (b - &aq) * ca;
    }
    out
}

fn trim(mut v: Vec<Q>) -> Vec<Q> {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    v
}

/// Zonal harmonic `Σ_j c_j t^{m−2j} ρ^{2j}` (relative to `c_n`), as a
/// polynomial in `τ` after `ρ² = R²(1−τ²)`.
pub fn lattice_log(n: usize, m: u32) -> Vec<Q> {
    let kappa = -Q::one() / factorial(n as u32 - 2);
    let mut c = kappa / factorial(m);
    if m % 2 == 1 {
        c = -c;
    }
    let mut out = vec![Q::zero(); m as usize + 1];
    let mut j = 0u32;
    loop {
        // τ^{m−2j} (1−τ²)^j
        let mut binom = Q::one();
        for i in 0..=j {
            let coef = if i % 2 == 0 { binom.clone() } else { -binom.clone() };
            out[(m - 2 * j + 2 * i) as usize] += &c * coef;
            binom = binom * q((j - i) as i64) / q(i as i64 + 1);
        }
        if 2 * j + 2 > m {
            break;
        }
        let num = q(((m - 2 * j) * (m - 2 * j - 1)) as i64);
        let den = q(((2 * j + 2) * (2 * j + n as u32 - 1)) as i64);
        c = -c * num / den;
        j += 1;
    }
    trim(out)
}

/// Boundary value of a transform: `|ξ′|^a` over `ℝ^{n−1}`.
#[derive(Clone, Debug, PartialEq)]
pub enum Riesz {
    /// Polynomial symbol: supported at the diagonal only.
    Zero,
    /// `r π^k ρ^{−a−d}`.
    Power { r: Q, pi: i32 },
    /// `r π^k ρ^{2j} log ρ` on the lattice `a = −d−2j`.
    Log { r: Q, pi: i32, j: u32 },
}

/// Transform of `|ξ|^a` in `ℝ^d`:
/// `Γ((d+a)/2) / (2^{−a} π^{d/2} Γ(−a/2)) · ρ^{−a−d}`, continued in `a`.
pub fn riesz(n: usize, a: i32) -> Riesz {
    let d = n as i32 - 1;
    if a >= 0 && a % 2 == 0 {
        return Riesz::Zero;
    }
    if a <= -d && (d + a) % 2 == 0 {
        let j = ((-d - a) / 2) as u32;
        let (cn, pi) = c_n_exact(n);
        let mut l = -cn / factorial(n as u32 - 2);
        for i in 0..j {
            l = -l / q(((2 * i + 2) * (2 * i + d as u32)) as i64);
        }
        return Riesz::Log { r: l, pi, j };
    }
    let (g1, s1) = gamma_half((d + a) as i64).expect("off the lattice");
    let (g2, s2) = gamma_half(-a as i64).expect("a is not a nonnegative even integer");
    let mut r = g1 / g2;
    let two = q(2);
    if a >= 0 {
        r *= num_traits::pow(two, a as usize);
    } else {
        r /= num_traits::pow(two, (-a) as usize);
    }
    let half_pis = s1 as i32 - s2 as i32 - d;
    debug_assert!(half_pis % 2 == 0);
    Riesz::Power { r, pi: half_pis / 2 }
}

/// Transform ladder with the dimension kept symbolic: `P_p ∈ ℚ[n][τ]`
/// with `T_p = c_n R^{1−n−p} P_p(τ)`, `n` being the jet variable `a1`.
pub fn ladder_symbolic_n(p: u32) -> Vec<JetPoly> {
    let n = JetPoly::var(1);
    let mut cur = vec![JetPoly::zero(), JetPoly::one()];
    for k in 0..p {
        // b = 1 − n − k
        let b = JetPoly::from_q(q(1 - k as i64)).sub(&n);
        let mut out = vec![JetPoly::zero(); cur.len() + 1];
        for (a, ca) in cur.iter().enumerate() {
            if ca.is_zero() {
                continue;
            }
            if a > 0 {
                out[a - 1] = out[a - 1].sub(&ca.scale_q(&q(a as i64)));
            }
            let ba = b.sub(&JetPoly::from_q(q(a as i64)));
            out[a + 1] = out[a + 1].sub(&ba.mul(ca));
        }
        cur = out;
    }
    while cur.last().is_some_and(|c| c.is_zero()) {
        cur.pop();
    }
    cur
}
