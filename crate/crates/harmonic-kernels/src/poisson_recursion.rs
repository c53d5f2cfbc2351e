//! Graded recursion for the Poisson-operator symbol of a radial model domain.
//!
//! In the chart `y_n ↦ y_n − φ(y′)` the Laplacian becomes
//! `M k₋ⱼ = R k₋ⱼ₊₁ + Z k₋ⱼ₊₂` with
//!
//! ```text
//! M g = −(1+|∇φ|²)∂²g + 2i(ξ′·∇φ)∂g + |ξ′|²g
//! R g = −Δφ ∂g − 2∇φ·∇′∂g + 2iξ′·∇′g
//! Z g = Δ′g
//! ```
//!
//! (`∂ = ∂_{x_n}`), with `k₀ = 1` and `k₋ⱼ = 0` on `x_n = 0`. Each grade is
//! solved layer by layer in x′-degree against `M₀ = −∂² + w²`.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::symbol_algebra::jet::{factorial, q, CJetPoly, Q};
use crate::symbol_algebra::symbol::{
    accumulate, derive_map, imag, merge_into, mul_maps, one_coeff, scale_map, truncate_map, BoundarySymbol, Monomial,
    SymbolKind, TermMap, Var,
};
use crate::symbol_algebra::DomainSpec;

/// x′-Taylor data of the phase `η₊` (all maps are Psdo-kind, order 1).
#[derive(Clone, Debug, PartialEq)]
pub struct EtaExpansion {
    /// `i(η₊ − iw)`; vanishes at `x′ = 0`.
    pub delta_eta: BoundarySymbol,
    /// `υ = η₊ − η₋`, equal to `2iw` at the center.
    pub upsilon: BoundarySymbol,
    /// `1/(1+|∇φ|²)`.
    pub denom: BoundarySymbol,
}

/// Geometric data of `φ` needed by the recursion.
struct Geometry {
    n: usize,
    /// `∂_j φ`
    grad: Vec<TermMap>,
    /// `|∇φ|²`
    g2: TermMap,
    /// `ξ′·∇φ`
    kg: TermMap,
    /// `Δ′φ`
    lap: TermMap,
}

impl Geometry {
    fn new(dom: &DomainSpec, cap: u32) -> Self {
        let n = dom.n();
        let d = n - 1;
        let phi = dom.phi(cap + 2);
        let grad: Vec<TermMap> = (0..d).map(|j| derive_map(&phi, Var::XPrime(j), SymbolKind::Psdo, &Q::zero())).collect();
        let max = cap as i64;
        let mut g2 = TermMap::new();
        let mut kg = TermMap::new();
        let mut lap = TermMap::new();
        for (j, gj) in grad.iter().enumerate() {
            merge_into(&mut g2, &mul_maps(gj, gj, max));
            let mut xi = Monomial::one(n);
            xi.xi[j] = 1;
            let mut xij = TermMap::new();
            accumulate(&mut xij, xi, &one_coeff());
            merge_into(&mut kg, &mul_maps(&xij, gj, max));
            merge_into(&mut lap, &derive_map(gj, Var::XPrime(j), SymbolKind::Psdo, &Q::zero()));
        }
        Geometry { n, grad, g2, kg, lap }
    }
}

fn dn(e: &TermMap) -> TermMap {
    derive_map(e, Var::Xn, SymbolKind::Poisson, &Q::zero())
}

fn dx(e: &TermMap, j: usize) -> TermMap {
    derive_map(e, Var::XPrime(j), SymbolKind::Poisson, &Q::zero())
}

fn add_scaled(dst: &mut TermMap, src: &TermMap, f: &CJetPoly) {
    merge_into(dst, &scale_map(src, f));
}

/// `(M − M₀) g = −|∇φ|² ∂²g + 2i(ξ′·∇φ) ∂g`, kept to x′-degree `max`.
fn m_prime(geo: &Geometry, g: &TermMap, max: i64) -> TermMap {
    let d1 = dn(g);
    let d2 = dn(&d1);
    let mut out = TermMap::new();
    add_scaled(&mut out, &mul_maps(&geo.g2, &d2, max), &CJetPoly::from_q(-Q::one()));
    add_scaled(&mut out, &mul_maps(&geo.kg, &d1, max), &imag(q(2)));
    out
}

fn r_op(geo: &Geometry, g: &TermMap, max: i64) -> TermMap {
    let d1 = dn(g);
    let mut out = TermMap::new();
    add_scaled(&mut out, &mul_maps(&geo.lap, &d1, max), &CJetPoly::from_q(-Q::one()));
    for (j, gj) in geo.grad.iter().enumerate() {
        add_scaled(&mut out, &mul_maps(gj, &dx(&d1, j), max), &CJetPoly::from_q(q(-2)));
        let mut xi = Monomial::one(geo.n);
        xi.xi[j] = 1;
        let mut xij = TermMap::new();
        accumulate(&mut xij, xi, &one_coeff());
        add_scaled(&mut out, &mul_maps(&xij, &dx(g, j), max), &imag(q(2)));
    }
    truncate_map(&mut out, max);
    out
}

fn z_op(geo: &Geometry, g: &TermMap, max: i64) -> TermMap {
    let mut out = TermMap::new();
    for j in 0..geo.n - 1 {
        merge_into(&mut out, &dx(&dx(g, j), j));
    }
    truncate_map(&mut out, max);
    out
}

fn layer(e: &TermMap, r: u32) -> TermMap {
    e.iter().filter(|(m, _)| m.xdeg() == r).map(|(m, c)| (m.clone(), c.clone())).collect()
}

/// Decaying solution of `(−∂² + w²)g = rhs` with `g(0) = 0`, termwise:
/// `x_n^q e^{−x_n w} ↦ q! Σ_{j=1}^{q+1} (2w)^{j−q−2} x_n^j/j! · e^{−x_n w}`.
pub fn solve_m0(rhs: &TermMap) -> TermMap {
    let mut out = TermMap::new();
    for (m, c) in rhs {
        let qx = m.xn;
        for j in 1..=qx + 1 {
            let e = j as i32 - qx as i32 - 2;
            let mut mm = m.clone();
            mm.xn = j;
            mm.w += e;
            // 2^e with e ≤ −1
            let f = factorial(qx) / factorial(j) / q(1i64 << (-e));
            accumulate(&mut out, mm, &c.scale_q(&f));
        }
    }
    out
}

/// Solves `M g = rhs` to x′-degree `cap`, starting from `init` (layer 0).
fn solve_m(geo: &Geometry, rhs: &TermMap, cap: u32, init: TermMap) -> TermMap {
    let mut g = init;
    let start = if g.is_empty() { 0 } else { 1 };
    for r in start..=cap {
        let mut t = layer(rhs, r);
        let mp = layer(&m_prime(geo, &g, r as i64), r);
        add_scaled(&mut t, &mp, &CJetPoly::from_q(-Q::one()));
        merge_into(&mut g, &solve_m0(&t));
    }
    truncate_map(&mut g, cap as i64);
    g
}

/// Grades `k₀ … k₋N` of the Poisson symbol, x′-truncated at total weight `w`
/// (x′-degree + grade ≤ `w`). Values at the chart center need `w ≥ N`.
pub fn compute_poisson_symbols(dom: &DomainSpec, n_grades: usize, weight: u32) -> Result<BoundarySymbol> {
    if (weight as usize) < n_grades {
        return Err(Error::Truncation { have: weight, need: n_grades as u32 });
    }
    let geo = Geometry::new(dom, weight);
    let n = dom.n();
    let mut one = TermMap::new();
    one.insert(Monomial::one(n), one_coeff());
    let mut ks: Vec<TermMap> = Vec::with_capacity(n_grades + 1);
    ks.push(solve_m(&geo, &TermMap::new(), weight, one));
    for j in 1..=n_grades {
        let max = weight as i64 - j as i64;
        let mut rhs = r_op(&geo, &ks[j - 1], max);
        if j >= 2 {
            merge_into(&mut rhs, &z_op(&geo, &ks[j - 2], max));
        }
        truncate_map(&mut rhs, max);
        ks.push(solve_m(&geo, &rhs, max as u32, TermMap::new()));
    }
    BoundarySymbol::new(SymbolKind::Poisson, n, 0, weight, ks)
}

/// Residual `M k₋ⱼ − R k₋ⱼ₊₁ − Z k₋ⱼ₊₂` of every grade (all empty when the
/// recursion holds to the truncation weight).
pub fn recursion_residuals(dom: &DomainSpec, k: &BoundarySymbol) -> Vec<TermMap> {
    let weight = k.weight_cap();
    let geo = Geometry::new(dom, weight);
    let grades = k.grades();
    (0..grades.len())
        .map(|j| {
            let max = weight as i64 - j as i64;
            let g = &grades[j];
            // full M g = M₀ g + M′ g
            let d2 = dn(&dn(g));
            let mut res = TermMap::new();
            add_scaled(&mut res, &d2, &CJetPoly::from_q(-Q::one()));
            let mut w2 = TermMap::new();
            for (m, c) in g {
                let mut mm = m.clone();
                mm.w += 2;
                accumulate(&mut w2, mm, c);
            }
            merge_into(&mut res, &w2);
            merge_into(&mut res, &m_prime(&geo, g, max));
            if j >= 1 {
                add_scaled(&mut res, &r_op(&geo, &grades[j - 1], max), &CJetPoly::from_q(-Q::one()));
            }
            if j >= 2 {
                add_scaled(&mut res, &z_op(&geo, &grades[j - 2], max), &CJetPoly::from_q(-Q::one()));
            }
            truncate_map(&mut res, max);
            res
        })
        .collect()
}

/// Taylor expansion of `η±` in x′ to degree `weight`.
pub fn eta_expansion(dom: &DomainSpec, weight: u32) -> Result<EtaExpansion> {
    let geo = Geometry::new(dom, weight);
    let n = dom.n();
    let max = weight as i64;
    let unit = |c: CJetPoly| {
        let mut t = TermMap::new();
        accumulate(&mut t, Monomial::one(n), &c);
        t
    };
    let w_map = {
        let mut m = Monomial::one(n);
        m.w = 1;
        let mut t = TermMap::new();
        accumulate(&mut t, m, &one_coeff());
        t
    };
    let w_inv2 = {
        let mut m = Monomial::one(n);
        m.w = -2;
        let mut t = TermMap::new();
        accumulate(&mut t, m, &one_coeff());
        t
    };
    // 1/(1+G) = Σ (−G)^m
    let series = |x: &TermMap, coeffs: &dyn Fn(u32) -> Q| {
        let mut acc = unit(CJetPoly::from_q(coeffs(0)));
        let mut pow = unit(one_coeff());
        for m in 1..=weight / 2 + 1 {
            pow = mul_maps(&pow, x, max);
            if pow.is_empty() {
                break;
            }
            add_scaled(&mut acc, &pow, &CJetPoly::from_q(coeffs(m)));
        }
        acc
    };
    let denom = series(&geo.g2, &|m| if m % 2 == 0 { Q::one() } else { -Q::one() });
    // u = |∇φ|² − (ξ′·∇φ)²/w²
    let mut u = geo.g2.clone();
    add_scaled(&mut u, &mul_maps(&mul_maps(&geo.kg, &geo.kg, max), &w_inv2, max), &CJetPoly::from_q(-Q::one()));
    let sqrt1pu = series(&u, &|m| binom_half(m));
    let root = mul_maps(&w_map, &sqrt1pu, max);
    // δ = i η₊ + w = D·(i ξ′·∇φ − w√(1+u)) + w
    let mut inner = scale_map(&geo.kg, &imag(Q::one()));
    add_scaled(&mut inner, &root, &CJetPoly::from_q(-Q::one()));
    let mut delta = mul_maps(&denom, &inner, max);
    merge_into(&mut delta, &w_map);
    let upsilon = scale_map(&mul_maps(&denom, &root, max), &imag(q(2)));
    Ok(EtaExpansion {
        delta_eta: BoundarySymbol::new(SymbolKind::Psdo, n, 1, weight, vec![delta])?,
        upsilon: BoundarySymbol::new(SymbolKind::Psdo, n, 1, weight, vec![upsilon])?,
        denom: BoundarySymbol::new(SymbolKind::Psdo, n, 0, weight, vec![denom])?,
    })
}

/// `binom(1/2, m)`.
fn binom_half(m: u32) -> Q {
    let mut c = Q::one();
    let half = Q::new(1.into(), 2.into());
    for k in 0..m {
        c = c * (&half - q(k as i64)) / q(k as i64 + 1);
    }
    c
}

/// `e^{x_n δ}` expanded in x′, as a Poisson-kind map: this is `k₀` itself,
/// which the recursion must reproduce.
pub fn phase_exponential(eta: &EtaExpansion) -> TermMap {
    let n = eta.delta_eta.n();
    let weight = eta.delta_eta.weight_cap();
    let max = weight as i64;
    let mut xd = TermMap::new();
    for (m, c) in &eta.delta_eta.grades()[0] {
        let mut mm = m.clone();
        mm.xn += 1;
        accumulate(&mut xd, mm, c);
    }
    let mut acc = TermMap::new();
    acc.insert(Monomial::one(n), one_coeff());
    let mut pow = acc.clone();
    for m in 1..=weight {
        pow = mul_maps(&pow, &xd, max);
        if pow.is_empty() {
            break;
        }
        add_scaled(&mut acc, &pow, &CJetPoly::from_q(Q::one() / factorial(m)));
    }
    acc
}

/// `G_{qj}`: the x_n^q coefficient of grade `j`, homogeneous of degree `q − j`.
pub fn structure_coefficients(k: &BoundarySymbol, j: usize) -> BTreeMap<u32, TermMap> {
    let mut out: BTreeMap<u32, TermMap> = BTreeMap::new();
    if let Some(g) = k.grade(j) {
        for (m, c) in g {
            let mut mm = m.clone();
            let qx = mm.xn;
            mm.xn = 0;
            accumulate(out.entry(qx).or_default(), mm, c);
        }
    }
    out
}

/// Center value of grade `j` as a map `(w exponent, x_n exponent) ↦ coefficient`;
/// fails if a ξ′ monomial survives (the model domain is radial).
pub fn center_profile(s: &BoundarySymbol, j: usize) -> Result<BTreeMap<(i32, u32, u32), CJetPoly>> {
    let mut out = BTreeMap::new();
    for (m, c) in s.center_grade(j) {
        if m.xi.iter().any(|&e| e != 0) {
            return Err(Error::NonRadial(format!("grade {j} has the term ({c})·{m} at x′ = 0")));
        }
        out.insert((m.w, m.xn, m.yn), c);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbol_algebra::jet::qr;

    fn center(k: &BoundarySymbol, j: usize) -> BTreeMap<(i32, u32, u32), CJetPoly> {
        center_profile(k, j).unwrap()
    }

    #[test]
    fn solve_m0_examples() {
        let mut rhs = TermMap::new();
        rhs.insert(Monomial::one(3), one_coeff());
        let g = solve_m0(&rhs);
        let mut m = Monomial::one(3);
        m.xn = 1;
        m.w = -1;
        assert_eq!(g.get(&m), Some(&CJetPoly::from_q(qr(1, 2))));
        assert_eq!(g.len(), 1);

        let mut rhs = TermMap::new();
        let mut m1 = Monomial::one(3);
        m1.xn = 1;
        rhs.insert(m1, one_coeff());
        let g = solve_m0(&rhs);
        let mut a = Monomial::one(3);
        a.xn = 2;
        a.w = -1;
        let mut b = Monomial::one(3);
        b.xn = 1;
        b.w = -2;
        assert_eq!(g.get(&a), Some(&CJetPoly::from_q(qr(1, 4))));
        assert_eq!(g.get(&b), Some(&CJetPoly::from_q(qr(1, 4))));
    }

    #[test]
    fn zero_jet_gives_half_space() {
        let dom = DomainSpec::half_space(3).unwrap();
        let k = compute_poisson_symbols(&dom, 3, 3).unwrap();
        assert_eq!(k.grades()[0].len(), 1);
        assert!(k.is_zero_beyond(0));
    }

    #[test]
    fn grade_one_center() {
        let dom = DomainSpec::symbolic(3, 2).unwrap();
        let k = compute_poisson_symbols(&dom, 1, 1).unwrap();
        let c = center(&k, 1);
        let a1 = CJetPoly::var(1);
        assert_eq!(c.get(&(0, 1, 0)), Some(&a1));
        assert_eq!(c.get(&(1, 2, 0)), Some(&a1.neg()));
        assert_eq!(c.len(), 2);
    }

    #[test]
    fn weight_too_small() {
        let dom = DomainSpec::symbolic(3, 2).unwrap();
        assert!(matches!(compute_poisson_symbols(&dom, 3, 2), Err(Error::Truncation { .. })));
    }

    #[test]
    fn recursion_matches_phase_exponential() {
        let dom = DomainSpec::symbolic(3, 2).unwrap();
        let k = compute_poisson_symbols(&dom, 0, 4).unwrap();
        let eta = eta_expansion(&dom, 4).unwrap();
        assert_eq!(k.grades()[0], phase_exponential(&eta));
        assert!(eta.delta_eta.center_grade(0).is_empty());
    }

    #[test]
    fn residuals_vanish() {
        let dom = DomainSpec::symbolic(3, 2).unwrap();
        let k = compute_poisson_symbols(&dom, 3, 4).unwrap();
        for r in recursion_residuals(&dom, &k) {
            assert!(r.is_empty());
        }
    }
}
