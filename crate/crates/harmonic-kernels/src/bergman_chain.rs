//! From the Poisson symbol `k` to `Λ = K*K`, `Λ⁻¹`, `v = KΛ⁻¹` and the
//! singular Green symbol `g` of `KΛ⁻¹K*`, whose kernel is the harmonic
//! Bergman kernel.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::symbol_algebra::compose::compose_with;
use crate::symbol_algebra::jet::{factorial, q, CJetPoly, Q};
use crate::symbol_algebra::symbol::{
    accumulate, imag, merge_into, mul_maps, one_coeff, scale_map, BoundarySymbol, Monomial, SymbolKind, TermMap, Var,
};
use crate::symbol_algebra::{adjoint_symbol, leibniz_compose, DomainSpec};

/// Weight `x_n^α e^{g(x′)}` for the weighted chain; `g_jet[k−1]` is the k-th
/// derivative of `G` where `g(x′) = g(0) + G(|x′|²) − G(0)`.
#[derive(Clone, Debug, PartialEq)]
pub enum WeightMode {
    Unweighted,
    Weighted { alpha: Q, g_jet: Vec<Q> },
}

/// Symbol of a boundary pseudodifferential operator.
///
/// The operator symbol is `c · symbol`, where the scalar `c` is
/// `(Γ(α+1) 2^{−α} e^{g(0)})^{prefactor_power}` (equal to 1 when `α = 0`,
/// `g(0) = 0`). The factor `w^{−α}` lives in the symbol's `w_shift`.
#[derive(Clone, Debug, PartialEq)]
pub struct PsdoExpansion {
    pub symbol: BoundarySymbol,
    pub alpha: Q,
    pub prefactor_power: i32,
}

impl PsdoExpansion {
    pub fn unweighted(symbol: BoundarySymbol) -> Result<Self> {
        if symbol.kind() != SymbolKind::Psdo {
            return Err(Error::Kind(format!("expected a Psdo symbol, got {}", symbol.kind().name())));
        }
        Ok(PsdoExpansion { symbol, alpha: Q::zero(), prefactor_power: 0 })
    }

    pub fn depth(&self) -> usize {
        self.symbol.depth()
    }

    /// Grade-0 value at the center as `(c, e)` meaning `c·w^e` (e includes the shift).
    pub fn principal_at_center(&self) -> Result<(CJetPoly, Q)> {
        let g = self.symbol.center_grade(0);
        if g.len() != 1 {
            return Err(Error::NotElliptic(format!("leading grade has {} terms at the center", g.len())));
        }
        let (m, c) = g.into_iter().next().expect("one term");
        if m.xi.iter().any(|&e| e != 0) {
            return Err(Error::NonRadial("leading grade is not a power of w".into()));
        }
        Ok((c, q(m.w as i64) + self.symbol.w_shift()))
    }
}

/// Symbol of `Λ = K*K`, or of `Λ_w = K* x_n^α e^{g} K` in weighted mode.
pub fn lambda_symbol(k: &BoundarySymbol, depth: usize, mode: &WeightMode) -> Result<PsdoExpansion> {
    check_poisson(k, depth)?;
    let kst = adjoint_symbol(k, depth)?;
    match mode {
        WeightMode::Unweighted => PsdoExpansion::unweighted(leibniz_compose(&kst, k, depth)?),
        WeightMode::Weighted { alpha, g_jet } => {
            if *alpha <= -Q::one() {
                return Err(Error::Parameter("weight exponent α must exceed −1".into()));
            }
            let eg = exp_weight(k.n(), g_jet, k.weight_cap())?;
            let wk = k.mul(&eg)?;
            let s = compose_with(&kst, &wk, depth, alpha)?;
            Ok(PsdoExpansion { symbol: s, alpha: alpha.clone(), prefactor_power: 1 })
        }
    }
}

/// `e^{g(x′) − g(0)}` as a grade-0 Psdo symbol truncated at x′-degree `cap`.
fn exp_weight(n: usize, g_jet: &[Q], cap: u32) -> Result<BoundarySymbol> {
    let max = cap as i64;
    let mut acc = TermMap::new();
    acc.insert(Monomial::one(n), one_coeff());
    if !g_jet.is_empty() {
        let g = DomainSpec::numeric(n, g_jet.to_vec())?.phi(cap);
        let mut pow = acc.clone();
        for m in 1..=cap {
            pow = mul_maps(&pow, &g, max);
            if pow.is_empty() {
                break;
            }
            merge_into(&mut acc, &scale_map(&pow, &CJetPoly::from_q(Q::one() / factorial(m))));
        }
    }
    BoundarySymbol::new(SymbolKind::Psdo, n, 0, cap, vec![acc])
}

fn check_poisson(k: &BoundarySymbol, depth: usize) -> Result<()> {
    if k.kind() != SymbolKind::Poisson {
        return Err(Error::Kind(format!("expected a Poisson symbol, got {}", k.kind().name())));
    }
    if k.depth() < depth {
        return Err(Error::Parameter(format!("Poisson symbol has {} grades, {depth} requested", k.depth())));
    }
    if (k.weight_cap() as usize) < depth {
        return Err(Error::Truncation { have: k.weight_cap(), need: depth as u32 });
    }
    Ok(())
}

/// Parametrix `p` of `s`: `p₀ = 1/s₀` as an x′-series, then
/// `p_m = −(1/s₀) Σ_{k+j+|α|=m, j<m} (1/α!) D^α p_j ∂^α s_k`.
pub fn invert_psdo(s: &PsdoExpansion, depth: usize) -> Result<PsdoExpansion> {
    let sym = &s.symbol;
    let n = sym.n();
    let cap = sym.weight_cap();
    let max = cap as i64;
    let (lead_c, _) = s.principal_at_center()?;
    let lead_m = sym.center_grade(0).into_keys().next().expect("checked");
    let lead_inv = invert_constant(&lead_c)?;
    // s₀ = lead·(1 + ε)
    let mut eps = TermMap::new();
    let mut inv_mono = lead_m.clone();
    inv_mono.w = -lead_m.w;
    for (m, c) in &sym.grades()[0] {
        let mut mm = m.clone();
        mm.w -= lead_m.w;
        accumulate(&mut eps, mm, &c.mul(&lead_inv));
    }
    accumulate(&mut eps, Monomial::one(n), &one_coeff().neg());
    let mut series = TermMap::new();
    series.insert(Monomial::one(n), one_coeff());
    let mut pow = series.clone();
    let neg_eps = scale_map(&eps, &one_coeff().neg());
    for _ in 1..=cap {
        pow = mul_maps(&pow, &neg_eps, max);
        if pow.is_empty() {
            break;
        }
        merge_into(&mut series, &pow);
    }
    let mut lead_term = TermMap::new();
    accumulate(&mut lead_term, inv_mono, &lead_inv);
    let p0 = mul_maps(&lead_term, &series, max);
    let order = -sym.order();
    let shift = -sym.w_shift().clone();
    let mut grades = vec![p0.clone()];
    for m in 1..=depth {
        let partial = BoundarySymbol::from_parts_unchecked(SymbolKind::Psdo, n, order, cap, shift.clone(), grades.clone());
        let comp = leibniz_compose(&partial, sym, m)?;
        let rhs = comp.grade(m).cloned().unwrap_or_default();
        let pm = scale_map(&mul_maps(&p0, &rhs, max - m as i64), &one_coeff().neg());
        grades.push(pm);
    }
    let p = BoundarySymbol::from_parts_unchecked(SymbolKind::Psdo, n, order, cap, shift, grades);
    Ok(PsdoExpansion { symbol: p, alpha: s.alpha.clone(), prefactor_power: -s.prefactor_power })
}

fn invert_constant(c: &CJetPoly) -> Result<CJetPoly> {
    if c.len() != 1 {
        return Err(Error::NotElliptic(format!("leading coefficient {c} is not a nonzero constant")));
    }
    let (m, v) = c.iter().next().expect("one term");
    if !m.is_one() {
        return Err(Error::NotElliptic(format!("leading coefficient {c} depends on the jet")));
    }
    let norm = &v.re * &v.re + &v.im * &v.im;
    Ok(CJetPoly::constant(crate::symbol_algebra::Gauss::new(&v.re / &norm, -&v.im / &norm)))
}

/// Everything produced along the chain.
#[derive(Clone, Debug, PartialEq)]
pub struct BergmanChain {
    pub k: BoundarySymbol,
    pub k_star: BoundarySymbol,
    pub lambda: PsdoExpansion,
    pub p: PsdoExpansion,
    pub v: BoundarySymbol,
    pub g: BoundarySymbol,
}

/// `g_{1−m} = Σ (1/α!) D^α v_{1−j}(x_n) ∂^α k*₋ₗ(y_n)` with
/// `v_{1−m} = Σ (1/α!) D^α k₋ⱼ ∂^α p_{1−l}`.
pub fn bergman_green_symbol(k: &BoundarySymbol, p: &PsdoExpansion, depth: usize) -> Result<BoundarySymbol> {
    Ok(green_parts(k, p, depth)?.1)
}

fn green_parts(k: &BoundarySymbol, p: &PsdoExpansion, depth: usize) -> Result<(BoundarySymbol, BoundarySymbol, BoundarySymbol)> {
    check_poisson(k, depth)?;
    let v = leibniz_compose(k, &p.symbol, depth)?;
    let kst = adjoint_symbol(k, depth)?;
    let g = leibniz_compose(&v, &kst, depth)?;
    Ok((v, kst, g))
}

/// Runs the whole unweighted chain for a domain.
pub fn bergman_chain(dom: &DomainSpec, depth: usize, weight: u32) -> Result<BergmanChain> {
    let k = crate::poisson_recursion::compute_poisson_symbols(dom, depth, weight)?;
    let lambda = lambda_symbol(&k, depth, &WeightMode::Unweighted)?;
    let p = invert_psdo(&lambda, depth)?;
    let (v, k_star, g) = green_parts(&k, &p, depth)?;
    Ok(BergmanChain { k, k_star, lambda, p, v, g })
}

/// `F_{mrq}`: coefficient of `x_n^q y_n^r` in grade `m` of a Green symbol.
pub fn green_structure(g: &BoundarySymbol, m: usize) -> BTreeMap<(u32, u32), TermMap> {
    let mut out: BTreeMap<(u32, u32), TermMap> = BTreeMap::new();
    if let Some(gr) = g.grade(m) {
        for (mono, c) in gr {
            let mut mm = mono.clone();
            let key = (mono.yn, mono.xn);
            mm.xn = 0;
            mm.yn = 0;
            accumulate(out.entry(key).or_default(), mm, c);
        }
    }
    out
}

/// Principal-symbol identities of the Sobolev-type chain at the center:
/// `Σ_j |σ(R_j)|² = 1/(2σ(Λ)²)` and `σ(T) = ½σ(Λ)⁻¹`, with
/// `R_j = Λ⁻¹K*∂_jK` and `T = Σ_j R_j* Λ R_j`.
#[derive(Clone, Debug, PartialEq)]
pub struct SobolevCheck {
    pub sigma_lambda: TermMap,
    pub sigma_r: Vec<TermMap>,
    pub sum_abs_sq: TermMap,
    pub rhs_sum: TermMap,
    pub sigma_t: TermMap,
    pub rhs_t: TermMap,
    pub sum_identity: bool,
    pub t_identity: bool,
}

pub fn sobolev_identity_check(k: &BoundarySymbol) -> Result<SobolevCheck> {
    if k.kind() != SymbolKind::Poisson {
        return Err(Error::Kind("expected a Poisson symbol".into()));
    }
    let n = k.n();
    let k0 = k.at_center().truncated(0, 0);
    let kst0 = adjoint_symbol(&k0, 0)?;
    let lam = leibniz_compose(&kst0, &k0, 0)?;
    let sigma_lambda = lam.grades()[0].clone();
    let lam_exp = PsdoExpansion::unweighted(lam)?;
    let p = invert_psdo(&lam_exp, 0)?;
    let p1 = p.symbol.grades()[0].clone();

    let mut sigma_r = Vec::with_capacity(n);
    for j in 0..n {
        // principal symbol of ∂_j K at the center: iξ_j·k₀ tangentially, ∂_{x_n}k₀ normally
        let dk = if j + 1 < n {
            let mut xi = Monomial::one(n);
            xi.xi[j] = 1;
            let mult = BoundarySymbol::monomial(SymbolKind::Psdo, n, 0, xi, imag(Q::one()))?;
            k0.mul(&mult)?
        } else {
            k0.derive(Var::Xn)?
        };
        let kd = leibniz_compose(&kst0, &dk, 0)?;
        sigma_r.push(mul_maps(&p1, &kd.grades()[0], 0));
    }
    let mut sum_abs_sq = TermMap::new();
    for r in &sigma_r {
        let conj: TermMap = r.iter().map(|(m, c)| (m.clone(), c.conj())).collect();
        merge_into(&mut sum_abs_sq, &mul_maps(r, &conj, 0));
    }
    let lam_sq = mul_maps(&sigma_lambda, &sigma_lambda, 0);
    let rhs_sum = scale_map(&invert_map_monomial(&lam_sq)?, &CJetPoly::from_q(Q::new(1.into(), 2.into())));
    let sigma_t = mul_maps(&sigma_lambda, &sum_abs_sq, 0);
    let rhs_t = scale_map(&invert_map_monomial(&sigma_lambda)?, &CJetPoly::from_q(Q::new(1.into(), 2.into())));
    Ok(SobolevCheck {
        sum_identity: sum_abs_sq == rhs_sum,
        t_identity: sigma_t == rhs_t,
        sigma_lambda,
        sigma_r,
        sum_abs_sq,
        rhs_sum,
        sigma_t,
        rhs_t,
    })
}

fn invert_map_monomial(m: &TermMap) -> Result<TermMap> {
    if m.len() != 1 {
        return Err(Error::NotElliptic("expected a single monomial".into()));
    }
    let (mono, c) = m.iter().next().expect("one term");
    if mono.xi.iter().any(|&e| e != 0) || !mono.is_center() {
        return Err(Error::NotElliptic("expected a pure power of w".into()));
    }
    let mut inv = mono.clone();
    inv.w = -mono.w;
    let mut out = TermMap::new();
    accumulate(&mut out, inv, &invert_constant(c)?);
    Ok(out)
}
