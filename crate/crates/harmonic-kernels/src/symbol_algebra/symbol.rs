//! Graded boundary symbols in `(x′, x_n, y_n, ξ′, w = |ξ′|)`.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::jet::{q, q_to_f64, CJetPoly, Gauss, Q};
use crate::error::{Error, Result};

/// Operator class of a boundary symbol.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SymbolKind {
    Psdo,
    Poisson,
    Trace,
    Green,
}

impl SymbolKind {
    /// Poisson, trace and Green symbols carry the implicit factor `e^{−(x_n+y_n)w}`.
    pub fn decays(self) -> bool {
        !matches!(self, SymbolKind::Psdo)
    }

    pub fn name(self) -> &'static str {
        match self {
            SymbolKind::Psdo => "Psdo",
            SymbolKind::Poisson => "Poisson",
            SymbolKind::Trace => "Trace",
            SymbolKind::Green => "Green",
        }
    }

    pub fn from_name(s: &str) -> Result<Self> {
        Ok(match s {
            "Psdo" => SymbolKind::Psdo,
            "Poisson" => SymbolKind::Poisson,
            "Trace" => SymbolKind::Trace,
            "Green" => SymbolKind::Green,
            _ => return Err(Error::Parse(format!("unknown symbol kind `{s}`"))),
        })
    }
}

/// `x′^xp · ξ′^xi · w^w · x_n^xn · y_n^yn`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    pub xp: Vec<u8>,
    pub xi: Vec<u8>,
    pub w: i32,
    pub xn: u32,
    pub yn: u32,
}

impl Monomial {
    pub fn one(n: usize) -> Self {
        Monomial { xp: vec![0; n - 1], xi: vec![0; n - 1], w: 0, xn: 0, yn: 0 }
    }

    pub fn xdeg(&self) -> u32 {
        self.xp.iter().map(|&e| e as u32).sum()
    }

    pub fn xi_deg(&self) -> i32 {
        self.xi.iter().map(|&e| e as i32).sum()
    }

    /// Homogeneity degree under `(x_n, y_n, ξ′) ↦ (x_n/λ, y_n/λ, λξ′)`.
    pub fn degree(&self) -> i32 {
        self.xi_deg() + self.w - self.xn as i32 - self.yn as i32
    }

    pub fn is_center(&self) -> bool {
        self.xp.iter().all(|&e| e == 0)
    }

    pub fn is_canonical(&self) -> bool {
        self.xi.last().is_none_or(|&e| e <= 1)
    }

    pub fn mul(&self, o: &Self) -> Self {
        Monomial {
            xp: self.xp.iter().zip(&o.xp).map(|(a, b)| a + b).collect(),
            xi: self.xi.iter().zip(&o.xi).map(|(a, b)| a + b).collect(),
            w: self.w + o.w,
            xn: self.xn + o.xn,
            yn: self.yn + o.yn,
        }
    }
}

/// One term of a symbol; the decay factor is implied by the symbol kind.
#[derive(Clone, Debug, PartialEq)]
pub struct SymbolTerm {
    pub coeff: CJetPoly,
    pub mono: Monomial,
}

/// Reduces `ξ_{n−1}^e` with `e ≥ 2` using `ξ_{n−1}² = w² − Σ_{j<n−1} ξ_j²`.
/// Returns monomials with integer multipliers whose sum equals the input.
pub fn canonical_parts(m: &Monomial) -> Vec<(Monomial, i64)> {
    let d = m.xi.len() - 1;
    if m.xi[d] < 2 {
        return vec![(m.clone(), 1)];
    }
    let mut base = m.clone();
    base.xi[d] -= 2;
    let mut out: BTreeMap<Monomial, i64> = BTreeMap::new();
    let mut wterm = base.clone();
    wterm.w += 2;
    for (mm, c) in canonical_parts(&wterm) {
        *out.entry(mm).or_insert(0) += c;
    }
    for j in 0..d {
        let mut t = base.clone();
        t.xi[j] += 2;
        for (mm, c) in canonical_parts(&t) {
            *out.entry(mm).or_insert(0) -= c;
        }
    }
    out.into_iter().filter(|(_, c)| *c != 0).collect()
}

pub fn canonicalize(t: &SymbolTerm) -> Vec<SymbolTerm> {
    canonical_parts(&t.mono)
        .into_iter()
        .map(|(mono, c)| SymbolTerm { coeff: t.coeff.scale_q(&q(c)), mono })
        .collect()
}

pub type TermMap = BTreeMap<Monomial, CJetPoly>;

/// Adds `c·m` into `map`, canonicalizing `m` and dropping cancellations.
pub fn accumulate(map: &mut TermMap, m: Monomial, c: &CJetPoly) {
    if c.is_zero() {
        return;
    }
    if m.is_canonical() {
        accumulate_canonical(map, m, c);
    } else {
        for (mm, k) in canonical_parts(&m) {
            accumulate_canonical(map, mm, &c.scale_q(&q(k)));
        }
    }
}

fn accumulate_canonical(map: &mut TermMap, m: Monomial, c: &CJetPoly) {
    match map.get_mut(&m) {
        Some(v) => {
            v.add_assign(c);
            if v.is_zero() {
                map.remove(&m);
            }
        }
        None => {
            map.insert(m, c.clone());
        }
    }
}

pub fn merge_into(dst: &mut TermMap, src: &TermMap) {
    for (m, c) in src {
        accumulate_canonical(dst, m.clone(), c);
    }
}

pub fn scale_map(map: &TermMap, f: &CJetPoly) -> TermMap {
    let mut out = TermMap::new();
    for (m, c) in map {
        accumulate_canonical(&mut out, m.clone(), &c.mul(f));
    }
    out
}

pub fn truncate_map(map: &mut TermMap, max_xdeg: i64) {
    map.retain(|m, _| (m.xdeg() as i64) <= max_xdeg);
}

/// Pointwise product of two term maps, keeping x′-degree ≤ `max_xdeg`.
pub fn mul_maps(a: &TermMap, b: &TermMap, max_xdeg: i64) -> TermMap {
    let mut out = TermMap::new();
    for (ma, ca) in a {
        let da = ma.xdeg() as i64;
        if da > max_xdeg {
            continue;
        }
        for (mb, cb) in b {
            if da + mb.xdeg() as i64 > max_xdeg {
                continue;
            }
            accumulate(&mut out, ma.mul(mb), &ca.mul(cb));
        }
    }
    out
}

/// Differentiation variable for [`BoundarySymbol::derive`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Var {
    XPrime(usize),
    Xi(usize),
    Xn,
    Yn,
}

/// Graded, x′-truncated symbol. Grade `j` is homogeneous of degree
/// `order − j`; every term satisfies `xdeg + j ≤ weight_cap`.
///
/// `w_shift` is an extra, possibly fractional, power of `w` multiplying every
/// term (used by the weighted chain, zero otherwise).
#[derive(Clone, Debug, PartialEq)]
pub struct BoundarySymbol {
    kind: SymbolKind,
    n: usize,
    order: i32,
    weight_cap: u32,
    w_shift: Q,
    grades: Vec<TermMap>,
}

impl BoundarySymbol {
    pub fn new(kind: SymbolKind, n: usize, order: i32, weight_cap: u32, grades: Vec<TermMap>) -> Result<Self> {
        if n < 2 {
            return Err(Error::Parameter(format!("dimension must be at least 2, got {n}")));
        }
        let mut s = BoundarySymbol { kind, n, order, weight_cap, w_shift: Q::zero(), grades };
        s.normalize();
        s.validate()?;
        Ok(s)
    }

    pub(crate) fn from_parts_unchecked(
        kind: SymbolKind,
        n: usize,
        order: i32,
        weight_cap: u32,
        w_shift: Q,
        grades: Vec<TermMap>,
    ) -> Self {
        let mut s = BoundarySymbol { kind, n, order, weight_cap, w_shift, grades };
        s.normalize();
        s
    }

    /// The constant `1` as a zero-order pseudodifferential symbol.
    pub fn one(n: usize, weight_cap: u32) -> Self {
        let mut g = TermMap::new();
        g.insert(Monomial::one(n), CJetPoly::one());
        BoundarySymbol { kind: SymbolKind::Psdo, n, order: 0, weight_cap, w_shift: Q::zero(), grades: vec![g] }
    }

    /// A single-term grade-0 symbol; `order` is read off the monomial.
    pub fn monomial(kind: SymbolKind, n: usize, weight_cap: u32, m: Monomial, c: CJetPoly) -> Result<Self> {
        let order = m.degree();
        let mut g = TermMap::new();
        accumulate(&mut g, m, &c);
        Self::new(kind, n, order, weight_cap, vec![g])
    }

    fn normalize(&mut self) {
        let cap = self.weight_cap as i64;
        for (j, g) in self.grades.iter_mut().enumerate() {
            truncate_map(g, cap - j as i64);
        }
    }

    /// Checks kind constraints and per-term homogeneity bookkeeping.
    pub fn validate(&self) -> Result<()> {
        for (j, g) in self.grades.iter().enumerate() {
            for m in g.keys() {
                if m.xp.len() != self.n - 1 || m.xi.len() != self.n - 1 {
                    return Err(Error::Parameter("monomial arity does not match n − 1".into()));
                }
                if !m.is_canonical() {
                    return Err(Error::Parameter("non-canonical monomial".into()));
                }
                let ok = match self.kind {
                    SymbolKind::Psdo => m.xn == 0 && m.yn == 0,
                    SymbolKind::Poisson | SymbolKind::Trace => m.yn == 0,
                    SymbolKind::Green => true,
                };
                if !ok {
                    return Err(Error::Kind(format!("{} symbol with forbidden normal variable", self.kind.name())));
                }
                if m.degree() != self.order - j as i32 {
                    return Err(Error::Parameter(format!(
                        "term of degree {} stored in grade {j} of an order-{} symbol",
                        m.degree(),
                        self.order
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn kind(&self) -> SymbolKind {
        self.kind
    }
    pub fn n(&self) -> usize {
        self.n
    }
    pub fn order(&self) -> i32 {
        self.order
    }
    pub fn weight_cap(&self) -> u32 {
        self.weight_cap
    }
    pub fn w_shift(&self) -> &Q {
        &self.w_shift
    }
    pub fn grades(&self) -> &[TermMap] {
        &self.grades
    }
    pub fn grade(&self, j: usize) -> Option<&TermMap> {
        self.grades.get(j)
    }
    pub fn depth(&self) -> usize {
        self.grades.len().saturating_sub(1)
    }

    pub fn terms(&self, j: usize) -> Vec<SymbolTerm> {
        self.grades
            .get(j)
            .map(|g| g.iter().map(|(m, c)| SymbolTerm { coeff: c.clone(), mono: m.clone() }).collect())
            .unwrap_or_default()
    }

    pub fn with_kind(mut self, kind: SymbolKind) -> Self {
        self.kind = kind;
        self
    }

    pub(crate) fn with_w_shift(mut self, s: Q) -> Self {
        self.w_shift = s;
        self
    }

    pub fn truncated(&self, depth: usize, weight_cap: u32) -> Self {
        let mut s = self.clone();
        s.grades.truncate(depth + 1);
        s.weight_cap = s.weight_cap.min(weight_cap);
        s.normalize();
        s
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        if self.kind != o.kind || self.n != o.n || self.order != o.order || self.w_shift != o.w_shift {
            return Err(Error::Kind("cannot add symbols of different kind, dimension or order".into()));
        }
        let len = self.grades.len().max(o.grades.len());
        let mut grades = vec![TermMap::new(); len];
        for (j, g) in grades.iter_mut().enumerate() {
            if let Some(a) = self.grades.get(j) {
                merge_into(g, a);
            }
            if let Some(b) = o.grades.get(j) {
                merge_into(g, b);
            }
        }
        Ok(Self::from_parts_unchecked(
            self.kind,
            self.n,
            self.order,
            self.weight_cap.min(o.weight_cap),
            self.w_shift.clone(),
            grades,
        ))
    }

    pub fn scale(&self, c: &CJetPoly) -> Self {
        let mut s = self.clone();
        s.grades = s.grades.iter().map(|g| scale_map(g, c)).collect();
        s
    }

    /// Pointwise product. Only products with a pseudodifferential factor keep
    /// a single decay exponential and are allowed here.
    pub fn mul(&self, o: &Self) -> Result<Self> {
        let kind = match (self.kind, o.kind) {
            (SymbolKind::Psdo, k) | (k, SymbolKind::Psdo) => k,
            (a, b) => {
                return Err(Error::Kind(format!("pointwise product {}·{} is not a boundary symbol", a.name(), b.name())))
            }
        };
        if self.n != o.n {
            return Err(Error::Kind("dimension mismatch".into()));
        }
        let cap = self.weight_cap.min(o.weight_cap);
        let depth = self.grades.len() + o.grades.len() - 1;
        let mut grades = vec![TermMap::new(); depth];
        for (ja, a) in self.grades.iter().enumerate() {
            for (jb, b) in o.grades.iter().enumerate() {
                let j = ja + jb;
                let prod = mul_maps(a, b, cap as i64 - j as i64);
                merge_into(&mut grades[j], &prod);
            }
        }
        Ok(Self::from_parts_unchecked(
            kind,
            self.n,
            self.order + o.order,
            cap,
            &self.w_shift + &o.w_shift,
            grades,
        ))
    }

    pub fn conj(&self) -> Self {
        let mut s = self.clone();
        s.grades = s.grades.iter().map(|g| g.iter().map(|(m, c)| (m.clone(), c.conj())).collect()).collect();
        s
    }

    /// Exact derivative, including the product rule against the decay factor.
    pub fn derive(&self, var: Var) -> Result<Self> {
        let d = self.n - 1;
        let (order, grades) = match var {
            Var::XPrime(j) | Var::Xi(j) if j >= d => {
                return Err(Error::Parameter(format!("variable index {j} out of range for n = {}", self.n)))
            }
            Var::XPrime(_) => (self.order, self.grades.iter().map(|g| derive_map(g, var, self.kind, &self.w_shift)).collect()),
            Var::Xi(_) => (self.order - 1, self.grades.iter().map(|g| derive_map(g, var, self.kind, &self.w_shift)).collect()),
            Var::Xn | Var::Yn => (self.order + 1, self.grades.iter().map(|g| derive_map(g, var, self.kind, &self.w_shift)).collect()),
        };
        Ok(Self::from_parts_unchecked(self.kind, self.n, order, self.weight_cap, self.w_shift.clone(), grades))
    }

    /// Restriction to `x′ = 0`.
    pub fn at_center(&self) -> Self {
        let mut s = self.clone();
        for g in s.grades.iter_mut() {
            g.retain(|m, _| m.is_center());
        }
        s
    }

    /// Grade `j` at `x′ = 0` as a map from monomials to coefficients.
    pub fn center_grade(&self, j: usize) -> TermMap {
        self.grades
            .get(j)
            .map(|g| g.iter().filter(|(m, _)| m.is_center()).map(|(m, c)| (m.clone(), c.clone())).collect())
            .unwrap_or_default()
    }

    /// Swaps `x_n ↔ y_n` on every term.
    pub fn swap_normal(&self) -> Self {
        let mut s = self.clone();
        s.grades = s
            .grades
            .iter()
            .map(|g| {
                g.iter()
                    .map(|(m, c)| {
                        let mut mm = m.clone();
                        std::mem::swap(&mut mm.xn, &mut mm.yn);
                        (mm, c.clone())
                    })
                    .collect()
            })
            .collect();
        s
    }

    pub fn is_zero_beyond(&self, j0: usize) -> bool {
        self.grades.iter().skip(j0 + 1).all(|g| g.is_empty())
    }

    /// Numeric value of grade `j` (decay factor and `w_shift` included).
    pub fn eval_grade(&self, j: usize, pt: &EvalPoint, jet: &[f64]) -> Complex64 {
        let Some(g) = self.grades.get(j) else { return Complex64::zero() };
        let w = pt.xi.iter().map(|v| v * v).sum::<f64>().sqrt();
        let mut acc = Complex64::zero();
        for (m, c) in g {
            let re = c.re().eval(jet);
            let im = c.im().eval(jet);
            let mut v = 1.0;
            for (e, x) in m.xp.iter().zip(&pt.xp) {
                v *= x.powi(*e as i32);
            }
            for (e, x) in m.xi.iter().zip(&pt.xi) {
                v *= x.powi(*e as i32);
            }
            v *= w.powi(m.w) * pt.xn.powi(m.xn as i32) * pt.yn.powi(m.yn as i32);
            acc += Complex64::new(re, im) * v;
        }
        let mut f = w.powf(q_to_f64(&self.w_shift));
        if self.kind.decays() {
            f *= (-(pt.xn + pt.yn) * w).exp();
        }
        acc * f
    }

    /// Scaling test `s_j(x′, x_n/λ, y_n/λ, λξ′) = λ^{order−j} s_j(x′, x_n, y_n, ξ′)`;
    /// returns the largest relative deviation over all grades.
    pub fn homogeneity_defect(&self, pt: &EvalPoint, jet: &[f64], lambda: f64) -> f64 {
        let scaled = EvalPoint {
            xp: pt.xp.clone(),
            xn: pt.xn / lambda,
            yn: pt.yn / lambda,
            xi: pt.xi.iter().map(|v| v * lambda).collect(),
        };
        let shift = q_to_f64(&self.w_shift);
        let mut worst: f64 = 0.0;
        for j in 0..self.grades.len() {
            let a = self.eval_grade(j, &scaled, jet);
            let b = self.eval_grade(j, pt, jet) * lambda.powf(self.order as f64 - j as f64 + shift);
            let scale = a.norm().max(b.norm()).max(1e-300);
            worst = worst.max((a - b).norm() / scale);
        }
        worst
    }

    pub fn term_count(&self) -> usize {
        self.grades.iter().map(|g| g.len()).sum()
    }
}

pub(crate) fn derive_map(g: &TermMap, var: Var, kind: SymbolKind, shift: &Q) -> TermMap {
    let mut out = TermMap::new();
    for (m, c) in g {
        match var {
            Var::XPrime(j) => {
                if m.xp[j] > 0 {
                    let mut mm = m.clone();
                    mm.xp[j] -= 1;
                    accumulate(&mut out, mm, &c.scale_q(&q(m.xp[j] as i64)));
                }
            }
            Var::Xi(j) => {
                if m.xi[j] > 0 {
                    let mut mm = m.clone();
                    mm.xi[j] -= 1;
                    accumulate(&mut out, mm, &c.scale_q(&q(m.xi[j] as i64)));
                }
                // ∂ξ_j w^p = p ξ_j w^{p−2}
                let p = q(m.w as i64) + shift;
                if !p.is_zero() {
                    let mut mm = m.clone();
                    mm.xi[j] += 1;
                    mm.w -= 2;
                    accumulate(&mut out, mm, &c.scale_q(&p));
                }
                if kind.decays() {
                    // ∂ξ_j e^{−(x_n+y_n)w} = −(x_n+y_n) ξ_j/w · e^{…}
                    let mut mm = m.clone();
                    mm.xi[j] += 1;
                    mm.w -= 1;
                    let mut mx = mm.clone();
                    mx.xn += 1;
                    accumulate(&mut out, mx, &c.neg());
                    if kind == SymbolKind::Green {
                        mm.yn += 1;
                        accumulate(&mut out, mm, &c.neg());
                    }
                }
            }
            Var::Xn | Var::Yn => {
                let e = if var == Var::Xn { m.xn } else { m.yn };
                if e > 0 {
                    let mut mm = m.clone();
                    if var == Var::Xn {
                        mm.xn -= 1
                    } else {
                        mm.yn -= 1
                    }
                    accumulate(&mut out, mm, &c.scale_q(&q(e as i64)));
                }
                let present = match var {
                    Var::Xn => kind.decays(),
                    _ => kind == SymbolKind::Green,
                };
                if present {
                    let mut mm = m.clone();
                    mm.w += 1;
                    accumulate(&mut out, mm, &c.neg());
                }
            }
        }
    }
    out
}

/// Sample point for numeric evaluation of symbols.
#[derive(Clone, Debug, PartialEq)]
pub struct EvalPoint {
    pub xp: Vec<f64>,
    pub xn: f64,
    pub yn: f64,
    pub xi: Vec<f64>,
}

/// `c·m` for a rational `c`.
pub fn real_term(m: Monomial, c: Q) -> (Monomial, CJetPoly) {
    (m, CJetPoly::from_q(c))
}

/// `i·c` for a rational `c`.
pub fn imag(c: Q) -> CJetPoly {
    CJetPoly::constant(Gauss::new(Q::zero(), c))
}

pub fn one_coeff() -> CJetPoly {
    CJetPoly::constant(Gauss::new(Q::one(), Q::zero()))
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (i, &e) in self.xp.iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(format!("x{}", i + 1)),
                _ => parts.push(format!("x{}^{}", i + 1, e)),
            }
        }
        for (i, &e) in self.xi.iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(format!("ξ{}", i + 1)),
                _ => parts.push(format!("ξ{}^{}", i + 1, e)),
            }
        }
        match self.w {
            0 => {}
            1 => parts.push("w".into()),
            e => parts.push(format!("w^{e}")),
        }
        match self.xn {
            0 => {}
            1 => parts.push("xn".into()),
            e => parts.push(format!("xn^{e}")),
        }
        match self.yn {
            0 => {}
            1 => parts.push("yn".into()),
            e => parts.push(format!("yn^{e}")),
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("*"))
        }
    }
}

impl fmt::Display for BoundarySymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} symbol, n = {}, order {}, weight cap {}", self.kind.name(), self.n, self.order, self.weight_cap)?;
        for (j, g) in self.grades.iter().enumerate() {
            writeln!(f, "grade {j}:")?;
            for (m, c) in g {
                writeln!(f, "  ({c}) * {m}")?;
            }
        }
        Ok(())
    }
}
