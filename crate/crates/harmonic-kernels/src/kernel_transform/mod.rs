//! Kernel expansions from center symbols.
//!
//! A grade of a radial symbol at `x′ = 0` is a sum of `x_n^q y_n^r w^p`
//! times the decay factor; its inverse Fourier transform in `ξ′` is computed
//! in closed form (module [`radial`]) and written in the radial variable `R`
//! with the direction variables `t1 = x_n/R`, `t2 = y_n/R`. Everything is
//! modulo smooth functions: smooth monomials are dropped, and at powers where
//! a lattice family contributes a non-polynomial non-log part the expansion
//! records a truncation power instead.

pub mod radial;

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::bergman_chain::{bergman_chain, PsdoExpansion};
use crate::error::{Error, Result};
use crate::poisson_recursion::{center_profile, compute_poisson_symbols};
use crate::symbol_algebra::jet::{fmt_rational, parse_rational, q, q_to_f64, Poly};
use crate::symbol_algebra::{BoundarySymbol, CJetPoly, DomainSpec, JetMonomial, JetPoly, Q, SymbolKind};
pub use radial::{c_n, c_n_exact, family, ladder_symbolic_n, riesz, Family, Riesz};

/// Polynomial in the direction variables `t1, t2` with jet-polynomial coefficients.
pub type TPoly = Poly<JetPoly>;

/// Radial variable of an expansion.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RadialVar {
    /// `R = |x|` at the chart center, `t1 = x_n/R` (Poisson kernels).
    X,
    /// `R = |x − ỹ|` in chart coordinates, `t1 = x_n/R`, `t2 = y_n/R`.
    Green,
    /// `R = |x′ − y′|` on the boundary, no direction variables.
    Boundary,
}

/// `coeff(t) · π^{pi_power} · R^{power} · (log R if log)`.
#[derive(Clone, Debug, PartialEq)]
pub struct KernelTerm {
    pub coeff: TPoly,
    pub power: i32,
    pub log: bool,
    pub pi_power: i32,
}

#[derive(Clone, Debug, PartialEq)]
pub struct KernelExpansion {
    radial_var: RadialVar,
    n: usize,
    terms: BTreeMap<(i32, bool, i32), TPoly>,
    truncation: Option<i32>,
}

impl KernelExpansion {
    pub fn new(radial_var: RadialVar, n: usize) -> Self {
        KernelExpansion { radial_var, n, terms: BTreeMap::new(), truncation: None }
    }

    pub fn radial_var(&self) -> RadialVar {
        self.radial_var
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Non-log terms at this power and above are not reported.
    pub fn truncation(&self) -> Option<i32> {
        self.truncation
    }

    pub fn terms(&self) -> Vec<KernelTerm> {
        self.terms
            .iter()
            .map(|(&(power, log, pi_power), c)| KernelTerm { coeff: c.clone(), power, log, pi_power })
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of `π^{pi}R^{power}` (times `log R` if `log`), zero if absent.
    pub fn coeff(&self, power: i32, log: bool, pi: i32) -> TPoly {
        self.terms.get(&(power, log, pi)).cloned().unwrap_or_else(TPoly::zero)
    }

    pub fn add_term(&mut self, t: KernelTerm) {
        if t.coeff.is_zero() {
            return;
        }
        let e = self.terms.entry((t.power, t.log, t.pi_power)).or_insert_with(TPoly::zero);
        e.add_assign(&t.coeff);
        if e.is_zero() {
            self.terms.remove(&(t.power, t.log, t.pi_power));
        }
    }

    pub fn truncate_at(&mut self, power: i32) {
        self.truncation = Some(self.truncation.map_or(power, |p| p.min(power)));
    }

    pub fn merge(&mut self, o: &KernelExpansion) -> Result<()> {
        if o.radial_var != self.radial_var || o.n != self.n {
            return Err(Error::Parameter("cannot merge expansions in different variables".into()));
        }
        for t in o.terms() {
            self.add_term(t);
        }
        if let Some(p) = o.truncation {
            self.truncate_at(p);
        }
        Ok(())
    }

    /// Drops smooth monomials and non-log terms at or past the truncation.
    fn normalize(&mut self) {
        let trunc = self.truncation;
        let mut out = BTreeMap::new();
        for ((power, log, pi), c) in std::mem::take(&mut self.terms) {
            if !log && trunc.is_some_and(|p| power >= p) {
                continue;
            }
            let kept = if log || power < 0 {
                c
            } else {
                // t^a R^k is a polynomial in (x_n, y_n, |x′|²) iff k − |a| is even and ≥ 0
                let mut kept = TPoly::zero();
                for (m, v) in c.iter() {
                    let deg: i32 = m.exps().iter().map(|&e| e as i32).sum();
                    if !(deg <= power && (power - deg) % 2 == 0) {
                        kept.add_term(m.clone(), v);
                    }
                }
                kept
            };
            if !kept.is_zero() {
                out.insert((power, log, pi), kept);
            }
        }
        self.terms = out;
    }

    /// Numeric value at direction variables `t`, radius `r` and a numeric jet.
    pub fn eval(&self, t: &[f64], r: f64, jet: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(&(power, log, pi), c)| {
                let v = eval_tpoly(c, t, jet);
                let lg = if log { r.ln() } else { 1.0 };
                v * std::f64::consts::PI.powi(pi) * r.powi(power) * lg
            })
            .sum()
    }

    /// Restriction to `x_n = y_n = 0`: direction variables set to zero.
    pub fn restrict_to_boundary(&self) -> KernelExpansion {
        let mut out = KernelExpansion::new(RadialVar::Boundary, self.n);
        for t in self.terms() {
            let c = t.coeff.coeff(&JetMonomial::one());
            out.add_term(KernelTerm { coeff: TPoly::constant(c), ..t });
        }
        out.truncation = self.truncation;
        out.normalize();
        out
    }

    /// Same expansion with a numeric jet substituted.
    pub fn substitute(&self, jet: &[Q]) -> KernelExpansion {
        let mut out = KernelExpansion::new(self.radial_var, self.n);
        for t in self.terms() {
            let c = t.coeff.map(|p| JetPoly::from_q(p.substitute(jet)));
            out.add_term(KernelTerm { coeff: c, ..t });
        }
        out.truncation = self.truncation;
        out
    }
}

/// Coefficient of the lowest log term, if any.
pub fn log_coefficient(exp: &KernelExpansion) -> Option<KernelTerm> {
    exp.terms().into_iter().filter(|t| t.log).min_by_key(|t| t.power)
}

fn real_coeff(c: &CJetPoly, what: &str) -> Result<JetPoly> {
    if !c.is_real() {
        return Err(Error::Kind(format!("{what} has a non-real coefficient {c}")));
    }
    Ok(c.re())
}

fn int_shift(s: &BoundarySymbol) -> Result<i32> {
    let sh = s.w_shift();
    if !sh.is_integer() {
        return Err(Error::Parameter(format!("fractional w-power {} has no closed-form transform here", fmt_rational(sh))));
    }
    sh.to_integer().try_into().map_err(|_| Error::Parameter("w-power out of range".into()))
}

/// `(Σ t_i)^k` expanded, as a polynomial in `t1 … t_vars`.
fn tau_pow(vars: usize, k: u32) -> TPoly {
    let tau = (1..=vars).fold(TPoly::zero(), |acc, i| acc.add(&TPoly::var(i)));
    tau.pow(k)
}

fn tau_poly(vars: usize, coeffs: &[Q]) -> TPoly {
    let mut out = TPoly::zero();
    for (a, c) in coeffs.iter().enumerate() {
        if !c.is_zero() {
            out.add_assign(&tau_pow(vars, a as u32).scale_q(c));
        }
    }
    out
}

fn prefactor_monomial(qe: u32, re: u32) -> TPoly {
    TPoly::term(JetMonomial::from_exps(vec![qe as u8, re as u8]), JetPoly::one())
}

/// Transform of `x_n^q y_n^r w^p e^{−(x_n+y_n)w}` (Green variables when
/// `green`, otherwise `r = 0` and the Poisson variable `t1 = x_n/R`).
pub fn radial_ift_term(q_exp: u32, r_exp: u32, p: i32, n: usize, green: bool) -> Result<KernelExpansion> {
    if n < 2 {
        return Err(Error::Parameter(format!("dimension must be at least 2, got {n}")));
    }
    if !green && r_exp != 0 {
        return Err(Error::Parameter("y_n only occurs in Green symbols".into()));
    }
    let vars = if green { 2 } else { 1 };
    let rv = if green { RadialVar::Green } else { RadialVar::X };
    let mut out = KernelExpansion::new(rv, n);
    let (cn, pi) = c_n_exact(n);
    let pre = prefactor_monomial(q_exp, r_exp);
    let base = (q_exp + r_exp) as i32;
    match family(n, p) {
        Family::Regular(poly) => {
            let c = pre.mul(&tau_poly(vars, &poly)).scale_q(&cn);
            out.add_term(KernelTerm { coeff: c, power: base + 1 - n as i32 - p, log: false, pi_power: pi });
        }
        Family::Lattice { m, log } => {
            let c = pre.mul(&tau_poly(vars, &log)).scale_q(&cn);
            let power = base + m as i32;
            out.add_term(KernelTerm { coeff: c, power, log: true, pi_power: pi });
            out.truncate_at(power);
        }
        Family::Unsupported => out.truncate_at(base + 1 - n as i32 - p),
    }
    out.normalize();
    Ok(out)
}

/// Transform of a pure `|ξ′|^a` on the boundary.
pub fn boundary_ift_term(a: i32, n: usize) -> KernelExpansion {
    let mut out = KernelExpansion::new(RadialVar::Boundary, n);
    let d = n as i32 - 1;
    match riesz(n, a) {
        Riesz::Zero => {}
        Riesz::Power { r, pi } => {
            out.add_term(KernelTerm { coeff: TPoly::constant(JetPoly::from_q(r)), power: -a - d, log: false, pi_power: pi })
        }
        Riesz::Log { r, pi, j } => {
            out.add_term(KernelTerm { coeff: TPoly::constant(JetPoly::from_q(r)), power: 2 * j as i32, log: true, pi_power: pi })
        }
    }
    out.normalize();
    out
}

/// Kernel expansion of grades `0..=depth` of a Poisson or Green symbol at the center.
pub fn symbol_kernel_expansion(s: &BoundarySymbol, depth: usize) -> Result<KernelExpansion> {
    let green = match s.kind() {
        SymbolKind::Poisson => false,
        SymbolKind::Green => true,
        k => return Err(Error::Kind(format!("kernel expansion needs a Poisson or Green symbol, got {}", k.name()))),
    };
    if s.depth() < depth {
        return Err(Error::Parameter(format!("symbol has {} grades, {depth} requested", s.depth())));
    }
    let shift = int_shift(s)?;
    let n = s.n();
    let mut jobs = Vec::new();
    for j in 0..=depth {
        for ((w, xn, yn), c) in center_profile(s, j)? {
            jobs.push((w + shift, xn, yn, real_coeff(&c, "kernel symbol")?));
        }
    }
    let parts = crate::par::map(&jobs, |(p, xn, yn, c)| -> Result<KernelExpansion> {
        let mut e = radial_ift_term(*xn, *yn, *p, n, green)?;
        let scale = TPoly::constant(c.clone());
        let terms = e.terms();
        e.terms.clear();
        for t in terms {
            e.add_term(KernelTerm { coeff: t.coeff.mul(&scale), ..t });
        }
        Ok(e)
    });
    let mut out = KernelExpansion::new(if green { RadialVar::Green } else { RadialVar::X }, n);
    for p in parts {
        out.merge(&p?)?;
    }
    out.normalize();
    Ok(out)
}

/// Exponents `p` of the families `w^p e^{−tw}` met by [`symbol_kernel_expansion`].
pub fn symbol_families(s: &BoundarySymbol, depth: usize) -> Result<Vec<i32>> {
    let shift = int_shift(s)?;
    let mut out = std::collections::BTreeSet::new();
    for j in 0..=depth.min(s.depth()) {
        for (w, _, _) in center_profile(s, j)?.keys() {
            out.insert(w + shift);
        }
    }
    Ok(out.into_iter().collect())
}

/// Boundary kernel of a pseudodifferential symbol (grades `0..=depth` at the center).
pub fn boundary_trace_expansion(s: &PsdoExpansion, depth: usize) -> Result<KernelExpansion> {
    let sym = &s.symbol;
    let shift = int_shift(sym)?;
    let mut out = KernelExpansion::new(RadialVar::Boundary, sym.n());
    for j in 0..=depth.min(sym.depth()) {
        for ((w, _, _), c) in center_profile(sym, j)? {
            let c = real_coeff(&c, "boundary symbol")?;
            for t in boundary_ift_term(w + shift, sym.n()).terms() {
                out.add_term(KernelTerm { coeff: t.coeff.mul(&TPoly::constant(c.clone())), ..t });
            }
        }
    }
    out.normalize();
    Ok(out)
}

/// Default x′-truncation weight: enough for exact center values.
pub fn default_weight(depth: usize) -> u32 {
    depth as u32
}

/// Poisson kernel `K((0,x_n), ζ)` near the center through `depth` grades.
pub fn poisson_kernel_expansion(dom: &DomainSpec, depth: usize) -> Result<KernelExpansion> {
    let k = compute_poisson_symbols(dom, depth, default_weight(depth))?;
    symbol_kernel_expansion(&k, depth)
}

/// Harmonic Bergman kernel near the boundary diagonal through `depth` grades.
pub fn bergman_kernel_expansion(dom: &DomainSpec, depth: usize) -> Result<KernelExpansion> {
    let ch = bergman_chain(dom, depth, default_weight(depth))?;
    symbol_kernel_expansion(&ch.g, depth)
}

/// Boundary kernel of `Λ⁻¹` on the diagonal through `depth` grades.
pub fn lambda_inverse_trace_expansion(dom: &DomainSpec, depth: usize) -> Result<KernelExpansion> {
    let ch = bergman_chain(dom, depth, default_weight(depth))?;
    boundary_trace_expansion(&ch.p, depth)
}

/// Leading Green term with the dimension kept symbolic: the transform of
/// `c·w^p e^{−(x_n+y_n)w}` as `c_n · coeff(n; t1, t2) · R^{power_offset − n}`,
/// where the jet variable `a1` of `coeff` stands for `n`.
#[derive(Clone, Debug, PartialEq)]
pub struct SymbolicNTerm {
    pub coeff: TPoly,
    pub power_offset: i32,
}

impl SymbolicNTerm {
    /// Specializes `n`.
    pub fn at(&self, n: usize) -> TPoly {
        self.coeff.map(|c| JetPoly::from_q(c.substitute(&[q(n as i64)])))
    }
}

impl fmt::Display for SymbolicNTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body = fmt_tpoly(&self.coeff, "t").replace("a1", "n");
        write!(f, "c_n·({body})·R^({}−n)", self.power_offset)
    }
}

/// The grade-0 Green symbol at the center must be `c·w^p` with no normal
/// variables; its transform is returned for symbolic `n`.
pub fn green_leading_symbolic_n(g: &BoundarySymbol) -> Result<SymbolicNTerm> {
    if g.kind() != SymbolKind::Green {
        return Err(Error::Kind("expected a Green symbol".into()));
    }
    let prof = center_profile(g, 0)?;
    let shift = int_shift(g)?;
    if prof.len() != 1 {
        return Err(Error::Parameter("leading Green grade is not a single power of w".into()));
    }
    let ((w, xn, yn), c) = prof.into_iter().next().expect("one entry");
    let p = w + shift;
    if xn != 0 || yn != 0 || p < 0 {
        return Err(Error::Parameter("leading Green grade is not c·w^p with p ≥ 0".into()));
    }
    let c = real_coeff(&c, "Green symbol")?;
    let ladder = ladder_symbolic_n(p as u32);
    let mut coeff = TPoly::zero();
    for (a, ca) in ladder.iter().enumerate() {
        if ca.is_zero() {
            continue;
        }
        let tp = tau_pow(2, a as u32);
        coeff.add_assign(&tp.map(|v| v.mul(ca)));
    }
    // the jet constant multiplies from outside; symbolic-n coefficients must not mix with jet variables
    if c.max_var() > 0 {
        return Err(Error::Parameter("leading Green coefficient depends on the jet".into()));
    }
    let cq = c.coeff(&JetMonomial::one());
    Ok(SymbolicNTerm { coeff: coeff.scale_q(&cq), power_offset: 1 - p })
}

/// Text form of a direction-variable polynomial, variables named `{prefix}1`, `{prefix}2`.
pub fn fmt_tpoly(c: &TPoly, prefix: &str) -> String {
    if c.is_zero() {
        return "0".into();
    }
    let mut parts = Vec::new();
    for (m, v) in c.iter() {
        let inner = v.to_string();
        let inner = if v.len() > 1 { format!("({inner})") } else { inner };
        if m.is_one() {
            parts.push(inner);
        } else {
            parts.push(format!("{inner}*{}", m.display_with(prefix)));
        }
    }
    parts.join(" + ")
}

impl fmt::Display for KernelExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = match self.radial_var {
            RadialVar::X => "|x|",
            RadialVar::Green => "|x−ỹ|",
            RadialVar::Boundary => "|x′−y′|",
        };
        if self.terms.is_empty() {
            write!(f, "0")?;
        }
        let mut first = true;
        for t in self.terms() {
            if !first {
                write!(f, "\n  + ")?;
            }
            first = false;
            write!(f, "[{}]·π^{}·{r}^{}", fmt_tpoly(&t.coeff, "t"), t.pi_power, t.power)?;
            if t.log {
                write!(f, "·log{r}")?;
            }
        }
        if let Some(p) = self.truncation {
            write!(f, "\n  (non-log terms from {r}^{p} on not resolved)")?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    coeff_t_poly: Vec<[String; 3]>,
    power: i32,
    log: bool,
    pi_power: i32,
}

#[derive(Serialize, Deserialize)]
struct ExpansionJson {
    radial_var: RadialVar,
    n: usize,
    truncation: Option<i32>,
    terms: Vec<TermJson>,
}

impl KernelExpansion {
    pub fn to_json(&self) -> Result<String> {
        let terms = self
            .terms()
            .into_iter()
            .map(|t| {
                let mut rows = Vec::new();
                for (tm, jp) in t.coeff.iter() {
                    for (jm, v) in jp.iter() {
                        rows.push([fmt_rational(v), jm.to_string(), tm.display_with("t")]);
                    }
                }
                TermJson { coeff_t_poly: rows, power: t.power, log: t.log, pi_power: t.pi_power }
            })
            .collect();
        let j = ExpansionJson { radial_var: self.radial_var, n: self.n, truncation: self.truncation, terms };
        Ok(serde_json::to_string_pretty(&j)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let j: ExpansionJson = serde_json::from_str(s)?;
        let mut out = KernelExpansion::new(j.radial_var, j.n);
        for t in j.terms {
            let mut c = TPoly::zero();
            for [v, jm, tm] in t.coeff_t_poly {
                let jet = JetPoly::term(JetMonomial::parse(&jm)?, parse_rational(&v)?);
                c.add_term(JetMonomial::parse_with(&tm, "t")?, &jet);
            }
            out.add_term(KernelTerm { coeff: c, power: t.power, log: t.log, pi_power: t.pi_power });
        }
        out.truncation = j.truncation;
        Ok(out)
    }
}

/// Numeric value of a coefficient polynomial.
pub fn eval_tpoly(c: &TPoly, t: &[f64], jet: &[f64]) -> f64 {
    let mut v = 0.0;
    for (m, cj) in c.iter() {
        let mut tm = 1.0;
        for (i, &e) in m.exps().iter().enumerate() {
            tm *= t.get(i).copied().unwrap_or(0.0).powi(e as i32);
        }
        v += tm * cj.eval(jet);
    }
    v
}

/// `x·π^k` as a float.
pub fn with_pi(x: &Q, k: i32) -> f64 {
    q_to_f64(x) * std::f64::consts::PI.powi(k)
}
