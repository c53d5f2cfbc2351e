//! Exact graded term ring for boundary symbols, with the composition and
//! adjoint rules of the boundary calculus.

pub mod compose;
pub mod jet;
pub mod json;
pub mod symbol;

pub use compose::{adjoint_symbol, leibniz_compose, multi_indices, xn_integral_compose};
pub use jet::{parse_rational, CJetPoly, Gauss, JetMonomial, JetPoly, Q};
pub use symbol::{canonicalize, BoundarySymbol, EvalPoint, Monomial, SymbolKind, SymbolTerm, TermMap, Var};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use jet::{factorial, q};
use symbol::accumulate;

/// Radial model domain `{x_n > Φ(|x′|²)}` given by the jet `a_k = Φ^(k)(0)`.
/// Jet entries past the end of the list are zero.
#[derive(Clone, Debug, PartialEq)]
pub struct DomainSpec {
    n: usize,
    jet: Vec<JetPoly>,
}

impl DomainSpec {
    /// Jet of free variables `a_1 … a_order`.
    pub fn symbolic(n: usize, order: usize) -> Result<Self> {
        Self::from_jet(n, (1..=order.max(1)).map(JetPoly::var).collect())
    }

    /// Jet of exact rational values.
    pub fn numeric(n: usize, values: Vec<Q>) -> Result<Self> {
        Self::from_jet(n, values.into_iter().map(JetPoly::from_q).collect())
    }

    pub fn from_jet(n: usize, jet: Vec<JetPoly>) -> Result<Self> {
        if n < 2 {
            return Err(Error::Parameter(format!("dimension must be at least 2, got {n}")));
        }
        if jet.is_empty() {
            return Err(Error::Parameter("the jet needs at least one entry".into()));
        }
        Ok(DomainSpec { n, jet })
    }

    /// The half-space: all jet entries vanish.
    pub fn half_space(n: usize) -> Result<Self> {
        Self::numeric(n, vec![Q::zero()])
    }

    /// Ball of radius `r` tangent to `x_n = 0` at the origin:
    /// `Φ(s) = r − √(r² − s)`, so `a_k = (2k−3)!!/2^k · r^{1−2k}`.
    pub fn ball(n: usize, r: Q, order: usize) -> Result<Self> {
        if r <= Q::zero() {
            return Err(Error::Parameter("ball radius must be positive".into()));
        }
        let mut vals = Vec::new();
        let mut dfact = Q::one();
        for k in 1..=order.max(1) {
            if k >= 2 {
                dfact *= q(2 * k as i64 - 3);
            }
            let pow = num_traits::pow(r.clone(), 2 * k - 1);
            vals.push(&dfact / (q(1i64 << k) * pow));
        }
        Self::numeric(n, vals)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn jet(&self) -> &[JetPoly] {
        &self.jet
    }

    pub fn a(&self, k: usize) -> JetPoly {
        self.jet.get(k - 1).cloned().unwrap_or_else(JetPoly::zero)
    }

    pub fn is_symbolic(&self) -> bool {
        self.jet.iter().any(|p| p.max_var() > 0)
    }

    /// `φ(x′) = Σ_k a_k |x′|^{2k}/k!` truncated at x′-degree `max_deg`, as a
    /// Psdo-kind term map.
    pub fn phi(&self, max_deg: u32) -> TermMap {
        let d = self.n - 1;
        let mut out = TermMap::new();
        for k in 1..=(max_deg / 2) as usize {
            let a = self.a(k);
            if a.is_zero() {
                continue;
            }
            let c = a.to_complex().scale_q(&(Q::one() / factorial(k as u32)));
            // |x′|^{2k} by the multinomial theorem
            for alpha in multi_indices(d, k) {
                let mut coef = factorial(k as u32);
                for &e in &alpha {
                    coef /= factorial(e as u32);
                }
                let mut m = Monomial::one(self.n);
                m.xp = alpha.iter().map(|&e| 2 * e).collect();
                accumulate(&mut out, m, &c.scale_q(&coef));
            }
        }
        out
    }
}
