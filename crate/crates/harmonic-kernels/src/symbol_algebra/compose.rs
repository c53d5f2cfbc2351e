//! Composition and adjoint rules of the boundary calculus.

use num_traits::{One, Zero};

use super::jet::{factorial, q, CJetPoly, Gauss, Q};
use super::symbol::{accumulate, merge_into, BoundarySymbol, Monomial, SymbolKind, TermMap, Var};
use crate::error::{Error, Result};
use crate::par;

/// All multi-indices of length `d` and order `k`.
pub fn multi_indices(d: usize, k: usize) -> Vec<Vec<u8>> {
    if d == 1 {
        return vec![vec![k as u8]];
    }
    let mut out = Vec::new();
    for first in (0..=k).rev() {
        for mut rest in multi_indices(d - 1, k - first) {
            rest.insert(0, first as u8);
            out.push(rest);
        }
    }
    out
}

fn alpha_factorial(alpha: &[u8]) -> Q {
    alpha.iter().map(|&a| factorial(a as u32)).fold(Q::one(), |acc, f| acc * f)
}

/// `D_ξ^α s` with `D = −i∂`.
pub fn d_xi(s: &BoundarySymbol, alpha: &[u8]) -> Result<BoundarySymbol> {
    let mut out = s.clone();
    let mut k = 0;
    for (j, &a) in alpha.iter().enumerate() {
        for _ in 0..a {
            out = out.derive(Var::Xi(j))?;
            k += 1;
        }
    }
    // (−i)^k
    let unit = match k % 4 {
        0 => Gauss::new(Q::one(), Q::zero()),
        1 => Gauss::new(Q::zero(), -Q::one()),
        2 => Gauss::new(-Q::one(), Q::zero()),
        _ => Gauss::new(Q::zero(), Q::one()),
    };
    Ok(out.scale(&CJetPoly::constant(unit)))
}

/// `∂_{x′}^α s`.
pub fn d_x(s: &BoundarySymbol, alpha: &[u8]) -> Result<BoundarySymbol> {
    let mut out = s.clone();
    for (j, &a) in alpha.iter().enumerate() {
        for _ in 0..a {
            out = out.derive(Var::XPrime(j))?;
        }
    }
    Ok(out)
}

/// How the normal variables of two factors are combined.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Junction {
    /// Plain product (one factor is pseudodifferential).
    Pointwise,
    /// Poisson(x_n) · Trace(y_n): the trace variable becomes `y_n`.
    Outer,
    /// ∫₀^∞ dz over the shared variable; flags tell which slots carry z.
    Integrate { a_z_in_yn: bool, b_z_in_xn: bool },
}

fn junction(a: SymbolKind, b: SymbolKind) -> Result<(SymbolKind, Junction)> {
    use SymbolKind::*;
    let ok = |k, j| Ok((k, j));
    match (a, b) {
        (Psdo, Psdo) => ok(Psdo, Junction::Pointwise),
        (Poisson, Psdo) => ok(Poisson, Junction::Pointwise),
        (Psdo, Trace) => ok(Trace, Junction::Pointwise),
        (Psdo, Green) => ok(Green, Junction::Pointwise),
        (Green, Psdo) => ok(Green, Junction::Pointwise),
        (Poisson, Trace) => ok(Green, Junction::Outer),
        (Trace, Poisson) => ok(Psdo, Junction::Integrate { a_z_in_yn: false, b_z_in_xn: true }),
        (Trace, Green) => ok(Trace, Junction::Integrate { a_z_in_yn: false, b_z_in_xn: true }),
        (Green, Poisson) => ok(Poisson, Junction::Integrate { a_z_in_yn: true, b_z_in_xn: true }),
        (Green, Green) => ok(Green, Junction::Integrate { a_z_in_yn: true, b_z_in_xn: true }),
        (a, b) => Err(Error::Kind(format!("{}∘{} is not defined in the boundary calculus", a.name(), b.name()))),
    }
}

/// `∫₀^∞ z^{α+q} e^{−2zw} dz = Γ(α+1)·2^{−α}w^{−α} · (α+1)_q / (2^{q+1} w^{q+1})`;
/// returns the rational factor `(α+1)_q / 2^{q+1}`.
fn integral_factor(alpha: &Q, qz: u32) -> Q {
    let mut f = Q::one();
    for k in 1..=qz {
        f *= alpha + q(k as i64);
    }
    f / q(1i64 << (qz + 1))
}

fn combine(a: &TermMap, b: &TermMap, j: Junction, alpha: &Q, max_xdeg: i64) -> TermMap {
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
            let mut m = Monomial {
                xp: ma.xp.iter().zip(&mb.xp).map(|(x, y)| x + y).collect(),
                xi: ma.xi.iter().zip(&mb.xi).map(|(x, y)| x + y).collect(),
                w: ma.w + mb.w,
                xn: 0,
                yn: 0,
            };
            let mut c = ca.mul(cb);
            match j {
                Junction::Pointwise => {
                    m.xn = ma.xn + mb.xn;
                    m.yn = ma.yn + mb.yn;
                }
                Junction::Outer => {
                    m.xn = ma.xn;
                    m.yn = mb.xn;
                }
                Junction::Integrate { a_z_in_yn, b_z_in_xn } => {
                    let za = if a_z_in_yn { ma.yn } else { ma.xn };
                    let zb = if b_z_in_xn { mb.xn } else { mb.yn };
                    let qz = za + zb;
                    // surviving normal variables: a's x_n (if a is Green) and b's y_n
                    let keep_a = if a_z_in_yn { ma.xn } else { 0 };
                    let keep_b = mb.yn;
                    if a_z_in_yn {
                        m.xn = keep_a;
                        m.yn = keep_b;
                    } else {
                        // trace on the left: the result lives in b's y_n, renamed x_n
                        m.xn = keep_b;
                    }
                    m.w -= qz as i32 + 1;
                    c = c.scale_q(&integral_factor(alpha, qz));
                }
            }
            accumulate(&mut out, m, &c);
        }
    }
    out
}

/// `Σ_{|α|≤depth} (1/α!) D_ξ^α a ∘_n ∂_x^α b`, grades up to `depth`.
///
/// The result keeps the smaller of the two weight caps: with the total-weight
/// convention (x′-degree + grade ≤ cap) the x′-derivatives are paid for by
/// the grade shift `|α|`.
pub fn leibniz_compose(a: &BoundarySymbol, b: &BoundarySymbol, depth: usize) -> Result<BoundarySymbol> {
    compose_with(a, b, depth, &Q::zero())
}

/// Same as [`leibniz_compose`], with an extra weight `z^α` in the normal
/// integral. The common factor `Γ(α+1)2^{−α}w^{−α}` is recorded as `w_shift`
/// (the scalar part is left to the caller).
pub(crate) fn compose_with(a: &BoundarySymbol, b: &BoundarySymbol, depth: usize, alpha: &Q) -> Result<BoundarySymbol> {
    if a.n() != b.n() {
        return Err(Error::Kind("dimension mismatch".into()));
    }
    let (kind, j) = junction(a.kind(), b.kind())?;
    let integrates = matches!(j, Junction::Integrate { .. });
    if !alpha.is_zero() && !integrates {
        return Err(Error::Kind("a normal weight only applies to integrating compositions".into()));
    }
    let d = a.n() - 1;
    let cap = a.weight_cap().min(b.weight_cap());
    let alphas: Vec<Vec<u8>> = (0..=depth).flat_map(|k| multi_indices(d, k)).collect();
    let derived: Vec<Result<(BoundarySymbol, BoundarySymbol)>> =
        par::map(&alphas, |al| Ok((d_xi(a, al)?, d_x(b, al)?)));
    let derived: Vec<(BoundarySymbol, BoundarySymbol)> = derived.into_iter().collect::<Result<_>>()?;

    let mut tasks = Vec::new();
    for (ai, al) in alphas.iter().enumerate() {
        let k: usize = al.iter().map(|&v| v as usize).sum();
        for ja in 0..a.grades().len() {
            for jb in 0..b.grades().len() {
                if ja + jb + k <= depth {
                    tasks.push((ai, ja, jb, ja + jb + k));
                }
            }
        }
    }
    let parts = par::map(&tasks, |&(ai, ja, jb, jo)| {
        let (da, db) = &derived[ai];
        let f = Q::one() / alpha_factorial(&alphas[ai]);
        let t = combine(&da.grades()[ja], &db.grades()[jb], j, alpha, cap as i64 - jo as i64);
        let scaled: TermMap = t.into_iter().map(|(m, c)| (m, c.scale_q(&f))).collect();
        (jo, scaled)
    });
    let mut grades = vec![TermMap::new(); depth + 1];
    for (jo, t) in parts {
        merge_into(&mut grades[jo], &t);
    }
    let order = a.order() + b.order() - if integrates { 1 } else { 0 };
    let mut shift = a.w_shift() + b.w_shift();
    if integrates {
        shift -= alpha;
    }
    Ok(BoundarySymbol::from_parts_unchecked(kind, a.n(), order, cap, shift, grades))
}

/// `∫₀^∞ t(x_n) k(x_n) dx_n` for a trace-type and a Poisson-type symbol at grade
/// depth 0 (no Leibniz terms).
pub fn xn_integral_compose(t: &BoundarySymbol, k: &BoundarySymbol) -> Result<BoundarySymbol> {
    if t.kind() != SymbolKind::Trace || k.kind() != SymbolKind::Poisson {
        return Err(Error::Kind("xn_integral_compose needs a trace and a Poisson symbol".into()));
    }
    let depth = t.depth() + k.depth();
    let mut a0 = t.clone();
    let mut b0 = k.clone();
    a0 = a0.truncated(depth, a0.weight_cap());
    b0 = b0.truncated(depth, b0.weight_cap());
    let (_, j) = junction(a0.kind(), b0.kind())?;
    let cap = a0.weight_cap().min(b0.weight_cap());
    let mut grades = vec![TermMap::new(); depth + 1];
    for (ja, ga) in a0.grades().iter().enumerate() {
        for (jb, gb) in b0.grades().iter().enumerate() {
            let jo = ja + jb;
            let part = combine(ga, gb, j, &Q::zero(), cap as i64 - jo as i64);
            merge_into(&mut grades[jo], &part);
        }
    }
    Ok(BoundarySymbol::from_parts_unchecked(
        SymbolKind::Psdo,
        t.n(),
        t.order() + k.order() - 1,
        cap,
        t.w_shift() + k.w_shift(),
        grades,
    ))
}

/// Formal adjoint `k*_j = Σ_{m+|α|=j} (1/α!) ∂_x^α D_ξ^α k̄_m`; Poisson and
/// trace symbols are exchanged, pseudodifferential symbols stay put, and Green
/// symbols have their normal variables swapped.
pub fn adjoint_symbol(k: &BoundarySymbol, depth: usize) -> Result<BoundarySymbol> {
    let kind = match k.kind() {
        SymbolKind::Poisson => SymbolKind::Trace,
        SymbolKind::Trace => SymbolKind::Poisson,
        SymbolKind::Psdo => SymbolKind::Psdo,
        SymbolKind::Green => SymbolKind::Green,
    };
    let d = k.n() - 1;
    // a Green kernel's adjoint also exchanges x_n and y_n
    let conj = if kind == SymbolKind::Green { k.conj().swap_normal() } else { k.conj() };
    let alphas: Vec<Vec<u8>> = (0..=depth).flat_map(|s| multi_indices(d, s)).collect();
    let derived = par::map(&alphas, |al| -> Result<BoundarySymbol> { d_x(&d_xi(&conj, al)?, al) });
    let mut grades = vec![TermMap::new(); depth + 1];
    for (al, ds) in alphas.iter().zip(derived) {
        let ds = ds?;
        let s: usize = al.iter().map(|&v| v as usize).sum();
        let f = Q::one() / alpha_factorial(al);
        for (m, g) in ds.grades().iter().enumerate() {
            if m + s > depth {
                break;
            }
            let scaled: TermMap = g.iter().map(|(mm, c)| (mm.clone(), c.scale_q(&f))).collect();
            merge_into(&mut grades[m + s], &scaled);
        }
    }
    Ok(BoundarySymbol::from_parts_unchecked(kind, k.n(), k.order(), k.weight_cap(), k.w_shift().clone(), grades))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbol_algebra::symbol::one_coeff;

    fn decay(n: usize, kind: SymbolKind) -> BoundarySymbol {
        BoundarySymbol::monomial(kind, n, 4, Monomial::one(n), one_coeff()).unwrap()
    }

    #[test]
    fn trace_poisson_gives_inverse_2w() {
        let t = decay(3, SymbolKind::Trace);
        let k = decay(3, SymbolKind::Poisson);
        let s = leibniz_compose(&t, &k, 0).unwrap();
        let mut want = Monomial::one(3);
        want.w = -1;
        assert_eq!(s.kind(), SymbolKind::Psdo);
        assert_eq!(s.grades()[0].get(&want), Some(&CJetPoly::from_q(Q::new(1.into(), 2.into()))));
    }

    #[test]
    fn poisson_poisson_rejected() {
        let k = decay(3, SymbolKind::Poisson);
        assert!(matches!(leibniz_compose(&k, &k, 1), Err(Error::Kind(_))));
    }

    #[test]
    fn multi_index_counts() {
        assert_eq!(multi_indices(2, 3).len(), 4);
        assert_eq!(multi_indices(3, 2).len(), 6);
        assert_eq!(multi_indices(1, 5), vec![vec![5]]);
    }

    #[test]
    fn integral_rule() {
        assert_eq!(integral_factor(&Q::zero(), 3), Q::new(6.into(), 16.into()));
    }
}
