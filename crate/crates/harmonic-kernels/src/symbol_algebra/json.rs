//! JSON form of boundary symbols.
//!
//! Coefficients are maps from jet monomials to `"p/q"` strings; imaginary
//! parts use keys prefixed with `i*` (for example `"i*a1": "2"`).

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::jet::{fmt_rational, parse_rational, CJetPoly, Gauss, JetMonomial, Q};
use super::symbol::{accumulate, BoundarySymbol, Monomial, SymbolKind, TermMap};
use crate::error::{Error, Result};

#[derive(Serialize, Deserialize)]
struct TermJson {
    coeff: BTreeMap<String, String>,
    xp: Vec<u8>,
    xi: Vec<u8>,
    w: i32,
    xn: u32,
    yn: u32,
}

#[derive(Serialize, Deserialize)]
struct GradeJson {
    j: usize,
    terms: Vec<TermJson>,
}

#[derive(Serialize, Deserialize)]
struct SymbolJson {
    kind: String,
    n: usize,
    order: i32,
    weight_cap: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    w_shift: Option<String>,
    grades: Vec<GradeJson>,
}

pub fn coeff_to_json(c: &CJetPoly) -> BTreeMap<String, String> {
    let mut out = BTreeMap::new();
    for (m, v) in c.iter() {
        if !v.re.is_zero() {
            out.insert(m.to_string(), fmt_rational(&v.re));
        }
        if !v.im.is_zero() {
            out.insert(format!("i*{m}"), fmt_rational(&v.im));
        }
    }
    out
}

pub fn coeff_from_json(map: &BTreeMap<String, String>) -> Result<CJetPoly> {
    let mut c = CJetPoly::zero();
    for (k, v) in map {
        let val = parse_rational(v)?;
        let (mono, g) = match k.strip_prefix("i*") {
            Some(rest) => (rest, Gauss::new(Q::zero(), val)),
            None => (k.as_str(), Gauss::new(val, Q::zero())),
        };
        c.add_term(JetMonomial::parse(mono)?, &g);
    }
    Ok(c)
}

impl BoundarySymbol {
    pub fn to_json(&self) -> Result<String> {
        let doc = SymbolJson {
            kind: self.kind().name().to_string(),
            n: self.n(),
            order: self.order(),
            weight_cap: self.weight_cap(),
            w_shift: if self.w_shift().is_zero() { None } else { Some(fmt_rational(self.w_shift())) },
            grades: self
                .grades()
                .iter()
                .enumerate()
                .map(|(j, g)| GradeJson {
                    j,
                    terms: g
                        .iter()
                        .map(|(m, c)| TermJson {
                            coeff: coeff_to_json(c),
                            xp: m.xp.clone(),
                            xi: m.xi.clone(),
                            w: m.w,
                            xn: m.xn,
                            yn: m.yn,
                        })
                        .collect(),
                })
                .collect(),
        };
        Ok(serde_json::to_string_pretty(&doc)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let doc: SymbolJson = serde_json::from_str(s)?;
        let kind = SymbolKind::from_name(&doc.kind)?;
        let depth = doc.grades.iter().map(|g| g.j + 1).max().unwrap_or(0);
        let mut grades = vec![TermMap::new(); depth];
        for g in doc.grades {
            for t in g.terms {
                if t.xp.len() + 1 != doc.n || t.xi.len() + 1 != doc.n {
                    return Err(Error::Parse("term arity does not match n − 1".into()));
                }
                let m = Monomial { xp: t.xp, xi: t.xi, w: t.w, xn: t.xn, yn: t.yn };
                accumulate(&mut grades[g.j], m, &coeff_from_json(&t.coeff)?);
            }
        }
        let s = BoundarySymbol::new(kind, doc.n, doc.order, doc.weight_cap, grades)?;
        Ok(match doc.w_shift {
            Some(v) => s.with_w_shift(parse_rational(&v)?),
            None => s,
        })
    }
}
