//! Exact scalars and polynomials in the jet variables `a_k = Φ^(k)(0)`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qr(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn factorial(n: u32) -> Q {
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc *= k;
    }
    Q::from_integer(acc)
}

/// Parses `p/q` or an integer. Decimal and exponent notation are rejected so
/// that every symbolic input stays exact.
pub fn parse_rational(s: &str) -> Result<Q> {
    let s = s.trim();
    if s.contains(['.', 'e', 'E']) {
        return Err(Error::Parse(format!("`{s}` is not an exact rational (use p/q)")));
    }
    let bad = || Error::Parse(format!("`{s}` is not a rational"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(Error::Parse(format!("`{s}` has a zero denominator")));
            }
            Ok(Q::new(n, d))
        }
        None => Ok(Q::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

pub fn fmt_rational(v: &Q) -> String {
    if v.is_integer() {
        v.numer().to_string()
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}

pub fn q_to_f64(v: &Q) -> f64 {
    v.to_f64().unwrap_or_else(|| {
        let n = v.numer().to_f64().unwrap_or(f64::NAN);
        let d = v.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// Gaussian rational `re + i·im`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Gauss {
    pub re: Q,
    pub im: Q,
}

impl Gauss {
    pub fn new(re: Q, im: Q) -> Self {
        Gauss { re, im }
    }
    pub fn i() -> Self {
        Gauss { re: Zero::zero(), im: One::one() }
    }
    pub fn conj(&self) -> Self {
        Gauss { re: self.re.clone(), im: -self.im.clone() }
    }
}

/// Coefficient ring of a [`Poly`].
pub trait Scalar: Clone + PartialEq + fmt::Debug + Send + Sync {
    fn s_zero() -> Self;
    fn s_one() -> Self;
    fn s_is_zero(&self) -> bool;
    fn add_ref(&mut self, o: &Self);
    fn mul_ref(&self, o: &Self) -> Self;
    fn neg_ref(&self) -> Self;
    fn scale_q(&self, f: &Q) -> Self;
    fn from_q(v: Q) -> Self;
}

impl Scalar for Q {
    fn s_zero() -> Self {
        Zero::zero()
    }
    fn s_one() -> Self {
        One::one()
    }
    fn s_is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add_ref(&mut self, o: &Self) {
        *self += o;
    }
    fn mul_ref(&self, o: &Self) -> Self {
        self * o
    }
    fn neg_ref(&self) -> Self {
        -self.clone()
    }
    fn scale_q(&self, f: &Q) -> Self {
        self * f
    }
    fn from_q(v: Q) -> Self {
        v
    }
}

impl Scalar for Gauss {
    fn s_zero() -> Self {
        Gauss::default()
    }
    fn s_one() -> Self {
        Gauss { re: One::one(), im: Zero::zero() }
    }
    fn s_is_zero(&self) -> bool {
        Zero::is_zero(&self.re) && Zero::is_zero(&self.im)
    }
    fn add_ref(&mut self, o: &Self) {
        self.re += &o.re;
        self.im += &o.im;
    }
    fn mul_ref(&self, o: &Self) -> Self {
        Gauss {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }
    fn neg_ref(&self) -> Self {
        Gauss { re: -self.re.clone(), im: -self.im.clone() }
    }
    fn scale_q(&self, f: &Q) -> Self {
        Gauss { re: &self.re * f, im: &self.im * f }
    }
    fn from_q(v: Q) -> Self {
        Gauss { re: v, im: Zero::zero() }
    }
}

/// Exponent vector over `a_1, a_2, …`; trailing zeros are never stored.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct JetMonomial(Vec<u8>);

impl JetMonomial {
    pub fn one() -> Self {
        JetMonomial(Vec::new())
    }

    pub fn from_exps(mut e: Vec<u8>) -> Self {
        while e.last() == Some(&0) {
            e.pop();
        }
        JetMonomial(e)
    }

    /// `a_k` (1-based).
    pub fn var(k: usize) -> Self {
        assert!(k >= 1, "jet variables are 1-based");
        let mut e = vec![0; k];
        e[k - 1] = 1;
        JetMonomial(e)
    }

    pub fn exps(&self) -> &[u8] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mul(&self, o: &Self) -> Self {
        let (long, short) = if self.0.len() >= o.0.len() { (self, o) } else { (o, self) };
        let mut e = long.0.clone();
        for (a, b) in e.iter_mut().zip(short.0.iter()) {
            *a += *b;
        }
        JetMonomial(e)
    }

    /// Dilation weight: `a_k` scales like length^(1−2k), so `a_k` has weight 2k−1.
    pub fn weight(&self) -> u32 {
        self.0.iter().enumerate().map(|(i, &e)| (2 * i as u32 + 1) * e as u32).sum()
    }

    pub fn parse(s: &str) -> Result<Self> {
        Self::parse_with(s, "a")
    }

    /// Parses a product of `<prefix>k^e` factors.
    pub fn parse_with(s: &str, prefix: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || s == "1" {
            return Ok(Self::one());
        }
        let mut e: Vec<u8> = Vec::new();
        for f in s.split('*') {
            let (base, pow) = match f.split_once('^') {
                Some((b, p)) => (b, p.parse::<u8>().map_err(|_| Error::Parse(format!("bad exponent in `{f}`")))?),
                None => (f, 1),
            };
            let k: usize = base
                .strip_prefix(prefix)
                .and_then(|k| k.parse().ok())
                .filter(|&k| k >= 1)
                .ok_or_else(|| Error::Parse(format!("bad jet variable `{base}`")))?;
            if e.len() < k {
                e.resize(k, 0);
            }
            e[k - 1] += pow;
        }
        Ok(Self::from_exps(e))
    }
}

impl JetMonomial {
    /// Renders with variables named `<prefix>1, <prefix>2, …`.
    pub fn display_with(&self, prefix: &str) -> String {
        if self.0.is_empty() {
            return "1".into();
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| if e == 1 { format!("{prefix}{}", i + 1) } else { format!("{prefix}{}^{}", i + 1, e) })
            .collect();
        parts.join("*")
    }
}

impl fmt::Display for JetMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_with("a"))
    }
}

/// Sparse polynomial in the jet variables.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct Poly<S> {
    terms: BTreeMap<JetMonomial, S>,
}

/// Rational jet polynomial.
pub type JetPoly = Poly<Q>;
/// Gaussian-rational jet polynomial (symbol coefficients).
pub type CJetPoly = Poly<Gauss>;

impl<S: Scalar> Poly<S> {
    pub fn zero() -> Self {
        Poly { terms: BTreeMap::new() }
    }

    pub fn constant(c: S) -> Self {
        Self::term(JetMonomial::one(), c)
    }

    pub fn from_q(c: Q) -> Self {
        Self::constant(S::from_q(c))
    }

    pub fn one() -> Self {
        Self::constant(S::s_one())
    }

    pub fn term(m: JetMonomial, c: S) -> Self {
        let mut terms = BTreeMap::new();
        if !c.s_is_zero() {
            terms.insert(m, c);
        }
        Poly { terms }
    }

    /// The jet variable `a_k`.
    pub fn var(k: usize) -> Self {
        Self::term(JetMonomial::var(k), S::s_one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&JetMonomial, &S)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &JetMonomial) -> S {
        self.terms.get(m).cloned().unwrap_or_else(S::s_zero)
    }

    pub fn add_term(&mut self, m: JetMonomial, c: &S) {
        if c.s_is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                v.add_ref(c);
                if v.s_is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c.clone());
            }
        }
    }

    pub fn add_assign(&mut self, o: &Self) {
        for (m, c) in &o.terms {
            self.add_term(m.clone(), c);
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        r.add_assign(o);
        r
    }

    pub fn neg(&self) -> Self {
        Poly { terms: self.terms.iter().map(|(m, c)| (m.clone(), c.neg_ref())).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut r = Self::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                r.add_term(m1.mul(m2), &c1.mul_ref(c2));
            }
        }
        r
    }

    pub fn scale(&self, c: &S) -> Self {
        let mut r = Self::zero();
        for (m, v) in &self.terms {
            r.add_term(m.clone(), &v.mul_ref(c));
        }
        r
    }

    pub fn scale_q(&self, f: &Q) -> Self {
        if Zero::is_zero(f) {
            return Self::zero();
        }
        Poly { terms: self.terms.iter().map(|(m, c)| (m.clone(), c.scale_q(f))).collect() }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut r = Self::one();
        for _ in 0..e {
            r = r.mul(self);
        }
        r
    }

    /// Maps every coefficient through `f`, dropping zeros.
    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Poly<T> {
        let mut r = Poly::<T>::zero();
        for (m, c) in &self.terms {
            r.add_term(m.clone(), &f(c));
        }
        r
    }

    /// Largest `k` with `a_k` present.
    pub fn max_var(&self) -> usize {
        self.terms.keys().map(|m| m.0.len()).max().unwrap_or(0)
    }

    /// True when every monomial has dilation weight `w`.
    pub fn is_weight_homogeneous(&self, w: u32) -> bool {
        self.terms.keys().all(|m| m.weight() == w)
    }
}

impl JetPoly {
    /// Substitutes rational values for `a_1, a_2, …`; missing values count as 0.
    pub fn substitute(&self, vals: &[Q]) -> Q {
        let mut acc: Q = Zero::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                match vals.get(i) {
                    Some(v) => t *= num_traits::pow(v.clone(), e as usize),
                    None => t = Zero::zero(),
                }
            }
            acc += t;
        }
        acc
    }

    pub fn eval(&self, vals: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(m, c)| {
                let mut t = q_to_f64(c);
                for (i, &e) in m.0.iter().enumerate() {
                    t *= vals.get(i).copied().unwrap_or(0.0).powi(e as i32);
                }
                t
            })
            .sum()
    }

    pub fn to_complex(&self) -> CJetPoly {
        self.map(|c| Gauss::from_q(c.clone()))
    }

    /// Parses sums such as `3/2*a1^2 - a2 + 1/4`.
    pub fn parse(s: &str) -> Result<Self> {
        let mut out = Self::zero();
        let s = s.replace(' ', "");
        if s.is_empty() || s == "0" {
            return Ok(out);
        }
        let mut chunks: Vec<String> = Vec::new();
        let mut cur = String::new();
        for ch in s.chars() {
            if (ch == '+' || ch == '-') && !cur.is_empty() && !cur.ends_with('^') {
                chunks.push(std::mem::take(&mut cur));
            }
            cur.push(ch);
        }
        chunks.push(cur);
        for chunk in chunks {
            let (sign, body) = match chunk.strip_prefix('-') {
                Some(b) => (-<Q as One>::one(), b.to_string()),
                None => (<Q as One>::one(), chunk.trim_start_matches('+').to_string()),
            };
            let mut coeff = sign;
            let mut mono = JetMonomial::one();
            for f in body.split('*') {
                if f.starts_with('a') {
                    mono = mono.mul(&JetMonomial::parse(f)?);
                } else {
                    coeff *= parse_rational(f)?;
                }
            }
            out.add_term(mono, &coeff);
        }
        Ok(out)
    }
}

impl CJetPoly {
    pub fn re(&self) -> JetPoly {
        self.map(|c| c.re.clone())
    }
    pub fn im(&self) -> JetPoly {
        self.map(|c| c.im.clone())
    }
    pub fn conj(&self) -> Self {
        self.map(|c| c.conj())
    }
    pub fn from_parts(re: &JetPoly, im: &JetPoly) -> Self {
        let mut r = re.to_complex();
        r.add_assign(&im.map(|c| Gauss::new(<Q as Zero>::zero(), c.clone())));
        r
    }
    pub fn is_real(&self) -> bool {
        self.terms.values().all(|c| c.im.is_zero())
    }
    /// `|c|² = c·c̄` as a real polynomial.
    pub fn norm_sqr(&self) -> JetPoly {
        self.mul(&self.conj()).re()
    }
}

// jet polynomials as coefficients of polynomials in further variables
impl Scalar for JetPoly {
    fn s_zero() -> Self {
        Poly::zero()
    }
    fn s_one() -> Self {
        Poly::one()
    }
    fn s_is_zero(&self) -> bool {
        self.is_zero()
    }
    fn add_ref(&mut self, o: &Self) {
        self.add_assign(o);
    }
    fn mul_ref(&self, o: &Self) -> Self {
        self.mul(o)
    }
    fn neg_ref(&self) -> Self {
        self.neg()
    }
    fn scale_q(&self, f: &Q) -> Self {
        Poly::scale_q(self, f)
    }
    fn from_q(v: Q) -> Self {
        Poly::from_q(v)
    }
}

impl fmt::Display for JetPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            let neg = c.is_negative();
            let a = c.abs();
            let body = match (m.is_one(), a.is_one()) {
                (true, _) => fmt_rational(&a),
                (false, true) => m.to_string(),
                (false, false) => format!("{}*{}", fmt_rational(&a), m),
            };
            match (first, neg) {
                (true, true) => write!(f, "-{body}")?,
                (true, false) => write!(f, "{body}")?,
                (false, true) => write!(f, " - {body}")?,
                (false, false) => write!(f, " + {body}")?,
            }
            first = false;
        }
        Ok(())
    }
}

impl fmt::Display for CJetPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (re, im) = (self.re(), self.im());
        match (re.is_zero(), im.is_zero()) {
            (_, true) => write!(f, "{re}"),
            (true, false) => write!(f, "i*({im})"),
            (false, false) => write!(f, "{re} + i*({im})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print_roundtrip() {
        let p = JetPoly::parse("2*a2 - 4*a1^3 + 1/2").unwrap();
        let again = JetPoly::parse(&p.to_string()).unwrap();
        assert_eq!(p, again);
        assert_eq!(p.coeff(&JetMonomial::parse("a1^3").unwrap()), q(-4));
    }

    #[test]
    fn floats_rejected() {
        assert!(parse_rational("0.5").is_err());
        assert!(parse_rational("1e3").is_err());
        assert_eq!(parse_rational("-3/6").unwrap(), qr(-1, 2));
    }

    #[test]
    fn weights() {
        assert_eq!(JetMonomial::parse("a1^3").unwrap().weight(), 3);
        assert_eq!(JetMonomial::parse("a2").unwrap().weight(), 3);
        assert_eq!(JetMonomial::parse("a1^2").unwrap().weight(), 2);
    }

    #[test]
    fn substitution() {
        let p = JetPoly::parse("a2 - 2*a1^3").unwrap();
        // ball of radius 1: a1 = 1/2, a2 = 1/4
        assert!(p.substitute(&[qr(1, 2), qr(1, 4)]).is_zero());
    }
}
