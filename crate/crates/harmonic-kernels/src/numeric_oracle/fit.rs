//! Least-squares fits of sampled kernels against expansion shapes.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel_transform::{eval_tpoly, with_pi, KernelExpansion};

/// `d^power`, times `log d` when `log`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BasisTerm {
    pub power: i32,
    pub log: bool,
}

impl BasisTerm {
    pub fn pow(power: i32) -> Self {
        BasisTerm { power, log: false }
    }

    pub fn pow_log(power: i32) -> Self {
        BasisTerm { power, log: true }
    }

    pub fn eval(&self, d: f64) -> f64 {
        let v = d.powi(self.power);
        if self.log {
            v * d.ln()
        } else {
            v
        }
    }

    pub fn name(&self) -> String {
        match (self.power, self.log) {
            (0, false) => "1".into(),
            (1, false) => "d".into(),
            (p, false) => format!("d^{p}"),
            (0, true) => "log d".into(),
            (1, true) => "d log d".into(),
            (p, true) => format!("d^{p} log d"),
        }
    }

    /// Inverse of [`BasisTerm::name`].
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        let (body, log) = match s.strip_suffix("log d") {
            Some(b) => (b.trim(), true),
            None => (s, false),
        };
        let power = match body {
            "" if log => 0,
            "1" if !log => 0,
            "d" => 1,
            b => b
                .strip_prefix("d^")
                .and_then(|p| p.parse().ok())
                .ok_or_else(|| Error::Parse(format!("`{s}` is not a basis term (d^p or d^p log d)")))?,
        };
        Ok(BasisTerm { power, log })
    }
}

/// Fitted coefficients with their symbolic predictions.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NumericReport {
    pub basis: Vec<String>,
    pub coefficients: Vec<f64>,
    pub predicted: Vec<Option<f64>>,
    /// `|fit − prediction|/|prediction|` (absolute when the prediction is 0).
    pub relative_error: Vec<Option<f64>>,
    pub condition_number: f64,
    pub residual_rms: f64,
}

impl NumericReport {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Coefficient of a basis term by name.
    pub fn coefficient(&self, name: &str) -> Option<f64> {
        self.basis.iter().position(|b| b == name).map(|i| self.coefficients[i])
    }
}

/// Largest condition number accepted by the fitter.
pub const MAX_CONDITION: f64 = 1e12;

/// Least-squares fit of `samples = [(d, value)]` in the given basis.
/// Columns are scaled to unit norm before the SVD, so the reported condition
/// number is that of the equilibrated design matrix.
pub fn fit_boundary_expansion(
    samples: &[(f64, f64)],
    basis: &[BasisTerm],
    predicted: &[Option<f64>],
) -> Result<NumericReport> {
    let (m, k) = (samples.len(), basis.len());
    if k == 0 || m < 2 * k {
        return Err(Error::Parameter(format!("need at least {} samples for {k} basis terms, got {m}", 2 * k)));
    }
    if predicted.len() != k && !predicted.is_empty() {
        return Err(Error::Parameter("one prediction per basis term expected".into()));
    }
    let mut a = DMatrix::from_fn(m, k, |i, j| basis[j].eval(samples[i].0));
    let b = DVector::from_iterator(m, samples.iter().map(|s| s.1));
    let scale: Vec<f64> = (0..k).map(|j| a.column(j).norm()).collect();
    for (j, s) in scale.iter().enumerate() {
        if *s == 0.0 {
            return Err(Error::RankDeficient { condition: f64::INFINITY });
        }
        a.column_mut(j).scale_mut(1.0 / s);
    }
    let svd = a.clone().svd(true, true);
    let (smax, smin) = (svd.singular_values.max(), svd.singular_values.min());
    let condition = if smin > 0.0 { smax / smin } else { f64::INFINITY };
    if condition > MAX_CONDITION {
        return Err(Error::RankDeficient { condition });
    }
    let x = svd.solve(&b, 0.0).map_err(|e| Error::Solver(e.to_string()))?;
    let residual = &a * &x - &b;
    let coefficients: Vec<f64> = x.iter().zip(&scale).map(|(c, s)| c / s).collect();
    let predicted: Vec<Option<f64>> = if predicted.is_empty() { vec![None; k] } else { predicted.to_vec() };
    let relative_error = predicted
        .iter()
        .zip(&coefficients)
        .map(|(p, c)| p.map(|p| if p == 0.0 { c.abs() } else { ((c - p) / p).abs() }))
        .collect();
    Ok(NumericReport {
        basis: basis.iter().map(BasisTerm::name).collect(),
        coefficients,
        predicted,
        relative_error,
        condition_number: condition,
        residual_rms: (residual.norm_squared() / m as f64).sqrt(),
    })
}

/// Basis and predicted coefficients of a Poisson expansion on the normal
/// ray through the chart center (`t = 1`), with a numeric jet.
pub fn basis_from_expansion(exp: &KernelExpansion, jet: &[f64]) -> (Vec<BasisTerm>, Vec<Option<f64>>) {
    let mut out: Vec<(BasisTerm, f64)> = Vec::new();
    for t in exp.terms() {
        let c = eval_tpoly(&t.coeff, &[1.0, 0.0], jet) * with_pi(&num_traits::One::one(), t.pi_power);
        let bt = BasisTerm { power: t.power, log: t.log };
        match out.iter_mut().find(|(b, _)| *b == bt) {
            Some(e) => e.1 += c,
            None => out.push((bt, c)),
        }
    }
    out.sort_by_key(|a| a.0);
    out.into_iter().map(|(b, c)| (b, Some(c))).unzip()
}

/// Samples at `count` log-spaced distances in `[lo, hi]`.
pub fn log_spaced(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..count).map(|i| (a + (b - a) * i as f64 / (count - 1).max(1) as f64).exp()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel_transform::c_n;

    #[test]
    fn exact_kernel_is_recovered() {
        let c = c_n(3);
        let samples: Vec<(f64, f64)> = log_spaced(0.01, 0.3, 40).into_iter().map(|d| (d, c / (d * d))).collect();
        let basis = [BasisTerm::pow(-2), BasisTerm::pow(-1), BasisTerm::pow(0), BasisTerm::pow_log(1)];
        let r = fit_boundary_expansion(&samples, &basis, &[Some(c), Some(0.0), Some(0.0), Some(0.0)]).unwrap();
        assert!(r.relative_error[0].unwrap() < 1e-10);
        for e in &r.relative_error[1..] {
            assert!(e.unwrap() < 1e-10 * c / 0.01);
        }
    }

    #[test]
    fn names_round_trip() {
        for p in -4..4 {
            for log in [false, true] {
                let b = BasisTerm { power: p, log };
                assert_eq!(BasisTerm::parse(&b.name()).unwrap(), b);
            }
        }
        assert!(BasisTerm::parse("x^2").is_err());
    }

    #[test]
    fn duplicate_columns_are_rank_deficient() {
        let samples: Vec<(f64, f64)> = log_spaced(0.1, 1.0, 10).into_iter().map(|d| (d, d)).collect();
        let basis = [BasisTerm::pow(1), BasisTerm::pow(1)];
        assert!(matches!(fit_boundary_expansion(&samples, &basis, &[]), Err(Error::RankDeficient { .. })));
    }
}
