//! Certified evaluation of `L(1, chi_q)` for the quadratic character.
//!
//! With `S(n) = sum_{m<=n} chi_q(m)` and `T` a multiple of `q`, partial
//! summation gives
//!
//! ```text
//! L(1, chi_q) = sum_{n<=T} chi_q(n)/n + sum_{n>T} S(n) / (n (n + 1)).
//! ```
//!
//! `S` is `q`-periodic; writing `S = mu + c` with `mu` its mean, the tail
//! is `mu / (T + 1)` plus `sum c(n) / (n (n + 1))`, and Abel summation
//! bounds the latter by `R / ((T + 1)(T + 2))` where `R` is the largest
//! partial sum of `c` over one period. `mu` and `R` are computed exactly.

use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::modular::PrimeModulus;
use crate::verify::report::{LemmaId, VerificationReport};

/// Periods summed sequentially before results are combined; fixed so the
/// floating-point result does not depend on the thread count.
const PERIODS_PER_CHUNK: u64 = 256;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct L1Value {
    pub q: u64,
    pub value: f64,
    /// Certified bound on `|value - L(1, chi_q)|`.
    pub error_bound: f64,
    /// Truncation point `T`.
    pub terms: u64,
}

impl L1Value {
    /// `L(1, chi_q) q^eps`, the quantity a `q^{-eps}` lower bound controls.
    pub fn siegel_ratio(&self, eps: f64) -> f64 {
        self.value * (self.q as f64).powf(eps)
    }
}

/// Exact constants of the periodic tail: `mu` and `R`.
fn tail_constants(chi: &[i8]) -> (f64, f64) {
    let q = chi.len() as i64;
    let mut s = 0i64;
    let mut partial_s = Vec::with_capacity(q as usize);
    for n in 1..=q {
        s += chi[(n % q) as usize] as i64;
        partial_s.push(s);
    }
    let total: i64 = partial_s.iter().sum();
    // q * sum_{n<=j} c(n) = q * sum_{n<=j} S(n) - j * total, kept in integers
    let mut running = 0i128;
    let mut worst = 0i128;
    for (j, &sn) in partial_s.iter().enumerate() {
        running += sn as i128;
        let scaled = q as i128 * running - (j as i128 + 1) * total as i128;
        worst = worst.max(scaled.abs());
    }
    (total as f64 / q as f64, worst as f64 / q as f64)
}

/// `L(1, chi_q)` with certified absolute error below `tol` (unless rounding
/// alone exceeds it, in which case `error_bound` says so).
pub fn compute_l1(q: &PrimeModulus, tol: f64) -> Result<L1Value> {
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!("tolerance {tol} must be positive")));
    }
    let chi = q.quadratic_table();
    let qv = q.q();
    let (mu, spread) = tail_constants(&chi);

    let bound = |t: u64| spread / ((t as f64 + 1.0) * (t as f64 + 2.0));
    let mut periods = ((2.0 * spread / tol).sqrt() / qv as f64).ceil().max(1.0) as u64;
    while bound(periods * qv) > tol / 2.0 {
        periods += 1;
    }
    let terms = periods * qv;

    let chunks: Vec<f64> = (0..periods.div_ceil(PERIODS_PER_CHUNK))
        .into_par_iter()
        .map(|c| {
            let first = c * PERIODS_PER_CHUNK;
            let last = (first + PERIODS_PER_CHUNK).min(periods);
            let mut acc = 0.0f64;
            for k in first..last {
                let base = (k * qv) as f64;
                let mut block = 0.0f64;
                for (a, &x) in chi.iter().enumerate().skip(1) {
                    if x != 0 {
                        block += x as f64 / (base + a as f64);
                    }
                }
                acc += block;
            }
            acc
        })
        .collect();
    let partial: f64 = chunks.iter().sum();

    let log_terms = (terms as f64).ln() + 1.0;
    let rounding = (qv as f64 + PERIODS_PER_CHUNK as f64 + 4.0) * f64::EPSILON * log_terms;
    Ok(L1Value {
        q: qv,
        value: partial + mu / (terms as f64 + 1.0),
        error_bound: bound(terms) + rounding,
        terms,
    })
}

/// The certified bound is honoured: values at `tol` and `tol / 100` differ
/// by at most the sum of their error bounds.
pub fn verify_l1(q: &PrimeModulus, tol: f64, eps: f64) -> Result<VerificationReport> {
    let start = Instant::now();
    let coarse = compute_l1(q, tol)?;
    let fine = compute_l1(q, tol / 100.0)?;
    Ok(VerificationReport::identity(
        LemmaId::Lfunction,
        coarse.value,
        fine.value,
        coarse.error_bound + fine.error_bound,
    )
    .with_param("q", q.q())
    .with_param("terms_coarse", coarse.terms)
    .with_param("terms_fine", fine.terms)
    .with_param("error_bound", fine.error_bound)
    .with_param("epsilon", eps)
    .with_param("siegel_ratio", fine.siegel_ratio(eps))
    .timed(start))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modular::make_modulus;
    use std::f64::consts::PI;

    /// Closed forms for real primitive characters: the class-number formula
    /// for odd `chi`, the cyclotomic-unit formula for even `chi`.
    fn closed_form(qv: u64) -> f64 {
        let q = make_modulus(qv).unwrap();
        let chi = q.quadratic_table();
        let qf = qv as f64;
        if qv % 4 == 3 {
            let s: f64 = (1..qv).map(|a| a as f64 * chi[a as usize] as f64).sum();
            -PI / qf.powf(1.5) * s
        } else {
            let s: f64 = (1..qv)
                .map(|a| chi[a as usize] as f64 * (PI * a as f64 / qf).sin().ln())
                .sum();
            -s / qf.sqrt()
        }
    }

    #[test]
    fn classical_values() {
        let l3 = compute_l1(&make_modulus(3).unwrap(), 1e-8).unwrap();
        assert!((l3.value - PI / (3.0 * 3f64.sqrt())).abs() < 1e-8);
        assert!((l3.value - 0.604_599_788_1).abs() < 1e-6);
        let l5 = compute_l1(&make_modulus(5).unwrap(), 1e-8).unwrap();
        let golden = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((l5.value - 2.0 / 5f64.sqrt() * golden.ln()).abs() < 1e-8);
        assert!((l5.value - 0.430_408_941_0).abs() < 1e-6);
    }

    #[test]
    fn certified_against_closed_forms() {
        for qv in [7u64, 11, 13, 101, 499, 997, 1009] {
            let v = compute_l1(&make_modulus(qv).unwrap(), 1e-7).unwrap();
            let exact = closed_form(qv);
            assert!(v.value > 0.0);
            assert!(v.error_bound < 1e-7);
            assert!((v.value - exact).abs() <= v.error_bound + 1e-11, "q = {qv}");
        }
    }

    #[test]
    fn tail_constants_mod_three() {
        let q = make_modulus(3).unwrap();
        let (mu, spread) = tail_constants(&q.quadratic_table());
        assert!((mu - 1.0 / 3.0).abs() < 1e-15);
        assert!((spread - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn two_levels_agree() {
        let r = verify_l1(&make_modulus(101).unwrap(), 1e-6, 0.1).unwrap();
        assert!(r.pass, "{r:?}");
    }
}
