//! Counts of split primes (`chi_q(p) = 1`) in dyadic blocks, their
//! reciprocal sum by two routes, and the sign counts of small primes.

use std::time::Instant;

use serde::Serialize;

use crate::modular::{legendre, PrimeModulus};
use crate::sieve::{isqrt, primes_in};
use crate::verify::report::{LemmaId, VerificationReport};

/// `E(N)` over the block `(N/2, N]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DyadicCount {
    pub n: u64,
    pub count: u64,
    /// The same count restricted to `p <= q`.
    pub count_to_q: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExceptionalStats {
    pub q: u64,
    pub delta: f64,
    pub dyadic: Vec<DyadicCount>,
    /// `E*(q)`: split primes `p <= q`.
    pub e_star: u64,
    /// `sum_k E(2^k)` over the blocks, which may reach past `q`.
    pub dyadic_total: u64,
    pub reciprocal_sum: f64,
    /// The same sum as `E*(q)/q + int_1^q E*(t)/t^2 dt`.
    pub reciprocal_sum_partial: f64,
    /// Split primes `p <= sqrt(q)`.
    pub f: u64,
    /// Inert primes `p <= sqrt(q)`.
    pub g: u64,
    pub pi_sqrt: u64,
    /// `max_N E(N) / (N q^{-3 delta / 4})`.
    pub max_block_ratio: f64,
    /// `reciprocal_sum / q^{-delta/2}`.
    pub reciprocal_ratio: f64,
}

pub fn exceptional_stats(q: &PrimeModulus, delta: f64) -> ExceptionalStats {
    let qv = q.q();
    let mut top = 1u64;
    while top * 2 <= 2 * qv {
        top *= 2;
    }
    let primes = primes_in(2, top + 1);
    let split: Vec<u64> = primes
        .iter()
        .copied()
        .filter(|&p| legendre(p as i64, q) == 1)
        .collect();

    let mut dyadic = Vec::new();
    let mut n = 1u64;
    while n <= top {
        let in_block = |p: &&u64| 2 * **p > n && **p <= n;
        let count = split.iter().filter(in_block).count() as u64;
        let count_to_q = split.iter().filter(in_block).filter(|&&p| p <= qv).count() as u64;
        dyadic.push(DyadicCount { n, count, count_to_q });
        n *= 2;
    }

    let upto_q: Vec<u64> = split.iter().copied().filter(|&p| p <= qv).collect();
    let e_star = upto_q.len() as u64;
    let reciprocal_sum: f64 = upto_q.iter().map(|&p| 1.0 / p as f64).sum();
    // E*(t) = i on [p_i, p_{i+1}), the last step running to q
    let mut integral = 0.0;
    for (i, &p) in upto_q.iter().enumerate() {
        let next = upto_q.get(i + 1).copied().unwrap_or(qv);
        integral += (i + 1) as f64 * (1.0 / p as f64 - 1.0 / next as f64);
    }
    let reciprocal_sum_partial = e_star as f64 / qv as f64 + integral;

    let root = isqrt(qv);
    let small = primes_in(2, root + 1);
    let f = small.iter().filter(|&&p| legendre(p as i64, q) == 1).count() as u64;
    let g = small.iter().filter(|&&p| legendre(p as i64, q) == -1).count() as u64;

    let qf = qv as f64;
    let max_block_ratio = dyadic
        .iter()
        .map(|d| d.count as f64 / (d.n as f64 * qf.powf(-0.75 * delta)))
        .fold(0.0, f64::max);
    ExceptionalStats {
        q: qv,
        delta,
        dyadic_total: dyadic.iter().map(|d| d.count).sum(),
        dyadic,
        e_star,
        reciprocal_sum,
        reciprocal_sum_partial,
        f,
        g,
        pi_sqrt: small.len() as u64,
        max_block_ratio,
        reciprocal_ratio: reciprocal_sum / qf.powf(-0.5 * delta),
    }
}

/// Residual is the larger of the two-route reciprocal-sum gap and the
/// integer defects in `F + G = pi(sqrt q)` and the clipped dyadic total.
pub fn verify_exceptional(q: &PrimeModulus, delta: f64) -> VerificationReport {
    let start = Instant::now();
    let s = exceptional_stats(q, delta);
    let clipped: u64 = s.dyadic.iter().map(|d| d.count_to_q).sum();
    let integer_defect = (s.f + s.g).abs_diff(s.pi_sqrt) + clipped.abs_diff(s.e_star);
    let residual = (s.reciprocal_sum - s.reciprocal_sum_partial)
        .abs()
        .max(integer_defect as f64);
    VerificationReport::identity(LemmaId::Exceptional, s.reciprocal_sum, s.reciprocal_sum_partial, 1e-9)
        .with_residual(residual)
        .with_param("q", s.q)
        .with_param("delta", delta)
        .with_param("e_star", s.e_star)
        .with_param("dyadic_total", s.dyadic_total)
        .with_param("F", s.f)
        .with_param("G", s.g)
        .with_param("pi_sqrt", s.pi_sqrt)
        .with_param("max_block_ratio", s.max_block_ratio)
        .with_param("reciprocal_ratio", s.reciprocal_ratio)
        .timed(start)
}
