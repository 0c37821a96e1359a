use std::time::Instant;

use crate::error::{Error, Result};
use crate::modular::{is_prime, PrimeModulus};
use crate::sieve::g_values;
use crate::verify::lfunction::compute_l1;
use crate::verify::report::{LemmaId, VerificationReport};
use crate::window::{window_value, WINDOW_MASS};

/// Frozen constant `C` in `|S - L(1, chi_q) N W^(0)| <= C sqrt(q)`.
///
/// Calibrated over every prime `q <= 499` with `N in {q, 2q, 4q}`: the
/// largest normalized residual is 1.1603, at `q = 41, N = 164`.
pub const HYPERBOLA_C: f64 = 2.0;

/// Tolerance used for `L(1, chi_q)` in the main term.
const L1_TOL: f64 = 1e-10;

/// `S = sum_n g(n) W(n/N)` against `L(1, chi_q) N W^(0)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HyperbolaSides {
    pub smooth_sum: f64,
    pub main_term: f64,
    /// `|S - main| / sqrt(q)`.
    pub normalized_residual: f64,
}

pub fn hyperbola_sides(q: &PrimeModulus, n_len: u64) -> Result<HyperbolaSides> {
    if n_len < q.q() {
        return Err(Error::InvalidParameter(format!("N = {n_len} is below q = {}", q.q())));
    }
    let g = g_values(n_len, q);
    let smooth_sum: f64 = (n_len.div_ceil(2)..=n_len)
        .map(|n| g[n as usize] as f64 * window_value(n as f64 / n_len as f64))
        .sum();
    let l1 = compute_l1(q, L1_TOL)?;
    let main_term = l1.value * n_len as f64 * WINDOW_MASS;
    Ok(HyperbolaSides {
        smooth_sum,
        main_term,
        normalized_residual: (smooth_sum - main_term).abs() / (q.q() as f64).sqrt(),
    })
}

pub fn verify_hyperbola(q: &PrimeModulus, n_len: u64, c: f64) -> Result<VerificationReport> {
    let start = Instant::now();
    let sides = hyperbola_sides(q, n_len)?;
    Ok(VerificationReport::identity(
        LemmaId::Hyperbola,
        sides.smooth_sum,
        sides.main_term,
        c * (q.q() as f64).sqrt(),
    )
    .with_param("q", q.q())
    .with_param("N", n_len)
    .with_param("C", c)
    .with_param("normalized_residual", sides.normalized_residual)
    .timed(start))
}

/// Largest normalized residual over primes `3 <= q <= q_max` and `N in {q, 2q, 4q}`,
/// with the `(q, N)` where it occurs. This is the scan `HYPERBOLA_C` was frozen from.
pub fn hyperbola_calibration(q_max: u64) -> Result<(f64, u64, u64)> {
    let mut worst = (0.0, 0, 0);
    for qv in (3..=q_max).filter(|&q| is_prime(q)) {
        let q = PrimeModulus::new(qv)?;
        for mult in [1, 2, 4] {
            let r = hyperbola_sides(&q, mult * qv)?.normalized_residual;
            if r > worst.0 {
                worst = (r, qv, mult * qv);
            }
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modular::make_modulus;

    #[test]
    fn examples_at_101() {
        let q = make_modulus(101).unwrap();
        assert!(verify_hyperbola(&q, 101, 10.0).unwrap().pass);
        let near = hyperbola_sides(&q, 101).unwrap();
        let far = hyperbola_sides(&q, 404).unwrap();
        assert!(far.normalized_residual <= 4.0 * near.normalized_residual.max(1e-3));
        assert!(near.main_term > 0.0);
    }

    #[test]
    fn rejects_short_range() {
        let q = make_modulus(101).unwrap();
        assert!(verify_hyperbola(&q, 50, HYPERBOLA_C).is_err());
    }

    #[test]
    fn calibration_below_frozen_constant_small_range() {
        let (worst, q, n) = hyperbola_calibration(100).unwrap();
        assert!(worst <= HYPERBOLA_C);
        assert_eq!((q, n), (41, 164));
        assert!((worst - 1.1603).abs() < 1e-3);
    }
}
