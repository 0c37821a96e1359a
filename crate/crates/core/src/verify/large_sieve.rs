use std::time::Instant;

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::modular::{DirichletCharacter, PrimeModulus};
use crate::verify::report::{LemmaId, VerificationReport};

/// `sum_chi |sum_{n<=N} a_n chi(n)|^2 <= (N + q) sum_{(n,q)=1} |a_n|^2 + slack`,
/// with `coeffs[i] = a_{i+1}`.
pub fn verify_large_sieve(
    q: &PrimeModulus,
    n_len: u64,
    coeffs: &[Complex64],
    slack: f64,
) -> Result<VerificationReport> {
    let start = Instant::now();
    if coeffs.len() as u64 != n_len {
        return Err(Error::InvalidParameter(format!(
            "{} coefficients for N = {n_len}",
            coeffs.len()
        )));
    }
    let lhs: f64 = q.twisted_sums(1, coeffs).iter().map(|s| s.norm_sqr()).sum();
    let mass: f64 = coeffs
        .iter()
        .enumerate()
        .filter(|(i, _)| (*i as u64 + 1) % q.q() != 0)
        .map(|(_, a)| a.norm_sqr())
        .sum();
    let rhs = (n_len + q.q()) as f64 * mass;
    Ok(VerificationReport::inequality(LemmaId::LargeSieve, lhs, rhs, slack)
        .with_param("q", q.q())
        .with_param("N", n_len)
        .timed(start))
}

/// Coefficients with independent uniform real and imaginary parts in `[-1, 1)`.
pub fn random_coefficients<R: Rng>(rng: &mut R, n_len: u64) -> Vec<Complex64> {
    (0..n_len)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect()
}

/// `a_n = conj(chi(n))`: all the mass lands on a single character.
pub fn concentration_coefficients(chi: &DirichletCharacter<'_>, n_len: u64) -> Vec<Complex64> {
    (1..=n_len as i64).map(|n| chi.value(n).conj()).collect()
}
