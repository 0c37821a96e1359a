//! Gauss-sum moduli and the twisted Poisson summation formula.

use std::time::Instant;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::modular::{DirichletCharacter, PrimeModulus};
use crate::verify::report::{LemmaId, VerificationReport};
use crate::window::{decay_profile, window_value, SmoothWindow, PROBE_MAX};

/// Above this modulus the Gauss sums come from one FFT instead of `q` direct sums each.
const DIRECT_GAUSS_LIMIT: u64 = 2_000;

/// `||tau(chi)| - sqrt(q)| <= 1e-9 sqrt(q)` for every non-principal `chi`.
pub fn verify_gauss(q: &PrimeModulus) -> VerificationReport {
    let start = Instant::now();
    let root = (q.q() as f64).sqrt();
    let (method, moduli): (&str, Vec<(u64, f64)>) = if q.q() <= DIRECT_GAUSS_LIMIT {
        (
            "direct",
            q.characters()
                .skip(1)
                .map(|chi| (chi.exponent(), chi.gauss_sum().norm()))
                .collect(),
        )
    } else {
        (
            "fft",
            q.gauss_sums()
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, t)| (k as u64, t.norm()))
                .collect(),
        )
    };
    let (worst_k, worst) = moduli
        .into_iter()
        .max_by(|a, b| (a.1 - root).abs().total_cmp(&(b.1 - root).abs()))
        .expect("q >= 3 has a non-principal character");
    VerificationReport::identity(LemmaId::Gauss, worst, root, 1e-9 * root)
        .with_param("q", q.q())
        .with_param("worst_k", worst_k)
        .with_param("method", method)
        .timed(start)
}

/// `sum_n chi(n) W(n/N)`; only `N/2 <= n <= N` can contribute.
pub fn smooth_character_sum(chi: &DirichletCharacter<'_>, n_len: f64) -> Complex64 {
    let lo = (n_len / 2.0).ceil().max(1.0) as i64;
    let hi = n_len.floor() as i64;
    (lo..=hi)
        .map(|n| chi.value(n) * window_value(n as f64 / n_len))
        .sum()
}

/// Compares both sides of
/// `sum_n chi(n) W(n/N) = (N tau(chi) / q) sum_m conj(chi(m)) W^(mN/q)`,
/// with the dual sum cut at the `M` for which the `C_A` tail is below `tol/10`.
pub fn verify_poisson(
    chi: &DirichletCharacter<'_>,
    n_len: f64,
    decay_exponent: u32,
    tol: f64,
    window: &SmoothWindow,
) -> Result<VerificationReport> {
    let start = Instant::now();
    if chi.is_principal() {
        return Err(Error::NonPrimitive);
    }
    if !(n_len > 0.0) {
        return Err(Error::InvalidParameter(format!("N = {n_len} must be positive")));
    }
    let q = chi.modulus().q();
    let lhs = smooth_character_sum(chi, n_len);

    let profile = decay_profile(PROBE_MAX, decay_exponent)?;
    let ratio = n_len / q as f64;
    let cutoff = profile.truncation(ratio, tol / 10.0)?;
    // |rhs error| <= (N / sqrt(q)) * 2M * (per-frequency alias); keep it at tol/100
    let alias_target = tol * (q as f64).sqrt() / (200.0 * n_len * cutoff.max(1) as f64);
    let (transforms, alias) = window.fourier_progression(ratio, cutoff, &profile, alias_target)?;
    let parity = if chi.is_odd() { -1.0 } else { 1.0 };
    let mut dual = Complex64::new(0.0, 0.0);
    for (i, w_hat) in transforms.iter().enumerate() {
        let m = i as i64 + 1;
        let c = chi.value(m).conj();
        // m and -m together; W real gives W^(-t) = conj(W^(t))
        dual += c * (w_hat + parity * w_hat.conj());
    }
    let rhs = dual * chi.gauss_sum() * (n_len / q as f64);

    Ok(VerificationReport::identity(LemmaId::Poisson, lhs, rhs, tol)
        .with_param("q", q)
        .with_param("k", chi.exponent())
        .with_param("order", chi.order())
        .with_param("N", n_len)
        .with_param("A", decay_exponent)
        .with_param("C_A", profile.constant)
        .with_param("M", cutoff)
        .with_param("tail_bound", profile.dual_tail(ratio, cutoff))
        .with_param("alias_bound", alias)
        .timed(start))
}
