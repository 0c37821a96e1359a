//! The Fourier expansion of `lambda` over characters mod `q`, and the checks
//! built on it: Parseval, inversion, the key identity and the Hölder chain.

use std::time::Instant;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::modular::{legendre, unit_root, PrimeModulus};
use crate::sieve::{liouville, liouville_segment, primes_in};
use crate::verify::report::{LemmaId, VerificationReport};
use crate::window::window_value;

/// `lambda^(chi_k) = sum_{x=1}^{q-1} lambda(x) conj(chi_k(x))` for every `k`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FourierSpectrum {
    pub q: u64,
    pub coefficients: Vec<Complex64>,
}

impl FourierSpectrum {
    pub fn phi(&self) -> u64 {
        self.q - 1
    }

    pub fn coefficient(&self, k: u64) -> Complex64 {
        self.coefficients[(k % self.phi()) as usize]
    }

    pub fn principal(&self) -> Complex64 {
        self.coefficients[0]
    }

    pub fn quadratic(&self) -> Complex64 {
        self.coefficients[(self.phi() / 2) as usize]
    }

    /// `(1/phi) sum |lambda^(chi)|^2`.
    pub fn mean_square(&self) -> f64 {
        self.coefficients.iter().map(|c| c.norm_sqr()).sum::<f64>() / self.phi() as f64
    }
}

fn lambda_below_q(q: &PrimeModulus) -> Result<Vec<i8>> {
    Ok(liouville_segment(1, q.q())?.values().to_vec())
}

pub fn fourier_spectrum(q: &PrimeModulus) -> Result<FourierSpectrum> {
    let coeffs: Vec<Complex64> = lambda_below_q(q)?
        .into_iter()
        .map(|v| Complex64::new(v as f64, 0.0))
        .collect();
    Ok(FourierSpectrum {
        q: q.q(),
        coefficients: q.twisted_sums_conj(1, &coeffs),
    })
}

/// Parseval on a given spectrum: `(1/phi) sum |c|^2 = phi`.
pub fn parseval_report(spectrum: &FourierSpectrum, tol: f64) -> VerificationReport {
    VerificationReport::identity(
        LemmaId::Parseval,
        spectrum.mean_square(),
        spectrum.phi() as f64,
        tol,
    )
    .with_param("q", spectrum.q)
}

pub fn verify_parseval(q: &PrimeModulus, tol: f64) -> Result<VerificationReport> {
    let start = Instant::now();
    let spectrum = fourier_spectrum(q)?;
    Ok(parseval_report(&spectrum, tol).timed(start))
}

/// Rebuilds `lambda(n)` for every `1 <= n < q` from the spectrum, summing
/// characters directly (no FFT), and reports the worst deviation.
pub fn verify_inversion(q: &PrimeModulus, tol: f64) -> Result<VerificationReport> {
    let start = Instant::now();
    let spectrum = fourier_spectrum(q)?;
    let lambda = lambda_below_q(q)?;
    let phi = q.phi();
    let mut worst = (0u64, Complex64::new(0.0, 0.0), 0i8, -1.0f64);
    for n in 1..q.q() {
        let j = q.index(n).expect("unit");
        let mut acc = Complex64::new(0.0, 0.0);
        for (k, c) in spectrum.coefficients.iter().enumerate() {
            acc += c * unit_root((k as u64 * j) % phi, phi);
        }
        let recon = acc / phi as f64;
        let target = lambda[(n - 1) as usize];
        let dev = (recon - target as f64).norm();
        if dev > worst.3 {
            worst = (n, recon, target, dev);
        }
    }
    Ok(
        VerificationReport::identity(LemmaId::Inversion, worst.1, worst.2 as f64, tol)
            .with_param("q", q.q())
            .with_param("worst_n", worst.0)
            .timed(start),
    )
}

/// The sign `kappa'` that best matches `lambda` to `kappa' chi_q` on `[1, q)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SignCorrelation {
    pub kappa: i8,
    pub exceptions: u64,
    pub exceptions_plus: u64,
    pub exceptions_minus: u64,
}

/// Diagnostic only: for the true `lambda` both counts sit near `phi/2`.
pub fn dominant_sign_correlation(q: &PrimeModulus) -> Result<SignCorrelation> {
    let lambda = lambda_below_q(q)?;
    let chi = q.quadratic_table();
    let mut plus = 0;
    let mut minus = 0;
    for (i, &l) in lambda.iter().enumerate() {
        if l == chi[i + 1] {
            minus += 1; // matches +chi, so it is an exception for -chi
        } else {
            plus += 1;
        }
    }
    let (kappa, exceptions) = if plus <= minus { (1, plus) } else { (-1, minus) };
    Ok(SignCorrelation {
        kappa,
        exceptions,
        exceptions_plus: plus,
        exceptions_minus: minus,
    })
}

fn half_ceil(x: u64) -> u64 {
    x.div_ceil(2)
}

/// Primes `p` in `[P/2, P]`, closed at both ends, with `p != q`.
fn dyadic_primes(p_cap: u64, q: u64) -> Vec<u64> {
    primes_in(half_ceil(p_cap), p_cap + 1)
        .into_iter()
        .filter(|&p| p != q)
        .collect()
}

/// Checks `|sum lambda(n^2 p) W(n/N)| = sum W(n/N)` over `N/2 <= n <= N`,
/// primes `P/2 <= p <= P`, `(np, q) = 1`. Each `lambda(n^2 p)` is
/// evaluated by factoring, not assumed.
pub fn key_identity_check(q: &PrimeModulus, n_len: u64, p_cap: u64) -> Result<VerificationReport> {
    let start = Instant::now();
    let primes = dyadic_primes(p_cap, q.q());
    let mut signed = 0.0f64;
    let mut weight = 0.0f64;
    let mut terms = 0u64;
    let mut positive = 0u64;
    for n in half_ceil(n_len)..=n_len {
        if n == 0 || n % q.q() == 0 {
            continue;
        }
        let w = window_value(n as f64 / n_len as f64);
        for &p in &primes {
            let m = n
                .checked_mul(n)
                .and_then(|s| s.checked_mul(p))
                .ok_or_else(|| Error::InvalidParameter(format!("n^2 p overflows for n = {n}")))?;
            let l = liouville(m);
            if l == 1 {
                positive += 1;
            }
            signed += l as f64 * w;
            weight += w;
            terms += 1;
        }
    }
    let lhs = signed.abs();
    Ok(
        VerificationReport::identity(LemmaId::KeyIdentity, lhs, weight, 1e-12 * weight.max(1.0))
            .with_param("q", q.q())
            .with_param("N", n_len)
            .with_param("P", p_cap)
            .with_param("terms", terms)
            .with_param("positive_terms", positive)
            .timed(start),
    )
}

/// The three averaged power sums of the `(2, 4, 4)` Hölder step and the
/// character sum they bound.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HolderFactors {
    pub q: u64,
    pub n_len: u64,
    pub p_cap: u64,
    pub sigma: f64,
    /// `(1/phi) sum_chi |lambda^(chi)|^2`, evaluated through Parseval as the
    /// integer `sum_{x<q} lambda(x)^2`.
    pub t1: f64,
    /// The same mean square summed over the computed spectrum.
    pub t1_spectral: f64,
    /// `(1/phi) sum_{chi != chi_0, chi_q} |sum_n chi^2(n) W(n/N)|^4`.
    pub t2: f64,
    /// `(1/phi) sum_chi |sum_{P/2 <= p <= P} chi(p)|^4`.
    pub t3: f64,
    /// `(1/phi) |sum_{chi != chi_0, chi_q} lambda^(chi) S_W(chi^2) S_P(chi)|`.
    pub lhs_triple: f64,
    pub bound: f64,
    /// `T2 / (N^2 q^{3 sigma})`, the normalization the dual-sum estimate predicts.
    pub t2_scaled: f64,
}

pub fn holder_factors(q: &PrimeModulus, n_len: u64, p_cap: u64, sigma: f64) -> Result<HolderFactors> {
    if !(sigma > 0.0 && sigma < 1.0) {
        return Err(Error::InvalidParameter(format!("sigma = {sigma} not in (0, 1)")));
    }
    if n_len < 2 || p_cap < 2 {
        return Err(Error::InvalidParameter(format!("N = {n_len}, P = {p_cap}; both must be >= 2")));
    }
    let phi = q.phi();
    let spectrum = fourier_spectrum(q)?;

    let weights: Vec<Complex64> = (1..=n_len)
        .map(|n| Complex64::new(window_value(n as f64 / n_len as f64), 0.0))
        .collect();
    let window_sums = q.twisted_sums(1, &weights);

    let lo = half_ceil(p_cap);
    let mut indicator = vec![Complex64::new(0.0, 0.0); (p_cap + 1 - lo) as usize];
    for p in dyadic_primes(p_cap, q.q()) {
        indicator[(p - lo) as usize] = Complex64::new(1.0, 0.0);
    }
    let prime_sums = q.twisted_sums(lo, &indicator);

    let quad = phi / 2;
    let mut t2 = 0.0;
    let mut triple = Complex64::new(0.0, 0.0);
    for k in 0..phi {
        if k == 0 || k == quad {
            continue;
        }
        let sw = window_sums[((2 * k) % phi) as usize];
        t2 += sw.norm_sqr().powi(2);
        triple += spectrum.coefficients[k as usize] * sw * prime_sums[k as usize];
    }
    let phi_f = phi as f64;
    let t1 = lambda_below_q(q)?.iter().map(|&v| (v as i64 * v as i64) as u64).sum::<u64>() as f64;
    let t1_spectral = spectrum.mean_square();
    let t2 = t2 / phi_f;
    let t3 = prime_sums.iter().map(|s| s.norm_sqr().powi(2)).sum::<f64>() / phi_f;
    let lhs_triple = triple.norm() / phi_f;
    let bound = t1.sqrt() * t2.powf(0.25) * t3.powf(0.25);
    let scale = (n_len as f64).powi(2) * (q.q() as f64).powf(3.0 * sigma);
    Ok(HolderFactors {
        q: q.q(),
        n_len,
        p_cap,
        sigma,
        t1,
        t1_spectral,
        t2,
        t3,
        lhs_triple,
        bound,
        t2_scaled: t2 / scale,
    })
}

pub fn verify_holder(q: &PrimeModulus, n_len: u64, p_cap: u64, sigma: f64) -> Result<VerificationReport> {
    let start = Instant::now();
    let h = holder_factors(q, n_len, p_cap, sigma)?;
    Ok(
        VerificationReport::inequality(LemmaId::Holder, h.lhs_triple, h.bound, 1e-9)
            .with_param("q", h.q)
            .with_param("N", h.n_len)
            .with_param("P", h.p_cap)
            .with_param("sigma", h.sigma)
            .with_param("T1", h.t1)
            .with_param("T1_spectral", h.t1_spectral)
            .with_param("T2", h.t2)
            .with_param("T3", h.t3)
            .with_param("phi", q.phi())
            .with_param("T2_scaled", h.t2_scaled)
            .timed(start),
    )
}

/// `lambda^(chi_q) = sum_{n<q} lambda(n) chi_q(n)`, evaluated in integers.
pub fn quadratic_coefficient_exact(q: &PrimeModulus) -> Result<i64> {
    Ok(lambda_below_q(q)?
        .iter()
        .enumerate()
        .map(|(i, &l)| l as i64 * legendre(i as i64 + 1, q) as i64)
        .sum())
}
