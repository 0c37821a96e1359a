//! Arithmetic modulo an odd prime: primality, primitive roots, discrete
//! logarithms, Legendre symbols, Dirichlet characters and Gauss sums.

use std::collections::HashMap;
use std::f64::consts::TAU;
use std::fmt;
use std::sync::OnceLock;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};

/// Moduli up to this bound get a materialized discrete-log table.
pub const DENSE_INDEX_LIMIT: u64 = 1 << 26;

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

/// Deterministic Miller-Rabin, exact for every `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    // Jim Sinclair's base set covers the whole 64-bit range.
    'witness: for a in [2u64, 325, 9375, 28178, 450775, 9780504, 1795265022] {
        let a = a % n;
        if a == 0 {
            continue;
        }
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Distinct prime factors of `n`, ascending, by trial division.
pub fn distinct_prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p.saturating_mul(p) <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Jacobi symbol `(a/n)` for odd `n`.
pub fn jacobi(a: u64, n: u64) -> i8 {
    debug_assert!(n % 2 == 1);
    let mut a = a % n;
    let mut n = n;
    let mut sign = 1i8;
    while a != 0 {
        let tz = a.trailing_zeros();
        a >>= tz;
        if tz % 2 == 1 && (n % 8 == 3 || n % 8 == 5) {
            sign = -sign;
        }
        if a % 4 == 3 && n % 4 == 3 {
            sign = -sign;
        }
        std::mem::swap(&mut a, &mut n);
        a %= n;
    }
    if n == 1 {
        sign
    } else {
        0
    }
}

/// `e(x) = exp(2 pi i x)` for a rational `num / den`, reduced before the
/// conversion to floating point.
#[inline]
pub fn unit_root(num: u64, den: u64) -> Complex64 {
    let r = num % den;
    Complex64::cis(TAU * (r as f64 / den as f64))
}

struct BabySteps {
    step: u64,
    table: HashMap<u64, u64>,
    giant: u64,
}

enum IndexTable {
    Dense(Vec<u32>),
    OnTheFly(OnceLock<BabySteps>),
}

/// An odd prime modulus with its smallest primitive root and discrete logarithms.
pub struct PrimeModulus {
    q: u64,
    g: u64,
    phi_factors: Vec<u64>,
    index: IndexTable,
}

impl fmt::Debug for PrimeModulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PrimeModulus")
            .field("q", &self.q)
            .field("g", &self.g)
            .finish()
    }
}

impl PrimeModulus {
    /// Certifies `q` prime and builds the primitive-root data.
    pub fn new(q: u64) -> Result<Self> {
        if q == 2 {
            return Err(Error::EvenModulus);
        }
        if !is_prime(q) {
            return Err(Error::NotPrime(q));
        }
        let phi = q - 1;
        let phi_factors = distinct_prime_factors(phi);
        let g = (2..q)
            .find(|&c| phi_factors.iter().all(|&p| pow_mod(c, phi / p, q) != 1))
            .expect("every prime has a primitive root");

        let index = if q <= DENSE_INDEX_LIMIT {
            let mut ind = vec![0u32; q as usize];
            let mut x = 1u64;
            for j in 0..phi {
                ind[x as usize] = j as u32;
                x = x * g % q;
            }
            IndexTable::Dense(ind)
        } else {
            IndexTable::OnTheFly(OnceLock::new())
        };

        Ok(PrimeModulus {
            q,
            g,
            phi_factors,
            index,
        })
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// The smallest primitive root.
    pub fn generator(&self) -> u64 {
        self.g
    }

    pub fn phi(&self) -> u64 {
        self.q - 1
    }

    /// Distinct primes dividing `q - 1`.
    pub fn phi_factors(&self) -> &[u64] {
        &self.phi_factors
    }

    /// `g^j mod q`.
    pub fn power(&self, j: u64) -> u64 {
        pow_mod(self.g, j, self.q)
    }

    /// Discrete logarithm of `n` to base `g`, or `None` when `q | n`.
    pub fn index(&self, n: u64) -> Option<u64> {
        let r = n % self.q;
        if r == 0 {
            return None;
        }
        match &self.index {
            IndexTable::Dense(ind) => Some(ind[r as usize] as u64),
            IndexTable::OnTheFly(cell) => {
                let bs = cell.get_or_init(|| self.baby_steps());
                let mut gamma = r;
                for i in 0..bs.step {
                    if let Some(&j) = bs.table.get(&gamma) {
                        return Some((i * bs.step + j) % self.phi());
                    }
                    gamma = mul_mod(gamma, bs.giant, self.q);
                }
                unreachable!("g generates the unit group")
            }
        }
    }

    fn baby_steps(&self) -> BabySteps {
        let step = (self.phi() as f64).sqrt().ceil() as u64 + 1;
        let mut table = HashMap::with_capacity(step as usize);
        let mut x = 1u64;
        for j in 0..step {
            table.entry(x).or_insert(j);
            x = mul_mod(x, self.g, self.q);
        }
        // g^{-step} = g^{phi - step}
        let giant = pow_mod(self.g, self.phi() - step % self.phi(), self.q);
        BabySteps { step, table, giant }
    }

    /// Multiplicative inverse of a unit.
    pub fn inverse(&self, n: u64) -> Option<u64> {
        let r = n % self.q;
        (r != 0).then(|| pow_mod(r, self.q - 2, self.q))
    }

    /// Legendre symbols of `0, 1, ..., q - 1`.
    pub fn quadratic_table(&self) -> Vec<i8> {
        let mut t = vec![-1i8; self.q as usize];
        t[0] = 0;
        for x in 1..=(self.q - 1) / 2 {
            t[mul_mod(x, x, self.q) as usize] = 1;
        }
        t
    }

    pub fn character(&self, k: u64) -> DirichletCharacter<'_> {
        DirichletCharacter::new(self, k)
    }

    pub fn principal(&self) -> DirichletCharacter<'_> {
        DirichletCharacter::new(self, 0)
    }

    pub fn quadratic(&self) -> DirichletCharacter<'_> {
        DirichletCharacter::new(self, self.phi() / 2)
    }

    /// All `q - 1` characters, ordered by exponent.
    pub fn characters(&self) -> impl Iterator<Item = DirichletCharacter<'_>> + '_ {
        (0..self.phi()).map(move |k| DirichletCharacter::new(self, k))
    }

    fn bin_by_index(&self, offset: u64, coeffs: &[Complex64]) -> Vec<Complex64> {
        let mut bins = vec![Complex64::new(0.0, 0.0); self.phi() as usize];
        for (i, &a) in coeffs.iter().enumerate() {
            if let Some(j) = self.index(offset + i as u64) {
                bins[j as usize] += a;
            }
        }
        bins
    }

    /// `sum_n a_n chi_k(n)` for every exponent `k`, where `coeffs[i]` is
    /// `a_{offset + i}`. One FFT of length `q - 1` after folding by index.
    pub fn twisted_sums(&self, offset: u64, coeffs: &[Complex64]) -> Vec<Complex64> {
        let mut bins = self.bin_by_index(offset, coeffs);
        FftPlanner::new()
            .plan_fft_inverse(bins.len())
            .process(&mut bins);
        bins
    }

    /// `sum_n a_n conj(chi_k(n))` for every exponent `k`.
    pub fn twisted_sums_conj(&self, offset: u64, coeffs: &[Complex64]) -> Vec<Complex64> {
        let mut bins = self.bin_by_index(offset, coeffs);
        FftPlanner::new()
            .plan_fft_forward(bins.len())
            .process(&mut bins);
        bins
    }

    /// Gauss sums of every character, indexed by exponent.
    pub fn gauss_sums(&self) -> Vec<Complex64> {
        let mut bins: Vec<Complex64> = Vec::with_capacity(self.phi() as usize);
        let mut x = 1u64;
        for _ in 0..self.phi() {
            bins.push(unit_root(x, self.q));
            x = mul_mod(x, self.g, self.q);
        }
        FftPlanner::new()
            .plan_fft_inverse(bins.len())
            .process(&mut bins);
        bins
    }
}

/// Builds a [`PrimeModulus`]; `q = 2` and composites are rejected.
pub fn make_modulus(q: u64) -> Result<PrimeModulus> {
    PrimeModulus::new(q)
}

/// Legendre symbol `(n / q)` in `{-1, 0, 1}`.
pub fn legendre(n: i64, q: &PrimeModulus) -> i8 {
    let r = n.rem_euclid(q.q() as i64) as u64;
    jacobi(r, q.q())
}

/// A Dirichlet character modulo a prime, `chi_k(g^j) = e(k j / (q - 1))`.
#[derive(Clone, Copy)]
pub struct DirichletCharacter<'m> {
    modulus: &'m PrimeModulus,
    k: u64,
}

impl fmt::Debug for DirichletCharacter<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "chi_{}(mod {})", self.k, self.modulus.q)
    }
}

impl PartialEq for DirichletCharacter<'_> {
    fn eq(&self, other: &Self) -> bool {
        self.modulus.q == other.modulus.q && self.k == other.k
    }
}

impl<'m> DirichletCharacter<'m> {
    pub fn new(modulus: &'m PrimeModulus, k: u64) -> Self {
        DirichletCharacter {
            modulus,
            k: k % modulus.phi(),
        }
    }

    pub fn modulus(&self) -> &'m PrimeModulus {
        self.modulus
    }

    pub fn exponent(&self) -> u64 {
        self.k
    }

    pub fn is_principal(&self) -> bool {
        self.k == 0
    }

    pub fn is_quadratic(&self) -> bool {
        2 * self.k == self.modulus.phi()
    }

    /// Order in the character group.
    pub fn order(&self) -> u64 {
        let phi = self.modulus.phi();
        phi / gcd(self.k, phi)
    }

    /// `chi(-1) = -1`.
    pub fn is_odd(&self) -> bool {
        self.k % 2 == 1
    }

    pub fn conj(&self) -> Self {
        Self::new(self.modulus, self.modulus.phi() - self.k)
    }

    pub fn pow(&self, e: u64) -> Self {
        let phi = self.modulus.phi();
        Self::new(self.modulus, mul_mod(self.k, e % phi, phi))
    }

    /// Numerator `r` with `chi(n) = e(r / (q - 1))`, or `None` when `q | n`.
    pub fn phase(&self, n: i64) -> Option<u64> {
        let r = n.rem_euclid(self.modulus.q as i64) as u64;
        let j = self.modulus.index(r)?;
        Some(mul_mod(self.k, j, self.modulus.phi()))
    }

    pub fn value(&self, n: i64) -> Complex64 {
        match self.phase(n) {
            Some(r) => unit_root(r, self.modulus.phi()),
            None => Complex64::new(0.0, 0.0),
        }
    }

    /// Direct `q`-term evaluation of `sum_{a=1}^{q} chi(a) e(a/q)`.
    pub fn gauss_sum(&self) -> Complex64 {
        let q = self.modulus.q;
        let phi = self.modulus.phi();
        let mut acc = Complex64::new(0.0, 0.0);
        for a in 1..q {
            let r = self.phase(a as i64).expect("a < q is a unit");
            // e(r/phi + a/q) with the fraction combined over phi * q
            let num = (r as u128 * q as u128 + a as u128 * phi as u128) % (phi as u128 * q as u128);
            let angle = TAU * (num as f64 / (phi as f64 * q as f64));
            acc += Complex64::cis(angle);
        }
        acc
    }
}

/// `char_value(chi, n)`.
pub fn char_value(chi: &DirichletCharacter<'_>, n: i64) -> Complex64 {
    chi.value(n)
}

/// `gauss_sum(chi)`.
pub fn gauss_sum(chi: &DirichletCharacter<'_>) -> Complex64 {
    chi.gauss_sum()
}
