//! Segmented Liouville sieve, prime enumeration and the divisor sum
//! `g = 1 * chi_q`.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::modular::{legendre, PrimeModulus};

/// Default cap on the number of entries a single table may hold.
pub const DEFAULT_SEGMENT_BUDGET: u64 = 1 << 26;

/// Inner block length; keeps the per-block cofactor scratch in cache.
const BLOCK: u64 = 1 << 15;

/// Integer square root.
pub fn isqrt(n: u64) -> u64 {
    if n < 2 {
        return n;
    }
    let mut r = (n as f64).sqrt() as u64;
    while r.saturating_mul(r) > n {
        r -= 1;
    }
    while (r + 1).saturating_mul(r + 1) <= n {
        r += 1;
    }
    r
}

/// Primes `<= limit` by the sieve of Eratosthenes.
pub fn small_primes(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i.saturating_mul(i);
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

/// The primes in `[lo, hi)`, ascending.
pub fn primes_in(lo: u64, hi: u64) -> Vec<u64> {
    let lo = lo.max(2);
    if lo >= hi {
        return Vec::new();
    }
    let base = small_primes(isqrt(hi - 1));
    let mut out = Vec::new();
    let mut start = lo;
    while start < hi {
        let end = (start + BLOCK).min(hi);
        let mut composite = vec![false; (end - start) as usize];
        for &p in &base {
            let first = (p * p).max(start.div_ceil(p) * p);
            let mut m = first;
            while m < end {
                composite[(m - start) as usize] = true;
                m += p;
            }
        }
        out.extend(
            composite
                .iter()
                .enumerate()
                .filter(|(_, &c)| !c)
                .map(|(i, _)| start + i as u64),
        );
        start = end;
    }
    out
}

/// Liouville values on a half-open segment `[lo, hi)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LiouvilleTable {
    lo: u64,
    values: Vec<i8>,
}

impl LiouvilleTable {
    pub fn lo(&self) -> u64 {
        self.lo
    }

    pub fn hi(&self) -> u64 {
        self.lo + self.values.len() as u64
    }

    pub fn values(&self) -> &[i8] {
        &self.values
    }

    pub fn contains(&self, n: u64) -> bool {
        n >= self.lo && n < self.hi()
    }

    /// `lambda(n)`; panics outside the segment.
    pub fn get(&self, n: u64) -> i8 {
        assert!(self.contains(n), "{n} outside [{}, {})", self.lo, self.hi());
        self.values[(n - self.lo) as usize]
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, i8)> + '_ {
        self.values
            .iter()
            .enumerate()
            .map(move |(i, &v)| (self.lo + i as u64, v))
    }
}

/// Sieves `lambda` over `[lo, hi)` with the default budget.
pub fn liouville_segment(lo: u64, hi: u64) -> Result<LiouvilleTable> {
    liouville_segment_with_budget(lo, hi, DEFAULT_SEGMENT_BUDGET)
}

pub fn liouville_segment_with_budget(lo: u64, hi: u64, budget: u64) -> Result<LiouvilleTable> {
    check_segment(lo, hi, budget)?;
    let base = small_primes(isqrt(hi - 1));
    let mut values = Vec::with_capacity((hi - lo) as usize);
    let mut start = lo;
    while start < hi {
        let end = (start + BLOCK).min(hi);
        sieve_block(start, end, &base, &mut values);
        start = end;
    }
    Ok(LiouvilleTable { lo, values })
}

/// Same table as [`liouville_segment`], with blocks spread over the rayon pool.
pub fn liouville_segment_par(lo: u64, hi: u64, budget: u64) -> Result<LiouvilleTable> {
    check_segment(lo, hi, budget)?;
    let base = small_primes(isqrt(hi - 1));
    let starts: Vec<u64> = (lo..hi).step_by(BLOCK as usize).collect();
    let blocks: Vec<Vec<i8>> = starts
        .par_iter()
        .map(|&s| {
            let mut v = Vec::with_capacity(BLOCK as usize);
            sieve_block(s, (s + BLOCK).min(hi), &base, &mut v);
            v
        })
        .collect();
    Ok(LiouvilleTable {
        lo,
        values: blocks.concat(),
    })
}

fn check_segment(lo: u64, hi: u64, budget: u64) -> Result<()> {
    if lo < 1 || lo >= hi {
        return Err(Error::InvalidSegment { lo, hi });
    }
    if hi - lo > budget {
        return Err(Error::SegmentTooLarge {
            len: hi - lo,
            budget,
        });
    }
    Ok(())
}

/// Appends `lambda(n)` for `n` in `[start, end)`. `base` must hold every
/// prime up to `sqrt(end - 1)`.
fn sieve_block(start: u64, end: u64, base: &[u64], out: &mut Vec<i8>) {
    let len = (end - start) as usize;
    let mut parity = vec![0u8; len];
    let mut found = vec![1u64; len];
    for &p in base {
        if p * p >= end {
            break;
        }
        let mut pk = p;
        loop {
            let mut m = start.div_ceil(pk) * pk;
            while m < end {
                let i = (m - start) as usize;
                parity[i] ^= 1;
                found[i] *= p;
                m += pk;
            }
            match pk.checked_mul(p) {
                Some(next) if next < end => pk = next,
                _ => break,
            }
        }
    }
    for i in 0..len {
        let n = start + i as u64;
        // whatever is left over is a single prime above sqrt(n)
        if found[i] != n {
            parity[i] ^= 1;
        }
        out.push(if parity[i] == 0 { 1 } else { -1 });
    }
}

/// `Omega(n)`, prime factors counted with multiplicity, by trial division.
pub fn big_omega(mut n: u64) -> u32 {
    assert!(n >= 1);
    let mut count = 0;
    let mut p = 2u64;
    while p.saturating_mul(p) <= n {
        while n % p == 0 {
            n /= p;
            count += 1;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        count += 1;
    }
    count
}

/// `lambda(n) = (-1)^Omega(n)` by direct factorization.
pub fn liouville(n: u64) -> i8 {
    if big_omega(n) % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Prime factorization as `(p, e)` pairs, ascending.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p.saturating_mul(p) <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// All divisors of `n`, unsorted.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut divs = vec![1u64];
    for (p, e) in factorize(n) {
        let len = divs.len();
        let mut pk = 1;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                divs.push(divs[i] * pk);
            }
        }
    }
    divs
}

/// `tau(n)`, the number of divisors.
pub fn divisor_count(n: u64) -> u64 {
    factorize(n).iter().map(|&(_, e)| e as u64 + 1).product()
}

/// `g(n) = sum_{d | n} (d / q)` by enumerating divisors.
pub fn g_value(n: u64, q: &PrimeModulus) -> i64 {
    assert!(n >= 1);
    divisors(n)
        .into_iter()
        .map(|d| legendre(d as i64, q) as i64)
        .sum()
}

/// `g(0..=n_max)` in one pass of the Dirichlet convolution sieve; index 0 is 0.
pub fn g_values(n_max: u64, q: &PrimeModulus) -> Vec<i64> {
    let chi = q.quadratic_table();
    let qq = q.q();
    let n = n_max as usize;
    let mut g = vec![0i64; n + 1];
    for d in 1..=n {
        let c = chi[(d as u64 % qq) as usize] as i64;
        if c == 0 {
            continue;
        }
        let mut m = d;
        while m <= n {
            g[m] += c;
            m += d;
        }
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modular::make_modulus;
    use proptest::prelude::*;

    fn trial_primes(lo: u64, hi: u64) -> Vec<u64> {
        (lo..hi)
            .filter(|&n| n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0))
            .collect()
    }

    #[test]
    fn first_sixteen_values() {
        let t = liouville_segment(1, 17).unwrap();
        assert_eq!(
            t.values(),
            &[1, -1, -1, 1, -1, 1, -1, -1, 1, 1, -1, -1, -1, 1, 1, 1]
        );
        assert_eq!(t.get(12), -1);
        assert_eq!(t.get(1), 1);
    }

    #[test]
    fn single_values() {
        assert_eq!(liouville(1), 1);
        assert_eq!(liouville(2), -1);
        assert_eq!(liouville(4), 1);
        // 360 = 2^3 3^2 5
        assert_eq!(big_omega(360), 6);
        assert_eq!(liouville(360), 1);
    }

    #[test]
    fn segment_errors() {
        assert_eq!(
            liouville_segment(0, 10).unwrap_err(),
            Error::InvalidSegment { lo: 0, hi: 10 }
        );
        assert_eq!(
            liouville_segment(5, 5).unwrap_err(),
            Error::InvalidSegment { lo: 5, hi: 5 }
        );
        assert_eq!(
            liouville_segment_with_budget(1, 1000, 100).unwrap_err(),
            Error::SegmentTooLarge {
                len: 999,
                budget: 100
            }
        );
    }

    #[test]
    fn segment_matches_factorization_across_blocks() {
        let lo = 1_000_000_000_000 - 50_000;
        let t = liouville_segment(lo, lo + 100_000).unwrap();
        for n in (lo..lo + 100_000).step_by(97) {
            assert_eq!(t.get(n), liouville(n), "n = {n}");
        }
        let small = liouville_segment(1, 200_000).unwrap();
        for (n, v) in small.iter().step_by(7) {
            assert_eq!(v, liouville(n), "n = {n}");
        }
    }

    #[test]
    fn parallel_segment_is_identical() {
        let a = liouville_segment(3, 300_003).unwrap();
        let b = liouville_segment_par(3, 300_003, DEFAULT_SEGMENT_BUDGET).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn primes_examples() {
        assert_eq!(primes_in(10, 20), vec![11, 13, 17, 19]);
        assert_eq!(primes_in(2, 3), vec![2]);
        assert_eq!(primes_in(24, 29), Vec::<u64>::new());
        assert_eq!(primes_in(0, 2), Vec::<u64>::new());
        assert_eq!(primes_in(0, 2_000), trial_primes(0, 2_000));
        assert_eq!(primes_in(99_000, 101_000), trial_primes(99_000, 101_000));
    }

    #[test]
    fn g_examples() {
        let q5 = make_modulus(5).unwrap();
        assert_eq!(g_value(2, &q5), 0);
        assert_eq!(g_value(1, &q5), 1);
        assert_eq!(g_value(4, &q5), 1);
        let q101 = make_modulus(101).unwrap();
        assert_eq!(g_value(1, &q101), 1);
    }

    #[test]
    fn g_sieve_matches_divisor_enumeration() {
        for q in [3u64, 5, 13, 101] {
            let m = make_modulus(q).unwrap();
            let g = g_values(5_000, &m);
            assert_eq!(g[0], 0);
            for n in 1..=5_000u64 {
                assert_eq!(g[n as usize], g_value(n, &m), "n = {n}, q = {q}");
            }
        }
    }

    #[test]
    fn g_vanishes_on_inert_odd_powers() {
        let m = make_modulus(13).unwrap();
        for p in small_primes(60) {
            if legendre(p as i64, &m) == -1 {
                for k in [1u32, 3, 5] {
                    if let Some(pk) = p.checked_pow(k) {
                        assert_eq!(g_value(pk, &m), 0);
                    }
                }
            }
        }
    }

    #[test]
    fn g_nonnegative_and_below_tau() {
        for q in [5u64, 13, 101] {
            let m = make_modulus(q).unwrap();
            let g = g_values(10_000, &m);
            for n in 1..=10_000u64 {
                let v = g[n as usize];
                assert!(v >= 0 && v as u64 <= divisor_count(n));
            }
        }
    }

    proptest! {
        #[test]
        fn liouville_completely_multiplicative(m in 1u64..2_000_000, n in 1u64..2_000_000) {
            prop_assert_eq!(liouville(m * n), liouville(m) * liouville(n));
        }

        #[test]
        fn segment_agrees_with_factorization(lo in 1u64..1_000_000_000_000u64, len in 1u64..3_000) {
            let t = liouville_segment(lo, lo + len).unwrap();
            for n in [lo, lo + len / 2, lo + len - 1] {
                prop_assert_eq!(t.get(n), liouville(n));
            }
        }

        #[test]
        fn g_multiplicative_on_coprime_pairs(m in 1u64..3_000, n in 1u64..3_000) {
            prop_assume!(crate::modular::gcd(m, n) == 1);
            let q = make_modulus(13).unwrap();
            prop_assert_eq!(g_value(m * n, &q), g_value(m, &q) * g_value(n, &q));
        }
    }
}
