//! Least elements of each residue class mod `q` carrying a prescribed
//! Liouville sign, and the exponent `e(q) = log N(q) / log q` of the largest
//! such witness.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::modular::{is_prime, PrimeModulus};
use crate::sieve::liouville_segment_with_budget;

pub const DEFAULT_SEGMENT_SIZE: u64 = 1 << 20;
pub const MIN_SEGMENT_SIZE: u64 = 1 << 10;
pub const CSV_HEADER: &str = "q,a,least_plus,least_minus,n_of_q,exponent";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Sign {
    Minus,
    Plus,
}

impl Sign {
    pub fn value(self) -> i8 {
        match self {
            Sign::Minus => -1,
            Sign::Plus => 1,
        }
    }

    pub fn from_value(v: i8) -> Option<Sign> {
        match v {
            -1 => Some(Sign::Minus),
            1 => Some(Sign::Plus),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct WitnessRecord {
    pub q: u64,
    pub a: u64,
    pub least_plus: u64,
    pub least_minus: u64,
    pub cap: u64,
}

impl WitnessRecord {
    pub fn least(&self, sign: Sign) -> u64 {
        match sign {
            Sign::Plus => self.least_plus,
            Sign::Minus => self.least_minus,
        }
    }

    pub fn max_witness(&self) -> u64 {
        self.least_plus.max(self.least_minus)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanReport {
    pub q: u64,
    pub n_of_q: u64,
    pub exponent: f64,
    pub per_class: Vec<WitnessRecord>,
}

impl ScanReport {
    /// One line per class, in the column order of [`CSV_HEADER`].
    pub fn csv_rows(&self) -> String {
        let mut out = String::new();
        for r in &self.per_class {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{:.6}",
                self.q, r.a, r.least_plus, r.least_minus, self.n_of_q, self.exponent
            );
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScanConfig {
    /// Largest sieve block, in integers.
    pub segment_size: u64,
}

impl Default for ScanConfig {
    fn default() -> Self {
        ScanConfig {
            segment_size: DEFAULT_SEGMENT_SIZE,
        }
    }
}

impl ScanConfig {
    pub fn new(segment_size: u64) -> Result<Self> {
        if segment_size < MIN_SEGMENT_SIZE {
            return Err(Error::InvalidParameter(format!(
                "segment size {segment_size} is below {MIN_SEGMENT_SIZE}"
            )));
        }
        Ok(ScanConfig { segment_size })
    }
}

/// `ceil(q^{5/2 + eps})`.
pub fn witness_cap(q: u64, eps: f64) -> u64 {
    (q as f64).powf(2.5 + eps).ceil() as u64
}

fn check_class(q: &PrimeModulus, a: u64) -> Result<()> {
    if a == 0 || a >= q.q() {
        return Err(Error::NotAUnit { n: a, q: q.q() });
    }
    Ok(())
}

/// Least `n <= cap` with `n = a (mod q)` and `lambda(n) = sign`.
pub fn least_witness(
    q: &PrimeModulus,
    a: u64,
    sign: Sign,
    cap: u64,
    segment_size: u64,
) -> Result<Option<u64>> {
    check_class(q, a)?;
    let segment_size = segment_size.max(MIN_SEGMENT_SIZE);
    let target = sign.value();
    let mut lo = 1u64;
    while lo <= cap {
        let hi = cap.saturating_add(1).min(lo.saturating_add(segment_size));
        let table = liouville_segment_with_budget(lo, hi, segment_size)?;
        let first = lo + (a + q.q() - lo % q.q()) % q.q();
        let mut n = first;
        while n < hi {
            if table.get(n) == target {
                return Ok(Some(n));
            }
            n += q.q();
        }
        lo = hi;
    }
    Ok(None)
}

/// Witnesses of both signs for every class, from sieve blocks shared by all
/// classes. Blocks start at `max(1024, 4q)` integers and double up to the
/// configured segment size; sieving stops once every class is settled.
pub fn scan_with(q: &PrimeModulus, eps: f64, config: &ScanConfig) -> Result<ScanReport> {
    if !(eps >= 0.0) {
        return Err(Error::InvalidParameter(format!("epsilon = {eps} must be >= 0")));
    }
    let qv = q.q();
    let cap = witness_cap(qv, eps);
    let classes = qv as usize;
    let mut plus = vec![0u64; classes];
    let mut minus = vec![0u64; classes];
    let mut open = 2 * (classes - 1);

    let mut lo = 1u64;
    let mut block = (4 * qv).max(MIN_SEGMENT_SIZE).min(config.segment_size);
    while open > 0 && lo <= cap {
        let hi = cap.saturating_add(1).min(lo + block);
        let table = liouville_segment_with_budget(lo, hi, config.segment_size)?;
        let mut residue = lo % qv;
        for (n, v) in table.iter() {
            if residue != 0 {
                let slot = if v > 0 { &mut plus[residue as usize] } else { &mut minus[residue as usize] };
                if *slot == 0 {
                    *slot = n;
                    open -= 1;
                }
            }
            residue += 1;
            if residue == qv {
                residue = 0;
            }
        }
        lo = hi;
        block = (2 * block).min(config.segment_size);
    }

    let mut per_class = Vec::with_capacity(classes - 1);
    for a in 1..qv {
        for (slot, sign) in [(plus[a as usize], 1i8), (minus[a as usize], -1)] {
            if slot == 0 {
                return Err(Error::CapExceeded { q: qv, a, sign, cap });
            }
        }
        per_class.push(WitnessRecord {
            q: qv,
            a,
            least_plus: plus[a as usize],
            least_minus: minus[a as usize],
            cap,
        });
    }
    let n_of_q = per_class.iter().map(WitnessRecord::max_witness).max().unwrap_or(0);
    Ok(ScanReport {
        q: qv,
        n_of_q,
        exponent: (n_of_q as f64).ln() / (qv as f64).ln(),
        per_class,
    })
}

pub fn scan(q: &PrimeModulus, eps: f64) -> Result<ScanReport> {
    scan_with(q, eps, &ScanConfig::default())
}

/// One report per prime in `[q_min, q_max]`, ascending. Work is spread over
/// the current rayon pool; the output order does not depend on it.
pub fn scan_range(q_min: u64, q_max: u64, eps: f64, config: &ScanConfig) -> Result<Vec<ScanReport>> {
    if q_min < 3 || q_min > q_max {
        return Err(Error::InvalidParameter(format!(
            "range [{q_min}, {q_max}] needs 3 <= q_min <= q_max"
        )));
    }
    let primes: Vec<u64> = (q_min..=q_max).filter(|&n| is_prime(n)).collect();
    primes
        .par_iter()
        .map(|&p| scan_with(&PrimeModulus::new(p)?, eps, config))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modular::make_modulus;
    use crate::sieve::liouville;

    #[test]
    fn least_witness_examples() {
        let q = make_modulus(3).unwrap();
        assert_eq!(least_witness(&q, 1, Sign::Minus, 100, 1024).unwrap(), Some(7));
        assert_eq!(least_witness(&q, 2, Sign::Plus, 100, 1024).unwrap(), Some(14));
        assert_eq!(least_witness(&q, 1, Sign::Plus, 100, 1024).unwrap(), Some(1));
        assert_eq!(least_witness(&q, 2, Sign::Plus, 13, 1024).unwrap(), None);
        assert!(matches!(
            least_witness(&q, 3, Sign::Plus, 100, 1024),
            Err(Error::NotAUnit { .. })
        ));
    }

    #[test]
    fn scan_of_three() {
        let r = scan(&make_modulus(3).unwrap(), 0.0).unwrap();
        assert_eq!(r.n_of_q, 14);
        assert!((r.exponent - 14f64.ln() / 3f64.ln()).abs() < 1e-12);
        assert_eq!(r.per_class[1].least_minus, 2);
        assert_eq!(r.per_class[1].least_plus, 14);
    }

    #[test]
    fn blocks_agree_with_progression_scan() {
        for qv in [5u64, 31, 97] {
            let q = make_modulus(qv).unwrap();
            let small = scan_with(&q, 0.0, &ScanConfig::new(1024).unwrap()).unwrap();
            assert_eq!(small, scan(&q, 0.0).unwrap());
            for r in &small.per_class {
                for sign in [Sign::Plus, Sign::Minus] {
                    let n = least_witness(&q, r.a, sign, r.cap, 4096).unwrap();
                    assert_eq!(n, Some(r.least(sign)));
                    assert_eq!(liouville(r.least(sign)), sign.value());
                }
            }
        }
    }

    #[test]
    fn range_is_sorted_and_skips_composites() {
        let reports = scan_range(3, 19, 0.0, &ScanConfig::default()).unwrap();
        let qs: Vec<u64> = reports.iter().map(|r| r.q).collect();
        assert_eq!(qs, vec![3, 5, 7, 11, 13, 17, 19]);
        assert!(scan_range(20, 22, 0.0, &ScanConfig::default()).unwrap().is_empty());
    }

    #[test]
    fn csv_rows_use_six_decimals() {
        let r = scan(&make_modulus(3).unwrap(), 0.0).unwrap();
        assert_eq!(r.csv_rows(), "3,1,1,7,14,2.402174\n3,2,14,2,14,2.402174\n");
    }
}
