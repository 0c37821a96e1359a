//! Sign counts of `lambda` over the units in windows `[M, M + q)`.
//!
//! The counts `|A_I|` (units with `lambda = -1`) and `|B_I|` (`lambda = +1`)
//! always partition `phi(q)`; sliding the window by one changes `|A_I|` by
//! the exact indicator bookkeeping checked here. Equality `|A_I| = phi/2`
//! is only reported, never asserted.

use std::time::Instant;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::modular::PrimeModulus;
use crate::sieve::{liouville_segment, LiouvilleTable};
use crate::verify::report::{LemmaId, VerificationReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct IntervalCensus {
    pub start: u64,
    pub count_minus: u64,
    pub count_plus: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CensusTable {
    pub q: u64,
    pub x: u64,
    pub rows: Vec<IntervalCensus>,
    /// `max_M ||A_I| - phi/2|`.
    pub max_deviation: u64,
}

fn count(table: &LiouvilleTable, q: u64, start: u64) -> IntervalCensus {
    let (mut minus, mut plus) = (0, 0);
    for n in start..start + q {
        if n % q == 0 {
            continue;
        }
        if table.get(n) < 0 {
            minus += 1;
        } else {
            plus += 1;
        }
    }
    IntervalCensus {
        start,
        count_minus: minus,
        count_plus: plus,
    }
}

/// Census rows for `M = 1, 1 + q, 1 + 2q, ... <= X - q`.
pub fn interval_census(q: &PrimeModulus, x: u64) -> Result<CensusTable> {
    let qv = q.q();
    if x < 2 * qv {
        return Err(Error::InvalidParameter(format!("X = {x} is below 2q = {}", 2 * qv)));
    }
    let table = liouville_segment(1, x)?;
    let half = q.phi() / 2;
    let rows: Vec<IntervalCensus> = (1..=x - qv)
        .step_by(qv as usize)
        .map(|m| count(&table, qv, m))
        .collect();
    let max_deviation = rows
        .iter()
        .map(|r| r.count_minus.abs_diff(half))
        .max()
        .unwrap_or(0);
    Ok(CensusTable {
        q: qv,
        x,
        rows,
        max_deviation,
    })
}

/// `|A_{I'}| = |A_I| - [lambda(n) = -1] + [lambda(n + q) = -1]` for
/// `I = [n, n + q)`, `I' = [n + 1, n + q + 1)`, both sides counted directly.
pub fn census_bookkeeping_check(q: &PrimeModulus, n: u64) -> Result<VerificationReport> {
    let start = Instant::now();
    let qv = q.q();
    if n == 0 || n % qv == 0 {
        return Err(Error::NotAUnit { n, q: qv });
    }
    let table = liouville_segment(n, n + qv + 1)?;
    let before = count(&table, qv, n);
    let after = count(&table, qv, n + 1);
    let leaving = (table.get(n) < 0) as i64;
    let entering = (table.get(n + qv) < 0) as i64;
    let predicted = before.count_minus as i64 - leaving + entering;
    Ok(VerificationReport::identity(
        LemmaId::Census,
        after.count_minus as f64,
        predicted as f64,
        0.0,
    )
    .with_param("q", qv)
    .with_param("n", n)
    .timed(start))
}

/// Bookkeeping for every unit `n <= n_max` and the partition
/// `|A_I| + |B_I| = phi(q)` on every census row up to `X`. The residual is
/// the number of failures.
pub fn verify_census(q: &PrimeModulus, n_max: u64, x: u64) -> Result<VerificationReport> {
    let start = Instant::now();
    let qv = q.q();
    let mut failures = 0u64;
    let mut checked = 0u64;
    for n in (1..=n_max).filter(|n| n % qv != 0) {
        checked += 1;
        if !census_bookkeeping_check(q, n)?.pass {
            failures += 1;
        }
    }
    let table = interval_census(q, x)?;
    let partition_failures = table
        .rows
        .iter()
        .filter(|r| r.count_minus + r.count_plus != q.phi())
        .count() as u64;
    Ok(VerificationReport::identity(
        LemmaId::Census,
        (failures + partition_failures) as f64,
        0.0,
        0.0,
    )
    .with_param("q", qv)
    .with_param("n_max", n_max)
    .with_param("X", x)
    .with_param("bookkeeping_checked", checked)
    .with_param("rows", table.rows.len())
    .with_param("max_deviation", table.max_deviation)
    .timed(start))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modular::make_modulus;

    #[test]
    fn rows_mod_three() {
        let q = make_modulus(3).unwrap();
        let t = interval_census(&q, 12).unwrap();
        let starts: Vec<u64> = t.rows.iter().map(|r| r.start).collect();
        assert_eq!(starts, [1, 4, 7]);
        assert_eq!((t.rows[0].count_minus, t.rows[0].count_plus), (1, 1));
        assert_eq!((t.rows[1].count_minus, t.rows[1].count_plus), (1, 1));
        for r in &t.rows {
            assert_eq!(r.count_minus + r.count_plus, 2);
        }
        assert!(interval_census(&q, 5).is_err());
    }

    #[test]
    fn bookkeeping_examples() {
        assert!(census_bookkeeping_check(&make_modulus(3).unwrap(), 1).unwrap().pass);
        assert!(census_bookkeeping_check(&make_modulus(5).unwrap(), 7).unwrap().pass);
        assert!(census_bookkeeping_check(&make_modulus(5).unwrap(), 10).is_err());
    }

    #[test]
    fn equal_signs_keep_count() {
        let q = make_modulus(7).unwrap();
        let t = liouville_segment(1, 200).unwrap();
        for n in (1..180u64).filter(|n| n % 7 != 0) {
            if t.get(n) == t.get(n + 7) {
                let r = census_bookkeeping_check(&q, n).unwrap();
                let a = count(&t, 7, n);
                assert_eq!(r.lhs.as_complex().re, a.count_minus as f64);
            }
        }
    }

    #[test]
    fn aggregate_report() {
        let q = make_modulus(101).unwrap();
        let r = verify_census(&q, 1010, 1010).unwrap();
        assert!(r.pass, "{r:?}");
        assert_eq!(r.params["bookkeeping_checked"], 1000);
    }
}
