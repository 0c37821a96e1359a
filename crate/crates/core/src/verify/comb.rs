//! Products from two large subsets of the unit group cover every unit.

use std::time::Instant;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::modular::{mul_mod, PrimeModulus};
use crate::verify::report::{LemmaId, VerificationReport};

/// Reduces mod `q`, sorts and dedups; rejects multiples of `q`.
pub fn normalize_units(q: &PrimeModulus, set: &[u64]) -> Result<Vec<u64>> {
    let mut out: Vec<u64> = set.iter().map(|&x| x % q.q()).collect();
    if let Some(&bad) = set.iter().find(|&&x| x % q.q() == 0) {
        return Err(Error::NotAUnit { n: bad, q: q.q() });
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

/// Some `(a, b)` in `A x B` with `ab = n (mod q)`, if any. Sets must be normalized.
pub fn search_representation(q: &PrimeModulus, a_set: &[u64], b_set: &[u64], n: u64) -> Option<(u64, u64)> {
    let n = n % q.q();
    if n == 0 {
        return None;
    }
    let mut in_b = vec![false; q.q() as usize];
    for &b in b_set {
        in_b[b as usize] = true;
    }
    a_set.iter().find_map(|&a| {
        let b = mul_mod(n, q.inverse(a)?, q.q());
        in_b[b as usize].then_some((a, b))
    })
}

/// Every unit is a product `ab` once `|A| + |B| > phi(q)`.
pub fn verify_comb(q: &PrimeModulus, a_set: &[u64], b_set: &[u64]) -> Result<VerificationReport> {
    let start = Instant::now();
    let a = normalize_units(q, a_set)?;
    let b = normalize_units(q, b_set)?;
    if (a.len() + b.len()) as u64 <= q.phi() {
        return Err(Error::HypothesisViolated(format!(
            "|A| + |B| = {} <= phi({}) = {}",
            a.len() + b.len(),
            q.q(),
            q.phi()
        )));
    }
    let mut in_b = vec![false; q.q() as usize];
    for &x in &b {
        in_b[x as usize] = true;
    }
    let inverses: Vec<u64> = a.iter().map(|&x| q.inverse(x).expect("unit")).collect();
    let mut represented = 0u64;
    let mut first_missing = None;
    for n in 1..q.q() {
        let hit = inverses.iter().any(|&inv| in_b[mul_mod(n, inv, q.q()) as usize]);
        if hit {
            represented += 1;
        } else if first_missing.is_none() {
            first_missing = Some(n);
        }
    }
    let mut report = VerificationReport::identity(LemmaId::Comb, represented as f64, q.phi() as f64, 0.0)
        .with_param("q", q.q())
        .with_param("size_a", a.len())
        .with_param("size_b", b.len());
    if let Some(n) = first_missing {
        report = report.with_param("first_missing", n);
    }
    Ok(report.timed(start))
}

/// A random pair of unit subsets with `|A| + |B| > phi(q)`.
pub fn random_sets<R: Rng>(rng: &mut R, q: &PrimeModulus) -> (Vec<u64>, Vec<u64>) {
    let phi = q.phi() as usize;
    let size_a = rng.gen_range(1..=phi);
    let size_b = rng.gen_range(phi + 1 - size_a..=phi);
    let mut units: Vec<u64> = (1..q.q()).collect();
    units.shuffle(rng);
    let a = units[..size_a].to_vec();
    units.shuffle(rng);
    let b = units[..size_b].to_vec();
    (a, b)
}
