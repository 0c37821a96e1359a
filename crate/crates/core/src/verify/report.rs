use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num_complex::Complex64;
use serde::{Serialize, Serializer};
use serde_json::Value;

use crate::error::Error;

/// Which identity or inequality a report certifies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LemmaId {
    Gauss,
    Poisson,
    LargeSieve,
    Parseval,
    Inversion,
    Comb,
    Hyperbola,
    Lfunction,
    Holder,
    KeyIdentity,
    Census,
    Exceptional,
}

impl LemmaId {
    pub const ALL: [LemmaId; 12] = [
        LemmaId::Gauss,
        LemmaId::Poisson,
        LemmaId::LargeSieve,
        LemmaId::Parseval,
        LemmaId::Inversion,
        LemmaId::Comb,
        LemmaId::Hyperbola,
        LemmaId::Lfunction,
        LemmaId::Holder,
        LemmaId::KeyIdentity,
        LemmaId::Census,
        LemmaId::Exceptional,
    ];

    pub fn name(self) -> &'static str {
        match self {
            LemmaId::Gauss => "gauss",
            LemmaId::Poisson => "poisson",
            LemmaId::LargeSieve => "large-sieve",
            LemmaId::Parseval => "parseval",
            LemmaId::Inversion => "inversion",
            LemmaId::Comb => "comb",
            LemmaId::Hyperbola => "hyperbola",
            LemmaId::Lfunction => "lfunction",
            LemmaId::Holder => "holder",
            LemmaId::KeyIdentity => "key-identity",
            LemmaId::Census => "census",
            LemmaId::Exceptional => "exceptional",
        }
    }
}

impl fmt::Display for LemmaId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for LemmaId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        LemmaId::ALL
            .into_iter()
            .find(|l| l.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown lemma selector `{s}`")))
    }
}

/// A real or complex side of a check. Reals serialize as bare numbers,
/// complex values as `{"re": .., "im": ..}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Quantity {
    Real(f64),
    Complex(Complex64),
}

impl Quantity {
    pub fn abs_diff(self, other: Quantity) -> f64 {
        (self.as_complex() - other.as_complex()).norm()
    }

    pub fn as_complex(self) -> Complex64 {
        match self {
            Quantity::Real(x) => Complex64::new(x, 0.0),
            Quantity::Complex(z) => z,
        }
    }
}

impl From<f64> for Quantity {
    fn from(x: f64) -> Self {
        Quantity::Real(x)
    }
}

impl From<Complex64> for Quantity {
    fn from(z: Complex64) -> Self {
        Quantity::Complex(z)
    }
}

impl Serialize for Quantity {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Parts {
            re: f64,
            im: f64,
        }
        match *self {
            Quantity::Real(x) => s.serialize_f64(x),
            Quantity::Complex(z) => Parts { re: z.re, im: z.im }.serialize(s),
        }
    }
}

/// One certified check: both sides, the residual and whether it is within tolerance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub lemma: LemmaId,
    pub params: BTreeMap<String, Value>,
    pub lhs: Quantity,
    pub rhs: Quantity,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub runtime_ms: u64,
}

impl VerificationReport {
    /// `residual = |lhs - rhs|`.
    pub fn identity(
        lemma: LemmaId,
        lhs: impl Into<Quantity>,
        rhs: impl Into<Quantity>,
        tolerance: f64,
    ) -> Self {
        let (lhs, rhs) = (lhs.into(), rhs.into());
        Self::build(lemma, lhs, rhs, lhs.abs_diff(rhs), tolerance)
    }

    /// `lhs <= rhs`, `residual = max(0, lhs - rhs)`.
    pub fn inequality(lemma: LemmaId, lhs: f64, rhs: f64, tolerance: f64) -> Self {
        let residual = if lhs.is_nan() || rhs.is_nan() {
            f64::NAN
        } else {
            (lhs - rhs).max(0.0)
        };
        Self::build(lemma, lhs.into(), rhs.into(), residual, tolerance)
    }

    fn build(lemma: LemmaId, lhs: Quantity, rhs: Quantity, residual: f64, tolerance: f64) -> Self {
        VerificationReport {
            lemma,
            params: BTreeMap::new(),
            lhs,
            rhs,
            residual,
            tolerance,
            pass: residual <= tolerance,
            runtime_ms: 0,
        }
    }

    pub fn with_param(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.params.insert(key.to_owned(), value.into());
        self
    }

    pub fn with_residual(mut self, residual: f64) -> Self {
        self.residual = residual;
        self.pass = residual <= self.tolerance;
        self
    }

    pub fn timed(mut self, start: Instant) -> Self {
        self.runtime_ms = start.elapsed().as_millis() as u64;
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("reports contain only finite or null numbers")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pass_flag_follows_residual() {
        let r = VerificationReport::identity(LemmaId::Parseval, 2.0, 2.0 + 1e-12, 1e-9);
        assert!(r.pass);
        let r = VerificationReport::identity(LemmaId::Parseval, 0.0, 2.0, 1e-9);
        assert!(!r.pass);
        assert_eq!(r.residual, 2.0);
        let r = VerificationReport::inequality(LemmaId::LargeSieve, 3.0, 5.0, 0.0);
        assert!(r.pass && r.residual == 0.0);
        let r = VerificationReport::inequality(LemmaId::LargeSieve, f64::NAN, 5.0, 1.0);
        assert!(!r.pass);
    }

    #[test]
    fn json_field_set_is_fixed() {
        let r = VerificationReport::identity(
            LemmaId::KeyIdentity,
            Complex64::new(1.0, -2.0),
            1.0,
            0.5,
        )
        .with_param("q", 7);
        let v: Value = serde_json::from_str(&r.to_json()).unwrap();
        let keys: Vec<&str> = v.as_object().unwrap().keys().map(|k| k.as_str()).collect();
        assert_eq!(
            keys,
            ["lemma", "lhs", "params", "pass", "residual", "rhs", "runtime_ms", "tolerance"]
        );
        assert_eq!(v["lemma"], "key-identity");
        assert_eq!(v["lhs"]["im"], -2.0);
        assert_eq!(v["rhs"], 1.0);
    }

    #[test]
    fn selectors_round_trip() {
        for l in LemmaId::ALL {
            assert_eq!(l.name().parse::<LemmaId>().unwrap(), l);
        }
        assert!("siegel".parse::<LemmaId>().is_err());
    }
}
