//! Numerical certification of the identities and inequalities used in the
//! sign-witness argument. Unconditional statements are asserted through a
//! [`VerificationReport`]; conclusions that only hold under the argument's
//! contrary hypothesis are returned as diagnostics.

pub mod batch;
pub mod census;
pub mod comb;
pub mod exceptional;
pub mod hyperbola;
pub mod large_sieve;
pub mod lfunction;
pub mod poisson;
pub mod report;
pub mod spectrum;

pub use census::{census_bookkeeping_check, interval_census, CensusTable, IntervalCensus};
pub use comb::{search_representation, verify_comb};
pub use exceptional::{exceptional_stats, ExceptionalStats};
pub use hyperbola::{verify_hyperbola, HYPERBOLA_C};
pub use large_sieve::verify_large_sieve;
pub use lfunction::{compute_l1, L1Value};
pub use poisson::{verify_gauss, verify_poisson};
pub use report::{LemmaId, Quantity, VerificationReport};
pub use spectrum::{
    dominant_sign_correlation, fourier_spectrum, holder_factors, key_identity_check,
    verify_inversion, verify_parseval, FourierSpectrum, HolderFactors, SignCorrelation,
};
