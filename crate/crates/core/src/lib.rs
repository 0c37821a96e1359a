//! Liouville-function sign witnesses in residue classes modulo a prime,
//! Dirichlet characters, and numerical certification of the character-sum
//! identities and inequalities that control them.

pub mod error;
pub mod modular;
pub mod sieve;
pub mod verify;
pub mod window;
pub mod witness;

pub use error::{Error, Result};
pub use modular::{char_value, gauss_sum, legendre, make_modulus, DirichletCharacter, PrimeModulus};
pub use sieve::{g_value, g_values, liouville, liouville_segment, primes_in, LiouvilleTable};
pub use window::{decay_profile, window_fourier, window_value, DecayProfile, SmoothWindow};
pub use verify::{LemmaId, Quantity, VerificationReport};
pub use witness::{least_witness, scan, scan_range, scan_with, ScanConfig, ScanReport, Sign, WitnessRecord};
