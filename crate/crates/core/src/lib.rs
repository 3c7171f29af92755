//! Chabauty–Kim loci for the thrice-punctured line `P¹ ∖ {0, 1, ∞}`.
//!
//! The crate is split along the pieces of the computation:
//!
//! * [`padic`] — fixed-precision arithmetic in `Z_p`/`Q_p`, Teichmüller
//!   representatives and the Iwasawa logarithm.
//! * [`polylog`] — finite polylogarithms over `F_p`, convergent p-adic
//!   polylogarithm series and the modified polylogarithm mod `p`.
//! * [`selmer`] — the symbolic polylogarithmic localisation map, its
//!   restriction under refinement conditions and the coordinates that vanish.
//! * [`sunit`] — S-integral points, Kummer coordinates and reductions.
//! * [`s3`] — the six Möbius automorphisms permuting the cusps.
//! * [`verifier`] — per-prime loci, prime-range sweeps and reports.
//!
//! Prime sweeps run on rayon when the `parallel` feature is enabled (the
//! default); [`sweep::Execution::Sequential`] is always available.

pub mod error;
pub mod padic;
pub mod polylog;
pub mod primes;
pub mod s3;
pub mod selmer;
pub mod sunit;
pub mod sweep;
pub mod verifier;

pub use error::{Error, Result};
pub use padic::{PAdic, PrecisionPolicy};
pub use polylog::{Fp, FpPoly};
pub use s3::Moebius;
pub use selmer::{Cusp, LocalisationMap, RefinementCondition};
pub use sunit::{KummerVector, RationalPoint};
