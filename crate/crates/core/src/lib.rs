//! Exact discrepancy machinery for generalized van der Corput sequences.
//!
//! A sequence is driven by one digit permutation per position. Everything
//! here is computed with exact rationals: the piecewise-affine ψ functions
//! that govern discrepancy, finite-N discrepancies, certified brackets for
//! the asymptotic constants, and a pruned search for good permutations.
//!
//! ```
//! use vdc::perm::Permutation;
//! use vdc::psi::PsiTable;
//!
//! let sigma = Permutation::identity(3)?;
//! let table = PsiTable::new(&sigma);
//! let (max, _) = table.max_on_grid(vdc::psi::Component::Total);
//! assert_eq!(max, vdc::rat(2, 3));
//! # Ok::<(), vdc::Error>(())
//! ```

pub mod asym;
pub mod disc;
mod error;
pub mod hammersley;
pub mod numeric;
pub mod perm;
pub mod psi;
pub mod report;
pub mod search;
pub mod verify;

pub use error::{Error, Result};
pub use numeric::{rat, Rational};
