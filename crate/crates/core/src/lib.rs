//! Spectral sets and tiles in the finite abelian groups `Z_p^2 x Z_q`.
//!
//! All character sums are evaluated exactly, as integer tables of root of
//! unity multiplicities ([`sums`]). On top of that sit a clique search for
//! spectra ([`spectral`]), an exact-cover search for tiling complements
//! ([`tiling`]), and a harness that scans whole groups and checks that the
//! two properties coincide ([`verifier`]).
//!
//! ```
//! use fuglede_core::{find_complement, find_spectrum, Group};
//!
//! let g = Group::from_primes(2, 3).unwrap();
//! let plane = g.p_plane();
//! assert!(find_spectrum(&g, &plane).is_found());
//! assert!(find_complement(&g, &plane).is_found());
//! ```

pub mod error;
pub mod formats;
pub mod group;
pub mod spectral;
pub mod sums;
pub mod tiling;
pub mod verifier;

pub use error::{Error, Result};
pub use group::{AffineMap, Element, Group, GroupSpec, Multiset, SubsetMask, MAX_ORDER};
pub use spectral::{
    find_spectrum, is_spectral, subgroup_complement_spectrum, verify_spectral_pair,
    SpectralCertificate,
};
pub use sums::{
    char_coeff_matrix, equidistributed, lam_leung, numeric_char_sum, project, vanishes, zero_set,
    CoefficientMatrix, CosetDecomposition,
};
pub use tiling::{
    find_complement, fourier_product_holds, is_tile, subgroup_complement, verify_tiling,
    TilingCertificate,
};

/// Result of an exhaustive search: a witness, or proof of exhaustion in the
/// form of the number of search nodes visited.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Outcome<T> {
    Found { witness: T, explored: u64 },
    Exhausted { explored: u64 },
}

impl<T> Outcome<T> {
    pub fn is_found(&self) -> bool {
        matches!(self, Outcome::Found { .. })
    }

    pub fn witness(&self) -> Option<&T> {
        match self {
            Outcome::Found { witness, .. } => Some(witness),
            Outcome::Exhausted { .. } => None,
        }
    }

    pub fn explored(&self) -> u64 {
        match self {
            Outcome::Found { explored, .. } | Outcome::Exhausted { explored } => *explored,
        }
    }
}
