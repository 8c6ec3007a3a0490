//! Projected Gabidulin rank-metric codes over finite fields.
//!
//! The crate is organised bottom-up:
//!
//! * [`gf`] builds the field tower `GF(p) ⊂ K = GF(q) ⊂ F = GF(q^n)`.
//! * [`linpoly`] implements `K`-linearized polynomials over `F` and subspace polynomials.
//! * [`subspace`] holds `K`-subspaces of `F` in canonical echelon form.
//! * [`gabidulin`] builds the codes `π_U(G_{k,s})`, checks the MRD property and computes nuclei.
//! * [`equivalence`] classifies codes by `ΓL(1, F)`-orbits of subspaces and cross-checks the
//!   classification against an exhaustive matrix-equivalence search.
//! * [`cli`] is the command-line front end.

pub mod cli;
pub mod equivalence;
pub mod gabidulin;
pub mod gf;
pub mod linalg;
pub mod linpoly;
pub mod subspace;

pub use equivalence::{
    census, classify_all, equivalent_bruteforce, equivalent_by_theorem, orbit_of, theorem11_bound,
    verify_witness_poly, CensusRow, CensusTable, EquivalenceSearch, EquivalenceWitness,
    OrbitClass, PolyWitness,
};
pub use gabidulin::{
    is_mrd, min_distance, rank_distance, GabidulinSpec, MatrixCode, Nucleus, NucleusKind,
};
pub use gf::{Elem, FieldSpec, FieldTower};
pub use linalg::KMatrix;
pub use linpoly::{LinPoly, RootCount, SubspacePoly};
pub use subspace::{gaussian_binomial, Subspace};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("{what} has cardinality {size}, above the cap of {cap}")]
    LimitExceeded { what: &'static str, size: String, cap: u64 },
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("parameter mismatch: {0}")]
    ParameterMismatch(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("malformed input: {0}")]
    Malformed(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Caps on the size of everything that gets enumerated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Largest field, code or nucleus candidate set that may be enumerated.
    pub max_card: u64,
    /// Largest number of subspaces that may be listed.
    pub max_subspaces: u64,
    /// Largest `(A, B, ρ)` search space for the brute-force equivalence oracle.
    pub max_search: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_card: 1 << 20,
            max_subspaces: 10_000_000,
            max_search: 100_000_000,
        }
    }
}

impl Limits {
    pub const ENV_VAR: &'static str = "GABIDULIN_MAX_CARD";

    /// Default limits, with `max_card` taken from `GABIDULIN_MAX_CARD` when it is set.
    pub fn from_env() -> Self {
        let mut limits = Limits::default();
        if let Some(card) = std::env::var(Self::ENV_VAR)
            .ok()
            .and_then(|v| v.trim().parse::<u64>().ok())
        {
            limits.max_card = card;
        }
        limits
    }

    pub(crate) fn check(&self, what: &'static str, size: u128, cap: u64) -> Result<()> {
        if size > cap as u128 {
            return Err(Error::LimitExceeded {
                what,
                size: size.to_string(),
                cap,
            });
        }
        Ok(())
    }

    pub(crate) fn check_card(&self, what: &'static str, size: u128) -> Result<()> {
        self.check(what, size, self.max_card)
    }
}

/// `base^exp` as `u128`, saturating at `u128::MAX`.
pub(crate) fn pow_sat(base: u64, exp: u64) -> u128 {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = acc.saturating_mul(base as u128);
        if acc == u128::MAX {
            break;
        }
    }
    acc
}
