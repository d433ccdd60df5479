//! Finite posets with prescribed cyclic automorphism groups.
//!
//! The crate centres on three jobs:
//!
//! * **Constructions** — build, for any n ≥ 1, a poset on β(n) points whose
//!   automorphism group is cyclic of order n, assembled from prime-power
//!   blocks and a handful of small exceptional pieces
//!   ([`constructions::minimal_poset`], [`constructions::beta`]).
//! * **Verification** — compute automorphism groups of arbitrary posets by
//!   refinement-guided backtracking ([`aut::automorphism_group`]), canonical
//!   forms and isomorphism tests ([`canon`]), and audit candidate generator
//!   cycle types against the weight inequalities that force β(n) to be
//!   optimal ([`weights::audit_generator`]).
//! * **Exhaustive checking** — enumerate all posets on up to a dozen points
//!   without isomorphic duplicates ([`oracle::Enumerator`]) to confirm
//!   minimality and the case lemmas independently of any formula.
//!
//! Posets are stored as transitively closed strict-order bit matrices, so
//! everything here is exact; the only floating point in the crate is in
//! its diagnostics. Weights and bounds use exact rationals.

pub mod aut;
pub mod canon;
pub mod constructions;
pub mod error;
pub mod io;
pub mod oracle;
pub mod perm;
pub mod poset;
mod refine;
pub mod weights;

pub use aut::{automorphism_group, group_order, is_automorphism, GroupDescription};
pub use canon::{are_isomorphic, canonical_form};
pub use constructions::{beta, b_value, factorize, minimal_poset};
pub use error::{Error, Result};
pub use perm::{CycleType, Permutation};
pub use poset::Poset;
pub use weights::{audit_generator, lemma_constraints, weight_vector};
