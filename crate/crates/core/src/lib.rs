//! Numerical laws of the supremum of Lévy processes.
//!
//! The crate evaluates the entrance laws `q_t`, `q*_t` of the excursion
//! measures of the reflected processes, assembles from them the law of the
//! triple `(g_t, sup_{s<=t} X_s, X_t)`, realizes the classical fluctuation
//! identities (Fristedt's formula for the ladder exponent, the Wiener–Hopf
//! factorization in time, the reconstruction of the semigroup from the
//! entrance laws, subordinator inverse densities) and ships an independent
//! Monte Carlo oracle for all of it.
//!
//! Everything here is `no_std` + `alloc`; file formats, the command line and
//! thread-level parallelism live in the companion `levysup` crate.
//!
//! Conventions used throughout:
//!
//! * the local time at the supremum is normalized so that `κ(1,0) = 1`;
//! * `q` / `n` refer to the reflected process at the supremum (its lifetime
//!   tail `n(t<ζ)` governs the time elapsed since `g_t`), `q*` / `n*` to the
//!   reflected process at the infimum (it carries the law of the supremum);
//! * stable processes are parameterized by `(α, ρ)` with
//!   `ψ(λ) = |λ|^α exp(-iπα(ρ-1/2) sgn λ)`, so the symmetric α-stable law has
//!   `ψ(λ) = |λ|^α`.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

mod error;
pub mod entrance;
pub mod fluctuation;
pub mod jointlaw;
pub mod model;
pub mod montecarlo;
mod precise;
pub mod quad;
pub mod special;
pub mod stable;

pub use entrance::{EntranceLaw, Side};
pub use error::{Error, Result};
pub use fluctuation::{IdentityReport, KappaMethod, LadderExponent, SubordinatorFamily, SubordinatorModel};
pub use jointlaw::{Atom, Atoms, JointLaw, SnPath, StableTripleFactors};
pub use model::{Family, JumpSign, ModelParams, ProcessModel, Regularity};
pub use montecarlo::{SimulationPlan, TripleSample};
pub use quad::QuadratureConfig;
