//! Discrete Wigner functions, quasi-probability majorization and rate bounds
//! for magic-state distillation on odd-prime-dimensional qudits.
//!
//! The crate is organised along the path from states to bounds:
//!
//! * [`phase_space`]: displacement and phase-point operators on `Z_d^{2n}`.
//! * [`wigner`]: Wigner functions of states and channels, sum-negativity,
//!   mana, free-state and stochasticity tests. [`states`] has the named states
//!   and Choi-matrix helpers.
//! * [`majorization`]: Lorenz curves of referenced quasi-distributions,
//!   dominance, the L1 criterion, the area monotone and the `Γ` embedding.
//! * [`copies`]: exact n-copy pair lists, Φ± sums and the closed-form Lorenz
//!   curve of `ρ_S(ε)^{⊗n}`.
//! * [`thermal`]: Gibbs states and the data entering the free-energy bound.
//! * [`entropy`]: Rényi entropies/divergences at admissible orders.
//! * [`bounds`]: every rate bound, returned as a [`bounds::BoundResult`].
//!
//! ```
//! use qudit_magic::{states, wigner::wigner_of_state, PrimeDim};
//!
//! let w = wigner_of_state(&states::strange_state(), PrimeDim::QUTRIT)?;
//! assert!((w.values()[0] + 1.0 / 3.0).abs() < 1e-12);
//! assert!((w.mana() - (5.0f64 / 3.0).ln()).abs() < 1e-12);
//! # Ok::<(), qudit_magic::Error>(())
//! ```
//!
//! Logarithms are natural throughout; every bound is a ratio of logarithms
//! and so does not depend on the base.

pub mod bounds;
pub mod copies;
pub mod entropy;
pub mod error;
pub mod majorization;
pub mod phase_space;
pub mod scalar;
pub mod states;
pub mod thermal;
pub mod wigner;

pub use error::{Error, Result};
pub use num_bigint::BigUint;
pub use num_complex::Complex64;
pub use num_rational::BigRational;
pub use phase_space::{ComplexMatrix, PhasePoint, PhaseSpace, PrimeDim};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub mod introduction {}
    #[doc = include_str!("../../../book/src/phase-space.md")]
    pub mod phase_space {}
    #[doc = include_str!("../../../book/src/wigner.md")]
    pub mod wigner {}
    #[doc = include_str!("../../../book/src/majorization.md")]
    pub mod majorization {}
    #[doc = include_str!("../../../book/src/copies.md")]
    pub mod copies {}
    #[doc = include_str!("../../../book/src/entropies.md")]
    pub mod entropies {}
    #[doc = include_str!("../../../book/src/bounds.md")]
    pub mod bounds {}
    #[doc = include_str!("../../../book/src/thermal.md")]
    pub mod thermal {}
    #[doc = include_str!("../../../book/src/cli.md")]
    pub mod cli {}
}
