//! Numerics for two-projection relativistic quantization.
//!
//! * [`algebra`]: the 2×2 representation of the algebra generated by the
//!   quantum projection `P_Q` and the causal projection `P_R`, and the spin
//!   classification it induces.
//! * [`bargmann`]: truncated Fock bases, Berezin-Toeplitz matrices of
//!   polynomial symbols, and the Fock-to-Hermite basis correspondence.
//! * [`cone_symbol`]: the light-cone indicator and the Gaussian-smeared
//!   free-particle symbol `λ(ξ)` and cone indicator `μ(ξ)`.
//! * [`spectrum`]: numerical realization of the spectrum of `(P_Q - P_R)²`
//!   on the Fock space through the range of `1 - μ`.
//! * [`evolution`]: exact and approximate free evolution of momentum-space
//!   wave packets.

pub mod algebra;
pub mod bargmann;
pub mod cone_symbol;
pub mod error;
pub mod evolution;
pub mod quadrature;
pub mod special;
pub mod spectrum;

pub use error::{Error, Result};
