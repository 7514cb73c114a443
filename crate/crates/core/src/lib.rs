//! Spectra of the tridiagonal random-hopping matrix
//!
//! ```text
//!     ψ_{k+1} + r_{k-1} ψ_{k-1} = E ψ_k,      ψ_0 = ψ_{N+2} = 0
//! ```
//!
//! computed three independent ways:
//!
//! - [`spectrum`]: the theory of words. A finite word `w` of subdiagonal
//!   letters defines a 2×2 polynomial transfer matrix `W(z)`; the periodic
//!   Hamiltonian built from `w` has its spectrum on the Bloch curves
//!   `tr W(z) = 2 (det W)^{1/2} cos θ`, which run between the zeros of the
//!   discriminant `Q(z)`.
//! - [`solver`]: direct eigenvalues of the finite `(N+1)×(N+1)` matrix by
//!   shifted Hessenberg QR, cross-checked against roots of the
//!   characteristic polynomial.
//! - [`dyson`]: Monte Carlo iteration of the characteristic ratio
//!   `y_{k+1} = z − r_k / y_k` in projective coordinates.
//!
//! The moments `⟨tr Hᵏ⟩/N` count closed walks of `k` hops on the chain, so
//! for the ±1 model every link of a contributing walk is crossed a multiple
//! of four times. Nothing here uses that expansion; it is the reason the
//! density is hard to get at perturbatively.

pub mod dyson;
mod error;
pub mod matching;
pub mod poly;
pub mod solver;
pub mod spectrum;
pub mod word;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
