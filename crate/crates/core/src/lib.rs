//! Rank-metric public-key encryption built on partial cyclic Gabidulin codes
//! whose public generator is masked by a semilinear transformation.
//!
//! The crate is organised bottom-up:
//!
//! * [`gf`]: the field tower `F_q ⊂ F_{q^m} ⊂ F_{q^n}` (`n = 2m`, `q = 2^e`).
//! * [`rankmat`]: dense matrices, exact linear algebra, rank weight, Moore and
//!   circulant matrices.
//! * [`semilinear`]: base-linear automorphisms of an extension field and the
//!   fully-linear classification.
//! * [`gabidulin`]: partial cyclic Gabidulin codes with a Welch–Berlekamp
//!   decoder and an independent Euclidean cross-check decoder.
//! * [`pkc`]: key generation, encryption, decryption and the binary formats.
//! * [`analysis`]: distinguisher dimensions, plaintext-system nullity,
//!   key-equivalence classes and Euler-function counts.
//! * [`estimator`]: log2 cost of the known RSD attacks and the structural
//!   key-space counts.

pub mod analysis;
mod bits;
pub mod error;
pub mod estimator;
pub mod gabidulin;
pub mod gf;
pub mod pkc;
pub mod rankmat;
pub mod semilinear;

pub use error::{Error, Result};
