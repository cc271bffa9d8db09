//! Arithmetic for the tower `F_q ⊂ F_{q^m} ⊂ F_{q^n}` with `n = 2m` and
//! `q = 2^e`.
//!
//! Elements are plain values; all arithmetic goes through a field object
//! implementing [`Field`], so the same dense linear algebra runs over every
//! level of the tower.

mod binary;
pub mod poly;
mod tower;

use std::fmt;
use std::hash::Hash;

use rand::Rng;

use crate::Result;

pub use binary::{bit_rank, is_irreducible_binary, least_irreducible_binary, BinaryField};
pub use tower::{QuadField, Subfield, TowerField};

/// A finite field of characteristic 2.
///
/// Subtraction and negation default to addition and the identity.
pub trait Field: Send + Sync {
    type Elem: Copy + Eq + Hash + fmt::Debug + Send + Sync + 'static;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem;
    fn mul(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem;
    fn inv(&self, a: Self::Elem) -> Result<Self::Elem>;
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Elem;

    fn sub(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem {
        self.add(a, b)
    }

    fn neg(&self, a: Self::Elem) -> Self::Elem {
        a
    }

    fn is_zero(&self, a: Self::Elem) -> bool {
        a == self.zero()
    }

    fn square(&self, a: Self::Elem) -> Self::Elem {
        self.mul(a, a)
    }

    fn div(&self, a: Self::Elem, b: Self::Elem) -> Result<Self::Elem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    fn pow(&self, a: Self::Elem, mut e: u128) -> Self::Elem {
        let mut base = a;
        let mut acc = self.one();
        while e != 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.square(base);
            e >>= 1;
        }
        acc
    }
}

/// A field of the tower together with its `q`-Frobenius `x ↦ x^{q^i}`.
pub trait FrobeniusField: Field {
    fn frobenius(&self, a: Self::Elem, i: usize) -> Self::Elem;
}

/// Element of `F_{q^m}`: bit `i` is the coefficient of `x^i` modulo the
/// binary modulus of the middle field.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FqmElem(pub u64);

/// Element of `F_{q^n}` written as `lo + hi·θ` over `F_{q^m}`.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FqnElem {
    pub lo: FqmElem,
    pub hi: FqmElem,
}

impl FqnElem {
    pub const ZERO: FqnElem = FqnElem::new(FqmElem(0), FqmElem(0));
    pub const ONE: FqnElem = FqnElem::new(FqmElem(1), FqmElem(0));

    pub const fn new(lo: FqmElem, hi: FqmElem) -> Self {
        FqnElem { lo, hi }
    }

    /// `true` when the element lies in the middle field.
    pub fn in_mid(self) -> bool {
        self.hi.0 == 0
    }
}

impl From<FqmElem> for FqnElem {
    fn from(x: FqmElem) -> Self {
        FqnElem::new(x, FqmElem(0))
    }
}

impl fmt::Debug for FqmElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#x}", self.0)
    }
}

impl fmt::Display for FqmElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:x}", self.0)
    }
}

impl fmt::Debug for FqnElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:#x},{:#x})", self.lo.0, self.hi.0)
    }
}

impl fmt::Display for FqnElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:x}:{:x}", self.hi.0, self.lo.0)
    }
}
