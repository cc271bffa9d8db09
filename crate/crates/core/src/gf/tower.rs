use std::fmt;
use std::sync::Arc;

use rand::Rng;

use super::binary::{bit_rank, BinaryField};
use super::poly;
use super::{Field, FqmElem, FqnElem, FrobeniusField};
use crate::{Error, Result};

/// Which subfield a rank weight or polynomial-element test is taken over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Subfield {
    /// The base field `F_q`.
    Fq,
    /// The middle field `F_{q^m}`.
    Fqm,
}

/// `F_{q^n} = F_{q^m}[θ]/(θ² + θ + c)`.
#[derive(Clone, Debug)]
pub struct QuadField {
    mid: BinaryField,
    c: FqmElem,
    /// `θ^{q^i}` for `0 ≤ i < n`.
    theta_frob: Vec<FqnElem>,
}

impl QuadField {
    fn new(mid: BinaryField, c: FqmElem) -> Result<Self> {
        if mid.abs_trace(c) != 1 {
            return Err(Error::Params(format!(
                "x^2 + x + {c:?} is reducible over the middle field"
            )));
        }
        let mut f = QuadField { mid, c, theta_frob: Vec::new() };
        let n = 2 * f.mid.ext_degree();
        let q_log = f.mid.q_log();
        let mut t = FqnElem::new(FqmElem(0), FqmElem(1));
        for _ in 0..n {
            f.theta_frob.push(t);
            for _ in 0..q_log {
                t = f.mul(t, t);
            }
        }
        debug_assert_eq!(t, FqnElem::new(FqmElem(0), FqmElem(1)));
        Ok(f)
    }

    pub fn mid(&self) -> &BinaryField {
        &self.mid
    }

    /// Constant term `c` of the modulus `x² + x + c`.
    pub fn constant(&self) -> FqmElem {
        self.c
    }

    /// `θ`, the second element of the basis `(1, θ)` over `F_{q^m}`.
    pub fn theta(&self) -> FqnElem {
        FqnElem::new(FqmElem(0), FqmElem(1))
    }

    /// Multiplication by an element of the middle field.
    #[inline]
    pub fn scale(&self, s: FqmElem, a: FqnElem) -> FqnElem {
        FqnElem::new(self.mid.mul(s, a.lo), self.mid.mul(s, a.hi))
    }
}

impl Field for QuadField {
    type Elem = FqnElem;

    fn zero(&self) -> FqnElem {
        FqnElem::ZERO
    }

    fn one(&self) -> FqnElem {
        FqnElem::ONE
    }

    #[inline]
    fn add(&self, a: FqnElem, b: FqnElem) -> FqnElem {
        FqnElem::new(FqmElem(a.lo.0 ^ b.lo.0), FqmElem(a.hi.0 ^ b.hi.0))
    }

    #[inline]
    fn mul(&self, a: FqnElem, b: FqnElem) -> FqnElem {
        let m = &self.mid;
        if a.hi.0 == 0 && b.hi.0 == 0 {
            return FqnElem::new(m.mul(a.lo, b.lo), FqmElem(0));
        }
        let ll = m.mul(a.lo, b.lo);
        let hh = m.mul(a.hi, b.hi);
        let cross = m.mul(m.add(a.lo, a.hi), m.add(b.lo, b.hi));
        let hh_c = if self.c.0 == 1 { hh } else { m.mul(hh, self.c) };
        // θ² = θ + c
        FqnElem::new(
            FqmElem(ll.0 ^ hh_c.0),
            FqmElem(cross.0 ^ ll.0),
        )
    }

    fn inv(&self, a: FqnElem) -> Result<FqnElem> {
        let m = &self.mid;
        // (a0 + a1θ)(a0 + a1 + a1θ) = a0² + a0·a1 + c·a1²
        let norm = m.add(
            m.add(m.mul(a.lo, a.lo), m.mul(a.lo, a.hi)),
            m.mul(self.c, m.mul(a.hi, a.hi)),
        );
        let ni = m.inv(norm)?;
        Ok(FqnElem::new(m.mul(m.add(a.lo, a.hi), ni), m.mul(a.hi, ni)))
    }

    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> FqnElem {
        FqnElem::new(self.mid.random(rng), self.mid.random(rng))
    }
}

impl FrobeniusField for QuadField {
    fn frobenius(&self, a: FqnElem, i: usize) -> FqnElem {
        let i = i % self.theta_frob.len();
        if i == 0 {
            return a;
        }
        let lo = self.mid.frobenius(a.lo, i);
        let hi = self.mid.frobenius(a.hi, i);
        let t = self.theta_frob[i];
        FqnElem::new(
            FqmElem(lo.0 ^ self.mid.mul(hi, t.lo).0),
            self.mid.mul(hi, t.hi),
        )
    }
}

struct TowerInner {
    q_log: u32,
    m: usize,
    top: QuadField,
}

/// The tower `F_q ⊂ F_{q^m} ⊂ F_{q^n}`, `n = 2m`, `q = 2^e`.
///
/// Cheap to clone; the tables are shared.
#[derive(Clone)]
pub struct TowerField(Arc<TowerInner>);

impl fmt::Debug for TowerField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TowerField")
            .field("q", &self.q())
            .field("m", &self.m())
            .field("mid_modulus", &format_args!("{:#x}", self.mid().modulus()))
            .field("top_constant", &self.top().constant())
            .finish()
    }
}

impl PartialEq for TowerField {
    fn eq(&self, other: &Self) -> bool {
        self.q_log() == other.q_log()
            && self.m() == other.m()
            && self.mid().modulus() == other.mid().modulus()
            && self.top().constant() == other.top().constant()
    }
}

impl Eq for TowerField {}

impl TowerField {
    /// Tower with the lexicographically least moduli: the least binary
    /// irreducible of degree `e·m`, then `x² + x + c` with the least `c` of
    /// absolute trace one.
    pub fn new(q_log: u32, m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::Params("m must be positive".into()));
        }
        let mid = BinaryField::with_least_modulus(q_log, m as u32)?;
        // the trace is F_2-linear, so the least c with trace one is the
        // least basis monomial with trace one
        let c = (0..mid.bits())
            .map(|b| FqmElem(1 << b))
            .find(|&c| mid.abs_trace(c) == 1)
            .expect("trace is onto F_2");
        Self::from_parts(mid, c)
    }

    /// Tower from explicit moduli.
    pub fn with_moduli(q_log: u32, m: usize, mid_modulus: u128, top_constant: FqmElem) -> Result<Self> {
        let mid = BinaryField::new(q_log, m as u32, mid_modulus)?;
        Self::from_parts(mid, top_constant)
    }

    fn from_parts(mid: BinaryField, c: FqmElem) -> Result<Self> {
        let q_log = mid.q_log();
        let m = mid.ext_degree();
        let top = QuadField::new(mid, c)?;
        Ok(TowerField(Arc::new(TowerInner { q_log, m, top })))
    }

    pub fn q_log(&self) -> u32 {
        self.0.q_log
    }

    pub fn q(&self) -> u64 {
        1 << self.0.q_log
    }

    pub fn m(&self) -> usize {
        self.0.m
    }

    pub fn n(&self) -> usize {
        2 * self.0.m
    }

    pub fn mid(&self) -> &BinaryField {
        &self.0.top.mid
    }

    pub fn top(&self) -> &QuadField {
        &self.0.top
    }

    /// Number of bits in a packed `F_{q^n}` element.
    pub fn top_bits(&self) -> usize {
        2 * self.mid().bits() as usize
    }

    pub fn embed(&self, x: FqmElem) -> FqnElem {
        FqnElem::from(x)
    }

    /// `x ↦ x^{q^i}` on `F_{q^n}`.
    pub fn frobenius(&self, x: FqnElem, i: usize) -> FqnElem {
        self.top().frobenius(x, i)
    }

    /// Componentwise Frobenius of a vector.
    pub fn frobenius_vec(&self, v: &[FqnElem], i: usize) -> Vec<FqnElem> {
        v.iter().map(|&x| self.frobenius(x, i)).collect()
    }

    /// `(x^{[n-1]}, …, x^{[1]}, x)`, the generator vector of the partial
    /// cyclic Gabidulin code of `x`.
    pub fn conjugate_vector(&self, x: FqnElem) -> Vec<FqnElem> {
        let n = self.n();
        (0..n).map(|j| self.frobenius(x, n - 1 - j)).collect()
    }

    /// Packs an element as a `2·e·m`-bit integer: `lo` bits first, then `hi`.
    pub fn pack(&self, x: FqnElem) -> u128 {
        x.lo.0 as u128 | ((x.hi.0 as u128) << self.mid().bits())
    }

    pub fn unpack(&self, bits: u128) -> FqnElem {
        let d = self.mid().bits();
        let mask = self.mid().mask() as u128;
        FqnElem::new(FqmElem((bits & mask) as u64), FqmElem(((bits >> d) & mask) as u64))
    }

    /// Coordinates over `F_{q^m}` w.r.t. the basis `(1, θ)`.
    pub fn expand_fqm(&self, x: FqnElem) -> [FqmElem; 2] {
        [x.lo, x.hi]
    }

    pub fn collapse_fqm(&self, c: [FqmElem; 2]) -> FqnElem {
        FqnElem::new(c[0], c[1])
    }

    /// Coordinates over `F_q` w.r.t. `(1, x, …, x^{m-1}, θ, xθ, …, x^{m-1}θ)`.
    pub fn expand_fq(&self, x: FqnElem) -> Vec<FqmElem> {
        let mut c = self.mid().fq_coords(x.lo);
        c.extend(self.mid().fq_coords(x.hi));
        c
    }

    pub fn collapse_fq(&self, c: &[FqmElem]) -> FqnElem {
        let m = self.m();
        assert_eq!(c.len(), 2 * m, "expected {} coordinates", 2 * m);
        FqnElem::new(self.mid().from_fq_coords(&c[..m]), self.mid().from_fq_coords(&c[m..]))
    }

    /// Rank weight of a vector over `F_{q^n}`.
    pub fn rank_weight(&self, v: &[FqnElem], base: Subfield) -> usize {
        match base {
            Subfield::Fq => {
                let mid = self.mid();
                let expanded = v.iter().flat_map(|&x| {
                    mid.fq_basis()
                        .iter()
                        .map(move |&b| self.pack(self.top().scale(FqmElem(b), x)))
                });
                bit_rank(expanded) / self.q_log() as usize
            }
            Subfield::Fqm => {
                let Some(&pivot) = v.iter().find(|x| **x != FqnElem::ZERO) else {
                    return 0;
                };
                let pinv = self.top().inv(pivot).expect("pivot is nonzero");
                if v.iter().all(|&x| self.top().mul(x, pinv).in_mid()) {
                    1
                } else {
                    2
                }
            }
        }
    }

    /// Rank weight over `F_q` of a vector over `F_{q^m}`.
    pub fn rank_weight_mid(&self, v: &[FqmElem]) -> usize {
        self.mid().rank_over_base(v)
    }

    /// `true` iff the Frobenius conjugates of `g` form an `F_q`-basis of
    /// `F_{q^n}`: the circulant generated by `(g^{[n-1]}, …, g)` is a Moore
    /// matrix, and it is invertible iff its polynomial is coprime to `x^n - 1`.
    pub fn is_normal_element(&self, g: FqnElem) -> bool {
        if g == FqnElem::ZERO {
            return false;
        }
        let top = self.top();
        let conj = self.conjugate_vector(g);
        let gcd = poly::gcd(top, &conj, &poly::x_pow_n_minus_one(top, self.n()));
        gcd.len() == 1
    }

    /// `true` iff `1, α, …, α^{d-1}` is a basis of `F_{q^n}` over the subfield
    /// (`d = n` over `F_q`, `d = 2` over `F_{q^m}`).
    pub fn is_polynomial_element(&self, alpha: FqnElem, over: Subfield) -> bool {
        let d = match over {
            Subfield::Fq => self.n(),
            Subfield::Fqm => 2,
        };
        let mut powers = Vec::with_capacity(d);
        let mut p = FqnElem::ONE;
        for _ in 0..d {
            powers.push(p);
            p = self.top().mul(p, alpha);
        }
        self.rank_weight(&powers, over) == d
    }

    /// Polynomial-element test for `F_{q^m}` over `F_q`.
    pub fn is_polynomial_element_mid(&self, alpha: FqmElem) -> bool {
        let mid = self.mid();
        let powers: Vec<FqmElem> = (0..self.m()).map(|i| mid.pow(alpha, i as u128)).collect();
        mid.rank_over_base(&powers) == self.m()
    }

    /// Every element of `F_{q^n}`. Only for small towers.
    pub fn top_elements(&self) -> impl Iterator<Item = FqnElem> + '_ {
        assert!(self.top_bits() <= 24, "refusing to enumerate 2^{} elements", self.top_bits());
        (0..(1u128 << self.top_bits())).map(|b| self.unpack(b))
    }

    /// Length-prefixed encoding: `u16` little-endian payload length, then
    /// `e`, `m`, the mid modulus (`e·m + 1` bits) and the two top-modulus
    /// coefficients (`e·m` bits each), bit order little-endian within bytes.
    pub fn to_bytes(&self) -> Vec<u8> {
        let d = self.mid().bits() as usize;
        let mut payload = vec![self.q_log() as u8, self.m() as u8];
        payload.extend(le_bits(self.mid().modulus(), d + 1));
        payload.extend(le_bits(1, d));
        payload.extend(le_bits(self.top().constant().0 as u128, d));
        let mut out = (payload.len() as u16).to_le_bytes().to_vec();
        out.extend(payload);
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let fmt_err = |s: &str| Error::Format(format!("tower field: {s}"));
        if bytes.len() < 4 {
            return Err(fmt_err("truncated header"));
        }
        let len = u16::from_le_bytes([bytes[0], bytes[1]]) as usize;
        let payload = &bytes[2..];
        if payload.len() != len {
            return Err(fmt_err("length prefix does not match buffer"));
        }
        let (q_log, m) = (payload[0] as u32, payload[1] as usize);
        let d = q_log as usize * m;
        if !(1..=64).contains(&d) {
            return Err(fmt_err("unsupported degree"));
        }
        let w_mod = (d + 1).div_ceil(8);
        let w = d.div_ceil(8);
        if payload.len() != 2 + w_mod + 2 * w {
            return Err(fmt_err("bad payload length"));
        }
        let mut off = 2;
        let modulus = from_le_bits(&payload[off..off + w_mod]);
        off += w_mod;
        let c1 = from_le_bits(&payload[off..off + w]);
        off += w;
        let c0 = from_le_bits(&payload[off..off + w]);
        if c1 != 1 {
            return Err(fmt_err("top modulus must have the form x^2 + x + c"));
        }
        Self::with_moduli(q_log, m, modulus, FqmElem(c0 as u64))
    }
}

fn le_bits(v: u128, nbits: usize) -> Vec<u8> {
    v.to_le_bytes()[..nbits.div_ceil(8)].to_vec()
}

fn from_le_bits(b: &[u8]) -> u128 {
    b.iter().rev().fold(0u128, |acc, &x| (acc << 8) | x as u128)
}
