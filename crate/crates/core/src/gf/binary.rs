use std::fmt;

use rand::Rng;

use super::{Field, FqmElem, FrobeniusField};
use crate::{Error, Result};

/// Carry-less product of two 64-bit polynomials.
#[inline]
fn clmul_soft(a: u64, b: u64) -> u128 {
    let a = a as u128;
    let mut b = b;
    let mut r = 0u128;
    while b != 0 {
        r ^= a << b.trailing_zeros();
        b &= b - 1;
    }
    r
}

#[cfg(target_arch = "x86_64")]
#[target_feature(enable = "pclmulqdq", enable = "sse2")]
unsafe fn clmul_hw(a: u64, b: u64) -> u128 {
    use std::arch::x86_64::{_mm_clmulepi64_si128, _mm_set_epi64x, _mm_storeu_si128};
    let r = _mm_clmulepi64_si128(_mm_set_epi64x(0, a as i64), _mm_set_epi64x(0, b as i64), 0);
    let mut out = [0u64; 2];
    _mm_storeu_si128(out.as_mut_ptr().cast(), r);
    (out[0] as u128) | ((out[1] as u128) << 64)
}

fn has_clmul() -> bool {
    #[cfg(target_arch = "x86_64")]
    {
        std::arch::is_x86_feature_detected!("pclmulqdq")
    }
    #[cfg(not(target_arch = "x86_64"))]
    {
        false
    }
}

fn deg128(p: u128) -> i32 {
    127 - p.leading_zeros() as i32
}

/// Reduces a binary polynomial modulo `f` (`deg f = d ≥ 1`).
fn reduce_slow(mut p: u128, f: u128, d: i32) -> u128 {
    while deg128(p) >= d {
        p ^= f << (deg128(p) - d);
    }
    p
}

fn mulmod_slow(a: u128, b: u128, f: u128, d: i32) -> u128 {
    // a, b already reduced, so both fit in 64 bits
    reduce_slow(clmul_soft(a as u64, b as u64), f, d)
}

fn gcd128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        a = reduce_slow(a, b, deg128(b));
        std::mem::swap(&mut a, &mut b);
    }
    a
}

fn prime_factors(mut n: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Rabin's irreducibility test for a binary polynomial of degree 1..=64.
pub fn is_irreducible_binary(f: u128) -> bool {
    let d = deg128(f);
    if !(1..=64).contains(&d) {
        return false;
    }
    if d == 1 {
        return true;
    }
    if f & 1 == 0 {
        return false;
    }
    let x = 2u128;
    // x^{2^i} mod f
    let frob = |i: u32| {
        let mut r = x;
        for _ in 0..i {
            r = mulmod_slow(r, r, f, d);
        }
        r
    };
    if frob(d as u32) != x {
        return false;
    }
    prime_factors(d as u32)
        .into_iter()
        .all(|p| gcd128(f, frob(d as u32 / p) ^ x) == 1)
}

/// The lexicographically least irreducible binary polynomial of degree `d`.
pub fn least_irreducible_binary(d: u32) -> u128 {
    assert!((1..=64).contains(&d), "degree {d} out of range");
    let lead = 1u128 << d;
    (0u128..)
        .map(|c| lead | c)
        .find(|&f| is_irreducible_binary(f))
        .expect("irreducible polynomials exist in every degree")
}

/// `F_2`-rank of a family of bit vectors.
pub fn bit_rank(vecs: impl IntoIterator<Item = u128>) -> usize {
    // basis[b] holds a vector whose leading bit is b
    let mut basis = [0u128; 128];
    let mut rank = 0;
    for mut v in vecs {
        while v != 0 {
            let b = deg128(v) as usize;
            if basis[b] == 0 {
                basis[b] = v;
                rank += 1;
                break;
            }
            v ^= basis[b];
        }
    }
    rank
}

/// The binary field `F_{2^d}`, `1 ≤ d ≤ 64`, viewed as `F_{q^m}` with
/// `q = 2^e` and `d = e·m`.
#[derive(Clone)]
pub struct BinaryField {
    degree: u32,
    q_log: u32,
    modulus: u128,
    low: u64,
    mask: u64,
    hw: bool,
    /// `frob[j][b] = (x^b)^{q^j}` for `j < m`.
    frob: Vec<Vec<u64>>,
    /// `F_2`-basis `β_0..β_{e-1}` of the subfield `F_q`.
    fq_basis: Vec<u64>,
    /// Row `b` holds the `F_2`-coordinates of `x^b` in the basis
    /// `{β_j x^i}` (bit `i·e + j`).
    fq_coord: Vec<u128>,
}

impl fmt::Debug for BinaryField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BinaryField")
            .field("degree", &self.degree)
            .field("q_log", &self.q_log)
            .field("modulus", &format_args!("{:#x}", self.modulus))
            .finish()
    }
}

impl BinaryField {
    /// Field of degree `q_log · m` over `F_2` with the given modulus.
    pub fn new(q_log: u32, m: u32, modulus: u128) -> Result<Self> {
        let degree = q_log
            .checked_mul(m)
            .filter(|d| (1..=64).contains(d) && q_log >= 1)
            .ok_or_else(|| Error::Params(format!("e·m = {q_log}·{m} must lie in 1..=64")))?;
        if deg128(modulus) != degree as i32 || !is_irreducible_binary(modulus) {
            return Err(Error::Params(format!(
                "{modulus:#x} is not an irreducible binary polynomial of degree {degree}"
            )));
        }
        let mask = if degree == 64 { u64::MAX } else { (1u64 << degree) - 1 };
        let mut field = BinaryField {
            degree,
            q_log,
            modulus,
            low: (modulus & mask as u128) as u64,
            mask,
            hw: has_clmul(),
            frob: Vec::new(),
            fq_basis: Vec::new(),
            fq_coord: Vec::new(),
        };
        field.build_frobenius_tables();
        field.build_subfield_basis();
        Ok(field)
    }

    /// Field with the lexicographically least binary modulus of degree `q_log·m`.
    pub fn with_least_modulus(q_log: u32, m: u32) -> Result<Self> {
        let d = q_log
            .checked_mul(m)
            .filter(|d| (1..=64).contains(d))
            .ok_or_else(|| Error::Params(format!("e·m = {q_log}·{m} must lie in 1..=64")))?;
        Self::new(q_log, m, least_irreducible_binary(d))
    }

    fn build_frobenius_tables(&mut self) {
        let m = self.ext_degree();
        let d = self.degree as usize;
        let identity: Vec<u64> = (0..d).map(|b| 1u64 << b).collect();
        let one_step: Vec<u64> = identity
            .iter()
            .map(|&x| {
                let mut y = x;
                for _ in 0..self.q_log {
                    y = self.mul_raw(y, y);
                }
                y
            })
            .collect();
        let mut tables = vec![identity];
        for j in 1..m {
            let prev = &tables[j - 1];
            let next = prev.iter().map(|&v| apply_table(&one_step, v)).collect();
            tables.push(next);
        }
        self.frob = tables;
    }

    fn build_subfield_basis(&mut self) {
        let e = self.q_log as usize;
        let m = self.ext_degree();
        let d = self.degree as usize;
        // Trace F_{q^m} -> F_q is surjective; its images of the bit basis span F_q.
        let mut basis: Vec<u64> = Vec::with_capacity(e);
        for b in 0..d {
            let mut tr = 0u64;
            for j in 0..m {
                tr ^= self.frob[j][b];
            }
            let mut cand = basis.clone();
            cand.push(tr);
            if bit_rank(cand.iter().map(|&v| v as u128)) == cand.len() {
                basis.push(tr);
            }
            if basis.len() == e {
                break;
            }
        }
        debug_assert_eq!(basis.len(), e);
        // F_2-basis {β_j x^i}: invert the d×d bit matrix by Gauss-Jordan.
        let mut rows: Vec<(u64, u128)> = Vec::with_capacity(d);
        for i in 0..m {
            for (j, &beta) in basis.iter().enumerate() {
                rows.push((self.mul_raw(beta, 1u64 << i), 1u128 << (i * e + j)));
            }
        }
        // rows[r] = (vector, tag); reduce to identity on the vector side
        for col in 0..d {
            let piv = (col..d)
                .find(|&r| (rows[r].0 >> col) & 1 == 1)
                .expect("β_j x^i form a basis");
            rows.swap(col, piv);
            let (pv, pt) = rows[col];
            for r in 0..d {
                if r != col && (rows[r].0 >> col) & 1 == 1 {
                    rows[r].0 ^= pv;
                    rows[r].1 ^= pt;
                }
            }
        }
        // now rows[b] = (x^b, coordinates of x^b)
        self.fq_coord = rows.into_iter().map(|(_, t)| t).collect();
        self.fq_basis = basis;
    }

    #[inline]
    fn clmul(&self, a: u64, b: u64) -> u128 {
        #[cfg(target_arch = "x86_64")]
        if self.hw {
            // SAFETY: the pclmulqdq feature was detected at construction.
            return unsafe { clmul_hw(a, b) };
        }
        clmul_soft(a, b)
    }

    #[inline]
    fn reduce(&self, mut p: u128) -> u64 {
        let d = self.degree;
        loop {
            let hi = p >> d;
            if hi == 0 {
                return p as u64;
            }
            p = (p & self.mask as u128) ^ self.clmul(hi as u64, self.low);
        }
    }

    #[inline]
    fn mul_raw(&self, a: u64, b: u64) -> u64 {
        self.reduce(self.clmul(a, b))
    }

    /// Degree of the field over `F_2`.
    pub fn bits(&self) -> u32 {
        self.degree
    }

    /// `e` with `q = 2^e`.
    pub fn q_log(&self) -> u32 {
        self.q_log
    }

    /// Degree `m` over `F_q`.
    pub fn ext_degree(&self) -> usize {
        (self.degree / self.q_log) as usize
    }

    pub fn modulus(&self) -> u128 {
        self.modulus
    }

    pub fn elem(&self, bits: u64) -> FqmElem {
        FqmElem(bits & self.mask)
    }

    pub fn mask(&self) -> u64 {
        self.mask
    }

    /// Every element of the field, in integer order. Only for small fields.
    pub fn elements(&self) -> impl Iterator<Item = FqmElem> + '_ {
        assert!(self.degree <= 24, "refusing to enumerate a field of 2^{} elements", self.degree);
        (0..(1u64 << self.degree)).map(FqmElem)
    }

    /// `true` iff `x` lies in the subfield `F_q`.
    pub fn in_base(&self, x: FqmElem) -> bool {
        self.frobenius(x, 1) == x
    }

    /// `F_2`-basis of `F_q` inside this field.
    pub fn fq_basis(&self) -> &[u64] {
        &self.fq_basis
    }

    /// Uniformly random element of `F_q`.
    pub fn random_base<R: Rng + ?Sized>(&self, rng: &mut R) -> FqmElem {
        let mut acc = 0;
        for &b in &self.fq_basis {
            if rng.gen::<bool>() {
                acc ^= b;
            }
        }
        FqmElem(acc)
    }

    /// All `q` elements of `F_q`.
    pub fn base_elements(&self) -> Vec<FqmElem> {
        (0..(1u32 << self.q_log))
            .map(|sel| {
                let mut acc = 0;
                for (j, &b) in self.fq_basis.iter().enumerate() {
                    if (sel >> j) & 1 == 1 {
                        acc ^= b;
                    }
                }
                FqmElem(acc)
            })
            .collect()
    }

    fn coord_bits(&self, a: FqmElem) -> u128 {
        let mut bits = 0u128;
        let mut v = a.0;
        while v != 0 {
            bits ^= self.fq_coord[v.trailing_zeros() as usize];
            v &= v - 1;
        }
        bits
    }

    /// `e`-bit label of an element of `F_q` w.r.t. [`fq_basis`](Self::fq_basis).
    pub fn base_to_bits(&self, s: FqmElem) -> u64 {
        debug_assert!(self.in_base(s));
        (self.coord_bits(s) & ((1u128 << self.q_log) - 1)) as u64
    }

    /// Inverse of [`base_to_bits`](Self::base_to_bits).
    pub fn base_from_bits(&self, bits: u64) -> FqmElem {
        let mut acc = 0;
        for (j, &b) in self.fq_basis.iter().enumerate() {
            if (bits >> j) & 1 == 1 {
                acc ^= b;
            }
        }
        FqmElem(acc)
    }

    /// Coordinates over `F_q` w.r.t. `(1, x, …, x^{m-1})`.
    pub fn fq_coords(&self, a: FqmElem) -> Vec<FqmElem> {
        let e = self.q_log as usize;
        let bits = self.coord_bits(a);
        (0..self.ext_degree())
            .map(|i| {
                let mut acc = 0;
                for (j, &b) in self.fq_basis.iter().enumerate() {
                    if (bits >> (i * e + j)) & 1 == 1 {
                        acc ^= b;
                    }
                }
                FqmElem(acc)
            })
            .collect()
    }

    /// Inverse of [`fq_coords`](Self::fq_coords).
    pub fn from_fq_coords(&self, coords: &[FqmElem]) -> FqmElem {
        let x = self.reduce(2);
        coords.iter().rev().fold(FqmElem(0), |acc, &c| FqmElem(self.mul_raw(acc.0, x) ^ c.0))
    }

    /// `F_q`-dimension of the span of the given elements.
    pub fn rank_over_base(&self, xs: &[FqmElem]) -> usize {
        let expanded = xs
            .iter()
            .flat_map(|&x| self.fq_basis.iter().map(move |&b| (x, b)))
            .map(|(x, b)| self.mul_raw(x.0, b) as u128);
        bit_rank(expanded) / self.q_log as usize
    }

    /// Absolute trace `F_{2^d} → F_2`.
    pub fn abs_trace(&self, a: FqmElem) -> u64 {
        let mut acc = 0u64;
        let mut x = a.0;
        for _ in 0..self.degree {
            acc ^= x;
            x = self.mul_raw(x, x);
        }
        acc
    }
}

#[inline]
fn apply_table(table: &[u64], mut x: u64) -> u64 {
    let mut r = 0;
    while x != 0 {
        r ^= table[x.trailing_zeros() as usize];
        x &= x - 1;
    }
    r
}

impl Field for BinaryField {
    type Elem = FqmElem;

    fn zero(&self) -> FqmElem {
        FqmElem(0)
    }

    fn one(&self) -> FqmElem {
        FqmElem(1)
    }

    #[inline]
    fn add(&self, a: FqmElem, b: FqmElem) -> FqmElem {
        FqmElem(a.0 ^ b.0)
    }

    #[inline]
    fn mul(&self, a: FqmElem, b: FqmElem) -> FqmElem {
        FqmElem(self.mul_raw(a.0, b.0))
    }

    fn inv(&self, a: FqmElem) -> Result<FqmElem> {
        if a.0 == 0 {
            return Err(Error::ZeroInverse);
        }
        let (mut r0, mut r1) = (self.modulus, a.0 as u128);
        let (mut s0, mut s1) = (0u128, 1u128);
        while r1 != 0 {
            while r0 != 0 && deg128(r0) >= deg128(r1) {
                let sh = deg128(r0) - deg128(r1);
                r0 ^= r1 << sh;
                s0 ^= s1 << sh;
            }
            std::mem::swap(&mut r0, &mut r1);
            std::mem::swap(&mut s0, &mut s1);
        }
        debug_assert_eq!(r0, 1);
        Ok(FqmElem(reduce_slow(s0, self.modulus, self.degree as i32) as u64))
    }

    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> FqmElem {
        FqmElem(rng.gen::<u64>() & self.mask)
    }

    fn square(&self, a: FqmElem) -> FqmElem {
        self.mul(a, a)
    }
}

impl FrobeniusField for BinaryField {
    fn frobenius(&self, a: FqmElem, i: usize) -> FqmElem {
        let j = i % self.ext_degree();
        if j == 0 {
            return a;
        }
        FqmElem(apply_table(&self.frob[j], a.0))
    }
}
