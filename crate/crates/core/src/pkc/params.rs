use std::fmt;
use std::str::FromStr;

use crate::gf::TowerField;
use crate::{Error, Result};

/// Scheme parameters `(q, m, n = 2m, k)` with `t = ⌊(n-k)/2⌋`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SchemeParams {
    q_log: u32,
    m: usize,
    k: usize,
    level: Option<u32>,
}

impl SchemeParams {
    pub const P128: SchemeParams = SchemeParams { q_log: 1, m: 32, k: 50, level: Some(128) };
    pub const P192: SchemeParams = SchemeParams { q_log: 1, m: 40, k: 64, level: Some(192) };
    pub const P256: SchemeParams = SchemeParams { q_log: 1, m: 46, k: 70, level: Some(256) };

    pub const NAMED: [SchemeParams; 3] = [Self::P128, Self::P192, Self::P256];

    /// Custom parameters with `q = 2^q_log`; requires `m < k < 2m`, `t ≥ 1`
    /// and `q_log·m ≤ 64`.
    pub fn toy(q_log: u32, m: usize, k: usize) -> Result<Self> {
        if q_log == 0 || m == 0 || q_log as usize * m > 64 {
            return Err(Error::Params(format!("need 1 ≤ log2(q)·m ≤ 64, got {q_log}·{m}")));
        }
        if !(m < k && k < 2 * m) {
            return Err(Error::Params(format!("need m < k < 2m, got m = {m}, k = {k}")));
        }
        if (2 * m - k) / 2 == 0 {
            return Err(Error::Params(format!("k = {k} leaves no error-correcting capacity")));
        }
        Ok(SchemeParams { q_log, m, k, level: None })
    }

    pub fn q_log(&self) -> u32 {
        self.q_log
    }

    pub fn q(&self) -> u64 {
        1 << self.q_log
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        2 * self.m
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn t(&self) -> usize {
        (self.n() - self.k) / 2
    }

    /// Target security level in bits for the named sets.
    pub fn security_level(&self) -> Option<u32> {
        self.level
    }

    pub fn tower(&self) -> TowerField {
        TowerField::new(self.q_log, self.m).expect("parameters were validated")
    }

    /// Bits per element of `F_{q^n}`.
    pub fn elem_bits(&self) -> u32 {
        self.q_log * self.n() as u32
    }

    /// `n²·log2(q)/8`, rounded up.
    pub fn public_key_bytes(&self) -> usize {
        (self.n() * self.elem_bits() as usize).div_ceil(8)
    }

    pub fn ciphertext_bytes(&self) -> usize {
        self.public_key_bytes()
    }

    /// `g ∥ mvec ∥ φ`: `n + 1` elements of `F_{q^n}` and four of `F_{q^m}`.
    pub fn secret_key_bytes(&self) -> usize {
        ((self.n() + 1) * self.elem_bits() as usize + 4 * self.m * self.q_log as usize).div_ceil(8)
    }

    /// `k` elements of `F_{q^m}`.
    pub fn plaintext_bytes(&self) -> usize {
        (self.k * self.m * self.q_log as usize).div_ceil(8)
    }

    /// File header tag: one byte for the named sets, `0xFF` followed by
    /// `log2 q`, `m`, `k` otherwise.
    pub fn tag(&self) -> Vec<u8> {
        match Self::NAMED.iter().position(|p| p == self) {
            Some(i) => vec![i as u8 + 1],
            None => vec![0xFF, self.q_log as u8, self.m as u8, self.k as u8],
        }
    }

    /// Parses a tag, returning the parameters and the tag length.
    pub fn from_tag(bytes: &[u8]) -> Result<(Self, usize)> {
        match bytes.first() {
            Some(&b @ 1..=3) => Ok((Self::NAMED[b as usize - 1], 1)),
            Some(0xFF) if bytes.len() >= 4 => {
                let p = Self::toy(bytes[1] as u32, bytes[2] as usize, bytes[3] as usize)
                    .map_err(|e| Error::Format(format!("bad parameter tag: {e}")))?;
                Ok((p, 4))
            }
            Some(b) => Err(Error::Format(format!("unknown parameter-set tag {b:#04x}"))),
            None => Err(Error::Format("missing parameter-set tag".into())),
        }
    }
}

impl fmt::Display for SchemeParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.level {
            Some(l) => write!(f, "P{l}"),
            None => write!(f, "toy:{},{},{}", self.q(), self.m, self.k),
        }
    }
}

impl FromStr for SchemeParams {
    type Err = Error;

    /// `P128`, `P192`, `P256` or `toy:q,m,k`.
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "P128" => return Ok(Self::P128),
            "P192" => return Ok(Self::P192),
            "P256" => return Ok(Self::P256),
            _ => {}
        }
        let body = s
            .strip_prefix("toy:")
            .ok_or_else(|| Error::Params(format!("unknown parameter set {s:?}")))?;
        let parts: Vec<u64> = body
            .split(',')
            .map(|p| p.trim().parse::<u64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| Error::Params(format!("expected toy:q,m,k, got {s:?}")))?;
        let [q, m, k] = parts[..] else {
            return Err(Error::Params(format!("expected toy:q,m,k, got {s:?}")));
        };
        if q < 2 || !q.is_power_of_two() {
            return Err(Error::Params(format!("q = {q} must be a power of two")));
        }
        Self::toy(q.trailing_zeros(), m as usize, k as usize)
    }
}
