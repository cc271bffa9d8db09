//! Binary formats.
//!
//! Key files start with `RLK1`, ciphertext files with `RLC1`, followed by
//! the parameter tag and a little-endian bit-packed payload. Elements of
//! `F_{q^n}` take `n·log2 q` bits, low coordinate first. Public and secret
//! key payloads have different lengths, which tells them apart.

use super::{Ciphertext, Phi, PublicKey, SchemeParams, SecretKey};
use crate::bits::{BitReader, BitWriter};
use crate::gf::{FqmElem, FqnElem, TowerField};
use crate::semilinear::FqnOverFqm;
use crate::rankmat::Mat;
use crate::{Error, Result};

const KEY_MAGIC: &[u8; 4] = b"RLK1";
const CT_MAGIC: &[u8; 4] = b"RLC1";

fn header(magic: &[u8; 4], params: SchemeParams) -> Vec<u8> {
    let mut out = magic.to_vec();
    out.extend(params.tag());
    out
}

fn parse_header<'a>(magic: &[u8; 4], bytes: &'a [u8]) -> Result<(SchemeParams, &'a [u8])> {
    let rest = bytes
        .strip_prefix(magic.as_slice())
        .ok_or_else(|| Error::Format(format!("missing {} magic", String::from_utf8_lossy(magic))))?;
    let (params, len) = SchemeParams::from_tag(rest)?;
    Ok((params, &rest[len..]))
}

fn push_elems(w: &mut BitWriter, tower: &TowerField, v: &[FqnElem]) {
    for &x in v {
        w.push(tower.pack(x), tower.top_bits() as u32);
    }
}

fn read_elems(r: &mut BitReader, tower: &TowerField, count: usize) -> Result<Vec<FqnElem>> {
    (0..count)
        .map(|_| {
            r.read(tower.top_bits() as u32)
                .map(|b| tower.unpack(b))
                .ok_or_else(|| Error::Format("payload truncated".into()))
        })
        .collect()
}

fn check_len(payload: &[u8], want: usize, what: &str) -> Result<()> {
    if payload.len() != want {
        return Err(Error::Format(format!("{what} payload must be {want} bytes, got {}", payload.len())));
    }
    Ok(())
}

fn check_padding(r: &BitReader) -> Result<()> {
    if r.rest_is_zero() {
        Ok(())
    } else {
        Err(Error::Format("nonzero padding bits".into()))
    }
}

impl PublicKey {
    /// The `n` elements of `g'`, exactly `n²·log2(q)/8` bytes.
    pub fn payload(&self) -> Vec<u8> {
        let mut w = BitWriter::new();
        push_elems(&mut w, &self.tower, &self.gprime);
        w.finish()
    }

    pub fn from_payload(params: SchemeParams, payload: &[u8]) -> Result<Self> {
        check_len(payload, params.public_key_bytes(), "public key")?;
        let tower = params.tower();
        let mut r = BitReader::new(payload);
        let gprime = read_elems(&mut r, &tower, params.n())?;
        check_padding(&r)?;
        Ok(PublicKey { params, tower, gprime })
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = header(KEY_MAGIC, self.params);
        out.extend(self.payload());
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let (params, payload) = parse_header(KEY_MAGIC, bytes)?;
        Self::from_payload(params, payload)
    }
}

impl SecretKey {
    /// `g ∥ m ∥ φ`, with `φ` as its four matrix entries over `F_{q^m}`.
    pub fn payload(&self) -> Vec<u8> {
        let tower = self.tower();
        let mut w = BitWriter::new();
        push_elems(&mut w, tower, &[self.g]);
        push_elems(&mut w, tower, &self.mvec);
        let m = self.phi.matrix();
        for i in 0..2 {
            for &c in m.row(i) {
                w.push(c.0 as u128, tower.mid().bits());
            }
        }
        w.finish()
    }

    pub fn from_payload(params: SchemeParams, payload: &[u8]) -> Result<Self> {
        check_len(payload, params.secret_key_bytes(), "secret key")?;
        let tower = params.tower();
        let mut r = BitReader::new(payload);
        let g = read_elems(&mut r, &tower, 1)?[0];
        let mvec = read_elems(&mut r, &tower, params.n())?;
        let bits = tower.mid().bits();
        let mut entries = Vec::with_capacity(4);
        for _ in 0..4 {
            entries.push(FqmElem(r.read(bits).ok_or_else(|| Error::Format("payload truncated".into()))? as u64));
        }
        check_padding(&r)?;
        let matrix = Mat::from_rows(vec![entries[..2].to_vec(), entries[2..].to_vec()]);
        let phi = Phi::from_matrix(FqnOverFqm(tower), matrix).map_err(|e| Error::Format(format!("bad φ: {e}")))?;
        SecretKey::from_parts(params, g, mvec, phi).map_err(|e| Error::Format(format!("invalid secret key: {e}")))
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = header(KEY_MAGIC, self.params);
        out.extend(self.payload());
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let (params, payload) = parse_header(KEY_MAGIC, bytes)?;
        Self::from_payload(params, payload)
    }
}

impl Ciphertext {
    pub fn payload(&self) -> Vec<u8> {
        let mut w = BitWriter::new();
        push_elems(&mut w, &self.params.tower(), &self.y);
        w.finish()
    }

    pub fn from_payload(params: SchemeParams, payload: &[u8]) -> Result<Self> {
        check_len(payload, params.ciphertext_bytes(), "ciphertext")?;
        let mut r = BitReader::new(payload);
        let y = read_elems(&mut r, &params.tower(), params.n())?;
        check_padding(&r)?;
        Ok(Ciphertext { params, y })
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = header(CT_MAGIC, self.params);
        out.extend(self.payload());
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let (params, payload) = parse_header(CT_MAGIC, bytes)?;
        Self::from_payload(params, payload)
    }
}

/// Plaintext: `k` elements of `F_{q^m}`, `m·log2 q` bits each.
pub fn encode_plaintext(params: SchemeParams, x: &[FqmElem]) -> Result<Vec<u8>> {
    if x.len() != params.k() {
        return Err(Error::Params(format!("plaintext must have {} entries", params.k())));
    }
    let bits = params.q_log() * params.m() as u32;
    let mut w = BitWriter::new();
    for &v in x {
        if bits < 64 && v.0 >> bits != 0 {
            return Err(Error::Params("plaintext entry outside F_{q^m}".into()));
        }
        w.push(v.0 as u128, bits);
    }
    Ok(w.finish())
}

pub fn decode_plaintext(params: SchemeParams, bytes: &[u8]) -> Result<Vec<FqmElem>> {
    check_len(bytes, params.plaintext_bytes(), "plaintext")?;
    let bits = params.q_log() * params.m() as u32;
    let mut r = BitReader::new(bytes);
    let x = (0..params.k()).map(|_| FqmElem(r.read(bits).expect("length checked") as u64)).collect();
    check_padding(&r)?;
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::super::keygen;
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn sizes_and_round_trips() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for (p, pk_len) in [(SchemeParams::P128, 512), (SchemeParams::P192, 800), (SchemeParams::P256, 1058)] {
            let (pk, sk) = keygen(p, &mut rng).unwrap();
            assert_eq!(pk.payload().len(), pk_len);
            assert_eq!(pk.to_bytes().len(), pk_len + 5);
            assert_eq!(PublicKey::from_bytes(&pk.to_bytes()).unwrap(), pk);
            assert_eq!(SecretKey::from_bytes(&sk.to_bytes()).unwrap(), sk);
            let x: Vec<FqmElem> = (0..p.k()).map(|i| FqmElem(i as u64)).collect();
            let ct = pk.encrypt(&x, &mut rng).unwrap();
            assert_eq!(ct.payload().len(), pk_len);
            assert_eq!(Ciphertext::from_bytes(&ct.to_bytes()).unwrap(), ct);
            let pt = encode_plaintext(p, &x).unwrap();
            assert_eq!(pt.len(), p.plaintext_bytes());
            assert_eq!(decode_plaintext(p, &pt).unwrap(), x);
        }
    }

    #[test]
    fn toy_keys_carry_their_parameters() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let p = SchemeParams::toy(2, 5, 7).unwrap();
        let (pk, sk) = keygen(p, &mut rng).unwrap();
        let b = pk.to_bytes();
        assert_eq!(&b[..8], &[b'R', b'L', b'K', b'1', 0xFF, 1 + 1, 5, 7][..]);
        assert_eq!(PublicKey::from_bytes(&b).unwrap(), pk);
        assert_eq!(SecretKey::from_bytes(&sk.to_bytes()).unwrap(), sk);
    }

    #[test]
    fn malformed_inputs() {
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        let p = SchemeParams::P128;
        let (pk, sk) = keygen(p, &mut rng).unwrap();
        let b = pk.to_bytes();
        assert!(PublicKey::from_bytes(&b[..b.len() - 1]).is_err());
        let mut long = b.clone();
        long.push(0);
        assert!(PublicKey::from_bytes(&long).is_err());
        let mut bad_tag = b.clone();
        bad_tag[4] = 0x09;
        assert!(matches!(PublicKey::from_bytes(&bad_tag), Err(Error::Format(_))));
        assert!(PublicKey::from_bytes(b"RLC1\x01").is_err());
        // a public key is not a secret key and vice versa
        assert!(SecretKey::from_bytes(&b).is_err());
        assert!(PublicKey::from_bytes(&sk.to_bytes()).is_err());
        assert!(decode_plaintext(p, &vec![0u8; p.plaintext_bytes()]).is_ok());
        // 35 plaintext bits leave 5 padding bits in the last byte
        let toy = SchemeParams::toy(1, 5, 7).unwrap();
        assert!(decode_plaintext(toy, &[0, 0, 0, 0, 0x07]).is_ok());
        assert!(decode_plaintext(toy, &[0, 0, 0, 0, 0x08]).is_err());
    }
}
