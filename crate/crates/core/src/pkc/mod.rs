//! The encryption scheme.
//!
//! Secret key `(g, m, φ)`: a normal element `g` of `F_{q^n}`, a vector `m`
//! with `wt_{q^m}(m) = 2` whose polynomial is coprime to `x^n - 1`, and a
//! `F_{q^m}`-linear automorphism `φ` of `F_{q^n}` that is not fully linear.
//! With `G = P_k(ḡ)` and `M = P_n(m)`, the public key is `g'` such that
//! `P_k(g') = φ(GM)·φ(M)^{-1}`.
//!
//! Encryption of `x ∈ F_{q^m}^k` is `y = x·P_k(g') + e` with
//! `wt_q(e) = t`; decryption decodes `φ^{-1}(y·φ(M))·M^{-1} = xG + e`.

mod codec;
mod params;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::gabidulin::{sample_normal_element, sample_rank_error, GabidulinCode};
use crate::gf::{Field, FqmElem, FqnElem, Subfield, TowerField};
use crate::rankmat::{circulant, circulant_inverse, circulant_invertible, vec_mul_circulant, Mat};
use crate::semilinear::{FqnOverFqm, SemilinearMap};
use crate::{Error, Result};

pub use codec::{decode_plaintext, encode_plaintext};
pub use params::SchemeParams;

/// `F_{q^m}`-linear automorphism of `F_{q^n}`.
pub type Phi = SemilinearMap<FqnOverFqm>;

const MAX_ATTEMPTS: usize = 10_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PublicKey {
    params: SchemeParams,
    tower: TowerField,
    gprime: Vec<FqnElem>,
}

#[derive(Clone, Debug)]
pub struct SecretKey {
    params: SchemeParams,
    g: FqnElem,
    mvec: Vec<FqnElem>,
    phi: Phi,
    phi_inv: Phi,
    code: GabidulinCode,
    /// First row of `M^{-1}`.
    m_inv: Vec<FqnElem>,
    /// First row of `φ(M)`.
    phi_m: Vec<FqnElem>,
}

impl PartialEq for SecretKey {
    fn eq(&self, other: &Self) -> bool {
        self.params == other.params && self.g == other.g && self.mvec == other.mvec && self.phi == other.phi
    }
}

impl Eq for SecretKey {}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ciphertext {
    params: SchemeParams,
    y: Vec<FqnElem>,
}

/// Result of decryption together with the removed error.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decryption {
    pub x: Vec<FqmElem>,
    pub e: Vec<FqnElem>,
}

/// `g'` with `P_k(g') = φ(P_k(ḡ)·P_n(m))·P_n(φ(m))^{-1}`, or `None` when
/// `φ(M)` is singular. Products of partial circulants are partial circulants
/// and `φ` acts entrywise, so only first rows are needed.
pub fn public_vector(tower: &TowerField, g: FqnElem, mvec: &[FqnElem], phi: &Phi) -> Option<Vec<FqnElem>> {
    let top = tower.top();
    let gbar = tower.conjugate_vector(g);
    let gm = phi.apply_vec(&vec_mul_circulant(top, &gbar, mvec));
    let phi_m_inv = circulant_inverse(top, &phi.apply_vec(mvec))?;
    Some(vec_mul_circulant(top, &gm, &phi_m_inv))
}

/// Draws `m = a·M_s` with `a = (1, θ)` and `M_s` a uniform `2 × n` matrix
/// over `F_{q^m}`, until `wt_{q^m}(m) = 2` and `gcd(m(x), x^n - 1) = 1`.
pub fn sample_mvec<R: Rng + ?Sized>(tower: &TowerField, rng: &mut R) -> Vec<FqnElem> {
    let mid = tower.mid();
    loop {
        let v: Vec<FqnElem> = (0..tower.n()).map(|_| FqnElem::new(mid.random(rng), mid.random(rng))).collect();
        if is_valid_mvec(tower, &v) {
            return v;
        }
    }
}

pub fn is_valid_mvec(tower: &TowerField, mvec: &[FqnElem]) -> bool {
    mvec.len() == tower.n()
        && tower.rank_weight(mvec, Subfield::Fqm) == 2
        && circulant_invertible(tower.top(), mvec)
}

impl SecretKey {
    /// Validates `(g, m, φ)` and precomputes the decryption data.
    pub fn from_parts(params: SchemeParams, g: FqnElem, mvec: Vec<FqnElem>, phi: Phi) -> Result<Self> {
        let tower = params.tower();
        if *phi.extension() != FqnOverFqm(tower.clone()) {
            return Err(Error::Params("φ is defined over a different tower".into()));
        }
        let code = GabidulinCode::new(&tower, g, params.k())?;
        if !is_valid_mvec(&tower, &mvec) {
            return Err(Error::Params("m must have F_{q^m}-rank 2 and be coprime to x^n - 1".into()));
        }
        if phi.is_fully_linear() {
            return Err(Error::Params("φ must not be fully linear".into()));
        }
        let top = tower.top();
        let m_inv = circulant_inverse(top, &mvec).expect("validated above");
        let phi_m = phi.apply_vec(&mvec);
        if !circulant_invertible(top, &phi_m) {
            return Err(Error::Singular);
        }
        let phi_inv = phi.inverse();
        Ok(SecretKey { params, g, mvec, phi, phi_inv, code, m_inv, phi_m })
    }

    pub fn params(&self) -> SchemeParams {
        self.params
    }

    pub fn tower(&self) -> &TowerField {
        self.code.tower()
    }

    pub fn g(&self) -> FqnElem {
        self.g
    }

    pub fn mvec(&self) -> &[FqnElem] {
        &self.mvec
    }

    pub fn phi(&self) -> &Phi {
        &self.phi
    }

    pub fn code(&self) -> &GabidulinCode {
        &self.code
    }

    /// Recomputes the public key.
    pub fn public_key(&self) -> PublicKey {
        let gprime = public_vector(self.tower(), self.g, &self.mvec, &self.phi).expect("φ(M) checked invertible");
        PublicKey { params: self.params, tower: self.tower().clone(), gprime }
    }

    /// `φ^{-1}(y·φ(M))·M^{-1}`.
    pub fn unmask(&self, y: &[FqnElem]) -> Vec<FqnElem> {
        let top = self.tower().top();
        let z = self.phi_inv.apply_vec(&vec_mul_circulant(top, y, &self.phi_m));
        vec_mul_circulant(top, &z, &self.m_inv)
    }

    pub fn decrypt(&self, ct: &Ciphertext) -> Result<Vec<FqmElem>> {
        self.decrypt_full(ct).map(|d| d.x)
    }

    /// Decryption that also returns the error vector.
    ///
    /// Fails with [`Error::InvalidCiphertext`] if decoding fails or the
    /// recovered message leaves `F_{q^m}`.
    pub fn decrypt_full(&self, ct: &Ciphertext) -> Result<Decryption> {
        if ct.params != self.params || ct.y.len() != self.params.n() {
            return Err(Error::Params("ciphertext belongs to another parameter set".into()));
        }
        let y1 = self.unmask(&ct.y);
        let d = self.code.decode(&y1).map_err(|_| Error::InvalidCiphertext)?;
        if !d.x.iter().all(|v| v.in_mid()) {
            return Err(Error::InvalidCiphertext);
        }
        Ok(Decryption { x: d.x.iter().map(|v| v.lo).collect(), e: d.e })
    }
}

impl PublicKey {
    pub fn from_vector(params: SchemeParams, gprime: Vec<FqnElem>) -> Result<Self> {
        if gprime.len() != params.n() {
            return Err(Error::Params(format!("g' must have length {}", params.n())));
        }
        Ok(PublicKey { params, tower: params.tower(), gprime })
    }

    pub fn params(&self) -> SchemeParams {
        self.params
    }

    pub fn tower(&self) -> &TowerField {
        &self.tower
    }

    pub fn gprime(&self) -> &[FqnElem] {
        &self.gprime
    }

    pub fn t(&self) -> usize {
        self.params.t()
    }

    /// `P_k(g')`.
    pub fn generator(&self) -> Mat<FqnElem> {
        circulant(&self.gprime, self.params.k())
    }

    fn check_plaintext(&self, x: &[FqmElem]) -> Result<()> {
        if x.len() != self.params.k() {
            return Err(Error::Params(format!("plaintext must have {} entries", self.params.k())));
        }
        let mask = self.tower.mid().mask();
        if x.iter().any(|v| v.0 & !mask != 0) {
            return Err(Error::Params("plaintext entry outside F_{q^m}".into()));
        }
        Ok(())
    }

    pub fn encrypt<R: Rng + ?Sized>(&self, x: &[FqmElem], rng: &mut R) -> Result<Ciphertext> {
        self.check_plaintext(x)?;
        let e = sample_rank_error(&self.tower, self.t(), rng)?;
        let e: Vec<FqnElem> = e.into_iter().map(FqnElem::from).collect();
        self.encrypt_with_error(x, &e)
    }

    /// `x·P_k(g') + e` for a caller-chosen error.
    pub fn encrypt_with_error(&self, x: &[FqmElem], e: &[FqnElem]) -> Result<Ciphertext> {
        self.check_plaintext(x)?;
        if e.len() != self.params.n() {
            return Err(Error::Params(format!("error must have length {}", self.params.n())));
        }
        let top = self.tower.top();
        let mut padded: Vec<FqnElem> = x.iter().map(|&v| FqnElem::from(v)).collect();
        padded.resize(self.params.n(), FqnElem::ZERO);
        let c = vec_mul_circulant(top, &padded, &self.gprime);
        let y = c.iter().zip(e).map(|(&a, &b)| top.add(a, b)).collect();
        Ok(Ciphertext { params: self.params, y })
    }
}

impl Ciphertext {
    pub fn new(params: SchemeParams, y: Vec<FqnElem>) -> Result<Self> {
        if y.len() != params.n() {
            return Err(Error::Params(format!("ciphertext must have length {}", params.n())));
        }
        Ok(Ciphertext { params, y })
    }

    pub fn params(&self) -> SchemeParams {
        self.params
    }

    pub fn y(&self) -> &[FqnElem] {
        &self.y
    }
}

/// Samples `g`, then `m`, then `φ`; `φ` is resampled while `φ(M)` is
/// singular or the public generator loses rank.
pub fn keygen<R: Rng + ?Sized>(params: SchemeParams, rng: &mut R) -> Result<(PublicKey, SecretKey)> {
    let tower = params.tower();
    let g = sample_normal_element(&tower, rng);
    let mvec = sample_mvec(&tower, rng);
    let ext = FqnOverFqm(tower.clone());
    for _ in 0..MAX_ATTEMPTS {
        let phi = Phi::sample_secret_phi(ext.clone(), rng);
        let Some(gprime) = public_vector(&tower, g, &mvec, &phi) else {
            continue;
        };
        if circulant(&gprime, params.k()).rank(tower.top()) < params.k() {
            continue;
        }
        let sk = SecretKey::from_parts(params, g, mvec, phi)?;
        let pk = PublicKey { params, tower, gprime };
        return Ok((pk, sk));
    }
    Err(Error::Params(format!("key generation for {params} did not converge")))
}

/// Deterministic key generation from a 32-byte seed.
pub fn keygen_from_seed(params: SchemeParams, seed: [u8; 32]) -> Result<(PublicKey, SecretKey)> {
    keygen(params, &mut ChaCha20Rng::from_seed(seed))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gabidulin::sample_rank_error_top;
    use crate::rankmat::sum_dim;
    use crate::rankmat::frobenius_power_code;
    use rand_chacha::ChaCha8Rng;

    fn toy() -> SchemeParams {
        SchemeParams::toy(1, 4, 6).unwrap()
    }

    fn random_plain<R: Rng>(p: SchemeParams, rng: &mut R) -> Vec<FqmElem> {
        let tw = p.tower();
        (0..p.k()).map(|_| tw.mid().random(rng)).collect()
    }

    #[test]
    fn public_generator_is_masked_code() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for p in [toy(), SchemeParams::toy(2, 5, 7).unwrap(), SchemeParams::P128] {
            let (pk, sk) = keygen(p, &mut rng).unwrap();
            let tw = sk.tower().clone();
            let top = tw.top();
            let gm = sk.code().generator().mul(top, &circulant(sk.mvec(), p.n()));
            let phi_gm = sk.phi().apply_mat(&gm);
            let phi_m = sk.phi().apply_mat(&circulant(sk.mvec(), p.n()));
            let direct = phi_gm.mul(top, &phi_m.inverse(top).unwrap());
            let gen = pk.generator();
            assert_eq!(direct, gen);
            for i in 1..p.k() {
                let mut rot = gen.row(i - 1).to_vec();
                rot.rotate_right(1);
                assert_eq!(gen.row(i), &rot[..]);
            }
            assert_eq!(gen.rank(top), p.k());
            assert_eq!(tw.rank_weight(sk.mvec(), Subfield::Fqm), 2);
            assert!(!sk.phi().is_fully_linear());
        }
    }

    #[test]
    fn seeded_keygen_is_deterministic() {
        let a = keygen_from_seed(toy(), [7; 32]).unwrap();
        let b = keygen_from_seed(toy(), [7; 32]).unwrap();
        let c = keygen_from_seed(toy(), [8; 32]).unwrap();
        assert_eq!(a, b);
        assert_ne!(a.0, c.0);
        assert_eq!(a.1.public_key(), a.0);
    }

    #[test]
    fn correctness_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(32);
        for p in [toy(), SchemeParams::P128] {
            let (pk, sk) = keygen(p, &mut rng).unwrap();
            let tw = sk.tower().clone();
            let top = tw.top();
            let mmat = circulant(sk.mvec(), p.n());
            let phi_m = sk.phi().apply_mat(&mmat);
            for _ in 0..20 {
                let x = random_plain(p, &mut rng);
                let e: Vec<FqnElem> =
                    sample_rank_error(&tw, p.t(), &mut rng).unwrap().into_iter().map(FqnElem::from).collect();
                let y = pk.encrypt_with_error(&x, &e).unwrap();
                let lhs = phi_m.vec_mul(top, y.y());
                let xl: Vec<FqnElem> = x.iter().map(|&v| FqnElem::from(v)).collect();
                let inner: Vec<FqnElem> = sk
                    .code()
                    .generator()
                    .mul(top, &mmat)
                    .vec_mul(top, &xl)
                    .iter()
                    .zip(mmat.vec_mul(top, &e))
                    .map(|(&a, b)| top.add(a, b))
                    .collect();
                assert_eq!(lhs, sk.phi().apply_vec(&inner));
            }
        }
    }

    #[test]
    fn round_trips() {
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        for p in [toy(), SchemeParams::toy(2, 4, 5).unwrap(), SchemeParams::P192, SchemeParams::P256] {
            let (pk, sk) = keygen(p, &mut rng).unwrap();
            for _ in 0..20 {
                let x = random_plain(p, &mut rng);
                let ct = pk.encrypt(&x, &mut rng).unwrap();
                let d = sk.decrypt_full(&ct).unwrap();
                assert_eq!(d.x, x);
                let c = pk.encrypt_with_error(&x, &vec![FqnElem::ZERO; p.n()]).unwrap();
                let e: Vec<FqnElem> = ct.y().iter().zip(c.y()).map(|(&a, &b)| pk.tower().top().add(a, b)).collect();
                assert_eq!(d.e, e);
                assert_eq!(pk.tower().rank_weight(&e, Subfield::Fq), p.t());
            }
        }
    }

    #[test]
    fn zero_message_and_fresh_errors() {
        let mut rng = ChaCha8Rng::seed_from_u64(34);
        let p = toy();
        let (pk, sk) = keygen(p, &mut rng).unwrap();
        let zero = vec![FqmElem(0); p.k()];
        let ct = pk.encrypt_with_error(&zero, &vec![FqnElem::ZERO; p.n()]).unwrap();
        assert!(ct.y().iter().all(|&v| v == FqnElem::ZERO));
        assert_eq!(sk.decrypt(&ct).unwrap(), zero);
        let x = random_plain(p, &mut rng);
        assert_ne!(pk.encrypt(&x, &mut rng).unwrap(), pk.encrypt(&x, &mut rng).unwrap());
        assert!(pk.encrypt(&x[1..], &mut rng).is_err());
        let mut bad = x.clone();
        bad[0] = FqmElem(1 << 10);
        assert!(pk.encrypt(&bad, &mut rng).is_err());
    }

    #[test]
    fn tampering_fails_cleanly() {
        let mut rng = ChaCha8Rng::seed_from_u64(35);
        for p in [toy(), SchemeParams::toy(1, 6, 8).unwrap()] {
            let (pk, sk) = keygen(p, &mut rng).unwrap();
            let tw = pk.tower().clone();
            let mut failures = 0;
            for _ in 0..200 {
                let x = random_plain(p, &mut rng);
                let ct = pk.encrypt(&x, &mut rng).unwrap();
                let noise = sample_rank_error_top(&tw, p.t() + 1, &mut rng).unwrap();
                let y: Vec<FqnElem> = ct.y().iter().zip(&noise).map(|(&a, &b)| tw.top().add(a, b)).collect();
                match sk.decrypt_full(&Ciphertext::new(p, y.clone()).unwrap()) {
                    Err(Error::InvalidCiphertext) => failures += 1,
                    Err(other) => panic!("unexpected {other:?}"),
                    // any accepted answer must be a valid decryption of y
                    Ok(d) => {
                        let c = pk.encrypt_with_error(&d.x, &vec![FqnElem::ZERO; p.n()]).unwrap();
                        let e: Vec<FqnElem> = y.iter().zip(c.y()).map(|(&a, &b)| tw.top().add(a, b)).collect();
                        assert!(tw.rank_weight(&sk.unmask(&e), Subfield::Fq) <= p.t());
                    }
                }
            }
            assert!(failures > 0);
        }
    }

    #[test]
    fn keygen_never_emits_rank_one_mvec() {
        let mut rng = ChaCha8Rng::seed_from_u64(36);
        let p = SchemeParams::toy(1, 2, 3);
        assert!(p.is_err());
        let p = toy();
        for _ in 0..200 {
            let (_, sk) = keygen(p, &mut rng).unwrap();
            assert_eq!(sk.tower().rank_weight(sk.mvec(), Subfield::Fqm), 2);
        }
    }

    #[test]
    fn equivalent_mvecs_give_equal_keys() {
        let mut rng = ChaCha8Rng::seed_from_u64(37);
        let p = toy();
        let tw = p.tower();
        for _ in 0..50 {
            let (pk, sk) = keygen(p, &mut rng).unwrap();
            let q: Vec<FqnElem> = loop {
                let q: Vec<FqnElem> = (0..p.n()).map(|_| FqnElem::from(tw.mid().random(&mut rng))).collect();
                if circulant_invertible(tw.top(), &q) {
                    break q;
                }
            };
            let mq = vec_mul_circulant(tw.top(), sk.mvec(), &q);
            assert_eq!(public_vector(&tw, sk.g(), &mq, sk.phi()).unwrap(), pk.gprime());
        }
    }

    #[test]
    fn public_code_is_not_frobenius_stable_at_p128() {
        let mut rng = ChaCha8Rng::seed_from_u64(38);
        let (pk, _) = keygen(SchemeParams::P128, &mut rng).unwrap();
        let top = pk.tower().top();
        let gen = pk.generator();
        assert_eq!(sum_dim(top, &gen, &frobenius_power_code(top, &gen, 1)), 64);
    }

    #[test]
    fn recomputed_public_key_decrypts_identically() {
        let mut rng = ChaCha8Rng::seed_from_u64(39);
        let p = toy();
        let (pk, sk) = keygen(p, &mut rng).unwrap();
        let pk2 = sk.public_key();
        let x = random_plain(p, &mut rng);
        let e: Vec<FqnElem> = sample_rank_error(pk.tower(), p.t(), &mut rng).unwrap().into_iter().map(FqnElem::from).collect();
        let a = pk.encrypt_with_error(&x, &e).unwrap();
        let b = pk2.encrypt_with_error(&x, &e).unwrap();
        assert_eq!(a, b);
        assert_eq!(sk.decrypt(&a).unwrap(), x);
    }
}
