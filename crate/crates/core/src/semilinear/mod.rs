//! `K`-linear automorphisms of an extension `L/K`, represented by their
//! matrix over `K` in a fixed basis of `L`.
//!
//! Two extensions are used: `F_{q^m}/F_q` for the structural results and
//! `F_{q^n}/F_{q^m}` for the encryption scheme.

mod count;

use std::fmt;
use std::hash::Hash;

use rand::Rng;

use crate::bits::{BitReader, BitWriter};
use crate::gf::{BinaryField, Field, FqmElem, FqnElem, FrobeniusField, QuadField, TowerField};
use crate::rankmat::Mat;
use crate::{Error, Result};

pub use count::{automorphism_count, fully_linear_count, secret_phi_count};

/// A field extension `L/K` with a fixed ordered `K`-basis of `L`.
pub trait Extension: Clone + fmt::Debug + PartialEq + Eq + Send + Sync {
    type K: Copy + Eq + Hash + fmt::Debug + Send + Sync + 'static;
    type L: Copy + Eq + Hash + fmt::Debug + Send + Sync + 'static;
    type KField: Field<Elem = Self::K>;
    type LField: FrobeniusField<Elem = Self::L>;

    fn k_field(&self) -> &Self::KField;
    fn l_field(&self) -> &Self::LField;
    /// `[L : K]`.
    fn degree(&self) -> usize;
    /// `log2 |K|`.
    fn k_bits(&self) -> u32;
    /// Coordinates of `x` in the fixed basis.
    fn coords(&self, x: Self::L) -> Vec<Self::K>;
    fn from_coords(&self, c: &[Self::K]) -> Self::L;
    fn embed(&self, k: Self::K) -> Self::L;
    /// `x ↦ x^{|K|^j}`.
    fn k_frobenius(&self, x: Self::L, j: usize) -> Self::L;
    fn random_k<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::K;
    fn k_elements(&self) -> Vec<Self::K>;
    fn k_to_bits(&self, k: Self::K) -> u64;
    fn k_from_bits(&self, bits: u64) -> Self::K;

    /// The fixed basis `(α_1, …, α_d)`.
    fn basis(&self) -> Vec<Self::L> {
        let kf = self.k_field();
        (0..self.degree())
            .map(|i| {
                let c: Vec<_> = (0..self.degree()).map(|j| if i == j { kf.one() } else { kf.zero() }).collect();
                self.from_coords(&c)
            })
            .collect()
    }
}

/// `F_{q^m}` over `F_q` in the polynomial basis `(1, x, …, x^{m-1})`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FqmOverFq(pub TowerField);

/// `F_{q^n}` over `F_{q^m}` in the basis `(1, θ)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FqnOverFqm(pub TowerField);

impl Extension for FqmOverFq {
    type K = FqmElem;
    type L = FqmElem;
    type KField = BinaryField;
    type LField = BinaryField;

    fn k_field(&self) -> &BinaryField {
        self.0.mid()
    }

    fn l_field(&self) -> &BinaryField {
        self.0.mid()
    }

    fn degree(&self) -> usize {
        self.0.m()
    }

    fn k_bits(&self) -> u32 {
        self.0.q_log()
    }

    fn coords(&self, x: FqmElem) -> Vec<FqmElem> {
        self.0.mid().fq_coords(x)
    }

    fn from_coords(&self, c: &[FqmElem]) -> FqmElem {
        self.0.mid().from_fq_coords(c)
    }

    fn embed(&self, k: FqmElem) -> FqmElem {
        k
    }

    fn k_frobenius(&self, x: FqmElem, j: usize) -> FqmElem {
        self.0.mid().frobenius(x, j)
    }

    fn random_k<R: Rng + ?Sized>(&self, rng: &mut R) -> FqmElem {
        self.0.mid().random_base(rng)
    }

    fn k_elements(&self) -> Vec<FqmElem> {
        self.0.mid().base_elements()
    }

    fn k_to_bits(&self, k: FqmElem) -> u64 {
        self.0.mid().base_to_bits(k)
    }

    fn k_from_bits(&self, bits: u64) -> FqmElem {
        self.0.mid().base_from_bits(bits)
    }
}

impl Extension for FqnOverFqm {
    type K = FqmElem;
    type L = FqnElem;
    type KField = BinaryField;
    type LField = QuadField;

    fn k_field(&self) -> &BinaryField {
        self.0.mid()
    }

    fn l_field(&self) -> &QuadField {
        self.0.top()
    }

    fn degree(&self) -> usize {
        2
    }

    fn k_bits(&self) -> u32 {
        self.0.mid().bits()
    }

    fn coords(&self, x: FqnElem) -> Vec<FqmElem> {
        vec![x.lo, x.hi]
    }

    fn from_coords(&self, c: &[FqmElem]) -> FqnElem {
        FqnElem::new(c[0], c[1])
    }

    fn embed(&self, k: FqmElem) -> FqnElem {
        FqnElem::from(k)
    }

    fn k_frobenius(&self, x: FqnElem, j: usize) -> FqnElem {
        self.0.frobenius(x, self.0.m() * j)
    }

    fn random_k<R: Rng + ?Sized>(&self, rng: &mut R) -> FqmElem {
        self.0.mid().random(rng)
    }

    fn k_elements(&self) -> Vec<FqmElem> {
        self.0.mid().elements().collect()
    }

    fn k_to_bits(&self, k: FqmElem) -> u64 {
        k.0
    }

    fn k_from_bits(&self, bits: u64) -> FqmElem {
        FqmElem(bits)
    }
}

/// A `K`-linear automorphism of `L`: row `i` of the matrix holds the
/// coordinates of `φ(α_i)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemilinearMap<X: Extension> {
    ext: X,
    matrix: Mat<X::K>,
}

impl<X: Extension> SemilinearMap<X> {
    pub fn identity(ext: X) -> Self {
        let matrix = Mat::identity(ext.k_field(), ext.degree());
        SemilinearMap { ext, matrix }
    }

    /// Rejects matrices of the wrong shape or that are singular.
    pub fn from_matrix(ext: X, matrix: Mat<X::K>) -> Result<Self> {
        let d = ext.degree();
        if matrix.rows() != d || matrix.cols() != d {
            return Err(Error::Params(format!("expected a {d}×{d} matrix")));
        }
        if matrix.rank(ext.k_field()) < d {
            return Err(Error::Singular);
        }
        Ok(SemilinearMap { ext, matrix })
    }

    /// The map sending `α_i` to `images[i]`.
    pub fn from_images(ext: X, images: &[X::L]) -> Result<Self> {
        let rows = images.iter().map(|&y| ext.coords(y)).collect();
        Self::from_matrix(ext.clone(), Mat::from_rows(rows))
    }

    /// `μ ↦ β·μ^{|K|^j}`, the general fully linear map.
    pub fn make_fully_linear(ext: X, beta: X::L, j: usize) -> Result<Self> {
        let lf = ext.l_field();
        if lf.is_zero(beta) {
            return Err(Error::Params("β must be nonzero".into()));
        }
        if j >= ext.degree() {
            return Err(Error::Params(format!("j = {j} must be below {}", ext.degree())));
        }
        let images: Vec<_> = ext.basis().into_iter().map(|a| lf.mul(beta, ext.k_frobenius(a, j))).collect();
        Self::from_images(ext, &images)
    }

    /// Uniformly random automorphism.
    pub fn random<R: Rng + ?Sized>(ext: X, rng: &mut R) -> Self {
        let d = ext.degree();
        loop {
            let m = Mat::from_fn(d, d, |_, _| ext.random_k(rng));
            if m.rank(ext.k_field()) == d {
                return SemilinearMap { ext, matrix: m };
            }
        }
    }

    /// Uniformly random automorphism that is not fully linear.
    pub fn sample_secret_phi<R: Rng + ?Sized>(ext: X, rng: &mut R) -> Self {
        loop {
            let phi = Self::random(ext.clone(), rng);
            if !phi.is_fully_linear() {
                return phi;
            }
        }
    }

    /// Every automorphism, in lexicographic order of the matrix entries.
    pub fn enumerate(ext: X) -> Vec<Self> {
        let d = ext.degree();
        let ks = ext.k_elements();
        let total = ks.len().checked_pow((d * d) as u32).filter(|&t| t <= 1 << 24).expect("too many matrices to enumerate");
        let mut out = Vec::new();
        for idx in 0..total {
            let mut rest = idx;
            let m = Mat::from_fn(d, d, |_, _| {
                let v = ks[rest % ks.len()];
                rest /= ks.len();
                v
            });
            if m.rank(ext.k_field()) == d {
                out.push(SemilinearMap { ext: ext.clone(), matrix: m });
            }
        }
        out
    }

    pub fn extension(&self) -> &X {
        &self.ext
    }

    pub fn matrix(&self) -> &Mat<X::K> {
        &self.matrix
    }

    pub fn apply(&self, x: X::L) -> X::L {
        let c = self.ext.coords(x);
        self.ext.from_coords(&self.matrix.vec_mul(self.ext.k_field(), &c))
    }

    pub fn apply_vec(&self, v: &[X::L]) -> Vec<X::L> {
        v.iter().map(|&x| self.apply(x)).collect()
    }

    pub fn apply_mat(&self, m: &Mat<X::L>) -> Mat<X::L> {
        m.map(|x| self.apply(x))
    }

    pub fn inverse(&self) -> Self {
        let matrix = self.matrix.inverse(self.ext.k_field()).expect("automorphism matrix is invertible");
        SemilinearMap { ext: self.ext.clone(), matrix }
    }

    /// `φ∘ψ`.
    pub fn compose(&self, psi: &Self) -> Self {
        SemilinearMap { ext: self.ext.clone(), matrix: psi.matrix.mul(self.ext.k_field(), &self.matrix) }
    }

    /// `L`-rank of `A = [φ(α_i·α_j)]_{i,j}`: one exactly when `φ` is
    /// `σ`-semilinear over `L` for some automorphism `σ`.
    pub fn is_fully_linear(&self) -> bool {
        let lf = self.ext.l_field();
        let basis = self.ext.basis();
        let a = Mat::from_fn(basis.len(), basis.len(), |i, j| self.apply(lf.mul(basis[i], basis[j])));
        a.rank(lf) == 1
    }

    /// `true` iff `φ(C)` is `L`-linear, where `C` is the `L`-row space of `g`.
    ///
    /// `φ(C)` is the `K`-span of `φ(α_i·g_j)`; it is `L`-linear iff the span
    /// is closed under multiplication by every basis element `α_i`.
    pub fn is_linear_on_code(&self, g: &Mat<X::L>) -> bool {
        let lf = self.ext.l_field();
        let kf = self.ext.k_field();
        let basis = self.ext.basis();
        let images: Vec<Vec<X::L>> = (0..g.rows())
            .flat_map(|j| {
                basis.iter().map(move |&a| self.apply_vec(&g.row(j).iter().map(|&x| lf.mul(a, x)).collect::<Vec<_>>()))
            })
            .collect();
        let expand = |rows: &[Vec<X::L>]| -> Mat<X::K> {
            Mat::from_rows(rows.iter().map(|r| r.iter().flat_map(|&x| self.ext.coords(x)).collect()).collect())
        };
        let span = expand(&images);
        let r = span.rank(kf);
        basis.iter().all(|&mu| {
            let scaled: Vec<Vec<X::L>> = images.iter().map(|r| r.iter().map(|&x| lf.mul(mu, x)).collect()).collect();
            span.vstack(&expand(&scaled)).rank(kf) == r
        })
    }

    /// Row-major matrix entries, `log2 |K|` bits each, little-endian.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut w = BitWriter::new();
        for i in 0..self.matrix.rows() {
            for &k in self.matrix.row(i) {
                w.push(self.ext.k_to_bits(k) as u128, self.ext.k_bits());
            }
        }
        w.finish()
    }

    pub fn from_bytes(ext: X, bytes: &[u8]) -> Result<Self> {
        let d = ext.degree();
        let bits = ext.k_bits();
        let need = (d * d * bits as usize).div_ceil(8);
        if bytes.len() != need {
            return Err(Error::Format(format!("expected {need} bytes, got {}", bytes.len())));
        }
        let mut r = BitReader::new(bytes);
        let mut rows = Vec::with_capacity(d);
        for _ in 0..d {
            let row = (0..d).map(|_| ext.k_from_bits(r.read(bits).expect("length checked") as u64)).collect();
            rows.push(row);
        }
        if !r.rest_is_zero() {
            return Err(Error::Format("nonzero padding bits".into()));
        }
        Self::from_matrix(ext.clone(), Mat::from_rows(rows)).map_err(|_| Error::Format("singular matrix".into()))
    }
}
