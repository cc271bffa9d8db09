//! Partial cyclic Gabidulin codes `⟨P_k(ḡ)⟩` with `ḡ = (g^{[n-1]}, …, g)`
//! for a normal element `g`, and two independent bounded-distance decoders.
//!
//! A message `x` is the linearized polynomial `f = Σ x_i z^{[i]}`; its
//! codeword is `(f(ḡ_0), …, f(ḡ_{n-1}))`.

pub mod linpoly;

use rand::Rng;

use crate::gf::{Field, FqmElem, FqnElem, Subfield, TowerField};
use crate::rankmat::{circulant, circulant_inverse, vec_mul_circulant, Mat};
use crate::{Error, Result};

use linpoly::LinPoly;

/// Output of a successful decoding: `y = x·G + e`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decoded {
    pub x: Vec<FqnElem>,
    pub e: Vec<FqnElem>,
}

#[derive(Clone, Debug)]
pub struct GabidulinCode {
    tower: TowerField,
    g: FqnElem,
    k: usize,
    /// `ḡ`, the evaluation points.
    gbar: Vec<FqnElem>,
    /// `g^{[i]}` for `i < n`.
    conj: Vec<FqnElem>,
    /// First row of `P_n(ḡ)^{-1}`.
    interp: Vec<FqnElem>,
    gen: Mat<FqnElem>,
}

impl GabidulinCode {
    pub fn new(tower: &TowerField, g: FqnElem, k: usize) -> Result<Self> {
        let n = tower.n();
        if k == 0 || k >= n {
            return Err(Error::Params(format!("dimension k = {k} must satisfy 1 ≤ k < {n}")));
        }
        if !tower.is_normal_element(g) {
            return Err(Error::InvalidGenerator(format!("{g:?} is not a normal element")));
        }
        let gbar = tower.conjugate_vector(g);
        let conj = (0..n).map(|i| tower.frobenius(g, i)).collect();
        let interp = circulant_inverse(tower.top(), &gbar).expect("normal element gives an invertible circulant");
        let gen = circulant(&gbar, k);
        Ok(GabidulinCode { tower: tower.clone(), g, k, gbar, conj, interp, gen })
    }

    pub fn tower(&self) -> &TowerField {
        &self.tower
    }

    pub fn g(&self) -> FqnElem {
        self.g
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.gbar.len()
    }

    /// Decoding radius `⌊(n-k)/2⌋`.
    pub fn t(&self) -> usize {
        (self.n() - self.k) / 2
    }

    pub fn min_distance(&self) -> usize {
        self.n() - self.k + 1
    }

    /// `P_k(ḡ)`, both partial circulant and Moore.
    pub fn generator(&self) -> &Mat<FqnElem> {
        &self.gen
    }

    pub fn eval_points(&self) -> &[FqnElem] {
        &self.gbar
    }

    /// `ḡ_j^{[i]} = g^{[n-1-j+i]}`.
    #[inline]
    fn point_power(&self, j: usize, i: usize) -> FqnElem {
        let n = self.n();
        self.conj[(n - 1 - j + i) % n]
    }

    /// `x·P_k(ḡ)`, as a cyclic product.
    pub fn encode(&self, x: &[FqnElem]) -> Vec<FqnElem> {
        assert_eq!(x.len(), self.k, "message must have length k");
        let mut padded = x.to_vec();
        padded.resize(self.n(), FqnElem::ZERO);
        vec_mul_circulant(self.tower.top(), &padded, &self.gbar)
    }

    fn finish(&self, y: &[FqnElem], f: LinPoly) -> Result<Decoded> {
        let radius = self.t();
        if f.len() > self.k {
            return Err(Error::DecodingFailure { radius });
        }
        let mut x = f;
        x.resize(self.k, FqnElem::ZERO);
        let c = self.encode(&x);
        let top = self.tower.top();
        let e: Vec<FqnElem> = y.iter().zip(&c).map(|(&a, &b)| top.sub(a, b)).collect();
        if self.tower.rank_weight(&e, Subfield::Fq) > radius {
            return Err(Error::DecodingFailure { radius });
        }
        Ok(Decoded { x, e })
    }

    /// Welch–Berlekamp interpolation decoding.
    ///
    /// Finds `V`, `N` of `q`-degrees `≤ t` and `≤ k+t-1` with
    /// `V(y_j) = N(ḡ_j)`; then `N = V∘f` for the transmitted `f`.
    pub fn decode(&self, y: &[FqnElem]) -> Result<Decoded> {
        assert_eq!(y.len(), self.n(), "received word must have length n");
        let (n, k, t) = (self.n(), self.k, self.t());
        let tw = &self.tower;
        let top = tw.top();
        let radius = t;
        let cols = (t + 1) + (k + t);
        let mut sys = Mat::zeros(top, n, cols);
        for (j, &yj) in y.iter().enumerate() {
            let mut p = yj;
            for i in 0..=t {
                if i > 0 {
                    p = tw.frobenius(p, 1);
                }
                sys.set(j, i, p);
            }
            for i in 0..k + t {
                sys.set(j, t + 1 + i, self.point_power(j, i));
            }
        }
        let kernel = sys.kernel(top);
        // any nonzero solution works; V = 0 would force N = 0
        let sol = kernel.first().ok_or(Error::DecodingFailure { radius })?;
        let v = linpoly::trim(sol[..=t].to_vec());
        let nn = linpoly::trim(sol[t + 1..].to_vec());
        if v.is_empty() {
            return Err(Error::DecodingFailure { radius });
        }
        let (f, rem) = linpoly::div_left(tw, &nn, &v);
        if !rem.is_empty() {
            return Err(Error::DecodingFailure { radius });
        }
        self.finish(y, f)
    }

    /// Euclidean decoding: interpolate `R` with `R(ḡ_j) = y_j`, run the
    /// linearized Euclidean algorithm on `(z^{[n]} - z, R)` with right
    /// division until the remainder drops below `q`-degree `(n+k)/2`, then
    /// left-divide the remainder by its cofactor.
    pub fn decode_euclidean(&self, y: &[FqnElem]) -> Result<Decoded> {
        assert_eq!(y.len(), self.n(), "received word must have length n");
        let (n, k) = (self.n(), self.k);
        let tw = &self.tower;
        let radius = self.t();
        // R(ḡ) = y ⇔ r·P_n(ḡ) = y
        let r = linpoly::trim(vec_mul_circulant(tw.top(), y, &self.interp));
        let stop = |p: &LinPoly| linpoly::qdeg(p).is_none_or(|d| 2 * d < n + k);
        let (mut r0, mut r1) = (linpoly::field_annihilator(tw), r);
        let (mut u0, mut u1): (LinPoly, LinPoly) = (Vec::new(), vec![FqnElem::ONE]);
        while !stop(&r1) {
            let (q, rem) = linpoly::div_right(tw, &r0, &r1);
            let u = linpoly::add(tw, &u0, &linpoly::compose(tw, &q, &u1));
            r0 = std::mem::replace(&mut r1, rem);
            u0 = std::mem::replace(&mut u1, u);
        }
        if u1.is_empty() {
            return Err(Error::DecodingFailure { radius });
        }
        let (f, rem) = linpoly::div_left(tw, &r1, &u1);
        if !rem.is_empty() {
            return Err(Error::DecodingFailure { radius });
        }
        self.finish(y, f)
    }
}

/// Uniform normal element of `F_{q^n}` by rejection.
pub fn sample_normal_element<R: Rng + ?Sized>(tower: &TowerField, rng: &mut R) -> FqnElem {
    loop {
        let g = tower.top().random(rng);
        if tower.is_normal_element(g) {
            return g;
        }
    }
}

/// `t` elements of `F_{q^m}` that are linearly independent over `F_q`.
fn independent_mid<R: Rng + ?Sized>(tower: &TowerField, t: usize, rng: &mut R) -> Vec<FqmElem> {
    let mid = tower.mid();
    let mut basis = Vec::with_capacity(t);
    while basis.len() < t {
        basis.push(mid.random(rng));
        if mid.rank_over_base(&basis) < basis.len() {
            basis.pop();
        }
    }
    basis
}

/// Full-rank `t × n` matrix over `F_q`.
fn full_rank_base_matrix<R: Rng + ?Sized>(tower: &TowerField, t: usize, n: usize, rng: &mut R) -> Mat<FqmElem> {
    let mid = tower.mid();
    loop {
        let e = Mat::from_fn(t, n, |_, _| mid.random_base(rng));
        if e.rank(mid) == t {
            return e;
        }
    }
}

/// Random vector in `F_{q^m}^n` of `F_q`-rank exactly `t`, built as `B·E`
/// with `B` a basis row of a `t`-dimensional subspace and `E` a full-rank
/// `t × n` matrix over `F_q`.
pub fn sample_rank_error<R: Rng + ?Sized>(tower: &TowerField, t: usize, rng: &mut R) -> Result<Vec<FqmElem>> {
    let n = tower.n();
    if t > n.min(tower.m()) {
        return Err(Error::Params(format!("rank {t} exceeds min(n, m) = {}", n.min(tower.m()))));
    }
    if t == 0 {
        return Ok(vec![FqmElem(0); n]);
    }
    let b = independent_mid(tower, t, rng);
    let e = full_rank_base_matrix(tower, t, n, rng);
    Ok(e.vec_mul(tower.mid(), &b))
}

/// Random vector in `F_{q^n}^n` of `F_q`-rank exactly `t ≤ n`.
pub fn sample_rank_error_top<R: Rng + ?Sized>(tower: &TowerField, t: usize, rng: &mut R) -> Result<Vec<FqnElem>> {
    let n = tower.n();
    if t > n {
        return Err(Error::Params(format!("rank {t} exceeds n = {n}")));
    }
    if t == 0 {
        return Ok(vec![FqnElem::ZERO; n]);
    }
    let top = tower.top();
    let mut b: Vec<FqnElem> = Vec::with_capacity(t);
    while b.len() < t {
        b.push(top.random(rng));
        if tower.rank_weight(&b, Subfield::Fq) < b.len() {
            b.pop();
        }
    }
    let e = full_rank_base_matrix(tower, t, n, rng).map(FqnElem::from);
    Ok(e.vec_mul(top, &b))
}
