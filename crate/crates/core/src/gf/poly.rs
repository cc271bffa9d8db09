//! Dense univariate polynomials over a [`Field`], coefficients stored low
//! degree first. Only what circulant arithmetic needs: products, division,
//! gcd and inverses modulo `x^n - 1`.

use super::Field;

/// Drops trailing zero coefficients.
pub fn trim<F: Field>(f: &F, mut p: Vec<F::Elem>) -> Vec<F::Elem> {
    while p.last().is_some_and(|&c| f.is_zero(c)) {
        p.pop();
    }
    p
}

/// Degree, `None` for the zero polynomial.
pub fn degree<F: Field>(f: &F, p: &[F::Elem]) -> Option<usize> {
    p.iter().rposition(|&c| !f.is_zero(c))
}

pub fn add<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    let (long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    let mut out = long.to_vec();
    for (o, &s) in out.iter_mut().zip(short) {
        *o = f.add(*o, s);
    }
    trim(f, out)
}

pub fn mul<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![f.zero(); a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if f.is_zero(x) {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = f.add(out[i + j], f.mul(x, y));
        }
    }
    trim(f, out)
}

/// Euclidean division `a = q·b + r` with `deg r < deg b`.
///
/// Panics if `b` is zero.
pub fn divrem<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> (Vec<F::Elem>, Vec<F::Elem>) {
    let db = degree(f, b).expect("division by the zero polynomial");
    let lead_inv = f.inv(b[db]).expect("leading coefficient is nonzero");
    let mut r = trim(f, a.to_vec());
    let Some(da) = degree(f, &r) else {
        return (Vec::new(), Vec::new());
    };
    if da < db {
        return (Vec::new(), r);
    }
    let mut q = vec![f.zero(); da - db + 1];
    for i in (db..=da).rev() {
        let c = r[i];
        if f.is_zero(c) {
            continue;
        }
        let s = f.mul(c, lead_inv);
        q[i - db] = s;
        for j in 0..=db {
            r[i - db + j] = f.sub(r[i - db + j], f.mul(s, b[j]));
        }
    }
    (trim(f, q), trim(f, r))
}

/// Monic greatest common divisor.
pub fn gcd<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    let mut a = trim(f, a.to_vec());
    let mut b = trim(f, b.to_vec());
    while !b.is_empty() {
        let (_, r) = divrem(f, &a, &b);
        a = std::mem::replace(&mut b, r);
    }
    make_monic(f, a)
}

fn make_monic<F: Field>(f: &F, p: Vec<F::Elem>) -> Vec<F::Elem> {
    match p.last() {
        None => p,
        Some(&lead) => {
            let inv = f.inv(lead).expect("nonzero leading coefficient");
            p.into_iter().map(|c| f.mul(c, inv)).collect()
        }
    }
}

/// `x^n - 1`.
pub fn x_pow_n_minus_one<F: Field>(f: &F, n: usize) -> Vec<F::Elem> {
    let mut p = vec![f.zero(); n + 1];
    p[0] = f.neg(f.one());
    p[n] = f.one();
    p
}

/// Inverse of `a` modulo `modulus`, if `gcd(a, modulus) = 1`.
pub fn inverse_mod<F: Field>(f: &F, a: &[F::Elem], modulus: &[F::Elem]) -> Option<Vec<F::Elem>> {
    let (_, a) = divrem(f, a, modulus);
    let (mut r0, mut r1) = (trim(f, modulus.to_vec()), a);
    let (mut s0, mut s1): (Vec<F::Elem>, Vec<F::Elem>) = (Vec::new(), vec![f.one()]);
    while !r1.is_empty() {
        let (q, r) = divrem(f, &r0, &r1);
        let s = add(f, &s0, &mul(f, &q, &s1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
    }
    // r0 = s0·a (mod modulus) is the gcd up to a unit
    if degree(f, &r0) != Some(0) {
        return None;
    }
    let c = f.inv(r0[0]).ok()?;
    let (_, s) = divrem(f, &s0, modulus);
    Some(s.into_iter().map(|x| f.mul(x, c)).collect())
}

/// Cyclic convolution of two length-`n` vectors, i.e. the product in
/// `F[x]/(x^n - 1)`.
pub fn cyclic_mul<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    let n = a.len();
    assert_eq!(b.len(), n, "cyclic product needs equal lengths");
    let mut out = vec![f.zero(); n];
    for (i, &x) in a.iter().enumerate() {
        if f.is_zero(x) {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            let k = if i + j >= n { i + j - n } else { i + j };
            out[k] = f.add(out[k], f.mul(x, y));
        }
    }
    out
}

/// Pads a coefficient list to exactly `n` entries.
pub fn to_length<F: Field>(f: &F, mut p: Vec<F::Elem>, n: usize) -> Vec<F::Elem> {
    assert!(degree(f, &p).is_none_or(|d| d < n));
    p.resize(n, f.zero());
    p.truncate(n);
    p
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::{BinaryField, FqmElem};

    fn f2() -> BinaryField {
        BinaryField::with_least_modulus(1, 1).unwrap()
    }

    fn bits(v: &[u64]) -> Vec<FqmElem> {
        v.iter().map(|&b| FqmElem(b)).collect()
    }

    #[test]
    fn gcd_of_x6_minus_1_and_x_plus_1() {
        let f = f2();
        let p = x_pow_n_minus_one(&f, 6);
        assert_eq!(gcd(&f, &p, &bits(&[1, 1])), bits(&[1, 1]));
        assert_eq!(gcd(&f, &p, &bits(&[1, 1, 1])), bits(&[1, 1, 1]));
        assert_eq!(gcd(&f, &p, &bits(&[1, 0, 0, 1, 1])), bits(&[1])); // x^4+x^3+1
    }

    #[test]
    fn inverse_modulo_cyclic() {
        let f = f2();
        let m = x_pow_n_minus_one(&f, 7);
        let a = bits(&[1, 1, 1]);
        let inv = inverse_mod(&f, &a, &m).unwrap();
        let prod = cyclic_mul(&f, &to_length(&f, a, 7), &to_length(&f, inv, 7));
        assert_eq!(prod, bits(&[1, 0, 0, 0, 0, 0, 0]));
        assert!(inverse_mod(&f, &bits(&[1, 1]), &m).is_none());
    }
}
