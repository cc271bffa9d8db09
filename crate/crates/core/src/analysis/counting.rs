use num_bigint::BigUint;

use crate::{Error, Result};

/// Degrees and multiplicities `(d_i, e_i)` of the irreducible factors of
/// `x^n - 1` over `F_Q` with `Q = 2^q_bits`.
///
/// With `n = 2^v·n'` and `n'` odd, `x^n - 1 = (x^{n'} - 1)^{2^v}` and the
/// factors of `x^{n'} - 1` correspond to the `Q`-cyclotomic cosets mod `n'`.
pub fn x_n_minus_1_shape(q_bits: u32, n: usize) -> Vec<(usize, usize)> {
    assert!(n > 0, "n must be positive");
    let v = n.trailing_zeros();
    let odd = n >> v;
    let mult = 1usize << v;
    let q_mod = if odd == 1 { 0 } else { pow_mod(2, q_bits as u64, odd as u64) };
    let mut seen = vec![false; odd];
    let mut shape = Vec::new();
    for s in 0..odd {
        if seen[s] {
            continue;
        }
        let mut size = 0;
        let mut c = s;
        while !seen[c] {
            seen[c] = true;
            size += 1;
            c = ((c as u64 * q_mod) % odd as u64) as usize;
        }
        shape.push((size, mult));
    }
    shape
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = ((acc as u128 * b as u128) % m as u128) as u64;
        }
        b = ((b as u128 * b as u128) % m as u128) as u64;
        e >>= 1;
    }
    acc
}

/// Number of polynomials of degree `< deg f` over `F_Q` coprime to `f`,
/// where `f` has factor shape `shape`: `∏ Q^{d(e-1)}·(Q^d - 1)`.
pub fn count_coprime(q_bits: u32, shape: &[(usize, usize)]) -> Result<BigUint> {
    if shape.is_empty() || shape.iter().any(|&(d, e)| d == 0 || e == 0) {
        return Err(Error::Params("factor degrees and multiplicities must be positive".into()));
    }
    let one = BigUint::from(1u8);
    Ok(shape
        .iter()
        .map(|&(d, e)| {
            let qd = &one << (q_bits as u64 * d as u64);
            (&one << (q_bits as u64 * (d * (e - 1)) as u64)) * (qd - 1u8)
        })
        .product())
}

/// `Φ_Q(x^n - 1)`: the number of invertible `n × n` circulants over `F_Q`.
pub fn phi_x_n_minus_1(q_bits: u32, n: usize) -> BigUint {
    count_coprime(q_bits, &x_n_minus_1_shape(q_bits, n)).expect("shape is well formed")
}

/// Number of equivalence classes of admissible `m` vectors:
/// `|S_1|/|S_2| - q^m - 1` with `S_1`, `S_2` the invertible circulants over
/// `F_{q^n}` and `F_{q^m}`. The subtracted classes are those of `F_{q^m}`-rank one.
pub fn count_equiv_classes(q_log: u32, m: usize) -> BigUint {
    let n = 2 * m;
    let s1 = phi_x_n_minus_1(q_log * n as u32, n);
    let s2 = phi_x_n_minus_1(q_log * m as u32, n);
    let qm = BigUint::from(1u8) << (q_log as u64 * m as u64);
    s1 / s2 - qm - 1u8
}

/// `log2` of a big integer, accurate to double precision.
pub fn log2(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 64 {
        return (x.iter_u64_digits().next().unwrap_or(0) as f64).log2();
    }
    let shift = bits - 64;
    let top = (x >> shift).iter_u64_digits().next().unwrap_or(0) as f64;
    top.log2() + shift as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::{poly, BinaryField, FqmElem};

    #[test]
    fn shapes() {
        assert_eq!(x_n_minus_1_shape(1, 6), vec![(1, 2), (2, 2)]);
        assert_eq!(x_n_minus_1_shape(1, 7), vec![(1, 1), (3, 1), (3, 1)]);
        assert_eq!(x_n_minus_1_shape(1, 64), vec![(1, 64)]);
        assert_eq!(x_n_minus_1_shape(2, 5), vec![(1, 1), (2, 1), (2, 1)]);
    }

    #[test]
    fn coprime_count_matches_enumeration() {
        let f2 = BinaryField::with_least_modulus(1, 1).unwrap();
        for n in 1..=10 {
            let modulus = poly::x_pow_n_minus_one(&f2, n);
            let direct = (0u64..1 << n)
                .filter(|&bits| {
                    let p: Vec<FqmElem> = (0..n).map(|i| FqmElem((bits >> i) & 1)).collect();
                    poly::gcd(&f2, &p, &modulus).len() == 1
                })
                .count();
            assert_eq!(phi_x_n_minus_1(1, n), BigUint::from(direct), "n = {n}");
        }
        assert_eq!(phi_x_n_minus_1(1, 6), BigUint::from(24u8));
    }

    #[test]
    fn single_irreducible_factor() {
        assert_eq!(count_coprime(1, &[(5, 1)]).unwrap(), BigUint::from(31u8));
        assert!(count_coprime(1, &[(0, 1)]).is_err());
        assert!(count_coprime(1, &[]).is_err());
    }

    #[test]
    fn key_space_counts() {
        assert_eq!(phi_x_n_minus_1(1, 64), BigUint::from(1u8) << 63u32);
        assert_eq!(count_equiv_classes(1, 2), BigUint::from(315u32));
        assert!((log2(&count_equiv_classes(1, 32)) - 2048.0).abs() < 1.0);
        assert!((log2(&count_equiv_classes(1, 40)) - 3200.0).abs() < 1.0);
        assert!((log2(&count_equiv_classes(1, 46)) - 4232.0).abs() < 1.0);
    }

    #[test]
    fn log2_precision() {
        assert_eq!(log2(&BigUint::from(1024u32)), 10.0);
        let big = BigUint::from(3u8) << 1000u32;
        assert!((log2(&big) - (1000.0 + 3f64.log2())).abs() < 1e-9);
    }
}
