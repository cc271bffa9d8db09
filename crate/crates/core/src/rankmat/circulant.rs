use super::Mat;
use crate::gf::{poly, Field, FrobeniusField};

/// `k × n` circulant whose rows are successive right rotations of `m`:
/// entry `(i, j)` is `m[(j - i) mod n]`.
pub fn circulant<E: Copy>(m: &[E], k: usize) -> Mat<E> {
    let n = m.len();
    Mat::from_fn(k, n, |i, j| m[(j + n - i % n) % n])
}

/// `v · P_n(m)`, computed as the product `v(x)·m(x)` in `F[x]/(x^n - 1)`.
pub fn vec_mul_circulant<F: Field>(f: &F, v: &[F::Elem], m: &[F::Elem]) -> Vec<F::Elem> {
    poly::cyclic_mul(f, v, m)
}

/// `P_n(m)` is invertible iff `gcd(m(x), x^n - 1) = 1`.
pub fn circulant_invertible<F: Field>(f: &F, m: &[F::Elem]) -> bool {
    let g = poly::gcd(f, m, &poly::x_pow_n_minus_one(f, m.len()));
    g.len() == 1
}

/// First row of `P_n(m)^{-1}`, which is again circulant.
pub fn circulant_inverse<F: Field>(f: &F, m: &[F::Elem]) -> Option<Vec<F::Elem>> {
    let n = m.len();
    let inv = poly::inverse_mod(f, m, &poly::x_pow_n_minus_one(f, n))?;
    Some(poly::to_length(f, inv, n))
}

/// `k × n` Moore matrix with rows `a^{[0]}, …, a^{[k-1]}`.
pub fn moore_matrix<F: FrobeniusField>(f: &F, a: &[F::Elem], k: usize) -> Mat<F::Elem> {
    Mat::from_fn(k, a.len(), |i, j| f.frobenius(a[j], i))
}

/// Entrywise `i`-th Frobenius power of a generator matrix.
pub fn frobenius_power_code<F: FrobeniusField>(f: &F, g: &Mat<F::Elem>, i: usize) -> Mat<F::Elem> {
    g.map(|x| f.frobenius(x, i))
}

/// `dim(A + B)` for codes given by generator matrices.
pub fn sum_dim<F: Field>(f: &F, a: &Mat<F::Elem>, b: &Mat<F::Elem>) -> usize {
    a.vstack(b).rank(f)
}

/// `dim(A ∩ B)`.
pub fn intersect_dim<F: Field>(f: &F, a: &Mat<F::Elem>, b: &Mat<F::Elem>) -> usize {
    a.rank(f) + b.rank(f) - sum_dim(f, a, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::{FqnElem, Subfield, TowerField};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_vec(t: &TowerField, n: usize, rng: &mut ChaCha8Rng) -> Vec<FqnElem> {
        (0..n).map(|_| t.top().random(rng)).collect()
    }

    #[test]
    fn rotation_convention() {
        let p = circulant(&[1, 2, 3, 4], 3);
        assert_eq!(p.to_rows(), vec![vec![1, 2, 3, 4], vec![4, 1, 2, 3], vec![3, 4, 1, 2]]);
    }

    #[test]
    fn fast_product_matches_matrix() {
        let t = TowerField::new(1, 5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let v = random_vec(&t, 10, &mut rng);
        let m = random_vec(&t, 10, &mut rng);
        assert_eq!(vec_mul_circulant(t.top(), &v, &m), circulant(&m, 10).vec_mul(t.top(), &v));
    }

    #[test]
    fn gcd_test_agrees_with_rank() {
        let t = TowerField::new(1, 3).unwrap();
        let f = t.top();
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let mut singular = 0;
        for _ in 0..500 {
            // sparse vectors over a small field hit singular circulants often
            let m: Vec<FqnElem> = (0..6)
                .map(|_| if rng.gen_bool(0.5) { FqnElem::ZERO } else { f.random(&mut rng) })
                .collect();
            let by_rank = circulant(&m, 6).rank(f) == 6;
            assert_eq!(circulant_invertible(f, &m), by_rank);
            singular += usize::from(!by_rank);
            if let Some(inv) = circulant_inverse(f, &m) {
                let prod = circulant(&m, 6).mul(f, &circulant(&inv, 6));
                assert_eq!(prod, Mat::identity(f, 6));
            } else {
                assert!(!by_rank);
            }
        }
        assert!(singular > 0);
    }

    #[test]
    fn normality_matches_rank() {
        let t = TowerField::new(1, 3).unwrap();
        for g in t.top_elements() {
            let gbar = t.conjugate_vector(g);
            let full = t.rank_weight(&gbar, Subfield::Fq) == t.n();
            assert_eq!(t.is_normal_element(g), full, "{g:?}");
            // the circulant of the conjugate vector is its Moore matrix
            if full {
                assert_eq!(circulant(&gbar, 6), moore_matrix(t.top(), &gbar, 6));
            }
        }
    }

    #[test]
    fn moore_rank_law_exhaustive() {
        // F_{2^4} over F_2 as the middle field of the m = 4 tower
        let t = TowerField::new(1, 4).unwrap();
        let f = t.mid();
        let elems: Vec<_> = f.elements().collect();
        let mut count = 0usize;
        for &a in &elems {
            for &b in &elems {
                for &c in &elems {
                    for &d in &elems {
                        let v = [a, b, c, d];
                        let r = f.rank_over_base(&v);
                        for k in 1..=4 {
                            assert_eq!(moore_matrix(f, &v, k).rank(f), r.min(k));
                        }
                        count += 1;
                    }
                }
            }
        }
        assert_eq!(count, 1 << 16);
    }

    #[test]
    fn frobenius_of_moore_code_shifts() {
        let t = TowerField::new(1, 5).unwrap();
        let f = t.top();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let g = loop {
            let g = f.random(&mut rng);
            if t.is_normal_element(g) {
                break g;
            }
        };
        let gbar = t.conjugate_vector(g);
        let n = t.n();
        for k in 1..n {
            let gk = moore_matrix(f, &gbar, k);
            for i in 0..n {
                let dim = intersect_dim(f, &gk, &frobenius_power_code(f, &gk, i));
                // the rows are distinct conjugates of a normal basis
                let common = (0..k).filter(|j| (0..k).any(|l| (i + l) % n == *j)).count();
                assert_eq!(dim, common);
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]
        #[test]
        fn circulants_commute(seed in any::<u64>()) {
            let t = TowerField::new(1, 4).unwrap();
            let f = t.top();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = random_vec(&t, 8, &mut rng);
            let b = random_vec(&t, 8, &mut rng);
            let pa = circulant(&a, 8);
            let pb = circulant(&b, 8);
            prop_assert_eq!(pa.mul(f, &pb), pb.mul(f, &pa));
        }
    }
}
