//! Structural experiments on the scheme: Frobenius distinguisher dimensions,
//! the plaintext-system nullity, key equivalence and key-space counts.

mod counting;
mod experiments;

use crate::gf::{FqnElem, FrobeniusField, TowerField};
use crate::pkc::PublicKey;
use crate::rankmat::{circulant_inverse, frobenius_power_code, intersect_dim, vec_mul_circulant, Mat};
use crate::{Error, Result};

pub use counting::{count_coprime, count_equiv_classes, log2, phi_x_n_minus_1, x_n_minus_1_shape};
pub use experiments::{run_experiment, Experiment, ExperimentReport, Record};

/// `dim(C + C^{[1]} + … + C^{[i]})` for `i = 0..=i_max`.
pub fn frobenius_profile<F: FrobeniusField>(f: &F, gen: &Mat<F::Elem>, i_max: usize) -> Vec<usize> {
    let mut acc = gen.clone();
    let mut out = vec![acc.rank(f)];
    for i in 1..=i_max {
        acc = acc.vstack(&frobenius_power_code(f, gen, i));
        out.push(acc.rank(f));
    }
    out
}

/// `dim(C ∩ C^{[i]})`.
pub fn frobenius_intersection<F: FrobeniusField>(f: &F, gen: &Mat<F::Elem>, i: usize) -> usize {
    intersect_dim(f, gen, &frobenius_power_code(f, gen, i))
}

/// Dimension over `F_{q^m}` of the solutions `(x_1, x_2) ∈ F_{q^m}^{k+n}` of
/// `x_1·P_k(g') + x_2 = 0`, expanded to `2n` equations over `F_{q^m}`.
pub fn plaintext_system_nullity(pk: &PublicKey) -> usize {
    let (n, k) = (pk.params().n(), pk.params().k());
    let gen = pk.generator();
    // row per unknown, two columns (lo, hi) per equation
    let sys = Mat::from_fn(k + n, 2 * n, |r, c| {
        let j = c / 2;
        let entry = if r < k {
            gen.get(r, j)
        } else if r - k == j {
            FqnElem::ONE
        } else {
            FqnElem::ZERO
        };
        if c % 2 == 0 {
            entry.lo
        } else {
            entry.hi
        }
    });
    k + n - sys.rank(pk.tower().mid())
}

/// `m_1 ~ m_2` iff `P_n(m_1)^{-1}·P_n(m_2)` has all entries in `F_{q^m}`.
pub fn mvec_equivalent(tower: &TowerField, m1: &[FqnElem], m2: &[FqnElem]) -> Result<bool> {
    let top = tower.top();
    let inv = circulant_inverse(top, m1).ok_or(Error::Singular)?;
    if circulant_inverse(top, m2).is_none() {
        return Err(Error::Singular);
    }
    Ok(vec_mul_circulant(top, &inv, m2).iter().all(|x| x.in_mid()))
}

/// Exhaustive partition of all admissible `m` vectors (`F_{q^m}`-rank two,
/// invertible circulant) into equivalence classes. Only for tiny towers.
///
/// Returns the class representatives and, for every vector, its class.
pub fn exhaustive_equiv_classes(tower: &TowerField) -> (Vec<Vec<FqnElem>>, Vec<(Vec<FqnElem>, usize)>) {
    let n = tower.n();
    let bits = tower.top_bits() * n;
    assert!(bits <= 20, "refusing to enumerate 2^{bits} vectors");
    let top = tower.top();
    let elems: Vec<FqnElem> = tower.top_elements().collect();
    // the group of invertible circulants over F_{q^m}, by first row
    let mid_elems: Vec<FqnElem> = elems.iter().copied().filter(|x| x.in_mid()).collect();
    let group: Vec<Vec<FqnElem>> = (0..mid_elems.len().pow(n as u32))
        .map(|idx| (0..n).map(|j| mid_elems[(idx / mid_elems.len().pow(j as u32)) % mid_elems.len()]).collect::<Vec<_>>())
        .filter(|v| circulant_inverse(top, v).is_some())
        .collect();
    let mut reps: Vec<Vec<FqnElem>> = Vec::new();
    let mut class_of: std::collections::HashMap<Vec<FqnElem>, usize> = std::collections::HashMap::new();
    let mut all = Vec::new();
    for idx in 0..elems.len().pow(n as u32) {
        let v: Vec<FqnElem> = (0..n).map(|j| elems[(idx / elems.len().pow(j as u32)) % elems.len()]).collect();
        if !crate::pkc::is_valid_mvec(tower, &v) {
            continue;
        }
        let class = match class_of.get(&v) {
            Some(&c) => c,
            None => {
                let c = reps.len();
                for q in &group {
                    class_of.insert(vec_mul_circulant(top, &v, q), c);
                }
                reps.push(v.clone());
                c
            }
        };
        all.push((v, class));
    }
    (reps, all)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gabidulin::{sample_normal_element, GabidulinCode};
    use crate::gf::Field;
    use crate::pkc::{keygen, sample_mvec, SchemeParams};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn gabidulin_profile() {
        let t = TowerField::new(1, 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(51);
        for _ in 0..20 {
            let g = sample_normal_element(&t, &mut rng);
            let code = GabidulinCode::new(&t, g, 4).unwrap();
            assert_eq!(frobenius_profile(t.top(), code.generator(), 2), vec![4, 5, 6]);
            assert_eq!(frobenius_intersection(t.top(), code.generator(), 1), 3);
        }
    }

    #[test]
    fn random_code_profile_usually_doubles() {
        let t = TowerField::new(1, 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(52);
        let hits = (0..50)
            .filter(|_| {
                let c = Mat::from_fn(2, 6, |_, _| t.top().random(&mut rng));
                frobenius_profile(t.top(), &c, 2) == vec![2, 4, 6]
            })
            .count();
        assert!(hits >= 45, "{hits}");
    }

    #[test]
    fn nullity_is_k_minus_m() {
        let mut rng = ChaCha8Rng::seed_from_u64(53);
        for p in [SchemeParams::toy(1, 3, 4).unwrap(), SchemeParams::toy(2, 4, 6).unwrap(), SchemeParams::P128] {
            for _ in 0..3 {
                let (pk, _) = keygen(p, &mut rng).unwrap();
                assert_eq!(plaintext_system_nullity(&pk), p.k() - p.m());
            }
        }
    }

    #[test]
    fn equivalence_is_an_equivalence() {
        let t = TowerField::new(1, 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(54);
        let scale = |v: &[FqnElem], rng: &mut ChaCha8Rng| loop {
            let q: Vec<FqnElem> = (0..6).map(|_| FqnElem::from(t.mid().random(rng))).collect();
            if circulant_inverse(t.top(), &q).is_some() {
                break vec_mul_circulant(t.top(), v, &q);
            }
        };
        for _ in 0..100 {
            let a = sample_mvec(&t, &mut rng);
            let b = sample_mvec(&t, &mut rng);
            let c = scale(&a, &mut rng);
            assert!(mvec_equivalent(&t, &a, &a).unwrap());
            assert!(mvec_equivalent(&t, &a, &c).unwrap());
            assert!(mvec_equivalent(&t, &c, &a).unwrap());
            assert_eq!(mvec_equivalent(&t, &a, &b).unwrap(), mvec_equivalent(&t, &b, &a).unwrap());
            let d = scale(&c, &mut rng);
            assert!(mvec_equivalent(&t, &a, &d).unwrap());
        }
        assert_eq!(mvec_equivalent(&t, &[FqnElem::ONE; 6], &[FqnElem::ONE; 6]), Err(Error::Singular));
    }
}
