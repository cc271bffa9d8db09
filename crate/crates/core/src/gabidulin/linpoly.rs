//! Linearized polynomials `Σ c_i z^{[i]}` over `F_{q^n}`, coefficients stored
//! by `q`-degree. Composition is not commutative; `a∘b` means `a(b(z))`.

use crate::gf::{Field, FqnElem, TowerField};

pub type LinPoly = Vec<FqnElem>;

pub fn trim(mut p: LinPoly) -> LinPoly {
    while p.last() == Some(&FqnElem::ZERO) {
        p.pop();
    }
    p
}

/// `q`-degree, `None` for the zero polynomial.
pub fn qdeg(p: &[FqnElem]) -> Option<usize> {
    p.iter().rposition(|&c| c != FqnElem::ZERO)
}

pub fn eval(t: &TowerField, p: &[FqnElem], x: FqnElem) -> FqnElem {
    let top = t.top();
    let mut acc = FqnElem::ZERO;
    let mut xi = x;
    for (i, &c) in p.iter().enumerate() {
        if i > 0 {
            xi = t.frobenius(xi, 1);
        }
        acc = top.add(acc, top.mul(c, xi));
    }
    acc
}

pub fn add(t: &TowerField, a: &[FqnElem], b: &[FqnElem]) -> LinPoly {
    let top = t.top();
    let mut out = vec![FqnElem::ZERO; a.len().max(b.len())];
    for (i, o) in out.iter_mut().enumerate() {
        let x = a.get(i).copied().unwrap_or(FqnElem::ZERO);
        let y = b.get(i).copied().unwrap_or(FqnElem::ZERO);
        *o = top.add(x, y);
    }
    trim(out)
}

/// `a∘b = Σ a_i b_j^{[i]} z^{[i+j]}`.
pub fn compose(t: &TowerField, a: &[FqnElem], b: &[FqnElem]) -> LinPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let top = t.top();
    let mut out = vec![FqnElem::ZERO; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == FqnElem::ZERO {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            out[i + j] = top.add(out[i + j], top.mul(ai, t.frobenius(bj, i)));
        }
    }
    trim(out)
}

/// Right division `a = quo∘b + rem` with `qdeg rem < qdeg b`.
pub fn div_right(t: &TowerField, a: &[FqnElem], b: &[FqnElem]) -> (LinPoly, LinPoly) {
    let top = t.top();
    let db = qdeg(b).expect("division by the zero polynomial");
    let mut rem = trim(a.to_vec());
    let Some(da) = qdeg(&rem) else {
        return (Vec::new(), Vec::new());
    };
    if da < db {
        return (Vec::new(), rem);
    }
    let mut quo = vec![FqnElem::ZERO; da - db + 1];
    for d in (db..=da).rev() {
        let lead = rem[d];
        if lead == FqnElem::ZERO {
            continue;
        }
        let s = d - db;
        let c = top.div(lead, t.frobenius(b[db], s)).expect("nonzero leading coefficient");
        quo[s] = c;
        for (j, &bj) in b.iter().enumerate().take(db + 1) {
            rem[s + j] = top.sub(rem[s + j], top.mul(c, t.frobenius(bj, s)));
        }
    }
    (trim(quo), trim(rem))
}

/// Left division `a = b∘quo + rem` with `qdeg rem < qdeg b`.
pub fn div_left(t: &TowerField, a: &[FqnElem], b: &[FqnElem]) -> (LinPoly, LinPoly) {
    let top = t.top();
    let n = t.n();
    let db = qdeg(b).expect("division by the zero polynomial");
    let mut rem = trim(a.to_vec());
    let Some(da) = qdeg(&rem) else {
        return (Vec::new(), Vec::new());
    };
    if da < db {
        return (Vec::new(), rem);
    }
    let mut quo = vec![FqnElem::ZERO; da - db + 1];
    for d in (db..=da).rev() {
        let lead = rem[d];
        if lead == FqnElem::ZERO {
            continue;
        }
        let s = d - db;
        // b_db · c^{[db]} = lead
        let ratio = top.div(lead, b[db]).expect("nonzero leading coefficient");
        let c = t.frobenius(ratio, (n - db % n) % n);
        quo[s] = c;
        for (j, &bj) in b.iter().enumerate().take(db + 1) {
            rem[s + j] = top.sub(rem[s + j], top.mul(bj, t.frobenius(c, j)));
        }
    }
    (trim(quo), trim(rem))
}

/// `z^{[n]} - z`, which vanishes on all of `F_{q^n}`.
pub fn field_annihilator(t: &TowerField) -> LinPoly {
    let mut p = vec![FqnElem::ZERO; t.n() + 1];
    p[0] = FqnElem::ONE;
    p[t.n()] = FqnElem::ONE;
    p
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_poly(t: &TowerField, deg: usize, rng: &mut ChaCha8Rng) -> LinPoly {
        let mut p: LinPoly = (0..=deg).map(|_| t.top().random(rng)).collect();
        if p[deg] == FqnElem::ZERO {
            p[deg] = FqnElem::ONE;
        }
        p
    }

    #[test]
    fn composition_evaluates_as_composition() {
        let t = TowerField::new(1, 5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..50 {
            let a = random_poly(&t, rng.gen_range(0..6), &mut rng);
            let b = random_poly(&t, rng.gen_range(0..6), &mut rng);
            let x = t.top().random(&mut rng);
            assert_eq!(eval(&t, &compose(&t, &a, &b), x), eval(&t, &a, eval(&t, &b, x)));
        }
    }

    #[test]
    fn divisions_reconstruct() {
        let t = TowerField::new(1, 4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        for _ in 0..100 {
            let a = random_poly(&t, rng.gen_range(0..12), &mut rng);
            let b = random_poly(&t, rng.gen_range(0..6), &mut rng);
            let (q, r) = div_right(&t, &a, &b);
            assert!(qdeg(&r) < qdeg(&b));
            assert_eq!(add(&t, &compose(&t, &q, &b), &r), trim(a.clone()));
            let (q, r) = div_left(&t, &a, &b);
            assert!(qdeg(&r) < qdeg(&b));
            assert_eq!(add(&t, &compose(&t, &b, &q), &r), trim(a));
        }
    }

    #[test]
    fn annihilator_vanishes() {
        let t = TowerField::new(1, 3).unwrap();
        let p = field_annihilator(&t);
        assert!(t.top_elements().all(|x| eval(&t, &p, x) == FqnElem::ZERO));
    }
}
