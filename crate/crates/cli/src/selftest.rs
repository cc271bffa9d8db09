use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use rlk_core::analysis::{count_equiv_classes, exhaustive_equiv_classes, phi_x_n_minus_1, plaintext_system_nullity};
use rlk_core::gabidulin::{sample_normal_element, sample_rank_error_top, GabidulinCode};
use rlk_core::gf::{Field, FqmElem, Subfield, TowerField};
use rlk_core::pkc::{keygen, Ciphertext, PublicKey, SchemeParams, SecretKey};
use rlk_core::semilinear::{FqmOverFq, SemilinearMap};

fn check(name: &str, ok: bool) -> usize {
    println!("{} {name}", if ok { "PASS" } else { "FAIL" });
    usize::from(!ok)
}

fn toy(s: &str) -> SchemeParams {
    s.parse().expect("built-in parameter string")
}

fn round_trips(p: SchemeParams, rng: &mut ChaCha20Rng) -> bool {
    let Ok((pk, sk)) = keygen(p, rng) else {
        return false;
    };
    let pk = PublicKey::from_bytes(&pk.to_bytes());
    let sk = SecretKey::from_bytes(&sk.to_bytes());
    let (Ok(pk), Ok(sk)) = (pk, sk) else {
        return false;
    };
    let mask = pk.tower().mid().mask();
    (0..20).all(|_| {
        let x: Vec<FqmElem> = (0..p.k()).map(|_| FqmElem(rng.gen::<u64>() & mask)).collect();
        let Ok(ct) = pk.encrypt(&x, rng) else {
            return false;
        };
        let ct = Ciphertext::from_bytes(&ct.to_bytes()).expect("own encoding");
        sk.decrypt(&ct).ok() == Some(x)
    })
}

/// Returns the number of failed checks.
pub fn run() -> usize {
    let mut rng = ChaCha20Rng::seed_from_u64(0x5e1f);
    let mut failed = 0;

    for s in ["toy:2,3,4", "toy:2,4,6", "toy:4,4,6", "toy:2,8,12"] {
        failed += check(&format!("round trips at {s}"), round_trips(toy(s), &mut rng));
    }

    for (m, total, linear) in [(3, 168, 21), (2, 6, 6)] {
        let t = TowerField::new(1, m).expect("small tower");
        let maps = SemilinearMap::enumerate(FqmOverFq(t));
        let fl = maps.iter().filter(|p| p.is_fully_linear()).count();
        failed += check(&format!("census over F_{}/F_2: {fl} / {}", 1 << m, maps.len()), maps.len() == total && fl == linear);
    }

    let t = TowerField::new(1, 3).expect("small tower");
    let conj_ok = (0..100).all(|_| {
        let g = sample_normal_element(&t, &mut rng);
        let gbar = t.conjugate_vector(g);
        let sum: Vec<_> = gbar.iter().zip(t.frobenius_vec(&gbar, 3)).map(|(&a, b)| t.top().add(a, b)).collect();
        t.rank_weight(&sum, Subfield::Fq) == 3
    });
    failed += check("rank of g + g^[m] is m at n = 6", conj_ok);

    let decoders = (0..200).all(|_| {
        let code = GabidulinCode::new(&t, sample_normal_element(&t, &mut rng), 4).expect("normal element");
        let x: Vec<_> = (0..4).map(|_| t.unpack(rng.gen::<u128>() & 0x3f)).collect();
        let e = sample_rank_error_top(&t, 1, &mut rng).expect("t ≤ n");
        let y: Vec<_> = code.encode(&x).iter().zip(&e).map(|(&a, &b)| t.top().add(a, b)).collect();
        let a = code.decode(&y);
        a.as_ref().map(|d| &d.x) == Ok(&x) && a == code.decode_euclidean(&y)
    });
    failed += check("decoders agree on [6,4] words within radius 1", decoders);

    for s in ["toy:2,3,4", "toy:2,4,6"] {
        let p = toy(s);
        let ok = (0..5).all(|_| keygen(p, &mut rng).map(|(pk, _)| plaintext_system_nullity(&pk) == p.k() - p.m()).unwrap_or(false));
        failed += check(&format!("plaintext-system nullity k-m at {s}"), ok);
    }

    failed += check("Phi_2(x^6 - 1) = 24", phi_x_n_minus_1(1, 6) == BigUint::from(24u8));
    let (reps, _) = exhaustive_equiv_classes(&TowerField::new(1, 2).expect("small tower"));
    failed += check(
        &format!("equivalence classes at (2,2,4): {} enumerated", reps.len()),
        BigUint::from(reps.len()) == count_equiv_classes(1, 2),
    );
    failed
}
