use num_bigint::BigUint;

fn pow2(bits: u64) -> BigUint {
    BigUint::from(1u8) << bits
}

/// Number of `F_q`-linear automorphisms of `F_{q^m}` with `q = 2^e`:
/// `∏_{i<m} (q^m - q^i)`.
pub fn automorphism_count(q_log: u32, m: usize) -> BigUint {
    let top = pow2(q_log as u64 * m as u64);
    (0..m).map(|i| &top - pow2(q_log as u64 * i as u64)).product()
}

/// Number of fully linear automorphisms: `m(q^m - 1)`.
pub fn fully_linear_count(q_log: u32, m: usize) -> BigUint {
    (pow2(q_log as u64 * m as u64) - 1u8) * m
}

/// Number of admissible secret maps on `F_{q^n}` over `F_{q^m}`:
/// `(q^n - 1)(q^n - q^m) - 2(q^n - 1)`.
pub fn secret_phi_count(q_log: u32, m: usize) -> BigUint {
    let mbits = q_log as u64 * m as u64;
    automorphism_count(q_log * m as u32, 2) - fully_linear_count(mbits as u32, 2)
}
