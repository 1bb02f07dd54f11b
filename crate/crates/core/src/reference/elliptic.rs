//! Complete elliptic integrals K(m) and E(m) by the arithmetic–geometric
//! mean iteration (parameter convention: m = k², the modulus squared).
//! Quadratically convergent; no special-function dependency.

/// Complete elliptic integrals (K(m), E(m)) for 0 ≤ m < 1.
///
/// AGM iteration: a₀ = 1, b₀ = √(1−m), c₀ = √m; aₙ₊₁ = (aₙ+bₙ)/2,
/// bₙ₊₁ = √(aₙbₙ), cₙ₊₁ = (aₙ−bₙ)/2, iterated until |cₙ| ≤ 1e-14·aₙ.
/// Then K = π/(2a∞) and E = K·(1 − Σ 2ⁿ⁻¹cₙ²) with the sum from n = 0.
///
/// At m = 1, K diverges: returns (+∞, 1). Negative m or m > 1 panics.
pub fn elliptic_ke(m: f64) -> (f64, f64) {
    assert!((0.0..=1.0).contains(&m), "elliptic_ke needs m in [0,1], got {m}");
    if m == 1.0 {
        return (f64::INFINITY, 1.0);
    }
    let mut a = 1.0f64;
    let mut b = (1.0 - m).sqrt();
    let mut c = m.sqrt();
    let mut c_sum = 0.5 * c * c; // 2^{-1}·c₀²
    let mut pow2 = 1.0f64; // 2^{n-1} for n = 1, 2, ...
    for _ in 0..64 {
        if c.abs() <= 1e-14 * a {
            break;
        }
        let an = 0.5 * (a + b);
        let bn = (a * b).sqrt();
        c = 0.5 * (a - b);
        a = an;
        b = bn;
        c_sum += pow2 * c * c;
        pow2 *= 2.0;
    }
    let k = std::f64::consts::FRAC_PI_2 / a;
    let e = k * (1.0 - c_sum);
    (k, e)
}
