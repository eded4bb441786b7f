/// Euler–Mascheroni constant γ = −ψ(1).
pub const EULER_GAMMA: f64 = 0.577_215_664_901_533;

/// ψ(1), hardcoded.
pub const DIGAMMA_ONE: f64 = -EULER_GAMMA;

/// Digamma function for `x > 0`: upward recurrence to `x ≥ 10`, then the
/// asymptotic series in `1/x²`.
pub fn digamma(x: f64) -> f64 {
    if !(x > 0.0) {
        return f64::NAN;
    }
    if x == 1.0 {
        return DIGAMMA_ONE;
    }
    let mut x = x;
    let mut acc = 0.0;
    while x < 10.0 {
        acc -= 1.0 / x;
        x += 1.0;
    }
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    // Bernoulli terms B_{2k}/(2k)
    let series = inv2
        * (1.0 / 12.0
            - inv2
                * (1.0 / 120.0
                    - inv2 * (1.0 / 252.0 - inv2 * (1.0 / 240.0 - inv2 * (1.0 / 132.0)))));
    acc + x.ln() - 0.5 * inv - series
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integer_values_follow_harmonic_numbers() {
        let mut h = 0.0;
        for n in 1..20 {
            let want = h - EULER_GAMMA;
            assert!((digamma(n as f64) - want).abs() < 1e-13, "n={n}");
            h += 1.0 / n as f64;
        }
    }

    #[test]
    fn half_integer_and_recurrence() {
        // ψ(1/2) = −γ − 2 ln 2
        let want = -EULER_GAMMA - 2.0 * std::f64::consts::LN_2;
        assert!((digamma(0.5) - want).abs() < 1e-13);
        for &x in &[0.3, 1.7, 4.2, 9.9, 30.0] {
            assert!((digamma(x + 1.0) - digamma(x) - 1.0 / x).abs() < 1e-12);
        }
        assert!(digamma(0.0).is_nan());
    }
}
