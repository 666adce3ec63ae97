//! Gamma function via the Lanczos approximation (g = 7, 9 coefficients).
//!
//! Relative error is below 1e-13 on (0, 10), which covers every argument the
//! fractional kernels need directly; larger arguments (Mittag-Leffler series
//! terms) only have to be good to a few ulps of the term magnitude.

use std::f64::consts::PI;

const LANCZOS_G: f64 = 7.0;

// GSL / Numerical Recipes coefficient set for g = 7.
const LANCZOS_COEFFS: [f64; 9] = [
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
];

/// Γ(x) for real x (poles at non-positive integers return NaN or ±inf).
pub fn gamma(x: f64) -> f64 {
    if x < 0.5 {
        // reflection formula
        PI / ((PI * x).sin() * gamma(1.0 - x))
    } else {
        let x = x - 1.0;
        let mut acc = LANCZOS_COEFFS[0];
        for (i, c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
            acc += c / (x + i as f64);
        }
        let t = x + LANCZOS_G + 0.5;
        (2.0 * PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_values() {
        assert!((gamma(0.5) - PI.sqrt()).abs() < 1e-14);
        assert!((gamma(1.0) - 1.0).abs() < 1e-14);
        assert!((gamma(2.0) - 1.0).abs() < 1e-14);
        assert!((gamma(5.0) - 24.0).abs() < 1e-12);
        assert!((gamma(1.5) - 0.5 * PI.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn recurrence_on_unit_interval_arguments() {
        // Γ(x+1) = x Γ(x), swept over (0, 10)
        let mut x = 0.05;
        while x < 10.0 {
            let lhs = gamma(x + 1.0);
            let rhs = x * gamma(x);
            assert!(
                (lhs - rhs).abs() <= 1e-13 * lhs.abs().max(1.0),
                "recurrence violated at x = {x}: {lhs} vs {rhs}"
            );
            x += 0.05;
        }
    }

    #[test]
    fn reflection_region() {
        // Γ(-0.5) = -2 sqrt(pi)
        assert!((gamma(-0.5) + 2.0 * PI.sqrt()).abs() < 1e-12);
    }
}
