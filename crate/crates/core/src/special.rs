//! Log-gamma, log-beta and log-sum-exp.

use crate::real::Real;

// Stirling series coefficients B_{2k} / (2k (2k-1)), k = 1..8.
const STIRLING: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
];

const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;

/// Arguments below this are shifted upward before the asymptotic series.
const SHIFT_BELOW: f64 = 16.0;

/// Natural log of the gamma function for `x > 0`.
///
/// Uses the Stirling series for `x >= 16` and the recurrence
/// `ln Γ(x) = ln Γ(x + k) − ln(x (x+1) … (x+k−1))` below that.
/// Returns NaN for `x <= 0` and `+inf` for `x = +inf`.
pub fn ln_gamma<F: Real>(x: F) -> F {
    if x.is_nan() || x <= F::zero() {
        return F::nan();
    }
    if x.is_infinite() {
        return x;
    }
    // Exact small integers: ln Γ(1) = ln Γ(2) = 0.
    if x == F::one() || x == F::lit(2.0) {
        return F::zero();
    }
    let shift_below = F::lit(SHIFT_BELOW);
    let mut z = x;
    let mut product = F::one();
    while z < shift_below {
        product = product * z;
        z = z + F::one();
    }
    stirling(z) - product.ln()
}

fn stirling<F: Real>(z: F) -> F {
    let inv = z.recip();
    let inv2 = inv * inv;
    let mut series = F::zero();
    for &c in STIRLING.iter().rev() {
        series = series * inv2 + F::lit(c);
    }
    (z - F::lit(0.5)) * z.ln() - z + F::lit(HALF_LN_2PI) + series * inv
}

/// `ln B(a, b) = ln Γ(a) + ln Γ(b) − ln Γ(a + b)`.
pub fn ln_beta<F: Real>(a: F, b: F) -> F {
    ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b)
}

/// `ln(e^a + e^b)` without overflow; `-inf` acts as the identity.
#[inline]
pub fn log_add_exp<F: Real>(a: F, b: F) -> F {
    if a == F::neg_infinity() {
        return b;
    }
    if b == F::neg_infinity() {
        return a;
    }
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

/// `ln Σ e^{x_i}`; `-inf` for an empty slice.
pub fn log_sum_exp<F: Real>(xs: &[F]) -> F {
    let max = xs.iter().copied().fold(F::neg_infinity(), F::max);
    if max == F::neg_infinity() || max.is_infinite() {
        return max;
    }
    let sum = xs.iter().fold(F::zero(), |acc, &x| acc + (x - max).exp());
    max + sum.ln()
}
