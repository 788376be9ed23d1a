//! Special functions: log-gamma, gamma, error function, normal CDF, and the
//! regularized incomplete beta function.
//!
//! The gamma and error functions are generic over [`Scalar`] so the critical
//! constants can be evaluated in `f32` as well as `f64`. Accuracy figures
//! below refer to `f64`.

use crate::Scalar;

#[inline]
fn c<F: Scalar>(x: f64) -> F {
    F::from_f64(x).expect("constant representable in scalar type")
}

// Lanczos approximation, g = 7, n = 9.
const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

fn lanczos_sum<F: Scalar>(z: F) -> F {
    // z is the shifted argument x - 1
    let mut acc = c::<F>(LANCZOS_COEF[0]);
    for (i, &coef) in LANCZOS_COEF.iter().enumerate().skip(1) {
        acc = acc + c::<F>(coef) / (z + c::<F>(i as f64));
    }
    acc
}

/// Natural logarithm of |Γ(x)|.
///
/// Lanczos approximation with reflection for `x < 1/2`; relative error of
/// Γ itself is below 1e-14 on `[1e-3, 170]`. Returns `+inf` at the poles.
pub fn ln_gamma<F: Scalar>(x: F) -> F {
    let half = c::<F>(0.5);
    if x < half {
        // Γ(x)Γ(1-x) = π / sin(πx)
        let s = (F::PI() * x).sin();
        if s == F::zero() {
            return F::infinity();
        }
        return (F::PI() / s.abs()).ln() - ln_gamma(F::one() - x);
    }
    let z = x - F::one();
    let t = z + c::<F>(LANCZOS_G) + half;
    half * (F::TAU()).ln() + (z + half) * t.ln() - t + lanczos_sum(z).ln()
}

/// Γ(x) for real `x` away from the non-positive integers.
pub fn gamma<F: Scalar>(x: F) -> F {
    let half = c::<F>(0.5);
    if x < half {
        let s = (F::PI() * x).sin();
        if s == F::zero() {
            return F::nan();
        }
        return F::PI() / (s * gamma(F::one() - x));
    }
    if x > c::<F>(140.0) {
        return ln_gamma(x).exp();
    }
    let z = x - F::one();
    let t = z + c::<F>(LANCZOS_G) + half;
    (F::TAU()).sqrt() * t.powf(z + half) * (-t).exp() * lanczos_sum(z)
}

/// ln B(a, b).
pub fn ln_beta<F: Scalar>(a: F, b: F) -> F {
    ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b)
}

fn stirling_tail(z: f64) -> f64 {
    // ln Γ(z) - [(z - 1/2) ln z - z + ln(2π)/2] for z >= 20
    let z2 = z * z;
    (1.0 / 12.0 - (1.0 / 360.0 - (1.0 / 1260.0 - 1.0 / (1680.0 * z2)) / z2) / z2) / z
}

/// ln Γ(x) − ln Γ(x + b) for `x > 0`, `b >= 0`, without the cancellation
/// that the naive difference suffers for large `x`.
pub fn ln_gamma_ratio(x: f64, b: f64) -> f64 {
    if b == 0.0 {
        return 0.0;
    }
    if x < 20.0 {
        return ln_gamma(x) - ln_gamma(x + b);
    }
    let xb = x + b;
    -(x - 0.5) * (b / x).ln_1p() - b * xb.ln() + b + stirling_tail(x) - stirling_tail(xb)
}

// Regularized lower incomplete gamma P(a, x), series form; valid for x < a + 1.
fn gamma_p_series<F: Scalar>(a: F, x: F) -> F {
    let mut ap = a;
    let mut del = F::one() / a;
    let mut sum = del;
    for _ in 0..10_000 {
        ap = ap + F::one();
        del = del * x / ap;
        sum = sum + del;
        if del.abs() < sum.abs() * F::epsilon() {
            break;
        }
    }
    sum * (-x + a * x.ln() - ln_gamma(a)).exp()
}

// Regularized upper incomplete gamma Q(a, x), Lentz continued fraction; x >= a + 1.
fn gamma_q_cfrac<F: Scalar>(a: F, x: F) -> F {
    let tiny = F::min_positive_value() / F::epsilon();
    let two = c::<F>(2.0);
    let mut b = x + F::one() - a;
    let mut cc = F::one() / tiny;
    let mut d = F::one() / b;
    let mut h = d;
    let mut i = F::one();
    for _ in 0..10_000 {
        let an = -i * (i - a);
        b = b + two;
        d = an * d + b;
        if d.abs() < tiny {
            d = tiny;
        }
        cc = b + an / cc;
        if cc.abs() < tiny {
            cc = tiny;
        }
        d = F::one() / d;
        let del = d * cc;
        h = h * del;
        if (del - F::one()).abs() < F::epsilon() {
            break;
        }
        i = i + F::one();
    }
    (-x + a * x.ln() - ln_gamma(a)).exp() * h
}

/// Complementary error function, via the incomplete gamma identity
/// erfc(x) = Q(1/2, x²). Absolute error below 1e-15 in `f64`.
pub fn erfc<F: Scalar>(x: F) -> F {
    let half = c::<F>(0.5);
    if x.is_nan() {
        return x;
    }
    if x < F::zero() {
        return c::<F>(2.0) - erfc(-x);
    }
    let x2 = x * x;
    if x2 < half + F::one() {
        F::one() - gamma_p_series(half, x2)
    } else if x2 > c::<F>(750.0) {
        F::zero()
    } else {
        gamma_q_cfrac(half, x2)
    }
}

/// Error function.
pub fn erf<F: Scalar>(x: F) -> F {
    let half = c::<F>(0.5);
    if x < F::zero() {
        return -erf(-x);
    }
    let x2 = x * x;
    if x2 < half + F::one() {
        gamma_p_series(half, x2)
    } else {
        F::one() - erfc(x)
    }
}

/// Standard normal CDF Φ(x).
pub fn normal_cdf<F: Scalar>(x: F) -> F {
    c::<F>(0.5) * erfc(-x / F::SQRT_2())
}

/// Upper normal tail 1 − Φ(x), accurate for large positive `x`.
pub fn normal_sf<F: Scalar>(x: F) -> F {
    c::<F>(0.5) * erfc(x / F::SQRT_2())
}

fn beta_cfrac(a: f64, b: f64, x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let mut cc = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < TINY {
        d = TINY;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..100_000 {
        let m = m as f64;
        let m2 = 2.0 * m;
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        cc = 1.0 + aa / cc;
        if cc.abs() < TINY {
            cc = TINY;
        }
        d = 1.0 / d;
        h *= d * cc;
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        cc = 1.0 + aa / cc;
        if cc.abs() < TINY {
            cc = TINY;
        }
        d = 1.0 / d;
        let del = d * cc;
        h *= del;
        if (del - 1.0).abs() < 1e-16 {
            break;
        }
    }
    h
}

/// Regularized incomplete beta function I_x(a, b).
pub fn beta_reg(a: f64, b: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return 1.0;
    }
    let ln_front = a * x.ln() + b * (-x).ln_1p() - ln_beta_stable(a, b);
    if x < (a + 1.0) / (a + b + 2.0) {
        (ln_front.exp() * beta_cfrac(a, b, x) / a).min(1.0)
    } else {
        (1.0 - ln_front.exp() * beta_cfrac(b, a, 1.0 - x) / b).max(0.0)
    }
}

/// `ln B(a, b)` without the cancellation of `ln Γ(a) + ln Γ(b) − ln Γ(a+b)`
/// when one argument is large.
pub fn ln_beta_stable(a: f64, b: f64) -> f64 {
    let (small, large) = if a < b { (a, b) } else { (b, a) };
    ln_gamma(small) + ln_gamma_ratio(large, small)
}

/// Inverse of `x ↦ I_x(a, b)`: the `p`-quantile of Beta(a, b).
///
/// Safeguarded Newton iteration on a bisection bracket; the result satisfies
/// `|I_x(a,b) - p| <= 1e-14` or brackets `x` to machine precision.
pub fn beta_reg_inv(a: f64, b: f64, p: f64) -> f64 {
    if p <= 0.0 {
        return 0.0;
    }
    if p >= 1.0 {
        return 1.0;
    }
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    let ln_b = ln_beta_stable(a, b);
    let mut x = 0.5;
    for _ in 0..200 {
        let f = beta_reg(a, b, x) - p;
        if f.abs() <= 1e-15 {
            return x;
        }
        if f < 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        let ln_pdf = (a - 1.0) * x.ln() + (b - 1.0) * (-x).ln_1p() - ln_b;
        let step = f / ln_pdf.exp();
        let mut next = x - step;
        if !(next > lo && next < hi) || !next.is_finite() {
            next = 0.5 * (lo + hi);
        }
        if (next - x).abs() <= 4.0 * f64::EPSILON * x.max(f64::MIN_POSITIVE) {
            return next;
        }
        x = next;
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn gamma_at_half_integers() {
        let sqrt_pi = std::f64::consts::PI.sqrt();
        assert_relative_eq!(gamma(0.5_f64), sqrt_pi, max_relative = 1e-14);
        assert_relative_eq!(gamma(1.5_f64), 0.5 * sqrt_pi, max_relative = 1e-14);
        assert_relative_eq!(gamma(5.0_f64), 24.0, max_relative = 1e-14);
        assert_relative_eq!(ln_gamma(100.0_f64), 359.134_205_369_575_4, max_relative = 1e-14);
        // Γ(0.75), frozen from mpmath
        assert_relative_eq!(gamma(0.75_f64), 1.225_416_702_465_177_6, max_relative = 1e-14);
    }

    #[test]
    fn reflection_branch() {
        // Γ(-0.5) = -2√π
        assert_relative_eq!(gamma(-0.5_f64), -2.0 * std::f64::consts::PI.sqrt(), max_relative = 1e-13);
        assert_relative_eq!(gamma(0.1_f64), 9.513_507_698_668_732, max_relative = 1e-13);
    }

    #[test]
    fn ratio_matches_naive_for_moderate_arguments() {
        for &(x, b) in &[(20.0, 0.5), (35.5, 2.0), (123.0, 0.25), (19.0, 3.0)] {
            let naive = ln_gamma(x) - ln_gamma(x + b);
            assert_relative_eq!(ln_gamma_ratio(x, b), naive, max_relative = 1e-12);
        }
        // large argument asymptotics: Γ(x)/Γ(x+b) ≈ x^{-b}
        let x = 1e12;
        assert_relative_eq!(ln_gamma_ratio(x, 0.5), -0.5 * x.ln(), max_relative = 1e-12);
    }

    #[test]
    fn erf_values() {
        assert_relative_eq!(erf(0.5_f64), 0.520_499_877_813_046_5, max_relative = 1e-14);
        assert_relative_eq!(erfc(3.0_f64), 2.209_049_699_858_544e-5, max_relative = 1e-12);
        assert_relative_eq!(normal_cdf(1.0_f64), 0.841_344_746_068_542_9, max_relative = 1e-14);
        assert_eq!(normal_cdf(0.0_f64), 0.5);
    }

    #[test]
    fn f32_instantiation() {
        let g: f32 = gamma(0.5_f32);
        assert!((g - std::f32::consts::PI.sqrt()).abs() < 1e-5);
        let p: f32 = normal_cdf(1.0_f32);
        assert!((p - 0.841_344_7).abs() < 1e-5);
    }

    #[test]
    fn incomplete_beta_roundtrip() {
        for &(a, b) in &[(1.0, 0.5), (2.0, 3.0), (0.3, 0.7), (5.0, 1.5)] {
            for &p in &[1e-6, 0.1, 0.5, 0.9, 0.999_999] {
                let x: f64 = beta_reg_inv(a, b, p);
                // the CDF can only be matched to within one ulp of x
                let pdf = ((a - 1.0) * x.ln() + (b - 1.0) * (-x).ln_1p() - ln_beta_stable(a, b)).exp();
                let slack = 1e-12 + 4.0 * f64::EPSILON * pdf;
                assert!((beta_reg(a, b, x) - p).abs() < slack, "a={a} b={b} p={p}");
            }
        }
        // Beta(1, b) has closed form 1 - (1-x)^b
        assert_relative_eq!(beta_reg(1.0, 0.5, 0.75), 0.5, max_relative = 1e-14);
    }
}
