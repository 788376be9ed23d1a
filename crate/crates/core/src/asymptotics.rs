//! Critical constants, slowly varying families, and the extinction/survival
//! classifier.
//!
//! With `β_c = 1/(2γ)` the one-particle tail satisfies
//!
//! ```text
//! K↓ ≤ liminf n P(D→ ≥ n) / (n^{1-2βγ} L(n^{2γ})) ≤ limsup (...) ≤ K↑
//! ```
//!
//! where for `γ ≥ 1` the lower constant depends on a free parameter `c₀ > 0`
//! through `θ(c₀) = (1 − Φ(1/√c₀))/2`, and for `γ < 1` both constants are
//! explicit Gamma-function expressions. The classifier turns these bounds
//! into a verdict for the interacting system.

use serde::{Deserialize, Serialize};

use crate::error::domain;
use crate::quad::{golden_max, Maximum};
use crate::special::{gamma as gamma_fn, normal_sf};
use crate::{Result, Scalar};

#[inline]
fn c<F: Scalar>(x: f64) -> F {
    F::from_f64(x).expect("constant representable in scalar type")
}

/// A slowly varying function from one of the certified parametric families.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum SlowlyVarying {
    /// `L(x) = c`.
    Constant { c: f64 },
    /// `L(x) = δ (1 + ln x)^{−(1+δ)}`.
    LogPower { delta: f64 },
    /// `L(x) = c (1 + ln x)^ρ`.
    PowerOfLog { c: f64, rho: f64 },
}

impl SlowlyVarying {
    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            SlowlyVarying::Constant { c } => c > 0.0 && c.is_finite(),
            SlowlyVarying::LogPower { delta } => delta > 0.0 && delta.is_finite(),
            SlowlyVarying::PowerOfLog { c, rho } => c > 0.0 && c.is_finite() && rho.is_finite(),
        };
        if ok {
            Ok(())
        } else {
            domain(format!("invalid slowly varying parameters {self:?}"))
        }
    }

    /// `L(x)` for `x ≥ 1`.
    pub fn eval(&self, x: f64) -> f64 {
        let lx = 1.0 + x.max(1.0).ln();
        match *self {
            SlowlyVarying::Constant { c } => c,
            SlowlyVarying::LogPower { delta } => delta * lx.powf(-(1.0 + delta)),
            SlowlyVarying::PowerOfLog { c, rho } => c * lx.powf(rho),
        }
    }

    /// `limsup_n L(n^{2γ})`; independent of `γ > 0` for every family.
    pub fn limsup(&self) -> f64 {
        self.limit()
    }

    /// `liminf_n L(n^{2γ})`.
    pub fn liminf(&self) -> f64 {
        self.limit()
    }

    fn limit(&self) -> f64 {
        match *self {
            SlowlyVarying::Constant { c } => c,
            SlowlyVarying::LogPower { .. } => 0.0,
            SlowlyVarying::PowerOfLog { c, rho } => {
                if rho < 0.0 {
                    0.0
                } else if rho > 0.0 {
                    f64::INFINITY
                } else {
                    c
                }
            }
        }
    }

    /// The same family multiplied by `k > 0`.
    pub fn scaled(&self, k: f64) -> Self {
        match *self {
            SlowlyVarying::Constant { c } => SlowlyVarying::Constant { c: c * k },
            SlowlyVarying::LogPower { delta } => {
                SlowlyVarying::PowerOfLog { c: delta * k, rho: -(1.0 + delta) }
            }
            SlowlyVarying::PowerOfLog { c, rho } => SlowlyVarying::PowerOfLog { c: c * k, rho },
        }
    }

    /// `sup_{y ∈ [lo, hi]} |L(xy)/L(x) − 1|` over a geometric grid of `points` values.
    pub fn uct_sup(&self, x: f64, lo: f64, hi: f64, points: usize) -> f64 {
        let lx = self.eval(x);
        let ratio = hi / lo;
        (0..points)
            .map(|i| {
                let y = lo * ratio.powf(i as f64 / (points - 1).max(1) as f64);
                (self.eval(x * y) / lx - 1.0).abs()
            })
            .fold(0.0, f64::max)
    }
}

/// `β_c = 1/(2γ)`.
pub fn beta_c<F: Scalar>(gamma: F) -> Result<F> {
    if !(gamma > F::zero()) {
        return domain("gamma must be positive");
    }
    Ok(F::one() / (c::<F>(2.0) * gamma))
}

/// `θ(c₀) = (1 − Φ(1/√c₀)) / 2`.
pub fn theta<F: Scalar>(c0: F) -> Result<F> {
    if !(c0 > F::zero()) {
        return domain("c0 must be positive");
    }
    Ok(c::<F>(0.5) * normal_sf(F::one() / c0.sqrt()))
}

fn check_gamma_beta<F: Scalar>(gamma: F, beta: F) -> Result<()> {
    if !(gamma > F::zero() && gamma.is_finite()) {
        return domain("gamma must be positive and finite");
    }
    if !(beta > F::zero() && beta.is_finite()) {
        return domain("beta must be positive and finite");
    }
    Ok(())
}

/// Upper constant of the `γ ≥ 1` regime:
/// `2γ Γ(2βγ) 2^{β(1−γ)} (Γ(1 − 1/(2γ))/√π)^{−2γβ}`. Needs `γ > 1/2`.
pub fn k_up_wear_out<F: Scalar>(gamma: F, beta: F) -> Result<F> {
    check_gamma_beta(gamma, beta)?;
    let two = c::<F>(2.0);
    if !(gamma > c::<F>(0.5)) {
        return domain("the wear-out upper constant needs gamma > 1/2");
    }
    let g = gamma_fn(F::one() - F::one() / (two * gamma)) / F::PI().sqrt();
    Ok(two * gamma
        * gamma_fn(two * beta * gamma)
        * two.powf(beta * (F::one() - gamma))
        * g.powf(-two * gamma * beta))
}

/// Upper constant of the `γ < 1` regime:
/// `2γ Γ(2βγ) 2^{−βγ} Γ(β) / (γ Γ(βγ))`.
pub fn k_up_burn_in<F: Scalar>(gamma: F, beta: F) -> Result<F> {
    check_gamma_beta(gamma, beta)?;
    let two = c::<F>(2.0);
    Ok(two * gamma_fn(two * beta * gamma) * two.powf(-beta * gamma) * gamma_fn(beta)
        / gamma_fn(beta * gamma))
}

/// Upper constant K↑(γ, β). `γ = 1` is routed to the wear-out formula.
pub fn k_up<F: Scalar>(gamma: F, beta: F) -> Result<F> {
    if gamma >= F::one() {
        k_up_wear_out(gamma, beta)
    } else {
        k_up_burn_in(gamma, beta)
    }
}

/// Lower constant of the `γ ≥ 1` regime in closed form:
/// `2γ θ(c₀) ∫₀^∞ y^{2γβ−1} e^{−c₀^γ y^{2γ}} dy = θ(c₀) Γ(β) c₀^{−γβ}`.
pub fn k_down_wear_out<F: Scalar>(gamma: F, beta: F, c0: F) -> Result<F> {
    check_gamma_beta(gamma, beta)?;
    Ok(theta(c0)? * gamma_fn(beta) * c0.powf(-gamma * beta))
}

/// Lower constant of the `γ < 1` regime:
/// `2γ Γ(2βγ) 2^{−β(1+γ)} Γ(β) / (γ Γ(βγ))`.
pub fn k_down_burn_in<F: Scalar>(gamma: F, beta: F) -> Result<F> {
    check_gamma_beta(gamma, beta)?;
    let two = c::<F>(2.0);
    Ok(two * gamma_fn(two * beta * gamma) * two.powf(-beta * (F::one() + gamma)) * gamma_fn(beta)
        / gamma_fn(beta * gamma))
}

/// Lower constant K↓(γ, β[, c₀]); `c0` is required when `γ ≥ 1`.
pub fn k_down<F: Scalar>(gamma: F, beta: F, c0: Option<F>) -> Result<F> {
    if gamma >= F::one() {
        match c0 {
            Some(c0) => k_down_wear_out(gamma, beta, c0),
            None => domain("c0 is required when gamma >= 1"),
        }
    } else {
        k_down_burn_in(gamma, beta)
    }
}

/// Search bracket for `c₀`.
pub const C0_RANGE: (f64, f64) = (1e-4, 1e4);

/// `sup_{c₀} K↓(γ, β, c₀)` by golden-section search on `ln c₀ ∈ [ln 1e-4, ln 1e4]`.
///
/// Returns the maximizer, the value, and whether the optimum sits at the
/// bracket edge (in which case the supremum may lie outside the bracket).
pub fn k_down_sup<F: Scalar>(gamma: F, beta: F) -> Result<Maximum<F>> {
    check_gamma_beta(gamma, beta)?;
    if gamma < F::one() {
        return domain("the c0 optimization applies to gamma >= 1");
    }
    let lo = c::<F>(C0_RANGE.0).ln();
    let hi = c::<F>(C0_RANGE.1).ln();
    let m = golden_max(
        |lc: F| k_down_wear_out(gamma, beta, lc.exp()).unwrap_or(F::zero()),
        lo,
        hi,
        c::<F>(1e-9).max(F::epsilon().sqrt()),
    );
    Ok(Maximum { argmax: m.argmax.exp(), value: m.value, at_boundary: m.at_boundary })
}

/// All constants for one `(γ, β, c₀)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CriticalConstants<F> {
    pub beta_c: F,
    #[serde(rename = "K_up")]
    pub k_up: F,
    #[serde(rename = "K_down")]
    pub k_down: F,
    /// `None` for `γ < 1`, where K↓ carries no free parameter.
    #[serde(rename = "K_down_sup")]
    pub k_down_sup: Option<F>,
    pub c0_star: Option<F>,
    pub c0_at_boundary: bool,
    pub theta: F,
}

impl<F: Scalar> CriticalConstants<F> {
    pub fn compute(gamma: F, beta: F, c0: F) -> Result<Self> {
        let (k_down_sup, c0_star, at_boundary) = if gamma >= F::one() {
            let m = k_down_sup(gamma, beta)?;
            (Some(m.value), Some(m.argmax), m.at_boundary)
        } else {
            (None, None, false)
        };
        Ok(Self {
            beta_c: beta_c(gamma)?,
            k_up: k_up(gamma, beta)?,
            k_down: k_down(gamma, beta, Some(c0))?,
            k_down_sup,
            c0_star,
            c0_at_boundary: at_boundary,
            theta: theta(c0)?,
        })
    }

    /// The lower end of the sandwich used in the ratio checks: `sup_{c₀} K↓`
    /// for `γ ≥ 1`, the explicit K↓ otherwise.
    pub fn lower(&self) -> F {
        self.k_down_sup.unwrap_or(self.k_down)
    }
}

/// How the density of `π` relates to `(1−u)^{β−1} L(1/(1−u))` near `u = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Envelope {
    /// Asymptotic equivalence.
    #[default]
    Exact,
    /// Density eventually below the profile: only extinction conclusions apply.
    Upper,
    /// Density eventually above the profile: only survival conclusions apply.
    Lower,
}

/// Right-edge description consumed by [`classify_phase`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EdgeClass {
    Regular { beta: f64, l: SlowlyVarying, envelope: Envelope },
    /// Density `δ (1−u)^{−1} (1 + ln 1/(1−u))^{−(1+δ)}`.
    LogCorrected { delta: f64 },
    /// All mass on `[0, cap]` with `cap < 1`.
    Truncated { cap: f64 },
}

/// Summary of the occupation law that the classifier needs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EtaSummary {
    /// `E(η)`, possibly `+inf`.
    pub mean: f64,
    pub prob_zero: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    ExtinctAS,
    SurvivesWP,
    BoundaryInconclusive,
    OutsideHypotheses,
}

impl Verdict {
    pub fn label(self) -> &'static str {
        match self {
            Verdict::ExtinctAS => "ExtinctAS",
            Verdict::SurvivesWP => "SurvivesWP",
            Verdict::BoundaryInconclusive => "BoundaryInconclusive",
            Verdict::OutsideHypotheses => "OutsideHypotheses",
        }
    }
}

/// Numbers behind a verdict; fields not involved are `None`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct VerdictNumbers {
    pub beta_c: Option<f64>,
    #[serde(rename = "K_up")]
    pub k_up: Option<f64>,
    #[serde(rename = "K_down_or_sup")]
    pub k_down_or_sup: Option<f64>,
    /// `2 K↑ limsup L(n^{2γ})`.
    pub boundary_lhs: Option<f64>,
    /// `K↓ liminf L(n^{2γ})` (with the `c₀` supremum when `γ ≥ 1`).
    pub boundary_rhs: Option<f64>,
    /// `1/E(η)`, zero when the mean is infinite.
    pub inv_mean: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhaseVerdict {
    pub verdict: Verdict,
    pub reason: String,
    pub numbers: VerdictNumbers,
}

fn verdict(verdict: Verdict, reason: impl Into<String>, numbers: VerdictNumbers) -> PhaseVerdict {
    PhaseVerdict { verdict, reason: reason.into(), numbers }
}

/// Relative tolerance for treating `β` as equal to `β_c`.
pub const BOUNDARY_RTOL: f64 = 1e-12;

/// Classify `FM(Z, π, η, γ)` as almost-surely extinct, surviving with positive
/// probability, or undecided by the available criteria.
pub fn classify_phase(gamma: f64, edge: &EdgeClass, eta: EtaSummary) -> Result<PhaseVerdict> {
    if !(gamma > 0.0 && gamma.is_finite()) {
        return domain("gamma must be positive and finite");
    }
    if eta.mean.is_nan() || eta.mean < 0.0 || !(0.0..=1.0).contains(&eta.prob_zero) {
        return domain("eta summary out of range");
    }
    let finite_mean = eta.mean.is_finite();
    let has_particles = eta.prob_zero < 1.0;
    let bc = beta_c(gamma)?;
    let mut numbers = VerdictNumbers { beta_c: Some(bc), ..Default::default() };

    let (beta, l, envelope) = match *edge {
        EdgeClass::Truncated { cap } => {
            if !(cap > 0.0 && cap < 1.0) {
                return domain("truncation cap must lie in (0, 1)");
            }
            return Ok(if finite_mean {
                verdict(Verdict::ExtinctAS, "support bounded away from 1 and E(eta) finite", numbers)
            } else {
                verdict(Verdict::OutsideHypotheses, "bounded support needs E(eta) finite", numbers)
            });
        }
        EdgeClass::LogCorrected { delta } => {
            if !(delta > 0.0) {
                return domain("delta must be positive");
            }
            return Ok(if has_particles {
                verdict(Verdict::SurvivesWP, "log-corrected edge density forces survival for every gamma", numbers)
            } else {
                verdict(Verdict::OutsideHypotheses, "survival needs P(eta = 0) < 1", numbers)
            });
        }
        EdgeClass::Regular { beta, l, envelope } => (beta, l, envelope),
    };
    if !(beta > 0.0 && beta.is_finite()) {
        return domain("beta must be positive and finite");
    }
    l.validate()?;
    let extinction_allowed = envelope != Envelope::Lower;
    let survival_allowed = envelope != Envelope::Upper;

    if (beta - bc).abs() > BOUNDARY_RTOL * bc {
        if beta > bc {
            return Ok(match (finite_mean, extinction_allowed) {
                (true, true) => verdict(Verdict::ExtinctAS, "beta > beta_c and E(eta) finite", numbers),
                (false, _) => verdict(Verdict::OutsideHypotheses, "beta > beta_c but E(eta) infinite", numbers),
                (true, false) => verdict(
                    Verdict::OutsideHypotheses,
                    "lower envelope gives no extinction criterion",
                    numbers,
                ),
            });
        }
        return Ok(match (has_particles, survival_allowed) {
            (true, true) => verdict(Verdict::SurvivesWP, "beta < beta_c and P(eta = 0) < 1", numbers),
            (false, _) => verdict(Verdict::OutsideHypotheses, "beta < beta_c but eta = 0 a.s.", numbers),
            (true, false) => verdict(
                Verdict::OutsideHypotheses,
                "upper envelope gives no survival criterion",
                numbers,
            ),
        });
    }

    let kup = k_up(gamma, beta)?;
    let klow = if gamma >= 1.0 { k_down_sup(gamma, beta)?.value } else { k_down_burn_in(gamma, beta)? };
    let inv_mean = if finite_mean { 1.0 / eta.mean } else { 0.0 };
    let lhs = 2.0 * kup * l.limsup();
    let rhs = klow * l.liminf();
    numbers.k_up = Some(kup);
    numbers.k_down_or_sup = Some(klow);
    numbers.boundary_lhs = Some(lhs);
    numbers.boundary_rhs = Some(rhs);
    numbers.inv_mean = Some(inv_mean);

    if extinction_allowed && finite_mean && lhs < inv_mean {
        return Ok(verdict(Verdict::ExtinctAS, "beta = beta_c and 2 K_up limsup L < 1/E(eta)", numbers));
    }
    if survival_allowed && has_particles && rhs > inv_mean {
        return Ok(verdict(Verdict::SurvivesWP, "beta = beta_c and K_down liminf L > 1/E(eta)", numbers));
    }
    Ok(verdict(Verdict::BoundaryInconclusive, "beta = beta_c and neither boundary inequality holds", numbers))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn critical_curve() {
        assert_eq!(beta_c(1.0).unwrap(), 0.5);
        assert_eq!(beta_c(2.0).unwrap(), 0.25);
        assert_eq!(beta_c(0.5).unwrap(), 1.0);
        assert!(beta_c(0.0).is_err());
    }

    #[test]
    fn theta_values_and_limits() {
        // frozen from mpmath: (1 - Φ(1))/2
        assert_relative_eq!(theta(1.0).unwrap(), 0.079_327_626_965_728_53, max_relative = 1e-13);
        assert!(theta(1e12).unwrap() < 0.25 && theta(1e12).unwrap() > 0.2499);
        assert!(theta(1e-3).unwrap() < 1e-100);
        let mut prev = 0.0;
        for i in 1..200 {
            let t = theta(i as f64 * 0.05).unwrap();
            assert!(t > prev);
            prev = t;
        }
    }

    #[test]
    fn upper_constants() {
        assert_relative_eq!(k_up(1.0, 0.5).unwrap(), 2.0, max_relative = 1e-14);
        assert_relative_eq!(k_up(0.5, 1.0).unwrap(), 0.797_884_560_802_865_4, max_relative = 1e-13);
        assert_relative_eq!(k_up(2.0, 0.4).unwrap(), 4.888_952_704_004_128, max_relative = 1e-12);
        assert!(k_up_wear_out(0.5, 1.0).is_err());
    }

    #[test]
    fn lower_constants() {
        assert_relative_eq!(k_down(1.0, 0.5, Some(1.0)).unwrap(), 0.140_604_557_898_601_8, max_relative = 1e-12);
        assert!(k_down(2.0, 0.5, None).is_err());
        let (g, b) = (0.5, 1.5);
        assert_relative_eq!(
            k_down(g, b, None).unwrap() / k_up(g, b).unwrap(),
            2f64.powf(-b),
            max_relative = 1e-14
        );
    }

    #[test]
    fn supremum_over_c0() {
        let m = k_down_sup(1.0, 0.5).unwrap();
        assert_relative_eq!(m.value, 0.150_633_060_620_407_8, max_relative = 1e-10);
        assert_relative_eq!(m.argmax, 1.769_314_958_432_192, max_relative = 1e-6);
        assert!(!m.at_boundary);
        assert!(m.value >= k_down(1.0, 0.5, Some(1.0)).unwrap());
        let m = k_down_sup(2.0, 0.15).unwrap();
        assert_relative_eq!(m.value, 0.633_453_607_024_408_8, max_relative = 1e-10);
    }

    #[test]
    fn single_precision_constants() {
        let k: f32 = k_up(1.0_f32, 0.5_f32).unwrap();
        assert!((k - 2.0).abs() < 1e-4);
        let cc = crate::Constants32::compute(1.0, 0.5, 1.0).unwrap();
        assert!((cc.k_down_sup.unwrap() - 0.150_633).abs() < 1e-4);
    }

    #[test]
    fn slowly_varying_limits() {
        assert_eq!(SlowlyVarying::Constant { c: 0.5 }.limsup(), 0.5);
        assert_eq!(SlowlyVarying::LogPower { delta: 1.0 }.liminf(), 0.0);
        assert_eq!(SlowlyVarying::PowerOfLog { c: 2.0, rho: 0.3 }.limsup(), f64::INFINITY);
        assert_eq!(SlowlyVarying::PowerOfLog { c: 2.0, rho: -0.3 }.limsup(), 0.0);
        assert_eq!(SlowlyVarying::PowerOfLog { c: 2.0, rho: 0.0 }.limsup(), 2.0);
        let l = SlowlyVarying::LogPower { delta: 1.0 };
        assert_relative_eq!(l.scaled(3.0).eval(50.0), 3.0 * l.eval(50.0), max_relative = 1e-14);
    }

    fn det(k: f64) -> EtaSummary {
        EtaSummary { mean: k, prob_zero: if k >= 1.0 { 0.0 } else { 1.0 } }
    }

    #[test]
    fn off_boundary_verdicts() {
        let regular = |beta, c| EdgeClass::Regular {
            beta,
            l: SlowlyVarying::Constant { c },
            envelope: Envelope::Exact,
        };
        assert_eq!(classify_phase(1.0, &regular(2.0, 2.0), det(1.0)).unwrap().verdict, Verdict::ExtinctAS);
        assert_eq!(classify_phase(1.0, &regular(0.2, 0.2), det(1.0)).unwrap().verdict, Verdict::SurvivesWP);
        assert_eq!(classify_phase(2.0, &regular(0.3, 1.0), det(1.0)).unwrap().verdict, Verdict::ExtinctAS);
        let inf = EtaSummary { mean: f64::INFINITY, prob_zero: 0.0 };
        assert_eq!(
            classify_phase(1.0, &regular(2.0, 1.0), inf).unwrap().verdict,
            Verdict::OutsideHypotheses
        );
        assert_eq!(classify_phase(1.0, &regular(0.2, 1.0), det(0.0)).unwrap().verdict, Verdict::OutsideHypotheses);
    }

    #[test]
    fn log_corrected_and_truncated_edges() {
        for g in [0.3, 1.0, 4.0] {
            let v = classify_phase(g, &EdgeClass::LogCorrected { delta: 0.5 }, det(1.0)).unwrap();
            assert_eq!(v.verdict, Verdict::SurvivesWP);
            let v = classify_phase(g, &EdgeClass::Truncated { cap: 0.9 }, det(3.0)).unwrap();
            assert_eq!(v.verdict, Verdict::ExtinctAS);
        }
    }

    #[test]
    fn boundary_cases() {
        // γ = 1, β = 1/2: 2 K↑ c = 4c, K↓sup c ≈ 0.1506 c, 1/E(η) = 1
        let at = |c| EdgeClass::Regular { beta: 0.5, l: SlowlyVarying::Constant { c }, envelope: Envelope::Exact };
        assert_eq!(classify_phase(1.0, &at(0.2), det(1.0)).unwrap().verdict, Verdict::ExtinctAS);
        assert_eq!(classify_phase(1.0, &at(7.0), det(1.0)).unwrap().verdict, Verdict::SurvivesWP);
        assert_eq!(classify_phase(1.0, &at(1.0), det(1.0)).unwrap().verdict, Verdict::BoundaryInconclusive);
        // infinite mean: survival side uses 1/E(η) = 0
        let inf = EtaSummary { mean: f64::INFINITY, prob_zero: 0.5 };
        assert_eq!(classify_phase(1.0, &at(1.0), inf).unwrap().verdict, Verdict::SurvivesWP);
        // LogPower at the boundary: limsup = 0 gives extinction
        let lp = EdgeClass::Regular { beta: 1.0, l: SlowlyVarying::LogPower { delta: 1.0 }, envelope: Envelope::Exact };
        assert_eq!(classify_phase(0.5, &lp, det(1.0)).unwrap().verdict, Verdict::ExtinctAS);
        // one-sided envelopes
        let upper = EdgeClass::Regular { beta: 0.2, l: SlowlyVarying::Constant { c: 1.0 }, envelope: Envelope::Upper };
        assert_eq!(classify_phase(1.0, &upper, det(1.0)).unwrap().verdict, Verdict::OutsideHypotheses);
        let lower = EdgeClass::Regular { beta: 0.2, l: SlowlyVarying::Constant { c: 1.0 }, envelope: Envelope::Lower };
        assert_eq!(classify_phase(1.0, &lower, det(1.0)).unwrap().verdict, Verdict::SurvivesWP);
    }
}
