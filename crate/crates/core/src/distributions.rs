//! Laws of the model's random ingredients.
//!
//! * [`LifetimeLaw`]: discrete Weibull lifetimes, `P(Ξ ≥ k | π = p) = p^{k^γ}`.
//! * [`EdgeLaw`]: the law of the survival parameter `π`, described by its
//!   behaviour near `u = 1`.
//! * [`EtaLaw`]: initial occupation numbers.
//! * [`sample_stable_subordinator`]: the time-one law of the one-sided
//!   `γ`-stable subordinator, `E e^{−λ S₁} = e^{−λ^γ}`.
//!
//! Samplers take their uniform (and exponential) variates as arguments; no
//! sampler owns an RNG.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::asymptotics::{EdgeClass, Envelope, EtaSummary, SlowlyVarying};
use crate::error::domain;
use crate::quad::{integrate, Integral};
use crate::special::{beta_reg, beta_reg_inv, ln_beta_stable, ln_gamma_ratio};
use crate::{Error, Result};

/// Absolute accuracy target for quadrature-backed fractional moments.
pub const MOMENT_TOL: f64 = 1e-10;

/// Discrete Weibull lifetime law with shape `γ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename = "discrete_weibull")]
pub struct LifetimeLaw {
    pub gamma: f64,
}

/// A lifetime draw, clamped at a horizon cap.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Lifetime {
    pub steps: u64,
    /// The untruncated draw exceeded the cap.
    pub censored: bool,
}

impl LifetimeLaw {
    pub fn new(gamma: f64) -> Result<Self> {
        let law = Self { gamma };
        law.validate()?;
        Ok(law)
    }

    pub fn validate(&self) -> Result<()> {
        if self.gamma > 0.0 && self.gamma.is_finite() {
            Ok(())
        } else {
            domain(format!("lifetime shape must be positive, got {}", self.gamma))
        }
    }

    /// `P(Ξ ≥ k | π = p) = p^{k^γ}`, evaluated as `exp(k^γ ln p)`.
    pub fn survival(&self, p: f64, k: u64) -> Result<f64> {
        check_open_unit("p", p)?;
        if k == 0 {
            return Ok(1.0);
        }
        Ok(((k as f64).powf(self.gamma) * p.ln()).exp())
    }

    /// Inverse-transform draw `Ξ = ⌊(ln u / ln p)^{1/γ}⌋`, clamped at `cap`.
    pub fn sample(&self, p: f64, u: f64, cap: u64) -> Result<Lifetime> {
        check_open_unit("p", p)?;
        check_open_unit("u", u)?;
        Ok(self.sample_log_p(p.ln(), u, cap))
    }

    /// Same as [`sample`](Self::sample) with `ln p` supplied, so that `p`
    /// within an ulp of 1 keeps its precision.
    #[inline]
    pub fn sample_log_p(&self, log_p: f64, u: f64, cap: u64) -> Lifetime {
        if log_p >= 0.0 {
            return Lifetime { steps: cap, censored: true };
        }
        let x = (u.ln() / log_p).powf(1.0 / self.gamma);
        if x.is_finite() && x < cap as f64 {
            Lifetime { steps: x.floor() as u64, censored: false }
        } else {
            Lifetime { steps: cap, censored: true }
        }
    }
}

fn check_open_unit(name: &str, x: f64) -> Result<()> {
    if x > 0.0 && x < 1.0 {
        Ok(())
    } else {
        domain(format!("{name} must lie in (0, 1), got {x}"))
    }
}

/// Law of the survival parameter `π` on `(0, 1)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum EdgeLaw {
    /// Beta(a, b): edge exponent `β = b`, `L ≡ 1/B(a, b)`.
    Beta { a: f64, b: f64 },
    /// Density `δ (1−u)^{−1} (1 + ln 1/(1−u))^{−(1+δ)}`.
    LogCorrected { delta: f64 },
    /// `base` conditioned on `π ≤ cap`.
    TruncatedSupport { base: Box<EdgeLaw>, cap: f64 },
    /// Piecewise-linear density through `(u, density)` points. The edge
    /// exponent and slowly varying factor are declared, not estimated.
    Tabulated {
        points: Vec<(f64, f64)>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        beta: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        l: Option<SlowlyVarying>,
    },
}

impl EdgeLaw {
    pub fn beta(a: f64, b: f64) -> Self {
        EdgeLaw::Beta { a, b }
    }

    pub fn truncated(base: EdgeLaw, cap: f64) -> Self {
        EdgeLaw::TruncatedSupport { base: Box::new(base), cap }
    }

    /// A tabulated law rescaled so that its trapezoidal integral is one.
    pub fn tabulated_normalized(
        points: Vec<(f64, f64)>,
        beta: Option<f64>,
        l: Option<SlowlyVarying>,
    ) -> Result<Self> {
        let mass = trapezoid_mass(&points);
        if !(mass > 0.0 && mass.is_finite()) {
            return domain("tabulated density has no mass");
        }
        let points = points.into_iter().map(|(u, d)| (u, d / mass)).collect();
        let law = EdgeLaw::Tabulated { points, beta, l };
        law.compile()?;
        Ok(law)
    }

    /// Validate and precompute the sampler/moment tables.
    pub fn compile(&self) -> Result<CompiledEdge> {
        CompiledEdge::new(self)
    }

    /// Edge exponent `β`. `Some(0.0)` for the log-corrected family (its
    /// degenerate regime flag is [`is_log_corrected`](Self::is_log_corrected)),
    /// `None` for truncated support and undeclared tabulations.
    pub fn beta_exponent(&self) -> Option<f64> {
        match self {
            EdgeLaw::Beta { b, .. } => Some(*b),
            EdgeLaw::LogCorrected { .. } => Some(0.0),
            EdgeLaw::TruncatedSupport { .. } => None,
            EdgeLaw::Tabulated { beta, .. } => *beta,
        }
    }

    pub fn is_log_corrected(&self) -> bool {
        matches!(self, EdgeLaw::LogCorrected { .. })
    }

    /// Slowly varying factor of the edge profile.
    pub fn l_spec(&self) -> Option<SlowlyVarying> {
        match self {
            EdgeLaw::Beta { a, b } => Some(SlowlyVarying::Constant { c: (-ln_beta_stable(*a, *b)).exp() }),
            EdgeLaw::LogCorrected { delta } => Some(SlowlyVarying::LogPower { delta: *delta }),
            EdgeLaw::TruncatedSupport { .. } => None,
            EdgeLaw::Tabulated { l, .. } => *l,
        }
    }

    /// `(β, L)` for the ratio normalization; errors when undeclared.
    pub fn profile(&self) -> Result<(f64, SlowlyVarying)> {
        match (self.beta_exponent(), self.l_spec()) {
            (Some(b), Some(l)) if b > 0.0 => Ok((b, l)),
            _ => Err(Error::Config(format!("edge law has no declared (beta, L) profile: {self}"))),
        }
    }

    /// Right-edge description used by the phase classifier.
    pub fn edge_class(&self) -> Result<EdgeClass> {
        match self {
            EdgeLaw::LogCorrected { delta } => Ok(EdgeClass::LogCorrected { delta: *delta }),
            EdgeLaw::TruncatedSupport { cap, .. } => Ok(EdgeClass::Truncated { cap: *cap }),
            EdgeLaw::Tabulated { points, .. } if points.last().is_some_and(|&(u, _)| u < 1.0) => {
                let cap = points.last().map(|&(u, _)| u).unwrap_or(0.0);
                Ok(EdgeClass::Truncated { cap })
            }
            _ => {
                let (beta, l) = self.profile()?;
                Ok(EdgeClass::Regular { beta, l, envelope: Envelope::Exact })
            }
        }
    }
}

impl fmt::Display for EdgeLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EdgeLaw::Beta { a, b } => write!(f, "beta:{a},{b}"),
            EdgeLaw::LogCorrected { delta } => write!(f, "logcorr:{delta}"),
            EdgeLaw::TruncatedSupport { base, cap } => write!(f, "trunc:{cap}:{base}"),
            EdgeLaw::Tabulated { points, .. } => write!(f, "tabulated[{} points]", points.len()),
        }
    }
}

impl FromStr for EdgeLaw {
    type Err = Error;

    /// `beta:A,B`, `logcorr:D`, `trunc:CAP:<edge>`, or an inline JSON object.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.starts_with('{') {
            let law: EdgeLaw = serde_json::from_str(s)?;
            law.compile()?;
            return Ok(law);
        }
        let bad = || Error::Config(format!("cannot parse edge law '{s}'"));
        let (kind, rest) = s.split_once(':').ok_or_else(bad)?;
        let law = match kind {
            "beta" => {
                let (a, b) = rest.split_once(',').ok_or_else(bad)?;
                EdgeLaw::Beta { a: a.trim().parse().map_err(|_| bad())?, b: b.trim().parse().map_err(|_| bad())? }
            }
            "logcorr" => EdgeLaw::LogCorrected { delta: rest.trim().parse().map_err(|_| bad())? },
            "trunc" => {
                let (cap, base) = rest.split_once(':').ok_or_else(bad)?;
                EdgeLaw::truncated(base.parse()?, cap.trim().parse().map_err(|_| bad())?)
            }
            _ => return Err(bad()),
        };
        law.compile()?;
        Ok(law)
    }
}

fn trapezoid_mass(points: &[(f64, f64)]) -> f64 {
    points.windows(2).map(|w| 0.5 * (w[1].0 - w[0].0) * (w[0].1 + w[1].1)).sum()
}

/// `x1^q − x0^q` for `0 ≤ x0 ≤ x1`, accurate when `x1 ≈ x0`.
fn pow_diff(x1: f64, x0: f64, q: f64) -> f64 {
    if x0 <= 0.0 {
        return x1.powf(q);
    }
    x0.powf(q) * (q * ((x1 - x0) / x0).ln_1p()).exp_m1()
}

/// `∫_{u0}^{u1} v^s d(v) dv` for `d` linear from `d0` to `d1`.
fn linear_segment_moment(s: f64, u0: f64, u1: f64, d0: f64, d1: f64) -> Result<f64> {
    let h = u1 - u0;
    if u0 <= 0.0 || h > 1e-3 * u0 {
        let slope = (d1 - d0) / h;
        let a_term = pow_diff(u1, u0, s + 1.0) / (s + 1.0);
        let b_term = pow_diff(u1, u0, s + 2.0) / (s + 2.0) - u0 * a_term;
        return Ok(d0 * a_term + slope * b_term);
    }
    // narrow segment: the closed form cancels, so integrate v^s / u1^s
    let ln_u1 = u1.ln();
    let kappa = (s * h / u0).max(1.0);
    let tol = 1e-13 * d0.max(d1) / kappa;
    let r = integrate(|x| (s * ((u0 + x * h).ln() - ln_u1)).exp() * (d0 + (d1 - d0) * x), 0.0, 1.0, tol)?;
    Ok((s * ln_u1).exp() * h * r.value)
}

/// An [`EdgeLaw`] with its validation done and lookup tables built.
#[derive(Debug, Clone)]
pub enum CompiledEdge {
    Beta { a: f64, b: f64, ln_b: f64 },
    LogCorrected { delta: f64 },
    Truncated { base: Box<CompiledEdge>, cap: f64, base_mass: f64 },
    Tabulated { u: Vec<f64>, d: Vec<f64>, cum: Vec<f64> },
}

impl CompiledEdge {
    fn new(law: &EdgeLaw) -> Result<Self> {
        match law {
            EdgeLaw::Beta { a, b } => {
                if !(*a > 0.0 && *b > 0.0 && a.is_finite() && b.is_finite()) {
                    return domain(format!("beta parameters must be positive, got ({a}, {b})"));
                }
                Ok(CompiledEdge::Beta { a: *a, b: *b, ln_b: ln_beta_stable(*a, *b) })
            }
            EdgeLaw::LogCorrected { delta } => {
                if !(*delta > 0.0 && delta.is_finite()) {
                    return domain(format!("delta must be positive, got {delta}"));
                }
                Ok(CompiledEdge::LogCorrected { delta: *delta })
            }
            EdgeLaw::TruncatedSupport { base, cap } => {
                if !(*cap > 0.0 && *cap < 1.0) {
                    return domain(format!("truncation cap must lie in (0, 1), got {cap}"));
                }
                let base = CompiledEdge::new(base)?;
                let base_mass = base.cdf(*cap);
                if !(base_mass > 0.0) {
                    return domain("base law has no mass below the cap");
                }
                Ok(CompiledEdge::Truncated { base: Box::new(base), cap: *cap, base_mass })
            }
            EdgeLaw::Tabulated { points, beta, l } => {
                if points.len() < 2 {
                    return domain("tabulated density needs at least two points");
                }
                for w in points.windows(2) {
                    if !(w[1].0 > w[0].0) {
                        return domain("tabulated abscissae must be strictly increasing");
                    }
                }
                if points.iter().any(|&(u, d)| !(0.0..=1.0).contains(&u) || !(d >= 0.0) || !d.is_finite()) {
                    return domain("tabulated points need u in [0, 1] and finite density >= 0");
                }
                let mass = trapezoid_mass(points);
                if (mass - 1.0).abs() > 1e-8 {
                    return domain(format!("tabulated density integrates to {mass}, not 1"));
                }
                if let Some(b) = beta {
                    if !(*b > 0.0) {
                        return domain("declared beta must be positive");
                    }
                }
                if let Some(l) = l {
                    l.validate()?;
                }
                let u: Vec<f64> = points.iter().map(|p| p.0).collect();
                let d: Vec<f64> = points.iter().map(|p| p.1 / mass).collect();
                let mut cum = Vec::with_capacity(u.len());
                let mut acc = 0.0;
                cum.push(0.0);
                for i in 1..u.len() {
                    acc += 0.5 * (u[i] - u[i - 1]) * (d[i] + d[i - 1]);
                    cum.push(acc);
                }
                Ok(CompiledEdge::Tabulated { u, d, cum })
            }
        }
    }

    /// Density of `π` at `v`.
    pub fn density(&self, v: f64) -> f64 {
        if !(v > 0.0 && v < 1.0) {
            return 0.0;
        }
        match self {
            CompiledEdge::Beta { a, b, ln_b } => ((a - 1.0) * v.ln() + (b - 1.0) * (-v).ln_1p() - ln_b).exp(),
            CompiledEdge::LogCorrected { delta } => {
                let h = 1.0 - v;
                delta / h * (1.0 - h.ln()).powf(-(1.0 + delta))
            }
            CompiledEdge::Truncated { base, cap, base_mass } => {
                if v <= *cap {
                    base.density(v) / base_mass
                } else {
                    0.0
                }
            }
            CompiledEdge::Tabulated { u, d, .. } => {
                if v < u[0] || v > u[u.len() - 1] {
                    return 0.0;
                }
                let i = u.partition_point(|&x| x <= v).clamp(1, u.len() - 1);
                let t = (v - u[i - 1]) / (u[i] - u[i - 1]);
                d[i - 1] + t * (d[i] - d[i - 1])
            }
        }
    }

    /// `P(π ≤ v)`.
    pub fn cdf(&self, v: f64) -> f64 {
        if v <= 0.0 {
            return 0.0;
        }
        if v >= 1.0 {
            return 1.0;
        }
        match self {
            CompiledEdge::Beta { a, b, .. } => {
                if *a == 1.0 {
                    -(b * (-v).ln_1p()).exp_m1()
                } else {
                    beta_reg(*a, *b, v)
                }
            }
            CompiledEdge::LogCorrected { delta } => 1.0 - (1.0 - (-v).ln_1p()).powf(-delta),
            CompiledEdge::Truncated { base, cap, base_mass } => (base.cdf(v.min(*cap)) / base_mass).min(1.0),
            CompiledEdge::Tabulated { u, d, cum } => {
                if v <= u[0] {
                    return 0.0;
                }
                if v >= u[u.len() - 1] {
                    return 1.0;
                }
                let i = u.partition_point(|&x| x <= v).clamp(1, u.len() - 1);
                let x = v - u[i - 1];
                let slope = (d[i] - d[i - 1]) / (u[i] - u[i - 1]);
                cum[i - 1] + d[i - 1] * x + 0.5 * slope * x * x
            }
        }
    }

    /// Inverse-CDF draw, returned as `1 − π` to keep precision near the edge.
    pub fn sample_complement(&self, w: f64) -> f64 {
        match self {
            CompiledEdge::Beta { a, b, .. } => {
                if *a == 1.0 {
                    // F(v) = 1 − (1−v)^b
                    (1.0 - w).powf(1.0 / b)
                } else {
                    // 1 − π ~ Beta(b, a)
                    beta_reg_inv(*b, *a, 1.0 - w)
                }
            }
            CompiledEdge::LogCorrected { delta } => (1.0 - (1.0 - w).powf(-1.0 / delta)).exp(),
            CompiledEdge::Truncated { base, base_mass, .. } => base.sample_complement(w * base_mass),
            CompiledEdge::Tabulated { .. } => 1.0 - self.tabulated_quantile(w),
        }
    }

    fn tabulated_quantile(&self, w: f64) -> f64 {
        let CompiledEdge::Tabulated { u, d, cum } = self else { unreachable!() };
        let total = cum[cum.len() - 1];
        let target = w * total;
        let i = cum.partition_point(|&c| c < target).clamp(1, u.len() - 1);
        let r = target - cum[i - 1];
        let slope = (d[i] - d[i - 1]) / (u[i] - u[i - 1]);
        let d0 = d[i - 1];
        let disc = (d0 * d0 + 2.0 * slope * r).max(0.0);
        let denom = d0 + disc.sqrt();
        let x = if denom > 0.0 { 2.0 * r / denom } else { 0.0 };
        (u[i - 1] + x).clamp(u[i - 1], u[i])
    }

    /// `∫₀^{upper} v^s f(v) dv` for the untruncated law.
    fn partial_moment(&self, s: f64, upper: f64) -> Result<f64> {
        let upper = upper.min(1.0);
        match self {
            CompiledEdge::Beta { a, b, ln_b } => {
                let full = (ln_gamma_ratio(a + s, *b) - ln_gamma_ratio(*a, *b)).exp();
                if upper >= 1.0 {
                    return Ok(full);
                }
                let _ = ln_b;
                Ok(full * beta_reg(a + s, *b, upper))
            }
            CompiledEdge::LogCorrected { delta } => log_corrected_moment(*delta, s, upper),
            CompiledEdge::Truncated { base, cap, base_mass } => {
                Ok(base.partial_moment(s, upper.min(*cap))? / base_mass)
            }
            CompiledEdge::Tabulated { u, d, cum } => {
                let total = cum[cum.len() - 1];
                let mut acc = 0.0;
                for i in 1..u.len() {
                    let (u0, u1) = (u[i - 1], u[i].min(upper));
                    if u1 <= u0 {
                        break;
                    }
                    let slope = (d[i] - d[i - 1]) / (u[i] - u[i - 1]);
                    let d1 = d[i - 1] + slope * (u1 - u0);
                    acc += linear_segment_moment(s, u0, u1, d[i - 1], d1)?;
                }
                Ok(acc / total)
            }
        }
    }

    /// Fractional moment `M(s) = E[π^s]`.
    ///
    /// Closed form for Beta (and Beta-based truncations) and tabulated laws;
    /// adaptive quadrature on a bounded integrand for the log-corrected family.
    pub fn moment(&self, s: f64) -> Result<f64> {
        if !(s >= 0.0) {
            return domain(format!("moment order must be nonnegative, got {s}"));
        }
        if s == 0.0 {
            return Ok(1.0);
        }
        Ok(self.partial_moment(s, 1.0)?.clamp(0.0, 1.0))
    }

    /// `M(s)` by adaptive quadrature of the density, independent of the
    /// closed forms. Endpoint singularities `(1−v)^{b−1}` and `v^{a−1}` are
    /// removed by the substitutions `1 − v = h^{1/b}` and `v = h^{1/a}`.
    pub fn moment_quadrature(&self, s: f64) -> Result<Integral> {
        self.partial_moment_quadrature(s, 1.0)
    }

    fn partial_moment_quadrature(&self, s: f64, upper: f64) -> Result<Integral> {
        let upper = upper.min(1.0);
        let tol = MOMENT_TOL * 0.25;
        match self {
            CompiledEdge::Beta { a, b, ln_b } => {
                let norm = (-ln_b).exp();
                let mid = upper.min(0.5);
                // v ∈ [0, mid], v = h^{1/a}
                let left = integrate(
                    |h| {
                        if h <= 0.0 {
                            return 0.0;
                        }
                        let v = h.powf(1.0 / a);
                        (s / a * h.ln() + (b - 1.0) * (-v).ln_1p()).exp()
                    },
                    0.0,
                    mid.powf(*a),
                    tol,
                )?;
                let mut value = left.value / a;
                let mut error = left.error / a;
                if upper > 0.5 {
                    // w = 1 − v ∈ [1 − upper, 1/2], w = h^{1/b}
                    let right = integrate(
                        |h| {
                            if h <= 0.0 {
                                return if upper >= 1.0 { 1.0 } else { 0.0 };
                            }
                            let w = h.powf(1.0 / b);
                            ((s + a - 1.0) * (-w).ln_1p()).exp()
                        },
                        (1.0 - upper).powf(*b),
                        0.5f64.powf(*b),
                        tol,
                    )?;
                    value += right.value / b;
                    error += right.error / b;
                }
                Ok(Integral { value: value * norm, error: error * norm })
            }
            CompiledEdge::LogCorrected { delta } => {
                let v = log_corrected_moment(*delta, s, upper)?;
                Ok(Integral { value: v, error: MOMENT_TOL })
            }
            CompiledEdge::Truncated { base, cap, base_mass } => {
                let r = base.partial_moment_quadrature(s, upper.min(*cap))?;
                Ok(Integral { value: r.value / base_mass, error: r.error / base_mass })
            }
            CompiledEdge::Tabulated { u, .. } => {
                let mut value = 0.0;
                let mut error = 0.0;
                for i in 1..u.len() {
                    let (u0, u1) = (u[i - 1], u[i].min(upper));
                    if u1 <= u0 {
                        break;
                    }
                    let r = integrate(|v| v.powf(s) * self.density(v), u0, u1, tol / u.len() as f64)?;
                    value += r.value;
                    error += r.error;
                }
                Ok(Integral { value, error })
            }
        }
    }
}

/// `∫₀^{upper} v^s g(v) dv` for the log-corrected density.
///
/// With `t = 1 + ln 1/(1−v)` and `w = t^{−δ}` the measure `g(v) dv` becomes
/// `dw` on `(0, 1]` and `v = 1 − e^{1 − w^{−1/δ}}`, so the integrand is
/// bounded by one.
fn log_corrected_moment(delta: f64, s: f64, upper: f64) -> Result<f64> {
    let w_min = if upper >= 1.0 { 0.0 } else { (1.0 - (-upper).ln_1p()).powf(-delta) };
    let f = |w: f64| {
        if w <= 0.0 {
            return 1.0;
        }
        let e = (1.0 - w.powf(-1.0 / delta)).exp();
        (s * (-e).ln_1p()).exp()
    };
    // the integrand steps from 1 to 0 near w ≈ (1 + ln s)^{−δ}; split there
    let knee = (1.0 + s.max(1.0).ln()).powf(-delta).clamp(w_min, 1.0);
    let a = integrate(f, w_min, knee, MOMENT_TOL * 0.5)?;
    let b = integrate(f, knee, 1.0, MOMENT_TOL * 0.5)?;
    Ok(a.value + b.value)
}

/// `M(s) = E[π^s]` for an edge law.
pub fn fractional_moment(edge: &EdgeLaw, s: f64) -> Result<f64> {
    edge.compile()?.moment(s)
}

/// Inverse-transform draw of `π` from a uniform variate `u ∈ (0, 1)`.
pub fn sample_edge(edge: &EdgeLaw, u: f64) -> Result<f64> {
    check_open_unit("u", u)?;
    Ok(1.0 - edge.compile()?.sample_complement(u))
}

/// `P(Ξ ≥ k | π = p)`.
pub fn dw_survival(law: &LifetimeLaw, p: f64, k: u64) -> Result<f64> {
    law.validate()?;
    law.survival(p, k)
}

/// Lifetime draw with censoring at `cap`.
pub fn sample_lifetime(law: &LifetimeLaw, p: f64, u: f64, cap: u64) -> Result<Lifetime> {
    law.validate()?;
    law.sample(p, u, cap)
}

/// Law of the initial number of sleeping particles per site.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum EtaLaw {
    Deterministic { k: u32 },
    Poisson { lambda: f64 },
    /// `P(η = k) = q (1 − q)^k`.
    Geometric { q: f64 },
}

impl EtaLaw {
    pub fn validate(&self) -> Result<()> {
        match *self {
            EtaLaw::Deterministic { .. } => Ok(()),
            EtaLaw::Poisson { lambda } if lambda > 0.0 && lambda <= 500.0 => Ok(()),
            EtaLaw::Geometric { q } if q > 0.0 && q < 1.0 => Ok(()),
            _ => domain(format!("invalid occupation law {self:?}")),
        }
    }

    pub fn mean(&self) -> f64 {
        match *self {
            EtaLaw::Deterministic { k } => k as f64,
            EtaLaw::Poisson { lambda } => lambda,
            EtaLaw::Geometric { q } => (1.0 - q) / q,
        }
    }

    pub fn prob_zero(&self) -> f64 {
        match *self {
            EtaLaw::Deterministic { k } => {
                if k == 0 {
                    1.0
                } else {
                    0.0
                }
            }
            EtaLaw::Poisson { lambda } => (-lambda).exp(),
            EtaLaw::Geometric { q } => q,
        }
    }

    pub fn summary(&self) -> EtaSummary {
        EtaSummary { mean: self.mean(), prob_zero: self.prob_zero() }
    }

    /// Inverse-transform draw from `u ∈ (0, 1)`.
    pub fn sample(&self, u: f64) -> u32 {
        match *self {
            EtaLaw::Deterministic { k } => k,
            EtaLaw::Poisson { lambda } => {
                let mut p = (-lambda).exp();
                let mut cdf = p;
                let mut k = 0u32;
                while u > cdf && k < 10_000 {
                    k += 1;
                    p *= lambda / k as f64;
                    cdf += p;
                    if p == 0.0 && cdf < u {
                        break;
                    }
                }
                k
            }
            EtaLaw::Geometric { q } => {
                let x = u.ln() / (-q).ln_1p();
                if x.is_finite() {
                    x.floor().min(u32::MAX as f64) as u32
                } else {
                    0
                }
            }
        }
    }
}

impl FromStr for EtaLaw {
    type Err = Error;

    /// `det:K`, `poisson:L`, `geom:Q`, or an inline JSON object.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.starts_with('{') {
            let law: EtaLaw = serde_json::from_str(s)?;
            law.validate()?;
            return Ok(law);
        }
        let bad = || Error::Config(format!("cannot parse occupation law '{s}'"));
        let (kind, v) = s.split_once(':').ok_or_else(bad)?;
        let law = match kind {
            "det" => EtaLaw::Deterministic { k: v.trim().parse().map_err(|_| bad())? },
            "poisson" => EtaLaw::Poisson { lambda: v.trim().parse().map_err(|_| bad())? },
            "geom" => EtaLaw::Geometric { q: v.trim().parse().map_err(|_| bad())? },
            _ => return Err(bad()),
        };
        law.validate()?;
        Ok(law)
    }
}

impl fmt::Display for EtaLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EtaLaw::Deterministic { k } => write!(f, "det:{k}"),
            EtaLaw::Poisson { lambda } => write!(f, "poisson:{lambda}"),
            EtaLaw::Geometric { q } => write!(f, "geom:{q}"),
        }
    }
}

/// Draw `S₁` of the one-sided `γ`-stable subordinator normalized by
/// `E e^{−λ S₁} = e^{−λ^γ}`, from a uniform `u ∈ (0, 1)` and an
/// exponential(1) `e` (Kanter's representation).
pub fn sample_stable_subordinator(gamma: f64, u: f64, e: f64) -> Result<f64> {
    if !(gamma > 0.0 && gamma < 1.0) {
        return domain(format!("stable index must lie in (0, 1), got {gamma}"));
    }
    check_open_unit("u", u)?;
    if !(e > 0.0) {
        return domain("exponential variate must be positive");
    }
    let x = std::f64::consts::PI * u;
    let one_minus = 1.0 - gamma;
    let ln_a = (gamma * (gamma * x).sin().ln() + one_minus * (one_minus * x).sin().ln() - x.sin().ln()) / one_minus;
    Ok((one_minus / gamma * (ln_a - e.ln())).exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn survival_examples() {
        let l2 = LifetimeLaw::new(2.0).unwrap();
        assert_relative_eq!(l2.survival(0.5, 2).unwrap(), 0.0625, max_relative = 1e-15);
        assert_eq!(LifetimeLaw::new(1.0).unwrap().survival(0.9, 0).unwrap(), 1.0);
        assert_relative_eq!(LifetimeLaw::new(0.5).unwrap().survival(0.25, 4).unwrap(), 0.0625, max_relative = 1e-15);
        assert!(l2.survival(1.0, 3).is_err());
        assert!(l2.survival(0.0, 3).is_err());
        assert!(LifetimeLaw::new(0.0).is_err());
    }

    #[test]
    fn survival_nonincreasing() {
        let law = LifetimeLaw::new(0.7).unwrap();
        let mut prev = 1.0;
        for k in 0..200 {
            let s = law.survival(0.97, k).unwrap();
            assert!(s <= prev);
            prev = s;
        }
    }

    #[test]
    fn lifetime_sampler_examples() {
        let g1 = LifetimeLaw::new(1.0).unwrap();
        assert_eq!(g1.sample(0.5, 0.3, 1000).unwrap().steps, 1);
        assert_eq!(g1.sample(0.5, 0.6, 1000).unwrap().steps, 0);
        assert_eq!(LifetimeLaw::new(2.0).unwrap().sample(0.5, 0.05, 1000).unwrap().steps, 2);
        let censored = g1.sample(1.0 - 1e-12, 0.5, 100).unwrap();
        assert_eq!(censored, Lifetime { steps: 100, censored: true });
    }

    #[test]
    fn beta_moments() {
        let uni = EdgeLaw::beta(1.0, 1.0);
        assert_relative_eq!(fractional_moment(&uni, 1.0).unwrap(), 0.5, max_relative = 1e-14);
        assert_eq!(fractional_moment(&uni, 0.0).unwrap(), 1.0);
        let b = EdgeLaw::beta(1.0, 0.5);
        assert_relative_eq!(fractional_moment(&b, 1.0).unwrap(), 2.0 / 3.0, max_relative = 1e-14);
        let q = b.compile().unwrap().moment_quadrature(1.0).unwrap();
        assert!((q.value - 2.0 / 3.0).abs() < 1e-10, "{q:?}");
    }

    #[test]
    fn closed_form_and_quadrature_agree() {
        for law in [EdgeLaw::beta(1.0, 0.5), EdgeLaw::beta(2.0, 0.25), EdgeLaw::beta(0.5, 3.0), EdgeLaw::beta(1.0, 0.2)] {
            let c = law.compile().unwrap();
            for s in [0.5, 1.0, 3.7, 10.0] {
                let closed = c.moment(s).unwrap();
                let quad = c.moment_quadrature(s).unwrap().value;
                assert!((closed - quad).abs() < 1e-8, "{law} s={s}: {closed} vs {quad}");
            }
        }
    }

    #[test]
    fn truncated_moments_match_quadrature() {
        let law = EdgeLaw::truncated(EdgeLaw::beta(2.0, 0.5), 0.7);
        let c = law.compile().unwrap();
        for s in [0.5, 2.0, 25.0] {
            let closed = c.moment(s).unwrap();
            let quad = c.moment_quadrature(s).unwrap().value;
            assert!((closed - quad).abs() < 1e-9, "s={s}: {closed} vs {quad}");
        }
        // uniform on [0, 1/2]: E[π] = 1/4
        let u = EdgeLaw::truncated(EdgeLaw::beta(1.0, 1.0), 0.5);
        assert_relative_eq!(fractional_moment(&u, 1.0).unwrap(), 0.25, max_relative = 1e-12);
    }

    #[test]
    fn log_corrected_moment_and_normalization() {
        let c = EdgeLaw::LogCorrected { delta: 1.0 }.compile().unwrap();
        assert!((c.moment(0.0).unwrap() - 1.0).abs() < 1e-12);
        // E[π] by direct quadrature of the density in t-space
        let direct = crate::quad::integrate_to_infinity(|t| (1.0 - (1.0 - t).exp()) * t.powi(-2), 1.0, 1e-12)
            .unwrap()
            .value;
        assert!((c.moment(1.0).unwrap() - direct).abs() < 1e-9);
        // M(s) decays like (1 + ln s)^{-δ}
        let m = c.moment(1e12).unwrap();
        assert!(m > 0.02 && m < 0.05, "{m}");
        assert!((c.cdf(0.999_999) - (1.0 - (1.0 + 1e6f64.ln()).powi(-1))).abs() < 1e-9);
    }

    #[test]
    fn edge_sampler_examples() {
        let v = sample_edge(&EdgeLaw::LogCorrected { delta: 1.0 }, 0.5).unwrap();
        assert_relative_eq!(v, 1.0 - (-1.0f64).exp(), max_relative = 1e-14);
        assert_relative_eq!(sample_edge(&EdgeLaw::beta(1.0, 1.0), 0.25).unwrap(), 0.25, max_relative = 1e-14);
        let t = EdgeLaw::truncated(EdgeLaw::beta(1.0, 1.0), 0.5);
        assert_relative_eq!(sample_edge(&t, 0.5).unwrap(), 0.25, max_relative = 1e-14);
        // general Beta inverts its own CDF
        let c = EdgeLaw::beta(2.0, 3.0).compile().unwrap();
        for w in [0.01, 0.3, 0.77, 0.999] {
            let v = 1.0 - c.sample_complement(w);
            assert!((c.cdf(v) - w).abs() < 1e-12);
        }
    }

    #[test]
    fn tabulated_law() {
        // triangular density 2u on [0, 1]
        let law = EdgeLaw::Tabulated { points: vec![(0.0, 0.0), (1.0, 2.0)], beta: Some(1.0), l: None };
        let c = law.compile().unwrap();
        assert_relative_eq!(c.moment(1.0).unwrap(), 2.0 / 3.0, max_relative = 1e-13);
        assert_relative_eq!(c.cdf(0.5), 0.25, max_relative = 1e-14);
        assert_relative_eq!(1.0 - c.sample_complement(0.25), 0.5, max_relative = 1e-12);
        assert!((c.moment_quadrature(3.0).unwrap().value - 0.4).abs() < 1e-10);
        let unnormalized = EdgeLaw::Tabulated { points: vec![(0.0, 1.0), (1.0, 1.5)], beta: None, l: None };
        assert!(unnormalized.compile().is_err());
        let fixed = EdgeLaw::tabulated_normalized(vec![(0.0, 1.0), (1.0, 1.5)], None, None).unwrap();
        assert!(fixed.compile().is_ok());
    }

    #[test]
    fn derived_profiles() {
        let b = EdgeLaw::beta(1.0, 0.5);
        assert_eq!(b.beta_exponent(), Some(0.5));
        match b.l_spec().unwrap() {
            SlowlyVarying::Constant { c } => assert_relative_eq!(c, 0.5, max_relative = 1e-14),
            other => panic!("{other:?}"),
        }
        let lc = EdgeLaw::LogCorrected { delta: 2.0 };
        assert!(lc.is_log_corrected());
        assert_eq!(lc.beta_exponent(), Some(0.0));
        assert!(lc.profile().is_err());
        assert!(EdgeLaw::truncated(EdgeLaw::beta(1.0, 1.0), 0.5).profile().is_err());
    }

    #[test]
    fn json_schema() {
        let law = EdgeLaw::truncated(EdgeLaw::beta(1.0, 0.5), 0.9);
        let s = serde_json::to_string(&law).unwrap();
        assert_eq!(s, r#"{"family":"truncated_support","base":{"family":"beta","a":1.0,"b":0.5},"cap":0.9}"#);
        let back: EdgeLaw = serde_json::from_str(&s).unwrap();
        assert_eq!(back, law);
        let eta: EtaLaw = serde_json::from_str(r#"{"family":"poisson","lambda":2.0}"#).unwrap();
        assert_eq!(eta, EtaLaw::Poisson { lambda: 2.0 });
        let lt = serde_json::to_string(&LifetimeLaw { gamma: 2.0 }).unwrap();
        assert_eq!(lt, r#"{"family":"discrete_weibull","gamma":2.0}"#);
    }

    #[test]
    fn short_syntax() {
        assert_eq!("beta:1,0.5".parse::<EdgeLaw>().unwrap(), EdgeLaw::beta(1.0, 0.5));
        assert_eq!(
            "trunc:0.5:beta:1,1".parse::<EdgeLaw>().unwrap(),
            EdgeLaw::truncated(EdgeLaw::beta(1.0, 1.0), 0.5)
        );
        assert_eq!("det:1".parse::<EtaLaw>().unwrap(), EtaLaw::Deterministic { k: 1 });
        assert!("beta:-1,1".parse::<EdgeLaw>().is_err());
        assert!("nope:1".parse::<EtaLaw>().is_err());
    }

    #[test]
    fn eta_laws() {
        assert_eq!(EtaLaw::Deterministic { k: 2 }.prob_zero(), 0.0);
        assert_eq!(EtaLaw::Deterministic { k: 0 }.prob_zero(), 1.0);
        let g = EtaLaw::Geometric { q: 0.25 };
        assert_relative_eq!(g.mean(), 3.0);
        assert_eq!(g.sample(0.8), 0);
        assert_eq!(g.sample(0.75), 1);
        let p = EtaLaw::Poisson { lambda: 1.0 };
        assert_eq!(p.sample(0.3), 0);
        assert_eq!(p.sample(0.5), 1);
    }

    #[test]
    fn stable_sampler_positive() {
        for &u in &[1e-9, 0.1, 0.5, 0.9, 1.0 - 1e-9] {
            for &e in &[1e-8, 0.3, 5.0] {
                let s = sample_stable_subordinator(0.5, u, e).unwrap();
                assert!(s > 0.0 && s.is_finite());
            }
        }
        // γ = 1/2: S₁ = 1 / (4 E cos²(πu/2))
        let (u, e) = (0.3, 0.7);
        let expect = 1.0 / (4.0 * e * (std::f64::consts::PI * u / 2.0).cos().powi(2));
        assert_relative_eq!(sample_stable_subordinator(0.5, u, e).unwrap(), expect, max_relative = 1e-12);
        assert!(sample_stable_subordinator(1.0, 0.5, 1.0).is_err());
    }
}
