//! Executable numerical checks of the auxiliary estimates and identities behind
//! the one-particle asymptotics.
//!
//! Each check returns a [`CheckResult`] carrying the theoretical target, the
//! observed value, the tolerance used and a pass flag. Tolerances are
//! engineering choices: the underlying statements are limits, not rates.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::asymptotics::{self, SlowlyVarying};
use crate::distributions::{sample_stable_subordinator, EdgeLaw, LifetimeLaw};
use crate::error::domain;
use crate::one_particle::{self, RatioMethod, DEFAULT_LIFETIME_CAP};
use crate::rng::{self, tag, Coin};
use crate::special::{gamma as gamma_fn, normal_sf};
use crate::walk::{self, first_passage_pmf, tau1_survival};
use crate::{Error, Result};

/// Outcome of one numerical check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub target: f64,
    pub observed: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub detail: String,
}

impl CheckResult {
    fn new(name: impl Into<String>, target: f64, observed: f64, tolerance: f64, passed: bool, detail: String) -> Self {
        Self { name: name.into(), target, observed, tolerance, passed, detail }
    }

    fn errored(name: impl Into<String>, err: &Error) -> Self {
        Self::new(name, f64::NAN, f64::NAN, f64::NAN, false, format!("error: {err}"))
    }
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {}: observed {:.6e}, target {:.6e}, tolerance {:.3e} ({})",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.observed,
            self.target,
            self.tolerance,
            self.detail
        )
    }
}

/// `√t · P(τ₁ > t) → √(2/π)`; passes at `t = 10⁴` within 1% with errors
/// strictly decreasing over `t ∈ {10², 10³, 10⁴}`.
pub fn check_tau1_tail() -> CheckResult {
    let target = (2.0 / std::f64::consts::PI).sqrt();
    let values: Vec<(u64, f64)> = [100u64, 1_000, 10_000].iter().map(|&t| (t, (t as f64).sqrt() * tau1_survival(t))).collect();
    let errors: Vec<f64> = values.iter().map(|&(_, v)| (v - target).abs()).collect();
    let last = values[2].1;
    let tolerance = 0.01 * target;
    let decreasing = errors.windows(2).all(|w| w[1] < w[0]);
    let detail = values.iter().map(|(t, v)| format!("t={t}: {v:.6}")).collect::<Vec<_>>().join(", ");
    CheckResult::new(
        "tau1_tail",
        target,
        last,
        tolerance,
        (last - target).abs() <= tolerance && decreasing,
        format!("{detail}; errors decreasing: {decreasing}"),
    )
}

/// `(1 − E e^{−a τ₁^γ}) / a^{1/(2γ)}` from the exact pmf of `τ₁`.
///
/// Terms with `a k^γ ≥ 40` are replaced by their total mass
/// `P(τ₁ > K)`, which is exact up to a relative `e^{−40}`.
pub fn laplace_ratio(gamma: f64, a: f64) -> Result<(f64, f64)> {
    if !(gamma > 1.0 && a > 0.0 && a < 1.0) {
        return domain("need gamma > 1 and a in (0, 1)");
    }
    let k_max = (40.0 / a).powf(1.0 / gamma).ceil();
    if k_max > 1e8 {
        return Err(Error::Truncation(format!("a = {a:e} needs {k_max:e} terms")));
    }
    let table = first_passage_pmf(1, k_max as u64)?;
    let head: f64 = table.iter().map(|(k, p)| p * -(-a * (k as f64).powf(gamma)).exp_m1()).sum();
    let tail = table.tail_mass();
    let scale = a.powf(1.0 / (2.0 * gamma));
    let err = tail * (-a * (table.k_max() as f64).powf(gamma)).exp();
    Ok(((head + tail) / scale, err / scale))
}

/// Tauberian limit of the Laplace ratio, extrapolated from
/// `a ∈ {10⁻⁴, 10⁻⁵, 10⁻⁶}` with one Richardson step against an `a^{1/2}`
/// correction; passes within 5% of `Γ(1 − 1/(2γ)) √(2/π)`.
pub fn check_laplace_limit(gamma: f64) -> Result<CheckResult> {
    let target = gamma_fn(1.0 - 1.0 / (2.0 * gamma)) * (2.0 / std::f64::consts::PI).sqrt();
    let grid = [1e-4, 1e-5, 1e-6];
    let mut ratios = Vec::with_capacity(3);
    for &a in &grid {
        let (r, err) = laplace_ratio(gamma, a)?;
        if err > 0.01 * target {
            return Err(Error::Truncation(format!("tail bound {err:e} exceeds 1% of the target at a = {a:e}")));
        }
        ratios.push(r);
    }
    let q = 10f64.sqrt();
    let extrapolated = (q * ratios[2] - ratios[1]) / (q - 1.0);
    let bounded = ratios.iter().all(|&r| r > 0.0 && r.is_finite());
    let monotone = ratios.windows(2).all(|w| (w[1] - target).abs() < (w[0] - target).abs());
    let tolerance = 0.05 * target;
    Ok(CheckResult::new(
        format!("laplace_limit_gamma{gamma}"),
        target,
        extrapolated,
        tolerance,
        bounded && (extrapolated - target).abs() <= tolerance,
        format!(
            "ratios at a=1e-4,1e-5,1e-6: {:.6}, {:.6}, {:.6}; monotone approach: {monotone}",
            ratios[0], ratios[1], ratios[2]
        ),
    ))
}

/// `(Σ xᵢ)^γ ≥ Σ xᵢ^γ` over random nonnegative vectors.
pub fn check_superadditivity(trials: u64, seed: u64) -> Result<CheckResult> {
    if trials == 0 {
        return domain("trials must be at least 1");
    }
    const GAMMAS: [f64; 4] = [1.0, 1.5, 2.0, 5.0];
    let violations: u64 = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut s = rng::stream(seed, &[tag::SUPERADD, t]);
            let len = 2 + (rng::open01(&mut s) * 19.0) as usize;
            let gamma = GAMMAS[t as usize % GAMMAS.len()];
            let x: Vec<f64> = (0..len)
                .map(|_| {
                    let u = rng::open01(&mut s);
                    let e = rng::open01(&mut s);
                    if u < 0.05 {
                        0.0
                    } else {
                        10f64.powf(-6.0 + 12.0 * e)
                    }
                })
                .collect();
            u64::from(!superadditive(&x, gamma))
        })
        .sum();
    Ok(CheckResult::new(
        "superadditivity",
        0.0,
        violations as f64,
        0.0,
        violations == 0,
        format!("{trials} trials, gamma cycling through {GAMMAS:?}"),
    ))
}

/// Whether `(Σ x)^γ ≥ Σ x^γ` holds in floating point.
pub fn superadditive(x: &[f64], gamma: f64) -> bool {
    let lhs = x.iter().sum::<f64>().powf(gamma);
    let rhs: f64 = x.iter().map(|v| v.powf(gamma)).sum();
    lhs >= rhs
}

/// Exact `P(τ_n < c₀ n²)` against the lower bound `θ(c₀)`.
pub fn check_berry_esseen_bound(c0: f64, n: u64) -> Result<CheckResult> {
    if n < 50 {
        return domain("the hitting bound is checked for n >= 50");
    }
    let theta = asymptotics::theta(c0)?;
    let k = ((c0 * (n * n) as f64).ceil() as u64).saturating_sub(1);
    let (observed, via_survival) = if k < n {
        (0.0, 0.0)
    } else {
        let table = first_passage_pmf(n, k)?;
        (table.total(), 1.0 - table.tail_mass())
    };
    let reflection = 2.0 * normal_sf(1.0 / c0.sqrt());
    Ok(CheckResult::new(
        format!("berry_esseen_c{c0}_n{n}"),
        theta,
        observed,
        0.0,
        observed >= theta,
        format!("K={k}; 1 - P(tau>K) = {via_survival:.6}; reflection estimate {reflection:.6}; slack {:.6}", observed - theta),
    ))
}

/// `reps` draws of `S₁` for the `γ`-stable subordinator with
/// `E e^{−λ S₁} = e^{−λ^γ}`.
pub fn stable_samples(gamma: f64, reps: u64, seed: u64) -> Result<Vec<f64>> {
    (0..reps)
        .into_par_iter()
        .map(|i| {
            let mut s = rng::stream(seed, &[tag::STABLE, i]);
            let u = rng::open01(&mut s);
            let e = rng::exp1(&mut s);
            sample_stable_subordinator(gamma, u, e)
        })
        .collect()
}

fn mean_stderr(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (mut n, mut s1, mut s2) = (0.0, 0.0, 0.0);
    for v in values {
        n += 1.0;
        s1 += v;
        s2 += v * v;
    }
    let mean = s1 / n;
    let var = ((s2 - n * mean * mean) / (n - 1.0)).max(0.0);
    (mean, (var / n).sqrt())
}

/// `E[S₁^{−θ}] = Γ(θ/γ) / (γ Γ(θ))`, within 3 stderr and 2%, plus
/// `E e^{−S₁} = e^{−1}` within 3 stderr.
pub fn check_stable_moments(gamma: f64, theta_exp: f64, reps: u64, seed: u64) -> Result<CheckResult> {
    if reps < 100_000 {
        return domain("stable moment check needs at least 1e5 samples");
    }
    if !(theta_exp > 0.0) {
        return domain("moment order must be positive");
    }
    let samples = stable_samples(gamma, reps, seed)?;
    let target = gamma_fn(theta_exp / gamma) / (gamma * gamma_fn(theta_exp));
    let (mean, se) = mean_stderr(samples.iter().map(|s| s.powf(-theta_exp)));
    let (lap, lap_se) = mean_stderr(samples.iter().map(|s| (-s).exp()));
    let lap_ok = (lap - (-1f64).exp()).abs() <= 3.0 * lap_se;
    let tolerance = (3.0 * se).min(0.02 * target);
    Ok(CheckResult::new(
        format!("stable_moment_gamma{gamma}_theta{theta_exp}"),
        target,
        mean,
        tolerance,
        (mean - target).abs() <= tolerance && lap_ok,
        format!("stderr {se:.2e}; E exp(-S) = {lap:.6} vs {:.6} (stderr {lap_se:.1e})", (-1f64).exp()),
    ))
}

/// Bernstein mixture: `E e^{−t S₁} = e^{−t^γ}` within 3 stderr.
pub fn check_stable_mixture(gamma: f64, t: f64, reps: u64, seed: u64) -> Result<CheckResult> {
    let samples = stable_samples(gamma, reps, seed)?;
    let (mean, se) = mean_stderr(samples.iter().map(|s| (-t * s).exp()));
    let target = (-t.powf(gamma)).exp();
    Ok(CheckResult::new(
        format!("stable_mixture_gamma{gamma}_t{t}"),
        target,
        mean,
        3.0 * se,
        (mean - target).abs() <= 3.0 * se,
        format!("{reps} samples"),
    ))
}

/// Scaling: `S_a = a^{1/γ} S₁` has `E e^{−S_a} = e^{−a}`, within 3 stderr.
pub fn check_stable_scaling(gamma: f64, a: f64, reps: u64, seed: u64) -> Result<CheckResult> {
    if !(a > 0.0) {
        return domain("scale must be positive");
    }
    let samples = stable_samples(gamma, reps, seed)?;
    let k = a.powf(1.0 / gamma);
    let (mean, se) = mean_stderr(samples.iter().map(|s| (-k * s).exp()));
    let target = (-a).exp();
    Ok(CheckResult::new(
        format!("stable_scaling_gamma{gamma}_a{a}"),
        target,
        mean,
        3.0 * se,
        (mean - target).abs() <= 3.0 * se,
        format!("{reps} samples"),
    ))
}

/// `ln f(e^{−u})` for `f(x) = (1 − √(1−x²))/x`, written as
/// `−u − ln(1 + √(1 − e^{−2u}))` to avoid cancellation.
pub fn log_f_exp(u: f64) -> f64 {
    -u - (-(-2.0 * u).exp_m1()).sqrt().ln_1p()
}

/// Residual `ln f(e^{−u}) + √(2u)` scaled by `u^{3/2}` on
/// `u ∈ logspace(10⁻⁶, 10⁻¹, 50)`, plus the envelope
/// `e^{−(1+ε)√(2u)} ≤ f(e^{−u}) ≤ e^{−(1−ε)√(2u)}` for `u ≤ 2ε²/C²`.
pub fn check_fexp_bounds() -> CheckResult {
    let grid: Vec<f64> = (0..50).map(|i| 10f64.powf(-6.0 + 5.0 * i as f64 / 49.0)).collect();
    let scaled: Vec<f64> = grid.iter().map(|&u| (log_f_exp(u) + (2.0 * u).sqrt()).abs() / u.powf(1.5)).collect();
    let c = scaled.iter().cloned().fold(0.0, f64::max);
    let spread = c / scaled.iter().cloned().fold(f64::INFINITY, f64::min);
    let in_range = grid.iter().all(|&u| {
        let f = log_f_exp(u).exp();
        f > 0.0 && f < 1.0
    });
    let u_cap: f64 = 0.1;
    let mut envelope_ok = true;
    let mut covered = 0;
    for eps in [0.01, 0.1, 0.5] {
        let u_eps = u_cap.min(2.0 * eps * eps / (c * c));
        for &u in grid.iter().filter(|&&u| u <= u_eps) {
            covered += 1;
            let lf = log_f_exp(u);
            let r = (2.0 * u).sqrt();
            envelope_ok &= -(1.0 + eps) * r <= lf && lf <= -(1.0 - eps) * r;
        }
    }
    CheckResult::new(
        "fexp_bounds",
        1.0,
        spread,
        2.0,
        spread < 2.0 && in_range && envelope_ok && covered > 0,
        format!("fitted C = {c:.6}; envelope holds at {covered} (eps, u) pairs: {envelope_ok}; range ok: {in_range}"),
    )
}

/// Uniform convergence of `L(xy)/L(x)` on `y ∈ [½, 2]` at
/// `x ∈ {10³, 10⁶, 10⁹}`, and the Potter bound with `(C, ε) = (1.1, 0.1)` at
/// `x = 10⁹` for `y ∈ [10⁻³, 10³]`.
pub fn check_potter_uct(l: &SlowlyVarying) -> Result<CheckResult> {
    l.validate()?;
    let sups: Vec<f64> = [1e3, 1e6, 1e9].iter().map(|&x| l.uct_sup(x, 0.5, 2.0, 200)).collect();
    let decreasing = sups.windows(2).all(|w| w[1] <= w[0]);
    let x = 1e9;
    let lx = l.eval(x);
    let potter_ok = (0..=600).all(|i| {
        let y = 10f64.powf(-3.0 + i as f64 / 100.0);
        l.eval(x * y) / lx <= 1.1 * y.powf(0.1).max(y.powf(-0.1))
    });
    let tolerance = 0.05;
    Ok(CheckResult::new(
        format!("potter_uct_{}", potter_label(l)),
        0.0,
        sups[2],
        tolerance,
        decreasing && sups[2] < tolerance && potter_ok,
        format!("sups {:.4e}, {:.4e}, {:.4e}; Potter bound holds: {potter_ok}", sups[0], sups[1], sups[2]),
    ))
}

fn potter_label(l: &SlowlyVarying) -> String {
    match *l {
        SlowlyVarying::Constant { c } => format!("constant{c}"),
        SlowlyVarying::LogPower { delta } => format!("logpower{delta}"),
        SlowlyVarying::PowerOfLog { c, rho } => format!("poweroflog{c}_{rho}"),
    }
}

/// Monte Carlo against certified tails: `|mc − exact| ≤ 3 stderr + err` at
/// every `n`.
pub fn check_reduction_identity(n_list: &[u64], edge: &EdgeLaw, gamma: f64, reps: u64, seed: u64) -> Result<CheckResult> {
    if n_list.is_empty() {
        return domain("n list must be nonempty");
    }
    let mut worst = 0.0f64;
    let mut passed = true;
    let mut parts = Vec::new();
    for &n in n_list {
        let exact = one_particle::tail_exact(n, edge, gamma, 1e-7)?;
        let mc = one_particle::tail_mc(n, edge, gamma, reps, seed)?;
        let tol = 3.0 * mc.err + exact.err;
        let diff = (mc.value - exact.value).abs();
        passed &= diff <= tol;
        if tol > 0.0 {
            worst = worst.max(diff / tol);
        }
        parts.push(format!("n={n}: exact {:.6e} mc {:.6e} se {:.1e} capped {:.1e}", exact.value, mc.value, mc.err, mc.capped_fraction));
    }
    Ok(CheckResult::new(
        format!("reduction_{edge}_gamma{gamma}"),
        0.0,
        worst,
        1.0,
        passed,
        format!("max |diff|/tolerance shown as observed; {}", parts.join("; ")),
    ))
}

/// Empirical `P(D→ ≥ n)` and `P(D* ≥ n)` for `n = 1..=n_max`, one particle
/// with a random survival parameter.
pub fn displacement_frequencies(edge: &EdgeLaw, gamma: f64, n_max: u64, reps: u64, seed: u64) -> Result<(Vec<f64>, Vec<f64>)> {
    let law = LifetimeLaw::new(gamma)?;
    let edge = edge.compile()?;
    let clip = n_max as i64;
    let counts = (0..reps)
        .into_par_iter()
        .fold(
            || (vec![0u64; n_max as usize + 1], vec![0u64; n_max as usize + 1]),
            |(mut right, mut star), r| {
                let mut s = rng::stream(seed, &[tag::SYMMETRY, r]);
                let h = edge.sample_complement(rng::open01(&mut s));
                let life = law.sample_log_p((-h).ln_1p(), rng::open01(&mut s), DEFAULT_LIFETIME_CAP);
                let (hi, lo) = walk::extremes(&mut Coin::new(s), life.steps, clip);
                right[hi as usize] += 1;
                star[hi.max(-lo) as usize] += 1;
                (right, star)
            },
        )
        .reduce(
            || (vec![0u64; n_max as usize + 1], vec![0u64; n_max as usize + 1]),
            |(mut a, mut b), (c, d)| {
                a.iter_mut().zip(c).for_each(|(x, y)| *x += y);
                b.iter_mut().zip(d).for_each(|(x, y)| *x += y);
                (a, b)
            },
        );
    // survival functions from the exact-value histograms
    let tail = |h: &[u64]| -> Vec<f64> {
        let mut acc = 0u64;
        let mut out = vec![0.0; h.len()];
        for i in (0..h.len()).rev() {
            acc += h[i];
            out[i] = acc as f64 / reps as f64;
        }
        out
    };
    Ok((tail(&counts.0), tail(&counts.1)))
}

/// `P(D→ ≥ n) ≥ ½ P(D* ≥ n)` up to 3 stderr for `n = 1..=n_max`.
pub fn check_symmetry_bound(edge: &EdgeLaw, gamma: f64, n_max: u64, reps: u64, seed: u64) -> Result<CheckResult> {
    if n_max == 0 || reps < 2 {
        return domain("need n_max >= 1 and reps >= 2");
    }
    let (right, star) = displacement_frequencies(edge, gamma, n_max, reps, seed)?;
    let mut passed = true;
    let mut min_slack = f64::INFINITY;
    for n in 1..=n_max as usize {
        // per-replicate Z = 1{D→≥n} − ½ 1{D*≥n}; D→ ≥ n implies D* ≥ n
        let mean = right[n] - 0.5 * star[n];
        let var = (0.25 * star[n] - mean * mean).max(0.0);
        let se = (var / reps as f64).sqrt();
        passed &= mean >= -3.0 * se;
        min_slack = min_slack.min(mean + 3.0 * se);
    }
    Ok(CheckResult::new(
        format!("symmetry_{edge}_gamma{gamma}"),
        0.0,
        min_slack,
        0.0,
        passed,
        format!(
            "n=1..{n_max}, {reps} reps; P(D>=1) = {:.4}, P(D*>=1) = {:.4}; P(D>={n_max}) = {:.4}, P(D*>={n_max}) = {:.4}",
            right[1], star[1], right[n_max as usize], star[n_max as usize]
        ),
    ))
}

/// Certified ratio curve inside `[lower, K↑] · (1 ± rel_tol)`, with `lower`
/// the supremum over `c₀` of K↓ when `γ ≥ 1` and the explicit K↓ otherwise.
pub fn check_ratio_sandwich(edge: &EdgeLaw, gamma: f64, n_list: &[u64], rel_tol: f64) -> Result<CheckResult> {
    let (beta, _) = edge.profile()?;
    let consts = asymptotics::CriticalConstants::compute(gamma, beta, 1.0)?;
    let (lo, hi) = (consts.lower(), consts.k_up);
    let points = one_particle::ratio_curve(n_list, edge, gamma, RatioMethod::Exact { eps: 1e-3 }, 0)?;
    let (lo_b, hi_b) = (lo * (1.0 - rel_tol), hi * (1.0 + rel_tol));
    let passed = points.iter().all(|p| p.ratio - p.err >= lo_b && p.ratio + p.err <= hi_b);
    let last = points.last().expect("nonempty");
    Ok(CheckResult::new(
        format!("ratio_sandwich_{edge}_gamma{gamma}"),
        hi,
        last.ratio,
        rel_tol,
        passed,
        format!(
            "band [{lo:.6}, {hi:.6}]; ratios {}",
            points.iter().map(|p| format!("n={}: {:.5}", p.n, p.ratio)).collect::<Vec<_>>().join(", ")
        ),
    ))
}

/// Named groups of checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    All,
    Tau1,
    Laplace,
    Superadd,
    Berry,
    Stable,
    Fexp,
    Potter,
    Reduction,
    Symmetry,
    Sandwich,
}

impl Suite {
    pub const NAMES: [&'static str; 11] =
        ["all", "tau1", "laplace", "superadd", "berry", "stable", "fexp", "potter", "reduction", "symmetry", "sandwich"];

    fn includes(self, other: Suite) -> bool {
        self == Suite::All || self == other
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "all" => Suite::All,
            "tau1" => Suite::Tau1,
            "laplace" => Suite::Laplace,
            "superadd" => Suite::Superadd,
            "berry" => Suite::Berry,
            "stable" => Suite::Stable,
            "fexp" => Suite::Fexp,
            "potter" => Suite::Potter,
            "reduction" => Suite::Reduction,
            "symmetry" => Suite::Symmetry,
            "sandwich" => Suite::Sandwich,
            _ => return Err(Error::Config(format!("unknown suite {s:?}; expected one of {:?}", Suite::NAMES))),
        })
    }
}

type Job = Box<dyn Fn() -> Vec<CheckResult> + Send + Sync>;

fn job(name: &'static str, f: impl Fn() -> Result<CheckResult> + Send + Sync + 'static) -> Job {
    Box::new(move || vec![f().unwrap_or_else(|e| CheckResult::errored(name, &e))])
}

/// Every check in `suite`, run as independent tasks and sorted by name.
pub fn run_suite(suite: Suite, seed: u64) -> Vec<CheckResult> {
    const STABLE_REPS: u64 = 1_000_000;
    let mut jobs: Vec<Job> = Vec::new();
    if suite.includes(Suite::Tau1) {
        jobs.push(job("tau1_tail", || Ok(check_tau1_tail())));
    }
    if suite.includes(Suite::Laplace) {
        jobs.push(job("laplace_limit", || check_laplace_limit(2.0)));
    }
    if suite.includes(Suite::Superadd) {
        jobs.push(job("superadditivity", move || check_superadditivity(100_000, seed)));
    }
    if suite.includes(Suite::Berry) {
        for c0 in [0.5, 1.0, 2.0] {
            for n in [50, 100, 200] {
                jobs.push(job("berry_esseen", move || check_berry_esseen_bound(c0, n)));
            }
        }
    }
    if suite.includes(Suite::Stable) {
        jobs.push(job("stable_moment", move || check_stable_moments(0.5, 0.5, STABLE_REPS, seed)));
        jobs.push(job("stable_moment", move || check_stable_moments(0.5, 1.0, STABLE_REPS, seed)));
        for t in [1.0, 4.0] {
            jobs.push(job("stable_mixture", move || check_stable_mixture(0.5, t, STABLE_REPS, seed)));
        }
        for a in [0.5, 2.0] {
            jobs.push(job("stable_scaling", move || check_stable_scaling(0.5, a, STABLE_REPS, seed)));
        }
    }
    if suite.includes(Suite::Fexp) {
        jobs.push(job("fexp_bounds", || Ok(check_fexp_bounds())));
    }
    if suite.includes(Suite::Potter) {
        for l in [SlowlyVarying::Constant { c: 0.5 }, SlowlyVarying::PowerOfLog { c: 1.0, rho: -1.0 }] {
            jobs.push(job("potter_uct", move || check_potter_uct(&l)));
        }
    }
    if suite.includes(Suite::Reduction) {
        jobs.push(job("reduction", move || check_reduction_identity(&[0, 1, 5], &EdgeLaw::beta(1.0, 1.0), 1.0, 200_000, seed)));
        jobs.push(job("reduction", move || check_reduction_identity(&[10], &EdgeLaw::beta(1.0, 0.25), 2.0, 1_000_000, seed)));
    }
    if suite.includes(Suite::Symmetry) {
        jobs.push(job("symmetry", move || check_symmetry_bound(&EdgeLaw::beta(1.0, 1.0), 1.0, 10, 1_000_000, seed)));
    }
    if suite.includes(Suite::Sandwich) {
        let decade = [100, 200, 400, 700, 1000];
        jobs.push(job("ratio_sandwich", || check_ratio_sandwich(&EdgeLaw::beta(1.0, 0.5), 1.0, &[200, 400, 600, 800, 1000], 0.05)));
        for (beta, gamma) in [(0.4, 2.0), (0.15, 2.0), (0.5, 0.5), (1.5, 0.5)] {
            jobs.push(job("ratio_sandwich", move || check_ratio_sandwich(&EdgeLaw::beta(1.0, beta), gamma, &decade, 0.10)));
        }
    }
    let mut results: Vec<CheckResult> = jobs.par_iter().flat_map_iter(|j| j()).collect();
    results.sort_by(|a, b| a.name.cmp(&b.name));
    results
}

/// The full suite.
pub fn run_all(seed: u64) -> Vec<CheckResult> {
    run_suite(Suite::All, seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn tau1_tail_passes() {
        let r = check_tau1_tail();
        assert!(r.passed, "{r}");
        assert!((r.observed - 0.797885).abs() <= 0.008);
        assert_eq!(tau1_survival(1), 0.5);
    }

    #[test]
    fn laplace_limit_gamma2() {
        let r = check_laplace_limit(2.0).unwrap();
        assert_relative_eq!(r.target, 0.9778, max_relative = 1e-3);
        assert!(r.passed, "{r}");
        assert!(check_laplace_limit(1.0).is_err());
    }

    #[test]
    fn superadditivity_cases() {
        assert!(superadditive(&[1.0, 1.0], 2.0));
        assert!(superadditive(&[0.0; 5], 2.0));
        assert!(superadditive(&[1e-6, 1e6, 3.0], 1.0));
        let r = check_superadditivity(20_000, 3).unwrap();
        assert!(r.passed, "{r}");
    }

    #[test]
    fn berry_esseen_grid() {
        let r = check_berry_esseen_bound(1.0, 100).unwrap();
        assert!(r.passed, "{r}");
        assert_relative_eq!(r.target, 0.0793, max_relative = 2e-3);
        // close to the reflection value 2(1 − Φ(1))
        assert!((r.observed - 0.3173).abs() < 0.01, "{r}");
        assert!(check_berry_esseen_bound(1.0, 10).is_err());
    }

    #[test]
    fn stable_moment_targets() {
        let r = check_stable_moments(0.5, 0.5, 200_000, 1).unwrap();
        assert_relative_eq!(r.target, 2.0 / std::f64::consts::PI.sqrt(), max_relative = 1e-12);
        assert!(r.passed, "{r}");
        let r = check_stable_moments(0.5, 1.0, 200_000, 1).unwrap();
        assert_relative_eq!(r.target, 2.0, max_relative = 1e-12);
        assert!(check_stable_moments(0.5, 1.0, 10, 1).is_err());
    }

    #[test]
    fn fexp_residual_scaling() {
        let r = check_fexp_bounds();
        assert!(r.passed, "{r}");
        // residual ≈ −(√2/6) u^{3/2} near zero
        let u = 1e-6;
        assert_relative_eq!((log_f_exp(u) + (2.0 * u).sqrt()) / u.powf(1.5), -(2f64.sqrt()) / 6.0, max_relative = 1e-3);
    }

    #[test]
    fn potter_families() {
        let r = check_potter_uct(&SlowlyVarying::Constant { c: 2.0 }).unwrap();
        assert!(r.passed && r.observed == 0.0, "{r}");
        let r = check_potter_uct(&SlowlyVarying::PowerOfLog { c: 1.0, rho: -2.0 }).unwrap();
        assert!(r.detail.contains("Potter bound holds: true"));
        // L = (1 + ln x)^{−2} still moves by about 6.7% over y ∈ [½, 2] at 10⁹
        let r = check_potter_uct(&SlowlyVarying::LogPower { delta: 1.0 }).unwrap();
        assert!((r.observed - 0.0670).abs() < 1e-3, "{r}");
        assert!(!r.passed);
    }

    #[test]
    fn reduction_trivial_level() {
        let r = check_reduction_identity(&[0], &EdgeLaw::beta(1.0, 1.0), 1.0, 10, 0).unwrap();
        assert!(r.passed, "{r}");
    }

    #[test]
    fn symmetry_small() {
        let r = check_symmetry_bound(&EdgeLaw::beta(1.0, 1.0), 1.0, 5, 20_000, 2).unwrap();
        assert!(r.passed, "{r}");
        let (right, star) = displacement_frequencies(&EdgeLaw::beta(1.0, 1.0), 1.0, 5, 20_000, 2).unwrap();
        assert!(right.iter().zip(&star).all(|(r, s)| r <= s));
        assert_eq!(right[0], 1.0);
    }

    #[test]
    fn suite_parsing_and_order() {
        assert_eq!("berry".parse::<Suite>().unwrap(), Suite::Berry);
        assert!("nope".parse::<Suite>().is_err());
        let a = run_suite(Suite::Berry, 0);
        assert_eq!(a.len(), 9);
        assert!(a.windows(2).all(|w| w[0].name <= w[1].name));
        assert!(a.iter().all(|r| r.passed));
    }
}
