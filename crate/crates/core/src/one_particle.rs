//! The one-particle displacement tail `P(D→ ≥ n)`.
//!
//! A particle with survival parameter `π` and lifetime `Ξ` reaches `+n` iff
//! `τ_n ≤ Ξ`. Averaging over `Ξ` and then `π` gives
//!
//! ```text
//! P(D→ ≥ n) = Σ_k P(τ_n = k) · M(k^γ),    M(s) = E[π^s],
//! ```
//!
//! which [`tail_exact`] evaluates with a certified error bound. [`tail_mc`]
//! simulates the particle directly and [`tail_rb`] averages `M(τ_n^γ)` over
//! simulated first-passage times.

use std::collections::HashMap;
use std::io::Write;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::distributions::{CompiledEdge, EdgeLaw, LifetimeLaw};
use crate::error::domain;
use crate::rng::{self, tag, Coin};
use crate::walk::{self, csv_err, first_passage_prob, passage_survival};
use crate::{Error, Result};

/// Terms below this step count are summed one by one.
const HEAD_TERMS: u64 = 2048;
/// Blocks this short are summed exactly instead of bracketed.
const SHORT_BLOCK: u64 = 64;
/// Initial log-width of the bracketed blocks.
const INITIAL_LOG_WIDTH: f64 = 0.05;
/// Budget on elementary evaluations (pmf terms, moments, CDF terms).
pub const MAX_EVALUATIONS: u64 = 100_000_000;
/// Largest step count the tail search may reach.
const MAX_STEPS: u64 = 1 << 62;

/// Lifetimes longer than this are clamped in direct simulation.
pub const DEFAULT_LIFETIME_CAP: u64 = 1 << 26;
/// First-passage simulation stops at `factor · n²` steps.
pub const DEFAULT_PASSAGE_CAP_FACTOR: u64 = 100;

/// MC work is split into fixed chunks that are reduced in index order, so
/// results do not depend on the thread count.
const CHUNK: u64 = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TailMethod {
    ExactQuadrature,
    DirectMC,
    RaoBlackwellMC,
}

impl TailMethod {
    pub fn label(self) -> &'static str {
        match self {
            TailMethod::ExactQuadrature => "exact",
            TailMethod::DirectMC => "mc",
            TailMethod::RaoBlackwellMC => "rb",
        }
    }
}

/// An estimate of `P(D→ ≥ n)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailEstimate {
    pub n: u64,
    pub value: f64,
    /// Certified bound for the exact method, standard error for MC.
    pub err: f64,
    pub method: TailMethod,
    /// Replicates (MC only).
    pub reps: u64,
    /// Fraction of replicates cut off by a step cap (MC only).
    pub capped_fraction: f64,
    /// Bound on the bias introduced by capping (MC only).
    pub bias_bound: f64,
}

impl TailEstimate {
    fn trivial(n: u64, method: TailMethod, reps: u64) -> Self {
        Self { n, value: 1.0, err: 0.0, method, reps, capped_fraction: 0.0, bias_bound: 0.0 }
    }
}

struct Budget {
    used: u64,
}

impl Budget {
    fn spend(&mut self, k: u64) -> Result<()> {
        self.used += k;
        if self.used > MAX_EVALUATIONS {
            return Err(Error::Truncation(format!("evaluation budget of {MAX_EVALUATIONS} exceeded")));
        }
        Ok(())
    }
}

/// Certified evaluation of `Σ_k P(τ_n = k) M(k^γ)` to absolute accuracy `eps`.
///
/// Small `k` are summed term by term. Beyond that the range is cut into
/// log-spaced blocks; on a block `[a, b)` the exact mass `P(a ≤ τ_n < b)`
/// comes from the reflection formula and, since `M` is decreasing, the block
/// sum lies between `mass · M((b−1)^γ)` and `mass · M(a^γ)`. Blocks whose
/// bracket is too wide for their share of the budget are split. The remainder
/// beyond the last block is at most `M(K^γ) P(τ_n > K)`.
pub fn tail_exact(n: u64, edge: &EdgeLaw, gamma: f64, eps: f64) -> Result<TailEstimate> {
    let law = LifetimeLaw::new(gamma)?;
    let edge = edge.compile()?;
    tail_exact_compiled(n, &edge, law.gamma, eps)
}

pub(crate) fn tail_exact_compiled(n: u64, edge: &CompiledEdge, gamma: f64, eps: f64) -> Result<TailEstimate> {
    if !(eps > 0.0) {
        return domain(format!("eps must be positive, got {eps}"));
    }
    if n == 0 {
        return Ok(TailEstimate::trivial(0, TailMethod::ExactQuadrature, 0));
    }
    let m = |k: u64| edge.moment((k as f64).powf(gamma));
    let m: &dyn Fn(u64) -> Result<f64> = &m;
    let mut budget = Budget { used: 0 };

    // far cutoff: M(K^γ) P(τ_n > K) ≤ eps/4
    let head_end = n.max(HEAD_TERMS);
    let mut k_far = head_end;
    loop {
        budget.spend(n + 1)?;
        let far = m(k_far)? * passage_survival(n, k_far);
        if far <= 0.25 * eps {
            break;
        }
        if k_far >= MAX_STEPS / 2 {
            return Err(Error::Truncation(format!(
                "remainder bound still {far:e} at K = {k_far}; eps = {eps:e} is out of reach"
            )));
        }
        k_far *= 2;
    }
    let far = m(k_far)? * passage_survival(n, k_far);

    // exact head on [n, head_end]
    let mut head = 0.0;
    let mut k = n;
    let head_stop = head_end.min(k_far);
    while k <= head_stop {
        head += first_passage_prob(n, k) * m(k)?;
        k += 2;
    }
    budget.spend(head_stop - n + 1)?;

    // bracketed blocks on (head_stop, k_far]. A block of log-width ℓ has a
    // bracket of width ≈ A ℓ² with A the local density of the sum times the
    // elasticity of M, so for a fixed total the block count is minimized by
    // giving every block the same width threshold; the threshold is tuned
    // over a few passes until the widths add up to at most eps/2.
    let (mut mid_sum, mut half_width) = (0.0, 0.0);
    if k_far > head_stop {
        let target = 0.5 * eps;
        let mut threshold = target / 256.0;
        let mut memo = EdgeMemo::default();
        let mut passes = 0;
        loop {
            let (mid, width, blocks) =
                bracket_blocks(n, head_stop + 1, k_far + 1, threshold, &m, &mut memo, &mut budget)?;
            passes += 1;
            if width <= target {
                mid_sum = mid;
                half_width = 0.5 * width;
                break;
            }
            if passes >= 12 {
                return Err(Error::Truncation(format!("block refinement did not reach eps = {eps:e}")));
            }
            let shrink = (0.9 * target / width).powi(2).clamp(1e-6, 0.5);
            threshold *= shrink;
            let _ = blocks;
        }
    }

    let value = head + mid_sum + 0.5 * far;
    let rounding = 1e-13 * value + f64::EPSILON * budget.used as f64 * value;
    let err = half_width + 0.5 * far + rounding;
    if err > eps {
        return Err(Error::Truncation(format!("certified error {err:e} exceeds eps = {eps:e}")));
    }
    Ok(TailEstimate {
        n,
        value: value.clamp(0.0, 1.0),
        err,
        method: TailMethod::ExactQuadrature,
        reps: 0,
        capped_fraction: 0.0,
        bias_bound: 0.0,
    })
}

/// Survival and moment values at block edges, shared by splits and passes.
#[derive(Default)]
struct EdgeMemo {
    survival: HashMap<u64, f64>,
    moment: HashMap<u64, f64>,
}

impl EdgeMemo {
    fn survival(&mut self, n: u64, k: u64, budget: &mut Budget) -> Result<f64> {
        if let Some(&v) = self.survival.get(&k) {
            return Ok(v);
        }
        budget.spend(n + 1)?;
        let v = passage_survival(n, k);
        self.survival.insert(k, v);
        Ok(v)
    }

    fn moment(&mut self, k: u64, m: &dyn Fn(u64) -> Result<f64>, budget: &mut Budget) -> Result<f64> {
        if let Some(&v) = self.moment.get(&k) {
            return Ok(v);
        }
        budget.spend(1)?;
        let v = m(k)?;
        self.moment.insert(k, v);
        Ok(v)
    }
}

/// Bracketed sum of `P(τ_n = k) M(k^γ)` over `k ∈ [start, end)`. Returns
/// the sum of bracket midpoints, the sum of bracket widths and the number of
/// blocks.
fn bracket_blocks(
    n: u64,
    start: u64,
    end: u64,
    threshold: f64,
    m: &dyn Fn(u64) -> Result<f64>,
    memo: &mut EdgeMemo,
    budget: &mut Budget,
) -> Result<(f64, f64, u64)> {
    let ratio = INITIAL_LOG_WIDTH.exp();
    let mut edges = vec![start];
    loop {
        let a = *edges.last().unwrap();
        let b = ((a as f64 * ratio) as u64).max(a + 1).min(end);
        edges.push(b);
        if b == end {
            break;
        }
    }
    let (mut mid, mut width, mut blocks) = (0.0, 0.0, 0u64);
    // depth-first, left to right, so the summation order is fixed
    let mut stack: Vec<(u64, u64)> = edges.windows(2).rev().map(|w| (w[0], w[1])).collect();
    while let Some((a, b)) = stack.pop() {
        blocks += 1;
        if b - a <= SHORT_BLOCK {
            budget.spend(b - a)?;
            let mut k = a + ((a + n) % 2);
            while k < b {
                mid += first_passage_prob(n, k) * m(k)?;
                k += 2;
            }
            continue;
        }
        let mass = memo.survival(n, a - 1, budget)? - memo.survival(n, b - 1, budget)?;
        let (m_hi, m_lo) = (memo.moment(a, m, budget)?, memo.moment(b - 1, m, budget)?);
        let w = mass * (m_hi - m_lo).max(0.0);
        if w <= threshold {
            mid += 0.5 * mass * (m_hi + m_lo);
            width += w;
        } else {
            let c = ((a as f64 * b as f64).sqrt() as u64).clamp(a + 1, b - 1);
            stack.push((c, b));
            stack.push((a, c));
        }
    }
    Ok((mid, width, blocks))
}

fn chunk_ranges(reps: u64) -> Vec<(u64, u64)> {
    (0..reps.div_ceil(CHUNK)).map(|c| (c * CHUNK, ((c + 1) * CHUNK).min(reps))).collect()
}

/// Direct simulation: draw `π`, then `Ξ`, then walk until `+n` or death.
pub fn tail_mc(n: u64, edge: &EdgeLaw, gamma: f64, reps: u64, seed: u64) -> Result<TailEstimate> {
    tail_mc_capped(n, edge, gamma, reps, seed, DEFAULT_LIFETIME_CAP)
}

/// [`tail_mc`] with an explicit lifetime cap. Replicates whose lifetime was
/// clamped and which had not reached `+n` by the cap are counted as misses and
/// reported in `capped_fraction`.
pub fn tail_mc_capped(n: u64, edge: &EdgeLaw, gamma: f64, reps: u64, seed: u64, cap: u64) -> Result<TailEstimate> {
    if reps == 0 {
        return domain("reps must be at least 1");
    }
    let law = LifetimeLaw::new(gamma)?;
    if n == 0 {
        return Ok(TailEstimate::trivial(0, TailMethod::DirectMC, reps));
    }
    let edge = edge.compile()?;
    let level = n as i64;
    let counts: Vec<(u64, u64)> = chunk_ranges(reps)
        .into_par_iter()
        .map(|(lo, hi)| {
            let (mut hits, mut capped) = (0u64, 0u64);
            for r in lo..hi {
                let mut s = rng::stream(seed, &[tag::TAIL_MC, n, r]);
                let h = edge.sample_complement(rng::open01(&mut s));
                let life = law.sample_log_p((-h).ln_1p(), rng::open01(&mut s), cap);
                if life.steps < n {
                    continue;
                }
                let mut coin = Coin::new(s);
                match walk::hit_time(&mut coin, life.steps, level) {
                    Some(_) => hits += 1,
                    None if life.censored => capped += 1,
                    None => {}
                }
            }
            (hits, capped)
        })
        .collect();
    let hits: u64 = counts.iter().map(|c| c.0).sum();
    let capped: u64 = counts.iter().map(|c| c.1).sum();
    let value = hits as f64 / reps as f64;
    let capped_fraction = capped as f64 / reps as f64;
    Ok(TailEstimate {
        n,
        value,
        err: (value * (1.0 - value) / reps as f64).sqrt(),
        method: TailMethod::DirectMC,
        reps,
        capped_fraction,
        bias_bound: capped_fraction,
    })
}

/// Rao–Blackwellized estimate: simulate `τ_n` and average `M(τ_n^γ)`.
pub fn tail_rb(n: u64, edge: &EdgeLaw, gamma: f64, reps: u64, seed: u64) -> Result<TailEstimate> {
    tail_rb_capped(n, edge, gamma, reps, seed, DEFAULT_PASSAGE_CAP_FACTOR)
}

/// [`tail_rb`] with the first-passage cap `cap_factor · n²`. Capped paths
/// contribute the upper bound `M(cap^γ)`; `bias_bound` is
/// `capped_fraction · M(cap^γ)`.
pub fn tail_rb_capped(n: u64, edge: &EdgeLaw, gamma: f64, reps: u64, seed: u64, cap_factor: u64) -> Result<TailEstimate> {
    if reps == 0 {
        return domain("reps must be at least 1");
    }
    let law = LifetimeLaw::new(gamma)?;
    if n == 0 {
        return Ok(TailEstimate::trivial(0, TailMethod::RaoBlackwellMC, reps));
    }
    let edge = edge.compile()?;
    let cap = cap_factor.max(1).saturating_mul(n * n);
    let m_cap = edge.moment((cap as f64).powf(law.gamma))?;
    let level = n as i64;
    let sums: Vec<Result<(f64, f64, u64)>> = chunk_ranges(reps)
        .into_par_iter()
        .map(|(lo, hi)| {
            let (mut s1, mut s2, mut capped) = (0.0, 0.0, 0u64);
            for r in lo..hi {
                let mut coin = Coin::new(rng::stream(seed, &[tag::TAIL_RB, n, r]));
                let w = match walk::hit_time(&mut coin, cap, level) {
                    Some(t) => edge.moment((t as f64).powf(law.gamma))?,
                    None => {
                        capped += 1;
                        m_cap
                    }
                };
                s1 += w;
                s2 += w * w;
            }
            Ok((s1, s2, capped))
        })
        .collect();
    let (mut s1, mut s2, mut capped) = (0.0, 0.0, 0u64);
    for c in sums {
        let (a, b, k) = c?;
        s1 += a;
        s2 += b;
        capped += k;
    }
    let r = reps as f64;
    let mean = s1 / r;
    let var = if reps > 1 { ((s2 - r * mean * mean) / (r - 1.0)).max(0.0) } else { 0.0 };
    let capped_fraction = capped as f64 / r;
    Ok(TailEstimate {
        n,
        value: mean,
        err: (var / r).sqrt(),
        method: TailMethod::RaoBlackwellMC,
        reps,
        capped_fraction,
        bias_bound: capped_fraction * m_cap,
    })
}

/// How [`ratio_curve`] estimates each tail.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum RatioMethod {
    /// Certified sum with the ratio's absolute error at most `eps`.
    Exact { eps: f64 },
    DirectMc { reps: u64 },
    RaoBlackwell { reps: u64 },
}

/// `n · P(D→ ≥ n) / (n^{1−2βγ} L(n^{2γ}))` at one `n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RatioPoint {
    pub n: u64,
    pub ratio: f64,
    pub err: f64,
    pub tail: TailEstimate,
    pub beta: f64,
    pub gamma: f64,
    pub l_at_n2gamma: f64,
}

/// Ratio normalization `n^{1−2βγ} L(n^{2γ})`, evaluated in logs.
pub fn ratio_normalization(n: u64, beta: f64, gamma: f64, l_at: f64) -> f64 {
    ((1.0 - 2.0 * beta * gamma) * (n as f64).ln()).exp() * l_at
}

/// Normalized tails over an increasing list of `n`, using the `(β, L)`
/// declared by the edge law.
pub fn ratio_curve(n_list: &[u64], edge: &EdgeLaw, gamma: f64, method: RatioMethod, seed: u64) -> Result<Vec<RatioPoint>> {
    LifetimeLaw::new(gamma)?;
    if n_list.is_empty() || n_list.windows(2).any(|w| w[1] <= w[0]) || n_list[0] == 0 {
        return domain("n list must be nonempty, positive and strictly increasing");
    }
    let (beta, l) = edge.profile()?;
    let compiled = edge.compile()?;
    n_list
        .par_iter()
        .map(|&n| {
            let l_at = l.eval((n as f64).powf(2.0 * gamma));
            let norm = ratio_normalization(n, beta, gamma, l_at);
            let scale = n as f64 / norm;
            let tail = match method {
                RatioMethod::Exact { eps } => tail_exact_compiled(n, &compiled, gamma, eps / scale)?,
                RatioMethod::DirectMc { reps } => tail_mc(n, edge, gamma, reps, seed)?,
                RatioMethod::RaoBlackwell { reps } => tail_rb(n, edge, gamma, reps, seed)?,
            };
            Ok(RatioPoint { n, ratio: tail.value * scale, err: tail.err * scale, tail, beta, gamma, l_at_n2gamma: l_at })
        })
        .collect()
}

/// One row of the tail CSV; the normalization columns are empty when the
/// edge law declares no `(β, L)`.
#[derive(Debug, Clone, Copy)]
pub struct TailRow {
    pub tail: TailEstimate,
    pub gamma: f64,
    pub beta: Option<f64>,
    pub l_at_n2gamma: Option<f64>,
    pub ratio: Option<f64>,
}

impl From<&RatioPoint> for TailRow {
    fn from(p: &RatioPoint) -> Self {
        TailRow { tail: p.tail, gamma: p.gamma, beta: Some(p.beta), l_at_n2gamma: Some(p.l_at_n2gamma), ratio: Some(p.ratio) }
    }
}

pub const TAIL_CSV_HEADER: [&str; 8] = ["n", "value", "err", "method", "beta", "gamma", "L_at_n2gamma", "ratio"];

pub fn write_tail_csv<W: Write>(rows: &[TailRow], out: W) -> Result<()> {
    let opt = |x: Option<f64>| x.map(|v| format!("{v:e}")).unwrap_or_default();
    let mut w = csv::Writer::from_writer(out);
    w.write_record(TAIL_CSV_HEADER).map_err(csv_err)?;
    for r in rows {
        w.write_record([
            r.tail.n.to_string(),
            format!("{:e}", r.tail.value),
            format!("{:e}", r.tail.err),
            r.tail.method.label().to_string(),
            opt(r.beta),
            format!("{:e}", r.gamma),
            opt(r.l_at_n2gamma),
            opt(r.ratio),
        ])
        .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

pub fn save_tail_csv(rows: &[TailRow], path: &Path) -> Result<()> {
    write_tail_csv(rows, std::fs::File::create(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::walk::gen_func;

    #[test]
    fn uniform_law_small_n() {
        // Beta(1,1), γ = 1: Σ_k P(τ₁ = k)/(k+1) = ∫₀¹ f(s) ds = 1 − ln 2
        let t = tail_exact(1, &EdgeLaw::beta(1.0, 1.0), 1.0, 1e-9).unwrap();
        let target = 1.0 - std::f64::consts::LN_2;
        assert!((t.value - target).abs() <= t.err + 1e-14, "{} vs {target}", t.value);
        assert!(t.err <= 1e-9);
    }

    #[test]
    fn spike_law_reproduces_generating_function() {
        let w = 1e-7;
        let spike = EdgeLaw::tabulated_normalized(vec![(0.5 - w, 0.0), (0.5, 1.0), (0.5 + w, 0.0)], None, None).unwrap();
        let t = tail_exact(1, &spike, 1.0, 1e-12).unwrap();
        assert!((t.value - gen_func(0.5).unwrap()).abs() < 1e-11, "{}", t.value);
    }

    #[test]
    fn error_contract_and_determinism() {
        let law = EdgeLaw::beta(1.0, 0.5);
        for eps in [1e-4, 1e-7, 1e-10] {
            let a = tail_exact(7, &law, 1.3, eps).unwrap();
            let b = tail_exact(7, &law, 1.3, eps).unwrap();
            assert!(a.err <= eps);
            assert_eq!(a.value.to_bits(), b.value.to_bits());
        }
        assert_eq!(tail_exact(0, &law, 1.0, 1e-6).unwrap().value, 1.0);
        assert!(tail_exact(3, &law, 1.0, 0.0).is_err());
    }

    #[test]
    fn estimates_nest_across_tolerances() {
        let law = EdgeLaw::beta(2.0, 0.3);
        let coarse = tail_exact(50, &law, 0.5, 1e-5).unwrap();
        let fine = tail_exact(50, &law, 0.5, 1e-7).unwrap();
        assert!((coarse.value - fine.value).abs() <= coarse.err + fine.err);
    }

    #[test]
    fn monotone_in_n() {
        let law = EdgeLaw::beta(1.0, 0.5);
        let mut prev = 1.0;
        for n in [1, 2, 5, 10, 50, 100] {
            let t = tail_exact(n, &law, 1.0, 1e-9).unwrap();
            assert!(t.value <= prev + 2.0 * t.err);
            prev = t.value;
        }
    }

    #[test]
    fn unreachable_precision_is_an_error() {
        // a log-corrected edge decays so slowly that 1e-15 is out of range
        let r = tail_exact(5, &EdgeLaw::LogCorrected { delta: 0.5 }, 0.5, 1e-15);
        assert!(matches!(r, Err(Error::Truncation(_))), "{r:?}");
    }

    #[test]
    fn mc_trivial_cases() {
        let law = EdgeLaw::beta(1.0, 1.0);
        assert_eq!(tail_mc(0, &law, 1.0, 10, 1).unwrap().value, 1.0);
        assert_eq!(tail_rb(0, &law, 1.0, 10, 1).unwrap().value, 1.0);
        assert!(tail_mc(1, &law, 1.0, 0, 1).is_err());
    }

    #[test]
    fn mc_agrees_with_exact() {
        let law = EdgeLaw::beta(1.0, 1.0);
        let exact = tail_exact(3, &law, 1.0, 1e-10).unwrap();
        let mc = tail_mc(3, &law, 1.0, 200_000, 11).unwrap();
        assert!((mc.value - exact.value).abs() <= 4.0 * mc.err, "{mc:?} vs {exact:?}");
        let rb = tail_rb(3, &law, 1.0, 50_000, 11).unwrap();
        assert!((rb.value - exact.value).abs() <= 4.0 * rb.err + rb.bias_bound, "{rb:?} vs {exact:?}");
    }

    #[test]
    fn mc_is_thread_count_independent() {
        let law = EdgeLaw::beta(1.0, 0.5);
        let pool = rayon::ThreadPoolBuilder::new().num_threads(3).build().unwrap();
        let a = tail_rb(4, &law, 1.0, 10_000, 5).unwrap();
        let b = pool.install(|| tail_rb(4, &law, 1.0, 10_000, 5).unwrap());
        assert_eq!(a.value.to_bits(), b.value.to_bits());
    }

    #[test]
    fn ratio_requires_profile() {
        let trunc = EdgeLaw::truncated(EdgeLaw::beta(1.0, 1.0), 0.5);
        assert!(ratio_curve(&[10], &trunc, 1.0, RatioMethod::Exact { eps: 1e-3 }, 0).is_err());
        let law = EdgeLaw::beta(1.0, 0.5);
        assert!(ratio_curve(&[10, 5], &law, 1.0, RatioMethod::Exact { eps: 1e-3 }, 0).is_err());
        let pts = ratio_curve(&[10, 20], &law, 1.0, RatioMethod::Exact { eps: 1e-4 }, 0).unwrap();
        for p in &pts {
            assert!(p.ratio > 0.0 && p.err <= 1e-4);
            let norm = ratio_normalization(p.n, 0.5, 1.0, 0.5);
            assert!((p.ratio - p.n as f64 * p.tail.value / norm).abs() < 1e-12);
        }
    }

    #[test]
    fn csv_layout() {
        let t = tail_exact(1, &EdgeLaw::beta(1.0, 1.0), 1.0, 1e-6).unwrap();
        let row = TailRow { tail: t, gamma: 1.0, beta: None, l_at_n2gamma: None, ratio: None };
        let mut buf = Vec::new();
        write_tail_csv(&[row], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "n,value,err,method,beta,gamma,L_at_n2gamma,ratio");
        let fields: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert_eq!(fields.len(), 8);
        assert_eq!(fields[3], "exact");
        assert_eq!(fields[4], "");
    }
}
