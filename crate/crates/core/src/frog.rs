//! The interacting frog model on Z, simulated up to a finite horizon.
//!
//! Particles start asleep, `η_x` of them at each site `x`. The ones at the
//! origin are active at time 0. An active particle activated at time `t_a`
//! with lifetime `Ξ` steps at times `t_a+1, …, t_a+Ξ` and is alive at every
//! `t ≤ t_a + Ξ`. The first visit to a site wakes its sleepers, which start
//! walking at the next instant.
//!
//! The visited set is always an interval `[L, R]`, so a new site is realized
//! exactly when a particle steps to `L−1` or `R+1`. Each site's occupation,
//! survival parameters and lifetimes come from a stream keyed by the site;
//! each particle's walk has its own stream. A run is therefore a function of
//! `(seed, replicate)` alone, and horizons are nested on matched seeds.
//!
//! Simulation is event driven: a particle at distance `d ≥ 2` from both ends
//! of `[L, R]` cannot wake anybody during its next `d−1` steps, so those steps
//! are taken in one batch. Since every particle reads its own stream in order,
//! batching reproduces lock-step simulation exactly.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::io::Write;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::asymptotics::{classify_phase, Verdict};
use crate::distributions::{CompiledEdge, EdgeLaw, EtaLaw, LifetimeLaw};
use crate::error::domain;
use crate::rng::{self, tag, Coin};
use crate::walk::csv_err;
use crate::Result;

/// Quantile of the standard normal used for 95% intervals.
const Z95: f64 = 1.959_963_984_540_054;

/// Parameters of a batch of frog-model runs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrogConfig {
    pub gamma: f64,
    pub edge: EdgeLaw,
    pub eta: EtaLaw,
    /// Last simulated instant `T`.
    pub horizon: u32,
    pub reps: u64,
    #[serde(default)]
    pub seed: u64,
    /// Fixed number of particles at the origin, replacing the draw from `eta`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub origin_particles: Option<u32>,
}

impl FrogConfig {
    pub fn validate(&self) -> Result<()> {
        LifetimeLaw::new(self.gamma)?;
        self.edge.compile()?;
        self.eta.validate()?;
        if self.horizon == 0 {
            return domain("horizon must be at least 1");
        }
        if self.horizon > u32::MAX - 2 {
            return domain("horizon too large");
        }
        if self.reps == 0 {
            return domain("reps must be at least 1");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "time")]
pub enum Outcome {
    /// First instant with no active alive particle.
    ExtinctAt(u32),
    SurvivedToHorizon,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrogRunReport {
    pub outcome: Outcome,
    pub max_right: i64,
    pub max_left: i64,
    /// Largest number of simultaneously active alive particles.
    pub peak_active: u64,
    pub activated_sites: u64,
    pub activated_particles: u64,
}

impl FrogRunReport {
    pub fn survived(&self) -> bool {
        self.outcome == Outcome::SurvivedToHorizon
    }
}

struct Particle {
    pos: i64,
    /// Time up to which the path has been realized.
    clock: u32,
    /// Last instant at which the particle is alive, capped at `T+1`.
    death: u32,
    coin: Coin,
    #[cfg(debug_assertions)]
    origin: i64,
    #[cfg(debug_assertions)]
    activated: u32,
}

fn site_key(x: i64) -> u64 {
    // zigzag, so that negative sites get their own keys
    ((x << 1) ^ (x >> 63)) as u64
}

struct Run<'a> {
    cfg: &'a FrogConfig,
    edge: &'a CompiledEdge,
    law: LifetimeLaw,
    rep: u64,
    particles: Vec<Particle>,
    /// `(time of next step, insertion order, particle)`
    queue: BinaryHeap<Reverse<(u32, u64, u32)>>,
    seq: u64,
    /// `(activation, death)` of every particle, for the alive-count profile.
    spans: Vec<(u32, u32)>,
    left: i64,
    right: i64,
}

impl Run<'_> {
    /// Realize site `x` and activate its sleepers at time `t`.
    fn wake(&mut self, x: i64, t: u32) {
        let key = site_key(x);
        let mut env = rng::stream(self.cfg.seed, &[tag::FROG_SITE, self.rep, key]);
        let eta_draw = self.cfg.eta.sample(rng::open01(&mut env));
        let count = match (x, self.cfg.origin_particles) {
            (0, Some(k)) => k,
            _ => eta_draw,
        };
        let horizon_end = self.cfg.horizon + 1;
        for i in 0..count {
            let h = self.edge.sample_complement(rng::open01(&mut env));
            let cap = u64::from(horizon_end - t);
            let life = self.law.sample_log_p((-h).ln_1p(), rng::open01(&mut env), cap);
            let death = t + life.steps as u32;
            let coin = Coin::new(rng::stream(self.cfg.seed, &[tag::FROG_WALK, self.rep, key, u64::from(i)]));
            let id = self.particles.len() as u32;
            self.particles.push(Particle {
                pos: x,
                clock: t,
                death,
                coin,
                #[cfg(debug_assertions)]
                origin: x,
                #[cfg(debug_assertions)]
                activated: t,
            });
            self.spans.push((t, death));
            self.schedule(id);
        }
    }

    fn schedule(&mut self, id: u32) {
        let p = &self.particles[id as usize];
        if p.clock < p.death && p.clock < self.cfg.horizon {
            self.queue.push(Reverse((p.clock + 1, self.seq, id)));
            self.seq += 1;
        }
    }

    fn advance(&mut self, id: u32) {
        let horizon = self.cfg.horizon;
        let (left, right) = (self.left, self.right);
        let p = &mut self.particles[id as usize];
        let remaining = p.death.min(horizon) - p.clock;
        let room = (p.pos - left).min(right - p.pos);
        let mut woke = None;
        if room >= 2 {
            let (k, d) = p.coin.bulk(((room - 1) as u32).min(remaining));
            p.clock += k;
            p.pos += d;
        } else {
            p.clock += 1;
            p.pos += p.coin.step();
            if p.pos < left || p.pos > right {
                woke = Some((p.pos, p.clock));
            }
        }
        #[cfg(debug_assertions)]
        debug_assert!((p.pos - p.origin).unsigned_abs() <= u64::from(p.clock - p.activated));
        if let Some((x, t)) = woke {
            self.left = self.left.min(x);
            self.right = self.right.max(x);
            self.wake(x, t);
        }
        self.schedule(id);
    }
}

/// Simulate replicate `rep` of `config`.
pub fn run_frog(config: &FrogConfig, rep: u64) -> Result<FrogRunReport> {
    config.validate()?;
    let edge = config.edge.compile()?;
    Ok(run_compiled(config, &edge, rep))
}

fn run_compiled(config: &FrogConfig, edge: &CompiledEdge, rep: u64) -> FrogRunReport {
    let mut run = Run {
        cfg: config,
        edge,
        law: LifetimeLaw { gamma: config.gamma },
        rep,
        particles: Vec::new(),
        queue: BinaryHeap::new(),
        seq: 0,
        spans: Vec::new(),
        left: 0,
        right: 0,
    };
    run.wake(0, 0);
    while let Some(Reverse((_, _, id))) = run.queue.pop() {
        run.advance(id);
    }

    // Each particle is woken by one alive at its activation time, so the
    // alive instants form the single interval [0, last death].
    let last_death = run.spans.iter().map(|s| s.1).max();
    let outcome = match last_death {
        Some(d) if d >= config.horizon => Outcome::SurvivedToHorizon,
        Some(d) => Outcome::ExtinctAt(d + 1),
        None => Outcome::ExtinctAt(1),
    };
    let mut events: Vec<(u32, i64)> = Vec::with_capacity(2 * run.spans.len());
    for &(a, d) in &run.spans {
        events.push((a, 1));
        events.push((d.saturating_add(1), -1));
    }
    // removals before additions at equal times
    events.sort_unstable();
    let (mut alive, mut peak) = (0i64, 0i64);
    for (_, delta) in events {
        alive += delta;
        peak = peak.max(alive);
    }
    FrogRunReport {
        outcome,
        max_right: run.right,
        max_left: run.left,
        peak_active: peak as u64,
        activated_sites: (run.right - run.left + 1) as u64,
        activated_particles: run.particles.len() as u64,
    }
}

/// Run every replicate of `config`, in replicate order.
pub fn run_all(config: &FrogConfig) -> Result<Vec<FrogRunReport>> {
    config.validate()?;
    let edge = config.edge.compile()?;
    Ok((0..config.reps).into_par_iter().map(|r| run_compiled(config, &edge, r)).collect())
}

/// Wilson score interval for `k` successes in `n` trials.
pub fn wilson_interval(k: u64, n: u64) -> (f64, f64) {
    let (exact_low, exact_high) = (k == 0, k == n);
    let (k, n) = (k as f64, n as f64);
    let p = k / n;
    let z2 = Z95 * Z95;
    let denom = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / denom;
    let half = Z95 * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    let low = if exact_low { 0.0 } else { (centre - half).max(0.0) };
    let high = if exact_high { 1.0 } else { (centre + half).min(1.0) };
    (low, high)
}

/// Fraction of replicates alive at the horizon.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SurvivalEstimate {
    pub reps: u64,
    pub survived: u64,
    pub estimate: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    /// Survival to a finite horizon only bounds true survival from above.
    pub censored: bool,
}

pub fn survival_prob(config: &FrogConfig) -> Result<SurvivalEstimate> {
    let runs = run_all(config)?;
    let survived = runs.iter().filter(|r| r.survived()).count() as u64;
    let (ci_low, ci_high) = wilson_interval(survived, config.reps);
    Ok(SurvivalEstimate {
        reps: config.reps,
        survived,
        estimate: survived as f64 / config.reps as f64,
        ci_low,
        ci_high,
        censored: true,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub beta: f64,
    pub gamma: f64,
    pub reps: u64,
    pub horizon: u32,
    pub survived: u64,
    pub estimate: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub verdict: Verdict,
}

/// Survival estimates over a `(β, γ)` grid with `Beta(1, β)` edge laws,
/// each tagged with the classifier's verdict. Rows are ordered by `β`, then
/// `γ`.
pub fn phase_sweep(beta_grid: &[f64], gamma_grid: &[f64], base: &FrogConfig) -> Result<Vec<SweepRow>> {
    if beta_grid.is_empty() || gamma_grid.is_empty() {
        return domain("sweep grids must be nonempty");
    }
    let points: Vec<(f64, f64)> =
        beta_grid.iter().flat_map(|&b| gamma_grid.iter().map(move |&g| (b, g))).collect();
    points
        .par_iter()
        .map(|&(beta, gamma)| {
            let cfg = FrogConfig { gamma, edge: EdgeLaw::beta(1.0, beta), ..base.clone() };
            let est = survival_prob(&cfg)?;
            let verdict = classify_phase(gamma, &cfg.edge.edge_class()?, cfg.eta.summary())?.verdict;
            Ok(SweepRow {
                beta,
                gamma,
                reps: est.reps,
                horizon: cfg.horizon,
                survived: est.survived,
                estimate: est.estimate,
                ci_low: est.ci_low,
                ci_high: est.ci_high,
                verdict,
            })
        })
        .collect()
}

pub const SWEEP_CSV_HEADER: [&str; 9] =
    ["beta", "gamma", "reps", "horizon", "survived", "estimate", "ci_low", "ci_high", "verdict"];

pub fn write_sweep_csv<W: Write>(rows: &[SweepRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SWEEP_CSV_HEADER).map_err(csv_err)?;
    for r in rows {
        w.write_record([
            r.beta.to_string(),
            r.gamma.to_string(),
            r.reps.to_string(),
            r.horizon.to_string(),
            r.survived.to_string(),
            format!("{:.6}", r.estimate),
            format!("{:.6}", r.ci_low),
            format!("{:.6}", r.ci_high),
            r.verdict.label().to_string(),
        ])
        .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

pub fn save_sweep_csv(rows: &[SweepRow], path: &Path) -> Result<()> {
    write_sweep_csv(rows, std::fs::File::create(path)?)
}

pub const RUNS_CSV_HEADER: [&str; 8] = [
    "rep",
    "outcome",
    "extinction_time",
    "max_right",
    "max_left",
    "peak_active",
    "activated_sites",
    "activated_particles",
];

/// One row per replicate; `extinction_time` is empty for runs alive at the horizon.
pub fn write_runs_csv<W: Write>(runs: &[FrogRunReport], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(RUNS_CSV_HEADER).map_err(csv_err)?;
    for (rep, r) in runs.iter().enumerate() {
        let (outcome, time) = match r.outcome {
            Outcome::ExtinctAt(t) => ("extinct", t.to_string()),
            Outcome::SurvivedToHorizon => ("survived", String::new()),
        };
        w.write_record([
            rep.to_string(),
            outcome.to_string(),
            time,
            r.max_right.to_string(),
            r.max_left.to_string(),
            r.peak_active.to_string(),
            r.activated_sites.to_string(),
            r.activated_particles.to_string(),
        ])
        .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}
