//! Simple symmetric random walk on Z: exact first-passage laws and direct
//! simulation.
//!
//! `τ_n` is the first time the walk started at 0 reaches `+n`. Its pmf is
//! `P(τ_n = k) = (n/k) P(S_k = n)`, and by reflection
//! `P(τ_n > K) = P(−n < S_K ≤ n)`.

use std::io::Write;
use std::path::Path;

use crate::distributions::LifetimeLaw;
use crate::error::domain;
use crate::rng::{self, tag, Coin};
use crate::Result;

/// Below this step count the ballot numbers fit in `u128` and the pmf is
/// computed from exact integer path counts.
const EXACT_COUNT_MAX_K: u64 = 120;

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// `ln Γ(n+1) − (n+½) ln n + n − ½ ln 2π` for integers `n ≤ 15`.
const STIRLERR_TABLE: [f64; 16] = [
    0.0,
    0.081_061_466_795_327_26,
    0.041_340_695_955_409_3,
    0.027_677_925_684_998_34,
    0.020_790_672_103_765_093,
    0.016_644_691_189_821_193,
    0.013_876_128_823_070_748,
    0.011_896_709_945_891_77,
    0.010_411_265_261_972_096,
    0.009_255_462_182_712_733,
    0.008_330_563_433_362_87,
    0.007_573_675_487_951_841,
    0.006_942_840_107_209_53,
    0.006_408_994_188_004_207,
    0.005_951_370_112_758_847_5,
    0.005_554_733_551_962_801,
];

fn stirlerr(n: u64) -> f64 {
    if n < 16 {
        return STIRLERR_TABLE[n as usize];
    }
    const S0: f64 = 1.0 / 12.0;
    const S1: f64 = 1.0 / 360.0;
    const S2: f64 = 1.0 / 1260.0;
    const S3: f64 = 1.0 / 1680.0;
    const S4: f64 = 1.0 / 1188.0;
    let nn = n as f64;
    let n2 = nn * nn;
    if n > 500 {
        return (S0 - S1 / n2) / nn;
    }
    if n > 80 {
        return (S0 - (S1 - S2 / n2) / n2) / nn;
    }
    if n > 35 {
        return (S0 - (S1 - (S2 - S3 / n2) / n2) / n2) / nn;
    }
    (S0 - (S1 - (S2 - (S3 - S4 / n2) / n2) / n2) / n2) / nn
}

/// Deviance term `x ln(x/m) + m − x`, accurate when `x ≈ m`.
fn bd0(x: f64, m: f64) -> f64 {
    if (x - m).abs() < 0.1 * (x + m) {
        let v = (x - m) / (x + m);
        let mut s = (x - m) * v;
        let mut ej = 2.0 * x * v;
        let v2 = v * v;
        for j in 1..1000 {
            ej *= v2;
            let s1 = s + ej / (2 * j + 1) as f64;
            if s1 == s {
                return s1;
            }
            s = s1;
        }
        s
    } else {
        x * (x / m).ln() + m - x
    }
}

/// `P(Bin(k, ½) = x)` by the saddle-point expansion; relative accuracy near
/// machine precision for all `k`.
pub fn binom_half(x: u64, k: u64) -> f64 {
    if x > k {
        return 0.0;
    }
    if x == 0 || x == k {
        return (-(k as f64) * std::f64::consts::LN_2).exp();
    }
    let (xf, kf) = (x as f64, k as f64);
    let m = 0.5 * kf;
    let lc = stirlerr(k) - stirlerr(x) - stirlerr(k - x) - bd0(xf, m) - bd0(kf - xf, m);
    let lf = LN_SQRT_2PI + 0.5 * (xf * (kf - xf) / kf).ln();
    (lc - lf).exp()
}

fn choose_u128(n: u64, k: u64) -> u128 {
    let k = k.min(n - k);
    let mut c: u128 = 1;
    for i in 1..=k as u128 {
        c = c * (n as u128 - k as u128 + i) / i;
    }
    c
}

/// `P(τ_n = k)`.
pub fn first_passage_prob(n: u64, k: u64) -> f64 {
    if n == 0 {
        return if k == 0 { 1.0 } else { 0.0 };
    }
    if k < n || (k - n) % 2 == 1 {
        return 0.0;
    }
    let up = (k + n) / 2;
    if k <= EXACT_COUNT_MAX_K {
        // number of first-passage paths, an integer; the conversion rounds once
        let paths = choose_u128(k, up) * n as u128 / k as u128;
        return paths as f64 * (-(k as f64)).exp2();
    }
    n as f64 / k as f64 * binom_half(up, k)
}

/// `P(τ_n > k) = P(−n < S_k ≤ n)`.
pub fn passage_survival(n: u64, k: u64) -> f64 {
    if n == 0 {
        return 0.0;
    }
    // S_k = 2x − k with x up-steps; −n < 2x − k ≤ n
    let lo = ((k as i128 - n as i128).div_euclid(2) + 1).max(0) as u64;
    let hi = ((k + n) / 2).min(k);
    if lo > hi {
        return 0.0;
    }
    if k <= EXACT_COUNT_MAX_K {
        let total: u128 = (lo..=hi).map(|x| choose_u128(k, x)).sum();
        return (total as f64 * (-(k as f64)).exp2()).min(1.0);
    }
    // start at the term nearest the mode and recurse outwards
    let mid = (k / 2).clamp(lo, hi);
    let centre = binom_half(mid, k);
    let mut sum = centre;
    let mut term = centre;
    for x in mid + 1..=hi {
        term *= (k - x + 1) as f64 / x as f64;
        if term < sum * 1e-18 {
            break;
        }
        sum += term;
    }
    let mut term = centre;
    for x in (lo..mid).rev() {
        term *= (x + 1) as f64 / (k - x) as f64;
        if term < sum * 1e-18 {
            break;
        }
        sum += term;
    }
    sum.min(1.0)
}

/// `P(τ₁ > t)`, which equals `P(S_t ∈ {0, 1})`.
pub fn tau1_survival(t: u64) -> f64 {
    passage_survival(1, t)
}

/// Generating function `f(s) = E[s^{τ₁}] = (1 − √(1−s²))/s`, evaluated as
/// `s / (1 + √((1−s)(1+s)))`.
pub fn gen_func(s: f64) -> Result<f64> {
    if !(s > 0.0 && s <= 1.0) {
        return domain(format!("generating function argument must lie in (0, 1], got {s}"));
    }
    Ok(s / (1.0 + ((1.0 - s) * (1.0 + s)).sqrt()))
}

/// Truncated pmf of `τ_n` on `n ≤ k ≤ K`.
#[derive(Debug, Clone, PartialEq)]
pub struct FirstPassageTable {
    n: u64,
    k_max: u64,
    /// `probs[j] = P(τ_n = n + 2j)`
    probs: Vec<f64>,
    tail_mass: f64,
}

impl FirstPassageTable {
    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn k_max(&self) -> u64 {
        self.k_max
    }

    /// `P(τ_n > K)`.
    pub fn tail_mass(&self) -> f64 {
        self.tail_mass
    }

    /// `P(τ_n = k)`, zero outside the table or off parity.
    pub fn prob(&self, k: u64) -> f64 {
        if k < self.n || k > self.k_max || (k - self.n) % 2 == 1 {
            return 0.0;
        }
        self.probs[((k - self.n) / 2) as usize]
    }

    /// `(k, P(τ_n = k))` over the support inside the table.
    pub fn iter(&self) -> impl Iterator<Item = (u64, f64)> + '_ {
        self.probs.iter().enumerate().map(move |(j, &p)| (self.n + 2 * j as u64, p))
    }

    pub fn total(&self) -> f64 {
        self.probs.iter().sum()
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["k", "prob"]).map_err(csv_err)?;
        for (k, p) in self.iter() {
            w.write_record([k.to_string(), format!("{p:e}")]).map_err(csv_err)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn save_csv(&self, path: &Path) -> Result<()> {
        self.write_csv(std::fs::File::create(path)?)
    }
}

pub(crate) fn csv_err(e: csv::Error) -> crate::Error {
    crate::Error::Io(std::io::Error::other(e))
}

/// Pmf of `τ_n` for `k ≤ K` with the exact remaining mass `P(τ_n > K)`.
pub fn first_passage_pmf(n: u64, k_max: u64) -> Result<FirstPassageTable> {
    if n == 0 {
        return domain("target level must be positive");
    }
    if k_max < n {
        return domain(format!("truncation K = {k_max} is below the level n = {n}"));
    }
    let probs = (n..=k_max).step_by(2).map(|k| first_passage_prob(n, k)).collect();
    Ok(FirstPassageTable { n, k_max, probs, tail_mass: passage_survival(n, k_max) })
}

/// Smallest even-offset `K ≥ n` with `P(τ_n > K) ≤ eps`.
pub fn truncation_for(n: u64, eps: f64) -> Result<u64> {
    if !(eps > 0.0 && eps < 1.0) {
        return domain(format!("tail target must lie in (0, 1), got {eps}"));
    }
    // P(τ_n > K) ≈ n √(2/(πK)); start there and correct by bisection
    let guess = (2.0 / std::f64::consts::PI) * (n as f64 / eps).powi(2);
    let mut hi = (guess.max(n as f64) as u64).max(n);
    while passage_survival(n, hi) > eps {
        hi = hi.checked_mul(2).ok_or_else(|| crate::Error::Truncation("truncation overflow".into()))?;
    }
    let mut lo = n;
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if passage_survival(n, mid) <= eps {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// First step at which the walk reaches `level`, within `steps` steps.
pub fn hit_time(coin: &mut Coin, steps: u64, level: i64) -> Option<u64> {
    debug_assert!(level > 0);
    let mut x = 0i64;
    let mut t = 0u64;
    while t < steps {
        let gap = level - x;
        if gap > 1 {
            let room = ((gap - 1) as u64).min(steps - t).min(64) as u32;
            let (k, d) = coin.bulk(room);
            t += k as u64;
            x += d;
        } else {
            t += 1;
            x += coin.step();
            if x >= level {
                return Some(t);
            }
        }
    }
    None
}

/// Running maximum and minimum over `steps` steps, exact while inside
/// `[−clip, clip]`; the walk stops once both clips are reached.
pub fn extremes(coin: &mut Coin, steps: u64, clip: i64) -> (i64, i64) {
    let (mut x, mut hi, mut lo) = (0i64, 0i64, 0i64);
    let mut t = 0u64;
    while t < steps && (hi < clip || lo > -clip) {
        let room = (hi - x).min(x - lo);
        if room > 1 {
            // the walk cannot leave [lo, hi] within `room` steps
            let (k, d) = coin.bulk((room as u64).min(steps - t).min(64) as u32);
            t += k as u64;
            x += d;
        } else {
            t += 1;
            x += coin.step();
            hi = hi.max(x);
            lo = lo.min(x);
        }
    }
    (hi.min(clip), lo.max(-clip))
}

/// One particle's excursion during its lifetime.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Displacement {
    /// Maximal rightward displacement `D→`.
    pub right: u64,
    /// Maximal absolute displacement `D*`.
    pub star: u64,
    pub lifetime: u64,
    pub censored: bool,
}

/// Draw a lifetime for survival parameter `p`, then run that many steps of a
/// fresh walk. Randomness comes from the stream `(seed, rep)`; lifetimes are
/// clamped at `cap`.
pub fn simulate_displacement(law: &LifetimeLaw, p: f64, seed: u64, rep: u64, cap: u64) -> Result<Displacement> {
    law.validate()?;
    let mut stream = rng::stream(seed, &[tag::DISPLACEMENT, rep]);
    let u = rng::open01(&mut stream);
    let life = law.sample(p, u, cap)?;
    let mut coin = Coin::new(stream);
    let (hi, lo) = extremes(&mut coin, life.steps, i64::MAX);
    Ok(Displacement { right: hi as u64, star: hi.max(-lo) as u64, lifetime: life.steps, censored: life.censored })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    /// Exact path counts of walks that first reach `n` at step `k`, by
    /// dynamic programming over positions with absorption at `n`.
    fn dp_first_passage(n: u64, k_max: u64) -> Vec<f64> {
        let width = (2 * k_max + 2) as usize;
        let off = k_max as i64 + 1;
        let mut counts = vec![0u128; width];
        counts[off as usize] = 1;
        let mut out = vec![0.0; k_max as usize + 1];
        for k in 1..=k_max {
            let mut next = vec![0u128; width];
            for (i, &c) in counts.iter().enumerate() {
                if c == 0 {
                    continue;
                }
                next[i - 1] += c;
                next[i + 1] += c;
            }
            let target = (off + n as i64) as usize;
            out[k as usize] = next[target] as f64 * (-(k as f64)).exp2();
            next[target] = 0;
            counts = next;
        }
        out
    }

    #[test]
    fn pmf_matches_path_enumeration_exactly() {
        for n in 1..=6u64 {
            let dp = dp_first_passage(n, 24);
            let table = first_passage_pmf(n, 24).unwrap();
            for k in 1..=24u64 {
                assert_eq!(table.prob(k), dp[k as usize], "n={n} k={k}");
            }
        }
    }

    #[test]
    fn small_examples() {
        assert_eq!(first_passage_prob(1, 1), 0.5);
        assert_eq!(first_passage_prob(1, 3), 0.125);
        assert_eq!(first_passage_prob(2, 2), 0.25);
        assert_eq!(first_passage_prob(2, 4), 0.125);
        assert_eq!(first_passage_prob(2, 3), 0.0);
        for n in 1..40 {
            assert_eq!(first_passage_prob(n, n), (-(n as f64)).exp2());
        }
        assert_eq!(tau1_survival(1), 0.5);
        assert_eq!(tau1_survival(2), 0.5);
        assert!(first_passage_pmf(5, 4).is_err());
    }

    #[test]
    fn saddle_point_binomial_matches_exact_counts() {
        for k in [30u64, 77, 120] {
            for x in [0, 1, k / 3, k / 2, k - 1] {
                let exact = choose_u128(k, x) as f64 * (-(k as f64)).exp2();
                assert_relative_eq!(binom_half(x, k), exact, max_relative = 1e-14);
            }
        }
        // symmetric and normalized for a large k
        let k = 10_001u64;
        let total: f64 = (0..=k).map(|x| binom_half(x, k)).sum();
        assert_relative_eq!(total, 1.0, max_relative = 1e-12);
        assert_eq!(binom_half(10, k), binom_half(k - 10, k));
    }

    #[test]
    fn reflection_tail_matches_summation() {
        for &(n, k) in &[(1u64, 301u64), (3, 400), (10, 2000), (25, 1001)] {
            let table = first_passage_pmf(n, k).unwrap();
            assert!((table.total() + table.tail_mass() - 1.0).abs() < 1e-12, "n={n} k={k}");
        }
    }

    #[test]
    fn tau1_tail_constant() {
        let target = (2.0 / std::f64::consts::PI).sqrt();
        let v = tau1_survival(10_000) * 100.0;
        assert!((v - target).abs() <= 0.008);
        // exact central-binomial value C(10000, 5000) 2^{-10000}
        assert_relative_eq!(tau1_survival(10_000), 0.007_978_646_139_382_153_5, max_relative = 1e-12);
    }

    #[test]
    fn generating_function() {
        assert_eq!(gen_func(1.0).unwrap(), 1.0);
        assert_relative_eq!(gen_func(0.8).unwrap(), 0.5, max_relative = 1e-15);
        assert!(gen_func(0.0).is_err());
        let table = first_passage_pmf(1, 41).unwrap();
        let s: f64 = 0.8;
        let partial: f64 = table.iter().map(|(k, p)| p * s.powi(k as i32)).sum();
        assert!((partial - 0.5).abs() <= table.tail_mass() * s.powi(41));
        // tiny s without cancellation: f(s) ≈ s/2
        assert_relative_eq!(gen_func(1e-10).unwrap(), 5e-11, max_relative = 1e-15);
    }

    #[test]
    fn generating_function_partial_sums() {
        for n in [1u64, 2, 5] {
            for s in [0.5f64, 0.9, 0.99] {
                let k_max = 4000;
                let table = first_passage_pmf(n, k_max).unwrap();
                let partial: f64 = table.iter().map(|(k, p)| p * s.powf(k as f64)).sum();
                let target = gen_func(s).unwrap().powi(n as i32);
                let bound = table.tail_mass() * s.powf(k_max as f64) + 1e-13;
                assert!((partial - target).abs() <= bound, "n={n} s={s}: {partial} vs {target}");
            }
        }
    }

    #[test]
    fn tau2_is_self_convolution_of_tau1() {
        let k_max = 201;
        let t1 = first_passage_pmf(1, k_max).unwrap();
        let t2 = first_passage_pmf(2, k_max + 1).unwrap();
        for k in (2..=k_max + 1).step_by(2) {
            let conv: f64 = (1..k).step_by(2).map(|j| t1.prob(j) * t1.prob(k - j)).sum();
            assert!((conv - t2.prob(k)).abs() < 1e-15, "k={k}");
        }
    }

    #[test]
    fn nested_tables_agree() {
        let a = first_passage_pmf(4, 200).unwrap();
        let b = first_passage_pmf(4, 202).unwrap();
        for (k, p) in a.iter() {
            assert_eq!(p, b.prob(k));
        }
        assert!((a.tail_mass() - b.tail_mass() - b.prob(202)).abs() < 1e-15);
    }

    #[test]
    fn truncation_search() {
        let k = truncation_for(3, 1e-2).unwrap();
        assert!(passage_survival(3, k) <= 1e-2);
        assert!(passage_survival(3, k - 1) > 1e-2);
    }

    #[test]
    fn csv_export() {
        let mut buf = Vec::new();
        first_passage_pmf(1, 3).unwrap().write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text, "k,prob\n1,5e-1\n3,1.25e-1\n");
    }

    #[test]
    fn simulated_extremes_are_exact() {
        // bulk stepping must not change the extremes
        let mut fast = Coin::new(rng::stream(1, &[42]));
        let mut slow = Coin::new(rng::stream(1, &[42]));
        let (hi, lo) = extremes(&mut fast, 50_000, i64::MAX);
        let (mut x, mut h, mut l) = (0i64, 0i64, 0i64);
        for _ in 0..50_000 {
            x += slow.step();
            h = h.max(x);
            l = l.min(x);
        }
        assert_eq!((hi, lo), (h, l));

        let mut a = Coin::new(rng::stream(2, &[7]));
        let mut b = Coin::new(rng::stream(2, &[7]));
        let t = hit_time(&mut a, 1_000_000, 30);
        let mut x = 0i64;
        let mut naive = None;
        for s in 1..=1_000_000u64 {
            x += b.step();
            if x >= 30 {
                naive = Some(s);
                break;
            }
        }
        assert_eq!(t, naive);
    }

    #[test]
    fn displacement_ordering() {
        let law = LifetimeLaw::new(1.0).unwrap();
        for rep in 0..200 {
            let d = simulate_displacement(&law, 0.9, 5, rep, 1 << 20).unwrap();
            assert!(d.star >= d.right);
            if d.lifetime == 0 {
                assert_eq!((d.right, d.star), (0, 0));
            }
        }
    }
}
