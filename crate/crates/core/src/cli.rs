//! Command-line front end.
//!
//! Parameters come from flags, optionally backed by a JSON config file
//! (`--config`); flags win. CSV goes to `--out`, JSON to `--json`, and every
//! written file gets a `<stem>.manifest.json` beside it.

use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::asymptotics::{classify_phase, CriticalConstants};
use crate::distributions::{EdgeLaw, EtaLaw};
use crate::frog::{self, FrogConfig};
use crate::one_particle::{self, RatioMethod, TailRow};
use crate::verify::{self, Suite};
use crate::{Error, Result};

/// Config file schema version understood by this build.
pub const CONFIG_VERSION: u32 = 1;

#[derive(Debug, Parser)]
#[command(name = "frogwb", version, about = "Frog model on Z with discrete Weibull lifetimes")]
pub struct Cli {
    /// Write tabular output as CSV to this path.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Write structured output as JSON to this path.
    #[arg(long, global = true)]
    pub json: Option<PathBuf>,
    /// Master seed (default 0).
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Cap on worker threads.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// JSON file supplying defaults for any flag.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// One-particle tail P(D→ ≥ n).
    Tail(TailArgs),
    /// Normalized tail n P(D→ ≥ n) / (n^{1−2βγ} L(n^{2γ})).
    Ratio(TailArgs),
    /// Critical constants for (γ, β, c₀).
    Constants(ConstantsArgs),
    /// Extinction/survival verdict.
    Classify(ClassifyArgs),
    /// Batch of frog-model runs.
    Frog(FrogArgs),
    /// Survival frequencies over a (β, γ) grid with Beta(1, β) edges.
    Sweep(SweepArgs),
    /// Numerical checks.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct TailArgs {
    /// Levels, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub n: Option<Vec<u64>>,
    /// Edge law: beta:A,B | logcorr:D | trunc:CAP:<edge> | JSON.
    #[arg(long)]
    pub edge: Option<String>,
    #[arg(long)]
    pub gamma: Option<f64>,
    /// exact | mc | rb
    #[arg(long)]
    pub method: Option<String>,
    /// Absolute accuracy of the exact method (on the ratio scale for `ratio`).
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long)]
    pub reps: Option<u64>,
}

#[derive(Debug, Args)]
pub struct ConstantsArgs {
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub c0: Option<f64>,
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Shorthand for `--edge beta:1,BETA`.
    #[arg(long, conflicts_with = "edge")]
    pub beta: Option<f64>,
    #[arg(long)]
    pub edge: Option<String>,
    /// Occupation law: det:K | poisson:L | geom:Q | JSON.
    #[arg(long)]
    pub eta: Option<String>,
}

#[derive(Debug, Args)]
pub struct FrogArgs {
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long)]
    pub edge: Option<String>,
    #[arg(long)]
    pub eta: Option<String>,
    #[arg(long)]
    pub horizon: Option<u32>,
    #[arg(long)]
    pub reps: Option<u64>,
    /// Fixed particle count at the origin.
    #[arg(long)]
    pub origin_particles: Option<u32>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, value_delimiter = ',')]
    pub betas: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    pub gammas: Option<Vec<f64>>,
    #[arg(long)]
    pub eta: Option<String>,
    #[arg(long)]
    pub horizon: Option<u32>,
    #[arg(long)]
    pub reps: Option<u64>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// all | tau1 | laplace | superadd | berry | stable | fexp | potter | reduction | symmetry | sandwich
    #[arg(long)]
    pub suite: Option<String>,
}

/// A law given either in short syntax or as a JSON object.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum LawSpec<T> {
    Text(String),
    Object(T),
}

/// Contents of a `--config` file. A serialized [`FrogConfig`] is a valid
/// instance.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    version: Option<u32>,
    seed: Option<u64>,
    threads: Option<usize>,
    gamma: Option<f64>,
    beta: Option<f64>,
    c0: Option<f64>,
    edge: Option<LawSpec<EdgeLaw>>,
    eta: Option<LawSpec<EtaLaw>>,
    horizon: Option<u32>,
    reps: Option<u64>,
    origin_particles: Option<u32>,
    n: Option<Vec<u64>>,
    method: Option<String>,
    eps: Option<f64>,
    betas: Option<Vec<f64>>,
    gammas: Option<Vec<f64>>,
    suite: Option<String>,
}

impl FileConfig {
    fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        let cfg: FileConfig =
            serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        if let Some(v) = cfg.version {
            if v != CONFIG_VERSION {
                return Err(Error::Config(format!("config version {v} is not supported (expected {CONFIG_VERSION})")));
            }
        }
        Ok(cfg)
    }
}

fn law<T: FromStr<Err = Error> + DeserializeOwned>(flag: Option<&str>, file: Option<LawSpec<T>>) -> Result<Option<T>> {
    match (flag, file) {
        (Some(s), _) => s.parse().map(Some),
        (None, Some(LawSpec::Text(s))) => s.parse().map(Some),
        (None, Some(LawSpec::Object(v))) => Ok(Some(v)),
        (None, None) => Ok(None),
    }
}

fn required<T>(v: Option<T>, name: &str) -> Result<T> {
    v.ok_or_else(|| Error::Config(format!("missing required parameter --{name}")))
}

/// Provenance record written beside every output file.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub subcommand: String,
    /// FNV-1a hash of the resolved parameters, as hex.
    pub config_digest: String,
    pub seed: u64,
    pub tool_version: String,
    pub started_unix: f64,
    pub finished_unix: f64,
    pub config: Value,
}

fn fnv1a(bytes: &[u8]) -> u64 {
    bytes.iter().fold(0xcbf2_9ce4_8422_2325u64, |h, &b| (h ^ b as u64).wrapping_mul(0x0000_0100_0000_01b3))
}

fn now() -> f64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs_f64()).unwrap_or(0.0)
}

/// `path` with its extension replaced by `manifest.json`.
pub fn manifest_path(path: &Path) -> PathBuf {
    path.with_extension("manifest.json")
}

type CsvWriter = Box<dyn Fn(&mut dyn std::io::Write) -> Result<()>>;

/// What a subcommand produced.
struct Output {
    summary: String,
    csv: Option<CsvWriter>,
    json: Value,
    config: Value,
    failed: bool,
}

/// Exit status of [`run`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    VerificationFailed,
}

impl Status {
    pub fn code(self) -> u8 {
        match self {
            Status::Ok => 0,
            Status::VerificationFailed => 2,
        }
    }
}

/// Execute a parsed command line, printing the summary to stdout.
pub fn run(cli: Cli) -> Result<Status> {
    let started = now();
    let file = match &cli.config {
        Some(p) => FileConfig::load(p)?,
        None => FileConfig::default(),
    };
    let seed = cli.seed.or(file.seed).unwrap_or(0);
    if let Some(t) = cli.threads.or(file.threads) {
        if t == 0 {
            return Err(Error::Config("--threads must be at least 1".into()));
        }
        // a second call in the same process keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
    let (name, output) = match cli.command {
        Command::Tail(a) => ("tail", tail(a, file, seed, false)?),
        Command::Ratio(a) => ("ratio", tail(a, file, seed, true)?),
        Command::Constants(a) => ("constants", constants(a, file)?),
        Command::Classify(a) => ("classify", classify(a, file)?),
        Command::Frog(a) => ("frog", frog_runs(a, file, seed)?),
        Command::Sweep(a) => ("sweep", sweep(a, file, seed)?),
        Command::Verify(a) => ("verify", verify_suite(a, file, seed)?),
    };
    println!("{}", output.summary);

    let mut written = Vec::new();
    if let Some(path) = &cli.out {
        let write = output
            .csv
            .as_ref()
            .ok_or_else(|| Error::Config(format!("`{name}` has no tabular output; use --json")))?;
        let mut f = std::io::BufWriter::new(fs::File::create(path)?);
        write(&mut f)?;
        std::io::Write::flush(&mut f)?;
        written.push(path.clone());
    }
    if let Some(path) = &cli.json {
        fs::write(path, serde_json::to_string_pretty(&output.json)? + "\n")?;
        written.push(path.clone());
    }
    if !written.is_empty() {
        let manifest = RunManifest {
            subcommand: name.to_string(),
            config_digest: format!("{:016x}", fnv1a(output.config.to_string().as_bytes())),
            seed,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            started_unix: started,
            finished_unix: now(),
            config: output.config,
        };
        let text = serde_json::to_string_pretty(&manifest)? + "\n";
        for path in written {
            fs::write(manifest_path(&path), &text)?;
        }
    }
    Ok(if output.failed { Status::VerificationFailed } else { Status::Ok })
}

fn tail(a: TailArgs, file: FileConfig, seed: u64, ratio: bool) -> Result<Output> {
    let n_list = required(a.n.or(file.n), "n")?;
    let edge: EdgeLaw = required(law(a.edge.as_deref(), file.edge)?, "edge")?;
    let gamma = required(a.gamma.or(file.gamma), "gamma")?;
    let method = a.method.or(file.method).unwrap_or_else(|| "exact".into());
    let eps = a.eps.or(file.eps).unwrap_or(if ratio { 1e-3 } else { 1e-8 });
    let reps = a.reps.or(file.reps).unwrap_or(100_000);
    let config = json!({
        "n": n_list, "edge": edge, "gamma": gamma, "method": method,
        "eps": eps, "reps": reps, "seed": seed,
    });

    let rows: Vec<TailRow> = if ratio {
        let m = match method.as_str() {
            "exact" => RatioMethod::Exact { eps },
            "mc" => RatioMethod::DirectMc { reps },
            "rb" => RatioMethod::RaoBlackwell { reps },
            other => return Err(Error::Config(format!("unknown method {other:?}"))),
        };
        one_particle::ratio_curve(&n_list, &edge, gamma, m, seed)?.iter().map(TailRow::from).collect()
    } else {
        let profile = edge.profile().ok();
        n_list
            .iter()
            .map(|&n| {
                let tail = match method.as_str() {
                    "exact" => one_particle::tail_exact(n, &edge, gamma, eps)?,
                    "mc" => one_particle::tail_mc(n, &edge, gamma, reps, seed)?,
                    "rb" => one_particle::tail_rb(n, &edge, gamma, reps, seed)?,
                    other => return Err(Error::Config(format!("unknown method {other:?}"))),
                };
                let (beta, l_at) = match &profile {
                    Some((b, l)) => (Some(*b), Some(l.eval((n as f64).powf(2.0 * gamma)))),
                    None => (None, None),
                };
                Ok(TailRow { tail, gamma, beta, l_at_n2gamma: l_at, ratio: None })
            })
            .collect::<Result<_>>()?
    };
    let summary = rows
        .iter()
        .map(|r| match r.ratio {
            Some(q) => format!("n={} ratio={q:.6} tail={:.6e} ± {:.1e}", r.tail.n, r.tail.value, r.tail.err),
            None => format!("n={} tail={:.6e} ± {:.1e} ({})", r.tail.n, r.tail.value, r.tail.err, r.tail.method.label()),
        })
        .collect::<Vec<_>>()
        .join("\n");
    let json = serde_json::to_value(rows.iter().map(|r| json!({"estimate": r.tail, "ratio": r.ratio})).collect::<Vec<_>>())?;
    Ok(Output {
        summary,
        csv: Some(Box::new(move |w| one_particle::write_tail_csv(&rows, w))),
        json,
        config,
        failed: false,
    })
}

fn constants(a: ConstantsArgs, file: FileConfig) -> Result<Output> {
    let gamma = required(a.gamma.or(file.gamma), "gamma")?;
    let beta = required(a.beta.or(file.beta), "beta")?;
    let c0 = a.c0.or(file.c0).unwrap_or(1.0);
    let consts = CriticalConstants::compute(gamma, beta, c0)?;
    let json = serde_json::to_value(consts)?;
    Ok(Output {
        summary: serde_json::to_string_pretty(&json)?,
        csv: None,
        json,
        config: json!({"gamma": gamma, "beta": beta, "c0": c0}),
        failed: false,
    })
}

fn classify(a: ClassifyArgs, file: FileConfig) -> Result<Output> {
    let gamma = required(a.gamma.or(file.gamma), "gamma")?;
    let edge = match (a.beta, law(a.edge.as_deref(), file.edge)?, file.beta) {
        (Some(b), _, _) => EdgeLaw::beta(1.0, b),
        (None, Some(e), _) => e,
        (None, None, Some(b)) => EdgeLaw::beta(1.0, b),
        (None, None, None) => return Err(Error::Config("missing --edge or --beta".into())),
    };
    let eta: EtaLaw = required(law(a.eta.as_deref(), file.eta)?, "eta")?;
    edge.compile()?;
    let verdict = classify_phase(gamma, &edge.edge_class()?, eta.summary())?;
    let json = serde_json::to_value(&verdict)?;
    Ok(Output {
        summary: format!("{}: {}", verdict.verdict.label(), verdict.reason),
        csv: None,
        json,
        config: json!({"gamma": gamma, "edge": edge, "eta": eta}),
        failed: false,
    })
}

fn frog_config(a: FrogArgs, file: FileConfig, seed: u64) -> Result<FrogConfig> {
    let cfg = FrogConfig {
        gamma: a.gamma.or(file.gamma).unwrap_or(1.0),
        edge: law(a.edge.as_deref(), file.edge)?.unwrap_or(EdgeLaw::beta(1.0, 1.0)),
        eta: law(a.eta.as_deref(), file.eta)?.unwrap_or(EtaLaw::Deterministic { k: 1 }),
        horizon: a.horizon.or(file.horizon).unwrap_or(1000),
        reps: a.reps.or(file.reps).unwrap_or(100),
        seed,
        origin_particles: a.origin_particles.or(file.origin_particles),
    };
    cfg.validate()?;
    Ok(cfg)
}

fn frog_runs(a: FrogArgs, file: FileConfig, seed: u64) -> Result<Output> {
    let cfg = frog_config(a, file, seed)?;
    let runs = frog::run_all(&cfg)?;
    let survived = runs.iter().filter(|r| r.survived()).count() as u64;
    let (lo, hi) = frog::wilson_interval(survived, cfg.reps);
    let summary = format!(
        "{survived}/{} runs alive at T={} (estimate {:.4}, 95% CI [{lo:.4}, {hi:.4}])",
        cfg.reps,
        cfg.horizon,
        survived as f64 / cfg.reps as f64
    );
    let json = json!({"config": cfg, "survived": survived, "ci_low": lo, "ci_high": hi, "runs": runs});
    Ok(Output {
        summary,
        csv: Some(Box::new(move |w| frog::write_runs_csv(&runs, w))),
        json,
        config: serde_json::to_value(&cfg)?,
        failed: false,
    })
}

fn sweep(a: SweepArgs, file: FileConfig, seed: u64) -> Result<Output> {
    let betas = a.betas.or(file.betas.clone()).unwrap_or_else(|| vec![0.2, 0.5, 1.0, 2.0]);
    let gammas = a.gammas.or(file.gammas.clone()).unwrap_or_else(|| vec![0.5, 1.0, 2.0]);
    let frog_args =
        FrogArgs { gamma: None, edge: None, eta: a.eta, horizon: a.horizon, reps: a.reps, origin_particles: None };
    let base = frog_config(frog_args, file, seed)?;
    let rows = frog::phase_sweep(&betas, &gammas, &base)?;
    let summary = rows
        .iter()
        .map(|r| {
            format!(
                "beta={} gamma={}: {}/{} alive, CI [{:.4}, {:.4}], verdict {}",
                r.beta,
                r.gamma,
                r.survived,
                r.reps,
                r.ci_low,
                r.ci_high,
                r.verdict.label()
            )
        })
        .collect::<Vec<_>>()
        .join("\n");
    let json = serde_json::to_value(&rows)?;
    let config = json!({"betas": betas, "gammas": gammas, "eta": base.eta, "horizon": base.horizon, "reps": base.reps, "seed": seed});
    Ok(Output { summary, csv: Some(Box::new(move |w| frog::write_sweep_csv(&rows, w))), json, config, failed: false })
}

fn verify_suite(a: VerifyArgs, file: FileConfig, seed: u64) -> Result<Output> {
    let name = a.suite.or(file.suite).unwrap_or_else(|| "all".into());
    let suite: Suite = name.parse()?;
    let results = verify::run_suite(suite, seed);
    let failed = results.iter().any(|r| !r.passed);
    let passed = results.iter().filter(|r| r.passed).count();
    let mut summary: Vec<String> = results.iter().map(|r| r.to_string()).collect();
    summary.push(format!("{passed}/{} checks passed", results.len()));
    Ok(Output {
        summary: summary.join("\n"),
        csv: None,
        json: serde_json::to_value(&results)?,
        config: json!({"suite": name, "seed": seed}),
        failed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Cli {
        Cli::try_parse_from(std::iter::once("frogwb").chain(args.iter().copied())).unwrap()
    }

    #[test]
    fn constants_json() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("c.json");
        let cli = parse(&["constants", "--gamma", "1", "--beta", "0.5", "--c0", "1", "--json", out.to_str().unwrap()]);
        assert_eq!(run(cli).unwrap(), Status::Ok);
        let v: Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
        assert_eq!(v["beta_c"], 0.5);
        assert!((v["K_up"].as_f64().unwrap() - 2.0).abs() < 1e-12);
        for key in ["K_down", "K_down_sup", "c0_star", "theta"] {
            assert!(v.get(key).is_some(), "{key}");
        }
        let m: Value = serde_json::from_str(&fs::read_to_string(manifest_path(&out)).unwrap()).unwrap();
        assert_eq!(m["subcommand"], "constants");
        assert_eq!(m["seed"], 0);
    }

    #[test]
    fn classify_beta_shorthand() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("v.json");
        let cli = parse(&["classify", "--gamma", "2", "--beta", "0.3", "--eta", "det:1", "--json", out.to_str().unwrap()]);
        run(cli).unwrap();
        let v: Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
        assert_eq!(v["verdict"], "ExtinctAS");
    }

    #[test]
    fn unknown_flag_rejected() {
        assert!(Cli::try_parse_from(["frogwb", "constants", "--bogus", "1"]).is_err());
    }

    #[test]
    fn config_file_and_override() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = dir.path().join("cfg.json");
        fs::write(&cfg, r#"{"version": 1, "gamma": 1.0, "edge": "beta:1,1", "n": [1, 2], "method": "exact"}"#).unwrap();
        let out = dir.path().join("t.csv");
        let cli = parse(&["tail", "--config", cfg.to_str().unwrap(), "--n", "3", "--out", out.to_str().unwrap()]);
        run(cli).unwrap();
        let text = fs::read_to_string(&out).unwrap();
        assert!(text.starts_with("n,value,err,method,beta,gamma,L_at_n2gamma,ratio\n"));
        assert_eq!(text.lines().count(), 2);
        assert!(text.lines().nth(1).unwrap().starts_with("3,"));

        fs::write(&cfg, r#"{"version": 7}"#).unwrap();
        assert!(run(parse(&["constants", "--config", cfg.to_str().unwrap()])).is_err());
        fs::write(&cfg, r#"{"gamma": 1.0, "colour": 3}"#).unwrap();
        assert!(run(parse(&["constants", "--config", cfg.to_str().unwrap()])).is_err());
    }

    #[test]
    fn frog_config_file_accepted() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = dir.path().join("frog.json");
        let fc = FrogConfig {
            gamma: 1.0,
            edge: EdgeLaw::beta(1.0, 2.0),
            eta: EtaLaw::Deterministic { k: 1 },
            horizon: 50,
            reps: 5,
            seed: 9,
            origin_particles: None,
        };
        fs::write(&cfg, serde_json::to_string(&fc).unwrap()).unwrap();
        let out = dir.path().join("runs.csv");
        run(parse(&["frog", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()])).unwrap();
        let text = fs::read_to_string(&out).unwrap();
        assert_eq!(text.lines().count(), 6);
        let m: Value = serde_json::from_str(&fs::read_to_string(manifest_path(&out)).unwrap()).unwrap();
        assert_eq!(m["seed"], 9);
    }

    #[test]
    fn verify_failure_status() {
        assert_eq!(run(parse(&["verify", "--suite", "tau1"])).unwrap(), Status::Ok);
        assert!(run(parse(&["verify", "--suite", "nope"])).is_err());
    }

    #[test]
    fn csv_refused_without_table() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("c.csv");
        let cli = parse(&["constants", "--gamma", "1", "--beta", "0.5", "--out", out.to_str().unwrap()]);
        assert!(run(cli).is_err());
    }
}
