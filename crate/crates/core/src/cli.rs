//! The `stanley` command line.
//!
//! [`dispatch`] parses arguments, runs one subcommand, writes its primary output
//! to the given writer (or to `--out`), and returns the process exit code.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::analyzer::{certify_with, repeat_structure_check, scaling_decomposition, CertifyOptions, DEFAULT_KMAX};
use crate::constructor::{adk, product, product_alpha, CertifiedSeed, MAX_CERTIFY_HORIZON};
use crate::error::{Error, Result};
use crate::growth::classify_growth;
use crate::oracle::{check_cover_claim, check_main_prefix, oracle_equivalence, CoverClaim, CoverPart};
use crate::search::{ChainCaps, ChainSearch};
use crate::seq::{obstruction_set, GeneratedSequence, SeedSet, SieveConfig};
use crate::triadic::Triadic;

/// Default RNG seed for `verify oracle`.
pub const DEFAULT_RNG_SEED: u64 = 20_130_917;

#[derive(Debug, Parser)]
#[command(name = "stanley", version, about = "Stanley sequences: generation, certificates, constructions")]
struct Cli {
    /// Write the primary output here instead of stdout; a run manifest is written
    /// next to it as FILE.manifest.json.
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Write the run manifest to this path.
    #[arg(long, global = true, value_name = "FILE")]
    manifest: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the first terms of S(seed).
    Generate {
        #[arg(long)]
        seed: SeedSet,
        #[arg(long)]
        count: usize,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Certify S(seed) and report its scaling decomposition and repeat structure.
    Analyze {
        #[arg(long)]
        seed: SeedSet,
        #[arg(long)]
        horizon: usize,
        #[arg(long, default_value_t = DEFAULT_KMAX)]
        kmax: u32,
        /// Only json is supported; accepted for symmetry with `generate`.
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Report the obstruction set O(seed) and its maximum.
    Omega {
        #[arg(long)]
        seed: SeedSet,
    },
    /// Build a product or A^d_k seed.
    #[command(subcommand)]
    Construct(ConstructCommand),
    /// Search for a construction chain from {0}.
    #[command(subcommand)]
    Search(SearchCommand),
    /// Run a brute-force validator.
    #[command(subcommand)]
    Verify(VerifyCommand),
    /// Heuristic Type 1 / Type 2 growth classification.
    Classify {
        #[arg(long)]
        seed: SeedSet,
        #[arg(long)]
        count: usize,
    },
    /// Re-run the command recorded in a manifest and compare outputs byte for byte.
    Rerun {
        #[arg(long = "from", value_name = "MANIFEST")]
        from: PathBuf,
    },
}

#[derive(Debug, Subcommand)]
enum ConstructCommand {
    /// seed_a ⊗_k seed_b.
    Product {
        #[arg(long)]
        seed_a: SeedSet,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        seed_b: SeedSet,
    },
    /// seed^d_k.
    Adk {
        #[arg(long)]
        seed: SeedSet,
        #[arg(long)]
        k: u32,
        #[arg(long, allow_negative_numbers = true)]
        d: i64,
    },
}

#[derive(Debug, Subcommand)]
enum SearchCommand {
    /// Chain ending at scaling factor ALPHA (p/3^e or p/q with q a power of 3).
    Scaling {
        #[arg(long)]
        alpha: Triadic,
        #[arg(long)]
        max_depth: Option<usize>,
    },
    /// Chain of A^d_k steps ending at repeat factor RHO.
    Repeat {
        #[arg(long)]
        rho: u64,
        #[arg(long)]
        max_depth: Option<usize>,
    },
}

#[derive(Debug, Args)]
struct CoverArgs {
    #[arg(long)]
    seed: SeedSet,
    #[arg(long)]
    k: u32,
    #[arg(long)]
    part: CoverPart,
    #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
    x: i64,
    #[arg(long, allow_negative_numbers = true)]
    y: Option<i64>,
}

#[derive(Debug, Subcommand)]
enum VerifyCommand {
    /// One instance of the cover lemma.
    Cover(CoverArgs),
    /// The sixteen-block prefix of S(seed^d_k).
    MainPrefix {
        #[arg(long)]
        seed: SeedSet,
        #[arg(long)]
        k: u32,
        #[arg(long, allow_negative_numbers = true)]
        d: i64,
    },
    /// Sieve generation against the naive definition on random seeds.
    Oracle {
        #[arg(long)]
        trials: usize,
        #[arg(long)]
        max_seed_value: u64,
        #[arg(long)]
        terms: usize,
        #[arg(long, default_value_t = DEFAULT_RNG_SEED)]
        rng_seed: u64,
    },
}

/// Record of one run, written as JSON next to the outputs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    /// Subcommand path, e.g. `search scaling`.
    pub command: String,
    /// Every `--flag value` pair of the invocation, defaults included.
    pub parameters: BTreeMap<String, String>,
    pub versions: String,
    pub outputs: Vec<String>,
    /// Wall-clock seconds.
    pub timing: f64,
}

/// Primary output of a subcommand and whether its check passed.
struct Outcome {
    body: Vec<u8>,
    /// `false` makes the run exit with the inconsistency code.
    ok: bool,
    /// Parameters filled in from defaults.
    defaults: Vec<(&'static str, String)>,
}

impl Outcome {
    fn json(value: &impl Serialize) -> Result<Self> {
        let mut body = serde_json::to_vec_pretty(value).map_err(|e| Error::Inconsistency(e.to_string()))?;
        body.push(b'\n');
        Ok(Outcome {
            body,
            ok: true,
            defaults: Vec::new(),
        })
    }

    fn check(mut self, ok: bool) -> Self {
        self.ok = ok;
        self
    }
}

fn sieve_config() -> Result<SieveConfig> {
    SieveConfig::from_env()
}

fn generate_env(seed: &SeedSet, count: usize) -> Result<GeneratedSequence> {
    GeneratedSequence::generate_with(seed, count, sieve_config()?)
}

/// A certified seed whose sequence has at least `min_terms` terms.
fn certified_with_terms(seed: &SeedSet, min_terms: usize) -> Result<CertifiedSeed> {
    let mut c = CertifiedSeed::materialize(seed, MAX_CERTIFY_HORIZON)?;
    if c.seq.len() < min_terms {
        c.seq.extend(min_terms - c.seq.len())?;
    }
    Ok(c)
}

fn run_generate(seed: &SeedSet, count: usize, format: Format) -> Result<Outcome> {
    let seq = generate_env(seed, count)?;
    match format {
        Format::Csv => {
            let mut body = String::from("index,value\n");
            for (i, v) in seq.terms().iter().enumerate() {
                body.push_str(&format!("{i},{v}\n"));
            }
            Ok(Outcome {
                body: body.into_bytes(),
                ok: true,
                defaults: Vec::new(),
            })
        }
        Format::Json => Outcome::json(&json!({ "seed": seed, "terms": seq.terms() })),
    }
}

fn run_analyze(seed: &SeedSet, horizon: usize, kmax: u32) -> Result<Outcome> {
    let seq = generate_env(seed, horizon)?;
    let omega = seq.obstruction().omega;
    let cert = certify_with(&seq, omega, CertifyOptions { kmax })?;
    let (decomposition, repeat) = match &cert {
        Some(c) => (
            Some(scaling_decomposition(&seq, c)?),
            Some(repeat_structure_check(&seq, c)),
        ),
        None => (None, None),
    };
    Outcome::json(&json!({
        "certificate": cert,
        "decomposition": decomposition,
        "repeat_structure": repeat,
    }))
}

fn run_construct(cmd: &ConstructCommand) -> Result<Outcome> {
    match cmd {
        ConstructCommand::Product { seed_a, k, seed_b } => {
            let a = certified_with_terms(seed_a, (1usize << k) + 1)?;
            let b = CertifiedSeed::materialize(seed_b, MAX_CERTIFY_HORIZON)?;
            let seed = product(&a.seq, &a.cert, *k, seed_b)?;
            Outcome::json(&json!({
                "seed": seed,
                "k": k,
                "predicted_alpha": product_alpha(&a.cert, &b.cert),
            }))
        }
        ConstructCommand::Adk { seed, k, d } => {
            let a = certified_with_terms(seed, (1usize << k) + 1)?;
            Outcome::json(&adk(&a.seq, &a.cert, a.omega(), *k, *d)?)
        }
    }
}

fn run_search(cmd: &SearchCommand) -> Result<Outcome> {
    let mut caps = ChainCaps::default();
    let (chain, depth) = match cmd {
        SearchCommand::Scaling { alpha, max_depth } => {
            caps.max_depth = max_depth.unwrap_or(caps.max_depth);
            (ChainSearch::new(caps).target_scaling(*alpha)?, caps.max_depth)
        }
        SearchCommand::Repeat { rho, max_depth } => {
            caps.max_depth = max_depth.unwrap_or(caps.max_depth);
            (ChainSearch::new(caps).target_repeat(*rho)?, caps.max_depth)
        }
    };
    let mut out = Outcome::json(&chain)?;
    out.defaults.push(("max-depth", depth.to_string()));
    Ok(out)
}

fn run_verify(cmd: &VerifyCommand) -> Result<Outcome> {
    match cmd {
        VerifyCommand::Cover(args) => {
            let a = certified_with_terms(&args.seed, 4 << args.k)?;
            let claim = CoverClaim {
                part: args.part,
                x: args.x,
                y: args.y,
            };
            let c = a.seq.terms()[1 << args.k];
            let expected = claim.expected_set(c)?;
            let pass = check_cover_claim(&a.seq, &a.cert, args.k, &claim)?;
            Ok(Outcome::json(&json!({
                "claim": claim,
                "k": args.k,
                "c": c,
                "expected_set": expected,
                "pass": pass,
            }))?
            .check(pass))
        }
        VerifyCommand::MainPrefix { seed, k, d } => {
            let a = certified_with_terms(seed, (1usize << k) + 1)?;
            let pass = check_main_prefix(&a.seq, &a.cert, a.omega(), *k, *d)?;
            Ok(Outcome::json(&json!({ "seed": seed, "k": k, "d": d, "pass": pass }))?.check(pass))
        }
        VerifyCommand::Oracle {
            trials,
            max_seed_value,
            terms,
            rng_seed,
        } => {
            let report = oracle_equivalence(*rng_seed, *trials, *max_seed_value, *terms)?;
            let pass = report.passed();
            let mut out = Outcome::json(&json!({ "report": report, "pass": pass }))?.check(pass);
            out.defaults.push(("rng-seed", rng_seed.to_string()));
            Ok(out)
        }
    }
}

fn command_name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Generate { .. } => "generate",
        Command::Analyze { .. } => "analyze",
        Command::Omega { .. } => "omega",
        Command::Construct(ConstructCommand::Product { .. }) => "construct product",
        Command::Construct(ConstructCommand::Adk { .. }) => "construct adk",
        Command::Search(SearchCommand::Scaling { .. }) => "search scaling",
        Command::Search(SearchCommand::Repeat { .. }) => "search repeat",
        Command::Verify(VerifyCommand::Cover(_)) => "verify cover",
        Command::Verify(VerifyCommand::MainPrefix { .. }) => "verify main-prefix",
        Command::Verify(VerifyCommand::Oracle { .. }) => "verify oracle",
        Command::Classify { .. } => "classify",
        Command::Rerun { .. } => "rerun",
    }
}

fn execute(cmd: &Command) -> Result<Outcome> {
    match cmd {
        Command::Generate { seed, count, format } => run_generate(seed, *count, *format),
        Command::Analyze { seed, horizon, kmax, .. } => run_analyze(seed, *horizon, *kmax),
        Command::Omega { seed } => Outcome::json(&obstruction_set(seed)),
        Command::Construct(c) => run_construct(c),
        Command::Search(s) => run_search(s),
        Command::Verify(v) => run_verify(v),
        Command::Classify { seed, count } => Outcome::json(&classify_growth(&generate_env(seed, *count)?)?),
        Command::Rerun { from } => run_rerun(from),
    }
}

/// `--flag value` pairs of the invocation, without the global output options.
fn collect_parameters(argv: &[String]) -> BTreeMap<String, String> {
    let mut params = BTreeMap::new();
    let mut i = 0;
    while i < argv.len() {
        if let Some(flag) = argv[i].strip_prefix("--") {
            let (name, value, step) = match flag.split_once('=') {
                Some((n, v)) => (n.to_string(), v.to_string(), 1),
                None => match argv.get(i + 1) {
                    Some(v) if !v.starts_with("--") => (flag.to_string(), v.clone(), 2),
                    _ => (flag.to_string(), "true".to_string(), 1),
                },
            };
            if name != "out" && name != "manifest" {
                params.insert(name, value);
            }
            i += step;
        } else {
            i += 1;
        }
    }
    params
}

fn manifest_path(out: Option<&Path>, explicit: Option<&Path>) -> Option<PathBuf> {
    explicit.map(Path::to_path_buf).or_else(|| {
        out.map(|o| {
            let mut name = o.as_os_str().to_owned();
            name.push(".manifest.json");
            PathBuf::from(name)
        })
    })
}

fn io_error(path: &Path, e: std::io::Error) -> Error {
    Error::Input(format!("{}: {e}", path.display()))
}

/// Rebuilds the argument list recorded in a manifest.
fn manifest_argv(m: &RunManifest) -> Vec<String> {
    let mut argv = vec!["stanley".to_string()];
    argv.extend(m.command.split(' ').map(str::to_string));
    for (k, v) in &m.parameters {
        argv.push(format!("--{k}={v}"));
    }
    argv
}

fn run_rerun(from: &Path) -> Result<Outcome> {
    let text = std::fs::read_to_string(from).map_err(|e| io_error(from, e))?;
    let manifest: RunManifest =
        serde_json::from_str(&text).map_err(|e| Error::Input(format!("{}: {e}", from.display())))?;
    if manifest.command == "rerun" {
        return Err(Error::Input("a rerun manifest cannot be rerun".into()));
    }
    let argv = manifest_argv(&manifest);
    let cli = Cli::try_parse_from(&argv).map_err(|e| Error::Input(e.to_string()))?;
    let fresh = execute(&cli.command)?;
    let mut compared = Vec::new();
    let mut identical = true;
    for output in &manifest.outputs {
        let path = Path::new(output);
        let old = std::fs::read(path).map_err(|e| io_error(path, e))?;
        let same = old == fresh.body;
        identical &= same;
        compared.push(json!({ "path": output, "identical": same }));
    }
    Ok(Outcome::json(&json!({
        "command": manifest.command,
        "outputs": compared,
        "identical": identical,
    }))?
    .check(identical))
}

/// Runs the command line `argv` (program name first) and returns the exit code.
///
/// Primary output goes to `stdout` unless `--out` is given; errors and usage go
/// to `stderr`.
pub fn dispatch<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<String> = argv
        .into_iter()
        .map(|a| a.into().to_string_lossy().into_owned())
        .collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let target: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    let started = Instant::now();
    let outcome = match execute(&cli.command) {
        Ok(o) => o,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return e.exit_code();
        }
    };

    let mut outputs = Vec::new();
    let written = match &cli.out {
        Some(path) => {
            outputs.push(path.display().to_string());
            std::fs::write(path, &outcome.body).map_err(|e| io_error(path, e))
        }
        None => stdout
            .write_all(&outcome.body)
            .map_err(|e| Error::Resource {
                completed: 0,
                reason: e.to_string(),
            }),
    };
    if let Err(e) = written {
        let _ = writeln!(stderr, "error: {e}");
        return e.exit_code();
    }

    if let Some(path) = manifest_path(cli.out.as_deref(), cli.manifest.as_deref()) {
        let mut parameters = collect_parameters(&argv[1..]);
        for (k, v) in &outcome.defaults {
            parameters.entry(k.to_string()).or_insert_with(|| v.clone());
        }
        let manifest = RunManifest {
            command: command_name(&cli.command).to_string(),
            parameters,
            versions: format!("stanley {}", env!("CARGO_PKG_VERSION")),
            outputs,
            timing: started.elapsed().as_secs_f64(),
        };
        let body = serde_json::to_vec_pretty(&manifest).expect("manifest serializes");
        if let Err(e) = std::fs::write(&path, body) {
            let _ = writeln!(stderr, "error: {}", io_error(&path, e));
            return 1;
        }
    }

    if outcome.ok {
        0
    } else {
        let _ = writeln!(stderr, "check failed");
        4
    }
}
