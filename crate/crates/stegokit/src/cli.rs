//! Batch command-line front door.
//!
//! Every command is a pure function of its flags (plus the recorded seed):
//! re-running an identical invocation reproduces the report byte for byte.
//! Reports carry the tool version, the full resolved config, and the seed;
//! timestamps never appear. Output files are written atomically via a
//! temp-and-rename, so a failing run leaves no partial file behind.
//!
//! Exit codes: 0 pass, 1 verification/operation failure, 2 usage or I/O
//! error, 3 enumeration budget exceeded.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num::ToPrimitive;
use serde_json::json;

use crate::block::BlockCodec;
use crate::lab;
use crate::model::{
    parse_rational, parse_source_config, rational_str, write_subset_config, Alphabet, Bits,
    IidSource, ModelError, SecretProvider, Source, StegoCodec, SymbolString,
    DEFAULT_ENUMERATION_BUDGET,
};
use crate::pair::PairCodec;
use crate::verify::{
    measure_speed, monte_carlo_check, verify_perfect_security, ConstantCodec,
    FlippedDecoderCodec, IdentityCodec, VerifyError,
};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Parser)]
#[command(
    name = "stegokit",
    version,
    about = "Embed and extract secret bits in covertexts, verify perfect security exactly, and run decoder-complexity experiments"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Embed secret bits into covertext lines (one stegotext line each)
    Embed(EmbedArgs),
    /// Recover embedded bit strings from stegotext lines
    Extract(ExtractArgs),
    /// Exhaustively verify perfect security, round-trip, and speed
    Verify(VerifyArgs),
    /// Compute the exact transmission speed E[t]/n
    Speed(SpeedArgs),
    /// Monte Carlo chi-square check for sizes beyond exhaustive reach
    Montecarlo(MonteCarloArgs),
    /// Combinatorial experiments: bounds, closures, subsets, complexity
    #[command(subcommand)]
    Lab(LabCommand),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Json,
    Tsv,
}

#[derive(Debug, Args)]
pub struct CodecOpts {
    /// Codec: pair | block | identity | constant | flipdec | witness
    #[arg(long, default_value = "pair")]
    pub codec: String,
    /// Block length for the block codec
    #[arg(long, default_value_t = BlockCodec::DEFAULT_BLOCK_LEN)]
    pub block_len: usize,
}

#[derive(Debug, Args)]
pub struct EmbedArgs {
    #[command(flatten)]
    pub codec: CodecOpts,
    /// Alphabet symbols, in order (for parsing covertext lines)
    #[arg(long, default_value = "ab")]
    pub alphabet: String,
    /// File with one covertext line per protocol run
    #[arg(long)]
    pub covertext: PathBuf,
    /// Stegotext output file; a `<output>.meta.json` sidecar records the
    /// per-line embedded bit counts (sender-side only, never transmitted)
    #[arg(long)]
    pub output: PathBuf,
    /// File of '0'/'1' characters supplying the secret bits
    #[arg(long, group = "secret", required = true)]
    pub secret_file: Option<PathBuf>,
    /// Seed for a ChaCha8 secret-bit stream instead of a file
    #[arg(long, group = "secret")]
    pub seed: Option<u64>,
    /// Expected line length; checked against every covertext line
    #[arg(long)]
    pub n: Option<usize>,
}

#[derive(Debug, Args)]
pub struct ExtractArgs {
    #[command(flatten)]
    pub codec: CodecOpts,
    /// Alphabet symbols, in order
    #[arg(long, default_value = "ab")]
    pub alphabet: String,
    /// File of stegotext lines
    #[arg(long)]
    pub input: PathBuf,
    /// Where to write the recovered bit lines (stdout when omitted)
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub codec: CodecOpts,
    /// Source config path, or a builtin name: uniform2 | uniform3
    #[arg(long)]
    pub source: String,
    /// Covertext length
    #[arg(long)]
    pub n: usize,
    /// Enumeration budget (max strings swept)
    #[arg(long, default_value_t = DEFAULT_ENUMERATION_BUDGET)]
    pub budget: u64,
    /// Seed for witness-codec construction (subset sources only)
    #[arg(long)]
    pub seed: Option<u64>,
    /// Pair fraction for the witness codec, as p/q
    #[arg(long, default_value = "1")]
    pub pair_fraction: String,
    #[arg(long, value_enum, default_value_t = ReportFormat::Json)]
    pub format: ReportFormat,
    /// Report file (stdout when omitted)
    #[arg(long)]
    pub output: Option<PathBuf>,
}

pub type SpeedArgs = VerifyArgs;

#[derive(Debug, Args)]
pub struct MonteCarloArgs {
    #[command(flatten)]
    pub codec: CodecOpts,
    /// Source config path, or a builtin name: uniform2 | uniform3
    #[arg(long)]
    pub source: String,
    /// Covertext length
    #[arg(long)]
    pub n: usize,
    /// Number of sampled protocol runs
    #[arg(long, default_value_t = 100_000)]
    pub trials: u64,
    /// Seed for the sampling generators
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = ReportFormat::Json)]
    pub format: ReportFormat,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum LabCommand {
    /// Entropy-deficit exponent γ(δ) = 1 − H2((1−δ)/2)
    Gamma(GammaArgs),
    /// Exact log2-binomial vs. entropy bound, with relative gaps
    Bounds(BoundsArgs),
    /// Codeword sets and the encoder-image closure over a random subset
    Closure(ClosureArgs),
    /// Generate a seeded random subset source file
    Subset(SubsetArgs),
    /// Decoder description sizes under the pinned compressor
    Complexity(ComplexityArgs),
}

#[derive(Debug, Args)]
#[command(after_help = "TSV columns: delta, gamma (6 decimal places). A `# {json}` manifest \
line with the full config precedes the table.")]
pub struct GammaArgs {
    /// δ value(s), comma separated
    #[arg(long, value_delimiter = ',', required = true)]
    pub delta: Vec<f64>,
    #[arg(long, value_enum, default_value_t = ReportFormat::Tsv)]
    pub format: ReportFormat,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(after_help = "TSV columns: n, delta, exact_bits (log2 of the exact binomial), \
bound_bits (2^n * H2((1-delta)/2)), relative_gap (|exact-bound| / 2^n).")]
pub struct BoundsArgs {
    /// n values, comma separated
    #[arg(long, value_delimiter = ',', default_values_t = [6u32, 8, 10, 12])]
    pub n: Vec<u32>,
    /// δ values, comma separated
    #[arg(long, value_delimiter = ',', default_values_t = [0.25f64, 0.5, 0.75])]
    pub delta: Vec<f64>,
    #[arg(long, value_enum, default_value_t = ReportFormat::Tsv)]
    pub format: ReportFormat,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(after_help = "TSV columns: n, seed, subset_size, codewords, codewords_zero, \
codewords_one, start_size, iterations, fixpoint_size, fixpoint_is_universe, escaped, \
exact_speed (p/q). Exit code 0 iff the fixpoint equals the subset.")]
pub struct ClosureArgs {
    /// Subset exponent: the source is a random half of {a,b}^n
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Fraction of members drawn into pairs, as p/q
    #[arg(long, default_value = "1")]
    pub pair_fraction: String,
    #[arg(long, value_enum, default_value_t = ReportFormat::Tsv)]
    pub format: ReportFormat,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(after_help = "TSV columns: n, seed, size, entropy_bits. With --output the subset \
is written in the source-config format (`subset n=<n>` header, one member per line) and can \
feed `verify --source <file>`.")]
pub struct SubsetArgs {
    /// Subset exponent: draws 2^(n-1) members of {a,b}^n
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Where to write the subset source config (stdout report either way)
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = ReportFormat::Tsv)]
    pub format: ReportFormat,
}

#[derive(Debug, Args)]
#[command(after_help = "TSV columns: n, kind (random|structured), seed (- for structured), \
serialized_bytes (canonical decode table or rule text), proxy_bytes (size under the pinned \
compressor, recorded in the manifest). Proxy sizes stand in for an incomputable quantity and \
are only meaningful as trends.")]
pub struct ComplexityArgs {
    #[arg(long, default_value_t = 10)]
    pub n_min: usize,
    #[arg(long, default_value_t = 14)]
    pub n_max: usize,
    /// Seeds for the random-subset rows, comma separated
    #[arg(long, value_delimiter = ',', default_values_t = [1u64, 2, 3, 4, 5])]
    pub seeds: Vec<u64>,
    #[arg(long, value_enum, default_value_t = ReportFormat::Tsv)]
    pub format: ReportFormat,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum FailureKind {
    Operation,
    Usage,
    Budget,
}

#[derive(Debug)]
pub struct CliError {
    kind: FailureKind,
    message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        CliError {
            kind: FailureKind::Usage,
            message: message.into(),
        }
    }

    fn exit_code(&self) -> i32 {
        match self.kind {
            FailureKind::Operation => EXIT_FAILURE,
            FailureKind::Usage => EXIT_USAGE,
            FailureKind::Budget => EXIT_BUDGET,
        }
    }
}

impl From<ModelError> for CliError {
    fn from(e: ModelError) -> Self {
        let kind = match &e {
            ModelError::BudgetExceeded { .. } => FailureKind::Budget,
            ModelError::SecretsExhausted { .. } => FailureKind::Operation,
            _ => FailureKind::Usage,
        };
        CliError {
            kind,
            message: e.to_string(),
        }
    }
}

impl From<VerifyError> for CliError {
    fn from(e: VerifyError) -> Self {
        match e {
            VerifyError::Model(m) => m.into(),
            other => CliError {
                kind: FailureKind::Operation,
                message: other.to_string(),
            },
        }
    }
}

impl From<lab::LabError> for CliError {
    fn from(e: lab::LabError) -> Self {
        match e {
            lab::LabError::Model(m) => m.into(),
            lab::LabError::Verify(v) => v.into(),
            other => CliError {
                kind: FailureKind::Usage,
                message: other.to_string(),
            },
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError {
            kind: FailureKind::Usage,
            message: format!("i/o error: {e}"),
        }
    }
}

struct Outcome {
    /// Fully rendered report, printed to stdout or written to `--output`.
    payload: String,
    /// Destination for the payload; stdout when `None`.
    output: Option<PathBuf>,
    pass: bool,
}

/// Parses nothing itself: call with `Cli::parse()` from the binary. Returns
/// the process exit code.
pub fn run(cli: Cli) -> i32 {
    let result = match cli.command {
        Command::Embed(args) => cmd_embed(args),
        Command::Extract(args) => cmd_extract(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Speed(args) => cmd_speed(args),
        Command::Montecarlo(args) => cmd_montecarlo(args),
        Command::Lab(subcommand) => match subcommand {
            LabCommand::Gamma(args) => cmd_lab_gamma(args),
            LabCommand::Bounds(args) => cmd_lab_bounds(args),
            LabCommand::Closure(args) => cmd_lab_closure(args),
            LabCommand::Subset(args) => cmd_lab_subset(args),
            LabCommand::Complexity(args) => cmd_lab_complexity(args),
        },
    };
    match result {
        Ok(outcome) => {
            let delivered: Result<(), CliError> = match &outcome.output {
                Some(path) => write_atomic(path, outcome.payload.as_bytes()),
                None => std::io::stdout()
                    .write_all(outcome.payload.as_bytes())
                    .map_err(Into::into),
            };
            match delivered {
                Ok(()) if outcome.pass => EXIT_PASS,
                Ok(()) => EXIT_FAILURE,
                Err(e) => {
                    eprintln!("stegokit: {}", e.message);
                    e.exit_code()
                }
            }
        }
        Err(e) => {
            eprintln!("stegokit: {}", e.message);
            e.exit_code()
        }
    }
}

fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let file_name = path
        .file_name()
        .ok_or_else(|| CliError::usage(format!("invalid output path {}", path.display())))?;
    let tmp = path.with_file_name(format!(
        ".{}.tmp.{}",
        file_name.to_string_lossy(),
        std::process::id()
    ));
    fs::write(&tmp, bytes)?;
    fs::rename(&tmp, path).map_err(|e| {
        let _ = fs::remove_file(&tmp);
        CliError::from(e)
    })
}

fn parse_alphabet(spec: &str) -> Result<Arc<Alphabet>, CliError> {
    Ok(Alphabet::new(spec.chars())?)
}

fn resolve_source(spec: &str) -> Result<Source, CliError> {
    match spec {
        "uniform2" => Ok(Source::Iid(IidSource::uniform(Alphabet::binary()))),
        "uniform3" => Ok(Source::Iid(IidSource::uniform(Alphabet::ternary()))),
        path => {
            let text = fs::read_to_string(path).map_err(|e| {
                CliError::usage(format!("cannot read source config {path}: {e}"))
            })?;
            Ok(parse_source_config(&text)?)
        }
    }
}

fn build_codec(
    opts: &CodecOpts,
    alphabet: &Arc<Alphabet>,
    source: Option<&Source>,
    seed: Option<u64>,
    pair_fraction: &str,
) -> Result<Box<dyn StegoCodec>, CliError> {
    match opts.codec.as_str() {
        "pair" => Ok(Box::new(PairCodec::new(alphabet.clone())?)),
        "block" => Ok(Box::new(BlockCodec::new(alphabet.clone(), opts.block_len)?)),
        "identity" => Ok(Box::new(IdentityCodec::new(alphabet.clone()))),
        "constant" => Ok(Box::new(ConstantCodec::new(alphabet.clone()))),
        "flipdec" => Ok(Box::new(FlippedDecoderCodec::new(alphabet.clone())?)),
        "witness" => {
            let Some(Source::Subset(subset)) = source else {
                return Err(CliError::usage(
                    "the witness codec needs a subset source (see `lab subset`)",
                ));
            };
            let fraction = parse_rational(pair_fraction)?;
            let witness =
                lab::build_pairing_witness(subset, &fraction, seed.unwrap_or_default())?;
            Ok(Box::new(witness))
        }
        other => Err(CliError::usage(format!(
            "unknown codec {other:?} (expected pair, block, identity, constant, flipdec, or witness)"
        ))),
    }
}

fn json_envelope(command: &str, config: serde_json::Value, report: serde_json::Value) -> String {
    let doc = json!({
        "command": command,
        "config": config,
        "report": report,
        "tool_version": TOOL_VERSION,
    });
    format!("{:#}\n", doc)
}

fn tsv_manifest(command: &str, config: &serde_json::Value) -> String {
    format!(
        "# {}\n",
        json!({"command": command, "config": config, "tool_version": TOOL_VERSION})
    )
}

fn cmd_embed(args: EmbedArgs) -> Result<Outcome, CliError> {
    let alphabet = parse_alphabet(&args.alphabet)?;
    let text = fs::read_to_string(&args.covertext)
        .map_err(|e| CliError::usage(format!("cannot read covertext file: {e}")))?;
    let mut covertexts = Vec::new();
    for (index, line) in text.lines().enumerate() {
        let parsed = SymbolString::parse(&alphabet, line).map_err(|e| {
            CliError::usage(format!("covertext line {}: {e}", index + 1))
        })?;
        if let Some(n) = args.n {
            if parsed.len() != n {
                return Err(CliError::usage(format!(
                    "covertext line {} has length {}, expected n={n}",
                    index + 1,
                    parsed.len()
                )));
            }
        }
        covertexts.push(parsed);
    }

    let codec = build_codec(&args.codec, &alphabet, None, None, "1")?;
    let mut secrets = match (&args.secret_file, args.seed) {
        (Some(path), None) => {
            let raw = fs::read_to_string(path)
                .map_err(|e| CliError::usage(format!("cannot read secret file: {e}")))?;
            let compact: String = raw.chars().filter(|c| !c.is_whitespace()).collect();
            SecretProvider::from_bits(&Bits::from_str(&compact)?)
        }
        (None, Some(seed)) => SecretProvider::from_seed(seed),
        _ => return Err(CliError::usage("provide exactly one of --secret-file or --seed")),
    };

    // The secret sequence is one continuous stream across lines; exhaustion
    // aborts before anything is written.
    let mut stegotext_lines = String::new();
    let mut bits_per_line = Vec::with_capacity(covertexts.len());
    for covertext in &covertexts {
        let result = codec.encode(covertext, &mut secrets)?;
        bits_per_line.push(result.bits_embedded);
        let _ = writeln!(stegotext_lines, "{}", result.stegotext);
    }

    let config = json!({
        "alphabet": args.alphabet,
        "block_len": args.codec.block_len,
        "codec": args.codec.codec,
        "covertext": args.covertext.display().to_string(),
        "n": args.n,
        "output": args.output.display().to_string(),
        "secret_file": args.secret_file.as_ref().map(|p| p.display().to_string()),
        "seed": args.seed,
    });
    let total_bits: usize = bits_per_line.iter().sum();
    let report = json!({
        "lines": covertexts.len(),
        "bits_embedded_per_line": bits_per_line,
        "total_bits_embedded": total_bits,
    });

    write_atomic(&args.output, stegotext_lines.as_bytes())?;
    let sidecar = args.output.with_file_name(format!(
        "{}.meta.json",
        args.output.file_name().unwrap_or_default().to_string_lossy()
    ));
    let envelope = json_envelope("embed", config, report);
    write_atomic(&sidecar, envelope.as_bytes())?;

    Ok(Outcome {
        payload: envelope,
        output: None,
        pass: true,
    })
}

fn cmd_extract(args: ExtractArgs) -> Result<Outcome, CliError> {
    let alphabet = parse_alphabet(&args.alphabet)?;
    let codec = build_codec(&args.codec, &alphabet, None, None, "1")?;
    let text = fs::read_to_string(&args.input)
        .map_err(|e| CliError::usage(format!("cannot read input file: {e}")))?;
    let mut out = String::new();
    for (index, line) in text.lines().enumerate() {
        let stegotext = SymbolString::parse(&alphabet, line)
            .map_err(|e| CliError::usage(format!("input line {}: {e}", index + 1)))?;
        let bits = codec.decode(&stegotext)?;
        let _ = writeln!(out, "{bits}");
    }
    Ok(Outcome {
        payload: out,
        output: args.output,
        pass: true,
    })
}

fn verify_config(args: &VerifyArgs) -> serde_json::Value {
    json!({
        "block_len": args.codec.block_len,
        "budget": args.budget,
        "codec": args.codec.codec,
        "n": args.n,
        "pair_fraction": args.pair_fraction,
        "seed": args.seed,
        "source": args.source,
    })
}

fn cmd_verify(args: VerifyArgs) -> Result<Outcome, CliError> {
    let source = resolve_source(&args.source)?;
    let codec = build_codec(
        &args.codec,
        source.alphabet(),
        Some(&source),
        args.seed,
        &args.pair_fraction,
    )?;
    let report = verify_perfect_security(codec.as_ref(), &source, args.n, args.budget)?;
    let pass = report.secure && report.roundtrip_ok;
    let config = verify_config(&args);
    let payload = match args.format {
        ReportFormat::Json => json_envelope("verify", config, report.to_json()),
        ReportFormat::Tsv => {
            let mut out = tsv_manifest("verify", &config);
            out.push_str("codec\tsource\tn\tsecure\tmax_discrepancy\tworst_string\troundtrip_ok\texact_speed\n");
            let _ = writeln!(
                out,
                "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
                report.codec,
                report.source,
                report.n,
                report.secure,
                rational_str(&report.max_discrepancy),
                report
                    .worst_string
                    .as_ref()
                    .map_or_else(|| "-".to_string(), |s| s.to_string()),
                report.roundtrip_ok,
                rational_str(&report.exact_speed),
            );
            out
        }
    };
    Ok(Outcome {
        payload,
        output: args.output,
        pass,
    })
}

fn cmd_speed(args: SpeedArgs) -> Result<Outcome, CliError> {
    let source = resolve_source(&args.source)?;
    let codec = build_codec(
        &args.codec,
        source.alphabet(),
        Some(&source),
        args.seed,
        &args.pair_fraction,
    )?;
    let speed = measure_speed(codec.as_ref(), &source, args.n, args.budget)?;
    let config = verify_config(&args);
    let approx = speed.to_f64().unwrap_or(f64::NAN);
    let payload = match args.format {
        ReportFormat::Json => json_envelope(
            "speed",
            config,
            json!({
                "codec": codec.name(),
                "source": source.describe(),
                "n": args.n,
                "exact_speed": rational_str(&speed),
                "approx_speed": approx,
            }),
        ),
        ReportFormat::Tsv => {
            let mut out = tsv_manifest("speed", &config);
            out.push_str("codec\tsource\tn\texact_speed\tapprox_speed\n");
            let _ = writeln!(
                out,
                "{}\t{}\t{}\t{}\t{:.6}",
                codec.name(),
                source.describe(),
                args.n,
                rational_str(&speed),
                approx
            );
            out
        }
    };
    Ok(Outcome {
        payload,
        output: args.output,
        pass: true,
    })
}

fn cmd_montecarlo(args: MonteCarloArgs) -> Result<Outcome, CliError> {
    let source = resolve_source(&args.source)?;
    let codec = build_codec(&args.codec, source.alphabet(), Some(&source), None, "1")?;
    let report = monte_carlo_check(codec.as_ref(), &source, args.n, args.trials, args.seed)?;
    let pass = !report.rejected;
    let config = json!({
        "block_len": args.codec.block_len,
        "codec": args.codec.codec,
        "n": args.n,
        "seed": args.seed,
        "source": args.source,
        "trials": args.trials,
    });
    let payload = match args.format {
        ReportFormat::Json => json_envelope("montecarlo", config, report.to_json()),
        ReportFormat::Tsv => {
            let mut out = tsv_manifest("montecarlo", &config);
            out.push_str("codec\tsource\tn\ttrials\tseed\tchi_square\tdof\tp_value\trejected\tempirical_speed\tspeed_ci\n");
            let _ = writeln!(
                out,
                "{}\t{}\t{}\t{}\t{}\t{:.6}\t{}\t{:.6e}\t{}\t{:.6}\t{:.6}",
                report.codec,
                report.source,
                report.n,
                report.trials,
                report.seed,
                report.chi_square,
                report.degrees_of_freedom,
                report.p_value,
                report.rejected,
                report.empirical_speed,
                report.speed_ci_halfwidth,
            );
            out
        }
    };
    Ok(Outcome {
        payload,
        output: args.output,
        pass,
    })
}

fn cmd_lab_gamma(args: GammaArgs) -> Result<Outcome, CliError> {
    let mut rows = Vec::new();
    for &delta in &args.delta {
        rows.push((delta, lab::gamma(delta)?));
    }
    let config = json!({"delta": args.delta});
    let payload = match args.format {
        ReportFormat::Json => json_envelope(
            "lab gamma",
            config,
            json!(rows
                .iter()
                .map(|(d, g)| json!({"delta": d, "gamma": g}))
                .collect::<Vec<_>>()),
        ),
        ReportFormat::Tsv => {
            let mut out = tsv_manifest("lab gamma", &config);
            out.push_str("delta\tgamma\n");
            for (d, g) in rows {
                let _ = writeln!(out, "{d}\t{g:.6}");
            }
            out
        }
    };
    Ok(Outcome {
        payload,
        output: args.output,
        pass: true,
    })
}

fn cmd_lab_bounds(args: BoundsArgs) -> Result<Outcome, CliError> {
    let mut rows = Vec::new();
    for &n in &args.n {
        for &delta in &args.delta {
            rows.push(lab::stirling_bound_check(n, delta)?);
        }
    }
    let config = json!({"delta": args.delta, "n": args.n});
    let payload = match args.format {
        ReportFormat::Json => json_envelope(
            "lab bounds",
            config,
            json!(rows
                .iter()
                .map(|r| json!({
                    "n": r.n,
                    "delta": r.delta,
                    "exact_bits": r.exact_bits,
                    "bound_bits": r.bound_bits,
                    "relative_gap": r.relative_gap,
                }))
                .collect::<Vec<_>>()),
        ),
        ReportFormat::Tsv => {
            let mut out = tsv_manifest("lab bounds", &config);
            out.push_str("n\tdelta\texact_bits\tbound_bits\trelative_gap\n");
            for r in rows {
                let _ = writeln!(
                    out,
                    "{}\t{}\t{:.6}\t{:.6}\t{:.6}",
                    r.n, r.delta, r.exact_bits, r.bound_bits, r.relative_gap
                );
            }
            out
        }
    };
    Ok(Outcome {
        payload,
        output: args.output,
        pass: true,
    })
}

fn cmd_lab_closure(args: ClosureArgs) -> Result<Outcome, CliError> {
    let fraction = parse_rational(&args.pair_fraction)?;
    let source = lab::random_subset_source(args.n, args.seed)?;
    let witness = lab::build_pairing_witness(&source, &fraction, args.seed)?;
    let sets = lab::codeword_sets(&witness, source.members().iter().cloned())?;
    let universe = source.members().clone();
    let start: std::collections::BTreeSet<SymbolString> =
        universe.difference(&sets.one).cloned().collect();
    let bound = 1 + lab::max_bits_embedded(&witness, &universe, args.n)?;
    let result = lab::closure(&witness, &universe, &start, bound)?;
    let fixpoint_is_universe = result.fixpoint_is(&universe);
    let speed = witness.exact_speed(&source);

    let config = json!({
        "n": args.n,
        "pair_fraction": args.pair_fraction,
        "seed": args.seed,
    });
    let report = json!({
        "subset_size": source.len(),
        "codewords": sets.all.len(),
        "codewords_zero": sets.zero.len(),
        "codewords_one": sets.one.len(),
        "start_size": start.len(),
        "iterations": result.iterations,
        "sizes": result.sizes,
        "fixpoint_size": result.fixpoint.len(),
        "fixpoint_is_universe": fixpoint_is_universe,
        "escaped": result.escaped.len(),
        "exact_speed": rational_str(&speed),
    });
    let payload = match args.format {
        ReportFormat::Json => json_envelope("lab closure", config, report),
        ReportFormat::Tsv => {
            let mut out = tsv_manifest("lab closure", &config);
            out.push_str("n\tseed\tsubset_size\tcodewords\tcodewords_zero\tcodewords_one\tstart_size\titerations\tfixpoint_size\tfixpoint_is_universe\tescaped\texact_speed\n");
            let _ = writeln!(
                out,
                "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
                args.n,
                args.seed,
                source.len(),
                sets.all.len(),
                sets.zero.len(),
                sets.one.len(),
                start.len(),
                result.iterations,
                result.fixpoint.len(),
                fixpoint_is_universe,
                result.escaped.len(),
                rational_str(&speed),
            );
            out
        }
    };
    Ok(Outcome {
        payload,
        output: args.output,
        pass: fixpoint_is_universe,
    })
}

fn cmd_lab_subset(args: SubsetArgs) -> Result<Outcome, CliError> {
    let source = lab::random_subset_source(args.n, args.seed)?;
    if let Some(path) = &args.output {
        write_atomic(path, write_subset_config(&source).as_bytes())?;
    }
    let config = json!({
        "n": args.n,
        "output": args.output.as_ref().map(|p| p.display().to_string()),
        "seed": args.seed,
    });
    let report = json!({
        "size": source.len(),
        "entropy_bits": source.entropy_bits(),
    });
    let payload = match args.format {
        ReportFormat::Json => json_envelope("lab subset", config, report),
        ReportFormat::Tsv => {
            let mut out = tsv_manifest("lab subset", &config);
            out.push_str("n\tseed\tsize\tentropy_bits\n");
            let _ = writeln!(
                out,
                "{}\t{}\t{}\t{:.6}",
                args.n,
                args.seed,
                source.len(),
                source.entropy_bits()
            );
            out
        }
    };
    Ok(Outcome {
        payload,
        output: None,
        pass: true,
    })
}

fn cmd_lab_complexity(args: ComplexityArgs) -> Result<Outcome, CliError> {
    let rows = lab::decoder_description_experiment(args.n_min..=args.n_max, &args.seeds)?;
    let config = json!({
        "compressor": lab::COMPRESSOR_DESCRIPTION,
        "n_max": args.n_max,
        "n_min": args.n_min,
        "seeds": args.seeds,
    });
    let payload = match args.format {
        ReportFormat::Json => json_envelope(
            "lab complexity",
            config,
            json!(rows
                .iter()
                .map(|r| json!({
                    "n": r.n,
                    "kind": r.kind.label(),
                    "seed": r.seed,
                    "serialized_bytes": r.serialized_bytes,
                    "proxy_bytes": r.proxy_bytes,
                }))
                .collect::<Vec<_>>()),
        ),
        ReportFormat::Tsv => {
            let mut out = tsv_manifest("lab complexity", &config);
            out.push_str("n\tkind\tseed\tserialized_bytes\tproxy_bytes\n");
            for r in rows {
                let _ = writeln!(
                    out,
                    "{}\t{}\t{}\t{}\t{}",
                    r.n,
                    r.kind.label(),
                    r.seed.map_or_else(|| "-".to_string(), |s| s.to_string()),
                    r.serialized_bytes,
                    r.proxy_bytes
                );
            }
            out
        }
    };
    Ok(Outcome {
        payload,
        output: args.output,
        pass: true,
    })
}
