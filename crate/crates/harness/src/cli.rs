//! The `stego` command line.
//!
//! Errors are reported on standard error as a single line
//! `error kind=<kind> detail="<message>"`. Exit status is 2 for usage
//! errors, 3 when a protocol descriptor does not match and 1 otherwise.

use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use stego_core::{
    BitString, Framing, ProtocolDescriptor, SkipRules, StegoConfig, Stegosystem, StopwordList,
    WordPiece,
};

use crate::audit::audit_distortion;
use crate::backend::{load_backend, BackendSpec, LoadedBackend};
use crate::capacity::{measure_capacity, DEFAULT_MESSAGE_BITS};
use crate::corpus::Corpus;
use crate::sweep::{sweep, write_csv};

pub const EXIT_FAILURE: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_PROTOCOL: u8 = 3;

#[derive(Debug, Parser)]
#[command(name = "stego", version, about = "Hide bits in text by masked-LM token substitution")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Embed a message into a cover text
    Encode(EncodeArgs),
    /// Recover a message from a stego text
    Decode(DecodeArgs),
    /// Measure bits per word over a corpus
    Capacity(CapacityArgs),
    /// Count masked positions offering a candidate that breaks retokenization
    Audit(AuditArgs),
    /// Capacity and distortion over a grid of f and p values, as CSV
    Sweep(SweepArgs),
}

#[derive(Debug, Args)]
struct SystemArgs {
    /// table:<path>, hash:<seed> or model:<dir>
    #[arg(long)]
    backend: BackendSpec,
    #[arg(long)]
    vocab: Option<PathBuf>,
    /// Stopword list, one word per line [default: built-in English list]
    #[arg(long)]
    stopwords: Option<PathBuf>,

    #[arg(long, overrides_with = "no_skip_punct_num")]
    skip_punct_num: bool,
    #[arg(long, overrides_with = "skip_punct_num")]
    no_skip_punct_num: bool,
    #[arg(long, overrides_with = "no_skip_stopwords")]
    skip_stopwords: bool,
    #[arg(long, overrides_with = "skip_stopwords")]
    no_skip_stopwords: bool,
    #[arg(long, overrides_with = "no_skip_subwords")]
    skip_subwords: bool,
    #[arg(long, overrides_with = "skip_subwords")]
    no_skip_subwords: bool,
    #[arg(long, overrides_with = "no_skip_capitalized")]
    skip_capitalized: bool,
    #[arg(long, overrides_with = "skip_capitalized")]
    no_skip_capitalized: bool,
    #[arg(long, overrides_with = "fast_mode")]
    safe_mode: bool,
    #[arg(long, overrides_with = "safe_mode")]
    fast_mode: bool,
}

#[derive(Debug, Args)]
struct Point {
    /// Masking interval
    #[arg(long = "f", default_value_t = 3)]
    f: usize,
    /// Probability threshold
    #[arg(long = "p", default_value_t = 0.02)]
    p: f64,
}

#[derive(Debug, Args)]
struct EncodeArgs {
    #[command(flatten)]
    system: SystemArgs,
    #[command(flatten)]
    point: Point,
    /// Cover text file, `-` for standard input
    #[arg(long, default_value = "-")]
    input: PathBuf,
    #[arg(long)]
    message_hex: String,
    /// Message length [default: 4 bits per hex digit]
    #[arg(long)]
    message_bits: Option<usize>,
    /// Prepend a 32-bit length header instead of relying on --message-bits
    #[arg(long)]
    header_framing: bool,
    /// Write the protocol descriptor here
    #[arg(long)]
    descriptor_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct DecodeArgs {
    #[command(flatten)]
    system: SystemArgs,
    #[command(flatten)]
    point: Point,
    /// Stego text file, `-` for standard input
    #[arg(long, default_value = "-")]
    input: PathBuf,
    #[arg(long, required_unless_present = "header_framing")]
    message_bits: Option<usize>,
    #[arg(long)]
    header_framing: bool,
    /// Refuse to decode unless this descriptor matches the settings in use
    #[arg(long)]
    descriptor: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct CapacityArgs {
    #[command(flatten)]
    system: SystemArgs,
    #[command(flatten)]
    point: Point,
    /// Documents separated by blank lines
    #[arg(long)]
    corpus: PathBuf,
    #[arg(long, default_value_t = DEFAULT_MESSAGE_BITS)]
    message_bits: usize,
    /// Seed for the random messages
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Args)]
struct AuditArgs {
    #[command(flatten)]
    system: SystemArgs,
    #[command(flatten)]
    point: Point,
    #[arg(long)]
    corpus: PathBuf,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[command(flatten)]
    system: SystemArgs,
    #[arg(long = "f", value_delimiter = ',', default_value = "1,2,3,4,5,6,7,8")]
    f: Vec<usize>,
    #[arg(long = "p", value_delimiter = ',', default_value = "0.01,0.02,0.05,0.1")]
    p: Vec<f64>,
    #[arg(long)]
    corpus: PathBuf,
    #[arg(long, default_value_t = DEFAULT_MESSAGE_BITS)]
    message_bits: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug)]
enum Failure {
    Core(stego_core::Error),
    Usage(String),
    Output(String),
}

impl From<stego_core::Error> for Failure {
    fn from(e: stego_core::Error) -> Self {
        Failure::Core(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Output(e.to_string())
    }
}

fn switch(on: bool, off: bool, default: bool) -> bool {
    if on {
        true
    } else if off {
        false
    } else {
        default
    }
}

impl SystemArgs {
    fn skip(&self) -> SkipRules {
        let d = SkipRules::default();
        SkipRules {
            punct_or_number: switch(self.skip_punct_num, self.no_skip_punct_num, d.punct_or_number),
            stopwords: switch(self.skip_stopwords, self.no_skip_stopwords, d.stopwords),
            subwords: switch(self.skip_subwords, self.no_skip_subwords, d.subwords),
            capitalized: switch(self.skip_capitalized, self.no_skip_capitalized, d.capitalized),
        }
    }

    fn build(&self, f: usize, p: f64, framing: Framing) -> Result<(Stegosystem, LoadedBackend), Failure> {
        let config = StegoConfig::default()
            .with_interval(f)
            .with_threshold(p)
            .with_skip(self.skip())
            .with_safe_mode(switch(self.safe_mode, self.fast_mode, true))
            .with_framing(framing);
        let backend = load_backend(&self.backend, self.vocab.as_deref())?;
        let stopwords = match &self.stopwords {
            Some(path) => StopwordList::load(path)?,
            None => StopwordList::english(),
        };
        let system = Stegosystem::new(config, WordPiece::new(backend.vocab.clone()), Arc::new(stopwords))?;
        Ok((system, backend))
    }
}

fn read_input(path: &Path) -> Result<String, Failure> {
    if path == Path::new("-") {
        let mut text = String::new();
        std::io::stdin().read_to_string(&mut text)?;
        Ok(text)
    } else {
        std::fs::read_to_string(path).map_err(|e| {
            stego_core::Error::Io {
                path: path.to_owned(),
                source: e,
            }
            .into()
        })
    }
}

fn framing(header: bool, bits: usize) -> Framing {
    if header {
        Framing::Header
    } else {
        Framing::Fixed(bits)
    }
}

fn encode(args: EncodeArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let bits = args.message_bits.unwrap_or(args.message_hex.trim().len() * 4);
    let message = BitString::from_hex(&args.message_hex, bits)?;
    let (system, backend) = args
        .system
        .build(args.point.f, args.point.p, framing(args.header_framing, bits))?;
    let text = read_input(&args.input)?;
    let result = system.encode(&text, &message, backend.model.as_ref())?;
    if let Some(path) = &args.descriptor_out {
        let descriptor = ProtocolDescriptor::new(&system, backend.model.as_ref());
        std::fs::write(path, descriptor.to_string()).map_err(|e| stego_core::Error::Io {
            path: path.clone(),
            source: e,
        })?;
    }
    writeln!(out, "{}", result.stego_text)?;
    eprintln!(
        "bits_embedded={} padding_bits={} sentences_used={} positions_edited={}",
        result.bits_embedded, result.padding_bits, result.sentences_used, result.positions_edited
    );
    Ok(())
}

fn decode(args: DecodeArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let framing = framing(args.header_framing, args.message_bits.unwrap_or_default());
    let (system, backend) = args.system.build(args.point.f, args.point.p, framing)?;
    if let Some(path) = &args.descriptor {
        let expected = ProtocolDescriptor::load(path)?;
        expected.verify(&ProtocolDescriptor::new(&system, backend.model.as_ref()))?;
    }
    let text = read_input(&args.input)?;
    let message = system.decode(&text, backend.model.as_ref())?;
    writeln!(out, "len={} hex={}", message.len(), message.to_hex())?;
    Ok(())
}

fn capacity(args: CapacityArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let (system, backend) = args
        .system
        .build(args.point.f, args.point.p, Framing::Fixed(args.message_bits))?;
    let corpus = nonempty(Corpus::load(&args.corpus)?)?;
    let report = measure_capacity(&corpus, &system, backend.model.as_ref(), args.message_bits, args.seed)?;
    writeln!(out, "bits_per_word={:.6}", report.bits_per_word)?;
    writeln!(out, "message_bits={}", report.message_bits)?;
    writeln!(out, "words={}", report.words)?;
    writeln!(out, "positions_total={}", report.positions_total)?;
    writeln!(out, "positions_zero_capacity={}", report.positions_zero_capacity)?;
    writeln!(out, "documents_processed={}", report.documents_processed)?;
    writeln!(out, "documents_skipped={}", report.documents_skipped)?;
    Ok(())
}

fn audit(args: AuditArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let (system, backend) = args.system.build(args.point.f, args.point.p, Framing::Header)?;
    let corpus = nonempty(Corpus::load(&args.corpus)?)?;
    let report = audit_distortion(&corpus, &system, backend.model.as_ref())?;
    writeln!(out, "masked_positions={}", report.masked_positions)?;
    writeln!(out, "positions_with_unsafe_candidate={}", report.positions_with_unsafe_candidate)?;
    writeln!(out, "rate={:.6}", report.rate)?;
    Ok(())
}

fn run_sweep(args: SweepArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let f0 = args.f.first().copied();
    let p0 = args.p.first().copied();
    let (Some(f0), Some(p0)) = (f0, p0) else {
        return Err(Failure::Usage("--f and --p need at least one value each".into()));
    };
    let (system, backend) = args.system.build(f0, p0, Framing::Fixed(args.message_bits))?;
    let corpus = nonempty(Corpus::load(&args.corpus)?)?;
    let rows = sweep(&corpus, &system, backend.model.as_ref(), &args.f, &args.p, args.message_bits, args.seed);
    write_csv(out, &rows).map_err(|e| Failure::Output(e.to_string()))
}

fn nonempty(corpus: Corpus) -> Result<Corpus, Failure> {
    if corpus.is_empty() {
        Err(stego_core::Error::InvalidConfig("corpus has no documents".into()).into())
    } else {
        Ok(corpus)
    }
}

fn report(kind: &str, detail: &str) {
    eprintln!("error kind={kind} detail={detail:?}");
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit status.
pub fn main_with_args<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let detail = e.kind().to_string();
            let full = e.to_string();
            let first = full
                .lines()
                .next()
                .unwrap_or(&detail)
                .trim_start_matches("error: ")
                .to_owned();
            report("usage", &first);
            return ExitCode::from(EXIT_USAGE);
        }
    };
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let outcome = match cli.command {
        Command::Encode(a) => encode(a, &mut out),
        Command::Decode(a) => decode(a, &mut out),
        Command::Capacity(a) => capacity(a, &mut out),
        Command::Audit(a) => audit(a, &mut out),
        Command::Sweep(a) => run_sweep(a, &mut out),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(detail)) => {
            report("usage", &detail);
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Output(detail)) => {
            report("output", &detail);
            ExitCode::from(EXIT_FAILURE)
        }
        Err(Failure::Core(e)) => {
            report(e.kind(), &e.to_string());
            match e {
                stego_core::Error::ProtocolMismatch { .. } => ExitCode::from(EXIT_PROTOCOL),
                _ => ExitCode::from(EXIT_FAILURE),
            }
        }
    }
}
