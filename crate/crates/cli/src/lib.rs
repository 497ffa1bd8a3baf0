//! The `convmc` command-line tool: key generation, encryption, decryption and
//! parameter analysis, plus the binary file formats they exchange.

pub mod format;
pub mod message;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use convmc::analysis::{parameter_table, security_report, table_csv, table_text, AnalysisError, Mode, SecurityReport};
use convmc::crypto::{decrypt, encrypt, encrypt_alternative, sample_error, CryptoError, ErrorPattern, Schedule};
use convmc::keygen::{keygen, KeyParams, KeygenError};
use convmc::laurent::BlockSequence;
use convmc::{Ciphertext, Field};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use thiserror::Error;

use crate::format::FormatError;
use crate::message::MessageError;

pub const SEED_ENV: &str = "CONVMC_SEED";

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_CRYPTO: i32 = 2;
pub const EXIT_FORMAT: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Keygen(#[from] KeygenError),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
    #[error(transparent)]
    Crypto(#[from] CryptoError),
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error(transparent)]
    Message(#[from] MessageError),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Keygen(_) | CliError::Analysis(_) => EXIT_USAGE,
            CliError::Crypto(_) | CliError::Message(_) => EXIT_CRYPTO,
            CliError::Format(_) | CliError::Io { .. } => EXIT_FORMAT,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "convmc", version, about = "McEliece-type encryption over convolutional codes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a key pair.
    Keygen(KeygenArgs),
    /// Encrypt a file.
    Encrypt(EncryptArgs),
    /// Decrypt a file.
    Decrypt(DecryptArgs),
    /// Print work factors and key sizes.
    Analyze(AnalyzeArgs),
}

#[derive(Debug, Args)]
pub struct CodeArgs {
    /// Field order, a prime or a power of two.
    #[arg(long)]
    pub q: u32,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub k: usize,
    #[arg(long)]
    pub mu: usize,
    #[arg(long)]
    pub nu: usize,
    /// Diagonal entry counts d_-mu .. d_mu, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    pub d: Vec<usize>,
    /// Number of diagonal blocks of S(D); 1 means dense.
    #[arg(long)]
    pub s_blocks: Option<usize>,
}

#[derive(Debug, Args)]
pub struct KeygenArgs {
    #[command(flatten)]
    pub code: CodeArgs,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Truncation parameter recorded in the public key.
    #[arg(long)]
    pub sigma: Option<usize>,
    #[arg(long = "pub")]
    pub public: PathBuf,
    #[arg(long = "sec")]
    pub secret: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EncMode {
    Full,
    Alt,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScheduleArg {
    Even,
    Greedy,
    Periodic,
}

impl From<ScheduleArg> for Schedule {
    fn from(s: ScheduleArg) -> Schedule {
        match s {
            ScheduleArg::Even => Schedule::Even,
            ScheduleArg::Greedy => Schedule::GreedyMax,
            ScheduleArg::Periodic => Schedule::Periodic,
        }
    }
}

#[derive(Debug, Args)]
pub struct EncryptArgs {
    #[arg(long = "pub")]
    pub public: PathBuf,
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long = "out")]
    pub output: PathBuf,
    #[arg(long, value_enum, default_value_t = EncMode::Full)]
    pub mode: EncMode,
    /// Overrides the truncation parameter stored in the key.
    #[arg(long)]
    pub sigma: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_enum, default_value_t = ScheduleArg::Even)]
    pub schedule: ScheduleArg,
}

#[derive(Debug, Args)]
pub struct DecryptArgs {
    #[arg(long = "sec")]
    pub secret: PathBuf,
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long = "out")]
    pub output: PathBuf,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    /// Print the built-in parameter table instead of a single report.
    #[arg(long, conflicts_with_all = ["q", "n", "k", "mu", "nu", "d", "s", "sigma"])]
    pub table: bool,
    /// With --table, print CSV.
    #[arg(long, requires = "table")]
    pub csv: bool,
    #[arg(long, required_unless_present = "table")]
    pub q: Option<u32>,
    #[arg(long, required_unless_present = "table")]
    pub n: Option<usize>,
    #[arg(long, required_unless_present = "table")]
    pub k: Option<usize>,
    #[arg(long, required_unless_present = "table")]
    pub mu: Option<usize>,
    #[arg(long, required_unless_present = "table")]
    pub nu: Option<usize>,
    #[arg(long, value_delimiter = ',', required_unless_present = "table")]
    pub d: Vec<usize>,
    /// Message blocks minus one, full mode.
    #[arg(long, conflicts_with = "sigma")]
    pub s: Option<usize>,
    /// Truncation parameter, alternative mode.
    #[arg(long)]
    pub sigma: Option<usize>,
    #[arg(long)]
    pub s_blocks: Option<usize>,
}

/// Splits `q` into `(p, m)`.
pub fn split_order(q: u32) -> Result<(u32, u32), CliError> {
    let f = Field::with_order(q).map_err(|e| CliError::Usage(format!("field order {q}: {e}")))?;
    Ok((f.characteristic(), f.degree()))
}

fn params_from(q: u32, n: usize, k: usize, mu: usize, nu: usize, d: Vec<usize>, s_blocks: Option<usize>) -> Result<KeyParams, CliError> {
    let (p, m) = split_order(q)?;
    let mut params = KeyParams::new(p, m, n, k, mu, nu, d);
    if let Some(r) = s_blocks {
        params = params.with_s_blocks(r);
    }
    params.validate()?;
    Ok(params)
}

fn resolve_seed(flag: Option<u64>) -> Result<u64, CliError> {
    if let Some(s) = flag {
        return Ok(s);
    }
    match std::env::var(SEED_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("{SEED_ENV}={v:?} is not an integer"))),
        Err(_) => Ok(rand::rng().next_u64()),
    }
}

fn read_file(path: &Path) -> Result<Vec<u8>, CliError> {
    fs::read(path).map_err(|source| CliError::Io { path: path.to_owned(), source })
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    fs::write(path, bytes).map_err(|source| CliError::Io { path: path.to_owned(), source })
}

fn cmd_keygen(a: KeygenArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let c = a.code;
    let params = params_from(c.q, c.n, c.k, c.mu, c.nu, c.d, c.s_blocks)?.with_seed(resolve_seed(a.seed)?);
    let (sk, pk) = keygen(&params)?;
    let pk = pk.with_sigma(a.sigma);
    write_file(&a.public, &format::write_public(&pk)?)?;
    write_file(&a.secret, &format::write_secret(&sk)?)?;
    let _ = writeln!(
        out,
        "public key {} bits, t = {}, window budget = {}",
        pk.size_bits(),
        params.t(),
        params.err_budget()
    );
    Ok(())
}

fn cmd_encrypt(a: EncryptArgs) -> Result<(), CliError> {
    let mut pk = format::read_public(&read_file(&a.public)?)?;
    let data = read_file(&a.input)?;
    let mut rng = ChaCha20Rng::seed_from_u64(resolve_seed(a.seed)?);
    let bits = pk.field().symbol_bits();
    let blocks = message::pack(&data, bits, pk.k())?;
    let schedule = Schedule::from(a.schedule);
    let n = pk.n();
    let ct = match a.mode {
        EncMode::Full => {
            let u = BlockSequence::new(pk.k(), blocks);
            let e: ErrorPattern = sample_error(&pk, u.len() + pk.memory(), schedule, &mut rng);
            encrypt(&pk, &u, &e)?
        }
        EncMode::Alt => {
            if a.sigma.is_some() {
                pk = pk.with_sigma(a.sigma);
            }
            let sigma = pk.sigma().ok_or(CryptoError::MissingSigma)?;
            // One frame per sigma + 1 message blocks, frames concatenated.
            let mut frames = Vec::new();
            for chunk in blocks.chunks(sigma + 1) {
                let mut chunk = chunk.to_vec();
                chunk.resize(sigma + 1, vec![0; pk.k()]);
                let u = BlockSequence::new(pk.k(), chunk);
                frames.extend(encrypt_alternative(&pk, &u, schedule, &mut rng)?.blocks().blocks().iter().cloned());
            }
            Ciphertext::new(BlockSequence::new(n, frames), Some(sigma))
        }
    };
    write_file(&a.output, &format::write_ciphertext(&pk, &ct)?)
}

fn cmd_decrypt(a: DecryptArgs) -> Result<(), CliError> {
    let sk = format::read_secret(&read_file(&a.secret)?)?;
    let (header, ct) = format::read_ciphertext(&read_file(&a.input)?)?;
    let k = sk.code().k();
    if usize::from(header.n) != sk.code().n() || usize::from(header.k) != k || header.field()? != *sk.field() {
        return Err(FormatError::BadHeader { field: "n/k/q", value: u64::from(header.n) }.into());
    }
    let blocks = match ct.sigma() {
        None => decrypt(&sk, &ct)?.into_blocks(),
        Some(sigma) => {
            let frame = 2 * sk.mu() + sigma + 1;
            if ct.is_empty() || ct.len() % frame != 0 {
                return Err(CryptoError::BlockCount { expected: frame, got: ct.len() }.into());
            }
            let mut blocks = Vec::new();
            for chunk in ct.blocks().blocks().chunks(frame) {
                let part = Ciphertext::new(BlockSequence::new(sk.code().n(), chunk.to_vec()), Some(sigma));
                blocks.extend(decrypt(&sk, &part)?.into_blocks());
            }
            blocks
        }
    };
    let data = message::unpack(&blocks, sk.field().symbol_bits(), k)?;
    write_file(&a.output, &data)
}

fn print_report(out: &mut dyn Write, r: &SecurityReport) {
    let _ = match r.mode {
        Mode::Full { s } => writeln!(out, "mode: full, s = {s}"),
        Mode::Alternative { sigma } => writeln!(out, "mode: alternative, sigma = {sigma}"),
    };
    if let Some(wf) = r.wf_full {
        let _ = writeln!(out, "work factor (full rank): 2^{:.3} at p = {}, l = {}", wf.log2, wf.p, wf.l);
    }
    let z = &r.sizes;
    let _ = writeln!(out, "work factor (truncated): 2^{:.0}", r.wf_truncated);
    let _ = writeln!(out, "log2 #T >= {:.2}", r.count_t_log2);
    let _ = writeln!(out, "log2 #S = {:.2}", r.count_s_log2);
    let _ = writeln!(out, "public key: {} bits", z.pub_key);
    let _ = writeln!(out, "private key (dense): {} bits", z.priv_dense);
    let _ = writeln!(out, "private key (compact): {} bits", z.priv_compact);
    match r.mode {
        Mode::Full { .. } => {
            let _ = writeln!(out, "ciphertext: {} bits", z.msg);
        }
        Mode::Alternative { .. } => {
            let _ = writeln!(out, "ciphertext: {} bits for {} plaintext bits (rate {:.4})", z.alt_msg, z.alt_plain, z.alt_rate);
        }
    }
}

fn cmd_analyze(a: AnalyzeArgs, out: &mut dyn Write) -> Result<(), CliError> {
    if a.table {
        let rows = parameter_table()?;
        let text = if a.csv { table_csv(&rows) } else { table_text(&rows) };
        let _ = write!(out, "{text}");
        return Ok(());
    }
    let missing = || CliError::Usage("missing code parameters".into());
    let params = params_from(
        a.q.ok_or_else(missing)?,
        a.n.ok_or_else(missing)?,
        a.k.ok_or_else(missing)?,
        a.mu.ok_or_else(missing)?,
        a.nu.ok_or_else(missing)?,
        a.d,
        a.s_blocks,
    )?;
    let mode = match (a.s, a.sigma) {
        (_, Some(sigma)) => Mode::Alternative { sigma },
        (s, None) => Mode::Full { s: s.unwrap_or(0) },
    };
    print_report(out, &security_report(&params, mode)?);
    Ok(())
}

pub fn execute(cli: Cli, out: &mut dyn Write) -> Result<(), CliError> {
    match cli.command {
        Command::Keygen(a) => cmd_keygen(a, out),
        Command::Encrypt(a) => cmd_encrypt(a),
        Command::Decrypt(a) => cmd_decrypt(a),
        Command::Analyze(a) => cmd_analyze(a, out),
    }
}

/// Parses `args` (including the program name) and runs the command, returning
/// the process exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() { write!(err, "{rendered}") } else { write!(out, "{rendered}") };
            return code;
        }
    };
    match execute(cli, out) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
