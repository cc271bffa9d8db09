use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

use rlk_core::analysis::{run_experiment, Experiment};
use rlk_core::estimator::{algebraic_costs, combinatorial_costs, scheme_security, RsdInstance};
use rlk_core::pkc::{decode_plaintext, encode_plaintext, keygen, Ciphertext, PublicKey, SchemeParams, SecretKey};
use rlk_core::Error;

mod selftest;

#[derive(Parser)]
#[command(name = "rlk", version, about = "Rank-metric public-key encryption with semilinear masking")]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a keypair.
    Keygen {
        /// P128, P192, P256 or toy:q,m,k
        #[arg(long)]
        params: SchemeParams,
        /// Hex seed (up to 32 bytes); random if omitted.
        #[arg(long)]
        seed: Option<String>,
        #[arg(long = "pub")]
        public: PathBuf,
        #[arg(long = "sec")]
        secret: PathBuf,
    },
    /// Encrypt a bit-packed plaintext of k elements of F_{q^m}.
    Encrypt {
        #[arg(long = "pub")]
        public: PathBuf,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        seed: Option<String>,
    },
    Decrypt {
        #[arg(long = "sec")]
        secret: PathBuf,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Attack-cost estimates for a parameter set or a single RSD instance.
    Estimate {
        #[arg(long, required_unless_present = "rsd")]
        params: Option<SchemeParams>,
        /// q,m,n,k,t
        #[arg(long)]
        rsd: Option<RsdInstance>,
        #[arg(long)]
        csv: Option<PathBuf>,
        /// JSON lines output
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Structural experiments.
    Analyze {
        /// distinguisher, census, nullity or equivclass
        #[arg(long)]
        experiment: Experiment,
        #[arg(long)]
        params: SchemeParams,
        #[arg(long, default_value_t = 10)]
        trials: usize,
        #[arg(long)]
        seed: Option<String>,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Run the toy-parameter checks end to end.
    Selftest,
}

enum Failure {
    Usage(String),
    Data(String),
    Crypto(String),
    Check(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Data(_) => 3,
            Failure::Crypto(_) => 4,
            Failure::Check(_) => 1,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Data(m) | Failure::Crypto(m) | Failure::Check(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidCiphertext | Error::DecodingFailure { .. } => Failure::Crypto("invalid ciphertext".into()),
            Error::Params(_) => Failure::Usage(e.to_string()),
            other => Failure::Data(other.to_string()),
        }
    }
}

type Outcome = Result<(), Failure>;

fn read(path: &Path) -> Result<Vec<u8>, Failure> {
    fs::read(path).map_err(|e| Failure::Data(format!("cannot read {}: {e}", path.display())))
}

fn write(path: &Path, bytes: &[u8]) -> Outcome {
    fs::write(path, bytes).map_err(|e| Failure::Data(format!("cannot write {}: {e}", path.display())))
}

/// Hex seed zero-padded to 32 bytes, or fresh entropy.
fn seed_bytes(seed: Option<&str>) -> Result<[u8; 32], Failure> {
    let Some(s) = seed else {
        return Ok(rand::random());
    };
    let raw = hex::decode(s).map_err(|e| Failure::Usage(format!("bad --seed: {e}")))?;
    if raw.len() > 32 {
        return Err(Failure::Usage("--seed is limited to 32 bytes".into()));
    }
    let mut out = [0u8; 32];
    out[..raw.len()].copy_from_slice(&raw);
    Ok(out)
}

fn rng(seed: Option<&str>) -> Result<ChaCha20Rng, Failure> {
    Ok(ChaCha20Rng::from_seed(seed_bytes(seed)?))
}

fn run(cmd: Command) -> Outcome {
    match cmd {
        Command::Keygen { params, seed, public, secret } => {
            let (pk, sk) = keygen(params, &mut rng(seed.as_deref())?)?;
            let pk_bytes = pk.to_bytes();
            write(&public, &pk_bytes)?;
            write(&secret, &sk.to_bytes())?;
            println!("parameters: {params} (q={}, m={}, n={}, k={}, t={})", params.q(), params.m(), params.n(), params.k(), params.t());
            println!("public key: {} bytes", pk.payload().len());
            println!("secret key: {} bytes", sk.payload().len());
        }
        Command::Encrypt { public, input, out, seed } => {
            let pk = PublicKey::from_bytes(&read(&public)?)?;
            let p = pk.params();
            let pt = read(&input)?;
            if pt.len() != p.plaintext_bytes() {
                return Err(Failure::Data(format!(
                    "plaintext must be k·m bits: {} bits ({} bytes) for {p}, got {} bytes",
                    p.k() * p.m() * p.q_log() as usize,
                    p.plaintext_bytes(),
                    pt.len()
                )));
            }
            let x = decode_plaintext(p, &pt)?;
            let ct = pk.encrypt(&x, &mut rng(seed.as_deref())?)?;
            write(&out, &ct.to_bytes())?;
        }
        Command::Decrypt { secret, input, out } => {
            let sk = SecretKey::from_bytes(&read(&secret)?)?;
            let ct = Ciphertext::from_bytes(&read(&input)?)?;
            if ct.params() != sk.params() {
                return Err(Failure::Data(format!("ciphertext is for {}, key is for {}", ct.params(), sk.params())));
            }
            let x = sk.decrypt(&ct)?;
            write(&out, &encode_plaintext(sk.params(), &x)?)?;
        }
        Command::Estimate { params, rsd, csv, json } => {
            if let Some(inst) = rsd {
                println!("RSD {inst}");
                for a in combinatorial_costs(&inst).into_iter().chain(algebraic_costs(&inst)) {
                    let cost = a.log2_cost.map_or_else(|| "n/a".to_string(), |v| format!("{v:.2}"));
                    println!("  {:<26} {cost:>10}  {}", a.attack, a.condition);
                }
            }
            if let Some(p) = params {
                let report = scheme_security(p);
                print!("{report}");
                if let Some(path) = csv {
                    let mut buf = Vec::new();
                    report.write_csv(&mut buf)?;
                    write(&path, &buf)?;
                }
                if let Some(path) = json {
                    let mut buf = Vec::new();
                    report.write_json_lines(&mut buf)?;
                    write(&path, &buf)?;
                }
            }
        }
        Command::Analyze { experiment, params, trials, seed, csv } => {
            let report = run_experiment(experiment, params, trials, &mut rng(seed.as_deref())?)?;
            print!("{report}");
            if let Some(path) = csv {
                let mut buf = Vec::new();
                report.write_csv(&mut buf)?;
                write(&path, &buf)?;
            }
        }
        Command::Selftest => {
            let failed = selftest::run();
            if failed > 0 {
                return Err(Failure::Check(format!("{failed} self-test check(s) failed")));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
