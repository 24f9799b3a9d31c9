//! `mor`: key generation, encryption, decryption, attack and benchmarks for
//! MOR over UT(n, p).

mod pack;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand};
use num_bigint::BigUint;

use mor_core::attack::{break_mor, AttackReport};
use mor_core::dlp::{Solver, SolverConfig};
use mor_core::ff::factor_poly;
use mor_core::linalg::char_poly;
use mor_core::morsys::{
    decrypt, encrypt, keygen, message_from_json, message_to_json, Ciphertext, KeyFamily,
    PrivateKey, PublicKey,
};
use mor_core::utgroup::{GroupParams, UtElement};
use mor_core::{Error, SplitMix64};

#[derive(Parser)]
#[command(name = "mor", version, about = "MOR cryptosystem over UT(n, p) and its Frattini-quotient attack")]
struct Cli {
    /// Seed for the SplitMix64 generator.
    #[arg(long, global = true, env = "MOR_SEED", default_value_t = 0)]
    seed: u64,
    /// Extra diagnostics on stderr.
    #[arg(long, global = true)]
    verbose: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ParamArgs {
    #[arg(long, default_value_t = 4)]
    n: usize,
    #[arg(long, default_value_t = 10007)]
    p: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a key pair.
    Keygen {
        #[command(flatten)]
        params: ParamArgs,
        /// diagonal, conjugation, diagonal-flip, flip or mixed.
        #[arg(long, default_value = "mixed")]
        family: String,
        #[arg(long = "pub", default_value = "public.json")]
        public: PathBuf,
        #[arg(long = "priv", default_value = "private.json")]
        private: PathBuf,
    },
    /// Encrypt a message file, a random element, or packed bytes.
    Encrypt {
        #[arg(long = "pub", default_value = "public.json")]
        public: PathBuf,
        /// Message file.
        #[arg(long = "in", conflicts_with_all = ["random_message", "pack_bytes"])]
        input: Option<PathBuf>,
        /// Encrypt a uniformly random element drawn from the seed.
        #[arg(long)]
        random_message: bool,
        /// Pack this string's bytes into the message (length-prefixed, base p).
        #[arg(long)]
        pack_bytes: Option<String>,
        /// Also write the plaintext message file here.
        #[arg(long)]
        message_out: Option<PathBuf>,
        #[arg(long, default_value = "ciphertext.json")]
        out: PathBuf,
    },
    /// Decrypt a ciphertext file.
    Decrypt {
        #[arg(long = "priv", default_value = "private.json")]
        private: PathBuf,
        #[arg(long = "in", default_value = "ciphertext.json")]
        input: PathBuf,
        #[arg(long, default_value = "message.json")]
        out: PathBuf,
        /// Print the packed bytes carried by the message.
        #[arg(long)]
        unpack_bytes: bool,
    },
    /// Recover the private exponent from a public key and decrypt ciphertexts.
    Attack {
        #[arg(long = "pub", default_value = "public.json")]
        public: PathBuf,
        /// Ciphertext files to decrypt (repeatable).
        #[arg(long = "in")]
        inputs: Vec<PathBuf>,
        #[arg(long, default_value = "attack_report.json")]
        out: PathBuf,
        #[arg(long, default_value = "ph")]
        solver: String,
        /// Largest group order (or prime factor, for ph) a DLP may attack.
        #[arg(long)]
        solver_ceiling: Option<BigUint>,
        #[arg(long, hide = true)]
        test_hook_known_m: Option<BigUint>,
    },
    /// Median timings over a parameter grid, as TSV.
    Bench {
        /// Comma-separated dimensions.
        #[arg(long, value_delimiter = ',', default_value = "3,4,5")]
        n: Vec<usize>,
        /// Comma-separated primes.
        #[arg(long, value_delimiter = ',', default_value = "10007")]
        p: Vec<u64>,
        #[arg(long, default_value_t = 5)]
        reps: usize,
        #[arg(long, default_value = "ph")]
        solver: String,
    },
}

/// An error with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Self { code, message: message.into() }
    }

    fn params(e: Error) -> Self {
        let message = match e {
            Error::Validation(m) if m == "p not prime" => "p not an odd prime".to_string(),
            Error::Validation(m) => m,
            other => other.to_string(),
        };
        Self::new(2, message)
    }

    fn io(path: &Path, e: std::io::Error) -> Self {
        Self::new(3, format!("{}: {e}", path.display()))
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse { .. }
            | Error::Validation(_)
            | Error::MalformedCiphertext(_)
            | Error::ParamsMismatch
            | Error::NonInvertibleInducedMap
            | Error::InvalidInput(_) => 4,
            Error::ResourceLimit(_) => 5,
            Error::Inconsistent(_) | Error::EigenvectorMismatch(_) | Error::NoSolution(_) => 6,
            _ => 1,
        };
        Self::new(code, e.to_string())
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| Failure::io(path, e))
}

/// Writes through a temporary file in the target directory, then renames.
fn write_atomic(path: &Path, contents: &str) -> CliResult<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| Failure::io(path, e))?;
    tmp.write_all(contents.as_bytes()).map_err(|e| Failure::io(path, e))?;
    tmp.persist(path).map_err(|e| Failure::io(path, e.error))?;
    Ok(())
}

fn parse_params(args: &ParamArgs) -> CliResult<GroupParams> {
    GroupParams::new(args.n, args.p).map_err(Failure::params)
}

fn solver_config(solver: &str, ceiling: Option<BigUint>) -> CliResult<SolverConfig> {
    let solver: Solver = solver.parse().map_err(|e: Error| Failure::new(2, e.to_string()))?;
    let config = SolverConfig::new(solver);
    Ok(match ceiling {
        Some(c) => config.with_ceiling(c),
        None => config,
    })
}

fn factor_summary(pk: &PublicKey) -> String {
    let a = pk.phi().induced_map();
    let f = factor_poly(&char_poly(&a), &mut SplitMix64::new(0));
    f.factors
        .iter()
        .map(|(g, e)| {
            let d = g.degree().unwrap_or(0);
            if *e == 1 {
                format!("({g}) [deg {d}]")
            } else {
                format!("({g})^{e} [deg {d}]")
            }
        })
        .collect::<Vec<_>>()
        .join(" * ")
}

fn cmd_keygen(cli: &Cli, params: &ParamArgs, family: &str, public: &Path, private: &Path) -> CliResult<()> {
    let params = parse_params(params)?;
    let family: KeyFamily = family.parse().map_err(|e: Error| Failure::new(2, e.to_string()))?;
    let mut rng = SplitMix64::new(cli.seed);
    let (pk, sk, phi) = keygen(params, family, &mut rng)?;
    write_atomic(public, &pk.to_json())?;
    write_atomic(private, &sk.to_json())?;
    println!("params: {params}");
    println!("order t = {}", phi.order());
    println!("induced map char poly: {}", factor_summary(&pk));
    if cli.verbose {
        eprintln!("family {family}, seed {}", cli.seed);
    }
    Ok(())
}

fn cmd_encrypt(
    cli: &Cli,
    public: &Path,
    input: Option<&Path>,
    random_message: bool,
    pack_bytes: Option<&str>,
    message_out: Option<&Path>,
    out: &Path,
) -> CliResult<()> {
    let pk = PublicKey::from_json(&read(public)?)?;
    let params = pk.params();
    let mut rng = SplitMix64::new(cli.seed);
    let message = if let Some(path) = input {
        message_from_json(&read(path)?)?
    } else if random_message {
        UtElement::random(params, &mut rng)
    } else if let Some(text) = pack_bytes {
        pack::pack(params, text.as_bytes())?
    } else {
        return Err(Failure::new(4, "no message: give --in, --random-message or --pack-bytes"));
    };
    if message.params() != params {
        return Err(Error::ParamsMismatch.into());
    }
    let ct = encrypt(&pk, &message, &mut rng)?;
    if let Some(path) = message_out {
        write_atomic(path, &message_to_json(&message))?;
    }
    write_atomic(out, &ct.to_json())?;
    if cli.verbose {
        eprintln!("encrypted under {params}; packed capacity {} bytes", pack::capacity(params));
    }
    Ok(())
}

fn cmd_decrypt(cli: &Cli, private: &Path, input: &Path, out: &Path, unpack_bytes: bool) -> CliResult<()> {
    let sk = PrivateKey::from_json(&read(private)?)?;
    let ct = Ciphertext::from_json(&read(input)?)?;
    let message = decrypt(&sk, &ct)?;
    write_atomic(out, &message_to_json(&message))?;
    if unpack_bytes {
        let bytes = pack::unpack(&message)?;
        println!("{}", String::from_utf8_lossy(&bytes));
    }
    if cli.verbose {
        eprintln!("decrypted with m = {}", sk.m());
    }
    Ok(())
}

fn cmd_attack(
    cli: &Cli,
    public: &Path,
    inputs: &[PathBuf],
    out: &Path,
    config: &SolverConfig,
    known_m: Option<&BigUint>,
) -> CliResult<()> {
    let pk = PublicKey::from_json(&read(public)?)?;
    let challenges = inputs
        .iter()
        .map(|path| Ok(Ciphertext::from_json(&read(path)?)?))
        .collect::<CliResult<Vec<_>>>()?;
    let report = break_mor(&pk, &challenges, config)?;
    let mut value = report.to_value(&pk, config);
    if let Some(m) = known_m {
        let consistent = report.recovered().contains(m);
        value["known_m_check"] = serde_json::json!({ "consistent": consistent, "m": m.to_string() });
        println!("known m check: {}", if consistent { "consistent" } else { "INCONSISTENT" });
    }
    let mut text = serde_json::to_string(&value).expect("serializable");
    text.push('\n');
    write_atomic(out, &text)?;
    print_attack_summary(&report);
    if cli.verbose {
        for f in &report.gl.per_factor {
            eprintln!(
                "factor {} (d = {}, multiplicity {}): m = {} mod {}",
                f.factor,
                f.degree,
                f.multiplicity,
                f.residue.r(),
                f.residue.modulus()
            );
        }
    }
    Ok(())
}

fn print_attack_summary(report: &AttackReport) {
    println!("recovered m = {} mod {}", report.recovered().r(), report.modulus());
    println!("automorphism order = {}", report.automorphism_order);
    println!("full_order_match = {}", report.full_order_match);
    if report.degenerate {
        println!("degenerate key: induced map is the identity");
    }
    println!("plaintexts recovered: {}", report.plaintexts.len());
}

fn median(mut v: Vec<Duration>) -> u128 {
    v.sort();
    v.get(v.len() / 2).map_or(0, |d| d.as_micros())
}

fn cmd_bench(cli: &Cli, ns: &[usize], ps: &[u64], reps: usize, config: &SolverConfig) -> CliResult<()> {
    let reps = reps.max(1);
    println!(
        "n\tp\tkeygen_us\tencrypt_us\tdecrypt_us\tattack_us\tfactor_us\tdlp_us\tjordan_us\tcombine_us\torder_check_us\tfull_order_match"
    );
    for &p in ps {
        for &n in ns {
            let params = GroupParams::new(n, p).map_err(Failure::params)?;
            let mut rng = SplitMix64::new(cli.seed);
            let mut t = vec![Vec::new(); 9];
            let mut matches = 0;
            for _ in 0..reps {
                let clock = Instant::now();
                let (pk, sk, _) = keygen(params, KeyFamily::Mixed, &mut rng)?;
                t[0].push(clock.elapsed());
                let a = UtElement::random(params, &mut rng);
                let clock = Instant::now();
                let ct = encrypt(&pk, &a, &mut rng)?;
                t[1].push(clock.elapsed());
                let clock = Instant::now();
                decrypt(&sk, &ct)?;
                t[2].push(clock.elapsed());
                let clock = Instant::now();
                let report = break_mor(&pk, &[], config)?;
                t[3].push(clock.elapsed());
                let phases = report.timings;
                t[4].push(phases.factor);
                t[5].push(phases.dlp);
                t[6].push(phases.jordan);
                t[7].push(phases.combine);
                t[8].push(phases.order_check);
                matches += report.full_order_match as usize;
            }
            let cols: Vec<String> = t.into_iter().map(|v| median(v).to_string()).collect();
            println!("{n}\t{p}\t{}\t{matches}/{reps}", cols.join("\t"));
        }
    }
    Ok(())
}

fn run(cli: &Cli) -> CliResult<()> {
    match &cli.command {
        Command::Keygen { params, family, public, private } => {
            cmd_keygen(cli, params, family, public, private)
        }
        Command::Encrypt { public, input, random_message, pack_bytes, message_out, out } => cmd_encrypt(
            cli,
            public,
            input.as_deref(),
            *random_message,
            pack_bytes.as_deref(),
            message_out.as_deref(),
            out,
        ),
        Command::Decrypt { private, input, out, unpack_bytes } => {
            cmd_decrypt(cli, private, input, out, *unpack_bytes)
        }
        Command::Attack { public, inputs, out, solver, solver_ceiling, test_hook_known_m } => {
            let config = solver_config(solver, solver_ceiling.clone())?;
            cmd_attack(cli, public, inputs, out, &config, test_hook_known_m.as_ref())
        }
        Command::Bench { n, p, reps, solver } => {
            let config = solver_config(solver, None)?;
            cmd_bench(cli, n, p, *reps, &config)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
