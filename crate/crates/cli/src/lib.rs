//! The `iqp` command: challenge generation, provers, verification,
//! simulation and architecture translation over plain-text files.
//!
//! Each command prints one `key=value` report line on standard output and
//! diagnostics on standard error. Exit codes: 0 success or accept, 1 reject,
//! 2 inconclusive, 3 usage / I/O / parse error, 4 instance too large.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use iqp_core::cheat::classical_bias_exact;
use iqp_core::gf2::{BitMatrix, BitVector};
use iqp_core::protocol::{
    build_challenge_with, cheat_prove, default_params, honest_prove, verify, BuildOptions,
    Challenge, Decision, DedupPolicy, ProofTranscript, Secret,
};
use iqp_core::reductions::{xprogram_to_graphprogram, xprogram_to_znetwork};
use iqp_core::simulator::{distribution, exact_bias, Backend, Limits};
use iqp_core::xprogram::{Action, ConstantActionProgram};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

pub const EXIT_OK: i32 = 0;
pub const EXIT_REJECT: i32 = 1;
pub const EXIT_INCONCLUSIVE: i32 = 2;
pub const EXIT_USAGE: i32 = 3;
pub const EXIT_INFEASIBLE: i32 = 4;

#[derive(Parser, Debug)]
#[command(
    name = "iqp",
    version,
    about = "IQP challenge protocol, simulators and reductions"
)]
struct Cli {
    /// Cap on worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a challenge and its secret.
    Gen {
        #[arg(long)]
        q: u64,
        /// Obfuscation rows (default: q).
        #[arg(long)]
        obf: Option<usize>,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out_challenge: PathBuf,
        #[arg(long)]
        out_secret: PathBuf,
        /// Leave rows in shuffled order.
        #[arg(long)]
        no_sort: bool,
    },
    /// Sample the challenge honestly with the exact simulator.
    Prove(ProveArgs),
    /// Sample the classical second-derivative distribution.
    Cheat(ProveArgs),
    /// Test a transcript against the secret.
    Verify {
        #[arg(long)]
        challenge: PathBuf,
        #[arg(long)]
        secret: PathBuf,
        #[arg(long)]
        transcript: PathBuf,
        /// Error probability bound for the test.
        #[arg(long, default_value_t = 1e-3)]
        delta: f64,
        #[arg(long, value_enum, default_value_t = DedupArg::FloorOnly)]
        dedup: DedupArg,
    },
    /// Write the exact output distribution of a program.
    Simulate {
        #[arg(long)]
        program: PathBuf,
        #[arg(long, value_enum, default_value_t = BackendArg::Fourier)]
        backend: BackendArg,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
        format: FormatArg,
    },
    /// Exact quantum and classical bias in one direction.
    Bias {
        #[arg(long)]
        program: PathBuf,
        #[arg(long)]
        s: String,
    },
    /// Collision entropy of a program's output.
    Entropy {
        #[arg(long)]
        program: PathBuf,
    },
    /// Translate a program into another architecture.
    Reduce {
        #[arg(long)]
        program: PathBuf,
        #[arg(long, value_enum)]
        target: TargetArg,
        #[arg(long)]
        out: PathBuf,
    },
    /// Collision entropy of random π/8 programs (reporting only).
    ExperimentEntropy {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(clap::Args, Debug)]
struct ProveArgs {
    #[arg(long)]
    challenge: PathBuf,
    #[arg(long)]
    m: usize,
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum BackendArg {
    Fourier,
    Pathsum,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum FormatArg {
    Csv,
    Bin,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum TargetArg {
    Znet,
    Graph,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum DedupArg {
    FloorOnly,
    KeepOne,
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Io(PathBuf, std::io::Error),
    Core(iqp_core::Error),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) if e.is_infeasible() => EXIT_INFEASIBLE,
            _ => EXIT_USAGE,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => f.write_str(m),
            CliError::Io(p, e) => write!(f, "{}: {e}", p.display()),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl From<iqp_core::Error> for CliError {
    fn from(e: iqp_core::Error) -> Self {
        CliError::Core(e)
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::Io(path.to_path_buf(), e))
}

fn write(path: &Path, bytes: impl AsRef<[u8]>) -> CliResult<()> {
    fs::write(path, bytes).map_err(|e| CliError::Io(path.to_path_buf(), e))
}

fn read_program(path: &Path) -> CliResult<ConstantActionProgram> {
    Ok(ConstantActionProgram::parse(&read(path)?)?)
}

/// Runs the command line `args` (including the program name) and returns
/// the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    if let Some(t) = cli.threads {
        if t == 0 {
            eprintln!("error: --threads must be at least 1");
            return EXIT_USAGE;
        }
        // Fails only if the pool was already initialised in this process.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global();
    }
    match dispatch(cli.command) {
        Ok((report, code)) => {
            println!("{report}");
            code
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(cmd: Command) -> CliResult<(String, i32)> {
    match cmd {
        Command::Gen {
            q,
            obf,
            seed,
            out_challenge,
            out_secret,
            no_sort,
        } => {
            let opts = BuildOptions {
                n_obf: obf,
                sort_rows: !no_sort,
            };
            let (ch, secret) = build_challenge_with(q, seed, &opts)?;
            write(&out_challenge, ch.serialize())?;
            write(&out_secret, secret.serialize())?;
            Ok((
                format!(
                    "challenge_id={} q={} rows={} cols={}",
                    ch.challenge_id,
                    q,
                    ch.matrix.row_count(),
                    ch.n()
                ),
                EXIT_OK,
            ))
        }
        Command::Prove(args) => prove(args, true),
        Command::Cheat(args) => prove(args, false),
        Command::Verify {
            challenge,
            secret,
            transcript,
            delta,
            dedup,
        } => {
            let ch = Challenge::parse(&read(&challenge)?)?;
            let secret = Secret::parse(&read(&secret)?)?;
            let transcript = ProofTranscript::parse(&read(&transcript)?, ch.n())?;
            let mut params = default_params(delta)?;
            params.dedup = match dedup {
                DedupArg::FloorOnly => DedupPolicy::FloorOnly,
                DedupArg::KeepOne => DedupPolicy::KeepOne,
            };
            let report = verify(&ch, &secret, &transcript, &params)?;
            let code = match report.decision {
                Decision::Accept => EXIT_OK,
                Decision::Reject => EXIT_REJECT,
                Decision::Inconclusive => EXIT_INCONCLUSIVE,
            };
            Ok((format!("challenge_id={} {report}", ch.challenge_id), code))
        }
        Command::Simulate {
            program,
            backend,
            out,
            format,
        } => {
            let prog = read_program(&program)?;
            let backend = match backend {
                BackendArg::Fourier => Backend::Fourier,
                BackendArg::Pathsum => Backend::PathSum,
            };
            let dist = distribution(&prog.to_xprogram(), backend, &Limits::default())?;
            match format {
                FormatArg::Csv => write(&out, dist.to_csv())?,
                FormatArg::Bin => write(&out, dist.to_le_bytes())?,
            }
            Ok((
                format!(
                    "n={} outcomes={} backend={backend:?}",
                    dist.n(),
                    dist.probs().len()
                )
                .to_lowercase(),
                EXIT_OK,
            ))
        }
        Command::Bias { program, s } => {
            let prog = read_program(&program)?;
            let s: BitVector = s
                .parse()
                .map_err(|_| CliError::Usage(format!("--s must be a 0/1 string, got {s:?}")))?;
            if s.len() != prog.n() {
                return Err(CliError::Usage(format!(
                    "--s has length {}, program has {} columns",
                    s.len(),
                    prog.n()
                )));
            }
            let quantum = exact_bias(&prog, &s)?;
            let classical = classical_bias_exact(&prog.matrix, &s);
            Ok((
                format!(
                    "s={s} theta={} quantum_bias={quantum:.12} classical_bias={classical:.12}",
                    prog.theta
                ),
                EXIT_OK,
            ))
        }
        Command::Entropy { program } => {
            let prog = read_program(&program)?;
            let dist = distribution(&prog.to_xprogram(), Backend::Fourier, &Limits::default())?;
            Ok((
                format!(
                    "n={} collision_entropy={:.12} via_bias={:.12}",
                    dist.n(),
                    dist.collision_entropy(),
                    dist.collision_entropy_via_bias()
                ),
                EXIT_OK,
            ))
        }
        Command::Reduce {
            program,
            target,
            out,
        } => {
            let prog = read_program(&program)?.to_xprogram();
            match target {
                TargetArg::Znet => {
                    let net = xprogram_to_znetwork(&prog);
                    write(&out, net.serialize())?;
                    Ok((
                        format!("target=znet qubits={} gates={}", net.n(), net.gates().len()),
                        EXIT_OK,
                    ))
                }
                TargetArg::Graph => {
                    let (gp, _) = xprogram_to_graphprogram(&prog);
                    write(&out, gp.serialize())?;
                    let degrees = gp.degrees();
                    Ok((
                        format!(
                            "target=graph vertices={} primal={} edges={} max_degree={}",
                            gp.vertices,
                            gp.primal,
                            gp.edges.len(),
                            degrees.iter().max().copied().unwrap_or(0)
                        ),
                        EXIT_OK,
                    ))
                }
            }
        }
        Command::ExperimentEntropy { n, k, trials, seed } => experiment_entropy(n, k, trials, seed),
    }
}

fn prove(args: ProveArgs, honest: bool) -> CliResult<(String, i32)> {
    let ch = Challenge::parse(&read(&args.challenge)?)?;
    let mut rng = ChaCha20Rng::seed_from_u64(args.seed);
    let transcript = if honest {
        honest_prove(&ch, args.m, &mut rng)?
    } else {
        cheat_prove(&ch, args.m, &mut rng)
    };
    write(&args.out, transcript.serialize())?;
    Ok((
        format!(
            "challenge_id={} prover={} m={} n={}",
            ch.challenge_id,
            transcript.prover_tag,
            transcript.samples.len(),
            ch.n()
        ),
        EXIT_OK,
    ))
}

fn experiment_entropy(n: usize, k: usize, trials: usize, seed: u64) -> CliResult<(String, i32)> {
    if trials == 0 || n == 0 {
        return Err(CliError::Usage("--n and --trials must be positive".into()));
    }
    let limits = Limits::default();
    if n > limits.max_qubits {
        return Err(iqp_core::Error::StateSpaceInfeasible {
            qubits: n,
            cap: limits.max_qubits,
        }
        .into());
    }
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut values = Vec::with_capacity(trials);
    for _ in 0..trials {
        let p = BitMatrix::random(k, n, &mut rng);
        let prog = ConstantActionProgram::new(p, Action::PI_OVER_8).to_xprogram();
        values.push(distribution(&prog, Backend::Fourier, &limits)?.collision_entropy());
    }
    let mean = values.iter().sum::<f64>() / trials as f64;
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok((
        format!(
            "n={n} k={k} trials={trials} mean_s2={mean:.6} min_s2={min:.6} max_s2={max:.6} deficit={:.6}",
            n as f64 - mean
        ),
        EXIT_OK,
    ))
}
