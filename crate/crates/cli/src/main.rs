use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use lcpk::classify::{classify, ClassifyOptions, Strictness};
use lcpk::generate::{block_triangular_k, hidden_triple, k_matrix, uniform_q, OffDiagonal};
use lcpk::instance::{to_canonical_json, InstanceFile, ReadError};
use lcpk::lcp::{
    derive_p_hidden, solve_augmented, solve_block_sequential, solve_bruteforce, solve_lemke, solve_lp_reduction,
    AugmentedOutcome, LcpInstance, LemkeOutcome,
};
use lcpk::verify::{all_passed, run_suite, Suite};
use lcpk::{BlockPartition, Error, Orientation};

mod exit {
    pub const NO_SOLUTION: u8 = 1;
    pub const PARSE: u8 = 2;
    pub const DIMENSION: u8 = 3;
    pub const PRECONDITION: u8 = 4;
    pub const IO: u8 = 5;
}

/// Linear complementarity solvers for block triangular and hidden block
/// triangular K-matrices.
#[derive(Parser)]
#[command(name = "lcpk", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every class predicate on the instance's M.
    Classify {
        path: PathBuf,
        /// Block size; defaults to the file's block_size.
        #[arg(long)]
        block_size: Option<usize>,
        /// Require every filled block to be K (default).
        #[arg(long, conflicts_with = "relaxed")]
        strict: bool,
        /// Only require the diagonal blocks to be K.
        #[arg(long)]
        relaxed: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve LCP(M, q).
    Solve {
        path: PathBuf,
        #[arg(long, value_enum, default_value_t = MethodArg::Lemke)]
        method: MethodArg,
        /// Objective for --method lp: `e`, or `derived` (r + N^T s from the witnesses).
        #[arg(long, value_enum, default_value_t = PArg::E)]
        p: PArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generate random instances.
    Gen {
        #[arg(long, value_enum)]
        kind: KindArg,
        #[arg(long, default_value_t = 2)]
        blocks: usize,
        #[arg(long, default_value_t = 2)]
        block_size: usize,
        #[arg(long, value_enum, default_value_t = OrientationArg::Lower)]
        orientation: OrientationArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        count: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run a property suite against the instance.
    Verify {
        path: PathBuf,
        #[arg(long, value_enum, default_value_t = SuiteArg::All)]
        suite: SuiteArg,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Lemke,
    Lp,
    Block,
    Oracle,
    Augmented,
}

#[derive(Clone, Copy, ValueEnum)]
enum PArg {
    E,
    Derived,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    /// A single K-matrix.
    K,
    /// Block triangular with K-matrix blocks everywhere on the filled side.
    BlockK,
    /// Block triangular with K diagonal blocks and nonpositive
    /// off-diagonal blocks (a Z-matrix).
    #[value(name = "block-k-z")]
    BlockKZ,
    /// N = Y X^{-1} with embedded witnesses X, Y.
    Hidden,
}

#[derive(Clone, Copy, ValueEnum)]
enum OrientationArg {
    Lower,
    Upper,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    All,
    Lattice,
    Least,
    Inverse,
    Q0,
    Augmented,
}

/// A failed command: message plus exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Parse(_) => exit::PARSE,
            Error::Dimension(_) | Error::NonFinite { .. } | Error::OutOfRange { .. } => exit::DIMENSION,
            Error::ClassCheck(_) | Error::Witness(_) | Error::NotStrict { .. } | Error::TooLarge { .. } => exit::PRECONDITION,
            _ => exit::NO_SOLUTION,
        };
        Failure { code, message: e.to_string() }
    }
}

fn io_failure(path: &Path, e: std::io::Error) -> Failure {
    Failure { code: exit::IO, message: format!("{}: {e}", path.display()) }
}

type Outcome = Result<(Value, u8), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (result, out) = match cli.command {
        Command::Classify { path, block_size, strict: _, relaxed, seed, out } => {
            let strictness = if relaxed { Strictness::Relaxed } else { Strictness::Strict };
            (cmd_classify(&path, block_size, strictness, seed), out)
        }
        Command::Solve { path, method, p, out } => (cmd_solve(&path, method, p), out),
        Command::Gen { kind, blocks, block_size, orientation, seed, count, out } => {
            (cmd_gen(kind, blocks, block_size, orientation, seed, count, &out), None)
        }
        Command::Verify { path, suite, samples, seed, out } => (cmd_verify(&path, suite, samples, seed), out),
    };
    match result {
        Ok((report, code)) => {
            let mut text = to_canonical_json(&report);
            text.push('\n');
            match out {
                Some(p) => {
                    if let Err(e) = std::fs::write(&p, text) {
                        let f = io_failure(&p, e);
                        eprintln!("lcpk: {}", f.message);
                        return ExitCode::from(f.code);
                    }
                }
                None => print!("{text}"),
            }
            ExitCode::from(code)
        }
        Err(f) => {
            eprintln!("lcpk: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn load(path: &Path) -> Result<(InstanceFile, LcpInstance), Failure> {
    let file = InstanceFile::read(path).map_err(|e| match e {
        ReadError::Io(e) => io_failure(path, e),
        ReadError::Format(e) => Failure::from(e),
    })?;
    let inst = file.to_instance()?;
    Ok((file, inst))
}

fn cmd_classify(path: &Path, block_size: Option<usize>, strictness: Strictness, seed: u64) -> Outcome {
    let (file, inst) = load(path)?;
    let opts = ClassifyOptions {
        block_size: block_size.or(file.block_size),
        strictness,
        witnesses: inst.witnesses.as_ref().map(|w| (w.x.clone(), w.y.clone())),
        seed,
    };
    let report = classify(&inst.m, &opts)?;
    Ok((json!({"command": "classify", "instance": path.display().to_string(), "seed": seed, "report": report}), 0))
}

fn cmd_solve(path: &Path, method: MethodArg, p: PArg) -> Outcome {
    let (_, inst) = load(path)?;
    let start = Instant::now();
    let mut report = json!({"command": "solve", "instance": path.display().to_string()});
    let code = match method {
        MethodArg::Lemke => match solve_lemke(&inst)? {
            LemkeOutcome::Solved(s) => {
                report["solution"] = json!(s);
                contract_code(s.meets_contract())
            }
            LemkeOutcome::Ray(ray) => {
                report["ray"] = json!(ray);
                exit::NO_SOLUTION
            }
        },
        MethodArg::Lp => {
            let pvec = match p {
                PArg::E => vec![1.0; inst.dim()],
                PArg::Derived => {
                    let h = derive_p_hidden(&inst)?;
                    report["p_derivation"] = json!(h);
                    h.p
                }
            };
            let red = solve_lp_reduction(&inst, &pvec)?;
            report["certified"] = json!(red.certified);
            report["certificate_min"] = json!(red.certificate_min);
            report["p"] = json!(pvec);
            let ok = red.solution.meets_contract();
            report["solution"] = json!(red.solution);
            contract_code(ok)
        }
        MethodArg::Block => {
            let s = solve_block_sequential(&inst)?;
            let ok = s.meets_contract();
            report["solution"] = json!(s);
            contract_code(ok)
        }
        MethodArg::Oracle => {
            let sols = solve_bruteforce(&inst)?;
            let code = if sols.is_empty() { exit::NO_SOLUTION } else { 0 };
            report["solutions"] = json!(sols);
            code
        }
        MethodArg::Augmented => match solve_augmented(&inst)? {
            AugmentedOutcome::Solved { solution, augmented } => {
                report["solution"] = json!(solution);
                report["augmented_solution"] = json!(augmented);
                0
            }
            AugmentedOutcome::InvalidXPart { candidate, augmented } => {
                report["candidate"] = json!(candidate);
                report["augmented_solution"] = json!(augmented);
                exit::NO_SOLUTION
            }
            AugmentedOutcome::Ray(ray) => {
                report["ray"] = json!(ray);
                exit::NO_SOLUTION
            }
        },
    };
    report["wall_time_ms"] = json!(start.elapsed().as_secs_f64() * 1e3);
    Ok((report, code))
}

fn contract_code(ok: bool) -> u8 {
    if ok {
        0
    } else {
        exit::NO_SOLUTION
    }
}

fn cmd_gen(
    kind: KindArg,
    blocks: usize,
    block_size: usize,
    orientation: OrientationArg,
    seed: u64,
    count: usize,
    out: &Path,
) -> Outcome {
    if blocks == 0 || block_size == 0 {
        return Err(Error::Dimension("--blocks and --block-size must be positive".into()).into());
    }
    let orientation = match orientation {
        OrientationArg::Lower => Orientation::Lower,
        OrientationArg::Upper => Orientation::Upper,
    };
    let dim = blocks * block_size;
    let (prefix, off) = match kind {
        KindArg::K => ("k", None),
        KindArg::BlockK => ("block-k", Some(OffDiagonal::KBlocks)),
        KindArg::BlockKZ => ("block-k-z", Some(OffDiagonal::Nonpositive)),
        KindArg::Hidden => ("hidden", None),
    };
    if count > 0 {
        std::fs::create_dir_all(out).map_err(|e| io_failure(out, e))?;
    }
    let mut files = Vec::new();
    for i in 0..count {
        // Each file has its own stream so shards can be generated independently.
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(i as u64));
        let inst = match kind {
            KindArg::K => LcpInstance::new(k_matrix(dim, &mut rng), uniform_q(dim, &mut rng)),
            KindArg::BlockK | KindArg::BlockKZ => {
                let m = block_triangular_k(blocks, block_size, orientation, off.expect("block kinds"), &mut rng);
                LcpInstance::new(m, uniform_q(dim, &mut rng))
                    .and_then(|x| x.with_partition(BlockPartition::new(block_size, blocks, orientation)?))
            }
            KindArg::Hidden => hidden_triple(blocks, block_size, orientation, &mut rng).and_then(|(n, x, y)| {
                LcpInstance::new(n, uniform_q(dim, &mut rng))?
                    .with_partition(BlockPartition::new(block_size, blocks, orientation)?)?
                    .with_witnesses(x, y)
            }),
        }?;
        let path = out.join(format!("{prefix}-{i:04}.json"));
        InstanceFile::from_instance(&inst).write(&path).map_err(|e| io_failure(&path, e))?;
        files.push(path.display().to_string());
    }
    Ok((json!({"command": "gen", "seed": seed, "files": files}), 0))
}

fn cmd_verify(path: &Path, suite: SuiteArg, samples: usize, seed: u64) -> Outcome {
    let (_, inst) = load(path)?;
    let suite = match suite {
        SuiteArg::All => Suite::All,
        SuiteArg::Lattice => Suite::Lattice,
        SuiteArg::Least => Suite::Least,
        SuiteArg::Inverse => Suite::Inverse,
        SuiteArg::Q0 => Suite::Q0,
        SuiteArg::Augmented => Suite::Augmented,
    };
    let results = run_suite(&inst, suite, samples, seed)?;
    let code = if all_passed(&results) { 0 } else { exit::NO_SOLUTION };
    Ok((
        json!({"command": "verify", "instance": path.display().to_string(), "seed": seed, "samples": samples, "results": results}),
        code,
    ))
}
