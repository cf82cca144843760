use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use qsym::breaker::{
    augment_instance, encode_existential_cnf, encode_universal_dnf, Augmentation, EncodeOptions, Selection,
};
use qsym::detect::{detect_symmetries, DetectOptions, GraphOptions};
use qsym::error::Error;
use qsym::generate::{gen_kbkf, gen_random_qbf, BlockPattern, RandomQbfParams};
use qsym::group::{format_generators, parse_generators, SignedPermutation};
use qsym::qdimacs::{parse_qdimacs, serialize_qdimacs, QbfInstance, Quantifier};
use qsym::strategy::qbf_truth_capped;
use qsym::verify::{verify_pipeline, VerifyOptions};

const EXIT_USAGE: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_CAP: u8 = 3;
const EXIT_VERIFY: u8 = 10;

/// Symmetry detection and lex-leader symmetry breaking for QBFs in QDIMACS.
#[derive(Parser)]
#[command(name = "qsym", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate and print the normalized instance.
    Parse {
        /// Input file, `-` for stdin.
        input: PathBuf,
    },
    /// Print symmetry generators, one per line in cycle notation.
    Detect {
        input: PathBuf,
        #[command(flatten)]
        detect: DetectArgs,
    },
    /// Add symmetry breakers to an instance.
    Break {
        input: PathBuf,
        /// Conjoin the existential breaker as clauses.
        #[arg(long, group = "polarity")]
        exists: bool,
        /// Attach the universal breaker as a cube sidecar.
        #[arg(long, group = "polarity")]
        forall: bool,
        /// Both breakers.
        #[arg(long, group = "polarity")]
        both: bool,
        /// Where to write the cube sidecar.
        #[arg(long)]
        dnf_out: Option<PathBuf>,
        /// Where to write the QDIMACS output (default stdout).
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[command(flatten)]
        breaker: BreakerArgs,
        #[command(flatten)]
        detect: DetectArgs,
    },
    /// Run oracle checks on the breakers of an instance.
    Verify {
        input: PathBuf,
        /// Print the report as JSON.
        #[arg(long)]
        json: bool,
        /// Variable cap for the truth oracle.
        #[arg(long, default_value_t = 24)]
        truth_cap: usize,
        /// Strategy count cap for orbit checks.
        #[arg(long, default_value_t = 1 << 16)]
        strategy_cap: u64,
        #[command(flatten)]
        breaker: BreakerArgs,
        #[command(flatten)]
        detect: DetectArgs,
    },
    /// Print TRUE or FALSE by brute force.
    Solve {
        input: PathBuf,
        /// Variable cap.
        #[arg(long, default_value_t = 24)]
        cap: usize,
        /// Cube sidecar to disjoin with the matrix.
        #[arg(long)]
        dnf: Option<PathBuf>,
    },
    /// Generate benchmark instances.
    #[command(subcommand)]
    Gen(Gen),
}

#[derive(Subcommand)]
enum Gen {
    /// The KBKF family.
    Kbkf { t: usize },
    /// A seeded random instance.
    Random {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 8)]
        vars: usize,
        #[arg(long, default_value_t = 12)]
        clauses: usize,
        #[arg(long, default_value_t = 3)]
        len: usize,
        /// Number of alternating quantifier blocks.
        #[arg(long, default_value_t = 2)]
        blocks: usize,
        /// Quantifier of the first block.
        #[arg(long, value_enum, default_value_t = First::A)]
        first: First,
        /// Close the clause set under a random signed permutation.
        #[arg(long)]
        plant: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum First {
    A,
    E,
}

#[derive(Args)]
struct DetectArgs {
    /// Read generators from this file instead of detecting them.
    #[arg(long)]
    generators: Option<PathBuf>,
    /// Search node budget.
    #[arg(long, default_value_t = qsym::detect::DEFAULT_BUDGET)]
    budget: usize,
    /// Turn binary clauses into literal edges.
    #[arg(long)]
    collapse_binary: bool,
}

#[derive(Args)]
struct BreakerArgs {
    /// Use products of up to this many generators.
    #[arg(long)]
    products: Option<usize>,
    /// Keep positions fixed by a generator in the encoding.
    #[arg(long)]
    no_compress: bool,
}

impl BreakerArgs {
    fn options(&self) -> EncodeOptions {
        EncodeOptions {
            selection: match self.products {
                Some(max_len) => Selection::Products { max_len },
                None => Selection::Generators,
            },
            compress_identity: !self.no_compress,
            first_aux: None,
        }
    }
}

enum Failure {
    Usage(String),
    Lib(Error),
    Verify(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Lib(e.into())
    }
}

fn read_text(path: &Path) -> Result<String, Failure> {
    if path.as_os_str() == "-" {
        let mut text = String::new();
        io::stdin().read_to_string(&mut text)?;
        Ok(text)
    } else {
        Ok(fs::read_to_string(path)?)
    }
}

fn read_instance(path: &Path) -> Result<QbfInstance, Failure> {
    let instance = parse_qdimacs(&read_text(path)?)?;
    for w in &instance.meta.warnings {
        eprintln!("warning: {w}");
    }
    Ok(instance)
}

fn generators_for(instance: &QbfInstance, args: &DetectArgs) -> Result<Vec<SignedPermutation>, Failure> {
    if let Some(path) = &args.generators {
        let gens = parse_generators(&read_text(path)?)?;
        for g in &gens {
            g.check_blocks(instance.prefix())?;
        }
        return Ok(gens);
    }
    let options = DetectOptions {
        graph: GraphOptions {
            collapse_binary: args.collapse_binary,
        },
        budget: args.budget,
    };
    let detection = detect_symmetries(instance, options);
    for w in &detection.warnings {
        eprintln!("warning: {w}");
    }
    if !detection.complete {
        eprintln!(
            "warning: search budget exhausted after {} nodes; generators may be incomplete",
            detection.nodes
        );
    }
    Ok(detection.generators)
}

fn write_output(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text)?,
        None => io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Parse { input } => {
            let instance = read_instance(&input)?;
            write_output(None, &serialize_qdimacs(&instance))
        }
        Command::Detect { input, detect } => {
            let instance = read_instance(&input)?;
            let gens = generators_for(&instance, &detect)?;
            write_output(None, &format_generators(&gens))
        }
        Command::Break {
            input,
            exists,
            forall,
            both,
            dnf_out,
            output,
            breaker,
            detect,
        } => {
            let (want_cnf, want_dnf) = match (exists, forall, both) {
                (true, _, _) => (true, false),
                (_, true, _) => (false, true),
                (_, _, true) => (true, true),
                _ => return Err(Failure::Usage("one of --exists, --forall, --both is required".into())),
            };
            if want_dnf && dnf_out.is_none() {
                return Err(Failure::Usage("--forall and --both need --dnf-out".into()));
            }
            let instance = read_instance(&input)?;
            let gens = generators_for(&instance, &detect)?;
            let options = breaker.options();
            let prefix = instance.prefix();
            let cnf = encode_existential_cnf(prefix, &gens, options)?;
            let dnf_options = EncodeOptions {
                first_aux: Some(if want_cnf {
                    cnf.next_free_var()
                } else {
                    prefix.max_var() + 1
                }),
                ..options
            };
            let dnf = encode_universal_dnf(prefix, &gens, dnf_options)?;
            let mode = match (want_cnf, want_dnf) {
                (true, false) => Augmentation::ConjoinCnf(&cnf),
                (false, true) => Augmentation::AttachDnf(&dnf),
                _ => Augmentation::Combined {
                    exists: &cnf,
                    forall: &dnf,
                },
            };
            let augmented = augment_instance(&instance, mode)?;
            write_output(output.as_deref(), &serialize_qdimacs(&augmented.instance))?;
            if let (Some(sidecar), Some(path)) = (&augmented.dnf, &dnf_out) {
                fs::write(path, sidecar.to_text()?)?;
            }
            Ok(())
        }
        Command::Verify {
            input,
            json,
            truth_cap,
            strategy_cap,
            breaker,
            detect,
        } => {
            let instance = read_instance(&input)?;
            let gens = generators_for(&instance, &detect)?;
            let mut options = VerifyOptions {
                truth_cap,
                encode: breaker.options(),
                ..VerifyOptions::default()
            };
            options.orbit_caps.strategies = strategy_cap;
            let report = verify_pipeline(&instance, &gens, options)?;
            if json {
                let text = serde_json::to_string_pretty(&report).expect("report serializes");
                write_output(None, &format!("{text}\n"))?;
            } else {
                write_output(None, &report.to_string())?;
            }
            if report.passed() {
                Ok(())
            } else {
                Err(Failure::Verify("verification failed".into()))
            }
        }
        Command::Solve { input, cap, dnf } => {
            let instance = read_instance(&input)?;
            let truth = match dnf {
                None => qbf_truth_capped(instance.prefix(), instance.matrix(), cap)?,
                Some(path) => {
                    let sidecar = qsym::qdimacs::parse_dnf(&read_text(&path)?)?;
                    let matrix = qsym::breaker::Disjunction(instance.matrix(), sidecar.cubes.as_slice());
                    qbf_truth_capped(instance.prefix(), &matrix, cap)?
                }
            };
            write_output(None, if truth { "TRUE\n" } else { "FALSE\n" })
        }
        Command::Gen(Gen::Kbkf { t }) => write_output(None, &serialize_qdimacs(&gen_kbkf(t)?)),
        Command::Gen(Gen::Random {
            seed,
            vars,
            clauses,
            len,
            blocks,
            first,
            plant,
        }) => {
            let first = match first {
                First::A => Quantifier::Forall,
                First::E => Quantifier::Exists,
            };
            let params = RandomQbfParams {
                seed,
                num_vars: vars,
                num_clauses: clauses,
                clause_len: len,
                blocks: BlockPattern::Alternating { first, count: blocks },
                plant_symmetry: plant,
            };
            let generated = gen_random_qbf(&params)?;
            if let Some(g) = &generated.planted {
                eprintln!("planted: {g}");
            }
            write_output(None, &serialize_qdimacs(&generated.instance))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Verify(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_VERIFY)
        }
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_cap_exceeded() { EXIT_CAP } else { EXIT_INPUT })
        }
    }
}
