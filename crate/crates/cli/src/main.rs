use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use filiform::classify::{classify, identify, verify_paper, ClassifyOptions, Identification, Scope};
use filiform::io::{parse_algebra, AlgebraRef, AnyTable, InvariantsReport, IsoReport, IsotopyWitnessFile, ReportBody, ReportFile};
use filiform::morphism::{decide_isomorphism, Certificate, SearchOptions, Verdict};
use filiform::{build, fingerprint, Error, Family, Field, Fp, StructureTable};

/// Environment variable holding the number of worker threads.
const THREADS_VAR: &str = "FILIFORM_THREADS";

#[derive(Parser)]
#[command(name = "filiform", version, about = "Filiform Lie algebras of dimension at most 7 over prime fields")]
struct Cli {
    /// Seed for sampled cross-checks and randomized searches.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Accept algebra files that fail the Jacobi identity.
    #[arg(long, global = true)]
    unchecked: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a member of a normal-form family.
    Family {
        /// model, dim5, g6, g7, g7type2 or h7type3
        tag: String,
        /// Comma-separated integer parameters.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        params: Vec<i64>,
        #[arg(long)]
        prime: u32,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Lower central series, type, center and flags.
    Info { file: PathBuf },
    /// Print the invariant fingerprint.
    Invariants {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Decide whether two algebras are isomorphic.
    Iso {
        first: PathBuf,
        second: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check a stored isotopism triple.
    IsotopyVerify {
        first: PathBuf,
        second: PathBuf,
        #[arg(long)]
        witness: PathBuf,
    },
    /// Partition a family sweep into isomorphism (and isotopism) classes.
    Classify {
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        prime: u32,
        #[arg(long)]
        isotopy: bool,
        /// Decide every pair by search, without fingerprints or closed forms.
        #[arg(long)]
        no_fingerprints: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Print the JSON report instead of the summary.
        #[arg(long)]
        json: bool,
    },
    /// Name the isomorphism class of an algebra.
    Identify { file: PathBuf },
    /// Recompute the known class counts.
    VerifyPaper {
        /// all, dim<n> or dim<n>:<p>,<p>,... joined by `;`
        #[arg(long, default_value = "all")]
        scope: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Reload a report and re-verify its witnesses.
    CheckReport { file: PathBuf },
}

enum Failure {
    Usage(String),
    Mismatch,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Outcome {
    fs::write(path, text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn load(path: &Path, unchecked: bool) -> Result<AnyTable, Failure> {
    let text = read(path)?;
    parse_algebra(&text, !unchecked).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn load_fp(path: &Path, unchecked: bool) -> Result<StructureTable<Fp>, Failure> {
    Ok(load(path, unchecked)?.into_fp()?)
}

fn emit(report: ReportFile, output: Option<&Path>, json: bool) -> Outcome {
    if json {
        println!("{}", report.to_json()?);
    } else {
        print!("{}", report.summary);
    }
    if let Some(path) = output {
        write(path, &report.to_json()?)?;
    }
    Ok(())
}

fn info<F: Field>(g: &StructureTable<F>) -> String {
    let series: Vec<String> = g.lower_central_series().iter().map(|s| s.dim().to_string()).collect();
    let ty: Vec<String> = g.type_sequence().iter().map(|x| x.to_string()).collect();
    format!(
        "label: {}\nfield: {}\ndimension: {}\nlower central series dims: {}\ntype: ({})\ncenter dimension: {}\nnilpotent: {}\nfiliform: {}\n",
        g.label().unwrap_or("-"),
        g.field().spec(),
        g.dim(),
        series.join(" "),
        ty.join(","),
        g.center().dim(),
        g.is_nilpotent(),
        g.is_filiform()
    )
}

fn run(cli: Cli) -> Outcome {
    let unchecked = cli.unchecked;
    match cli.command {
        Command::Family {
            tag,
            params,
            prime,
            output,
        } => {
            let field = Fp::new(prime)?;
            let family = Family::from_tag(&tag, &params, prime)?;
            let text = filiform::render_algebra(&build(&field, &family)?);
            match output {
                Some(p) => write(&p, &text),
                None => {
                    print!("{text}");
                    Ok(())
                }
            }
        }
        Command::Info { file } => {
            print!(
                "{}",
                match load(&file, unchecked)? {
                    AnyTable::Fp(g) => info(&g),
                    AnyTable::Rational(g) => info(&g),
                }
            );
            Ok(())
        }
        Command::Invariants { file, json } => {
            let g = load_fp(&file, unchecked)?;
            let body = ReportBody::Invariants(InvariantsReport {
                algebra: AlgebraRef::of(&g),
                fingerprint: fingerprint(&g)?,
            });
            emit(ReportFile::new(body, None)?, None, json)
        }
        Command::Iso { first, second, output } => {
            let a = load_fp(&first, unchecked)?;
            let b = load_fp(&second, unchecked)?;
            let verdict = decide_isomorphism(&a, &b, &SearchOptions::default())?;
            let report = match &verdict {
                Verdict::Isomorphic(w) => IsoReport::from_witness(&a, &b, w),
                Verdict::NotIsomorphic(c) => IsoReport {
                    characteristic: a.field().p(),
                    first: AlgebraRef::of(&a),
                    second: AlgebraRef::of(&b),
                    isomorphic: false,
                    witness: None,
                    certificate: Some(match c {
                        Certificate::FingerprintMismatch(d) => format!("fingerprint mismatch ({d})"),
                        Certificate::ExhaustedSearch { nodes } => format!("exhausted search ({nodes} nodes)"),
                    }),
                },
                other => return Err(Failure::Usage(format!("unexpected verdict {other:?}"))),
            };
            let iso = report.isomorphic;
            emit(ReportFile::new(ReportBody::Isomorphism(report), None)?, output.as_deref(), false)?;
            if iso {
                Ok(())
            } else {
                Err(Failure::Mismatch)
            }
        }
        Command::IsotopyVerify { first, second, witness } => {
            let a = load_fp(&first, unchecked)?;
            let b = load_fp(&second, unchecked)?;
            let w = IsotopyWitnessFile::parse(&read(&witness)?)?;
            if w.verify(&a, &b)? {
                println!("isotopism verified");
                Ok(())
            } else {
                println!("isotopism FAILS");
                Err(Failure::Mismatch)
            }
        }
        Command::Classify {
            dim,
            prime,
            isotopy,
            no_fingerprints,
            output,
            json,
        } => {
            let opts = ClassifyOptions {
                seed: cli.seed,
                isotopy,
                use_fingerprints: !no_fingerprints,
                ..Default::default()
            };
            let report = classify(dim, prime, &opts)?;
            let ok = report.matches;
            emit(
                ReportFile::new(ReportBody::Classification(report), Some(cli.seed))?,
                output.as_deref(),
                json,
            )?;
            if ok {
                Ok(())
            } else {
                Err(Failure::Mismatch)
            }
        }
        Command::Identify { file } => {
            let g = load_fp(&file, unchecked)?;
            match identify(&g)? {
                Identification::Identified { representative, witness } => {
                    println!("class: {representative}");
                    println!("witness (columns are images of e_1..e_n):");
                    for r in 0..witness.matrix.rows() {
                        let row: Vec<String> = witness.matrix.row(r).iter().map(|x| x.to_string()).collect();
                        println!("  {}", row.join(" "));
                    }
                    Ok(())
                }
                Identification::Unclassified { fingerprint } => {
                    println!("UNCLASSIFIED: no normal form matches\n{fingerprint:#?}");
                    Err(Failure::Mismatch)
                }
            }
        }
        Command::VerifyPaper { scope, output } => {
            let scope = Scope::parse(&scope)?;
            let opts = ClassifyOptions {
                seed: cli.seed,
                ..Default::default()
            };
            let report = verify_paper(&scope, &opts)?;
            let ok = report.all_pass;
            emit(
                ReportFile::new(ReportBody::VerifyPaper(report), Some(cli.seed))?,
                output.as_deref(),
                false,
            )?;
            if ok {
                Ok(())
            } else {
                Err(Failure::Mismatch)
            }
        }
        Command::CheckReport { file } => match ReportFile::load(&read(&file)?) {
            Ok(r) => {
                println!("report ok: {} witnesses re-verified", r.reverify()?);
                Ok(())
            }
            Err(e) => {
                println!("report FAILS: {e}");
                Err(Failure::Mismatch)
            }
        },
    }
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(v) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let n: usize = v
        .parse()
        .map_err(|_| Failure::Usage(format!("{THREADS_VAR} must be a positive integer, got `{v}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::Usage(e.to_string()))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match configure_threads().and_then(|_| run(cli)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Mismatch) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
