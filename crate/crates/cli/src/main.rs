use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use tropid_core::identities::small_values;
use tropid_core::search::{CandidateStatus, FALSIFY_MAX_LEN};
use tropid_core::tropical::parse_probability;
use tropid_core::{
    bounds, check, construct_identity_from, default_power_word, enumerate_class, exhaustive_check,
    falsify_below, fuzz, identity_for_dimension, is_faithful, minimal_power_word, oracle_product,
    refine_two_variable, Assignment, ColoredDigraph, Error, ExtensionRule, FuzzMode, Identity,
    IdentityForm, MatrixClass, Partition, SamplerConfig, SearchMode, TropMatrix, Variable, Verdict,
    WordClassSpec,
};

const DEFAULT_SEED: u64 = 0;

/// Identities of triangular tropical matrices.
#[derive(Parser)]
#[command(name = "tropid", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List W_n[C, P] in lexicographic order.
    Enumerate(ClassArgs),
    /// Print a power word of W_n[C, P].
    Powerword {
        #[command(flatten)]
        class: ClassArgs,
        /// Use the exact shortest word.
        #[arg(long, conflicts_with = "greedy")]
        exact: bool,
        /// Use the greedy superstring.
        #[arg(long)]
        greedy: bool,
    },
    /// Build the identity for dim x dim triangular matrices (JSON).
    Identity {
        #[arg(long)]
        dim: usize,
        #[arg(long, default_value = "single-letter")]
        form: IdentityForm,
        /// Pad with z1/z2 instead of a single letter.
        #[arg(long)]
        uniform: bool,
        /// Print `lhs = rhs` instead of JSON.
        #[arg(long)]
        text: bool,
    },
    /// Refine an identity to two variables y1, y2.
    Refine {
        #[arg(long)]
        identity: PathBuf,
        /// Variables sent to y1y2, comma separated; the rest go to y2y1.
        #[arg(long, value_delimiter = ',')]
        first: Vec<String>,
    },
    /// Evaluate an identity on explicit matrices.
    Check {
        #[arg(long)]
        identity: PathBuf,
        #[arg(long)]
        matrices: PathBuf,
    },
    /// Search for a counterexample with random or exhaustive assignments.
    Fuzz {
        #[arg(long)]
        identity: PathBuf,
        #[arg(long, default_value = "upper")]
        class: MatrixClass,
        #[arg(long)]
        dim: usize,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        #[command(flatten)]
        sampler: SamplerArgs,
        #[arg(long, default_value = "independent")]
        mode: FuzzMode,
        /// Sweep every assignment with entries in {-inf, -1, 0, 1} instead.
        #[arg(long)]
        exhaustive: bool,
    },
    /// Multiply matrices through the colored-digraph path semantics.
    Oracle {
        /// JSON list of matrices, multiplied left to right.
        #[arg(long)]
        matrices: PathBuf,
        /// Print the colored digraph in DOT format.
        #[arg(long)]
        dot: bool,
    },
    /// Fibonacci class counts and identity length bounds for 2..=n.
    Bound {
        #[arg(long)]
        n: u32,
    },
    /// Minimal power words and falsification sweeps.
    #[command(subcommand)]
    Search(SearchCommand),
}

#[derive(Subcommand)]
enum SearchCommand {
    MinimalWord {
        #[arg(long)]
        n: usize,
        #[arg(long, conflicts_with = "greedy")]
        exact: bool,
        #[arg(long)]
        greedy: bool,
    },
    Falsify {
        #[arg(long)]
        max_len: usize,
        #[arg(long, default_value_t = 100)]
        trials: u64,
        #[command(flatten)]
        sampler: SamplerArgs,
        /// Write one witness file per falsified candidate here.
        #[arg(long)]
        witness_dir: Option<PathBuf>,
    },
}

#[derive(Args)]
struct ClassArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, value_delimiter = ',', default_value = "x,y")]
    vars: Vec<String>,
    #[arg(long, default_value_t = 2)]
    max_exp: u32,
}

impl ClassArgs {
    fn spec(&self) -> Result<WordClassSpec, Error> {
        let vars = self
            .vars
            .iter()
            .map(|v| Variable::new(v))
            .collect::<Result<Vec<_>, _>>()?;
        WordClassSpec::new(vars, self.max_exp, self.n)
    }
}

#[derive(Args)]
struct SamplerArgs {
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = -10, allow_hyphen_values = true)]
    entry_lo: i64,
    #[arg(long, default_value_t = 10, allow_hyphen_values = true)]
    entry_hi: i64,
    #[arg(long, default_value = "1/4")]
    bottom_prob: String,
}

impl SamplerArgs {
    fn config(&self) -> Result<SamplerConfig, Error> {
        let seed = self.seed.unwrap_or_else(|| {
            eprintln!("seed: {DEFAULT_SEED} (default)");
            DEFAULT_SEED
        });
        let cfg = SamplerConfig {
            entry_lo: self.entry_lo,
            entry_hi: self.entry_hi,
            bottom_prob: parse_probability(&self.bottom_prob)?,
            seed,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

enum Failure {
    Usage(String),
    Runtime(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Revalidation(_) => Failure::Runtime(e.to_string()),
            e => Failure::Usage(e.to_string()),
        }
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn search_mode(exact: bool, greedy: bool) -> Option<SearchMode> {
    match (exact, greedy) {
        (true, _) => Some(SearchMode::Exact),
        (_, true) => Some(SearchMode::Greedy),
        _ => None,
    }
}

fn verdict_exit(v: &Verdict) -> ExitCode {
    println!("{v}");
    if v.is_pass() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn run(cli: Cli) -> Result<ExitCode, Failure> {
    match cli.command {
        Command::Enumerate(class) => {
            for w in enumerate_class(&class.spec()?) {
                println!("{w}");
            }
        }
        Command::Powerword {
            class,
            exact,
            greedy,
        } => {
            let spec = class.spec()?;
            let w = match search_mode(exact, greedy) {
                Some(mode) => minimal_power_word(&spec, mode)?,
                None => default_power_word(&spec)?,
            };
            println!("{w}");
            eprintln!("length {} faithful {}", w.len(), is_faithful(&w, &spec)?);
        }
        Command::Identity {
            dim,
            form,
            uniform,
            text,
        } => {
            let c = if uniform {
                if dim < 3 {
                    return Err(Failure::Usage("dimension must be at least 3".into()));
                }
                let spec = WordClassSpec::xy(dim - 1)?;
                construct_identity_from(
                    &default_power_word(&spec)?,
                    &spec,
                    form,
                    ExtensionRule::Uniform,
                )?
            } else {
                identity_for_dimension(dim, form)?
            };
            if text {
                let (l, r) = c.segmented();
                println!("{l} = {r}");
            } else {
                println!("{}", c.to_json());
            }
        }
        Command::Refine { identity, first } => {
            let id: Identity = read_json(&identity)?;
            let first = first
                .iter()
                .map(|v| Variable::new(v))
                .collect::<Result<Vec<_>, _>>()?;
            let second = id.content().into_iter().filter(|v| !first.contains(v));
            let partition = Partition::new(first.clone(), second);
            let refined = refine_two_variable(&id, &partition)?;
            println!("{}", serde_json::to_string(&refined).map_err(Error::from)?);
            if refined.is_trivial() {
                eprintln!("note: the refined identity is trivial");
            }
        }
        Command::Check { identity, matrices } => {
            let id: Identity = read_json(&identity)?;
            let a: Assignment = read_json(&matrices)?;
            let v = if check(&id, &a)? {
                Verdict::Pass { trials: 1 }
            } else {
                Verdict::Counterexample {
                    trial: 0,
                    assignment: a,
                }
            };
            return Ok(verdict_exit(&v));
        }
        Command::Fuzz {
            identity,
            class,
            dim,
            trials,
            sampler,
            mode,
            exhaustive,
        } => {
            let id: Identity = read_json(&identity)?;
            let v = if exhaustive {
                exhaustive_check(&id, class, dim, &small_values(), mode)?
            } else {
                fuzz(&id, class, dim, trials, &sampler.config()?, mode)?
            };
            return Ok(verdict_exit(&v));
        }
        Command::Oracle { matrices, dot } => {
            let factors: Vec<TropMatrix> = read_json(&matrices)?;
            if dot {
                print!("{}", ColoredDigraph::from_product(&factors)?.to_dot());
            } else {
                println!("{}", oracle_product(&factors)?);
            }
        }
        Command::Bound { n } => print_bounds(n)?,
        Command::Search(SearchCommand::MinimalWord { n, exact, greedy }) => {
            let spec = WordClassSpec::xy(n)?;
            let w = minimal_power_word(
                &spec,
                search_mode(exact, greedy).unwrap_or(SearchMode::Exact),
            )?;
            println!("{w}");
            eprintln!("length {}", w.len());
        }
        Command::Search(SearchCommand::Falsify {
            max_len,
            trials,
            sampler,
            witness_dir,
        }) => {
            if max_len > FALSIFY_MAX_LEN {
                return Err(Failure::Usage(format!(
                    "--max-len must be at most {FALSIFY_MAX_LEN}"
                )));
            }
            let report = falsify_below(max_len, 2, trials, &sampler.config()?)?;
            if let Some(dir) = &witness_dir {
                fs::create_dir_all(dir)
                    .map_err(|e| Failure::Usage(format!("cannot create {}: {e}", dir.display())))?;
            }
            println!("# scope: balanced two-variable identities, sides of length <= {max_len}, upper triangular 2x2");
            for (i, r) in report.results.iter().enumerate() {
                match &r.status {
                    CandidateStatus::Falsified { how, witness } => {
                        let json = serde_json::to_string(witness).map_err(Error::from)?;
                        let reference = match &witness_dir {
                            Some(dir) => {
                                let path = dir.join(format!("witness-{i:05}.json"));
                                fs::write(&path, &json).map_err(|e| {
                                    Failure::Usage(format!("cannot write {}: {e}", path.display()))
                                })?;
                                path.display().to_string()
                            }
                            None => json,
                        };
                        println!("FALSIFIED {} {how} {reference}", r.identity);
                    }
                    CandidateStatus::Unresolved => println!("UNRESOLVED {}", r.identity),
                }
            }
            eprintln!(
                "{} candidates, {} unresolved",
                report.results.len(),
                report.unresolved().count()
            );
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn print_bounds(n: u32) -> Result<(), Failure> {
    if n < 2 {
        return Err(Failure::Usage("--n must be at least 2".into()));
    }
    println!("n\tenumerated\t2F_n\t2F_n+1\t8(n+1)F_n+2\t8nF_n-1+2\tderived");
    let mut shifted = false;
    for k in 2..=n {
        let (count, claim, next) = bounds::class_count(k as usize)?;
        let (general, triangular) = bounds::closed_form_bounds(k)?;
        let derived = if k >= 3 {
            bounds::enumerated_bound(k as usize)?.to_string()
        } else {
            "-".into()
        };
        shifted |= claim != count.into();
        println!("{k}\t{count}\t{claim}\t{next}\t{general}\t{triangular}\t{derived}");
    }
    if shifted {
        println!("# enumerated counts equal 2F_(n+1), not the printed 2F_n");
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => e.exit(),
        Err(e) => {
            let text = e.to_string();
            eprintln!(
                "{}",
                text.lines().next().unwrap_or("error: invalid arguments")
            );
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
