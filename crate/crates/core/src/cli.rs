//! The `covmod` command line. [`run`] takes the argument list and output
//! streams so it can be driven in-process as well as from the binary.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or contract error.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use clap::{ArgGroup, Args, Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::bench::run_bench;
use crate::character::enumerate_characters;
use crate::convolution::{convolve, module_action};
use crate::covariant::{cov_norm, t_xi};
use crate::error::{Error, Result};
use crate::function::lp_norm;
use crate::group::{weil_measure, FiniteGroup, MeasureTriple, QuotientGroup, Subgroup};
use crate::json::{
    self, format_f64, group_id, ActionJson, CharacterJson, CovariantJson, FunctionJson, GroupJson, SubgroupJson,
};
use crate::semidirect::{heisenberg_finite, semidirect, weyl_heisenberg_finite};
use crate::verify::{run_suite, Corpus, CorpusFile, SuiteConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Environment variable capping kernel threads.
pub const THREADS_ENV: &str = "COVMOD_THREADS";

#[derive(Debug, Parser)]
#[command(name = "covmod", version, about = "Covariant functions and convolution modules on finite groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build or inspect groups.
    #[command(subcommand)]
    Group(GroupCommand),
    /// Work with characters.
    #[command(subcommand)]
    Chars(CharsCommand),
    /// Average a function against a character of N into a covariant function.
    Txi(TxiArgs),
    /// Convolve two functions on G.
    Conv(ConvArgs),
    /// Convolve a function with a covariant function.
    Modact(ModactArgs),
    /// Lp norm of a function, or the quotient norm of a covariant function.
    Norm(NormArgs),
    /// Run the randomized verification suite.
    Verify(VerifyArgs),
    /// Time the generic module action against the Weyl-Heisenberg fast paths.
    Bench(BenchArgs),
}

#[derive(Debug, Subcommand)]
enum GroupCommand {
    /// Print a group as JSON.
    #[command(subcommand)]
    Make(MakeCommand),
    /// Summarize a group file.
    Show { file: PathBuf },
}

#[derive(Debug, Subcommand)]
enum MakeCommand {
    /// Z_M.
    Cyclic { m: usize },
    /// Direct product A x B.
    Product { a: PathBuf, b: PathBuf },
    /// S_n with lexicographically ordered permutations.
    Symmetric { n: usize },
    /// Heisenberg group over Z_M.
    Heisenberg { m: usize },
    /// Weyl-Heisenberg group over Z_M with circle Z_R.
    WeylHeisenberg { m: usize, r: usize },
    /// H x|_theta K from an action table.
    Semidirect { h: PathBuf, k: PathBuf, action: PathBuf },
}

#[derive(Debug, Subcommand)]
enum CharsCommand {
    /// List the characters of N (default: all of G).
    List {
        #[arg(long)]
        group: PathBuf,
        #[arg(long)]
        normal: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
struct MeasureArgs {
    /// Haar weight of each point of G.
    #[arg(long, default_value_t = 1.0)]
    wg: f64,
    /// Haar weight of each point of N.
    #[arg(long, default_value_t = 1.0)]
    wn: f64,
}

impl MeasureArgs {
    fn measure(&self) -> Result<MeasureTriple> {
        weil_measure(self.wg, self.wn)
    }
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("character").required(true).args(["char", "char_file"])))]
struct TxiArgs {
    #[arg(long)]
    group: PathBuf,
    #[arg(long)]
    normal: PathBuf,
    /// Index into `chars list` for N.
    #[arg(long = "char", conflicts_with = "char_file")]
    char: Option<usize>,
    #[arg(long)]
    char_file: Option<PathBuf>,
    #[arg(long)]
    f: PathBuf,
    #[command(flatten)]
    measure: MeasureArgs,
}

#[derive(Debug, Args)]
struct ConvArgs {
    #[arg(long)]
    group: PathBuf,
    #[arg(long)]
    f: PathBuf,
    #[arg(long)]
    g: PathBuf,
    #[arg(long, default_value_t = 1.0)]
    wg: f64,
}

#[derive(Debug, Args)]
struct ModactArgs {
    #[arg(long)]
    group: PathBuf,
    #[arg(long)]
    f: PathBuf,
    #[arg(long)]
    psi: PathBuf,
    #[command(flatten)]
    measure: MeasureArgs,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("input").required(true).args(["psi", "f"])))]
struct NormArgs {
    #[arg(long)]
    group: PathBuf,
    #[arg(long)]
    p: f64,
    #[arg(long, conflicts_with = "f")]
    psi: Option<PathBuf>,
    #[arg(long)]
    f: Option<PathBuf>,
    #[command(flatten)]
    measure: MeasureArgs,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// `builtin` or a corpus JSON file; repeatable.
    #[arg(long, default_value = "builtin")]
    corpus: Vec<String>,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 50)]
    trials: usize,
    /// Replace every per-check threshold.
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Debug, Args)]
struct BenchArgs {
    m: usize,
    r: usize,
    #[arg(long, default_value_t = 2000)]
    reps: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Print the report as JSON instead of a table.
    #[arg(long)]
    json: bool,
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    if let Err(e) = configure_threads() {
        let _ = writeln!(err, "error[{}]: {e}", e.kind());
        return EXIT_USAGE;
    }
    match dispatch(cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error[{}]: {e}", e.kind());
            EXIT_USAGE
        }
    }
}

fn configure_threads() -> Result<()> {
    let Ok(value) = std::env::var(THREADS_ENV) else { return Ok(()) };
    let threads: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Error::Validation(format!("{THREADS_ENV} must be a positive integer, got {value:?}")))?;
    // A pool configured by an earlier call in the same process stays in place.
    let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    Ok(())
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))?;
    json::from_str(&text)
}

fn load_group(path: &Path) -> Result<Arc<FiniteGroup>> {
    Ok(Arc::new(read_json::<GroupJson>(path)?.to_group()?))
}

fn emit<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<()> {
    writeln!(out, "{}", json::to_string_pretty(value)?)?;
    Ok(())
}

fn dispatch(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Group(GroupCommand::Make(make)) => {
            let group = make_group(make)?;
            emit(out, &GroupJson::from_group(&group))?;
        }
        Command::Group(GroupCommand::Show { file }) => {
            emit(out, &summarize(&load_group(&file)?))?;
        }
        Command::Chars(CharsCommand::List { group, normal }) => {
            let g = load_group(&group)?;
            let n = match normal {
                Some(path) => read_json::<SubgroupJson>(&path)?.to_subgroup(&g)?,
                None => Subgroup::full(g.clone()),
            };
            let listing = CharacterList {
                group: group_id(&g),
                members: n.members().to_vec(),
                characters: enumerate_characters(&n).iter().map(CharacterJson::from_character).collect(),
            };
            emit(out, &listing)?;
        }
        Command::Txi(args) => {
            let g = load_group(&args.group)?;
            let n = read_json::<SubgroupJson>(&args.normal)?.to_subgroup(&g)?;
            let quotient = Arc::new(QuotientGroup::new(&n)?);
            let chi = match (args.char, &args.char_file) {
                (Some(idx), _) => {
                    let chars = enumerate_characters(&n);
                    let count = chars.len();
                    chars.into_iter().nth(idx).ok_or_else(|| {
                        Error::InvalidCharacter(format!("index {idx} out of range, N has {count} characters"))
                    })?
                }
                (None, Some(path)) => read_json::<CharacterJson>(path)?.to_character(&g)?,
                (None, None) => unreachable!("clap requires one of --char, --char-file"),
            };
            let f = read_json::<FunctionJson>(&args.f)?.to_function(&g)?;
            let psi = t_xi(&f, &chi, &quotient, &args.measure.measure()?)?;
            emit(out, &CovariantJson::from_covariant(&psi))?;
        }
        Command::Conv(args) => {
            let g = load_group(&args.group)?;
            let f = read_json::<FunctionJson>(&args.f)?.to_function(&g)?;
            let h = read_json::<FunctionJson>(&args.g)?.to_function(&g)?;
            let measure = weil_measure(args.wg, 1.0)?;
            emit(out, &FunctionJson::from_function(&convolve(&f, &h, &measure)?))?;
        }
        Command::Modact(args) => {
            let g = load_group(&args.group)?;
            let f = read_json::<FunctionJson>(&args.f)?.to_function(&g)?;
            let psi = read_json::<CovariantJson>(&args.psi)?.to_covariant(&g)?;
            let out_psi = module_action(&f, &psi, &args.measure.measure()?)?;
            emit(out, &CovariantJson::from_covariant(&out_psi))?;
        }
        Command::Norm(args) => {
            let g = load_group(&args.group)?;
            let measure = args.measure.measure()?;
            let value = match (&args.psi, &args.f) {
                (Some(path), _) => cov_norm(&read_json::<CovariantJson>(path)?.to_covariant(&g)?, args.p, &measure)?,
                (None, Some(path)) => lp_norm(&read_json::<FunctionJson>(path)?.to_function(&g)?, args.p, measure.w_g)?,
                (None, None) => unreachable!("clap requires one of --psi, --f"),
            };
            writeln!(out, "{}", format_f64(value))?;
        }
        Command::Verify(args) => return cmd_verify(&args, out, err),
        Command::Bench(args) => {
            let report = match run_bench(args.m, args.r, args.reps, args.seed) {
                Err(Error::Validation(msg)) => {
                    writeln!(err, "verification failed: {msg}")?;
                    return Ok(EXIT_FAILED);
                }
                other => other?,
            };
            if args.json {
                emit(out, &report)?;
            } else {
                write!(out, "{}", report.table())?;
            }
        }
    }
    Ok(EXIT_OK)
}

fn cmd_verify(args: &VerifyArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let mut corpus = Corpus::default();
    for spec in &args.corpus {
        let part = if spec == "builtin" {
            Corpus::builtin()?
        } else {
            read_json::<CorpusFile>(Path::new(spec))?.into_corpus()?
        };
        corpus.extend(part);
    }
    let start = Instant::now();
    let report = run_suite(&corpus, &SuiteConfig { seed: args.seed, trials: args.trials, tol: args.tol })?;
    emit(out, &report)?;
    write!(err, "{}", report.summary())?;
    writeln!(err, "{} in {:.2}s", if report.passed { "passed" } else { "FAILED" }, start.elapsed().as_secs_f64())?;
    Ok(if report.passed { EXIT_OK } else { EXIT_FAILED })
}

fn make_group(make: MakeCommand) -> Result<FiniteGroup> {
    Ok(match make {
        MakeCommand::Cyclic { m } => FiniteGroup::cyclic(m)?,
        MakeCommand::Product { a, b } => FiniteGroup::product(&*load_group(&a)?, &*load_group(&b)?)?,
        MakeCommand::Symmetric { n } => FiniteGroup::symmetric(n)?,
        MakeCommand::Heisenberg { m } => (**heisenberg_finite(m)?.product()).clone(),
        MakeCommand::WeylHeisenberg { m, r } => (**weyl_heisenberg_finite(m, r)?.product()).clone(),
        MakeCommand::Semidirect { h, k, action } => {
            let action = read_json::<ActionJson>(&action)?;
            (**semidirect(load_group(&h)?, load_group(&k)?, &action.action)?.product()).clone()
        }
    })
}

#[derive(Serialize)]
struct CharacterList {
    group: String,
    members: Vec<usize>,
    characters: Vec<CharacterJson>,
}

#[derive(Serialize)]
struct GroupSummary {
    id: String,
    order: usize,
    identity: usize,
    abelian: bool,
    element_orders: Vec<usize>,
    center: Vec<usize>,
    derived: Vec<usize>,
}

fn summarize(g: &Arc<FiniteGroup>) -> GroupSummary {
    GroupSummary {
        id: group_id(g),
        order: g.order(),
        identity: g.identity(),
        abelian: g.is_abelian(),
        element_orders: (0..g.order()).map(|x| g.element_order(x)).collect(),
        center: Subgroup::center(g.clone()).members().to_vec(),
        derived: Subgroup::derived(g.clone()).members().to_vec(),
    }
}
