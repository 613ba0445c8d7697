use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use heisendyn::run::{self, CoverOpts, ExpansiveOpts};

/// Certified computation for principal algebraic actions of the discrete
/// Heisenberg group: expansiveness verdicts, q-binomial norm tables,
/// homoclinic kernels, symbolic-cover experiments and entropy integrals.
#[derive(Parser)]
#[command(name = "heisendyn", version, disable_help_subcommand = true)]
struct Cli {
    /// Worker threads (default: logical cores; env HEISENDYN_THREADS).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide expansiveness of the principal action of a polynomial.
    Expansive(ExpansiveArgs),
    /// Exact q-binomial norm series S(n), T(n) and dyadic block sums.
    Qbin(QbinArgs),
    /// Build the summable homoclinic kernel and check membership defects.
    Homoclinic(HomoclinicArgs),
    /// Toppling stabilization and the symbolic-cover distance experiment.
    Cover(CoverArgs),
    /// Entropy lower bound for elements linear in one generator.
    Entropy(EntropyArgs),
    /// Truncated ℓ¹ inverse with exact residual.
    Inverse(InverseArgs),
    /// Scan the nonnegative-quotient conjecture over coprime pairs.
    Conjecture(ConjectureArgs),
}

#[derive(Args)]
struct ExpansiveArgs {
    /// Polynomial in x, y, z, e.g. "3 + x + y + z".
    poly: String,
    /// Localization grid size on the circle of central characters.
    #[arg(long, default_value_t = 512)]
    grid: u32,
    /// Largest representation dimension searched for witnesses.
    #[arg(long, default_value_t = 8)]
    pmax: u32,
    /// Neumann series truncation.
    #[arg(long, default_value_t = 18)]
    neumann_terms: u32,
    /// Use the slimmer sweep budgets.
    #[arg(long)]
    quick: bool,
}

#[derive(Args)]
struct QbinArgs {
    /// Largest n in the table.
    #[arg(long, default_value_t = 64)]
    table: u32,
    /// CSV output path for the full table.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct HomoclinicArgs {
    /// Kernel truncation (total (x,y)-degree).
    #[arg(long, default_value_t = 64)]
    levels: u32,
    /// Window radius for the membership-defect check.
    #[arg(long, default_value_t = 16)]
    window: i64,
    /// Dump the kernel coefficients ("(a,b,c) num/den" lines) here.
    #[arg(long)]
    dump: Option<PathBuf>,
}

#[derive(Args)]
struct CoverArgs {
    /// Box sizes, comma separated.
    #[arg(long, default_value = "2,4,6,8", value_delimiter = ',')]
    m_list: Vec<i64>,
    /// Number of random configurations.
    #[arg(long, default_value_t = 10)]
    trials: u32,
    /// Kernel truncation.
    #[arg(long, default_value_t = 32)]
    levels: u32,
    /// Window radius for the coding-map distances.
    #[arg(long, default_value_t = 2)]
    window: i64,
    /// RNG seed (trials are seeded seed, seed+1, …).
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Toppling cap per stabilization.
    #[arg(long, default_value_t = 1_000_000)]
    cap: u64,
}

#[derive(Args)]
struct EntropyArgs {
    /// Polynomial linear in x or y (possibly after a unit shift).
    poly: String,
    /// Outer quadrature nodes.
    #[arg(long, default_value_t = 256)]
    nodes: u32,
    /// CSV of the Mahler-difference samples over the central character.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct InverseArgs {
    /// Polynomial; defaults to the explicit series for 3 + x + y + z.
    #[arg(default_value = "3 + x + y + z")]
    poly: String,
    /// Outer truncation (powers of the non-central part).
    #[arg(long, default_value_t = 8)]
    outer: u32,
    /// Inner truncation (central series depth).
    #[arg(long, default_value_t = 32)]
    inner: u32,
}

#[derive(Args)]
struct ConjectureArgs {
    /// Scan all coprime (n, k) with n ≥ 2k, n up to this bound.
    #[arg(long, default_value_t = 40)]
    max_n: u32,
    /// CSV output path for the scan table.
    #[arg(long)]
    csv: Option<PathBuf>,
}

fn thread_count(cli: &Cli) -> usize {
    cli.threads
        .or_else(|| {
            std::env::var("HEISENDYN_THREADS")
                .ok()
                .and_then(|v| v.parse().ok())
        })
        .unwrap_or_else(|| {
            std::thread::available_parallelism()
                .map(|n| n.get())
                .unwrap_or(1)
        })
        .max(1)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help/version are successful exits; everything else is usage.
            use clap::error::ErrorKind;
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    let threads = thread_count(&cli);
    let out = cli.out.clone();
    let result = match &cli.command {
        Command::Expansive(a) => run::run_expansive(
            &a.poly,
            &ExpansiveOpts {
                grid: a.grid,
                p_max: a.pmax,
                neumann_terms: a.neumann_terms,
                quick: a.quick,
            },
        ),
        Command::Qbin(a) => run::run_qbin(a.table, a.csv.as_deref()),
        Command::Homoclinic(a) => run::run_homoclinic(a.levels, a.window, a.dump.as_deref()),
        Command::Cover(a) => run::run_cover(&CoverOpts {
            m_list: a.m_list.clone(),
            trials: a.trials,
            levels: a.levels,
            window_r: a.window,
            seed: a.seed,
            cap: a.cap,
            threads,
        }),
        Command::Entropy(a) => run::run_entropy(&a.poly, a.nodes, a.csv.as_deref()),
        Command::Inverse(a) => run::run_inverse(&a.poly, a.outer, a.inner),
        Command::Conjecture(a) => run::run_conjecture(a.max_n, a.csv.as_deref()),
    };
    match result {
        Ok((json, code)) => {
            if let Err(e) = run::emit(&json, out.as_deref()) {
                eprintln!("error: {}", e.message);
                return ExitCode::from(1);
            }
            ExitCode::from(code as u8)
        }
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(1)
        }
    }
}
