//! The `graceful` command line.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use graceful_core::bounds::{gamma, witness, Threshold};
use graceful_core::report::{
    compute_table, latest_checkpoint, load_checkpoint, ratios_from_table, render_count, render_ratios, render_stats,
    render_table, Checkpointer,
};
use graceful_core::search::{brute_force_table, dfs_count, enumerate, run_from, BRUTE_FORCE_LIMIT};
use graceful_core::{ClassMap, Constraint, Error, Format, SearchOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_REFUSED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "graceful", version, about = "Count and enumerate graceful permutations")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct EndpointArgs {
    /// Required left endpoint `a`.
    #[arg(long, conflicts_with = "endpoints")]
    pub endpoint: Option<usize>,
    /// Required endpoints `a,b` (start at a, end at b).
    #[arg(long, value_name = "A,B")]
    pub endpoints: Option<String>,
}

#[derive(Args, Debug, Clone)]
pub struct ThreadArgs {
    /// Worker threads (defaults to available parallelism).
    #[arg(long, env = "GRACEFUL_THREADS")]
    pub threads: Option<usize>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Count graceful n-permutations, optionally with fixed endpoints.
    Count {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        ends: EndpointArgs,
        #[command(flatten)]
        threads: ThreadArgs,
        #[arg(long, default_value = "plain")]
        format: String,
        /// Print per-level class statistics to stderr.
        #[arg(long)]
        stats: bool,
        /// Write a checkpoint after every level.
        #[arg(long)]
        checkpoint_dir: Option<PathBuf>,
        /// Continue from the deepest checkpoint in --checkpoint-dir.
        #[arg(long, requires = "checkpoint_dir")]
        resume: bool,
    },
    /// G(n) for a range of n.
    Table {
        #[arg(long)]
        from: usize,
        #[arg(long)]
        to: usize,
        #[arg(long, default_value = "plain")]
        format: String,
        #[command(flatten)]
        threads: ThreadArgs,
        /// Refuse once a level holds more classes than this.
        #[arg(long, default_value_t = 5_000_000)]
        max_classes: usize,
    },
    /// Growth ratios G(n+1)/G(n).
    Ratios {
        #[arg(long)]
        from: usize,
        #[arg(long)]
        to: usize,
        #[command(flatten)]
        threads: ThreadArgs,
    },
    /// List graceful permutations.
    Enumerate {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        ends: EndpointArgs,
        #[arg(long)]
        limit: Option<usize>,
    },
    /// G(2m; j, j+m), its growth base, and an optional exact certificate.
    Bound {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        j: usize,
        #[arg(long)]
        threshold: Option<String>,
        #[command(flatten)]
        threads: ThreadArgs,
    },
    /// Build a long graceful permutation by repeated gluing.
    Witness {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        j: usize,
        #[arg(long)]
        r: usize,
        #[arg(long, default_value_t = 1)]
        iterations: usize,
    },
    /// Check that the folded search, the plain tree walk and brute force agree.
    Verify {
        #[arg(long)]
        max_n: usize,
    },
    /// Per-level class counts of one search.
    Stats {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        ends: EndpointArgs,
        #[command(flatten)]
        threads: ThreadArgs,
    },
}

/// A failure with the exit status it maps to.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: EXIT_USAGE, message: message.into() }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::LabelOutOfRange { .. } | Error::InvalidSize(_) | Error::InvalidInput(_) => EXIT_USAGE,
            _ => EXIT_REFUSED,
        };
        Failure { code, message: e.to_string() }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure { code: EXIT_REFUSED, message: e.to_string() }
    }
}

fn constraint(n: usize, ends: &EndpointArgs) -> Result<Constraint, Failure> {
    let c = match (&ends.endpoint, &ends.endpoints) {
        (Some(a), _) => Constraint::OneEndpoint(*a),
        (None, Some(spec)) => match spec.parse::<Constraint>() {
            Ok(c @ Constraint::TwoEndpoints(..)) => c,
            _ => return Err(usage(format!("--endpoints: malformed endpoint spec {spec:?}, expected A,B"))),
        },
        (None, None) => Constraint::None,
    };
    let flag = if ends.endpoint.is_some() { "--endpoint" } else { "--endpoints" };
    c.validate(n).map_err(|e| usage(format!("{flag}: {e}")))?;
    Ok(c)
}

fn check_n(n: usize) -> Result<(), Failure> {
    if n == 0 || n > graceful_core::state::MAX_LABELS {
        return Err(usage(format!("--n: must be between 1 and {}", graceful_core::state::MAX_LABELS)));
    }
    Ok(())
}

fn options(threads: &ThreadArgs) -> Result<SearchOptions, Failure> {
    let mut opts = SearchOptions::default();
    if let Some(t) = threads.threads {
        if t == 0 {
            return Err(usage("--threads: must be at least 1"));
        }
        opts.threads = t;
    }
    Ok(opts)
}

fn format(s: &str) -> Result<Format, Failure> {
    s.parse().map_err(|_| usage(format!("--format: expected plain, csv or json, got {s:?}")))
}

fn execute(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), Failure> {
    match cli.command {
        Command::Count { n, ends, threads, format: fmt, stats, checkpoint_dir, resume } => {
            check_n(n)?;
            let c = constraint(n, &ends)?;
            let fmt = format(&fmt)?;
            let opts = options(&threads)?;
            let result = match checkpoint_dir {
                Some(dir) => {
                    let mut start = None;
                    let mut saver = Checkpointer::new(&dir, c, false)?;
                    if resume {
                        if let Some(path) = latest_checkpoint(&dir, n, &c) {
                            start = Some(load_checkpoint(&path, n, &c)?);
                            writeln!(err, "resuming from {}", path.display())?;
                            saver = saver.resumed_from(path);
                        }
                    }
                    let start = match start {
                        Some(map) => map,
                        None => ClassMap::root(n)?,
                    };
                    run_from(start, c, &opts, |map| saver.record(map))?
                }
                None => graceful_core::count_with(n, c, &opts)?,
            };
            out.write_all(render_count(&result, fmt)?.as_bytes())?;
            if stats {
                err.write_all(render_stats(&result).as_bytes())?;
            }
        }
        Command::Table { from, to, format: fmt, threads, max_classes } => {
            if from == 0 || to < from {
                return Err(usage("--from/--to: need 1 <= from <= to"));
            }
            let fmt = format(&fmt)?;
            let mut opts = options(&threads)?;
            opts.max_classes = Some(max_classes);
            let rows = compute_table(from, to, &opts)?;
            out.write_all(render_table(&rows, fmt)?.as_bytes())?;
        }
        Command::Ratios { from, to, threads } => {
            if from == 0 || to <= from {
                return Err(usage("--from/--to: need 1 <= from < to"));
            }
            let rows = compute_table(from, to, &options(&threads)?)?;
            out.write_all(render_ratios(&ratios_from_table(&rows)).as_bytes())?;
        }
        Command::Enumerate { n, ends, limit } => {
            check_n(n)?;
            let c = constraint(n, &ends)?;
            let e = enumerate(n, c, limit)?;
            for p in &e.permutations {
                writeln!(out, "{p}")?;
            }
            if e.truncated {
                writeln!(err, "output truncated at {} permutations", e.permutations.len())?;
            }
        }
        Command::Bound { m, j, threshold, threads } => {
            if m == 0 || j > m {
                return Err(usage("--m/--j: need m >= 1 and j <= m"));
            }
            if 2 * m > graceful_core::state::MAX_LABELS {
                return Err(usage("--m: 2m exceeds the label limit"));
            }
            let threshold = threshold
                .map(|t| t.parse::<Threshold>().map_err(|_| usage(format!("--threshold: malformed value {t:?}"))))
                .transpose()?;
            let b = gamma(m, j, threshold, &options(&threads)?)?;
            writeln!(out, "count: {}", b.count)?;
            writeln!(out, "gamma: {}", b.gamma_text)?;
            if b.empty {
                writeln!(err, "no graceful ({};{},{})-permutations: no bound", 2 * m, j, j + m)?;
            }
            if let Some((t, ok)) = b.certified {
                writeln!(out, "threshold: {t}")?;
                writeln!(out, "certified: {ok}")?;
            }
        }
        Command::Witness { m, j, r, iterations } => {
            if m == 0 || j >= m {
                return Err(usage("--m/--j: need j < m"));
            }
            if r <= j {
                return Err(usage("--r: need r > j"));
            }
            let w = witness(m, j, r, iterations)?;
            writeln!(out, "{w}")?;
            writeln!(err, "graceful {}-permutation starting at {}", w.len(), w.first())?;
        }
        Command::Verify { max_n } => {
            if max_n == 0 {
                return Err(usage("--max-n: must be at least 1"));
            }
            if max_n > BRUTE_FORCE_LIMIT {
                return Err(Error::TooLarge { n: max_n, limit: BRUTE_FORCE_LIMIT }.into());
            }
            let opts = SearchOptions::single_threaded();
            let mut checked = 0usize;
            for n in 1..=max_n {
                let table = brute_force_table(n)?;
                let mut cases = vec![(Constraint::None, table.iter().flatten().sum::<u128>())];
                for (a, row) in table.iter().enumerate() {
                    cases.push((Constraint::OneEndpoint(a), row.iter().sum()));
                    for (b, &count) in row.iter().enumerate() {
                        cases.push((Constraint::TwoEndpoints(a, b), count));
                    }
                }
                for (c, brute) in cases {
                    let bfs = graceful_core::count_with(n, c, &opts)?.count;
                    let dfs = dfs_count(n, c)?;
                    if bfs != brute || dfs != brute {
                        writeln!(out, "MISMATCH n={n} constraint={c}: search={bfs} walk={dfs} brute={brute}")?;
                        return Err(Failure { code: EXIT_REFUSED, message: "oracles disagree".into() });
                    }
                    checked += 1;
                }
            }
            writeln!(out, "all oracles agree ({checked} cases, n <= {max_n})")?;
        }
        Command::Stats { n, ends, threads } => {
            check_n(n)?;
            let c = constraint(n, &ends)?;
            let r = graceful_core::count_with(n, c, &options(&threads)?)?;
            out.write_all(render_stats(&r).as_bytes())?;
            writeln!(out, "count\t{}", r.count)?;
        }
    }
    Ok(())
}

/// Parses `argv` (program name first) and runs the command.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = if code == EXIT_OK { write!(out, "{e}") } else { write!(err, "{e}") };
            return code;
        }
    };
    match execute(cli, out, err) {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}
