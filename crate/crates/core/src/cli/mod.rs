//! Batch experiment runner.
//!
//! [`main_from_args`] is the whole command-line program; the `bivalued`
//! binary only forwards to it. Exit codes: 0 on success, 1 on usage errors
//! (nothing is written), 2 when an exact identity check fails (the report is
//! still written and the violated identity is named on stderr).

use std::ffi::OsString;
use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::analysis::{self, DistributionIdentities};
use crate::auctions::{randomized, AuctionKind};
use crate::bids::{AuctionParams, BidVector};
use crate::error::Error;
use crate::surd::Surd;

pub mod report;

use report::{
    BlockCheckDetail, Detail, ExpectationPoint, ExperimentReport, NhLoss, ReportRow, SweepDetail,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_IDENTITY: i32 = 2;

pub const DEFAULT_SAMPLES: u64 = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Exhaustive worst-case additive loss.
    Sweep,
    /// DOP on a vector with n/h h-bids.
    DemoDop,
    /// Exact identities under the lower-bound distribution.
    DistD,
    /// Monte Carlo under the lower-bound distribution.
    Mc,
    /// Block structure of the derandomized schedule.
    BlockCheck,
    /// Exact expected revenue of the randomized auction.
    Expectation,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Sweep => "sweep",
            Command::DemoDop => "demo-dop",
            Command::DistD => "dist-d",
            Command::Mc => "mc",
            Command::BlockCheck => "block-check",
            Command::Expectation => "expectation",
        }
    }
}

/// One experiment; also the entry type of batch files.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Experiment {
    pub command: Command,
    /// Required except for `demo-dop`, which defaults to `h²`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    pub h: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub auction: Option<AuctionKind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// A single `H`/`L` vector for `block-check` and `expectation`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bids: Option<String>,
    /// Enumeration cap override.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub limit: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub output_format: OutputFormat,
    pub output_path: Option<PathBuf>,
}

/// A usage or configuration problem; maps to exit code 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

impl From<Error> for UsageError {
    fn from(e: Error) -> Self {
        UsageError(e.to_string())
    }
}

/// Parameters resolved from an [`Experiment`].
struct Resolved {
    params: AuctionParams,
    auction: AuctionKind,
    samples: u64,
    seed: u64,
    limit: usize,
    bids: Option<BidVector>,
}

impl Experiment {
    fn resolve(&self) -> Result<Resolved, UsageError> {
        let n = match (self.n, self.command) {
            (Some(n), _) => n,
            (None, Command::DemoDop) => self
                .h
                .checked_mul(self.h)
                .map(|v| v as usize)
                .ok_or_else(|| UsageError(format!("field `h` = {} too large", self.h)))?,
            (None, _) => return Err(UsageError("missing field `n`".into())),
        };
        if n == 0 {
            return Err(UsageError("field `n` must be positive".into()));
        }
        if self.h < 2 {
            return Err(UsageError("field `h` must be at least 2".into()));
        }
        let params = AuctionParams::new(n, self.h)?;
        let samples = self.samples.unwrap_or(DEFAULT_SAMPLES);
        if samples == 0 {
            return Err(UsageError("field `samples` must be positive".into()));
        }
        let auction = self.auction.unwrap_or(AuctionKind::Derand);
        let limit = self.limit.unwrap_or(analysis::DEFAULT_ENUMERATION_LIMIT);
        let bids = self.bids.as_deref().map(|text| BidVector::parse(params, text)).transpose()?;
        if bids.is_some() && !matches!(self.command, Command::BlockCheck | Command::Expectation) {
            return Err(UsageError(format!("field `bids` is not used by {}", self.command.name())));
        }
        match self.command {
            Command::Sweep | Command::Mc => {
                auction.rule(params)?;
            }
            Command::DemoDop | Command::DistD => {
                params.high_quota()?;
            }
            Command::BlockCheck | Command::Expectation => {}
        }
        let enumerates = match self.command {
            Command::Sweep => true,
            Command::BlockCheck => bids.is_none(),
            _ => false,
        };
        if enumerates && (n > limit || n >= 64) {
            return Err(Error::EnumerationLimit { n, limit }.into());
        }
        Ok(Resolved { params, auction, samples, seed: self.seed.unwrap_or(0), limit, bids })
    }
}

fn int(v: u64) -> Surd {
    Surd::from_integer(v as i64)
}

fn base_row(command: Command, params: AuctionParams) -> ReportRow {
    ReportRow { command: command.name().into(), n: params.n(), h: params.h(), ..Default::default() }
}

fn gap_if_divisible(params: AuctionParams) -> Option<BigRational> {
    analysis::lower_bound_gap(params).ok()
}

/// Runs the analysis behind `experiment` and assembles its report.
pub fn execute(experiment: &Experiment) -> Result<ExperimentReport, UsageError> {
    let r = experiment.resolve()?;
    let params = r.params;
    let command = experiment.command;
    let scale = params.loss_scale();
    let (rows, detail) = match command {
        Command::Sweep => {
            let profile = analysis::worst_case_sweep_with_limit(params, r.auction, r.limit)?;
            let witness_loss = analysis::additive_loss(&profile.witness, r.auction)?;
            let opt = int(profile.witness.offline_optimal());
            let gap = gap_if_divisible(params);
            let row = ReportRow {
                auction: Some(r.auction.name().into()),
                n_h: Some(profile.witness.count_high()),
                revenue: Some(&opt - &witness_loss),
                opt: Some(opt),
                loss: Some(profile.global_worst.clone()),
                normalized_loss: Some(profile.normalized()),
                gap: gap.clone(),
                ..base_row(command, params)
            };
            let detail = SweepDetail {
                global_worst: profile.global_worst.clone(),
                normalized: profile.normalized(),
                witness: profile.witness.to_bitstring(),
                witness_loss,
                lower_bound_gap: gap,
                per_nh_worst: profile
                    .per_nh_worst
                    .iter()
                    .map(|(&n_h, loss)| NhLoss { n_h, loss: loss.clone() })
                    .collect(),
            };
            (vec![row], Detail::LossProfile(detail))
        }
        Command::DemoDop => {
            let demo = analysis::dop_unboundedness_demo(params.h(), Some(params.n()))?;
            let loss = demo.opt as i64 - demo.revenue as i64;
            let row = ReportRow {
                auction: Some(AuctionKind::Dop.name().into()),
                n_h: Some(demo.count_high),
                opt: Some(int(demo.opt)),
                revenue: Some(int(demo.revenue)),
                loss: Some(Surd::from_integer(loss)),
                normalized_loss: Some(loss as f64 / scale),
                ..base_row(command, params)
            };
            (vec![row], Detail::DopDemo(demo))
        }
        Command::DistD => {
            let ids = DistributionIdentities::compute(params)?;
            let row = ReportRow {
                auction: Some(AuctionKind::ThresholdDop.name().into()),
                n_h: Some(params.high_quota()?),
                opt: Some(Surd::from_rational(ids.e_opt.clone())),
                revenue: Some(Surd::from_rational(ids.e_dop.clone())),
                loss: Some(Surd::from_rational(&ids.e_opt - &ids.e_dop)),
                normalized_loss: Some(Surd::from_rational(ids.gap.clone()).to_f64() / scale),
                gap: Some(ids.gap.clone()),
                ..base_row(command, params)
            };
            (vec![row], Detail::DistributionD(ids))
        }
        Command::Mc => {
            let mc = analysis::monte_carlo_under_d(params, r.auction, r.samples, r.seed)?;
            let gap = mc.exact.as_ref().map(|e| e.gap.clone());
            let sampled = |auction: &str, mean: f64, stderr: f64| ReportRow {
                auction: Some(auction.into()),
                seed: Some(r.seed),
                samples: Some(r.samples),
                mean: Some(mean),
                stderr: Some(stderr),
                gap: gap.clone(),
                ..base_row(command, params)
            };
            let rows = vec![
                sampled(r.auction.name(), mc.mc_mean_auction, mc.mc_stderr_auction),
                sampled("offline-optimal", mc.mc_mean_opt, mc.mc_stderr_opt),
            ];
            (rows, Detail::MonteCarlo(mc))
        }
        Command::BlockCheck => {
            let (checked, failure) = match &r.bids {
                Some(b) => (1, analysis::block_structure_check(b).err().map(|v| (b.clone(), v))),
                None => match analysis::block_structure_sweep(params) {
                    Ok(count) => (count, None),
                    Err(failure) => (failure.0.to_mask().map_or(0, |m| m.bits() + 1), Some(failure)),
                },
            };
            let mut row = ReportRow { auction: Some(AuctionKind::Derand.name().into()), ..base_row(command, params) };
            if let Some(b) = &r.bids {
                let revenue = crate::auctions::derand::run(b).revenue();
                let opt = b.offline_optimal();
                row.n_h = Some(b.count_high());
                row.opt = Some(int(opt));
                row.revenue = Some(int(revenue));
                row.loss = Some(Surd::from_integer(opt as i64 - revenue as i64));
                row.normalized_loss = Some((opt as f64 - revenue as f64) / scale);
            }
            let detail = BlockCheckDetail {
                vectors_checked: checked,
                failing_vector: failure.as_ref().map(|(b, _)| b.to_bitstring()),
                violation: failure.map(|(_, v)| v),
            };
            (vec![row], Detail::BlockCheck(detail))
        }
        Command::Expectation => {
            let counts: Vec<usize> = match &r.bids {
                Some(b) => vec![b.count_high()],
                None => (0..=params.n()).collect(),
            };
            let mut rows = Vec::with_capacity(counts.len());
            let mut points = Vec::with_capacity(counts.len());
            for k in counts {
                let expectation = randomized::expectation_for_count(params, k);
                let opt = int((params.n() as u64).max(params.h() * k as u64));
                let loss = &opt - &expectation;
                rows.push(ReportRow {
                    auction: Some(AuctionKind::Randomized.name().into()),
                    n_h: Some(k),
                    normalized_loss: Some(loss.to_f64() / scale),
                    opt: Some(opt),
                    revenue: Some(expectation.clone()),
                    loss: Some(loss),
                    ..base_row(command, params)
                });
                points.push(ExpectationPoint { n_h: k, expectation });
            }
            (rows, Detail::Expectation { points })
        }
    };
    Ok(ExperimentReport { experiment: experiment.clone(), rows, detail })
}

impl ExperimentReport {
    /// Exact identities the report must satisfy; each entry names one that
    /// failed.
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        let n = self.rows.first().map_or(0, |r| r.n);
        let h = self.rows.first().map_or(0, |r| r.h);
        match &self.detail {
            Detail::LossProfile(d) => {
                if d.witness_loss != d.global_worst {
                    out.push("the witness must reproduce the worst-case loss".to_string());
                }
                if let Some(gap) = &d.lower_bound_gap {
                    if d.global_worst < Surd::from_rational(gap.clone()) {
                        out.push("worst-case loss must be at least the lower-bound gap".to_string());
                    }
                }
            }
            Detail::DopDemo(demo) => {
                if demo.ratio != BigRational::from_integer(BigInt::from(demo.h)) {
                    out.push("DOP competitive ratio on n/h h-bids must equal h".to_string());
                }
            }
            Detail::DistributionD(ids) => {
                out.extend(ids.violations().into_iter().map(|v| v.describe().to_string()));
            }
            Detail::MonteCarlo(mc) => {
                if let Some(ids) = &mc.exact {
                    out.extend(ids.violations().into_iter().map(|v| v.describe().to_string()));
                }
            }
            Detail::BlockCheck(d) => {
                if let Some(v) = &d.violation {
                    out.push(format!(
                        "block structure: run {} of {:?} has {} h-offers, expected {}",
                        v.block, v.class, v.found_high_offers, v.expected_high_offers
                    ));
                }
            }
            Detail::Expectation { points } => {
                let cap = Surd::from_integer((n as u64 * h) as i64);
                for p in points {
                    let e = &p.expectation;
                    if *e < Surd::zero() || *e > cap {
                        out.push(format!("expected revenue at n_h = {} must lie in [0, n*h]", p.n_h));
                    }
                }
            }
        }
        out
    }
}

/// Aggregated output of a batch file.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BatchReport {
    pub experiments: Vec<ExperimentReport>,
}

impl BatchReport {
    pub fn violations(&self) -> Vec<String> {
        self.experiments
            .iter()
            .enumerate()
            .flat_map(|(k, r)| r.violations().into_iter().map(move |v| format!("entry {k}: {v}")))
            .collect()
    }
}

/// Parses a batch file: a JSON array of [`Experiment`] objects. Every entry
/// is validated before anything runs.
pub fn parse_batch(text: &str) -> Result<Vec<Experiment>, UsageError> {
    let entries: Vec<Experiment> =
        serde_json::from_str(text).map_err(|e| UsageError(format!("batch file: {e}")))?;
    for (k, entry) in entries.iter().enumerate() {
        entry.resolve().map_err(|e| UsageError(format!("batch entry {k}: {e}")))?;
    }
    Ok(entries)
}

pub fn run_batch(entries: &[Experiment]) -> Result<BatchReport, UsageError> {
    let experiments = entries.iter().map(execute).collect::<Result<Vec<_>, _>>()?;
    Ok(BatchReport { experiments })
}

fn render_single(report: &ExperimentReport, format: OutputFormat) -> Vec<u8> {
    let mut buf = Vec::new();
    match format {
        OutputFormat::Csv => report::write_csv(&mut buf, &report.rows),
        OutputFormat::Json => report::write_json(&mut buf, report),
    }
    .expect("writing to memory");
    buf
}

fn render_batch(report: &BatchReport, format: OutputFormat) -> Vec<u8> {
    let mut buf = Vec::new();
    match format {
        OutputFormat::Csv => report::write_csv(&mut buf, report.experiments.iter().flat_map(|r| &r.rows)),
        OutputFormat::Json => report::write_json(&mut buf, report),
    }
    .expect("writing to memory");
    buf
}

fn emit(bytes: &[u8], path: Option<&Path>, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = match path {
        Some(p) => std::fs::write(p, bytes),
        None => out.write_all(bytes).and_then(|_| out.flush()),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: cannot write output: {e}");
            EXIT_USAGE
        }
    }
}

fn finish(bytes: &[u8], violations: &[String], path: Option<&Path>, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let code = emit(bytes, path, out, err);
    if code != EXIT_OK {
        return code;
    }
    if violations.is_empty() {
        EXIT_OK
    } else {
        for v in violations {
            let _ = writeln!(err, "identity violated: {v}");
        }
        EXIT_IDENTITY
    }
}

/// Runs one experiment and writes its report. `tamper` sees the report
/// before the identity checks, which lets tests exercise exit code 2.
pub fn run_with(
    config: &ExperimentConfig,
    tamper: impl FnOnce(&mut ExperimentReport),
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32 {
    let mut report = match execute(&config.experiment) {
        Ok(r) => r,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_USAGE;
        }
    };
    tamper(&mut report);
    let violations = report.violations();
    let bytes = render_single(&report, config.output_format);
    finish(&bytes, &violations, config.output_path.as_deref(), out, err)
}

pub fn run(config: &ExperimentConfig, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    run_with(config, |_| {}, out, err)
}

/// Runs a batch file; fails fast on any malformed entry.
pub fn batch(
    path: &Path,
    format: OutputFormat,
    output: Option<&Path>,
    limit: Option<usize>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32 {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => {
            let _ = writeln!(err, "error: cannot read {}: {e}", path.display());
            return EXIT_USAGE;
        }
    };
    let parsed = parse_batch(&text).and_then(|mut entries| {
        if let Some(limit) = limit {
            for e in &mut entries {
                e.limit.get_or_insert(limit);
            }
            // re-check against the overridden cap
            for (k, e) in entries.iter().enumerate() {
                e.resolve().map_err(|err| UsageError(format!("batch entry {k}: {err}")))?;
            }
        }
        run_batch(&entries)
    });
    match parsed {
        Ok(report) => {
            let violations = report.violations();
            finish(&render_batch(&report, format), &violations, output, out, err)
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "bivalued", version, about = "Bi-valued digital-good auction experiments")]
struct Cli {
    #[command(subcommand)]
    command: CliCommand,
    /// Output encoding.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Csv)]
    format: OutputFormat,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Worker threads (default: hardware parallelism).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Enumeration cap for exhaustive commands.
    #[arg(long, global = true)]
    limit: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum CliCommand {
    /// Exhaustive worst-case additive loss over all 2^n vectors.
    Sweep(ExperimentArgs),
    /// DOP on n/h h-bids (n defaults to h²).
    DemoDop(ExperimentArgs),
    /// Exact expectations and gap under the lower-bound distribution.
    DistD(ExperimentArgs),
    /// Monte Carlo means under the lower-bound distribution.
    Mc(ExperimentArgs),
    /// Block structure of the derandomized schedule.
    BlockCheck(ExperimentArgs),
    /// Exact expected revenue of the randomized auction.
    Expectation(ExperimentArgs),
    /// Run a JSON array of experiments.
    Batch {
        /// Path to the batch file.
        file: PathBuf,
    },
}

#[derive(Debug, Args)]
struct ExperimentArgs {
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    h: u64,
    /// dop, threshold-dop, randomized or derand.
    #[arg(long)]
    auction: Option<String>,
    #[arg(long)]
    samples: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    /// A single bid vector as H/L characters, bidder 1 first.
    #[arg(long)]
    bids: Option<String>,
}

/// The full command-line program.
pub fn main_from_args<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    let threads = cli.threads.unwrap_or(0);
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(pool) => pool,
        Err(e) => {
            let _ = writeln!(err, "error: cannot start worker pool: {e}");
            return EXIT_USAGE;
        }
    };
    let (code, stdout, stderr) = pool.install(|| {
        let (mut o, mut e) = (Vec::new(), Vec::new());
        let code = dispatch(cli, &mut o, &mut e);
        (code, o, e)
    });
    let _ = out.write_all(&stdout).and_then(|_| out.flush());
    let _ = err.write_all(&stderr);
    code
}

fn dispatch(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let (command, args) = match cli.command {
        CliCommand::Batch { file } => {
            return batch(&file, cli.format, cli.output.as_deref(), cli.limit, out, err);
        }
        CliCommand::Sweep(a) => (Command::Sweep, a),
        CliCommand::DemoDop(a) => (Command::DemoDop, a),
        CliCommand::DistD(a) => (Command::DistD, a),
        CliCommand::Mc(a) => (Command::Mc, a),
        CliCommand::BlockCheck(a) => (Command::BlockCheck, a),
        CliCommand::Expectation(a) => (Command::Expectation, a),
    };
    let auction = match args.auction.as_deref().map(str::parse::<AuctionKind>).transpose() {
        Ok(a) => a,
        Err(e) => {
            let _ = writeln!(err, "error: {e}\n\nknown auctions: dop, threshold-dop, randomized, derand");
            return EXIT_USAGE;
        }
    };
    let config = ExperimentConfig {
        experiment: Experiment {
            command,
            n: args.n,
            h: args.h,
            auction,
            samples: args.samples,
            seed: args.seed,
            bids: args.bids,
            limit: cli.limit,
        },
        output_format: cli.format,
        output_path: cli.output,
    };
    run(&config, out, err)
}
