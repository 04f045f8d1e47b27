//! `cubestat`: subcube statistics, bounds, cliques and verifiers from the
//! command line.

mod report;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use cubestat::arithmetic;
use cubestat::constructions::{best_bounds, certify, ConstructionSpec};
use cubestat::cube::{VertexSet, DEFAULT_MAX_N, HARD_MAX_N};
use cubestat::johnson::{johnson_graph, max_clique, omega, OmegaPolicy, SearchBudget, MAX_EXPLICIT_S};
use cubestat::stats::{distribution_fast, exhaustive_lambda, ExhaustiveOptions, UpperSource};
use cubestat::verify::{run_suite, Suite, SuiteOptions};
use cubestat::Error;

use report::{Report, Table};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Parser, Serialize)]
#[command(name = "cubestat", version, about = "Exact subcube statistics in hypercubes")]
pub struct Cli {
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads (defaults to the number of CPUs).
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// Largest cube dimension a set may be materialized in.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_N)]
    pub max_n: u32,
    /// Allow the exhaustive search at n = 5.
    #[arg(long, global = true)]
    pub opt_in_n5: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(tag = "name", rename_all = "kebab-case")]
pub enum Command {
    /// Distribution of subcube counts for a set file or a construction.
    Dist {
        /// Vertex set file.
        #[arg(long, conflicts_with = "spec")]
        set: Option<PathBuf>,
        /// Construction spec file (JSON with a `kind` field).
        #[arg(long)]
        spec: Option<PathBuf>,
        #[arg(long)]
        d: u32,
        /// Also report lambda at this count.
        #[arg(long)]
        s: Option<u64>,
    },
    /// Maximum of lambda(n, d, s, A) over all A, with a witness.
    Exhaustive {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        d: u32,
        #[arg(long)]
        s: u64,
        /// Write the witness set here.
        #[arg(long)]
        witness: Option<PathBuf>,
    },
    /// Lower and upper bounds on lambda(d, s).
    Bounds {
        #[arg(long)]
        d: u32,
        #[arg(long)]
        s: u64,
    },
    /// Clique number of J(4s, 2s, s), exact or as an interval.
    Omega {
        #[arg(long)]
        s: u32,
        /// Run a clique search when no Hadamard construction applies.
        #[arg(long)]
        search: bool,
        #[arg(long)]
        max_nodes: Option<u64>,
    },
    /// Branch-and-bound maximum clique search in J(4s, 2s, s).
    Clique {
        #[arg(long)]
        s: u32,
        #[arg(long)]
        max_nodes: Option<u64>,
        #[arg(long)]
        max_time_ms: Option<u64>,
    },
    /// Build a construction and certify its claim by enumeration.
    Construct {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        d: Option<u32>,
        #[arg(long)]
        s: Option<u64>,
        /// Write the built set here.
        #[arg(long)]
        set_out: Option<PathBuf>,
    },
    /// Run a named verification suite.
    Verify {
        /// prop31 | thm32 | approx | third-layer | clique-certs | oracle-equivalence
        suite: String,
        #[arg(long, default_value_t = 200)]
        instances: usize,
    },
    /// Layered construction approximating a target density.
    Approx {
        #[arg(long)]
        x: f64,
        #[arg(long)]
        eps: f64,
        /// Dimensions to check (defaults to the threshold dimension).
        #[arg(long, value_delimiter = ',')]
        check_d: Vec<u64>,
    },
}

/// Failure categories mapped to exit codes.
#[derive(Debug)]
pub enum Failure {
    Verification(String),
    Usage(String),
    Capability(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Verification(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Capability(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Verification(m) | Failure::Usage(m) | Failure::Capability(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Capability(_) => Failure::Capability(e.to_string()),
            Error::Certificate(_) => Failure::Verification(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

fn io_failure(path: &std::path::Path, e: std::io::Error) -> Failure {
    Failure::Usage(format!("{}: {e}", path.display()))
}

fn read(path: &std::path::Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| io_failure(path, e))
}

fn write(path: &std::path::Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| io_failure(path, e))
}

fn check_n(n: u32, cli: &Cli) -> Result<(), Failure> {
    if n > cli.max_n.min(HARD_MAX_N) {
        return Err(Failure::Capability(format!("n={n} exceeds --max-n {}", cli.max_n.min(HARD_MAX_N))));
    }
    Ok(())
}

fn load_spec(path: &std::path::Path) -> Result<ConstructionSpec, Failure> {
    serde_json::from_str(&read(path)?).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn budget(max_nodes: Option<u64>, max_time_ms: Option<u64>) -> SearchBudget {
    SearchBudget { max_nodes, max_time: max_time_ms.map(Duration::from_millis) }
}

/// Every output ends with a newline and the same bytes for the same config.
fn run(cli: &Cli) -> Result<(Report, Option<Failure>), Failure> {
    let mut report = Report::new(cli);
    let mut verdict = None;
    match &cli.command {
        Command::Dist { set, spec, d, s } => {
            let set = match (set, spec) {
                (Some(path), None) => {
                    let set = VertexSet::from_json(&read(path)?)?;
                    check_n(set.n(), cli)?;
                    set
                }
                (None, Some(path)) => {
                    let spec = load_spec(path)?;
                    check_n(spec.n(), cli)?;
                    spec.build()?
                }
                _ => return Err(Failure::Usage("dist needs exactly one of --set or --spec".into())),
            };
            let dist = distribution_fast(&set, *d)?;
            let lambda = s.map(|s| dist.lambda(s)).transpose()?;
            let mut table = Table::new(&["s", "count", "lambda"]);
            for (k, count) in dist.nonzero() {
                table.row(vec![k.to_string(), count.to_string(), dist.lambda(k)?.to_string()]);
            }
            report.result = serde_json::json!({
                "distribution": dist,
                "s": s,
                "lambda": lambda.map(|l| l.to_string()),
            });
            report.table = table;
        }
        Command::Exhaustive { n, d, s, witness } => {
            let r = exhaustive_lambda(*n, *d, *s, ExhaustiveOptions { allow_n5: cli.opt_in_n5 })?;
            if let Some(path) = witness {
                write(path, &format!("{}\n", r.witness.to_json()?))?;
            }
            let mut table = Table::new(&["n", "d", "s", "value", "best_count", "total"]);
            table.row(vec![
                n.to_string(),
                d.to_string(),
                s.to_string(),
                r.value.to_string(),
                r.best_count.to_string(),
                r.total.to_string(),
            ]);
            report.result = serde_json::json!({
                "value": r.value.to_string(),
                "best_count": r.best_count,
                "total": r.total,
                "witness": r.witness,
            });
            report.table = table;
        }
        Command::Bounds { d, s } => {
            let b = best_bounds(*d, *s)?;
            if b.upper_source == UpperSource::ReferenceConstant {
                report.provenance.push(format!(
                    "reference-constant: upper bound for lambda({d},1) is a published flag-algebra value, stored as a decimal and not recomputed"
                ));
            }
            let mut table = Table::new(&["d", "s", "lower", "upper", "lower_witness", "upper_source"]);
            table.row(vec![
                d.to_string(),
                s.to_string(),
                b.lower.to_string(),
                b.upper.to_string(),
                b.lower_witness.clone(),
                serde_json::to_value(b.upper_source)?.as_str().unwrap_or_default().to_string(),
            ]);
            report.result = serde_json::to_value(&b)?;
            report.table = table;
        }
        Command::Omega { s, search, max_nodes } => {
            let policy = OmegaPolicy { search: search.then(|| budget(*max_nodes, None)) };
            let r = omega(*s, &policy)?;
            let mut table = Table::new(&["s", "lower", "upper", "exact", "source"]);
            table.row(vec![
                s.to_string(),
                r.lower.to_string(),
                r.upper.to_string(),
                r.is_exact().to_string(),
                r.source.clone(),
            ]);
            report.result = serde_json::json!({
                "s": s,
                "lower": r.lower,
                "upper": r.upper,
                "exact": r.is_exact(),
                "source": r.source,
                "certificate": r.certificate,
            });
            report.table = table;
        }
        Command::Clique { s, max_nodes, max_time_ms } => {
            if *s > MAX_EXPLICIT_S {
                return Err(Failure::Capability(format!("explicit J(4s,2s,s) supports s<={MAX_EXPLICIT_S}")));
            }
            let found = max_clique(&johnson_graph(*s)?, &budget(*max_nodes, *max_time_ms));
            let mut table = Table::new(&["member", "elements"]);
            for i in 0..found.certificate.size() {
                let elems: Vec<String> = found.certificate.member_elements(i).iter().map(|e| e.to_string()).collect();
                table.row(vec![i.to_string(), elems.join(" ")]);
            }
            // Node counts depend on the time budget, so they stay out of the
            // report when a wall-clock limit is set.
            report.result = serde_json::json!({
                "s": s,
                "size": found.certificate.size(),
                "optimal": found.optimal,
                "nodes": if max_time_ms.is_some() { None } else { Some(found.nodes) },
                "certificate": found.certificate,
            });
            report.table = table;
        }
        Command::Construct { spec, d, s, set_out } => {
            let spec = load_spec(spec)?;
            check_n(spec.n(), cli)?;
            let cert = certify(&spec, *d, *s)?;
            if let Some(path) = set_out {
                write(path, &format!("{}\n", spec.build()?.to_json()?))?;
            }
            let mut table = Table::new(&["kind", "n", "d", "s", "size", "claimed", "verified", "pass"]);
            table.row(vec![
                spec.kind().to_string(),
                cert.n.to_string(),
                cert.d.to_string(),
                cert.s.to_string(),
                cert.size.to_string(),
                cert.claimed.as_ref().map(|c| c.to_string()).unwrap_or_default(),
                cert.verified.to_string(),
                cert.pass.map(|p| p.to_string()).unwrap_or_default(),
            ]);
            if cert.pass == Some(false) {
                verdict = Some(Failure::Verification(format!(
                    "claimed {} but verified {}",
                    cert.claimed.as_ref().map(|c| c.to_string()).unwrap_or_default(),
                    cert.verified
                )));
            }
            report.result = serde_json::to_value(&cert)?;
            report.table = table;
        }
        Command::Verify { suite, instances } => {
            let suite: Suite = suite.parse()?;
            let r = run_suite(suite, &SuiteOptions { seed: cli.seed, instances: *instances })?;
            let mut table = Table::new(&["suite", "check", "passed", "detail"]);
            for c in &r.checks {
                table.row(vec![suite.to_string(), c.name.clone(), c.passed.to_string(), c.detail.clone()]);
            }
            if !r.passed {
                let failed: Vec<&str> = r.checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
                verdict = Some(Failure::Verification(format!("{suite}: failed {}", failed.join(", "))));
            }
            report.result = serde_json::to_value(&r)?;
            report.table = table;
        }
        Command::Approx { x, eps, check_d } => {
            let spec = arithmetic::approx_construct(*x, *eps)?;
            let dims = if check_d.is_empty() { vec![spec.d_min.max(1)] } else { check_d.clone() };
            let mut table = Table::new(&["d", "p", "q", "max_error", "bound", "bound_ok", "borderline"]);
            let mut checks = Vec::new();
            for d in dims {
                let c = arithmetic::check_approx(&spec, d)?;
                table.row(vec![
                    d.to_string(),
                    spec.p.to_string(),
                    spec.q.to_string(),
                    c.max_error.to_string(),
                    format!("{:e}", c.bound),
                    c.bound_ok.to_string(),
                    c.borderline.to_string(),
                ]);
                if !c.bound_ok {
                    verdict = Some(Failure::Verification(format!("bound fails at d={d}")));
                }
                checks.push(c);
            }
            report.result = serde_json::json!({ "spec": spec, "checks": checks });
            report.table = table;
        }
    }
    Ok((report, verdict))
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(workers) = cli.workers {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(workers).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let outcome = run(&cli).and_then(|(report, verdict)| {
        let text = report.render(cli.format)?;
        match &cli.out {
            Some(path) => write(path, &text)?,
            None => print!("{text}"),
        }
        Ok(verdict)
    });
    match outcome {
        Ok(None) => ExitCode::SUCCESS,
        Ok(Some(f)) | Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
