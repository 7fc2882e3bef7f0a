//! Command-line front end. [`run`] is the whole program minus process I/O.

pub mod coloring_file;
pub mod dsl;
pub mod report;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::driver::{extend_decide, hindman_witness, iterated_decide, Coloring, DriverError};
use crate::family::{bounded_fip, frechet_family, trivial_family, Family, FipPolicy};
use crate::oracle::{brute_force_witness, min_forcing_bound, verify_witness, Target};
use crate::search::SearchLimits;
use crate::semigroup::check_semigroup;
use crate::setexpr::{finite_sums, nonempty_sums, NatSet};

pub use coloring_file::{load_coloring, parse_coloring};
pub use dsl::parse_predicate;
use report::{join, Report};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NO_WITNESS: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;
pub const EXIT_INPUT: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "hindman", version, about = "Bounded finite-sums witnesses and certificates")]
pub struct Cli {
    #[command(flatten)]
    pub policy: PolicyArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct PolicyArgs {
    /// Naturals scanned by bounded checks: [0, B)
    #[arg(long, global = true, default_value_t = 10_000)]
    pub bound: u64,
    /// Minimum size of a part that looks infinite
    #[arg(long, global = true, default_value_t = 8)]
    pub count: usize,
    /// Parts must reach tail * B
    #[arg(long, global = true, default_value_t = 0.5)]
    pub tail: f64,
    /// Largest number of family members intersected
    #[arg(long, global = true, default_value_t = 3)]
    pub fmax: usize,
    /// Schema instances taken for n < inst
    #[arg(long, global = true, default_value_t = 64)]
    pub inst: u64,
    /// Worker threads for colorings and the oracle
    #[arg(long, global = true, default_value_t = 1)]
    pub jobs: usize,
    /// Search node budget
    #[arg(long, global = true, default_value_t = 200_000)]
    pub max_nodes: usize,
}

impl PolicyArgs {
    fn policy(&self) -> FipPolicy {
        FipPolicy {
            bound: self.bound,
            min_count: self.count,
            tail_fraction: self.tail,
            max_f: self.fmax,
            inst_bound: self.inst,
        }
    }

    fn limits(&self) -> SearchLimits {
        SearchLimits { max_nodes: self.max_nodes, ..SearchLimits::default() }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Finite sums of an explicit set
    Fs {
        #[arg(long)]
        set: String,
    },
    /// Decide A against its complement from the trivial family
    Decide {
        #[arg(long)]
        pred: String,
        #[arg(long)]
        size: usize,
    },
    /// Monochromatic finite sums for a coloring
    Hindman {
        #[arg(long, conflicts_with = "classes", required_unless_present = "classes")]
        coloring: Option<PathBuf>,
        /// Symbolic classes, separated by ';'
        #[arg(long)]
        classes: Option<String>,
        #[arg(long)]
        size: usize,
    },
    /// Signed witness for several predicates, separated by ';'
    Iterated {
        #[arg(long)]
        preds: String,
        #[arg(long)]
        size: usize,
    },
    /// Least N forcing a monochromatic witness in every coloring
    OracleMinbound {
        #[arg(long)]
        colors: usize,
        #[arg(long)]
        size: usize,
        #[arg(long)]
        max: u64,
        /// Enumerate all colorings instead of one per relabeling class
        #[arg(long)]
        no_prune: bool,
    },
    /// Check a witness exactly against a color class or predicate
    Verify {
        #[arg(long, conflicts_with = "pred", required_unless_present = "pred")]
        coloring: Option<PathBuf>,
        #[arg(long)]
        pred: Option<String>,
        #[arg(long)]
        witness: String,
        #[arg(long, requires = "coloring")]
        color: Option<u8>,
    },
    /// Bounded fip and semigroup reports for a family
    CheckFamily {
        #[arg(long, value_parser = ["frechet", "trivial"], conflicts_with = "pred", required_unless_present = "pred")]
        builtin: Option<String>,
        /// The one-member family {A}
        #[arg(long)]
        pred: Option<String>,
    },
}

/// Exit status and the text destined for stdout and stderr.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

struct Failure {
    code: i32,
    message: String,
    report: Option<Report>,
}

impl Failure {
    fn input(message: impl ToString) -> Self {
        Failure { code: EXIT_INPUT, message: message.to_string(), report: None }
    }
}

fn driver_failure(e: DriverError, mut report: Report) -> Failure {
    let code = match &e {
        DriverError::NoWitnessAtBound { exhaustive } => {
            report.push("result", "NoWitnessAtBound").push("exhaustive", exhaustive);
            EXIT_NO_WITNESS
        }
        DriverError::BudgetExhausted(d) => {
            report.push("result", "BudgetExhausted").diagnostics(d);
            EXIT_BUDGET
        }
        DriverError::Inconclusive(reason) => {
            report.push("result", "Inconclusive").push("reason", reason);
            EXIT_BUDGET
        }
        DriverError::ExtractionStuck { partial } => {
            report.push("result", "ExtractionStuck").push("partial", join(partial));
            EXIT_BUDGET
        }
        DriverError::InvalidColoring(_) | DriverError::PreconditionNotMet(_) | DriverError::Set(_) => EXIT_INPUT,
        DriverError::Lemma(_) => EXIT_BUDGET,
    };
    Failure { code, message: e.to_string(), report: Some(report) }
}

fn parse_list(text: &str) -> Result<Vec<u64>, Failure> {
    text.split(',')
        .map(|t| t.trim().parse::<u64>().map_err(|_| Failure::input(format!("not a natural number: {t:?}"))))
        .collect()
}

fn parse_preds(text: &str) -> Result<Vec<NatSet>, Failure> {
    text.split(';').map(|p| parse_predicate(p).map_err(Failure::input)).collect()
}

/// Parses `args` (including the program name) and executes the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    match execute(&cli) {
        Ok(report) => Outcome { code: EXIT_OK, stdout: report.to_string(), stderr: String::new() },
        Err(f) => Outcome {
            code: f.code,
            stdout: f.report.map(|r| r.to_string()).unwrap_or_default(),
            stderr: format!("error: {}\n", f.message),
        },
    }
}

fn execute(cli: &Cli) -> Result<Report, Failure> {
    let policy = cli.policy.policy();
    policy.validate().map_err(Failure::input)?;
    if cli.policy.jobs == 0 {
        return Err(Failure::input("jobs must be >= 1"));
    }
    let limits = cli.policy.limits();
    let jobs = cli.policy.jobs;
    let mut r = Report::new();
    r.policy(&policy);
    match &cli.command {
        Command::Fs { set } => {
            let s = parse_list(set)?;
            let fs = finite_sums(&s).map_err(Failure::input)?;
            let ns = nonempty_sums(&s).map_err(Failure::input)?;
            r.push("FS", join(&fs)).push("NS", join(&ns));
        }
        Command::Decide { pred, size } => {
            let a = parse_predicate(pred).map_err(Failure::input)?;
            r.push("target", &a).push("size", size);
            let d = extend_decide(&trivial_family(), &a, *size, &policy, &limits)
                .map_err(|e| driver_failure(e, r.clone()))?;
            r.decision(&d);
        }
        Command::Hindman { coloring, classes, size } => {
            let c = match (coloring, classes) {
                (Some(path), _) => load_coloring(path).map_err(Failure::input)?,
                (None, Some(text)) => Coloring::symbolic(parse_preds(text)?, &policy).map_err(Failure::input)?,
                (None, None) => return Err(Failure::input("--coloring or --classes is required")),
            };
            r.push("colors", c.k()).push("size", size);
            if let Some(n) = c.domain() {
                r.push("domain", format!("1..{n}"));
            }
            let oracle = match &c {
                Coloring::Explicit { assignment, .. } => {
                    let found = brute_force_witness(assignment, *size);
                    Some(found.map_or_else(|| "none".to_string(), |(s, col)| format!("{} color={col}", join(&s))))
                }
                Coloring::Symbolic { .. } => None,
            };
            match hindman_witness(&c, *size, &policy, &limits, jobs) {
                Ok(w) => {
                    r.push("result", "SumWitness").sum_witness(&w);
                    if let (Coloring::Explicit { assignment, .. }, Some(color)) = (&c, w.color) {
                        let ok = verify_witness(Target::Class { assignment, color: color as u8 }, &w.seq);
                        r.push("oracle.verified", ok.unwrap_or(false));
                    }
                }
                Err(e) => {
                    if let Some(o) = oracle {
                        r.push("oracle.witness", o);
                    }
                    return Err(driver_failure(e, r));
                }
            }
            if let Some(o) = oracle {
                r.push("oracle.witness", o);
            }
        }
        Command::Iterated { preds, size } => {
            let sets = parse_preds(preds)?;
            for (i, s) in sets.iter().enumerate() {
                r.push(format!("target{}", i + 1), s);
            }
            r.push("size", size);
            let (w, v) = iterated_decide(&trivial_family(), &sets, *size, &policy, &limits)
                .map_err(|e| driver_failure(e, r.clone()))?;
            r.iterated(&w, &v);
        }
        Command::OracleMinbound { colors, size, max, no_prune } => {
            if *colors > 9 {
                return Err(Failure::input("colors must be at most 9"));
            }
            let f = min_forcing_bound(*colors, *size, *max, jobs, !no_prune).map_err(Failure::input)?;
            r.forcing(&f);
            if f.value.is_none() {
                return Err(Failure { code: EXIT_NO_WITNESS, message: "no forcing bound up to max".into(), report: Some(r) });
            }
        }
        Command::Verify { coloring, pred, witness, color } => {
            let s = parse_list(witness)?;
            let ns = nonempty_sums(&s).map_err(Failure::input)?;
            let (ok, target) = match (coloring, pred) {
                (Some(path), _) => {
                    let Coloring::Explicit { assignment, .. } = load_coloring(path).map_err(Failure::input)? else {
                        unreachable!("coloring files are explicit")
                    };
                    let color = color.ok_or_else(|| Failure::input("--color is required with --coloring"))?;
                    let ok = verify_witness(Target::Class { assignment: &assignment, color }, &s)
                        .map_err(Failure::input)?;
                    (ok, format!("C_{color}"))
                }
                (None, Some(p)) => {
                    let a = parse_predicate(p).map_err(Failure::input)?;
                    (verify_witness(Target::Set(&a), &s).map_err(Failure::input)?, a.to_string())
                }
                (None, None) => return Err(Failure::input("--coloring or --pred is required")),
            };
            let claim = format!("NS={{{}}} ⊆ {target}", join(&ns));
            if ok {
                r.push("verified", claim);
            } else {
                r.push("refuted", claim);
                return Err(Failure { code: EXIT_NO_WITNESS, message: "witness does not verify".into(), report: Some(r) });
            }
        }
        Command::CheckFamily { builtin, pred } => {
            let family: Family = match (builtin.as_deref(), pred) {
                (Some("frechet"), _) => frechet_family(),
                (Some(_), _) => trivial_family(),
                (None, Some(p)) => {
                    let a = parse_predicate(p).map_err(Failure::input)?;
                    Family::new(vec![a], vec![], "single")
                }
                (None, None) => return Err(Failure::input("--builtin or --pred is required")),
            };
            r.family("family", &family).fip("fip", &bounded_fip(&family, &policy));
            r.semigroup(&check_semigroup(&family, &policy));
        }
    }
    Ok(r)
}
