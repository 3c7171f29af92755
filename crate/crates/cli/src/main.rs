use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use kimloci_core::padic::{iwasawa_log, teichmuller};
use kimloci_core::polylog::{li1, polylog_series};
use kimloci_core::selmer::{build_localisation, restrict_refinement, vanishing_coordinates};
use kimloci_core::sunit::{compatible_conditions, enumerate_integral_points, kummer_coordinates};
use kimloci_core::sweep::Execution;
use kimloci_core::verifier::{
    depth1_locus, depth1_matches_prediction, emit_report, render_report, verify_refined_kim,
    verify_unrefined_empty, ReportFormat, TestHooks, VerificationReport,
};
use kimloci_core::{Error, PAdic, RationalPoint, RefinementCondition};

const EXIT_USAGE: u8 = 64;
const EXIT_IO: u8 = 74;

#[derive(Parser)]
#[command(name = "kimloci", version, about = "Chabauty–Kim loci for the thrice-punctured line")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep a prime range and check a locus statement.
    Verify {
        #[command(subcommand)]
        which: Verify,
    },
    /// Depth-1 locus for S = ∅ at one prime.
    Depth1 {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 8)]
        precision: u32,
    },
    /// Print the localisation map, optionally restricted to a condition.
    Equations {
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        s: Vec<u64>,
        #[arg(long)]
        depth: usize,
        /// e.g. `1` or `1,inf`
        #[arg(long)]
        sigma: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Enumerate S-integral points with bounded exponents.
    Points {
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        s: Vec<u64>,
        #[arg(long, default_value_t = kimloci_core::sunit::DEFAULT_BOUND)]
        bound: u32,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Evaluate a single p-adic function.
    Eval {
        function: Function,
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 8)]
        precision: u32,
        /// integer or fraction `a/b`
        #[arg(long, allow_hyphen_values = true)]
        z: String,
        /// polylogarithm weight
        #[arg(long, default_value_t = 1)]
        n: u64,
    },
}

#[derive(Subcommand)]
enum Verify {
    /// Refined locus for S = {2}, or the empty case when 2 ∉ S.
    Refined {
        #[arg(long, value_delimiter = ',', num_args = 0.., default_value = "2")]
        s: Vec<u64>,
        #[command(flatten)]
        range: RangeArgs,
    },
    /// Unrefined locus for S = ∅ in depth p−3.
    Unrefined {
        #[command(flatten)]
        range: RangeArgs,
    },
}

#[derive(Args)]
struct RunArgs {
    /// Worker threads; 1 runs sequentially.
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long)]
    sequential: bool,
}

impl RunArgs {
    fn execution(&self) -> Execution {
        if self.sequential {
            Execution::Sequential
        } else {
            Execution::with_jobs(self.jobs)
        }
    }
}

#[derive(Args)]
struct RangeArgs {
    #[arg(long, default_value_t = 3)]
    pmin: u64,
    #[arg(long, default_value_t = 10_000)]
    pmax: u64,
    #[arg(long, default_value_t = 8)]
    precision: u32,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    run: RunArgs,
    #[arg(long, hide = true)]
    inject_counterexample: Option<u64>,
    #[arg(long, hide = true)]
    force_precision_failure: bool,
}

impl RangeArgs {
    fn hooks(&self) -> TestHooks {
        TestHooks {
            inject_counterexample: self.inject_counterexample,
            force_precision_failure: self.force_precision_failure,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Function {
    Log,
    Li,
    Teich,
}

fn exit_for(e: &Error) -> u8 {
    match e {
        Error::Io(_) => EXIT_IO,
        _ => EXIT_USAGE,
    }
}

fn finish_report(report: &VerificationReport, out: Option<&PathBuf>) -> Result<u8, Error> {
    match out {
        Some(path) => {
            emit_report(report, path, ReportFormat::Json)?;
            eprint!("{}", render_report(report, ReportFormat::Text)?);
        }
        None => println!("{}", render_report(report, ReportFormat::Json)?),
    }
    Ok(report.status.exit_code() as u8)
}

fn parse_point(z: &str, p: u64, precision: u32) -> Result<PAdic, Error> {
    match z.split_once('/') {
        Some((a, b)) => {
            let parse = |t: &str| t.trim().parse::<i64>().map_err(|e| Error::Parse(format!("'{t}': {e}")));
            PAdic::from_rational(parse(a)?, parse(b)?, p, precision)
        }
        None => {
            let a = z.trim().parse::<i64>().map_err(|e| Error::Parse(format!("'{z}': {e}")))?;
            PAdic::from_integer(a, p, precision)
        }
    }
}

fn run(cli: Cli) -> Result<u8, Error> {
    match cli.command {
        Command::Verify { which } => match which {
            Verify::Refined { s, range } => {
                let report = verify_refined_kim(
                    range.pmin,
                    range.pmax,
                    range.precision,
                    &s,
                    range.run.execution(),
                    range.hooks(),
                )?;
                finish_report(&report, range.out.as_ref())
            }
            Verify::Unrefined { range } => {
                let report = verify_unrefined_empty(
                    range.pmin,
                    range.pmax,
                    range.precision,
                    range.run.execution(),
                    range.hooks(),
                )?;
                finish_report(&report, range.out.as_ref())
            }
        },
        Command::Depth1 { p, precision } => {
            let r = depth1_locus(p, precision)?;
            let residues: Vec<String> = r.residues().iter().map(|a| a.to_string()).collect();
            println!("p = {p}: depth-1 residues {{{}}}", residues.join(", "));
            for e in &r.locus {
                println!("  w({}) = {}", e.residue, e.lift);
            }
            if p >= 5 && !depth1_matches_prediction(&r) {
                println!("status: counterexample");
                return Ok(1);
            }
            println!("status: verified");
            Ok(0)
        }
        Command::Equations { s, depth, sigma, json } => {
            let mut map = build_localisation(&s, depth)?;
            if let Some(sigma) = sigma {
                let sigma: RefinementCondition = sigma.parse()?;
                map = restrict_refinement(&map, &sigma)?;
            }
            if json {
                let body = serde_json::to_string_pretty(&map.dump()).map_err(|e| Error::Io(e.to_string()))?;
                println!("{body}");
            } else {
                print!("{}", map.render());
                let vanishing: Vec<String> = vanishing_coordinates(&map).iter().map(|c| c.to_string()).collect();
                println!("vanishing: {{{}}}", vanishing.join(", "));
            }
            Ok(0)
        }
        Command::Points { s, bound, run } => {
            let points: Vec<RationalPoint> = enumerate_integral_points(&s, bound, run.execution())?;
            for z in &points {
                let k = kummer_coordinates(z, &s)?;
                let sigmas: Vec<String> = compatible_conditions(z, &s)?.iter().map(|c| c.to_string()).collect();
                println!("{z}\t{k}\t{}", sigmas.join(" "));
            }
            println!(
                "# {} points with exponents bounded by {bound}; larger solutions are not searched",
                points.len()
            );
            Ok(0)
        }
        Command::Eval {
            function,
            p,
            precision,
            z,
            n,
        } => {
            let value = match function {
                Function::Log => {
                    let x = parse_point(&z, p, precision)?;
                    // log p = 0 branch
                    let v = x.valuation().ok_or(Error::PrecisionExhausted(x.absolute_precision()))?;
                    iwasawa_log(&x.shift(-v))?
                }
                Function::Li => {
                    let x = parse_point(&z, p, precision)?;
                    if n == 1 {
                        li1(&x, precision)?
                    } else {
                        polylog_series(n, &x, precision)?
                    }
                }
                Function::Teich => {
                    let x = parse_point(&z, p, precision)?;
                    teichmuller(x.residue()?, p, precision)?
                }
            };
            println!("{value}");
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_for(&e))
        }
    }
}
