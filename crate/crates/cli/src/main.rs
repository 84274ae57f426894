//! Command-line front end: reads a job description, elaborates the
//! diagram and parameter family, computes the invariant element up to
//! the cutoff, runs the verification suite, and emits a human summary
//! plus an optional machine-readable report.
//!
//! Exit codes: `0` — every verification passed; `1` — configuration or
//! diagram validation error; `2` — parameter-family error, or
//! `--require-bar` on a family that is not bar-admissible; `3` —
//! verification failure.

mod config;

use std::collections::BTreeMap;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use clap::Parser;
use quasik_core::quasik::{BarStatus, CheckRecord, QuasiK, QuasiKOptions};
use quasik_core::report::JobReport;
use quasik_core::root::RootDatum;
use quasik_core::satake::{ParameterFamily, SatakeDiagram};
use quasik_core::scalar::{parse_expression, RatFuncQ};

use config::{CartanSpec, JobConfig};

/// Construct and certify the invariant element of a quantum symmetric
/// pair coideal subalgebra, truncated at a weight-height cutoff.
#[derive(Debug, Parser)]
#[command(name = "quasik", version)]
struct Cli {
    /// Path to the job description (JSON).
    config: PathBuf,
    /// Override the configured height cutoff.
    #[arg(long)]
    cutoff: Option<usize>,
    /// Also solve the weights the support argument would skip and
    /// certify that they vanish.
    #[arg(long)]
    verify_support: bool,
    /// Disable the cross-derivation compatibility diagnostic.
    #[arg(long)]
    no_check_compat: bool,
    /// Include the complement bases of all solved weights in the report.
    #[arg(long)]
    emit_basis: bool,
    /// Compute the inverse table and include it in the report.
    #[arg(long)]
    emit_inverse: bool,
    /// Fail (exit 2) unless the parameter family is bar-admissible.
    #[arg(long)]
    require_bar: bool,
    /// Write the machine-readable report to this path.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Rescale the parameter family after computing, so the certificate
    /// fails by construction (testing aid).
    #[arg(long, hide = true)]
    corrupt_c: bool,
}

/// Pre-verification failures, split by exit-code class.
enum Failure {
    /// Unreadable, unparseable, or invalid configuration — including a
    /// diagram that fails validation.  Exit 1.
    Config(String),
    /// A structurally valid diagram whose parameter family is rejected.
    /// Exit 2.
    Parameter(String),
}

impl Failure {
    fn report(self) -> ExitCode {
        match self {
            Failure::Config(msg) => {
                eprintln!("configuration error: {msg}");
                ExitCode::from(1)
            }
            Failure::Parameter(msg) => {
                eprintln!("parameter error: {msg}");
                ExitCode::from(2)
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            use clap::error::ErrorKind;
            if matches!(
                err.kind(),
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion
            ) {
                let _ = err.print();
                return ExitCode::SUCCESS;
            }
            eprintln!("{err}");
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(failure) => failure.report(),
    }
}

fn run(cli: Cli) -> Result<ExitCode, Failure> {
    let started = Instant::now();
    let text = fs::read_to_string(&cli.config)
        .map_err(|e| Failure::Config(format!("{}: {e}", cli.config.display())))?;
    let job: JobConfig = serde_json::from_str(&text).map_err(|e| Failure::Config(e.to_string()))?;

    let datum = Arc::new(build_datum(&job)?);
    let rank = datum.rank();
    let x = job.x_nodes(rank).map_err(Failure::Config)?;
    let tau = job.tau_images(rank).map_err(Failure::Config)?;
    let diagram =
        Arc::new(SatakeDiagram::new(datum, &x, &tau).map_err(|e| Failure::Config(e.to_string()))?);
    let params = build_params(&job, &diagram)?;

    let cutoff = cli.cutoff.unwrap_or(job.cutoff);
    if cutoff == 0 {
        return Err(Failure::Config("cutoff must be at least 1".into()));
    }
    let mut options = QuasiKOptions::new(cutoff);
    options.skip_antifixed = !(cli.verify_support || job.verify_support);
    if cli.no_check_compat || job.check_compat == Some(false) {
        options.compat_height = 0;
    }

    let mut qk = match QuasiK::compute(diagram, params, options) {
        Ok(qk) => qk,
        Err(e) => {
            eprintln!("verification failure: {e}");
            return Ok(ExitCode::from(3));
        }
    };
    if cli.corrupt_c {
        // Rescaling every entry stays inside the admissible set but
        // breaks the computed table's defining identities.
        let rescaled: BTreeMap<usize, RatFuncQ> = qk
            .params()
            .entries()
            .map(|(i, c)| (i, c * &RatFuncQ::q()))
            .collect();
        let corrupted =
            ParameterFamily::new(qk.diagram(), rescaled).expect("rescaling preserves membership");
        qk.replace_params(corrupted);
    }

    let mut checks = Vec::new();
    checks.push(CheckRecord::new(
        "twist derivations invariant under reversal and the involution",
        qk.diagram().sigma_tau_symmetry_holds(qk.bases()),
    ));
    checks.extend(qk.verify_recursion());
    if cli.verify_support || job.verify_support {
        checks.extend(qk.verify_support());
    }
    checks.extend(qk.verify_intertwining());
    checks.extend(qk.verify_centralizer());

    let mut report = JobReport::build(job.cartan.label(), &qk, checks, started.elapsed());
    if cli.emit_basis || job.emit_basis {
        report = report.with_basis(&qk);
    }
    if (cli.emit_inverse || job.emit_inverse) && report.all_passed() {
        report = report.with_inverse(&qk.invert());
    }

    print!("{}", report.summary());
    if let Some(path) = &cli.output {
        let json = serde_json::to_string_pretty(&report).expect("reports always serialize");
        fs::write(path, json).map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?;
    }

    if !report.all_passed() {
        eprintln!("verification failure: see the FAIL lines above");
        return Ok(ExitCode::from(3));
    }
    if cli.require_bar && !matches!(qk.bar_status(), BarStatus::Involution) {
        eprintln!(
            "parameter error: the family is not bar-admissible (the report \
             carries the certified isomorphism onto its companion)"
        );
        return Ok(ExitCode::from(2));
    }
    Ok(ExitCode::SUCCESS)
}

fn build_datum(job: &JobConfig) -> Result<RootDatum, Failure> {
    match &job.cartan {
        CartanSpec::Name(name) => {
            if job.d.is_some() {
                return Err(Failure::Config(
                    "d is only accepted with an explicit Cartan matrix".into(),
                ));
            }
            RootDatum::from_name(name).map_err(|e| Failure::Config(e.to_string()))
        }
        CartanSpec::Matrix(rows) => {
            RootDatum::new(rows.clone(), job.d.clone()).map_err(|e| Failure::Config(e.to_string()))
        }
    }
}

fn build_params(job: &JobConfig, diagram: &SatakeDiagram) -> Result<ParameterFamily, Failure> {
    let parse_map =
        |entries: &BTreeMap<usize, String>| -> Result<BTreeMap<usize, RatFuncQ>, Failure> {
            entries
                .iter()
                .map(|(&i, expr)| {
                    if i == 0 || i > diagram.rank() {
                        return Err(Failure::Config(format!(
                            "parameter index {i} outside 1..={}",
                            diagram.rank()
                        )));
                    }
                    let value = parse_expression(expr)
                        .map_err(|e| Failure::Config(format!("parameter c_{i} = {expr:?}: {e}")))?;
                    Ok((i - 1, value))
                })
                .collect()
        };
    match (&job.c, &job.bar_admissible) {
        (Some(entries), None) => {
            let c = parse_map(entries)?;
            ParameterFamily::new(diagram, c).map_err(|e| Failure::Parameter(e.to_string()))
        }
        (None, Some(cfg)) => {
            let free = parse_map(&cfg.free_choices)?;
            ParameterFamily::make_bar_admissible(diagram, &free)
                .map_err(|e| Failure::Parameter(e.to_string()))
        }
        _ => Err(Failure::Config(
            "give exactly one of \"c\" or \"bar_admissible\"".into(),
        )),
    }
}
