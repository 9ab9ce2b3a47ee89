//! `conespec` — spectral-cone analysis from the command line.
//!
//! Subcommands: `analyze` (spectrum + positivity + dominant pair),
//! `certify` (assertion suites with pass/fail exit codes), `flow`
//! (trajectory CSV export with a growth summary), `gen` (deterministic
//! instance generation), and `search` (seeded multiplicity campaigns).
//!
//! Exit codes: 0 success / all asserted checks pass; 1 an asserted check
//! failed; 2 input or usage error; 3 numerical failure; 4 asserted checks
//! contain an undecided entry under `--strict` (a failure takes precedence).

use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use conespec::config::ToleranceProfile;
use conespec::dynamics::{estimate_growth, evolve, monitor_cone_invariance};
use conespec::error::Error;
use conespec::families::{self, Family};
use conespec::linalg::{eigen_spectrum, CMatrix};
use conespec::positivity::{certify_positive, decomplexify};
use conespec::theorems::{
    certify_dominance, certify_real_operator, certify_split_dominance, direct_spectral_pair,
    extract_perron_pair, input_digest, search_counterexample, SpectralSummary, Verdict,
};

use conespec_cli::instance::{self, ConeFile, ParsedInstance, ToleranceSpec};
use conespec_cli::report;
use conespec_cli::{classify, CliError};

/// Environment variable selecting the tolerance profile (`default` or
/// `strict`) when the instance file carries no override.
const PROFILE_ENV: &str = "CONESPEC_TOLERANCE_PROFILE";

#[derive(Parser)]
#[command(
    name = "conespec",
    version,
    about = "Finite-dimensional spectral-cone analysis: positivity certificates, \
             dominant eigenpairs, trajectory exports, and seeded search campaigns."
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Analyze an instance: spectrum, positivity, and the dominant pair.
    Analyze {
        /// Instance file path, or `-` for stdin.
        path: String,
        /// Write the report here (atomically) instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run an assertion suite; the exit code reflects the verdicts.
    Certify {
        /// Instance file path, or `-` for stdin.
        path: String,
        /// Which suite to run.
        #[arg(long, value_enum)]
        theorem: TheoremKind,
        /// Splitting radius as a fraction of the spectral radius, strictly
        /// between 0 and 1. Required by (and only meaningful for) `split`.
        #[arg(long)]
        rho: Option<f64>,
        /// Exit 4 when any asserted check is undecided.
        #[arg(long)]
        strict: bool,
        /// Write the report here (atomically) instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Export a trajectory of x' = Ax + alpha x as CSV plus a growth summary.
    Flow {
        /// Instance file path, or `-` for stdin.
        path: String,
        /// Initial state: comma-separated components, each `re` or `re:im`.
        /// Defaults to the sum of the cone's generators.
        #[arg(long)]
        x0: Option<String>,
        /// Constant shift added to the generator.
        #[arg(long, default_value_t = 0.0)]
        alpha: f64,
        /// Last grid time. The grid is geometric on [0.01, tmax].
        #[arg(long, default_value_t = 40.0)]
        tmax: f64,
        /// Number of grid points.
        #[arg(long, default_value_t = 200)]
        points: usize,
        /// Write the CSV here (atomically) instead of stdout.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Skip the cone-membership check of the initial state and the
        /// per-point cone monitoring.
        #[arg(long)]
        unchecked: bool,
    },
    /// Generate a deterministic instance file for (family, n, seed).
    Gen {
        /// Instance family: positive, strictly-positive, complexified,
        /// jordan, or transformed.
        #[arg(long)]
        family: String,
        /// Dimension (at most 128).
        #[arg(long)]
        n: usize,
        /// Generator seed.
        #[arg(long)]
        seed: u64,
        /// Write the instance here (atomically) instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a seeded campaign hunting for repeated dominant eigenvalues.
    Search {
        /// Instance family to draw from.
        #[arg(long)]
        family: String,
        /// Inclusive dimension range, written LO..HI.
        #[arg(long = "n-range")]
        n_range: String,
        /// Number of seeds per dimension (seeds 0..count).
        #[arg(long)]
        seeds: u64,
        /// Campaign output file (written atomically).
        #[arg(long)]
        out: PathBuf,
        /// Reuse the output file when it already holds this exact campaign.
        #[arg(long)]
        resume: bool,
        /// Abort (exit 3, no output file) if any instance fails numerically.
        #[arg(long)]
        strict: bool,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TheoremKind {
    /// Full dominance suite: positivity, rotation, gap, and eigenvector
    /// assertions on the whole space.
    Dominance,
    /// Split the space at a radius and certify dominance on the outer
    /// invariant subspace.
    Split,
    /// Real matrix on a real cone, via its complex lift, with the real-case
    /// strengthenings.
    Real,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(cmd: Cmd) -> Result<u8, CliError> {
    match cmd {
        Cmd::Analyze { path, out } => cmd_analyze(&path, out.as_deref()),
        Cmd::Certify { path, theorem, rho, strict, out } => {
            cmd_certify(&path, theorem, rho, strict, out.as_deref())
        }
        Cmd::Flow { path, x0, alpha, tmax, points, csv, unchecked } => {
            cmd_flow(&path, x0.as_deref(), alpha, tmax, points, csv.as_deref(), unchecked)
        }
        Cmd::Gen { family, n, seed, out } => cmd_gen(&family, n, seed, out.as_deref()),
        Cmd::Search { family, n_range, seeds, out, resume, strict } => {
            cmd_search(&family, &n_range, seeds, &out, resume, strict)
        }
    }
}

/// Reads the instance text from a file, or from stdin when the path is `-`.
fn read_input(path: &str) -> Result<String, CliError> {
    if path == "-" {
        let mut text = String::new();
        std::io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| CliError::Input(format!("cannot read stdin: {e}")))?;
        Ok(text)
    } else {
        std::fs::read_to_string(path)
            .map_err(|e| CliError::Input(format!("cannot read {path}: {e}")))
    }
}

/// Tolerance resolution, strongest first: an override inside the instance
/// file, then the CONESPEC_TOLERANCE_PROFILE environment variable, then
/// the default profile.
fn resolve_tolerances(file_spec: Option<&ToleranceSpec>) -> Result<ToleranceProfile, CliError> {
    if let Some(spec) = file_spec {
        return match spec {
            ToleranceSpec::Name(name) => ToleranceProfile::by_name(name).ok_or_else(|| {
                CliError::Input(format!(
                    "unknown tolerance profile `{name}` (expected default or strict)"
                ))
            }),
            ToleranceSpec::Full(profile) => Ok(profile.clone()),
        };
    }
    match std::env::var(PROFILE_ENV) {
        Ok(name) => ToleranceProfile::by_name(&name).ok_or_else(|| {
            CliError::Input(format!(
                "{PROFILE_ENV}={name} names no profile (expected default or strict)"
            ))
        }),
        Err(std::env::VarError::NotPresent) => Ok(ToleranceProfile::default_profile()),
        Err(e) => Err(CliError::Input(format!("{PROFILE_ENV}: {e}"))),
    }
}

/// Parses, resolves tolerances, builds the cone, and checks shape
/// compatibility — the shared front half of every instance-driven command.
fn load_instance(
    path: &str,
) -> Result<(CMatrix, conespec::cones::ConeSpec, ToleranceProfile, u64), CliError> {
    let text = read_input(path)?;
    let parsed: ParsedInstance = instance::parse_instance(&text)?;
    let tol = resolve_tolerances(parsed.tolerances.as_ref())?;
    let cone = parsed.cone.build(&tol)?;
    if parsed.matrix.nrows() != cone.dim() {
        return Err(CliError::Input(format!(
            "matrix is {0}x{0} but the cone lives in dimension {1}",
            parsed.matrix.nrows(),
            cone.dim()
        )));
    }
    Ok((parsed.matrix, cone, tol, parsed.seed.unwrap_or(0)))
}

/// Emits report bytes to stdout, or atomically to `--out`.
fn emit(out: Option<&std::path::Path>, bytes: &[u8]) -> Result<(), CliError> {
    match out {
        Some(path) => report::write_atomic(path, bytes),
        None => std::io::stdout()
            .write_all(bytes)
            .map_err(|e| CliError::Input(format!("cannot write stdout: {e}"))),
    }
}

fn cmd_analyze(path: &str, out: Option<&std::path::Path>) -> Result<u8, CliError> {
    let (a, cone, tol, seed) = load_instance(path)?;
    let data = eigen_spectrum(&a, &tol).map_err(classify)?;
    let positivity = certify_positive(&a, &cone, &tol).map_err(classify)?;
    // Dominant-pair extraction mirrors the certification cascade: the flow
    // route first, the dense route when the flow route is inapplicable, and
    // absence (null) when neither produces a cone-aligned pair.
    let dominant = match extract_perron_pair(&a, &cone, &tol) {
        Ok(p) => Some(p),
        Err(Error::NotPositive(_) | Error::NoConvergence { .. }) => {
            direct_spectral_pair(&a, &cone, &tol).ok()
        }
        Err(e) => return Err(classify(e)),
    };
    let value = report::analysis_value(
        &input_digest(&a, &cone),
        &positivity,
        &SpectralSummary::from_data(&data),
        dominant.as_ref(),
        &tol,
        seed,
    );
    emit(out, &report::canonical_bytes(&value))?;
    Ok(0)
}

fn cmd_certify(
    path: &str,
    theorem: TheoremKind,
    rho: Option<f64>,
    strict: bool,
    out: Option<&std::path::Path>,
) -> Result<u8, CliError> {
    let (a, cone, tol, seed) = load_instance(path)?;
    if theorem != TheoremKind::Split && rho.is_some() {
        return Err(CliError::Input("--rho only applies to --theorem split".into()));
    }
    let report = match theorem {
        TheoremKind::Dominance => certify_dominance(&a, &cone, &tol).map_err(classify)?,
        TheoremKind::Split => {
            let fraction =
                rho.ok_or_else(|| CliError::Input("--theorem split requires --rho".into()))?;
            if !(fraction.is_finite() && 0.0 < fraction && fraction < 1.0) {
                return Err(CliError::Input(format!(
                    "--rho is a fraction of the spectral radius and must lie strictly \
                     between 0 and 1, got {fraction}"
                )));
            }
            let data = eigen_spectrum(&a, &tol).map_err(classify)?;
            if data.spectral_radius <= 0.0 {
                return Err(CliError::Input(
                    "the spectral radius is zero, so no splitting radius exists".into(),
                ));
            }
            certify_split_dominance(&a, &cone, fraction * data.spectral_radius, &tol)
                .map_err(classify)?
        }
        TheoremKind::Real => {
            let b = decomplexify(&a).map_err(|_| {
                CliError::Input(
                    "--theorem real needs a real matrix (all imaginary parts zero)".into(),
                )
            })?;
            certify_real_operator(&b, &cone, &tol).map_err(classify)?
        }
    };

    let value = report::certification_value(&report, seed);
    emit(out, &report::canonical_bytes(&value))?;

    let asserted: Vec<Verdict> =
        report.assertions.iter().filter(|a| a.asserted).map(|a| a.verdict).collect();
    if asserted.iter().any(|v| *v == Verdict::Fail) {
        Ok(1)
    } else if strict && asserted.iter().any(|v| *v == Verdict::Undecided) {
        Ok(4)
    } else {
        Ok(0)
    }
}

fn cmd_flow(
    path: &str,
    x0: Option<&str>,
    alpha: f64,
    tmax: f64,
    points: usize,
    csv: Option<&std::path::Path>,
    unchecked: bool,
) -> Result<u8, CliError> {
    let (a, cone, tol, _) = load_instance(path)?;
    if !alpha.is_finite() {
        return Err(CliError::Input(format!("--alpha must be finite, got {alpha}")));
    }
    let t0 = 0.01f64;
    if !(tmax.is_finite() && tmax > t0) {
        return Err(CliError::Input(format!("--tmax must exceed {t0}, got {tmax}")));
    }
    if points < 2 {
        return Err(CliError::Input(format!("--points must be at least 2, got {points}")));
    }
    let x0 = match x0 {
        Some(spec) => instance::parse_state(spec, cone.dim())?,
        None => families::generator_sum(&cone).map_err(classify)?,
    };
    if x0.norm() == 0.0 {
        return Err(CliError::Input("initial state must be nonzero".into()));
    }
    if !unchecked {
        let violation = cone.violation(&x0).map_err(classify)?;
        if violation > tol.violation_hysteresis * tol.tol_cone(x0.norm().max(1.0)) {
            return Err(CliError::Input(format!(
                "initial state is not in the cone (violation {violation:.3e}); \
                 pass --unchecked to export anyway"
            )));
        }
    }

    let grid: Vec<f64> =
        (0..points).map(|k| t0 * (tmax / t0).powf(k as f64 / (points - 1) as f64)).collect();
    let traj = evolve(&a, alpha, &x0, &grid, true).map_err(classify)?;
    let (alpha_hat, nu_hat) = estimate_growth(&traj, &tol).map_err(classify)?;
    let monitored = if unchecked {
        None
    } else {
        Some(monitor_cone_invariance(&traj, &cone, &tol).map_err(classify)?)
    };

    let csv_text = traj.to_csv();
    match csv {
        Some(path) => report::write_atomic(path, csv_text.as_bytes())?,
        None => std::io::stdout()
            .write_all(csv_text.as_bytes())
            .map_err(|e| CliError::Input(format!("cannot write stdout: {e}")))?,
    }

    // The summary is the last stdout line, after the CSV when both share
    // the stream, so `--csv FILE` leaves stdout holding exactly the summary.
    let summary = match &monitored {
        Some(m) => format!(
            "summary: alpha_hat={:.12e} nu_hat={} violations={} max_violation={:.3e}",
            alpha_hat, nu_hat, m.breaches, m.max_violation
        ),
        None => format!(
            "summary: alpha_hat={:.12e} nu_hat={} violations=unchecked",
            alpha_hat, nu_hat
        ),
    };
    println!("{summary}");
    Ok(0)
}

fn cmd_gen(family: &str, n: usize, seed: u64, out: Option<&std::path::Path>) -> Result<u8, CliError> {
    let family: Family = family.parse().map_err(classify)?;
    // Generation always runs on the default profile so that an instance is
    // a pure function of (family, n, seed).
    let tol = ToleranceProfile::default_profile();
    let inst = families::generate(family, n, seed, &tol).map_err(classify)?;
    let cone = ConeFile::from_cone(&inst.cone).ok_or_else(|| {
        CliError::Numerical("generated cone has no file representation".into())
    })?;
    let value = instance::instance_value(&inst.matrix, &cone, Some(seed), None);
    emit(out, &report::canonical_bytes(&value))?;
    Ok(0)
}

/// Parses an inclusive `LO..HI` dimension range.
fn parse_range(spec: &str) -> Result<(usize, usize), CliError> {
    let (lo, hi) = spec
        .split_once("..")
        .ok_or_else(|| CliError::Input(format!("--n-range must look like LO..HI, got `{spec}`")))?;
    let lo: usize = lo
        .trim()
        .parse()
        .map_err(|_| CliError::Input(format!("--n-range lower bound `{lo}` is not an integer")))?;
    let hi: usize = hi
        .trim()
        .parse()
        .map_err(|_| CliError::Input(format!("--n-range upper bound `{hi}` is not an integer")))?;
    if lo == 0 || hi < lo {
        return Err(CliError::Input(format!(
            "--n-range needs 1 <= LO <= HI, got {lo}..{hi}"
        )));
    }
    Ok((lo, hi))
}

fn cmd_search(
    family: &str,
    n_range: &str,
    seed_count: u64,
    out: &std::path::Path,
    resume: bool,
    strict: bool,
) -> Result<u8, CliError> {
    let family: Family = family.parse().map_err(classify)?;
    let (n_min, n_max) = parse_range(n_range)?;
    if seed_count == 0 {
        return Err(CliError::Input("--seeds must be positive".into()));
    }
    let tol = resolve_tolerances(None)?;

    // Resume: when the output file already holds this exact campaign
    // (same family, range, seed count, tolerances, and tool version), its
    // content is already what a fresh run would produce, so keep it.
    if resume {
        if let Ok(text) = std::fs::read_to_string(out) {
            if let Ok(existing) = serde_json::from_str::<serde_json::Value>(&text) {
                let expected = expected_campaign(family, n_min, n_max, seed_count, &tol);
                if existing.get("campaign") == Some(&expected) {
                    eprintln!(
                        "resume: {} already holds this campaign, keeping it",
                        out.display()
                    );
                    let failures = existing
                        .get("counts")
                        .and_then(|c| c.get("failures"))
                        .and_then(|v| v.as_u64())
                        .unwrap_or(0);
                    return Ok(if failures > 0 { 3 } else { 0 });
                }
            }
        }
    }

    let sizes: Vec<usize> = (n_min..=n_max).collect();
    let seeds: Vec<u64> = (0..seed_count).collect();
    let report = search_counterexample(family, &sizes, &seeds, &tol).map_err(classify)?;

    for f in &report.failures {
        eprintln!("skipped n={} seed={}: {}", f.n, f.seed, f.reason);
    }
    if strict && !report.failures.is_empty() {
        return Err(CliError::Numerical(format!(
            "{} instance(s) failed numerically; no campaign file written",
            report.failures.len()
        )));
    }

    let value = report::search_value(&report, n_min, n_max, seed_count, &tol);
    report::write_atomic(out, &report::canonical_bytes(&value))?;
    eprintln!(
        "campaign: {} instances, {} eligible, {} findings -> {}",
        report.counts.instances_tested,
        report.counts.eligible,
        report.counts.findings,
        out.display()
    );
    // Skipped instances degrade the campaign even though the file is
    // written; signal that with the numerical-failure exit code.
    Ok(if report.failures.is_empty() { 0 } else { 3 })
}

/// The campaign-coordinates object a fresh run with these parameters would
/// stamp into its output, used for resume matching.
fn expected_campaign(
    family: Family,
    n_min: usize,
    n_max: usize,
    seed_count: u64,
    tol: &ToleranceProfile,
) -> serde_json::Value {
    let dummy = conespec::theorems::SearchReport {
        family,
        sizes: Vec::new(),
        seeds: Vec::new(),
        counts: conespec::theorems::SearchCounts {
            instances_tested: 0,
            eligible: 0,
            excluded: 0,
            findings: 0,
        },
        findings: Vec::new(),
        multiplicity_histogram: Vec::new(),
        failures: Vec::new(),
    };
    report::search_value(&dummy, n_min, n_max, seed_count, tol)["campaign"].clone()
}
