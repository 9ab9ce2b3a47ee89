//! Canonical report construction and output.
//!
//! Every JSON artifact the tool writes goes through [`canonical_bytes`]:
//! keys sorted, two-space indentation, shortest round-trip float
//! formatting, one trailing newline. Identical in-memory values therefore
//! always produce identical bytes, which is what makes report digests and
//! repeated-run comparisons meaningful.
//!
//! Analysis and certification reports share a fixed six-key schema:
//! `input_digest`, `positivity`, `assertions`, `spectrum`, `tolerances`,
//! `tool_version`. The dominant eigenpair lives under `spectrum.dominant`;
//! the `tolerances` object doubles as the run-parameter record and carries
//! the profile fields plus the generator identifier (`rng`) and the `seed`.

use std::fs;
use std::io::{self, Write};
use std::path::Path;

use conespec::config::ToleranceProfile;
use conespec::linalg::{CMatrix, CVector};
use conespec::positivity::{CertificationMethod, PositivityCertificate, PositivityVerdict};
use conespec::theorems::{
    Assertion, CertificationReport, EigenpairCertificate, ExtractionMethod, SearchReport,
    SpectralSummary,
};
use serde_json::{Map, Value};

use crate::CliError;

/// The version string stamped into every report.
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Identifier of the counter-based generator behind all seeded sampling.
pub const RNG_NAME: &str = "splitmix64";

/// Canonical serialization: pretty JSON with sorted keys and a trailing
/// newline. `serde_json` maps are ordered, and floats print in shortest
/// round-trip form, so equal values give equal bytes.
pub fn canonical_bytes(v: &Value) -> Vec<u8> {
    let mut out = serde_json::to_string_pretty(v).expect("report values contain only finite data");
    out.push('\n');
    out.into_bytes()
}

/// Writes bytes atomically: a temporary file in the target directory is
/// populated first and then renamed over the destination, so readers never
/// observe a half-written file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let attempt = || -> io::Result<()> {
        let dir = match path.parent() {
            Some(p) if !p.as_os_str().is_empty() => p,
            _ => Path::new("."),
        };
        let name = path
            .file_name()
            .and_then(|s| s.to_str())
            .unwrap_or("out");
        let tmp = dir.join(format!(".{name}.tmp-{}", std::process::id()));
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
        drop(f);
        fs::rename(&tmp, path)?;
        Ok(())
    };
    attempt().map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display())))
}

fn complex_value(z: conespec::linalg::C64) -> Value {
    Value::Array(vec![Value::from(z.re), Value::from(z.im)])
}

fn vector_value(v: &CVector) -> Value {
    Value::Array(v.iter().map(|&z| complex_value(z)).collect())
}

fn matrix_value(m: &CMatrix) -> Value {
    Value::Array(
        (0..m.nrows())
            .map(|i| Value::Array(m.row(i).iter().map(|&z| complex_value(z)).collect()))
            .collect(),
    )
}

fn verdict_name(v: PositivityVerdict) -> &'static str {
    match v {
        PositivityVerdict::Certified => "certified",
        PositivityVerdict::Violated => "violated",
        PositivityVerdict::Undecided => "undecided",
    }
}

fn method_name(m: CertificationMethod) -> &'static str {
    match m {
        CertificationMethod::GeneratorExact => "generator-exact",
        CertificationMethod::ProbeSampled => "probe-sampled",
        CertificationMethod::TheoremBacked => "theorem-backed",
    }
}

fn extraction_name(m: ExtractionMethod) -> &'static str {
    match m {
        ExtractionMethod::FlowExtraction => "flow-extraction",
        ExtractionMethod::DirectSpectral => "direct-spectral",
    }
}

/// One positivity certificate as a JSON object.
pub fn positivity_certificate_value(cert: &PositivityCertificate) -> Value {
    let witnesses: Vec<Value> = cert
        .witnesses
        .iter()
        .map(|w| {
            let mut obj = Map::new();
            obj.insert("input".into(), vector_value(&w.input));
            obj.insert("image".into(), vector_value(&w.image));
            obj.insert("reason".into(), Value::from(w.reason.as_str()));
            Value::Object(obj)
        })
        .collect();
    let mut obj = Map::new();
    obj.insert("verdict".into(), Value::from(verdict_name(cert.verdict)));
    obj.insert("method".into(), Value::from(method_name(cert.method)));
    obj.insert("probes_used".into(), Value::from(cert.probes_used as u64));
    obj.insert("witnesses".into(), Value::Array(witnesses));
    Value::Object(obj)
}

fn assertion_value(a: &Assertion) -> Value {
    let mut obj = Map::new();
    obj.insert("name".into(), Value::from(a.name.as_str()));
    obj.insert("verdict".into(), Value::from(a.verdict.name()));
    obj.insert("evidence".into(), Value::from(a.evidence.as_str()));
    obj.insert("asserted".into(), Value::from(a.asserted));
    Value::Object(obj)
}

fn eigenpair_value(p: &EigenpairCertificate) -> Value {
    let mut obj = Map::new();
    obj.insert("r".into(), Value::from(p.r));
    obj.insert("eigenvector".into(), vector_value(&p.w));
    obj.insert("residual".into(), Value::from(p.residual));
    obj.insert("cone_violation".into(), Value::from(p.cone_membership));
    obj.insert("method".into(), Value::from(extraction_name(p.method)));
    Value::Object(obj)
}

/// The spectrum object: spectral radius, per-eigenvalue multiplicities, and
/// the dominant pair (or null when none was extracted).
pub fn spectrum_value(s: &SpectralSummary, dominant: Option<&EigenpairCertificate>) -> Value {
    let eigenvalues: Vec<Value> = s
        .eigenvalues
        .iter()
        .map(|e| {
            let mut obj = Map::new();
            obj.insert("value".into(), complex_value(e.value));
            obj.insert("algebraic".into(), Value::from(e.algebraic as u64));
            obj.insert("geometric".into(), Value::from(e.geometric as u64));
            obj.insert("max_chain_len".into(), Value::from(e.max_chain_len as u64));
            Value::Object(obj)
        })
        .collect();
    let mut obj = Map::new();
    obj.insert("spectral_radius".into(), Value::from(s.spectral_radius));
    obj.insert("eigenvalues".into(), Value::Array(eigenvalues));
    obj.insert("dominant".into(), dominant.map(eigenpair_value).unwrap_or(Value::Null));
    Value::Object(obj)
}

/// The run-parameter record: all profile fields plus `rng` and `seed`.
pub fn tolerances_value(tol: &ToleranceProfile, seed: u64) -> Value {
    let mut v = serde_json::to_value(tol).expect("profiles are plain data");
    let obj = v.as_object_mut().expect("profiles serialize to objects");
    obj.insert("rng".into(), Value::from(RNG_NAME));
    obj.insert("seed".into(), Value::from(seed));
    v
}

fn report_shell(
    input_digest: &str,
    positivity: Value,
    assertions: Vec<Value>,
    spectrum: Value,
    tolerances: Value,
) -> Value {
    let mut obj = Map::new();
    obj.insert("input_digest".into(), Value::from(input_digest));
    obj.insert("positivity".into(), positivity);
    obj.insert("assertions".into(), Value::Array(assertions));
    obj.insert("spectrum".into(), spectrum);
    obj.insert("tolerances".into(), tolerances);
    obj.insert("tool_version".into(), Value::from(TOOL_VERSION));
    Value::Object(obj)
}

/// Report for a plain analysis run: positivity measurement, spectrum, and
/// dominant pair. The assertions array is empty — analysis measures, it
/// does not assert.
pub fn analysis_value(
    input_digest: &str,
    positivity: &PositivityCertificate,
    spectrum: &SpectralSummary,
    dominant: Option<&EigenpairCertificate>,
    tol: &ToleranceProfile,
    seed: u64,
) -> Value {
    let mut pos = Map::new();
    pos.insert("preservation".into(), positivity_certificate_value(positivity));
    report_shell(
        input_digest,
        Value::Object(pos),
        Vec::new(),
        spectrum_value(spectrum, dominant),
        tolerances_value(tol, seed),
    )
}

/// Report for a certification run, carrying every assertion with its
/// verdict and evidence.
pub fn certification_value(report: &CertificationReport, seed: u64) -> Value {
    let mut pos = Map::new();
    pos.insert("preservation".into(), positivity_certificate_value(&report.positivity));
    pos.insert("rotational".into(), positivity_certificate_value(&report.rotational));
    report_shell(
        &report.input_digest,
        Value::Object(pos),
        report.assertions.iter().map(assertion_value).collect(),
        spectrum_value(&report.spectrum, report.dominant.as_ref()),
        tolerances_value(&report.tolerances, seed),
    )
}

/// Campaign output for the counterexample search: the campaign coordinates,
/// tallies, the dominant-multiplicity histogram over eligible instances,
/// full reproduction data for any findings, and per-instance failures.
pub fn search_value(
    report: &SearchReport,
    n_min: usize,
    n_max: usize,
    seed_count: u64,
    tol: &ToleranceProfile,
) -> Value {
    let mut campaign = Map::new();
    campaign.insert("family".into(), Value::from(report.family.name()));
    campaign.insert("n_min".into(), Value::from(n_min as u64));
    campaign.insert("n_max".into(), Value::from(n_max as u64));
    campaign.insert("seeds".into(), Value::from(seed_count));
    campaign.insert("rng".into(), Value::from(RNG_NAME));
    campaign.insert(
        "tolerances".into(),
        serde_json::to_value(tol).expect("profiles are plain data"),
    );
    campaign.insert("tool_version".into(), Value::from(TOOL_VERSION));

    let mut counts = Map::new();
    counts.insert("instances_tested".into(), Value::from(report.counts.instances_tested as u64));
    counts.insert("eligible".into(), Value::from(report.counts.eligible as u64));
    counts.insert("excluded".into(), Value::from(report.counts.excluded as u64));
    counts.insert("findings".into(), Value::from(report.counts.findings as u64));
    counts.insert("failures".into(), Value::from(report.failures.len() as u64));

    let histogram: Vec<Value> = report
        .multiplicity_histogram
        .iter()
        .map(|&(mult, count)| {
            Value::Array(vec![Value::from(mult as u64), Value::from(count as u64)])
        })
        .collect();

    let findings: Vec<Value> = report
        .findings
        .iter()
        .map(|f| {
            let mut obj = Map::new();
            obj.insert("family".into(), Value::from(f.family.name()));
            obj.insert("n".into(), Value::from(f.n as u64));
            obj.insert("seed".into(), Value::from(f.seed));
            obj.insert("eigenvalue".into(), Value::from(f.eigenvalue));
            obj.insert("algebraic".into(), Value::from(f.algebraic as u64));
            obj.insert("geometric".into(), Value::from(f.geometric as u64));
            obj.insert("matrix".into(), matrix_value(&f.matrix));
            Value::Object(obj)
        })
        .collect();

    let failures: Vec<Value> = report
        .failures
        .iter()
        .map(|f| {
            let mut obj = Map::new();
            obj.insert("n".into(), Value::from(f.n as u64));
            obj.insert("seed".into(), Value::from(f.seed));
            obj.insert("reason".into(), Value::from(f.reason.as_str()));
            Value::Object(obj)
        })
        .collect();

    let mut obj = Map::new();
    obj.insert("campaign".into(), Value::Object(campaign));
    obj.insert("counts".into(), Value::Object(counts));
    obj.insert("multiplicity_histogram".into(), Value::Array(histogram));
    obj.insert("findings".into(), Value::Array(findings));
    obj.insert("failures".into(), Value::Array(failures));
    Value::Object(obj)
}
