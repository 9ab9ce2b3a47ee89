//! Certified dominance analysis for cone-preserving operators.
//!
//! The entry points produce [`CertificationReport`]s: a list of named
//! assertions with `Pass`/`Fail`/`Undecided` verdicts and numeric evidence,
//! alongside the positivity certificates, the spectral summary, and the
//! extracted dominant eigenpair. Assertions that depend on rotational strong
//! positivity are marked informational (`asserted = false`) whenever that
//! hypothesis is not certified, so a report never overstates what was
//! established.

mod certify;
mod mixing;
mod perron;
mod search;

pub use certify::{certify_dominance, certify_real_operator, certify_split_dominance};
pub use mixing::{mixing_probe, MixingDiagnostic, MixingSample};
pub use perron::{direct_spectral_pair, extract_perron_pair};
pub use search::{
    assess_instance, search_counterexample, SearchCounts, SearchFailure, SearchFinding,
    SearchOutcome, SearchReport,
};

use std::fmt;

use sha2::{Digest, Sha256};

use crate::cones::ConeSpec;
use crate::config::ToleranceProfile;
use crate::linalg::{CMatrix, CVector, SpectralData, C64};
use crate::positivity::PositivityCertificate;

/// Outcome of one certified assertion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    Undecided,
}

impl Verdict {
    pub fn name(&self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Undecided => "undecided",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One named check with its verdict and the numbers that decided it.
/// `asserted = false` marks a measurement reported for information only,
/// because the hypothesis licensing it was not certified.
#[derive(Debug, Clone)]
pub struct Assertion {
    pub name: String,
    pub verdict: Verdict,
    pub evidence: String,
    pub asserted: bool,
}

impl Assertion {
    fn new(name: &str, verdict: Verdict, evidence: String, asserted: bool) -> Assertion {
        Assertion { name: name.into(), verdict, evidence, asserted }
    }
}

/// How a dominant eigenpair was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExtractionMethod {
    /// Late-time limit of the normalized exponential flow.
    FlowExtraction,
    /// Dense eigensolver plus phase alignment into the cone.
    DirectSpectral,
}

/// A dominant eigenpair with the numbers backing it.
#[derive(Debug, Clone)]
pub struct EigenpairCertificate {
    /// The dominant eigenvalue (real by construction of the extraction).
    pub r: f64,
    /// Unit-norm eigenvector.
    pub w: CVector,
    /// `‖Aw − rw‖ / ‖w‖`.
    pub residual: f64,
    /// Cone-membership violation of `w` (zero inside the cone).
    pub cone_membership: f64,
    pub method: ExtractionMethod,
}

/// One eigenvalue with its multiplicities and chain depth.
#[derive(Debug, Clone)]
pub struct EigenvalueSummary {
    pub value: C64,
    pub algebraic: usize,
    pub geometric: usize,
    pub max_chain_len: usize,
}

/// Condensed spectral picture carried by every report.
#[derive(Debug, Clone)]
pub struct SpectralSummary {
    pub spectral_radius: f64,
    pub eigenvalues: Vec<EigenvalueSummary>,
}

impl SpectralSummary {
    pub fn from_data(data: &SpectralData) -> SpectralSummary {
        SpectralSummary {
            spectral_radius: data.spectral_radius,
            eigenvalues: data
                .clusters
                .iter()
                .map(|cl| EigenvalueSummary {
                    value: cl.eigenvalue,
                    algebraic: cl.algebraic,
                    geometric: cl.geometric,
                    max_chain_len: cl.max_chain_len(),
                })
                .collect(),
        }
    }
}

/// Full result of a certification run.
#[derive(Debug, Clone)]
pub struct CertificationReport {
    /// Hex digest of the canonical operator/cone encoding.
    pub input_digest: String,
    /// Plain cone-preservation certificate.
    pub positivity: PositivityCertificate,
    /// Rotational-strong-positivity certificate.
    pub rotational: PositivityCertificate,
    /// The extracted dominant pair, when one was produced.
    pub dominant: Option<EigenpairCertificate>,
    pub assertions: Vec<Assertion>,
    pub spectrum: SpectralSummary,
    pub tolerances: ToleranceProfile,
    /// Reproduction seed recorded by batch drivers; zero for direct calls.
    pub seed: u64,
}

impl CertificationReport {
    /// Looks an assertion up by name.
    pub fn assertion(&self, name: &str) -> Option<&Assertion> {
        self.assertions.iter().find(|a| a.name == name)
    }

    /// True when every `asserted` entry passed.
    pub fn all_asserted_pass(&self) -> bool {
        self.assertions.iter().filter(|a| a.asserted).all(|a| a.verdict == Verdict::Pass)
    }
}

fn push_bits(bytes: &mut Vec<u8>, x: f64) {
    bytes.extend_from_slice(&x.to_bits().to_le_bytes());
}

fn push_vector(bytes: &mut Vec<u8>, v: &CVector) {
    bytes.extend_from_slice(&(v.dim() as u64).to_le_bytes());
    for z in v.iter() {
        push_bits(bytes, z.re);
        push_bits(bytes, z.im);
    }
}

/// Hex SHA-256 of a canonical bit-exact encoding of the operator and cone.
/// Two runs over the same instance always produce the same digest.
pub fn input_digest(a: &CMatrix, cone: &ConeSpec) -> String {
    let mut bytes: Vec<u8> = b"conespec/instance/v1\n".to_vec();
    bytes.extend_from_slice(&(a.nrows() as u64).to_le_bytes());
    bytes.extend_from_slice(&(a.ncols() as u64).to_le_bytes());
    for z in a.entries() {
        push_bits(&mut bytes, z.re);
        push_bits(&mut bytes, z.im);
    }
    bytes.extend_from_slice(cone.kind_name().as_bytes());
    bytes.push(0);
    bytes.extend_from_slice(&(cone.dim() as u64).to_le_bytes());
    if let Ok(gens) = cone.real_conic_generators() {
        bytes.extend_from_slice(&(gens.len() as u64).to_le_bytes());
        for g in &gens {
            push_vector(&mut bytes, g);
        }
    }
    let hash = Sha256::digest(&bytes);
    let mut out = String::with_capacity(64);
    for b in hash {
        use std::fmt::Write;
        let _ = write!(out, "{b:02x}");
    }
    out
}
