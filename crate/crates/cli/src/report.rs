//! Machine-readable report and its text rendering.

use std::fmt::Write as _;

use rank2sep::oracles::{harness::SuiteReport, Agreement, OracleReport};
use rank2sep::separability::Decomposition;
use rank2sep::{Branch, Tolerances, Verdict};
use serde::{Deserialize, Serialize};

use crate::state_file::{fmt_num, to_matrix, to_vector, Complex, Matrix};

pub const REPORT_SCHEMA: &str = "rank2sep.report/1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: String,
    pub command: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub input: Option<InputInfo>,
    pub tolerances: ToleranceBlock,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verdict: Option<VerdictBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub concurrence: Option<ConcurrenceBlock>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub selftest: Vec<SuiteBlock>,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputInfo {
    pub source: String,
    pub sha256: String,
    pub kind: String,
    pub n: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ToleranceBlock {
    pub residual: f64,
    pub rank: f64,
    pub weight_margin: f64,
    pub validation: f64,
    pub ppt: f64,
}

impl ToleranceBlock {
    pub fn new(tol: &Tolerances, ppt: f64) -> Self {
        Self {
            residual: tol.residual,
            rank: tol.rank,
            weight_margin: tol.weight_margin,
            validation: tol.validation,
            ppt,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualRow {
    pub name: String,
    pub value: f64,
    pub threshold: f64,
    pub passes: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermBlock {
    pub weight: f64,
    pub state: Matrix,
    pub u: Vec<Complex>,
    pub v: Vec<Complex>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerdictBlock {
    pub separable: bool,
    pub summary: String,
    pub branch: String,
    pub theta: Option<f64>,
    pub roots: Option<[Complex; 2]>,
    pub p_prime: Option<f64>,
    pub residuals: Vec<ResidualRow>,
    pub decomposition: Option<Vec<TermBlock>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleBlock {
    pub ppt_holds: bool,
    pub min_pt_eigenvalue: f64,
    pub reconstruction_error: Option<f64>,
    pub agreement: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConcurrenceBlock {
    pub concurrence: f64,
    /// I_0 … I_{N−1}
    pub invariants: Vec<f64>,
    pub schmidt_coefficients: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteBlock {
    pub name: String,
    pub passed: usize,
    pub failed: usize,
    pub failures: Vec<String>,
}

impl From<&SuiteReport> for SuiteBlock {
    fn from(r: &SuiteReport) -> Self {
        Self {
            name: r.name.to_string(),
            passed: r.passed,
            failed: r.failed,
            failures: r.failures.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub tool: String,
    pub version: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rng: Option<String>,
}

impl Provenance {
    pub fn new() -> Self {
        Self {
            tool: "rank2sep".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            seed: None,
            rng: None,
        }
    }
}

impl Default for Provenance {
    fn default() -> Self {
        Self::new()
    }
}

/// One-line verdict such as `ENTANGLED (corollary fast path: p=0.25 < 1/2)`.
pub fn summary(v: &Verdict) -> String {
    match v.branch {
        Branch::EntangledCorollary => {
            let p = v.residual("corollary_p").map_or(f64::NAN, |r| r.value);
            format!("ENTANGLED (corollary fast path: p={} < 1/2)", fmt_num(p))
        }
        Branch::EntangledPure => "ENTANGLED (pure state with nonzero concurrence)".into(),
        Branch::PureProduct => "SEPARABLE (pure product state)".into(),
        Branch::BothEigenvectorsProduct => "SEPARABLE (both eigenvectors are product states)".into(),
        b if b.is_separable() => match v.p_prime {
            Some(w) => format!("SEPARABLE ({b}, p'={})", fmt_num(w)),
            None => format!("SEPARABLE ({b})"),
        },
        b => format!("ENTANGLED ({b})"),
    }
}

pub fn decomposition_block(d: &Decomposition) -> Vec<TermBlock> {
    d.terms
        .iter()
        .map(|t| TermBlock {
            weight: t.weight,
            state: to_matrix(t.state.coefficients()),
            u: to_vector(&t.factors.0),
            v: to_vector(&t.factors.1),
        })
        .collect()
}

impl VerdictBlock {
    pub fn new(v: &Verdict, with_decomposition: bool) -> Self {
        Self {
            separable: v.separable,
            summary: summary(v),
            branch: v.branch.to_string(),
            theta: v.theta,
            roots: v.roots.map(|(a, b)| [[a.re, a.im], [b.re, b.im]]),
            p_prime: v.p_prime,
            residuals: v
                .residuals
                .iter()
                .map(|(name, r)| ResidualRow {
                    name: name.clone(),
                    value: r.value,
                    threshold: r.threshold,
                    passes: r.passes(),
                })
                .collect(),
            decomposition: if with_decomposition {
                v.decomposition.as_ref().map(decomposition_block)
            } else {
                None
            },
        }
    }
}

impl OracleBlock {
    pub fn new(r: &OracleReport, with_agreement: bool) -> Self {
        let agreement = match r.agreement {
            Agreement::Consistent => "Consistent",
            Agreement::Inconsistent => "Inconsistent",
            Agreement::OneSidedOnly => "OneSidedOnly",
        };
        Self {
            ppt_holds: r.ppt_holds,
            min_pt_eigenvalue: r.min_pt_eigenvalue,
            reconstruction_error: r.reconstruction_error,
            agreement: with_agreement.then(|| agreement.to_string()),
        }
    }
}

fn complex(z: &Complex) -> String {
    match (z[0], z[1]) {
        (re, 0.0) => fmt_num(re),
        (0.0, im) => format!("{}i", fmt_num(im)),
        (re, im) if im < 0.0 => format!("{}-{}i", fmt_num(re), fmt_num(-im)),
        (re, im) => format!("{}+{}i", fmt_num(re), fmt_num(im)),
    }
}

fn vector(v: &[Complex]) -> String {
    let parts: Vec<String> = v.iter().map(complex).collect();
    format!("({})", parts.join(", "))
}

impl Report {
    pub fn new(command: &str, tolerances: ToleranceBlock) -> Self {
        Self {
            schema_version: REPORT_SCHEMA.into(),
            command: command.into(),
            input: None,
            tolerances,
            verdict: None,
            oracle: None,
            concurrence: None,
            selftest: Vec::new(),
            provenance: Provenance::new(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialize")
    }

    /// The first line a `--quiet` run prints.
    pub fn headline(&self) -> String {
        if let Some(v) = &self.verdict {
            return v.summary.clone();
        }
        if let Some(c) = &self.concurrence {
            return format!("C_N = {}", fmt_num(c.concurrence));
        }
        if let Some(o) = &self.oracle {
            return if o.ppt_holds {
                "PPT (partial transpose is positive semidefinite)".into()
            } else {
                "NPT (entangled: partial transpose has a negative eigenvalue)".into()
            };
        }
        if !self.selftest.is_empty() {
            let failed: usize = self.selftest.iter().map(|s| s.failed).sum();
            let passed: usize = self.selftest.iter().map(|s| s.passed).sum();
            return format!("selftest: {passed} passed, {failed} failed");
        }
        String::new()
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{}", self.headline());
        if let Some(v) = &self.verdict {
            let _ = writeln!(out, "branch: {}", v.branch);
            if let Some(t) = v.theta {
                let _ = writeln!(out, "theta: {}", fmt_num(t));
            }
            if let Some([a, b]) = &v.roots {
                let _ = writeln!(out, "roots: mu1 = {}, mu2 = {}", complex(a), complex(b));
            }
            if let Some(w) = v.p_prime {
                let _ = writeln!(out, "p': {}", fmt_num(w));
            }
            if !v.residuals.is_empty() {
                let _ = writeln!(out, "residuals:");
                let width = v.residuals.iter().map(|r| r.name.len()).max().unwrap_or(0);
                for r in &v.residuals {
                    let _ = writeln!(
                        out,
                        "  {:width$}  {:>12.4e}  threshold {:>10.3e}  {}",
                        r.name,
                        r.value,
                        r.threshold,
                        if r.passes { "ok" } else { "exceeds" },
                    );
                }
            }
            if let Some(terms) = &v.decomposition {
                let _ = writeln!(out, "decomposition:");
                for (k, t) in terms.iter().enumerate() {
                    let _ = writeln!(out, "  [{}] weight {}", k + 1, fmt_num(t.weight));
                    let _ = writeln!(out, "      u = {}", vector(&t.u));
                    let _ = writeln!(out, "      v = {}", vector(&t.v));
                }
            }
        }
        if let Some(c) = &self.concurrence {
            for (a, i) in c.invariants.iter().enumerate() {
                let _ = writeln!(out, "I_{a}: {}", fmt_num(*i));
            }
            let lambdas: Vec<String> = c.schmidt_coefficients.iter().map(|l| fmt_num(*l)).collect();
            let _ = writeln!(out, "Schmidt coefficients: {}", lambdas.join(", "));
        }
        if let Some(o) = &self.oracle {
            let _ = write!(
                out,
                "oracle: PPT {}, min eigenvalue of partial transpose {:.4e} (threshold {:.1e})",
                if o.ppt_holds { "holds" } else { "fails" },
                o.min_pt_eigenvalue,
                -self.tolerances.ppt
            );
            if let Some(a) = &o.agreement {
                let _ = write!(out, ", agreement {a}");
            }
            let _ = writeln!(out);
            if let Some(e) = o.reconstruction_error {
                let _ = writeln!(out, "reconstruction error: {e:.3e}");
            }
        }
        for s in &self.selftest {
            let _ = writeln!(out, "  {:<26} {:>5} passed {:>4} failed", s.name, s.passed, s.failed);
            for f in &s.failures {
                let _ = writeln!(out, "    {f}");
            }
        }
        let t = &self.tolerances;
        let _ = writeln!(
            out,
            "tolerances: residual {:e}, rank {:e}, weight margin {:e}, validation {:e}, ppt {:e}",
            t.residual, t.rank, t.weight_margin, t.validation, t.ppt
        );
        if let Some(i) = &self.input {
            let _ = writeln!(out, "input: {} ({}, N={}) sha256 {}", i.source, i.kind, i.n, i.sha256);
        }
        if let (Some(seed), Some(rng)) = (self.provenance.seed, &self.provenance.rng) {
            let _ = writeln!(out, "seed: {seed} ({rng})");
        }
        out
    }
}
