//! Problem files, certificates and the independent certificate checker.
//!
//! [`run`] answers a problem and attaches witnesses; [`verify`] re-checks a
//! certificate from its problem echo using polynomial identities, divisions
//! by witnessed Gröbner bases and substitutions only.

pub mod model;
pub mod problem;
pub mod ring;
pub mod tasks;
pub mod witness;

use std::sync::Arc;

use serde::{Deserialize, Serialize};

pub use problem::{parse_problem, ProblemFile, TaskKind, PROBLEM_SCHEMA};
pub use tasks::{OracleSection, TaskResult};

use crate::error::{Error, Result};
use crate::nagata::TFrac;
use crate::poly::{BaseOrder, VarTable};
use problem::FracSpec;
use witness::{parse, Check};

pub const CERTIFICATE_SCHEMA: &str = "dstar-certificate/1";
pub const ENGINE: &str = concat!("dstar ", env!("CARGO_PKG_VERSION"));
pub const REPLAY: &str = "dstar verify <this file>";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Certificate {
    pub schema: String,
    pub engine: String,
    pub replay: String,
    pub problem: ProblemFile,
    pub order: BaseOrder,
    pub verdict: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub charts: Vec<model::ChartWitness>,
    pub result: TaskResult,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleSection>,
}

/// Settings for [`run`].
#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    /// Overrides the order named in the problem file.
    pub order: Option<BaseOrder>,
    /// Degree bound for the brute-force cross-check, when enabled.
    pub oracle: Option<u32>,
}

/// Answer a problem and attach witnesses.
pub fn run(problem: &ProblemFile, opts: &RunOptions) -> Result<Certificate> {
    let order = opts.order.or(problem.order).unwrap_or_default();
    let (charts, result, oracle) = tasks::run_task(problem, order, opts.oracle)?;
    Ok(Certificate {
        schema: CERTIFICATE_SCHEMA.into(),
        engine: ENGINE.into(),
        replay: REPLAY.into(),
        problem: problem.clone(),
        order,
        verdict: result.verdict(),
        charts,
        result,
        oracle,
    })
}

/// Re-check a certificate; `Err` names the first failing check.
pub fn verify(cert: &Certificate) -> Check {
    if cert.schema != CERTIFICATE_SCHEMA {
        return Err(format!("unknown certificate schema `{}`", cert.schema));
    }
    let problem = &cert.problem;
    if problem.schema != PROBLEM_SCHEMA {
        return Err(format!("unknown problem schema `{}`", problem.schema));
    }
    let verdict = tasks::verify_task(cert)?;
    if verdict != cert.verdict {
        return Err(format!("verdict `{}` does not match the witnesses (`{verdict}`)", cert.verdict));
    }
    Ok(())
}

/// Parse and run a problem given as JSON text, returning the certificate as JSON.
pub fn run_text(text: &str, opts: &RunOptions) -> Result<String> {
    let problem = parse_problem(text)?;
    let cert = run(&problem, opts)?;
    Ok(serde_json::to_string_pretty(&cert)? + "\n")
}

/// Parse and verify a certificate given as JSON text. Malformed JSON is an
/// `Err` of the outer result; a failed check is `Ok(Err(reason))`.
pub fn verify_text(text: &str) -> Result<Check> {
    let cert: Certificate = serde_json::from_str(text)?;
    Ok(verify(&cert))
}

pub(crate) fn fracs_of(fs: &[FracSpec], table: &Arc<VarTable>) -> Check<Vec<TFrac>> {
    fs.iter()
        .map(|f| {
            Ok(match f {
                FracSpec::Poly(s) => TFrac::from_poly(parse(s, table)?),
                FracSpec::Frac(p) => {
                    let den = parse(&p.den, table)?;
                    if den.is_zero() {
                        return Err("zero denominator".into());
                    }
                    TFrac {
                        num: parse(&p.num, table)?,
                        den,
                    }
                }
            })
        })
        .collect()
}

impl From<Error> for String {
    fn from(e: Error) -> String {
        e.to_string()
    }
}
