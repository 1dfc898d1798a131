//! Job envelopes for the `periodlab` binary: parse, dispatch, report.

use std::fmt;

use periodlab::arith::{AlgebraicNumber, BigComplex, DecimalComplex, PrecisionContext};
use periodlab::dimension::{dimension_report_with, DimValue, DimensionReport};
use periodlab::elliptic::Lattice;
use periodlab::error::Error;
use periodlab::hyper::{euler_check, HyperReportOut};
use periodlab::motive::{validate, CurveDecl, MotiveSpec};
use periodlab::periods::{
    genus0_period, period_matrix, verify, Chain, DifferentialForm, Genus0Integral, PathData, PeriodMatrixReport,
    Verdict,
};
use periodlab::relations::{estimate_rank, search, RankEstimate, RelationCertificate};
use periodlab::vanishing::{classify, classify_genus0, VerdictReport};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const SCHEMA: &str = "periodlab/1";
pub const DEFAULT_BITS: u32 = 256;
pub const DEFAULT_HEIGHT: u64 = 1_000_000;
pub const DEFAULT_DIGITS: usize = 30;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Dim,
    Periods,
    Verify,
    Vanish,
    Genus0,
    Hyper,
    Relate,
}

/// The versioned top-level document.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobSpec {
    pub schema: String,
    pub command: Command,
    pub input: Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub precision_bits: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub height_bound: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub digits_out: Option<usize>,
}

/// Command-line values that take precedence over the envelope.
#[derive(Clone, Copy, Debug, Default)]
pub struct Overrides {
    pub precision_bits: Option<u32>,
    pub height_bound: Option<u64>,
    pub digits_out: Option<usize>,
}

#[derive(Debug)]
pub enum CliError {
    /// The document does not match the schema; `path` locates the problem.
    Schema {
        path: String,
        message: String,
    },
    Engine(Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Schema { .. } => 3,
            CliError::Engine(_) => 2,
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            CliError::Schema { path, message } => {
                serde_json::json!({ "error": "schema", "path": path, "message": message })
            }
            CliError::Engine(e) => serde_json::json!({ "error": "engine", "kind": kind(e), "message": e.to_string() }),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Schema { path, message } => write!(f, "schema error at {path}: {message}"),
            CliError::Engine(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Engine(e)
    }
}

fn kind(e: &Error) -> String {
    let dbg = format!("{e:?}");
    dbg.split(['(', ' ']).next().unwrap_or_default().to_string()
}

fn schema(path: impl Into<String>, message: impl Into<String>) -> CliError {
    CliError::Schema { path: path.into(), message: message.into() }
}

fn parse_at<T: DeserializeOwned>(v: &Value, prefix: &str) -> Result<T, CliError> {
    serde_path_to_error::deserialize(v).map_err(|e| {
        let inner = e.path().to_string();
        let path = if inner == "." { prefix.to_string() } else { format!("{prefix}.{inner}") };
        schema(path, e.into_inner().to_string())
    })
}

/// Parses an envelope, naming the offending JSON path on failure.
pub fn parse_job(text: &str) -> Result<JobSpec, CliError> {
    let mut de = serde_json::Deserializer::from_str(text);
    let job: JobSpec = serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let path = e.path().to_string();
        schema(path, e.into_inner().to_string())
    })?;
    if job.schema != SCHEMA {
        return Err(schema("schema", format!("expected \"{SCHEMA}\", found \"{}\"", job.schema)));
    }
    Ok(job)
}

/// Effective settings after overrides and validation.
#[derive(Clone, Copy, Debug)]
pub struct Settings {
    pub ctx: PrecisionContext,
    pub height: u64,
    pub digits: usize,
}

impl Settings {
    pub fn resolve(job: &JobSpec, o: &Overrides) -> Result<Self, CliError> {
        let bits = o.precision_bits.or(job.precision_bits).unwrap_or(DEFAULT_BITS);
        let ctx = PrecisionContext::new(bits).map_err(|e| schema("precision_bits", e.to_string()))?;
        let height = o.height_bound.or(job.height_bound).unwrap_or(DEFAULT_HEIGHT);
        if height == 0 {
            return Err(schema("height_bound", "must be positive"));
        }
        let digits = o.digits_out.or(job.digits_out).unwrap_or(DEFAULT_DIGITS);
        let max_digits = (bits as f64 * 0.3) as usize;
        if digits == 0 || digits > max_digits {
            return Err(schema("digits_out", format!("must lie in 1..={max_digits} at {bits} bits")));
        }
        Ok(Settings { ctx, height, digits })
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MotiveInput {
    motive: MotiveSpec,
    #[serde(default)]
    paths: PathData,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct VanishInput {
    curve: CurveDecl,
    form: DifferentialForm,
    chain: Chain,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct HyperInput {
    lambda: AlgebraicNumber,
}

/// One number handed to the relation detector.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum ValueSpec {
    Log { log: AlgebraicNumber },
    Algebraic { algebraic: AlgebraicNumber },
    TwoPiI { two_pi_i: i64 },
    Decimal(DecimalComplex),
    Real(String),
}

impl ValueSpec {
    pub fn eval(&self, ctx: &PrecisionContext) -> periodlab::error::Result<BigComplex> {
        match self {
            ValueSpec::Log { log } => log.eval(ctx)?.ln(),
            ValueSpec::Algebraic { algebraic } => algebraic.eval(ctx),
            ValueSpec::TwoPiI { two_pi_i } => Ok(BigComplex::two_pi_i(ctx.bits).scale_i64(*two_pi_i)),
            ValueSpec::Decimal(d) => BigComplex::parse(&d.re, &d.im, ctx.bits),
            ValueSpec::Real(s) => BigComplex::parse(s, "0", ctx.bits),
        }
    }
}

#[derive(Clone, Copy, Debug, Deserialize)]
#[serde(rename_all = "lowercase")]
enum RelateMode {
    Find,
    Rank,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RelateInput {
    values: Vec<ValueSpec>,
    mode: RelateMode,
    #[serde(default)]
    field: Option<AlgebraicNumber>,
}

#[derive(Serialize)]
struct DimOut {
    #[serde(skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    dimension: DimensionReport,
}

#[derive(Serialize)]
struct VerifyOut {
    dimension: DimensionReport,
    matrix: PeriodMatrixReport,
    predicted: DimValue,
    values: usize,
    rank: RankEstimate,
    verdict: Verdict,
}

#[derive(Serialize)]
struct PartOut {
    root: DecimalComplex,
    multiplicity: u32,
    coeffs: Vec<DecimalComplex>,
}

#[derive(Serialize)]
struct Genus0Out {
    value: DecimalComplex,
    exact_part: DecimalComplex,
    log_part: DecimalComplex,
    polynomial: Vec<DecimalComplex>,
    parts: Vec<PartOut>,
    verdict: VerdictReport,
}

#[derive(Serialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
enum RelateOut {
    Find {
        relation: Option<RelationCertificate>,
        /// No relation below this height exists at this precision.
        negative_bound: u64,
    },
    Rank(RankEstimate),
}

#[derive(Serialize)]
struct Envelope<'a, R: Serialize> {
    schema: &'a str,
    command: Command,
    precision_bits: u32,
    height_bound: u64,
    digits_out: usize,
    report: R,
}

fn envelope<R: Serialize>(job: &JobSpec, s: &Settings, report: R) -> Value {
    serde_json::to_value(Envelope {
        schema: SCHEMA,
        command: job.command,
        precision_bits: s.ctx.bits,
        height_bound: s.height,
        digits_out: s.digits,
        report,
    })
    .expect("reports serialize")
}

/// Runs a parsed job and returns the report envelope.
pub fn run(job: &JobSpec, o: &Overrides) -> Result<Value, CliError> {
    let s = Settings::resolve(job, o)?;
    let ctx = &s.ctx;
    let d = s.digits;
    let out = match job.command {
        Command::Dim => {
            let inp: MotiveInput = parse_at(&job.input, "input")?;
            let m = validate(&inp.motive)?;
            envelope(job, &s, DimOut { name: inp.motive.name.clone(), dimension: dimension_report_with(&m, ctx)? })
        }
        Command::Periods => {
            let inp: MotiveInput = parse_at(&job.input, "input")?;
            let m = validate(&inp.motive)?;
            envelope(job, &s, period_matrix(&m, &inp.paths, ctx)?.to_report(d))
        }
        Command::Verify => {
            let inp: MotiveInput = parse_at(&job.input, "input")?;
            let m = validate(&inp.motive)?;
            let dim = dimension_report_with(&m, ctx)?;
            let pm = period_matrix(&m, &inp.paths, ctx)?;
            let v = verify(&m, &pm, &dim, s.height, ctx)?;
            envelope(
                job,
                &s,
                VerifyOut {
                    dimension: dim,
                    matrix: pm.to_report(d),
                    predicted: v.predicted,
                    values: v.values,
                    rank: v.rank,
                    verdict: v.verdict,
                },
            )
        }
        Command::Vanish => {
            let inp: VanishInput = parse_at(&job.input, "input")?;
            let lat = Lattice::from_algebraic(&inp.curve.g2, &inp.curve.g3, ctx)?;
            envelope(job, &s, classify(&inp.form, &inp.chain, &lat, ctx)?.to_report(d))
        }
        Command::Genus0 => {
            let inp: Genus0Integral = parse_at(&job.input, "input")?;
            let p = genus0_period(&inp, ctx)?;
            let dc = |z: &BigComplex| DecimalComplex::new(z, d);
            let out = Genus0Out {
                value: dc(&p.value),
                exact_part: dc(&p.exact_part),
                log_part: dc(&p.log_part),
                polynomial: p.decomposition.polynomial.iter().map(dc).collect(),
                parts: p
                    .decomposition
                    .parts
                    .iter()
                    .map(|q| PartOut {
                        root: dc(&q.root),
                        multiplicity: q.multiplicity,
                        coeffs: q.coeffs.iter().map(dc).collect(),
                    })
                    .collect(),
                verdict: classify_genus0(&inp, ctx)?.to_report(d),
            };
            envelope(job, &s, out)
        }
        Command::Hyper => {
            let inp: HyperInput = parse_at(&job.input, "input")?;
            let r: HyperReportOut = euler_check(&inp.lambda, ctx)?.to_report(d);
            envelope(job, &s, r)
        }
        Command::Relate => {
            let inp: RelateInput = parse_at(&job.input, "input")?;
            let values =
                inp.values.iter().map(|v| v.eval(ctx)).collect::<periodlab::error::Result<Vec<BigComplex>>>()?;
            let field = inp.field.as_ref();
            let out = match inp.mode {
                RelateMode::Find => {
                    let found = search(&values, field, s.height, ctx)?;
                    if found.relation.is_none() && found.negative_bound < s.height {
                        return Err(Error::PrecisionInsufficient(format!(
                            "only heights below {} are excluded at {} bits",
                            found.negative_bound, ctx.bits
                        ))
                        .into());
                    }
                    RelateOut::Find { relation: found.relation, negative_bound: found.negative_bound }
                }
                RelateMode::Rank => RelateOut::Rank(estimate_rank(&values, field, s.height, ctx)?),
            };
            envelope(job, &s, out)
        }
    };
    Ok(out)
}

/// Parses and runs a document, rendering the report as pretty JSON.
pub fn run_text(text: &str, o: &Overrides) -> Result<String, CliError> {
    let job = parse_job(text)?;
    let v = run(&job, o)?;
    Ok(serde_json::to_string_pretty(&v).expect("values serialize") + "\n")
}
