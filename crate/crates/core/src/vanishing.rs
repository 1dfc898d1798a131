//! Classification of period integrals as trivially zero, non-trivially
//! zero or non-zero, decided at the working tolerance.

use rug::Float;
use serde::Serialize;

use crate::arith::{BigComplex, DecimalComplex, PrecisionContext};
use crate::elliptic::Lattice;
use crate::error::Result;
use crate::periods::{
    exact_boundary_sum, form_period, genus0_period, incomplete_first, Chain, DifferentialForm, FormKind,
    Genus0Integral, INFINITY,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    TrivialZero,
    NontrivialZero,
    Nonzero,
    Undetermined,
}

/// Which criterion decided the verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Reason {
    FirstKind,
    Exact,
    SecondKind,
    ThirdKind,
    Genus0,
}

/// The quantities the criteria look at.
#[derive(Clone, Debug, Default, Serialize)]
pub struct Witnesses {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub l_sigma: Option<BigComplex>,
    /// `Σ a_i (f(γ_i(1)) − f(γ_i(0)))` for the `df` part.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub boundary_sum: Option<BigComplex>,
    /// `2πi Σ_Q n_σ(Q) Res_Q` over the poles of the third-kind part.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residue_sum: Option<BigComplex>,
    /// Logarithmic part of a genus-0 integral.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub log_part: Option<BigComplex>,
}

#[derive(Clone, Debug, Serialize)]
pub struct VanishingVerdict {
    pub status: Status,
    pub reason: Reason,
    pub value: BigComplex,
    pub witnesses: Witnesses,
    pub precision_bits: u32,
    pub tolerance_exp: u32,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WitnessReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub l_sigma: Option<DecimalComplex>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub boundary_sum: Option<DecimalComplex>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residue_sum: Option<DecimalComplex>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub log_part: Option<DecimalComplex>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerdictReport {
    pub status: Status,
    pub reason: Reason,
    pub value: DecimalComplex,
    pub witnesses: WitnessReport,
    pub precision_bits: u32,
    /// "zero" means `|x| < 2^-tolerance_exp`.
    pub tolerance_exp: u32,
}

impl VanishingVerdict {
    pub fn to_report(&self, digits: usize) -> VerdictReport {
        let d = |z: &Option<BigComplex>| z.as_ref().map(|z| DecimalComplex::new(z, digits));
        VerdictReport {
            status: self.status,
            reason: self.reason,
            value: DecimalComplex::new(&self.value, digits),
            witnesses: WitnessReport {
                l_sigma: d(&self.witnesses.l_sigma),
                boundary_sum: d(&self.witnesses.boundary_sum),
                residue_sum: d(&self.witnesses.residue_sum),
                log_part: d(&self.witnesses.log_part),
            },
            precision_bits: self.precision_bits,
            tolerance_exp: self.tolerance_exp,
        }
    }
}

/// `l(σ) = Σ a_i l(γ_i)`, whose exponential is the point `Σ a_i P(γ_i)`.
pub fn l_sigma(chain: &Chain, lat: &Lattice, ctx: &PrecisionContext) -> Result<BigComplex> {
    incomplete_first(chain, lat, ctx)
}

fn small(z: &BigComplex, tol: &Float) -> bool {
    z.abs() < *tol
}

fn decide(value: &BigComplex, conditions: bool, tol: &Float) -> Status {
    let mag = value.abs();
    if mag < *tol {
        if conditions {
            Status::NontrivialZero
        } else {
            Status::Undetermined
        }
    } else if mag > Float::with_val(tol.prec(), tol * 2u32) {
        Status::Nonzero
    } else {
        Status::Undetermined
    }
}

/// Classifies `∫_σ ϑ` on the curve of `lat`.
pub fn classify(
    form: &DifferentialForm,
    chain: &Chain,
    lat: &Lattice,
    ctx: &PrecisionContext,
) -> Result<VanishingVerdict> {
    form.validate()?;
    let tol = ctx.tol();
    let kind = form.kind();
    let value = form_period(form, chain, lat, ctx)?;
    let l = l_sigma(chain, lat, ctx)?;
    let boundary = form.exact_part.as_ref().map(|f| exact_boundary_sum(f, chain, lat)).transpose()?;
    let bits = lat.omega1.prec();
    let reason = match kind {
        FormKind::Zero | FormKind::Exact => Reason::Exact,
        FormKind::FirstKind => Reason::FirstKind,
        FormKind::SecondKind => Reason::SecondKind,
        FormKind::ThirdKind => Reason::ThirdKind,
    };
    let mut witnesses = Witnesses { boundary_sum: boundary.clone(), ..Witnesses::default() };
    let boundary_zero = boundary.as_ref().is_none_or(|b| small(b, &tol));
    let conditions = match kind {
        FormKind::Zero | FormKind::Exact => true,
        FormKind::FirstKind | FormKind::SecondKind => {
            witnesses.l_sigma = Some(l.clone());
            small(&l, &tol) && boundary_zero
        }
        FormKind::ThirdKind => {
            let mut res_sum = BigComplex::zero(bits);
            for (label, r) in form.residues(bits)? {
                res_sum = &res_sum + &r.scale_i64(chain.winding(&label));
            }
            let res_sum = &res_sum * &BigComplex::two_pi_i(bits);
            let ok = small(&l, &tol) && small(&res_sum, &tol);
            witnesses.l_sigma = Some(l);
            witnesses.residue_sum = Some(res_sum);
            ok
        }
    };
    let trivial = chain.is_trivial() || kind == FormKind::Zero;
    let status = if trivial && small(&value, &tol) { Status::TrivialZero } else { decide(&value, conditions, &tol) };
    Ok(VanishingVerdict { status, reason, value, witnesses, precision_bits: ctx.bits, tolerance_exp: ctx.tol_exp() })
}

/// Classifies `∫_a^b P(x)/Q(x) dx`: algebraic iff the logarithmic part vanishes.
pub fn classify_genus0(job: &Genus0Integral, ctx: &PrecisionContext) -> Result<VanishingVerdict> {
    let tol = ctx.tol();
    let p = genus0_period(job, ctx)?;
    let trivial = job.a == job.b || job.numer.iter().all(|c| c.as_rational().is_some_and(|q| q == 0));
    let status = if trivial {
        Status::TrivialZero
    } else {
        decide(&p.value, small(&p.log_part, &tol) && small(&p.exact_part, &tol), &tol)
    };
    Ok(VanishingVerdict {
        status,
        reason: Reason::Genus0,
        value: p.value,
        witnesses: Witnesses { log_part: Some(p.log_part), ..Witnesses::default() },
        precision_bits: ctx.bits,
        tolerance_exp: ctx.tol_exp(),
    })
}

/// Windings around infinity are keyed by this label.
pub const INFINITY_LABEL: &str = INFINITY;
