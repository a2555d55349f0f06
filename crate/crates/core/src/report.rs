//! Serialization helpers: integers and matrices travel as strings so that
//! arbitrary precision survives JSON.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize, Serializer};

use crate::classify::{Case, Certificate, PaperStatus, StableTag, StableVerdict, Verdict, VerdictTag, Witness};
use crate::exactmat::{IMat, IVec};
use crate::monodromy3::CongruenceReport;

pub fn ser_int<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

pub fn ser_ivec<S: Serializer>(v: &IVec, s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.0.iter().map(|x| x.to_string()))
}

pub fn ser_imat<S: Serializer>(m: &IMat, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&m.to_string())
}

/// Flat JSON shape shared by `classify` and `batch`. All integers and
/// matrices are strings.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct VerdictRecord {
    pub input: String,
    pub fiber_dim: usize,
    pub verdict: String,
    pub case: Option<String>,
    pub flags: Vec<String>,
    /// conjugator literal, `P⁻¹·M·P` split (or `P⁻¹·((1) ⊕ M)·P` when stabilized)
    pub certificate: Option<String>,
    pub certificate_status: String,
    pub modulus: Option<String>,
    pub values: Option<Vec<String>>,
    pub extras: BTreeMap<String, String>,
}

fn congruence_extras(extras: &mut BTreeMap<String, String>, paper: Option<&CongruenceReport>) {
    if let Some(p) = paper {
        extras.insert("paper_values".into(), p.values.to_string());
        extras.insert("paper_modulus".into(), p.modulus.to_string());
        extras.insert("paper_holds".into(), p.holds.to_string());
    }
}

fn blocks_literal(blocks: &[IMat]) -> String {
    blocks.iter().map(|b| b.to_string()).collect::<Vec<_>>().join(" + ")
}

impl VerdictRecord {
    pub fn from_verdict(input: &IMat, v: &Verdict) -> Self {
        let mut extras = BTreeMap::new();
        congruence_extras(&mut extras, v.paper_congruence.as_ref());
        let (verdict, case, certificate, status, modulus, values) = match &v.tag {
            VerdictTag::Decomposable { cert, blocks } => {
                extras.insert("blocks".into(), blocks_literal(blocks));
                ("Decomposable", None, Some(cert.as_mat().to_string()), "Verified", None, None)
            }
            VerdictTag::Indecomposable(case) => {
                let (m, vals) = match case {
                    Case::CongruenceObstruction { values, modulus } => {
                        (Some(modulus.to_string()), Some(values.0.iter().map(|x| x.to_string()).collect()))
                    }
                    _ => (None, None),
                };
                ("Indecomposable", Some(case.name().to_string()), None, "None", m, vals)
            }
        };
        VerdictRecord {
            input: input.to_string(),
            fiber_dim: input.rows(),
            verdict: verdict.into(),
            case,
            flags: v.flags.iter().map(|f| format!("{f:?}")).collect(),
            certificate,
            certificate_status: status.into(),
            modulus,
            values,
            extras,
        }
    }

    pub fn from_stable(input: &IMat, s: &StableVerdict) -> Self {
        let mut r = VerdictRecord::from_verdict(input, &s.base);
        r.extras.insert("base_verdict".into(), s.base.label().into());
        r.verdict = s.label().into();
        match &s.tag {
            StableTag::StablyIndecomposable(case) => {
                r.case = Some(case.name().into());
            }
            StableTag::StablyDecomposable(w) => {
                r.extras.insert("witness".into(), s.witness_label().unwrap_or_default().into());
                match w {
                    Witness::AlreadyDecomposable { .. } => {}
                    Witness::TrivialStabilizer { p, block, route } => {
                        r.certificate = Some(p.as_mat().to_string());
                        r.certificate_status = "Verified".into();
                        r.extras.insert("block".into(), block.to_string());
                        r.extras.insert("route".into(), format!("{route:?}"));
                    }
                    Witness::PaperAsserted { status, jordan_obstruction } => {
                        r.certificate = None;
                        r.extras.insert("jordan_obstruction".into(), jordan_obstruction.to_string());
                        match status {
                            PaperStatus::NoUpperTriangularSplit { ext, budget, blocks_tried } => {
                                r.certificate_status = "PaperAsserted:NoUpperTriangularSplit".into();
                                r.extras.insert("ext_x".into(), ext.x.to_string());
                                r.extras.insert(
                                    "budget".into(),
                                    format!("coefficients {} blocks {}", budget.coefficient_bound, budget.block_entry_bound),
                                );
                                r.extras.insert("blocks_tried".into(), blocks_tried.to_string());
                            }
                            PaperStatus::OutsideSearchRegime => {
                                r.certificate_status = "PaperAsserted:OutsideSearchRegime".into();
                            }
                        }
                    }
                }
            }
        }
        r
    }
}

/// Human-readable form of a certificate.
pub fn describe_certificate(c: &Certificate) -> String {
    match c {
        Certificate::Split { p, sizes } => format!("P = {} splits into blocks {sizes:?}", p.as_mat()),
        Certificate::Stabilized { p, block } => format!("P = {} gives (1)+M ~ I2 + {block}", p.as_mat()),
        Certificate::Conjugacy { p, target } => format!("P = {} conjugates to {target}", p.as_mat()),
    }
}
