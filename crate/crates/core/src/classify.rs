//! Decomposability of torus bundles over the circle in fiber dimension ≤ 3,
//! plain and stable, with certificates that are re-verified before return.
//!
//! In dimension 3 with `f(1) = 0` the decision is the splitting congruence
//! of [`split_congruence`]; the theorem's stated congruence is computed
//! alongside every verdict and a flag records when the two disagree.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactmat::{charpoly, int, IMat, IVec, Unimodular};
use crate::monodromy3::{
    ao_congruence, newman_reduce, split_conjugator_3x3, split_congruence, stable_split, unipotent_split,
    CongruenceReport, ExtReport, SearchResult, SplitRoute, StableBudget, StableSplitOutcome,
};
use crate::polyint::{cubic_case, Trichotomy};
use crate::sl2z::{M2, SL2};

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Case {
    /// Fiber dimension 1, or 2 with monodromy other than `I₂`: no
    /// nontrivial block shape has determinant-one blocks.
    LowDimension,
    IrreducibleCharPoly,
    MinusOneRoot,
    /// `a·(A₂ − (Tr A₂ − 1)I)` is nonzero modulo `Tr A₂ − 2`; modulus 0
    /// means exact comparison.
    CongruenceObstruction { values: IVec, modulus: BigInt },
}

impl Case {
    pub fn name(&self) -> &'static str {
        match self {
            Case::LowDimension => "LowDimension",
            Case::IrreducibleCharPoly => "IrreducibleCharPoly",
            Case::MinusOneRoot => "MinusOneRoot",
            Case::CongruenceObstruction { .. } => "CongruenceObstruction",
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize)]
pub enum Flag {
    /// `Tr A₂ = ±2` with `f(1) = 0`: outside the lemma's hypotheses.
    UnprovenRegime,
    /// The theorem's stated congruence gives the opposite answer.
    TheoremCriterionDisagrees,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum VerdictTag {
    /// `cert⁻¹·A·cert` is the block sum of `blocks`.
    Decomposable { cert: Unimodular, blocks: Vec<IMat> },
    Indecomposable(Case),
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Verdict {
    pub tag: VerdictTag,
    pub flags: BTreeSet<Flag>,
    /// the theorem's congruence on the Newman form, when one was computed
    pub paper_congruence: Option<CongruenceReport>,
}

impl Verdict {
    fn plain(tag: VerdictTag) -> Self {
        Verdict { tag, flags: BTreeSet::new(), paper_congruence: None }
    }

    pub fn is_decomposable(&self) -> bool {
        matches!(self.tag, VerdictTag::Decomposable { .. })
    }

    pub fn case(&self) -> Option<&Case> {
        match &self.tag {
            VerdictTag::Indecomposable(c) => Some(c),
            VerdictTag::Decomposable { .. } => None,
        }
    }

    /// Decomposable, or the name of the indecomposable case.
    pub fn label(&self) -> &'static str {
        match &self.tag {
            VerdictTag::Decomposable { .. } => "Decomposable",
            VerdictTag::Indecomposable(c) => c.name(),
        }
    }

    pub fn certificate(&self) -> Option<Certificate> {
        match &self.tag {
            VerdictTag::Decomposable { cert, blocks } => Some(Certificate::Split {
                p: cert.clone(),
                sizes: blocks.iter().map(IMat::rows).collect(),
            }),
            VerdictTag::Indecomposable(_) => None,
        }
    }
}

/// Why the stable theorem's conclusion has no constructed witness.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum PaperStatus {
    NoUpperTriangularSplit { ext: ExtReport, budget: StableBudget, blocks_tried: usize },
    /// `Tr A₂ = 2`: the stabilized search needs `A₂ − I` invertible.
    OutsideSearchRegime,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Witness {
    AlreadyDecomposable { cert: Unimodular, blocks: Vec<IMat> },
    /// `P⁻¹·((1) ⊕ A)·P = I₂ ⊕ block`.
    TrivialStabilizer { p: Unimodular, block: SL2, route: SplitRoute },
    /// The theorem asserts stable decomposability; nothing here confirms it.
    PaperAsserted {
        status: PaperStatus,
        /// `(A − I)² ≠ 0` with `f = (t − 1)³`: a Jordan block of size 3 survives
        /// every stabilization, so no splitting into blocks of size `< 3` exists.
        jordan_obstruction: bool,
    },
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum StableTag {
    StablyIndecomposable(Case),
    StablyDecomposable(Witness),
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct StableVerdict {
    pub tag: StableTag,
    pub flags: BTreeSet<Flag>,
    pub base: Verdict,
}

impl StableVerdict {
    pub fn label(&self) -> &'static str {
        match &self.tag {
            StableTag::StablyIndecomposable(_) => "StablyIndecomposable",
            StableTag::StablyDecomposable(_) => "StablyDecomposable",
        }
    }

    pub fn witness_label(&self) -> Option<&'static str> {
        match &self.tag {
            StableTag::StablyIndecomposable(_) => None,
            StableTag::StablyDecomposable(w) => Some(match w {
                Witness::AlreadyDecomposable { .. } => "AlreadyDecomposable",
                Witness::TrivialStabilizer { .. } => "TrivialStabilizer",
                Witness::PaperAsserted { .. } => "PaperAsserted",
            }),
        }
    }

    pub fn certificate(&self) -> Option<Certificate> {
        match &self.tag {
            StableTag::StablyDecomposable(Witness::AlreadyDecomposable { .. }) => self.base.certificate(),
            StableTag::StablyDecomposable(Witness::TrivialStabilizer { p, block, .. }) => {
                Some(Certificate::Stabilized { p: p.clone(), block: block.clone() })
            }
            _ => None,
        }
    }
}

/// Anything `verify_certificate` can recheck.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Certificate {
    /// `p⁻¹·A·p` block diagonal with blocks of the given sizes, each of det 1.
    Split { p: Unimodular, sizes: Vec<usize> },
    /// `p⁻¹·((1) ⊕ A)·p = I₂ ⊕ block`.
    Stabilized { p: Unimodular, block: SL2 },
    /// `p⁻¹·A·p = target`.
    Conjugacy { p: Unimodular, target: IMat },
}

/// Exact recomputation; false on any mismatch, never an error.
pub fn verify_certificate(a: &IMat, cert: &Certificate) -> bool {
    if !a.is_square() {
        return false;
    }
    match cert {
        Certificate::Split { p, sizes } => {
            if p.dim() != a.rows() || sizes.iter().sum::<usize>() != a.rows() || sizes.len() < 2 {
                return false;
            }
            let c = p.conjugate(a);
            c.is_block_diagonal(sizes)
                && c.diagonal_blocks(sizes)
                    .iter()
                    .all(|b| crate::exactmat::det(b).is_ok_and(|d| d == int(1)))
        }
        Certificate::Stabilized { p, block } => {
            if p.dim() != a.rows() + 1 || a.rows() != 3 {
                return false;
            }
            let v = IMat::identity(1).direct_sum(a);
            p.conjugate(&v) == IMat::identity(2).direct_sum(&block.to_imat())
        }
        Certificate::Conjugacy { p, target } => p.dim() == a.rows() && &p.conjugate(a) == target,
    }
}

fn one_one() -> IMat {
    IMat::identity(1)
}

/// Decomposability over the circle for fiber dimension 1 to 3.
///
/// In dimension 3 the decision is exact and every Decomposable verdict
/// carries a verified certificate; `bound` is accepted for interface
/// symmetry with the bounded searches.
pub fn classify_decomposable(a: &Unimodular, _bound: u32) -> Result<Verdict> {
    let n = a.dim();
    let m = a.as_mat();
    let verdict = match n {
        1 => Verdict::plain(VerdictTag::Indecomposable(Case::LowDimension)),
        2 if m.is_identity() => Verdict::plain(VerdictTag::Decomposable {
            cert: Unimodular::identity(2),
            blocks: vec![one_one(), one_one()],
        }),
        2 => Verdict::plain(VerdictTag::Indecomposable(Case::LowDimension)),
        3 => classify3(a)?,
        _ => return Err(Error::UnsupportedDimension(n)),
    };
    if let Some(cert) = verdict.certificate() {
        if !verify_certificate(m, &cert) {
            return Err(Error::Certificate(format!("split certificate for {m} failed")));
        }
    }
    Ok(verdict)
}

fn classify3(a: &Unimodular) -> Result<Verdict> {
    let m = a.as_mat();
    let f = charpoly(m)?;
    match cubic_case(&f)? {
        Trichotomy::Irreducible => return Ok(Verdict::plain(VerdictTag::Indecomposable(Case::IrreducibleCharPoly))),
        Trichotomy::RootMinusOneOnly => return Ok(Verdict::plain(VerdictTag::Indecomposable(Case::MinusOneRoot))),
        Trichotomy::RootOne => {}
    }
    let rf = newman_reduce(a, 1)?;
    let a2 = rf.a2_sl2()?;
    let paper = ao_congruence(&rf.a, &a2);
    let split = split_congruence(&rf.a, &a2);
    let mut flags = BTreeSet::new();
    if split.unproven_regime {
        flags.insert(Flag::UnprovenRegime);
    }
    if paper.holds != split.holds {
        flags.insert(Flag::TheoremCriterionDisagrees);
    }
    let obstruction = || {
        VerdictTag::Indecomposable(Case::CongruenceObstruction {
            values: split.values.clone(),
            modulus: split.modulus.clone(),
        })
    };
    let tag = if a2.trace() == int(2) {
        // A₂ unipotent: F splits iff (F − I)² = 0
        if m.is_identity() {
            VerdictTag::Decomposable { cert: Unimodular::identity(3), blocks: vec![one_one(), IMat::identity(2)] }
        } else if let Some((p, k)) = unipotent_split(m)? {
            let block = M2::new(int(1), k, BigInt::zero(), int(1)).to_imat();
            VerdictTag::Decomposable { cert: p, blocks: vec![one_one(), block] }
        } else {
            obstruction()
        }
    } else if split.holds {
        match split_conjugator_3x3(&rf, 0)? {
            SearchResult::Found(p) => VerdictTag::Decomposable {
                cert: rf.r.inverse().compose(&p),
                blocks: vec![one_one(), rf.a2.to_imat()],
            },
            SearchResult::NotFound => {
                return Err(Error::Certificate(format!("congruence holds for {m} but no split was built")))
            }
        }
    } else {
        obstruction()
    };
    if matches!(tag, VerdictTag::Decomposable { .. }) != split.holds {
        return Err(Error::Certificate(format!("splitting criterion and construction disagree on {m}")));
    }
    Ok(Verdict { tag, flags, paper_congruence: Some(paper) })
}

/// Stable decomposability over the circle for fiber dimension 1 to 3.
pub fn classify_stable(a: &Unimodular, budget: StableBudget) -> Result<StableVerdict> {
    let base = classify_decomposable(a, 0)?;
    let flags = base.flags.clone();
    let tag = match &base.tag {
        VerdictTag::Decomposable { cert, blocks } => {
            StableTag::StablyDecomposable(Witness::AlreadyDecomposable { cert: cert.clone(), blocks: blocks.clone() })
        }
        VerdictTag::Indecomposable(Case::CongruenceObstruction { .. }) => {
            StableTag::StablyDecomposable(stable_witness(a, budget)?)
        }
        VerdictTag::Indecomposable(case) => StableTag::StablyIndecomposable(case.clone()),
    };
    let verdict = StableVerdict { tag, flags, base };
    if let Some(cert) = verdict.certificate() {
        if !verify_certificate(a.as_mat(), &cert) {
            return Err(Error::Certificate(format!("stable certificate for {} failed", a.as_mat())));
        }
    }
    Ok(verdict)
}

fn stable_witness(a: &Unimodular, budget: StableBudget) -> Result<Witness> {
    let rf = newman_reduce(a, 1)?;
    if rf.a2.trace() == int(2) {
        // indecomposable with A₂ unipotent means (A − I)² ≠ 0
        return Ok(Witness::PaperAsserted { status: PaperStatus::OutsideSearchRegime, jordan_obstruction: true });
    }
    Ok(match stable_split(&rf, budget)? {
        StableSplitOutcome::SplitCertificate { p, block, route } => Witness::TrivialStabilizer { p, block, route },
        StableSplitOutcome::NoUpperTriangularSplit { ext, budget, blocks_tried } => Witness::PaperAsserted {
            status: PaperStatus::NoUpperTriangularSplit { ext, budget, blocks_tried },
            jordan_obstruction: false,
        },
    })
}
