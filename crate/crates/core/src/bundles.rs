//! Torus bundles over `S¹` and `Tᵐ`, modelled by their monodromy matrices.
//!
//! Fiber products are direct sums, and for fiber dimension ≤ 3 two bundles
//! are isomorphic iff their monodromies are conjugate in `SL(n, Z)`. In
//! dimension 4 and up the matrix model is used as is.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use crate::classify::{classify_decomposable, classify_stable, StableVerdict, Verdict};
use crate::error::{Error, Result};
use crate::exactmat::{charpoly, int, rank, IMat, IVec, Unimodular};
use crate::monodromy3::{ao_conjugator, newman_reduce, unipotent_split, StableBudget};
use crate::oracle::brute_similarity;
use crate::polyint::MonicIntPoly;
use crate::sl2z::{conjugate_gl2, conjugate_sl2, ConjInvariant, ConjugacyResult, M2, SL2};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TorusBundle {
    monodromy: Unimodular,
}

impl TorusBundle {
    pub fn new(monodromy: Unimodular) -> Self {
        TorusBundle { monodromy }
    }

    pub fn from_matrix(m: IMat) -> Result<Self> {
        Ok(TorusBundle { monodromy: Unimodular::new(m)? })
    }

    /// The bundle with monodromy `I_n`.
    pub fn trivial(n: usize) -> Self {
        TorusBundle { monodromy: Unimodular::identity(n) }
    }

    pub fn fiber_dim(&self) -> usize {
        self.monodromy.dim()
    }

    pub fn monodromy(&self) -> &Unimodular {
        &self.monodromy
    }

    pub fn classify(&self, bound: u32) -> Result<Verdict> {
        classify_decomposable(&self.monodromy, bound)
    }

    pub fn classify_stable(&self, budget: StableBudget) -> Result<StableVerdict> {
        classify_stable(&self.monodromy, budget)
    }
}

impl fmt::Display for TorusBundle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.monodromy.as_mat())
    }
}

/// Matrix literal; a non-square or det ≠ 1 literal is a domain error.
impl FromStr for TorusBundle {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        TorusBundle::from_matrix(s.parse()?)
    }
}

/// `core ×_{Tᵐ} (trivial bundle over T^{m−1})`, a bundle over `Tᵐ`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ThickenedBundle {
    base_dim: usize,
    core: TorusBundle,
}

impl ThickenedBundle {
    pub fn base_dim(&self) -> usize {
        self.base_dim
    }

    pub fn core(&self) -> &TorusBundle {
        &self.core
    }

    /// Indecomposability over `Tᵐ` is that of the core over `S¹`.
    pub fn classify(&self, bound: u32) -> Result<Verdict> {
        self.core.classify(bound)
    }

    pub fn classify_stable(&self, budget: StableBudget) -> Result<StableVerdict> {
        self.core.classify_stable(budget)
    }
}

impl fmt::Display for ThickenedBundle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{}", self.core, self.base_dim)
    }
}

/// `literal@m`; a bare literal means `m = 1`.
impl FromStr for ThickenedBundle {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (lit, m) = match s.rsplit_once('@') {
            Some((lit, m)) => {
                let m: usize = m.trim().parse().map_err(|_| Error::Parse(format!("bad base dimension {m:?}")))?;
                (lit, m)
            }
            None => (s, 1),
        };
        thicken(&lit.parse()?, m)
    }
}

pub fn fiber_product(e1: &TorusBundle, e2: &TorusBundle) -> TorusBundle {
    TorusBundle { monodromy: e1.monodromy.direct_sum(&e2.monodromy) }
}

pub fn thicken(e: &TorusBundle, base_dim: usize) -> Result<ThickenedBundle> {
    if base_dim == 0 {
        return Err(Error::Domain("base dimension must be at least 1".into()));
    }
    Ok(ThickenedBundle { base_dim, core: e.clone() })
}

/// Conjugation invariant that separated two monodromies.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum IsoInvariant {
    Charpoly { left: MonicIntPoly, right: MonicIntPoly },
    /// ranks of `M − I`, `(M − I)²`, `M + I`
    RankProfile { left: [usize; 3], right: [usize; 3] },
    /// gcd of the entries of `M − I` and of `M + I`
    Content { left: [BigInt; 2], right: [BigInt; 2] },
    Sl2(ConjInvariant),
    /// the actions on the quotient by the fixed line are not `GL(2, Z)`-conjugate
    QuotientClass { left: M2, right: M2 },
    /// same quotient class, but no centralizer unit matches the rows
    ExtensionClass,
}

impl fmt::Display for IsoInvariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IsoInvariant::Charpoly { left, right } => write!(f, "charpoly {left} vs {right}"),
            IsoInvariant::RankProfile { left, right } => write!(f, "rank profile {left:?} vs {right:?}"),
            IsoInvariant::Content { left, right } => {
                write!(f, "contents ({},{}) vs ({},{})", left[0], left[1], right[0], right[1])
            }
            IsoInvariant::Sl2(inv) => write!(f, "{inv}"),
            IsoInvariant::QuotientClass { left, right } => write!(f, "quotient class {left} vs {right}"),
            IsoInvariant::ExtensionClass => f.write_str("extension class"),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum IsoResult {
    /// `P⁻¹·M₁·P = M₂`, verified.
    Iso(Unimodular),
    NotIso(IsoInvariant),
    /// the bounded search found nothing and no invariant separates them
    Unknown { bound: u32 },
}

impl IsoResult {
    pub fn label(&self) -> &'static str {
        match self {
            IsoResult::Iso(_) => "Iso",
            IsoResult::NotIso(_) => "NotIso",
            IsoResult::Unknown { .. } => "Unknown",
        }
    }
}

fn rank_profile(m: &IMat) -> [usize; 3] {
    let id = IMat::identity(m.rows());
    let minus = m - &id;
    [rank(&minus), rank(&(&minus * &minus)), rank(&(m + &id))]
}

fn contents(m: &IMat) -> [BigInt; 2] {
    let id = IMat::identity(m.rows());
    let gcd = |x: IMat| x.entries().iter().fold(BigInt::zero(), |acc, e| acc.gcd(e));
    [gcd(m - &id), gcd(m + &id)]
}

/// Decides isomorphism for fiber dimension ≤ 3 where the structure allows,
/// and falls back to the bounded lattice search otherwise.
pub fn isomorphic(e1: &TorusBundle, e2: &TorusBundle, bound: u32) -> Result<IsoResult> {
    let (a, b) = (e1.monodromy.as_mat(), e2.monodromy.as_mat());
    if a.rows() != b.rows() {
        return Err(Error::Dimension(format!("fiber dimensions {} and {}", a.rows(), b.rows())));
    }
    let n = a.rows();
    if a == b {
        return Ok(IsoResult::Iso(Unimodular::identity(n)));
    }
    let result = match n {
        1 => unreachable!("SL(1, Z) is trivial"),
        2 => match conjugate_sl2(&SL2::from_imat(a)?, &SL2::from_imat(b)?) {
            ConjugacyResult::Conjugate(p) => IsoResult::Iso(Unimodular::new(p.to_imat())?),
            ConjugacyResult::NotConjugate(inv) => IsoResult::NotIso(IsoInvariant::Sl2(inv)),
        },
        _ => higher(a, b, bound)?,
    };
    if let IsoResult::Iso(p) = &result {
        if &p.conjugate(a) != b {
            return Err(Error::Certificate(format!("isomorphism {p} does not conjugate {a} to {b}")));
        }
    }
    Ok(result)
}

fn higher(a: &IMat, b: &IMat, bound: u32) -> Result<IsoResult> {
    let (fa, fb) = (charpoly(a)?, charpoly(b)?);
    if fa != fb {
        return Ok(IsoResult::NotIso(IsoInvariant::Charpoly { left: fa, right: fb }));
    }
    let (ra, rb) = (rank_profile(a), rank_profile(b));
    if ra != rb {
        return Ok(IsoResult::NotIso(IsoInvariant::RankProfile { left: ra, right: rb }));
    }
    let (ca, cb) = (contents(a), contents(b));
    if ca != cb {
        return Ok(IsoResult::NotIso(IsoInvariant::Content { left: ca, right: cb }));
    }
    if a.rows() == 3 && fa.eval_i64(1).is_zero() {
        if let Some(decided) = fixed_line(a, b)? {
            return Ok(decided);
        }
    }
    let report = brute_similarity(a, b, bound)?;
    Ok(match report.found() {
        Some(p) => IsoResult::Iso(p.clone()),
        None => IsoResult::Unknown { bound },
    })
}

/// Eigenvalue-1 route in dimension 3: `None` when the structure does not
/// decide (a single Jordan block of size 3).
fn fixed_line(a: &IMat, b: &IMat) -> Result<Option<IsoResult>> {
    let (ua, ub) = (Unimodular::new(a.clone())?, Unimodular::new(b.clone())?);
    let (fa, fb) = (newman_reduce(&ua, 1)?, newman_reduce(&ub, 1)?);
    if fa.a2.trace() == int(2) {
        // unipotent; identical matrices were handled by the caller
        let (Some((pa, ka)), Some((pb, kb))) = (unipotent_split(a)?, unipotent_split(b)?) else {
            return Ok(None);
        };
        // equal contents of M − I were already checked
        debug_assert_eq!(ka, kb);
        return Ok(Some(IsoResult::Iso(pa.compose(&pb.inverse()))));
    }
    let (sa, sb) = (fa.a2_sl2()?, fb.a2_sl2()?);
    let Some(q) = conjugate_gl2(&sa, &sb) else {
        return Ok(Some(IsoResult::NotIso(IsoInvariant::QuotientClass { left: fa.a2, right: fb.a2 })));
    };
    // P₁ = diag(det Q, Q) brings F_A to [[1, u·aQ], [0, B₂]]
    let u = q.det();
    let mut p1 = IMat::zeros(3, 3);
    p1.set(0, 0, u.clone());
    p1.set_block(1, 1, &q.to_imat());
    let p1 = Unimodular::new(p1)?;
    let aq = q.row_mul(&(fa.a.0[0].clone(), fa.a.0[1].clone()));
    let moved = IVec(vec![&u * aq.0, &u * aq.1]);
    let Some(p0) = ao_conjugator(&moved, &fb.a, &sb)? else {
        return Ok(Some(IsoResult::NotIso(IsoInvariant::ExtensionClass)));
    };
    let total = fa.r.inverse().compose(&p1).compose(&p0).compose(&fb.r);
    Ok(Some(IsoResult::Iso(total)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(s: &str) -> TorusBundle {
        s.parse().unwrap()
    }

    #[test]
    fn fiber_product_examples() {
        assert_eq!(fiber_product(&e("1"), &e("1")), e("1,0;0,1"));
        assert_eq!(fiber_product(&e("1,1;0,1"), &e("1")), e("1,1,0;0,1,0;0,0,1"));
        let v = fiber_product(&TorusBundle::trivial(1), &e("1,0,1;0,2,1;0,1,1"));
        assert_eq!(v.monodromy().as_mat(), &IMat::identity(1).direct_sum(&"1,0,1;0,2,1;0,1,1".parse().unwrap()));
    }

    #[test]
    fn literals() {
        assert!("1,1;0,2".parse::<TorusBundle>().is_err());
        let t: ThickenedBundle = "1,1;0,1@3".parse().unwrap();
        assert_eq!((t.base_dim(), t.to_string()), (3, "1,1;0,1@3".to_string()));
        assert_eq!("1,0;0,1".parse::<ThickenedBundle>().unwrap().base_dim(), 1);
        assert!("1@0".parse::<ThickenedBundle>().is_err());
        assert!(matches!("1@x".parse::<ThickenedBundle>(), Err(Error::Parse(_))));
    }

    #[test]
    fn isomorphic_examples() {
        let x = e("1,0,1;0,2,1;0,1,1");
        assert_eq!(isomorphic(&x, &x, 16).unwrap(), IsoResult::Iso(Unimodular::identity(3)));
        assert!(matches!(isomorphic(&e("1,1;0,1"), &e("1,0;0,1"), 16).unwrap(), IsoResult::NotIso(_)));
        assert!(matches!(isomorphic(&e("1,1;0,1"), &e("1,0;1,1"), 16).unwrap(), IsoResult::NotIso(_)));
        let c = e("0,0,1;1,0,1;0,1,0");
        assert!(matches!(
            isomorphic(&c, &e("1,1,0;0,1,1;0,0,1"), 16).unwrap(),
            IsoResult::NotIso(IsoInvariant::Charpoly { .. })
        ));
        assert!(isomorphic(&e("1"), &e("1,0;0,1"), 16).is_err());
    }

    #[test]
    fn worked_instance_is_a_sum() {
        let split = e("1,0,0;0,2,1;0,1,1");
        assert!(matches!(isomorphic(&e("1,0,1;0,2,1;0,1,1"), &split, 16).unwrap(), IsoResult::Iso(_)));
        assert!(matches!(isomorphic(&e("1,1,0;0,3,1;0,2,1"), &e("1,0,0;0,3,1;0,2,1"), 16).unwrap(), IsoResult::NotIso(_)));
    }

    #[test]
    fn unipotent_twists() {
        assert!(matches!(isomorphic(&e("1,2,0;0,1,0;0,0,1"), &e("1,0,0;0,1,0;2,0,1"), 16).unwrap(), IsoResult::Iso(_)));
        assert!(matches!(
            isomorphic(&e("1,2,0;0,1,0;0,0,1"), &e("1,1,0;0,1,0;0,0,1"), 16).unwrap(),
            IsoResult::NotIso(IsoInvariant::Content { .. })
        ));
    }

    #[test]
    fn thickening_keeps_verdicts() {
        let t = thicken(&e("1,1;0,1"), 2).unwrap();
        assert!(!t.classify(16).unwrap().is_decomposable());
        let t = thicken(&e("1,1,0;0,3,1;0,2,1"), 5).unwrap();
        assert!(!t.classify(16).unwrap().is_decomposable());
        assert_eq!(t.classify_stable(StableBudget::default()).unwrap().label(), "StablyDecomposable");
    }
}
