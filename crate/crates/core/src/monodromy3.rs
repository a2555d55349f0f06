//! Monodromies in `SL(3, Z)` with an eigenvalue `±1`.
//!
//! A primitive eigenvector completed to a basis puts `A` into the shape
//! `F = [[λ, a], [0, A₂]]`. For `λ = 1` and `Tr A₂ ≠ 2` every conjugator
//! between two such shapes with the same `A₂` is block upper triangular,
//! `P = [[u, x], [0, R₂]]` with `R₂` in the centralizer of `A₂`,
//! `u = det R₂` and
//!
//! ```text
//! x·(A₂ − I) = a·R₂ − u·b.
//! ```
//!
//! So `[[1, a], [0, A₂]] ~ [[1, b], [0, A₂]]` iff `a·R₂ − σ·b ∈ Z²(A₂ − I)`
//! for some centralizer unit `R₂` and sign `σ`; membership in the image only
//! depends on `R₂` modulo `det(A₂ − I) = 2 − Tr A₂`. In particular the shape
//! splits iff `a ∈ Z²(A₂ − I)`, which is the congruence
//! `a·(A₂ − (Tr A₂ − 1)I) ≡ 0 mod (Tr A₂ − 2)`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactmat::{complete_primitive, det, int, kernel_basis, primitive_part, IMat, IVec, Unimodular};
use crate::sl2z::{canonical_form, units_mod, Canonical, M2, SL2};

/// `R·A·R⁻¹ = [[λ, a], [0, A₂]]`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ReducedForm {
    pub lambda: i8,
    pub a: IVec,
    pub a2: M2,
    pub r: Unimodular,
}

impl ReducedForm {
    /// Builds a form with `R = I`; `lambda = 1` requires `det A₂ = 1`.
    pub fn from_parts(lambda: i8, a: IVec, a2: M2) -> Result<Self> {
        if a.len() != 2 {
            return Err(Error::Dimension(format!("row a has length {}", a.len())));
        }
        if a2.det() != int(lambda as i64) {
            return Err(Error::Domain(format!("det A2 = {} does not match lambda {lambda}", a2.det())));
        }
        Ok(ReducedForm { lambda, a, a2, r: Unimodular::identity(3) })
    }

    /// `[[λ, a], [0, A₂]]`.
    pub fn matrix(&self) -> IMat {
        shape(self.lambda, &self.a, &self.a2)
    }

    /// The matrix the form was reduced from, `R⁻¹ F R`.
    pub fn original(&self) -> IMat {
        let f = self.matrix();
        &(&self.r.inverse().into_inner() * &f) * self.r.as_mat()
    }

    pub fn a2_sl2(&self) -> Result<SL2> {
        SL2::new(self.a2.clone())
    }
}

pub fn shape(lambda: i8, a: &IVec, a2: &M2) -> IMat {
    let mut m = IMat::zeros(3, 3);
    m.set(0, 0, int(lambda as i64));
    m.set(0, 1, a.0[0].clone());
    m.set(0, 2, a.0[1].clone());
    m.set_block(1, 1, &a2.to_imat());
    m
}

fn pair(v: &IVec) -> (BigInt, BigInt) {
    (v.0[0].clone(), v.0[1].clone())
}

fn vec2(p: (BigInt, BigInt)) -> IVec {
    IVec(vec![p.0, p.1])
}

/// Newman form for the eigenvalue `λ`: `R` sends the first vector of the
/// Hermite basis of `ker(A − λI)` to `e₁`.
pub fn newman_reduce(a: &Unimodular, lambda: i8) -> Result<ReducedForm> {
    if a.dim() != 3 {
        return Err(Error::Dimension(format!("expected 3x3, got {}x{}", a.dim(), a.dim())));
    }
    if lambda != 1 && lambda != -1 {
        return Err(Error::Domain(format!("lambda must be 1 or -1, got {lambda}")));
    }
    let shifted = a.as_mat() - &IMat::identity(3).scale(&int(lambda as i64));
    let kernel = kernel_basis(&shifted);
    let v = kernel
        .first()
        .ok_or_else(|| Error::Domain(format!("{lambda} is not an eigenvalue")))?;
    let r = complete_primitive(&primitive_part(v)?)?;
    let f = &(r.as_mat() * a.as_mat()) * &r.inverse().into_inner();
    if *f.get(0, 0) != int(lambda as i64) || !f.get(1, 0).is_zero() || !f.get(2, 0).is_zero() {
        return Err(Error::Certificate(format!("Newman reduction produced {f}")));
    }
    let a2 = M2::from_imat(&f.block(1, 1, 2, 2))?;
    let row = IVec(vec![f.get(0, 1).clone(), f.get(0, 2).clone()]);
    Ok(ReducedForm { lambda, a: row, a2, r })
}

/// Quantities of the Appelgate–Onishi lemma for `A₂`, with `τ = Tr A₂`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AOContext {
    pub a2: SL2,
    pub tau: BigInt,
    /// `τ − 2 = −det(A₂ − I)`
    pub m: BigInt,
    /// `A₂ − (τ − 1)I = −adj(A₂ − I)`
    pub a0: M2,
    /// `t² − τt + 1` has no integer root, i.e. `τ ∉ {2, −2}`.
    pub no_integer_roots: bool,
}

impl AOContext {
    pub fn new(a2: &SL2) -> Self {
        let tau = a2.trace();
        let m = &tau - int(2);
        let a0 = a2.m().sub(&M2::scalar(&(&tau - int(1))));
        let no_integer_roots = tau.abs() != int(2);
        AOContext { a2: a2.clone(), tau, m, a0, no_integer_roots }
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct CongruenceReport {
    pub holds: bool,
    #[serde(serialize_with = "crate::report::ser_ivec")]
    pub values: IVec,
    #[serde(serialize_with = "crate::report::ser_int")]
    pub modulus: BigInt,
    pub unproven_regime: bool,
}

fn congruent_zero(values: &IVec, modulus: &BigInt) -> bool {
    if modulus.is_zero() {
        values.is_zero()
    } else {
        values.0.iter().all(|v| v.mod_floor(&modulus.abs()).is_zero())
    }
}

/// The theorem's stated criterion: `a·(A₂ + I)` modulo `Tr A₂ + 2`.
pub fn ao_congruence(a: &IVec, a2: &SL2) -> CongruenceReport {
    let shifted = a2.m().add(&M2::identity());
    let values = vec2(shifted.row_mul(&pair(a)));
    let modulus = a2.trace() + int(2);
    CongruenceReport {
        holds: congruent_zero(&values, &modulus),
        values,
        modulus,
        unproven_regime: !AOContext::new(a2).no_integer_roots,
    }
}

/// The splitting criterion `a·A₀ ≡ 0 mod (Tr A₂ − 2)`, equivalent to
/// `a ∈ Z²(A₂ − I)`. Modulus 0 means equality, which for `Tr A₂ = 2`
/// is `a·(A₂ − I) = 0`, i.e. `(F − I)² = 0`.
pub fn split_congruence(a: &IVec, a2: &SL2) -> CongruenceReport {
    let ctx = AOContext::new(a2);
    let values = vec2(ctx.a0.row_mul(&pair(a)));
    CongruenceReport {
        holds: congruent_zero(&values, &ctx.m),
        values,
        modulus: ctx.m,
        unproven_regime: !ctx.no_integer_roots,
    }
}

fn require_invertible_shift(a2: &SL2) -> Result<()> {
    if a2.trace() == int(2) {
        return Err(Error::Regime(format!(
            "UnprovenRegime: A2 = {a2} has eigenvalue 1, so A2 - I is singular"
        )));
    }
    Ok(())
}

/// `v ∈ Z²(A₂ − I)` for a row vector `v`.
fn in_image(v: &(BigInt, BigInt), a2: &M2) -> bool {
    let shift = a2.sub(&M2::identity());
    let d = shift.det();
    let w = shift.adjugate().row_mul(v);
    w.0.mod_floor(&d.abs()).is_zero() && w.1.mod_floor(&d.abs()).is_zero()
}

/// Solves `x·(A₂ − I) = v` exactly; `None` when `x` is not integral.
fn solve_shift(v: &(BigInt, BigInt), a2: &M2) -> Option<(BigInt, BigInt)> {
    let shift = a2.sub(&M2::identity());
    let d = shift.det();
    let w = shift.adjugate().row_mul(v);
    let (q0, r0) = w.0.div_mod_floor(&d);
    let (q1, r1) = w.1.div_mod_floor(&d);
    (r0.is_zero() && r1.is_zero()).then_some((q0, q1))
}

/// Decides `[[1, a], [0, A₂]] ~ [[1, b], [0, A₂]]` in `SL(3, Z)`.
pub fn ao_similar(a: &IVec, b: &IVec, a2: &SL2) -> Result<bool> {
    Ok(ao_conjugator(a, b, a2)?.is_some())
}

/// `P ∈ SL(3, Z)` with `P⁻¹·[[1, a], [0, A₂]]·P = [[1, b], [0, A₂]]`.
pub fn ao_conjugator(a: &IVec, b: &IVec, a2: &SL2) -> Result<Option<Unimodular>> {
    require_invertible_shift(a2)?;
    if a.len() != 2 || b.len() != 2 {
        return Err(Error::Dimension("rows a and b must have length 2".into()));
    }
    let (av, bv) = (pair(a), pair(b));
    let m2 = a2.m();
    let units: Vec<M2> = if m2.is_scalar() {
        // A₂ = −I: the centralizer is all of GL(2, Z), the image is 2Z², and
        // these six matrices cover GL(2, Z/2)
        [(1, 0, 0, 1), (0, 1, 1, 0), (1, 1, 0, 1), (1, 0, 1, 1), (0, 1, 1, 1), (1, 1, 1, 0)]
            .into_iter()
            .map(|(p, q, r, s)| M2::from_i64(p, q, r, s))
            .collect()
    } else {
        let residues = units_mod(a2, &(a2.trace() - int(2)))?;
        residues.residues.values().map(|u| u.matrix()).collect()
    };
    for r2 in &units {
        let ar = r2.row_mul(&av);
        for sigma in [1i64, -1] {
            let s = int(sigma);
            let target = (&ar.0 - &s * &bv.0, &ar.1 - &s * &bv.1);
            if !in_image(&target, m2) {
                continue;
            }
            let (r2, u, target) = if r2.det() == s {
                (r2.clone(), s, target)
            } else {
                (r2.neg(), -&s, (-target.0, -target.1))
            };
            let x = solve_shift(&target, m2).expect("membership was checked");
            let mut p = IMat::zeros(3, 3);
            p.set(0, 0, u);
            p.set(0, 1, x.0);
            p.set(0, 2, x.1);
            p.set_block(1, 1, &r2.to_imat());
            let p = Unimodular::new(p)?;
            let lhs = p.conjugate(&shape(1, a, m2));
            if lhs != shape(1, b, m2) {
                return Err(Error::Certificate(format!("AO conjugator {p} does not conjugate")));
            }
            return Ok(Some(p));
        }
    }
    Ok(None)
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum SearchResult {
    Found(Unimodular),
    NotFound,
}

/// `P` with `P⁻¹·F·P = (1) ⊕ A₂`, for the shape `F` of `rf`.
///
/// Since the image `Z²(A₂ − I)` is stable under every centralizer unit,
/// `R₂ = I` is the only candidate that needs trying, and `NotFound` is
/// exact rather than bounded. `bound` is accepted for interface symmetry.
pub fn split_conjugator_3x3(rf: &ReducedForm, _bound: u32) -> Result<SearchResult> {
    if rf.lambda != 1 {
        return Err(Error::Domain("split search needs lambda = 1".into()));
    }
    let a2 = rf.a2_sl2()?;
    require_invertible_shift(&a2)?;
    let Some(x) = solve_shift(&pair(&rf.a), &rf.a2) else {
        return Ok(SearchResult::NotFound);
    };
    let mut p = IMat::identity(3);
    p.set(0, 1, x.0);
    p.set(0, 2, x.1);
    let p = Unimodular::new(p)?;
    let split = p.conjugate(&rf.matrix());
    if split != IMat::identity(1).direct_sum(&rf.a2.to_imat()) {
        return Err(Error::Certificate(format!("split conjugator {p} gave {split}")));
    }
    Ok(SearchResult::Found(p))
}

/// For `A` with `A − I = N ≠ 0`, `N² = 0` (rank one): `P` with
/// `P⁻¹AP = (1) ⊕ [[1, k], [0, 1]]`, `k` the content of `N`.
pub fn unipotent_split(a: &IMat) -> Result<Option<(Unimodular, BigInt)>> {
    if a.rows() != 3 || a.cols() != 3 {
        return Err(Error::Dimension("unipotent split needs a 3x3 matrix".into()));
    }
    let n = a - &IMat::identity(3);
    if n.is_zero() || !(&n * &n).is_zero() {
        return Ok(None);
    }
    let col = (0..3).map(|j| n.col(j)).find(|c| !c.is_zero()).expect("N is nonzero");
    let c = primitive_part(&col)?;
    let i0 = (0..3).find(|&i| !c.0[i].is_zero()).expect("c is nonzero");
    // N = c·wᵀ
    let w = IVec((0..3).map(|j| n.get(i0, j) / &c.0[i0]).collect());
    let k = w.content();
    let r = primitive_part(&w)?;
    // w' with r·w' = 1
    let w1 = complete_primitive(&r)?.as_mat().row(0);
    // v with {v, c} a basis of r⊥
    let perp = kernel_basis(&r.as_row());
    let basis = IMat::from_columns(&perp)?;
    let coords = solve_in_basis(&basis, &c)?;
    let u = complete_primitive(&coords)?.inverse().into_inner();
    let mut v = basis.mul_vec(&u.col(1));
    let mut p = IMat::from_columns(&[v.clone(), c.clone(), w1.clone()])?;
    if det(&p)?.is_negative() {
        v = v.scale(&int(-1));
        p = IMat::from_columns(&[v, c, w1])?;
    }
    let p = Unimodular::new(p)?;
    let mut target = IMat::identity(3);
    target.set(1, 2, k.clone());
    if p.conjugate(a) != target {
        return Err(Error::Certificate(format!("unipotent split {p} failed")));
    }
    Ok(Some((p, k)))
}

/// Coordinates of `v` in the columns of a full-column-rank `basis`.
fn solve_in_basis(basis: &IMat, v: &IVec) -> Result<IVec> {
    let k = basis.cols();
    let rows = basis.rows();
    // pick k rows with a nonsingular minor
    let mut chosen = Vec::new();
    for i in 0..rows {
        chosen.push(i);
        let sub = IMat::from_row_vecs(&chosen.iter().map(|&r| basis.row(r)).collect::<Vec<_>>())?;
        if crate::exactmat::rank(&sub) < chosen.len() {
            chosen.pop();
        }
        if chosen.len() == k {
            break;
        }
    }
    if chosen.len() < k {
        return Err(Error::Singular);
    }
    let sub = IMat::from_row_vecs(&chosen.iter().map(|&r| basis.row(r)).collect::<Vec<_>>())?;
    let (adj, d) = crate::exactmat::rational_inverse(&sub)?;
    let rhs = IVec(chosen.iter().map(|&r| v.0[r].clone()).collect());
    let num = adj.mul_vec(&rhs);
    let coords = IVec(
        num.0
            .iter()
            .map(|x| {
                let (q, r) = x.div_rem(&d);
                if r.is_zero() {
                    Ok(q)
                } else {
                    Err(Error::Domain("vector is not in the lattice".into()))
                }
            })
            .collect::<Result<Vec<_>>>()?,
    );
    if basis.mul_vec(&coords) != *v {
        return Err(Error::Domain("vector is not in the span".into()));
    }
    Ok(coords)
}

/// 2x2 rational matrix.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RMat2(pub [[BigRational; 2]; 2]);

impl RMat2 {
    pub fn zero() -> Self {
        let z = || BigRational::zero();
        RMat2([[z(), z()], [z(), z()]])
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().flatten().all(|x| x.is_integer())
    }

    pub fn to_integer(&self) -> Option<M2> {
        self.is_integral().then(|| {
            let e = |i: usize, j: usize| self.0[i][j].to_integer();
            M2::new(e(0, 0), e(0, 1), e(1, 0), e(1, 1))
        })
    }

    pub fn from_i64_ratios(entries: [[(i64, i64); 2]; 2]) -> Self {
        let r = |(n, d): (i64, i64)| BigRational::new(int(n), int(d));
        RMat2([[r(entries[0][0]), r(entries[0][1])], [r(entries[1][0]), r(entries[1][1])]])
    }
}

impl fmt::Display for RMat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = &self.0;
        write!(f, "{},{};{},{}", m[0][0], m[0][1], m[1][0], m[1][1])
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ExtReport {
    pub integral: bool,
    /// `X = D·(A₂ − I)⁻¹` with `D = [[0, 0], [a₁, a₂]]`.
    pub x: RMat2,
}

pub fn ext_split_test(a: &IVec, a2: &SL2) -> Result<ExtReport> {
    require_invertible_shift(a2)?;
    let shift = a2.m().sub(&M2::identity());
    let d = shift.det();
    let row = shift.adjugate().row_mul(&pair(a));
    let mut x = RMat2::zero();
    x.0[1][0] = BigRational::new(row.0, d.clone());
    x.0[1][1] = BigRational::new(row.1, d);
    Ok(ExtReport { integral: x.is_integral(), x })
}

/// Budget for the general stabilized search.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub struct StableBudget {
    /// coefficient box for lattice combinations
    pub coefficient_bound: u32,
    /// entry box for candidate blocks `C`
    pub block_entry_bound: u32,
}

impl Default for StableBudget {
    fn default() -> Self {
        StableBudget { coefficient_bound: 20, block_entry_bound: 30 }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum SplitRoute {
    /// `P = [[I₂, X], [0, I₂]]`
    UpperTriangular,
    /// found by the lattice search
    LatticeSearch,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum StableSplitOutcome {
    /// `P⁻¹·((1) ⊕ A)·P = I₂ ⊕ block`, where `A` is the matrix `rf` was
    /// reduced from.
    SplitCertificate { p: Unimodular, block: SL2, route: SplitRoute },
    NoUpperTriangularSplit { ext: ExtReport, budget: StableBudget, blocks_tried: usize },
}

/// Stabilized splitting of `V = (1) ⊕ A`.
pub fn stable_split(rf: &ReducedForm, budget: StableBudget) -> Result<StableSplitOutcome> {
    if rf.lambda != 1 {
        return Err(Error::Domain("stable split needs lambda = 1".into()));
    }
    let a2 = rf.a2_sl2()?;
    let ext = ext_split_test(&rf.a, &a2)?;
    let v = IMat::identity(1).direct_sum(&rf.matrix());
    // lifts a certificate for (1) ⊕ F to (1) ⊕ A
    let lift = IMat::identity(1).direct_sum(&rf.r.inverse().into_inner());
    let finish = |p: IMat, block: SL2, route| -> Result<StableSplitOutcome> {
        let p = Unimodular::new(p)?;
        let expected = IMat::identity(2).direct_sum(&block.to_imat());
        if p.conjugate(&v) != expected {
            return Err(Error::Certificate(format!("stabilized conjugator {p} failed")));
        }
        let lifted = Unimodular::new(&lift * p.as_mat())?;
        let va = IMat::identity(1).direct_sum(&rf.original());
        if lifted.conjugate(&va) != expected {
            return Err(Error::Certificate(format!("lifted stabilized conjugator {lifted} failed")));
        }
        Ok(StableSplitOutcome::SplitCertificate { p: lifted, block, route })
    };
    if let Some(x) = ext.x.to_integer() {
        let mut p = IMat::identity(4);
        p.set_block(0, 2, &x.to_imat());
        return finish(p, a2, SplitRoute::UpperTriangular);
    }
    let candidates = candidate_blocks(&a2, budget.block_entry_bound);
    let p1 = kernel_basis(&(&v - &IMat::identity(4)));
    debug_assert_eq!(p1.len(), 2);
    for c in &candidates {
        if let Some(p) = lattice_split(&v, &p1, c, budget.coefficient_bound) {
            return finish(p, c.clone(), SplitRoute::LatticeSearch);
        }
    }
    Ok(StableSplitOutcome::NoUpperTriangularSplit { ext, budget, blocks_tried: candidates.len() })
}

/// `A₂` first, then every `C` with entries in the box, the same trace, and
/// `GL(2, Z)`-conjugate to `A₂`, in lexicographic order.
fn candidate_blocks(a2: &SL2, entry_bound: u32) -> Vec<SL2> {
    let target = canonical_form(a2).matrix;
    let j = M2::from_i64(1, 0, 0, -1);
    let twisted = canonical_form(&SL2::new(j.mul(a2.m()).mul(&j)).expect("det 1")).matrix;
    let t = a2.trace();
    let e = entry_bound as i64;
    let mut out = vec![a2.clone()];
    for a in -e..=e {
        let d = &t - a;
        if d.abs() > int(e) {
            continue;
        }
        let bc: BigInt = int(a) * &d - 1;
        for b in -e..=e {
            let c = if b == 0 {
                if !bc.is_zero() {
                    continue;
                }
                // bc = 0 with b = 0: every c works; parabolic only
                (-e..=e).map(int).collect::<Vec<_>>()
            } else {
                let (q, r) = bc.div_rem(&int(b));
                if !r.is_zero() || q.abs() > int(e) {
                    continue;
                }
                vec![q]
            };
            for c in c {
                let m = M2::new(int(a), int(b), c, d.clone());
                let Ok(m) = SL2::new(m) else { continue };
                if m == *a2 {
                    continue;
                }
                let canon: Canonical = canonical_form(&m);
                if canon.matrix == target || canon.matrix == twisted {
                    out.push(m);
                }
            }
        }
    }
    out
}

/// Searches `P = [P₁ | Y]` with `V·Y = Y·C` and `det P = ±1`.
fn lattice_split(v: &IMat, p1: &[IVec], c: &SL2, bound: u32) -> Option<IMat> {
    let cm = c.to_imat();
    // vec(Y) has Y[i][j] at 2i + j; rows of the system are entries of VY − YC.
    let mut sys = IMat::zeros(8, 8);
    for i in 0..4 {
        for j in 0..2 {
            let row = 2 * i + j;
            for k in 0..4 {
                let x = sys.get(row, 2 * k + j) + v.get(i, k);
                sys.set(row, 2 * k + j, x);
            }
            for k in 0..2 {
                let x = sys.get(row, 2 * i + k) - cm.get(k, j);
                sys.set(row, 2 * i + k, x);
            }
        }
    }
    let ys: Vec<IMat> = kernel_basis(&sys)
        .into_iter()
        .map(|y| IMat::new(4, 2, y.0).expect("eight entries"))
        .collect();
    if ys.is_empty() {
        return None;
    }
    let cols = |y0: &IVec, y1: &IVec| {
        IMat::from_columns(&[p1[0].clone(), p1[1].clone(), y0.clone(), y1.clone()]).expect("length 4")
    };
    let r = ys.len();
    let mut g = vec![vec![BigInt::zero(); r]; r];
    for (i, yi) in ys.iter().enumerate() {
        for (jj, yj) in ys.iter().enumerate() {
            g[i][jj] = det(&cols(&yi.col(0), &yj.col(1))).expect("square");
        }
    }
    let small: Option<Vec<Vec<i128>>> =
        g.iter().map(|row| row.iter().map(|x| x.to_i128().filter(|v| v.abs() < 1 << 40)).collect()).collect();
    let b = bound as i64;
    let hit = |coef: &[i64]| -> bool {
        match &small {
            Some(g) => {
                let mut s: i128 = 0;
                for i in 0..r {
                    for jj in 0..r {
                        s += g[i][jj] * coef[i] as i128 * coef[jj] as i128;
                    }
                }
                s == 1 || s == -1
            }
            None => {
                let s: BigInt = (0..r)
                    .flat_map(|i| (0..r).map(move |jj| (i, jj)))
                    .map(|(i, jj)| &g[i][jj] * coef[i] * coef[jj])
                    .sum();
                s.abs().is_one()
            }
        }
    };
    let mut coef = vec![-b; r];
    loop {
        if hit(&coef) {
            let mut y = IMat::zeros(4, 2);
            for (k, yk) in ys.iter().enumerate() {
                y = &y + &yk.scale(&int(coef[k]));
            }
            let mut p = cols(&y.col(0), &y.col(1));
            if det(&p).expect("square").is_negative() {
                p.negate_col(0);
            }
            return Some(p);
        }
        let mut k = 0;
        loop {
            if k == r {
                return None;
            }
            if coef[k] < b {
                coef[k] += 1;
                break;
            }
            coef[k] = -b;
            k += 1;
        }
    }
}
