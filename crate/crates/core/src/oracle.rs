//! Desk-scale ground truth by exhaustive search.
//!
//! `brute_similarity` never enumerates matrix entries: it computes a basis
//! of the intertwiner lattice `{X : AX = XB}` and walks integer combinations
//! in order of increasing `L¹` norm, stopping at the first `det X = 1`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exactmat::{charpoly, det, hnf, int, kernel_basis, rank, IMat, IVec, Unimodular};
use crate::polyint::MonicIntPoly;
use crate::sl2z::{canonical_form, M2, SL2};

/// Per-call cap on determinant evaluations.
pub const DEFAULT_EVALUATION_BUDGET: u64 = 2_000_000;

/// Per-target cap in the stabilizer probe, which tries many targets.
pub const PROBE_EVALUATION_BUDGET: u64 = 100_000;

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum SimilarityOutcome {
    /// `A·P = P·B`, `det P = 1`.
    Found(Unimodular),
    NoneWithinBound,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SimilaritySearchReport {
    pub outcome: SimilarityOutcome,
    pub bound: u32,
    pub lattice_rank: usize,
    pub evaluations: u64,
    /// every combination in the coefficient box was tried
    pub exhaustive: bool,
    /// block-diagonal target that matched, for block searches
    pub target: Option<IMat>,
}

impl SimilaritySearchReport {
    pub fn found(&self) -> Option<&Unimodular> {
        match &self.outcome {
            SimilarityOutcome::Found(p) => Some(p),
            SimilarityOutcome::NoneWithinBound => None,
        }
    }

    fn none(bound: u32, lattice_rank: usize, evaluations: u64, exhaustive: bool) -> Self {
        SimilaritySearchReport {
            outcome: SimilarityOutcome::NoneWithinBound,
            bound,
            lattice_rank,
            evaluations,
            exhaustive,
            target: None,
        }
    }
}

/// Basis of `{X : AX = XB}`, each element an `n×n` matrix.
pub fn intertwiner_basis(a: &IMat, b: &IMat) -> Result<Vec<IMat>> {
    if !a.is_square() || a.rows() != b.rows() || !b.is_square() {
        return Err(Error::Domain(format!(
            "similarity needs equal square shapes, got {}x{} and {}x{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    let n = a.rows();
    let mut sys = IMat::zeros(n * n, n * n);
    for i in 0..n {
        for j in 0..n {
            let row = i * n + j;
            for k in 0..n {
                let x = sys.get(row, k * n + j) + a.get(i, k);
                sys.set(row, k * n + j, x);
                let y = sys.get(row, i * n + k) - b.get(k, j);
                sys.set(row, i * n + k, y);
            }
        }
    }
    Ok(kernel_basis(&sys)
        .into_iter()
        .map(|v| IMat::new(n, n, v.0).expect("n² entries"))
        .collect())
}

pub fn brute_similarity(a: &IMat, b: &IMat, bound: u32) -> Result<SimilaritySearchReport> {
    brute_similarity_budgeted(a, b, bound, DEFAULT_EVALUATION_BUDGET)
}

pub fn brute_similarity_budgeted(a: &IMat, b: &IMat, bound: u32, budget: u64) -> Result<SimilaritySearchReport> {
    let basis = intertwiner_basis(a, b)?;
    let n = a.rows();
    let r = basis.len();
    if r == 0 {
        return Ok(SimilaritySearchReport::none(bound, 0, 0, true));
    }
    let small: Option<Vec<Vec<i64>>> = basis
        .iter()
        .map(|m| m.entries().iter().map(|x| x.to_i64().filter(|v| v.abs() < 1 << 20)).collect())
        .collect();
    let mut evaluations = 0u64;
    let mut found: Option<Vec<i64>> = None;
    let exhaustive = for_each_by_l1(r, bound as i64, |coef| {
        if evaluations >= budget {
            return Walk::Abort;
        }
        evaluations += 1;
        let unit = match &small {
            Some(basis) => det_small(basis, coef, n).map(|d| d == 1),
            None => None,
        }
        .unwrap_or_else(|| det(&combine(&basis, coef, n)).expect("square").is_one());
        if unit {
            found = Some(coef.to_vec());
            Walk::Stop
        } else {
            Walk::Continue
        }
    });
    let Some(coef) = found else {
        return Ok(SimilaritySearchReport::none(bound, r, evaluations, exhaustive));
    };
    let p = Unimodular::new(combine(&basis, &coef, n))?;
    if &(a * p.as_mat()) != &(p.as_mat() * b) {
        return Err(Error::Certificate(format!("similarity witness {p} does not intertwine")));
    }
    Ok(SimilaritySearchReport {
        outcome: SimilarityOutcome::Found(p),
        bound,
        lattice_rank: r,
        evaluations,
        exhaustive: false,
        target: None,
    })
}

fn combine(basis: &[IMat], coef: &[i64], n: usize) -> IMat {
    let mut x = IMat::zeros(n, n);
    for (m, &c) in basis.iter().zip(coef) {
        if c != 0 {
            x = &x + &m.scale(&int(c));
        }
    }
    x
}

/// Determinant of `Σ cᵢ Bᵢ` in checked `i128`; `None` on overflow.
fn det_small(basis: &[Vec<i64>], coef: &[i64], n: usize) -> Option<i128> {
    let mut m = vec![0i128; n * n];
    for (b, &c) in basis.iter().zip(coef) {
        if c == 0 {
            continue;
        }
        for (slot, &e) in m.iter_mut().zip(b) {
            *slot = slot.checked_add((e as i128).checked_mul(c as i128)?)?;
        }
    }
    det_i128(&mut m, n)
}

/// Checked Bareiss elimination in place.
pub(crate) fn det_i128(m: &mut [i128], n: usize) -> Option<i128> {
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n.saturating_sub(1) {
        if m[k * n + k] == 0 {
            let Some(i) = (k + 1..n).find(|&i| m[i * n + k] != 0) else {
                return Some(0);
            };
            for j in 0..n {
                m.swap(k * n + j, i * n + j);
            }
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let x = m[i * n + j].checked_mul(m[k * n + k])?;
                let y = m[i * n + k].checked_mul(m[k * n + j])?;
                m[i * n + j] = x.checked_sub(y)? / prev;
            }
        }
        prev = m[k * n + k];
    }
    if n == 0 {
        return Some(1);
    }
    Some(sign * m[n * n - 1])
}

pub(crate) enum Walk {
    Continue,
    Stop,
    Abort,
}

/// Visits every vector in `[−b, b]^r` by increasing `L¹` norm. Returns true
/// when the whole box was visited.
pub(crate) fn for_each_by_l1(r: usize, b: i64, mut f: impl FnMut(&[i64]) -> Walk) -> bool {
    fn rec(idx: usize, left: i64, b: i64, cur: &mut Vec<i64>, f: &mut dyn FnMut(&[i64]) -> Walk) -> Option<bool> {
        let r = cur.len();
        if idx == r - 1 {
            if left > b {
                return Some(true);
            }
            let options: &[i64] = if left == 0 { &[0] } else { &[1, -1] };
            for &s in options {
                cur[idx] = s * left;
                match f(cur) {
                    Walk::Continue => {}
                    Walk::Stop => return Some(false),
                    Walk::Abort => return None,
                }
            }
            return Some(true);
        }
        for mag in 0..=left.min(b) {
            let options: &[i64] = if mag == 0 { &[0] } else { &[1, -1] };
            for &s in options {
                cur[idx] = s * mag;
                match rec(idx + 1, left - mag, b, cur, f)? {
                    true => {}
                    false => return Some(false),
                }
            }
        }
        cur[idx] = 0;
        Some(true)
    }
    let mut cur = vec![0i64; r];
    for norm in 0..=(r as i64 * b) {
        match rec(0, norm, b, &mut cur, &mut f) {
            Some(true) => {}
            Some(false) | None => return false,
        }
    }
    true
}

/// Rank profile that conjugate matrices must share.
fn rank_profile(a: &IMat) -> [usize; 3] {
    let n = a.rows();
    let id = IMat::identity(n);
    let minus = a - &id;
    let plus = a + &id;
    [rank(&minus), rank(&(&minus * &minus)), rank(&plus)]
}

/// One representative per `GL(2, Z)` class of `SL(2, Z)` matrices with the
/// given trace and entries in `[−bound, bound]`.
fn sl2_classes(trace: &BigInt, bound: u32) -> Vec<M2> {
    let e = bound as i64;
    let mut reps: Vec<(SL2, M2)> = Vec::new();
    let j = M2::from_i64(1, 0, 0, -1);
    for a in -e..=e {
        let d = trace - a;
        if d.abs() > int(e) {
            continue;
        }
        let bc: BigInt = int(a) * &d - 1;
        for b in -e..=e {
            let cs: Vec<BigInt> = if b == 0 {
                if bc.is_zero() {
                    (-e..=e).map(int).collect()
                } else {
                    Vec::new()
                }
            } else {
                let (q, r) = bc.div_rem(&int(b));
                if r.is_zero() && q.abs() <= int(e) {
                    vec![q]
                } else {
                    Vec::new()
                }
            };
            for c in cs {
                let m = M2::new(int(a), int(b), c, d.clone());
                let Ok(s) = SL2::new(m.clone()) else { continue };
                let canon = canonical_form(&s).matrix;
                let twisted = canonical_form(&SL2::new(j.mul(&m).mul(&j)).expect("det 1")).matrix;
                if !reps.iter().any(|(c, _)| *c == canon || *c == twisted) {
                    reps.push((canon, m));
                }
            }
        }
    }
    reps.into_iter().map(|(_, m)| m).collect()
}

/// Splits off a `(1)` block exactly: `(1) ⊕ C` is a target iff some right
/// eigenvector `v` and left eigenvector `ℓ` for the eigenvalue 1 pair to
/// `ℓ·v = 1`, iff the pairing matrix of the two kernel bases has content 1.
pub fn split_off_one(a: &IMat) -> Result<Option<Unimodular>> {
    let n = a.rows();
    let shift = a - &IMat::identity(n);
    let right = kernel_basis(&shift);
    let left = kernel_basis(&shift.transpose());
    if right.is_empty() {
        return Ok(None);
    }
    let rb = IMat::from_columns(&right)?;
    let lb = IMat::from_row_vecs(&left)?;
    let pairing = &lb * &rb;
    let Some((x, y)) = unit_pairing(&pairing) else {
        return Ok(None);
    };
    let ell = lb.vec_mul(&x);
    let v = rb.mul_vec(&y);
    debug_assert!(ell.dot(&v).is_one());
    let mut cols = vec![v];
    cols.extend(kernel_basis(&ell.as_row()));
    let mut p = IMat::from_columns(&cols)?;
    if det(&p)?.is_negative() {
        p.negate_col(n - 1);
    }
    let p = Unimodular::new(p)?;
    let c = p.conjugate(a);
    if !c.is_block_diagonal(&[1, n - 1]) || !c.get(0, 0).is_one() {
        return Err(Error::Certificate(format!("(1)-split {p} failed")));
    }
    Ok(Some(p))
}

/// Integer `x`, `y` with `xᵀGy = 1`, when the entries of `G` have gcd 1.
///
/// Column and row Hermite steps alternate until the corner entry divides
/// everything, as in a Smith reduction of the first corner only.
fn unit_pairing(g: &IMat) -> Option<(IVec, IVec)> {
    let content = g.entries().iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if !content.is_one() {
        return None;
    }
    let (rows, cols) = (g.rows(), g.cols());
    let mut s = g.clone();
    let mut u = IMat::identity(rows);
    let mut v = IMat::identity(cols);
    loop {
        // columns first, so a folded row lowers the corner to its gcd
        let (ht, uc) = hnf(&s.transpose());
        v = &v * &uc.as_mat().transpose();
        let (h, ur) = hnf(&ht.transpose());
        u = ur.as_mat() * &u;
        s = h;
        let row_clear = (1..cols).all(|j| s.get(0, j).is_zero());
        let col_clear = (1..rows).all(|i| s.get(i, 0).is_zero());
        if !(row_clear && col_clear) {
            continue;
        }
        let corner = s.get(0, 0).clone();
        if corner.abs().is_one() {
            break;
        }
        // the corner has a non-multiple somewhere; fold that row into row 0
        let (i, _) = (1..rows)
            .flat_map(|i| (1..cols).map(move |j| (i, j)))
            .find(|&(i, j)| !s.get(i, j).is_multiple_of(&corner))?;
        for j in 0..cols {
            let x = s.get(0, j) + s.get(i, j);
            s.set(0, j, x);
        }
        for j in 0..rows {
            let x = u.get(0, j) + u.get(i, j);
            u.set(0, j, x);
        }
    }
    let sign = s.get(0, 0).clone();
    let x = u.row(0).scale(&sign);
    let y = v.col(0);
    g.vec_mul(&x).dot(&y).is_one().then_some((x, y))
}

/// Quadratic factorizations `f = (t² − s₁t + 1)(t² − s₂t + 1)` of a quartic.
fn quadratic_pairs(f: &MonicIntPoly) -> Vec<(BigInt, BigInt)> {
    if f.degree() != 4 || !f.coeff(0).is_one() {
        return Vec::new();
    }
    // s₁ + s₂ = −f₃, s₁s₂ = f₂ − 2, and f₁ = f₃ is forced.
    let sum = -f.coeff(3);
    let prod = f.coeff(2) - int(2);
    let disc: BigInt = &sum * &sum - int(4) * &prod;
    if disc.is_negative() || f.coeff(1) != f.coeff(3) {
        return Vec::new();
    }
    let root: BigInt = num_integer::Roots::sqrt(&disc);
    if &root * &root != disc || (&sum + &root).is_odd() {
        return Vec::new();
    }
    let s1 = (&sum + &root) / int(2);
    let s2 = (&sum - &root) / int(2);
    if s1 == s2 {
        vec![(s1, s2)]
    } else {
        vec![(s1.clone(), s2.clone()), (s2, s1)]
    }
}

/// Searches `P` with `P⁻¹AP` block diagonal with `SL` blocks, `n ∈ {3, 4}`.
///
/// For `n = 3` every split is `(1) ⊕ C` up to a permutation, and the
/// targets are one `C` per `GL(2, Z)` class with entries within `bound`,
/// each tried by `brute_similarity`. For `n = 4`, shapes with a 1x1 block
/// use the exact eigenvector pairing test of `split_off_one`, and 2+2
/// targets come from factorizations of the characteristic polynomial into
/// quadratics with constant term 1.
pub fn brute_block_split(a: &IMat, bound: u32) -> Result<SimilaritySearchReport> {
    let n = a.rows();
    if !a.is_square() || !(3..=4).contains(&n) {
        return Err(Error::Domain(format!("block split search needs n in 3..=4, got {}x{}", a.rows(), a.cols())));
    }
    if n == 3 {
        return one_plus_two(a, bound);
    }
    if let Some(p) = split_off_one(a)? {
        let target = p.conjugate(a);
        return Ok(SimilaritySearchReport {
            outcome: SimilarityOutcome::Found(p),
            bound,
            lattice_rank: 0,
            evaluations: 1,
            exhaustive: false,
            target: Some(target),
        });
    }
    two_plus_two(a, bound)
}

fn one_plus_two(a: &IMat, bound: u32) -> Result<SimilaritySearchReport> {
    let f = charpoly(a)?;
    if !f.eval_i64(1).is_zero() {
        return Ok(SimilaritySearchReport::none(bound, 0, 0, true));
    }
    let trace = a.trace() - int(1);
    let profile = rank_profile(a);
    let mut evaluations = 0u64;
    let mut max_rank = 0;
    for c in sl2_classes(&trace, bound) {
        let target = IMat::identity(1).direct_sum(&c.to_imat());
        if rank_profile(&target) != profile {
            continue;
        }
        let report = brute_similarity(a, &target, bound)?;
        evaluations += report.evaluations;
        max_rank = max_rank.max(report.lattice_rank);
        if report.found().is_some() {
            return Ok(SimilaritySearchReport { evaluations, target: Some(target), ..report });
        }
    }
    // classes beyond the entry bound were not tried
    Ok(SimilaritySearchReport::none(bound, max_rank, evaluations, false))
}

/// 2+2 targets of a 4x4 matrix.
pub fn two_plus_two(a: &IMat, bound: u32) -> Result<SimilaritySearchReport> {
    two_plus_two_budgeted(a, bound, DEFAULT_EVALUATION_BUDGET)
}

/// As [`two_plus_two`] with a per-target evaluation budget.
pub fn two_plus_two_budgeted(a: &IMat, bound: u32, budget: u64) -> Result<SimilaritySearchReport> {
    let f = charpoly(a)?;
    let profile = rank_profile(a);
    let pairs = quadratic_pairs(&f);
    let no_targets = pairs.is_empty();
    let mut evaluations = 0u64;
    let mut max_rank = 0;
    for (s1, s2) in pairs {
        for c1 in sl2_classes(&s1, bound) {
            // a det −1 conjugator only reaches the twisted second block
            let seconds = sl2_classes(&s2, bound).into_iter().flat_map(|c| {
                let j = M2::from_i64(1, 0, 0, -1);
                let t = j.mul(&c).mul(&j);
                if t == c { vec![c] } else { vec![c, t] }
            });
            for c2 in seconds {
                let target = c1.to_imat().direct_sum(&c2.to_imat());
                if rank_profile(&target) != profile {
                    continue;
                }
                let report = brute_similarity_budgeted(a, &target, bound, budget)?;
                evaluations += report.evaluations;
                max_rank = max_rank.max(report.lattice_rank);
                if report.found().is_some() {
                    return Ok(SimilaritySearchReport { evaluations, target: Some(target), ..report });
                }
            }
        }
    }
    Ok(SimilaritySearchReport::none(bound, max_rank, evaluations, no_targets))
}

/// Product of `steps` random transvections `E_ij(±1)`, seeded.
pub fn random_slnz(n: usize, steps: usize, seed: u64) -> Unimodular {
    assert!(n >= 1, "dimension must be positive");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut m = IMat::identity(n);
    if n == 1 {
        return Unimodular::new(m).expect("identity");
    }
    for _ in 0..steps {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        let s = if rng.gen_bool(0.5) { int(1) } else { int(-1) };
        // right multiplication by E_ij(s) adds s·(column i) to column j
        for r in 0..n {
            let v = m.get(r, j) + &s * m.get(r, i);
            m.set(r, j, v);
        }
    }
    Unimodular::new(m).expect("transvections have determinant 1")
}

/// Outcome of probing `A ⊕ B` for a split into blocks of size at most 2.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct StabilizerProbe {
    pub stabilizer: IMat,
    pub split: Option<Unimodular>,
}

/// Research harness for a 3x3 `A`: tries each 1x1 stabilizer `B` and
/// reports whether `A ⊕ B` is conjugate to a sum of blocks of size `≤ 2`.
/// Nothing here feeds a verdict.
pub fn probe_stabilizers(a: &IMat, stabilizers: &[IMat], bound: u32) -> Result<Vec<StabilizerProbe>> {
    let mut out = Vec::new();
    for b in stabilizers {
        let v = a.direct_sum(b);
        if v.rows() != 4 {
            return Err(Error::Domain(format!("probe needs total dimension 4, got {}", v.rows())));
        }
        let split = match two_plus_two_budgeted(&v, bound, PROBE_EVALUATION_BUDGET)?.found() {
            Some(p) => Some(p.clone()),
            None => split_into_small(&v)?,
        };
        out.push(StabilizerProbe { stabilizer: b.clone(), split });
    }
    Ok(out)
}

/// `(1) ⊕ (1) ⊕ C` through two exact `(1)` splits.
fn split_into_small(v: &IMat) -> Result<Option<Unimodular>> {
    let Some(p) = split_off_one(v)? else { return Ok(None) };
    let rest = p.conjugate(v).block(1, 1, 3, 3);
    let Some(q) = split_off_one(&rest)? else { return Ok(None) };
    let total = p.compose(&Unimodular::identity(1).direct_sum(&q));
    debug_assert!(total.conjugate(v).is_block_diagonal(&[1, 1, 2]));
    Ok(Some(total))
}
