//! `SL(2, Z)`: trace classes, centralizer unit groups, their reductions
//! modulo an integer, and a complete conjugacy decision with certificates.
//!
//! Conjugacy is decided by putting each matrix into a canonical
//! representative of its class together with a conjugator:
//!
//! * `±I` are alone in their classes.
//! * Parabolics `σ·(I + N)` are conjugate to `σ·[[1, n], [0, 1]]` for a unique
//!   twist `n`.
//! * Elliptics are matched through the definite binary quadratic form
//!   `Q_A(x, y) = det[v | Av]`, which transforms as `Q_{P⁻¹AP} = Q_A ∘ P`.
//!   Gauss reduction picks the unique reduced form in the proper class.
//! * Hyperbolics (after factoring out the sign of the trace) are conjugated
//!   to a matrix with nonnegative entries, factored into the letters
//!   `R = [[1,1],[0,1]]`, `L = [[1,0],[1,1]]`, and the lexicographically least
//!   rotation of that word is taken.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactmat::{int, IMat};

/// 2x2 integer matrix `[[a, b], [c, d]]`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct M2 {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
    pub d: BigInt,
}

impl M2 {
    pub fn new(a: BigInt, b: BigInt, c: BigInt, d: BigInt) -> Self {
        M2 { a, b, c, d }
    }

    pub fn from_i64(a: i64, b: i64, c: i64, d: i64) -> Self {
        M2::new(int(a), int(b), int(c), int(d))
    }

    pub fn identity() -> Self {
        M2::from_i64(1, 0, 0, 1)
    }

    pub fn scalar(k: &BigInt) -> Self {
        M2::new(k.clone(), BigInt::zero(), BigInt::zero(), k.clone())
    }

    pub fn from_imat(m: &IMat) -> Result<Self> {
        if m.rows() != 2 || m.cols() != 2 {
            return Err(Error::Dimension(format!("expected 2x2, got {}x{}", m.rows(), m.cols())));
        }
        Ok(M2::new(m.get(0, 0).clone(), m.get(0, 1).clone(), m.get(1, 0).clone(), m.get(1, 1).clone()))
    }

    pub fn to_imat(&self) -> IMat {
        IMat::new(2, 2, vec![self.a.clone(), self.b.clone(), self.c.clone(), self.d.clone()])
            .expect("four entries")
    }

    pub fn det(&self) -> BigInt {
        &self.a * &self.d - &self.b * &self.c
    }

    pub fn trace(&self) -> BigInt {
        &self.a + &self.d
    }

    pub fn mul(&self, o: &M2) -> M2 {
        M2::new(
            &self.a * &o.a + &self.b * &o.c,
            &self.a * &o.b + &self.b * &o.d,
            &self.c * &o.a + &self.d * &o.c,
            &self.c * &o.b + &self.d * &o.d,
        )
    }

    pub fn add(&self, o: &M2) -> M2 {
        M2::new(&self.a + &o.a, &self.b + &o.b, &self.c + &o.c, &self.d + &o.d)
    }

    pub fn sub(&self, o: &M2) -> M2 {
        M2::new(&self.a - &o.a, &self.b - &o.b, &self.c - &o.c, &self.d - &o.d)
    }

    pub fn scale(&self, k: &BigInt) -> M2 {
        M2::new(&self.a * k, &self.b * k, &self.c * k, &self.d * k)
    }

    pub fn neg(&self) -> M2 {
        self.scale(&int(-1))
    }

    /// `adj(M)`; the inverse when `det M = 1`.
    pub fn adjugate(&self) -> M2 {
        M2::new(self.d.clone(), -&self.b, -&self.c, self.a.clone())
    }

    /// Exact inverse of a matrix with determinant ±1.
    pub fn unimodular_inverse(&self) -> M2 {
        self.adjugate().scale(&self.det())
    }

    pub fn is_scalar(&self) -> bool {
        self.b.is_zero() && self.c.is_zero() && self.a == self.d
    }

    pub fn max_abs(&self) -> BigInt {
        [&self.a, &self.b, &self.c, &self.d].iter().map(|x| x.abs()).max().expect("four entries")
    }

    /// Row vector times matrix.
    pub fn row_mul(&self, v: &(BigInt, BigInt)) -> (BigInt, BigInt) {
        (&v.0 * &self.a + &v.1 * &self.c, &v.0 * &self.b + &v.1 * &self.d)
    }
}

impl fmt::Display for M2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{};{},{}", self.a, self.b, self.c, self.d)
    }
}

/// Element of `SL(2, Z)`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct SL2(M2);

impl SL2 {
    pub fn new(m: M2) -> Result<Self> {
        let d = m.det();
        if !d.is_one() {
            return Err(Error::Domain(format!("determinant is {d}, expected 1")));
        }
        Ok(SL2(m))
    }

    pub fn from_i64(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        SL2::new(M2::from_i64(a, b, c, d))
    }

    pub fn from_imat(m: &IMat) -> Result<Self> {
        SL2::new(M2::from_imat(m)?)
    }

    pub fn identity() -> Self {
        SL2(M2::identity())
    }

    pub fn r() -> Self {
        SL2(M2::from_i64(1, 1, 0, 1))
    }

    pub fn l() -> Self {
        SL2(M2::from_i64(1, 0, 1, 1))
    }

    pub fn s() -> Self {
        SL2(M2::from_i64(0, -1, 1, 0))
    }

    pub fn m(&self) -> &M2 {
        &self.0
    }

    pub fn into_m2(self) -> M2 {
        self.0
    }

    pub fn inverse(&self) -> SL2 {
        SL2(self.0.adjugate())
    }

    pub fn mul(&self, o: &SL2) -> SL2 {
        SL2(self.0.mul(&o.0))
    }

    pub fn neg(&self) -> SL2 {
        SL2(self.0.neg())
    }

    /// `P⁻¹ · self · P`.
    pub fn conjugate_by(&self, p: &SL2) -> SL2 {
        p.inverse().mul(self).mul(p)
    }

    pub fn trace(&self) -> BigInt {
        self.0.trace()
    }

    pub fn to_imat(&self) -> IMat {
        self.0.to_imat()
    }
}

impl fmt::Display for SL2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize)]
pub enum TraceClass {
    Elliptic,
    Parabolic,
    Hyperbolic,
}

pub fn trace_class(a: &SL2) -> TraceClass {
    let t = a.trace().abs();
    if t < int(2) {
        TraceClass::Elliptic
    } else if t == int(2) {
        TraceClass::Parabolic
    } else {
        TraceClass::Hyperbolic
    }
}

/// The centralizer of a non-scalar `A₂` inside `M₂(Z)`, which is the order
/// `Z[X]` for the primitive matrix `X = (A₂ − a₁₁I)/g`,
/// `g = gcd(b, c, d − a)`. When `g = 1` the base is `A₂` itself.
///
/// `X² = tX − n` with `t = tr X`, `n = det X`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Commutant {
    base: M2,
    t: BigInt,
    n: BigInt,
    /// `A₂ = offset·I + g·base`.
    offset: BigInt,
    g: BigInt,
}

/// `p·I + q·base` in the centralizer of some `A₂`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct CommutantElement {
    pub p: BigInt,
    pub q: BigInt,
    pub base: M2,
}

impl CommutantElement {
    pub fn matrix(&self) -> M2 {
        M2::scalar(&self.p).add(&self.base.scale(&self.q))
    }

    pub fn det(&self) -> BigInt {
        self.matrix().det()
    }
}

impl Commutant {
    pub fn of(a2: &SL2) -> Result<Self> {
        let m = a2.m();
        if m.is_scalar() {
            return Err(Error::Domain(format!("{m} is scalar; its commutant is all of GL(2, Z)")));
        }
        let g = m.b.gcd(&m.c).gcd(&(&m.d - &m.a));
        let (base, offset) = if g.is_one() {
            (m.clone(), BigInt::zero())
        } else {
            let x = m.sub(&M2::scalar(&m.a));
            (M2::new(&x.a / &g, &x.b / &g, &x.c / &g, &x.d / &g), m.a.clone())
        };
        Ok(Commutant { t: base.trace(), n: base.det(), base, offset, g })
    }

    pub fn base(&self) -> &M2 {
        &self.base
    }

    /// Coordinates of `A₂` itself.
    pub fn a2_coords(&self) -> (BigInt, BigInt) {
        if self.offset.is_zero() && self.g.is_one() {
            (BigInt::zero(), BigInt::one())
        } else {
            (self.offset.clone(), self.g.clone())
        }
    }

    pub fn element(&self, p: BigInt, q: BigInt) -> CommutantElement {
        CommutantElement { p, q, base: self.base.clone() }
    }

    /// `det(pI + qX) = p² + t·pq + n·q²`.
    pub fn norm(&self, p: &BigInt, q: &BigInt) -> BigInt {
        p * p + &self.t * p * q + &self.n * q * q
    }

    /// Discriminant `t² − 4n` of the order.
    pub fn discriminant(&self) -> BigInt {
        &self.t * &self.t - int(4) * &self.n
    }

    pub fn mul(&self, x: &(BigInt, BigInt), y: &(BigInt, BigInt)) -> (BigInt, BigInt) {
        let qq = &x.1 * &y.1;
        (&x.0 * &y.0 - &self.n * &qq, &x.0 * &y.1 + &y.0 * &x.1 + &self.t * &qq)
    }

    fn mul_mod(&self, x: &(BigInt, BigInt), y: &(BigInt, BigInt), m: &BigInt) -> (BigInt, BigInt) {
        let (p, q) = self.mul(x, y);
        (p.mod_floor(m), q.mod_floor(m))
    }
}

pub const DEFAULT_UNIT_CAP: u64 = 1_000_000;

/// Generators of the unit group `{X ∈ Z[X] : det = ±1}` of the centralizer.
pub fn unit_generators(a2: &SL2) -> Result<Vec<CommutantElement>> {
    unit_generators_with_cap(a2, DEFAULT_UNIT_CAP)
}

pub fn unit_generators_with_cap(a2: &SL2, cap: u64) -> Result<Vec<CommutantElement>> {
    let c = Commutant::of(a2)?;
    let minus_one = c.element(int(-1), BigInt::zero());
    let (p0, q0) = c.a2_coords();
    let mut gens = vec![minus_one, c.element(p0, q0)];
    let disc = c.discriminant();
    match trace_class(a2) {
        TraceClass::Elliptic => {
            // (2p + tq)² + |Δ|q² = 4 with |Δ| ≥ 3 leaves q ∈ {−1, 0, 1}.
            for q in -1i64..=1 {
                let q = int(q);
                for p in -2i64..=2 {
                    let p = int(p);
                    if c.norm(&p, &q).is_one() {
                        gens.push(c.element(p.clone(), q.clone()));
                    }
                }
            }
        }
        TraceClass::Parabolic => {
            // X − (t/2)I is nilpotent and primitive; I plus it generates with −I.
            let half = &c.t / int(2);
            gens.push(c.element(BigInt::one() - half, BigInt::one()));
        }
        TraceClass::Hyperbolic => {
            let (p, q) = fundamental_unit(&c, &disc, cap)?;
            gens.push(c.element(p, q));
        }
    }
    if trace_class(a2) != TraceClass::Elliptic {
        for e in gens.iter_mut().skip(1) {
            normalize_sign(e);
        }
    }
    let mut seen = Vec::new();
    gens.retain(|e| {
        if seen.contains(e) {
            false
        } else {
            seen.push(e.clone());
            true
        }
    });
    Ok(gens)
}

/// Makes the first nonzero coordinate positive.
fn normalize_sign(e: &mut CommutantElement) {
    let lead = if e.p.is_zero() { &e.q } else { &e.p };
    if lead.is_negative() {
        e.p = -&e.p;
        e.q = -&e.q;
    }
}

/// Least `q ≥ 1` with `Δq² ± 4` a perfect square `s²`; then
/// `p = (s − tq)/2` gives the unit `(s + q√Δ)/2 > 1`.
fn fundamental_unit(c: &Commutant, disc: &BigInt, cap: u64) -> Result<(BigInt, BigInt)> {
    let four = int(4);
    let mut q = BigInt::one();
    let limit = BigInt::from(cap);
    while q <= limit {
        let dq2 = disc * &q * &q;
        for target in [&dq2 - &four, &dq2 + &four] {
            if target.is_negative() {
                continue;
            }
            let s: BigInt = Roots::sqrt(&target);
            if &s * &s == target {
                let p = (&s - &c.t * &q) / int(2);
                if p.abs() > limit {
                    return Err(Error::Resource(format!("fundamental unit exceeds cap {cap}")));
                }
                debug_assert!(c.norm(&p, &q).abs().is_one());
                return Ok((p, q));
            }
        }
        q += 1;
    }
    Err(Error::Resource(format!("no fundamental unit with |q| <= {cap}")))
}

/// Reductions modulo `|m|` of the whole unit group, each with an integer
/// representative that is an actual unit.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct UnitResidues {
    pub modulus: BigInt,
    pub commutant: Commutant,
    /// residue `(p mod m, q mod m)` → a unit reducing to it
    pub residues: BTreeMap<(BigInt, BigInt), CommutantElement>,
}

impl UnitResidues {
    pub fn len(&self) -> usize {
        self.residues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.residues.is_empty()
    }

    pub fn contains(&self, p: &BigInt, q: &BigInt) -> bool {
        self.residues.contains_key(&(p.mod_floor(&self.modulus), q.mod_floor(&self.modulus)))
    }
}

/// Multiplicative closure of the generators' reductions mod `|m|`.
pub fn units_mod(a2: &SL2, m: &BigInt) -> Result<UnitResidues> {
    if m.is_zero() {
        return Err(Error::Domain("modulus 0: use the exact unit group".into()));
    }
    let modulus = m.abs();
    let c = Commutant::of(a2)?;
    let gens = unit_generators(a2)?;
    let reduce = |p: &BigInt, q: &BigInt| (p.mod_floor(&modulus), q.mod_floor(&modulus));
    let mut residues = BTreeMap::new();
    let one = c.element(BigInt::one(), BigInt::zero());
    residues.insert(reduce(&one.p, &one.q), one.clone());
    let mut queue = VecDeque::from([one]);
    while let Some(x) = queue.pop_front() {
        for g in &gens {
            let (p, q) = c.mul(&(x.p.clone(), x.q.clone()), &(g.p.clone(), g.q.clone()));
            let key = reduce(&p, &q);
            if !residues.contains_key(&key) {
                let e = c.element(p, q);
                residues.insert(key, e.clone());
                queue.push_back(e);
            }
        }
    }
    debug_assert!(residues.keys().all(|x| residues
        .keys()
        .all(|y| residues.contains_key(&c.mul_mod(x, y, &modulus)))));
    Ok(UnitResidues { modulus, commutant: c, residues })
}

/// A complete conjugacy invariant of a single `SL(2, Z)` element.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize)]
pub enum ClassInvariant {
    /// `±I`
    Central { sign: i8 },
    /// `sign·[[1, twist], [0, 1]]`
    Parabolic { sign: i8, twist: String },
    /// Reduced form `(a, b, c)` of `Q_A`.
    Elliptic { trace: i8, form: [String; 3] },
    /// Least rotation of the `R`/`L` word of `sign·A`.
    Hyperbolic { sign: i8, word: String },
}

impl fmt::Display for ClassInvariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassInvariant::Central { sign } => write!(f, "central({sign})"),
            ClassInvariant::Parabolic { sign, twist } => write!(f, "parabolic(sign {sign}, twist {twist})"),
            ClassInvariant::Elliptic { trace, form } => {
                write!(f, "elliptic(trace {trace}, form ({},{},{}))", form[0], form[1], form[2])
            }
            ClassInvariant::Hyperbolic { sign, word } => write!(f, "hyperbolic(sign {sign}, word {word})"),
        }
    }
}

/// Why two elements are not conjugate.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub enum ConjInvariant {
    Trace { left: String, right: String },
    Class { left: ClassInvariant, right: ClassInvariant },
}

impl fmt::Display for ConjInvariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConjInvariant::Trace { left, right } => write!(f, "traces differ: {left} vs {right}"),
            ConjInvariant::Class { left, right } => write!(f, "classes differ: {left} vs {right}"),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum ConjugacyResult {
    /// `P` with `P⁻¹AP = B`.
    Conjugate(SL2),
    NotConjugate(ConjInvariant),
}

impl ConjugacyResult {
    pub fn is_conjugate(&self) -> bool {
        matches!(self, ConjugacyResult::Conjugate(_))
    }
}

/// Canonical representative `C = P⁻¹AP` of the class of `A`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Canonical {
    pub invariant: ClassInvariant,
    pub matrix: SL2,
    pub conjugator: SL2,
}

pub fn canonical_form(a: &SL2) -> Canonical {
    let m = a.m();
    let canon = if m.is_scalar() {
        Canonical {
            invariant: ClassInvariant::Central { sign: if m.a.is_positive() { 1 } else { -1 } },
            matrix: a.clone(),
            conjugator: SL2::identity(),
        }
    } else {
        match trace_class(a) {
            TraceClass::Parabolic => parabolic_canonical(a),
            TraceClass::Elliptic => elliptic_canonical(a),
            TraceClass::Hyperbolic => hyperbolic_canonical(a),
        }
    };
    assert_eq!(
        a.conjugate_by(&canon.conjugator),
        canon.matrix,
        "canonical conjugator failed to verify"
    );
    canon
}

fn sign_of_trace(a: &SL2) -> (i8, BigInt) {
    if a.trace().is_negative() {
        (-1, int(-1))
    } else {
        (1, int(1))
    }
}

fn parabolic_canonical(a: &SL2) -> Canonical {
    let (sign, s) = sign_of_trace(a);
    let n = a.m().scale(&s).sub(&M2::identity());
    // The kernel of a nonzero nilpotent is a primitive line.
    let kernel = crate::exactmat::kernel_basis(&n.to_imat());
    let v = &kernel[0];
    let r = crate::exactmat::complete_primitive(v).expect("kernel vectors are primitive");
    let p = SL2::from_imat(&r.inverse().into_inner()).expect("det 1");
    let matrix = a.conjugate_by(&p);
    let twist = &matrix.m().b * &s;
    Canonical {
        invariant: ClassInvariant::Parabolic { sign, twist: twist.to_string() },
        matrix,
        conjugator: p,
    }
}

/// `(a, b, c)` for `a x² + b xy + c y²`.
type Form = (BigInt, BigInt, BigInt);

fn form_of(m: &M2) -> Form {
    (m.c.clone(), &m.d - &m.a, -&m.b)
}

/// Gauss reduction of a positive definite form; returns the reduced form and
/// `P` with `f ∘ P` reduced.
fn reduce_definite(mut f: Form) -> (Form, M2) {
    let mut p = M2::identity();
    loop {
        let (a, b, _) = &f;
        let two_a = a * int(2);
        let k = (a - b).div_floor(&two_a);
        if !k.is_zero() {
            let (a, b, c) = f;
            let nb = &b + &two_a * &k;
            let nc = &a * &k * &k + &b * &k + &c;
            f = (a, nb, nc);
            p = p.mul(&M2::new(BigInt::one(), k, BigInt::zero(), BigInt::one()));
        }
        let swap = f.0 > f.2 || (f.0 == f.2 && f.1.is_negative());
        if !swap {
            return (f, p);
        }
        let (a, b, c) = f;
        f = (c, -b, a);
        p = p.mul(&M2::from_i64(0, -1, 1, 0));
    }
}

fn elliptic_canonical(a: &SL2) -> Canonical {
    let f = form_of(a.m());
    let negative = f.0.is_negative();
    let f = if negative { (-f.0, -f.1, -f.2) } else { f };
    let (red, p) = reduce_definite(f);
    let red = if negative { (-red.0, -red.1, -red.2) } else { red };
    let p = SL2::new(p).expect("products of T and S have det 1");
    let matrix = a.conjugate_by(&p);
    let trace = i8::try_from(a.trace()).expect("elliptic trace is small");
    Canonical {
        invariant: ClassInvariant::Elliptic {
            trace,
            form: [red.0.to_string(), red.1.to_string(), red.2.to_string()],
        },
        matrix,
        conjugator: p,
    }
}

/// `(u + w√D)/v` with `v ≠ 0` and `D` not a square.
#[derive(Clone, Debug)]
struct QuadIrr {
    u: BigInt,
    w: BigInt,
    v: BigInt,
}

impl QuadIrr {
    fn normalize(mut self) -> Self {
        if self.v.is_negative() {
            self.u = -self.u;
            self.w = -self.w;
            self.v = -self.v;
        }
        let g = self.u.gcd(&self.w).gcd(&self.v);
        if !g.is_one() && !g.is_zero() {
            self.u /= &g;
            self.w /= &g;
            self.v /= &g;
        }
        self
    }

    fn floor(&self, disc: &BigInt) -> BigInt {
        let s: BigInt = Roots::sqrt(&(&self.w * &self.w * disc));
        if self.w.is_negative() {
            (&self.u - s - BigInt::one()).div_floor(&self.v)
        } else {
            (&self.u + s).div_floor(&self.v)
        }
    }

    fn shift(&self, n: &BigInt) -> Self {
        QuadIrr { u: &self.u - n * &self.v, w: self.w.clone(), v: self.v.clone() }
    }

    /// `−1/z`.
    fn neg_recip(&self, disc: &BigInt) -> Self {
        let norm = &self.u * &self.u - &self.w * &self.w * disc;
        QuadIrr { u: -&self.v * &self.u, w: &self.v * &self.w, v: norm }.normalize()
    }
}

/// Conjugates a trace `> 2` matrix to one with nonnegative entries:
/// returns `γ` with `γMγ⁻¹ ≥ 0`. Works on the fixed points under the
/// Möbius action; the result is nonnegative exactly when the attracting
/// fixed point is positive and the repelling one negative.
fn positivize(m: &M2) -> M2 {
    let disc = m.trace() * m.trace() - int(4);
    let two_c = &m.c * int(2);
    let mut x = QuadIrr { u: &m.a - &m.d, w: BigInt::one(), v: two_c.clone() }.normalize();
    let mut y = QuadIrr { u: &m.a - &m.d, w: int(-1), v: two_c }.normalize();
    let mut gamma = M2::identity();
    let s = M2::from_i64(0, -1, 1, 0);
    let translate = |n: &BigInt| M2::new(BigInt::one(), -n, BigInt::zero(), BigInt::one());
    loop {
        let fx = x.floor(&disc);
        let fy = y.floor(&disc);
        if fx > fy {
            // x > fx > y
            return translate(&fx).mul(&gamma);
        }
        if fx < fy {
            // x < fy < y, then −1/z swaps the signs
            return s.mul(&translate(&fy)).mul(&gamma);
        }
        x = x.shift(&fx).neg_recip(&disc);
        y = y.shift(&fx).neg_recip(&disc);
        gamma = s.mul(&translate(&fx)).mul(&gamma);
    }
}

/// Unique factorization of a nonnegative `SL(2, Z)` matrix into `R`, `L`.
fn rl_word(m: &M2) -> Vec<u8> {
    let mut m = m.clone();
    let mut word = Vec::new();
    while m != M2::identity() {
        if m.a >= m.c && m.b >= m.d {
            m = M2::new(&m.a - &m.c, &m.b - &m.d, m.c.clone(), m.d.clone());
            word.push(b'R');
        } else {
            m = M2::new(m.a.clone(), m.b.clone(), &m.c - &m.a, &m.d - &m.b);
            word.push(b'L');
        }
        debug_assert!(!m.a.is_negative() && !m.b.is_negative() && !m.c.is_negative() && !m.d.is_negative());
    }
    word
}

fn least_rotation(word: &[u8]) -> usize {
    let n = word.len();
    (0..n)
        .min_by(|&i, &j| {
            let ri = word[i..].iter().chain(&word[..i]);
            let rj = word[j..].iter().chain(&word[..j]);
            ri.cmp(rj)
        })
        .unwrap_or(0)
}

fn hyperbolic_canonical(a: &SL2) -> Canonical {
    let (sign, s) = sign_of_trace(a);
    let m = a.m().scale(&s);
    let gamma = positivize(&m);
    let positive = gamma.mul(&m).mul(&gamma.adjugate());
    let word = rl_word(&positive);
    let start = least_rotation(&word);
    let (r, l) = (SL2::r().into_m2(), SL2::l().into_m2());
    let prefix = word[..start]
        .iter()
        .fold(M2::identity(), |acc, &x| acc.mul(if x == b'R' { &r } else { &l }));
    let p = SL2::new(gamma.adjugate().mul(&prefix)).expect("det 1");
    let matrix = a.conjugate_by(&p);
    let rotated: Vec<u8> = word[start..].iter().chain(&word[..start]).copied().collect();
    Canonical {
        invariant: ClassInvariant::Hyperbolic {
            sign,
            word: String::from_utf8(rotated).expect("ascii letters"),
        },
        matrix,
        conjugator: p,
    }
}

/// Decides conjugacy in `SL(2, Z)`; a returned `P` satisfies `P⁻¹AP = B`.
pub fn conjugate_sl2(a: &SL2, b: &SL2) -> ConjugacyResult {
    if a.trace() != b.trace() {
        return ConjugacyResult::NotConjugate(ConjInvariant::Trace {
            left: a.trace().to_string(),
            right: b.trace().to_string(),
        });
    }
    let ca = canonical_form(a);
    let cb = canonical_form(b);
    if ca.matrix != cb.matrix {
        return ConjugacyResult::NotConjugate(ConjInvariant::Class { left: ca.invariant, right: cb.invariant });
    }
    let p = ca.conjugator.mul(&cb.conjugator.inverse());
    assert_eq!(a.conjugate_by(&p), *b, "conjugacy certificate failed to verify");
    ConjugacyResult::Conjugate(p)
}

/// Conjugacy in `GL(2, Z)`: returns `P` with `det P = ±1` and `P⁻¹AP = B`.
pub fn conjugate_gl2(a: &SL2, b: &SL2) -> Option<M2> {
    if let ConjugacyResult::Conjugate(p) = conjugate_sl2(a, b) {
        return Some(p.into_m2());
    }
    let j = M2::from_i64(1, 0, 0, -1);
    let jbj = SL2::new(j.mul(b.m()).mul(&j)).expect("det 1");
    match conjugate_sl2(a, &jbj) {
        ConjugacyResult::Conjugate(p) => {
            let p = p.into_m2().mul(&j);
            debug_assert_eq!(p.unimodular_inverse().mul(a.m()).mul(&p), *b.m());
            Some(p)
        }
        ConjugacyResult::NotConjugate(_) => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sl(a: i64, b: i64, c: i64, d: i64) -> SL2 {
        SL2::from_i64(a, b, c, d).unwrap()
    }

    #[test]
    fn unit_generators_examples() {
        let a2 = sl(2, 1, 1, 1);
        let gens = unit_generators(&a2).unwrap();
        let coords: Vec<(i64, i64)> = gens
            .iter()
            .map(|e| (i64::try_from(&e.p).unwrap(), i64::try_from(&e.q).unwrap()))
            .collect();
        assert!(coords.contains(&(0, 1)));
        assert!(coords.contains(&(1, -1)));
        for e in &gens {
            assert!(e.det().abs().is_one());
            assert_eq!(e.matrix().mul(a2.m()), a2.m().mul(&e.matrix()));
        }

        let rot = sl(0, -1, 1, 0);
        let gens = unit_generators(&rot).unwrap();
        let mats: std::collections::BTreeSet<M2> = gens.iter().map(CommutantElement::matrix).collect();
        let expected: std::collections::BTreeSet<M2> =
            [M2::identity(), M2::identity().neg(), rot.m().clone(), rot.m().neg()].into_iter().collect();
        assert_eq!(mats, expected);

        assert!(unit_generators(&SL2::identity()).is_err());
    }

    #[test]
    fn centralizer_base_for_imprimitive_a2() {
        // A₂ − I = 2·[[1,1],[1,0]] + ...: gcd(b, c, d − a) = 2.
        let a2 = sl(1, 2, 2, 5);
        let c = Commutant::of(&a2).unwrap();
        assert_eq!(c.base(), &M2::from_i64(0, 1, 1, 2));
        let gens = unit_generators(&a2).unwrap();
        assert!(gens.iter().any(|e| e.matrix() == *a2.m()));
        // the golden unit lies in the centralizer but not in Z[A₂]
        assert!(gens.iter().any(|e| e.q.abs() == int(1)));
    }

    #[test]
    fn units_mod_examples() {
        let one = units_mod(&sl(2, 1, 1, 1), &int(1)).unwrap();
        assert_eq!(one.len(), 1);
        assert!(one.contains(&int(0), &int(0)));

        let five = units_mod(&sl(2, 1, 1, 1), &int(5)).unwrap();
        assert!(five.contains(&int(1), &int(0)));
        assert!(five.contains(&int(0), &int(1)));
        assert!(five.contains(&int(1), &int(-1)));

        let two = units_mod(&sl(0, -1, 1, 0), &int(-2)).unwrap();
        let keys: Vec<_> = two.residues.keys().cloned().collect();
        assert_eq!(keys, vec![(int(0), int(1)), (int(1), int(0))]);

        assert!(units_mod(&sl(2, 1, 1, 1), &int(0)).is_err());
    }

    #[test]
    fn conjugacy_examples() {
        let a = sl(2, 1, 1, 1);
        assert_eq!(conjugate_sl2(&a, &a), ConjugacyResult::Conjugate(SL2::identity()));
        assert!(!conjugate_sl2(&SL2::r(), &SL2::l()).is_conjugate());
        match conjugate_sl2(&a, &sl(1, 1, 1, 2)) {
            ConjugacyResult::Conjugate(p) => assert_eq!(a.conjugate_by(&p), sl(1, 1, 1, 2)),
            other => panic!("expected conjugate, got {other:?}"),
        }
        // P = R is a valid witness for RL ~ LR
        assert_eq!(a.conjugate_by(&SL2::r()), sl(1, 1, 1, 2));
        // R is conjugate to L⁻¹ via S
        assert!(conjugate_sl2(&SL2::r(), &SL2::l().inverse()).is_conjugate());
    }

    #[test]
    fn trace_and_sign_separate_classes() {
        assert!(!conjugate_sl2(&SL2::r(), &SL2::r().neg()).is_conjugate());
        assert!(!conjugate_sl2(&SL2::identity(), &SL2::identity().neg()).is_conjugate());
        assert!(!conjugate_sl2(&SL2::r(), &SL2::identity()).is_conjugate());
        let twist2 = sl(1, 2, 0, 1);
        assert!(!conjugate_sl2(&SL2::r(), &twist2).is_conjugate());
    }

    #[test]
    fn elliptic_classes() {
        // order 4: S and S⁻¹ are not conjugate in SL(2, Z)
        assert!(!conjugate_sl2(&SL2::s(), &SL2::s().inverse()).is_conjugate());
        // order 6 and 3
        let u = sl(0, -1, 1, 1);
        assert!(!conjugate_sl2(&u, &u.inverse()).is_conjugate());
        let q = sl(3, 2, 4, 3);
        assert!(conjugate_sl2(&u, &u.conjugate_by(&q)).is_conjugate());
        let w = sl(-1, -1, 1, 0);
        assert!(conjugate_sl2(&w, &w.conjugate_by(&q)).is_conjugate());
    }

    #[test]
    fn hyperbolic_words() {
        // RRL and RLL have the same trace 4 but are different cyclic words
        let rrl = SL2::r().mul(&SL2::r()).mul(&SL2::l());
        let rll = SL2::r().mul(&SL2::l()).mul(&SL2::l());
        assert_eq!(rrl.trace(), rll.trace());
        assert!(!conjugate_sl2(&rrl, &rll).is_conjugate());
        // the negative-trace version is handled through −I
        assert!(conjugate_sl2(&rrl.neg(), &rrl.neg().conjugate_by(&sl(2, 3, 1, 2))).is_conjugate());
        // trace 3 with a non-primitive word still lives in one class
        let x = sl(1, 1, 1, 2).mul(&sl(1, 1, 1, 2));
        assert!(conjugate_sl2(&x, &sl(2, 1, 1, 1).mul(&sl(2, 1, 1, 1))).is_conjugate());
    }

    #[test]
    fn gl2_conjugacy_joins_inverse_pairs() {
        // R and L are GL(2, Z)-conjugate via the swap
        let p = conjugate_gl2(&SL2::r(), &SL2::l()).unwrap();
        assert_eq!(p.det(), int(-1));
        assert!(conjugate_gl2(&SL2::r(), &SL2::identity()).is_none());
    }
}
