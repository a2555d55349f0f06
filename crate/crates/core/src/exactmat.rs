//! Exact integer linear algebra.
//!
//! Everything here works over arbitrary-precision integers: determinants,
//! characteristic polynomials, Hermite normal form with its transform,
//! saturated integer kernels, primitive vectors and their completion to
//! `SL(n, Z)`.
//!
//! Hermite normal form convention: row style, upper triangular (row echelon),
//! positive pivots, and every entry above a pivot reduced into `[0, pivot)`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::polyint::MonicIntPoly;

pub(crate) fn int(x: i64) -> BigInt {
    BigInt::from(x)
}

/// Dense integer matrix, row-major.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct IMat {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

/// Integer vector. Used for both row and column vectors.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct IVec(pub Vec<BigInt>);

impl IVec {
    pub fn from_i64(xs: &[i64]) -> Self {
        IVec(xs.iter().map(|&x| int(x)).collect())
    }

    pub fn zeros(n: usize) -> Self {
        IVec(vec![BigInt::zero(); n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    /// Non-negative gcd of the entries (0 for the zero vector).
    pub fn content(&self) -> BigInt {
        self.0.iter().fold(BigInt::zero(), |g, x| g.gcd(x))
    }

    pub fn is_primitive(&self) -> bool {
        self.content().is_one()
    }

    pub fn dot(&self, other: &IVec) -> BigInt {
        assert_eq!(self.len(), other.len(), "dot product length mismatch");
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn scale(&self, k: &BigInt) -> IVec {
        IVec(self.0.iter().map(|x| x * k).collect())
    }

    pub fn as_column(&self) -> IMat {
        IMat {
            rows: self.len(),
            cols: 1,
            data: self.0.clone(),
        }
    }

    pub fn as_row(&self) -> IMat {
        IMat {
            rows: 1,
            cols: self.len(),
            data: self.0.clone(),
        }
    }
}

impl Add for &IVec {
    type Output = IVec;
    fn add(self, rhs: &IVec) -> IVec {
        assert_eq!(self.len(), rhs.len());
        IVec(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &IVec {
    type Output = IVec;
    fn sub(self, rhs: &IVec) -> IVec {
        assert_eq!(self.len(), rhs.len());
        IVec(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl fmt::Display for IVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl FromStr for IVec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let entries = s
            .split(',')
            .map(|t| {
                let t = t.trim();
                t.parse::<BigInt>()
                    .map_err(|_| Error::Parse(format!("bad integer {t:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(IVec(entries))
    }
}

impl IMat {
    pub fn new(rows: usize, cols: usize, data: Vec<BigInt>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(IMat { rows, cols, data })
    }

    pub fn from_i64(rows: usize, cols: usize, data: &[i64]) -> Self {
        assert_eq!(data.len(), rows * cols, "entry count mismatch");
        IMat {
            rows,
            cols,
            data: data.iter().map(|&x| int(x)).collect(),
        }
    }

    /// Convenience constructor for literals in code and tests.
    pub fn from_rows<const C: usize>(rows: &[[i64; C]]) -> Self {
        let data = rows.iter().flat_map(|r| r.iter().map(|&x| int(x))).collect();
        IMat {
            rows: rows.len(),
            cols: C,
            data,
        }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        IMat {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IMat::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    pub fn from_columns(cols: &[IVec]) -> Result<Self> {
        let n = cols.first().map(IVec::len).unwrap_or(0);
        if cols.iter().any(|c| c.len() != n) {
            return Err(Error::Dimension("ragged columns".into()));
        }
        let mut m = IMat::zeros(n, cols.len());
        for (j, c) in cols.iter().enumerate() {
            for i in 0..n {
                m.set(i, j, c.0[i].clone());
            }
        }
        Ok(m)
    }

    pub fn from_row_vecs(rows: &[IVec]) -> Result<Self> {
        let n = rows.first().map(IVec::len).unwrap_or(0);
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        let data = rows.iter().flat_map(|r| r.0.iter().cloned()).collect();
        Ok(IMat {
            rows: rows.len(),
            cols: n,
            data,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> IVec {
        IVec(self.data[i * self.cols..(i + 1) * self.cols].to_vec())
    }

    pub fn col(&self, j: usize) -> IVec {
        IVec((0..self.rows).map(|i| self.get(i, j).clone()).collect())
    }

    pub fn transpose(&self) -> IMat {
        let mut t = IMat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let x = self.get(i, j);
                    if i == j {
                        x.is_one()
                    } else {
                        x.is_zero()
                    }
                })
            })
    }

    pub fn max_abs(&self) -> BigInt {
        self.data
            .iter()
            .map(|x| x.abs())
            .max()
            .unwrap_or_else(BigInt::zero)
    }

    pub fn trace(&self) -> BigInt {
        (0..self.rows.min(self.cols))
            .map(|i| self.get(i, i).clone())
            .sum()
    }

    pub fn scale(&self, k: &BigInt) -> IMat {
        IMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * k).collect(),
        }
    }

    pub fn checked_mul(&self, rhs: &IMat) -> Result<IMat> {
        if self.cols != rhs.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = IMat::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        out.data[i * rhs.cols + j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    /// `self * v` for a column vector.
    pub fn mul_vec(&self, v: &IVec) -> IVec {
        assert_eq!(self.cols, v.len(), "matrix-vector length mismatch");
        IVec((0..self.rows).map(|i| self.row(i).dot(v)).collect())
    }

    /// `v * self` for a row vector.
    pub fn vec_mul(&self, v: &IVec) -> IVec {
        assert_eq!(self.rows, v.len(), "vector-matrix length mismatch");
        IVec((0..self.cols).map(|j| self.col(j).dot(v)).collect())
    }

    /// Block diagonal `self ⊕ other`.
    pub fn direct_sum(&self, other: &IMat) -> IMat {
        let mut out = IMat::zeros(self.rows + other.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).clone());
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                out.set(self.rows + i, self.cols + j, other.get(i, j).clone());
            }
        }
        out
    }

    pub fn block(&self, r0: usize, c0: usize, nr: usize, nc: usize) -> IMat {
        assert!(r0 + nr <= self.rows && c0 + nc <= self.cols, "block out of range");
        let mut out = IMat::zeros(nr, nc);
        for i in 0..nr {
            for j in 0..nc {
                out.set(i, j, self.get(r0 + i, c0 + j).clone());
            }
        }
        out
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &IMat) {
        assert!(r0 + b.rows <= self.rows && c0 + b.cols <= self.cols);
        for i in 0..b.rows {
            for j in 0..b.cols {
                self.set(r0 + i, c0 + j, b.get(i, j).clone());
            }
        }
    }

    /// True when the matrix is block diagonal with square diagonal blocks of
    /// the given sizes.
    pub fn is_block_diagonal(&self, sizes: &[usize]) -> bool {
        if !self.is_square() || sizes.iter().sum::<usize>() != self.rows {
            return false;
        }
        let mut owner = Vec::with_capacity(self.rows);
        for (b, &s) in sizes.iter().enumerate() {
            owner.extend(std::iter::repeat(b).take(s));
        }
        (0..self.rows).all(|i| (0..self.cols).all(|j| owner[i] == owner[j] || self.get(i, j).is_zero()))
    }

    /// Diagonal blocks for the given sizes (no shape check).
    pub fn diagonal_blocks(&self, sizes: &[usize]) -> Vec<IMat> {
        let mut at = 0;
        sizes
            .iter()
            .map(|&s| {
                let b = self.block(at, at, s, s);
                at += s;
                b
            })
            .collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// row[dst] -= q * row[src]
    fn sub_row_multiple(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let t = q * &self.data[src * self.cols + j];
            self.data[dst * self.cols + j] -= t;
        }
    }

    fn negate_row(&mut self, r: usize) {
        for j in 0..self.cols {
            let v = -std::mem::take(&mut self.data[r * self.cols + j]);
            self.data[r * self.cols + j] = v;
        }
    }

    pub fn negate_col(&mut self, c: usize) {
        for i in 0..self.rows {
            let v = -std::mem::take(&mut self.data[i * self.cols + c]);
            self.data[i * self.cols + c] = v;
        }
    }
}

impl Mul for &IMat {
    type Output = IMat;
    fn mul(self, rhs: &IMat) -> IMat {
        self.checked_mul(rhs).expect("matrix product dimension mismatch")
    }
}

impl Add for &IMat {
    type Output = IMat;
    fn add(self, rhs: &IMat) -> IMat {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "matrix sum shape mismatch");
        IMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &IMat {
    type Output = IMat;
    fn sub(self, rhs: &IMat) -> IMat {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "matrix difference shape mismatch");
        IMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &IMat {
    type Output = IMat;
    fn neg(self) -> IMat {
        IMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| -x).collect(),
        }
    }
}

/// Matrix literal: rows separated by `;`, entries by `,`.
impl fmt::Display for IMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            if i > 0 {
                f.write_str(";")?;
            }
            write!(f, "{}", self.row(i))?;
        }
        Ok(())
    }
}

impl FromStr for IMat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::Parse("empty matrix literal".into()));
        }
        let rows = s
            .split(';')
            .map(|r| r.parse::<IVec>())
            .collect::<Result<Vec<_>>>()?;
        let cols = rows[0].len();
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Parse(format!("ragged matrix literal {s:?}")));
        }
        IMat::from_row_vecs(&rows)
    }
}

/// Square matrix of determinant exactly 1.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Unimodular(IMat);

/// Square matrix of determinant ±1.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct GlUnimodular(IMat);

impl Unimodular {
    pub fn new(m: IMat) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::Dimension(format!("{}x{} is not square", m.rows, m.cols)));
        }
        let d = det(&m)?;
        if !d.is_one() {
            return Err(Error::Domain(format!("determinant is {d}, expected 1")));
        }
        Ok(Unimodular(m))
    }

    pub fn identity(n: usize) -> Self {
        Unimodular(IMat::identity(n))
    }

    pub fn dim(&self) -> usize {
        self.0.rows
    }

    pub fn as_mat(&self) -> &IMat {
        &self.0
    }

    pub fn into_inner(self) -> IMat {
        self.0
    }

    /// Exact inverse; the adjugate, since the determinant is 1.
    pub fn inverse(&self) -> Unimodular {
        Unimodular(adjugate(&self.0))
    }

    /// `self⁻¹ · m · self`.
    pub fn conjugate(&self, m: &IMat) -> IMat {
        &(&self.inverse().0 * m) * &self.0
    }

    pub fn compose(&self, other: &Unimodular) -> Unimodular {
        Unimodular(&self.0 * &other.0)
    }

    pub fn direct_sum(&self, other: &Unimodular) -> Unimodular {
        Unimodular(self.0.direct_sum(&other.0))
    }
}

impl GlUnimodular {
    pub fn new(m: IMat) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::Dimension(format!("{}x{} is not square", m.rows, m.cols)));
        }
        let d = det(&m)?;
        if !d.abs().is_one() {
            return Err(Error::Domain(format!("determinant is {d}, expected ±1")));
        }
        Ok(GlUnimodular(m))
    }

    pub fn as_mat(&self) -> &IMat {
        &self.0
    }

    pub fn into_inner(self) -> IMat {
        self.0
    }

    pub fn det(&self) -> BigInt {
        det(&self.0).expect("square by construction")
    }

    pub fn inverse(&self) -> GlUnimodular {
        GlUnimodular(adjugate(&self.0).scale(&self.det()))
    }
}

impl fmt::Display for Unimodular {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl fmt::Display for GlUnimodular {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Exact determinant: cofactor expansion up to 3x3, Bareiss beyond.
pub fn det(m: &IMat) -> Result<BigInt> {
    if !m.is_square() {
        return Err(Error::Dimension(format!("determinant of {}x{} matrix", m.rows, m.cols)));
    }
    let g = |i, j| m.get(i, j);
    Ok(match m.rows {
        0 => BigInt::one(),
        1 => g(0, 0).clone(),
        2 => g(0, 0) * g(1, 1) - g(0, 1) * g(1, 0),
        3 => {
            g(0, 0) * (g(1, 1) * g(2, 2) - g(1, 2) * g(2, 1))
                - g(0, 1) * (g(1, 0) * g(2, 2) - g(1, 2) * g(2, 0))
                + g(0, 2) * (g(1, 0) * g(2, 1) - g(1, 1) * g(2, 0))
        }
        _ => bareiss(m),
    })
}

fn bareiss(m: &IMat) -> BigInt {
    let n = m.rows;
    let mut a = m.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a.get(k, k).is_zero() {
            match (k + 1..n).find(|&i| !a.get(i, k).is_zero()) {
                Some(i) => {
                    a.swap_rows(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (a.get(i, j) * a.get(k, k) - a.get(i, k) * a.get(k, j)) / &prev;
                a.set(i, j, v);
            }
        }
        prev = a.get(k, k).clone();
    }
    sign * a.get(n - 1, n - 1)
}

/// Characteristic polynomial `det(tI − M)` by Faddeev–LeVerrier; every
/// division is exact over the integers.
pub fn charpoly(m: &IMat) -> Result<MonicIntPoly> {
    if !m.is_square() {
        return Err(Error::Dimension(format!("characteristic polynomial of {}x{} matrix", m.rows, m.cols)));
    }
    let n = m.rows;
    if n == 0 {
        return Err(Error::Dimension("empty matrix".into()));
    }
    let mut coeffs = vec![BigInt::zero(); n + 1];
    coeffs[n] = BigInt::one();
    let mut mk = IMat::zeros(n, n);
    for k in 1..=n {
        let mut next = m * &mk;
        for i in 0..n {
            let v = next.get(i, i) + &coeffs[n - k + 1];
            next.set(i, i, v);
        }
        mk = next;
        let tr = (m * &mk).trace();
        coeffs[n - k] = -(tr / BigInt::from(k));
    }
    MonicIntPoly::new(coeffs)
}

/// Row-style Hermite normal form: returns `(H, U)` with `U·M = H`.
pub fn hnf(m: &IMat) -> (IMat, GlUnimodular) {
    let rows = m.rows;
    let mut h = m.clone();
    let mut u = IMat::identity(rows);
    let mut r = 0;
    for j in 0..m.cols {
        if r == rows {
            break;
        }
        loop {
            let pivot = (r..rows)
                .filter(|&i| !h.get(i, j).is_zero())
                .min_by(|&x, &y| h.get(x, j).abs().cmp(&h.get(y, j).abs()));
            let Some(p) = pivot else { break };
            h.swap_rows(r, p);
            u.swap_rows(r, p);
            let mut clean = true;
            for i in r + 1..rows {
                if h.get(i, j).is_zero() {
                    continue;
                }
                let q = h.get(i, j).div_floor(h.get(r, j));
                h.sub_row_multiple(i, r, &q);
                u.sub_row_multiple(i, r, &q);
                if !h.get(i, j).is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if h.get(r, j).is_zero() {
            continue;
        }
        if h.get(r, j).is_negative() {
            h.negate_row(r);
            u.negate_row(r);
        }
        for i in 0..r {
            let q = h.get(i, j).div_floor(h.get(r, j));
            h.sub_row_multiple(i, r, &q);
            u.sub_row_multiple(i, r, &q);
        }
        r += 1;
    }
    (h, GlUnimodular(u))
}

/// Number of nonzero rows of a row echelon form.
fn echelon_rank(h: &IMat) -> usize {
    (0..h.rows).filter(|&i| !h.row(i).is_zero()).count()
}

pub fn rank(m: &IMat) -> usize {
    echelon_rank(&hnf(m).0)
}

/// Basis of the integer kernel `{v : M v = 0}`. The lattice it spans is the
/// whole (saturated) kernel; the basis itself is returned in Hermite form.
pub fn kernel_basis(m: &IMat) -> Vec<IVec> {
    let (h, u) = hnf(&m.transpose());
    let r = echelon_rank(&h);
    let u = u.into_inner();
    let raw: Vec<IVec> = (r..u.rows).map(|i| u.row(i)).collect();
    if raw.is_empty() {
        return raw;
    }
    let basis = IMat::from_row_vecs(&raw).expect("rows share a length");
    let (tidy, _) = hnf(&basis);
    (0..tidy.rows).map(|i| tidy.row(i)).filter(|v| !v.is_zero()).collect()
}

/// `v / gcd(v)`. Dividing by the positive gcd keeps every sign.
pub fn primitive_part(v: &IVec) -> Result<IVec> {
    let g = v.content();
    if g.is_zero() {
        return Err(Error::Domain("primitive part of the zero vector".into()));
    }
    Ok(IVec(v.0.iter().map(|x| x / &g).collect()))
}

/// `R ∈ SL(n, Z)` with `R·v = e₁`, for a primitive `v`.
pub fn complete_primitive(v: &IVec) -> Result<Unimodular> {
    if !v.is_primitive() {
        return Err(Error::Domain(format!("({v}) is not primitive")));
    }
    let n = v.len();
    let (_, u) = hnf(&v.as_column());
    let mut u = u.into_inner();
    if det(&u)?.is_negative() {
        if n == 1 {
            return Err(Error::Domain("(-1) cannot be sent to e1 inside SL(1, Z)".into()));
        }
        u.negate_row(n - 1);
    }
    Unimodular::new(u)
}

/// Classical adjugate, `adj(M)·M = det(M)·I`.
pub fn adjugate(m: &IMat) -> IMat {
    assert!(m.is_square(), "adjugate of a non-square matrix");
    let n = m.rows;
    if n == 1 {
        return IMat::identity(1);
    }
    let mut adj = IMat::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let mut minor = IMat::zeros(n - 1, n - 1);
            let mut ri = 0;
            for r in (0..n).filter(|&r| r != j) {
                let mut ci = 0;
                for c in (0..n).filter(|&c| c != i) {
                    minor.set(ri, ci, m.get(r, c).clone());
                    ci += 1;
                }
                ri += 1;
            }
            let d = det(&minor).expect("square minor");
            adj.set(i, j, if (i + j) % 2 == 0 { d } else { -d });
        }
    }
    adj
}

/// `(adj(M), det M)`, so that `M⁻¹ = adj / det` exactly.
pub fn rational_inverse(m: &IMat) -> Result<(IMat, BigInt)> {
    let d = det(m)?;
    if d.is_zero() {
        return Err(Error::Singular);
    }
    Ok((adjugate(m), d))
}
