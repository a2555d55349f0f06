//! Monic integer polynomials of small degree.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactmat::{IMat, Unimodular};

/// Monic polynomial with integer coefficients, stored lowest degree first.
/// The stored vector always ends in the leading coefficient 1.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct MonicIntPoly {
    coeffs: Vec<BigInt>,
}

/// Root pattern of a monic cubic with constant term −1.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, serde::Serialize)]
pub enum Trichotomy {
    Irreducible,
    RootMinusOneOnly,
    RootOne,
}

impl MonicIntPoly {
    /// `coeffs` lowest degree first, including the leading 1.
    pub fn new(coeffs: Vec<BigInt>) -> Result<Self> {
        if coeffs.len() < 2 {
            return Err(Error::Domain("a monic polynomial needs degree at least 1".into()));
        }
        if !coeffs.last().is_some_and(One::is_one) {
            return Err(Error::Domain("leading coefficient must be 1".into()));
        }
        Ok(MonicIntPoly { coeffs })
    }

    /// Coefficients below the leading term, lowest degree first.
    pub fn from_lower(lower: &[i64]) -> Self {
        let mut coeffs: Vec<BigInt> = lower.iter().map(|&c| BigInt::from(c)).collect();
        coeffs.push(BigInt::one());
        MonicIntPoly { coeffs }
    }

    /// `∏ (t − rᵢ)`.
    pub fn from_roots(roots: &[i64]) -> Self {
        let mut p = MonicIntPoly { coeffs: vec![BigInt::one()] };
        for &r in roots {
            p = p.mul_linear(&BigInt::from(r));
        }
        p
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_i64(&self, x: i64) -> BigInt {
        self.eval(&BigInt::from(x))
    }

    /// `(t − r)·self`.
    pub fn mul_linear(&self, r: &BigInt) -> MonicIntPoly {
        let n = self.coeffs.len();
        let mut out = vec![BigInt::zero(); n + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i + 1] += c;
            out[i] -= r * c;
        }
        MonicIntPoly { coeffs: out }
    }

    pub fn mul(&self, other: &MonicIntPoly) -> MonicIntPoly {
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        MonicIntPoly { coeffs: out }
    }
}

/// Prints `c0,c1,...,1`.
impl fmt::Display for MonicIntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

pub fn eval(f: &MonicIntPoly, x: &BigInt) -> BigInt {
    f.eval(x)
}

/// Any integer root of a monic cubic with constant −1 divides −1, so the
/// root tests at ±1 decide reducibility.
pub fn cubic_case(f: &MonicIntPoly) -> Result<Trichotomy> {
    if f.degree() != 3 {
        return Err(Error::Domain(format!("expected a cubic, got degree {}", f.degree())));
    }
    if f.coeff(0) != BigInt::from(-1) {
        return Err(Error::Domain(format!("constant term is {}, expected -1", f.coeff(0))));
    }
    Ok(if f.eval_i64(1).is_zero() {
        Trichotomy::RootOne
    } else if f.eval_i64(-1).is_zero() {
        Trichotomy::RootMinusOneOnly
    } else {
        Trichotomy::Irreducible
    })
}

/// `f / (t − r)` by synthetic division.
pub fn deflate(f: &MonicIntPoly, r: &BigInt) -> Result<MonicIntPoly> {
    let n = f.degree();
    if n < 2 {
        return Err(Error::Domain("deflating a linear polynomial leaves no monic quotient".into()));
    }
    let mut q = vec![BigInt::zero(); n];
    let mut carry = BigInt::zero();
    for i in (1..=n).rev() {
        carry = &f.coeffs[i] + r * &carry;
        q[i - 1] = carry.clone();
    }
    let remainder = &f.coeffs[0] + r * &carry;
    if !remainder.is_zero() {
        return Err(Error::Domain(format!("{r} is not a root (remainder {remainder})")));
    }
    MonicIntPoly::new(q)
}

/// Companion matrix: ones on the subdiagonal, last column `−c₀, …, −c_{n−1}`.
pub fn companion(f: &MonicIntPoly) -> Result<Unimodular> {
    let n = f.degree();
    let expected = if n % 2 == 0 { BigInt::one() } else { -BigInt::one() };
    if f.coeff(0) != expected {
        return Err(Error::Domain(format!(
            "constant term {} gives determinant {}, not 1",
            f.coeff(0),
            if n % 2 == 0 { f.coeff(0) } else { -f.coeff(0) }
        )));
    }
    let mut m = IMat::zeros(n, n);
    for i in 1..n {
        m.set(i, i - 1, BigInt::one());
    }
    for i in 0..n {
        m.set(i, n - 1, -f.coeff(i));
    }
    Unimodular::new(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmat::charpoly;

    fn p(lower: &[i64]) -> MonicIntPoly {
        MonicIntPoly::from_lower(lower)
    }

    #[test]
    fn eval_examples() {
        assert!(MonicIntPoly::from_roots(&[1, 1, 1]).eval_i64(1).is_zero());
        assert_eq!(p(&[-1, -1, 0]).eval_i64(1), BigInt::from(-1));
        assert_eq!(p(&[-1, -1, 0]).eval_i64(-1), BigInt::from(-1));
    }

    #[test]
    fn cubic_case_examples() {
        assert_eq!(cubic_case(&p(&[-1, -1, 0])).unwrap(), Trichotomy::Irreducible);
        assert_eq!(cubic_case(&p(&[-1, -2, 0])).unwrap(), Trichotomy::RootMinusOneOnly);
        assert_eq!(cubic_case(&MonicIntPoly::from_roots(&[1, 1, 1])).unwrap(), Trichotomy::RootOne);
        // both ±1 are roots: routed to RootOne
        assert_eq!(cubic_case(&MonicIntPoly::from_roots(&[1, -1, -1])).unwrap(), Trichotomy::RootOne);
        assert!(cubic_case(&p(&[1, 0])).is_err());
        assert!(cubic_case(&p(&[1, 0, 0])).is_err());
    }

    #[test]
    fn deflate_examples() {
        let cube = MonicIntPoly::from_roots(&[1, 1, 1]);
        assert_eq!(deflate(&cube, &BigInt::one()).unwrap(), MonicIntPoly::from_roots(&[1, 1]));
        assert_eq!(deflate(&p(&[-1, -2, 0]), &BigInt::from(-1)).unwrap(), p(&[-1, -1]));
        assert_eq!(deflate(&p(&[-1, 5, -5]), &BigInt::one()).unwrap(), p(&[1, -4]));
        assert!(deflate(&p(&[-1, -1, 0]), &BigInt::one()).is_err());
    }

    #[test]
    fn companion_examples() {
        let c = companion(&p(&[-1, -1, 0])).unwrap();
        assert_eq!(c.as_mat(), &IMat::from_rows(&[[0, 0, 1], [1, 0, 1], [0, 1, 0]]));
        assert_eq!(companion(&p(&[-1])).unwrap().as_mat(), &IMat::from_rows(&[[1]]));
        assert_eq!(companion(&p(&[1, -3])).unwrap().as_mat(), &IMat::from_rows(&[[0, -1], [1, 3]]));
        assert!(companion(&p(&[2, 0])).is_err());
        assert_eq!(charpoly(c.as_mat()).unwrap(), p(&[-1, -1, 0]));
    }

    #[test]
    fn display_is_lowest_first() {
        assert_eq!(p(&[-1, -1, 0]).to_string(), "-1,-1,0,1");
    }
}
