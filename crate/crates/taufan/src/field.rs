//! Ground fields for representation computations.
//!
//! The engine works over the rationals or over a prime field `F_p`. Both are
//! modelled by the [`Field`] trait using the "field object" pattern: the field
//! value carries whatever runtime data is needed (the prime `p`), and all
//! arithmetic goes through it. Matrices and representations store a copy of
//! their field so call sites stay readable.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::fmt;
use std::hash::Hash;

use crate::error::{Result, TaufanError};

/// Runtime description of a ground field, as written in algebra files.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub enum FieldSpec {
    Rationals,
    Prime(u64),
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "q"),
            FieldSpec::Prime(p) => write!(f, "f{p}"),
        }
    }
}

impl FieldSpec {
    pub fn parse(s: &str) -> Result<FieldSpec> {
        if s == "q" || s == "Q" {
            return Ok(FieldSpec::Rationals);
        }
        if let Some(ps) = s.strip_prefix('f').or_else(|| s.strip_prefix('F')) {
            let p: u64 = ps
                .parse()
                .map_err(|_| TaufanError::parse(0, 0, format!("bad field spec `{s}`")))?;
            if !is_prime(p) {
                return Err(TaufanError::parse(0, 0, format!("{p} is not prime")));
            }
            return Ok(FieldSpec::Prime(p));
        }
        Err(TaufanError::parse(0, 0, format!("bad field spec `{s}`")))
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Exact field arithmetic over a runtime-chosen field.
pub trait Field: Clone + PartialEq + Eq + fmt::Debug {
    type Elem: Clone + PartialEq + Eq + Hash + fmt::Debug;

    fn spec(&self) -> FieldSpec;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// None exactly when `a` is zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn from_int(&self, n: i64) -> Self::Elem;
    /// Embed num/den; fails over F_p when p divides den.
    fn from_ratio(&self, num: i64, den: i64) -> Result<Self::Elem>;
    /// All field elements, when the field is finite.
    fn enumerate(&self) -> Option<Vec<Self::Elem>>;
    fn display(&self, a: &Self::Elem) -> String;

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let bi = self.inv(b).expect("division by zero");
        self.mul(a, &bi)
    }
    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }
}

/// The field of rational numbers with arbitrary-precision arithmetic.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn spec(&self) -> FieldSpec {
        FieldSpec::Rationals
    }
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }
    fn from_int(&self, n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }
    fn from_ratio(&self, num: i64, den: i64) -> Result<BigRational> {
        if den == 0 {
            return Err(TaufanError::parse(0, 0, "zero denominator"));
        }
        Ok(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }
    fn enumerate(&self) -> Option<Vec<BigRational>> {
        None
    }
    fn display(&self, a: &BigRational) -> String {
        if a.denom().is_one() {
            a.numer().to_string()
        } else {
            format!("{}/{}", a.numer(), a.denom())
        }
    }
}

/// The prime field F_p for a small prime p; elements are canonical residues.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<PrimeField> {
        if !is_prime(p) {
            return Err(TaufanError::parse(0, 0, format!("{p} is not prime")));
        }
        Ok(PrimeField { p })
    }
    pub fn order(&self) -> u64 {
        self.p
    }
}

impl Field for PrimeField {
    type Elem = u64;

    fn spec(&self) -> FieldSpec {
        FieldSpec::Prime(self.p)
    }
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.p
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.p
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        (a + self.p - b) % self.p
    }
    fn neg(&self, a: &u64) -> u64 {
        (self.p - a) % self.p
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        (a * b) % self.p
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        if *a == 0 {
            return None;
        }
        // Fermat: a^(p-2) mod p.
        let mut base = *a % self.p;
        let mut exp = self.p - 2;
        let mut acc = 1u64;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % self.p;
            }
            base = base * base % self.p;
            exp >>= 1;
        }
        Some(acc)
    }
    fn from_int(&self, n: i64) -> u64 {
        let p = self.p as i64;
        (((n % p) + p) % p) as u64
    }
    fn from_ratio(&self, num: i64, den: i64) -> Result<u64> {
        let d = self.from_int(den);
        let di = self.inv(&d).ok_or_else(|| {
            TaufanError::parse(0, 0, format!("denominator {den} not invertible mod {}", self.p))
        })?;
        Ok(self.mul(&self.from_int(num), &di))
    }
    fn enumerate(&self) -> Option<Vec<u64>> {
        Some((0..self.p).collect())
    }
    fn display(&self, a: &u64) -> String {
        a.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_inverses() {
        let f5 = PrimeField::new(5).unwrap();
        for a in 1..5 {
            let ai = f5.inv(&a).unwrap();
            assert_eq!(f5.mul(&a, &ai), 1);
        }
        assert_eq!(f5.inv(&0), None);
        assert!(PrimeField::new(6).is_err());
    }

    #[test]
    fn rational_embedding() {
        let q = Rationals;
        let half = q.from_ratio(1, 2).unwrap();
        assert_eq!(q.add(&half, &half), q.one());
        let f2 = PrimeField::new(2).unwrap();
        assert!(f2.from_ratio(1, 2).is_err());
        let f3 = PrimeField::new(3).unwrap();
        assert_eq!(f3.from_ratio(1, 2).unwrap(), 2); // 1/2 = 2 mod 3
    }

    #[test]
    fn field_spec_parse() {
        assert_eq!(FieldSpec::parse("q").unwrap(), FieldSpec::Rationals);
        assert_eq!(FieldSpec::parse("f7").unwrap(), FieldSpec::Prime(7));
        assert!(FieldSpec::parse("f8").is_err());
        assert!(FieldSpec::parse("r").is_err());
    }
}
