//! Coefficient fields: the rationals and prime fields `F_p` with `p < 2^31`.
//!
//! Scalars do not carry their field. All arithmetic goes through a
//! [`CoefficientField`] value, which keeps the modulus in one place and lets a
//! polynomial reject operands from a different field up front.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The field `K` the polynomial ring is built over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CoefficientField {
    Rationals,
    Prime(u32),
}

/// A field element. `Modular` values are always reduced into `0..p`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scalar {
    Rational(BigRational),
    Modular(u32),
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl CoefficientField {
    /// Builds `F_p`, checking primality by trial division.
    pub fn prime(p: u64) -> Result<Self> {
        if p >= (1 << 31) || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(CoefficientField::Prime(p as u32))
    }

    pub fn modulus(&self) -> Option<u32> {
        match self {
            CoefficientField::Rationals => None,
            CoefficientField::Prime(p) => Some(*p),
        }
    }

    /// Parses `q`, `Q`, `p:7` or a bare prime such as `7`.
    pub fn parse(text: &str) -> Result<Self> {
        let t = text.trim();
        if t.eq_ignore_ascii_case("q") || t == "rationals" {
            return Ok(CoefficientField::Rationals);
        }
        let digits = t.strip_prefix("p:").unwrap_or(t);
        let p: u64 = digits
            .parse()
            .map_err(|_| Error::Precondition(format!("unrecognised field `{t}`")))?;
        Self::prime(p)
    }

    pub fn zero(&self) -> Scalar {
        match self {
            CoefficientField::Rationals => Scalar::Rational(BigRational::zero()),
            CoefficientField::Prime(_) => Scalar::Modular(0),
        }
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> Scalar {
        match self {
            CoefficientField::Rationals => Scalar::Rational(BigRational::from_integer(v.into())),
            CoefficientField::Prime(p) => Scalar::Modular(v.rem_euclid(*p as i64) as u32),
        }
    }

    fn big_mod(&self, v: &BigInt, p: u32) -> u32 {
        v.mod_floor(&BigInt::from(p)).to_u32().expect("residue fits in u32")
    }

    /// Maps a rational into this field. Fails with `bad-prime` when the
    /// denominator is not invertible mod p.
    pub fn from_rational(&self, q: &BigRational) -> Result<Scalar> {
        match self {
            CoefficientField::Rationals => Ok(Scalar::Rational(q.clone())),
            CoefficientField::Prime(p) => {
                let num = self.big_mod(q.numer(), *p);
                let den = self.big_mod(q.denom(), *p);
                if den == 0 {
                    return Err(Error::BadPrime(*p));
                }
                Ok(Scalar::Modular(mul_mod(num, inv_mod(den, *p), *p)))
            }
        }
    }

    pub fn is_zero(&self, a: &Scalar) -> bool {
        match a {
            Scalar::Rational(q) => q.is_zero(),
            Scalar::Modular(v) => *v == 0,
        }
    }

    pub fn is_one(&self, a: &Scalar) -> bool {
        match a {
            Scalar::Rational(q) => q.is_one(),
            Scalar::Modular(v) => *v == 1,
        }
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (_, Scalar::Rational(x), Scalar::Rational(y)) => Scalar::Rational(x + y),
            (CoefficientField::Prime(p), Scalar::Modular(x), Scalar::Modular(y)) => {
                Scalar::Modular(((*x as u64 + *y as u64) % *p as u64) as u32)
            }
            _ => panic!("scalar does not belong to {self}"),
        }
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        match (self, a) {
            (_, Scalar::Rational(x)) => Scalar::Rational(-x),
            (CoefficientField::Prime(p), Scalar::Modular(x)) => {
                Scalar::Modular(if *x == 0 { 0 } else { *p - *x })
            }
            _ => panic!("scalar does not belong to {self}"),
        }
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (_, Scalar::Rational(x), Scalar::Rational(y)) => Scalar::Rational(x * y),
            (CoefficientField::Prime(p), Scalar::Modular(x), Scalar::Modular(y)) => {
                Scalar::Modular(mul_mod(*x, *y, *p))
            }
            _ => panic!("scalar does not belong to {self}"),
        }
    }

    pub fn inv(&self, a: &Scalar) -> Result<Scalar> {
        if self.is_zero(a) {
            return Err(Error::DivisionByZero);
        }
        Ok(match (self, a) {
            (_, Scalar::Rational(x)) => Scalar::Rational(x.recip()),
            (CoefficientField::Prime(p), Scalar::Modular(x)) => Scalar::Modular(inv_mod(*x, *p)),
            _ => panic!("scalar does not belong to {self}"),
        })
    }

    pub fn pow(&self, a: &Scalar, mut e: u32) -> Scalar {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// Every element of `F_p` in increasing representative order. Empty for
    /// the rationals.
    pub fn elements(&self) -> Vec<Scalar> {
        match self {
            CoefficientField::Rationals => Vec::new(),
            CoefficientField::Prime(p) => (0..*p).map(Scalar::Modular).collect(),
        }
    }

    pub fn contains(&self, a: &Scalar) -> bool {
        match (self, a) {
            (CoefficientField::Rationals, Scalar::Rational(_)) => true,
            (CoefficientField::Prime(p), Scalar::Modular(v)) => v < p,
            _ => false,
        }
    }
}

impl fmt::Display for CoefficientField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoefficientField::Rationals => write!(f, "q"),
            CoefficientField::Prime(p) => write!(f, "p:{p}"),
        }
    }
}

impl Scalar {
    /// True when the scalar would be printed with a leading minus sign.
    pub fn is_negative(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_negative(),
            Scalar::Modular(_) => false,
        }
    }

    pub fn abs(&self) -> Scalar {
        match self {
            Scalar::Rational(q) => Scalar::Rational(q.abs()),
            Scalar::Modular(v) => Scalar::Modular(*v),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(q) => {
                if q.is_integer() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
            Scalar::Modular(v) => write!(f, "{v}"),
        }
    }
}

fn mul_mod(a: u32, b: u32, p: u32) -> u32 {
    ((a as u64 * b as u64) % p as u64) as u32
}

fn inv_mod(a: u32, p: u32) -> u32 {
    // Fermat: a^(p-2)
    let mut base = a as u64 % p as u64;
    let mut e = p as u64 - 2;
    let mut acc = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p as u64;
        }
        base = base * base % p as u64;
        e >>= 1;
    }
    acc as u32
}
