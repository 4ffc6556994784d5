//! Arithmetic in a prime field GF(p) with `2 < p < 2^31`.
//!
//! Residues are stored as `u64` in `[0, p)`; every product of two residues
//! fits in 64 bits, so reduction is a single `%`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut k = 3;
    while k * k <= n {
        if n.is_multiple_of(k) {
            return false;
        }
        k += 2;
    }
    true
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if p <= 2 || p >= (1 << 31) || !is_prime(p) {
            return Err(Error::InvalidModulus(p));
        }
        Ok(PrimeField { p })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn zero(&self) -> Fp {
        Fp { value: 0, field: *self }
    }

    pub fn one(&self) -> Fp {
        Fp { value: 1, field: *self }
    }

    /// Wraps an arbitrary integer, reducing it into `[0, p)`.
    pub fn elem(&self, v: i64) -> Fp {
        Fp { value: self.reduce(v), field: *self }
    }

    pub fn from_residue(&self, v: u64) -> Fp {
        Fp { value: v % self.p, field: *self }
    }

    pub fn reduce(&self, v: i64) -> u64 {
        v.rem_euclid(self.p as i64) as u64
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        a * b % self.p
    }

    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    pub fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1;
        base %= self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: u64) -> Result<u64> {
        if a.is_multiple_of(self.p) {
            return Err(Error::DivisionByZero);
        }
        Ok(self.pow(a, self.p - 2))
    }

    /// Parses a decimal integer literal (optionally signed) into the field.
    ///
    /// Besides ASCII `-`, the Unicode minus sign `−` is accepted.
    pub fn parse(&self, text: &str) -> Result<Fp> {
        let trimmed = text.trim();
        let (negative, digits) = if let Some(rest) = trimmed.strip_prefix('-') {
            (true, rest)
        } else if let Some(rest) = trimmed.strip_prefix('\u{2212}') {
            (true, rest)
        } else if let Some(rest) = trimmed.strip_prefix('+') {
            (false, rest)
        } else {
            (false, trimmed)
        };
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(Error::Parse(text.to_string()));
        }
        // Reduce digit by digit so arbitrarily long literals are fine.
        let mut r = 0u64;
        for b in digits.bytes() {
            r = (r * 10 + u64::from(b - b'0')) % self.p;
        }
        let value = if negative { self.neg(r) } else { r };
        Ok(Fp { value, field: *self })
    }
}

/// An element of GF(p), carrying its field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fp {
    value: u64,
    field: PrimeField,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Sub,
    Mul,
    Div,
    Neg,
    Inv,
}

impl Fp {
    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    pub fn inv(&self) -> Result<Fp> {
        Ok(Fp { value: self.field.inv(self.value)?, field: self.field })
    }

    pub fn pow(&self, exp: u64) -> Fp {
        Fp { value: self.field.pow(self.value, exp), field: self.field }
    }

    /// `self^exp` for a possibly negative exponent.
    pub fn powi(&self, exp: i64) -> Result<Fp> {
        if exp >= 0 {
            Ok(self.pow(exp as u64))
        } else {
            Ok(self.inv()?.pow(exp.unsigned_abs()))
        }
    }

    pub fn div(&self, other: Fp) -> Result<Fp> {
        field_arith(*self, other, FieldOp::Div)
    }

    fn check_same(&self, other: &Fp) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field.p, other.field.p));
        }
        Ok(())
    }
}

/// Checked binary/unary arithmetic. For the unary ops `Neg` and `Inv` the
/// second operand only participates in the field check.
pub fn field_arith(a: Fp, b: Fp, op: FieldOp) -> Result<Fp> {
    a.check_same(&b)?;
    let f = a.field;
    let value = match op {
        FieldOp::Add => f.add(a.value, b.value),
        FieldOp::Sub => f.sub(a.value, b.value),
        FieldOp::Mul => f.mul(a.value, b.value),
        FieldOp::Div => f.mul(a.value, f.inv(b.value)?),
        FieldOp::Neg => f.neg(a.value),
        FieldOp::Inv => f.inv(a.value)?,
    };
    Ok(Fp { value, field: f })
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Serialize for Fp {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_u64(self.value)
    }
}

// The operator impls panic on mixed fields; use `field_arith` for a checked path.
macro_rules! binop {
    ($trait:ident, $method:ident, $op:expr) => {
        impl $trait for Fp {
            type Output = Fp;
            fn $method(self, rhs: Fp) -> Fp {
                match field_arith(self, rhs, $op) {
                    Ok(v) => v,
                    Err(e) => panic!("{e}"),
                }
            }
        }
    };
}

binop!(Add, add, FieldOp::Add);
binop!(Sub, sub, FieldOp::Sub);
binop!(Mul, mul, FieldOp::Mul);

impl Neg for Fp {
    type Output = Fp;
    fn neg(self) -> Fp {
        Fp { value: self.field.neg(self.value), field: self.field }
    }
}
