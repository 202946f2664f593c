//! Exact scalar fields.
//!
//! Two implementations of [`Field`] are provided: [`Rational`], an exact
//! rational that stays on machine integers until an operation would overflow,
//! and [`Fp`], the prime field with `P` elements (`P` an odd prime).

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{CheckedAdd, CheckedMul, CheckedSub, One, Signed, ToPrimitive, Zero};

use crate::error::{OchaError, Result};

/// Which field a scalar type lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldKind {
    Rational,
    Prime(u64),
}

impl fmt::Display for FieldKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldKind::Rational => write!(f, "rational"),
            FieldKind::Prime(p) => write!(f, "prime {p}"),
        }
    }
}

/// An exact field of characteristic other than two.
pub trait Field:
    Clone
    + PartialEq
    + Eq
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(n: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn inv(&self) -> Result<Self>;
    fn kind() -> FieldKind;

    /// Parses the canonical text form written by `Display`.
    fn parse_canonical(s: &str) -> std::result::Result<Self, String>;

    /// `+1` or `-1`.
    fn sign(odd: bool) -> Self {
        if odd {
            -Self::one()
        } else {
            Self::one()
        }
    }

    fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.clone() * other.inv()?)
    }

    /// `self += a * b`.
    fn add_mul(&mut self, a: &Self, b: &Self) {
        let prod = a.clone() * b.clone();
        let cur = std::mem::replace(self, Self::zero());
        *self = cur + prod;
    }

    /// Negates in place when `odd` holds.
    fn neg_if(self, odd: bool) -> Self {
        if odd {
            -self
        } else {
            self
        }
    }
}

// ---------------------------------------------------------------------------
// Rationals

/// Exact rational number.
///
/// Values that fit in `i64` numerator and denominator are kept in the
/// `Small` variant; anything larger is promoted to a big rational and
/// demoted again as soon as it fits.  Equality is structural, which is sound
/// because both variants are always reduced and demotion is eager.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Rational {
    Small(Ratio<i64>),
    Big(BigRational),
}

impl Rational {
    pub fn new(numer: i64, denom: i64) -> Result<Self> {
        if denom == 0 {
            return Err(OchaError::DivisionByZero);
        }
        if numer == i64::MIN || denom == i64::MIN {
            let big = BigRational::new(BigInt::from(numer), BigInt::from(denom));
            return Ok(Rational::from_big(big));
        }
        Ok(Rational::Small(Ratio::new(numer, denom)))
    }

    pub fn to_big(&self) -> BigRational {
        match self {
            Rational::Small(r) => {
                BigRational::new_raw(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
            }
            Rational::Big(b) => b.clone(),
        }
    }

    pub fn from_big(b: BigRational) -> Self {
        match (b.numer().to_i64(), b.denom().to_i64()) {
            (Some(n), Some(d)) if n != i64::MIN && d != i64::MIN => {
                Rational::Small(Ratio::new_raw(n, d))
            }
            _ => Rational::Big(b),
        }
    }

    pub fn numer_string(&self) -> String {
        match self {
            Rational::Small(r) => r.numer().to_string(),
            Rational::Big(b) => b.numer().to_string(),
        }
    }
}

fn small_pair(a: &Rational, b: &Rational) -> Option<(Ratio<i64>, Ratio<i64>)> {
    match (a, b) {
        (Rational::Small(x), Rational::Small(y)) => Some((*x, *y)),
        _ => None,
    }
}

impl Add for Rational {
    type Output = Rational;
    fn add(self, rhs: Rational) -> Rational {
        if let Some((x, y)) = small_pair(&self, &rhs) {
            if let Some(s) = x.checked_add(&y) {
                return Rational::Small(s);
            }
        }
        Rational::from_big(self.to_big() + rhs.to_big())
    }
}

impl Sub for Rational {
    type Output = Rational;
    fn sub(self, rhs: Rational) -> Rational {
        if let Some((x, y)) = small_pair(&self, &rhs) {
            if let Some(s) = x.checked_sub(&y) {
                return Rational::Small(s);
            }
        }
        Rational::from_big(self.to_big() - rhs.to_big())
    }
}

impl Mul for Rational {
    type Output = Rational;
    fn mul(self, rhs: Rational) -> Rational {
        if let Some((x, y)) = small_pair(&self, &rhs) {
            if let Some(s) = x.checked_mul(&y) {
                return Rational::Small(s);
            }
        }
        Rational::from_big(self.to_big() * rhs.to_big())
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        match self {
            Rational::Small(r) if *r.numer() != i64::MIN => Rational::Small(-r),
            other => Rational::from_big(-other.to_big()),
        }
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (n, d) = match self {
            Rational::Small(r) => (r.numer().to_string(), *r.denom() == 1),
            Rational::Big(b) => (b.numer().to_string(), b.denom().is_one()),
        };
        if d {
            write!(f, "{n}")
        } else {
            let den = match self {
                Rational::Small(r) => r.denom().to_string(),
                Rational::Big(b) => b.denom().to_string(),
            };
            write!(f, "{n}/{den}")
        }
    }
}

fn canonical_digits(s: &str) -> bool {
    !s.is_empty() && s.bytes().all(|c| c.is_ascii_digit()) && (s == "0" || !s.starts_with('0'))
}

impl Field for Rational {
    fn zero() -> Self {
        Rational::Small(Ratio::from_integer(0))
    }
    fn one() -> Self {
        Rational::Small(Ratio::from_integer(1))
    }
    fn from_i64(n: i64) -> Self {
        if n == i64::MIN {
            return Rational::Big(BigRational::from_integer(BigInt::from(n)));
        }
        Rational::Small(Ratio::from_integer(n))
    }
    fn is_zero(&self) -> bool {
        match self {
            Rational::Small(r) => r.is_zero(),
            Rational::Big(b) => b.is_zero(),
        }
    }
    fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(OchaError::DivisionByZero);
        }
        Ok(match self {
            Rational::Small(r) if *r.numer() != i64::MIN => Rational::Small(r.recip()),
            other => Rational::from_big(other.to_big().recip()),
        })
    }
    fn kind() -> FieldKind {
        FieldKind::Rational
    }

    fn parse_canonical(s: &str) -> std::result::Result<Self, String> {
        let (neg, body) = match s.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, s),
        };
        let (num, den) = match body.split_once('/') {
            Some((n, d)) => (n, Some(d)),
            None => (body, None),
        };
        if !canonical_digits(num) {
            return Err(format!("malformed scalar '{s}'"));
        }
        if neg && num == "0" {
            return Err(format!("negative zero '{s}' is not canonical"));
        }
        let mut n = BigInt::from_str(num).map_err(|e| e.to_string())?;
        if neg {
            n = -n;
        }
        let d = match den {
            None => BigInt::one(),
            Some(d) => {
                if !canonical_digits(d) {
                    return Err(format!("malformed denominator in '{s}'"));
                }
                let d = BigInt::from_str(d).map_err(|e| e.to_string())?;
                if d <= BigInt::one() {
                    return Err(format!("denominator of '{s}' must exceed 1"));
                }
                if num == "0" {
                    return Err(format!("zero with a denominator '{s}' is not canonical"));
                }
                d
            }
        };
        if !n.abs().gcd(&d).is_one() {
            return Err(format!("scalar '{s}' is not reduced"));
        }
        Ok(Rational::from_big(BigRational::new_raw(n, d)))
    }

    fn add_mul(&mut self, a: &Self, b: &Self) {
        if let (Rational::Small(s), Rational::Small(x), Rational::Small(y)) = (&*self, a, b) {
            if let Some(p) = x.checked_mul(y) {
                if let Some(t) = s.checked_add(&p) {
                    *self = Rational::Small(t);
                    return;
                }
            }
        }
        let cur = std::mem::replace(self, Rational::zero());
        *self = cur + a.clone() * b.clone();
    }
}

// ---------------------------------------------------------------------------
// Prime fields

/// The prime field with `P` elements.  `P` must be an odd prime below 2^62.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Fp<const P: u64>(u64);

impl<const P: u64> Fp<P> {
    const VALID: () = assert!(P > 2 && P < (1u64 << 62), "modulus must be an odd prime below 2^62");

    pub fn new(v: i64) -> Self {
        #[allow(clippy::let_unit_value)]
        let _ = Self::VALID;
        Fp(v.rem_euclid(P as i64) as u64)
    }

    pub fn residue(&self) -> u64 {
        self.0
    }
}

impl<const P: u64> Add for Fp<P> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let s = self.0 + rhs.0;
        Fp(if s >= P { s - P } else { s })
    }
}

impl<const P: u64> Sub for Fp<P> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Fp(if self.0 >= rhs.0 { self.0 - rhs.0 } else { self.0 + P - rhs.0 })
    }
}

impl<const P: u64> Mul for Fp<P> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Fp(((self.0 as u128 * rhs.0 as u128) % P as u128) as u64)
    }
}

impl<const P: u64> Neg for Fp<P> {
    type Output = Self;
    fn neg(self) -> Self {
        Fp(if self.0 == 0 { 0 } else { P - self.0 })
    }
}

impl<const P: u64> fmt::Display for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u64> Field for Fp<P> {
    fn zero() -> Self {
        Fp::new(0)
    }
    fn one() -> Self {
        Fp::new(1)
    }
    fn from_i64(n: i64) -> Self {
        Fp::new(n)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
    fn inv(&self) -> Result<Self> {
        // extended Euclid; also rejects non-units if P is not prime
        let (mut r0, mut r1) = (P as i128, self.0 as i128);
        let (mut t0, mut t1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        if r0 != 1 {
            return Err(OchaError::DivisionByZero);
        }
        Ok(Fp(t0.rem_euclid(P as i128) as u64))
    }
    fn kind() -> FieldKind {
        FieldKind::Prime(P)
    }
    fn parse_canonical(s: &str) -> std::result::Result<Self, String> {
        if !canonical_digits(s) {
            return Err(format!("malformed residue '{s}'"));
        }
        let v: u64 = s.parse().map_err(|_| format!("residue '{s}' out of range"))?;
        if v >= P {
            return Err(format!("residue '{s}' is not reduced modulo {P}"));
        }
        Ok(Fp(v))
    }
}

/// Returns `n` as a field element, rejecting characteristics dividing it.
pub fn checked_count<F: Field>(n: u64) -> Result<F> {
    let v = F::from_i64(n as i64);
    if v.is_zero() {
        let p = match F::kind() {
            FieldKind::Prime(p) => p,
            FieldKind::Rational => 0,
        };
        return Err(OchaError::CharacteristicDivides { p, n });
    }
    Ok(v)
}
