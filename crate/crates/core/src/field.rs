//! Exact scalar arithmetic over prime fields `F_p` and over the rationals.
//!
//! Algorithms in this crate are generic over [`Field`]. The two concrete
//! fields are [`Fp`] (residues stored as `u32`) and [`Rationals`]
//! (arbitrary-precision reduced fractions). [`Scalar`] is a dynamically
//! typed value carrying its [`FieldSpec`], used at API boundaries where the
//! field is only known at run time.

use std::fmt;
use std::hash::Hash;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A field of characteristic `p` (prime) or `0` (the rationals).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FieldSpec {
    characteristic: u32,
}

impl FieldSpec {
    pub fn new(characteristic: u32) -> Result<Self> {
        if characteristic == 0 || is_prime(characteristic) {
            Ok(Self { characteristic })
        } else {
            Err(Error::InvalidField(characteristic))
        }
    }

    pub fn rationals() -> Self {
        Self { characteristic: 0 }
    }

    pub fn characteristic(&self) -> u32 {
        self.characteristic
    }

    pub fn is_finite(&self) -> bool {
        self.characteristic != 0
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.characteristic {
            0 => write!(f, "Q"),
            p => write!(f, "F_{p}"),
        }
    }
}

/// Trial division; characteristics in this crate stay small.
pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Operations shared by every exact field.
pub trait Field: Clone + fmt::Debug + PartialEq + Eq + Hash + Send + Sync + 'static {
    type Elem: Clone + PartialEq + Eq + Hash + Ord + fmt::Debug + Send + Sync;

    fn spec(&self) -> FieldSpec;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, v: i64) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Result<Self::Elem>;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    /// Textual form used by the algebra file format.
    fn render(&self, a: &Self::Elem) -> String;
    fn parse(&self, s: &str) -> Option<Self::Elem>;
    /// All elements in a fixed order, or `None` for an infinite field.
    fn elements(&self) -> Option<Vec<Self::Elem>>;

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    /// `a += b * c`
    fn mul_add_assign(&self, a: &mut Self::Elem, b: &Self::Elem, c: &Self::Elem) {
        let t = self.mul(b, c);
        *a = self.add(a, &t);
    }

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem> {
        Ok(self.mul(a, &self.inv(b)?))
    }
}

/// The prime field `Z/pZ`. Elements are canonical residues in `[0, p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fp {
    p: u32,
}

impl Fp {
    pub fn new(p: u32) -> Result<Self> {
        if is_prime(p) {
            Ok(Self { p })
        } else {
            Err(Error::InvalidField(p))
        }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn pow(&self, a: u32, mut e: u64) -> u32 {
        let p = self.p as u64;
        let mut base = a as u64 % p;
        let mut acc = 1u64 % p;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % p;
            }
            base = base * base % p;
            e >>= 1;
        }
        acc as u32
    }

    /// Euler's criterion. Undefined (and rejected) in characteristic 2.
    pub fn is_square(&self, a: u32) -> Result<bool> {
        if self.p == 2 {
            return Err(Error::UnsupportedField(
                "square test needs an odd characteristic".into(),
            ));
        }
        let r = self.pow(a, ((self.p - 1) / 2) as u64);
        Ok(r == 0 || r == 1)
    }

    /// The least quadratic non-residue; `None` in characteristic 2.
    pub fn least_non_square(&self) -> Option<u32> {
        if self.p == 2 {
            return None;
        }
        (1..self.p).find(|&a| !self.is_square(a).unwrap_or(true))
    }
}

impl Field for Fp {
    type Elem = u32;

    fn spec(&self) -> FieldSpec {
        FieldSpec {
            characteristic: self.p,
        }
    }

    #[inline]
    fn zero(&self) -> u32 {
        0
    }

    #[inline]
    fn one(&self) -> u32 {
        1 % self.p
    }

    fn from_i64(&self, v: i64) -> u32 {
        v.rem_euclid(self.p as i64) as u32
    }

    #[inline]
    fn add(&self, a: &u32, b: &u32) -> u32 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    fn sub(&self, a: &u32, b: &u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    fn mul(&self, a: &u32, b: &u32) -> u32 {
        ((*a as u64 * *b as u64) % self.p as u64) as u32
    }

    #[inline]
    fn neg(&self, a: &u32) -> u32 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }

    fn inv(&self, a: &u32) -> Result<u32> {
        if *a == 0 {
            return Err(Error::DivisionByZero);
        }
        // extended Euclid
        let (mut t, mut new_t) = (0i64, 1i64);
        let (mut r, mut new_r) = (self.p as i64, *a as i64);
        while new_r != 0 {
            let q = r / new_r;
            (t, new_t) = (new_t, t - q * new_t);
            (r, new_r) = (new_r, r - q * new_r);
        }
        Ok(t.rem_euclid(self.p as i64) as u32)
    }

    #[inline]
    fn is_zero(&self, a: &u32) -> bool {
        *a == 0
    }

    fn render(&self, a: &u32) -> String {
        a.to_string()
    }

    fn parse(&self, s: &str) -> Option<u32> {
        let v: u64 = s.parse().ok()?;
        (v < self.p as u64).then_some(v as u32)
    }

    fn elements(&self) -> Option<Vec<u32>> {
        Some((0..self.p).collect())
    }
}

/// The rational numbers with exact big-integer fractions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn spec(&self) -> FieldSpec {
        FieldSpec::rationals()
    }

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }

    fn one(&self) -> BigRational {
        BigRational::one()
    }

    fn from_i64(&self, v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }

    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }

    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }

    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }

    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }

    fn inv(&self, a: &BigRational) -> Result<BigRational> {
        if a.is_zero() {
            Err(Error::DivisionByZero)
        } else {
            Ok(a.recip())
        }
    }

    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }

    fn render(&self, a: &BigRational) -> String {
        if a.denom().is_one() {
            a.numer().to_string()
        } else {
            format!("{}/{}", a.numer(), a.denom())
        }
    }

    fn parse(&self, s: &str) -> Option<BigRational> {
        match s.split_once('/') {
            None => s.parse::<BigInt>().ok().map(BigRational::from_integer),
            Some((n, d)) => {
                let n: BigInt = n.parse().ok()?;
                let d: BigInt = d.parse().ok()?;
                if d.is_zero() || d.is_negative() {
                    return None;
                }
                // BigRational::new reduces to lowest terms
                Some(BigRational::new(n, d))
            }
        }
    }

    fn elements(&self) -> Option<Vec<BigRational>> {
        None
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum ScalarValue {
    Residue(u32),
    Fraction(BigRational),
}

/// A field element tagged with its field.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Scalar {
    value: ScalarValue,
    field: FieldSpec,
}

impl Scalar {
    pub fn from_i64(v: i64, field: FieldSpec) -> Self {
        let value = match field.characteristic {
            0 => ScalarValue::Fraction(Rationals.from_i64(v)),
            p => ScalarValue::Residue(v.rem_euclid(p as i64) as u32),
        };
        Self { value, field }
    }

    /// `num / den` over `Q`, or `num * den^-1` over `F_p`.
    pub fn ratio(num: i64, den: i64, field: FieldSpec) -> Result<Self> {
        let n = Self::from_i64(num, field);
        let d = Self::from_i64(den, field);
        n.mul(&field_inv(&d)?)
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn residue(&self) -> Option<u32> {
        match self.value {
            ScalarValue::Residue(r) => Some(r),
            ScalarValue::Fraction(_) => None,
        }
    }

    pub fn fraction(&self) -> Option<&BigRational> {
        match &self.value {
            ScalarValue::Fraction(q) => Some(q),
            ScalarValue::Residue(_) => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        match &self.value {
            ScalarValue::Residue(r) => *r == 0,
            ScalarValue::Fraction(q) => q.is_zero(),
        }
    }

    fn same_field(&self, other: &Self) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        Ok(self.combine(other, |f, a, b| f.add(a, b), |a, b| a + b))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        Ok(self.combine(other, |f, a, b| f.sub(a, b), |a, b| a - b))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        Ok(self.combine(other, |f, a, b| f.mul(a, b), |a, b| a * b))
    }

    fn combine(
        &self,
        other: &Self,
        fp: impl Fn(&Fp, &u32, &u32) -> u32,
        q: impl Fn(&BigRational, &BigRational) -> BigRational,
    ) -> Self {
        let value = match (&self.value, &other.value) {
            (ScalarValue::Residue(a), ScalarValue::Residue(b)) => {
                let f = Fp {
                    p: self.field.characteristic,
                };
                ScalarValue::Residue(fp(&f, a, b))
            }
            (ScalarValue::Fraction(a), ScalarValue::Fraction(b)) => ScalarValue::Fraction(q(a, b)),
            _ => unreachable!("field tags checked by caller"),
        };
        Self {
            value,
            field: self.field,
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.value {
            ScalarValue::Residue(r) => write!(f, "{r}"),
            ScalarValue::Fraction(q) => write!(f, "{}", Rationals.render(q)),
        }
    }
}

/// Multiplicative inverse.
pub fn field_inv(x: &Scalar) -> Result<Scalar> {
    let value = match &x.value {
        ScalarValue::Residue(r) => ScalarValue::Residue(Fp::new(x.field.characteristic)?.inv(r)?),
        ScalarValue::Fraction(q) => ScalarValue::Fraction(Rationals.inv(q)?),
    };
    Ok(Scalar {
        value,
        field: x.field,
    })
}

/// Whether `x` is a perfect square in `F_p`, `p` odd.
pub fn is_square(x: &Scalar) -> Result<bool> {
    match x.value {
        ScalarValue::Residue(r) => Fp::new(x.field.characteristic)?.is_square(r),
        ScalarValue::Fraction(_) => Err(Error::UnsupportedField(
            "square test over Q is not supported".into(),
        )),
    }
}
