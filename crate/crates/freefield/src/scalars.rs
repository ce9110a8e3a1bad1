//! Exact scalars: rationals, the quadratic field `Q(√D)`, polynomials in the
//! highest weight `h`, and dual numbers for first-order deformations.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::{Error, Result};

/// Commutative ring with exact equality, the coefficient domain of every
/// matrix and module in the crate.
pub trait Ring:
    Clone
    + PartialEq
    + fmt::Debug
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
    + for<'a> AddAssign<&'a Self>
    + for<'a> SubAssign<&'a Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn from_rat(r: Rat) -> Self;

    fn from_int(n: i64) -> Self {
        Self::from_rat(Rat::from(n))
    }

    /// Multiplication by a rational scalar.
    fn scale(&self, r: &Rat) -> Self {
        self.clone() * Self::from_rat(r.clone())
    }
}

/// A [`Ring`] in which every nonzero element is invertible.
pub trait Field: Ring {
    fn inv(&self) -> Result<Self>;

    fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.clone() * other.inv()?)
    }
}

macro_rules! forward_binop {
    ($ty:ty, $tr:ident, $f:ident, $imp:ident) => {
        impl $tr<$ty> for $ty {
            type Output = $ty;
            fn $f(self, o: $ty) -> $ty {
                <$ty>::$imp(&self, &o)
            }
        }
        impl<'a> $tr<&'a $ty> for $ty {
            type Output = $ty;
            fn $f(self, o: &'a $ty) -> $ty {
                <$ty>::$imp(&self, o)
            }
        }
        impl<'a> $tr<$ty> for &'a $ty {
            type Output = $ty;
            fn $f(self, o: $ty) -> $ty {
                <$ty>::$imp(self, &o)
            }
        }
        impl<'a, 'b> $tr<&'b $ty> for &'a $ty {
            type Output = $ty;
            fn $f(self, o: &'b $ty) -> $ty {
                <$ty>::$imp(self, o)
            }
        }
    };
}

macro_rules! forward_assign {
    ($ty:ty) => {
        impl<'a> AddAssign<&'a $ty> for $ty {
            fn add_assign(&mut self, o: &'a $ty) {
                *self = <$ty>::add_ref(self, o);
            }
        }
        impl<'a> SubAssign<&'a $ty> for $ty {
            fn sub_assign(&mut self, o: &'a $ty) {
                *self = <$ty>::sub_ref(self, o);
            }
        }
        impl Neg for $ty {
            type Output = $ty;
            fn neg(self) -> $ty {
                <$ty>::neg_ref(&self)
            }
        }
        impl<'a> Neg for &'a $ty {
            type Output = $ty;
            fn neg(self) -> $ty {
                <$ty>::neg_ref(self)
            }
        }
    };
}

// ---------------------------------------------------------------------------
// Rat

/// Arbitrary-precision rational, always in lowest terms with positive
/// denominator.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Rat(BigRational);

impl Rat {
    /// `n / d`; panics when `d == 0`.
    pub fn new(n: i64, d: i64) -> Rat {
        assert!(d != 0, "zero denominator");
        Rat(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn from_bigints(n: BigInt, d: BigInt) -> Result<Rat> {
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Rat(BigRational::new(n, d)))
    }

    pub fn zero() -> Rat {
        Rat(BigRational::zero())
    }

    pub fn one() -> Rat {
        Rat(BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    /// The value as an `i64` when it is an integer in range.
    pub fn to_i64(&self) -> Option<i64> {
        if self.is_integer() {
            self.0.numer().to_i64()
        } else {
            None
        }
    }

    /// Lossy conversion, for display only.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    pub fn abs(&self) -> Rat {
        Rat(self.0.abs())
    }

    pub fn recip(&self) -> Result<Rat> {
        if self.is_zero() {
            Err(Error::DivisionByZero)
        } else {
            Ok(Rat(self.0.recip()))
        }
    }

    pub fn checked_div(&self, o: &Rat) -> Result<Rat> {
        if o.is_zero() {
            Err(Error::DivisionByZero)
        } else {
            Ok(Rat(&self.0 / &o.0))
        }
    }

    /// Integer power; negative exponents require a nonzero base.
    pub fn pow(&self, e: i32) -> Result<Rat> {
        if e < 0 {
            return self.recip()?.pow(-e);
        }
        let mut acc = Rat::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        Ok(acc)
    }

    pub fn floor(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    fn add_ref(&self, o: &Rat) -> Rat {
        Rat(&self.0 + &o.0)
    }

    fn sub_ref(&self, o: &Rat) -> Rat {
        Rat(&self.0 - &o.0)
    }

    fn mul_ref(&self, o: &Rat) -> Rat {
        Rat(&self.0 * &o.0)
    }

    fn div_ref(&self, o: &Rat) -> Rat {
        Rat(&self.0 / &o.0)
    }

    fn neg_ref(&self) -> Rat {
        Rat(-&self.0)
    }
}

forward_binop!(Rat, Add, add, add_ref);
forward_binop!(Rat, Sub, sub, sub_ref);
forward_binop!(Rat, Mul, mul, mul_ref);
forward_binop!(Rat, Div, div, div_ref);
forward_assign!(Rat);

impl From<i64> for Rat {
    fn from(n: i64) -> Rat {
        Rat(BigRational::from_integer(BigInt::from(n)))
    }
}

impl From<BigInt> for Rat {
    fn from(n: BigInt) -> Rat {
        Rat(BigRational::from_integer(n))
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Rat> {
        let s = s.trim();
        let bad = || Error::OutOfRange(format!("not a rational: {s:?}"));
        match s.split_once('/') {
            Some((n, d)) => {
                let n: BigInt = n.trim().parse().map_err(|_| bad())?;
                let d: BigInt = d.trim().parse().map_err(|_| bad())?;
                Rat::from_bigints(n, d)
            }
            None => Ok(Rat::from(s.parse::<BigInt>().map_err(|_| bad())?)),
        }
    }
}

impl Serialize for Rat {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Rat, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl Ring for Rat {
    fn zero() -> Self {
        Rat::zero()
    }
    fn one() -> Self {
        Rat::one()
    }
    fn is_zero(&self) -> bool {
        Rat::is_zero(self)
    }
    fn from_rat(r: Rat) -> Self {
        r
    }
    fn scale(&self, r: &Rat) -> Self {
        self * r
    }
}

impl Field for Rat {
    fn inv(&self) -> Result<Self> {
        self.recip()
    }
}

// ---------------------------------------------------------------------------
// FieldElem

/// An element `a + b·√D` of `Q(√D)`.
///
/// `disc == 0` marks a pure rational that is compatible with every
/// discriminant; mixing two different nonzero discriminants is an error
/// (the `checked_*` methods report it, the operators panic).
#[derive(Clone)]
pub struct FieldElem {
    a: Rat,
    b: Rat,
    disc: i64,
}

impl FieldElem {
    /// `a + b√disc`. A zero discriminant requires `b == 0`.
    pub fn new(a: Rat, b: Rat, disc: i64) -> FieldElem {
        assert!(disc != 0 || b.is_zero(), "surd part without discriminant");
        FieldElem { a, b, disc }
    }

    pub fn rational(a: Rat) -> FieldElem {
        FieldElem {
            a,
            b: Rat::zero(),
            disc: 0,
        }
    }

    /// `√disc` itself.
    pub fn sqrt_disc(disc: i64) -> FieldElem {
        FieldElem::new(Rat::zero(), Rat::one(), disc)
    }

    pub fn rat_part(&self) -> &Rat {
        &self.a
    }

    pub fn surd_part(&self) -> &Rat {
        &self.b
    }

    pub fn disc(&self) -> i64 {
        self.disc
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// The rational value, if the surd part vanishes.
    pub fn to_rat(&self) -> Option<Rat> {
        self.is_rational().then(|| self.a.clone())
    }

    pub fn conj(&self) -> FieldElem {
        FieldElem {
            a: self.a.clone(),
            b: -&self.b,
            disc: self.disc,
        }
    }

    /// The norm `a² − D b²`.
    pub fn norm(&self) -> Rat {
        &self.a * &self.a - &self.b * &self.b * Rat::from(self.disc)
    }

    fn join(d1: i64, d2: i64) -> Result<i64> {
        match (d1, d2) {
            (0, d) | (d, 0) => Ok(d),
            (x, y) if x == y => Ok(x),
            (x, y) => Err(Error::DiscMismatch(x, y)),
        }
    }

    pub fn checked_add(&self, o: &FieldElem) -> Result<FieldElem> {
        let disc = Self::join(self.disc, o.disc)?;
        Ok(FieldElem {
            a: &self.a + &o.a,
            b: &self.b + &o.b,
            disc,
        })
    }

    pub fn checked_sub(&self, o: &FieldElem) -> Result<FieldElem> {
        let disc = Self::join(self.disc, o.disc)?;
        Ok(FieldElem {
            a: &self.a - &o.a,
            b: &self.b - &o.b,
            disc,
        })
    }

    pub fn checked_mul(&self, o: &FieldElem) -> Result<FieldElem> {
        let disc = Self::join(self.disc, o.disc)?;
        if self.b.is_zero() {
            return Ok(FieldElem {
                a: &self.a * &o.a,
                b: &self.a * &o.b,
                disc,
            });
        }
        if o.b.is_zero() {
            return Ok(FieldElem {
                a: &self.a * &o.a,
                b: &self.b * &o.a,
                disc,
            });
        }
        Ok(FieldElem {
            a: &self.a * &o.a + &self.b * &o.b * Rat::from(disc),
            b: &self.a * &o.b + &self.b * &o.a,
            disc,
        })
    }

    pub fn checked_div(&self, o: &FieldElem) -> Result<FieldElem> {
        Self::join(self.disc, o.disc)?;
        self.checked_mul(&o.inv()?)
    }

    fn add_ref(&self, o: &FieldElem) -> FieldElem {
        self.checked_add(o).expect("FieldElem add")
    }

    fn sub_ref(&self, o: &FieldElem) -> FieldElem {
        self.checked_sub(o).expect("FieldElem sub")
    }

    fn mul_ref(&self, o: &FieldElem) -> FieldElem {
        self.checked_mul(o).expect("FieldElem mul")
    }

    fn neg_ref(&self) -> FieldElem {
        FieldElem {
            a: -&self.a,
            b: -&self.b,
            disc: self.disc,
        }
    }

    /// Lossy numeric value, for display only.
    pub fn to_f64(&self) -> f64 {
        self.a.to_f64() + self.b.to_f64() * (self.disc as f64).sqrt()
    }
}

forward_binop!(FieldElem, Add, add, add_ref);
forward_binop!(FieldElem, Sub, sub, sub_ref);
forward_binop!(FieldElem, Mul, mul, mul_ref);
forward_assign!(FieldElem);

impl PartialEq for FieldElem {
    fn eq(&self, o: &FieldElem) -> bool {
        self.a == o.a && self.b == o.b && (self.b.is_zero() || self.disc == o.disc)
    }
}

impl Eq for FieldElem {}

impl From<Rat> for FieldElem {
    fn from(r: Rat) -> FieldElem {
        FieldElem::rational(r)
    }
}

impl From<i64> for FieldElem {
    fn from(n: i64) -> FieldElem {
        FieldElem::rational(Rat::from(n))
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", self.a);
        }
        let surd = |b: &Rat| {
            if b.is_one() {
                format!("√{}", self.disc)
            } else {
                format!("{}√{}", b, self.disc)
            }
        };
        if self.a.is_zero() {
            if self.b == -Rat::one() {
                write!(f, "-√{}", self.disc)
            } else {
                write!(f, "{}", surd(&self.b))
            }
        } else if self.b.is_negative() {
            write!(f, "{}-{}", self.a, surd(&self.b.abs()))
        } else {
            write!(f, "{}+{}", self.a, surd(&self.b))
        }
    }
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for FieldElem {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl Ring for FieldElem {
    fn zero() -> Self {
        FieldElem::rational(Rat::zero())
    }
    fn one() -> Self {
        FieldElem::rational(Rat::one())
    }
    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
    fn from_rat(r: Rat) -> Self {
        FieldElem::rational(r)
    }
    fn scale(&self, r: &Rat) -> Self {
        FieldElem {
            a: &self.a * r,
            b: &self.b * r,
            disc: self.disc,
        }
    }
}

impl Field for FieldElem {
    fn inv(&self) -> Result<Self> {
        if Ring::is_zero(self) {
            return Err(Error::DivisionByZero);
        }
        if self.b.is_zero() {
            return Ok(FieldElem {
                a: self.a.recip()?,
                b: Rat::zero(),
                disc: self.disc,
            });
        }
        let n = self.norm();
        if n.is_zero() {
            // Only possible when D is a perfect square, which Params rejects.
            return Err(Error::DivisionByZero);
        }
        Ok(FieldElem {
            a: &self.a / &n,
            b: -(&self.b / &n),
            disc: self.disc,
        })
    }
}

// ---------------------------------------------------------------------------
// HPoly

/// Univariate polynomial over the rationals, coefficients in ascending degree
/// with no trailing zeros (the zero polynomial has no coefficients).
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize)]
pub struct HPoly {
    coeffs: Vec<Rat>,
}

impl HPoly {
    pub fn new(mut coeffs: Vec<Rat>) -> HPoly {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        HPoly { coeffs }
    }

    pub fn constant(c: Rat) -> HPoly {
        HPoly::new(vec![c])
    }

    /// The indeterminate `h`.
    pub fn var() -> HPoly {
        HPoly::new(vec![Rat::zero(), Rat::one()])
    }

    /// `h − root`.
    pub fn linear_root(root: &Rat) -> HPoly {
        HPoly::new(vec![-root, Rat::one()])
    }

    /// `∏ (h − rᵢ)` over the given roots (with repetition).
    pub fn from_roots<'a>(roots: impl IntoIterator<Item = &'a Rat>) -> HPoly {
        roots
            .into_iter()
            .fold(HPoly::constant(Rat::one()), |acc, r| {
                acc * HPoly::linear_root(r)
            })
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    /// Coefficient of `h^k` (zero beyond the degree).
    pub fn coeff(&self, k: usize) -> Rat {
        self.coeffs.get(k).cloned().unwrap_or_else(Rat::zero)
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        self.coeffs
            .iter()
            .rev()
            .fold(Rat::zero(), |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> HPoly {
        HPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * Rat::from(k as i64))
                .collect(),
        )
    }

    fn add_ref(&self, o: &HPoly) -> HPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        HPoly::new((0..n).map(|k| self.coeff(k) + o.coeff(k)).collect())
    }

    fn sub_ref(&self, o: &HPoly) -> HPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        HPoly::new((0..n).map(|k| self.coeff(k) - o.coeff(k)).collect())
    }

    fn mul_ref(&self, o: &HPoly) -> HPoly {
        if self.is_zero() || o.is_zero() {
            return HPoly::default();
        }
        let mut out = vec![Rat::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, x) in self.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in o.coeffs.iter().enumerate() {
                out[i + j] += &(x * y);
            }
        }
        HPoly::new(out)
    }

    fn neg_ref(&self) -> HPoly {
        HPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

forward_binop!(HPoly, Add, add, add_ref);
forward_binop!(HPoly, Sub, sub, sub_ref);
forward_binop!(HPoly, Mul, mul, mul_ref);
forward_assign!(HPoly);

impl Ring for HPoly {
    fn zero() -> Self {
        HPoly::default()
    }
    fn one() -> Self {
        HPoly::constant(Rat::one())
    }
    fn is_zero(&self) -> bool {
        HPoly::is_zero(self)
    }
    fn from_rat(r: Rat) -> Self {
        HPoly::constant(r)
    }
    fn scale(&self, r: &Rat) -> Self {
        HPoly::new(self.coeffs.iter().map(|c| c * r).collect())
    }
}

impl fmt::Display for HPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let (sign, mag) = if c.is_negative() {
                ("-", c.abs())
            } else {
                ("+", c.clone())
            };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let show_coeff = k == 0 || !mag.is_one();
            if show_coeff {
                write!(f, "{mag}")?;
            }
            match k {
                0 => {}
                1 => write!(f, "h")?,
                _ => write!(f, "h^{k}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for HPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HPoly({self})")
    }
}

/// Value and first derivative of `p` at `x0`.
pub fn poly_eval_derive(p: &HPoly, x0: &Rat) -> (Rat, Rat) {
    // Horner on the pair (p, p′) simultaneously.
    let mut v = Rat::zero();
    let mut d = Rat::zero();
    for c in p.coeffs().iter().rev() {
        d = d * x0 + &v;
        v = v * x0 + c;
    }
    (v, d)
}

// ---------------------------------------------------------------------------
// Dual numbers

/// `re + eps·ε` with `ε² = 0`; used to differentiate module actions with
/// respect to the momentum.
#[derive(Clone, PartialEq, Debug)]
pub struct Dual<T> {
    pub re: T,
    pub eps: T,
}

impl<T: Ring> Dual<T> {
    pub fn new(re: T, eps: T) -> Self {
        Dual { re, eps }
    }

    pub fn real(re: T) -> Self {
        Dual { re, eps: T::zero() }
    }

    fn add_ref(&self, o: &Self) -> Self {
        Dual {
            re: self.re.clone() + &o.re,
            eps: self.eps.clone() + &o.eps,
        }
    }

    fn sub_ref(&self, o: &Self) -> Self {
        Dual {
            re: self.re.clone() - &o.re,
            eps: self.eps.clone() - &o.eps,
        }
    }

    fn mul_ref(&self, o: &Self) -> Self {
        Dual {
            re: self.re.clone() * &o.re,
            eps: self.re.clone() * &o.eps + &(self.eps.clone() * &o.re),
        }
    }

    fn neg_ref(&self) -> Self {
        Dual {
            re: -self.re.clone(),
            eps: -self.eps.clone(),
        }
    }
}

impl<T: Ring> Add for Dual<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        self.add_ref(&o)
    }
}
impl<'a, T: Ring> Add<&'a Dual<T>> for Dual<T> {
    type Output = Self;
    fn add(self, o: &'a Self) -> Self {
        self.add_ref(o)
    }
}
impl<T: Ring> Sub for Dual<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self.sub_ref(&o)
    }
}
impl<'a, T: Ring> Sub<&'a Dual<T>> for Dual<T> {
    type Output = Self;
    fn sub(self, o: &'a Self) -> Self {
        self.sub_ref(o)
    }
}
impl<T: Ring> Mul for Dual<T> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        self.mul_ref(&o)
    }
}
impl<'a, T: Ring> Mul<&'a Dual<T>> for Dual<T> {
    type Output = Self;
    fn mul(self, o: &'a Self) -> Self {
        self.mul_ref(o)
    }
}
impl<T: Ring> Neg for Dual<T> {
    type Output = Self;
    fn neg(self) -> Self {
        self.neg_ref()
    }
}
impl<'a, T: Ring> AddAssign<&'a Dual<T>> for Dual<T> {
    fn add_assign(&mut self, o: &'a Self) {
        *self = self.add_ref(o);
    }
}
impl<'a, T: Ring> SubAssign<&'a Dual<T>> for Dual<T> {
    fn sub_assign(&mut self, o: &'a Self) {
        *self = self.sub_ref(o);
    }
}

impl<T: Ring> Ring for Dual<T> {
    fn zero() -> Self {
        Dual::real(T::zero())
    }
    fn one() -> Self {
        Dual::real(T::one())
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.eps.is_zero()
    }
    fn from_rat(r: Rat) -> Self {
        Dual::real(T::from_rat(r))
    }
    fn scale(&self, r: &Rat) -> Self {
        Dual {
            re: self.re.scale(r),
            eps: self.eps.scale(r),
        }
    }
}

impl PartialOrd for FieldElem {
    /// Exact real ordering of `a + b√D` (both operands must share `D`).
    fn partial_cmp(&self, o: &FieldElem) -> Option<Ordering> {
        let d = self.checked_sub(o).ok()?;
        Some(sign_of(&d))
    }
}

/// Sign of `a + b√D` as a real number, decided exactly.
fn sign_of(x: &FieldElem) -> Ordering {
    let sa = x.a.cmp(&Rat::zero());
    let sb = x.b.cmp(&Rat::zero());
    if sb == Ordering::Equal {
        return sa;
    }
    if sa == Ordering::Equal || sa == sb {
        return sb;
    }
    // Opposite signs: compare a² with D b².
    let a2 = &x.a * &x.a;
    let db2 = &x.b * &x.b * Rat::from(x.disc);
    match a2.cmp(&db2) {
        Ordering::Greater => sa,
        Ordering::Less => sb,
        Ordering::Equal => Ordering::Equal,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rat_display_and_parse() {
        assert_eq!(Rat::new(6, -4).to_string(), "-3/2");
        assert_eq!(Rat::from(7).to_string(), "7");
        assert_eq!("-3/2".parse::<Rat>().unwrap(), Rat::new(-3, 2));
        assert!("1/0".parse::<Rat>().is_err());
    }

    #[test]
    fn sqrt_disc_squares_to_disc() {
        let s = FieldElem::sqrt_disc(12);
        assert_eq!(s.clone() * s, FieldElem::from(12));
    }

    #[test]
    fn disc_mismatch_is_reported() {
        let x = FieldElem::sqrt_disc(12);
        let y = FieldElem::sqrt_disc(20);
        assert_eq!(x.checked_add(&y), Err(Error::DiscMismatch(12, 20)));
        assert!(x.checked_add(&FieldElem::from(3)).is_ok());
    }

    #[test]
    fn inverse_of_zero_fails() {
        assert_eq!(FieldElem::zero().inv(), Err(Error::DivisionByZero));
        assert_eq!(Rat::zero().recip(), Err(Error::DivisionByZero));
    }

    #[test]
    fn field_elem_display() {
        let d = 12;
        let x = FieldElem::new(Rat::new(1, 2), Rat::new(-3, 4), d);
        assert_eq!(x.to_string(), "1/2-3/4√12");
        assert_eq!(FieldElem::sqrt_disc(d).to_string(), "√12");
        assert_eq!((-FieldElem::sqrt_disc(d)).to_string(), "-√12");
    }

    #[test]
    fn ordering_of_surds() {
        let s = FieldElem::sqrt_disc(12);
        assert!(s > FieldElem::from(3));
        assert!(s < FieldElem::from(4));
        assert!(-s.clone() < FieldElem::from(-3));
    }

    #[test]
    fn hpoly_display_and_degree() {
        let p = HPoly::new(vec![Rat::zero(), Rat::from(-5), Rat::from(8)]);
        assert_eq!(p.to_string(), "8h^2 - 5h");
        assert_eq!(p.degree(), Some(2));
        assert_eq!(HPoly::zero().degree(), None);
        assert_eq!(HPoly::new(vec![Rat::zero(), Rat::zero()]), HPoly::zero());
    }

    #[test]
    fn dual_numbers_differentiate() {
        // (x + ε)³ = x³ + 3x² ε
        let x = Dual::new(Rat::from(2), Rat::one());
        let cube = x.clone() * &x * &x;
        assert_eq!(cube.re, Rat::from(8));
        assert_eq!(cube.eps, Rat::from(12));
    }
}
