//! Exact rational and Gaussian-rational scalars.
//!
//! [`Rat`] keeps an `i64` fast path and promotes to [`BigRational`] when a
//! result no longer fits. Both representations are canonical (lowest terms,
//! positive denominator) and values that fit are always demoted back, so
//! structural equality is value equality.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, Debug)]
enum Repr {
    Small { num: i64, den: i64 },
    Big(BigRational),
}

/// Arbitrary-precision rational number in lowest terms.
#[derive(Clone, Debug)]
pub struct Rat(Repr);

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

fn fits(v: i128) -> bool {
    v > i64::MIN as i128 && v <= i64::MAX as i128
}

impl Rat {
    pub fn zero() -> Self {
        Rat(Repr::Small { num: 0, den: 1 })
    }

    pub fn one() -> Self {
        Rat(Repr::Small { num: 1, den: 1 })
    }

    pub fn from_int(n: i64) -> Self {
        if n == i64::MIN {
            return Rat::from_big(BigRational::from_integer(BigInt::from(n)));
        }
        Rat(Repr::Small { num: n, den: 1 })
    }

    /// `num / den`, reduced. Panics on a zero denominator.
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Rat::from_i128(num as i128, den as i128)
    }

    fn from_i128(num: i128, den: i128) -> Self {
        debug_assert!(den != 0);
        if num == 0 {
            return Rat::zero();
        }
        let g = gcd_u128(num.unsigned_abs(), den.unsigned_abs()) as i128;
        let (mut n, mut d) = (num / g, den / g);
        if d < 0 {
            n = -n;
            d = -d;
        }
        if fits(n) && fits(d) {
            Rat(Repr::Small { num: n as i64, den: d as i64 })
        } else {
            Rat(Repr::Big(BigRational::new_raw(BigInt::from(n), BigInt::from(d))))
        }
    }

    /// Wrap an already-reduced big rational, demoting when it fits.
    pub fn from_big(r: BigRational) -> Self {
        if let (Some(n), Some(d)) = (r.numer().to_i64(), r.denom().to_i64()) {
            if n != i64::MIN {
                return Rat(Repr::Small { num: n, den: d });
            }
        }
        Rat(Repr::Big(r))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Rat::from_big(BigRational::from_integer(n))
    }

    fn to_big(&self) -> BigRational {
        match &self.0 {
            Repr::Small { num, den } => BigRational::new_raw(BigInt::from(*num), BigInt::from(*den)),
            Repr::Big(b) => b.clone(),
        }
    }

    pub fn numer(&self) -> BigInt {
        match &self.0 {
            Repr::Small { num, .. } => BigInt::from(*num),
            Repr::Big(b) => b.numer().clone(),
        }
    }

    pub fn denom(&self) -> BigInt {
        match &self.0 {
            Repr::Small { den, .. } => BigInt::from(*den),
            Repr::Big(b) => b.denom().clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.0, Repr::Small { num: 0, .. })
    }

    pub fn is_one(&self) -> bool {
        matches!(self.0, Repr::Small { num: 1, den: 1 })
    }

    pub fn is_integer(&self) -> bool {
        match &self.0 {
            Repr::Small { den, .. } => *den == 1,
            Repr::Big(b) => b.is_integer(),
        }
    }

    pub fn is_negative(&self) -> bool {
        match &self.0 {
            Repr::Small { num, .. } => *num < 0,
            Repr::Big(b) => b.is_negative(),
        }
    }

    /// Reciprocal; fails on zero.
    pub fn inv(&self) -> Result<Rat> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(match &self.0 {
            Repr::Small { num, den } => Rat::from_i128(*den as i128, *num as i128),
            Repr::Big(b) => Rat::from_big(b.recip()),
        })
    }

    pub fn checked_div(&self, other: &Rat) -> Result<Rat> {
        Ok(self * &other.inv()?)
    }

    /// Non-negative gcd of two integers; both operands must be integral.
    pub fn int_gcd(&self, other: &Rat) -> Rat {
        debug_assert!(self.is_integer() && other.is_integer());
        match (&self.0, &other.0) {
            (Repr::Small { num: a, .. }, Repr::Small { num: b, .. }) => {
                Rat::from_i128(gcd_u128(a.unsigned_abs() as u128, b.unsigned_abs() as u128) as i128, 1)
            }
            _ => Rat::from_bigint(self.numer().gcd(&other.numer())),
        }
    }

    pub fn pow(&self, e: u32) -> Rat {
        let mut acc = Rat::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }
}

impl PartialEq for Rat {
    fn eq(&self, other: &Self) -> bool {
        match (&self.0, &other.0) {
            (Repr::Small { num: a, den: b }, Repr::Small { num: c, den: d }) => a == c && b == d,
            (Repr::Big(x), Repr::Big(y)) => x == y,
            _ => false,
        }
    }
}

impl Eq for Rat {}

impl Hash for Rat {
    fn hash<H: Hasher>(&self, state: &mut H) {
        match &self.0 {
            Repr::Small { num, den } => {
                num.hash(state);
                den.hash(state);
            }
            Repr::Big(b) => b.hash(state),
        }
    }
}

impl PartialOrd for Rat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rat {
    fn cmp(&self, other: &Self) -> Ordering {
        match (&self.0, &other.0) {
            (Repr::Small { num: a, den: b }, Repr::Small { num: c, den: d }) => {
                (*a as i128 * *d as i128).cmp(&(*c as i128 * *b as i128))
            }
            _ => self.to_big().cmp(&other.to_big()),
        }
    }
}

impl Default for Rat {
    fn default() -> Self {
        Rat::zero()
    }
}

impl From<i64> for Rat {
    fn from(n: i64) -> Self {
        Rat::from_int(n)
    }
}

impl<'a> Add<&'a Rat> for &'a Rat {
    type Output = Rat;
    fn add(self, rhs: &'a Rat) -> Rat {
        match (&self.0, &rhs.0) {
            (Repr::Small { num: a, den: b }, Repr::Small { num: c, den: d }) => {
                if *a == 0 {
                    return rhs.clone();
                }
                if *c == 0 {
                    return self.clone();
                }
                if b == d {
                    Rat::from_i128(*a as i128 + *c as i128, *b as i128)
                } else {
                    Rat::from_i128(
                        *a as i128 * *d as i128 + *c as i128 * *b as i128,
                        *b as i128 * *d as i128,
                    )
                }
            }
            _ => Rat::from_big(self.to_big() + rhs.to_big()),
        }
    }
}

impl<'a> Sub<&'a Rat> for &'a Rat {
    type Output = Rat;
    fn sub(self, rhs: &'a Rat) -> Rat {
        match (&self.0, &rhs.0) {
            (Repr::Small { num: a, den: b }, Repr::Small { num: c, den: d }) => {
                if *c == 0 {
                    return self.clone();
                }
                if b == d {
                    Rat::from_i128(*a as i128 - *c as i128, *b as i128)
                } else {
                    Rat::from_i128(
                        *a as i128 * *d as i128 - *c as i128 * *b as i128,
                        *b as i128 * *d as i128,
                    )
                }
            }
            _ => Rat::from_big(self.to_big() - rhs.to_big()),
        }
    }
}

impl<'a> Mul<&'a Rat> for &'a Rat {
    type Output = Rat;
    fn mul(self, rhs: &'a Rat) -> Rat {
        match (&self.0, &rhs.0) {
            (Repr::Small { num: a, den: b }, Repr::Small { num: c, den: d }) => {
                if *a == 0 || *c == 0 {
                    return Rat::zero();
                }
                if *b == 1 && *d == 1 {
                    let p = *a as i128 * *c as i128;
                    if fits(p) {
                        return Rat(Repr::Small { num: p as i64, den: 1 });
                    }
                }
                Rat::from_i128(*a as i128 * *c as i128, *b as i128 * *d as i128)
            }
            _ => {
                if self.is_zero() || rhs.is_zero() {
                    return Rat::zero();
                }
                Rat::from_big(self.to_big() * rhs.to_big())
            }
        }
    }
}

impl Neg for &Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        match &self.0 {
            Repr::Small { num, den } => Rat(Repr::Small { num: -*num, den: *den }),
            Repr::Big(b) => Rat::from_big(-b.clone()),
        }
    }
}

impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        -&self
    }
}

/// Division panics on a zero divisor; use [`Rat::checked_div`] for a `Result`.
impl<'a> Div<&'a Rat> for &'a Rat {
    type Output = Rat;
    fn div(self, rhs: &'a Rat) -> Rat {
        self.checked_div(rhs).expect("division by zero")
    }
}

macro_rules! forward_owned {
    ($ty:ty, $($tr:ident :: $m:ident),*) => {$(
        impl $tr<$ty> for $ty {
            type Output = $ty;
            fn $m(self, rhs: $ty) -> $ty { (&self).$m(&rhs) }
        }
        impl<'a> $tr<&'a $ty> for $ty {
            type Output = $ty;
            fn $m(self, rhs: &'a $ty) -> $ty { (&self).$m(rhs) }
        }
        impl<'a> $tr<$ty> for &'a $ty {
            type Output = $ty;
            fn $m(self, rhs: $ty) -> $ty { self.$m(&rhs) }
        }
    )*};
}

forward_owned!(Rat, Add::add, Sub::sub, Mul::mul, Div::div);

impl AddAssign<&Rat> for Rat {
    fn add_assign(&mut self, rhs: &Rat) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&Rat> for Rat {
    fn sub_assign(&mut self, rhs: &Rat) {
        *self = &*self - rhs;
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Small { num, den } => write!(f, "{num}/{den}"),
            Repr::Big(b) => write!(f, "{}/{}", b.numer(), b.denom()),
        }
    }
}

impl FromStr for Rat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Rat> {
        let bad = || Error::Parse(format!("malformed rational {s:?}"));
        if s.is_empty() || s.contains(char::is_whitespace) {
            return Err(bad());
        }
        let parse_int = |t: &str| -> Result<BigInt> {
            let digits = t.strip_prefix('-').unwrap_or(t);
            if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad());
            }
            t.parse::<BigInt>().map_err(|_| bad())
        };
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => {
                if d.starts_with('-') {
                    return Err(bad());
                }
                (parse_int(n)?, parse_int(d)?)
            }
            None => (parse_int(s)?, BigInt::one()),
        };
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Rat::from_big(BigRational::new(n, d)))
    }
}

/// Element of ℚ(i).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct GaussRat {
    pub re: Rat,
    pub im: Rat,
}

impl GaussRat {
    pub fn new(re: Rat, im: Rat) -> Self {
        GaussRat { re, im }
    }

    pub fn zero() -> Self {
        GaussRat { re: Rat::zero(), im: Rat::zero() }
    }

    pub fn one() -> Self {
        GaussRat { re: Rat::one(), im: Rat::zero() }
    }

    pub fn i() -> Self {
        GaussRat { re: Rat::zero(), im: Rat::one() }
    }

    pub fn from_int(n: i64) -> Self {
        GaussRat { re: Rat::from_int(n), im: Rat::zero() }
    }

    pub fn from_rat(r: Rat) -> Self {
        GaussRat { re: r, im: Rat::zero() }
    }

    pub fn frac(num: i64, den: i64) -> Self {
        GaussRat::from_rat(Rat::new(num, den))
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    /// Complex conjugation `re − im·i`.
    pub fn conj(&self) -> Self {
        GaussRat { re: self.re.clone(), im: -&self.im }
    }

    /// `re² + im²`.
    pub fn abs_sq(&self) -> Rat {
        &(&self.re * &self.re) + &(&self.im * &self.im)
    }

    pub fn inv(&self) -> Result<GaussRat> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.im.is_zero() {
            return Ok(GaussRat::from_rat(self.re.inv()?));
        }
        let d = self.abs_sq().inv()?;
        Ok(GaussRat { re: &self.re * &d, im: -(&self.im * &d) })
    }

    pub fn checked_div(&self, other: &GaussRat) -> Result<GaussRat> {
        Ok(self * &other.inv()?)
    }

    pub fn scale(&self, r: &Rat) -> GaussRat {
        GaussRat { re: &self.re * r, im: &self.im * r }
    }

    pub fn pow(&self, e: u32) -> GaussRat {
        let mut acc = GaussRat::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }
}

impl From<i64> for GaussRat {
    fn from(n: i64) -> Self {
        GaussRat::from_int(n)
    }
}

impl From<Rat> for GaussRat {
    fn from(r: Rat) -> Self {
        GaussRat::from_rat(r)
    }
}

impl<'a> Add<&'a GaussRat> for &'a GaussRat {
    type Output = GaussRat;
    fn add(self, rhs: &'a GaussRat) -> GaussRat {
        GaussRat { re: &self.re + &rhs.re, im: &self.im + &rhs.im }
    }
}

impl<'a> Sub<&'a GaussRat> for &'a GaussRat {
    type Output = GaussRat;
    fn sub(self, rhs: &'a GaussRat) -> GaussRat {
        GaussRat { re: &self.re - &rhs.re, im: &self.im - &rhs.im }
    }
}

impl<'a> Mul<&'a GaussRat> for &'a GaussRat {
    type Output = GaussRat;
    fn mul(self, rhs: &'a GaussRat) -> GaussRat {
        match (self.im.is_zero(), rhs.im.is_zero()) {
            (true, true) => GaussRat::from_rat(&self.re * &rhs.re),
            (true, false) => rhs.scale(&self.re),
            (false, true) => self.scale(&rhs.re),
            (false, false) => GaussRat {
                re: &(&self.re * &rhs.re) - &(&self.im * &rhs.im),
                im: &(&self.re * &rhs.im) + &(&self.im * &rhs.re),
            },
        }
    }
}

impl Neg for &GaussRat {
    type Output = GaussRat;
    fn neg(self) -> GaussRat {
        GaussRat { re: -&self.re, im: -&self.im }
    }
}

impl Neg for GaussRat {
    type Output = GaussRat;
    fn neg(self) -> GaussRat {
        -&self
    }
}

impl<'a> Div<&'a GaussRat> for &'a GaussRat {
    type Output = GaussRat;
    fn div(self, rhs: &'a GaussRat) -> GaussRat {
        self.checked_div(rhs).expect("division by zero")
    }
}

forward_owned!(GaussRat, Add::add, Sub::sub, Mul::mul, Div::div);

impl AddAssign<&GaussRat> for GaussRat {
    fn add_assign(&mut self, rhs: &GaussRat) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl SubAssign<&GaussRat> for GaussRat {
    fn sub_assign(&mut self, rhs: &GaussRat) {
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }
}

impl MulAssign<&GaussRat> for GaussRat {
    fn mul_assign(&mut self, rhs: &GaussRat) {
        *self = &*self * rhs;
    }
}

impl std::iter::Sum for GaussRat {
    fn sum<I: Iterator<Item = GaussRat>>(iter: I) -> GaussRat {
        let mut acc = GaussRat::zero();
        for x in iter {
            acc += &x;
        }
        acc
    }
}

/// Canonical text: `p/q` when real, otherwise `p/q+r/s*i` or `p/q-r/s*i`.
impl fmt::Display for GaussRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return write!(f, "{}", self.re);
        }
        if self.im.is_negative() {
            write!(f, "{}-{}*i", self.re, -&self.im)
        } else {
            write!(f, "{}+{}*i", self.re, self.im)
        }
    }
}

impl FromStr for GaussRat {
    type Err = Error;

    /// Accepts the canonical form plus the shorthands `p`, `r/s*i` and `-r/s*i`.
    fn from_str(s: &str) -> Result<GaussRat> {
        let Some(body) = s.strip_suffix("*i") else {
            return Ok(GaussRat::from_rat(s.parse()?));
        };
        // The split point is the last sign that is not the leading one.
        let split = body
            .char_indices()
            .skip(1)
            .filter(|(_, c)| *c == '+' || *c == '-')
            .map(|(i, _)| i)
            .last();
        match split {
            None => Ok(GaussRat { re: Rat::zero(), im: body.parse()? }),
            Some(i) => {
                let re: Rat = body[..i].parse()?;
                let im_text = &body[i + 1..];
                if im_text.starts_with(['+', '-']) {
                    return Err(Error::Parse(format!("malformed Gaussian rational {s:?}")));
                }
                let im: Rat = im_text.parse()?;
                let im = if &body[i..i + 1] == "-" { -im } else { im };
                Ok(GaussRat { re, im })
            }
        }
    }
}

impl Serialize for GaussRat {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for GaussRat {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Deterministic stream of pseudo-random Gaussian rationals.
///
/// Rational draws take numerators in `[-bound, bound]` and denominators in
/// `[1, bound]` for both parts; integer draws take both parts in
/// `[-bound, bound]`. Either sample set has at least `2·bound²` elements.
#[derive(Clone, Debug)]
pub struct ScalarSampler {
    rng: ChaCha8Rng,
    bound: i64,
}

impl ScalarSampler {
    pub fn new(seed: u64, bound: i64) -> Self {
        assert!(bound >= 2, "sampler bound must be at least 2");
        ScalarSampler { rng: ChaCha8Rng::seed_from_u64(seed), bound }
    }

    pub fn bound(&self) -> i64 {
        self.bound
    }

    fn rat(&mut self) -> Rat {
        let n = self.rng.gen_range(-self.bound..=self.bound);
        let d = self.rng.gen_range(1..=self.bound);
        Rat::new(n, d)
    }

    /// A Gaussian rational with bounded numerators and denominators.
    pub fn scalar(&mut self) -> GaussRat {
        GaussRat { re: self.rat(), im: self.rat() }
    }

    /// A Gaussian integer with both parts in `[-bound, bound]`.
    pub fn gauss_int(&mut self) -> GaussRat {
        let re = self.rng.gen_range(-self.bound..=self.bound);
        let im = self.rng.gen_range(-self.bound..=self.bound);
        GaussRat { re: Rat::from_int(re), im: Rat::from_int(im) }
    }

    /// A nonzero Gaussian integer.
    pub fn nonzero_gauss_int(&mut self) -> GaussRat {
        loop {
            let z = self.gauss_int();
            if !z.is_zero() {
                return z;
            }
        }
    }

    pub fn index(&mut self, n: usize) -> usize {
        self.rng.gen_range(0..n)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.rng.gen()
    }
}

/// First draw of the stream seeded by `seed`.
pub fn rand_scalar(seed: u64, bound: i64) -> GaussRat {
    ScalarSampler::new(seed, bound).scalar()
}
