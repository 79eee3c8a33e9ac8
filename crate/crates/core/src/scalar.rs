//! Scalar fields.
//!
//! Geometry is written once against [`Scalar`] and instantiated over exact
//! rationals ([`Q`]), quadratic extensions of those ([`Surd`]), or floats that
//! carry their own sign tolerance ([`Float`]).

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

pub type Q = BigRational;

pub const DEFAULT_EPS: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Negative => Sign::Positive,
            Sign::Zero => Sign::Zero,
            Sign::Positive => Sign::Negative,
        }
    }

    pub fn times(self, other: Sign) -> Sign {
        match (self, other) {
            (Sign::Zero, _) | (_, Sign::Zero) => Sign::Zero,
            (a, b) if a == b => Sign::Positive,
            _ => Sign::Negative,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Negative => "negative",
            Sign::Zero => "zero",
            Sign::Positive => "positive",
        })
    }
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
#[error("sign of {value:e} is undecidable at tolerance {eps:e}")]
pub struct Indeterminate {
    pub value: f64,
    pub eps: f64,
}

/// An ordered field, possibly inexact.
///
/// Method names avoid the `num_traits` vocabulary so that `Q` can implement
/// both without ambiguity at call sites.
pub trait Scalar:
    Clone
    + fmt::Debug
    + fmt::Display
    + PartialEq
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// Whether sign decisions are exact.
    const EXACT: bool;

    fn int(n: i64) -> Self;
    fn rat(q: &Q) -> Self;

    /// Exact sign, or `Indeterminate` when a float lies inside its tolerance band.
    fn sign(&self) -> Result<Sign, Indeterminate>;

    /// Equality with zero for verification checks: exact for exact fields,
    /// within tolerance for floats.
    fn near_zero(&self) -> bool;

    /// The nonnegative square root, when it lies in the field.
    fn sqrt(&self) -> Option<Self>;

    fn approx(&self) -> f64;

    fn zero() -> Self {
        Self::int(0)
    }

    fn one() -> Self {
        Self::int(1)
    }

    fn recip(&self) -> Self {
        Self::one() / self.clone()
    }

    fn half(&self) -> Self {
        self.clone() / Self::int(2)
    }

    fn abs_val(&self) -> Result<Self, Indeterminate> {
        Ok(match self.sign()? {
            Sign::Negative => -self.clone(),
            _ => self.clone(),
        })
    }

    fn is_pos(&self) -> Result<bool, Indeterminate> {
        Ok(self.sign()? == Sign::Positive)
    }

    fn is_neg(&self) -> Result<bool, Indeterminate> {
        Ok(self.sign()? == Sign::Negative)
    }

    fn is_zero_sign(&self) -> Result<bool, Indeterminate> {
        Ok(self.sign()? == Sign::Zero)
    }
}

pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Parses `"p"`, `"p/q"` or a finite decimal such as `"-1.25"`.
pub fn parse_q(s: &str) -> Option<Q> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(Q::new(n, d));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let neg = int.starts_with('-');
        let int_digits = int.trim_start_matches(['-', '+']);
        let whole: BigInt = if int_digits.is_empty() { BigInt::zero() } else { int_digits.parse().ok()? };
        let scale = BigInt::from(10u32).pow(frac.len() as u32);
        let mag = whole * &scale + frac.parse::<BigInt>().ok()?;
        let n = if neg { -mag } else { mag };
        return Some(Q::new(n, scale));
    }
    s.parse::<BigInt>().ok().map(Q::from_integer)
}

fn int_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

impl Scalar for Q {
    const EXACT: bool = true;

    fn int(n: i64) -> Self {
        qi(n)
    }

    fn rat(q: &Q) -> Self {
        q.clone()
    }

    fn sign(&self) -> Result<Sign, Indeterminate> {
        Ok(if Zero::is_zero(self) {
            Sign::Zero
        } else if self.is_positive() {
            Sign::Positive
        } else {
            Sign::Negative
        })
    }

    fn near_zero(&self) -> bool {
        Zero::is_zero(self)
    }

    fn sqrt(&self) -> Option<Self> {
        let n = int_sqrt(self.numer())?;
        let d = int_sqrt(self.denom())?;
        Some(Q::new(n, d))
    }

    fn approx(&self) -> f64 {
        self.to_f64().unwrap_or_else(|| {
            self.numer().to_f64().unwrap_or(f64::NAN) / self.denom().to_f64().unwrap_or(f64::NAN)
        })
    }
}

/// A float with an attached tolerance. A tolerance of zero means "inherit":
/// constants adopt the tolerance of whatever they are combined with.
#[derive(Clone, Copy, Debug)]
pub struct Float {
    v: f64,
    eps: f64,
}

impl Float {
    pub fn new(v: f64) -> Self {
        Float { v, eps: 0.0 }
    }

    pub fn with_eps(v: f64, eps: f64) -> Self {
        Float { v, eps }
    }

    pub fn value(self) -> f64 {
        self.v
    }

    pub fn tolerance(self) -> f64 {
        if self.eps > 0.0 {
            self.eps
        } else {
            DEFAULT_EPS
        }
    }

    fn join(a: f64, b: f64) -> f64 {
        if a == 0.0 {
            b
        } else if b == 0.0 {
            a
        } else {
            a.max(b)
        }
    }
}

impl PartialEq for Float {
    fn eq(&self, other: &Self) -> bool {
        self.v == other.v
    }
}

impl fmt::Display for Float {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.v)
    }
}

macro_rules! float_binop {
    ($tr:ident, $m:ident, $op:tt) => {
        impl $tr for Float {
            type Output = Float;
            fn $m(self, o: Float) -> Float {
                Float { v: self.v $op o.v, eps: Float::join(self.eps, o.eps) }
            }
        }
    };
}
float_binop!(Add, add, +);
float_binop!(Sub, sub, -);
float_binop!(Mul, mul, *);
float_binop!(Div, div, /);

impl Neg for Float {
    type Output = Float;
    fn neg(self) -> Float {
        Float { v: -self.v, eps: self.eps }
    }
}

impl Scalar for Float {
    const EXACT: bool = false;

    fn int(n: i64) -> Self {
        Float::new(n as f64)
    }

    fn rat(q: &Q) -> Self {
        Float::new(q.approx())
    }

    fn sign(&self) -> Result<Sign, Indeterminate> {
        let eps = self.tolerance();
        if self.v == 0.0 {
            Ok(Sign::Zero)
        } else if self.v.abs() <= eps || self.v.is_nan() {
            Err(Indeterminate { value: self.v, eps })
        } else if self.v > 0.0 {
            Ok(Sign::Positive)
        } else {
            Ok(Sign::Negative)
        }
    }

    fn near_zero(&self) -> bool {
        self.v.abs() <= self.tolerance()
    }

    fn sqrt(&self) -> Option<Self> {
        if self.v < -self.tolerance() {
            None
        } else {
            Some(Float { v: self.v.max(0.0).sqrt(), eps: self.eps })
        }
    }

    fn approx(&self) -> f64 {
        self.v
    }
}

/// `a + b·√d` over `K`. Constants carry no radical and adopt one on first
/// contact; combining two different radicals is a logic error and panics.
#[derive(Clone, Debug)]
pub struct Surd<K> {
    a: K,
    b: K,
    d: Option<K>,
}

impl<K: Scalar> Surd<K> {
    /// `a` viewed in the extension by `√d`.
    pub fn adjoin(a: K, d: K) -> Self {
        Surd { a, b: K::zero(), d: Some(d) }
    }

    pub fn new(a: K, b: K, d: K) -> Self {
        Surd { a, b, d: Some(d) }
    }

    pub fn embed(a: K) -> Self {
        Surd { a, b: K::zero(), d: None }
    }

    pub fn root(d: K) -> Self {
        Surd { a: K::zero(), b: K::one(), d: Some(d) }
    }

    pub fn rational_part(&self) -> &K {
        &self.a
    }

    pub fn surd_part(&self) -> &K {
        &self.b
    }

    pub fn radicand(&self) -> Option<&K> {
        self.d.as_ref()
    }

    fn merge(x: &Option<K>, y: &Option<K>) -> Option<K> {
        match (x, y) {
            (Some(a), Some(b)) => {
                assert!(a == b, "mixed radicals {a} and {b}");
                Some(a.clone())
            }
            (Some(a), None) | (None, Some(a)) => Some(a.clone()),
            (None, None) => None,
        }
    }

    fn with(a: K, b: K, d: Option<K>) -> Self {
        Surd { a, b, d }
    }

    fn conj(&self) -> Self {
        Surd::with(self.a.clone(), -self.b.clone(), self.d.clone())
    }

    fn norm(&self) -> K {
        match &self.d {
            Some(d) => self.a.clone() * self.a.clone() - d.clone() * self.b.clone() * self.b.clone(),
            None => self.a.clone() * self.a.clone(),
        }
    }

    fn square(&self) -> Self {
        self.clone() * self.clone()
    }
}

impl<K: Scalar> PartialEq for Surd<K> {
    fn eq(&self, o: &Self) -> bool {
        self.a == o.a && self.b == o.b
    }
}

impl<K: Scalar> fmt::Display for Surd<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.d {
            Some(d) if !self.b.near_zero() => {
                if self.a.near_zero() {
                    write!(f, "({})*sqrt({})", self.b, d)
                } else {
                    write!(f, "({})+({})*sqrt({})", self.a, self.b, d)
                }
            }
            _ => write!(f, "{}", self.a),
        }
    }
}

impl<K: Scalar> Add for Surd<K> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        let d = Self::merge(&self.d, &o.d);
        Surd::with(self.a + o.a, self.b + o.b, d)
    }
}

impl<K: Scalar> Sub for Surd<K> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        let d = Self::merge(&self.d, &o.d);
        Surd::with(self.a - o.a, self.b - o.b, d)
    }
}

impl<K: Scalar> Mul for Surd<K> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let d = Self::merge(&self.d, &o.d);
        let mut a = self.a.clone() * o.a.clone();
        if let Some(r) = &d {
            a = a + self.b.clone() * o.b.clone() * r.clone();
        }
        let b = self.a * o.b + self.b * o.a;
        Surd::with(a, b, d)
    }
}

impl<K: Scalar> Div for Surd<K> {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        let d = Self::merge(&self.d, &o.d);
        if o.b.near_zero() {
            return Surd::with(self.a / o.a.clone(), self.b / o.a, d);
        }
        let n = o.norm();
        let num = Surd::with(self.a, self.b, d.clone()) * Surd::with(o.a.clone(), -o.b.clone(), d);
        Surd::with(num.a / n.clone(), num.b / n, num.d)
    }
}

impl<K: Scalar> Neg for Surd<K> {
    type Output = Self;
    fn neg(self) -> Self {
        Surd::with(-self.a, -self.b, self.d)
    }
}

impl<K: Scalar> Scalar for Surd<K> {
    const EXACT: bool = K::EXACT;

    fn int(n: i64) -> Self {
        Surd::embed(K::int(n))
    }

    fn rat(q: &Q) -> Self {
        Surd::embed(K::rat(q))
    }

    fn sign(&self) -> Result<Sign, Indeterminate> {
        let sa = self.a.sign()?;
        let sb = self.b.sign()?;
        Ok(match (sa, sb) {
            (s, Sign::Zero) => s,
            (Sign::Zero, s) => s,
            (x, y) if x == y => x,
            (x, _) => self.norm().sign()?.times(x),
        })
    }

    fn near_zero(&self) -> bool {
        self.a.near_zero() && self.b.near_zero()
    }

    fn sqrt(&self) -> Option<Self> {
        if self.sign().ok()? == Sign::Negative {
            return None;
        }
        if self.b.near_zero() {
            if let Some(r) = self.a.sqrt() {
                return Some(Surd::with(r, K::zero(), self.d.clone()));
            }
            let d = self.d.clone()?;
            let r = (self.a.clone() / d.clone()).sqrt()?;
            return Some(Surd::with(K::zero(), r, Some(d)));
        }
        // Denest: (x + y√d)² = a + b√d.
        let d = self.d.clone()?;
        let n = self.norm().sqrt()?;
        for x2 in [(self.a.clone() + n.clone()).half(), (self.a.clone() - n.clone()).half()] {
            let Some(x) = x2.sqrt() else { continue };
            if x.near_zero() {
                continue;
            }
            let y = self.b.clone() / (x.clone() * K::int(2));
            let mut c = Surd::with(x, y, Some(d.clone()));
            if c.sign().ok()? == Sign::Negative {
                c = -c;
            }
            if c.square() == *self {
                return Some(c);
            }
        }
        None
    }

    fn approx(&self) -> f64 {
        match &self.d {
            Some(d) => self.a.approx() + self.b.approx() * d.approx().sqrt(),
            None => self.a.approx(),
        }
    }
}

impl<K: Scalar> Surd<K> {
    /// The Galois conjugate `a − b√d`.
    pub fn conjugate(&self) -> Self {
        self.conj()
    }
}

/// Chooses at most two radicals so that every entry of `norms` has a square
/// root in `Q(√r₁, √r₂)`. Returns `None` if more than two are needed.
pub fn radicals_for(norms: &[Q]) -> Option<Vec<Q>> {
    let square = |x: &Q| Scalar::sqrt(x).is_some();
    let mut rads: Vec<Q> = Vec::new();
    for n in norms {
        if !n.is_positive() || square(n) {
            continue;
        }
        let covered = rads.iter().any(|r| square(&(n / r)))
            || (rads.len() == 2 && square(&(n / (&rads[0] * &rads[1]))));
        if !covered {
            rads.push(n.clone());
        }
    }
    (rads.len() <= 2).then_some(rads)
}

/// Scalars that can host a rational together with fixed radicals.
pub trait Embed: Scalar {
    fn embed_q(x: &Q, radicals: &[Q]) -> Self;
}

impl Embed for Q {
    fn embed_q(x: &Q, _: &[Q]) -> Self {
        x.clone()
    }
}

impl Embed for Float {
    fn embed_q(x: &Q, _: &[Q]) -> Self {
        Float::rat(x)
    }
}

impl Embed for Surd<Q> {
    fn embed_q(x: &Q, radicals: &[Q]) -> Self {
        Surd::adjoin(x.clone(), radicals[0].clone())
    }
}

impl Embed for Surd<Surd<Q>> {
    fn embed_q(x: &Q, radicals: &[Q]) -> Self {
        let inner = |v: &Q| Surd::adjoin(v.clone(), radicals[0].clone());
        Surd::adjoin(inner(x), inner(&radicals[1]))
    }
}
