//! Lorentzian (2,1) linear algebra on coordinates with inner product
//! diag(1, 1, −1), future = positive third coordinate.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use crate::error::{Error, Result};
use crate::scalar::{Q, Scalar, Sign};

#[derive(Clone, Debug, PartialEq)]
pub struct Vec3<S> {
    pub x: S,
    pub y: S,
    pub z: S,
}

impl<S: Scalar> Vec3<S> {
    pub fn new(x: S, y: S, z: S) -> Self {
        Vec3 { x, y, z }
    }

    pub fn ints(x: i64, y: i64, z: i64) -> Self {
        Vec3::new(S::int(x), S::int(y), S::int(z))
    }

    pub fn from_q(v: &Vec3<Q>) -> Self {
        v.map(S::rat)
    }

    pub fn zero() -> Self {
        Vec3::ints(0, 0, 0)
    }

    pub fn e(i: usize) -> Self {
        let mut c = [0, 0, 0];
        c[i] = 1;
        Vec3::ints(c[0], c[1], c[2])
    }

    pub fn map<T>(&self, f: impl Fn(&S) -> T) -> Vec3<T> {
        Vec3 { x: f(&self.x), y: f(&self.y), z: f(&self.z) }
    }

    pub fn coords(&self) -> [&S; 3] {
        [&self.x, &self.y, &self.z]
    }

    pub fn get(&self, i: usize) -> &S {
        self.coords()[i]
    }

    pub fn scale(&self, s: &S) -> Self {
        self.map(|c| c.clone() * s.clone())
    }

    pub fn div(&self, s: &S) -> Self {
        self.map(|c| c.clone() / s.clone())
    }

    pub fn dot(&self, o: &Self) -> S {
        inner(self, o)
    }

    pub fn norm2(&self) -> S {
        inner(self, self)
    }

    pub fn euclid2(&self) -> S {
        self.x.clone() * self.x.clone() + self.y.clone() * self.y.clone() + self.z.clone() * self.z.clone()
    }

    pub fn is_zero(&self) -> bool {
        self.coords().iter().all(|c| c.near_zero())
    }

    pub fn approx(&self) -> [f64; 3] {
        [self.x.approx(), self.y.approx(), self.z.approx()]
    }
}

impl<S: Scalar> Add for Vec3<S> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Vec3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl<S: Scalar> Sub for Vec3<S> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Vec3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl<S: Scalar> Neg for Vec3<S> {
    type Output = Self;
    fn neg(self) -> Self {
        Vec3::new(-self.x, -self.y, -self.z)
    }
}

impl<'a, S: Scalar> Add for &'a Vec3<S> {
    type Output = Vec3<S>;
    fn add(self, o: Self) -> Vec3<S> {
        self.clone() + o.clone()
    }
}

impl<'a, S: Scalar> Sub for &'a Vec3<S> {
    type Output = Vec3<S>;
    fn sub(self, o: Self) -> Vec3<S> {
        self.clone() - o.clone()
    }
}

impl<S: Scalar> fmt::Display for Vec3<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.x, self.y, self.z)
    }
}

pub fn inner<S: Scalar>(u: &Vec3<S>, v: &Vec3<S>) -> S {
    u.x.clone() * v.x.clone() + u.y.clone() * v.y.clone() - u.z.clone() * v.z.clone()
}

pub fn det3<S: Scalar>(u: &Vec3<S>, v: &Vec3<S>, w: &Vec3<S>) -> S {
    let m = |a: &S, b: &S, c: &S, d: &S| a.clone() * d.clone() - b.clone() * c.clone();
    u.x.clone() * m(&v.y, &w.y, &v.z, &w.z) - v.x.clone() * m(&u.y, &w.y, &u.z, &w.z)
        + w.x.clone() * m(&u.y, &v.y, &u.z, &v.z)
}

/// Lorentzian cross product: `w·(u⊠v) = Det(w,u,v)`.
pub fn cross<S: Scalar>(u: &Vec3<S>, v: &Vec3<S>) -> Vec3<S> {
    let m = |a: &S, b: &S, c: &S, d: &S| a.clone() * b.clone() - c.clone() * d.clone();
    Vec3::new(
        m(&u.y, &v.z, &u.z, &v.y),
        m(&u.z, &v.x, &u.x, &v.z),
        m(&u.y, &v.x, &u.x, &v.y),
    )
}

/// Euclidean cross product, used only for kernels of linear maps.
pub fn euclid_cross<S: Scalar>(u: &Vec3<S>, v: &Vec3<S>) -> Vec3<S> {
    let c = cross(u, v);
    Vec3::new(c.x, c.y, -c.z)
}

pub fn parallel<S: Scalar>(u: &Vec3<S>, v: &Vec3<S>) -> bool {
    euclid_cross(u, v).is_zero()
}

/// `v = c·u` for some `c > 0`.
pub fn same_ray<S: Scalar>(u: &Vec3<S>, v: &Vec3<S>) -> Result<bool> {
    if !parallel(u, v) || u.is_zero() || v.is_zero() {
        return Ok(false);
    }
    Ok((u.x.clone() * v.x.clone() + u.y.clone() * v.y.clone() + u.z.clone() * v.z.clone()).is_pos()?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TimeOrientation {
    Future,
    Past,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CausalClass {
    Zero,
    Spacelike,
    Null(TimeOrientation),
    Timelike(TimeOrientation),
}

pub fn causal_type<S: Scalar>(v: &Vec3<S>) -> Result<CausalClass> {
    if v.is_zero() && S::EXACT {
        return Ok(CausalClass::Zero);
    }
    let orient = || -> Result<TimeOrientation> {
        Ok(match v.z.sign()? {
            Sign::Positive => TimeOrientation::Future,
            Sign::Negative => TimeOrientation::Past,
            Sign::Zero => unreachable!("causal vector with zero time coordinate"),
        })
    };
    Ok(match v.norm2().sign()? {
        Sign::Positive => CausalClass::Spacelike,
        Sign::Zero if v.is_zero() => CausalClass::Zero,
        Sign::Zero => CausalClass::Null(orient()?),
        Sign::Negative => CausalClass::Timelike(orient()?),
    })
}

pub fn is_future_causal<S: Scalar>(v: &Vec3<S>) -> Result<bool> {
    Ok(matches!(
        causal_type(v)?,
        CausalClass::Null(TimeOrientation::Future) | CausalClass::Timelike(TimeOrientation::Future)
    ))
}

fn spacelike_norm<S: Scalar>(v: &Vec3<S>) -> Result<S> {
    let n = v.norm2();
    if n.sign()? != Sign::Positive {
        return Err(Error::NotSpacelike);
    }
    Ok(n)
}

/// The future null directions orthogonal to a spacelike `v`, with
/// `(v⁻, v⁺, v)` positively oriented.
///
/// Exact fields normalize to unit time coordinate, floats to Euclidean
/// length 1. Needs `√(v·v)` in the field.
#[derive(Clone, Debug, PartialEq)]
pub struct NullFrame<S> {
    pub minus: Vec3<S>,
    pub plus: Vec3<S>,
}

/// A future timelike vector in `v⊥` and `w = v⊠x`; then `v^± ∝ x ± w/√N`.
fn frame_basis<S: Scalar>(v: &Vec3<S>, n: &S) -> (Vec3<S>, Vec3<S>) {
    let x = Vec3::new(
        v.x.clone() * v.z.clone(),
        v.y.clone() * v.z.clone(),
        n.clone() + v.z.clone() * v.z.clone(),
    );
    let w = cross(v, &x);
    (x, w)
}

pub fn null_frame<S: Scalar>(v: &Vec3<S>) -> Result<NullFrame<S>> {
    let n = spacelike_norm(v)?;
    let s = n.sqrt().ok_or_else(|| Error::NoExactRoot(n.to_string()))?;
    let (x, w) = frame_basis(v, &n);
    let w = w.div(&s);
    let norm = |u: Vec3<S>| -> Vec3<S> {
        if S::EXACT {
            let z = u.z.clone();
            u.div(&z)
        } else {
            let e = u.euclid2().sqrt().expect("nonnegative");
            u.div(&e)
        }
    };
    Ok(NullFrame { minus: norm(&x - &w), plus: norm(x + w) })
}

/// `sign(a + b√n)` for `n > 0`, decided with rational operations only.
pub fn sign_plus_root<S: Scalar>(a: &S, b: &S, n: &S) -> Result<Sign> {
    let sa = a.sign()?;
    let sb = b.sign()?;
    Ok(match (sa, sb) {
        (s, Sign::Zero) => s,
        (Sign::Zero, s) => s,
        (x, y) if x == y => x,
        (x, _) => (a.clone() * a.clone() - b.clone() * b.clone() * n.clone()).sign()?.times(x),
    })
}

/// Signs of `u·v⁻` and `u·v⁺` without extracting `√(v·v)`.
pub fn frame_signs<S: Scalar>(u: &Vec3<S>, v: &Vec3<S>) -> Result<(Sign, Sign)> {
    let n = spacelike_norm(v)?;
    let (x, w) = frame_basis(v, &n);
    // v^± ∝ √N·x ± w with positive factor.
    let ux = inner(u, &x);
    let uw = inner(u, &w);
    let minus = sign_plus_root(&-uw.clone(), &ux, &n)?;
    let plus = sign_plus_root(&uw, &ux, &n)?;
    Ok((minus, plus))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairType {
    Ultraparallel,
    Asymptotic,
    Crossing,
    Degenerate,
}

impl fmt::Display for PairType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PairType::Ultraparallel => "ultraparallel",
            PairType::Asymptotic => "asymptotic",
            PairType::Crossing => "crossing",
            PairType::Degenerate => "degenerate",
        })
    }
}

pub fn pair_type<S: Scalar>(u: &Vec3<S>, v: &Vec3<S>) -> Result<PairType> {
    spacelike_norm(u)?;
    spacelike_norm(v)?;
    let c = cross(u, v);
    if c.is_zero() {
        return Ok(PairType::Degenerate);
    }
    Ok(match causal_type(&c)? {
        CausalClass::Spacelike => PairType::Ultraparallel,
        CausalClass::Null(_) => PairType::Asymptotic,
        CausalClass::Timelike(_) => PairType::Crossing,
        CausalClass::Zero => PairType::Degenerate,
    })
}

pub fn consistently_oriented<S: Scalar>(vs: &[Vec3<S>]) -> Result<bool> {
    for v in vs {
        spacelike_norm(v)?;
    }
    for (i, a) in vs.iter().enumerate() {
        for (j, b) in vs.iter().enumerate() {
            if i == j {
                continue;
            }
            if inner(a, b).sign()? != Sign::Negative {
                return Ok(false);
            }
            let (m, p) = frame_signs(a, b)?;
            if m == Sign::Positive || p == Sign::Positive {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Position {
    Interior,
    Boundary,
    Exterior,
}

/// Position of the ray through a future causal `w` relative to the
/// half-plane `{w : w·v ≥ 0}`.
pub fn hp_contains<S: Scalar>(v: &Vec3<S>, w: &Vec3<S>) -> Result<Position> {
    spacelike_norm(v)?;
    if !is_future_causal(w)? {
        return Err(Error::BadCausality);
    }
    Ok(match inner(w, v).sign()? {
        Sign::Positive => Position::Interior,
        Sign::Zero => Position::Boundary,
        Sign::Negative => Position::Exterior,
    })
}
