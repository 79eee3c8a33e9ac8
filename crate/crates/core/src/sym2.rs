//! The symmetric-matrix model of Minkowski space and its bridge to [`Vec3`].
//!
//! `ψ(x,y,z) = [[x,y],[y,z]]` with `ψ·ψ′ = (tr(ψψ′) − tr ψ tr ψ′)/2`, so
//! `ψ·ψ = y² − xz`. `GL(2)` acts by `ψ ↦ AψAᵀ`.
//!
//! The bridge is `(a,b,c) ↦ ψ(a−c, −b, −a−c)`. Its orientation is chosen so
//! that the level-two decoration vectors `ψ(−2,0,0)`, `ψ(0,0,−2)` and
//! `ψ(−2,−2,−2)` land on future null vectors that are positive for their
//! generators.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use crate::matrix::{Mat2, Matrix};
use crate::minkowski::Vec3;
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct Sym2<S> {
    pub x: S,
    pub y: S,
    pub z: S,
}

impl<S: Scalar> Sym2<S> {
    pub fn new(x: S, y: S, z: S) -> Self {
        Sym2 { x, y, z }
    }

    pub fn ints(x: i64, y: i64, z: i64) -> Self {
        Sym2::new(S::int(x), S::int(y), S::int(z))
    }

    pub fn zero() -> Self {
        Sym2::ints(0, 0, 0)
    }

    pub fn scale(&self, s: &S) -> Self {
        Sym2::new(self.x.clone() * s.clone(), self.y.clone() * s.clone(), self.z.clone() * s.clone())
    }

    pub fn to_matrix(&self) -> Mat2<S> {
        Matrix::from_rows(vec![vec![self.x.clone(), self.y.clone()], vec![self.y.clone(), self.z.clone()]])
    }

    /// Reads the symmetric part; `None` if `m` is not symmetric.
    pub fn from_matrix(m: &Mat2<S>) -> Option<Self> {
        (m.at(0, 1).clone() - m.at(1, 0).clone())
            .near_zero()
            .then(|| Sym2::new(m.at(0, 0).clone(), m.at(0, 1).clone(), m.at(1, 1).clone()))
    }
}

impl<S: Scalar> Add for Sym2<S> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Sym2::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl<S: Scalar> Sub for Sym2<S> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Sym2::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl<S: Scalar> Neg for Sym2<S> {
    type Output = Self;
    fn neg(self) -> Self {
        Sym2::new(-self.x, -self.y, -self.z)
    }
}

impl<S: Scalar> fmt::Display for Sym2<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "psi({}, {}, {})", self.x, self.y, self.z)
    }
}

pub fn sym_inner<S: Scalar>(a: &Sym2<S>, b: &Sym2<S>) -> S {
    a.y.clone() * b.y.clone() - (a.x.clone() * b.z.clone() + a.z.clone() * b.x.clone()).half()
}

pub fn bridge<S: Scalar>(v: &Vec3<S>) -> Sym2<S> {
    Sym2::new(v.x.clone() - v.z.clone(), -v.y.clone(), -v.x.clone() - v.z.clone())
}

pub fn bridge_inv<S: Scalar>(p: &Sym2<S>) -> Vec3<S> {
    Vec3::new((p.x.clone() - p.z.clone()).half(), -p.y.clone(), -(p.x.clone() + p.z.clone()).half())
}

/// `ψ ↦ AψAᵀ`.
pub fn act<S: Scalar>(a: &Mat2<S>, p: &Sym2<S>) -> Sym2<S> {
    let m = a.mul(&p.to_matrix()).mul(&a.transpose());
    Sym2::new(m.at(0, 0).clone(), m.at(0, 1).clone(), m.at(1, 1).clone())
}

pub fn j2<S: Scalar>() -> Mat2<S> {
    Matrix::from_ints([[0, 1], [-1, 0]])
}

/// `X = ψ·J₂`, a traceless matrix.
pub fn to_traceless<S: Scalar>(p: &Sym2<S>) -> Mat2<S> {
    p.to_matrix().mul(&j2())
}

/// `ψ = X·J₂⁻¹`; `None` if `X` is not traceless.
pub fn from_traceless<S: Scalar>(x: &Mat2<S>) -> Option<Sym2<S>> {
    if !x.trace().near_zero() {
        return None;
    }
    Sym2::from_matrix(&x.mul(&j2::<S>().neg()))
}
