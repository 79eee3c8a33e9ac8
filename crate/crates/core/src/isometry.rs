//! Isometries of Minkowski space: classification, neutral vectors, the
//! Margulis invariant, and the adjoint bridge from `SL(2,R)`.

use crate::error::{Error, Result};
use crate::matrix::{Mat2, Mat3, Matrix};
use crate::minkowski::{det3, euclid_cross, inner, Vec3};
use crate::scalar::{Scalar, Sign};
use crate::sym2::{act, bridge, bridge_inv, from_traceless};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IsoClass {
    Hyperbolic,
    Parabolic,
    Elliptic,
    Identity,
}

/// The Lorentz form `diag(1, 1, −1)`.
pub fn lorentz<S: Scalar>() -> Mat3<S> {
    Matrix::from_ints([[1, 0, 0], [0, 1, 0], [0, 0, -1]])
}

/// Membership in `SO(2,1)⁰`, exact or within tolerance.
pub fn is_isometry<S: Scalar>(m: &Mat3<S>) -> bool {
    if m.dim() != 3 {
        return false;
    }
    let q = lorentz::<S>();
    let preserves = m.transpose().mul(&q).mul(m).near_eq(&q);
    let unimodular = (m.det() - S::one()).near_zero();
    let future = m.at(2, 2).approx() > 0.0;
    preserves && unimodular && future
}

pub fn check_isometry<S: Scalar>(m: &Mat3<S>) -> Result<()> {
    if is_isometry(m) {
        Ok(())
    } else {
        Err(Error::NotAnIsometry)
    }
}

/// Inverse of an element of `SO(2,1)`: `Q Mᵀ Q`.
pub fn iso_inverse<S: Scalar>(m: &Mat3<S>) -> Mat3<S> {
    let q = lorentz::<S>();
    q.mul(&m.transpose()).mul(&q)
}

/// Classifies by the trace `T = 1 + λ + λ⁻¹`: hyperbolic iff `T > 3`,
/// parabolic iff `T = 3` and `M ≠ I`.
pub fn classify<S: Scalar>(m: &Mat3<S>) -> Result<IsoClass> {
    check_isometry(m)?;
    if m.is_identity() {
        return Ok(IsoClass::Identity);
    }
    let t = m.trace() - S::int(3);
    if t.near_zero() {
        return Ok(IsoClass::Parabolic);
    }
    Ok(if t.is_pos()? { IsoClass::Hyperbolic } else { IsoClass::Elliptic })
}

/// Classification of an `SL(2)` lift by `|tr A|` against 2.
pub fn classify_sl2<S: Scalar>(a: &Mat2<S>) -> Result<IsoClass> {
    check_unimodular(a)?;
    let t = a.trace();
    let d = t.clone() * t - S::int(4);
    if d.near_zero() {
        let pm = a.is_identity() || a.neg().is_identity();
        return Ok(if pm { IsoClass::Identity } else { IsoClass::Parabolic });
    }
    Ok(if d.is_pos()? { IsoClass::Hyperbolic } else { IsoClass::Elliptic })
}

pub fn check_unimodular<S: Scalar>(a: &Mat2<S>) -> Result<()> {
    if a.dim() == 2 && (a.det() - S::one()).near_zero() {
        Ok(())
    } else {
        Err(Error::NotUnimodular)
    }
}

/// The adjoint image of `A ∈ SL(2)` in `SO(2,1)⁰`, through the `Sym2` bridge.
pub fn sl2_adjoint<S: Scalar>(a: &Mat2<S>) -> Result<Mat3<S>> {
    check_unimodular(a)?;
    let cols: Vec<Vec3<S>> = (0..3).map(|i| bridge_inv(&act(a, &bridge(&Vec3::e(i))))).collect();
    Ok(Matrix::from_fn(3, |i, j| cols[j].get(i).clone()))
}

/// A nonzero vector spanning `ker(M − I)`, assuming that kernel is a line.
pub fn fixed_direction<S: Scalar>(m: &Mat3<S>) -> Result<Vec3<S>> {
    let r = m.sub(&Matrix::identity(3));
    let row = |i: usize| Vec3::new(r.at(i, 0).clone(), r.at(i, 1).clone(), r.at(i, 2).clone());
    let candidates = [(0, 1), (0, 2), (1, 2)].map(|(i, j)| euclid_cross(&row(i), &row(j)));
    let best = if S::EXACT {
        candidates.into_iter().find(|k| !k.is_zero())
    } else {
        candidates.into_iter().max_by(|a, b| a.euclid2().approx().total_cmp(&b.euclid2().approx()))
    };
    best.filter(|k| !k.is_zero()).ok_or(Error::NotHyperbolicOrParabolic)
}

fn witnesses<S: Scalar>() -> [Vec3<S>; 4] {
    [Vec3::ints(0, 0, 1), Vec3::ints(1, 0, 2), Vec3::ints(0, 1, 2), Vec3::ints(1, 1, 3)]
}

/// Sign of `Det(v, x, gx)` for the first timelike witness `x` giving a
/// nonzero value.
pub fn positivity<S: Scalar>(m: &Mat3<S>, v: &Vec3<S>) -> Result<Sign> {
    for x in witnesses::<S>() {
        let d = det3(v, &x, &m.apply(&x));
        if !d.near_zero() {
            return Ok(d.sign()?);
        }
    }
    Ok(Sign::Zero)
}

/// The positive vector of `m` with respect to the timelike witness `x`.
pub fn is_positive_wrt<S: Scalar>(m: &Mat3<S>, v: &Vec3<S>, x: &Vec3<S>) -> Result<bool> {
    Ok(det3(v, x, &m.apply(x)).is_pos()?)
}

fn orient<S: Scalar>(m: &Mat3<S>, v: Vec3<S>) -> Result<Vec3<S>> {
    match positivity(m, &v)? {
        Sign::Positive => Ok(v),
        Sign::Negative => Ok(-v),
        Sign::Zero => Err(Error::NotHyperbolicOrParabolic),
    }
}

fn normalize<S: Scalar>(class: IsoClass, v: Vec3<S>) -> Result<Vec3<S>> {
    match class {
        IsoClass::Hyperbolic => {
            let n = v.norm2();
            let s = n.sqrt().ok_or_else(|| Error::NoExactRoot(n.to_string()))?;
            Ok(v.div(&s))
        }
        _ => {
            let z = v.z.abs_val()?;
            Ok(v.div(&z))
        }
    }
}

/// The positive fixed vector: unit spacelike at hyperbolic elements, future
/// null with `|z| = 1` at parabolic ones.
pub fn positive_neutral<S: Scalar>(m: &Mat3<S>) -> Result<Vec3<S>> {
    let class = classify(m)?;
    if !matches!(class, IsoClass::Hyperbolic | IsoClass::Parabolic) {
        return Err(Error::NotHyperbolicOrParabolic);
    }
    let v = orient(m, fixed_direction(m)?)?;
    normalize(class, v)
}

/// The fixed direction oriented to be positive, without normalization.
pub fn positive_direction<S: Scalar>(m: &Mat3<S>) -> Result<Vec3<S>> {
    orient(m, fixed_direction(m)?)
}

/// Traceless projection `Â = A − (tr A/2)·I`.
pub fn traceless_projection<S: Scalar>(a: &Mat2<S>) -> Mat2<S> {
    a.sub(&Matrix::identity(2).scale(&a.trace().half()))
}

/// The same vector computed through the traceless projection of a lift.
pub fn positive_neutral_sl2<S: Scalar>(a: &Mat2<S>) -> Result<Vec3<S>> {
    let class = classify_sl2(a)?;
    if !matches!(class, IsoClass::Hyperbolic | IsoClass::Parabolic) {
        return Err(Error::NotHyperbolicOrParabolic);
    }
    let m = sl2_adjoint(a)?;
    let psi = from_traceless(&traceless_projection(a)).expect("projection is traceless");
    let v = orient(&m, bridge_inv(&psi))?;
    normalize(class, v)
}

#[derive(Clone, Debug, PartialEq)]
pub struct AffineIso<S> {
    pub linear: Mat3<S>,
    pub trans: Vec3<S>,
}

impl<S: Scalar> AffineIso<S> {
    pub fn new(linear: Mat3<S>, trans: Vec3<S>) -> Self {
        AffineIso { linear, trans }
    }

    pub fn identity() -> Self {
        AffineIso::new(Matrix::identity(3), Vec3::zero())
    }

    pub fn translation(w: Vec3<S>) -> Self {
        AffineIso::new(Matrix::identity(3), w)
    }

    pub fn linear_only(m: Mat3<S>) -> Self {
        AffineIso::new(m, Vec3::zero())
    }

    pub fn apply(&self, x: &Vec3<S>) -> Vec3<S> {
        self.linear.apply(x) + self.trans.clone()
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        AffineIso::new(self.linear.mul(&other.linear), self.apply(&other.trans))
    }

    pub fn inverse(&self) -> Self {
        let li = iso_inverse(&self.linear);
        let t = -li.apply(&self.trans);
        AffineIso::new(li, t)
    }

    pub fn pow(&self, n: i64) -> Self {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        (0..n.unsigned_abs()).fold(Self::identity(), |acc, _| acc.compose(&base))
    }

    pub fn near_eq(&self, o: &Self) -> bool {
        self.linear.near_eq(&o.linear) && (&self.trans - &o.trans).is_zero()
    }
}

pub fn compose<S: Scalar>(a: &AffineIso<S>, b: &AffineIso<S>) -> AffineIso<S> {
    a.compose(b)
}

pub fn invert<S: Scalar>(a: &AffineIso<S>) -> AffineIso<S> {
    a.inverse()
}

pub fn apply<S: Scalar>(a: &AffineIso<S>, x: &Vec3<S>) -> Vec3<S> {
    a.apply(x)
}

/// `(γ(x) − x)·v` at an arbitrary base point.
pub fn margulis_at<S: Scalar>(g: &AffineIso<S>, v: &Vec3<S>, x: &Vec3<S>) -> S {
    inner(&(g.apply(x) - x.clone()), v)
}

pub fn margulis<S: Scalar>(g: &AffineIso<S>, v: &Vec3<S>) -> Result<S> {
    let class = classify(&g.linear)?;
    if !matches!(class, IsoClass::Hyperbolic | IsoClass::Parabolic) {
        return Err(Error::NotHyperbolicOrParabolic);
    }
    if v.is_zero() || !(&g.linear.apply(v) - v).is_zero() {
        return Err(Error::NotFixedVector);
    }
    Ok(inner(&g.trans, v))
}

/// Margulis invariant taken with the positive neutral vector.
pub fn alpha<S: Scalar>(g: &AffineIso<S>) -> Result<S> {
    margulis(g, &positive_neutral(&g.linear)?)
}

pub fn sign_of<S: Scalar>(g: &AffineIso<S>) -> Result<Sign> {
    Ok(alpha(g)?.sign()?)
}
