//! Crooked planes and crooked half-spaces.
//!
//! `C(v,p)` is the union of two null half-plane wings and a two-quadrant
//! stem. Predicates that only need signs of `·v^±` are decided without square
//! roots. Anything that needs the null frame itself runs over a field where
//! `√(v·v)` exists: over `Q` this means a quadratic tower, chosen per call.

use crate::error::{Error, Result};
use crate::isometry::AffineIso;
use crate::lp::{feasible, Constraint, Rel};
use crate::minkowski::{
    consistently_oriented, cross, frame_signs, inner, null_frame, pair_type, parallel, NullFrame, PairType, Position,
    Vec3,
};
use crate::scalar::{radicals_for, Embed, Float, Scalar, Sign, Surd, Q};

#[derive(Clone, Debug, PartialEq)]
pub struct CrookedPlane<S> {
    pub v: Vec3<S>,
    pub p: Vec3<S>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct HalfSpace<S> {
    pub v: Vec3<S>,
    pub p: Vec3<S>,
}

fn first_nonzero_sign<S: Scalar>(v: &Vec3<S>) -> Result<Sign> {
    for c in v.coords() {
        if !c.near_zero() {
            return Ok(c.sign()?);
        }
    }
    Ok(Sign::Zero)
}

fn require_spacelike<S: Scalar>(v: &Vec3<S>) -> Result<()> {
    if v.norm2().sign()? == Sign::Positive {
        Ok(())
    } else {
        Err(Error::NotSpacelike)
    }
}

impl<S: Scalar> CrookedPlane<S> {
    /// Canonical representative: first nonzero coordinate of `v` positive.
    pub fn new(v: Vec3<S>, p: Vec3<S>) -> Result<Self> {
        require_spacelike(&v)?;
        let v = if first_nonzero_sign(&v)? == Sign::Negative { -v } else { v };
        Ok(CrookedPlane { v, p })
    }

    pub fn halfspace(&self) -> HalfSpace<S> {
        HalfSpace { v: self.v.clone(), p: self.p.clone() }
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> CrookedPlane<T> {
        CrookedPlane { v: self.v.map(&f), p: self.p.map(&f) }
    }
}

impl<S: Scalar> HalfSpace<S> {
    pub fn new(v: Vec3<S>, p: Vec3<S>) -> Result<Self> {
        require_spacelike(&v)?;
        Ok(HalfSpace { v, p })
    }

    pub fn opposite(&self) -> Self {
        HalfSpace { v: -self.v.clone(), p: self.p.clone() }
    }

    pub fn boundary(&self) -> CrookedPlane<S> {
        CrookedPlane::new(self.v.clone(), self.p.clone()).expect("spacelike")
    }

    /// A point of the interior: `p + v + x` with `x` future timelike in `v⊥`.
    pub fn interior_witness(&self) -> Vec3<S> {
        let v = &self.v;
        let n = v.norm2();
        let x = Vec3::new(v.x.clone() * v.z.clone(), v.y.clone() * v.z.clone(), n + v.z.clone() * v.z.clone());
        self.p.clone() + v.clone() + x
    }
}

/// Membership in `H(v,p)`, with `Boundary` meaning the point lies on `C(v,p)`.
pub fn hs_contains<S: Scalar>(h: &HalfSpace<S>, q: &Vec3<S>) -> Result<Position> {
    let d = q - &h.p;
    let dv = inner(&d, &h.v).sign()?;
    let (m, pl) = frame_signs(&d, &h.v)?;
    use Sign::*;
    // Closed sets: on v⊥ either clause suffices, so that H(v) ∪ H(−v) = E
    // and H(v) ∩ H(−v) is exactly the crooked plane.
    let in_h = (dv != Negative && pl != Positive) || (dv != Positive && m != Negative);
    let in_opp = (dv != Positive && m != Positive) || (dv != Negative && pl != Negative);
    Ok(match (in_h, in_opp) {
        (true, true) => Position::Boundary,
        (true, false) => Position::Interior,
        _ => Position::Exterior,
    })
}

pub fn on_plane<S: Scalar>(c: &CrookedPlane<S>, q: &Vec3<S>) -> Result<bool> {
    Ok(hs_contains(&c.halfspace(), q)? == Position::Boundary)
}

/// One closed planar piece: `origin + s·d1 + t·d2` subject to
/// `a·s + b·t ≥ 0` for each `(a, b)` in `constraints`.
#[derive(Clone, Debug, PartialEq)]
pub struct PlanarPiece<S> {
    pub origin: Vec3<S>,
    pub d1: Vec3<S>,
    pub d2: Vec3<S>,
    pub constraints: Vec<(S, S)>,
}

impl<S: Scalar> PlanarPiece<S> {
    pub fn point(&self, s: &S, t: &S) -> Vec3<S> {
        self.origin.clone() + self.d1.scale(s) + self.d2.scale(t)
    }

    pub fn contains_params(&self, s: &S, t: &S) -> Result<bool> {
        for (a, b) in &self.constraints {
            if (a.clone() * s.clone() + b.clone() * t.clone()).is_neg()? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

pub const PIECE_NAMES: [&str; 4] = ["wing+", "wing-", "stem future", "stem past"];

/// Wing `P(v⁺)`, wing `P(v⁻)`, future stem quadrant, past stem quadrant.
pub fn pieces<S: Scalar>(c: &CrookedPlane<S>) -> Result<[PlanarPiece<S>; 4]> {
    let NullFrame { minus, plus } = null_frame(&c.v)?;
    let (one, zero) = (S::one(), S::zero());
    let p = c.p.clone();
    let piece = |d1: Vec3<S>, d2: Vec3<S>, k: Vec<(S, S)>| PlanarPiece { origin: p.clone(), d1, d2, constraints: k };
    Ok([
        piece(c.v.clone(), plus.clone(), vec![(one.clone(), zero.clone())]),
        piece(-c.v.clone(), minus.clone(), vec![(one.clone(), zero.clone())]),
        piece(minus.clone(), plus.clone(), vec![(one.clone(), zero.clone()), (zero.clone(), one.clone())]),
        piece(minus, plus, vec![(-one.clone(), zero.clone()), (zero, -one)]),
    ])
}

pub fn image<S: Scalar>(g: &AffineIso<S>, c: &CrookedPlane<S>) -> Result<CrookedPlane<S>> {
    CrookedPlane::new(g.linear.apply(&c.v), g.apply(&c.p))
}

/// The image half-space, its side fixed by transporting an interior witness.
pub fn image_halfspace<S: Scalar>(g: &AffineIso<S>, h: &HalfSpace<S>) -> Result<HalfSpace<S>> {
    let cand = HalfSpace::new(g.linear.apply(&h.v), g.apply(&h.p))?;
    let w = g.apply(&h.interior_witness());
    Ok(match hs_contains(&cand, &w)? {
        Position::Interior => cand,
        Position::Exterior => cand.opposite(),
        Position::Boundary => return Err(Error::VerificationFailed("witness landed on the image plane".into())),
    })
}

/// Signs `(s₁, s₂)` applied to `(v₁, v₂)` making the pair consistently oriented.
pub fn orient_pair<S: Scalar>(v1: &Vec3<S>, v2: &Vec3<S>) -> Result<(Vec3<S>, Vec3<S>)> {
    for (a, b) in [(false, false), (false, true), (true, false), (true, true)] {
        let x = if a { -v1.clone() } else { v1.clone() };
        let y = if b { -v2.clone() } else { v2.clone() };
        if consistently_oriented(&[x.clone(), y.clone()])? {
            return Ok((x, y));
        }
    }
    Err(Error::NotConsistentlyOriented)
}

fn expect_type<S: Scalar>(v1: &Vec3<S>, v2: &Vec3<S>, want: PairType) -> Result<()> {
    let t = pair_type(v1, v2)?;
    if t == want {
        Ok(())
    } else {
        Err(Error::WrongPairType { expected: if want == PairType::Asymptotic { "asymptotic" } else { "ultraparallel" }, found: t.to_string() })
    }
}

/// `d·(v₁⊠v₂) > |d·v₂|·|v₁| + |d·v₁|·|v₂|` with `d = p₂ − p₁`, squared out so
/// that no square roots are taken.
pub fn disjoint_ultraparallel<S: Scalar>(c1: &CrookedPlane<S>, c2: &CrookedPlane<S>) -> Result<bool> {
    expect_type(&c1.v, &c2.v, PairType::Ultraparallel)?;
    let (v1, v2) = orient_pair(&c1.v, &c2.v)?;
    let d = &c2.p - &c1.p;
    let l = inner(&d, &cross(&v1, &v2));
    if !l.is_pos()? {
        return Ok(false);
    }
    let (n1, n2) = (v1.norm2(), v2.norm2());
    let a = inner(&d, &v2);
    let b = inner(&d, &v1);
    let x = l.clone() * l - n1.clone() * a.clone() * a.clone() - n2.clone() * b.clone() * b.clone();
    if !x.is_pos()? {
        return Ok(false);
    }
    let rhs = S::int(4) * a.clone() * a * b.clone() * b * n1 * n2;
    Ok((x.clone() * x - rhs).is_pos()?)
}

/// A consistently oriented asymptotic pair relabeled so that `v₁⁻ ∥ v₂⁺`.
pub struct AsymptoticLabels<S> {
    pub swapped: bool,
    pub v1: Vec3<S>,
    pub v2: Vec3<S>,
    pub f1: NullFrame<S>,
    pub f2: NullFrame<S>,
}

pub fn label_asymptotic<S: Scalar>(v1: &Vec3<S>, v2: &Vec3<S>) -> Result<AsymptoticLabels<S>> {
    expect_type(v1, v2, PairType::Asymptotic)?;
    let (v1, v2) = orient_pair(v1, v2)?;
    let (f1, f2) = (null_frame(&v1)?, null_frame(&v2)?);
    if parallel(&f1.minus, &f2.plus) {
        Ok(AsymptoticLabels { swapped: false, v1, v2, f1, f2 })
    } else if parallel(&f2.minus, &f1.plus) {
        Ok(AsymptoticLabels { swapped: true, v1: v2, v2: v1, f1: f2, f2: f1 })
    } else {
        Err(Error::LabelingFailed)
    }
}

/// `d·v₁ < 0`, `d·v₂ < 0` and `d·(v₁⁺⊠v₂⁻) > 0` after labeling.
pub fn disjoint_asymptotic<S: Scalar>(c1: &CrookedPlane<S>, c2: &CrookedPlane<S>) -> Result<bool> {
    let lab = label_asymptotic(&c1.v, &c2.v)?;
    let d = if lab.swapped { &c1.p - &c2.p } else { &c2.p - &c1.p };
    Ok(inner(&d, &lab.v1).is_neg()?
        && inner(&d, &lab.v2).is_neg()?
        && inner(&d, &cross(&lab.f1.plus, &lab.f2.minus)).is_pos()?)
}

/// Dispatches to the closed-form criterion for the pair type.
pub fn disjoint_closed_form<S: Scalar>(c1: &CrookedPlane<S>, c2: &CrookedPlane<S>) -> Result<bool> {
    match pair_type(&c1.v, &c2.v)? {
        PairType::Ultraparallel => disjoint_ultraparallel(c1, c2),
        PairType::Asymptotic => disjoint_asymptotic(c1, c2),
        t => Err(Error::WrongPairType { expected: "ultraparallel or asymptotic", found: t.to_string() }),
    }
}

/// Generators of the open cone of sufficient vertex displacements, together
/// with the displacement `d` they must represent.
fn cone_data<S: Scalar>(c1: &CrookedPlane<S>, c2: &CrookedPlane<S>) -> Result<(Vec<Vec3<S>>, Vec3<S>)> {
    match pair_type(&c1.v, &c2.v)? {
        PairType::Ultraparallel => {
            let (v1, v2) = orient_pair(&c1.v, &c2.v)?;
            let (f1, f2) = (null_frame(&v1)?, null_frame(&v2)?);
            Ok((vec![f2.minus, -f2.plus, -f1.minus, f1.plus], &c2.p - &c1.p))
        }
        PairType::Asymptotic => {
            let lab = label_asymptotic(&c1.v, &c2.v)?;
            let d = if lab.swapped { &c1.p - &c2.p } else { &c2.p - &c1.p };
            Ok((vec![lab.f2.minus, -lab.f1.minus, lab.f1.plus], d))
        }
        t => Err(Error::WrongPairType { expected: "ultraparallel or asymptotic", found: t.to_string() }),
    }
}

/// Whether `d` is a strictly positive combination of `gens`; returns the coefficients.
pub fn in_open_cone<S: Scalar>(gens: &[Vec3<S>], d: &Vec3<S>) -> Result<Option<Vec<S>>> {
    let k = gens.len();
    let mut cs: Vec<Constraint<S>> = (0..3)
        .map(|i| Constraint::new(gens.iter().map(|g| g.get(i).clone()).collect(), Rel::Eq, d.get(i).clone()))
        .collect();
    for j in 0..k {
        let mut e = vec![S::zero(); k];
        e[j] = S::one();
        cs.push(Constraint::new(e, Rel::Gt, S::zero()));
    }
    feasible(k, &cs)
}

/// Sufficient condition for disjointness: `p₂ − p₁` in the open cone
/// spanned by `{v₂⁻, −v₂⁺, −v₁⁻, v₁⁺}` (three rays in the asymptotic case).
pub fn cone_disjoint_in<S: Scalar>(c1: &CrookedPlane<S>, c2: &CrookedPlane<S>) -> Result<bool> {
    let (gens, d) = cone_data(c1, c2)?;
    Ok(in_open_cone(&gens, &d)?.is_some())
}

/// Sum of the cone generators for a pair: a displacement direction that
/// separates the planes.
pub fn cone_direction<S: Scalar>(c1: &CrookedPlane<S>, c2: &CrookedPlane<S>) -> Result<Vec3<S>> {
    let (gens, _) = cone_data(c1, c2)?;
    let sum = gens.into_iter().fold(Vec3::zero(), |a, g| a + g);
    Ok(match pair_type(&c1.v, &c2.v)? {
        PairType::Asymptotic if label_asymptotic(&c1.v, &c2.v)?.swapped => -sum,
        _ => sum,
    })
}

/// Index pair of intersecting pieces and a common point, or `None`.
pub type Contact<S> = Option<((usize, usize), Vec3<S>)>;

/// Decides `C₁ ∩ C₂ ≠ ∅` over any field containing both null frames.
pub fn intersect_in<S: Scalar>(c1: &CrookedPlane<S>, c2: &CrookedPlane<S>) -> Result<Contact<S>> {
    let (pa, pb) = (pieces(c1)?, pieces(c2)?);
    for (i, a) in pa.iter().enumerate() {
        for (j, b) in pb.iter().enumerate() {
            let mut cs: Vec<Constraint<S>> = (0..3)
                .map(|k| {
                    let co = vec![a.d1.get(k).clone(), a.d2.get(k).clone(), -b.d1.get(k).clone(), -b.d2.get(k).clone()];
                    Constraint::new(co, Rel::Eq, b.origin.get(k).clone() - a.origin.get(k).clone())
                })
                .collect();
            for (x, y) in &a.constraints {
                cs.push(Constraint::new(vec![x.clone(), y.clone(), S::zero(), S::zero()], Rel::Ge, S::zero()));
            }
            for (x, y) in &b.constraints {
                cs.push(Constraint::new(vec![S::zero(), S::zero(), x.clone(), y.clone()], Rel::Ge, S::zero()));
            }
            if let Some(sol) = feasible(4, &cs)? {
                return Ok(Some(((i, j), a.point(&sol[0], &sol[1]))));
            }
        }
    }
    Ok(None)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Witness {
    pub approx: [f64; 3],
    pub exact: [String; 3],
}

impl Witness {
    fn from<S: Scalar>(v: &Vec3<S>) -> Self {
        Witness { approx: v.approx(), exact: [v.x.to_string(), v.y.to_string(), v.z.to_string()] }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Verdict {
    Disjoint,
    Intersect { pieces: (usize, usize), witness: Witness },
}

impl Verdict {
    pub fn is_disjoint(&self) -> bool {
        matches!(self, Verdict::Disjoint)
    }
}

fn verdict<S: Scalar>(c: Contact<S>) -> Verdict {
    match c {
        None => Verdict::Disjoint,
        Some((pieces, w)) => Verdict::Intersect { pieces, witness: Witness::from(&w) },
    }
}

/// Work that needs the null frames of some rational vectors.
pub trait TowerJob {
    type Out;
    fn run<S: Embed>(self, radicals: &[Q]) -> Result<Self::Out>;
}

/// Runs `job` over `Q`, `Q(√r)` or `Q(√r₁, √r₂)`, whichever contains
/// square roots of all `norms`.
pub fn in_tower<J: TowerJob>(norms: &[Q], job: J) -> Result<J::Out> {
    let rads = radicals_for(norms).ok_or_else(|| Error::NoExactRoot("more than two independent radicals".into()))?;
    match rads.len() {
        0 => job.run::<Q>(&rads),
        1 => job.run::<Surd<Q>>(&rads),
        _ => job.run::<Surd<Surd<Q>>>(&rads),
    }
}

pub fn lift<S: Embed>(v: &Vec3<Q>, radicals: &[Q]) -> Vec3<S> {
    v.map(|c| S::embed_q(c, radicals))
}

pub fn lift_plane<S: Embed>(c: &CrookedPlane<Q>, radicals: &[Q]) -> CrookedPlane<S> {
    CrookedPlane { v: lift(&c.v, radicals), p: lift(&c.p, radicals) }
}

struct OracleJob<'a>(&'a CrookedPlane<Q>, &'a CrookedPlane<Q>);

impl TowerJob for OracleJob<'_> {
    type Out = Verdict;
    fn run<S: Embed>(self, r: &[Q]) -> Result<Verdict> {
        Ok(verdict(intersect_in(&lift_plane::<S>(self.0, r), &lift_plane::<S>(self.1, r))?))
    }
}

struct ConeJob<'a>(&'a CrookedPlane<Q>, &'a CrookedPlane<Q>);

impl TowerJob for ConeJob<'_> {
    type Out = bool;
    fn run<S: Embed>(self, r: &[Q]) -> Result<bool> {
        cone_disjoint_in(&lift_plane::<S>(self.0, r), &lift_plane::<S>(self.1, r))
    }
}

/// Scalars on which the frame-dependent predicates can be run.
pub trait PlaneField: Scalar {
    /// The exact oracle. Floats are refused with `NotRational`.
    fn oracle(c1: &CrookedPlane<Self>, c2: &CrookedPlane<Self>) -> Result<Verdict>;
    fn cone(c1: &CrookedPlane<Self>, c2: &CrookedPlane<Self>) -> Result<bool>;
    /// The best available decision: exact for `Q`, tolerance-bound for floats.
    fn decide(c1: &CrookedPlane<Self>, c2: &CrookedPlane<Self>) -> Result<Verdict>;
}

impl PlaneField for Q {
    fn oracle(c1: &CrookedPlane<Q>, c2: &CrookedPlane<Q>) -> Result<Verdict> {
        in_tower(&[c1.v.norm2(), c2.v.norm2()], OracleJob(c1, c2))
    }

    fn cone(c1: &CrookedPlane<Q>, c2: &CrookedPlane<Q>) -> Result<bool> {
        in_tower(&[c1.v.norm2(), c2.v.norm2()], ConeJob(c1, c2))
    }

    fn decide(c1: &CrookedPlane<Q>, c2: &CrookedPlane<Q>) -> Result<Verdict> {
        Self::oracle(c1, c2)
    }
}

impl PlaneField for Float {
    fn oracle(_: &CrookedPlane<Float>, _: &CrookedPlane<Float>) -> Result<Verdict> {
        Err(Error::NotRational)
    }

    fn cone(c1: &CrookedPlane<Float>, c2: &CrookedPlane<Float>) -> Result<bool> {
        cone_disjoint_in(c1, c2)
    }

    fn decide(c1: &CrookedPlane<Float>, c2: &CrookedPlane<Float>) -> Result<Verdict> {
        intersects_approx(c1, c2)
    }
}

pub fn intersects_exact<S: PlaneField>(c1: &CrookedPlane<S>, c2: &CrookedPlane<S>) -> Result<Verdict> {
    S::oracle(c1, c2)
}

/// The same decision procedure in floating point. Near-degenerate signs
/// surface as `Indeterminate` instead of a guess, so a returned verdict is
/// reliable only up to the float tolerance.
pub fn intersects_approx(c1: &CrookedPlane<Float>, c2: &CrookedPlane<Float>) -> Result<Verdict> {
    Ok(verdict(intersect_in(c1, c2)?))
}

pub fn cone_disjoint<S: PlaneField>(c1: &CrookedPlane<S>, c2: &CrookedPlane<S>) -> Result<bool> {
    S::cone(c1, c2)
}

#[derive(Clone, Debug, PartialEq)]
pub enum EntryTime<S> {
    /// Interior for every `t > T`, and `T` is the least such value.
    After(S),
    /// The whole line lies in the interior.
    Always,
    NeverEventually,
}

/// When the ray `q + t·w` enters the interior of `H` for good.
pub fn entry_time<S: Scalar>(h: &HalfSpace<S>, q: &Vec3<S>, w: &Vec3<S>) -> Result<EntryTime<S>> {
    let wv = inner(w, &h.v);
    let s = wv.sign()?;
    if s == Sign::Zero {
        return Err(Error::TangentDirection);
    }
    if s == Sign::Negative {
        return Ok(EntryTime::NeverEventually);
    }
    let f = null_frame(&h.v)?;
    let d0 = q - &h.p;
    let mut breaks: Vec<S> = Vec::new();
    for dir in [&h.v, &f.minus, &f.plus] {
        let slope = inner(w, dir);
        if !slope.near_zero() {
            breaks.push(-inner(&d0, dir) / slope);
        }
    }
    breaks.sort_by(|a, b| a.approx().total_cmp(&b.approx()));
    breaks.dedup_by(|a, b| (a.clone() - b.clone()).near_zero());
    let interior = |t: &S| -> Result<bool> {
        Ok(hs_contains(h, &(q.clone() + w.scale(t)))? == Position::Interior)
    };
    let last = breaks.last().expect("w·v ≠ 0 gives a breakpoint").clone();
    if !interior(&(last.clone() + S::one()))? {
        return Ok(EntryTime::NeverEventually);
    }
    for k in (0..breaks.len()).rev() {
        let b = &breaks[k];
        let below = if k == 0 { b.clone() - S::one() } else { (breaks[k - 1].clone() + b.clone()).half() };
        if !interior(b)? || !interior(&below)? {
            return Ok(EntryTime::After(b.clone()));
        }
    }
    Ok(EntryTime::Always)
}
