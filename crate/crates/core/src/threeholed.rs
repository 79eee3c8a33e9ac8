//! Three-holed spheres. A decorated group fixes the three boundary
//! generators and their positive vectors; deformations are cocycles
//! `(u₁, u₂)`, with `u₃` forced by `γ₁γ₂γ₃ = 1`. Positive Margulis triples are
//! realized by three disjoint crooked planes whose vertices come from an
//! explicit weight solution, and those planes are then completed to a
//! four-sided crooked fundamental domain.

use rand::Rng;

use crate::crooked::{
    cone_direction, disjoint_closed_form, hs_contains, image, CrookedPlane, HalfSpace, PlaneField, Verdict,
};
use crate::error::{Error, Result};
use crate::isometry::{
    alpha, classify, iso_inverse, margulis, positive_direction, positive_neutral, sl2_adjoint, AffineIso, IsoClass,
};
use crate::matrix::{rank, solve, Mat2, Mat3, Matrix};
use crate::minkowski::{consistently_oriented, cross, inner, null_frame, parallel, Position, Vec3};
use crate::scalar::{Indeterminate, Scalar, Sign, Q};
use crate::sym2::{bridge_inv, Sym2};
use crate::symplectic::{level_two_g1, level_two_g2};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EndType {
    Hyperbolic,
    Parabolic,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DecoratedGroup<S> {
    /// `g₁, g₂` and `g₃ = (g₁g₂)⁻¹` in `SL(2)`.
    pub sl2: [Mat2<S>; 3],
    pub linear: [Mat3<S>; 3],
    pub ends: [EndType; 3],
    /// The positive vectors `v̊ᵢ`.
    pub neutral: [Vec3<S>; 3],
    pub x_minus: [Vec3<S>; 3],
    pub x_plus: [Vec3<S>; 3],
}

/// Decorates `⟨g₁, g₂⟩`. `scales` multiplies `v̊ᵢ` at parabolic ends and is
/// ignored at hyperbolic ones, where `v̊ᵢ` is unit spacelike.
pub fn build_decorated<S: Scalar>(g1: &Mat2<S>, g2: &Mat2<S>, scales: Option<&[S; 3]>) -> Result<DecoratedGroup<S>> {
    let sl2 = [g1.clone(), g2.clone(), g1.mul(g2).inverse()?];
    let (mut linear, mut ends, mut neutral, mut xm, mut xp) = (vec![], vec![], vec![], vec![], vec![]);
    for (i, g) in sl2.iter().enumerate() {
        let m = sl2_adjoint(g)?;
        let end = match classify(&m)? {
            IsoClass::Hyperbolic => EndType::Hyperbolic,
            IsoClass::Parabolic => EndType::Parabolic,
            _ => return Err(Error::EllipticGenerator(i + 1)),
        };
        let mut v = positive_neutral(&m)?;
        match end {
            EndType::Hyperbolic => {
                let f = null_frame(&v)?;
                xm.push(f.minus);
                xp.push(f.plus);
            }
            EndType::Parabolic => {
                if let Some(s) = scales {
                    if !s[i].is_pos()? {
                        return Err(Error::InvalidParameter(format!("scale {} at end {}", s[i], i + 1)));
                    }
                    v = v.scale(&s[i]);
                }
                xm.push(v.clone());
                xp.push(v.clone());
            }
        }
        linear.push(m);
        ends.push(end);
        neutral.push(v);
    }
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        if parallel(&neutral[i], &neutral[j]) {
            return Err(Error::CoincidentAxes(i + 1, j + 1));
        }
    }
    let arr = |v: Vec<Vec3<S>>| -> [Vec3<S>; 3] { v.try_into().expect("three ends") };
    Ok(DecoratedGroup {
        sl2,
        linear: linear.try_into().expect("three ends"),
        ends: ends.try_into().expect("three ends"),
        neutral: arr(neutral),
        x_minus: arr(xm),
        x_plus: arr(xp),
    })
}

/// The level-two congruence group, decorated so that `v̊ᵢ` corresponds to
/// `ψ(−2,0,0)`, `ψ(0,0,−2)`, `ψ(−2,−2,−2)`.
pub fn level_two() -> DecoratedGroup<Q> {
    let s = [Q::from_integer(1.into()), Q::from_integer(1.into()), Q::from_integer(2.into())];
    build_decorated(&level_two_g1(), &level_two_g2(), Some(&s)).expect("level-two group is valid")
}

/// Translational parts of `γ₁`, `γ₂`.
#[derive(Clone, Debug, PartialEq)]
pub struct Cocycle<S> {
    pub u1: Vec3<S>,
    pub u2: Vec3<S>,
}

fn relation_u3<S: Scalar>(linear: &[Mat3<S>; 3], u1: &Vec3<S>, u2: &Vec3<S>) -> Vec3<S> {
    -linear[2].apply(&(u1.clone() + linear[0].apply(u2)))
}

impl<S: Scalar> Cocycle<S> {
    pub fn new(u1: Vec3<S>, u2: Vec3<S>) -> Self {
        Cocycle { u1, u2 }
    }

    pub fn zero() -> Self {
        Cocycle::new(Vec3::zero(), Vec3::zero())
    }

    /// `u₃ = −g₃(u₁ + g₁u₂)`, so that `γ₃ = (γ₁γ₂)⁻¹`.
    pub fn u3(&self, g: &DecoratedGroup<S>) -> Vec3<S> {
        relation_u3(&g.linear, &self.u1, &self.u2)
    }

    pub fn affine(&self, g: &DecoratedGroup<S>) -> [AffineIso<S>; 3] {
        let t = [self.u1.clone(), self.u2.clone(), self.u3(g)];
        [0, 1, 2].map(|i| AffineIso::new(g.linear[i].clone(), t[i].clone()))
    }

    pub fn to_vec(&self) -> Vec<S> {
        [&self.u1, &self.u2].iter().flat_map(|u| u.coords().map(|c| c.clone())).collect()
    }

    pub fn from_slice(x: &[S]) -> Self {
        Cocycle::new(
            Vec3::new(x[0].clone(), x[1].clone(), x[2].clone()),
            Vec3::new(x[3].clone(), x[4].clone(), x[5].clone()),
        )
    }
}

/// `uᵢ = w − gᵢw`: conjugation by the translation `w`.
pub fn coboundary<S: Scalar>(g: &DecoratedGroup<S>, w: &Vec3<S>) -> Cocycle<S> {
    Cocycle::new(w - &g.linear[0].apply(w), w - &g.linear[1].apply(w))
}

pub fn mu_of<S: Scalar>(g: &DecoratedGroup<S>, u: &Cocycle<S>) -> Result<[S; 3]> {
    let aff = u.affine(g);
    Ok([margulis(&aff[0], &g.neutral[0])?, margulis(&aff[1], &g.neutral[1])?, margulis(&aff[2], &g.neutral[2])?])
}

/// `μ` as a 3×6 matrix acting on `(u₁, u₂)`.
pub fn mu_matrix<S: Scalar>(g: &DecoratedGroup<S>) -> Result<Vec<Vec<S>>> {
    let mut rows = vec![Vec::with_capacity(6); 3];
    for k in 0..6 {
        let mut e = vec![S::zero(); 6];
        e[k] = S::one();
        let col = mu_of(g, &Cocycle::from_slice(&e))?;
        for (row, c) in rows.iter_mut().zip(col) {
            row.push(c);
        }
    }
    Ok(rows)
}

/// The minimum-norm preimage `Mᵀ(MMᵀ)⁻¹t`.
pub fn mu_inverse<S: Scalar>(g: &DecoratedGroup<S>, target: &[S; 3]) -> Result<Cocycle<S>> {
    let m = mu_matrix(g)?;
    let r = rank(&m);
    if r != 3 {
        return Err(Error::RankDeficient(r));
    }
    let gram = Matrix::from_fn(3, |i, j| m[i].iter().zip(&m[j]).fold(S::zero(), |a, (x, y)| a + x.clone() * y.clone()));
    let y = solve(&gram, target).map_err(|_| Error::RankDeficient(r))?;
    let x: Vec<S> = (0..6).map(|k| (0..3).fold(S::zero(), |a, i| a + m[i][k].clone() * y[i].clone())).collect();
    Ok(Cocycle::from_slice(&x))
}

fn mat2<S: Scalar>(a: S, b: S, c: S, d: S) -> Mat2<S> {
    Matrix::from_rows(vec![vec![a, b], vec![c, d]])
}

/// `A₁ = [[a₁,−1],[1,0]]`, `A₂ = [[0,−b₃],[1/b₃,a₂]]` and an upper-triangular
/// `A₃ = [[b₃,x],[0,1/b₃]]`, with `x = ±a₁b₃ ± a₂` chosen by search so that
/// `A₁A₂A₃ = ±I`.
pub fn trace_slice_b3<S: Scalar>(a1: &S, a2: &S, b3: &S) -> Result<[Mat2<S>; 3]> {
    if b3.near_zero() {
        return Err(Error::InvalidParameter("b3 = 0".into()));
    }
    let m1 = mat2(a1.clone(), S::int(-1), S::one(), S::zero());
    let m2 = mat2(S::zero(), -b3.clone(), b3.recip(), a2.clone());
    let m12 = m1.mul(&m2);
    let id = Matrix::<S>::identity(2);
    for (s1, s2) in [(-1, -1), (-1, 1), (1, -1), (1, 1)] {
        let x = S::int(s1) * a1.clone() * b3.clone() + S::int(s2) * a2.clone();
        let m3 = mat2(b3.clone(), x, S::zero(), b3.recip());
        let p = m12.mul(&m3);
        if p.near_eq(&id) || p.near_eq(&id.neg()) {
            return Ok([m1, m2, m3]);
        }
    }
    Err(Error::RelationUnsatisfiable)
}

/// The slice with traces `a₁, a₂, a₃`, taking the root `b₃ ≥ 1` of
/// `b₃ + 1/b₃ = a₃` (or `≤ −1` when `a₃ ≤ −2`).
pub fn trace_slice_representation<S: Scalar>(a1: &S, a2: &S, a3: &S) -> Result<[Mat2<S>; 3]> {
    let disc = a3.clone() * a3.clone() - S::int(4);
    if disc.is_neg()? {
        return Err(Error::NoRealB3(a3.to_string()));
    }
    let r = disc.sqrt().ok_or_else(|| Error::NoExactRoot(disc.to_string()))?;
    let b3 = if a3.is_neg()? { (a3.clone() - r).half() } else { (a3.clone() + r).half() };
    trace_slice_b3(a1, a2, &b3)
}

/// Fuchsian pants generators on the trace slice: end `i` has `SL(2)` trace
/// `−(λᵢ + 1/λᵢ)`, or `−2` (a cusp) when `λᵢ` is `None`.
pub fn pants_generators(lambdas: [Option<Q>; 3]) -> Result<(Mat2<Q>, Mat2<Q>)> {
    for l in lambdas.iter().flatten() {
        if !l.is_pos()? || *l == Q::one() {
            return Err(Error::InvalidParameter(format!("lambda = {l}")));
        }
    }
    let trace = |l: &Option<Q>| match l {
        Some(l) => -(l.clone() + l.recip()),
        None => Q::int(-2),
    };
    let b3 = lambdas[2].clone().unwrap_or_else(Q::one);
    let [m1, m2, _] = trace_slice_b3(&trace(&lambdas[0]), &trace(&lambdas[1]), &b3)?;
    Ok((m1, m2))
}

/// Margulis invariants of the basis cocycle `u(A₁) = ψ(1,0,0)`, `u(A₂) = 0`
/// on the trace slice, each taken with an unnormalized positive vector so
/// that no square roots are needed. Only the signs are meaningful.
pub fn appendix_cocycle_mu<S: Scalar>(a1: &S, a2: &S, b3: &S) -> Result<[S; 3]> {
    let [m1, m2, _] = trace_slice_b3(a1, a2, b3)?;
    let linear = [sl2_adjoint(&m1)?, sl2_adjoint(&m2)?, sl2_adjoint(&m1.mul(&m2).inverse()?)?];
    let u1 = bridge_inv(&Sym2::ints(1, 0, 0));
    let u2 = Vec3::zero();
    let t = [u1.clone(), u2.clone(), relation_u3(&linear, &u1, &u2)];
    let mut mu = Vec::with_capacity(3);
    for i in 0..3 {
        let v = positive_direction(&linear[i])?;
        mu.push(margulis(&AffineIso::new(linear[i].clone(), t[i].clone()), &v)?);
    }
    Ok(mu.try_into().expect("three ends"))
}

/// The arcs `vⱼ = −(Xⱼ⊠Xⱼ₋₁)/(Xⱼ·Xⱼ₋₁)` between consecutive endpoints
/// `Xⱼ = xⱼ⁺`, indices mod 3.
pub fn lamination_vectors<S: Scalar>(g: &DecoratedGroup<S>) -> Result<[Vec3<S>; 3]> {
    let mut out = Vec::with_capacity(3);
    for j in 0..3 {
        let (x, y) = (&g.x_plus[j], &g.x_plus[(j + 2) % 3]);
        let d = inner(x, y);
        if d.near_zero() {
            return Err(Error::DegenerateEndpoints);
        }
        out.push(cross(x, y).div(&-d));
    }
    Ok(out.try_into().expect("three arcs"))
}

pub const TRIPLE_PAIRS: [(usize, usize); 3] = [(0, 1), (1, 2), (2, 0)];

#[derive(Clone, Debug, PartialEq)]
pub struct TripleReport<S> {
    pub consistently_oriented: bool,
    pub closed_form: [bool; 3],
    pub verdicts: [Verdict; 3],
    pub mu: [S; 3],
    pub mu_matches: bool,
}

impl<S> TripleReport<S> {
    pub fn verified(&self) -> bool {
        self.consistently_oriented
            && self.closed_form.iter().all(|&b| b)
            && self.verdicts.iter().all(Verdict::is_disjoint)
            && self.mu_matches
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DomainTriple<S> {
    pub v: [Vec3<S>; 3],
    pub a: [S; 3],
    pub b: [S; 3],
    pub p: [Vec3<S>; 3],
    /// `β(i,j) = −Xᵢ·v̊ⱼ`.
    pub beta: [[S; 3]; 3],
    pub cocycle: Cocycle<S>,
    pub report: TripleReport<S>,
}

impl<S: Scalar> DomainTriple<S> {
    pub fn plane(&self, i: usize) -> CrookedPlane<S> {
        CrookedPlane::new(self.v[i].clone(), self.p[i].clone()).expect("lamination vectors are spacelike")
    }
}

fn check_mu<S: Scalar>(mu: &[S; 3]) -> Result<()> {
    let pos = mu.iter().map(|m| m.is_pos()).collect::<Result<Vec<bool>, Indeterminate>>()?;
    if pos.iter().all(|&p| p) {
        return Ok(());
    }
    let shown = format!("{}, {}, {}", mu[0], mu[1], mu[2]);
    Err(Error::NonPositiveMu(shown))
}

/// Vertices `pⱼ = aⱼXⱼ − bⱼXⱼ₋₁` for a positive triple, with every check run
/// and recorded but not enforced. `weights` are the `pᵢ` of the splitting
/// `μᵢ = pᵢμᵢ + qᵢμᵢ`, default `1/2`.
pub fn construct_triple<S: PlaneField>(
    g: &DecoratedGroup<S>,
    mu: &[S; 3],
    weights: Option<&[S; 3]>,
) -> Result<DomainTriple<S>> {
    check_mu(mu)?;
    let half = S::one().half();
    let pw = weights.cloned().unwrap_or_else(|| [half.clone(), half.clone(), half]);
    for w in &pw {
        if !w.is_pos()? || !(S::one() - w.clone()).is_pos()? {
            return Err(Error::InvalidParameter(format!("weight {w} not in (0, 1)")));
        }
    }
    let qw = pw.clone().map(|w| S::one() - w);
    let x = &g.x_plus;
    let beta: [[S; 3]; 3] = [0, 1, 2].map(|i| [0, 1, 2].map(|j| -inner(&x[i], &g.neutral[j])));
    for (i, j) in [(1, 0), (2, 0), (2, 1), (0, 1), (0, 2), (1, 2)] {
        if !beta[i][j].is_pos()? {
            return Err(Error::VerificationFailed(format!("beta({i},{j}) = {} is not positive", beta[i][j])));
        }
    }
    let w = |p: &S, m: &S, b: &S| p.clone() * m.clone() / b.clone();
    let a = [
        w(&pw[2], &mu[2], &beta[0][2]),
        w(&pw[0], &mu[0], &beta[1][0]),
        w(&pw[1], &mu[1], &beta[2][1]),
    ];
    let b = [
        w(&qw[0], &mu[0], &beta[2][0]),
        w(&qw[1], &mu[1], &beta[0][1]),
        w(&qw[2], &mu[2], &beta[1][2]),
    ];
    let v = lamination_vectors(g)?;
    let p: [Vec3<S>; 3] = [0, 1, 2].map(|j| x[j].scale(&a[j]) - x[(j + 2) % 3].scale(&b[j]));
    let cocycle = Cocycle::new(&p[0] - &g.linear[0].apply(&p[1]), &p[1] - &g.linear[1].apply(&p[2]));
    let got = mu_of(g, &cocycle)?;
    let mu_matches = got.iter().zip(mu).all(|(x, y)| (x.clone() - y.clone()).near_zero());
    let planes = [0, 1, 2].map(|i| CrookedPlane::new(v[i].clone(), p[i].clone()));
    let planes = planes.into_iter().collect::<Result<Vec<_>>>()?;
    let mut closed_form = [false; 3];
    let mut verdicts = Vec::with_capacity(3);
    for (k, &(i, j)) in TRIPLE_PAIRS.iter().enumerate() {
        closed_form[k] = disjoint_closed_form(&planes[i], &planes[j])?;
        verdicts.push(S::decide(&planes[i], &planes[j])?);
    }
    let report = TripleReport {
        consistently_oriented: consistently_oriented(&v)?,
        closed_form,
        verdicts: verdicts.try_into().expect("three pairs"),
        mu: got,
        mu_matches,
    };
    Ok(DomainTriple { v, a, b, p, beta, cocycle, report })
}

/// [`construct_triple`], failing unless every check passed.
pub fn solve_vertices<S: PlaneField>(
    g: &DecoratedGroup<S>,
    mu: &[S; 3],
    weights: Option<&[S; 3]>,
) -> Result<DomainTriple<S>> {
    let t = construct_triple(g, mu, weights)?;
    if !t.report.verified() {
        return Err(Error::VerificationFailed(format!("{:?}", t.report)));
    }
    Ok(t)
}

/// Letters `γ₁, γ₂, γ₁⁻¹, γ₂⁻¹` are `0, 1, 2, 3`; `l` and `(l + 2) % 4` are inverse.
pub fn reduced_words(max_len: usize) -> Vec<Vec<usize>> {
    let mut all = vec![vec![]];
    let mut layer: Vec<Vec<usize>> = vec![vec![]];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for l in 0..4 {
                if w.last().is_some_and(|&last| (last + 2) % 4 == l) {
                    continue;
                }
                let mut nw = w.clone();
                nw.push(l);
                next.push(nw);
            }
        }
        all.extend(next.iter().cloned());
        layer = next;
    }
    all
}

pub fn word_name(w: &[usize]) -> String {
    if w.is_empty() {
        return "1".into();
    }
    let names = ["g1", "g2", "g1^-1", "g2^-1"];
    w.iter().map(|&l| names[l]).collect::<Vec<_>>().join(" ")
}

/// The word read left to right as a composition: `[a, b]` is `γ_a ∘ γ_b`.
pub fn eval_word<S: Scalar>(gens: &[AffineIso<S>; 2], w: &[usize]) -> AffineIso<S> {
    let all = [gens[0].clone(), gens[1].clone(), gens[0].inverse(), gens[1].inverse()];
    w.iter().fold(AffineIso::identity(), |acc, &l| acc.compose(&all[l]))
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct SignReport {
    pub negative: usize,
    pub zero: usize,
    pub positive: usize,
    /// Elliptic or trivial words, on which `α` is undefined.
    pub skipped: usize,
    /// A positive and a negative word: the action is not proper.
    pub opposite: Option<(Vec<usize>, Vec<usize>)>,
}

pub fn check_signs<S: Scalar>(gens: &[AffineIso<S>; 2], words: &[Vec<usize>]) -> SignReport {
    let mut r = SignReport::default();
    let (mut first_pos, mut first_neg) = (None, None);
    for w in words {
        match alpha(&eval_word(gens, w)) {
            Err(_) => r.skipped += 1,
            Ok(a) => match a.sign() {
                Ok(Sign::Positive) => {
                    r.positive += 1;
                    first_pos.get_or_insert_with(|| w.clone());
                }
                Ok(Sign::Negative) => {
                    r.negative += 1;
                    first_neg.get_or_insert_with(|| w.clone());
                }
                Ok(Sign::Zero) | Err(_) => r.zero += 1,
            },
        }
    }
    r.opposite = first_pos.zip(first_neg);
    r
}

pub const PROPERNESS_NOTE: &str =
    "necessary conditions verified; crooked domain certified at boundary level; properness is cited, not proved";

#[derive(Clone, Debug, PartialEq)]
pub struct QuadReport {
    /// Oracle verdicts on the six pairs of boundary planes.
    pub verdicts: Vec<((usize, usize), Verdict)>,
    pub consistently_oriented: bool,
    /// Each half-space's interior witness lies outside the other three.
    pub halfspaces_disjoint: bool,
    /// `gᵢ` carries the direction of `H₋ᵢ` to minus that of `Hᵢ`.
    pub pairing_linear: [bool; 2],
    pub witnesses_tested: [usize; 2],
    pub witness_failures: [usize; 2],
}

impl QuadReport {
    pub fn verified(&self) -> bool {
        self.verdicts.iter().all(|(_, v)| v.is_disjoint())
            && self.consistently_oriented
            && self.halfspaces_disjoint
            && self.pairing_linear.iter().all(|&b| b)
            && self.witness_failures == [0, 0]
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct QuadDomain<S> {
    /// `[H₋₁, H₁, H₋₂, H₂]`, with `γᵢ(H₋ᵢ) = E ∖ int(Hᵢ)`.
    pub halfspaces: [HalfSpace<S>; 4],
    pub gamma1: AffineIso<S>,
    pub gamma2: AffineIso<S>,
    /// The free vertex is `p + scale·direction`, found at search step `step`.
    pub step: usize,
    pub scale: S,
    pub direction: Vec3<S>,
    pub report: QuadReport,
}

pub const QUAD_NAMES: [&str; 4] = ["H-1", "H1", "H-2", "H2"];
pub const KISSING_STEPS: usize = 64;

fn first_intersecting<S: PlaneField>(planes: &[CrookedPlane<S>]) -> Result<Option<(usize, usize)>> {
    for i in 0..planes.len() {
        for j in i + 1..planes.len() {
            if !S::decide(&planes[i], &planes[j])?.is_disjoint() {
                return Ok(Some((i, j)));
            }
        }
    }
    Ok(None)
}

fn perturb<S: Scalar, R: Rng>(rng: &mut R) -> Vec3<S> {
    let mut c = || S::rat(&Q::new(rng.gen_range(-20..=20).into(), 40.into()));
    Vec3::new(c(), c(), c())
}

/// Random points of `int(from)`, mapped by `g`, must land outside `to`.
fn pairing_witnesses<S: Scalar, R: Rng>(
    g: &AffineIso<S>,
    from: &HalfSpace<S>,
    to: &HalfSpace<S>,
    n: usize,
    rng: &mut R,
) -> Result<(usize, usize)> {
    let (mut tested, mut failed) = (0, 0);
    for _ in 0..n {
        let t = S::rat(&Q::new(rng.gen_range(1..=20).into(), 4.into()));
        let q = from.p.clone() + from.v.scale(&t) + perturb(rng);
        if hs_contains(from, &q)? != Position::Interior {
            continue;
        }
        tested += 1;
        if hs_contains(to, &g.apply(&q))? != Position::Exterior {
            failed += 1;
        }
    }
    Ok((tested, failed))
}

/// Completes a verified triple to four crooked half-spaces paired by `γ₁`
/// and `γ₂`. The boundary of `H₋₂` is `C(v₃, p₃)`, with `γ₂` carrying it to
/// `C(g₂v₃, p₂)`. The boundary of `H₋₁` has direction `g₁⁻¹v₁` and a free
/// vertex `p₂ + s·w`, `w` a separating cone direction, and `γ₁` carries it to
/// a plane with direction `v₁`. The scale runs over `s = 2⁻ᵏ` until the exact
/// oracle certifies all six pairs.
pub fn quad_domain<S: PlaneField, R: Rng>(
    g: &DecoratedGroup<S>,
    triple: &DomainTriple<S>,
    witnesses: usize,
    rng: &mut R,
) -> Result<QuadDomain<S>> {
    if !triple.report.verified() {
        return Err(Error::VerificationFailed("triple is not verified".into()));
    }
    let [gamma1, gamma2, _] = triple.cocycle.affine(g);
    let (v, p) = (&triple.v, &triple.p);
    let a = (v[2].clone(), p[2].clone());
    let b = (g.linear[1].apply(&v[2]), p[1].clone());
    let c_dir = iso_inverse(&g.linear[0]).apply(&v[0]);
    let plane = |x: &(Vec3<S>, Vec3<S>)| CrookedPlane::new(x.0.clone(), x.1.clone());
    let w = cone_direction(&plane(&b)?, &CrookedPlane::new(c_dir.clone(), p[1].clone())?)?;

    let mut found = None;
    let mut last_bad = (0, 0);
    let mut s = S::one();
    for k in 0..KISSING_STEPS {
        let q = p[1].clone() + w.scale(&s);
        let c = (c_dir.clone(), q.clone());
        let d = (v[0].clone(), gamma1.apply(&q));
        let quad = [c, d, a.clone(), b.clone()];
        let planes = quad.iter().map(plane).collect::<Result<Vec<_>>>()?;
        match first_intersecting(&planes)? {
            None => {
                found = Some((k, s.clone(), quad));
                break;
            }
            Some(pair) => last_bad = pair,
        }
        s = s.half();
    }
    let Some((step, scale, quad)) = found else {
        return Err(Error::SearchExhausted { steps: KISSING_STEPS, pair: last_bad });
    };

    let dirs: Vec<Vec3<S>> = quad.iter().map(|x| x.0.clone()).collect();
    let mut signed = None;
    for mask in 0..16 {
        let u: Vec<Vec3<S>> = dirs.iter().enumerate().map(|(i, d)| if mask >> i & 1 == 1 { -d.clone() } else { d.clone() }).collect();
        if consistently_oriented(&u)? {
            signed = Some(u);
            break;
        }
    }
    let consistent = signed.is_some();
    let u = signed.unwrap_or(dirs);
    let hs: Vec<HalfSpace<S>> = u.iter().zip(&quad).map(|(u, x)| HalfSpace::new(u.clone(), x.1.clone())).collect::<Result<_>>()?;
    let hs: [HalfSpace<S>; 4] = hs.try_into().expect("four half-spaces");

    let mut verdicts = Vec::with_capacity(6);
    for i in 0..4 {
        for j in i + 1..4 {
            verdicts.push(((i, j), S::decide(&hs[i].boundary(), &hs[j].boundary())?));
        }
    }
    let mut halfspaces_disjoint = true;
    for i in 0..4 {
        let x = hs[i].interior_witness();
        for j in (0..4).filter(|&j| j != i) {
            halfspaces_disjoint &= hs_contains(&hs[j], &x)? == Position::Exterior;
        }
    }
    let pairing_linear = [
        gamma1.linear.apply(&hs[0].v) == -hs[1].v.clone(),
        gamma2.linear.apply(&hs[2].v) == -hs[3].v.clone(),
    ];
    let (mut tested, mut failed) = ([0; 2], [0; 2]);
    for (k, (gm, from, to)) in [(&gamma1, 0, 1), (&gamma2, 2, 3)].into_iter().enumerate() {
        let (t1, f1) = pairing_witnesses(gm, &hs[from], &hs[to], witnesses, rng)?;
        let (t2, f2) = pairing_witnesses(&gm.inverse(), &hs[to], &hs[from], witnesses, rng)?;
        tested[k] = t1 + t2;
        failed[k] = f1 + f2;
    }
    let report = QuadReport {
        verdicts,
        consistently_oriented: consistent,
        halfspaces_disjoint,
        pairing_linear,
        witnesses_tested: tested,
        witness_failures: failed,
    };
    Ok(QuadDomain { halfspaces: hs, gamma1, gamma2, step, scale, direction: w, report })
}

#[derive(Clone, Debug, PartialEq)]
pub struct TileHit {
    pub a: (Vec<usize>, usize),
    pub b: (Vec<usize>, usize),
    pub verdict: Verdict,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TileReport {
    pub depth: usize,
    pub words: usize,
    pub planes: usize,
    pub pairs_checked: usize,
    pub intersections: Vec<TileHit>,
    pub samples: usize,
    /// Most translates of the open domain found containing one sample point.
    pub max_cover: usize,
}

impl TileReport {
    pub fn clean(&self) -> bool {
        self.intersections.is_empty() && self.max_cover <= 1
    }

    pub fn note(&self) -> &'static str {
        "finite-depth audit: evidence, not proof"
    }
}

/// Applies every reduced word of length at most `depth` to the four boundary
/// planes and checks that all distinct images are pairwise disjoint, split
/// over `jobs` threads. Then checks that `samples` random points each lie in
/// at most one translate of the open domain.
pub fn tile_audit<S: PlaneField + Send + Sync, R: Rng>(
    halfspaces: &[HalfSpace<S>; 4],
    gens: &[AffineIso<S>; 2],
    depth: usize,
    samples: usize,
    jobs: usize,
    rng: &mut R,
) -> Result<TileReport> {
    let words = reduced_words(depth);
    let maps: Vec<AffineIso<S>> = words.iter().map(|w| eval_word(gens, w)).collect();
    let mut planes: Vec<(CrookedPlane<S>, (Vec<usize>, usize))> = Vec::new();
    for (w, m) in words.iter().zip(&maps) {
        for (i, h) in halfspaces.iter().enumerate() {
            let c = image(m, &h.boundary())?;
            if !planes.iter().any(|(o, _)| o.p == c.p && parallel(&o.v, &c.v)) {
                planes.push((c, (w.clone(), i)));
            }
        }
    }
    let pairs: Vec<(usize, usize)> =
        (0..planes.len()).flat_map(|i| (i + 1..planes.len()).map(move |j| (i, j))).collect();
    let chunk = pairs.len().div_ceil(jobs.max(1)).max(1);
    let results: Vec<Result<Vec<TileHit>>> = std::thread::scope(|scope| {
        let handles: Vec<_> = pairs
            .chunks(chunk)
            .map(|part| {
                let planes = &planes;
                scope.spawn(move || {
                    let mut hits = Vec::new();
                    for &(i, j) in part {
                        let verdict = S::decide(&planes[i].0, &planes[j].0)?;
                        if !verdict.is_disjoint() {
                            hits.push(TileHit { a: planes[i].1.clone(), b: planes[j].1.clone(), verdict });
                        }
                    }
                    Ok(hits)
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("audit thread panicked")).collect()
    });
    let mut intersections = Vec::new();
    for r in results {
        intersections.extend(r?);
    }
    let inverses: Vec<AffineIso<S>> = maps.iter().map(AffineIso::inverse).collect();
    let mut max_cover = 0;
    for _ in 0..samples {
        let mut c = || S::rat(&Q::new(rng.gen_range(-40..=40).into(), 4.into()));
        let x = Vec3::new(c(), c(), c());
        let mut cover = 0;
        for inv in &inverses {
            let y = inv.apply(&x);
            let mut inside = true;
            for h in halfspaces {
                inside &= hs_contains(h, &y)? == Position::Exterior;
            }
            cover += inside as usize;
        }
        max_cover = max_cover.max(cover);
    }
    Ok(TileReport {
        depth,
        words: words.len(),
        planes: planes.len(),
        pairs_checked: pairs.len(),
        intersections,
        samples,
        max_cover,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::minkowski::{pair_type, PairType};
    use crate::scalar::{q, qi, Float, Surd};
    use crate::sym2::{bridge, bridge_inv};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn psi(x: i64, y: i64, z: i64) -> Vec3<Q> {
        bridge_inv(&Sym2::ints(x, y, z))
    }

    #[test]
    fn level_two_decoration() {
        let g = level_two();
        assert_eq!(g.ends, [EndType::Parabolic; 3]);
        assert_eq!(g.neutral.clone().map(|v| bridge(&v)), [Sym2::ints(-2, 0, 0), Sym2::ints(0, 0, -2), Sym2::ints(-2, -2, -2)]);
        let flipped = build_decorated(&level_two_g1::<Q>().neg(), &level_two_g2::<Q>().neg(), Some(&[qi(1), qi(1), qi(2)])).unwrap();
        assert_eq!((flipped.linear, flipped.neutral, flipped.x_plus), (g.linear, g.neutral, g.x_plus));
    }

    #[test]
    fn hyperbolic_end_is_unit() {
        let d = mat2(qi(2), qi(0), qi(0), q(1, 2));
        let g = build_decorated(&d, &level_two_g2(), None).unwrap();
        assert_eq!(g.ends[0], EndType::Hyperbolic);
        assert_eq!(g.neutral[0].norm2(), qi(1));
    }

    #[test]
    fn rejects_bad_groups() {
        let rot = mat2(qi(0), qi(-1), qi(1), qi(0));
        assert_eq!(build_decorated(&rot, &level_two_g2(), None), Err(Error::EllipticGenerator(1)));
        let g1 = level_two_g1::<Q>();
        assert!(matches!(build_decorated(&g1, &g1, None), Err(Error::CoincidentAxes(1, 2) | Error::EllipticGenerator(3))));
    }

    #[test]
    fn mu_examples() {
        let g = level_two();
        let u = Cocycle::new(psi(5, 0, 7), psi(11, 0, 0));
        assert_eq!(mu_of(&g, &u).unwrap(), [qi(7), qi(11), qi(-23)]);
        assert_eq!(mu_of(&g, &Cocycle::zero()).unwrap(), [qi(0), qi(0), qi(0)]);
        let w = Vec3::from_q(&Vec3::ints(3, -1, 4));
        assert_eq!(mu_of(&g, &coboundary(&g, &w)).unwrap(), [qi(0), qi(0), qi(0)]);
    }

    #[test]
    fn mu_matrix_rank_and_inverse() {
        let g = level_two();
        assert_eq!(rank(&mu_matrix(&g).unwrap()), 3);
        let t = [q(3, 2), qi(-4), qi(7)];
        assert_eq!(mu_of(&g, &mu_inverse(&g, &t).unwrap()).unwrap(), t);
    }

    #[test]
    fn trace_slice() {
        let s = |n: i64| Surd::adjoin(qi(n), qi(5));
        let [m1, m2, m3] = trace_slice_representation(&s(3), &s(3), &s(3)).unwrap();
        let p = m1.mul(&m2).mul(&m3);
        assert!(p.is_identity() || p.neg().is_identity());
        assert_eq!(m1.trace(), s(3));
        assert_eq!(m3.trace(), s(3));
        let b3 = m3.at(0, 0).clone();
        assert_eq!(b3.clone() + b3.recip(), s(3));
        assert!(matches!(trace_slice_representation(&qi(3), &qi(3), &qi(1)), Err(Error::NoRealB3(_))));
    }

    #[test]
    fn appendix_cocycle() {
        for (a1, a2, b3) in [(qi(3), qi(3), qi(2)), (qi(-2), qi(-5), q(3, 2)), (q(-5, 2), qi(-2), qi(1))] {
            let [m1, m2, m3] = appendix_cocycle_mu(&a1, &a2, &b3).unwrap();
            assert_ne!(m1, qi(0));
            assert_eq!(m2, qi(0));
            let _ = m3;
        }
    }

    #[test]
    fn lamination_golden() {
        let g = level_two();
        let v = lamination_vectors(&g).unwrap();
        assert_eq!(v, [Vec3::ints(-1, 1, 1), Vec3::ints(0, -1, 0), Vec3::ints(1, 1, 1)]);
        assert!(consistently_oriented(&v).unwrap());
        for (i, j) in TRIPLE_PAIRS {
            assert_eq!(pair_type(&v[i], &v[j]).unwrap(), PairType::Asymptotic);
        }
    }

    #[test]
    fn triple_level_two() {
        let g = level_two();
        let t = solve_vertices(&g, &[qi(1), qi(2), qi(3)], None).unwrap();
        assert_eq!(t.report.mu, [qi(1), qi(2), qi(3)]);
        let t2 = solve_vertices(&g, &[qi(2), qi(4), qi(6)], None).unwrap();
        assert_eq!(t2.p, t.p.clone().map(|p| p.scale(&qi(2))));
        let ones = solve_vertices(&g, &[qi(1), qi(1), qi(1)], None).unwrap();
        let twos = solve_vertices(&g, &[qi(2), qi(2), qi(2)], None).unwrap();
        assert_eq!(twos.a, ones.a.clone().map(|x| x * qi(2)));
        assert_eq!(twos.b, ones.b.map(|x| x * qi(2)));
        assert!(matches!(solve_vertices(&g, &[qi(1), qi(2), qi(-3)], None), Err(Error::NonPositiveMu(_))));
        let w = [q(1, 3), q(3, 4), q(1, 10)];
        assert_eq!(solve_vertices(&g, &[qi(1), qi(2), qi(3)], Some(&w)).unwrap().report.mu, [qi(1), qi(2), qi(3)]);
    }

    #[test]
    fn triple_float_mode() {
        let g = level_two();
        let gf = build_decorated(
            &Matrix::from_q(&g.sl2[0]),
            &Matrix::from_q(&g.sl2[1]),
            Some(&[Float::new(1.0), Float::new(1.0), Float::new(2.0)]),
        )
        .unwrap();
        let t = solve_vertices(&gf, &[Float::new(1.0), Float::new(2.0), Float::new(3.0)], None).unwrap();
        assert!((t.report.mu[2].value() - 3.0).abs() < 1e-9);
    }

    #[test]
    fn pants_triples() {
        let g = build_decorated(&pants_generators([Some(qi(2)), Some(qi(3)), Some(qi(2))]).unwrap().0, &pants_generators([Some(qi(2)), Some(qi(3)), Some(qi(2))]).unwrap().1, None).unwrap();
        assert_eq!(g.ends, [EndType::Hyperbolic; 3]);
        let t = solve_vertices(&g, &[qi(1), qi(2), qi(3)], None).unwrap();
        assert!(t.report.verified());
    }

    #[test]
    fn signs() {
        let g = level_two();
        let t = solve_vertices(&g, &[qi(1), qi(2), qi(3)], None).unwrap();
        let [g1, g2, _] = t.cocycle.affine(&g);
        let r = check_signs(&[g1, g2], &reduced_words(4));
        assert_eq!(r.negative, 0);
        assert!(r.opposite.is_none());
        let bad = mu_inverse(&g, &[qi(1), qi(-1), qi(1)]).unwrap();
        let [b1, b2, _] = bad.affine(&g);
        let r = check_signs(&[b1, b2], &reduced_words(1));
        assert!(r.opposite.is_some());
        let [z1, z2, _] = Cocycle::zero().affine(&g);
        let r = check_signs(&[z1, z2], &reduced_words(2));
        assert_eq!(r.positive + r.negative, 0);
    }

    #[test]
    fn words() {
        assert_eq!(reduced_words(0), vec![Vec::<usize>::new()]);
        assert_eq!(reduced_words(3).len(), 1 + 4 + 12 + 36);
        assert_eq!(word_name(&[0, 3]), "g1 g2^-1");
    }

    #[test]
    fn quad_level_two() {
        let g = level_two();
        let t = solve_vertices(&g, &[qi(1), qi(2), qi(3)], None).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let d = quad_domain(&g, &t, 50, &mut rng).unwrap();
        assert!(d.report.verified(), "{:?}", d.report);
        assert_eq!(d.report.verdicts.len(), 6);
        assert!(d.direction.z.is_neg().unwrap() || d.direction.y.is_neg().unwrap());
        let gens = [d.gamma1.clone(), d.gamma2.clone()];
        let audit = tile_audit(&d.halfspaces, &gens, 2, 20, 2, &mut rng).unwrap();
        assert!(audit.clean(), "{audit:?}");
        let mut bent = d.halfspaces.clone();
        bent[1].p = bent[0].p.clone();
        assert!(!tile_audit(&bent, &gens, 0, 0, 1, &mut rng).unwrap().intersections.is_empty());
    }
}
