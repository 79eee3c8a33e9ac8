//! Seeded random inputs for randomized checks and the command line.

use rand::Rng;

use crate::crooked::{cone_direction, orient_pair, CrookedPlane};
use crate::error::Result;
use crate::isometry::{sl2_adjoint, AffineIso};
use crate::matrix::{Mat2, Matrix};
use crate::minkowski::{cross, inner, pair_type, PairType, Vec3};
use crate::scalar::{q, qi, Q};
use crate::sym2::Sym2;
use crate::threeholed::{build_decorated, pants_generators, DecoratedGroup};

/// `n/d` with `|n| ≤ num` and `1 ≤ d ≤ den`.
pub fn small_q<R: Rng>(rng: &mut R, num: i64, den: i64) -> Q {
    q(rng.gen_range(-num..=num), rng.gen_range(1..=den))
}

pub fn positive_q<R: Rng>(rng: &mut R, num: i64, den: i64) -> Q {
    q(rng.gen_range(1..=num), rng.gen_range(1..=den))
}

pub fn vec3<R: Rng>(rng: &mut R, num: i64, den: i64) -> Vec3<Q> {
    Vec3::new(small_q(rng, num, den), small_q(rng, num, den), small_q(rng, num, den))
}

pub fn spacelike<R: Rng>(rng: &mut R) -> Vec3<Q> {
    loop {
        let v = vec3(rng, 9, 4);
        if v.norm2() > qi(0) {
            return v;
        }
    }
}

/// The future null vector over the boundary point with parameter `t`.
pub fn circle_point(t: &Q) -> Vec3<Q> {
    let t2 = t * t;
    Vec3::new(qi(1) - t2.clone(), qi(2) * t, qi(1) + t2)
}

/// The unit spacelike vector `−(x⊠y)/(x·y)` of the arc from `x` to `y`.
pub fn arc(x: &Vec3<Q>, y: &Vec3<Q>) -> Vec3<Q> {
    cross(x, y).div(&-inner(x, y))
}

fn distinct_params<R: Rng>(rng: &mut R, n: usize) -> Vec<Q> {
    let mut ts: Vec<Q> = Vec::with_capacity(n);
    while ts.len() < n {
        let t = small_q(rng, 12, 5);
        if !ts.contains(&t) {
            ts.push(t);
        }
    }
    ts.sort();
    ts
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairKind {
    Ultraparallel,
    Asymptotic,
    /// Ultraparallel with unrelated random directions, whose norms are
    /// usually not squares.
    Generic,
}

/// Two unit spacelike vectors of the given kind, consistently oriented and
/// rescaled by random positive rationals.
pub fn direction_pair<R: Rng>(rng: &mut R, kind: PairKind) -> (Vec3<Q>, Vec3<Q>) {
    if kind == PairKind::Generic {
        loop {
            let (a, b) = (spacelike(rng), spacelike(rng));
            if pair_type(&a, &b) == Ok(PairType::Ultraparallel) {
                return orient_pair(&a, &b).expect("ultraparallel pairs orient");
            }
        }
    }
    let ts = distinct_params(rng, 4);
    let x: Vec<Vec3<Q>> = ts.iter().map(circle_point).collect();
    let (v1, v2) = match kind {
        PairKind::Ultraparallel => (arc(&x[0], &x[1]), arc(&x[2], &x[3])),
        _ => (arc(&x[0], &x[1]), arc(&x[1], &x[2])),
    };
    let (v1, v2) = orient_pair(&v1, &v2).expect("disjoint arcs orient");
    (v1.scale(&positive_q(rng, 5, 3)), v2.scale(&positive_q(rng, 5, 3)))
}

/// Two crooked planes with directions from [`direction_pair`]. The second
/// vertex is the first moved along a separating direction plus noise, so
/// both outcomes occur often.
pub fn plane_pair<R: Rng>(rng: &mut R, kind: PairKind) -> Result<(CrookedPlane<Q>, CrookedPlane<Q>)> {
    let (v1, v2) = direction_pair(rng, kind);
    let p1 = vec3(rng, 6, 3);
    let c1 = CrookedPlane::new(v1, p1.clone())?;
    let d = if kind == PairKind::Generic {
        // Cone directions need the null frames; `v₂ − v₁` after orienting
        // points the same way.
        let (a, b) = orient_pair(&c1.v, &v2)?;
        (b - a).scale(&small_q(rng, 6, 2)) + vec3(rng, 3, 4)
    } else {
        let w = cone_direction(&c1, &CrookedPlane::new(v2.clone(), p1.clone())?)?;
        w.scale(&small_q(rng, 6, 2)) + vec3(rng, 3, 4)
    };
    let c2 = CrookedPlane::new(v2, p1 + d)?;
    Ok((c1, c2))
}

pub fn lambda<R: Rng>(rng: &mut R) -> Q {
    [qi(2), qi(3), q(3, 2), q(5, 2), qi(4), q(6, 5)][rng.gen_range(0..6)].clone()
}

/// End data for [`pants_generators`]: a cusp or a hyperbolic end per hole.
pub fn pants_lambdas<R: Rng>(rng: &mut R, cusps: [bool; 3]) -> [Option<Q>; 3] {
    cusps.map(|c| if c { None } else { Some(lambda(rng)) })
}

pub fn pants_group<R: Rng>(rng: &mut R, cusps: [bool; 3]) -> Result<DecoratedGroup<Q>> {
    let (g1, g2) = pants_generators(pants_lambdas(rng, cusps))?;
    build_decorated(&g1, &g2, None)
}

pub fn positive_mu<R: Rng>(rng: &mut R) -> [Q; 3] {
    [positive_q(rng, 20, 6), positive_q(rng, 20, 6), positive_q(rng, 20, 6)]
}

pub fn sym2_int<R: Rng>(rng: &mut R, bound: i64) -> Sym2<Q> {
    let mut c = || qi(rng.gen_range(-bound..=bound));
    Sym2::new(c(), c(), c())
}

/// A product of elementary matrices with small rational entries.
pub fn sl2<R: Rng>(rng: &mut R) -> Mat2<Q> {
    let mut m = Matrix::identity(2);
    for k in 0..3 {
        let t = small_q(rng, 3, 2);
        let e = if k % 2 == 0 {
            Matrix::from_rows(vec![vec![qi(1), t], vec![qi(0), qi(1)]])
        } else {
            Matrix::from_rows(vec![vec![qi(1), qi(0)], vec![t, qi(1)]])
        };
        m = m.mul(&e);
    }
    m
}

/// `P·diag(λ, 1/λ)·P⁻¹` with rational `P`, so the unit neutral vector is rational.
pub fn hyperbolic_sl2<R: Rng>(rng: &mut R) -> Mat2<Q> {
    let l = lambda(rng);
    let l = if rng.gen_bool(0.5) { -l } else { l };
    let d = Matrix::from_rows(vec![vec![l.clone(), qi(0)], vec![qi(0), l.recip()]]);
    let p = sl2(rng);
    p.mul(&d).mul(&p.inverse().expect("unimodular"))
}

pub fn hyperbolic_affine<R: Rng>(rng: &mut R) -> AffineIso<Q> {
    let m = sl2_adjoint(&hyperbolic_sl2(rng)).expect("unimodular");
    AffineIso::new(m, vec3(rng, 8, 3))
}

pub fn lorentz_affine<R: Rng>(rng: &mut R) -> AffineIso<Q> {
    AffineIso::new(sl2_adjoint(&sl2(rng)).expect("unimodular"), vec3(rng, 8, 3))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::minkowski::consistently_oriented;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn pairs_have_requested_kind() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let (a, b) = direction_pair(&mut rng, PairKind::Asymptotic);
            assert_eq!(pair_type(&a, &b).unwrap(), PairType::Asymptotic);
            assert!(consistently_oriented(&[a, b]).unwrap());
            let (a, b) = direction_pair(&mut rng, PairKind::Ultraparallel);
            assert_eq!(pair_type(&a, &b).unwrap(), PairType::Ultraparallel);
        }
        assert_eq!(circle_point(&q(1, 2)).norm2(), qi(0));
    }

    #[test]
    fn hyperbolic_samples() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..10 {
            let g = hyperbolic_affine(&mut rng);
            assert!(crate::isometry::alpha(&g).is_ok());
        }
    }
}
