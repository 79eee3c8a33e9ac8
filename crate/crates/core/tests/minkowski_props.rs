use crooked::crooked::{in_tower, lift, TowerJob};
use crooked::minkowski::{
    causal_type, cross, det3, inner, null_frame, pair_type, same_ray, CausalClass, PairType, Vec3,
};
use crooked::scalar::{q, Embed, Float, Q};
use crooked::Result;
use proptest::prelude::*;

fn rat() -> impl Strategy<Value = Q> {
    (-40i64..=40, 1i64..=9).prop_map(|(n, d)| q(n, d))
}

fn vec_q() -> impl Strategy<Value = Vec3<Q>> {
    (rat(), rat(), rat()).prop_map(|(x, y, z)| Vec3::new(x, y, z))
}

fn vec_f() -> impl Strategy<Value = Vec3<Float>> {
    (-1e3f64..1e3, -1e3f64..1e3, -1e3f64..1e3).prop_map(|(x, y, z)| Vec3::new(Float::new(x), Float::new(y), Float::new(z)))
}

fn close(a: f64, b: f64, scale: f64) -> bool {
    (a - b).abs() <= 1e-9 * scale.max(1.0)
}

struct FrameCheck(Vec3<Q>);

impl TowerJob for FrameCheck {
    type Out = bool;
    fn run<S: Embed>(self, r: &[Q]) -> Result<bool> {
        let v: Vec3<S> = lift(&self.0, r);
        let f = null_frame(&v)?;
        Ok(same_ray(&cross(&v, &f.plus), &f.plus)?
            && same_ray(&cross(&f.minus, &v), &f.minus)?
            && inner(&f.plus, &f.plus).near_zero()
            && inner(&f.minus, &f.minus).near_zero()
            && inner(&f.plus, &v).near_zero()
            && inner(&f.minus, &v).near_zero())
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn cross_identities_exact(u in vec_q(), v in vec_q(), x in vec_q(), y in vec_q()) {
        prop_assert_eq!(inner(&u, &cross(&x, &y)), inner(&x, &cross(&y, &u)));
        let lhs = inner(&cross(&u, &v), &cross(&x, &y));
        let rhs = inner(&u, &y) * inner(&v, &x) - inner(&u, &x) * inner(&v, &y);
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(det3(&u, &v, &x), inner(&u, &cross(&v, &x)));
        prop_assert_eq!(cross(&u, &v), -cross(&v, &u));
        prop_assert!(inner(&cross(&u, &v), &u) == Q::from_integer(0.into()));
    }

    #[test]
    fn cross_identities_float(u in vec_f(), v in vec_f(), x in vec_f(), y in vec_f()) {
        let a = inner(&u, &cross(&x, &y)).value();
        let b = inner(&x, &cross(&y, &u)).value();
        prop_assert!(close(a, b, 1e9));
        let lhs = inner(&cross(&u, &v), &cross(&x, &y)).value();
        let rhs = (inner(&u, &y) * inner(&v, &x) - inner(&u, &x) * inner(&v, &y)).value();
        prop_assert!(close(lhs, rhs, 1e12));
    }

    #[test]
    fn frame_identities(v in vec_q()) {
        prop_assume!(v.norm2() > Q::from_integer(0.into()));
        prop_assert!(in_tower(&[v.norm2()], FrameCheck(v)).unwrap());
    }

    #[test]
    fn causal_class_matches_norm(v in vec_q()) {
        let n = v.norm2();
        let c = causal_type(&v).unwrap();
        let zero = Q::from_integer(0.into());
        match c {
            CausalClass::Spacelike => prop_assert!(n > zero),
            CausalClass::Timelike(_) => prop_assert!(n < zero),
            CausalClass::Null(_) => prop_assert!(n == zero && !v.is_zero()),
            CausalClass::Zero => prop_assert!(v.is_zero()),
        }
    }

    #[test]
    fn pair_type_is_symmetric(u in vec_q(), v in vec_q()) {
        let zero = Q::from_integer(0.into());
        prop_assume!(u.norm2() > zero && v.norm2() > zero);
        let a = pair_type(&u, &v).unwrap();
        prop_assert_eq!(a, pair_type(&v, &u).unwrap());
        prop_assert_eq!(a, pair_type(&-u.clone(), &v).unwrap());
        if a == PairType::Degenerate {
            prop_assert!(cross(&u, &v).is_zero());
        }
    }
}
