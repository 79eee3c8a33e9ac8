use crooked::isometry::margulis;
use crooked::matrix::Matrix;
use crooked::sample;
use crooked::scalar::{qi, Q};
use crooked::sym2::{act, bridge_inv, sym_inner};
use crooked::symplectic::{
    act_point, act_sym, decompose, gamma3_direct, gamma3_printed, is_symplectic, j4, level_two_decoration,
    mu_direct, sigma_embed, theorem_b_generators, to_affine, u_embed,
};
use crooked::threeholed::{level_two, mu_of, Cocycle};
use num_bigint::BigInt;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn u_embed_is_additive(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (a, b) = (sample::sym2_int(&mut r, 50), sample::sym2_int(&mut r, 50));
        prop_assert_eq!(u_embed(&a).mul(&u_embed(&b)), u_embed(&(a.clone() + b)));
        prop_assert!(is_symplectic(&u_embed(&a)));
    }

    #[test]
    fn sigma_is_a_symplectic_homomorphism(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (a, b) = (sample::sl2(&mut r), sample::sl2(&mut r));
        let sa = sigma_embed(&a).unwrap();
        prop_assert_eq!(sa.mul(&sigma_embed(&b).unwrap()), sigma_embed(&a.mul(&b)).unwrap());
        prop_assert!(is_symplectic(&sa));
        let psi = sample::sym2_int(&mut r, 30);
        prop_assert_eq!(act_sym(&sa, &psi).unwrap(), act(&a, &psi));
        let m = u_embed(&sample::sym2_int(&mut r, 30)).mul(&sa);
        let aff = to_affine(&m).unwrap();
        prop_assert_eq!(bridge_inv(&act_point(&m, &psi).unwrap()), aff.apply(&bridge_inv(&psi)));
        prop_assert_eq!(decompose(&m).unwrap().1, a);
    }

    #[test]
    fn gamma3_formulas_agree(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (u1, u2) = (sample::sym2_int(&mut r, 100), sample::sym2_int(&mut r, 100));
        prop_assert_eq!(gamma3_printed(&u1, &u2), gamma3_direct(&u1, &u2).unwrap());
    }

    #[test]
    fn sym2_and_vec3_invariants_agree(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (u1, u2) = (sample::sym2_int(&mut r, 40), sample::sym2_int(&mut r, 40));
        let g = level_two();
        let c = Cocycle::new(bridge_inv(&u1), bridge_inv(&u2));
        prop_assert_eq!(mu_of(&g, &c).unwrap(), mu_direct(&u1, &u2).unwrap());
        let v = level_two_decoration::<Q>();
        let aff = c.affine(&g);
        prop_assert_eq!(margulis(&aff[0], &bridge_inv(&v[0])).unwrap(), sym_inner(&u1, &v[0]));
    }

    #[test]
    fn theorem_b_generators_are_symplectic(m in prop::array::uniform3(1i64..=1000)) {
        let mu = m.map(BigInt::from);
        let (g1, g2) = theorem_b_generators(&mu).unwrap();
        for g in [&g1, &g2] {
            prop_assert_eq!(g.det(), qi(1));
            prop_assert_eq!(g.transpose().mul(&j4()).mul(g), j4());
            prop_assert!(g.block(2, 0, 2) == Matrix::zeros(2));
        }
    }
}
