use crooked::crooked::{disjoint_closed_form, intersects_exact};
use crooked::matrix::rank;
use crooked::sample;
use crooked::scalar::{q, qi, Q};
use crooked::threeholed::{
    level_two, mu_inverse, mu_matrix, mu_of, solve_vertices, DecoratedGroup, EndType, TRIPLE_PAIRS,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn group(seed: u64, mask: u8) -> DecoratedGroup<Q> {
    let cusps = [mask & 1 == 1, mask & 2 == 2, mask & 4 == 4];
    sample::pants_group(&mut rng(seed), cusps).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn mu_round_trip(seed in any::<u64>(), mask in 0u8..8) {
        let g = group(seed, mask);
        let cusps = [mask & 1 == 1, mask & 2 == 2, mask & 4 == 4];
        for (e, c) in g.ends.iter().zip(cusps) {
            prop_assert_eq!(*e == EndType::Parabolic, c);
        }
        prop_assert_eq!(rank(&mu_matrix(&g).unwrap()), 3);
        let mut r = rng(seed ^ 0x5eed);
        let t = [sample::small_q(&mut r, 30, 7), sample::small_q(&mut r, 30, 7), sample::small_q(&mut r, 30, 7)];
        prop_assert_eq!(mu_of(&g, &mu_inverse(&g, &t).unwrap()).unwrap(), t);
    }

    #[test]
    fn vertices_are_certified(seed in any::<u64>(), mask in 0u8..8) {
        let g = group(seed, mask);
        let mu = sample::positive_mu(&mut rng(seed ^ 1));
        let t = solve_vertices(&g, &mu, None).unwrap();
        prop_assert_eq!(&t.report.mu, &mu);
        for (i, j) in TRIPLE_PAIRS {
            prop_assert!(disjoint_closed_form(&t.plane(i), &t.plane(j)).unwrap());
            prop_assert!(intersects_exact(&t.plane(i), &t.plane(j)).unwrap().is_disjoint());
        }
    }

    #[test]
    fn mu_is_weight_independent(seed in any::<u64>(), w in prop::array::uniform3(1i64..=9)) {
        let g = level_two();
        let mu = sample::positive_mu(&mut rng(seed));
        let weights = w.map(|k| q(k, 10));
        let t = solve_vertices(&g, &mu, Some(&weights)).unwrap();
        prop_assert_eq!(mu_of(&g, &t.cocycle).unwrap(), mu);
    }

    #[test]
    fn vertices_scale_linearly(seed in any::<u64>(), c in 1i64..=7) {
        let g = level_two();
        let mu = sample::positive_mu(&mut rng(seed));
        let t = solve_vertices(&g, &mu, None).unwrap();
        let scaled = solve_vertices(&g, &mu.clone().map(|m| m * qi(c)), None).unwrap();
        prop_assert_eq!(scaled.p, t.p.map(|p| p.scale(&qi(c))));
    }
}
