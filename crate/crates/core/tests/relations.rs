mod common;

use periodlab::arith::{BigComplex, PrecisionContext};
use periodlab::relations::{estimate_rank, find_relation};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn ctx() -> PrecisionContext {
    PrecisionContext::new(256).unwrap()
}

fn values(seed: u64, n: usize) -> Vec<BigComplex> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| common::random_complex(&mut rng, 256)).collect()
}

fn combine(xs: &[BigComplex], c: &[i64]) -> BigComplex {
    xs.iter().zip(c).fold(BigComplex::zero(256), |acc, (x, &k)| &acc + &x.scale_i64(k))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn planted_relation_is_found(seed in any::<u64>(), c in prop::collection::vec(-500i64..=500, 3)) {
        prop_assume!(c.iter().any(|&k| k != 0));
        // x₃ = Σ cᵢxᵢ, so (c, −1) is a relation
        let mut xs = values(seed, 3);
        xs.push(combine(&xs, &c));
        let cert = find_relation(&xs, None, 1000, &ctx()).unwrap().unwrap();
        let k = cert.coefficients[3];
        prop_assert!(k != 0);
        for (found, planted) in cert.coefficients.iter().zip(&c) {
            prop_assert_eq!(*found, -k * planted);
        }
    }

    #[test]
    fn random_values_have_no_small_relation(seed in any::<u64>()) {
        prop_assert!(find_relation(&values(seed, 4), None, 1000, &ctx()).unwrap().is_none());
    }

    #[test]
    fn rank_counts_independent_values(seed in any::<u64>(), a in -20i64..=20, b in -20i64..=20) {
        let mut xs = values(seed, 3);
        xs.push(combine(&xs, &[a, b, 1]));
        xs.push(combine(&xs, &[1, 0, -b, 0]));
        let r = estimate_rank(&xs, None, 1000, &ctx()).unwrap();
        prop_assert_eq!(r.rank, 3);
        prop_assert_eq!(r.certificates.len(), 2);
    }
}
