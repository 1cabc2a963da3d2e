use std::collections::HashSet;

use lincent::braid::Braid;
use lincent::ff::{make_binomial_ext_ctx, prime, PrimeCtx};
use lincent::lkrep::{lk_bounds_check, lk_of_braid, LkError, LkMod};
use num_bigint::BigUint;
use num_traits::One;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn braid_from_seed(n: usize, seed: u64) -> Braid {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let inf = rng.gen_range(-2..=2);
    let len = rng.gen_range(0..=3);
    Braid::random(n, inf, len, &mut rng)
}

fn lk_mod_for(strands: usize, bound: u64, seed: u64) -> LkMod {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = 2 * bound as usize + 1;
    let lower = BigUint::one() << ((strands * strands) as u64 * (bound + 1) + 1);
    let p = prime::next_prime_congruent_one(&lower, d as u64, &mut rng);
    let ctx = make_binomial_ext_ctx(PrimeCtx::new(p).unwrap(), d).unwrap();
    LkMod::new(&ctx, strands)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn homomorphism_and_inverse(a in any::<u64>(), b in any::<u64>()) {
        let (x, y) = (braid_from_seed(4, a), braid_from_seed(4, b));
        prop_assert_eq!(lk_of_braid(&x.mul(&y)), lk_of_braid(&x).mul(&lk_of_braid(&y)));
        prop_assert!(lk_of_braid(&x).mul(&lk_of_braid(&x.inv())).is_identity());
    }

    #[test]
    fn thm_bounds_hold(seed in any::<u64>(), n in 3usize..=5) {
        let x = braid_from_seed(n, seed);
        let m = x.interval().radius();
        let rep = lk_bounds_check(&lk_of_braid(&x), m, n);
        prop_assert!(rep.pass, "{:?}", rep.violations);
    }
}

#[test]
fn modular_path_agrees_with_exact_path() {
    let bound = 5;
    let lm = lk_mod_for(4, bound, 1);
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let id = Braid::identity(4);
    assert!(lm.image(&id).is_identity());
    for _ in 0..50 {
        let x = Braid::random(4, rng.gen_range(-2..=0), rng.gen_range(0..=3), &mut rng);
        let y = Braid::random(4, rng.gen_range(-1..=1), 2, &mut rng);
        let img = lm.image(&x);
        assert_eq!(lm.reduce(&lk_of_braid(&x)), img);
        assert_eq!(lm.image(&x.mul(&y)), img.mul(&lm.image(&y)));
        if x.interval().radius() <= bound {
            assert_eq!(lm.lift(&img, bound).unwrap(), lk_of_braid(&x));
        }
    }
}

#[test]
fn undersized_prime_is_detected() {
    // Margin for M = 1 used on a braid far outside [−1, 1].
    let lm = lk_mod_for(4, 1, 3);
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut detected = 0;
    for _ in 0..10 {
        let x = Braid::random(4, 2, 4, &mut rng);
        match lm.lift(&lm.image(&x), 1) {
            Err(LkError::DegreeOverflow { .. }) => detected += 1,
            Ok(m) if m != lk_of_braid(&x) => detected += 1,
            _ => {}
        }
    }
    assert_eq!(detected, 10);
}

#[test]
fn distinct_normal_forms_have_distinct_images() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut seen = HashSet::new();
    let mut images = HashSet::new();
    while seen.len() < 100 {
        let x = Braid::random(4, rng.gen_range(-3..=3), rng.gen_range(0..=6), &mut rng);
        if seen.insert(x.clone()) {
            images.insert(format!("{:?}", lk_of_braid(&x)));
        }
    }
    assert_eq!(images.len(), 100);
}
