use lincent::ff::{make_binomial_ext_ctx, prime, ExtCtx, Field, Fp64, PrimeCtx};
use num_bigint::BigUint;
use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn fp() -> Fp64 {
    Fp64::new(Fp64::MERSENNE61).unwrap()
}

/// `𝔽_{p^7}` with a 101-bit `p ≡ 1 mod 7`.
fn ext() -> ExtCtx {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let p = prime::next_prime_congruent_one(&(BigUint::one() << 100u32), 7, &mut rng);
    make_binomial_ext_ctx(PrimeCtx::new(p).unwrap(), 7).unwrap()
}

/// Schoolbook product of coefficient vectors modulo the monic `f`, over BigUint.
fn poly_mulmod(a: &[BigUint], b: &[BigUint], f: &[BigUint], p: &BigUint) -> Vec<BigUint> {
    let d = f.len() - 1;
    let mut prod = vec![BigUint::zero(); 2 * d];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            prod[i + j] = (&prod[i + j] + x * y) % p;
        }
    }
    for k in (d..2 * d).rev() {
        let c = std::mem::take(&mut prod[k]);
        for (i, fi) in f[..d].iter().enumerate() {
            // t^d ≡ −Σ f_i t^i
            prod[k - d + i] = (&prod[k - d + i] + p - (&c * fi) % p) % p;
        }
    }
    prod.truncate(d);
    prod
}

fn residues(seed: u64, d: usize, p: &BigUint) -> Vec<BigUint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..d).map(|_| num_bigint::RandBigInt::gen_biguint_below(&mut rng, p)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn fp64_matches_u128(a in 0..Fp64::MERSENNE61, b in 0..Fp64::MERSENNE61) {
        let f = fp();
        let p = Fp64::MERSENNE61 as u128;
        let (x, y) = (f.from_u64(a), f.from_u64(b));
        let r = |e: &u64| f.to_residues(e)[0].clone();
        prop_assert_eq!(r(&f.add(&x, &y)), BigUint::from((a as u128 + b as u128) % p));
        prop_assert_eq!(r(&f.sub(&x, &y)), BigUint::from((a as u128 + p - b as u128) % p));
        prop_assert_eq!(r(&f.mul(&x, &y)), BigUint::from(a as u128 * b as u128 % p));
        if a != 0 {
            prop_assert!(f.is_one(&f.mul(&x, &f.inv(&x).unwrap())));
        }
    }

    #[test]
    fn fp64_signed_embedding(v in (i64::MIN + 1)..=i64::MAX) {
        let f = fp();
        let p = Fp64::MERSENNE61 as i128;
        prop_assert!(f.is_zero(&f.add(&f.from_i64(v), &f.from_i64(-v))));
        let expect = (v as i128).rem_euclid(p) as u128;
        prop_assert_eq!(f.to_residues(&f.from_i64(v))[0].clone(), BigUint::from(expect));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn ext_mul_matches_schoolbook(s1 in any::<u64>(), s2 in any::<u64>()) {
        let k = ext();
        let p = k.characteristic();
        let f = k.modulus_poly();
        let (ra, rb) = (residues(s1, 7, &p), residues(s2, 7, &p));
        let (a, b) = (k.from_residues(&ra).unwrap(), k.from_residues(&rb).unwrap());
        prop_assert_eq!(k.to_residues(&k.mul(&a, &b)), poly_mulmod(&ra, &rb, &f, &p));
        let sum: Vec<BigUint> = ra.iter().zip(&rb).map(|(x, y)| (x + y) % &p).collect();
        prop_assert_eq!(k.to_residues(&k.add(&a, &b)), sum);
    }

    #[test]
    fn ext_field_axioms(s in any::<u64>()) {
        let k = ext();
        let mut rng = ChaCha8Rng::seed_from_u64(s);
        let (a, b, c) = (k.random(&mut rng), k.random(&mut rng), k.random(&mut rng));
        prop_assert_eq!(k.mul(&a, &k.add(&b, &c)), k.add(&k.mul(&a, &b), &k.mul(&a, &c)));
        prop_assert_eq!(k.mul(&k.mul(&a, &b), &c), k.mul(&a, &k.mul(&b, &c)));
        prop_assert_eq!(k.mul(&a, &b), k.mul(&b, &a));
        prop_assert!(k.is_zero(&k.add(&a, &k.neg(&a))));
        prop_assert_eq!(k.mul_sub(&c, &a, &b), k.sub(&c, &k.mul(&a, &b)));
        if !k.is_zero(&a) {
            prop_assert!(k.is_one(&k.mul(&a, &k.inv(&a).unwrap())));
        }
    }
}

#[test]
fn ext_modulus_is_binomial_and_irreducible() {
    let k = ext();
    let f = k.modulus_poly();
    assert_eq!(f.len(), 8);
    assert!(f[1..7].iter().all(Zero::is_zero) && f[7].is_one());
    assert!(k.modulus_is_irreducible());
    assert!((k.characteristic() - 1u8) % 7u8 == BigUint::zero());
    assert!(k.inv(&k.zero()).is_err());
}
