//! Probable-prime testing and prime search.

use num_bigint::{BigUint, RandBigInt};
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;

/// Miller–Rabin rounds used everywhere a prime is certified.
pub const MILLER_RABIN_ROUNDS: usize = 64;

const SMALL_PRIMES: [u32; 54] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
    101, 103, 107, 109, 113, 127, 131, 137, 139, 149, 151, 157, 163, 167, 173, 179, 181, 191, 193,
    197, 199, 211, 223, 227, 229, 233, 239, 241, 251,
];

/// Miller–Rabin with `rounds` random bases. Deterministic for `n < 2^64`
/// regardless of `rounds` (the first twelve prime bases are always tried).
pub fn is_probable_prime<R: Rng + ?Sized>(n: &BigUint, rounds: usize, rng: &mut R) -> bool {
    if n < &BigUint::from(2u8) {
        return false;
    }
    for &sp in SMALL_PRIMES.iter() {
        let sp = BigUint::from(sp);
        if n == &sp {
            return true;
        }
        if (n % &sp).is_zero() {
            return false;
        }
    }
    let n_minus_1 = n - 1u8;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    let witness = |a: &BigUint| -> bool {
        let mut x = a.modpow(&d, n);
        if x.is_one() || x == n_minus_1 {
            return false;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n_minus_1 {
                return false;
            }
            if x.is_one() {
                return true;
            }
        }
        true
    };
    for &b in SMALL_PRIMES[..12].iter() {
        if witness(&BigUint::from(b)) {
            return false;
        }
    }
    if n.bits() <= 64 {
        return true;
    }
    let two = BigUint::from(2u8);
    for _ in 0..rounds {
        let a = rng.gen_biguint_range(&two, &n_minus_1);
        if witness(&a) {
            return false;
        }
    }
    true
}

/// Smallest probable prime `q > lower` with `q ≡ 1 (mod modulus)`.
/// `modulus = 1` gives the plain next prime.
pub fn next_prime_congruent_one<R: Rng + ?Sized>(
    lower: &BigUint,
    modulus: u64,
    rng: &mut R,
) -> BigUint {
    assert!(modulus >= 1);
    // Step keeps candidates odd and ≡ 1 mod `modulus`.
    let step = if modulus.is_multiple_of(2) { modulus } else { 2 * modulus };
    let step_big = BigUint::from(step);
    let mut q = lower + 1u8;
    let r = (&q % &step_big).to_u64().unwrap();
    let offset = (1 + step - r) % step;
    q += offset;
    if q == BigUint::one() {
        q += &step_big;
    }
    loop {
        if is_probable_prime(&q, MILLER_RABIN_ROUNDS, rng) {
            return q;
        }
        q += &step_big;
    }
}

/// Distinct prime factors of a small integer.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut f = 2;
    while f * f <= n {
        if n.is_multiple_of(f) {
            out.push(f);
            while n.is_multiple_of(f) {
                n /= f;
            }
        }
        f += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}
