//! Word-size prime field with single-limb Montgomery arithmetic.

use std::fmt;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rand::Rng;

use super::{Field, FieldError};

/// ℤ_p for an odd prime `p < 2^63`. Elements are stored in Montgomery form.
#[derive(Clone, Copy, PartialEq, Eq)]
pub struct Fp64 {
    p: u64,
    p_inv_neg: u64,
    r2: u64,
    one: u64,
}

impl fmt::Debug for Fp64 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Fp64({})", self.p)
    }
}

impl Fp64 {
    /// Mersenne prime 2^61 − 1.
    pub const MERSENNE61: u64 = (1 << 61) - 1;

    pub fn new(p: u64) -> Result<Self, FieldError> {
        if p == 2 {
            return Err(FieldError::EvenPrime);
        }
        if !(3..1 << 63).contains(&p) {
            return Err(FieldError::UnsupportedModulus(format!(
                "{p} is outside the word-size range"
            )));
        }
        let mut rng = rand::rngs::mock::StepRng::new(p, 1);
        if !super::prime::is_probable_prime(&BigUint::from(p), 0, &mut rng) {
            return Err(FieldError::NotPrime);
        }
        let mut inv: u64 = 1;
        for _ in 0..7 {
            inv = inv.wrapping_mul(2u64.wrapping_sub(p.wrapping_mul(inv)));
        }
        let r = (1u128 << 64) % p as u128;
        let r2 = (r * r) % p as u128;
        Ok(Fp64 {
            p,
            p_inv_neg: inv.wrapping_neg(),
            r2: r2 as u64,
            one: r as u64,
        })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    #[inline]
    fn redc(&self, t: u128) -> u64 {
        let m = (t as u64).wrapping_mul(self.p_inv_neg);
        let s = t + m as u128 * self.p as u128;
        // t < p·2^64 so the shifted sum is < 2p < 2^64
        let r = (s >> 64) as u64;
        if r >= self.p {
            r - self.p
        } else {
            r
        }
    }

    #[inline]
    fn mont_mul(&self, a: u64, b: u64) -> u64 {
        self.redc(a as u128 * b as u128)
    }

    pub fn to_canonical(&self, a: u64) -> u64 {
        self.redc(a as u128)
    }

    pub fn from_canonical(&self, v: u64) -> u64 {
        self.mont_mul(v % self.p, self.r2)
    }
}

impl Field for Fp64 {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }

    fn one(&self) -> u64 {
        self.one
    }

    fn from_u64(&self, v: u64) -> u64 {
        self.from_canonical(v)
    }

    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }

    #[inline]
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        self.mont_mul(*a, *b)
    }

    #[inline]
    fn mul_sub(&self, a: &u64, b: &u64, c: &u64) -> u64 {
        self.sub(a, &self.mont_mul(*b, *c))
    }

    fn inv(&self, a: &u64) -> Result<u64, FieldError> {
        if *a == 0 {
            return Err(FieldError::DivisionByZero);
        }
        // Fermat: a^(p-2)
        let mut e = self.p - 2;
        let mut base = *a;
        let mut acc = self.one;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mont_mul(acc, base);
            }
            base = self.mont_mul(base, base);
            e >>= 1;
        }
        Ok(acc)
    }

    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        self.from_canonical(rng.gen_range(0..self.p))
    }

    fn random_below<R: Rng + ?Sized>(&self, bound: u64, rng: &mut R) -> u64 {
        self.from_canonical(rng.gen_range(0..bound.min(self.p)))
    }

    fn order(&self) -> BigUint {
        BigUint::from(self.p)
    }

    fn characteristic(&self) -> BigUint {
        BigUint::from(self.p)
    }

    fn degree(&self) -> usize {
        1
    }

    fn modulus_poly(&self) -> Vec<BigUint> {
        vec![BigUint::from(0u8), BigUint::from(1u8)]
    }

    fn to_residues(&self, a: &u64) -> Vec<BigUint> {
        vec![BigUint::from(self.to_canonical(*a))]
    }

    fn from_residues(&self, r: &[BigUint]) -> Result<u64, FieldError> {
        if r.len() != 1 {
            return Err(FieldError::Malformed(format!(
                "expected 1 residue, found {}",
                r.len()
            )));
        }
        let v = r[0]
            .to_u64()
            .filter(|v| *v < self.p)
            .ok_or_else(|| FieldError::Malformed("residue out of range".into()))?;
        Ok(self.from_canonical(v))
    }
}
