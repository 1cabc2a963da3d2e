//! Multi-limb Montgomery arithmetic modulo an odd prime of arbitrary size.
//!
//! Residues are little-endian `u64` limb slices of a fixed width `limbs`, kept
//! in Montgomery form `x·R mod p` with `R = 2^(64·limbs)`. The width is chosen
//! with headroom so that sums of many unreduced products can be accumulated in
//! `2·limbs + 1` limbs and reduced once.

use num_bigint::BigUint;
use num_traits::One;

#[derive(Clone, Debug)]
pub(crate) struct Mont {
    pub limbs: usize,
    pub p: Vec<u64>,
    p_inv_neg: u64,
    r2: Vec<u64>,
    r3: Vec<u64>,
    pub one: Vec<u64>,
    pub p_big: BigUint,
}

fn to_limbs(x: &BigUint, limbs: usize) -> Vec<u64> {
    let mut out: Vec<u64> = x.iter_u64_digits().collect();
    assert!(out.len() <= limbs, "value does not fit in {limbs} limbs");
    out.resize(limbs, 0);
    out
}

pub(crate) fn from_limbs(x: &[u64]) -> BigUint {
    let mut digits = Vec::with_capacity(x.len() * 2);
    for w in x {
        digits.push(*w as u32);
        digits.push((*w >> 32) as u32);
    }
    BigUint::new(digits)
}

impl Mont {
    /// `headroom_bits` extra bits beyond `p` so that `2^headroom · p < R`.
    pub fn new(p: &BigUint, headroom_bits: u64) -> Self {
        let bits = p.bits() + headroom_bits + 1;
        let limbs = bits.div_ceil(64) as usize;
        let p_limbs = to_limbs(p, limbs);
        // Newton iteration for p^{-1} mod 2^64.
        let p0 = p_limbs[0];
        let mut inv: u64 = 1;
        for _ in 0..7 {
            inv = inv.wrapping_mul(2u64.wrapping_sub(p0.wrapping_mul(inv)));
        }
        let r = BigUint::one() << (64 * limbs);
        let one = &r % p;
        let r2 = (&one * &one) % p;
        let r3 = (&r2 * &one) % p;
        Mont {
            limbs,
            p_inv_neg: inv.wrapping_neg(),
            one: to_limbs(&one, limbs),
            r2: to_limbs(&r2, limbs),
            r3: to_limbs(&r3, limbs),
            p: p_limbs,
            p_big: p.clone(),
        }
    }

    #[inline]
    pub fn wide_len(&self) -> usize {
        2 * self.limbs + 1
    }

    #[inline]
    pub fn is_zero(x: &[u64]) -> bool {
        x.iter().all(|&w| w == 0)
    }

    /// `acc += a · b` where `acc` has `2·limbs + 1` limbs.
    #[inline]
    pub fn mul_acc(&self, acc: &mut [u64], a: &[u64], b: &[u64]) {
        let l = self.limbs;
        for i in 0..l {
            let ai = a[i] as u128;
            if ai == 0 {
                continue;
            }
            let mut carry: u128 = 0;
            for j in 0..l {
                let t = acc[i + j] as u128 + ai * b[j] as u128 + carry;
                acc[i + j] = t as u64;
                carry = t >> 64;
            }
            let mut k = i + l;
            while carry != 0 {
                let t = acc[k] as u128 + carry;
                acc[k] = t as u64;
                carry = t >> 64;
                k += 1;
            }
        }
    }

    /// Montgomery reduction of a wide accumulator (`< p·R`) into `out`.
    /// The accumulator is clobbered.
    pub fn redc(&self, t: &mut [u64], out: &mut [u64]) {
        let l = self.limbs;
        for i in 0..l {
            let m = t[i].wrapping_mul(self.p_inv_neg) as u128;
            let mut carry: u128 = 0;
            for j in 0..l {
                let s = t[i + j] as u128 + m * self.p[j] as u128 + carry;
                t[i + j] = s as u64;
                carry = s >> 64;
            }
            let mut k = i + l;
            while carry != 0 && k < t.len() {
                let s = t[k] as u128 + carry;
                t[k] = s as u64;
                carry = s >> 64;
                k += 1;
            }
        }
        let hi = &t[l..];
        // hi has l+1 limbs, value < 2p
        let top = hi[l];
        out.copy_from_slice(&hi[..l]);
        if top != 0 || !lt(out, &self.p) {
            sub_in_place(out, &self.p);
        }
    }

    pub fn mul(&self, a: &[u64], b: &[u64], out: &mut [u64]) {
        let mut acc = vec![0u64; self.wide_len()];
        self.mul_acc(&mut acc, a, b);
        self.redc(&mut acc, out);
    }

    pub fn mul_new(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let mut out = vec![0u64; self.limbs];
        self.mul(a, b, &mut out);
        out
    }

    pub fn add(&self, a: &[u64], b: &[u64], out: &mut [u64]) {
        let mut carry = 0u64;
        for i in 0..self.limbs {
            let (s1, c1) = a[i].overflowing_add(b[i]);
            let (s2, c2) = s1.overflowing_add(carry);
            out[i] = s2;
            carry = (c1 as u64) + (c2 as u64);
        }
        if carry != 0 || !lt(out, &self.p) {
            sub_in_place(out, &self.p);
        }
    }

    pub fn sub(&self, a: &[u64], b: &[u64], out: &mut [u64]) {
        let mut borrow = 0u64;
        for i in 0..self.limbs {
            let (d1, b1) = a[i].overflowing_sub(b[i]);
            let (d2, b2) = d1.overflowing_sub(borrow);
            out[i] = d2;
            borrow = (b1 as u64) + (b2 as u64);
        }
        if borrow != 0 {
            add_in_place(out, &self.p);
        }
    }

    pub fn neg(&self, a: &[u64], out: &mut [u64]) {
        if Self::is_zero(a) {
            out.iter_mut().for_each(|w| *w = 0);
        } else {
            out.copy_from_slice(&self.p);
            sub_in_place(out, a);
        }
    }

    pub fn to_mont(&self, x: &BigUint) -> Vec<u64> {
        let reduced = if x >= &self.p_big { x % &self.p_big } else { x.clone() };
        let limbs = to_limbs(&reduced, self.limbs);
        self.mul_new(&limbs, &self.r2)
    }

    pub fn from_mont(&self, x: &[u64]) -> BigUint {
        let mut wide = vec![0u64; self.wide_len()];
        wide[..self.limbs].copy_from_slice(x);
        let mut out = vec![0u64; self.limbs];
        self.redc(&mut wide, &mut out);
        from_limbs(&out)
    }

    pub fn from_u64(&self, v: u64) -> Vec<u64> {
        self.to_mont(&BigUint::from(v))
    }

    /// Inverse of a nonzero residue in Montgomery form.
    pub fn inv(&self, x: &[u64]) -> Option<Vec<u64>> {
        if Self::is_zero(x) {
            return None;
        }
        // x = aR; (aR)^{-1} · R^3 · R^{-1} = a^{-1} R.
        let raw = from_limbs(x);
        let inv = raw.modinv(&self.p_big)?;
        let inv_limbs = to_limbs(&inv, self.limbs);
        Some(self.mul_new(&inv_limbs, &self.r3))
    }

    pub fn pow(&self, base: &[u64], exp: &BigUint) -> Vec<u64> {
        let mut result = self.one.clone();
        let mut tmp = vec![0u64; self.limbs];
        for i in (0..exp.bits()).rev() {
            self.mul(&result, &result, &mut tmp);
            std::mem::swap(&mut result, &mut tmp);
            if exp.bit(i) {
                self.mul(&result, base, &mut tmp);
                std::mem::swap(&mut result, &mut tmp);
            }
        }
        result
    }
}

#[inline]
fn lt(a: &[u64], b: &[u64]) -> bool {
    for i in (0..a.len()).rev() {
        if a[i] != b[i] {
            return a[i] < b[i];
        }
    }
    false
}

#[inline]
fn sub_in_place(a: &mut [u64], b: &[u64]) {
    let mut borrow = 0u64;
    for i in 0..a.len() {
        let (d1, b1) = a[i].overflowing_sub(b[i]);
        let (d2, b2) = d1.overflowing_sub(borrow);
        a[i] = d2;
        borrow = (b1 as u64) + (b2 as u64);
    }
}

#[inline]
fn add_in_place(a: &mut [u64], b: &[u64]) {
    let mut carry = 0u64;
    for i in 0..a.len() {
        let (s1, c1) = a[i].overflowing_add(b[i]);
        let (s2, c2) = s1.overflowing_add(carry);
        a[i] = s2;
        carry = (c1 as u64) + (c2 as u64);
    }
}
