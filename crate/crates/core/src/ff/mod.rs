//! Exact arithmetic in prime fields ℤ_p and extension fields ℤ_p[t]/⟨f(t)⟩.
//!
//! [`Field`] is the interface the linear-algebra layer is written against.
//! Two implementations are provided: [`Fp64`] for word-size primes and
//! [`ExtCtx`] for arbitrary-precision `p` and any extension degree `d ≥ 1`.

mod fp64;
mod mont;
mod poly;
pub mod prime;

use std::fmt;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint, RandBigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

pub use fp64::Fp64;
use mont::Mont;
use poly::Poly;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("the characteristic must be odd so that 2 is invertible")]
    EvenPrime,
    #[error("modulus is not prime")]
    NotPrime,
    #[error("division by zero")]
    DivisionByZero,
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("polynomial is not irreducible")]
    NotIrreducible,
    #[error("unsupported modulus: {0}")]
    UnsupportedModulus(String),
    #[error("malformed field data: {0}")]
    Malformed(String),
}

/// A finite field. Contexts are cheap to clone; elements are plain values.
pub trait Field: Clone + fmt::Debug + Send + Sync + 'static {
    type Elem: Clone + PartialEq + Eq + fmt::Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_u64(&self, v: u64) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Result<Self::Elem, FieldError>;

    /// `a − b·c`.
    fn mul_sub(&self, a: &Self::Elem, b: &Self::Elem, c: &Self::Elem) -> Self::Elem {
        self.sub(a, &self.mul(b, c))
    }

    fn from_i64(&self, v: i64) -> Self::Elem {
        let m = self.from_u64(v.unsigned_abs());
        if v < 0 {
            self.neg(&m)
        } else {
            m
        }
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    /// Uniform element of the whole field.
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Elem;

    /// Uniform element of the subset `{0, 1, …, bound−1} ⊆ ℤ_p ⊆ 𝔽`.
    fn random_below<R: Rng + ?Sized>(&self, bound: u64, rng: &mut R) -> Self::Elem;

    fn order(&self) -> BigUint;
    fn characteristic(&self) -> BigUint;
    fn degree(&self) -> usize;
    /// The monic defining polynomial, `d + 1` coefficients, constant term first.
    fn modulus_poly(&self) -> Vec<BigUint>;
    /// Canonical residues of the coefficient vector (length `d`).
    fn to_residues(&self, a: &Self::Elem) -> Vec<BigUint>;
    fn from_residues(&self, r: &[BigUint]) -> Result<Self::Elem, FieldError>;
}

/// A certified odd prime.
#[derive(Clone, PartialEq, Eq)]
pub struct PrimeCtx {
    p: BigUint,
}

impl fmt::Debug for PrimeCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PrimeCtx({:#x})", self.p)
    }
}

impl PrimeCtx {
    pub fn new(p: BigUint) -> Result<Self, FieldError> {
        Self::with_rounds(p, prime::MILLER_RABIN_ROUNDS)
    }

    /// Miller–Rabin with a configurable number of random rounds. The bases
    /// are drawn from an RNG seeded by `p`, so the verdict is reproducible.
    pub fn with_rounds(p: BigUint, rounds: usize) -> Result<Self, FieldError> {
        if p == BigUint::from(2u8) {
            return Err(FieldError::EvenPrime);
        }
        let seed = p.iter_u64_digits().fold(0x9e37_79b9_7f4a_7c15u64, |h, w| {
            h.rotate_left(17) ^ w.wrapping_mul(0xbf58_476d_1ce4_e5b9)
        });
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        if !prime::is_probable_prime(&p, rounds, &mut rng) {
            return Err(FieldError::NotPrime);
        }
        Ok(PrimeCtx { p })
    }

    pub fn p(&self) -> &BigUint {
        &self.p
    }

    /// The unique integer in `[−(p−1)/2, (p−1)/2]` congruent to `r`.
    pub fn centered_lift(&self, r: &BigUint) -> BigInt {
        centered_lift(&self.p, r)
    }
}

/// The unique integer in `[−(p−1)/2, (p−1)/2]` congruent to `r` modulo odd `p`.
pub fn centered_lift(p: &BigUint, r: &BigUint) -> BigInt {
    let r = r % p;
    let half = p >> 1u32;
    if r > half {
        BigInt::from_biguint(Sign::Minus, p - &r)
    } else {
        BigInt::from_biguint(Sign::Plus, r)
    }
}

/// Element of an extension field: `d` coefficients in Montgomery form,
/// flattened limb-wise. Always fully reduced, so equality is structural.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FieldElement {
    limbs: Box<[u64]>,
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldElement[{} limbs]", self.limbs.len())
    }
}

struct ExtInner {
    prime: PrimeCtx,
    d: usize,
    f: Vec<BigUint>,
    /// `(j, −f_j)` for the nonzero non-leading coefficients.
    f_neg: Vec<(usize, Vec<u64>)>,
    mont: Mont,
}

/// The field 𝔽 = ℤ_p[t]/⟨f(t)⟩ with `f` monic irreducible of degree `d`.
#[derive(Clone)]
pub struct ExtCtx {
    inner: Arc<ExtInner>,
}

impl fmt::Debug for ExtCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "ExtCtx(p: {} bits, d: {})",
            self.inner.prime.p.bits(),
            self.inner.d
        )
    }
}

impl PartialEq for ExtCtx {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.prime == other.inner.prime && self.inner.f == other.inner.f)
    }
}

impl Eq for ExtCtx {}

impl ExtCtx {
    /// Context for an explicit monic `f` (constant term first). Irreducibility
    /// is certified.
    pub fn new(prime: PrimeCtx, f: Vec<BigUint>) -> Result<Self, FieldError> {
        let ctx = Self::ring_unchecked(prime, f)?;
        if !ctx.modulus_is_irreducible() {
            return Err(FieldError::NotIrreducible);
        }
        Ok(ctx)
    }

    /// The quotient ring ℤ_p[t]/⟨f⟩ without an irreducibility check.
    fn ring_unchecked(prime: PrimeCtx, mut f: Vec<BigUint>) -> Result<Self, FieldError> {
        let p = prime.p.clone();
        for c in f.iter_mut() {
            *c = &*c % &p;
        }
        while f.last().is_some_and(|c| c.is_zero()) {
            f.pop();
        }
        if f.len() < 2 {
            return Err(FieldError::ZeroDegree);
        }
        if !f.last().unwrap().is_one() {
            return Err(FieldError::Malformed("modulus polynomial is not monic".into()));
        }
        let d = f.len() - 1;
        // Room for 2d lazily accumulated products.
        let headroom = (2 * d as u64 + 2).ilog2() as u64 + 2;
        let mont = Mont::new(&p, headroom);
        let f_neg = f[..d]
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(j, c)| {
                let cm = mont.to_mont(c);
                let mut neg = vec![0u64; mont.limbs];
                mont.neg(&cm, &mut neg);
                (j, neg)
            })
            .collect();
        Ok(ExtCtx {
            inner: Arc::new(ExtInner {
                prime,
                d,
                f,
                f_neg,
                mont,
            }),
        })
    }

    pub fn prime(&self) -> &PrimeCtx {
        &self.inner.prime
    }

    pub fn p(&self) -> &BigUint {
        &self.inner.prime.p
    }

    pub fn d(&self) -> usize {
        self.inner.d
    }

    pub fn f(&self) -> &[BigUint] {
        &self.inner.f
    }

    fn limbs(&self) -> usize {
        self.inner.mont.limbs
    }

    fn coeff<'a>(&self, a: &'a FieldElement, i: usize) -> &'a [u64] {
        let l = self.limbs();
        &a.limbs[i * l..(i + 1) * l]
    }

    fn zero_elem(&self) -> FieldElement {
        FieldElement {
            limbs: vec![0u64; self.d() * self.limbs()].into_boxed_slice(),
        }
    }

    /// The class of `t`.
    pub fn t(&self) -> FieldElement {
        if self.d() == 1 {
            // f = t + f0, so t ≡ −f0
            let f0 = self.inner.mont.to_mont(&self.inner.f[0]);
            let mut out = self.zero_elem();
            self.inner.mont.neg(&f0, &mut out.limbs[..]);
            out
        } else {
            let mut out = self.zero_elem();
            let l = self.limbs();
            out.limbs[l..2 * l].copy_from_slice(&self.inner.mont.one);
            out
        }
    }

    /// Embeds a signed integer.
    pub fn from_bigint(&self, v: &BigInt) -> FieldElement {
        let p = self.p();
        let r = v.mod_floor(&BigInt::from(p.clone()));
        let mut out = self.zero_elem();
        let l = self.limbs();
        out.limbs[..l].copy_from_slice(&self.inner.mont.to_mont(r.magnitude()));
        out
    }

    /// Reduces an integer polynomial (constant term first) modulo `(p, f)`.
    pub fn from_int_poly(&self, coeffs: &[BigInt]) -> FieldElement {
        let m = &self.inner.mont;
        let pb = BigInt::from(self.p().clone());
        let mut c: Vec<Vec<u64>> = coeffs
            .iter()
            .map(|x| m.to_mont(x.mod_floor(&pb).magnitude()))
            .collect();
        self.reduce_poly(&mut c)
    }

    fn reduce_poly(&self, c: &mut Vec<Vec<u64>>) -> FieldElement {
        let d = self.d();
        let m = &self.inner.mont;
        let mut tmp = vec![0u64; m.limbs];
        for k in (d..c.len()).rev() {
            let ck = std::mem::take(&mut c[k]);
            if Mont::is_zero(&ck) {
                continue;
            }
            for (j, nf) in self.inner.f_neg.iter() {
                m.mul(&ck, nf, &mut tmp);
                let slot = &mut c[k - d + j];
                let cur = slot.clone();
                m.add(&cur, &tmp, slot);
            }
        }
        let mut out = self.zero_elem();
        let l = m.limbs;
        for (i, ci) in c.iter().take(d).enumerate() {
            out.limbs[i * l..(i + 1) * l].copy_from_slice(ci);
        }
        out
    }

    fn to_poly(&self, a: &FieldElement) -> Poly {
        let mut p: Poly = (0..self.d()).map(|i| self.coeff(a, i).to_vec()).collect();
        poly::trim(&mut p);
        p
    }

    fn from_poly(&self, p: &Poly) -> FieldElement {
        let mut c = p.clone();
        c.resize(self.d().max(c.len()), vec![0u64; self.limbs()]);
        self.reduce_poly(&mut c)
    }

    fn modulus_as_poly(&self) -> Poly {
        self.inner
            .f
            .iter()
            .map(|c| self.inner.mont.to_mont(c))
            .collect()
    }

    pub fn pow(&self, a: &FieldElement, e: &BigUint) -> FieldElement {
        let mut acc = self.one();
        for i in (0..e.bits()).rev() {
            acc = self.mul(&acc, &acc);
            if e.bit(i) {
                acc = self.mul(&acc, a);
            }
        }
        acc
    }

    /// Number of nonzero coefficients.
    pub fn weight(&self, a: &FieldElement) -> usize {
        (0..self.d())
            .filter(|&i| !Mont::is_zero(self.coeff(a, i)))
            .count()
    }

    /// Whether `f` is irreducible: `gcd(t^(p^i) − t, f) = 1` for `1 ≤ i ≤ d/2`.
    pub fn modulus_is_irreducible(&self) -> bool {
        let d = self.d();
        if d == 1 {
            return true;
        }
        let m = &self.inner.mont;
        let fpoly = self.modulus_as_poly();
        let t_poly: Poly = vec![vec![0u64; m.limbs], m.one.clone()];
        let binomial = self.inner.f_neg.len() == 1 && self.inner.f_neg[0].0 == 0;
        if binomial {
            // t^d = b, so (c·t^r)^p = c·b^⌊rp/d⌋·t^(rp mod d).
            let b = &self.inner.f_neg[0].1;
            let p = self.p();
            let d_big = BigUint::from(d);
            let mut c = m.one.clone();
            let mut r = BigUint::one();
            for _ in 1..=d / 2 {
                let rp = &r * p;
                let (q, s) = rp.div_rem(&d_big);
                c = m.mul_new(&c, &m.pow(b, &q));
                r = s;
                let ri: usize = r.iter_u64_digits().next().unwrap_or(0) as usize;
                let mut h: Poly = vec![vec![0u64; m.limbs]; d];
                h[ri] = c.clone();
                let cur = h[1].clone();
                m.sub(&cur, &m.one, &mut h[1]);
                poly::trim(&mut h);
                if poly::gcd(m, &h, &fpoly).len() != 1 {
                    return false;
                }
            }
            return true;
        }
        let t = self.from_poly(&t_poly);
        let mut frob = t.clone();
        for _ in 1..=d / 2 {
            frob = self.pow(&frob, self.p());
            let h = self.sub(&frob, &t);
            let g = poly::gcd(m, &self.to_poly(&h), &fpoly);
            if g.len() != 1 {
                return false;
            }
        }
        true
    }
}

impl Field for ExtCtx {
    type Elem = FieldElement;

    fn zero(&self) -> FieldElement {
        self.zero_elem()
    }

    fn one(&self) -> FieldElement {
        let mut out = self.zero_elem();
        out.limbs[..self.limbs()].copy_from_slice(&self.inner.mont.one);
        out
    }

    fn from_u64(&self, v: u64) -> FieldElement {
        let mut out = self.zero_elem();
        out.limbs[..self.limbs()].copy_from_slice(&self.inner.mont.from_u64(v));
        out
    }

    fn is_zero(&self, a: &FieldElement) -> bool {
        a.limbs.iter().all(|&w| w == 0)
    }

    fn add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let l = self.limbs();
        let mut out = self.zero_elem();
        for i in 0..self.d() {
            let r = i * l..(i + 1) * l;
            self.inner
                .mont
                .add(&a.limbs[r.clone()], &b.limbs[r.clone()], &mut out.limbs[r]);
        }
        out
    }

    fn sub(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let l = self.limbs();
        let mut out = self.zero_elem();
        for i in 0..self.d() {
            let r = i * l..(i + 1) * l;
            self.inner
                .mont
                .sub(&a.limbs[r.clone()], &b.limbs[r.clone()], &mut out.limbs[r]);
        }
        out
    }

    fn neg(&self, a: &FieldElement) -> FieldElement {
        let l = self.limbs();
        let mut out = self.zero_elem();
        for i in 0..self.d() {
            let r = i * l..(i + 1) * l;
            self.inner.mont.neg(&a.limbs[r.clone()], &mut out.limbs[r]);
        }
        out
    }

    fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let d = self.d();
        let m = &self.inner.mont;
        let l = m.limbs;
        let w = m.wide_len();
        let nz = |x: &FieldElement| -> Vec<usize> {
            (0..d)
                .filter(|&i| !Mont::is_zero(&x.limbs[i * l..(i + 1) * l]))
                .collect()
        };
        let na = nz(a);
        if na.is_empty() {
            return self.zero_elem();
        }
        let nb = nz(b);
        if nb.is_empty() {
            return self.zero_elem();
        }
        let (outer, oe, inner, ie) = if na.len() <= nb.len() {
            (&na, a, &nb, b)
        } else {
            (&nb, b, &na, a)
        };
        let top = outer.last().unwrap() + inner.last().unwrap();
        let mut acc = vec![0u64; (top + 1).max(d) * w];
        for &i in outer {
            let x = &oe.limbs[i * l..(i + 1) * l];
            for &j in inner {
                let k = i + j;
                m.mul_acc(&mut acc[k * w..(k + 1) * w], x, &ie.limbs[j * l..(j + 1) * l]);
            }
        }
        let mut ck = vec![0u64; l];
        for k in (d..=top).rev() {
            let slot = &mut acc[k * w..(k + 1) * w];
            if Mont::is_zero(slot) {
                continue;
            }
            m.redc(slot, &mut ck);
            if Mont::is_zero(&ck) {
                continue;
            }
            for (j, nf) in self.inner.f_neg.iter() {
                let kk = k - d + j;
                m.mul_acc(&mut acc[kk * w..(kk + 1) * w], &ck, nf);
            }
        }
        let mut out = self.zero_elem();
        for k in 0..d {
            m.redc(&mut acc[k * w..(k + 1) * w], &mut out.limbs[k * l..(k + 1) * l]);
        }
        out
    }

    fn inv(&self, a: &FieldElement) -> Result<FieldElement, FieldError> {
        if self.is_zero(a) {
            return Err(FieldError::DivisionByZero);
        }
        let m = &self.inner.mont;
        if self.d() == 1 {
            let mut out = self.zero_elem();
            out.limbs
                .copy_from_slice(&m.inv(&a.limbs).ok_or(FieldError::DivisionByZero)?);
            return Ok(out);
        }
        let inv = poly::inv_mod(m, &self.to_poly(a), &self.modulus_as_poly())
            .ok_or(FieldError::DivisionByZero)?;
        Ok(self.from_poly(&inv))
    }

    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> FieldElement {
        sample_uniform(self, rng)
    }

    fn random_below<R: Rng + ?Sized>(&self, bound: u64, rng: &mut R) -> FieldElement {
        let v = rng.gen_range(0..bound);
        self.from_bigint(&BigInt::from(v))
    }

    fn order(&self) -> BigUint {
        num_traits::pow(self.p().clone(), self.d())
    }

    fn characteristic(&self) -> BigUint {
        self.p().clone()
    }

    fn degree(&self) -> usize {
        self.d()
    }

    fn modulus_poly(&self) -> Vec<BigUint> {
        self.inner.f.clone()
    }

    fn to_residues(&self, a: &FieldElement) -> Vec<BigUint> {
        (0..self.d())
            .map(|i| self.inner.mont.from_mont(self.coeff(a, i)))
            .collect()
    }

    fn from_residues(&self, r: &[BigUint]) -> Result<FieldElement, FieldError> {
        if r.len() != self.d() {
            return Err(FieldError::Malformed(format!(
                "expected {} residues, found {}",
                self.d(),
                r.len()
            )));
        }
        let mut out = self.zero_elem();
        let l = self.limbs();
        for (i, x) in r.iter().enumerate() {
            if x >= self.p() {
                return Err(FieldError::Malformed("residue out of range".into()));
            }
            out.limbs[i * l..(i + 1) * l].copy_from_slice(&self.inner.mont.to_mont(x));
        }
        Ok(out)
    }
}

/// Uniform element of 𝔽, deterministic in the RNG state.
pub fn sample_uniform<R: Rng + ?Sized>(ctx: &ExtCtx, rng: &mut R) -> FieldElement {
    let mut out = ctx.zero_elem();
    let l = ctx.limbs();
    for i in 0..ctx.d() {
        let c = rng.gen_biguint_below(ctx.p());
        out.limbs[i * l..(i + 1) * l].copy_from_slice(&ctx.inner.mont.to_mont(&c));
    }
    out
}

/// Random monic irreducible polynomial of degree `d` over ℤ_p by rejection
/// sampling.
pub fn make_ext_ctx<R: Rng + ?Sized>(
    p: &BigUint,
    d: usize,
    rng: &mut R,
) -> Result<ExtCtx, FieldError> {
    let prime = PrimeCtx::new(p.clone())?;
    if d == 0 {
        return Err(FieldError::ZeroDegree);
    }
    loop {
        let mut f: Vec<BigUint> = (0..d).map(|_| rng.gen_biguint_below(p)).collect();
        f.push(BigUint::one());
        let ring = ExtCtx::ring_unchecked(prime.clone(), f)?;
        if ring.modulus_is_irreducible() {
            return Ok(ring);
        }
    }
}

/// Field with the binomial modulus `f = t^d − b`, which keeps reduction and
/// the Frobenius map cheap. Requires every prime factor of `d` to divide
/// `p − 1` (and `4 | p − 1` when `4 | d`); `b` is the smallest integer ≥ 2
/// that is not an `r`-th power for any prime `r | d`.
pub fn make_binomial_ext_ctx(prime: PrimeCtx, d: usize) -> Result<ExtCtx, FieldError> {
    if d == 0 {
        return Err(FieldError::ZeroDegree);
    }
    let p = prime.p().clone();
    let pm1 = &p - 1u8;
    if d == 1 {
        return ExtCtx::ring_unchecked(prime, vec![BigUint::zero(), BigUint::one()]);
    }
    let rs = prime::prime_factors(d as u64);
    for r in rs.iter() {
        if !(&pm1 % r).is_zero() {
            return Err(FieldError::UnsupportedModulus(format!(
                "{r} divides the degree but not p − 1"
            )));
        }
    }
    if d.is_multiple_of(4) && !(&pm1 % 4u8).is_zero() {
        return Err(FieldError::UnsupportedModulus("4 | d requires p ≡ 1 mod 4".into()));
    }
    let mut b = BigUint::from(2u8);
    loop {
        let non_power = rs
            .iter()
            .all(|r| !b.modpow(&(&pm1 / r), &p).is_one());
        // Capelli: for 4 | d also b ∉ −4·𝔽^4; verified by the generic test below.
        if non_power {
            let mut f = vec![BigUint::zero(); d + 1];
            f[0] = &p - &b;
            f[d] = BigUint::one();
            let ctx = ExtCtx::ring_unchecked(prime.clone(), f)?;
            if ctx.modulus_is_irreducible() {
                return Ok(ctx);
            }
        }
        b += 1u8;
        if b > BigUint::from(10_000u32) {
            return Err(FieldError::NotIrreducible);
        }
    }
}
