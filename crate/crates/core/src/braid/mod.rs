//! The braid group `B_N` in Garside left normal form `Δ^i p₁⋯p_ℓ`.
//!
//! Factors are permutation braids other than the identity and `Δ`, and every
//! consecutive pair `(p, q)` is left-weighted: the starting set of `q` is
//! contained in the finishing set of `p`. Normal forms are unique, so braid
//! equality is structural equality.

mod perm;

use rand::seq::SliceRandom;
use rand::Rng;
use thiserror::Error;

pub use perm::Perm;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BraidError {
    #[error("generator index {index} out of range for {n} strands")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("strand counts differ: {0} vs {1}")]
    StrandMismatch(usize, usize),
    #[error("invalid braid data: {0}")]
    Malformed(String),
}

/// Word in the Artin generators: `(j, ±1)` stands for `σ_j^{±1}`, `1 ≤ j < N`.
pub type Word = Vec<(usize, i8)>;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Braid {
    n: usize,
    inf: i64,
    factors: Vec<Perm>,
}

/// `[lo, hi]`: braids with `lo ≤ inf(x)` and `inf(x) + ℓ(x) ≤ hi`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Interval {
    pub lo: i64,
    pub hi: i64,
}

impl Interval {
    pub fn contains(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    /// Smallest `M ≥ 0` with `self ⊆ [−M, M]`.
    pub fn radius(&self) -> u64 {
        self.lo.unsigned_abs().max(self.hi.unsigned_abs())
    }
}

/// Makes `(p, q)` left-weighted by moving generators from the front of `q`
/// to the back of `p`. Returns whether anything moved.
fn left_weight(p: &mut Perm, q: &mut Perm) -> bool {
    let mut changed = false;
    'outer: loop {
        for j in 0..q.n() - 1 {
            if q.starts_with(j) && !p.ends_with(j) {
                *p = p.right_mul_simple(j);
                *q = q.left_mul_simple(j);
                changed = true;
                continue 'outer;
            }
        }
        return changed;
    }
}

impl Braid {
    pub fn identity(n: usize) -> Self {
        assert!(n >= 2, "braid groups need at least two strands");
        Braid {
            n,
            inf: 0,
            factors: Vec::new(),
        }
    }

    /// `Δ^k`.
    pub fn delta_power(n: usize, k: i64) -> Self {
        Braid {
            inf: k,
            ..Self::identity(n)
        }
    }

    /// Validates and wraps normal-form data.
    pub fn from_normal_form(n: usize, inf: i64, factors: Vec<Perm>) -> Result<Self, BraidError> {
        if n < 2 {
            return Err(BraidError::Malformed("need at least two strands".into()));
        }
        for p in &factors {
            if p.n() != n {
                return Err(BraidError::StrandMismatch(n, p.n()));
            }
            if p.is_identity() || p.is_delta() {
                return Err(BraidError::Malformed("identity or Δ factor".into()));
            }
        }
        for w in factors.windows(2) {
            if w[1].starting_set().iter().any(|&j| !w[0].ends_with(j)) {
                return Err(BraidError::Malformed("factors are not left-weighted".into()));
            }
        }
        Ok(Braid { n, inf, factors })
    }

    /// The positive permutation braid of `p`, normalized.
    pub fn from_perm(p: &Perm) -> Self {
        let mut b = Self::identity(p.n());
        b.push_perm(p.clone());
        b
    }

    pub fn generator(n: usize, j: usize, sign: i8) -> Result<Self, BraidError> {
        if j == 0 || j >= n {
            return Err(BraidError::IndexOutOfRange { index: j, n });
        }
        let s = Perm::simple(n, j - 1);
        Ok(if sign > 0 {
            Self::from_perm(&s)
        } else {
            // σ_j⁻¹ = Δ⁻¹·(Δσ_j⁻¹)
            let mut b = Self::delta_power(n, -1);
            b.push_perm(s.left_complement());
            b
        })
    }

    pub fn from_word(n: usize, word: &[(usize, i8)]) -> Result<Self, BraidError> {
        if n < 2 {
            return Err(BraidError::Malformed("need at least two strands".into()));
        }
        let mut b = Self::identity(n);
        for &(j, s) in word {
            if j == 0 || j >= n {
                return Err(BraidError::IndexOutOfRange { index: j, n });
            }
            let p = Perm::simple(n, j - 1);
            if s > 0 {
                b.push_perm(p);
            } else {
                b.push_delta(-1);
                b.push_perm(p.left_complement());
            }
        }
        Ok(b)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn inf(&self) -> i64 {
        self.inf
    }

    pub fn factors(&self) -> &[Perm] {
        &self.factors
    }

    pub fn canonical_length(&self) -> usize {
        self.factors.len()
    }

    pub fn sup(&self) -> i64 {
        self.inf + self.factors.len() as i64
    }

    pub fn is_identity(&self) -> bool {
        self.inf == 0 && self.factors.is_empty()
    }

    pub fn interval(&self) -> Interval {
        Interval {
            lo: self.inf,
            hi: self.sup(),
        }
    }

    /// Right multiplication by `Δ^k`: `L·Δ^k = Δ^k·τ^k(L)`.
    fn push_delta(&mut self, k: i64) {
        if k.rem_euclid(2) == 1 {
            for p in self.factors.iter_mut() {
                *p = p.tau();
            }
        }
        self.inf += k;
    }

    /// Right multiplication by a permutation braid, restoring normal form.
    fn push_perm(&mut self, p: Perm) {
        if p.is_identity() {
            return;
        }
        self.factors.push(p);
        let mut i = self.factors.len() - 1;
        while i > 0 {
            let (a, b) = self.factors.split_at_mut(i);
            if !left_weight(&mut a[i - 1], &mut b[0]) {
                break;
            }
            i -= 1;
        }
        // Δ factors can only surface at the front, identities only at the back.
        let leading = self.factors.iter().take_while(|f| f.is_delta()).count();
        if leading > 0 {
            self.factors.drain(..leading);
            // Δ^inf Δ^c L = Δ^{inf+c} L
            self.inf += leading as i64;
        }
        while self.factors.last().is_some_and(|f| f.is_identity()) {
            self.factors.pop();
        }
    }

    fn check(&self, other: &Braid) -> Result<(), BraidError> {
        if self.n != other.n {
            Err(BraidError::StrandMismatch(self.n, other.n))
        } else {
            Ok(())
        }
    }

    pub fn try_mul(&self, other: &Braid) -> Result<Braid, BraidError> {
        self.check(other)?;
        // Δ^i A Δ^j B = Δ^{i+j} τ^j(A) B
        let mut out = self.clone();
        out.push_delta(other.inf);
        for p in &other.factors {
            out.push_perm(p.clone());
        }
        Ok(out)
    }

    pub fn mul(&self, other: &Braid) -> Braid {
        self.try_mul(other).expect("strand mismatch")
    }

    pub fn inv(&self) -> Braid {
        // (Δ^i p₁⋯p_ℓ)⁻¹ = p_ℓ⁻¹⋯p₁⁻¹Δ^{−i}, with p⁻¹ = Δ⁻¹·∂p
        let mut out = Self::identity(self.n);
        for p in self.factors.iter().rev() {
            out.push_delta(-1);
            out.push_perm(p.left_complement());
        }
        out.push_delta(-self.inf);
        out
    }

    /// `x⁻¹·self·x`.
    pub fn try_conj(&self, x: &Braid) -> Result<Braid, BraidError> {
        self.check(x)?;
        Ok(x.inv().mul(self).mul(x))
    }

    pub fn conj(&self, x: &Braid) -> Braid {
        self.try_conj(x).expect("strand mismatch")
    }

    pub fn pow(&self, e: i64) -> Braid {
        let base = if e < 0 { self.inv() } else { self.clone() };
        let mut acc = Self::identity(self.n);
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(&base);
        }
        acc
    }

    /// `(j, x̃)` with `self = Δ^{2j}·x̃` and `inf(x̃) ∈ {0, 1}`.
    pub fn central_decompose(&self) -> (i64, Braid) {
        let r = self.inf.rem_euclid(2);
        let j = (self.inf - r) / 2;
        (
            j,
            Braid {
                inf: r,
                ..self.clone()
            },
        )
    }

    /// Positive Artin word of `Δ`: `σ₁(σ₂σ₁)(σ₃σ₂σ₁)⋯`.
    pub fn delta_word(n: usize) -> Vec<usize> {
        let mut w = Vec::with_capacity(n * (n - 1) / 2);
        for top in 1..n {
            for j in (1..=top).rev() {
                w.push(j);
            }
        }
        w
    }

    /// An Artin word representing this braid (one-indexed generators).
    pub fn to_word(&self) -> Word {
        let dw = Self::delta_word(self.n);
        let mut out: Word = Vec::new();
        if self.inf >= 0 {
            for _ in 0..self.inf {
                out.extend(dw.iter().map(|&j| (j, 1i8)));
            }
        } else {
            for _ in 0..-self.inf {
                out.extend(dw.iter().rev().map(|&j| (j, -1i8)));
            }
        }
        for p in &self.factors {
            out.extend(p.reduced_word().into_iter().map(|j| (j + 1, 1i8)));
        }
        out
    }

    /// Uniform random permutation braid (possibly trivial or `Δ`).
    pub fn random_perm<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Perm {
        let mut images: Vec<u8> = (0..n as u8).collect();
        images.shuffle(rng);
        Perm::from_images(images).unwrap()
    }

    /// `Δ^i` times `len` random permutation braids, so the result lies in
    /// `[i, i + len]` and has canonical length at most `len`.
    pub fn random<R: Rng + ?Sized>(n: usize, inf: i64, len: usize, rng: &mut R) -> Braid {
        let mut b = Self::delta_power(n, inf);
        for _ in 0..len {
            b.push_perm(Self::random_perm(n, rng));
        }
        b
    }

    /// Random element of the parabolic subgroup on generators `σ_lo..σ_hi`
    /// (one-indexed, inclusive), given as a word of `len` letters.
    pub fn random_in_generators<R: Rng + ?Sized>(
        n: usize,
        gens: &[usize],
        len: usize,
        rng: &mut R,
    ) -> Braid {
        let word: Word = (0..len)
            .map(|_| (*gens.choose(rng).unwrap(), if rng.gen::<bool>() { 1 } else { -1 }))
            .collect();
        Self::from_word(n, &word).expect("generators in range")
    }
}

/// Free reduction: cancels adjacent `x x⁻¹` pairs.
pub fn free_reduce(word: &[(usize, i8)]) -> Word {
    let mut out: Word = Vec::with_capacity(word.len());
    for &(j, s) in word {
        if out.last().is_some_and(|&(k, t)| k == j && t == -s) {
            out.pop();
        } else {
            out.push((j, s));
        }
    }
    out
}

/// `m` i.i.d. uniform letters over `{1..k}×{±1}`, then freely reduced.
pub fn random_word<R: Rng + ?Sized>(k: usize, m: usize, rng: &mut R) -> Word {
    let raw: Word = (0..m)
        .map(|_| (rng.gen_range(1..=k), if rng.gen::<bool>() { 1 } else { -1 }))
        .collect();
    free_reduce(&raw)
}

/// Uniform freely reduced word of length exactly `m`.
pub fn random_reduced_word<R: Rng + ?Sized>(k: usize, m: usize, rng: &mut R) -> Word {
    let mut out: Word = Vec::with_capacity(m);
    while out.len() < m {
        let letter = (rng.gen_range(1..=k), if rng.gen::<bool>() { 1 } else { -1 });
        if out.last().is_some_and(|&(j, s)| j == letter.0 && s == -letter.1) {
            continue;
        }
        out.push(letter);
    }
    out
}

/// Evaluates a word in arbitrary group elements: letter `(j, s)` is
/// `elems[j−1]^s`.
pub fn eval_word<T: Clone>(
    word: &[(usize, i8)],
    elems: &[T],
    identity: T,
    mul: impl Fn(&T, &T) -> T,
    inv: impl Fn(&T) -> T,
) -> T {
    let invs: Vec<Option<T>> = vec![None; elems.len()];
    let mut invs = invs;
    let mut acc = identity;
    for &(j, s) in word {
        let e = if s > 0 {
            elems[j - 1].clone()
        } else {
            invs[j - 1].get_or_insert_with(|| inv(&elems[j - 1])).clone()
        };
        acc = mul(&acc, &e);
    }
    acc
}
