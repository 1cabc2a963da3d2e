//! The Lawrence–Krammer representation `LK: B_N → GL_n(ℤ[t^{±1}, 1/2])`,
//! `n = C(N, 2)`, with `q = 1/2`.
//!
//! Basis vectors `v_{i,j}` (`1 ≤ i < j ≤ N`) are ordered lexicographically.
//! Column `(i, j)` of `LK(σ_k)` is the image of `v_{i,j}`; with `T = −t`:
//!
//! ```text
//! (i,j) = (k,k+1)    T q² v_{k,k+1}
//! j = k, i < k       (1−q) v_{i,k} + q v_{i,k+1}
//! j = k+1, i < k     v_{i,k} + T q^{k−i+1}(q−1) v_{k,k+1}
//! i = k, j > k+1     T q(q−1) v_{k,k+1} + q v_{k+1,j}
//! i = k+1            v_{k,j} + (1−q) v_{k+1,j}
//! i < k, k+1 < j     v_{i,j} + T q^{k−i}(q−1)² v_{k,k+1}
//! otherwise          v_{i,j}
//! ```
//!
//! The sign of `t` is chosen so that `LK(σ₁) = −t/4` in `B₂`. Images of a
//! braid are products of generator images in word order.

mod dyadic;

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed};
use thiserror::Error;

use crate::braid::Braid;
use crate::ff::{centered_lift, ExtCtx, Field, FieldElement};
use crate::linalg::FieldMatrix;

pub use dyadic::{Dyadic, DyadicLaurent};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LkError {
    #[error("generator index {index} out of range for {n} strands")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("entry ({row}, {col}) has degree {degree} > {bound} after lifting")]
    DegreeOverflow {
        row: usize,
        col: usize,
        degree: usize,
        bound: usize,
    },
    #[error("matrix has no inverse over the Laurent ring")]
    NotInvertible,
    #[error("matrix shape does not match {0} strands")]
    ShapeMismatch(usize),
}

/// `C(N, 2)`.
pub fn lk_dim(strands: usize) -> usize {
    strands * (strands - 1) / 2
}

/// Lexicographic index of `v_{i,j}`, one-indexed `i < j`.
pub fn basis_index(strands: usize, i: usize, j: usize) -> usize {
    // pairs (a, ·) with a < i come first
    (i - 1) * strands - (i - 1) * i / 2 + (j - i - 1)
}

fn basis_pairs(strands: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::with_capacity(lk_dim(strands));
    for i in 1..=strands {
        for j in i + 1..=strands {
            out.push((i, j));
        }
    }
    out
}

/// `n × n` matrix over ℤ[t^{±1}, 1/2].
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LkMatrix {
    strands: usize,
    dim: usize,
    entries: Vec<DyadicLaurent>,
}

/// Column-sparse matrix: `cols[c]` lists `(row, value)`.
#[derive(Clone, Debug)]
pub struct Sparse<T> {
    cols: Vec<Vec<(usize, T)>>,
}

impl LkMatrix {
    pub fn identity(strands: usize) -> Self {
        let dim = lk_dim(strands);
        let mut entries = vec![DyadicLaurent::zero(); dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = DyadicLaurent::one();
        }
        LkMatrix {
            strands,
            dim,
            entries,
        }
    }

    pub fn from_entries(strands: usize, entries: Vec<DyadicLaurent>) -> Result<Self, LkError> {
        let dim = lk_dim(strands);
        if entries.len() != dim * dim {
            return Err(LkError::ShapeMismatch(strands));
        }
        Ok(LkMatrix {
            strands,
            dim,
            entries,
        })
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[DyadicLaurent] {
        &self.entries
    }

    pub fn get(&self, r: usize, c: usize) -> &DyadicLaurent {
        &self.entries[r * self.dim + c]
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.strands)
    }

    pub fn mul(&self, o: &LkMatrix) -> LkMatrix {
        let n = self.dim;
        let mut entries = vec![DyadicLaurent::zero(); n * n];
        for r in 0..n {
            for s in 0..n {
                let a = &self.entries[r * n + s];
                if a.is_zero() {
                    continue;
                }
                for c in 0..n {
                    let b = &o.entries[s * n + c];
                    if !b.is_zero() {
                        entries[r * n + c].add_mul(a, b);
                    }
                }
            }
        }
        LkMatrix {
            entries,
            ..self.clone_shape()
        }
    }

    fn clone_shape(&self) -> LkMatrix {
        LkMatrix {
            strands: self.strands,
            dim: self.dim,
            entries: Vec::new(),
        }
    }

    /// `self · g` for a column-sparse `g`.
    fn mul_sparse(&self, g: &Sparse<DyadicLaurent>) -> LkMatrix {
        let n = self.dim;
        let mut entries = vec![DyadicLaurent::zero(); n * n];
        for (c, col) in g.cols.iter().enumerate() {
            for r in 0..n {
                let slot = &mut entries[r * n + c];
                for (s, v) in col {
                    let a = &self.entries[r * n + s];
                    if !a.is_zero() {
                        slot.add_mul(a, v);
                    }
                }
            }
        }
        LkMatrix {
            entries,
            ..self.clone_shape()
        }
    }

    fn to_sparse(&self) -> Sparse<DyadicLaurent> {
        let n = self.dim;
        Sparse {
            cols: (0..n)
                .map(|c| {
                    (0..n)
                        .filter(|&r| !self.get(r, c).is_zero())
                        .map(|r| (r, self.get(r, c).clone()))
                        .collect()
                })
                .collect(),
        }
    }

    /// Gauss–Jordan inverse using only unit pivots `±2^k t^e`; the result is
    /// checked to be a two-sided inverse.
    pub fn inverse(&self) -> Result<LkMatrix, LkError> {
        let n = self.dim;
        let mut a: Vec<Vec<DyadicLaurent>> = (0..n)
            .map(|r| {
                let mut row: Vec<DyadicLaurent> = (0..n).map(|c| self.get(r, c).clone()).collect();
                row.extend((0..n).map(|c| {
                    if c == r {
                        DyadicLaurent::one()
                    } else {
                        DyadicLaurent::zero()
                    }
                }));
                row
            })
            .collect();
        for col in 0..n {
            let piv = (col..n)
                .find(|&r| a[r][col].inv_unit().is_some())
                .ok_or(LkError::NotInvertible)?;
            a.swap(col, piv);
            let inv = a[col][col].inv_unit().unwrap();
            for x in a[col].iter_mut() {
                if !x.is_zero() {
                    *x = x.mul(&inv);
                }
            }
            let prow = a[col].clone();
            for (r, row) in a.iter_mut().enumerate() {
                if r == col || row[col].is_zero() {
                    continue;
                }
                let f = row[col].clone();
                for (x, p) in row.iter_mut().zip(&prow) {
                    if !p.is_zero() {
                        *x = x.sub(&f.mul(p));
                    }
                }
            }
        }
        let entries = a.into_iter().flat_map(|r| r.into_iter().skip(n)).collect();
        let inv = LkMatrix {
            entries,
            ..self.clone_shape()
        };
        if !self.mul(&inv).is_identity() || !inv.mul(self).is_identity() {
            return Err(LkError::NotInvertible);
        }
        Ok(inv)
    }

    /// Multiplies every entry by `c·t^e`.
    pub fn scale_monomial(&self, c: &Dyadic, e: i64) -> LkMatrix {
        let m = DyadicLaurent::monomial(c.clone(), e);
        LkMatrix {
            entries: self.entries.iter().map(|x| x.mul(&m)).collect(),
            ..self.clone_shape()
        }
    }
}

fn q_pow(k: u32) -> Dyadic {
    Dyadic::new(BigInt::one(), k)
}

/// Positive generator image as sparse columns.
fn positive_generator(strands: usize, k: usize) -> Sparse<DyadicLaurent> {
    let t = |c: Dyadic| DyadicLaurent::monomial(c, 1);
    let cst = |c: Dyadic| DyadicLaurent::monomial(c, 0);
    let half = || cst(q_pow(1));
    let idx = |i, j| basis_index(strands, i, j);
    let kk = idx(k, k + 1);
    let cols = basis_pairs(strands)
        .into_iter()
        .map(|(i, j)| {
            let mut col: Vec<(usize, DyadicLaurent)> = if (i, j) == (k, k + 1) {
                // T q² = −t/4
                vec![(kk, t(Dyadic::new(BigInt::from(-1), 2)))]
            } else if j == k && i < k {
                vec![(idx(i, k), half()), (idx(i, k + 1), half())]
            } else if j == k + 1 && i < k {
                // T q^{k−i+1}(q−1) = t/2^{k−i+2}
                vec![
                    (idx(i, k), cst(Dyadic::int(1))),
                    (kk, t(q_pow((k - i + 2) as u32))),
                ]
            } else if i == k && j > k + 1 {
                // T q(q−1) = t/4
                vec![(kk, t(q_pow(2))), (idx(k + 1, j), half())]
            } else if i == k + 1 {
                vec![(idx(k, j), cst(Dyadic::int(1))), (idx(k + 1, j), half())]
            } else if i < k && k + 1 < j {
                // T q^{k−i}(q−1)² = −t/2^{k−i+2}
                vec![
                    (idx(i, j), cst(Dyadic::int(1))),
                    (kk, t(q_pow((k - i + 2) as u32).neg())),
                ]
            } else {
                vec![(idx(i, j), cst(Dyadic::int(1)))]
            };
            col.sort_by_key(|(r, _)| *r);
            col
        })
        .collect();
    Sparse { cols }
}

fn sparse_to_dense(strands: usize, s: &Sparse<DyadicLaurent>) -> LkMatrix {
    let n = lk_dim(strands);
    let mut m = LkMatrix::identity(strands);
    m.entries = vec![DyadicLaurent::zero(); n * n];
    for (c, col) in s.cols.iter().enumerate() {
        for (r, v) in col {
            m.entries[r * n + c] = v.clone();
        }
    }
    m
}

type GenKey = (usize, usize, i8);

fn generator_cache() -> &'static Mutex<HashMap<GenKey, Arc<Sparse<DyadicLaurent>>>> {
    static CACHE: OnceLock<Mutex<HashMap<GenKey, Arc<Sparse<DyadicLaurent>>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn generator_sparse(strands: usize, j: usize, sign: i8) -> Result<Arc<Sparse<DyadicLaurent>>, LkError> {
    if j == 0 || j >= strands {
        return Err(LkError::IndexOutOfRange { index: j, n: strands });
    }
    let key = (strands, j, sign.signum());
    if let Some(g) = generator_cache().lock().unwrap().get(&key) {
        return Ok(g.clone());
    }
    let pos = positive_generator(strands, j);
    let g = if sign > 0 {
        pos
    } else {
        sparse_to_dense(strands, &pos).inverse()?.to_sparse()
    };
    let g = Arc::new(g);
    // Concurrent fills compute identical values, so last write wins harmlessly.
    generator_cache().lock().unwrap().insert(key, g.clone());
    Ok(g)
}

/// `LK(σ_j^{sign})`.
pub fn lk_generator(strands: usize, j: usize, sign: i8) -> Result<LkMatrix, LkError> {
    Ok(sparse_to_dense(strands, &*generator_sparse(strands, j, sign)?))
}

/// Exact image of an Artin word.
pub fn lk_of_word(strands: usize, word: &[(usize, i8)]) -> Result<LkMatrix, LkError> {
    let mut m = LkMatrix::identity(strands);
    for &(j, s) in word {
        m = m.mul_sparse(&*generator_sparse(strands, j, s)?);
    }
    Ok(m)
}

/// Exact image of a braid.
pub fn lk_of_braid(b: &Braid) -> LkMatrix {
    lk_of_word(b.n(), &b.to_word()).expect("normal-form words are in range")
}

/// Outcome of [`lk_bounds_check`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundsReport {
    pub pass: bool,
    pub min_exp: i64,
    pub max_exp: i64,
    pub max_numerator_bits: u64,
    pub max_denominator_exp: u32,
    pub violations: Vec<String>,
}

/// Degree and coefficient bounds for braids in `[−M, M]`: exponents of `t`
/// in `[−M, M]`, numerators `|c| ≤ 2^{N²M}`, denominators `2^d` with
/// `d ≤ 2NM`.
pub fn lk_bounds_check(m: &LkMatrix, bound: u64, strands: usize) -> BoundsReport {
    let big_m = bound as i64;
    let n2m = (strands * strands) as u64 * bound;
    let c_bound = BigInt::one() << n2m;
    let d_bound = 2 * strands as u64 * bound;
    let mut rep = BoundsReport {
        pass: true,
        min_exp: 0,
        max_exp: 0,
        max_numerator_bits: 0,
        max_denominator_exp: 0,
        violations: Vec::new(),
    };
    for (idx, x) in m.entries.iter().enumerate() {
        for (e, c) in x.terms() {
            rep.min_exp = rep.min_exp.min(e);
            rep.max_exp = rep.max_exp.max(e);
            rep.max_numerator_bits = rep.max_numerator_bits.max(c.numerator().bits());
            rep.max_denominator_exp = rep.max_denominator_exp.max(c.exponent());
            let (r, col) = (idx / m.dim, idx % m.dim);
            if e < -big_m || e > big_m {
                rep.violations.push(format!("({r},{col}): exponent {e} outside [−{bound}, {bound}]"));
            }
            if c.numerator().abs() > c_bound {
                rep.violations.push(format!("({r},{col}): numerator exceeds 2^{n2m}"));
            }
            if c.exponent() as u64 > d_bound {
                rep.violations.push(format!("({r},{col}): denominator 2^{} exceeds 2^{d_bound}", c.exponent()));
            }
        }
    }
    rep.pass = rep.violations.is_empty();
    rep
}

/// Reduction of LK images modulo `(p, f(t))`, with generator images reduced
/// once and braid images computed directly over 𝔽.
#[derive(Clone, Debug)]
pub struct LkMod {
    ctx: ExtCtx,
    strands: usize,
    t: FieldElement,
    t_inv: FieldElement,
    half: FieldElement,
    gens: Vec<[Sparse<FieldElement>; 2]>,
}

impl LkMod {
    pub fn new(ctx: &ExtCtx, strands: usize) -> Self {
        let t = ctx.t();
        let t_inv = ctx.inv(&t).expect("t is a unit");
        let half = ctx.inv(&ctx.from_u64(2)).expect("p is odd");
        let mut out = LkMod {
            ctx: ctx.clone(),
            strands,
            t,
            t_inv,
            half,
            gens: Vec::new(),
        };
        out.gens = (1..strands)
            .map(|j| {
                let pos = generator_sparse(strands, j, 1).unwrap();
                let neg = generator_sparse(strands, j, -1).unwrap();
                [out.reduce_sparse(&pos), out.reduce_sparse(&neg)]
            })
            .collect();
        out
    }

    pub fn ctx(&self) -> &ExtCtx {
        &self.ctx
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    fn t_pow(&self, e: i64) -> FieldElement {
        let base = if e < 0 { &self.t_inv } else { &self.t };
        self.ctx.pow(base, &BigUint::from(e.unsigned_abs()))
    }

    /// Image of a Laurent polynomial in 𝔽.
    pub fn reduce_laurent(&self, x: &DyadicLaurent) -> FieldElement {
        let ctx = &self.ctx;
        let mut acc = ctx.zero();
        for (e, c) in x.terms() {
            let num = ctx.from_bigint(c.numerator());
            let den = ctx.pow(&self.half, &BigUint::from(c.exponent()));
            let term = ctx.mul(&ctx.mul(&num, &den), &self.t_pow(e));
            acc = ctx.add(&acc, &term);
        }
        acc
    }

    fn reduce_sparse(&self, s: &Sparse<DyadicLaurent>) -> Sparse<FieldElement> {
        Sparse {
            cols: s
                .cols
                .iter()
                .map(|col| col.iter().map(|(r, v)| (*r, self.reduce_laurent(v))).collect())
                .collect(),
        }
    }

    pub fn reduce(&self, m: &LkMatrix) -> FieldMatrix<ExtCtx> {
        let entries = m.entries.iter().map(|x| self.reduce_laurent(x)).collect();
        FieldMatrix::from_entries(&self.ctx, m.dim, m.dim, entries).unwrap()
    }

    fn mul_sparse(&self, m: &FieldMatrix<ExtCtx>, g: &Sparse<FieldElement>) -> FieldMatrix<ExtCtx> {
        let ctx = &self.ctx;
        let n = m.rows();
        let mut entries = vec![ctx.zero(); n * n];
        for (c, col) in g.cols.iter().enumerate() {
            for r in 0..n {
                let mut acc = ctx.zero();
                for (s, v) in col {
                    let a = m.get(r, *s);
                    if !ctx.is_zero(a) {
                        acc = ctx.add(&acc, &ctx.mul(a, v));
                    }
                }
                entries[r * n + c] = acc;
            }
        }
        FieldMatrix::from_entries(ctx, n, n, entries).unwrap()
    }

    pub fn image_of_word(&self, word: &[(usize, i8)]) -> Result<FieldMatrix<ExtCtx>, LkError> {
        let mut m = FieldMatrix::identity(&self.ctx, lk_dim(self.strands));
        for &(j, s) in word {
            if j == 0 || j >= self.strands {
                return Err(LkError::IndexOutOfRange {
                    index: j,
                    n: self.strands,
                });
            }
            m = self.mul_sparse(&m, &self.gens[j - 1][(s < 0) as usize]);
        }
        Ok(m)
    }

    /// `LK(b) mod (p, f)`.
    pub fn image(&self, b: &Braid) -> FieldMatrix<ExtCtx> {
        assert_eq!(b.n(), self.strands, "strand mismatch");
        self.image_of_word(&b.to_word()).unwrap()
    }

    /// Recovers `LK(K)` from `K̂ = LK(K) mod (p, f)` for `K ∈ [−M, M]`:
    /// multiplies by `2^{2NM}t^M`, lifts coefficients to the centered range,
    /// checks the degree is at most `2M`, and divides back out.
    pub fn lift(&self, khat: &FieldMatrix<ExtCtx>, bound: u64) -> Result<LkMatrix, LkError> {
        let ctx = &self.ctx;
        let nn = self.strands as u64;
        let shift = 2 * nn * bound;
        let two = ctx.from_u64(2);
        let scale = ctx.mul(
            &ctx.pow(&two, &BigUint::from(shift)),
            &self.t_pow(bound as i64),
        );
        let dim = khat.rows();
        if dim != lk_dim(self.strands) || !khat.is_square() {
            return Err(LkError::ShapeMismatch(self.strands));
        }
        let max_deg = 2 * bound as usize;
        // a field of degree d ≤ 2M cannot hold the shifted entries
        if ctx.d() <= max_deg {
            return Err(LkError::DegreeOverflow {
                row: 0,
                col: 0,
                degree: max_deg,
                bound: ctx.d() - 1,
            });
        }
        let p = ctx.p().clone();
        let mut entries = Vec::with_capacity(dim * dim);
        for (idx, x) in khat.entries().iter().enumerate() {
            let y = ctx.mul(x, &scale);
            let coeffs = ctx.to_residues(&y);
            let mut terms = Vec::new();
            for (k, r) in coeffs.iter().enumerate() {
                let c = centered_lift(&p, r);
                if c.sign() == num_bigint::Sign::NoSign {
                    continue;
                }
                if k > max_deg {
                    return Err(LkError::DegreeOverflow {
                        row: idx / dim,
                        col: idx % dim,
                        degree: k,
                        bound: max_deg,
                    });
                }
                terms.push((k as i64 - bound as i64, Dyadic::new(c, shift as u32)));
            }
            entries.push(DyadicLaurent::from_terms(terms));
        }
        LkMatrix::from_entries(self.strands, entries)
    }
}
