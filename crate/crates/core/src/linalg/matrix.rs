use std::fmt;

use rand::Rng;

use super::{rref, LinalgError};
use crate::ff::Field;

/// Dense matrix over a field, row-major.
#[derive(Clone)]
pub struct FieldMatrix<F: Field> {
    ctx: F,
    rows: usize,
    cols: usize,
    entries: Vec<F::Elem>,
}

impl<F: Field> PartialEq for FieldMatrix<F> {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows && self.cols == other.cols && self.entries == other.entries
    }
}

impl<F: Field> Eq for FieldMatrix<F> {}

impl<F: Field> fmt::Debug for FieldMatrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "FieldMatrix {}x{} over {:?}", self.rows, self.cols, self.ctx)?;
        for r in 0..self.rows {
            let row: Vec<_> = (0..self.cols)
                .map(|c| self.ctx.to_residues(self.get(r, c)))
                .collect();
            writeln!(f, "  {row:?}")?;
        }
        Ok(())
    }
}

impl<F: Field> FieldMatrix<F> {
    pub fn from_entries(
        ctx: &F,
        rows: usize,
        cols: usize,
        entries: Vec<F::Elem>,
    ) -> Result<Self, LinalgError> {
        if entries.len() != rows * cols {
            return Err(LinalgError::ShapeMismatch);
        }
        Ok(FieldMatrix {
            ctx: ctx.clone(),
            rows,
            cols,
            entries,
        })
    }

    pub fn from_fn(ctx: &F, rows: usize, cols: usize, f: impl FnMut(usize, usize) -> F::Elem) -> Self {
        let mut f = f;
        let mut entries = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                entries.push(f(r, c));
            }
        }
        FieldMatrix {
            ctx: ctx.clone(),
            rows,
            cols,
            entries,
        }
    }

    /// Small-integer matrix, handy in tests.
    pub fn from_i64(ctx: &F, rows: &[&[i64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        Self::from_fn(ctx, r, c, |i, j| ctx.from_i64(rows[i][j]))
    }

    pub fn zero(ctx: &F, rows: usize, cols: usize) -> Self {
        Self::from_fn(ctx, rows, cols, |_, _| ctx.zero())
    }

    pub fn identity(ctx: &F, n: usize) -> Self {
        Self::scalar(ctx, n, ctx.one())
    }

    pub fn scalar(ctx: &F, n: usize, s: F::Elem) -> Self {
        Self::from_fn(ctx, n, n, |r, c| if r == c { s.clone() } else { ctx.zero() })
    }

    pub fn diag(ctx: &F, d: &[F::Elem]) -> Self {
        Self::from_fn(ctx, d.len(), d.len(), |r, c| {
            if r == c {
                d[r].clone()
            } else {
                ctx.zero()
            }
        })
    }

    /// Block-diagonal matrix `diag(a, b)`.
    pub fn block_diag(a: &Self, b: &Self) -> Self {
        let ctx = &a.ctx;
        Self::from_fn(ctx, a.rows + b.rows, a.cols + b.cols, |r, c| {
            if r < a.rows && c < a.cols {
                a.get(r, c).clone()
            } else if r >= a.rows && c >= a.cols {
                b.get(r - a.rows, c - a.cols).clone()
            } else {
                ctx.zero()
            }
        })
    }

    pub fn random<R: Rng + ?Sized>(ctx: &F, rows: usize, cols: usize, rng: &mut R) -> Self {
        Self::from_fn(ctx, rows, cols, |_, _| ctx.random(rng))
    }

    /// Uniform invertible matrix by rejection.
    pub fn random_invertible<R: Rng + ?Sized>(ctx: &F, n: usize, rng: &mut R) -> Self {
        loop {
            let m = Self::random(ctx, n, n, rng);
            if m.is_invertible() {
                return m;
            }
        }
    }

    pub fn ctx(&self) -> &F {
        &self.ctx
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[F::Elem] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<F::Elem> {
        self.entries
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> &F::Elem {
        &self.entries[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: F::Elem) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[F::Elem] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    fn check_same_shape(&self, other: &Self) -> Result<(), LinalgError> {
        if self.rows != other.rows || self.cols != other.cols {
            Err(LinalgError::ShapeMismatch)
        } else {
            Ok(())
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, LinalgError> {
        self.check_same_shape(other)?;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| self.ctx.add(a, b))
            .collect();
        Ok(FieldMatrix { entries, ..self.shell() })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, LinalgError> {
        self.check_same_shape(other)?;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| self.ctx.sub(a, b))
            .collect();
        Ok(FieldMatrix { entries, ..self.shell() })
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::ShapeMismatch);
        }
        let ctx = &self.ctx;
        let (n, m, k) = (self.rows, other.cols, self.cols);
        let mut entries = vec![ctx.zero(); n * m];
        for r in 0..n {
            for s in 0..k {
                let a = &self.entries[r * k + s];
                if ctx.is_zero(a) {
                    continue;
                }
                for c in 0..m {
                    let b = &other.entries[s * m + c];
                    if ctx.is_zero(b) {
                        continue;
                    }
                    let slot = &mut entries[r * m + c];
                    *slot = ctx.add(slot, &ctx.mul(a, b));
                }
            }
        }
        Ok(FieldMatrix {
            ctx: ctx.clone(),
            rows: n,
            cols: m,
            entries,
        })
    }

    /// Panicking conveniences for shape-correct call sites.
    pub fn add(&self, other: &Self) -> Self {
        self.try_add(other).expect("shape mismatch in add")
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.try_sub(other).expect("shape mismatch in sub")
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.try_mul(other).expect("shape mismatch in mul")
    }

    pub fn scale(&self, s: &F::Elem) -> Self {
        let entries = self.entries.iter().map(|a| self.ctx.mul(a, s)).collect();
        FieldMatrix { entries, ..self.shell() }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(&self.ctx, self.cols, self.rows, |r, c| self.get(c, r).clone())
    }

    fn shell(&self) -> Self {
        FieldMatrix {
            ctx: self.ctx.clone(),
            rows: self.rows,
            cols: self.cols,
            entries: Vec::new(),
        }
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(&self.ctx, self.rows)
    }

    pub fn rank(&self) -> usize {
        let mut rows: Vec<Vec<F::Elem>> = (0..self.rows).map(|r| self.row(r).to_vec()).collect();
        rref(&self.ctx, &mut rows, self.cols).len()
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && !self.ctx.is_zero(&self.det().expect("square"))
    }

    /// Determinant by elimination with row swaps.
    pub fn det(&self) -> Result<F::Elem, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::ShapeMismatch);
        }
        let ctx = &self.ctx;
        let n = self.rows;
        let mut a = self.entries.clone();
        let mut det = ctx.one();
        for col in 0..n {
            let Some(piv) = (col..n).find(|&r| !ctx.is_zero(&a[r * n + col])) else {
                return Ok(ctx.zero());
            };
            if piv != col {
                for c in 0..n {
                    a.swap(piv * n + c, col * n + c);
                }
                det = ctx.neg(&det);
            }
            let p = a[col * n + col].clone();
            det = ctx.mul(&det, &p);
            let p_inv = ctx.inv(&p).expect("nonzero pivot");
            for r in col + 1..n {
                let f = &a[r * n + col];
                if ctx.is_zero(f) {
                    continue;
                }
                let f = ctx.mul(f, &p_inv);
                for c in col..n {
                    a[r * n + c] = ctx.mul_sub(&a[r * n + c], &f, &a[col * n + c]);
                }
            }
        }
        Ok(det)
    }

    /// Inverse by Gauss–Jordan elimination.
    pub fn inv(&self) -> Result<Self, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::ShapeMismatch);
        }
        let ctx = &self.ctx;
        let n = self.rows;
        let mut rows: Vec<Vec<F::Elem>> = (0..n)
            .map(|r| {
                let mut v = self.row(r).to_vec();
                v.extend((0..n).map(|c| if c == r { ctx.one() } else { ctx.zero() }));
                v
            })
            .collect();
        let pivots = rref(ctx, &mut rows, n);
        if pivots.len() < n {
            return Err(LinalgError::Singular);
        }
        let entries = rows.into_iter().flat_map(|r| r.into_iter().skip(n)).collect();
        Ok(FieldMatrix { entries, ..self.shell() })
    }

    /// `self^e` for any integer `e` (negative powers need invertibility).
    pub fn pow(&self, e: i64) -> Result<Self, LinalgError> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut acc = Self::identity(&self.ctx, self.rows);
        let mut sq = base;
        let mut k = e.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&sq);
            }
            k >>= 1;
            if k > 0 {
                sq = sq.mul(&sq);
            }
        }
        Ok(acc)
    }

    /// `x⁻¹ g x`.
    pub fn conj(&self, x: &Self) -> Result<Self, LinalgError> {
        Ok(x.inv()?.mul(self).mul(x))
    }

    pub fn commutes_with(&self, other: &Self) -> bool {
        self.mul(other) == other.mul(self)
    }

    /// Image of every entry under `f`, possibly into another field.
    pub fn map<G: Field>(&self, ctx: &G, f: impl Fn(&F::Elem) -> G::Elem) -> FieldMatrix<G> {
        FieldMatrix {
            ctx: ctx.clone(),
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(f).collect(),
        }
    }
}
