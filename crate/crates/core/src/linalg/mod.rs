//! Dense linear algebra over a generic [`Field`]: matrices, nullspaces,
//! centralizers, constrained conjugacy systems and Las Vegas sampling of
//! invertible elements of a matrix subspace.
//!
//! Matrices are vectorized row-major throughout: entry `(r, c)` of an
//! `rows × cols` matrix is coordinate `r·cols + c`.

mod matrix;
mod subspace;

use rand::Rng;
use thiserror::Error;

use crate::ff::Field;

pub use matrix::FieldMatrix;
pub use subspace::Subspace;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("matrix shapes are incompatible")]
    ShapeMismatch,
    #[error("matrix is singular")]
    Singular,
    #[error("no invertible element found after {tries} draws")]
    NoInvertibleFound { tries: usize },
    #[error("invalid sampling configuration: {0}")]
    InvalidConfig(String),
}

/// Reduces `rows` (each of length `ncols` or more) to reduced row echelon
/// form in the first `ncols` columns, drops zero rows, and returns the pivot
/// columns. Pivot choice is the first nonzero entry in column order.
pub fn rref<F: Field>(ctx: &F, rows: &mut Vec<Vec<F::Elem>>, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(piv) = (r..rows.len()).find(|&i| !ctx.is_zero(&rows[i][col])) else {
            continue;
        };
        rows.swap(r, piv);
        let inv = ctx.inv(&rows[r][col]).expect("nonzero pivot");
        if !ctx.is_one(&inv) {
            for x in rows[r][col..].iter_mut() {
                if !ctx.is_zero(x) {
                    *x = ctx.mul(x, &inv);
                }
            }
        }
        let (before, rest) = rows.split_at_mut(r);
        let (prow, after) = rest.split_first_mut().unwrap();
        let nz: Vec<usize> = (col..prow.len()).filter(|&c| !ctx.is_zero(&prow[c])).collect();
        for other in before.iter_mut().chain(after.iter_mut()) {
            if ctx.is_zero(&other[col]) {
                continue;
            }
            let f = other[col].clone();
            for &c in &nz {
                other[c] = ctx.mul_sub(&other[c], &f, &prow[c]);
            }
        }
        pivots.push(col);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

/// Kernel basis of a matrix given by rows: one vector per free column, with a
/// 1 in that column, 0 in the other free columns.
fn kernel_from_rows<F: Field>(ctx: &F, mut rows: Vec<Vec<F::Elem>>, ncols: usize) -> Vec<Vec<F::Elem>> {
    let pivots = rref(ctx, &mut rows, ncols);
    let mut is_pivot = vec![false; ncols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    (0..ncols)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = vec![ctx.zero(); ncols];
            v[free] = ctx.one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = ctx.neg(&rows[i][free]);
            }
            v
        })
        .collect()
}

/// Basis of `{x : A x = 0}` as column vectors.
pub fn nullspace<F: Field>(a: &FieldMatrix<F>) -> Subspace<F> {
    let rows = (0..a.rows()).map(|r| a.row(r).to_vec()).collect();
    let basis = kernel_from_rows(a.ctx(), rows, a.cols());
    Subspace::from_vectors_unchecked(a.ctx(), (a.cols(), 1), basis).canonical()
}

/// Coefficient vectors `c` with `Σ c_j·mats_j = 0`.
pub fn linear_relations<F: Field>(ctx: &F, mats: &[FieldMatrix<F>]) -> Vec<Vec<F::Elem>> {
    let Some(first) = mats.first() else {
        return Vec::new();
    };
    let len = first.rows() * first.cols();
    let rows = (0..len)
        .map(|i| mats.iter().map(|m| m.entries()[i].clone()).collect())
        .collect();
    kernel_from_rows(ctx, rows, mats.len())
}

/// `Σ coeffs_j · mats_j`.
pub fn combine<F: Field>(ctx: &F, mats: &[FieldMatrix<F>], coeffs: &[F::Elem]) -> FieldMatrix<F> {
    let (r, c) = (mats[0].rows(), mats[0].cols());
    let mut acc = vec![ctx.zero(); r * c];
    for (m, k) in mats.iter().zip(coeffs) {
        if ctx.is_zero(k) {
            continue;
        }
        for (a, x) in acc.iter_mut().zip(m.entries()) {
            if !ctx.is_zero(x) {
                *a = ctx.add(a, &ctx.mul(k, x));
            }
        }
    }
    FieldMatrix::from_entries(ctx, r, c, acc).unwrap()
}

/// Sylvester system of `g x − x h = 0` in the `n²` entries of `x`.
fn sylvester_rows<F: Field>(g: &FieldMatrix<F>, h: &FieldMatrix<F>) -> Vec<Vec<F::Elem>> {
    let ctx = g.ctx();
    let n = g.rows();
    let mut rows = Vec::with_capacity(n * n);
    for r in 0..n {
        for c in 0..n {
            let mut row = vec![ctx.zero(); n * n];
            // (g x)_{rc} = Σ_s g_{rs} x_{sc}
            for s in 0..n {
                row[s * n + c] = g.get(r, s).clone();
            }
            // (x h)_{rc} = Σ_s x_{rs} h_{sc}
            for s in 0..n {
                let slot = &mut row[r * n + s];
                *slot = ctx.sub(slot, h.get(s, c));
            }
            if row.iter().any(|x| !ctx.is_zero(x)) {
                rows.push(row);
            }
        }
    }
    rows
}

/// `{x ∈ constraint : g_i x = x h_i for all i}`. Pairs are processed one at a
/// time, each restricting the current basis, so later pairs are solved in
/// few unknowns.
pub fn solve_conjugacy_system<F: Field>(
    ctx: &F,
    n: usize,
    pairs: &[(FieldMatrix<F>, FieldMatrix<F>)],
    constraint: Option<&Subspace<F>>,
) -> Subspace<F> {
    let mut space = match constraint {
        Some(c) => c.clone(),
        None => Subspace::full(ctx, (n, n)),
    };
    for (g, h) in pairs {
        if space.dim() == 0 {
            break;
        }
        if space.is_standard() {
            let kernel = kernel_from_rows(ctx, sylvester_rows(g, h), n * n);
            space = Subspace::from_vectors_unchecked(ctx, (n, n), kernel);
            continue;
        }
        let images: Vec<FieldMatrix<F>> = space
            .matrices()
            .iter()
            .map(|b| g.mul(b).sub(&b.mul(h)))
            .collect();
        let rel = linear_relations(ctx, &images);
        space = space.reparametrize(&rel);
    }
    space.canonical()
}

/// Basis of `C(mats) = {x : b x = x b for all b ∈ mats}`.
pub fn centralizer_basis<F: Field>(ctx: &F, mats: &[FieldMatrix<F>], n: usize) -> Subspace<F> {
    let pairs: Vec<_> = mats.iter().map(|m| (m.clone(), m.clone())).collect();
    solve_conjugacy_system(ctx, n, &pairs, None)
}

/// `C(C(mats))`.
pub fn double_centralizer_basis<F: Field>(ctx: &F, mats: &[FieldMatrix<F>], n: usize) -> Subspace<F> {
    let c = centralizer_basis(ctx, mats, n);
    centralizer_basis(ctx, &c.matrices(), n)
}

/// Sampling parameters for [`random_invertible_in`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SampleConfig {
    pub max_tries: usize,
    /// `|S|` with `S = {0, …, |S|−1}`; `None` samples from the whole field.
    pub sample_set_size: Option<u64>,
}

impl Default for SampleConfig {
    fn default() -> Self {
        SampleConfig {
            max_tries: 64,
            sample_set_size: None,
        }
    }
}

impl SampleConfig {
    pub fn validate<F: Field>(&self, ctx: &F, n: usize) -> Result<(), LinalgError> {
        if self.max_tries == 0 {
            return Err(LinalgError::InvalidConfig("max_tries must be positive".into()));
        }
        let size = match self.sample_set_size {
            Some(s) => {
                if num_bigint::BigUint::from(s) > ctx.characteristic() {
                    return Err(LinalgError::InvalidConfig(
                        "sample set larger than the prime field".into(),
                    ));
                }
                num_bigint::BigUint::from(s)
            }
            None => ctx.order(),
        };
        if size <= num_bigint::BigUint::from(n) {
            return Err(LinalgError::InvalidConfig(format!(
                "|S| must exceed the matrix size {n}"
            )));
        }
        Ok(())
    }

    pub fn draw<F: Field, R: Rng + ?Sized>(&self, ctx: &F, rng: &mut R) -> F::Elem {
        match self.sample_set_size {
            Some(s) => ctx.random_below(s, rng),
            None => ctx.random(rng),
        }
    }
}

/// Outcome of [`random_invertible_in`].
#[derive(Debug, Clone)]
pub struct InvertibleSample<F: Field> {
    pub matrix: FieldMatrix<F>,
    pub coeffs: Vec<F::Elem>,
    pub draws: usize,
}

/// Random `S`-linear combination of the basis that is invertible.
pub fn random_invertible_in<F: Field, R: Rng + ?Sized>(
    space: &Subspace<F>,
    cfg: &SampleConfig,
    rng: &mut R,
) -> Result<InvertibleSample<F>, LinalgError> {
    let (r, c) = space.shape();
    if r != c {
        return Err(LinalgError::ShapeMismatch);
    }
    let ctx = space.ctx();
    cfg.validate(ctx, r)?;
    for draw in 1..=cfg.max_tries {
        let coeffs: Vec<F::Elem> = (0..space.dim()).map(|_| cfg.draw(ctx, rng)).collect();
        let m = space.combine(&coeffs);
        if m.is_invertible() {
            return Ok(InvertibleSample {
                matrix: m,
                coeffs,
                draws: draw,
            });
        }
    }
    Err(LinalgError::NoInvertibleFound {
        tries: cfg.max_tries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::Fp64;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn f(p: u64) -> Fp64 {
        Fp64::new(p).unwrap()
    }

    #[test]
    fn mat_arith_examples() {
        let k = f(7);
        let i3 = FieldMatrix::identity(&k, 3);
        assert_eq!(i3.inv().unwrap(), i3);
        let d = FieldMatrix::from_i64(&k, &[&[1, 0], &[0, 2]]);
        assert_eq!(d.det().unwrap(), k.from_u64(2));
        let r1 = FieldMatrix::from_i64(&k, &[&[1, 2], &[2, 4]]);
        assert_eq!(r1.inv(), Err(LinalgError::Singular));
        let a = FieldMatrix::from_i64(&k, &[&[1, 2, 3]]);
        assert_eq!(a.try_mul(&a), Err(LinalgError::ShapeMismatch));
        assert_eq!(a.try_add(&a.transpose()), Err(LinalgError::ShapeMismatch));
    }

    #[test]
    fn nullspace_examples() {
        let k = f(3);
        let z = FieldMatrix::zero(&k, 2, 3);
        assert_eq!(nullspace(&z).dim(), 3);
        let a = FieldMatrix::from_i64(&k, &[&[1, 1]]);
        let ns = nullspace(&a);
        assert_eq!(ns.dim(), 1);
        assert_eq!(ns.matrix(0), FieldMatrix::from_i64(&k, &[&[1], &[2]]));
        // brute force: the only nonzero solutions are multiples of (1, 2)
        let mut sols = 0;
        for x in 0..3 {
            for y in 0..3 {
                if (x + y) % 3 == 0 && (x, y) != (0, 0) {
                    sols += 1;
                    let v = FieldMatrix::from_i64(&k, &[&[x], &[y]]);
                    assert!(ns.contains(&v));
                }
            }
        }
        assert_eq!(sols, 2);
        let inv = FieldMatrix::from_i64(&k, &[&[1, 1], &[0, 1]]);
        assert_eq!(nullspace(&inv).dim(), 0);
    }

    #[test]
    fn centralizer_examples() {
        let k = f(7);
        let i2 = FieldMatrix::identity(&k, 2);
        assert_eq!(centralizer_basis(&k, std::slice::from_ref(&i2), 2).dim(), 4);
        // C(I) is everything, and only scalars commute with everything
        assert_eq!(double_centralizer_basis(&k, &[i2], 2).dim(), 1);
        let d = FieldMatrix::from_i64(&k, &[&[1, 0], &[0, 2]]);
        let c = centralizer_basis(&k, std::slice::from_ref(&d), 2);
        assert_eq!(c.dim(), 2);
        // brute force over all 7^4 matrices
        let mut count = 0;
        for idx in 0..7i64.pow(4) {
            let e = [idx % 7, idx / 7 % 7, idx / 49 % 7, idx / 343];
            let x = FieldMatrix::from_i64(&k, &[&e[..2], &e[2..]]);
            if x.commutes_with(&d) {
                count += 1;
                assert!(c.contains(&x));
            }
        }
        assert_eq!(count, 49);
        let dc = double_centralizer_basis(&k, std::slice::from_ref(&d), 2);
        assert_eq!(dc.dim(), 2);
        assert!(dc.contains(&d));

        let k5 = f(5);
        let a = FieldMatrix::from_i64(&k5, &[&[0, 1], &[0, 0]]);
        let b = FieldMatrix::from_i64(&k5, &[&[0, 0], &[1, 0]]);
        assert_eq!(centralizer_basis(&k5, &[a, b], 2).dim(), 1);
    }

    #[test]
    fn conjugacy_examples() {
        let k = f(7);
        let i2 = FieldMatrix::identity(&k, 2);
        let two = FieldMatrix::scalar(&k, 2, k.from_u64(2));
        assert_eq!(solve_conjugacy_system(&k, 2, &[(i2, two)], None).dim(), 0);

        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let k = f(101);
        let g = FieldMatrix::random(&k, 3, 3, &mut rng);
        let s = solve_conjugacy_system(&k, 3, &[(g.clone(), g.clone())], None);
        assert_eq!(s, centralizer_basis(&k, std::slice::from_ref(&g), 3));
        // honest pair: x = a solves g x = x (a⁻¹ g a)
        let a = FieldMatrix::random_invertible(&k, 3, &mut rng);
        let h = g.conj(&a).unwrap();
        let s = solve_conjugacy_system(&k, 3, &[(g.clone(), h)], None);
        assert!(s.contains(&a));
    }

    #[test]
    fn invertible_sampling_examples() {
        let k = f(101);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let cfg = SampleConfig::default();
        let scalars = Subspace::from_matrices(&k, (3, 3), &[FieldMatrix::identity(&k, 3)]);
        let s = random_invertible_in(&scalars, &cfg, &mut rng).unwrap();
        assert!(s.matrix.is_invertible());
        assert_eq!(s.matrix, FieldMatrix::scalar(&k, 3, s.coeffs[0]));
        let e11 = FieldMatrix::from_i64(&k, &[&[1, 0], &[0, 0]]);
        let e12 = FieldMatrix::from_i64(&k, &[&[0, 1], &[0, 0]]);
        let bad = Subspace::from_matrices(&k, (2, 2), &[e11, e12]);
        assert_eq!(
            random_invertible_in(&bad, &cfg, &mut rng).unwrap_err(),
            LinalgError::NoInvertibleFound { tries: 64 }
        );
        let tiny = SampleConfig {
            max_tries: 4,
            sample_set_size: Some(2),
        };
        assert!(random_invertible_in(&scalars, &tiny, &mut rng).is_err());
    }

    #[test]
    fn invertible_rate_on_diagonal_span() {
        let q = 101u64;
        let k = f(q);
        let e11 = FieldMatrix::from_i64(&k, &[&[1, 0], &[0, 0]]);
        let e22 = FieldMatrix::from_i64(&k, &[&[0, 0], &[0, 1]]);
        let space = Subspace::from_matrices(&k, (2, 2), &[e11, e22]);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let trials = 10_000;
        let mut singular = 0;
        for _ in 0..trials {
            let c: Vec<u64> = (0..2).map(|_| k.random(&mut rng)).collect();
            if !space.combine(&c).is_invertible() {
                singular += 1;
            }
        }
        let p = 2.0 / q as f64;
        let sigma = (p * (1.0 - p) / trials as f64).sqrt();
        assert!((singular as f64 / trials as f64) <= p + 5.0 * sigma);
    }
}
