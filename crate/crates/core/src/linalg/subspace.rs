use super::{combine, rref, FieldMatrix};
use crate::ff::Field;

/// Linear subspace of `rows × cols` matrices, stored as vectorized basis
/// elements. Bases produced by this module are canonical (reduced row echelon
/// form of the stacked vectorizations), so equality is structural.
#[derive(Clone, Debug)]
pub struct Subspace<F: Field> {
    ctx: F,
    shape: (usize, usize),
    basis: Vec<Vec<F::Elem>>,
    standard: bool,
}

impl<F: Field> PartialEq for Subspace<F> {
    fn eq(&self, other: &Self) -> bool {
        self.shape == other.shape && self.canonical().basis == other.canonical().basis
    }
}

impl<F: Field> Subspace<F> {
    /// The whole matrix space with its standard basis.
    pub fn full(ctx: &F, shape: (usize, usize)) -> Self {
        let len = shape.0 * shape.1;
        let basis = (0..len)
            .map(|i| {
                (0..len)
                    .map(|j| if i == j { ctx.one() } else { ctx.zero() })
                    .collect()
            })
            .collect();
        Subspace {
            ctx: ctx.clone(),
            shape,
            basis,
            standard: true,
        }
    }

    /// Span of arbitrary matrices (dependent ones are dropped).
    pub fn from_matrices(ctx: &F, shape: (usize, usize), mats: &[FieldMatrix<F>]) -> Self {
        let basis = mats.iter().map(|m| m.entries().to_vec()).collect();
        Self::from_vectors_unchecked(ctx, shape, basis).canonical()
    }

    pub(super) fn from_vectors_unchecked(
        ctx: &F,
        shape: (usize, usize),
        basis: Vec<Vec<F::Elem>>,
    ) -> Self {
        Subspace {
            ctx: ctx.clone(),
            shape,
            basis,
            standard: false,
        }
    }

    pub fn ctx(&self) -> &F {
        &self.ctx
    }

    pub fn shape(&self) -> (usize, usize) {
        self.shape
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_standard(&self) -> bool {
        self.standard
    }

    pub fn matrix(&self, i: usize) -> FieldMatrix<F> {
        FieldMatrix::from_entries(&self.ctx, self.shape.0, self.shape.1, self.basis[i].clone())
            .unwrap()
    }

    pub fn matrices(&self) -> Vec<FieldMatrix<F>> {
        (0..self.dim()).map(|i| self.matrix(i)).collect()
    }

    pub fn combine(&self, coeffs: &[F::Elem]) -> FieldMatrix<F> {
        if self.basis.is_empty() {
            return FieldMatrix::zero(&self.ctx, self.shape.0, self.shape.1);
        }
        combine(&self.ctx, &self.matrices(), coeffs)
    }

    /// New subspace spanned by `Σ_j rel_i[j]·basis_j` for each `i`.
    pub(super) fn reparametrize(&self, rel: &[Vec<F::Elem>]) -> Self {
        let mats = self.matrices();
        let basis = rel
            .iter()
            .map(|c| combine(&self.ctx, &mats, c).into_entries())
            .collect();
        Self::from_vectors_unchecked(&self.ctx, self.shape, basis)
    }

    /// Reduced row echelon basis. The standard basis is already canonical.
    pub fn canonical(&self) -> Self {
        if self.standard {
            return self.clone();
        }
        let len = self.shape.0 * self.shape.1;
        let mut rows = self.basis.clone();
        rref(&self.ctx, &mut rows, len);
        Subspace {
            ctx: self.ctx.clone(),
            shape: self.shape,
            basis: rows,
            standard: false,
        }
    }

    /// Membership by rank test.
    pub fn contains(&self, m: &FieldMatrix<F>) -> bool {
        if (m.rows(), m.cols()) != self.shape {
            return false;
        }
        if self.standard {
            return true;
        }
        let len = self.shape.0 * self.shape.1;
        let mut rows = self.basis.clone();
        let r0 = rref(&self.ctx, &mut rows, len).len();
        rows.push(m.entries().to_vec());
        rref(&self.ctx, &mut rows, len).len() == r0
    }

    /// Coordinates of `m` in this basis, if it is a member.
    pub fn coordinates(&self, m: &FieldMatrix<F>) -> Option<Vec<F::Elem>> {
        let mut mats = self.matrices();
        mats.push(m.clone());
        let rel = super::linear_relations(&self.ctx, &mats);
        let v = rel.into_iter().find(|v| !self.ctx.is_zero(&v[self.dim()]))?;
        let scale = self.ctx.neg(&self.ctx.inv(&v[self.dim()]).ok()?);
        Some(v[..self.dim()].iter().map(|c| self.ctx.mul(c, &scale)).collect())
    }
}
