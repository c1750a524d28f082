//! Free integer chain complexes with labelled bases.

use num_bigint::BigInt;

use crate::complex::Cell;
use crate::error::{Error, Result};
use crate::matrix::IntMatrix;

/// A chain complex over the integers.
///
/// `boundary(k)` maps the dimension-`k` basis to the dimension-`(k-1)` basis;
/// rows follow `basis(k - 1)` and columns follow `basis(k)`. `boundary(0)` has
/// zero rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainComplex {
    bases: Vec<Vec<Cell>>,
    boundaries: Vec<IntMatrix>,
}

impl ChainComplex {
    /// Checks shapes and `d o d = 0`.
    pub fn new(bases: Vec<Vec<Cell>>, boundaries: Vec<IntMatrix>) -> Result<Self> {
        let cc = Self::new_unchecked(bases, boundaries);
        if let Some(dim) = cc.first_nonzero_square() {
            return Err(Error::BoundarySquareNonzero { dim });
        }
        Ok(cc)
    }

    /// Checks shapes only.
    pub fn new_unchecked(bases: Vec<Vec<Cell>>, boundaries: Vec<IntMatrix>) -> Self {
        assert_eq!(bases.len(), boundaries.len(), "one boundary per dimension");
        for (k, d) in boundaries.iter().enumerate() {
            let rows = if k == 0 { 0 } else { bases[k - 1].len() };
            assert_eq!(
                d.shape(),
                (rows, bases[k].len()),
                "boundary {k} has the wrong shape"
            );
        }
        Self { bases, boundaries }
    }

    /// Number of dimensions stored (top dimension + 1).
    pub fn len(&self) -> usize {
        self.bases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bases.is_empty()
    }

    pub fn basis(&self, k: usize) -> &[Cell] {
        self.bases.get(k).map_or(&[], Vec::as_slice)
    }

    pub fn bases(&self) -> &[Vec<Cell>] {
        &self.bases
    }

    pub fn basis_sizes(&self) -> Vec<usize> {
        self.bases.iter().map(Vec::len).collect()
    }

    /// The boundary out of dimension `k`; `None` past the top dimension.
    pub fn boundary(&self, k: usize) -> Option<&IntMatrix> {
        self.boundaries.get(k)
    }

    pub fn boundaries(&self) -> &[IntMatrix] {
        &self.boundaries
    }

    pub fn index_of(&self, k: usize, label: &Cell) -> Option<usize> {
        self.basis(k).iter().position(|c| c == label)
    }

    /// Entry `<d b1, b2>` for `b1` in dimension `k`.
    pub fn entry(&self, k: usize, b1: &Cell, b2: &Cell) -> Result<BigInt> {
        if k == 0 {
            return Err(Error::UnknownLabel(b2.clone(), 0));
        }
        let j = self
            .index_of(k, b1)
            .ok_or_else(|| Error::UnknownLabel(b1.clone(), k))?;
        let i = self
            .index_of(k - 1, b2)
            .ok_or_else(|| Error::UnknownLabel(b2.clone(), k - 1))?;
        Ok(self.boundaries[k][(i, j)].clone())
    }

    /// Lowest `k` with `d_k o d_{k+1} != 0`.
    pub fn first_nonzero_square(&self) -> Option<usize> {
        (1..self.boundaries.len().saturating_sub(1))
            .find(|&k| !self.boundaries[k].mul(&self.boundaries[k + 1]).is_zero())
    }

    pub fn squares_to_zero(&self) -> bool {
        self.first_nonzero_square().is_none()
    }

    /// Nonzero boundary entries as `(dimension, column label, row label, value)`.
    pub fn sparse_entries(&self) -> Vec<(usize, &Cell, &Cell, &BigInt)> {
        let mut out = Vec::new();
        for (k, d) in self.boundaries.iter().enumerate().skip(1) {
            for (i, j, v) in d.nonzero_entries() {
                out.push((k, &self.bases[k][j], &self.bases[k - 1][i], v));
            }
        }
        out.sort_by(|a, b| (a.0, a.1, a.2).cmp(&(b.0, b.1, b.2)));
        out
    }
}
