//! Integer homology through the Smith normal form.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::chain::ChainComplex;
use crate::error::{Error, Result};
use crate::matrix::IntMatrix;

/// `D = U · A · V` with `D` diagonal, its nonzero diagonal a divisibility chain
/// of positive integers, and `U`, `V` unimodular.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub d: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
    pub v_inv: IntMatrix,
}

impl SmithForm {
    /// Nonzero diagonal entries `d_1 | d_2 | ...`.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        diagonal(&self.d)
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }
}

fn diagonal(d: &IntMatrix) -> Vec<BigInt> {
    (0..d.rows().min(d.cols()))
        .map(|i| d[(i, i)].clone())
        .take_while(|v| !v.is_zero())
        .collect()
}

struct Transforms {
    u: IntMatrix,
    v: IntMatrix,
    v_inv: IntMatrix,
}

struct Reduction {
    d: IntMatrix,
    t: Option<Transforms>,
}

impl Reduction {
    fn row_add(&mut self, dst: usize, src: usize, q: &BigInt) {
        self.d.add_row_multiple(dst, src, q);
        if let Some(t) = &mut self.t {
            t.u.add_row_multiple(dst, src, q);
        }
    }

    fn col_add(&mut self, dst: usize, src: usize, q: &BigInt) {
        self.d.add_col_multiple(dst, src, q);
        if let Some(t) = &mut self.t {
            t.v.add_col_multiple(dst, src, q);
            t.v_inv.add_row_multiple(src, dst, &-q);
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        self.d.swap_rows(a, b);
        if let Some(t) = &mut self.t {
            t.u.swap_rows(a, b);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        self.d.swap_cols(a, b);
        if let Some(t) = &mut self.t {
            t.v.swap_cols(a, b);
            t.v_inv.swap_rows(a, b);
        }
    }

    fn negate_row(&mut self, i: usize) {
        self.d.negate_row(i);
        if let Some(t) = &mut self.t {
            t.u.negate_row(i);
        }
    }

    /// Nonzero entry of least magnitude in the trailing block from `(t, t)`.
    fn min_in_block(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<((usize, usize), BigInt)> = None;
        for i in t..self.d.rows() {
            for j in t..self.d.cols() {
                let v = &self.d[(i, j)];
                if v.is_zero() {
                    continue;
                }
                let a = v.abs();
                if best.as_ref().is_none_or(|(_, b)| a < *b) {
                    let one = a.is_one();
                    best = Some(((i, j), a));
                    if one {
                        return best.map(|(p, _)| p);
                    }
                }
            }
        }
        best.map(|(p, _)| p)
    }

    /// Clears row and column `t` around the pivot, re-pivoting on the smallest
    /// remainder each round. Returns once only the pivot is left.
    fn clear_cross(&mut self, t: usize) {
        loop {
            let pivot = self.d[(t, t)].clone();
            for i in t + 1..self.d.rows() {
                if !self.d[(i, t)].is_zero() {
                    let q = &self.d[(i, t)] / &pivot;
                    self.row_add(i, t, &-q);
                }
            }
            for j in t + 1..self.d.cols() {
                if !self.d[(t, j)].is_zero() {
                    let q = &self.d[(t, j)] / &pivot;
                    self.col_add(j, t, &-q);
                }
            }
            let col_rest = (t + 1..self.d.rows())
                .filter(|&i| !self.d[(i, t)].is_zero())
                .min_by_key(|&i| self.d[(i, t)].abs());
            let row_rest = (t + 1..self.d.cols())
                .filter(|&j| !self.d[(t, j)].is_zero())
                .min_by_key(|&j| self.d[(t, j)].abs());
            match (col_rest, row_rest) {
                (None, None) => return,
                (Some(i), None) => self.swap_rows(t, i),
                (None, Some(j)) => self.swap_cols(t, j),
                (Some(i), Some(j)) => {
                    if self.d[(i, t)].abs() <= self.d[(t, j)].abs() {
                        self.swap_rows(t, i);
                    } else {
                        self.swap_cols(t, j);
                    }
                }
            }
        }
    }

    fn run(&mut self) {
        let mut t = 0;
        while let Some((i, j)) = self.min_in_block(t) {
            self.swap_rows(t, i);
            self.swap_cols(t, j);
            loop {
                self.clear_cross(t);
                let pivot = self.d[(t, t)].clone();
                let offender = (t + 1..self.d.rows()).find(|&i| {
                    (t + 1..self.d.cols()).any(|j| !self.d[(i, j)].is_multiple_of(&pivot))
                });
                match offender {
                    Some(i) => self.row_add(t, i, &BigInt::one()),
                    None => break,
                }
            }
            if self.d[(t, t)].is_negative() {
                self.negate_row(t);
            }
            t += 1;
        }
    }
}

/// Smith normal form with transforms, pivoting on the least nonzero magnitude.
pub fn smith_normal_form(a: &IntMatrix) -> SmithForm {
    let mut r = Reduction {
        d: a.clone(),
        t: Some(Transforms {
            u: IntMatrix::identity(a.rows()),
            v: IntMatrix::identity(a.cols()),
            v_inv: IntMatrix::identity(a.cols()),
        }),
    };
    r.run();
    let t = r.t.expect("transforms tracked");
    SmithForm {
        d: r.d,
        u: t.u,
        v: t.v,
        v_inv: t.v_inv,
    }
}

/// Invariant factors only, skipping the transforms.
pub fn invariant_factors(a: &IntMatrix) -> Vec<BigInt> {
    let mut r = Reduction { d: a.clone(), t: None };
    r.run();
    diagonal(&r.d)
}

/// Betti numbers and torsion coefficients per dimension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologySummary {
    pub betti: Vec<usize>,
    /// Invariant factors greater than 1, each dividing the next.
    pub torsion: Vec<Vec<BigInt>>,
}

impl HomologySummary {
    pub fn euler_characteristic(&self) -> i64 {
        self.betti
            .iter()
            .enumerate()
            .map(|(k, &b)| if k % 2 == 0 { b as i64 } else { -(b as i64) })
            .sum()
    }

    /// Summary with trailing all-zero dimensions dropped, for comparing
    /// complexes stored with different top dimensions.
    pub fn trimmed(&self) -> HomologySummary {
        let mut out = self.clone();
        while out.betti.last() == Some(&0) && out.torsion.last().is_some_and(Vec::is_empty) {
            out.betti.pop();
            out.torsion.pop();
        }
        out
    }
}

impl fmt::Display for HomologySummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, (b, t)) in self.betti.iter().zip(&self.torsion).enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            let mut parts = Vec::new();
            match b {
                0 => {}
                1 => parts.push("Z".to_string()),
                n => parts.push(format!("Z^{n}")),
            }
            parts.extend(t.iter().map(|d| format!("Z/{d}")));
            if parts.is_empty() {
                parts.push("0".into());
            }
            write!(f, "H{k} = {}", parts.join(" + "))?;
        }
        Ok(())
    }
}

/// Homology of a chain complex. Rejects inputs with `∂ ∘ ∂ != 0`.
pub fn homology(c: &ChainComplex) -> Result<HomologySummary> {
    if let Some(dim) = c.first_nonzero_square() {
        return Err(Error::BoundarySquareNonzero { dim });
    }
    let n = c.len();
    let factors: Vec<Vec<BigInt>> = (0..n)
        .map(|k| {
            if k == 0 {
                Vec::new()
            } else {
                invariant_factors(c.boundary(k).expect("in range"))
            }
        })
        .collect();
    let mut betti = Vec::with_capacity(n);
    let mut torsion = Vec::with_capacity(n);
    for k in 0..n {
        let rank_out = factors[k].len();
        let (rank_in, tors) = match factors.get(k + 1) {
            Some(f) => (f.len(), f.iter().filter(|d| !d.is_one()).cloned().collect()),
            None => (0, Vec::new()),
        };
        betti.push(c.basis(k).len() - rank_out - rank_in);
        torsion.push(tors);
    }
    Ok(HomologySummary { betti, torsion })
}

/// Coordinates of a cycle in the presentation
/// `H_k = Z^b ⊕ Z/t_1 ⊕ ... ⊕ Z/t_s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleClass {
    pub free: Vec<BigInt>,
    /// `(residue, modulus)` per torsion summand, residue in `0..modulus`.
    pub torsion: Vec<(BigInt, BigInt)>,
}

impl CycleClass {
    pub fn is_trivial(&self) -> bool {
        self.free.iter().all(Zero::is_zero) && self.torsion.iter().all(|(r, _)| r.is_zero())
    }
}

/// Class of the `k`-cycle `z` (coefficients over `basis(k)`).
///
/// The presentation comes from the Smith form of `∂_k` (a basis of the cycle
/// lattice) followed by the Smith form of `∂_{k+1}` written in that basis.
pub fn cycle_class(c: &ChainComplex, k: usize, z: &[BigInt]) -> Result<CycleClass> {
    let n = c.basis(k).len();
    if k >= c.len() || z.len() != n {
        return Err(Error::ChainLength {
            got: z.len(),
            expected: n,
        });
    }
    let d_k = c.boundary(k).expect("in range");
    if !d_k.mul_vec(z).iter().all(Zero::is_zero) {
        return Err(Error::NotACycle);
    }

    // coordinates of z in a basis of ker ∂_k, and ∂_{k+1} in the same basis
    let d_up = c
        .boundary(k + 1)
        .cloned()
        .unwrap_or_else(|| IntMatrix::zeros(n, 0));
    let (coords, relations) = if k == 0 {
        (z.to_vec(), d_up)
    } else {
        let snf = smith_normal_form(d_k);
        let r = snf.rank();
        let keep: Vec<usize> = (r..n).collect();
        let all_cols: Vec<usize> = (0..d_up.cols()).collect();
        let rel = snf.v_inv.mul(&d_up).select(&keep, &all_cols);
        let coords = snf.v_inv.mul_vec(z)[r..].to_vec();
        (coords, rel)
    };

    let snf = smith_normal_form(&relations);
    let factors = snf.invariant_factors();
    let w = snf.u.mul_vec(&coords);
    let mut free = Vec::new();
    let mut torsion = Vec::new();
    for (i, wi) in w.into_iter().enumerate() {
        match factors.get(i) {
            Some(d) if d.is_one() => {}
            Some(d) => torsion.push((wi.mod_floor(d), d.clone())),
            None => free.push(wi),
        }
    }
    Ok(CycleClass { free, torsion })
}
