//! Gaussian elimination of acyclic pairs from integer chain complexes.
//!
//! Eliminating the pair `(b2, b1)` with `φ = <∂b1, b2> = ±1` removes `b1` from
//! dimension `i` and `b2` from dimension `i - 1`, and replaces the remaining
//! block `ε` of `∂_i` by `ε − γ φ⁻¹ δ`, where `δ` is the `b2` row and `γ` the
//! `b1` column. Labels of the surviving basis elements are kept, so two
//! reductions can be compared entrywise.

use std::thread;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::chain::ChainComplex;
use crate::complex::Cell;
use crate::error::Result;
use crate::hasse::{is_morse, Edge, HasseDiagram, Matching};
use crate::morse::thom_smale_complex;

/// The pair `(b2, b1)`: `lower` in dimension `i - 1`, `upper` in dimension `i`.
pub type EliminationStep = Edge;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EliminationError {
    #[error("label {label} is not a basis element in dimension {dim}")]
    UnknownLabel { label: Cell, dim: usize },
    #[error("pivot <d{}, {}> = {pivot} is not invertible over the integers", .step.upper, .step.lower)]
    NonInvertiblePivot { step: EliminationStep, pivot: BigInt },
    #[error("elimination order is not a permutation of the matching")]
    NotAPermutation,
}

/// Where a sequence of eliminations stopped.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("step {step}: {error}")]
pub struct SequenceFailure {
    /// 1-based index into the order; 0 when the order itself was rejected.
    pub step: usize,
    pub error: EliminationError,
    /// Pivots of the steps that succeeded.
    pub pivots: Vec<BigInt>,
}

impl SequenceFailure {
    pub fn pivot(&self) -> Option<&BigInt> {
        match &self.error {
            EliminationError::NonInvertiblePivot { pivot, .. } => Some(pivot),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EliminationTrace {
    pub complex: ChainComplex,
    pub pivots: Vec<BigInt>,
}

fn locate(c: &ChainComplex, dim: usize, label: &Cell) -> Result<usize, EliminationError> {
    c.index_of(dim, label).ok_or_else(|| EliminationError::UnknownLabel {
        label: label.clone(),
        dim,
    })
}

/// Current pivot `<∂ upper, lower>` of a step.
pub fn pivot_of(c: &ChainComplex, step: &EliminationStep) -> Result<BigInt, EliminationError> {
    let i = step.upper.dim();
    if i == 0 || i >= c.len() || step.lower.dim() + 1 != i {
        return Err(EliminationError::UnknownLabel {
            label: step.upper.clone(),
            dim: i,
        });
    }
    let col = locate(c, i, &step.upper)?;
    let row = locate(c, i - 1, &step.lower)?;
    Ok(c.boundary(i).expect("in range")[(row, col)].clone())
}

/// One Gaussian elimination. Refuses pivots other than ±1.
pub fn gaussian_eliminate(c: &ChainComplex, step: &EliminationStep) -> Result<ChainComplex, EliminationError> {
    let phi = pivot_of(c, step)?;
    if phi.abs() != BigInt::from(1) {
        return Err(EliminationError::NonInvertiblePivot {
            step: step.clone(),
            pivot: phi,
        });
    }
    let i = step.upper.dim();
    let b1 = locate(c, i, &step.upper)?;
    let b2 = locate(c, i - 1, &step.lower)?;

    let mut bases = c.bases().to_vec();
    bases[i].remove(b1);
    bases[i - 1].remove(b2);

    let mut boundaries = c.boundaries().to_vec();
    let d = &c.boundaries()[i];
    let rows: Vec<usize> = (0..d.rows()).filter(|&r| r != b2).collect();
    let cols: Vec<usize> = (0..d.cols()).filter(|&q| q != b1).collect();
    let mut eps = d.select(&rows, &cols);
    for (oi, &r) in rows.iter().enumerate() {
        let gamma = &d[(r, b1)];
        if gamma.is_zero() {
            continue;
        }
        // φ⁻¹ = φ for a unit pivot
        let g = gamma * &phi;
        for (oj, &q) in cols.iter().enumerate() {
            let delta = &d[(b2, q)];
            if !delta.is_zero() {
                eps[(oi, oj)] -= &g * delta;
            }
        }
    }
    boundaries[i] = eps;

    if let Some(up) = c.boundaries().get(i + 1) {
        let rows: Vec<usize> = (0..up.rows()).filter(|&r| r != b1).collect();
        let cols: Vec<usize> = (0..up.cols()).collect();
        boundaries[i + 1] = up.select(&rows, &cols);
    }
    let down = &c.boundaries()[i - 1];
    let rows: Vec<usize> = (0..down.rows()).collect();
    let cols: Vec<usize> = (0..down.cols()).filter(|&q| q != b2).collect();
    boundaries[i - 1] = down.select(&rows, &cols);

    Ok(ChainComplex::new(bases, boundaries).expect("elimination preserves d o d = 0"))
}

/// Eliminates the pairs of `m` in the given order.
pub fn eliminate_sequence(c: &ChainComplex, m: &Matching, order: &[Edge]) -> Result<EliminationTrace, SequenceFailure> {
    let mut sorted = order.to_vec();
    sorted.sort();
    sorted.dedup();
    if sorted.len() != order.len() || sorted.len() != m.len() || !sorted.iter().all(|e| m.contains(e)) {
        return Err(SequenceFailure {
            step: 0,
            error: EliminationError::NotAPermutation,
            pivots: Vec::new(),
        });
    }
    let mut current = c.clone();
    let mut pivots = Vec::with_capacity(order.len());
    for (idx, step) in order.iter().enumerate() {
        let pivot = pivot_of(&current, step);
        match gaussian_eliminate(&current, step) {
            Ok(next) => {
                pivots.push(pivot.expect("elimination succeeded"));
                current = next;
            }
            Err(error) => {
                return Err(SequenceFailure {
                    step: idx + 1,
                    error,
                    pivots,
                })
            }
        }
    }
    Ok(EliminationTrace {
        complex: current,
        pivots,
    })
}

/// How `all_orders_agree` picks orders.
#[derive(Clone, Copy, Debug)]
pub struct OrderOptions {
    /// Try every permutation when the matching has at most this many pairs.
    pub max_exhaustive: usize,
    /// Number of random orders otherwise.
    pub samples: usize,
    pub seed: u64,
    /// Worker threads; 1 runs inline.
    pub threads: usize,
}

impl Default for OrderOptions {
    fn default() -> Self {
        Self {
            max_exhaustive: 8,
            samples: 100,
            seed: 0,
            threads: 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OrderMismatch {
    Failed(SequenceFailure),
    /// The order succeeded but reduced to a different complex than the first order.
    Differs,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderWitness {
    pub order: Vec<Edge>,
    pub mismatch: OrderMismatch,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrdersVerdict {
    pub agree: bool,
    /// Every tested order ran to completion (results may still differ).
    pub all_succeeded: bool,
    pub orders_tested: usize,
    pub exhaustive: bool,
    /// Common reduced complex when every order agreed.
    pub reduced: Option<ChainComplex>,
    pub witness: Option<OrderWitness>,
}

/// Lexicographic successor of a permutation; `false` after the last one.
fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
        return false;
    };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).expect("pivot exists");
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

fn candidate_orders(n: usize, opts: &OrderOptions) -> (Vec<Vec<usize>>, bool) {
    if n <= opts.max_exhaustive {
        let mut p: Vec<usize> = (0..n).collect();
        let mut out = vec![p.clone()];
        while next_permutation(&mut p) {
            out.push(p.clone());
        }
        (out, true)
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        let base: Vec<usize> = (0..n).collect();
        let out = (0..opts.samples)
            .map(|_| {
                let mut p = base.clone();
                p.shuffle(&mut rng);
                p
            })
            .collect();
        (out, false)
    }
}

/// Runs the eliminations of `m` in many orders and checks that all succeed
/// and reduce to identical matrices.
pub fn all_orders_agree(c: &ChainComplex, m: &Matching, opts: &OrderOptions) -> OrdersVerdict {
    let edges: Vec<Edge> = m.edges().cloned().collect();
    let (orders, exhaustive) = candidate_orders(edges.len(), opts);
    let realize = |p: &[usize]| -> Vec<Edge> { p.iter().map(|&i| edges[i].clone()).collect() };

    let run_chunk = |chunk: &[Vec<usize>]| -> Vec<Result<ChainComplex, SequenceFailure>> {
        chunk
            .iter()
            .map(|p| eliminate_sequence(c, m, &realize(p)).map(|t| t.complex))
            .collect()
    };
    let results: Vec<Result<ChainComplex, SequenceFailure>> = if opts.threads <= 1 || orders.len() < 64 {
        run_chunk(&orders)
    } else {
        let size = orders.len().div_ceil(opts.threads);
        thread::scope(|s| {
            let handles: Vec<_> = orders.chunks(size).map(|ch| s.spawn(move || run_chunk(ch))).collect();
            handles
                .into_iter()
                .flat_map(|h| h.join().expect("worker panicked"))
                .collect()
        })
    };

    let mut reference: Option<&ChainComplex> = None;
    let mut witness = None;
    for (p, r) in orders.iter().zip(&results) {
        let mismatch = match r {
            Err(f) => Some(OrderMismatch::Failed(f.clone())),
            Ok(cc) => match reference {
                None => {
                    reference = Some(cc);
                    None
                }
                Some(r0) if r0 == cc => None,
                Some(_) => Some(OrderMismatch::Differs),
            },
        };
        if let Some(mismatch) = mismatch {
            witness = Some(OrderWitness {
                order: realize(p),
                mismatch,
            });
            break;
        }
    }
    let agree = witness.is_none();
    OrdersVerdict {
        agree,
        all_succeeded: results.iter().all(Result::is_ok),
        orders_tested: orders.len(),
        exhaustive,
        reduced: if agree { reference.cloned() } else { None },
        witness,
    }
}

/// Both sides of "Morse matching ⇔ every elimination order can be carried out".
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorseOrderVerdict {
    pub is_morse: bool,
    pub all_orders_succeed: bool,
    /// For Morse matchings: every reduction equals the Thom-Smale complex.
    pub matches_thom_smale: Option<bool>,
}

impl MorseOrderVerdict {
    pub fn holds(&self) -> bool {
        self.is_morse == self.all_orders_succeed && self.matches_thom_smale.unwrap_or(true)
    }
}

/// Exhaustive check of the equivalence on one matching, using the chain
/// complex of `h` (so reoriented diagrams are supported).
pub fn morse_iff_all_orders(h: &HasseDiagram, m: &Matching) -> Result<MorseOrderVerdict> {
    let morse = is_morse(h, m)?;
    let c = h.chain_complex()?;
    let opts = OrderOptions {
        max_exhaustive: usize::MAX,
        ..OrderOptions::default()
    };
    let verdict = all_orders_agree(&c, m, &opts);
    let all_succeed = verdict.all_succeeded;
    let matches_thom_smale = if morse {
        let ts = thom_smale_complex(h, m)?;
        Some(verdict.reduced.as_ref() == Some(ts.chain()))
    } else {
        None
    };
    Ok(MorseOrderVerdict {
        is_morse: morse,
        all_orders_succeed: all_succeed,
        matches_thom_smale,
    })
}
