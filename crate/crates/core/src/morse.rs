//! V-paths, multiplicities and the combinatorial Thom-Smale complex.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::chain::ChainComplex;
use crate::complex::{Cell, SimplicialComplex};
use crate::error::{Error, Result};
use crate::hasse::{critical_of, HasseDiagram, Matching, VectorField};
use crate::matrix::IntMatrix;

/// A sequence of equal-dimension cells `s_0, ..., s_r` with `s_{i+1} != s_i`
/// and `s_{i+1} < V(s_i)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VPath {
    cells: Vec<Cell>,
}

impl VPath {
    /// Wraps a cell sequence without checking it against a vector field.
    pub fn new_unchecked(cells: Vec<Cell>) -> Self {
        assert!(!cells.is_empty(), "a V-path has at least one cell");
        Self { cells }
    }

    pub fn stationary(cell: Cell) -> Self {
        Self { cells: vec![cell] }
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn start(&self) -> &Cell {
        &self.cells[0]
    }

    pub fn end(&self) -> &Cell {
        self.cells.last().expect("nonempty")
    }

    /// Number of steps `r`.
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.cells.len() - 1
    }

    pub fn is_stationary(&self) -> bool {
        self.cells.len() == 1
    }

    pub fn is_closed(&self) -> bool {
        !self.is_stationary() && self.start() == self.end()
    }

    /// Cell ids of the path, checking every step against `field`.
    fn resolve(&self, h: &HasseDiagram, field: &VectorField) -> Result<Vec<usize>> {
        let ids = self
            .cells
            .iter()
            .map(|c| h.id_of(c).ok_or_else(|| Error::UnknownCell(c.clone())))
            .collect::<Result<Vec<_>>>()?;
        for w in ids.windows(2) {
            let (a, b) = (w[0], w[1]);
            let ok = a != b && field.up(a).is_some_and(|up| h.is_edge(b, up));
            if !ok {
                return Err(Error::InvalidPath(format!(
                    "step {} -> {} does not descend from V({})",
                    h.cell(a),
                    h.cell(b),
                    h.cell(a)
                )));
            }
        }
        Ok(ids)
    }

    pub fn is_valid(&self, h: &HasseDiagram, m: &Matching) -> bool {
        VectorField::new(h, m).is_ok_and(|f| self.resolve(h, &f).is_ok())
    }
}

fn morse_field(h: &HasseDiagram, m: &Matching) -> Result<VectorField> {
    let field = VectorField::new(h, m)?;
    if !field.is_acyclic(h) {
        return Err(Error::NotMorse);
    }
    Ok(field)
}

fn sorted_steps(h: &HasseDiagram, field: &VectorField, id: usize) -> Vec<usize> {
    let mut s: Vec<usize> = field.vpath_steps(h, id).collect();
    s.sort_unstable();
    s
}

/// All V-paths from `start` to `end`, lexicographic by successive cells.
///
/// Includes the stationary path when `start == end`. Refuses non-Morse
/// matchings, for which the enumeration need not terminate.
pub fn vpaths(h: &HasseDiagram, m: &Matching, start: &Cell, end: &Cell) -> Result<Vec<VPath>> {
    let field = morse_field(h, m)?;
    if start.dim() != end.dim() {
        return Err(Error::DimensionMismatch(start.clone(), end.clone()));
    }
    let s = h.id_of(start).ok_or_else(|| Error::UnknownCell(start.clone()))?;
    let t = h.id_of(end).ok_or_else(|| Error::UnknownCell(end.clone()))?;
    let mut out = Vec::new();
    enumerate_paths(h, &field, t, &mut vec![s], &mut out);
    Ok(out
        .into_iter()
        .map(|ids| VPath::new_unchecked(ids.into_iter().map(|i| h.cell(i).clone()).collect()))
        .collect())
}

fn enumerate_paths(
    h: &HasseDiagram,
    field: &VectorField,
    target: usize,
    path: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    let last = *path.last().expect("nonempty");
    if last == target {
        // acyclic: nothing past the target can come back to it
        out.push(path.clone());
        return;
    }
    for next in sorted_steps(h, field, last) {
        path.push(next);
        enumerate_paths(h, field, target, path, out);
        path.pop();
    }
}

/// `m(γ) = Π −<∂V(s_i), s_i><∂V(s_i), s_{i+1}>`; the empty product is +1.
pub fn multiplicity(h: &HasseDiagram, m: &Matching, gamma: &VPath) -> Result<i32> {
    let field = VectorField::new(h, m)?;
    let ids = gamma.resolve(h, &field)?;
    Ok(multiplicity_of_ids(h, &field, &ids))
}

fn step_sign(h: &HasseDiagram, field: &VectorField, from: usize, to: usize) -> i32 {
    let up = field.up(from).expect("step leaves a matched cell");
    -h.incidence(up, from) * h.incidence(up, to)
}

fn multiplicity_of_ids(h: &HasseDiagram, field: &VectorField, ids: &[usize]) -> i32 {
    ids.windows(2).map(|w| step_sign(h, field, w[0], w[1])).product()
}

fn require_critical(h: &HasseDiagram, field: &VectorField, cell: &Cell) -> Result<usize> {
    let id = h.id_of(cell).ok_or_else(|| Error::UnknownCell(cell.clone()))?;
    if !field.is_critical(id) {
        return Err(Error::NotCritical(cell.clone()));
    }
    Ok(id)
}

/// `n(τ, σ) = Σ_{σ̃ < τ} <∂τ, σ̃> Σ_{γ ∈ Γ(σ̃, σ)} m(γ)`, evaluated by explicit
/// path enumeration.
pub fn differential_entry(h: &HasseDiagram, m: &Matching, tau: &Cell, sigma: &Cell) -> Result<BigInt> {
    let field = morse_field(h, m)?;
    let t = require_critical(h, &field, tau)?;
    let s = require_critical(h, &field, sigma)?;
    if tau.dim() != sigma.dim() + 1 {
        return Err(Error::DimensionMismatch(tau.clone(), sigma.clone()));
    }
    let mut total = BigInt::zero();
    for &(face, inc) in h.faces(t) {
        let mut paths = Vec::new();
        enumerate_paths(h, &field, s, &mut vec![face], &mut paths);
        let sum: i64 = paths
            .iter()
            .map(|p| i64::from(multiplicity_of_ids(h, &field, p)))
            .sum();
        total += BigInt::from(inc) * BigInt::from(sum);
    }
    Ok(total)
}

type Counts = BTreeMap<usize, BigInt>;

/// Memoized signed path counts `Σ_{γ ∈ Γ(x, σ)} m(γ)` over critical `σ`.
struct PathCounter<'a> {
    h: &'a HasseDiagram,
    field: &'a VectorField,
    memo: HashMap<usize, Counts>,
}

impl<'a> PathCounter<'a> {
    fn new(h: &'a HasseDiagram, field: &'a VectorField) -> Self {
        Self {
            h,
            field,
            memo: HashMap::new(),
        }
    }

    fn counts(&mut self, start: usize) -> &Counts {
        // iterative post-order over the acyclic V-digraph
        let mut stack = vec![(start, false)];
        while let Some((node, expanded)) = stack.pop() {
            if self.memo.contains_key(&node) {
                continue;
            }
            if self.field.is_critical(node) {
                self.memo.insert(node, BTreeMap::from([(node, BigInt::one())]));
                continue;
            }
            let steps: Vec<usize> = self.field.vpath_steps(self.h, node).collect();
            if expanded {
                let mut acc = Counts::new();
                for next in steps {
                    let sign = step_sign(self.h, self.field, node, next);
                    for (k, v) in &self.memo[&next] {
                        let e = acc.entry(*k).or_default();
                        if sign > 0 {
                            *e += v;
                        } else {
                            *e -= v;
                        }
                    }
                }
                acc.retain(|_, v| !v.is_zero());
                self.memo.insert(node, acc);
            } else {
                stack.push((node, true));
                stack.extend(steps.into_iter().filter(|s| !self.memo.contains_key(s)).map(|s| (s, false)));
            }
        }
        &self.memo[&start]
    }
}

/// For each critical cell `σ` of the same dimension, the signed count
/// `Σ_{γ ∈ Γ(σ̃, σ)} m(γ)`, computed by dynamic programming. Zero counts are
/// omitted.
pub fn path_counts_signed(h: &HasseDiagram, m: &Matching, sigma_tilde: &Cell) -> Result<BTreeMap<Cell, BigInt>> {
    let field = morse_field(h, m)?;
    let start = h
        .id_of(sigma_tilde)
        .ok_or_else(|| Error::UnknownCell(sigma_tilde.clone()))?;
    let mut counter = PathCounter::new(h, &field);
    Ok(counter
        .counts(start)
        .iter()
        .map(|(&k, v)| (h.cell(k).clone(), v.clone()))
        .collect())
}

/// The combinatorial Thom-Smale complex of a Morse matching.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorseComplex {
    chain: ChainComplex,
    matching: Matching,
}

impl MorseComplex {
    pub fn chain(&self) -> &ChainComplex {
        &self.chain
    }

    pub fn into_chain(self) -> ChainComplex {
        self.chain
    }

    pub fn matching(&self) -> &Matching {
        &self.matching
    }

    /// Critical cells of dimension `k`.
    pub fn critical(&self, k: usize) -> &[Cell] {
        self.chain.basis(k)
    }

    pub fn num_critical(&self) -> usize {
        self.chain.basis_sizes().iter().sum()
    }
}

/// Builds `(C^V, ∂^V)`. Bases are the critical cells per dimension in
/// lexicographic order. Panics if `∂^V ∘ ∂^V != 0`.
pub fn thom_smale_complex(h: &HasseDiagram, m: &Matching) -> Result<MorseComplex> {
    let field = morse_field(h, m)?;
    let x = h.complex();
    let top = x.dim().ok_or(Error::EmptyComplex)?;
    let bases = critical_of(h, &field);
    let position: HashMap<usize, usize> = (0..=top)
        .flat_map(|k| {
            bases[k]
                .iter()
                .enumerate()
                .map(|(i, c)| (h.id_of(c).expect("critical cell is in the complex"), i))
                .collect::<Vec<_>>()
        })
        .collect();

    let mut boundaries = vec![IntMatrix::zeros(0, bases[0].len())];
    let mut counter = PathCounter::new(h, &field);
    for k in 1..=top {
        let mut d = IntMatrix::zeros(bases[k - 1].len(), bases[k].len());
        for (j, tau) in bases[k].iter().enumerate() {
            let t = h.id_of(tau).expect("critical cell is in the complex");
            for &(face, inc) in h.faces(t) {
                for (s, count) in counter.counts(face) {
                    d[(position[s], j)] += BigInt::from(inc) * count;
                }
            }
        }
        boundaries.push(d);
    }
    let chain = ChainComplex::new(bases, boundaries).expect("Thom-Smale differential must square to zero");
    Ok(MorseComplex {
        chain,
        matching: m.clone(),
    })
}

/// Per-cell orientation signs relative to the increasing-vertex orientation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orientation {
    signs: Vec<i32>,
}

impl Orientation {
    pub fn canonical(x: &SimplicialComplex) -> Self {
        Self {
            signs: vec![1; x.len()],
        }
    }

    pub fn sign(&self, id: usize) -> i32 {
        self.signs[id]
    }

    pub fn is_canonical(&self) -> bool {
        self.signs.iter().all(|&s| s == 1)
    }
}

/// Orientation with the listed cells reversed. Apply it with
/// [`HasseDiagram::reoriented`].
pub fn reorient<'a, I>(x: &SimplicialComplex, flips: I) -> Result<Orientation>
where
    I: IntoIterator<Item = &'a Cell>,
{
    let mut o = Orientation::canonical(x);
    for cell in flips {
        let id = x.id_of(cell).ok_or_else(|| Error::UnknownCell(cell.clone()))?;
        o.signs[id] = -1;
    }
    Ok(o)
}
