//! Hasse diagrams, matchings, and the Morse property.
//!
//! A [`Matching`] is a set of Hasse edges `(lower, upper)` and doubles as the
//! combinatorial vector field `V` with `V(lower) = upper`. The indexed form
//! [`VectorField`] is what the algorithms run on; building it validates the
//! matching against a diagram.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;
use thiserror::Error;

use crate::chain::ChainComplex;
use crate::complex::{Cell, SimplicialComplex};
use crate::error::{Error, Result};
use crate::matrix::IntMatrix;
use crate::morse::{Orientation, VPath};

/// A Hasse edge, stored with the lower cell first.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    pub lower: Cell,
    pub upper: Cell,
}

impl Edge {
    pub fn new(lower: Cell, upper: Cell) -> Self {
        Self { lower, upper }
    }

    pub fn contains(&self, cell: &Cell) -> bool {
        &self.lower == cell || &self.upper == cell
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{} < {}]", self.lower, self.upper)
    }
}

impl fmt::Debug for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Codimension-one incidence graph of a complex, with signed incidences.
///
/// Signs are the canonical ones unless the diagram was built with
/// [`HasseDiagram::reoriented`].
#[derive(Clone, Debug)]
pub struct HasseDiagram {
    complex: SimplicialComplex,
    faces: Vec<Vec<(usize, i32)>>,
    cofaces: Vec<Vec<usize>>,
}

impl HasseDiagram {
    pub fn new(x: &SimplicialComplex) -> Self {
        let faces: Vec<Vec<(usize, i32)>> = (0..x.len()).map(|id| x.hyperface_ids(id)).collect();
        let mut cofaces = vec![Vec::new(); x.len()];
        for (tau, fs) in faces.iter().enumerate() {
            for &(sigma, _) in fs {
                cofaces[sigma].push(tau);
            }
        }
        for c in &mut cofaces {
            c.sort_unstable();
        }
        Self {
            complex: x.clone(),
            faces,
            cofaces,
        }
    }

    /// Same diagram with incidences multiplied by the orientation signs of
    /// both endpoints.
    pub fn reoriented(&self, orientation: &Orientation) -> Self {
        let faces = self
            .faces
            .iter()
            .enumerate()
            .map(|(tau, fs)| {
                fs.iter()
                    .map(|&(sigma, s)| (sigma, s * orientation.sign(tau) * orientation.sign(sigma)))
                    .collect()
            })
            .collect();
        Self {
            complex: self.complex.clone(),
            faces,
            cofaces: self.cofaces.clone(),
        }
    }

    pub fn complex(&self) -> &SimplicialComplex {
        &self.complex
    }

    pub fn num_vertices(&self) -> usize {
        self.faces.len()
    }

    pub fn num_edges(&self) -> usize {
        self.faces.iter().map(Vec::len).sum()
    }

    pub fn cell(&self, id: usize) -> &Cell {
        self.complex.cell(id)
    }

    pub fn dim(&self, id: usize) -> usize {
        self.complex.cell(id).dim()
    }

    pub fn id_of(&self, cell: &Cell) -> Option<usize> {
        self.complex.id_of(cell)
    }

    /// Like [`HasseDiagram::id_of`], failing with [`Error::UnknownCell`].
    pub fn require(&self, cell: &Cell) -> Result<usize> {
        self.id_of(cell).ok_or_else(|| Error::UnknownCell(cell.clone()))
    }

    /// Hyperfaces of `id` with their incidence numbers, in removal order.
    pub fn faces(&self, id: usize) -> &[(usize, i32)] {
        &self.faces[id]
    }

    /// Cells having `id` as a hyperface, ascending.
    pub fn cofaces(&self, id: usize) -> &[usize] {
        &self.cofaces[id]
    }

    /// Incidence `<d tau, sigma>` under this diagram's orientation.
    pub fn incidence(&self, tau: usize, sigma: usize) -> i32 {
        self.faces[tau]
            .iter()
            .find(|&&(f, _)| f == sigma)
            .map_or(0, |&(_, s)| s)
    }

    pub fn is_edge(&self, lower: usize, upper: usize) -> bool {
        self.faces[upper].iter().any(|&(f, _)| f == lower)
    }

    /// All edges as `(lower id, upper id)`, ordered by `(lower, upper)`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = self
            .cofaces
            .iter()
            .enumerate()
            .flat_map(|(s, cs)| cs.iter().map(move |&t| (s, t)))
            .collect();
        out.sort_unstable();
        out
    }

    pub fn edge(&self, lower: usize, upper: usize) -> Edge {
        Edge::new(self.cell(lower).clone(), self.cell(upper).clone())
    }

    /// Chain complex with this diagram's incidence signs.
    pub fn chain_complex(&self) -> Result<ChainComplex> {
        let x = &self.complex;
        let top = x.dim().ok_or(Error::EmptyComplex)?;
        let mut boundaries = Vec::with_capacity(top + 1);
        boundaries.push(IntMatrix::zeros(0, x.cells_of_dim(0).len()));
        for k in 1..=top {
            let (ro, co) = (x.dim_offset(k - 1), x.dim_offset(k));
            let mut d = IntMatrix::zeros(x.cells_of_dim(k - 1).len(), x.cells_of_dim(k).len());
            for j in 0..x.cells_of_dim(k).len() {
                for &(f, s) in &self.faces[co + j] {
                    d[(f - ro, j)] = s.into();
                }
            }
            boundaries.push(d);
        }
        let bases = (0..=top).map(|k| x.cells_of_dim(k).to_vec()).collect();
        ChainComplex::new(bases, boundaries)
    }
}

pub fn hasse(x: &SimplicialComplex) -> HasseDiagram {
    HasseDiagram::new(x)
}

/// A set of Hasse edges. Disjointness is not enforced on construction; see
/// [`validate_matching`].
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Matching {
    edges: BTreeSet<Edge>,
}

impl Matching {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns `false` if the edge was already present.
    pub fn insert(&mut self, edge: Edge) -> bool {
        self.edges.insert(edge)
    }

    pub fn remove(&mut self, edge: &Edge) -> bool {
        self.edges.remove(edge)
    }

    pub fn contains(&self, edge: &Edge) -> bool {
        self.edges.contains(edge)
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Edges in `(lower, upper)` order.
    pub fn edges(&self) -> impl Iterator<Item = &Edge> + '_ {
        self.edges.iter()
    }

    /// Edge containing `cell`, if any.
    pub fn edge_of(&self, cell: &Cell) -> Option<&Edge> {
        self.edges.iter().find(|e| e.contains(cell))
    }
}

impl FromIterator<Edge> for Matching {
    fn from_iter<I: IntoIterator<Item = Edge>>(iter: I) -> Self {
        Self {
            edges: iter.into_iter().collect(),
        }
    }
}

impl<'a> IntoIterator for &'a Matching {
    type Item = &'a Edge;
    type IntoIter = std::collections::btree_set::Iter<'a, Edge>;

    fn into_iter(self) -> Self::IntoIter {
        self.edges.iter()
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatchingViolation {
    #[error("{0} is not an edge of the Hasse diagram")]
    NotAHasseEdge(Edge),
    #[error("edges {first} and {second} share the cell {cell}")]
    SharedCell { first: Edge, second: Edge, cell: Cell },
}

/// `Ok` iff every edge is a Hasse edge and no two edges share a cell. Reports
/// the first offence in edge order.
pub fn validate_matching(h: &HasseDiagram, m: &Matching) -> Result<(), MatchingViolation> {
    VectorField::new(h, m).map(|_| ())
}

/// `V(sigma)`: the matched coface of `sigma`, or `None` (the zero vector).
pub fn vfield<'a>(m: &'a Matching, sigma: &Cell) -> Option<&'a Cell> {
    m.edges().find(|e| &e.lower == sigma).map(|e| &e.upper)
}

/// A validated matching indexed by cell id.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VectorField {
    partner: Vec<Option<usize>>,
    dims: Vec<usize>,
}

impl VectorField {
    pub fn new(h: &HasseDiagram, m: &Matching) -> Result<Self, MatchingViolation> {
        let mut partner: Vec<Option<usize>> = vec![None; h.num_vertices()];
        let mut owner: Vec<Option<&Edge>> = vec![None; h.num_vertices()];
        for e in m {
            let (lo, up) = match (h.id_of(&e.lower), h.id_of(&e.upper)) {
                (Some(lo), Some(up)) if h.is_edge(lo, up) => (lo, up),
                _ => return Err(MatchingViolation::NotAHasseEdge(e.clone())),
            };
            for id in [lo, up] {
                if let Some(prev) = owner[id] {
                    return Err(MatchingViolation::SharedCell {
                        first: prev.clone(),
                        second: e.clone(),
                        cell: h.cell(id).clone(),
                    });
                }
                owner[id] = Some(e);
            }
            partner[lo] = Some(up);
            partner[up] = Some(lo);
        }
        Ok(Self {
            partner,
            dims: (0..h.num_vertices()).map(|i| h.dim(i)).collect(),
        })
    }

    pub fn empty(h: &HasseDiagram) -> Self {
        Self {
            partner: vec![None; h.num_vertices()],
            dims: (0..h.num_vertices()).map(|i| h.dim(i)).collect(),
        }
    }

    /// `V(id)`: the matched coface.
    pub fn up(&self, id: usize) -> Option<usize> {
        self.partner[id].filter(|&p| self.dims[p] > self.dims[id])
    }

    /// The matched hyperface, when `id` is the head of an edge.
    pub fn down(&self, id: usize) -> Option<usize> {
        self.partner[id].filter(|&p| self.dims[p] < self.dims[id])
    }

    pub fn partner(&self, id: usize) -> Option<usize> {
        self.partner[id]
    }

    pub fn is_critical(&self, id: usize) -> bool {
        self.partner[id].is_none()
    }

    pub fn num_cells(&self) -> usize {
        self.partner.len()
    }

    pub fn num_pairs(&self) -> usize {
        self.partner.iter().filter(|p| p.is_some()).count() / 2
    }

    fn pair(&mut self, lower: usize, upper: usize) {
        self.partner[lower] = Some(upper);
        self.partner[upper] = Some(lower);
    }

    pub fn to_matching(&self, h: &HasseDiagram) -> Matching {
        (0..self.partner.len())
            .filter_map(|id| self.up(id).map(|up| h.edge(id, up)))
            .collect()
    }

    /// Successors in the modified Hasse digraph: the matched coface (up) and
    /// every hyperface except the matched one (down).
    fn successors<'a>(&'a self, h: &'a HasseDiagram, id: usize) -> impl Iterator<Item = usize> + 'a {
        let down = self.down(id);
        self.up(id)
            .into_iter()
            .chain(h.faces(id).iter().map(|&(f, _)| f).filter(move |&f| Some(f) != down))
    }

    /// Whether the modified Hasse digraph (matched edges up, others down) is acyclic.
    pub fn is_acyclic(&self, h: &HasseDiagram) -> bool {
        #[derive(Clone, Copy, PartialEq)]
        enum Mark {
            New,
            Open,
            Done,
        }
        let n = self.partner.len();
        let mut mark = vec![Mark::New; n];
        let mut stack: Vec<(usize, Vec<usize>)> = Vec::new();
        for root in 0..n {
            if mark[root] != Mark::New {
                continue;
            }
            mark[root] = Mark::Open;
            stack.push((root, self.successors(h, root).collect()));
            while let Some((node, pending)) = stack.last_mut() {
                match pending.pop() {
                    Some(next) => match mark[next] {
                        Mark::Open => return false,
                        Mark::Done => {}
                        Mark::New => {
                            mark[next] = Mark::Open;
                            let succ = self.successors(h, next).collect();
                            stack.push((next, succ));
                        }
                    },
                    None => {
                        mark[*node] = Mark::Done;
                        stack.pop();
                    }
                }
            }
        }
        true
    }

    /// Whether pairing the unmatched `lower` and `upper` would close a cycle:
    /// that happens iff `upper` already reaches `lower` without the direct
    /// down edge.
    fn pairing_creates_cycle(&self, h: &HasseDiagram, lower: usize, upper: usize) -> bool {
        let mut seen = HashSet::new();
        let mut stack: Vec<usize> = self.successors(h, upper).filter(|&s| s != lower).collect();
        while let Some(node) = stack.pop() {
            if node == lower {
                return true;
            }
            if seen.insert(node) {
                stack.extend(self.successors(h, node));
            }
        }
        false
    }

    /// V-path successors of a cell: the other hyperfaces of its matched coface.
    pub(crate) fn vpath_steps<'a>(&'a self, h: &'a HasseDiagram, id: usize) -> impl Iterator<Item = usize> + 'a {
        self.up(id)
            .into_iter()
            .flat_map(move |up| h.faces(up).iter().map(|&(f, _)| f))
            .filter(move |&f| f != id)
    }
}

/// Unmatched cells grouped by dimension (one entry per dimension of the complex).
pub fn critical_cells(h: &HasseDiagram, m: &Matching) -> Result<Vec<Vec<Cell>>> {
    let field = VectorField::new(h, m)?;
    Ok(critical_of(h, &field))
}

pub(crate) fn critical_of(h: &HasseDiagram, field: &VectorField) -> Vec<Vec<Cell>> {
    let top = h.complex().dim().map_or(0, |d| d + 1);
    let mut out = vec![Vec::new(); top];
    for id in 0..h.num_vertices() {
        if field.is_critical(id) {
            out[h.dim(id)].push(h.cell(id).clone());
        }
    }
    out
}

/// Morse test by acyclicity of the modified Hasse digraph.
pub fn is_morse(h: &HasseDiagram, m: &Matching) -> Result<bool> {
    Ok(VectorField::new(h, m)?.is_acyclic(h))
}

/// Brute-force search for a non-stationary closed V-path, literally following
/// the definition: depth-first over sequences with `s_{i+1} != s_i` and
/// `s_{i+1} < V(s_i)`, up to length equal to the number of cells.
///
/// Paths that revisit an intermediate cell are cut, since such a path already
/// contains a shorter closed path starting at the revisited cell.
pub fn find_closed_vpath(h: &HasseDiagram, m: &Matching) -> Result<Option<VPath>> {
    let field = VectorField::new(h, m)?;
    let limit = h.num_vertices();
    for start in 0..h.num_vertices() {
        if field.up(start).is_none() {
            continue;
        }
        let mut path = vec![start];
        let mut on_path = vec![false; limit];
        on_path[start] = true;
        if closed_from(h, &field, start, &mut path, &mut on_path, limit) {
            let cells = path.iter().map(|&i| h.cell(i).clone()).collect();
            return Ok(Some(VPath::new_unchecked(cells)));
        }
    }
    Ok(None)
}

fn closed_from(
    h: &HasseDiagram,
    field: &VectorField,
    start: usize,
    path: &mut Vec<usize>,
    on_path: &mut [bool],
    limit: usize,
) -> bool {
    if path.len() > limit {
        return false;
    }
    let last = *path.last().expect("path is nonempty");
    let Some(up) = field.up(last) else {
        return false;
    };
    for &(next, _) in h.faces(up) {
        if next == last {
            continue;
        }
        if next == start {
            path.push(next);
            return true;
        }
        if on_path[next] {
            continue;
        }
        path.push(next);
        on_path[next] = true;
        if closed_from(h, field, start, path, on_path, limit) {
            return true;
        }
        on_path[next] = false;
        path.pop();
    }
    false
}

pub fn has_closed_vpath_bruteforce(h: &HasseDiagram, m: &Matching) -> Result<bool> {
    Ok(find_closed_vpath(h, m)?.is_some())
}

/// `M` without `e`.
pub fn remove_edge(m: &Matching, e: &Edge) -> Result<Matching> {
    if !m.contains(e) {
        return Err(Error::EdgeNotInMatching(e.lower.clone(), e.upper.clone()));
    }
    let mut out = m.clone();
    out.remove(e);
    Ok(out)
}

/// Greedy elementary collapses of `X` onto the subcomplex `X0`.
///
/// Repeatedly takes the smallest cell outside `X0` with exactly one remaining
/// coface (itself outside `X0`), records the pair and removes both. Returns
/// `None` if no free face remains before reaching `X0`; there is no
/// backtracking.
pub fn find_collapse(h: &HasseDiagram, x0: &SimplicialComplex) -> Result<Option<Matching>> {
    let n = h.num_vertices();
    let mut keep = vec![false; n];
    for c in x0.cells() {
        keep[h.require(c)?] = true;
    }
    let mut alive = vec![true; n];
    let mut coface_count: Vec<usize> = (0..n).map(|i| h.cofaces(i).len()).collect();
    let mut candidates: BTreeSet<usize> =
        (0..n).filter(|&i| !keep[i] && coface_count[i] == 1).collect();
    let mut remaining = n;
    let mut matching = Matching::new();

    while let Some(&sigma) = candidates.iter().next() {
        candidates.remove(&sigma);
        if !alive[sigma] || coface_count[sigma] != 1 {
            continue;
        }
        let tau = *h
            .cofaces(sigma)
            .iter()
            .find(|&&t| alive[t])
            .expect("one live coface");
        if keep[tau] {
            continue;
        }
        matching.insert(h.edge(sigma, tau));
        for cell in [sigma, tau] {
            alive[cell] = false;
            remaining -= 1;
            for &(f, _) in h.faces(cell) {
                if alive[f] {
                    coface_count[f] -= 1;
                    if !keep[f] && coface_count[f] == 1 {
                        candidates.insert(f);
                    }
                }
            }
        }
    }

    Ok((remaining == x0.len()).then_some(matching))
}

/// Greedy Morse matching over the Hasse edges in `(lower, upper)` order.
pub fn greedy_morse_matching(h: &HasseDiagram) -> Matching {
    greedy_morse_matching_in_order(h, &h.edges())
}

/// Adds each edge of `order` whose endpoints are both unmatched, when doing
/// so keeps the modified Hasse digraph acyclic. The result is maximal with
/// respect to `order`.
pub fn greedy_morse_matching_in_order(h: &HasseDiagram, order: &[(usize, usize)]) -> Matching {
    let mut field = VectorField::empty(h);
    for &(lo, up) in order {
        if field.is_critical(lo) && field.is_critical(up) && !field.pairing_creates_cycle(h, lo, up) {
            field.pair(lo, up);
        }
    }
    field.to_matching(h)
}

/// Greedy Morse matching over a uniformly shuffled edge order.
pub fn random_morse_matching<R: Rng + ?Sized>(h: &HasseDiagram, rng: &mut R) -> Matching {
    let mut order = h.edges();
    order.shuffle(rng);
    greedy_morse_matching_in_order(h, &order)
}

/// Random matching (not necessarily Morse): shuffled edges added whenever both
/// endpoints are free, stopping at `max_pairs`.
pub fn random_matching<R: Rng + ?Sized>(h: &HasseDiagram, rng: &mut R, max_pairs: usize) -> Matching {
    let mut order = h.edges();
    order.shuffle(rng);
    let mut field = VectorField::empty(h);
    let mut count = 0;
    for (lo, up) in order {
        if count == max_pairs {
            break;
        }
        if field.is_critical(lo) && field.is_critical(up) {
            field.pair(lo, up);
            count += 1;
        }
    }
    field.to_matching(h)
}

/// Every matching of the Hasse diagram (including the empty one). Exponential;
/// for tiny complexes only.
pub fn all_matchings(h: &HasseDiagram) -> Vec<Matching> {
    fn go(
        h: &HasseDiagram,
        edges: &[(usize, usize)],
        i: usize,
        used: &mut Vec<bool>,
        current: &mut Vec<(usize, usize)>,
        out: &mut Vec<Matching>,
    ) {
        if i == edges.len() {
            out.push(current.iter().map(|&(l, u)| h.edge(l, u)).collect());
            return;
        }
        go(h, edges, i + 1, used, current, out);
        let (l, u) = edges[i];
        if !used[l] && !used[u] {
            used[l] = true;
            used[u] = true;
            current.push((l, u));
            go(h, edges, i + 1, used, current, out);
            current.pop();
            used[l] = false;
            used[u] = false;
        }
    }
    let edges = h.edges();
    let mut out = Vec::new();
    go(h, &edges, 0, &mut vec![false; h.num_vertices()], &mut Vec::new(), &mut out);
    out
}
