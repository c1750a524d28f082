//! Finite simplicial complexes with canonically oriented cells.
//!
//! Every cell is a strictly increasing vertex tuple, oriented by increasing
//! vertex order. Removing the `i`-th vertex of a cell gives a hyperface with
//! incidence `(-1)^i`.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};
use std::fmt;

use crate::chain::ChainComplex;
use crate::error::{Error, Result};
use crate::matrix::IntMatrix;

/// A simplex given by its strictly increasing vertex tuple.
///
/// Cells order by `(dimension, vertex tuple)`; this is the basis order and the
/// tie-breaking order used throughout the crate.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Cell(Vec<u32>);

impl Cell {
    /// Sorts the vertices. Fails on an empty tuple or a repeated vertex.
    pub fn new(mut vertices: Vec<u32>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::EmptyFacet { index: 0 });
        }
        vertices.sort_unstable();
        if let Some(w) = vertices.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateVertex {
                index: 0,
                vertex: w[0],
            });
        }
        Ok(Cell(vertices))
    }

    /// Panics unless `vertices` is nonempty and strictly increasing.
    pub fn from_sorted(vertices: Vec<u32>) -> Self {
        assert!(!vertices.is_empty(), "a cell needs at least one vertex");
        assert!(
            vertices.windows(2).all(|w| w[0] < w[1]),
            "cell vertices must be strictly increasing: {vertices:?}"
        );
        Cell(vertices)
    }

    pub fn vertex(v: u32) -> Self {
        Cell(vec![v])
    }

    pub fn vertices(&self) -> &[u32] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }

    /// The hyperface with the `i`-th vertex removed, or `None` for a vertex.
    pub fn remove_vertex(&self, i: usize) -> Option<Cell> {
        if self.0.len() < 2 {
            return None;
        }
        let mut v = self.0.clone();
        v.remove(i);
        Some(Cell(v))
    }

    /// Hyperfaces in removal order, paired with their incidence sign.
    pub fn hyperfaces(&self) -> impl Iterator<Item = (Cell, i32)> + '_ {
        (0..self.0.len())
            .filter_map(move |i| self.remove_vertex(i).map(|f| (f, sign_of(i))))
    }

    /// `true` if `self` is a (not necessarily proper) face of `other`.
    pub fn is_face_of(&self, other: &Cell) -> bool {
        let mut it = other.0.iter();
        self.0.iter().all(|v| it.any(|w| w == v))
    }
}

fn sign_of(i: usize) -> i32 {
    if i.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

impl Ord for Cell {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl AsRef<[u32]> for Cell {
    fn as_ref(&self) -> &[u32] {
        &self.0
    }
}

impl PartialOrd for Cell {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Incidence number `<d tau, sigma>`: `(-1)^i` when `sigma` is `tau` with its
/// `i`-th vertex removed, 0 otherwise.
pub fn incidence(tau: &Cell, sigma: &Cell) -> i32 {
    if tau.0.len() != sigma.0.len() + 1 {
        return 0;
    }
    // first position where the tuples diverge is the removed vertex
    let i = (0..sigma.0.len())
        .find(|&i| tau.0[i] != sigma.0[i])
        .unwrap_or(sigma.0.len());
    if tau.0[..i] == sigma.0[..i] && tau.0[i + 1..] == sigma.0[i..] {
        sign_of(i)
    } else {
        0
    }
}

/// A finite face-closed family of cells, stored in `(dimension, lex)` order.
#[derive(Clone, PartialEq, Eq)]
pub struct SimplicialComplex {
    cells: Vec<Cell>,
    /// `offsets[k]..offsets[k + 1]` are the cells of dimension `k`.
    offsets: Vec<usize>,
    index: HashMap<Cell, usize>,
}

impl SimplicialComplex {
    /// Downward closure of the given facets.
    pub fn from_facets<I, F>(facets: I) -> Result<Self>
    where
        I: IntoIterator<Item = F>,
        F: AsRef<[u32]>,
    {
        let mut all = BTreeSet::new();
        for (index, facet) in facets.into_iter().enumerate() {
            let cell = Cell::new(facet.as_ref().to_vec()).map_err(|e| match e {
                Error::EmptyFacet { .. } => Error::EmptyFacet { index },
                Error::DuplicateVertex { vertex, .. } => Error::DuplicateVertex { index, vertex },
                other => other,
            })?;
            if all.contains(&cell) {
                continue;
            }
            close_downward(&cell, &mut all);
        }
        Ok(Self::from_closed_set(all))
    }

    fn from_closed_set(cells: BTreeSet<Cell>) -> Self {
        let cells: Vec<Cell> = cells.into_iter().collect();
        let top = cells.last().map(Cell::dim);
        let mut offsets = vec![0];
        if let Some(top) = top {
            let mut start = 0;
            for k in 0..=top {
                start += cells[start..].iter().take_while(|c| c.dim() == k).count();
                offsets.push(start);
            }
        }
        let index = cells.iter().cloned().enumerate().map(|(i, c)| (c, i)).collect();
        Self {
            cells,
            offsets,
            index,
        }
    }

    /// Top dimension, or `None` for the empty complex.
    pub fn dim(&self) -> Option<usize> {
        self.cells.last().map(Cell::dim)
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// All cells in basis order.
    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn cell(&self, id: usize) -> &Cell {
        &self.cells[id]
    }

    /// Cells of dimension `k` in lexicographic order (empty past the top dimension).
    pub fn cells_of_dim(&self, k: usize) -> &[Cell] {
        if k + 1 >= self.offsets.len() {
            return &[];
        }
        &self.cells[self.offsets[k]..self.offsets[k + 1]]
    }

    /// Global id of the first cell of dimension `k`.
    pub fn dim_offset(&self, k: usize) -> usize {
        self.offsets[k.min(self.offsets.len() - 1)]
    }

    pub fn id_of(&self, cell: &Cell) -> Option<usize> {
        self.index.get(cell).copied()
    }

    pub fn contains(&self, cell: &Cell) -> bool {
        self.index.contains_key(cell)
    }

    /// Number of cells per dimension.
    pub fn f_vector(&self) -> Vec<usize> {
        self.offsets.windows(2).map(|w| w[1] - w[0]).collect()
    }

    pub fn vertices(&self) -> impl Iterator<Item = u32> + '_ {
        self.cells_of_dim(0).iter().map(|c| c.vertices()[0])
    }

    /// Maximal cells, in basis order.
    pub fn facets(&self) -> Vec<Cell> {
        let mut covered = vec![false; self.cells.len()];
        for c in &self.cells {
            for (f, _) in c.hyperfaces() {
                covered[self.index[&f]] = true;
            }
        }
        self.cells
            .iter()
            .zip(covered)
            .filter(|(_, c)| !c)
            .map(|(cell, _)| cell.clone())
            .collect()
    }

    /// Signed hyperfaces of a cell, as `(id, incidence)`.
    pub fn hyperface_ids(&self, id: usize) -> Vec<(usize, i32)> {
        self.cells[id]
            .hyperfaces()
            .map(|(f, s)| (self.index[&f], s))
            .collect()
    }

    pub fn is_subcomplex_of(&self, other: &SimplicialComplex) -> bool {
        self.cells.iter().all(|c| other.contains(c))
    }
}

impl fmt::Debug for SimplicialComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SimplicialComplex")
            .field("f_vector", &self.f_vector())
            .field("facets", &self.facets())
            .finish()
    }
}

fn close_downward(cell: &Cell, out: &mut BTreeSet<Cell>) {
    if !out.insert(cell.clone()) {
        return;
    }
    for (f, _) in cell.hyperfaces() {
        close_downward(&f, out);
    }
}

/// Boundary matrix from dimension `k` to dimension `k - 1`, rows indexed by
/// `(k-1)`-cells and columns by `k`-cells. For `k = 0` this is the
/// `0 x n_0` matrix (no augmentation).
pub fn boundary_matrix(x: &SimplicialComplex, k: usize) -> Result<IntMatrix> {
    let max = x.dim().ok_or(Error::EmptyComplex)?;
    if k > max {
        return Err(Error::DimensionOutOfRange { dim: k, max });
    }
    let cols = x.cells_of_dim(k);
    if k == 0 {
        return Ok(IntMatrix::zeros(0, cols.len()));
    }
    let row_offset = x.dim_offset(k - 1);
    let mut m = IntMatrix::zeros(x.cells_of_dim(k - 1).len(), cols.len());
    for (j, tau) in cols.iter().enumerate() {
        for (face, sign) in tau.hyperfaces() {
            let i = x.id_of(&face).expect("complex is face-closed") - row_offset;
            m[(i, j)] = sign.into();
        }
    }
    Ok(m)
}

/// The simplicial chain complex, bases in lexicographic order.
///
/// Panics if the boundary maps do not compose to zero, which would mean the
/// incidence signs are wrong.
pub fn chain_complex(x: &SimplicialComplex) -> Result<ChainComplex> {
    let top = x.dim().ok_or(Error::EmptyComplex)?;
    let bases = (0..=top).map(|k| x.cells_of_dim(k).to_vec()).collect();
    let boundaries = (0..=top)
        .map(|k| boundary_matrix(x, k))
        .collect::<Result<Vec<_>>>()?;
    Ok(ChainComplex::new(bases, boundaries).expect("simplicial boundary must square to zero"))
}

pub fn euler_characteristic(x: &SimplicialComplex) -> i64 {
    x.f_vector()
        .iter()
        .enumerate()
        .map(|(k, &n)| if k % 2 == 0 { n as i64 } else { -(n as i64) })
        .sum()
}

/// First barycentric subdivision together with the cell-to-barycenter map.
///
/// The barycenter of the original cell with id `i` is vertex `i`, so every
/// chain `s_0 < s_1 < ... < s_p` of original cells is already a strictly
/// increasing vertex tuple.
#[derive(Clone, Debug)]
pub struct Subdivision {
    pub original: SimplicialComplex,
    pub complex: SimplicialComplex,
}

impl Subdivision {
    pub fn barycenter(&self, cell: &Cell) -> Option<u32> {
        self.original.id_of(cell).map(|i| i as u32)
    }

    /// Original cell whose barycenter is vertex `v`.
    pub fn cell_of(&self, v: u32) -> Option<&Cell> {
        self.original.cells().get(v as usize)
    }
}

pub fn barycentric_subdivision(x: &SimplicialComplex) -> Subdivision {
    let mut chains = Vec::new();
    for facet in x.facets() {
        let mut perm = facet.vertices().to_vec();
        for_each_permutation(&mut perm, 0, &mut |p| {
            let flag: Vec<u32> = (1..=p.len())
                .map(|n| {
                    let mut prefix = p[..n].to_vec();
                    prefix.sort_unstable();
                    x.id_of(&Cell(prefix)).expect("prefix is a face") as u32
                })
                .collect();
            chains.push(flag);
        });
    }
    let complex =
        SimplicialComplex::from_facets(chains).expect("flags are strictly increasing id tuples");
    Subdivision {
        original: x.clone(),
        complex,
    }
}

fn for_each_permutation(v: &mut Vec<u32>, k: usize, f: &mut dyn FnMut(&[u32])) {
    if k == v.len() {
        f(v);
        return;
    }
    for i in k..v.len() {
        v.swap(k, i);
        for_each_permutation(v, k + 1, f);
        v.swap(k, i);
    }
}

/// Grid vertex `(i, j)` of `Δ^m × Δ^n` as a vertex id.
pub fn grid_vertex(n: usize, i: usize, j: usize) -> u32 {
    (i * (n + 1) + j) as u32
}

/// Staircase triangulation of `Δ^m × Δ^n` on the `(m+1)(n+1)` grid vertices.
///
/// Top cells are the monotone lattice paths from `(0, 0)` to `(m, n)`; grid
/// vertex `(i, j)` is numbered `i(n+1) + j`, which increases along every path.
pub fn product_triangulation(m: usize, n: usize) -> SimplicialComplex {
    let mut facets = Vec::new();
    let mut path = Vec::with_capacity(m + n + 1);
    staircase_paths(m, n, 0, 0, &mut path, &mut facets);
    SimplicialComplex::from_facets(facets).expect("lattice paths are valid cells")
}

fn staircase_paths(
    m: usize,
    n: usize,
    i: usize,
    j: usize,
    path: &mut Vec<u32>,
    out: &mut Vec<Vec<u32>>,
) {
    path.push(grid_vertex(n, i, j));
    if i == m && j == n {
        out.push(path.clone());
    } else {
        if i < m {
            staircase_paths(m, n, i + 1, j, path, out);
        }
        if j < n {
            staircase_paths(m, n, i, j + 1, path, out);
        }
    }
    path.pop();
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    fn c(v: &[u32]) -> Cell {
        Cell::from_sorted(v.to_vec())
    }

    #[test]
    fn closure_of_triangle() {
        let x = SimplicialComplex::from_facets([[0, 1, 2]]).unwrap();
        assert_eq!(x.f_vector(), vec![3, 3, 1]);
        let expected = [
            c(&[0]),
            c(&[1]),
            c(&[2]),
            c(&[0, 1]),
            c(&[0, 2]),
            c(&[1, 2]),
            c(&[0, 1, 2]),
        ];
        assert_eq!(x.cells(), &expected);
    }

    #[test]
    fn closure_of_circle_and_point() {
        let x = SimplicialComplex::from_facets([[0, 1], [1, 2], [0, 2]]).unwrap();
        assert_eq!(x.len(), 6);
        let p = SimplicialComplex::from_facets([[0]]).unwrap();
        assert_eq!(p.cells(), &[c(&[0])]);
    }

    #[test]
    fn facet_errors() {
        let empty: [&[u32]; 2] = [&[0, 1], &[]];
        assert_eq!(
            SimplicialComplex::from_facets(empty),
            Err(Error::EmptyFacet { index: 1 })
        );
        assert_eq!(
            SimplicialComplex::from_facets([[3, 1, 3]]),
            Err(Error::DuplicateVertex {
                index: 0,
                vertex: 3
            })
        );
    }

    #[test]
    fn from_facets_is_idempotent() {
        for (_, x) in corpus::standard() {
            let again = SimplicialComplex::from_facets(
                x.facets().iter().map(|f| f.vertices().to_vec()),
            )
            .unwrap();
            assert_eq!(again, x);
        }
    }

    #[test]
    fn incidence_signs() {
        assert_eq!(incidence(&c(&[0, 1, 2]), &c(&[0, 2])), -1);
        assert_eq!(incidence(&c(&[0, 1, 2]), &c(&[1, 2])), 1);
        assert_eq!(incidence(&c(&[0, 1, 2]), &c(&[0, 1])), 1);
        assert_eq!(incidence(&c(&[0, 1]), &c(&[2])), 0);
        assert_eq!(incidence(&c(&[0, 1, 2]), &c(&[0, 3])), 0);
        assert_eq!(incidence(&c(&[0, 1]), &c(&[0, 1])), 0);
    }

    #[test]
    fn boundary_matrices_of_small_simplices() {
        let d1 = corpus::simplex(1);
        assert_eq!(
            boundary_matrix(&d1, 1).unwrap(),
            IntMatrix::from_rows(&[[-1], [1]])
        );
        assert_eq!(boundary_matrix(&d1, 0).unwrap().shape(), (0, 2));

        let d2 = corpus::simplex(2);
        // rows (0 1), (0 2), (1 2)
        assert_eq!(
            boundary_matrix(&d2, 2).unwrap(),
            IntMatrix::from_rows(&[[1], [-1], [1]])
        );

        let circle = corpus::boundary_of_simplex(2);
        let b = boundary_matrix(&circle, 1).unwrap();
        assert_eq!(b.shape(), (3, 3));
        for j in 0..3 {
            let col = b.column(j);
            assert_eq!(col.iter().filter(|v| **v == (-1).into()).count(), 1);
            assert_eq!(col.iter().filter(|v| **v == 1.into()).count(), 1);
        }
        assert_eq!(
            boundary_matrix(&circle, 2),
            Err(Error::DimensionOutOfRange { dim: 2, max: 1 })
        );
    }

    #[test]
    fn chain_complex_bases() {
        let p = chain_complex(&corpus::simplex(0)).unwrap();
        assert_eq!(p.basis_sizes(), vec![1]);
        let circle = chain_complex(&corpus::boundary_of_simplex(2)).unwrap();
        assert_eq!(circle.basis_sizes(), vec![3, 3]);
        let empty = SimplicialComplex::from_facets(Vec::<Vec<u32>>::new()).unwrap();
        assert_eq!(chain_complex(&empty).unwrap_err(), Error::EmptyComplex);
    }

    #[test]
    fn euler_characteristics() {
        assert_eq!(euler_characteristic(&corpus::simplex(2)), 1);
        assert_eq!(euler_characteristic(&corpus::boundary_of_simplex(4)), 0);
        assert_eq!(euler_characteristic(&corpus::torus7()), 0);
        assert_eq!(euler_characteristic(&corpus::rp2_6()), 1);
        assert_eq!(euler_characteristic(&corpus::klein8()), 0);
    }

    #[test]
    fn subdivision_counts() {
        assert_eq!(
            barycentric_subdivision(&corpus::simplex(1)).complex.f_vector(),
            vec![3, 2]
        );
        // chains in the face poset of the triangle: 7 cells, 12 comparable pairs, 6 full flags
        assert_eq!(
            barycentric_subdivision(&corpus::simplex(2)).complex.f_vector(),
            vec![7, 12, 6]
        );
        assert_eq!(
            barycentric_subdivision(&corpus::boundary_of_simplex(2))
                .complex
                .f_vector(),
            vec![6, 6]
        );
    }

    #[test]
    fn subdivision_barycenters() {
        let x = corpus::simplex(2);
        let sd = barycentric_subdivision(&x);
        let b = sd.barycenter(&c(&[0, 1])).unwrap();
        assert_eq!(sd.cell_of(b), Some(&c(&[0, 1])));
        assert!(sd.complex.contains(&c(&[0, b, 6])));
    }

    #[test]
    fn subdivision_preserves_euler_characteristic() {
        for (_, x) in corpus::standard() {
            let sd = barycentric_subdivision(&x);
            assert_eq!(euler_characteristic(&sd.complex), euler_characteristic(&x));
        }
    }

    #[test]
    fn staircase_products() {
        let sq = product_triangulation(1, 1);
        assert_eq!(sq.f_vector(), vec![4, 5, 2]);
        assert_eq!(sq.facets(), vec![c(&[0, 1, 3]), c(&[0, 2, 3])]);

        let prism = product_triangulation(2, 1);
        assert_eq!(prism.f_vector()[0], 6);
        // C(3, 1) monotone paths
        assert_eq!(prism.cells_of_dim(3).len(), 3);

        for n in 0..4 {
            assert_eq!(product_triangulation(0, n), corpus::simplex(n));
        }
    }

    #[test]
    fn staircase_top_cell_count_is_binomial() {
        fn binom(n: usize, k: usize) -> usize {
            (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
        }
        for m in 0..4 {
            for n in 0..4 {
                let x = product_triangulation(m, n);
                assert_eq!(x.f_vector()[0], (m + 1) * (n + 1));
                assert_eq!(x.cells_of_dim(m + n).len(), binom(m + n, m));
                assert_eq!(x.facets().len(), binom(m + n, m));
            }
        }
    }
}
