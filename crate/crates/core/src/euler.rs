//! Complete matchings and Euler chains.
//!
//! An Euler chain lives on the 1-skeleton of the barycentric subdivision: a
//! segment joins the barycenters of two comparable cells, and the boundary of
//! the chain must be `Σ (−1)^{dim σ} a_σ` over all cells.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::complex::{chain_complex, Cell, Subdivision};
use crate::error::{Error, Result};
use crate::hasse::{Edge, HasseDiagram, Matching, VectorField};
use crate::homology::{cycle_class, CycleClass};
use crate::morse::VPath;

/// Maximum matching of the Hasse diagram, seen as a bipartite graph between
/// even- and odd-dimensional cells, by augmenting paths.
pub fn maximum_matching(h: &HasseDiagram) -> Matching {
    let n = h.num_vertices();
    let neighbours: Vec<Vec<usize>> = (0..n)
        .map(|v| {
            let mut adj: Vec<usize> = h
                .faces(v)
                .iter()
                .map(|&(f, _)| f)
                .chain(h.cofaces(v).iter().copied())
                .collect();
            adj.sort_unstable();
            adj
        })
        .collect();
    let mut mate: Vec<Option<usize>> = vec![None; n];

    fn augment(
        v: usize,
        neighbours: &[Vec<usize>],
        mate: &mut [Option<usize>],
        visited: &mut [bool],
    ) -> bool {
        for &w in &neighbours[v] {
            if visited[w] {
                continue;
            }
            visited[w] = true;
            let free = match mate[w] {
                None => true,
                Some(u) => augment(u, neighbours, mate, visited),
            };
            if free {
                mate[w] = Some(v);
                mate[v] = Some(w);
                return true;
            }
        }
        false
    }

    for v in (0..n).filter(|&v| h.dim(v).is_multiple_of(2)) {
        if mate[v].is_none() {
            let mut visited = vec![false; n];
            augment(v, &neighbours, &mut mate, &mut visited);
        }
    }
    (0..n)
        .filter_map(|v| match mate[v] {
            Some(w) if h.dim(w) > h.dim(v) => Some(h.edge(v, w)),
            _ => None,
        })
        .collect()
}

/// A matching covering every cell, if the diagram has one.
pub fn complete_matching(h: &HasseDiagram) -> Option<Matching> {
    let even = (0..h.num_vertices()).filter(|&v| h.dim(v).is_multiple_of(2)).count();
    if 2 * even != h.num_vertices() {
        return None;
    }
    let m = maximum_matching(h);
    (2 * m.len() == h.num_vertices()).then_some(m)
}

fn ordered_edge(h: &HasseDiagram, a: usize, b: usize) -> Edge {
    if h.dim(a) < h.dim(b) {
        h.edge(a, b)
    } else {
        h.edge(b, a)
    }
}

/// Another complete matching, obtained by exchanging `m` along one
/// alternating cycle (non-matched edge from an even cell, then the matched
/// edge back to an even cell). `None` if no such cycle exists.
pub fn swap_alternating_cycle(h: &HasseDiagram, m: &Matching) -> Result<Option<Matching>> {
    let field = VectorField::new(h, m)?;
    let n = h.num_vertices();
    if (0..n).any(|v| field.is_critical(v)) {
        return Err(Error::IncompleteMatching((0..n).filter(|&v| field.is_critical(v)).count()));
    }
    let neighbours = |v: usize| -> Vec<usize> {
        let mut adj: Vec<usize> = h
            .faces(v)
            .iter()
            .map(|&(f, _)| f)
            .chain(h.cofaces(v).iter().copied())
            .filter(|&w| field.partner(v) != Some(w))
            .collect();
        adj.sort_unstable();
        adj
    };
    // iterative DFS over even cells; an edge e -> partner(o) for every
    // non-matched neighbour o of e
    let mut state = vec![0u8; n];
    let mut via = vec![usize::MAX; n];
    for root in (0..n).filter(|&v| h.dim(v).is_multiple_of(2)) {
        if state[root] != 0 {
            continue;
        }
        let mut stack: Vec<(usize, Vec<usize>, usize)> = vec![(root, neighbours(root), 0)];
        state[root] = 1;
        while let Some((e, adj, i)) = stack.last_mut() {
            let e = *e;
            if *i == adj.len() {
                state[e] = 2;
                stack.pop();
                continue;
            }
            let o = adj[*i];
            *i += 1;
            let next = field.partner(o).expect("complete");
            match state[next] {
                0 => {
                    state[next] = 1;
                    via[next] = o;
                    stack.push((next, neighbours(next), 0));
                }
                1 => {
                    // cycle: next -> ... -> e -> o -> next
                    let mut out = m.clone();
                    let pos = stack.iter().position(|(v, _, _)| *v == next).expect("on stack");
                    let cycle: Vec<usize> = stack[pos..].iter().map(|(v, _, _)| *v).collect();
                    for (k, &v) in cycle.iter().enumerate() {
                        let odd = if k + 1 < cycle.len() { via[cycle[k + 1]] } else { o };
                        let p = field.partner(odd).expect("complete");
                        out.remove(&ordered_edge(h, p, odd));
                        out.insert(ordered_edge(h, v, odd));
                    }
                    VectorField::new(h, &out)?;
                    return Ok(Some(out));
                }
                _ => {}
            }
        }
    }
    Ok(None)
}

/// Rewires `m` along a V-path `s_0, ..., s_r` from a hyperface of the critical
/// cell `tau` to a critical cell `s_r`: `s_0` is matched with `tau` and each
/// `s_i` with `V(s_{i-1})`. Afterwards neither `tau` nor `s_r` is critical.
pub fn reroute_along_vpath(h: &HasseDiagram, m: &Matching, tau: &Cell, path: &VPath) -> Result<Matching> {
    let field = VectorField::new(h, m)?;
    let t = h.require(tau)?;
    let ids = path
        .cells()
        .iter()
        .map(|c| h.require(c))
        .collect::<Result<Vec<_>>>()?;
    if !h.is_edge(ids[0], t) {
        return Err(Error::InvalidPath(format!("{} is not a hyperface of {tau}", path.start())));
    }
    if let Some(p) = field.partner(t) {
        return Err(Error::RerouteConflict(format!(
            "{tau} already belongs to the edge with {}",
            h.cell(p)
        )));
    }
    let last = *ids.last().expect("nonempty path");
    if !field.is_critical(last) {
        return Err(Error::RerouteConflict(format!("path endpoint {} is not critical", path.end())));
    }
    for w in ids.windows(2) {
        let ok = w[0] != w[1] && field.up(w[0]).is_some_and(|up| h.is_edge(w[1], up));
        if !ok {
            return Err(Error::InvalidPath(format!("{} -> {}", h.cell(w[0]), h.cell(w[1]))));
        }
    }

    let mut out = m.clone();
    for &s in &ids[..ids.len() - 1] {
        let up = field.up(s).expect("checked above");
        out.remove(&h.edge(s, up));
    }
    out.insert(h.edge(ids[0], t));
    for w in ids.windows(2) {
        out.insert(h.edge(w[1], field.up(w[0]).expect("checked above")));
    }
    VectorField::new(h, &out)?;
    Ok(out)
}

/// Local fix for a tetrahedron `ABCD` coned from the critical vertex `A`
/// (`apex`): replaces `(B, AB), (BC, ABC), (BCD, ABCD)` by
/// `(A, AB), (B, BC), (ABC, ABCD)`, which leaves `BCD` critical instead of `A`.
/// `B` and `C` are read off the current matching.
pub fn cone_rewire(h: &HasseDiagram, m: &Matching, apex: u32, tetrahedron: &Cell) -> Result<Matching> {
    let field = VectorField::new(h, m)?;
    let conflict = |msg: String| Error::RerouteConflict(msg);
    if tetrahedron.dim() != 3 || !tetrahedron.vertices().contains(&apex) {
        return Err(conflict(format!("{tetrahedron} is not a tetrahedron on apex {apex}")));
    }
    let a = Cell::vertex(apex);
    let id = |c: &Cell| h.require(c);
    if !field.is_critical(id(&a)?) {
        return Err(conflict(format!("apex {a} is not critical")));
    }
    let without = |c: &Cell, v: u32| Cell::from_sorted(c.vertices().iter().copied().filter(|&w| w != v).collect());
    let join = |c: &Cell, v: u32| {
        let mut vs = c.vertices().to_vec();
        vs.push(v);
        Cell::new(vs).expect("distinct vertices")
    };
    let bcd = without(tetrahedron, apex);
    if field.partner(id(&bcd)?) != Some(id(tetrahedron)?) {
        return Err(conflict(format!("{bcd} is not matched with {tetrahedron}")));
    }
    // B: the base vertex matched with its edge to the apex
    let b = bcd
        .vertices()
        .iter()
        .copied()
        .find(|&v| {
            let (bv, ab) = (Cell::vertex(v), join(&Cell::vertex(v), apex));
            matches!((id(&bv), id(&ab)), (Ok(x), Ok(y)) if field.partner(x) == Some(y))
        })
        .ok_or_else(|| conflict(format!("no base vertex of {bcd} is matched towards {a}")))?;
    let c = bcd
        .vertices()
        .iter()
        .copied()
        .filter(|&v| v != b)
        .find(|&v| {
            let bc = Cell::new(vec![b, v]).expect("distinct");
            let abc = join(&bc, apex);
            matches!((id(&bc), id(&abc)), (Ok(x), Ok(y)) if field.partner(x) == Some(y))
        })
        .ok_or_else(|| conflict(format!("no edge of {bcd} through {b} is matched towards {a}")))?;
    let bv = Cell::vertex(b);
    let ab = join(&bv, apex);
    let bc = Cell::new(vec![b, c]).expect("distinct");
    let abc = join(&bc, apex);

    let mut out = m.clone();
    out.remove(&Edge::new(bv.clone(), ab.clone()));
    out.remove(&Edge::new(bc.clone(), abc.clone()));
    out.remove(&Edge::new(bcd, tetrahedron.clone()));
    out.insert(Edge::new(a, ab));
    out.insert(Edge::new(bv, bc));
    out.insert(Edge::new(abc, tetrahedron.clone()));
    VectorField::new(h, &out)?;
    Ok(out)
}

/// An oriented segment between two barycenters, named by their cells.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Segment {
    pub from: Cell,
    pub to: Cell,
    pub multiplicity: i64,
}

impl fmt::Debug for Segment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}·[{} -> {}]", self.multiplicity, self.from, self.to)
    }
}

/// A 1-chain on the barycentric 1-skeleton.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EulerChain {
    pub segments: Vec<Segment>,
}

impl EulerChain {
    pub fn push(&mut self, from: Cell, to: Cell, multiplicity: i64) {
        self.segments.push(Segment { from, to, multiplicity });
    }

    /// Appends the closed loop through the given cells (consecutive cells,
    /// and the last and first, must be comparable).
    pub fn add_loop(&mut self, cells: &[Cell]) {
        for (i, a) in cells.iter().enumerate() {
            let b = &cells[(i + 1) % cells.len()];
            self.push(a.clone(), b.clone(), 1);
        }
    }

    pub fn difference(&self, other: &EulerChain) -> EulerChain {
        let mut segments = self.segments.clone();
        segments.extend(other.segments.iter().map(|s| Segment {
            multiplicity: -s.multiplicity,
            ..s.clone()
        }));
        EulerChain { segments }
    }
}

/// Orients every pair of a complete matching from its odd-dimensional cell to
/// its even-dimensional cell.
pub fn euler_chain_from_matching(sd: &Subdivision, h: &HasseDiagram, m: &Matching) -> Result<EulerChain> {
    let field = VectorField::new(h, m)?;
    let unmatched = (0..h.num_vertices()).filter(|&v| field.is_critical(v)).count();
    if unmatched > 0 {
        return Err(Error::IncompleteMatching(unmatched));
    }
    let mut chain = EulerChain::default();
    for e in m {
        let (from, to) = if e.lower.dim() % 2 == 1 {
            (e.lower.clone(), e.upper.clone())
        } else {
            (e.upper.clone(), e.lower.clone())
        };
        chain.push(from, to, 1);
    }
    assert_eq!(
        boundary_zero_chain(sd, &chain)?,
        euler_boundary(sd),
        "Euler chain boundary identity"
    );
    Ok(chain)
}

/// `Σ (−1)^{dim σ} a_σ`, keyed by barycenter vertex.
pub fn euler_boundary(sd: &Subdivision) -> BTreeMap<u32, i64> {
    sd.original
        .cells()
        .iter()
        .map(|c| {
            let sign = if c.dim() % 2 == 0 { 1 } else { -1 };
            (sd.barycenter(c).expect("own cell"), sign)
        })
        .collect()
}

/// Formal boundary `Σ mult · (to − from)` over barycenter vertices; zero
/// coefficients are dropped.
pub fn boundary_zero_chain(sd: &Subdivision, xi: &EulerChain) -> Result<BTreeMap<u32, i64>> {
    let mut out = BTreeMap::new();
    for s in &xi.segments {
        let from = sd.barycenter(&s.from).ok_or_else(|| Error::UnknownCell(s.from.clone()))?;
        let to = sd.barycenter(&s.to).ok_or_else(|| Error::UnknownCell(s.to.clone()))?;
        *out.entry(to).or_insert(0) += s.multiplicity;
        *out.entry(from).or_insert(0) -= s.multiplicity;
    }
    out.retain(|_, v| *v != 0);
    Ok(out)
}

/// Coefficients of a chain over the subdivision's edge basis. A segment from
/// `a_σ` to `a_τ` is the edge `{a_σ, a_τ}`, with sign `+1` when it runs from
/// the smaller barycenter id to the larger.
pub fn subdivision_chain(sd: &Subdivision, xi: &EulerChain) -> Result<Vec<BigInt>> {
    let basis = sd.complex.cells_of_dim(1);
    let offset = sd.complex.dim_offset(1);
    let mut z = vec![BigInt::zero(); basis.len()];
    for s in &xi.segments {
        let a = sd.barycenter(&s.from).ok_or_else(|| Error::UnknownCell(s.from.clone()))?;
        let b = sd.barycenter(&s.to).ok_or_else(|| Error::UnknownCell(s.to.clone()))?;
        let comparable = s.from != s.to && (s.from.is_face_of(&s.to) || s.to.is_face_of(&s.from));
        if !comparable {
            return Err(Error::NotASubdivisionEdge(s.from.clone(), s.to.clone()));
        }
        let (edge, sign) = if a < b {
            (Cell::from_sorted(vec![a, b]), 1)
        } else {
            (Cell::from_sorted(vec![b, a]), -1)
        };
        let idx = sd.complex.id_of(&edge).expect("comparable cells span a subdivision edge") - offset;
        z[idx] += BigInt::from(sign * s.multiplicity);
    }
    Ok(z)
}

/// Class of `ξ − η` in `H_1`. Fails if the boundaries differ.
pub fn difference_class(sd: &Subdivision, xi: &EulerChain, eta: &EulerChain) -> Result<CycleClass> {
    if boundary_zero_chain(sd, xi)? != boundary_zero_chain(sd, eta)? {
        return Err(Error::BoundaryMismatch);
    }
    let z = subdivision_chain(sd, &xi.difference(eta))?;
    let c = chain_complex(&sd.complex)?;
    cycle_class(&c, 1, &z)
}

/// Whether `ξ − η` is a boundary.
pub fn homologous(sd: &Subdivision, xi: &EulerChain, eta: &EulerChain) -> Result<bool> {
    Ok(difference_class(sd, xi, eta)?.is_trivial())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::barycentric_subdivision;
    use crate::corpus;
    use crate::hasse::{greedy_morse_matching, hasse, validate_matching};
    use crate::morse::vpaths;

    fn c(v: &[u32]) -> Cell {
        Cell::from_sorted(v.to_vec())
    }

    fn e(lo: &[u32], up: &[u32]) -> Edge {
        Edge::new(c(lo), c(up))
    }

    #[test]
    fn complete_matchings() {
        let circle = hasse(&corpus::boundary_of_simplex(2));
        let m = complete_matching(&circle).unwrap();
        assert_eq!(m.len(), 3);
        assert_eq!(validate_matching(&circle, &m), Ok(()));

        assert_eq!(complete_matching(&hasse(&corpus::simplex(2))), None);

        let s3 = hasse(&corpus::boundary_of_simplex(4));
        let m = complete_matching(&s3).unwrap();
        assert_eq!(m.len(), 15);
        assert_eq!(validate_matching(&s3, &m), Ok(()));
    }

    #[test]
    fn alternating_cycle_gives_another_complete_matching() {
        let h = hasse(&corpus::boundary_of_simplex(4));
        let m = complete_matching(&h).unwrap();
        let other = swap_alternating_cycle(&h, &m).unwrap().unwrap();
        assert_ne!(other, m);
        assert_eq!(other.len(), 15);
        assert_eq!(validate_matching(&h, &other), Ok(()));

        let circle = hasse(&corpus::boundary_of_simplex(2));
        let m = complete_matching(&circle).unwrap();
        let other = swap_alternating_cycle(&circle, &m).unwrap().unwrap();
        assert!(m.edges().all(|e| !other.contains(e)));
    }

    #[test]
    fn no_complete_matching_on_spheres_of_even_dimension() {
        assert_eq!(complete_matching(&hasse(&corpus::boundary_of_simplex(3))), None);
        assert!(maximum_matching(&hasse(&corpus::boundary_of_simplex(3))).len() < 7);
    }

    #[test]
    fn reroute_on_circle() {
        let h = hasse(&corpus::boundary_of_simplex(2));
        let m: Matching = [e(&[0], &[0, 1]), e(&[1], &[1, 2])].into_iter().collect();
        let path = vpaths(&h, &m, &c(&[0]), &c(&[2])).unwrap().remove(0);
        let r = reroute_along_vpath(&h, &m, &c(&[0, 2]), &path).unwrap();
        let expected: Matching = [e(&[0], &[0, 2]), e(&[1], &[0, 1]), e(&[2], &[1, 2])]
            .into_iter()
            .collect();
        assert_eq!(r, expected);
        assert_eq!(complete_matching(&h).map(|m| m.len()), Some(r.len()));

        // stationary path: just pair the endpoint with tau
        let stationary = VPath::stationary(c(&[2]));
        let r = reroute_along_vpath(&h, &m, &c(&[0, 2]), &stationary).unwrap();
        assert!(r.contains(&e(&[2], &[0, 2])));
        assert_eq!(r.len(), 3);

        // a second reroute towards the same (no longer critical) cell is refused
        let again = reroute_along_vpath(&h, &r, &c(&[0, 2]), &stationary);
        assert!(matches!(again, Err(Error::RerouteConflict(_))));
    }

    #[test]
    fn cone_rewire_on_tetrahedron() {
        // collapse of ABCD onto A = 0: (BCD, ABCD), (BC, ABC), (B, AB) plus the rest
        let x = corpus::simplex(3);
        let h = hasse(&x);
        let m: Matching = [
            e(&[1, 2, 3], &[0, 1, 2, 3]),
            e(&[1, 2], &[0, 1, 2]),
            e(&[1], &[0, 1]),
            e(&[2], &[0, 2]),
            e(&[3], &[0, 3]),
            e(&[1, 3], &[0, 1, 3]),
            e(&[2, 3], &[0, 2, 3]),
        ]
        .into_iter()
        .collect();
        assert!(crate::hasse::is_morse(&h, &m).unwrap());
        let r = cone_rewire(&h, &m, 0, &c(&[0, 1, 2, 3])).unwrap();
        assert!(r.contains(&e(&[0], &[0, 1])));
        assert!(r.contains(&e(&[1], &[1, 2])));
        assert!(r.contains(&e(&[0, 1, 2], &[0, 1, 2, 3])));
        let crit = crate::hasse::critical_cells(&h, &r).unwrap().concat();
        assert_eq!(crit, vec![c(&[1, 2, 3])]);
        assert!(cone_rewire(&h, &r, 0, &c(&[0, 1, 2, 3])).is_err());
    }

    #[test]
    fn euler_chains_on_circle() {
        let x = corpus::boundary_of_simplex(2);
        let h = hasse(&x);
        let sd = barycentric_subdivision(&x);
        let cyclic: Matching = [e(&[0], &[0, 1]), e(&[1], &[1, 2]), e(&[2], &[0, 2])]
            .into_iter()
            .collect();
        let xi = euler_chain_from_matching(&sd, &h, &cyclic).unwrap();
        assert_eq!(xi.segments.len(), 3);
        assert!(xi.segments.iter().all(|s| s.from.dim() == 1 && s.to.dim() == 0));
        assert_eq!(boundary_zero_chain(&sd, &xi).unwrap(), euler_boundary(&sd));

        let partial: Matching = [e(&[0], &[0, 1])].into_iter().collect();
        assert_eq!(
            euler_chain_from_matching(&sd, &h, &partial),
            Err(Error::IncompleteMatching(4))
        );
    }

    #[test]
    fn zero_chains() {
        let x = corpus::boundary_of_simplex(2);
        let sd = barycentric_subdivision(&x);
        let mut one = EulerChain::default();
        one.push(c(&[0]), c(&[0, 1]), 1);
        let (a, b) = (sd.barycenter(&c(&[0])).unwrap(), sd.barycenter(&c(&[0, 1])).unwrap());
        assert_eq!(boundary_zero_chain(&sd, &one).unwrap(), BTreeMap::from([(a, -1), (b, 1)]));

        let mut lp = EulerChain::default();
        lp.add_loop(&[c(&[0]), c(&[0, 1]), c(&[1]), c(&[1, 2])]);
        // not closed through comparable cells at the end, but the formal boundary still vanishes
        assert!(boundary_zero_chain(&sd, &lp).unwrap().is_empty());

        let mut bad = EulerChain::default();
        bad.push(c(&[9]), c(&[0]), 1);
        assert_eq!(boundary_zero_chain(&sd, &bad), Err(Error::UnknownCell(c(&[9]))));
    }

    #[test]
    fn homologous_on_circle() {
        let x = corpus::boundary_of_simplex(2);
        let h = hasse(&x);
        let sd = barycentric_subdivision(&x);
        let forward: Matching = [e(&[0], &[0, 1]), e(&[1], &[1, 2]), e(&[2], &[0, 2])]
            .into_iter()
            .collect();
        let backward: Matching = [e(&[0], &[0, 2]), e(&[1], &[0, 1]), e(&[2], &[1, 2])]
            .into_iter()
            .collect();
        let xi = euler_chain_from_matching(&sd, &h, &forward).unwrap();
        let eta = euler_chain_from_matching(&sd, &h, &backward).unwrap();
        assert!(homologous(&sd, &xi, &xi).unwrap());
        // the two complete matchings differ by the fundamental loop of the circle
        assert!(!homologous(&sd, &xi, &eta).unwrap());
        assert!(!homologous(&sd, &eta, &xi).unwrap());

        let mut shifted = xi.clone();
        shifted.push(c(&[0]), c(&[1]), 1);
        assert_eq!(homologous(&sd, &xi, &shifted), Err(Error::BoundaryMismatch));
    }

    #[test]
    fn rerouted_greedy_matching_is_complete_on_circle() {
        let x = corpus::boundary_of_simplex(2);
        let h = hasse(&x);
        let m = greedy_morse_matching(&h);
        let crit = crate::hasse::critical_cells(&h, &m).unwrap();
        let (v, t) = (crit[0][0].clone(), crit[1][0].clone());
        let start = t
            .hyperfaces()
            .map(|(f, _)| f)
            .find_map(|f| vpaths(&h, &m, &f, &v).unwrap().into_iter().next())
            .unwrap();
        let r = reroute_along_vpath(&h, &m, &t, &start).unwrap();
        assert_eq!(r.len(), 3);
    }
}
