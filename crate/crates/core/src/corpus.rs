//! Standard test complexes.

use crate::complex::{product_triangulation, SimplicialComplex};

/// The full simplex on vertices `0..=n`.
pub fn simplex(n: usize) -> SimplicialComplex {
    let facet: Vec<u32> = (0..=n as u32).collect();
    SimplicialComplex::from_facets([facet]).expect("valid simplex")
}

/// The boundary of the `n`-simplex, a triangulated `(n-1)`-sphere (`n >= 1`).
pub fn boundary_of_simplex(n: usize) -> SimplicialComplex {
    assert!(n >= 1, "the boundary of a point is empty");
    let facets = (0..=n as u32).map(|skip| (0..=n as u32).filter(|&v| v != skip).collect::<Vec<_>>());
    SimplicialComplex::from_facets(facets).expect("valid sphere")
}

/// Seven-vertex torus: triangles `{i, i+1, i+3}` and `{i, i+2, i+3}` mod 7.
pub fn torus7() -> SimplicialComplex {
    let facets = (0..7u32).flat_map(|i| {
        [
            vec![i, (i + 1) % 7, (i + 3) % 7],
            vec![i, (i + 2) % 7, (i + 3) % 7],
        ]
    });
    SimplicialComplex::from_facets(facets).expect("valid torus")
}

/// Six-vertex real projective plane.
pub fn rp2_6() -> SimplicialComplex {
    SimplicialComplex::from_facets([
        [0, 1, 2],
        [0, 2, 3],
        [0, 3, 4],
        [0, 4, 5],
        [0, 1, 5],
        [1, 2, 4],
        [2, 3, 5],
        [1, 3, 4],
        [2, 4, 5],
        [1, 3, 5],
    ])
    .expect("valid projective plane")
}

/// Eight-vertex Klein bottle.
pub fn klein8() -> SimplicialComplex {
    SimplicialComplex::from_facets([
        [0, 2, 3],
        [0, 2, 6],
        [0, 3, 4],
        [0, 4, 5],
        [0, 5, 6],
        [1, 3, 4],
        [1, 3, 5],
        [1, 4, 7],
        [1, 5, 7],
        [2, 3, 7],
        [2, 4, 5],
        [2, 4, 6],
        [2, 5, 7],
        [3, 5, 6],
        [3, 6, 7],
        [4, 6, 7],
    ])
    .expect("valid Klein bottle")
}

/// Named corpus: simplices and sphere boundaries up to dimension 4, the
/// closed surfaces, and a few staircase products.
pub fn standard() -> Vec<(String, SimplicialComplex)> {
    let mut out = Vec::new();
    for n in 0..=4 {
        out.push((format!("simplex{n}"), simplex(n)));
    }
    for n in 1..=4 {
        out.push((format!("sphere_boundary{n}"), boundary_of_simplex(n)));
    }
    out.push(("torus7".into(), torus7()));
    out.push(("rp2_6".into(), rp2_6()));
    out.push(("klein8".into(), klein8()));
    for (m, n) in [(1, 1), (2, 1), (2, 2)] {
        out.push((format!("product{m}x{n}"), product_triangulation(m, n)));
    }
    out
}
