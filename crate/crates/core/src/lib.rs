//! Discrete Morse theory on finite simplicial complexes.
//!
//! Build a [`SimplicialComplex`] from facets, take its [`HasseDiagram`],
//! choose a [`Matching`], and compare the Morse complex
//! ([`thom_smale_complex`]) with the simplicial chain complex, either
//! directly through [`homology`] or by Gaussian elimination.

pub mod chain;
pub mod complex;
pub mod corpus;
pub mod elimination;
pub mod error;
pub mod euler;
pub mod hasse;
pub mod homology;
pub mod io;
pub mod matrix;
pub mod morse;

pub use chain::ChainComplex;
pub use complex::{
    barycentric_subdivision, boundary_matrix, chain_complex, euler_characteristic, incidence,
    product_triangulation, Cell, SimplicialComplex, Subdivision,
};
pub use elimination::{
    all_orders_agree, eliminate_sequence, gaussian_eliminate, morse_iff_all_orders, EliminationError,
    EliminationStep, EliminationTrace, OrderOptions, OrdersVerdict,
};
pub use error::{Error, Result};
pub use euler::{
    boundary_zero_chain, complete_matching, euler_chain_from_matching, homologous, reroute_along_vpath,
    EulerChain, Segment,
};
pub use hasse::{
    critical_cells, find_closed_vpath, find_collapse, greedy_morse_matching, has_closed_vpath_bruteforce,
    hasse, is_morse, validate_matching, Edge, HasseDiagram, Matching, MatchingViolation, VectorField,
};
pub use homology::{cycle_class, homology, smith_normal_form, CycleClass, HomologySummary, SmithForm};
pub use matrix::IntMatrix;
pub use morse::{
    differential_entry, multiplicity, reorient, thom_smale_complex, vpaths, MorseComplex, Orientation, VPath,
};
