#![allow(dead_code)]

use morsekit::hasse::random_morse_matching;
use morsekit::{
    chain_complex, homology, thom_smale_complex, Cell, HasseDiagram, HomologySummary, Matching, SimplicialComplex,
};
use rand::Rng;

pub fn c(v: &[u32]) -> Cell {
    Cell::new(v.to_vec()).unwrap()
}

pub fn simplicial_homology(x: &SimplicialComplex) -> HomologySummary {
    homology(&chain_complex(x).unwrap()).unwrap().trimmed()
}

pub fn morse_homology(h: &HasseDiagram, m: &Matching) -> HomologySummary {
    homology(thom_smale_complex(h, m).unwrap().chain()).unwrap().trimmed()
}

/// Greedy Morse matching on a shuffled order, then each pair dropped with
/// probability one half. Sub-matchings of Morse matchings stay Morse.
pub fn random_sparse_morse_matching<R: Rng>(h: &HasseDiagram, rng: &mut R) -> Matching {
    let full = random_morse_matching(h, rng);
    if rng.gen_bool(0.5) {
        return full;
    }
    full.edges().filter(|_| rng.gen_bool(0.5)).cloned().collect()
}
