//! Text formats: facet lists, matchings and Euler chains.
//!
//! Facet lists hold one facet per line as whitespace-separated labels, with
//! `#` comments and blank lines skipped. Matchings hold one `σ ; τ` pair per
//! line and Euler chains one `from ; to` segment per line, with an optional
//! third `; multiplicity` field.

use std::collections::HashMap;

use crate::complex::{Cell, SimplicialComplex};
use crate::error::{Error, Result};
use crate::euler::{EulerChain, Segment};
use crate::hasse::{Edge, Matching};

/// Maps external vertex labels to vertex ids.
///
/// If every label in a facet list is a non-negative integer the labels are
/// used as ids directly. Otherwise ids are assigned by first appearance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SymbolTable {
    Numeric,
    Named { names: Vec<String>, ids: HashMap<String, u32> },
}

impl SymbolTable {
    pub fn id(&self, label: &str) -> Option<u32> {
        match self {
            SymbolTable::Numeric => label.parse().ok(),
            SymbolTable::Named { ids, .. } => ids.get(label).copied(),
        }
    }

    pub fn label(&self, id: u32) -> String {
        match self {
            SymbolTable::Numeric => id.to_string(),
            SymbolTable::Named { names, .. } => names
                .get(id as usize)
                .cloned()
                .unwrap_or_else(|| format!("#{id}")),
        }
    }

    pub fn format_cell(&self, cell: &Cell) -> String {
        cell.vertices()
            .iter()
            .map(|&v| self.label(v))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

#[derive(Clone, Debug)]
pub struct ParsedComplex {
    pub complex: SimplicialComplex,
    pub symbols: SymbolTable,
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.trim();
        (!l.is_empty() && !l.starts_with('#')).then_some((i + 1, l))
    })
}

fn parse_error(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

pub fn parse_facets(text: &str) -> Result<ParsedComplex> {
    let rows: Vec<(usize, Vec<&str>)> = content_lines(text)
        .map(|(n, l)| (n, l.split_whitespace().collect()))
        .collect();
    let numeric = rows.iter().flat_map(|(_, r)| r).all(|l| l.parse::<u32>().is_ok());
    let mut symbols = if numeric {
        SymbolTable::Numeric
    } else {
        SymbolTable::Named { names: Vec::new(), ids: HashMap::new() }
    };
    let mut facets = Vec::with_capacity(rows.len());
    for (line, labels) in rows {
        let vertices: Vec<u32> = labels
            .iter()
            .map(|l| match &mut symbols {
                SymbolTable::Numeric => l.parse().expect("checked numeric"),
                SymbolTable::Named { names, ids } => *ids.entry(l.to_string()).or_insert_with(|| {
                    names.push(l.to_string());
                    (names.len() - 1) as u32
                }),
            })
            .collect();
        let cell = Cell::new(vertices).map_err(|e| parse_error(line, e.to_string()))?;
        facets.push(cell);
    }
    if facets.is_empty() {
        return Err(parse_error(0, "no facets"));
    }
    let complex = SimplicialComplex::from_facets(facets)?;
    Ok(ParsedComplex { complex, symbols })
}

pub fn format_facets(x: &SimplicialComplex, symbols: &SymbolTable) -> String {
    x.facets()
        .iter()
        .map(|f| symbols.format_cell(f) + "\n")
        .collect()
}

fn parse_cell(line: usize, field: &str, symbols: &SymbolTable, x: &SimplicialComplex) -> Result<Cell> {
    let vertices = field
        .split_whitespace()
        .map(|l| symbols.id(l).ok_or_else(|| parse_error(line, format!("unknown vertex label {l:?}"))))
        .collect::<Result<Vec<_>>>()?;
    let cell = Cell::new(vertices).map_err(|e| parse_error(line, e.to_string()))?;
    if !x.contains(&cell) {
        return Err(parse_error(line, format!("{cell} is not a cell of the complex")));
    }
    Ok(cell)
}

/// Pairs in listed order. Whether they form a matching is checked later.
pub fn parse_matching(text: &str, parsed: &ParsedComplex) -> Result<Vec<Edge>> {
    content_lines(text)
        .map(|(line, l)| {
            let fields: Vec<&str> = l.split(';').collect();
            let [lo, up] = fields[..] else {
                return Err(parse_error(line, "expected \"σ ; τ\""));
            };
            let lower = parse_cell(line, lo, &parsed.symbols, &parsed.complex)?;
            let upper = parse_cell(line, up, &parsed.symbols, &parsed.complex)?;
            if upper.dim() != lower.dim() + 1 || !lower.is_face_of(&upper) {
                return Err(parse_error(line, format!("{lower} is not a hyperface of {upper}")));
            }
            Ok(Edge::new(lower, upper))
        })
        .collect()
}

pub fn format_matching<'a>(edges: impl IntoIterator<Item = &'a Edge>, symbols: &SymbolTable) -> String {
    edges
        .into_iter()
        .map(|e| format!("{} ; {}\n", symbols.format_cell(&e.lower), symbols.format_cell(&e.upper)))
        .collect()
}

pub fn matching_from_edges(edges: &[Edge]) -> Matching {
    edges.iter().cloned().collect()
}

pub fn parse_euler_chain(text: &str, parsed: &ParsedComplex) -> Result<EulerChain> {
    let segments = content_lines(text)
        .map(|(line, l)| {
            let fields: Vec<&str> = l.split(';').collect();
            let (from, to, mult) = match fields[..] {
                [a, b] => (a, b, 1),
                [a, b, k] => {
                    let k = k
                        .trim()
                        .parse()
                        .map_err(|_| parse_error(line, format!("bad multiplicity {:?}", k.trim())))?;
                    (a, b, k)
                }
                _ => return Err(parse_error(line, "expected \"from ; to\"")),
            };
            Ok(Segment {
                from: parse_cell(line, from, &parsed.symbols, &parsed.complex)?,
                to: parse_cell(line, to, &parsed.symbols, &parsed.complex)?,
                multiplicity: mult,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(EulerChain { segments })
}

pub fn format_euler_chain(xi: &EulerChain, symbols: &SymbolTable) -> String {
    xi.segments
        .iter()
        .map(|s| {
            let (a, b) = (symbols.format_cell(&s.from), symbols.format_cell(&s.to));
            if s.multiplicity == 1 {
                format!("{a} ; {b}\n")
            } else {
                format!("{a} ; {b} ; {}\n", s.multiplicity)
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn numeric_facets() {
        let p = parse_facets("# circle\n0 1\n\n1 2\n  2 0  \n").unwrap();
        assert_eq!(p.symbols, SymbolTable::Numeric);
        assert_eq!(p.complex.f_vector(), vec![3, 3]);
        assert_eq!(p.complex.cells(), corpus::boundary_of_simplex(2).cells());
    }

    #[test]
    fn named_facets() {
        let p = parse_facets("a b c\nb c d\n").unwrap();
        assert_eq!(p.symbols.id("d"), Some(3));
        assert_eq!(p.symbols.label(1), "b");
        assert_eq!(p.complex.f_vector(), vec![4, 5, 2]);
        let again = parse_facets(&format_facets(&p.complex, &p.symbols)).unwrap();
        assert_eq!(again.complex.cells(), p.complex.cells());
    }

    #[test]
    fn malformed_lines_report_location() {
        match parse_facets("0 1\n# ok\n2 2\n") {
            Err(Error::Parse { line: 3, .. }) => {}
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_facets("# nothing\n"), Err(Error::Parse { .. })));
    }

    #[test]
    fn matchings_round_trip() {
        let p = parse_facets("0 1\n1 2\n0 2\n").unwrap();
        let edges = parse_matching("0 ; 0 1\n1 ; 1 2\n2 ; 0 2\n", &p).unwrap();
        assert_eq!(edges.len(), 3);
        assert_eq!(edges[2], Edge::new(Cell::vertex(2), Cell::from_sorted(vec![0, 2])));
        let text = format_matching(&edges, &p.symbols);
        assert_eq!(parse_matching(&text, &p).unwrap(), edges);

        assert!(matches!(parse_matching("0 ; 1 2\n", &p), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_matching("\n0 ; 0 3\n", &p), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_matching("0 0 1\n", &p), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn euler_chains_round_trip() {
        let p = parse_facets("x y\ny z\nx z\n").unwrap();
        let xi = parse_euler_chain("x y ; x\ny z ; y ; -2\n", &p).unwrap();
        assert_eq!(xi.segments[1].multiplicity, -2);
        let text = format_euler_chain(&xi, &p.symbols);
        assert_eq!(text, "x y ; x\ny z ; y ; -2\n");
        assert_eq!(parse_euler_chain(&text, &p).unwrap(), xi);
        assert!(parse_euler_chain("x ; y ; z\n", &p).is_err());
    }
}
