use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use morsekit::elimination::{OrderMismatch, OrderOptions};
use morsekit::euler::{difference_class, euler_boundary};
use morsekit::io::{
    format_euler_chain, format_facets, format_matching, parse_euler_chain, parse_facets, parse_matching,
    ParsedComplex, SymbolTable,
};
use morsekit::{
    all_orders_agree, barycentric_subdivision, boundary_zero_chain, chain_complex, complete_matching,
    eliminate_sequence, euler_chain_from_matching, euler_characteristic, find_closed_vpath, greedy_morse_matching,
    hasse, homology, is_morse, product_triangulation, thom_smale_complex, validate_matching, Cell, ChainComplex,
    Edge, HasseDiagram, HomologySummary, Matching,
};
use num_bigint::BigInt;
use serde_json::{json, Value};

use crate::report::Report;

pub struct Input {
    pub path: PathBuf,
    pub bytes: Vec<u8>,
}

impl Input {
    pub fn read(path: &Path) -> Result<Self> {
        let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
        Ok(Self { path: path.to_path_buf(), bytes })
    }

    fn text(&self) -> Result<&str> {
        std::str::from_utf8(&self.bytes).with_context(|| format!("{} is not UTF-8", self.path.display()))
    }
}

pub struct Orders {
    pub seed: u64,
    pub max_orders: usize,
}

fn load_complex(input: &Input) -> Result<ParsedComplex> {
    parse_facets(input.text()?).with_context(|| format!("parsing {}", input.path.display()))
}

fn load_pairs(input: &Input, parsed: &ParsedComplex) -> Result<Vec<Edge>> {
    parse_matching(input.text()?, parsed).with_context(|| format!("parsing {}", input.path.display()))
}

fn int(v: &BigInt) -> Value {
    match i64::try_from(v) {
        Ok(i) => json!(i),
        Err(_) => json!(v.to_string()),
    }
}

fn homology_json(h: &HomologySummary) -> Value {
    json!({
        "betti": h.betti,
        "torsion": h.torsion.iter().map(|t| t.iter().map(int).collect::<Vec<_>>()).collect::<Vec<_>>(),
    })
}

fn cells_json(cells: &[Cell], s: &SymbolTable) -> Vec<String> {
    cells.iter().map(|c| s.format_cell(c)).collect()
}

fn pairs_json<'a>(edges: impl IntoIterator<Item = &'a Edge>, s: &SymbolTable) -> Vec<String> {
    format_matching(edges, s).lines().map(str::to_string).collect()
}

fn differential_json(c: &ChainComplex, s: &SymbolTable) -> Vec<Value> {
    c.sparse_entries()
        .into_iter()
        .map(|(k, tau, sigma, v)| json!([k, s.format_cell(tau), s.format_cell(sigma), int(v)]))
        .collect()
}

fn describe_differential(r: &mut Report, c: &ChainComplex, s: &SymbolTable) {
    let entries = c.sparse_entries();
    if entries.is_empty() {
        r.line("differential: 0");
    }
    for (k, tau, sigma, v) in entries {
        r.line(format!("  <d{k} ({}), ({})> = {v}", s.format_cell(tau), s.format_cell(sigma)));
    }
}

pub fn homology_cmd(input: &Input) -> Result<Report> {
    let parsed = load_complex(input)?;
    let x = &parsed.complex;
    let hom = homology(&chain_complex(x)?)?;
    let mut r = Report::new("homology", &[&input.bytes]);
    r.set("f_vector", x.f_vector());
    r.set("euler_characteristic", euler_characteristic(x));
    r.set("homology", homology_json(&hom));
    r.line(format!("f-vector: {:?}", x.f_vector()));
    r.line(format!("euler characteristic: {}", euler_characteristic(x)));
    r.line(format!("betti: {:?}", hom.betti));
    r.line(hom.to_string());
    Ok(r)
}

/// Matching from a file, or the greedy one.
fn choose_matching(
    r: &mut Report,
    h: &HasseDiagram,
    parsed: &ParsedComplex,
    matching: Option<&Input>,
) -> Result<Option<Matching>> {
    let Some(input) = matching else {
        return Ok(Some(greedy_morse_matching(h)));
    };
    let pairs = load_pairs(input, parsed)?;
    let m: Matching = pairs.iter().cloned().collect();
    if m.len() != pairs.len() {
        r.warn("duplicate pairs in matching file");
    }
    if let Err(v) = validate_matching(h, &m) {
        r.set("valid_matching", false);
        r.set("violation", v.to_string());
        r.line(format!("invalid matching: {v}"));
        return Ok(None);
    }
    r.set("valid_matching", true);
    Ok(Some(m))
}

pub fn morse_cmd(complex: &Input, matching: Option<&Input>) -> Result<Report> {
    let parsed = load_complex(complex)?;
    let s = &parsed.symbols;
    let h = hasse(&parsed.complex);
    let mut inputs: Vec<&[u8]> = vec![&complex.bytes];
    if let Some(m) = matching {
        inputs.push(&m.bytes);
    }
    let mut r = Report::new("morse", &inputs);
    r.set("source", if matching.is_some() { "file" } else { "greedy" });
    let Some(m) = choose_matching(&mut r, &h, &parsed, matching)? else {
        return Ok(r);
    };
    r.set("matching", pairs_json(&m, s));
    r.line(format!("matching: {} pairs", m.len()));

    let morse = is_morse(&h, &m)?;
    r.set("morse", morse);
    if !morse {
        let path = find_closed_vpath(&h, &m)?.expect("non-Morse matching has a closed V-path");
        r.set("closed_vpath", cells_json(path.cells(), s));
        r.line("morse: false");
        r.line(format!(
            "closed V-path: {}",
            path.cells().iter().map(|c| format!("({})", s.format_cell(c))).collect::<Vec<_>>().join(" -> ")
        ));
        return Ok(r);
    }
    let mc = thom_smale_complex(&h, &m)?;
    let chain = mc.chain();
    let critical: Vec<Vec<String>> = (0..chain.len()).map(|k| cells_json(mc.critical(k), s)).collect();
    let simplicial = homology(&chain_complex(&parsed.complex)?)?;
    let reduced = homology(chain)?;
    let equal = reduced.trimmed() == simplicial.trimmed();
    r.set("critical", &critical);
    r.set("num_critical", mc.num_critical());
    r.set("differential", differential_json(chain, s));
    r.set("squares_to_zero", chain.squares_to_zero());
    r.set("homology", homology_json(&reduced));
    r.set("homology_matches", equal);

    r.line("morse: true");
    r.line(format!("critical cells: {}", mc.num_critical()));
    for (k, cells) in critical.iter().enumerate() {
        if !cells.is_empty() {
            r.line(format!("  dim {k}: {}", cells.iter().map(|c| format!("({c})")).collect::<Vec<_>>().join(" ")));
        }
    }
    describe_differential(&mut r, chain, s);
    r.line(format!("d o d = 0: {}", chain.squares_to_zero()));
    r.line(format!("homology: {reduced}"));
    r.line(format!("homology matches simplicial: {equal}"));
    Ok(r)
}

pub fn reduce_cmd(complex: &Input, matching: &Input, order: Option<&Input>, all: bool, opts: &Orders) -> Result<Report> {
    let parsed = load_complex(complex)?;
    let s = &parsed.symbols;
    let h = hasse(&parsed.complex);
    let mut inputs: Vec<&[u8]> = vec![&complex.bytes, &matching.bytes];
    if let Some(o) = order {
        inputs.push(&o.bytes);
    }
    let mut r = Report::new("reduce", &inputs);
    let Some(m) = choose_matching(&mut r, &h, &parsed, Some(matching))? else {
        return Ok(r);
    };
    let c = chain_complex(&parsed.complex)?;
    let morse = is_morse(&h, &m)?;
    let ts = if morse { Some(thom_smale_complex(&h, &m)?) } else { None };
    r.set("morse", morse);

    if all {
        let threads = std::thread::available_parallelism().map_or(1, |n| n.get());
        let options = OrderOptions {
            max_exhaustive: exhaustive_limit(opts.max_orders),
            samples: opts.max_orders,
            seed: opts.seed,
            threads,
        };
        let v = all_orders_agree(&c, &m, &options);
        r.set("orders_tested", v.orders_tested);
        r.set("exhaustive", v.exhaustive);
        r.set("agree", v.agree);
        r.set("all_succeeded", v.all_succeeded);
        let kind = if v.exhaustive { "all" } else { "sampled" };
        if v.agree {
            let equal = ts.as_ref().map(|t| v.reduced.as_ref() == Some(t.chain()));
            r.set("equals_thom_smale", equal);
            let tail = match equal {
                Some(true) => "; equals Thom-Smale complex",
                Some(false) => "; differs from Thom-Smale complex",
                None => "",
            };
            r.line(format!("{kind} {} orders agree{tail}", v.orders_tested));
        } else {
            let w = v.witness.expect("disagreement has a witness");
            r.set("witness_order", pairs_json(&w.order, s));
            match &w.mismatch {
                OrderMismatch::Failed(f) => {
                    r.set("witness_failure_step", f.step);
                    r.set("witness_pivot", f.pivot().map(int));
                    r.line(format!("{kind} orders tested: {}; an order failed at step {}", v.orders_tested, f.step));
                }
                OrderMismatch::Differs => {
                    r.set("witness_failure_step", Value::Null);
                    r.line(format!("{kind} orders tested: {}; two orders reduce differently", v.orders_tested));
                }
            }
            r.line(format!("witness order: {}", pairs_json(&w.order, s).join(", ")));
        }
        return Ok(r);
    }

    let steps = match order {
        Some(o) => load_pairs(o, &parsed)?,
        None => load_pairs(matching, &parsed)?,
    };
    r.set("order", pairs_json(&steps, s));
    match eliminate_sequence(&c, &m, &steps) {
        Ok(trace) => {
            r.set("pivots", trace.pivots.iter().map(int).collect::<Vec<_>>());
            r.set("failed_step", Value::Null);
            r.set("differential", differential_json(&trace.complex, s));
            let equal = ts.as_ref().map(|t| &trace.complex == t.chain());
            r.set("equals_thom_smale", equal);
            r.line(format!("eliminated {} pairs", steps.len()));
            r.line(format!(
                "pivots: {}",
                trace.pivots.iter().map(BigInt::to_string).collect::<Vec<_>>().join(" ")
            ));
            r.line(format!("remaining basis sizes: {:?}", trace.complex.basis_sizes()));
            describe_differential(&mut r, &trace.complex, s);
            if let Some(e) = equal {
                r.line(format!("equals Thom-Smale complex: {e}"));
            }
        }
        Err(f) => {
            r.set("pivots", f.pivots.iter().map(int).collect::<Vec<_>>());
            r.set("failed_step", f.step);
            r.set("failure", f.error.to_string());
            r.set("pivot", f.pivot().map(int));
            match f.pivot() {
                Some(p) => r.line(format!("failed at step {}, pivot {p}", f.step)),
                None => r.line(format!("failed at step {}: {}", f.step, f.error)),
            }
        }
    }
    Ok(r)
}

/// Largest `n` with `n! <= max_orders`.
fn exhaustive_limit(max_orders: usize) -> usize {
    let (mut n, mut f) = (0usize, 1usize);
    while let Some(next) = f.checked_mul(n + 1) {
        if next > max_orders {
            break;
        }
        n += 1;
        f = next;
    }
    n
}

pub fn euler_cmd(complex: &Input, matching: Option<&Input>, compare: Option<&Input>) -> Result<Report> {
    let parsed = load_complex(complex)?;
    let s = &parsed.symbols;
    let x = &parsed.complex;
    let h = hasse(x);
    let mut inputs: Vec<&[u8]> = vec![&complex.bytes];
    inputs.extend(matching.map(|m| m.bytes.as_slice()));
    inputs.extend(compare.map(|m| m.bytes.as_slice()));
    let mut r = Report::new("euler", &inputs);
    let chi = euler_characteristic(x);
    r.set("euler_characteristic", chi);
    if chi != 0 {
        r.warn(format!("euler characteristic is {chi}; no complete matching can exist"));
    }

    let m = match matching {
        None => match complete_matching(&h) {
            Some(m) => m,
            None => {
                r.set("complete_matching", Value::Null);
                r.line(format!("no complete matching (χ={chi})"));
                return Ok(r);
            }
        },
        Some(input) => {
            let Some(m) = choose_matching(&mut r, &h, &parsed, Some(input))? else {
                return Ok(r);
            };
            m
        }
    };
    r.set("complete_matching", pairs_json(&m, s));
    let sd = barycentric_subdivision(x);
    let xi = match euler_chain_from_matching(&sd, &h, &m) {
        Ok(xi) => xi,
        Err(e) => {
            r.set("euler_chain", Value::Null);
            r.line(format!("not a complete matching: {e}"));
            return Ok(r);
        }
    };
    let chain_text = format_euler_chain(&xi, s);
    let holds = boundary_zero_chain(&sd, &xi)? == euler_boundary(&sd);
    r.set("euler_chain", chain_text.lines().collect::<Vec<_>>());
    r.set("boundary_identity", holds);
    r.line(format!("complete matching: {} pairs", m.len()));
    r.line("euler chain:");
    r.lines.extend(chain_text.lines().map(|l| format!("  {l}")));
    r.line(if holds { "boundary identity holds" } else { "boundary identity FAILS" });

    if let Some(other) = compare {
        let eta = parse_euler_chain(other.text()?, &parsed).with_context(|| format!("parsing {}", other.path.display()))?;
        match difference_class(&sd, &xi, &eta) {
            Ok(class) => {
                let hom = class.is_trivial();
                r.set("homologous", hom);
                r.set("difference_class_free", class.free.iter().map(int).collect::<Vec<_>>());
                r.set(
                    "difference_class_torsion",
                    class.torsion.iter().map(|(a, b)| json!([int(a), int(b)])).collect::<Vec<_>>(),
                );
                r.line(if hom { "homologous" } else { "not homologous" });
            }
            Err(e) => {
                r.set("homologous", Value::Null);
                r.set("compare_error", e.to_string());
                r.line(format!("cannot compare: {e}"));
            }
        }
    }
    Ok(r)
}

fn write_facets(r: &mut Report, facets: &str, output: Option<&Path>) -> Result<()> {
    match output {
        Some(p) => {
            fs::write(p, facets).with_context(|| format!("writing {}", p.display()))?;
            r.line(format!("wrote {}", p.display()));
        }
        None => r.lines.extend(facets.lines().map(str::to_string)),
    }
    r.set("facets", facets.lines().collect::<Vec<_>>());
    Ok(())
}

pub fn subdivide_cmd(complex: &Input, output: Option<&Path>) -> Result<Report> {
    let parsed = load_complex(complex)?;
    let sd = barycentric_subdivision(&parsed.complex);
    let mut r = Report::new("subdivide", &[&complex.bytes]);
    r.set("f_vector", sd.complex.f_vector());
    r.set(
        "barycenters",
        sd.original
            .cells()
            .iter()
            .enumerate()
            .map(|(i, c)| json!([i, parsed.symbols.format_cell(c)]))
            .collect::<Vec<_>>(),
    );
    write_facets(&mut r, &format_facets(&sd.complex, &SymbolTable::Numeric), output)?;
    Ok(r)
}

pub fn product_cmd(m: usize, n: usize, output: Option<&Path>) -> Result<Report> {
    let x = product_triangulation(m, n);
    let mut r = Report::new("product", &[format!("{m} {n}").as_bytes()]);
    r.set("f_vector", x.f_vector());
    write_facets(&mut r, &format_facets(&x, &SymbolTable::Numeric), output)?;
    Ok(r)
}
