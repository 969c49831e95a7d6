//! Hypergraphs on `{0, .., n-1}`, subset orbits `Y^G`, setwise stabilizers
//! and automorphism groups.
//!
//! Text format: a header line `n m`, then `m` lines each listing the
//! 0-based vertices of one edge (a lone `-` is the empty edge). Transversal
//! hypergraphs carry a second header line with the layer sizes; layers are
//! consecutive vertex ranges. Blank lines and `#` comments are ignored.

mod search;
mod stabilizer;

pub use search::AutConfig;
pub use stabilizer::setwise_stabilizer;

use std::collections::HashSet;

use crate::bitset::{words_for, VertexSet};
use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::kset::{kset_orbits, KSetIndex};
use crate::perm::{check_degree, Permutation};
use search::{Search, Structure};

/// Largest subset orbit `subset_orbit` will build.
pub const DEFAULT_ORBIT_CAP: usize = 10_000_000;

/// A family of distinct subsets of `{0, .., n-1}`, kept sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Hypergraph {
    n: usize,
    edges: Vec<VertexSet>,
    uniform_k: Option<usize>,
}

impl Hypergraph {
    pub fn new(n: usize, edges: impl IntoIterator<Item = VertexSet>) -> Result<Self> {
        check_degree(n)?;
        let words = words_for(n);
        let mut out = Vec::new();
        for e in edges {
            if let Some(p) = e.iter().find(|&p| p >= n) {
                return Err(Error::InvalidArgument(format!("edge vertex {p} out of range for {n} vertices")));
            }
            out.push(if e.words().len() == words {
                e
            } else {
                VertexSet::from_points(n, e.iter())
            });
        }
        out.sort();
        out.dedup();
        let uniform_k = match out.first() {
            Some(first) if out.iter().all(|e| e.len() == first.len()) => Some(first.len()),
            _ => None,
        };
        Ok(Hypergraph {
            n,
            edges: out,
            uniform_k,
        })
    }

    pub fn from_edge_lists<E: AsRef<[usize]>>(n: usize, edges: &[E]) -> Result<Self> {
        check_degree(n)?;
        let sets = edges
            .iter()
            .map(|e| {
                let e = e.as_ref();
                match e.iter().find(|&&p| p >= n) {
                    Some(p) => Err(Error::InvalidArgument(format!("edge vertex {p} out of range for {n} vertices"))),
                    None => Ok(VertexSet::from_points(n, e.iter().copied())),
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(n, sets)
    }

    pub fn empty(n: usize) -> Result<Self> {
        Self::new(n, Vec::new())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[VertexSet] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Common edge size, when there is at least one edge and all agree.
    pub fn uniform_k(&self) -> Option<usize> {
        self.uniform_k
    }

    pub fn contains_edge(&self, e: &VertexSet) -> bool {
        self.edges.binary_search(e).is_ok()
    }

    /// Whether `g` maps every edge onto an edge.
    pub fn is_preserved_by(&self, g: &Permutation) -> bool {
        g.degree() == self.n && self.edges.iter().all(|e| self.contains_edge(&e.image(g)))
    }

    /// The family of edge complements.
    pub fn complement_edges(&self) -> Hypergraph {
        Hypergraph::new(self.n, self.edges.iter().map(|e| e.complement(self.n))).expect("complements stay in range")
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = content_lines(text);
        let (line, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            message: "missing header".into(),
        })?;
        let (n, m) = parse_header(line, header)?;
        let edges = parse_edges(&mut lines, n, m)?;
        Self::new(n, edges).map_err(|e| Error::Parse { line, message: e.to_string() })
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.n, self.edges.len());
        for e in &self.edges {
            out.push_str(&edge_line(e));
            out.push('\n');
        }
        out
    }
}

fn edge_line(e: &VertexSet) -> String {
    if e.is_empty() {
        "-".into()
    } else {
        e.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
    }
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_numbers(line: usize, text: &str) -> Result<Vec<usize>> {
    text.split_whitespace()
        .map(|t| {
            t.parse().map_err(|_| Error::Parse {
                line,
                message: format!("expected a non-negative integer, found {t:?}"),
            })
        })
        .collect()
}

fn parse_header(line: usize, text: &str) -> Result<(usize, usize)> {
    match parse_numbers(line, text)?.as_slice() {
        &[n, m] => Ok((n, m)),
        _ => Err(Error::Parse {
            line,
            message: "header must be `n m`".into(),
        }),
    }
}

fn parse_edges<'a>(lines: &mut impl Iterator<Item = (usize, &'a str)>, n: usize, m: usize) -> Result<Vec<VertexSet>> {
    let mut edges = Vec::with_capacity(m);
    for (line, text) in lines.by_ref() {
        let points = if text == "-" { Vec::new() } else { parse_numbers(line, text)? };
        if let Some(p) = points.iter().find(|&&p| p >= n) {
            return Err(Error::Parse {
                line,
                message: format!("vertex {p} out of range for {n} vertices"),
            });
        }
        edges.push(VertexSet::from_points(n, points));
        if edges.len() == m {
            break;
        }
    }
    if edges.len() != m {
        return Err(Error::Parse {
            line: 0,
            message: format!("header announces {m} edges, found {}", edges.len()),
        });
    }
    if let Some((line, _)) = lines.next() {
        return Err(Error::Parse {
            line,
            message: format!("more than the announced {m} edges"),
        });
    }
    Ok(edges)
}

/// A hypergraph whose vertex set is split into `t` layers of `r` consecutive
/// vertices, every edge meeting every layer exactly once.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransversalHypergraph {
    t: usize,
    r: usize,
    hypergraph: Hypergraph,
}

impl TransversalHypergraph {
    /// Layer `i` is `{i·r, .., i·r + r - 1}`.
    pub fn new(t: usize, r: usize, edges: impl IntoIterator<Item = VertexSet>) -> Result<Self> {
        if t == 0 || r == 0 {
            return Err(Error::InvalidArgument("t and r must be positive".into()));
        }
        let n = t.checked_mul(r).ok_or_else(|| Error::InvalidArgument("t·r overflows".into()))?;
        let hypergraph = Hypergraph::new(n, edges)?;
        for e in hypergraph.edges() {
            let mut hit = vec![0usize; t];
            for v in e.iter() {
                hit[v / r] += 1;
            }
            if hit.iter().any(|&h| h != 1) {
                return Err(Error::Validation(format!("edge {e:?} does not meet every layer exactly once")));
            }
        }
        Ok(TransversalHypergraph { t, r, hypergraph })
    }

    /// The edge whose vertex in layer `i` is the `i`-th base-`r` digit of `index`.
    pub fn transversal_edge(t: usize, r: usize, mut index: u64) -> VertexSet {
        let mut e = VertexSet::empty(t * r);
        for i in 0..t {
            e.insert(i * r + (index % r as u64) as usize);
            index /= r as u64;
        }
        e
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn n(&self) -> usize {
        self.t * self.r
    }

    pub fn hypergraph(&self) -> &Hypergraph {
        &self.hypergraph
    }

    pub fn edges(&self) -> &[VertexSet] {
        self.hypergraph.edges()
    }

    pub fn layer_of(&self, v: usize) -> usize {
        v / self.r
    }

    pub fn layers(&self) -> Vec<VertexSet> {
        (0..self.t)
            .map(|i| VertexSet::from_points(self.n(), i * self.r..(i + 1) * self.r))
            .collect()
    }

    /// Whether `g` maps each layer onto a layer.
    pub fn respects_layers(&self, g: &Permutation) -> bool {
        g.degree() == self.n()
            && (0..self.t).all(|i| {
                let target = self.layer_of(g.apply(i * self.r));
                (i * self.r..(i + 1) * self.r).all(|v| self.layer_of(g.apply(v)) == target)
            })
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = content_lines(text);
        let (line, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            message: "missing header".into(),
        })?;
        let (n, m) = parse_header(line, header)?;
        let (line2, sizes) = lines.next().ok_or(Error::Parse {
            line: line + 1,
            message: "missing layer sizes".into(),
        })?;
        let sizes = parse_numbers(line2, sizes)?;
        let parse_err = |message: String| Error::Parse { line: line2, message };
        if sizes.is_empty() || sizes.iter().sum::<usize>() != n {
            return Err(parse_err(format!("layer sizes must sum to {n}")));
        }
        if sizes.iter().any(|&s| s != sizes[0]) {
            return Err(parse_err("layers must have equal sizes".into()));
        }
        let edges = parse_edges(&mut lines, n, m)?;
        Self::new(sizes.len(), sizes[0], edges).map_err(|e| parse_err(e.to_string()))
    }

    pub fn to_text(&self) -> String {
        let h = &self.hypergraph;
        let mut out = format!("{} {}\n", h.n(), h.edge_count());
        out.push_str(&vec![self.r.to_string(); self.t].join(" "));
        out.push('\n');
        for e in h.edges() {
            out.push_str(&edge_line(e));
            out.push('\n');
        }
        out
    }
}

/// The orbit `Y^G` of a subset, viewed as a hypergraph.
#[derive(Debug, Clone)]
pub struct OrbitFamily {
    pub seed: VertexSet,
    pub hypergraph: Hypergraph,
    pub orbit_size: usize,
}

/// `{ Y^g : g ∈ G }`, by breadth-first closure under the generators.
pub fn subset_orbit(group: &PermGroup, y: &VertexSet) -> Result<OrbitFamily> {
    subset_orbit_capped(group, y, DEFAULT_ORBIT_CAP)
}

pub fn subset_orbit_capped(group: &PermGroup, y: &VertexSet, cap: usize) -> Result<OrbitFamily> {
    let n = group.degree();
    if let Some(p) = y.iter().find(|&p| p >= n) {
        return Err(Error::InvalidArgument(format!("vertex {p} out of range for {n} points")));
    }
    let seed = VertexSet::from_points(n, y.iter());
    let mut seen: HashSet<VertexSet> = HashSet::new();
    seen.insert(seed.clone());
    let mut queue = vec![seed.clone()];
    let mut buf = vec![0u64; words_for(n)];
    while let Some(s) = queue.pop() {
        for g in group.generators() {
            VertexSet::image_into(s.words(), g.images(), &mut buf);
            if !seen.contains(buf.as_slice()) {
                if seen.len() >= cap {
                    return Err(Error::cap("subset orbit size", cap));
                }
                let img = VertexSet::from_words(buf.clone());
                seen.insert(img.clone());
                queue.push(img);
            }
        }
    }
    let orbit_size = seen.len();
    let hypergraph = Hypergraph::new(n, seen)?;
    Ok(OrbitFamily {
        seed,
        hypergraph,
        orbit_size,
    })
}

/// One representative per orbit of `G` on `k`-sets (the lexicographically
/// least member) with the orbit size.
pub fn kset_orbit_reps(group: &PermGroup, k: usize, cap: u64) -> Result<Vec<(VertexSet, u64)>> {
    let n = group.degree();
    if k > n {
        return Err(Error::InvalidArgument(format!("k = {k} exceeds n = {n}")));
    }
    let index = KSetIndex::new(n, k, cap)?;
    Ok(kset_orbits(&index, group.generators())
        .into_iter()
        .map(|o| (VertexSet::from_points(n, index.unrank(o.min_rank)), o.size))
        .collect())
}

fn search_structure(h: &Hypergraph) -> Structure {
    Structure::new(h.n(), &[h.edges()], None)
}

fn transversal_structure(t: &TransversalHypergraph) -> Structure {
    let layers = t.layers();
    Structure::new(t.n(), &[t.edges(), &layers], None)
}

fn group_from(n: usize, found: search::Found) -> Result<PermGroup> {
    PermGroup::with_base_prefix(n, found.generators, &found.base)
}

/// The full automorphism group of `h` inside `S_n`.
pub fn aut_group(h: &Hypergraph) -> Result<PermGroup> {
    aut_group_with(h, &AutConfig::default())
}

pub fn aut_group_with(h: &Hypergraph, cfg: &AutConfig) -> Result<PermGroup> {
    let s = search_structure(h);
    let found = Search::new(&s, *cfg)?.run(false)?;
    group_from(h.n(), found)
}

/// Whether `h` has no automorphism other than the identity.
pub fn is_rigid(h: &Hypergraph, cfg: &AutConfig) -> Result<bool> {
    let s = search_structure(h);
    Ok(Search::new(&s, *cfg)?.run(true)?.generators.is_empty())
}

/// Automorphisms of `t`: vertex permutations mapping layers onto layers
/// (possibly permuting them) and edges onto edges.
pub fn aut_group_transversal(t: &TransversalHypergraph) -> Result<PermGroup> {
    aut_group_transversal_with(t, &AutConfig::default())
}

pub fn aut_group_transversal_with(t: &TransversalHypergraph, cfg: &AutConfig) -> Result<PermGroup> {
    let s = transversal_structure(t);
    let found = Search::new(&s, *cfg)?.run(false)?;
    group_from(t.n(), found)
}

pub fn transversal_is_rigid(t: &TransversalHypergraph, cfg: &AutConfig) -> Result<bool> {
    let s = transversal_structure(t);
    Ok(Search::new(&s, *cfg)?.run(true)?.generators.is_empty())
}

/// Whether `Aut(h) = G`. A generator of `G` that is not an automorphism of
/// `h` is reported as [`Error::NotContained`].
pub fn aut_equals(group: &PermGroup, h: &Hypergraph) -> Result<bool> {
    aut_equals_with(group, h, &AutConfig::default())
}

pub fn aut_equals_with(group: &PermGroup, h: &Hypergraph, cfg: &AutConfig) -> Result<bool> {
    if group.degree() != h.n() {
        return Err(Error::DegreeMismatch {
            left: group.degree(),
            right: h.n(),
        });
    }
    if let Some(index) = group.generators().iter().position(|g| !h.is_preserved_by(g)) {
        return Err(Error::NotContained { index });
    }
    Ok(aut_group_with(h, cfg)?.order() == group.order())
}

#[cfg(test)]
mod tests;
