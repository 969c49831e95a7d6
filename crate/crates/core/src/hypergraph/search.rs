//! Automorphisms of coloured multi-class hypergraphs by individualization and
//! refinement.
//!
//! A node of the search tree is an ordered partition of the vertices, stored
//! as a colour per vertex with colours `0..cells`. Refinement repeatedly
//! recolours each vertex by its old colour and the multiset of (edge class,
//! colour multiset) signatures of the edges through it, until the number of
//! cells stops growing. Colours are ranked by hashed signature values, never
//! by vertex labels, so refinement commutes with automorphisms.
//!
//! The first path down the tree always individualizes the smallest vertex of
//! the first largest cell. Its leaf is the reference labelling. Working from
//! the deepest level upwards, every other vertex of each target cell that is
//! not yet known to be equivalent to the path vertex is tried once; a leaf
//! below it whose labelling maps the reference onto it yields an automorphism.

use crate::bitset::VertexSet;
use crate::error::{Error, Result};
use crate::perm::Permutation;

/// Resource limits for automorphism searches.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AutConfig {
    /// Largest vertex count accepted.
    pub max_degree: usize,
    /// Largest total edge count accepted.
    pub max_edges: usize,
    /// Search tree nodes (refinements) allowed per search.
    pub max_nodes: u64,
}

impl Default for AutConfig {
    fn default() -> Self {
        AutConfig {
            max_degree: 64,
            max_edges: 1 << 22,
            max_nodes: 2_000_000,
        }
    }
}

impl AutConfig {
    pub(crate) fn check(&self, n: usize, edges: usize) -> Result<()> {
        if n > self.max_degree {
            return Err(Error::DegreeCap {
                degree: n,
                cap: self.max_degree,
            });
        }
        if edges > self.max_edges {
            return Err(Error::cap("edge count", self.max_edges));
        }
        Ok(())
    }
}

/// Sorted edges of one class, `words` machine words per edge.
#[derive(Debug, Clone)]
pub(crate) struct EdgeClass {
    words: usize,
    data: Vec<u64>,
}

impl EdgeClass {
    pub(crate) fn new(words: usize, sets: &[VertexSet]) -> Self {
        let mut sorted: Vec<&VertexSet> = sets.iter().collect();
        sorted.sort();
        sorted.dedup();
        let mut data = Vec::with_capacity(sorted.len() * words);
        for s in sorted {
            debug_assert_eq!(s.words().len(), words);
            data.extend_from_slice(s.words());
        }
        EdgeClass { words, data }
    }

    pub(crate) fn len(&self) -> usize {
        self.data.len() / self.words
    }

    #[inline]
    pub(crate) fn edge(&self, i: usize) -> &[u64] {
        &self.data[i * self.words..(i + 1) * self.words]
    }

    #[inline]
    pub(crate) fn contains(&self, key: &[u64]) -> bool {
        if self.words == 1 {
            return self.data.binary_search(&key[0]).is_ok();
        }
        let (mut lo, mut hi) = (0, self.len());
        while lo < hi {
            let mid = (lo + hi) / 2;
            match self.edge(mid).cmp(key) {
                std::cmp::Ordering::Less => lo = mid + 1,
                std::cmp::Ordering::Greater => hi = mid,
                std::cmp::Ordering::Equal => return true,
            }
        }
        false
    }

    /// Whether the vertex map `g` sends every edge of the class to an edge.
    pub(crate) fn preserved_by(&self, g: &[u32], buf: &mut [u64]) -> bool {
        (0..self.len()).all(|i| {
            VertexSet::image_into(self.edge(i), g, buf);
            self.contains(buf)
        })
    }
}

/// A vertex-coloured hypergraph with several edge classes, in incidence form.
#[derive(Debug, Clone)]
pub(crate) struct Structure {
    n: usize,
    words: usize,
    classes: Vec<EdgeClass>,
    edge_class: Vec<u32>,
    edge_start: Vec<usize>,
    edge_verts: Vec<u32>,
    vert_start: Vec<usize>,
    vert_edges: Vec<u32>,
    base_colors: Vec<u32>,
}

impl Structure {
    /// `colors` gives an initial vertex colouring that automorphisms must respect.
    pub(crate) fn new(n: usize, classes: &[&[VertexSet]], colors: Option<&[u32]>) -> Self {
        let words = crate::bitset::words_for(n);
        let classes: Vec<EdgeClass> = classes.iter().map(|c| EdgeClass::new(words, c)).collect();
        let mut edge_class = Vec::new();
        let mut edge_start = vec![0];
        let mut edge_verts = Vec::new();
        let mut degree = vec![0usize; n];
        for (ci, class) in classes.iter().enumerate() {
            for i in 0..class.len() {
                let set = VertexSet::from_words(class.edge(i).to_vec());
                for v in set.iter() {
                    edge_verts.push(v as u32);
                    degree[v] += 1;
                }
                edge_start.push(edge_verts.len());
                edge_class.push(ci as u32);
            }
        }
        let mut vert_start = vec![0usize; n + 1];
        for v in 0..n {
            vert_start[v + 1] = vert_start[v] + degree[v];
        }
        let mut fill = vert_start.clone();
        let mut vert_edges = vec![0u32; edge_verts.len()];
        for e in 0..edge_class.len() {
            for &v in &edge_verts[edge_start[e]..edge_start[e + 1]] {
                vert_edges[fill[v as usize]] = e as u32;
                fill[v as usize] += 1;
            }
        }
        let base_colors = match colors {
            Some(c) => rank_colors(c),
            None => vec![0; n],
        };
        Structure {
            n,
            words,
            classes,
            edge_class,
            edge_start,
            edge_verts,
            vert_start,
            vert_edges,
            base_colors,
        }
    }

    fn edge_count(&self) -> usize {
        self.edge_class.len()
    }

    /// Whether `g` preserves the colouring and every edge class.
    pub(crate) fn is_automorphism(&self, g: &[u32]) -> bool {
        if (0..self.n).any(|v| self.base_colors[v] != self.base_colors[g[v] as usize]) {
            return false;
        }
        let mut buf = vec![0u64; self.words];
        self.classes.iter().all(|c| c.preserved_by(g, &mut buf))
    }
}

/// Replaces arbitrary colour values by their ranks.
fn rank_colors(c: &[u32]) -> Vec<u32> {
    let mut values: Vec<u32> = c.to_vec();
    values.sort_unstable();
    values.dedup();
    c.iter().map(|x| values.binary_search(x).unwrap() as u32).collect()
}

#[inline]
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

#[derive(Debug, Clone)]
struct Node {
    colors: Vec<u32>,
    cells: usize,
    trace: u64,
}

impl Node {
    fn is_leaf(&self) -> bool {
        self.cells == self.colors.len()
    }

    /// Vertices of the first largest non-singleton cell, ascending.
    fn target_cell(&self) -> Vec<u32> {
        let mut sizes = vec![0usize; self.cells];
        for &c in &self.colors {
            sizes[c as usize] += 1;
        }
        let (best, _) = sizes
            .iter()
            .enumerate()
            .fold((0, 0), |(bc, bs), (c, &s)| if s > bs { (c, s) } else { (bc, bs) });
        (0..self.colors.len() as u32)
            .filter(|&v| self.colors[v as usize] == best as u32)
            .collect()
    }

    /// Splits `v` off its cell, giving it the lower colour.
    fn individualize(&self, v: u32) -> Node {
        let c = self.colors[v as usize];
        let colors = self
            .colors
            .iter()
            .enumerate()
            .map(|(u, &x)| if x < c || u == v as usize { x } else { x + 1 })
            .collect();
        Node {
            colors,
            cells: self.cells + 1,
            trace: 0,
        }
    }
}

struct Scratch {
    edge_sig: Vec<u64>,
    keys: Vec<(u32, u64, u32)>,
}

pub(crate) struct Search<'a> {
    s: &'a Structure,
    cfg: AutConfig,
    nodes: u64,
    scratch: Scratch,
}

/// Outcome of a search: generators of the automorphism group and the
/// individualized path vertices, which form a base for it.
#[derive(Debug, Clone)]
pub(crate) struct Found {
    pub generators: Vec<Permutation>,
    pub base: Vec<usize>,
}

impl<'a> Search<'a> {
    pub(crate) fn new(s: &'a Structure, cfg: AutConfig) -> Result<Self> {
        cfg.check(s.n, s.edge_count())?;
        Ok(Search {
            s,
            cfg,
            nodes: 0,
            scratch: Scratch {
                edge_sig: vec![0; s.edge_count()],
                keys: Vec::with_capacity(s.n),
            },
        })
    }

    fn refine(&mut self, node: &mut Node) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.cfg.max_nodes {
            return Err(Error::cap("automorphism search nodes", self.cfg.max_nodes));
        }
        let s = self.s;
        let n = s.n;
        let mut trace = mix(node.cells as u64);
        while node.cells < n && s.edge_count() > 0 {
            for e in 0..s.edge_count() {
                let mut h = mix(s.edge_class[e] as u64 ^ 0x5151);
                for &v in &s.edge_verts[s.edge_start[e]..s.edge_start[e + 1]] {
                    h = h.wrapping_add(mix(node.colors[v as usize] as u64));
                }
                self.scratch.edge_sig[e] = mix(h);
            }
            let keys = &mut self.scratch.keys;
            keys.clear();
            for v in 0..n {
                let mut h = 0u64;
                for &e in &s.vert_edges[s.vert_start[v]..s.vert_start[v + 1]] {
                    h = h.wrapping_add(mix(self.scratch.edge_sig[e as usize] ^ 0xa5a5));
                }
                keys.push((node.colors[v], h, v as u32));
            }
            keys.sort_unstable();
            let mut cells = 0;
            let mut run = 0u64;
            for i in 0..n {
                let (c, h, v) = keys[i];
                let new_cell = i == 0 || (keys[i - 1].0, keys[i - 1].1) != (c, h);
                if new_cell {
                    if i > 0 {
                        trace = mix(trace ^ mix(run));
                    }
                    cells += 1;
                    run = mix(c as u64) ^ h;
                }
                run = run.wrapping_add(1);
                node.colors[v as usize] = cells as u32 - 1;
            }
            trace = mix(trace ^ mix(run));
            if cells == node.cells {
                break;
            }
            node.cells = cells;
        }
        // cell sizes in colour order
        let mut sizes = vec![0u32; node.cells];
        for &c in &node.colors {
            sizes[c as usize] += 1;
        }
        for &sz in &sizes {
            trace = mix(trace ^ sz as u64);
        }
        node.trace = trace;
        Ok(())
    }

    fn root(&mut self) -> Result<Node> {
        let mut node = Node {
            colors: self.s.base_colors.clone(),
            cells: self.s.base_colors.iter().map(|&c| c as usize + 1).max().unwrap_or(0),
            trace: 0,
        };
        self.refine(&mut node)?;
        Ok(node)
    }

    fn child(&mut self, node: &Node, v: u32) -> Result<Node> {
        let mut c = node.individualize(v);
        self.refine(&mut c)?;
        Ok(c)
    }

    /// The vertex map sending the reference leaf to `leaf`.
    fn leaf_map(reference: &Node, leaf: &Node) -> Vec<u32> {
        let mut at = vec![0u32; leaf.colors.len()];
        for (v, &c) in leaf.colors.iter().enumerate() {
            at[c as usize] = v as u32;
        }
        reference.colors.iter().map(|&c| at[c as usize]).collect()
    }

    /// Depth-first search below `node` (at path depth `depth`) for a leaf
    /// whose labelling is an automorphism.
    fn find_leaf(&mut self, node: &Node, depth: usize, path: &[Node], reference: &Node) -> Result<Option<Vec<u32>>> {
        if node.trace != path[depth].trace {
            return Ok(None);
        }
        if node.is_leaf() {
            let g = Self::leaf_map(reference, node);
            return Ok(self.s.is_automorphism(&g).then_some(g));
        }
        for w in node.target_cell() {
            let c = self.child(node, w)?;
            if let Some(g) = self.find_leaf(&c, depth + 1, path, reference)? {
                return Ok(Some(g));
            }
        }
        Ok(None)
    }

    /// Runs the search. With `stop_at_first`, returns as soon as one
    /// non-identity automorphism is known.
    pub(crate) fn run(&mut self, stop_at_first: bool) -> Result<Found> {
        let n = self.s.n;
        let mut path = vec![self.root()?];
        let mut chosen = Vec::new();
        let mut targets = Vec::new();
        while !path.last().unwrap().is_leaf() {
            let node = path.last().unwrap();
            let target = node.target_cell();
            let v = target[0];
            let c = self.child(node, v)?;
            chosen.push(v as usize);
            targets.push(target);
            path.push(c);
        }
        let reference = path.last().unwrap().clone();

        let mut gens: Vec<Vec<u32>> = Vec::new();
        let mut uf = UnionFind::new(n);
        for d in (0..targets.len()).rev() {
            uf.reset();
            for g in &gens {
                uf.absorb(g);
            }
            let v = chosen[d];
            let mut failed: Vec<usize> = Vec::new();
            for &u in &targets[d][1..] {
                let u = u as usize;
                if uf.same(u, v) || failed.iter().any(|&f| uf.same(f, u)) {
                    continue;
                }
                let c = self.child(&path[d], u as u32)?;
                match self.find_leaf(&c, d + 1, &path, &reference)? {
                    Some(g) => {
                        uf.absorb(&g);
                        gens.push(g);
                        if stop_at_first {
                            return Ok(Found {
                                generators: to_perms(gens),
                                base: chosen,
                            });
                        }
                    }
                    None => failed.push(u),
                }
            }
        }
        Ok(Found {
            generators: to_perms(gens),
            base: chosen,
        })
    }
}

fn to_perms(gens: Vec<Vec<u32>>) -> Vec<Permutation> {
    gens.into_iter().map(Permutation::from_images_unchecked).collect()
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn reset(&mut self) {
        for (i, p) in self.parent.iter_mut().enumerate() {
            *p = i;
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn same(&mut self, a: usize, b: usize) -> bool {
        self.find(a) == self.find(b)
    }

    fn absorb(&mut self, g: &[u32]) {
        for (v, &w) in g.iter().enumerate() {
            let (a, b) = (self.find(v), self.find(w as usize));
            if a != b {
                self.parent[a.max(b)] = a.min(b);
            }
        }
    }
}
