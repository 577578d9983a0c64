//! Digraphs induced by choice functions: edges point at winners.
//!
//! The graph of f on a vertex set V has an arc (x, y) exactly when
//! y ∈ set-f(x, y), including self-loops (x, x) when set-f(x, x) is
//! nonempty. Undefined pairs contribute no arcs. All algorithms here are
//! deterministic; the only randomness is the seeded subset sampler used by
//! `verify_equivalences` on large vertex sets.

use rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::report::{PropertyReport, Witness};
use crate::universe::Word;
use crate::{AgreementReport, Error, MultiMap};

/// Practical cap on vertices so adjacency stays dense and fast.
pub const MAX_VERTICES: usize = 4096;

/// Exhaustive subgraph quantification is used up to this many vertices.
pub const EXHAUSTIVE_SUBGRAPH_LIMIT: usize = 12;

/// Structural classification flags.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct GraphClass {
    /// All self-loops, exactly one arc between distinct vertices.
    pub s_tournament: bool,
    /// All self-loops, at least one arc between distinct vertices.
    pub complete: bool,
    /// All self-loops, both arcs between distinct vertices.
    pub strong_clique: bool,
}

/// Which end of the induced order is asked for.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ExtremalSide {
    /// Loses to everything: arcs from it to every vertex.
    Source,
    /// Everything loses to it: arcs from every vertex to it.
    Target,
}

/// The condensation of a complete transitive digraph: maximal strong
/// cliques, listed minimum first, with every cross arc running from an
/// earlier block to a later one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliqueOrder {
    blocks: Vec<Vec<Word>>,
}

impl CliqueOrder {
    pub fn blocks(&self) -> &[Vec<Word>] {
        &self.blocks
    }

    pub fn first_block(&self) -> &[Word] {
        &self.blocks[0]
    }

    pub fn last_block(&self) -> &[Word] {
        &self.blocks[self.blocks.len() - 1]
    }
}

/// Dense digraph over shortlex-sorted word vertices.
pub struct Digraph {
    name: String,
    vertices: Vec<Word>,
    stride: usize,
    rows: Vec<u64>,
    cols: Vec<u64>,
}

impl Digraph {
    /// Builds the graph induced by f on the given vertices (sorted and
    /// deduplicated internally). Pairs where f is undefined get no arcs.
    pub fn induce(f: &MultiMap, vertices: &[Word]) -> Result<Digraph, Error> {
        let mut verts = vertices.to_vec();
        verts.sort();
        verts.dedup();
        Digraph::build(&format!("G({})", f.name()), &verts, |x, y| {
            Ok(f.eval(x, y)?.contains(x, y, y))
        })
    }

    /// Builds a graph from an explicit arc predicate.
    pub fn build(
        name: &str,
        vertices: &[Word],
        mut arc: impl FnMut(Word, Word) -> Result<bool, Error>,
    ) -> Result<Digraph, Error> {
        let mut verts = vertices.to_vec();
        verts.sort();
        verts.dedup();
        let n = verts.len();
        if n == 0 {
            return Err(Error::invalid("Digraph::build", "empty vertex set"));
        }
        if n > MAX_VERTICES {
            return Err(Error::invalid(
                "Digraph::build",
                format!("{n} vertices exceed the cap of {MAX_VERTICES}"),
            ));
        }
        let stride = (n + 63) / 64;
        let mut g = Digraph {
            name: name.to_string(),
            vertices: verts,
            stride,
            rows: vec![0; n * stride],
            cols: vec![0; n * stride],
        };
        for i in 0..n {
            for j in 0..n {
                if arc(g.vertices[i], g.vertices[j])? {
                    g.rows[i * stride + j / 64] |= 1u64 << (j % 64);
                    g.cols[j * stride + i / 64] |= 1u64 << (i % 64);
                }
            }
        }
        Ok(g)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn vertices(&self) -> &[Word] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        false // construction rejects empty vertex sets
    }

    fn row(&self, i: usize) -> &[u64] {
        &self.rows[i * self.stride..(i + 1) * self.stride]
    }

    fn col(&self, j: usize) -> &[u64] {
        &self.cols[j * self.stride..(j + 1) * self.stride]
    }

    pub fn has_edge_idx(&self, i: usize, j: usize) -> bool {
        self.rows[i * self.stride + j / 64] >> (j % 64) & 1 == 1
    }

    /// Arc lookup by words; vertices must belong to the graph.
    pub fn has_edge(&self, x: Word, y: Word) -> Result<bool, Error> {
        let i = self.vertex_index(x)?;
        let j = self.vertex_index(y)?;
        Ok(self.has_edge_idx(i, j))
    }

    pub fn vertex_index(&self, w: Word) -> Result<usize, Error> {
        self.vertices
            .binary_search(&w)
            .map_err(|_| Error::invalid("Digraph::vertex_index", format!("{w} is not a vertex")))
    }

    pub fn classify(&self) -> GraphClass {
        let n = self.len();
        let mut loops = true;
        let mut exactly_one = true;
        let mut at_least_one = true;
        let mut both = true;
        for i in 0..n {
            loops &= self.has_edge_idx(i, i);
            for j in (i + 1)..n {
                let ab = self.has_edge_idx(i, j);
                let ba = self.has_edge_idx(j, i);
                exactly_one &= ab ^ ba;
                at_least_one &= ab || ba;
                both &= ab && ba;
            }
        }
        GraphClass {
            s_tournament: loops && exactly_one,
            complete: loops && at_least_one,
            strong_clique: loops && both,
        }
    }

    /// Completeness as a checkable report (used as a precondition).
    pub fn completeness_report(&self) -> PropertyReport {
        let n = self.len();
        let pairs = (n * n) as u64;
        for i in 0..n {
            if !self.has_edge_idx(i, i) {
                return PropertyReport::fail(
                    "complete-digraph",
                    &self.name,
                    pairs,
                    0,
                    Witness::MissingLoop { w: self.vertices[i] },
                );
            }
            for j in (i + 1)..n {
                if !self.has_edge_idx(i, j) && !self.has_edge_idx(j, i) {
                    return PropertyReport::fail(
                        "complete-digraph",
                        &self.name,
                        pairs,
                        0,
                        Witness::MissingEdge { x: self.vertices[i], y: self.vertices[j] },
                    );
                }
            }
        }
        PropertyReport::pass("complete-digraph", &self.name, pairs, 0)
    }

    /// The s-tournament shape as a checkable report.
    pub fn s_tournament_report(&self) -> PropertyReport {
        let n = self.len();
        let pairs = (n * n) as u64;
        for i in 0..n {
            if !self.has_edge_idx(i, i) {
                return PropertyReport::fail(
                    "s-tournament",
                    &self.name,
                    pairs,
                    0,
                    Witness::MissingLoop { w: self.vertices[i] },
                );
            }
            for j in (i + 1)..n {
                let ab = self.has_edge_idx(i, j);
                let ba = self.has_edge_idx(j, i);
                if !ab && !ba {
                    return PropertyReport::fail(
                        "s-tournament",
                        &self.name,
                        pairs,
                        0,
                        Witness::MissingEdge { x: self.vertices[i], y: self.vertices[j] },
                    );
                }
                if ab && ba {
                    return PropertyReport::fail(
                        "s-tournament",
                        &self.name,
                        pairs,
                        0,
                        Witness::MutualEdge { x: self.vertices[i], y: self.vertices[j] },
                    );
                }
            }
        }
        PropertyReport::pass("s-tournament", &self.name, pairs, 0)
    }

    /// Arc transitivity: (a,b), (b,c) arcs imply an (a,c) arc.
    pub fn is_transitive(&self) -> PropertyReport {
        let n = self.len();
        let triples = (n as u64).pow(3);
        for a in 0..n {
            for b in 0..n {
                if !self.has_edge_idx(a, b) {
                    continue;
                }
                // successors of b must all be successors of a
                for k in 0..self.stride {
                    let missing = self.row(b)[k] & !self.row(a)[k];
                    if missing != 0 {
                        let c = k * 64 + missing.trailing_zeros() as usize;
                        return PropertyReport::fail(
                            "transitive-edges",
                            &self.name,
                            (n * n) as u64,
                            triples,
                            Witness::EdgeBreach {
                                a: self.vertices[a],
                                b: self.vertices[b],
                                c: self.vertices[c],
                            },
                        );
                    }
                }
            }
        }
        PropertyReport::pass("transitive-edges", &self.name, (n * n) as u64, triples)
    }

    /// Strongly connected components as sorted index lists, deterministic.
    fn sccs(&self) -> Vec<Vec<usize>> {
        // iterative Tarjan
        let n = self.len();
        let mut index = vec![usize::MAX; n];
        let mut low = vec![0usize; n];
        let mut on_stack = vec![false; n];
        let mut stack: Vec<usize> = Vec::new();
        let mut next_index = 0usize;
        let mut out: Vec<Vec<usize>> = Vec::new();
        // frames: (vertex, next neighbor to try)
        let mut frames: Vec<(usize, usize)> = Vec::new();
        for start in 0..n {
            if index[start] != usize::MAX {
                continue;
            }
            frames.push((start, 0));
            index[start] = next_index;
            low[start] = next_index;
            next_index += 1;
            stack.push(start);
            on_stack[start] = true;
            while !frames.is_empty() {
                let fi = frames.len() - 1;
                let (v, mut next) = frames[fi];
                let mut advanced = false;
                while next < n {
                    let w = next;
                    next += 1;
                    if w == v || !self.has_edge_idx(v, w) {
                        continue;
                    }
                    if index[w] == usize::MAX {
                        index[w] = next_index;
                        low[w] = next_index;
                        next_index += 1;
                        stack.push(w);
                        on_stack[w] = true;
                        frames[fi].1 = next;
                        frames.push((w, 0));
                        advanced = true;
                        break;
                    } else if on_stack[w] {
                        low[v] = low[v].min(index[w]);
                    }
                }
                if advanced {
                    continue;
                }
                frames.pop();
                if let Some(&(parent, _)) = frames.last() {
                    low[parent] = low[parent].min(low[v]);
                }
                if low[v] == index[v] {
                    let mut comp = Vec::new();
                    while let Some(w) = stack.pop() {
                        on_stack[w] = false;
                        comp.push(w);
                        if w == v {
                            break;
                        }
                    }
                    comp.sort_unstable();
                    out.push(comp);
                }
            }
        }
        out.sort_by_key(|c| c[0]);
        out
    }

    /// A directed cycle of length > 1, if any (self-loops do not count).
    /// Deterministic: explores the component containing the smallest vertex
    /// and follows smallest-index arcs.
    pub fn long_cycle(&self) -> Option<Vec<Word>> {
        let sccs = self.sccs();
        let comp = sccs.iter().find(|c| c.len() >= 2)?;
        let inside: std::collections::BTreeSet<usize> = comp.iter().copied().collect();
        let mut path: Vec<usize> = vec![comp[0]];
        let mut pos = std::collections::BTreeMap::new();
        pos.insert(comp[0], 0usize);
        loop {
            let u = *path.last().expect("path never empty");
            let w = inside
                .iter()
                .copied()
                .find(|&w| w != u && self.has_edge_idx(u, w))
                .expect("strongly connected component of size >= 2 has an inner arc");
            if let Some(&at) = pos.get(&w) {
                return Some(path[at..].iter().map(|&i| self.vertices[i]).collect());
            }
            pos.insert(w, path.len());
            path.push(w);
        }
    }

    /// Shortlex-least vertex that loses to everything (Source) or that
    /// everything loses to (Target), if one exists.
    pub fn extremal_node(&self, side: ExtremalSide) -> Option<Word> {
        let n = self.len();
        (0..n)
            .find(|&v| {
                let bits = match side {
                    ExtremalSide::Source => self.row(v),
                    ExtremalSide::Target => self.col(v),
                };
                covers_all(bits, n)
            })
            .map(|v| self.vertices[v])
    }

    /// Splits a complete transitive graph into its linearly ordered maximal
    /// strong cliques. Preconditions checked; violations carry witnesses.
    pub fn condensation(&self) -> Result<CliqueOrder, Error> {
        let op = "condensation";
        let complete = self.completeness_report();
        if !complete.pass {
            return Err(Error::precondition(op, complete));
        }
        let trans = self.is_transitive();
        if !trans.pass {
            return Err(Error::precondition(op, trans));
        }
        let n = self.len();
        let indeg: Vec<u32> = (0..n).map(|v| popcount(self.col(v))).collect();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&v| (indeg[v], v));
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        for v in order {
            match blocks.last_mut() {
                Some(last) if indeg[last[0]] == indeg[v] => last.push(v),
                _ => blocks.push(vec![v]),
            }
        }
        // re-verify the block structure before exposing it
        for (bi, block) in blocks.iter().enumerate() {
            for &u in block {
                for &v in block {
                    if !self.has_edge_idx(u, v) {
                        return Err(Error::internal(
                            op,
                            format!(
                                "block member pair ({}, {}) lacks a mutual arc",
                                self.vertices[u], self.vertices[v]
                            ),
                        ));
                    }
                }
            }
            for later in blocks.iter().skip(bi + 1) {
                for &u in block {
                    for &v in later {
                        if !self.has_edge_idx(u, v) || self.has_edge_idx(v, u) {
                            return Err(Error::internal(
                                op,
                                format!(
                                    "blocks not linearly ordered at ({}, {})",
                                    self.vertices[u], self.vertices[v]
                                ),
                            ));
                        }
                    }
                }
            }
        }
        Ok(CliqueOrder {
            blocks: blocks
                .into_iter()
                .map(|b| b.into_iter().map(|i| self.vertices[i]).collect())
                .collect(),
        })
    }

    /// First (Source) or last (Target) block of the condensation, with the
    /// extremal-clique properties re-verified directly.
    pub fn extremal_clique(&self, side: ExtremalSide) -> Result<Vec<Word>, Error> {
        let op = "extremal_clique";
        let cond = self.condensation()?;
        let block: Vec<Word> = match side {
            ExtremalSide::Source => cond.first_block().to_vec(),
            ExtremalSide::Target => cond.last_block().to_vec(),
        };
        let in_block: Vec<usize> =
            block.iter().map(|w| self.vertex_index(*w)).collect::<Result<_, _>>()?;
        let member = |v: usize| in_block.contains(&v);
        for &s in &in_block {
            for &t in &in_block {
                if !self.has_edge_idx(s, t) {
                    return Err(Error::internal(op, "clique not strong".to_string()));
                }
            }
            for u in 0..self.len() {
                if member(u) {
                    continue;
                }
                let (out_ok, in_ok) = match side {
                    ExtremalSide::Source => (self.has_edge_idx(s, u), !self.has_edge_idx(u, s)),
                    ExtremalSide::Target => (self.has_edge_idx(u, s), !self.has_edge_idx(s, u)),
                };
                if !out_ok || !in_ok {
                    return Err(Error::internal(
                        op,
                        format!("clique boundary violated at ({}, {})", self.vertices[s], self.vertices[u]),
                    ));
                }
            }
        }
        Ok(block)
    }

    /// Greedy dominating set of an s-tournament: repeatedly takes the vertex
    /// dominating the most remaining vertices (shortlex tie-break) and
    /// recurses on what is left. Result size is at most floor(log2 n) + 1
    /// and domination is re-verified before returning.
    pub fn dominating_set(&self) -> Result<Vec<Word>, Error> {
        let op = "dominating_set";
        let shape = self.s_tournament_report();
        if !shape.pass {
            return Err(Error::precondition(op, shape));
        }
        let n = self.len();
        let mut remaining = vec![u64::MAX; self.stride];
        trim_mask(&mut remaining, n);
        let mut chosen: Vec<usize> = Vec::new();
        while !is_zero(&remaining) {
            let mut best = usize::MAX;
            let mut best_count = 0u32;
            for v in 0..n {
                if !mask_bit(&remaining, v) {
                    continue;
                }
                let count = and_popcount(self.col(v), &remaining);
                if best == usize::MAX || count > best_count {
                    best = v;
                    best_count = count;
                }
            }
            chosen.push(best);
            for k in 0..self.stride {
                remaining[k] &= !self.col(best)[k];
            }
        }
        // re-verify domination and the size bound
        for u in 0..n {
            if !chosen.iter().any(|&v| self.has_edge_idx(u, v)) {
                return Err(Error::internal(op, format!("{} is not dominated", self.vertices[u])));
            }
        }
        let bound = (usize::BITS - 1 - (n as usize).leading_zeros()) as usize + 1;
        if chosen.len() > bound {
            return Err(Error::internal(
                op,
                format!("set size {} exceeds bound {bound} for {n} vertices", chosen.len()),
            ));
        }
        Ok(chosen.into_iter().map(|v| self.vertices[v]).collect())
    }

    fn has_source_node(&self, mask: &[u64]) -> bool {
        self.mask_members(mask).any(|v| covers_mask(self.row(v), mask))
    }

    fn has_target_node(&self, mask: &[u64]) -> bool {
        self.mask_members(mask).any(|v| covers_mask(self.col(v), mask))
    }

    fn has_source_clique(&self, mask: &[u64]) -> bool {
        // the only candidate is the set of vertices with arcs to all of mask
        let q: Vec<usize> = self.mask_members(mask).filter(|&v| covers_mask(self.row(v), mask)).collect();
        if q.is_empty() {
            return false;
        }
        // no arcs may enter the candidate from the rest of the subgraph
        q.iter().all(|&v| {
            self.mask_members(mask)
                .filter(|u| !q.contains(u))
                .all(|u| !self.has_edge_idx(u, v))
        })
    }

    fn has_target_clique(&self, mask: &[u64]) -> bool {
        let q: Vec<usize> = self.mask_members(mask).filter(|&v| covers_mask(self.col(v), mask)).collect();
        if q.is_empty() {
            return false;
        }
        q.iter().all(|&v| {
            self.mask_members(mask)
                .filter(|u| !q.contains(u))
                .all(|u| !self.has_edge_idx(v, u))
        })
    }

    fn mask_members<'a>(&'a self, mask: &'a [u64]) -> impl Iterator<Item = usize> + 'a {
        (0..self.len()).filter(move |&v| mask_bit(mask, v))
    }

    /// Evaluates four independent formulations of the order structure and
    /// reports whether they agree. For s-tournaments: transitivity, absence
    /// of long cycles, every nonempty induced subgraph has a source node,
    /// every nonempty induced subgraph has a target node. For complete
    /// digraphs the node conditions become strong-clique conditions and
    /// cycles must close into strong cliques. Subgraphs are quantified
    /// exhaustively up to 12 vertices, otherwise over all shortlex-suffix
    /// subsets plus 1000 seeded random subsets.
    pub fn verify_equivalences(&self, seed: u64) -> Result<AgreementReport, Error> {
        let class = self.classify();
        let complete = self.completeness_report();
        if !complete.pass {
            return Err(Error::precondition("verify_equivalences", complete));
        }
        let v1 = self.is_transitive().pass;
        let (suite, v2, v3, v4);
        if class.s_tournament {
            suite = "s-tournament";
            v2 = self.long_cycle().is_none();
            v3 = self.forall_subgraphs(seed, |g, m| g.has_source_node(m));
            v4 = self.forall_subgraphs(seed, |g, m| g.has_target_node(m));
        } else {
            suite = "complete-digraph";
            v2 = self.sccs().iter().all(|comp| {
                comp.iter().all(|&u| comp.iter().all(|&v| self.has_edge_idx(u, v)))
            });
            v3 = self.forall_subgraphs(seed, |g, m| g.has_source_clique(m));
            v4 = self.forall_subgraphs(seed, |g, m| g.has_target_clique(m));
        }
        let verdicts = vec![v1, v2, v3, v4];
        let agree = verdicts.iter().all(|&x| x == v1);
        let report = if agree {
            PropertyReport::pass("order-equivalences", &self.name, (self.len() * self.len()) as u64, 0)
        } else {
            PropertyReport::fail(
                "order-equivalences",
                &self.name,
                (self.len() * self.len()) as u64,
                0,
                Witness::Split {
                    what: format!(
                        "suite={suite} transitive={v1} cycles={v2} sources={v3} targets={v4}"
                    ),
                },
            )
        };
        Ok(AgreementReport { verdicts, report })
    }

    fn forall_subgraphs(&self, seed: u64, check: impl Fn(&Digraph, &[u64]) -> bool) -> bool {
        let n = self.len();
        if n <= EXHAUSTIVE_SUBGRAPH_LIMIT {
            for raw in 1u64..(1u64 << n) {
                if !check(self, &[raw]) {
                    return false;
                }
            }
            return true;
        }
        // shortlex suffixes: drop the k smallest vertices
        for k in 0..n {
            let mut mask = vec![u64::MAX; self.stride];
            trim_mask(&mut mask, n);
            for v in 0..k {
                mask[v / 64] &= !(1u64 << (v % 64));
            }
            if !check(self, &mask) {
                return false;
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..1000 {
            let mut mask = vec![0u64; self.stride];
            for slot in mask.iter_mut() {
                *slot = rng.next_u64();
            }
            trim_mask(&mut mask, n);
            if is_zero(&mask) {
                mask[0] |= 1;
            }
            if !check(self, &mask) {
                return false;
            }
        }
        true
    }

    /// DOT rendering, vertices and arcs in deterministic order.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph selector {\n  rankdir=LR;\n");
        for w in &self.vertices {
            s.push_str(&format!("  \"{w}\";\n"));
        }
        for (i, x) in self.vertices.iter().enumerate() {
            for (j, y) in self.vertices.iter().enumerate() {
                if self.has_edge_idx(i, j) {
                    s.push_str(&format!("  \"{x}\" -> \"{y}\";\n"));
                }
            }
        }
        s.push_str("}\n");
        s
    }
}

fn popcount(bits: &[u64]) -> u32 {
    bits.iter().map(|w| w.count_ones()).sum()
}

fn and_popcount(a: &[u64], b: &[u64]) -> u32 {
    a.iter().zip(b).map(|(x, y)| (x & y).count_ones()).sum()
}

fn is_zero(bits: &[u64]) -> bool {
    bits.iter().all(|&w| w == 0)
}

fn mask_bit(bits: &[u64], i: usize) -> bool {
    bits[i / 64] >> (i % 64) & 1 == 1
}

/// Keeps only the first n bits.
fn trim_mask(bits: &mut [u64], n: usize) {
    for (k, slot) in bits.iter_mut().enumerate() {
        let lo = k * 64;
        if lo >= n {
            *slot = 0;
        } else if n - lo < 64 {
            *slot &= (1u64 << (n - lo)) - 1;
        }
    }
}

/// bits ⊇ the first n positions.
fn covers_all(bits: &[u64], n: usize) -> bool {
    let mut need = vec![u64::MAX; bits.len()];
    trim_mask(&mut need, n);
    need.iter().zip(bits).all(|(want, have)| want & !have == 0)
}

/// bits ⊇ mask.
fn covers_mask(bits: &[u64], mask: &[u64]) -> bool {
    mask.iter().zip(bits).all(|(want, have)| want & !have == 0)
}
