//! Multigraphs with an explicit arc space, and generators for the graph
//! families the transfer engine analyzes.
//!
//! Vertices and arcs are dense 0-based indices. The edge multiset is stored
//! canonically sorted so arc indexing is deterministic: edge instance `i`
//! owns arcs `2i` (tail -> head) and `2i + 1` (head -> tail), and the arc
//! reversal involution swaps them. A loop counts 2 toward the degree of its
//! vertex and contributes two arcs with the same tail.

use crate::{Error, Result};

/// Undirected multigraph. Loops allowed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiGraph {
    n: usize,
    /// Canonically sorted (u <= v) with multiplicities expanded on demand.
    edges: Vec<(usize, usize, usize)>,
    labels: Option<Vec<String>>,
}

impl MultiGraph {
    /// Build from an edge list `(u, v, multiplicity)`. Parallel entries for
    /// the same pair are merged; the edge multiset is sorted canonically.
    pub fn new(n: usize, edges: &[(usize, usize, usize)]) -> Result<Self> {
        let mut merged: std::collections::BTreeMap<(usize, usize), usize> =
            std::collections::BTreeMap::new();
        for &(u, v, m) in edges {
            if u >= n || v >= n {
                return Err(Error::Parameter(format!(
                    "edge ({u},{v}) endpoint out of range for {n} vertices"
                )));
            }
            if m == 0 {
                return Err(Error::Parameter(format!(
                    "edge ({u},{v}) has multiplicity 0"
                )));
            }
            *merged.entry((u.min(v), u.max(v))).or_insert(0) += m;
        }
        Ok(MultiGraph {
            n,
            edges: merged.into_iter().map(|((u, v), m)| (u, v, m)).collect(),
            labels: None,
        })
    }

    pub fn simple(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let with_mult: Vec<_> = edges.iter().map(|&(u, v)| (u, v, 1)).collect();
        Self::new(n, &with_mult)
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.n {
            return Err(Error::Parameter(format!(
                "{} labels for {} vertices",
                labels.len(),
                self.n
            )));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn n_vertices(&self) -> usize {
        self.n
    }

    /// Edge multiset as (u, v, multiplicity), canonically sorted.
    pub fn edges(&self) -> &[(usize, usize, usize)] {
        &self.edges
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Number of edges counting multiplicity.
    pub fn n_edge_instances(&self) -> usize {
        self.edges.iter().map(|&(_, _, m)| m).sum()
    }

    /// Degree with the loop-counts-twice convention.
    pub fn degree(&self, v: usize) -> usize {
        let mut d = 0;
        for &(a, b, m) in &self.edges {
            if a == v && b == v {
                d += 2 * m;
            } else if a == v || b == v {
                d += m;
            }
        }
        d
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.n];
        for &(a, b, m) in &self.edges {
            if a == b {
                d[a] += 2 * m;
            } else {
                d[a] += m;
                d[b] += m;
            }
        }
        d
    }

    /// Adjacency matrix with multiplicities; a loop contributes 2 on the
    /// diagonal.
    pub fn adjacency(&self) -> nalgebra::DMatrix<f64> {
        let mut a = nalgebra::DMatrix::zeros(self.n, self.n);
        for &(u, v, m) in &self.edges {
            if u == v {
                a[(u, u)] += 2.0 * m as f64;
            } else {
                a[(u, v)] += m as f64;
                a[(v, u)] += m as f64;
            }
        }
        a
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut adj = vec![Vec::new(); self.n];
        for &(u, v, _) in &self.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        let mut seen = vec![false; self.n];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut count = 1;
        while let Some(x) = stack.pop() {
            for &y in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    count += 1;
                    stack.push(y);
                }
            }
        }
        count == self.n
    }

    /// BFS distances from `src` (usize::MAX when unreachable).
    pub fn distances_from(&self, src: usize) -> Vec<usize> {
        let mut adj = vec![Vec::new(); self.n];
        for &(u, v, _) in &self.edges {
            if u != v {
                adj[u].push(v);
                adj[v].push(u);
            }
        }
        let mut dist = vec![usize::MAX; self.n];
        dist[src] = 0;
        let mut queue = std::collections::VecDeque::from([src]);
        while let Some(x) = queue.pop_front() {
            for &y in &adj[x] {
                if dist[y] == usize::MAX {
                    dist[y] = dist[x] + 1;
                    queue.push_back(y);
                }
            }
        }
        dist
    }
}

/// One arc of the arc space.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Arc {
    pub tail: usize,
    pub head: usize,
    /// Index of the owning edge instance.
    pub edge_instance: usize,
}

/// Indexed arc list with the reversal involution. Arc `2i` and `2i + 1`
/// belong to edge instance `i`; reversal swaps them (for a loop the two
/// arcs share tail and head but remain distinct).
#[derive(Debug, Clone)]
pub struct ArcSpace {
    pub arcs: Vec<Arc>,
    /// Endpoints per edge instance, canonical order.
    pub instances: Vec<(usize, usize)>,
}

impl ArcSpace {
    pub fn reversal(&self, arc: usize) -> usize {
        arc ^ 1
    }

    pub fn n_arcs(&self) -> usize {
        self.arcs.len()
    }

    /// Outgoing arcs of `v` in arc-index order.
    pub fn out_arcs(&self, v: usize) -> Vec<usize> {
        self.arcs
            .iter()
            .enumerate()
            .filter(|(_, a)| a.tail == v)
            .map(|(i, _)| i)
            .collect()
    }
}

/// Expand the edge multiset into the indexed arc space.
pub fn build_arc_space(g: &MultiGraph) -> ArcSpace {
    let mut arcs = Vec::with_capacity(2 * g.n_edge_instances());
    let mut instances = Vec::with_capacity(g.n_edge_instances());
    for &(u, v, m) in g.edges() {
        for _ in 0..m {
            let id = instances.len();
            instances.push((u, v));
            arcs.push(Arc {
                tail: u,
                head: v,
                edge_instance: id,
            });
            arcs.push(Arc {
                tail: v,
                head: u,
                edge_instance: id,
            });
        }
    }
    ArcSpace { arcs, instances }
}

/// Parameters of a 2-design.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DesignParams {
    pub v: usize,
    pub b: usize,
    pub r: usize,
    pub k: usize,
    pub lambda: usize,
}

/// Check that `blocks` over points `0..v` form a 2-design with 1 < k < v:
/// constant block size, constant replication r, constant pair count lambda,
/// and the arithmetic relations vr = bk, (v-1)/(k-1) = r/lambda.
pub fn validate_design(v: usize, blocks: &[Vec<usize>]) -> Result<DesignParams> {
    if blocks.is_empty() {
        return Err(Error::NotADesign("no blocks".into()));
    }
    let k = blocks[0].len();
    if k <= 1 || k >= v {
        return Err(Error::Parameter(format!(
            "block size k = {k} violates 1 < k < v = {v}"
        )));
    }
    for (i, blk) in blocks.iter().enumerate() {
        if blk.len() != k {
            return Err(Error::NotADesign(format!(
                "block {i} has size {} but k = {k}",
                blk.len()
            )));
        }
        let mut sorted = blk.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != k {
            return Err(Error::NotADesign(format!("block {i} repeats a point")));
        }
        if let Some(&p) = blk.iter().find(|&&p| p >= v) {
            return Err(Error::NotADesign(format!(
                "block {i} contains point {p} >= v = {v}"
            )));
        }
    }
    let b = blocks.len();
    let mut rep = vec![0usize; v];
    let mut pair = vec![vec![0usize; v]; v];
    for blk in blocks {
        for (i, &p) in blk.iter().enumerate() {
            rep[p] += 1;
            for &q in &blk[i + 1..] {
                pair[p.min(q)][p.max(q)] += 1;
            }
        }
    }
    let r = rep[0];
    if let Some(p) = (0..v).find(|&p| rep[p] != r) {
        return Err(Error::NotADesign(format!(
            "point {p} lies in {} blocks, point 0 in {r}",
            rep[p]
        )));
    }
    let lambda = pair[0][1];
    for p in 0..v {
        for q in (p + 1)..v {
            if pair[p][q] != lambda {
                return Err(Error::NotADesign(format!(
                    "pair ({p},{q}) lies in {} blocks, pair (0,1) in {lambda}",
                    pair[p][q]
                )));
            }
        }
    }
    if v * r != b * k {
        return Err(Error::NotADesign(format!("vr = {} but bk = {}", v * r, b * k)));
    }
    if (v - 1) * lambda != r * (k - 1) {
        return Err(Error::NotADesign(format!(
            "(v-1)/(k-1) = {}/{} does not equal r/lambda = {r}/{lambda}",
            v - 1,
            k - 1
        )));
    }
    Ok(DesignParams { v, b, r, k, lambda })
}

/// Bipartite point-block incidence graph: points 0..v, blocks v..v+b.
pub fn design_incidence(v: usize, blocks: &[Vec<usize>]) -> Result<MultiGraph> {
    validate_design(v, blocks)?;
    let mut edges = Vec::new();
    for (bi, blk) in blocks.iter().enumerate() {
        for &p in blk {
            edges.push((p, v + bi));
        }
    }
    MultiGraph::simple(v + blocks.len(), &edges)
}

/// Graph family generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FamilySpec {
    Cycle(usize),
    Complete(usize),
    CompleteMultipartite(Vec<usize>),
    Path(usize),
    BlowUp(Box<FamilySpec>, usize),
    DesignIncidence { v: usize, blocks: Vec<Vec<usize>> },
    GnmFamily(usize, usize),
    HammingH33,
    FoldedCube(usize),
    Figure2Graph,
    Petersen,
    Paley(usize),
}

pub fn generate(family: &FamilySpec) -> Result<MultiGraph> {
    match family {
        FamilySpec::Cycle(n) => cycle(*n),
        FamilySpec::Complete(n) => complete(*n),
        FamilySpec::CompleteMultipartite(parts) => complete_multipartite(parts),
        FamilySpec::Path(n) => path(*n),
        FamilySpec::BlowUp(base, m) => blow_up(&generate(base)?, *m),
        FamilySpec::DesignIncidence { v, blocks } => design_incidence(*v, blocks),
        FamilySpec::GnmFamily(n, m) => gnm(*n, *m),
        FamilySpec::HammingH33 => hamming_h33(),
        FamilySpec::FoldedCube(d) => folded_cube(*d),
        FamilySpec::Figure2Graph => Ok(figure2().0),
        FamilySpec::Petersen => petersen(),
        FamilySpec::Paley(q) => paley(*q),
    }
}

pub fn cycle(n: usize) -> Result<MultiGraph> {
    if n < 3 {
        return Err(Error::Parameter(format!("cycle needs n >= 3, got {n}")));
    }
    let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    MultiGraph::simple(n, &edges)
}

pub fn complete(n: usize) -> Result<MultiGraph> {
    if n < 1 {
        return Err(Error::Parameter("complete graph needs n >= 1".into()));
    }
    let mut edges = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            edges.push((u, v));
        }
    }
    MultiGraph::simple(n, &edges)
}

pub fn path(n: usize) -> Result<MultiGraph> {
    if n < 1 {
        return Err(Error::Parameter("path needs n >= 1".into()));
    }
    let edges: Vec<_> = (0..n.saturating_sub(1)).map(|i| (i, i + 1)).collect();
    MultiGraph::simple(n, &edges)
}

pub fn complete_multipartite(parts: &[usize]) -> Result<MultiGraph> {
    if parts.is_empty() || parts.contains(&0) {
        return Err(Error::Parameter("parts must be nonempty positive sizes".into()));
    }
    let n: usize = parts.iter().sum();
    let mut part_of = Vec::with_capacity(n);
    for (pi, &sz) in parts.iter().enumerate() {
        part_of.extend(std::iter::repeat_n(pi, sz));
    }
    let mut edges = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            if part_of[u] != part_of[v] {
                edges.push((u, v));
            }
        }
    }
    MultiGraph::simple(n, &edges)
}

/// Lexicographic product with the empty graph on m vertices: vertex (u, a)
/// maps to index u*m + a and the adjacency is A_g (x) J_m. The base graph
/// must be loop-free.
pub fn blow_up(g: &MultiGraph, m: usize) -> Result<MultiGraph> {
    if m < 1 {
        return Err(Error::Parameter("blow-up needs m >= 1".into()));
    }
    if g.edges().iter().any(|&(u, v, _)| u == v) {
        return Err(Error::Parameter("blow-up base graph must be loop-free".into()));
    }
    let mut edges = Vec::new();
    for &(u, v, mult) in g.edges() {
        for a in 0..m {
            for b in 0..m {
                edges.push((u * m + a, v * m + b, mult));
            }
        }
    }
    MultiGraph::new(g.n_vertices() * m, &edges)
}

/// The 5-layer family: hub path u - {x_1..x_n} - v - {y_1..y_m} - w with
/// u = 0, x_i = 1..=n, v = n+1, y_j = n+2..=n+m+1, w = n+m+2.
pub fn gnm(n: usize, m: usize) -> Result<MultiGraph> {
    if n < 1 || m < 1 {
        return Err(Error::Parameter("family needs n, m >= 1".into()));
    }
    let (u, v, w) = (0, n + 1, n + m + 2);
    let mut edges = Vec::new();
    for i in 1..=n {
        edges.push((u, i));
        edges.push((i, v));
    }
    for j in (n + 2)..(n + m + 2) {
        edges.push((v, j));
        edges.push((j, w));
    }
    MultiGraph::simple(n + m + 3, &edges)
}

/// Endpoint indices (u, w) of the `gnm` family.
pub fn gnm_terminals(n: usize, m: usize) -> (usize, usize) {
    (0, n + m + 2)
}

/// Hamming graph H(3,3): vertices {0,1,2}^3, adjacent iff they differ in
/// exactly one coordinate. Vertex (a,b,c) has index 9a + 3b + c.
pub fn hamming_h33() -> Result<MultiGraph> {
    let mut edges = Vec::new();
    for x in 0..27usize {
        let coords = [x / 9, (x / 3) % 3, x % 3];
        for pos in 0..3 {
            for val in 0..3 {
                if val == coords[pos] {
                    continue;
                }
                let mut c = coords;
                c[pos] = val;
                let y = 9 * c[0] + 3 * c[1] + c[2];
                if x < y {
                    edges.push((x, y));
                }
            }
        }
    }
    MultiGraph::simple(27, &edges)
}

/// Folded d-cube: the (d-1)-dimensional hypercube plus a perfect matching
/// between antipodal vertices. Vertices are the integers 0..2^(d-1) read as
/// bit strings.
pub fn folded_cube(d: usize) -> Result<MultiGraph> {
    if !(2..=24).contains(&d) {
        return Err(Error::Parameter(format!("folded cube needs 2 <= d <= 24, got {d}")));
    }
    let bits = d - 1;
    let n = 1usize << bits;
    let full = n - 1;
    let mut edges = Vec::new();
    for x in 0..n {
        for b in 0..bits {
            let y = x ^ (1 << b);
            if x < y {
                edges.push((x, y));
            }
        }
        let y = x ^ full;
        if x < y {
            edges.push((x, y));
        }
    }
    MultiGraph::simple(n, &edges)
}

/// The 7-vertex graph: a 5-vertex path 4 - 2 - 0 - 1 - 3 plus two apex
/// vertices 5 and 6 adjacent to the four path vertices {2, 0, 1, 3}.
/// Returns (graph, u, v) with the distinguished pair u = 0, v = 3.
pub fn figure2() -> (MultiGraph, usize, usize) {
    let edges = [
        (0, 1),
        (0, 2),
        (0, 5),
        (0, 6),
        (1, 3),
        (1, 5),
        (1, 6),
        (2, 4),
        (2, 5),
        (2, 6),
        (3, 5),
        (3, 6),
    ];
    (MultiGraph::simple(7, &edges).expect("static edge list"), 0, 3)
}

/// Petersen graph: outer 5-cycle 0..4, inner pentagram 5..9, spokes i - 5+i.
pub fn petersen() -> Result<MultiGraph> {
    let mut edges = Vec::new();
    for i in 0..5 {
        edges.push((i, (i + 1) % 5));
        edges.push((i, 5 + i));
        edges.push((5 + i, 5 + (i + 2) % 5));
    }
    MultiGraph::simple(10, &edges)
}

/// Paley graph on q vertices (q a prime congruent to 1 mod 4): i ~ j iff
/// i - j is a nonzero quadratic residue.
pub fn paley(q: usize) -> Result<MultiGraph> {
    if q < 5 || q % 4 != 1 {
        return Err(Error::Parameter(format!("Paley graph needs q = 1 mod 4, got {q}")));
    }
    let is_prime = |n: usize| n > 1 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d));
    if !is_prime(q) {
        return Err(Error::Parameter(format!("Paley graph needs q prime, got {q}")));
    }
    let residues: std::collections::BTreeSet<usize> = (1..q).map(|x| x * x % q).collect();
    let mut edges = Vec::new();
    for i in 0..q {
        for j in (i + 1)..q {
            if residues.contains(&((j - i) % q)) {
                edges.push((i, j));
            }
        }
    }
    MultiGraph::simple(q, &edges)
}
