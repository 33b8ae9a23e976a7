//! Rotation systems for 2-cell orientable embeddings, with face tracing and
//! the toroidal (n,m)-grid generator including its degenerate multigraph
//! cases n, m in {1, 2}.
//!
//! Face convention: the next arc of a facial walk is the rotation-successor
//! of the reversal of the current arc. Faces are traced starting from the
//! smallest unvisited arc index, so the face list is deterministic.

use crate::graphs::{build_arc_space, ArcSpace, MultiGraph};
use crate::{Error, Result};

/// A graph together with a rotation system and its traced faces.
#[derive(Debug, Clone)]
pub struct RotationMap {
    graph: MultiGraph,
    arc_space: ArcSpace,
    /// Cyclic order of outgoing arcs at each vertex.
    rotation: Vec<Vec<usize>>,
    /// Each face is the cyclic arc sequence of its boundary walk.
    faces: Vec<Vec<usize>>,
    /// Optional 2D vertex positions for rendering.
    layout: Option<Vec<(f64, f64)>>,
}

impl RotationMap {
    /// Validate the rotation (each outgoing arc listed exactly once at its
    /// tail vertex) and trace the faces.
    pub fn new(graph: MultiGraph, rotation: Vec<Vec<usize>>) -> Result<Self> {
        let arc_space = build_arc_space(&graph);
        if rotation.len() != graph.n_vertices() {
            return Err(Error::Malformed(format!(
                "rotation lists {} vertices, graph has {}",
                rotation.len(),
                graph.n_vertices()
            )));
        }
        let mut seen = vec![false; arc_space.n_arcs()];
        for (v, cyc) in rotation.iter().enumerate() {
            for &a in cyc {
                if a >= arc_space.n_arcs() {
                    return Err(Error::Malformed(format!("arc id {a} out of range")));
                }
                if arc_space.arcs[a].tail != v {
                    return Err(Error::Malformed(format!(
                        "arc {a} has tail {}, listed at vertex {v}",
                        arc_space.arcs[a].tail
                    )));
                }
                if seen[a] {
                    return Err(Error::Malformed(format!("arc {a} listed twice")));
                }
                seen[a] = true;
            }
        }
        if let Some(a) = seen.iter().position(|&s| !s) {
            return Err(Error::Malformed(format!("arc {a} missing from rotation")));
        }
        let faces = trace_faces(&arc_space, &rotation);
        let map = RotationMap {
            graph,
            arc_space,
            rotation,
            faces,
            layout: None,
        };
        map.check_euler()?;
        Ok(map)
    }

    pub fn with_layout(mut self, layout: Vec<(f64, f64)>) -> Self {
        self.layout = Some(layout);
        self
    }

    pub fn graph(&self) -> &MultiGraph {
        &self.graph
    }

    pub fn arc_space(&self) -> &ArcSpace {
        &self.arc_space
    }

    pub fn rotation(&self) -> &[Vec<usize>] {
        &self.rotation
    }

    pub fn faces(&self) -> &[Vec<usize>] {
        &self.faces
    }

    pub fn layout(&self) -> Option<&[(f64, f64)]> {
        self.layout.as_deref()
    }

    pub fn n_faces(&self) -> usize {
        self.faces.len()
    }

    pub fn face_degree(&self, f: usize) -> usize {
        self.faces[f].len()
    }

    /// Number of times vertex `v` appears on the boundary walk of face `f`,
    /// counted as the number of face arcs with tail `v`.
    pub fn alpha(&self, v: usize, f: usize) -> usize {
        self.faces[f]
            .iter()
            .filter(|&&a| self.arc_space.arcs[a].tail == v)
            .count()
    }

    /// Vertex-face incidence matrix with alpha multiplicities.
    pub fn vertex_face_incidence(&self) -> nalgebra::DMatrix<f64> {
        let n = self.graph.n_vertices();
        let mut c = nalgebra::DMatrix::zeros(n, self.faces.len());
        for (fi, face) in self.faces.iter().enumerate() {
            for &a in face {
                c[(self.arc_space.arcs[a].tail, fi)] += 1.0;
            }
        }
        c
    }

    pub fn genus(&self) -> usize {
        let v = self.graph.n_vertices() as i64;
        let e = self.graph.n_edge_instances() as i64;
        let f = self.faces.len() as i64;
        ((2 - v + e - f) / 2) as usize
    }

    fn check_euler(&self) -> Result<()> {
        let v = self.graph.n_vertices() as i64;
        let e = self.graph.n_edge_instances() as i64;
        let f = self.faces.len() as i64;
        let chi_defect = 2 - v + e - f;
        if chi_defect < 0 || chi_defect % 2 != 0 {
            return Err(Error::Malformed(format!(
                "Euler characteristic violation: V={v} E={e} F={f}"
            )));
        }
        let total: usize = self.faces.iter().map(|f| f.len()).sum();
        if total != self.arc_space.n_arcs() {
            return Err(Error::Malformed("faces do not partition the arc space".into()));
        }
        Ok(())
    }

    /// The same embedding with the global orientation reversed (every
    /// rotation cycle reversed).
    pub fn reversed_orientation(&self) -> RotationMap {
        let rotation = self
            .rotation
            .iter()
            .map(|cyc| cyc.iter().rev().copied().collect())
            .collect();
        RotationMap::new(self.graph.clone(), rotation).expect("reversal preserves validity")
    }
}

/// Orbit decomposition of arc -> rotation-successor(reversal(arc)).
fn trace_faces(arc_space: &ArcSpace, rotation: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let n_arcs = arc_space.n_arcs();
    let mut pos = vec![(0usize, 0usize); n_arcs];
    for (v, cyc) in rotation.iter().enumerate() {
        for (k, &a) in cyc.iter().enumerate() {
            pos[a] = (v, k);
        }
    }
    let next = |a: usize| -> usize {
        let r = arc_space.reversal(a);
        let (v, k) = pos[r];
        rotation[v][(k + 1) % rotation[v].len()]
    };
    let mut seen = vec![false; n_arcs];
    let mut faces = Vec::new();
    for start in 0..n_arcs {
        if seen[start] {
            continue;
        }
        let mut face = Vec::new();
        let mut a = start;
        while !seen[a] {
            seen[a] = true;
            face.push(a);
            a = next(a);
        }
        faces.push(face);
    }
    faces
}

/// Rotation system where each vertex lists its outgoing arcs in ascending
/// arc-index order. Any rotation is a valid orientable embedding; this one
/// is the deterministic default for plain graphs.
pub fn default_rotation(g: &MultiGraph) -> Vec<Vec<usize>> {
    let arc_space = build_arc_space(g);
    (0..g.n_vertices()).map(|v| arc_space.out_arcs(v)).collect()
}

/// Toroidal (n,m)-grid: the Cartesian product of cycles C_n and C_m
/// embedded in the torus with the straight-ahead rotation
/// (east, north, west, south) at every vertex. Yields nm quadrilateral
/// faces and genus 1 for all n, m >= 1; n or m in {1, 2} produce loops or
/// doubled edges.
pub fn toroidal_grid(n: usize, m: usize) -> Result<RotationMap> {
    if n < 1 || m < 1 {
        return Err(Error::Parameter("grid needs n, m >= 1".into()));
    }
    let vid = |i: usize, j: usize| (i % n) * m + (j % m);
    // Logical edge instances: for each cell (i,j), its eastward edge h(i,j)
    // and its northward edge v(i,j). These survive multiset merging below
    // via an explicit logical-to-canonical instance map.
    let mut logical_ends = Vec::with_capacity(2 * n * m);
    let mut h_inst = vec![vec![0usize; m]; n];
    let mut v_inst = vec![vec![0usize; m]; n];
    for i in 0..n {
        for j in 0..m {
            h_inst[i][j] = logical_ends.len();
            logical_ends.push((vid(i, j), vid(i + 1, j)));
            v_inst[i][j] = logical_ends.len();
            logical_ends.push((vid(i, j), vid(i, j + 1)));
        }
    }
    let edges: Vec<(usize, usize, usize)> =
        logical_ends.iter().map(|&(u, v)| (u, v, 1)).collect();
    let graph = MultiGraph::new(n * m, &edges)?;
    let arc_space = build_arc_space(&graph);

    // Canonical instances of one endpoint pair are consecutive; hand them
    // out to the logical edges of that pair in generation order.
    let mut next_of_pair: std::collections::BTreeMap<(usize, usize), usize> =
        std::collections::BTreeMap::new();
    for (canon, &pair) in arc_space.instances.iter().enumerate() {
        next_of_pair.entry(pair).or_insert(canon);
    }
    let mut canon_of = vec![0usize; logical_ends.len()];
    for (logi, &(u, v)) in logical_ends.iter().enumerate() {
        let key = (u.min(v), u.max(v));
        let slot = next_of_pair.get_mut(&key).expect("pair present");
        canon_of[logi] = *slot;
        *slot += 1;
    }

    // Pick the outgoing arc of an instance at a vertex. A loop instance has
    // both arcs outgoing; the positive direction takes the even arc and the
    // negative direction its reversal, which realizes the straight-ahead
    // torus rotation in the degenerate cases.
    let arc_of = |logical: usize, vtx: usize, positive: bool| -> usize {
        let inst = canon_of[logical];
        let (a, b) = arc_space.instances[inst];
        if a == b {
            if positive {
                2 * inst
            } else {
                2 * inst + 1
            }
        } else if arc_space.arcs[2 * inst].tail == vtx {
            2 * inst
        } else {
            2 * inst + 1
        }
    };
    // Cyclic order at every vertex: east, north, west, south.
    let mut rotation = vec![Vec::with_capacity(4); n * m];
    for i in 0..n {
        for j in 0..m {
            let v = vid(i, j);
            let east = arc_of(h_inst[i][j], v, true);
            let north = arc_of(v_inst[i][j], v, true);
            let west = arc_of(h_inst[(i + n - 1) % n][j], v, false);
            let south = arc_of(v_inst[i][(j + m - 1) % m], v, false);
            rotation[v] = vec![east, north, west, south];
        }
    }
    let layout: Vec<(f64, f64)> = (0..n * m)
        .map(|v| ((v / m) as f64, (v % m) as f64))
        .collect();
    Ok(RotationMap::new(graph, rotation)?.with_layout(layout))
}
