//! Two-reflection walks U = (2MM^T - I)(2NN^T - I) assembled from four
//! sources: generic orthonormal frames, the arc-reversal (Grover) walk, the
//! vertex-face walk of an embedded graph, and Szegedy's bipartite walk.
//!
//! Everything that matters for state transfer lives in the projected
//! transition matrix B = N^T U N = 2DD^T - I with discriminant D = N^T M;
//! powers of U project to Chebyshev polynomials, B_t = T_t(B). The dense U
//! is kept for the time-evolution oracle only.

use nalgebra::DMatrix;

use crate::embeddings::RotationMap;
use crate::exact::{rat, Rat, RatMatrix};
use crate::graphs::{build_arc_space, MultiGraph};
use crate::{Error, Result};

pub const FRAME_ORTHO_TOL: f64 = 1e-12;

/// Matrix with orthonormal columns; rows indexed by the walk's state basis.
#[derive(Debug, Clone)]
pub struct ReflectionFrame {
    pub matrix: DMatrix<f64>,
}

impl ReflectionFrame {
    /// Checks column orthonormality to `FRAME_ORTHO_TOL`.
    pub fn new(matrix: DMatrix<f64>) -> Result<Self> {
        let gram = matrix.transpose() * &matrix;
        let k = gram.nrows();
        for i in 0..k {
            for j in 0..k {
                let expect = if i == j { 1.0 } else { 0.0 };
                if (gram[(i, j)] - expect).abs() > FRAME_ORTHO_TOL {
                    return Err(Error::Malformed(format!(
                        "frame columns not orthonormal: gram({i},{j}) = {}",
                        gram[(i, j)]
                    )));
                }
            }
        }
        Ok(ReflectionFrame { matrix })
    }

    pub fn n_rows(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn n_cols(&self) -> usize {
        self.matrix.ncols()
    }
}

/// Where a walk came from; drives walk-specific reasoning downstream
/// (gamma sign for arc-reversal walks, exact conjugates, reports).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WalkKind {
    ArcReversal,
    VertexFace,
    Szegedy,
    Generic,
}

impl WalkKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            WalkKind::ArcReversal => "arc-reversal",
            WalkKind::VertexFace => "vertex-face",
            WalkKind::Szegedy => "szegedy",
            WalkKind::Generic => "generic",
        }
    }
}

/// A two-reflection walk with its derived operators.
#[derive(Debug, Clone)]
pub struct TwoReflectionWalk {
    pub kind: WalkKind,
    pub n_frame: ReflectionFrame,
    pub m_frame: ReflectionFrame,
    /// Dense unitary on the state basis.
    pub u: DMatrix<f64>,
    /// Projected transition matrix 2DD^T - I on the X index set.
    pub b: DMatrix<f64>,
    /// Exact rational matrix similar to B via a positive diagonal
    /// conjugation, when the walk supports exact arithmetic.
    pub exact_b: Option<RatMatrix>,
    /// Exact rational U for the combinatorial walks (entries of both
    /// reflection factors are rational).
    pub exact_u: Option<RatMatrix>,
    /// Whether the underlying structure is connected (used by the
    /// gamma = 1 rule for arc-reversal walks).
    pub connected: Option<bool>,
}

impl TwoReflectionWalk {
    fn assemble(
        kind: WalkKind,
        n_frame: ReflectionFrame,
        m_frame: ReflectionFrame,
        exact_b: Option<RatMatrix>,
        exact_u: Option<RatMatrix>,
        connected: Option<bool>,
    ) -> Result<Self> {
        if n_frame.n_rows() != m_frame.n_rows() {
            return Err(Error::Malformed(format!(
                "frames disagree on the state dimension: {} vs {}",
                n_frame.n_rows(),
                m_frame.n_rows()
            )));
        }
        let dim = n_frame.n_rows();
        let eye = DMatrix::identity(dim, dim);
        let refl_q = 2.0 * &n_frame.matrix * n_frame.matrix.transpose() - &eye;
        let refl_p = 2.0 * &m_frame.matrix * m_frame.matrix.transpose() - &eye;
        let u = refl_p * refl_q;
        let d = n_frame.matrix.transpose() * &m_frame.matrix;
        let b =
            2.0 * &d * d.transpose() - DMatrix::identity(n_frame.n_cols(), n_frame.n_cols());
        Ok(TwoReflectionWalk {
            kind,
            n_frame,
            m_frame,
            u,
            b,
            exact_b,
            exact_u,
            connected,
        })
    }

    /// Dimension of the state basis (arcs).
    pub fn state_dim(&self) -> usize {
        self.u.nrows()
    }

    /// Dimension of B (the X index set).
    pub fn projected_dim(&self) -> usize {
        self.b.nrows()
    }

    /// Discriminant D = N^T M.
    pub fn discriminant(&self) -> DMatrix<f64> {
        self.n_frame.matrix.transpose() * &self.m_frame.matrix
    }

    /// U^t phi by repeated multiplication.
    pub fn evolve(&self, phi: &nalgebra::DVector<f64>, t: usize) -> nalgebra::DVector<f64> {
        let mut state = phi.clone();
        for _ in 0..t {
            state = &self.u * state;
        }
        state
    }

    /// The initial state phi_x = N e_x.
    pub fn vertex_state(&self, x: usize) -> nalgebra::DVector<f64> {
        nalgebra::DVector::from_iterator(
            self.state_dim(),
            self.n_frame.matrix.column(x).iter().copied(),
        )
    }

    /// B_t = T_t(B) via the three-term Chebyshev recurrence.
    pub fn bt(&self, t: usize) -> DMatrix<f64> {
        chebyshev_t_matrix(&self.b, t)
    }

    /// The series B_0(row,col), ..., B_{t_max}(row,col).
    pub fn bt_entry_series(&self, row: usize, col: usize, t_max: usize) -> Vec<f64> {
        let dim = self.projected_dim();
        let mut prev = DMatrix::<f64>::identity(dim, dim);
        let mut cur = self.b.clone();
        let mut out = Vec::with_capacity(t_max + 1);
        out.push(prev[(row, col)]);
        if t_max == 0 {
            return out;
        }
        out.push(cur[(row, col)]);
        for _ in 2..=t_max {
            let next = 2.0 * &self.b * &cur - &prev;
            prev = cur;
            cur = next;
            out.push(cur[(row, col)]);
        }
        out
    }

    /// Squared distance m(t, gamma)^2 = ||U^t N e_u - gamma N e_v||^2
    /// = 2 - 2 gamma B_t(v, u).
    pub fn fidelity_gap(&self, u: usize, v: usize, t: usize, gamma: f64) -> f64 {
        let bt = self.bt(t);
        2.0 - 2.0 * gamma * bt[(v, u)]
    }
}

/// T_t(B) for a symmetric matrix argument.
pub fn chebyshev_t_matrix(b: &DMatrix<f64>, t: usize) -> DMatrix<f64> {
    let dim = b.nrows();
    if t == 0 {
        return DMatrix::identity(dim, dim);
    }
    let mut prev = DMatrix::identity(dim, dim);
    let mut cur = b.clone();
    for _ in 1..t {
        let next = 2.0 * b * &cur - &prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Arc-reversal (Grover) walk: N is the normalized arc-vertex incidence
/// matrix, M the normalized arc-edge incidence matrix, so that
/// 2MM^T - I is the arc-reversal permutation and B is the normalized
/// adjacency matrix D^{-1/2} A D^{-1/2}.
pub fn arc_reversal_walk(g: &MultiGraph) -> Result<TwoReflectionWalk> {
    let n = g.n_vertices();
    if n == 0 {
        return Err(Error::Parameter("empty graph".into()));
    }
    let degrees = g.degrees();
    if let Some(v) = (0..n).find(|&v| degrees[v] == 0) {
        return Err(Error::Parameter(format!(
            "vertex {v} is isolated; the arc-reversal frame is undefined"
        )));
    }
    let arc_space = build_arc_space(g);
    let n_arcs = arc_space.n_arcs();
    let mut nmat = DMatrix::zeros(n_arcs, n);
    for (a, arc) in arc_space.arcs.iter().enumerate() {
        nmat[(a, arc.tail)] = 1.0 / (degrees[arc.tail] as f64).sqrt();
    }
    let n_inst = arc_space.instances.len();
    let mut mmat = DMatrix::zeros(n_arcs, n_inst);
    for (a, arc) in arc_space.arcs.iter().enumerate() {
        mmat[(a, arc.edge_instance)] = std::f64::consts::FRAC_1_SQRT_2;
    }
    // Exact conjugate of B: D^{-1} A, similar to B via D^{1/2}.
    let mut exact_b = RatMatrix::zeros(n);
    let adj = g.adjacency();
    for i in 0..n {
        for j in 0..n {
            exact_b[(i, j)] = rat(adj[(i, j)] as i64, degrees[i] as i64);
        }
    }
    let exact_u = exact_arc_reversal_u(&arc_space, &degrees);
    TwoReflectionWalk::assemble(
        WalkKind::ArcReversal,
        ReflectionFrame::new(nmat)?,
        ReflectionFrame::new(mmat)?,
        Some(exact_b),
        Some(exact_u),
        Some(g.is_connected()),
    )
}

fn exact_arc_reversal_u(arc_space: &crate::graphs::ArcSpace, degrees: &[usize]) -> RatMatrix {
    let n_arcs = arc_space.n_arcs();
    // U = R (2NN^T - I); row a of U is row reversal(a) of 2NN^T - I.
    let mut u = RatMatrix::zeros(n_arcs);
    for a in 0..n_arcs {
        let ra = arc_space.reversal(a);
        let tail = arc_space.arcs[ra].tail;
        for b in 0..n_arcs {
            let mut val = if arc_space.arcs[b].tail == tail {
                rat(2, degrees[tail] as i64)
            } else {
                Rat::from_integer(0.into())
            };
            if b == ra {
                val -= Rat::from_integer(1.into());
            }
            u[(a, b)] = val;
        }
    }
    u
}

/// Vertex-face walk on an embedded graph: N is the normalized arc-vertex
/// incidence matrix and M the normalized arc-face incidence matrix. The
/// discriminant entry is alpha(v,f)/sqrt(d(v) d(f)).
pub fn vertex_face_walk(map: &RotationMap) -> Result<TwoReflectionWalk> {
    let g = map.graph();
    let degrees = g.degrees();
    if let Some(v) = (0..g.n_vertices()).find(|&v| degrees[v] == 0) {
        return Err(Error::Parameter(format!("vertex {v} is isolated")));
    }
    let arc_space = map.arc_space();
    let n_arcs = arc_space.n_arcs();
    let mut nmat = DMatrix::zeros(n_arcs, g.n_vertices());
    for (a, arc) in arc_space.arcs.iter().enumerate() {
        nmat[(a, arc.tail)] = 1.0 / (degrees[arc.tail] as f64).sqrt();
    }
    let mut mmat = DMatrix::zeros(n_arcs, map.n_faces());
    for (fi, face) in map.faces().iter().enumerate() {
        let scale = 1.0 / (face.len() as f64).sqrt();
        for &a in face {
            mmat[(a, fi)] = scale;
        }
    }
    // Exact conjugate of B: 2 D_v^{-1} C D_f^{-1} C^T - I with C the
    // alpha-weighted vertex-face incidence.
    let nv = g.n_vertices();
    let nf = map.n_faces();
    let mut exact_b = RatMatrix::zeros(nv);
    for u in 0..nv {
        for v in 0..nv {
            let mut acc = Rat::from_integer(0.into());
            for f in 0..nf {
                let au = map.alpha(u, f) as i64;
                let av = map.alpha(v, f) as i64;
                if au != 0 && av != 0 {
                    acc += rat(2 * au * av, (degrees[u] * map.face_degree(f)) as i64);
                }
            }
            if u == v {
                acc -= Rat::from_integer(1.into());
            }
            exact_b[(u, v)] = acc;
        }
    }
    let exact_u = exact_vertex_face_u(map, &degrees);
    TwoReflectionWalk::assemble(
        WalkKind::VertexFace,
        ReflectionFrame::new(nmat)?,
        ReflectionFrame::new(mmat)?,
        Some(exact_b),
        Some(exact_u),
        Some(g.is_connected()),
    )
}

fn exact_vertex_face_u(map: &RotationMap, degrees: &[usize]) -> RatMatrix {
    let arc_space = map.arc_space();
    let n_arcs = arc_space.n_arcs();
    let mut face_of = vec![0usize; n_arcs];
    for (fi, face) in map.faces().iter().enumerate() {
        for &a in face {
            face_of[a] = fi;
        }
    }
    let mut refl_p = RatMatrix::zeros(n_arcs);
    let mut refl_q = RatMatrix::zeros(n_arcs);
    for a in 0..n_arcs {
        for b in 0..n_arcs {
            let mut p = if face_of[a] == face_of[b] {
                rat(2, map.face_degree(face_of[a]) as i64)
            } else {
                Rat::from_integer(0.into())
            };
            let tail_a = arc_space.arcs[a].tail;
            let mut q = if tail_a == arc_space.arcs[b].tail {
                rat(2, degrees[tail_a] as i64)
            } else {
                Rat::from_integer(0.into())
            };
            if a == b {
                p -= Rat::from_integer(1.into());
                q -= Rat::from_integer(1.into());
            }
            refl_p[(a, b)] = p;
            refl_q[(a, b)] = q;
        }
    }
    refl_p.mul(&refl_q)
}

/// Szegedy's bipartite walk from row-stochastic data: `p[y][x]` is the
/// probability vector attached to y over X, `q[x][y]` the vector attached
/// to x over Y. The state basis is X x Y in row-major order (x * |Y| + y).
pub fn szegedy_walk(p: &[Vec<f64>], q: &[Vec<f64>]) -> Result<TwoReflectionWalk> {
    let ny = p.len();
    let nx = q.len();
    if nx == 0 || ny == 0 {
        return Err(Error::Parameter("empty index set".into()));
    }
    let check_stochastic = |rows: &[Vec<f64>], len: usize, name: &str| -> Result<()> {
        for (i, row) in rows.iter().enumerate() {
            if row.len() != len {
                return Err(Error::Parameter(format!(
                    "{name}[{i}] has length {}, expected {len}",
                    row.len()
                )));
            }
            if row.iter().any(|&x| x < -1e-15) {
                return Err(Error::Parameter(format!("{name}[{i}] has a negative entry")));
            }
            let sum: f64 = row.iter().sum();
            if (sum - 1.0).abs() > 1e-9 {
                return Err(Error::Parameter(format!(
                    "{name}[{i}] sums to {sum}, expected 1"
                )));
            }
        }
        Ok(())
    };
    check_stochastic(p, nx, "p")?;
    check_stochastic(q, ny, "q")?;
    let dim = nx * ny;
    let mut mmat = DMatrix::zeros(dim, ny);
    for y in 0..ny {
        for x in 0..nx {
            mmat[(x * ny + y, y)] = p[y][x].max(0.0).sqrt();
        }
    }
    let mut nmat = DMatrix::zeros(dim, nx);
    for x in 0..nx {
        for y in 0..ny {
            nmat[(x * ny + y, x)] = q[x][y].max(0.0).sqrt();
        }
    }
    TwoReflectionWalk::assemble(
        WalkKind::Szegedy,
        ReflectionFrame::new(nmat)?,
        ReflectionFrame::new(mmat)?,
        None,
        None,
        None,
    )
}

/// Walk from arbitrary orthonormal frames sharing a state basis.
pub fn generic_walk(
    n_frame: ReflectionFrame,
    m_frame: ReflectionFrame,
) -> Result<TwoReflectionWalk> {
    TwoReflectionWalk::assemble(WalkKind::Generic, n_frame, m_frame, None, None, None)
}

/// Try to upgrade a walk to exact arithmetic by recognizing every entry of
/// B as a small rational. Succeeds only when the recognized matrix
/// reproduces B to within `tol`; used for generic and Szegedy walks whose
/// frames happen to produce a rational B.
pub fn rationalize_b(walk: &TwoReflectionWalk, max_den: u64, tol: f64) -> Result<RatMatrix> {
    let dim = walk.projected_dim();
    let mut out = RatMatrix::zeros(dim);
    for i in 0..dim {
        for j in 0..dim {
            match crate::exact::recognize_rational(walk.b[(i, j)], max_den, tol) {
                Some(r) => out[(i, j)] = r,
                None => {
                    return Err(Error::UnsupportedExact(format!(
                        "B({i},{j}) = {} is not a small rational",
                        walk.b[(i, j)]
                    )))
                }
            }
        }
    }
    Ok(out)
}
