//! Spectral decomposition of the projected transition matrix: deduplicated
//! eigenvalues, orthogonal spectral idempotents, exact rational
//! characteristic polynomials, and the toroidal-grid trace filter.

use nalgebra::DMatrix;
use num_rational::BigRational;

use crate::exact::{self, rat, Rat, RatPoly};
use crate::walks::TwoReflectionWalk;
use crate::{Error, Result};

pub const DEFAULT_CLUSTER_TOL: f64 = 1e-9;

/// Eigendata of a symmetric matrix with clustered eigenvalues.
#[derive(Debug, Clone)]
pub struct SpectralData {
    /// Distinct eigenvalues, sorted descending.
    pub eigenvalues: Vec<f64>,
    pub multiplicities: Vec<usize>,
    /// Orthogonal projector onto each eigenspace, aligned with
    /// `eigenvalues`.
    pub idempotents: Vec<DMatrix<f64>>,
    /// Exact characteristic polynomial of a rational matrix similar to B,
    /// when available.
    pub charpoly_exact: Option<RatPoly>,
    pub cluster_tol: f64,
}

impl SpectralData {
    pub fn dim(&self) -> usize {
        self.idempotents.first().map_or(0, |e| e.nrows())
    }

    pub fn n_distinct(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Entry E_theta(u, v) for the idempotent at cluster index `k`.
    pub fn entry(&self, k: usize, u: usize, v: usize) -> f64 {
        self.idempotents[k][(u, v)]
    }

    /// Reconstruction sum theta E_theta.
    pub fn reconstruct(&self) -> DMatrix<f64> {
        let dim = self.dim();
        let mut acc = DMatrix::zeros(dim, dim);
        for (theta, e) in self.eigenvalues.iter().zip(&self.idempotents) {
            acc += e * *theta;
        }
        acc
    }
}

/// Eigendecomposition with clustering: eigenvalues within `cluster_tol` of
/// their sorted neighbor merge into one eigenspace whose projector is the
/// sum of outer products of the clustered orthonormal eigenvectors and
/// whose value is the multiplicity-weighted mean.
pub fn decompose(b: &DMatrix<f64>, cluster_tol: f64) -> Result<SpectralData> {
    let n = b.nrows();
    if n != b.ncols() {
        return Err(Error::Malformed("matrix not square".into()));
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if (b[(i, j)] - b[(j, i)]).abs() > 1e-10 {
                return Err(Error::Malformed(format!(
                    "matrix not symmetric at ({i},{j}): {} vs {}",
                    b[(i, j)],
                    b[(j, i)]
                )));
            }
        }
    }
    let sym = nalgebra::SymmetricEigen::new(b.clone());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        sym.eigenvalues[j]
            .partial_cmp(&sym.eigenvalues[i])
            .expect("finite eigenvalues")
    });
    let mut eigenvalues = Vec::new();
    let mut multiplicities = Vec::new();
    let mut idempotents: Vec<DMatrix<f64>> = Vec::new();
    let mut cluster_sum = 0.0;
    let mut cluster_count = 0usize;
    let mut cluster_proj: Option<DMatrix<f64>> = None;
    let mut prev = f64::INFINITY;
    for &idx in &order {
        let lam = sym.eigenvalues[idx];
        let vec = sym.eigenvectors.column(idx);
        let outer = vec * vec.transpose();
        if cluster_count > 0 && (prev - lam).abs() <= cluster_tol {
            cluster_sum += lam;
            cluster_count += 1;
            *cluster_proj.as_mut().unwrap() += outer;
        } else {
            if let Some(proj) = cluster_proj.take() {
                eigenvalues.push(cluster_sum / cluster_count as f64);
                multiplicities.push(cluster_count);
                idempotents.push(proj);
            }
            cluster_sum = lam;
            cluster_count = 1;
            cluster_proj = Some(outer);
        }
        prev = lam;
    }
    if let Some(proj) = cluster_proj {
        eigenvalues.push(cluster_sum / cluster_count as f64);
        multiplicities.push(cluster_count);
        idempotents.push(proj);
    }
    Ok(SpectralData {
        eigenvalues,
        multiplicities,
        idempotents,
        charpoly_exact: None,
        cluster_tol,
    })
}

/// Decompose a walk's projected transition matrix and attach the exact
/// characteristic polynomial when the walk supports exact arithmetic and
/// is at most `exact_dim_limit` on a side.
pub fn decompose_walk(
    walk: &TwoReflectionWalk,
    cluster_tol: f64,
    exact_dim_limit: usize,
) -> Result<SpectralData> {
    let mut data = decompose(&walk.b, cluster_tol)?;
    if walk.projected_dim() <= exact_dim_limit {
        if let Ok(p) = exact_charpoly(walk) {
            data.charpoly_exact = Some(p);
        }
    }
    Ok(data)
}

/// Exact characteristic polynomial of B over the rationals.
///
/// Arc-reversal and vertex-face walks carry a rational conjugate of B by
/// construction; other walks qualify only when every entry of B is itself
/// recognizable as a small rational.
pub fn exact_charpoly(walk: &TwoReflectionWalk) -> Result<RatPoly> {
    if let Some(m) = &walk.exact_b {
        return Ok(exact::charpoly(m));
    }
    let m = crate::walks::rationalize_b(walk, 1 << 20, 1e-9)?;
    Ok(exact::charpoly(&m))
}

/// Trace data filtering periodic toroidal grids: tr(U) = nm,
/// tr(U^2) = 9nm/4, and c2 = (tr(U)^2 - tr(U^2))/2 = nm(4nm - 9)/8, which
/// is the x^{4nm-2} coefficient of the characteristic polynomial of U and
/// is integral iff 8 divides nm.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridCharpolyFilter {
    pub tr_u: Rat,
    pub tr_u2: Rat,
    pub c2: Rat,
    pub integral: bool,
}

pub fn charpoly_of_u_filter(n: usize, m: usize) -> Result<GridCharpolyFilter> {
    if n < 3 || m < 3 {
        return Err(Error::Parameter(format!(
            "trace formulas require n, m >= 3, got ({n},{m})"
        )));
    }
    let nm = (n * m) as i64;
    let tr_u = rat(nm, 1);
    let tr_u2 = rat(9 * nm, 4);
    let c2 = (tr_u.clone() * tr_u.clone() - tr_u2.clone()) / rat(2, 1);
    let integral = num_traits::One::is_one(c2.denom());
    Ok(GridCharpolyFilter {
        tr_u,
        tr_u2,
        c2,
        integral,
    })
}

/// Certify that `theta` is (within `tol`) a rational eigenvalue: find a
/// continued-fraction candidate with denominator at most `max_den` and
/// verify it is an exact root of the characteristic polynomial.
pub fn certified_rational_eigenvalue(
    poly: &RatPoly,
    theta: f64,
    max_den: u64,
    tol: f64,
) -> Option<BigRational> {
    let candidate = exact::recognize_rational(theta, max_den, tol)?;
    if num_traits::Zero::is_zero(&poly.eval(&candidate)) {
        Some(candidate)
    } else {
        None
    }
}

/// Verify the idempotent algebra: sum to identity, pairwise orthogonality,
/// PSD diagonals. Used by tests and the oracle mode of the CLI.
pub fn verify_idempotent_algebra(data: &SpectralData, tol: f64) -> Result<()> {
    let dim = data.dim();
    let mut sum = DMatrix::<f64>::zeros(dim, dim);
    for e in &data.idempotents {
        sum += e;
        for i in 0..dim {
            if e[(i, i)] < -1e-10 {
                return Err(Error::Malformed(format!(
                    "idempotent diagonal {} negative",
                    e[(i, i)]
                )));
            }
        }
    }
    let eye = DMatrix::<f64>::identity(dim, dim);
    if (sum - eye).abs().max() > tol {
        return Err(Error::Malformed("idempotents do not sum to identity".into()));
    }
    for (i, ei) in data.idempotents.iter().enumerate() {
        for (j, ej) in data.idempotents.iter().enumerate() {
            let prod = ei * ej;
            let target = if i == j {
                ei.clone()
            } else {
                DMatrix::zeros(dim, dim)
            };
            if (prod - target).abs().max() > tol {
                return Err(Error::Malformed(format!(
                    "idempotents {i},{j} not orthogonal"
                )));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat_to_f64;
    use crate::graphs;
    use crate::walks::arc_reversal_walk;

    #[test]
    fn k4_arc_reversal_decomposition() {
        let w = arc_reversal_walk(&graphs::complete(4).unwrap()).unwrap();
        let d = decompose_walk(&w, DEFAULT_CLUSTER_TOL, 64).unwrap();
        assert_eq!(d.eigenvalues.len(), 2);
        assert!((d.eigenvalues[0] - 1.0).abs() < 1e-12);
        assert!((d.eigenvalues[1] + 1.0 / 3.0).abs() < 1e-12);
        assert_eq!(d.multiplicities, vec![1, 3]);
        // E_1 = J/4
        for i in 0..4 {
            for j in 0..4 {
                assert!((d.idempotents[0][(i, j)] - 0.25).abs() < 1e-10);
            }
        }
        verify_idempotent_algebra(&d, 1e-9).unwrap();
        assert!((d.reconstruct() - &w.b).abs().max() < 1e-10);
    }

    #[test]
    fn identity_decomposition() {
        let d = decompose(&DMatrix::identity(3, 3), 1e-9).unwrap();
        assert_eq!(d.eigenvalues.len(), 1);
        assert_eq!(d.multiplicities, vec![3]);
    }

    #[test]
    fn c4_decomposition_matches_cycle_idempotents() {
        let w = arc_reversal_walk(&graphs::cycle(4).unwrap()).unwrap();
        let d = decompose_walk(&w, DEFAULT_CLUSTER_TOL, 64).unwrap();
        let evs: Vec<f64> = d.eigenvalues.clone();
        assert_eq!(evs.len(), 3);
        assert!((evs[0] - 1.0).abs() < 1e-12);
        assert!(evs[1].abs() < 1e-12);
        assert!((evs[2] + 1.0).abs() < 1e-12);
        // F_{4,0}(j,l) = 1/4; F_{4,2}(j,l) = (-1)^{j+l}/4;
        // F_{4,1}(j,l) = (2/4) cos(pi (j-l)/2).
        for j in 0..4usize {
            for l in 0..4usize {
                assert!((d.idempotents[0][(j, l)] - 0.25).abs() < 1e-10);
                let sign = if (j + l) % 2 == 0 { 1.0 } else { -1.0 };
                assert!((d.idempotents[2][(j, l)] - sign * 0.25).abs() < 1e-10);
                let mid =
                    0.5 * (std::f64::consts::FRAC_PI_2 * (j as f64 - l as f64)).cos();
                assert!((d.idempotents[1][(j, l)] - mid).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn nonsymmetric_rejected() {
        let m = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 0.0, 0.0]);
        assert!(matches!(decompose(&m, 1e-9), Err(Error::Malformed(_))));
    }

    #[test]
    fn exact_charpoly_k3() {
        let w = arc_reversal_walk(&graphs::complete(3).unwrap()).unwrap();
        let p = exact_charpoly(&w).unwrap();
        // (x - 1)(x + 1/2)^2 = x^3 - 3/4 x - 1/4
        let expect = RatPoly::new(vec![rat(-1, 4), rat(-3, 4), rat(0, 1), rat(1, 1)]);
        assert_eq!(p, expect);
        assert_eq!(
            p.integer_scaled(),
            vec![(-1).into(), (-3).into(), 0.into(), 4.into()]
        );
    }

    #[test]
    fn exact_charpoly_c4() {
        let w = arc_reversal_walk(&graphs::cycle(4).unwrap()).unwrap();
        let p = exact_charpoly(&w).unwrap();
        // x^2 (x - 1)(x + 1) = x^4 - x^2
        assert_eq!(p, RatPoly::from_i64(&[0, 0, -1, 0, 1]));
    }

    #[test]
    fn exact_charpoly_grid44() {
        let map = crate::embeddings::toroidal_grid(4, 4).unwrap();
        let w = crate::walks::vertex_face_walk(&map).unwrap();
        let p = exact_charpoly(&w).unwrap();
        // (x - 1) x^4 (x + 1/2)^4 (x + 1)^7
        let mut expect = RatPoly::from_i64(&[-1, 1]);
        for _ in 0..4 {
            expect = expect.mul(&RatPoly::from_i64(&[0, 1]));
        }
        for _ in 0..4 {
            expect = expect.mul(&RatPoly::new(vec![rat(1, 2), rat(1, 1)]));
        }
        for _ in 0..7 {
            expect = expect.mul(&RatPoly::from_i64(&[1, 1]));
        }
        assert_eq!(p, expect);
    }

    #[test]
    fn numeric_matches_exact_roots() {
        for g in [
            graphs::complete(5).unwrap(),
            graphs::cycle(6).unwrap(),
            graphs::petersen().unwrap(),
        ] {
            let w = arc_reversal_walk(&g).unwrap();
            let d = decompose_walk(&w, 1e-9, 64).unwrap();
            let p = d.charpoly_exact.as_ref().unwrap();
            for &theta in &d.eigenvalues {
                assert!(
                    p.eval_f64(theta).abs() < 1e-8,
                    "eigenvalue {theta} is not a charpoly root"
                );
            }
            let total: usize = d.multiplicities.iter().sum();
            assert_eq!(total, w.projected_dim());
            let tr: f64 = d
                .eigenvalues
                .iter()
                .zip(&d.multiplicities)
                .map(|(t, &m)| t * m as f64)
                .sum();
            assert!((tr - w.b.trace()).abs() < 1e-8);
        }
    }

    #[test]
    fn grid_filter_values() {
        let f = charpoly_of_u_filter(4, 4).unwrap();
        assert_eq!(f.tr_u, rat(16, 1));
        assert_eq!(f.tr_u2, rat(36, 1));
        assert_eq!(f.c2, rat(110, 1));
        assert!(f.integral);

        let f = charpoly_of_u_filter(3, 3).unwrap();
        assert_eq!(f.c2, rat(243, 8));
        assert!(!f.integral);

        let f = charpoly_of_u_filter(4, 6).unwrap();
        assert_eq!(f.c2, rat(261, 1));
        assert!(f.integral);

        assert!(charpoly_of_u_filter(2, 5).is_err());
    }

    #[test]
    fn grid_filter_matches_dense_traces() {
        for (n, m) in [(3, 3), (3, 4), (4, 4), (3, 5), (4, 6), (5, 5), (6, 6)] {
            if n * m > 36 {
                continue;
            }
            let map = crate::embeddings::toroidal_grid(n, m).unwrap();
            let w = crate::walks::vertex_face_walk(&map).unwrap();
            let eu = w.exact_u.as_ref().unwrap();
            let f = charpoly_of_u_filter(n, m).unwrap();
            assert_eq!(eu.trace(), f.tr_u, "tr U for ({n},{m})");
            assert_eq!(eu.mul(eu).trace(), f.tr_u2, "tr U^2 for ({n},{m})");
            assert!((rat_to_f64(&f.tr_u) - w.u.trace()).abs() < 1e-9);
        }
    }

    #[test]
    fn grid_spectrum_matches_product_formula() {
        // lambda_{k,l} = (cos(2 pi k / n) + 1)(cos(2 pi l / m) + 1)/2 - 1
        for (n, m) in [(3, 3), (3, 4), (4, 6), (5, 5)] {
            let map = crate::embeddings::toroidal_grid(n, m).unwrap();
            let w = crate::walks::vertex_face_walk(&map).unwrap();
            let mut expect: Vec<f64> = (0..n)
                .flat_map(|k| {
                    (0..m).map(move |l| {
                        let ck = (2.0 * std::f64::consts::PI * k as f64 / n as f64).cos();
                        let cl = (2.0 * std::f64::consts::PI * l as f64 / m as f64).cos();
                        0.5 * (ck + 1.0) * (cl + 1.0) - 1.0
                    })
                })
                .collect();
            expect.sort_by(|a, b| b.partial_cmp(a).unwrap());
            let mut got: Vec<f64> = w.b.clone().symmetric_eigenvalues().iter().copied().collect();
            got.sort_by(|a, b| b.partial_cmp(a).unwrap());
            for (e, g) in expect.iter().zip(&got) {
                assert!((e - g).abs() < 1e-8, "grid ({n},{m}): {e} vs {g}");
            }
        }
    }

    #[test]
    fn certified_rational_roots() {
        let w = arc_reversal_walk(&graphs::complete(5).unwrap()).unwrap();
        let p = exact_charpoly(&w).unwrap();
        let r = certified_rational_eigenvalue(&p, -0.25, 1000, 1e-9).unwrap();
        assert_eq!(r, rat(-1, 4));
        assert!(certified_rational_eigenvalue(&p, -0.3, 1000, 1e-9).is_none());
    }
}
