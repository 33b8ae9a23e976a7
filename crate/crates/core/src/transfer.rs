//! The state-transfer decision engine.
//!
//! For a pair of indices u, v of the projected transition matrix, the
//! verdict follows from the mutual eigenvalue support and the rational-
//! cosine structure of the supported eigenvalues: peak state transfer
//! happens at time tau = lcm{q(theta)} exactly when, for one sign gamma,
//! the integers tau p(theta)/q(theta) are even on the gamma side of the
//! support and odd on the other. Perfect state transfer is the strongly
//! cospectral special case, periodicity the u = v case, and zero state
//! transfer the empty-support case. Every positive verdict is
//! cross-checked against the time-evolution oracle B_t = T_t(B).

use nalgebra::DMatrix;
use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::exact::rat;
use crate::graphs::{self, DesignParams};
use crate::rationalcosine::{
    self, conway_jones_rational_combo, CosineEvidence, CosineTerm, RationalCosine, Recognition,
};
use crate::spectral::{self, SpectralData};
use crate::walks::{self, TwoReflectionWalk, WalkKind};
use crate::{Error, Result};

pub const DEFAULT_SUPPORT_TOL: f64 = 1e-9;
pub const ORACLE_MATCH_TOL: f64 = 1e-7;

/// Sign policy for the peak-transfer parity test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GammaPolicy {
    /// Try gamma = +1 first, then gamma = -1.
    Auto,
    Fixed(i8),
}

#[derive(Debug, Clone)]
pub struct TransferOptions {
    pub q_max: u64,
    pub recog_tol: f64,
    pub support_tol: f64,
    pub cluster_tol: f64,
    pub gamma_policy: GammaPolicy,
    /// Attach exact charpolys only up to this dimension of B.
    pub exact_dim_limit: usize,
    /// Run the U^t / Chebyshev oracle on every positive verdict.
    pub oracle: bool,
    /// Skip the oracle when the implied time exceeds this bound.
    pub oracle_time_limit: usize,
}

impl Default for TransferOptions {
    fn default() -> Self {
        TransferOptions {
            q_max: rationalcosine::DEFAULT_Q_MAX,
            recog_tol: rationalcosine::DEFAULT_TOL,
            support_tol: DEFAULT_SUPPORT_TOL,
            cluster_tol: spectral::DEFAULT_CLUSTER_TOL,
            gamma_policy: GammaPolicy::Auto,
            exact_dim_limit: 64,
            oracle: true,
            oracle_time_limit: 4096,
        }
    }
}

impl TransferOptions {
    /// q_max scaled to the problem: at least 64, at least twice dim(B).
    pub fn effective_q_max(&self, dim: usize) -> u64 {
        self.q_max.max(2 * dim as u64)
    }
}

/// Mutual eigenvalue support of a pair: cluster indices with positive and
/// negative idempotent entries, plus the raw entries.
#[derive(Debug, Clone)]
pub struct MutualSupport {
    pub pair: (usize, usize),
    pub positive: Vec<usize>,
    pub negative: Vec<usize>,
    pub entries: Vec<f64>,
    pub support_tol: f64,
}

impl MutualSupport {
    pub fn support(&self) -> Vec<usize> {
        let mut all: Vec<usize> = self
            .positive
            .iter()
            .chain(self.negative.iter())
            .copied()
            .collect();
        all.sort_unstable();
        all
    }

    pub fn is_empty(&self) -> bool {
        self.positive.is_empty() && self.negative.is_empty()
    }

    /// The Lemma bound sum |E_theta(u,v)| over the support.
    pub fn bound(&self) -> f64 {
        self.support().iter().map(|&k| self.entries[k].abs()).sum()
    }

    /// True when some entry sits suspiciously close to the threshold on
    /// either side, so the discrete support classification is fragile.
    pub fn has_borderline_entries(&self) -> bool {
        self.entries.iter().any(|e| {
            let a = e.abs();
            a > self.support_tol / 100.0 && a < self.support_tol * 100.0
        })
    }
}

pub fn mutual_support(
    spec: &SpectralData,
    u: usize,
    v: usize,
    support_tol: f64,
) -> MutualSupport {
    let entries: Vec<f64> = (0..spec.n_distinct()).map(|k| spec.entry(k, u, v)).collect();
    let mut positive = Vec::new();
    let mut negative = Vec::new();
    for (k, &e) in entries.iter().enumerate() {
        if e > support_tol {
            positive.push(k);
        } else if e < -support_tol {
            negative.push(k);
        }
    }
    MutualSupport {
        pair: (u, v),
        positive,
        negative,
        entries,
        support_tol,
    }
}

/// True iff column u and column v of every idempotent agree up to a global
/// sign within `tol`.
pub fn strong_cospectral(spec: &SpectralData, u: usize, v: usize, tol: f64) -> bool {
    spec.idempotents.iter().all(|e| {
        let cu = e.column(u);
        let cv = e.column(v);
        let mut same = 0.0f64;
        let mut flip = 0.0f64;
        for (a, b) in cu.iter().zip(cv.iter()) {
            same = same.max((a - b).abs());
            flip = flip.max((a + b).abs());
        }
        same < tol || flip < tol
    })
}

/// M_G(u,v) = sum_theta |E_theta(u,v)|.
pub fn peak_bound_matrix(spec: &SpectralData) -> DMatrix<f64> {
    let dim = spec.dim();
    let mut m = DMatrix::zeros(dim, dim);
    for e in &spec.idempotents {
        for i in 0..dim {
            for j in 0..dim {
                m[(i, j)] += e[(i, j)].abs();
            }
        }
    }
    m
}

/// Per-eigenvalue certificate attached to a verdict.
#[derive(Debug, Clone)]
pub struct ThetaCertificate {
    pub theta: f64,
    pub recognition: Recognition,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvidenceGrade {
    Exact,
    NumericOnly,
}

#[derive(Debug, Clone, PartialEq)]
pub enum NoPeakReason {
    /// Some supported eigenvalue is not a cosine of a rational multiple of
    /// pi (certified when the exact charpoly proves it rational).
    EigenvalueNotCosine { theta: f64, certified: bool },
    /// All supported eigenvalues are rational cosines but no sign choice
    /// satisfies the parity condition.
    ParityObstruction,
}

#[derive(Debug, Clone)]
pub enum VerdictKind {
    PerfectST { tau: BigUint, gamma: i8, amount: f64 },
    PeakST { tau: BigUint, gamma: i8, amount: f64 },
    Periodic { period: BigUint },
    ZeroST,
    NoPeak { bound: f64, reason: NoPeakReason },
}

impl VerdictKind {
    pub fn name(&self) -> &'static str {
        match self {
            VerdictKind::PerfectST { .. } => "PerfectST",
            VerdictKind::PeakST { .. } => "PeakST",
            VerdictKind::Periodic { .. } => "Periodic",
            VerdictKind::ZeroST => "ZeroST",
            VerdictKind::NoPeak { .. } => "NoPeak",
        }
    }
}

#[derive(Debug, Clone)]
pub struct OracleCheck {
    pub ran: bool,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone)]
pub struct TransferVerdict {
    pub pair: (usize, usize),
    pub kind: VerdictKind,
    pub certificates: Vec<ThetaCertificate>,
    pub grade: EvidenceGrade,
    pub oracle: Option<OracleCheck>,
}

impl TransferVerdict {
    pub fn is_peak_or_perfect(&self) -> bool {
        matches!(
            self.kind,
            VerdictKind::PeakST { .. } | VerdictKind::PerfectST { .. }
        )
    }

    pub fn tau(&self) -> Option<&BigUint> {
        match &self.kind {
            VerdictKind::PerfectST { tau, .. } | VerdictKind::PeakST { tau, .. } => Some(tau),
            VerdictKind::Periodic { period } => Some(period),
            _ => None,
        }
    }

    pub fn amount(&self) -> Option<f64> {
        match &self.kind {
            VerdictKind::PerfectST { amount, .. } | VerdictKind::PeakST { amount, .. } => {
                Some(*amount)
            }
            _ => None,
        }
    }
}

/// A walk bundled with its spectral data and decision options.
pub struct Analyzer {
    pub walk: TwoReflectionWalk,
    pub spectral: SpectralData,
    pub opts: TransferOptions,
}

impl Analyzer {
    pub fn new(walk: TwoReflectionWalk, opts: TransferOptions) -> Result<Self> {
        let spectral = spectral::decompose_walk(&walk, opts.cluster_tol, opts.exact_dim_limit)?;
        Ok(Analyzer {
            walk,
            spectral,
            opts,
        })
    }

    pub fn dim(&self) -> usize {
        self.spectral.dim()
    }

    fn recognize_supported(
        &self,
        support: &[usize],
    ) -> (Vec<ThetaCertificate>, Option<NoPeakReason>) {
        let q_max = self.opts.effective_q_max(self.dim());
        let poly = self.spectral.charpoly_exact.as_ref();
        let mut certs = Vec::with_capacity(support.len());
        let mut failure = None;
        for &k in support {
            let theta = self.spectral.eigenvalues[k];
            let recognition =
                rationalcosine::recognize_full(theta, q_max, self.opts.recog_tol, poly)
                    .unwrap_or(Recognition::Unrecognized { q_max });
            if failure.is_none() {
                match &recognition {
                    Recognition::Cosine(_) => {}
                    Recognition::RationalNotCosine(_) => {
                        failure = Some(NoPeakReason::EigenvalueNotCosine {
                            theta,
                            certified: true,
                        })
                    }
                    Recognition::Unrecognized { .. } => {
                        failure = Some(NoPeakReason::EigenvalueNotCosine {
                            theta,
                            certified: false,
                        })
                    }
                }
            }
            certs.push(ThetaCertificate { theta, recognition });
        }
        (certs, failure)
    }

    fn grade(&self, certs: &[ThetaCertificate], borderline: bool) -> EvidenceGrade {
        let all_exact = certs.iter().all(|c| match &c.recognition {
            Recognition::Cosine(c) => c.evidence == CosineEvidence::Exact,
            Recognition::RationalNotCosine(_) => true,
            Recognition::Unrecognized { .. } => false,
        });
        if all_exact && !borderline {
            EvidenceGrade::Exact
        } else {
            EvidenceGrade::NumericOnly
        }
    }

    fn gammas(&self) -> Vec<i8> {
        match self.opts.gamma_policy {
            GammaPolicy::Auto => vec![1, -1],
            GammaPolicy::Fixed(g) => vec![g],
        }
    }

    /// Decide peak / perfect / zero state transfer for a pair u != v
    /// (u == v routes to the periodicity decision).
    pub fn decide_pair(&self, u: usize, v: usize) -> Result<TransferVerdict> {
        let dim = self.dim();
        if u >= dim || v >= dim {
            return Err(Error::Parameter(format!(
                "pair ({u},{v}) out of range for dimension {dim}"
            )));
        }
        if u == v {
            return self.decide_periodicity(u);
        }
        let ms = mutual_support(&self.spectral, u, v, self.opts.support_tol);
        if ms.is_empty() {
            let oracle = self.oracle_zero(u, v);
            return Ok(TransferVerdict {
                pair: (u, v),
                kind: VerdictKind::ZeroST,
                certificates: vec![],
                grade: if ms.has_borderline_entries() {
                    EvidenceGrade::NumericOnly
                } else {
                    EvidenceGrade::Exact
                },
                oracle,
            });
        }
        let support = ms.support();
        let bound = ms.bound();
        let (certs, failure) = self.recognize_supported(&support);
        let grade = self.grade(&certs, ms.has_borderline_entries());
        if let Some(reason) = failure {
            return Ok(TransferVerdict {
                pair: (u, v),
                kind: VerdictKind::NoPeak { bound, reason },
                certificates: certs,
                grade,
                oracle: None,
            });
        }
        // All supported eigenvalues are rational cosines; run the parity
        // test at tau = lcm of the denominators.
        let pqs: Vec<RationalCosine> = certs
            .iter()
            .map(|c| match &c.recognition {
                Recognition::Cosine(c) => c.pq,
                _ => unreachable!("failures handled above"),
            })
            .collect();
        let tau = lcm_of(pqs.iter().map(|pq| pq.q));
        let chosen = self.gammas().into_iter().find(|&gamma| {
            support.iter().zip(&pqs).all(|(&k, pq)| {
                let s_even = s_parity_even(&tau, pq);
                let positive = ms.entries[k] > 0.0;
                let on_gamma_side = if gamma == 1 { positive } else { !positive };
                on_gamma_side == s_even
            })
        });
        let Some(gamma) = chosen else {
            return Ok(TransferVerdict {
                pair: (u, v),
                kind: VerdictKind::NoPeak {
                    bound,
                    reason: NoPeakReason::ParityObstruction,
                },
                certificates: certs,
                grade,
                oracle: None,
            });
        };
        // For arc-reversal walks on connected graphs the Perron-Frobenius
        // eigenvalue 1 forces gamma = +1.
        if self.walk.kind == WalkKind::ArcReversal && self.walk.connected == Some(true) {
            debug_assert_eq!(gamma, 1, "connected arc-reversal walk produced gamma = -1");
        }
        let cospectral = strong_cospectral(&self.spectral, u, v, self.opts.recog_tol.max(1e-8));
        let kind = if cospectral {
            VerdictKind::PerfectST {
                tau: tau.clone(),
                gamma,
                amount: bound,
            }
        } else {
            VerdictKind::PeakST {
                tau: tau.clone(),
                gamma,
                amount: bound,
            }
        };
        let oracle = self.oracle_peak(u, v, &tau, gamma, bound, !ms.negative.is_empty());
        Ok(TransferVerdict {
            pair: (u, v),
            kind,
            certificates: certs,
            grade,
            oracle,
        })
    }

    /// Decide periodicity at a single index.
    pub fn decide_periodicity(&self, u: usize) -> Result<TransferVerdict> {
        let dim = self.dim();
        if u >= dim {
            return Err(Error::Parameter(format!(
                "index {u} out of range for dimension {dim}"
            )));
        }
        let ms = mutual_support(&self.spectral, u, u, self.opts.support_tol);
        let support = ms.support();
        let (certs, failure) = self.recognize_supported(&support);
        let grade = self.grade(&certs, ms.has_borderline_entries());
        if let Some(reason) = failure {
            return Ok(TransferVerdict {
                pair: (u, u),
                kind: VerdictKind::NoPeak { bound: 1.0, reason },
                certificates: certs,
                grade,
                oracle: None,
            });
        }
        let pqs: Vec<RationalCosine> = certs
            .iter()
            .map(|c| match &c.recognition {
                Recognition::Cosine(c) => c.pq,
                _ => unreachable!(),
            })
            .collect();
        let tau = lcm_of(pqs.iter().map(|pq| pq.q));
        let parities: Vec<bool> = pqs.iter().map(|pq| s_parity_even(&tau, pq)).collect();
        let uniform = parities.windows(2).all(|w| w[0] == w[1]);
        let period = if uniform { tau.clone() } else { &tau * 2u32 };
        if matches!(self.walk.kind, WalkKind::ArcReversal | WalkKind::VertexFace) && uniform {
            // these walks only admit B_tau(u,u) = +1
            debug_assert!(
                parities.iter().all(|&p| p),
                "uniform odd parity in a nonnegative-discriminant walk"
            );
        }
        let oracle = self.oracle_periodic(u, &period);
        Ok(TransferVerdict {
            pair: (u, u),
            kind: VerdictKind::Periodic { period },
            certificates: certs,
            grade,
            oracle,
        })
    }

    /// Verdicts for all unordered pairs u < v.
    pub fn decide_all_pairs(&self) -> Result<Vec<TransferVerdict>> {
        let dim = self.dim();
        let mut out = Vec::with_capacity(dim * (dim - 1) / 2);
        for u in 0..dim {
            for v in (u + 1)..dim {
                out.push(self.decide_pair(u, v)?);
            }
        }
        Ok(out)
    }

    pub fn decide_all_periodicity(&self) -> Result<Vec<TransferVerdict>> {
        (0..self.dim()).map(|u| self.decide_periodicity(u)).collect()
    }

    pub fn peak_bound_matrix(&self) -> DMatrix<f64> {
        peak_bound_matrix(&self.spectral)
    }

    fn oracle_time(&self, tau: &BigUint) -> Option<usize> {
        if !self.opts.oracle {
            return None;
        }
        tau.to_usize().filter(|&t| t <= self.opts.oracle_time_limit)
    }

    fn oracle_peak(
        &self,
        u: usize,
        v: usize,
        tau: &BigUint,
        gamma: i8,
        amount: f64,
        negative_support: bool,
    ) -> Option<OracleCheck> {
        let t = self.oracle_time(tau)?;
        let series = self.walk.bt_entry_series(v, u, 2 * t);
        let at_tau = series[t];
        let mut passed = (at_tau - gamma as f64 * amount).abs() < ORACLE_MATCH_TOL;
        let mut detail = format!("B_{t}({v},{u}) = {at_tau:.12}, expected {}", gamma as f64 * amount);
        // no peak at even multiples of tau when the negative support is
        // nonempty
        if negative_support && passed {
            let at_2tau = series[2 * t].abs();
            if at_2tau >= amount - 1e-9 && amount > 1e-9 {
                passed = false;
                detail = format!("even multiple attains the bound: |B_{}| = {at_2tau}", 2 * t);
            }
        }
        Some(OracleCheck {
            ran: true,
            passed,
            detail,
        })
    }

    fn oracle_periodic(&self, u: usize, period: &BigUint) -> Option<OracleCheck> {
        let t = self.oracle_time(period)?;
        let series = self.walk.bt_entry_series(u, u, t);
        let at_period = series[t];
        let mut passed = (at_period - 1.0).abs() < ORACLE_MATCH_TOL;
        let mut detail = format!("B_{t}({u},{u}) = {at_period:.12}");
        if passed {
            if let Some(bad) = (1..t).find(|&s| series[s] >= 1.0 - ORACLE_MATCH_TOL) {
                passed = false;
                detail = format!("B_{bad}({u},{u}) = {} before the period", series[bad]);
            }
        }
        Some(OracleCheck {
            ran: true,
            passed,
            detail,
        })
    }

    fn oracle_zero(&self, u: usize, v: usize) -> Option<OracleCheck> {
        if !self.opts.oracle {
            return None;
        }
        let horizon = 2 * self.dim();
        let series = self.walk.bt_entry_series(u, v, horizon);
        let max = series.iter().fold(0.0f64, |acc, x| acc.max(x.abs()));
        Some(OracleCheck {
            ran: true,
            passed: max < 1e-8,
            detail: format!("max |B_t({u},{v})| for t <= {horizon}: {max:e}"),
        })
    }
}

fn lcm_of(qs: impl Iterator<Item = u64>) -> BigUint {
    let mut acc = BigUint::one();
    for q in qs {
        acc = acc.lcm(&BigUint::from(q));
    }
    acc
}

/// Parity of the integer tau * p / q (tau is a multiple of q).
fn s_parity_even(tau: &BigUint, pq: &RationalCosine) -> bool {
    let q = BigUint::from(pq.q);
    let s = (tau / q) * BigUint::from(pq.p);
    (s % 2u32).is_zero()
}

// ---------------------------------------------------------------------------
// Strongly regular graphs
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SrgParams {
    pub n: usize,
    pub k: usize,
    pub a: usize,
    pub c: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SrgClass {
    /// c = 0: disjoint copies of K_{k+1}.
    Disconnected { components: usize },
    /// Complement disconnected: complete multipartite with `parts` parts
    /// of size n - k.
    CompleteMultipartite { parts: usize },
    /// Primitive with integer eigenvalues theta > 0 > tau.
    PrimitiveInteger { theta: i64, tau: i64 },
    /// Primitive conference graph (irrational eigenvalues).
    Conference,
}

#[derive(Debug, Clone)]
pub struct SrgVerdict {
    pub params: SrgParams,
    pub class: SrgClass,
    pub admits_peak: bool,
    pub reasoning: String,
}

/// Parameter-level classification of peak state transfer in the
/// arc-reversal walk on a strongly regular graph.
pub fn srg_analyze(params: SrgParams) -> Result<SrgVerdict> {
    let SrgParams { n, k, a, c } = params;
    if n < 2 || k == 0 || k + 2 > n || a >= k {
        return Err(Error::Parameter(format!(
            "infeasible strongly regular parameters ({n},{k},{a},{c})"
        )));
    }
    // counting identity around one vertex
    if k * (k - a - 1) != (n - k - 1) * c {
        return Err(Error::Parameter(format!(
            "parameter identity k(k-a-1) = (n-k-1)c fails for ({n},{k},{a},{c})"
        )));
    }
    if c == 0 {
        if n % (k + 1) != 0 {
            return Err(Error::Parameter(format!(
                "disconnected case needs (k+1) | n for ({n},{k},{a},{c})"
            )));
        }
        let components = n / (k + 1);
        let admits = k == 1;
        return Ok(SrgVerdict {
            params,
            class: SrgClass::Disconnected { components },
            admits_peak: admits,
            reasoning: format!(
                "disjoint union of {components} copies of K_{}; complete graphs admit peak \
                 state transfer only at 2 vertices",
                k + 1
            ),
        });
    }
    if n + a == 2 * k {
        // complement disconnected: complete multipartite
        let part = n - k;
        if n % part != 0 {
            return Err(Error::Parameter(format!(
                "multipartite case needs (n-k) | n for ({n},{k},{a},{c})"
            )));
        }
        let parts = n / part;
        let admits = parts == 2 || parts == 3;
        return Ok(SrgVerdict {
            params,
            class: SrgClass::CompleteMultipartite { parts },
            admits_peak: admits,
            reasoning: format!(
                "complete multipartite with {parts} parts of size {part}; blow-ups of K_r \
                 admit peak state transfer iff r <= 3"
            ),
        });
    }
    // primitive: eigenvalues from x^2 - (a-c)x - (k-c) = 0
    let diff = a as i64 - c as i64;
    let disc = diff * diff + 4 * (k as i64 - c as i64);
    let sq = (disc as f64).sqrt().round() as i64;
    if sq * sq == disc {
        let theta = (diff + sq) / 2;
        let tau = (diff - sq) / 2;
        if (diff + sq) % 2 != 0 || theta < 0 || tau >= 0 {
            return Err(Error::Parameter(format!(
                "eigenvalue integrality fails for ({n},{k},{a},{c})"
            )));
        }
        // multiplicities must be nonnegative integers
        let numer = (n as i64 - 1) * diff + 2 * k as i64;
        if numer % sq != 0 || ((n as i64 - 1) - numer / sq) % 2 != 0 {
            return Err(Error::Parameter(format!(
                "non-integral multiplicities for ({n},{k},{a},{c})"
            )));
        }
        // peak requires theta/k and tau/k to be rational cosines of
        // rational multiples of pi, i.e. in {0, 1/2} and {-1/2, -1}.
        let theta_ok = 2 * theta == k as i64 || theta == 0;
        let tau_ok = 2 * tau == -(k as i64) || tau == -(k as i64);
        let admits = if theta_ok && tau_ok {
            // Unreachable for genuinely primitive parameters; decide by
            // the parameter-level parity engine for robustness.
            primitive_parameter_parity(params, theta, tau)
        } else {
            false
        };
        return Ok(SrgVerdict {
            params,
            class: SrgClass::PrimitiveInteger { theta, tau },
            admits_peak: admits,
            reasoning: format!(
                "primitive with eigenvalues {{{k}, {theta}, {tau}}}; normalized eigenvalues \
                 {}/{k} and {}/{k} {} cosines of rational multiples of pi",
                theta,
                tau,
                if theta_ok && tau_ok { "are" } else { "are not both" }
            ),
        });
    }
    // conference graph: eigenvalues (-1 +- sqrt(n)) / 2
    if (n as i64 - 1) * diff + 2 * k as i64 != 0 {
        return Err(Error::Parameter(format!(
            "irrational eigenvalues with unequal multiplicities for ({n},{k},{a},{c})"
        )));
    }
    let admits = conference_admits_peak(n)?;
    Ok(SrgVerdict {
        params,
        class: SrgClass::Conference,
        admits_peak: admits,
        reasoning: format!(
            "conference graph on {n} vertices: the cosine product equation \
             cos(alpha) +- cos(beta) = 2/{} has no admissible rational solution",
            n - 1
        ),
    })
}

/// The conference-graph branch: peak transfer forces rational angles with
/// cos(alpha) + gamma cos(beta) = 2/(n-1); enumerate the rational cosine
/// values and the exceptional pi/5 pair through the two-cosine decision
/// procedure. Any admissible n collapses to the 5-cycle, which is decided
/// concretely.
fn conference_admits_peak(n: usize) -> Result<bool> {
    let target = rat(2, n as i64 - 1);
    let mut solvable = false;
    // cos(alpha) with alpha in [0, pi/2): values 1 (angle 0) and 1/2
    // (angle pi/3); cos(beta) with beta in (0, pi/2]: values 0 (pi/2) and
    // 1/2 (pi/3)
    for alpha in [(0u64, 1u64), (1, 3)] {
        for beta in [(1u64, 2u64), (1, 3)] {
            for sign in [1i64, -1] {
                let terms = [
                    CosineTerm {
                        coefficient: rat(1, 1),
                        angle: alpha,
                    },
                    CosineTerm {
                        coefficient: rat(sign, 1),
                        angle: beta,
                    },
                ];
                if conway_jones_rational_combo(&terms, &target)? {
                    solvable = true;
                }
            }
        }
    }
    // exceptional family: proportional to cos(pi/5) - cos(2pi/5) = 1/2
    for scale in [1i64, -1] {
        let terms = [
            CosineTerm {
                coefficient: rat(scale, 1),
                angle: (1, 5),
            },
            CosineTerm {
                coefficient: rat(-scale, 1),
                angle: (2, 5),
            },
        ];
        if conway_jones_rational_combo(&terms, &target)? {
            solvable = true;
        }
    }
    if !solvable {
        return Ok(false);
    }
    // Solvable only for n = 5; the unique primitive strongly regular graph
    // on 5 vertices is the 5-cycle.
    let c5 = graphs::cycle(5)?;
    let analyzer = Analyzer::new(walks::arc_reversal_walk(&c5)?, TransferOptions::default())?;
    for verdict in analyzer.decide_all_pairs()? {
        if verdict.is_peak_or_perfect() {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Parity test on the three-eigenvalue support using the idempotent entry
/// signs from the parameter formulas (entries of q_theta / q_tau).
fn primitive_parameter_parity(params: SrgParams, theta: i64, tau: i64) -> bool {
    let SrgParams { n, k, .. } = params;
    // idempotent row vectors over distance classes j = 0, 1, 2:
    // q_theta = [m_theta, (n-k+tau)/(theta-tau), (tau-k)/(theta-tau)],
    // q_tau = [m_tau, (k-n-theta)/(theta-tau), (k-theta)/(theta-tau)]
    let tmius = (theta - tau) as f64;
    let e_theta = [
        (n as f64 - k as f64 + tau as f64) / tmius,
        (tau as f64 - k as f64) / tmius,
    ];
    let e_tau = [
        (k as f64 - n as f64 - theta as f64) / tmius,
        (k as f64 - theta as f64) / tmius,
    ];
    // eigenvalues of B: 1, theta/k, tau/k; recognize and test both
    // distance classes
    let recog = |x: f64| rationalcosine::recognize(x, 64, 1e-9, None).ok().flatten();
    let Some(r1) = recog(1.0) else { return false };
    let Some(rt) = recog(theta as f64 / k as f64) else {
        return false;
    };
    let Some(rs) = recog(tau as f64 / k as f64) else {
        return false;
    };
    for j in 0..2 {
        let entries = [1.0, e_theta[j], e_tau[j]];
        let pqs = [r1.pq, rt.pq, rs.pq];
        let tau_time = lcm_of(pqs.iter().map(|pq| pq.q));
        for gamma in [1i8, -1] {
            let ok = entries.iter().zip(&pqs).all(|(&e, pq)| {
                let even = s_parity_even(&tau_time, pq);
                let positive = e > 0.0;
                (if gamma == 1 { positive } else { !positive }) == even
            });
            if ok {
                return true;
            }
        }
    }
    false
}

// ---------------------------------------------------------------------------
// Block designs
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct DesignVerdict {
    pub params: DesignParams,
    /// Peak state transfer starting from a point vertex.
    pub admits_peak_from_point: bool,
    /// First time of peak transfer when it exists.
    pub tau: Option<BigUint>,
    /// Concrete-instance verdict point -> non-incident block, when
    /// incidence data was supplied.
    pub instance_verdict: Option<TransferVerdict>,
}

/// Decide peak state transfer from a point of a 2-design via the spectral
/// membership test: the eigenvalue sqrt((r - lambda) / (r k)) of the
/// normalized bipartite adjacency matrix must be a rational cosine, which
/// forces (r - lambda)/(r k) = 1/4.
pub fn design_analyze(
    params: DesignParams,
    incidence: Option<(usize, &[Vec<usize>])>,
) -> Result<DesignVerdict> {
    let DesignParams { v, b, r, k, lambda } = params;
    if k <= 1 || k >= v || r <= lambda {
        return Err(Error::Parameter(format!(
            "invalid design parameters v={v} b={b} r={r} k={k} lambda={lambda}"
        )));
    }
    let ratio = rat((r - lambda) as i64, (r * k) as i64);
    // cos^2(q pi) rational requires the doubled angle cosine rational:
    // ratio in {0, 1/4, 1/2, 3/4, 1}; the design constraints leave 1/4.
    let admits = ratio == rat(1, 4);
    let tau = admits.then(|| BigUint::from(3u32));
    let mut instance_verdict = None;
    if let Some((pv, blocks)) = incidence {
        let validated = graphs::validate_design(pv, blocks)?;
        if validated != params {
            return Err(Error::Parameter(format!(
                "incidence data has parameters {validated:?}, expected {params:?}"
            )));
        }
        let g = graphs::design_incidence(pv, blocks)?;
        let analyzer = Analyzer::new(walks::arc_reversal_walk(&g)?, TransferOptions::default())?;
        verify_design_idempotents(&analyzer, params, blocks)?;
        // pick the first block not containing point 0
        let block = (0..b)
            .find(|&bi| !blocks[bi].contains(&0))
            .map(|bi| v + bi)
            .ok_or_else(|| Error::Parameter("point 0 lies in every block".into()))?;
        instance_verdict = Some(analyzer.decide_pair(0, block)?);
    }
    Ok(DesignVerdict {
        params,
        admits_peak_from_point: admits,
        tau,
        instance_verdict,
    })
}

/// Check the closed-form idempotents of the point-block incidence graph
/// entrywise against the computed decomposition: eigenvalues of B are
/// +-1, +-sqrt((r-lambda)/(rk)) and (when v < b) 0.
fn verify_design_idempotents(
    analyzer: &Analyzer,
    params: DesignParams,
    blocks: &[Vec<usize>],
) -> Result<()> {
    let DesignParams { v, b, r, k, lambda } = params;
    let dim = v + b;
    let mut incidence = DMatrix::<f64>::zeros(v, b);
    for (bi, blk) in blocks.iter().enumerate() {
        for &p in blk {
            incidence[(p, bi)] = 1.0;
        }
    }
    let rl = (r - lambda) as f64;
    let rk = (r * k) as f64;
    let ntn = incidence.transpose() * &incidence;
    let mut expected: Vec<(f64, DMatrix<f64>)> = Vec::new();
    for sign in [1.0f64, -1.0] {
        // E_{+- sqrt(rk)} block form
        let mut e = DMatrix::zeros(dim, dim);
        for i in 0..v {
            for j in 0..v {
                e[(i, j)] = 0.5 / v as f64;
            }
        }
        for i in 0..b {
            for j in 0..b {
                e[(v + i, v + j)] = 0.5 / b as f64;
            }
        }
        let cross = 0.5 * sign * k as f64 / (v as f64 * rk.sqrt());
        for i in 0..v {
            for j in 0..b {
                e[(i, v + j)] = cross;
                e[(v + j, i)] = cross;
            }
        }
        expected.push((sign, e));
    }
    for sign in [1.0f64, -1.0] {
        // E_{+- sqrt(r - lambda)} block form
        let mut e = DMatrix::zeros(dim, dim);
        for i in 0..v {
            for j in 0..v {
                e[(i, j)] = 0.5 * ((i == j) as u8 as f64 - 1.0 / v as f64);
            }
        }
        for i in 0..b {
            for j in 0..b {
                e[(v + i, v + j)] = 0.5 * (ntn[(i, j)] - rk / b as f64) / rl;
            }
        }
        for i in 0..v {
            for j in 0..b {
                let val = 0.5 * sign * (incidence[(i, j)] - k as f64 / v as f64) / rl.sqrt();
                e[(i, v + j)] = val;
                e[(v + j, i)] = val;
            }
        }
        let theta = sign * (rl / rk).sqrt();
        expected.push((theta, e));
    }
    if v < b {
        let mut e = DMatrix::zeros(dim, dim);
        for i in 0..b {
            for j in 0..b {
                let nn = ntn[(i, j)];
                e[(v + i, v + j)] = ((i == j) as u8 as f64)
                    - (nn - (lambda * v) as f64 / b as f64) / rl;
            }
        }
        expected.push((0.0, e));
    }
    for (target, matrix) in expected {
        // normalized eigenvalue of B: +-1 map from +-sqrt(rk)
        let theta = if target.abs() > 0.5 { target.signum() } else { target };
        let idx = analyzer
            .spectral
            .eigenvalues
            .iter()
            .position(|&t| (t - theta).abs() < 1e-8)
            .ok_or_else(|| {
                Error::Malformed(format!("expected eigenvalue {theta} missing from spectrum"))
            })?;
        let diff = (&analyzer.spectral.idempotents[idx] - &matrix).abs().max();
        if diff > 1e-9 {
            return Err(Error::Malformed(format!(
                "design idempotent for eigenvalue {theta} deviates by {diff:e}"
            )));
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Blow-ups
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct BlowupVertexPrediction {
    pub vertex: usize,
    /// Period at every copy (u, a), when the base walk is periodic at u.
    pub period: Option<BigUint>,
    /// First peak time between distinct copies (u,a) -> (u,b), when the
    /// blow-up creates one.
    pub coclique_peak_time: Option<BigUint>,
}

#[derive(Debug, Clone)]
pub struct BlowupPrediction {
    pub m: usize,
    /// Base pair verdicts transfer to all ((u,a),(v,b)) pairs with the
    /// same times; amounts scale by 1/m.
    pub pair_predictions: Vec<(usize, usize, VerdictKind)>,
    pub vertex_predictions: Vec<BlowupVertexPrediction>,
}

/// Predict transfer in the blow-up G[empty_m] from verdicts on G, without
/// constructing the blow-up: pair transfer is inherited at the same times
/// with amounts scaled by 1/m; periodicity at u yields period
/// lcm(tau, 4) and a coclique peak at half that period when tau is not
/// divisible by 4 or when tau = 4 mod 8 with even parities away from the
/// zero eigenvalue.
pub fn blowup_predict(base: &Analyzer, m: usize) -> Result<BlowupPrediction> {
    if m <= 1 {
        return Err(Error::Parameter("blow-up prediction needs m > 1".into()));
    }
    if base.walk.kind != WalkKind::ArcReversal {
        return Err(Error::Parameter(
            "blow-up predictions cover arc-reversal walks".into(),
        ));
    }
    let dim = base.dim();
    let mut pair_predictions = Vec::new();
    for u in 0..dim {
        for v in (u + 1)..dim {
            let verdict = base.decide_pair(u, v)?;
            let predicted = match verdict.kind {
                VerdictKind::PerfectST { tau, gamma, amount }
                | VerdictKind::PeakST { tau, gamma, amount } => VerdictKind::PeakST {
                    tau,
                    gamma,
                    amount: amount / m as f64,
                },
                other => other,
            };
            pair_predictions.push((u, v, predicted));
        }
    }
    let four = BigUint::from(4u32);
    let mut vertex_predictions = Vec::with_capacity(dim);
    for u in 0..dim {
        let verdict = base.decide_periodicity(u)?;
        let prediction = match &verdict.kind {
            VerdictKind::Periodic { period } => {
                let tau = period.clone();
                let tau_prime = tau.lcm(&four);
                let not_div_4 = !(&tau % &four).is_zero();
                let coclique = if not_div_4 {
                    true
                } else if (&tau % BigUint::from(8u32)) == four {
                    // parity of tau r/s over the nonzero support
                    verdict
                        .certificates
                        .iter()
                        .filter(|c| c.theta.abs() > base.opts.support_tol)
                        .all(|c| match &c.recognition {
                            Recognition::Cosine(cert) => {
                                let (r, s) = cert.pq.even_form();
                                let s_big = BigUint::from(s);
                                ((&tau / s_big) * BigUint::from(r) % 2u32).is_zero()
                            }
                            _ => false,
                        })
                } else {
                    false
                };
                BlowupVertexPrediction {
                    vertex: u,
                    period: Some(tau_prime.clone()),
                    coclique_peak_time: coclique.then(|| tau_prime / 2u32),
                }
            }
            _ => BlowupVertexPrediction {
                vertex: u,
                period: None,
                coclique_peak_time: None,
            },
        };
        vertex_predictions.push(prediction);
    }
    Ok(BlowupPrediction {
        m,
        pair_predictions,
        vertex_predictions,
    })
}

// ---------------------------------------------------------------------------
// (4, n) toroidal grid peak suite
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct GridPeakCase {
    /// Column offset of the target from the source, on the adjacent row.
    pub column_offset: usize,
    pub time: BigUint,
    pub verdict: TransferVerdict,
}

/// The complete set of peak-transfer instances of the vertex-face walk on
/// the (4, n) toroidal grid, each verified through the decision engine on
/// the constructed grid: odd n peaks straight up at time n; n = 2m peaks
/// to the opposite column at time m; n = 4k additionally peaks to columns
/// +-k at time k.
pub fn grid_peak_suite(n: usize) -> Result<Vec<GridPeakCase>> {
    if n < 1 {
        return Err(Error::Parameter("grid peak suite needs n >= 1".into()));
    }
    let map = crate::embeddings::toroidal_grid(4, n)?;
    let analyzer = Analyzer::new(walks::vertex_face_walk(&map)?, TransferOptions::default())?;
    let vid = |i: usize, j: usize| (i % 4) * n + (j % n);
    let mut cases = Vec::new();
    let mut push_case = |offset: usize, time: usize| -> Result<()> {
        let verdict = analyzer.decide_pair(vid(0, 0), vid(1, offset))?;
        if !verdict.is_peak_or_perfect() {
            return Err(Error::Malformed(format!(
                "grid (4,{n}): expected peak to column offset {offset}, got {}",
                verdict.kind.name()
            )));
        }
        if verdict.tau() != Some(&BigUint::from(time)) {
            return Err(Error::Malformed(format!(
                "grid (4,{n}): peak to offset {offset} at tau = {:?}, expected {time}",
                verdict.tau()
            )));
        }
        cases.push(GridPeakCase {
            column_offset: offset,
            time: BigUint::from(time),
            verdict,
        });
        Ok(())
    };
    if n % 2 == 1 {
        push_case(0, n)?;
    }
    if n.is_multiple_of(2) {
        push_case(n / 2, n / 2)?;
    }
    if n.is_multiple_of(4) {
        push_case(n / 4, n / 4)?;
    }
    Ok(cases)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embeddings::toroidal_grid;
    use crate::graphs::{complete, cycle, figure2, MultiGraph};
    use crate::walks::{arc_reversal_walk, vertex_face_walk};

    fn analyzer_of(g: &MultiGraph) -> Analyzer {
        Analyzer::new(arc_reversal_walk(g).unwrap(), TransferOptions::default()).unwrap()
    }

    #[test]
    fn k3_supports_and_no_peak() {
        let a = analyzer_of(&complete(3).unwrap());
        let ms = mutual_support(&a.spectral, 0, 1, 1e-9);
        assert_eq!(ms.positive, vec![0]); // eigenvalue 1
        assert_eq!(ms.negative, vec![1]); // eigenvalue -1/2
        let verdict = a.decide_pair(0, 1).unwrap();
        match &verdict.kind {
            VerdictKind::NoPeak { bound, reason } => {
                assert!((bound - 2.0 / 3.0).abs() < 1e-9);
                assert_eq!(*reason, NoPeakReason::ParityObstruction);
            }
            other => panic!("expected NoPeak, got {other:?}"),
        }
        assert_eq!(verdict.grade, EvidenceGrade::Exact);
        // K_3 is 3-periodic everywhere
        let p = a.decide_periodicity(0).unwrap();
        match &p.kind {
            VerdictKind::Periodic { period } => assert_eq!(period, &BigUint::from(3u32)),
            other => panic!("expected Periodic, got {other:?}"),
        }
        assert!(p.oracle.as_ref().unwrap().passed);
    }

    #[test]
    fn k2_perfect_and_periodic() {
        let a = analyzer_of(&complete(2).unwrap());
        let verdict = a.decide_pair(0, 1).unwrap();
        match &verdict.kind {
            VerdictKind::PerfectST { tau, gamma, amount } => {
                assert_eq!(tau, &BigUint::one());
                assert_eq!(*gamma, 1);
                assert!((amount - 1.0).abs() < 1e-10);
            }
            other => panic!("expected PerfectST, got {other:?}"),
        }
        assert!(verdict.oracle.as_ref().unwrap().passed);
        let p = a.decide_periodicity(1).unwrap();
        assert!(matches!(&p.kind, VerdictKind::Periodic { period } if period == &BigUint::from(2u32)));
    }

    #[test]
    fn kn_certified_rational_obstruction() {
        for n in [4usize, 5, 7] {
            let a = analyzer_of(&complete(n).unwrap());
            let verdict = a.decide_pair(0, 1).unwrap();
            match &verdict.kind {
                VerdictKind::NoPeak {
                    reason: NoPeakReason::EigenvalueNotCosine { theta, certified },
                    ..
                } => {
                    assert!((theta + 1.0 / (n as f64 - 1.0)).abs() < 1e-9, "K_{n}");
                    assert!(certified, "K_{n}");
                }
                other => panic!("K_{n}: expected certified NoPeak, got {other:?}"),
            }
            assert_eq!(verdict.grade, EvidenceGrade::Exact);
            let p = a.decide_periodicity(0).unwrap();
            assert!(matches!(p.kind, VerdictKind::NoPeak { .. }), "K_{n} periodicity");
        }
    }

    #[test]
    fn cycle_verdicts() {
        // C_6: perfect transfer between antipodes at time 3
        let a = analyzer_of(&cycle(6).unwrap());
        let verdict = a.decide_pair(0, 3).unwrap();
        match &verdict.kind {
            VerdictKind::PerfectST { tau, .. } => assert_eq!(tau, &BigUint::from(3u32)),
            other => panic!("expected PerfectST, got {other:?}"),
        }
        assert!(strong_cospectral(&a.spectral, 0, 3, 1e-9));
        // C_8: peak to the quarter vertex at time 2 with amount 1/2
        let a8 = analyzer_of(&cycle(8).unwrap());
        let verdict = a8.decide_pair(0, 2).unwrap();
        match &verdict.kind {
            VerdictKind::PeakST { tau, gamma, amount } => {
                assert_eq!(tau, &BigUint::from(2u32));
                assert_eq!(*gamma, 1);
                assert!((amount - 0.5).abs() < 1e-10);
            }
            other => panic!("expected PeakST, got {other:?}"),
        }
        assert!(!strong_cospectral(&a8.spectral, 0, 2, 1e-9));
        assert!(verdict.oracle.as_ref().unwrap().passed);
        // C_8 (0,1): no peak
        assert!(matches!(
            a8.decide_pair(0, 1).unwrap().kind,
            VerdictKind::NoPeak { .. }
        ));
        // periodicity at n
        let p = a8.decide_periodicity(5).unwrap();
        assert!(matches!(&p.kind, VerdictKind::Periodic { period } if period == &BigUint::from(8u32)));
    }

    #[test]
    fn figure2_pair_and_periodicity() {
        let (g, u, v) = figure2();
        let a = analyzer_of(&g);
        let verdict = a.decide_pair(u, v).unwrap();
        match &verdict.kind {
            VerdictKind::PeakST { tau, gamma, amount } => {
                assert_eq!(tau, &BigUint::from(6u32));
                assert_eq!(*gamma, 1);
                assert!((amount - 3f64.sqrt() / 2.0).abs() < 1e-9);
            }
            other => panic!("expected PeakST, got {other:?}"),
        }
        assert!(verdict.oracle.as_ref().unwrap().passed);
        // periodic exactly at u, with period 12
        for x in 0..7 {
            let p = a.decide_periodicity(x).unwrap();
            if x == u {
                assert!(
                    matches!(&p.kind, VerdictKind::Periodic { period } if period == &BigUint::from(12u32))
                );
                assert!(p.oracle.as_ref().unwrap().passed);
            } else {
                assert!(matches!(p.kind, VerdictKind::NoPeak { .. }), "vertex {x}");
            }
        }
        let gap = a.walk.fidelity_gap(u, v, 6, 1.0);
        assert!((gap - (2.0 - 3f64.sqrt())).abs() < 1e-9);
    }

    #[test]
    fn zero_state_transfer_on_disconnected() {
        let mut edges = vec![(0, 1), (1, 2), (2, 0)];
        edges.extend([(3, 4)]);
        let g = MultiGraph::simple(5, &edges).unwrap();
        let a = analyzer_of(&g);
        let verdict = a.decide_pair(0, 3).unwrap();
        assert!(matches!(verdict.kind, VerdictKind::ZeroST));
        assert!(verdict.oracle.as_ref().unwrap().passed);
        // within a component: not zero
        assert!(!matches!(a.decide_pair(0, 1).unwrap().kind, VerdictKind::ZeroST));
    }

    #[test]
    fn signed_c4_zero_transfer() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let n = DMatrix::from_row_slice(
            8,
            4,
            &[
                s, 0., 0., 0., s, 0., 0., 0., 0., s, 0., 0., 0., s, 0., 0., 0., 0., s, 0., 0.,
                0., s, 0., 0., 0., 0., s, 0., 0., 0., s,
            ],
        );
        let m = DMatrix::from_row_slice(
            8,
            4,
            &[
                s, 0., 0., 0., 0., 0., 0., s, 0., s, 0., 0., -s, 0., 0., 0., 0., 0., s, 0., 0.,
                s, 0., 0., 0., 0., 0., s, 0., 0., s, 0.,
            ],
        );
        let w = walks::generic_walk(
            walks::ReflectionFrame::new(n).unwrap(),
            walks::ReflectionFrame::new(m).unwrap(),
        )
        .unwrap();
        let a = Analyzer::new(w, TransferOptions::default()).unwrap();
        for (u, v) in [(0, 2), (1, 3)] {
            let verdict = a.decide_pair(u, v).unwrap();
            assert!(matches!(verdict.kind, VerdictKind::ZeroST), "pair ({u},{v})");
            assert!(verdict.oracle.as_ref().unwrap().passed);
        }
        // adjacent pairs have nonempty support
        assert!(!matches!(a.decide_pair(0, 1).unwrap().kind, VerdictKind::ZeroST));
    }

    #[test]
    fn gnm_family_peaks() {
        for (n, m) in [(1usize, 1usize), (2, 2), (2, 3)] {
            let g = graphs::gnm(n, m).unwrap();
            let (u, w) = graphs::gnm_terminals(n, m);
            let a = analyzer_of(&g);
            let verdict = a.decide_pair(u, w).unwrap();
            let expect_amount = 2.0 * ((n * m) as f64).sqrt() / (n + m) as f64;
            if n == m {
                match &verdict.kind {
                    VerdictKind::PerfectST { tau, amount, .. } => {
                        assert_eq!(tau, &BigUint::from(4u32));
                        assert!((amount - 1.0).abs() < 1e-9);
                    }
                    other => panic!("expected PerfectST, got {other:?}"),
                }
            } else {
                match &verdict.kind {
                    VerdictKind::PeakST { tau, amount, .. } => {
                        assert_eq!(tau, &BigUint::from(4u32));
                        assert!((amount - expect_amount).abs() < 1e-9);
                    }
                    other => panic!("expected PeakST, got {other:?}"),
                }
            }
            assert!(verdict.oracle.as_ref().unwrap().passed);
        }
    }

    #[test]
    fn grid_periodicity_classification() {
        // periodic iff min(n,m) <= 2 or n = m = 4
        for n in 1..=5usize {
            for m in n..=5usize {
                let map = toroidal_grid(n, m).unwrap();
                let a = Analyzer::new(
                    vertex_face_walk(&map).unwrap(),
                    TransferOptions::default(),
                )
                .unwrap();
                let verdict = a.decide_periodicity(0).unwrap();
                let expect_periodic = n.min(m) <= 2 || (n == 4 && m == 4);
                assert_eq!(
                    matches!(verdict.kind, VerdictKind::Periodic { .. }),
                    expect_periodic,
                    "grid ({n},{m})"
                );
                if let VerdictKind::Periodic { .. } = verdict.kind {
                    assert!(verdict.oracle.as_ref().unwrap().passed, "grid ({n},{m})");
                }
            }
        }
        // the (4,4) grid has period 12
        let map = toroidal_grid(4, 4).unwrap();
        let a = Analyzer::new(vertex_face_walk(&map).unwrap(), TransferOptions::default()).unwrap();
        let verdict = a.decide_periodicity(0).unwrap();
        assert!(
            matches!(&verdict.kind, VerdictKind::Periodic { period } if period == &BigUint::from(12u32))
        );
    }

    #[test]
    fn grid_peak_suite_small() {
        for n in [1usize, 2, 3, 4, 6] {
            let cases = grid_peak_suite(n).unwrap();
            let expect_cases = match (n % 2, n % 4) {
                (1, _) => 1,
                (0, 0) => 2,
                _ => 1,
            };
            assert_eq!(cases.len(), expect_cases, "(4,{n})");
            for case in &cases {
                assert!(case.verdict.oracle.as_ref().unwrap().passed, "(4,{n})");
            }
        }
        // Figure-1 instance: (4,6) peaks to column offset 3 at time 3
        let cases = grid_peak_suite(6).unwrap();
        assert_eq!(cases[0].column_offset, 3);
        assert_eq!(cases[0].time, BigUint::from(3u32));
    }

    #[test]
    fn srg_parameter_analysis() {
        // Petersen
        let v = srg_analyze(SrgParams { n: 10, k: 3, a: 0, c: 1 }).unwrap();
        assert!(matches!(v.class, SrgClass::PrimitiveInteger { theta: 1, tau: -2 }));
        assert!(!v.admits_peak);
        // K_{3,3}
        let v = srg_analyze(SrgParams { n: 6, k: 3, a: 0, c: 3 }).unwrap();
        assert!(matches!(v.class, SrgClass::CompleteMultipartite { parts: 2 }));
        assert!(v.admits_peak);
        // K_{2,2,2}
        let v = srg_analyze(SrgParams { n: 6, k: 4, a: 2, c: 4 }).unwrap();
        assert!(matches!(v.class, SrgClass::CompleteMultipartite { parts: 3 }));
        assert!(v.admits_peak);
        // C_5 is the (5,2,0,1) conference graph
        let v = srg_analyze(SrgParams { n: 5, k: 2, a: 0, c: 1 }).unwrap();
        assert!(matches!(v.class, SrgClass::Conference));
        assert!(!v.admits_peak);
        // Paley(13)
        let v = srg_analyze(SrgParams { n: 13, k: 6, a: 2, c: 3 }).unwrap();
        assert!(matches!(v.class, SrgClass::Conference));
        assert!(!v.admits_peak);
        // disconnected: 3 K_2's
        let v = srg_analyze(SrgParams { n: 6, k: 1, a: 0, c: 0 }).unwrap();
        assert!(matches!(v.class, SrgClass::Disconnected { components: 3 }));
        assert!(v.admits_peak);
        // infeasible
        assert!(srg_analyze(SrgParams { n: 10, k: 3, a: 1, c: 1 }).is_err());
    }

    #[test]
    fn design_analysis() {
        // (3,2,1): the 6-cycle
        let p = graphs::validate_design(3, &[vec![0, 1], vec![0, 2], vec![1, 2]]).unwrap();
        let blocks = vec![vec![0, 1], vec![0, 2], vec![1, 2]];
        let verdict = design_analyze(p, Some((3, &blocks))).unwrap();
        assert!(verdict.admits_peak_from_point);
        assert_eq!(verdict.tau, Some(BigUint::from(3u32)));
        let inst = verdict.instance_verdict.unwrap();
        assert!(inst.is_peak_or_perfect());
        assert_eq!(inst.tau(), Some(&BigUint::from(3u32)));

        // Fano plane: no peak from points
        let fano: Vec<Vec<usize>> = (0..7)
            .map(|i| vec![i, (i + 1) % 7, (i + 3) % 7])
            .collect();
        let p = graphs::validate_design(7, &fano).unwrap();
        let verdict = design_analyze(p, Some((7, &fano))).unwrap();
        assert!(!verdict.admits_peak_from_point);
        let inst = verdict.instance_verdict.unwrap();
        assert!(matches!(inst.kind, VerdictKind::NoPeak { .. }));
    }

    #[test]
    fn blowup_predictions_match_construction() {
        // C_6 blown up by 2: coclique peak at lcm(6,4)/2 = 6
        let base = analyzer_of(&cycle(6).unwrap());
        let pred = blowup_predict(&base, 2).unwrap();
        let vp = &pred.vertex_predictions[0];
        assert_eq!(vp.period, Some(BigUint::from(12u32)));
        assert_eq!(vp.coclique_peak_time, Some(BigUint::from(6u32)));
        // verify on the constructed blow-up
        let big = graphs::blow_up(&cycle(6).unwrap(), 2).unwrap();
        let ba = analyzer_of(&big);
        let verdict = ba.decide_pair(0, 1).unwrap(); // copies (0,0) and (0,1)
        assert!(verdict.is_peak_or_perfect());
        assert_eq!(verdict.tau(), Some(&BigUint::from(6u32)));
        let p = ba.decide_periodicity(0).unwrap();
        assert!(matches!(&p.kind, VerdictKind::Periodic { period } if period == &BigUint::from(12u32)));

        // K_3 blown up by 2 = K_{2,2,2}: period 12, coclique peak at 6
        let base = analyzer_of(&complete(3).unwrap());
        let pred = blowup_predict(&base, 2).unwrap();
        let vp = &pred.vertex_predictions[0];
        assert_eq!(vp.period, Some(BigUint::from(12u32)));
        assert_eq!(vp.coclique_peak_time, Some(BigUint::from(6u32)));
        let big = graphs::blow_up(&complete(3).unwrap(), 2).unwrap();
        let ba = analyzer_of(&big);
        let verdict = ba.decide_pair(0, 1).unwrap();
        assert!(verdict.is_peak_or_perfect());
        assert_eq!(verdict.tau(), Some(&BigUint::from(6u32)));

        // K_4 blown up: no periodicity in the base, none in the blow-up
        let base = analyzer_of(&complete(4).unwrap());
        let pred = blowup_predict(&base, 3).unwrap();
        assert!(pred.vertex_predictions.iter().all(|vp| vp.period.is_none()));
        let big = graphs::blow_up(&complete(4).unwrap(), 3).unwrap();
        let ba = analyzer_of(&big);
        assert!(!ba.decide_pair(0, 1).unwrap().is_peak_or_perfect());
        assert!(matches!(ba.decide_periodicity(0).unwrap().kind, VerdictKind::NoPeak { .. }));

        // cross pairs inherit the base verdict times (C_6 x2: antipodal
        // copies peak at time 3 with amount 1/2)
        let base = analyzer_of(&cycle(6).unwrap());
        let pred = blowup_predict(&base, 2).unwrap();
        let (_, _, kind) = pred
            .pair_predictions
            .iter()
            .find(|&&(u, v, _)| (u, v) == (0, 3))
            .unwrap()
            .clone();
        match kind {
            VerdictKind::PeakST { tau, amount, .. } => {
                assert_eq!(tau, BigUint::from(3u32));
                assert!((amount - 0.5).abs() < 1e-9);
            }
            other => panic!("expected PeakST, got {other:?}"),
        }
        let big = graphs::blow_up(&cycle(6).unwrap(), 2).unwrap();
        let ba = analyzer_of(&big);
        let verdict = ba.decide_pair(0, 6).unwrap(); // (0,0) -> (3,0)
        match verdict.kind {
            VerdictKind::PeakST { tau, amount, .. } => {
                assert_eq!(tau, BigUint::from(3u32));
                assert!((amount - 0.5).abs() < 1e-9);
            }
            other => panic!("expected PeakST in blow-up, got {other:?}"),
        }

        assert!(blowup_predict(&base, 1).is_err());
    }

    #[test]
    fn c8_support_sign_pattern() {
        // the (0,2) support of C_8 holds the even-k cosines with signs
        // alternating by k mod 4
        let a = analyzer_of(&cycle(8).unwrap());
        let ms = mutual_support(&a.spectral, 0, 2, 1e-9);
        // eigenvalues sorted descending: cos(2 pi k / 8) for k = 0..4
        let support = ms.support();
        let thetas: Vec<f64> = support.iter().map(|&k| a.spectral.eigenvalues[k]).collect();
        assert_eq!(thetas.len(), 3);
        assert!((thetas[0] - 1.0).abs() < 1e-9); // k = 0
        assert!(thetas[1].abs() < 1e-9); // k = 2
        assert!((thetas[2] + 1.0).abs() < 1e-9); // k = 4
        // k = 0 mod 4 positive, k = 2 mod 4 negative
        assert!(ms.entries[support[0]] > 0.0);
        assert!(ms.entries[support[1]] < 0.0);
        assert!(ms.entries[support[2]] > 0.0);
    }

    #[test]
    fn diagonal_support_has_no_negative_part() {
        for g in [cycle(7).unwrap(), complete(5).unwrap(), graphs::petersen().unwrap()] {
            let a = analyzer_of(&g);
            for u in 0..a.dim() {
                let ms = mutual_support(&a.spectral, u, u, 1e-9);
                assert!(ms.negative.is_empty(), "diagonal entry negative at {u}");
                assert!(!ms.positive.is_empty());
            }
        }
    }

    #[test]
    fn k4_pair_not_strongly_cospectral() {
        let a = analyzer_of(&complete(4).unwrap());
        assert!(!strong_cospectral(&a.spectral, 0, 1, 1e-9));
    }

    #[test]
    fn fidelity_gap_trivial_cases() {
        let a = analyzer_of(&cycle(5).unwrap());
        assert!(a.walk.fidelity_gap(2, 2, 0, 1.0).abs() < 1e-12);
    }

    #[test]
    fn gnm23_bound_matrix_entry() {
        let g = graphs::gnm(2, 3).unwrap();
        let (u, w) = graphs::gnm_terminals(2, 3);
        let a = analyzer_of(&g);
        let m = a.peak_bound_matrix();
        let expect = 2.0 * 6f64.sqrt() / 5.0;
        assert!((m[(u, w)] - expect).abs() < 1e-10);
    }

    #[test]
    fn peak_bound_matrix_p3() {
        let a = analyzer_of(&graphs::path(3).unwrap());
        let m = a.peak_bound_matrix();
        assert!((m[(0, 1)] - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-10);
        for i in 0..3 {
            assert!((m[(i, i)] - 1.0).abs() < 1e-10);
        }
        assert!((m[(0, 2)] - 1.0).abs() < 1e-10); // endpoints are strongly cospectral
    }
}
