//! Recognition of real numbers as cosines of rational multiples of pi,
//! with numeric and algebraic certificates.
//!
//! A value theta in [-1, 1] has at most one representation
//! theta = cos(p pi / q) with 0 <= p <= q, gcd(p, q) = 1. Candidates come
//! from continued-fraction convergents of arccos(theta)/pi; a candidate is
//! certified exactly when the minimal polynomial of 2 cos(p pi / q)
//! divides the characteristic polynomial of an exact rational conjugate of
//! the matrix the eigenvalue came from.

use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::exact::{self, rat, RatPoly};
use crate::{Error, Result};

pub const DEFAULT_TOL: f64 = 1e-9;
pub const DEFAULT_Q_MAX: u64 = 64;

/// cos(p pi / q) in lowest terms with 0 <= p <= q.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RationalCosine {
    pub p: u64,
    pub q: u64,
}

impl RationalCosine {
    pub fn new(p: u64, q: u64) -> Result<Self> {
        if q == 0 || p > q {
            return Err(Error::Parameter(format!("need 0 <= p <= q, got {p}/{q}")));
        }
        if p.gcd(&q) != 1 && !(p == 0 && q == 1) {
            return Err(Error::Parameter(format!("{p}/{q} not in lowest terms")));
        }
        Ok(RationalCosine { p, q })
    }

    pub fn value(&self) -> f64 {
        (self.p as f64 * std::f64::consts::PI / self.q as f64).cos()
    }

    /// The even-numerator pair (r, s) with theta = cos(2 r pi / s),
    /// gcd(r, s) = 1; used for periodicity bookkeeping.
    pub fn even_form(&self) -> (u64, u64) {
        if self.p.is_multiple_of(2) {
            (self.p / 2, self.q)
        } else {
            (self.p, 2 * self.q)
        }
    }
}

/// How a recognized cosine was verified.
#[derive(Debug, Clone, PartialEq)]
pub enum CosineEvidence {
    /// The minimal polynomial of 2cos(p pi / q) divides the exact
    /// characteristic polynomial (after x -> 2x alignment).
    Exact,
    /// Only the floating-point residual |cos(p pi/q) - theta| supports it.
    NumericOnly { residual: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct CosineCertificate {
    pub pq: RationalCosine,
    pub evidence: CosineEvidence,
}

/// Outcome of trying to recognize one eigenvalue.
#[derive(Debug, Clone, PartialEq)]
pub enum Recognition {
    Cosine(CosineCertificate),
    /// theta is certified (via the exact charpoly) to be a rational number
    /// outside {0, +-1/2, +-1}, hence not a cosine of a rational multiple
    /// of pi.
    RationalNotCosine(BigRational),
    /// Nothing found with denominators up to the bound; definitive only
    /// relative to q_max.
    Unrecognized { q_max: u64 },
}

/// Chebyshev polynomial of the first kind, T_t(x), by the three-term
/// recurrence.
pub fn chebyshev_t(t: usize, x: f64) -> f64 {
    match t {
        0 => 1.0,
        1 => x,
        _ => {
            let mut prev = 1.0;
            let mut cur = x;
            for _ in 1..t {
                let next = 2.0 * x * cur - prev;
                prev = cur;
                cur = next;
            }
            cur
        }
    }
}

/// Exact-rational Chebyshev evaluation.
pub fn chebyshev_t_exact(t: usize, x: &BigRational) -> BigRational {
    match t {
        0 => rat(1, 1),
        1 => x.clone(),
        _ => {
            let two = rat(2, 1);
            let mut prev = rat(1, 1);
            let mut cur = x.clone();
            for _ in 1..t {
                let next = &two * x * &cur - &prev;
                prev = cur;
                cur = next;
            }
            cur
        }
    }
}

/// Minimal polynomial over Z of 2cos(p pi / q); see `exact::min_poly_2cos`.
pub fn min_poly_2cos(p: u64, q: u64) -> Result<RatPoly> {
    exact::min_poly_2cos(p, q)
}

/// Full recognition: numeric candidate search plus certification against an
/// optional exact characteristic polynomial (of the matrix whose eigenvalue
/// `theta` is).
pub fn recognize_full(
    theta: f64,
    q_max: u64,
    tol: f64,
    exact_context: Option<&RatPoly>,
) -> Result<Recognition> {
    if !(-1.0 - tol..=1.0 + tol).contains(&theta) {
        return Err(Error::Parameter(format!("theta = {theta} outside [-1, 1]")));
    }
    let clamped = theta.clamp(-1.0, 1.0);

    // Endpoints first: arccos is ill-conditioned there.
    for (p, q) in [(0u64, 1u64), (1, 1)] {
        let pq = RationalCosine { p, q };
        if (pq.value() - clamped).abs() < tol {
            return Ok(certify(pq, clamped, exact_context));
        }
    }

    // A certified rational value outside the Niven set {0, ±1/2, ±1} can
    // never be a cosine of a rational multiple of pi.
    if let Some(poly) = exact_context {
        if let Some(r) =
            crate::spectral::certified_rational_eigenvalue(poly, clamped, q_max.max(1 << 16), tol)
        {
            if !is_niven_value(&r) {
                return Ok(Recognition::RationalNotCosine(r));
            }
        }
    }

    let t = clamped.acos() / std::f64::consts::PI;
    for (num, den) in exact::convergents(t, q_max) {
        if num.is_negative() || num > den {
            continue;
        }
        let p = num.to_u64().unwrap_or(u64::MAX);
        let q = den.to_u64().unwrap_or(u64::MAX);
        if q == 0 || q > q_max {
            continue;
        }
        let (p, q) = {
            let g = p.gcd(&q);
            (p / g, q / g)
        };
        let pq = match RationalCosine::new(p, q) {
            Ok(pq) => pq,
            Err(_) => continue,
        };
        if (pq.value() - clamped).abs() < tol {
            match certify(pq, clamped, exact_context) {
                // An exact context that refutes the candidate means the
                // candidate is a near miss; keep scanning convergents.
                Recognition::Unrecognized { .. } => continue,
                hit => return Ok(hit),
            }
        }
    }
    Ok(Recognition::Unrecognized { q_max })
}

fn is_niven_value(r: &BigRational) -> bool {
    let doubled = r * rat(2, 1);
    doubled.is_integer() && doubled.numer().abs() <= 2.into()
}

fn certify(pq: RationalCosine, theta: f64, exact_context: Option<&RatPoly>) -> Recognition {
    match exact_context {
        Some(poly) => {
            let minpoly = exact::min_poly_2cos(pq.p, pq.q).expect("coprime by construction");
            // theta is a root of poly; 2cos(p pi/q) is a root of minpoly.
            // Equality of the algebraic numbers is exactly divisibility of
            // poly by minpoly(2x), since minpoly is irreducible.
            let aligned = minpoly.compose_scale(&rat(2, 1));
            if poly.divisible_by(&aligned) {
                Recognition::Cosine(CosineCertificate {
                    pq,
                    evidence: CosineEvidence::Exact,
                })
            } else {
                Recognition::Unrecognized { q_max: pq.q }
            }
        }
        None => Recognition::Cosine(CosineCertificate {
            pq,
            evidence: CosineEvidence::NumericOnly {
                residual: (pq.value() - theta).abs(),
            },
        }),
    }
}

/// Spec-level entry point: `Some` certificate or `None`.
pub fn recognize(
    theta: f64,
    q_max: u64,
    tol: f64,
    exact_context: Option<&RatPoly>,
) -> Result<Option<CosineCertificate>> {
    Ok(match recognize_full(theta, q_max, tol, exact_context)? {
        Recognition::Cosine(c) => Some(c),
        _ => None,
    })
}

/// One term of a two-cosine rational combination.
#[derive(Debug, Clone)]
pub struct CosineTerm {
    pub coefficient: BigRational,
    /// Angle as the rational multiple p/q of pi (any p/q >= 0).
    pub angle: (u64, u64),
}

/// Decide whether sum_i coefficient_i * cos(angle_i * pi) equals `target`,
/// for at most two cosine terms, using the classification of rational
/// two-cosine combinations: the only irrational-cosine relation is
/// proportional to cos(pi/5) - cos(2pi/5) = 1/2.
pub fn conway_jones_rational_combo(terms: &[CosineTerm], target: &BigRational) -> Result<bool> {
    if terms.len() > 2 {
        return Err(Error::Parameter(
            "combinations with more than two cosines are out of scope".into(),
        ));
    }
    // Normalize each term to an angle in [0, pi/2]: reduce mod 2pi, then
    // cos(2pi - x) = cos(x) and cos(pi - x) = -cos(x).
    let mut rational_sum = -target.clone();
    let mut irrational: Vec<(BigRational, u64, u64)> = Vec::new();
    for term in terms {
        let (mut p, q) = term.angle;
        if q == 0 {
            return Err(Error::Parameter("angle denominator must be positive".into()));
        }
        let mut coef = term.coefficient.clone();
        p %= 2 * q;
        if p > q {
            p = 2 * q - p;
        }
        if 2 * p > q {
            p = q - p;
            coef = -coef;
        }
        let g = p.gcd(&q);
        let (p, q) = if p == 0 { (0, 1) } else { (p / g, q / g) };
        // rational cosines in [0, pi/2]: cos 0 = 1, cos(pi/3) = 1/2,
        // cos(pi/2) = 0
        match (p, q) {
            (0, 1) => rational_sum += coef,
            (1, 3) => rational_sum += coef * rat(1, 2),
            (1, 2) => {}
            _ => irrational.push((coef, p, q)),
        }
    }
    irrational.sort_by_key(|a| (a.2, a.1));
    let mut merged: Vec<(BigRational, u64, u64)> = Vec::new();
    for (coef, p, q) in irrational {
        match merged.last_mut() {
            Some((c, lp, lq)) if *lp == p && *lq == q => *c += coef,
            _ => merged.push((coef, p, q)),
        }
    }
    merged.retain(|(c, _, _)| !c.is_zero());
    match merged.len() {
        0 => Ok(rational_sum.is_zero()),
        1 => Ok(false),
        2 => {
            // Only cos(pi/5) - cos(2pi/5) = 1/2 (up to rational scale).
            let (c1, p1, q1) = &merged[0];
            let (c2, p2, q2) = &merged[1];
            if !((*p1, *q1) == (1, 5) && (*p2, *q2) == (2, 5)) {
                return Ok(false);
            }
            if c2 != &(-c1.clone()) {
                return Ok(false);
            }
            Ok((rational_sum + c1 * rat(1, 2)).is_zero())
        }
        _ => unreachable!("at most two terms"),
    }
}
