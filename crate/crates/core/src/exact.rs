//! Exact rational arithmetic: polynomials over Q, characteristic polynomials
//! of rational matrices, cyclotomic polynomials, and continued-fraction
//! recognition of floating-point values as small rationals.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::{Error, Result};

pub type Rat = BigRational;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Dense polynomial over Q, coefficients in ascending degree order with no
/// trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatPoly {
    pub coeffs: Vec<Rat>,
}

impl RatPoly {
    pub fn new(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        RatPoly { coeffs }
    }

    pub fn zero() -> Self {
        RatPoly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        RatPoly {
            coeffs: vec![Rat::one()],
        }
    }

    /// The monomial x.
    pub fn x() -> Self {
        RatPoly {
            coeffs: vec![Rat::zero(), Rat::one()],
        }
    }

    pub fn constant(c: Rat) -> Self {
        Self::new(vec![c])
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| rat(c, 1)).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * x + rat_to_f64(c);
        }
        acc
    }

    pub fn add(&self, other: &RatPoly) -> RatPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![Rat::zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i] += c;
        }
        for (i, c) in other.coeffs.iter().enumerate() {
            out[i] += c;
        }
        RatPoly::new(out)
    }

    pub fn sub(&self, other: &RatPoly) -> RatPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![Rat::zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i] += c;
        }
        for (i, c) in other.coeffs.iter().enumerate() {
            out[i] -= c;
        }
        RatPoly::new(out)
    }

    pub fn mul(&self, other: &RatPoly) -> RatPoly {
        if self.is_zero() || other.is_zero() {
            return RatPoly::zero();
        }
        let mut out = vec![Rat::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        RatPoly::new(out)
    }

    pub fn scale(&self, c: &Rat) -> RatPoly {
        RatPoly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Euclidean division; panics on division by the zero polynomial.
    pub fn div_rem(&self, divisor: &RatPoly) -> (RatPoly, RatPoly) {
        assert!(!divisor.is_zero(), "polynomial division by zero");
        let mut rem = self.coeffs.clone();
        let dd = divisor.degree();
        let lead = divisor.coeffs[dd].clone();
        if rem.len() <= dd {
            return (RatPoly::zero(), RatPoly::new(rem));
        }
        let mut quot = vec![Rat::zero(); rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            let q = &rem[i] / &lead;
            if q.is_zero() {
                continue;
            }
            for (j, c) in divisor.coeffs.iter().enumerate() {
                let idx = i - dd + j;
                let delta = c * &q;
                rem[idx] -= delta;
            }
            quot[i - dd] = q;
        }
        (RatPoly::new(quot), RatPoly::new(rem))
    }

    /// True when `divisor` divides `self` exactly.
    pub fn divisible_by(&self, divisor: &RatPoly) -> bool {
        self.div_rem(divisor).1.is_zero()
    }

    /// Substitute x -> a*x, returning p(a*x).
    pub fn compose_scale(&self, a: &Rat) -> RatPoly {
        let mut pow = Rat::one();
        let mut out = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            out.push(c * &pow);
            pow *= a;
        }
        RatPoly::new(out)
    }

    /// Coefficients cleared to a primitive integer vector: multiplies by the
    /// lcm of denominators and divides by the gcd of numerators.
    pub fn integer_scaled(&self) -> Vec<BigInt> {
        if self.is_zero() {
            return vec![BigInt::zero()];
        }
        let mut l = BigInt::one();
        for c in &self.coeffs {
            l = l.lcm(c.denom());
        }
        let ints: Vec<BigInt> = self.coeffs.iter().map(|c| (c * &l).to_integer()).collect();
        let mut g = BigInt::zero();
        for c in &ints {
            g = g.gcd(c);
        }
        if g.is_zero() {
            return ints;
        }
        let sign = if ints.last().unwrap().is_negative() {
            -BigInt::one()
        } else {
            BigInt::one()
        };
        let g = g * sign;
        ints.into_iter().map(|c| c / &g).collect()
    }
}

pub fn rat_to_f64(r: &Rat) -> f64 {
    let num = r.numer();
    let den = r.denom();
    // Exact for anything that fits; falls back to string conversion otherwise.
    match (num.to_string().parse::<f64>(), den.to_string().parse::<f64>()) {
        (Ok(n), Ok(d)) => n / d,
        _ => f64::NAN,
    }
}

/// Dense rational matrix, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatMatrix {
    pub dim: usize,
    pub data: Vec<Rat>,
}

impl RatMatrix {
    pub fn zeros(dim: usize) -> Self {
        RatMatrix {
            dim,
            data: vec![Rat::zero(); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = Rat::one();
        }
        m
    }

    pub fn mul(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!(self.dim, other.dim);
        let n = self.dim;
        let mut out = RatMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        let prod = a * b;
                        out[(i, j)] += prod;
                    }
                }
            }
        }
        out
    }

    pub fn trace(&self) -> Rat {
        (0..self.dim).map(|i| self[(i, i)].clone()).sum()
    }

    pub fn to_f64(&self) -> nalgebra::DMatrix<f64> {
        nalgebra::DMatrix::from_fn(self.dim, self.dim, |i, j| rat_to_f64(&self[(i, j)]))
    }
}

impl std::ops::Index<(usize, usize)> for RatMatrix {
    type Output = Rat;
    fn index(&self, (i, j): (usize, usize)) -> &Rat {
        &self.data[i * self.dim + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for RatMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rat {
        let d = self.dim;
        &mut self.data[i * d + j]
    }
}

/// Exact characteristic polynomial det(xI - M) of a rational matrix.
///
/// Reduces M to upper Hessenberg form by an exact similarity, then expands
/// via the standard Hessenberg recurrence. O(n^3) rational operations.
pub fn charpoly(m: &RatMatrix) -> RatPoly {
    let n = m.dim;
    if n == 0 {
        return RatPoly::one();
    }
    let mut h = m.clone();
    // Hessenberg reduction with similarity row/column swaps for pivoting.
    for j in 0..n.saturating_sub(2) {
        if h[(j + 1, j)].is_zero() {
            if let Some(r) = ((j + 2)..n).find(|&r| !h[(r, j)].is_zero()) {
                for c in 0..n {
                    let a = h[(j + 1, c)].clone();
                    let b = h[(r, c)].clone();
                    h[(j + 1, c)] = b;
                    h[(r, c)] = a;
                }
                for c in 0..n {
                    let a = h[(c, j + 1)].clone();
                    let b = h[(c, r)].clone();
                    h[(c, j + 1)] = b;
                    h[(c, r)] = a;
                }
            } else {
                continue;
            }
        }
        let pivot = h[(j + 1, j)].clone();
        for r in (j + 2)..n {
            if h[(r, j)].is_zero() {
                continue;
            }
            let factor = &h[(r, j)] / &pivot;
            for c in 0..n {
                let delta = &h[(j + 1, c)] * &factor;
                h[(r, c)] -= delta;
            }
            // Column update preserves similarity.
            for c in 0..n {
                let delta = &h[(c, r)] * &factor;
                h[(c, j + 1)] += delta;
            }
        }
    }
    // p_0 = 1, p_m = (x - h_mm) p_{m-1} - sum_k h_km (prod subdiag) p_{k-1}.
    let mut polys: Vec<RatPoly> = Vec::with_capacity(n + 1);
    polys.push(RatPoly::one());
    for mi in 1..=n {
        let xm = RatPoly::new(vec![-h[(mi - 1, mi - 1)].clone(), Rat::one()]);
        let mut p = xm.mul(&polys[mi - 1]);
        let mut subprod = Rat::one();
        for k in (1..mi).rev() {
            // product of subdiagonal entries h_{j,j-1} for j = k+1..=mi
            subprod *= &h[(k, k - 1)];
            if h[(k - 1, mi - 1)].is_zero() || subprod.is_zero() {
                if subprod.is_zero() {
                    break;
                }
                continue;
            }
            let coef = &h[(k - 1, mi - 1)] * &subprod;
            p = p.sub(&polys[k - 1].scale(&coef));
        }
        polys.push(p);
    }
    polys.pop().unwrap()
}

/// All divisors of n in ascending order.
fn divisors(n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut i = 1;
    while i * i <= n {
        if n.is_multiple_of(i) {
            out.push(i);
            if i != n / i {
                out.push(n / i);
            }
        }
        i += 1;
    }
    out.sort_unstable();
    out
}

pub fn euler_phi(mut n: u64) -> u64 {
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

/// The n-th cyclotomic polynomial over Z, by dividing x^n - 1 by the
/// cyclotomic polynomials of the proper divisors of n.
pub fn cyclotomic(n: u64) -> RatPoly {
    assert!(n > 0);
    let mut xn1 = vec![Rat::zero(); n as usize + 1];
    xn1[0] = -Rat::one();
    xn1[n as usize] = Rat::one();
    let mut p = RatPoly::new(xn1);
    for d in divisors(n) {
        if d == n {
            continue;
        }
        let (q, r) = p.div_rem(&cyclotomic(d));
        debug_assert!(r.is_zero());
        p = q;
    }
    p
}

/// Minimal polynomial over Z of 2cos(p*pi/q) for coprime p, q.
///
/// Writing 2cos(p*pi/q) = z + 1/z with z a primitive n-th root of unity
/// (n = 2q when p is odd, n = q when p is even), the minimal polynomial is
/// the real cyclotomic polynomial Psi_n recovered from the palindromic
/// Phi_n(x) = x^{phi(n)/2} Psi_n(x + 1/x).
pub fn min_poly_2cos(p: u64, q: u64) -> Result<RatPoly> {
    if q == 0 {
        return Err(Error::Parameter("q must be positive".into()));
    }
    if p.gcd(&q) != 1 && !(p == 0 && q == 1) {
        return Err(Error::Parameter(format!(
            "p/q must be in lowest terms, got {p}/{q}"
        )));
    }
    let n = if p % 2 == 1 { 2 * q } else { q };
    match n {
        0 => unreachable!(),
        1 => return Ok(RatPoly::from_i64(&[-2, 1])), // 2cos(0) = 2
        2 => return Ok(RatPoly::from_i64(&[2, 1])),  // 2cos(pi) = -2
        _ => {}
    }
    let phi = cyclotomic(n);
    let d = (euler_phi(n) / 2) as usize;
    debug_assert_eq!(phi.degree(), 2 * d);
    // V_k(y) = z^k + z^-k as a polynomial in y = z + 1/z.
    let mut v_prev = RatPoly::constant(rat(2, 1)); // V_0
    let mut v_cur = RatPoly::x(); // V_1
    let mut psi = RatPoly::constant(phi.coeffs[d].clone());
    for k in 1..=d {
        psi = psi.add(&v_cur.scale(&phi.coeffs[d + k]));
        let next = RatPoly::x().mul(&v_cur).sub(&v_prev);
        v_prev = std::mem::replace(&mut v_cur, next);
    }
    Ok(psi)
}

/// Best rational approximations of `x` by continued-fraction convergents,
/// in order of increasing denominator, with denominators bounded by
/// `max_den`. Returns (numerator, denominator) pairs; the numerator may be
/// negative.
pub fn convergents(x: f64, max_den: u64) -> Vec<(BigInt, BigInt)> {
    let mut out = Vec::new();
    if !x.is_finite() {
        return out;
    }
    let mut h_prev = BigInt::one();
    let mut h_prev2 = BigInt::zero();
    let mut k_prev = BigInt::zero();
    let mut k_prev2 = BigInt::one();
    let mut val = x;
    for _ in 0..64 {
        let a = val.floor();
        if a.abs() > 9e15 {
            break;
        }
        let ai = BigInt::from(a as i64);
        let h = &ai * &h_prev + &h_prev2;
        let k = &ai * &k_prev + &k_prev2;
        if k > BigInt::from(max_den) {
            break;
        }
        out.push((h.clone(), k.clone()));
        h_prev2 = h_prev;
        h_prev = h;
        k_prev2 = k_prev;
        k_prev = k;
        let frac = val - a;
        if frac.abs() < 1e-15 {
            break;
        }
        val = 1.0 / frac;
    }
    out
}

/// Recognize `x` as a rational with denominator at most `max_den`, within
/// `tol`. Returns the reduced fraction.
pub fn recognize_rational(x: f64, max_den: u64, tol: f64) -> Option<Rat> {
    for (num, den) in convergents(x, max_den) {
        let r = Rat::new(num, den);
        if (rat_to_f64(&r) - x).abs() < tol {
            return Some(r);
        }
    }
    None
}
