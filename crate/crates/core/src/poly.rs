//! Exact bivariate polynomial arithmetic.
//!
//! Polynomials are stored densely in graded order: the coefficient of `x^a y^b` lives at
//! index `d(d+1)/2 + b` with `d = a + b`. Degrees in this crate stay small (manufactured
//! solutions of degree 8, right-hand sides of degree ≤ 8), so dense storage is both simpler
//! and exact.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use crate::error::Error;

/// Coordinate direction of a partial derivative.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
}

/// Graded index of the monomial `x^a y^b`.
#[inline]
pub fn monomial_index(a: usize, b: usize) -> usize {
    let d = a + b;
    d * (d + 1) / 2 + b
}

/// Number of monomials of total degree at most `degree`.
#[inline]
pub fn dim_p(degree: usize) -> usize {
    (degree + 1) * (degree + 2) / 2
}

/// Exponent pair of the monomial stored at graded index `idx`.
pub fn monomial_exponents(idx: usize) -> (usize, usize) {
    let mut d = 0;
    while dim_p(d) <= idx {
        d += 1;
    }
    let b = idx - d * (d + 1) / 2;
    (d - b, b)
}

/// A real polynomial in two variables.
#[derive(Clone, PartialEq, Default)]
pub struct Poly2 {
    coeffs: Vec<f64>,
}

impl Poly2 {
    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: f64) -> Self {
        Self::monomial(0, 0, c)
    }

    pub fn monomial(a: usize, b: usize, c: f64) -> Self {
        let mut coeffs = vec![0.0; dim_p(a + b)];
        coeffs[monomial_index(a, b)] = c;
        Self::from_graded(coeffs)
    }

    pub fn x() -> Self {
        Self::monomial(1, 0, 1.0)
    }

    pub fn y() -> Self {
        Self::monomial(0, 1, 1.0)
    }

    /// Builds a polynomial from `(a, b, coeff)` terms; repeated exponents accumulate.
    pub fn from_terms(terms: &[(usize, usize, f64)]) -> Self {
        let deg = terms.iter().map(|&(a, b, _)| a + b).max().unwrap_or(0);
        let mut coeffs = vec![0.0; dim_p(deg)];
        for &(a, b, c) in terms {
            coeffs[monomial_index(a, b)] += c;
        }
        Self::from_graded(coeffs)
    }

    /// Wraps a graded coefficient vector, trimming trailing zero degrees.
    pub fn from_graded(mut coeffs: Vec<f64>) -> Self {
        let mut d = match coeffs.len() {
            0 => return Self::zero(),
            n => {
                let mut d = 0;
                while dim_p(d) < n {
                    d += 1;
                }
                coeffs.resize(dim_p(d), 0.0);
                d as isize
            }
        };
        while d >= 0 {
            let lo = (d as usize) * (d as usize + 1) / 2;
            if coeffs[lo..].iter().any(|&c| c != 0.0) {
                break;
            }
            coeffs.truncate(lo);
            d -= 1;
        }
        Self { coeffs }
    }

    /// Total degree; the zero polynomial has degree −1.
    pub fn degree(&self) -> isize {
        if self.coeffs.is_empty() {
            return -1;
        }
        let mut d = 0;
        while dim_p(d) < self.coeffs.len() {
            d += 1;
        }
        d as isize
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, a: usize, b: usize) -> f64 {
        self.coeffs.get(monomial_index(a, b)).copied().unwrap_or(0.0)
    }

    pub fn graded_coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Nonzero terms as `(a, b, coeff)` in graded order.
    pub fn terms(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0.0)
            .map(|(i, &c)| {
                let (a, b) = monomial_exponents(i);
                (a, b, c)
            })
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        let deg = self.degree();
        if deg < 0 {
            return 0.0;
        }
        let deg = deg as usize;
        let mut xp = vec![1.0; deg + 1];
        let mut yp = vec![1.0; deg + 1];
        for i in 1..=deg {
            xp[i] = xp[i - 1] * x;
            yp[i] = yp[i - 1] * y;
        }
        let mut sum = 0.0;
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c != 0.0 {
                let (a, b) = monomial_exponents(i);
                sum += c * xp[a] * yp[b];
            }
        }
        sum
    }

    pub fn gradient(&self, x: f64, y: f64) -> [f64; 2] {
        [self.diff(Axis::X).eval(x, y), self.diff(Axis::Y).eval(x, y)]
    }

    /// Exact partial derivative.
    pub fn diff(&self, axis: Axis) -> Poly2 {
        let deg = self.degree();
        if deg <= 0 {
            return Poly2::zero();
        }
        let mut out = vec![0.0; dim_p(deg as usize - 1)];
        for (a, b, c) in self.terms() {
            match axis {
                Axis::X if a > 0 => out[monomial_index(a - 1, b)] += c * a as f64,
                Axis::Y if b > 0 => out[monomial_index(a, b - 1)] += c * b as f64,
                _ => {}
            }
        }
        Poly2::from_graded(out)
    }

    pub fn scale(&self, s: f64) -> Poly2 {
        Poly2::from_graded(self.coeffs.iter().map(|c| c * s).collect())
    }

    /// Largest absolute coefficient.
    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    /// Substitutes `x -> x0 + s*x`, `y -> y0 + s*y`.
    pub fn shift_scale(&self, x0: f64, y0: f64, s: f64) -> Poly2 {
        let xs = Poly2::constant(x0) + Poly2::x().scale(s);
        let ys = Poly2::constant(y0) + Poly2::y().scale(s);
        let mut out = Poly2::zero();
        for (a, b, c) in self.terms() {
            let mut t = Poly2::constant(c);
            for _ in 0..a {
                t = &t * &xs;
            }
            for _ in 0..b {
                t = &t * &ys;
            }
            out = out + t;
        }
        out
    }
}

fn combine(p: &Poly2, q: &Poly2, sign: f64) -> Poly2 {
    let n = p.coeffs.len().max(q.coeffs.len());
    let mut out = vec![0.0; n];
    for (i, c) in p.coeffs.iter().enumerate() {
        out[i] += c;
    }
    for (i, c) in q.coeffs.iter().enumerate() {
        out[i] += sign * c;
    }
    Poly2::from_graded(out)
}

impl Add for &Poly2 {
    type Output = Poly2;
    fn add(self, rhs: &Poly2) -> Poly2 {
        combine(self, rhs, 1.0)
    }
}

impl Add for Poly2 {
    type Output = Poly2;
    fn add(self, rhs: Poly2) -> Poly2 {
        combine(&self, &rhs, 1.0)
    }
}

impl Sub for &Poly2 {
    type Output = Poly2;
    fn sub(self, rhs: &Poly2) -> Poly2 {
        combine(self, rhs, -1.0)
    }
}

impl Sub for Poly2 {
    type Output = Poly2;
    fn sub(self, rhs: Poly2) -> Poly2 {
        combine(&self, &rhs, -1.0)
    }
}

impl Neg for Poly2 {
    type Output = Poly2;
    fn neg(self) -> Poly2 {
        self.scale(-1.0)
    }
}

impl Mul for &Poly2 {
    type Output = Poly2;
    fn mul(self, rhs: &Poly2) -> Poly2 {
        if self.is_zero() || rhs.is_zero() {
            return Poly2::zero();
        }
        let deg = (self.degree() + rhs.degree()) as usize;
        let mut out = vec![0.0; dim_p(deg)];
        for (a, b, c) in self.terms() {
            for (a2, b2, c2) in rhs.terms() {
                out[monomial_index(a + a2, b + b2)] += c * c2;
            }
        }
        Poly2::from_graded(out)
    }
}

impl Mul for Poly2 {
    type Output = Poly2;
    fn mul(self, rhs: Poly2) -> Poly2 {
        &self * &rhs
    }
}

impl fmt::Debug for Poly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms().map(|(a, b, c)| format!("{c}*x^{a}*y^{b}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Display for Poly2 {
    /// Writes the `a,b,coeff;...` form accepted by [`FromStr`].
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.terms().map(|(a, b, c)| format!("{a},{b},{c}")).collect();
        write!(f, "{}", parts.join(";"))
    }
}

impl FromStr for Poly2 {
    type Err = Error;

    /// Parses `"a,b,coeff;a,b,coeff;..."`.
    fn from_str(s: &str) -> Result<Self, Error> {
        let mut terms = Vec::new();
        for chunk in s.split(';').map(str::trim).filter(|c| !c.is_empty()) {
            let fields: Vec<&str> = chunk.split(',').map(str::trim).collect();
            let bad = || Error::Config(format!("malformed polynomial term {chunk:?}, expected a,b,coeff"));
            if fields.len() != 3 {
                return Err(bad());
            }
            let a: usize = fields[0].parse().map_err(|_| bad())?;
            let b: usize = fields[1].parse().map_err(|_| bad())?;
            let c: f64 = fields[2].parse().map_err(|_| bad())?;
            if a + b > 40 || !c.is_finite() {
                return Err(bad());
            }
            terms.push((a, b, c));
        }
        Ok(Poly2::from_terms(&terms))
    }
}

/// Constant symmetric diffusion tensor `[[a, b], [b, c]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KappaMatrix {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl KappaMatrix {
    /// Checked constructor; rejects matrices that are not symmetric positive definite.
    pub fn new(a: f64, b: f64, c: f64) -> Result<Self, Error> {
        let k = Self { a, b, c };
        if !(a.is_finite() && b.is_finite() && c.is_finite()) || a <= 0.0 || k.det() <= 0.0 {
            return Err(Error::Config(format!(
                "kappa [[{a}, {b}], [{b}, {c}]] is not symmetric positive definite (det = {})",
                k.det()
            )));
        }
        Ok(k)
    }

    pub fn identity() -> Self {
        Self { a: 1.0, b: 0.0, c: 1.0 }
    }

    pub fn isotropic(s: f64) -> Self {
        Self { a: s, b: 0.0, c: s }
    }

    pub fn det(&self) -> f64 {
        self.a * self.c - self.b * self.b
    }

    /// `κ v`
    #[inline]
    pub fn apply(&self, v: [f64; 2]) -> [f64; 2] {
        [self.a * v[0] + self.b * v[1], self.b * v[0] + self.c * v[1]]
    }
}

/// `E p = ∇·(κ∇p) = a p_xx + 2b p_xy + c p_yy` for constant κ.
pub fn elliptic_apply(p: &Poly2, kappa: &KappaMatrix) -> Poly2 {
    let px = p.diff(Axis::X);
    let py = p.diff(Axis::Y);
    let pxx = px.diff(Axis::X);
    let pxy = px.diff(Axis::Y);
    let pyy = py.diff(Axis::Y);
    pxx.scale(kappa.a) + pxy.scale(2.0 * kappa.b) + pyy.scale(kappa.c)
}

/// Source term `f = (−E + μ)² u = E²u − 2μ Eu + μ² u`.
pub fn manufactured_rhs(u: &Poly2, kappa: &KappaMatrix, mu: f64) -> Poly2 {
    let eu = elliptic_apply(u, kappa);
    let eeu = elliptic_apply(&eu, kappa);
    eeu - eu.scale(2.0 * mu) + u.scale(mu * mu)
}

/// `(x − x²)² (y − y²)²`, the smooth bubble used by both reference test cases.
pub fn bubble_solution() -> Poly2 {
    let gx = Poly2::x() - &Poly2::x() * &Poly2::x();
    let gy = Poly2::y() - &Poly2::y() * &Poly2::y();
    let gx2 = &gx * &gx;
    let gy2 = &gy * &gy;
    &gx2 * &gy2
}
