//! Monic polynomials, characteristic polynomials, companion matrices,
//! simultaneous root finding and Sylvester resultants.
//!
//! Coefficients are stored lowest degree first and the leading 1 is implicit:
//! `coeffs = [a₀, …, a_{n−1}]` stands for `λⁿ + a_{n−1}λ^{n−1} + … + a₁λ + a₀`.
//! The same convention is used by the prediction recurrence
//! `y_{m+n} = −a₀y_m − … − a_{n−1}y_{m+n−1}`. Statements written with the
//! reversed indexing `λⁿ + a₁λ^{n−1} + … + a_n` map through `a_k ↦ coeffs[n−k]`.

use std::cmp::Ordering;
use std::f64::consts::PI;
use std::ops::Deref;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::linalg::determinant;
use super::matrix::{check_finite, Matrix};
use crate::error::{dim_err, Error, Result};

/// Iteration cap of [`poly_roots`].
pub const ROOT_MAX_ITERATIONS: usize = 200;

// Angle offset of the initial root guesses, in radians (an irrational multiple of π).
const START_ANGLE: f64 = 0.4;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct MonicPolynomial {
    coeffs: Vec<f64>,
}

impl MonicPolynomial {
    /// Builds `λⁿ + coeffs[n−1]λ^{n−1} + … + coeffs[0]` with `n = coeffs.len() ≥ 1`.
    pub fn new(coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(dim_err("monic polynomial needs degree >= 1"));
        }
        check_finite(&coeffs, "polynomial coefficients")?;
        Ok(MonicPolynomial { coeffs })
    }

    /// Expands `∏ (λ − rᵢ)` over real roots.
    pub fn from_roots(roots: &[f64]) -> Result<Self> {
        let mut full = vec![1.0];
        for &r in roots {
            let mut next = vec![0.0; full.len() + 1];
            for (i, &c) in full.iter().enumerate() {
                next[i + 1] += c;
                next[i] -= r * c;
            }
            full = next;
        }
        full.pop();
        MonicPolynomial::new(full)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// All `n + 1` coefficients, lowest degree first, ending with the leading 1.
    pub fn full_coeffs(&self) -> Vec<f64> {
        let mut v = self.coeffs.clone();
        v.push(1.0);
        v
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(1.0, |acc, &a| acc * x + a)
    }

    pub fn eval_complex(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(1.0, 0.0), |acc, &a| acc * z + a)
    }

    /// Coefficients of `P′`, lowest degree first (leading coefficient `n`).
    pub fn derivative_coeffs(&self) -> Vec<f64> {
        self.full_coeffs()
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &a)| i as f64 * a)
            .collect()
    }
}

impl TryFrom<Vec<f64>> for MonicPolynomial {
    type Error = Error;

    fn try_from(v: Vec<f64>) -> Result<Self> {
        MonicPolynomial::new(v)
    }
}

impl From<MonicPolynomial> for Vec<f64> {
    fn from(p: MonicPolynomial) -> Self {
        p.coeffs
    }
}

/// Roots or eigenvalues, kept in `(re, im)` lexicographic order.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ComplexList(Vec<Complex64>);

impl ComplexList {
    pub fn new(mut values: Vec<Complex64>) -> Self {
        values.sort_by(lex_cmp);
        ComplexList(values)
    }

    pub fn values(&self) -> &[Complex64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<Complex64> {
        self.0
    }

    pub fn max_modulus(&self) -> f64 {
        self.0.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest distance under greedy nearest-neighbour matching: each value of
    /// `self`, in order, claims the closest unclaimed value of `other`.
    pub fn matching_distance(&self, other: &ComplexList) -> Result<f64> {
        if self.0.len() != other.0.len() {
            return Err(dim_err(format!(
                "cannot match {} values against {}",
                self.0.len(),
                other.0.len()
            )));
        }
        let mut used = vec![false; other.0.len()];
        let mut worst: f64 = 0.0;
        for z in &self.0 {
            let (j, d) = other
                .0
                .iter()
                .enumerate()
                .filter(|(j, _)| !used[*j])
                .map(|(j, w)| (j, (z - w).norm()))
                .fold((usize::MAX, f64::INFINITY), |best, cur| {
                    if cur.1 < best.1 {
                        cur
                    } else {
                        best
                    }
                });
            used[j] = true;
            worst = worst.max(d);
        }
        Ok(worst)
    }
}

impl Deref for ComplexList {
    type Target = [Complex64];

    fn deref(&self) -> &[Complex64] {
        &self.0
    }
}

fn lex_cmp(a: &Complex64, b: &Complex64) -> Ordering {
    a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im))
}

/// `det(λI − m)` by the Faddeev–LeVerrier recursion.
///
/// Intended for the small orders used here (n ≤ 30); the recursion loses
/// accuracy for larger or badly scaled matrices.
pub fn char_poly(m: &Matrix) -> Result<MonicPolynomial> {
    if !m.is_square() {
        return Err(dim_err(format!(
            "characteristic polynomial of a {}x{} matrix",
            m.rows(),
            m.cols()
        )));
    }
    let n = m.rows();
    let mut coeffs = vec![0.0; n];
    // M_k = A·M_{k−1} + c_{n−k+1}·I, c_{n−k} = −tr(A·M_k)/k, with M_0 = 0, c_n = 1
    let mut mk = Matrix::zeros(n, n);
    let mut prev_c = 1.0;
    for k in 1..=n {
        let mut next = m * &mk;
        for i in 0..n {
            next[(i, i)] += prev_c;
        }
        mk = next;
        let c = -(m * &mk).trace() / k as f64;
        coeffs[n - k] = c;
        prev_c = c;
    }
    MonicPolynomial::new(coeffs)
}

/// Companion matrix: ones on the superdiagonal, last row `(−a₀, …, −a_{n−1})`.
pub fn companion_matrix(p: &MonicPolynomial) -> Matrix {
    let n = p.degree();
    let mut c = Matrix::zeros(n, n);
    for i in 0..n - 1 {
        c[(i, i + 1)] = 1.0;
    }
    for (j, &a) in p.coeffs().iter().enumerate() {
        c[(n - 1, j)] = -a;
    }
    c
}

/// All roots of `p` by Aberth–Ehrlich simultaneous iteration.
///
/// Starts from `n` points on the circle of radius `1 + max|aᵢ|` (which
/// encloses every root), rotated by a fixed offset. A root is frozen once
/// `|P(z)|` falls under the rounding bound of Horner evaluation at `z`.
/// Near-real roots are snapped to the real axis and the remaining roots are
/// paired into exact conjugates, so sorting gives a stable order.
pub fn poly_roots(p: &MonicPolynomial) -> Result<ComplexList> {
    let n = p.degree();
    if n == 1 {
        return Ok(ComplexList::new(vec![Complex64::new(-p.coeffs()[0], 0.0)]));
    }
    let radius = 1.0 + p.coeffs().iter().fold(0.0f64, |m, a| m.max(a.abs()));
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(radius, 2.0 * PI * k as f64 / n as f64 + START_ANGLE))
        .collect();
    let mut done = vec![false; n];
    let dp = p.derivative_coeffs();

    let mut iterations = 0;
    while done.iter().any(|d| !d) {
        if iterations == ROOT_MAX_ITERATIONS {
            return Err(Error::NonConvergence { iterations });
        }
        iterations += 1;
        for i in 0..n {
            if done[i] {
                continue;
            }
            let zi = z[i];
            let pv = p.eval_complex(zi);
            if pv.norm() <= horner_bound(p, zi.norm()) {
                done[i] = true;
                continue;
            }
            let dv = eval_desc(&dp, zi);
            let ratio = pv / dv;
            let repulsion: Complex64 = (0..n)
                .filter(|&j| j != i)
                .map(|j| {
                    let d = zi - z[j];
                    if d.norm() == 0.0 {
                        Complex64::new(0.0, 0.0)
                    } else {
                        d.inv()
                    }
                })
                .sum();
            let denom = Complex64::new(1.0, 0.0) - ratio * repulsion;
            let step = if denom.norm() == 0.0 || !dv.is_finite() || dv.norm() == 0.0 {
                // degenerate Newton step: nudge off the critical point
                Complex64::new(1e-8 * (1.0 + zi.norm()), 1e-8 * (1.0 + zi.norm()))
            } else {
                ratio / denom
            };
            z[i] = zi - step;
            if step.norm() <= 4.0 * f64::EPSILON * z[i].norm() {
                done[i] = true;
            }
        }
    }
    Ok(ComplexList::new(tidy_conjugates(z)))
}

fn horner_bound(p: &MonicPolynomial, r: f64) -> f64 {
    let n = p.degree();
    let abs_sum = p
        .full_coeffs()
        .iter()
        .rev()
        .fold(0.0, |acc, a| acc * r + a.abs());
    4.0 * n as f64 * f64::EPSILON * abs_sum
}

fn eval_desc(coeffs_low_first: &[f64], z: Complex64) -> Complex64 {
    coeffs_low_first
        .iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, &a| acc * z + a)
}

fn tidy_conjugates(mut z: Vec<Complex64>) -> Vec<Complex64> {
    for v in z.iter_mut() {
        if v.im.abs() <= 1e-12 * (1.0 + v.norm()) {
            v.im = 0.0;
        }
    }
    let n = z.len();
    let mut paired = vec![false; n];
    for i in 0..n {
        if paired[i] || z[i].im <= 0.0 {
            continue;
        }
        let target = z[i].conj();
        let best = (0..n)
            .filter(|&j| j != i && !paired[j] && z[j].im < 0.0)
            .min_by(|&a, &b| (z[a] - target).norm().total_cmp(&(z[b] - target).norm()));
        if let Some(j) = best {
            if (z[j] - target).norm() <= 1e-6 * (1.0 + z[i].norm()) {
                let re = 0.5 * (z[i].re + z[j].re);
                let im = 0.5 * (z[i].im - z[j].im);
                z[i] = Complex64::new(re, im);
                z[j] = Complex64::new(re, -im);
                paired[i] = true;
                paired[j] = true;
            }
        }
    }
    z
}

/// Determinant of the Sylvester matrix of two polynomials given lowest degree
/// first. Trailing zero coefficients are ignored. A constant argument gives
/// the usual convention `res(p, q₀) = q₀^{deg p}`.
pub fn resultant(p: &[f64], q: &[f64]) -> f64 {
    let p = trim(p);
    let q = trim(q);
    if p.is_empty() || q.is_empty() {
        return 0.0;
    }
    let (m, k) = (p.len() - 1, q.len() - 1);
    if m == 0 {
        return p[0].powi(k as i32);
    }
    if k == 0 {
        return q[0].powi(m as i32);
    }
    let size = m + k;
    let mut s = Matrix::zeros(size, size);
    for r in 0..k {
        for (j, &c) in p.iter().rev().enumerate() {
            s[(r, r + j)] = c;
        }
    }
    for r in 0..m {
        for (j, &c) in q.iter().rev().enumerate() {
            s[(k + r, r + j)] = c;
        }
    }
    determinant(&s).expect("Sylvester matrix is square")
}

fn trim(c: &[f64]) -> &[f64] {
    let end = c.iter().rposition(|&v| v != 0.0).map_or(0, |i| i + 1);
    &c[..end]
}

/// `D(P) = (−1)^{n(n−1)/2} · res(P, P′)`, zero iff `P` has a repeated root.
///
/// For `λ² + aλ + b` this is `a² − 4b`.
pub fn discriminant(p: &MonicPolynomial) -> f64 {
    let n = p.degree();
    let r = resultant(&p.full_coeffs(), &p.derivative_coeffs());
    if (n * (n - 1) / 2) % 2 == 1 {
        -r
    } else {
        r
    }
}
