//! Dense factorizations: row-pivoted LU for square solves and determinants,
//! column-pivoted Householder QR for rank decisions and least squares.

// triangular sweeps read more clearly with explicit indices
#![allow(clippy::needless_range_loop)]

use super::matrix::{check_finite, Matrix};
use crate::error::{dim_err, Error, Result};

/// Relative pivot floor of the LU solver.
pub const PIVOT_FLOOR: f64 = 1e-12;

/// Default relative threshold of [`numerical_rank`].
pub const DEFAULT_RANK_TOL: f64 = 1e-9;

/// Row-pivoted LU factorization `P·m = L·U`, packed in one matrix.
#[derive(Debug, Clone)]
pub struct Lu {
    lu: Matrix,
    perm: Vec<usize>,
    sign: f64,
}

impl Lu {
    /// Factors `m`, failing with `SingularMatrix` as soon as a pivot drops
    /// to `PIVOT_FLOOR · max|m_ij|` or below.
    pub fn factor(m: &Matrix) -> Result<Lu> {
        if !m.is_square() {
            return Err(dim_err(format!("LU of a {}x{} matrix", m.rows(), m.cols())));
        }
        let floor = PIVOT_FLOOR * m.max_abs();
        let (lu, perm, sign) = eliminate(m, Some(floor))?;
        Ok(Lu { lu, perm, sign })
    }

    pub fn dim(&self) -> usize {
        self.lu.rows()
    }

    pub fn solve(&self, rhs: &[f64]) -> Result<Vec<f64>> {
        let n = self.dim();
        if rhs.len() != n {
            return Err(dim_err(format!(
                "right-hand side of length {} for a {n}x{n} system",
                rhs.len()
            )));
        }
        let mut x: Vec<f64> = self.perm.iter().map(|&p| rhs[p]).collect();
        for i in 0..n {
            let mut s = x[i];
            for j in 0..i {
                s -= self.lu[(i, j)] * x[j];
            }
            x[i] = s;
        }
        for i in (0..n).rev() {
            let mut s = x[i];
            for j in i + 1..n {
                s -= self.lu[(i, j)] * x[j];
            }
            x[i] = s / self.lu[(i, i)];
        }
        Ok(x)
    }

    pub fn determinant(&self) -> f64 {
        (0..self.dim()).fold(self.sign, |d, i| d * self.lu[(i, i)])
    }

    pub fn inverse(&self) -> Matrix {
        let n = self.dim();
        let mut inv = Matrix::zeros(n, n);
        let mut e = vec![0.0; n];
        for j in 0..n {
            e.iter_mut().for_each(|v| *v = 0.0);
            e[j] = 1.0;
            let col = self.solve(&e).expect("dimension checked");
            for i in 0..n {
                inv[(i, j)] = col[i];
            }
        }
        inv
    }
}

fn eliminate(m: &Matrix, floor: Option<f64>) -> Result<(Matrix, Vec<usize>, f64)> {
    let n = m.rows();
    let mut a = m.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut sign = 1.0;
    for k in 0..n {
        let (p, pivot) = (k..n)
            .map(|i| (i, a[(i, k)].abs()))
            .fold(
                (k, -1.0),
                |best, cur| if cur.1 > best.1 { cur } else { best },
            );
        if let Some(floor) = floor {
            if pivot <= floor {
                return Err(Error::SingularMatrix {
                    column: k,
                    pivot,
                    floor,
                });
            }
        } else if pivot == 0.0 {
            // exactly singular: leave a zero on the diagonal
            continue;
        }
        if p != k {
            for j in 0..n {
                let t = a[(k, j)];
                a[(k, j)] = a[(p, j)];
                a[(p, j)] = t;
            }
            perm.swap(k, p);
            sign = -sign;
        }
        let d = a[(k, k)];
        for i in k + 1..n {
            let f = a[(i, k)] / d;
            a[(i, k)] = f;
            if f != 0.0 {
                for j in k + 1..n {
                    a[(i, j)] -= f * a[(k, j)];
                }
            }
        }
    }
    Ok((a, perm, sign))
}

/// Solves `m · x = rhs` by row-pivoted elimination.
pub fn solve_linear(m: &Matrix, rhs: &[f64]) -> Result<Vec<f64>> {
    if !m.is_square() {
        return Err(dim_err("solve_linear needs a square matrix"));
    }
    if rhs.len() != m.rows() {
        return Err(dim_err(format!(
            "right-hand side of length {} for {} rows",
            rhs.len(),
            m.rows()
        )));
    }
    check_finite(rhs, "right-hand side")?;
    Lu::factor(m)?.solve(rhs)
}

/// Determinant by partial-pivot elimination without a pivot floor, so
/// rank-deficient input returns a (near-)zero value rather than an error.
pub fn determinant(m: &Matrix) -> Result<f64> {
    if !m.is_square() {
        return Err(dim_err("determinant of a non-square matrix"));
    }
    let (lu, _, sign) = eliminate(m, None)?;
    Ok((0..m.rows()).fold(sign, |d, i| d * lu[(i, i)]))
}

/// 1-norm condition number `‖m‖₁·‖m⁻¹‖₁`; infinite when `m` hits the pivot floor.
pub fn condition_estimate(m: &Matrix) -> Result<f64> {
    match Lu::factor(m) {
        Ok(lu) => Ok((m.norm_one() * lu.inverse().norm_one()).max(1.0)),
        Err(Error::SingularMatrix { .. }) => Ok(f64::INFINITY),
        Err(e) => Err(e),
    }
}

/// Householder QR with column pivoting: `m · P = Q · R`.
#[derive(Debug, Clone)]
pub struct PivotedQr {
    /// R in the upper triangle, Householder vectors below it.
    qr: Matrix,
    tau: Vec<f64>,
    perm: Vec<usize>,
}

impl PivotedQr {
    pub fn factor(m: &Matrix) -> PivotedQr {
        let (rows, cols) = (m.rows(), m.cols());
        let steps = rows.min(cols);
        let mut a = m.clone();
        let mut tau = vec![0.0; steps];
        let mut perm: Vec<usize> = (0..cols).collect();
        for k in 0..steps {
            // recompute remaining column norms each step; sizes here are small
            let (p, _) = (k..cols)
                .map(|j| (j, (k..rows).map(|i| a[(i, j)] * a[(i, j)]).sum::<f64>()))
                .fold(
                    (k, -1.0),
                    |best, cur| if cur.1 > best.1 { cur } else { best },
                );
            if p != k {
                for i in 0..rows {
                    let t = a[(i, k)];
                    a[(i, k)] = a[(i, p)];
                    a[(i, p)] = t;
                }
                perm.swap(k, p);
            }
            let norm = (k..rows).map(|i| a[(i, k)] * a[(i, k)]).sum::<f64>().sqrt();
            if norm == 0.0 {
                tau[k] = 0.0;
                continue;
            }
            let alpha = if a[(k, k)] > 0.0 { -norm } else { norm };
            let v0 = a[(k, k)] - alpha;
            // v = (1, a[k+1..]/v0), tau = -v0/alpha
            for i in k + 1..rows {
                a[(i, k)] /= v0;
            }
            tau[k] = -v0 / alpha;
            a[(k, k)] = alpha;
            for j in k + 1..cols {
                let mut s = a[(k, j)];
                for i in k + 1..rows {
                    s += a[(i, k)] * a[(i, j)];
                }
                s *= tau[k];
                a[(k, j)] -= s;
                for i in k + 1..rows {
                    let vi = a[(i, k)];
                    a[(i, j)] -= s * vi;
                }
            }
        }
        PivotedQr { qr: a, tau, perm }
    }

    /// Absolute diagonal of R, non-increasing up to rounding.
    pub fn pivots(&self) -> Vec<f64> {
        (0..self.tau.len()).map(|i| self.qr[(i, i)].abs()).collect()
    }

    /// Each pivot divided by the largest one; empty or all-zero input yields zeros.
    pub fn pivot_ratios(&self) -> Vec<f64> {
        let p = self.pivots();
        let lead = p.first().copied().unwrap_or(0.0);
        p.iter()
            .map(|&v| if lead > 0.0 { v / lead } else { 0.0 })
            .collect()
    }

    pub fn rank(&self, tol: f64) -> usize {
        let p = self.pivots();
        match p.first() {
            Some(&lead) if lead > 0.0 => p.iter().filter(|&&v| v > tol * lead).count(),
            _ => 0,
        }
    }

    /// Least-squares solution of `m · x ≈ rhs` for full-column-rank `m`.
    pub fn solve_least_squares(&self, rhs: &[f64], tol: f64) -> Result<Vec<f64>> {
        let (rows, cols) = (self.qr.rows(), self.qr.cols());
        if rhs.len() != rows {
            return Err(dim_err(format!(
                "right-hand side of length {} for {rows} rows",
                rhs.len()
            )));
        }
        if rows < cols {
            return Err(dim_err("least squares needs rows >= cols"));
        }
        let rank = self.rank(tol);
        if rank < cols {
            let ratios = self.pivot_ratios();
            return Err(Error::SingularMatrix {
                column: rank,
                pivot: ratios[rank],
                floor: tol,
            });
        }
        let mut y = rhs.to_vec();
        for k in 0..cols {
            let mut s = y[k];
            for i in k + 1..rows {
                s += self.qr[(i, k)] * y[i];
            }
            s *= self.tau[k];
            y[k] -= s;
            for i in k + 1..rows {
                y[i] -= s * self.qr[(i, k)];
            }
        }
        let mut z = vec![0.0; cols];
        for i in (0..cols).rev() {
            let mut s = y[i];
            for j in i + 1..cols {
                s -= self.qr[(i, j)] * z[j];
            }
            z[i] = s / self.qr[(i, i)];
        }
        let mut x = vec![0.0; cols];
        for (k, &p) in self.perm.iter().enumerate() {
            x[p] = z[k];
        }
        Ok(x)
    }
}

/// Number of QR pivots above `tol · (largest pivot)`; zero for the zero matrix.
pub fn numerical_rank(m: &Matrix, tol: f64) -> usize {
    PivotedQr::factor(m).rank(tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[f64]]) -> Matrix {
        Matrix::from_rows(rows).unwrap()
    }

    #[test]
    fn solve_examples() {
        assert_eq!(
            solve_linear(&Matrix::identity(2), &[3.0, 4.0]).unwrap(),
            vec![3.0, 4.0]
        );
        let x = solve_linear(&m(&[&[1.0, 1.0], &[1.0, 2.0]]), &[2.0, 3.0]).unwrap();
        assert!((x[0] - 1.0).abs() < 1e-15 && (x[1] - 1.0).abs() < 1e-15);
        assert!(matches!(
            solve_linear(&m(&[&[1.0, 1.0], &[0.0, 0.0]]), &[1.0, 1.0]),
            Err(Error::SingularMatrix { .. })
        ));
        assert!(matches!(
            solve_linear(&Matrix::identity(2), &[1.0]),
            Err(Error::DimensionMismatch(_))
        ));
        assert!(matches!(
            solve_linear(&Matrix::zeros(2, 2), &[1.0, 1.0]),
            Err(Error::SingularMatrix { .. })
        ));
    }

    #[test]
    fn determinant_and_condition() {
        let a = m(&[&[0.0, 2.0], &[3.0, 1.0]]);
        assert_eq!(determinant(&a).unwrap(), -6.0);
        assert_eq!(determinant(&m(&[&[1.0, 2.0], &[2.0, 4.0]])).unwrap(), 0.0);
        assert_eq!(condition_estimate(&Matrix::identity(3)).unwrap(), 1.0);
        assert!(condition_estimate(&m(&[&[1.0, 1.0], &[1.0, 1.0]]))
            .unwrap()
            .is_infinite());
        let inv = Lu::factor(&a).unwrap().inverse();
        let prod = &a * &inv;
        for i in 0..2 {
            for j in 0..2 {
                let e = if i == j { 1.0 } else { 0.0 };
                assert!((prod[(i, j)] - e).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn rank_examples() {
        assert_eq!(numerical_rank(&Matrix::identity(4), DEFAULT_RANK_TOL), 4);
        assert_eq!(
            numerical_rank(&m(&[&[1.0, 1.0], &[0.0, 0.0]]), DEFAULT_RANK_TOL),
            1
        );
        assert_eq!(
            numerical_rank(&m(&[&[1.0, 1.0], &[1.0, 1.0 + 1e-14]]), DEFAULT_RANK_TOL),
            1
        );
        assert_eq!(numerical_rank(&Matrix::zeros(3, 2), DEFAULT_RANK_TOL), 0);
        assert_eq!(
            numerical_rank(&m(&[&[1.0, 2.0, 3.0], &[2.0, 4.0, 6.0]]), DEFAULT_RANK_TOL),
            1
        );
    }

    #[test]
    fn least_squares_recovers_consistent_solution() {
        let a = m(&[&[1.0, 0.0], &[1.0, 1.0], &[1.0, 2.0], &[1.0, 3.0]]);
        let rhs: Vec<f64> = (0..4).map(|t| 2.0 - 0.5 * t as f64).collect();
        let x = PivotedQr::factor(&a)
            .solve_least_squares(&rhs, DEFAULT_RANK_TOL)
            .unwrap();
        assert!((x[0] - 2.0).abs() < 1e-14 && (x[1] + 0.5).abs() < 1e-14);

        let deficient = m(&[&[1.0, 2.0], &[2.0, 4.0], &[3.0, 6.0]]);
        assert!(PivotedQr::factor(&deficient)
            .solve_least_squares(&[1.0, 2.0, 3.0], DEFAULT_RANK_TOL)
            .is_err());
    }
}
