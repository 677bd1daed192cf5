use super::matrix::Matrix;
use crate::error::{dim_err, Error, Result};

const TERM_CUTOFF: f64 = 1e-17;
const MAX_TERMS: usize = 64;

/// `e^{t·m}` by scaling and squaring around a truncated Taylor series.
///
/// The argument `t·m` is halved `s = max(0, ⌈log₂‖t·m‖₁⌉ + 1)` times so its
/// 1-norm is at most 1/2, the series is summed until a term falls below
/// `1e-17` of the partial sum, and the result is squared `s` times.
pub fn mat_exp(m: &Matrix, t: f64) -> Result<Matrix> {
    if !m.is_square() {
        return Err(dim_err(format!(
            "exponential of a {}x{} matrix",
            m.rows(),
            m.cols()
        )));
    }
    if !t.is_finite() {
        return Err(Error::NonFinite("time argument"));
    }
    let x = m.scale(t);
    let norm = x.norm_one();
    let squarings = if norm > 0.0 {
        (norm.log2().ceil() as i64 + 1).max(0) as i32
    } else {
        0
    };
    let x = x.scale(0.5f64.powi(squarings));

    let n = m.rows();
    let mut sum = Matrix::identity(n);
    let mut term = Matrix::identity(n);
    for k in 1..=MAX_TERMS {
        term = (&term * &x).scale(1.0 / k as f64);
        sum = sum.add(&term)?;
        if term.norm_one() <= TERM_CUTOFF * sum.norm_one() {
            break;
        }
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    Ok(sum)
}
