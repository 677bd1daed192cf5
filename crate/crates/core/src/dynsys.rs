//! Hidden-system model.
//!
//! A [`SystemSpec`] describes either a discrete map `x(i+1) = A·x(i) (+ b)` or
//! a continuous flow `ẋ = A·x` read every `λ` time units. Both produce a
//! scalar [`TimeSeries`] through the output row `c`.

use serde::{Deserialize, Serialize};

use crate::error::{dim_err, Error, Result};
use crate::numkit::check_finite;
use crate::numkit::{mat_exp, numerical_rank, Lu, Matrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SystemKind {
    Discrete,
    Continuous,
}

/// `(A, c, b, λ)` description of a hidden system.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSystem", into = "RawSystem")]
pub struct SystemSpec {
    kind: SystemKind,
    a: Matrix,
    c: Vec<f64>,
    b: Option<Vec<f64>>,
    step: Option<f64>,
}

#[derive(Serialize, Deserialize)]
struct RawSystem {
    kind: SystemKind,
    a: Matrix,
    c: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    b: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    step: Option<f64>,
}

impl TryFrom<RawSystem> for SystemSpec {
    type Error = Error;

    fn try_from(r: RawSystem) -> Result<Self> {
        SystemSpec::validate(SystemSpec {
            kind: r.kind,
            a: r.a,
            c: r.c,
            b: r.b,
            step: r.step,
        })
    }
}

impl From<SystemSpec> for RawSystem {
    fn from(s: SystemSpec) -> Self {
        RawSystem {
            kind: s.kind,
            a: s.a,
            c: s.c,
            b: s.b,
            step: s.step,
        }
    }
}

impl SystemSpec {
    /// Homogeneous discrete system `x(i+1) = A·x(i)`, `yᵢ = c·x(i)`.
    pub fn discrete(a: Matrix, c: Vec<f64>) -> Result<Self> {
        SystemSpec::validate(SystemSpec {
            kind: SystemKind::Discrete,
            a,
            c,
            b: None,
            step: None,
        })
    }

    /// Affine discrete system `x(i+1) = A·x(i) + b`.
    pub fn affine(a: Matrix, b: Vec<f64>, c: Vec<f64>) -> Result<Self> {
        SystemSpec::validate(SystemSpec {
            kind: SystemKind::Discrete,
            a,
            c,
            b: Some(b),
            step: None,
        })
    }

    /// Continuous system `ẋ = A·x` sampled every `step` time units.
    pub fn continuous(a: Matrix, c: Vec<f64>, step: f64) -> Result<Self> {
        SystemSpec::validate(SystemSpec {
            kind: SystemKind::Continuous,
            a,
            c,
            b: None,
            step: Some(step),
        })
    }

    fn validate(s: SystemSpec) -> Result<Self> {
        let n = s.a.rows();
        if !s.a.is_square() {
            return Err(dim_err("system matrix must be square"));
        }
        if s.c.len() != n {
            return Err(dim_err(format!(
                "output row has length {}, expected {n}",
                s.c.len()
            )));
        }
        check_finite(&s.c, "output row")?;
        if let Some(b) = &s.b {
            if s.kind == SystemKind::Continuous {
                return Err(Error::KindMismatch {
                    expected: "discrete (affine drive)",
                });
            }
            if b.len() != n {
                return Err(dim_err(format!(
                    "drive has length {}, expected {n}",
                    b.len()
                )));
            }
            check_finite(b, "drive vector")?;
        }
        match (s.kind, s.step) {
            (_, Some(step)) if !(step.is_finite() && step > 0.0) => return Err(Error::MissingStep),
            (SystemKind::Continuous, None) => return Err(Error::MissingStep),
            (SystemKind::Discrete, Some(_)) => {
                return Err(Error::KindMismatch {
                    expected: "continuous (sampling step)",
                })
            }
            _ => {}
        }
        Ok(s)
    }

    pub fn kind(&self) -> SystemKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.a.rows()
    }

    pub fn a(&self) -> &Matrix {
        &self.a
    }

    pub fn c(&self) -> &[f64] {
        &self.c
    }

    pub fn b(&self) -> Option<&[f64]> {
        self.b.as_deref()
    }

    pub fn step(&self) -> Option<f64> {
        self.step
    }

    /// The same flow read every `step` time units.
    pub fn with_step(&self, step: f64) -> Result<Self> {
        if self.kind != SystemKind::Continuous {
            return Err(Error::KindMismatch {
                expected: "continuous",
            });
        }
        SystemSpec::continuous(self.a.clone(), self.c.clone(), step)
    }

    /// Matrix that advances the state by one sample: `A`, or `e^{λA}` for a continuous system.
    pub fn transition(&self) -> Result<Matrix> {
        match self.kind {
            SystemKind::Discrete => Ok(self.a.clone()),
            SystemKind::Continuous => mat_exp(&self.a, self.step.ok_or(Error::MissingStep)?),
        }
    }
}

/// Scalar samples `y₀, y₁, …`, with the sampling step when they come from a flow.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    values: Vec<f64>,
    step: Option<f64>,
    origin: i64,
}

impl TimeSeries {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InsufficientData {
                needed: 1,
                available: 0,
            });
        }
        check_finite(&values, "time series")?;
        Ok(TimeSeries {
            values,
            step: None,
            origin: 0,
        })
    }

    pub fn with_step(mut self, step: Option<f64>) -> Result<Self> {
        if let Some(s) = step {
            if !(s.is_finite() && s > 0.0) {
                return Err(Error::MissingStep);
            }
        }
        self.step = step;
        Ok(self)
    }

    pub fn with_origin(mut self, origin: i64) -> Self {
        self.origin = origin;
        self
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn step(&self) -> Option<f64> {
        self.step
    }

    pub fn origin(&self) -> i64 {
        self.origin
    }
}

fn check_state(n: usize, x0: &[f64]) -> Result<()> {
    if x0.len() != n {
        return Err(dim_err(format!(
            "initial state has length {}, expected {n}",
            x0.len()
        )));
    }
    check_finite(x0, "initial state")
}

fn iterate(map: &Matrix, c: &[f64], b: Option<&[f64]>, x0: &[f64], len: usize) -> Result<Vec<f64>> {
    let mut x = x0.to_vec();
    let mut out = Vec::with_capacity(len);
    for i in 0..len {
        out.push(dot(c, &x));
        if i + 1 < len {
            x = map.mul_vec(&x)?;
            if let Some(b) = b {
                x.iter_mut().zip(b).for_each(|(xi, bi)| *xi += bi);
            }
        }
    }
    Ok(out)
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Outputs `yᵢ = c·xᵢ` of a discrete system for `i = 0 … len−1`.
pub fn simulate_discrete(sys: &SystemSpec, x0: &[f64], len: usize) -> Result<TimeSeries> {
    if sys.kind != SystemKind::Discrete {
        return Err(Error::KindMismatch {
            expected: "discrete",
        });
    }
    check_state(sys.dim(), x0)?;
    if len == 0 {
        return Err(dim_err("series length must be at least 1"));
    }
    TimeSeries::new(iterate(&sys.a, &sys.c, sys.b(), x0, len)?)
}

/// Outputs `y(iλ) = c·e^{iλA}·x₀`: forms `B = e^{λA}` once and iterates it.
pub fn sample_continuous(sys: &SystemSpec, x0: &[f64], len: usize) -> Result<TimeSeries> {
    if sys.kind != SystemKind::Continuous {
        return Err(Error::KindMismatch {
            expected: "continuous",
        });
    }
    let step = sys.step.ok_or(Error::MissingStep)?;
    check_state(sys.dim(), x0)?;
    if len == 0 {
        return Err(dim_err("series length must be at least 1"));
    }
    let sampled = mat_exp(&sys.a, step)?;
    TimeSeries::new(iterate(&sampled, &sys.c, None, x0, len)?)?.with_step(Some(step))
}

/// Rows `c, cA, …, cA^{n−1}`.
pub fn observability_matrix(a: &Matrix, c: &[f64]) -> Result<Matrix> {
    let n = a.rows();
    if !a.is_square() || c.len() != n {
        return Err(dim_err(format!(
            "observability matrix of {}x{} matrix with row of length {}",
            a.rows(),
            a.cols(),
            c.len()
        )));
    }
    let mut q = Matrix::zeros(n, n);
    let mut row = c.to_vec();
    for i in 0..n {
        for (j, &v) in row.iter().enumerate() {
            q[(i, j)] = v;
        }
        if i + 1 < n {
            row = a.vec_mul(&row)?;
        }
    }
    Ok(q)
}

/// Columns `x₀, Ax₀, …, A^{n−1}x₀`.
pub fn krylov_matrix(a: &Matrix, x0: &[f64]) -> Result<Matrix> {
    let n = a.rows();
    if !a.is_square() || x0.len() != n {
        return Err(dim_err(format!(
            "Krylov matrix of {}x{} matrix with vector of length {}",
            a.rows(),
            a.cols(),
            x0.len()
        )));
    }
    let mut m = Matrix::zeros(n, n);
    let mut col = x0.to_vec();
    for j in 0..n {
        for (i, &v) in col.iter().enumerate() {
            m[(i, j)] = v;
        }
        if j + 1 < n {
            col = a.mul_vec(&col)?;
        }
    }
    Ok(m)
}

/// Observability verdict and the numerical rank of the observability matrix.
pub fn is_observable(a: &Matrix, c: &[f64], tol: f64) -> Result<(bool, usize)> {
    let q = observability_matrix(a, c)?;
    let rank = numerical_rank(&q, tol);
    Ok((rank == a.rows(), rank))
}

fn observability_lu(a: &Matrix, c: &[f64]) -> Result<(Matrix, Lu)> {
    let q = observability_matrix(a, c)?;
    let n = a.rows();
    let rank = numerical_rank(&q, crate::numkit::DEFAULT_RANK_TOL);
    if rank < n {
        return Err(Error::NotObservable { rank, n });
    }
    match Lu::factor(&q) {
        Ok(lu) => Ok((q, lu)),
        Err(Error::SingularMatrix { .. }) => Err(Error::NotObservable { rank, n }),
        Err(e) => Err(e),
    }
}

// v ↦ v·Q⁻¹, i.e. solve Qᵀ·w = vᵀ
fn right_solve(q: &Matrix, v: &[f64]) -> Result<Vec<f64>> {
    Lu::factor(&q.transpose())?.solve(v)
}

/// `G = c·Aⁿ·Q⁻¹`, the row mapping `(y_m, …, y_{m+n−1})` to `y_{m+n}`.
///
/// By Cayley–Hamilton this equals `(−a₀, …, −a_{n−1})` for the
/// characteristic polynomial of `A`, whatever the admissible `c`.
pub fn output_row(a: &Matrix, c: &[f64]) -> Result<Vec<f64>> {
    let (q, _) = observability_lu(a, c)?;
    let n = a.rows();
    // c·Aⁿ = (last row of Q)·A
    let can = a.vec_mul(q.row(n - 1))?;
    right_solve(&q, &can)
}

/// Constant term `b̃` of the affine output recurrence
/// `y_{m+n} = G·(y_m, …, y_{m+n−1})ᵀ + b̃`:
///
/// `b̃ = c·Sₙ·b − c·Aⁿ·Q⁻¹·W·b`, where `Sₖ = A^{k−1} + … + A + I` (`S₀ = 0`)
/// and `W` stacks the rows `c·S₀, c·S₁, …, c·S_{n−1}`.
pub fn affine_offset(a: &Matrix, b: &[f64], c: &[f64]) -> Result<f64> {
    let n = a.rows();
    if b.len() != n {
        return Err(dim_err(format!(
            "drive has length {}, expected {n}",
            b.len()
        )));
    }
    let g = output_row(a, c)?;
    // rows c·S_k built by c·S_{k+1} = c·S_k·A + c
    let mut w_rows = Vec::with_capacity(n + 1);
    let mut row = vec![0.0; n];
    for _ in 0..=n {
        w_rows.push(row.clone());
        let mut next = a.vec_mul(&row)?;
        next.iter_mut().zip(c).for_each(|(v, ci)| *v += ci);
        row = next;
    }
    let direct = dot(&w_rows[n], b);
    let wb: Vec<f64> = w_rows[..n].iter().map(|r| dot(r, b)).collect();
    Ok(direct - dot(&g, &wb))
}
