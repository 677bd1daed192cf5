//! Identification of the output recurrence from a time series.
//!
//! For an observable pair `(A, c)` every output window satisfies
//! `y_{m+n} = −a₀y_m − … − a_{n−1}y_{m+n−1}`, where `λⁿ + a_{n−1}λ^{n−1} + … + a₀`
//! is the characteristic polynomial of `A`. Stacking `n` consecutive windows
//! starting at sample `k` gives the Hankel system
//!
//! ```text
//! H_k · (−a₀, …, −a_{n−1})ᵀ = (y_{k+n}, …, y_{k+2n−1})ᵀ,   H_k[i][j] = y_{k+i+j}
//! ```
//!
//! and `H_k = Q·Aᵏ·M(A, x₀)` is invertible whenever `Q` (observability) and
//! `M` (Krylov) are. At `k = 0` exactly `2n` samples are consumed.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::dynsys::{SystemKind, SystemSpec, TimeSeries};
use crate::error::{dim_err, Error, Result};
use crate::numkit::{
    char_poly, companion_matrix, condition_estimate, mat_exp, numerical_rank, poly_roots,
    ComplexList, Lu, Matrix, MonicPolynomial, PivotedQr,
};

/// Hankel windows with a 1-norm condition estimate above this are reported as singular.
pub const MAX_CONDITION: f64 = 1e10;

/// Half-width of the band around the unit circle classified as marginal.
pub const STABILITY_MARGIN: f64 = 1e-8;

/// Roots whose argument lies within this distance of ±π raise the aliasing flag.
pub const ALIASING_GUARD: f64 = 1e-6;

/// Recovered recurrence `y_{m+n} = −a₀y_m − … − a_{n−1}y_{m+n−1} (+ b̃)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PredictionModel {
    poly: MonicPolynomial,
    offset: Option<f64>,
    step: Option<f64>,
    companion: Matrix,
}

impl PredictionModel {
    pub fn new(poly: MonicPolynomial, offset: Option<f64>, step: Option<f64>) -> Result<Self> {
        if offset.is_some_and(|b| !b.is_finite()) {
            return Err(Error::NonFinite("offset"));
        }
        if step.is_some_and(|s| !(s.is_finite() && s > 0.0)) {
            return Err(Error::MissingStep);
        }
        let companion = companion_matrix(&poly);
        Ok(PredictionModel {
            poly,
            offset,
            step,
            companion,
        })
    }

    pub fn from_coeffs(coeffs: Vec<f64>) -> Result<Self> {
        PredictionModel::new(MonicPolynomial::new(coeffs)?, None, None)
    }

    pub fn order(&self) -> usize {
        self.poly.degree()
    }

    /// `a₀, …, a_{n−1}`.
    pub fn coeffs(&self) -> &[f64] {
        self.poly.coeffs()
    }

    pub fn polynomial(&self) -> &MonicPolynomial {
        &self.poly
    }

    pub fn offset(&self) -> Option<f64> {
        self.offset
    }

    pub fn step(&self) -> Option<f64> {
        self.step
    }

    pub fn companion(&self) -> &Matrix {
        &self.companion
    }

    pub fn with_step(self, step: Option<f64>) -> Result<Self> {
        PredictionModel::new(self.poly, self.offset, step)
    }

    /// Next value of the recurrence given the latest `n` samples, oldest first.
    fn next(&self, window: &[f64]) -> f64 {
        let lin: f64 = self.coeffs().iter().zip(window).map(|(a, y)| -a * y).sum();
        lin + self.offset.unwrap_or(0.0)
    }
}

/// Identified model plus diagnostics of the solve that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct IdentReport {
    pub model: PredictionModel,
    pub window_start: usize,
    /// Largest absolute defect over the equations that were solved.
    pub residual: f64,
    /// 1-norm condition estimate of the solved matrix (≥ 1).
    pub condition_estimate: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SolveMode {
    /// Square Hankel solve from exactly the samples the order requires.
    #[default]
    Exact,
    /// Least squares over every window the series provides.
    Overdetermined,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdentOptions {
    pub mode: SolveMode,
    pub affine: bool,
    pub max_condition: f64,
}

impl Default for IdentOptions {
    fn default() -> Self {
        IdentOptions {
            mode: SolveMode::Exact,
            affine: false,
            max_condition: MAX_CONDITION,
        }
    }
}

/// `n×n` Hankel window with entry `(i, j) = y_{k+i+j}`.
pub fn hankel(series: &TimeSeries, k: usize, n: usize) -> Result<Matrix> {
    if n == 0 {
        return Err(dim_err("Hankel order must be positive"));
    }
    let needed = k + 2 * n - 1;
    let y = series.values();
    if y.len() < needed {
        return Err(Error::InsufficientData {
            needed,
            available: y.len(),
        });
    }
    let mut h = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            h[(i, j)] = y[k + i + j];
        }
    }
    Ok(h)
}

/// Solves the Hankel system at window `k` for the order-`n` recurrence.
/// Needs `k + 2n` samples.
pub fn identify(series: &TimeSeries, n: usize, k: usize) -> Result<IdentReport> {
    identify_with(series, n, k, &IdentOptions::default())
}

/// Identifies `y_{m+n} = −Σ aᵢy_{m+i} + b̃` by appending a column of ones to
/// the Hankel rows and solving the `(n+1)×(n+1)` system for
/// `(−a₀, …, −a_{n−1}, b̃)`. Needs `k + 2n + 1` samples.
pub fn identify_affine(series: &TimeSeries, n: usize, k: usize) -> Result<IdentReport> {
    identify_with(
        series,
        n,
        k,
        &IdentOptions {
            affine: true,
            ..IdentOptions::default()
        },
    )
}

pub fn identify_with(
    series: &TimeSeries,
    n: usize,
    k: usize,
    opts: &IdentOptions,
) -> Result<IdentReport> {
    if n == 0 {
        return Err(dim_err("model order must be positive"));
    }
    let y = series.values();
    let unknowns = n + usize::from(opts.affine);
    let needed = k + n + unknowns;
    if y.len() < needed {
        return Err(Error::InsufficientData {
            needed,
            available: y.len(),
        });
    }
    let equations = match opts.mode {
        SolveMode::Exact => unknowns,
        SolveMode::Overdetermined => y.len() - k - n,
    };
    let mut design = Matrix::zeros(equations, unknowns);
    let mut rhs = Vec::with_capacity(equations);
    for j in 0..equations {
        for i in 0..n {
            design[(j, i)] = y[k + j + i];
        }
        if opts.affine {
            design[(j, n)] = 1.0;
        }
        rhs.push(y[k + j + n]);
    }
    let singular = |condition: f64| Error::SingularHankel {
        window_start: k,
        condition,
    };

    let (solution, condition) = match opts.mode {
        SolveMode::Exact => {
            let condition = condition_estimate(&design)?;
            if condition.is_nan() || condition > opts.max_condition {
                return Err(singular(condition));
            }
            let lu = Lu::factor(&design).map_err(|_| singular(condition))?;
            (lu.solve(&rhs)?, condition)
        }
        SolveMode::Overdetermined => {
            let qr = PivotedQr::factor(&design);
            let ratios = qr.pivot_ratios();
            let smallest = ratios.last().copied().unwrap_or(0.0);
            let condition = if smallest > 0.0 {
                1.0 / smallest
            } else {
                f64::INFINITY
            };
            if condition.is_nan() || condition > opts.max_condition {
                return Err(singular(condition));
            }
            let x = qr
                .solve_least_squares(&rhs, 1.0 / opts.max_condition)
                .map_err(|_| singular(condition))?;
            (x, condition)
        }
    };

    // stored coefficients are the negated solution
    let coeffs: Vec<f64> = solution[..n].iter().map(|g| -g).collect();
    let offset = opts.affine.then(|| solution[n]);
    let model = PredictionModel::new(MonicPolynomial::new(coeffs)?, offset, series.step())?;
    let residual = (0..equations)
        .map(|j| (rhs[j] - model.next(&y[k + j..k + j + n])).abs())
        .fold(0.0, f64::max);
    Ok(IdentReport {
        model,
        window_start: k,
        residual,
        condition_estimate: condition,
    })
}

/// Continues the recurrence for `steps` values past `seed` (the latest `n`
/// observations, oldest first).
pub fn predict(model: &PredictionModel, seed: &[f64], steps: usize) -> Result<TimeSeries> {
    let n = model.order();
    if seed.len() != n {
        return Err(dim_err(format!(
            "seed window has {} values, model order is {n}",
            seed.len()
        )));
    }
    if steps == 0 {
        return Err(dim_err("at least one prediction step is required"));
    }
    let mut window = seed.to_vec();
    let mut out = Vec::with_capacity(steps);
    for _ in 0..steps {
        let v = model.next(&window[window.len() - n..]);
        out.push(v);
        window.push(v);
    }
    TimeSeries::new(out)?.with_step(model.step())
}

/// Same continuation computed by iterating the companion state
/// `z(m+1) = A_c·z(m) (+ b̃·e_n)` from `z(0) = seed` and reading the last coordinate.
pub fn iterate_companion(model: &PredictionModel, seed: &[f64], steps: usize) -> Result<Vec<f64>> {
    let n = model.order();
    if seed.len() != n {
        return Err(dim_err(format!(
            "seed window has {} values, model order is {n}",
            seed.len()
        )));
    }
    let mut z = seed.to_vec();
    let mut out = Vec::with_capacity(steps);
    for _ in 0..steps {
        z = model.companion().mul_vec(&z)?;
        if let Some(b) = model.offset() {
            z[n - 1] += b;
        }
        out.push(z[n - 1]);
    }
    Ok(out)
}

/// Smallest `n ≤ n_max` whose `n×n` Hankel window has full numerical rank
/// while the `(n+1)×(n+1)` window does not.
pub fn estimate_order(series: &TimeSeries, n_max: usize, tol: f64) -> Result<usize> {
    let needed = 2 * n_max + 1;
    if series.len() < needed {
        return Err(Error::InsufficientData {
            needed,
            available: series.len(),
        });
    }
    for n in 1..=n_max {
        let full = numerical_rank(&hankel(series, 0, n)?, tol) == n;
        let bigger = numerical_rank(&hankel(series, 0, n + 1)?, tol);
        if full && bigger <= n {
            return Ok(n);
        }
    }
    Err(Error::NoOrderFound { n_max })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConjugacyReport {
    /// Largest `|model aᵢ − reference aᵢ|`.
    pub coeff_error: f64,
    /// Largest distance between greedily matched roots.
    pub spectrum_error: f64,
    pub conjugate: bool,
}

/// Compares the model against the characteristic polynomial of the system's
/// one-sample transition (`A`, or `e^{λA}` for a continuous system).
///
/// Root matching is greedy nearest-neighbour, which can overstate the
/// error for tightly clustered spectra.
pub fn verify_conjugacy(
    model: &PredictionModel,
    sys: &SystemSpec,
    tol: f64,
) -> Result<ConjugacyReport> {
    if model.order() != sys.dim() {
        return Err(dim_err(format!(
            "model order {} against system dimension {}",
            model.order(),
            sys.dim()
        )));
    }
    let reference = char_poly(&sys.transition()?)?;
    let coeff_error = model
        .coeffs()
        .iter()
        .zip(reference.coeffs())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    let spectrum_error =
        poly_roots(model.polynomial())?.matching_distance(&poly_roots(&reference)?)?;
    Ok(ConjugacyReport {
        coeff_error,
        spectrum_error,
        conjugate: coeff_error <= tol,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stability {
    AsymptoticallyStable,
    Marginal,
    Unstable,
}

impl Stability {
    pub fn as_str(&self) -> &'static str {
        match self {
            Stability::AsymptoticallyStable => "asymptotically-stable",
            Stability::Marginal => "marginal",
            Stability::Unstable => "unstable",
        }
    }
}

/// Largest root modulus of the model polynomial.
pub fn spectral_radius(model: &PredictionModel) -> Result<f64> {
    Ok(poly_roots(model.polynomial())?.max_modulus())
}

pub fn assess_stability(model: &PredictionModel) -> Result<Stability> {
    let rho = spectral_radius(model)?;
    Ok(if rho < 1.0 - STABILITY_MARGIN {
        Stability::AsymptoticallyStable
    } else if rho > 1.0 + STABILITY_MARGIN {
        Stability::Unstable
    } else {
        Stability::Marginal
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContinuousSpectrum {
    pub eigenvalues: ComplexList,
    /// Some sampled root sits at or near the negative real axis, where the
    /// principal logarithm cannot tell `ν` from `ν ± 2πi/λ`.
    pub aliasing_risk: bool,
}

/// Maps each root `μ` of the sampled model back through `ν = log(μ)/λ`
/// using the principal branch.
pub fn recover_continuous_spectrum(model: &PredictionModel) -> Result<ContinuousSpectrum> {
    let step = model.step().ok_or(Error::MissingStep)?;
    if model.coeffs()[0] == 0.0 {
        return Err(Error::ZeroRoot);
    }
    let roots = poly_roots(model.polynomial())?;
    let mut aliasing_risk = false;
    let mut eigenvalues = Vec::with_capacity(roots.len());
    for mu in roots.iter() {
        let r = mu.norm();
        if r == 0.0 {
            return Err(Error::ZeroRoot);
        }
        let arg = mu.arg();
        aliasing_risk |= arg.abs() >= PI - ALIASING_GUARD;
        eigenvalues.push(Complex64::new(r.ln() / step, arg / step));
    }
    Ok(ContinuousSpectrum {
        eigenvalues: ComplexList::new(eigenvalues),
        aliasing_risk,
    })
}

/// Characteristic polynomial the model should reproduce for `sys`.
pub fn reference_polynomial(sys: &SystemSpec) -> Result<MonicPolynomial> {
    match sys.kind() {
        SystemKind::Discrete => char_poly(sys.a()),
        SystemKind::Continuous => {
            char_poly(&mat_exp(sys.a(), sys.step().ok_or(Error::MissingStep)?)?)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn series(v: &[f64]) -> TimeSeries {
        TimeSeries::new(v.to_vec()).unwrap()
    }

    fn fib_model() -> PredictionModel {
        PredictionModel::from_coeffs(vec![-1.0, -1.0]).unwrap()
    }

    fn rotation_model(step: f64) -> PredictionModel {
        PredictionModel::new(
            MonicPolynomial::new(vec![1.0, -2.0 * step.cos()]).unwrap(),
            None,
            Some(step),
        )
        .unwrap()
    }

    #[test]
    fn hankel_examples() {
        let h = hankel(&series(&[1.0, 1.0, 2.0, 3.0, 5.0]), 0, 2).unwrap();
        assert_eq!(h.to_rows(), vec![vec![1.0, 1.0], vec![1.0, 2.0]]);
        let h = hankel(&series(&[1.0, 1.0, 2.0, 3.0, 5.0, 8.0]), 1, 2).unwrap();
        assert_eq!(h.to_rows(), vec![vec![1.0, 2.0], vec![2.0, 3.0]]);
        let h = hankel(&series(&[7.0, 7.0, 7.0]), 0, 2).unwrap();
        assert_eq!(numerical_rank(&h, 1e-9), 1);
        assert_eq!(
            hankel(&series(&[1.0, 2.0]), 0, 2),
            Err(Error::InsufficientData {
                needed: 3,
                available: 2
            })
        );
    }

    #[test]
    fn identify_examples() {
        let r = identify(&series(&[1.0, 1.0, 2.0, 3.0, 5.0]), 2, 0).unwrap();
        assert_eq!(r.model.coeffs(), &[-1.0, -1.0]);
        assert_eq!(r.residual, 0.0);
        assert!(r.condition_estimate >= 1.0);
        assert_eq!(r.model.companion().row(1), &[1.0, 1.0]);

        let r = identify(&series(&[1.0, 0.5, 0.25, 0.125]), 1, 0).unwrap();
        assert_eq!(r.model.coeffs(), &[-0.5]);

        assert!(matches!(
            identify(&series(&[3.0; 6]), 2, 0),
            Err(Error::SingularHankel { .. })
        ));
        assert!(matches!(
            identify(&series(&[1.0, 1.0, 2.0]), 2, 0),
            Err(Error::InsufficientData { needed: 4, .. })
        ));
    }

    #[test]
    fn identify_copies_step() {
        let y: Vec<f64> = (0..4).map(|i| (0.3 * i as f64).cos()).collect();
        let s = series(&y).with_step(Some(0.3)).unwrap();
        let r = identify(&s, 2, 0).unwrap();
        assert_eq!(r.model.step(), Some(0.3));
        assert!((r.model.coeffs()[0] - 1.0).abs() < 1e-12);
        assert!((r.model.coeffs()[1] + 2.0 * 0.3f64.cos()).abs() < 1e-12);
    }

    #[test]
    fn identify_affine_examples() {
        let r = identify_affine(&series(&[0.0, 1.0, 3.0, 7.0, 15.0]), 1, 0).unwrap();
        assert_eq!(r.model.coeffs(), &[-2.0]);
        assert_eq!(r.model.offset(), Some(1.0));

        let fibs = [1.0, 1.0, 2.0, 3.0, 5.0, 8.0, 13.0];
        let r = identify_affine(&series(&fibs), 2, 0).unwrap();
        assert!(r.model.offset().unwrap().abs() <= 1e-9 * 13.0);
        assert!(identify_affine(&series(&fibs[..4]), 2, 0).is_err());
    }

    #[test]
    fn overdetermined_mode_agrees_on_exact_data() {
        let fibs: Vec<f64> = (0..12)
            .scan((1.0, 1.0), |s, _| {
                let v = s.0;
                *s = (s.1, s.0 + s.1);
                Some(v)
            })
            .collect();
        let opts = IdentOptions {
            mode: SolveMode::Overdetermined,
            ..IdentOptions::default()
        };
        let r = identify_with(&series(&fibs), 2, 0, &opts).unwrap();
        for a in r.model.coeffs() {
            assert!((a + 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn predict_examples() {
        let p = predict(&fib_model(), &[5.0, 8.0], 3).unwrap();
        assert_eq!(p.values(), &[13.0, 21.0, 34.0]);

        let ident = PredictionModel::from_coeffs(vec![-1.0]).unwrap();
        assert_eq!(predict(&ident, &[4.5], 5).unwrap().values(), &[4.5; 5]);

        let affine =
            PredictionModel::new(MonicPolynomial::new(vec![-2.0]).unwrap(), Some(1.0), None)
                .unwrap();
        assert_eq!(
            predict(&affine, &[15.0], 2).unwrap().values(),
            &[31.0, 63.0]
        );
        assert_eq!(
            iterate_companion(&affine, &[15.0], 2).unwrap(),
            vec![31.0, 63.0]
        );

        assert!(matches!(
            predict(&fib_model(), &[1.0], 3),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn order_estimation() {
        let fibs = series(&[1.0, 1.0, 2.0, 3.0, 5.0, 8.0, 13.0, 21.0, 34.0]);
        assert_eq!(estimate_order(&fibs, 4, 1e-9).unwrap(), 2);
        let geo: Vec<f64> = (0..7).map(|i| 0.8f64.powi(i)).collect();
        assert_eq!(estimate_order(&series(&geo), 3, 1e-9).unwrap(), 1);
        assert_eq!(
            estimate_order(&series(&[0.0; 9]), 4, 1e-9),
            Err(Error::NoOrderFound { n_max: 4 })
        );
        assert!(matches!(
            estimate_order(&fibs, 5, 1e-9),
            Err(Error::InsufficientData { .. })
        ));
    }

    #[test]
    fn conjugacy_examples() {
        let fib = SystemSpec::discrete(
            Matrix::from_rows(&[[0.0, 1.0], [1.0, 1.0]]).unwrap(),
            vec![1.0, 0.0],
        )
        .unwrap();
        let r = verify_conjugacy(&fib_model(), &fib, 1e-12).unwrap();
        assert_eq!(r.coeff_error, 0.0);
        assert!(r.conjugate);

        let rot = SystemSpec::continuous(
            Matrix::from_rows(&[[0.0, 1.0], [-1.0, 0.0]]).unwrap(),
            vec![1.0, 0.0],
            0.3,
        )
        .unwrap();
        let r = verify_conjugacy(&rotation_model(0.3), &rot, 1e-9).unwrap();
        assert!(r.conjugate && r.coeff_error < 1e-12, "{r:?}");

        let id = SystemSpec::discrete(Matrix::identity(2), vec![1.0, 0.0]).unwrap();
        let r = verify_conjugacy(&fib_model(), &id, 1e-6).unwrap();
        assert!(!r.conjugate);
        assert_eq!(r.coeff_error, 2.0);

        let one = SystemSpec::discrete(Matrix::identity(1), vec![1.0]).unwrap();
        assert!(verify_conjugacy(&fib_model(), &one, 1e-6).is_err());
    }

    #[test]
    fn stability_examples() {
        let decay = PredictionModel::from_coeffs(vec![-0.5]).unwrap();
        assert_eq!(
            assess_stability(&decay).unwrap(),
            Stability::AsymptoticallyStable
        );
        assert_eq!(assess_stability(&fib_model()).unwrap(), Stability::Unstable);
        assert_eq!(
            assess_stability(&rotation_model(0.3)).unwrap(),
            Stability::Marginal
        );
    }

    #[test]
    fn spectrum_examples() {
        let decay = PredictionModel::new(
            MonicPolynomial::new(vec![-(-0.5f64).exp()]).unwrap(),
            None,
            Some(0.5),
        )
        .unwrap();
        let s = recover_continuous_spectrum(&decay).unwrap();
        assert!((s.eigenvalues[0] - Complex64::new(-1.0, 0.0)).norm() < 1e-14);
        assert!(!s.aliasing_risk);

        let s = recover_continuous_spectrum(&rotation_model(0.3)).unwrap();
        assert!((s.eigenvalues[0] - Complex64::new(0.0, -1.0)).norm() < 1e-12);
        assert!((s.eigenvalues[1] - Complex64::new(0.0, 1.0)).norm() < 1e-12);

        assert_eq!(
            recover_continuous_spectrum(&fib_model()),
            Err(Error::MissingStep)
        );
        let zero = PredictionModel::new(
            MonicPolynomial::new(vec![0.0, 1.0]).unwrap(),
            None,
            Some(0.1),
        )
        .unwrap();
        assert_eq!(recover_continuous_spectrum(&zero), Err(Error::ZeroRoot));

        // negative real root sits on the branch cut
        let flip = PredictionModel::new(MonicPolynomial::new(vec![0.5]).unwrap(), None, Some(1.0))
            .unwrap();
        assert!(recover_continuous_spectrum(&flip).unwrap().aliasing_risk);
    }
}
