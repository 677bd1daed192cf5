//! Seeded system generators shared by the integration tests.
#![allow(dead_code)]

use hankel_ident::dynsys::{krylov_matrix, observability_matrix};
use hankel_ident::experiments::{draw_sample, Draw, TrialConfig};
use hankel_ident::numkit::{condition_estimate, determinant, Matrix};
use num_complex::Complex64;
use rand::distr::{Distribution, Uniform};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Draws tried per system before a generator gives up.
const MAX_ATTEMPTS: u64 = 1 << 16;

/// `|det m|` divided by the product of the row norms; 1 for orthogonal
/// rows, 0 for singular matrices, and unchanged by row scaling.
pub fn scaled_det(m: &Matrix) -> f64 {
    let det = determinant(m).unwrap_or(0.0).abs();
    let norms: f64 = (0..m.rows())
        .map(|i| m.row(i).iter().map(|v| v * v).sum::<f64>().sqrt())
        .product();
    if norms == 0.0 {
        0.0
    } else {
        det / norms
    }
}

/// Uniform `[-1, 1]` draw with `Q(A, c)` and `M(A, x₀)` both comfortably
/// nonsingular (scaled determinant above `1e-6`). Draws failing the test are
/// replaced by the next one on the stream family of `index`.
pub fn observable_system(seed: u64, index: u64, n: usize) -> Draw {
    let config = TrialConfig::new(n, 1, seed);
    for attempt in 0..MAX_ATTEMPTS {
        let d = draw_sample(&config, (index << 16) | attempt);
        let q = observability_matrix(&d.a, &d.c).unwrap();
        let m = krylov_matrix(&d.a, &d.x0).unwrap().transpose();
        if scaled_det(&q) > 1e-6 && scaled_det(&m) > 1e-6 {
            return d;
        }
    }
    panic!("no well-conditioned draw for n={n}");
}

/// Continuous system with a prescribed spectrum, `A = T·D·T⁻¹`.
pub struct ContinuousCase {
    pub a: Matrix,
    pub c: Vec<f64>,
    pub x0: Vec<f64>,
    pub eigenvalues: Vec<Complex64>,
}

/// Real parts uniform on `[-50, 50]`, imaginary parts of conjugate pairs
/// uniform on `[5, 150]` (so `|Im|·0.01 < π`), every pair of eigenvalues at
/// least 10 apart, and `cond₁(T) ≤ 100`. `c` and `x₀` are uniform on `[-1, 1]`.
pub fn continuous_case(seed: u64, index: u64, n: usize) -> ContinuousCase {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    let unit = Uniform::new_inclusive(-1.0, 1.0).unwrap();
    let re = Uniform::new_inclusive(-50.0, 50.0).unwrap();
    let im = Uniform::new_inclusive(5.0, 150.0).unwrap();

    let pairs = rng.random_range(0..=n / 2);
    let eigenvalues = loop {
        let mut ev = Vec::with_capacity(n);
        for _ in 0..pairs {
            let z = Complex64::new(re.sample(&mut rng), im.sample(&mut rng));
            ev.push(z);
            ev.push(z.conj());
        }
        while ev.len() < n {
            ev.push(Complex64::new(re.sample(&mut rng), 0.0));
        }
        let separated = ev
            .iter()
            .enumerate()
            .all(|(i, z)| ev[i + 1..].iter().all(|w| (z - w).norm() >= 10.0));
        if separated {
            break ev;
        }
    };

    let mut d = Matrix::zeros(n, n).to_rows();
    let mut i = 0;
    while i < n {
        let z = eigenvalues[i];
        if z.im != 0.0 {
            d[i][i] = z.re;
            d[i + 1][i + 1] = z.re;
            d[i][i + 1] = z.im;
            d[i + 1][i] = -z.im;
            i += 2;
        } else {
            d[i][i] = z.re;
            i += 1;
        }
    }
    let d = Matrix::from_rows(&d).unwrap();

    let t = loop {
        let entries: Vec<f64> = (0..n * n).map(|_| unit.sample(&mut rng)).collect();
        let t = Matrix::from_row_slice(n, n, &entries).unwrap();
        if condition_estimate(&t).map(|c| c <= 100.0).unwrap_or(false) {
            break t;
        }
    };
    let t_inv = hankel_ident::numkit::Lu::factor(&t).unwrap().inverse();
    let a = &(&t * &d) * &t_inv;
    let c = (0..n).map(|_| unit.sample(&mut rng)).collect();
    let x0 = (0..n).map(|_| unit.sample(&mut rng)).collect();
    ContinuousCase {
        a,
        c,
        x0,
        eigenvalues,
    }
}

/// Greedy nearest-neighbour matching distance between two spectra.
pub fn spectrum_distance(got: &[Complex64], want: &[Complex64]) -> f64 {
    let mut pool: Vec<Complex64> = want.to_vec();
    let mut worst = 0.0f64;
    for z in got {
        let (k, d) = pool
            .iter()
            .enumerate()
            .map(|(k, w)| (k, (z - w).norm()))
            .fold(
                (0, f64::INFINITY),
                |acc, x| if x.1 < acc.1 { x } else { acc },
            );
        worst = worst.max(d);
        pool.swap_remove(k);
    }
    worst
}
