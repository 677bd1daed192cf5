//! Observability rank before and after sampling.

use hankel_ident::dynsys::{is_observable, observability_matrix};
use hankel_ident::numkit::{mat_exp, Matrix, PivotedQr, DEFAULT_RANK_TOL};

fn report(label: &str, a: &Matrix, c: &[f64]) -> hankel_ident::Result<()> {
    let (observable, rank) = is_observable(a, c, DEFAULT_RANK_TOL)?;
    let ratios = PivotedQr::factor(&observability_matrix(a, c)?).pivot_ratios();
    println!(
        "{label:<28} rank {rank}  observable {observable:<5}  smallest pivot ratio {:.2e}",
        ratios.last().copied().unwrap_or(0.0)
    );
    Ok(())
}

fn main() -> hankel_ident::Result<()> {
    report("identity, c = (1, 1)", &Matrix::identity(2), &[1.0, 1.0])?;
    report(
        "fibonacci, c = (1, 0)",
        &Matrix::from_rows(&[[0.0, 1.0], [1.0, 1.0]])?,
        &[1.0, 0.0],
    )?;

    let a = Matrix::from_rows(&[
        [0.0, 1.0, 0.0, 0.0],
        [-9.0, -0.1, 0.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
        [0.0, 0.0, -25.0, -0.3],
    ])?;
    let c = [1.0, 0.0, 1.0, 0.0];
    report("two oscillators", &a, &c)?;
    // rows of the sampled matrix converge as the step shrinks
    for step in [0.1, 0.01, 0.001] {
        report(&format!("  sampled, step {step}"), &mat_exp(&a, step)?, &c)?;
    }
    Ok(())
}
