//! Systems with a constant input: x <- A x + b. The output recurrence picks
//! up a constant term, identified alongside the coefficients.

use hankel_ident::dynsys::{affine_offset, simulate_discrete, SystemSpec};
use hankel_ident::ident::identify_affine;
use hankel_ident::numkit::Matrix;

fn main() -> hankel_ident::Result<()> {
    // x <- 2x + 1 from 0 gives 0, 1, 3, 7, 15, ...
    let doubling = SystemSpec::affine(Matrix::from_rows(&[[2.0]])?, vec![1.0], vec![1.0])?;
    let series = simulate_discrete(&doubling, &[0.0], 5)?;
    let r = identify_affine(&series, 1, 0)?;
    println!("series {:?}", series.values());
    println!(
        "a0 = {}, offset = {}",
        r.model.coeffs()[0],
        r.model.offset().unwrap()
    );

    let a = Matrix::from_rows(&[[0.9, 0.1], [-0.2, 0.7]])?;
    let (b, c) = (vec![0.5, -1.0], vec![1.0, 2.0]);
    let sys = SystemSpec::affine(a.clone(), b.clone(), c.clone())?;
    let series = simulate_discrete(&sys, &[0.3, 0.1], 8)?;
    let r = identify_affine(&series, 2, 0)?;
    println!(
        "2-d system: offset {:.12}, expected {:.12}",
        r.model.offset().unwrap(),
        affine_offset(&a, &b, &c)?
    );
    Ok(())
}
