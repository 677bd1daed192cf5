//! Identify a hidden 3-dimensional system from 2n samples of one output and
//! compare the result with its characteristic polynomial.

use hankel_ident::dynsys::{simulate_discrete, SystemSpec};
use hankel_ident::ident::{identify, verify_conjugacy};
use hankel_ident::numkit::{char_poly, poly_roots, Matrix};

fn main() -> hankel_ident::Result<()> {
    let a = Matrix::from_rows(&[[0.5, 0.2, 0.0], [-0.3, 0.8, 0.1], [0.0, 0.4, -0.6]])?;
    let sys = SystemSpec::discrete(a.clone(), vec![1.0, 0.0, 0.5])?;
    let series = simulate_discrete(&sys, &[1.0, -1.0, 0.25], 6)?;

    let report = identify(&series, 3, 0)?;
    println!("identified coeffs  {:?}", report.model.coeffs());
    println!("char_poly(A)       {:?}", char_poly(&a)?.coeffs());

    let check = verify_conjugacy(&report.model, &sys, 1e-9)?;
    println!(
        "coefficient error {:.2e}, spectrum error {:.2e}, conjugate: {}",
        check.coeff_error, check.spectrum_error, check.conjugate
    );
    for z in poly_roots(report.model.polynomial())?.iter() {
        println!("  eigenvalue {:+.6} {:+.6}i", z.re, z.im);
    }
    Ok(())
}
