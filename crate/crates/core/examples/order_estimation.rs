//! Find the order of an unknown recurrence from Hankel ranks, then identify it.

use hankel_ident::dynsys::{simulate_discrete, SystemSpec};
use hankel_ident::ident::{estimate_order, identify};
use hankel_ident::numkit::{Matrix, DEFAULT_RANK_TOL};

fn main() -> hankel_ident::Result<()> {
    // a 5-state system whose output only sees 3 modes
    let a = Matrix::diag(&[0.9, -0.5, 0.3, 0.7, 0.1])?;
    let sys = SystemSpec::discrete(a, vec![1.0, 1.0, 1.0, 0.0, 0.0])?;
    let series = simulate_discrete(&sys, &[1.0, 1.0, 1.0, 1.0, 1.0], 15)?;

    let n = estimate_order(&series, 6, DEFAULT_RANK_TOL)?;
    println!("estimated order {n}");
    let model = identify(&series, n, 0)?.model;
    println!("coeffs {:?}", model.coeffs());
    Ok(())
}
