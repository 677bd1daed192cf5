//! Recover the Fibonacci recurrence from five samples and extend it.

use hankel_ident::dynsys::TimeSeries;
use hankel_ident::ident::{identify, predict};

fn main() -> hankel_ident::Result<()> {
    let series = TimeSeries::new(vec![1.0, 1.0, 2.0, 3.0, 5.0])?;
    let report = identify(&series, 2, 0)?;
    let a = report.model.coeffs();
    println!("y[t+2] = {} y[t+1] + {} y[t]", -a[1], -a[0]);
    println!(
        "residual {:e}, condition {:.3}",
        report.residual, report.condition_estimate
    );

    let next = predict(&report.model, &[5.0, 8.0], 5)?;
    println!("after 5, 8: {:?}", next.values());
    Ok(())
}
