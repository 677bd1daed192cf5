//! Classify identified models by the largest root modulus.

use hankel_ident::dynsys::{sample_continuous, SystemSpec};
use hankel_ident::ident::{assess_stability, identify, spectral_radius, PredictionModel};
use hankel_ident::numkit::Matrix;

fn main() -> hankel_ident::Result<()> {
    let rotation = {
        let a = Matrix::from_rows(&[[0.0, 1.0], [-1.0, 0.0]])?;
        let sys = SystemSpec::continuous(a, vec![1.0, 0.0], 0.3)?;
        identify(&sample_continuous(&sys, &[1.0, 0.0], 4)?, 2, 0)?.model
    };
    let models = [
        ("fibonacci", PredictionModel::from_coeffs(vec![-1.0, -1.0])?),
        (
            "y[t+1] = 0.5 y[t]",
            PredictionModel::from_coeffs(vec![-0.5])?,
        ),
        ("sampled rotation", rotation),
    ];
    for (name, model) in &models {
        println!(
            "{name:<20} radius {:.12}  {}",
            spectral_radius(model)?,
            assess_stability(model)?.as_str()
        );
    }
    Ok(())
}
