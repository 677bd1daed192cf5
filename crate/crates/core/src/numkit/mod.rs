//! Dense linear algebra and polynomial kernel shared by the rest of the crate.

mod expm;
mod linalg;
mod matrix;
mod poly;

pub use expm::mat_exp;
pub use linalg::{
    condition_estimate, determinant, numerical_rank, solve_linear, Lu, PivotedQr, DEFAULT_RANK_TOL,
    PIVOT_FLOOR,
};
pub(crate) use matrix::check_finite;
pub use matrix::Matrix;
pub use poly::{
    char_poly, companion_matrix, discriminant, poly_roots, resultant, ComplexList, MonicPolynomial,
    ROOT_MAX_ITERATIONS,
};
