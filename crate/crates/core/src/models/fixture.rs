//! The simulated 10 × 6 regression data set (intercept, one covariate, a
//! three-level factor and its interaction with the covariate).

use nalgebra::{DMatrix, DVector};

#[rustfmt::skip]
const X: [f64; 60] = [
    1.0,   2.32, 1.0, 0.0,  2.32,   0.0,
    1.0,   5.65, 1.0, 0.0,  5.65,   0.0,
    1.0,  -7.69, 1.0, 0.0, -7.69,   0.0,
    1.0,   3.59, 0.0, 1.0,  0.0,    3.59,
    1.0,   5.57, 0.0, 1.0,  0.0,    5.57,
    1.0,  -9.99, 0.0, 1.0,  0.0,   -9.99,
    1.0, -18.88, 0.0, 1.0,  0.0,  -18.88,
    1.0,   5.95, 0.0, 0.0,  0.0,    0.0,
    1.0, -16.39, 0.0, 0.0,  0.0,    0.0,
    1.0,   4.75, 0.0, 0.0,  0.0,    0.0,
];

const Y: [f64; 10] = [0.14, 2.99, 1.37, -2.55, -3.60, 14.86, 21.24, 2.78, 9.14, 2.06];

/// `(X, y)` with `X` 10 × 6.
pub fn embedded_regression_fixture() -> (DMatrix<f64>, DVector<f64>) {
    (DMatrix::from_row_slice(10, 6, &X), DVector::from_column_slice(&Y))
}
