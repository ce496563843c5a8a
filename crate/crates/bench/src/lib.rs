//! Fixed inputs shared by the benchmarks.

use qheis_core::{HeisPoint, Quaternion};

/// A pair certified by the gauge-product condition.
pub fn vertical_pair() -> (HeisPoint, HeisPoint) {
    (
        HeisPoint::vertical(Quaternion::imaginary(4.0, 0.0, 0.0)),
        HeisPoint::vertical(Quaternion::imaginary(0.0, 1.0, 0.0)),
    )
}

/// A generic non-vertical pair.
pub fn mixed_pair() -> (HeisPoint, HeisPoint) {
    (
        HeisPoint::from_components([0.3, -1.2, 0.5, 0.1], [0.4, 0.0, -0.7]),
        HeisPoint::from_components([2.0, 0.5, 0.0, -1.5], [0.0, 1.1, 0.3]),
    )
}
