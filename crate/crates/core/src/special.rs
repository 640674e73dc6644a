//! Small special-function helpers on top of `statrs`.

use std::f64::consts::{PI, SQRT_2};

pub use statrs::function::gamma::{gamma, ln_gamma};

/// Gaussian tail probability Q(x) = P{N(0,1) > x}.
pub fn q_function(x: f64) -> f64 {
    0.5 * statrs::function::erf::erfc(x / SQRT_2)
}

/// Normalized sinc, sin(πx)/(πx), with sinc(0) = 1.
pub fn sinc(x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else {
        let px = PI * x;
        px.sin() / px
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn q_reference_values() {
        assert!((q_function(0.0) - 0.5).abs() < 1e-15);
        assert!((2.0 * q_function(1.0) - 0.317_310_507_862_914_15).abs() < 1e-10);
        assert!((q_function(-1.0) + q_function(1.0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn sinc_values() {
        assert_eq!(sinc(0.0), 1.0);
        assert!((sinc(0.5) - 2.0 / PI).abs() < 1e-15);
        assert!(sinc(1.0).abs() < 1e-15);
    }
}
