//! Float helpers routed through `libm` so the crate builds without `std`.

use num_complex::Complex64;

pub const FRAC_1_SQRT_2: f64 = core::f64::consts::FRAC_1_SQRT_2;

#[inline]
pub fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

#[inline]
pub fn exp(x: f64) -> f64 {
    libm::exp(x)
}

#[inline]
pub fn cos(x: f64) -> f64 {
    libm::cos(x)
}

#[inline]
pub fn sin(x: f64) -> f64 {
    libm::sin(x)
}

/// `e^{iθ}`
#[inline]
pub fn cis(theta: f64) -> Complex64 {
    Complex64::new(cos(theta), sin(theta))
}
