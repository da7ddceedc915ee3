//! Gamma function at half-integers and ball/sphere measures.
//!
//! Every Gamma value needed by the Weyl constants has the form Γ(n/2) with
//! n a positive integer, so the recurrence Γ(x + 1) = xΓ(x) seeded with
//! Γ(1/2) = √π and Γ(1) = 1 is exact up to rounding.

use std::f64::consts::PI;

/// Γ(n/2) for a positive integer `n`.
///
/// # Panics
///
/// Panics when `n == 0` (pole of Γ at the origin).
pub fn gamma_half(n: u32) -> f64 {
    assert!(n > 0, "gamma_half: Γ(0) is a pole");
    let (mut value, mut arg) = if n.is_multiple_of(2) {
        (1.0, 1.0)
    } else {
        (PI.sqrt(), 0.5)
    };
    let target = f64::from(n) / 2.0;
    while arg < target {
        value *= arg;
        arg += 1.0;
    }
    value
}

/// Volume of the unit ball in `R^n`; equals 1 for `n = 0`.
pub fn unit_ball_volume(n: u32) -> f64 {
    PI.powf(f64::from(n) / 2.0) / gamma_half(n + 2)
}

/// Surface measure of the unit sphere `S^{n-1}` in `R^n`, `n >= 1`.
///
/// For `n = 1` this is the counting measure of `{-1, 1}`, i.e. 2.
pub fn unit_sphere_area(n: u32) -> f64 {
    assert!(n >= 1, "unit_sphere_area: dimension must be positive");
    2.0 * PI.powf(f64::from(n) / 2.0) / gamma_half(n)
}
