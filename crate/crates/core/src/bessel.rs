//! Bessel functions of the first kind, integer order, real argument.
//!
//! Values come from Miller's backward recurrence
//! `J_{n-1}(x) = (2n/x) J_n(x) - J_{n+1}(x)` started well above both the
//! order and the argument, normalised with `J_0 + 2 Σ J_{2m} = 1`.
//! The unnormalised tail is positive, so the recurrence also yields the
//! direction of `(J_k, J_{k+1})` without ever forming tiny values, which is
//! what the disk secular scan needs for high angular orders.

use thiserror::Error;

pub const MAX_ORDER: u32 = 400;
pub const MAX_ARGUMENT: f64 = 300.0;

const RESCALE_ABOVE: f64 = 1e250;
const RESCALE_BY: f64 = 1e-250;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BesselError {
    #[error("order {0} exceeds the supported maximum {MAX_ORDER}")]
    Order(u32),
    #[error("argument {0} outside [0, {MAX_ARGUMENT}]")]
    Argument(f64),
}

fn check(order: u32, x: f64) -> Result<(), BesselError> {
    if order > MAX_ORDER {
        return Err(BesselError::Order(order));
    }
    if !(0.0..=MAX_ARGUMENT).contains(&x) {
        return Err(BesselError::Argument(x));
    }
    Ok(())
}

/// Even starting index for the backward recurrence.
fn start_index(order: u32, x: f64) -> usize {
    let top = f64::from(order).max(x);
    let n = top + 30.0 + 12.0 * top.cbrt();
    let n = n.ceil() as usize;
    n + (n & 1)
}

/// Runs the recurrence downward from the start index and stores
/// `J_0 .. J_{max_order}` (up to a common positive factor) in `out`.
/// Returns the normalisation sum computed on the same scale.
fn backward(max_order: u32, x: f64, out: &mut [f64]) -> f64 {
    let start = start_index(max_order, x);
    let mut above = 0.0; // J_{n+1}
    let mut here = 1e-300; // J_n
    let mut norm = 0.0;
    for n in (1..=start).rev() {
        if n <= max_order as usize {
            out[n] = here;
        }
        if n % 2 == 0 {
            norm += 2.0 * here;
        }
        let below = 2.0 * n as f64 / x * here - above;
        above = here;
        here = below;
        if here.abs() > RESCALE_ABOVE {
            here *= RESCALE_BY;
            above *= RESCALE_BY;
            norm *= RESCALE_BY;
            let from = n.min(out.len());
            for v in &mut out[from..] {
                *v *= RESCALE_BY;
            }
        }
    }
    out[0] = here;
    norm + here
}

/// `J_k(x)` for `0 <= k <= MAX_ORDER` and `0 <= x <= MAX_ARGUMENT`.
pub fn bessel_j(k: u32, x: f64) -> Result<f64, BesselError> {
    check(k, x)?;
    if x == 0.0 {
        return Ok(if k == 0 { 1.0 } else { 0.0 });
    }
    let mut buf = vec![0.0; k as usize + 1];
    let norm = backward(k, x, &mut buf);
    Ok(buf[k as usize] / norm)
}

/// `J_0(x), ..., J_{max_order}(x)` from a single recurrence sweep.
pub fn bessel_j_all(max_order: u32, x: f64) -> Result<Vec<f64>, BesselError> {
    check(max_order, x)?;
    let mut buf = vec![0.0; max_order as usize + 1];
    if x == 0.0 {
        buf[0] = 1.0;
        return Ok(buf);
    }
    let norm = backward(max_order, x, &mut buf);
    for v in &mut buf {
        *v /= norm;
    }
    Ok(buf)
}

/// `(J_k(x), J_{k+1}(x))` scaled to unit Euclidean length.
///
/// Consecutive orders never vanish together, so the pair is always defined;
/// it keeps full relative accuracy where `J_k(x)` itself underflows.
pub fn bessel_pair_direction(k: u32, x: f64) -> Result<(f64, f64), BesselError> {
    check(k + 1, x)?;
    if x == 0.0 {
        return Ok((1.0, 0.0));
    }
    let mut buf = vec![0.0; k as usize + 2];
    let norm = backward(k + 1, x, &mut buf);
    let (mut t, mut u) = (buf[k as usize], buf[k as usize + 1]);
    if norm < 0.0 {
        t = -t;
        u = -u;
    }
    let len = t.hypot(u);
    Ok((t / len, u / len))
}

/// `J_k'(x) = (k/x) J_k(x) - J_{k+1}(x)`, written for a given pair.
pub fn derivative_from_pair(k: u32, x: f64, jk: f64, jk1: f64) -> f64 {
    f64::from(k) / x * jk - jk1
}
