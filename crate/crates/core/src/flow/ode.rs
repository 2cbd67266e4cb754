//! Dormand–Prince 5(4) embedded pair for autonomous planar systems.

use crate::math::{self, Vec2};

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

/// Result of one trial step.
#[derive(Clone, Copy, Debug)]
pub struct StepResult {
    pub z: Vec2,
    /// Derivative at the new point (first stage of the next step).
    pub dz: Vec2,
    /// Scaled error norm; the step is acceptable when `≤ 1`.
    pub err: f64,
}

/// One Dormand–Prince step of size `h` from `z` with `k1 = rhs(z)`.
pub fn dopri_step<R: Fn(Vec2) -> Vec2>(rhs: &R, z: Vec2, k1: Vec2, h: f64, rtol: f64, atol: f64) -> StepResult {
    let k2 = rhs(z + k1 * (h * A21));
    let k3 = rhs(z + (k1 * A31 + k2 * A32) * h);
    let k4 = rhs(z + (k1 * A41 + k2 * A42 + k3 * A43) * h);
    let k5 = rhs(z + (k1 * A51 + k2 * A52 + k3 * A53 + k4 * A54) * h);
    let k6 = rhs(z + (k1 * A61 + k2 * A62 + k3 * A63 + k4 * A64 + k5 * A65) * h);
    let z_new = z + (k1 * A71 + k3 * A73 + k4 * A74 + k5 * A75 + k6 * A76) * h;
    let k7 = rhs(z_new);
    let e = (k1 * E1 + k3 * E3 + k4 * E4 + k5 * E5 + k6 * E6 + k7 * E7) * h;
    let sx = atol + rtol * z.x.abs().max(z_new.x.abs());
    let sy = atol + rtol * z.y.abs().max(z_new.y.abs());
    let err = math::sqrt(0.5 * ((e.x / sx) * (e.x / sx) + (e.y / sy) * (e.y / sy)));
    StepResult { z: z_new, dz: k7, err }
}

/// Step-size controller factor for an error norm `err`.
pub fn step_factor(err: f64) -> f64 {
    if err == 0.0 || !err.is_finite() {
        return if err == 0.0 { 5.0 } else { 0.2 };
    }
    (0.9 * math::pow(err, -0.2)).clamp(0.2, 5.0)
}
