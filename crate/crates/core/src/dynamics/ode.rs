//! Adaptive Dormand-Prince 5(4) for autonomous scalar ODEs.

const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// Solves `y' = f(y)`, `y(0) = y0` up to time `t` with relative tolerance
/// `rtol` per step.
pub(super) fn integrate<F: Fn(f64) -> f64>(f: F, y0: f64, t: f64, rtol: f64) -> f64 {
    let atol = rtol * 1e-3;
    let mut y = y0;
    let mut s = 0.0;
    let mut h = (t * 1e-3).max(1e-12);
    while s < t {
        h = h.min(t - s);
        let mut k = [0.0; 7];
        for i in 0..7 {
            let yi = y + h * (0..i).map(|j| A[i][j] * k[j]).sum::<f64>();
            k[i] = f(yi);
        }
        let y5 = y + h * (0..7).map(|i| B5[i] * k[i]).sum::<f64>();
        let y4 = y + h * (0..7).map(|i| B4[i] * k[i]).sum::<f64>();
        let scale = atol + rtol * y.abs().max(y5.abs());
        let err = (y5 - y4).abs() / scale;
        if err <= 1.0 {
            s += h;
            y = y5;
        }
        let factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
        h *= factor;
    }
    y
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_closed_forms() {
        let y = integrate(|y| -y, 1.0, 1.0, 1e-10);
        assert!((y - (-1.0f64).exp()).abs() < 1e-10);
        // y' = -y^3, y = 1 / sqrt(1 + 2t)
        let y = integrate(|y| -y * y * y, 2.0, 3.0, 1e-10);
        let exact = 1.0 / (0.25 + 6.0f64).sqrt();
        assert!((y - exact).abs() < 1e-9 * exact);
    }
}
