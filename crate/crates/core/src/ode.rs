//! Adaptive explicit Runge-Kutta integration (Dormand-Prince 5(4)).
//!
//! Small fixed-dimension states (`[f64; N]`), step-size control on the
//! embedded 4th-order error estimate, integration in either direction, and
//! two front ends: free integration with a caller stop condition (used by
//! the shooting classifiers) and sampling onto a prescribed monotone grid
//! (used to lay solutions down on the profile grid).

#[derive(Debug, Clone, Copy)]
pub struct RkOptions {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
    /// Cap on |h|; zero means no cap.
    pub max_step: f64,
}

impl Default for RkOptions {
    fn default() -> Self {
        Self {
            rtol: 1e-10,
            atol: 1e-30,
            max_steps: 2_000_000,
            max_step: 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    ReachedEnd,
    Condition,
    StepLimit,
    StepUnderflow,
}

#[derive(Debug, Clone)]
pub struct Integration<const N: usize> {
    pub t: f64,
    pub y: [f64; N],
    pub reason: StopReason,
    pub steps: usize,
}

// Dormand-Prince 5(4) tableau.
const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
// 5th-order weights coincide with the last A row (FSAL).
const B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

struct Stepper<'a, const N: usize, F: Fn(f64, &[f64; N]) -> [f64; N]> {
    f: &'a F,
    opts: RkOptions,
    t: f64,
    y: [f64; N],
    k1: [f64; N],
    h: f64,
    dir: f64,
    span: f64,
    steps: usize,
}

impl<'a, const N: usize, F: Fn(f64, &[f64; N]) -> [f64; N]> Stepper<'a, N, F> {
    fn new(f: &'a F, opts: RkOptions, t0: f64, y0: [f64; N], t_end: f64) -> Self {
        let dir = if t_end >= t0 { 1.0 } else { -1.0 };
        let k1 = f(t0, &y0);
        // first step from the solution's own rate of change; the error
        // controller refines it within a few (cheap) rejections
        let rate = y0
            .iter()
            .zip(k1.iter())
            .map(|(y, d)| d.abs() / (y.abs() + opts.atol + 1e-300))
            .fold(0.0, f64::max);
        let span = (t_end - t0).abs().max(1e-12);
        let mut h = if rate > 0.0 {
            (0.1 / rate) * opts.rtol.max(1e-16).powf(0.2)
        } else {
            1e-3 * span
        };
        h = h.min(1e-2 * span).max(1e-10 * span);
        if opts.max_step > 0.0 {
            h = h.min(opts.max_step);
        }
        Self {
            f,
            opts,
            t: t0,
            y: y0,
            k1,
            h: h * dir,
            dir,
            span,
            steps: 0,
        }
    }

    /// One accepted step, clamped to not pass `t_limit`. Returns false on
    /// step underflow or step-count exhaustion.
    fn advance(&mut self, t_limit: f64) -> bool {
        let mut k = [[0.0; N]; 7];
        loop {
            if self.steps >= self.opts.max_steps {
                return false;
            }
            let mut h = self.h;
            if self.opts.max_step > 0.0 {
                h = h.clamp(-self.opts.max_step, self.opts.max_step);
            }
            let remaining = t_limit - self.t;
            if remaining.abs() < 1e-14 * self.t.abs().max(1.0) {
                self.t = t_limit;
                return true;
            }
            if (h - remaining) * self.dir > 0.0 {
                h = remaining;
            }
            if h.abs() < 1e-13 * self.span {
                return false;
            }

            k[0] = self.k1;
            for stage in 1..7 {
                let mut ys = self.y;
                for (j, kj) in k.iter().enumerate().take(stage) {
                    let a = A[stage][j];
                    if a != 0.0 {
                        for n in 0..N {
                            ys[n] += h * a * kj[n];
                        }
                    }
                }
                k[stage] = (self.f)(self.t + C[stage] * h, &ys);
            }

            let mut y5 = self.y;
            let mut err = [0.0; N];
            for (j, kj) in k.iter().enumerate() {
                for n in 0..N {
                    y5[n] += h * B5[j] * kj[n];
                    err[n] += h * (B5[j] - B4[j]) * kj[n];
                }
            }

            let mut err_norm = 0.0f64;
            for n in 0..N {
                let sc = self.opts.atol + self.opts.rtol * self.y[n].abs().max(y5[n].abs());
                if sc > 0.0 {
                    err_norm = err_norm.max((err[n] / sc).abs());
                }
            }

            self.steps += 1;
            if err_norm <= 1.0 {
                self.t += h;
                self.y = y5;
                self.k1 = k[6]; // FSAL
                let grow = if err_norm > 0.0 {
                    (0.9 * err_norm.powf(-0.2)).min(5.0)
                } else {
                    5.0
                };
                self.h = h * grow.max(0.2);
                return true;
            }
            let shrink = (0.9 * err_norm.powf(-0.2)).max(0.2);
            self.h = h * shrink;
        }
    }
}

/// Integrates y' = f(t, y) from (t0, y0) to t_end, stopping early when
/// `stop(t, y)` returns true (checked after every accepted step).
pub fn integrate_until<const N: usize>(
    f: impl Fn(f64, &[f64; N]) -> [f64; N],
    t0: f64,
    y0: [f64; N],
    t_end: f64,
    opts: RkOptions,
    stop: impl Fn(f64, &[f64; N]) -> bool,
) -> Integration<N> {
    let mut st = Stepper::new(&f, opts, t0, y0, t_end);
    loop {
        if stop(st.t, &st.y) {
            return Integration {
                t: st.t,
                y: st.y,
                reason: StopReason::Condition,
                steps: st.steps,
            };
        }
        if (st.t - t_end) * st.dir >= 0.0 {
            return Integration {
                t: st.t,
                y: st.y,
                reason: StopReason::ReachedEnd,
                steps: st.steps,
            };
        }
        if !st.advance(t_end) {
            let reason = if st.steps >= opts.max_steps {
                StopReason::StepLimit
            } else {
                StopReason::StepUnderflow
            };
            return Integration {
                t: st.t,
                y: st.y,
                reason,
                steps: st.steps,
            };
        }
    }
}

/// Integrates from (t0, y0) and records the state at every point of
/// `samples` (monotone in the direction of integration, first point
/// possibly equal to t0). The integrator lands exactly on each sample.
pub fn integrate_sampled<const N: usize>(
    f: impl Fn(f64, &[f64; N]) -> [f64; N],
    t0: f64,
    y0: [f64; N],
    samples: &[f64],
    opts: RkOptions,
) -> Vec<[f64; N]> {
    let mut out = Vec::with_capacity(samples.len());
    if samples.is_empty() {
        return out;
    }
    let t_end = *samples.last().unwrap();
    let mut st = Stepper::new(&f, opts, t0, y0, t_end);
    for &target in samples {
        if (target - st.t) * st.dir < 0.0 {
            // sample behind the current point (can only be t0 itself)
            out.push(st.y);
            continue;
        }
        while (st.t - target) * st.dir < -1e-14 * target.abs().max(1.0) {
            if !st.advance(target) {
                // propagate the last state; caller checks residuals anyway
                break;
            }
        }
        out.push(st.y);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_growth_matches_exact() {
        let sol = integrate_until(
            |_t, y: &[f64; 1]| [y[0]],
            0.0,
            [1.0],
            2.0,
            RkOptions {
                rtol: 1e-12,
                atol: 1e-14,
                ..Default::default()
            },
            |_, _| false,
        );
        assert_eq!(sol.reason, StopReason::ReachedEnd);
        assert!((sol.y[0] - 2.0f64.exp()).abs() < 1e-10);
    }

    #[test]
    fn harmonic_oscillator_phase_accuracy() {
        let sol = integrate_until(
            |_t, y: &[f64; 2]| [y[1], -y[0]],
            0.0,
            [1.0, 0.0],
            20.0 * std::f64::consts::PI,
            RkOptions {
                rtol: 1e-12,
                atol: 1e-14,
                ..Default::default()
            },
            |_, _| false,
        );
        assert!((sol.y[0] - 1.0).abs() < 1e-8);
        assert!(sol.y[1].abs() < 1e-8);
    }

    #[test]
    fn backward_integration() {
        // y' = y integrated from t=1 back to t=0 from y(1)=e gives 1.
        let sol = integrate_until(
            |_t, y: &[f64; 1]| [y[0]],
            1.0,
            [std::f64::consts::E],
            0.0,
            RkOptions {
                rtol: 1e-12,
                atol: 1e-14,
                ..Default::default()
            },
            |_, _| false,
        );
        assert!((sol.y[0] - 1.0).abs() < 1e-10);
    }

    #[test]
    fn stop_condition_fires() {
        let sol = integrate_until(
            |_t, y: &[f64; 1]| [y[0]],
            0.0,
            [1.0],
            50.0,
            RkOptions::default(),
            |_, y| y[0] > 100.0,
        );
        assert_eq!(sol.reason, StopReason::Condition);
        assert!(sol.y[0] >= 100.0 && sol.y[0] < 200.0);
    }

    #[test]
    fn sampling_lands_on_grid() {
        let grid: Vec<f64> = (0..=100).map(|i| i as f64 * 0.02).collect();
        let states = integrate_sampled(
            |_t, y: &[f64; 1]| [-2.0 * y[0]],
            0.0,
            [1.0],
            &grid,
            RkOptions {
                rtol: 1e-12,
                atol: 1e-16,
                ..Default::default()
            },
        );
        assert_eq!(states.len(), grid.len());
        for (t, y) in grid.iter().zip(states.iter()) {
            assert!(
                (y[0] - (-2.0 * t).exp()).abs() < 1e-11,
                "t={t}, y={}, exact={}",
                y[0],
                (-2.0 * t).exp()
            );
        }
    }

    #[test]
    fn relative_error_control_down_the_tail() {
        // pure relative control keeps exponential decay accurate over many
        // orders of magnitude
        let grid: Vec<f64> = (0..=60).map(|i| i as f64).collect();
        let states = integrate_sampled(
            |_t, y: &[f64; 1]| [-y[0]],
            0.0,
            [1.0],
            &grid,
            RkOptions {
                rtol: 1e-12,
                atol: 0.0,
                ..Default::default()
            },
        );
        let last = states.last().unwrap()[0];
        let exact = (-60.0f64).exp();
        assert!(
            ((last - exact) / exact).abs() < 1e-8,
            "rel err {}",
            ((last - exact) / exact).abs()
        );
    }
}
