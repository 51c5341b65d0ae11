//! Embedded Dormand-Prince 5(4) integrator with step-size control.
//!
//! Kept deliberately small: dense state as a `Vec<f64>`, an observer hook at
//! accepted steps, and right-hand sides that may fail (the geodesic equation
//! is undefined outside a chart, which the controller treats as a rejected
//! step).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerances and limits for the adaptive integrator.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct IntegratorConfig {
    pub rtol: f64,
    pub atol: f64,
    pub max_step: f64,
    pub max_steps: usize,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self {
            rtol: 1e-10,
            atol: 1e-12,
            max_step: f64::INFINITY,
            max_steps: 200_000,
        }
    }
}

impl IntegratorConfig {
    pub(crate) fn validate(&self) -> Result<()> {
        if !(self.rtol > 0.0) || !(self.atol > 0.0) {
            return Err(Error::InvalidParameter(
                "integrator tolerances must be positive".into(),
            ));
        }
        if !(self.max_step > 0.0) || self.max_steps == 0 {
            return Err(Error::InvalidParameter(
                "integrator step limits must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// Observer verdict at each accepted step.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum StepOutcome {
    Continue,
    Halt,
}

pub(crate) struct Integration {
    pub y: Vec<f64>,
    pub s: f64,
    pub halted: bool,
}

// Dormand-Prince coefficients.
const C: [f64; 6] = [1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 6] = [
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
// Fifth-order weights are the last row of A; the fourth-order weights below
// give the embedded error estimate.
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// Integrates `dy/ds = rhs(s, y)` from `s0` to `s_end`.
///
/// The observer runs at every accepted step (including the final one) and
/// may halt the integration early. A failing right-hand side is treated as
/// stepping out of the admissible region: the step is retried at half size
/// until the step floor is reached.
pub(crate) fn dopri5<R, O>(
    mut rhs: R,
    mut observer: O,
    y0: &[f64],
    s0: f64,
    s_end: f64,
    cfg: &IntegratorConfig,
) -> Result<Integration>
where
    R: FnMut(f64, &[f64], &mut [f64]) -> Result<()>,
    O: FnMut(f64, &[f64]) -> StepOutcome,
{
    cfg.validate()?;
    let dim = y0.len();
    let span = s_end - s0;
    if span == 0.0 {
        observer(s0, y0);
        return Ok(Integration {
            y: y0.to_vec(),
            s: s0,
            halted: false,
        });
    }
    let dir = span.signum();
    let mut s = s0;
    let mut y = y0.to_vec();
    let mut h = (span.abs() * 1e-2).min(cfg.max_step) * dir;

    if observer(s, &y) == StepOutcome::Halt {
        return Ok(Integration { y, s, halted: true });
    }

    let mut k = vec![vec![0.0; dim]; 7];
    let mut y_stage = vec![0.0; dim];
    let mut y5 = vec![0.0; dim];

    for _ in 0..cfg.max_steps {
        let remaining = s_end - s;
        if remaining.abs() <= f64::EPSILON * s_end.abs().max(1.0) {
            return Ok(Integration {
                y,
                s: s_end,
                halted: false,
            });
        }
        if h.abs() > remaining.abs() {
            h = remaining;
        }
        let h_floor = 16.0 * f64::EPSILON * s.abs().max(1.0);
        if h.abs() < h_floor {
            return Err(Error::StepSizeUnderflow { s });
        }

        let step_ok = (|| -> Result<()> {
            rhs(s, &y, &mut k[0])?;
            for stage in 0..6 {
                for i in 0..dim {
                    let mut acc = 0.0;
                    for (j, kj) in k.iter().enumerate().take(stage + 1) {
                        acc += A[stage][j] * kj[i];
                    }
                    y_stage[i] = y[i] + h * acc;
                }
                rhs(s + C[stage] * h, &y_stage, &mut k[stage + 1])?;
            }
            Ok(())
        })();
        if step_ok.is_err() {
            // Stage left the chart; shrink and retry.
            h *= 0.5;
            continue;
        }

        // Fifth-order solution and embedded error.
        let mut err_sq = 0.0;
        for i in 0..dim {
            let mut acc5 = 0.0;
            let mut acc4 = 0.0;
            for j in 0..7 {
                let kji = k[j][i];
                if j < 6 {
                    acc5 += A[5][j] * kji;
                }
                acc4 += B4[j] * kji;
            }
            y5[i] = y[i] + h * acc5;
            let e = h * (acc5 - acc4);
            let scale = cfg.atol + cfg.rtol * y[i].abs().max(y5[i].abs());
            err_sq += (e / scale).powi(2);
        }
        let err = (err_sq / dim as f64).sqrt();

        if err <= 1.0 {
            s += h;
            y.copy_from_slice(&y5);
            if observer(s, &y) == StepOutcome::Halt {
                return Ok(Integration { y, s, halted: true });
            }
            let factor = if err == 0.0 {
                5.0
            } else {
                (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
            };
            h = (h * factor).clamp(-cfg.max_step, cfg.max_step);
            if h == 0.0 {
                h = h_floor * dir;
            }
        } else {
            h *= (0.9 * err.powf(-0.2)).clamp(0.2, 0.9);
        }
    }
    Err(Error::MaxStepsExceeded(cfg.max_steps))
}
