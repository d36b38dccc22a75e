//! Gaussian kernel density estimates on a fixed grid, and mode counting.
//!
//! The estimate at bandwidth `h` is evaluated at `G` equally spaced points
//! spanning `[min - pad·h, max + pad·h]`. Small samples are summed directly;
//! larger ones are linearly binned onto the grid and convolved with the
//! sampled kernel by FFT.

use std::cell::RefCell;
use std::f64::consts::PI;
use std::sync::Arc;

use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::reduce::Series;

/// Samples up to this size are evaluated by direct summation under
/// [`KdeMethod::Auto`].
pub const EXACT_MAX_SAMPLE: usize = 32;

/// Grid values below this fraction of the peak are treated as zero, which
/// keeps FFT round-off in the tails from registering as modes.
const FLOOR_RELATIVE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KdeMethod {
    #[default]
    Auto,
    Exact,
    Binned,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct KdeGrid {
    pub points: usize,
    /// Grid extension beyond the sample range, in multiples of the bandwidth.
    pub pad: f64,
    pub method: KdeMethod,
}

impl Default for KdeGrid {
    fn default() -> Self {
        Self { points: 512, pad: 3.0, method: KdeMethod::Auto }
    }
}

impl KdeGrid {
    pub fn validate(&self) -> Result<()> {
        if self.points < 64 {
            return Err(Error::InvalidArgument(format!("KDE grid needs >= 64 points, got {}", self.points)));
        }
        if !(self.pad >= 0.0 && self.pad.is_finite()) {
            return Err(Error::InvalidArgument(format!("KDE grid pad must be >= 0, got {}", self.pad)));
        }
        Ok(())
    }

    fn use_exact(&self, n: usize) -> bool {
        match self.method {
            KdeMethod::Exact => true,
            KdeMethod::Binned => false,
            KdeMethod::Auto => n <= EXACT_MAX_SAMPLE,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KdeSpec {
    pub bandwidth: f64,
    pub grid: KdeGrid,
}

impl KdeSpec {
    pub fn new(bandwidth: f64) -> Self {
        Self { bandwidth, grid: KdeGrid::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.bandwidth > 0.0 && self.bandwidth.is_finite()) {
            return Err(Error::InvalidArgument(format!("bandwidth must be positive, got {}", self.bandwidth)));
        }
        self.grid.validate()
    }
}

/// Number of modes of the Gaussian KDE of `sample` on its configured grid.
pub fn count_modes(sample: &Series, spec: &KdeSpec) -> Result<usize> {
    spec.validate()?;
    let mut ws = KdeWorkspace::new(spec.grid);
    Ok(ws.count_modes(sample.values(), sample.min(), sample.max(), spec.bandwidth))
}

/// Grid positions and density values of the KDE.
pub fn evaluate(sample: &Series, spec: &KdeSpec) -> Result<(Vec<f64>, Vec<f64>)> {
    spec.validate()?;
    let mut ws = KdeWorkspace::new(spec.grid);
    let (lo, step) = ws.evaluate(sample.values(), sample.min(), sample.max(), spec.bandwidth);
    let xs = (0..spec.grid.points).map(|i| lo + step * i as f64).collect();
    Ok((xs, ws.density.clone()))
}

/// Counts strict local maxima; a run of equal values counts once, and a
/// maximum at either end of the grid counts.
pub fn count_local_maxima(values: &[f64]) -> usize {
    let peak = values.iter().copied().fold(0.0, f64::max);
    let floor = peak * FLOOR_RELATIVE;
    let clamp = |v: f64| if v < floor { 0.0 } else { v };

    let mut modes = 0;
    let mut rising = true;
    let mut prev = match values.first() {
        Some(&v) => clamp(v),
        None => return 0,
    };
    for &v in &values[1..] {
        let v = clamp(v);
        if v > prev {
            rising = true;
        } else if v < prev {
            if rising {
                modes += 1;
            }
            rising = false;
        }
        prev = v;
    }
    if rising {
        modes += 1;
    }
    modes
}

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

/// Reusable buffers for repeated KDE evaluations at one grid size.
pub(crate) struct KdeWorkspace {
    grid: KdeGrid,
    density: Vec<f64>,
    fft_len: usize,
    forward: Option<Arc<dyn Fft<f64>>>,
    inverse: Option<Arc<dyn Fft<f64>>>,
    signal: Vec<Complex<f64>>,
    kernel: Vec<Complex<f64>>,
    scratch: Vec<Complex<f64>>,
}

impl KdeWorkspace {
    pub(crate) fn new(grid: KdeGrid) -> Self {
        let fft_len = (2 * grid.points).next_power_of_two();
        Self {
            grid,
            density: vec![0.0; grid.points],
            fft_len,
            forward: None,
            inverse: None,
            signal: Vec::new(),
            kernel: Vec::new(),
            scratch: Vec::new(),
        }
    }

    pub(crate) fn count_modes(&mut self, values: &[f64], min: f64, max: f64, h: f64) -> usize {
        self.evaluate(values, min, max, h);
        count_local_maxima(&self.density)
    }

    /// Fills `self.density`; returns the grid origin and step.
    fn evaluate(&mut self, values: &[f64], min: f64, max: f64, h: f64) -> (f64, f64) {
        let g = self.grid.points;
        let lo = min - self.grid.pad * h;
        let hi = max + self.grid.pad * h;
        let step = (hi - lo) / (g - 1) as f64;
        let norm = 1.0 / (values.len() as f64 * h * (2.0 * PI).sqrt());

        if self.grid.use_exact(values.len()) || step == 0.0 {
            for (i, out) in self.density.iter_mut().enumerate() {
                let t = lo + step * i as f64;
                let s: f64 = values
                    .iter()
                    .map(|x| {
                        let z = (t - x) / h;
                        (-0.5 * z * z).exp()
                    })
                    .sum();
                *out = s * norm;
            }
            return (lo, step);
        }

        self.ensure_fft();
        let len = self.fft_len;
        self.signal.clear();
        self.signal.resize(len, Complex::new(0.0, 0.0));
        for &x in values {
            let pos = (x - lo) / step;
            let i = (pos.floor() as usize).min(g - 2);
            let frac = pos - i as f64;
            self.signal[i].re += 1.0 - frac;
            self.signal[i + 1].re += frac;
        }

        self.kernel.clear();
        self.kernel.resize(len, Complex::new(0.0, 0.0));
        let ratio = step / h;
        for t in 0..g {
            let z = t as f64 * ratio;
            let k = (-0.5 * z * z).exp();
            if k == 0.0 {
                break;
            }
            self.kernel[t].re = k;
            if t > 0 {
                self.kernel[len - t].re = k;
            }
        }

        let (fwd, inv) = (self.forward.clone().unwrap(), self.inverse.clone().unwrap());
        fwd.process_with_scratch(&mut self.signal, &mut self.scratch);
        fwd.process_with_scratch(&mut self.kernel, &mut self.scratch);
        for (s, k) in self.signal.iter_mut().zip(&self.kernel) {
            *s *= *k;
        }
        inv.process_with_scratch(&mut self.signal, &mut self.scratch);
        let scale = norm / len as f64;
        for (out, s) in self.density.iter_mut().zip(&self.signal) {
            *out = s.re * scale;
        }
        (lo, step)
    }

    fn ensure_fft(&mut self) {
        if self.forward.is_some() {
            return;
        }
        let len = self.fft_len;
        let (fwd, inv) = PLANNER.with(|p| {
            let mut p = p.borrow_mut();
            (p.plan_fft_forward(len), p.plan_fft_inverse(len))
        });
        let scratch = fwd.get_inplace_scratch_len().max(inv.get_inplace_scratch_len());
        self.scratch = vec![Complex::new(0.0, 0.0); scratch];
        self.forward = Some(fwd);
        self.inverse = Some(inv);
    }
}
