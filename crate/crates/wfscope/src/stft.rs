//! Discrete short-time Fourier transform under the convention
//! Fg(xi) = integral e^{-i x xi} g(x) dx (no 2 pi normalization), realized by
//! FFT with fftshift ordering and origin phase correction, plus closed-form
//! oracles and the Plancherel health check.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};

use crate::error::{Result, WfError};
use crate::grid::{Grid, SampledSignal};
use crate::window::{WindowFn, WindowSpec};

/// Fraction of the Nyquist angular frequency kept for decay analysis.
pub const DEFAULT_CAP_FACTOR: f64 = 0.4;

/// Aliasing-safe frequency cap for a grid of spacing dx.
pub fn aliasing_cap(dx: f64, cap_factor: f64) -> f64 {
    cap_factor * PI / dx
}

/// Dual-grid axis frequencies in fftshift (ascending) order:
/// xi_m = (m - N/2) * dxi with dxi = 2 pi / (N dx).
pub fn dual_axis_freqs(n: usize, dx: f64) -> Vec<f64> {
    let dxi = 2.0 * PI / (n as f64 * dx);
    (0..n).map(|m| (m as f64 - n as f64 / 2.0) * dxi).collect()
}

/// The capped dual grid: frequencies xi on the FFT dual lattice with
/// |xi| <= cap, in ascending flat (row-major) order.
#[derive(Debug, Clone)]
pub struct FreqGrid {
    dim: usize,
    dxi: f64,
    cap: f64,
    /// kept frequencies, packed `dim` coordinates per entry
    xis: Vec<f64>,
    norms: Vec<f64>,
    /// per-axis shifted indices of each kept entry, packed like `xis`
    axis_idx: Vec<usize>,
    /// flat index into the unshifted DFT array for each kept entry
    dft_idx: Vec<usize>,
}

impl FreqGrid {
    pub fn new(grid: &Grid, cap_factor: f64) -> Result<Self> {
        let n = grid.n();
        let dx = grid.dx();
        let cap = aliasing_cap(dx, cap_factor);
        let axis = dual_axis_freqs(n, dx);
        let dxi = 2.0 * PI / (n as f64 * dx);
        let mut xis = Vec::new();
        let mut norms = Vec::new();
        let mut axis_idx = Vec::new();
        let mut dft_idx = Vec::new();
        match grid.dim() {
            1 => {
                for (m, &xi) in axis.iter().enumerate() {
                    if xi.abs() <= cap {
                        xis.push(xi);
                        norms.push(xi.abs());
                        axis_idx.push(m);
                        dft_idx.push((m + n / 2) % n);
                    }
                }
            }
            2 => {
                for (m1, &x1) in axis.iter().enumerate() {
                    if x1.abs() > cap {
                        continue;
                    }
                    for (m2, &x2) in axis.iter().enumerate() {
                        let norm = (x1 * x1 + x2 * x2).sqrt();
                        if norm <= cap {
                            xis.push(x1);
                            xis.push(x2);
                            norms.push(norm);
                            axis_idx.push(m1);
                            axis_idx.push(m2);
                            dft_idx.push(((m1 + n / 2) % n) * n + (m2 + n / 2) % n);
                        }
                    }
                }
            }
            _ => unreachable!(),
        }
        if norms.is_empty() {
            return Err(WfError::InvalidConfig(format!(
                "aliasing cap {cap:.3} excludes every dual-grid frequency (dxi = {dxi:.3})"
            )));
        }
        Ok(FreqGrid { dim: grid.dim(), dxi, cap, xis, norms, axis_idx, dft_idx })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.norms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.norms.is_empty()
    }

    /// Dual-grid spacing (per axis).
    pub fn dxi(&self) -> f64 {
        self.dxi
    }

    pub fn cap(&self) -> f64 {
        self.cap
    }

    pub fn xi(&self, q: usize) -> &[f64] {
        &self.xis[q * self.dim..(q + 1) * self.dim]
    }

    pub fn norm(&self, q: usize) -> f64 {
        self.norms[q]
    }

    pub fn norms(&self) -> &[f64] {
        &self.norms
    }

    fn axis_index(&self, q: usize, axis: usize) -> usize {
        self.axis_idx[q * self.dim + axis]
    }
}

fn transpose_square(data: &mut [Complex64], n: usize) {
    for i in 0..n {
        for j in (i + 1)..n {
            data.swap(i * n + j, j * n + i);
        }
    }
}

/// In-place forward DFT over all axes (unshifted output order).
fn dft_inplace(dim: usize, n: usize, fft: &Arc<dyn Fft<f64>>, buf: &mut [Complex64]) {
    let mut scratch = vec![Complex64::new(0.0, 0.0); fft.get_inplace_scratch_len()];
    match dim {
        1 => fft.process_with_scratch(buf, &mut scratch),
        2 => {
            fft.process_with_scratch(buf, &mut scratch);
            transpose_square(buf, n);
            fft.process_with_scratch(buf, &mut scratch);
            transpose_square(buf, n);
        }
        _ => unreachable!(),
    }
}

fn max_abs(samples: &[Complex64]) -> f64 {
    samples.iter().map(|v| v.norm()).fold(0.0, f64::max)
}

fn boundary_max_abs(grid: &Grid, samples: &[Complex64]) -> f64 {
    let n = grid.n();
    match grid.dim() {
        1 => samples[0].norm().max(samples[n - 1].norm()),
        2 => {
            let mut m = 0.0f64;
            for i in 0..n {
                m = m.max(samples[i].norm()); // first row
                m = m.max(samples[(n - 1) * n + i].norm()); // last row
                m = m.max(samples[i * n].norm()); // first column
                m = m.max(samples[i * n + n - 1].norm()); // last column
            }
            m
        }
        _ => unreachable!(),
    }
}

/// Riemann-sum Fourier transform on the full (fftshifted) dual grid:
/// F(xi_m) = dx^d * e^{-i t0 . xi_m} * DFT(g)[m], ascending xi order.
///
/// Errors if the signal support touches the grid boundary (cyclic wraparound
/// would corrupt decay estimates).
pub fn fourier_transform(g: &SampledSignal) -> Result<Vec<Complex64>> {
    let grid = &g.grid;
    let peak = max_abs(&g.samples);
    if peak > 0.0 {
        let edge = boundary_max_abs(grid, &g.samples);
        let ratio = edge / peak;
        if ratio >= 1e-12 {
            return Err(WfError::SupportTouchesBoundary { ratio });
        }
    }
    let mut planner = FftPlanner::new();
    let fft = planner.plan_fft_forward(grid.n());
    let mut buf = g.samples.clone();
    dft_inplace(grid.dim(), grid.n(), &fft, &mut buf);
    Ok(shift_and_phase(grid, &buf))
}

/// Reorder an unshifted DFT array to ascending-frequency order and apply the
/// Riemann normalization dx^d and origin phase e^{-i t0 . xi}.
fn shift_and_phase(grid: &Grid, dft: &[Complex64]) -> Vec<Complex64> {
    let n = grid.n();
    let axis = dual_axis_freqs(n, grid.dx());
    let scale = grid.dx().powi(grid.dim() as i32);
    match grid.dim() {
        1 => {
            let t0 = grid.origin()[0];
            (0..n)
                .map(|m| {
                    let phase = Complex64::from_polar(1.0, -t0 * axis[m]);
                    scale * phase * dft[(m + n / 2) % n]
                })
                .collect()
        }
        2 => {
            let (t1, t2) = (grid.origin()[0], grid.origin()[1]);
            let p1: Vec<Complex64> =
                axis.iter().map(|&x| Complex64::from_polar(1.0, -t1 * x)).collect();
            let p2: Vec<Complex64> =
                axis.iter().map(|&x| Complex64::from_polar(1.0, -t2 * x)).collect();
            let mut out = vec![Complex64::new(0.0, 0.0); n * n];
            for m1 in 0..n {
                let r = (m1 + n / 2) % n;
                for m2 in 0..n {
                    out[m1 * n + m2] =
                        scale * p1[m1] * p2[m2] * dft[r * n + (m2 + n / 2) % n];
                }
            }
            out
        }
        _ => unreachable!(),
    }
}

/// V_chi f(x, xi) sampled over a position set K and the capped dual grid.
#[derive(Debug, Clone)]
pub struct StftTable {
    pub positions: Vec<Vec<f64>>,
    pub freq: FreqGrid,
    /// position-major: values[p * freq.len() + q]
    pub values: Vec<Complex64>,
    pub window_id: String,
    pub source_label: String,
}

impl StftTable {
    pub fn row(&self, p: usize) -> &[Complex64] {
        let q = self.freq.len();
        &self.values[p * q..(p + 1) * q]
    }

    pub fn value(&self, p: usize, q: usize) -> Complex64 {
        self.values[p * self.freq.len() + q]
    }

    pub fn global_max_abs(&self) -> f64 {
        max_abs(&self.values)
    }
}

/// The STFT V_chi f(x, xi) = F_{t -> xi}( f(t) conj(chi(t - x)) ) for every
/// position in `positions`, restricted to the capped dual grid.
///
/// Every translated window support must lie inside the grid; offending
/// positions are reported individually. The per-position loop runs in
/// parallel with disjoint output rows, so results are bitwise independent of
/// the schedule.
pub fn stft_discrete<W: WindowFn + ?Sized>(
    f: &SampledSignal,
    window: &W,
    positions: &[Vec<f64>],
    cap_factor: f64,
) -> Result<StftTable> {
    let grid = &f.grid;
    let d = grid.dim();
    let n = grid.n();
    let r = window.radius();
    for x in positions {
        if x.len() != d {
            return Err(WfError::InvalidConfig(format!(
                "position {x:?} has dimension {} but the grid is {d}-dimensional",
                x.len()
            )));
        }
        for a in 0..d {
            if x[a] - r < grid.origin()[a] - 1e-12 || x[a] + r > grid.max_coord(a) + 1e-12 {
                return Err(WfError::WindowOverhang {
                    position: x.to_vec(),
                    radius: r,
                });
            }
        }
    }
    let freq = FreqGrid::new(grid, cap_factor)?;
    let q = freq.len();

    // The phase/normalization factor is position-independent: precompute per
    // kept frequency.
    let axis = dual_axis_freqs(n, grid.dx());
    let scale = grid.dx().powi(d as i32);
    let phase: Vec<Complex64> = (0..q)
        .map(|k| {
            let mut arg = 0.0;
            for a in 0..d {
                arg -= grid.origin()[a] * axis[freq.axis_index(k, a)];
            }
            scale * Complex64::from_polar(1.0, arg)
        })
        .collect();

    let mut planner = FftPlanner::new();
    let fft = planner.plan_fft_forward(n);

    let mut values = vec![Complex64::new(0.0, 0.0); positions.len() * q];
    values
        .par_chunks_mut(q.max(1))
        .zip(positions.par_iter())
        .for_each(|(row, x)| {
            let mut buf = vec![Complex64::new(0.0, 0.0); grid.len()];
            // f(t) conj(chi(t - x)) on the support box of the window
            let lo: Vec<i64> = (0..d)
                .map(|a| (((x[a] - r) - grid.origin()[a]) / grid.dx()).ceil() as i64)
                .collect();
            let hi: Vec<i64> = (0..d)
                .map(|a| (((x[a] + r) - grid.origin()[a]) / grid.dx()).floor() as i64)
                .collect();
            let clamp = |v: i64| v.clamp(0, n as i64 - 1) as usize;
            match d {
                1 => {
                    let mut t = [0.0f64];
                    for j in clamp(lo[0])..=clamp(hi[0]) {
                        t[0] = grid.coord(0, j) - x[0];
                        // the catalogue windows are real-valued, so the
                        // conjugate in f(t) conj(chi(t-x)) is the identity
                        let w = window.eval_at(&t);
                        if w != 0.0 {
                            buf[j] = f.samples[j] * w;
                        }
                    }
                }
                2 => {
                    let mut t = [0.0f64; 2];
                    for j1 in clamp(lo[0])..=clamp(hi[0]) {
                        t[0] = grid.coord(0, j1) - x[0];
                        for j2 in clamp(lo[1])..=clamp(hi[1]) {
                            t[1] = grid.coord(1, j2) - x[1];
                            let w = window.eval_at(&t);
                            if w != 0.0 {
                                let idx = j1 * n + j2;
                                buf[idx] = f.samples[idx] * w;
                            }
                        }
                    }
                }
                _ => unreachable!(),
            }
            dft_inplace(d, n, &fft, &mut buf);
            for k in 0..q {
                row[k] = phase[k] * buf[freq.dft_idx[k]];
            }
        });

    Ok(StftTable {
        positions: positions.to_vec(),
        freq,
        values,
        window_id: window.window_id(),
        source_label: f.label.clone(),
    })
}

/// Corpus members with a tractable exact STFT.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClosedFormDist {
    /// Dirac delta at the origin: V_chi delta(x, xi) = conj(chi(-x)).
    Delta,
    /// Standard Gaussian e^{-t^2/2} (d = 1): defining integral by adaptive
    /// quadrature to 1e-10.
    Gaussian,
}

fn adaptive_simpson<F: Fn(f64) -> Complex64>(
    f: &F,
    a: f64,
    b: f64,
    fa: Complex64,
    fm: Complex64,
    fb: Complex64,
    whole: Complex64,
    tol: f64,
    depth: u32,
) -> Complex64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let h = b - a;
    let left = (h / 12.0) * (fa + 4.0 * flm + fm);
    let right = (h / 12.0) * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.norm() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    adaptive_simpson(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
        + adaptive_simpson(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
}

/// Adaptive Simpson quadrature of a complex integrand.
pub fn integrate_complex<F: Fn(f64) -> Complex64>(f: F, a: f64, b: f64, tol: f64) -> Complex64 {
    if a == b {
        return Complex64::new(0.0, 0.0);
    }
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    let whole = ((b - a) / 6.0) * (fa + 4.0 * fm + fb);
    adaptive_simpson(&f, a, b, fa, fm, fb, whole, tol, 48)
}

/// Exact V_chi f(x, xi) for the closed-form members.
pub fn stft_closed_form(
    dist: ClosedFormDist,
    chi: &WindowSpec,
    x: &[f64],
    xi: &[f64],
) -> Result<Complex64> {
    match dist {
        ClosedFormDist::Delta => {
            let neg_x: Vec<f64> = x.iter().map(|v| -v).collect();
            Ok(Complex64::new(chi.eval(&neg_x), 0.0))
        }
        ClosedFormDist::Gaussian => {
            if x.len() != 1 || xi.len() != 1 {
                return Err(WfError::UnsupportedClosedForm {
                    name: "gaussian (only d = 1)".into(),
                });
            }
            let (x0, xi0) = (x[0], xi[0]);
            let r = chi.support_radius;
            let integrand = |t: f64| {
                let w = chi.eval(&[t - x0]);
                Complex64::from_polar((-0.5 * t * t).exp() * w, -t * xi0)
            };
            Ok(integrate_complex(integrand, x0 - r, x0 + r, 1e-10))
        }
    }
}

/// Relative Plancherel defect
/// | double-int |V|^2 dx dxi - (2 pi)^d ||f||^2 ||chi||^2 | / ((2 pi)^d ...),
/// computed with full-grid positions (cyclic window translation, the discrete
/// torus analogue) and Riemann sums over the full dual grid. Returns 0 for
/// the zero signal.
pub fn parseval_check(f: &SampledSignal, chi: &WindowSpec) -> Result<f64> {
    let grid = &f.grid;
    let d = grid.dim();
    let n = grid.n();
    let dx = grid.dx();
    if 2.0 * chi.support_radius >= n as f64 * dx {
        return Err(WfError::InvalidConfig(format!(
            "window diameter {} does not fit the periodic domain width {}",
            2.0 * chi.support_radius,
            n as f64 * dx
        )));
    }
    let f_norm2: f64 = f.samples.iter().map(|v| v.norm_sqr()).sum::<f64>() * dx.powi(d as i32);
    if f_norm2 == 0.0 {
        return Ok(0.0);
    }
    // cyclic window kernel chi((j - k) dx) with signed wrap
    let signed = |j: usize| -> f64 {
        let j = j as i64;
        let half = n as i64 / 2;
        (if j <= half { j } else { j - n as i64 }) as f64 * dx
    };
    let kernel: Vec<f64> = match d {
        1 => (0..n).map(|j| chi.eval(&[signed(j)])).collect(),
        2 => {
            let mut k = Vec::with_capacity(n * n);
            for j1 in 0..n {
                for j2 in 0..n {
                    k.push(chi.eval(&[signed(j1), signed(j2)]));
                }
            }
            k
        }
        _ => unreachable!(),
    };
    let chi_norm2: f64 = kernel.iter().map(|w| w * w).sum::<f64>() * dx.powi(d as i32);
    let rhs = (2.0 * PI).powi(d as i32) * f_norm2 * chi_norm2;

    let mut planner = FftPlanner::new();
    let fft = planner.plan_fft_forward(n);
    // per-position partial sums land in fixed slots and are reduced
    // sequentially, so the result is schedule-independent
    let mut partials = vec![0.0f64; grid.len()];
    partials
        .par_iter_mut()
        .enumerate()
        .for_each(|(k, out)| {
            let mut buf = vec![Complex64::new(0.0, 0.0); grid.len()];
            match d {
                1 => {
                    for j in 0..n {
                        let w = kernel[(j + n - k) % n];
                        buf[j] = f.samples[j] * w;
                    }
                }
                2 => {
                    let (k1, k2) = (k / n, k % n);
                    for j1 in 0..n {
                        let r1 = ((j1 + n - k1) % n) * n;
                        for j2 in 0..n {
                            let w = kernel[r1 + (j2 + n - k2) % n];
                            buf[j1 * n + j2] = f.samples[j1 * n + j2] * w;
                        }
                    }
                }
                _ => unreachable!(),
            }
            dft_inplace(d, n, &fft, &mut buf);
            *out = buf.iter().map(|v| v.norm_sqr()).sum::<f64>();
        });
    let total: f64 = partials.iter().sum();
    // |V|^2 = dx^{2d} |DFT|^2; position and frequency Riemann weights dx^d, dxi^d
    let dxi = 2.0 * PI / (n as f64 * dx);
    let lhs = total * dx.powi(2 * d as i32) * dx.powi(d as i32) * dxi.powi(d as i32);
    Ok((lhs - rhs).abs() / rhs)
}
