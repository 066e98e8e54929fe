//! Window catalogue: the standard mollifier bump and tensor B-splines, with
//! analytic derivatives for exact seminorms, plus seeded bump-sum windows for
//! the seminorm-uniformity audit.

use crate::error::{Result, WfError};

/// Highest derivative order kept for the bump polynomial recursion. The
/// polynomials P_k grow combinatorially; orders beyond this are not needed by
/// any audit and are rejected.
pub const BUMP_SEMINORM_MAX: usize = 12;

/// chi(u) = exp(1 - 1/(1-u^2)) on |u| < 1, zero outside (unit radius, unit
/// amplitude). Exactly zero at and beyond the support boundary.
pub fn bump_profile(u: f64) -> f64 {
    if u.abs() < 1.0 {
        (1.0 - 1.0 / (1.0 - u * u)).exp()
    } else {
        0.0
    }
}

/// Coefficients (ascending) of the polynomials P_k with
/// chi^(k)(u) = P_k(u) / (1-u^2)^(2k) * chi(u).
/// Recursion: P_{k+1} = (1-u^2)[P_k' (1-u^2) + 4k u P_k] - 2u P_k.
fn bump_deriv_polys(kmax: usize) -> Vec<Vec<f64>> {
    fn mul(a: &[f64], b: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        out
    }
    fn add(a: &[f64], b: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; a.len().max(b.len())];
        for (i, &x) in a.iter().enumerate() {
            out[i] += x;
        }
        for (i, &y) in b.iter().enumerate() {
            out[i] += y;
        }
        out
    }
    fn der(a: &[f64]) -> Vec<f64> {
        if a.len() <= 1 {
            return vec![0.0];
        }
        (1..a.len()).map(|i| a[i] * i as f64).collect()
    }
    let one_minus_u2 = vec![1.0, 0.0, -1.0];
    let mut polys = vec![vec![1.0]];
    for k in 0..kmax {
        let p = polys.last().unwrap().clone();
        let term1 = mul(&one_minus_u2, &mul(&der(&p), &one_minus_u2));
        let term2 = mul(&one_minus_u2, &mul(&[0.0, 4.0 * k as f64], &p));
        let term3 = mul(&[0.0, -2.0], &p);
        polys.push(add(&add(&term1, &term2), &term3));
    }
    polys
}

fn polyval(coeffs: &[f64], u: f64) -> f64 {
    let mut acc = 0.0;
    for &c in coeffs.iter().rev() {
        acc = acc * u + c;
    }
    acc
}

/// k-th derivative of the unit bump profile.
pub fn bump_profile_deriv(k: usize, u: f64) -> f64 {
    if u.abs() >= 1.0 {
        return 0.0;
    }
    if k == 0 {
        return bump_profile(u);
    }
    let polys = bump_polys();
    let q = 1.0 - u * u;
    polyval(&polys[k], u) / q.powi(2 * k as i32) * bump_profile(u)
}

fn bump_polys() -> &'static Vec<Vec<f64>> {
    use std::sync::OnceLock;
    static POLYS: OnceLock<Vec<Vec<f64>>> = OnceLock::new();
    POLYS.get_or_init(|| bump_deriv_polys(BUMP_SEMINORM_MAX))
}

/// Cardinal B-spline of degree m, support [-(m+1)/2, (m+1)/2].
pub fn bspline_profile(m: usize, x: f64) -> f64 {
    if m == 0 {
        // centered box; the half-open convention is irrelevant off the knots
        return if (-0.5..0.5).contains(&x) { 1.0 } else { 0.0 };
    }
    let h = (m as f64 + 1.0) / 2.0;
    if x.abs() >= h {
        return 0.0;
    }
    ((x + h) * bspline_profile(m - 1, x + 0.5) + (h - x) * bspline_profile(m - 1, x - 0.5))
        / m as f64
}

/// k-th derivative of the degree-m cardinal B-spline,
/// via B_m'(x) = B_{m-1}(x + 1/2) - B_{m-1}(x - 1/2).
pub fn bspline_profile_deriv(m: usize, k: usize, x: f64) -> f64 {
    if k == 0 {
        return bspline_profile(m, x);
    }
    bspline_profile_deriv(m - 1, k - 1, x + 0.5) - bspline_profile_deriv(m - 1, k - 1, x - 0.5)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WindowKind {
    StandardBump,
    /// Degree-m B-spline (C^{m-1}); admitted for robustness audits only,
    /// since the underlying criteria require smooth windows.
    Bspline(usize),
}

/// Compactly supported window chi with chi(0) != 0. In d = 2 the bump is
/// radial and the B-spline is a tensor product with per-axis half-width
/// r/sqrt(2), so both are supported in the closed ball of radius r.
#[derive(Debug, Clone, PartialEq)]
pub struct WindowSpec {
    pub kind: WindowKind,
    pub support_radius: f64,
    pub amplitude: f64,
}

impl WindowSpec {
    pub fn bump(support_radius: f64, amplitude: f64) -> Self {
        WindowSpec { kind: WindowKind::StandardBump, support_radius, amplitude }
    }

    pub fn bspline(m: usize, support_radius: f64, amplitude: f64) -> Self {
        WindowSpec { kind: WindowKind::Bspline(m), support_radius, amplitude }
    }

    /// Differentiability class: None = smooth, Some(k) = C^k.
    pub fn smoothness(&self) -> Option<usize> {
        match self.kind {
            WindowKind::StandardBump => None,
            WindowKind::Bspline(m) => Some(m.saturating_sub(1)),
        }
    }

    pub fn id(&self) -> String {
        match self.kind {
            WindowKind::StandardBump => format!("bump:{}", self.support_radius),
            WindowKind::Bspline(m) => format!("bspline{m}:{}", self.support_radius),
        }
    }

    /// chi(t) for t in R^d (d = t.len()). Exactly zero for |t| >= r.
    pub fn eval(&self, t: &[f64]) -> f64 {
        let r = self.support_radius;
        match self.kind {
            WindowKind::StandardBump => {
                let norm = t.iter().map(|x| x * x).sum::<f64>().sqrt();
                self.amplitude * bump_profile(norm / r)
            }
            WindowKind::Bspline(m) => {
                // per-axis half-width r/sqrt(d) keeps the tensor support
                // inside the radius-r ball
                let half = r / (t.len() as f64).sqrt();
                let scale = (m as f64 + 1.0) / (2.0 * half);
                let mut v = self.amplitude;
                for &x in t {
                    v *= bspline_profile(m, x * scale);
                }
                v
            }
        }
    }

    /// k-th derivative of the 1-d profile t -> chi(t), t scalar.
    pub fn profile_deriv(&self, k: usize, t: f64) -> Result<f64> {
        match self.kind {
            WindowKind::StandardBump => {
                if k > BUMP_SEMINORM_MAX {
                    return Err(WfError::SeminormOrder { k, max: BUMP_SEMINORM_MAX });
                }
                let r = self.support_radius;
                Ok(self.amplitude * bump_profile_deriv(k, t / r) / r.powi(k as i32))
            }
            WindowKind::Bspline(m) => {
                if k + 1 > m {
                    return Err(WfError::SeminormOrder { k, max: m.saturating_sub(1) });
                }
                let scale = (m as f64 + 1.0) / (2.0 * self.support_radius);
                Ok(self.amplitude * bspline_profile_deriv(m, k, t * scale) * scale.powi(k as i32))
            }
        }
    }

    /// sup over j <= k of the sup-norm of the j-th profile derivative,
    /// computed by dense sampling with refinement until two successive grids
    /// agree to 1e-6 relative.
    pub fn seminorm(&self, k: usize) -> Result<f64> {
        let evals: Vec<Box<dyn Fn(f64) -> f64>> = (0..=k)
            .map(|j| {
                let w = self.clone();
                // surface order errors eagerly
                w.profile_deriv(j, 0.0)?;
                Ok(Box::new(move |t: f64| w.profile_deriv(j, t).unwrap()) as Box<dyn Fn(f64) -> f64>)
            })
            .collect::<Result<_>>()?;
        Ok(refine_sup(&evals, self.support_radius))
    }
}

/// sup over provided functions of |f| on [-r, r], sampled densely with grid
/// doubling until 1e-6 relative agreement.
fn refine_sup(fs: &[Box<dyn Fn(f64) -> f64>], r: f64) -> f64 {
    let mut m = 20_001usize;
    let mut prev = -1.0f64;
    loop {
        let mut sup = 0.0f64;
        for i in 0..m {
            let t = -r + 2.0 * r * i as f64 / (m - 1) as f64;
            for f in fs {
                sup = sup.max(f(t).abs());
            }
        }
        if prev >= 0.0 && (sup - prev).abs() <= 1e-6 * sup.max(1e-300) {
            return sup;
        }
        prev = sup;
        m = m * 2 - 1;
        if m > 1_300_000 {
            return sup;
        }
    }
}

/// One translated, scaled copy of the standard bump.
#[derive(Debug, Clone, PartialEq)]
pub struct BumpAtom {
    pub amplitude: f64,
    pub center: f64,
    pub radius: f64,
}

/// A finite sum of bump atoms, used as a random test window drawn from
/// D_{K - {x0}} for the seminorm-uniformity audit (d = 1). These windows
/// need not satisfy chi(0) != 0.
#[derive(Debug, Clone, PartialEq)]
pub struct AuditWindow {
    pub atoms: Vec<BumpAtom>,
}

impl AuditWindow {
    /// Radius of the smallest ball around 0 containing the support.
    pub fn support_radius(&self) -> f64 {
        self.atoms
            .iter()
            .map(|a| a.center.abs() + a.radius)
            .fold(0.0, f64::max)
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.atoms
            .iter()
            .map(|a| a.amplitude * bump_profile((t - a.center) / a.radius))
            .sum()
    }

    pub fn deriv(&self, k: usize, t: f64) -> f64 {
        self.atoms
            .iter()
            .map(|a| {
                a.amplitude * bump_profile_deriv(k, (t - a.center) / a.radius)
                    / a.radius.powi(k as i32)
            })
            .sum()
    }

    /// sup over j <= k of the profile-derivative sup-norms (dense sampling
    /// with refinement, as for WindowSpec).
    pub fn seminorm(&self, k: usize) -> f64 {
        let r = self.support_radius();
        let fs: Vec<Box<dyn Fn(f64) -> f64>> = (0..=k)
            .map(|j| {
                let w = self.clone();
                Box::new(move |t: f64| w.deriv(j, t)) as Box<dyn Fn(f64) -> f64>
            })
            .collect();
        refine_sup(&fs, r)
    }
}

/// Anything the transform engine can use as a window: the canonical
/// catalogue or an audit bump sum.
pub trait WindowFn: Sync {
    fn radius(&self) -> f64;
    fn eval_at(&self, t: &[f64]) -> f64;
    fn window_id(&self) -> String;
}

impl WindowFn for WindowSpec {
    fn radius(&self) -> f64 {
        self.support_radius
    }
    fn eval_at(&self, t: &[f64]) -> f64 {
        self.eval(t)
    }
    fn window_id(&self) -> String {
        self.id()
    }
}

impl WindowFn for AuditWindow {
    fn radius(&self) -> f64 {
        self.support_radius()
    }
    fn eval_at(&self, t: &[f64]) -> f64 {
        self.eval(t[0])
    }
    fn window_id(&self) -> String {
        format!("audit-sum[{}]", self.atoms.len())
    }
}
