//! Open circular cones in frequency space, phase-space points, and the
//! fattening/nesting geometry of co-axial cone pairs.

use crate::error::{Result, WfError};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Nesting constants are clipped strictly below 1 (the inclusion needs c < 1).
pub const NESTING_CLIP: f64 = 1.0 - 1e-9;

/// Open convex circular cone: axis direction plus half-angle. In d = 1 the
/// cone is the half-line of the axis sign and the half-angle is ignored.
#[derive(Debug, Clone, PartialEq)]
pub struct Cone {
    dim: usize,
    axis: Vec<f64>,
    half_angle: f64,
}

impl Cone {
    /// Build a cone from a (not necessarily unit) axis and half-angle in
    /// (0, pi/2]. The axis is normalized.
    pub fn new(axis: &[f64], half_angle: f64) -> Result<Self> {
        let dim = axis.len();
        if dim != 1 && dim != 2 {
            return Err(WfError::InvalidConePair {
                reason: format!("cone dimension must be 1 or 2, got {dim}"),
            });
        }
        let norm = axis.iter().map(|a| a * a).sum::<f64>().sqrt();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(WfError::InvalidConePair {
                reason: "cone axis must be a nonzero finite vector".into(),
            });
        }
        if !(half_angle > 0.0 && half_angle <= std::f64::consts::FRAC_PI_2) {
            return Err(WfError::InvalidConePair {
                reason: format!("half-angle must lie in (0, pi/2], got {half_angle}"),
            });
        }
        Ok(Cone {
            dim,
            axis: axis.iter().map(|a| a / norm).collect(),
            half_angle,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn axis(&self) -> &[f64] {
        &self.axis
    }

    pub fn half_angle(&self) -> f64 {
        self.half_angle
    }

    /// Strict membership: xi != 0 and angle(xi, axis) < theta (d >= 2),
    /// or sign(xi) = sign(axis) (d = 1).
    pub fn contains(&self, xi: &[f64]) -> bool {
        debug_assert_eq!(xi.len(), self.dim);
        let norm2 = xi.iter().map(|a| a * a).sum::<f64>();
        if norm2 == 0.0 {
            return false;
        }
        if self.dim == 1 {
            return xi[0] * self.axis[0] > 0.0;
        }
        let dot: f64 = xi.iter().zip(&self.axis).map(|(a, b)| a * b).sum();
        dot > norm2.sqrt() * self.half_angle.cos()
    }
}

/// Free-function form of cone membership.
pub fn cone_contains(cone: &Cone, xi: &[f64]) -> bool {
    cone.contains(xi)
}

/// A position x0 together with a unit frequency direction.
#[derive(Debug, Clone, PartialEq)]
pub struct PhasePoint {
    pub x: Vec<f64>,
    pub direction: Vec<f64>,
}

impl PhasePoint {
    pub fn new(x: &[f64], direction: &[f64]) -> Result<Self> {
        if x.len() != direction.len() {
            return Err(WfError::InvalidConePair {
                reason: "phase point position and direction dimensions differ".into(),
            });
        }
        let norm = direction.iter().map(|a| a * a).sum::<f64>().sqrt();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(WfError::InvalidConePair {
                reason: "phase point direction must be nonzero".into(),
            });
        }
        Ok(PhasePoint {
            x: x.to_vec(),
            direction: direction.iter().map(|a| a / norm).collect(),
        })
    }
}

/// Largest c in (0,1) such that the fattened set
/// {eta | exists xi in Gamma with |xi - eta| <= c|xi|} stays inside Gamma'.
/// Co-axial circular cones only; closed form c = sin(theta' - theta),
/// clipped to 1 - 1e-9 (d = 1 with equal signs is the pure clip case).
pub fn max_nesting_constant(inner: &Cone, outer: &Cone) -> Result<f64> {
    if inner.dim != outer.dim {
        return Err(WfError::InvalidConePair {
            reason: "cone pair dimensions differ".into(),
        });
    }
    let dot: f64 = inner.axis.iter().zip(&outer.axis).map(|(a, b)| a * b).sum();
    if (dot - 1.0).abs() > 1e-12 {
        return Err(WfError::InvalidConePair {
            reason: "cone pair must be co-axial (same axis direction)".into(),
        });
    }
    if inner.dim == 1 {
        // fattening of a half-line by any c < 1 stays in the same half-line
        return Ok(NESTING_CLIP);
    }
    let (theta, theta_p) = (inner.half_angle, outer.half_angle);
    if theta >= theta_p {
        return Err(WfError::InvalidConePair {
            reason: format!(
                "inner half-angle {theta} must be strictly less than outer {theta_p}"
            ),
        });
    }
    Ok((theta_p - theta).sin().min(NESTING_CLIP))
}

/// Co-axial cone pair carrying its nesting constant.
#[derive(Debug, Clone, PartialEq)]
pub struct ConePair {
    pub inner: Cone,
    pub outer: Cone,
    pub nesting: f64,
}

impl ConePair {
    pub fn new(inner: Cone, outer: Cone) -> Result<Self> {
        let nesting = max_nesting_constant(&inner, &outer)?;
        Ok(ConePair { inner, outer, nesting })
    }
}

/// A witness that the c-fattening of the inner cone escapes the outer cone.
#[derive(Debug, Clone, PartialEq)]
pub struct FatteningCounterexample {
    /// The inner-cone point whose fattening ball escapes.
    pub xi: Vec<f64>,
    /// The escaped point with |xi - eta| <= c|xi| but eta outside Gamma'.
    pub eta: Vec<f64>,
}

/// Outcome of a fattening sampling check.
#[derive(Debug, Clone, PartialEq)]
pub struct FatteningCheck {
    pub ok: bool,
    pub counterexample: Option<FatteningCounterexample>,
    pub samples_checked: u64,
}

fn rotate2(v: &[f64], alpha: f64) -> Vec<f64> {
    let (s, c) = alpha.sin_cos();
    vec![v[0] * c - v[1] * s, v[0] * s + v[1] * c]
}

/// Check by sampling that the c-fattening of `inner` lies inside `outer`.
///
/// Each random draw takes xi in the inner cone at a log-uniform scale in
/// [1e-3, 1e3] and a uniform unit vector u, and tests eta = xi + c|xi| u
/// together with the proof's shifted form xi - c|xi| u. A small set of
/// deterministic extremal probes (tangent points of the fattening ball at
/// near-boundary rays) runs first, so any c above the true nesting constant
/// by a workable margin is refuted without luck. Returns the first
/// counterexample found, if any.
pub fn fattening_sample_check(
    inner: &Cone,
    outer: &Cone,
    c: f64,
    n_samples: u64,
    seed: u64,
) -> FatteningCheck {
    fn fail(xi: &[f64], eta: &[f64], checked: u64) -> FatteningCheck {
        FatteningCheck {
            ok: false,
            counterexample: Some(FatteningCounterexample {
                xi: xi.to_vec(),
                eta: eta.to_vec(),
            }),
            samples_checked: checked,
        }
    }
    let mut checked = 0u64;
    // negative c degenerates to c = 0, i.e. the cone itself
    let c = c.max(0.0);

    // Deterministic extremal probes.
    let probe_scales = [1e-3, 1.0, 1e3];
    if inner.dim == 1 {
        for &scale in &probe_scales {
            let xi = vec![inner.axis[0] * scale];
            for sgn in [-1.0, 1.0] {
                let eta = vec![xi[0] + sgn * c * scale];
                checked += 1;
                if !outer.contains(&eta) {
                    return fail(&xi, &eta, checked);
                }
            }
        }
    } else {
        // near-boundary rays of the open inner cone
        let ray_angles = [
            0.0,
            inner.half_angle * (1.0 - 1e-9),
            -inner.half_angle * (1.0 - 1e-9),
        ];
        for &scale in &probe_scales {
            for &phi in &ray_angles {
                let xi_hat = rotate2(&inner.axis, phi);
                let xi: Vec<f64> = xi_hat.iter().map(|a| a * scale).collect();
                if c >= 1.0 {
                    // the fattening ball reaches the origin, which no cone contains
                    let eta = vec![0.0, 0.0];
                    checked += 1;
                    return fail(&xi, &eta, checked);
                }
                // tangent points of the radius-c|xi| ball: the fattened set's
                // extreme angle from the axis is angle(xi) + asin(c)
                let beta = c.asin();
                for sgn in [-1.0, 1.0] {
                    let eta: Vec<f64> = rotate2(&xi_hat, sgn * beta)
                        .iter()
                        .map(|a| a * scale * beta.cos())
                        .collect();
                    checked += 1;
                    if !outer.contains(&eta) {
                        return fail(&xi, &eta, checked);
                    }
                }
            }
        }
    }

    // Monte-Carlo samples.
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ln_lo = (1e-3f64).ln();
    let ln_hi = (1e3f64).ln();
    for _ in 0..n_samples {
        let scale = rng.gen_range(ln_lo..ln_hi).exp();
        let (xi, u): (Vec<f64>, Vec<f64>) = if inner.dim == 1 {
            (
                vec![inner.axis[0] * scale],
                vec![if rng.gen::<bool>() { 1.0 } else { -1.0 }],
            )
        } else {
            let phi = rng.gen_range(-1.0f64..1.0) * inner.half_angle * (1.0 - 1e-12);
            let xi_hat = rotate2(&inner.axis, phi);
            let psi = rng.gen_range(0.0..std::f64::consts::TAU);
            (
                xi_hat.iter().map(|a| a * scale).collect(),
                vec![psi.cos(), psi.sin()],
            )
        };
        let r = c * scale;
        for sgn in [1.0, -1.0] {
            // sgn = +1 is the Eq.-style point, sgn = -1 the shifted form
            let eta: Vec<f64> = xi.iter().zip(&u).map(|(a, b)| a + sgn * r * b).collect();
            checked += 1;
            if !outer.contains(&eta) {
                return fail(&xi, &eta, checked);
            }
        }
    }

    FatteningCheck {
        ok: true,
        counterexample: None,
        samples_checked: checked,
    }
}
