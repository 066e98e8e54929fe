//! Top-level detectors: classify phase-space points as microlocally
//! Regular/Singular (smooth or Sobolev mode), build wave-front maps, and run
//! the window-robustness and seminorm-uniformity audits.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cone::{Cone, PhasePoint};
use crate::decay::{
    decay_exponent, shell_stats_for, sobolev_cone_norm, tail_convergence_verdict, DecayFit,
    TailVerdict, DEFAULT_RHO_TOL,
};
use crate::error::{Result, WfError};
use crate::grid::SampledSignal;
use crate::shell::ShellPartition;
use crate::stft::{stft_discrete, StftTable, DEFAULT_CAP_FACTOR};
use crate::window::{AuditWindow, BumpAtom, WindowFn, WindowSpec};

/// Default rapid-decay surrogate threshold for the "for every n" quantifier.
pub const DEFAULT_N_THRESHOLD: f64 = 6.0;

/// Fixed support radius of the atoms drawn by the seminorm audit.
pub const AUDIT_ATOM_RADIUS: f64 = 0.2;

/// Detection mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Mode {
    Smooth,
    Sobolev(f64),
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Mode::Smooth => write!(f, "smooth"),
            Mode::Sobolev(s) => write!(f, "sobolev(s={s})"),
        }
    }
}

/// Three-valued classification of a phase-space point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Regular,
    Singular,
    Inconclusive,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Verdict::Regular => write!(f, "regular"),
            Verdict::Singular => write!(f, "singular"),
            Verdict::Inconclusive => write!(f, "inconclusive"),
        }
    }
}

/// The constructive witnesses used by the detector: K = ball(x0, k_radius)
/// on grid nodes, Gamma = circular cone of half-angle cone_angle/2 around the
/// scan direction, chi from the window catalogue.
#[derive(Debug, Clone)]
pub struct DetectorConfig {
    /// half-width of the position ball K
    pub k_radius: f64,
    /// scan cone half-angle theta'; detection uses the inner theta'/2
    pub cone_angle: f64,
    pub window: WindowSpec,
    pub shells: ShellPartition,
    /// smooth mode: Regular iff n_hat >= n_threshold or the floor was hit
    pub n_threshold: f64,
    /// Some(s) switches wf_map to Sobolev mode at order s
    pub s: Option<f64>,
    pub rho_tol: f64,
    pub cap_factor: f64,
}

/// The stock configuration is tuned so that out of the box, on a desk-scale
/// 1-d grid (N = 2^14, dx = 2^-9, aliasing cap ~ 643), the detector can
/// tell a genuinely smooth neighbourhood from one containing a jump half a
/// unit away:
///
/// * window support plus K radius is exactly 0.5, so scanning 0.5 away from
///   a feature keeps the feature outside every localized product;
/// * the window is a degree-8 B-spline rather than a bump. A bump's
///   transform decays like exp(-c sqrt(r xi)); below the aliasing cap its
///   fitted slope tops out near 5 (and sits ~7 decades above the 1e-13
///   floor), so with n_threshold = 6 a bump can never certify rapid decay
///   at this scale. The B-spline's (sin u / u)^9 tail reads as a clean
///   power law n_hat ~ 8-9 >= 6, while the singular laws (xi^0, xi^-1,
///   xi^-2) are far below threshold either way;
/// * shells start at 32 so the fitted octaves sit past the window's
///   spectral main lobe (first zero near xi = 63) and still leave the four
///   partial sums Sobolev tails need.
impl Default for DetectorConfig {
    fn default() -> Self {
        DetectorConfig {
            k_radius: 0.05,
            cone_angle: std::f64::consts::FRAC_PI_4,
            window: WindowSpec::bspline(8, 0.45, 1.0),
            shells: ShellPartition::new(32.0, 4).unwrap(),
            n_threshold: DEFAULT_N_THRESHOLD,
            s: None,
            rho_tol: DEFAULT_RHO_TOL,
            cap_factor: DEFAULT_CAP_FACTOR,
        }
    }
}

impl DetectorConfig {
    /// The inner detection cone half-angle (theta = theta'/2).
    pub fn inner_angle(&self) -> f64 {
        0.5 * self.cone_angle
    }

    pub fn mode(&self) -> Mode {
        match self.s {
            None => Mode::Smooth,
            Some(s) => Mode::Sobolev(s),
        }
    }
}

/// Verdict plus full diagnostics for one phase-space point.
#[derive(Debug, Clone)]
pub struct MicrolocalVerdict {
    pub point: PhasePoint,
    pub mode: Mode,
    pub verdict: Verdict,
    /// smooth mode: fitted exponent (+infinity = faster than measurable)
    pub n_hat: Option<f64>,
    /// smooth mode: max log-deviation of the fit
    pub residual: Option<f64>,
    /// smooth mode: some shell was clipped at the numerical floor
    pub floor_hit: Option<bool>,
    pub shells_used: Option<usize>,
    /// Sobolev mode: the tail verdict behind the classification
    pub tail: Option<TailVerdict>,
    pub window_id: String,
    /// set when the verdict is Inconclusive because of a propagated error
    pub reason: Option<String>,
}

impl MicrolocalVerdict {
    fn inconclusive(point: &PhasePoint, mode: Mode, window_id: String, reason: String) -> Self {
        MicrolocalVerdict {
            point: point.clone(),
            mode,
            verdict: Verdict::Inconclusive,
            n_hat: None,
            residual: None,
            floor_hit: None,
            shells_used: None,
            tail: None,
            window_id,
            reason: Some(reason),
        }
    }
}

pub(crate) fn k_positions(f: &SampledSignal, x0: &[f64], radius: f64) -> Result<Vec<Vec<f64>>> {
    if x0.len() != f.grid.dim() {
        return Err(WfError::InvalidConfig(format!(
            "point dimension {} does not match the {}-dimensional grid",
            x0.len(),
            f.grid.dim()
        )));
    }
    let nodes = f.grid.ball_nodes(x0, radius);
    if nodes.is_empty() {
        return Err(WfError::InvalidConfig(format!(
            "K = ball({x0:?}, {radius}) contains no grid nodes (dx = {})",
            f.grid.dx()
        )));
    }
    Ok(nodes)
}

pub(crate) fn build_table(f: &SampledSignal, cfg: &DetectorConfig, x0: &[f64]) -> Result<StftTable> {
    let positions = k_positions(f, x0, cfg.k_radius)?;
    stft_discrete(f, &cfg.window, &positions, cfg.cap_factor)
}

pub(crate) fn all_rows(table: &StftTable) -> Vec<usize> {
    (0..table.positions.len()).collect()
}

fn smooth_fit(table: &StftTable, cfg: &DetectorConfig, p: &PhasePoint) -> Result<DecayFit> {
    let cone = Cone::new(&p.direction, cfg.inner_angle())?;
    let stats = shell_stats_for(table, &all_rows(table), &cone, &cfg.shells)?;
    decay_exponent(&stats)
}

pub(crate) fn smooth_verdict_from(
    table: &StftTable,
    cfg: &DetectorConfig,
    p: &PhasePoint,
) -> MicrolocalVerdict {
    match smooth_fit(table, cfg, p) {
        Ok(fit) => {
            let regular = fit.n_hat >= cfg.n_threshold || fit.floor_hit;
            MicrolocalVerdict {
                point: p.clone(),
                mode: Mode::Smooth,
                verdict: if regular { Verdict::Regular } else { Verdict::Singular },
                n_hat: Some(fit.n_hat),
                residual: Some(fit.residual),
                floor_hit: Some(fit.floor_hit),
                shells_used: Some(fit.shells_used),
                tail: None,
                window_id: table.window_id.clone(),
                reason: None,
            }
        }
        Err(e) => MicrolocalVerdict::inconclusive(p, Mode::Smooth, table.window_id.clone(), e.to_string()),
    }
}

pub(crate) fn sobolev_verdict_from(
    table: &StftTable,
    cfg: &DetectorConfig,
    p: &PhasePoint,
    s: f64,
) -> MicrolocalVerdict {
    let mode = Mode::Sobolev(s);
    let run = || -> Result<(TailVerdict, usize)> {
        let cone = Cone::new(&p.direction, cfg.inner_angle())?;
        let tail = sobolev_cone_norm(table, &all_rows(table), &cone, s, &cfg.shells)?;
        let v = tail_convergence_verdict(&tail, cfg.rho_tol)?;
        Ok((v, tail.sups.len()))
    };
    match run() {
        Ok((tv, shells)) => MicrolocalVerdict {
            point: p.clone(),
            mode,
            verdict: match tv {
                TailVerdict::Finite => Verdict::Regular,
                TailVerdict::Divergent => Verdict::Singular,
                TailVerdict::Inconclusive => Verdict::Inconclusive,
            },
            n_hat: None,
            residual: None,
            floor_hit: None,
            shells_used: Some(shells),
            tail: Some(tv),
            window_id: table.window_id.clone(),
            reason: None,
        },
        Err(e) => MicrolocalVerdict::inconclusive(p, mode, table.window_id.clone(), e.to_string()),
    }
}

/// Classify (x0, xi0) against the classical wave front set: Regular iff the
/// shell sups of |V| inside the detection cone pass the rapid-decay
/// surrogate (n_hat >= n_threshold or floor hit). Errors never escape: they
/// produce an Inconclusive verdict with the reason attached.
pub fn wf_smooth_detect(f: &SampledSignal, p: &PhasePoint, cfg: &DetectorConfig) -> MicrolocalVerdict {
    match build_table(f, cfg, &p.x) {
        Ok(table) => smooth_verdict_from(&table, cfg, p),
        Err(e) => MicrolocalVerdict::inconclusive(p, Mode::Smooth, cfg.window.id(), e.to_string()),
    }
}

/// Classify (x0, xi0) against WF_{H^s}: Regular iff the weighted cone tail
/// converges. Propagated errors yield Inconclusive.
pub fn wf_sobolev_detect(
    f: &SampledSignal,
    p: &PhasePoint,
    s: f64,
    cfg: &DetectorConfig,
) -> MicrolocalVerdict {
    match build_table(f, cfg, &p.x) {
        Ok(table) => sobolev_verdict_from(&table, cfg, p, s),
        Err(e) => {
            MicrolocalVerdict::inconclusive(p, Mode::Sobolev(s), cfg.window.id(), e.to_string())
        }
    }
}

/// Scan the detector over a position set X and direction set Xi. The STFT
/// table is computed once per position and shared across directions; per-
/// point failures are isolated as Inconclusive records. Output order is
/// canonical: sorted by (x, direction).
pub fn wf_map(
    f: &SampledSignal,
    xs: &[Vec<f64>],
    dirs: &[Vec<f64>],
    cfg: &DetectorConfig,
) -> Vec<MicrolocalVerdict> {
    let mut out = Vec::with_capacity(xs.len() * dirs.len());
    for x in xs {
        let table = build_table(f, cfg, x);
        for dir in dirs {
            let point = match PhasePoint::new(x, dir) {
                Ok(p) => p,
                Err(e) => {
                    let p = PhasePoint { x: x.clone(), direction: dir.clone() };
                    out.push(MicrolocalVerdict::inconclusive(
                        &p,
                        cfg.mode(),
                        cfg.window.id(),
                        e.to_string(),
                    ));
                    continue;
                }
            };
            match &table {
                Ok(t) => match cfg.s {
                    None => out.push(smooth_verdict_from(t, cfg, &point)),
                    Some(s) => out.push(sobolev_verdict_from(t, cfg, &point, s)),
                },
                Err(e) => out.push(MicrolocalVerdict::inconclusive(
                    &point,
                    cfg.mode(),
                    cfg.window.id(),
                    e.to_string(),
                )),
            }
        }
    }
    canonical_sort(&mut out);
    out
}

/// Sort verdicts by (position, direction), lexicographically per coordinate.
pub fn canonical_sort(verdicts: &mut [MicrolocalVerdict]) {
    verdicts.sort_by(|a, b| {
        let key = |v: &MicrolocalVerdict| (v.point.x.clone(), v.point.direction.clone());
        let (ax, ad) = key(a);
        let (bx, bd) = key(b);
        ax.iter()
            .chain(ad.iter())
            .zip(bx.iter().chain(bd.iter()))
            .map(|(p, q)| p.partial_cmp(q).unwrap_or(std::cmp::Ordering::Equal))
            .find(|o| *o != std::cmp::Ordering::Equal)
            .unwrap_or(std::cmp::Ordering::Equal)
    });
}

/// One row of a window-robustness report.
#[derive(Debug, Clone)]
pub struct RobustnessEntry {
    pub window_id: String,
    pub verdict: Verdict,
    pub n_hat: Option<f64>,
    pub tail: Option<TailVerdict>,
    /// recorded for finitely differentiable windows (the criteria assume
    /// smooth ones)
    pub caveat: Option<String>,
}

/// Outcome of running the detector at one point under several windows.
#[derive(Debug, Clone)]
pub struct RobustnessReport {
    pub point: PhasePoint,
    pub mode: Mode,
    pub entries: Vec<RobustnessEntry>,
    /// all verdicts identical
    pub agree: bool,
    /// smooth mode: spread max - min of the finite fitted exponents
    pub n_hat_dispersion: Option<f64>,
}

/// Run the detector at `p` once per window and compare verdicts: membership
/// in the wave front set is window-independent, so the verdicts must agree
/// for any admissible window. Requires at least 3 windows, each with nonzero
/// center value.
pub fn window_robustness_audit(
    f: &SampledSignal,
    p: &PhasePoint,
    cfg: &DetectorConfig,
    windows: &[WindowSpec],
) -> Result<RobustnessReport> {
    if windows.len() < 3 {
        return Err(WfError::InvalidConfig(format!(
            "robustness audit needs at least 3 windows, got {}",
            windows.len()
        )));
    }
    for w in windows {
        if !(w.amplitude != 0.0 && w.eval(&vec![0.0; f.grid.dim()]) != 0.0) {
            return Err(WfError::InvalidConfig(format!(
                "window {} violates chi(0) != 0",
                w.id()
            )));
        }
    }
    let mode = cfg.mode();
    let mut entries = Vec::with_capacity(windows.len());
    for w in windows {
        let mut c = cfg.clone();
        c.window = w.clone();
        let v = match mode {
            Mode::Smooth => wf_smooth_detect(f, p, &c),
            Mode::Sobolev(s) => wf_sobolev_detect(f, p, s, &c),
        };
        entries.push(RobustnessEntry {
            window_id: w.id(),
            verdict: v.verdict,
            n_hat: v.n_hat,
            tail: v.tail,
            caveat: w
                .smoothness()
                .map(|m| format!("window is C^{m}, not smooth; admitted for audit only")),
        });
    }
    let agree = entries.iter().all(|e| e.verdict == entries[0].verdict);
    let n_hat_dispersion = match mode {
        Mode::Smooth => {
            let finite: Vec<f64> = entries
                .iter()
                .filter_map(|e| e.n_hat)
                .filter(|v| v.is_finite())
                .collect();
            if finite.is_empty() {
                Some(0.0)
            } else if finite.len() < entries.len() {
                // some windows hit the floor outright: spread is unbounded
                // in the measurable range
                Some(f64::INFINITY)
            } else {
                let lo = finite.iter().cloned().fold(f64::INFINITY, f64::min);
                let hi = finite.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                Some(hi - lo)
            }
        }
        Mode::Sobolev(_) => None,
    };
    Ok(RobustnessReport { point: p.clone(), mode, entries, agree, n_hat_dispersion })
}

/// One audited window of the seminorm-uniformity family.
#[derive(Debug, Clone)]
pub struct SeminormAuditEntry {
    pub window_id: String,
    pub seminorm: f64,
    pub max_ratio: f64,
    pub atoms: usize,
}

/// Empirical witness that the cone-decay bound is uniform over windows:
/// ratios |V_chi f| (1+|xi|)^n / seminorm_k(chi) over a seeded family of
/// test windows supported in K - {x0}.
#[derive(Debug, Clone)]
pub struct SeminormAuditReport {
    pub point: PhasePoint,
    pub n: usize,
    pub k: usize,
    pub seed: u64,
    pub family_size: usize,
    /// entries ordered by seminorm (ascending)
    pub entries: Vec<SeminormAuditEntry>,
    /// the empirical C_n for the given k
    pub family_max: f64,
    pub median_ratio: f64,
    /// flagged when the family max exceeds 10x the median ratio
    pub growth_flag: bool,
    /// n_hat of the precondition detection at cfg's window
    pub precondition_n_hat: f64,
}

/// Check that the decay constant of order n is uniform over random test
/// windows: draw `m` bump-sum windows supported in the ball of radius
/// k_radius - 0.2 around the scan point (1 to 3 atoms, fixed atom radius,
/// random amplitudes and centers, seeded and replayable), and report
/// max |V(x, xi)| (1 + |xi|)^n / seminorm_k per window over x in K and xi in
/// the shell range inside the detection cone.
///
/// Errors if the point is not Regular at order >= n under cfg's window (the
/// bound is only asserted there), or if the geometry leaves no room for the
/// atoms.
pub fn seminorm_uniformity_audit(
    f: &SampledSignal,
    p: &PhasePoint,
    cfg: &DetectorConfig,
    m: usize,
    k: usize,
    n: usize,
    seed: u64,
) -> Result<SeminormAuditReport> {
    if f.grid.dim() != 1 {
        return Err(WfError::InvalidConfig(
            "the seminorm audit generates 1-d window families".into(),
        ));
    }
    if m == 0 {
        return Err(WfError::InvalidConfig("audit family size must be >= 1".into()));
    }
    let pre = wf_smooth_detect(f, p, cfg);
    let pre_n_hat = pre.n_hat.unwrap_or(f64::NEG_INFINITY);
    let pre_ok = pre_n_hat >= n as f64 || pre.floor_hit == Some(true);
    if pre.verdict != Verdict::Regular || !pre_ok {
        return Err(WfError::NotRegularAtOrder { n: n as f64, n_hat: pre_n_hat });
    }
    let center_span = cfg.k_radius - AUDIT_ATOM_RADIUS;
    if !(center_span > 0.0) {
        return Err(WfError::InvalidConfig(format!(
            "k_radius {} leaves no room for atoms of radius {AUDIT_ATOM_RADIUS}",
            cfg.k_radius
        )));
    }
    let positions = k_positions(f, &p.x, cfg.k_radius)?;
    let cone = Cone::new(&p.direction, cfg.inner_angle())?;
    let (r0, top) = (cfg.shells.r0(), cfg.shells.top());

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut entries = Vec::with_capacity(m);
    for _ in 0..m {
        let n_atoms = rng.gen_range(1..=3usize);
        let atoms: Vec<BumpAtom> = (0..n_atoms)
            .map(|_| {
                let amplitude = rng.gen_range(0.5..2.0);
                let center = rng.gen_range(-center_span..center_span);
                BumpAtom { amplitude, center, radius: AUDIT_ATOM_RADIUS }
            })
            .collect();
        let aw = AuditWindow { atoms };
        let table = stft_discrete(f, &aw, &positions, cfg.cap_factor)?;
        let freq = &table.freq;
        let mut num = 0.0f64;
        for row in 0..table.positions.len() {
            let vals = table.row(row);
            for q in 0..freq.len() {
                let r = freq.norm(q);
                if r >= r0 && r < top && cone.contains(freq.xi(q)) {
                    num = num.max(vals[q].norm() * (1.0 + r).powi(n as i32));
                }
            }
        }
        let seminorm = aw.seminorm(k);
        entries.push(SeminormAuditEntry {
            window_id: aw.window_id(),
            seminorm,
            max_ratio: num / seminorm,
            atoms: aw.atoms.len(),
        });
    }
    entries.sort_by(|a, b| a.seminorm.partial_cmp(&b.seminorm).unwrap());
    let mut ratios: Vec<f64> = entries.iter().map(|e| e.max_ratio).collect();
    ratios.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let family_max = *ratios.last().unwrap();
    let median_ratio = if ratios.len() % 2 == 1 {
        ratios[ratios.len() / 2]
    } else {
        0.5 * (ratios[ratios.len() / 2 - 1] + ratios[ratios.len() / 2])
    };
    let growth_flag = family_max > 10.0 * median_ratio;
    Ok(SeminormAuditReport {
        point: p.clone(),
        n,
        k,
        seed,
        family_size: m,
        entries,
        family_max,
        median_ratio,
        growth_flag,
        precondition_n_hat: pre_n_hat,
    })
}
