//! Quantitative decay statistics on STFT tables: dyadic shell suprema,
//! least-squares decay exponents, and weighted L^2 cone tails with
//! convergence verdicts and a Sobolev threshold bisection.

use crate::cone::Cone;
use crate::error::{Result, WfError};
use crate::shell::{shell_cone_indices, ShellConeIndices, ShellPartition};
use crate::stft::StftTable;

/// Shell sups below this fraction of the table's global max are clipped:
/// log-regression on sub-noise values would fabricate slopes.
pub const DECAY_FLOOR_REL: f64 = 1e-13;

/// Default width of the Inconclusive band around ratio 1 in tail verdicts.
pub const DEFAULT_RHO_TOL: f64 = 0.15;

/// Half-width at which the Sobolev threshold bisection stops.
pub const S_BISECT_WIDTH: f64 = 0.05;

/// Dyadic shell suprema M_j = sup_{x in K, xi in S_j cap Gamma} |V(x, xi)|.
#[derive(Debug, Clone)]
pub struct ShellStats {
    pub partition: ShellPartition,
    /// fit abscissae R_j^mid = R0 2^{j+1/2}
    pub mids: Vec<f64>,
    pub sups: Vec<f64>,
    /// grid frequencies per shell (0 = empty shell, excluded from fits)
    pub counts: Vec<usize>,
    /// global max of |V| over the whole table (floor reference)
    pub global_max: f64,
}

/// Exact shell maxima of |V| over the given table rows and shell-cone index
/// sets. Requires at least 3 nonempty shells.
pub fn shell_sup(
    table: &StftTable,
    k_rows: &[usize],
    sci: &ShellConeIndices,
) -> Result<ShellStats> {
    let nonempty = sci.nonempty();
    if nonempty < 3 {
        return Err(WfError::TooFewShells { got: nonempty, need: 3 });
    }
    let part = sci.partition;
    let mut sups = vec![0.0f64; part.count()];
    let mut counts = vec![0usize; part.count()];
    for (j, idx) in sci.per_shell.iter().enumerate() {
        counts[j] = idx.len();
        let mut m = 0.0f64;
        for &p in k_rows {
            let row = table.row(p);
            for &q in idx {
                m = m.max(row[q].norm());
            }
        }
        sups[j] = m;
    }
    Ok(ShellStats {
        partition: part,
        mids: (0..part.count()).map(|j| part.mid(j)).collect(),
        sups,
        counts,
        global_max: table.global_max_abs(),
    })
}

/// Result of the log-log decay fit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayFit {
    /// Estimated exponent n with M_j ~ (1 + R_j)^{-n}; +infinity when every
    /// usable shell sits at the numerical floor (decay faster than
    /// measurable).
    pub n_hat: f64,
    /// Max absolute deviation of the fit in log units.
    pub residual: f64,
    /// Fit intercept in log units: log M_j ~ intercept - n_hat * log(1 + R_j).
    /// NaN when no line was fitted (all shells floored or empty).
    pub intercept: f64,
    /// True when at least one shell was clipped at the floor.
    pub floor_hit: bool,
    /// Number of shells that entered the fit.
    pub shells_used: usize,
}

/// Least-squares slope of log M_j against log(1 + R_j^mid); n_hat = -slope.
/// Shells at or below the floor (DECAY_FLOOR_REL x global max) are clipped
/// out of the fit and flagged.
pub fn decay_exponent(stats: &ShellStats) -> Result<DecayFit> {
    let usable: Vec<usize> = (0..stats.sups.len()).filter(|&j| stats.counts[j] > 0).collect();
    if usable.len() < 3 {
        return Err(WfError::TooFewShells { got: usable.len(), need: 3 });
    }
    if stats.global_max == 0.0 {
        return Ok(DecayFit {
            n_hat: f64::INFINITY,
            residual: 0.0,
            intercept: f64::NAN,
            floor_hit: true,
            shells_used: 0,
        });
    }
    let floor = DECAY_FLOOR_REL * stats.global_max;
    let fit_pts: Vec<usize> = usable.iter().copied().filter(|&j| stats.sups[j] > floor).collect();
    let floor_hit = fit_pts.len() < usable.len();
    if fit_pts.len() < 2 {
        return Ok(DecayFit {
            n_hat: f64::INFINITY,
            residual: 0.0,
            intercept: f64::NAN,
            floor_hit: true,
            shells_used: fit_pts.len(),
        });
    }
    let ts: Vec<f64> = fit_pts.iter().map(|&j| (1.0 + stats.mids[j]).ln()).collect();
    let ys: Vec<f64> = fit_pts.iter().map(|&j| stats.sups[j].ln()).collect();
    let n = ts.len() as f64;
    let tbar = ts.iter().sum::<f64>() / n;
    let ybar = ys.iter().sum::<f64>() / n;
    let mut cov = 0.0;
    let mut var = 0.0;
    for (t, y) in ts.iter().zip(&ys) {
        cov += (t - tbar) * (y - ybar);
        var += (t - tbar) * (t - tbar);
    }
    let slope = cov / var;
    let intercept = ybar - slope * tbar;
    let residual = ts
        .iter()
        .zip(&ys)
        .map(|(t, y)| (y - (slope * t + intercept)).abs())
        .fold(0.0, f64::max);
    Ok(DecayFit { n_hat: -slope, residual, intercept, floor_hit, shells_used: fit_pts.len() })
}

/// Partial weighted tail integrals sup_{x in K} of
/// sum_{xi in Gamma, |xi| < R0 2^{J+1}} <xi>^{2s} |V(x,xi)|^2 dxi^d.
#[derive(Debug, Clone)]
pub struct SobolevTail {
    pub s: f64,
    pub partition: ShellPartition,
    /// sup over K of the head sum (|xi| < R0, inside the cone)
    pub head_sup: f64,
    /// sup over K of the cumulative sums after each shell, length = count
    pub sups: Vec<f64>,
}

impl SobolevTail {
    /// Increments D_J = S_J - S_{J-1} of the sup sequence, J = 1..count-1.
    /// S_0 itself (head plus first shell) is the baseline, not an increment:
    /// its magnitude carries scale, not tail behaviour.
    pub fn increments(&self) -> Vec<f64> {
        self.sups.windows(2).map(|w| w[1] - w[0]).collect()
    }
}

/// Riemann-sum tails of the <xi>^s-weighted L^2(Gamma) norm, accumulated
/// shell by shell per position (ascending frequency order, deterministic),
/// with the sup over K taken afterwards. The head |xi| < R0 inside the cone
/// is included as the baseline.
pub fn sobolev_cone_norm(
    table: &StftTable,
    k_rows: &[usize],
    cone: &Cone,
    s: f64,
    partition: &ShellPartition,
) -> Result<SobolevTail> {
    let freq = &table.freq;
    partition.validate_cap(freq.cap())?;
    let count = partition.count();
    // bucket of each kept frequency: None = outside cone or beyond top,
    // Some(0) = head, Some(j+1) = shell j
    let buckets: Vec<Option<usize>> = (0..freq.len())
        .map(|q| {
            if !cone.contains(freq.xi(q)) {
                return None;
            }
            let r = freq.norm(q);
            if r < partition.r0() {
                Some(0)
            } else {
                partition.shell_of(r).map(|j| j + 1)
            }
        })
        .collect();
    let weights: Vec<f64> = (0..freq.len())
        .map(|q| {
            let r = freq.norm(q);
            (1.0 + r * r).powf(s)
        })
        .collect();
    let vol = freq.dxi().powi(freq.dim() as i32);
    let mut head_sup = 0.0f64;
    let mut sups = vec![0.0f64; count];
    for &p in k_rows {
        let row = table.row(p);
        let mut acc = vec![0.0f64; count + 1];
        for (q, b) in buckets.iter().enumerate() {
            if let Some(b) = b {
                acc[*b] += weights[q] * row[q].norm_sqr();
            }
        }
        let mut cum = acc[0] * vol;
        head_sup = head_sup.max(cum);
        for j in 0..count {
            cum += acc[j + 1] * vol;
            sups[j] = sups[j].max(cum);
        }
    }
    Ok(SobolevTail { s, partition: *partition, head_sup, sups })
}

/// Three-valued convergence verdict for a Sobolev tail.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TailVerdict {
    Finite,
    Divergent,
    Inconclusive,
}

impl std::fmt::Display for TailVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            TailVerdict::Finite => write!(f, "finite"),
            TailVerdict::Divergent => write!(f, "divergent"),
            TailVerdict::Inconclusive => write!(f, "inconclusive"),
        }
    }
}

/// Classify a tail by the geometric mean of the last (up to 3) increment
/// ratios: Finite when the mean ratio is below 1 - rho_tol (geometric
/// decay), Divergent when the increments are constant or growing (mean ratio
/// >= 1), Inconclusive in between. Tails whose increments have all decayed
/// to nothing are Finite. Requires the partial sums to cover at least 4
/// shells.
pub fn tail_convergence_verdict(tail: &SobolevTail, rho_tol: f64) -> Result<TailVerdict> {
    if tail.sups.len() < 4 {
        return Err(WfError::TooFewShells { got: tail.sups.len(), need: 4 });
    }
    let mut incs = tail.increments();
    if incs.iter().all(|&d| d <= 0.0) {
        return Ok(TailVerdict::Finite);
    }
    // clamp exact zeros so the ratio logarithms stay finite
    for d in &mut incs {
        *d = d.max(1e-300);
    }
    let ratios: Vec<f64> = incs.windows(2).map(|w| w[1] / w[0]).collect();
    let k = ratios.len().min(3);
    let gm = (ratios[ratios.len() - k..]
        .iter()
        .map(|r| r.max(1e-300).ln())
        .sum::<f64>()
        / k as f64)
        .exp();
    if gm < 1.0 - rho_tol {
        Ok(TailVerdict::Finite)
    } else if gm >= 1.0 {
        Ok(TailVerdict::Divergent)
    } else {
        Ok(TailVerdict::Inconclusive)
    }
}

/// Result of the threshold bisection, with the endpoint verdicts attached.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SobolevThreshold {
    pub s_star: f64,
    pub lo_verdict: TailVerdict,
    pub hi_verdict: TailVerdict,
}

/// Bisect the Sobolev order between s_lo (must test Finite) and s_hi (must
/// test Divergent) down to width S_BISECT_WIDTH; an Inconclusive verdict in
/// the interior ends the search at that s (the transition has been
/// bracketed to within the band).
pub fn sobolev_threshold_estimate(
    table: &StftTable,
    k_rows: &[usize],
    cone: &Cone,
    partition: &ShellPartition,
    s_lo: f64,
    s_hi: f64,
    rho_tol: f64,
) -> Result<SobolevThreshold> {
    if !(s_lo < s_hi) {
        return Err(WfError::InvalidConfig(format!(
            "Sobolev bisection range is empty: [{s_lo}, {s_hi}]"
        )));
    }
    let verdict_at = |s: f64| -> Result<TailVerdict> {
        let tail = sobolev_cone_norm(table, k_rows, cone, s, partition)?;
        tail_convergence_verdict(&tail, rho_tol)
    };
    let lo_verdict = verdict_at(s_lo)?;
    if lo_verdict != TailVerdict::Finite {
        return Err(WfError::EndpointInconclusive { s: s_lo, verdict: lo_verdict.to_string() });
    }
    let hi_verdict = verdict_at(s_hi)?;
    if hi_verdict != TailVerdict::Divergent {
        return Err(WfError::EndpointInconclusive { s: s_hi, verdict: hi_verdict.to_string() });
    }
    let (mut lo, mut hi) = (s_lo, s_hi);
    while hi - lo > S_BISECT_WIDTH {
        let mid = 0.5 * (lo + hi);
        match verdict_at(mid)? {
            TailVerdict::Finite => lo = mid,
            TailVerdict::Divergent => hi = mid,
            TailVerdict::Inconclusive => {
                return Ok(SobolevThreshold { s_star: mid, lo_verdict, hi_verdict })
            }
        }
    }
    Ok(SobolevThreshold { s_star: 0.5 * (lo + hi), lo_verdict, hi_verdict })
}

/// Convenience: classify every kept frequency once for repeated shell_sup
/// calls (re-exported here so detector code reads naturally).
pub fn shell_stats_for(
    table: &StftTable,
    k_rows: &[usize],
    cone: &Cone,
    partition: &ShellPartition,
) -> Result<ShellStats> {
    let sci = shell_cone_indices(&table.freq, cone, partition)?;
    shell_sup(table, k_rows, &sci)
}
