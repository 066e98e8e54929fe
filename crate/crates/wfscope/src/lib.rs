//! Wave-front-set detection through the short-time Fourier transform with
//! compactly supported windows.
//!
//! The transform V_chi f(x, xi) = F[f conj(chi(. - x))](xi) of a compactly
//! supported distribution localizes f near x and then measures decay along
//! the frequency ray xi. The detectors in this crate turn the two cone-decay
//! characterizations into numerics:
//!
//! * smooth mode fits the polynomial decay exponent of shell sups of |V| in
//!   a frequency cone and compares it against a rapid-decay surrogate;
//! * Sobolev mode accumulates <xi>^{2s}-weighted tail sums over dyadic
//!   shells and classifies their convergence, with a bisection estimator for
//!   the threshold order s*.
//!
//! Everything is deterministic: transforms are plain FFTs with explicit
//! phase corrections, random families (audits, nesting checks) are seeded,
//! and parallel reductions are order-fixed.

pub mod cone;
pub mod corpus;
pub mod decay;
pub mod detect;
pub mod error;
pub mod grid;
pub mod shell;
pub mod stft;
pub mod window;

pub use cone::{
    cone_contains, fattening_sample_check, max_nesting_constant, Cone, ConePair, FatteningCheck,
    FatteningCounterexample, PhasePoint,
};
pub use corpus::{
    corpus_members, gaussian_signal, member_config, member_scan, member_sobolev_shells,
    robustness_check, sample, sobolev_truth, standard_grid, validate_against_ground_truth,
    wf_truth, Member, ValidationTable,
};
pub use decay::{
    decay_exponent, shell_stats_for, shell_sup, sobolev_cone_norm, sobolev_threshold_estimate,
    tail_convergence_verdict, DecayFit, ShellStats, SobolevTail, SobolevThreshold, TailVerdict,
};
pub use detect::{
    canonical_sort, seminorm_uniformity_audit, wf_map, wf_smooth_detect, wf_sobolev_detect,
    window_robustness_audit, DetectorConfig, MicrolocalVerdict, Mode, RobustnessReport,
    SeminormAuditReport, Verdict,
};
pub use error::{Result, WfError};
pub use grid::{Grid, Regularization, SampledSignal};
pub use shell::{shell_cone_indices, ShellConeIndices, ShellPartition};
pub use stft::{
    aliasing_cap, fourier_transform, parseval_check, stft_closed_form, stft_discrete,
    ClosedFormDist, FreqGrid, StftTable,
};
pub use window::{bump_profile, bump_profile_deriv, AuditWindow, BumpAtom, WindowFn, WindowSpec};
