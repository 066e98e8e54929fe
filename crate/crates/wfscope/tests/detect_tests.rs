//! Detector-level behaviour: verdict semantics in both modes, canonical
//! ordering, error propagation into inconclusive records, determinism, and
//! the two window audits.

use wfscope::*;

fn quick_grid() -> Grid {
    Grid::new(1, 1 << 12, (2.0f64).powi(-7), vec![-16.0]).unwrap()
}

/// A fast configuration for the 2^12 grid (aliasing cap ~ 160.8).
fn quick_cfg() -> DetectorConfig {
    DetectorConfig {
        k_radius: 0.125,
        window: WindowSpec::bump(0.35, 1.0),
        shells: ShellPartition::new(4.0, 5).unwrap(),
        n_threshold: 2.2,
        ..DetectorConfig::default()
    }
}

#[test]
fn default_config_shape() {
    let cfg = DetectorConfig::default();
    assert_eq!(cfg.k_radius, 0.05);
    assert_eq!(cfg.window.id(), "bspline8:0.45");
    assert_eq!(cfg.shells.r0(), 32.0);
    assert_eq!(cfg.shells.count(), 4);
    assert_eq!(cfg.cone_angle, std::f64::consts::FRAC_PI_4);
    assert_eq!(cfg.inner_angle(), cfg.cone_angle / 2.0);
    assert_eq!(cfg.n_threshold, 6.0);
    assert_eq!(cfg.rho_tol, 0.15);
    assert_eq!(cfg.cap_factor, 0.4);
    assert!(cfg.s.is_none());
    assert_eq!(cfg.mode(), Mode::Smooth);
    let mut sob = cfg.clone();
    sob.s = Some(0.5);
    assert_eq!(sob.mode(), Mode::Sobolev(0.5));
    assert_eq!(format!("{}", Verdict::Regular), "regular");
    assert_eq!(format!("{}", Verdict::Singular), "singular");
    assert_eq!(format!("{}", Verdict::Inconclusive), "inconclusive");
}

#[test]
fn smooth_detect_point_mass() {
    let grid = quick_grid();
    let f = sample(Member::Delta, &grid).unwrap();
    let cfg = quick_cfg();
    for dir in [1.0, -1.0] {
        let at0 = wf_smooth_detect(&f, &PhasePoint::new(&[0.0], &[dir]).unwrap(), &cfg);
        assert_eq!(at0.verdict, Verdict::Singular, "dir {dir}");
        let n_hat = at0.n_hat.unwrap();
        assert!(n_hat.abs() < 0.2, "point mass n_hat = {n_hat}");
        assert_eq!(at0.floor_hit, Some(false));

        // away from the support the localized transform vanishes entirely
        let at4 = wf_smooth_detect(&f, &PhasePoint::new(&[4.0], &[dir]).unwrap(), &cfg);
        assert_eq!(at4.verdict, Verdict::Regular);
        assert_eq!(at4.floor_hit, Some(true));
        assert!(at4.n_hat.unwrap().is_infinite());
    }
}

#[test]
fn sobolev_detect_flips_at_the_threshold() {
    let grid = standard_grid(Member::Heaviside);
    let f = sample(Member::Heaviside, &grid).unwrap();
    let mut cfg = member_config(Member::Heaviside);
    cfg.shells = member_sobolev_shells(Member::Heaviside);
    let p = PhasePoint::new(&[0.0], &[1.0]).unwrap();
    // the jump sits exactly at H^{1/2}
    let below = wf_sobolev_detect(&f, &p, 0.3, &cfg);
    assert_eq!(below.verdict, Verdict::Regular);
    assert_eq!(below.tail, Some(TailVerdict::Finite));
    let above = wf_sobolev_detect(&f, &p, 0.7, &cfg);
    assert_eq!(above.verdict, Verdict::Singular);
    assert_eq!(above.tail, Some(TailVerdict::Divergent));
    // a regular point is regular at every order probed
    let away = PhasePoint::new(&[4.0], &[1.0]).unwrap();
    for s in [0.3, 0.7] {
        assert_eq!(wf_sobolev_detect(&f, &away, s, &cfg).verdict, Verdict::Regular);
    }
}

#[test]
fn smooth_regular_implies_sobolev_regular() {
    // soundness across modes: wherever smooth mode says regular, every
    // finite Sobolev order must agree
    let grid = standard_grid(Member::Heaviside);
    let f = sample(Member::Heaviside, &grid).unwrap();
    let mut cfg = member_config(Member::Heaviside);
    cfg.shells = member_sobolev_shells(Member::Heaviside);
    let away = PhasePoint::new(&[4.0], &[-1.0]).unwrap();
    assert_eq!(wf_smooth_detect(&f, &away, &cfg).verdict, Verdict::Regular);
    for s in [0.0, 1.0, 2.0] {
        assert_eq!(wf_sobolev_detect(&f, &away, s, &cfg).verdict, Verdict::Regular, "s = {s}");
    }

    let grid = standard_grid(Member::SmoothBump);
    let f = sample(Member::SmoothBump, &grid).unwrap();
    let mut cfg = member_config(Member::SmoothBump);
    cfg.shells = member_sobolev_shells(Member::SmoothBump);
    let p = PhasePoint::new(&[0.0], &[1.0]).unwrap();
    assert_eq!(wf_smooth_detect(&f, &p, &cfg).verdict, Verdict::Regular);
    for s in [0.0, 1.0, 2.0] {
        assert_eq!(wf_sobolev_detect(&f, &p, s, &cfg).verdict, Verdict::Regular, "s = {s}");
    }
}

#[test]
fn wf_map_sorts_canonically_and_matches_pointwise_calls() {
    let grid = quick_grid();
    let f = sample(Member::Delta, &grid).unwrap();
    let cfg = quick_cfg();
    let xs = vec![vec![4.0], vec![-4.0], vec![0.0]];
    let dirs = vec![vec![1.0], vec![-1.0]];
    let map = wf_map(&f, &xs, &dirs, &cfg);
    assert_eq!(map.len(), 6);
    let expected_order =
        [(-4.0, -1.0), (-4.0, 1.0), (0.0, -1.0), (0.0, 1.0), (4.0, -1.0), (4.0, 1.0)];
    for (v, (x, d)) in map.iter().zip(expected_order) {
        assert_eq!(v.point.x, vec![x]);
        assert_eq!(v.point.direction, vec![d]);
        let single = wf_smooth_detect(&f, &PhasePoint::new(&[x], &[d]).unwrap(), &cfg);
        assert_eq!(v.verdict, single.verdict);
        assert_eq!(v.n_hat.map(f64::to_bits), single.n_hat.map(f64::to_bits));
    }
}

#[test]
fn wf_map_isolates_bad_points() {
    let grid = quick_grid();
    let f = sample(Member::Delta, &grid).unwrap();
    let cfg = quick_cfg();
    // x = 15.9 overhangs the grid with the window; x = 0 stays classifiable
    let map = wf_map(&f, &[vec![15.9], vec![0.0]], &[vec![1.0]], &cfg);
    assert_eq!(map.len(), 2);
    assert_eq!(map[0].point.x, vec![0.0]);
    assert_eq!(map[0].verdict, Verdict::Singular);
    assert_eq!(map[1].point.x, vec![15.9]);
    assert_eq!(map[1].verdict, Verdict::Inconclusive);
    let reason = map[1].reason.as_deref().unwrap();
    assert!(reason.contains("window"), "unexpected reason: {reason}");
}

#[test]
fn wf_map_flags_zero_direction() {
    let grid = quick_grid();
    let f = sample(Member::Delta, &grid).unwrap();
    let map = wf_map(&f, &[vec![0.0]], &[vec![0.0]], &quick_cfg());
    assert_eq!(map.len(), 1);
    assert_eq!(map[0].verdict, Verdict::Inconclusive);
    assert!(map[0].reason.is_some());
}

#[test]
fn wf_map_deterministic_across_thread_counts() {
    let grid = quick_grid();
    let f = sample(Member::Heaviside, &grid).unwrap();
    let cfg = quick_cfg();
    let xs = vec![vec![-1.0], vec![0.0], vec![1.0]];
    let dirs = vec![vec![1.0], vec![-1.0]];
    let run = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| wf_map(&f, &xs, &dirs, &cfg))
    };
    let base = run(1);
    for threads in [2, 4] {
        let other = run(threads);
        assert_eq!(base.len(), other.len());
        for (a, b) in base.iter().zip(&other) {
            assert_eq!(a.verdict, b.verdict);
            assert_eq!(a.n_hat.map(f64::to_bits), b.n_hat.map(f64::to_bits));
            assert_eq!(a.residual.map(f64::to_bits), b.residual.map(f64::to_bits));
        }
    }
}

#[test]
fn cone_narrowing_preserves_2d_verdicts() {
    let grid = standard_grid(Member::HalfPlaneEdge);
    let f = sample(Member::HalfPlaneEdge, &grid).unwrap();
    let wide = member_config(Member::HalfPlaneEdge);
    let mut narrow = wide.clone();
    narrow.cone_angle = wide.cone_angle / 2.0;
    let conormal = PhasePoint::new(&[0.0, 0.0], &[1.0, 0.0]).unwrap();
    let tangential = PhasePoint::new(&[0.0, 0.0], &[0.0, 1.0]).unwrap();
    for cfg in [&wide, &narrow] {
        assert_eq!(wf_smooth_detect(&f, &conormal, cfg).verdict, Verdict::Singular);
        assert_eq!(wf_smooth_detect(&f, &tangential, cfg).verdict, Verdict::Regular);
    }
}

#[test]
fn robustness_audit_agrees_and_measures_dispersion() {
    let grid = standard_grid(Member::Heaviside);
    let f = sample(Member::Heaviside, &grid).unwrap();
    let cfg = member_config(Member::Heaviside);
    let p = PhasePoint::new(&[0.0], &[1.0]).unwrap();
    let windows =
        [WindowSpec::bump(0.5, 1.0), WindowSpec::bump(1.0, 1.0), WindowSpec::bump(2.0, 1.0)];
    let report = window_robustness_audit(&f, &p, &cfg, &windows).unwrap();
    assert!(report.agree);
    assert_eq!(report.entries.len(), 3);
    for e in &report.entries {
        assert_eq!(e.verdict, Verdict::Singular);
        assert!(e.caveat.is_none());
    }
    let disp = report.n_hat_dispersion.unwrap();
    assert!(disp.is_finite() && disp < 1.0, "dispersion {disp}");
}

#[test]
fn robustness_audit_validates_the_family() {
    let grid = quick_grid();
    let f = sample(Member::Heaviside, &grid).unwrap();
    let cfg = quick_cfg();
    let p = PhasePoint::new(&[0.0], &[1.0]).unwrap();
    // too few windows
    let two = [WindowSpec::bump(0.5, 1.0), WindowSpec::bump(1.0, 1.0)];
    assert!(matches!(window_robustness_audit(&f, &p, &cfg, &two), Err(WfError::InvalidConfig(_))));
    // zero amplitude violates chi(0) != 0
    let zero = [
        WindowSpec::bump(0.5, 1.0),
        WindowSpec::bump(1.0, 0.0),
        WindowSpec::bump(2.0, 1.0),
    ];
    assert!(window_robustness_audit(&f, &p, &cfg, &zero).is_err());
    // a spline member is admitted but annotated
    let mixed = [
        WindowSpec::bump(0.5, 1.0),
        WindowSpec::bspline(3, 1.0, 1.0),
        WindowSpec::bump(1.0, 1.0),
    ];
    let report = window_robustness_audit(&f, &p, &cfg, &mixed).unwrap();
    assert!(report.agree);
    let caveat = report.entries[1].caveat.as_deref().unwrap();
    assert!(caveat.contains("C^2"), "caveat: {caveat}");
    assert!(report.entries[0].caveat.is_none());
}

fn audit_cfg() -> DetectorConfig {
    DetectorConfig {
        k_radius: 0.25,
        window: WindowSpec::bump(2.0, 1.0),
        shells: ShellPartition::new(16.0, 5).unwrap(),
        ..DetectorConfig::default()
    }
}

#[test]
fn seminorm_audit_is_seeded_and_replayable() {
    let grid = standard_grid(Member::SmoothBump);
    let f = sample(Member::SmoothBump, &grid).unwrap();
    let p = PhasePoint::new(&[0.0], &[1.0]).unwrap();
    let cfg = audit_cfg();
    let a = seminorm_uniformity_audit(&f, &p, &cfg, 5, 4, 4, 1).unwrap();
    let b = seminorm_uniformity_audit(&f, &p, &cfg, 5, 4, 4, 1).unwrap();
    assert_eq!(a.family_size, 5);
    for (x, y) in a.entries.iter().zip(&b.entries) {
        assert_eq!(x.seminorm.to_bits(), y.seminorm.to_bits());
        assert_eq!(x.max_ratio.to_bits(), y.max_ratio.to_bits());
        assert!((1..=3).contains(&x.atoms));
    }
    // entries come sorted by seminorm, and the summary stats match them
    for w in a.entries.windows(2) {
        assert!(w[0].seminorm <= w[1].seminorm);
    }
    let max = a.entries.iter().map(|e| e.max_ratio).fold(0.0, f64::max);
    assert_eq!(max, a.family_max);
    assert!(a.median_ratio > 0.0 && a.median_ratio <= a.family_max);
    // a different seed draws a different family
    let c = seminorm_uniformity_audit(&f, &p, &cfg, 5, 4, 4, 2).unwrap();
    assert!(a.entries.iter().zip(&c.entries).any(|(x, y)| x.seminorm != y.seminorm));
}

#[test]
fn seminorm_audit_rejects_bad_inputs() {
    // precondition: the point must be regular at the requested order
    let grid = quick_grid();
    let heav = sample(Member::Heaviside, &grid).unwrap();
    let p = PhasePoint::new(&[0.0], &[1.0]).unwrap();
    let mut cfg = quick_cfg();
    cfg.k_radius = 0.3;
    match seminorm_uniformity_audit(&heav, &p, &cfg, 5, 4, 4, 1) {
        Err(WfError::NotRegularAtOrder { n, n_hat }) => {
            assert_eq!(n, 4.0);
            assert!((n_hat - 1.0).abs() < 0.5, "n_hat = {n_hat}");
        }
        other => panic!("expected precondition error, got {other:?}"),
    }
    // the family generator is 1-d only
    let g2 = Grid::new(2, 64, 0.25, vec![-8.0, -8.0]).unwrap();
    let gauss2 = gaussian_signal(&g2).unwrap();
    let p2 = PhasePoint::new(&[0.0, 0.0], &[1.0, 0.0]).unwrap();
    assert!(matches!(
        seminorm_uniformity_audit(&gauss2, &p2, &DetectorConfig::default(), 5, 4, 4, 1),
        Err(WfError::InvalidConfig(_))
    ));
    // k_radius must leave room for the fixed atom radius
    let grid = standard_grid(Member::SmoothBump);
    let f = sample(Member::SmoothBump, &grid).unwrap();
    let mut tight = audit_cfg();
    tight.k_radius = 0.15;
    assert!(matches!(
        seminorm_uniformity_audit(&f, &p, &tight, 5, 4, 4, 1),
        Err(WfError::InvalidConfig(_))
    ));
}
