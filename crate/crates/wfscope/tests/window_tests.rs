//! Window catalogue checks against externally computed values.
//!
//! The frozen constants were evaluated with 40-digit interval arithmetic and
//! rounded to f64; the tolerances account for the library's own sampling
//! accuracy, not for uncertainty in the constants.

use proptest::prelude::*;
use wfscope::window::{bspline_profile, bspline_profile_deriv};
use wfscope::{bump_profile, bump_profile_deriv, AuditWindow, BumpAtom, WindowFn, WindowSpec, WfError};

// sup-norm oracles for the standard bump profile on [-1, 1]
const SUP_BUMP_D1: f64 = 2.1703570857103385;
const SUP_BUMP_D2: f64 = 21.06588211892646;

#[test]
fn bump_profile_frozen_values() {
    assert_eq!(bump_profile(0.0), 1.0);
    assert!((bump_profile(0.5) - 0.7165313105737893).abs() < 1e-15); // e^{-1/3}
    assert!((bump_profile(0.3) - 0.905832291402568).abs() < 1e-14);
    assert_eq!(bump_profile(1.0), 0.0);
    assert_eq!(bump_profile(-1.0), 0.0);
    assert_eq!(bump_profile(7.5), 0.0);
}

#[test]
fn bump_profile_integrals() {
    // trapezoid converges beyond any fixed order here because every
    // derivative vanishes at the endpoints
    let n = 1 << 16;
    let h = 2.0 / n as f64;
    let mut i1 = 0.0;
    let mut i2 = 0.0;
    for i in 0..=n {
        let u = -1.0 + i as f64 * h;
        let w = if i == 0 || i == n { 0.5 } else { 1.0 };
        let v = bump_profile(u);
        i1 += w * v * h;
        i2 += w * v * v * h;
    }
    assert!((i1 - 1.2069003224378762).abs() < 1e-13, "int bump = {i1}");
    assert!((i2 - 0.9833808129127265).abs() < 1e-13, "int bump^2 = {i2}");
}

#[test]
fn bump_derivatives_match_finite_differences() {
    let h = 1e-5;
    for k in 1..=6usize {
        for &u in &[0.0, 0.3, -0.3, 0.6, -0.45, 0.8] {
            let fd = (bump_profile_deriv(k - 1, u + h) - bump_profile_deriv(k - 1, u - h)) / (2.0 * h);
            let an = bump_profile_deriv(k, u);
            let scale = an.abs().max(fd.abs()).max(1.0);
            assert!(
                (an - fd).abs() < 1e-4 * scale,
                "k={k} u={u}: analytic {an} vs fd {fd}"
            );
        }
    }
}

#[test]
fn bump_derivatives_vanish_outside_and_flatten_at_edge() {
    for k in 0..=8 {
        assert_eq!(bump_profile_deriv(k, 1.0), 0.0);
        assert_eq!(bump_profile_deriv(k, -1.2), 0.0);
        // all derivatives decay to zero approaching the support edge
        assert!(bump_profile_deriv(k, 0.9999).abs() < 1e-30);
    }
    assert_eq!(bump_profile_deriv(0, 0.5), bump_profile(0.5));
    // odd derivatives are odd, even derivatives even
    assert_eq!(bump_profile_deriv(1, 0.0), 0.0);
    assert!((bump_profile_deriv(1, 0.4) + bump_profile_deriv(1, -0.4)).abs() < 1e-15);
    assert!((bump_profile_deriv(2, 0.4) - bump_profile_deriv(2, -0.4)).abs() < 1e-15);
}

#[test]
fn window_eval_radial_and_scaled() {
    let w = WindowSpec::bump(1.0, 1.0);
    assert_eq!(w.eval(&[0.0]), 1.0);
    assert!((w.eval(&[-0.3]) - 0.905832291402568).abs() < 1e-14);
    // 3-4-5: |(0.3, 0.4)| = 0.5 exactly
    assert!((w.eval(&[0.3, 0.4]) - bump_profile(0.5)).abs() < 1e-15);
    assert_eq!(w.eval(&[1.0]), 0.0);
    assert_eq!(w.eval(&[0.8, 0.8]), 0.0);

    let w2 = WindowSpec::bump(2.0, 3.0);
    assert!((w2.eval(&[1.0]) - 3.0 * bump_profile(0.5)).abs() < 1e-14);
    assert_eq!(w2.eval(&[0.0]), 3.0);
}

#[test]
fn window_ids_and_smoothness() {
    assert_eq!(WindowSpec::bump(0.35, 1.0).id(), "bump:0.35");
    assert_eq!(WindowSpec::bspline(3, 0.5, 1.0).id(), "bspline3:0.5");
    assert_eq!(WindowSpec::bump(1.0, 1.0).smoothness(), None);
    assert_eq!(WindowSpec::bspline(3, 1.0, 1.0).smoothness(), Some(2));
    assert_eq!(WindowSpec::bspline(1, 1.0, 1.0).smoothness(), Some(0));
}

#[test]
fn bump_seminorms_frozen_and_monotone() {
    let w = WindowSpec::bump(1.0, 1.0);
    let s0 = w.seminorm(0).unwrap();
    let s1 = w.seminorm(1).unwrap();
    let s2 = w.seminorm(2).unwrap();
    assert!((s0 - 1.0).abs() < 1e-9, "seminorm(0) = {s0}");
    assert!((s1 - SUP_BUMP_D1).abs() < 1e-4 * SUP_BUMP_D1, "seminorm(1) = {s1}");
    assert!((s2 - SUP_BUMP_D2).abs() < 1e-4 * SUP_BUMP_D2, "seminorm(2) = {s2}");
    let mut prev = 0.0;
    for k in 0..=5 {
        let s = w.seminorm(k).unwrap();
        assert!(s >= prev, "seminorm not monotone at k={k}");
        prev = s;
    }
    // amplitude scales all seminorms linearly
    let w3 = WindowSpec::bump(1.0, 3.0);
    assert!((w3.seminorm(1).unwrap() - 3.0 * s1).abs() < 1e-3 * s1);
    // widening the support shrinks derivative sups by 1/r^k
    let wr = WindowSpec::bump(2.0, 1.0);
    assert!((wr.seminorm(1).unwrap() - SUP_BUMP_D1 / 2.0).abs() < 1e-3);
}

#[test]
fn seminorm_order_limits() {
    let bump = WindowSpec::bump(1.0, 1.0);
    assert!(bump.seminorm(12).is_ok());
    match bump.seminorm(13) {
        Err(WfError::SeminormOrder { k: 13, max: 12 }) => {}
        other => panic!("expected seminorm order error, got {other:?}"),
    }
    let bs = WindowSpec::bspline(3, 1.0, 1.0);
    assert!(bs.profile_deriv(2, 0.1).is_ok());
    assert!(matches!(bs.profile_deriv(3, 0.1), Err(WfError::SeminormOrder { k: 3, max: 2 })));
    assert!(bs.seminorm(2).is_ok());
    assert!(bs.seminorm(3).is_err());
}

#[test]
fn bspline_profile_classical_values() {
    assert_eq!(bspline_profile(0, 0.0), 1.0);
    assert_eq!(bspline_profile(0, 0.7), 0.0);
    assert_eq!(bspline_profile(1, 0.0), 1.0);
    assert!((bspline_profile(1, 0.5) - 0.5).abs() < 1e-15);
    assert!((bspline_profile(2, 0.0) - 0.75).abs() < 1e-15);
    assert!((bspline_profile(3, 0.0) - 2.0 / 3.0).abs() < 1e-15);
    assert!((bspline_profile(3, 1.0) - 1.0 / 6.0).abs() < 1e-15);
    for m in 0..=4 {
        let h = (m as f64 + 1.0) / 2.0;
        assert_eq!(bspline_profile(m, h), 0.0);
        assert_eq!(bspline_profile(m, -h - 0.1), 0.0);
    }
}

#[test]
fn bspline_integrates_to_one() {
    for m in [1usize, 2, 3, 4] {
        let h = (m as f64 + 1.0) / 2.0;
        let n = 1 << 15;
        let step = 2.0 * h / n as f64;
        let mut total = 0.0;
        for i in 0..=n {
            let w = if i == 0 || i == n { 0.5 } else { 1.0 };
            total += w * bspline_profile(m, -h + i as f64 * step) * step;
        }
        assert!((total - 1.0).abs() < 1e-8, "degree {m}: integral {total}");
    }
}

#[test]
fn bspline_derivative_recursion_matches_finite_differences() {
    let h = 1e-6;
    for m in [2usize, 3, 4] {
        for &x in &[0.0, 0.3, -0.8, 1.2] {
            let fd = (bspline_profile(m, x + h) - bspline_profile(m, x - h)) / (2.0 * h);
            let an = bspline_profile_deriv(m, 1, x);
            assert!((an - fd).abs() < 1e-6, "m={m} x={x}: {an} vs {fd}");
        }
    }
}

#[test]
fn bspline_window_tensor_support() {
    let w = WindowSpec::bspline(3, 1.0, 1.0);
    // center value: product of per-axis B_3(0)
    assert!((w.eval(&[0.0, 0.0]) - 4.0 / 9.0).abs() < 1e-15);
    // per-axis half-width is r / sqrt(2); beyond it the tensor vanishes even
    // though |t| < r
    let half = 1.0 / 2.0f64.sqrt();
    assert_eq!(w.eval(&[half + 1e-9, 0.0]), 0.0);
    assert!(w.eval(&[half - 1e-3, 0.0]) > 0.0);
    // in d = 1 the half-width is r itself
    assert!(w.eval(&[0.9]) > 0.0);
    assert_eq!(w.eval(&[1.0]), 0.0);
}

#[test]
fn audit_window_sums_atoms() {
    let w = AuditWindow {
        atoms: vec![
            BumpAtom { amplitude: 1.0, center: -0.1, radius: 0.2 },
            BumpAtom { amplitude: 0.5, center: 0.15, radius: 0.2 },
        ],
    };
    assert!((w.support_radius() - 0.35).abs() < 1e-15);
    // atoms do not overlap at -0.1 (distance 0.25 > radius 0.2)
    assert!((w.eval(-0.1) - 1.0).abs() < 1e-15);
    assert_eq!(w.eval(0.4), 0.0);
    // additivity against the profile directly
    let expect = bump_profile(0.15 / 0.2) + 0.5 * bump_profile(-0.1 / 0.2);
    assert!((w.eval(0.05) - expect).abs() < 1e-15);
    // derivative is the sum of scaled profile derivatives
    let h = 1e-6;
    let fd = (w.eval(0.05 + h) - w.eval(0.05 - h)) / (2.0 * h);
    assert!((w.deriv(1, 0.05) - fd).abs() < 1e-5);
    // seminorms are finite, positive, monotone
    let s0 = w.seminorm(0);
    let s1 = w.seminorm(1);
    assert!(s0 > 0.0 && s1 >= s0);
    assert_eq!(w.window_id(), "audit-sum[2]");
    assert!((WindowFn::radius(&w) - 0.35).abs() < 1e-15);
}

proptest! {
    #[test]
    fn bump_profile_even_bounded(u in -3.0f64..3.0) {
        let v = bump_profile(u);
        prop_assert!((0.0..=1.0).contains(&v));
        prop_assert_eq!(v.to_bits(), bump_profile(-u).to_bits());
        if u.abs() >= 1.0 {
            prop_assert_eq!(v, 0.0);
        } else {
            prop_assert!(v > 0.0);
        }
    }

    #[test]
    fn bspline_partition_of_unity(x in -2.0f64..2.0, m in 1usize..5) {
        let total: f64 = (-6i32..=6).map(|k| bspline_profile(m, x - k as f64)).sum();
        prop_assert!((total - 1.0).abs() < 1e-12, "m={} x={}: {}", m, x, total);
    }

    #[test]
    fn window_support_is_sharp(r in 0.2f64..3.0, scale in 1.001f64..2.0) {
        let w = WindowSpec::bump(r, 1.0);
        prop_assert_eq!(w.eval(&[r * scale]), 0.0);
        prop_assert!(w.eval(&[r * 0.99, 0.0]) == 0.0 || r * 0.99 < r);
        prop_assert!(w.eval(&[0.5 * r]) > 0.0);
    }
}
