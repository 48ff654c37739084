//! Inverse design: forward-constructed bands must come back to the
//! same family with the original parameters.

use triband::solutions::{classify, design, forward_construct, FamilyExtras, FilterFamily};
use triband::ZolotarevFraction;

#[test]
fn classify_orders_candidates() {
    let zf = ZolotarevFraction::new(4, 0.5).unwrap();
    let bands = zf.genus1_three_band(1, 1.3, 1.7).unwrap();
    let a = classify(&bands, 4, [1, 0, 1]).unwrap();
    assert_eq!(
        a,
        vec![
            FilterFamily::Genus2Stiefel,
            FilterFamily::Genus1Zolotarev,
            FilterFamily::Genus3TwoSlit
        ]
    );
    let b = classify(&bands, 4, [1, 1, 0]).unwrap();
    assert_eq!(
        b,
        vec![
            FilterFamily::Genus3Octagon,
            FilterFamily::Genus3DecagonPlus,
            FilterFamily::Genus3DecagonMinus
        ]
    );
    // parity violation
    assert!(classify(&bands, 4, [1, 0, 0]).is_err());
}

#[test]
fn genus2_roundtrip() {
    let (t, n, m, h) = (0.4, 5u32, 2u32, 0.3);
    let (_, bands) = forward_construct(
        FilterFamily::Genus2Stiefel,
        t,
        n,
        m,
        FamilyExtras::Genus2 { h, v: m as f64 },
    )
    .unwrap();
    let out = design(&bands, n, FilterFamily::Genus2Stiefel.sigma(n)).unwrap();
    assert_eq!(out.family, FilterFamily::Genus2Stiefel, "attempts: {:?}", out.attempts);
    assert_eq!(out.recovered.m, m);
    assert!(
        (out.recovered.t - t).abs() < 1e-6 * t,
        "t {} vs {}",
        out.recovered.t,
        t
    );
    let FamilyExtras::Genus2 { h: hr, v } = out.recovered.extras else {
        panic!("wrong extras");
    };
    assert!((hr - h).abs() < 1e-6 * (1.0 + h.abs()), "h {hr} vs {h}");
    assert!((v - m as f64).abs() < 1e-5, "v {v} vs m {m}");
    assert_eq!(out.report.alternation_count, 2 * n as usize + 2);
}

#[test]
fn two_slit_roundtrip() {
    let (t, n, m, h1, h2) = (0.5, 5u32, 2u32, -0.2, 0.4);
    let (_, bands) = forward_construct(
        FilterFamily::Genus3TwoSlit,
        t,
        n,
        m,
        FamilyExtras::TwoSlit { h1, h2 },
    )
    .unwrap();
    let out = design(&bands, n, FilterFamily::Genus3TwoSlit.sigma(n)).unwrap();
    assert_eq!(out.family, FilterFamily::Genus3TwoSlit, "attempts: {:?}", out.attempts);
    assert_eq!(out.recovered.m, m);
    assert!((out.recovered.t - t).abs() < 1e-6 * t);
    let FamilyExtras::TwoSlit { h1: r1, h2: r2 } = out.recovered.extras else {
        panic!("wrong extras");
    };
    assert!((r1 - h1).abs() < 1e-6 * (1.0 + h1.abs()), "h1 {r1} vs {h1}");
    assert!((r2 - h2).abs() < 1e-6 * (1.0 + h2.abs()), "h2 {r2} vs {h2}");
}

#[test]
fn zolotarev_bands_select_genus1() {
    // lacuna strictly inside one quantum: the genus-1 family wins
    let (t, n) = (0.5, 4u32);
    let (_, bands) = forward_construct(
        FilterFamily::Genus1Zolotarev,
        t,
        n,
        1,
        FamilyExtras::Genus1 { v1: 1.25, v2: 1.75 },
    )
    .unwrap();
    let out = design(&bands, n, [1, 0, 1]).unwrap();
    assert_eq!(out.family, FilterFamily::Genus1Zolotarev, "attempts: {:?}", out.attempts);
    assert!((out.recovered.t - t).abs() < 1e-8);
    let FamilyExtras::Genus1 { v1, v2 } = out.recovered.extras else {
        panic!("wrong extras");
    };
    assert!((v1 - 1.25).abs() < 1e-7, "v1 {v1}");
    assert!((v2 - 1.75).abs() < 1e-7, "v2 {v2}");
}

#[test]
fn octagon_roundtrip_recovers_conjugate_pair() {
    let (t, n, m) = (0.6, 5u32, 2u32);
    let (c_re, c_im) = (0.2, 2.5 * t);
    let (sol_fwd, bands) = forward_construct(
        FilterFamily::Genus3Octagon,
        t,
        n,
        m,
        FamilyExtras::Octagon { c_re, c_im },
    )
    .unwrap();
    let out = design(&bands, n, FilterFamily::Genus3Octagon.sigma(n)).unwrap();
    assert_eq!(out.family, FilterFamily::Genus3Octagon, "attempts: {:?}", out.attempts);
    assert!((out.recovered.t - t).abs() < 1e-6 * t);
    let FamilyExtras::Octagon { c_re: rr, c_im: ri } = out.recovered.extras else {
        panic!("wrong extras");
    };
    assert!(
        ((rr - c_re).powi(2) + (ri - c_im).powi(2)).sqrt() < 1e-5,
        "c {rr}+{ri}i vs {c_re}+{c_im}i"
    );
    // the conjugate zero pair itself agrees to 1e-5
    let triband::conformal::DifferentialZeros::ConjugatePair { re: a0, im: b0 } =
        sol_fwd.hd.zeros
    else {
        panic!()
    };
    let triband::conformal::DifferentialZeros::ConjugatePair { re: a1, im: b1 } =
        out.solution.hd.zeros
    else {
        panic!()
    };
    assert!(
        ((a1 - a0).powi(2) + (b1 - b0).powi(2)).sqrt() < 1e-5,
        "pair ({a1},{b1}) vs ({a0},{b0})"
    );
}
