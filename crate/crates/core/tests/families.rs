//! Forward construction and certification of the six solution families.

use num_complex::Complex64;
use triband::elliptic::modulus_from_t;
use triband::solutions::{
    eval_solution, forward_construct, phase_shift, FamilyExtras, FilterFamily,
};
use triband::verify;
use triband::ZolotarevFraction;

fn certify(family: FilterFamily, t: f64, n: u32, m: u32, extras: FamilyExtras) {
    let (sol, bands) = forward_construct(family, t, n, m, extras).unwrap();
    let ev = sol.evaluator().unwrap();
    let f = |x: f64| ev.eval(x).unwrap_or(f64::INFINITY);
    let report = verify::full_report(&f, sol.scale(), &bands, n as usize, &sol.modulus, 128)
        .unwrap();
    assert_eq!(
        report.alternation_count,
        2 * n as usize + 2,
        "{}: alternation count (report: {report:?})",
        family.name()
    );
    assert_eq!(report.sigma, family.sigma(n), "{}: class", family.name());
    assert!(
        report.degree_fit_residual < 1e-7,
        "{}: fit residual {}",
        family.name(),
        report.degree_fit_residual
    );
    assert_eq!(
        report.extremality,
        family.genus() as u32,
        "{}: extremality",
        family.name()
    );
    assert!(report.theorem1_ok, "{}: extension check", family.name());
    // mu agrees with the deviation formula
    assert!(
        (report.mu - sol.mu).abs() < 1e-8,
        "{}: mu {} vs formula {}",
        family.name(),
        report.mu,
        sol.mu
    );
}

#[test]
fn genus1_family_certifies() {
    certify(
        FilterFamily::Genus1Zolotarev,
        0.5,
        4,
        1,
        FamilyExtras::Genus1 { v1: 1.3, v2: 1.7 },
    );
}

#[test]
fn genus2_family_certifies() {
    certify(
        FilterFamily::Genus2Stiefel,
        0.5,
        5,
        2,
        FamilyExtras::Genus2 { h: 0.3, v: 2.5 },
    );
}

#[test]
fn two_slit_family_certifies() {
    certify(
        FilterFamily::Genus3TwoSlit,
        0.5,
        5,
        2,
        FamilyExtras::TwoSlit { h1: -0.2, h2: 0.4 },
    );
}

#[test]
fn octagon_family_certifies() {
    certify(
        FilterFamily::Genus3Octagon,
        0.6,
        5,
        2,
        FamilyExtras::Octagon {
            c_re: 0.2,
            c_im: 1.5,
        },
    );
}

#[test]
fn decagon_plus_family_certifies() {
    certify(
        FilterFamily::Genus3DecagonPlus,
        0.6,
        5,
        2,
        FamilyExtras::Decagon { h1: -0.3, h2: 0.2 },
    );
}

#[test]
fn decagon_minus_family_certifies() {
    certify(
        FilterFamily::Genus3DecagonMinus,
        0.6,
        5,
        1,
        FamilyExtras::Decagon { h1: -0.3, h2: 0.2 },
    );
}

#[test]
fn genus1_matches_zolotarev_fraction() {
    // the genus-1 family evaluated through the Ansatz must agree with
    // the Zolotarev fraction in its own coordinates
    let (t, n) = (0.5, 4u32);
    let (sol, bands) = forward_construct(
        FilterFamily::Genus1Zolotarev,
        t,
        n,
        1,
        FamilyExtras::Genus1 { v1: 1.3, v2: 1.7 },
    )
    .unwrap();
    let zf = ZolotarevFraction::new(n, t).unwrap();
    let ev = sol.evaluator().unwrap();
    for &x in &[-3.0, -1.0, 0.3, 1.0, 1.8, bands.e2plus.hi] {
        let a = ev.eval(x).unwrap();
        let b = zf.eval_real(x).unwrap();
        assert!((a - b).abs() < 1e-8 * (1.0 + b.abs()), "x = {x}: {a} vs {b}");
    }
}

#[test]
fn phase_shift_table() {
    let md = modulus_from_t(0.7).unwrap();
    assert_eq!(phase_shift(1.0, &md).unwrap(), Complex64::new(1.0, 0.0));
    assert_eq!(phase_shift(-1.0, &md).unwrap(), Complex64::new(-1.0, 0.0));
    assert_eq!(
        phase_shift(md.kinv, &md).unwrap(),
        Complex64::new(1.0, md.t)
    );
    assert_eq!(
        phase_shift(-md.kinv, &md).unwrap(),
        Complex64::new(-1.0, md.t)
    );
    assert!(phase_shift(0.37, &md).is_err());
    // opposite offsets produce R and -R
    use triband::elliptic::x_map;
    for &(re, im) in &[(0.3, 0.1), (-0.2, 0.4)] {
        let z = Complex64::new(re, im);
        let plus = x_map(z + 1.0, &md);
        let minus = x_map(z - 1.0, &md);
        assert!((plus + minus).norm() < 1e-12 * (1.0 + plus.norm()));
    }
}

#[test]
fn anchor_value_matches_phase_table() {
    // R at the anchor branchpoint equals the anchor value, and the
    // stored offset is the table entry for it
    let (sol, _) = forward_construct(
        FilterFamily::Genus2Stiefel,
        0.5,
        5,
        2,
        FamilyExtras::Genus2 { h: 0.3, v: 2.0 },
    )
    .unwrap();
    let anchor = sol.hd.branchpoints[0];
    let at_anchor = eval_solution(&sol, anchor).unwrap();
    assert!((at_anchor - sol.anchor_value).abs() < 1e-9 * (1.0 + at_anchor.abs()));
    let offset = phase_shift(sol.anchor_value, &sol.modulus).unwrap();
    assert_eq!(offset, Complex64::new(sol.phase_re, sol.phase_im));
    // n = 5 quanta on the left wall: the top-left corner carries -kinv
    assert!((sol.anchor_value + sol.modulus.kinv).abs() < 1e-9);
}

#[test]
fn genus2_slit_tip_value_escapes_q() {
    // the critical value at the slit tip lies outside {+-1, +-kinv}
    let (sol, _) = forward_construct(
        FilterFamily::Genus2Stiefel,
        0.5,
        5,
        2,
        FamilyExtras::Genus2 { h: 0.3, v: 2.5 },
    )
    .unwrap();
    let tip = sol.hd.real_zeros()[0];
    let v = eval_solution(&sol, tip).unwrap();
    let md = &sol.modulus;
    for q in [1.0, -1.0, md.kinv, -md.kinv] {
        assert!((v - q).abs() > 1e-3, "tip value {v} too close to {q}");
    }
}

#[test]
fn genus2_band_split_at_slit_quantum() {
    // v = m: the second passband begins exactly at the upper slit-mouth
    // prevertex
    let (t, n, m) = (0.5, 5u32, 2u32);
    let (sol, bands) = forward_construct(
        FilterFamily::Genus2Stiefel,
        t,
        n,
        m,
        FamilyExtras::Genus2 { h: 0.3, v: m as f64 },
    )
    .unwrap();
    // markers: [e1, e2, e3, e4, z, e5, e6]; the C' prevertex is the
    // fifth branchpoint
    let cprime = sol.hd.branchpoints[4];
    assert!(
        (bands.e2plus.lo - cprime).abs() < 1e-7 * (1.0 + cprime.abs()),
        "band start {} vs prevertex {}",
        bands.e2plus.lo,
        cprime
    );
    // and the solution still alternates 2n+2 times
    let ev = sol.evaluator().unwrap();
    let f = |x: f64| ev.eval(x).unwrap_or(f64::INFINITY);
    let scale = sol.scale();
    let g = |x: f64| scale * f(x);
    let mu = verify::sup_error(&g, &bands, 128).unwrap();
    let (_, count, _) = verify::alternation_points(&g, &bands, mu).unwrap();
    assert_eq!(count, 2 * n as usize + 2);
}

#[test]
fn two_slit_fake_passband_in_lacuna() {
    let (sol, bands) = forward_construct(
        FilterFamily::Genus3TwoSlit,
        0.5,
        5,
        2,
        FamilyExtras::TwoSlit { h1: -0.2, h2: 0.4 },
    )
    .unwrap();
    let ev = sol.evaluator().unwrap();
    let scale = sol.scale();
    let f = |x: f64| scale * ev.eval(x).unwrap_or(f64::INFINITY);
    let mu = verify::sup_error(&f, &bands, 128).unwrap();
    let ext = verify::extended_bands(&f, &bands, mu);
    // four segments: three bands plus the fake passband in T12
    assert_eq!(ext.len(), 4, "extension {ext:?}");
    let t12 = bands.t12();
    let fake = ext
        .iter()
        .find(|seg| seg.lo > t12.lo && seg.hi < t12.hi)
        .expect("fake band inside the lacuna");
    // the fake band carries exactly one oscillation: the value runs the
    // envelope exactly once, hitting +1-mu and +1+mu once each
    let mid_val = f(fake.midpoint());
    assert!(mid_val > 0.0, "fake passband has positive values");
    // two irregular critical points flank it: the differential zeros
    // project into the two flanking gap components
    let zeros = sol.hd.real_zeros();
    assert_eq!(zeros.len(), 2);
    assert!(zeros[0] > t12.lo && zeros[0] < fake.lo);
    assert!(zeros[1] > fake.hi && zeros[1] < t12.hi);
}

#[test]
fn oscillation_counts_per_family() {
    // expected envelope touches per band: oscillations + 1
    let cases: [(FilterFamily, f64, u32, u32, FamilyExtras, [usize; 3]); 3] = [
        (
            FilterFamily::Genus2Stiefel,
            0.5,
            5,
            2,
            FamilyExtras::Genus2 { h: 0.3, v: 2.5 },
            // stopband n, passbands (m, n-m-1) oscillations
            [6, 3, 3],
        ),
        (
            FilterFamily::Genus3TwoSlit,
            0.5,
            5,
            2,
            FamilyExtras::TwoSlit { h1: -0.2, h2: 0.4 },
            [6, 3, 3],
        ),
        (
            FilterFamily::Genus3Octagon,
            0.6,
            5,
            2,
            FamilyExtras::Octagon {
                c_re: 0.2,
                c_im: 1.5,
            },
            // stopband n-1, passbands (m+1, n-m-1)
            [5, 4, 3],
        ),
    ];
    for (family, t, n, m, extras, expect) in cases {
        let (sol, bands) = forward_construct(family, t, n, m, extras).unwrap();
        let ev = sol.evaluator().unwrap();
        let scale = sol.scale();
        let f = |x: f64| scale * ev.eval(x).unwrap_or(f64::INFINITY);
        let mu = verify::sup_error(&f, &bands, 128).unwrap();
        let (pts, _, _) = verify::alternation_points(&f, &bands, mu).unwrap();
        let mut counts = [0usize; 3];
        for p in &pts {
            for (bi, band) in bands.bands().iter().enumerate() {
                if band.contains(*p) {
                    counts[bi] += 1;
                }
            }
        }
        assert_eq!(counts, expect, "{}", family.name());
    }
}

#[test]
fn forward_validates_parameters() {
    // m out of range
    assert!(forward_construct(
        FilterFamily::Genus2Stiefel,
        0.5,
        5,
        5,
        FamilyExtras::Genus2 { h: 0.3, v: 5.0 }
    )
    .is_err());
    // n = 1 slit rectangle has an empty m-range
    assert!(forward_construct(
        FilterFamily::Genus2Stiefel,
        0.5,
        1,
        1,
        FamilyExtras::Genus2 { h: 0.3, v: 1.0 }
    )
    .is_err());
    // octagon branchpoint outside its cell
    assert!(forward_construct(
        FilterFamily::Genus3Octagon,
        0.6,
        5,
        2,
        FamilyExtras::Octagon {
            c_re: 0.2,
            c_im: 0.3
        }
    )
    .is_err());
    // genus-1 degenerate split
    assert!(forward_construct(
        FilterFamily::Genus1Zolotarev,
        0.5,
        4,
        0,
        FamilyExtras::Genus1 { v1: 0.0, v2: 0.5 }
    )
    .is_err());
    // mismatched extras
    assert!(forward_construct(
        FilterFamily::Genus2Stiefel,
        0.5,
        5,
        2,
        FamilyExtras::TwoSlit { h1: 0.0, h2: 0.1 }
    )
    .is_err());
}
