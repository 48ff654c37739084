//! Certification of candidate solutions: sup error, alternation
//! extraction, topological class, extremality number, extended bands
//! and the single-lacuna check, and rational-degree fitting.

use crate::bands::{BandSystem, Interval};
use crate::elliptic::EllipticModulus;
use crate::error::{Error, Result};
use crate::rational::{fit_rational, poly_eval, poly_roots, RationalFunction};

/// Envelope tolerance for alternation detection (relative to mu).
const ENVELOPE_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct VerificationReport {
    pub mu: f64,
    pub alternation_points: Vec<f64>,
    pub alternation_count: usize,
    /// true when every envelope touch took part in the alternating
    /// sequence (no same-sign adjacent touches were dropped)
    pub alternation_signs_ok: bool,
    pub sigma: [u8; 3],
    pub extremality: u32,
    pub extended_segments: Vec<Interval>,
    pub theorem1_ok: bool,
    pub degree_fit_residual: f64,
}

fn band_sign(band_idx: usize) -> f64 {
    if band_idx == 0 {
        -1.0
    } else {
        1.0
    }
}

/// Golden-section refinement of a local maximum of f on [a, b].
fn golden_max<F: Fn(f64) -> f64>(f: &F, mut a: f64, mut b: f64) -> (f64, f64) {
    let phi = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - phi * (b - a);
    let mut d = a + phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..200 {
        if (b - a).abs() < 1e-12 * (1.0 + a.abs()) {
            break;
        }
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + phi * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}

/// Chebyshev-Lobatto grid on [lo, hi], endpoints included.
fn cheb_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..=n)
        .map(|j| {
            let c = (std::f64::consts::PI * j as f64 / n as f64).cos();
            0.5 * (lo + hi) - 0.5 * (hi - lo) * c
        })
        .collect()
}

/// Max of |R - S_E| over the bands: Chebyshev grids polished by
/// golden-section refinement.  A pole inside a band comes back as an
/// infinite error.
pub fn sup_error<F: Fn(f64) -> f64>(
    r: &F,
    bands: &BandSystem,
    grid_density: usize,
) -> Result<f64> {
    if grid_density < 64 {
        return Err(Error::Domain(format!(
            "grid_density must be at least 64 per band, got {grid_density}"
        )));
    }
    let mut worst = 0.0_f64;
    for (bi, band) in bands.bands().iter().enumerate() {
        let s = band_sign(bi);
        let err = |x: f64| (r(x) - s).abs();
        let grid = cheb_grid(band.lo, band.hi, grid_density);
        let vals: Vec<f64> = grid.iter().map(|&x| err(x)).collect();
        if vals.iter().any(|v| !v.is_finite()) {
            return Ok(f64::INFINITY);
        }
        for j in 0..vals.len() {
            let is_local_max = (j == 0 || vals[j] >= vals[j - 1])
                && (j == vals.len() - 1 || vals[j] >= vals[j + 1]);
            if is_local_max {
                let a = if j == 0 { grid[0] } else { grid[j - 1] };
                let b = if j == vals.len() - 1 {
                    grid[vals.len() - 1]
                } else {
                    grid[j + 1]
                };
                let (_, v) = golden_max(&err, a, b);
                worst = worst.max(v.max(vals[j]));
            }
        }
    }
    Ok(worst)
}

/// Envelope touches of the error, one representative each, restricted
/// to an alternating sign sequence along the band order.  Returns the
/// points, the achieved alternation count, and whether the raw touch
/// sequence already alternated.
pub fn alternation_points<F: Fn(f64) -> f64>(
    r: &F,
    bands: &BandSystem,
    mu: f64,
) -> Result<(Vec<f64>, usize, bool)> {
    if !(mu > 0.0) || !mu.is_finite() {
        return Err(Error::Domain(format!("mu must be positive, got {mu}")));
    }
    let threshold = (1.0 - ENVELOPE_TOL) * mu;
    // interior envelope touches are extremely narrow (the error is
    // locally quadratic with curvature ~ mu), so hunt every local
    // maximum of |delta| on the grid and polish before thresholding
    let mut touches: Vec<(f64, f64, f64)> = Vec::new(); // (x, |delta|, sign)
    for (bi, band) in bands.bands().iter().enumerate() {
        let s = band_sign(bi);
        let delta = |x: f64| r(x) - s;
        let absd = |x: f64| delta(x).abs();
        let grid = cheb_grid(band.lo, band.hi, 2048);
        let vals: Vec<f64> = grid.iter().map(|&x| absd(x)).collect();
        let mut band_touches: Vec<(f64, f64, f64)> = Vec::new();
        for j in 0..vals.len() {
            let is_local_max = (j == 0 || vals[j] >= vals[j - 1])
                && (j == vals.len() - 1 || vals[j] >= vals[j + 1]);
            if !is_local_max {
                continue;
            }
            let a = if j == 0 { grid[0] } else { grid[j - 1] };
            let b = if j == vals.len() - 1 {
                grid[vals.len() - 1]
            } else {
                grid[j + 1]
            };
            let (px, pv) = golden_max(&absd, a, b);
            let (px, pv) = if pv >= vals[j] { (px, pv) } else { (grid[j], vals[j]) };
            if pv < threshold {
                continue;
            }
            let sg = delta(px).signum();
            // dedupe maxima that polished into the same touch
            match band_touches.last_mut() {
                Some(last) if (last.0 - px).abs() < 1e-7 * (1.0 + band.len()) => {
                    if pv > last.1 {
                        *last = (px, pv, sg);
                    }
                }
                _ => band_touches.push((px, pv, sg)),
            }
        }
        touches.extend(band_touches);
    }
    touches.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    // longest alternating subsequence: keep the strongest of each
    // same-sign run
    let mut kept: Vec<(f64, f64, f64)> = Vec::new();
    for t in &touches {
        match kept.last_mut() {
            Some(last) if last.2 == t.2 => {
                if t.1 > last.1 {
                    *last = *t;
                }
            }
            _ => kept.push(*t),
        }
    }
    let ok = kept.len() == touches.len();
    Ok((kept.iter().map(|t| t.0).collect(), kept.len(), ok))
}

fn effective_degree(c: &[f64], rel_tol: f64) -> usize {
    let scale = c.iter().fold(0.0_f64, |a, &v| a.max(v.abs()));
    let mut d = c.len().saturating_sub(1);
    while d > 0 && c[d].abs() <= rel_tol * scale {
        d -= 1;
    }
    d
}

/// Parity of the zero count of the numerator in each transient band
/// (zeros at infinity counted in T2).
pub fn topological_class(r: &RationalFunction, bands: &BandSystem) -> Result<[u8; 3]> {
    // class is defined only for competitors with deviation below one
    for band in bands.bands() {
        let probe = r.eval(band.midpoint());
        if !probe.is_finite() || probe.abs() > 2.5 {
            return Err(Error::Domain(
                "topological class undefined: deviation not below one".into(),
            ));
        }
    }
    let p = &r.numerator;
    let e = bands.endpoints();
    // odd-multiplicity zeros flip the sign of p; even ones are invisible
    // and contribute 0 mod 2 anyway
    let flip = |a: f64, b: f64| -> u8 {
        if poly_eval(p, a).signum() != poly_eval(p, b).signum() {
            1
        } else {
            0
        }
    };
    let sigma1 = flip(e[1], e[2]);
    let sigma12 = flip(e[3], e[4]);
    // T2 wraps through infinity: two finite rays plus the zero at
    // infinity, whose multiplicity is deg q - deg p when positive
    let dp = effective_degree(p, 1e-7);
    let dq = effective_degree(&r.denominator, 1e-7);
    let lead_sign = p[dp].signum();
    let sign_at = |x: f64| poly_eval(&p[..=dp], x).signum();
    let sign_plus_inf = lead_sign;
    let sign_minus_inf = if dp % 2 == 0 { lead_sign } else { -lead_sign };
    let mut sigma2 = 0u8;
    if sign_at(e[5]) != sign_plus_inf {
        sigma2 ^= 1;
    }
    if sign_minus_inf != sign_at(e[0]) {
        sigma2 ^= 1;
    }
    if dq > dp {
        sigma2 ^= ((dq - dp) % 2) as u8;
    }
    Ok([sigma1, sigma12, sigma2])
}

/// The extremality number: 1 plus the weighted count of critical
/// points, full weight off the four-value set Q = {+-1, +-1/k} and
/// floor(ord/2) on it.
pub fn extremality_number(r: &RationalFunction, md: &EllipticModulus) -> Result<u32> {
    let n = r.degree();
    if n == 0 {
        return Err(Error::Domain("extremality of a constant is undefined".into()));
    }
    let mut dn = r.deriv_numerator();
    // deg(p'q - pq') never exceeds 2n-2: the x^{2n-1} coefficient
    // cancels exactly, so whatever survives there is fit noise
    dn.truncate(2 * n - 1);
    let scale = dn.iter().fold(0.0_f64, |a, &v| a.max(v.abs()));
    if scale == 0.0 {
        return Err(Error::Domain("zero derivative".into()));
    }
    let roots = poly_roots(&dn)?;
    // cluster roots into critical points with multiplicities
    let mut clusters: Vec<(num_complex::Complex64, u32)> = Vec::new();
    'outer: for root in roots {
        for (c, m) in clusters.iter_mut() {
            if (*c - root).norm() < 1e-5 * (1.0 + root.norm()) {
                *c = (*c * (*m as f64) + root) / (*m as f64 + 1.0);
                *m += 1;
                continue 'outer;
            }
        }
        clusters.push((root, 1));
    }
    let q_set = [1.0, -1.0, md.kinv, -md.kinv];
    let in_q = |v: num_complex::Complex64| -> bool {
        q_set
            .iter()
            .any(|&q| (v - q).norm() <= 1e-7 * (1.0 + md.kinv))
    };
    let mut g = 1u32;
    for (c, mult) in &clusters {
        let val = r.eval_c(*c);
        if in_q(val) {
            g += mult / 2;
        } else {
            g += mult;
        }
    }
    // ramification at infinity: total order over the sphere is 2n - 2
    let total_finite: u32 = clusters.iter().map(|c| c.1).sum();
    if (2 * n as u32).saturating_sub(2) > total_finite {
        let ord_inf = 2 * n as u32 - 2 - total_finite;
        let v = r.eval_at_infinity();
        let vq = v.is_finite()
            && q_set.iter().any(|&q| (v - q).abs() <= 1e-7 * (1.0 + md.kinv));
        g += if vq { ord_inf / 2 } else { ord_inf };
    }
    Ok(g)
}

/// Real part of R^{-1}(R(E)): all maximal real intervals on which the
/// (rescaled) value stays inside the band envelope [1-mu, 1+mu] in
/// magnitude.  Always contains the bands themselves.
pub fn extended_bands<F: Fn(f64) -> f64>(r: &F, bands: &BandSystem, mu: f64) -> Vec<Interval> {
    let tol = 1e-9 + 1e-6 * mu;
    let in_env = |x: f64| {
        let v = r(x);
        v.is_finite() && (v.abs() - 1.0).abs() <= mu + tol
    };
    let e = bands.endpoints();
    let span = e[5] - e[0];
    // scan the three finite gaps and a margin of the wrap gap
    let mut segments: Vec<Interval> = bands.bands().to_vec();
    let mut scan = |lo: f64, hi: f64| {
        if hi <= lo {
            return;
        }
        let nstep = 4096;
        let mut run_start: Option<f64> = None;
        let mut prev = lo;
        for j in 0..=nstep {
            let x = lo + (hi - lo) * j as f64 / nstep as f64;
            let inside = in_env(x);
            if inside && run_start.is_none() {
                // refine the left edge between prev and x
                let (mut a, mut b) = (prev, x);
                for _ in 0..60 {
                    let m = 0.5 * (a + b);
                    if in_env(m) {
                        b = m;
                    } else {
                        a = m;
                    }
                }
                run_start = Some(if j == 0 { lo } else { 0.5 * (a + b) });
            } else if !inside {
                if let Some(st) = run_start.take() {
                    let (mut a, mut b) = (prev, x);
                    for _ in 0..60 {
                        let m = 0.5 * (a + b);
                        if in_env(m) {
                            a = m;
                        } else {
                            b = m;
                        }
                    }
                    segments.push(Interval::new(st, 0.5 * (a + b)));
                }
            }
            prev = x;
        }
        if let Some(st) = run_start.take() {
            segments.push(Interval::new(st, hi));
        }
    };
    scan(e[1], e[2]);
    scan(e[3], e[4]);
    scan(e[5], e[5] + 4.0 * span);
    scan(e[0] - 4.0 * span, e[0]);
    // merge touching segments
    segments.sort_by(|a, b| a.lo.partial_cmp(&b.lo).unwrap());
    let merge_tol = 1e-7 * span;
    let mut merged: Vec<Interval> = Vec::new();
    for seg in segments {
        match merged.last_mut() {
            Some(last) if seg.lo <= last.hi + merge_tol => {
                last.hi = last.hi.max(seg.hi);
            }
            _ => merged.push(seg),
        }
    }
    merged
}

/// True iff the extension beyond the bands avoids T1 and T2 entirely
/// and meets the lacuna T12 in at most one interval.
pub fn check_theorem1(extended: &[Interval], bands: &BandSystem) -> bool {
    let e = bands.endpoints();
    let span = e[5] - e[0];
    let tol = 1e-6 * span;
    let mut t12_pieces = 0usize;
    for seg in extended {
        // clip away the band parts; whatever remains lies in the gaps
        let mut rest: Vec<Interval> = vec![*seg];
        for band in bands.bands() {
            let mut next = Vec::new();
            for piece in rest {
                if piece.hi <= band.lo || piece.lo >= band.hi {
                    next.push(piece);
                    continue;
                }
                if piece.lo < band.lo - tol {
                    next.push(Interval::new(piece.lo, band.lo));
                }
                if piece.hi > band.hi + tol {
                    next.push(Interval::new(band.hi, piece.hi));
                }
            }
            rest = next;
        }
        for piece in rest {
            if piece.len() <= tol {
                continue;
            }
            let mid = piece.midpoint();
            if mid > e[1] && mid < e[2] {
                return false; // T1
            }
            if mid > e[3] && mid < e[4] {
                t12_pieces += 1;
            }
            if mid < e[0] || mid > e[5] {
                return false; // T2
            }
        }
    }
    t12_pieces <= 1
}

/// Least-squares linearized rational fit; the residual is measured on
/// held-out samples when enough are supplied.
pub fn rational_fit(samples: &[(f64, f64)], n: usize) -> Result<(RationalFunction, f64)> {
    if samples.len() >= 2 * (2 * n + 2) {
        let fit_set: Vec<(f64, f64)> = samples.iter().step_by(2).copied().collect();
        let held: Vec<(f64, f64)> = samples.iter().skip(1).step_by(2).copied().collect();
        let (rf, _) = fit_rational(&fit_set, n)?;
        let resid = held
            .iter()
            .map(|&(x, y)| (rf.eval(x) - y).abs() / (1.0 + y.abs()))
            .fold(0.0_f64, f64::max);
        Ok((rf, resid))
    } else {
        fit_rational(samples, n)
    }
}

/// Full certification of an evaluable candidate: the raw function `f`
/// is compared after multiplication by `scale` against the band
/// indicator; the four-value set comes from the modulus.
pub fn full_report<F: Fn(f64) -> f64>(
    f: &F,
    scale: f64,
    bands: &BandSystem,
    n: usize,
    md: &EllipticModulus,
    grid_density: usize,
) -> Result<VerificationReport> {
    let rescaled = |x: f64| scale * f(x);
    let mu = sup_error(&rescaled, bands, grid_density)?;
    if !mu.is_finite() {
        return Err(Error::Domain("pole inside a band".into()));
    }
    let (pts, count, signs_ok) = alternation_points(&rescaled, bands, mu)?;
    // degree fit on the unrescaled samples
    let per_band = (4 * n + 8).div_ceil(3).max(2 * n + 2);
    let mut samples = Vec::new();
    for band in bands.bands() {
        for j in 0..per_band {
            let theta = std::f64::consts::PI * (j as f64 + 0.5) / per_band as f64;
            let x = band.midpoint() - 0.5 * band.len() * theta.cos();
            samples.push((x, f(x)));
        }
    }
    samples.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let (rf, fit_resid) = rational_fit(&samples, n)?;
    let sigma = topological_class(&rf, bands)?;
    let extremality = extremality_number(&rf, md)?;
    let extended = extended_bands(&rescaled, bands, mu);
    let theorem1_ok = check_theorem1(&extended, bands);
    Ok(VerificationReport {
        mu,
        alternation_points: pts,
        alternation_count: count,
        alternation_signs_ok: signs_ok,
        sigma,
        extremality,
        extended_segments: extended,
        theorem1_ok,
        degree_fit_residual: fit_resid,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bands::{BandSystem, Interval};
    use crate::elliptic::modulus_from_t;
    use crate::zolotarev::ZolotarevFraction;
    use approx::assert_relative_eq;

    fn test_bands() -> BandSystem {
        BandSystem::new(
            Interval::new(-2.0, -1.0),
            Interval::new(1.0, 1.5),
            Interval::new(2.0, 3.0),
        )
        .unwrap()
    }

    #[test]
    fn sup_error_of_zero_function_is_one() {
        let bands = test_bands();
        let err = sup_error(&|_x| 0.0, &bands, 64).unwrap();
        assert_relative_eq!(err, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn sup_error_rejects_small_grid_and_flags_poles() {
        let bands = test_bands();
        assert!(sup_error(&|_x| 0.0, &bands, 32).is_err());
        let pole = |x: f64| 1.0 / (x + 1.5);
        assert_eq!(sup_error(&pole, &bands, 64).unwrap(), f64::INFINITY);
    }

    #[test]
    fn sup_error_matches_zolotarev_deviation() {
        let zf = ZolotarevFraction::new(3, 0.6).unwrap();
        let (scale, mu) = zf.rescaled_solution();
        let (em, ep) = zf.bands();
        // embed the two-band problem: split the passband at an
        // alternation-free segment to reuse the three-band plumbing
        let bands = zf.genus1_three_band(1, 1.3, 1.7).unwrap();
        let _ = (em, ep);
        let f = |x: f64| scale * zf.eval_real(x).unwrap();
        let got = sup_error(&f, &bands, 256).unwrap();
        assert!((got - mu).abs() < 1e-8, "sup {got} vs mu {mu}");
    }

    #[test]
    fn sup_error_grid_refinement_stable() {
        let zf = ZolotarevFraction::new(2, 0.8).unwrap();
        let (scale, _) = zf.rescaled_solution();
        let bands = zf.genus1_three_band(0, 0.4, 0.9).unwrap();
        let f = |x: f64| scale * zf.eval_real(x).unwrap();
        let a = sup_error(&f, &bands, 128).unwrap();
        let b = sup_error(&f, &bands, 256).unwrap();
        assert!((a - b).abs() < 1e-10);
    }

    #[test]
    fn alternation_of_rescaled_zolotarev() {
        let zf = ZolotarevFraction::new(4, 0.5).unwrap();
        let (scale, mu) = zf.rescaled_solution();
        let bands = zf.genus1_three_band(1, 1.25, 1.75).unwrap();
        let f = |x: f64| scale * zf.eval_real(x).unwrap();
        let (pts, count, ok) = alternation_points(&f, &bands, mu).unwrap();
        assert_eq!(count, 2 * 4 + 2);
        assert!(ok);
        assert!(pts.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn alternation_of_constant_flagged_degenerate() {
        let bands = test_bands();
        // constant 0.5: error on passbands -0.5, on stopband 1.5;
        // touches only the stopband envelope, count collapses
        let f = |_x: f64| 0.5;
        let mu = sup_error(&f, &bands, 64).unwrap();
        let (_, count, _) = alternation_points(&f, &bands, mu).unwrap();
        assert!(count <= 1);
    }

    #[test]
    fn topological_class_of_zolotarev_embedding() {
        for n in [2u32, 3, 5] {
            let zf = ZolotarevFraction::new(n, 0.5).unwrap();
            let bands = zf.genus1_three_band(1, 1.3, 1.6).unwrap();
            let rf = zf.as_rational().unwrap();
            let sigma = topological_class(&rf, &bands).unwrap();
            assert_eq!(sigma, [1, 0, ((n + 1) % 2) as u8], "n = {n}");
            let total: u8 = sigma.iter().sum();
            assert_eq!(total % 2, (n % 2) as u8);
        }
    }

    #[test]
    fn topological_class_needs_small_deviation() {
        let bands = test_bands();
        let rf = RationalFunction::new(vec![0.0, 0.0, 0.0, 5.0], vec![1.0]).unwrap();
        assert!(topological_class(&rf, &bands).is_err());
    }

    #[test]
    fn extremality_of_zolotarev_is_one() {
        for (n, t) in [(2u32, 0.6), (3, 0.5), (5, 0.4)] {
            let zf = ZolotarevFraction::new(n, t).unwrap();
            let rf = zf.as_rational().unwrap();
            let g = extremality_number(&rf, &zf.mod_small).unwrap();
            assert_eq!(g, 1, "Z_{n} at t = {t}");
        }
    }

    #[test]
    fn extended_bands_of_zolotarev_fill_the_lacuna() {
        let zf = ZolotarevFraction::new(3, 0.6).unwrap();
        let (scale, mu) = zf.rescaled_solution();
        let bands = zf.genus1_three_band(1, 1.3, 1.7).unwrap();
        let f = |x: f64| scale * zf.eval_real(x).unwrap();
        let ext = extended_bands(&f, &bands, mu);
        // lacuna disappears: E-sharp is two segments
        assert_eq!(ext.len(), 2, "expected two segments, got {ext:?}");
        assert!(check_theorem1(&ext, &bands));
        // extension always contains the bands
        for band in bands.bands() {
            assert!(ext
                .iter()
                .any(|seg| seg.lo <= band.lo + 1e-9 && seg.hi >= band.hi - 1e-9));
        }
    }

    #[test]
    fn theorem1_violated_by_ripple_in_t2() {
        // T5 on [-2.5, 2.5] touches the envelope six times; hug three
        // touches with bands and leave the others in the gaps
        let t5 = |x: f64| {
            let u: f64 = x / 2.5;
            16.0 * u.powi(5) - 20.0 * u.powi(3) + 5.0 * u
        };
        let bands = BandSystem::new(
            Interval::new(-0.9, -0.65),
            Interval::new(0.65, 0.9),
            Interval::new(2.4, 2.5),
        )
        .unwrap();
        let mu = sup_error(&t5, &bands, 128).unwrap();
        assert!(mu < 1.0);
        let ext = extended_bands(&t5, &bands, mu);
        assert!(!check_theorem1(&ext, &bands), "extension {ext:?}");
    }

    #[test]
    fn theorem1_trivial_cases() {
        let bands = test_bands();
        let ext = bands.bands().to_vec();
        assert!(check_theorem1(&ext, &bands));
        // a single extra piece in the lacuna is allowed
        let mut with_fake = ext.clone();
        with_fake.push(Interval::new(1.6, 1.8));
        assert!(check_theorem1(&with_fake, &bands));
        // a piece in T1 is not
        let mut bad = ext;
        bad.push(Interval::new(0.0, 0.2));
        assert!(!check_theorem1(&bad, &bands));
    }

    #[test]
    fn rational_fit_exact_recovery_and_underfit() {
        let target = RationalFunction::new(vec![0.5, 1.0, -0.25], vec![1.0, 0.0, 0.5]).unwrap();
        let samples: Vec<(f64, f64)> = (0..24)
            .map(|i| {
                let x = -2.0 + 4.0 * i as f64 / 23.0;
                (x, target.eval(x))
            })
            .collect();
        let (_, resid) = rational_fit(&samples, 2).unwrap();
        assert!(resid < 1e-9, "residual {resid}");
        let (_, resid1) = rational_fit(&samples, 1).unwrap();
        assert!(resid1 > 1e-4, "degree-1 fit should fail, got {resid1}");
    }

    #[test]
    fn rational_fit_zolotarev_samples() {
        let zf = ZolotarevFraction::new(3, 0.5).unwrap();
        let b = zf.mod_big.kinv;
        let samples: Vec<(f64, f64)> = (0..30)
            .map(|i| {
                let x = -b + 2.0 * b * i as f64 / 29.0;
                (x, zf.eval_real(x).unwrap())
            })
            .collect();
        let (rf, resid) = rational_fit(&samples, 3).unwrap();
        assert!(resid < 1e-7, "residual {resid}");
        assert_eq!(rf.degree(), 3);
    }
}
