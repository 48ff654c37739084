//! Zolotarev fractions: the degree-n rational maps intertwining the
//! rectangle developing maps, `Z_n(x(u|n tau)) = x(u|tau)`, their bands,
//! deviation, coefficient form, and the genus-1 three-band systems
//! obtained by removing a quantum-interior segment from a passband.

use crate::bands::{BandSystem, Interval};
use crate::elliptic::{
    infinity_marker, inverse_x, is_infinite, modulus_from_t, x_map, EllipticModulus,
};
use crate::error::{Error, Result};
use crate::rational::{fit_rational, RationalFunction};
use num_complex::Complex64;

/// Degree-n Zolotarev fraction over the modulus pair (tau, n tau).
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct ZolotarevFraction {
    pub n: u32,
    pub mod_small: EllipticModulus,
    pub mod_big: EllipticModulus,
}

impl ZolotarevFraction {
    pub fn new(n: u32, t: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("degree n must be positive".into()));
        }
        let mod_small = modulus_from_t(t)?;
        let mod_big = modulus_from_t(n as f64 * t)?;
        Ok(ZolotarevFraction {
            n,
            mod_small,
            mod_big,
        })
    }

    /// Z_n(x) = x( x^{-1}(x | n tau) | tau ).
    pub fn eval(&self, x: Complex64) -> Result<Complex64> {
        let u = inverse_x(x, &self.mod_big)?;
        Ok(x_map(u, &self.mod_small))
    }

    /// Evaluation on the real axis; poles come back as +-infinity.
    pub fn eval_real(&self, x: f64) -> Result<f64> {
        let v = self.eval(Complex64::new(x, 0.0))?;
        if is_infinite(v) {
            return Ok(f64::INFINITY);
        }
        Ok(v.re)
    }

    /// The two work bands E+- = +-[1, 1/k(n tau)].
    pub fn bands(&self) -> (Interval, Interval) {
        (
            Interval::new(-self.mod_big.kinv, -1.0),
            Interval::new(1.0, self.mod_big.kinv),
        )
    }

    /// Scale factor 2k/(k+1) and deviation mu = (1-k)/(1+k), k = k(tau):
    /// `scale * Z_n` approximates the band indicator with sup error mu.
    pub fn rescaled_solution(&self) -> (f64, f64) {
        let k = self.mod_small.k();
        (2.0 * k / (k + 1.0), (1.0 - k) / (1.0 + k))
    }

    /// Locations of the n poles: x(u | n tau) at u in (2Z+1) tau, plus
    /// the point at infinity for odd n.  Finite poles are purely
    /// imaginary and come in conjugate pairs.
    pub fn pole_locations(&self) -> Vec<Complex64> {
        let t = self.mod_small.t;
        let mut out = Vec::new();
        let mut j = 1;
        while j <= self.n {
            let u = Complex64::new(0.0, j as f64 * t);
            let x = x_map(u, &self.mod_big);
            if is_infinite(x) {
                out.push(infinity_marker());
            } else {
                out.push(x);
                out.push(x.conj());
            }
            j += 2;
        }
        out
    }

    /// Coefficient form, fitted at 2n+2 Chebyshev-distributed samples on
    /// the pole-free interval [-1/k(n tau), 1/k(n tau)] and validated on
    /// a 4n-point grid to relative 1e-9.
    pub fn as_rational(&self) -> Result<RationalFunction> {
        let n = self.n as usize;
        let b = self.mod_big.kinv;
        let m = 2 * n + 2;
        let mut samples = Vec::with_capacity(m);
        for i in 0..m {
            let theta = std::f64::consts::PI * (i as f64 + 0.5) / m as f64;
            let x = b * theta.cos();
            samples.push((x, self.eval_real(x)?));
        }
        let (rf, _) = fit_rational(&samples, n)?;
        // residual check on a denser grid, relative to the value scale
        let grid = (4 * n).max(8);
        let mut worst = 0.0_f64;
        for i in 0..=grid {
            let x = -b + 2.0 * b * i as f64 / grid as f64;
            let want = self.eval_real(x)?;
            if !want.is_finite() {
                continue;
            }
            let got = rf.eval(x);
            worst = worst.max((got - want).abs() / (1.0 + want.abs()));
        }
        if worst > 1e-9 {
            return Err(Error::IllConditioned {
                what: format!("as_rational for Z_{n}"),
                residual: worst,
            });
        }
        Ok(rf)
    }

    /// Three-band system from the genus-1 construction: remove the
    /// segment between heights v1 and v2 (inside one quantum
    /// [m, m+1]) from the passband.
    pub fn genus1_three_band(&self, m: u32, v1: f64, v2: f64) -> Result<BandSystem> {
        let n = self.n;
        if m >= n {
            return Err(Error::Domain(format!("m must be in [0, n-1], got {m}")));
        }
        if !(m as f64 <= v1 && v1 < v2 && v2 <= m as f64 + 1.0) {
            return Err(Error::Domain(format!(
                "need m <= v1 < v2 <= m+1, got v1 = {v1}, v2 = {v2}, m = {m}"
            )));
        }
        if v1 == 0.0 && m == 0 {
            return Err(Error::Domain(
                "v1 = 0 collapses the first passband to a point".into(),
            ));
        }
        if v2 == n as f64 && m == n - 1 {
            return Err(Error::Domain(
                "v2 = n collapses the second passband to a point".into(),
            ));
        }
        let t = self.mod_small.t;
        let xv = |v: f64| x_map(Complex64::new(1.0, v * t), &self.mod_big).re;
        BandSystem::new(
            Interval::new(-self.mod_big.kinv, -1.0),
            Interval::new(1.0, xv(v1)),
            Interval::new(xv(v2), self.mod_big.kinv),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn degree_one_is_identity() {
        let zf = ZolotarevFraction::new(1, 0.8).unwrap();
        for &x in &[-3.0, -1.0, -0.2, 0.0, 0.7, 1.0, 2.5] {
            assert_relative_eq!(zf.eval_real(x).unwrap(), x, max_relative = 1e-11);
        }
    }

    #[test]
    fn corner_values() {
        for n in [2u32, 3] {
            let zf = ZolotarevFraction::new(n, 0.4).unwrap();
            assert_relative_eq!(zf.eval_real(1.0).unwrap(), 1.0, epsilon = 1e-11);
            assert_relative_eq!(zf.eval_real(-1.0).unwrap(), -1.0, epsilon = 1e-11);
            let at_corner = zf.eval_real(zf.mod_big.kinv).unwrap();
            let expect = if n % 2 == 1 {
                zf.mod_small.kinv
            } else {
                1.0
            };
            assert_relative_eq!(at_corner, expect, epsilon = 1e-10);
        }
    }

    #[test]
    fn bands_and_monotonicity_of_kinv() {
        let zf = ZolotarevFraction::new(1, 1.0).unwrap();
        let (em, ep) = zf.bands();
        assert_relative_eq!(ep.lo, 1.0);
        assert_relative_eq!(ep.hi, 2f64.sqrt(), epsilon = 1e-13);
        assert_relative_eq!(em.lo, -ep.hi);
        assert_relative_eq!(em.hi, -ep.lo);
        for n in 2..6u32 {
            let zf = ZolotarevFraction::new(n, 0.5).unwrap();
            assert!(zf.mod_big.kinv > zf.mod_small.kinv);
        }
    }

    #[test]
    fn rescaled_deviation_on_dense_grid() {
        // independent oracle: dense grid evaluation of |scale*Z - S_E|
        let zf = ZolotarevFraction::new(3, 1.0).unwrap();
        let (scale, mu) = zf.rescaled_solution();
        let (em, ep) = zf.bands();
        let mut worst = 0.0_f64;
        for band in [em, ep] {
            let s = if band.lo < 0.0 { -1.0 } else { 1.0 };
            for i in 0..=4000 {
                let x = band.lo + band.len() * i as f64 / 4000.0;
                let err = (scale * zf.eval_real(x).unwrap() - s).abs();
                worst = worst.max(err);
            }
        }
        assert!((worst - mu).abs() < 1e-8, "worst {worst} vs mu {mu}");
    }

    #[test]
    fn envelope_touch_count() {
        // n+1 envelope touches per band after rescaling, 2n+2 total
        let zf = ZolotarevFraction::new(4, 0.5).unwrap();
        let (scale, mu) = zf.rescaled_solution();
        let (em, ep) = zf.bands();
        let mut touches = 0;
        for band in [em, ep] {
            let s = if band.lo < 0.0 { -1.0 } else { 1.0 };
            let grid = 6000;
            let mut above = false;
            for i in 0..=grid {
                let x = band.lo + band.len() * i as f64 / grid as f64;
                let err = (scale * zf.eval_real(x).unwrap() - s).abs();
                let hit = err >= (1.0 - 1e-6) * mu;
                if hit && !above {
                    touches += 1;
                }
                above = hit;
            }
        }
        assert_eq!(touches, 2 * 4 + 2);
    }

    #[test]
    fn rational_form_degree_one() {
        let zf = ZolotarevFraction::new(1, 0.9).unwrap();
        let rf = zf.as_rational().unwrap();
        assert_eq!(rf.degree(), 1);
        assert!(rf.numerator[0].abs() < 1e-10);
        assert_relative_eq!(rf.numerator[1] / rf.denominator[0], 1.0, epsilon = 1e-9);
    }

    #[test]
    fn rational_form_degree_two_poles() {
        let zf = ZolotarevFraction::new(2, 0.6).unwrap();
        let rf = zf.as_rational().unwrap();
        assert_eq!(rf.degree(), 2);
        assert!(rf.is_coprime(1e-9));
        let mut fitted = rf.poles().unwrap();
        fitted.sort_by(|a, b| a.im.partial_cmp(&b.im).unwrap());
        let mut expect = zf.pole_locations();
        assert_eq!(expect.len(), 2);
        expect.sort_by(|a, b| a.im.partial_cmp(&b.im).unwrap());
        for (f, e) in fitted.iter().zip(expect.iter()) {
            assert!((f - e).norm() < 1e-8, "pole {f} vs {e}");
        }
    }

    #[test]
    fn parity_odd_function() {
        for n in [2u32, 3, 5] {
            let zf = ZolotarevFraction::new(n, 0.5).unwrap();
            for &x in &[0.3, 1.2, 2.0] {
                let a = zf.eval_real(x).unwrap();
                let b = zf.eval_real(-x).unwrap();
                assert_relative_eq!(a, -b, max_relative = 1e-9);
            }
            // odd numerator / even denominator structure
            let rf = zf.as_rational().unwrap();
            let scale = rf
                .numerator
                .iter()
                .chain(rf.denominator.iter())
                .fold(0.0_f64, |m, &c| m.max(c.abs()));
            for (i, &c) in rf.numerator.iter().enumerate() {
                if i % 2 == 0 {
                    assert!(c.abs() < 1e-8 * scale, "even numerator coeff {i} = {c}");
                }
            }
            for (i, &c) in rf.denominator.iter().enumerate() {
                if i % 2 == 1 {
                    assert!(c.abs() < 1e-8 * scale, "odd denominator coeff {i} = {c}");
                }
            }
        }
    }

    #[test]
    fn composition_property() {
        // Z_m at tau composed with Z_n at m*tau equals Z_{mn} at tau
        let t = 0.2;
        let outer = ZolotarevFraction::new(2, t).unwrap();
        let inner = ZolotarevFraction::new(3, 2.0 * t).unwrap();
        let full = ZolotarevFraction::new(6, t).unwrap();
        let (_, ep) = full.bands();
        let mut worst = 0.0_f64;
        for i in 0..50 {
            let x = ep.lo + ep.len() * (i as f64 + 0.5) / 50.0;
            let composed = outer.eval_real(inner.eval_real(x).unwrap()).unwrap();
            let direct = full.eval_real(x).unwrap();
            worst = worst.max((composed - direct).abs());
        }
        assert!(worst < 1e-9, "max discrepancy {worst}");
    }

    #[test]
    fn genus1_bands_and_preconditions() {
        let zf = ZolotarevFraction::new(4, 0.5).unwrap();
        // degenerate v1 = v2 rejected
        assert!(zf.genus1_three_band(1, 1.5, 1.5).is_err());
        // collapse exclusions
        assert!(zf.genus1_three_band(0, 0.0, 0.5).is_err());
        assert!(zf.genus1_three_band(3, 3.2, 4.0).is_err());
        // m out of range
        assert!(zf.genus1_three_band(4, 4.0, 4.5).is_err());
        let bs = zf.genus1_three_band(1, 1.25, 1.75).unwrap();
        assert_relative_eq!(bs.eminus.lo, -zf.mod_big.kinv);
        assert_relative_eq!(bs.e1plus.lo, 1.0);
        assert_relative_eq!(bs.e2plus.hi, zf.mod_big.kinv);
        assert!(bs.e1plus.hi < bs.e2plus.lo);
    }

    #[test]
    fn genus1_alternation_count_survives_split() {
        let zf = ZolotarevFraction::new(3, 0.6).unwrap();
        let bs = zf.genus1_three_band(1, 1.0, 2.0).unwrap();
        let (scale, mu) = zf.rescaled_solution();
        let mut touches = 0;
        for (band, s) in [
            (bs.eminus, -1.0),
            (bs.e1plus, 1.0),
            (bs.e2plus, 1.0),
        ] {
            let grid = 4000;
            let mut above = false;
            for i in 0..=grid {
                let x = band.lo + band.len() * i as f64 / grid as f64;
                let err = (scale * zf.eval_real(x).unwrap() - s).abs();
                let hit = err >= (1.0 - 1e-6) * mu;
                if hit && !above {
                    touches += 1;
                }
                above = hit;
            }
        }
        assert_eq!(touches, 2 * 3 + 2);
    }
}
