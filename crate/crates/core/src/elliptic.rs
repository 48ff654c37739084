//! Jacobi theta functions, elliptic sine and the rectangle developing map.
//!
//! Everything here works with a purely imaginary modulus `tau = i*t`,
//! `t > 0`, represented by the nome `q = exp(-pi*t)`.  The normalisation
//! is fixed by two identities used throughout the crate:
//!
//! ```text
//! K = (pi/2) * theta3(0)^2
//! x(u) = sn(K*u) = (theta3/theta2) * theta1(u/2) / theta0(u/2)
//! ```
//!
//! so that `x` maps the open rectangle `(-1,1) x (0,t)` conformally onto
//! the upper half plane with -1, 0, 1 fixed and `x(1 + i t) = 1/k`.
//! The theta argument is in half-period units: the series for `theta1(v)`
//! carries `sin((2n+1)*pi*v)`, i.e. our `theta0` is the function usually
//! written `theta4` (checked against the sn product in the tests below).

use crate::error::{Error, Result};
use num_complex::Complex64;

/// Relative truncation bound for theta series tails.
const THETA_TAIL: f64 = 1e-16;

/// Nomes above this collapse too slowly for a fixed-length series;
/// corresponds to t below ~0.034, far outside the regime of interest.
const Q_MAX: f64 = 0.9;

/// Purely imaginary elliptic modulus `tau = i*t` with derived constants.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct EllipticModulus {
    /// t = |tau| > 0
    pub t: f64,
    /// nome q = exp(-pi t), in (0,1)
    pub q: f64,
    /// complete elliptic integral K(k)
    pub big_k: f64,
    /// 1/k = (theta3/theta2)^2 > 1
    pub kinv: f64,
}

impl EllipticModulus {
    /// The elliptic modulus k in (0,1).
    pub fn k(&self) -> f64 {
        1.0 / self.kinv
    }
}

/// j-th Jacobi theta function, j in {0,1,2,3}, with theta0 = theta4.
///
/// The argument is in half-period units (series in `sin/cos((2n+1) pi u)`
/// resp. `cos(2 n pi u)`), matching `x(u) = (th3/th2) th1(u/2)/th0(u/2)`.
pub fn theta(j: usize, u: Complex64, q: f64) -> Result<Complex64> {
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::Domain(format!("nome must be in (0,1), got {q}")));
    }
    if q > Q_MAX {
        return Err(Error::Domain(format!(
            "nome {q} > {Q_MAX}: modulus too small (t < ~0.034) for the series evaluation"
        )));
    }
    let pi_u = std::f64::consts::PI * u;
    // growth of the oscillatory factor off the real axis
    let im = std::f64::consts::PI * u.im.abs();
    let mut sum;
    match j {
        0 | 3 => {
            // 1 + 2 sum_{n>=1} (+-1)^n q^{n^2} cos(2 n pi u)
            sum = Complex64::new(1.0, 0.0);
            let sign = if j == 0 { -1.0 } else { 1.0 };
            let mut s = 1.0;
            for n in 1..400 {
                s *= sign;
                let term = 2.0 * q.powi((n * n) as i32) * s * (2.0 * (n as f64) * pi_u).cos();
                sum += term;
                // bound the tail by the q-power envelope; the trig factor
                // alone may vanish at isolated points
                let envelope = 2.0 * q.powi((n * n) as i32) * (2.0 * n as f64 * im).exp();
                if envelope < THETA_TAIL * (sum.norm() + 1.0) {
                    break;
                }
            }
        }
        1 | 2 => {
            // theta1 = 2 sum (-1)^n q^{(n+1/2)^2} sin((2n+1) pi u)
            // theta2 = 2 sum          q^{(n+1/2)^2} cos((2n+1) pi u)
            sum = Complex64::new(0.0, 0.0);
            let mut s = 1.0;
            for n in 0..400 {
                let e = (n as f64 + 0.5) * (n as f64 + 0.5);
                let osc = if j == 1 {
                    ((2 * n + 1) as f64 * pi_u).sin()
                } else {
                    ((2 * n + 1) as f64 * pi_u).cos()
                };
                let term = 2.0 * q.powf(e) * s * osc;
                sum += term;
                let envelope = 2.0 * q.powf(e) * ((2 * n + 1) as f64 * im).exp();
                if envelope < THETA_TAIL * (sum.norm() + 1.0) {
                    break;
                }
                if j == 1 {
                    s = -s;
                }
            }
        }
        _ => return Err(Error::Domain(format!("theta index must be 0..3, got {j}"))),
    }
    Ok(sum)
}

fn theta_const(j: usize, q: f64) -> Result<f64> {
    Ok(theta(j, Complex64::new(0.0, 0.0), q)?.re)
}

/// Build the modulus record for `tau = i*t`.
pub fn modulus_from_t(t: f64) -> Result<EllipticModulus> {
    if !(t > 0.0) {
        return Err(Error::Domain(format!("t must be positive, got {t}")));
    }
    let q = (-std::f64::consts::PI * t).exp();
    if q > Q_MAX {
        return Err(Error::Domain(format!(
            "t = {t} too small: nome {q} > {Q_MAX}"
        )));
    }
    let th2 = theta_const(2, q)?;
    let th3 = theta_const(3, q)?;
    let big_k = std::f64::consts::FRAC_PI_2 * th3 * th3;
    let kinv = (th3 / th2) * (th3 / th2);
    Ok(EllipticModulus { t, q, big_k, kinv })
}

/// Inverse of `t -> 1/k(i t)`: recover t from a modulus value.
///
/// Uses the AGM form of K: t = K(k') / K(k).
pub fn t_from_kinv(kinv: f64) -> Result<f64> {
    if !(kinv > 1.0) {
        return Err(Error::Domain(format!("kinv must exceed 1, got {kinv}")));
    }
    let k = 1.0 / kinv;
    let kp = (1.0 - k * k).sqrt();
    Ok(agm_k(kp) / agm_k(k))
}

/// Complete elliptic integral K(k) by the arithmetic-geometric mean.
pub fn agm_k(k: f64) -> f64 {
    let mut a = 1.0;
    let mut b = (1.0 - k * k).sqrt();
    for _ in 0..60 {
        if (a - b).abs() < 1e-17 * a {
            break;
        }
        let an = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = an;
    }
    std::f64::consts::FRAC_PI_2 / a
}

/// Marker for a pole hit: the point at infinity on the Riemann sphere.
pub fn infinity_marker() -> Complex64 {
    Complex64::new(f64::INFINITY, f64::INFINITY)
}

pub fn is_infinite(z: Complex64) -> bool {
    !z.re.is_finite() || !z.im.is_finite()
}

/// Reduce u modulo the period lattice (4, 2 i t) of the map `x`.
fn reduce_u(u: Complex64, t: f64) -> Complex64 {
    let mut v = u;
    v.re -= 4.0 * (v.re / 4.0).round();
    v.im -= 2.0 * t * (v.im / (2.0 * t)).round();
    v
}

/// The rectangle developing map `x(u|tau) = sn(K u)`.
///
/// Maps the open rectangle `(-1,1) x (0,t)` onto the upper half plane
/// with -1, 0, 1 fixed; real and strictly increasing on (-1,1);
/// `x(1 + i t) = kinv`.  Poles of sn return the infinity marker.
pub fn x_map(u: Complex64, md: &EllipticModulus) -> Complex64 {
    let v = reduce_u(u, md.t) * 0.5;
    let th1 = theta(1, v, md.q).expect("nome validated at construction");
    let th0 = theta(0, v, md.q).expect("nome validated at construction");
    // th0 vanishes exactly at the poles of sn
    if th0.norm() < 1e-13 * (th1.norm() + 1.0) {
        return infinity_marker();
    }
    Complex64::new(md.kinv.sqrt(), 0.0) * th1 / th0
}

/// d/du of `x_map` = K cn(Ku) dn(Ku), via the theta quotients
/// cn = (th0/th2) th2(v)/th0(v), dn = (th0/th3) th3(v)/th0(v).
pub fn x_map_deriv(u: Complex64, md: &EllipticModulus) -> Complex64 {
    let v = reduce_u(u, md.t) * 0.5;
    let th0v = theta(0, v, md.q).expect("validated");
    if th0v.norm() < 1e-13 {
        return infinity_marker();
    }
    let th2v = theta(2, v, md.q).expect("validated");
    let th3v = theta(3, v, md.q).expect("validated");
    let th0 = theta_const(0, md.q).expect("validated");
    let th2 = theta_const(2, md.q).expect("validated");
    let th3 = theta_const(3, md.q).expect("validated");
    let cn = (th0 / th2) * th2v / th0v;
    let dn = (th0 / th3) * th3v / th0v;
    md.big_k * cn * dn
}

/// Carlson symmetric integral RF for complex arguments off the negative
/// real axis (duplication algorithm with principal square roots).
fn carlson_rf(mut x: Complex64, mut y: Complex64, mut z: Complex64) -> Complex64 {
    for _ in 0..120 {
        let sx = x.sqrt();
        let sy = y.sqrt();
        let sz = z.sqrt();
        let lam = sx * sy + sy * sz + sz * sx;
        x = 0.25 * (x + lam);
        y = 0.25 * (y + lam);
        z = 0.25 * (z + lam);
        let mu = (x + y + z) / 3.0;
        let eps = ((x - mu).norm().max((y - mu).norm()).max((z - mu).norm())) / mu.norm();
        if eps < 1e-14 {
            break;
        }
    }
    let mu = (x + y + z) / 3.0;
    let dx = (mu - x) / mu;
    let dy = (mu - y) / mu;
    let dz = (mu - z) / mu;
    let e2 = dx * dy + dy * dz + dz * dx;
    let e3 = dx * dy * dz;
    (Complex64::new(1.0, 0.0) + e2 * (e2 / 24.0 - 0.1) - e3 / 14.0 + e2 * e3 * 3.0 / 44.0)
        / mu.sqrt()
}

/// Incomplete elliptic integral F(phi, k) for real phi in [-pi/2, pi/2].
fn ellip_f(phi: f64, k: f64) -> f64 {
    let s = phi.sin();
    let c2 = phi.cos() * phi.cos();
    s * carlson_rf(
        Complex64::new(c2, 0.0),
        Complex64::new(1.0 - k * k * s * s, 0.0),
        Complex64::new(1.0, 0.0),
    )
    .re
}

/// Inverse of `x_map`: the unique u in the closed rectangle
/// `[-1,1] x [0,t]` with `x_map(u) = x`, for x in the closed upper
/// half plane.  Boundary ties resolve toward nonnegative real part.
pub fn inverse_x(x: Complex64, md: &EllipticModulus) -> Result<Complex64> {
    if x.im < -1e-9 * (1.0 + x.norm()) {
        return Err(Error::Domain(format!(
            "inverse_x needs Im x >= 0, got {x}"
        )));
    }
    let k = md.k();
    let guess = if is_infinite(x) {
        Complex64::new(0.0, md.t)
    } else if x.im.abs() <= 1e-8 * (1.0 + x.norm()) {
        // real x: invert along the rectangle boundary, then restore the
        // small imaginary part with one derivative step before polishing
        let xr = x.re;
        let u0 = if xr.abs() <= 1.0 {
            Complex64::new(ellip_f(xr.asin(), k) / md.big_k, 0.0)
        } else if xr.abs() <= md.kinv {
            // right/left edge: x = +-1/dn(s K, k'), s in [0, t]
            let kp = (1.0 - k * k).sqrt();
            let sn2 = (1.0 - 1.0 / (xr * xr)) / (kp * kp);
            let s = ellip_f(sn2.sqrt().min(1.0).asin(), kp) / md.big_k;
            Complex64::new(xr.signum(), s)
        } else {
            // top edge: x = 1/(k sn(r K)), r in [-1,1]
            let r = ellip_f((1.0 / (k * xr)).asin(), k) / md.big_k;
            Complex64::new(r, md.t)
        };
        let d = x_map_deriv(u0, md);
        if d.norm() > 1e-8 {
            u0 + Complex64::new(0.0, x.im) / d
        } else {
            u0
        }
    } else {
        let x2 = x * x;
        let one = Complex64::new(1.0, 0.0);
        x * carlson_rf(one - x2, one - k * k * x2, one) / md.big_k
    };
    newton_polish(x, guess, md)
}

fn clamp_to_rectangle(u: Complex64, t: f64) -> Complex64 {
    Complex64::new(u.re.clamp(-1.0, 1.0), u.im.clamp(0.0, t))
}

fn newton_polish(x: Complex64, guess: Complex64, md: &EllipticModulus) -> Result<Complex64> {
    let scale = 1.0 + x.norm();
    if is_infinite(x) {
        return Ok(Complex64::new(0.0, md.t));
    }
    let mut u = clamp_to_rectangle(guess, md.t);
    let mut best = u;
    let mut best_res = f64::INFINITY;
    for _ in 0..60 {
        let fx = x_map(u, md);
        if is_infinite(fx) {
            u += Complex64::new(1e-9, 1e-9);
            continue;
        }
        let res = (fx - x).norm();
        if res < best_res {
            best_res = res;
            best = u;
        }
        if res <= 1e-13 * scale {
            break;
        }
        let d = x_map_deriv(u, md);
        if is_infinite(d) || d.norm() < 1e-300 {
            break;
        }
        let mut step = (fx - x) / d;
        // keep the iterate inside the closed rectangle
        let cap = 0.5 * (1.0 + md.t);
        if step.norm() > cap {
            step *= cap / step.norm();
        }
        u = clamp_to_rectangle(u - step, md.t);
    }
    if best_res > 1e-12 * scale {
        return Err(Error::NoConvergence {
            what: format!("inverse_x at x = {x}"),
            residual: best_res,
        });
    }
    // boundary tie: prefer nonnegative real part
    if best.re.abs() < 1e-15 {
        best.re = 0.0;
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn theta1_is_odd() {
        let q = 0.3;
        assert_eq!(theta(1, c(0.0, 0.0), q).unwrap().norm(), 0.0);
        let u = c(0.37, 0.0);
        let a = theta(1, u, q).unwrap();
        let b = theta(1, -u, q).unwrap();
        assert_relative_eq!(a.re, -b.re, epsilon = 1e-15);
    }

    #[test]
    fn theta3_partial_sum() {
        // independent oracle: direct partial summation of 1 + 2 sum q^{n^2}
        let q: f64 = 0.1;
        let mut expect = 1.0;
        for n in 1..=6 {
            expect += 2.0 * q.powi(n * n);
        }
        let got = theta(3, c(0.0, 0.0), q).unwrap().re;
        assert_relative_eq!(got, expect, epsilon = 1e-15);
        assert_relative_eq!(got, 1.2002000020000002, epsilon = 1e-15);
    }

    #[test]
    fn theta_rejects_bad_nome() {
        assert!(theta(3, c(0.0, 0.0), 1.2).is_err());
        assert!(theta(3, c(0.0, 0.0), 0.95).is_err());
        assert!(theta(3, c(0.0, 0.0), -0.1).is_err());
    }

    #[test]
    fn jacobi_identity_theta_constants() {
        for &q in &[0.05, 0.1, 0.3] {
            let t0 = theta(0, c(0.0, 0.0), q).unwrap().re;
            let t2 = theta(2, c(0.0, 0.0), q).unwrap().re;
            let t3 = theta(3, c(0.0, 0.0), q).unwrap().re;
            assert!((t3.powi(4) - t2.powi(4) - t0.powi(4)).abs() < 1e-13 * t3.powi(4));
        }
    }

    #[test]
    fn modulus_lemniscatic_point() {
        // k(i) = 1/sqrt(2) is the classical check point
        let md = modulus_from_t(1.0).unwrap();
        assert_relative_eq!(md.kinv, 2f64.sqrt(), epsilon = 1e-14);
        // K(1/sqrt2) = 1.8540746773013719...
        assert_relative_eq!(md.big_k, 1.854074677301372, epsilon = 1e-14);
    }

    #[test]
    fn modulus_asymptotics_large_t() {
        let md = modulus_from_t(10.0).unwrap();
        assert_relative_eq!(md.q, (-10.0 * std::f64::consts::PI).exp(), epsilon = 1e-16);
        // kinv ~ 1/(4 sqrt q) to leading order
        assert_relative_eq!(md.kinv, 1.0 / (4.0 * md.q.sqrt()), max_relative = 1e-10);
        // K -> pi/2 as q -> 0
        assert_relative_eq!(md.big_k, std::f64::consts::FRAC_PI_2, max_relative = 1e-12);
    }

    #[test]
    fn modulus_rejects_nonpositive_t() {
        assert!(modulus_from_t(0.0).is_err());
        assert!(modulus_from_t(-2.0).is_err());
    }

    #[test]
    fn kinv_monotone_in_t() {
        let mut prev = 0.0;
        for i in 1..40 {
            let t = 0.1 + 0.1 * i as f64;
            let md = modulus_from_t(t).unwrap();
            assert!(md.kinv > prev);
            prev = md.kinv;
        }
    }

    #[test]
    fn t_from_kinv_round_trip() {
        for &t in &[0.3, 0.7, 1.0, 2.5] {
            let md = modulus_from_t(t).unwrap();
            assert_relative_eq!(t_from_kinv(md.kinv).unwrap(), t, max_relative = 1e-12);
        }
    }

    #[test]
    fn x_map_normalization() {
        let md = modulus_from_t(0.7).unwrap();
        assert!(x_map(c(0.0, 0.0), &md).norm() < 1e-15);
        assert_relative_eq!(x_map(c(1.0, 0.0), &md).re, 1.0, epsilon = 1e-14);
        assert_relative_eq!(x_map(c(-1.0, 0.0), &md).re, -1.0, epsilon = 1e-14);
        let corner = x_map(c(1.0, md.t), &md);
        assert_relative_eq!(corner.re, md.kinv, epsilon = 1e-13);
        assert!(corner.im.abs() < 1e-13);
    }

    #[test]
    fn x_map_small_q_is_sine() {
        let md = modulus_from_t(10.0).unwrap();
        let got = x_map(c(0.5, 0.0), &md).re;
        assert_relative_eq!(got, (std::f64::consts::PI / 4.0).sin(), epsilon = 1e-12);
    }

    #[test]
    fn x_map_increasing_on_base() {
        let md = modulus_from_t(0.5).unwrap();
        let mut prev = f64::NEG_INFINITY;
        for i in 0..=1000 {
            let u = -1.0 + 2.0 * i as f64 / 1000.0;
            let v = x_map(c(u, 0.0), &md).re;
            assert!(v > prev);
            prev = v;
        }
    }

    #[test]
    fn x_map_periodicity() {
        let md = modulus_from_t(0.6).unwrap();
        for &(re, im) in &[(0.3, 0.2), (-0.8, 0.5), (0.1, 0.05)] {
            let u = c(re, im);
            let a = x_map(u, &md);
            let b = x_map(u + c(4.0, 0.0), &md);
            let d = x_map(u + c(0.0, 2.0 * md.t), &md);
            assert!((a - b).norm() < 1e-12 * (1.0 + a.norm()));
            assert!((a - d).norm() < 1e-12 * (1.0 + a.norm()));
        }
    }

    #[test]
    fn x_map_pole_reports_infinity() {
        let md = modulus_from_t(0.8).unwrap();
        assert!(is_infinite(x_map(c(0.0, md.t), &md)));
    }

    #[test]
    fn inverse_x_fixed_points() {
        let md = modulus_from_t(0.7).unwrap();
        for &(x, u) in &[(0.0, 0.0), (1.0, 1.0), (-1.0, -1.0)] {
            let got = inverse_x(c(x, 0.0), &md).unwrap();
            assert!((got - c(u, 0.0)).norm() < 1e-12);
        }
        let corner = inverse_x(c(md.kinv, 0.0), &md).unwrap();
        assert!((corner - c(1.0, md.t)).norm() < 1e-10);
    }

    #[test]
    fn inverse_x_round_trip_real_band() {
        let md = modulus_from_t(0.45).unwrap();
        // 100 deterministic pseudo-random points in [-1, 1]
        let mut s = 0.123456789_f64;
        for _ in 0..100 {
            s = (s * 9301.0 + 49297.0) % 233280.0 / 233280.0;
            let x = c(2.0 * s - 1.0, 0.0);
            let u = inverse_x(x, &md).unwrap();
            let back = x_map(u, &md);
            assert!((back - x).norm() <= 1e-12 * (1.0 + x.norm()));
        }
    }

    #[test]
    fn inverse_x_round_trip_complex() {
        let md = modulus_from_t(0.7).unwrap();
        let pts = [
            c(0.3, 0.5),
            c(-0.8, 0.1),
            c(0.0, 2.0),
            c(1.05, 0.3),
            c(5.0, 4.0),
            c(-30.0, 0.2),
            c(2.0, 1e-6),
        ];
        for &x in &pts {
            let u = inverse_x(x, &md).unwrap();
            assert!(u.re >= -1.0 - 1e-9 && u.re <= 1.0 + 1e-9);
            assert!(u.im >= -1e-9 && u.im <= md.t + 1e-9);
            let back = x_map(u, &md);
            assert!(
                (back - x).norm() <= 1e-12 * (1.0 + x.norm()),
                "x = {x}, residual {}",
                (back - x).norm()
            );
        }
    }

    #[test]
    fn inverse_x_real_edges() {
        let md = modulus_from_t(0.55).unwrap();
        // side edge: x in (1, kinv)
        let x = c(0.5 * (1.0 + md.kinv), 0.0);
        let u = inverse_x(x, &md).unwrap();
        assert_relative_eq!(u.re, 1.0, epsilon = 1e-10);
        assert!((x_map(u, &md) - x).norm() < 1e-12 * (1.0 + x.norm()));
        // top edge: x > kinv
        let x = c(3.0 * md.kinv, 0.0);
        let u = inverse_x(x, &md).unwrap();
        assert_relative_eq!(u.im, md.t, epsilon = 1e-10);
        assert!((x_map(u, &md) - x).norm() < 1e-12 * (1.0 + x.norm()));
        // negative far real axis
        let x = c(-3.0 * md.kinv, 0.0);
        let u = inverse_x(x, &md).unwrap();
        assert!(u.re < 0.0);
        assert!((x_map(u, &md) - x).norm() < 1e-12 * (1.0 + x.norm()));
    }

    #[test]
    fn inverse_x_rejects_lower_half_plane() {
        let md = modulus_from_t(0.7).unwrap();
        assert!(inverse_x(c(0.3, -0.4), &md).is_err());
    }
}
